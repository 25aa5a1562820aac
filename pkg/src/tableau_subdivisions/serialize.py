#################################################################################
# tableau-subdivisions Copyright (c) 2024, the tableau-subdivisions developers.
# All rights reserved.
#
# Please see the files COPYRIGHT.md and LICENSE.md for full copyright and license
# information, respectively.
#################################################################################
"""
Canonical JSON, exact rationals as text, CSV tables and atomic file writes.
"""

# stdlib
from csv import writer
from fractions import Fraction
from io import TextIOBase
import json
import os
from pathlib import Path
import tempfile
from typing import Any, Iterable, Sequence, Tuple, Union

Rational = Union[int, Fraction]


def canonical_json(value: Any) -> str:
    """Compact JSON with sorted keys and a trailing newline."""
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def render_rational(x: Rational) -> Union[int, str]:
    """Integers stay numbers; other rationals become ``"p/q"`` strings."""
    x = Fraction(x)
    if x.denominator == 1:
        return int(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(x: Union[int, str, Fraction]) -> Fraction:
    if isinstance(x, bool):
        raise ValueError(f"not a rational: {x!r}")
    if isinstance(x, float):
        raise ValueError(f"floats are not accepted as exact values: {x!r}")
    return Fraction(x)


def subset_key(subset: Sequence[int]) -> str:
    return ",".join(str(x) for x in subset)


def parse_subset_key(key: str) -> Tuple[int, ...]:
    return tuple(int(x) for x in key.split(",")) if key else ()


def atomic_write_text(path: Path, text: str) -> None:
    """Write to a temporary sibling and rename it over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def write_csv(
    output: Union[TextIOBase, Path, str], header: Sequence[str], rows: Iterable[Sequence]
) -> int:
    """Write a header row and ``rows`` to a stream or a path.

    Returns:
        Number of rows written, header excluded.
    """
    if isinstance(output, TextIOBase):
        return _write_rows(output, header, rows)
    with Path(output).open("w", newline="") as f:
        return _write_rows(f, header, rows)


def _write_rows(stream, header, rows) -> int:
    csv_output = writer(stream)
    csv_output.writerow(header)
    num = 0
    for row in rows:
        csv_output.writerow(row)
        num += 1
    return num
