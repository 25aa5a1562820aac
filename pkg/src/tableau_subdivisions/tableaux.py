#################################################################################
# tableau-subdivisions Copyright (c) 2024, the tableau-subdivisions developers.
# All rights reserved.
#
# Please see the files COPYRIGHT.md and LICENSE.md for full copyright and license
# information, respectively.
#################################################################################
"""
Rectangular semistandard Young tableaux with k rows and entries in [n].

A tableau is kept in canonical form: every row is a sorted multiset and the
columns are read off by position. Building a tableau from any list of columns
therefore computes the union of the corresponding one-column tableaux.
"""

# stdlib
from collections import Counter
from enum import Enum
from itertools import combinations_with_replacement
import json
import logging
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

# third-party
from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator

_log = logging.getLogger(__name__)

Column = Tuple[int, ...]
Subset = Tuple[int, ...]


class TableauValidationError(ValueError):
    def __init__(
        self, reason: str, row: Optional[int] = None, column: Optional[int] = None
    ):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        msg = f"Invalid tableau: {reason}"
        if where:
            msg += f" ({', '.join(where)})"
        super().__init__(msg)
        self.row = row
        self.column = column


class NotAFactorError(ValueError):
    def __init__(self, reason: str, row: Optional[int] = None):
        msg = f"Not a factor: {reason}"
        if row is not None:
            msg += f" (row {row})"
        super().__init__(msg)
        self.row = row


class DecompositionError(RuntimeError):
    """Raised when the fundamental decomposition is not equivalent to its source."""


class UsageError(ValueError):
    """Raised when an operation is called outside its domain."""


class Tableau(BaseModel):
    """Rectangular semistandard tableau.

    Columns given at construction are treated as one-column tableaux and
    merged row by row, so ``Tableau(k=2, n=4, columns=[(1, 4), (2, 3)])``
    equals ``Tableau(k=2, n=4, columns=[(1, 3), (2, 4)])``.
    """

    model_config = ConfigDict(frozen=True)

    k: int = Field(ge=1)
    n: int = Field(ge=1)
    columns: Tuple[Column, ...] = ()

    @field_validator("n")
    @classmethod
    def validate_n(cls, v, info: ValidationInfo):
        k = info.data.get("k")
        if k is not None and v < k:
            raise ValueError(f"'n' ({v}) must be at least k ({k})")
        return v

    @field_validator("columns")
    @classmethod
    def canonicalize_columns(cls, v, info: ValidationInfo):
        k, n = info.data.get("k"), info.data.get("n")
        if k is None or n is None:
            return v
        for pos, col in enumerate(v, start=1):
            _check_column(col, k, n, position=pos)
        rows = [sorted(col[i] for col in v) for i in range(k)]
        columns = tuple(zip(*rows)) if v else ()
        for pos, col in enumerate(columns, start=1):
            # union of semistandard tableaux stays semistandard
            assert all(
                col[i] < col[i + 1] for i in range(k - 1)
            ), f"row-sorted union lost column strictness at column {pos}"
        return columns

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], k: int, n: int) -> "Tableau":
        return cls(k=k, n=n, columns=tuple(tuple(c) for c in columns))

    @classmethod
    def one_column(cls, col: Sequence[int], n: int) -> "Tableau":
        return cls(k=len(col), n=n, columns=(tuple(col),))

    @classmethod
    def empty(cls, k: int, n: int) -> "Tableau":
        return cls(k=k, n=n, columns=())

    @property
    def rows(self) -> Tuple[Tuple[int, ...], ...]:
        if not self.columns:
            return tuple(() for _ in range(self.k))
        return tuple(zip(*self.columns))

    @property
    def width(self) -> int:
        return len(self.columns)

    def is_empty(self) -> bool:
        return not self.columns

    def row_counters(self) -> List[Counter]:
        return [Counter(row) for row in self.rows]

    def to_text(self) -> str:
        return ";".join(",".join(str(x) for x in row) for row in self.rows)

    def to_json(self) -> str:
        data = {"k": self.k, "n": self.n, "columns": [list(c) for c in self.columns]}
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    def __str__(self):
        return self.to_text() or "1"


def _check_column(col: Sequence[int], k: int, n: int, position: Optional[int] = None):
    if len(col) != k:
        raise TableauValidationError(
            f"column {tuple(col)} has {len(col)} entries, expected {k}", column=position
        )
    for row, x in enumerate(col, start=1):
        if not 1 <= x <= n:
            raise TableauValidationError(
                f"entry {x} not in [1, {n}]", row=row, column=position
            )
    for row in range(1, k):
        if col[row - 1] >= col[row]:
            raise TableauValidationError(
                f"column {tuple(col)} is not strictly increasing",
                row=row + 1,
                column=position,
            )


def parse_tableau(text: str, k: int, n: int) -> Tableau:
    """Parse the row-list text format, e.g. ``"1,2,3;2,5,6;4,7,8"``.

    Args:
        text: Rows top to bottom separated by ``;``, entries by ``,``.
        k: Expected number of rows.
        n: Alphabet bound.

    Returns:
        The validated tableau.

    Raises:
        TableauValidationError: ragged rows, entries outside [n], or content
            that is not semistandard. The message names the row and column.
    """
    raw_rows = [r.strip() for r in text.strip().split(";")]
    if len(raw_rows) != k:
        raise TableauValidationError(f"expected {k} rows, got {len(raw_rows)}")
    rows: List[List[int]] = []
    for i, raw in enumerate(raw_rows, start=1):
        try:
            rows.append([int(x) for x in raw.split(",")] if raw else [])
        except ValueError as err:
            raise TableauValidationError(f"non-integer entry: {err}", row=i) from err
    width = len(rows[0])
    for i, row in enumerate(rows, start=1):
        if len(row) != width:
            raise TableauValidationError(
                f"ragged rows: {len(row)} entries, expected {width}", row=i
            )
        for j, x in enumerate(row, start=1):
            if not 1 <= x <= n:
                raise TableauValidationError(
                    f"entry {x} not in [1, {n}]", row=i, column=j
                )
            if j > 1 and row[j - 2] > x:
                raise TableauValidationError(
                    "row is not weakly increasing", row=i, column=j
                )
    for j in range(width):
        for i in range(1, k):
            if rows[i - 1][j] >= rows[i][j]:
                raise TableauValidationError(
                    "column is not strictly increasing", row=i + 1, column=j + 1
                )
    columns = [tuple(rows[i][j] for i in range(k)) for j in range(width)]
    _log.debug(f"parsed tableau text={text!r} columns={columns}")
    return Tableau.from_columns(columns, k, n)


def _same_shape(s: Tableau, t: Tableau):
    if s.k != t.k or s.n != t.n:
        raise UsageError(
            f"tableaux over different shapes: (k={s.k}, n={s.n}) and (k={t.k}, n={t.n})"
        )


def union(s: Tableau, t: Tableau) -> Tableau:
    """Row-wise multiset union."""
    _same_shape(s, t)
    return Tableau(k=s.k, n=s.n, columns=s.columns + t.columns)


def power(t: Tableau, m: int) -> Tableau:
    return Tableau(k=t.k, n=t.n, columns=t.columns * m)


def _from_row_counters(counters: Sequence[Counter], k: int, n: int) -> Tableau:
    rows = [sorted(c.elements()) for c in counters]
    width = len(rows[0]) if rows else 0
    if any(len(r) != width for r in rows):
        raise NotAFactorError("rows of the quotient have different lengths")
    for j in range(width):
        for i in range(1, k):
            if rows[i - 1][j] >= rows[i][j]:
                raise NotAFactorError(
                    f"quotient is not semistandard at column {j + 1}", row=i + 1
                )
    return Tableau(k=k, n=n, columns=tuple(zip(*rows)) if width else ())


def is_factor(s: Tableau, t: Tableau) -> bool:
    """True when every row multiset of ``s`` is contained in the row of ``t``."""
    _same_shape(s, t)
    return all(
        not (cs - ct) for cs, ct in zip(s.row_counters(), t.row_counters())
    )


def quotient(t: Tableau, s: Tableau) -> Tableau:
    """Remove the rows of ``s`` from the rows of ``t``.

    Raises:
        NotAFactorError: if a row of ``s`` is not contained in the matching row
            of ``t``, or the remaining rows do not form a semistandard tableau.
    """
    _same_shape(s, t)
    remaining = []
    for i, (ct, cs) in enumerate(zip(t.row_counters(), s.row_counters()), start=1):
        if cs - ct:
            missing = sorted((cs - ct).elements())
            raise NotAFactorError(f"entries {missing} missing from {t}", row=i)
        remaining.append(ct - cs)
    return _from_row_counters(remaining, t.k, t.n)


def trivial_column(a: int, k: int) -> Column:
    return tuple(range(a, a + k))


def trivial_tableau(a: int, k: int, n: int) -> Tableau:
    if not 1 <= a <= n - k + 1:
        raise UsageError(f"no trivial column starting at {a} for k={k}, n={n}")
    return Tableau(k=k, n=n, columns=(trivial_column(a, k),))


def trivial_multiplicities(t: Tableau) -> Dict[int, int]:
    """Multiplicity of each trivial column in the maximal trivial factor of ``t``.

    Trivial column ``(a, ..., a+k-1)`` takes one ``a+i-1`` from row ``i``, and
    distinct starting points never compete for the same entry, so the maximal
    factor is unique.
    """
    counters = t.row_counters()
    out = {}
    for a in range(1, t.n - t.k + 2):
        d = min(counters[i][a + i] for i in range(t.k))
        if d:
            out[a] = d
    return out


def reduce(t: Tableau) -> Tableau:
    """Remove the maximal trivial factor (``T_red``)."""
    mult = trivial_multiplicities(t)
    if not mult:
        return t
    trivial = [trivial_column(a, t.k) for a, d in mult.items() for _ in range(d)]
    return quotient(t, Tableau(k=t.k, n=t.n, columns=tuple(trivial)))


def equivalent(s: Tableau, t: Tableau) -> bool:
    _same_shape(s, t)
    return reduce(s) == reduce(t)


def padding_equivalent(s: Tableau, t: Tableau, bound: Optional[int] = None) -> bool:
    """Exhaustive check for trivial ``D``, ``D'`` with ``s ∪ D = t ∪ D'``.

    Trivial paddings ``D`` with at most ``bound`` columns are enumerated
    (default: the larger column count of the two tableaux).
    """
    _same_shape(s, t)
    k, n = s.k, s.n
    if bound is None:
        bound = max(s.width, t.width)
    starts = list(range(1, n - k + 2))
    t_rows = t.row_counters()
    for size in range(bound + 1):
        for choice in combinations_with_replacement(starts, size):
            padded = union(s, Tableau(k=k, n=n, columns=tuple(trivial_column(a, k) for a in choice)))
            p_rows = padded.row_counters()
            if any(ct - cp for ct, cp in zip(t_rows, p_rows)):
                continue
            rest = [cp - ct for cp, ct in zip(p_rows, t_rows)]
            if _is_trivial_rows(rest, k):
                return True
    return False


def _is_trivial_rows(counters: Sequence[Counter], k: int) -> bool:
    rest = [Counter(c) for c in counters]
    while sum(rest[0].values()):
        a = min(rest[0].elements())
        for i in range(k):
            if rest[i][a + i] == 0:
                return False
            rest[i][a + i] -= 1
            if rest[i][a + i] == 0:
                del rest[i][a + i]
    return all(not c for c in rest)


class ColumnTag(str, Enum):
    trivial = "trivial"
    frozen_wrap = "frozen-wrap"
    fundamental = "fundamental"
    generic = "generic"


class ColumnClass(BaseModel):
    model_config = ConfigDict(frozen=True)

    tag: ColumnTag
    i: Optional[int] = None
    j: Optional[int] = None

    @field_validator("j")
    @classmethod
    def indices_only_for_fundamental(cls, v, info: ValidationInfo):
        is_fundamental = info.data.get("tag") == ColumnTag.fundamental
        if is_fundamental != (v is not None and info.data.get("i") is not None):
            raise ValueError("(i, j) is given exactly for fundamental columns")
        return v


def cyclic_blocks(col: Sequence[int], n: int) -> int:
    """Number of maximal cyclic runs of consecutive entries."""
    members = set(col)
    if len(members) == n:
        return 1
    return sum(1 for x in members if (x % n) + 1 not in members)


def is_frozen(col: Sequence[int], n: int) -> bool:
    return cyclic_blocks(col, n) == 1


def classify_column(col: Sequence[int], k: int, n: int) -> ColumnClass:
    """Tag a column; a column matching several descriptions gets the first of
    trivial, frozen-wrap, fundamental.
    """
    _check_column(col, k, n)
    if col[-1] - col[0] == k - 1:
        return ColumnClass(tag=ColumnTag.trivial)
    if is_frozen(col, n):
        return ColumnClass(tag=ColumnTag.frozen_wrap)
    j = col[0]
    if col[-1] == j + k:
        missing = set(range(j, j + k + 1)) - set(col)
        if len(missing) == 1:
            (gap,) = missing
            return ColumnClass(tag=ColumnTag.fundamental, i=gap - j, j=j)
    return ColumnClass(tag=ColumnTag.generic)


def fundamental_column(i: int, j: int, k: int, n: int) -> Column:
    if not (1 <= i <= k - 1 and 1 <= j <= n - k):
        raise UsageError(f"T_({i},{j}) undefined for k={k}, n={n}")
    return tuple(x for x in range(j, j + k + 1) if x != i + j)


def fundamental_tableau(i: int, j: int, k: int, n: int) -> Tableau:
    return Tableau(k=k, n=n, columns=(fundamental_column(i, j, k, n),))


def fundamental_indices(k: int, n: int) -> Iterator[Tuple[int, int]]:
    """All (i, j) in [k-1] x [n-k], row-major."""
    for i in range(1, k):
        for j in range(1, n - k + 1):
            yield i, j


class FundamentalDecomposition(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    n: int
    c: Dict[Tuple[int, int], int]

    @field_validator("c")
    @classmethod
    def validate_indices(cls, v, info: ValidationInfo):
        k, n = info.data.get("k"), info.data.get("n")
        for (i, j), mult in v.items():
            if not (1 <= i <= k - 1 and 1 <= j <= n - k) or mult < 0:
                raise ValueError(f"bad multiplicity c({i},{j}) = {mult}")
        return {key: m for key, m in sorted(v.items()) if m}

    @property
    def v(self) -> Tuple[int, ...]:
        return tuple(self.c.get(ij, 0) for ij in fundamental_indices(self.k, self.n))

    def union(self) -> Tableau:
        """The tableau ``∪ T_{i,j}^{∪c(i,j)}``."""
        cols = [
            fundamental_column(i, j, self.k, self.n)
            for (i, j), mult in self.c.items()
            for _ in range(mult)
        ]
        return Tableau(k=self.k, n=self.n, columns=tuple(cols))


def column_multiplicities(col: Sequence[int]) -> Dict[Tuple[int, int], int]:
    """c(i, j) += 1 for j in [a_i - i + 1, a_{i+1} - i - 1]."""
    out: Dict[Tuple[int, int], int] = {}
    for i in range(1, len(col)):
        lo, hi = col[i - 1] - i + 1, col[i] - i - 1
        for j in range(lo, hi + 1):
            out[(i, j)] = out.get((i, j), 0) + 1
    return out


def fundamental_decomposition(t: Tableau) -> FundamentalDecomposition:
    """Factor ``t`` (up to trivial padding) as a union of fundamental tableaux.

    Raises:
        DecompositionError: the union of fundamental tableaux is not
            equivalent to ``t``.
    """
    c: Dict[Tuple[int, int], int] = {}
    for col in t.columns:
        for key, mult in column_multiplicities(col).items():
            c[key] = c.get(key, 0) + mult
    decomposition = FundamentalDecomposition(k=t.k, n=t.n, c=c)
    if not equivalent(decomposition.union(), t):
        _log.error(f"fundamental decomposition of {t} failed: c={decomposition.c}")
        raise DecompositionError(
            f"union of fundamental tableaux {decomposition.c} is not equivalent to {t}"
        )
    return decomposition


def root(t: Tableau) -> Tuple[Tableau, int]:
    """Return ``(S, m)`` with ``t = S^{∪m}`` and ``m`` maximal."""
    if t.is_empty():
        raise UsageError("root of the empty tableau is undefined")
    counters = t.row_counters()
    m = 0
    for counter in counters:
        for mult in counter.values():
            m = gcd(m, mult)
    base = [Counter({x: mult // m for x, mult in c.items()}) for c in counters]
    return _from_row_counters(base, t.k, t.n), m


def frozen_factor(t: Tableau) -> Tuple[Tableau, Tableau]:
    """Split the canonical columns of ``t`` into frozen ones and the rest."""
    frozen = tuple(c for c in t.columns if is_frozen(c, t.n))
    rest = tuple(c for c in t.columns if not is_frozen(c, t.n))
    return Tableau(k=t.k, n=t.n, columns=frozen), Tableau(k=t.k, n=t.n, columns=rest)


def weakly_separated(a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff ``a - b`` and ``b - a`` do not interleave cyclically."""
    sa, sb = set(a), set(b)
    labels = [x in sa for x in sorted(sa ^ sb)]
    if not labels:
        return True
    changes = sum(1 for p, q in zip(labels, labels[1:] + labels[:1]) if p != q)
    return changes <= 2


class AmbiguousDecompositionError(ValueError):
    def __init__(self, t: Tableau, solutions: List[List[Column]]):
        super().__init__(
            f"{len(solutions)} weakly separated column decompositions of {t}: {solutions}"
        )
        self.solutions = solutions


def _distinct_arrangements(values: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    counter = Counter(values)
    keys = sorted(counter)
    size = len(values)
    out: List[int] = []

    def _rec():
        if len(out) == size:
            yield tuple(out)
            return
        for key in keys:
            if counter[key]:
                counter[key] -= 1
                out.append(key)
                yield from _rec()
                out.pop()
                counter[key] += 1

    yield from _rec()


def ws_column_decomposition(
    t: Tableau, max_candidates: int = 1_000_000
) -> Optional[List[Column]]:
    """Find the pairwise weakly separated one-column tableaux whose union is ``t``.

    Every way of matching the entries of each row to the columns is searched.
    When the search completes within ``max_candidates`` it also checks that
    the decomposition is unique, see :func:`choose_decomposition`.

    Returns:
        The sorted list of columns, or ``None`` when no decomposition exists.

    Raises:
        AmbiguousDecompositionError: a two-row tableau has several distinct
            decompositions.
    """
    if t.is_empty():
        return []
    rows = t.rows
    width = t.width
    solutions = set()
    explored = 0
    complete = True
    partial = [[x] for x in rows[0]]

    def _search(level: int):
        nonlocal explored, complete
        if explored >= max_candidates:
            complete = False
            return
        if level == t.k:
            explored += 1
            cols = [tuple(c) for c in partial]
            if all(
                weakly_separated(cols[p], cols[q])
                for p in range(width)
                for q in range(p + 1, width)
            ):
                solutions.add(tuple(sorted(cols)))
            return
        for arrangement in _distinct_arrangements(rows[level]):
            if any(partial[p][-1] >= arrangement[p] for p in range(width)):
                continue
            for p in range(width):
                partial[p].append(arrangement[p])
            _search(level + 1)
            for p in range(width):
                partial[p].pop()

    _search(1)
    if not solutions:
        if not complete:
            _log.warning(f"search for {t} stopped after {explored} candidates")
        return None
    ordered = sorted(solutions)
    if not complete:
        return list(ordered[0])
    return choose_decomposition(t, [list(s) for s in ordered])


def choose_decomposition(t: Tableau, solutions: List[List[Column]]) -> List[Column]:
    """Pick the decomposition of ``t`` among the sorted complete ``solutions``.

    Two-row tableaux have at most one; several of them raise. For ``k >= 3``
    the first one is returned and the others are logged.
    """
    if len(solutions) > 1:
        if t.k == 2:
            raise AmbiguousDecompositionError(t, solutions)
        _log.warning(
            f"{len(solutions)} weakly separated column decompositions of {t}, "
            f"using {solutions[0]}: {solutions[1:]}"
        )
    return solutions[0]


def nonfrozen_prime_k2(t: Tableau) -> bool:
    """Non-frozen prime tableaux of the k=2 Grassmannian: one column {a, b},
    b > a + 1 and {a, b} != {1, n}.
    """
    if t.k != 2:
        raise UsageError(f"classification is only available for k=2, got k={t.k}")
    if t.width != 1:
        return False
    a, b = t.columns[0]
    return b > a + 1 and (a, b) != (1, t.n)


def one_cyclic_gap(col: Sequence[int], n: int) -> bool:
    """Exactly two maximal cyclic blocks."""
    return cyclic_blocks(col, n) == 2
