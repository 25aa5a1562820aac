#################################################################################
# tableau-subdivisions Copyright (c) 2024, the tableau-subdivisions developers.
# All rights reserved.
#
# Please see the files COPYRIGHT.md and LICENSE.md for full copyright and license
# information, respectively.
#################################################################################
"""
Web matrix of the positive Grassmannian, its Plücker minors as exponent sets,
min-plus evaluation of the minors and the weight vectors of tableaux.

The web network is a grid with k rows and n-k columns. Source ``r`` enters
row ``r`` from the left, sink ``k+c`` leaves column ``c`` at the bottom, and
paths move right or down. Stepping down from row ``i`` to row ``i+1`` in
column ``c`` has weight ``x_{i,c}``; every other step has weight 1. With
``M(r, k+c)`` the path generating function, the web matrix is
``[I_k | (-1)^(k-r) M(r, k+c)]`` and all of its maximal minors are
subtraction-free polynomials in the ``(k-1)(n-k)`` variables.
"""

# stdlib
from fractions import Fraction
from itertools import combinations
import json
import logging
from math import comb
from pathlib import Path
import time
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

# third-party
from pydantic import BaseModel, ConfigDict, ValidationInfo, field_validator

# package
from tableau_subdivisions.serialize import (
    atomic_write_text,
    canonical_json,
    parse_rational,
    parse_subset_key,
    render_rational,
    subset_key,
)
from tableau_subdivisions.tableaux import (
    Subset,
    Tableau,
    UsageError,
    fundamental_decomposition,
    fundamental_indices,
)

_log = logging.getLogger(__name__)

#: Bump whenever the cached exponent sets could change.
FORMAT_VERSION = 1

Exponent = Tuple[int, ...]
ExponentSet = Tuple[Tuple[Exponent, int], ...]
Polynomial = Dict[Exponent, int]


class BudgetExceededError(RuntimeError):
    def __init__(self, what: str, limit: int, reached: int, advice: str = ""):
        msg = f"{what}: budget of {limit} exceeded (reached {reached})"
        if advice:
            msg += f". {advice}"
        super().__init__(msg)
        self.limit = limit
        self.reached = reached


class WebConstructionError(RuntimeError):
    """The expanded minors are not subtraction-free."""


class CacheVersionError(ValueError):
    def __init__(self, path: Path, found, expected):
        super().__init__(
            f"Cache entry {path} has version {found!r}, expected {expected!r}"
        )
        self.path = path
        self.found = found


def k_subsets(k: int, n: int) -> List[Subset]:
    """All k-subsets of [n] in lexicographic order."""
    return list(combinations(range(1, n + 1), k))


def variable_index(k: int, n: int) -> Dict[Tuple[int, int], int]:
    """Coordinate of ``x_{i,j}``; identical to the indexing of ``v_T``."""
    return {ij: pos for pos, ij in enumerate(fundamental_indices(k, n))}


class WebModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    n: int
    minors: Dict[Subset, ExponentSet]

    @field_validator("minors")
    @classmethod
    def validate_minors(cls, v, info: ValidationInfo):
        k, n = info.data.get("k"), info.data.get("n")
        if k is None or n is None:
            return v
        expected = k_subsets(k, n)
        if sorted(v) != expected:
            raise ValueError(f"minors must be indexed by all {len(expected)} {k}-subsets")
        nvars = (k - 1) * (n - k)
        out = {}
        for subset in expected:
            terms = v[subset]
            if not terms:
                raise ValueError(f"minor {subset_key(subset)} has no monomials")
            exps = [e for e, _ in terms]
            if len(set(exps)) != len(exps):
                raise ValueError(f"minor {subset_key(subset)} repeats a monomial")
            for exp, coeff in terms:
                if len(exp) != nvars or min(exp, default=0) < 0:
                    raise ValueError(f"bad exponent {exp} in minor {subset_key(subset)}")
                if coeff <= 0:
                    raise ValueError(
                        f"non-positive coefficient {coeff} in minor {subset_key(subset)}"
                    )
            out[subset] = tuple(sorted(terms))
        return out

    @property
    def nvars(self) -> int:
        return (self.k - 1) * (self.n - self.k)

    @property
    def subsets(self) -> List[Subset]:
        return list(self.minors)

    def monomial_count(self) -> int:
        return sum(len(terms) for terms in self.minors.values())

    def to_json_data(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "version": FORMAT_VERSION,
            "minors": {
                subset_key(subset): [[list(exp), coeff] for exp, coeff in terms]
                for subset, terms in self.minors.items()
            },
        }

    @classmethod
    def from_json_data(cls, data: dict) -> "WebModel":
        minors = {
            parse_subset_key(key): tuple((tuple(exp), int(coeff)) for exp, coeff in terms)
            for key, terms in data["minors"].items()
        }
        return cls(k=data["k"], n=data["n"], minors=minors)


class WeightVector(BaseModel):
    """Rational value per k-subset of [n], in lexicographic order."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    k: int
    n: int
    values: Tuple[Fraction, ...]

    @field_validator("values", mode="before")
    @classmethod
    def coerce_values(cls, v, info: ValidationInfo):
        values = tuple(parse_rational(x) for x in v)
        k, n = info.data.get("k"), info.data.get("n")
        if k is not None and n is not None and len(values) != comb(n, k):
            raise ValueError(
                f"weight vector for k={k}, n={n} needs {comb(n, k)} values, got {len(values)}"
            )
        return values

    @classmethod
    def zero(cls, k: int, n: int) -> "WeightVector":
        return cls(k=k, n=n, values=[0] * comb(n, k))

    @classmethod
    def from_mapping(cls, k: int, n: int, mapping: Dict[Subset, Fraction]) -> "WeightVector":
        return cls(k=k, n=n, values=[mapping.get(s, 0) for s in k_subsets(k, n)])

    @property
    def subsets(self) -> List[Subset]:
        return k_subsets(self.k, self.n)

    def as_dict(self) -> Dict[Subset, Fraction]:
        return dict(zip(self.subsets, self.values))

    def to_json_list(self) -> list:
        return [render_rational(x) for x in self.values]

    def _check_same(self, other: "WeightVector"):
        if (self.k, self.n) != (other.k, other.n):
            raise UsageError(
                f"weights over different hypersimplices: ({self.k},{self.n}) and ({other.k},{other.n})"
            )

    def __add__(self, other: "WeightVector") -> "WeightVector":
        self._check_same(other)
        return WeightVector(
            k=self.k, n=self.n, values=[a + b for a, b in zip(self.values, other.values)]
        )

    def scaled(self, t) -> "WeightVector":
        t = parse_rational(t)
        return WeightVector(k=self.k, n=self.n, values=[t * a for a in self.values])


def _add_into(target: Polynomial, poly: Polynomial, scale: int = 1):
    for exp, coeff in poly.items():
        target[exp] = target.get(exp, 0) + scale * coeff


def _times_variable(poly: Polynomial, index: int) -> Polynomial:
    out = {}
    for exp, coeff in poly.items():
        bumped = list(exp)
        bumped[index] += 1
        out[tuple(bumped)] = coeff
    return out


def _multiply(a: Polynomial, b: Polynomial) -> Polynomial:
    out: Polynomial = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            exp = tuple(x + y for x, y in zip(ea, eb))
            out[exp] = out.get(exp, 0) + ca * cb
    return out


def path_polynomials(k: int, n: int) -> Dict[Tuple[int, int], Polynomial]:
    """``M(r, k+c)`` for every source ``r`` and column ``c`` of the web network."""
    width = n - k
    nvars = (k - 1) * width
    index = variable_index(k, n)
    one = tuple([0] * nvars)
    out = {}
    for r in range(1, k + 1):
        # reach[(i, c)]: paths from source r arriving at grid vertex (i, c)
        reach: Dict[Tuple[int, int], Polynomial] = {}
        for i in range(r, k + 1):
            for c in range(1, width + 1):
                acc: Polynomial = {one: 1} if (i == r and c == 1) else {}
                if c > 1:
                    _add_into(acc, reach[(i, c - 1)])
                if i > r:
                    _add_into(acc, _times_variable(reach[(i - 1, c)], index[(i - 1, c)]))
                reach[(i, c)] = acc
        for c in range(1, width + 1):
            out[(r, k + c)] = reach[(k, c)]
    return out


def _expand_minors(k: int, n: int, max_monomials: int) -> Dict[Subset, Polynomial]:
    nvars = (k - 1) * (n - k)
    one = tuple([0] * nvars)
    paths = path_polynomials(k, n)

    def entry(r: int, col: int) -> Polynomial:
        if col <= k:
            return {one: 1} if col == r else {}
        sign = -1 if (k - r) % 2 else 1
        return {exp: sign * coeff for exp, coeff in paths[(r, col)].items()}

    memo: Dict[Tuple[int, ...], Polynomial] = {(): {one: 1}}

    def minor(cols: Tuple[int, ...]) -> Polynomial:
        # expansion along the top row of the remaining rows
        if cols in memo:
            return memo[cols]
        r = k - len(cols) + 1
        total: Polynomial = {}
        for pos, col in enumerate(cols):
            e = entry(r, col)
            if not e:
                continue
            rest = minor(cols[:pos] + cols[pos + 1:])
            if not rest:
                continue
            _add_into(total, _multiply(e, rest), -1 if pos % 2 else 1)
        total = {exp: coeff for exp, coeff in total.items() if coeff}
        if len(total) > max_monomials:
            raise BudgetExceededError(
                f"Expanding minors of Gr({k},{n})",
                max_monomials,
                len(total),
                advice="Warm the cache with a larger --max-monomials or pick a smaller instance",
            )
        memo[cols] = total
        return total

    out = {}
    running = 0
    for subset in k_subsets(k, n):
        poly = minor(subset)
        running += len(poly)
        if running > max_monomials:
            raise BudgetExceededError(
                f"Expanding minors of Gr({k},{n})",
                max_monomials,
                running,
                advice="Warm the cache with a larger --max-monomials or pick a smaller instance",
            )
        bad = {exp: c for exp, c in poly.items() if c < 0}
        if not poly or bad:
            raise WebConstructionError(
                f"minor {subset_key(subset)} of the web matrix for Gr({k},{n}) is not "
                f"subtraction-free ({len(bad)} negative terms, {len(poly)} terms)"
            )
        out[subset] = poly
    return out


class WebCache:
    """Directory of expanded web models, one JSON file per (k, n)."""

    def __init__(self, directory: Union[str, Path]):
        self.directory = Path(directory).expanduser()

    def path_for(self, k: int, n: int) -> Path:
        return self.directory / f"web-k{k}-n{n}.json"

    def entries(self) -> Iterator[Path]:
        if not self.directory.is_dir():
            return iter(())
        return iter(sorted(self.directory.glob("web-k*-n*.json")))

    def load(self, k: int, n: int) -> Optional[WebModel]:
        path = self.path_for(k, n)
        if not path.exists():
            _log.debug(f"cache miss: {path}")
            return None
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
            if not isinstance(data, dict):
                raise TypeError(f"expected a JSON object, found {type(data).__name__}")
            if data.get("version") != FORMAT_VERSION:
                raise CacheVersionError(path, data.get("version"), FORMAT_VERSION)
            model = WebModel.from_json_data(data)
            if (model.k, model.n) != (k, n):
                raise CacheVersionError(path, (model.k, model.n), (k, n))
        except (CacheVersionError, ValueError, KeyError, TypeError) as err:
            _log.warning(f"Invalidating cache entry {path}: {err}")
            path.unlink(missing_ok=True)
            return None
        _log.info(f"cache hit: Gr({k},{n}) from {path}")
        return model

    def store(self, model: WebModel) -> Path:
        path = self.path_for(model.k, model.n)
        atomic_write_text(path, canonical_json(model.to_json_data()))
        _log.info(f"cached Gr({model.k},{model.n}) at {path}")
        return path

    def status(self) -> List[dict]:
        out = []
        for path in self.entries():
            try:
                data = json.loads(path.read_text(encoding="utf-8"))
            except ValueError:
                data = None
            version = data.get("version") if isinstance(data, dict) else None
            out.append(
                {
                    "path": str(path),
                    "bytes": path.stat().st_size,
                    "version": version,
                    "current": version == FORMAT_VERSION,
                }
            )
        return out

    def clear(self) -> int:
        num = 0
        for path in self.entries():
            path.unlink(missing_ok=True)
            num += 1
        return num


def build_web(
    k: int,
    n: int,
    cache: Optional[WebCache] = None,
    max_monomials: int = 2_000_000,
) -> WebModel:
    """Expand every Plücker minor of the web matrix for Gr(k, n).

    Args:
        k: Number of rows.
        n: Number of columns.
        cache: Where expanded models are read from and stored, if given.
        max_monomials: Bound on the total number of monomials.

    Returns:
        The expanded model.

    Raises:
        UsageError: unless 1 <= k < n.
        BudgetExceededError: the expansion exceeds ``max_monomials``.
        WebConstructionError: a minor is zero or has a negative coefficient.
    """
    if not 1 <= k < n:
        raise UsageError(f"need 1 <= k < n, got k={k}, n={n}")
    if cache is not None:
        model = cache.load(k, n)
        if model is not None:
            return model
    start = time.perf_counter()
    minors = _expand_minors(k, n, max_monomials)
    try:
        model = WebModel(
            k=k,
            n=n,
            minors={s: tuple(sorted(p.items())) for s, p in minors.items()},
        )
    except ValueError as err:
        raise WebConstructionError(f"Building web model for Gr({k},{n}): {err}") from err
    _log.info(
        f"expanded Gr({k},{n}): {model.monomial_count()} monomials "
        f"in {time.perf_counter() - start:.2f}s"
    )
    if cache is not None:
        cache.store(model)
    return model


def trop_plucker(model: WebModel, subset: Sequence[int], y: Sequence) -> Fraction:
    """Min-plus value ``P_J(y)``: the least ``<exponent, y>`` over the monomials of ``p_J``."""
    if len(y) != model.nvars:
        raise UsageError(f"point has {len(y)} coordinates, expected {model.nvars}")
    y = [parse_rational(x) for x in y]
    terms = model.minors[tuple(subset)]
    return min(
        sum((e * yi for e, yi in zip(exp, y) if e), Fraction(0)) for exp, _ in terms
    )


def weight_from_point(model: WebModel, y: Sequence) -> WeightVector:
    return WeightVector(
        k=model.k, n=model.n, values=[trop_plucker(model, s, y) for s in model.subsets]
    )


def weight_of(model: WebModel, t: Tableau) -> WeightVector:
    """``wt_T = (P_J(v_T))_J``."""
    if (t.k, t.n) != (model.k, model.n):
        raise UsageError(
            f"tableau over (k={t.k}, n={t.n}) does not fit model Gr({model.k},{model.n})"
        )
    v = fundamental_decomposition(t).v
    if _log.isEnabledFor(logging.DEBUG):
        _log.debug(f"v_T for {t}: {v}")
    return weight_from_point(model, v)


def positive_three_term_violations(w: WeightVector) -> List[dict]:
    """Witnesses of failed positive tropical three-term Plücker relations.

    For every (k-2)-subset ``S`` and ``i<j<l<m`` outside ``S`` the relation
    ``w(Sil) + w(Sjm) = min(w(Sij) + w(Slm), w(Sim) + w(Sjl))`` must hold.
    """
    if w.k < 2 or w.n - w.k < 2:
        return []
    values = w.as_dict()

    def val(base, *extra):
        return values[tuple(sorted(base + extra))]

    out = []
    for base in combinations(range(1, w.n + 1), w.k - 2):
        free = [x for x in range(1, w.n + 1) if x not in base]
        for i, j, l, m in combinations(free, 4):
            lhs = val(base, i, l) + val(base, j, m)
            rhs = min(val(base, i, j) + val(base, l, m), val(base, i, m) + val(base, j, l))
            if lhs != rhs:
                out.append(
                    {
                        "base": list(base),
                        "quadruple": [i, j, l, m],
                        "lhs": render_rational(lhs),
                        "rhs": render_rational(rhs),
                    }
                )
    return out
