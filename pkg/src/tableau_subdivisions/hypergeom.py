#################################################################################
# tableau-subdivisions Copyright (c) 2024, the tableau-subdivisions developers.
# All rights reserved.
#
# Please see the files COPYRIGHT.md and LICENSE.md for full copyright and license
# information, respectively.
#################################################################################
"""
Regular subdivisions of the hypersimplex Δ(k, n) induced by a weight vector,
with matroid and positroid recognition of the cells and classification of the
resulting subdivision.

Lower faces are used throughout: a maximal cell is the set of vertices
minimizing ``w_B - <λ, e_B>`` for some ``λ``, and it is certified by the pair
``(λ, c)`` with ``c`` the minimum. All arithmetic is exact.
"""

# stdlib
from collections import deque
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
import json
import logging
from math import gcd, lcm
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
)

# third-party
from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator
from pydantic.alias_generators import to_camel
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

# package
from tableau_subdivisions.serialize import (
    parse_rational,
    render_rational,
    subset_key,
)
from tableau_subdivisions.tableaux import Subset, UsageError
from tableau_subdivisions.webtrop import BudgetExceededError, WeightVector, k_subsets

_log = logging.getLogger(__name__)

Point = Tuple[int, ...]


class CellError(ValueError):
    """A cell does not satisfy the precondition of an operation."""


class CertificationError(RuntimeError):
    def __init__(self, reason: str, cell: Optional[Iterable[Subset]] = None):
        msg = f"Subdivision certification failed: {reason}"
        if cell is not None:
            msg += f" [cell {sorted(subset_key(b) for b in cell)}]"
        super().__init__(msg)
        self.reason = reason
        self.cell = None if cell is None else frozenset(cell)


# exact linear algebra


def _domain_matrix(rows: Sequence[Sequence], ncols: int) -> DomainMatrix:
    data = []
    for row in rows:
        entries = []
        for x in row:
            x = Fraction(x)
            entries.append(QQ(int(x.numerator), int(x.denominator)))
        data.append(entries)
    return DomainMatrix(data, (len(rows), ncols), QQ)


def matrix_rank(rows: Sequence[Sequence], ncols: int) -> int:
    if not rows:
        return 0
    return _domain_matrix(rows, ncols).rank()


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[Tuple[Fraction, ...]]:
    """Basis of ``{d : row . d = 0 for every row}``."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    basis = _domain_matrix(rows, ncols).nullspace().to_Matrix()
    return [
        tuple(Fraction(int(basis[i, j].p), int(basis[i, j].q)) for j in range(basis.cols))
        for i in range(basis.rows)
    ]


def affine_rank(points: Sequence[Point]) -> int:
    """Dimension of the affine hull (-1 for no points)."""
    if not points:
        return -1
    base = points[0]
    rows = [[p - q for p, q in zip(pt, base)] for pt in points[1:]]
    return matrix_rank(rows, len(base))


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


# hypersimplex


@lru_cache(maxsize=None)
def _vertices(k: int, n: int) -> Tuple[Subset, ...]:
    return tuple(k_subsets(k, n))


def indicator(subset: Iterable[int], n: int) -> Point:
    members = set(subset)
    return tuple(int(i in members) for i in range(1, n + 1))


class Hypersimplex(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    n: int

    @field_validator("n")
    @classmethod
    def validate_n(cls, v, info: ValidationInfo):
        k = info.data.get("k")
        if k is not None and not 1 <= k < v:
            raise ValueError(f"Δ(k, n) needs 1 <= k < n, got k={k}, n={v}")
        return v

    @property
    def vertices(self) -> Tuple[Subset, ...]:
        return _vertices(self.k, self.n)

    @property
    def dim(self) -> int:
        return self.n - 1

    def indicator(self, subset: Iterable[int]) -> Point:
        return indicator(subset, self.n)


def cyclic_intervals(n: int) -> List[Tuple[int, ...]]:
    """Proper nonempty cyclic intervals of [n], ordered by start then length."""
    out = []
    for start in range(1, n + 1):
        for length in range(1, n):
            out.append(tuple(sorted(((start - 1 + t) % n) + 1 for t in range(length))))
    return out


# matroids and positroids


def is_matroid(cell: Iterable[Subset]) -> bool:
    """Basis exchange: for I, J in the cell and a in I - J there is b in J - I
    with I - a + b in the cell."""
    bases = {frozenset(b) for b in cell}
    if not bases:
        return False
    for first in bases:
        for second in bases:
            for a in first - second:
                if not any(
                    (first - {a}) | {b} in bases for b in second - first
                ):
                    return False
    return True


def _rank_function(cell: Iterable[Subset]):
    bases = [frozenset(b) for b in cell]

    def rank(subset: Iterable[int]) -> int:
        s = set(subset)
        return max(len(b & s) for b in bases)

    return rank


def positroid_envelope(cell: Iterable[Subset], n: int) -> Set[Subset]:
    """All k-subsets A with ``|A ∩ S| <= r(S)`` for every cyclic interval S."""
    cell = list(cell)
    k = len(cell[0])
    rank = _rank_function(cell)
    bounds = [(frozenset(s), rank(s)) for s in cyclic_intervals(n)]
    return {
        a
        for a in k_subsets(k, n)
        if all(len(s.intersection(a)) <= r for s, r in bounds)
    }


def is_positroid(cell: Iterable[Subset], n: int) -> bool:
    """Cyclic-interval envelope equality.

    Raises:
        UsageError: the cell is not a matroid.
    """
    cell = {tuple(sorted(b)) for b in cell}
    if not is_matroid(cell):
        raise UsageError(f"not a matroid: {sorted(subset_key(b) for b in cell)}")
    return positroid_envelope(cell, n) == cell


# cells and facets


class Facet(BaseModel):
    """Valid inequality ``<normal, x> <= rhs`` whose tight vertices span a facet."""

    model_config = ConfigDict(frozen=True)

    normal: Tuple[int, ...]
    rhs: int
    label: str
    tight: FrozenSet[Subset] = Field(exclude=True)

    def to_json_data(self) -> dict:
        return {
            "normal": [str(Fraction(a)) for a in self.normal],
            "rhs": str(Fraction(self.rhs)),
        }


class Cell(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    bases: Tuple[Subset, ...]
    lam: Tuple[Fraction, ...]
    offset: Fraction
    facets: Tuple[Facet, ...] = Field(default=(), exclude=True)

    @field_validator("bases")
    @classmethod
    def sort_bases(cls, v):
        return tuple(sorted(set(tuple(b) for b in v)))

    @field_validator("lam", mode="before")
    @classmethod
    def coerce_lam(cls, v):
        return tuple(parse_rational(x) for x in v)

    @field_validator("offset", mode="before")
    @classmethod
    def coerce_offset(cls, v):
        return parse_rational(v)

    @property
    def basis_set(self) -> FrozenSet[Subset]:
        return frozenset(self.bases)

    def keys(self) -> List[str]:
        return [subset_key(b) for b in self.bases]


class _RankCache:
    def __init__(self, n: int):
        self.n = n
        self._ranks: Dict[FrozenSet[Subset], int] = {}

    def __call__(self, subsets: Iterable[Subset]) -> int:
        key = frozenset(subsets)
        if key not in self._ranks:
            pts = [indicator(b, self.n) for b in sorted(key)]
            self._ranks[key] = affine_rank(pts)
        return self._ranks[key]


def _candidates(bases: Sequence[Subset], n: int, subsets: Iterable[Tuple[int, ...]]):
    for i in range(1, n + 1):
        yield tuple(-int(j == i) for j in range(1, n + 1)), 0, f"x{i}>=0"
        yield tuple(int(j == i) for j in range(1, n + 1)), 1, f"x{i}<=1"
    rank = _rank_function(bases)
    for s in subsets:
        r = rank(s)
        yield indicator(s, n), r, f"x({subset_key(s)})<={r}"


def _validated_facets(bases, n, candidates, rank_of) -> List[Facet]:
    seen = set()
    out = []
    for normal, rhs, label in candidates:
        tight = frozenset(b for b in bases if sum(normal[i - 1] for i in b) == rhs)
        if len(tight) < n - 1 or len(tight) == len(bases) or tight in seen:
            continue
        if rank_of(tight) == n - 2:
            seen.add(tight)
            out.append(Facet(normal=normal, rhs=rhs, label=label, tight=tight))
    return out


def _defines(facets: Sequence[Facet], bases: Sequence[Subset], k: int, n: int) -> bool:
    members = set(bases)
    for b in _vertices(k, n):
        if b in members:
            continue
        if all(sum(f.normal[i - 1] for i in b) <= f.rhs for f in facets):
            return False
    return True


def _enumerated_facets(bases: Sequence[Subset], n: int, rank_of: _RankCache) -> List[Facet]:
    """Facets through every affinely independent choice of ``n - 1`` vertices."""
    pts = {b: indicator(b, n) for b in bases}
    found: List[Facet] = []
    for choice in combinations(bases, n - 1):
        if any(set(choice) <= f.tight for f in found) or rank_of(choice) != n - 2:
            continue
        # unknowns (a, r): a.e_B = r on the choice, a orthogonal to the all-ones vector
        rows = [list(pts[b]) + [-1] for b in choice] + [[1] * n + [0]]
        null = nullspace(rows, n + 1)
        if len(null) != 1:
            continue
        a, r = null[0][:n], null[0][n]
        sides = [_dot(a, pts[b]) - r for b in bases]
        if all(s >= 0 for s in sides):
            a, r = tuple(-x for x in a), -r
            sides = [-s for s in sides]
        elif not all(s <= 0 for s in sides):
            continue
        scale = lcm(*(Fraction(x).denominator for x in (*a, r)))
        normal = [int(x * scale) for x in a]
        rhs = int(r * scale)
        common = gcd(*normal, rhs)
        normal, rhs = tuple(x // common for x in normal), rhs // common
        tight = frozenset(b for b, s in zip(bases, sides) if s == 0)
        found.append(Facet(normal=normal, rhs=rhs, label=f"<{subset_key(normal)}>", tight=tight))
    return found


def cell_facets(
    cell: Iterable[Subset], h: Hypersimplex, rank_of: Optional[_RankCache] = None
) -> List[Facet]:
    """Facet inequalities of the polytope spanned by ``cell``.

    For a matroid cell the candidates are the cube bounds and
    ``x(S) <= r(S)`` over cyclic intervals ``S``, then over all subsets ``S``
    when the cell is not a positroid. Each candidate is kept when its tight
    vertices have affine rank ``n - 2``, and the kept set must cut out exactly
    the cell's vertices. Other cells get their facets by enumerating
    hyperplanes through ``n - 1`` of their vertices.

    Raises:
        CellError: the cell is not full-dimensional.
        CertificationError: the facets do not cut out the cell.
    """
    bases = sorted({tuple(b) for b in cell})
    n = h.n
    rank_of = rank_of or _RankCache(n)
    if rank_of(bases) != n - 1:
        raise CellError(
            f"cell {[subset_key(b) for b in bases]} is not full-dimensional in Δ({h.k},{n})"
        )
    if not is_matroid(bases):
        _log.debug(f"cell of {len(bases)} vertices is not a matroid, enumerating facets")
        facets = _enumerated_facets(bases, n, rank_of)
    else:
        facets = _validated_facets(
            bases, n, _candidates(bases, n, cyclic_intervals(n)), rank_of
        )
        if _defines(facets, bases, h.k, n):
            return facets
        _log.debug(f"non-positroid cell, trying all {2 ** n - 2} subsets")
        everything = [
            s for size in range(1, n) for s in combinations(range(1, n + 1), size)
        ]
        facets = _validated_facets(bases, n, _candidates(bases, n, everything), rank_of)
    if not _defines(facets, bases, h.k, n):
        raise CertificationError("facet candidates do not cut out the cell", bases)
    return facets


# subdivisions


class Classification(BaseModel):
    model_config = ConfigDict(frozen=True, alias_generator=to_camel, populate_by_name=True)

    cell_count: int
    is_matroidal: bool
    is_positroidal: bool
    is_split: bool
    is_coarsest: bool
    affine_dim: int


class Subdivision(BaseModel):
    model_config = ConfigDict(frozen=True)

    hypersimplex: Hypersimplex
    weight: WeightVector
    cells: Tuple[Cell, ...]
    classification: Optional[Classification] = None

    @field_validator("cells")
    @classmethod
    def sort_cells(cls, v):
        return tuple(sorted(v, key=lambda c: c.bases))

    @property
    def cell_sets(self) -> List[FrozenSet[Subset]]:
        return [c.basis_set for c in self.cells]

    def to_json_data(self) -> dict:
        data = {
            "k": self.hypersimplex.k,
            "n": self.hypersimplex.n,
            "weight": self.weight.to_json_list(),
            "cells": [c.keys() for c in self.cells],
        }
        if self.classification is not None:
            data["classification"] = self.classification.model_dump(by_alias=True)
        return data


class _Engine:
    def __init__(self, h: Hypersimplex, w: WeightVector, max_cells: int):
        if (w.k, w.n) != (h.k, h.n):
            raise UsageError(
                f"weight for ({w.k},{w.n}) does not fit Δ({h.k},{h.n})"
            )
        self.h = h
        self.n = h.n
        self.vertices = h.vertices
        self.weight = w.as_dict()
        self.max_cells = max_cells
        self.rank_of = _RankCache(h.n)

    def values(self, lam: Sequence[Fraction]) -> Dict[Subset, Fraction]:
        return {
            b: self.weight[b] - sum(lam[i - 1] for i in b) for b in self.vertices
        }

    def lowest(self, lam):
        vals = self.values(lam)
        c = min(vals.values())
        return [b for b in self.vertices if vals[b] == c], c, vals

    def start(self) -> Cell:
        n = self.n
        lam = [Fraction(0)] * n
        while True:
            active, c, vals = self.lowest(lam)
            if self.rank_of(active) == n - 1:
                return Cell(bases=active, lam=lam, offset=c)
            # slide λ along the lowest face until one more vertex ties
            base = indicator(active[0], n)
            rows = [
                [p - q for p, q in zip(indicator(b, n), base)] for b in active[1:]
            ]
            rows.append([1] * n)
            d = nullspace(rows, n)[0]
            slopes = {
                b: _dot(d, indicator(b, n)) - _dot(d, base)
                for b in self.vertices
                if vals[b] != c
            }
            if not any(s > 0 for s in slopes.values()):
                d = tuple(-x for x in d)
                slopes = {b: -s for b, s in slopes.items()}
            t = min((vals[b] - c) / s for b, s in slopes.items() if s > 0)
            lam = [x + t * y for x, y in zip(lam, d)]
            if _log.isEnabledFor(logging.DEBUG):
                _log.debug(f"descent step t={t} rank={self.rank_of(active)}")

    def cross(self, cell: Cell, facet: Facet) -> Optional[List[Fraction]]:
        """λ just across ``facet``, or None on the boundary of Δ(k, n)."""
        vals = self.values(cell.lam)
        members = cell.basis_set
        steps = []
        for b in self.vertices:
            if b in members:
                continue
            excess = sum(facet.normal[i - 1] for i in b) - facet.rhs
            if excess > 0:
                steps.append((vals[b] - cell.offset) / excess)
        if not steps:
            return None
        t = min(steps)
        return [x + t * a for x, a in zip(cell.lam, facet.normal)]

    def with_facets(self, cell: Cell) -> Cell:
        facets = cell_facets(cell.bases, self.h, self.rank_of)
        return cell.model_copy(update={"facets": tuple(facets)})

    def run(self) -> List[Cell]:
        first = self.with_facets(self.start())
        found: Dict[FrozenSet[Subset], Cell] = {first.basis_set: first}
        queue = deque([first])
        while queue:
            cell = queue.popleft()
            for facet in cell.facets:
                lam = self.cross(cell, facet)
                if lam is None:
                    continue
                active, c, _ = self.lowest(lam)
                key = frozenset(active)
                if key in found:
                    continue
                if not facet.tight <= key:
                    raise CertificationError(
                        f"wall crossing through {facet.label} lost the wall", active
                    )
                neighbor = self.with_facets(Cell(bases=active, lam=lam, offset=c))
                found[key] = neighbor
                queue.append(neighbor)
                if len(found) > self.max_cells:
                    raise BudgetExceededError(
                        f"Enumerating cells of Δ({self.h.k},{self.n})",
                        self.max_cells,
                        len(found),
                    )
        return list(found.values())


def certify(sub: Subdivision) -> None:
    """Check certificates, ridge matching, covering and full dimensionality.

    Raises:
        CertificationError: naming the first offending cell.
    """
    h = sub.hypersimplex
    weight = sub.weight.as_dict()
    rank_of = _RankCache(h.n)
    covered = set()
    for cell in sub.cells:
        members = cell.basis_set
        for b in h.vertices:
            level = sum(cell.lam[i - 1] for i in b) + cell.offset
            if b in members and weight[b] != level:
                raise CertificationError(f"certificate not tight at {subset_key(b)}", members)
            if b not in members and weight[b] <= level:
                raise CertificationError(
                    f"certificate does not separate {subset_key(b)}", members
                )
        if rank_of(members) != h.n - 1:
            raise CertificationError("cell is not full-dimensional", members)
        covered |= members
    if covered != set(h.vertices):
        missing = sorted(subset_key(b) for b in set(h.vertices) - covered)
        raise CertificationError(f"vertices not covered: {missing}")
    cell_sets = sub.cell_sets
    for cell in sub.cells:
        facets = cell.facets or tuple(cell_facets(cell.bases, h, rank_of))
        for facet in facets:
            beyond = any(
                sum(facet.normal[i - 1] for i in b) > facet.rhs for b in h.vertices
            )
            holders = sum(1 for s in cell_sets if facet.tight <= s)
            if beyond and holders != 2:
                raise CertificationError(
                    f"interior ridge {facet.label} is shared by {holders} cells",
                    cell.bases,
                )


def regular_subdivision(
    h: Hypersimplex, w: WeightVector, max_cells: int = 100_000
) -> Subdivision:
    """Maximal cells of the lower regular subdivision of Δ(k, n) lifted by ``w``.

    The first cell is found by exact descent from λ = 0; the others by
    crossing each facet of a known cell along its normal, breadth first.

    Args:
        h: The hypersimplex.
        w: Lift, one rational per vertex in lexicographic order.
        max_cells: Enumeration budget.

    Returns:
        The certified subdivision (without classification).

    Raises:
        CertificationError: an internal consistency check failed.
        BudgetExceededError: more than ``max_cells`` cells.
    """
    cells = _Engine(h, w, max_cells).run()
    sub = Subdivision(hypersimplex=h, weight=w, cells=tuple(cells))
    try:
        certify(sub)
    except CertificationError as err:
        _log.error(f"{err}")
        raise
    if _log.isEnabledFor(logging.DEBUG):
        _log.debug(f"Δ({h.k},{h.n}) subdivided into {len(cells)} cells")
    return sub


def affine_dimension(sub: Subdivision) -> int:
    """Dimension of the space of height functions affine on every cell."""
    h = sub.hypersimplex
    position = {b: idx for idx, b in enumerate(h.vertices)}
    rows = []
    for cell in sub.cells:
        pts = [indicator(b, h.n) + (1,) for b in cell.bases]
        # relations among the cell's lifted points
        columns = [[pts[r][c] for r in range(len(pts))] for c in range(h.n + 1)]
        for rel in nullspace(columns, len(pts)):
            row = [Fraction(0)] * len(position)
            for b, coeff in zip(cell.bases, rel):
                row[position[b]] = coeff
            rows.append(row)
    return len(position) - matrix_rank(rows, len(position))


def classify(sub: Subdivision) -> Classification:
    cells = [c.bases for c in sub.cells]
    matroidal = all(is_matroid(c) for c in cells)
    positroidal = matroidal and all(is_positroid(c, sub.hypersimplex.n) for c in cells)
    dim = affine_dimension(sub)
    return Classification(
        cell_count=len(cells),
        is_matroidal=matroidal,
        is_positroidal=positroidal,
        is_split=len(cells) == 2,
        is_coarsest=len(cells) >= 2 and dim == sub.hypersimplex.n + 1,
        affine_dim=dim,
    )


def classified(sub: Subdivision) -> Subdivision:
    return sub.model_copy(update={"classification": classify(sub)})


def canonical_key(sub: Subdivision) -> str:
    """Sorted list of sorted cells, rendered as compact JSON."""
    cells = sorted(sorted(subset_key(b) for b in c.bases) for c in sub.cells)
    return json.dumps(cells, separators=(",", ":"))


# edges


def cell_edges(cell: Cell, h: Hypersimplex) -> List[Tuple[Subset, Subset]]:
    """Vertex pairs whose smallest common face has no other vertex."""
    facets = cell.facets or tuple(cell_facets(cell.bases, h))
    out = []
    for u, v in combinations(cell.bases, 2):
        face = set(cell.bases)
        for f in facets:
            if u in f.tight and v in f.tight:
                face &= f.tight
        if face == {u, v}:
            out.append((u, v))
    return out


def bad_edges(sub: Subdivision) -> List[Tuple[Subset, Subset]]:
    """Edges of cells that are not translates of ``e_i - e_j``."""
    out = []
    for cell in sub.cells:
        for u, v in cell_edges(cell, sub.hypersimplex):
            if len(set(u) ^ set(v)) != 2:
                out.append((u, v))
    return out


# splits


class SplitHyperplane(BaseModel):
    """The hyperplane ``x(block) = rhs``, stored with ``1`` outside ``block``."""

    model_config = ConfigDict(frozen=True)

    k: int
    n: int
    block: Tuple[int, ...]
    rhs: int

    @classmethod
    def of(cls, block: Iterable[int], rhs: int, k: int, n: int) -> "SplitHyperplane":
        block = tuple(sorted(set(block)))
        if 1 in block:
            block = tuple(i for i in range(1, n + 1) if i not in block)
            rhs = k - rhs
        return cls(k=k, n=n, block=block, rhs=rhs)

    def to_json_data(self) -> dict:
        return {"block": list(self.block), "rhs": self.rhs}


def split_hyperplane(sub: Subdivision) -> SplitHyperplane:
    """Recover the hyperplane separating the two cells of a split.

    Raises:
        CellError: the subdivision does not have exactly two cells.
    """
    if len(sub.cells) != 2:
        raise CellError(f"a split has two cells, got {len(sub.cells)}")
    h = sub.hypersimplex
    first, second = sub.cells
    common = first.basis_set & second.basis_set
    facets = first.facets or tuple(cell_facets(first.bases, h))
    for f in facets:
        if f.tight == common and all(a in (0, 1) for a in f.normal):
            block = [i for i, a in enumerate(f.normal, start=1) if a]
            return SplitHyperplane.of(block, f.rhs, h.k, h.n)
    raise CertificationError("no hyperplane facet through the common wall", common)


def splits_compatible(a: SplitHyperplane, b: SplitHyperplane) -> bool:
    """True when the two hyperplanes do not meet in the interior of Δ(k, n).

    Within the interior every coordinate lies strictly between 0 and 1, so
    only the sums over the four atoms of the two blocks matter; they leave a
    single free parameter, the sum over the intersection.
    """
    if (a.k, a.n) != (b.k, b.n):
        raise UsageError("hyperplanes of different hypersimplices")
    if a == b:
        return True
    k, n = a.k, a.n
    s1, s2 = set(a.block), set(b.block)
    rest = set(range(1, n + 1)) - s1 - s2
    # atom sum = coef * t + const, t the sum over s1 & s2
    atoms = [
        (len(s1 & s2), 1, 0),
        (len(s1 - s2), -1, a.rhs),
        (len(s2 - s1), -1, b.rhs),
        (len(rest), 1, k - a.rhs - b.rhs),
    ]
    lo, hi, fixed = None, None, None
    for size, coef, const in atoms:
        if size == 0:
            value = Fraction(-const, coef)
            if fixed is not None and fixed != value:
                return True
            fixed = value
            continue
        bounds = sorted([Fraction(0 - const, coef), Fraction(size - const, coef)])
        lo = bounds[0] if lo is None else max(lo, bounds[0])
        hi = bounds[1] if hi is None else min(hi, bounds[1])
    if fixed is not None:
        meets = (lo is None or lo < fixed) and (hi is None or fixed < hi)
    else:
        meets = lo is None or lo < hi
    return not meets


def split_cells_k2(i: int, j: int, n: int) -> Tuple[FrozenSet[Subset], FrozenSet[Subset]]:
    """The two cells of the split of Δ(2, n) attached to the column {i, j},
    listed as the pairs on paths through each internal vertex of its tree."""
    first = {(s, t) for s in range(1, i + 1) for t in range(i + 1, j + 1)}
    first |= {(s, t) for s in range(i + 1, j + 1) for t in range(s + 1, n + 1)}
    second = {(s, t) for s in range(1, i + 1) for t in range(s + 1, n + 1)}
    second |= {(s, t) for s in range(i + 1, n + 1) for t in range(j + 1, n + 1) if s < t}
    return frozenset(first), frozenset(second)


def common_refinement(a: Subdivision, b: Subdivision) -> List[FrozenSet[Subset]]:
    """Full-dimensional intersections of a cell of ``a`` with a cell of ``b``."""
    if a.hypersimplex != b.hypersimplex:
        raise UsageError("subdivisions of different hypersimplices")
    rank_of = _RankCache(a.hypersimplex.n)
    out = set()
    for x in a.cell_sets:
        for y in b.cell_sets:
            meet = x & y
            if meet and rank_of(meet) == a.hypersimplex.n - 1:
                out.add(frozenset(meet))
    return sorted(out, key=lambda s: sorted(s))
