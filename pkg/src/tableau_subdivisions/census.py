#################################################################################
# tableau-subdivisions Copyright (c) 2024, the tableau-subdivisions developers.
# All rights reserved.
#
# Please see the files COPYRIGHT.md and LICENSE.md for full copyright and license
# information, respectively.
#################################################################################
"""
Drivers that enumerate tableaux, subdivide the hypersimplex with their weights
and check the resulting subdivisions, with machine-readable reports.

Statements that are known to hold are verdict gates (``fail`` on a witness);
conjectural statements produce ``counterexample`` verdicts instead.
"""

__author__ = "tableau-subdivisions developers"

# stdlib
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from fractions import Fraction
from io import TextIOBase
from itertools import combinations, repeat
import logging
import random
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

# third-party
from pydantic import BaseModel, Field, ValidationInfo, field_validator

# package
from tableau_subdivisions.hypergeom import (
    Hypersimplex,
    SplitHyperplane,
    Subdivision,
    bad_edges,
    canonical_key,
    classified,
    common_refinement,
    regular_subdivision,
    split_cells_k2,
    split_hyperplane,
    splits_compatible,
)
from tableau_subdivisions.serialize import subset_key, write_csv
from tableau_subdivisions.tableaux import (
    Column,
    Tableau,
    UsageError,
    is_frozen,
    nonfrozen_prime_k2,
    one_cyclic_gap,
    parse_tableau,
    trivial_column,
    union,
    weakly_separated,
    ws_column_decomposition,
)
from tableau_subdivisions.webtrop import (
    BudgetExceededError,
    WebCache,
    WebModel,
    WeightVector,
    build_web,
    k_subsets,
    positive_three_term_violations,
    weight_of,
)

_log = logging.getLogger(__name__)

#: Eight tableaux of Gr(3, 8) whose subdivisions are positroidal but not coarsest.
GR38_NONCOARSEST = (
    "1,2,3;2,5,6;4,7,8",
    "1,3,4;2,5,6;5,7,8",
    "1,3,4;2,6,7;5,8,8",
    "1,2,4;3,3,7;5,6,8",
    "1,1,2;3,4,5;6,7,8",
    "1,2,5;3,4,7;6,6,8",
    "1,2,3;4,4,5;6,7,8",
    "1,2,3;4,5,6;7,7,8",
)

#: Weights of the five split-inducing columns of Gr(2, 5), lexicographic order.
GR25_WEIGHTS = {
    (1, 3): (0, 0, 0, 0, 1, 0, 0, 0, 0, 0),
    (1, 4): (0, 0, 0, 0, 1, 1, 0, 1, 0, 0),
    (2, 4): (0, 0, 0, 0, 0, 0, 0, 1, 0, 0),
    (2, 5): (0, 0, 0, 0, 0, 0, 0, 1, 1, 1),
    (3, 5): (0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
}

_T1_WEIGHT = (0,) * 12 + (1, 1, 1) + (0,) * 7 + (1, 1, 1, 0, 0, 0) + (1,) * 6 + (2,)
#: Weights of two weakly separated columns of Gr(3, 7) and of their union.
GR37_WEIGHTS = {
    "3;4;7": _T1_WEIGHT,
    "4;6;7": (0,) * 34 + (1,),
    "3,4;4,6;7,7": _T1_WEIGHT[:-1] + (3,),
}


class Verdict(str, Enum):
    passed = "pass"
    failed = "fail"
    counterexample = "counterexample"
    recorded = "recorded"


def split_formula(k: int, n: int) -> int:
    """(k-1)/2 * n * (n-k-1)."""
    value = Fraction(k - 1, 2) * n * (n - k - 1)
    assert value.denominator == 1
    return int(value)


class Pipeline:
    """Tableau → weight → certified, classified subdivision, with the web
    models of every (k, n) built once."""

    def __init__(
        self,
        cache: Optional[WebCache] = None,
        max_monomials: int = 2_000_000,
        max_cells: int = 100_000,
    ):
        self.cache = cache
        self.max_monomials = max_monomials
        self.max_cells = max_cells
        self._models: Dict[Tuple[int, int], WebModel] = {}

    def model(self, k: int, n: int) -> WebModel:
        if (k, n) not in self._models:
            self._models[(k, n)] = build_web(
                k, n, cache=self.cache, max_monomials=self.max_monomials
            )
        return self._models[(k, n)]

    def weight(self, t: Tableau) -> WeightVector:
        return weight_of(self.model(t.k, t.n), t)

    def subdivide(self, w: WeightVector) -> Subdivision:
        h = Hypersimplex(k=w.k, n=w.n)
        return classified(regular_subdivision(h, w, max_cells=self.max_cells))

    def subdivide_tableau(self, t: Tableau) -> Subdivision:
        return self.subdivide(self.weight(t))


def _subdivide_column(model: WebModel, col: Column, max_cells: int) -> Subdivision:
    t = Tableau.one_column(col, model.n)
    w = weight_of(model, t)
    return classified(regular_subdivision(Hypersimplex(k=w.k, n=w.n), w, max_cells))


# reports


class CensusReport(BaseModel):
    k: int
    n: int
    coverage: str = "one-column sources"
    tableau_count: int = 0
    distinct_subdivisions: int = 0
    split_count: int = 0
    coarsest_count: int = 0
    formula: int = 0
    compatible_pairs: int = 0
    incompatible_pairs: int = 0
    coarsest_witnesses: List[str] = Field(default_factory=list)
    seed: Optional[int] = None
    verdicts: Dict[str, Verdict] = Field(default_factory=dict)
    witnesses: Dict[str, List[Any]] = Field(default_factory=dict)
    max_cells: int = 0
    total_cells: int = 0
    wall_clock: float = 0.0
    complete: bool = True

    @field_validator("formula")
    @classmethod
    def formula_matches_shape(cls, v, info: ValidationInfo):
        k, n = info.data.get("k"), info.data.get("n")
        if v and v != split_formula(k, n):
            raise ValueError(f"formula value {v} does not match (k={k}, n={n})")
        return v

    @property
    def passed(self) -> bool:
        return self.complete and all(
            v in (Verdict.passed, Verdict.recorded) for v in self.verdicts.values()
        )

    def to_json_data(self, timing: bool = False) -> dict:
        exclude = None if timing else {"wall_clock"}
        return self.model_dump(mode="json", exclude=exclude)

    def to_csv(self, output: Union[TextIOBase, Path, str]) -> int:
        """Write ``name,value`` rows: the counts, then one row per verdict.

        Returns:
            Number of rows written, header excluded.
        """
        rows = [
            ("k", self.k),
            ("n", self.n),
            ("coverage", self.coverage),
            ("tableau_count", self.tableau_count),
            ("distinct_subdivisions", self.distinct_subdivisions),
            ("split_count", self.split_count),
            ("formula", self.formula),
            ("coarsest_count", self.coarsest_count),
            ("compatible_pairs", self.compatible_pairs),
            ("incompatible_pairs", self.incompatible_pairs),
        ]
        rows += [(f"verdict:{name}", v.value) for name, v in sorted(self.verdicts.items())]
        return write_csv(output, ("name", "value"), rows)


class SuiteReport(BaseModel):
    name: str
    verdict: Verdict = Verdict.passed
    checked: int = 0
    passed: int = 0
    seed: Optional[int] = None
    witnesses: List[Dict[str, Any]] = Field(default_factory=list)
    details: Dict[str, Any] = Field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict in (Verdict.passed, Verdict.recorded)

    def record(self, ok: bool, witness: Optional[dict] = None, conjecture: bool = False):
        self.checked += 1
        if ok:
            self.passed += 1
            return
        self.witnesses.append(witness or {})
        if conjecture:
            if self.verdict == Verdict.passed:
                self.verdict = Verdict.counterexample
        else:
            self.verdict = Verdict.failed

    def to_json_data(self) -> dict:
        return self.model_dump(mode="json")

    def to_csv(self, output: Union[TextIOBase, Path, str]) -> int:
        row = (self.name, self.verdict.value, self.checked, self.passed, len(self.witnesses))
        return write_csv(
            output, ("suite", "verdict", "checked", "passed", "witnesses"), [row]
        )


class CensusBudgetError(BudgetExceededError):
    def __init__(self, report: CensusReport, limit: int, reached: int):
        super().__init__(f"Split census of Δ({report.k},{report.n})", limit, reached)
        self.report = report


def _bipartitions_compatible(a: SplitHyperplane, b: SplitHyperplane) -> bool:
    everything = set(range(1, a.n + 1))
    x, y = set(a.block), set(b.block)
    return any(
        not (p & q) for p in (x, everything - x) for q in (y, everything - y)
    )


def split_census(
    k: int,
    n: int,
    pipeline: Optional[Pipeline] = None,
    max_tableaux: int = 100_000,
    workers: int = 1,
    seed: Optional[int] = None,
) -> CensusReport:
    """Subdivide Δ(k, n) with the weight of every one-column tableau and count
    the distinct splits.

    Args:
        k: Number of rows.
        n: Alphabet bound.
        pipeline: Source of web models and subdivisions.
        max_tableaux: Budget on the number of columns processed.
        workers: Processes used to subdivide columns in parallel.
        seed: Recorded in the report; the census itself is deterministic.

    Returns:
        The report; verdicts ``split-count`` and ``split-gap-correspondence``
        are conjectural for k >= 3.

    Raises:
        CensusBudgetError: more than ``max_tableaux`` columns; the partial
            report is attached as ``.report``.
    """
    pipeline = pipeline or Pipeline()
    start = time.perf_counter()
    _log.info(f"split census of Δ({k},{n}) started")
    columns = k_subsets(k, n)
    report = CensusReport(k=k, n=n, formula=split_formula(k, n), seed=seed)
    budget_hit = len(columns) > max_tableaux
    if budget_hit:
        columns = columns[:max_tableaux]
        report.complete = False
    model = pipeline.model(k, n)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            subs = list(
                pool.map(_subdivide_column, repeat(model), columns, repeat(pipeline.max_cells))
            )
    else:
        subs = [_subdivide_column(model, col, pipeline.max_cells) for col in columns]

    groups: Dict[str, Tuple[Subdivision, List[Column]]] = {}
    mismatches = []
    non_positroidal = []
    for col, sub in zip(columns, subs):
        key = canonical_key(sub)
        groups.setdefault(key, (sub, []))[1].append(col)
        info = sub.classification
        if info.is_split != one_cyclic_gap(col, n):
            mismatches.append({"column": list(col), "cells": info.cell_count})
        if not info.is_positroidal:
            non_positroidal.append({"column": list(col)})
        report.max_cells = max(report.max_cells, info.cell_count)
        report.total_cells += info.cell_count
    report.tableau_count = len(columns)
    report.distinct_subdivisions = len(groups)

    splits = [(sub, cols) for sub, cols in groups.values() if sub.classification.is_split]
    report.split_count = len(splits)
    coarsest = [(sub, cols) for sub, cols in groups.values() if sub.classification.is_coarsest]
    report.coarsest_count = len(coarsest)
    report.coarsest_witnesses = [
        subset_key(cols[0]) for _, cols in sorted(coarsest, key=lambda g: g[1][0])
    ]

    hyperplanes = [split_hyperplane(sub) for sub, _ in splits]
    disagreements = []
    for a, b in combinations(hyperplanes, 2):
        compatible = splits_compatible(a, b)
        if compatible:
            report.compatible_pairs += 1
        else:
            report.incompatible_pairs += 1
        if k == 2 and compatible != _bipartitions_compatible(a, b):
            disagreements.append({"first": a.to_json_data(), "second": b.to_json_data()})

    conjectural = Verdict.counterexample if k > 2 else Verdict.failed
    report.verdicts["split-count"] = (
        Verdict.passed if report.split_count == report.formula else conjectural
    )
    report.verdicts["split-gap-correspondence"] = (
        conjectural if mismatches else Verdict.passed
    )
    report.verdicts["positroidal"] = Verdict.failed if non_positroidal else Verdict.passed
    report.verdicts["coarsest-witnesses"] = Verdict.recorded
    if k == 2:
        report.verdicts["split-compatibility"] = (
            Verdict.failed if disagreements else Verdict.passed
        )
    for name, items in (
        ("split-gap-correspondence", mismatches),
        ("positroidal", non_positroidal),
        ("split-compatibility", disagreements),
    ):
        if items:
            report.witnesses[name] = items
    report.wall_clock = time.perf_counter() - start
    _log.info(
        f"split census of Δ({k},{n}): {report.split_count} splits "
        f"(formula {report.formula}), {report.distinct_subdivisions} subdivisions"
    )
    if budget_hit:
        raise CensusBudgetError(report, max_tableaux, len(k_subsets(k, n)))
    return report


# samplers


def random_tableau(k: int, n: int, columns: int, rng: random.Random) -> Tableau:
    cols = [tuple(sorted(rng.sample(range(1, n + 1), k))) for _ in range(columns)]
    return Tableau.from_columns(cols, k, n)


def random_weakly_separated_tuple(
    k: int, n: int, m: int, rng: random.Random, attempts: int = 1000
) -> Optional[List[Column]]:
    """Up to ``attempts`` draws of ``m`` distinct non-frozen columns, kept when
    pairwise weakly separated."""
    pool = [c for c in k_subsets(k, n) if not is_frozen(c, n)]
    if len(pool) < m:
        return None
    for _ in range(attempts):
        cols = sorted(rng.sample(pool, m))
        if all(weakly_separated(a, b) for a, b in combinations(cols, 2)):
            return cols
    return None


# suites


def _suite_fixtures(pipeline: Pipeline, report: SuiteReport, **_):
    for (i, j), expected in GR25_WEIGHTS.items():
        got = pipeline.weight(Tableau.one_column((i, j), 5)).to_json_list()
        report.record(
            got == list(expected),
            {"tableau": f"{i};{j}", "expected": list(expected), "got": got},
        )
    for text, expected in GR37_WEIGHTS.items():
        got = pipeline.weight(parse_tableau(text, 3, 7)).to_json_list()
        report.record(
            got == list(expected),
            {"tableau": text, "expected": list(expected), "got": got},
        )
    t1 = pipeline.weight(parse_tableau("3;4;7", 3, 7))
    t2 = pipeline.weight(parse_tableau("4;6;7", 3, 7))
    both = pipeline.weight(parse_tableau("3,4;4,6;7,7", 3, 7))
    report.record(both == t1 + t2, {"check": "wt(T1 ∪ T2) = wt(T1) + wt(T2)"})


def _suite_splits_2n(pipeline: Pipeline, report: SuiteReport, n_values=None, **_):
    n_values = list(n_values or range(4, 9))
    for n in n_values:
        for i, j in combinations(range(1, n + 1), 2):
            t = Tableau.one_column((i, j), n)
            if not nonfrozen_prime_k2(t):
                continue
            sub = pipeline.subdivide_tableau(t)
            expected = set(split_cells_k2(i, j, n))
            witness = {"n": n, "pair": [i, j], "cells": [c.keys() for c in sub.cells]}
            ok = sub.classification.is_split and set(sub.cell_sets) == expected
            if ok:
                tree = tree_split(n, (i, j))
                ok = split_hyperplane(sub) == SplitHyperplane.of(tree.blocks[0], 1, 2, n)
            if ok and n <= 6:
                ok = not bad_edges(sub)
            report.record(ok, witness)
    report.details["n_values"] = n_values


def _suite_gr38(pipeline: Pipeline, report: SuiteReport, **_):
    for text in GR38_NONCOARSEST:
        t = parse_tableau(text, 3, 8)
        info = pipeline.subdivide_tableau(t).classification
        report.record(
            info.is_positroidal and not info.is_coarsest and info.affine_dim > 9,
            {"tableau": text, "classification": info.model_dump(by_alias=True)},
        )


def _suite_additivity(
    pipeline: Pipeline,
    report: SuiteReport,
    k=3,
    n=7,
    samples=50,
    seed=0,
    ws_max_candidates=1_000_000,
    **_,
):
    rng = random.Random(seed)
    for _ in range(samples):
        m = rng.randint(2, 3)
        cols = random_weakly_separated_tuple(k, n, m, rng)
        if cols is None:
            continue
        whole = Tableau.from_columns(cols, k, n)
        total = WeightVector.zero(k, n)
        for col in cols:
            total = total + pipeline.weight(Tableau.one_column(col, n))
        got = pipeline.weight(whole)
        witness = {
            "columns": [subset_key(c) for c in cols],
            "union": whole.to_text(),
            "sum": total.to_json_list(),
            "got": got.to_json_list(),
        }
        report.record(got == total, witness, conjecture=True)
        if k == 2:
            report.record(
                ws_column_decomposition(whole, max_candidates=ws_max_candidates) == cols,
                {"columns": [subset_key(c) for c in cols], "check": "unique decomposition"},
            )
    report.details.update(
        {"k": k, "n": n, "samples": samples, "ws_max_candidates": ws_max_candidates}
    )


def _suite_positroidal_random(
    pipeline: Pipeline, report: SuiteReport, samples=200, seed=0, max_n=7, **_
):
    rng = random.Random(seed)
    for _ in range(samples):
        k = rng.choice((2, 3))
        n = rng.randint(k + 2, max_n)
        t = random_tableau(k, n, rng.randint(1, 3), rng)
        w = pipeline.weight(t)
        sub = pipeline.subdivide(w)
        info = sub.classification
        witness = {"k": k, "n": n, "tableau": t.to_text()}
        report.record(info.is_matroidal and info.is_positroidal, {**witness, "check": "positroidal"})
        violations = positive_three_term_violations(w)
        report.record(not violations, {**witness, "check": "three-term", "violations": violations[:5]})
        if n <= 6:
            report.record(not bad_edges(sub), {**witness, "check": "edges"})
        lam = [rng.randint(-3, 3) for _ in range(n)]
        offset = rng.randint(-3, 3)
        shifted = WeightVector(
            k=k,
            n=n,
            values=[x + sum(lam[i - 1] for i in b) + offset for x, b in zip(w.values, w.subsets)],
        )
        report.record(
            canonical_key(pipeline.subdivide(shifted)) == canonical_key(sub),
            {**witness, "check": "affine shift"},
        )
        a = rng.randint(1, n - k + 1)
        padded = union(t, Tableau.one_column(trivial_column(a, k), n))
        report.record(
            canonical_key(pipeline.subdivide_tableau(padded)) == canonical_key(sub),
            {**witness, "check": "trivial padding", "padding": a},
        )
    report.details.update({"samples": samples, "max_n": max_n})


def _suite_refinements(pipeline: Pipeline, report: SuiteReport, n=5, **_):
    pool = [c for c in k_subsets(2, n) if not is_frozen(c, n)]
    subs = {c: pipeline.subdivide_tableau(Tableau.one_column(c, n)) for c in pool}
    cones = 0
    for a, b in combinations(pool, 2):
        ws = weakly_separated(a, b)
        compatible = splits_compatible(split_hyperplane(subs[a]), split_hyperplane(subs[b]))
        witness = {"columns": [subset_key(a), subset_key(b)]}
        report.record(ws == compatible, {**witness, "check": "compatibility"})
        if not ws:
            continue
        cones += 1
        total = subs[a].weight + subs[b].weight
        got = pipeline.weight(Tableau.from_columns([a, b], 2, n))
        report.record(got == total, {**witness, "check": "additivity"}, conjecture=True)
        refined = pipeline.subdivide(total)
        report.record(
            sorted(refined.cell_sets, key=sorted)
            == common_refinement(subs[a], subs[b]),
            {**witness, "check": "common refinement"},
        )
    report.details.update({"n": n, "cones": cones})


class SuiteName(str, Enum):
    splits_2n = "splits-2n"
    gr38_noncoarsest = "gr38-noncoarsest"
    additivity = "additivity"
    positroidal_random = "positroidal-random"
    fixtures = "fixtures"
    refinements = "refinements"


_SUITES: Dict[SuiteName, Callable] = {
    SuiteName.splits_2n: _suite_splits_2n,
    SuiteName.gr38_noncoarsest: _suite_gr38,
    SuiteName.additivity: _suite_additivity,
    SuiteName.positroidal_random: _suite_positroidal_random,
    SuiteName.fixtures: _suite_fixtures,
    SuiteName.refinements: _suite_refinements,
}


def verify_suite(
    name: Union[SuiteName, str], pipeline: Optional[Pipeline] = None, **params
) -> SuiteReport:
    """Run one named verification suite.

    Args:
        name: One of :class:`SuiteName`.
        pipeline: Source of web models and subdivisions.
        params: Suite parameters (``n_values``, ``k``, ``n``, ``samples``,
            ``seed``, ``max_n``, ``ws_max_candidates``); unknown ones
            are ignored.

    Returns:
        The report; witnesses list every failed check.
    """
    try:
        name = SuiteName(name)
    except ValueError as err:
        raise UsageError(
            f"unknown suite {name!r}; choose from {[s.value for s in SuiteName]}"
        ) from err
    pipeline = pipeline or Pipeline()
    report = SuiteReport(name=name.value, seed=params.get("seed"))
    _log.info(f"suite {name.value} started")
    _SUITES[name](pipeline, report, **params)
    if report.witnesses:
        _log.warning(
            f"suite {name.value}: {len(report.witnesses)} witness(es), verdict {report.verdict.value}"
        )
    _log.info(f"suite {name.value}: {report.passed}/{report.checked} passed")
    return report


# trees


class TreeSplitError(ValueError):
    def __init__(self, n: int, pair):
        super().__init__(f"pair {pair} in [{n}] is frozen and has no split tree")
        self.n = n
        self.pair = pair


class TreeSplit(BaseModel):
    """Tree on leaves [n] with one internal edge separating the two blocks."""

    n: int
    pair: Tuple[int, int]
    blocks: Tuple[Tuple[int, ...], Tuple[int, ...]]

    @field_validator("blocks")
    @classmethod
    def blocks_have_two_leaves(cls, v):
        if min(len(b) for b in v) < 2:
            raise ValueError(f"every block needs at least two leaves: {v}")
        return v

    def to_dot(self) -> str:
        i, j = self.pair
        lines = [f'graph "split_{i}_{j}" {{', "  v1 -- v2;"]
        for vertex, block in zip(("v1", "v2"), self.blocks):
            lines += [f"  {vertex} -- {leaf};" for leaf in block]
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_newick(self) -> str:
        return "(" + ",".join(f"({','.join(map(str, b))})" for b in self.blocks) + ");"

    def to_json_data(self) -> dict:
        return {
            "n": self.n,
            "pair": list(self.pair),
            "blocks": [list(b) for b in self.blocks],
            "newick": self.to_newick(),
        }


def tree_split(n: int, pair: Tuple[int, int]) -> TreeSplit:
    """Leaf bipartition ``[i+1, j]`` versus the rest, in cyclic order."""
    i, j = sorted(pair)
    if not 1 <= i < j <= n:
        raise UsageError(f"need 1 <= i < j <= {n}, got {pair}")
    if j <= i + 1 or (i, j) == (1, n):
        raise TreeSplitError(n, (i, j))
    inner = tuple(range(i + 1, j + 1))
    outer = tuple(range(j + 1, n + 1)) + tuple(range(1, i + 1))
    return TreeSplit(n=n, pair=(i, j), blocks=(inner, outer))
