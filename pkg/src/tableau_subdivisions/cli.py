#################################################################################
# tableau-subdivisions Copyright (c) 2024, the tableau-subdivisions developers.
# All rights reserved.
#
# Please see the files COPYRIGHT.md and LICENSE.md for full copyright and license
# information, respectively.
#################################################################################
"""
Command-line entry point.

Exit status: 0 on success, 1 on usage, input or budget errors, and 2 when a
verification fails or a conjecture has a counterexample (the report, with its
witnesses, is still written). A computed result that fails its
own consistency check also exits with 2 and prints the failure as JSON.
"""

__author__ = "tableau-subdivisions developers"

# stdlib
import argparse
from io import StringIO
import json
import logging
import os
from pathlib import Path
import sys
from typing import Any, Dict, Literal, Optional, Sequence

# third-party
from pydantic import BaseModel, Field, ValidationInfo, field_validator

# package
from tableau_subdivisions.census import (
    CensusBudgetError,
    Pipeline,
    SuiteName,
    split_census,
    tree_split,
    verify_suite,
)
from tableau_subdivisions.hypergeom import (
    CertificationError,
    Hypersimplex,
    classify,
    regular_subdivision,
)
from tableau_subdivisions.serialize import (
    atomic_write_text,
    canonical_json,
    subset_key,
    write_csv,
)
from tableau_subdivisions.tableaux import DecompositionError, UsageError, parse_tableau
from tableau_subdivisions.webtrop import (
    BudgetExceededError,
    WebCache,
    WebConstructionError,
    WeightVector,
    build_web,
    weight_of,
)

_log = logging.getLogger(__name__)

CACHE_ENV = "TABLEAU_SUBDIVISIONS_CACHE"
EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class Settings(BaseModel):
    cache_dir: Path = Path("~/.cache/tableau-subdivisions")
    max_monomials: int = Field(default=2_000_000, gt=0)
    max_tableaux: int = Field(default=100_000, gt=0)
    ws_max_candidates: int = Field(default=1_000_000, gt=0)
    seed: int = 20240501
    samples: int = Field(default=200, ge=0)
    workers: int = Field(default=1, ge=1)

    @classmethod
    def load(
        cls,
        config: Optional[Path] = None,
        overrides: Optional[Dict[str, Any]] = None,
        environ: Optional[Dict[str, str]] = None,
    ) -> "Settings":
        """Defaults, then the environment, then the config file, then ``overrides``."""
        environ = os.environ if environ is None else environ
        values: Dict[str, Any] = {}
        if environ.get(CACHE_ENV):
            values["cache_dir"] = environ[CACHE_ENV]
        if config is not None:
            values.update(read_config(config))
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls(**values)


def read_config(path: Path) -> Dict[str, str]:
    """Parse ``key=value`` lines; ``#`` starts a comment.

    Raises:
        UsageError: a line is malformed or names an unknown setting.
    """
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise UsageError(f"cannot read config file {path}: {err}") from err
    for num, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep:
            raise UsageError(f"{path}:{num}: expected key=value, got {line!r}")
        if key not in Settings.model_fields:
            raise UsageError(f"{path}:{num}: unknown setting {key!r}")
        values[key] = value.strip()
    return values


class Invocation(BaseModel):
    """One parsed command line."""

    command: str
    action: Optional[str] = None
    k: Optional[int] = None
    n: Optional[int] = None
    tableau: Optional[str] = None
    weights: Optional[Path] = None
    output: Optional[Path] = None
    format: Literal["json", "csv"] = "json"
    settings: Settings = Field(default_factory=Settings)

    @field_validator("weights")
    @classmethod
    def one_input_source(cls, v, info: ValidationInfo):
        if v is not None and info.data.get("tableau") is not None:
            raise ValueError("give either --tableau or --weights, not both")
        return v

    def require_shape(self) -> None:
        if self.k is None or self.n is None:
            raise UsageError(f"{self.command} needs --k and --n")

    def weight(self, pipeline: Pipeline) -> WeightVector:
        self.require_shape()
        if self.tableau is not None:
            t = parse_tableau(self.tableau, self.k, self.n)
            return weight_of(pipeline.model(self.k, self.n), t)
        if self.weights is not None:
            try:
                values = json.loads(self.weights.read_text(encoding="utf-8"))
            except (OSError, ValueError) as err:
                raise UsageError(f"cannot read weights from {self.weights}: {err}") from err
            if not isinstance(values, list):
                raise UsageError(f"{self.weights}: expected a JSON array")
            return WeightVector(k=self.k, n=self.n, values=values)
        raise UsageError(f"{self.command} needs --tableau or --weights")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _pair(text: str):
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"expected I,J, got {text!r}") from err
    return i, j


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", type=Path, help="key=value settings file")
    common.add_argument("--cache-dir", type=Path, help=f"web model cache (env {CACHE_ENV})")
    common.add_argument("--max-monomials", type=int, help="expansion budget")
    common.add_argument("--workers", type=int, help="worker processes")
    common.add_argument("--seed", type=int, help="seed of random suites")
    common.add_argument("--output", type=Path, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("-v", "--verbose", action="count", default=0)

    shape = _Parser(add_help=False)
    shape.add_argument("--k", type=int, required=True)
    shape.add_argument("--n", type=int, required=True)

    source = _Parser(add_help=False)
    source.add_argument("--tableau", help='rows separated by ";", entries by ","')
    source.add_argument("--weights", type=Path, help="JSON array in lexicographic order")

    parser = _Parser(
        prog="tableau-subdivisions",
        description="Subdivisions of hypersimplices from semistandard Young tableaux.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("wt", parents=[common, shape], help="weight vector of a tableau")
    p.add_argument("--tableau", required=True)
    sub.add_parser("subdivide", parents=[common, shape, source], help="regular subdivision")
    sub.add_parser("classify", parents=[common, shape, source], help="subdivision type")
    p = sub.add_parser("census", parents=[common, shape], help="split census of Δ(k, n)")
    p.add_argument("--max-tableaux", type=int)
    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", required=True, choices=[s.value for s in SuiteName])
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--samples", type=int)
    p.add_argument("--ws-max-candidates", type=int, help="search bound for column decompositions")
    p = sub.add_parser("tree", parents=[common], help="tree of a split of Δ(2, n)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pair", type=_pair, required=True, help="I,J")
    p.add_argument("--dot", type=Path, help="write the tree as DOT here")
    p = sub.add_parser("cache", parents=[common], help="web model cache")
    p.add_argument("action", choices=("status", "clear", "warm"))
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    return parser


def cache_admin(action: str, k: Optional[int], n: Optional[int], settings: Settings) -> dict:
    """Report on, empty or fill the web model cache.

    Raises:
        UsageError: ``warm`` without ``k`` and ``n``.
        BudgetExceededError: ``warm`` beyond ``settings.max_monomials``.
    """
    cache = WebCache(settings.cache_dir)
    if action == "status":
        entries = cache.status()
        return {"directory": str(cache.directory), "entries": entries, "count": len(entries)}
    if action == "clear":
        removed = cache.clear()
        _log.info(f"removed {removed} cache entries from {cache.directory}")
        return {"directory": str(cache.directory), "removed": removed}
    if action == "warm":
        if k is None or n is None:
            raise UsageError("cache warm needs --k and --n")
        model = build_web(k, n, cache=cache, max_monomials=settings.max_monomials)
        return {
            "k": k,
            "n": n,
            "path": str(cache.path_for(k, n)),
            "monomials": model.monomial_count(),
        }
    raise UsageError(f"unknown cache action {action!r}")


def _emit(inv: Invocation, data: Any, report=None) -> None:
    if inv.format == "csv":
        if report is None:
            raise UsageError(f"--format csv is not available for {inv.command}")
        buf = StringIO()
        report.to_csv(buf)
        text = buf.getvalue()
    else:
        text = canonical_json(data)
    if inv.output is None:
        sys.stdout.write(text)
    else:
        atomic_write_text(inv.output, text)


class _WeightRows:
    def __init__(self, w: WeightVector):
        self.w = w

    def to_csv(self, output) -> int:
        rows = [(subset_key(s), x) for s, x in zip(self.w.subsets, self.w.to_json_list())]
        return write_csv(output, ("subset", "value"), rows)


def _dispatch(inv: Invocation, args: argparse.Namespace) -> int:
    settings = inv.settings
    if inv.command == "cache":
        _emit(inv, cache_admin(inv.action, inv.k, inv.n, settings))
        return EXIT_OK
    if inv.command == "tree":
        tree = tree_split(args.n, args.pair)
        if args.dot is not None:
            atomic_write_text(args.dot, tree.to_dot())
        _emit(inv, tree.to_json_data())
        return EXIT_OK

    pipeline = Pipeline(
        cache=WebCache(settings.cache_dir), max_monomials=settings.max_monomials
    )
    if inv.command == "wt":
        w = inv.weight(pipeline)
        _emit(inv, w.to_json_list(), _WeightRows(w))
        return EXIT_OK
    if inv.command in ("subdivide", "classify"):
        w = inv.weight(pipeline)
        sub = regular_subdivision(Hypersimplex(k=inv.k, n=inv.n), w, pipeline.max_cells)
        if inv.command == "subdivide":
            _emit(inv, sub.to_json_data())
        else:
            _emit(inv, classify(sub).model_dump(by_alias=True))
        return EXIT_OK
    if inv.command == "census":
        inv.require_shape()
        try:
            report = split_census(
                inv.k,
                inv.n,
                pipeline,
                max_tableaux=settings.max_tableaux,
                workers=settings.workers,
                seed=settings.seed,
            )
        except CensusBudgetError as err:
            _emit(inv, err.report.to_json_data(), err.report)
            raise
        _emit(inv, report.to_json_data(), report)
        return EXIT_OK if report.passed else EXIT_FAILED
    if inv.command == "verify":
        params: Dict[str, Any] = {
            "seed": settings.seed,
            "samples": settings.samples,
            "ws_max_candidates": settings.ws_max_candidates,
        }
        if args.n:
            params["n_values"] = args.n
            params["n"] = args.n[0]
        if args.k is not None:
            params["k"] = args.k
        report = verify_suite(args.suite, pipeline, **params)
        _emit(inv, report.to_json_data(), report)
        return EXIT_OK if report.ok else EXIT_FAILED
    raise UsageError(f"unknown command {inv.command!r}")


def _setup_logging(verbosity: int) -> None:
    level = max(logging.DEBUG, logging.WARNING - 10 * verbosity)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv`` and run one subcommand.

    Returns:
        Exit status, see the module docstring.
    """
    try:
        args = build_parser().parse_args(argv)
        _setup_logging(args.verbose)
        settings = Settings.load(
            config=args.config,
            overrides={
                "cache_dir": args.cache_dir,
                "max_monomials": args.max_monomials,
                "workers": args.workers,
                "seed": args.seed,
                "max_tableaux": getattr(args, "max_tableaux", None),
                "samples": getattr(args, "samples", None),
                "ws_max_candidates": getattr(args, "ws_max_candidates", None),
            },
        )
        inv = Invocation(
            command=args.command,
            action=getattr(args, "action", None),
            k=getattr(args, "k", None),
            n=args.n if isinstance(getattr(args, "n", None), int) else None,
            tableau=getattr(args, "tableau", None),
            weights=getattr(args, "weights", None),
            output=args.output,
            format=args.format,
            settings=settings,
        )
        return _dispatch(inv, args)
    except BudgetExceededError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (CertificationError, WebConstructionError, DecompositionError) as err:
        failure = {"error": type(err).__name__, "message": str(err)}
        if getattr(err, "cell", None) is not None:
            failure["cell"] = sorted(subset_key(b) for b in err.cell)
        sys.stdout.write(canonical_json(failure))
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAILED
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
