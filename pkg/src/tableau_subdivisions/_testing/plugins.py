from __future__ import (
    annotations,
)  # allows using A | B syntax for unions in Python < 3.10

try:
    from typing import TypeAlias
except ImportError:
    TypeAlias = type

import pytest

from tableau_subdivisions.census import Pipeline, SuiteName, SuiteReport, verify_suite
from tableau_subdivisions.serialize import canonical_json
from . import util


Target: TypeAlias = "tuple[int, int]"

DEFAULT_TEST_CLASS = "tableau_subdivisions._testing.default_tests:TestCensusTarget"


class SuitePasses(pytest.Item):
    """Runs one verification suite; fails with the first witnesses as the report."""

    def __init__(self, *, suite: SuiteName, seed: int | None = None, **kwargs):
        super().__init__(**kwargs)
        self.suite = suite
        self.seed = seed
        self.report: SuiteReport | None = None

    def runtest(self):
        params = {} if self.seed is None else {"seed": self.seed}
        self.report = verify_suite(self.suite, **params)
        assert self.report.ok

    def repr_failure(self, excinfo):
        if self.report is None:
            return super().repr_failure(excinfo)
        shown = self.report.witnesses[:10]
        return (
            f"suite {self.suite.value}: verdict {self.report.verdict.value}, "
            f"{self.report.passed}/{self.report.checked} checks passed\n"
            + canonical_json(shown)
        )


class CensusGates(pytest.Collector):
    """
    Sits directly below the Session and owns every item of the plugin: one
    SuitePasses item per requested suite, then the census test class.
    """

    def __init__(
        self,
        *,
        test_class: type | str,
        suites: list[tuple[pytest.Mark, SuiteName]],
        seed: int | None,
        with_targets: bool,
        **kwargs,
    ):
        super().__init__(**kwargs)
        self.test_class = test_class
        self.suites = list(suites)
        self.seed = seed
        self.with_targets = with_targets

    def collect(self):
        for marker, suite in self.suites:
            item = SuitePasses.from_parent(
                self, name=f"suite:{suite.value}", suite=suite, seed=self.seed
            )
            item.add_marker(marker)
            yield item
        if self.with_targets:
            yield util.census_class_collector(self.test_class, parent=self)


class PositroidCensusPlugin:
    marker_name = "census"

    def __init__(self):
        self.enabled = False
        self.name: str | None = None
        self.suites: list[tuple[pytest.Mark, SuiteName]] = []
        self.targets: list[tuple[pytest.Mark, Target]] = []
        self.seed: int | None = None
        self.test_class: str = DEFAULT_TEST_CLASS

    def pytest_addoption(
        self, parser: pytest.Parser, pluginmanager: pytest.PytestPluginManager
    ) -> None:
        self.name = pluginmanager.get_name(self)
        group = parser.getgroup(
            self.name,
            description="split censuses and verification suites as test items",
        )
        group.addoption(
            "--positroid-census",
            action="store_true",
            default=False,
            dest="pc_enabled",
            help="collect the census targets and verification suites given below",
        )
        group.addoption(
            "--verify-suites",
            nargs="+",
            action="extend",
            dest="pc_suites",
            metavar="SUITE",
            help=f"suites to run, any of {', '.join(s.value for s in SuiteName)}",
        )
        group.addoption(
            "--census-targets",
            nargs="+",
            action="extend",
            dest="pc_targets",
            metavar="K,N",
            help="hypersimplices to run the census test class on, e.g. 3,8 4,8",
        )
        group.addoption(
            "--census-seed",
            type=int,
            default=None,
            dest="pc_seed",
            help="seed passed to the randomized suites",
        )
        group.addoption(
            "--test-class",
            default=DEFAULT_TEST_CLASS,
            dest="pc_test_class",
            metavar="MODULE:CLASS",
            help="test class run once per census target",
        )

    def pytest_configure(self, config: pytest.Config) -> None:
        opts = config.option
        self.enabled = bool(opts.pc_enabled)
        if not self.enabled:
            config.pluginmanager.unregister(self)
            return
        try:
            suites = [SuiteName(s) for s in opts.pc_suites or ()]
        except ValueError as err:
            raise pytest.UsageError(str(err)) from err
        self.suites = [(self.marker(s.value), s) for s in suites]
        targets = [util.parse_target(t) for t in opts.pc_targets or ()]
        self.targets = [(self.marker(*t), t) for t in targets]
        self.seed = opts.pc_seed
        self.test_class = opts.pc_test_class
        config.addinivalue_line(
            "markers",
            f"{self.marker_name}(k, n | suite): tests of one census target or one suite",
        )

    def marker(self, *args) -> pytest.Mark:
        return getattr(pytest.mark, self.marker_name)(*args)

    # tryfirst=True to make it show up last (after output from other plugins)
    @pytest.hookimpl(tryfirst=True)
    def pytest_report_header(self, config, start_path) -> list[str]:
        lines = [
            "suites: " + (", ".join(s.value for _, s in self.suites) or "none"),
            "targets: " + (" ".join(f"Gr({k},{n})" for _, (k, n) in self.targets) or "none"),
            f"seed: {self.seed}",
            f"test class: {self.test_class}",
        ]
        return [f"{self.name}: {line}" for line in lines]

    @pytest.hookimpl(wrapper=True)
    def pytest_make_collect_report(self, collector: pytest.Collector):
        report: pytest.CollectReport = yield
        if isinstance(collector, pytest.Session):
            # a sibling of the usual top-level directory collector
            report.result.append(
                CensusGates.from_parent(
                    collector,
                    name=self.name,
                    nodeid=self.name,
                    test_class=self.test_class,
                    suites=self.suites,
                    seed=self.seed,
                    with_targets=bool(self.targets),
                )
            )
        return report

    def pytest_generate_tests(self, metafunc: pytest.Metafunc) -> None:
        if "census_target" not in metafunc.fixturenames:
            return
        metafunc.parametrize(
            "census_target",
            [
                pytest.param(target, id=f"Gr({target[0]},{target[1]})", marks=[marker])
                for marker, target in self.targets
            ],
            # one census per target, shared by the whole class
            indirect=True,
            scope="class",
        )

    @pytest.fixture(scope="class")
    def census_target(self, request: pytest.FixtureRequest) -> Target:
        return tuple(request.param)

    @pytest.fixture(scope="session")
    def census_pipeline(self) -> Pipeline:
        return Pipeline()

    def pytest_collection_modifyitems(self, items: list[pytest.Item]) -> None:
        def by_marker(item: pytest.Item):
            marker = item.get_closest_marker(self.marker_name)
            if marker is None:
                return ()
            # suites (named) sort after numeric targets
            return tuple((isinstance(arg, str), arg) for arg in marker.args)

        items.sort(key=by_marker)


plugin = PositroidCensusPlugin()
