#################################################################################
# tableau-subdivisions Copyright (c) 2024, the tableau-subdivisions developers.
# All rights reserved.
#
# Please see the files COPYRIGHT.md and LICENSE.md for full copyright and license
# information, respectively.
#################################################################################
"""
Tests for the command-line entry point
"""
import csv
from io import StringIO
import json

import pytest

from tableau_subdivisions import census, cli
from tableau_subdivisions.hypergeom import CertificationError
from tableau_subdivisions.tableaux import DecompositionError, UsageError
from tableau_subdivisions.webtrop import WebConstructionError


@pytest.fixture
def run(tmp_path, capsys):
    cache_dir = tmp_path / "cache"

    def _run(*argv, cache=True):
        args = list(argv)
        if cache:
            args += ["--cache-dir", str(cache_dir)]
        status = cli.run(args)
        out, err = capsys.readouterr()
        return status, out, err

    _run.cache_dir = cache_dir
    return _run


@pytest.mark.unit
def test_wt(run):
    status, out, _ = run("wt", "--k", "2", "--n", "5", "--tableau", "1;3")
    assert status == cli.EXIT_OK
    assert out == "[0,0,0,0,1,0,0,0,0,0]\n"


@pytest.mark.unit
def test_wt_csv(run):
    status, out, _ = run("wt", "--k", "2", "--n", "4", "--tableau", "1;3", "--format", "csv")
    assert status == cli.EXIT_OK
    rows = list(csv.reader(StringIO(out)))
    assert rows[0] == ["subset", "value"]
    assert dict(rows[1:]) == {"1,2": "0", "1,3": "0", "1,4": "0", "2,3": "1", "2,4": "0", "3,4": "0"}


@pytest.mark.unit
def test_subdivide_frozen(run):
    status, out, _ = run("subdivide", "--k", "2", "--n", "5", "--tableau", "2;3")
    assert status == cli.EXIT_OK
    data = json.loads(out)
    assert (data["k"], data["n"]) == (2, 5)
    assert len(data["cells"]) == 1
    assert len(data["cells"][0]) == 10


@pytest.mark.unit
def test_subdivide_weights_file(run, tmp_path):
    weights = tmp_path / "w.json"
    weights.write_text("[0, 1, 0, 0, 0, 0]")
    status, out, _ = run("subdivide", "--k", "2", "--n", "4", "--weights", str(weights))
    assert status == cli.EXIT_OK
    cells = json.loads(out)["cells"]
    assert sorted(cells) == [
        ["1,2", "1,3", "1,4", "2,3", "3,4"],
        ["1,2", "1,4", "2,3", "2,4", "3,4"],
    ]


@pytest.mark.unit
def test_classify(run):
    status, out, _ = run("classify", "--k", "2", "--n", "4", "--tableau", "1;3")
    assert status == cli.EXIT_OK
    data = json.loads(out)
    assert data["cellCount"] == 2
    assert data["isSplit"] and data["isPositroidal"] and data["isCoarsest"]
    assert data["affineDim"] == 5


@pytest.mark.unit
def test_census_to_file(run, tmp_path):
    output = tmp_path / "census.csv"
    status, out, _ = run(
        "census", "--k", "2", "--n", "4", "--format", "csv", "--output", str(output)
    )
    assert status == cli.EXIT_OK
    assert out == ""
    lines = output.read_text().splitlines()
    assert lines[0] == "name,value"
    assert "split_count,2" in lines


@pytest.mark.unit
def test_census_budget(run):
    status, out, err = run("census", "--k", "2", "--n", "5", "--max-tableaux", "3")
    assert status == cli.EXIT_USAGE
    assert json.loads(out)["complete"] is False
    assert "budget of 3 exceeded" in err


@pytest.mark.component
def test_verify_fixtures(run):
    status, out, _ = run("verify", "--suite", "fixtures", "--seed", "5")
    assert status == cli.EXIT_OK
    data = json.loads(out)
    assert data["verdict"] == "pass"
    assert data["seed"] == 5


@pytest.mark.unit
def test_tree(run, tmp_path):
    dot = tmp_path / "tree.dot"
    status, out, _ = run("tree", "--n", "5", "--pair", "2,4", "--dot", str(dot))
    assert status == cli.EXIT_OK
    assert json.loads(out)["newick"] == "((3,4),(5,1,2));"
    assert dot.read_text().startswith('graph "split_2_4" {')


@pytest.mark.unit
def test_tree_frozen_pair(run):
    status, out, err = run("tree", "--n", "5", "--pair", "2,3")
    assert status == cli.EXIT_USAGE
    assert out == ""
    assert "frozen" in err


@pytest.mark.unit
def test_cache_admin(run):
    status, out, _ = run("cache", "status")
    assert status == cli.EXIT_OK
    assert json.loads(out)["count"] == 0

    status, out, _ = run("cache", "warm", "--k", "2", "--n", "4")
    assert status == cli.EXIT_OK
    data = json.loads(out)
    assert data["monomials"] == 7
    assert (run.cache_dir / "web-k2-n4.json").exists()

    status, out, _ = run("cache", "status")
    (entry,) = json.loads(out)["entries"]
    assert entry["current"]

    status, out, _ = run("cache", "clear")
    assert json.loads(out)["removed"] == 1
    assert not (run.cache_dir / "web-k2-n4.json").exists()


@pytest.mark.unit
def test_cache_warm_budget(run):
    status, _, err = run("cache", "warm", "--k", "3", "--n", "6", "--max-monomials", "5")
    assert status == cli.EXIT_USAGE
    assert "budget" in err
    assert not (run.cache_dir / "web-k3-n6.json").exists()


@pytest.mark.unit
def test_cache_dir_from_environment(run, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path / "from-env"))
    status, _, _ = run("cache", "warm", "--k", "2", "--n", "4", cache=False)
    assert status == cli.EXIT_OK
    assert (tmp_path / "from-env" / "web-k2-n4.json").exists()


@pytest.mark.unit
@pytest.mark.parametrize(
    "argv",
    [
        pytest.param(["wt", "--k", "2"], id="missing arguments"),
        pytest.param(["wt", "--k", "2", "--n", "5", "--tableau", "3;1"], id="not semistandard"),
        pytest.param(["wt", "--k", "5", "--n", "5", "--tableau", "1;2;3;4;5"], id="k not below n"),
        pytest.param(["subdivide", "--k", "2", "--n", "4"], id="no input"),
        pytest.param(["verify", "--suite", "nope"], id="unknown suite"),
        pytest.param(["tree", "--n", "5", "--pair", "2"], id="malformed pair"),
        pytest.param(["cache", "warm"], id="warm without shape"),
        pytest.param(["wt", "--k", "2", "--n", "4", "--tableau", "1;3", "--format", "xml"], id="format"),
    ],
)
def test_usage_errors(run, argv):
    status, out, err = run(*argv)
    assert status == cli.EXIT_USAGE
    assert out == ""
    assert err.startswith("error:")


@pytest.mark.unit
def test_tableau_and_weights_conflict(run, tmp_path):
    weights = tmp_path / "w.json"
    weights.write_text("[0, 0, 0, 0, 0, 0]")
    status, _, err = run(
        "subdivide", "--k", "2", "--n", "4", "--tableau", "1;3", "--weights", str(weights)
    )
    assert status == cli.EXIT_USAGE
    assert "not both" in err


@pytest.mark.unit
def test_config_file(tmp_path):
    config = tmp_path / "settings.cfg"
    config.write_text("# budgets\nmax-monomials = 10\nseed=3\n")
    settings = cli.Settings.load(config, overrides={"seed": 4}, environ={})
    assert settings.max_monomials == 10
    assert settings.seed == 4
    config.write_text("colour=blue\n")
    with pytest.raises(UsageError):
        cli.read_config(config)
    config.write_text("seed\n")
    with pytest.raises(UsageError):
        cli.read_config(config)
    with pytest.raises(UsageError):
        cli.read_config(tmp_path / "missing.cfg")


@pytest.mark.unit
def test_config_file_rejected_by_run(run, tmp_path):
    config = tmp_path / "settings.cfg"
    config.write_text("colour=blue\n")
    status, _, err = run("wt", "--k", "2", "--n", "4", "--tableau", "1;3", "--config", str(config))
    assert status == cli.EXIT_USAGE
    assert "unknown setting" in err


@pytest.mark.unit
def test_cache_status_entry_not_an_object(run):
    run.cache_dir.mkdir()
    (run.cache_dir / "web-k2-n4.json").write_text("[]")
    status, out, _ = run("cache", "status")
    assert status == cli.EXIT_OK
    (entry,) = json.loads(out)["entries"]
    assert entry["version"] is None
    assert entry["current"] is False
    # rebuilt over the bad entry
    status, out, _ = run("wt", "--k", "2", "--n", "4", "--tableau", "1;3")
    assert status == cli.EXIT_OK
    status, out, _ = run("cache", "status")
    assert json.loads(out)["entries"][0]["current"]


@pytest.mark.component
def test_verify_failure_reports_witnesses(run, monkeypatch):
    monkeypatch.setitem(census.GR25_WEIGHTS, (1, 3), (1,) * 10)
    status, out, _ = run("verify", "--suite", "fixtures")
    assert status == cli.EXIT_FAILED
    data = json.loads(out)
    assert data["verdict"] == "fail"
    (witness,) = data["witnesses"]
    assert witness["tableau"] == "1;3"
    assert witness["expected"] == [1] * 10
    assert witness["got"] == [0, 0, 0, 0, 1, 0, 0, 0, 0, 0]


@pytest.mark.component
def test_verify_search_bound(run, tmp_path, monkeypatch):
    seen = []

    def verify(name, pipeline=None, **params):
        seen.append(params["ws_max_candidates"])
        return census.SuiteReport(name=name)

    monkeypatch.setattr(cli, "verify_suite", verify)
    status, _, _ = run("verify", "--suite", "additivity", "--ws-max-candidates", "40")
    assert status == cli.EXIT_OK
    config = tmp_path / "settings.cfg"
    config.write_text("ws-max-candidates = 75\n")
    status, _, _ = run("verify", "--suite", "additivity", "--config", str(config))
    assert status == cli.EXIT_OK
    assert seen == [40, 75]


@pytest.mark.unit
@pytest.mark.parametrize(
    "argv",
    [
        pytest.param(["census", "--k", "2", "--n", "5", "--seed", "3"], id="census"),
        pytest.param(["subdivide", "--k", "2", "--n", "5", "--tableau", "1,2;3,5"], id="subdivide"),
    ],
)
def test_output_is_deterministic(run, argv):
    first = run(*argv)
    second = run(*argv)
    assert first[0] == cli.EXIT_OK
    assert first[:2] == second[:2]
    assert first[1]


@pytest.mark.unit
@pytest.mark.parametrize(
    "target,error,argv",
    [
        pytest.param(
            "regular_subdivision",
            CertificationError("facet does not separate", cell=[(1, 2), (1, 3)]),
            ["subdivide", "--k", "2", "--n", "4", "--tableau", "1;3"],
            id="certification",
        ),
        pytest.param(
            "build_web",
            WebConstructionError("negative coefficient"),
            ["cache", "warm", "--k", "2", "--n", "4"],
            id="web construction",
        ),
        pytest.param(
            "weight_of",
            DecompositionError("not equivalent"),
            ["wt", "--k", "2", "--n", "4", "--tableau", "1;3"],
            id="decomposition",
        ),
    ],
)
def test_internal_failures(run, monkeypatch, target, error, argv):
    def fail(*args, **kwargs):
        raise error

    monkeypatch.setattr(cli, target, fail)
    status, out, err = run(*argv)
    assert status == cli.EXIT_FAILED
    assert err.startswith("error:")
    data = json.loads(out)
    assert data["error"] == type(error).__name__
    assert data["message"] == str(error)
    if isinstance(error, CertificationError):
        assert data["cell"] == ["1,2", "1,3"]
