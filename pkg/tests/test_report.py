import json
import xml.etree.ElementTree as ET

import pytest

from dpkmeans.errors import EmptyReport, UnknownFormat
from dpkmeans.harness import CellResult, ExperimentReport, ExperimentSpec, run_experiment
from dpkmeans.report import Format, emit_report, parse_csv_report, render, render_csv, render_markdown


def make_cell(dataset, init, value, k=4, seed=None, space="raw_space"):
    return CellResult(dataset=dataset, init=init, k=k, seed=seed, space=space,
                      sse_model_space=value, sse_raw_space=value,
                      distance_sum_model_space=value / 3, distance_sum_raw_space=value / 3,
                      iterations=2, converged="membership_stable", empty_cluster_events=0)


@pytest.fixture(scope="module")
def iris_report():
    spec = ExperimentSpec(datasets=["iris"], inits=["dp", "origin", "random"], ks=[3, 4], seeds=[0, 1, 2])
    return run_experiment(spec)


def test_csv_single_cell(tmp_path):
    report = ExperimentReport(spec={}, cells=[make_cell("iris", "dp", 1.5)])
    path = emit_report(report, "csv", tmp_path / "r.csv")
    lines = path.read_text().splitlines()
    assert len(lines) == 2 and lines[0].startswith("dataset,init,k,seed,space")


def test_empty_report(tmp_path):
    with pytest.raises(EmptyReport):
        emit_report(ExperimentReport(spec={}, cells=[]), "json", tmp_path / "r.json")


def test_unknown_format():
    with pytest.raises(UnknownFormat):
        render(ExperimentReport(spec={}, cells=[make_cell("iris", "dp", 1.0)]), "xlsx")


def test_markdown_table_shape():
    cells = [make_cell(ds, init, 1.0 + i) for i, ds in enumerate(["iris", "ionosphere", "seeds", "user_modeling"])
             for init in ["dp", "origin", "random"]]
    md = render_markdown(ExperimentReport(spec={}, cells=cells))
    rows = [line for line in md.splitlines() if line.startswith("|")]
    header, rule, data = rows[0], rows[1], rows[2:]
    assert len(data) == 3
    assert header.count("|") - 2 == 4  # 4 value columns after the method column
    assert all(r.count("|") == header.count("|") for r in data)
    assert "Iris" in header and "Ionosphere" in header


def test_markdown_random_shows_best_seed():
    cells = [make_cell("iris", "random", v, seed=s) for s, v in enumerate([9.0, 7.0, 8.0])]
    md = render_markdown(ExperimentReport(spec={}, cells=cells))
    assert "7.000" in md and "9.000" not in md


def test_svg_well_formed(iris_report):
    root = ET.fromstring(render(iris_report, Format.SVG))
    assert root.tag.endswith("svg")
    rects = [el for el in root.iter() if el.tag.endswith("rect")]
    assert len(rects) >= 6


def test_csv_round_trip_full_precision(iris_report):
    back = parse_csv_report(render_csv(iris_report))
    assert back == iris_report.cells
    from_json = ExperimentReport.from_dict(json.loads(render(iris_report, "json"))).cells
    assert from_json == back


def test_json_has_schema_and_environment(iris_report):
    d = json.loads(render(iris_report, "json"))
    assert d["schema_version"] == 1
    assert d["environment"]["prng"] == "numpy.random.PCG64"
    assert d["spec"]["seeds"] == [0, 1, 2]


@pytest.mark.parametrize("fmt", list(Format))
def test_every_format_writes(iris_report, tmp_path, fmt):
    path = emit_report(iris_report, fmt, tmp_path / f"out.{fmt.value}")
    assert path.stat().st_size > 0
