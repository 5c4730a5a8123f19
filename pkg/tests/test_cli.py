import json
import re

import pytest

from inflectus.cli import FIGURE_POLES, figure_function, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_analyze_inverse_z(capsys):
    code, out = run(capsys, "analyze", "--expr", "1/z")
    assert code == 0
    assert out["boundedness"]["verdict"] == "unbounded"
    assert out["boundedness"]["endCount"] == 4
    assert out["poles"][0]["order"] == 1
    assert out["definingPolynomial"] == {"coeffs": [[1, 1, 1.0]], "degree": 2}


def test_exit_codes(capsys):
    code, out = run(capsys, "analyze", "--expr", "z^^2")
    assert code == 2 and out["offset"] == 2
    code, _ = run(capsys, "analyze", "--expr", "1/(z-z)")
    assert code == 2
    code, out = run(capsys, "analyze", "--expr", "3*z")
    assert code == 4 and out["error"] == "degenerate"
    code, _ = run(capsys, "exactness", "--expr", "1/z")
    assert code == 0
    code, _ = run(capsys, "classify", "--expr", "1/z")
    assert code == 4


def test_presets_match_listed_poles():
    for n, listed in FIGURE_POLES.items():
        found = [a for a, _ in figure_function(n).poles]
        assert len(found) == len(listed)
        for p in listed:
            assert min(abs(p - a) for a in found) < 1e-12


def test_exactness_and_classify(capsys):
    code, out = run(capsys, "exactness", "--expr", "1/z^2 + 2*z")
    assert code == 0 and out["exact"] and "primitive" in out
    code, out = run(capsys, "classify", "--expr", "z^2 + i")
    assert out["class"] == "QUAD_POLY" and out["curveVerdict"]["geometry"] == "hyperbola"


def test_irreducibility(capsys):
    code, out = run(capsys, "irreducibility", "--expr", "z^2")
    assert code == 0 and out["orbitCount"] == 2


def test_trace_writes_graph(tmp_path, capsys):
    target = tmp_path / "g.json"
    code, out = run(capsys, "trace", "--expr", "1/z", "--window", "0,0,2,2", "--resolution", "128", "-o", str(target))
    assert code == 0
    dump = json.loads(target.read_text())
    assert dump["summary"]["poleValencies"] == [4]
    assert out["summary"] == dump["summary"]


def test_plot_svg(tmp_path, capsys):
    target = tmp_path / "fig1.svg"
    code, out = run(capsys, "plot", "--figure", "1", "--resolution", "256", "-o", str(target))
    assert code == 0 and out["bounded"] is True
    svg = target.read_text()
    m = re.search(r'viewBox="0 0 ([\d.]+) ([\d.]+)"', svg)
    assert m and float(m.group(1)) == pytest.approx(1024)
    for k in range(3):
        assert f'id="pole-{k}"' in svg
    assert re.search(r'id="component-0-edge-\d+"', svg)
    assert (tmp_path / "fig1.json").exists()


def test_plot_y_axis_points_down(tmp_path, capsys):
    # a single pole at +i must land in the upper half of the picture
    target = tmp_path / "p.svg"
    run(capsys, "plot", "--expr", "1/(z-i)", "--window", "0,0,2,2", "--resolution", "64", "-o", str(target))
    svg = target.read_text()
    block = svg[svg.index('id="pole-0"'):]
    y = float(re.search(r'y="([-\d.]+)"', block).group(1))
    assert y < 512
