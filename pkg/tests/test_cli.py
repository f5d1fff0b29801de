import csv
import io

import pytest

from cutquad.cli import EXIT_BACKEND, EXIT_OK, EXIT_SPEC, EXIT_USAGE, main, parse_h


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_parse_h_fractions():
    assert parse_h("1/64") == 1 / 64
    assert parse_h("0.25") == 0.25


def test_area_both_backends(capsys):
    code, out, _ = _run(capsys, "area", "--case", "circle", "--q", "3", "--h", "1/4")
    rows = _rows(out)
    assert code == EXIT_OK
    assert rows[0][:3] == ["step", "h", "backend"]
    assert [r[2] for r in rows[1:]] == ["implicit", "parametric"]
    npts = rows[0].index("n_points")
    assert [r[npts] for r in rows[1:]] == ["36", "36"]


def test_sweep_row_count(capsys):
    code, out, _ = _run(capsys, "sweep", "--case", "line", "--steps", "5", "--backend", "implicit")
    assert code == EXIT_OK
    assert len(_rows(out)) == 6


def test_points_dump(capsys, tmp_path):
    dest = tmp_path / "pts.csv"
    code, _, _ = _run(capsys, "points", "--case", "circle", "--backend", "parametric", "-o", str(dest))
    rows = _rows(dest.read_text())
    assert code == EXIT_OK
    assert rows[0] == ["x", "y", "w", "cell_i", "cell_j"]
    assert len(rows) == 37


def test_points_needs_backend(capsys):
    code, _, err = _run(capsys, "points", "--case", "circle")
    assert code == EXIT_USAGE and "backend" in err


def test_spec_errors(capsys, tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("type: implicit\nconstraints:\n  - circle: {cx: 0.5, cy: 0.5}\n")
    code, _, err = _run(capsys, "area", "--spec", str(bad))
    assert code == EXIT_SPEC
    assert "line 3" in err and "constraints[0].circle.r" in err


def test_backend_mismatch(capsys, tmp_path):
    good = tmp_path / "c.yaml"
    good.write_text("type: implicit\nconstraints:\n  - circle: {cx: 0.5, cy: 0.5, r: 0.2}\n")
    code, _, err = _run(capsys, "area", "--spec", str(good), "--backend", "parametric", "--h", "1/4")
    assert code == EXIT_BACKEND and "implicit" in err
    code, out, _ = _run(capsys, "area", "--spec", str(good), "--backend", "implicit", "--h", "1/4", "--reference", "0.12566370614359174")
    assert code == EXIT_OK and len(_rows(out)) == 2


@pytest.mark.parametrize("argv", [["area", "--case", "circle", "--h", "0.3"], ["area", "--case", "circle", "--q", "0"], ["bogus"]])
def test_usage_errors(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == EXIT_USAGE


def test_elasticity_single_level(capsys):
    code, out, _ = _run(capsys, "elasticity", "--case", "square-plate", "--p", "2", "--h", "1/8", "--backend", "implicit")
    rows = _rows(out)
    assert code == EXIT_OK
    assert rows[0] == ["case", "backend", "p", "h", "n_dofs", "n_quad_points", "rel_l2_error", "cond_estimate"]
    assert float(rows[1][6]) == pytest.approx(0.00476, rel=1e-2)
