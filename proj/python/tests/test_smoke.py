import json
import math

import numpy as np
import pytest

import anosov_lab as al

SQ5 = math.sqrt(5)
FUCHSIAN = {
    "generators": [
        {"label": "a", "matrix": [[(3 + SQ5) / 2, 0], [0, (3 - SQ5) / 2]]},
        {"label": "b", "matrix": [[1.5, SQ5 / 2], [SQ5 / 2, 1.5]]},
    ],
}


def tau3(recipe):
    return dict(recipe, chain=[{"op": "tau", "d": 3}])


def test_tau_d_ladder():
    g = np.array([[2.0, 1.0], [0.0, 0.5]])
    mod = al.eigen_moduli(al.tau_d(g, 4))
    assert np.allclose(mod, [8.0, 2.0, 0.5, 0.125], rtol=1e-12)


def test_wedge_of_diagonal():
    w = al.wedge_power(np.diag([1.0, 2.0, 3.0]), 2)
    assert np.allclose(np.diag(w), [2.0, 3.0, 6.0])


def test_su21_diagonal():
    mod = al.eigen_moduli(al.build_su21_rep(np.diag([2.0, 1.0, 0.5]).astype(complex)))
    assert np.allclose(mod, [4, 2, 2, 1, 1, 1, 0.5, 0.5, 0.25], atol=1e-8)


def test_hilbert_closed_case():
    assert al.hilbert_distance_psd(np.eye(2), np.diag([2.0, 1.0])) == pytest.approx(math.log(2), abs=1e-12)


def test_alpha_fuchsian_tau3():
    est = al.alpha_estimate(tau3(FUCHSIAN), 2, 5)
    assert est["value"] == pytest.approx(2.0, abs=1e-9)
    assert est["converged"]


def test_gap_profile_linear():
    gp = al.gap_profile(FUCHSIAN, 1, 6)
    assert gp["linear_growth"]
    assert gp["slope"] > 0.05


def test_limit_points_on_conic():
    words, pts = al.limit_points(tau3(FUCHSIAN), 2, 4)
    assert len(words) == pts.shape[0] > 20
    # Monomial coordinates (x^2, 2xy, y^2) satisfy 4 p0 p2 = p1^2.
    assert np.max(np.abs(4 * pts[:, 0] * pts[:, 2] - pts[:, 1] ** 2)) < 1e-8


def test_config_errors():
    with pytest.raises(al.ConfigError, match="at least one generator required"):
        al.parse_config({"representation": {"generators": []}, "experiment": {"kind": "cones"}})
    with pytest.raises(ValueError, match=r"config:3: /experiment/m"):
        al.parse_config('{"representation": {"generators": [{"matrix": [[2,0],[0,0.5]]}]},\n'
                        ' "experiment": {"kind": "alpha",\n'
                        '   "m": 5}}')


def test_examples_validate():
    entries = al.examples()
    assert len(entries) == 5
    for name, description, path in entries:
        assert description
        with open(path) as f:
            cfg = al.parse_config(f.read(), path)
        assert cfg["name"] == name


def test_run_writes_summary(tmp_path):
    path = next(p for n, _, p in al.examples() if n == "schottky_sl2")
    code, summary = al.run(path, radius=4, out=tmp_path)
    assert code == 0
    assert summary["schema_version"] == 1
    assert summary["radius"] == 4
    on_disk = json.loads((tmp_path / "summary.json").read_text())
    assert on_disk["config"]["hash"] == summary["config"]["hash"]
    assert (tmp_path / "spectra.csv").read_text().startswith("word,length,mu_1,mu_2,lambda_1,lambda_2,ratio_m")
