import json
import math
import os
from pathlib import Path

import pytest

import nlbif

SOURCE = Path(os.environ.get("NLBIF_SOURCE_DIR", Path(__file__).resolve().parents[2]))


@pytest.fixture(scope="module")
def odd():
    return nlbif.Nonlinearity.odd_cubic()


@pytest.fixture(scope="module")
def curves(odd):
    return nlbif.build_curves(odd, 2)


def test_nonlinearity_zeros():
    f = nlbif.Nonlinearity.split_cubic(1.0, 0.25)
    assert f.z_plus == pytest.approx(1.0)
    assert f.z_minus == pytest.approx(-2.0)
    assert not f.is_odd


def test_time_map_small_energy(odd):
    assert nlbif.tau(odd, 1e-12, 4.0) == pytest.approx(math.pi / 2, abs=1e-6)


def test_local_profile(odd):
    eq = nlbif.local_equilibrium(odd, 6.0, 2, "+", 1024)
    assert eq["sign_changes"] == 1
    assert eq["energy_identity_deviation"] < 1e-8
    assert abs(eq["r"] - eq["r_arch"]) < 1e-6 * eq["r_arch"]


def test_ccurve_anchor(odd):
    c = nlbif.CCurve(odd, 2, "-", r_max=5.0, samples=40)
    assert c(0.0) == pytest.approx(0.25, abs=1e-12)
    assert c.derivative(1.0) < 0.0


def test_equilibria_census(curves):
    res = nlbif.find_equilibria(nlbif.Diffusion.constant(1.0), curves, 5.0)
    assert res["count"] == 5
    assert sorted(p["morse_index"] for p in res["points"]) == [0, 0, 1, 1]


def test_spectral_index_matches(odd, curves):
    spectral, derivative = nlbif.spectral_index(odd, nlbif.Diffusion.constant(1.0), curves, 5.0, 2, "+", 501)
    assert spectral == derivative == 1


def test_dip_sweep(curves):
    a = nlbif.Diffusion.from_knots([(0, 1, 0), (1, 0.3, 0), (2.5, 1.2, 0)])
    grid = [0.31 + 0.073 * i for i in range(30)]
    out = nlbif.sweep(a, curves, grid)
    kinds = [e["kind"] for e in out["events"] if e["j"] == 1]
    assert kinds.count("pitchfork") == 1
    assert kinds.count("saddle-node") >= 2
    assert out["counts_consistent"]


def test_simulation_decreases_energy(odd):
    n = 64
    u0 = [0.0] + [0.1 * math.sin(math.pi * i / (n + 1)) for i in range(1, n + 1)] + [0.0]
    out = nlbif.simulate(odd, nlbif.Diffusion.constant(1.0), 5.0, u0, 2.0)
    assert out["lyapunov_monotone"]
    assert out["V"][-1] < out["V"][0]


def test_errors_are_mapped(odd):
    with pytest.raises(ValueError):
        nlbif.solve_energy(odd, 0.5, 1)


def test_run_config(tmp_path):
    status, artifacts, _ = nlbif.run(str(SOURCE / "tests/configs/equilibria_const.json"), str(tmp_path / "out"))
    assert status == 0
    assert "equilibria/nu_0.csv" in artifacts
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert [a["path"] for a in manifest["artifacts"]] == sorted(artifacts)

    status, _, _ = nlbif.run(str(SOURCE / "tests/configs/malformed_missing_diffusion.json"), str(tmp_path / "bad"))
    assert status == 2
    assert not (tmp_path / "bad").exists()
