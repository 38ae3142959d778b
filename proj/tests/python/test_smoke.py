import json
import math

import numpy as np
import pytest

import qgeom

SX = np.array([[0, 1], [1, 0]], dtype=complex)


def test_hand_value():
    rho = np.diag([0.75, 0.25]).astype(complex)
    assert qgeom.metric_unitary(rho, SX) == pytest.approx(2 - math.sqrt(3), rel=1e-13)
    drho = 1j * (SX @ rho - rho @ SX)
    t = qgeom.fs_qgt(rho, [drho])
    assert t["gamma"][0, 0] == pytest.approx(2 - math.sqrt(3), rel=1e-13)
    nu = np.array([1, 0], dtype=complex)
    assert qgeom.metric_cptp_dilation(rho, np.kron(SX, np.eye(2)), nu) == pytest.approx(2 - math.sqrt(3))


def test_sqrt_derivative_solves_sylvester():
    rho = qgeom.random_density(3, 3, 4)
    rng = np.random.default_rng(1)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    d = a + a.conj().T
    d -= np.trace(d) / 3 * np.eye(3)
    c = qgeom.sqrt_derivative(rho, d)
    w, v = np.linalg.eigh(rho)
    s = v @ np.diag(np.sqrt(w)) @ v.conj().T
    assert np.abs(s @ c + c @ s - d).max() < 1e-10


def test_commuting_family():
    for th in [0.1, 0.5, 0.9]:
        rho = np.diag([th, 1 - th]).astype(complex)
        drho = np.diag([1.0, -1.0]).astype(complex)
        assert qgeom.fs_qgt(rho, [drho])["gamma"][0, 0] == pytest.approx(1 / (4 * th * (1 - th)))
        assert qgeom.sld_qfi(rho, [drho])[0, 0] == pytest.approx(1 / (th * (1 - th)))
    rho = np.diag([0.25, 0.75]).astype(complex)
    drho = np.diag([1.0, -1.0]).astype(complex)
    assert qgeom.alpha_dynamical_phase(rho, [drho], 2.0)[0] == pytest.approx(-0.5j)
    g1 = qgeom.alpha_qgt(rho, [drho], 1.0)["gamma"]
    assert g1[0, 0] == pytest.approx(qgeom.fs_qgt(rho, [drho])["gamma"][0, 0])


def test_means():
    a = np.diag([0.8, 0.2]).astype(complex)
    b = np.diag([0.2, 0.8]).astype(complex)
    assert np.allclose(qgeom.sigma_mean(a, b, "geometric"), np.diag([0.4, 0.4]))
    assert np.allclose(qgeom.sigma_mean(a, b, "arithmetic"), (a + b) / 2)


def test_generator_and_sampling():
    rho = np.diag([0.75, 0.25]).astype(complex)
    h, residual = qgeom.generator_commutator(rho, SX)
    assert residual < 1e-10
    psi = np.sqrt(rho).reshape(-1)
    est = qgeom.simulate_variance(h, psi, 100000, 1)
    assert est["exact_variance"] == pytest.approx(2 - math.sqrt(3))
    assert abs(est["sample_variance"] - est["exact_variance"]) <= 3 * est["stderr"]


def test_errors():
    with pytest.raises(qgeom.QgeomError, match="NonHermitianInput"):
        qgeom.metric_unitary(np.eye(2, dtype=complex) / 2, np.array([[0, 1], [0, 0]], dtype=complex))
    with pytest.raises(qgeom.QgeomError, match="UnknownSuite"):
        qgeom.run_suite("bogus")
    assert issubclass(qgeom.QgeomError, ValueError)


def test_suite_and_cli():
    reports = qgeom.run_suite("gauge", seed=3, samples=5)
    assert reports[0]["passed"]
    code, out, _ = qgeom.run_cli(["--seed", "3", "verify", "--suite", "gauge", "--samples", "5"])
    assert code == 0
    assert json.loads(out)["suites"][0]["cases"] == reports[0]["cases"]
    assert qgeom.run_cli(["verify", "--suite", "bogus"])[0] == 4
