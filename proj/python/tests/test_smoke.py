import math

import numpy as np
import pytest

import otoclab


def test_exact_cat_series():
    n = 1024
    series = otoclab.xp_otoc(otoclab.MapSpec.cat(0.0), n, t_max=8)
    assert len(series) == 9
    assert series.c[3] == pytest.approx(math.sin(13 * math.pi / n) ** 2, abs=1e-12)
    assert otoclab.analytic_cat_otoc(3, n)["a_t"] == 13
    assert all(abs(o2 - 0.25) < 1e-12 for o2 in series.o2)


def test_operators_and_maps():
    n = 16
    x = otoclab.sine_position(n)
    assert x.is_diagonal
    dense = x.to_dense()
    assert np.allclose(dense, dense.conj().T)
    u = otoclab.quantize(otoclab.MapSpec.standard(19.74), n).materialize()
    assert np.allclose(u.conj().T @ u, np.eye(n), atol=1e-10)
    assert otoclab.cat_matrix_power(200)[0] > 2**64
    q, p = otoclab.classical_step(otoclab.MapSpec.cat(0.0), 0.1, 0.2)
    assert (q, p) == pytest.approx((0.4, 0.3))


def test_kernel_and_channel():
    kernel = otoclab.build_kernel(32, 0.1)
    assert kernel.weights.sum() == pytest.approx(1.0)
    channel = otoclab.Channel(otoclab.quantize(otoclab.MapSpec.cat(0.02), 32), 0.1)
    eye = np.eye(32, dtype=complex)
    assert np.abs(channel.step(eye) - eye).max() < 1e-12


def test_resonances():
    channel = otoclab.Channel(otoclab.quantize(otoclab.MapSpec.cat(0.02), 12), 0.5)
    dense = otoclab.dense_spectrum(channel)
    lead = otoclab.leading_nontrivial(dense)
    assert abs(dense.alphas[0] - 1) < 1e-10
    kr = otoclab.krylov_leading(channel, otoclab.random_traceless_hermitian(12, 7), depth=100)
    assert abs(abs(kr.alphas[0]) - abs(dense.alphas[lead])) < 1e-3


def test_lyapunov():
    est = otoclab.lyapunov(otoclab.MapSpec.cat(0.0), 50, 30, 1)
    assert est.lam == pytest.approx(otoclab.cat_lyapunov_exponent(), abs=1e-10)


def test_runner(tmp_path):
    out = otoclab.runner.run_otoc({"N": 64, "t_max": 6, "outputs": str(tmp_path / "otoc")})
    assert (tmp_path / "otoc" / "otoc.csv").exists()
    assert "manifest.txt" in {p.name for p in out["directory"].iterdir()}
    with pytest.raises(otoclab.RunError):
        otoclab.runner.run_otoc({"bogus": 1})
