import os
import subprocess
import sys

import numpy as np
import pytest

from xhermite import _accel, kernels

needs_numba = pytest.mark.skipif(_accel.numba is None, reason="numba not installed")


def _points(n=17):
    g = np.random.default_rng(3)
    return (g.uniform(-3, 3, n) + 1j * g.uniform(-0.5, 0.5, n)).astype(np.complex128)


@needs_numba
def test_horner_parity():
    a = np.random.default_rng(1).normal(size=(6, 5))
    x, y = _points(), _points()[::-1].copy()
    assert np.allclose(kernels.horner2d_jit(a, x, y), kernels._horner2d_numpy(a, x, y), rtol=1e-13)


@needs_numba
def test_hermite_functions_parity():
    x = _points()
    assert np.allclose(kernels.hermite_functions_jit(x, 40), kernels._hermite_functions_numpy(x, 40),
                       rtol=1e-12, atol=1e-300)


@needs_numba
@pytest.mark.parametrize("sigma", [(1, 2), (2, 3), (1, 2, 3, 4)])
def test_wronskian_ratio_parity(sigma):
    x = _points().real.astype(np.complex128)
    s = np.array(sigma, dtype=np.int64)
    ns = np.arange(8, dtype=np.int64)
    a = kernels.wronskian_ratios_jit(x, s, ns)
    b = kernels._wronskian_ratios_numpy(x, s, ns)
    assert np.allclose(a, b, rtol=1e-10, atol=1e-12)


def test_hermite_functions_normalised():
    x = np.linspace(-14, 14, 8001)
    psi = kernels.hermite_functions(x, 6).real
    dx = x[1] - x[0]
    gram = psi @ psi.T * dx
    assert np.allclose(gram, np.eye(7), atol=1e-10)


def test_env_flag_selects_numpy_path():
    env = dict(os.environ, XHERMITE_DISABLE_NUMBA="1")
    code = "from xhermite import _accel; print(_accel.USE_NUMBA)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"


def test_fallback_gives_same_propagator():
    code = ("from xhermite.propagator import PropagatorModel, k_sigma;"
            "print(repr(complex(k_sigma(PropagatorModel.from_sigma((2, 3)), 0.3, -0.8, 1.1))))")
    vals = []
    for flag in ("0", "1"):
        env = dict(os.environ, XHERMITE_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        vals.append(complex(out.stdout.strip()))
    assert abs(vals[0] - vals[1]) < 1e-14
