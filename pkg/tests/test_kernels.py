import subprocess
import sys

import numpy as np
import pytest

from gptshape import conformal, kernels, potential

compiled = pytest.mark.skipif("compiled" not in kernels.available(), reason="extension not built")


@pytest.fixture
def backend():
    previous = kernels.BACKEND
    yield kernels.use
    kernels.use(previous)


def _both(backend, fn, *args):
    backend("python")
    a = fn(*args)
    backend("compiled")
    return a, fn(*args)


@compiled
@pytest.mark.parametrize("name", ["kite", "straight"])
def test_kstar_backends_agree(backend, name):
    f = conformal.boundary_frame(conformal.catalog(name), 256)
    a, b = _both(backend, lambda: potential.assemble(f).kstar)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-13)


@compiled
def test_point_kernels_agree(backend, rng):
    p = rng.standard_normal(50) + 1j * rng.standard_normal(50)
    q = 5 + rng.standard_normal(30) + 1j * rng.standard_normal(30)
    w, d = rng.random(50), rng.standard_normal(50)
    for fn, args in (
        (kernels.single_layer, (p, w, d, q)),
        (kernels.min_distance, (p, q)),
        (kernels.directed_max_min, (p, q)),
    ):
        a, b = _both(backend, fn, *args)
        assert np.allclose(a, b, rtol=1e-13)


def test_min_distance_value(backend):
    for name in kernels.available():
        backend(name)
        assert kernels.min_distance(np.array([0j, 3]), np.array([1j, 5 + 0j])) == pytest.approx(1.0)
        assert kernels.directed_max_min(np.array([0j, 3]), np.array([1j])) == pytest.approx(np.sqrt(10))


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.use("fortran")


def test_fallback_when_extension_missing():
    code = (
        "import sys; sys.modules['gptshape._ckernels'] = None\n"
        "from gptshape import kernels, conformal, tensors\n"
        "f = conformal.boundary_frame(conformal.disk(), 64)\n"
        "g = tensors.gpt_forward(f, 0.75, 1)\n"
        "print(kernels.BACKEND, kernels.available(), round(g.N2[0, 0].real, 10))"
    )
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    assert out.stdout.split()[0] == "python"
    assert "compiled" not in out.stdout
    assert float(out.stdout.split()[-1]) == pytest.approx(8 * np.pi / 3)
