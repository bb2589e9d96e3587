import numpy as np
import pytest
from oracles import normal_projection

from gptshape import conformal, recover, tensors
from gptshape.conformal import ExteriorMap, faber_table
from gptshape.errors import DegenerateError, ShapeError
from gptshape.potential import Contrast
from gptshape.recover import EllipseParams


def forward(shape, sigma, M, n=1024):
    c = Contrast.from_sigma(sigma)
    return tensors.gpt_forward(conformal.boundary_frame(shape, n), c, M), c


def wavy_disk(r, eps, k, center=0j):
    """Disk of radius r displaced along the normal by 2 eps cos(k t)."""
    return conformal.curve(lambda t: center + (r + 2 * eps * np.cos(k * t)) * np.exp(1j * t))


def test_disk_recovery_of_a_disk():
    c = 0.3 + 0.4j
    g, con = forward(conformal.disk(1.5, c), 5.0, 6, 256)
    res = recover.recover_disk(g, con, 6)
    assert res.base.gamma_e == pytest.approx(1.5, rel=1e-12)
    assert res.base.e0 == pytest.approx(c, abs=1e-12)
    assert np.abs(res.fhat).max() < 1e-12


def test_disk_mode_recovery_unit_radius():
    eps, k = 2e-3, 3
    g, con = forward(wavy_disk(1.0, eps, k), 5.0, 5)
    fhat = recover.recover_disk(g, con, 5).fhat
    assert fhat[k] == pytest.approx(eps, abs=eps**2)
    assert np.abs(np.delete(fhat, k)).max() < eps**2


def test_disk_prefactor_only_exact_at_unit_radius():
    # closed and system prefactors differ by (sigma + 1) r / (sigma + r^2)
    eps, k, r, sigma = 1e-3, 2, 1.5, 5.0
    g, con = forward(wavy_disk(r, eps, k), sigma, 4)
    res = recover.recover_disk(g, con, 4)
    closed = res.fhat[k]
    system = recover.recover_disk(g, con, 4, formula="system").fhat[k]
    rd = res.base.gamma_e
    assert rd == pytest.approx(r, rel=1e-5)
    assert closed / system == pytest.approx((sigma + 1) * rd / (sigma + rd**2), rel=1e-12)
    assert system == pytest.approx(eps, rel=10 * eps)


def test_disk_fplus_channel():
    eps, k = 2e-3, 3
    g, con = forward(wavy_disk(1.0, eps, k), 5.0, 4)
    out = recover.recover_disk_fplus(g, con, 4)
    assert len(out) == 6
    assert out[k] == pytest.approx(eps, abs=eps**2)


def test_disk_fplus_refuses_near_matched_contrast():
    g, con = forward(conformal.disk(1.0), 1.05, 3, 128)
    with pytest.raises(DegenerateError):
        recover.recover_disk_fplus(g, con, 3)


def test_disk_translation_covariance():
    eps, k, c = 2e-3, 2, 0.5 - 0.25j
    g0, con = forward(wavy_disk(1.0, eps, k), 50.0, 4)
    g1, _ = forward(wavy_disk(1.0, eps, k, c), 50.0, 4)
    r0 = recover.recover_disk(g0, con, 4)
    r1 = recover.recover_disk(g1, con, 4)
    assert r1.base.e0 == pytest.approx(c, abs=1e-10)
    assert np.allclose(r1.fhat, r0.fhat, atol=1e-10)
    assert np.allclose(r1.curve(64)[1], r0.curve(64)[1] + c, atol=1e-9)


@pytest.mark.parametrize("lam", [0.5, -0.5])
def test_conformal_recovery_exact_at_extreme_contrast(lam):
    fm = conformal.asymmetric().exterior_map.shifted(0.2 - 0.1j)
    M = 8
    g = tensors.gpt_from_fpt(tensors.fpt_analytic(fm, lam, M), faber_table(fm, M))
    out = recover.recover_conformal(g, lam, M)
    assert out.gamma == pytest.approx(fm.gamma, abs=1e-12)
    assert out.a0 == pytest.approx(fm.a0, abs=1e-12)
    assert np.allclose(out.coeffs, fm.laurent(M)[1:], atol=1e-12)


def test_conformal_recovery_of_ellipse_is_inexact_off_extremes():
    fm = ExteriorMap(1.0, 0j, [0.5])
    g = tensors.gpt_from_fpt(tensors.fpt_analytic(fm, 0.75, 3), faber_table(fm, 3))
    out = recover.recover_conformal(g, 0.75, 3)
    assert abs(out.gamma - 1.0) > 1e-3


def test_equivalent_ellipse_fixed_point():
    E = EllipseParams(1.2, 0.1 + 0.3j, 0.5 * np.exp(0.7j))
    for sigma in (0.02, 5.0, np.inf):
        g, con = forward(conformal.from_map(E.to_map()), sigma, 2, 512)
        got = recover.equivalent_ellipse(g, con)
        assert got.gamma_e == pytest.approx(E.gamma_e, rel=1e-12)
        assert got.e0 == pytest.approx(E.e0, abs=1e-12)
        assert got.e1 == pytest.approx(E.e1, abs=1e-12)


def test_equivalent_ellipse_of_disk_and_degenerate():
    g, con = forward(conformal.disk(0.7), 5.0, 2, 128)
    E = recover.equivalent_ellipse(g, con)
    assert E.gamma_e == pytest.approx(0.7) and abs(E.e1) < 1e-12
    zero = tensors.GptMatrix(2, np.zeros((2, 2), complex), np.zeros((2, 2), complex), 0.75)
    with pytest.raises(DegenerateError):
        recover.equivalent_ellipse(zero, 0.75)


def test_ellipse_params_validation():
    with pytest.raises(DegenerateError):
        EllipseParams(0.0)
    with pytest.raises(ShapeError):
        EllipseParams(1.0, 0j, 1.0)


def test_st_coefficients_example():
    st = recover.st_coefficients(EllipseParams(1.0, 0j, 0.5), 0.75, 2)
    assert st.s[0] == pytest.approx(5 / 6)
    assert st.t[0] == pytest.approx(1 / 6)
    # m = 2: (3/4 - 1/32) / (1 - 1/16) and (1/4)(1/4) / (15/16)
    assert st.s[1] == pytest.approx((0.75 - 1 / 32) / (15 / 16))
    assert st.t[1] == pytest.approx(1 / 15)


def test_st_coefficients_disk():
    st = recover.st_coefficients(EllipseParams(2.0), 0.6, 3)
    assert np.allclose(st.s, 0.6 / 4.0 ** np.arange(1, 4))
    assert np.all(st.t == 0)


def test_modified_delta_vanishes_for_ellipse():
    E = EllipseParams(1.0, 0.2j, 0.4)
    g, con = forward(conformal.from_map(E.to_map()), 5.0, 5, 512)
    d1, d2 = recover.modified_gpt_delta(g, recover.equivalent_ellipse(g, con), 5, con)
    assert np.abs(d1).max() < 1e-10 and np.abs(d2).max() < 1e-10
    res = recover.recover_ellipse_perturbation(g, con, 5)
    assert np.abs(res.fhat).max() < 1e-10


def test_ellipse_method_on_perturbed_disk_base():
    # with e1 = 0 both formulas coincide with each other
    eps = 1e-3
    g, con = forward(wavy_disk(1.0, eps, 3), 5.0, 5)
    a = recover.recover_ellipse_perturbation(g, con, 5).fhat
    b = recover.recover_ellipse_perturbation(g, con, 5, formula="system").fhat
    assert np.allclose(a, b, atol=1e-4 * eps)
    assert a[3] == pytest.approx(eps, rel=0.05)


def _mode2(delta, gamma=1.0, e1=0.4):
    def z(t):
        w = gamma * np.exp(1j * t)
        return w + e1 / w + (w - e1 / w) * 2 * delta * np.cos(2 * t)

    return conformal.curve(z), z


@pytest.mark.parametrize("sigma", [np.inf, 5.0])
def test_ellipse_mode_against_projection(sigma):
    # the reference projects the true curve on the recovered ellipse's normals
    errs = []
    formulas = ("closed", "system") if np.isinf(sigma) else ("system",)
    for formula in formulas:
        e = []
        for delta in (2e-3, 1e-3):
            shape, z = _mode2(delta)
            g, con = forward(shape, sigma, 4)
            res = recover.recover_ellipse_perturbation(g, con, 4, formula=formula)
            E = res.base
            ref = normal_projection(z, E.gamma_e, E.e0, E.e1)
            e.append(abs(res.fhat[2] - ref[2]))
        errs.append(e[0] / e[1])
    assert all(3.0 < r < 5.0 for r in errs)


def test_closed_formula_first_order_error_at_finite_contrast():
    shape, z = _mode2(1e-3)
    g, con = forward(shape, 5.0, 4)
    c = recover.recover_ellipse_perturbation(g, con, 4).fhat[2]
    s = recover.recover_ellipse_perturbation(g, con, 4, formula="system").fhat[2]
    # the two differ at the size of the perturbation itself
    assert abs(c - s) > 0.05 * abs(s)


def test_perturbation_curve_and_formula_validation():
    res = recover.PerturbationResult(EllipseParams(1.0, 1j, 0.2), np.array([0, 0.01, 0]), "ellipse")
    th, z = res.curve(32)
    w = np.exp(1j * th)
    assert np.allclose(z, w + 1j + 0.2 / w + (w - 0.2 / w) * 0.02 * np.cos(th))
    g, con = forward(conformal.disk(), 5.0, 3, 128)
    with pytest.raises(ValueError):
        recover.recover_disk(g, con, 3, formula="exact")
    with pytest.raises(ValueError):
        recover.recover_ellipse_perturbation(g, con, 4)
