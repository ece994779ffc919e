import math

import numpy as np
import pytest

import twobody.coefficients as cf
from twobody import embedded
from twobody.algebra import build_adapted_basis, realize_algebra
from twobody.errors import DegenerateBlock
from twobody.spaces import Family, hyperbolic_partner, make_space
from twobody.verify import _draw_space


def params_(m1=1.0, m2=1.0, alpha=0.5, pot=None):
    return cf.TwoBodyParams(m1=m1, m2=m2, alpha=alpha,
                            potential=pot or cf.Potential())


def test_symmetric_cancellations():
    sp = make_space(Family.SPHERE, 2, 1.0)
    p = params_()
    assert cf.gamma_blocks(sp, p, 0.7).b == 0.0
    inv = cf.inverse_coeffs(sp, p, 0.7)
    assert inv.E == pytest.approx(0.0, abs=1e-16)
    assert inv.B == pytest.approx(0.0, abs=1e-16)
    assert cf.coeff_derivatives(sp, p, 0.7).dE == pytest.approx(0.0, abs=1e-16)


def test_c_block_constant_in_r():
    sp = make_space(Family.QUATERNION_PROJECTIVE, 2, 1.3)
    p = params_(2.0, 0.7, 0.3)
    cs = [cf.gamma_blocks(sp, p, r).c for r in (0.2, 1.0, 3.0)]
    assert cs[0] == cs[1] == cs[2] == (p.m1 + p.m2) * sp.R ** 2
    assert cf.coeff_derivatives(sp, p, 1.0).dg11 == 0.0


def test_d_value_frozen():
    sp = make_space(Family.SPHERE, 2, 1.0)
    d = cf.gamma_blocks(sp, params_(), 1.0).d
    assert d == pytest.approx(2.0 * math.cos(math.pi / 8) ** 2, rel=1e-15)


def test_lambda_block_doubling_identity():
    # lambda-block entries are the 2lambda entries of the doubled-radius
    # space at the half-angle coordinate, divided by four
    for fam in (Family.COMPLEX_PROJECTIVE, Family.COMPLEX_HYPERBOLIC):
        sp = make_space(fam, 2, 1.0)
        sp2 = make_space(fam, 2, 2.0)
        p = params_(1.3, 0.6, 0.37)
        r = 0.6
        if sp.compact:
            r_half = math.tan(math.atan(r) / 2)
        else:
            r_half = math.tanh(math.atanh(r) / 2)
        b = cf.gamma_blocks(sp, p, r)
        b2 = cf.gamma_blocks(sp2, p, r_half)
        assert b.d == pytest.approx(b2.u / 4, rel=1e-13)
        assert b.h == pytest.approx(b2.w / 4, rel=1e-13)
        assert b.f == pytest.approx(b2.v / 4, rel=1e-13)


def test_two_point_blocks_match_embedded_model():
    # assemble u, w, v directly from embedded Killing-field products at the
    # two particle positions
    rng = np.random.default_rng(5)
    for fam in (Family.SPHERE, Family.REAL_HYPERBOLIC):
        sp = make_space(fam, 2, 1.0)
        basis = build_adapted_basis(sp, realize_algebra(sp))
        for _ in range(5):
            m1, m2 = rng.uniform(0.3, 3.0, 2)
            alpha = rng.uniform(0.1, 0.9)
            r = rng.uniform(0.1, 2.0 if sp.compact else 0.8)
            p = params_(m1, m2, alpha)
            sep = 2 * sp.R * (math.atan(r) if sp.compact else math.atanh(r))
            s1, s2 = alpha * sep, -(1 - alpha) * sep
            prods = embedded.products_embedded(sp, basis, np.array([s1, s2]))
            blocks = cf.gamma_blocks(sp, p, r)
            u = m1 * prods["X2X2"][0, 0] + m2 * prods["X2X2"][1, 0]
            w = m1 * prods["X2Y2"][0, 0] + m2 * prods["X2Y2"][1, 0]
            v = m1 * prods["Y2Y2"][0, 0] + m2 * prods["Y2Y2"][1, 0]
            assert blocks.u == pytest.approx(u, rel=1e-10)
            assert blocks.w == pytest.approx(w, rel=1e-10, abs=1e-12)
            assert blocks.v == pytest.approx(v, rel=1e-10)


def test_det_examples_and_oracle():
    sp = make_space(Family.SPHERE, 2, 1.0)
    p = params_()
    assert cf.gamma_det_closed(sp, p, 1.0) == pytest.approx(1.0, rel=1e-14)
    assert cf.gamma_det_closed(sp, p, 1e-8) < 1e-10
    rng = np.random.default_rng(11)
    for _ in range(100):
        space, params, r = _draw_space(rng)
        G = cf.gamma_blocks(space, params, r).assemble(space.q1, space.q2)
        det = np.linalg.det(G)
        assert cf.gamma_det_closed(space, params, r) == pytest.approx(det, rel=1e-10)


def test_block_positivity():
    rng = np.random.default_rng(3)
    for _ in range(50):
        space, params, r = _draw_space(rng)
        b = cf.gamma_blocks(space, params, r)
        assert min(b.a, b.c, b.d, b.f, b.u, b.v) >= 0.0
        assert b.a * b.c - b.b ** 2 > 0
        assert b.d * b.f - b.h ** 2 > 0
        assert b.u * b.v - b.w ** 2 > 0


def test_inverse_blocks_oracle():
    rng = np.random.default_rng(17)
    for _ in range(100):
        space, params, r = _draw_space(rng)
        b = cf.gamma_blocks(space, params, r)
        inv = cf.inverse_coeffs(space, params, r)
        for bm, im in ((b.top(), inv.top()), (b.lam(), inv.lam()),
                       (b.lam2(), inv.lam2())):
            assert np.abs(im @ bm - np.eye(2)).max() < 1e-10


def test_d_coefficient_limit():
    sp = make_space(Family.COMPLEX_PROJECTIVE, 2, 1.4)
    p = params_(2.0, 0.5, 0.3)
    expected = (p.m1 * p.alpha ** 2 + p.m2 * p.beta ** 2) / (p.m1 * p.m2 * sp.R ** 2)
    got = cf.inverse_coeffs(sp, p, 1e-6).D
    assert got == pytest.approx(expected, rel=1e-6)
    # C has the analogous finite limit
    got_c = cf.inverse_coeffs(sp, p, 1e-6).C
    assert got_c == pytest.approx(4 * expected / 4, rel=1e-6)


def test_series_matches_closed_forms_at_switch():
    p = params_(1.7, 0.6, 0.31)
    for fam in (Family.SPHERE, Family.REAL_HYPERBOLIC, Family.CAYLEY_PROJECTIVE):
        sp = make_space(fam, 2, 1.2)
        for r in (2e-4, 9.9e-5, 5e-5):
            direct = dict(zip(("g00", "g01", "g11", "D", "E", "F", "C", "B", "A"),
                              cf._inverse_raw(sp, p, r)))
            inv = cf.inverse_coeffs(sp, p, r)
            for name in ("D", "E", "F", "C", "B", "A"):
                assert getattr(inv, name) == pytest.approx(direct[name], rel=1e-12)


def test_degenerate_block():
    sp = make_space(Family.SPHERE, 2, 1.0)
    with pytest.raises(DegenerateBlock):
        cf.inverse_coeffs(sp, params_(), 1e-200)


def test_measure_examples():
    sp = make_space(Family.SPHERE, 2, 1.0)
    assert cf.measure_density(sp, params_(), 1.0) == pytest.approx(0.25, rel=1e-15)
    hyp = make_space(Family.REAL_HYPERBOLIC, 3, 1.0)
    assert cf.measure_density(hyp, params_(), 0.5) == pytest.approx(
        0.25 / 0.75 ** 3, rel=1e-14)


def test_measure_proportional_to_sqrt_det():
    sp = make_space(Family.QUATERNION_HYPERBOLIC, 2, 1.3)
    p = params_(1.4, 2.2, 0.6)
    rs = np.linspace(0.05, 0.9, 30)
    ratios = [cf.measure_density(sp, p, r) / math.sqrt(cf.gamma_det_closed(sp, p, r))
              for r in rs]
    assert max(ratios) - min(ratios) < 1e-12 * max(ratios)


def test_radial_operator_sphere_n2():
    sp = make_space(Family.SPHERE, 2, 1.0)
    p = params_(1.0, 3.0, 0.3)
    for r in (0.3, 1.0, 2.5):
        A2, A1 = cf.radial_operator(sp, p, r)
        expect = -(1 + r * r) ** 2 * (p.m1 + p.m2) / (8 * sp.R ** 2 * p.m1 * p.m2)
        assert A2 == pytest.approx(expect, rel=1e-14)
        assert A1 == pytest.approx(A2 / r, rel=1e-14)


def test_radial_operator_symbol_identity():
    rng = np.random.default_rng(23)
    for _ in range(50):
        space, params, r = _draw_space(rng)
        A2, _ = cf.radial_operator(space, params, r)
        g00 = cf.inverse_coeffs(space, params, r).g00
        assert A2 == pytest.approx(-0.5 * g00, rel=1e-12)


def test_radial_operator_divergence_form_oracle():
    tests = [(Family.SPHERE, 3), (Family.COMPLEX_HYPERBOLIC, 2),
             (Family.CAYLEY_PROJECTIVE, 2)]
    for fam, n in tests:
        sp = make_space(fam, n, 1.1)
        p = params_(1.2, 2.1, 0.4)
        for r in (0.3, 0.6):
            A2, A1 = cf.radial_operator(sp, p, r)
            for psi, dpsi, d2psi in (
                    (lambda x: x ** 3, lambda x: 3 * x ** 2, lambda x: 6 * x),
                    (lambda x: x ** 2 + 2 * x, lambda x: 2 * x + 2, lambda x: 2.0)):
                direct = A2 * d2psi(r) + A1 * dpsi(r)
                fd = cf.apply_divergence_form(sp, p, psi, r)
                assert fd == pytest.approx(direct, rel=1e-6)


def test_continuation_properties():
    rng = np.random.default_rng(29)
    names = ("g00", "g01", "g11", "D", "E", "F", "C", "B", "A")
    count = 0
    while count < 100:
        space, params, r = _draw_space(rng)
        if not space.compact:
            continue
        count += 1
        r = min(r, 0.9)
        img = cf.continuation_image(space, params, r)
        assert img.imag_residual < 1e-12
        hyp = hyperbolic_partner(space)
        ih = cf.inverse_coeffs(hyp, params, r)
        for name in names:
            ref = getattr(ih, name)
            assert abs(getattr(img.values, name) - ref) <= 1e-10 * max(1, abs(ref))


def test_continuation_symmetric_cross_terms_vanish():
    sp = make_space(Family.SPHERE, 3, 1.0)
    img = cf.continuation_image(sp, params_(), 0.4)
    assert img.values.E == pytest.approx(0.0, abs=1e-15)
    assert img.values.B == pytest.approx(0.0, abs=1e-15)


def test_derivatives_match_finite_differences():
    rng = np.random.default_rng(31)
    names = [("g00", "dg00"), ("g01", "dg01"), ("g11", "dg11"), ("D", "dD"),
             ("E", "dE"), ("F", "dF"), ("C", "dC"), ("B", "dB"), ("A", "dA")]
    checked = 0
    while checked < 50:
        space, params, r = _draw_space(rng)
        h = 1e-6
        lo, hi = space.r_interval
        if not (lo < r - h and r + h < hi):
            continue
        checked += 1
        de = cf.coeff_derivatives(space, params, r)
        cp = cf.inverse_coeffs(space, params, r + h)
        cm = cf.inverse_coeffs(space, params, r - h)
        for name, dname in names:
            fd = (getattr(cp, name) - getattr(cm, name)) / (2 * h)
            assert abs(getattr(de, dname) - fd) <= 1e-6 * max(1.0, abs(fd))


def test_potentials():
    sp = make_space(Family.SPHERE, 2, 1.0)
    hyp = make_space(Family.REAL_HYPERBOLIC, 2, 1.0)
    cot = cf.Potential(kind="cotangent", coefficient=2.0)
    # -gamma*cot(p/R) with p = 2R arctan r equals -gamma*(1-r^2)/(2r)
    r = 0.7
    assert cot.value(sp, r) == pytest.approx(
        -2.0 / math.tan(2 * math.atan(r)), rel=1e-14)
    assert cot.value(hyp, r) == pytest.approx(
        -2.0 / math.tanh(2 * math.atanh(r)), rel=1e-14)
    har = cf.Potential(kind="harmonic", coefficient=3.0)
    assert har.value(sp, r) == pytest.approx(1.5 * r * r, rel=1e-15)
    # derivatives against finite differences
    for pot in (cot, har):
        for space in (sp, hyp):
            fd = (pot.value(space, r + 1e-7) - pot.value(space, r - 1e-7)) / 2e-7
            assert pot.derivative(space, r) == pytest.approx(fd, rel=1e-7)
    rs = np.linspace(0.1, 2.0, 25)
    tab = cf.Potential(kind="tabulated", r_samples=tuple(rs),
                       u_samples=tuple(np.sin(rs)))
    assert tab.value(sp, 1.0) == pytest.approx(math.sin(1.0), abs=1e-6)
    with pytest.raises(ValueError):
        cf.Potential(kind="nope")


def test_params_validation():
    with pytest.raises(ValueError):
        cf.TwoBodyParams(m1=-1.0, m2=1.0, alpha=0.5)
    with pytest.raises(ValueError):
        cf.TwoBodyParams(m1=1.0, m2=1.0, alpha=1.0)
    p = cf.TwoBodyParams(m1=1.0, m2=3.0, alpha=0.25)
    assert p.reduced_mass == pytest.approx(0.75)
    assert p.beta == 0.75


def test_print_discrepancies():
    sp = make_space(Family.SPHERE, 2, 1.0)
    d = cf.print_discrepancies(sp, params_(2.0, 1.0, 0.3), 0.7)
    assert d["offdiag_sign_flipped"]
    assert d["cross_term_ratio"] == pytest.approx(-2.0, rel=1e-12)
