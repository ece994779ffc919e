import math

import numpy as np
import pytest

from twobody import embedded
from twobody.algebra import build_adapted_basis, realize_algebra
from twobody.errors import UnsupportedModel
from twobody.spaces import Family, make_space

_cache = {}


def setup(fam, n, R=1.0):
    key = (fam, n, R)
    if key not in _cache:
        sp = make_space(fam, n, R)
        _cache[key] = (sp, build_adapted_basis(sp, realize_algebra(sp)))
    return _cache[key]


def grid(sp):
    if sp.compact:
        return np.linspace(0.0, 0.98 * math.pi * sp.R, 50)
    return np.linspace(0.0, 3.0 * sp.R, 50)


@pytest.mark.parametrize("fam,n", [(Family.SPHERE, 2), (Family.SPHERE, 3),
                                   (Family.REAL_HYPERBOLIC, 2),
                                   (Family.REAL_HYPERBOLIC, 3)])
def test_embedded_matches_closed_forms(fam, n):
    sp, basis = setup(fam, n)
    table = embedded.killing_products_along_geodesic(sp, basis, grid(sp))
    assert table.max_deviation() < 1e-10


@pytest.mark.parametrize("fam,n", [(Family.SPHERE, 3),
                                   (Family.REAL_HYPERBOLIC, 2)])
def test_unlisted_products_vanish(fam, n):
    sp, basis = setup(fam, n)
    assert embedded.zero_products_embedded(sp, basis, grid(sp)) < 1e-10


def test_point_values():
    sp, basis = setup(Family.SPHERE, 2)
    t = embedded.killing_products_along_geodesic(
        sp, basis, np.array([0.0, math.pi / 4]))
    assert t.embedded["Y2Y2"][0, 0] == pytest.approx(0.0, abs=1e-14)
    assert t.embedded["X2X2"][1, 0] == pytest.approx(0.5, abs=1e-12)
    assert t.closed["LL"][0] == pytest.approx(1.0, abs=1e-15)


def test_closed_forms_scale_with_radius():
    sp = make_space(Family.SPHERE, 2, 2.0)
    c = embedded.products_closed(sp, np.array([math.pi / 2]))
    # X2X2 = (R^2/2)(1 + cos(2s/R)) at s = pi/2, R = 2
    assert c["X2X2"][0] == pytest.approx(2.0 * (1 + math.cos(math.pi / 2)), rel=1e-14)


def test_hyperbolic_growth_signs():
    sp, basis = setup(Family.REAL_HYPERBOLIC, 2)
    c = embedded.products_closed(sp, np.array([1.0]))
    assert c["Y2Y2"][0] > 0.0
    assert c["X2Y2"][0] < 0.0
    assert c["X2X2"][0] > 1.0  # cosh growth


def test_unsupported_model():
    sp, basis = setup(Family.COMPLEX_PROJECTIVE, 2)
    with pytest.raises(UnsupportedModel):
        embedded.products_embedded(sp, basis, np.array([0.1]))
    # closed forms are still available and include the lambda family
    c = embedded.products_closed(sp, np.array([0.3]))
    assert "XlXl" in c and "X2X2" in c
    table = embedded.killing_products_along_geodesic(sp, basis, np.array([0.3]))
    assert table.embedded is None


def test_real_projective_shares_sphere_algebra():
    sp_rp = make_space(Family.REAL_PROJECTIVE, 3, 1.0)
    sp_s = make_space(Family.SPHERE, 3, 1.0)
    b_rp = build_adapted_basis(sp_rp, realize_algebra(sp_rp))
    b_s = build_adapted_basis(sp_s, realize_algebra(sp_s))
    assert np.abs(b_rp.matrices - b_s.matrices).max() < 1e-14
