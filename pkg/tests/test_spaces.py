import math

import numpy as np
import pytest

from twobody.spaces import (Family, catalog_rows, distance_from_r,
                            hyperbolic_partner, make_space, multiplicities,
                            r_from_distance)


def test_multiplicity_table():
    assert multiplicities(Family.COMPLEX_PROJECTIVE, 3) == (4, 1)
    assert multiplicities(Family.SPHERE, 5) == (0, 4)
    assert multiplicities(Family.CAYLEY_PROJECTIVE, 2) == (8, 7)
    assert multiplicities(Family.QUATERNION_HYPERBOLIC, 3) == (8, 3)


def test_make_space_examples():
    sp = make_space(Family.COMPLEX_PROJECTIVE, 3, 1.0)
    assert (sp.q1, sp.q2) == (4, 1)
    sp = make_space(Family.SPHERE, 5, 2.0)
    assert (sp.q1, sp.q2) == (0, 4)
    assert sp.r_interval == (0.0, math.inf)
    sp = make_space(Family.CAYLEY_PROJECTIVE, 2, 1.0)
    assert (sp.q1, sp.q2) == (8, 7)


def test_make_space_rejects_bad_input():
    with pytest.raises(ValueError):
        make_space(Family.CAYLEY_PROJECTIVE, 3, 1.0)
    with pytest.raises(ValueError):
        make_space(Family.SPHERE, 1, 1.0)
    with pytest.raises(ValueError):
        make_space(Family.SPHERE, 2, 0.0)
    with pytest.raises(ValueError):
        make_space(Family.SPHERE, 2, -1.0)
    with pytest.raises(ValueError):
        Family.parse("Euclidean")


def test_intervals():
    assert make_space(Family.REAL_PROJECTIVE, 3, 1.0).r_interval == (0.0, 1.0)
    assert make_space(Family.REAL_HYPERBOLIC, 3, 1.0).r_interval == (0.0, 1.0)
    assert make_space(Family.QUATERNION_PROJECTIVE, 2, 1.0).r_interval == (0.0, math.inf)


def test_distance_examples():
    sp = make_space(Family.SPHERE, 2, 1.0)
    assert distance_from_r(sp, 1.0) == pytest.approx(math.pi / 2, abs=1e-15)
    sp2 = make_space(Family.SPHERE, 2, 2.0)
    assert r_from_distance(sp2, math.pi) == pytest.approx(1.0, abs=1e-15)
    hyp = make_space(Family.REAL_HYPERBOLIC, 2, 1.0)
    assert distance_from_r(hyp, 1e-9) == pytest.approx(2e-9, rel=1e-9)


def test_distance_round_trip_and_monotone():
    for fam in (Family.SPHERE, Family.REAL_PROJECTIVE, Family.REAL_HYPERBOLIC,
                Family.COMPLEX_PROJECTIVE):
        sp = make_space(fam, 2, 1.7)
        lo, hi = sp.r_interval
        rs = np.linspace(0.01, 0.99 if math.isfinite(hi) else 5.0, 40)
        ps = [distance_from_r(sp, r) for r in rs]
        assert all(p1 < p2 for p1, p2 in zip(ps, ps[1:]))
        for r, p in zip(rs, ps):
            assert r_from_distance(sp, p) == pytest.approx(r, rel=1e-14)


def test_distance_domain_errors():
    sp = make_space(Family.REAL_HYPERBOLIC, 2, 1.0)
    with pytest.raises(ValueError):
        distance_from_r(sp, 1.5)
    with pytest.raises(ValueError):
        distance_from_r(sp, 0.0)
    comp = make_space(Family.SPHERE, 2, 1.0)
    with pytest.raises(ValueError):
        r_from_distance(comp, math.pi + 0.1)


def test_catalog_is_total():
    rows = catalog_rows()
    assert len(rows) == 9
    assert len({r["family"] for r in rows}) == 9


def test_hyperbolic_partner():
    sp = make_space(Family.COMPLEX_PROJECTIVE, 3, 2.0)
    h = hyperbolic_partner(sp)
    assert h.family is Family.COMPLEX_HYPERBOLIC
    assert (h.q1, h.q2) == (sp.q1, sp.q2)
    assert h.R == sp.R
