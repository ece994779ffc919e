import numpy as np
import pytest

from twobody.algebra import (build_adapted_basis, jacobi_residual,
                             perturbed_basis, realize_algebra,
                             verify_adapted_relations)
from twobody.errors import UnrealizableFamily
from twobody.spaces import Family, make_space

ACCEPTANCE_FAMILIES = (
    [(Family.SPHERE, n) for n in range(2, 7)]
    + [(Family.REAL_HYPERBOLIC, n) for n in range(2, 6)]
    + [(Family.COMPLEX_PROJECTIVE, n) for n in range(2, 5)]
    + [(Family.COMPLEX_HYPERBOLIC, n) for n in (2, 3)]
)

_cache = {}


def basis_for(fam, n, R=1.0):
    key = (fam, n, R)
    if key not in _cache:
        sp = make_space(fam, n, R)
        _cache[key] = (sp, build_adapted_basis(sp, realize_algebra(sp)))
    return _cache[key]


def test_realize_dimensions():
    sp = make_space(Family.SPHERE, 2, 1.0)
    alg = realize_algebra(sp)
    assert alg.dim == 3
    assert int(np.sum(~alg.is_tangent)) == 1
    sp = make_space(Family.COMPLEX_PROJECTIVE, 2, 1.0)
    alg = realize_algebra(sp)
    assert alg.dim == 8
    assert int(np.sum(~alg.is_tangent)) == 4  # u(2) stabiliser


def test_unrealizable_families():
    for fam in (Family.QUATERNION_PROJECTIVE, Family.CAYLEY_HYPERBOLIC):
        with pytest.raises(UnrealizableFamily):
            realize_algebra(make_space(fam, 2, 1.0))


def test_matrix_algebra_closes():
    # commutators re-expand in the basis and respect the symmetric pair
    from twobody.algebra import structure_tensor
    for fam in (Family.SPHERE, Family.REAL_HYPERBOLIC,
                Family.COMPLEX_HYPERBOLIC):
        sp = make_space(fam, 2, 1.0)
        alg = realize_algebra(sp)
        c = structure_tensor(alg.basis)  # raises above 1e-12 residual
        is_p = alg.is_tangent
        for a in range(alg.dim):
            for b in range(alg.dim):
                target = c[a, b]
                if is_p[a] and is_p[b]:       # [p, p] inside k
                    assert np.abs(target[is_p]).max() < 1e-12
                elif is_p[a] != is_p[b]:      # [p, k] inside p
                    assert np.abs(target[~is_p]).max() < 1e-12


def test_so3_adapted_basis_exact():
    sp, basis = basis_for(Family.SPHERE, 2)
    L, e, f = basis.matrices
    assert np.abs(L @ e - e @ L + f).max() < 1e-14
    assert np.abs(L @ f - f @ L - e).max() < 1e-14
    assert np.abs(e @ f - f @ e + L).max() < 1e-14
    rep = verify_adapted_relations(basis)
    assert max(rep.residuals.values()) < 1e-14


def test_block_dimensions_cp2():
    sp, basis = basis_for(Family.COMPLEX_PROJECTIVE, 2)
    sl = basis.block_slices()
    assert sl["p_lambda"].stop - sl["p_lambda"].start == 2
    assert sl["p_2lambda"].stop - sl["p_2lambda"].start == 1
    assert basis.dim == 8


@pytest.mark.parametrize("fam,n", ACCEPTANCE_FAMILIES)
def test_adapted_relations_all_families(fam, n):
    sp, basis = basis_for(fam, n)
    rep = verify_adapted_relations(basis, tol=1e-12)
    assert rep.passed, rep.failures()


def test_eigenvalue_multiplicities_sphere4():
    # no -1/4 eigenspace when q1 = 0; the -1 eigenspace has dimension 2*q2
    sp, basis = basis_for(Family.SPHERE, 4)
    c = basis.structure_constants
    ad_L = np.transpose(c, (0, 2, 1))[0]
    eigs = np.linalg.eigvals(ad_L @ ad_L)
    assert int(np.sum(np.abs(eigs + 0.25) < 1e-8)) == 0
    assert int(np.sum(np.abs(eigs + 1.0) < 1e-8)) == 2 * sp.q2 == 6


def test_norms_scale_with_radius():
    _, b1 = basis_for(Family.SPHERE, 3, 1.0)
    _, b2 = basis_for(Family.SPHERE, 3, 2.0)
    assert b2.gram[0, 0] == pytest.approx(4.0 * b1.gram[0, 0], rel=1e-14)
    # the frame matrices themselves do not depend on R
    assert np.abs(b1.matrices - b2.matrices).max() < 1e-14


def test_perturbed_basis_detected():
    _, basis = basis_for(Family.SPHERE, 2)
    rep = verify_adapted_relations(perturbed_basis(basis, 2.0))
    assert not rep.passed
    assert "commutation_relations" in rep.failures()


def test_jacobi_and_gram_structure():
    for fam, n in ((Family.REAL_HYPERBOLIC, 3), (Family.COMPLEX_HYPERBOLIC, 2)):
        sp, basis = basis_for(fam, n)
        assert jacobi_residual(basis.momentum_structure_constants) < 1e-12
        kg = basis.killing_gram
        R2 = sp.R ** 2
        diag = np.diag(kg)
        # tangent directions carry +R^2, stabiliser directions -R^2
        sl = basis.block_slices()
        assert np.allclose(diag[0], R2, atol=1e-10)
        assert np.allclose(diag[sl["p_2lambda"]], R2, atol=1e-10)
        assert np.allclose(diag[sl["k_2lambda"]], -R2, atol=1e-10)


def test_momentum_tensor_differs_by_tangent_sign_flips():
    # hyperbolic duality: [p, p] brackets flip sign, [p, k] and [k, k] agree
    sp, basis = basis_for(Family.REAL_HYPERBOLIC, 2)
    cn = basis.structure_constants
    cm = basis.momentum_structure_constants
    labels = basis.block_labels()
    tangent = np.isin(labels, ("a", "p_lambda", "p_2lambda"))
    for a in range(basis.dim):
        for b in range(basis.dim):
            expect = -1.0 if (tangent[a] and tangent[b]) else 1.0
            assert np.abs(cm[a, b] - expect * cn[a, b]).max() < 1e-12


def test_compact_tensors_coincide():
    sp, basis = basis_for(Family.COMPLEX_PROJECTIVE, 2)
    assert np.abs(basis.structure_constants
                  - basis.momentum_structure_constants).max() < 1e-14
