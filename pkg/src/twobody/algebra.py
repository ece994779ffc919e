"""Matrix models of the isometry algebras and the adapted frame.

For the realizable families the isometry algebra is built as explicit
ambient matrices:

    Sphere / RealProjective   so(n+1)
    RealHyperbolic            so(n,1)
    ComplexProjective         su(n+1)
    ComplexHyperbolic         su(n,1)

``build_adapted_basis`` constructs the frame (Lambda, e_lambda[i],
f_lambda[i], e_2lambda[j], f_2lambda[j], k0[...]) whose brackets take the
normalised form

    [L, e_l] = -1/2 f_l   [L, f_l] = +1/2 e_l   [e_l, f_l] = -1/2 L
    [L, e_2] = -f_2       [L, f_2] = +e_2       [e_2, f_2] = -L

with all frame norms equal to R under the scaled trace form.  For the
hyperbolic families these relations hold for the frame with the tangent
part multiplied by the imaginary unit (the compact/noncompact duality);
the real isometry algebra itself carries the same brackets with the sign
of every [tangent, tangent] commutator flipped, and that real-form tensor
is the one the momentum dynamics uses.  Both tensors and both Gram tables
are exposed on the resulting AdaptedBasis.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import EigenstructureMismatch, UnrealizableFamily
from .spaces import Family, SpaceSpec

REALIZABLE_FAMILIES = frozenset({
    Family.SPHERE, Family.REAL_PROJECTIVE, Family.REAL_HYPERBOLIC,
    Family.COMPLEX_PROJECTIVE, Family.COMPLEX_HYPERBOLIC,
})

_EXPAND_TOL = 1e-10     # residual allowed when re-expanding commutators
_SNAP_TOL = 1e-10       # snap structure constants to 0, +-1/2, +-1
_EIG_GROUP_TOL = 1e-6


@dataclass(frozen=True)
class MatrixAlgebra:
    """Isometry algebra as a list of ambient matrices with a Cartan split."""

    space: SpaceSpec
    ambient_dim: int
    basis: np.ndarray          # (N, m, m) complex
    is_tangent: np.ndarray     # (N,) bool: True on the p-part of g = k + p
    metric_signature: np.ndarray   # ambient bilinear form diag (J)
    geodesic_index: int        # p-element moving the base point along e1

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def base_point(self) -> np.ndarray:
        e0 = np.zeros(self.ambient_dim)
        e0[0] = 1.0
        return e0


def _so_like(m: int, hyperbolic: bool):
    """Basis of so(m) or so(m-1,1) with the stabiliser of e0 flagged as k."""
    mats, is_p = [], []
    # tangent part: rotations/boosts mixing coordinate 0 with j
    for j in range(1, m):
        X = np.zeros((m, m), dtype=complex)
        if hyperbolic:
            X[0, j] = 1.0
            X[j, 0] = 1.0
        else:
            X[j, 0] = 1.0
            X[0, j] = -1.0
        mats.append(X)
        is_p.append(True)
    # stabiliser: rotations among coordinates 1..m-1
    for i in range(1, m):
        for j in range(i + 1, m):
            X = np.zeros((m, m), dtype=complex)
            X[i, j] = 1.0
            X[j, i] = -1.0
            mats.append(X)
            is_p.append(False)
    return mats, is_p, 0


def _su_like(m: int, hyperbolic: bool):
    """Basis of su(m) or su(m-1,1); k stabilises the complex line C*e0."""
    mats, is_p = [], []
    # tangent part: 2(m-1) real directions of the line's complement
    for j in range(1, m):
        X = np.zeros((m, m), dtype=complex)
        if hyperbolic:
            X[0, j] = 1.0
            X[j, 0] = 1.0
        else:
            X[j, 0] = 1.0
            X[0, j] = -1.0
        mats.append(X)
        is_p.append(True)
        Y = np.zeros((m, m), dtype=complex)
        if hyperbolic:
            Y[0, j] = 1.0j
            Y[j, 0] = -1.0j
        else:
            Y[j, 0] = 1.0j
            Y[0, j] = 1.0j
        mats.append(Y)
        is_p.append(True)
    # stabiliser: u(m-1) acting on coordinates 1..m-1, plus the traceless
    # imaginary diagonal involving coordinate 0
    for i in range(1, m):
        for j in range(i + 1, m):
            X = np.zeros((m, m), dtype=complex)
            X[i, j] = 1.0
            X[j, i] = -1.0
            mats.append(X)
            is_p.append(False)
            Y = np.zeros((m, m), dtype=complex)
            Y[i, j] = 1.0j
            Y[j, i] = 1.0j
            mats.append(Y)
            is_p.append(False)
    for k in range(1, m - 1):
        X = np.zeros((m, m), dtype=complex)
        X[k, k] = 1.0j
        X[k + 1, k + 1] = -1.0j
        mats.append(X)
        is_p.append(False)
    X = np.zeros((m, m), dtype=complex)
    X[0, 0] = 1.0j * (m - 1)
    for k in range(1, m):
        X[k, k] = -1.0j
    mats.append(X)
    is_p.append(False)
    return mats, is_p, 0


def realize_algebra(space: SpaceSpec) -> MatrixAlgebra:
    """Ambient-matrix model of the isometry algebra of a realizable family."""
    fam = space.family
    if fam not in REALIZABLE_FAMILIES:
        raise UnrealizableFamily(
            f"no matrix model for {fam.value}; catalog and radial "
            f"coefficients remain available, dynamics does not")
    m = space.n + 1
    if fam in (Family.SPHERE, Family.REAL_PROJECTIVE):
        mats, is_p, gidx = _so_like(m, hyperbolic=False)
        signature = np.ones(m)
    elif fam is Family.REAL_HYPERBOLIC:
        mats, is_p, gidx = _so_like(m, hyperbolic=True)
        signature = np.ones(m)
        signature[0] = -1.0
    elif fam is Family.COMPLEX_PROJECTIVE:
        mats, is_p, gidx = _su_like(m, hyperbolic=False)
        signature = np.ones(m)
    else:
        mats, is_p, gidx = _su_like(m, hyperbolic=True)
        signature = np.ones(m)
        signature[0] = -1.0
    return MatrixAlgebra(space=space, ambient_dim=m,
                         basis=np.array(mats), is_tangent=np.array(is_p),
                         metric_signature=signature, geodesic_index=gidx)


def _stack_real(mats: np.ndarray) -> np.ndarray:
    """(N, m, m) complex -> (2m^2, N) real column matrix."""
    flat = mats.reshape(mats.shape[0], -1)
    return np.concatenate([flat.real, flat.imag], axis=1).T


def _expander(mats: np.ndarray):
    """Least-squares expansion of arbitrary matrices in a real matrix span."""
    B = _stack_real(mats)
    pinv = np.linalg.pinv(B)

    def expand(X: np.ndarray) -> tuple[np.ndarray, float]:
        x = np.concatenate([X.real.ravel(), X.imag.ravel()])
        coeff = pinv @ x
        resid = float(np.linalg.norm(B @ coeff - x))
        return coeff, resid

    return expand


def structure_tensor(mats: np.ndarray, tol: float = _EXPAND_TOL) -> np.ndarray:
    """c[a, b, :] = coordinates of [X_a, X_b] in the given basis."""
    N = mats.shape[0]
    expand = _expander(mats)
    c = np.zeros((N, N, N))
    worst = 0.0
    for a in range(N):
        for b in range(a + 1, N):
            comm = mats[a] @ mats[b] - mats[b] @ mats[a]
            coeff, resid = expand(comm)
            worst = max(worst, resid)
            c[a, b] = coeff
            c[b, a] = -coeff
    if worst > tol:
        raise EigenstructureMismatch(
            f"commutators do not close in the basis (residual {worst:.3e})")
    return c


def _snap(c: np.ndarray) -> np.ndarray:
    """Snap entries to the exact values 0, +-1/2, +-1 when already close."""
    out = c.copy()
    for target in (0.0, 0.5, -0.5, 1.0, -1.0):
        mask = np.abs(out - target) < _SNAP_TOL
        out[mask] = target
    return out


def _ad_matrices(c: np.ndarray) -> np.ndarray:
    # (ad_a)[d, b] = c[a, b, d]
    return np.transpose(c, (0, 2, 1))


def _trace_form(c: np.ndarray) -> np.ndarray:
    ad = _ad_matrices(c)
    return np.einsum("aij,bji->ab", ad, ad)


def _eig_split(T_sub: np.ndarray, gram: np.ndarray, targets):
    """Eigenspaces of a self-adjoint operator, orthonormal under gram.

    Returns {target: (dim, columns)} with columns in the original
    sub-basis coordinates, orthonormal w.r.t. gram.
    """
    L = np.linalg.cholesky(gram)
    Linv_T = np.linalg.inv(L.T)
    M = L.T @ T_sub @ Linv_T
    M = 0.5 * (M + M.T)
    vals, vecs = np.linalg.eigh(M)
    groups = {}
    for t in targets:
        cols = vecs[:, np.abs(vals - t) < _EIG_GROUP_TOL]
        groups[t] = (cols.shape[1], Linv_T @ cols)
    matched = sum(dim for dim, _ in groups.values())
    if matched != T_sub.shape[0]:
        raise EigenstructureMismatch(
            f"eigenvalues {np.sort(vals)} do not cluster at targets {targets}")
    return groups


def _canonical_signs(vec_matrices: np.ndarray) -> np.ndarray:
    """Deterministic sign: first large entry (lexicographic) made positive."""
    out = vec_matrices.copy()
    for i, X in enumerate(out):
        flat = np.concatenate([X.real.ravel(), X.imag.ravel()])
        big = np.nonzero(np.abs(flat) > 1e-8)[0]
        if big.size and flat[big[0]] < 0:
            out[i] = -X
    return out


@dataclass(frozen=True)
class AdaptedBasis:
    """Adapted frame of the isometry algebra, ordered as
    (Lambda, e_lambda[1..q1], f_lambda[1..q1], e_2lambda[1..q2],
    f_2lambda[1..q2], k0[...]).

    ``matrices`` satisfy the normalised bracket relations above (for the
    hyperbolic families their tangent part is imaginary); ``momentum_matrices``
    are the real isometry-algebra generators whose Killing fields carry the
    generalized momenta.  ``structure_constants`` belongs to ``matrices``;
    ``momentum_structure_constants`` to the real frame, and is what the
    Lie-Poisson flow contracts against.  ``gram`` is the scaled trace form of
    the normalised frame (diagonal R^2); ``killing_gram`` the scaled trace
    form of the real frame (indefinite for hyperbolic families), whose
    inverse defines the quadratic Casimir.
    """

    space: SpaceSpec
    matrices: np.ndarray
    momentum_matrices: np.ndarray
    structure_constants: np.ndarray
    momentum_structure_constants: np.ndarray
    gram: np.ndarray
    killing_gram: np.ndarray
    mu_names: tuple
    ambient_signature: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrices.shape[0]

    @property
    def q1(self) -> int:
        return self.space.q1

    @property
    def q2(self) -> int:
        return self.space.q2

    def block_slices(self) -> dict:
        q1, q2 = self.q1, self.q2
        o = 1
        s = {"a": slice(0, 1),
             "p_lambda": slice(o, o + q1),
             "k_lambda": slice(o + q1, o + 2 * q1),
             "p_2lambda": slice(o + 2 * q1, o + 2 * q1 + q2),
             "k_2lambda": slice(o + 2 * q1 + q2, o + 2 * q1 + 2 * q2),
             "k0": slice(o + 2 * q1 + 2 * q2, self.dim)}
        return s

    def block_labels(self) -> np.ndarray:
        labels = np.empty(self.dim, dtype=object)
        for name, sl in self.block_slices().items():
            labels[sl] = name
        return labels


def _mu_names(q1: int, q2: int, dim_k0: int) -> tuple:
    names = ["p_L"]
    names += [f"p_x_lambda_{i + 1}" for i in range(q1)]
    names += [f"p_y_lambda_{i + 1}" for i in range(q1)]
    names += [f"p_x_2lambda_{j + 1}" for j in range(q2)]
    names += [f"p_y_2lambda_{j + 1}" for j in range(q2)]
    names += [f"p_k0_{k + 1}" for k in range(dim_k0)]
    return tuple(names)


def build_adapted_basis(space: SpaceSpec, algebra: MatrixAlgebra) -> AdaptedBasis:
    """Construct the adapted frame from a matrix model.

    Steps: scale the geodesic generator so the nonzero eigenvalues of the
    squared bracket map are exactly {-1/4, -1} (for hyperbolic families the
    scale is imaginary, which is the duality twist); split the eigenspaces
    intersected with the tangent and stabiliser parts; orthonormalise the
    e-vectors to norm R under the scaled trace form; set
    f_lambda = -2[Lambda, e_lambda], f_2lambda = -[Lambda, e_2lambda];
    re-expand all commutators to obtain the structure tensors.
    """
    if algebra.space != space:
        raise ValueError("algebra was built for a different space")
    q1, q2, R = space.q1, space.q2, space.R
    raw = algebra.basis
    N = raw.shape[0]
    is_p = algebra.is_tangent

    c_raw = structure_tensor(raw)
    K = _trace_form(c_raw)

    Lam0_idx = algebra.geodesic_index
    ad = _ad_matrices(c_raw)
    T0 = ad[Lam0_idx] @ ad[Lam0_idx]
    eigs0 = np.linalg.eigvals(T0)
    mu_star = float(np.max(np.abs(eigs0)))
    c0 = 1.0 / np.sqrt(mu_star)
    # real operator (ad_Lambda)^2 after scaling; eigenvalues in
    # {0, -1/4, -1} (compact) or {0, +1/4, +1} (hyperbolic)
    T = (c0 * c0) * T0
    tau = -1.0 if space.compact else 1.0

    # positive-definite compact trace form: -K twisted by the Cartan flip
    sign = np.where(is_p & ~np.full(N, space.compact), 1.0, -1.0)
    P = K * sign[:, None]
    P = 0.5 * (P + P.T)

    Ip = np.nonzero(is_p)[0]
    Ik = np.nonzero(~is_p)[0]
    # T preserves both parts; leakage is pure roundoff
    leak = max(np.abs(T[np.ix_(Ik, Ip)]).max(initial=0.0),
               np.abs(T[np.ix_(Ip, Ik)]).max(initial=0.0))
    if leak > 1e-10:
        raise EigenstructureMismatch(f"squared bracket map leaks between "
                                     f"tangent and stabiliser parts ({leak:.3e})")

    p_groups = _eig_split(T[np.ix_(Ip, Ip)], P[np.ix_(Ip, Ip)],
                          (0.0, 0.25 * tau, tau))
    k_groups = _eig_split(T[np.ix_(Ik, Ik)], P[np.ix_(Ik, Ik)],
                          (0.0, 0.25 * tau, tau))
    expected = {
        "p zero": (p_groups[0.0][0], 1),
        "p lambda": (p_groups[0.25 * tau][0], q1),
        "p 2lambda": (p_groups[tau][0], q2),
        "k lambda": (k_groups[0.25 * tau][0], q1),
        "k 2lambda": (k_groups[tau][0], q2),
    }
    for name, (got, want) in expected.items():
        if got != want:
            raise EigenstructureMismatch(
                f"{name} eigenspace has dimension {got}, expected {want} "
                f"for {space.family.value} n={space.n}")

    def to_matrices(sub_indices, columns):
        # columns: (len(sub), k) coordinates -> (k, m, m) ambient matrices
        coords = np.zeros((N, columns.shape[1]))
        coords[sub_indices] = columns
        return np.einsum("ak,aij->kij", coords, raw)

    t0 = float(c0 * c0 * P[Lam0_idx, Lam0_idx])
    scale = np.sqrt(t0)

    Lam_r = c0 * raw[Lam0_idx]
    e_lam_r = _canonical_signs(
        to_matrices(Ip, p_groups[0.25 * tau][1]) * scale) if q1 else \
        np.zeros((0, *raw.shape[1:]), dtype=complex)
    e_2lam_r = _canonical_signs(to_matrices(Ip, p_groups[tau][1]) * scale)
    k0_mats = to_matrices(Ik, k_groups[0.0][1]) * scale
    if k0_mats.shape[0]:
        k0_mats = _canonical_signs(k0_mats)

    phase = 1.0 + 0.0j if space.compact else 1.0j

    def bracket(X, Y):
        return X @ Y - Y @ X

    Lam_n = phase * Lam_r
    e_lam_n = phase * e_lam_r
    e_2lam_n = phase * e_2lam_r
    # f's land in the stabiliser part for both signatures (and are shared
    # between the normalised and the real frame: the duality phase squares
    # away); the tensor expansion below verifies membership in the algebra
    f_lam = np.array([-2.0 * bracket(Lam_n, e) for e in e_lam_n]) \
        if q1 else np.zeros((0, *raw.shape[1:]), dtype=complex)
    f_2lam = np.array([-1.0 * bracket(Lam_n, e) for e in e_2lam_n])

    def stack(parts):
        parts = [p for p in parts if p.shape[0]]
        return np.concatenate(parts, axis=0)

    normalised = stack([Lam_n[None], e_lam_n, f_lam, e_2lam_n, f_2lam, k0_mats])
    momentum = stack([Lam_r[None].astype(complex), e_lam_r, f_lam,
                      e_2lam_r, f_2lam, k0_mats])

    c_norm = _snap(structure_tensor(normalised))
    c_mom = _snap(structure_tensor(momentum))

    K_norm = _trace_form(c_norm)
    gram = (R * R / K_norm[0, 0]) * K_norm
    K_mom = _trace_form(c_mom)
    gram_mom = (R * R / K_mom[0, 0]) * K_mom

    return AdaptedBasis(space=space,
                        matrices=normalised,
                        momentum_matrices=momentum,
                        structure_constants=c_norm,
                        momentum_structure_constants=c_mom,
                        gram=gram,
                        killing_gram=gram_mom,
                        mu_names=_mu_names(q1, q2, k0_mats.shape[0]),
                        ambient_signature=algebra.metric_signature)


# bracket inclusion table: which blocks [A, B] may land in
_ALLOWED = {
    ("a", "a"): set(),
    ("a", "p_lambda"): {"k_lambda"},
    ("a", "k_lambda"): {"p_lambda"},
    ("a", "p_2lambda"): {"k_2lambda"},
    ("a", "k_2lambda"): {"p_2lambda"},
    ("a", "k0"): set(),
    ("k_lambda", "p_lambda"): {"p_2lambda", "a"},
    ("k_lambda", "k_lambda"): {"k_2lambda", "k0"},
    ("p_lambda", "p_lambda"): {"k_2lambda", "k0"},
    ("k_2lambda", "k_2lambda"): {"k0"},
    ("p_2lambda", "p_2lambda"): {"k0"},
    ("k_2lambda", "p_2lambda"): {"a"},
    ("k_lambda", "k_2lambda"): {"k_lambda"},
    ("k_lambda", "p_2lambda"): {"p_lambda"},
    ("p_lambda", "k_2lambda"): {"p_lambda"},
    ("p_lambda", "p_2lambda"): {"k_lambda"},
    ("k0", "k0"): {"k0"},
    ("k0", "p_lambda"): {"p_lambda"},
    ("k0", "k_lambda"): {"k_lambda"},
    ("k0", "p_2lambda"): {"p_2lambda"},
    ("k0", "k_2lambda"): {"k_2lambda"},
}


def _allowed(block_a: str, block_b: str) -> set:
    if (block_a, block_b) in _ALLOWED:
        return _ALLOWED[(block_a, block_b)]
    return _ALLOWED[(block_b, block_a)]


@dataclass(frozen=True)
class RelationReport:
    """Residuals of every adapted-frame identity, with pass/fail flags."""

    space: SpaceSpec
    residuals: dict
    tolerances: dict

    @property
    def passed(self) -> bool:
        return all(self.residuals[k] <= self.tolerances[k] for k in self.residuals)

    def failures(self) -> list:
        return [k for k in self.residuals
                if self.residuals[k] > self.tolerances[k]]

    def rows(self) -> list:
        return [(k, self.residuals[k], self.tolerances[k],
                 self.residuals[k] <= self.tolerances[k])
                for k in self.residuals]


def _opnorm(X: np.ndarray) -> float:
    return float(np.linalg.norm(X, 2))


def jacobi_residual(c: np.ndarray) -> float:
    term = np.einsum("bce,aed->abcd", c, c)
    cyc = term + np.einsum("cae,bed->abcd", c, c) + np.einsum("abe,ced->abcd", c, c)
    return float(np.abs(cyc).max())


def ad_invariance_residual(c: np.ndarray, gram: np.ndarray) -> float:
    # <[X_a, X_b], X_c> + <X_b, [X_a, X_c]> = 0
    t1 = np.einsum("abe,ec->abc", c, gram)
    t2 = np.einsum("ace,be->abc", c, gram)
    return float(np.abs(t1 + t2).max())


def verify_adapted_relations(basis: AdaptedBasis, tol: float = 1e-12) -> RelationReport:
    """Residuals of the bracket relations, norms, orthogonality, bracket
    inclusions, the zero-coordinate property of frame commutators, the
    Jacobi identity and the trace-form invariances."""
    space = basis.space
    R2 = space.R ** 2
    q1, q2 = basis.q1, basis.q2
    m = basis.matrices
    sl = basis.block_slices()
    Lam = m[0]
    res = {}

    def brk(X, Y):
        return X @ Y - Y @ X

    comm = 0.0
    for i in range(q1):
        e, f = m[sl["p_lambda"]][i], m[sl["k_lambda"]][i]
        comm = max(comm, _opnorm(brk(Lam, e) + 0.5 * f))
        comm = max(comm, _opnorm(brk(Lam, f) - 0.5 * e))
        comm = max(comm, _opnorm(brk(e, f) + 0.5 * Lam))
    for j in range(q2):
        e, f = m[sl["p_2lambda"]][j], m[sl["k_2lambda"]][j]
        comm = max(comm, _opnorm(brk(Lam, e) + f))
        comm = max(comm, _opnorm(brk(Lam, f) - e))
        comm = max(comm, _opnorm(brk(e, f) + Lam))
    res["commutation_relations"] = comm

    gram = basis.gram
    norm_dev = abs(gram[0, 0] - R2)
    for name in ("p_lambda", "k_lambda", "p_2lambda", "k_2lambda"):
        block = gram[sl[name], sl[name]]
        if block.size:
            norm_dev = max(norm_dev, float(np.abs(
                block - R2 * np.eye(block.shape[0])).max()))
    k0g = gram[sl["k0"], sl["k0"]]
    if k0g.size:
        norm_dev = max(norm_dev, float(np.abs(
            k0g - R2 * np.eye(k0g.shape[0])).max()))
    res["frame_norms"] = norm_dev / R2

    # pairwise orthogonality of a+k0, lambda pair, 2lambda pair
    groups = [np.r_[np.array([0]), np.arange(sl["k0"].start, basis.dim)],
              np.r_[np.arange(sl["p_lambda"].start, sl["p_lambda"].stop),
                    np.arange(sl["k_lambda"].start, sl["k_lambda"].stop)],
              np.r_[np.arange(sl["p_2lambda"].start, sl["p_2lambda"].stop),
                    np.arange(sl["k_2lambda"].start, sl["k_2lambda"].stop)]]
    ortho = 0.0
    for gi in range(3):
        for gj in range(gi + 1, 3):
            if groups[gi].size and groups[gj].size:
                ortho = max(ortho, float(np.abs(
                    gram[np.ix_(groups[gi], groups[gj])]).max()))
    # within a family: <e_i, f_i> = 0 and antisymmetry of the cross table
    for pn, kn in (("p_lambda", "k_lambda"), ("p_2lambda", "k_2lambda")):
        cross = gram[sl[pn], sl[kn]]
        if cross.size:
            ortho = max(ortho, float(np.abs(np.diag(cross)).max()))
            ortho = max(ortho, float(np.abs(cross + cross.T).max()))
    res["orthogonality"] = ortho / R2

    labels = basis.block_labels()
    c = basis.structure_constants
    incl = 0.0
    for a in range(basis.dim):
        for b in range(a + 1, basis.dim):
            allowed = _allowed(labels[a], labels[b])
            bad = [cc for cc in range(basis.dim) if labels[cc] not in allowed]
            if bad:
                incl = max(incl, float(np.abs(c[a, b, bad]).max()))
    res["bracket_inclusions"] = incl

    # commutator of two frame elements of m has no component along either
    dim_m = 1 + 2 * q1 + 2 * q2
    zc = 0.0
    for a in range(dim_m):
        for b in range(dim_m):
            zc = max(zc, abs(c[a, b, a]), abs(c[a, b, b]))
    res["zero_coordinate_property"] = zc

    res["jacobi"] = jacobi_residual(c)
    res["jacobi_momentum"] = jacobi_residual(basis.momentum_structure_constants)
    res["antisymmetry"] = float(np.abs(c + np.transpose(c, (1, 0, 2))).max())
    res["ad_invariance"] = ad_invariance_residual(c, gram) / R2
    res["ad_invariance_momentum"] = ad_invariance_residual(
        basis.momentum_structure_constants, basis.killing_gram) / R2

    # eigenvalue multiplicities of the squared bracket map of the frame
    ad_L = np.transpose(c, (0, 2, 1))[0]
    T = ad_L @ ad_L
    eigs = np.linalg.eigvals(T)
    dim_k0 = basis.dim - dim_m
    mult_dev = 0.0
    for target, want in ((0.0, 1 + dim_k0), (-0.25, 2 * q1), (-1.0, 2 * q2)):
        got = int(np.sum(np.abs(eigs - target) < _EIG_GROUP_TOL))
        if got != want:
            mult_dev = 1.0
    res["eigenspace_multiplicities"] = mult_dev

    tols = {k: tol for k in res}
    return RelationReport(space=space, residuals=res, tolerances=tols)


def perturbed_basis(basis: AdaptedBasis, factor: float = 2.0) -> AdaptedBasis:
    """Fault-injection helper: rescale one f-frame element (and its tensor
    rows) so that verification must fail."""
    mats = basis.matrices.copy()
    sl = basis.block_slices()
    idx = sl["k_2lambda"].start if basis.q2 else sl["k_lambda"].start
    mats[idx] = factor * mats[idx]
    c = structure_tensor(mats)
    return replace(basis, matrices=mats, structure_constants=c)
