"""Embedded sphere and hyperboloid models.

The sphere of radius R sits in Euclidean (n+1)-space; the hyperbolic space
is the upper sheet of x.J.x = -R^2 with J = diag(-1, 1, ..., 1).  Killing
fields of the matrix algebra evaluate as V_X(y) = X y, which lets the
closed-form field products along the reference geodesic be checked against
direct numerics, and gives distances/geodesics for the mass-center search.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .algebra import AdaptedBasis
from .errors import UnsupportedModel
from .spaces import Family, SpaceSpec

EMBEDDABLE = frozenset({Family.SPHERE, Family.REAL_HYPERBOLIC})


def _require_embeddable(space: SpaceSpec):
    if space.family not in EMBEDDABLE:
        raise UnsupportedModel(
            f"no embedded model for {space.family.value}; "
            f"closed-form products remain available")


def ambient_form(space: SpaceSpec, n_amb: int) -> np.ndarray:
    J = np.ones(n_amb)
    if not space.compact:
        J[0] = -1.0
    return J


def base_point(space: SpaceSpec, n_amb: int) -> np.ndarray:
    x0 = np.zeros(n_amb)
    x0[0] = space.R
    return x0


def metric_dot(space: SpaceSpec, v: np.ndarray, w: np.ndarray) -> float:
    J = ambient_form(space, v.shape[-1])
    return float(np.sum(J * v * w))


def geodesic_distance(space: SpaceSpec, x: np.ndarray, y: np.ndarray) -> float:
    R = space.R
    if space.compact:
        c = np.clip(np.dot(x, y) / (R * R), -1.0, 1.0)
        return R * math.acos(c)
    c = max(1.0, -metric_dot(space, x, y) / (R * R))
    return R * math.acosh(c)


def tangent_toward(space: SpaceSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Unit tangent at x pointing toward y (x, y not antipodal/equal)."""
    R = space.R
    J = ambient_form(space, x.shape[0])
    v = y - (metric_dot(space, y, x) / metric_dot(space, x, x)) * x
    norm = math.sqrt(metric_dot(space, v, v))
    if norm < 1e-300:
        raise ValueError("points coincide or are antipodal; tangent undefined")
    return v / norm


def geodesic_point(space: SpaceSpec, x: np.ndarray, v: np.ndarray, t: float) -> np.ndarray:
    """Point at arclength t along the unit-speed geodesic from x with tangent v."""
    R = space.R
    if space.compact:
        return math.cos(t / R) * x + R * math.sin(t / R) * v
    return math.cosh(t / R) * x + R * math.sinh(t / R) * v


def project_to_manifold(space: SpaceSpec, x: np.ndarray) -> np.ndarray:
    R = space.R
    if space.compact:
        return x * (R / np.linalg.norm(x))
    q = -metric_dot(space, x, x)
    return x * (R / math.sqrt(q))


_PAIR_NAMES = ("LL", "XlXl", "XlYl", "YlYl", "X2X2", "X2Y2", "Y2Y2")


def products_closed(space: SpaceSpec, s: np.ndarray) -> dict:
    """Closed-form Killing-field products along the reference geodesic.

    Keys: LL, XlXl, XlYl, YlYl (lambda family, absent if q1 = 0),
    X2X2, X2Y2, Y2Y2 (2lambda family).  Every product of distinct frame
    fields not listed here vanishes identically on the geodesic.
    """
    s = np.asarray(s, dtype=float)
    R = space.R
    R2h = R * R / 2.0
    if space.compact:
        cos1, sin1 = np.cos(s / R), np.sin(s / R)
        cos2, sin2 = np.cos(2 * s / R), np.sin(2 * s / R)
        sgn = 1.0
    else:
        cos1, sin1 = np.cosh(s / R), np.sinh(s / R)
        cos2, sin2 = np.cosh(2 * s / R), np.sinh(2 * s / R)
        sgn = -1.0
    out = {"LL": np.full_like(s, R * R),
           "X2X2": R2h * (1.0 + cos2),
           "X2Y2": -R2h * sin2,
           "Y2Y2": R2h * sgn * (1.0 - cos2)}
    if space.q1:
        out["XlXl"] = R2h * (1.0 + cos1)
        out["XlYl"] = -R2h * sin1
        out["YlYl"] = R2h * sgn * (1.0 - cos1)
    return out


def geodesic_points(space: SpaceSpec, basis: AdaptedBasis, s: np.ndarray) -> np.ndarray:
    _require_embeddable(space)
    Lam = basis.momentum_matrices[0].real
    x0 = base_point(space, Lam.shape[0])
    return np.array([expm((float(si) / space.R) * Lam) @ x0 for si in np.atleast_1d(s)])


def products_embedded(space: SpaceSpec, basis: AdaptedBasis, s: np.ndarray) -> dict:
    """Pointwise field products on the embedded model, one array per pair.

    Evaluated for every index i <= q2 of the 2lambda family (and would
    include the lambda family were any embeddable space to carry one);
    arrays have shape (len(s), multiplicity).
    """
    _require_embeddable(space)
    s = np.atleast_1d(np.asarray(s, dtype=float))
    pts = geodesic_points(space, basis, s)
    J = ambient_form(space, pts.shape[1])
    sl = basis.block_slices()
    L = basis.momentum_matrices[0].real
    X2 = basis.momentum_matrices[sl["p_2lambda"]].real
    Y2 = basis.momentum_matrices[sl["k_2lambda"]].real

    def prod(A, B):
        va = pts @ A.T
        vb = pts @ B.T
        return np.einsum("sk,k,sk->s", va, J, vb)

    out = {"LL": prod(L, L)}
    out["X2X2"] = np.stack([prod(X, X) for X in X2], axis=1)
    out["X2Y2"] = np.stack([prod(X, Y) for X, Y in zip(X2, Y2)], axis=1)
    out["Y2Y2"] = np.stack([prod(Y, Y) for Y in Y2], axis=1)
    return out


def zero_products_embedded(space: SpaceSpec, basis: AdaptedBasis, s: np.ndarray) -> float:
    """Max |g(A, B)| over field pairs whose product must vanish on the geodesic:
    L against every 2lambda field, and mixed-index 2lambda pairs."""
    _require_embeddable(space)
    s = np.atleast_1d(np.asarray(s, dtype=float))
    pts = geodesic_points(space, basis, s)
    J = ambient_form(space, pts.shape[1])
    sl = basis.block_slices()
    L = basis.momentum_matrices[0].real
    X2 = basis.momentum_matrices[sl["p_2lambda"]].real
    Y2 = basis.momentum_matrices[sl["k_2lambda"]].real
    vL = pts @ L.T
    worst = 0.0
    fields = [("X", i, pts @ X.T) for i, X in enumerate(X2)]
    fields += [("Y", i, pts @ Y.T) for i, Y in enumerate(Y2)]
    for kind, i, v in fields:
        worst = max(worst, float(np.abs(np.einsum("sk,k,sk->s", vL, J, v)).max()))
        for kind2, j, w in fields:
            if i == j and kind != kind2:
                continue  # the signed XiYi product is the nonzero one
            if i == j and kind == kind2:
                continue
            worst = max(worst, float(np.abs(
                np.einsum("sk,k,sk->s", v, J, w)).max()))
    return worst


@dataclass(frozen=True)
class GeodesicProductTable:
    """Closed forms, embedded values (when a model exists) and deviations."""

    space: SpaceSpec
    s: np.ndarray
    closed: dict
    embedded: dict | None

    def max_deviation(self) -> float:
        if self.embedded is None:
            raise UnsupportedModel("no embedded values in this table")
        worst = 0.0
        for key, emb in self.embedded.items():
            ref = self.closed[key]
            dev = np.abs(emb - (ref[:, None] if emb.ndim == 2 else ref))
            worst = max(worst, float(dev.max()))
        return worst


def killing_products_along_geodesic(space: SpaceSpec, basis: AdaptedBasis | None,
                                    s: np.ndarray) -> GeodesicProductTable:
    """Closed-form product table plus, for sphere/real-hyperbolic spaces,
    the embedded-model evaluation on the same grid."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    closed = products_closed(space, s)
    emb = None
    if space.family in EMBEDDABLE and basis is not None:
        emb = products_embedded(space, basis, s)
    return GeodesicProductTable(space=space, s=s, closed=closed, embedded=emb)
