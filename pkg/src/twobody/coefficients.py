"""Closed-form radial coefficients of the reduced two-body problem.

Everything here is a function of (q1, q2, compactness, R) and the particle
data (m1, m2, alpha, U); no matrix algebra is involved, so all nine space
families are covered.  Conventions: w = 1 + sigma*r^2 with sigma = +1
(compact) or -1 (hyperbolic); theta = arctan(r) or artanh(r); sn/cs denote
sin/cos or sinh/cosh accordingly.  The particle separation is p = 2*R*theta
and the geodesic split point sits at arclengths (alpha*p, -beta*p).

The metric matrix of the reduced frame is block diagonal:

    [[a, b], [b, c]]  once,   [[d, h], [h, f]]  q1 times,
    [[u, w], [w, v]]  q2 times.

``inverse_coeffs`` returns the exact blockwise inverse; the top block is
inverted directly as a 2x2 matrix (g00, g01, g11), which fixes the sign of
g01 = -b/(ac - b^2).  A sign-flipped variant of that entry and a halved
radial cross term circulate in print; ``print_discrepancies`` quantifies
both against the exact inverse, which this package treats as ground truth.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateBlock
from .spaces import SpaceSpec, check_r, hyperbolic_partner

_SERIES_SWITCH = 1e-4  # below this r the lambda/2lambda blocks use series


@dataclass(frozen=True)
class Potential:
    """Central interaction potential, tagged by kind.

    free:       U = 0
    cotangent:  U = -gamma * cot(p/R)  (coth hyperbolic); in terms of r this
                is -gamma*(1 - sigma*r^2)/(2r)
    harmonic:   U = k/2 * tan^2(p/(2R)) = k/2 * r^2 (tanh hyperbolic, same r-form)
    tabulated:  cubic interpolation of user samples of U(r)
    """

    kind: str = "free"
    coefficient: float = 0.0
    r_samples: tuple = field(default=(), repr=False)
    u_samples: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.kind not in ("free", "cotangent", "harmonic", "tabulated"):
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.kind == "tabulated":
            if len(self.r_samples) < 4 or len(self.r_samples) != len(self.u_samples):
                raise ValueError("tabulated potential needs >= 4 matching samples")

    def _spline(self):
        from scipy.interpolate import CubicSpline
        return CubicSpline(np.asarray(self.r_samples), np.asarray(self.u_samples))

    def value(self, space: SpaceSpec, r: float) -> float:
        if self.kind == "free":
            return 0.0
        if self.kind == "cotangent":
            sigma = space.sigma
            return -self.coefficient * (1.0 - sigma * r * r) / (2.0 * r)
        if self.kind == "harmonic":
            return 0.5 * self.coefficient * r * r
        return float(self._spline()(r))

    def derivative(self, space: SpaceSpec, r: float) -> float:
        if self.kind == "free":
            return 0.0
        if self.kind == "cotangent":
            sigma = space.sigma
            return self.coefficient * (1.0 + sigma * r * r) / (2.0 * r * r)
        if self.kind == "harmonic":
            return self.coefficient * r
        return float(self._spline()(r, 1))


@dataclass(frozen=True)
class TwoBodyParams:
    """Masses, geodesic split parameter and interaction potential."""

    m1: float
    m2: float
    alpha: float
    potential: Potential = Potential()

    def __post_init__(self):
        if not (self.m1 > 0 and self.m2 > 0):
            raise ValueError("masses must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")

    @property
    def beta(self) -> float:
        return 1.0 - self.alpha

    @property
    def reduced_mass(self) -> float:
        return self.m1 * self.m2 / (self.m1 + self.m2)


@dataclass(frozen=True)
class GammaBlocks:
    a: float
    b: float
    c: float
    d: float
    h: float
    f: float
    u: float
    w: float
    v: float

    def top(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.b, self.c]])

    def lam(self) -> np.ndarray:
        return np.array([[self.d, self.h], [self.h, self.f]])

    def lam2(self) -> np.ndarray:
        return np.array([[self.u, self.w], [self.w, self.v]])

    def assemble(self, q1: int, q2: int) -> np.ndarray:
        """Full (2 + 2q1 + 2q2)-dimensional frame metric at this r."""
        n = 2 + 2 * q1 + 2 * q2
        G = np.zeros((n, n))
        G[:2, :2] = self.top()
        o = 2
        for _ in range(q1):
            G[o:o + 2, o:o + 2] = self.lam()
            o += 2
        for _ in range(q2):
            G[o:o + 2, o:o + 2] = self.lam2()
            o += 2
        return G


@dataclass(frozen=True)
class InverseCoeffs:
    g00: float
    g01: float
    g11: float
    D: float
    E: float
    F: float
    C: float
    B: float
    A: float

    def top(self) -> np.ndarray:
        return np.array([[self.g00, self.g01], [self.g01, self.g11]])

    def lam(self) -> np.ndarray:
        return np.array([[self.D, self.E], [self.E, self.F]])

    def lam2(self) -> np.ndarray:
        return np.array([[self.C, self.B], [self.B, self.A]])


def _sncs(compact: bool):
    if compact:
        return np.sin, np.cos, math.atan
    return np.sinh, np.cosh, math.atanh


def gamma_blocks(space: SpaceSpec, params: TwoBodyParams, r: float) -> GammaBlocks:
    """Frame-metric blocks at radial coordinate r."""
    check_r(space, r)
    m1, m2, al, be = params.m1, params.m2, params.alpha, params.beta
    R2 = space.R ** 2
    sigma = space.sigma
    w_ = 1.0 + sigma * r * r
    sn, cs, arc = _sncs(space.compact)
    th = arc(r)
    a = 4.0 * R2 * (al * al * m1 + be * be * m2) / (w_ * w_)
    b = 2.0 * R2 * (al * m1 - be * m2) / w_
    c = (m1 + m2) * R2
    d = R2 * (m1 * cs(al * th) ** 2 + m2 * cs(be * th) ** 2)
    h = R2 * (-m1 * sn(al * th) * cs(al * th) + m2 * sn(be * th) * cs(be * th))
    f = R2 * (m1 * sn(al * th) ** 2 + m2 * sn(be * th) ** 2)
    u = R2 * (m1 * cs(2 * al * th) ** 2 + m2 * cs(2 * be * th) ** 2)
    w = R2 * (-m1 * sn(2 * al * th) * cs(2 * al * th)
              + m2 * sn(2 * be * th) * cs(2 * be * th))
    v = R2 * (m1 * sn(2 * al * th) ** 2 + m2 * sn(2 * be * th) ** 2)
    return GammaBlocks(a=float(a), b=float(b), c=float(c), d=float(d),
                       h=float(h), f=float(f), u=float(u), w=float(w), v=float(v))


def gamma_det_closed(space: SpaceSpec, params: TwoBodyParams, r: float) -> float:
    """det of the assembled frame metric, in closed form."""
    check_r(space, r)
    q1, q2 = space.q1, space.q2
    R4M = space.R ** 4 * params.m1 * params.m2
    w_ = 1.0 + space.sigma * r * r
    return (4.0 ** (1 + q2) * R4M ** (1 + q1 + q2)
            * r ** (2 * (q1 + q2)) / w_ ** (2 + q1 + 2 * q2))


def measure_density(space: SpaceSpec, params: TwoBodyParams, r: float) -> float:
    """Density of the radial measure (normalised sqrt(det) of the metric)."""
    check_r(space, r)
    q1, q2 = space.q1, space.q2
    w_ = 1.0 + space.sigma * r * r
    return r ** (q1 + q2) / w_ ** (1 + 0.5 * q1 + q2)


def _inverse_raw(space, params, r, complex_ok=False):
    """(g00, g01, g11, D, E, F, C, B, A) allowing complex r, R for the
    analytic-continuation path.  No series switch here."""
    m1, m2, al, be = params.m1, params.m2, params.alpha, params.beta
    M = m1 * m2
    if complex_ok:
        R = complex(space.R) * 1j
        rr = complex(r) * 1j
        sn, cs = np.sin, np.cos
        th = np.arctan(rr)
        w_ = 1.0 + rr * rr
    else:
        R = space.R
        rr = r
        sn, cs, arc = _sncs(space.compact)
        th = arc(rr)
        w_ = 1.0 + space.sigma * rr * rr
    R2 = R * R
    r2 = rr * rr
    g_den = 4.0 * R2 * M
    g00 = w_ * w_ * (m1 + m2) / g_den
    g01 = -(m1 * al - m2 * be) * 2.0 * w_ / g_den
    g11 = 4.0 * (m1 * al * al + m2 * be * be) / g_den
    D = w_ * (m1 * sn(al * th) ** 2 + m2 * sn(be * th) ** 2) / (M * R2 * r2)
    F = w_ * (m1 * cs(al * th) ** 2 + m2 * cs(be * th) ** 2) / (M * R2 * r2)
    E = w_ * (m1 * sn(2 * al * th) - m2 * sn(2 * be * th)) / (2 * M * R2 * r2)
    C = w_ * w_ * (m1 * sn(2 * al * th) ** 2 + m2 * sn(2 * be * th) ** 2) / (4 * M * R2 * r2)
    A = w_ * w_ * (m1 * cs(2 * al * th) ** 2 + m2 * cs(2 * be * th) ** 2) / (4 * M * R2 * r2)
    B = w_ * w_ * (m1 * sn(4 * al * th) - m2 * sn(4 * be * th)) / (8 * M * R2 * r2)
    return g00, g01, g11, D, E, F, C, B, A


def _moments(params):
    m1, m2, al, be = params.m1, params.m2, params.alpha, params.beta
    T = {k: m1 * al ** k + m2 * be ** k for k in (2, 4, 6)}
    U = {k: m1 * al ** k - m2 * be ** k for k in (1, 3, 5)}
    return T, U


def _series_coeffs(space, params):
    """Small-r expansions of the lambda/2lambda inverse coefficients.

    Each entry is (pole, c0, c2, c4) for value = pole/r^2 + c0 + c2 r^2 + c4 r^4,
    except E and B whose pole is ~ 1/r: (pole, c1, c3) with
    value = pole/r + c1 r + c3 r^3.
    """
    sigma = space.sigma
    m1, m2 = params.m1, params.m2
    M = m1 * m2
    R2 = space.R ** 2
    T, U = _moments(params)
    s2 = T[2]
    s4 = -(sigma / 3.0) * (2 * T[2] + T[4])
    s6 = (23.0 / 45.0) * T[2] + (4.0 / 9.0) * T[4] + (2.0 / 45.0) * T[6]
    t2 = 4 * T[2]
    t4 = -(sigma / 3.0) * (8 * T[2] + 16 * T[4])
    t6 = (92.0 / 45.0) * T[2] + (64.0 / 9.0) * T[4] + (128.0 / 45.0) * T[6]
    msum = m1 + m2
    out = {}
    out["D"] = (0.0, s2 / (M * R2), (s4 + sigma * s2) / (M * R2),
                (s6 + sigma * s4) / (M * R2))
    out["F"] = (msum / (M * R2), sigma * (msum - s2) / (M * R2),
                -(sigma * s4 + s2) / (M * R2), -(sigma * s6 + s4) / (M * R2))
    out["C"] = (0.0, t2 / (4 * M * R2), (t4 + 2 * sigma * t2) / (4 * M * R2),
                (t6 + 2 * sigma * t4 + t2) / (4 * M * R2))
    out["A"] = (msum / (4 * M * R2),
                sigma * (2 * msum - t2) / (4 * M * R2),
                (msum - sigma * t4 - 2 * t2) / (4 * M * R2),
                -sigma * (t6 + 2 * sigma * t4 + t2) / (4 * M * R2))
    out["E"] = (U[1] / (M * R2),
                (2 * sigma / 3.0) * (U[1] - U[3]) / (M * R2),
                (2.0 / 15.0) * (U[5] - U[1]) / (M * R2))
    out["B"] = (U[1] / (2 * M * R2),
                (sigma / 6.0) * (5 * U[1] - 8 * U[3]) / (M * R2),
                ((4.0 / 15.0) * U[1] - (4.0 / 3.0) * U[3]
                 + (16.0 / 15.0) * U[5]) / (M * R2))
    return out


def inverse_coeffs(space: SpaceSpec, params: TwoBodyParams, r: float) -> InverseCoeffs:
    """Blockwise inverse of the frame metric.

    Top block by exact 2x2 inversion; the lambda/2lambda blocks in the
    closed trigonometric form, switching to fourth-order series below
    r = 1e-4 to keep derivative-adjacent quantities noise free.
    """
    check_r(space, r)
    blocks = gamma_blocks(space, params, r)
    for name, det in (("top", blocks.a * blocks.c - blocks.b ** 2),
                      ("lambda", blocks.d * blocks.f - blocks.h ** 2),
                      ("2lambda", blocks.u * blocks.v - blocks.w ** 2)):
        if det < 1e-300:
            raise DegenerateBlock(f"{name} block determinant {det} at r = {r}")
    g00, g01, g11, D, E, F, C, B, A = _inverse_raw(space, params, r)
    if r < _SERIES_SWITCH:
        sc = _series_coeffs(space, params)
        r2 = r * r
        D = sc["D"][1] + sc["D"][2] * r2 + sc["D"][3] * r2 * r2
        F = sc["F"][0] / r2 + sc["F"][1] + sc["F"][2] * r2 + sc["F"][3] * r2 * r2
        C = sc["C"][1] + sc["C"][2] * r2 + sc["C"][3] * r2 * r2
        A = sc["A"][0] / r2 + sc["A"][1] + sc["A"][2] * r2 + sc["A"][3] * r2 * r2
        E = sc["E"][0] / r + sc["E"][1] * r + sc["E"][2] * r2 * r
        B = sc["B"][0] / r + sc["B"][1] * r + sc["B"][2] * r2 * r
    return InverseCoeffs(g00=float(g00), g01=float(g01), g11=float(g11),
                         D=float(D), E=float(E), F=float(F),
                         C=float(C), B=float(B), A=float(A))


def radial_operator(space: SpaceSpec, params: TwoBodyParams, r: float) -> tuple[float, float]:
    """(A2, A1): the measure-weighted radial term expanded as
    A2 * d^2/dr^2 + A1 * d/dr, with the mass prefactor taken as the reduced
    mass so that A2 = -g00/2 exactly."""
    check_r(space, r)
    q1, q2 = space.q1, space.q2
    sigma = space.sigma
    mred = params.reduced_mass
    R2 = space.R ** 2
    w_ = 1.0 + sigma * r * r
    A2 = -w_ * w_ / (8.0 * mred * R2)
    A1 = -w_ / (8.0 * mred * R2) * ((q1 + q2) * w_ / r - sigma * (q1 + 2 * q2 - 2) * r)
    return float(A2), float(A1)


def apply_divergence_form(space: SpaceSpec, params: TwoBodyParams,
                          psi, r: float, step: float = 1e-5) -> float:
    """Finite-difference application of the measure-weighted radial operator
    to a callable psi; independent oracle for ``radial_operator``."""
    q1, q2 = space.q1, space.q2
    sigma = space.sigma
    Q = q1 + q2
    eps = 0.5 * q1 + q2 - 1.0
    mred = params.reduced_mass

    def inner(x):
        wx = 1.0 + sigma * x * x
        dpsi = (psi(x + step) - psi(x - step)) / (2 * step)
        return x ** Q * wx ** (-eps) * dpsi

    w_ = 1.0 + sigma * r * r
    pref = -w_ ** (2.0 + eps) / (8.0 * mred * space.R ** 2 * r ** Q)
    d_inner = (inner(r + step) - inner(r - step)) / (2 * step)
    return pref * d_inner


@dataclass(frozen=True)
class CoeffDerivatives:
    dg00: float
    dg01: float
    dg11: float
    dD: float
    dE: float
    dF: float
    dC: float
    dB: float
    dA: float
    dU: float


def coeff_derivatives(space: SpaceSpec, params: TwoBodyParams, r: float) -> CoeffDerivatives:
    """Analytic d/dr of every inverse coefficient and of the potential."""
    check_r(space, r)
    m1, m2, al, be = params.m1, params.m2, params.alpha, params.beta
    M = m1 * m2
    R2 = space.R ** 2
    sigma = space.sigma
    dg00 = sigma * r * (1.0 + sigma * r * r) * (m1 + m2) / (R2 * M)
    dg01 = -sigma * r * (m1 * al - m2 * be) / (R2 * M)
    dg11 = 0.0
    if r < _SERIES_SWITCH:
        sc = _series_coeffs(space, params)
        r2 = r * r
        dD = 2 * sc["D"][2] * r + 4 * sc["D"][3] * r * r2
        dF = -2 * sc["F"][0] / r ** 3 + 2 * sc["F"][2] * r + 4 * sc["F"][3] * r * r2
        dC = 2 * sc["C"][2] * r + 4 * sc["C"][3] * r * r2
        dA = -2 * sc["A"][0] / r ** 3 + 2 * sc["A"][2] * r + 4 * sc["A"][3] * r * r2
        dE = -sc["E"][0] / r2 + sc["E"][1] + 3 * sc["E"][2] * r2
        dB = -sc["B"][0] / r2 + sc["B"][1] + 3 * sc["B"][2] * r2
    else:
        sn, cs, arc = _sncs(space.compact)
        th = arc(r)
        w_ = 1.0 + sigma * r * r
        r2 = r * r
        S1 = m1 * sn(al * th) ** 2 + m2 * sn(be * th) ** 2
        Sh1 = m1 * cs(al * th) ** 2 + m2 * cs(be * th) ** 2
        SD1 = m1 * al * sn(2 * al * th) + m2 * be * sn(2 * be * th)
        W1 = m1 * sn(2 * al * th) - m2 * sn(2 * be * th)
        WD1 = m1 * al * cs(2 * al * th) - m2 * be * cs(2 * be * th)
        S2 = m1 * sn(2 * al * th) ** 2 + m2 * sn(2 * be * th) ** 2
        Sh2 = m1 * cs(2 * al * th) ** 2 + m2 * cs(2 * be * th) ** 2
        SD2 = m1 * al * sn(4 * al * th) + m2 * be * sn(4 * be * th)
        W2 = m1 * sn(4 * al * th) - m2 * sn(4 * be * th)
        WD2 = m1 * al * cs(4 * al * th) - m2 * be * cs(4 * be * th)
        dD = (2 * sigma * r * S1 + SD1 - 2 * w_ * S1 / r) / (M * R2 * r2)
        dF = (2 * sigma * r * Sh1 - sigma * SD1 - 2 * w_ * Sh1 / r) / (M * R2 * r2)
        dE = (2 * sigma * r * W1 + 2 * WD1 - 2 * w_ * W1 / r) / (2 * M * R2 * r2)
        dC = w_ * (4 * sigma * r * S2 + 2 * SD2 - 2 * w_ * S2 / r) / (4 * M * R2 * r2)
        dA = w_ * (4 * sigma * r * Sh2 - 2 * sigma * SD2 - 2 * w_ * Sh2 / r) / (4 * M * R2 * r2)
        dB = w_ * (4 * sigma * r * W2 + 4 * WD2 - 2 * w_ * W2 / r) / (8 * M * R2 * r2)
    dU = params.potential.derivative(space, r)
    return CoeffDerivatives(dg00=float(dg00), dg01=float(dg01), dg11=float(dg11),
                            dD=float(dD), dE=float(dE), dF=float(dF),
                            dC=float(dC), dB=float(dB), dA=float(dA), dU=float(dU))


@dataclass(frozen=True)
class ContinuationImage:
    """Compact coefficients continued to the hyperbolic regime."""

    values: InverseCoeffs
    imag_residual: float


def continuation_image(space: SpaceSpec, params: TwoBodyParams, r: float) -> ContinuationImage:
    """Evaluate the compact closed forms at (i*r, i*R) and apply the frame
    rescaling factors of the compact/noncompact transition: -1 for the
    coefficients of squared tangent momenta (g00, g01, g11, D, C), -i for the
    tangent/stabiliser cross terms (E, B), +1 for F and A.  The real parts
    reproduce the hyperbolic closed forms; imaginary parts are residuals.
    """
    if not space.compact:
        raise ValueError("continuation starts from a compact space")
    if not 0.0 < r < 1.0:
        raise ValueError("continued radial coordinate must lie in (0, 1)")
    vals = _inverse_raw(space, params, r, complex_ok=True)
    factors = (-1.0, -1.0, -1.0,          # g00, g01, g11
               -1.0, -1.0j, 1.0,          # D, E, F
               -1.0, -1.0j, 1.0)          # C, B, A
    scaled = [f * v for f, v in zip(factors, vals)]
    imag = max(abs(v.imag) for v in scaled)
    re = [float(v.real) for v in scaled]
    coeffs = InverseCoeffs(g00=re[0], g01=re[1], g11=re[2], D=re[3], E=re[4],
                           F=re[5], C=re[6], B=re[7], A=re[8])
    return ContinuationImage(values=coeffs, imag_residual=float(imag))


def print_discrepancies(space: SpaceSpec, params: TwoBodyParams, r: float) -> dict:
    """Quantify the two documented closed-form variants against the exact
    inverse: the sign of the top-block off-diagonal entry, and the factor
    between the exact radial cross term 2*g01 and its halved printed variant.
    Ground truth is numeric inversion of the assembled metric."""
    blocks = gamma_blocks(space, params, r)
    numeric = np.linalg.inv(blocks.top())
    exact_g01 = numeric[0, 1]
    m1, m2, al, be = params.m1, params.m2, params.alpha, params.beta
    w_ = 1.0 + space.sigma * r * r
    printed_g01 = 2.0 * w_ * (m1 * al - m2 * be) / (4.0 * space.R ** 2 * m1 * m2)
    printed_cross = printed_g01 / 2.0  # halved variant of the cross term
    used_cross = inverse_coeffs(space, params, r).g01
    return {
        "top_block_offdiag_exact": float(exact_g01),
        "top_block_offdiag_printed_variant": float(printed_g01),
        "offdiag_sign_flipped": bool(printed_g01 != 0.0
                                     and exact_g01 / printed_g01 < 0.0),
        "cross_term_used": float(used_cross),
        "cross_term_printed_variant": float(printed_cross),
        "cross_term_ratio": float(used_cross / printed_cross)
        if printed_cross != 0 else float("nan"),
    }


def hyperbolic_counterpart(space: SpaceSpec) -> SpaceSpec:
    """Convenience re-export used by the continuation tests."""
    return hyperbolic_partner(space)
