"""Mass-center constructions on constant-curvature spaces.

Three interval points for a particle pair at geodesic distance rho:

  R1  plain mass ratio,   rho1 = rho * m2/(m1+m2)
  R2  sine law            m1 sin(rho1/R) = m2 sin(rho2/R)   (sinh hyperbolic),
      carrying the effective mass m1 cos(rho1/R) + m2 cos(rho2/R)
  R3  double-angle law    m1 sin(2 rho1/R) = m2 sin(2 rho2/R),
      equivalently the minimiser of the spread functional Upsilon

with rho1 measured from particle 1 and rho1 + rho2 = rho.  Upsilon sums
m_i sinh^2(dist/R) on hyperbolic spaces and m_i sin^2(dist/R) on spheres.
``alpha_for_center`` returns the split parameter that zeroes the matching
cross coefficient of the reduced Hamiltonian.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import embedded
from .coefficients import TwoBodyParams, inverse_coeffs
from .errors import DegenerateCenter, NonConvergence, UnsupportedModel
from .roots import bracketed_root, scan_bracket
from .spaces import Family, SpaceSpec

_R2_FAMILIES = frozenset({Family.SPHERE, Family.REAL_PROJECTIVE,
                          Family.REAL_HYPERBOLIC})


@dataclass(frozen=True)
class CenterQuery:
    space: SpaceSpec
    m1: float
    m2: float
    rho: float

    def __post_init__(self):
        if not (self.m1 > 0 and self.m2 > 0):
            raise ValueError("masses must be positive")
        if not self.rho > 0:
            raise ValueError("separation must be positive")
        if self.space.compact and self.rho > self.space.diameter:
            raise ValueError(f"separation {self.rho} exceeds the diameter "
                             f"{self.space.diameter}")


def center_r1(query: CenterQuery) -> float:
    """Ratio point: distance from particle 1."""
    return query.rho * query.m2 / (query.m1 + query.m2)


def center_r2(query: CenterQuery) -> tuple[float, float]:
    """Sine-law point and its effective mass."""
    sp, m1, m2, rho = query.space, query.m1, query.m2, query.rho
    if sp.family not in _R2_FAMILIES:
        raise UnsupportedModel("the sine-law center is defined on "
                               "constant-curvature spaces only")
    R = sp.R
    if sp.compact:
        if abs(rho - math.pi * R) < 1e-12 * R:
            if abs(m1 - m2) < 1e-12 * (m1 + m2):
                raise DegenerateCenter(
                    "antipodal equal masses: any equator point solves the "
                    "sine law and the effective mass vanishes")
            raise DegenerateCenter("antipodal particles: the sine law "
                                   "degenerates to the boundary")
        sn, cs = math.sin, math.cos
    else:
        sn, cs = math.sinh, math.cosh

    def eq(rho1):
        return m1 * sn(rho1 / R) - m2 * sn((rho - rho1) / R)

    def deq(rho1):
        return (m1 * cs(rho1 / R) + m2 * cs((rho - rho1) / R)) / R

    rho1 = bracketed_root(eq, 0.0, rho, fprime=deq, xtol=1e-12)
    mass = m1 * cs(rho1 / R) + m2 * cs((rho - rho1) / R)
    return rho1, mass


def center_r2_closed(query: CenterQuery) -> float:
    """Closed-form solution of the sine law; test oracle for center_r2."""
    sp, m1, m2, rho = query.space, query.m1, query.m2, query.rho
    R = sp.R
    c = rho / R
    if sp.compact:
        return R * math.atan2(m2 * math.sin(c), m1 + m2 * math.cos(c))
    return R * math.atanh(m2 * math.sinh(c) / (m1 + m2 * math.cosh(c)))


def center_r3(query: CenterQuery) -> float:
    """Double-angle point (position only; no mass is assigned to it)."""
    sp, m1, m2, rho = query.space, query.m1, query.m2, query.rho
    R = sp.R
    if sp.compact and rho >= math.pi * R / 2:
        raise ValueError("the double-angle center needs separation below "
                         "pi*R/2 on compact spaces")
    sn = math.sin if sp.compact else math.sinh
    cs = math.cos if sp.compact else math.cosh

    def eq(rho1):
        return m1 * sn(2 * rho1 / R) - m2 * sn(2 * (rho - rho1) / R)

    def deq(rho1):
        return 2.0 * (m1 * cs(2 * rho1 / R) + m2 * cs(2 * (rho - rho1) / R)) / R

    lo, hi = scan_bracket(eq, 0.0, rho)
    return bracketed_root(eq, lo, hi, fprime=deq, xtol=1e-12)


def upsilon(space: SpaceSpec, particles, x: np.ndarray) -> float:
    """Mass-weighted squared spread of embedded particle positions seen
    from the point x."""
    if space.family not in embedded.EMBEDDABLE:
        raise UnsupportedModel("spread functional needs an embedded model")
    total = 0.0
    sq = math.sin if space.compact else math.sinh
    for point, mass in particles:
        d = embedded.geodesic_distance(space, np.asarray(x), np.asarray(point))
        total += mass * sq(d / space.R) ** 2
    return total


def _upsilon_gradient(space: SpaceSpec, particles, x: np.ndarray) -> np.ndarray:
    """Ambient gradient projected to the tangent space at x."""
    R = space.R
    J = embedded.ambient_form(space, x.shape[0])
    g = np.zeros_like(x)
    for point, mass in particles:
        y = np.asarray(point, dtype=float)
        if space.compact:
            c = np.dot(x, y) / (R * R)
            # d/dx sin^2(d/R) with cos(d/R) = c
            g += -2.0 * mass * c * y / (R * R)
        else:
            c = -embedded.metric_dot(space, x, y) / (R * R)
            g += -2.0 * mass * c * (J * y) / (R * R)
    # remove the normal component
    gx = embedded.metric_dot(space, g, x) / embedded.metric_dot(space, x, x)
    return g - gx * x


def upsilon_minimize(space: SpaceSpec, particles, grad_tol: float = 1e-9,
                     max_iter: int = 100_000) -> np.ndarray:
    """Minimise the spread functional.

    Two particles: golden-section search along the connecting geodesic to
    1e-10 in arclength.  Three or more: projected gradient descent with
    backtracking line search on the embedded model.
    """
    if space.family not in embedded.EMBEDDABLE:
        raise UnsupportedModel("spread functional needs an embedded model")
    particles = [(np.asarray(p, dtype=float), float(m)) for p, m in particles]
    if space.compact:
        pts = [p for p, _ in particles]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if embedded.geodesic_distance(space, pts[i], pts[j]) \
                        >= math.pi * space.R / 2:
                    raise ValueError("compact minimisation requires pairwise "
                                     "distances below pi*R/2")
    if len(particles) == 1:
        return particles[0][0]
    if len(particles) == 2:
        (y1, _), (y2, _) = particles
        rho = embedded.geodesic_distance(space, y1, y2)
        v = embedded.tangent_toward(space, y1, y2)

        def val(t):
            return upsilon(space, particles, embedded.geodesic_point(space, y1, v, t))

        inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
        a, b = 0.0, rho
        c = b - inv_phi * (b - a)
        d = a + inv_phi * (b - a)
        fc, fd = val(c), val(d)
        while b - a > 1e-10:
            if fc < fd:
                b, d, fd = d, c, fc
                c = b - inv_phi * (b - a)
                fc = val(c)
            else:
                a, c, fc = c, d, fd
                d = a + inv_phi * (b - a)
                fd = val(d)
        t_best = 0.5 * (a + b)
        # golden section alone stalls at sqrt(eps) against the flat quadratic
        # minimum; one parabolic vertex through well-separated samples fixes it
        delta = 1e-4 * rho
        if delta < t_best < rho - delta:
            f_m, f_0, f_p = val(t_best - delta), val(t_best), val(t_best + delta)
            curv = f_m - 2.0 * f_0 + f_p
            if curv > 0.0:
                shift = 0.5 * delta * (f_m - f_p) / curv
                if abs(shift) < delta:
                    t_best += shift
        return embedded.geodesic_point(space, y1, v, t_best)

    x = embedded.project_to_manifold(
        space, np.mean([p for p, _ in particles], axis=0))
    for _ in range(max_iter):
        g = _upsilon_gradient(space, particles, x)
        gnorm = math.sqrt(abs(embedded.metric_dot(space, g, g)))
        if gnorm < grad_tol:
            return x
        step = 1.0
        f0 = upsilon(space, particles, x)
        while step > 1e-18:
            x_new = embedded.project_to_manifold(space, x - step * g)
            if upsilon(space, particles, x_new) < f0:
                break
            step *= 0.5
        else:
            return x  # stalled at roundoff resolution
        x = x_new
    raise NonConvergence(f"gradient descent did not reach |grad| < {grad_tol} "
                         f"within {max_iter} iterations")


_ALPHA_KINDS = ("R1", "R3_2lambda", "R3_lambda")


def alpha_for_center(space: SpaceSpec, params: TwoBodyParams, r: float,
                     kind: str) -> float:
    """Split parameter alpha placing the reference point at a mass center.

    R1 is the mass-ratio value (independent of r).  R3_2lambda zeroes the
    2lambda cross coefficient B; R3_lambda zeroes the lambda cross
    coefficient E (the double-angle law on the submanifold of quartered
    curvature).
    """
    if kind not in _ALPHA_KINDS:
        raise ValueError(f"kind must be one of {_ALPHA_KINDS}")
    m1, m2 = params.m1, params.m2
    if kind == "R1":
        return m2 / (m1 + m2)
    th = math.atan(r) if space.compact else math.atanh(r)
    sn = math.sin if space.compact else math.sinh
    factor = 4.0 if kind == "R3_2lambda" else 2.0

    def eq(alpha):
        return m1 * sn(factor * alpha * th) - m2 * sn(factor * (1.0 - alpha) * th)

    eps = 1e-12
    lo, hi = scan_bracket(eq, eps, 1.0 - eps)
    return bracketed_root(eq, lo, hi, xtol=1e-14)


def cross_coefficient_at_alpha(space: SpaceSpec, params: TwoBodyParams,
                               r: float, kind: str) -> float:
    """B or E evaluated at the same (space, r) for a given params.alpha."""
    co = inverse_coeffs(space, params, r)
    return co.B if kind == "R3_2lambda" else co.E
