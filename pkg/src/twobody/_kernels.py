"""Pure-Python integration kernel: reference implementation and fallback.

``Packed`` gathers everything a backend needs in primitive form (scalars,
flat arrays) so that the compiled core in ``_core`` can run the identical
loop without touching Python objects.  This module evaluates coefficients
through :mod:`twobody.coefficients`; the compiled core re-implements the
same closed forms in C and is pinned to this one by an equivalence test.
"""

from dataclasses import dataclass

import numpy as np

from . import coefficients as cf

EXIT_COMPLETED = 0
EXIT_BOUNDARY = 3
EXIT_NONFINITE = 4

_POT_KINDS = {"free": 0, "cotangent": 1, "harmonic": 2, "tabulated": 3}


@dataclass
class Packed:
    """Primitive view of (space, basis, params) for the integrator backends."""

    space: object
    params: object
    sigma: float
    R: float
    m1: float
    m2: float
    alpha: float
    q1: int
    q2: int
    dim_g: int
    pot_kind: int
    pot_coeff: float
    spline_x: np.ndarray
    spline_c: np.ndarray
    sc_a: np.ndarray
    sc_b: np.ndarray
    sc_c: np.ndarray
    sc_val: np.ndarray
    kinv: np.ndarray
    r_lo: float
    r_hi: float
    series: np.ndarray


def pack(space, basis, params) -> Packed:
    c = basis.momentum_structure_constants
    nz = np.nonzero(np.abs(c) > 0.0)
    pot = params.potential
    if pot.kind == "tabulated":
        spline = pot._spline()
        spline_x = np.asarray(spline.x, dtype=float)
        spline_c = np.asarray(spline.c, dtype=float)
    else:
        spline_x = np.zeros(0)
        spline_c = np.zeros((4, 0))
    lo, hi = space.r_interval
    r_lo = lo + 1e-6
    r_hi = hi - 1e-6 if np.isfinite(hi) else 1e6
    # flat series table consumed by the compiled core:
    # D(c0,c2,c4) F(pole,c0,c2,c4) C(c0,c2,c4) A(pole,c0,c2,c4) E(pole,c1,c3) B(pole,c1,c3)
    sc = cf._series_coeffs(space, params)
    series = np.array(list(sc["D"][1:]) + list(sc["F"]) + list(sc["C"][1:])
                      + list(sc["A"]) + list(sc["E"]) + list(sc["B"]))
    return Packed(
        space=space, params=params,
        sigma=float(space.sigma), R=space.R,
        m1=params.m1, m2=params.m2, alpha=params.alpha,
        q1=space.q1, q2=space.q2, dim_g=basis.dim,
        pot_kind=_POT_KINDS[pot.kind], pot_coeff=pot.coefficient,
        spline_x=spline_x, spline_c=spline_c,
        sc_a=nz[0].astype(np.int64), sc_b=nz[1].astype(np.int64),
        sc_c=nz[2].astype(np.int64), sc_val=c[nz].astype(float),
        kinv=np.linalg.inv(basis.killing_gram),
        r_lo=r_lo, r_hi=r_hi, series=series)


def _slices(q1: int, q2: int):
    o = 1
    return (slice(o, o + q1), slice(o + q1, o + 2 * q1),
            slice(o + 2 * q1, o + 2 * q1 + q2),
            slice(o + 2 * q1 + q2, o + 2 * q1 + 2 * q2))


def hamiltonian_value(p: Packed, y: np.ndarray) -> float:
    r, pr, mu = y[0], y[1], y[2:]
    co = cf.inverse_coeffs(p.space, p.params, r)
    xl, yl, x2, y2 = _slices(p.q1, p.q2)
    H = 0.5 * (co.g00 * pr * pr + 2.0 * co.g01 * pr * mu[0] + co.g11 * mu[0] ** 2)
    H += 0.5 * float(np.sum(co.D * mu[xl] ** 2 + co.F * mu[yl] ** 2
                            + 2.0 * co.E * mu[xl] * mu[yl]))
    H += 0.5 * float(np.sum(co.C * mu[x2] ** 2 + co.A * mu[y2] ** 2
                            + 2.0 * co.B * mu[x2] * mu[y2]))
    return H + p.params.potential.value(p.space, r)


def flow(p: Packed, y: np.ndarray) -> np.ndarray:
    """Time derivative of (r, p_r, mu): canonical pair plus the
    mu'_a = c_ab^c mu_c dH/dmu_b contraction."""
    r, pr, mu = y[0], y[1], y[2:]
    co = cf.inverse_coeffs(p.space, p.params, r)
    de = cf.coeff_derivatives(p.space, p.params, r)
    xl, yl, x2, y2 = _slices(p.q1, p.q2)

    hmu = np.zeros(p.dim_g)
    hmu[0] = co.g01 * pr + co.g11 * mu[0]
    hmu[xl] = co.D * mu[xl] + co.E * mu[yl]
    hmu[yl] = co.F * mu[yl] + co.E * mu[xl]
    hmu[x2] = co.C * mu[x2] + co.B * mu[y2]
    hmu[y2] = co.A * mu[y2] + co.B * mu[x2]

    rdot = co.g00 * pr + co.g01 * mu[0]
    dHdr = 0.5 * (de.dg00 * pr * pr + 2.0 * de.dg01 * pr * mu[0]
                  + de.dg11 * mu[0] ** 2)
    dHdr += 0.5 * float(np.sum(de.dD * mu[xl] ** 2 + de.dF * mu[yl] ** 2
                               + 2.0 * de.dE * mu[xl] * mu[yl]))
    dHdr += 0.5 * float(np.sum(de.dC * mu[x2] ** 2 + de.dA * mu[y2] ** 2
                               + 2.0 * de.dB * mu[x2] * mu[y2]))
    dHdr += de.dU

    mudot = np.bincount(p.sc_a,
                        weights=p.sc_val * mu[p.sc_c] * hmu[p.sc_b],
                        minlength=p.dim_g)
    out = np.empty_like(y)
    out[0] = rdot
    out[1] = -dHdr
    out[2:] = mudot
    return out


def casimir_value(p: Packed, mu: np.ndarray) -> float:
    return float(mu @ p.kinv @ mu)


def run_trajectory(p: Packed, y0: np.ndarray, dt: float, n_steps: int,
                   sample_every: int = 1) -> dict:
    """Fixed-step RK4 with per-sample energy/Casimir/off-axis monitors."""
    n_samples = n_steps // sample_every + 2
    N = y0.shape[0]
    ts = np.empty(n_samples)
    states = np.empty((n_samples, N))
    energy = np.empty(n_samples)
    casimir = np.empty(n_samples)
    mu_other = np.empty(n_samples)

    y = y0.astype(float).copy()
    k = 0

    def record(step):
        nonlocal k
        ts[k] = step * dt
        states[k] = y
        energy[k] = hamiltonian_value(p, y)
        casimir[k] = casimir_value(p, y[2:])
        mu_other[k] = float(np.max(np.abs(y[3:]))) if N > 3 else 0.0
        k += 1

    exit_code = EXIT_COMPLETED
    record(0)
    step = 0
    while step < n_steps:
        k1 = flow(p, y)
        k2 = flow(p, y + 0.5 * dt * k1)
        k3 = flow(p, y + 0.5 * dt * k2)
        k4 = flow(p, y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        step += 1
        if not np.all(np.isfinite(y)):
            exit_code = EXIT_NONFINITE
            break
        if not (p.r_lo <= y[0] <= p.r_hi):
            exit_code = EXIT_BOUNDARY
            break
        if step % sample_every == 0 or step == n_steps:
            record(step)
    return {"t": ts[:k], "states": states[:k], "energy": energy[:k],
            "casimir": casimir[:k], "mu_other": mu_other[:k],
            "exit_code": exit_code, "steps_done": step}
