"""Reduced classical dynamics: mixed canonical / Lie-Poisson flow.

The state is (r, p_r, mu) with mu the momentum vector over the adapted
frame in the order (p_L, p_x_lambda_i, p_y_lambda_i, p_x_2lambda_j,
p_y_2lambda_j, k0 components).  Evolution couples Hamilton's equations in
(r, p_r) with mu'_a = c_ab^c mu_c dH/dmu_b under the bracket convention
{p_X, p_Y} = +p_[X,Y], using the real-isometry-algebra structure tensor.

Any mu vector is accepted; states realizable on the cotangent bundle of
the configuration space form a subset of phase space (the momentum-map
constraint is not imposed).

An optional compiled backend accelerates the stepping loop; it is selected
at import and can be forced per call via ``backend=``.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .algebra import AdaptedBasis
from .coefficients import TwoBodyParams
from .errors import BoundaryReached, NonFiniteState
from .spaces import SpaceSpec, check_r

try:
    from . import _core
    HAVE_COMPILED = True
except ImportError:  # pure-Python fallback
    _core = None
    HAVE_COMPILED = False

DEFAULT_BACKEND = "compiled" if HAVE_COMPILED else "python"


def _select_backend(backend: str):
    if backend == "auto":
        backend = DEFAULT_BACKEND
    if backend == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled core unavailable; rebuild with Cython "
                               "or use backend='python'")
        return _core.run_trajectory, "compiled"
    if backend == "python":
        return _kernels.run_trajectory, "python"
    raise ValueError(f"unknown backend {backend!r}")


@dataclass(frozen=True)
class PhaseState:
    r: float
    p_r: float
    mu: np.ndarray

    def packed(self) -> np.ndarray:
        return np.concatenate(([self.r, self.p_r], self.mu))

    @classmethod
    def from_packed(cls, y: np.ndarray) -> "PhaseState":
        return cls(r=float(y[0]), p_r=float(y[1]), mu=np.array(y[2:]))


def _validate(space: SpaceSpec, basis: AdaptedBasis, state: PhaseState):
    check_r(space, state.r)
    if state.mu.shape != (basis.dim,):
        raise ValueError(f"mu must have length {basis.dim}, got {state.mu.shape}")


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution with conservation monitors."""

    t: np.ndarray
    states: np.ndarray        # (n_samples, 2 + dim_g) rows (r, p_r, mu...)
    energy: np.ndarray
    casimir: np.ndarray
    geodesic_residual: np.ndarray
    exit_reason: str
    mu_names: tuple

    @property
    def r(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def p_r(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def mu(self) -> np.ndarray:
        return self.states[:, 2:]

    def final_state(self) -> PhaseState:
        return PhaseState.from_packed(self.states[-1])

    def energy_drift(self) -> float:
        e0 = self.energy[0]
        scale = max(abs(e0), 1e-300)
        return float(np.max(np.abs(self.energy - e0)) / scale)

    def casimir_drift(self) -> float:
        c0 = self.casimir[0]
        scale = max(abs(c0), 1.0)
        return float(np.max(np.abs(self.casimir - c0)) / scale)


def hamiltonian(space: SpaceSpec, basis: AdaptedBasis, params: TwoBodyParams,
                state: PhaseState) -> float:
    """Quadratic-in-momenta energy with the blockwise-inverse coefficients."""
    _validate(space, basis, state)
    p = _kernels.pack(space, basis, params)
    return _kernels.hamiltonian_value(p, state.packed())


def flow_field(space: SpaceSpec, basis: AdaptedBasis, params: TwoBodyParams,
               state: PhaseState) -> PhaseState:
    """Time derivative of the state (returned in PhaseState form)."""
    _validate(space, basis, state)
    p = _kernels.pack(space, basis, params)
    return PhaseState.from_packed(_kernels.flow(p, state.packed()))


def casimir(basis: AdaptedBasis, mu: np.ndarray) -> float:
    """Quadratic Casimir: mu contracted with the inverse scaled-Killing Gram."""
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (basis.dim,):
        raise ValueError(f"mu must have length {basis.dim}")
    return float(mu @ np.linalg.inv(basis.killing_gram) @ mu)


def geodesic_regime_residual(params: TwoBodyParams, state: PhaseState) -> float:
    """Zero iff the state sits in the invariant regime where the interval
    point can run along a geodesic: the split parameter balances the masses
    and every momentum except p_L vanishes."""
    mass_term = abs(params.m1 * params.alpha - params.m2 * params.beta) \
        / (params.m1 + params.m2)
    mu_term = float(np.max(np.abs(state.mu[1:]))) if state.mu.size > 1 else 0.0
    return max(mass_term, mu_term)


def integrate(space: SpaceSpec, basis: AdaptedBasis, params: TwoBodyParams,
              state0: PhaseState, dt: float, t_end: float,
              sample_every: int = 1, backend: str = "auto") -> Trajectory:
    """Fixed-step RK4 integration with energy/Casimir monitors.

    Halts with BoundaryReached when r crosses a guard placed 1e-6 inside
    the radial interval ends (1e6 standing in for an infinite end), or
    NonFiniteState on numerical blowup; both carry the partial trajectory.
    """
    if dt <= 0 or t_end <= 0:
        raise ValueError("dt and t_end must be positive")
    _validate(space, basis, state0)
    n_steps = max(1, int(round(t_end / dt)))
    run, name = _select_backend(backend)
    packed = _kernels.pack(space, basis, params)
    raw = run(packed, state0.packed(), float(dt), n_steps, int(sample_every))

    mass_term = abs(params.m1 * params.alpha - params.m2 * params.beta) \
        / (params.m1 + params.m2)
    geod = np.maximum(raw["mu_other"], mass_term)
    reason = {_kernels.EXIT_COMPLETED: "completed",
              _kernels.EXIT_BOUNDARY: "boundary",
              _kernels.EXIT_NONFINITE: "nonfinite"}[raw["exit_code"]]
    traj = Trajectory(t=raw["t"], states=raw["states"], energy=raw["energy"],
                      casimir=raw["casimir"], geodesic_residual=geod,
                      exit_reason=reason, mu_names=basis.mu_names)
    if raw["exit_code"] == _kernels.EXIT_BOUNDARY:
        raise BoundaryReached(
            f"r left the guarded interval [{packed.r_lo}, {packed.r_hi}] "
            f"at step {raw['steps_done']}", trajectory=traj)
    if raw["exit_code"] == _kernels.EXIT_NONFINITE:
        raise NonFiniteState(
            f"state became non-finite at step {raw['steps_done']}",
            trajectory=traj)
    return traj
