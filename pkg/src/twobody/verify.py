"""Verification battery behind ``twobody verify`` and the acceptance tests.

Each check yields (name, worst residual, tolerance, pass flag); a scope
passes when every row does.  Residual comparisons follow the module
contracts: closed forms against numeric linear algebra, continued compact
coefficients against hyperbolic ones, conservation monitors against their
stated drift bounds.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import coefficients as cf
from . import dynamics as dyn
from . import embedded, masscenter
from .algebra import (build_adapted_basis, perturbed_basis, realize_algebra,
                      verify_adapted_relations)
from .spaces import Family, hyperbolic_partner, make_space

ALGEBRA_SUITE = (
    [(Family.SPHERE, n) for n in range(2, 7)]
    + [(Family.REAL_HYPERBOLIC, n) for n in range(2, 6)]
    + [(Family.COMPLEX_PROJECTIVE, n) for n in range(2, 5)]
    + [(Family.COMPLEX_HYPERBOLIC, n) for n in (2, 3)]
)

GEODESIC_SUITE = (
    [(Family.SPHERE, n) for n in (2, 3)]
    + [(Family.REAL_HYPERBOLIC, n) for n in (2, 3)]
)

_ALL_FAMILIES = list(Family)


@dataclass(frozen=True)
class CheckRow:
    name: str
    value: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.value <= self.tol

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status}  {self.name:<58s} {self.value:.3e}  (tol {self.tol:.1e})"


_basis_cache = {}


def cached_basis(family: Family, n: int, R: float = 1.0):
    key = (family, n, R)
    if key not in _basis_cache:
        space = make_space(family, n, R)
        _basis_cache[key] = (space, build_adapted_basis(space, realize_algebra(space)))
    return _basis_cache[key]


def algebra_checks(inject_fault: bool = False) -> list:
    rows = []
    for fam, n in ALGEBRA_SUITE:
        space, basis = cached_basis(fam, n)
        if inject_fault and fam is Family.SPHERE and n == 2:
            basis = perturbed_basis(basis)
        report = verify_adapted_relations(basis, tol=1e-12)
        worst = max(report.residuals.values())
        rows.append(CheckRow(f"algebra {fam.value} n={n} relations", worst, 1e-12))
    for fam, n in GEODESIC_SUITE:
        space, basis = cached_basis(fam, n)
        if space.compact:
            s = np.linspace(0.0, 0.98 * math.pi * space.R, 50)
        else:
            s = np.linspace(0.0, 3.0 * space.R, 50)
        table = embedded.killing_products_along_geodesic(space, basis, s)
        rows.append(CheckRow(f"geodesic products {fam.value} n={n}",
                             table.max_deviation(), 1e-10))
        rows.append(CheckRow(f"geodesic zero-products {fam.value} n={n}",
                             embedded.zero_products_embedded(space, basis, s),
                             1e-10))
    return rows


def _draw_space(rng):
    fam = _ALL_FAMILIES[rng.integers(len(_ALL_FAMILIES))]
    if fam in (Family.CAYLEY_PROJECTIVE, Family.CAYLEY_HYPERBOLIC):
        n = 2
    else:
        n = int(rng.integers(2, 5))
    R = float(rng.uniform(0.5, 2.0))
    space = make_space(fam, n, R)
    lo, hi = space.r_interval
    if math.isinf(hi):
        r = float(rng.uniform(0.05, 3.0))
    else:
        r = float(rng.uniform(0.05, 0.95))
    params = cf.TwoBodyParams(m1=float(rng.uniform(0.2, 5.0)),
                              m2=float(rng.uniform(0.2, 5.0)),
                              alpha=float(rng.uniform(0.05, 0.95)))
    return space, params, r


def coeffs_checks(n_draws: int = 100, seed: int = 1234) -> list:
    rng = np.random.default_rng(seed)
    det_worst = inv_worst = sym_worst = cont_worst = imag_worst = 0.0
    for _ in range(n_draws):
        space, params, r = _draw_space(rng)
        blocks = cf.gamma_blocks(space, params, r)
        G = blocks.assemble(space.q1, space.q2)
        det_num = np.linalg.det(G)
        det_cl = cf.gamma_det_closed(space, params, r)
        det_worst = max(det_worst, abs(det_cl - det_num) / abs(det_num))
        inv = cf.inverse_coeffs(space, params, r)
        for bm, im in ((blocks.top(), inv.top()), (blocks.lam(), inv.lam()),
                       (blocks.lam2(), inv.lam2())):
            inv_worst = max(inv_worst, float(np.abs(im @ bm - np.eye(2)).max()))
        A2, _ = cf.radial_operator(space, params, r)
        sym_worst = max(sym_worst, abs(A2 + 0.5 * inv.g00) / abs(A2))
        if space.compact:
            rc = min(r, 0.9)
            img = cf.continuation_image(space, params, rc)
            imag_worst = max(imag_worst, img.imag_residual)
            hyp = hyperbolic_partner(space)
            ih = cf.inverse_coeffs(hyp, params, rc)
            for name in ("g00", "g01", "g11", "D", "E", "F", "C", "B", "A"):
                ref = getattr(ih, name)
                got = getattr(img.values, name)
                cont_worst = max(cont_worst,
                                 abs(got - ref) / max(1.0, abs(ref)))
    rows = [
        CheckRow(f"det closed form vs numeric ({n_draws} draws)", det_worst, 1e-10),
        CheckRow(f"block inverses vs numeric ({n_draws} draws)", inv_worst, 1e-10),
        CheckRow("radial symbol A2 = -g00/2", sym_worst, 1e-12),
        CheckRow("continuation equals hyperbolic forms", cont_worst, 1e-10),
        CheckRow("continuation imaginary residue", imag_worst, 1e-12),
    ]
    return rows


def discrepancy_report() -> list:
    """Human-readable record of the two known printed-variant deviations,
    with numeric inversion of the assembled metric as ground truth."""
    space = make_space(Family.SPHERE, 2, 1.0)
    params = cf.TwoBodyParams(m1=2.0, m2=1.0, alpha=0.3)
    d = cf.print_discrepancies(space, params, 0.7)
    return [
        "documented deviations from a circulated printed variant "
        "(ground truth: numeric inversion of the assembled frame metric):",
        f"  1. top-block off-diagonal: exact {d['top_block_offdiag_exact']:+.6f} "
        f"vs printed variant {d['top_block_offdiag_printed_variant']:+.6f} "
        f"(sign flipped: {d['offdiag_sign_flipped']})",
        f"  2. radial cross term: used {d['cross_term_used']:+.6f} vs halved "
        f"printed variant {d['cross_term_printed_variant']:+.6f} "
        f"(ratio {d['cross_term_ratio']:+.2f})",
    ]


# Free (U = 0) cases tuned so trajectories stay inside the radial guards
# for t_end = 10.  ratio_dt is the coarse step whose halving exhibits the
# fourth-order 16x drift reduction; for the hyperbolic case any in-bounds
# free trajectory has dt=1e-3 truncation below roundoff (free pairs escape
# unless the energy is small), so the order check runs at a coarser pair.
DYNAMICS_CASES = {
    "S2": (Family.SPHERE, 2, 1.0, dict(m1=1.0, m2=1.5, alpha=0.45),
           dict(r=1.0, p_r=3.0, mu=(4.0, 3.0, 2.0)), 1e-3),
    "H2": (Family.REAL_HYPERBOLIC, 2, 2.0, dict(m1=1.2, m2=0.8, alpha=0.5),
           dict(r=0.3, p_r=-0.25, mu=(0.8, 0.6, 0.45)), 8e-3),
    "CP2": (Family.COMPLEX_PROJECTIVE, 2, 1.0, dict(m1=1.0, m2=2.0, alpha=0.55),
            dict(r=0.8, p_r=0.3, mu=(1.2, 1.0, 0.7, 0.8, 0.5, 1.0, 0.8, 0.6)),
            1e-3),
}


def _case_setup(key):
    fam, n, R, pdata, sdata, ratio_dt = DYNAMICS_CASES[key]
    space, basis = cached_basis(fam, n, R)
    params = cf.TwoBodyParams(potential=cf.Potential(), **pdata)
    state = dyn.PhaseState(r=sdata["r"], p_r=sdata["p_r"],
                           mu=np.array(sdata["mu"], dtype=float))
    return space, basis, params, state, ratio_dt


def dynamics_checks(backend: str = "auto", dt: float = 1e-3,
                    t_end: float = 10.0) -> list:
    rows = []
    for key in DYNAMICS_CASES:
        space, basis, params, state, ratio_dt = _case_setup(key)
        traj = dyn.integrate(space, basis, params, state, dt, t_end,
                             sample_every=20, backend=backend)
        rows.append(CheckRow(f"dynamics {key} energy drift",
                             traj.energy_drift(), 1e-8))
        rows.append(CheckRow(f"dynamics {key} casimir drift",
                             traj.casimir_drift(), 1e-8))
        coarse = dyn.integrate(space, basis, params, state, ratio_dt, t_end,
                               sample_every=20, backend=backend)
        halved = dyn.integrate(space, basis, params, state, ratio_dt / 2,
                               t_end, sample_every=40, backend=backend)
        ratio = coarse.energy_drift() / max(halved.energy_drift(), 1e-300)
        # fourth-order stepping: halving dt divides the drift by about 16
        rows.append(CheckRow(f"dynamics {key} halving ratio off 16x",
                             abs(math.log2(max(ratio, 1e-300)) - 4.0), 1.6))
    # invariant geodesic regime: balanced split, only p_L loaded
    space, basis = cached_basis(Family.SPHERE, 2)
    params = cf.TwoBodyParams(m1=1.0, m2=2.0, alpha=2.0 / 3.0)
    mu0 = np.zeros(basis.dim)
    mu0[0] = 0.5
    state = dyn.PhaseState(r=1.0, p_r=0.1, mu=mu0)
    traj = dyn.integrate(space, basis, params, state, dt, t_end,
                         sample_every=20, backend=backend)
    rows.append(CheckRow("geodesic regime max off-axis momentum",
                         float(np.max(traj.geodesic_residual)), 1e-12))
    rows.append(CheckRow("geodesic regime p_L drift",
                         float(np.max(np.abs(traj.mu[:, 0] - 0.5))), 1e-12))
    return rows


def masscenter_checks() -> list:
    rows = []
    sphere = make_space(Family.SPHERE, 2, 1.0)
    q = masscenter.CenterQuery(space=sphere, m1=2.0, m2=1.0, rho=math.pi / 2)
    rho1, _ = masscenter.center_r2(q)
    rows.append(CheckRow("sine-law center closed-form case",
                         abs(rho1 - math.atan(0.5)), 1e-10))
    hyp = make_space(Family.REAL_HYPERBOLIC, 2, 1.0)
    qh = masscenter.CenterQuery(space=hyp, m1=1.0, m2=2.0, rho=1.0)
    rho1_eq = masscenter.center_r3(qh)
    y1 = embedded.base_point(hyp, 3)
    v = np.array([0.0, 1.0, 0.0])
    y2 = embedded.geodesic_point(hyp, y1, v, qh.rho)
    xmin = masscenter.upsilon_minimize(hyp, [(y1, qh.m1), (y2, qh.m2)])
    rho1_min = embedded.geodesic_distance(hyp, y1, xmin)
    rows.append(CheckRow("spread minimiser vs double-angle center",
                         abs(rho1_min - rho1_eq), 1e-8))
    for kind, name in (("R3_2lambda", "B"), ("R3_lambda", "E")):
        worst = 0.0
        for space in (sphere, hyp):
            r = 0.5
            params0 = cf.TwoBodyParams(m1=1.0, m2=2.0, alpha=0.5)
            a_star = masscenter.alpha_for_center(space, params0, r, kind)
            params = cf.TwoBodyParams(m1=1.0, m2=2.0, alpha=a_star)
            worst = max(worst, abs(masscenter.cross_coefficient_at_alpha(
                space, params, r, kind)))
        rows.append(CheckRow(f"cross coefficient {name} at alpha root", worst, 1e-10))
    # flat limit: rho1 approaches the ratio point like R^-2
    rho, m1, m2 = 0.9, 2.0, 1.0
    flat = rho * m2 / (m1 + m2)
    for fam in (Family.SPHERE, Family.REAL_HYPERBOLIC):
        errs = []
        for R in (10.0, 100.0, 1000.0):
            sp = make_space(fam, 2, R)
            qq = masscenter.CenterQuery(space=sp, m1=m1, m2=m2, rho=rho)
            r2_val, _ = masscenter.center_r2(qq)
            errs.append(abs(r2_val - flat))
        order = math.log10(errs[0] / errs[1])
        rows.append(CheckRow(f"flat-limit order ({fam.value}) off 2",
                             abs(order - 2.0), 0.1))
    return rows


SCOPES = ("algebra", "coeffs", "dynamics", "masscenter")


def run_scope(scope: str, inject_fault: bool = False,
              backend: str = "auto") -> tuple[list, list]:
    """Returns (rows, extra report lines)."""
    rows, extra = [], []
    if scope in ("algebra", "all"):
        rows += algebra_checks(inject_fault=inject_fault)
    if scope in ("coeffs", "all"):
        rows += coeffs_checks()
        extra += discrepancy_report()
    if scope in ("dynamics", "all"):
        rows += dynamics_checks(backend=backend)
    if scope in ("masscenter", "all"):
        rows += masscenter_checks()
    if not rows:
        raise ValueError(f"unknown scope {scope!r}; use one of "
                         f"{SCOPES + ('all',)}")
    return rows, extra
