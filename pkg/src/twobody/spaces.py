"""Catalog of rank-one two-point homogeneous spaces.

Each family is identified by its pair of root multiplicities (q1, q2), the
curvature radius R and the radial coordinate interval used by the reduced
two-body problem:

    family                          q1      q2      interval
    --------------------------------------------------------
    Sphere, RealProjective          0       n-1     (0, inf) / (0, 1)
    ComplexProjective/Hyperbolic    2n-2    1
    QuaternionProjective/Hyperb.    4n-4    3
    CayleyProjective/Hyperbolic     8       7       (n = 2 only)

All compact families except RealProjective use r in (0, inf); RealProjective
and every hyperbolic family use r in (0, 1).  The geodesic separation p of
the two particles is p = 2R*arctan(r) (compact) or p = 2R*artanh(r)
(hyperbolic).  The flat Euclidean space is deliberately not representable.
"""

import enum
import math
from dataclasses import dataclass


class Family(enum.Enum):
    SPHERE = "Sphere"
    REAL_PROJECTIVE = "RealProjective"
    COMPLEX_PROJECTIVE = "ComplexProjective"
    QUATERNION_PROJECTIVE = "QuaternionProjective"
    CAYLEY_PROJECTIVE = "CayleyProjective"
    REAL_HYPERBOLIC = "RealHyperbolic"
    COMPLEX_HYPERBOLIC = "ComplexHyperbolic"
    QUATERNION_HYPERBOLIC = "QuaternionHyperbolic"
    CAYLEY_HYPERBOLIC = "CayleyHyperbolic"

    @classmethod
    def parse(cls, name: str) -> "Family":
        for fam in cls:
            if fam.value.lower() == name.strip().lower():
                return fam
        raise ValueError(f"unknown space family {name!r}; "
                         f"choose one of {[f.value for f in cls]}")


COMPACT_FAMILIES = frozenset({
    Family.SPHERE, Family.REAL_PROJECTIVE, Family.COMPLEX_PROJECTIVE,
    Family.QUATERNION_PROJECTIVE, Family.CAYLEY_PROJECTIVE,
})

_HYPERBOLIC_PARTNER = {
    Family.SPHERE: Family.REAL_HYPERBOLIC,
    Family.REAL_PROJECTIVE: Family.REAL_HYPERBOLIC,
    Family.COMPLEX_PROJECTIVE: Family.COMPLEX_HYPERBOLIC,
    Family.QUATERNION_PROJECTIVE: Family.QUATERNION_HYPERBOLIC,
    Family.CAYLEY_PROJECTIVE: Family.CAYLEY_HYPERBOLIC,
}


def multiplicities(family: Family, n: int) -> tuple[int, int]:
    """Root multiplicities (q1, q2) of a family at dimension parameter n."""
    if family in (Family.SPHERE, Family.REAL_PROJECTIVE, Family.REAL_HYPERBOLIC):
        return 0, n - 1
    if family in (Family.COMPLEX_PROJECTIVE, Family.COMPLEX_HYPERBOLIC):
        return 2 * n - 2, 1
    if family in (Family.QUATERNION_PROJECTIVE, Family.QUATERNION_HYPERBOLIC):
        return 4 * n - 4, 3
    return 8, 7


@dataclass(frozen=True)
class SpaceSpec:
    """Immutable description of one space; shareable across threads."""

    family: Family
    n: int
    R: float
    q1: int
    q2: int
    compact: bool
    r_interval: tuple[float, float]

    @property
    def sigma(self) -> int:
        """Curvature sign convention: +1 compact, -1 hyperbolic."""
        return 1 if self.compact else -1

    @property
    def diameter(self) -> float:
        """Maximal distance between two points (inf for hyperbolic spaces)."""
        if not self.compact:
            return math.inf
        if self.family is Family.REAL_PROJECTIVE:
            return math.pi * self.R / 2.0
        return math.pi * self.R


_CAYLEY = (Family.CAYLEY_PROJECTIVE, Family.CAYLEY_HYPERBOLIC)


def make_space(family: Family, n: int, R: float) -> SpaceSpec:
    """Build a validated SpaceSpec.

    n is the projective/hyperbolic dimension over the base field (real
    dimension for spheres); Cayley planes exist only for n = 2.
    """
    if isinstance(family, str):
        family = Family.parse(family)
    if not R > 0:
        raise ValueError(f"curvature radius must be positive, got {R}")
    if family in _CAYLEY:
        if n != 2:
            raise ValueError(f"{family.value} exists only for n = 2, got n = {n}")
    elif n < 2:
        raise ValueError(f"{family.value} requires n >= 2, got n = {n}")
    q1, q2 = multiplicities(family, n)
    compact = family in COMPACT_FAMILIES
    if compact and family is not Family.REAL_PROJECTIVE:
        r_interval = (0.0, math.inf)
    else:
        r_interval = (0.0, 1.0)
    return SpaceSpec(family=family, n=n, R=float(R), q1=q1, q2=q2,
                     compact=compact, r_interval=r_interval)


def hyperbolic_partner(space: SpaceSpec) -> SpaceSpec:
    """Hyperbolic space with the same multiplicities and radius."""
    if not space.compact:
        return space
    return make_space(_HYPERBOLIC_PARTNER[space.family], space.n, space.R)


def check_r(space: SpaceSpec, r: float) -> float:
    lo, hi = space.r_interval
    if not (lo < r < hi):
        raise ValueError(f"r = {r} outside radial interval ({lo}, {hi}) "
                         f"of {space.family.value}")
    return float(r)


def distance_from_r(space: SpaceSpec, r: float) -> float:
    """Geodesic separation p of the two particles at radial coordinate r."""
    check_r(space, r)
    if space.compact:
        return 2.0 * space.R * math.atan(r)
    return 2.0 * space.R * math.atanh(r)


def r_from_distance(space: SpaceSpec, p: float) -> float:
    """Inverse of distance_from_r."""
    if not p > 0:
        raise ValueError(f"separation must be positive, got {p}")
    if space.compact:
        if p >= math.pi * space.R:
            raise ValueError(f"separation {p} >= pi*R = {math.pi * space.R}")
        r = math.tan(p / (2.0 * space.R))
    else:
        r = math.tanh(p / (2.0 * space.R))
    return check_r(space, r)


def catalog_rows() -> list[dict]:
    """One row per family: symbolic multiplicities and radial interval."""
    rows = []
    for fam in Family:
        if fam in (Family.SPHERE, Family.REAL_PROJECTIVE, Family.REAL_HYPERBOLIC):
            q1s, q2s = "0", "n-1"
        elif fam in (Family.COMPLEX_PROJECTIVE, Family.COMPLEX_HYPERBOLIC):
            q1s, q2s = "2n-2", "1"
        elif fam in (Family.QUATERNION_PROJECTIVE, Family.QUATERNION_HYPERBOLIC):
            q1s, q2s = "4n-4", "3"
        else:
            q1s, q2s = "8", "7"
        compact = fam in COMPACT_FAMILIES
        if compact and fam is not Family.REAL_PROJECTIVE:
            interval = "(0, inf)"
        else:
            interval = "(0, 1)"
        n_range = "n=2" if fam in _CAYLEY else "n>=2"
        rows.append({"family": fam.value, "n": n_range, "q1": q1s, "q2": q2s,
                     "compact": compact, "r_interval": interval})
    return rows
