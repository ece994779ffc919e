"""Two-body problem on rank-one homogeneous spaces.

Builds the adapted frame of the isometry algebra, evaluates the closed-form
radial coefficients of the reduced Hamiltonian, integrates the mixed
canonical / Lie-Poisson dynamics, and computes the mass-center variants.
"""

from .algebra import (AdaptedBasis, MatrixAlgebra, build_adapted_basis,
                      realize_algebra, verify_adapted_relations)
from .coefficients import (ContinuationImage, GammaBlocks, InverseCoeffs,
                           Potential, TwoBodyParams, coeff_derivatives,
                           continuation_image, gamma_blocks, gamma_det_closed,
                           inverse_coeffs, measure_density, radial_operator)
from .dynamics import (HAVE_COMPILED, PhaseState, Trajectory, casimir,
                       flow_field, geodesic_regime_residual, hamiltonian,
                       integrate)
from .embedded import killing_products_along_geodesic
from .errors import (BoundaryReached, DegenerateBlock, DegenerateCenter,
                     EigenstructureMismatch, NoBracket, NonConvergence,
                     NonFiniteState, TwoBodyError, UnrealizableFamily,
                     UnsupportedModel)
from .masscenter import (CenterQuery, alpha_for_center, center_r1, center_r2,
                         center_r3, upsilon, upsilon_minimize)
from .spaces import (Family, SpaceSpec, distance_from_r, hyperbolic_partner,
                     make_space, multiplicities, r_from_distance)

__version__ = "0.1.0"
