"""Skew-orthogonal polynomials of symplectic type (beta = 4).

Construction of the monic skew-orthogonal system for a polynomial potential,
verification of the associated even/odd matrix factorization problems, the
pre-kernel with its Christoffel-Darboux style evaluation, and the Toda-type
dynamical system satisfied by the expansion coefficients.
"""

from .errors import (ConditioningFailure, ConfigInvalid, DenominatorVanishing,
                     IoFailure, NoConvergence, NotInImage, NotSkewSymmetric,
                     OddDimension, OutOfRange, PointNearIntersection,
                     PointOnContour, SingularMatrix, SkewrhError,
                     ToleranceExceeded)
from .linalg import Precision, pfaffian, solve
from .poly import ONE, Poly, Potential, X, dual_map, undual
from .quadrature import (Contour, QuadConfig, cauchy_transform, circle_moment,
                         gamma_integral, real_moment)
from .orthopoly import OrthogonalBasis, build_basis, hermite_monic
from .skewcore import (RecurrenceLadder, SkewSystem, beta, build_ladder,
                       build_skew_system, count_sign_changes, debruijn_check,
                       get_system, skew_product)
from .rhp import (ExpansionData, RhpMatrix, assemble_even, assemble_even_dual,
                  assemble_odd, expansion, jump_residual, recurrence_factor,
                  recurrence_residual, symmetry_residual)
from .kernel import (KernelEval, density_table, evaluate, prekernel_cd,
                     prekernel_direct)
from .toda import (TodaState, constraint_checks, exact_d2_state, ode_residuals,
                   toda_state)

__version__ = "0.1.0"
