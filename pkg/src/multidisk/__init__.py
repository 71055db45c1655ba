"""Realizations, operator classes and Bohr-radius certificates for intersections of disks."""

from .domain import (DomainComponent, DomainSpec, MobiusMap, annulus, boundary_samples,
                     check_domain, contains, disk, empty_probe, eval_pencil, gamma_values,
                     halfplane, hole, mobius_gamma, validate_domain)
from .errors import (ConvergenceError, DomainError, MultidiskError, NumericError, PoleError,
                     PreconditionError, SingularMatrixError)
from .linalg import (hermitian_eigen, inverse, polar_decompose, power_iteration_norm,
                     solve_linear, spectral_norm)
from .ratfun import (LiftedFunction, MatRatFun1, RatFun1, eval_lifted, lift_to_polydisk,
                     partial_fractions_grouped, ratfun_eval_at_matrix)
from .series import (Circle, LaurentPoly, MultiPoly, Torus, fejer_means, laurent_coeffs_of_realization,
                     laurent_eval, sup_norm_boundary, taylor_coeffs_ratio2)
from .realize import (Colligation, OperatorArgument, defect_identity_residual,
                      eval_realization_operator, eval_realization_scalar, gain_bound_check,
                      mobius_colligation, random_colligation, transfer_apply, validate_colligation)
from .agler import (agler_lower_bound, in_class, perturb_interior, psi_cb_bound,
                    quotient_upper_bound, random_class_member, witness_kl)
from .bohr import (banach_chain_check, k1k2_pushforward, k2_certificate, k2_improve,
                   l1hat_annulus, l1hat_polydisk)

__version__ = "0.1.0"
