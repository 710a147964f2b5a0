"""cmolab: a laboratory for completely multiplicative functions of zero sum.

A completely multiplicative f with f(1) = 1 is determined by its values at
the primes; this package sieves such sequences from prime-value rules,
evaluates their Dirichlet series, Euler products and L-functions, locates
L-function zeros to mint twisted-character examples, runs the zero-sum
criteria for small functions f(n)/n, and verifies the Möbius-inversion
asymptotics tying sum f(n)/n to sum (f*1)(n).
"""

from .backend import BACKEND
from .specs import (MODE_CM, MODE_PP, InvalidSpecError, PrimeValueSpec,
                    parse_spec)
from .arith import (CMSequence, MultSequence, PrimeTable, SumReport,
                    build_cm_sequence, build_mult_sequence, delta_one,
                    dirichlet_convolve, load_sequence, mobius_sequence,
                    ones_sequence, partial_sums, power_weighted_sums,
                    save_sequence, sieve_primes, twisted_mobius_sum)
from .characters import (DirichletCharacter, char_value, character,
                         enumerate_characters, euler_phi, is_principal)
from .analytic import (AbelScanRow, BoundarySeriesModel, DomainError,
                       PoleError, QuadratureError, TailBoundError,
                       WindowParams, abel_limit_scan, dirichlet_series_partial,
                       euler_product, hurwitz_zeta, l_function, window_sum,
                       window_weight, zeta, zeta_line)
from .zerofinder import (BoundaryZeroError, SearchRectangle, ZeroRecord,
                         cmo_from_zero, count_zeros_rectangle, locate_zeros)
from .criteria import (CriterionReport, InvalidPerturbationError, TauGrid,
                       bounds_diagnostics, build_perturbation,
                       compare_perturbation, deviation_density,
                       deviation_integral, deviation_integral_report,
                       negative_real_sum, real_part_sum, rotated_sum)
from .inversion import (InversionModel, ResidualReport, estimate_L,
                        hyperbola_F, verify_harmonic_inversion,
                        verify_plain_inversion)

__version__ = "0.1.0"
