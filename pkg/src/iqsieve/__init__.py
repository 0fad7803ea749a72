"""Large-sieve verification laboratory over imaginary quadratic number fields.

Exact ring arithmetic, rational character phases, constructive Dirichlet
approximation, fraction families with matrix-free spectral sweeps, the
closed-form sieve bounds, and the Schwartz-weight Poisson/Fourier machinery,
plus a deterministic experiment CLI.
"""

from .qfield import (FieldParams, OKElt, OmegaCase, HEEGNER_D, make_field,
                     norm_trace, enumerate_by_norm, exact_div, canonical_key)
from .character import QPhase, phase, eval_character, eval_character_complex_oracle, char_value
from .residue import (ResidueSystem, residue_system, reduce, is_coprime, totient,
                      coprime_residues, divisors, primes_up_to_norm)
from .approx import Approximation, dirichlet_approx, best_approx_oracle, nearest_lattice_point
from .sieve import (Fraction, FractionFamily, CoeffSeq, SieveReport, GramOperator,
                    LambdaResult, build_fractions, embed_fraction, embed_fraction_exact,
                    quadratic_form, apply_gram, lambda_max, power_lambda_max,
                    torus_spacing_count, torus_k0, torus_gram_matrix, torus_lambda_max)
from .bounds import (ModuliSet, BoundParams, rhs_bound, make_S_t, count_A_t,
                     theorem2_rhs, verify_X, count_fractions_near)
from .analytic import (WeightSpec, psi1, psi2, fourier_numeric_oracle, w_tilde,
                       poisson_identity_check, poisson_scaled_check,
                       gaussian_transform_constant, alpha_combination, g_weight,
                       g_fourier_analytic, weyl_sum, weyl_sum_differenced)

__version__ = "0.1.0"
