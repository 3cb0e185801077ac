"""Counting and exact measure computations for Diophantine approximation
of matrices over the field of formal Laurent series F_k((1/X))."""

from .algebra import FieldElem, FieldSpec, Poly, field_inv, monic_divisor_count, poly_abs, poly_gcd
from .approx import Psi, bq_member, count_solutions, floor_to_V, parse_psi, psi_eval
from .counting import EXACT, PAPER, CountVariant, big_T, count_height, d_of, iter_vectors, phi, tau
from .experiment import RunConfig, RunRecord, residual_stats, run, sample_matrix
from .laurent import (BelowPrecision, Exact, Frac, FracMatrix, frac_abs, inf_norm_frac,
                      inf_norm_polyvec, poly_frac_mul, qa_fracpart)
from .measure import expected_N, lin_indep, measure_bq, measure_pair, verify_prop1, verify_prop2
from .rng import SplitMix64

__version__ = "0.1.0"
