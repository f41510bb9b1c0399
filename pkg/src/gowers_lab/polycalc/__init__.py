"""Discrete-derivative calculus on finite abelian groups."""
from .binomial import binom_valuation, d_mr, valuation, verify_alg_lemma
from .calculus import (DegreeResult, action_derivative, default_cutoff, degree,
                       degree_all_shifts, degree_generator_sufficiency_check, derivative,
                       generator_perms)
from .phases import PolynomialPhase, eval_phase, format_phase, monomial_values, monomials, parse_phase
from .residue import IntPolynomial, product_degree_check, residue_degree_bound, verify_residue_degree

__all__ = [
    "DegreeResult", "IntPolynomial", "PolynomialPhase", "action_derivative", "binom_valuation",
    "d_mr", "default_cutoff", "degree", "degree_all_shifts", "degree_generator_sufficiency_check",
    "derivative", "eval_phase", "format_phase", "generator_perms", "monomial_values", "monomials",
    "parse_phase", "product_degree_check", "residue_degree_bound", "valuation", "verify_alg_lemma",
    "verify_residue_degree",
]
