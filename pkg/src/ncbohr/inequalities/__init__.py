"""Verifiers for Bohr, Wiener and Fejer type inequalities on Fock-space sections."""

from .bohr import (
    bohr_majorant,
    bohr_polynomial_check,
    boh2_check,
    classical_bohr_check,
    disc_re_equiv_check,
    dominance_witness,
    fejer_bound_check,
    harmonic_check,
    mobius_majorant,
    mobius_series,
    mobius_truncation_degree,
    trig_dominance_check,
)
from .harmonic import harmonic_compare
from .hypotheses import (
    Certificate,
    check_dominance,
    check_norm_leq_1,
    check_positive,
    check_re_leq_I,
    establish_re_leq_I,
    validate_certificate,
)
from .operator import (
    MultiToeplitzSection,
    bohr_gen_checks,
    joint_radius_bohr_check,
    multi_toeplitz_section,
    oper_gen_checks,
    pk_positivity,
    posi_equivalence_check,
    tensor_bound_check,
)
from .report import (
    CERTIFIED,
    SECTION_POSITIVE,
    VIOLATED,
    HypothesisCheck,
    Margin,
    VerificationReport,
)

__all__ = [
    "CERTIFIED",
    "SECTION_POSITIVE",
    "VIOLATED",
    "Certificate",
    "HypothesisCheck",
    "Margin",
    "MultiToeplitzSection",
    "VerificationReport",
    "bohr_gen_checks",
    "bohr_majorant",
    "bohr_polynomial_check",
    "boh2_check",
    "check_dominance",
    "check_norm_leq_1",
    "check_positive",
    "check_re_leq_I",
    "classical_bohr_check",
    "disc_re_equiv_check",
    "dominance_witness",
    "establish_re_leq_I",
    "fejer_bound_check",
    "harmonic_check",
    "harmonic_compare",
    "joint_radius_bohr_check",
    "mobius_majorant",
    "mobius_series",
    "mobius_truncation_degree",
    "multi_toeplitz_section",
    "oper_gen_checks",
    "pk_positivity",
    "posi_equivalence_check",
    "tensor_bound_check",
    "trig_dominance_check",
    "validate_certificate",
]
