"""Thomason filtrations, compactly generated t-structures and their truncations on desk-sized rings."""
from .errors import ParseError, ThomasonError
from .field import Field
from .poset import (PrimePoint, SpectrumPoset, ThomasonFiltration, Verdict, VerdictKind, classify,
                    enumerate_filtrations, weak_cousin_check)
from .rings import RingModel
from .modules import GradedModule
from .complexes import ChainComplex, GradedComplex, koszul
from .engine import (QuotientModule, composite_truncation_check, koszul_generators, mu_filtration_from_membership,
                     obstruction_pipeline, perfectness_probe, summand_dimension_check, tilt_relation_check,
                     truncate)

__version__ = "0.1.0"

__all__ = [
    "ChainComplex", "Field", "GradedComplex", "GradedModule", "ParseError", "PrimePoint", "QuotientModule",
    "RingModel", "SpectrumPoset", "ThomasonError", "ThomasonFiltration", "Verdict", "VerdictKind", "classify",
    "composite_truncation_check", "enumerate_filtrations", "koszul", "koszul_generators",
    "mu_filtration_from_membership", "obstruction_pipeline", "perfectness_probe", "summand_dimension_check",
    "tilt_relation_check", "truncate", "weak_cousin_check",
]
