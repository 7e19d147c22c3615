"""Exact arithmetic for principal polarizations on E^2, E a CM elliptic curve.

Polarization classes, the Gross lattice, the sieve for primes of potentially
decomposable reduction, quaternion orders and optimal embeddings, Gross-Keating
invariants, intersection multiplicities and the closed formula for the
discriminant of the corresponding genus 2 curves.
"""

from .arith import kronecker, make_order, splitting_type
from .closed_formula import evaluate_closed_formula
from .endo import HermitianForm, gross_lattice, polarization
from .intersection import intersection_multiplicity, pdr_report
from .polarizations import enumerate_polarizations

__version__ = "0.1.0"

__all__ = [
    "HermitianForm",
    "enumerate_polarizations",
    "evaluate_closed_formula",
    "gross_lattice",
    "intersection_multiplicity",
    "kronecker",
    "make_order",
    "pdr_report",
    "polarization",
    "splitting_type",
]
