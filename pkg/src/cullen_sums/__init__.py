"""Rigorous bounds, lattice reduction and exhaustive search for sums of
linear-recurrence terms equal to ``ell * x**ell + Q(x)``."""

from .recurrence import COUNTEREXAMPLE, FIBONACCI, RecurrenceSpec, eval_terms

__all__ = ["COUNTEREXAMPLE", "FIBONACCI", "RecurrenceSpec", "eval_terms"]
__version__ = "0.1.0"
