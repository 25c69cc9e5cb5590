"""Central numeric tolerances.

Every module draws its thresholds from the single record below instead of
sprinkling literals: STRUCTURAL guards object-level invariants (eigenpair
residuals, unitarity, norm preservation across circuit steps), ARITHMETIC
guards pointwise identities between two ways of computing the same number.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    structural: float = 1e-10
    arithmetic: float = 1e-12
    # post-selection probabilities below this are treated as empty projections
    probability_floor: float = 1e-14
    # two independent evaluation routes of one inner product must agree this well
    cross_route: float = 1e-8


TOL = Tolerances()
