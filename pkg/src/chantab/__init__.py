"""Stabilizer tableaux for Clifford channels."""

from __future__ import annotations

from .circuit import Circuit, CircuitError, parse
from .diagram import ChannelAccumulate, Explicit, GreedyMinWidth, Sequential
from .pauli import PauliObservable, PhasePoint
from .simulate import DyadicProb, strong_prob, weak_sample
from .tableau import ChannelTableau, InfeasibleError, TableauError, canonicalize, compose, contract

__all__ = [
    "ChannelAccumulate",
    "ChannelTableau",
    "Circuit",
    "CircuitError",
    "DyadicProb",
    "Explicit",
    "GreedyMinWidth",
    "InfeasibleError",
    "PauliObservable",
    "PhasePoint",
    "Sequential",
    "TableauError",
    "canonicalize",
    "compose",
    "contract",
    "parse",
    "strong_prob",
    "weak_sample",
]
