"""Tolerance settings shared by the property suites and recorded in every report."""

from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class Tolerances:
    bayes: float = 1e-10
    associativity: float = 1e-12
    transpose: float = 1e-9
    defining_relation: float = 1e-10
    involution: float = 1e-12
    adjoint: float = 1e-9
    gram_psd_factor: float = 1e-9
    left_ideal: float = 1e-8
    representation: float = 1e-9
    cstar: float = 1e-6
    cauchy_schwarz: float = 1e-10
    born: float = 1e-8
    roundtrip: float = 1e-10

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_TOLERANCES = Tolerances()
