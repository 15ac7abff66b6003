"""Central tolerance knobs shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    abs_floor: float = 1e-12
    hermitian: float = 1e-12
    symmetry: float = 1e-12
    sqrt_residual: float = 1e-10
    boundary_margin: float = 1e-8
    sample_margin: float = 1e-6
    phi_margin: float = 1e-9
    phi_grid: int = 2001
    fd_step: float = 1e-4


DEFAULT = Tolerances()
