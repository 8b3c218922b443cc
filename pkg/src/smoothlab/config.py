"""Run configuration shared by the verification harness and the CLI."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import ConfigError
from .grid import Region
from .norms import TQuadrature, TranslationLattice

DEFAULT_BUDGETS = {
    "T31": 50.0, "T32": 50.0, "T33": 80.0, "T34": 80.0,
    "P21": 10.0, "P22": 10.0, "P23": 10.0,
}


@dataclass(frozen=True)
class RunConfig:
    """Grid, quadrature, lattice and harness settings for one run.

    The defaults keep every length a dyadic multiple of dx, so region
    snapping is exact and lattice regions all hold the same sample count.
    """

    dx: float = 2.0 ** -12
    half_width: float = 8.0          # samples cover [-L, L]
    ball_radius: float = 1.0
    # quadrature for norm computations inside the harness
    t_max: float = 0.25
    levels_per_octave: int = 4
    depth: int = 8
    # translation lattice (shared by both sides of each equivalence)
    lattice_step: float = 0.125
    lattice_halfspan: float = 2.0
    # coarser sweep for the wide plateau window (support is 5 ball radii)
    phi1_step: float = 1.0
    budgets: dict = field(default_factory=lambda: dict(DEFAULT_BUDGETS))
    seed: int = 0
    manifest: str | None = None
    out_dir: str = "reports"
    out_format: str = "jsonl"        # "jsonl" or "csv" (csv adds files)

    def __post_init__(self):
        if not self.dx > 0:
            raise ConfigError("dx must be positive")
        if self.half_width < 2 * self.ball_radius + 2:
            raise ConfigError(
                "half_width too small: the doubled ball plus a unit margin "
                "must fit inside the sampled range")
        tq = TQuadrature(self.t_max, self.levels_per_octave, self.depth)
        if tq.t_min < self.dx * (1 - 1e-9):
            raise ConfigError(
                f"quadrature t_min={tq.t_min:.3g} is below dx={self.dx:.3g}; "
                "scales under the grid spacing are degenerate")
        for name, v in (("lattice_step", self.lattice_step),
                        ("phi1_step", self.phi1_step),
                        ("ball_radius", self.ball_radius)):
            r = v / self.dx
            if abs(r - round(r)) > 1e-9:
                raise ConfigError(
                    f"{name}={v} is not an integer multiple of dx={self.dx}")
        if self.out_format not in ("jsonl", "csv"):
            raise ConfigError(f"unknown output format {self.out_format!r}")

    # -- derived objects -----------------------------------------------------

    def ball(self) -> Region:
        return Region(0.0, self.ball_radius)

    def quadrature(self) -> TQuadrature:
        return TQuadrature(self.t_max, self.levels_per_octave, self.depth)

    def lattice(self) -> TranslationLattice:
        return TranslationLattice(-self.lattice_halfspan,
                                  self.lattice_halfspan, self.lattice_step)

    def phi1_lattice(self) -> TranslationLattice:
        return TranslationLattice(-self.lattice_halfspan,
                                  self.lattice_halfspan, self.phi1_step)

    def unit_quadrature(self) -> TQuadrature:
        """Quadrature reaching t_max = 1 (monotone-sequence and Marchaud
        suites integrate over (0, 1])."""
        extra = int(math.ceil(math.log2(1.0 / self.t_max) - 1e-9))
        return TQuadrature(1.0, self.levels_per_octave, self.depth + extra)

    def with_halved_lattice(self) -> "RunConfig":
        return replace(self, lattice_step=self.lattice_step / 2)

    def with_halved_dx(self) -> "RunConfig":
        return replace(self, dx=self.dx / 2)
