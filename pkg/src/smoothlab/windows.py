"""Smooth compactly supported multiplier windows and windowed norms.

A localized-uniform norm multiplies the function by a translated bump and
takes the worst translation.  Two presets follow the region conventions of
the ball-intrinsic characterizations: a narrow bump supported on a quarter
of the reference ball ("phi0") and a plateau window identically one on four
times the ball ("phi1", support chosen one ball-radius wider).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, LatticeError
from .grid import GridFunction, GridOffset, Region, _SNAP, multiply, translate
from .norms import NormFunctional, TranslationLattice


@dataclass(frozen=True)
class BumpWindow:
    """An even, smooth window: 1 on the plateau, 0 outside the support."""

    inner_radius: float
    outer_radius: float
    center: float
    samples: GridFunction

    @property
    def support(self) -> Region:
        return Region(self.center, self.outer_radius)


def _bump_profile(u: np.ndarray) -> np.ndarray:
    """exp(1 - 1/(1-u^2)) inside |u| < 1, zero outside; peak value 1."""
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - ui * ui))
    return out


def _smoothstep_down(v: np.ndarray) -> np.ndarray:
    """C-infinity transition 1 -> 0 on [0, 1] from the exp(-1/v) family."""
    def b(x):
        out = np.zeros_like(x)
        pos = x > 0
        out[pos] = np.exp(-1.0 / x[pos])
        return out
    num = b(1.0 - v)
    return num / (num + b(v))


def make_window(preset: str, ball: Region, like: GridFunction,
                inner_radius: float | None = None,
                outer_radius: float | None = None) -> BumpWindow:
    """Build a window on the grid of ``like``, centered on ``ball``.

    preset "phi0": classic bump supported on a quarter of the ball.
    preset "phi1": plateau equal to 1 on four ball radii, support five.
    preset "custom": radii given explicitly (inner may be 0).
    """
    if preset == "phi0":
        inner, outer = 0.0, ball.radius / 4.0
    elif preset == "phi1":
        inner, outer = 4.0 * ball.radius, 5.0 * ball.radius
    elif preset == "custom":
        if outer_radius is None:
            raise ConfigError("custom window needs outer_radius")
        inner = 0.0 if inner_radius is None else float(inner_radius)
        outer = float(outer_radius)
        if not inner < outer:
            raise ConfigError("custom window needs inner_radius < outer_radius")
    else:
        raise ConfigError(f"unknown window preset {preset!r}")

    c = ball.center
    if c - outer < like.x_min - _SNAP or c + outer > like.x_max + _SNAP:
        raise ConfigError(
            f"window support [{c - outer:.6g}, {c + outer:.6g}] exceeds the "
            f"sampled range [{like.x_min:.6g}, {like.x_max:.6g}]")

    xs = like.sample_points()
    r = np.abs(xs - c)
    if inner == 0.0:
        vals = _bump_profile(r / outer)
    else:
        vals = np.zeros_like(r)
        vals[r <= inner] = 1.0
        collar = (r > inner) & (r < outer)
        vals[collar] = _smoothstep_down((r[collar] - inner) / (outer - inner))
    gf = GridFunction(like.spacing, like.origin, vals,
                      like.x_min, like.x_max, smooth=True)
    return BumpWindow(inner, outer, c, gf)


def _lattice_steps(f: GridFunction, lat: TranslationLattice) -> list[int]:
    steps = []
    for a in lat.offsets():
        r = a / f.spacing
        k = round(r)
        if abs(r - k) > _SNAP * max(1.0, abs(r)):
            raise LatticeError(
                f"lattice offset {a} is not an integer number of grid steps")
        steps.append(int(k))
    return steps


def windowed_lu_norm(f: GridFunction, w: BumpWindow, base: NormFunctional,
                     lat: TranslationLattice) -> float:
    """Max over lattice translations of base((translated window) * f).

    The base norm is evaluated over the translated support; the support
    enlarged by the base's difference margin must stay inside the valid
    domain of f for every lattice position.
    """
    if f.spacing != w.samples.spacing or f.origin != w.samples.origin \
            or f.count != w.samples.count:
        raise ConfigError("window was sampled on a different grid")
    best = 0.0
    margin = base.required_margin(f.spacing)
    for a, k in zip(lat.offsets(), _lattice_steps(f, lat)):
        support = w.support.shifted(a)
        f.region_index_range(support, margin=margin,
                             what=f"windowed norm margin ({base.name})")
        g = multiply(translate(w.samples, GridOffset(k)), f)
        val = base(g, support)
        if val > best:
            best = val
    return best


def window_independence_ratio(f: GridFunction, w1: BumpWindow,
                              w2: BumpWindow, base: NormFunctional,
                              lat: TranslationLattice) -> float:
    """Ratio of the windowed norms taken with two different windows.

    Membership in a localized-uniform space does not depend on the window,
    so this ratio stays within window-dependent bounds uniformly over f.
    Returns 1 when both norms vanish (the 0/0 convention for f = 0).
    """
    num = windowed_lu_norm(f, w1, base, lat)
    den = windowed_lu_norm(f, w2, base, lat)
    if den == 0.0:
        if num == 0.0:
            return 1.0
        raise ConfigError("windowed norm vanished for one window only")
    return num / den
