"""Region norms, moduli of smoothness, Besov / Lizorkin-Triebel functionals.

Conventions shared by every operation here:

* Integrals over a region are simple Riemann sums (sample value times dx)
  with the region endpoints snapped *outward* to grid points; the same
  snapping is applied on both sides of every comparison, so it never
  biases a ratio.
* ``p = inf`` and ``q = inf`` are first class: every power mean degrades
  to a maximum, never to a large finite exponent.
* Suprema over offsets |h| <= t range over the integer grid offsets with
  |k| * dx <= t; scales below dx are degenerate (the modulus would be
  spuriously zero) and are rejected by the scale grid.
* Suprema over translations a range over a finite lattice.

All reductions are sequential and deterministic for fixed inputs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _sweeps
from .errors import (ConfigError, DegenerateScaleWarning, DomainMarginError,
                     LatticeError, SmoothnessTagError)
from .grid import GridFunction, Region, _SNAP

INF = float("inf")

BESOV = "besov"
LIZORKIN_TRIEBEL = "lizorkin-triebel"


@dataclass(frozen=True)
class SmoothnessParams:
    """Smoothness order s and integrability exponents (p, q) of a space."""

    s: float
    p: float
    q: float
    family: str = BESOV

    def __post_init__(self):
        if not self.s > 0:
            raise ConfigError(f"s must be positive, got {self.s}")
        for name, v in (("p", self.p), ("q", self.q)):
            if not (v >= 1):
                raise ConfigError(f"{name} must lie in [1, inf], got {v}")
        if self.family not in (BESOV, LIZORKIN_TRIEBEL):
            raise ConfigError(f"unknown family {self.family!r}")
        if self.family == LIZORKIN_TRIEBEL and np.isinf(self.p):
            raise ConfigError("the Lizorkin-Triebel family requires p < inf")

    @property
    def sobolev_order(self) -> int:
        """Integer m with m < s <= m + 1 (0 when s <= 1)."""
        return max(0, int(math.ceil(self.s)) - 1)


@dataclass(frozen=True)
class TQuadrature:
    """Geometric scale grid with weights for integrals against dt/t.

    Scales are t_max * 2^(-j/m) for j = 0 .. depth*m.  Because dt/t is the
    uniform measure in log t, the trapezoid rule on the log axis is exact
    up to O((ln 2 / m)^2) curvature terms: interior weights ln(2)/m, the
    two boundary scales half of that.
    """

    t_max: float = 1.0
    levels_per_octave: int = 4
    depth: int = 10

    def __post_init__(self):
        if not self.t_max > 0:
            raise ConfigError("t_max must be positive")
        if self.levels_per_octave < 1 or self.depth < 1:
            raise ConfigError("levels_per_octave and depth must be >= 1")

    @property
    def scales(self) -> np.ndarray:
        m, levels = self.levels_per_octave, self.levels_per_octave * self.depth
        return self.t_max * 2.0 ** (-np.arange(levels + 1) / m)

    @property
    def weights(self) -> np.ndarray:
        m, levels = self.levels_per_octave, self.levels_per_octave * self.depth
        w = np.full(levels + 1, math.log(2.0) / m)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w

    @property
    def t_min(self) -> float:
        return self.t_max * 2.0 ** (-self.depth)

    def truncated(self, depth: int) -> "TQuadrature":
        """Same grid, fewer octaves (for divergence studies)."""
        return TQuadrature(self.t_max, self.levels_per_octave, depth)

    def offset_caps(self, dx: float) -> np.ndarray:
        """floor(t/dx) per scale; rejects scale grids finer than dx."""
        if self.t_min < dx * (1.0 - 1e-9):
            raise ConfigError(
                f"quadrature reaches t_min={self.t_min:.3g} below the grid "
                f"spacing {dx:.3g}; scales below dx are degenerate")
        return np.floor(self.scales / dx + _SNAP).astype(np.int64)

    def integral(self, integrand: np.ndarray) -> float:
        """Weighted sum approximating the dt/t integral of the integrand."""
        return float(np.sum(self.weights * integrand))


@dataclass(frozen=True)
class TranslationLattice:
    """Finite arithmetic set of window translations a."""

    a_min: float
    a_max: float
    step: float

    def __post_init__(self):
        if not self.step > 0:
            raise ConfigError("lattice step must be positive")
        if self.a_max < self.a_min:
            raise ConfigError("a_max must be >= a_min")

    def offsets(self) -> np.ndarray:
        n = int(math.floor((self.a_max - self.a_min) / self.step + _SNAP)) + 1
        return self.a_min + self.step * np.arange(n)

    def halved(self) -> "TranslationLattice":
        return TranslationLattice(self.a_min, self.a_max, self.step / 2.0)


def _finite_norm(power_sum: float, p: float, dx: float) -> float:
    return float((power_sum * dx) ** (1.0 / p))


def lp_norm(f: GridFunction, p: float, region: Region) -> float:
    """Riemann p-norm of f over the region (sup of |f| when p = inf)."""
    lo_i, hi_i = f.region_index_range(region, what="lp region")
    v = f.values[lo_i:hi_i + 1]
    if np.isinf(p):
        return float(np.max(np.abs(v)))
    return _finite_norm(float(np.sum(np.abs(v) ** p)), p, f.spacing)


def _offset_cap(f: GridFunction, t: float) -> int:
    return int(math.floor(t / f.spacing + _SNAP))


def _sup_over_offsets(f: GridFunction, p: float, region: Region, t: float,
                      order: int, what: str) -> float:
    """Exact sup over grid offsets |k| dx <= t of the difference p-norm."""
    if t < f.spacing * (1.0 - _SNAP):
        warnings.warn(f"{what}: scale {t:.3g} below grid spacing, returning 0",
                      DegenerateScaleWarning, stacklevel=3)
        return 0.0
    cap = _offset_cap(f, t)
    lo_i, hi_i = f.region_index_range(region, margin=order * cap * f.spacing,
                                      what=what)
    v = f.values
    best = 0.0
    for k in range(1, cap + 1):
        for sgn in (1, -1):
            kk = sgn * k
            if order == 1:
                d = v[lo_i + kk:hi_i + 1 + kk] - v[lo_i:hi_i + 1]
            else:
                d = (v[lo_i + 2 * kk:hi_i + 1 + 2 * kk]
                     - 2.0 * v[lo_i + kk:hi_i + 1 + kk]
                     + v[lo_i:hi_i + 1])
            if np.isinf(p):
                cand = float(np.max(np.abs(d)))
            else:
                cand = float(np.sum(np.abs(d) ** p))
            if cand > best:
                best = cand
    if np.isinf(p):
        return best
    return _finite_norm(best, p, f.spacing)


def omega(f: GridFunction, p: float, region: Region, t: float) -> float:
    """First-order modulus of smoothness of f over a region at scale t.

    Sup over offsets |h| <= t (h an integer multiple of dx) of the region
    p-norm of the first difference.  The region enlarged by t must lie in
    the valid domain.
    """
    return _sup_over_offsets(f, p, region, t, 1, "first-order modulus")


def eta(f: GridFunction, p: float, region: Region, t: float) -> float:
    """Second-order modulus of smoothness (margin 2t)."""
    return _sup_over_offsets(f, p, region, t, 2, "second-order modulus")


# -- batched modulus profiles (shared fast path) ----------------------------

def _region_starts(f: GridFunction, regions: list[Region], margin: float,
                   what: str) -> tuple[np.ndarray, int]:
    """Common-width index starts for a family of congruent regions."""
    pairs = [f.region_index_range(r, margin=margin, what=what) for r in regions]
    widths = {hi - lo + 1 for lo, hi in pairs}
    if len(widths) != 1:
        raise LatticeError(
            f"{what}: lattice regions snap to unequal sample counts "
            f"{sorted(widths)}; align the lattice step and region endpoints "
            "with the grid")
    return np.array([lo for lo, _ in pairs], dtype=np.int64), widths.pop()


def modulus_profiles(f: GridFunction, p: float, regions: list[Region],
                     tq: TQuadrature, order: int) -> np.ndarray:
    """Moduli for every region and every quadrature scale in one sweep.

    Returns an (n_regions, n_scales) array aligned with tq.scales.
    """
    ks = tq.offset_caps(f.spacing)
    kmax = int(ks.max())
    starts, width = _region_starts(
        f, regions, order * kmax * f.spacing,
        "modulus profile" if order == 1 else "second-order modulus profile")
    lo = int(starts.min()) - order * kmax
    hi = int(starts.max()) + width - 1 + order * kmax
    return _sweeps.modulus_table(f.values, lo, hi, starts, width, ks, order,
                                 p, f.spacing)


def _power_mean(profile: np.ndarray, tq: TQuadrature, s_exp: float,
                q: float) -> float:
    """(integral of (t^-s_exp * profile)^q dt/t)^(1/q), max when q = inf."""
    weighted = tq.scales ** (-s_exp) * profile
    if np.isinf(q):
        return float(np.max(weighted))
    return tq.integral(weighted ** q) ** (1.0 / q)


def besov_seminorm(f: GridFunction, sp: SmoothnessParams, tq: TQuadrature,
                   region: Region) -> float:
    """Besov smoothness seminorm over a region (0 < s < 1).

    q-mean against dt/t of t^-s times the first-order modulus over the
    region; the plain p-norm term of the full space norm is *not* included.
    """
    _require(sp.family == BESOV, "besov_seminorm needs a Besov parameter set")
    _require(0 < sp.s < 1, f"besov_seminorm needs 0 < s < 1, got s={sp.s}")
    prof = modulus_profiles(f, sp.p, [region], tq, order=1)[0]
    return _power_mean(prof, tq, sp.s, sp.q)


def besov1_seminorm(f: GridFunction, sp: SmoothnessParams, tq: TQuadrature,
                    region: Region) -> float:
    """Order-one Besov seminorm (s = 1): second differences, weight 1/t."""
    _require(sp.family == BESOV, "besov1_seminorm needs a Besov parameter set")
    _require(sp.s == 1, f"besov1_seminorm is the s = 1 case, got s={sp.s}")
    prof = modulus_profiles(f, sp.p, [region], tq, order=2)[0]
    return _power_mean(prof, tq, 1.0, sp.q)


# -- Lizorkin-Triebel quantities --------------------------------------------

def _density_region(f: GridFunction, region: Region, tq: TQuadrature,
                    order: int) -> tuple[np.ndarray, int, int]:
    """Ball-average profiles B(x, t_j) for every grid point of the region."""
    ks = tq.offset_caps(f.spacing)
    kmax = int(ks.max())
    i0, i1 = f.region_index_range(region, margin=order * kmax * f.spacing,
                                  what="pointwise density region")
    lo = i0 - order * kmax
    hi = i1 + order * kmax
    tab = _sweeps.density_table(f.values, lo, hi, i0, i1, ks, order, f.spacing)
    return tab, i0, i1


def _density_combine(tab: np.ndarray, tq: TQuadrature, s_exp: float,
                     q: float) -> np.ndarray:
    weighted = (tq.scales ** (-s_exp))[:, None] * tab
    if np.isinf(q):
        return np.max(weighted, axis=0)
    acc = (weighted ** q) * tq.weights[:, None]
    return np.sum(acc, axis=0) ** (1.0 / q)


def tl_pointwise(f: GridFunction, sp: SmoothnessParams, tq: TQuadrature,
                 x: float, order: int = 1) -> float:
    """Pointwise Lizorkin-Triebel density at a grid point.

    q-mean against dt/t of t^(-s-1) times the ball average over |h| <= t of
    the absolute difference at x (second difference and s = 1 for order 2).
    """
    _validate_tl(sp, order)
    i = f.index_of(x)
    cap = int(tq.offset_caps(f.spacing).max())
    need = order * cap * f.spacing
    if x - need < f.valid_lo - _SNAP or x + need > f.valid_hi + _SNAP:
        raise DomainMarginError(
            f"pointwise density: needs [{x - need:.6g}, {x + need:.6g}] "
            f"inside [{f.valid_lo:.6g}, {f.valid_hi:.6g}]")
    v = f.values
    ks = tq.offset_caps(f.spacing)
    sums = np.empty(ks.size)
    for j, cap_j in enumerate(ks):
        acc = 0.0
        for k in range(1, int(cap_j) + 1):
            if order == 1:
                acc += abs(v[i + k] - v[i]) + abs(v[i - k] - v[i])
            else:
                acc += (abs(v[i + 2 * k] - 2.0 * v[i + k] + v[i])
                        + abs(v[i - 2 * k] - 2.0 * v[i - k] + v[i]))
        sums[j] = acc * f.spacing
    s_exp = (sp.s if order == 1 else 1.0) + 1.0
    return float(_density_combine(sums[:, None], tq, s_exp, sp.q)[0])


def tl_seminorm(f: GridFunction, sp: SmoothnessParams, tq: TQuadrature,
                region: Region, order: int = 1) -> float:
    """Region p-norm of the pointwise Lizorkin-Triebel density."""
    _validate_tl(sp, order)
    tab, i0, i1 = _density_region(f, region, tq, order)
    s_exp = (sp.s if order == 1 else 1.0) + 1.0
    dens = _density_combine(tab, tq, s_exp, sp.q)
    return _finite_norm(float(np.sum(dens ** sp.p)), sp.p, f.spacing)


def _validate_tl(sp: SmoothnessParams, order: int) -> None:
    _require(sp.family == LIZORKIN_TRIEBEL,
             "a Lizorkin-Triebel parameter set is required")
    if order == 1:
        _require(0 < sp.s < 1, f"order 1 needs 0 < s < 1, got s={sp.s}")
    elif order == 2:
        _require(sp.s == 1, f"order 2 fixes s = 1, got s={sp.s}")
    else:
        raise ConfigError(f"order must be 1 or 2, got {order}")


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


# -- localized-uniform quantities -------------------------------------------

def _lattice_regions(ball: Region, lat: TranslationLattice) -> list[Region]:
    return [ball.shifted(a) for a in lat.offsets()]


def _lp_lu_any(f: GridFunction, p: float, ball: Region,
               lat: TranslationLattice) -> float:
    regions = _lattice_regions(ball, lat)
    try:
        if np.isinf(p):
            return max(lp_norm(f, p, r) for r in regions)
        starts, width = _region_starts(f, regions, 0.0, "lu window")
        vlo, vhi = f.valid_index_range()
        c = np.concatenate(([0.0],
                            np.cumsum(np.abs(f.values[vlo:vhi + 1]) ** p)))
        rel = starts - vlo
        sums = c[rel + width] - c[rel]
        return _finite_norm(float(np.max(sums)), p, f.spacing)
    except DomainMarginError as e:
        raise LatticeError(f"inadmissible lattice: {e}") from e


def lp_lu_norm(f: GridFunction, p: float, ball: Region,
               lat: TranslationLattice) -> float:
    """Sup over lattice translations of the p-norm over the shifted ball.

    The intrinsic description of uniformly-localized L_p; finite p only.
    """
    if np.isinf(p):
        raise ConfigError("lp_lu_norm requires p < inf")
    return _lp_lu_any(f, p, ball, lat)


def besov_lu_intrinsic(f: GridFunction, sp: SmoothnessParams, tq: TQuadrature,
                       ball: Region, lat: TranslationLattice) -> float:
    """Ball-intrinsic norm of the uniformly-localized Besov space, 0 < s < 1.

    Max over lattice translations of the Besov seminorm over the shifted
    ball, plus the localized-uniform L_p norm (sup-norm sweep when p = inf).
    """
    _require(sp.family == BESOV, "besov_lu_intrinsic needs Besov parameters")
    _require(0 < sp.s < 1, f"besov_lu_intrinsic needs 0 < s < 1, got {sp.s}")
    return _modulus_lu(f, sp, tq, ball, lat, order=1, s_exp=sp.s)


def besov1_lu_intrinsic(f: GridFunction, sp: SmoothnessParams,
                        tq: TQuadrature, ball: Region,
                        lat: TranslationLattice) -> float:
    """Ball-intrinsic localized-uniform norm at s = 1 (second differences)."""
    _require(sp.family == BESOV, "besov1_lu_intrinsic needs Besov parameters")
    _require(sp.s == 1, f"besov1_lu_intrinsic is the s = 1 case, got {sp.s}")
    return _modulus_lu(f, sp, tq, ball, lat, order=2, s_exp=1.0)


def _modulus_lu(f, sp, tq, ball, lat, order, s_exp) -> float:
    try:
        profs = modulus_profiles(f, sp.p, _lattice_regions(ball, lat), tq,
                                 order)
    except DomainMarginError as e:
        raise LatticeError(f"inadmissible lattice: {e}") from e
    semis = [_power_mean(row, tq, s_exp, sp.q) for row in profs]
    return max(semis) + _lp_lu_any(f, sp.p, ball, lat)


def tl_lu_intrinsic(f: GridFunction, sp: SmoothnessParams, tq: TQuadrature,
                    ball: Region, lat: TranslationLattice,
                    order: int = 1) -> float:
    """Ball-intrinsic norm of the uniformly-localized Lizorkin-Triebel space.

    Max over translations of the region p-norm of the pointwise density,
    plus the localized-uniform L_p norm.
    """
    _validate_tl(sp, order)
    regions = _lattice_regions(ball, lat)
    try:
        starts, width = _region_starts(f, regions, 0.0, "lu window")
        hull = Region(0.5 * (regions[0].lo + regions[-1].hi),
                      0.5 * (regions[-1].hi - regions[0].lo))
        tab, i0, i1 = _density_region(f, hull, tq, order)
    except DomainMarginError as e:
        raise LatticeError(f"inadmissible lattice: {e}") from e
    s_exp = (sp.s if order == 1 else 1.0) + 1.0
    dens = _density_combine(tab, tq, s_exp, sp.q)
    c = np.concatenate(([0.0], np.cumsum(dens ** sp.p)))
    rel = starts - i0
    sums = c[rel + width] - c[rel]
    semi = _finite_norm(float(np.max(sums)), sp.p, f.spacing)
    return semi + _lp_lu_any(f, sp.p, ball, lat)


# -- differentiation and Sobolev-style norms --------------------------------

def deriv_central(f: GridFunction) -> GridFunction:
    """Central-difference derivative; smooth-tagged samples only."""
    if not f.smooth:
        raise SmoothnessTagError(
            "central differencing requires samples tagged smooth by their "
            "generator")
    n = f.count
    out = np.full(n, np.nan)
    out[1:n - 1] = (f.values[2:] - f.values[:n - 2]) / (2.0 * f.spacing)
    return GridFunction(f.spacing, f.origin, out,
                        max(f.valid_lo + f.spacing, f.x_min + f.spacing),
                        min(f.valid_hi - f.spacing, f.x_max - f.spacing),
                        smooth=True)


def sobolev_norm(f: GridFunction, m: int, base: Callable[[GridFunction], float]) -> float:
    """Sum of the base norm over f and its first m central-difference
    derivatives (m in {1, 2})."""
    if m not in (1, 2):
        raise ConfigError(f"m must be 1 or 2, got {m}")
    if not f.smooth:
        raise SmoothnessTagError("sobolev_norm requires smooth-tagged samples")
    total = base(f)
    g = f
    for _ in range(m):
        g = deriv_central(g)
        total += base(g)
    return float(total)


# -- whole-space norm functionals for window multipliers --------------------

@dataclass(frozen=True)
class NormFunctional:
    """A whole-space norm, evaluated on a compactly supported sample set.

    ``fn(g, support)`` must equal the norm of g over the whole line given
    that g vanishes outside ``support``; ``margin`` (physical units, plus
    ``extra_steps`` grid steps) is how far beyond the support the samples
    must stay valid.
    """

    name: str
    margin: float
    fn: Callable[[GridFunction, Region], float]
    extra_steps: int = 0

    def required_margin(self, dx: float) -> float:
        return self.margin + self.extra_steps * dx

    def __call__(self, g: GridFunction, support: Region) -> float:
        return self.fn(g, support)


def lp_base(p: float) -> NormFunctional:
    """Plain L_p norm as a window base."""
    return NormFunctional(f"Lp(p={p})", 0.0,
                          lambda g, supp: lp_norm(g, p, supp))


def besov_base(sp: SmoothnessParams, tq: TQuadrature) -> NormFunctional:
    """Full Besov norm (p-norm plus seminorm) as a window base."""
    if sp.s == 1:
        def fn(g, supp):
            return (lp_norm(g, sp.p, supp)
                    + besov1_seminorm(g, sp, tq, supp.enlarged(2 * tq.t_max)))
        return NormFunctional(f"Besov1(p={sp.p},q={sp.q})", 4 * tq.t_max, fn)

    def fn(g, supp):
        return (lp_norm(g, sp.p, supp)
                + besov_seminorm(g, sp, tq, supp.enlarged(tq.t_max)))
    return NormFunctional(f"Besov(s={sp.s},p={sp.p},q={sp.q})",
                          2 * tq.t_max, fn)


def tl_base(sp: SmoothnessParams, tq: TQuadrature, order: int = 1) -> NormFunctional:
    """Full Lizorkin-Triebel norm as a window base."""
    pad = order * tq.t_max

    def fn(g, supp):
        return (lp_norm(g, sp.p, supp)
                + tl_seminorm(g, sp, tq, supp.enlarged(pad), order))
    return NormFunctional(
        f"TL(order={order},s={sp.s},p={sp.p},q={sp.q})", 2 * pad, fn)


def graded_base(inner: NormFunctional, m: int) -> NormFunctional:
    """Sobolev-style base: inner norm summed over the first m derivatives."""
    if m not in (1, 2):
        raise ConfigError(f"m must be 1 or 2, got {m}")

    def fn(g, supp):
        total = inner.fn(g, supp)
        h = g
        for _ in range(m):
            h = deriv_central(h)
            total += inner.fn(h, supp)
        return total
    return NormFunctional(f"W{m}({inner.name})", inner.margin, fn,
                          extra_steps=inner.extra_steps + m)


def sobolev1_base(inner: NormFunctional) -> NormFunctional:
    """First-order Sobolev norm built on another base (smooth samples)."""
    return graded_base(inner, 1)
