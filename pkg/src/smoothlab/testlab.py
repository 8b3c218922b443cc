"""Test-function generators with known smoothness, and inequality checkers.

The generators provide a corpus whose regularity is known from classical
facts (lacunary cosine sums of exponent s have modulus of continuity ~ t^s,
a jump gives an L_1 modulus ~ t, polynomials and bumps are smooth), so the
norm machinery can be exercised against predictable scaling behaviour.

``oracle_omega_bruteforce`` deliberately shares no code with the norm
module: it is the naive double loop used to cross-check the fast path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, DomainMarginError
from .grid import GridFunction, Region, sample
from .norms import TQuadrature, lp_norm, modulus_profiles, omega

KINDS = ("polynomial", "step", "bump", "sawtooth", "weierstrass",
         "random_fourier")


@dataclass(frozen=True)
class GeneratedFunction:
    """Samples plus the metadata the generator can vouch for."""

    kind: str
    params: dict
    seed: int
    smooth_tag: bool
    claimed_regularity: float | None
    samples: GridFunction


def _weierstrass_levels(dx: float, params: dict) -> int:
    auto = int(math.floor(math.log2(1.0 / dx) + 1e-9))
    levels = int(params.get("J", auto))
    if 2.0 ** levels * dx > 1.0 + 1e-9 and not params.get("allow_undersampled"):
        raise ConfigError(
            f"weierstrass J={levels} puts the finest oscillation below the "
            f"grid spacing {dx:.3g}; pass allow_undersampled to force it")
    return levels


def generate(kind: str, params: dict, dx: float, half_width: float,
             seed: int = 0) -> GeneratedFunction:
    """Deterministically sample a named test function on [-L, L].

    params are kind-specific: polynomial coeffs; step location; bump center
    and radius; sawtooth period and amplitude; weierstrass exponent s and
    level count J; random_fourier decay exponent s and mode cutoff.
    """
    if kind not in KINDS:
        raise ConfigError(f"unknown generator kind {kind!r}")
    lo, hi = -half_width, half_width
    smooth = False
    claimed: float | None = None

    if kind == "polynomial":
        coeffs = np.asarray(params.get("coeffs", [0.0]), dtype=np.float64)
        gf = sample(lambda x: np.polynomial.polynomial.polyval(x, coeffs),
                    dx, lo, hi, smooth=True)
        smooth, claimed = True, math.inf
    elif kind == "step":
        at = float(params.get("at", 0.0))
        gf = sample(lambda x: (x >= at).astype(np.float64), dx, lo, hi)
    elif kind == "bump":
        center = float(params.get("center", 0.0))
        radius = float(params.get("radius", 1.0))
        def bump(x):
            u = (x - center) / radius
            out = np.zeros_like(x)
            inside = np.abs(u) < 1.0
            out[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2))
            return out
        gf = sample(bump, dx, lo, hi, smooth=True)
        smooth, claimed = True, math.inf
    elif kind == "sawtooth":
        period = float(params.get("period", 2.0))
        amp = float(params.get("amplitude", 1.0))
        half = period / 2.0
        gf = sample(lambda x: amp * np.abs(np.mod(x + half, period) - half) / half,
                    dx, lo, hi)
        claimed = 1.0
    elif kind == "weierstrass":
        s = float(params["s"])
        if not 0 < s < 1:
            raise ConfigError(f"weierstrass exponent must be in (0,1), got {s}")
        levels = _weierstrass_levels(dx, params)
        def weier(x):
            acc = np.zeros_like(x)
            for j in range(levels + 1):
                acc += 2.0 ** (-j * s) * np.cos((2.0 ** j) * np.pi * x)
            return acc
        gf = sample(weier, dx, lo, hi)
        claimed = s
    else:  # random_fourier
        s = float(params["s"])
        n_periodic = int(round(2 * half_width / dx))
        nyquist = n_periodic // 2
        cutoff = params.get("cutoff")
        cutoff = nyquist if cutoff is None else min(int(cutoff), nyquist)
        rng = np.random.default_rng(seed)
        amps = rng.standard_normal(cutoff)
        phases = rng.uniform(0.0, 2.0 * np.pi, cutoff)
        spec = np.zeros(nyquist + 1, dtype=np.complex128)
        k = np.arange(1, cutoff + 1)
        spec[1:cutoff + 1] = (0.5 * n_periodic * k ** (-(s + 0.5)) * amps
                              * np.exp(1j * phases))
        vals = np.fft.irfft(spec, n=n_periodic)
        vals = np.concatenate([vals, vals[:1]])
        gf = GridFunction(dx, lo, vals, lo, hi)
        smooth = cutoff * dx * 16 <= 2 * half_width
        gf = gf.with_smooth(smooth)
        claimed = s

    return GeneratedFunction(kind, dict(params), seed, smooth, claimed, gf)


def default_corpus(dx: float, half_width: float, seed: int = 0) -> dict[str, GeneratedFunction]:
    """The fixed ten-function corpus, in manifest order."""
    return {
        "const": generate("polynomial", {"coeffs": [1.0]}, dx, half_width),
        "affine": generate("polynomial", {"coeffs": [0.0, 1.0]}, dx, half_width),
        "square": generate("polynomial", {"coeffs": [0.0, 0.0, 1.0]}, dx, half_width),
        "sawtooth": generate("sawtooth", {"period": 2.0, "amplitude": 1.0}, dx, half_width),
        "step": generate("step", {"at": 0.0}, dx, half_width),
        "bump": generate("bump", {"center": 0.0, "radius": 1.0}, dx, half_width),
        "weier_03": generate("weierstrass", {"s": 0.3}, dx, half_width),
        "weier_05": generate("weierstrass", {"s": 0.5}, dx, half_width),
        "weier_07": generate("weierstrass", {"s": 0.7}, dx, half_width),
        "fourier_06": generate("random_fourier", {"s": 0.6}, dx, half_width,
                               seed=seed + 1),
    }


# -- independent oracle ------------------------------------------------------

def oracle_omega_bruteforce(f: GridFunction, p: float, region: Region,
                            t: float) -> float:
    """First-order modulus by exhaustive double loop (cross-check oracle).

    Same contract as :func:`smoothlab.norms.omega`, written independently:
    every offset, every sample, plain accumulation.
    """
    dx = f.spacing
    cap = int(math.floor(t / dx + 1e-9))
    lo_i = int(math.floor((region.lo - f.origin) / dx + 1e-9))
    hi_i = int(math.ceil((region.hi - f.origin) / dx - 1e-9))
    span_lo = f.origin + (lo_i - cap) * dx
    span_hi = f.origin + (hi_i + cap) * dx
    if span_lo < f.valid_lo - 1e-9 * dx or span_hi > f.valid_hi + 1e-9 * dx:
        raise DomainMarginError(
            f"oracle modulus: needs [{span_lo:.6g}, {span_hi:.6g}] inside "
            f"[{f.valid_lo:.6g}, {f.valid_hi:.6g}]")
    vals = f.values
    best = 0.0
    for k in range(-cap, cap + 1):
        if k == 0:
            continue
        if math.isinf(p):
            acc = 0.0
            for i in range(lo_i, hi_i + 1):
                d = abs(vals[i + k] - vals[i])
                if d > acc:
                    acc = d
        else:
            acc = 0.0
            for i in range(lo_i, hi_i + 1):
                acc += abs(vals[i + k] - vals[i]) ** p
        if acc > best:
            best = acc
    if math.isinf(p):
        return best
    return (best * dx) ** (1.0 / p)


# -- scaling-exponent estimation ---------------------------------------------

def estimate_smoothness_slope(f: GridFunction, p: float, region: Region,
                              tq: TQuadrature,
                              fit_max: float | None = None) -> float:
    """Log-log regression slope of the modulus against the scale.

    The abscissa is the *effective* scale floor(t/dx)*dx actually reached
    by the offset sup (regressing against the nominal scale tilts the fit
    where t is only a few grid steps).  Only the strictly increasing
    stretch enters the fit (saturated scales carry no slope information),
    optionally capped at ``fit_max``; retained moduli must be positive.
    """
    prof = modulus_profiles(f, p, [region], tq, order=1)[0]
    caps = tq.offset_caps(f.spacing)
    ts, ws = [], []
    for cap, w in zip(caps[::-1], prof[::-1]):   # ascending scales
        t_eff = cap * f.spacing
        if ts and t_eff <= ts[-1]:
            continue                             # duplicate effective scale
        if ts and w <= ws[-1]:
            continue                             # not strictly increasing
        if fit_max is not None and t_eff > fit_max * (1 + 1e-12):
            continue
        ts.append(t_eff)
        ws.append(w)
    ts, ws = np.asarray(ts), np.asarray(ws)
    if ts.size < 2 or np.any(ws <= 0.0):
        raise ConfigError("degenerate modulus profile: cannot fit a slope")
    slope = np.polyfit(np.log(ts), np.log(ws), 1)[0]
    return float(slope)


# -- monotone-sequence inequality ---------------------------------------------

@dataclass(frozen=True)
class MonotoneSequence:
    """Values of a nondecreasing function of t on the quadrature scales."""

    tq: TQuadrature
    values: np.ndarray  # aligned with tq.scales (descending t)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", vals)
        if vals.shape != self.tq.scales.shape:
            raise ConfigError("values must align with the quadrature scales")
        if np.any(vals < 0.0):
            raise ConfigError("monotone sequence must be nonnegative")
        if np.any(np.diff(vals) > 1e-12 * max(1.0, float(vals.max()))):
            raise ConfigError("sequence is not nondecreasing in t")


class MalphaResult(NamedTuple):
    lhs: float
    rhs: float
    ratio: float
    bound: float
    passed: bool


def check_malpha(u: MonotoneSequence, alpha: float, q: float) -> MalphaResult:
    """Discrete sup-versus-integral bound for weighted monotone sequences.

    lhs is the sup over scales t <= 1/2 of t^alpha u(t), rhs the quadrature
    of the dt/t integral of (t^alpha u)^q to the power 1/q; for nondecreasing
    u the ratio is bounded by 2^|alpha| (ln 2)^(-1/q).
    """
    if not (1 <= q < math.inf):
        raise ConfigError(f"q must lie in [1, inf), got {q}")
    ts = u.tq.scales
    half = ts <= 0.5 + 1e-12
    if not half.any():
        raise ConfigError("quadrature has no scales at or below 1/2")
    weighted = ts ** alpha * u.values
    lhs = float(np.max(weighted[half]))
    rhs = u.tq.integral(weighted ** q) ** (1.0 / q)
    ratio = 0.0 if (lhs == 0.0 and rhs == 0.0) else lhs / rhs
    bound = 2.0 ** abs(alpha) * math.log(2.0) ** (-1.0 / q)
    return MalphaResult(lhs, rhs, ratio, bound, ratio <= bound * (1 + 1e-12))


def random_monotone_sequence(tq: TQuadrature, seed: int,
                             scale: float = 1.0) -> MonotoneSequence:
    """Nondecreasing-in-t sequence with |N(0,1)| increments (occasionally
    starting flat at zero)."""
    rng = np.random.default_rng(seed)
    incr = np.abs(rng.standard_normal(tq.scales.size)) * scale
    if rng.random() < 0.2:
        incr[: rng.integers(1, tq.scales.size)] = 0.0
    ascending = np.cumsum(incr)
    return MonotoneSequence(tq, ascending[::-1].copy())


# -- localized Marchaud-type inequality ---------------------------------------

class MarchaudResult(NamedTuple):
    lhs: float
    rhs: float
    passed: bool


def check_marchaud(f: GridFunction, p: float, ball: Region, a: float,
                   t: float, tq: TQuadrature) -> MarchaudResult:
    """Localized Marchaud inequality with explicit constants.

    Bounds the first-order modulus over the shifted ball at scale t <= 1/2
    by 4t times the p-norm over the doubled ball plus (t |ln t| / ln 2)
    times the sup over quadrature scales tau <= 1/2 of the second-order
    modulus divided by tau.
    """
    if not 0 < t <= 0.5:
        raise ConfigError(f"t must lie in (0, 1/2], got {t}")
    shifted = ball.shifted(a)
    f.region_index_range(ball.scaled(2.0).shifted(a), margin=1.0,
                         what="marchaud doubled ball")
    lhs = omega(f, p, shifted, t)
    prof = modulus_profiles(f, p, [shifted], tq, order=2)[0]
    half = tq.scales <= 0.5 + 1e-12
    m_sup = float(np.max(prof[half] / tq.scales[half]))
    rhs = (4.0 * t * lp_norm(f, p, ball.scaled(2.0).shifted(a))
           + t * abs(math.log(t)) / math.log(2.0) * m_sup)
    return MarchaudResult(lhs, rhs, lhs <= rhs * (1 + 1e-6))
