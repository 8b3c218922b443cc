"""Equivalence harness: intrinsic norms vs window-multiplier norms.

Each equivalence suite computes, for every corpus function, the
ball-intrinsic localized-uniform norm (lhs) and the window-multiplier norm
with the narrow bump window (rhs), and reports the spread max/min of the
lhs/rhs ratios.  Norm equivalence means the ratio is bounded above and
below by constants independent of the function, so the spread over a fixed
corpus must stay within a budget.  A second, one-sided column repeats the
ratio against the plateau window on its (coarser) admissible lattice.

The identity, monotone-bound and Marchaud suites check exact residuals and
explicit-constant inequalities instead of ratio spreads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import RunConfig
from .errors import ConfigError
from .grid import GridFunction, GridOffset, Region, check_leibniz1, \
    check_leibniz2, check_telescoping, sample
from .norms import (BESOV, LIZORKIN_TRIEBEL, SmoothnessParams, TQuadrature,
                    besov1_lu_intrinsic, besov_base, besov_lu_intrinsic,
                    deriv_central, lp_base, lp_lu_norm, lp_norm,
                    modulus_profiles, omega, sobolev1_base, tl_base,
                    tl_lu_intrinsic)
from .testlab import GeneratedFunction, check_malpha, default_corpus, \
    random_monotone_sequence
from .windows import make_window, windowed_lu_norm

EQUIVALENCE_SUITES = ("T31", "T32", "T33", "T34", "P21", "P22", "P23")
CHECK_SUITES = ("identities", "malpha", "marchaud")
ALL_SUITES = CHECK_SUITES + EQUIVALENCE_SUITES

#: parameter matrix of the full run, per suite token
DEFAULT_MATRIX = {
    "T31": [SmoothnessParams(0.3, 2, 2), SmoothnessParams(0.5, 2, 2),
            SmoothnessParams(0.5, math.inf, math.inf),
            SmoothnessParams(0.7, 1, 1)],
    "T32": [SmoothnessParams(1.0, 2, 2), SmoothnessParams(1.0, math.inf, 1)],
    "T33": [SmoothnessParams(0.5, 2, 2, LIZORKIN_TRIEBEL),
            SmoothnessParams(0.3, 2, 1, LIZORKIN_TRIEBEL)],
    "T34": [SmoothnessParams(1.0, 2, 2, LIZORKIN_TRIEBEL)],
    "P21": [SmoothnessParams(0.3, 2, 2)],
    "P22": [SmoothnessParams(0.5, 2, 2)],
    "P23": [SmoothnessParams(0.5, 2, 2)],   # only p is used
}

MARCHAUD_POSITIONS = (-2.0, -1.0, 0.0, 1.0, 2.0)
MARCHAUD_SCALES = tuple(2.0 ** -j for j in range(1, 9))


@dataclass(frozen=True)
class CaseRow:
    case: str
    lhs: float
    rhs: float
    ratio: float
    passed: bool = True
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class EquivalenceReport:
    """Per-suite outcome: one row per case plus the spread verdict."""

    suite: str
    params: dict
    rows: tuple
    spread: float | None
    budget: float | None
    passed: bool


def spread_of(pairs) -> float:
    """max/min of lhs/rhs over pairs where both sides exceed 1e-14."""
    ratios = [lhs / rhs for lhs, rhs in pairs if lhs > 1e-14 and rhs > 1e-14]
    if not ratios:
        return 1.0
    return max(ratios) / min(ratios)


def _params_dict(sp: SmoothnessParams, **extra) -> dict:
    d = {"s": sp.s, "p": sp.p, "q": sp.q, "family": sp.family}
    d.update(extra)
    return d


def _num_token(x: float) -> str:
    if math.isinf(x):
        return "inf"
    if float(x) == int(x):
        return str(int(x))
    return f"{x:g}"


def report_stem(suite: str, sp: SmoothnessParams | None = None) -> str:
    """File stem for a report (params baked in for the theorem suites)."""
    if suite in ("P21", "P22", "P23") or sp is None:
        return suite
    if suite in ("T32", "T34"):
        return f"{suite}_p{_num_token(sp.p)}_q{_num_token(sp.q)}"
    return (f"{suite}_s{_num_token(sp.s)}_p{_num_token(sp.p)}"
            f"_q{_num_token(sp.q)}")


def _corpus_or_default(cfg: RunConfig, corpus) -> dict[str, GeneratedFunction]:
    if corpus is None:
        corpus = default_corpus(cfg.dx, cfg.half_width, cfg.seed)
    if not corpus:
        raise ConfigError("empty corpus")
    return corpus


def _any_samples(corpus) -> GridFunction:
    return next(iter(corpus.values())).samples


# -- equivalence suites ------------------------------------------------------

def run_equivalence(suite: str, sp: SmoothnessParams, corpus, cfg: RunConfig,
                    ) -> EquivalenceReport:
    """Compute both sides of one equivalence over the corpus.

    ``suite`` selects the pair of functionals; ``sp`` the space parameters.
    Rows carry lhs, rhs (narrow window), their ratio, and where applicable
    the plateau-window value; the report passes when every value is finite
    and the ratio spreads stay within the configured budget.
    """
    if suite not in EQUIVALENCE_SUITES:
        raise ConfigError(f"unknown equivalence suite {suite!r}")
    corpus = _corpus_or_default(cfg, corpus)
    budget = float(cfg.budgets[suite])
    ball, lat, tq = cfg.ball(), cfg.lattice(), cfg.quadrature()
    like = _any_samples(corpus)
    w0 = make_window("phi0", ball, like)

    lhs_fn, rhs_base, order = _functional_pair(suite, sp, tq, ball, lat, cfg)
    use_phi1 = suite in ("T31", "T32", "T33", "T34", "P23")
    w1 = make_window("phi1", ball, like) if use_phi1 else None
    wb = make_window("custom", ball, like, outer_radius=0.5) \
        if suite == "P21" else None

    rows = []
    for name, gen in corpus.items():
        if suite == "P22" and not gen.smooth_tag:
            continue
        f = gen.samples
        lhs = lhs_fn(f)
        if suite == "P21":
            rhs = windowed_lu_norm(f, wb, rhs_base, lat)
        else:
            rhs = windowed_lu_norm(f, w0, rhs_base, lat)
        ratio = lhs / rhs if rhs > 0 else math.inf
        extra = {}
        if use_phi1:
            rhs1 = windowed_lu_norm(f, w1, rhs_base, cfg.phi1_lattice())
            extra["rhs_phi1"] = rhs1
            extra["ratio_phi1"] = lhs / rhs1 if rhs1 > 0 else math.inf
        rows.append(CaseRow(name, lhs, rhs, ratio, extra=extra))
    if not rows:
        raise ConfigError(f"suite {suite}: no admissible corpus functions")

    spread = spread_of([(r.lhs, r.rhs) for r in rows])
    finite = all(math.isfinite(r.lhs) and math.isfinite(r.rhs) for r in rows)
    passed = finite and spread <= budget
    extra_params = {"order": order} if order else {}
    if use_phi1:
        spread1 = spread_of([(r.lhs, r.extra["rhs_phi1"]) for r in rows])
        extra_params["spread_phi1"] = spread1
        passed = passed and spread1 <= budget
    return EquivalenceReport(suite, _params_dict(sp, **extra_params),
                             tuple(rows), spread, budget, passed)


def _functional_pair(suite, sp, tq, ball, lat, cfg):
    """(lhs functional, rhs window base, order tag) for a suite."""
    if suite == "T31":
        _need(sp.family == BESOV and 0 < sp.s < 1, suite, sp)
        return (lambda f: besov_lu_intrinsic(f, sp, tq, ball, lat),
                besov_base(sp, tq), None)
    if suite == "T32":
        _need(sp.family == BESOV and sp.s == 1, suite, sp)
        return (lambda f: besov1_lu_intrinsic(f, sp, tq, ball, lat),
                besov_base(sp, tq), None)
    if suite == "T33":
        _need(sp.family == LIZORKIN_TRIEBEL and 0 < sp.s < 1, suite, sp)
        return (lambda f: tl_lu_intrinsic(f, sp, tq, ball, lat, 1),
                tl_base(sp, tq, 1), 1)
    if suite == "T34":
        _need(sp.family == LIZORKIN_TRIEBEL and sp.s == 1, suite, sp)
        return (lambda f: tl_lu_intrinsic(f, sp, tq, ball, lat, 2),
                tl_base(sp, tq, 2), 2)
    if suite == "P21":
        _need(sp.family == BESOV and 0 < sp.s < 1, suite, sp)
        base = besov_base(sp, tq)

        def lhs(f, _base=base):
            w0 = make_window("phi0", ball, f)
            return windowed_lu_norm(f, w0, _base, lat)
        return lhs, base, None
    if suite == "P22":
        _need(sp.family == BESOV and 0 < sp.s < 1, suite, sp)

        def lhs(f):
            return (besov_lu_intrinsic(f, sp, tq, ball, lat)
                    + besov_lu_intrinsic(deriv_central(f), sp, tq, ball, lat))
        return lhs, sobolev1_base(besov_base(sp, tq)), None
    # P23: localized-uniform L_p, two descriptions
    return (lambda f: lp_lu_norm(f, sp.p, ball, lat), lp_base(sp.p), None)


def _need(cond: bool, suite: str, sp: SmoothnessParams) -> None:
    if not cond:
        raise ConfigError(f"suite {suite} cannot run with parameters {sp}")


# -- identity suite ----------------------------------------------------------

def run_identities(cfg: RunConfig, n_random: int = 100) -> EquivalenceReport:
    """Exact difference identities on random samples: residuals vs budget."""
    rng = np.random.default_rng(cfg.seed)
    n = int(round(2 * cfg.half_width / cfg.dx)) + 1
    rows = []

    def add(case, residual, scale):
        tol = 1e-11 * (1.0 + scale)
        rows.append(CaseRow(case, residual, tol,
                            residual / tol, residual <= tol))

    for i in range(n_random):
        fv = rng.uniform(-1.0, 1.0, n)
        gv = rng.uniform(-1.0, 1.0, n)
        f = GridFunction(cfg.dx, -cfg.half_width, fv, -cfg.half_width,
                         cfg.half_width)
        g = GridFunction(cfg.dx, -cfg.half_width, gv, -cfg.half_width,
                         cfg.half_width)
        h = GridOffset(int(rng.integers(1, 65)))
        scale = float(np.max(np.abs(fv * gv)))
        add(f"rand{i:03d}/product1", check_leibniz1(f, g, h), scale)
        add(f"rand{i:03d}/product2", check_leibniz2(f, g, h), scale)

    f_exp = sample(np.exp, cfg.dx, -2.0, 2.0)
    for k in range(1, 7):
        add(f"exp/telescope_k{k}",
            check_telescoping(f_exp, GridOffset(1), k),
            float(np.max(np.abs(f_exp.values))))
        fv = rng.uniform(-1.0, 1.0, n)
        f = GridFunction(cfg.dx, -cfg.half_width, fv, -cfg.half_width,
                         cfg.half_width)
        add(f"rand/telescope_k{k}",
            check_telescoping(f, GridOffset(int(rng.integers(1, 9))), k), 1.0)

    return EquivalenceReport("identities", {}, tuple(rows), None, None,
                             all(r.passed for r in rows))


# -- monotone-sequence suite ---------------------------------------------------

MALPHA_GRID = tuple((a, q) for a in (-1.0, -0.5, 0.5, 1.0) for q in (1, 2, 4))


def run_malpha(cfg: RunConfig, n_random: int = 100) -> EquivalenceReport:
    """Sup-vs-integral bound on random monotone sequences, all (alpha, q)."""
    tq = cfg.unit_quadrature()
    rows = []
    for alpha, q in MALPHA_GRID:
        for i in range(n_random):
            seed = cfg.seed * 1_000_003 + len(rows)
            u = random_monotone_sequence(tq, seed)
            res = check_malpha(u, alpha, q)
            rows.append(CaseRow(
                f"a{_num_token(alpha)}_q{q}_{i:03d}", res.lhs, res.rhs,
                res.ratio, res.passed, {"bound": res.bound}))
    return EquivalenceReport("malpha", {"grid": "alpha x q"},
                             tuple(rows), None, None,
                             all(r.passed for r in rows))


# -- Marchaud suite -----------------------------------------------------------

def run_marchaud(cfg: RunConfig, corpus=None) -> EquivalenceReport:
    """Localized Marchaud bound over the corpus, dyadic scales, 5 windows."""
    corpus = _corpus_or_default(cfg, corpus)
    ball = cfg.ball()
    tq = cfg.unit_quadrature()
    omega_grid = TQuadrature(0.5, 1, 7)   # scales 2^-1 .. 2^-8
    p = 2.0
    rows = []
    for name, gen in corpus.items():
        f = gen.samples
        for a in MARCHAUD_POSITIONS:
            shifted = ball.shifted(a)
            doubled = ball.scaled(2.0).shifted(a)
            f.region_index_range(doubled, margin=1.0,
                                 what="marchaud doubled ball")
            eta_prof = modulus_profiles(f, p, [shifted], tq, order=2)[0]
            half = tq.scales <= 0.5 + 1e-12
            m_sup = float(np.max(eta_prof[half] / tq.scales[half]))
            norm2 = lp_norm(f, p, doubled)
            om = modulus_profiles(f, p, [shifted], omega_grid, order=1)[0]
            for t, lhs in zip(omega_grid.scales, om):
                rhs = (4.0 * t * norm2
                       + t * abs(math.log(t)) / math.log(2.0) * m_sup)
                rows.append(CaseRow(
                    f"{name}/a{_num_token(a)}/t2^{int(round(math.log2(t)))}",
                    float(lhs), rhs, float(lhs) / rhs if rhs > 0 else 0.0,
                    lhs <= rhs * (1 + 1e-6)))
    return EquivalenceReport("marchaud", {"p": p}, tuple(rows), None, None,
                             all(r.passed for r in rows))


# -- full run -----------------------------------------------------------------

def reports_for_suite(suite: str, cfg: RunConfig, corpus=None,
                      ) -> dict[str, EquivalenceReport]:
    """All reports belonging to one CLI suite token, keyed by file stem."""
    if suite == "identities":
        return {"identities": run_identities(cfg)}
    if suite == "malpha":
        return {"malpha": run_malpha(cfg)}
    if suite == "marchaud":
        return {"marchaud": run_marchaud(cfg, corpus)}
    if suite in EQUIVALENCE_SUITES:
        out = {}
        for sp in DEFAULT_MATRIX[suite]:
            out[report_stem(suite, sp)] = run_equivalence(suite, sp, corpus,
                                                          cfg)
        return out
    raise ConfigError(f"unknown suite {suite!r}")


def run_all(cfg: RunConfig, corpus=None) -> dict[str, EquivalenceReport]:
    """Every suite in a fixed order (shared corpus, deterministic)."""
    corpus = _corpus_or_default(cfg, corpus)
    out: dict[str, EquivalenceReport] = {}
    for suite in ALL_SUITES:
        out.update(reports_for_suite(suite, cfg, corpus))
    return out
