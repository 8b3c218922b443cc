"""Command-line entry point: corpus generation, norms, verification runs.

Exit codes are a stable contract: 0 success, 1 verification failure,
2 usage or configuration error, 3 domain-margin error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from . import records
from .config import RunConfig
from .errors import (ConfigError, DomainMarginError, LatticeError,
                     SmoothlabError)
from .grid import Region
from .norms import (LIZORKIN_TRIEBEL, SmoothnessParams, besov1_seminorm,
                    besov_base, besov_seminorm, besov1_lu_intrinsic,
                    besov_lu_intrinsic, deriv_central, graded_base, lp_norm,
                    tl_base, tl_lu_intrinsic, tl_seminorm)
from .testlab import default_corpus, generate
from .verify import ALL_SUITES, reports_for_suite, run_all
from .windows import make_window, windowed_lu_norm

_FUNC_ALIASES = {
    "const": "polynomial", "poly": "polynomial", "affine": "polynomial",
    "square": "polynomial", "step": "step", "bump": "bump",
    "saw": "sawtooth", "sawtooth": "sawtooth",
    "weier": "weierstrass", "weierstrass": "weierstrass",
    "rf": "random_fourier", "fourier": "random_fourier",
}


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError as e:
        raise ConfigError(f"not a number: {text!r}") from e


def parse_func_spec(spec: str) -> tuple[str, dict]:
    """Inline function spec 'kind:params' -> (generator kind, params)."""
    name, _, rest = spec.partition(":")
    if name not in _FUNC_ALIASES:
        raise ConfigError(f"unknown function kind {name!r} "
                          f"(known: {sorted(_FUNC_ALIASES)})")
    kind = _FUNC_ALIASES[name]
    params: dict = {}
    if rest:
        if "=" in rest:
            for item in rest.split(","):
                key, _, val = item.partition("=")
                if not val:
                    raise ConfigError(f"bad parameter {item!r} in {spec!r}")
                params[key] = _parse_float(val)
        else:
            params["coeffs"] = [_parse_float(v) for v in rest.split(",")]
    if name == "affine" and "coeffs" not in params:
        params["coeffs"] = [0.0, 1.0]
    elif name == "square" and "coeffs" not in params:
        params["coeffs"] = [0.0, 0.0, 1.0]
    elif name == "const" and "coeffs" in params and len(params["coeffs"]) != 1:
        raise ConfigError("const takes exactly one value")
    if kind == "weierstrass" and "J" in params:
        params["J"] = int(params["J"])
    if kind == "random_fourier" and "cutoff" in params:
        params["cutoff"] = int(params["cutoff"])
    return kind, params


def _config_from(args) -> RunConfig:
    budgets = dict(RunConfig().budgets)
    for item in args.budget or []:
        key, _, val = item.partition("=")
        if key not in budgets or not val:
            raise ConfigError(f"bad --budget {item!r} (expect SUITE=VALUE)")
        budgets[key] = _parse_float(val)
    return RunConfig(
        dx=args.dx, half_width=args.L, ball_radius=args.ball_radius,
        t_max=args.tmax, levels_per_octave=args.levels, depth=args.octaves,
        lattice_step=args.lattice_step, lattice_halfspan=args.lattice_span,
        phi1_step=args.phi1_step, budgets=budgets, seed=args.seed,
        manifest=args.manifest, out_dir=args.out, out_format=args.format)


def _load_corpus(cfg: RunConfig):
    if cfg.manifest is None:
        return default_corpus(cfg.dx, cfg.half_width, cfg.seed)
    recs = records.load_manifest(cfg.manifest)
    corpus = {}
    for rec in recs:
        corpus[rec["id"]] = generate(rec["kind"], rec["params"],
                                     float(rec["dx"]), float(rec["L"]),
                                     int(rec["seed"]))
    return corpus


def _apply_thread_cap() -> None:
    cap = os.environ.get("SMLB_THREADS")
    if not cap:
        return
    try:
        n = int(cap)
        if n < 1:
            raise ValueError
    except ValueError:
        raise ConfigError(f"SMLB_THREADS must be a positive integer, "
                          f"got {cap!r}") from None
    try:
        import numba
        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
    except ImportError:  # pragma: no cover - numba is a hard dependency
        pass


# -- norm command --------------------------------------------------------------

def _resolve_function(args, cfg: RunConfig):
    if cfg.manifest is not None:
        recs = {r["id"]: r for r in records.load_manifest(cfg.manifest)}
        if args.func in recs:
            rec = recs[args.func]
            return args.func, generate(rec["kind"], rec["params"],
                                       float(rec["dx"]), float(rec["L"]),
                                       int(rec["seed"]))
    kind, params = parse_func_spec(args.func)
    return args.func, generate(kind, params, cfg.dx, cfg.half_width, cfg.seed)


def _norm_value(args, cfg: RunConfig, gen_fn) -> dict:
    f = gen_fn.samples
    s, p, q = args.s, args.p, args.q
    family = LIZORKIN_TRIEBEL if args.space == "tl" else "besov"
    m = 0 if s <= 1 else int(math.ceil(s)) - 1
    if m > 2:
        raise ConfigError(f"s={s} needs more than two derivative orders")
    sp = SmoothnessParams(s - m, p, q, family)
    tq = cfg.quadrature()
    order = 2 if sp.s == 1 else 1
    if family == LIZORKIN_TRIEBEL:
        base = tl_base(sp, tq, order)
    else:
        base = besov_base(sp, tq)

    if args.region is not None:
        center, radius = (_parse_float(v) for v in args.region.split(","))
        region = Region(center, radius)
    else:
        pad = base.required_margin(f.spacing)
        half = (f.valid_hi - f.valid_lo) / 2 - pad
        if half <= 0:
            raise DomainMarginError(
                "norm region: no admissible region remains after the "
                f"difference margin {pad:g}")
        radius = math.floor(half / f.spacing) * f.spacing
        region = Region((f.valid_lo + f.valid_hi) / 2, radius)

    def seminorm(g):
        if family == LIZORKIN_TRIEBEL:
            return tl_seminorm(g, sp, tq, region, order)
        if sp.s == 1:
            return besov1_seminorm(g, sp, tq, region)
        return besov_seminorm(g, sp, tq, region)

    def intrinsic(g):
        if family == LIZORKIN_TRIEBEL:
            return tl_lu_intrinsic(g, sp, tq, cfg.ball(), cfg.lattice(), order)
        if sp.s == 1:
            return besov1_lu_intrinsic(g, sp, tq, cfg.ball(), cfg.lattice())
        return besov_lu_intrinsic(g, sp, tq, cfg.ball(), cfg.lattice())

    components: dict = {}
    if args.mode == "global":
        fs = [f]
        for _ in range(m):
            fs.append(deriv_central(fs[-1]))
        lp_term = sum(lp_norm(g, p, region) for g in fs)
        semi_term = sum(seminorm(g) for g in fs)
        value = lp_term + semi_term
        components = {"lp": lp_term, "seminorm": semi_term,
                      "region": [region.center, region.radius]}
    elif args.mode == "lu-intrinsic":
        fs = [f]
        for _ in range(m):
            fs.append(deriv_central(fs[-1]))
        value = sum(intrinsic(g) for g in fs)
    else:  # lu-windowed
        w0 = make_window("phi0", cfg.ball(), f)
        eff = base if m == 0 else graded_base(base, m)
        value = windowed_lu_norm(f, w0, eff, cfg.lattice())
    return components | {"value": value}


def cmd_norm(args) -> int:
    cfg = _config_from(args)
    name, gen_fn = _resolve_function(args, cfg)
    payload = _norm_value(args, cfg, gen_fn)
    record = {
        "func": name, "kind": gen_fn.kind, "space": args.space, "s": args.s,
        "p": args.p, "q": args.q, "mode": args.mode, "dx": cfg.dx,
        "L": cfg.half_width, "seed": cfg.seed,
        "quadrature": {"t_max": cfg.t_max, "levels_per_octave":
                       cfg.levels_per_octave, "depth": cfg.depth},
    }
    record.update(payload)
    print(records.dump_record(record))
    return 0


# -- verify command -------------------------------------------------------------

def cmd_verify(args) -> int:
    cfg = _config_from(args)
    corpus = _load_corpus(cfg)
    if args.suite == "all":
        reports = run_all(cfg, corpus)
    else:
        reports = reports_for_suite(args.suite, cfg, corpus)
    os.makedirs(cfg.out_dir, exist_ok=True)
    for stem, rep in reports.items():
        records.write_report(os.path.join(cfg.out_dir, stem), rep,
                             with_csv=cfg.out_format == "csv")
    summary = records.render_summary(reports)
    records.write_text(os.path.join(cfg.out_dir, "summary.txt"), summary)
    sys.stdout.write(summary)
    return 0 if all(r.passed for r in reports.values()) else 1


# -- gen command ----------------------------------------------------------------

def cmd_gen(args) -> int:
    cfg = _config_from(args)
    if args.corpus == "default":
        corpus = default_corpus(cfg.dx, cfg.half_width, cfg.seed)
    else:
        recs = records.load_manifest(args.corpus)
        corpus = {rec["id"]: generate(rec["kind"], rec["params"],
                                      float(rec["dx"]), float(rec["L"]),
                                      int(rec["seed"]))
                  for rec in recs}
    os.makedirs(cfg.out_dir, exist_ok=True)
    manifest = []
    for fid, gen_fn in corpus.items():
        manifest.append(records.manifest_record(
            fid, gen_fn.kind, gen_fn.params, gen_fn.seed, gen_fn.samples.spacing,
            cfg.half_width, gen_fn.smooth_tag))
        records.write_samples(os.path.join(cfg.out_dir, f"{fid}.smlb"),
                              gen_fn.samples)
    records.write_manifest(os.path.join(cfg.out_dir, "manifest.jsonl"),
                           manifest)
    print(os.path.join(cfg.out_dir, "manifest.jsonl"))
    return 0


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smoothlab",
        description="Moduli of smoothness, Besov / Lizorkin-Triebel norms "
                    "and their localized-uniform verification suites.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--dx", type=float, default=2.0 ** -12,
                       help="grid spacing (default 2^-12)")
        p.add_argument("--L", type=float, default=8.0,
                       help="samples cover [-L, L] (default 8)")
        p.add_argument("--tmax", type=float, default=0.25,
                       help="largest quadrature scale")
        p.add_argument("--levels", type=int, default=4,
                       help="quadrature levels per octave")
        p.add_argument("--octaves", type=int, default=8,
                       help="quadrature depth in octaves")
        p.add_argument("--ball-radius", type=float, default=1.0)
        p.add_argument("--lattice-step", type=float, default=0.125)
        p.add_argument("--lattice-span", type=float, default=2.0,
                       help="translations sweep [-span, span]")
        p.add_argument("--phi1-step", type=float, default=1.0)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--manifest", default=None,
                       help="corpus manifest path (default: built-in corpus)")
        p.add_argument("--out", default="reports", help="output directory")
        p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
        p.add_argument("--budget", action="append", metavar="SUITE=VALUE",
                       help="override a spread budget")

    p_norm = sub.add_parser("norm", help="compute one norm")
    add_common(p_norm)
    p_norm.add_argument("--func", required=True,
                        help="manifest id or inline kind:params")
    p_norm.add_argument("--space", choices=("besov", "tl"), required=True)
    p_norm.add_argument("--s", type=float, required=True)
    p_norm.add_argument("--p", type=float, required=True)
    p_norm.add_argument("--q", type=float, required=True)
    p_norm.add_argument("--mode",
                        choices=("global", "lu-intrinsic", "lu-windowed"),
                        default="global")
    p_norm.add_argument("--region", default=None, metavar="CENTER,RADIUS")
    p_norm.set_defaults(fn=cmd_norm)

    p_verify = sub.add_parser("verify", help="run verification suites")
    add_common(p_verify)
    p_verify.add_argument("--suite", required=True,
                          choices=ALL_SUITES + ("all",))
    p_verify.set_defaults(fn=cmd_verify)

    p_gen = sub.add_parser("gen", help="generate a corpus")
    add_common(p_gen)
    p_gen.add_argument("--corpus", default="default",
                       help="'default' or a manifest-style spec file")
    p_gen.set_defaults(fn=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_thread_cap()
        return args.fn(args)
    except (DomainMarginError, LatticeError) as e:
        print(f"smoothlab: domain margin error: {e}", file=sys.stderr)
        return 3
    except SmoothlabError as e:
        print(f"smoothlab: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
