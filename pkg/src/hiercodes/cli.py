"""Command-line front end.

Every subcommand takes explicit flags (no config discovery), accepts exact
rationals as "p/q" strings, and emits CSV (RFC 4180, header row) and/or a
machine-readable JSON envelope {command, params, results, provenance} with
``--json``. Identical argv produce byte-identical outputs.

Exit codes: 0 success, 1 validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .field import FieldMatrix, PrimeField
from .params import HierParams
from . import mbr as mbr_mod
from . import mttdl as mttdl_mod
from . import opportunistic as opp_mod
from . import pm as pm_mod
from . import repair_sim as sim_mod
from . import tradeoff as tr_mod

_VALIDATION_ERRORS = (ValueError, KeyError, ArithmeticError)


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r} ({exc})")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated int list: {text!r} ({exc})")


def _render(x, decimal):
    if isinstance(x, Fraction):
        if decimal is not None:
            return f"{float(x):.{decimal}f}"
        return str(x)
    return str(x)


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    return x


def _write_text(path, text: str):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _hier_params(args) -> HierParams:
    return HierParams(n_b=args.n_b, n_l=args.n_l, k=args.k, d_b=args.d_b, d_l=args.d_l)


def _add_hier_flags(p: argparse.ArgumentParser, defaults=None):
    d = defaults or {}
    p.add_argument("--n-b", type=int, default=d.get("n_b"), required="n_b" not in d, help="clusters")
    p.add_argument("--n-l", type=int, default=d.get("n_l"), required="n_l" not in d, help="disks per cluster")
    p.add_argument("--k", type=int, default=d.get("k"), required="k" not in d, help="clusters for reconstruction")
    p.add_argument("--d-b", type=int, default=d.get("d_b"), required="d_b" not in d, help="helper clusters")
    p.add_argument("--d-l", type=int, default=d.get("d_l"), required="d_l" not in d, help="repair covers d_l+1 failures")


# --- tradeoff -------------------------------------------------------------------

MINCUT_NOTE = "min-cut storage term uses (n_l-d_l-1)*k*alpha: the per-disk capacity factor is required for consistency with the threshold function"


def cmd_tradeoff(args):
    params = _hier_params(args)
    M = args.M
    gmax = args.gamma_max
    if gmax is None:
        gmax = tr_mod.gamma_breakpoint(params, M, 0) * Fraction(5, 4)
    gammas = tr_mod.gamma_grid(args.gamma_min, gmax, args.points)
    rows = []
    for g in gammas:
        alpha, regime = tr_mod.alpha_star_regime(params, M, g)
        rows.append((g, alpha, regime))
    buf = io.StringIO()
    tr_mod.emit_curve_csv(params, M, gammas, buf)
    csv_text = buf.getvalue()
    if args.out:
        _write_text(args.out, csv_text)
        lines = [f"wrote {len(rows)} rows to {args.out}"]
    else:
        lines = csv_text.splitlines()
    results = {
        "rows": [{"gamma": g, "alpha_star": a, "regime_index": r} for g, a, r in rows],
        "notes": [MINCUT_NOTE],
    }
    return 0, {"hier": params.to_dict(), "M": M}, results, lines


def cmd_points(args):
    params = _hier_params(args)
    pts = tr_mod.extremal_points(params, args.M)
    dec = args.decimal
    lines = [
        f"msr: alpha={_render(pts.msr.alpha, dec)} gamma={_render(pts.msr.gamma, dec)}",
        (
            f"mbr: alpha={_render(pts.mbr.alpha, dec)} gamma={_render(pts.mbr.gamma, dec)}"
            if pts.mbr is not None
            else "mbr: undefined (n_l - d_l = 1)"
        ),
        f"ambr: alpha={_render(pts.ambr.alpha, dec)} gamma={_render(pts.ambr.gamma, dec)}",
        f"msr_exact_beta (asymptotic, o(M) dropped): {_render(pts.msr_exact_beta, dec)}",
    ]
    results = {
        "msr": {"alpha": pts.msr.alpha, "gamma": pts.msr.gamma},
        "mbr": None if pts.mbr is None else {"alpha": pts.mbr.alpha, "gamma": pts.mbr.gamma},
        "ambr": {"alpha": pts.ambr.alpha, "gamma": pts.ambr.gamma},
        "msr_exact_beta": pts.msr_exact_beta,
        "msr_exact_beta_asymptotic": True,
    }
    return 0, {"hier": params.to_dict(), "M": args.M}, results, lines


def cmd_opportunistic(args):
    sys_ = opp_mod.OppSystem(n=args.n, k=args.k, M=args.M, D=tuple(sorted(args.D, reverse=True)))
    amin = args.alpha_min if args.alpha_min is not None else sys_.M / sys_.k
    amax = args.alpha_max if args.alpha_max is not None else 2 * sys_.M / sys_.k
    alphas = tr_mod.gamma_grid(amin, amax, args.points)
    buf = io.StringIO()
    opp_mod.emit_loss_csv(sys_, alphas, buf)
    csv_text = buf.getvalue()
    thr = opp_mod.alpha_o(sys_.k, sys_.d1, sys_.M)
    thr_txt = "unbounded (k=1: never any loss)" if thr is opp_mod.UNBOUNDED else str(thr)
    if args.out:
        _write_text(args.out, csv_text)
        lines = [f"alpha_o = {thr_txt}", f"wrote {len(alphas)} rows to {args.out}"]
    else:
        lines = [f"alpha_o = {thr_txt}"] + csv_text.splitlines()
    results = {
        "alpha_o": None if thr is opp_mod.UNBOUNDED else thr,
        "alpha_o_unbounded": thr is opp_mod.UNBOUNDED,
        "csv": csv_text,
    }
    params = {"n": args.n, "k": args.k, "M": args.M, "D": list(sys_.D)}
    return 0, params, results, lines


def cmd_mttdl(args):
    models = mttdl_mod.MODELS if args.model == "both" else (args.model,)
    specs = [
        mttdl_mod.MarkovSpec(args.n, args.k, args.lam, args.mu, model, opp)
        for model in models
        for opp in (False, True)
    ]
    checks = mttdl_mod.cross_validate(specs)
    buf = io.StringIO()
    mttdl_mod.emit_csv(checks, buf)
    csv_text = buf.getvalue()
    if args.out:
        _write_text(args.out, csv_text)

    dec = args.decimal
    lines = [f"n={args.n} k={args.k} lambda={args.lam} mu={args.mu}"]
    lines.append("model  opportunistic  mttdl_closed  mttdl_oracle  match")
    for chk in checks:
        s = chk.spec
        lines.append(
            f"{s.model}  {'yes' if s.opportunistic else 'no'}  "
            f"{_render(chk.closed, dec)}  {_render(chk.oracle, dec)}  "
            f"{'yes' if chk.match else 'NO'}"
        )
    ratios = {}
    for model in models:
        orig = next(c for c in checks if c.spec.model == model and not c.spec.opportunistic)
        opp = next(c for c in checks if c.spec.model == model and c.spec.opportunistic)
        ratio = opp.oracle / orig.oracle
        ratios[model] = ratio
        lines.append(
            f"opp/orig ratio ({model}, oracle): {ratio} = {float(ratio):.4f} "
            f"(asymptotic factor (n-k)! = {mttdl_mod.improvement_factor(args.n, args.k)})"
        )
    mismatches = mttdl_mod.format_report(checks)
    lines.extend(mismatches)
    results = {
        "checks": [
            {
                "model": c.spec.model,
                "opportunistic": c.spec.opportunistic,
                "closed": c.closed,
                "oracle": c.oracle,
                "match": c.match,
            }
            for c in checks
        ],
        "ratios_oracle": ratios,
        "csv": csv_text,
    }
    params = {"n": args.n, "k": args.k, "lambda": args.lam, "mu": args.mu, "model": args.model}
    return (1 if mismatches else 0), params, results, lines


# --- simulate -------------------------------------------------------------------

def _scenario_from_args(args, n=None) -> sim_mod.NetworkScenario:
    if args.scenario_file:
        with open(args.scenario_file, "r", encoding="utf-8") as fh:
            sc = sim_mod.scenario_from_json(json.load(fh))
        if n is not None and n != sc.n:
            sc = sim_mod.NetworkScenario(n=n, k=sc.k, generator=sc.generator, matrix=None)
        return sc
    n_eff = n if n is not None else args.n
    if args.gauss_mean is not None:
        gen = sim_mod.RandomGaussian(args.gauss_mean, args.gauss_var_a, args.gauss_var_b)
        return sim_mod.NetworkScenario(n=n_eff, k=args.k, generator=gen)
    if args.groups is not None:
        gen = sim_mod.DatacenterGrid(args.groups, int(args.intra_rate), int(args.inter_rate))
        return sim_mod.NetworkScenario(n=n_eff, k=args.k, generator=gen)
    raise ValueError("no scenario: pass --scenario-file, gaussian flags, or datacenter flags")


def cmd_simulate(args):
    params = {"mode": args.mode, "seed": args.seed, "runs": args.runs}
    if args.mode == "decision":
        sc = _scenario_from_args(args)
        failed = set(args.failed or [args.target])
        live = [v for v in range(sc.n) if v not in failed]
        decision = sim_mod.choose_d(sc, args.target, live)
        time = decision.repair_time(args.file_size)
        # plain k-helper baseline: rate is just the k-th largest bandwidth
        base_rate = sorted(sc.incoming(args.target, live), reverse=True)[sc.k - 1]
        baseline = sim_mod.RepairDecision(
            chosen_d=sc.k, helper_set=decision.helper_set[: sc.k], rate=base_rate, k=sc.k,
        )
        base_time = baseline.repair_time(args.file_size)
        lines = [
            f"target={args.target} failed={sorted(failed)} live={len(live)}",
            f"chosen d={decision.chosen_d} helpers={list(decision.helper_set)}",
            f"rate={_render(Fraction(decision.rate), args.decimal)}",
            f"repair_time({args.file_size})={_render(Fraction(time), args.decimal)} s",
            f"k-helper repair_time={_render(Fraction(base_time), args.decimal)} s",
        ]
        results = {
            "chosen_d": decision.chosen_d,
            "helpers": list(decision.helper_set),
            "rate": Fraction(decision.rate),
            "repair_time": Fraction(time),
            "k_helper_repair_time": Fraction(base_time),
        }
        params["scenario"] = sim_mod.scenario_to_json(sc)
        params["file_size"] = str(args.file_size)
        return 0, params, results, lines

    if args.mode == "onefail":
        n_values = [args.n] if args.n_min is None else list(range(args.n_min, args.n_max + 1))
        entries = []
        for n in n_values:
            sc = _scenario_from_args(args, n=n)
            seed = np.random.SeedSequence(args.seed, spawn_key=(n,))
            mean, std = sim_mod.one_failure_ratio(sc, args.runs, seed)
            entries.append((n, mean, std))
        buf = io.StringIO()
        sim_mod.emit_one_failure_csv(entries, buf)
        params["scenario"] = sim_mod.scenario_to_json(_scenario_from_args(args, n=n_values[0]))
    else:  # multifail
        sc = _scenario_from_args(args)
        entries = sim_mod.multi_failure_profile(sc, args.runs, args.seed)
        buf = io.StringIO()
        sim_mod.emit_multi_failure_csv(entries, buf)
        params["scenario"] = sim_mod.scenario_to_json(sc)

    csv_text = buf.getvalue()
    if args.out:
        _write_text(args.out, csv_text)
        lines = [f"wrote {len(entries)} rows to {args.out}"]
    else:
        lines = csv_text.splitlines()
    results = {"rows": [list(e) for e in entries], "csv": csv_text}
    return 0, params, results, lines


# --- demos ----------------------------------------------------------------------

F11_B = ((1, 0), (0, 1), (1, 1))


def f11_code() -> pm_mod.PmCode:
    """The canonical GF(11) configuration: Vandermonde psi on points 1..10."""
    params = HierParams(n_b=5, n_l=3, k=2, d_b=3, d_l=1)
    field = PrimeField(11)
    return pm_mod.build_pm_code(
        params, field, pm_mod.VandermondePsi(range(1, 11)),
        b_matrix=FieldMatrix(field, F11_B),
    )


def cmd_pmdemo(args):
    from itertools import combinations

    if args.f11_example or args.n_b is None:
        code = f11_code()
    else:
        params = _hier_params(args)
        field = PrimeField(args.q)
        code = pm_mod.build_pm_code(params, field, pm_mod.RandomPsi(seed=args.psi_seed))
    p = code.params
    lines = [
        f"params: n_b={p.n_b} n_l={p.n_l} k={p.k} d_b={p.d_b} d_l={p.d_l} q={code.field.q} "
        f"(k'={p.k_prime}, d'={p.d_prime}, M={p.message_size})"
    ]
    report = pm_mod.validate_conditions(code, pm_mod.Exhaustive())
    lines.append(f"conditions: {report.summary()}")
    ok = report.ok

    rng = np.random.default_rng(args.seed)
    message = [int(x) for x in rng.integers(0, code.field.q, size=p.message_size)]
    state = pm_mod.encode_clusters(code, message)
    lines.append(f"message: {p.message_size} symbols, seed {args.seed}")
    lines.append(f"encode: {p.n_b * p.n_l} disks, {p.d_prime} symbols per disk (alpha={p.d_prime})")

    fail_cluster = args.fail_cluster
    fail_disks = tuple(args.fail_disks) if args.fail_disks else tuple(range(p.d_l + 1))
    helpers = (
        tuple(args.helpers)
        if args.helpers
        else tuple(c for c in range(p.n_b) if c != fail_cluster)[: p.d_b]
    )
    failed_state = pm_mod.fail_disks(state, fail_cluster, fail_disks)
    lines.append(f"fail: cluster {fail_cluster}, disks {tuple(fail_disks)}")
    repaired, acct = pm_mod.repair_cluster(code, failed_state, fail_cluster, fail_disks, helpers)
    restored = repaired == state
    ok = ok and restored
    lines.append(
        f"repair: helpers {acct.helpers}, beta={acct.beta_per_helper} per helper, "
        f"gamma={acct.gamma}, alpha={acct.alpha}, restored exactly: {restored}"
    )

    subsets = list(combinations(range(p.n_b), p.k))
    bad = [s for s in subsets if pm_mod.reconstruct(code, repaired, s) != message]
    ok = ok and not bad
    lines.append(f"reconstruct: {len(subsets)} cluster subsets checked, {len(bad)} mismatches")

    if args.state_out:
        _write_text(args.state_out, pm_mod.dump_json(code, repaired))
        lines.append(f"state written to {args.state_out}")

    good = p.message_size if ok else 0
    lines.append(
        f"RECONSTRUCT OK ({p.message_size}/{p.message_size} symbols)"
        if ok
        else f"RECONSTRUCT FAILED ({good}/{p.message_size} symbols)"
    )
    results = {
        "ok": ok,
        "gamma": acct.gamma,
        "alpha": acct.alpha,
        "message_size": p.message_size,
        "transcript": lines,
    }
    return (0 if ok else 1), {"hier": p.to_dict(), "q": code.field.q, "seed": args.seed}, results, lines


def cmd_mbrdemo(args):
    from itertools import combinations

    params = _hier_params(args)
    field = PrimeField(args.q)
    code = mbr_mod.make_mbr_code(params, field)
    pieces = code.pieces
    msg_len = pieces * args.alpha
    rng = np.random.default_rng(args.seed)
    message = [int(x) for x in rng.integers(0, field.q, size=msg_len)]
    state = mbr_mod.mbr_encode(code, message)
    lines = [
        f"params: n_b={params.n_b} n_l={params.n_l} k={params.k} d_b={params.d_b} "
        f"d_l={params.d_l} q={field.q}",
        f"message: {msg_len} symbols over {pieces} pieces, alpha={args.alpha}, seed {args.seed}",
        f"encode: {params.n_b * params.n_l} disks, {args.alpha} symbols per disk",
    ]
    ok = True
    fail_disks = tuple(range(params.d_l + 1))
    failed_state = pm_mod.fail_disks(state, 0, fail_disks)
    repaired, acct = mbr_mod.mbr_repair(code, failed_state, 0, fail_disks)
    restored = repaired == state
    ok = ok and restored and acct.gamma == 0
    lines.append(
        f"fail: cluster 0, disks {fail_disks}; repair: gamma={acct.gamma} (local only), "
        f"restored exactly: {restored}"
    )
    subsets = list(combinations(range(params.n_b), params.k))
    bad = [s for s in subsets if mbr_mod.mbr_reconstruct(code, repaired, s) != message]
    ok = ok and not bad
    lines.append(f"reconstruct: {len(subsets)} cluster subsets checked, {len(bad)} mismatches")
    lines.append(
        f"RECONSTRUCT OK ({msg_len}/{msg_len} symbols)" if ok else f"RECONSTRUCT FAILED (0/{msg_len} symbols)"
    )
    results = {"ok": ok, "gamma": acct.gamma, "message_size": msg_len, "transcript": lines}
    return (0 if ok else 1), {"hier": params.to_dict(), "q": field.q, "seed": args.seed}, results, lines


def cmd_validate(args):
    with open(args.file, "r", encoding="utf-8") as fh:
        code, _state = pm_mod.from_json_document(json.load(fh))
    mode = pm_mod.Exhaustive() if args.mode == "exhaustive" else pm_mod.Sampled(args.samples, args.seed)
    report = pm_mod.validate_conditions(code, mode)
    lines = [f"conditions: {report.summary()}"]
    for rows in report.cond1_violations[:20]:
        lines.append(f"condition-1 violation: psi rows {rows}")
    for i, helpers, locals_ in report.cond2_violations[:20]:
        lines.append(f"condition-2 violation: cluster {i}, helpers {helpers}, locals {locals_}")
    results = {
        "ok": report.ok,
        "cond1_checked": report.cond1_checked,
        "cond1_violations": [list(v) for v in report.cond1_violations],
        "cond2_checked": report.cond2_checked,
        "cond2_violations": [_jsonable(v) for v in report.cond2_violations],
    }
    params = {"file": args.file, "mode": args.mode}
    return (0 if report.ok else 1), params, results, lines


# --- parser ---------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hiercodes",
        description="Regenerating codes for clustered storage: analysis, construction, simulation.",
    )
    parser.add_argument("--version", action="version", version=f"hiercodes {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="emit a JSON result envelope")
        p.add_argument("--decimal", type=int, default=None, metavar="DIGITS",
                       help="render rationals as decimals with this many digits")

    p = sub.add_parser("tradeoff", help="alpha*(gamma) curve as CSV")
    _add_hier_flags(p)
    p.add_argument("--M", type=_frac, required=True, help="file size in symbols (rational ok)")
    p.add_argument("--gamma-min", type=_frac, default=Fraction(0))
    p.add_argument("--gamma-max", type=_frac, default=None)
    p.add_argument("--points", type=int, default=41)
    p.add_argument("--out", default=None, help="CSV output path (stdout if omitted)")
    common(p)
    p.set_defaults(func=cmd_tradeoff)

    p = sub.add_parser("points", help="MSR / MBR / AMBR extremal points")
    _add_hier_flags(p)
    p.add_argument("--M", type=_frac, required=True)
    common(p)
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("opportunistic", help="feasibility threshold and loss curves")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--M", type=_frac, required=True)
    p.add_argument("--D", type=_int_list, required=True, help="helper counts, e.g. 9,7")
    p.add_argument("--alpha-min", type=_frac, default=None)
    p.add_argument("--alpha-max", type=_frac, default=None)
    p.add_argument("--points", type=int, default=41)
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_opportunistic)

    p = sub.add_parser("mttdl", help="closed forms vs chain oracle")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=_frac, required=True)
    p.add_argument("--mu", type=_frac, required=True)
    p.add_argument("--model", choices=["chen", "angus", "both"], default="both")
    p.add_argument("--out", default=None, help="CSV output path")
    common(p)
    p.set_defaults(func=cmd_mttdl)

    p = sub.add_parser("simulate", help="network repair simulations")
    p.add_argument("--mode", choices=["decision", "onefail", "multifail"], required=True)
    p.add_argument("--scenario-file", default=None, help="JSON {n, k, generator | matrix}")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--groups", type=int, default=None)
    p.add_argument("--intra-rate", type=_frac, default=None)
    p.add_argument("--inter-rate", type=_frac, default=None)
    p.add_argument("--gauss-mean", type=float, default=None)
    p.add_argument("--gauss-var-a", type=float, default=None)
    p.add_argument("--gauss-var-b", type=float, default=None)
    p.add_argument("--n-min", type=int, default=None, help="sweep n (onefail only)")
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--target", type=int, default=0)
    p.add_argument("--failed", type=_int_list, default=None)
    p.add_argument("--file-size", type=_frac, default=Fraction(100))
    p.add_argument("--runs", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("pmdemo", help="build, break, repair, and read back a product-matrix code")
    _add_hier_flags(p, defaults={"n_b": None, "n_l": None, "k": None, "d_b": None, "d_l": None})
    p.add_argument("--f11-example", action="store_true",
                   help="use the canonical GF(11) configuration (default when no params given)")
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--psi-seed", type=int, default=0)
    p.add_argument("--seed", type=int, default=7, help="message seed")
    p.add_argument("--fail-cluster", type=int, default=0)
    p.add_argument("--fail-disks", type=_int_list, default=None)
    p.add_argument("--helpers", type=_int_list, default=None)
    p.add_argument("--state-out", default=None, help="write code+state JSON here")
    common(p)
    p.set_defaults(func=cmd_pmdemo)

    p = sub.add_parser("mbrdemo", help="zero-bandwidth construction demo")
    _add_hier_flags(p, defaults={"n_b": 4, "n_l": 4, "k": 2, "d_b": 2, "d_l": 1})
    p.add_argument("--q", type=int, default=11)
    p.add_argument("--alpha", type=int, default=2, help="symbols per disk")
    p.add_argument("--seed", type=int, default=7)
    common(p)
    p.set_defaults(func=cmd_mbrdemo)

    p = sub.add_parser("validate", help="re-check conditions of a serialized code")
    p.add_argument("file")
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        code, params, results, lines = args.func(args)
    except _VALIDATION_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.json:
        envelope = {
            "command": args.command,
            "params": _jsonable(params),
            "results": _jsonable(results),
            "provenance": {
                "package": "hiercodes",
                "version": __version__,
                "argv": list(argv) if argv is not None else sys.argv[1:],
            },
        }
        print(json.dumps(envelope, sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
