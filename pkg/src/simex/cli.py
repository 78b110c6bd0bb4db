"""Command-line front end: single queries, grid sweeps, verification.

Queries print one JSON record on stdout and exit 0 (ok), 2 (solver
failure) or 3 (input error). Sweeps write deterministic CSV with the fixed
header ``quantity,n,rate,M,alpha,value,cert_gap,status,warning`` in grid
order, floats carrying 17 significant digits. ``verify`` runs the named
inequality/oracle suite and exits nonzero iff any check fails.
"""

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

from . import core, exponents, nsdist, renyi, srbounds, verify

LN2 = math.log(2.0)

QUANTITIES = (
    "eps-ns", "eps-ns-iid", "renyi-mi", "capacity", "exponent-ee",
    "exponent-sce", "bounds-ee", "bounds-sce", "sr-sandwich", "max-info",
)


class InputError(Exception):
    """Bad command-line input or malformed file (exit code 3)."""


class SolverFailure(Exception):
    """A solver reported a non-optimal status (exit code 2)."""


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return "%.17g" % x
    return str(x)


def _load_channel(path):
    try:
        return core.load_channel(path)
    except FileNotFoundError as exc:
        raise InputError(f"channel file not found: {path}") from exc
    except (core.InvalidDistributionError, core.AlphabetMismatchError, json.JSONDecodeError) as exc:
        raise InputError(str(exc)) from exc


def _load_pmf(path, labels):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            vec = json.load(fh)
        return core.Pmf(vec, labels=labels)
    except FileNotFoundError as exc:
        raise InputError(f"pmf file not found: {path}") from exc
    except (core.InvalidDistributionError, core.AlphabetMismatchError,
            json.JSONDecodeError, TypeError) as exc:
        raise InputError(f"bad pmf file {path}: {exc}") from exc


def _parse_grid(spec, kind=float):
    """Parse '1,2,3' or 'start:stop:step' (inclusive stop) into a list."""
    if spec is None:
        return []
    spec = spec.strip()
    try:
        if ":" in spec:
            parts = spec.split(":")
            if len(parts) != 3:
                raise ValueError("grid ranges need start:stop:step")
            start, stop, step = (float(p) for p in parts)
            if step <= 0:
                raise ValueError("grid step must be positive")
            out = []
            v = start
            while v <= stop + 1e-12:
                out.append(kind(round(v, 12)))
                v += step
            return out
        return [kind(float(p)) if kind is int else kind(p) for p in spec.split(",") if p]
    except ValueError as exc:
        raise InputError(f"bad grid {spec!r}: {exc}") from exc


def _maybe_bits(value, bits):
    if bits and value is not None and math.isfinite(value):
        return value / LN2
    return value


def _jsonable(obj):
    """Strict-JSON form: non-finite floats become strings."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else _fmt(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _emit(record, bits):
    record["units"] = "bits" if bits else "nats"
    json.dump(_jsonable(record), sys.stdout, sort_keys=True, default=str)
    sys.stdout.write("\n")


# ------------------------------------------------------------------- queries


def _report_or_fail(rep):
    if rep.status != "optimal":
        raise SolverFailure(f"distortion solve failed: status {rep.status}")
    return rep


def cmd_eps_ns(args):
    W = _load_channel(args.channel)
    rep = _report_or_fail(nsdist.eps_ns_oneshot(W, args.M))
    _emit({
        "quantity": "eps-ns",
        "inputs": {"channel": args.channel, "M": args.M},
        "value": rep.value,
        "certificate": rep.certificate_gap,
        "warnings": [],
    }, False)
    return 0


def cmd_eps_ns_iid(args):
    W = _load_channel(args.channel)
    M = args.M if args.M is not None else nsdist.message_size_for_rate(args.n, args.rate)
    rep = _report_or_fail(nsdist.eps_ns_iid(W, args.n, M))
    _emit({
        "quantity": "eps-ns-iid",
        "inputs": {"channel": args.channel, "n": args.n, "M": M, "rate": args.rate},
        "value": rep.value,
        "certificate": rep.certificate_gap,
        "warnings": [],
    }, False)
    return 0


def cmd_renyi_mi(args):
    W = _load_channel(args.channel)
    if args.input:
        p = _load_pmf(args.input, W.input_labels)
    else:
        p = core.Pmf([1.0 / W.nx] * W.nx, labels=W.input_labels)
    value = renyi.sibson_inner_inf(p, W, args.alpha)
    _emit({
        "quantity": "renyi-mi",
        "inputs": {"channel": args.channel, "alpha": args.alpha, "input": args.input or "uniform"},
        "value": _maybe_bits(value, args.bits),
        "certificate": 0.0,
        "warnings": [],
    }, args.bits)
    return 0


def cmd_capacity(args):
    W = _load_channel(args.channel)
    res = renyi.renyi_capacity(W, args.alpha, tol=args.tol)
    if not res.converged:
        raise SolverFailure(f"capacity solver did not converge (residual {res.residual!r})")
    _emit({
        "quantity": "capacity",
        "inputs": {"channel": args.channel, "alpha": args.alpha, "tol": args.tol},
        "value": _maybe_bits(res.value, args.bits),
        "certificate": res.residual,
        "optimal_input": [float(v) for v in res.optimal_input.probs],
        "warnings": [],
    }, args.bits)
    return 0


def _exponent_record(name, res, args):
    return {
        "quantity": name,
        "inputs": {"channel": args.channel, "rate": args.rate},
        "value": _maybe_bits(res.value, args.bits),
        "argmax_alpha": res.argmax_alpha,
        "finite": res.finite,
        "certificate": res.grid_resolution,
        "warnings": list(res.notes),
    }


def cmd_exponent_ee(args):
    W = _load_channel(args.channel)
    _emit(_exponent_record("exponent-ee", exponents.error_exponent(W, args.rate), args), args.bits)
    return 0


def cmd_exponent_sce(args):
    W = _load_channel(args.channel)
    _emit(_exponent_record("exponent-sce", exponents.sc_exponent(W, args.rate), args), args.bits)
    return 0


def cmd_bounds_ee(args):
    W = _load_channel(args.channel)
    record = {
        "quantity": "bounds-ee",
        "inputs": {"channel": args.channel, "rate": args.rate, "n": args.n},
        "value": {
            "ach": exponents.ee_ach_bound(W, args.rate, args.n),
            "conv": exponents.ee_conv_bound(W, args.rate, args.n),
        },
        "certificate": 0.0,
        "warnings": [],
    }
    _emit(record, False)
    return 0


def cmd_bounds_sce(args):
    W = _load_channel(args.channel)
    record = {
        "quantity": "bounds-sce",
        "inputs": {"channel": args.channel, "rate": args.rate, "n": args.n},
        "value": {
            "ach": exponents.sce_ach_bound(W, args.rate, args.n),
            "conv": exponents.sce_conv_bound(W, args.rate, args.n),
        },
        "certificate": 0.0,
        "warnings": [],
    }
    _emit(record, False)
    return 0


def cmd_sr_sandwich(args):
    W = _load_channel(args.channel)
    if args.n > 1:
        eps_m = _report_or_fail(nsdist.eps_ns_iid(W, args.n, args.M)).value
        eps_mp = _report_or_fail(nsdist.eps_ns_iid(W, args.n, args.Mprime)).value
    else:
        eps_m = _report_or_fail(nsdist.eps_ns_oneshot(W, args.M)).value
        eps_mp = _report_or_fail(nsdist.eps_ns_oneshot(W, args.Mprime)).value
    s = srbounds.sr_sandwich(eps_m, eps_mp, args.M, args.Mprime)
    _emit({
        "quantity": "sr-sandwich",
        "inputs": {"channel": args.channel, "M": args.M, "Mprime": args.Mprime, "n": args.n},
        "value": {"lower": s.lower, "upper": s.upper},
        "certificate": 0.0,
        "warnings": [],
    }, False)
    return 0


def cmd_max_info(args):
    W = _load_channel(args.channel)
    value = renyi.max_information(W)
    _emit({
        "quantity": "max-info",
        "inputs": {"channel": args.channel},
        "value": _maybe_bits(value, args.bits),
        "certificate": 0.0,
        "warnings": [],
    }, args.bits)
    return 0


# -------------------------------------------------------------------- sweeps


def _sweep_tasks(args, doc):
    """Expand the grids into row tasks, in deterministic grid order."""
    q = args.quantity
    n_grid = _parse_grid(args.n_grid, int)
    m_grid = _parse_grid(args.M_grid, int)
    a_grid = _parse_grid(args.alpha_grid, float)
    r_grid = _parse_grid(args.rate_grid, float)
    tasks = []
    if q == "eps-ns":
        if not m_grid:
            raise InputError("eps-ns sweep needs --M-grid")
        tasks = [{"q": q, "doc": doc, "M": m} for m in m_grid]
    elif q == "eps-ns-iid":
        if not n_grid:
            raise InputError("eps-ns-iid sweep needs --n-grid")
        if m_grid:
            tasks = [{"q": q, "doc": doc, "n": n, "M": m} for n in n_grid for m in m_grid]
        elif args.rate is not None:
            tasks = [{"q": q, "doc": doc, "n": n, "rate": args.rate} for n in n_grid]
        else:
            raise InputError("eps-ns-iid sweep needs --M-grid or --rate")
    elif q in ("renyi-mi", "capacity"):
        if not a_grid:
            raise InputError(f"{q} sweep needs --alpha-grid")
        tasks = [{"q": q, "doc": doc, "alpha": a} for a in a_grid]
    elif q in ("exponent-ee", "exponent-sce"):
        grid = r_grid or ([args.rate] if args.rate is not None else [])
        if not grid:
            raise InputError(f"{q} sweep needs --rate-grid or --rate")
        tasks = [{"q": q, "doc": doc, "rate": r} for r in grid]
    elif q in ("bounds-ee", "bounds-sce", "sr-sandwich"):
        if not n_grid or args.rate is None:
            raise InputError(f"{q} sweep needs --n-grid and --rate")
        tasks = [{"q": q, "doc": doc, "n": n, "rate": args.rate} for n in n_grid]
    elif q == "max-info":
        tasks = [{"q": q, "doc": doc}]
    if not tasks:
        raise InputError("empty sweep grid")
    return tasks


def _sweep_row(task):
    """One grid point -> list of CSV rows (dicts). Must stay picklable."""
    q = task["q"]
    W = core.channel_from_json(task["doc"])
    base = {"quantity": q, "n": task.get("n"), "rate": task.get("rate"),
            "M": task.get("M"), "alpha": task.get("alpha"),
            "value": None, "cert_gap": None, "status": "ok", "warning": ""}
    try:
        if q == "eps-ns":
            rep = nsdist.eps_ns_oneshot(W, task["M"])
            base.update(value=rep.value, cert_gap=rep.certificate_gap, status=rep.status, n=1)
            return [base]
        if q == "eps-ns-iid":
            M = task.get("M")
            if M is None:
                M = nsdist.message_size_for_rate(task["n"], task["rate"])
            rep = nsdist.eps_ns_iid(W, task["n"], M)
            base.update(value=rep.value, cert_gap=rep.certificate_gap, status=rep.status, M=M)
            return [base]
        if q == "renyi-mi":
            p = core.Pmf([1.0 / W.nx] * W.nx, labels=W.input_labels)
            base.update(value=renyi.sibson_inner_inf(p, W, task["alpha"]), cert_gap=0.0)
            return [base]
        if q == "capacity":
            res = renyi.renyi_capacity(W, task["alpha"])
            base.update(value=res.value, cert_gap=res.residual,
                        status="ok" if res.converged else "solver-failure")
            return [base]
        if q == "exponent-ee":
            res = exponents.error_exponent(W, task["rate"])
            base.update(value=res.value, cert_gap=res.grid_resolution,
                        warning="; ".join(res.notes))
            return [base]
        if q == "exponent-sce":
            res = exponents.sc_exponent(W, task["rate"])
            base.update(value=res.value, cert_gap=res.grid_resolution)
            return [base]
        if q in ("bounds-ee", "bounds-sce"):
            n, r = task["n"], task["rate"]
            M = nsdist.message_size_for_rate(n, r)
            rep = nsdist.eps_ns_iid(W, n, M)
            exact = rep.value if q == "bounds-ee" else 1.0 - rep.value
            exact_log = -math.inf if exact <= 0.0 else math.log(exact) / n
            if q == "bounds-ee":
                ach = exponents.ee_ach_bound(W, r, n)
                conv = exponents.ee_conv_bound(W, r, n)
            else:
                ach = exponents.sce_ach_bound(W, r, n)
                conv = exponents.sce_conv_bound(W, r, n)
            rows = []
            for tag, val in (("exact", exact_log), ("ach", ach), ("conv", conv)):
                row = dict(base)
                row.update(quantity=f"{q}/{tag}", value=val, M=M,
                           cert_gap=rep.certificate_gap if tag == "exact" else 0.0,
                           status=rep.status if tag == "exact" else "ok")
                rows.append(row)
            return rows
        if q == "sr-sandwich":
            n, r = task["n"], task["rate"]
            M = nsdist.message_size_for_rate(n, r)
            rep = nsdist.eps_ns_iid(W, n, M)
            lo, hi = srbounds.sr_success_sandwich(rep.value)
            rows = []
            for tag, val in (("success-lower", lo), ("success-upper", hi)):
                row = dict(base)
                row.update(quantity=f"{q}/{tag}", value=val, M=M,
                           cert_gap=rep.certificate_gap, status=rep.status)
                rows.append(row)
            return rows
        if q == "max-info":
            base.update(value=renyi.max_information(W), cert_gap=0.0, n=1)
            return [base]
        raise ValueError(f"unknown quantity {q}")
    except (core.SizeCapError, exponents.ValidityError) as exc:
        base.update(status="row-error", warning=str(exc))
        return [base]


def cmd_sweep(args):
    W = _load_channel(args.channel)
    doc = core.channel_to_json(W)
    tasks = _sweep_tasks(args, doc)
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows_nested = list(pool.map(_sweep_row, tasks))
    else:
        rows_nested = [_sweep_row(t) for t in tasks]

    rows = [row for group in rows_nested for row in group]
    failures = sum(1 for row in rows if row["status"] not in ("ok", "optimal"))
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["quantity", "n", "rate", "M", "alpha", "value", "cert_gap", "status", "warning"])
        for row in rows:
            writer.writerow([
                row["quantity"], _fmt(row["n"]), _fmt(row["rate"]), _fmt(row["M"]),
                _fmt(row["alpha"]), _fmt(row["value"]), _fmt(row["cert_gap"]),
                row["status"], row["warning"],
            ])
    sys.stdout.write(f"wrote {len(rows)} rows to {args.out} ({failures} failed rows)\n")
    return 0 if failures < len(rows) else 2


# -------------------------------------------------------------------- verify


def cmd_verify(args):
    if args.suite == "sandwich" and (args.channel or args.rate is not None or args.n_grid):
        W = _load_channel(args.channel) if args.channel else None
        ns = tuple(_parse_grid(args.n_grid, int)) if args.n_grid else (4, 6, 8, 10, 12, 14)
        r = args.rate if args.rate is not None else 0.6
        kw = {"r": r, "ns": ns}
        if W is not None:
            kw["W"] = W
        rows = (verify.ee_sandwich_suite(**kw)
                + verify.sce_sandwich_suite(**kw)
                + verify.ee_trend_suite(**kw))
    elif args.suite == "definetti" and (args.alphabet or args.n):
        sizes = (args.alphabet,) if args.alphabet else (2, 3)
        rows = verify.definetti_suite(alphabet_sizes=sizes, n_max=args.n or 6, seed=args.seed)
    else:
        rows = verify.run_suite(args.suite, seed=args.seed)
    width = max(len(r.name) for r in rows)
    failed = 0
    for r in rows:
        status = "PASS" if r.passed else "FAIL"
        failed += 0 if r.passed else 1
        detail = f"  [{r.detail}]" if r.detail else ""
        sys.stdout.write(f"{status}  {r.name:<{width}}  margin={_fmt(r.margin)}{detail}\n")
    sys.stdout.write(f"{len(rows) - failed}/{len(rows)} checks passed\n")
    return 0 if failed == 0 else 1


# --------------------------------------------------------------------- main


def build_parser():
    ap = argparse.ArgumentParser(prog="simex", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_channel(p):
        p.add_argument("--channel", required=True, help="channel JSON file")

    p = sub.add_parser("eps-ns", help="one-shot simulation distortion")
    add_channel(p)
    p.add_argument("--M", type=int, required=True)
    p.set_defaults(fn=cmd_eps_ns)

    p = sub.add_parser("eps-ns-iid", help="n-fold distortion via the reduced program")
    add_channel(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--M", type=int)
    p.add_argument("--rate", type=float, help="message budget floor(e^{n rate})")
    p.set_defaults(fn=cmd_eps_ns_iid)

    p = sub.add_parser("renyi-mi", help="order-alpha mutual information at a fixed input")
    add_channel(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--input", help="JSON file with the input pmf (default uniform)")
    p.add_argument("--bits", action="store_true")
    p.set_defaults(fn=cmd_renyi_mi)

    p = sub.add_parser("capacity", help="order-alpha channel mutual information")
    add_channel(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--bits", action="store_true")
    p.set_defaults(fn=cmd_capacity)

    p = sub.add_parser("exponent-ee", help="error exponent at a rate")
    add_channel(p)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--bits", action="store_true")
    p.set_defaults(fn=cmd_exponent_ee)

    p = sub.add_parser("exponent-sce", help="strong converse exponent at a rate")
    add_channel(p)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--bits", action="store_true")
    p.set_defaults(fn=cmd_exponent_sce)

    p = sub.add_parser("bounds-ee", help="finite-n distortion bound pair")
    add_channel(p)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=cmd_bounds_ee)

    p = sub.add_parser("bounds-sce", help="finite-n success bound pair")
    add_channel(p)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=cmd_bounds_sce)

    p = sub.add_parser("sr-sandwich", help="shared-randomness sandwich from solved distortions")
    add_channel(p)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--Mprime", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.set_defaults(fn=cmd_sr_sandwich)

    p = sub.add_parser("max-info", help="zero-distortion message threshold (log)")
    add_channel(p)
    p.add_argument("--bits", action="store_true")
    p.set_defaults(fn=cmd_max_info)

    p = sub.add_parser("sweep", help="grid sweep to CSV")
    add_channel(p)
    p.add_argument("--quantity", choices=QUANTITIES, required=True)
    p.add_argument("--n-grid", dest="n_grid")
    p.add_argument("--M-grid", dest="M_grid")
    p.add_argument("--alpha-grid", dest="alpha_grid")
    p.add_argument("--rate-grid", dest="rate_grid")
    p.add_argument("--rate", type=float)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=("all", "oracle", "sandwich", "types", "continuity", "definetti"))
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.add_argument("--channel", help="sandwich suite: channel JSON file")
    p.add_argument("--rate", type=float, help="sandwich suite: rate")
    p.add_argument("--n-grid", dest="n_grid", help="sandwich suite: blocklength grid")
    p.add_argument("--alphabet", type=int, help="definetti suite: alphabet size")
    p.add_argument("--n", type=int, help="definetti suite: max blocklength")
    p.set_defaults(fn=cmd_verify)

    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 3 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 3
    except (core.InvalidDistributionError, core.AlphabetMismatchError,
            core.InfeasibleError, core.SizeCapError, exponents.ValidityError, ValueError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 3
    except SolverFailure as exc:
        sys.stderr.write(f"solver failure: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
