#!/usr/bin/env python3
"""Benchmark the compiled simplex kernel against the numpy fallback.

Builds representative distortion programs (one-shot tensor instances and
symmetry-reduced n-fold instances) and times each backend on the identical
standard-form data. Run after an editable install:

    python benchmarks/bench_lp.py [--repeat 3]

Backends are forced via SIMEX_LP_BACKEND in subprocesses so the timing of
one cannot contaminate the import-time choice of the other.
"""

import argparse
import json
import os
import subprocess
import sys
import textwrap

CASES = [
    ("oneshot 2x2 n=3 tensor, M=2", "oneshot", {"delta": 0.1, "n": 3, "M": 2}),
    ("reduced BSC(0.1) n=8,  M=e^{.2n}", "reduced", {"delta": 0.1, "n": 8, "rate": 0.2}),
    ("reduced BSC(0.1) n=12, M=e^{.2n}", "reduced", {"delta": 0.1, "n": 12, "rate": 0.2}),
    ("reduced BSC(0.1) n=16, M=e^{.2n}", "reduced", {"delta": 0.1, "n": 16, "rate": 0.2}),
    ("reduced BSC(0.1) n=20, M=e^{.2n}", "reduced", {"delta": 0.1, "n": 20, "rate": 0.2}),
]

WORKER = textwrap.dedent(
    """
    import json, sys, time
    import simex
    from simex import lp

    spec = json.loads(sys.argv[1])
    repeat = int(sys.argv[2])
    W = simex.Channel([[1 - spec["delta"], spec["delta"]], [spec["delta"], 1 - spec["delta"]]])
    best = float("inf")
    value = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        if spec["kind"] == "oneshot":
            rep = simex.eps_ns_iid_bruteforce(W, spec["n"], spec["M"])
        else:
            M = simex.message_size_for_rate(spec["n"], spec["rate"])
            rep = simex.eps_ns_iid(W, spec["n"], M)
        best = min(best, time.perf_counter() - t0)
        value = rep.value
    print(json.dumps({"backend": lp.BACKEND, "seconds": best, "value": value,
                      "iterations": rep.iterations}))
    """
)


def run_case(kind, params, backend, repeat):
    spec = dict(params)
    spec["kind"] = kind
    env = dict(os.environ, SIMEX_LP_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", WORKER, json.dumps(spec), str(repeat)],
        capture_output=True, text=True, env=env, check=True,
    )
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    print(f"{'case':<36} {'python':>10} {'c':>10} {'speedup':>8}  value check")
    for name, kind, params in CASES:
        res_py = run_case(kind, params, "python", args.repeat)
        res_c = run_case(kind, params, "c", args.repeat)
        agree = abs(res_py["value"] - res_c["value"]) <= 1e-9
        speedup = res_py["seconds"] / res_c["seconds"] if res_c["seconds"] > 0 else float("inf")
        print(
            f"{name:<36} {res_py['seconds']:>9.3f}s {res_c['seconds']:>9.3f}s "
            f"{speedup:>7.2f}x  {'agree' if agree else 'DISAGREE'}"
        )


if __name__ == "__main__":
    main()
