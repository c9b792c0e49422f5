#!/usr/bin/env python3
"""Time the mod-p transform kernels: compiled extension vs numpy fallback.

Both backends are loaded directly (ignoring NILGRADE_PURE) so one run
compares them side by side on identical inputs.  Outputs are checked for
bit-identity before any timing is reported.

Usage: python scripts/bench_modp.py [--rows N] [--prime P] [--repeat K]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from nilgrade import modp
from nilgrade import _modp_fallback


def _load_compiled():
    try:
        from nilgrade import _speedups
    except ImportError:
        return None
    return _speedups


def _kernels(impl, kind: str):
    if kind == "a6":
        return impl.a6_batch, 6, (1, 2, 0, 1, 3, 2)
    if kind == "a6_d0":
        return impl.a6_batch_d0, 5, (1, 2, 0, 1, 3, 2)
    return impl.b4_batch, 5, (2, 1, 3, 4)


def _time(fn, params, changes, p, repeat):
    best = float("inf")
    out = ok = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out, ok = fn(params, changes, p)
        best = min(best, time.perf_counter() - t0)
    return best, out, ok


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rows", type=int, default=2_000_000)
    ap.add_argument("--prime", type=int, default=13)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    compiled = _load_compiled()
    print(f"active backend at import: {modp.BACKEND}")
    if compiled is None:
        print("compiled extension not built; timing the fallback alone")

    rng = np.random.default_rng(20240817)
    for kind in ("a6", "a6_d0", "b4"):
        _, width, raw_params = _kernels(_modp_fallback, kind)
        changes = rng.integers(0, args.prime, size=(args.rows, width), dtype=np.int64)
        params = np.array([x % args.prime for x in raw_params], dtype=np.int64)

        fb_fn, _, _ = _kernels(_modp_fallback, kind)
        t_fb, out_fb, ok_fb = _time(fb_fn, params, changes, args.prime, args.repeat)
        line = f"{kind:6s} p={args.prime:3d} rows={args.rows:>9,d}  numpy {args.rows/t_fb/1e6:7.2f} Mrow/s"

        if compiled is not None:
            cp_fn, _, _ = _kernels(compiled, kind)
            t_cp, out_cp, ok_cp = _time(
                cp_fn,
                np.ascontiguousarray(params),
                np.ascontiguousarray(changes),
                args.prime,
                args.repeat,
            )
            if not (np.array_equal(np.asarray(out_fb), np.asarray(out_cp))
                    and np.array_equal(np.asarray(ok_fb), np.asarray(ok_cp))):
                print(f"{kind}: BACKEND OUTPUTS DIFFER — refusing to report timings")
                return 1
            line += f"  compiled {args.rows/t_cp/1e6:7.2f} Mrow/s  speedup x{t_fb/t_cp:5.2f}"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
