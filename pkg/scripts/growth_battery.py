#!/usr/bin/env python3
"""Sweep the classification battery and print a verdict table.

Classifies ten reference nets (five negligible by construction, five
moderate but not negligible) with the full-norm, sup-norm and
coefficient methods, reporting margins per net.

Usage:
    python scripts/growth_battery.py [--nmax 32] [--s 1.0]
"""

import argparse
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

import battery  # noqa: E402

from periodic_gfa import algebra, weights  # noqa: E402
from periodic_gfa.verdict import json_float  # noqa: E402


def main(argv=None) -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--nmax", type=int, default=32)
    ap.add_argument("--s", type=float, default=1.0)
    ap.add_argument("--out", type=Path, default=None)
    args = ap.parse_args(argv)

    ws = weights.gevrey(args.s, 4096)
    rows = []
    t0 = time.perf_counter()
    for net, expect_neg in battery.full_battery(ws, args.nmax):
        mod = algebra.classify_moderate(net, ws, "roumieu")
        full = algebra.classify_negligible(net, ws, "roumieu")
        sup = algebra.classify_negligible_supnorm(net, ws, "roumieu", moderate=mod)
        coef = algebra.coef_classify(net, ws, "roumieu", "negligible")
        rows.append(
            {
                "net": net.label,
                "constructed_negligible": expect_neg,
                "moderate": mod.bounded,
                "negligible_full": full.bounded,
                "negligible_sup": sup.bounded,
                "negligible_coef": coef.bounded,
                "margin_full": json_float(full.margin),
            }
        )
        flag = "ok" if full.bounded == sup.bounded == coef.bounded == expect_neg else "MISMATCH"
        print(f"{net.label:18s} negligible={full.bounded!s:5s} ({flag})")
    report = {
        "weights": ws.label,
        "n_max": args.nmax,
        "elapsed_s": round(time.perf_counter() - t0, 2),
        "rows": rows,
        "desk_scale": True,
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if args.out:
        args.out.write_text(text + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
