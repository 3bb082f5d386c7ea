"""Write envelope and curve CSVs for every supported case, plus a summary table.

    python3 scripts/reproduce_figures.py --out figures/ [--p-points 2001 --phi-points 720]
"""

import argparse
import time
from pathlib import Path

import numpy as np

from tangle_roof.roof import (
    CASES,
    DEFAULT_P_POINTS,
    DEFAULT_PHI_POINTS,
    envelopes,
    p_grid,
    phi_grid,
    reference_formula,
    write_curve_csv,
    write_envelope_csv,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="figures")
    ap.add_argument("--p-points", type=int, default=DEFAULT_P_POINTS)
    ap.add_argument("--phi-points", type=int, default=DEFAULT_PHI_POINTS)
    ap.add_argument("--curves", action="store_true", help="also write the full (large) curve CSVs")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    by_family = {}
    for case in CASES.values():
        by_family.setdefault((case.phi_key, case.w_key), []).append(case)

    start = time.perf_counter()
    for members in by_family.values():
        kinds = list(dict.fromkeys(c.kind for c in members))
        envs, grids = envelopes(members[0].family, kinds, p_grid(args.p_points), phi_grid(args.phi_points))
        for case in members:
            ref = reference_formula(case)
            env = envs[case.kind]
            write_envelope_csv(env, ref, out / f"{case.id}.envelope.csv")
            if args.curves:
                write_curve_csv(grids[case.kind], out / f"{case.id}.curve.csv")
            dev = np.max(np.abs(env.hull_curve - ref(env.p_values)))
            print(f"{case.id:12s} {case.scheme:9s} max |hull - closed form| = {dev:.2e}")
    print(f"total {time.perf_counter() - start:.1f} s")


if __name__ == "__main__":
    main()
