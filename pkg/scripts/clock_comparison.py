"""Compare the two path clocks on the scenarios with published numbers.

"absolute" decays adjustment paths as exp(mu*t) from the start of the run;
"event" restarts the clock at each interaction. Only the first reproduces the
published means; this script shows the size of the gap.

    python scripts/clock_comparison.py --seeds 10
"""

import argparse

import numpy as np

from timepref.engine import SimConfig, run
from timepref.interaction import InteractionParams
from timepref.metrics import summary

CASES = {
    "eps_k=0.1": (InteractionParams(eps_k=0.1), {"rho": 0.207, "k": 2.65, "c": 1.36}),
    "eps_c=0.1": (InteractionParams(eps_c=0.1), {"rho": 0.240, "k": 2.17, "c": 1.25}),
    "eps_c=0.3": (InteractionParams(eps_c=0.3), {"k": 1.82, "cv_k": 0.225}),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seeds", type=int, default=10)
    args = ap.parse_args()

    for name, (inter, published) in CASES.items():
        for clock in ("absolute", "event"):
            rows = []
            for seed in range(args.seeds):
                res = run(SimConfig(interaction=inter, seed=seed, sample_agents=(), path_clock=clock))
                rows.append({
                    "rho": summary(res.rho).mean,
                    "k": summary(res.k).mean,
                    "c": summary(res.c).mean,
                    "cv_k": summary(res.k).cv,
                })
            got = {key: float(np.mean([r[key] for r in rows])) for key in published}
            cells = "  ".join(f"{key} {got[key]:.4f} (pub {published[key]})" for key in published)
            print(f"{name:<10} {clock:<8} {cells}")


if __name__ == "__main__":
    main()
