"""List every event that pushed a discount rate below the floor, with the agent's history.

    python scripts/trace_floor.py --preset fig9e --seeds 10
"""

import argparse
from dataclasses import replace

from timepref.engine import run
from timepref.interaction import RHO_MIN
from timepref.scenarios import PRESETS, load_scenarios


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--preset", default="fig9e", choices=list(PRESETS))
    ap.add_argument("--seeds", type=int, default=10)
    args = ap.parse_args()

    for sc in load_scenarios(preset=args.preset):
        for seed in range(args.seeds):
            res = run(replace(sc.config, seed=seed, sample_agents=()))
            if not res.floor_hits:
                continue
            print(f"{sc.name} seed {seed}: {res.floor_hits} floor hits")
            clamped = {who for e in res.events for who, new in ((e.i, e.rho_i_new), (e.j, e.rho_j_new)) if new == RHO_MIN}
            for agent in sorted(clamped):
                print(f"  agent {agent} (final rho {res.rho[agent]:.4g}, k {res.k[agent]:.4g}, U {res.utility[agent]:.4g})")
                for e in res.events:
                    if agent in (e.i, e.j):
                        old, new = (e.rho_i_old, e.rho_i_new) if e.i == agent else (e.rho_j_old, e.rho_j_new)
                        print(f"    t={e.t:7.3f} {e.mode:<11} rho {old:.4g} -> {new:.4g}")


if __name__ == "__main__":
    main()
