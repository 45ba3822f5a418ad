"""Compare the six weight settings on generated small instances.

AllObjectives runs with successor matching and destruction switched on.
Prints one row per setting with the mean raw value of each objective term.
"""

import argparse
from statistics import mean

from ptsp_ts.alns import AlnsConfig, run
from ptsp_ts.instance import GeneratorConfig, generate_instance
from ptsp_ts.objective import SETTINGS

TERMS = ("Priority", "Penalty", "Groups", "Consec", "Workload")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=10)
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--iterations", type=int, default=3000)
    ap.add_argument("--successor-fraction", type=float, default=0.10)
    args = ap.parse_args()
    table = {name: [] for name in SETTINGS}
    for i in range(1, args.instances + 1):
        inst = generate_instance("small", i, GeneratorConfig(successor_fraction=args.successor_fraction))
        for name, w in SETTINGS.items():
            for s in range(args.seeds):
                cfg = AlnsConfig(iterations=args.iterations, rng_seed=s, weights=w,
                                 successor_mode=name == "AllObjectives")
                b = run(inst, cfg, keep_log=False).breakdown
                table[name].append((b.priority_sum, -b.penalty_sum, float(b.groups_avg), b.consec_same,
                                    float(b.workload_ratio)))
    print(f"{'setting':14s}" + "".join(f"{t:>11s}" for t in TERMS))
    for name, rows in table.items():
        print(f"{name:14s}" + "".join(f"{mean(r[k] for r in rows):11.3f}" for k in range(5)))


if __name__ == "__main__":
    main()
