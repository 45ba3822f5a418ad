"""Exact optimum, HiGHS on the exported model, and ALNS on tiny instances."""

import argparse
import time

from ptsp_ts.alns import AlnsConfig, run
from ptsp_ts.instance import generate_instance
from ptsp_ts.oracle import build_model, solve_exact, solve_lp_highs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=50)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--iterations", type=int, default=10_000)
    ap.add_argument("--no-lp", action="store_true", help="skip the HiGHS cross-check")
    args = ap.parse_args()
    print("seed,instance,oracle,proven,highs,alns_best,alns_hits")
    hits = 0
    t0 = time.perf_counter()
    for seed in range(1, args.instances + 1):
        inst = generate_instance("tiny", seed)
        ex = solve_exact(inst)
        lp = "" if args.no_lp else solve_lp_highs(build_model(inst))
        vals = [run(inst, AlnsConfig(iterations=args.iterations, rng_seed=s), keep_log=False).best_value
                for s in range(1, args.seeds + 1)]
        n_opt = sum(v == ex.optimal_value for v in vals)
        hits += max(vals) == ex.optimal_value
        print(f"{seed},{inst.name},{ex.optimal_value},{ex.proven},{lp},{max(vals)},{n_opt}")
    print(f"# optimum reached on {hits}/{args.instances} instances in {time.perf_counter() - t0:.0f}s")


if __name__ == "__main__":
    main()
