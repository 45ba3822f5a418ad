"""Write a directory of generated instances, one file per seed."""

import argparse
from pathlib import Path

from ptsp_ts.instance import SIZE_CLASSES, GeneratorConfig, generate_instance, save_instance


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--class", dest="size", default="small", choices=sorted(SIZE_CLASSES))
    ap.add_argument("--seeds", default="1-10", help="range a-b")
    ap.add_argument("--successor-fraction", type=float, default=0.10)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    a, b = (int(x) for x in args.seeds.split("-"))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = GeneratorConfig(successor_fraction=args.successor_fraction)
    for seed in range(a, b + 1):
        inst = generate_instance(args.size, seed, cfg)
        save_instance(inst, out / f"{args.size}_{seed:03d}.json")
        print(f"{args.size}_{seed:03d}.json  {inst.name}")


if __name__ == "__main__":
    main()
