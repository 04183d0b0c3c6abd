"""Run every experiment config in configs/ and write CSVs to results/.

    python scripts/run_all.py [--trials N] [--only single_user,cost]
"""

import argparse
import logging
import time
from pathlib import Path

from rayarray.experiments import load_config, run

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, help="override Monte Carlo trial count")
    ap.add_argument("--only", help="comma list of experiment names")
    ap.add_argument("--outdir", default=str(ROOT / "results"))
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    only = set(args.only.split(",")) if args.only else None
    for cfg_path in sorted((ROOT / "configs").glob("*.cfg")):
        if only and cfg_path.stem not in only:
            continue
        cfg = load_config(cfg_path, out=str(outdir / f"{cfg_path.stem}.csv"), trials=args.trials)
        t0 = time.time()
        run(cfg)
        logging.info("%s done in %.1f s -> %s", cfg_path.stem, time.time() - t0, cfg.out)


if __name__ == "__main__":
    main()
