#!/usr/bin/env python3
"""Emit ratio-trajectory CSVs for the registered sharpness sweeps.

The failing embeddings show ratios growing along the witness ladder; the
holding direction stays bounded.  CSV columns: param,source_norm,target_norm,ratio.
"""

import os
import sys

from mixednorm.embed import SHARPNESS_IDS, sharpness_sweep


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else "sweeps"
    os.makedirs(outdir, exist_ok=True)
    for sid in SHARPNESS_IDS:
        rep = sharpness_sweep(sid)
        path = os.path.join(outdir, f"{sid}.csv")
        with open(path, "w") as fh:
            fh.write(rep.to_csv())
        ratios = [f"{row[3]:.3g}" for row in rep.trajectory]
        print(f"{sid}: verdict={rep.verdict} ratios=[{', '.join(ratios)}] -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
