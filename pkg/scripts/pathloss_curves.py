"""Path loss of every model over distance and at the
reference locations, as CSV for plotting.

    python scripts/pathloss_curves.py --out curves.csv
"""

import argparse
import csv
import sys

import numpy as np

from tmbwifi import DEFAULT_PARAMS, LinkGeometry, LocationRegistry, ModelId, evaluate


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dmin", type=float, default=0.5)
    ap.add_argument("--dmax", type=float, default=30.0)
    ap.add_argument("--points", type=int, default=120)
    ap.add_argument("--walls", type=int, default=0)
    ap.add_argument("--out")
    args = ap.parse_args(argv)

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(out, lineterminator="\n")
    models = list(ModelId)
    w.writerow(["kind", "location_id", "d_m", *(m.value for m in models)])
    for d in np.geomspace(args.dmin, args.dmax, args.points):
        g = LinkGeometry(float(d), args.walls)
        w.writerow(["curve", "", f"{d:.4f}", *(f"{evaluate(m, g, DEFAULT_PARAMS):.3f}" for m in models)])
    for loc, g in LocationRegistry.reference().items():
        w.writerow(["location", loc, f"{g.distance_m:.3f}", *(f"{evaluate(m, g, DEFAULT_PARAMS):.3f}" for m in models)])
    if args.out:
        out.close()


if __name__ == "__main__":
    main()
