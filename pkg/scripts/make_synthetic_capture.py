"""Write a seeded synthetic capture CSV for the 21 reference locations.

    python scripts/make_synthetic_capture.py --seed 20190718 --out capture.csv
"""

import argparse
import sys

from tmbwifi import DEFAULT_PARAMS, LocationRegistry, ModelId
from tmbwifi.measurements import write_capture
from tmbwifi.synthetic import DEFAULT_SEED, simulate_campaign


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--sigma", type=float, default=2.0, help="per-packet RSSI noise (dB)")
    ap.add_argument("--packets", type=int, default=20, help="packets per location and BW/PTX config")
    ap.add_argument("--model", default="wall-factor")
    ap.add_argument("--out", help="output path (default: stdout)")
    args = ap.parse_args(argv)

    records = simulate_campaign(
        LocationRegistry.reference(),
        DEFAULT_PARAMS,
        model=ModelId.parse(args.model),
        sigma_db=args.sigma,
        packets_per_config=args.packets,
        seed=args.seed,
    )
    text = write_capture(records)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
