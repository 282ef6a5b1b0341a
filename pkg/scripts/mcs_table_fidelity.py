"""Build the MCS table from the synthetic record set and list every cell's mode
next to the reference mode.

    python scripts/mcs_table_fidelity.py [--n 10000] [--out table.csv]
"""

import argparse
import time

from tmbwifi import build_table
from tmbwifi import reference
from tmbwifi.rate_model import RssiBin, mode_of
from tmbwifi.synthetic import mode_table_records


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10_000, help="records per cell")
    ap.add_argument("--out", help="also write the table CSV here")
    args = ap.parse_args(argv)

    t0 = time.perf_counter()
    records = mode_table_records(args.n)
    table = build_table(records)
    elapsed = time.perf_counter() - t0

    worst = 0.0
    print(f"{'bin':>11} {'BW':>3} {'PTX':>3}   reference        built")
    for low, bw, ptx, mcs, nss, pct in reference.MCS_MODES:
        m = mode_of(table.cell(low, bw, ptx))
        got = 100 * m.probability
        worst = max(worst, abs(got - pct)) if (m.mcs, m.nss) == (mcs, nss) else float("inf")
        print(f"{RssiBin(low).label:>11} {bw:>3} {ptx:>3}   MCS {mcs}/{nss}SS {pct:6.2f}%   "
              f"MCS {m.mcs}/{m.nss}SS {got:6.2f}%")
    print(f"{len(records)} records, {len(table.cells)} cells, worst |diff| {worst:.4f}%, {elapsed:.2f} s")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            table.to_csv(fh)


if __name__ == "__main__":
    main()
