#!/usr/bin/env python3
"""Regenerate the three reference tables through the CLI and collect the
CSV artifacts in one directory.

Each table embeds its published reference column, so the rel_dev /
deviation fields in the output are the reproduction check.  Runtime is
dominated by the 2048-bit truth column; pass --bits to trade precision
for speed when eyeballing.
"""

import argparse
import pathlib
import sys
import time

from qcyclo.cli import main as cli_main


def run(outdir, args, name):
    path = outdir / name
    t0 = time.perf_counter()
    rc = cli_main(args + ["--format", "csv", "--output", str(path)])
    dt = time.perf_counter() - t0
    if rc != 0:
        raise SystemExit("%s failed with exit code %d" % (name, rc))
    print("wrote %-22s (%5.1f s)" % (str(path), dt))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--bits", type=int, default=2048,
                    help="precision of the truth column (default 2048)")
    cfg = ap.parse_args(argv)
    outdir = pathlib.Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    run(outdir, ["table", "t1"], "term_statistics.csv")
    run(outdir, ["table", "t3", "--bits", str(cfg.bits)],
        "engine_comparison.csv")
    run(outdir, ["table", "t4"], "conditioning.csv")
    print("done; deviation columns inside the CSVs are the check")
    return 0


if __name__ == "__main__":
    sys.exit(main())
