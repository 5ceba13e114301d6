#!/usr/bin/env python3
"""Print the cohomology tables of every fixture across all three complexes."""

import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from prestacks import fixtures
from prestacks.cli import cohomology_table


def main():
    max_degree = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    skip_heavy = os.environ.get("PRESTACKS_SKIP_HEAVY", "")
    print("fixture\tcomplex\t" + "\t".join("H^%d" % n for n in range(max_degree + 1)))
    for name in sorted(fixtures.BUILDERS):
        if skip_heavy and name == "rank2-fiber":
            continue
        P = fixtures.build(name)
        t0 = time.time()
        for c in ("gs", "nr", "graded"):
            dims = cohomology_table(P, c, max_degree)
            print("%s\t%s\t%s" % (name, c, "\t".join(str(d) for d in dims)))
        print("# %s in %.1fs" % (name, time.time() - t0), file=sys.stderr)


if __name__ == "__main__":
    main()
