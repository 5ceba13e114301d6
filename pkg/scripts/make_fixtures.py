#!/usr/bin/env python3
"""Regenerate the fixture documents under fixtures/."""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from prestacks import fixtures
from prestacks.io import load_prestack, save_prestack


def main():
    outdir = os.path.join(os.path.dirname(__file__), "..", "fixtures")
    os.makedirs(outdir, exist_ok=True)
    for name in sorted(fixtures.BUILDERS):
        P = fixtures.build(name)
        bad = P.validate()
        if bad is not None:
            raise SystemExit("%s does not validate: %s" % (name, bad))
        path = os.path.join(outdir, name + ".json")
        save_prestack(P, path)
        back = load_prestack(path)
        if back.validate() is not None:
            raise SystemExit("%s round trip fails validation" % name)
        print("wrote", path)


if __name__ == "__main__":
    main()
