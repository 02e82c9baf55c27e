"""Print stratumwise tables and both middle-perversity rows for the cones.

Usage: python3 scripts/run_cone_tables.py [base ...]
"""

import sys

sys.path.insert(0, "src")

from strat_ic import ic
from strat_ic.examples import get_example


def main(bases):
    for base in bases:
        name = "cone-" + base
        space = get_example(name)
        rep = ic.stratified_de_rham(space)
        print(name)
        for p in sorted(rep.rows):
            print("  stratum %d: %s" % (p, list(rep.rows[p])))
        print("  total:     %s" % (list(rep.total),))
        for pname in ("m", "n"):
            res = ic.deligne_construction(space, ic.Perversity.named(pname))
            print("  IH (%s):    %s" % (pname, list(res.betti())))
        print()


if __name__ == "__main__":
    main(sys.argv[1:] or ["s1", "s2", "t2", "genus2"])
