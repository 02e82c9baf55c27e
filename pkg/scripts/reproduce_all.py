"""Run every shipped comparison scenario and write the report.

Usage: python3 scripts/reproduce_all.py [out.json]
Honors STRAT_IC_THREADS.  Exit status 0 only if every gating row passes.
"""

import sys

sys.path.insert(0, "src")

from strat_ic.cli import canonical_json, reproduce_paper


def main(argv):
    bundle = reproduce_paper()
    text = canonical_json(bundle.to_dict())
    if argv:
        with open(argv[0], "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if bundle.ok() else 1


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
