#!/usr/bin/env python3
"""Decompose the cyclic crossed product (Q(zeta5)/Q, s, c) into its quadratic tower."""

import argparse
import json
from dataclasses import dataclass

from skewlab.crossed import centralizer_identity_check, crossed_product, cyclic_factor_set, decompose_chain, q_central_element
from skewlab.fieldext import catalog


@dataclass
class Config:
    c: str = "2"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c", default=Config.c, help="base scalar, e.g. 2 or 3/2")
    cfg = Config(**vars(ap.parse_args()))

    ext = catalog("Q_zeta5")
    cp = crossed_product(cyclic_factor_set(ext, "s", [cfg.c, 0, 0, 0]))
    ch = decompose_chain(cp)
    u = q_central_element(ch)
    print(json.dumps({
        "c": cfg.c,
        "q": [lv.q for lv in ch.levels],
        "algebra_dims": [a.dim for a in ch.algebras],
        "center_dims": [len(z) for z in ch.centers],
        "checks": [lv.checks for lv in ch.levels],
        "centralizer_identity": centralizer_identity_check(ch),
        "q_central_element": u.to_json(),
        "q_central_power": (u ** ch.levels[-1].q).to_json(),
    }, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
