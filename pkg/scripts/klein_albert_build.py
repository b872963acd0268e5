#!/usr/bin/env python3
"""Build the Klein-four chain over Q(sqrt2, sqrt3), check it, and probe it."""

import argparse
import json
import time
from dataclasses import asdict, dataclass

from skewlab.abelianchain import (
    AbelianChainParams,
    build_abelian_chain,
    division_probe,
    extract_crossed_product,
    verify_center_is_base,
    verify_inner_order,
)
from skewlab.crossed import decompose_chain, validate_cocycle
from skewlab.fieldext import catalog
from skewlab.skewpoly import SearchSpec


@dataclass
class Config:
    c0: str = "3"
    l1: str = "-1"
    height: int = 2
    round_trip: bool = True


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c0", default=Config.c0)
    ap.add_argument("--l1", default=Config.l1)
    ap.add_argument("--height", type=int, default=Config.height)
    ap.add_argument("--no-round-trip", dest="round_trip", action="store_false")
    cfg = Config(**vars(ap.parse_args()))

    t0 = time.perf_counter()
    ext = catalog("Q_sqrt2_sqrt3")
    dom = ext.domain
    ch = build_abelian_chain(AbelianChainParams(ext, dom.convert(cfg.c0), [dom.convert(cfg.l1)]))
    out = {
        "config": asdict(cfg),
        "dims": [a.dim for a in ch.algebras],
        "center_dims": [len(z) for z in ch.centers],
        "exponents": [list(lv.exponents) for lv in ch.levels],
        "inner_order": [verify_inner_order(ch, i) for i in range(len(ch.levels))],
        "center_is_base": verify_center_is_base(ch)["ok"],
        "probe": division_probe(ch, SearchSpec(bound=cfg.height)).verdict,
    }
    if cfg.round_trip:
        cp, cert = extract_crossed_product(ch)
        back = decompose_chain(cp, ch.series)
        out["round_trip"] = {
            "cocycle_ok": validate_cocycle(cp.factor_set).ok,
            "certificate": cert.verify(),
            "c": [lv.c.to_json() for lv in back.levels],
        }
    out["seconds"] = round(time.perf_counter() - t0, 3)
    print(json.dumps(out, indent=2, sort_keys=True, default=str))


if __name__ == "__main__":
    main()
