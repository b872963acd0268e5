#!/usr/bin/env python3
"""Exhaustive norm-witness scan of (F_{p^2}/F_p, Frob, c) for every c in F_p^x.

Over a finite field the norm is onto, so every c should come back not-division.
"""

import argparse
import time
from dataclasses import dataclass, field

from skewlab.abelianchain import AbelianChainParams, build_abelian_chain, division_probe
from skewlab.fieldext import catalog
from skewlab.skewpoly import SearchSpec


@dataclass
class Config:
    primes: list = field(default_factory=lambda: [3, 5, 7])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", type=int, nargs="+", default=Config().primes)
    cfg = Config(**vars(ap.parse_args()))
    bad = 0
    for p in cfg.primes:
        ext = catalog(f"Fp2({p})")
        t0 = time.perf_counter()
        for c in range(1, p):
            rep = division_probe(build_abelian_chain(AbelianChainParams(ext, c, [])), SearchSpec(mode="exhaustive"))
            lv = rep.levels[0]
            wit = lv.witness.to_json() if lv.witness is not None else None
            print(f"p={p} c={c}: {rep.verdict} witness={wit} examined={lv.examined}")
            bad += rep.verdict != "not-division"
        print(f"p={p}: {time.perf_counter() - t0:.2f}s")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
