"""Measure how far the raw image and raw orbit are from being open.

For every arrow basic open b of meet-arity <= 2 this compares points(s_!(b))
with the s-image of points(b) and with its open hull, and likewise for the
closure against the orbit.  Mismatches against the raw sets come from the
finite index set: a model with k singleton classes has no relabelling that
identifies two indices.

    python3 scripts/truncation_gap.py --k 2 3
"""
import argparse
import time
from dataclasses import dataclass, field

from gforge import build_groupoid, load_bundled
from gforge import checks
from gforge.oracle import PointGroupoid


@dataclass
class Config:
    theory: str = "linear_order"
    ks: list[int] = field(default_factory=lambda: [2, 3])
    max_arity: int = 2


def main(cfg: Config) -> None:
    t = load_bundled(cfg.theory)
    print(f"{'k':>2} {'check':<34} {'checked':>8} {'mismatch':>9}")
    for k in cfg.ks:
        start = time.perf_counter()
        G, pg = build_groupoid(t, k), PointGroupoid.build(t, k)
        basics = checks.arrow_basics(G, cfg.max_arity)
        opens = checks.object_opens(G, cfg.max_arity)
        rows = [
            ("s_! vs raw image", checks.check_adjunction_image(G, pg, basics)),
            ("s_! vs open hull of image", checks.check_adjunction_hull(G, pg, basics)),
            ("t_! vs open hull of image", checks.check_target_hull(G, pg, basics)),
            ("closure vs raw orbit", checks.check_closure_orbit(G, pg, opens)),
            ("closure vs open hull of orbit", checks.check_closure_hull(G, pg, opens)),
        ]
        for label, r in rows:
            print(f"{k:>2} {label:<34} {r.checked:>8} {r.failure_count:>9}")
            if r.failures:
                print(f"   e.g. {r.failures[0]}")
        print(f"   ({len(pg.models)} models, {len(pg.isos)} isos, "
              f"{time.perf_counter() - start:.1f}s)")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--theory", default="linear_order")
    ap.add_argument("--k", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--max-arity", type=int, default=2)
    a = ap.parse_args()
    main(Config(a.theory, a.k, a.max_arity))
