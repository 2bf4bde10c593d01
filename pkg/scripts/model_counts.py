"""Enumerate indexed models of the bundled theories and compare with closed forms.

    python3 scripts/model_counts.py --max-k 4
"""
import argparse
import time
from dataclasses import dataclass
from math import comb

from gforge import BUNDLED, load_bundled
from gforge.oracle import PointGroupoid, enumerate_models, estimate_structures


@dataclass
class Config:
    max_k: int = 3
    isos: bool = False


def fubini(n: int) -> int:
    a = [1]
    for m in range(1, n + 1):
        a.append(sum(comb(m, i) * a[m - i] for i in range(1, m + 1)))
    return a[n]


def total_orders(k: int) -> int:
    return sum(comb(k, s) * fubini(s) for s in range(1, k + 1))


def main(cfg: Config) -> None:
    print(f"{'theory':<20} {'k':>2} {'structures':>11} {'models':>7} {'expected':>9} "
          f"{'isos':>6} {'seconds':>8}")
    for name in BUNDLED:
        t = load_bundled(name)
        ks = range(1, cfg.max_k + 1) if t.sorts else [1]
        for k in ks:
            start = time.perf_counter()
            n = len(enumerate_models(t, k))
            isos = len(PointGroupoid.build(t, k).isos) if cfg.isos else ""
            took = time.perf_counter() - start
            expected = total_orders(k) if name == "linear_order" else ""
            print(f"{name:<20} {k:>2} {estimate_structures(t, k):>11} {n:>7} {expected!s:>9} "
                  f"{isos!s:>6} {took:>8.2f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-k", type=int, default=3)
    ap.add_argument("--isos", action="store_true", help="also build the point groupoid")
    a = ap.parse_args()
    main(Config(a.max_k, a.isos))
