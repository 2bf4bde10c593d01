"""Print the left adjoint of the source map on the total-order worked examples.

    python3 scripts/adjoint_examples.py --k 5
"""
import argparse
import time

from gforge import build_groupoid, load_bundled
from gforge.parser import parse_open

EXAMPLES = [
    "leq1(1,2)",
    "leq2(1,2)",
    "alpha.X(1)=2",
    "leq2(1,2) & alpha.X(1)=4",
    "leq2(1,2) & alpha.X(1)=1",
]


def main(k: int, full: bool) -> None:
    G = build_groupoid(load_bundled("linear_order"), k)
    for expr in EXAMPLES:
        start = time.perf_counter()
        out = G.source_lower(parse_open(expr, G.arrows))
        took = time.perf_counter() - start
        text = str(out)
        if not full and len(text) > 100:
            text = text[:100] + " ..."
        print(f"{expr:<26} -> {len(out.terms):>4} meets  ({took * 1000:.1f} ms)")
        print(f"    {text}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--full", action="store_true", help="print the whole join")
    a = ap.parse_args()
    main(a.k, a.full)
