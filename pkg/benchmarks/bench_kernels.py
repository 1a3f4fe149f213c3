"""Compare the compiled and pure-Python kernels.

Runs the raw kernels on identical inputs, then times a full shuffle product
in a subprocess per backend (the backend is fixed at import time).

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

from qcc import _pykernels
from qcc.poly import LaurentPoly, alpha

try:
    from qcc import _ckernels
except ImportError:
    _ckernels = None

END_TO_END = """
import time
from qcc.kernels import BACKEND
from qcc.charclass import BasicClassTable, basic_class_commutator, basic_class_sieve
from qcc.cli import load_quiver
q = load_quiver("d5")
t = BasicClassTable(q)
t0 = time.perf_counter()
basic_class_sieve(q, (1, 1, 2, 1, 0), "ktheory", t)
basic_class_commutator(q, (1, 1, 2, 1, 1), (1, 0, 1, 0, 0), (0, 1, 1, 1, 1), "ktheory", t)
print(BACKEND, round(time.perf_counter() - t0, 3))
"""


def workload():
    """A dense-ish product and a Vandermonde division in eight variables."""
    x = [LaurentPoly.var(alpha(1, k)) for k in range(1, 9)]
    p = LaurentPoly.one()
    for i in range(8):
        p = p * (1 + x[i] - x[(i + 3) % 8])
    q = p * (x[0] - x[1])
    lay = q.layout
    terms = q.raw_terms
    half = dict(list(p.raw_terms.items())[: len(p.raw_terms) // 2])
    xshift = lay.shifts[lay.index[alpha(1, 1)]]
    mdelta = lay.encode({alpha(1, 2): 1}) - lay.zero
    return lay.zero, p.in_layout(lay).raw_terms, half, terms, xshift, mdelta


def bench(mod, repeat: int) -> dict[str, float]:
    zero, a, b, q, xshift, mdelta = workload()
    out = {}
    out["mul"] = min(timeit.repeat(lambda: mod.mul(a, b, zero), number=1, repeat=repeat))
    out["div_linear"] = min(timeit.repeat(lambda: mod.div_linear(dict(q), xshift, mdelta, 1),
                                          number=1, repeat=repeat))
    acc = {}
    out["add_into"] = min(timeit.repeat(lambda: mod.add_into(acc, a, 3), number=1, repeat=repeat))
    return out


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    zero, a, b, q, xshift, mdelta = workload()
    if _ckernels is not None:
        assert _ckernels.mul(a, b, zero) == _pykernels.mul(a, b, zero)
        assert _ckernels.div_linear(dict(q), xshift, mdelta, 1) == _pykernels.div_linear(dict(q), xshift, mdelta, 1)
    print(f"workload: {len(a)} x {len(b)} terms, division of {len(q)} terms")
    py = bench(_pykernels, args.repeat)
    cy = bench(_ckernels, args.repeat) if _ckernels is not None else None
    print(f"{'kernel':<12}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for name, t in py.items():
        if cy:
            print(f"{name:<12}{t:>12.4f}{cy[name]:>12.4f}{t / cy[name]:>10.2f}")
        else:
            print(f"{name:<12}{t:>12.4f}{'n/a':>12}{'':>10}")
    print("end to end (D5 K-theory sieve + commutator):")
    for env in ({}, {"QCC_PURE_PYTHON": "1"}):
        res = subprocess.run([sys.executable, "-c", END_TO_END], env={**os.environ, **env},
                             capture_output=True, text=True, check=True)
        print("  " + res.stdout.strip())


if __name__ == "__main__":
    main()
