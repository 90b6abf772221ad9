"""Compare the compiled and pure-Python elimination kernels.

    python benchmarks/bench_elim.py [--repeat 5]

Workloads are sum matrices from the rank oracle, already cleared to
integer (or Gaussian-integer) rows, so the timings isolate the kernel.
Small-entry matrices (q_N, low-degree GEPs) exercise the compiled
machine-integer path; the Gaussian-rational window has entries of a few
hundred bits and shows the arbitrary-precision path.  Both backends must
return identical (rank, pivot rows, pivot columns).
"""

import argparse
import time

from gepkit import kernels, parse_expr
from gepkit.gridlab import GridBox, sum_matrix
from gepkit.linalg import to_gaussian_integers
from gepkit.selftest import q_N


def workloads():
    for N in (3, 4, 5):
        yield f"q_{N} on {{0..2}}^{N}", sum_matrix(q_N(N), GridBox.cube(N, 0, 2))
    f = parse_expr("t1^3*exp(-1) + 2*t1 - 5")
    yield "real GEP on 0..120", sum_matrix(f, GridBox((0,), (120,)))
    g = parse_expr("t1*exp(i) + (2-i)*exp(-1)")
    yield "gaussian GEP on 0..120", sum_matrix(g, GridBox((0,), (120,)))
    h = parse_expr("(t1^2 - 1/3)*exp(1+i) + t1*exp(-1/2) + 3")
    yield "bigint GEP on 0..60", sum_matrix(h, GridBox((0,), (60,)))


def run(mod, re_rows, im_rows):
    if im_rows is None:
        return mod.echelon_int(re_rows)
    return mod.echelon_gauss(re_rows, im_rows)


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    names = kernels.available_backends()
    print(f"backends: {', '.join(names)} (default {kernels.BACKEND})")
    header = f"{'workload':<24}{'shape':>10}{'bits':>6}{'rank':>6}" + "".join(f"{n:>11}" for n in names)
    if len(names) > 1:
        header += f"{'speedup':>9}"
    print(header)
    for label, M in workloads():
        re_rows, im_rows = to_gaussian_integers(M)
        bits = max(abs(v).bit_length() for row in re_rows + (im_rows or []) for v in row)
        times, outs = {}, {}
        for name in names:
            mod = kernels.get_backend(name)
            times[name], out = best_time(lambda: run(mod, re_rows, im_rows), args.repeat)
            outs[name] = (out[0], tuple(out[1]), tuple(out[2]))
        if len(set(outs.values())) != 1:
            raise SystemExit(f"backends disagree on {label}")
        rank = outs[names[0]][0]
        row = f"{label:<24}{f'{len(M)}x{len(M[0])}':>10}{bits:>6}{rank:>6}"
        row += "".join(f"{times[n] * 1e3:>9.2f}ms" for n in names)
        if len(names) > 1:
            row += f"{times['python'] / times['cython']:>8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
