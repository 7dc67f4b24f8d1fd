"""Timing comparison of the compiled and pure-Python kernel backends.

Runs the two hot loops (infinite q-product, bilateral series side) and one
end-to-end series evaluation on fixed inputs, printing per-call times and
the speedup. Usage: python benchmarks/bench_kernels.py [repeats]
"""

import sys
import time

from qsix import _kernels_py

try:
    from qsix import _kernels_cy
except ImportError:
    _kernels_cy = None


NUM = (complex(0.15, 0.05), complex(0.3, -0.2), complex(0.25, 0.15),
       complex(0.4, 0.1))
DEN = (complex(1.4, 0.3), complex(1.1, -0.6), complex(0.9, 0.8),
       complex(1.7, 0.2))
Q = complex(0.45, 0.22)
Z = complex(0.8, -0.3)
A = complex(0.35, 0.12)


def bench_qpoch_inf(mod, repeats):
    t0 = time.perf_counter()
    for _ in range(repeats):
        mod.qpoch_inf(complex(0.8, 0.3), complex(0.93, 0.05), 1e-15,
                      10000, 3, 5e-15)
    return (time.perf_counter() - t0) / repeats


def bench_series_side(mod, repeats):
    t0 = time.perf_counter()
    for _ in range(repeats):
        mod.series_side(NUM, DEN, Q, Z, 1, A, True, -1, 1e-15, 10000, 3,
                        1e-12, 5e-15, 64)
    return (time.perf_counter() - t0) / repeats


def bench_eval_t(backend, repeats):
    import importlib
    import os
    os.environ["QSIX_BACKEND"] = backend
    for name in list(sys.modules):
        if name.startswith("qsix") and "_kernels" not in name:
            del sys.modules[name]
    qsix = importlib.import_module("qsix")
    p = qsix.TParams(q=complex(0.5, 0.1), X=complex(1.2, 0.4),
                     B=complex(0.3, 0.1), C=complex(0.05, 0.02),
                     D=complex(0.7, -0.2), E=complex(0.9, 0.3))
    t0 = time.perf_counter()
    for _ in range(repeats):
        qsix.eval_T(p)
    return (time.perf_counter() - t0) / repeats


def main():
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 200
    rows = []
    for label, fn in (("qpoch_inf", bench_qpoch_inf),
                      ("series_side", bench_series_side)):
        t_py = fn(_kernels_py, repeats)
        if _kernels_cy is None:
            rows.append((label, t_py, None))
        else:
            rows.append((label, t_py, fn(_kernels_cy, repeats)))
    t_py = bench_eval_t("python", repeats)
    t_c = bench_eval_t("c", repeats) if _kernels_cy is not None else None
    rows.append(("eval_T end-to-end", t_py, t_c))

    print(f"{'kernel':20s} {'python':>12s} {'compiled':>12s} {'speedup':>8s}")
    for label, t_py, t_c in rows:
        if t_c is None:
            print(f"{label:20s} {t_py * 1e6:10.1f}us {'absent':>12s}")
        else:
            print(f"{label:20s} {t_py * 1e6:10.1f}us {t_c * 1e6:10.1f}us "
                  f"{t_py / t_c:7.1f}x")
    if _kernels_cy is None:
        print("compiled backend not built; install with a C toolchain "
              "to compare")


if __name__ == "__main__":
    main()
