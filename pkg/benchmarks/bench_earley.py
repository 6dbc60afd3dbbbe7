"""Compare the pure-Python and compiled Earley recognizer kernels.

    python3 benchmarks/bench_earley.py [--programs 200] [--depth 14] [--repeat 5]

Both kernels are run on the same sampled programs of each grammar; their chart
results are checked for equality before timing.  Full ``earley_parse`` time
(kernel plus tree recovery) is reported for the default kernel.
"""

from __future__ import annotations

import argparse
import statistics
import time

from lltrans import _earley_py
from lltrans.mathqa import build_dsl_suite, load_fixture
from lltrans.parsing import KERNEL, earley_parse, recognize
from lltrans.sampler import min_heights, sample
from lltrans.trees import frontier

try:
    from lltrans._earley_ext import recognize as compiled_recognize
except ImportError:  # pragma: no cover - depends on the build
    compiled_recognize = None


def programs(g, n, depth, seed):
    out, s = [], seed
    while len(out) < n:
        toks = frontier(sample(g, depth, s))
        s += 1
        if toks:
            out.append(toks)
    return out


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--programs", type=int, default=200)
    ap.add_argument("--depth", type=int, default=14, help="sampling depth for the MathQA grammars")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    suite = build_dsl_suite()
    grammars = {
        "mathqa (LR(1))": (suite.lr1, args.depth),
        "mathqa (LL(1))": (suite.ll1, args.depth),
        "fig4": (load_fixture("fig4.grammar"), None),
    }
    print(f"default kernel: {KERNEL}")
    if compiled_recognize is None:
        print("compiled kernel not built; only the pure kernel is timed")
    header = f"{'grammar':<16}{'tokens':>8}{'pure s':>10}{'compiled s':>12}{'speedup':>9}{'parse s':>10}"
    print(header)
    print("-" * len(header))
    for name, (g, depth) in grammars.items():
        depth = depth or max(min_heights(g).values()) + 6
        inputs = programs(g, args.programs, depth, args.seed)
        ntok = sum(len(t) for t in inputs)
        if compiled_recognize is not None:
            for toks in inputs:
                a = recognize(g, toks, _earley_py.recognize)
                b = recognize(g, toks, compiled_recognize)
                assert sorted(a[0]) == sorted(b[0]) and a[1:] == b[1:], "kernels disagree"
        pure, _ = best_of(lambda: [recognize(g, t, _earley_py.recognize) for t in inputs], args.repeat)
        if compiled_recognize is not None:
            comp, _ = best_of(lambda: [recognize(g, t, compiled_recognize) for t in inputs], args.repeat)
            comp_s, speed = f"{comp:12.3f}", f"{pure / comp:8.1f}x"
        else:
            comp_s, speed = f"{'-':>12}", f"{'-':>9}"
        parse, _ = best_of(lambda: [earley_parse(g, t) for t in inputs], args.repeat)
        print(f"{name:<16}{ntok:>8}{pure:10.3f}{comp_s}{speed}{parse:10.3f}")


if __name__ == "__main__":
    main()
