"""Compare the compiled and pure-Python kernels on lexing and score accumulation.

    python benchmarks/bench_kernels.py [--repeat 5] [--scale 40]
"""

import argparse
import random
import statistics
import time
from array import array
from pathlib import Path

from codegraph import _pykernels

try:
    from codegraph import _kernels
except ImportError:
    _kernels = None

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "shop"


def corpus(scale: int) -> str:
    sources = [p.read_text("utf-8") for p in sorted(FIXTURE.rglob("*.java"))]
    return "\n".join(sources) * scale


def postings(n_chunks: int, n_terms: int, rng: random.Random):
    out = []
    for _ in range(n_terms):
        ids = sorted(rng.sample(range(n_chunks), rng.randint(1, n_chunks // 4)))
        out.append((rng.random(), array("i", ids), array("d", [rng.random() for _ in ids])))
    return out


def best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        started = time.perf_counter()
        fn()
        times.append(time.perf_counter() - started)
    return min(times), statistics.median(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--scale", type=int, default=40, help="copies of the fixture sources to lex")
    args = ap.parse_args()

    text = corpus(args.scale)
    posts = postings(20000, 8, random.Random(0))
    backends = [("python", _pykernels)] + ([("cython", _kernels)] if _kernels else [])
    if _kernels:
        assert _kernels.lex_java(text) == _pykernels.lex_java(text)
        assert list(_kernels.accumulate_scores(posts, 20000)) == list(
            _pykernels.accumulate_scores(posts, 20000))

    print(f"lex: {len(text):,} chars; scores: 20,000 chunks x 8 query terms")
    print(f"{'kernel':<10}{'backend':<9}{'best s':>10}{'median s':>10}")
    results = {}
    for kernel, call in (
        ("lex_java", lambda m: m.lex_java(text)),
        ("scores", lambda m: m.accumulate_scores(posts, 20000)),
    ):
        for name, mod in backends:
            b, med = best(lambda: call(mod), args.repeat)
            results[kernel, name] = b
            print(f"{kernel:<10}{name:<9}{b:>10.4f}{med:>10.4f}")
        if _kernels:
            print(f"{'':<10}speedup {results[kernel, 'python'] / results[kernel, 'cython']:>9.1f}x")
    if not _kernels:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
