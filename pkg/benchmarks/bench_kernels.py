"""Time the support scan under the compiled and pure-Python backends.

    python benchmarks/bench_kernels.py [--atoms 8] [--maps 200] [--repeat 3]

Each map is a random multiplicity-3 embedding out of ``T_n``; the scan runs
over every feasible staircase support (OC) and every strict support (OP).
"""
import argparse
import random
import time

from nestlab import kernels
from nestlab.algebra import triangular
from nestlab.embedding import _encoded, _fmap
from nestlab.enumeration import random_embedding


def run(impl, jobs, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = [impl.scan_images(rows, cols, offsets, fmap, m, mode) for rows, cols, offsets, fmap, m, mode in jobs]
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--atoms", type=int, default=8)
    ap.add_argument("--maps", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    D = triangular(args.atoms)
    jobs = []
    for _ in range(args.maps):
        phi = random_embedding(rng, D, max_mu=3, codomain_atoms=args.atoms + 4)
        for strict, mode in ((False, kernels.STAIRCASE), (True, kernels.STRICT)):
            _, rows, cols, offsets = _encoded(D, strict)
            jobs.append((rows, cols, offsets, _fmap(phi), phi.codomain.num_atoms, mode))
    n_oc = len(_encoded(D, False)[0])
    n_op = len(_encoded(D, True)[0])
    print(f"T_{args.atoms}: {n_oc} staircase supports, {n_op} strict supports, {len(jobs)} scans")

    results = {}
    for name, impl in sorted(kernels.backends().items()):
        secs, out = run(impl, jobs, args.repeat)
        results[name] = (secs, out)
        print(f"{name:>7}: {secs:.4f} s")
    outs = {tuple(int(x) for x in out) for _, out in results.values()}
    assert len(outs) == 1, "backends disagree"
    if "cython" in results:
        print(f"speedup: {results['python'][0] / results['cython'][0]:.1f}x")


if __name__ == "__main__":
    main()
