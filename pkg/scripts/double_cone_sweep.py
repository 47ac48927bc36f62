"""Solve the double-cone Gram matrix over a range of hyperbolic signatures.

Prints, per (p,q,r), the restart used, residuals, the largest angle error of
the realization, and the six solved entries.

    python scripts/double_cone_sweep.py --max-label 8 --seed 0
"""
import argparse
import itertools
import time

from geodete.coxeter import build_double_cone, is_hyperbolic_signature
from geodete.errors import GeodeteError
from geodete.lorentz import classify_and_realize, solve_double_cone_gram, validate_realization


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--max-label", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    failures = 0
    for pqr in itertools.combinations_with_replacement(range(2, args.max_label + 1), 3):
        if not is_hyperbolic_signature(*pqr):
            continue
        t = time.perf_counter()
        try:
            gram = solve_double_cone_gram(*pqr, seed=args.seed)
            poly, _ = build_double_cone(*pqr)
            rep = validate_realization(classify_and_realize(gram, poly), gram, poly)
        except GeodeteError as exc:
            failures += 1
            print(f"{pqr}: FAILED {exc}")
            continue
        info = gram.solve_info
        entries = " ".join(f"{c:.4f}" for c in gram.solved_entries())
        print(f"{pqr}: restart {info['restart']} minor {info['max_principal_minor']:.1e} "
              f"angle {rep['max_angle_error']:.1e} orth {rep['max_orthogonality_error']:.1e} "
              f"[{entries}] {time.perf_counter() - t:.2f}s")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
