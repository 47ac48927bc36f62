"""Klein's quartic end to end: PGL(2,7) on the genus 3 surface, both extensions, census.

    python scripts/klein_quartic.py [--out klein.cert.json]
"""
import argparse
from pathlib import Path

from geodete.jobs import catalog_job
from geodete.pipeline import run_job, summary


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--out", default="klein-pgl27.cert.json")
    args = ap.parse_args()
    status, cert, text = run_job(catalog_job("klein-pgl27"))
    if cert is None:
        raise SystemExit(text)
    Path(args.out).write_text(text)
    print("\n".join(summary(cert)))
    for c in cert.candidates:
        print(f"  candidate x={c.polyhedron.label('r2', 'r4')} kernel_free={c.kernel_free}")
    for rec in cert.corollaries:
        print(f"  corollary 2: class of size {rec['class_size']} -> {rec['result_kind']}, "
              f"centralizer order {rec['centralizer_order']}")
    raise SystemExit(status)


if __name__ == "__main__":
    main()
