"""Search actions of several triangle groups on small projective groups and extend them.

For every action found: orientability, genus, Theorem 2 freeness and
orientability of M, and for nonorientable actions the double-cover lift.

    python scripts/search_battery.py --max-q 7
"""
import argparse

from geodete.census import orientability_3d
from geodete.extend import extend_thm2
from geodete.permgroup import is_prime, projective_group
from geodete.surface import TriangleSignature, lift_double_cover, search_epimorphisms

SIGNATURES = ((2, 3, 7), (2, 3, 8), (2, 4, 5), (2, 5, 5), (3, 3, 4), (2, 4, 6), (3, 3, 5))


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--max-q", type=int, default=7)
    args = ap.parse_args()
    for q in filter(is_prime, range(5, args.max_q + 1)):
        for kind in ("PSL", "PGL"):
            G = projective_group(q, kind)
            for sig in SIGNATURES:
                for action in search_epimorphisms(TriangleSignature(*sig), G):
                    ext = extend_thm2(action)
                    m_or = orientability_3d(ext)[0] if ext.kernel_free else None
                    kind_s = "orientable genus" if action.orientable else "crosscaps"
                    line = (f"{kind}(2,{q}) |G|={G.order} {sig}: {kind_s} {action.genus}, "
                            f"T2 free={ext.kernel_free} M orientable={m_or}")
                    if not action.orientable:
                        lift = lift_double_cover(action)
                        lifted_or = orientability_3d(extend_thm2(lift.lifted))[0]
                        line += f"; lift genus {lift.lifted.genus}, lifted M orientable={lifted_or}"
                    print(line)


if __name__ == "__main__":
    main()
