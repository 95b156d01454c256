# Background
# ----------
#  Quasi-energy bands of the single-coin walk and of the split-step walk,
#  and the winding number that separates the two gapped phases.
#
# Features shown
# --------------
#  - band_structure / gap_classification / winding_number
#  - a coarse text rendering of the (theta1, theta2) phase diagram

from math import pi

import numpy as np

from qwentangle.topology import band_structure, gap_classification, phase_diagram_table, winding_number


def simple_walk():
    print("single-coin walk: gap to 0 and to pi")
    for theta in (0, pi / 2, pi, 3 * pi / 2, 2 * pi):
        a = band_structure(theta, 0.0, 512)
        print(f"  theta={theta:5.3f}  gap0={a.gap0:.3f}  gap_pi={a.gap_pi:.3f}  E(k=0)={a.bands[256, 0]:+.3f}")


def split_step():
    print("split-step walk: phase and winding")
    for t1, t2 in [(pi / 2, pi / 4), (pi / 4, pi / 2), (pi / 2, pi / 2)]:
        phase = gap_classification(t1, t2)
        w = winding_number(band_structure(t1, t2)) if phase.gapped else "-"
        print(f"  theta1={t1:.3f} theta2={t2:.3f}  {phase.value:14s} W={w}")


def phase_map(n=16):
    # '#' marks W=1, '.' W=0, ' ' gapless
    t = phase_diagram_table(n, 256)
    w = np.array([{None: " ", 0: ".", 1: "#"}[v] for v in t.column("W")]).reshape(n, n)
    print("phase diagram, theta1 down, theta2 across, both over (0, 2pi)")
    for row in w:
        print("  " + "".join(row))


def main():
    simple_walk()
    split_step()
    phase_map()


if __name__ == "__main__":
    main()
