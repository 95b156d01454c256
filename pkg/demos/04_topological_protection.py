# Background
# ----------
#  Detect both bosons at the origin and follow the mode entanglement of what
#  is found there. With one bound state the origin keeps only a single
#  eigenmode; with a 0 and a pi state the two interfere with period 2.
#
# Features shown
# --------------
#  - mode_series on the frozen protection configs
#  - comparison of origin detection probability

from qwentangle.config import packaged_config
from qwentangle.experiments import mode_series
from qwentangle.state import make_localized_pair


def main():
    for name in ("protection_one", "protection_two"):
        cfg = packaged_config(name)
        table, _ = mode_series(make_localized_pair(cfg.half_width, "B"), cfg.coins(), cfg.steps)
        rows = table.rows
        print(f"{name}: P(0,0) at step 60 = {rows[60][1]:.4f}")
        print("  mode negativity, steps 50-60: " + " ".join(f"{r[2]:.2f}" for r in rows[50:61]))


if __name__ == "__main__":
    main()
