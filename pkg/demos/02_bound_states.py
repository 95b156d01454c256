# Background
# ----------
#  Let theta2 drift across the lattice. Wherever its profile crosses a
#  gap-closing line, the walk hosts a localized eigenstate at quasi-energy 0
#  or pi. Two crossings give one of each.
#
# Features shown
# --------------
#  - CoinProfile.boundary and crossed_lines
#  - find_bound_states on the ring-closed real-space step operator

from math import pi

from qwentangle.config import packaged_config
from qwentangle.topology import crossed_lines, find_bound_states
from qwentangle.walk import CoinProfile


def describe(name):
    coins = packaged_config(name).coins()
    print(f"{name}: theta1={coins.theta1:.4f}, theta2 {coins.theta2_minus:+.4f} -> {coins.theta2_plus:+.4f}")
    for t2, kind in crossed_lines(coins):
        print(f"  crosses theta2={t2:+.4f}, gap closes at {kind}")
    report = find_bound_states(coins, 80)
    for b in report.states:
        label = "0" if abs(b.quasi_energy) < 1e-3 else "pi"
        print(f"  state at E={label:2s}  center x={b.center:+d}  decay length {b.decay_length:.2f} sites  ipr {b.ipr:.3f}")
        prob = b.state.probabilities()
        core = prob[80 + b.center - 4 : 80 + b.center + 5]
        print("    |psi|^2 near center: " + " ".join(f"{p:.3f}" for p in core))


def main():
    describe("protection_one")
    describe("protection_two")
    print("single zone (theta1=pi/4, theta2 from -pi/8 to pi/8):")
    report = find_bound_states(CoinProfile.boundary(pi / 4, -pi / 8, pi / 8), 80)
    print(f"  {len(report)} bound states")


if __name__ == "__main__":
    main()
