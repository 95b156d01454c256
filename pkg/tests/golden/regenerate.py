"""Rebuild the frozen conversion series.

The dense-tensor series is only written after it agrees with the same series
recomputed from the low-rank factors (stepped one walker at a time).
Run from the repository root: ``python tests/golden/regenerate.py``.
"""

import sys
from pathlib import Path

from qwentangle.config import packaged_config
from qwentangle.experiments import polarization_point, render, run
from qwentangle.state import TwoParticleField, make_localized_pair
from qwentangle.walk import step_split

HERE = Path(__file__).parent


def factor_series(label, cfg):
    coins = cfg.coins()
    f = make_localized_pair(cfg.half_width, label)
    out = []
    for step in range(cfg.steps + 1):
        dense = TwoParticleField(f.half_width, f.expand_factors())
        out.append(polarization_point(dense))
        f = TwoParticleField(
            f.half_width,
            dense.amplitudes,
            tuple((w, step_split(a, coins), step_split(b, coins)) for w, a, b in f.factors),
        )
    return out


def main():
    cfg = packaged_config("conversion")
    result = run(cfg)
    series = result.tables["series"]
    for label in ("A", "B"):
        rows = [r for r in series.rows if r[0] == label]
        oracle = factor_series(label, cfg)
        for (_, step, x, p, n), (xo, po, no) in zip(rows, oracle):
            assert x == xo, (label, step, x, xo)
            assert abs(p - po) < 1e-10 and abs(n - no) < 1e-10, (label, step)
    (HERE / "conversion_series.csv").write_text(render(result, "csv")["series"])
    print("golden files written", file=sys.stderr)


if __name__ == "__main__":
    main()
