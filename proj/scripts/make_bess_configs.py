#!/usr/bin/env python3
"""Writes the synthetic 8-node BESS configs under configs/.

Radial feeder with PV at nodes 3 and 5 and batteries at nodes 2 and 6. Load
peaks in the early evening with a smaller morning bump; PV follows a squared
half-sine between 06:00 and 19:00. All quantities are per-unit.
"""

import json
import math
import pathlib

LINES = [
    (0, 1, 0.02, 0.02),
    (1, 2, 0.02, 0.02),
    (2, 3, 0.03, 0.03),
    (3, 4, 0.03, 0.03),
    (4, 5, 0.03, 0.03),
    (2, 6, 0.03, 0.03),
    (6, 7, 0.03, 0.03),
    (7, 8, 0.03, 0.03),
]
PEAK_LOAD = [0.02, 0.03, 0.02, 0.03, 0.02, 0.03, 0.02, 0.02]
PV_NODES = {3: 0.17, 5: 0.17}
Q_RATIO = 0.3


def load_shape(h):
    return 0.55 + 0.25 * math.exp(-(((h - 19) / 3) ** 2)) + 0.15 * math.exp(-(((h - 8) / 2.5) ** 2))


def pv_shape(h):
    return max(0.0, math.sin(math.pi * (h - 6) / 13)) ** 2


def case(slots, label):
    hours = [24.0 * t / slots for t in range(slots)]
    r6 = lambda v: round(v, 6)
    pv = [[r6(PV_NODES.get(n, 0.0) * pv_shape(h)) for n in range(1, 9)] for h in hours]
    load_p = [[r6(PEAK_LOAD[n] * load_shape(h)) for n in range(8)] for h in hours]
    load_q = [[r6(Q_RATIO * v) for v in row] for row in load_p]
    battery = {"p_min": 0.0, "p_max": 0.04, "e_max": 0.2, "e0": 0.0,
               "delta_max": 0.05, "dev_max": 1e-3, "lip_ratio": 1.5}
    return {
        "kind": "bess",
        "feeder": {"v_source": 1.0,
                   "lines": [{"parent": p, "child": c, "r": r, "x": x} for p, c, r, x in LINES]},
        "schedule": {"slots": slots, "dt": 1.0, "v_min": 0.95, "v_max": 1.05, "w_v": 10.0,
                     "data_label": label, "pv": pv, "load_p": load_p, "load_q": load_q},
        "epsilon": 0.1,
        "batteries": [dict(node=2, **battery), dict(node=6, **battery)],
        "scheme": "benchmark",
        "parametric": {"a": [9.0, 10.0], "b": [4.0, 5.0]},
        "engine": {"tol": 1e-2, "max_iter": 500},
    }


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "configs"
    out.mkdir(exist_ok=True)
    for name, slots in (("bess_8node.json", 24), ("bess_6slot.json", 6)):
        label = f"synthetic 8-node feeder, {slots} slots (not the published dataset)"
        (out / name).write_text(json.dumps(case(slots, label), indent=1) + "\n")


if __name__ == "__main__":
    main()
