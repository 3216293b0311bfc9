"""Bounded-Lipschitz distance reference values by linear programming.

Each instance is a pair of signed measures on [-5, 5] with atoms and cell
breaks on the 0.05 node grid. The sup over |f| <= 1, Lip(f) <= 1 is solved as
an LP over f on a grid ten times finer, with HiGHS.
"""
import json
import sys

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import diags, vstack

R = 5.0
COARSE = 0.05
REFINE = 10


def random_measure(rng):
    nodes = int(round(2 * R / COARSE))
    atoms = []
    for i in rng.choice(nodes + 1, size=rng.integers(0, 5), replace=False):
        atoms.append({"x": -R + COARSE * int(i), "mass": float(rng.uniform(-1, 1))})
    cells = int(rng.integers(0, 9))
    breaks, values = [], []
    if cells:
        idx = np.sort(rng.choice(nodes + 1, size=cells + 1, replace=False))
        breaks = [-R + COARSE * int(i) for i in idx]
        values = [float(v) for v in rng.normal(0, 0.5, size=cells)]
    return {"atoms": atoms, "density": {"breaks": breaks, "values": values}}


def weights(mu, h, m):
    w = np.zeros(m + 1)
    for a in mu["atoms"]:
        j = (a["x"] + R) / h
        lo = int(np.floor(j + 1e-9))
        t = j - lo
        if t < 1e-9:
            w[lo] += a["mass"]
        else:
            w[lo] += a["mass"] * (1 - t)
            w[lo + 1] += a["mass"] * t
    b, v = mu["density"]["breaks"], mu["density"]["values"]
    for c in range(len(v)):
        j0 = int(round((b[c] + R) / h))
        j1 = int(round((b[c + 1] + R) / h))
        # hat integrals of a constant over whole fine intervals
        for j in range(j0, j1):
            w[j] += v[c] * h / 2
            w[j + 1] += v[c] * h / 2
    return w


def distance(a, b):
    m = int(round(2 * R / COARSE)) * REFINE
    h = 2 * R / m
    w = weights(a, h, m) - weights(b, h, m)
    d = diags([-np.ones(m), np.ones(m)], [0, 1], shape=(m, m + 1))
    A = vstack([d, -d]).tocsc()
    res = linprog(-w, A_ub=A, b_ub=np.full(2 * m, h), bounds=[(-1, 1)] * (m + 1), method="highs")
    assert res.status == 0, res.message
    return -res.fun


def main(path):
    rng = np.random.default_rng(20240611)
    out = {"R": R, "grid_step": COARSE, "instances": []}
    for _ in range(100):
        a, b = random_measure(rng), random_measure(rng)
        out["instances"].append({"a": a, "b": b, "value": distance(a, b)})
    with open(path, "w") as f:
        json.dump(out, f, indent=1)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "kr_oracle.json")
