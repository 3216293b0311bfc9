"""Smallest constant C for the two lower bounds on the box log-integral.

With a = 1/n and s = n (t2 - t1) the integral scales as
(B(s) - 4 log n) / n^2, B(s) = int_{-2}^{2} (2 - |u|) log|s + u| du, so
  C >= -min_{0 <= s <= 10} B(s)             (close boxes)
  C >= sup_{s > 0} max(s, 1) (4 log s - B(s)) (any separation).
Both are maximized on a fine s grid with 30-digit quadrature; the frozen value
rounds the fit up.
"""
import json
import math
import sys

import mpmath as mp

mp.mp.dps = 30


def B(s):
    s = mp.mpf(s)
    f = lambda u: (2 - abs(u)) * mp.log(abs(s + u))
    pts = sorted({mp.mpf(-2), mp.mpf(0), mp.mpf(2)} | ({-s} if s <= 2 else set()))
    return mp.quad(f, pts)


def main(path):
    close = [10 * i / 400 for i in range(401)]
    c_close = max(-B(s) for s in close)
    far = [10 ** (-3 + 6 * i / 600) for i in range(601)]
    c_far = max(max(s, 1) * (4 * mp.log(s) - B(s)) for s in far)
    fit = float(max(c_close, c_far))
    frozen = math.ceil(fit * 1.01 * 100) / 100
    out = {"c_close": float(c_close), "c_far": float(c_far), "fitted": fit, "frozen": frozen,
           "coincident": float(4 * mp.log(2) - 6)}
    with open(path, "w") as f:
        json.dump(out, f, indent=1)
    print(out)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "box_log_constant.json")
