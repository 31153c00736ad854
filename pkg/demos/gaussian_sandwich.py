"""Where the Gaussian scheme sits between its bounds, at a few operating points.

    python demos/gaussian_sandwich.py
"""

import math

from hdcoop.capacity.gauss import GaussSymParams, gaussian_sum_inner_outer

POINTS = [
    (1e4, 1e2, 1e3, 0.0),
    (1e4, 1e2, 1e8, 0.0),
    (1e2, 1e5, 1e8, math.pi / 2),
    (1e3, 1e3, 1e6, math.pi),
]

print(f"{'snr':>6} {'inr':>6} {'cnr':>6} {'θ':>5} reg  c_bar   achiev  outer   coop")
for snr, inr, cnr, th in POINTS:
    b = gaussian_sum_inner_outer(GaussSymParams(snr, inr, cnr, th))
    print(
        f"{snr:6.0e} {inr:6.0e} {cnr:6.0e} {th:5.2f} {b.region:3d} "
        f"{b.c_bar:7.2f} {b.achievable:7.2f} {b.outer:7.2f}  {'on' if b.cooperation else 'off'}"
    )
    tight = min(b.margins().items(), key=lambda kv: kv[1])
    print(f"{'':29}tightest margin: {tight[0]} = {tight[1]:.3f}")
