"""Deterministic model, end to end: capacity, optimal schedule, and a bit-level run.

    python demos/ldm_walkthrough.py [n_d n_i n_c]
"""

import sys

from hdcoop.capacity.ldm import ldm_sum_capacity, sum_bounds
from hdcoop.codec import optimal_allocation, run_halfduplex_sim
from hdcoop.ldm import LdmSymParams


def main(argv):
    nd, ni, nc = (int(a) for a in argv) if argv else (2, 4, 8)
    p = LdmSymParams(nd, ni, nc)
    cap = ldm_sum_capacity(p)
    print(f"channel n_d={nd} n_i={ni} n_c={nc}")
    for k, b in enumerate(sum_bounds(p), 1):
        print(f"  bound l{k}(δ) = ({b.slope}·δ + {b.offset}) / (δ + 2)")
    where = "any δ" if cap.delta_any else f"δ = {cap.delta_star}"
    print(f"sum capacity {cap.value} at {where}")

    sch, alloc, nominal = optimal_allocation(p)
    print(f"block: {sch.l_a} mode-A, {sch.l_b} mode-B, {sch.l_c} mode-C slots")
    rates = " ".join(f"{k}={v}" for k, v in alloc.source1.as_dict().items())
    print(f"per-source rates in mode A: {rates}")
    print(f"pipes: source-to-source {alloc.bp_ss}, source-to-other-destination {alloc.bp_sd}; relay {alloc.delta_r}")

    for blocks in (1, 4, 16, 64):
        r = run_halfduplex_sim(p, sch, alloc, blocks, trials=20, seed=1)
        print(f"{blocks:3d} blocks: delivered {r.sum_rate} ({float(r.sum_rate):.4f}), errors {r.errors}")
    print(f"the gap to {nominal} is the relay data still in flight after the last block")


if __name__ == "__main__":
    main(sys.argv[1:])
