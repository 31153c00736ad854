"""When does listening pay off for the secondary user?

Sweeps the conferencing exponent β of a cognitive deterministic channel and
shows how the secondary rate moves from the no-cooperation value toward the
value reached after the cross interference is cleared.

    python demos/cognitive_listening.py
"""

from hdcoop.capacity.ldm import ldm_cog_capacity
from hdcoop.codec import optimal_cog_allocation, run_halfduplex_sim
from hdcoop.ldm import LdmCogParams

N1, N2, A1, A2 = 2, 3, 5, 2

print(f"primary n1={N1}, secondary n2={N2}, cross a1={A1}, a2={A2}")
print(" beta  rate  listen δ   simulated")
for beta in range(0, 9):
    p = LdmCogParams(N1, N2, A1, A2, beta)
    cap = ldm_cog_capacity(p)
    sch, alloc, _ = optimal_cog_allocation(p)
    sim = run_halfduplex_sim(p, sch, alloc, 2, trials=10)
    print(f"{beta:5d} {str(cap.value):>5} {str(cap.delta_star):>9}   {sim.rate2} (primary {sim.rate1})")
