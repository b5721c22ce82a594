"""
Consumed power and the energy-efficient operating point
========================================================

A base station does not consume what it radiates. The consumed-power
model here is affine in the PA input power plus a per-antenna circuit
term and a static term; on a Shannon AWGN link that makes bits/J a
unimodal function of transmit power with an interior optimum.
"""

import numpy as np

from hsdpa_ee import (
    PowerModelParams,
    optimal_shannon_power,
    shannon_ee,
    shannon_se,
    total_power,
    watt_to_dbm,
)

# -- the consumed-power model at a glance ---------------------------------
pm1 = PowerModelParams()            # single active antenna
pm2 = PowerModelParams(m_a=2)       # both antennas powered (MIMO)

for p_tx in (0.0, 2.0, 10.0, 19.9526):
    print(f"p_tx = {p_tx:8.4f} W -> consumed {total_power(p_tx, pm1):8.3f} W"
          f" (1 antenna), {total_power(p_tx, pm2):8.3f} W (2 antennas)")

# note the overhead floor: even at p_tx = 0 the site draws 12 or 18 W,
# which is what makes "more power" sometimes the efficient choice

# -- spectral vs energy efficiency on the AWGN abstraction ----------------
n0w = 1e-12                          # noise+interference power referred to RX
grid = np.linspace(1e-3, 4.0, 20_000)
se = shannon_se(grid, n0w)
ee1 = shannon_ee(grid, pm1, n0w)
ee2 = shannon_ee(grid, pm2, n0w)

k1, k2 = int(np.argmax(ee1)), int(np.argmax(ee2))
print()
print(f"EE peak, 1 antenna: {ee1[k1]:,.0f} bits/J at "
      f"{grid[k1]:.4f} W ({watt_to_dbm(grid[k1]):.2f} dBm), SE {se[k1]:.2f} b/s/Hz")
print(f"EE peak, 2 antennas: {ee2[k2]:,.0f} bits/J at "
      f"{grid[k2]:.4f} W ({watt_to_dbm(grid[k2]):.2f} dBm), SE {se[k2]:.2f} b/s/Hz")

# golden-section refinement of the same optimum
for pm, label in ((pm1, "1 antenna"), (pm2, "2 antennas")):
    p_star = optimal_shannon_power(pm, n0w, p_max_w=4.0)
    print(f"golden section, {label}: p* = {p_star:.6f} W")

# doubling the circuit draw pushes the optimum to higher transmit power:
# the radio has to "earn" its overhead before efficiency peaks
