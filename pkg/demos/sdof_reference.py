"""A single damped resonator sits exactly on the time-bandwidth limit.

Run: python demos/sdof_reference.py
"""

import numpy as np

from coupled_tbp import SampledSeries, tbp
from coupled_tbp.studies import record_length

for sigma in (0.0125, 0.025, 0.05):
    env = SampledSeries.from_function(lambda t: np.exp(-sigma * t), 1.05 * record_length(sigma), 0.05)
    m = tbp(env)
    print(f"sigma={sigma:<7} bandwidth={m.bandwidth:.6f} (2 sigma={2 * sigma})"
          f"  storage={m.storage_time:.3f} (1/2sigma={1 / (2 * sigma):.1f})  TBP={m.tbp:.6f}")
