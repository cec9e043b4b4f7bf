"""
The quantum Gallager function
=============================

For s in (-1, 0] the function E0(s, prior) = -log Tr(sum_x p_x rho_x^(1/(1+s)))^(1+s)
is zero at s = 0, nonpositive, nonincreasing toward s = -1, and its slope
at zero equals the mutual information.
"""

import numpy as np

from cqconverse import CqChannel, e0, min_e0_over_prior, mutual_info
from cqconverse.channel import pure_state
from cqconverse.info import e0_slope_at_zero

ch = CqChannel((pure_state([1, 0]), pure_state([1, 1]), np.eye(2) / 2))
prior = np.array([0.5, 0.3, 0.2])

for s in (-0.9, -0.6, -0.3, -0.1, 0.0):
    print(f"s={s:+.1f}  E0={e0(ch, prior, s).value:+.6f}")

print("slope at 0:", e0_slope_at_zero(ch, prior), " I(prior):", mutual_info(ch, prior))

# the converse needs the prior that makes E0 smallest at each s
for s in (-0.8, -0.4):
    res = min_e0_over_prior(ch, s)
    print(f"s={s}: min E0 {res.value:.6f} at prior {np.round(res.pi_star, 4)}")
