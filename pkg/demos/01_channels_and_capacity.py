"""
Channels, priors and Holevo capacity
====================================

A classical-quantum channel sends each input letter to a density matrix.
We build a few small channels and find the prior that maximizes the
Holevo mutual information.
"""

import math

import numpy as np

from cqconverse import CqChannel, capacity, mutual_info
from cqconverse.channel import average_state, pure_state

# two non-orthogonal pure states: |0> and |+>
zero_plus = CqChannel((pure_state([1, 0]), pure_state([1, 1])))
print("output dimension", zero_plus.dim, "alphabet size", zero_plus.a)

# the average output state under the uniform prior
print(np.round(average_state(zero_plus, [0.5, 0.5]).real, 4))

# mutual information along a line of priors
for p in np.linspace(0, 1, 5):
    print(f"p={p:.2f}  I={mutual_info(zero_plus, [p, 1 - p]):.6f}")

# the maximizer is symmetric for this channel
res = capacity(zero_plus)
print("capacity", res.value, "nats at prior", res.pi_star, "after", res.iterations, "iterations")

# a classical channel embeds as diagonal states and recovers Shannon capacity
bsc = CqChannel.classical([[0.9, 0.1], [0.1, 0.9]])
shannon = math.log(2) + 0.9 * math.log(0.9) + 0.1 * math.log(0.1)
print("BSC capacity", capacity(bsc).value, "closed form", shannon)
