"""
Lower bounds on decoding error
==============================

Any decoder for M codewords errs on average with probability at least
1 - Tr(sum_m rho_m^(1/beta))^beta / M. Averaging over codebooks and
optimizing the prior gives a bound that depends only on rate and blocklength.
"""

import math

import numpy as np

from cqconverse import Codebook, CqChannel, average_error, capacity, lemma1_bound, sc_exponent, theorem1_bound
from cqconverse.channel import pure_state
from cqconverse.verify import helstrom_min_error, random_povm

ch = CqChannel((pure_state([1, 0]), pure_state([1, 1])))

# two codewords of length 1: compare with the optimal measurement
cb = Codebook(1, [[0], [1]])
pe, _ = helstrom_min_error(*ch.states)
print("optimal error", pe)
for beta in (0.3, 0.5, 0.8, 1.0):
    print(f"beta={beta}  bound={lemma1_bound(ch, cb, beta).value:.6f}")

# a length-2 codebook with four words
cb2 = Codebook(2, [[0, 0], [0, 1], [1, 0], [1, 1]])
print("rate", cb2.rate, "nats; bound at beta=0.5:", lemma1_bound(ch, cb2, 0.5).value)
rng = np.random.default_rng(0)
print("a random measurement errs with", average_error(ch, cb2, random_povm(4, 4, rng)))

# above capacity the bound tends to one exponentially fast in n
c = capacity(ch).value
rate = 1.3 * c
exponent, s_star = sc_exponent(ch, rate)
print(f"capacity {c:.6f}, rate {rate:.6f}, exponent {exponent:.6f} at s={s_star:.3f}")
for n in (1, 10, 100, 1000):
    print(f"n={n:5d}  error >= {theorem1_bound(ch, n, rate, s_star).value:.6f}")
print("check:", 1 - math.exp(-1000 * exponent))
