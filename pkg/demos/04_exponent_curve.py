"""
Strong-converse exponent against rate
=====================================

The exponent is zero up to capacity and positive beyond it.
"""

import numpy as np

from cqconverse import CqChannel, capacity, exponent_curve

bsc = CqChannel.classical([[0.9, 0.1], [0.1, 0.9]])
c = capacity(bsc).value
rates = np.linspace(0, 2 * c, 9)
curve = exponent_curve(bsc, rates)
print(f"capacity {c:.4f} nats")
for rate, exponent, s in curve.rows():
    marker = "above" if rate > c else ""
    print(f"R={rate:.4f}  exponent={exponent:.6f}  s*={s:+.3f} {marker}")
