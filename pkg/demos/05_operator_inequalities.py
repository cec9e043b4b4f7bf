"""
Randomized checks of the matrix inequalities
============================================

The converse rests on a handful of operator inequalities. Each suite draws
random PSD matrices from a seeded ensemble and reports the worst violation.
"""

from cqconverse import verify
from cqconverse.hermitian import loewner_leq, mat_power

for name in sorted(verify.SUITES):
    report = verify.run_suite(name, seed=1, trials=50)
    status = "ok" if report.passed else "FAILED"
    print(f"{name:22s} trials={report.trials:4d}  worst violation={report.worst_violation:+.3e}  {status}")

# a single instance of operator monotonicity of t^p by hand
a = verify.random_psd(3, 4)
b = a + verify.random_psd(3, 5)
print("A <= B implies A^0.4 <= B^0.4:", loewner_leq(mat_power(a, 0.4), mat_power(b, 0.4)))
