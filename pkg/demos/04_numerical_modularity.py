"""Numerical modularity checks.

Exact q-expansions are summed to floating point at points in the upper
half-plane and compared across group actions. The mock forms need their
non-holomorphic completion to transform; the Rademacher sum reconstructs H
from its polar term alone.
"""

import random

from m24forms import analytic as an
from m24forms import load_group_data
from m24forms.analytic import GroupElement2x2

rng = random.Random(1)

g = an.random_sl2z(rng, 3)
print(f"eta multiplier residual for {g}: {an.eta_multiplier_residual(g, 0.1 + 1.3j, 60):.2e}")

for lab in ("2A", "5A", "12B"):
    h = an.random_gamma0(load_group_data().record(lab).n, rng)
    print(f"1/eta_{lab} slash residual: {an.slash_inverse_eta_g(lab, h, an.sample_point(h)):.2e}")

S = GroupElement2x2.S()
print(f"completed H under tau -> -1/tau at 1.1i: {an.completion_residual('1A', S, 1.1j):.2e}")
print(f"Z_1A under S at (i, 0.2+0.1i): {an.check_jacobi_transform('1A', S, 1j, 0.2 + 0.1j, truncation=40):.2e}")

tau = 0.1 + 0.8j
H = an.mock_value("1A", tau)
for K in (10, 25, 50):
    print(f"Rademacher K={K:3d}: |-2 R_K - H| = {abs(-2 * an.rademacher_sum('1A', tau, K) - H):.4f}")
