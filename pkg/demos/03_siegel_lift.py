"""The multiplicative lift of Z_g to a Siegel form.

The lift vanishes to second order along z = 0. Dividing out the double zero
leaves eta_g(tau) eta_g(sigma), a consistency check that only works because
the polar data of Z_g is tuned by the group.
"""

from m24forms.siegel import borcherds_product, double_zero_limit, eta_pair

S = borcherds_product("1A", 2, 2)
print("1A lift, p^1 q^1 block (y exponent: coefficient):", S.blocks()[(1, 1)])

for lab in ("1A", "2A", "4B", "23AB"):
    S = borcherds_product(lab, 4, 4)
    ok = double_zero_limit(S).agrees(eta_pair(lab, 4, 4))
    print(f"{lab:5s} double-zero limit equals eta_g(tau) eta_g(sigma) through (p^4, q^4): {ok}")
