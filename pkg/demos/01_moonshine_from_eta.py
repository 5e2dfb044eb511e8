"""Twined partition functions and the M24 modules hiding in them.

Each conjugacy class g of M24 acts on the 24 points with a cycle shape, and
the product of eta(a tau)^b over that shape gives eta_g. The coefficients of
1/eta_g are traces of g on a graded module; decomposing them shows integer,
nonnegative multiplicities at every level we compute.
"""

from m24forms import load_group_data
from m24forms.classical import fock_decomposition, inverse_eta_coefficients
from m24forms.mock import kn_decomposition, mock_coefficients

G = load_group_data()

print("1/eta_g, first five coefficients")
for lab in ("1A", "2A", "3A", "23AB"):
    print(f"  {lab:5s} shape={G.record(lab).shape}  {inverse_eta_coefficients(lab, 4)}")

print("\nFock space levels as M24 representations (nonzero multiplicities)")
for n in range(1, 5):
    m = fock_decomposition(n)
    parts = " + ".join(f"{v}*{k}" if v != 1 else k for k, v in m.items() if v)
    print(f"  H_{n} = {parts}")

# H(tau) = 2 q^(-1/8) (-1 + 45 q + 231 q^2 + ...)
print("\nmock H_g coefficients n = 1..5")
for lab in ("1A", "2A", "2B", "7AB"):
    print(f"  {lab:5s} {mock_coefficients(lab, 5)[1:]}")

print("\nK_n decompositions")
for n in range(1, 4):
    m = kn_decomposition(n)
    print(f"  K_{n} = " + " + ".join(f"{v}*{k}" if v != 1 else k for k, v in m.items() if v))
