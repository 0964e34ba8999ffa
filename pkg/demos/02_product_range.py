"""Product states versus arbitrary states on a bipartite space.

The minimum of |<a b|X|a b>| over product vectors is never below the global
distance to 0 and never above |tr X| / (d1 d2).

Run: python demos/02_product_range.py
"""
import numpy as np

from localcert import (
    haar_unitary,
    reflection_example,
    shadow_sample,
    trace_upper_bound,
    v_unitary,
    z_diagonal_quadruples,
    z_distance,
    z_product_case,
    zero_fraction_study,
)
from localcert.pnr import theorem_bound

print("reflection family: global v, product z, (d-2)/d")
for d in (2, 3, 4, 5):
    R = reflection_example(d)
    z = z_distance(R, (d, d), seed=0).distance
    print(f"   d={d}: v={v_unitary(R).distance:.2e}  z={z:.6f}  (d-2)/d={(d - 2) / d:.6f}")

P = np.diag([1, 1j])
X = np.kron(P, P)
print("\ndiag(1,i) (x) diag(1,i), three ways:")
print(f"   seesaw      {z_distance(X, (2, 2), seed=0).distance:.9f}")
print(f"   product     {z_product_case(P, P):.9f}")
print(f"   quadruples  {z_diagonal_quadruples(X, (2, 2)):.9f}")
print(f"   global v    {v_unitary(X).distance:.2e}")

rng = np.random.default_rng(11)
print("\nsandwich v <= z <= |tr|/d on Haar 2:2 unitaries with a narrow spectrum:")
for _ in range(4):
    W = haar_unitary(4, rng)
    U = W @ np.diag(np.exp(1j * rng.uniform(0, 2.0, 4))) @ W.conj().T
    z = z_distance(U, (2, 2), seed=rng).distance
    print(f"   {v_unitary(U).distance:.4f} <= {z:.4f} <= {trace_upper_bound(U, (2, 2)):.4f}")

# random product states land inside the range; the cloud shows its shape
s = shadow_sample(X, (2, 2), 5000, seed=1).samples
print(f"\nshadow of diag(1,i)(x)diag(1,i): min |value| over 5000 samples = {np.abs(s).min():.4f}")

print("\nfraction of Haar unitaries with z = 0 (100 trials each):")
for d in (2, 3):
    frac, _ = zero_fraction_study(d, d, 100, seed=2024)
    print(f"   {d}:{d}  {frac:.2f}   (asymptotic bound {theorem_bound(d, d):.4f}, context only)")
