"""The field of values of a few small matrices, and how far it sits from 0.

Run: python demos/01_field_of_values.py
"""
import numpy as np

from localcert import boundary, dist_origin, haar_unitary, reflection_example, v_unitary

# a normal matrix: the range is the convex hull of the spectrum
D = np.diag([1, 1j, -0.5 + 0.5j])
poly = boundary(D, 128)
print("diag(1, i, -0.5+0.5i) polygon vertices:")
for v in poly.vertices:
    print(f"   {v.real:+.4f} {v.imag:+.4f}i")
res = dist_origin(D)
print(f"distance to 0 = {res.distance:.6f}, attained at <psi|D|psi> = {res.value:.4f}\n")

# a non-normal Jordan block gives a disc of radius 1/2
J = np.array([[0, 1], [0, 0]], dtype=complex) + np.eye(2)
res = dist_origin(J)
print(f"1 + Jordan block: distance = {res.distance:.6f} (disc of radius 1/2 centred at 1)")
print(f"   polygon area {boundary(J, 256).area():.5f} vs pi/4 = {np.pi / 4:.5f}\n")

# for a unitary the range is the hull of points on the circle; 0 is excluded
# exactly when the spectrum fits in an open half circle
U = haar_unitary(4, seed=3)
print("Haar 4x4 phases/pi:", np.round(np.sort(np.angle(np.linalg.eigvals(U))) / np.pi, 3))
print(f"   v(U) = {v_unitary(U).distance:.6f}")

# the reflection family has a spectrum {1, -1}, so 0 is always in the range
for d in (2, 3, 4):
    print(f"reflection_example({d}): v = {v_unitary(reflection_example(d)).distance:.2e}")
