"""Arithmetic of the quadratic twists of A = X_0(49): descent, class groups,
Tamagawa factors, L-values, quaternion sums and Heegner points."""

__version__ = "0.1.0"
