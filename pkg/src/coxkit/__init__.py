"""Exact-arithmetic toolkit: twisted Coxeter combinatorics, cross-section
filtrations, affine-root bookkeeping, degree formulas, and brute-force
verification of trace/irreducibility/maximality/orbit-method claims for a
depth-3 twisted 2x2 matrix group over small finite fields."""

__version__ = "0.1.0"
