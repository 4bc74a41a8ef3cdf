"""Numerical laboratory for Dirichlet characters, Gauss sums, critical-line
zeros of L(s, chi), and the dual zero/prime-power sums whose cancellation
the explicit formula predicts."""

__version__ = "0.1.0"
