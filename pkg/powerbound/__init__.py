"""
powerbound

Desk-scale computations around power-bounded operators similar to
singular unitaries: thin circle sets, Diophantine recurrence, Fourier
coefficients of singular measures, analytic interpolation and
finite-dimensional bound checks.
"""

__version__ = "0.1.0"
