"""ordlab: computing with left-invariant orders on finitely generated groups.

Finite positive-cone approximations of the order space, the right
translation action, Conradian/Archimedean/recurrence checks at scale,
Poincare recurrence on finite systems, indicability via Smith normal form,
and an integer-exact non-recurrence counterexample pipeline.
"""

__version__ = "0.1.0"

from ._kernel import backend_name as kernel_backend

__all__ = ["__version__", "kernel_backend"]
