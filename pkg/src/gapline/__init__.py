"""Prime-gap censuses, singular series, and consecutive-gap predictions.

The package is organised around exact integer counts (``primes``,
``census``, ``bonferroni``) on one side and real-valued predictions
(``singular``, ``asymptotic``) on the other; the two meet only in
reports and in the test suite.
"""

__version__ = "0.1.0"

from gapline.kernels import BACKEND

__all__ = ["BACKEND", "__version__"]
