"""Backend selection for the sieve kernels.

The compiled extension is preferred when importable; the numpy fallback
is selected otherwise, or when ``GAPLINE_BACKEND=python`` is set.  Both
backends obey the same contract and are checked for byte-identical
output in the test suite.
"""

from __future__ import annotations

import os

if os.environ.get("GAPLINE_BACKEND", "").lower() == "python":
    from gapline import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from gapline import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from gapline import _kernels_py as _impl  # type: ignore[no-redef]

        BACKEND = "python"

sieve_odd_bits = _impl.sieve_odd_bits
odd_bits_to_bools = _impl.odd_bits_to_bools
odd_bits_to_primes = _impl.odd_bits_to_primes
count_odd_bits = _impl.count_odd_bits

__all__ = [
    "BACKEND",
    "sieve_odd_bits",
    "odd_bits_to_bools",
    "odd_bits_to_primes",
    "count_odd_bits",
]
