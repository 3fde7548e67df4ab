"""Weierstrass mock modular forms of rational elliptic curves.

Importing the package sets the mpmath working precision to
``WMOCK_PRECISION`` bits (default 256) unless it is already higher.
"""

import os

import mpmath as mp

DEFAULT_PRECISION = 256


def configure_precision(bits=None):
    """Set mpmath's working precision; ``None`` reads WMOCK_PRECISION."""
    if bits is None:
        raw = os.environ.get("WMOCK_PRECISION", DEFAULT_PRECISION)
        try:
            bits = int(raw)
        except ValueError:
            raise ValueError(f"WMOCK_PRECISION must be an integer number of bits, got {raw!r}") from None
    if bits < 64:
        raise ValueError("precision must be at least 64 bits")
    mp.mp.prec = bits
    return bits


if mp.mp.prec < DEFAULT_PRECISION or "WMOCK_PRECISION" in os.environ:
    try:
        configure_precision()
    except ValueError:
        # a bad setting must not break imports; the CLI reports it as a usage error
        configure_precision(DEFAULT_PRECISION)

from .series import LaurentQSeries  # noqa: E402

__version__ = "0.1.0"
__all__ = ["LaurentQSeries", "configure_precision", "DEFAULT_PRECISION"]
