"""Lookup-table seeded Newton-Raphson reciprocal square root."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401


def bits_of(x: float) -> int:
    import struct

    return struct.unpack("<I", struct.pack("<f", x))[0]
