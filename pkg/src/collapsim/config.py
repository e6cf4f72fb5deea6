"""Capacity limits.

Both limits can be overridden with the ``COLLAPSIM_MAX_DIM`` environment
variable, which is read on every call so tests can monkeypatch it.
"""

import os

DEFAULT_MAX_HILBERT_DIM = 2**26
DEFAULT_MAX_ENUMERATION = 2**30
ENV_VAR = "COLLAPSIM_MAX_DIM"


def _override():
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw.strip() == "":
        return None
    value = int(float(raw))
    if value < 1:
        raise ValueError(f"{ENV_VAR} must be a positive integer, got {raw!r}")
    return value


def max_hilbert_dim() -> int:
    """Largest dense state or diagonal operator dimension that may be allocated."""
    override = _override()
    return DEFAULT_MAX_HILBERT_DIM if override is None else override


def max_enumeration() -> int:
    """Largest number of spin configurations the brute-force solver will visit."""
    override = _override()
    return DEFAULT_MAX_ENUMERATION if override is None else override


def max_spins_for_dim(dim: int) -> int:
    return max(dim, 1).bit_length() - 1
