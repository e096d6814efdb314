"""Deterministic seed fan-out.

A single base seed drives every source of randomness in a run (random
projections, cross-validation repeats, genetic search).  Sub-seeds are
derived by hashing ``base | role | indices`` with SHA-256, so any component
can be re-seeded in isolation and the derivation is stable across
platforms and Python versions.
"""

from __future__ import annotations

import hashlib


def derive_seed(base: int, role: str, *indices) -> int:
    """Derive a 32-bit seed for one named role of a run.

    ``role`` is a short tag such as ``"projection"`` or ``"ga"``;
    ``indices`` distinguish repeats (initialization index, fold index, ...).
    Equal inputs always map to the same seed.
    """
    text = "|".join([str(int(base)), role, *(str(i) for i in indices)])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "little")
