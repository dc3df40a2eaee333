"""Root-cause text normalisation and the two string metrics of the pipeline.

Cosine distance over term-frequency vectors drives the clustering step;
normalised longest-common-subsequence similarity over label prefixes drives
the group aggregation step. Everything here is pure and deterministic.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ContractError

# Parentheses vanish, slash and hyphen become token separators.
_TRANSFORM = str.maketrans({"(": None, ")": None, "/": " ", "-": " "})

DEFAULT_PREFIX_LEN = 10


def normalize_label(s: str) -> str:
    """Lowercase, drop ``()``, map ``/`` and ``-`` to spaces, collapse whitespace."""
    return " ".join(s.lower().translate(_TRANSFORM).split())


@dataclass(frozen=True)
class TokenVector:
    """Sparse term-frequency vector for one normalised label."""

    source_label: str
    counts: dict[str, int]

    def __bool__(self) -> bool:
        return bool(self.counts)


def tf_vector(s: str) -> TokenVector:
    """Token counts of an already-normalised string; empty string gives an empty vector."""
    return TokenVector(source_label=s, counts=dict(Counter(s.split())))


def cosine_distance(a: TokenVector, b: TokenVector) -> float:
    """1 - cos(a, b) in [0, 1].

    Identical vectors are exactly 0 and the value is exactly symmetric: the
    dot product and squared norms are integer sums, so no float ordering
    effects can creep in. One empty vector gives 1, two empty vectors 0.
    """
    if not a and not b:
        return 0.0
    if not a or not b:
        return 1.0
    if a.counts == b.counts:
        return 0.0
    small, large = (a.counts, b.counts) if len(a.counts) <= len(b.counts) else (b.counts, a.counts)
    dot = sum(c * large[t] for t, c in small.items() if t in large)
    qa = sum(c * c for c in a.counts.values())
    qb = sum(c * c for c in b.counts.values())
    cos = dot / math.sqrt(qa * qb)
    return min(1.0, max(0.0, 1.0 - cos))


def prefix_key(s: str, n: int = DEFAULT_PREFIX_LEN) -> str:
    """First ``n`` characters of the normalised label (shorter strings whole)."""
    if n < 1:
        raise ContractError(f"prefix length must be >= 1, got {n}")
    return normalize_label(s)[:n]


def _codepoints(s: str) -> np.ndarray:
    return np.frombuffer(s.encode("utf-32-le"), dtype=np.uint32).astype(np.int64)


def lcs_similarity(a: str, b: str) -> float:
    """2 * LCS(a, b) / (|a| + |b|); 1 iff the strings are equal.

    Two empty strings count as identical (1.0); exactly one empty gives 0.0.
    """
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    if a == b:
        return 1.0
    length = int(kernels.lcs_length(_codepoints(a), _codepoints(b)))
    return 2.0 * length / (len(a) + len(b))
