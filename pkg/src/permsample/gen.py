"""Random regular and nearly regular bipartite instances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import Instance

REGULAR_UNION = "regular_union"
NEARLY_REGULAR = "nearly_regular"
MAX_REDRAWS = 1000


@dataclass(frozen=True)
class GenSpec:
    n: int
    degree: int
    jitter: int = 0
    model: str = REGULAR_UNION
    seed: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 1 <= self.degree <= self.n:
            raise ValueError(f"degree must lie in [1, n], got {self.degree}")
        if self.jitter < 0:
            raise ValueError("jitter must be non-negative")
        if self.degree + self.jitter > self.n or self.degree - self.jitter < 1:
            raise ValueError("degree +/- jitter must stay within [1, n]")
        if self.model not in (REGULAR_UNION, NEARLY_REGULAR):
            raise ValueError(f"unknown model {self.model!r}")


def cyclic_regular(n: int, degree: int) -> np.ndarray:
    """Row i joined to columns i, i+1, ..., i+degree-1 (mod n)."""
    a = np.zeros((n, n), dtype=np.int8)
    rows = np.arange(n)
    for s in range(degree):
        a[rows, (rows + s) % n] = 1
    return a


def _union_of_permutations(n, degree, rng):
    """Superimpose edge-disjoint random permutations; ``None`` if redraws run out."""
    a = np.zeros((n, n), dtype=np.int8)
    rows = np.arange(n)
    perms = []
    for _ in range(degree):
        for _ in range(MAX_REDRAWS):
            p = rng.permutation(n)
            if not a[rows, p].any():
                break
        else:
            return None, None
        a[rows, p] = 1
        perms.append(p)
    return a, perms


def generate(spec: GenSpec, rng=None) -> Instance:
    """Draw an instance; deterministic given ``spec.seed`` or the passed generator."""
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    n, degree, c = spec.n, spec.degree, spec.jitter
    a, perms = _union_of_permutations(n, degree, rng)
    if a is None:
        a = cyclic_regular(n, degree)
        protected = np.eye(n, dtype=bool)
    else:
        protected = np.zeros((n, n), dtype=bool)
        protected[np.arange(n), perms[0]] = True
    if spec.model == NEARLY_REGULAR and c > 0:
        _perturb(a, protected, degree - c, degree + c, 2 * n * c, rng)
    return Instance(a)


def _perturb(a, protected, lo, hi, steps, rng):
    """Random single-edge toggles keeping all degrees in [lo, hi].

    Edges of one perfect matching are never removed, so the permanent stays
    positive.
    """
    n = a.shape[0]
    r = a.sum(axis=1)
    c = a.sum(axis=0)
    cells = rng.integers(0, n, size=(steps, 2))
    for i, j in cells:
        if a[i, j]:
            if not protected[i, j] and r[i] > lo and c[j] > lo:
                a[i, j] = 0
                r[i] -= 1
                c[j] -= 1
        elif r[i] < hi and c[j] < hi:
            a[i, j] = 1
            r[i] += 1
            c[j] += 1
