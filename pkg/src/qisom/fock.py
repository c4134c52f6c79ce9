"""Deformed inner products and Gram blocks on words of generators.

The sesquilinear form on multi-indices is defined recursively: the empty
pair has inner product 1, words of different lengths are orthogonal, and
for |mu| = |sigma| = m >= 1 with j = sigma[0],

    <mu, sigma> = sum over positions t with mu[t] = j of
                  q(j, mu[0]) * ... * q(j, mu[t-1]) * <mu with position t
                  removed, sigma[1:]>.

The recursion peels the first index of the second argument; general (real)
diagonal coefficients are allowed. For a fixed occupation vector v the
pairwise inner products of all words with occupation v form the Gram block
of v, whose positive-definiteness is certified through a triangular
factorization with explicitly checked pivots.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .qmatrix import QMatrix
from .rewrite import normal_form
from .words import MultiIndex, OccVector, Word, occ, words_with_occ

PIVOT_TOL = 1e-12


class NotPositive(ArithmeticError):
    """Gram block failed its positivity certification."""

    def __init__(self, v: OccVector, min_pivot: float):
        self.v = v
        self.min_pivot = min_pivot
        super().__init__(f"Gram block {v} is not positive definite: min pivot {min_pivot:.3e}")


def fock_inner(mu, sigma, q: QMatrix) -> complex:
    """Deformed inner product of the words indexed by mu and sigma."""
    mu = tuple(mu)
    sigma = tuple(sigma)
    if len(mu) != len(sigma):
        return 0j
    if max(mu + sigma, default=0) > q.n:
        raise ValueError(f"generator index exceeds n = {q.n}")
    return _inner(mu, sigma, q, q._fock_cache)


def _inner(mu: MultiIndex, sigma: MultiIndex, q: QMatrix, cache: dict) -> complex:
    if not mu:
        return 1.0 + 0j
    key = (mu, sigma)
    hit = cache.get(key)
    if hit is not None:
        return hit
    j = sigma[0]
    rest = sigma[1:]
    total = 0j
    prefix = 1.0 + 0j
    for t, i in enumerate(mu):
        if i == j:
            total += prefix * _inner(mu[:t] + mu[t + 1:], rest, q, cache)
        prefix *= q.entry(j, i)
        if prefix == 0:
            # every later summand carries this zero factor
            break
    cache[key] = total
    return total


def _cholesky_pivots(gram: np.ndarray, tol: float) -> tuple[np.ndarray | None, float]:
    """Lower triangular factor and the smallest pivot encountered.

    Returns (None, min_pivot) as soon as a pivot fails the threshold.
    """
    d = gram.shape[0]
    lower = np.zeros_like(gram)
    min_pivot = np.inf
    for k in range(d):
        pivot = float(gram[k, k].real - np.sum(np.abs(lower[k, :k]) ** 2))
        min_pivot = min(min_pivot, pivot)
        if pivot <= tol:
            return None, min_pivot
        lower[k, k] = np.sqrt(pivot)
        if k + 1 < d:
            lower[k + 1:, k] = (gram[k + 1:, k] - lower[k + 1:, :k] @ lower[k, :k].conj()) / lower[k, k]
    return lower, (min_pivot if d else np.inf)


@dataclass
class GramBlock:
    """Gram data of one occupation vector.

    ``basis`` lists the words with occupation v in lexicographic order,
    ``gram[a][b]`` is the inner product of basis[a] with basis[b], and
    ``chol`` is the lower triangular factor certifying positivity
    (chol @ chol^H = gram).
    """

    v: OccVector
    basis: tuple[MultiIndex, ...]
    gram: np.ndarray
    chol: np.ndarray
    min_pivot: float
    _index: dict | None = field(default=None, repr=False)
    _ortho: np.ndarray | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def index(self) -> dict:
        """Column position of each basis word."""
        if self._index is None:
            self._index = {word: col for col, word in enumerate(self.basis)}
        return self._index


def gram_block(v: OccVector, q: QMatrix, pivot_tol: float = PIVOT_TOL) -> GramBlock:
    """Assemble and certify the Gram block of occupation vector v."""
    if v.n != q.n:
        raise ValueError(f"occupation vector length {v.n} does not match n = {q.n}")
    basis = words_with_occ(v)
    d = len(basis)
    gram = np.empty((d, d), dtype=complex)
    for a in range(d):
        for b in range(d):
            gram[a, b] = fock_inner(basis[a], basis[b], q)
    if not np.allclose(gram, gram.conj().T, rtol=0.0, atol=1e-12):
        raise RuntimeError(f"Gram block {v} lost Hermitian symmetry; recursion fault")
    lower, min_pivot = _cholesky_pivots(gram, pivot_tol)
    if lower is None:
        raise NotPositive(v, min_pivot)
    return GramBlock(v=v, basis=basis, gram=gram, chol=lower, min_pivot=min_pivot)


def orthonormalize(block: GramBlock) -> np.ndarray:
    """Upper triangular change of basis C with C^H gram C = identity.

    Column alpha of C expresses the alpha-th orthonormal vector through the
    basis words at positions <= alpha.
    """
    if block._ortho is None:
        d = block.dim
        c = np.linalg.inv(block.chol.conj().T) if d else np.zeros((0, 0), dtype=complex)
        c.setflags(write=False)
        block._ortho = c
    return block._ortho


def pairing_scalars(mu, sigma, q: QMatrix) -> tuple[complex, complex]:
    """Scalar part of a_sigma* a_mu computed two independent ways.

    The first component reduces the word a_sigma* a_mu to normal form and
    reads off its scalar part (0 when letters survive); the second evaluates
    the inner-product recursion on (mu, sigma). The two agree whenever the
    occupations of mu and sigma coincide.
    """
    mu = tuple(mu)
    sigma = tuple(sigma)
    if occ(mu, q.n) != occ(sigma, q.n):
        raise ValueError("pairing scalars need equal occupations on both sides")
    word = Word.from_indices((), sigma) + Word.from_indices(mu, ())
    reduced = normal_form(word, q)
    by_rewriting = reduced.coefficient if (reduced.mu == () and reduced.sigma == ()) else 0j
    return by_rewriting, fock_inner(mu, sigma, q)
