"""Normal-form rewriting for words in q-commuting isometries.

Every word reduces to a scalar multiple of a single monomial a_mu a_sigma*
by repeatedly contracting an adjacent (starred, unstarred) pair:

    a_i* a_i  ->  1                    (each generator is an isometry)
    a_i* a_j  ->  q_ij a_j a_i*        (i != j)

Redexes never overlap (a letter cannot be simultaneously the starred and
the unstarred half of two pairs), so the reduction order does not change
the result; the default strategy contracts the leftmost redex. Each step
either deletes two letters or moves a star one place to the right, which
bounds the number of steps by len**2 + len.
"""

from __future__ import annotations

from .qmatrix import QMatrix
from .words import Expression, NormalMonomial, Word


class NotARedex(ValueError):
    """Raised when a rewrite step is requested at a non-redex position."""


def find_redex(word: Word, strategy: str = "leftmost") -> int | None:
    """Position of the first (or last) adjacent (starred, unstarred) pair."""
    letters = word.letters
    positions = range(len(letters) - 1)
    if strategy == "rightmost":
        positions = reversed(positions)
    elif strategy != "leftmost":
        raise ValueError(f"unknown strategy {strategy!r}")
    for pos in positions:
        if letters[pos][1] and not letters[pos + 1][1]:
            return pos
    return None


def rewrite_step(word: Word, pos: int, q: QMatrix) -> tuple[complex, Word]:
    """Contract the redex at ``pos``, returning the step scalar and the new word."""
    q.require_isom()
    letters = word.letters
    if not (0 <= pos < len(letters) - 1):
        raise NotARedex(f"position {pos} out of range for a word of length {len(letters)}")
    (i, i_star), (j, j_star) = letters[pos], letters[pos + 1]
    if not (i_star and not j_star):
        raise NotARedex(f"letters at position {pos} are not a (starred, unstarred) pair")
    if max(i, j) > q.n:
        raise ValueError(f"generator index {max(i, j)} exceeds n = {q.n}")
    if i == j:
        return 1.0 + 0j, Word(letters[:pos] + letters[pos + 2:])
    swapped = letters[:pos] + ((j, False), (i, True)) + letters[pos + 2:]
    return q.entry(i, j), Word(swapped)


def normal_form(word: Word, q: QMatrix, strategy: str = "leftmost") -> NormalMonomial:
    """Reduce a word to coefficient * a_mu a_sigma*.

    The coefficient is a product of q entries (1 for pure deletions); it can
    only vanish when some q_ij is itself zero.
    """
    q.require_isom()
    current = word
    coeff = 1.0 + 0j
    bound = len(word) ** 2 + len(word)
    steps = 0
    while True:
        pos = find_redex(current, strategy)
        if pos is None:
            break
        steps += 1
        if steps > bound:
            raise RuntimeError(f"reduction of {word} exceeded its step bound {bound}")
        scalar, current = rewrite_step(current, pos, q)
        coeff *= scalar
    mu = tuple(i for i, starred in current.letters if not starred)
    starred_half = tuple(i for i, starred in current.letters if starred)
    sigma = tuple(reversed(starred_half))
    return NormalMonomial(coeff, mu, sigma)


def star(x: Expression) -> Expression:
    """Formal adjoint: (c a_mu a_sigma*)* = conj(c) a_sigma a_mu*."""
    return Expression({(sigma, mu): coeff.conjugate() for (mu, sigma), coeff in x.items()})


def multiply(x: Expression, y: Expression, q: QMatrix) -> Expression:
    """Product of two expressions, reduced to normal form term by term."""
    q.require_isom()
    terms: dict = {}
    for (mu1, sigma1), c1 in x.items():
        left = Word.from_indices(mu1, sigma1)
        for (mu2, sigma2), c2 in y.items():
            reduced = normal_form(left + Word.from_indices(mu2, sigma2), q)
            key = (reduced.mu, reduced.sigma)
            terms[key] = terms.get(key, 0j) + c1 * c2 * reduced.coefficient
    return Expression(terms)
