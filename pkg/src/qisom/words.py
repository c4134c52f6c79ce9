"""Occupation vectors, free words in the generators, and normal monomials.

Generators carry labels 1..n. A word is a finite sequence of letters, each
a generator index together with a star flag; the empty word is the unit.
A normal monomial is a scalar multiple of a word whose unstarred letters
all precede its starred ones, recorded as ``coeff * a_mu a_sigma*`` where
``mu`` lists the unstarred indices in order and ``sigma`` the starred ones
(the starred half of the underlying word therefore reads ``reversed(sigma)``).
Expressions are finite complex-linear combinations of normal monomials.

Text syntax for words: whitespace-separated letters ``a<index>`` with an
optional trailing ``*``, for example ``"a1 a2* a1"``. The empty string (or
the single token ``1``) denotes the unit.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

MultiIndex = tuple[int, ...]

COEFF_TOL = 1e-9
# coefficients at or below this magnitude are dropped as numeric zeros
_DROP = 1e-14


@dataclass(frozen=True)
class OccVector:
    """Per-generator letter counts with componentwise arithmetic.

    The length of ``entries`` is the generator count n >= 1. Addition,
    subtraction and ``vmax`` act componentwise; subtraction is only defined
    when the result stays non-negative. Comparison is the componentwise
    partial order, so ``not (a <= b)`` does not imply ``b <= a``.
    """

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        entries = tuple(int(e) for e in self.entries)
        if not entries:
            raise ValueError("occupation vector needs at least one entry")
        if any(e < 0 for e in entries):
            raise ValueError(f"negative occupation count in {entries}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def zeros(cls, n: int) -> "OccVector":
        return cls((0,) * n)

    @classmethod
    def constant(cls, k: int, n: int) -> "OccVector":
        return cls((k,) * n)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def total(self) -> int:
        return sum(self.entries)

    @property
    def max_entry(self) -> int:
        return max(self.entries)

    def _check_compatible(self, other: "OccVector") -> None:
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "OccVector") -> "OccVector":
        self._check_compatible(other)
        return OccVector(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "OccVector") -> "OccVector":
        self._check_compatible(other)
        diff = tuple(a - b for a, b in zip(self.entries, other.entries))
        if any(d < 0 for d in diff):
            raise ValueError(f"subtraction {self} - {other} has a negative entry")
        return OccVector(diff)

    def vmax(self, other: "OccVector") -> "OccVector":
        self._check_compatible(other)
        return OccVector(tuple(max(a, b) for a, b in zip(self.entries, other.entries)))

    def __le__(self, other: "OccVector") -> bool:
        self._check_compatible(other)
        return all(a <= b for a, b in zip(self.entries, other.entries))

    def __ge__(self, other: "OccVector") -> bool:
        return other.__le__(self)

    def __lt__(self, other: "OccVector") -> bool:
        return self != other and self.__le__(other)

    def __gt__(self, other: "OccVector") -> bool:
        return other.__lt__(self)

    def __str__(self) -> str:
        return "(" + ",".join(str(e) for e in self.entries) + ")"


def occ(mu: Iterable[int], n: int) -> OccVector:
    """Occupation vector of a multi-index: how often each generator occurs."""
    counts = [0] * n
    for i in mu:
        if not 1 <= i <= n:
            raise ValueError(f"generator index {i} outside 1..{n}")
        counts[i - 1] += 1
    return OccVector(tuple(counts))


def subset_indicator(subset: Iterable[int], n: int) -> OccVector:
    """0/1 occupation vector with ones exactly at the given generator labels."""
    entries = [0] * n
    for i in subset:
        if not 1 <= i <= n:
            raise ValueError(f"generator index {i} outside 1..{n}")
        if entries[i - 1]:
            raise ValueError(f"repeated generator index {i} in subset")
        entries[i - 1] = 1
    return OccVector(tuple(entries))


def occ_balanced(m: "NormalMonomial") -> bool:
    """True when the unstarred and starred halves use each generator equally often."""
    return sorted(m.mu) == sorted(m.sigma)


def multinomial(v: OccVector) -> int:
    """Number of distinct arrangements of the letters counted by v."""
    out = math.factorial(v.total)
    for e in v.entries:
        out //= math.factorial(e)
    return out


def words_with_occ(v: OccVector) -> tuple[MultiIndex, ...]:
    """All multi-indices with occupation v, in lexicographic order."""
    out: list[MultiIndex] = []
    prefix: list[int] = []

    def extend(remaining: list[int]) -> None:
        if not any(remaining):
            out.append(tuple(prefix))
            return
        for i in range(len(remaining)):
            if remaining[i]:
                remaining[i] -= 1
                prefix.append(i + 1)
                extend(remaining)
                prefix.pop()
                remaining[i] += 1

    extend(list(v.entries))
    return tuple(out)


def occ_range(bound: OccVector) -> list[OccVector]:
    """All occupation vectors v <= bound, ordered by level then lexicographically."""
    out: list[OccVector] = []

    def extend(prefix: list[int], pos: int) -> None:
        if pos == bound.n:
            out.append(OccVector(tuple(prefix)))
            return
        for e in range(bound.entries[pos] + 1):
            prefix.append(e)
            extend(prefix, pos + 1)
            prefix.pop()

    extend([], 0)
    out.sort(key=lambda v: (v.total, v.entries))
    return out


def compositions(total: int, n: int) -> list[OccVector]:
    """All occupation vectors of length n with the given total, lexicographically."""
    out: list[OccVector] = []

    def extend(prefix: list[int], remaining: int) -> None:
        if len(prefix) == n - 1:
            out.append(OccVector(tuple(prefix) + (remaining,)))
            return
        for e in range(remaining + 1):
            prefix.append(e)
            extend(prefix, remaining - e)
            prefix.pop()

    if n == 1:
        return [OccVector((total,))]
    extend([], total)
    out.sort(key=lambda v: v.entries)
    return out


_LETTER_RE = re.compile(r"a([0-9]+)(\*)?\Z")


@dataclass(frozen=True)
class Word:
    """A word in the generators: a tuple of (index, starred) letters."""

    letters: tuple[tuple[int, bool], ...] = ()

    def __post_init__(self) -> None:
        cleaned = []
        for letter in self.letters:
            index, starred = letter
            index = int(index)
            if index < 1:
                raise ValueError(f"generator index {index} must be >= 1")
            cleaned.append((index, bool(starred)))
        object.__setattr__(self, "letters", tuple(cleaned))

    @classmethod
    def from_text(cls, text: str, n: int | None = None) -> "Word":
        """Parse the ``a1 a2* a1`` syntax; '' and '1' denote the unit."""
        tokens = text.split()
        if tokens == ["1"]:
            tokens = []
        letters = []
        for token in tokens:
            match = _LETTER_RE.match(token)
            if match is None:
                raise ValueError(f"cannot parse letter {token!r}; expected a<index> or a<index>*")
            index = int(match.group(1))
            if index < 1:
                raise ValueError(f"generator index {index} must be >= 1")
            if n is not None and index > n:
                raise ValueError(f"generator index {index} exceeds n = {n}")
            letters.append((index, match.group(2) is not None))
        return cls(tuple(letters))

    @classmethod
    def from_indices(cls, mu: Iterable[int], sigma: Iterable[int] = ()) -> "Word":
        """The word a_mu a_sigma*; the starred half reads reversed(sigma)."""
        mu = tuple(mu)
        sigma = tuple(sigma)
        letters = tuple((i, False) for i in mu)
        letters += tuple((i, True) for i in reversed(sigma))
        return cls(letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def star(self) -> "Word":
        """Formal adjoint: reverse the letters and flip every star."""
        return Word(tuple((i, not s) for i, s in reversed(self.letters)))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"a{i}*" if s else f"a{i}" for i, s in self.letters)


@dataclass(frozen=True)
class NormalMonomial:
    """coefficient * a_mu a_sigma* with all unstarred letters first."""

    coefficient: complex
    mu: MultiIndex
    sigma: MultiIndex

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficient", complex(self.coefficient))
        object.__setattr__(self, "mu", tuple(int(i) for i in self.mu))
        object.__setattr__(self, "sigma", tuple(int(i) for i in self.sigma))

    def word(self) -> Word:
        return Word.from_indices(self.mu, self.sigma)

    def is_zero(self, tol: float = _DROP) -> bool:
        return abs(self.coefficient) <= tol

    def __str__(self) -> str:
        return f"({self.coefficient}) {self.word()}"


class Expression:
    """Finite linear combination of normal monomials, keyed by (mu, sigma).

    The stored map never contains zero coefficients; terms whose magnitude
    falls below an exact-zero threshold are dropped on construction.
    Equality compares coefficients within ``COEFF_TOL``.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable | None = None):
        data: dict[tuple[MultiIndex, MultiIndex], complex] = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for (mu, sigma), coeff in items:
                key = (tuple(mu), tuple(sigma))
                data[key] = data.get(key, 0j) + complex(coeff)
        self._terms = {k: c for k, c in data.items() if abs(c) > _DROP}

    @classmethod
    def zero(cls) -> "Expression":
        return cls()

    @classmethod
    def one(cls) -> "Expression":
        return cls({((), ()): 1.0 + 0j})

    @classmethod
    def monomial(cls, mu: Iterable[int], sigma: Iterable[int] = (), coeff: complex = 1.0) -> "Expression":
        return cls({(tuple(mu), tuple(sigma)): coeff})

    @classmethod
    def from_normal(cls, m: NormalMonomial) -> "Expression":
        return cls({(m.mu, m.sigma): m.coefficient})

    def items(self) -> list[tuple[tuple[MultiIndex, MultiIndex], complex]]:
        return sorted(self._terms.items())

    def monomials(self) -> Iterator[NormalMonomial]:
        for (mu, sigma), coeff in self.items():
            yield NormalMonomial(coeff, mu, sigma)

    def coefficient(self, mu: Iterable[int], sigma: Iterable[int] = ()) -> complex:
        return self._terms.get((tuple(mu), tuple(sigma)), 0j)

    @property
    def degree(self) -> int:
        """Largest word length among the stored monomials (0 for the zero element)."""
        if not self._terms:
            return 0
        return max(len(mu) + len(sigma) for mu, sigma in self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other: "Expression") -> "Expression":
        data = dict(self._terms)
        for key, coeff in other._terms.items():
            data[key] = data.get(key, 0j) + coeff
        return Expression(data)

    def __sub__(self, other: "Expression") -> "Expression":
        return self + (-1.0) * other

    def __neg__(self) -> "Expression":
        return (-1.0) * self

    def __mul__(self, scalar: complex) -> "Expression":
        if not isinstance(scalar, (int, float, complex)):
            return NotImplemented
        return Expression({k: scalar * c for k, c in self._terms.items()})

    __rmul__ = __mul__

    def isclose(self, other: "Expression", tol: float = COEFF_TOL) -> bool:
        keys = set(self._terms) | set(other._terms)
        return all(abs(self._terms.get(k, 0j) - other._terms.get(k, 0j)) <= tol for k in keys)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Expression):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None  # tolerance-based equality is incompatible with hashing

    def max_coefficient(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(str(m) for m in self.monomials())

    def __repr__(self) -> str:
        return f"Expression({self._terms!r})"
