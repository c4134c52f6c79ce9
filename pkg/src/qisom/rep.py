"""Truncated deformed Fock representation with graded block operators.

The truncated space keeps one block per occupation vector v with
|v| <= L; each block carries the orthonormal coordinates produced by its
Gram factorization, so adjoints are plain conjugate transposes. Creation
operators prepend a letter in word coordinates and change basis on both
sides; words that would leave the truncation are mapped to zero, so all
relation checks exclude the boundary level L.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import GramBlock, gram_block, orthonormalize
from .linalg import spectral_norm
from .qmatrix import QMatrix
from .words import (Expression, MultiIndex, OccVector, compositions,
                    subset_indicator)


class RelationViolated(ArithmeticError):
    """A defining relation failed its residual tolerance away from the boundary."""

    def __init__(self, label: str, residual: float, tol: float):
        self.label = label
        self.residual = residual
        self.tol = tol
        super().__init__(f"relation {label} has residual {residual:.3e} > {tol:.1e}")


def word_coordinate_map(block: GramBlock) -> np.ndarray:
    """Matrix sending word-basis coefficients to orthonormal coordinates.

    The transpose of the triangular Gram factor: with this choice the
    standard coordinate pairing (conjugation on the second slot) extends
    the deformed form in the orientation fixed by the rewriting bridge,
    so conjugate transposes of block matrices are true adjoints and the
    defining relations hold with q oriented as a_i* a_j = q_ij a_j a_i*.
    """
    return block.chol.T


def word_coordinate_inverse(block: GramBlock) -> np.ndarray:
    """Inverse of :func:`word_coordinate_map`; column alpha expands the
    alpha-th orthonormal vector through the word basis."""
    return np.conj(orthonormalize(block))


class TruncatedFock:
    """All Gram blocks with |v| <= L for one coefficient matrix.

    Blocks are keyed by occupation vector, ordered by level then
    lexicographically. The instance is immutable apart from internal
    caches (operators, projections) that are filled on demand.
    """

    def __init__(self, q: QMatrix, L: int):
        if L < 1:
            raise ValueError(f"truncation level must be >= 1, got {L}")
        self.q = q
        self.n = q.n
        self.L = L
        blocks: dict[OccVector, GramBlock] = {}
        for level in range(L + 1):
            for v in compositions(level, self.n):
                blocks[v] = gram_block(v, q)
        self.blocks = blocks
        self.dims = {v: block.dim for v, block in blocks.items()}
        self.basis_offset: dict[MultiIndex, tuple[OccVector, int]] = {}
        for v, block in blocks.items():
            for col, word in enumerate(block.basis):
                self.basis_offset[word] = (v, col)
        self._cache: dict = {}

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def block_keys(self) -> list[OccVector]:
        return list(self.blocks.keys())

    def orthonormalizer(self, v: OccVector) -> np.ndarray:
        return orthonormalize(self.blocks[v])

    def __repr__(self) -> str:
        return f"TruncatedFock(n={self.n}, L={self.L}, dim={self.total_dim})"


def _sorted_keys(keys) -> list[OccVector]:
    return sorted(keys, key=lambda v: (v.total, v.entries))


class GradedOperator:
    """Operator between direct sums of blocks, stored blockwise.

    ``blocks`` maps (source v, target u) to a dims[u] x dims[v] matrix in
    orthonormal coordinates; missing keys are zero blocks. Composition
    multiplies matching blocks, the adjoint conjugate-transposes each block
    and swaps its key.
    """

    __slots__ = ("blocks", "dims")

    def __init__(self, blocks: dict, dims: dict):
        stored = {}
        for (src, dst), matrix in blocks.items():
            m = np.asarray(matrix, dtype=complex)
            expected = (dims[dst], dims[src])
            if m.shape != expected:
                raise ValueError(f"block {src}->{dst} has shape {m.shape}, expected {expected}")
            stored[(src, dst)] = m
        self.blocks = stored
        self.dims = dims

    @classmethod
    def identity(cls, dims: dict, keys=None) -> "GradedOperator":
        keys = list(dims.keys()) if keys is None else list(keys)
        return cls({(v, v): np.eye(dims[v], dtype=complex) for v in keys}, dims)

    @classmethod
    def zero(cls, dims: dict) -> "GradedOperator":
        return cls({}, dims)

    def block(self, src: OccVector, dst: OccVector) -> np.ndarray:
        hit = self.blocks.get((src, dst))
        if hit is not None:
            return hit
        return np.zeros((self.dims[dst], self.dims[src]), dtype=complex)

    def __matmul__(self, other: "GradedOperator") -> "GradedOperator":
        """Composition self after other."""
        out: dict = {}
        by_source: dict = {}
        for (mid, dst), matrix in self.blocks.items():
            by_source.setdefault(mid, []).append((dst, matrix))
        for (src, mid), right in other.blocks.items():
            for dst, left in by_source.get(mid, ()):
                key = (src, dst)
                product = left @ right
                if key in out:
                    out[key] = out[key] + product
                else:
                    out[key] = product
        return GradedOperator(out, self.dims)

    def adjoint(self) -> "GradedOperator":
        return GradedOperator(
            {(dst, src): m.conj().T for (src, dst), m in self.blocks.items()}, self.dims
        )

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        out = dict(self.blocks)
        for key, matrix in other.blocks.items():
            out[key] = out[key] + matrix if key in out else matrix
        return GradedOperator(out, self.dims)

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        return self + (-1.0) * other

    def __mul__(self, scalar: complex) -> "GradedOperator":
        if not isinstance(scalar, (int, float, complex)):
            return NotImplemented
        return GradedOperator({k: scalar * m for k, m in self.blocks.items()}, self.dims)

    __rmul__ = __mul__

    def __neg__(self) -> "GradedOperator":
        return (-1.0) * self

    def restrict_source(self, keep) -> "GradedOperator":
        return GradedOperator(
            {key: m for key, m in self.blocks.items() if keep(key[0])}, self.dims
        )

    def dense(self) -> np.ndarray:
        """Single matrix over the blocks this operator touches."""
        sources = _sorted_keys({src for src, _ in self.blocks})
        targets = _sorted_keys({dst for _, dst in self.blocks})
        src_offsets, pos = {}, 0
        for v in sources:
            src_offsets[v] = pos
            pos += self.dims[v]
        dst_offsets, dpos = {}, 0
        for v in targets:
            dst_offsets[v] = dpos
            dpos += self.dims[v]
        out = np.zeros((dpos, pos), dtype=complex)
        for (src, dst), m in self.blocks.items():
            r, c = dst_offsets[dst], src_offsets[src]
            out[r:r + self.dims[dst], c:c + self.dims[src]] = m
        return out

    def norm(self) -> float:
        """Operator norm (largest singular value, power iteration)."""
        if not self.blocks:
            return 0.0
        return spectral_norm(self.dense())

    def trace(self) -> complex:
        return sum(np.trace(m) for (src, dst), m in self.blocks.items() if src == dst)

    def max_abs(self) -> float:
        return max((float(np.max(np.abs(m))) for m in self.blocks.values()), default=0.0)

    def isclose(self, other: "GradedOperator", tol: float = 1e-9) -> bool:
        return (self - other).max_abs() <= tol


def creation(i: int, t: TruncatedFock) -> GradedOperator:
    """The i-th creation operator: prepend the letter, then change basis."""
    if not 1 <= i <= t.n:
        raise ValueError(f"generator index {i} outside 1..{t.n}")
    key = ("creation", i)
    hit = t._cache.get(key)
    if hit is not None:
        return hit
    delta = subset_indicator((i,), t.n)
    blocks = {}
    for v, src in t.blocks.items():
        if v.total == t.L:
            continue  # image would leave the truncation
        u = v + delta
        dst = t.blocks[u]
        raw = np.zeros((dst.dim, src.dim), dtype=complex)
        for col, word in enumerate(src.basis):
            raw[dst.index[(i,) + word], col] = 1.0
        blocks[(v, u)] = word_coordinate_map(dst) @ raw @ word_coordinate_inverse(src)
    op = GradedOperator(blocks, t.dims)
    t._cache[key] = op
    return op


def annihilation(i: int, t: TruncatedFock) -> GradedOperator:
    """Adjoint of creation; sends the vacuum block to zero."""
    key = ("annihilation", i)
    hit = t._cache.get(key)
    if hit is not None:
        return hit
    op = creation(i, t).adjoint()
    t._cache[key] = op
    return op


def monomial_operator(mu: MultiIndex, sigma: MultiIndex, t: TruncatedFock) -> GradedOperator:
    """Represent a_mu a_sigma*: annihilate along sigma, then create along mu.

    Annihilations act first, so balanced monomials never pass through
    levels above their input level.
    """
    key = ("monomial", tuple(mu), tuple(sigma))
    hit = t._cache.get(key)
    if hit is not None:
        return hit
    factors = [annihilation(s, t) for s in sigma]
    factors.extend(creation(m, t) for m in reversed(mu))
    op: GradedOperator | None = None
    for factor in factors:
        op = factor if op is None else factor @ op
    if op is None:
        op = GradedOperator.identity(t.dims)
    t._cache[key] = op
    return op


def act_on_expression(x: Expression, t: TruncatedFock) -> GradedOperator:
    """Matrix of a normal-form expression on the truncated space."""
    total = GradedOperator.zero(t.dims)
    for (mu, sigma), coeff in x.items():
        total = total + coeff * monomial_operator(mu, sigma, t)
    return total


@dataclass
class RelationReport:
    """Residuals of the defining relations away from the truncation boundary."""

    n: int
    L: int
    tol: float
    isometry: dict[int, float]
    cross: dict[tuple[int, int], float]
    boundary_note: str
    max_residual: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "L": self.L,
            "tol": self.tol,
            "isometry_residuals": {str(i): r for i, r in sorted(self.isometry.items())},
            "cross_residuals": {f"{i},{j}": r for (i, j), r in sorted(self.cross.items())},
            "boundary": self.boundary_note,
            "max_residual": self.max_residual,
            "passed": self.passed,
        }

    def lines(self) -> list[str]:
        out = [f"relation residuals for n={self.n}, L={self.L} (tolerance {self.tol:.1e})"]
        for i, r in sorted(self.isometry.items()):
            out.append(f"  a{i}* a{i} - 1        : {r:.3e}")
        for (i, j), r in sorted(self.cross.items()):
            out.append(f"  a{i}* a{j} - q a{j} a{i}*: {r:.3e}")
        out.append(f"  note: {self.boundary_note}")
        out.append(f"  verdict: {'pass' if self.passed else 'FAIL'}")
        return out


def verify_relations(t: TruncatedFock, tol: float = 1e-9, strict: bool = False) -> RelationReport:
    """Check the defining relations on source blocks with |v| <= L - 1.

    The boundary level L is excluded: creation truncates there, so the
    isometry relation cannot hold on it by construction.
    """
    safe = lambda v: v.total <= t.L - 1
    ident = GradedOperator.identity(t.dims, [v for v in t.blocks if safe(v)])
    isometry: dict[int, float] = {}
    cross: dict[tuple[int, int], float] = {}
    worst = 0.0
    for i in range(1, t.n + 1):
        residual = ((annihilation(i, t) @ creation(i, t)).restrict_source(safe) - ident).norm()
        isometry[i] = residual
        worst = max(worst, residual)
        if strict and residual > tol:
            raise RelationViolated(f"a{i}* a{i} = 1", residual, tol)
    for i in range(1, t.n + 1):
        for j in range(1, t.n + 1):
            if i == j:
                continue
            op = annihilation(i, t) @ creation(j, t) - t.q.entry(i, j) * (creation(j, t) @ annihilation(i, t))
            residual = op.restrict_source(safe).norm()
            cross[(i, j)] = residual
            worst = max(worst, residual)
            if strict and residual > tol:
                raise RelationViolated(f"a{i}* a{j} = q_{i}{j} a{j} a{i}*", residual, tol)
    note = f"boundary level {t.L} excluded: creation truncates there by construction"
    return RelationReport(
        n=t.n, L=t.L, tol=tol, isometry=isometry, cross=cross,
        boundary_note=note, max_residual=worst, passed=worst <= tol,
    )


def balanced_block_keys(t: TruncatedFock, bound: OccVector) -> list[OccVector]:
    """Diagonal block keys (w, w) for w <= bound, in level-lex order."""
    return [v for v in _sorted_keys(t.blocks) if v <= bound]


def flatten_on_blocks(op: GradedOperator, keys: list[OccVector]) -> np.ndarray:
    """Concatenate the diagonal blocks (w, w), w in keys, into one vector."""
    parts = [op.block(w, w).ravel() for w in keys]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)
