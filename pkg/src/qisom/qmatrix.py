"""Deformation coefficient matrices.

The commutation coefficients form an n x n complex matrix with
q_ji = conj(q_ij) and max |q_ij| strictly below 1. The isometric algebra
additionally requires a zero diagonal; matrices with nonzero (real)
diagonal entries are accepted for inner-product and symmetry computations,
and any operation that rewrites words must call :meth:`QMatrix.require_isom`
first.
"""

from __future__ import annotations

import numpy as np

_HERMITIAN_TOL = 1e-12


class QMatrixError(ValueError):
    """Raised when a coefficient matrix violates one of its invariants."""


class QMatrix:
    """Validated matrix of commutation coefficients.

    Instances are immutable; the underlying array is write-protected. A
    per-instance cache for the deformed inner product hangs off the object
    so repeated recursions share subproblems.
    """

    __slots__ = ("array", "_fock_cache")

    def __init__(self, array) -> None:
        q = np.array(array, dtype=complex)
        if q.ndim != 2 or q.shape[0] != q.shape[1] or q.shape[0] < 1:
            raise QMatrixError(f"coefficient matrix must be square and nonempty, got shape {q.shape}")
        if not np.allclose(q, q.conj().T, rtol=0.0, atol=_HERMITIAN_TOL):
            worst = np.unravel_index(np.argmax(np.abs(q - q.conj().T)), q.shape)
            raise QMatrixError(
                "violated invariant q_ji = conj(q_ij) (Hermitian symmetry), "
                f"worst entry at (i,j) = ({worst[0] + 1},{worst[1] + 1})"
            )
        top = float(np.max(np.abs(q)))
        if not top < 1.0:
            raise QMatrixError(f"violated invariant max |q_ij| < 1 (modulus bound), got {top}")
        q.setflags(write=False)
        object.__setattr__(self, "array", q)
        object.__setattr__(self, "_fock_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    @property
    def n(self) -> int:
        return self.array.shape[0]

    @property
    def max_modulus(self) -> float:
        return float(np.max(np.abs(self.array)))

    @property
    def isom_mode(self) -> bool:
        """True when every diagonal entry is exactly zero."""
        return bool(np.all(self.array.diagonal() == 0))

    def require_isom(self) -> None:
        if not self.isom_mode:
            raise QMatrixError(
                "violated invariant q_ii = 0 (zero diagonal): "
                "word rewriting is only defined for the isometric algebra"
            )

    def entry(self, i: int, j: int) -> complex:
        """Coefficient q_ij with 1-based generator labels."""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError(f"generator labels ({i},{j}) outside 1..{self.n}")
        return complex(self.array[i - 1, j - 1])

    @classmethod
    def zero(cls, n: int) -> "QMatrix":
        return cls(np.zeros((n, n), dtype=complex))

    @classmethod
    def random(cls, n: int, seed: int = 0, max_modulus: float = 0.8,
               diagonal=None) -> "QMatrix":
        """Seeded random coefficients, exactly Hermitian.

        With the default zero diagonal the off-diagonal block is rescaled so
        its largest modulus equals ``max_modulus``. Passing ``diagonal``
        (a sequence of reals, each of modulus < 1) produces a general-mode
        matrix for symmetry computations.
        """
        if not 0.0 <= max_modulus < 1.0:
            raise QMatrixError(f"violated invariant max |q_ij| < 1 (modulus bound), requested {max_modulus}")
        rng = np.random.default_rng(seed)
        q = np.zeros((n, n), dtype=complex)
        for i in range(n):
            for j in range(i + 1, n):
                modulus = rng.uniform(0.3, 1.0)
                phase = rng.uniform(0.0, 2.0 * np.pi)
                q[i, j] = modulus * np.exp(1j * phase)
                q[j, i] = np.conj(q[i, j])
        off_top = float(np.max(np.abs(q))) if n > 1 else 0.0
        if off_top > 0.0:
            q *= max_modulus / off_top
        if diagonal is not None:
            diag = [float(d) for d in diagonal]
            if len(diag) != n:
                raise QMatrixError(f"diagonal has {len(diag)} entries, expected {n}")
            for i, d in enumerate(diag):
                q[i, i] = d
        return cls(q)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": [[[float(z.real), float(z.imag)] for z in row] for row in self.array],
        }

    @classmethod
    def from_json(cls, payload: dict) -> "QMatrix":
        try:
            n = int(payload["n"])
            rows = payload["q"]
        except (KeyError, TypeError, ValueError) as exc:
            raise QMatrixError(f"coefficient file needs integer 'n' and array 'q': {exc}") from None
        if len(rows) != n or any(len(row) != n for row in rows):
            raise QMatrixError(f"'q' must be an {n} x {n} array of [re, im] pairs")
        try:
            q = np.array([[complex(c[0], c[1]) for c in row] for row in rows])
        except (TypeError, IndexError) as exc:
            raise QMatrixError(f"'q' entries must be [re, im] pairs: {exc}") from None
        return cls(q)

    def __repr__(self) -> str:
        kind = "isometric" if self.isom_mode else "general"
        return f"QMatrix(n={self.n}, {kind}, max|q|={self.max_modulus:.3f})"
