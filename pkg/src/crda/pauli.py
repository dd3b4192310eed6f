"""N-qubit Pauli-string operator algebra with dense and matrix-free backends.

Operators are complex-weighted sums of Pauli strings (tensor products of
I, X, Y, Z). Strings are stored in the symplectic encoding: a pair of
N-bit masks ``(x, z)`` with bit ``k`` describing site ``k``, and an
explicit power of ``i`` folded into the coefficient. Term products and
commutators then cost O(N) per pair instead of O(4^N).

Conventions (fixed once, used everywhere):

* Site indices are 0-based internally; chain site ``k`` of a 1-based
  physics description maps to index ``k - 1``. Pattern strings are
  written with site 0 leftmost.
* In dense matrices and state vectors, site 0 is the least significant
  bit of the computational-basis index.
* ``frobenius_norm(..., normalized=True)`` uses the trace convention
  tr(1) = 1, i.e. sqrt(tr(A†A) / 2^N); the unnormalized variant carries
  the extra 2^(N/2).

Sums are canonical: one entry per string, coefficients below
``PRUNE_TOL`` (absolute) are dropped. All reductions iterate terms in
sorted mask order so repeated runs are bitwise deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np
import scipy.linalg
import scipy.sparse

__all__ = [
    "PRUNE_TOL",
    "DEFAULT_DENSE_LIMIT",
    "ConvergenceError",
    "DenseLimitError",
    "PauliTerm",
    "PauliSum",
    "multiply",
    "commutator",
    "anticommutes",
    "to_dense",
    "apply",
    "frobenius_norm",
    "spectral_norm",
    "spectral_norm_dense",
    "expm_hermitian",
]

# Coefficients below this magnitude are numerical noise at double precision.
PRUNE_TOL = 1e-14

# 2^12 dense eigensolves stay seconds-scale; larger sizes must go matrix-free.
DEFAULT_DENSE_LIMIT = 12

_LETTERS = "IXYZ"
# letter -> (x bit, z bit)
_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_LETTER_OF = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}

_PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_I_POW = (1.0 + 0j, 1j, -1.0 + 0j, -1j)


class ConvergenceError(RuntimeError):
    """Iterative norm estimation failed to converge within the budget."""


class DenseLimitError(ValueError):
    """A dense-only operation was requested above the configured qubit limit."""


def _check_dense(n: int, dense_limit: int, what: str) -> None:
    if n > dense_limit:
        raise DenseLimitError(
            f"{what} needs a dense {2**n} x {2**n} matrix; "
            f"limit is {dense_limit} qubits (got {n})"
        )


def _product_phase_exp(x1: int, z1: int, x2: int, z2: int) -> int:
    """Power of i picked up when composing two symplectic-encoded strings."""
    x3 = x1 ^ x2
    z3 = z1 ^ z2
    exp = (
        (x1 & z1).bit_count()
        + (x2 & z2).bit_count()
        + 2 * (z1 & x2).bit_count()
        - (x3 & z3).bit_count()
    )
    return exp % 4


@dataclass(frozen=True)
class PauliTerm:
    """A single Pauli string with a complex coefficient.

    ``x`` and ``z`` are bit masks over the ``n`` sites; bit ``k`` set in
    ``x`` (``z``) means the site-``k`` factor contains an X (Z) component,
    with both set meaning Y.
    """

    n: int
    x: int
    z: int
    coeff: complex

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("need at least one site")
        if self.x >> self.n or self.z >> self.n:
            raise ValueError("mask bits outside the registered site range")
        c = complex(self.coeff)
        if not (np.isfinite(c.real) and np.isfinite(c.imag)):
            raise ValueError("coefficient must be finite")

    @classmethod
    def from_pattern(cls, pattern: str, coeff: complex = 1.0) -> "PauliTerm":
        x = z = 0
        for k, letter in enumerate(pattern):
            try:
                bx, bz = _BITS[letter]
            except KeyError:
                raise ValueError(f"invalid Pauli letter {letter!r}") from None
            x |= bx << k
            z |= bz << k
        return cls(len(pattern), x, z, complex(coeff))

    @classmethod
    def from_sites(
        cls, n: int, sites: Mapping[int, str], coeff: complex = 1.0
    ) -> "PauliTerm":
        """Build a string that is identity except at the given 0-based sites."""
        x = z = 0
        for k, letter in sites.items():
            if not 0 <= k < n:
                raise ValueError(f"site {k} outside range 0..{n - 1}")
            bx, bz = _BITS[letter]
            if bx == bz == 0:
                continue
            if (x >> k) & 1 or (z >> k) & 1:
                raise ValueError(f"site {k} assigned twice")
            x |= bx << k
            z |= bz << k
        return cls(n, x, z, complex(coeff))

    @property
    def pattern(self) -> str:
        return "".join(
            _LETTER_OF[((self.x >> k) & 1, (self.z >> k) & 1)] for k in range(self.n)
        )

    @property
    def weight(self) -> int:
        """Number of non-identity sites."""
        return (self.x | self.z).bit_count()

    def dense(self) -> np.ndarray:
        """Dense matrix with site 0 as the least significant index bit."""
        mat = np.array([[self.coeff]], dtype=complex)
        pat = self.pattern
        for k in range(self.n - 1, -1, -1):
            mat = np.kron(mat, _PAULI_MATS[pat[k]])
        return mat


def multiply(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    """Matrix product of two Pauli terms, phase folded into the coefficient."""
    if a.n != b.n:
        raise ValueError(f"pattern length mismatch: {a.n} != {b.n}")
    phase = _I_POW[_product_phase_exp(a.x, a.z, b.x, b.z)]
    return PauliTerm(a.n, a.x ^ b.x, a.z ^ b.z, a.coeff * b.coeff * phase)


def anticommutes(a: PauliTerm, b: PauliTerm) -> bool:
    """True when the two strings anticommute (odd count of clashing sites)."""
    return (((a.x & b.z).bit_count() + (a.z & b.x).bit_count()) % 2) == 1


class PauliSum:
    """Canonical complex-weighted sum of Pauli strings on ``n`` sites.

    Treat instances as immutable: every operation returns a new sum.
    Construction merges duplicate strings and prunes coefficients with
    magnitude below ``PRUNE_TOL``.
    """

    __slots__ = ("n", "_terms", "_apply_plan")

    def __init__(self, n: int, terms: Mapping[tuple[int, int], complex] | None = None):
        if n < 1:
            raise ValueError("need at least one site")
        self.n = n
        clean: dict[tuple[int, int], complex] = {}
        if terms:
            for key in sorted(terms):
                c = complex(terms[key])
                if not (np.isfinite(c.real) and np.isfinite(c.imag)):
                    raise ValueError("coefficient must be finite")
                if abs(c) > PRUNE_TOL:
                    clean[key] = c
        self._terms = clean
        self._apply_plan: list[tuple[np.ndarray, np.ndarray]] | None = None

    # ------------------------------------------------------------------
    # construction helpers
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "PauliSum":
        return cls(n, {})

    @classmethod
    def identity(cls, n: int, coeff: complex = 1.0) -> "PauliSum":
        return cls(n, {(0, 0): complex(coeff)})

    @classmethod
    def from_term(cls, term: PauliTerm) -> "PauliSum":
        return cls(term.n, {(term.x, term.z): term.coeff})

    @classmethod
    def from_terms(cls, terms: Iterable[PauliTerm]) -> "PauliSum":
        terms = list(terms)
        if not terms:
            raise ValueError("empty term list; use PauliSum.zero(n)")
        n = terms[0].n
        acc: dict[tuple[int, int], complex] = {}
        for t in terms:
            if t.n != n:
                raise ValueError("mixed site counts in term list")
            key = (t.x, t.z)
            acc[key] = acc.get(key, 0.0) + t.coeff
        return cls(n, acc)

    @classmethod
    def from_pattern(cls, pattern: str, coeff: complex = 1.0) -> "PauliSum":
        return cls.from_term(PauliTerm.from_pattern(pattern, coeff))

    @classmethod
    def from_sites(
        cls, n: int, sites: Mapping[int, str], coeff: complex = 1.0
    ) -> "PauliSum":
        return cls.from_term(PauliTerm.from_sites(n, sites, coeff))

    # ------------------------------------------------------------------
    # basic queries
    # ------------------------------------------------------------------

    def terms(self) -> list[PauliTerm]:
        """Terms in sorted mask order (deterministic)."""
        return [PauliTerm(self.n, x, z, c) for (x, z), c in self._terms.items()]

    def coefficient(self, pattern: str) -> complex:
        t = PauliTerm.from_pattern(pattern)
        if t.n != self.n:
            raise ValueError("pattern length mismatch")
        return self._terms.get((t.x, t.z), 0.0 + 0j)

    def num_terms(self) -> int:
        return len(self._terms)

    def is_zero(self, tol: float = 0.0) -> bool:
        if tol <= 0.0:
            return not self._terms
        return all(abs(c) <= tol for c in self._terms.values())

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        # Pure Pauli strings are Hermitian, so Hermiticity means real weights.
        return all(abs(c.imag) <= tol for c in self._terms.values())

    def dagger(self) -> "PauliSum":
        return PauliSum(self.n, {k: c.conjugate() for k, c in self._terms.items()})

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def allclose(self, other: "PauliSum", tol: float = 1e-12) -> bool:
        if self.n != other.n:
            return False
        keys = set(self._terms) | set(other._terms)
        return all(
            abs(self._terms.get(k, 0.0) - other._terms.get(k, 0.0)) <= tol
            for k in keys
        )

    def __repr__(self) -> str:
        body = " + ".join(
            f"({c:.6g})*{PauliTerm(self.n, x, z, 1).pattern}"
            for (x, z), c in list(self._terms.items())[:6]
        )
        more = "" if len(self._terms) <= 6 else f" + ... [{len(self._terms)} terms]"
        return f"PauliSum(n={self.n}: {body or '0'}{more})"

    # ------------------------------------------------------------------
    # algebra
    # ------------------------------------------------------------------

    def _require_same_size(self, other: "PauliSum") -> None:
        if self.n != other.n:
            raise ValueError(f"site count mismatch: {self.n} != {other.n}")

    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._require_same_size(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, 0.0) + c
        return PauliSum(self.n, acc)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        self._require_same_size(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, 0.0) - c
        return PauliSum(self.n, acc)

    def __neg__(self) -> "PauliSum":
        return PauliSum(self.n, {k: -c for k, c in self._terms.items()})

    def __mul__(self, scalar: complex) -> "PauliSum":
        s = complex(scalar)
        return PauliSum(self.n, {k: c * s for k, c in self._terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "PauliSum") -> "PauliSum":
        """Operator product, canonicalized."""
        self._require_same_size(other)
        acc: dict[tuple[int, int], complex] = {}
        for (x1, z1), c1 in self._terms.items():
            for (x2, z2), c2 in other._terms.items():
                key = (x1 ^ x2, z1 ^ z2)
                phase = _I_POW[_product_phase_exp(x1, z1, x2, z2)]
                acc[key] = acc.get(key, 0.0) + c1 * c2 * phase
        return PauliSum(self.n, acc)

    # ------------------------------------------------------------------
    # numerical backends
    # ------------------------------------------------------------------

    def to_dense(self, dense_limit: int = DEFAULT_DENSE_LIMIT) -> np.ndarray:
        _check_dense(self.n, dense_limit, "to_dense")
        dim = 1 << self.n
        out = np.zeros((dim, dim), dtype=complex)
        for t in self.terms():
            out += t.dense()
        return out

    def to_sparse(self) -> scipy.sparse.csr_matrix:
        """CSR matrix; each string contributes one permutation diagonal."""
        dim = 1 << self.n
        idx = np.arange(dim, dtype=np.int64)
        rows, cols, data = [], [], []
        for (x, z), c in self._terms.items():
            phases = c * _I_POW[(x & z).bit_count() % 4] * _parity_signs(idx, z)
            rows.append(idx ^ x)
            cols.append(idx)
            data.append(phases)
        if not rows:
            return scipy.sparse.csr_matrix((dim, dim), dtype=complex)
        return scipy.sparse.csr_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
            shape=(dim, dim),
        )

    def _plan(self) -> list[tuple[np.ndarray, np.ndarray]]:
        # Per-term (permutation, phase vector), built once and reused by apply().
        if self._apply_plan is None:
            dim = 1 << self.n
            idx = np.arange(dim, dtype=np.int64)
            plan = []
            for (x, z), c in self._terms.items():
                phase = c * _I_POW[(x & z).bit_count() % 4] * _parity_signs(idx, z)
                plan.append((idx ^ x, phase))
            self._apply_plan = plan
        return self._apply_plan

    def apply(self, state: np.ndarray) -> np.ndarray:
        """Matrix-free matvec; equals ``to_dense() @ state`` on small sizes."""
        state = np.asarray(state, dtype=complex)
        if state.shape != (1 << self.n,):
            raise ValueError(
                f"state has {state.shape} amplitudes; expected {(1 << self.n,)}"
            )
        out = np.zeros_like(state)
        for perm, phase in self._plan():
            out[perm] += phase * state
        return out

    def expectation(self, state: np.ndarray) -> complex:
        return complex(np.vdot(state, self.apply(state)))

    def frobenius_norm(self, normalized: bool = True) -> float:
        """sqrt of the summed squared weights, via Pauli-string orthogonality."""
        s = np.sqrt(sum(abs(c) ** 2 for c in self._terms.values()))
        return float(s if normalized else s * 2 ** (self.n / 2))

    # ------------------------------------------------------------------
    # serialization
    # ------------------------------------------------------------------

    def to_json_dict(self) -> dict:
        rows = sorted(
            (t.pattern, t.coeff.real, t.coeff.imag) for t in self.terms()
        )
        return {
            "n": self.n,
            "terms": [{"p": p, "re": re, "im": im} for p, re, im in rows],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "PauliSum":
        n = int(data["n"])
        acc: dict[tuple[int, int], complex] = {}
        for row in data["terms"]:
            t = PauliTerm.from_pattern(row["p"], complex(row["re"], row.get("im", 0.0)))
            if t.n != n:
                raise ValueError("pattern length inconsistent with n")
            acc[(t.x, t.z)] = acc.get((t.x, t.z), 0.0) + t.coeff
        return cls(n, acc)


def _parity_signs(idx: np.ndarray, z: int) -> np.ndarray:
    """(-1)^popcount(idx & z) for every basis index, as a float array."""
    parity = np.zeros(idx.shape, dtype=np.int64)
    zz = z
    while zz:
        b = (zz & -zz).bit_length() - 1
        parity ^= (idx >> b) & 1
        zz &= zz - 1
    return 1.0 - 2.0 * parity


# ----------------------------------------------------------------------
# module-level operations
# ----------------------------------------------------------------------


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """Exact ``ab - ba`` in canonical pruned form.

    Commuting string pairs are skipped: for anticommuting strings P, Q the
    pair contributes 2*PQ, otherwise nothing.
    """
    if a.n != b.n:
        raise ValueError(f"site count mismatch: {a.n} != {b.n}")
    acc: dict[tuple[int, int], complex] = {}
    for (x1, z1), c1 in a._terms.items():
        for (x2, z2), c2 in b._terms.items():
            if (((x1 & z2).bit_count() + (z1 & x2).bit_count()) % 2) == 0:
                continue
            key = (x1 ^ x2, z1 ^ z2)
            phase = _I_POW[_product_phase_exp(x1, z1, x2, z2)]
            acc[key] = acc.get(key, 0.0) + 2.0 * c1 * c2 * phase
    return PauliSum(a.n, acc)


def to_dense(h: PauliSum, dense_limit: int = DEFAULT_DENSE_LIMIT) -> np.ndarray:
    return h.to_dense(dense_limit)


def apply(h: PauliSum, state: np.ndarray) -> np.ndarray:
    return h.apply(state)


def frobenius_norm(h: PauliSum, normalized: bool = True) -> float:
    return h.frobenius_norm(normalized)


def spectral_norm_dense(m: np.ndarray, hermitian: bool = False) -> float:
    if hermitian:
        return float(np.max(np.abs(np.linalg.eigvalsh(m)))) if m.size else 0.0
    return float(np.linalg.norm(m, 2))


def _lanczos_extreme(
    matvec: Callable[[np.ndarray], np.ndarray],
    dim: int,
    tol: float,
    max_iter: int,
    seed: int,
) -> float:
    """Largest |eigenvalue| of a Hermitian operator by Lanczos iteration.

    Full reorthogonalization for stability; deterministic seeded start
    vector; converged when the extreme Ritz values are stable to ``tol``
    relative between consecutive iterations.
    """
    rng = np.random.default_rng(seed)
    q = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    q /= np.linalg.norm(q)
    basis = [q]
    alphas: list[float] = []
    betas: list[float] = []
    max_dim = min(dim, max_iter)
    for _ in range(max_dim):
        w = matvec(basis[-1])
        alpha = float(np.real(np.vdot(basis[-1], w)))
        alphas.append(alpha)
        w = w - alpha * basis[-1]
        if len(basis) > 1:
            w = w - betas[-1] * basis[-2]
        # full reorthogonalization against all previous vectors
        for v in basis:
            w = w - np.vdot(v, w) * v
        beta = float(np.linalg.norm(w))
        theta, vecs = scipy.linalg.eigh_tridiagonal(
            np.array(alphas), np.array(betas)
        )
        cur = float(np.max(np.abs(theta)))
        if beta < 1e-13:
            return cur  # invariant subspace found; Ritz values exact
        # residual bound |beta * (last component of Ritz vector)| for the
        # two extreme pairs; both ends must settle since either may carry
        # the largest magnitude
        res_lo = beta * abs(vecs[-1, 0])
        res_hi = beta * abs(vecs[-1, -1])
        if max(res_lo, res_hi) <= tol * max(cur, 1e-300):
            return cur
        betas.append(beta)
        basis.append(w / beta)
    raise ConvergenceError(
        f"Lanczos did not converge in {max_dim} iterations (tol={tol})"
    )


def spectral_norm(
    h: PauliSum,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
    tol: float = 1e-8,
    max_iter: int = 10_000,
    seed: int = 7,
) -> float:
    """Largest singular value of the operator.

    Dense eigensolve up to ``dense_limit`` qubits; above that, matrix-free
    Lanczos on a Hermitian proxy (the operator itself if Hermitian, i*h if
    anti-Hermitian, h†h otherwise).
    """
    if h.is_zero():
        return 0.0
    if h.n <= dense_limit:
        m = h.to_dense(dense_limit)
        return spectral_norm_dense(m, hermitian=h.is_hermitian())
    dim = 1 << h.n
    if h.is_hermitian():
        return _lanczos_extreme(h.apply, dim, tol, max_iter, seed)
    ih = 1j * h
    if ih.is_hermitian():
        return _lanczos_extreme(ih.apply, dim, tol, max_iter, seed)
    hd = h.dagger()

    def gram(v: np.ndarray) -> np.ndarray:
        return hd.apply(h.apply(v))

    return float(np.sqrt(_lanczos_extreme(gram, dim, tol, max_iter, seed)))


def expm_hermitian(
    h: PauliSum, t: float, dense_limit: int = DEFAULT_DENSE_LIMIT
) -> np.ndarray:
    """Unitary exp(-i h t) by dense eigendecomposition of a Hermitian sum."""
    if not h.is_hermitian():
        raise ValueError("expm_hermitian requires a Hermitian operator")
    _check_dense(h.n, dense_limit, "expm_hermitian")
    m = h.to_dense(dense_limit)
    evals, evecs = np.linalg.eigh(m)
    return (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T
