"""Discrete operator calculus for linear and quadratic bosonic forms.

Operators are expanded over N orthonormal modes with [a_i, a_j^dag] = d_ij.
A linear form stores coefficient vectors over {a_i} and {a_i^dag}; a
quadratic form stores normally ordered coefficients without double counting
(i <= j for the symmetric a_i a_j and a_i^dag a_j^dag pairs).

The parallelization of a quadratic form B with respect to mode k collects
every term that fails to commute with a_k or a_k^dag,

    B_par_k = [B, a_k^dag] a_k + a_k^dag [a_k, B] - (diagonal double count),

so that B = B_par_k + B_perp_k with B_perp_k commuting with both.  These
coefficient-level identities are exact; no truncation is involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "LinearForm",
    "QuadraticForm",
    "commutator",
    "comm_with_dag",
    "signed_norm",
    "vacuum_moments",
    "comm_quad_linear",
    "decompose_linear",
    "reconstruct_linear",
    "parallelize_quadratic",
    "parallelize_pair",
]

ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class LinearForm:
    """sum_i a_coef[i] a_i + adag_coef[i] a_i^dag."""

    a: np.ndarray
    adag: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=complex))
        object.__setattr__(self, "adag", np.asarray(self.adag, dtype=complex))
        if self.a.shape != self.adag.shape or self.a.ndim != 1 or self.a.size < 1:
            raise ValueError("coefficient vectors must be equal-length 1-d arrays")

    @property
    def n_modes(self) -> int:
        return self.a.size

    @classmethod
    def zero(cls, n: int) -> "LinearForm":
        return cls(np.zeros(n, complex), np.zeros(n, complex))

    @classmethod
    def basis(cls, n: int, k: int) -> "LinearForm":
        a = np.zeros(n, complex)
        a[k] = 1.0
        return cls(a, np.zeros(n, complex))

    def dagger(self) -> "LinearForm":
        return LinearForm(np.conj(self.adag), np.conj(self.a))

    def scaled(self, c) -> "LinearForm":
        return LinearForm(c * self.a, c * self.adag)

    def plus(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(self.a + other.a, self.adag + other.adag)

    def minus(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(self.a - other.a, self.adag - other.adag)

    def max_abs(self) -> float:
        return float(max(np.abs(self.a).max(), np.abs(self.adag).max()))


def commutator(u: LinearForm, v: LinearForm) -> complex:
    """[U, V] for two linear forms."""
    return complex(np.dot(u.a, v.adag) - np.dot(u.adag, v.a))


def comm_with_dag(u: LinearForm, v: LinearForm) -> complex:
    """[U, V^dag]."""
    return complex(np.dot(u.a, np.conj(v.a)) - np.dot(u.adag, np.conj(v.adag)))


def signed_norm(u: LinearForm) -> float:
    """[U, U^dag] = |a|^2 - |adag|^2 (real)."""
    return float(np.sum(np.abs(u.a) ** 2) - np.sum(np.abs(u.adag) ** 2))


def vacuum_moments(u: LinearForm):
    """(<U^dag U>, <U U^dag>, <U^2>) in the multimode vacuum."""
    n = float(np.sum(np.abs(u.adag) ** 2))
    anti = float(np.sum(np.abs(u.a) ** 2))
    sq = complex(np.dot(u.a, u.adag))
    return n, anti, sq


def _upper(mat: np.ndarray) -> np.ndarray:
    return np.triu(mat)


@dataclass(frozen=True)
class QuadraticForm:
    """Normally ordered quadratic form.

    aa[i, j] (i <= j): coefficient of a_i a_j
    da[i, j]         : coefficient of a_i^dag a_j
    dd[i, j] (i <= j): coefficient of a_i^dag a_j^dag
    """

    aa: np.ndarray
    da: np.ndarray
    dd: np.ndarray

    def __post_init__(self):
        aa = np.asarray(self.aa, dtype=complex)
        da = np.asarray(self.da, dtype=complex)
        dd = np.asarray(self.dd, dtype=complex)
        n = da.shape[0]
        if not (aa.shape == da.shape == dd.shape == (n, n)):
            raise ValueError("coefficient matrices must share a square shape")
        if np.any(np.tril(aa, -1) != 0) or np.any(np.tril(dd, -1) != 0):
            raise ValueError("aa and dd must be stored upper-triangular (i <= j)")
        object.__setattr__(self, "aa", aa)
        object.__setattr__(self, "da", da)
        object.__setattr__(self, "dd", dd)

    @property
    def n_modes(self) -> int:
        return self.da.shape[0]

    @classmethod
    def zero(cls, n: int) -> "QuadraticForm":
        z = np.zeros((n, n), complex)
        return cls(z.copy(), z.copy(), z.copy())

    def dagger(self) -> "QuadraticForm":
        return QuadraticForm(np.conj(self.dd), np.conj(self.da).T, np.conj(self.aa))

    def is_antihermitian(self, tol: float = 1e-12) -> bool:
        d = self.dagger()
        scale = max(self.max_abs(), 1e-300)
        return (
            np.abs(d.aa + self.aa).max() <= tol * scale
            and np.abs(d.da + self.da).max() <= tol * scale
            and np.abs(d.dd + self.dd).max() <= tol * scale
        )

    def scaled(self, c) -> "QuadraticForm":
        return QuadraticForm(c * self.aa, c * self.da, c * self.dd)

    def plus(self, other: "QuadraticForm") -> "QuadraticForm":
        return QuadraticForm(self.aa + other.aa, self.da + other.da, self.dd + other.dd)

    def minus(self, other: "QuadraticForm") -> "QuadraticForm":
        return QuadraticForm(self.aa - other.aa, self.da - other.da, self.dd - other.dd)

    def max_abs(self) -> float:
        return float(max(np.abs(self.aa).max(), np.abs(self.da).max(),
                         np.abs(self.dd).max()))


def comm_quad_linear(b: QuadraticForm, l: LinearForm) -> LinearForm:
    """[B, L] of a quadratic with a linear form (a linear form).

    Uses the symmetrized matrices S_aa = aa + aa^T and S_dd = dd + dd^T,
    whose doubled diagonals account for [a_i a_i, a_i^dag] = 2 a_i.
    """
    saa = b.aa + b.aa.T
    sdd = b.dd + b.dd.T
    out_a = saa @ l.adag - b.da.T @ l.a
    out_d = b.da @ l.adag - sdd @ l.a
    return LinearForm(out_a, out_d)


def decompose_linear(a_form: LinearForm, basis):
    """Expansion coefficients of a linear form over an orthonormal mode basis.

    Returns (coef, coef_prime) with A = sum_k coef[k] b_k + coef_prime[k]
    b_k^dag, where coef[k] = [A, b_k^dag] and coef_prime[k] = [b_k, A].
    Raises ValueError when the basis is not orthonormal ([b_k, b_l^dag]
    != delta or [b_k, b_l] != 0 beyond 1e-10).
    """
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            if abs(comm_with_dag(bi, bj) - (1.0 if i == j else 0.0)) > ORTHO_TOL:
                raise ValueError("basis is not orthonormal: [b_i, b_j^dag] != delta_ij")
            if abs(commutator(bi, bj)) > ORTHO_TOL:
                raise ValueError("basis is not orthonormal: [b_i, b_j] != 0")
    coef = np.array([comm_with_dag(a_form, bk) for bk in basis])
    coef_prime = np.array([commutator(bk, a_form) for bk in basis])
    return coef, coef_prime


def reconstruct_linear(coef, coef_prime, basis) -> LinearForm:
    out = LinearForm.zero(basis[0].n_modes)
    for ck, cpk, bk in zip(coef, coef_prime, basis):
        out = out.plus(bk.scaled(ck)).plus(bk.dagger().scaled(cpk))
    return out


def _linear_times_ak(l: LinearForm, k: int) -> QuadraticForm:
    """Normally ordered product L * a_k (no reordering terms arise)."""
    n = l.n_modes
    q = QuadraticForm.zero(n)
    for i in range(n):
        if l.a[i] != 0:
            q.aa[min(i, k), max(i, k)] += l.a[i]
        if l.adag[i] != 0:
            q.da[i, k] += l.adag[i]
    return q


def _adagk_times_linear(k: int, l: LinearForm) -> QuadraticForm:
    """Normally ordered product a_k^dag * L."""
    n = l.n_modes
    q = QuadraticForm.zero(n)
    for j in range(n):
        if l.a[j] != 0:
            q.da[k, j] += l.a[j]
        if l.adag[j] != 0:
            q.dd[min(k, j), max(k, j)] += l.adag[j]
    return q


def parallelize_quadratic(b: QuadraticForm, k: int):
    """Split B into (B_par_k, B_perp_k) with respect to mode k.

    B_par_k holds every term containing a_k or a_k^dag; B_perp_k commutes
    with both.  The sum reconstructs B exactly at coefficient level.
    """
    n = b.n_modes
    ek = LinearForm.basis(n, k)
    left = comm_quad_linear(b, ek.dagger())        # [B, a_k^dag]
    right = comm_quad_linear(b, ek).scaled(-1.0)   # [a_k, B]
    par = _linear_times_ak(left, k).plus(_adagk_times_linear(k, right))
    # the k-diagonal terms are produced by both products: remove one copy
    corr = QuadraticForm.zero(n)
    corr.aa[k, k] = b.aa[k, k]
    corr.da[k, k] = b.da[k, k]
    corr.dd[k, k] = b.dd[k, k]
    par = par.minus(corr)
    return par, b.minus(par)


def parallelize_pair(b: QuadraticForm, k: int, kp: int) -> QuadraticForm:
    """The (k, k') block of B: terms coupling exactly the modes k and k'.

    Summing over all ordered pairs k <= k' reconstructs B exactly.
    """
    k, kp = min(k, kp), max(k, kp)
    q = QuadraticForm.zero(b.n_modes)
    q.aa[k, kp] = b.aa[k, kp]
    q.da[k, kp] = b.da[k, kp]
    if k != kp:
        q.da[kp, k] = b.da[kp, k]
    q.dd[k, kp] = b.dd[k, kp]
    return q
