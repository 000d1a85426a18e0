"""Approximation hierarchy for quadratic bosonic actions on discrete grids.

An anti-Hermitian quadratic action S generates the Heisenberg evolution
O' = O + [O, S] + [[O, S], S]/2! + ...  Repeated commutation of a seed mode
u with S produces the chain modes

    c_n = [c_{n-1}, S] / theta_n,      theta_n = sqrt(|[v_n, v_n^dag]|),

alternating between the two frequency sectors the action couples.  Keeping
the action terms within the first n chain modes yields the nth-order
unitary evolution; n = 1 gives the cos/cosh two-mode rotation, n = 2 the
closed four-case formula (equivalently its compact M-coefficient form).
Exponentiating the adjoint action on the full coefficient space gives the
exact Bogoliubov map used as the ground-truth oracle for both orders.

All operators here live on standard bosonic grid modes ([a_i, a_j^dag] =
delta_ij); negative-frequency content appears as creation coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .opalgebra import (
    LinearForm,
    QuadraticForm,
    comm_quad_linear,
    comm_with_dag,
    commutator,
    signed_norm,
)

__all__ = [
    "DiscreteGrid",
    "KernelMatrix",
    "ChainMode",
    "ChainDecomposition",
    "EvolvedOperator",
    "BogoliubovMap",
    "MatrixExponentialError",
    "make_grid",
    "discretize_action",
    "nearest_nir_mode",
    "build_chain",
    "orthogonalize_chain",
    "chain_decomposition",
    "evolution_factors",
    "evolve_first_order",
    "evolve_second_order",
    "four_case_evolution",
    "m_form_evolution",
    "perturbation_baseline",
    "exact_bogoliubov",
    "vacuum_covariance",
    "variance_of_linear_form",
    "quadratic_to_sigma",
    "adjoint_matrix",
]

COMM_SIGN_CUTOFF = 1e-8


class MatrixExponentialError(RuntimeError):
    """The adjoint-action exponential produced non-finite entries."""


@dataclass(frozen=True)
class DiscreteGrid:
    """Positive-frequency bin centers with per-sector widths.

    The first mir_count centers sample the MIR band (0, Lambda]; the rest
    sample the NIR detection window above Lambda.
    """

    centers: np.ndarray
    mir_count: int
    delta_mir: float
    delta_nir: float
    lambda_cut: float

    def __post_init__(self):
        centers = np.asarray(self.centers, dtype=float)
        object.__setattr__(self, "centers", centers)
        if not (self.delta_mir > 0 and self.delta_nir > 0):
            raise ValueError("bin widths must be positive")
        if np.any(np.diff(centers[:self.mir_count]) <= 0) or np.any(
                np.diff(centers[self.mir_count:]) <= 0):
            raise ValueError("bin centers must be sorted")
        if np.any(centers[:self.mir_count] >= self.lambda_cut) or np.any(
                centers[self.mir_count:] <= self.lambda_cut):
            raise ValueError("grid does not respect the MIR/NIR partition")

    @property
    def n_modes(self) -> int:
        return self.centers.size

    @property
    def mir(self) -> np.ndarray:
        return self.centers[:self.mir_count]

    @property
    def nir(self) -> np.ndarray:
        return self.centers[self.mir_count:]


def make_grid(setup, filt, n_mir: int = 64, n_nir: int = 64,
              nir_span_sigma: float = 5.0) -> DiscreteGrid:
    """Uniform bins: n_mir over (0, Lambda], n_nir over the filter
    neighborhood clipped to (Lambda, omega_cap]."""
    lam = setup.partition.lambda_cut
    d_mir = lam / n_mir
    mir = (np.arange(n_mir) + 0.5) * d_mir
    lo = max(filt.omega_tilde - nir_span_sigma * setup.probe.sigma_p, lam * (1 + 1e-9))
    hi = min(filt.omega_tilde + nir_span_sigma * setup.probe.sigma_p, setup.omega_cap)
    d_nir = (hi - lo) / n_nir
    nir = lo + (np.arange(n_nir) + 0.5) * d_nir
    return DiscreteGrid(np.concatenate([mir, nir]), n_mir, d_mir, d_nir, lam)


@dataclass(frozen=True)
class KernelMatrix:
    """Discretized action: a quadratic form over the grid modes."""

    form: QuadraticForm
    grid: DiscreteGrid

    def is_antihermitian(self, tol: float = 1e-12) -> bool:
        return self.form.is_antihermitian(tol)


def discretize_action(setup, grid: DiscreteGrid) -> KernelMatrix:
    """Bin the continuous kernel onto grid modes a_bin = int_bin a / sqrt(d).

    Matrix elements are S at the bin centers times sqrt(d_mir d_nir); the
    four sign quadrants of the continuous integral populate the
    beam-splitter (a^dag a) and pair (a a / a^dag a^dag) blocks, preserving
    the anti-Hermiticity of the continuous kernel exactly.
    """
    from .eo import _kernel_unchecked  # local import to avoid a cycle

    n = grid.n_modes
    nm = grid.mir_count
    mir = grid.mir
    nir = grid.nir
    weight = math.sqrt(grid.delta_mir * grid.delta_nir)

    bs = weight * _kernel_unchecked(setup, mir[:, None], nir[None, :])
    pair = weight * _kernel_unchecked(setup, -mir[:, None], nir[None, :])

    q = QuadraticForm.zero(n)
    # S(+W, +w) a_W a_w^dag  ->  a_w^dag a_W   (disjoint modes commute)
    q.da[nm:, :nm] += bs.T
    # S(-W, -w) a_W^dag a_w = -conj(S(+W, +w)) by anti-Hermiticity
    q.da[:nm, nm:] += -np.conj(bs)
    # S(-W, +w) a_W^dag a_w^dag
    q.dd[:nm, nm:] += pair
    # S(+W, -w) a_W a_w = -conj(S(-W, +w))
    q.aa[:nm, nm:] += -np.conj(pair)
    return KernelMatrix(q, grid)


def nearest_nir_mode(grid: DiscreteGrid, omega: float) -> LinearForm:
    """Basis mode of the NIR bin whose center is nearest to omega."""
    idx = grid.mir_count + int(np.argmin(np.abs(grid.nir - omega)))
    return LinearForm.basis(grid.n_modes, idx)


@dataclass(frozen=True)
class ChainMode:
    """Chain member: coefficient vector, coupling theta_n >= 0 and the sign
    of its commutator with its own conjugate (0 marks a terminated chain)."""

    vector: LinearForm
    theta: float
    comm_sign: int


def build_chain(k: KernelMatrix | QuadraticForm, u0: LinearForm,
                n_max: int) -> list[ChainMode]:
    """Generate [u0, c_1, ..., c_n] by repeated commutation with the action.

    Each c_n = [c_{n-1}, S] / theta_n is normalized to unit |signed norm|;
    a vanishing commutator (or one with balanced +/- content that cannot be
    normalized) terminates the chain with comm_sign 0.
    """
    s = k.form if isinstance(k, KernelMatrix) else k
    sn0 = signed_norm(u0)
    chain = [ChainMode(u0, 0.0, 1 if sn0 > 0 else (-1 if sn0 < 0 else 0))]
    current = u0
    for _ in range(n_max):
        raw = comm_quad_linear(s, current).scaled(-1.0)  # [c, S] = -[S, c]
        scale = float(np.sum(np.abs(raw.a) ** 2) + np.sum(np.abs(raw.adag) ** 2))
        sn = signed_norm(raw)
        if scale == 0.0 or abs(sn) <= COMM_SIGN_CUTOFF * scale:
            chain.append(ChainMode(raw, 0.0, 0))
            break
        theta = math.sqrt(abs(sn))
        current = raw.scaled(1.0 / theta)
        chain.append(ChainMode(current, theta, 1 if sn > 0 else -1))
    return chain


def orthogonalize_chain(chain: list[ChainMode]) -> list[ChainMode]:
    """Signed Gram-Schmidt over the chain (the seed mode comes first).

    Components along earlier modes and their conjugates are removed with
    the signed projector (overlap divided by the mode's +-1 norm); members
    that become linearly dependent are kept as zero vectors with
    comm_sign 0.
    """
    out: list[ChainMode] = []
    for mode in chain:
        w = mode.vector
        for prev in out:
            if prev.comm_sign == 0:
                continue
            s_prev = float(prev.comm_sign)
            beta = comm_with_dag(w, prev.vector) / s_prev
            gamma = commutator(prev.vector, w) / s_prev
            w = w.minus(prev.vector.scaled(beta)).minus(
                prev.vector.dagger().scaled(gamma))
        scale = float(np.sum(np.abs(w.a) ** 2) + np.sum(np.abs(w.adag) ** 2))
        sn = signed_norm(w)
        if scale == 0.0 or abs(sn) <= COMM_SIGN_CUTOFF * scale:
            out.append(ChainMode(w.scaled(0.0), mode.theta, 0))
            continue
        out.append(ChainMode(w.scaled(1.0 / math.sqrt(abs(sn))), mode.theta,
                             1 if sn > 0 else -1))
    return out


@dataclass(frozen=True)
class ChainDecomposition:
    """Everything the closed-form evolutions need at one seed mode:
    the seed u0, the raw and orthonormalized chains, and the coupling
    theta2 of the genuinely new second direction (the raw theta2 includes
    the feedback of the second commutator onto u0)."""

    u0: LinearForm
    raw: list[ChainMode]
    orth: list[ChainMode]
    theta1: float
    sign1: int
    theta2_raw: float
    sign2_raw: int
    theta2: float
    sign2: int


def chain_decomposition(k: KernelMatrix | QuadraticForm,
                        u0: LinearForm) -> ChainDecomposition:
    raw = build_chain(k, u0, 2)
    orth = orthogonalize_chain(raw)
    th1 = raw[1].theta if len(raw) > 1 else 0.0
    s1 = raw[1].comm_sign if len(raw) > 1 else 0
    th2_raw = raw[2].theta if len(raw) > 2 else 0.0
    s2_raw = raw[2].comm_sign if len(raw) > 2 else 0
    th2 = 0.0
    s2 = 0
    if len(raw) > 2 and raw[2].comm_sign != 0 and orth[2].comm_sign != 0:
        # coupling of the orthogonal part: norm of theta2_raw * c2_raw with
        # the u0 (and conjugate) components projected out
        v = raw[2].vector.scaled(th2_raw)
        beta = comm_with_dag(v, u0)
        gamma = commutator(u0, v)
        w = v.minus(u0.scaled(beta)).minus(u0.dagger().scaled(gamma))
        sn = signed_norm(w)
        th2 = math.sqrt(abs(sn))
        s2 = 1 if sn > 0 else (-1 if sn < 0 else 0)
    return ChainDecomposition(u0, raw, orth, th1, s1, th2_raw, s2_raw, th2, s2)


def evolution_factors(theta_1: float, theta_2: float, s1: int, s2: int):
    """Coefficients (A, B, C) of u' = A u + B c1 + C o2 for the two-step
    chain action, with o2 the orthonormalized second mode.

    A = 1 - s1 theta1^2 k2, B = theta1 k1, C = theta1 theta2 k2, where
    (k1, k2) are sin/cos-type for mu = s1 (theta1^2 + s2 theta2^2) > 0,
    sinh/cosh-type for mu < 0 and the parabolic limit (1, 1/2) at mu = 0.
    """
    mu = s1 * (theta_1 ** 2 + s2 * theta_2 ** 2)
    if mu > 0:
        phi = math.sqrt(mu)
        k1, k2 = math.sin(phi) / phi, (1.0 - math.cos(phi)) / (phi * phi)
    elif mu < 0:
        phi = math.sqrt(-mu)
        k1, k2 = math.sinh(phi) / phi, (math.cosh(phi) - 1.0) / (phi * phi)
    else:
        k1, k2 = 1.0, 0.5
    return (1.0 - s1 * theta_1 ** 2 * k2, theta_1 * k1,
            theta_1 * theta_2 * k2)


@dataclass(frozen=True)
class EvolvedOperator:
    """Evolved seed mode: order tag, branch, closed-form coefficients and
    the resolved coefficient vector used for vacuum moments."""

    order: str
    branch: str
    coefficients: dict
    resolved: LinearForm


def evolve_first_order(theta_1: float, comm_sign: int, u0: LinearForm,
                       a1: LinearForm) -> EvolvedOperator:
    """First-order unitary evolution of u0 against the normalized mode a1.

    Beam-splitter branch (comm_sign +1): u' = cos(theta1) u0 - sin(theta1) a1,
    squeezer branch (comm_sign -1): u' = cosh(theta1) u0 - sinh(theta1) a1,
    comm_sign 0: identity.  Both branches preserve the seed commutator
    exactly (cos^2 + sin^2 = 1, cosh^2 - sinh^2 = 1).
    """
    if theta_1 < 0:
        raise ValueError("theta_1 must be nonnegative")
    if comm_sign == 0 or theta_1 == 0.0:
        return EvolvedOperator("1", "identity", {"u": 1.0, "a1": 0.0}, u0)
    if comm_sign > 0:
        cu, ca = math.cos(theta_1), -math.sin(theta_1)
        branch = "beam_splitter"
    else:
        cu, ca = math.cosh(theta_1), -math.sinh(theta_1)
        branch = "squeezer"
    resolved = u0.scaled(cu).plus(a1.scaled(ca))
    return EvolvedOperator("1", branch, {"u": cu, "a1": ca}, resolved)


def evolve_second_order(dec: ChainDecomposition) -> EvolvedOperator:
    """Second-order unitary evolution via the closed four-case formula.

    A chain of effective length 1 (terminated second commutator) delegates
    to the first-order evolution.
    """
    if dec.sign1 == 0 or dec.theta1 == 0.0:
        return EvolvedOperator("2", "identity", {"u": 1.0}, dec.u0)
    c1 = dec.raw[1].vector
    if dec.sign2 == 0 or dec.theta2 == 0.0:
        first = evolve_first_order(dec.theta1, dec.sign1, dec.u0, c1.scaled(-1.0))
        return EvolvedOperator("2", first.branch, first.coefficients,
                               first.resolved)
    a, b, c = evolution_factors(dec.theta1, dec.theta2, dec.sign1, dec.sign2)
    o2 = dec.orth[2].vector
    resolved = dec.u0.scaled(a).plus(c1.scaled(b)).plus(o2.scaled(c))
    branch = "beam_splitter" if dec.sign1 > 0 else "squeezer"
    return EvolvedOperator("2", branch, {"u": a, "c1": b, "c2": c}, resolved)


def four_case_evolution(dec: ChainDecomposition) -> LinearForm:
    """Literal four-case second-order formula on the raw chain modes m_n
    (annihilation-flavored: m_n = c_n for positive sign, c_n^dag otherwise),
    dispatched on the sign pair (s1, s2_raw):

        (+, +): u' = u + [u, m2^dag] ((cos t2 - 1) m2      - sin t2  m1)
        (+, -): u' = u + [m2, u]     ((cosh t2 - 1) m2^dag + sinh t2 m1)
        (-, +): u' = u + [u, m2^dag] ((cosh t2 - 1) m2     + sinh t2 m1^dag)
        (-, -): u' = u + [m2, u]     ((cos t2 - 1) m2^dag  - sin t2  m1^dag)

    with t2 the raw second coupling.
    """
    if dec.sign1 == 0 or dec.sign2_raw == 0:
        return dec.u0
    c1, c2 = dec.raw[1].vector, dec.raw[2].vector
    m1 = c1 if dec.sign1 > 0 else c1.dagger()
    m2 = c2 if dec.sign2_raw > 0 else c2.dagger()
    t2 = dec.theta2_raw
    s1, s2 = dec.sign1, dec.sign2_raw
    if s1 > 0 and s2 > 0:
        pref = comm_with_dag(dec.u0, m2)
        corr = m2.scaled(math.cos(t2) - 1.0).minus(m1.scaled(math.sin(t2)))
    elif s1 > 0 and s2 < 0:
        pref = commutator(m2, dec.u0)
        corr = (m2.dagger().scaled(math.cosh(t2) - 1.0)
                .plus(m1.scaled(math.sinh(t2))))
    elif s1 < 0 and s2 > 0:
        pref = comm_with_dag(dec.u0, m2)
        corr = (m2.scaled(math.cosh(t2) - 1.0)
                .plus(m1.dagger().scaled(math.sinh(t2))))
    else:
        pref = commutator(m2, dec.u0)
        corr = (m2.dagger().scaled(math.cos(t2) - 1.0)
                .minus(m1.dagger().scaled(math.sin(t2))))
    return dec.u0.plus(corr.scaled(pref))


def m_form_evolution(dec: ChainDecomposition) -> LinearForm:
    """Compact M-coefficient form of the second-order evolution,

        u' = u + M0 (M1 c1 + (M2 - 1) c2_raw),

    with the prefactors built from raw-chain commutators:
        M0 = [u, m2^dag] + [m2, u],
        M2 = |s1 + s2_raw|/2 cos(t2) + |s1 - s2_raw|/2 cosh(t2),
        M1 = -|s1 + s2_raw|/2 sin(t2) + |s1 - s2_raw|/2 sinh(t2).
    """
    if dec.sign1 == 0 or dec.sign2_raw == 0:
        return dec.u0
    c1, c2 = dec.raw[1].vector, dec.raw[2].vector
    m2 = c2 if dec.sign2_raw > 0 else c2.dagger()
    m0 = comm_with_dag(dec.u0, m2) + commutator(m2, dec.u0)
    t2 = dec.theta2_raw
    plus_w = 0.5 * abs(dec.sign1 + dec.sign2_raw)
    minus_w = 0.5 * abs(dec.sign1 - dec.sign2_raw)
    m2_coef = plus_w * math.cos(t2) + minus_w * math.cosh(t2)
    m1_coef = -plus_w * math.sin(t2) + minus_w * math.sinh(t2)
    return dec.u0.plus(
        c1.scaled(m0 * m1_coef).plus(c2.scaled(m0 * (m2_coef - 1.0))))


def perturbation_baseline(k: KernelMatrix | QuadraticForm,
                          u0: LinearForm) -> EvolvedOperator:
    """Raw first-order perturbative operator u' = u0 + [u0, S]; moments are
    taken of this operator as is, without commutator renormalization."""
    s = k.form if isinstance(k, KernelMatrix) else k
    resolved = u0.plus(comm_quad_linear(s, u0).scaled(-1.0))
    return EvolvedOperator("perturbative", "raw", {"u": 1.0}, resolved)


def quadratic_to_sigma(q: QuadraticForm) -> np.ndarray:
    """Symmetric matrix sigma with S = (1/2) V^T sigma V (+ scalar),
    V = (a_1..a_N, a_1^dag..a_N^dag)."""
    a = q.aa + q.aa.T
    c = q.dd + q.dd.T
    b = q.da.T
    return np.block([[a, b], [b.T, c]])


def adjoint_matrix(q: QuadraticForm) -> np.ndarray:
    """Matrix M with [V_i, S] = sum_j M_ij V_j."""
    n = q.n_modes
    sigma = quadratic_to_sigma(q)
    jmat = np.block([[np.zeros((n, n)), np.eye(n)],
                     [-np.eye(n), np.zeros((n, n))]])
    return jmat @ sigma


@dataclass(frozen=True)
class BogoliubovMap:
    """Exact evolution blocks: a'_i = sum_j A[i,j] a_j + B[i,j] a_j^dag."""

    a_block: np.ndarray
    b_block: np.ndarray
    exp_adjoint: np.ndarray

    def symplectic_defect(self) -> float:
        n = self.a_block.shape[0]
        g = (self.a_block @ self.a_block.conj().T
             - self.b_block @ self.b_block.conj().T)
        return float(np.abs(g - np.eye(n)).max())

    def apply(self, target: LinearForm) -> LinearForm:
        t = np.concatenate([target.a, target.adag])
        tp = self.exp_adjoint.T @ t
        n = self.a_block.shape[0]
        return LinearForm(tp[:n], tp[n:])


def exact_bogoliubov(k: KernelMatrix | QuadraticForm) -> BogoliubovMap:
    """Exponentiate the adjoint action of an anti-Hermitian quadratic form.

    Raises MatrixExponentialError on non-finite output rather than
    degrading silently.
    """
    q = k.form if isinstance(k, KernelMatrix) else k
    if not q.is_antihermitian(1e-10):
        raise ValueError("action must be anti-Hermitian")
    m = adjoint_matrix(q)
    e = expm(m)
    if not np.all(np.isfinite(e)):
        raise MatrixExponentialError("matrix exponential is non-finite")
    n = q.n_modes
    return BogoliubovMap(e[:n, :n], e[:n, n:], e)


def variance_of_linear_form(l: LinearForm, phi: float) -> float:
    """Vacuum variance of X(phi) = L e^{-i phi} + L^dag e^{i phi}."""
    c, d = l.a, l.adag
    base = float(np.sum(np.abs(c) ** 2) + np.sum(np.abs(d) ** 2))
    cross = complex(np.dot(c, d))
    return base + 2.0 * (cross * np.exp(-2j * phi)).real


def vacuum_covariance(bmap: BogoliubovMap, target: LinearForm,
                      phi: float) -> float:
    """Variance of the target quadrature after the exact evolution."""
    return variance_of_linear_form(bmap.apply(target), phi)
