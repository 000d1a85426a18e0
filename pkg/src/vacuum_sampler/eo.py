"""Electro-optic sampling of the vacuum with a strong coherent probe.

The mean-field interaction of the probe with the vacuum in a second-order
nonlinear crystal is governed by the kernel

    S(W, w) = alpha_p(w - W) * zeta(W, w),        |W| < Lambda < |w|,

where alpha_p is the real probe spectral amplitude, zeta carries the
phase-matching sinc of the crystal and Lambda is the transition frequency
separating the sampled mid-infrared band (MIR, capital W here) from the
near-infrared detection band (NIR, lowercase w).  Anti-Hermiticity of the
generated evolution requires S(W, w) = -conj(S(-W, -w)), which holds by
construction because alpha_p(w) = conj(alpha_p(-w)) and the sinc argument is
odd under joint sign flip.

A band-pass filtered NIR mode u of width delta_omega centered at
omega_tilde plays the role of a narrow-band detector.  Commutation with the
action generates the probed MIR mode,

    F(W) = (1/sqrt(dw)) * int_band S(W, w) dw,    theta1^2 = |int sign(W) |F|^2 dW|,

whose signed norm classifies the interaction: beam-splitter-like for
positive sign (the detector picks up vacuum excitations directly) and
two-mode-squeezer-like for negative sign.  First- and second-order unitary
evolution and the raw perturbative baseline all reduce to moment integrals
of F and of the once-iterated commutator; the variances returned here fold
the quadrature phase so var_q <= var_p always.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .constants import CODATA, PhysicalConstants
from .dispersion import RefractiveIndexModel
from .evolution import evolution_factors
from .modes import SpectralAmplitude
from .quadrature import DEFAULT_REL_TOL, IntegrationDomain, integrate

__all__ = [
    "CrystalParams",
    "ProbeParams",
    "FilterParams",
    "FrequencyPartition",
    "EOSetup",
    "EODomainError",
    "ZeroCouplingError",
    "RegimeClass",
    "MirMoments",
    "SecondOrderChain",
    "EOVariances",
    "WaveformResult",
    "EllipsometryResult",
    "phase_mismatch",
    "zeta",
    "action_kernel",
    "probe_spectrum",
    "mir_moments",
    "theta1",
    "probed_waveform",
    "regime_classify",
    "second_order_chain",
    "eo_variances",
    "temporal_waveform",
    "ellipsometry_expectations",
    "envelope_fwhm",
    "fft_carrier",
]

MEAN_FIELD_PHOTON_FLOOR = 1e3
# normalized signed norms below this count as a terminated chain
COMM_SIGN_CUTOFF = 1e-8


class EODomainError(ValueError):
    """Kernel evaluated outside the |W| < Lambda < |w| partition."""


class ZeroCouplingError(ValueError):
    """The probed mode is undefined because the interaction strength is zero."""


@dataclass(frozen=True)
class CrystalParams:
    """Crystal thickness length [m], electro-optic coefficient r41 [m/V],
    effective cross-sectional area [m^2] and the dispersion model."""

    length: float
    r41: float
    area: float
    dispersion: RefractiveIndexModel

    def __post_init__(self):
        if not (self.length > 0 and self.area > 0):
            raise ValueError("length and area must be positive")

    def coupling_d(self, omega_p: float) -> float:
        """Effective quadratic coupling d = -n(omega_p)^4 r41."""
        return -self.dispersion.n(omega_p) ** 4 * self.r41


@dataclass(frozen=True)
class ProbeParams:
    """Strong coherent probe: carrier omega_p [rad/s], spectral width
    sigma_p [rad/s], pulse center t_p [s], carrier phase phi_p and complex
    displacement alpha with |alpha|^2 the pulse photon number."""

    omega_p: float
    sigma_p: float
    t_p: float = 0.0
    phi_p: float = 0.0
    alpha: complex = 0.0 + 0.0j

    def __post_init__(self):
        if not (self.omega_p > 0 and self.sigma_p > 0):
            raise ValueError("omega_p and sigma_p must be positive")
        n_ph = abs(self.alpha) ** 2
        if 0 < n_ph < MEAN_FIELD_PHOTON_FLOOR:
            warnings.warn(
                f"probe photon number {n_ph:.3g} is small; the mean-field "
                "treatment assumes |alpha|^2 >> 1", stacklevel=2)


@dataclass(frozen=True)
class FilterParams:
    """Band-pass window of width delta_omega centered at omega_tilde [rad/s]."""

    omega_tilde: float
    delta_omega: float

    def __post_init__(self):
        if not self.delta_omega > 0:
            raise ValueError("delta_omega must be positive")

    @property
    def lo(self) -> float:
        return self.omega_tilde - 0.5 * self.delta_omega

    @property
    def hi(self) -> float:
        return self.omega_tilde + 0.5 * self.delta_omega


@dataclass(frozen=True)
class FrequencyPartition:
    """Transition frequency Lambda separating MIR from NIR [rad/s]."""

    lambda_cut: float

    def __post_init__(self):
        if not self.lambda_cut > 0:
            raise ValueError("lambda_cut must be positive")


@dataclass(frozen=True)
class EOSetup:
    crystal: CrystalParams
    probe: ProbeParams
    partition: FrequencyPartition
    constants: PhysicalConstants = CODATA
    band_rule_order: int = 21
    mir_grid_nodes: int = 256
    nir_grid_nodes: int = 768

    @cached_property
    def n_probe(self) -> float:
        return self.crystal.dispersion.n(self.probe.omega_p)

    @cached_property
    def zeta_prefactor(self) -> float:
        """lambda L / (A c eps0) = d L / (2 c) with d = -n^4 r41."""
        return (self.crystal.coupling_d(self.probe.omega_p)
                * self.crystal.length / (2.0 * self.constants.c))

    @cached_property
    def probe_field_scale(self) -> float:
        """Peak spectral scale E0 of the probe field per unit angular
        frequency, fixed by normalizing the probe mode to one bosonic
        quantum: the mode coefficient obtained from the field waveform via

            f_p(w) = -i sqrt(4 pi n_w c A eps0 / (hbar |w|)) conj(E_p(w))

        must have unit signed norm.
        """
        cst, pr = self.constants, self.probe
        model = self.crystal.dispersion
        lo = pr.omega_p - 12.0 * pr.sigma_p
        hi = min(pr.omega_p + 12.0 * pr.sigma_p, model.omega_max)
        lo = max(lo, -model.omega_max)

        def signed_weight(w):
            return (np.sign(w) * model.n(np.abs(w)) / self.n_probe
                    * np.exp(-(w - pr.omega_p) ** 2 / (2.0 * pr.sigma_p ** 2)))

        res = integrate(signed_weight, IntegrationDomain.finite(lo, hi),
                        rel_tol=1e-12, abs_tol=1e-30)
        norm_integral = res.value.real * (4.0 * math.pi * cst.c
                                          * self.crystal.area * cst.eps0
                                          / cst.hbar)
        if norm_integral <= 0:
            raise ValueError("probe normalization integral is nonpositive")
        return 1.0 / math.sqrt(norm_integral)

    def probe_field(self, omega):
        """Complex probe field waveform E_p(omega) [V s / m]."""
        pr = self.probe
        w = np.asarray(omega, dtype=float)
        return (self.probe_field_scale
                * np.sqrt(np.abs(w) / self.n_probe)
                * np.exp(-(w - pr.omega_p) ** 2 / (4.0 * pr.sigma_p ** 2))
                * np.exp(1j * (w * pr.t_p + pr.phi_p)))

    def alpha_p(self, omega):
        """Real probe amplitude alpha_p(w) = alpha E_p(w) + conj(alpha E_p(-w)),
        satisfying alpha_p(w) = conj(alpha_p(-w)) by construction."""
        a = self.probe.alpha
        return a * self.probe_field(omega) + np.conj(a * self.probe_field(-np.asarray(omega, dtype=float)))

    @cached_property
    def omega_cap(self) -> float:
        """Largest NIR frequency keeping w - W inside dispersion validity."""
        return self.crystal.dispersion.omega_max - self.partition.lambda_cut


def phase_mismatch(model: RefractiveIndexModel, big_omega, omega, length: float,
                   c: float = CODATA.c):
    """Phase mismatch accumulated across the crystal,

        (L / 2c) [w (n_w - n_{w-W}) - W (n_W - n_{w-W})],

    zero for a dispersionless crystal and for W = 0.
    """
    big_omega = np.asarray(big_omega, dtype=float)
    omega = np.asarray(omega, dtype=float)
    n_w = model.n(omega)
    n_big = model.n(big_omega)
    n_diff = model.n(omega - big_omega)
    return (length / (2.0 * c)) * (omega * (n_w - n_diff)
                                   - big_omega * (n_big - n_diff))


def zeta(setup: EOSetup, big_omega, omega):
    """Phase-matching coupling

        zeta(W, w) = -i sign(w W) (d L / 2c) sqrt(|w W| / (n_w n_W)) sinc(eta),

    with sinc(x) = sin(x)/x (value 1 at the removable singularity) and eta
    the phase mismatch.  Vanishes as sqrt(|W|) for W -> 0.
    """
    model = setup.crystal.dispersion
    big_omega = np.asarray(big_omega, dtype=float)
    omega = np.asarray(omega, dtype=float)
    eta = phase_mismatch(model, big_omega, omega, setup.crystal.length,
                         setup.constants.c)
    n_w = model.n(omega)
    n_big = model.n(big_omega)
    mag = np.sqrt(np.abs(omega * big_omega) / (n_w * n_big))
    return (-1j * np.sign(omega * big_omega) * setup.zeta_prefactor
            * mag * np.sinc(eta / np.pi))


def action_kernel(setup: EOSetup, big_omega, omega):
    """Kernel S(W, w) = alpha_p(w - W) zeta(W, w) on |W| < Lambda < |w|.

    Raises EODomainError off the partition domain.
    """
    lam = setup.partition.lambda_cut
    big_arr = np.asarray(big_omega, dtype=float)
    w_arr = np.asarray(omega, dtype=float)
    if np.any(np.abs(big_arr) >= lam) or np.any(np.abs(w_arr) <= lam):
        raise EODomainError(
            "action kernel requires |W| < Lambda < |w| "
            f"(Lambda = {lam:.6e} rad/s)")
    return _kernel_unchecked(setup, big_arr, w_arr)


def _kernel_unchecked(setup: EOSetup, big_omega, omega):
    return setup.alpha_p(omega - big_omega) * zeta(setup, big_omega, omega)


def probe_spectrum(setup: EOSetup) -> SpectralAmplitude:
    """Normalized bosonic spectral amplitude of the probe mode."""
    cst, pr = setup.constants, setup.probe
    model = setup.crystal.dispersion
    scale = setup.probe_field_scale

    def fn(w):
        w = np.asarray(w, dtype=float)
        # -i sqrt(4 pi n_w c A eps0 / (hbar |w|)) conj(E_p(w)); the sqrt|w|
        # of the field waveform cancels the 1/sqrt|w| of the conversion
        root = np.sqrt(4.0 * math.pi * model.n(np.abs(w)) * cst.c
                       * setup.crystal.area * cst.eps0
                       / (cst.hbar * setup.n_probe))
        return (-1j * scale * root
                * np.exp(-(w - pr.omega_p) ** 2 / (4.0 * pr.sigma_p ** 2))
                * np.exp(-1j * (w * pr.t_p + pr.phi_p)))

    lo = max(pr.omega_p - 12.0 * pr.sigma_p, -model.omega_max)
    hi = min(pr.omega_p + 12.0 * pr.sigma_p, model.omega_max)
    return SpectralAmplitude(fn=fn, windows=((lo, hi),))


def _check_filter(setup: EOSetup, filt: FilterParams):
    lam = setup.partition.lambda_cut
    if not lam < filt.lo:
        raise ValueError(
            f"filter band [{filt.lo:.6e}, {filt.hi:.6e}] must lie entirely "
            f"above the partition Lambda = {lam:.6e}")
    if filt.hi > setup.omega_cap:
        raise ValueError("filter band exceeds the dispersion validity cap")


def _gl_nodes(lo: float, hi: float, order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (hi + lo) + 0.5 * (hi - lo) * x, 0.5 * (hi - lo) * w


def _composite_gl(lo: float, hi: float, total_nodes: int, panel_order: int = 32):
    panels = max(1, total_nodes // panel_order)
    edges = np.linspace(lo, hi, panels + 1)
    xs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        x, w = _gl_nodes(a, b, panel_order)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def band_mean(setup: EOSetup, filt: FilterParams, big_omega, exact: bool = True):
    """F(W): the band-averaged kernel (1/sqrt(dw)) int_band S(W, w) dw.

    exact=False uses the narrow-band midpoint form sqrt(dw) S(W, omega_tilde).
    """
    big_omega = np.atleast_1d(np.asarray(big_omega, dtype=float))
    if not exact:
        return (math.sqrt(filt.delta_omega)
                * _kernel_unchecked(setup, big_omega, np.full_like(big_omega, filt.omega_tilde)))
    wn, ww = _gl_nodes(filt.lo, filt.hi, setup.band_rule_order)
    vals = _kernel_unchecked(setup, big_omega[:, None], wn[None, :])
    return (vals @ ww) / math.sqrt(filt.delta_omega)


@dataclass(frozen=True)
class MirMoments:
    """Moment integrals of the band-averaged kernel over the MIR range:
    n_plus = int_0^Lam |F(W)|^2, n_minus = int_0^Lam |F(-W)|^2,
    m = int_0^Lam F(W) F(-W) dW."""

    n_plus: float
    n_minus: float
    m: complex

    @property
    def total(self) -> float:
        return self.n_plus + self.n_minus

    @property
    def signed(self) -> float:
        return self.n_plus - self.n_minus


def mir_moments(setup: EOSetup, filt: FilterParams, exact: bool = True,
                rel_tol: float = DEFAULT_REL_TOL) -> MirMoments:
    _check_filter(setup, filt)
    lam = setup.partition.lambda_cut
    dom = IntegrationDomain.finite(0.0, lam)

    def f_plus_sq(om):
        return np.abs(band_mean(setup, filt, om, exact)) ** 2

    def f_minus_sq(om):
        return np.abs(band_mean(setup, filt, -om, exact)) ** 2

    def f_cross(om):
        return band_mean(setup, filt, om, exact) * band_mean(setup, filt, -om, exact)

    kw = dict(rel_tol=rel_tol, abs_tol=1e-60)
    n_plus = integrate(f_plus_sq, dom, **kw).value.real
    n_minus = integrate(f_minus_sq, dom, **kw).value.real
    m = integrate(f_cross, dom, **kw).value
    return MirMoments(float(n_plus), float(n_minus), complex(m))


def theta1(setup: EOSetup, filt: FilterParams, exact: bool = True,
           rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Interaction strength theta1 = sqrt(|int sign(W) |F(W)|^2 dW|)."""
    return math.sqrt(abs(mir_moments(setup, filt, exact, rel_tol).signed))


@dataclass(frozen=True)
class RegimeClass:
    """Interaction class plus the normalized signed commutator in [-1, 1].

    kind is 'beam_splitter' when the signed value is positive (detector-like
    pickup of vacuum excitations) and 'squeezer' otherwise.
    """

    kind: str
    signed_value: float


def regime_classify(setup: EOSetup, filt: FilterParams, exact: bool = True,
                    rel_tol: float = DEFAULT_REL_TOL,
                    moments: MirMoments | None = None) -> RegimeClass:
    mom = moments if moments is not None else mir_moments(setup, filt, exact, rel_tol)
    if mom.total <= 0.0:
        raise ZeroCouplingError("zero interaction strength: no probed mode")
    signed_value = mom.signed / mom.total
    kind = "beam_splitter" if signed_value > 0 else "squeezer"
    return RegimeClass(kind, float(signed_value))


def probed_waveform(setup: EOSetup, filt: FilterParams, exact: bool = True,
                    rel_tol: float = DEFAULT_REL_TOL) -> SpectralAmplitude:
    """The probed MIR mode f(W) = F(W) / sqrt(int |F|^2), magnitude-normalized
    so that int |f|^2 dW = 1 (its signed norm is reported by regime_classify).

    Raises ZeroCouplingError for a vanishing interaction (alpha = 0).
    """
    mom = mir_moments(setup, filt, exact, rel_tol)
    if mom.total <= 0.0:
        raise ZeroCouplingError("zero interaction strength: no probed mode")
    scale = 1.0 / math.sqrt(mom.total)
    lam = setup.partition.lambda_cut

    def fn(w):
        w = np.atleast_1d(np.asarray(w, dtype=float))
        out = np.zeros(w.shape, complex)
        inside = np.abs(w) < lam
        if np.any(inside):
            out[inside] = scale * band_mean(setup, filt, w[inside], exact)
        return out

    return SpectralAmplitude(fn=fn, windows=((-lam, lam),))


@dataclass(frozen=True)
class SecondOrderChain:
    """Continuous chain data for the second-order evolution at one filter.

    theta1/sign1 describe the probed MIR mode; theta2_raw/sign2_raw the raw
    once-iterated commutator (detector feedback included); theta2/sign2 the
    genuinely new NIR direction after projecting the detector mode out.
    nu1, m1 and nu2, m2 are vacuum moments of the normalized first and
    second chain modes; coef_* are the evolved detector-mode coefficients
    on (u, chain1, chain2).
    """

    theta1: float
    sign1: int
    theta2_raw: float
    sign2_raw: int
    theta2: float
    sign2: int
    nu1: float
    m1: complex
    nu2: float
    m2: complex
    coef_u: float
    coef_c1: float
    coef_c2: float
    terminated: bool
    # detector-mode components of the second commutator; analytically
    # c_u = -sign1 * theta1 and c_u_prime = 0
    c_u: complex = 0.0 + 0.0j
    c_u_prime: complex = 0.0 + 0.0j


def second_order_chain(setup: EOSetup, filt: FilterParams,
                       rel_tol: float = DEFAULT_REL_TOL,
                       moments: MirMoments | None = None) -> SecondOrderChain:
    """Build the two-step commutator chain of the filtered detector mode.

    The first commutator with the action gives the MIR mode F; the second
    returns to the NIR band.  Its component along the detector mode is
    removed exactly (the band-localized cross terms reduce to scalar
    products), leaving the orthogonal second chain mode whose moments feed
    the second-order evolution.
    """
    _check_filter(setup, filt)
    mom = moments if moments is not None else mir_moments(setup, filt, True, rel_tol)
    if mom.total <= 0.0:
        raise ZeroCouplingError("zero interaction strength: no probed mode")
    th1 = math.sqrt(abs(mom.signed))
    s1 = 1 if mom.signed >= 0 else -1
    if th1 ** 2 <= COMM_SIGN_CUTOFF * mom.total:
        # degenerate at the regime flip: treat as terminated
        return SecondOrderChain(th1, s1, 0.0, 0, 0.0, 0, 0.0, 0j, 0.0, 0j,
                                1.0, 0.0, 0.0, True)
    lam = setup.partition.lambda_cut

    # MIR quadrature grid (positive side; the negative side is mirrored)
    om_pos, w_pos = _composite_gl(0.0, lam, setup.mir_grid_nodes)
    f_pos = band_mean(setup, filt, om_pos)
    f_neg = band_mean(setup, filt, -om_pos)

    # NIR grid covering the support of the second commutator
    nir_lo = lam * (1.0 + 1e-9)
    nir_hi = setup.omega_cap
    wn_pos, wn_w = _composite_gl(nir_lo, nir_hi, setup.nir_grid_nodes)

    def h_at(w_nodes):
        """h(w) = int sign(W) F(-W) S(W, w) dW on arbitrary NIR nodes."""
        s_pos = _kernel_unchecked(setup, om_pos[:, None], w_nodes[None, :])
        s_neg = _kernel_unchecked(setup, -om_pos[:, None], w_nodes[None, :])
        return (w_pos * f_neg) @ s_pos - (w_pos * f_pos) @ s_neg

    # second chain vector A2(w) = -h(-w)/theta1 on both NIR half lines
    a2_pos = -h_at(-wn_pos) / th1
    a2_neg = -h_at(wn_pos) / th1

    # detector-mode components, computed on the band rule exactly
    bn, bw = _gl_nodes(filt.lo, filt.hi, setup.band_rule_order)
    a2_band_pos = -h_at(-bn) / th1
    a2_band_neg = -h_at(bn) / th1
    rt_dw = math.sqrt(filt.delta_omega)
    c_u = complex((a2_band_pos @ bw) / rt_dw)
    c_u_prime = complex((a2_band_neg @ bw) / rt_dw)

    i_pos = float(np.real(wn_w @ np.abs(a2_pos) ** 2))
    i_neg = float(np.real(wn_w @ np.abs(a2_neg) ** 2))
    m_a = complex(wn_w @ (a2_pos * a2_neg))

    signed_raw = i_pos - i_neg
    th2_raw = math.sqrt(abs(signed_raw))
    s_raw = 1 if signed_raw >= 0 else -1

    # project the detector mode (and its conjugate) out of A2
    signed_orth = signed_raw - abs(c_u) ** 2 + abs(c_u_prime) ** 2
    nu2_un = i_neg - abs(c_u_prime) ** 2
    m2_un = m_a - c_u * c_u_prime

    scale = i_pos + i_neg
    if abs(signed_orth) <= COMM_SIGN_CUTOFF * max(scale, 1e-300):
        return SecondOrderChain(th1, s1, th2_raw, s_raw, 0.0, 0,
                                mom.n_minus / th1 ** 2, mom.m / th1 ** 2,
                                0.0, 0j, 1.0, 0.0, 0.0, True)
    th2 = math.sqrt(abs(signed_orth))
    s2 = 1 if signed_orth > 0 else -1

    coef_u, coef_c1, coef_c2 = evolution_factors(th1, th2, s1, s2)
    return SecondOrderChain(
        theta1=th1, sign1=s1, theta2_raw=th2_raw, sign2_raw=s_raw,
        theta2=th2, sign2=s2,
        nu1=mom.n_minus / th1 ** 2, m1=mom.m / th1 ** 2,
        nu2=max(nu2_un, 0.0) / th2 ** 2, m2=m2_un / th2 ** 2,
        coef_u=coef_u, coef_c1=coef_c1, coef_c2=coef_c2,
        terminated=False, c_u=c_u, c_u_prime=c_u_prime,
    )


@dataclass(frozen=True)
class EOVariances:
    """Folded quadrature variances (var_q <= var_p) plus the probed-mode
    moment data they derive from."""

    var_q: float
    var_p: float
    theta1: float
    signed_value: float
    n: float
    a_sq_mag: float
    order: str


def _fold(base: float, m_tot: complex):
    mag = abs(m_tot)
    return base - 2.0 * mag, base + 2.0 * mag


def eo_variances(setup: EOSetup, filt: FilterParams, order: str | int = 1,
                 rel_tol: float = DEFAULT_REL_TOL,
                 moments: MirMoments | None = None,
                 chain: SecondOrderChain | None = None) -> EOVariances:
    """Quadrature variances of the filtered detection mode after the
    interaction, at the stated approximation order (1, 2 or 'perturbative').

    Both variances tend to 1 as alpha -> 0, and the evolution is continuous
    through the regime flip where theta1 vanishes.
    """
    order_key = str(order)
    if order_key not in ("1", "2", "perturbative", "pert"):
        raise ValueError(f"unknown evolution order {order!r}")
    mom = moments if moments is not None else mir_moments(setup, filt, True, rel_tol)
    signed_value = mom.signed / mom.total if mom.total > 0 else 0.0
    th1 = math.sqrt(abs(mom.signed))
    nu_f, m_f = mom.n_minus, mom.m

    if order_key in ("pert", "perturbative"):
        base = 1.0 + mom.total
        var_q, var_p = _fold(base, m_f)
    elif order_key == "1" or mom.total <= 0.0 or th1 ** 2 <= COMM_SIGN_CUTOFF * mom.total:
        # first order; also the theta1 -> 0 limit shared by both orders
        if th1 == 0.0:
            ratio = 1.0
        elif mom.signed >= 0:
            ratio = math.sin(th1) ** 2 / th1 ** 2
        else:
            ratio = math.sinh(th1) ** 2 / th1 ** 2
        base = 1.0 + 2.0 * ratio * nu_f
        var_q, var_p = _fold(base, ratio * m_f)
    else:
        ch = chain if chain is not None else second_order_chain(setup, filt, rel_tol, mom)
        if ch.terminated:
            return eo_variances(setup, filt, 1, rel_tol, mom)
        b, c = ch.coef_c1, ch.coef_c2
        base = (ch.coef_u ** 2
                + b * b * (2.0 * ch.nu1 + ch.sign1)
                + c * c * (2.0 * ch.nu2 + ch.sign2))
        var_q, var_p = _fold(base, b * b * ch.m1 + c * c * ch.m2)

    n_val = nu_f / th1 ** 2 if th1 > 0 else nu_f
    a_mag = abs(m_f) / th1 ** 2 if th1 > 0 else abs(m_f)
    return EOVariances(float(var_q), float(var_p), th1, float(signed_value),
                       float(n_val), float(a_mag), order_key)


@dataclass(frozen=True)
class WaveformResult:
    """Temporal signals on the grid t: the probed scalar-field waveform with
    its envelope, the probe field with its envelope, and the bare temporal
    profile of the probed mode coefficient (used for carrier estimation)."""

    t: np.ndarray
    probed: np.ndarray
    probed_envelope: np.ndarray
    probe: np.ndarray
    probe_envelope: np.ndarray
    mode_profile: np.ndarray


def temporal_waveform(setup: EOSetup, filt: FilterParams,
                      t_grid: np.ndarray) -> WaveformResult:
    """Temporal probed-mode field and probe pulse at the crystal output face.

    The probed waveform transforms the normalized probed mode f(W) back to a
    scalar-field profile with the 1/sqrt(n_W |W|) mode weight (expressed in
    electric-field units); the probe is the Fourier transform of E_p(omega).
    mode_profile is the plain transform of f(W) itself, whose oscillation
    carrier tracks |omega_tilde - omega_p|.  Envelopes are pointwise moduli.
    """
    t = np.asarray(t_grid, dtype=float)
    lam = setup.partition.lambda_cut
    cst = setup.constants
    model = setup.crystal.dispersion
    f = probed_waveform(setup, filt)

    om, w = _composite_gl(1e-6 * lam, lam, setup.mir_grid_nodes)
    om_full = np.concatenate([om, -om])
    w_full = np.concatenate([w, w])
    fvals = f(om_full)
    coef = (np.sign(om_full)
            * np.sqrt(cst.hbar * cst.c
                      / (4.0 * math.pi * model.n(np.abs(om_full))
                         * np.abs(om_full) * setup.crystal.area * cst.eps0))
            * np.conj(fvals))
    kernel_t = np.exp(-1j * np.outer(t, om_full))
    probed = kernel_t @ (w_full * coef)
    mode_profile = kernel_t @ (w_full * fvals)

    pr = setup.probe
    wn, ww = _composite_gl(pr.omega_p - 10.0 * pr.sigma_p,
                           min(pr.omega_p + 10.0 * pr.sigma_p, model.omega_max),
                           setup.mir_grid_nodes)
    probe = np.exp(-1j * np.outer(t, wn)) @ (ww * setup.probe_field(wn))

    return WaveformResult(t, probed, np.abs(probed), probe, np.abs(probe),
                          mode_profile)


def fft_carrier(t: np.ndarray, signal: np.ndarray, pad_factor: int = 8) -> float:
    """Dominant |frequency| of a uniformly sampled complex signal [rad/s].

    Zero-padding refines the peak location beyond the grid resolution.
    """
    t = np.asarray(t, dtype=float)
    dt = t[1] - t[0]
    n = len(t) * pad_factor
    spec = np.fft.fft(np.asarray(signal, dtype=complex), n=n)
    freqs = 2.0 * math.pi * np.fft.fftfreq(n, dt)
    return float(abs(freqs[int(np.argmax(np.abs(spec)))]))


def envelope_fwhm(t: np.ndarray, envelope: np.ndarray) -> float:
    """Full width at half maximum of a sampled envelope (linear interpolation)."""
    env = np.asarray(envelope, dtype=float)
    peak = env.max()
    if peak <= 0:
        raise ValueError("envelope has no peak")
    half = 0.5 * peak
    above = env >= half
    idx = np.where(above)[0]
    if idx.size < 2:
        raise ValueError("envelope does not cross half maximum")
    i0, i1 = idx[0], idx[-1]

    def cross(i_out, i_in):
        if i_out < 0 or i_out >= env.size:
            return t[i_in]
        frac = (half - env[i_out]) / (env[i_in] - env[i_out])
        return t[i_out] + frac * (t[i_in] - t[i_out])

    return float(cross(i1 + 1, i1) - cross(i0 - 1, i0))


@dataclass(frozen=True)
class EllipsometryResult:
    """Balanced-detection expectations for the vacuum input: total filtered
    photon counts, the raw difference signal and the normalized quadrature
    first moment (zero for the vacuum)."""

    total_counts: float
    difference: float
    normalized_quadrature: float


def ellipsometry_expectations(setup: EOSetup, filt: FilterParams,
                              phi: float = 0.0) -> EllipsometryResult:
    """Polarization-split balanced detection of the filtered band.

    The detected photon-count sum approximates dw |alpha_z(omega_tilde)|^2
    with alpha_z the coherent amplitude of the probe mode; the normalized
    difference measures the quadrature X(phi) of the filtered mode, whose
    first moment vanishes for vacuum input at every phi.  Its variance is
    obtained through eo_variances.
    """
    _check_filter(setup, filt)
    f_p = probe_spectrum(setup)
    amp = setup.probe.alpha * complex(f_p(np.array([filt.omega_tilde]))[0])
    total = filt.delta_omega * abs(amp) ** 2
    return EllipsometryResult(float(total), 0.0, 0.0)
