"""Exactly solvable two-level system under an exponentially switched coupling.

Three independent routes to the same evolved amplitude live here:

* direct ODE integration of the interaction-picture pair (a, c),
* the power series for a(t) whose terms blow up as the switching slows,
* a phase-function recursion that isolates the blow-up into a single
  time-independent phase, leaving a finite level shift and normalization.

The level shift has the closed form ``delta - sqrt(delta**2 + x**2)``, which
every series route is tested against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError
from .numkit import Jet, Trajectory, jet_mul, jet_recip, ode_evolve

__all__ = [
    "TwoStateModel",
    "TwoStateEigensystem",
    "GtildeTable",
    "BesselSeriesResult",
    "PhaseSplitTwoState",
    "FbIdentityResult",
    "LimitState",
    "exact_eigensystem",
    "gtilde_table",
    "gtilde_values",
    "delta_e_closed",
    "delta_e_series",
    "bessel_series_a",
    "phase_f",
    "phase_split",
    "fb_identity_check",
    "evolve_two_state",
    "limit_state",
]

# imaginary parts above this on a nominally real quantity abort the run
IMAG_GATE = 1e-8
DEFAULT_ORDER = 30
DEFAULT_JET_ORDER = 2
DEFAULT_START_THRESHOLD = 1e-8


@dataclass(frozen=True)
class TwoStateModel:
    """Two-level model: energy offset mu, half-gap delta, coupling x,
    switching rate eps. The coupling is ramped as ``x * exp(eps * t)``."""

    mu: float
    delta: float
    x: float
    eps: float

    def __post_init__(self):
        if not self.delta > 0:
            raise DomainError(f"half-gap delta must be > 0, got {self.delta}")
        if not self.x > 0:
            raise DomainError(f"coupling x must be > 0, got {self.x}")
        if not self.eps > 0:
            raise DomainError(f"switching rate eps must be > 0, got {self.eps}")

    def hamiltonian(self) -> np.ndarray:
        """Static Hamiltonian at full coupling (the t = 0 matrix)."""
        return np.array(
            [[self.mu - self.delta, self.x], [self.x, self.mu + self.delta]],
            dtype=complex,
        )


@dataclass(frozen=True, eq=False)
class TwoStateEigensystem:
    psi0: np.ndarray
    e0: float
    psi1: np.ndarray
    e1: float
    delta_e: float
    norm_n: float


@dataclass(frozen=True, eq=False)
class GtildeTable:
    """Recursion coefficients for the phase function, carried as jets in the
    switching rate so values and derivatives propagate together.

    ``entries[k]`` multiplies the (k+1)-th even power of the ramped coupling.
    """

    entries: tuple
    delta: float
    at_eps: float = 0.0

    def gn(self, n: int) -> Jet:
        """1-based access: coefficient of the 2n-th power of the coupling."""
        return self.entries[n - 1]

    def values(self) -> np.ndarray:
        return np.array([j.coeffs[0] for j in self.entries])

    def slopes(self) -> np.ndarray:
        """First derivatives with respect to the switching rate."""
        return np.array([j.coeffs[1] for j in self.entries])


@dataclass(frozen=True, eq=False)
class BesselSeriesResult:
    value: complex
    term_magnitudes: np.ndarray
    converged: bool


@dataclass(frozen=True)
class PhaseSplitTwoState:
    """Split of the accumulated phase-over-rate into a divergent coefficient
    (f_a, to be divided by the rate), a secular level shift, and a finite
    log-magnitude f_b. f_c is the finite-rate remainder diagnostic, expected
    to vanish linearly as the switching slows."""

    f_a: float
    delta_e_a: float
    f_b: float
    f_c: float
    truncation_order: int
    eps_used: float
    max_imag_residue: float


@dataclass(frozen=True)
class FbIdentityResult:
    lhs: float
    rhs: float
    residual: float
    shift_quadratic_residual: float
    rate_balance_residual: float


@dataclass(frozen=True, eq=False)
class LimitState:
    state: np.ndarray
    secular_phase: float
    divergent_coefficient: float


# ---------------------------------------------------------------------------
# exact eigensystem


def delta_e_closed(delta: float, x: float) -> float:
    """Ground-level shift delta - sqrt(delta**2 + x**2), evaluated in the
    cancellation-free form; always <= 0 and continuous with 0 at x = 0."""
    if not delta > 0:
        raise DomainError(f"delta must be > 0, got {delta}")
    if x < 0:
        raise DomainError(f"x must be >= 0, got {x}")
    return -(x * x) / (delta + math.hypot(delta, x))


def exact_eigensystem(m: TwoStateModel) -> TwoStateEigensystem:
    """Closed-form spectrum and orthonormal eigenvectors of the full matrix."""
    de = delta_e_closed(m.delta, m.x)
    hyp = math.hypot(m.delta, m.x)
    ratio = de / m.x
    norm_n = 1.0 / math.sqrt(1.0 + ratio * ratio)
    psi0 = norm_n * np.array([1.0, ratio], dtype=complex)
    psi1 = norm_n * np.array([-ratio, 1.0], dtype=complex)
    return TwoStateEigensystem(
        psi0=psi0,
        e0=m.mu - hyp,
        psi1=psi1,
        e1=m.mu + hyp,
        delta_e=de,
        norm_n=norm_n,
    )


# ---------------------------------------------------------------------------
# phase-function recursion coefficients


def gtilde_table(
    delta: float,
    order: int,
    jet_order: int = DEFAULT_JET_ORDER,
    at_eps: float = 0.0,
) -> GtildeTable:
    """First ``order`` phase-recursion coefficients as jets in the switching
    rate, expanded around ``at_eps`` (0 for the slow-switching limit).

    Entry n solves: first entry = -i / (2i*delta + rate); entry n =
    i * sum_{m<n} entry_{n-m} * entry_m / (2i*delta + (2n-1)*rate).
    Denominators never vanish for delta > 0.
    """
    if not delta > 0:
        raise DomainError(f"delta must be > 0, got {delta}")
    if order < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    if jet_order < 1:
        raise DomainError(f"jet order must be >= 1, got {jet_order}")
    two_i_delta = 2j * delta
    entries = []
    for n in range(1, order + 1):
        fac = 2 * n - 1
        den = Jet.variable(two_i_delta + fac * at_eps, jet_order, slope=fac)
        if n == 1:
            entries.append((-1j) * jet_recip(den))
        else:
            conv = Jet.constant(0.0, jet_order)
            for m_idx in range(1, n):
                conv = conv + jet_mul(entries[n - m_idx - 1], entries[m_idx - 1])
            entries.append(1j * jet_mul(conv, jet_recip(den)))
    return GtildeTable(entries=tuple(entries), delta=delta, at_eps=at_eps)


def gtilde_values(delta: float, eps: float, order: int) -> np.ndarray:
    """Phase-recursion coefficients evaluated exactly at a finite switching
    rate (plain complex recursion; equivalent to order-0 jets anchored there)."""
    if not delta > 0:
        raise DomainError(f"delta must be > 0, got {delta}")
    if order < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    g = np.zeros(order + 1, dtype=complex)  # g[0] unused; 1-based
    g[1] = -1j / (2j * delta + eps)
    for n in range(2, order + 1):
        conv = np.dot(g[1:n], g[n - 1 : 0 : -1])
        g[n] = 1j * conv / (2j * delta + (2 * n - 1) * eps)
    return g[1:]


# ---------------------------------------------------------------------------
# level-shift series


def _require_series_domain(delta: float, x: float) -> None:
    if not x < delta:
        raise DomainError(
            f"series requires x < delta (convergence radius delta = {delta}, "
            f"branch point at x = i*delta); got x = {x}"
        )


def delta_e_series(delta: float, x: float, order: int = DEFAULT_ORDER):
    """Partial sums of the level-shift power series in the coupling.

    Returns ``(partial_sums, value)`` where ``partial_sums[n-1]`` holds the
    series through the 2n-th power of x and ``value`` is the last one.
    """
    if not x > 0:
        raise DomainError(f"x must be > 0, got {x}")
    _require_series_domain(delta, x)
    g0 = gtilde_values(delta, 0.0, order).real
    powers = x ** (2 * np.arange(1, order + 1))
    partial = np.cumsum(powers * g0)
    return partial, float(partial[-1])


# ---------------------------------------------------------------------------
# divergent series for the surviving amplitude


def bessel_series_a(
    m: TwoStateModel,
    t: float,
    terms: int,
    stop_below: float | None = None,
) -> BesselSeriesResult:
    """Series for the surviving amplitude a(t), summed by term-ratio recursion.

    The k-th term carries the k-th inverse power of the switching rate, so
    for slow switching the magnitudes grow before (if ever) decaying; they
    are returned for divergence diagnostics. Overflow before convergence is
    not an error: the partial value is returned flagged non-converged.
    """
    if terms < 1:
        raise DomainError(f"need at least one term, got {terms}")
    s = m.x * math.exp(m.eps * t) / m.eps
    z = -0.25 * s * s
    nu = 0.5 - 1j * m.delta / m.eps
    value = 1.0 + 0.0j
    term = 1.0 + 0.0j
    mags = []
    converged = True
    for k in range(1, terms + 1):
        term = term * z / (k * (k - nu))
        mag = abs(term)
        if not math.isfinite(mag):
            converged = False
            break
        mags.append(mag)
        if mag > 1e250:
            converged = False
            break
        value += term
        if stop_below is not None and mag < stop_below:
            break
    if converged and mags:
        converged = mags[-1] <= 1e-12 * max(1.0, abs(value))
    return BesselSeriesResult(
        value=complex(value),
        term_magnitudes=np.array(mags),
        converged=converged,
    )


# ---------------------------------------------------------------------------
# phase-function route


def phase_f(m: TwoStateModel, t: float, order: int = DEFAULT_ORDER) -> complex:
    """Accumulated phase function f(t) at the model's finite switching rate;
    the amplitude is ``exp(-1j * f / eps)``."""
    if order < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    g = gtilde_values(m.delta, m.eps, order)
    lam2 = (m.x * math.exp(m.eps * t)) ** 2
    n = np.arange(1, order + 1)
    return complex(np.sum(lam2**n / (2 * n) * g))


def phase_split(
    m: TwoStateModel,
    order: int = DEFAULT_ORDER,
    jet_order: int = DEFAULT_JET_ORDER,
) -> PhaseSplitTwoState:
    """Split the t = 0 phase-over-rate into divergent coefficient, secular
    shift, and finite log-magnitude, with a finite-rate remainder diagnostic.

    The remainder f_c is built from the second-order jet coefficients and is
    expected to vanish linearly with the switching rate.
    """
    _require_series_domain(m.delta, m.x)
    if order < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    table = gtilde_table(m.delta, order, max(jet_order, 2))
    c0 = table.values()
    c1 = table.slopes()
    c2 = np.array([j.coeffs[2] for j in table.entries])
    n = np.arange(1, order + 1)
    powers = m.x ** (2 * n)
    f_a = np.sum(powers * c0 / (2 * n))
    de = np.sum(powers * c0)
    f_b = -1j * np.sum(powers * c1 / (2 * n))
    f_c = m.eps * np.sum(powers * c2 / (2 * n))
    residues = {"f_a": abs(f_a.imag), "delta_e_a": abs(de.imag), "f_b": abs(f_b.imag)}
    worst = max(residues, key=residues.get)
    if residues[worst] > IMAG_GATE:
        raise ConsistencyError(
            f"imaginary residue {residues[worst]:.3e} on {worst} exceeds {IMAG_GATE:.0e}"
        )
    return PhaseSplitTwoState(
        f_a=float(f_a.real),
        delta_e_a=float(de.real),
        f_b=float(f_b.real),
        f_c=float(f_c.real),
        truncation_order=order,
        eps_used=m.eps,
        max_imag_residue=max(residues.values()),
    )


def fb_identity_check(
    delta: float, x: float, order: int = DEFAULT_ORDER
) -> FbIdentityResult:
    """Compare exp(f_b) from the recursion against the closed-form
    normalization 1/sqrt(1 + (shift/x)**2), plus two consistency relations:
    the quadratic satisfied by the shift and the first-order balance tying
    the x-derivatives of f_b and the shift (central differences)."""
    _require_series_domain(delta, x)
    table = gtilde_table(delta, order, 2)
    c0 = table.values().real
    c1 = table.slopes()
    n = np.arange(1, order + 1)

    def shift_of(xx):
        return float(np.sum(xx ** (2 * n) * c0))

    def fb_of(xx):
        v = -1j * np.sum(xx ** (2 * n) * c1 / (2 * n))
        return float(v.real)

    lhs = math.exp(fb_of(x))
    de_closed = delta_e_closed(delta, x)
    rhs = 1.0 / math.sqrt(1.0 + (de_closed / x) ** 2)

    de_series = shift_of(x)
    quad = abs(-de_series * de_series + 2 * delta * de_series + x * x)

    h = 1e-5 * x
    dfb = (fb_of(x + h) - fb_of(x - h)) / (2 * h)
    dde = (shift_of(x + h) - shift_of(x - h)) / (2 * h)
    balance = abs(2 * x * dfb * (delta - de_series) + (de_series - x * dde))

    return FbIdentityResult(
        lhs=lhs,
        rhs=rhs,
        residual=abs(lhs - rhs),
        shift_quadratic_residual=quad,
        rate_balance_residual=balance,
    )


# ---------------------------------------------------------------------------
# ODE route


def switch_on_time(gap: float, x: float, eps: float, threshold: float) -> float:
    """Start time at which the ramped coupling is ``threshold`` of the gap."""
    return math.log(gap * threshold / x) / eps


def evolve_two_state(
    m: TwoStateModel,
    t_end: float,
    tol: float,
    start_threshold: float = DEFAULT_START_THRESHOLD,
) -> Trajectory:
    """Integrate the interaction-picture amplitude pair (a, c) from deep in
    the switch-on tail (ramped coupling at ``start_threshold`` of the gap 2*delta)
    to ``t_end``, starting from (1, 0). The generator is anti-Hermitian, so
    |a|**2 + |c|**2 stays at 1 within a small multiple of ``tol``."""
    if not 0 < start_threshold <= 1e-4:
        raise DomainError(
            f"start_threshold must be in (0, 1e-4], got {start_threshold}"
        )
    t0 = switch_on_time(2 * m.delta, m.x, m.eps, start_threshold)
    if not t0 < t_end:
        raise DomainError(
            f"switch-on start t0 = {t0:.6g} is not before t_end = {t_end:.6g}; "
            "lower start_threshold or move t_end"
        )
    x, delta, eps = m.x, m.delta, m.eps

    def rhs(t, y):
        w = -1j * x * math.exp(eps * t)
        phase = np.exp(-2j * delta * t)
        return np.array([w * phase * y[1], w * np.conj(phase) * y[0]])

    y0 = np.array([1.0, 0.0], dtype=complex)
    return ode_evolve(rhs, y0, t0, t_end, tol)


# ---------------------------------------------------------------------------
# assembled slow-switching limit


def limit_state(
    m: TwoStateModel, t: float, order: int = DEFAULT_ORDER
) -> LimitState:
    """Evolved state in the slow-switching limit with the divergent phase
    factor dropped, not exponentiated: its coefficient (to be divided by the
    switching rate) is returned separately so callers see exactly what was
    removed. At t = 0 this is the exact ground eigenvector."""
    split = phase_split(m, order)
    de = split.delta_e_a
    norm = math.exp(split.f_b)
    phase = np.exp(-1j * (m.mu - m.delta) * t) * np.exp(-1j * de * t)
    state = phase * norm * np.array([1.0, de / m.x], dtype=complex)
    return LimitState(
        state=state,
        secular_phase=de * t,
        divergent_coefficient=split.f_a,
    )
