"""Arbitrary finite level count under an exponentially switched perturbation.

The slow-switching limit of the evolved state is built from a projector
recursion for the phase coefficients and the orthogonal corrections. All
inverse powers of the switching rate end up in a single phase coefficient;
what remains is the level shift (cross-checked against exact
diagonalization) and a finite log-magnitude that restores normalization.
A second-order Dyson expansion provides an independent finite-rate check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, ContinuationError, DegeneracyError, DomainError
from .numkit import HermitianMatrix, Jet, Trajectory, hermitian_eig, jet_recip, ode_evolve
from .twostate import TwoStateModel, switch_on_time

__all__ = [
    "NStateModel",
    "RsExpansion",
    "GSplit",
    "AssembledState",
    "two_level_embed",
    "dyson2",
    "dyson2_terms",
    "rs_recursion",
    "g_split",
    "assemble_state",
    "evolve_nstate",
    "oracle_shift",
]

IMAG_GATE = 1e-9
GAP_FLOOR_FACTOR = 1e-8
DEFAULT_JET_ORDER = 2
DEFAULT_START_THRESHOLD = 1e-8
# an eigenvector must hold at least this probability weight on the initial
# basis state to count as its continuation
OVERLAP_FLOOR = 0.5


@dataclass(frozen=True, eq=False)
class NStateModel:
    """Unperturbed energies, Hermitian perturbation, coupling and switching
    rate. The tracked initial state (default index 0) must be separated from
    every other level by at least ``gap_floor``."""

    energies: np.ndarray
    v: HermitianMatrix
    x: float
    eps: float
    ground_index: int = 0
    gap_floor: float = field(default=0.0)

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float).copy()
        if e.ndim != 1 or e.size < 2:
            raise DomainError("energies must be a 1-d sequence of length >= 2")
        v = self.v if isinstance(self.v, HermitianMatrix) else HermitianMatrix(self.v)
        if v.dim != e.size:
            raise DomainError(
                f"perturbation is {v.dim}x{v.dim} but there are {e.size} levels"
            )
        if not self.x > 0:
            raise DomainError(f"coupling x must be > 0, got {self.x}")
        if not self.eps > 0:
            raise DomainError(f"switching rate eps must be > 0, got {self.eps}")
        g = self.ground_index
        if not 0 <= g < e.size:
            raise DomainError(f"ground_index {g} out of range for {e.size} levels")
        spread = float(e.max() - e.min())
        floor = self.gap_floor if self.gap_floor > 0 else GAP_FLOOR_FACTOR * spread
        if spread == 0.0:
            raise DegeneracyError("all levels coincide; tracked state is degenerate")
        gaps = np.abs(e - e[g])
        gaps[g] = np.inf
        worst = int(np.argmin(gaps))
        if gaps[worst] < floor:
            raise DegeneracyError(
                f"levels {g} and {worst} are separated by {gaps[worst]:.3e}, "
                f"below the degeneracy floor {floor:.3e}"
            )
        e.flags.writeable = False
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "gap_floor", floor)

    @property
    def dim(self) -> int:
        return self.energies.size

    @property
    def ground_energy(self) -> float:
        return float(self.energies[self.ground_index])

    @property
    def min_gap(self) -> float:
        gaps = np.abs(self.energies - self.ground_energy)
        gaps[self.ground_index] = np.inf
        return float(gaps.min())

    def hamiltonian(self) -> np.ndarray:
        """Static Hamiltonian at full coupling."""
        return np.diag(self.energies).astype(complex) + self.x * self.v.entries


def two_level_embed(m: TwoStateModel) -> NStateModel:
    """The two-level model rendered as an N-state model (off-diagonal unit
    perturbation), used to cross-check the two formulations against each other."""
    return NStateModel(
        energies=np.array([m.mu - m.delta, m.mu + m.delta]),
        v=HermitianMatrix(np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)),
        x=m.x,
        eps=m.eps,
    )


# ---------------------------------------------------------------------------
# Dyson expansion to second order


def dyson2_terms(model: NStateModel, t: float):
    """Coefficient vectors of the zeroth, first and second power of the
    coupling in the second-order Dyson expansion (free phase omitted)."""
    e = model.energies
    g = model.ground_index
    vm = model.v.entries
    eps = model.eps
    dim = model.dim
    ramp = math.exp(eps * t)

    others = np.array([n for n in range(dim) if n != g])
    de = e[others] - e[g]
    d1 = 1j * de + eps  # first-order denominators
    d2 = 1j * de + 2 * eps  # second-order outer denominators
    vgg = vm[g, g]

    zeroth = np.zeros(dim, dtype=complex)
    zeroth[g] = 1.0

    first = np.zeros(dim, dtype=complex)
    first[g] = vgg / eps
    first[others] = vm[others, g] / d1
    first *= -1j * ramp

    second = np.zeros(dim, dtype=complex)
    second[g] = vgg * vgg / (2 * eps * eps)
    second[g] += np.sum(vm[g, others] * vm[others, g] / (2 * eps * d1))
    second[others] = vm[others, g] * vgg / (d2 * eps)
    second[others] += (vm[np.ix_(others, others)] @ (vm[others, g] / d1)) / d2
    second *= -(ramp * ramp)

    return zeroth, first, second


def dyson2(model: NStateModel, t: float) -> np.ndarray:
    """Second-order Dyson state at finite switching rate, without the global
    free-evolution phase of the tracked level (``exp(-1j * E_g * t)``), which
    the caller applies if needed. Meaningful only at finite rate: the
    coefficients carry first and second inverse powers of it."""
    zeroth, first, second = dyson2_terms(model, t)
    return zeroth + model.x * first + model.x * model.x * second


# ---------------------------------------------------------------------------
# projector recursion


@dataclass(frozen=True, eq=False)
class RsExpansion:
    """Phase coefficients (scalar jets) and orthogonal correction vectors
    (one jet per component) from the projector recursion.

    ``phi[n-1, :, k]`` is the k-th jet coefficient of the order-n correction
    vector; its tracked component is identically zero by construction. Jets
    are expanded around ``at_eps`` (0 for the slow-switching limit).
    """

    xi: tuple
    phi: np.ndarray
    order: int
    jet_order: int
    at_eps: float
    ground_index: int

    def xi_values(self) -> np.ndarray:
        """Phase coefficients at the expansion point, orders 1..order."""
        return np.array([j.coeffs[0] for j in self.xi])

    def xi_slopes(self) -> np.ndarray:
        """Derivatives of the phase coefficients with respect to the rate."""
        return np.array([j.coeffs[1] for j in self.xi])

    def phi_n(self, n: int) -> np.ndarray:
        """Order-n correction vector at the expansion point (1-based)."""
        return self.phi[n - 1, :, 0]


def rs_recursion(
    model: NStateModel,
    order: int,
    jet_order: int = DEFAULT_JET_ORDER,
    at_eps: float = 0.0,
) -> RsExpansion:
    """Run the projector recursion to ``order`` powers of the coupling.

    The resolvent at order n divides component k by
    ``(E_k - E_g) - 1j * n * rate``; the n-fold rate follows from the n-th
    power of the ramped coupling and is what makes the finite-rate result
    match the Dyson expansion order by order.
    """
    if order < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    if jet_order < 0:
        raise DomainError(f"jet order must be >= 0, got {jet_order}")
    e = model.energies
    g = model.ground_index
    vm = model.v.entries
    dim = model.dim
    k1 = jet_order + 1

    # reciprocal resolvent jets, per recursion order and component
    recip_coeffs = np.zeros((order + 1, dim, k1), dtype=complex)
    for n in range(1, order + 1):
        for comp in range(dim):
            if comp == g:
                continue
            anchor = e[comp] - e[g] - 1j * n * at_eps
            if jet_order >= 1:
                den = Jet.variable(anchor, jet_order, slope=-1j * n)
            else:
                den = Jet.constant(anchor, 0)
            recip_coeffs[n, comp] = jet_recip(den).coeffs

    def conv(a, b):
        # truncated Cauchy product along the jet axis (last axis)
        out = np.zeros_like(b)
        for k in range(k1):
            out[..., k] = np.sum(a[..., : k + 1] * b[..., k::-1], axis=-1)
        return out

    xi: list[Jet] = [Jet.constant(vm[g, g], jet_order)]
    phi = np.zeros((order, dim, k1), dtype=complex)

    w = np.zeros((dim, k1), dtype=complex)
    w[:, 0] = vm[:, g]
    w[g, 0] = 0.0
    phi[0] = -conv(recip_coeffs[1], w)
    phi[0, g] = 0.0

    for n in range(2, order + 1):
        xi.append(Jet(np.tensordot(vm[g, :], phi[n - 2], axes=(0, 0))))
        bracket = np.tensordot(vm, phi[n - 2], axes=(1, 0))
        bracket[g] = 0.0
        for m_idx in range(1, n):
            bracket -= conv(xi[n - m_idx - 1].coeffs, phi[m_idx - 1])
        phi[n - 1] = -conv(recip_coeffs[n], bracket)
        phi[n - 1, g] = 0.0

    phi.flags.writeable = False
    return RsExpansion(
        xi=tuple(xi),
        phi=phi,
        order=order,
        jet_order=jet_order,
        at_eps=at_eps,
        ground_index=g,
    )


# ---------------------------------------------------------------------------
# Laurent split of the accumulated phase and the assembled limit state


@dataclass(frozen=True)
class GSplit:
    """Divergent phase coefficient g_a (to be divided by the rate), secular
    level shift, and finite log-magnitude g_b, all real after the residue
    gate. ``last_term_magnitude`` records how far the shift series had
    decayed at truncation."""

    g_a: float
    delta_e: float
    g_b: float
    order: int
    last_term_magnitude: float
    max_imag_residue: float


@dataclass(frozen=True, eq=False)
class AssembledState:
    state: np.ndarray
    split: GSplit
    energy: float


def _split_from(rs: RsExpansion, model: NStateModel) -> GSplit:
    n = np.arange(1, rs.order + 1)
    powers = model.x**n
    c0 = rs.xi_values()
    c1 = rs.xi_slopes()
    g_a = np.sum(powers * c0 / n)
    de = np.sum(powers * c0)
    g_b = -1j * np.sum(powers * c1 / n)
    residues = {"g_a": abs(g_a.imag), "delta_e": abs(de.imag), "g_b": abs(g_b.imag)}
    worst = max(residues, key=residues.get)
    if residues[worst] > IMAG_GATE:
        raise ConsistencyError(
            f"imaginary residue {residues[worst]:.3e} on {worst} exceeds {IMAG_GATE:.0e}"
        )
    return GSplit(
        g_a=float(g_a.real),
        delta_e=float(de.real),
        g_b=float(g_b.real),
        order=rs.order,
        last_term_magnitude=float(abs(powers[-1] * c0[-1])),
        max_imag_residue=max(residues.values()),
    )


def g_split(
    model: NStateModel, order: int, jet_order: int = DEFAULT_JET_ORDER
) -> GSplit:
    """Laurent split of the accumulated phase in the slow-switching limit.

    Accepts any coupling; convergence is the caller's concern and can be
    judged from ``last_term_magnitude``.
    """
    rs = rs_recursion(model, order, max(jet_order, 1), at_eps=0.0)
    return _split_from(rs, model)


def assemble_state(
    model: NStateModel, order: int, jet_order: int = DEFAULT_JET_ORDER
) -> AssembledState:
    """Slow-switching limit state with the divergent phase factor dropped
    (its coefficient is reported in the split). The time dependence
    ``exp(-1j * (E_g + shift) * t)`` is left to the caller via ``energy``."""
    rs = rs_recursion(model, order, max(jet_order, 1), at_eps=0.0)
    split = _split_from(rs, model)
    correction = np.zeros(model.dim, dtype=complex)
    for n in range(1, order + 1):
        correction += model.x**n * rs.phi_n(n)
    state = np.zeros(model.dim, dtype=complex)
    state[model.ground_index] = 1.0
    state = math.exp(split.g_b) * (state + correction)
    return AssembledState(
        state=state, split=split, energy=model.ground_energy + split.delta_e
    )


# ---------------------------------------------------------------------------
# oracles


def evolve_nstate(
    model: NStateModel,
    t_end: float,
    tol: float,
    start_threshold: float = DEFAULT_START_THRESHOLD,
) -> Trajectory:
    """Full Schrodinger evolution under the ramped perturbation from deep in
    the switch-on tail (ramped coupling at ``start_threshold`` of the
    smallest gap to the tracked level), starting in the tracked basis state."""
    if not 0 < start_threshold <= 1e-4:
        raise DomainError(
            f"start_threshold must be in (0, 1e-4], got {start_threshold}"
        )
    t0 = switch_on_time(model.min_gap, model.x, model.eps, start_threshold)
    if not t0 < t_end:
        raise DomainError(
            f"switch-on start t0 = {t0:.6g} is not before t_end = {t_end:.6g}; "
            "lower start_threshold or move t_end"
        )
    e = model.energies
    vm = model.v.entries
    x, eps = model.x, model.eps

    def rhs(t, y):
        return -1j * (e * y + (x * math.exp(eps * t)) * (vm @ y))

    y0 = np.zeros(model.dim, dtype=complex)
    y0[model.ground_index] = 1.0
    return ode_evolve(rhs, y0, t0, t_end, tol)


def oracle_shift(model: NStateModel) -> float:
    """Exact level shift: eigenvalue of the fully coupled Hamiltonian whose
    eigenvector carries the most probability on the tracked basis state
    (adiabatic continuation, not necessarily the global minimum), minus the
    unperturbed energy.

    Raises ContinuationError when no eigenvector holds a majority weight,
    i.e. the coupling is too strong for perturbative tracking.
    """
    w, vecs = hermitian_eig(model.hamiltonian())
    weights = np.abs(vecs[model.ground_index, :]) ** 2
    k = int(np.argmax(weights))
    if weights[k] < OVERLAP_FLOOR:
        raise ContinuationError(
            f"largest eigenvector weight on the tracked state is "
            f"{weights[k]:.3f} < {OVERLAP_FLOOR}; adiabatic continuation ambiguous"
        )
    return float(w[k] - model.ground_energy)
