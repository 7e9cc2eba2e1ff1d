"""Adaptive embedded Runge-Kutta 5(4) integration for complex ODE systems.

Dormand-Prince pair with PI step-size control (safety 0.9, growth clamped
to [0.2, 5.0]). Suited to the smooth, non-stiff switching problems in this
package, where a long quiescent tail benefits from aggressive step growth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, IntegrationError

__all__ = ["Trajectory", "ode_evolve"]

SAFETY = 0.9
GROWTH_MIN = 0.2
GROWTH_MAX = 5.0
# PI controller exponents for a 5th-order propagator
PI_ALPHA = 0.7 / 5.0
PI_BETA = 0.4 / 5.0
MAX_STEPS = 5_000_000

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# difference between 5th- and embedded 4th-order weights
_ERR = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Accepted integration steps: matching times and state vectors."""

    times: np.ndarray
    states: np.ndarray
    accepted_steps: int
    rejected_steps: int

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        y = np.asarray(self.states, dtype=complex)
        if t.ndim != 1 or y.ndim != 2 or y.shape[0] != t.size:
            raise ValueError("times and states must be matching 1-d / 2-d arrays")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise ValueError("trajectory times must be strictly increasing")
        t.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "states", y)

    @property
    def final_time(self) -> float:
        return float(self.times[-1])

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)


def _error_norm(err, y_old, y_new, tol):
    scale = tol + tol * np.maximum(np.abs(y_old), np.abs(y_new))
    return float(np.sqrt(np.mean(np.abs(err / scale) ** 2)))


def _initial_step(rhs, t0, t1, y0, f0, tol):
    """Hairer-style starting step estimate."""
    span = t1 - t0
    scale = tol + tol * np.abs(y0)
    d0 = float(np.sqrt(np.mean(np.abs(y0 / scale) ** 2)))
    d1 = float(np.sqrt(np.mean(np.abs(f0 / scale) ** 2)))
    h0 = 1e-6 if d1 < 1e-5 or d0 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, span)
    f1 = np.asarray(rhs(t0 + h0, y0 + h0 * f0), dtype=complex)
    d2 = float(np.sqrt(np.mean(np.abs((f1 - f0) / scale) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, span)


def ode_evolve(rhs, y0, t0: float, t1: float, tol: float) -> Trajectory:
    """Integrate ``y' = rhs(t, y)`` from t0 to t1, recording every accepted step.

    ``rhs`` must accept a float time and a complex state vector and return
    the complex derivative vector. The local error is controlled relative
    to ``tol``; for anti-Hermitian generators the state norm drifts by at
    most a small multiple of ``tol`` over moderate spans.

    Raises IntegrationError (naming the time of failure) if the step size
    underflows, which indicates stiffness or a singularity beyond the
    tolerance budget.
    """
    if not t0 < t1:
        raise DomainError(f"need t0 < t1, got [{t0}, {t1}]")
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")

    y = np.atleast_1d(np.asarray(y0, dtype=complex)).copy()
    t = float(t0)
    f0 = np.asarray(rhs(t, y), dtype=complex)
    h = _initial_step(rhs, t0, t1, y, f0, tol)

    times = [t]
    states = [y.copy()]
    accepted = 0
    rejected = 0
    err_prev = 1e-4
    k = np.empty((7, y.size), dtype=complex)
    k[0] = f0

    while t < t1:
        h = min(h, t1 - t)
        h_floor = 8.0 * np.finfo(float).eps * max(abs(t), abs(t1 - t0))
        if h <= h_floor:
            raise IntegrationError(
                f"step size underflow ({h:.3e}) at t = {t:.12g}", time=t
            )
        if accepted + rejected > MAX_STEPS:
            raise IntegrationError(
                f"step budget exhausted at t = {t:.12g}", time=t
            )

        for i in range(1, 7):
            yi = y + h * (k[:i].T @ np.asarray(_A[i]))
            k[i] = rhs(t + _C[i] * h, yi)
        y_new = y + h * (k.T @ _B5)
        err_vec = h * (k.T @ _ERR)

        if not (np.all(np.isfinite(y_new)) and np.all(np.isfinite(err_vec))):
            err_norm = np.inf
        else:
            err_norm = _error_norm(err_vec, y, y_new, tol)

        if err_norm <= 1.0:
            t_new = t + h
            # k7 was evaluated at (t_new, y_new): reuse as next first stage
            k[0] = k[6]
            y = y_new
            t = t_new
            times.append(t)
            states.append(y.copy())
            accepted += 1
            if err_norm == 0.0:
                factor = GROWTH_MAX
            else:
                factor = SAFETY * err_norm ** (-PI_ALPHA) * err_prev ** PI_BETA
            h *= min(GROWTH_MAX, max(GROWTH_MIN, factor))
            err_prev = max(err_norm, 1e-10)
        else:
            rejected += 1
            if np.isfinite(err_norm):
                factor = SAFETY * err_norm ** (-0.2)
            else:
                factor = GROWTH_MIN
            h *= min(1.0, max(GROWTH_MIN, factor))

    return Trajectory(
        times=np.array(times),
        states=np.array(states),
        accepted_steps=accepted,
        rejected_steps=rejected,
    )
