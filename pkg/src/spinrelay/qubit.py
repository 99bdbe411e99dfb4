"""The single-qubit observer chain.

A direction n encoded in one spin-1/2 is estimated in turn by k observers
who cannot communicate.  Each observer applies the uniform-prior-optimal
covariant POVM (or its Stern-Gerlach realization), guesses the outcome
direction, and passes on a re-prepared pure state.  The mean overlap of
observer k's guess with n obeys the closed form delta_k = eta^k with
eta = cos(phi)/3 for the Kraus family parameterized below, equivalently a
depolarizing channel applied k times to the Bloch vector.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .records import ChainRecord
from .rng import as_generator
from .sphere import (
    inverse_cdf_cos_tilt,
    require_unit,
    rotate_towards,
    sample_uniform_sphere,
)

SCHEMES = ("covariant", "stern_gerlach")


@dataclass(frozen=True)
class BlochState:
    """Qubit state as a Bloch 3-vector, |r| <= 1; pure states have |r| = 1."""

    r: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        if r.shape != (3,):
            raise ValueError("Bloch vector must have shape (3,)")
        if np.linalg.norm(r) > 1.0 + 1e-12:
            raise ValueError("Bloch vector must have norm <= 1")
        object.__setattr__(self, "r", r)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.r))


@dataclass(frozen=True)
class QubitKrausFamily:
    """Measure-and-prepare realization of the covariant qubit POVM.

    The POVM element for outcome m is factored as A(m) = sqrt(2) |m_phi><m|
    where m_phi is m tilted by ``offset_angle``.  phi = 0 re-prepares the
    guess itself (minimal disturbance); phi = pi re-prepares the opposite
    direction (maximal disturbance).  The outcome statistics never depend
    on phi, only the state handed to the next observer does.

    ``azimuth_policy`` fixes where on the tilt cone m_phi sits: "random"
    (uniform per outcome, the default, which preserves average covariance)
    or "fixed" (use ``fixed_azimuth`` in the deterministic frame of
    :func:`spinrelay.sphere.rotate_towards`).
    """

    offset_angle: float = 0.0
    azimuth_policy: str = "random"
    fixed_azimuth: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.offset_angle <= math.pi:
            raise ValueError("offset_angle must lie in [0, pi]")
        if self.azimuth_policy not in ("random", "fixed"):
            raise ValueError("azimuth_policy must be 'random' or 'fixed'")


@dataclass(frozen=True)
class DepolarizingChannel:
    """Bloch-vector shrink r -> eta r; physical qubit realizations have
    eta in [-1/3, 1/3]."""

    eta: float

    def __post_init__(self):
        if abs(self.eta) > 1.0 / 3.0 + 1e-12:
            raise ValueError("shrink factor must lie in [-1/3, 1/3]")


def single_qubit_fidelity(m, n) -> float:
    """Fidelity (1 + m.n)/2 between a guessed and a true direction."""
    m = require_unit(m, "m")
    n = require_unit(n, "n")
    return float(np.clip(0.5 * (1.0 + float(m @ n)), 0.0, 1.0))


def fidelity_from_delta(delta: float) -> float:
    """Mean fidelity (1 + delta)/2 from a mean overlap delta in [-1, 1]."""
    if abs(delta) > 1.0:
        raise ValueError(f"delta must lie in [-1, 1], got {delta}")
    return 0.5 * (1.0 + delta)


def disturbance_constant(kraus: QubitKrausFamily) -> float:
    """Disturbance constant c = integral over outcomes of |tr A(m)|^2.

    For A(m) = sqrt(2)|m_phi><m| the trace is sqrt(2) <m|m_phi>, whose
    squared modulus is 2 cos^2(phi/2) = 1 + cos(phi) independently of m,
    so c = 1 + cos(phi): 2 at phi = 0 (dimension bound, least disturbance)
    down to 0 at phi = pi (traceless Kraus operators, worst disturbance).
    """
    return 1.0 + math.cos(kraus.offset_angle)


def eta_from_c(c: float) -> float:
    """Depolarizing shrink factor eta = (c - 1)/3 for c in [0, 2]."""
    if not 0.0 <= c <= 2.0:
        raise ValueError(f"disturbance constant must lie in [0, 2], got {c}")
    return (c - 1.0) / 3.0


def apply_depolarizing(state: BlochState, channel: DepolarizingChannel) -> BlochState:
    """One pass through the channel: r -> eta r."""
    return BlochState(channel.eta * state.r)


def analytic_fk_single(k: int, eta: float) -> float:
    """Closed-form mean fidelity of observer k: F_k = (1 + eta^k) / 2."""
    if k < 1:
        raise ValueError(f"observer index must be >= 1, got {k}")
    return 0.5 * (1.0 + eta ** k)


def _prepare(estimates: np.ndarray, kraus: QubitKrausFamily, gen) -> np.ndarray:
    """States handed to the next observer: estimates tilted by the offset angle."""
    phi = kraus.offset_angle
    if phi == 0.0:
        return estimates
    n = estimates.shape[0]
    if kraus.azimuth_policy == "random":
        az = gen.uniform(0.0, 2.0 * np.pi, size=n)
    else:
        az = np.full(n, kraus.fixed_azimuth)
    return rotate_towards(estimates, np.full(n, math.cos(phi)), az)


def _covariant_estimates(state_dirs: np.ndarray, gen) -> np.ndarray:
    n = state_dirs.shape[0]
    x = inverse_cdf_cos_tilt(1.0 - gen.random(n), 1)
    az = gen.uniform(0.0, 2.0 * np.pi, size=n)
    return rotate_towards(state_dirs, x, az)


def _sg_estimates(state_dirs: np.ndarray, gen) -> np.ndarray:
    n = state_dirs.shape[0]
    axes = sample_uniform_sphere(gen, n)
    p_plus = 0.5 * (1.0 + np.sum(axes * state_dirs, axis=-1))
    signs = np.where(gen.random(n) < p_plus, 1.0, -1.0)
    return signs[:, None] * axes


def simulate_observer_covariant(state_dir, kraus: QubitKrausFamily, rng):
    """One covariant-POVM observer acting on a pure state along ``state_dir``.

    Returns (estimate, prepared): the guessed direction, drawn with tilt
    density (1 + x)/2 about the state and uniform azimuth, and the pure
    direction handed on (the estimate tilted by the Kraus offset angle).
    """
    gen = as_generator(rng)
    state = require_unit(state_dir, "state_dir")[None, :]
    est = _covariant_estimates(state, gen)
    prep = _prepare(est, kraus, gen)
    return est[0], prep[0]


def simulate_observer_sg(state_dir, rng):
    """One Stern-Gerlach observer: uniformly random axis, two outcomes.

    The measurement axis m is uniform on the sphere, the outcome is +-
    with probability (1 +- m . state)/2, the estimate is the outcome
    direction, and the prepared state equals the estimate (the projector's
    eigenstate).  Marginally this reproduces the covariant observer.
    """
    gen = as_generator(rng)
    state = require_unit(state_dir, "state_dir")[None, :]
    est = _sg_estimates(state, gen)
    return est[0], est[0].copy()


def chain_dots_single(k: int, kraus: QubitKrausFamily, scheme: str, rng,
                      trials: int, overlap: str = "estimate") -> np.ndarray:
    """Vectorized observer chains; returns overlaps of shape (trials, k).

    With ``overlap="estimate"`` column j holds n . m_{j+1}: how well
    observer j+1's guess matches the true direction (the estimation
    fidelity contract).  With ``overlap="prepared"`` it holds n . s_{j+1},
    the overlap of the state handed onward, whose mean is the (j+1)-fold
    composition of the depolarizing channel, (cos(phi)/3)^(j+1).  The two
    coincide for offset angle 0, where prepared = estimate.
    """
    if overlap not in ("estimate", "prepared"):
        raise ValueError("overlap must be 'estimate' or 'prepared'")
    _validate_chain_args(k, kraus, scheme, trials)
    gen = as_generator(rng)
    true_dirs = sample_uniform_sphere(gen, trials)
    current = true_dirs
    dots = np.empty((trials, k))
    for j in range(k):
        if scheme == "covariant":
            est = _covariant_estimates(current, gen)
        else:
            est = _sg_estimates(current, gen)
        current = _prepare(est, kraus, gen)
        tracked = est if overlap == "estimate" else current
        dots[:, j] = np.sum(tracked * true_dirs, axis=-1)
    return dots


def _validate_chain_args(k, kraus, scheme, trials):
    if k < 1:
        raise ValueError(f"chain length must be >= 1, got {k}")
    if not isinstance(kraus, QubitKrausFamily):
        raise TypeError("kraus must be a QubitKrausFamily")
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")


def _chain_estimates(k, kraus, scheme, rng, trials):
    _validate_chain_args(k, kraus, scheme, trials)
    gen = as_generator(rng)
    true_dirs = sample_uniform_sphere(gen, trials)
    current = true_dirs
    ests = np.empty((trials, k, 3))
    for j in range(k):
        if scheme == "covariant":
            est = _covariant_estimates(current, gen)
        else:
            est = _sg_estimates(current, gen)
        ests[:, j, :] = est
        current = _prepare(est, kraus, gen)
    return true_dirs, ests


def simulate_chain_single(k: int, kraus: QubitKrausFamily, scheme: str,
                          rng) -> ChainRecord:
    """One trajectory of the k-observer single-qubit chain."""
    true_dirs, ests = _chain_estimates(k, kraus, scheme, rng, trials=1)
    dots = np.sum(ests[0] * true_dirs[0], axis=-1)
    return ChainRecord(true_direction=true_dirs[0], estimates=ests[0], dots=dots)
