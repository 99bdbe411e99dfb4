"""Geometry and sampling on the unit 2-sphere.

Directions are plain float ndarrays: shape ``(3,)`` for a single unit
vector or ``(..., 3)`` for batches.  All functions broadcast over leading
axes so trajectory simulations can run fully vectorized.
"""

from __future__ import annotations

import numpy as np

from .rng import as_generator

#: tolerance of the unit-norm invariant guaranteed by constructors/rotations
UNIT_TOL = 1e-12

#: tolerance used when *validating* unit-norm inputs (a little slack over
#: UNIT_TOL so values that round-tripped through arithmetic still pass)
_VALIDATE_TOL = 1e-9


def unit_vector(x: float, y: float, z: float) -> np.ndarray:
    """Build a unit vector from Cartesian components, normalizing them.

    Raises ``ValueError`` for a (near-)zero input vector.
    """
    v = np.array([x, y, z], dtype=float)
    n = np.linalg.norm(v)
    if not np.isfinite(n) or n < 1e-300:
        raise ValueError("cannot normalize a zero or non-finite vector")
    return v / n


def require_unit(v, name: str = "vector") -> np.ndarray:
    """Validate that ``v`` (shape (..., 3)) has unit norm; return it as float array."""
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != 3:
        raise ValueError(f"{name} must have 3 components, got shape {v.shape}")
    norms = np.linalg.norm(v, axis=-1)
    if not np.all(np.abs(norms - 1.0) <= _VALIDATE_TOL):
        worst = float(np.max(np.abs(norms - 1.0)))
        raise ValueError(f"{name} is not unit-norm (max |norm-1| = {worst:.3e})")
    return v


def sample_uniform_sphere(rng, size: int | None = None) -> np.ndarray:
    """Draw directions uniform with respect to sin(theta) dtheta dphi / (4 pi).

    Uses the area-preserving map: z uniform on [-1, 1], azimuth uniform on
    [0, 2 pi).  Returns shape (3,) for ``size=None``, else (size, 3).
    """
    gen = as_generator(rng)
    z = gen.uniform(-1.0, 1.0, size=size)
    phi = gen.uniform(0.0, 2.0 * np.pi, size=size)
    s = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.stack([s * np.cos(phi), s * np.sin(phi), z], axis=-1)


def inverse_cdf_cos_tilt(u, n_copies: int):
    """Exact inverse CDF of the tilt-cosine law for ``n_copies`` parallel copies.

    The density is (N+1) ((1+x)/2)^N / 2 on [-1, 1] with CDF ((1+x)/2)^(N+1),
    so x = 2 u^(1/(N+1)) - 1.  ``u = 1`` maps to ``x = 1`` exactly.
    """
    if n_copies < 1:
        raise ValueError(f"n_copies must be >= 1, got {n_copies}")
    u = np.asarray(u, dtype=float)
    x = 2.0 * u ** (1.0 / (n_copies + 1)) - 1.0
    return x if x.ndim else float(x)


def sample_cos_tilt(rng, n_copies: int, size: int | None = None):
    """Sample the cosine of the tilt between estimate and encoded direction.

    For an ensemble of ``n_copies`` identical copies measured with the
    uniform-prior-optimal POVM the tilt cosine has density
    (N+1) ((1+x)/2)^N / 2; its mean is N/(N+2).  Sampling is by the exact
    inverse CDF with u uniform on (0, 1].
    """
    if n_copies < 1:
        raise ValueError(f"n_copies must be >= 1, got {n_copies}")
    gen = as_generator(rng)
    u = 1.0 - gen.random(size)  # gen.random is [0,1) -> u in (0,1]
    return inverse_cdf_cos_tilt(u, n_copies)


def rotate_towards(axis, cos_tilt, azimuth) -> np.ndarray:
    """Direction at prescribed tilt cosine from ``axis``.

    The result r satisfies r . axis = cos_tilt and |r| = 1 (both within
    1e-12).  ``azimuth`` fixes the position on the tilt cone in a
    deterministic right-handed frame built from the axis and the global
    x-hat (y-hat is substituted when the axis is within 1e-6 of +-x-hat).
    Only the tilt is physically meaningful for covariant chains; the frame
    is just a reproducible convention.

    Broadcasts: axis (..., 3), cos_tilt (...), azimuth (...).
    """
    a = require_unit(axis, "axis")
    x = np.asarray(cos_tilt, dtype=float)
    if np.any(np.abs(x) > 1.0 + UNIT_TOL):
        raise ValueError("cos_tilt must lie in [-1, 1]")
    x = np.clip(x, -1.0, 1.0)
    psi = np.asarray(azimuth, dtype=float)

    # Gram-Schmidt of the reference axis against a.
    near_x = np.abs(a[..., 0]) > 1.0 - 1e-6
    ref = np.where(near_x[..., None],
                   np.array([0.0, 1.0, 0.0]),
                   np.array([1.0, 0.0, 0.0]))
    e1 = ref - np.sum(ref * a, axis=-1, keepdims=True) * a
    e1 = e1 / np.linalg.norm(e1, axis=-1, keepdims=True)
    e2 = np.cross(a, e1)

    s = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    out = (x[..., None] * a
           + (s * np.cos(psi))[..., None] * e1
           + (s * np.sin(psi))[..., None] * e2)
    return out
