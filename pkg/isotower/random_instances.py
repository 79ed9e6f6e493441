# isotower/random_instances.py
"""
Seeded generators for the random trials: Hermitian operators, Haar
isometries, tower and Thom points, and representations.
"""

import hashlib
import logging
from typing import Optional, Union

import numpy as np

from config.settings import settings
from isotower.errors import InvalidInput
from isotower.ktheory import GroupSpec, Representation
from isotower.linalg import (
    adjoint,
    check_projector,
    complement_frame,
    diag_in_frame,
    gram_schmidt_complete,
    projector_rank,
)
from isotower.miller import FiltrationPoint, inclusion
from isotower.tower import ThomPoint, TowerPoint, make_tower_point

logger = logging.getLogger(__name__)

Seed = Union[int, np.random.Generator]


def seed_for(master: int, check_id: str) -> int:
    """Stable 64-bit seed for one check, independent of PYTHONHASHSEED."""
    digest = hashlib.blake2b(f"{master}:{check_id}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def rng_for(master: int, check_id: str) -> np.random.Generator:
    return np.random.default_rng(seed_for(master, check_id))


def _rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def complex_gaussian(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_hermitian(d: int, seed: Seed) -> np.ndarray:
    """(A + A†)/2 for A with independent standard complex Gaussian entries."""
    if d < 1:
        raise InvalidInput("dimension must be ≥ 1")
    a = complex_gaussian(_rng(seed), d, d)
    return (a + adjoint(a)) / 2


def haar_isometry(d1: int, d0: int, seed: Seed) -> np.ndarray:
    """Haar-distributed d1×d0 isometry: QR of a Gaussian matrix with R's diagonal made positive."""
    if d1 < d0:
        raise InvalidInput(f"no isometry from dimension {d0} into {d1}")
    if d0 == 0:
        return np.zeros((d1, 0), dtype=complex)
    q, r = np.linalg.qr(complex_gaussian(_rng(seed), d1, d0))
    diag = np.diag(r)
    phases = np.where(np.abs(diag) > 0, diag / np.abs(diag), 1.0)
    return q * phases


def haar_unitary(d: int, seed: Seed) -> np.ndarray:
    return haar_isometry(d, d, seed)


def hermitian_with_spectrum(values, seed: Seed) -> np.ndarray:
    a = diag_in_frame(haar_unitary(len(values), seed), np.asarray(values, dtype=float))
    return (a + adjoint(a)) / 2


def gapped_spectrum(d: int, k: int, gap: float, rng: np.random.Generator) -> np.ndarray:
    """Sorted Gaussian eigenvalues with the cut below the top k moved to exactly `gap`."""
    values = np.sort(rng.standard_normal(d) * 2.0)
    if 0 < k < d:
        values[d - k:] += values[d - k - 1] + gap - values[d - k]
    return values


def near_degenerate_hermitian(d: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian operator whose top-k gap is 10·τ_gap·scale."""
    values = gapped_spectrum(d, k, 0.0, rng)
    scale = max(1.0, float(np.max(np.abs(values))) + 1.0)
    if 0 < k < d:
        values[d - k:] += 10.0 * settings.TAU_GAP * scale
    return hermitian_with_spectrum(values, rng)


def random_tower_point(d0: int, d1: int, k: int, seed: Seed, near_degenerate: bool = False) -> TowerPoint:
    rng = _rng(seed)
    if near_degenerate:
        alpha = near_degenerate_hermitian(d0, k, rng)
    else:
        alpha = hermitian_with_spectrum(gapped_spectrum(d0, k, rng.uniform(0.2, 2.0), rng), rng)
    return make_tower_point(k, alpha, haar_isometry(d1, d0, rng))


def random_thom_point(d0: int, d1: int, k: int, seed: Seed, injective: bool = True) -> ThomPoint:
    """
    A Thom point over a Haar-random k-plane.  Injective points have singular
    values bounded away from 0; otherwise gamma loses one direction of W.
    """
    if not 0 <= k <= d0 <= d1:
        raise InvalidInput(f"need 0 ≤ k ≤ d0 ≤ d1, got k={k}, d0={d0}, d1={d1}")
    rng = _rng(seed)
    frame = haar_unitary(d0, rng)
    wf, qf = frame[:, d0 - k:], frame[:, : d0 - k]
    t = np.sort(rng.uniform(0.3, 3.0, size=k))
    if not injective and k:
        t[0] = 0.0
    gamma = (haar_isometry(d1, k, rng) * t) @ adjoint(wf)
    psi = diag_in_frame(qf, rng.standard_normal(d0 - k))
    return ThomPoint(k, wf @ adjoint(wf), gamma, (psi + adjoint(psi)) / 2)


def random_injective(d1: int, d0: int, seed: Seed) -> np.ndarray:
    rng = _rng(seed)
    t = rng.uniform(0.3, 3.0, size=d0)
    return (haar_isometry(d1, d0, rng) * t) @ adjoint(haar_unitary(d0, rng))


def random_representation(group: GroupSpec, dim: int, seed: Seed) -> Representation:
    rng = _rng(seed)
    chars = group.characters()
    picks = rng.integers(0, len(chars), size=dim)
    return Representation.of(group, [chars[i] for i in picks])


def random_filtration_point(d0: int, d1: int, k: int, seed: Seed, W: Optional[np.ndarray] = None) -> FiltrationPoint:
    """
    φ = u₁·J with u₁ a unitary of V₁ fixing J(range(1 − W)) pointwise, so
    rank(φ − J) ≤ k.  W defaults to a Haar-random rank-k projector.
    """
    rng = _rng(seed)
    j = inclusion(d1, d0)
    if W is None:
        if not 0 <= k <= d0:
            raise InvalidInput(f"need 0 ≤ k ≤ {d0}, got {k}")
        fixed = haar_unitary(d0, rng)[:, : d0 - k]
    else:
        w = check_projector(W)
        k = projector_rank(w)
        fixed = complement_frame(w)
    fixed = j @ fixed
    moving = gram_schmidt_complete(fixed, d1 - d0 + k, ambient=d1)
    u1 = fixed @ adjoint(fixed) + moving @ haar_unitary(d1 - d0 + k, rng) @ adjoint(moving)
    return FiltrationPoint(u1 @ j)
