# isotower/calculus.py
"""
Standard functional calculus: scalar functions on spectra, polar data,
the injective-map chart kappa and the top-eigenspace constructions P_k, lambda_k.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import linalg as sla

from config.settings import settings
from isotower.errors import DomainError, InvalidInput, NotInjective
from isotower.linalg import (
    adjoint,
    as_matrix,
    check_hermitian,
    check_isometry,
    diag_in_frame,
    hermitian_eig,
    scale_of,
)

logger = logging.getLogger(__name__)

REALS = "reals"
NONNEGATIVE = "nonnegative-reals"
POSITIVE = "positive-reals"
COMPLEX = "complex"


@dataclass(frozen=True)
class ScalarFunction:
    """A scalar function together with the part of the line it is total on."""
    fn: Callable
    domain: str = REALS
    name: str = "f"

    def __call__(self, x):
        return self.fn(x)


EXP = ScalarFunction(np.exp, REALS, "exp")
LOG = ScalarFunction(np.log, POSITIVE, "log")
SQRT = ScalarFunction(np.sqrt, NONNEGATIVE, "sqrt")
RELU = ScalarFunction(lambda x: np.maximum(0.0, x), REALS, "relu")


@dataclass(frozen=True)
class PolarData:
    """gamma = sigma · rho with sigma isometric on sigma_domain = (Ker gamma)⊥."""
    rho: np.ndarray
    sigma_domain: np.ndarray
    sigma: np.ndarray

    @property
    def rank(self) -> int:
        return int(round(float(np.trace(self.sigma_domain).real)))


def _spectrum_in_domain(f: ScalarFunction, values: np.ndarray, scale: float) -> np.ndarray:
    slack = settings.TAU_GAP * scale
    if f.domain == NONNEGATIVE:
        if values.size and values.min() < -slack:
            raise DomainError(f"{f.name}: eigenvalue {values.min():.3e} is negative")
        return np.maximum(values, 0.0)
    if f.domain == POSITIVE:
        if values.size and values.min() <= 0.0:
            raise DomainError(f"{f.name}: eigenvalue {values.min():.3e} is not positive")
    return values


def apply_to_spectrum(f: ScalarFunction, alpha) -> np.ndarray:
    """
    f(alpha): same eigenvectors, eigenvalues e_j replaced by f(e_j).

    Real-valued f gives a Hermitian result; complex-valued f gives a normal one.
    """
    a = check_hermitian(alpha)
    eig = hermitian_eig(a)
    values = _spectrum_in_domain(f, eig.values, scale_of(a))
    with np.errstate(all="ignore"):
        mapped = np.asarray([f(x) for x in values])
    if mapped.size and not np.all(np.isfinite(mapped)):
        raise DomainError(f"{f.name} is not finite on the spectrum {values}")
    if np.iscomplexobj(mapped) and np.any(np.abs(np.imag(mapped)) > 0):
        return diag_in_frame(eig.vectors, mapped.astype(complex))
    result = diag_in_frame(eig.vectors, np.real(mapped).astype(float))
    return (result + adjoint(result)) / 2


def exp_h(alpha) -> np.ndarray:
    return apply_to_spectrum(EXP, alpha)


def log_h(alpha) -> np.ndarray:
    return apply_to_spectrum(LOG, alpha)


def _svd(gamma: np.ndarray):
    g = as_matrix(gamma)
    d1, d0 = g.shape
    if g.size == 0:
        return g, np.eye(d1, dtype=complex), np.zeros(d0), np.eye(d0, dtype=complex)
    u, s, vh = sla.svd(g, full_matrices=True)
    s_full = np.zeros(d0)
    s_full[: len(s)] = s
    return g, u, s_full, vh


def kernel_threshold(gamma: np.ndarray, threshold: Optional[float] = None) -> float:
    return settings.TAU_GAP * scale_of(gamma) if threshold is None else threshold


def rho(gamma) -> np.ndarray:
    """(γ†γ)^{1/2}"""
    _, _, s, vh = _svd(gamma)
    r = (adjoint(vh) * s) @ vh
    return (r + adjoint(r)) / 2


def sigma(gamma, threshold: Optional[float] = None) -> PolarData:
    """
    Polar data of gamma; sigma is isometric on the orthogonal complement of the kernel.

    Singular values at or below `threshold` count as kernel.  Without one the
    cutoff is tau_gap relative to gamma itself; tower points pass
    level_threshold(alpha, k) so the kernel agrees with P_k(alpha).
    """
    g, u, s, vh = _svd(gamma)
    r = int(np.sum(s > kernel_threshold(g, threshold)))
    rho_ = (adjoint(vh) * s) @ vh
    right = vh[:r]
    return PolarData(
        rho=(rho_ + adjoint(rho_)) / 2,
        sigma_domain=adjoint(right) @ right,
        sigma=u[:, :r] @ right,
    )


def is_injective(gamma, threshold: Optional[float] = None) -> bool:
    g = as_matrix(gamma)
    d1, d0 = g.shape
    if d0 == 0:
        return True
    if d1 < d0:
        return False
    _, _, s, _ = _svd(g)
    return bool(s.min() > kernel_threshold(g, threshold))


def kappa(alpha, theta) -> np.ndarray:
    """(α, θ) ↦ −θ·Exp(α)"""
    a = check_hermitian(alpha)
    t = check_isometry(theta)
    if t.shape[1] != a.shape[0]:
        raise InvalidInput(f"rank of theta ({t.shape[1]}) must equal dim alpha ({a.shape[0]})")
    return -t @ exp_h(a)


def kappa_inv(gamma) -> Tuple[np.ndarray, np.ndarray]:
    """γ ↦ (log ρ(γ), −σ(γ)); the collapsed basepoint surfaces as NotInjective."""
    if not is_injective(gamma):
        raise NotInjective("kappa_inv needs an injective map")
    polar = sigma(gamma)
    return log_h(polar.rho), -polar.sigma


def top_block_size(values: np.ndarray, k: int, gap_tol: float) -> int:
    """Largest m ≤ k such that the top m eigenvalues are separated from the rest."""
    d = len(values)
    if k >= d:
        return d
    for m in range(k, 0, -1):
        cut = d - m
        if values[cut] - values[cut - 1] > gap_tol:
            return m
    return 0


def gap_tolerance(alpha: np.ndarray) -> float:
    return settings.TAU_GAP * scale_of(alpha)


def level_threshold(alpha, k: int) -> float:
    """
    Kernel cutoff for sigma of a level-k beta.

    Below the top the smallest nonzero singular value of lambda_k(alpha) is an
    eigen-gap of alpha, already known to exceed gap_tolerance(alpha).  At the
    top Exp(alpha) is positive definite and nothing is cut.
    """
    a = np.asarray(alpha)
    if k >= a.shape[0]:
        return 0.0
    return gap_tolerance(a)


def P_k(alpha, k: int) -> np.ndarray:
    """Projector onto the largest sum of top eigenspaces of total dimension ≤ k."""
    a = check_hermitian(alpha)
    d = a.shape[0]
    if not 0 <= k <= d:
        raise InvalidInput(f"k={k} outside [0, {d}]")
    eig = hermitian_eig(a)
    m = top_block_size(eig.values, k, gap_tolerance(a))
    top = eig.vectors[:, d - m:]
    return top @ adjoint(top)


def eigenvalue(alpha, j: int) -> float:
    """e_j(alpha), counting from the bottom."""
    return float(hermitian_eig(alpha).values[j])


def lambda_k(alpha, k: int) -> np.ndarray:
    """max(0, α − e_{d₀−k−1}(α)), the PSD operator supported on P_k(α)."""
    a = check_hermitian(alpha)
    d = a.shape[0]
    if not 0 <= k < d:
        raise InvalidInput(f"lambda_k needs 0 ≤ k < {d}, got k={k}")
    eig = hermitian_eig(a)
    floor = eig.values[d - k - 1]
    lam = diag_in_frame(eig.vectors, np.maximum(0.0, eig.values - floor))
    return (lam + adjoint(lam)) / 2


def tower_weight(alpha, k: int) -> np.ndarray:
    """
    The operator beta is modelled on at level k: lambda_k(alpha) below the top,
    Exp(alpha) at k = dim alpha, where points are kept in kappa coordinates.
    """
    a = check_hermitian(alpha)
    if k == a.shape[0]:
        return exp_h(a)
    return lambda_k(a, k)


def spectral_norm_bound(alpha) -> float:
    """max(|e_0|, |e_top|) for Hermitian alpha."""
    values = hermitian_eig(alpha).values
    if values.size == 0:
        return 0.0
    return float(max(abs(values[0]), abs(values[-1])))
