# isotower/tower.py
"""
Points and maps of the tower of eigenspace-restricted isometries.

A level-k point is a pair (alpha, beta) with rho(beta) equal to the tower
weight of alpha (lambda_k(alpha) below the top, Exp(alpha) at the top level
d0).  The isometry theta of the point is -sigma(beta) on P_k(alpha).
Thom points are triples (W, gamma, psi): a trace-k projector W, a map gamma
vanishing on W⊥ and a Hermitian psi supported on W⊥.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from config.settings import settings
from isotower.calculus import (
    P_k,
    exp_h,
    gap_tolerance,
    is_injective,
    lambda_k,
    level_threshold,
    log_h,
    rho,
    sigma,
    top_block_size,
    tower_weight,
)
from isotower.errors import DegenerateAlpha, FacialViolation, InvalidInput, NotInjective
from isotower.facial import BASEPOINT, THOM, FacialMapSpec, is_inf, singular_frames
from isotower.linalg import (
    adjoint,
    as_matrix,
    check_hermitian,
    check_projector,
    complement_frame,
    deviation,
    diag_in_frame,
    frame_of_projector,
    gram_schmidt_complete,
    hermitian_eig,
    is_isometry,
    matrix_from_json,
    matrix_to_json,
    numerical_rank,
    projector_rank,
    restrict,
    scale_of,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TowerPoint:
    """A level-k point (alpha, beta) with rho(beta) = tower_weight(alpha, k)."""
    k: int
    alpha: np.ndarray
    beta: np.ndarray

    @property
    def d0(self) -> int:
        return self.alpha.shape[0]

    @property
    def d1(self) -> int:
        return self.beta.shape[0]

    def polar(self):
        """Polar data of beta with the kernel cut at level_threshold(alpha, k)."""
        return sigma(self.beta, level_threshold(self.alpha, self.k))

    def theta(self) -> np.ndarray:
        """
        The isometry -sigma(beta) on P_k(alpha), as a d1×d0 matrix vanishing on
        the complement; directions of P_k where beta vanishes are completed
        by Gram-Schmidt against the standard basis.
        """
        polar = self.polar()
        top = P_k(self.alpha, self.k)
        missing = frame_of_projector(top - top @ polar.sigma_domain @ top)
        theta = -polar.sigma
        if missing.shape[1]:
            image = theta @ frame_of_projector(polar.sigma_domain)
            extra = gram_schmidt_complete(image, missing.shape[1], ambient=self.d1)
            theta = theta + extra @ adjoint(missing)
        return theta

    def invariant_deviation(self) -> float:
        return deviation(rho(self.beta), tower_weight(self.alpha, self.k)) / scale_of(self.alpha, self.beta)

    def conjugate(self, u0: np.ndarray, u1: np.ndarray) -> "TowerPoint":
        """(u0·α·u0†, u1·β·u0†)"""
        return TowerPoint(self.k, u0 @ self.alpha @ adjoint(u0), u1 @ self.beta @ adjoint(u0))

    def to_dict(self) -> Dict:
        return {"k": self.k, "alpha": matrix_to_json(self.alpha), "beta": matrix_to_json(self.beta)}

    @classmethod
    def from_dict(cls, obj: Dict) -> "TowerPoint":
        return cls(int(obj["k"]), check_hermitian(matrix_from_json(obj["alpha"])), matrix_from_json(obj["beta"]))


@dataclass(frozen=True)
class ThomPoint:
    """(W, gamma, psi) over the Grassmannian of k-planes."""
    k: int
    W: np.ndarray
    gamma: np.ndarray
    psi: np.ndarray

    @property
    def d0(self) -> int:
        return self.W.shape[0]

    @property
    def d1(self) -> int:
        return self.gamma.shape[0]

    def frames(self) -> Tuple[np.ndarray, np.ndarray]:
        """Orthonormal frames of range W and range (1 − W)."""
        return frame_of_projector(self.W), complement_frame(self.W)

    def conjugate(self, u0: np.ndarray, u1: np.ndarray) -> "ThomPoint":
        return ThomPoint(self.k, u0 @ self.W @ adjoint(u0), u1 @ self.gamma @ adjoint(u0), u0 @ self.psi @ adjoint(u0))

    def to_dict(self) -> Dict:
        return {
            "k": self.k,
            "W": matrix_to_json(self.W),
            "gamma": matrix_to_json(self.gamma),
            "psi": matrix_to_json(self.psi),
        }

    @classmethod
    def from_dict(cls, obj: Dict) -> "ThomPoint":
        return make_thom_point(matrix_from_json(obj["W"]), matrix_from_json(obj["gamma"]), matrix_from_json(obj["psi"]))


@dataclass(frozen=True)
class DeltaValue:
    """A point t ∧ z of the suspended Thom space; `twisted` records the −Σ orientation."""
    t: float
    thom: ThomPoint
    twisted: bool = True


def make_thom_point(W, gamma, psi) -> ThomPoint:
    w = check_projector(W)
    g = as_matrix(gamma)
    p = check_hermitian(psi)
    d0 = w.shape[0]
    if g.shape[1] != d0 or p.shape[0] != d0:
        raise InvalidInput("W, gamma and psi must share the source dimension")
    complement = np.eye(d0) - w
    tol = settings.TOL_EQ
    if deviation(g @ complement, 0 * g) > tol * scale_of(g):
        raise InvalidInput("gamma must vanish on the complement of W")
    if deviation(p @ w, 0 * p) > tol * scale_of(p):
        raise InvalidInput("psi must vanish on W")
    return ThomPoint(projector_rank(w), w, g, p)


def _top_split(alpha: np.ndarray, k: int):
    """Eigensystem of alpha with the frames of P_k(alpha) and its complement; raises in Y_k."""
    eig = hermitian_eig(alpha)
    d0 = len(eig.values)
    if top_block_size(eig.values, k, gap_tolerance(alpha)) < k:
        raise DegenerateAlpha(f"top {k}-eigenspace of alpha is not separated")
    return eig, eig.vectors[:, d0 - k:], eig.vectors[:, : d0 - k]


def make_tower_point(k: int, alpha, theta) -> TowerPoint:
    """
    (α, θ) ↦ (α, −θ·weight) for θ (d1×d0) isometric on P_k(α).

    At k = d0 the weight is Exp(α), not lambda_k(α), so α = 0 gives β = −θ
    rather than 0.  The top level is kept in kappa coordinates so that the
    level-d0 points are exactly the injective maps.
    """
    a = check_hermitian(alpha)
    t = as_matrix(theta)
    d0 = a.shape[0]
    if not 0 <= k <= d0:
        raise InvalidInput(f"level {k} outside [0, {d0}]")
    if t.shape[1] != d0 or t.shape[0] < d0:
        raise InvalidInput(f"theta must be d1×{d0} with d1 ≥ {d0}, got {t.shape}")
    _, top, _ = _top_split(a, k)
    if not is_isometry(t @ top):
        raise InvalidInput("theta is not isometric on P_k(alpha)")
    return TowerPoint(k, a, -t @ tower_weight(a, k))


def point_deviation(x: TowerPoint, y: TowerPoint) -> float:
    if x.k != y.k:
        return float("inf")
    return max(deviation(x.alpha, y.alpha) / scale_of(x.alpha, y.alpha),
               deviation(x.beta, y.beta) / scale_of(x.beta, y.beta))


def thom_deviation(z: ThomPoint, y: ThomPoint) -> float:
    if z.k != y.k:
        return float("inf")
    return max(deviation(z.W, y.W),
               deviation(z.gamma, y.gamma) / scale_of(z.gamma, y.gamma),
               deviation(z.psi, y.psi) / scale_of(z.psi, y.psi))


def pi_k(x: TowerPoint) -> TowerPoint:
    """Restrict the isometry to P_{k−1}(alpha): beta′ = sigma(beta)·lambda_{k−1}(alpha)."""
    if x.k < 1:
        raise InvalidInput("pi_k needs a point of level ≥ 1")
    return TowerPoint(x.k - 1, x.alpha, x.polar().sigma @ lambda_k(x.alpha, x.k - 1))


def project_to_level(x: TowerPoint, level: int) -> TowerPoint:
    while x.k > level:
        x = pi_k(x)
    return x


def in_Y_k(alpha, k: int) -> bool:
    """True iff dim P_k(alpha) < k."""
    a = check_hermitian(alpha)
    if not 1 <= k <= a.shape[0]:
        raise InvalidInput(f"Y_k is defined for 1 ≤ k ≤ {a.shape[0]}, got {k}")
    return projector_rank(P_k(a, k)) < k


def _psi_below(eig, k: int) -> np.ndarray:
    """−log(e_{d₀−k} − α) on the complement of the top k-eigenspace."""
    d0 = len(eig.values)
    low = eig.vectors[:, : d0 - k]
    return diag_in_frame(low, -np.log(eig.values[d0 - k] - eig.values[: d0 - k]))


def q_k(x: TowerPoint) -> ThomPoint:
    """Level-k point off Y_k ↦ (P_k(α), −θ·Exp(α)|_{P_k}, −log(e_{d₀−k}(α) − α)|_{P_k⊥})."""
    k = x.k
    eig, top, _ = _top_split(x.alpha, k)
    w = top @ adjoint(top)
    gamma = x.polar().sigma @ exp_h(x.alpha) @ w
    psi = _psi_below(eig, k) if k < x.d0 else np.zeros_like(w)
    return ThomPoint(k, w, gamma, psi)


def r_k(z: ThomPoint) -> TowerPoint:
    """Inverse of q_k on Thom points whose gamma is injective on W."""
    wf, qf = z.frames()
    gw = z.gamma @ wf
    if not is_injective(gw):
        raise NotInjective("gamma is not injective on W")
    rho_w = rho(gw)
    e0 = float(hermitian_eig(rho_w).values[0])
    alpha = wf @ log_h(rho_w) @ adjoint(wf)
    if qf.shape[1]:
        block = np.log(e0) * np.eye(qf.shape[1]) - exp_h(-restrict(z.psi, qf))
        alpha = alpha + qf @ block @ adjoint(qf)
    alpha = (alpha + adjoint(alpha)) / 2
    return TowerPoint(z.k, alpha, sigma(z.gamma).sigma @ tower_weight(alpha, z.k))


def tau(x: TowerPoint) -> Tuple[float, np.ndarray]:
    """Level d₀−1 point ↦ (e₀(α), −θ·(α − e₀(α))), which is (e₀(α), β)."""
    if x.k != x.d0 - 1:
        raise InvalidInput(f"tau needs level {x.d0 - 1}, got {x.k}")
    return float(hermitian_eig(x.alpha).values[0]), x.beta.copy()


def tau_inv(t: float, delta) -> TowerPoint:
    """(t, δ) ↦ (ρ(δ) + t, δ) for non-injective δ."""
    d = as_matrix(delta)
    if is_injective(d):
        raise InvalidInput("tau_inv needs a non-injective map")
    alpha = rho(d) + t * np.eye(d.shape[1])
    return TowerPoint(d.shape[1] - 1, alpha, d.copy())


def f_k(x: TowerPoint, k: Optional[int] = None) -> Tuple[float, ThomPoint]:
    """Level k−1 point off Y_k ↦ (e_{d₀−k}(α), P_k(α), −θ·λ_{k−1}(α)|_{P_k}, −log(e_{d₀−k}(α) − α)|_{P_k⊥})."""
    k = x.k + 1 if k is None else k
    if x.k != k - 1:
        raise InvalidInput(f"f_k with k={k} needs a level {k - 1} point, got level {x.k}")
    eig, top, _ = _top_split(x.alpha, k)
    w = top @ adjoint(top)
    t = float(eig.values[x.d0 - k])
    psi = _psi_below(eig, k) if k < x.d0 else np.zeros_like(w)
    return t, ThomPoint(k, w, x.beta @ w, psi)


def g_k(t: float, z: ThomPoint) -> TowerPoint:
    """(t, W, δ, ψ) ↦ ((t − Exp(−ψ))|_{W⊥} ⊕ (ρ(δ) + t)|_W, δ) at level k−1."""
    wf, qf = z.frames()
    gw = z.gamma @ wf
    if z.k and is_injective(gw):
        raise InvalidInput("g_k needs gamma non-injective on W")
    alpha = wf @ (rho(gw) + t * np.eye(z.k)) @ adjoint(wf)
    if qf.shape[1]:
        alpha = alpha + qf @ (t * np.eye(qf.shape[1]) - exp_h(-restrict(z.psi, qf))) @ adjoint(qf)
    return TowerPoint(z.k - 1, (alpha + adjoint(alpha)) / 2, z.gamma.copy())


def chi(gamma) -> Tuple[float, np.ndarray]:
    """γ ↦ (e₀(log ρ(γ)), σ(γ)·(log ρ(γ) − e₀(log ρ(γ))))."""
    g = as_matrix(gamma)
    if not is_injective(g):
        raise NotInjective("chi needs an injective map")
    polar = sigma(g)
    log_rho = log_h(polar.rho)
    e0 = float(hermitian_eig(log_rho).values[0])
    return e0, polar.sigma @ (log_rho - e0 * np.eye(g.shape[1]))


def phi_k_map(z: ThomPoint):
    """
    (W, γ, ψ) ↦ (ψ|_{W⊥} ⊕ (ρ(γ) + e_top(ψ))|_W, −σ(γ)) at level k.

    At the top level the Thom space is the one-point compactification of
    Hom(V₀, V₁) and the map is the inclusion of injective maps, so
    non-injective gamma goes to BASEPOINT.
    """
    if z.k == z.d0:
        if not is_injective(z.gamma):
            return BASEPOINT
        return TowerPoint(z.k, log_h(rho(z.gamma)), z.gamma.copy())
    wf, qf = z.frames()
    psi_block = restrict(z.psi, qf)
    top = float(hermitian_eig(psi_block).values[-1])
    alpha = z.psi + wf @ (rho(z.gamma @ wf) + top * np.eye(z.k)) @ adjoint(wf)
    return TowerPoint(z.k, (alpha + adjoint(alpha)) / 2, z.gamma.copy())


def include_fibrewise(t: float, z: ThomPoint, twisted: bool = True) -> DeltaValue:
    return DeltaValue(t, z, twisted)


def delta_k_map(x: TowerPoint, k: Optional[int] = None):
    """BASEPOINT on Y_k, otherwise f_k followed by the fibrewise inclusion with the −Σ twist."""
    k = x.k + 1 if k is None else k
    if in_Y_k(x.alpha, k):
        return BASEPOINT
    t, z = f_k(x, k)
    return include_fibrewise(t, z, twisted=True)


def frak_C(g: FacialMapSpec, z: ThomPoint):
    """
    Apply a facial map on D(d₀−k) ∧ D₊(k) to the eigenvalues of psi on W⊥ and
    the singular values of gamma on W, keeping the eigenvectors and singular
    frames.  Returns a level-k TowerPoint or BASEPOINT.
    """
    if g.variant != THOM or g.split != z.k or g.d_in != z.d0:
        raise InvalidInput(f"{g.name} does not act on D({z.d0 - z.k}) ∧ D₊({z.k})")
    wf, qf = z.frames()
    psi_eig = hermitian_eig(restrict(z.psi, qf)) if qf.shape[1] else None
    s = psi_eig.values if psi_eig is not None else np.zeros(0)
    low = qf @ psi_eig.vectors if psi_eig is not None else qf
    t, v, m = singular_frames(z.gamma @ wf)
    out, _ = g.evaluate(np.concatenate([s, t]))
    if is_inf(out):
        return BASEPOINT
    scale = max(1.0, float(np.max(np.abs(out), initial=0.0)))
    if len(out) != z.d0 or np.any(np.diff(out) < -settings.TOL_EQ * scale):
        raise FacialViolation(f"{g.name}: output {np.asarray(out).tolist()} is not ascending")
    high = wf @ v
    basis = np.concatenate([low, high], axis=1)
    alpha = diag_in_frame(basis, out)
    alpha = (alpha + adjoint(alpha)) / 2
    theta = -m @ adjoint(high)
    return TowerPoint(z.k, alpha, -theta @ tower_weight(alpha, z.k))


def p_map(lam, mu, s, t, k: int) -> ThomPoint:
    """(λ, μ, s, t) ↦ (span λ_W, −μ·Δ(t)·λ_W†, λ_⊥·Δ(s)·λ_⊥†) with λ_W the last k columns."""
    lam = as_matrix(lam)
    mu = as_matrix(mu)
    d0 = lam.shape[0]
    high, low = lam[:, d0 - k:], lam[:, : d0 - k]
    gamma = -(mu * np.asarray(t, dtype=float)) @ adjoint(high)
    psi = diag_in_frame(low, np.asarray(s, dtype=float))
    return ThomPoint(k, high @ adjoint(high), gamma, (psi + adjoint(psi)) / 2)


def q_map(lam, mu, tprime, k: int) -> TowerPoint:
    """(λ, μ, t′) ↦ (λ·Δ(t′)·λ†, isometry μ·λ_W⁻¹ on the top k-eigenspace)."""
    lam = as_matrix(lam)
    mu = as_matrix(mu)
    d0 = lam.shape[0]
    alpha = diag_in_frame(lam, np.asarray(tprime, dtype=float))
    alpha = (alpha + adjoint(alpha)) / 2
    theta = mu @ adjoint(lam[:, d0 - k:])
    return TowerPoint(k, alpha, -theta @ tower_weight(alpha, k))


def top_point(alpha, theta) -> TowerPoint:
    """
    Level-d₀ point in kappa coordinates: beta = −θ·Exp(α).

    beta is never 0 here; α = 0 gives beta = −θ (see make_tower_point).
    """
    a = check_hermitian(alpha)
    return make_tower_point(a.shape[0], a, theta)


def level_rank(x: TowerPoint) -> int:
    return numerical_rank(x.beta) if x.beta.size else 0
