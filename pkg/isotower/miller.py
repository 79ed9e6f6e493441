# isotower/miller.py
"""
Matrix-level pieces of the stable splitting of isometry spaces.

V₀ sits in V₁ as the first d₀ coordinates (the inclusion J).  An isometry
φ: V₀ → V₁ has filtration level rank(φ − J).  This module has the
reparameterization of the filtration quotients over the Grassmannian, the
Cayley transform, the restriction res_k to the tower with its inverse on a
dense chart, the g₀/g₁ homotopy and a finite-difference check that the top
embedding has the identity as derivative at the origin.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from config.settings import settings
from isotower.calculus import P_k, exp_h, rho
from isotower.errors import InvalidInput, NotInjective, OutsideChart
from isotower.grassmann import split_hom_self
from isotower.linalg import (
    adjoint,
    as_matrix,
    check_hermitian,
    check_projector,
    complement_frame,
    deviation,
    frame_of_projector,
    hermitian_eig,
    is_isometry,
    numerical_rank,
    projector_rank,
    scale_of,
)
from isotower.report import FAIL, PASS, CheckRecord, Report, new_report
from isotower.tower import ThomPoint, TowerPoint, make_tower_point

logger = logging.getLogger(__name__)


def inclusion(d1: int, d0: int) -> np.ndarray:
    if d1 < d0:
        raise InvalidInput(f"V₀ of dimension {d0} does not fit in V₁ of dimension {d1}")
    return np.eye(d1, d0, dtype=complex)


@dataclass(frozen=True)
class FiltrationPoint:
    """An isometry φ: V₀ → V₁, filtered by rank(φ − J)."""
    phi: np.ndarray

    @property
    def d0(self) -> int:
        return self.phi.shape[1]

    @property
    def d1(self) -> int:
        return self.phi.shape[0]

    @property
    def J(self) -> np.ndarray:
        return inclusion(self.d1, self.d0)

    def conjugate(self, u0: np.ndarray, u1: np.ndarray) -> "FiltrationPoint":
        return FiltrationPoint(u1 @ self.phi @ adjoint(u0))


def make_filtration_point(phi) -> FiltrationPoint:
    p = as_matrix(phi)
    if p.shape[0] < p.shape[1] or not is_isometry(p):
        raise InvalidInput(f"phi of shape {p.shape} is not an isometry")
    return FiltrationPoint(p)


def filtration_level(p: FiltrationPoint) -> int:
    return numerical_rank(p.phi - p.J, settings.TAU_GAP)


def gamma_diffeo(W, psi_iso) -> np.ndarray:
    """(W, ψ) ↦ ψ − J(1 − W) for ψ agreeing with J on range(1 − W)."""
    w = check_projector(W)
    p = as_matrix(psi_iso)
    if p.shape[1] != w.shape[0]:
        raise InvalidInput("psi and W act on different spaces")
    shift = inclusion(p.shape[0], p.shape[1]) @ (np.eye(w.shape[0]) - w)
    if deviation(p @ (np.eye(w.shape[0]) - w), shift) > settings.TOL_EQ * scale_of(p):
        raise InvalidInput("psi does not agree with the inclusion on the complement of W")
    return p - shift


def gamma_diffeo_inv(W, delta) -> np.ndarray:
    w = check_projector(W)
    d = as_matrix(delta)
    return d + inclusion(d.shape[0], d.shape[1]) @ (np.eye(w.shape[0]) - w)


def gamma_section(W, d1: Optional[int] = None) -> FiltrationPoint:
    """The point −J|_W ⊕ J|_{W⊥}, of filtration level rank W."""
    w = check_projector(W)
    d0 = w.shape[0]
    j = inclusion(d1 or d0, d0)
    return FiltrationPoint(j @ (np.eye(d0) - 2 * w))


def cayley(delta) -> np.ndarray:
    """δ ↦ (−iδ/2 − 1)(−iδ/2 + 1)⁻¹, a unitary for Hermitian δ."""
    d = check_hermitian(delta)
    a = -0.5j * d
    one = np.eye(d.shape[0])
    return np.linalg.solve((a + one).T, (a - one).T).T


def cayley_inv(phi) -> np.ndarray:
    """φ ↦ (2/i)(φ + 1)(φ − 1)⁻¹ away from the eigenvalue 1."""
    p = as_matrix(phi)
    if p.shape[0] != p.shape[1]:
        raise InvalidInput("cayley_inv needs a square unitary")
    one = np.eye(p.shape[0])
    if np.linalg.svd(p - one, compute_uv=False).min() <= settings.TAU_GAP:
        raise OutsideChart("phi has eigenvalue 1")
    out = -2j * np.linalg.solve((p - one).T, (p + one).T).T
    return (out + adjoint(out)) / 2


def res_k_map(alpha, p: FiltrationPoint, k: int) -> TowerPoint:
    """(α, φ) ↦ (α, φ restricted to P_k(α)) for φ of filtration level ≤ k."""
    if filtration_level(p) > k:
        raise InvalidInput(f"phi has filtration level {filtration_level(p)} > {k}")
    return make_tower_point(k, alpha, p.phi)


def _chart_blocks(alpha, theta: np.ndarray, k: int):
    a = check_hermitian(alpha)
    d0 = a.shape[0]
    d1 = theta.shape[0]
    top = P_k(a, k)
    if projector_rank(top) != k:
        raise OutsideChart(f"P_{k}(alpha) has rank {projector_rank(top)}")
    pf = frame_of_projector(top)
    qf = complement_frame(top)
    j = inclusion(d1, d0)
    theta1 = adjoint(pf) @ adjoint(j) @ theta @ pf
    theta2 = adjoint(qf) @ adjoint(j) @ theta @ pf
    return top, pf, qf, j, theta1, theta2


def _invertible(m: np.ndarray) -> bool:
    return m.size == 0 or np.linalg.svd(m, compute_uv=False).min() > settings.TAU_GAP


def in_chart_A(alpha, p: FiltrationPoint, k: int) -> bool:
    """φ₁₁ − I invertible, with φ₁₁ the block of J†φ on P_k(α)."""
    try:
        _, _, _, _, phi11, _ = _chart_blocks(alpha, p.phi, k)
    except OutsideChart:
        return False
    return _invertible(phi11 - np.eye(k))


def in_chart_B(x: TowerPoint) -> bool:
    try:
        _, _, _, _, theta1, _ = _chart_blocks(x.alpha, x.theta(), x.k)
    except OutsideChart:
        return False
    return _invertible(theta1 - np.eye(x.k))


def res_k_inverse_on_B(x: TowerPoint) -> FiltrationPoint:
    """
    Extend θ on P_k(α) to an isometry φ with rank(φ − J) ≤ k:

        ξ = (θ₁† − I)⁻¹ θ₂†
        φ = θ·W + (θ − J)·P ξ Q† + J·(1 − W)

    where P, Q are frames of W = P_k(α) and its complement and θ₁, θ₂ are
    the blocks of J†θ from range W into range W and range(1 − W).
    """
    theta = x.theta()
    top, pf, qf, j, theta1, theta2 = _chart_blocks(x.alpha, theta, x.k)
    if not _invertible(theta1 - np.eye(x.k)):
        raise OutsideChart("θ₁ − I is singular")
    xi = np.linalg.solve(adjoint(theta1) - np.eye(x.k), adjoint(theta2))
    phi = theta @ top + (theta @ pf - j @ pf) @ xi @ adjoint(qf) + j @ (np.eye(x.d0) - top)
    return FiltrationPoint(phi)


# The g₀ / g₁ homotopy


def split_gamma(z: ThomPoint) -> Tuple[np.ndarray, np.ndarray]:
    """γ = α_h + β_h with α_h = J(1 − W)J†γ the part landing in J(W⊥)."""
    j = inclusion(z.d1, z.d0)
    alpha_h = j @ (np.eye(z.d0) - z.W) @ adjoint(j) @ z.gamma
    return alpha_h, z.gamma - alpha_h


def interpolated_log(x: np.ndarray, t: float) -> np.ndarray:
    """∫₁ˣ u^{t−1} du = (x^t − 1)/t, log x at t = 0."""
    x = np.asarray(x, dtype=float)
    if t == 0.0:
        if np.any(x <= 0.0):
            raise InvalidInput("log needs positive arguments")
        return np.log(x)
    with np.errstate(divide="ignore"):
        logs = np.log(np.maximum(x, 0.0))
    return np.expm1(t * logs) / t


def _top_of(psi: np.ndarray, qf: np.ndarray) -> float:
    if not qf.shape[1]:
        return 0.0
    return float(hermitian_eig(adjoint(qf) @ psi @ qf).values[-1])


def _w_block(m: np.ndarray, wf: np.ndarray, t: float) -> np.ndarray:
    eig = hermitian_eig(rho(m @ wf))
    return (eig.vectors * interpolated_log(np.maximum(eig.values, 0.0), t)) @ adjoint(eig.vectors)


def g0_g1_homotopy(t: float, z: ThomPoint) -> np.ndarray:
    """
    Hermitian operator on V₀ joining g₀ (t = 0) to g₁ (t = 1):
    W-block f(ρ(tα_h + β_h)|_W, t) + t(e_top(ψ) + 1), off-diagonal (1 − t)·α_h,
    W⊥-block ψ.
    """
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise InvalidInput(f"time {t} outside [0, 1]")
    wf, qf = z.frames()
    alpha_h, beta_h = split_gamma(z)
    low = float(hermitian_eig(rho(beta_h @ wf)).values[0]) if z.k else 1.0
    if not t + low > 0.0:
        raise InvalidInput("the homotopy needs t + e₀(ρ(β_h)) > 0")
    j = inclusion(z.d1, z.d0)
    off = adjoint(j) @ alpha_h
    block = wf @ _w_block(t * alpha_h + beta_h, wf, t) @ adjoint(wf)
    out = block + t * (_top_of(z.psi, qf) + 1.0) * z.W + (1.0 - t) * (off + adjoint(off)) + z.psi
    return (out + adjoint(out)) / 2


def g0_map(z: ThomPoint) -> np.ndarray:
    """[[log ρ(β_h), α_h†], [α_h, ψ]] in the splitting range W ⊕ range(1 − W)."""
    wf, _ = z.frames()
    alpha_h, beta_h = split_gamma(z)
    if z.k and hermitian_eig(rho(beta_h @ wf)).values[0] <= settings.TAU_GAP * scale_of(beta_h):
        raise NotInjective("β_h is not injective on W")
    off = adjoint(inclusion(z.d1, z.d0)) @ alpha_h
    out = wf @ _w_block(beta_h, wf, 0.0) @ adjoint(wf) + off + adjoint(off) + z.psi
    return (out + adjoint(out)) / 2


def g1_map(z: ThomPoint) -> np.ndarray:
    """(ρ(γ) + e_top(ψ))|_W ⊕ ψ|_{W⊥}"""
    wf, qf = z.frames()
    out = wf @ (rho(z.gamma @ wf) + _top_of(z.psi, qf) * np.eye(z.k)) @ adjoint(wf) + z.psi
    return (out + adjoint(out)) / 2


# Derivative of the top embedding


def hermitian_basis(d: int) -> List[np.ndarray]:
    """A Frobenius-orthonormal real basis of the d×d Hermitian matrices."""
    basis = []
    for i in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[i, i] = 1.0
        basis.append(e)
    for i in range(d):
        for j in range(i + 1, d):
            sym = np.zeros((d, d), dtype=complex)
            sym[i, j] = sym[j, i] = 1.0 / np.sqrt(2.0)
            skew = np.zeros((d, d), dtype=complex)
            skew[i, j], skew[j, i] = -1j / np.sqrt(2.0), 1j / np.sqrt(2.0)
            basis += [sym, skew]
    return basis


def top_embedding(delta, alpha) -> np.ndarray:
    """(δ, α) ↦ −Cayley(δ)·Exp(α)"""
    return -cayley(delta) @ exp_h(alpha)


def _chart_coordinates(e: np.ndarray, basis: List[np.ndarray]) -> np.ndarray:
    # δ is read off the skew part of E − I and α off the Hermitian part
    real, imag = split_hom_self(e - np.eye(e.shape[0]))
    coords = [np.trace(b @ imag).real for b in basis] + [np.trace(b @ real).real for b in basis]
    return np.array(coords)


def embedding_jacobian(d: int, h: float) -> np.ndarray:
    """Central-difference Jacobian at (0, 0) in the (δ, α) Hermitian coordinates."""
    basis = hermitian_basis(d)
    n = len(basis)
    zero = np.zeros((d, d), dtype=complex)
    columns = []
    for i in range(2 * n):
        direction = basis[i % n]
        if i < n:
            plus, minus = top_embedding(h * direction, zero), top_embedding(-h * direction, zero)
        else:
            plus, minus = top_embedding(zero, h * direction), top_embedding(zero, -h * direction)
        columns.append((_chart_coordinates(plus, basis) - _chart_coordinates(minus, basis)) / (2 * h))
    return np.column_stack(columns)


def derivative_deviation(d: int, h: float) -> float:
    jac = embedding_jacobian(d, h)
    return float(np.max(np.abs(jac - np.eye(jac.shape[0]))))


def top_splitting_derivative_check(h: float, d0: int = 2) -> Report:
    """The top embedding's derivative at the origin against the identity, within 10·h."""
    if not 1e-6 <= h <= 1e-3:
        raise InvalidInput(f"step {h} outside [1e-6, 1e-3]")
    if d0 < 1:
        raise InvalidInput("d0 must be positive")
    dev = derivative_deviation(d0, h)
    bound = 10.0 * h
    record = CheckRecord(
        id=f"miller.derivative.d{d0}",
        status=PASS if dev <= bound else FAIL,
        witness=None if dev <= bound else {"deviation": dev, "bound": bound},
        metrics={"h": h, "deviation": dev, "bound": bound},
    )
    logger.info(f"{'✅' if record.status == PASS else '❌'} derivative of top embedding, d0={d0}, h={h:g}: deviation {dev:.3e}")
    return new_report("miller", [record], d0=d0)
