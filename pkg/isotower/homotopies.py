# isotower/homotopies.py
"""
The null-homotopy families of the tower composites.

Each family is a map t ↦ H(t, point) for t ≥ 0 whose value at t = 0 is a
composite of tower maps and which leaves every compact set as t → ∞, so
it extends to the one-point compactification as a null homotopy.  The
quantity watched for that escape is exposed through escape_norm.
"""

import logging
from typing import Any, Callable, Dict

import numpy as np

from isotower.calculus import exp_h, is_injective, lambda_k, log_h, rho, sigma
from isotower.errors import InvalidInput
from isotower.linalg import adjoint, as_matrix, diag_in_frame, hermitian_eig, operator_norm
from isotower.tower import (
    ThomPoint,
    TowerPoint,
    delta_k_map,
    f_k,
    in_Y_k,
    phi_k_map,
    pi_k,
    tau,
)

logger = logging.getLogger(__name__)

TOP_1 = "top-1"
TOP_2 = "top-2"
MID_1 = "mid-1"
MID_2 = "mid-2"
MID_3 = "mid-3"


def _check_time(t: float) -> float:
    t = float(t)
    if not t >= 0.0:
        raise InvalidInput(f"homotopy time must be ≥ 0, got {t}")
    return t


def top_1(t: float, gamma) -> TowerPoint:
    """γ ↦ (log(ρ(γ) + t), σ(γ)·λ_{d₀−1}(log(ρ(γ) + t))), defined where t + e₀(ρ(γ)) > 0."""
    t = _check_time(t)
    g = as_matrix(gamma)
    r = rho(g)
    low = hermitian_eig(r).values[0]
    if not low + t > 0.0:
        raise InvalidInput("top-1 needs t + e₀(ρ(γ)) > 0")
    d0 = g.shape[1]
    alpha = log_h(r + t * np.eye(d0))
    return TowerPoint(d0 - 1, alpha, sigma(g).sigma @ lambda_k(alpha, d0 - 1))


def top_2(t: float, x: TowerPoint):
    """Top-level (α, β) ↦ (e₀(α), σ(β)·(α − e₀(α) + t))."""
    t = _check_time(t)
    if x.k != x.d0:
        raise InvalidInput(f"top-2 needs a level {x.d0} point")
    values = hermitian_eig(x.alpha).values
    if x.d0 > 1 and not values[1] - values[0] + t > 0.0:
        raise InvalidInput("top-2 needs e₁(α) − e₀(α) + t > 0")
    e0 = float(values[0])
    return e0, x.polar().sigma @ (x.alpha - (e0 - t) * np.eye(x.d0))


def mid_1(t: float, z: ThomPoint) -> TowerPoint:
    """(W, γ, ψ) ↦ δ_t = (ρ(γ) + e_top(ψ) + t)|_W ⊕ ψ|_{W⊥} with isometry σ(γ) on P_{k−1}(δ_t)."""
    t = _check_time(t)
    if not 1 <= z.k < z.d0:
        raise InvalidInput(f"mid-1 needs 1 ≤ k < {z.d0}, got {z.k}")
    wf, qf = z.frames()
    top = float(hermitian_eig(adjoint(qf) @ z.psi @ qf).values[-1])
    delta = z.psi + wf @ (rho(z.gamma @ wf) + (top + t) * np.eye(z.k)) @ adjoint(wf)
    delta = (delta + adjoint(delta)) / 2
    return TowerPoint(z.k - 1, delta, sigma(z.gamma).sigma @ lambda_k(delta, z.k - 1))


def mid_2(t: float, x: TowerPoint):
    """Level-k point ↦ (e_{d₀−k}(α), P_k(α), σ(β)·(λ_{k−1}(α) + t)|_{P_k(α)}, −log(e_{d₀−k}(α) − α)|_{P_k(α)⊥})."""
    t = _check_time(t)
    k = x.k
    if not 1 <= k < x.d0:
        raise InvalidInput(f"mid-2 needs 1 ≤ k < {x.d0}, got {k}")
    if in_Y_k(x.alpha, k):
        raise InvalidInput("mid-2 needs alpha off Y_k")
    eig = hermitian_eig(x.alpha)
    j = x.d0 - k
    top = eig.vectors[:, j:]
    w = top @ adjoint(top)
    gamma = x.polar().sigma @ (lambda_k(x.alpha, k - 1) + t * np.eye(x.d0)) @ w
    psi = diag_in_frame(eig.vectors[:, :j], -np.log(eig.values[j] - eig.values[:j]))
    return float(eig.values[j]), ThomPoint(k, w, gamma, (psi + adjoint(psi)) / 2)


def mid_3(t: float, x: TowerPoint):
    """
    Level k−1 point ↦ (e_j(α), α_t, β) with j = d₀ − k and
    α_t = −log(e_j − α + t)|_{P⊥} ⊕ (α − e_j − log(e_j − e_{j−1} + t))|_P, P = P_k(α).
    """
    t = _check_time(t)
    k = x.k + 1
    if not 1 <= k < x.d0:
        raise InvalidInput(f"mid-3 needs 1 ≤ k < {x.d0}, got {k}")
    if in_Y_k(x.alpha, k):
        raise InvalidInput("mid-3 needs alpha off Y_k")
    eig = hermitian_eig(x.alpha)
    j = x.d0 - k
    ej, below = eig.values[j], eig.values[j - 1]
    if not ej - below + t > 0.0:
        raise InvalidInput("mid-3 needs e_j(α) − e_{j−1}(α) + t > 0")
    values = np.concatenate([
        -np.log(ej - eig.values[:j] + t),
        eig.values[j:] - ej - np.log(ej - below + t),
    ])
    alpha_t = diag_in_frame(eig.vectors, values)
    return float(ej), TowerPoint(k, (alpha_t + adjoint(alpha_t)) / 2, x.beta.copy())


FAMILIES: Dict[str, Callable[[float, Any], Any]] = {
    TOP_1: top_1,
    TOP_2: top_2,
    MID_1: mid_1,
    MID_2: mid_2,
    MID_3: mid_3,
}


def null_homotopy(name: str, t: float, point):
    if name not in FAMILIES:
        raise InvalidInput(f"unknown homotopy family {name!r}; known: {sorted(FAMILIES)}")
    return FAMILIES[name](t, point)


def composite(name: str, point):
    """The composite each family starts from at t = 0."""
    if name == TOP_1:
        g = as_matrix(point)
        if not is_injective(g):
            raise InvalidInput("the top-1 composite is only defined on injective maps")
        d0 = g.shape[1]
        return pi_k(phi_k_map(ThomPoint(d0, np.eye(d0, dtype=complex), g, np.zeros((d0, d0), dtype=complex))))
    if name == TOP_2:
        return tau(pi_k(point))
    if name == MID_1:
        return pi_k(phi_k_map(point))
    if name == MID_2:
        return f_k(pi_k(point), point.k)
    if name == MID_3:
        value = delta_k_map(point)
        return value.t, phi_k_map(value.thom)
    raise InvalidInput(f"unknown homotopy family {name!r}")


def escape_norm(name: str, t: float, point) -> float:
    """The norm whose growth as t → ∞ shows the family leaves compact sets."""
    value = null_homotopy(name, t, point)
    if name == TOP_1:
        return operator_norm(exp_h(value.alpha))
    if name == MID_3:
        return operator_norm(exp_h(-value[1].alpha))
    if name == MID_1:
        return operator_norm(value.alpha)
    if name == MID_2:
        return operator_norm(value[1].gamma)
    return operator_norm(value[1])
