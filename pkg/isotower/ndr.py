# isotower/ndr.py
"""
Explicit NDR pairs: the closed upper half disc retracting onto its unit
semicircle, the induced pair on D₊(2) through the conformal map phi, the pair
(Hom(V₀,V₁), non-injective maps) built with hat and frak_B, and a sampled
checker for the NDR conditions.
"""

import cmath
import logging
import math
from dataclasses import dataclass, replace
from typing import Any, Callable, List, Optional, Tuple

import numpy as np

from config.settings import settings
from isotower.errors import InvalidInput
from isotower.facial import (
    INF,
    POSITIVE,
    SUSPENSION,
    FacialMapSpec,
    frak_B,
    hat,
    interval_to_line,
    is_inf,
)
from isotower.linalg import deviation, matrix_to_json, scale_of
from isotower.report import FAIL, PASS, CheckRecord, Report, new_report

logger = logging.getLogger(__name__)

_EDGE = 1e-12
RETRACT_MARGIN = 1e-6


@dataclass(frozen=True)
class NdrPair:
    """(u, h) exhibiting the subspace `membership` as a neighbourhood deformation retract."""
    name: str
    u: Callable[[Any], float]
    h: Callable[[float, Any], Any]
    membership: Callable[[Any], bool]
    sampler: Callable[[np.random.Generator, int], List[Any]]
    distance: Callable[[Any, Any], float]
    describe: Callable[[Any], Any] = repr


# The half disc


def _check_halfdisc(z: complex) -> None:
    if abs(z) > 1.0 + _EDGE or z.imag < -_EDGE:
        raise InvalidInput(f"{z} is outside the closed upper half disc")


def halfdisc_u(z: complex) -> float:
    """min(1, 2 − 2|z|)"""
    z = complex(z)
    _check_halfdisc(z)
    return min(1.0, max(0.0, 2.0 - 2.0 * abs(z)))


def halfdisc_h(t: float, z: complex) -> complex:
    """Radius scaled to min(1, (2 − t)|z|), angle kept."""
    z = complex(z)
    _check_halfdisc(z)
    if not 0.0 <= t <= 1.0:
        raise InvalidInput(f"time {t} outside [0, 1]")
    r = abs(z)
    if r == 0.0:
        return 0j
    return min(1.0, (2.0 - t) * r) * (z / r)


def _halfdisc_samples(rng: np.random.Generator, n: int) -> List[complex]:
    points: List[complex] = []
    for i in range(n):
        angle = rng.uniform(0.0, math.pi)
        stratum = i % 4
        if stratum == 0:
            r = 1.0
        elif stratum == 1:
            r = rng.uniform(0.5, 1.0)
        else:
            r = math.sqrt(rng.uniform(0.0, 1.0))
        points.append(cmath.rect(r, angle))
    return points


def halfdisc_pair() -> NdrPair:
    return NdrPair(
        name="halfdisc",
        u=halfdisc_u,
        h=halfdisc_h,
        membership=lambda z: abs(abs(complex(z)) - 1.0) <= 1e-12,
        sampler=_halfdisc_samples,
        distance=lambda a, b: abs(complex(a) - complex(b)),
        describe=lambda z: [complex(z).real, complex(z).imag],
    )


# The conformal map D₊(2) → half disc


def phi_conformal(t) -> complex:
    """(t₀, t₁) ↦ (i − (t₁ + i·t₀)²)/(i + (t₁ + i·t₀)²), INF ↦ −1."""
    if is_inf(t):
        return complex(-1.0, 0.0)
    t0, t1 = (float(x) for x in t)
    if t0 < 0.0 or t1 < t0:
        raise InvalidInput(f"({t0}, {t1}) is not in D₊(2)")
    w = complex(t1, t0) ** 2
    return (1j - w) / (1j + w)


def phi_inverse(z: complex):
    """z ↦ i(1−z)/(1+z), principal square root, coordinates sorted; −1 ↦ INF."""
    z = complex(z)
    _check_halfdisc(z)
    if abs(1.0 + z) <= _EDGE:
        return INF
    s = cmath.sqrt(1j * (1.0 - z) / (1.0 + z))
    t0, t1 = max(0.0, s.imag), max(0.0, s.real)
    return np.array(sorted((t0, t1)))


def _pair_distance(a, b) -> float:
    if is_inf(a) or is_inf(b):
        return 0.0 if is_inf(a) and is_inf(b) else math.inf
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def _d2_samples(rng: np.random.Generator, n: int) -> List[Any]:
    points: List[Any] = []
    for i in range(n):
        t0, t1 = sorted(np.abs(rng.standard_normal(2)) * 2.0)
        stratum = i % 5
        if stratum == 0:
            t0 = 0.0
        elif stratum == 1:
            t0 = t1
        elif stratum == 2 and i % 10 == 2:
            points.append(INF)
            continue
        points.append(np.array([t0, t1]))
    return points


def d2_u(t) -> float:
    return halfdisc_u(phi_conformal(t))


def d2_h(time: float, t):
    return phi_inverse(halfdisc_h(time, phi_conformal(t)))


def ndr_D2() -> NdrPair:
    """The pair (D₊(2), D₀(2)): u′ = u″∘φ and h′_t = φ⁻¹∘h″_t∘φ."""
    return NdrPair(
        name="D2",
        u=d2_u,
        h=d2_h,
        membership=lambda t: is_inf(t) or float(t[0]) <= settings.TAU_GAP * max(1.0, float(t[1])),
        sampler=_d2_samples,
        distance=_pair_distance,
        describe=lambda t: "INF" if is_inf(t) else np.asarray(t).tolist(),
    )


def d2_homotopy_map(time: float) -> FacialMapSpec:
    """h′_t as a facial map on D₊(2)."""
    return FacialMapSpec(2, 2, lambda t: d2_h(time, t), variant=POSITIVE, name=f"h'_{time:g}")


# Maps out of Hom(V₀, V₁)


def _singular_extremes(gamma: np.ndarray) -> Tuple[float, float]:
    s = np.linalg.svd(np.asarray(gamma, dtype=complex), compute_uv=False)
    return float(s.min()), float(s.max())


def ndr_hom(d0: int, d1: int) -> NdrPair:
    """The pair (Hom(V₀,V₁), non-injective maps), assembled from ndr_D2 via hat and frak_B."""
    if not d1 >= d0 >= 1:
        raise InvalidInput(f"need d1 ≥ d0 ≥ 1, got {d0}, {d1}")

    def u(gamma) -> float:
        low, high = _singular_extremes(gamma)
        return d2_u((low, high))

    def h(time: float, gamma):
        out, _ = frak_B(hat(d2_homotopy_map(time), d0 - 1), gamma)
        return out

    def membership(gamma) -> bool:
        low, _ = _singular_extremes(gamma)
        return low <= settings.TAU_GAP * scale_of(gamma)

    def sampler(rng: np.random.Generator, n: int) -> List[np.ndarray]:
        points = []
        for i in range(n):
            g = (rng.standard_normal((d1, d0)) + 1j * rng.standard_normal((d1, d0))) / math.sqrt(2 * d0)
            if i % 3 == 0:
                v = rng.standard_normal(d0) + 1j * rng.standard_normal(d0)
                v /= np.linalg.norm(v)
                g = g - np.outer(g @ v, v.conj())
            elif i % 3 == 1:
                g = g * rng.uniform(0.05, 3.0)
            points.append(g)
        return points

    return NdrPair(
        name=f"hom({d0},{d1})",
        u=u,
        h=h,
        membership=membership,
        sampler=sampler,
        distance=lambda a, b: deviation(a, b) / scale_of(a, b),
        describe=matrix_to_json,
    )


def with_u(pair: NdrPair, u: Callable[[Any], float], name: Optional[str] = None) -> NdrPair:
    return replace(pair, u=u, name=name or f"{pair.name}*")


def cofibre_r(pair: NdrPair, x) -> Tuple[float, Any]:
    """x ↦ (u(x), h₀(x))"""
    return pair.u(x), pair.h(0.0, x)


def check_ndr_axioms(pair: NdrPair, trials: int, seed: int, tol: Optional[float] = None) -> Report:
    """Sampled check of the NDR conditions, one record per condition."""
    if trials <= 0:
        raise InvalidInput("trials must be positive")
    tol = 1e-8 if tol is None else tol
    rng = np.random.default_rng(seed)
    points = pair.sampler(rng, trials)
    times = rng.uniform(0.0, 1.0, size=len(points))
    witnesses = {"u-range": None, "h1-identity": None, "fixes-A": None, "retracts": None, "zero-set": None}
    in_a = 0

    def note(key: str, x, **extra) -> None:
        if witnesses[key] is None:
            witnesses[key] = {"point": pair.describe(x), **extra}

    for x, t in zip(points, times):
        ux = pair.u(x)
        member = pair.membership(x)
        in_a += member
        if not -tol <= ux <= 1.0 + tol:
            note("u-range", x, u=ux)
        if pair.distance(pair.h(1.0, x), x) > tol:
            note("h1-identity", x)
        if member and pair.distance(pair.h(float(t), x), x) > tol:
            note("fixes-A", x, time=float(t))
        if ux < 1.0 - RETRACT_MARGIN and not pair.membership(pair.h(0.0, x)):
            note("retracts", x, u=ux)
        if (abs(ux) <= tol) != member:
            note("zero-set", x, u=ux, member=member)

    records = [
        CheckRecord(
            id=f"ndr.{pair.name}.{key}",
            status=FAIL if witness is not None else PASS,
            witness=witness,
            metrics={"trials": trials, "in_A": in_a},
        )
        for key, witness in witnesses.items()
    ]
    report = new_report("ndr", records, seed=seed, pair=pair.name)
    level = logging.INFO if report.ok else logging.WARNING
    logger.log(level, f"{'✅' if report.ok else '❌'} NDR {pair.name}: {report.summary.pass_} pass, {report.summary.fail} fail")
    return report


# The e-map of the top triangle


def e_map(d: int) -> FacialMapSpec:
    """
    t ↦ L(u′(t₀, t_{d−1})) ∧ ĥ′₀(t) with L(x) = log(x/(1−x)): D₊(d)/D₀(d) → ΣD₀(d).
    """
    h0 = hat(d2_homotopy_map(0.0), d - 1)

    def evaluator(t: np.ndarray):
        coord = interval_to_line(d2_u((t[0], t[-1])))
        if is_inf(coord):
            return INF
        out, _ = h0.evaluate(t)
        return out, coord

    return FacialMapSpec(d, d, evaluator, variant=SUSPENSION, name="ndr-map")


def f_prime(t: float):
    """log(8eᵗ/(1 − 6eᵗ)) for t < −log 6, INF otherwise."""
    if t >= -math.log(6.0):
        return INF
    x = math.exp(t)
    return math.log(8.0 * x / (1.0 - 6.0 * x))
