# isotower/facial.py
"""
Eigenvalue-model spaces D(d), D₊(d) and facial maps between them.

A point of D(d) is an ascending tuple of reals or the point at infinity INF.
Facial maps are evaluator callables tagged with the variant of D they live on;
facialness is checked by sampling.  The operators frak_A and frak_B lift a
facial map to Hermitian operators and to maps V₀ → V₁, and the degree helpers
classify maps by the winding of their restriction to the diagonal circle.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from config.settings import settings
from isotower.errors import FacialViolation, InvalidInput, ResolutionError
from isotower.linalg import (
    adjoint,
    as_matrix,
    check_hermitian,
    diag_in_frame,
    gram_schmidt_complete,
    hermitian_eig,
    is_isometry,
    scale_of,
)
from isotower.report import FAIL, PASS, CheckRecord, Report, new_report

logger = logging.getLogger(__name__)


class _Infinity:
    """The added point of the one-point compactification."""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


class _Basepoint:
    """The basepoint of a based space of operators or tower points."""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BASEPOINT"

    def __reduce__(self):
        return (_Basepoint, ())


INF = _Infinity()
BASEPOINT = _Basepoint()

PLAIN = "plain"
POSITIVE = "positive"
POSITIVE_MOD_ZERO = "positive-mod-zero"
SUSPENSION = "suspension-target"
THOM = "thom"

_POSITIVE_SOURCES = (POSITIVE, POSITIVE_MOD_ZERO, SUSPENSION)


def is_inf(x) -> bool:
    return x is INF


def asc_tuple(values) -> np.ndarray:
    """Validate and return an ascending tuple as a float array."""
    t = np.asarray(values, dtype=float).reshape(-1)
    if t.size and np.any(np.diff(t) < 0):
        raise InvalidInput(f"tuple {t.tolist()} is not ascending")
    return t


def _ascending(values: np.ndarray, tol: float) -> bool:
    return bool(values.size < 2 or np.all(np.diff(values) >= -tol))


@dataclass(frozen=True)
class FacialMapSpec:
    """
    A face-preserving map D(d_in) → D(d_out) given pointwise.

    The evaluator receives a float array (never INF) and returns INF, an
    array, or a pair (array | INF, extra) where extra is the suspension
    coordinate of maps into a suspension.  For the thom variant the input is
    the concatenation (s, t) with s ∈ D(d_in − split) and t ∈ D₊(split).
    """
    d_in: int
    d_out: int
    evaluator: Callable
    variant: str = PLAIN
    name: str = "f"
    split: int = 0
    diagonal: Optional[Callable[[float], object]] = None

    @property
    def positive_source(self) -> bool:
        return self.variant in _POSITIVE_SOURCES

    @property
    def suspension_target(self) -> bool:
        return self.variant == SUSPENSION

    def evaluate(self, t) -> Tuple[object, Optional[float]]:
        """(values | INF, extra) for a tuple or INF."""
        if is_inf(t):
            return INF, None
        raw = self.evaluator(np.asarray(t, dtype=float))
        if isinstance(raw, tuple):
            out, extra = raw
        else:
            out, extra = raw, None
        if is_inf(out) or (extra is not None and is_inf(extra)):
            return INF, None
        return np.asarray(out, dtype=float), (None if extra is None else float(extra))


def _check_output(f: FacialMapSpec, out: np.ndarray, scale: float) -> None:
    if len(out) != f.d_out:
        raise FacialViolation(f"{f.name}: produced {len(out)} coordinates, expected {f.d_out}")
    if not _ascending(out, settings.TOL_EQ * scale):
        raise FacialViolation(f"{f.name}: output {out.tolist()} is not ascending")


# Operator-level constructions


def eta(alpha) -> np.ndarray:
    """Ascending eigenvalue tuple."""
    return hermitian_eig(alpha).values


def nu(frame, t) -> np.ndarray:
    """(U, t) ↦ U·Δ(t)·U†"""
    if is_inf(t):
        raise InvalidInput("nu is undefined at INF")
    u = as_matrix(frame)
    values = asc_tuple(t)
    if u.shape != (len(values), len(values)) or not is_isometry(u):
        raise InvalidInput("nu needs a square unitary frame matching the tuple length")
    out = diag_in_frame(u, values)
    return (out + adjoint(out)) / 2


def _check_psd(alpha: np.ndarray) -> np.ndarray:
    values = eta(alpha)
    if values.size and values[0] < -settings.TAU_GAP * scale_of(alpha):
        raise InvalidInput(f"operator is not positive semidefinite (e_0 = {values[0]:.3e})")
    return values


def mu(theta, alpha) -> np.ndarray:
    """(θ, α) ↦ −θ·α for an isometry θ and PSD α."""
    t = as_matrix(theta)
    a = check_hermitian(alpha)
    if t.shape[1] != a.shape[0]:
        raise InvalidInput(f"rank of theta ({t.shape[1]}) must equal dim alpha ({a.shape[0]})")
    if not is_isometry(t):
        raise InvalidInput("theta is not an isometry")
    _check_psd(a)
    return -t @ a


def frak_A(f: FacialMapSpec, alpha):
    """
    Apply a facial map to the eigenvalues of alpha, keeping its eigenvectors.

    Returns (operator | BASEPOINT, extra).
    """
    a = check_hermitian(alpha)
    if f.d_in != a.shape[0] or f.d_out != f.d_in:
        raise InvalidInput(f"{f.name} acts on D({f.d_in}), alpha has dim {a.shape[0]}")
    eig = hermitian_eig(a)
    values = eig.values
    if f.positive_source:
        values = np.maximum(_check_psd(a), 0.0)
    out, extra = f.evaluate(values)
    if is_inf(out):
        return BASEPOINT, None
    _check_output(f, out, scale_of(a))
    result = diag_in_frame(eig.vectors, out)
    return (result + adjoint(result)) / 2, extra


def singular_frames(gamma: np.ndarray):
    """
    Ascending singular values t, right vectors v_i (columns) and left vectors
    m_i with gamma·v_i = t_i·m_i.  Left vectors over the kernel are completed
    deterministically.
    """
    g = as_matrix(gamma)
    d1, d0 = g.shape
    if d1 < d0:
        raise InvalidInput(f"map of shape {g.shape} cannot be injective")
    if d0 == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=complex), np.zeros((d1, 0), dtype=complex)
    u, s, vh = np.linalg.svd(g, full_matrices=True)
    order = np.arange(d0)[::-1]
    t = s[order]
    v = adjoint(vh)[:, order]
    thr = settings.TAU_GAP * scale_of(g)
    live = t > thr
    m = np.zeros((d1, d0), dtype=complex)
    m[:, live] = (g @ v[:, live]) / t[live]
    dead = np.flatnonzero(~live)
    if dead.size:
        m[:, dead] = gram_schmidt_complete(m[:, live], dead.size, ambient=d1)
    return t, v, m


def frak_B(f: FacialMapSpec, gamma):
    """Apply a facial map on D₊ to the singular values of gamma, keeping its singular frames."""
    if not f.positive_source:
        raise InvalidInput(f"{f.name} is not defined on D₊")
    g = as_matrix(gamma)
    if f.d_in != g.shape[1] or f.d_out != f.d_in:
        raise InvalidInput(f"{f.name} acts on D₊({f.d_in}), gamma has {g.shape[1]} columns")
    t, v, m = singular_frames(g)
    out, extra = f.evaluate(t)
    if is_inf(out):
        return BASEPOINT, None
    _check_output(f, out, scale_of(g))
    return (m * out) @ adjoint(v), extra


def hat(f2: FacialMapSpec, d: int) -> FacialMapSpec:
    """
    Extend a facial map on D₊(2) to D₊(d+1) by linear interpolation between
    the images of the extreme coordinates.
    """
    if f2.d_in != 2 or f2.d_out != 2:
        raise InvalidInput("hat needs a map on D₊(2)")

    def evaluator(t: np.ndarray):
        out, _ = f2.evaluate(np.array([t[0], t[d]]))
        if is_inf(out):
            return INF
        g, h = out[0], out[1] - out[0]
        width = t[d] - t[0]
        if width <= 0.0:
            return np.full(d + 1, g)
        return g + ((t - t[0]) / width) * h

    return FacialMapSpec(d + 1, d + 1, evaluator, variant=f2.variant, name=f"hat({f2.name})")


# Builtin facial maps


def identity_map(d: int, variant: str = PLAIN) -> FacialMapSpec:
    return FacialMapSpec(d, d, lambda t: t.copy(), variant=variant, name="identity")


def reflection_map() -> FacialMapSpec:
    """t ↦ −t on D(1)."""
    return FacialMapSpec(1, 1, lambda t: -t, variant=PLAIN, name="reflection")


def shift_map(d: int, c: float) -> FacialMapSpec:
    return FacialMapSpec(d, d, lambda t: t + c, variant=PLAIN, name=f"shift({c})")


def square_map(d: int) -> FacialMapSpec:
    return FacialMapSpec(d, d, lambda t: t ** 2, variant=POSITIVE, name="square")


def scale_map(d: int, c: float) -> FacialMapSpec:
    return FacialMapSpec(d, d, lambda t: c * t, variant=POSITIVE, name=f"scale({c})")


def collapse_bottom_map(d: int, variant: str = PLAIN) -> FacialMapSpec:
    """t ↦ (t₀, …, t₀)"""
    return FacialMapSpec(d, d, lambda t: np.full(len(t), t[0]), variant=variant, name="collapse-bottom")


def swap_map(d: int) -> FacialMapSpec:
    """Reverses the tuple; not facial, used as a control."""
    return FacialMapSpec(d, d, lambda t: t[::-1].copy(), variant=PLAIN, name="swap")


def chi_map(d: int) -> FacialMapSpec:
    """
    t ↦ log(t₀) ∧ (log t_i − log t₀): D₊(d)/D₀(d) → ΣD₀(d), the eigenvalue
    shadow of the top map chi.
    """
    def evaluator(t: np.ndarray):
        if t[0] <= 0.0:
            return INF
        logs = np.log(t)
        return logs - logs[0], logs[0]

    return FacialMapSpec(d, d, evaluator, variant=SUSPENSION, name="chi-map")


def phi_lift_map(d0: int, k: int) -> FacialMapSpec:
    """(s, t) ↦ (s, s_top + t) on D(d₀−k) ∧ D₊(k)."""
    def evaluator(x: np.ndarray):
        s, t = x[: d0 - k], x[d0 - k:]
        top = s[-1] if s.size else 0.0
        return np.concatenate([s, top + t])

    return FacialMapSpec(d0, d0, evaluator, variant=THOM, name="phi-lift", split=k)


def r_lift_map(d0: int, k: int) -> FacialMapSpec:
    """(s, t) ↦ (log t₀ − Exp(−s), log t), collapsing t₀ = 0 to INF."""
    def evaluator(x: np.ndarray):
        s, t = x[: d0 - k], x[d0 - k:]
        if t.size == 0 or t[0] <= 0.0:
            return INF
        logs = np.log(t)
        return np.concatenate([logs[0] - np.exp(-s), logs])

    return FacialMapSpec(d0, d0, evaluator, variant=THOM, name="r-lift", split=k)


def log_identification(t):
    """D₊(d)/D₀(d) ≅ D(d) by coordinatewise log; D₀ goes to INF."""
    if is_inf(t):
        return INF
    x = np.asarray(t, dtype=float)
    if x.size and x[0] <= 0.0:
        return INF
    return np.log(x)


def exp_identification(t):
    if is_inf(t):
        return INF
    return np.exp(np.asarray(t, dtype=float))


def interval_to_line(x: float):
    """(0, 1) ≅ ℝ via log(x/(1−x)); the ends go to INF."""
    if x <= 0.0 or x >= 1.0:
        return INF
    return math.log(x / (1.0 - x))


def line_to_interval(y) -> float:
    if is_inf(y):
        return 1.0
    return 1.0 / (1.0 + math.exp(-y)) if y >= 0 else math.exp(y) / (1.0 + math.exp(y))


# Sampled facial check


@dataclass
class _Sample:
    point: np.ndarray
    stratum: str
    faces: List[int] = field(default_factory=list)


def _sample_part(rng: np.random.Generator, d: int, positive: bool) -> np.ndarray:
    x = rng.standard_normal(d) * 2.0
    if positive:
        x = np.abs(x)
    return np.sort(x)


def _samples(f: FacialMapSpec, count: int, rng: np.random.Generator) -> List[_Sample]:
    """Random tuples plus boundary strata: single faces, the full diagonal and D₀."""
    parts = [(0, f.d_in - f.split, False), (f.d_in - f.split, f.d_in, True)] if f.variant == THOM \
        else [(0, f.d_in, f.positive_source)]
    out: List[_Sample] = []
    for i in range(count):
        x = np.concatenate([_sample_part(rng, hi - lo, pos) for lo, hi, pos in parts])
        stratum = ("interior", "face", "diagonal", "zero")[i % 4]
        faces: List[int] = []
        lo, hi, pos = parts[int(rng.integers(len(parts)))]
        if stratum == "face" and hi - lo >= 2:
            j = int(rng.integers(lo, hi - 1))
            x[j + 1] = x[j]
            faces = [j]
        elif stratum == "diagonal" and hi - lo >= 1:
            x[lo:hi] = x[lo]
            faces = list(range(lo, hi - 1))
        elif stratum == "zero" and pos and hi - lo >= 1:
            x[lo] = 0.0
        else:
            stratum = "interior"
        out.append(_Sample(x, stratum, faces))
    return out


def check_facial(f: FacialMapSpec, samples: int, seed: int) -> Report:
    """
    Evaluate f on random and boundary-stratified tuples and report
    ascending-output, face, zero-face and basepoint violations with witnesses.
    """
    if samples <= 0:
        raise InvalidInput("samples must be positive")
    rng = np.random.default_rng(seed)
    grid = _samples(f, samples, rng)
    tol = settings.TOL_EQ
    failures = {"ascending": None, "faces": None, "zero-face": None, "basepoint": None}
    strata = {}

    out_inf, _ = f.evaluate(INF)
    if not is_inf(out_inf):
        failures["basepoint"] = {"input": "INF", "output": np.asarray(out_inf).tolist()}

    for sample in grid:
        strata[sample.stratum] = strata.get(sample.stratum, 0) + 1
        x = sample.point
        try:
            out, _ = f.evaluate(x)
        except Exception as e:
            failures["ascending"] = failures["ascending"] or {"input": x.tolist(), "error": str(e)}
            continue
        zero_face = f.positive_source and x[0] == 0.0 or (
            f.variant == THOM and f.split and x[f.d_in - f.split] == 0.0)
        if is_inf(out):
            continue
        scale = max(1.0, float(np.max(np.abs(out), initial=0.0)))
        if len(out) != f.d_out or not _ascending(out, tol * scale):
            failures["ascending"] = failures["ascending"] or {"input": x.tolist(), "output": out.tolist()}
            continue
        for j in sample.faces:
            if abs(out[j + 1] - out[j]) > tol * scale:
                failures["faces"] = failures["faces"] or {"input": x.tolist(), "output": out.tolist(), "face": j}
        if zero_face and f.variant == POSITIVE and abs(out[0]) > tol * scale:
            failures["zero-face"] = failures["zero-face"] or {"input": x.tolist(), "output": out.tolist()}
        if zero_face and f.variant in (POSITIVE_MOD_ZERO, SUSPENSION):
            failures["zero-face"] = failures["zero-face"] or {"input": x.tolist(), "output": out.tolist()}

    records = []
    for name, witness in failures.items():
        records.append(CheckRecord(
            id=f"facial.{f.name}.{name}",
            status=FAIL if witness is not None else PASS,
            witness=witness,
            metrics={"samples": samples, "seed": seed, "strata": dict(sorted(strata.items()))},
        ))
    report = new_report("facial", records, seed=seed, map=f.name, variant=f.variant)
    if report.ok:
        logger.debug(f"✅ {f.name} facial on {samples} samples")
    else:
        logger.warning(f"❌ {f.name} failed facial checks: {[c.id for c in report.failed]}")
    return report


# Degrees


def circle_angle(value) -> float:
    """The compactified line as a circle: v ↦ 2·atan(v), INF ↦ π."""
    if is_inf(value):
        return math.pi
    return 2.0 * math.atan(value)


def diagonal_restriction(f: FacialMapSpec) -> Callable[[float], object]:
    """
    The circle self-map f induces on the diagonal (s, …, s).

    Positive sources are read through the log identification, so the diagonal
    point for parameter s is (eˢ, …, eˢ); suspension targets report their
    suspension coordinate.
    """
    if f.diagonal is not None:
        return f.diagonal

    def restricted(s: float):
        with np.errstate(all="ignore"):
            coord = math.exp(s) if f.positive_source and s < 700.0 else (INF if f.positive_source else s)
        if is_inf(coord):
            return INF
        out, extra = f.evaluate(np.full(f.d_in, coord))
        if is_inf(out):
            return INF
        if f.suspension_target:
            return extra
        value = float(out[0])
        if f.variant == POSITIVE:
            return -math.inf if value <= 0.0 else math.log(value)
        return value

    return restricted


def _wrap(delta: float) -> float:
    return (delta + math.pi) % (2.0 * math.pi) - math.pi


def _winding(angles: np.ndarray) -> Tuple[float, float]:
    steps = np.array([_wrap(float(b - a)) for a, b in zip(angles, np.roll(angles, -1))])
    return float(steps.sum() / (2.0 * math.pi)), float(np.max(np.abs(steps)))


def degree_of_circle_map(g: Callable[[float], object], samples: Optional[int] = None) -> int:
    """Winding number of a self-map of ℝ ∪ {∞}, doubling the resolution until it settles."""
    n = samples or settings.DEGREE_SAMPLES
    while n <= settings.DEGREE_MAX_SAMPLES:
        thetas = -math.pi + 2.0 * math.pi * (np.arange(n) + 0.5) / n
        angles = np.array([circle_angle(g(math.tan(th / 2.0))) for th in thetas])
        total, biggest = _winding(angles)
        if biggest < math.pi / 2 and abs(total - round(total)) <= 0.01:
            return int(round(total))
        logger.debug(f"winding {total:.4f} unresolved at {n} samples (largest step {biggest:.3f})")
        n *= 2
    raise ResolutionError(f"winding did not settle below {settings.DEGREE_MAX_SAMPLES} samples")


def degree_on_diagonal(f: FacialMapSpec, samples: Optional[int] = None) -> int:
    """Degree of a facial map, read off its diagonal circle."""
    return degree_of_circle_map(diagonal_restriction(f), samples)


def degree_on_sphere(g: Callable[[float, float], object], target: Optional[Tuple[float, float]] = None,
                     center: Tuple[float, float] = (0.0, 0.0), radius: float = 5.0,
                     samples: Optional[int] = None) -> int:
    """
    Degree of a proper map ℝ² → ℝ², as the winding of the image of a circle
    around a regular value whose preimages the circle encloses.
    """
    if target is None:
        value = g(*center)
        if is_inf(value):
            raise InvalidInput("default target is the image of the centre, which is INF")
        target = value
    n = samples or settings.DEGREE_SAMPLES
    while n <= settings.DEGREE_MAX_SAMPLES:
        phis = 2.0 * math.pi * np.arange(n) / n
        angles = []
        for phi in phis:
            image = g(center[0] + radius * math.cos(phi), center[1] + radius * math.sin(phi))
            if is_inf(image):
                raise ResolutionError("image of the sampling circle meets INF")
            angles.append(math.atan2(image[1] - target[1], image[0] - target[0]))
        total, biggest = _winding(np.array(angles))
        if biggest < math.pi / 2 and abs(total - round(total)) <= 0.01:
            return int(round(total))
        n *= 2
    raise ResolutionError(f"winding did not settle below {settings.DEGREE_MAX_SAMPLES} samples")


def sphere_restriction(g: FacialMapSpec, d0: int, k: int) -> Callable[[float, float], object]:
    """
    The self-map of S² a thom facial map induces on points ((s,…,s), (eᵗ,…,eᵗ)),
    with the output read as (bottom value a, log(top value − a)).
    """
    if g.variant != THOM or not 1 <= k <= d0 - 1:
        raise InvalidInput("sphere restriction needs a thom map with 1 ≤ k ≤ d0−1")

    def restricted(s: float, t: float):
        x = np.concatenate([np.full(d0 - k, s), np.full(k, math.exp(t))])
        out, _ = g.evaluate(x)
        if is_inf(out):
            return INF
        a, b = float(out[0]), float(out[-1])
        if b - a <= 0.0:
            return INF
        return a, math.log(b - a)

    return restricted


def g_double_prime(s: float, t: float) -> Tuple[float, float]:
    return t - math.exp(-s), -s


def f_bar_prime(s: float, t: float) -> Tuple[float, float]:
    return s, t
