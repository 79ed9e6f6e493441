# isotower/suites.py
"""
Suite runner: every module's invariants as seeded, named checks.

Each check draws its trials from a generator seeded by (master seed, check id),
so a record depends only on the config and never on which other checks ran.
Trials report a scale-relative deviation; a check fails when any trial
exceeds its bound or raises an IsotowerError, and the first such trial is
kept as the witness.
"""

import logging
import math
import sys
from dataclasses import replace
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from config.settings import settings
from isotower.calculus import (
    EXP,
    REALS,
    ScalarFunction,
    P_k,
    apply_to_spectrum,
    exp_h,
    kappa,
    kappa_inv,
    log_h,
    rho,
    sigma,
    spectral_norm_bound,
)
from isotower.errors import IsotowerError, NotInjective, TooLarge, UsageError
from isotower.facial import (
    BASEPOINT,
    PLAIN,
    POSITIVE,
    FacialMapSpec,
    check_facial,
    chi_map,
    collapse_bottom_map,
    degree_on_diagonal,
    degree_on_sphere,
    eta,
    exp_identification,
    f_bar_prime,
    frak_A,
    frak_B,
    g_double_prime,
    hat,
    identity_map,
    is_inf,
    log_identification,
    mu,
    nu,
    phi_lift_map,
    r_lift_map,
    reflection_map,
    scale_map,
    shift_map,
    sphere_restriction,
    square_map,
    swap_map,
)
from isotower.grassmann import (
    GrassmannChart,
    GroupAction,
    act,
    decompose_s,
    join_hom_self,
    recompose,
    split_hom_self,
)
from isotower.homotopies import FAMILIES, MID_1, MID_2, TOP_1, TOP_2, composite, escape_norm, null_homotopy
from isotower.koszul import koszul_build, tower_koszul
from isotower.ktheory import (
    GroupSpec,
    RepElement,
    RepPoly,
    all_representations,
    augmentation,
    character_value,
    check_scale,
    f_product_check,
    f_V,
    f_V_product,
    is_subrep,
    residue,
    restriction_kernel_check,
)
from isotower.linalg import (
    adjoint,
    check_projector,
    deviation,
    eigenvalues,
    hermitian_eig,
    operator_norm,
    projector_rank,
    restrict,
    scale_of,
)
from isotower.miller import (
    FiltrationPoint,
    cayley,
    cayley_inv,
    filtration_level,
    g0_g1_homotopy,
    g0_map,
    g1_map,
    gamma_diffeo,
    gamma_diffeo_inv,
    gamma_section,
    in_chart_A,
    in_chart_B,
    inclusion,
    derivative_deviation,
    res_k_inverse_on_B,
    res_k_map,
    top_splitting_derivative_check,
)
from isotower.ndr import (
    check_ndr_axioms,
    d2_homotopy_map,
    e_map,
    halfdisc_pair,
    ndr_D2,
    ndr_hom,
    phi_conformal,
    with_u,
)
from isotower.random_instances import (
    complex_gaussian,
    gapped_spectrum,
    haar_isometry,
    haar_unitary,
    hermitian_with_spectrum,
    random_filtration_point,
    random_hermitian,
    random_injective,
    random_representation,
    random_thom_point,
    random_tower_point,
    rng_for,
    seed_for,
)
from isotower.report import FAIL, PASS, SKIP, CheckRecord, Report, SuiteConfig, new_report
from isotower.tower import (
    DeltaValue,
    ThomPoint,
    TowerPoint,
    chi,
    delta_k_map,
    f_k,
    frak_C,
    g_k,
    make_tower_point,
    p_map,
    phi_k_map,
    pi_k,
    point_deviation,
    q_k,
    q_map,
    r_k,
    tau,
    tau_inv,
    thom_deviation,
    top_point,
)

logger = logging.getLogger(__name__)

ALL = "all"
DEFAULT_GROUPS: List[Tuple[int, ...]] = [(1,), (2,), (3,), (4,), (2, 2), (2, 3)]
EQUIVARIANCE_GROUPS: List[Tuple[int, ...]] = [(2,), (4,), (2, 3)]
COURANT_FISCHER_TOL = 1e-6
COURANT_FISCHER_FRAMES = 64
ESCAPE_TIME = 1e3
ESCAPE_FACTOR = 10.0

Trial = Callable[[np.random.Generator, int], Any]

SIN = ScalarFunction(np.sin, REALS, "sin")
COS = ScalarFunction(np.cos, REALS, "cos")


# Plumbing


def _progress(iterable: Iterable, desc: str) -> Iterable:
    return tqdm(iterable, desc=desc, leave=False, disable=not (settings.SHOW_PROGRESS and sys.stderr.isatty()))


def _log_record(record: CheckRecord) -> None:
    if record.status == FAIL:
        logger.warning(f"❌ {record.id}: {record.witness}")
    else:
        logger.info(f"✅ {record.id}: {record.status}")


def _run_trials(check_id: str, cfg: SuiteConfig, trial: Trial, bound: float,
                trials: Optional[int] = None, **metrics: Any) -> CheckRecord:
    """
    Run `trial(rng, i)` for each i.  A trial returns a deviation, a pair
    (deviation, detail) or None to skip; IsotowerError counts as a failure.
    """
    n = cfg.trials if trials is None else trials
    rng = rng_for(cfg.seed, check_id)
    worst, witness, skipped = 0.0, None, 0
    for i in _progress(range(n), check_id):
        try:
            result = trial(rng, i)
        except IsotowerError as e:
            witness = witness or {"trial": i, "error": f"{type(e).__name__}: {e}"}
            continue
        except (ArithmeticError, np.linalg.LinAlgError, ValueError) as e:
            logger.error(f"❌ {check_id} trial {i}: {type(e).__name__}: {e}")
            witness = witness or {"trial": i, "error": f"{type(e).__name__}: {e}"}
            continue
        if result is None:
            skipped += 1
            continue
        dev, detail = result if isinstance(result, tuple) else (result, None)
        dev = float(dev)
        if dev > worst:
            worst = dev
        if not dev <= bound and witness is None:
            witness = {"trial": i, "deviation": dev, **(detail or {})}
    if witness is not None:
        status = FAIL
    elif skipped == n:
        status = SKIP
    else:
        status = PASS
    record = CheckRecord(
        id=check_id,
        status=status,
        witness=witness,
        metrics={"trials": n, "skipped": skipped, "max_deviation": worst, "bound": bound, **metrics},
    )
    _log_record(record)
    return record


def _exact_record(check_id: str, cases: int, witness: Optional[Dict], **metrics: Any) -> CheckRecord:
    record = CheckRecord(
        id=check_id,
        status=FAIL if witness is not None else (PASS if cases else SKIP),
        witness=witness,
        metrics={"cases": cases, **metrics},
    )
    _log_record(record)
    return record


def _collect(report: Report) -> List[CheckRecord]:
    # the producing module already logged these
    return list(report.checks)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _value_deviation(a, b) -> float:
    """Scale-relative distance between two outputs of the same map."""
    if a is BASEPOINT or b is BASEPOINT or is_inf(a) or is_inf(b):
        return 0.0 if a is b else math.inf
    if isinstance(a, TowerPoint):
        return point_deviation(a, b)
    if isinstance(a, ThomPoint):
        return thom_deviation(a, b)
    if isinstance(a, FiltrationPoint):
        return deviation(a.phi, b.phi) / scale_of(a.phi, b.phi)
    if isinstance(a, DeltaValue):
        if a.twisted != b.twisted:
            return math.inf
        return max(_rel(a.t, b.t), thom_deviation(a.thom, b.thom))
    if isinstance(a, tuple):
        if len(a) != len(b):
            return math.inf
        return max((_value_deviation(x, y) for x, y in zip(a, b)), default=0.0)
    if isinstance(a, (int, float)):
        return _rel(float(a), float(b))
    return deviation(a, b) / scale_of(a, b)


def _act_value(g, value, action: GroupAction, kind: str = "hom"):
    if value is BASEPOINT:
        return value
    if isinstance(value, tuple):
        return tuple(_act_value(g, v, action, kind) for v in value)
    if isinstance(value, (int, float)):
        return value
    if isinstance(value, DeltaValue):
        return replace(value, thom=act(g, value.thom, action))
    return act(g, value, action, kind=kind)


def _random_action(orders: Sequence[int], d0: int, d1: int, rng: np.random.Generator) -> GroupAction:
    """Diagonal action with V₀'s characters repeated on the first d₀ coordinates of V₁."""
    chars = GroupSpec(tuple(orders)).characters()
    char_v0 = [chars[j] for j in rng.integers(len(chars), size=d0)]
    char_v1 = char_v0 + [chars[j] for j in rng.integers(len(chars), size=d1 - d0)]
    return GroupAction(orders, char_v0, char_v1)


def _random_element(action: GroupAction, rng: np.random.Generator) -> Tuple[int, ...]:
    return tuple(int(rng.integers(n)) for n in action.orders)


def _label(orders: Sequence[int]) -> str:
    return "x".join(str(n) for n in orders)


def _renamed(f: FacialMapSpec, name: str) -> FacialMapSpec:
    return replace(f, name=name)


def _random_projector(d: int, k: int, rng: np.random.Generator) -> np.ndarray:
    frame = haar_unitary(d, rng)[:, d - k:]
    return frame @ adjoint(frame)


def _gapped_alpha(d: int, k: int, rng: np.random.Generator) -> np.ndarray:
    return hermitian_with_spectrum(gapped_spectrum(d, k, rng.uniform(0.2, 2.0), rng), rng)


def _inner_levels(cfg: SuiteConfig) -> List[int]:
    return [k for k in cfg.levels() if 1 <= k < cfg.d0]


# calculus


def calculus_checks(cfg: SuiteConfig) -> List[CheckRecord]:
    tol = cfg.tolerances()["tol_eq"]
    dims = list(range(2, max(cfg.d1, 6) + 1))

    def dim(i: int) -> int:
        return dims[i % len(dims)]

    def law(lhs_f: ScalarFunction, rhs: Callable[[np.ndarray], np.ndarray]) -> Trial:
        def trial(rng, i):
            a = random_hermitian(dim(i), rng)
            lhs, right = apply_to_spectrum(lhs_f, a), rhs(a)
            return deviation(lhs, right) / scale_of(lhs, right)
        return trial

    c = 1.75
    laws = {
        "sum": law(ScalarFunction(lambda x: np.sin(x) + np.cos(x), REALS, "sin+cos"),
                   lambda a: apply_to_spectrum(SIN, a) + apply_to_spectrum(COS, a)),
        "product": law(ScalarFunction(lambda x: np.sin(x) * np.cos(x), REALS, "sin·cos"),
                       lambda a: apply_to_spectrum(SIN, a) @ apply_to_spectrum(COS, a)),
        "compose": law(ScalarFunction(lambda x: np.exp(np.sin(x)), REALS, "exp∘sin"),
                       lambda a: apply_to_spectrum(EXP, apply_to_spectrum(SIN, a))),
        "constant": law(ScalarFunction(lambda x: c + 0.0 * x, REALS, "const"),
                        lambda a: c * np.eye(a.shape[0])),
    }
    records = [_run_trials(f"calculus.law.{name}", cfg, trial, tol) for name, trial in laws.items()]

    def exp_log(rng, i):
        a = random_hermitian(dim(i), rng)
        p = hermitian_with_spectrum(rng.uniform(0.05, 5.0, size=dim(i)), rng)
        return max(deviation(log_h(exp_h(a)), a) / scale_of(a), deviation(exp_h(log_h(p)), p) / scale_of(p))

    def random_map(rng, i) -> np.ndarray:
        d0 = dim(i)
        g = complex_gaussian(rng, d0 + i % 3, d0)
        if i % 3 == 0:
            v = complex_gaussian(rng, d0, 1)
            v = v / np.linalg.norm(v)
            g = g - g @ v @ adjoint(v)
        return g

    def polar(rng, i):
        g = random_map(rng, i)
        data = sigma(g)
        return max(
            deviation(data.sigma @ data.rho, g) / scale_of(g),
            deviation(adjoint(data.sigma) @ data.sigma, data.sigma_domain),
            deviation(data.rho, rho(g)) / scale_of(g),
        )

    def rho_norm(rng, i):
        g = random_map(rng, i)
        v = complex_gaussian(rng, g.shape[1], 1)
        return abs(np.linalg.norm(rho(g) @ v) - np.linalg.norm(g @ v)) / (scale_of(g) * np.linalg.norm(v))

    def operator_norms(rng, i):
        g = random_map(rng, i)
        a = random_hermitian(dim(i), rng)
        return max(
            _rel(operator_norm(g), float(eigenvalues(rho(g))[-1])),
            _rel(operator_norm(a), spectral_norm_bound(a)),
        )

    def lipschitz(rng, i):
        d = dim(i)
        a = random_hermitian(d, rng)
        b = a + (1e-3 if i % 2 else 1.0) * random_hermitian(d, rng)
        gap = float(np.max(np.abs(eigenvalues(a) - eigenvalues(b))))
        return max(0.0, gap - operator_norm(a - b)) / scale_of(a, b)

    def nesting(rng, i):
        d = dim(i)
        a = random_hermitian(d, rng) if i % 2 else hermitian_with_spectrum(
            gapped_spectrum(d, 1 + i % (d - 1), 10.0 * settings.TAU_GAP, rng), rng)
        worst = 0.0
        previous = P_k(a, 0)
        for k in range(1, d + 1):
            p = P_k(a, k)
            worst = max(worst, deviation(p @ previous, previous), deviation(p @ p, p), deviation(adjoint(p), p))
            previous = p
        return worst

    def kappa_round_trip(rng, i):
        d0 = dim(i)
        a = random_hermitian(d0, rng)
        theta = haar_isometry(d0 + i % 3, d0, rng)
        a2, theta2 = kappa_inv(kappa(a, theta))
        return max(deviation(a2, a) / scale_of(a), deviation(theta2, theta))

    def courant_fischer(rng, i):
        # sampled subspaces never beat e_j; the top eigenframe attains it
        d = 1 + i % 3
        a = random_hermitian(d, rng)
        eig = hermitian_eig(a)
        worst = 0.0
        for j in range(d):
            m = d - j
            sampled = max(float(eigenvalues(restrict(a, haar_isometry(d, m, rng)))[0])
                          for _ in range(COURANT_FISCHER_FRAMES))
            attained = float(eigenvalues(restrict(a, eig.vectors[:, j:]))[0])
            worst = max(worst, sampled - eig.values[j], abs(attained - eig.values[j]))
        return worst

    def cluster_stability(rng, i):
        d = dim(i)
        values = np.sort(rng.standard_normal(d) * 2.0)
        values[1] = values[0]
        if d >= 4:
            values[3] = values[2]
        frame = haar_unitary(d, rng)
        a = frame @ np.diag(values) @ adjoint(frame)
        a = (a + adjoint(a)) / 2
        other = frame.copy()
        other[:, :2] = frame[:, :2] @ haar_unitary(2, rng)
        expected = other @ np.diag(np.exp(values)) @ adjoint(other)
        found = apply_to_spectrum(EXP, a)
        return deviation(found, expected) / scale_of(found, expected)

    records += [
        _run_trials("calculus.exp-log", cfg, exp_log, tol),
        _run_trials("calculus.polar", cfg, polar, tol),
        _run_trials("calculus.rho-norm", cfg, rho_norm, tol),
        _run_trials("calculus.operator-norm", cfg, operator_norms, tol),
        _run_trials("calculus.eigenvalue-lipschitz", cfg, lipschitz, tol, trials=cfg.trials * 50),
        _run_trials("calculus.projector-nesting", cfg, nesting, tol),
        _run_trials("calculus.kappa-round-trip", cfg, kappa_round_trip, 10 * tol),
        _run_trials("calculus.courant-fischer", cfg, courant_fischer, COURANT_FISCHER_TOL),
        _run_trials("calculus.cluster-stability", cfg, cluster_stability, tol),
    ]
    return records


# facial


def _degree_record(check_id: str, compute: Callable[[], int], expected: int) -> CheckRecord:
    try:
        found = compute()
    except IsotowerError as e:
        record = CheckRecord(id=check_id, status=FAIL, witness={"error": f"{type(e).__name__}: {e}"},
                             metrics={"expected": expected})
        _log_record(record)
        return record
    record = CheckRecord(
        id=check_id,
        status=PASS if found == expected else FAIL,
        witness=None if found == expected else {"degree": found, "expected": expected},
        metrics={"degree": found, "expected": expected},
    )
    _log_record(record)
    return record


def _sphere_degree(make: Callable[[int, int], FacialMapSpec], d0: int) -> int:
    d0 = max(d0, 2)
    k = d0 - 1
    return degree_on_sphere(sphere_restriction(make(d0, k), d0, k))


# name → (degree as a function of d0, expected degree)
DEGREE_BUILTINS: Dict[str, Tuple[Callable[[int], int], int]] = {
    "identity": (lambda d0: degree_on_diagonal(identity_map(d0)), 1),
    "reflection": (lambda d0: degree_on_diagonal(reflection_map()), -1),
    "square": (lambda d0: degree_on_diagonal(square_map(d0)), 1),
    "chi-map": (lambda d0: degree_on_diagonal(chi_map(d0)), 1),
    "ndr-map": (lambda d0: degree_on_diagonal(e_map(d0)), 1),
    "g-double-prime": (lambda d0: degree_on_sphere(g_double_prime), 1),
    "f-bar-prime": (lambda d0: degree_on_sphere(f_bar_prime), 1),
    "r-lift": (lambda d0: _sphere_degree(r_lift_map, d0), 1),
    "phi-lift": (lambda d0: _sphere_degree(phi_lift_map, d0), 1),
}


def builtin_degree(name: str, d0: int = 3) -> int:
    if name not in DEGREE_BUILTINS:
        raise UsageError(f"unknown map {name!r}; known: {sorted(DEGREE_BUILTINS)}")
    compute, _ = DEGREE_BUILTINS[name]
    return compute(d0)


def _log_conjugate(f: FacialMapSpec) -> FacialMapSpec:
    """A map on D₊ read as a plain map on D through the log/exp identifications."""
    def evaluator(t: np.ndarray):
        out, _ = f.evaluate(exp_identification(t))
        return log_identification(out)

    return FacialMapSpec(f.d_in, f.d_out, evaluator, variant=PLAIN, name=f"log({f.name})")


def facial_checks(cfg: SuiteConfig) -> List[CheckRecord]:
    tol = cfg.tolerances()["tol_eq"]
    d = cfg.d0
    maps = [
        identity_map(d),
        _renamed(identity_map(d, POSITIVE), "identity-positive"),
        shift_map(d, 0.5),
        square_map(d),
        scale_map(d, 2.0),
        collapse_bottom_map(d),
        chi_map(d),
        e_map(d),
        reflection_map(),
    ]
    maps += [_renamed(hat(square_map(2), n), f"hat(square).d{n + 1}") for n in range(1, 6)]
    for k in _inner_levels(cfg):
        maps += [_renamed(phi_lift_map(d, k), f"phi-lift.k{k}"), _renamed(r_lift_map(d, k), f"r-lift.k{k}")]
    records: List[CheckRecord] = []
    for f in maps:
        records += _collect(check_facial(f, cfg.trials, seed_for(cfg.seed, f"facial.{f.name}")))

    control = check_facial(swap_map(max(d, 2)), cfg.trials, seed_for(cfg.seed, "facial.swap"))
    records.append(_exact_record(
        "facial.swap.detected", 1,
        None if not control.ok else {"reason": "the order-reversing control passed the facial checks"},
        detected=[c.id for c in control.failed],
    ))

    def eigenvalue_square(rng, i):
        f = square_map(d) if i % 2 else shift_map(d, 0.5)
        a = rho(complex_gaussian(rng, d, d)) if i % 2 else random_hermitian(d, rng)
        out, _ = frak_A(f, a)
        expected, _ = f.evaluate(eta(a))
        return float(np.max(np.abs(eta(out) - expected))) / scale_of(out)

    def presentation(rng, i):
        values = np.sort(np.abs(rng.standard_normal(d)) * 2.0)
        if d >= 2:
            values[1] = values[0]
        u = haar_unitary(d, rng)
        u2 = u.copy()
        if d >= 2:
            u2[:, :2] = u[:, :2] @ haar_unitary(2, rng)
        f = square_map(d)
        image, _ = f.evaluate(values)
        out, _ = frak_A(f, nu(u, values))
        first, second = nu(u, image), nu(u2, image)
        return max(deviation(out, first), deviation(first, second)) / scale_of(out)

    def b_square(rng, i):
        f = square_map(d) if i % 2 else scale_map(d, 2.0)
        theta = haar_isometry(cfg.d1, d, rng)
        values = np.abs(rng.standard_normal(d)) * 2.0
        if i % 3 == 0:
            values[0] = 0.0
        a = hermitian_with_spectrum(np.sort(values), rng)
        a = (a + adjoint(a)) / 2
        lhs, _ = frak_B(f, mu(theta, a))
        inner, _ = frak_A(f, a)
        rhs = mu(theta, inner)
        return deviation(lhs, rhs) / scale_of(lhs, rhs)

    records += [
        _run_trials("facial.frak-A.eigenvalues", cfg, eigenvalue_square, tol),
        _run_trials("facial.frak-A.presentation", cfg, presentation, tol),
        _run_trials("facial.frak-B.square", cfg, b_square, tol),
    ]

    for name, (compute, expected) in DEGREE_BUILTINS.items():
        records.append(_degree_record(f"facial.degree.{name}", lambda c=compute: c(d), expected))

    for f in (square_map(d), scale_map(d, 3.0), identity_map(d, POSITIVE)):
        records.append(_degree_record(
            f"facial.degree.log-invariance.{f.name}",
            lambda f=f: degree_on_diagonal(_log_conjugate(f)),
            degree_on_diagonal(f),
        ))
    return records


# ndr


def ndr_checks(cfg: SuiteConfig) -> List[CheckRecord]:
    tol = cfg.tolerances()["tol_eq"]
    scalar_trials = max(cfg.trials, 1000)
    records: List[CheckRecord] = []
    pairs = [(halfdisc_pair(), scalar_trials), (ndr_D2(), scalar_trials), (ndr_hom(cfg.d0, cfg.d1), cfg.trials)]
    for pair, trials in pairs:
        records += _collect(check_ndr_axioms(pair, trials, seed_for(cfg.seed, f"ndr.{pair.name}"), tol=10 * tol))

    for pair in (halfdisc_pair(), ndr_D2()):
        broken = with_u(pair, lambda x: 0.5, name=f"{pair.name}-constant-u")
        injected = check_ndr_axioms(broken, scalar_trials, seed_for(cfg.seed, f"ndr.{broken.name}"), tol=10 * tol)
        records.append(_exact_record(
            f"ndr.{pair.name}.fault-detected", 1,
            None if not injected.ok else {"reason": "constant u passed the zero-set condition"},
            detected=[c.id for c in injected.failed],
        ))

    hom = ndr_hom(cfg.d0, cfg.d1)

    def equivariance(rng, i):
        g = complex_gaussian(rng, cfg.d1, cfg.d0)
        if i % 3 == 0:
            g[:, 0] = 0.0
        u0, u1 = haar_unitary(cfg.d0, rng), haar_unitary(cfg.d1, rng)
        t = float(rng.uniform(0.0, 1.0))
        moved = hom.h(t, u1 @ g @ adjoint(u0))
        image = hom.h(t, g)
        if image is BASEPOINT or moved is BASEPOINT:
            return 0.0 if image is moved else math.inf
        return deviation(moved, u1 @ image @ adjoint(u0)) / scale_of(moved, image)

    def boundary(rng, i):
        s = float(np.abs(rng.standard_normal()) * 2.0)
        diagonal = phi_conformal((s, s))
        semicircle = phi_conformal((0.0, s))
        return max(abs(diagonal.imag), abs(diagonal.real) - 1.0, abs(abs(semicircle) - 1.0), -semicircle.imag)

    records += [
        _run_trials(f"ndr.{hom.name}.equivariance", cfg, equivariance, tol),
        _run_trials("ndr.phi.boundary", cfg, boundary, tol),
    ]
    for time in (0.0, 0.25, 0.5, 1.0):
        h = d2_homotopy_map(time)
        records += _collect(check_facial(h, cfg.trials, seed_for(cfg.seed, f"ndr.{h.name}")))
    return records


# tower


def _homotopy_point(name: str, cfg: SuiteConfig, rng: np.random.Generator, i: int):
    d0, d1 = cfg.d0, cfg.d1
    if name == TOP_1:
        return random_injective(d1, d0, rng)
    if name == TOP_2:
        return random_tower_point(d0, d1, d0, rng)
    levels = _inner_levels(cfg)
    if not levels:
        return None
    k = levels[i % len(levels)]
    if name == MID_1:
        return random_thom_point(d0, d1, k, rng)
    if name == MID_2:
        return random_tower_point(d0, d1, k, rng)
    return random_tower_point(d0, d1, k - 1, rng)


def _tower_equivariance(cfg: SuiteConfig, orders: Tuple[int, ...]) -> Trial:
    d0, d1 = cfg.d0, cfg.d1
    levels = _inner_levels(cfg)

    def trial(rng, i):
        action = _random_action(orders, d0, d1, rng)
        g = _random_element(action, rng)

        def moved(value):
            return _act_value(g, value, action)

        x_top = random_tower_point(d0, d1, d0, rng)
        x_low = random_tower_point(d0, d1, d0 - 1, rng)
        gamma = random_injective(d1, d0, rng)
        t = float(rng.uniform(0.0, 2.0))
        pairs = [
            (pi_k(moved(x_top)), moved(pi_k(x_top))),
            (tau(moved(x_low)), moved(tau(x_low))),
            (chi(moved(gamma)), moved(chi(gamma))),
            (null_homotopy(TOP_1, t, moved(gamma)), moved(null_homotopy(TOP_1, t, gamma))),
            (null_homotopy(TOP_2, t, moved(x_top)), moved(null_homotopy(TOP_2, t, x_top))),
        ]
        if levels:
            k = levels[i % len(levels)]
            x = random_tower_point(d0, d1, k, rng)
            y = random_tower_point(d0, d1, k - 1, rng)
            z = random_thom_point(d0, d1, k, rng)
            zn = random_thom_point(d0, d1, k, rng, injective=False)
            s = float(rng.standard_normal())
            lift = r_lift_map(d0, k)
            pairs += [
                (q_k(moved(x)), moved(q_k(x))),
                (r_k(moved(z)), moved(r_k(z))),
                (pi_k(moved(x)), moved(pi_k(x))),
                (f_k(moved(y), k), moved(f_k(y, k))),
                (g_k(s, moved(zn)), moved(g_k(s, zn))),
                (phi_k_map(moved(z)), moved(phi_k_map(z))),
                (frak_C(lift, moved(z)), moved(frak_C(lift, z))),
                (delta_k_map(moved(y), k), moved(delta_k_map(y, k))),
                (null_homotopy(MID_1, t, moved(z)), moved(null_homotopy(MID_1, t, z))),
                (null_homotopy(MID_2, t, moved(x)), moved(null_homotopy(MID_2, t, x))),
            ]
        devs = [_value_deviation(a, b) for a, b in pairs]
        worst = int(np.argmax(devs))
        return devs[worst], {"pair": worst, "element": list(g)}

    return trial


def tower_checks(cfg: SuiteConfig) -> List[CheckRecord]:
    tol = cfg.tolerances()["tol_eq"]
    d0, d1 = cfg.d0, cfg.d1
    records: List[CheckRecord] = []

    for k in _inner_levels(cfg):
        def level_point(rng, i, level=k):
            return random_tower_point(d0, d1, level, rng, near_degenerate=(i % 4 == 3))

        def rq(rng, i, k=k):
            x = level_point(rng, i)
            return point_deviation(r_k(q_k(x)), x)

        def qr(rng, i, k=k):
            z = random_thom_point(d0, d1, k, rng)
            return thom_deviation(q_k(r_k(z)), z)

        def gf(rng, i, k=k):
            x = random_tower_point(d0, d1, k - 1, rng, near_degenerate=(i % 4 == 3))
            t, z = f_k(x, k)
            return point_deviation(g_k(t, z), x)

        def fg(rng, i, k=k):
            z = random_thom_point(d0, d1, k, rng, injective=False)
            t = float(rng.standard_normal())
            t2, z2 = f_k(g_k(t, z), k)
            return max(_rel(t, t2), thom_deviation(z2, z))

        def range_of_r(rng, i, k=k):
            z = random_thom_point(d0, d1, k, rng)
            return deviation(P_k(r_k(z).alpha, k), z.W)

        def delta(rng, i, k=k):
            if i % 2 == 0:
                # a point of Y_k: the cut below the top k eigenvalues is closed
                values = np.sort(rng.standard_normal(d0) * 2.0)
                values[d0 - k] = values[d0 - k - 1]
                x = make_tower_point(k - 1, hermitian_with_spectrum(values, rng), haar_isometry(d1, d0, rng))
                value = delta_k_map(x, k)
                return (0.0, None) if value is BASEPOINT else (1.0, {"expected": "BASEPOINT"})
            x = random_tower_point(d0, d1, k - 1, rng)
            value = delta_k_map(x, k)
            if value is BASEPOINT or not value.twisted:
                return 1.0, {"expected": "twisted suspension point"}
            return _value_deviation((value.t, value.thom), f_k(x, k))

        def phi_is_frak_c(rng, i, k=k):
            z = random_thom_point(d0, d1, k, rng, injective=bool(i % 2))
            return _value_deviation(frak_C(phi_lift_map(d0, k), z), phi_k_map(z))

        def r_is_frak_c(rng, i, k=k):
            injective = bool(i % 4)
            z = random_thom_point(d0, d1, k, rng, injective=injective)
            lhs = frak_C(r_lift_map(d0, k), z)
            if not injective:
                return (0.0, None) if lhs is BASEPOINT else (1.0, {"expected": "BASEPOINT"})
            return _value_deviation(lhs, r_k(z))

        def pq_square(rng, i, k=k):
            lam = haar_unitary(d0, rng)
            mu_ = haar_isometry(d1, k, rng)
            s = np.sort(rng.standard_normal(d0 - k) * 2.0)
            t = np.sort(rng.uniform(0.3, 3.0, size=k))
            lift = phi_lift_map(d0, k)
            image, _ = lift.evaluate(np.concatenate([s, t]))
            return _value_deviation(frak_C(lift, p_map(lam, mu_, s, t, k)), q_map(lam, mu_, image, k))

        def chart(rng, i, k=k):
            w = _random_projector(d0, k, rng)
            ch = GrassmannChart(w)
            a = 0.5 * complex_gaussian(rng, d0 - k, k)
            pi = ch(a)
            check_projector(pi)
            if projector_rank(pi) != k:
                return 1.0, {"rank": projector_rank(pi)}
            return deviation(ch.inverse(pi), a) / scale_of(a)

        def decompose(rng, i, k=k):
            a = random_hermitian(d0, rng)
            split = decompose_s(a, _random_projector(d0, k, rng))
            top, bottom, off = split.compact()
            if top.shape != (k, k) or bottom.shape != (d0 - k, d0 - k) or off.shape != (d0 - k, k):
                return 1.0, {"shapes": [top.shape, bottom.shape, off.shape]}
            return deviation(recompose(split), a) / scale_of(a)

        records += [
            _run_trials(f"tower.r-q.k{k}", cfg, rq, 10 * tol),
            _run_trials(f"tower.q-r.k{k}", cfg, qr, 10 * tol),
            _run_trials(f"tower.g-f.k{k}", cfg, gf, 10 * tol),
            _run_trials(f"tower.f-g.k{k}", cfg, fg, 10 * tol),
            _run_trials(f"tower.range-of-r.k{k}", cfg, range_of_r, tol),
            _run_trials(f"tower.delta.k{k}", cfg, delta, tol),
            _run_trials(f"tower.phi-frak-C.k{k}", cfg, phi_is_frak_c, tol),
            _run_trials(f"tower.r-frak-C.k{k}", cfg, r_is_frak_c, tol),
            _run_trials(f"tower.p-q-square.k{k}", cfg, pq_square, tol),
            _run_trials(f"tower.grassmann-chart.k{k}", cfg, chart, 10 * tol),
            _run_trials(f"tower.decompose.k{k}", cfg, decompose, tol),
        ]

    def tau_round_trip(rng, i):
        x = random_tower_point(d0, d1, d0 - 1, rng, near_degenerate=(i % 4 == 3))
        t, delta_ = tau(x)
        forward = point_deviation(tau_inv(t, delta_), x)
        g = complex_gaussian(rng, d1, d0)
        g[:, 0] = 0.0
        s = float(rng.standard_normal())
        back = _value_deviation(tau(tau_inv(s, g)), (s, g))
        return max(forward, back)

    def kappa_round_trip(rng, i):
        x = top_point(random_hermitian(d0, rng), haar_isometry(d1, d0, rng))
        alpha, theta = kappa_inv(x.beta)
        return max(deviation(alpha, x.alpha) / scale_of(x.alpha), deviation(theta, x.theta()))

    def to_zero(rng, i):
        x = random_tower_point(d0, d1, d0, rng)
        worst = x.invariant_deviation()
        while x.k > 0:
            x = pi_k(x)
            worst = max(worst, x.invariant_deviation())
        return max(worst, operator_norm(x.beta))

    def chi_square(rng, i):
        x = random_tower_point(d0, d1, d0, rng)
        return _value_deviation(tau(pi_k(x)), chi(x.beta))

    def hom_self(rng, i):
        a = complex_gaussian(rng, d0, d0)
        real, imag = split_hom_self(a)
        return max(
            deviation(join_hom_self(real, imag), a) / scale_of(a),
            deviation(real, adjoint(real)) / scale_of(a),
            deviation(imag, adjoint(imag)) / scale_of(a),
        )

    records += [
        _run_trials("tower.tau-round-trip", cfg, tau_round_trip, 10 * tol),
        _run_trials("tower.kappa-round-trip", cfg, kappa_round_trip, 10 * tol),
        _run_trials("tower.project-to-zero", cfg, to_zero, tol),
        _run_trials("tower.chi-square", cfg, chi_square, tol),
        _run_trials("tower.hom-self-split", cfg, hom_self, tol),
    ]

    for name in FAMILIES:
        def endpoint(rng, i, name=name):
            point = _homotopy_point(name, cfg, rng, i)
            if point is None:
                return None
            return _value_deviation(null_homotopy(name, 0.0, point), composite(name, point))

        def escape(rng, i, name=name):
            point = _homotopy_point(name, cfg, rng, i)
            if point is None:
                return None
            start, end = escape_norm(name, 0.0, point), escape_norm(name, ESCAPE_TIME, point)
            ratio = end / start if start > 0.0 else math.inf
            return (0.0 if ratio >= ESCAPE_FACTOR else 1.0), {"ratio": ratio}

        records += [
            _run_trials(f"tower.homotopy.{name}.endpoint", cfg, endpoint, 10 * tol),
            _run_trials(f"tower.homotopy.{name}.escape", cfg, escape, 0.0, time=ESCAPE_TIME),
        ]

    orders_list = [tuple(cfg.group)] if cfg.group else EQUIVARIANCE_GROUPS
    for orders in orders_list:
        records.append(_run_trials(f"tower.equivariance.{_label(orders)}", cfg, _tower_equivariance(cfg, orders), tol))
    return records


# miller


def _miller_equivariance(cfg: SuiteConfig, orders: Tuple[int, ...]) -> Trial:
    d0, d1 = cfg.d0, cfg.d1
    levels = _inner_levels(cfg)

    def trial(rng, i):
        if not levels:
            return None
        k = levels[i % len(levels)]
        action = _random_action(orders, d0, d1, rng)
        g = _random_element(action, rng)
        alpha = _gapped_alpha(d0, k, rng)
        p = random_filtration_point(d0, d1, k, rng)
        z = random_thom_point(d0, d1, k, rng)
        w = P_k(alpha, k)
        galpha = act(g, alpha, action, kind="self")
        gp, gz = act(g, p, action), act(g, z, action)
        x = res_k_map(alpha, p, k)
        pairs = [
            (res_k_map(galpha, gp, k), act(g, x, action)),
            (float(filtration_level(gp)), float(filtration_level(p))),
            (cayley(galpha), act(g, cayley(alpha), action, kind="self")),
            (gamma_section(act(g, w, action, kind="self"), d1), act(g, gamma_section(w, d1), action)),
            (g1_map(gz), act(g, g1_map(z), action, kind="self")),
        ]
        try:
            pairs.append((g0_map(gz), act(g, g0_map(z), action, kind="self")))
        except NotInjective:
            pass
        if in_chart_B(x):
            pairs.append((res_k_inverse_on_B(act(g, x, action)), act(g, res_k_inverse_on_B(x), action)))
        devs = [_value_deviation(a, b) for a, b in pairs]
        worst = int(np.argmax(devs))
        return devs[worst], {"pair": worst, "element": list(g)}

    return trial


def miller_checks(cfg: SuiteConfig) -> List[CheckRecord]:
    tol = cfg.tolerances()["tol_eq"]
    d0, d1 = cfg.d0, cfg.d1
    records: List[CheckRecord] = []

    for k in _inner_levels(cfg):
        def res_inverse(rng, i, k=k):
            x = random_tower_point(d0, d1, k, rng)
            if not in_chart_B(x):
                return None
            p = res_k_inverse_on_B(x)
            level = filtration_level(p)
            if level > k:
                return math.inf, {"filtration_level": level}
            isometry = deviation(adjoint(p.phi) @ p.phi, np.eye(d0))
            return max(isometry, point_deviation(res_k_map(x.alpha, p, k), x))

        def chart_equivalence(rng, i, k=k):
            alpha = _gapped_alpha(d0, k, rng)
            p = FiltrationPoint(inclusion(d1, d0)) if i % 4 == 0 else random_filtration_point(d0, d1, k, rng)
            a_side, b_side = in_chart_A(alpha, p, k), in_chart_B(res_k_map(alpha, p, k))
            return (0.0, None) if a_side == b_side else (1.0, {"chart_A": a_side, "chart_B": b_side})

        def diffeo(rng, i, k=k):
            w = _random_projector(d0, k, rng)
            p = random_filtration_point(d0, d1, k, rng, W=w)
            delta = gamma_diffeo(w, p.phi)
            return max(
                deviation(gamma_diffeo_inv(w, delta), p.phi),
                deviation(delta @ (np.eye(d0) - w), np.zeros_like(delta)),
            )

        def section(rng, i, k=k):
            p = gamma_section(_random_projector(d0, k, rng), d1)
            if filtration_level(p) != k:
                return 1.0, {"filtration_level": filtration_level(p)}
            return deviation(adjoint(p.phi) @ p.phi, np.eye(d0))

        def endpoints(rng, i, k=k):
            z = random_thom_point(d0, d1, k, rng)
            try:
                start = g0_map(z)
            except NotInjective:
                return None
            end = g1_map(z)
            return max(
                deviation(g0_g1_homotopy(0.0, z), start) / scale_of(start),
                deviation(g0_g1_homotopy(1.0, z), end) / scale_of(end),
            )

        def res_pi(rng, i, k=k):
            alpha = _gapped_alpha(d0, k, rng)
            p = random_filtration_point(d0, d1, k, rng)
            return point_deviation(pi_k(res_k_map(alpha, p, k)), make_tower_point(k - 1, alpha, p.phi))

        records += [
            _run_trials(f"miller.res-inverse.k{k}", cfg, res_inverse, 10 * tol),
            _run_trials(f"miller.chart-equivalence.k{k}", cfg, chart_equivalence, 0.0),
            _run_trials(f"miller.gamma-diffeo.k{k}", cfg, diffeo, tol),
            _run_trials(f"miller.gamma-section.k{k}", cfg, section, tol),
            _run_trials(f"miller.g0-g1.k{k}", cfg, endpoints, 10 * tol),
            _run_trials(f"miller.res-pi.k{k}", cfg, res_pi, tol),
        ]

    def cayley_unitary(rng, i):
        delta = random_hermitian(d0, rng)
        u = cayley(delta)
        return max(deviation(adjoint(u) @ u, np.eye(d0)), deviation(cayley_inv(u), delta) / scale_of(delta))

    records.append(_run_trials("miller.cayley", cfg, cayley_unitary, 10 * tol))

    records += _collect(top_splitting_derivative_check(1e-4, d0))
    coarse, fine = derivative_deviation(d0, 1e-3), derivative_deviation(d0, 5e-4)
    records.append(_exact_record(
        f"miller.derivative-convergence.d{d0}", 1,
        None if fine <= 0.5 * coarse + 1e-12 else {"coarse": coarse, "fine": fine},
        coarse=coarse, fine=fine,
    ))

    orders_list = [tuple(cfg.group)] if cfg.group else EQUIVARIANCE_GROUPS
    for orders in orders_list:
        records.append(_run_trials(f"miller.equivariance.{_label(orders)}", cfg, _miller_equivariance(cfg, orders), tol))
    return records


# ktheory


def _groups(cfg: SuiteConfig) -> List[GroupSpec]:
    groups = [GroupSpec(tuple(cfg.group))] if cfg.group else [GroupSpec(o) for o in DEFAULT_GROUPS]
    for group in groups:
        if group.order > settings.MAX_GROUP_ORDER:
            raise TooLarge(f"|G| = {group.order} exceeds {settings.MAX_GROUP_ORDER}")
    return groups


def _pair_grid(group: GroupSpec) -> List[Tuple[Any, Any]]:
    """(V₀, V₁) with 1 ≤ dim V₀ ≤ 2 and dim V₀ ≤ dim V₁ ≤ 3."""
    pairs = []
    for v0 in all_representations(group, 2, min_dim=1):
        for v1 in all_representations(group, 3, min_dim=v0.dim):
            pairs.append((v0, v1))
    return pairs


def _random_rep_element(group: GroupSpec, rng: np.random.Generator) -> RepElement:
    return RepElement(group, {chi: int(rng.integers(-3, 4)) for chi in group.characters()})


def ktheory_checks(cfg: SuiteConfig) -> List[CheckRecord]:
    records: List[CheckRecord] = []
    for group in _groups(cfg):
        label = _label(group.orders)
        small = all_representations(group, 3)

        bad = next((v for v in small if f_V(v) != f_V_product(v)), None)
        records.append(_exact_record(
            f"ktheory.f-product.{label}", len(small),
            None if bad is None else {"V": bad.to_json(), "sum": f_V(bad).to_json(), "product": f_V_product(bad).to_json()},
        ))

        pairs = [(v, w) for v in all_representations(group, 2) for w in all_representations(group, 2)]
        bad_pair = next(((v, w) for v, w in pairs if not f_product_check(v, w)), None)
        records.append(_exact_record(
            f"ktheory.f-multiplicative.{label}", len(pairs),
            None if bad_pair is None else {"V": bad_pair[0].to_json(), "W": bad_pair[1].to_json()},
        ))

        witness = None
        for v in small:
            f = f_V(v)
            expected = {v.dim - j: (-1) ** j * math.comb(v.dim, j) for j in range(v.dim + 1)}
            at_identity = all(abs(character_value(c, group.identity()) - augmentation(c)) < 1e-9 for c in f.coeffs)
            if f.augmented() != expected or not at_identity:
                witness = {"V": v.to_json(), "augmented": f.augmented()}
                break
        records.append(_exact_record(f"ktheory.augmentation.{label}", len(small), witness))

        grid = _pair_grid(group)
        witness, subreps = None, 0
        for v0, v1 in _progress(grid, f"ktheory.residue-subrep.{label}"):
            check_scale(group, v0, v1)
            sub = is_subrep(v0, v1)
            subreps += sub
            values = [residue(RepPoly.monomial(group, j), v0, v1) for j in range(v0.dim + 2)]
            vanishes = all(x.is_zero() for x in values)
            if vanishes != sub and witness is None:
                witness = {"V0": v0.to_json(), "V1": v1.to_json(), "subrep": sub,
                           "residues": [x.to_json() for x in values]}
        records.append(_exact_record(f"ktheory.residue-subrep.{label}", len(grid), witness, subrep_pairs=subreps))

        def linearity(rng, i, group=group):
            d0 = int(rng.integers(1, 3))
            v0 = random_representation(group, d0, rng)
            v1 = random_representation(group, int(rng.integers(d0, 4)), rng)
            a = _random_rep_element(group, rng)
            g = RepPoly(group, [_random_rep_element(group, rng) for _ in range(int(rng.integers(1, 5)))],
                        low=int(rng.integers(-1, 2)))
            if residue(g * a, v0, v1) == a * residue(g, v0, v1):
                return 0.0
            return 1.0, {"V0": v0.to_json(), "V1": v1.to_json(), "a": a.to_json(), "g": g.to_json()}

        records.append(_run_trials(f"ktheory.residue-linearity.{label}", cfg, linearity, 0.0))

        kernel_cases, witness = 0, None
        for v0 in all_representations(group, 1, min_dim=1):
            for v1 in all_representations(group, 2, min_dim=1):
                kernel_cases += 1
                report = restriction_kernel_check(v0, v1)
                if not report.ok and witness is None:
                    witness = {"V0": v0.to_json(), "V1": v1.to_json(), "record": report.failed[0].witness}
        records.append(_exact_record(f"ktheory.restriction-kernel.{label}", kernel_cases, witness))

        witness = None
        for v0, v1 in grid:
            complex_, report = tower_koszul(v0, v1)
            if not report.ok and witness is None:
                witness = {"V0": v0.to_json(), "V1": v1.to_json(), "failed": [c.id for c in report.failed]}
        records.append(_exact_record(f"ktheory.koszul.{label}", len(grid), witness))

        def koszul_random(rng, i, group=group):
            complex_ = koszul_build([_random_rep_element(group, rng) for _ in range(3)], group)
            return 0.0 if complex_.d_squared_zero() else 1.0

        records.append(_run_trials(f"ktheory.koszul-random.{label}", cfg, koszul_random, 0.0))
    return records


SUITES: Dict[str, Callable[[SuiteConfig], List[CheckRecord]]] = {
    "calculus": calculus_checks,
    "facial": facial_checks,
    "ndr": ndr_checks,
    "tower": tower_checks,
    "miller": miller_checks,
    "ktheory": ktheory_checks,
}

# checks that never read d0 or d1
CELL_FREE = {"ktheory"}


def _in_cell(record: CheckRecord, d0: int, d1: int) -> CheckRecord:
    return record.model_copy(update={
        "id": f"{record.id}[{d0}x{d1}]",
        "metrics": {**record.metrics, "d0": d0, "d1": d1},
    })


def run_suite(name: str, cfg: Optional[SuiteConfig] = None) -> Report:
    """
    Run one suite, or every suite for name == 'all', into a single report.

    A config without d0 sweeps every grid cell and suffixes each record id
    with its cell; suites in CELL_FREE run once.  Tolerance overrides are in
    force for the whole run.
    """
    cfg = cfg or SuiteConfig()
    if name != ALL and name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; known: {sorted(SUITES) + [ALL]}")
    names = list(SUITES) if name == ALL else [name]
    cells = cfg.cells()
    records: List[CheckRecord] = []
    with settings.overridden(cfg.tol):
        for suite in names:
            for d0, d1 in cells[:1] if suite in CELL_FREE else cells:
                cell = cfg.at(d0, d1)
                logger.info(f"Running {suite} (d0={d0}, d1={d1}, trials={cfg.trials}, seed={cfg.seed})")
                found = SUITES[suite](cell)
                if cfg.sweeps() and suite not in CELL_FREE:
                    found = [_in_cell(record, d0, d1) for record in found]
                records += found
    report = new_report(name, records, config=cfg, cells=[list(c) for c in cells])
    marker = "✅" if report.ok else "❌"
    logger.info(f"{marker} {name}: {report.summary.pass_} pass, {report.summary.fail} fail, {report.summary.skip} skip")
    return report
