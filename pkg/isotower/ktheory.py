# isotower/ktheory.py
"""
Exact representation-ring arithmetic for finite abelian groups.

G = ∏ Z/n_j; characters are tuples mod the orders and every representation
is a multiset of characters.  R(G) elements are integer combinations of
characters, R(G)[T, T⁻¹] elements are RepPoly.  The residue of g is the
T^{d₀−1} coefficient of g·f_{V₁} reduced modulo f_{V₀}.
"""

import cmath
import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import settings
from isotower.errors import InvalidInput, NotInvertible, TooLarge
from isotower.lattice import hermite_normal_form, kernel, same_lattice, to_lists
from isotower.report import FAIL, PASS, CheckRecord, Report, new_report

logger = logging.getLogger(__name__)

Character = Tuple[int, ...]


@dataclass(frozen=True)
class GroupSpec:
    """A product of cyclic groups Z/n_1 × … × Z/n_r."""
    orders: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))
        if not self.orders or any(n < 1 for n in self.orders):
            raise InvalidInput(f"cyclic orders must be positive, got {self.orders}")

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """'2x3' → Z/2 × Z/3; '1' or 'trivial' → the trivial group."""
        text = text.strip().lower()
        if text in ("", "1", "trivial"):
            return cls((1,))
        try:
            return cls(tuple(int(part) for part in text.split("x")))
        except ValueError:
            raise InvalidInput(f"cannot parse group {text!r}; expected e.g. 2x3")

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    def characters(self) -> List[Character]:
        return [tuple(c) for c in itertools.product(*(range(n) for n in self.orders))]

    def index(self, chi: Character) -> int:
        i = 0
        for c, n in zip(chi, self.orders):
            i = i * n + c
        return i

    def normalize(self, chi: Sequence[int]) -> Character:
        c = tuple(int(x) for x in chi)
        if len(c) != len(self.orders):
            raise InvalidInput(f"character {c} does not match orders {self.orders}")
        return tuple(x % n for x, n in zip(c, self.orders))

    def identity(self) -> Character:
        return tuple(0 for _ in self.orders)

    def mul(self, a: Character, b: Character) -> Character:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.orders))

    def inv(self, a: Character) -> Character:
        return tuple((-x) % n for x, n in zip(a, self.orders))

    def value(self, chi: Character, g: Sequence[int]) -> complex:
        """χ(g) = exp(2πi Σ χ_j g_j / n_j)"""
        g = self.normalize(g)
        return cmath.exp(2j * math.pi * sum(c * x / n for c, x, n in zip(chi, g, self.orders)))


class RepElement:
    """An element of R(G): integer coefficients on characters."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: GroupSpec, coeffs: Optional[Dict[Character, int]] = None):
        self.group = group
        clean: Dict[Character, int] = {}
        for chi, c in (coeffs or {}).items():
            c = int(c)
            if c:
                key = group.normalize(chi)
                clean[key] = clean.get(key, 0) + c
        self.coeffs = {k: v for k, v in clean.items() if v}

    @classmethod
    def zero(cls, group: GroupSpec) -> "RepElement":
        return cls(group)

    @classmethod
    def one(cls, group: GroupSpec) -> "RepElement":
        return cls(group, {group.identity(): 1})

    @classmethod
    def char(cls, group: GroupSpec, chi: Sequence[int], coeff: int = 1) -> "RepElement":
        return cls(group, {tuple(chi): coeff})

    def _coerce(self, other) -> "RepElement":
        if isinstance(other, RepElement):
            if other.group != self.group:
                raise InvalidInput("representation ring elements of different groups")
            return other
        if isinstance(other, (int, np.integer)):
            return RepElement(self.group, {self.group.identity(): int(other)})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.coeffs)
        for chi, c in other.coeffs.items():
            out[chi] = out.get(chi, 0) + c
        return RepElement(self.group, out)

    __radd__ = __add__

    def __neg__(self):
        return RepElement(self.group, {chi: -c for chi, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Character, int] = {}
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                ab = self.group.mul(a, b)
                out[ab] = out.get(ab, 0) + x * y
        return RepElement(self.group, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.group, tuple(sorted(self.coeffs.items()))))

    def is_zero(self) -> bool:
        return not self.coeffs

    def unit_inverse(self) -> "RepElement":
        """Inverse of ±χ; anything else raises NotInvertible."""
        if len(self.coeffs) != 1:
            raise NotInvertible(f"{self} is not a signed character")
        (chi, c), = self.coeffs.items()
        if c not in (1, -1):
            raise NotInvertible(f"{self} is not a signed character")
        return RepElement(self.group, {self.group.inv(chi): c})

    def regular_matrix(self) -> np.ndarray:
        """|G|×|G| integer matrix of multiplication by self on the character basis."""
        chars = self.group.characters()
        m = np.zeros((len(chars), len(chars)), dtype=object)
        for j, chi in enumerate(chars):
            for a, c in self.coeffs.items():
                m[self.group.index(self.group.mul(a, chi)), j] += c
        return m

    def to_json(self) -> List:
        return [[list(chi), c] for chi, c in sorted(self.coeffs.items())]

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for chi, c in sorted(self.coeffs.items()):
            name = "1" if chi == self.group.identity() else "χ" + "".join(str(x) for x in chi)
            terms.append(f"{c:+d}·{name}")
        return " ".join(terms)


def character_value(x: RepElement, g: Sequence[int]) -> complex:
    return sum((c * x.group.value(chi, g) for chi, c in x.coeffs.items()), 0j)


def augmentation(x: RepElement) -> int:
    return sum(x.coeffs.values())


@dataclass(frozen=True)
class Representation:
    """A representation of G as a sorted multiset of characters."""
    group: GroupSpec
    chars: Tuple[Character, ...]

    @classmethod
    def of(cls, group: GroupSpec, chars: Iterable[Sequence[int]]) -> "Representation":
        return cls(group, tuple(sorted(group.normalize(c) for c in chars)))

    @classmethod
    def parse(cls, group: GroupSpec, text: str) -> "Representation":
        """'0,1;1,0' → the characters (0,1) and (1,0); '' or 'none' → the zero representation."""
        text = text.strip()
        if not text or text.lower() in ("none", "zero"):
            return cls(group, ())
        try:
            chars = [[int(x) for x in part.split(",")] for part in text.split(";") if part.strip()]
        except ValueError:
            raise InvalidInput(f"cannot parse characters {text!r}; expected e.g. 0,1;1,0")
        return cls.of(group, chars)

    @property
    def dim(self) -> int:
        return len(self.chars)

    def lines(self) -> List[RepElement]:
        return [RepElement.char(self.group, chi) for chi in self.chars]

    def __add__(self, other: "Representation") -> "Representation":
        if other.group != self.group:
            raise InvalidInput("representations of different groups")
        return Representation(self.group, tuple(sorted(self.chars + other.chars)))

    def label(self) -> str:
        return ";".join(",".join(str(x) for x in c) for c in self.chars) or "none"

    def to_json(self) -> Dict:
        return {"orders": list(self.group.orders), "chars": [list(c) for c in self.chars]}


def is_subrep(v0: Representation, v1: Representation) -> bool:
    need, have = Counter(v0.chars), Counter(v1.chars)
    return all(have[c] >= n for c, n in need.items())


def exterior_power(v: Representation, k: int) -> RepElement:
    """λ^k(V) = e_k of the characters of V."""
    if k < 0:
        raise InvalidInput("exterior power degree must be ≥ 0")
    e = [RepElement.one(v.group)] + [RepElement.zero(v.group)] * k
    for line in v.lines():
        for i in range(k, 0, -1):
            e[i] = e[i] + e[i - 1] * line
    return e[k]


class RepPoly:
    """Σ c_i T^{low+i} over R(G), Laurent when low < 0."""

    __slots__ = ("group", "coeffs", "low")

    def __init__(self, group: GroupSpec, coeffs: Sequence[Union[RepElement, int]], low: int = 0):
        self.group = group
        cs = [c if isinstance(c, RepElement) else RepElement(group, {group.identity(): int(c)}) for c in coeffs]
        # trim zeros at both ends
        start = 0
        while start < len(cs) and cs[start].is_zero():
            start += 1
        end = len(cs)
        while end > start and cs[end - 1].is_zero():
            end -= 1
        self.coeffs: Tuple[RepElement, ...] = tuple(cs[start:end])
        self.low = low + start if self.coeffs else 0

    @classmethod
    def monomial(cls, group: GroupSpec, power: int, coeff: Union[RepElement, int] = 1) -> "RepPoly":
        return cls(group, [coeff], low=power)

    @property
    def degree(self) -> int:
        """Top power, −1 for the zero polynomial."""
        return self.low + len(self.coeffs) - 1 if self.coeffs else -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, power: int) -> RepElement:
        i = power - self.low
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return RepElement.zero(self.group)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def _terms(self) -> Dict[int, RepElement]:
        return {self.low + i: c for i, c in enumerate(self.coeffs)}

    @classmethod
    def _from_terms(cls, group: GroupSpec, terms: Dict[int, RepElement]) -> "RepPoly":
        if not terms:
            return cls(group, [])
        low, high = min(terms), max(terms)
        zero = RepElement.zero(group)
        return cls(group, [terms.get(p, zero) for p in range(low, high + 1)], low=low)

    def _coerce(self, other) -> "RepPoly":
        if isinstance(other, RepPoly):
            return other
        if isinstance(other, (RepElement, int, np.integer)):
            return RepPoly(self.group, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = self._terms()
        for p, c in other._terms().items():
            terms[p] = terms.get(p, RepElement.zero(self.group)) + c
        return RepPoly._from_terms(self.group, terms)

    __radd__ = __add__

    def __neg__(self):
        return RepPoly(self.group, [-c for c in self.coeffs], low=self.low)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: Dict[int, RepElement] = {}
        for p, a in self._terms().items():
            for q, b in other._terms().items():
                terms[p + q] = terms.get(p + q, RepElement.zero(self.group)) + a * b
        return RepPoly._from_terms(self.group, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RepPoly":
        out = RepPoly(self.group, [1])
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.low == other.low and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.low, self.coeffs))

    def augmented(self) -> Dict[int, int]:
        """Coefficientwise augmentation, power → integer."""
        return {p: augmentation(c) for p, c in self._terms().items() if augmentation(c)}

    def to_json(self) -> Dict:
        return {"low": self.low, "coeffs": [c.to_json() for c in self.coeffs]}

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})T^{p}" for p, c in sorted(self._terms().items(), reverse=True))


def f_V(v: Representation) -> RepPoly:
    """Σ_k (−1)^k λ^k(V) T^{d−k}"""
    d = v.dim
    terms = {d - k: exterior_power(v, k) * (-1) ** k for k in range(d + 1)}
    return RepPoly._from_terms(v.group, terms)


def f_V_product(v: Representation) -> RepPoly:
    """∏ (T − [L]) over the lines of V."""
    out = RepPoly(v.group, [1])
    for line in v.lines():
        out = out * RepPoly(v.group, [-line, RepElement.one(v.group)])
    return out


def f_product_check(v: Representation, w: Representation) -> bool:
    return f_V(v + w) == f_V(v) * f_V(w)


def _reduce_polynomial(g: RepPoly, modulus: RepPoly) -> RepPoly:
    """Remainder of a polynomial (low ≥ 0) by a monic modulus."""
    d = modulus.degree
    if d == 0:
        return RepPoly(g.group, [])
    terms = g._terms()
    zero = RepElement.zero(g.group)
    for p in range(g.degree, d - 1, -1):
        c = terms.get(p, zero)
        if c.is_zero():
            continue
        # c·T^p = −c·T^{p−d}·(modulus − T^d)
        for q, m in modulus._terms().items():
            terms[p - d + q] = terms.get(p - d + q, zero) - c * m
    return RepPoly._from_terms(g.group, {p: c for p, c in terms.items() if p < d})


def laurent_reduce(g: RepPoly, modulus: RepPoly) -> RepPoly:
    """
    Canonical remainder of degree < deg(modulus) in R(G)[T, T⁻¹]/(modulus).

    T⁻¹ ≡ −c₀⁻¹(T^{d−1} + a_{d−1}T^{d−2} + … + a₁) for modulus
    T^d + a_{d−1}T^{d−1} + … + c₀, so c₀ must be a unit.
    """
    if not modulus.is_monic():
        raise InvalidInput("modulus must be monic")
    if g.group != modulus.group:
        raise InvalidInput("polynomials over different groups")
    if modulus.degree == 0:
        return RepPoly(g.group, [])
    if modulus.low > 0:
        raise NotInvertible("modulus has zero constant term")
    c0_inv = modulus.coefficient(0).unit_inverse()
    if g.is_zero() or g.low >= 0:
        return _reduce_polynomial(g, modulus)
    shift = -g.low
    t_inv_terms = {p - 1: -c0_inv * c for p, c in modulus._terms().items() if p >= 1}
    t_inv = _reduce_polynomial(RepPoly._from_terms(g.group, t_inv_terms), modulus)
    raised = _reduce_polynomial(g * RepPoly.monomial(g.group, shift), modulus)
    out = raised
    for _ in range(shift):
        out = _reduce_polynomial(out * t_inv, modulus)
    return out


def residue(g: RepPoly, v0: Representation, v1: Representation) -> RepElement:
    """T^{d₀−1} coefficient of g·f_{V₁} mod f_{V₀}; the total residue of g·f_{V₁}/f_{V₀}·dT."""
    if not v1.dim >= v0.dim >= 1:
        raise InvalidInput(f"need dim V1 ≥ dim V0 ≥ 1, got {v0.dim}, {v1.dim}")
    return laurent_reduce(g * f_V(v1), f_V(v0)).coefficient(v0.dim - 1)


def check_scale(group: GroupSpec, *reps: Representation) -> None:
    if group.order > settings.MAX_GROUP_ORDER:
        raise TooLarge(f"|G| = {group.order} exceeds {settings.MAX_GROUP_ORDER}")
    total = sum(r.dim for r in reps)
    if total > settings.MAX_TOTAL_DIM:
        raise TooLarge(f"total dimension {total} exceeds {settings.MAX_TOTAL_DIM}")


def _coordinates(p: RepPoly, length: int) -> List[int]:
    """Integer coordinates on the basis χ·T^j, j < length, ordered by (j, χ)."""
    group = p.group
    n = group.order
    out = [0] * (n * length)
    for power, c in p._terms().items():
        if not 0 <= power < length:
            raise InvalidInput(f"power {power} outside the basis range")
        for chi, x in c.coeffs.items():
            out[power * n + group.index(chi)] = x
    return out


def restriction_kernel_check(v0: Representation, v1: Representation) -> Report:
    """
    Kernel of R(G)[T]/(f_{V₀}f_{V₁}) → R(G)[T]/(f_{V₁}) as an integer lattice,
    compared with the lattice spanned by χ·f_{V₁}·T^j for j < dim V₀.
    """
    group = v0.group
    check_scale(group, v0, v1)
    label = f"{'x'.join(map(str, group.orders))}.{v0.label()}.{v1.label()}"
    if v0.dim == 0:
        # degenerate: the whole module counts as kernel
        rank = group.order * v1.dim
        record = CheckRecord(
            id=f"ktheory.restriction-kernel.{label}",
            status=PASS,
            metrics={"kernel_rank": rank, "expected_rank": rank, "kernel": "everything", "degenerate": True},
        )
        logger.info(f"✅ restriction kernel {label}: V0 = 0, kernel is everything")
        return new_report("ktheory", [record], group=list(group.orders))
    d0, d1 = v0.dim, v1.dim
    f1 = f_V(v1)
    chars = group.characters()
    columns = []
    for j in range(d0 + d1):
        for chi in chars:
            image = laurent_reduce(RepPoly.monomial(group, j, RepElement.char(group, chi)), f1)
            columns.append(_coordinates(image, d1))
    restriction = np.array(columns, dtype=object).T
    found = kernel(restriction, cols=len(columns))
    expected = [
        _coordinates(RepPoly.monomial(group, j, RepElement.char(group, chi)) * f1, d0 + d1)
        for j in range(d0)
        for chi in chars
    ]
    ok = same_lattice(found.T, expected)
    record = CheckRecord(
        id=f"ktheory.restriction-kernel.{label}",
        status=PASS if ok else FAIL,
        witness=None if ok else {"kernel": to_lists(hermite_normal_form(found.T)),
                                 "expected": to_lists(hermite_normal_form(expected))},
        metrics={
            "kernel_rank": int(found.shape[1]),
            "expected_rank": len(expected),
            "kernel_basis": to_lists(hermite_normal_form(found.T)),
            "expected_basis": to_lists(hermite_normal_form(expected)),
        },
    )
    logger.info(f"{'✅' if ok else '❌'} restriction kernel {label}: rank {found.shape[1]}")
    return new_report("ktheory", [record], group=list(group.orders))


def all_representations(group: GroupSpec, max_dim: int, min_dim: int = 0) -> List[Representation]:
    chars = group.characters()
    reps = []
    for d in range(min_dim, max_dim + 1):
        for combo in itertools.combinations_with_replacement(chars, d):
            reps.append(Representation(group, tuple(combo)))
    return reps
