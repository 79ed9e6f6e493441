# isotower/koszul.py
"""
Koszul complexes over R(G) and the complex attached to a pair (V₀, V₁).
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from isotower.errors import InvalidInput
from isotower.ktheory import (
    GroupSpec,
    RepElement,
    RepPoly,
    Representation,
    check_scale,
    is_subrep,
    residue,
)
from isotower.lattice import to_lists
from isotower.report import FAIL, PASS, CheckRecord, Report, new_report

logger = logging.getLogger(__name__)

Matrix = List[List[RepElement]]


def _basis(rank: int, degree: int) -> List[Tuple[int, ...]]:
    return list(itertools.combinations(range(rank), degree))


@dataclass
class KoszulComplex:
    """
    K_i is free on the i-subsets of {0, …, r−1}; d_i: K_i → K_{i−1} sends
    e_{j₀}∧…∧e_{j_{i−1}} to Σ_m (−1)^m x_{j_m} e_{…ĵ_m…}.
    """
    group: GroupSpec
    sequence: Tuple[RepElement, ...]
    differentials: Dict[int, Matrix] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return len(self.sequence)

    def basis(self, degree: int) -> List[Tuple[int, ...]]:
        return _basis(self.rank, degree)

    def differential(self, degree: int) -> Matrix:
        return self.differentials[degree]

    def d_squared_zero(self) -> bool:
        for i in range(2, self.rank + 1):
            product = _matmul(self.group, self.differentials[i - 1], self.differentials[i])
            if any(not entry.is_zero() for row in product for entry in row):
                return False
        return True

    def is_zero(self) -> bool:
        return all(entry.is_zero() for d in self.differentials.values() for row in d for entry in row)

    def integer_blocks(self, degree: int) -> np.ndarray:
        """d_i over ℤ, each entry expanded to its |G|×|G| regular-representation block."""
        d = self.differentials[degree]
        n = self.group.order
        rows, cols = len(self.basis(degree - 1)), len(self.basis(degree))
        out = np.zeros((rows * n, cols * n), dtype=object)
        for r in range(rows):
            for c in range(cols):
                out[r * n:(r + 1) * n, c * n:(c + 1) * n] = d[r][c].regular_matrix()
        return out

    def to_dict(self) -> Dict:
        return {
            "rank": self.rank,
            "orders": list(self.group.orders),
            "sequence": [x.to_json() for x in self.sequence],
            "differentials": [
                {
                    "degree": i,
                    "source_basis": [list(s) for s in self.basis(i)],
                    "target_basis": [list(s) for s in self.basis(i - 1)],
                    "matrix": to_lists(self.integer_blocks(i)),
                }
                for i in range(1, self.rank + 1)
            ],
            "d_squared_zero": self.d_squared_zero(),
        }


def _matmul(group: GroupSpec, a: Matrix, b: Matrix) -> Matrix:
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        if len(row) != inner:
            raise InvalidInput("differentials do not compose")
        out.append([sum((row[m] * b[m][c] for m in range(inner)), RepElement.zero(group)) for c in range(cols)])
    return out


def koszul_build(x: Sequence[RepElement], group: Optional[GroupSpec] = None) -> KoszulComplex:
    if not x and group is None:
        raise InvalidInput("an empty sequence needs an explicit group")
    group = group or x[0].group
    if any(e.group != group for e in x):
        raise InvalidInput("sequence entries over different groups")
    r = len(x)
    differentials: Dict[int, Matrix] = {}
    for i in range(1, r + 1):
        source, target = _basis(r, i), _basis(r, i - 1)
        index = {s: n for n, s in enumerate(target)}
        d = [[RepElement.zero(group) for _ in source] for _ in target]
        for c, subset in enumerate(source):
            for m, j in enumerate(subset):
                face = subset[:m] + subset[m + 1:]
                d[index[face]][c] = x[j] * (-1) ** m
        differentials[i] = d
    complex_ = KoszulComplex(group, tuple(x), differentials)
    if not complex_.d_squared_zero():
        logger.error(f"❌ Koszul complex on {list(x)} has d² ≠ 0")
        raise InvalidInput(f"Koszul differentials on {list(x)} do not square to zero")
    return complex_


def tower_sequence(v0: Representation, v1: Representation) -> List[RepElement]:
    """x_j = residue(T^j) for j < dim V₀."""
    return [residue(RepPoly.monomial(v0.group, j), v0, v1) for j in range(v0.dim)]


def tower_koszul(v0: Representation, v1: Representation) -> Tuple[KoszulComplex, Report]:
    """The Koszul complex on the residues of 1, T, …, T^{d₀−1}, with its checks."""
    check_scale(v0.group, v0, v1)
    xs = tower_sequence(v0, v1)
    complex_ = koszul_build(xs, v0.group)
    sub = is_subrep(v0, v1)
    all_zero = all(x.is_zero() for x in xs)
    label = f"{'x'.join(map(str, v0.group.orders))}.{v0.label()}.{v1.label()}"
    squared = complex_.d_squared_zero()
    records = [
        CheckRecord(
            id=f"koszul.d-squared.{label}",
            status=PASS if squared else FAIL,
            metrics={"rank": complex_.rank},
        ),
        CheckRecord(
            id=f"koszul.vanishing-iff-subrep.{label}",
            status=PASS if all_zero == sub else FAIL,
            witness=None if all_zero == sub else {"subrep": sub, "sequence": [x.to_json() for x in xs]},
            metrics={"subrep": sub, "zero_differentials": complex_.is_zero(),
                     "sequence": [x.to_json() for x in xs]},
        ),
    ]
    logger.info(f"{'✅' if squared and all_zero == sub else '❌'} Koszul {label}: subrep={sub}, x={xs}")
    return complex_, new_report("koszul", records, v0=v0.to_json(), v1=v1.to_json())
