# isotower/grassmann.py
"""
Grassmannians in the projector model: the block splitting of s(V₀) along a
projector, the local charts around a base plane, the Hom(T,T) splitting and
the diagonal group actions on points of the tower.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import settings
from isotower.errors import InvalidInput, OutsideChart
from isotower.linalg import (
    adjoint,
    as_matrix,
    check_hermitian,
    check_projector,
    complement_frame,
    deviation,
    frame_of_projector,
    is_isometry,
    projector_rank,
    restrict,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlockSplit:
    """
    alpha = top + bottom + off + off† with top on range W, bottom on range
    (1 − W) and off mapping range W into range (1 − W); all blocks are d₀×d₀.
    """
    top: np.ndarray
    bottom: np.ndarray
    off: np.ndarray
    W: np.ndarray

    def compact(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """The blocks in coordinates of the frames of W and 1 − W."""
        wf, qf = frame_of_projector(self.W), complement_frame(self.W)
        return restrict(self.top, wf), restrict(self.bottom, qf), adjoint(qf) @ self.off @ wf


def decompose_s(alpha, W) -> BlockSplit:
    a = check_hermitian(alpha)
    w = check_projector(W)
    if w.shape != a.shape:
        raise InvalidInput(f"projector {w.shape} does not act on operator {a.shape}")
    c = np.eye(a.shape[0]) - w
    return BlockSplit(w @ a @ w, c @ a @ c, c @ a @ w, w)


def recompose(split: BlockSplit) -> np.ndarray:
    return split.top + split.bottom + split.off + adjoint(split.off)


def split_hom_self(A) -> Tuple[np.ndarray, np.ndarray]:
    """Hom(T,T) ≅ s(T) ⊕ s(T): A ↦ ((A+A†)/2, (A−A†)/(2i))."""
    a = as_matrix(A)
    return (a + adjoint(a)) / 2, (a - adjoint(a)) / 2j


def join_hom_self(x, y) -> np.ndarray:
    return as_matrix(x) + 1j * as_matrix(y)


class GrassmannChart:
    """
    Chart of the Grassmannian of k-planes around a base projector W: a map
    a: W → W⊥ (in frame coordinates, (d₀−k)×k) goes to the projector onto
    the graph of a, and a projector π goes back to π₁₂·π₂₂⁻¹.
    """

    def __init__(self, W):
        self.W = check_projector(W)
        self.k = projector_rank(self.W)
        self.frame = frame_of_projector(self.W)
        self.complement = complement_frame(self.W)

    def __call__(self, a) -> np.ndarray:
        a = as_matrix(a)
        if a.shape != (self.complement.shape[1], self.k):
            raise InvalidInput(f"chart coordinate must be {(self.complement.shape[1], self.k)}, got {a.shape}")
        graph = self.frame + self.complement @ a
        pi = graph @ np.linalg.solve(adjoint(graph) @ graph, adjoint(graph))
        return (pi + adjoint(pi)) / 2

    def inverse(self, pi) -> np.ndarray:
        p = check_projector(pi)
        if projector_rank(p) != self.k:
            raise OutsideChart(f"projector of rank {projector_rank(p)} is not in a rank-{self.k} chart")
        p22 = restrict(p, self.frame)
        p12 = adjoint(self.complement) @ p @ self.frame
        if self.k and np.linalg.svd(p22, compute_uv=False).min() <= settings.TAU_GAP:
            raise OutsideChart("projector meets the complement of the base plane")
        if not self.k:
            return np.zeros((self.complement.shape[1], 0), dtype=complex)
        return p12 @ np.linalg.inv(p22)


def grassmann_chart(a, W) -> np.ndarray:
    return GrassmannChart(W)(a)


def grassmann_chart_inv(pi, W) -> np.ndarray:
    return GrassmannChart(W).inverse(pi)


class GroupAction:
    """
    A finite abelian group ∏ Z/n_j acting on V₀ and V₁ through characters:
    the element g acts on the i-th basis vector by exp(2πi Σ_j g_j·c_ij/n_j).
    """

    def __init__(self, orders: Sequence[int], char_v0: Sequence[Sequence[int]], char_v1: Sequence[Sequence[int]]):
        self.orders = tuple(int(n) for n in orders)
        if any(n < 1 for n in self.orders):
            raise InvalidInput(f"cyclic orders must be positive, got {self.orders}")
        self.char_v0 = [self._normalize(c) for c in char_v0]
        self.char_v1 = [self._normalize(c) for c in char_v1]
        if len(self.char_v1) < len(self.char_v0):
            raise InvalidInput("V₁ must have at least the dimension of V₀")

    def _normalize(self, char) -> Tuple[int, ...]:
        c = tuple(int(x) for x in char)
        if len(c) != len(self.orders):
            raise InvalidInput(f"character {c} does not match group orders {self.orders}")
        return tuple(x % n for x, n in zip(c, self.orders))

    @property
    def d0(self) -> int:
        return len(self.char_v0)

    @property
    def d1(self) -> int:
        return len(self.char_v1)

    def elements(self) -> Iterator[Tuple[int, ...]]:
        return itertools.product(*(range(n) for n in self.orders))

    def identity(self) -> Tuple[int, ...]:
        return tuple(0 for _ in self.orders)

    def compose(self, g, h) -> Tuple[int, ...]:
        return tuple((a + b) % n for a, b, n in zip(g, h, self.orders))

    def _diagonal(self, chars: List[Tuple[int, ...]], g) -> np.ndarray:
        g = self._normalize(g)
        phases = [sum(gj * cj / n for gj, cj, n in zip(g, c, self.orders)) for c in chars]
        return np.diag(np.exp(2j * np.pi * np.array(phases, dtype=float)))

    def on_v0(self, g) -> np.ndarray:
        return self._diagonal(self.char_v0, g)

    def on_v1(self, g) -> np.ndarray:
        return self._diagonal(self.char_v1, g)

    def fixes_inclusion(self) -> bool:
        """True iff the first d₀ basis vectors of V₁ carry the characters of V₀."""
        return self.char_v1[: self.d0] == self.char_v0

    def check_multiplicative(self, tol: Optional[float] = None) -> bool:
        tol = settings.TOL_EQ if tol is None else tol
        for g in self.elements():
            if not is_isometry(self.on_v0(g)) or not is_isometry(self.on_v1(g)):
                return False
            for h in self.elements():
                gh = self.compose(g, h)
                if deviation(self.on_v0(g) @ self.on_v0(h), self.on_v0(gh)) > tol:
                    return False
                if deviation(self.on_v1(g) @ self.on_v1(h), self.on_v1(gh)) > tol:
                    return False
        return True


def act(g, value, action: GroupAction, kind: Optional[str] = None):
    """
    g·value by conjugation.  Tower, Thom and filtration points transform
    blockwise; a bare matrix is read as a map V₀ → V₁ (kind="hom") or a
    self-adjoint operator on V₀ (kind="self"), inferred from its shape when
    that is unambiguous.
    """
    u0, u1 = action.on_v0(g), action.on_v1(g)
    if hasattr(value, "conjugate") and not isinstance(value, np.ndarray):
        return value.conjugate(u0, u1)
    m = as_matrix(value)
    if kind is None:
        if m.shape == (action.d1, action.d0) and action.d1 != action.d0:
            kind = "hom"
        elif m.shape == (action.d0, action.d0) and action.d1 != action.d0:
            kind = "self"
        elif action.char_v0 == action.char_v1:
            kind = "hom"
        else:
            raise InvalidInput("square matrix is ambiguous for this action; pass kind='hom' or kind='self'")
    if kind == "hom":
        if m.shape != (action.d1, action.d0):
            raise InvalidInput(f"map of shape {m.shape} does not go V₀ → V₁")
        return u1 @ m @ adjoint(u0)
    if kind == "self":
        if m.shape != (action.d0, action.d0):
            raise InvalidInput(f"operator of shape {m.shape} does not act on V₀")
        return u0 @ m @ adjoint(u0)
    raise InvalidInput(f"unknown kind {kind!r}")
