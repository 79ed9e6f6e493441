# isotower/linalg.py
"""
Small dense complex linear algebra: adjoints, Hermitian eigensystems,
norms, projectors, frames and the matrix JSON format.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
from scipy import linalg as sla

from config.settings import settings
from isotower.errors import InvalidInput

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues with a unitary matrix of eigenvectors (columns)."""
    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.values)

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ adjoint(self.vectors)


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite 2-d complex array."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise InvalidInput(f"expected a matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("matrix has non-finite entries")
    return arr


def adjoint(m: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(m)).T


def operator_norm(gamma: np.ndarray) -> float:
    """Top singular value; 0 for an empty matrix."""
    g = np.asarray(gamma, dtype=complex)
    if g.size == 0:
        return 0.0
    return float(sla.svdvals(g)[0])


def scale_of(*operands: np.ndarray) -> float:
    """max(1, ‖M‖) over the operands, the factor every tolerance is multiplied by."""
    return max([1.0] + [operator_norm(m) for m in operands])


def deviation(a: np.ndarray, b: np.ndarray) -> float:
    return operator_norm(np.asarray(a) - np.asarray(b))


def close(a: np.ndarray, b: np.ndarray, tol: Optional[float] = None) -> bool:
    """Scale-relative matrix equality."""
    tol = settings.TOL_EQ if tol is None else tol
    return deviation(a, b) <= tol * scale_of(a, b)


def check_hermitian(alpha, tol_sym: Optional[float] = None) -> np.ndarray:
    """Return the symmetrized operator, or raise if alpha is not Hermitian."""
    tol_sym = settings.TOL_SYM if tol_sym is None else tol_sym
    a = as_matrix(alpha)
    if a.shape[0] != a.shape[1]:
        raise InvalidInput(f"Hermitian operator must be square, got {a.shape}")
    asym = np.max(np.abs(a - adjoint(a))) if a.size else 0.0
    if asym > tol_sym * scale_of(a):
        raise InvalidInput(f"operator is not Hermitian (asymmetry {asym:.3e})")
    return (a + adjoint(a)) / 2


def hermitian_eig(alpha) -> EigenSystem:
    """Ascending eigenvalues and orthonormal eigenvectors of a Hermitian operator."""
    a = check_hermitian(alpha)
    if a.shape[0] == 0:
        return EigenSystem(np.zeros(0), np.zeros((0, 0), dtype=complex))
    values, vectors = sla.eigh(a)
    return EigenSystem(np.asarray(values, dtype=float), vectors)


def eigenvalues(alpha) -> np.ndarray:
    return hermitian_eig(alpha).values


def is_isometry(frame: np.ndarray, tol: Optional[float] = None) -> bool:
    tol = settings.TOL_EQ if tol is None else tol
    f = np.asarray(frame, dtype=complex)
    return bool(np.max(np.abs(adjoint(f) @ f - np.eye(f.shape[1])), initial=0.0) <= tol)


def check_isometry(frame) -> np.ndarray:
    f = as_matrix(frame)
    if f.shape[1] > f.shape[0] or not is_isometry(f):
        raise InvalidInput(f"frame of shape {f.shape} is not an isometry")
    return f


def projector_from_frame(frame) -> np.ndarray:
    """F·F† for an isometric frame F."""
    f = check_isometry(frame)
    return f @ adjoint(f)


def check_projector(p, tol: Optional[float] = None) -> np.ndarray:
    tol = settings.TOL_EQ if tol is None else tol
    pi = as_matrix(p)
    if pi.shape[0] != pi.shape[1]:
        raise InvalidInput("projector must be square")
    if deviation(pi @ pi, pi) > tol or deviation(adjoint(pi), pi) > tol:
        raise InvalidInput("matrix is not an orthogonal projector")
    return (pi + adjoint(pi)) / 2


def projector_rank(p: np.ndarray) -> int:
    return int(round(float(np.trace(p).real)))


def frame_of_projector(p: np.ndarray) -> np.ndarray:
    """Orthonormal frame (columns) spanning the range of a projector."""
    pi = np.asarray(p, dtype=complex)
    if pi.shape[0] == 0:
        return np.zeros((0, 0), dtype=complex)
    values, vectors = sla.eigh((pi + adjoint(pi)) / 2)
    return vectors[:, values > 0.5]


def complement_frame(p: np.ndarray) -> np.ndarray:
    """Orthonormal frame of the range of 1 − p."""
    return frame_of_projector(np.eye(p.shape[0]) - p)


def numerical_rank(m, tol: Optional[float] = None) -> int:
    """Number of singular values above tol·(top singular value)."""
    tol = settings.TAU_GAP if tol is None else tol
    a = np.asarray(m, dtype=complex)
    if a.size == 0:
        return 0
    s = sla.svdvals(a)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def gram_schmidt_complete(frame: np.ndarray, count: int, ambient: Optional[int] = None) -> np.ndarray:
    """
    Extend an orthonormal family by `count` vectors orthogonal to it.

    Candidates are the standard basis vectors e_1, e_2, ... in order, so the
    completion is deterministic.
    """
    f = np.asarray(frame, dtype=complex)
    n = f.shape[0] if ambient is None else ambient
    basis: List[np.ndarray] = [f[:, j] for j in range(f.shape[1])]
    added: List[np.ndarray] = []
    for i in range(n):
        if len(added) == count:
            break
        v = np.zeros(n, dtype=complex)
        v[i] = 1.0
        for u in basis + added:
            v = v - np.vdot(u, v) * u
        # Re-orthogonalize once; the candidates can be nearly dependent.
        for u in basis + added:
            v = v - np.vdot(u, v) * u
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            added.append(v / norm)
    if len(added) < count:
        raise InvalidInput(f"cannot complete a frame of rank {f.shape[1]} by {count} in dimension {n}")
    if not added:
        return np.zeros((n, 0), dtype=complex)
    return np.column_stack(added)


def diag_in_frame(frame: np.ndarray, values) -> np.ndarray:
    """frame · diag(values) · frame†"""
    f = np.asarray(frame, dtype=complex)
    return (f * np.asarray(values)) @ adjoint(f)


def restrict(op: np.ndarray, frame: np.ndarray) -> np.ndarray:
    """The block frame† · op · frame of an operator on a subspace."""
    return adjoint(frame) @ op @ frame


def matrix_to_json(m: np.ndarray) -> Dict:
    a = np.asarray(m, dtype=complex)
    rows, cols = a.shape
    return {
        "rows": rows,
        "cols": cols,
        "data": [[float(z.real), float(z.imag)] for z in a.reshape(-1)],
    }


def matrix_from_json(obj: Dict) -> np.ndarray:
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        data = [complex(re, im) for re, im in obj["data"]]
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidInput(f"malformed matrix JSON: {e}")
    if len(data) != rows * cols:
        raise InvalidInput(f"matrix JSON has {len(data)} entries, expected {rows * cols}")
    return np.array(data, dtype=complex).reshape(rows, cols)
