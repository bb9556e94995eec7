"""Symplectic matrices with up to four prescribed left eigenvalues.

Every unit quaternion ``sigma`` with ``Re(conj(q) sigma) = cos(theta)`` is a
left eigenvalue of ``L_q R_theta``.  Writing ``q`` and the ``sigma_m`` in
coordinates turns the prescription into the real linear system
``M q = cos(theta) u`` with ``u = (1, 1, 1, 1)``, which :func:`construct`
solves in its two rank regimes.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hmat import (EIGEN_TOL, MatH2, RotationForm, adjoint_det, rotation_from_cs,
                   shift)
from .quat import DEFAULT_TOL, Quaternion, norm, re_dot

PIVOT_RTOL = 1e-10


class SingularSystemError(ArithmeticError):
    """Gaussian elimination met a pivot below the singularity threshold."""


class PreconditionError(ValueError):
    pass


class NumericalInconsistency(ArithmeticError):
    """A quantity that is provably bounded came out on the wrong side."""


class Branch(str, enum.Enum):
    RANK_DEFICIENT = "RankDeficient"
    FULL_RANK = "FullRank"


def coords(sigma: Quaternion) -> np.ndarray:
    return np.array([sigma.t, sigma.x, sigma.y, sigma.z], dtype=float)


def from_coords(v: Sequence[float]) -> Quaternion:
    return Quaternion.from_seq(list(map(float, v)))


def _pivot_floor(M: np.ndarray, tol: float | None) -> float:
    if tol is not None:
        return tol
    row_max = float(np.max(np.linalg.norm(M, axis=1))) if M.size else 0.0
    return PIVOT_RTOL * max(row_max, np.finfo(float).tiny)


def solve_linear(M: np.ndarray, b: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Solve ``M x = b`` by Gaussian elimination with partial pivoting.

    Raises SingularSystemError if a pivot falls below ``tol`` (default:
    1e-10 times the largest row norm of ``M``).
    """
    a = np.array(M, dtype=float)
    x = np.array(b, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or x.shape != (n,):
        raise ValueError(f"shape mismatch: M {a.shape}, b {x.shape}")
    floor = _pivot_floor(a, tol)

    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) <= floor:
            raise SingularSystemError(f"pivot {abs(a[p, k]):.3e} at column {k} below {floor:.3e}")
        if p != k:
            a[[k, p]] = a[[p, k]]
            x[[k, p]] = x[[p, k]]
        for i in range(k + 1, n):
            lam = a[i, k] / a[k, k]
            if lam != 0.0:
                a[i, k:] -= lam * a[k, k:]
                x[i] -= lam * x[k]

    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
    return x


def _sign_normalize(v: np.ndarray) -> np.ndarray:
    mags = np.abs(v)
    lead = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
    return (-v if v[lead] < 0 else v) + 0.0  # drop negative zeros


def rank_and_kernel(M: np.ndarray, tol: float | None = None) -> tuple[int, list[np.ndarray]]:
    """Numerical rank and an orthonormal kernel basis of ``M``.

    Row reduction with partial pivoting gives the pivot columns; each free
    column yields one kernel vector, and the set is orthonormalized in
    free-column order.
    """
    a = np.array(M, dtype=float)
    if a.ndim != 2:
        raise ValueError("M must be two-dimensional")
    if tol is not None and tol <= 0:
        raise ValueError("tol must be positive")
    rows, cols = a.shape
    floor = _pivot_floor(a, tol)

    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[p, c]) <= floor:
            a[r:, c] = 0.0
            continue
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] /= a[r, c]
        for i in range(rows):
            if i != r and a[i, c] != 0.0:
                a[i] -= a[i, c] * a[r]
        pivots.append(c)
        r += 1

    rank = len(pivots)
    basis: list[np.ndarray] = []
    for f in (c for c in range(cols) if c not in pivots):
        v = np.zeros(cols)
        v[f] = 1.0
        for row, pc in enumerate(pivots):
            v[pc] = -a[row, f]
        # two passes of modified Gram-Schmidt
        for _ in range(2):
            for e in basis:
                v -= (e @ v) * e
        v /= np.linalg.norm(v)
        basis.append(v)
    return rank, [_sign_normalize(v) for v in basis]


@dataclass(frozen=True)
class SigmaResidual:
    index: int
    sigma: Quaternion
    condition: float                 # |Re(conj(q) sigma) - cos(theta)|
    margins: tuple[float, float]     # adjoint_det(A - sigma I) for both matrices

    def to_dict(self) -> dict:
        return {"sigma": self.sigma.to_list(), "condition": self.condition,
                "margins": list(self.margins)}


@dataclass(frozen=True)
class ConstructionResult:
    branch: Branch
    rank: int
    q: Quaternion
    cos_theta: float
    theta: float
    matrices: tuple[MatH2, MatH2]
    forms: tuple[RotationForm, RotationForm]
    residuals: tuple[SigmaResidual, ...]
    inverse_norm: float | None = None   # |M^-1 u| on the full-rank branch

    @property
    def max_condition_residual(self) -> float:
        return max(r.condition for r in self.residuals)

    @property
    def max_margin(self) -> float:
        return max(max(r.margins) for r in self.residuals)

    def to_dict(self) -> dict:
        return {
            "branch": self.branch.value,
            "rank": self.rank,
            "q": self.q.to_list(),
            "cos_theta": self.cos_theta,
            "theta": self.theta,
            "inverse_norm": self.inverse_norm,
            "matrices": [m.to_list() for m in self.matrices],
            "forms": [f.to_dict() for f in self.forms],
            "residuals": {str(r.index): r.to_dict() for r in self.residuals},
        }


def construct(*sigmas: Quaternion) -> ConstructionResult:
    """Build ``A`` in Sp(2) having every given unit quaternion as a left eigenvalue.

    Accepts one to four quaternions.  Returns both sign realizations
    ``L_q R_theta`` and ``L_q R_{-theta}`` (the latter stored in canonical
    form ``L_{-q} R_{pi - theta}``).
    """
    if len(sigmas) == 1 and not isinstance(sigmas[0], Quaternion):
        sigmas = tuple(sigmas[0])
    if not 1 <= len(sigmas) <= 4:
        raise PreconditionError(f"construct takes 1 to 4 quaternions, got {len(sigmas)}")
    for m, s in enumerate(sigmas):
        if abs(norm(s) - 1.0) > DEFAULT_TOL:
            raise PreconditionError(f"sigma[{m}] is not a unit quaternion (norm {norm(s)!r})")

    M = np.array([coords(s) for s in sigmas])
    rank, kernel = rank_and_kernel(M)
    inverse_norm = None

    if rank < 4:
        branch = Branch.RANK_DEFICIENT
        q = from_coords(kernel[0])
        c, s, theta = 0.0, 1.0, math.pi / 2
    else:
        branch = Branch.FULL_RANK
        try:
            v = solve_linear(M, np.ones(4))
        except SingularSystemError as exc:  # rank test and elimination disagree
            raise NumericalInconsistency(str(exc)) from exc
        inverse_norm = float(np.linalg.norm(v))
        if inverse_norm <= 1.0 + 1e-12:
            raise NumericalInconsistency(
                f"|M^-1 u| = {inverse_norm!r} should exceed 1 for unit-row full-rank M")
        c = 1.0 / inverse_norm
        s = math.sqrt(1.0 - c * c)
        q = from_coords(v / inverse_norm)
        theta = math.acos(c)

    forms = (RotationForm(q, theta), RotationForm(-q, math.pi - theta))
    matrices = (rotation_from_cs(q, c, s), rotation_from_cs(-q, -c, s))
    residuals = tuple(
        SigmaResidual(m, sg, abs(re_dot(q, sg) - c),
                      tuple(adjoint_det(shift(A, sg)) for A in matrices))
        for m, sg in enumerate(sigmas))
    return ConstructionResult(branch, rank, q, c, theta, matrices, forms, residuals,
                              inverse_norm)


@dataclass(frozen=True)
class BoundCheck:
    lhs: float
    rhs: float
    strict: bool

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "strict": self.strict}


def bound_check(M: np.ndarray, w: np.ndarray, row_tol: float = DEFAULT_TOL) -> BoundCheck:
    """Compare ``|M w|`` with ``sqrt(n) |w|`` for square full-rank ``M`` with unit rows."""
    M = np.asarray(M, dtype=float)
    w = np.asarray(w, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise PreconditionError(f"M must be square, got shape {M.shape}")
    n = M.shape[0]
    if w.shape != (n,):
        raise PreconditionError(f"w must have length {n}")
    if not np.any(w):
        raise PreconditionError("w must be nonzero")
    row_norms = np.linalg.norm(M, axis=1)
    if np.any(np.abs(row_norms - 1.0) > row_tol):
        raise PreconditionError("rows of M must have unit Euclidean norm")
    rank, _ = rank_and_kernel(M)
    if rank < n:
        raise PreconditionError(f"M has numerical rank {rank} < {n}")
    lhs = float(np.linalg.norm(M @ w))
    rhs = math.sqrt(n) * float(np.linalg.norm(w))
    return BoundCheck(lhs, rhs, lhs < rhs)


def residual_ok(result: ConstructionResult, tol: float = EIGEN_TOL) -> bool:
    return result.max_condition_residual <= tol and result.max_margin <= tol
