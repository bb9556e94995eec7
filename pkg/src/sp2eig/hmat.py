"""2x2 quaternionic matrices, Sp(2), and the rotation family ``L_q R_theta``.

Matrices act on H^2 viewed as a right H-module: entries multiply vector
components from the left, scalars act on vectors from the right.
Invertibility is decided by the determinant of the 4x4 complex adjoint.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .quat import (DEFAULT_TOL, ONE, ZERO, Quaternion, conj, mul, norm,
                   random_unit, re_dot)

EIGEN_TOL = 1e-8
SYMPLECTIC_TOL = 1e-9
_IMAG_RESIDUE_MAX = 1e-8
_GRAM_SCHMIDT_PIVOT = 1e-8


class SingularMatrixError(ArithmeticError):
    """A quaternionic matrix that had to be inverted is singular."""


@dataclass(frozen=True, slots=True)
class MatH2:
    a11: Quaternion
    a12: Quaternion
    a21: Quaternion
    a22: Quaternion

    @classmethod
    def from_rows(cls, rows) -> MatH2:
        """Build from ``[[q, q], [q, q]]``; entries may be Quaternions or 4-sequences."""
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ValueError("MatH2 needs a 2x2 nested array")
        e = [[q if isinstance(q, Quaternion) else Quaternion.from_seq(q) for q in r]
             for r in rows]
        return cls(e[0][0], e[0][1], e[1][0], e[1][1])

    @classmethod
    def scalar(cls, q: Quaternion) -> MatH2:
        return cls(q, ZERO, ZERO, q)

    def rows(self) -> tuple[tuple[Quaternion, Quaternion], tuple[Quaternion, Quaternion]]:
        return ((self.a11, self.a12), (self.a21, self.a22))

    def entries(self) -> tuple[Quaternion, ...]:
        return (self.a11, self.a12, self.a21, self.a22)

    def to_list(self) -> list:
        return [[self.a11.to_list(), self.a12.to_list()],
                [self.a21.to_list(), self.a22.to_list()]]

    def __add__(self, other: MatH2) -> MatH2:
        return MatH2(*(p + q for p, q in zip(self.entries(), other.entries())))

    def __sub__(self, other: MatH2) -> MatH2:
        return MatH2(*(p - q for p, q in zip(self.entries(), other.entries())))

    def __neg__(self) -> MatH2:
        return MatH2(*(-p for p in self.entries()))

    def __mul__(self, s: float) -> MatH2:
        return MatH2(*(p * s for p in self.entries()))

    __rmul__ = __mul__

    def __matmul__(self, other: MatH2) -> MatH2:
        return mat_mul(self, other)

    def left_scale(self, q: Quaternion) -> MatH2:
        """``(q I) A``: multiply every entry by ``q`` from the left."""
        return MatH2(*(mul(q, p) for p in self.entries()))


IDENTITY = MatH2(ONE, ZERO, ZERO, ONE)


@dataclass(frozen=True, slots=True)
class RotationForm:
    """The matrix ``[[q cos(theta), -q sin(theta)], [q sin(theta), q cos(theta)]]``."""
    q: Quaternion
    theta: float

    def __post_init__(self):
        if abs(norm(self.q) - 1.0) > DEFAULT_TOL:
            raise ValueError(f"rotation form needs a unit quaternion, |q|={norm(self.q)!r}")

    def to_dict(self) -> dict:
        return {"q": self.q.to_list(), "theta": self.theta,
                "cos_theta": math.cos(self.theta)}


def mat_mul(A: MatH2, B: MatH2) -> MatH2:
    return MatH2(
        mul(A.a11, B.a11) + mul(A.a12, B.a21),
        mul(A.a11, B.a12) + mul(A.a12, B.a22),
        mul(A.a21, B.a11) + mul(A.a22, B.a21),
        mul(A.a21, B.a12) + mul(A.a22, B.a22),
    )


def dagger(A: MatH2) -> MatH2:
    """Conjugate transpose."""
    return MatH2(conj(A.a11), conj(A.a21), conj(A.a12), conj(A.a22))


def max_entry_norm(A: MatH2) -> float:
    return max(norm(q) for q in A.entries())


def symplectic_residual(A: MatH2) -> float:
    """Largest entry norm of ``A A* - I``."""
    return max_entry_norm(mat_mul(A, dagger(A)) - IDENTITY)


def is_symplectic(A: MatH2, tol: float = SYMPLECTIC_TOL) -> bool:
    if tol < 0:
        raise ValueError("tol must be non-negative")
    return symplectic_residual(A) <= tol


def rotation_from_cs(q: Quaternion, c: float, s: float) -> MatH2:
    """Rotation-form matrix from explicit ``cos`` and ``sin`` values."""
    qc, qs = q * c, q * s
    return MatH2(qc, -qs, qs, qc)


def rotation_matrix(f: RotationForm) -> MatH2:
    return rotation_from_cs(f.q, math.cos(f.theta), math.sin(f.theta))


def detect_rotation_form(A: MatH2, tol: float = DEFAULT_TOL) -> RotationForm | None:
    """Recover ``(q, theta)`` with ``theta`` in (0, pi) if ``A`` is ``L_q R_theta``.

    Returns None for symplectic matrices outside the infinite-spectrum
    family, including ``sin(theta) = 0``.
    """
    if not is_symplectic(A, max(tol, SYMPLECTIC_TOL)):
        raise ValueError("detect_rotation_form expects a symplectic matrix")
    if norm(A.a11 - A.a22) > tol or norm(A.a21 + A.a12) > tol:
        return None
    n11, n21 = norm(A.a11), norm(A.a21)
    if n21 <= tol:
        return None
    if norm(mul(A.a11, conj(A.a21)).imag) > tol:
        return None
    if n11 >= n21:
        q = A.a11 / n11
        if re_dot(q, A.a21) < 0:
            q = -q
    else:
        q = A.a21 / n21
    q = q / norm(q)
    s = re_dot(q, A.a21)
    if s <= tol:
        return None
    return RotationForm(q, math.atan2(s, re_dot(q, A.a11)))


def eigen_sphere_point(f: RotationForm, omega: Quaternion) -> Quaternion:
    """The left eigenvalue ``q (cos(theta) + sin(theta) omega)`` of ``L_q R_theta``."""
    if abs(omega.t) > DEFAULT_TOL or abs(norm(omega) - 1.0) > DEFAULT_TOL:
        raise ValueError("omega must be a unit imaginary quaternion")
    return mul(f.q, math.cos(f.theta) + omega * math.sin(f.theta))


def _quat_block(q: Quaternion) -> np.ndarray:
    # q = a + b j with a = t + x i, b = y + z i
    a = complex(q.t, q.x)
    b = complex(q.y, q.z)
    return np.array([[a, b], [-b.conjugate(), a.conjugate()]])


def complex_adjoint(A: MatH2) -> np.ndarray:
    """4x4 complex matrix representing ``A``; multiplicative in ``A``."""
    return np.block([[_quat_block(A.a11), _quat_block(A.a12)],
                     [_quat_block(A.a21), _quat_block(A.a22)]])


def complex_adjoint_batch(entries: np.ndarray) -> np.ndarray:
    """Vectorized ``complex_adjoint`` for an array of shape (..., 2, 2, 4)."""
    a = entries[..., 0] + 1j * entries[..., 1]
    b = entries[..., 2] + 1j * entries[..., 3]
    out = np.empty(entries.shape[:-3] + (4, 4), dtype=complex)
    for r in range(2):
        for c in range(2):
            out[..., 2 * r, 2 * c] = a[..., r, c]
            out[..., 2 * r, 2 * c + 1] = b[..., r, c]
            out[..., 2 * r + 1, 2 * c] = -b[..., r, c].conj()
            out[..., 2 * r + 1, 2 * c + 1] = a[..., r, c].conj()
    return out


def _real_det(det: np.ndarray | complex, scale: np.ndarray | float):
    residue = np.max(np.abs(np.imag(det)) / np.maximum(scale, 1.0))
    if residue > _IMAG_RESIDUE_MAX:
        raise FloatingPointError(f"complex adjoint determinant has imaginary residue {residue:.3e}")
    return np.real(det)


def adjoint_det(A: MatH2) -> float:
    """Determinant of the complex adjoint (the Study determinant); zero iff ``A`` is singular."""
    C = complex_adjoint(A)
    scale = float(np.prod(np.linalg.norm(C, axis=1)))
    return float(_real_det(np.linalg.det(C), scale))


def adjoint_det_batch(entries: np.ndarray) -> np.ndarray:
    """``adjoint_det`` over an array of matrix coordinates, shape (..., 2, 2, 4)."""
    C = complex_adjoint_batch(entries)
    scale = np.prod(np.linalg.norm(C, axis=-1), axis=-1)
    return _real_det(np.linalg.det(C), scale)


def as_array(A: MatH2) -> np.ndarray:
    """Coordinates of ``A`` as a (2, 2, 4) float array."""
    return np.array(A.to_list(), dtype=float)


def shift(A: MatH2, sigma: Quaternion) -> MatH2:
    """``A - sigma I``."""
    return MatH2(A.a11 - sigma, A.a12, A.a21, A.a22 - sigma)


def is_left_eigenvalue(A: MatH2, sigma: Quaternion, tol: float = EIGEN_TOL) -> bool:
    """True when ``A v = sigma v`` has a nonzero solution, i.e. ``A - sigma I`` is singular."""
    return adjoint_det(shift(A, sigma)) <= tol


def inverse(A: MatH2) -> MatH2:
    """Inverse by block elimination, pivoting on the larger first-column entry."""
    if adjoint_det(A) <= 1e-12 * max(max_entry_norm(A), 1.0) ** 4:
        raise SingularMatrixError("matrix is singular (adjoint determinant below 1e-12)")
    swapped = norm(A.a21) > norm(A.a11)
    a, b, c, d = (A.a21, A.a22, A.a11, A.a12) if swapped else A.entries()
    ai = a.conj() / (norm(a) ** 2)
    ai_b = mul(ai, b)
    s = d - mul(c, ai_b)
    si = s.conj() / (norm(s) ** 2)
    c_ai = mul(c, ai)
    i12 = -mul(ai_b, si)
    i21 = -mul(si, c_ai)
    i11 = ai - mul(i12, c_ai)
    B = MatH2(i11, i12, i21, si)
    # (P A)^-1 = A^-1 P, so undo the row swap by swapping columns
    return MatH2(B.a12, B.a11, B.a22, B.a21) if swapped else B


def _column_gram_schmidt(c1: tuple[Quaternion, Quaternion],
                         c2: tuple[Quaternion, Quaternion]) -> MatH2 | None:
    n1 = math.sqrt(norm(c1[0]) ** 2 + norm(c1[1]) ** 2)
    if n1 < _GRAM_SCHMIDT_PIVOT:
        return None
    e1 = (c1[0] / n1, c1[1] / n1)
    # <e1, c2> = e1* c2; the projection acts from the right
    h = mul(conj(e1[0]), c2[0]) + mul(conj(e1[1]), c2[1])
    r = (c2[0] - mul(e1[0], h), c2[1] - mul(e1[1], h))
    n2 = math.sqrt(norm(r[0]) ** 2 + norm(r[1]) ** 2)
    if n2 < _GRAM_SCHMIDT_PIVOT:
        return None
    e2 = (r[0] / n2, r[1] / n2)
    return MatH2(e1[0], e2[0], e1[1], e2[1])


def random_symplectic(rng: np.random.Generator) -> MatH2:
    """Haar-distributed element of Sp(2) via right-module Gram-Schmidt."""
    while True:
        g = rng.standard_normal((2, 2, 4))
        A = _column_gram_schmidt((Quaternion(*g[0, 0]), Quaternion(*g[1, 0])),
                                 (Quaternion(*g[0, 1]), Quaternion(*g[1, 1])))
        if A is not None:
            return A


def random_matrix(rng: np.random.Generator) -> MatH2:
    """Entries with i.i.d. standard normal coordinates."""
    g = rng.standard_normal((2, 2, 4))
    return MatH2.from_rows(g.tolist())


def random_imaginary_unit(rng: np.random.Generator) -> Quaternion:
    while True:
        v = rng.standard_normal(3)
        n = float(np.sqrt(v @ v))
        if n > 1e-12:
            return Quaternion(0.0, *(v / n))


def random_rotation_form(rng: np.random.Generator, min_abs_sin: float = 0.0) -> RotationForm:
    while True:
        theta = float(rng.uniform(-math.pi, math.pi))
        if abs(math.sin(theta)) > min_abs_sin:
            return RotationForm(random_unit(rng), theta)


def parse_matrix(data: Sequence) -> MatH2:
    return MatH2.from_rows(data)
