"""Quaternion arithmetic.

A quaternion ``t + x i + y j + z k`` is stored as the coordinate tuple
``(t, x, y, z)``; that order is also the JSON encoding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

DEFAULT_TOL = 1e-9
_INVERSE_FLOOR = 1e-12


@dataclass(frozen=True, slots=True)
class Quaternion:
    t: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        for name in ("t", "x", "y", "z"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"non-finite quaternion coordinate {name}={value}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_seq(cls, values: Sequence[float]) -> Quaternion:
        if len(values) != 4:
            raise ValueError(f"quaternion needs 4 coordinates, got {len(values)}")
        return cls(*values)

    def to_list(self) -> list[float]:
        return [self.t, self.x, self.y, self.z]

    def __iter__(self):
        return iter((self.t, self.x, self.y, self.z))

    def __add__(self, other: Quaternion) -> Quaternion:
        if not isinstance(other, Quaternion):
            other = Quaternion(other)
        return Quaternion(self.t + other.t, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other: Quaternion) -> Quaternion:
        if not isinstance(other, Quaternion):
            other = Quaternion(other)
        return Quaternion(self.t - other.t, self.x - other.x,
                          self.y - other.y, self.z - other.z)

    def __rsub__(self, other) -> Quaternion:
        return Quaternion(other) - self

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.t, -self.x, -self.y, -self.z)

    def __mul__(self, other) -> Quaternion:
        if isinstance(other, Quaternion):
            return mul(self, other)
        s = float(other)
        return Quaternion(s * self.t, s * self.x, s * self.y, s * self.z)

    def __rmul__(self, other) -> Quaternion:
        # only reached for real scalars, which are central
        s = float(other)
        return Quaternion(s * self.t, s * self.x, s * self.y, s * self.z)

    def __truediv__(self, other) -> Quaternion:
        if isinstance(other, Quaternion):
            return mul(self, inverse(other))
        s = float(other)
        return Quaternion(self.t / s, self.x / s, self.y / s, self.z / s)

    @property
    def real(self) -> float:
        return self.t

    @property
    def imag(self) -> Quaternion:
        return Quaternion(0.0, self.x, self.y, self.z)

    def conj(self) -> Quaternion:
        return conj(self)

    def norm(self) -> float:
        return norm(self)

    def __repr__(self) -> str:
        return f"Quaternion({self.t!r}, {self.x!r}, {self.y!r}, {self.z!r})"


ZERO = Quaternion(0.0, 0.0, 0.0, 0.0)
ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q``."""
    t1, x1, y1, z1 = p.t, p.x, p.y, p.z
    t2, x2, y2, z2 = q.t, q.x, q.y, q.z
    return Quaternion(
        t1 * t2 - x1 * x2 - y1 * y2 - z1 * z2,
        t1 * x2 + x1 * t2 + y1 * z2 - z1 * y2,
        t1 * y2 - x1 * z2 + y1 * t2 + z1 * x2,
        t1 * z2 + x1 * y2 - y1 * x2 + z1 * t2,
    )


def conj(q: Quaternion) -> Quaternion:
    return Quaternion(q.t, -q.x, -q.y, -q.z)


def norm(q: Quaternion) -> float:
    return math.sqrt(q.t * q.t + q.x * q.x + q.y * q.y + q.z * q.z)


def inverse(q: Quaternion) -> Quaternion:
    n = norm(q)
    if n <= _INVERSE_FLOOR:
        raise ZeroDivisionError(f"quaternion norm {n:.3e} too small to invert")
    n2 = n * n
    return Quaternion(q.t / n2, -q.x / n2, -q.y / n2, -q.z / n2)


def re_dot(p: Quaternion, q: Quaternion) -> float:
    """Real part of ``conj(p) q``, i.e. the dot product in R^4."""
    return p.t * q.t + p.x * q.x + p.y * q.y + p.z * q.z


def similar(p: Quaternion, q: Quaternion, tol: float = DEFAULT_TOL) -> bool:
    """True when ``p`` and ``q`` are conjugate in H (same norm, same real part)."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    return abs(norm(p) - norm(q)) <= tol and abs(p.t - q.t) <= tol


def is_unit(q: Quaternion, tol: float = DEFAULT_TOL) -> bool:
    return abs(norm(q) - 1.0) <= tol


def random_unit(rng: np.random.Generator) -> Quaternion:
    """Uniform sample on S^3: four standard normals, normalized."""
    while True:
        v = rng.standard_normal(4)
        n = float(np.sqrt(v @ v))
        if n > _INVERSE_FLOOR:
            return Quaternion(*(v / n))
