"""Omega sets, the Cayley contraction, and covering experiments on Sp(2).

``Omega(sigma)`` is the set of ``A`` in Sp(2) with ``A - sigma I``
invertible.  Membership is measured by the adjoint determinant of
``A - sigma I`` against the same threshold used for left eigenvalues, so a
matrix lies outside ``Omega(sigma)`` exactly when ``sigma`` is one of its
left eigenvalues.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .hmat import (EIGEN_TOL, IDENTITY, MatH2, adjoint_det, adjoint_det_batch,
                   as_array, inverse, is_symplectic, random_symplectic, shift)
from .quat import DEFAULT_TOL, Quaternion, conj, norm
from .solver import construct

OMEGA_THRESHOLD = EIGEN_TOL
_PATH_SINGULAR = 1e-12


class PathUndefinedError(ArithmeticError):
    """The Cayley denominator is singular."""


def _check_inputs(A: MatH2, sigma: Quaternion):
    if not is_symplectic(A, 1e-8):
        raise ValueError("matrix is not symplectic (|A A* - I| > 1e-8)")
    if abs(norm(sigma) - 1.0) > DEFAULT_TOL:
        raise ValueError(f"sigma is not a unit quaternion (norm {norm(sigma)!r})")


@dataclass(frozen=True)
class OmegaMargin:
    sigma: Quaternion
    margin: float
    member: bool

    def to_dict(self) -> dict:
        return {"sigma": self.sigma.to_list(), "margin": self.margin, "member": self.member}


def omega_margin(A: MatH2, sigma: Quaternion, threshold: float = OMEGA_THRESHOLD) -> OmegaMargin:
    _check_inputs(A, sigma)
    margin = adjoint_det(shift(A, sigma))
    return OmegaMargin(sigma, margin, margin > threshold)


def cayley_path(A: MatH2, sigma: Quaternion, t: float) -> MatH2:
    """Point ``A_t`` on the contraction of ``Omega(sigma)`` to ``-sigma I``.

    ``A_t = ((1+t) A - (1-t) sigma I) ((1+t) I - (1-t) conj(sigma) A)^-1``;
    ``t = 1`` gives ``A`` and ``t = 0`` gives ``-sigma I``.
    """
    _check_inputs(A, sigma)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t!r}")
    if t == 0.0:
        if adjoint_det(shift(A, sigma)) <= _PATH_SINGULAR:
            raise PathUndefinedError("A is not in Omega(sigma); the path has no t = 0 endpoint")
        return MatH2.scalar(-sigma)
    num = (1 + t) * A - MatH2.scalar(sigma * (1 - t))
    den = (1 + t) * IDENTITY - (1 - t) * A.left_scale(conj(sigma))
    if adjoint_det(den) <= _PATH_SINGULAR:
        raise PathUndefinedError(f"Cayley denominator singular at t={t!r}")
    return num @ inverse(den)


@dataclass
class CoverReport:
    sigmas: list[Quaternion]
    samples: int
    injected: int
    seed: int
    threshold: float
    uncovered: list[tuple[MatH2, list[float]]] = field(default_factory=list)
    uncovered_indices: list[int] = field(default_factory=list)
    min_best_margin: float = float("inf")

    def to_dict(self) -> dict:
        return {
            "sigmas": [s.to_list() for s in self.sigmas],
            "samples": self.samples,
            "injected": self.injected,
            "seed": self.seed,
            "threshold": self.threshold,
            "min_best_margin": self.min_best_margin,
            "uncovered": [{"index": i, "matrix": A.to_list(), "margins": m}
                          for i, (A, m) in zip(self.uncovered_indices, self.uncovered)],
        }


def sample_stream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for sample ``index`` of an experiment seeded by ``seed``."""
    return np.random.default_rng([seed, index])


def cover_experiment(sigmas: Sequence[Quaternion], samples: int, seed: int = 0,
                     threshold: float = OMEGA_THRESHOLD,
                     inject: Sequence[MatH2] = ()) -> CoverReport:
    """Test whether the sets ``Omega(sigma)`` cover random elements of Sp(2).

    ``samples`` matrices are drawn, sample ``n`` from its own substream of
    ``seed``; matrices in ``inject`` are evaluated first and get the lowest
    indices.  A matrix is uncovered when every margin is ``<= threshold``.
    """
    sigmas = list(sigmas)
    if not sigmas:
        raise ValueError("need at least one sigma")
    if samples < 1 and not inject:
        raise ValueError("samples must be >= 1")
    for m, s in enumerate(sigmas):
        if abs(norm(s) - 1.0) > DEFAULT_TOL:
            raise ValueError(f"sigma[{m}] is not a unit quaternion")
    for A in inject:
        if not is_symplectic(A, 1e-8):
            raise ValueError("injected matrix is not symplectic")

    mats = list(inject) + [random_symplectic(sample_stream(seed, n)) for n in range(samples)]
    coords = np.stack([as_array(A) for A in mats])              # (N, 2, 2, 4)
    shifted = np.repeat(coords[:, None], len(sigmas), axis=1)    # (N, S, 2, 2, 4)
    sig = np.array([s.to_list() for s in sigmas])
    shifted[:, :, 0, 0] -= sig
    shifted[:, :, 1, 1] -= sig
    margins = adjoint_det_batch(shifted)                         # (N, S)
    best = margins.max(axis=1)

    report = CoverReport(sigmas, samples, len(inject), seed, threshold,
                         min_best_margin=float(best.min()))
    for n in np.flatnonzero(best <= threshold):
        report.uncovered.append((mats[n], [float(v) for v in margins[n]]))
        report.uncovered_indices.append(int(n))
    return report


def never_cover_witness(sigmas: Sequence[Quaternion]) -> MatH2:
    """A matrix of Sp(2) lying outside all four ``Omega(sigma_m)``."""
    if len(sigmas) != 4:
        raise ValueError(f"need exactly four sigmas, got {len(sigmas)}")
    return construct(*sigmas).matrices[0]
