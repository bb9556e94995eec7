import math

import numpy as np
import pytest

from sp2eig.hmat import MatH2
from sp2eig.quat import I, J, K, ONE, Quaternion, conj, mul, norm

U = Quaternion(1.0, 1.0, 1.0, 1.0)
SQ3 = math.sqrt(3.0)
# the two symplectic matrices having 1, i, j, k as left eigenvalues
EXAMPLE_PLUS = MatH2(U * 0.25, U * (-SQ3 / 4), U * (SQ3 / 4), U * 0.25)
EXAMPLE_MINUS = MatH2(U * 0.25, U * (SQ3 / 4), U * (-SQ3 / 4), U * 0.25)
SIGMA5 = (I + J) / math.sqrt(2.0)
BASIS = (ONE, I, J, K)


def study_det(A: MatH2) -> float:
    """Closed-form Study determinant of [[a, b], [c, d]], independent of the complex adjoint."""
    a, b, c, d = A.entries()
    cross = mul(mul(conj(a), b), mul(conj(d), c)).t
    return norm(a) ** 2 * norm(d) ** 2 + norm(b) ** 2 * norm(c) ** 2 - 2.0 * cross


def real_rep_det(A: MatH2) -> float:
    """Determinant of the 8x8 real left-multiplication matrix; equals study_det squared."""
    def left(q):
        t, x, y, z = q
        return np.array([[t, -x, -y, -z], [x, t, -z, y], [y, z, t, -x], [z, -y, x, t]])
    R = np.block([[left(A.a11), left(A.a12)], [left(A.a21), left(A.a22)]])
    return float(np.linalg.det(R))


def max_diff(A: MatH2, B: MatH2) -> float:
    return max(norm(p - q) for p, q in zip(A.entries(), B.entries()))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record a named acceptance verdict; the summary prints one line per criterion."""
    def record(name, ok, detail=""):
        ACCEPTANCE[name] = (bool(ok), detail)
        assert ok, f"{name}: {detail}"
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
