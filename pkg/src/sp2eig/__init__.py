"""Symplectic 2x2 quaternionic matrices with prescribed left eigenvalues."""
from .hmat import (IDENTITY, MatH2, RotationForm, adjoint_det, dagger,
                   detect_rotation_form, eigen_sphere_point, is_left_eigenvalue,
                   is_symplectic, mat_mul, random_symplectic, rotation_matrix)
from .quat import I, J, K, ONE, Quaternion, conj, mul, norm, random_unit, re_dot, similar
from .solver import (Branch, ConstructionResult, bound_check, construct, coords,
                     rank_and_kernel, solve_linear)
from .topology import (CoverReport, OmegaMargin, cayley_path, cover_experiment,
                       never_cover_witness, omega_margin)

__version__ = "0.1.0"
