"""Scalar and Ricci curvature of diagonal invariant metrics and the constrained functional.

All formulas sum over ordered index tuples; the structure tensor holds [ijk] at every permutation.
Ricci coefficients are taken with respect to Q: Ric(g)|m_i = R_i Q|m_i.
"""

from __future__ import annotations

import logging
from typing import Union, Optional

import numpy as np
import scipy.linalg

from ._types import FloatArray
from .types import Spectrum, Candidate, SpaceSpec, DiagTensor, MetricPoint
from ._constants import FD_STEP, RANK_TOL, CRITICAL_TOL, CONSTRAINT_TOL, DEGENERACY_TOL
from ._exceptions import NotCriticalError, InvalidPointError, ConstraintViolationError

__all__ = [
    "CurvatureKernel",
    "scalar_curvature",
    "ricci_coefficients",
    "trace_T",
    "inner_g",
    "norm_g",
    "grad_constrained",
    "directional_derivative",
    "jacobian_dric",
    "ricci_singular_values",
    "is_rank_deficient",
    "hessian_constrained",
    "spectrum_at",
]

log: logging.Logger = logging.getLogger(__name__)

TensorLike = Union[DiagTensor, Candidate]


class CurvatureKernel:
    """Array form of the curvature formulas of one space.

    Every method takes x chart coordinates with the modules on the last axis, so a
    whole batch of metrics (a path, a sample) is evaluated in one call.
    """

    __slots__ = ("r", "d", "b", "C")

    def __init__(self, space: SpaceSpec) -> None:
        self.r = space.r
        self.d = space.dims()
        self.b = space.killing()
        self.C = space.structure_tensor()

    def scalar(self, x: FloatArray) -> FloatArray:
        inv = 1.0 / x
        killing = 0.5 * np.sum(self.d * self.b * inv, axis=-1)
        brackets = 0.25 * np.einsum("ijk,...i,...j,...k->...", self.C, inv, inv, x)
        return killing - brackets

    def ricci(self, x: FloatArray) -> FloatArray:
        inv = 1.0 / x
        mixed = np.einsum("ijk,...j,...k->...i", self.C, inv, x)
        inverse = np.einsum("ijk,...j,...k->...i", self.C, inv, inv)
        return 0.5 * self.b - mixed / (2.0 * self.d) + x**2 * inverse / (4.0 * self.d)

    def jacobian(self, x: FloatArray) -> FloatArray:
        """dR_i/dx_m, shape (..., r, r)."""
        inv = 1.0 / x
        inv2 = inv**2
        # A_i = sum_jk [ijk] x_k / x_j
        d_mixed = np.einsum("ijm,...j->...im", self.C, inv) - np.einsum("imk,...k->...im", self.C, x) * inv2[..., None, :]
        # B_i = sum_jk [ijk] / (x_j x_k)
        inverse = np.einsum("ijk,...j,...k->...i", self.C, inv, inv)
        d_inverse = -2.0 * np.einsum("imk,...k->...im", self.C, inv) * inv2[..., None, :]
        d_quad = x[..., :, None] ** 2 * d_inverse + np.eye(self.r) * (2.0 * x * inverse)[..., :, None]
        return (-d_mixed / 2.0 + d_quad / 4.0) / self.d[:, None]

    def jacobian_fd(self, x: FloatArray, *, step: float = FD_STEP) -> FloatArray:
        """Central difference version of `jacobian` for a single point."""
        jac = np.empty((self.r, self.r))
        for m in range(self.r):
            h = step * max(1.0, abs(float(x[m])))
            forward = x.copy()
            backward = x.copy()
            forward[m] += h
            backward[m] -= h
            jac[:, m] = (self.ricci(forward) - self.ricci(backward)) / (2.0 * h)
        return jac

    def inner(self, x: FloatArray, a: FloatArray, b: FloatArray) -> FloatArray:
        return np.sum(self.d * a * b / x**2, axis=-1)

    def trace(self, x: FloatArray, T: FloatArray) -> FloatArray:
        return np.sum(self.d * T / x, axis=-1)

    def grad(self, x: FloatArray, T: FloatArray) -> FloatArray:
        """g-gradient of S restricted to tr_g T = const, i.e. -Ric + (<Ric,T>/<T,T>) T."""
        ric = self.ricci(x)
        c = self.inner(x, ric, T) / self.inner(x, T, T)
        return -ric + c[..., None] * T

    def grad_norm(self, x: FloatArray, T: FloatArray) -> FloatArray:
        grad = self.grad(x, T)
        return np.sqrt(self.inner(x, grad, grad))

    def hessian_y(self, x: FloatArray) -> FloatArray:
        """Hessian of S in the y chart, symmetric since dS/dy_i = d_i R_i."""
        return -(self.d[:, None] * self.jacobian(x)) * (x**2)[..., None, :]

    def constrained_hessian(self, x: FloatArray, T: FloatArray) -> FloatArray:
        """The form -<dRic(X), Y>_g in a g-orthonormal basis of {X : <X, T>_g = 0}."""
        form = -(self.d / x**2)[:, None] * self.jacobian(x)
        scale = np.sqrt(self.d) / x
        basis = scipy.linalg.null_space((scale * T)[None, :]) / scale[:, None]
        return basis.T @ form @ basis


def _coords(space: SpaceSpec, p: MetricPoint) -> FloatArray:
    if p.r != space.r:
        raise InvalidPointError(f"point has {p.r} coordinates, space {space.name} has {space.r} modules")
    return p.x


def _tensor(space: SpaceSpec, A: TensorLike) -> FloatArray:
    values = A.array
    if values.shape != (space.r,):
        raise InvalidPointError(f"tensor has {values.shape[0]} components, space {space.name} has {space.r} modules")
    return values


def scalar_curvature(space: SpaceSpec, p: MetricPoint) -> float:
    return float(CurvatureKernel(space).scalar(_coords(space, p)))


def ricci_coefficients(space: SpaceSpec, p: MetricPoint) -> DiagTensor:
    return DiagTensor.of(CurvatureKernel(space).ricci(_coords(space, p)))


def trace_T(space: SpaceSpec, p: MetricPoint, T: Candidate) -> float:
    """tr_g T = sum d_i T_i / x_i."""
    return float(CurvatureKernel(space).trace(_coords(space, p), _tensor(space, T)))


def inner_g(space: SpaceSpec, A: TensorLike, B: TensorLike, p: MetricPoint) -> float:
    """<A, B>_g = sum d_i a_i b_i / x_i^2."""
    return float(CurvatureKernel(space).inner(_coords(space, p), _tensor(space, A), _tensor(space, B)))


def norm_g(space: SpaceSpec, A: TensorLike, p: MetricPoint) -> float:
    return float(np.sqrt(inner_g(space, A, A, p)))


def _check_constraint(kernel: CurvatureKernel, x: FloatArray, T: FloatArray, tol: float) -> None:
    residual = abs(float(kernel.trace(x, T)) - 1.0)
    if residual > tol:
        raise ConstraintViolationError(residual, tol=tol)


def grad_constrained(
    space: SpaceSpec,
    p: MetricPoint,
    T: Candidate,
    *,
    constraint_tol: float = CONSTRAINT_TOL,
) -> DiagTensor:
    kernel = CurvatureKernel(space)
    x = _coords(space, p)
    values = _tensor(space, T)
    _check_constraint(kernel, x, values, constraint_tol)
    return DiagTensor.of(kernel.grad(x, values))


def directional_derivative(space: SpaceSpec, p: MetricPoint, X: DiagTensor) -> float:
    """dS_g(X) = -<Ric(g), X>_g for a tangent vector X in the x chart."""
    kernel = CurvatureKernel(space)
    x = _coords(space, p)
    return -float(kernel.inner(x, kernel.ricci(x), _tensor(space, X)))


def jacobian_dric(space: SpaceSpec, p: MetricPoint, *, finite_difference: bool = False) -> FloatArray:
    """The r x r matrix dR_i/dx_j; `finite_difference` switches to central differences for cross-checks."""
    kernel = CurvatureKernel(space)
    x = _coords(space, p)
    if finite_difference:
        return kernel.jacobian_fd(x)
    return kernel.jacobian(x)


def ricci_singular_values(space: SpaceSpec, p: MetricPoint) -> FloatArray:
    """Singular values, descending, of dRic restricted to the complement of the radial direction."""
    x = _coords(space, p)
    complement = scipy.linalg.null_space(x[None, :])
    return scipy.linalg.svd(CurvatureKernel(space).jacobian(x) @ complement, compute_uv=False)


def is_rank_deficient(space: SpaceSpec, p: MetricPoint, *, tol: float = RANK_TOL) -> bool:
    """Whether dRic has rank below r - 1 at `p`."""
    sigma = ricci_singular_values(space, p)
    return bool(sigma[-1] < tol * sigma[0])


def spectrum_at(
    kernel: CurvatureKernel,
    x: FloatArray,
    T: FloatArray,
    *,
    degeneracy_tol: float = DEGENERACY_TOL,
) -> Spectrum:
    matrix = kernel.constrained_hessian(x, T)
    asymmetry = float(np.max(np.abs(matrix - matrix.T)))
    if asymmetry > 1e-9 * max(1.0, float(np.max(np.abs(matrix)))):
        log.debug("constrained Hessian asymmetric by %.3e", asymmetry)
    eigenvalues = scipy.linalg.eigh(0.5 * (matrix + matrix.T), eigvals_only=True)
    tolerance = degeneracy_tol * (float(np.max(np.abs(eigenvalues))) + 1.0)
    return Spectrum(
        eigenvalues=[float(value) for value in eigenvalues],
        co_index=int(np.sum(eigenvalues > tolerance)),
        degenerate=bool(np.any(np.abs(eigenvalues) <= tolerance)),
        tolerance=tolerance,
    )


def hessian_constrained(
    space: SpaceSpec,
    p: MetricPoint,
    T: Candidate,
    *,
    tol: float = CRITICAL_TOL,
    degeneracy_tol: float = DEGENERACY_TOL,
    constraint_tol: Optional[float] = None,
) -> Spectrum:
    """Spectrum of the Hessian of S restricted to tr_g T = 1 at a critical point.

    Away from critical points the form -<dRic(X), Y>_g is not the Hessian, so the
    gradient norm is checked first.
    """
    kernel = CurvatureKernel(space)
    x = _coords(space, p)
    values = _tensor(space, T)
    if constraint_tol is not None:
        _check_constraint(kernel, x, values, constraint_tol)
    grad_norm = float(kernel.grad_norm(x, values))
    if grad_norm > tol:
        raise NotCriticalError(grad_norm, tol=tol)
    return spectrum_at(kernel, x, values, degeneracy_tol=degeneracy_tol)
