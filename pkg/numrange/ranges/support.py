"""Support functions of W_n(T).

For ``w`` in ``C^n`` the support value is ``sup Re<tau(T, e), w>`` over all
orthonormal n-frames ``e``. Writing ``H_j = hermitian_part(T, w_j)`` the
objective is ``sum_j <H_j e_j, e_j>``, a smooth function on the complex
Stiefel manifold. For ``n = 1`` the supremum is the top eigenvalue of
``H_1``; for general ``n`` it is estimated by Riemannian gradient ascent with
Armijo backtracking and Gram-Schmidt retraction from several Haar starts.
"""

from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass

import numpy as np

from .. import defaults
from ..errors import ContractViolationError, DegenerateInputError, DimensionError, InvalidInputError
from ..frames import Frame, check_size, derive_seed, haar_frame
from ..numerics import ComplexMatrix, gram_schmidt, hermitian_eigensystem, hermitian_part
from ..utils import ThreadPool
from .point import complex_pairs, tau

logger = logging.getLogger(__name__)


def support_exact_1d(T, theta):
    """Closed-form support of the numerical range in direction ``e^{i theta}``.

    Returns:
        tuple: ``(value, vector)``, the top eigenpair of ``hermitian_part(T, e^{i theta})``.
    """
    system = hermitian_eigensystem(hermitian_part(T, cmath.exp(1j * float(theta))))
    return system.top


def check_direction(w, n):
    w = np.asarray(w, dtype=np.complex128).reshape(-1)
    if w.shape[0] != n:
        raise DimensionError(f"direction in C^{w.shape[0]} for W_{n}")
    if not np.all(np.isfinite(w)):
        raise InvalidInputError("direction must be finite")
    norm = float(np.linalg.norm(w))
    if norm == 0.0:
        raise ContractViolationError("the zero vector is not a direction")
    if abs(norm - 1.0) > defaults.UNIT_TOL:
        raise ContractViolationError(f"direction must have unit norm, got {norm:.12g}")
    return w


def support_objective(T, w, frame):
    """``Re<tau(T, frame), w>``."""
    return float(np.real(np.vdot(w, tau(T, frame))))


def _euclidean_gradient(A, w, F):
    # column j is 2 H_j e_j = conj(w_j) T e_j + w_j T* e_j
    return (A @ F) * w.conj()[None, :] + (A.conj().T @ F) * w[None, :]


def _tangent(F, G):
    FG = F.conj().T @ G
    return G - F @ ((FG + FG.conj().T) / 2)


def riemannian_gradient(T, w, frame):
    """Riemannian gradient of the support objective at ``frame`` (real inner product ``Re tr(X* Y)``)."""
    T = ComplexMatrix.coerce(T)
    w = np.asarray(w, dtype=np.complex128).reshape(-1)
    F = frame.columns
    return _tangent(F, _euclidean_gradient(T.entries, w, F))


def retract(F, step):
    """Gram-Schmidt retraction of ``F + step`` back onto the Stiefel manifold."""
    return gram_schmidt((F + step).T)


class StiefelAscent:
    """Riemannian gradient ascent for one direction.

    The ascent runs on ``A = (T - mu I) / (4 ||T - mu I||)`` with ``mu`` the
    mean eigenvalue. The shift moves the objective by a constant and leaves
    the Riemannian gradient unchanged. The scale keeps the spread of every
    Hermitian part below 1/2, so a unit step never flips the sign of an
    eigencomponent. The first Armijo search starts from step 1; later ones
    start from a safeguarded Barzilai-Borwein step. Values and gradient norms
    are reported in the original scale.

    Attributes:
        shift (complex): mean eigenvalue ``tr(T) / d``.
        scale (float): ``4 ||T - shift I||``, or 1 when ``T`` is a multiple of the identity.
        A (ndarray): the centered and rescaled operator.
        w (ndarray): unit direction.
    """

    def __init__(self, T, w, max_iter=None, grad_rtol=None):
        self.norm = T.norm
        self.shift = complex(np.trace(T.entries)) / T.d
        centered = T.entries - self.shift * np.eye(T.d, dtype=np.complex128)
        spread = float(np.linalg.norm(centered, 2))
        self.scale = defaults.ASCENT_SCALE_FACTOR * spread if spread > 0 else 1.0
        self.A = centered / self.scale
        self.w = w
        self.offset = float(np.real(self.shift * np.sum(w.conj())))
        self.max_iter = defaults.ASCENT_MAX_ITER if max_iter is None else max_iter
        self.grad_rtol = defaults.ASCENT_GRAD_RTOL if grad_rtol is None else grad_rtol

    def objective(self, F):
        values = np.einsum("ij,ij->j", F.conj(), self.A @ F)
        return float(np.real(np.vdot(self.w, values)))

    def gradient(self, F):
        return _tangent(F, _euclidean_gradient(self.A, self.w, F))

    def initial_step(self, steps, s, y):
        """Barzilai-Borwein step from the last move ``s`` and gradient change ``y``, alternating both formulas."""
        if s is None:
            return defaults.ARMIJO_STEP
        sy = abs(float(np.real(np.vdot(s, y))))
        ss = float(np.real(np.vdot(s, s)))
        yy = float(np.real(np.vdot(y, y)))
        if sy == 0.0 or ss == 0.0 or yy == 0.0:
            return defaults.ARMIJO_STEP
        step = ss / sy if steps % 2 else sy / yy
        return min(max(step, defaults.BB_STEP_MIN), defaults.BB_STEP_MAX)

    def run(self, F):
        """Ascend from ``F``; returns ``(F, value, grad_norm, iterations)`` in the original scale."""
        F = np.array(F, dtype=np.complex128)
        f = self.objective(F)
        xi = self.gradient(F)
        grad_norm = float(np.linalg.norm(xi))
        target = self.grad_rtol * self.norm / self.scale
        s = y = None
        steps = 0
        while steps < self.max_iter and grad_norm > target:
            slope = defaults.ARMIJO_SLOPE * grad_norm**2
            slack = defaults.ARMIJO_ROUNDOFF * max(1.0, abs(f))
            step = self.initial_step(steps, s, y)
            for _ in range(defaults.ARMIJO_MAX_HALVINGS):
                try:
                    F_new = retract(F, step * xi)
                except DegenerateInputError:
                    step *= defaults.ARMIJO_FACTOR
                    continue
                f_new = self.objective(F_new)
                if f_new >= f + step * slope - slack:
                    break
                step *= defaults.ARMIJO_FACTOR
            else:
                logger.debug("Armijo search stalled after %d steps, gradient norm %.3e", steps, grad_norm)
                break
            xi_new = self.gradient(F_new)
            s, y = F_new - F, xi_new - xi
            F, f, xi = F_new, f_new, xi_new
            grad_norm = float(np.linalg.norm(xi))
            steps += 1
        return F, f * self.scale + self.offset, grad_norm * self.scale, steps


class RestartRunner(ThreadPool):
    """Thread pool running independent ascents from a list of start frames."""

    def __init__(self, ascent, thread_num=1, name="restart"):
        super().__init__(thread_num=thread_num, name=name)
        self.ascent = ascent

    def process(self, start, **kwargs):
        return self.ascent.run(start.columns)


@dataclass(frozen=True, eq=False)
class SupportResult:
    """Best ascent limit for one direction.

    Attributes:
        direction (ndarray): unit direction ``w``.
        value (float): ``Re<tau(T, maximizer), w>``, a lower bound of the support value.
        maximizer (Frame): frame attaining ``value``.
        restarts_used (int): number of starts evaluated.
        converged (bool): whether the final Riemannian gradient norm is at most ``1e-8 ||T||``.
        grad_norm (float): final Riemannian gradient norm of the maximizer.
        iterations (int): ascent iterations spent on the maximizer.
    """

    direction: np.ndarray
    value: float
    maximizer: Frame
    restarts_used: int
    converged: bool
    grad_norm: float = 0.0
    iterations: int = 0

    def to_dict(self):
        return {
            "direction": complex_pairs(self.direction),
            "value": self.value,
            "converged": self.converged,
            "restarts_used": self.restarts_used,
            "grad_norm": self.grad_norm,
            "iterations": self.iterations,
            "maximizer": [complex_pairs(c) for c in self.maximizer.columns.T],
        }


def support_stiefel(T, n, w, restarts=None, seed=0, initial=None, workers=1):
    """Estimate the support value of ``W_n(T)`` in direction ``w``.

    Args:
        T (ComplexMatrix): the operator.
        n (int): range dimension.
        w: unit vector of ``C^n``.
        restarts (int): number of Haar starts.
        seed (int): seed of the Haar starts; restart ``r`` uses ``derive_seed(seed, r)``.
        initial (list of Frame, optional): extra starts, evaluated before the Haar ones.
        workers (int): threads used for the restarts.

    Returns:
        SupportResult: the best restart; ties within ``1e-12`` keep the lowest index.
    """
    T = ComplexMatrix.coerce(T)
    check_size(T.d, n)
    w = check_direction(w, n)
    restarts = defaults.RESTARTS if restarts is None else int(restarts)
    if restarts < 1:
        raise InvalidInputError(f"at least one restart is required, got {restarts}")
    starts = list(initial or [])
    for frame in starts:
        if frame.d != T.d or frame.n != n:
            raise DimensionError(f"initial frame of shape {(frame.d, frame.n)} for W_{n} in C^{T.d}")
    starts += [haar_frame(T.d, n, derive_seed(seed, r)) for r in range(restarts)]

    ascent = StiefelAscent(T, w)
    outcomes = RestartRunner(ascent, thread_num=workers).map(starts)

    tie = defaults.RESTART_TIE_TOL * max(T.norm, 1.0)
    best = None
    for idx, (F, value, grad_norm, iterations) in enumerate(outcomes):
        if best is None or value > best[1] + tie:
            best = (F, value, grad_norm, iterations, idx)
    F, _, grad_norm, iterations, idx = best
    maximizer = Frame(F)
    converged = grad_norm <= defaults.ASCENT_GRAD_RTOL * T.norm
    if not converged:
        logger.warning("support ascent did not converge (gradient %.3e after %d iterations)", grad_norm, iterations)
    logger.debug("support value found by start #%d of %d", idx, len(starts))
    return SupportResult(
        direction=w,
        value=support_objective(T, w, maximizer),
        maximizer=maximizer,
        restarts_used=len(starts),
        converged=bool(converged),
        grad_norm=grad_norm,
        iterations=iterations,
    )
