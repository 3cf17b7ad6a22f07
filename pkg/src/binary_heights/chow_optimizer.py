"""
Minimization of Chow norms over SU(2)\\SL2(C).

The coset of M in SL2(C) is the positive-definite Hermitian matrix P = M^H M
with det P = 1, and sum b_i log ||M p_i||^2 = sum b_i log(p_i^H P p_i). The
minimizer satisfies the balanced condition

    sum b_i v_i v_i^H / (v_i^H P v_i) = (d/2) P^-1

and is reached by the fixed-point map P <- (sum (b_i/d) v_i v_i^H / (v_i^H P v_i))^-1
rescaled to determinant 1, which decreases the objective at every step.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
import scipy.optimize

from config import config

from .binary_forms import BinaryForm, Matrix2, RootDivisor, act, is_semistable
from .errors import DivergenceError, DomainError, NonConvergenceError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HermitianCoset:
    """Positive-definite Hermitian 2x2 matrix of determinant 1."""

    matrix: Tuple[Tuple[complex, complex], Tuple[complex, complex]]

    def __post_init__(self):
        P = np.array(self.matrix, dtype=complex)
        scale = max(1.0, float(np.abs(P).max()))
        if np.abs(P - P.conj().T).max() > 1e-12 * scale:
            raise DomainError("coset matrix is not Hermitian")
        try:
            scipy.linalg.cholesky(P, lower=True)
        except np.linalg.LinAlgError as e:
            raise DomainError("coset matrix is not positive definite") from e
        det = np.linalg.det(P).real
        if abs(det - 1) > 1e-12 * scale**2:
            raise DomainError(f"coset matrix has determinant {det}, expected 1")

    @classmethod
    def identity(cls) -> "HermitianCoset":
        return cls(((1 + 0j, 0j), (0j, 1 + 0j)))

    @classmethod
    def from_array(cls, P: np.ndarray) -> "HermitianCoset":
        """Symmetrize and rescale to determinant 1."""
        P = (np.asarray(P, dtype=complex) + np.asarray(P, dtype=complex).conj().T) / 2
        P = P / math.sqrt(np.linalg.det(P).real)
        return cls(tuple(tuple(complex(v) for v in row) for row in P))

    @classmethod
    def from_matrix(cls, M: np.ndarray) -> "HermitianCoset":
        """The coset of M in SL2(C) (M is rescaled to determinant 1 first)."""
        M = np.asarray(M, dtype=complex)
        return cls.from_array(M.conj().T @ M)

    def as_array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=complex)

    def is_identity(self, tol: float = 1e-8) -> bool:
        return float(np.abs(self.as_array() - np.eye(2)).max()) <= tol


@dataclass
class ChowMinimization:
    """Result of minimize_chow_norm."""

    cosets: List[HermitianCoset]
    min_value: float
    iterations: int
    residual: float
    objective: str
    orbit_values: List[float] = field(default_factory=list)
    matrix: Optional[np.ndarray] = None  # coefficient objective only

    @property
    def coset(self) -> HermitianCoset:
        return self.cosets[0]


def _hpd_power(A: np.ndarray, t: float) -> np.ndarray:
    w, U = scipy.linalg.eigh(A)
    return (U * w**t) @ U.conj().T


def _geodesic(P: np.ndarray, T: np.ndarray, t: float) -> np.ndarray:
    """Point at parameter t on the affine-invariant geodesic from P to T."""
    half = _hpd_power(P, 0.5)
    inv_half = _hpd_power(P, -0.5)
    return half @ _hpd_power(inv_half @ T @ inv_half, t) @ half


def chow_objective(P: np.ndarray, vectors: np.ndarray, weights: np.ndarray) -> float:
    """sum b_i log(v_i^H P v_i)."""
    q = np.einsum("ij,jk,ik->i", vectors.conj(), P, vectors).real
    return float(np.dot(weights, np.log(q)))


def _balance(P: np.ndarray, vectors: np.ndarray, weights: np.ndarray) -> np.ndarray:
    q = np.einsum("ij,jk,ik->i", vectors.conj(), P, vectors).real
    return np.einsum("i,ij,ik->jk", weights / q, vectors, vectors.conj())


def _balanced_residual(P: np.ndarray, G: np.ndarray, d: float) -> Tuple[float, float]:
    """(gradient norm, relative residual) of the balanced condition at P."""
    half = _hpd_power(P, 0.5)
    S = half @ G @ half
    gradient = float(np.linalg.norm(S - (d / 2) * np.eye(2)))
    return gradient, gradient / (d / 2)


def _check_semistable(weights: np.ndarray, label: str) -> None:
    total = weights.sum()
    if 2 * weights.max() > total:
        raise DivergenceError(
            f"{label}: a point of multiplicity {int(weights.max())} exceeds half of {int(total)}; "
            "the Chow norm has infimum -infinity"
        )


def _fixed_point(
    vectors: np.ndarray,
    weights: np.ndarray,
    tolerance: float,
    max_iterations: int,
) -> Tuple[np.ndarray, float, int, float]:
    d = float(weights.sum())
    P = np.eye(2, dtype=vectors.dtype)
    value = chow_objective(P, vectors, weights)
    for iteration in range(max_iterations + 1):
        G = _balance(P, vectors, weights)
        gradient, residual = _balanced_residual(P, G, d)
        if gradient < tolerance:
            logger.debug(f"balanced after {iteration} iterations, residual {residual:.2e}")
            return P, value, iteration, residual
        if iteration == max_iterations:
            break
        T = np.linalg.inv(G)
        T = (T + T.conj().T) / 2
        T = T / math.sqrt(np.linalg.det(T).real)
        candidate = chow_objective(T, vectors, weights)
        step = 1.0
        target = T
        while candidate > value + 1e-15 * max(1.0, abs(value)) and step > 1e-8:
            step /= 2
            T = _geodesic(P, target, step)
            candidate = chow_objective(T, vectors, weights)
        if candidate > value + 1e-15 * max(1.0, abs(value)):
            # objective is flat to rounding: accept if balanced to the reporting tolerance
            if residual < config.optimizer.balanced_tolerance:
                logger.debug(f"stalled at iteration {iteration} with residual {residual:.2e}")
                return P, value, iteration, residual
            break
        P, value = T, candidate
    raise NonConvergenceError(
        f"Chow norm iteration did not balance within {max_iterations} iterations",
        last_iterate=P,
        iterations=max_iterations,
    )


def _root_arrays(div: RootDivisor, real: bool) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    raw = div.points()
    norms = np.linalg.norm(raw, axis=1)
    vectors = raw / norms[:, None]
    weights = np.array(div.multiplicities, dtype=float)
    if real:
        if np.abs(vectors.imag).max() > 1e-12:
            raise DomainError("real minimization needs real roots")
        vectors = vectors.real
    return vectors, weights, norms


def minimize_chow_norm(
    roots: RootDivisor,
    orbit_partition: Optional[Sequence[Sequence[int]]] = None,
    objective: str = "chow",
    form: Optional[BinaryForm] = None,
    real: bool = False,
    tolerance: Optional[float] = None,
    max_iterations: Optional[int] = None,
) -> ChowMinimization:
    """min over M in SL2(C) of sum b_i log ||M p_i||^2, per orbit if a partition is given.

    With objective="coeff" the form is required and the quantity minimized is
    log max_i |coeff(f^M, i)| instead.
    """
    if objective == "coeff":
        if form is None:
            raise DomainError("the coefficient objective needs the form")
        return _minimize_sup_coefficient(form)
    if objective != "chow":
        raise DomainError(f"unknown objective {objective!r}")

    tolerance = tolerance if tolerance is not None else config.optimizer.gradient_tolerance
    max_iterations = max_iterations or config.optimizer.max_iterations
    vectors, weights, norms = _root_arrays(roots, real)
    orbits = [list(o) for o in orbit_partition] if orbit_partition else [list(range(len(weights)))]
    covered = sorted(i for o in orbits for i in o)
    if covered != list(range(len(weights))):
        raise DomainError(f"orbit partition {orbits} does not partition {len(weights)} roots")

    cosets: List[HermitianCoset] = []
    orbit_values: List[float] = []
    iterations = 0
    residual = 0.0
    for k, orbit in enumerate(orbits):
        w = weights[orbit]
        _check_semistable(w, f"orbit {k}")
        try:
            P, value, its, res = _fixed_point(vectors[orbit], w, tolerance, max_iterations)
            coset = HermitianCoset.from_array(P)
        except (np.linalg.LinAlgError, ArithmeticError, ValueError) as e:
            raise NonConvergenceError(f"orbit {k}: balancing broke down: {e}") from e
        value += float(np.dot(w, np.log(norms[orbit] ** 2)))
        cosets.append(coset)
        orbit_values.append(value)
        iterations = max(iterations, its)
        residual = max(residual, res)

    logger.info(
        f"Chow norm minimized over {len(orbits)} orbit(s): {sum(orbit_values):.12g} "
        f"in {iterations} iterations"
    )
    return ChowMinimization(
        cosets=cosets,
        min_value=float(sum(orbit_values)),
        iterations=iterations,
        residual=residual,
        objective="chow",
        orbit_values=orbit_values,
    )


def _sl2_from_params(params: np.ndarray) -> np.ndarray:
    a = complex(params[0], params[1])
    b = complex(params[2], params[3])
    c = complex(params[4], params[5])
    if abs(a) < 1e-12:
        a = 1e-12
    return np.array([[a, b], [c, (1 + b * c) / a]])


def _sup_log(form: BinaryForm, M: np.ndarray) -> float:
    moved = act(form, Matrix2(*M.reshape(-1)))
    return math.log(max(abs(complex(a)) for a in moved.coefficients))


def _minimize_sup_coefficient(form: BinaryForm) -> ChowMinimization:
    """Nelder-Mead over SL2(C) from deterministic restarts."""
    if not is_semistable(form):
        raise DivergenceError(f"{form} is unstable: coefficients can be scaled to 0")
    rng = np.random.default_rng(0)
    start = np.array([1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    best_value = _sup_log(form, _sl2_from_params(start))
    best_params = start
    total_iterations = 0
    for restart in range(config.optimizer.restarts):
        x0 = start if restart == 0 else start + 0.3 * rng.standard_normal(6)
        result = scipy.optimize.minimize(
            lambda p: _sup_log(form, _sl2_from_params(p)),
            x0,
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000},
        )
        total_iterations += int(result.nit)
        if result.fun < best_value:
            best_value, best_params = float(result.fun), result.x
    M = _sl2_from_params(best_params)
    return ChowMinimization(
        cosets=[HermitianCoset.from_matrix(M)],
        min_value=best_value,
        iterations=total_iterations,
        residual=float("nan"),
        objective="coeff",
        matrix=M,
    )
