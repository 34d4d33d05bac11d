"""
Support vector regression family for the rampcast application.

Four kernel regressors share one fit/predict contract:
- eps_svr:  epsilon-insensitive SVR, dual solved by SMO (second-order pair selection)
- lssvr:    least-squares SVR, saddle-point linear system solved directly
- tsvr:     twin SVR, two bound-function duals solved by accelerated projected gradient
- eps_tsvr: epsilon-twin SVR, two regularized duals solved by successive over-relaxation

Inputs are z-scored with training statistics before the kernel is applied;
the statistics travel with the model.

Created on: October 13, 2025
"""

from dataclasses import dataclass, field
import logging
import math
from typing import Callable, Dict, Optional, Tuple
import warnings

import numpy as np
from scipy.linalg import LinAlgError, LinAlgWarning, lu_factor, lu_solve, svd
from scipy.spatial.distance import cdist

from ..exceptions import ConvergenceError, DomainError, ShapeError, SingularError, SizeError

logger = logging.getLogger(__name__)

EPS_SVR = 'eps_svr'
LSSVR = 'lssvr'
TSVR = 'tsvr'
EPS_TSVR = 'eps_tsvr'
VARIANTS = (EPS_SVR, LSSVR, TSVR, EPS_TSVR)

DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITER = 200000
DEFAULT_EPS = 0.01

# Ridge on G^T G relative to its largest eigenvalue sigma_max(G)^2
TSVR_RIDGE = 1e-12
# eps-TSVR structural-risk weights used when only C is tuned
DEFAULT_C3 = 1e-3

_TAU = 1e-12


# ============================================
# 1. KERNELS
# ============================================

@dataclass(frozen=True)
class Kernel:
    """
    Kernel function.

    Attributes:
        kind (str): 'rbf' or 'linear'
        sigma (float): RBF bandwidth, k(x, z) = exp(-||x - z||^2 / (2 sigma^2))
    """

    kind: str = 'rbf'
    sigma: float = 1.0

    def __post_init__(self):
        if self.kind not in ('rbf', 'linear'):
            raise DomainError(f"kernel must be 'rbf' or 'linear', got {self.kind!r}")
        if self.kind == 'rbf' and not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise DomainError(f"RBF bandwidth must be a positive finite number, got {self.sigma}")

    def gram(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Kernel matrix K[i, j] = k(A[i], B[j])."""
        if self.kind == 'linear':
            return A @ B.T
        sq = cdist(A, B, 'sqeuclidean')
        return np.exp(-np.maximum(sq, 0.0) / (2.0 * self.sigma ** 2))

    def to_dict(self) -> Dict:
        return {'kind': self.kind, 'sigma': self.sigma}


# ============================================
# 2. MODEL
# ============================================

@dataclass(frozen=True)
class SvrModel:
    """
    Trained SVR-family regressor.

    Single-function variants (eps_svr, lssvr) carry one weight vector and
    one bias. Twin variants carry (down, up) pairs and predict their mean.

    Attributes:
        variant (str): one of VARIANTS
        kernel (Kernel): kernel used for training
        support_data (np.ndarray): standardized training inputs
        weights (tuple[np.ndarray]): kernel-expansion coefficients
        biases (tuple[float]): bias term(s)
        x_mean (np.ndarray): per-feature training mean
        x_scale (np.ndarray): per-feature training SD (1 where the SD is 0)
        hyper (dict): hyperparameters the model was fitted with
        duals (tuple[np.ndarray]): raw dual variables, empty for lssvr
        iterations (int): solver iterations (summed over subproblems)
        violation (float): final KKT violation (max over subproblems)
    """

    variant: str
    kernel: Kernel
    support_data: np.ndarray
    weights: Tuple[np.ndarray, ...]
    biases: Tuple[float, ...]
    x_mean: np.ndarray
    x_scale: np.ndarray
    hyper: Dict[str, float] = field(default_factory=dict)
    duals: Tuple[np.ndarray, ...] = ()
    iterations: int = 0
    violation: float = 0.0

    @property
    def n_features(self) -> int:
        return self.support_data.shape[1]

    @property
    def is_twin(self) -> bool:
        return self.variant in (TSVR, EPS_TSVR)


def _standardize_stats(X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale[~(scale > 0)] = 1.0
    return mean, scale


def _check_training_data(X, y, min_rows: int) -> Tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise ShapeError(f"feature matrix {X.shape} and target vector {y.shape} do not align")
    if X.shape[0] < min_rows:
        raise SizeError(f"need at least {min_rows} training rows, got {X.shape[0]}")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise DomainError("training data contains NaN or infinite values")
    return X, y


def _prepare(X, y, kernel: Kernel, min_rows: int = 2):
    X, y = _check_training_data(X, y, min_rows)
    mean, scale = _standardize_stats(X)
    Z = (X - mean) / scale
    return Z, y, mean, scale, kernel.gram(Z, Z)


def _require_positive(**params):
    for name, value in params.items():
        if not (value > 0 and math.isfinite(value)):
            raise DomainError(f"{name} must be a positive finite number, got {value}")


def _require_non_negative(**params):
    for name, value in params.items():
        if not (value >= 0 and math.isfinite(value)):
            raise DomainError(f"{name} must be a non-negative finite number, got {value}")


def kernel_matrix(model: SvrModel, X) -> np.ndarray:
    """Kernel between raw inputs X and the model's (standardized) training inputs."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1 and X.size == 0:
        X = X.reshape(0, model.n_features)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise ShapeError(
            f"model was trained on {model.n_features} features, got input of shape {X.shape}"
        )
    Z = (X - model.x_mean) / model.x_scale
    return model.kernel.gram(Z, model.support_data)


def bound_functions(model: SvrModel, X) -> Tuple[np.ndarray, np.ndarray]:
    """Down-bound f1 and up-bound f2 of a twin model."""
    if not model.is_twin:
        raise DomainError(f"{model.variant} has a single regression function")
    K = kernel_matrix(model, X)
    return K @ model.weights[0] + model.biases[0], K @ model.weights[1] + model.biases[1]


def predict(model: SvrModel, X) -> np.ndarray:
    """
    Apply the model's regressor to raw inputs.

    Twin variants return 0.5 * (f1 + f2).

    Raises:
        ShapeError: if the column count differs from training
    """
    K = kernel_matrix(model, X)
    if K.shape[0] == 0:
        return np.empty(0)
    if model.is_twin:
        f1 = K @ model.weights[0] + model.biases[0]
        f2 = K @ model.weights[1] + model.biases[1]
        return 0.5 * (f1 + f2)
    return K @ model.weights[0] + model.biases[0]


# ============================================
# 3. EPSILON-SVR (SMO)
# ============================================

def _smo(K: np.ndarray, y: np.ndarray, C: float, eps: float, tol: float, max_iter: int):
    """
    SMO on the 2n-variable eps-SVR dual.

        min 0.5 a^T Q a + p^T a   s.t.  z^T a = 0,  0 <= a <= C
        a = [alpha; alpha*], z = [+1; -1], Q = z z^T * [[K, K], [K, K]],
        p = [eps - y; eps + y]

    Returns:
        (a, bias, iterations, violation)
    """
    n = len(y)
    sign = np.concatenate([np.ones(n), -np.ones(n)])
    source = np.tile(np.arange(n), 2)
    diag = np.diag(K)[source]
    a = np.zeros(2 * n)
    grad = np.concatenate([eps - y, eps + y])

    iteration = 0
    while True:
        score = -sign * grad
        upper = ((sign > 0) & (a < C)) | ((sign < 0) & (a > 0))
        lower = ((sign > 0) & (a > 0)) | ((sign < 0) & (a < C))
        i = int(np.argmax(np.where(upper, score, -np.inf)))
        m_up = score[i]
        m_low = np.min(np.where(lower, score, np.inf))
        violation = float(m_up - m_low)
        if violation <= tol:
            break
        if iteration >= max_iter:
            raise ConvergenceError("eps-SVR SMO did not reach the KKT tolerance", iteration, violation)

        i_src = source[i]
        candidates = lower & (score < m_up)
        curvature = np.maximum(diag[i] + diag - 2.0 * K[i_src, source], _TAU)
        gain = np.where(candidates, (m_up - score) ** 2 / curvature, -np.inf)
        j = int(np.argmax(gain))
        j_src = source[j]

        step = (m_up - score[j]) / curvature[j]
        step = min(step, C - a[i] if sign[i] > 0 else a[i], a[j] if sign[j] > 0 else C - a[j])
        a[i] += sign[i] * step
        a[j] -= sign[j] * step
        grad += sign * np.tile(K[:, i_src] - K[:, j_src], 2) * step
        iteration += 1

    signed_grad = sign * grad
    free = (a > 0) & (a < C)
    if free.any():
        rho = float(signed_grad[free].mean())
    else:
        at_upper = a >= C
        ub_mask = (at_upper & (sign < 0)) | (~at_upper & (sign > 0))
        ub = np.min(signed_grad[ub_mask]) if ub_mask.any() else np.inf
        lb = np.max(signed_grad[~ub_mask]) if (~ub_mask).any() else -np.inf
        rho = float((ub + lb) / 2.0) if np.isfinite(ub) and np.isfinite(lb) else float(
            ub if np.isfinite(ub) else lb
        )
    return a, -rho, iteration, violation


def fit_eps_svr(
    X,
    y,
    kernel: Kernel,
    C: float,
    eps: float = DEFAULT_EPS,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SvrModel:
    """
    Fit an epsilon-insensitive SVR.

    Args:
        X: feature matrix (n x d), n >= 2
        y: targets (n)
        kernel (Kernel): kernel function
        C (float): box constraint, > 0
        eps (float): tube half-width, >= 0
        tol (float): KKT tolerance (maximal violating pair gap)
        max_iter (int): SMO iteration cap

    Returns:
        SvrModel: weights (alpha - alpha*), bias b, duals [alpha; alpha*]

    Raises:
        DomainError: if C <= 0 or eps < 0
        ConvergenceError: if the tolerance is not reached in max_iter iterations

    Example:
        >>> model = fit_eps_svr([[0.0], [1.0], [2.0]], [1.0, 1.05, 0.95], Kernel('rbf', 1.0), C=1.0, eps=0.1)
        >>> bool(np.all(model.duals[0] == 0))
        True
    """
    _require_positive(C=C)
    _require_non_negative(eps=eps)
    Z, y, mean, scale, K = _prepare(X, y, kernel)

    a, bias, iterations, violation = _smo(K, y, C, eps, tol, max_iter)
    n = len(y)
    beta = a[:n] - a[n:]
    logger.debug(
        f"eps-SVR fitted: n={n}, C={C:g}, eps={eps:g}, iterations={iterations}, "
        f"violation={violation:.2e}, support vectors={int(np.count_nonzero(beta))}"
    )
    return SvrModel(
        variant=EPS_SVR,
        kernel=kernel,
        support_data=Z,
        weights=(beta,),
        biases=(bias,),
        x_mean=mean,
        x_scale=scale,
        hyper={'C': float(C), 'eps': float(eps)},
        duals=(a,),
        iterations=iterations,
        violation=violation,
    )


# ============================================
# 4. LEAST-SQUARES SVR
# ============================================

def lssvr_system(K: np.ndarray, gamma: float) -> np.ndarray:
    """Saddle-point matrix [[0, e^T], [e, K + I / gamma]]."""
    n = K.shape[0]
    A = np.empty((n + 1, n + 1))
    A[0, 0] = 0.0
    A[0, 1:] = 1.0
    A[1:, 0] = 1.0
    A[1:, 1:] = K + np.eye(n) / gamma
    return A


def fit_lssvr(X, y, kernel: Kernel, gamma: float, refinement_steps: int = 2) -> SvrModel:
    """
    Fit a least-squares SVR by solving its saddle-point system.

    Args:
        X: feature matrix (n x d), n >= 1
        y: targets
        kernel (Kernel): kernel function
        gamma (float): regularization, > 0
        refinement_steps (int): rounds of iterative refinement on the LU factors

    Returns:
        SvrModel: weights alpha, bias b

    Raises:
        SingularError: if the system cannot be solved to a residual of 1e-8 * ||y||
    """
    _require_positive(gamma=gamma)
    Z, y, mean, scale, K = _prepare(X, y, kernel, min_rows=1)

    A = lssvr_system(K, gamma)
    rhs = np.concatenate([[0.0], y])
    try:
        with warnings.catch_warnings():
            warnings.simplefilter('error', LinAlgWarning)
            factors = lu_factor(A)
            solution = lu_solve(factors, rhs)
            for _ in range(refinement_steps):
                solution += lu_solve(factors, rhs - A @ solution)
    except (LinAlgError, LinAlgWarning, ValueError) as exc:
        raise SingularError(
            f"LS-SVR system is singular (gamma={gamma:g}); lower gamma or remove duplicate rows: {exc}"
        ) from exc

    residual = float(np.linalg.norm(A @ solution - rhs))
    if not np.all(np.isfinite(solution)) or residual > 1e-8 * max(float(np.linalg.norm(y)), 1e-300):
        raise SingularError(
            f"LS-SVR system is numerically singular (gamma={gamma:g}, residual={residual:.3e})"
        )

    logger.debug(f"LS-SVR fitted: n={len(y)}, gamma={gamma:g}, residual={residual:.2e}")
    return SvrModel(
        variant=LSSVR,
        kernel=kernel,
        support_data=Z,
        weights=(solution[1:],),
        biases=(float(solution[0]),),
        x_mean=mean,
        x_scale=scale,
        hyper={'gamma': float(gamma)},
    )


# ============================================
# 5. TWIN SVR FAMILY
# ============================================
#
# Both twin variants reduce each bound function to the same box QP.
# With G = [K e] and z = [w; b], one bound solves
#
#     min 0.5 ||t - G z||^2 + 0.5 delta ||z||^2 + C e^T xi
#     s.t. s (G z - f) <= xi,  xi >= 0
#
# (s = +1 keeps f1 below f, s = -1 keeps f2 above f). Its dual is
#
#     min 0.5 a^T S a + q^T a,  0 <= a <= C
#     S = G (G^T G + delta I)^-1 G^T,  q = s (f - S t)
#
# and z = (G^T G + delta I)^-1 G^T (t - s a).

def box_qp_violation(a: np.ndarray, grad: np.ndarray, C: float) -> float:
    """Projected-gradient KKT measure ||a - clip(a - grad, 0, C)||_inf."""
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - np.clip(a - grad, 0.0, C))))


def solve_box_qp_apg(S: np.ndarray, q: np.ndarray, C: float, tol: float, max_iter: int, lipschitz: float):
    """
    Accelerated projected gradient (FISTA with adaptive restart) for
    min 0.5 a^T S a + q^T a over 0 <= a <= C.
    """
    step = 1.0 / max(lipschitz, _TAU)
    a = np.zeros_like(q)
    momentum_point = a.copy()
    t = 1.0
    violation = box_qp_violation(a, q, C)
    for iteration in range(1, max_iter + 1):
        if violation <= tol:
            return a, iteration - 1, violation
        candidate = np.clip(momentum_point - step * (S @ momentum_point + q), 0.0, C)
        if np.dot(momentum_point - candidate, candidate - a) > 0:
            t = 1.0
            momentum_point = candidate
        else:
            t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
            momentum_point = candidate + ((t - 1.0) / t_next) * (candidate - a)
            t = t_next
        a = candidate
        violation = box_qp_violation(a, S @ a + q, C)
    if violation <= tol:
        return a, max_iter, violation
    raise ConvergenceError("TSVR projected gradient did not reach the KKT tolerance", max_iter, violation)


def solve_box_qp_sor(S: np.ndarray, q: np.ndarray, C: float, tol: float, max_iter: int, omega: float = 1.0):
    """
    Successive over-relaxation for min 0.5 a^T S a + q^T a over 0 <= a <= C.

    Each sweep updates a_i <- clip(a_i - omega * grad_i / S_ii, 0, C) in
    index order. max_iter counts sweeps.
    """
    if not 0 < omega < 2:
        raise DomainError(f"SOR relaxation factor must lie in (0, 2), got {omega}")
    a = np.zeros_like(q)
    grad = q.copy()
    diag = np.diag(S).copy()
    active = np.flatnonzero(diag > _TAU)
    violation = box_qp_violation(a, grad, C)
    for sweep in range(1, max_iter + 1):
        if violation <= tol:
            return a, sweep - 1, violation
        for i in active:
            updated = min(max(a[i] - omega * grad[i] / diag[i], 0.0), C)
            change = updated - a[i]
            if change != 0.0:
                a[i] = updated
                grad += S[:, i] * change
        grad = S @ a + q
        violation = box_qp_violation(a, grad, C)
    if violation <= tol:
        return a, max_iter, violation
    raise ConvergenceError("eps-TSVR SOR did not reach the KKT tolerance", max_iter, violation)


@dataclass
class _TwinSystem:
    """Thin SVD of G = [K e] with helpers for one ridge value."""

    U: np.ndarray
    singular: np.ndarray
    Vt: np.ndarray

    @classmethod
    def from_gram(cls, K: np.ndarray) -> '_TwinSystem':
        G = np.hstack([K, np.ones((K.shape[0], 1))])
        U, singular, Vt = svd(G, full_matrices=False)
        keep = singular > singular[0] * max(G.shape) * np.finfo(float).eps
        return cls(U[:, keep], singular[keep], Vt[keep])

    def projector(self, delta: float) -> Tuple[np.ndarray, float]:
        shrink = self.singular ** 2 / (self.singular ** 2 + delta)
        S = (self.U * shrink) @ self.U.T
        return 0.5 * (S + S.T), float(shrink.max()) if shrink.size else 0.0

    def coefficients(self, delta: float, rhs: np.ndarray) -> np.ndarray:
        gain = self.singular / (self.singular ** 2 + delta)
        return self.Vt.T @ (gain * (self.U.T @ rhs))

    def ridge(self, relative: float) -> float:
        """Absolute ridge for a ridge given relative to sigma_max(G)^2."""
        return relative * float(self.singular[0]) ** 2 if self.singular.size else relative


def _solve_bound(system: _TwinSystem, t, f, s: float, delta: float, C: float, solver: Callable):
    S, lipschitz = system.projector(delta)
    q = s * (f - S @ t)
    a, iterations, violation = solver(S, q, C, lipschitz)
    z = system.coefficients(delta, t - s * a)
    return z[:-1], float(z[-1]), a, iterations, violation


def _twin_model(variant, kernel, Z, mean, scale, hyper, down, up) -> SvrModel:
    return SvrModel(
        variant=variant,
        kernel=kernel,
        support_data=Z,
        weights=(down[0], up[0]),
        biases=(down[1], up[1]),
        x_mean=mean,
        x_scale=scale,
        hyper=hyper,
        duals=(down[2], up[2]),
        iterations=down[3] + up[3],
        violation=max(down[4], up[4]),
    )


def fit_tsvr(
    X,
    y,
    kernel: Kernel,
    C1: float,
    C2: float,
    eps1: float = DEFAULT_EPS,
    eps2: float = DEFAULT_EPS,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SvrModel:
    """
    Fit a twin SVR.

    The down-bound f1 = K w1 + b1 fits Y - eps1 while staying below it; the
    up-bound f2 = K w2 + b2 fits Y + eps2 while staying above it. The
    regressor is 0.5 * (f1 + f2).

    Raises:
        DomainError: if C1, C2 <= 0 or eps1, eps2 < 0
        ConvergenceError: if a subproblem misses the KKT tolerance
    """
    _require_positive(C1=C1, C2=C2)
    _require_non_negative(eps1=eps1, eps2=eps2)
    Z, y, mean, scale, K = _prepare(X, y, kernel)
    system = _TwinSystem.from_gram(K)

    def solver(C):
        return lambda S, q, _C, lipschitz: solve_box_qp_apg(S, q, C, tol, max_iter, lipschitz)

    down_target = y - eps1
    up_target = y + eps2
    delta = system.ridge(TSVR_RIDGE)
    down = _solve_bound(system, down_target, down_target, +1.0, delta, C1, solver(C1))
    up = _solve_bound(system, up_target, up_target, -1.0, delta, C2, solver(C2))

    logger.debug(
        f"TSVR fitted: n={len(y)}, C1={C1:g}, C2={C2:g}, iterations={down[3]}+{up[3]}, "
        f"violation={max(down[4], up[4]):.2e}"
    )
    hyper = {'C1': float(C1), 'C2': float(C2), 'eps1': float(eps1), 'eps2': float(eps2)}
    return _twin_model(TSVR, kernel, Z, mean, scale, hyper, down, up)


def fit_eps_tsvr(
    X,
    y,
    kernel: Kernel,
    C1: float,
    C2: float,
    C3: float = DEFAULT_C3,
    C4: float = DEFAULT_C3,
    eps1: float = DEFAULT_EPS,
    eps2: float = DEFAULT_EPS,
    omega: float = 1.0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SvrModel:
    """
    Fit an epsilon-twin SVR with the kernel matrix K(X, X^T).

    Each bound fits Y under a structural-risk term 0.5 * C3 * (w1^T w1 + b1^2)
    (C4 for the up-bound); the down-bound must not exceed Y + eps1 and the
    up-bound must not drop below Y - eps2 (soft, with costs C1 / C2). Both
    duals are solved by SOR with relaxation factor omega.

    Args:
        X: feature matrix (n x d), n >= 2
        y: targets
        kernel (Kernel): kernel function
        C1, C2 (float): slack costs, > 0
        C3, C4 (float): structural-risk weights, > 0
        eps1, eps2 (float): insensitive margins, >= 0
        omega (float): SOR relaxation factor in (0, 2)
        tol (float): KKT tolerance
        max_iter (int): SOR sweep cap

    Returns:
        SvrModel: twin model predicting 0.5 * (f1 + f2)

    Raises:
        DomainError: on non-positive C1..C4, negative eps or omega outside (0, 2)
        ConvergenceError: if a subproblem misses the KKT tolerance
    """
    _require_positive(C1=C1, C2=C2, C3=C3, C4=C4)
    _require_non_negative(eps1=eps1, eps2=eps2)
    if not 0 < omega < 2:
        raise DomainError(f"SOR relaxation factor must lie in (0, 2), got {omega}")
    Z, y, mean, scale, K = _prepare(X, y, kernel)
    system = _TwinSystem.from_gram(K)

    def solver(C):
        return lambda S, q, _C, _lipschitz: solve_box_qp_sor(S, q, C, tol, max_iter, omega)

    down = _solve_bound(system, y, y + eps1, +1.0, C3, C1, solver(C1))
    up = _solve_bound(system, y, y - eps2, -1.0, C4, C2, solver(C2))

    logger.debug(
        f"eps-TSVR fitted: n={len(y)}, C1={C1:g}, C3={C3:g}, omega={omega}, "
        f"sweeps={down[3]}+{up[3]}, violation={max(down[4], up[4]):.2e}"
    )
    hyper = {
        'C1': float(C1), 'C2': float(C2), 'C3': float(C3), 'C4': float(C4),
        'eps1': float(eps1), 'eps2': float(eps2), 'omega': float(omega),
    }
    return _twin_model(EPS_TSVR, kernel, Z, mean, scale, hyper, down, up)


# ============================================
# 6. DISPATCH
# ============================================

def fit_variant(
    variant: str,
    X,
    y,
    kernel: Kernel,
    C: float,
    eps: float = DEFAULT_EPS,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    extra: Optional[Dict[str, float]] = None,
) -> SvrModel:
    """
    Fit any variant from the single tuned cost C.

    C maps to: C (eps_svr), gamma (lssvr), C1 = C2 (tsvr, eps_tsvr).
    `extra` may override C3, C4 and omega for eps_tsvr.
    """
    extra = extra or {}
    if variant == EPS_SVR:
        return fit_eps_svr(X, y, kernel, C, eps, tol, max_iter)
    if variant == LSSVR:
        return fit_lssvr(X, y, kernel, gamma=C)
    if variant == TSVR:
        return fit_tsvr(X, y, kernel, C, C, eps, eps, tol, max_iter)
    if variant == EPS_TSVR:
        return fit_eps_tsvr(
            X, y, kernel, C, C,
            C3=extra.get('C3', DEFAULT_C3),
            C4=extra.get('C4', DEFAULT_C3),
            eps1=eps, eps2=eps,
            omega=extra.get('omega', 1.0),
            tol=tol, max_iter=max_iter,
        )
    raise DomainError(f"unknown SVR variant {variant!r}; choose one of: {', '.join(VARIANTS)}")
