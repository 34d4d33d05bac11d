"""
Tests for the SVR family.

Small problems are cross-checked against a generic QP solver (cvxopt), so
each dual/primal is verified independently of the hand-written solvers.
"""
from cvxopt import matrix, solvers
import numpy as np
import pytest

from ramps.exceptions import ConvergenceError, DomainError, ShapeError, SingularError
from ramps.services.svr import (
    DEFAULT_C3,
    EPS_SVR,
    EPS_TSVR,
    LSSVR,
    TSVR,
    TSVR_RIDGE,
    Kernel,
    bound_functions,
    fit_eps_svr,
    fit_eps_tsvr,
    fit_lssvr,
    fit_tsvr,
    fit_variant,
    lssvr_system,
    predict,
)

QP_OPTIONS = {'show_progress': False, 'abstol': 1e-10, 'reltol': 1e-10, 'feastol': 1e-10, 'maxiters': 200}


def solve_qp(P, q, G, h, A=None, b=None) -> np.ndarray:
    args = [matrix(P), matrix(q), matrix(G), matrix(h)]
    if A is not None:
        args += [matrix(A), matrix(b)]
    solution = solvers.qp(*args, options=QP_OPTIONS)
    return np.array(solution['x']).ravel()


def box(n: int, C: float):
    return np.vstack([-np.eye(n), np.eye(n)]), np.concatenate([np.zeros(n), np.full(n, C)])


def training_gram(model) -> np.ndarray:
    return model.kernel.gram(model.support_data, model.support_data)


def twin_projector(K: np.ndarray) -> np.ndarray:
    """S = G (G^T G + delta I)^-1 G^T on the numerical range of G = [K e]."""
    G = np.hstack([K, np.ones((K.shape[0], 1))])
    U, s, _ = np.linalg.svd(G, full_matrices=False)
    keep = s > s[0] * max(G.shape) * np.finfo(float).eps
    U, s = U[:, keep], s[keep]
    shrink = s ** 2 / (s ** 2 + TSVR_RIDGE * s[0] ** 2)
    S = (U * shrink) @ U.T
    return 0.5 * (S + S.T)


@pytest.fixture
def problem(rng):
    X = rng.uniform(-2.0, 2.0, size=(10, 2))
    y = np.sin(X[:, 0]) + 0.5 * X[:, 1]
    return X, y


class TestKernel:
    def test_rbf_diagonal_is_one(self, rng):
        A = rng.normal(size=(5, 3))
        np.testing.assert_allclose(np.diag(Kernel('rbf', 0.7).gram(A, A)), 1.0)

    def test_rbf_value(self):
        K = Kernel('rbf', 2.0).gram(np.array([[0.0, 0.0]]), np.array([[3.0, 4.0]]))
        assert K[0, 0] == pytest.approx(np.exp(-25.0 / 8.0))

    @pytest.mark.parametrize('kind, sigma', [('poly', 1.0), ('rbf', 0.0), ('rbf', float('inf'))])
    def test_invalid(self, kind, sigma):
        with pytest.raises(DomainError):
            Kernel(kind, sigma)


class TestEpsSvr:
    C, EPS = 2.0, 0.05

    def test_matches_qp_dual(self, problem):
        X, y = problem
        model = fit_eps_svr(X, y, Kernel('rbf', 1.0), C=self.C, eps=self.EPS, tol=1e-10)
        K = training_gram(model)
        n = len(y)
        sign = np.concatenate([np.ones(n), -np.ones(n)])
        Q = np.outer(sign, sign) * np.block([[K, K], [K, K]])
        p = np.concatenate([self.EPS - y, self.EPS + y])
        G, h = box(2 * n, self.C)
        a = solve_qp(Q, p, G, h, sign.reshape(1, -1), np.zeros(1))

        np.testing.assert_allclose(model.weights[0], a[:n] - a[n:], atol=1e-5)

    def test_duals_inside_box(self, problem):
        X, y = problem
        model = fit_eps_svr(X, y, Kernel('rbf', 1.0), C=self.C, eps=self.EPS)
        assert np.all(model.duals[0] >= 0.0)
        assert np.all(model.duals[0] <= self.C)
        assert model.weights[0].sum() == pytest.approx(0.0, abs=1e-10)

    def test_free_support_vectors_sit_on_the_tube(self, problem):
        X, y = problem
        model = fit_eps_svr(X, y, Kernel('rbf', 1.0), C=self.C, eps=self.EPS, tol=1e-10)
        beta = model.weights[0]
        free = (np.abs(beta) > 1e-8) & (np.abs(beta) < self.C - 1e-8)
        residual = y - predict(model, X)
        assert free.any()
        np.testing.assert_allclose(np.abs(residual[free]), self.EPS, atol=1e-6)
        inside = np.abs(residual) < self.EPS - 1e-6
        assert np.all(np.abs(beta[inside]) < 1e-8)

    def test_wide_tube_keeps_no_support_vectors(self):
        model = fit_eps_svr([[0.0], [1.0], [2.0]], [1.0, 1.05, 0.95], Kernel('rbf', 1.0), C=1.0, eps=0.1)
        assert np.all(model.weights[0] == 0.0)
        np.testing.assert_allclose(predict(model, [[5.0]]), model.biases[0])

    def test_linear_target_is_recovered(self):
        X = np.linspace(-1.0, 1.0, 6).reshape(-1, 1)
        y = 3.0 * X[:, 0] + 1.0
        model = fit_eps_svr(X, y, Kernel('linear'), C=1000.0, eps=0.0, tol=1e-8)
        np.testing.assert_allclose(predict(model, X), y, atol=1e-3)
        np.testing.assert_allclose(predict(model, [[0.5]]), [2.5], atol=1e-3)

    def test_training_rmse_does_not_grow_with_C(self):
        X = np.linspace(-3.0, 3.0, 8).reshape(-1, 1)
        y = np.sin(X[:, 0])
        errors = []
        for C in (0.01, 1.0, 100.0):
            model = fit_eps_svr(X, y, Kernel('rbf', 1.0), C=C, eps=0.0, tol=1e-8)
            errors.append(float(np.sqrt(np.mean((predict(model, X) - y) ** 2))))
        assert errors[0] >= errors[1] - 1e-9
        assert errors[1] >= errors[2] - 1e-9

    def test_iteration_cap(self, problem):
        X, y = problem
        with pytest.raises(ConvergenceError) as excinfo:
            fit_eps_svr(X, y, Kernel('rbf', 1.0), C=self.C, eps=0.0, tol=1e-12, max_iter=1)
        assert excinfo.value.iterations == 1

    @pytest.mark.parametrize('C, eps', [(0.0, 0.1), (-1.0, 0.1), (1.0, -0.1)])
    def test_invalid_hyperparameters(self, problem, C, eps):
        X, y = problem
        with pytest.raises(DomainError):
            fit_eps_svr(X, y, Kernel(), C=C, eps=eps)


class TestLssvr:
    def test_matches_direct_solve(self, problem):
        X, y = problem
        model = fit_lssvr(X, y, Kernel('rbf', 1.0), gamma=10.0)
        solution = np.linalg.solve(lssvr_system(training_gram(model), 10.0), np.concatenate([[0.0], y]))
        np.testing.assert_allclose(model.weights[0], solution[1:], atol=1e-8)
        assert model.biases[0] == pytest.approx(solution[0], abs=1e-8)

    def test_optimality_conditions(self, problem):
        X, y = problem
        gamma = 4.0
        model = fit_lssvr(X, y, Kernel('rbf', 1.0), gamma=gamma)
        alpha = model.weights[0]
        assert alpha.sum() == pytest.approx(0.0, abs=1e-9)
        np.testing.assert_allclose(predict(model, X), y - alpha / gamma, atol=1e-8)

    def test_single_point_is_fitted_exactly(self):
        model = fit_lssvr([[0.3, -1.2]], [2.5], Kernel('rbf', 1.0), gamma=10.0)
        assert predict(model, [[0.3, -1.2]])[0] == pytest.approx(2.5, abs=1e-8)
        assert model.weights[0][0] == pytest.approx(0.0, abs=1e-12)

    def test_linear_slope_with_large_gamma(self):
        X = np.linspace(-1.0, 1.0, 8).reshape(-1, 1)
        model = fit_lssvr(X, 2.0 * X[:, 0], Kernel('linear'), gamma=1e6)
        f0, f1 = predict(model, [[0.0], [1.0]])
        assert f1 - f0 == pytest.approx(2.0, abs=1e-3)

    def test_small_gamma_flattens_to_the_mean(self, problem):
        X, y = problem
        gamma = 1e-6
        model = fit_lssvr(X, y, Kernel('rbf', 1.0), gamma=gamma)
        alpha, b = model.weights[0], model.biases[0]
        assert np.max(np.abs(alpha)) < 1e-5
        assert b == pytest.approx(y.mean(), abs=1e-4)
        A = lssvr_system(training_gram(model), gamma)
        residual = np.linalg.norm(A @ np.concatenate([[b], alpha]) - np.concatenate([[0.0], y]))
        assert residual <= 1e-8 * np.linalg.norm(y)

    def test_duplicate_rows_with_huge_gamma_are_singular(self):
        X = np.ones((4, 2))
        with pytest.raises(SingularError):
            fit_lssvr(X, [1.0, 2.0, 3.0, 4.0], Kernel('rbf', 1.0), gamma=1e20)

    def test_misaligned_training_data(self, problem):
        X, y = problem
        with pytest.raises(ShapeError):
            fit_lssvr(X, y[:-1], Kernel(), gamma=1.0)


class TestTwinSvr:
    C, EPS = 1.0, 0.05

    @staticmethod
    def dual_objective(S, q, a) -> float:
        return float(0.5 * a @ S @ a + q @ a)

    def test_bound_duals_match_qp(self, problem):
        X, y = problem
        model = fit_tsvr(X, y, Kernel('linear'), self.C, self.C, self.EPS, self.EPS, tol=1e-10)
        K = training_gram(model)
        S = twin_projector(K)
        Gbox, hbox = box(len(y), self.C)

        for dual, target, s in ((model.duals[0], y - self.EPS, 1.0), (model.duals[1], y + self.EPS, -1.0)):
            q = s * (target - S @ target)
            oracle = solve_qp(S, q, Gbox, hbox)
            assert self.dual_objective(S, q, dual) == pytest.approx(
                self.dual_objective(S, q, oracle), abs=1e-6
            )
            assert np.all((dual >= 0.0) & (dual <= self.C))

    def test_prediction_is_mean_of_bounds(self, problem, rng):
        X, y = problem
        model = fit_tsvr(X, y, Kernel('rbf', 1.0), self.C, self.C)
        X_new = rng.uniform(-2.0, 2.0, size=(6, 2))
        f1, f2 = bound_functions(model, X_new)
        np.testing.assert_allclose(predict(model, X_new), 0.5 * (f1 + f2))

    def test_bounds_bracket_the_data(self, problem):
        X, y = problem
        model = fit_tsvr(X, y, Kernel('linear'), 100.0, 100.0, 0.1, 0.1, tol=1e-10)
        f1, f2 = bound_functions(model, X)
        assert np.mean(f1 <= y + 1e-6) > 0.5
        assert np.mean(f2 >= y - 1e-6) > 0.5

    def test_constant_target(self, problem):
        X, _ = problem
        y = np.full(len(X), 3.7)
        model = fit_tsvr(X, y, Kernel('rbf', 1.0), 1.0, 1.0, 0.1, 0.1)
        assert np.max(np.abs(predict(model, X) - 3.7)) < 1e-6

    def test_linear_target_is_bracketed(self, problem, rng):
        X, _ = problem
        y = 1.5 * X[:, 0] - 0.7 * X[:, 1] + 2.0
        model = fit_tsvr(X, y, Kernel('linear'), self.C, self.C, 0.1, 0.1)
        f1, f2 = bound_functions(model, X)
        assert np.all(f1 <= y + 1e-6)
        assert np.all(f2 >= y - 1e-6)
        np.testing.assert_allclose(predict(model, X), y, atol=1e-3)
        X_new = rng.uniform(-2.0, 2.0, size=(6, 2))
        np.testing.assert_allclose(predict(model, X_new), 1.5 * X_new[:, 0] - 0.7 * X_new[:, 1] + 2.0, atol=1e-3)

    def test_single_function_model_has_no_bounds(self, problem):
        X, y = problem
        with pytest.raises(DomainError):
            bound_functions(fit_lssvr(X, y, Kernel(), 1.0), X)


class TestEpsTwinSvr:
    C1, C3, EPS = 1.0, 0.5, 0.05

    def primal(self, K, y, target, s):
        n = len(y)
        H = np.hstack([K, np.ones((n, 1))])
        P = np.zeros((2 * n + 1, 2 * n + 1))
        P[:n + 1, :n + 1] = H.T @ H + self.C3 * np.eye(n + 1)
        q = np.concatenate([-H.T @ y, np.full(n, self.C1)])
        G = np.block([
            [s * H, -np.eye(n)],
            [np.zeros((n, n + 1)), -np.eye(n)],
        ])
        h = np.concatenate([s * target, np.zeros(n)])
        z = solve_qp(P, q, G, h)[:n + 1]
        return z[:-1], z[-1]

    def test_matches_primal_qp(self, problem):
        X, y = problem
        model = fit_eps_tsvr(
            X, y, Kernel('rbf', 1.5), self.C1, self.C1, self.C3, self.C3, self.EPS, self.EPS, tol=1e-10
        )
        K = training_gram(model)
        w1, b1 = self.primal(K, y, y + self.EPS, 1.0)
        w2, b2 = self.primal(K, y, y - self.EPS, -1.0)
        np.testing.assert_allclose(model.weights[0], w1, atol=1e-5)
        np.testing.assert_allclose(model.weights[1], w2, atol=1e-5)
        assert model.biases == pytest.approx((b1, b2), abs=1e-5)

    def test_relaxation_factor_does_not_change_the_optimum(self, problem):
        X, y = problem
        fits = [
            fit_eps_tsvr(X, y, Kernel('rbf', 1.5), self.C1, self.C1, self.C3, self.C3, omega=omega, tol=1e-10)
            for omega in (1.0, 1.4)
        ]
        for k in range(2):
            np.testing.assert_allclose(fits[0].weights[k], fits[1].weights[k], atol=1e-6)
            assert fits[0].biases[k] == pytest.approx(fits[1].biases[k], abs=1e-6)

    def test_heavy_structural_risk_drives_the_regressor_to_zero(self, problem):
        X, y = problem
        y = y + 5.0
        model = fit_eps_tsvr(X, y, Kernel('rbf', 1.0), 1.0, 1.0, 1e8, 1e8, self.EPS, self.EPS)
        assert np.max(np.abs(predict(model, X))) < 1e-3
        for w, b in zip(model.weights, model.biases):
            assert np.max(np.abs(w)) < 1e-3
            assert abs(b) < 1e-3

    @pytest.mark.parametrize('omega', [0.0, 2.0])
    def test_relaxation_factor_domain(self, problem, omega):
        X, y = problem
        with pytest.raises(DomainError):
            fit_eps_tsvr(X, y, Kernel(), 1.0, 1.0, omega=omega)


class TestFitVariant:
    def test_cost_mapping(self, problem):
        X, y = problem
        kernel = Kernel('rbf', 1.0)
        assert fit_variant(EPS_SVR, X, y, kernel, 4.0).hyper['C'] == 4.0
        assert fit_variant(LSSVR, X, y, kernel, 4.0).hyper == {'gamma': 4.0}
        twin = fit_variant(TSVR, X, y, kernel, 4.0).hyper
        assert twin['C1'] == twin['C2'] == 4.0
        eps_twin = fit_variant(EPS_TSVR, X, y, kernel, 4.0).hyper
        assert eps_twin['C1'] == eps_twin['C2'] == 4.0
        assert eps_twin['C3'] == eps_twin['C4'] == DEFAULT_C3

    def test_extra_overrides(self, problem):
        X, y = problem
        model = fit_variant(EPS_TSVR, X, y, Kernel(), 1.0, extra={'C3': 0.5, 'omega': 1.2})
        assert (model.hyper['C3'], model.hyper['C4'], model.hyper['omega']) == (0.5, DEFAULT_C3, 1.2)

    def test_unknown_variant(self, problem):
        X, y = problem
        with pytest.raises(DomainError):
            fit_variant('nu_svr', X, y, Kernel(), 1.0)

    @pytest.mark.parametrize('variant', [EPS_SVR, LSSVR, TSVR, EPS_TSVR])
    def test_predict_rejects_wrong_width(self, problem, variant):
        X, y = problem
        model = fit_variant(variant, X, y, Kernel(), 1.0)
        with pytest.raises(ShapeError):
            predict(model, np.zeros((3, 5)))
        assert predict(model, np.empty((0, 2))).shape == (0,)


class TestRowOrder:
    @pytest.mark.parametrize('variant', [EPS_SVR, LSSVR, TSVR, EPS_TSVR])
    def test_predictions_ignore_row_order(self, problem, rng, variant):
        X, y = problem
        order = rng.permutation(len(y))
        kernel = Kernel('rbf', 1.0)
        X_new = rng.uniform(-2.0, 2.0, size=(6, 2))
        model = fit_variant(variant, X, y, kernel, 1.0, tol=1e-10)
        shuffled = fit_variant(variant, X[order], y[order], kernel, 1.0, tol=1e-10)
        np.testing.assert_allclose(predict(shuffled, X_new), predict(model, X_new), atol=1e-4)


class TestRandomProblems:
    """Every solver against an independent dense solve on 25 random problems."""

    C, EPS, C3 = 2.0, 0.05, 0.5

    @pytest.fixture(params=range(25))
    def random_problem(self, request):
        rng = np.random.default_rng(request.param)
        n = int(rng.integers(4, 11))
        d = int(rng.integers(1, 4))
        X = rng.uniform(-2.0, 2.0, size=(n, d))
        y = np.sin(X).sum(axis=1) + 0.1 * rng.normal(size=n)
        return X, y

    @staticmethod
    def close(value, oracle) -> bool:
        return value == pytest.approx(oracle, rel=1e-5, abs=1e-7)

    def test_eps_svr_dual(self, random_problem):
        X, y = random_problem
        model = fit_eps_svr(X, y, Kernel('rbf', 1.0), C=self.C, eps=self.EPS, tol=1e-10)
        K = training_gram(model)
        n = len(y)
        sign = np.concatenate([np.ones(n), -np.ones(n)])
        Q = np.outer(sign, sign) * np.block([[K, K], [K, K]])
        p = np.concatenate([self.EPS - y, self.EPS + y])
        G, h = box(2 * n, self.C)
        oracle = solve_qp(Q, p, G, h, sign.reshape(1, -1), np.zeros(1))

        def objective(a):
            return float(0.5 * a @ Q @ a + p @ a)

        a = model.duals[0]
        assert self.close(objective(a), objective(oracle))
        assert np.all((a >= 0.0) & (a <= self.C))

    def test_lssvr_system(self, random_problem):
        X, y = random_problem
        model = fit_lssvr(X, y, Kernel('rbf', 1.0), gamma=10.0)
        solution = np.linalg.solve(lssvr_system(training_gram(model), 10.0), np.concatenate([[0.0], y]))
        np.testing.assert_allclose(model.weights[0], solution[1:], rtol=1e-5, atol=1e-8)
        assert self.close(model.biases[0], solution[0])

    def test_tsvr_duals(self, random_problem):
        X, y = random_problem
        model = fit_tsvr(X, y, Kernel('linear'), self.C, self.C, self.EPS, self.EPS, tol=1e-9)
        S = twin_projector(training_gram(model))
        Gbox, hbox = box(len(y), self.C)
        for dual, target, s in ((model.duals[0], y - self.EPS, 1.0), (model.duals[1], y + self.EPS, -1.0)):
            q = s * (target - S @ target)
            oracle = solve_qp(S, q, Gbox, hbox)
            assert self.close(TestTwinSvr.dual_objective(S, q, dual), TestTwinSvr.dual_objective(S, q, oracle))
        f1, f2 = bound_functions(model, X)
        assert np.array_equal(predict(model, X), 0.5 * (f1 + f2))

    def test_eps_tsvr_primal(self, random_problem):
        X, y = random_problem
        model = fit_eps_tsvr(
            X, y, Kernel('rbf', 1.0), self.C, self.C, self.C3, self.C3, self.EPS, self.EPS, tol=1e-10
        )
        K = training_gram(model)
        n = len(y)
        H = np.hstack([K, np.ones((n, 1))])

        def objective(z, target, s):
            fitted = H @ z
            slack = np.maximum(s * (fitted - target), 0.0)
            return float(0.5 * np.sum((y - fitted) ** 2) + 0.5 * self.C3 * z @ z + self.C * slack.sum())

        for k, (target, s) in enumerate(((y + self.EPS, 1.0), (y - self.EPS, -1.0))):
            P = np.zeros((2 * n + 1, 2 * n + 1))
            P[:n + 1, :n + 1] = H.T @ H + self.C3 * np.eye(n + 1)
            q = np.concatenate([-H.T @ y, np.full(n, self.C)])
            G = np.block([[s * H, -np.eye(n)], [np.zeros((n, n + 1)), -np.eye(n)]])
            h = np.concatenate([s * target, np.zeros(n)])
            oracle = solve_qp(P, q, G, h)[:n + 1]
            fitted = np.append(model.weights[k], model.biases[k])
            assert self.close(objective(fitted, target, s), objective(oracle, target, s))
