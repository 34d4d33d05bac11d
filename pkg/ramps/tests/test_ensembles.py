"""
Tests for CART, the random forest, gradient boosting and persistence.
"""
import numpy as np
import pytest

from ramps.exceptions import DomainError, ShapeError, SizeError
from ramps.services.ensembles import (
    ABSOLUTE_ERROR,
    PERSISTENCE_LAST,
    PERSISTENCE_MEAN_OF_TWO,
    PERSISTENCE_TWO_WINDOW,
    RegressionTree,
    default_mtry,
    first_forecast_index,
    fit_gbm,
    fit_rfr,
    fit_tree,
    persistence_forecast,
    predict_forest,
    predict_gbm,
    predict_tree,
    squared_error_gradient,
    staged_predict_gbm,
)


@pytest.fixture
def regression_data(rng):
    X = rng.uniform(0.0, 10.0, size=(120, 4))
    y = np.where(X[:, 0] > 5.0, 3.0, -1.0) + 0.5 * X[:, 2] + rng.normal(0.0, 0.1, size=120)
    return X, y


class TestTree:
    def test_step_function_is_recovered(self):
        X = np.array([[0.0], [1.0], [2.0], [3.0]])
        tree = fit_tree(X, [0.0, 0.0, 10.0, 10.0])
        assert tree.depth == 1
        assert tree.threshold[0] == pytest.approx(1.5)
        np.testing.assert_array_equal(predict_tree(tree, [[0.5], [2.5]]), [0.0, 10.0])

    def test_depth_limit(self, regression_data):
        X, y = regression_data
        assert fit_tree(X, y, max_depth=2).depth <= 2
        assert fit_tree(X, y, max_depth=0).node_count == 1

    def test_min_leaf(self, regression_data):
        X, y = regression_data
        tree = fit_tree(X, y, min_leaf=10)
        counts = np.bincount(tree.apply(X), minlength=tree.node_count)
        leaves = tree.feature == -1
        assert counts[leaves].min() >= 10

    def test_ties_pick_lowest_feature(self):
        X = np.array([[0.0, 0.0], [1.0, 1.0]])
        tree = fit_tree(X, [0.0, 1.0])
        assert tree.feature[0] == 0

    def test_unlimited_tree_interpolates_distinct_rows(self, regression_data):
        X, y = regression_data
        np.testing.assert_allclose(predict_tree(fit_tree(X, y), X), y)

    def test_leaf_tree(self):
        tree = RegressionTree.leaf(4.5, 3)
        np.testing.assert_array_equal(predict_tree(tree, np.zeros((2, 3))), [4.5, 4.5])

    def test_mtry_domain(self, regression_data):
        X, y = regression_data
        with pytest.raises(DomainError):
            fit_tree(X, y, mtry=5)

    def test_width_mismatch(self, regression_data):
        X, y = regression_data
        with pytest.raises(ShapeError):
            predict_tree(fit_tree(X, y, max_depth=1), np.zeros((2, 3)))

    def test_empty_training_set(self):
        with pytest.raises(SizeError):
            fit_tree(np.empty((0, 2)), [])


class TestRandomForest:
    def test_single_full_tree_equals_cart(self, regression_data):
        X, y = regression_data
        forest = fit_rfr(X, y, n_trees=1, mtry=4, bootstrap=False, min_leaf=1)
        np.testing.assert_array_equal(
            predict_forest(forest, X), predict_tree(fit_tree(X, y, min_leaf=1), X)
        )

    def test_identical_for_any_worker_count(self, regression_data):
        X, y = regression_data
        serial = fit_rfr(X, y, n_trees=8, seed=11, n_jobs=1)
        parallel = fit_rfr(X, y, n_trees=8, seed=11, n_jobs=2)
        np.testing.assert_array_equal(predict_forest(serial, X), predict_forest(parallel, X))

    def test_seed_changes_the_forest(self, regression_data):
        X, y = regression_data
        a = predict_forest(fit_rfr(X, y, n_trees=5, seed=1), X)
        b = predict_forest(fit_rfr(X, y, n_trees=5, seed=2), X)
        assert not np.array_equal(a, b)

    def test_prediction_is_tree_mean(self, regression_data):
        X, y = regression_data
        forest = fit_rfr(X, y, n_trees=4, seed=3)
        expected = np.mean([predict_tree(tree, X) for tree in forest.trees], axis=0)
        np.testing.assert_allclose(predict_forest(forest, X), expected)

    def test_default_mtry(self):
        assert [default_mtry(d) for d in (1, 3, 4, 6, 7)] == [1, 1, 2, 2, 3]

    def test_needs_a_tree(self, regression_data):
        X, y = regression_data
        with pytest.raises(DomainError):
            fit_rfr(X, y, n_trees=0)


class TestGradientBoosting:
    def test_squared_error_gradient(self):
        assert float(squared_error_gradient(1.0, 0.0)) == -2.0

    def test_training_loss_never_increases(self, regression_data):
        X, y = regression_data
        model = fit_gbm(X, y, n_trees=40, eta=0.3)
        losses = np.array(model.train_loss)
        assert len(losses) == 41
        assert np.all(np.diff(losses) <= 1e-12)
        assert losses[-1] < losses[0]

    def test_absolute_error_loss(self, regression_data):
        X, y = regression_data
        model = fit_gbm(X, y, n_trees=20, eta=0.5, loss=ABSOLUTE_ERROR)
        assert model.f0 == pytest.approx(np.median(y))
        losses = np.array(model.train_loss)
        assert np.all(np.diff(losses) <= 1e-12)
        assert losses[-1] == pytest.approx(np.mean(np.abs(y - predict_gbm(model, X))))

    def test_staged_predictions_end_at_final(self, regression_data):
        X, y = regression_data
        model = fit_gbm(X, y, n_trees=5)
        stages = list(staged_predict_gbm(model, X))
        assert len(stages) == 6
        np.testing.assert_allclose(stages[0], np.mean(y))
        np.testing.assert_allclose(stages[-1], predict_gbm(model, X))

    def test_depth_zero_stage_moves_to_mean(self):
        model = fit_gbm([[0.0], [1.0]], [1.0, 3.0], n_trees=1, eta=1.0, max_depth=0, min_leaf=1)
        np.testing.assert_allclose(predict_gbm(model, [[0.0], [1.0]]), [2.0, 2.0])

    @pytest.mark.parametrize('kwargs', [{'n_trees': 0}, {'eta': 0.0}, {'eta': 1.5}, {'loss': 'huber'}])
    def test_invalid_settings(self, regression_data, kwargs):
        X, y = regression_data
        with pytest.raises(DomainError):
            fit_gbm(X, y, **kwargs)


class TestPersistence:
    SERIES = [1.0, 2.0, 4.0]

    def test_last_value(self):
        np.testing.assert_array_equal(persistence_forecast(self.SERIES, PERSISTENCE_LAST), [1.0, 2.0, 4.0])
        assert first_forecast_index(PERSISTENCE_LAST) == 0

    def test_two_window(self):
        np.testing.assert_array_equal(persistence_forecast(self.SERIES, PERSISTENCE_TWO_WINDOW), [3.0, 6.0])
        assert first_forecast_index(PERSISTENCE_TWO_WINDOW) == 1

    def test_mean_of_two(self):
        np.testing.assert_array_equal(persistence_forecast(self.SERIES, PERSISTENCE_MEAN_OF_TWO), [1.5, 3.0])

    def test_constant_series_is_forecast_exactly(self):
        for mode in (PERSISTENCE_LAST, PERSISTENCE_TWO_WINDOW, PERSISTENCE_MEAN_OF_TWO):
            assert np.all(persistence_forecast([5.0] * 6, mode) == 5.0)

    def test_too_short(self):
        with pytest.raises(SizeError):
            persistence_forecast([1.0])

    def test_unknown_mode(self):
        with pytest.raises(DomainError):
            persistence_forecast(self.SERIES, 'seasonal')
