"""
Tree ensembles and the persistence baseline for the rampcast application.

Provides:
- RegressionTree / fit_tree: CART with exact variance-reduction split search
- ForestModel / fit_rfr: bootstrap random forest with per-split feature sampling
- GbmModel / fit_gbm: gradient boosting on residuals (squared or absolute loss)
- persistence_forecast: last-value, two-window extrapolation and mean-of-two baselines
"""

from dataclasses import dataclass, field
import logging
import math
from typing import List, Optional, Sequence, Tuple

from joblib import Parallel, delayed
import numpy as np

from ..exceptions import DomainError, ShapeError, SizeError

logger = logging.getLogger(__name__)

SQUARED_ERROR = 'squared_error'
ABSOLUTE_ERROR = 'absolute_error'
GBM_LOSSES = (SQUARED_ERROR, ABSOLUTE_ERROR)

PERSISTENCE_LAST = 'last'
PERSISTENCE_TWO_WINDOW = 'two_window'
PERSISTENCE_MEAN_OF_TWO = 'mean_of_two'
PERSISTENCE_MODES = (PERSISTENCE_LAST, PERSISTENCE_TWO_WINDOW, PERSISTENCE_MEAN_OF_TWO)

_LEAF = -1


# ============================================
# 1. REGRESSION TREE
# ============================================

@dataclass(frozen=True)
class RegressionTree:
    """
    Binary regression tree in flat array form.

    Node k is internal when feature[k] >= 0: rows with
    x[feature[k]] <= threshold[k] go to left[k], the rest to right[k].
    Leaves carry value[k].

    Attributes:
        feature (np.ndarray): split feature per node, -1 for leaves
        threshold (np.ndarray): split threshold per node
        left (np.ndarray): left child per node
        right (np.ndarray): right child per node
        value (np.ndarray): mean response of the training rows in the node
        n_features (int): training dimensionality
        max_depth (int | None): depth limit used while growing
        min_leaf (int): minimum rows per leaf used while growing
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    n_features: int
    max_depth: Optional[int] = None
    min_leaf: int = 1

    @classmethod
    def leaf(cls, value: float, n_features: int) -> 'RegressionTree':
        """A single-leaf tree predicting a constant."""
        return cls(
            feature=np.array([_LEAF]),
            threshold=np.array([0.0]),
            left=np.array([_LEAF]),
            right=np.array([_LEAF]),
            value=np.array([float(value)]),
            n_features=n_features,
            max_depth=0,
        )

    @property
    def node_count(self) -> int:
        return len(self.feature)

    @property
    def depth(self) -> int:
        depths = np.zeros(self.node_count, dtype=int)
        for node in range(self.node_count):
            if self.feature[node] != _LEAF:
                depths[self.left[node]] = depths[node] + 1
                depths[self.right[node]] = depths[node] + 1
        return int(depths.max())

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index each row lands in."""
        node = np.zeros(len(X), dtype=int)
        while True:
            routed = np.flatnonzero(self.feature[node] != _LEAF)
            if routed.size == 0:
                return node
            current = node[routed]
            goes_left = X[routed, self.feature[current]] <= self.threshold[current]
            node[routed] = np.where(goes_left, self.left[current], self.right[current])

    def with_leaf_values(self, values: np.ndarray) -> 'RegressionTree':
        return RegressionTree(
            self.feature, self.threshold, self.left, self.right,
            np.asarray(values, dtype=np.float64), self.n_features, self.max_depth, self.min_leaf,
        )


def _check_features(X, n_features: Optional[int] = None) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1 and X.size == 0 and n_features is not None:
        X = X.reshape(0, n_features)
    if X.ndim != 2:
        raise ShapeError(f"feature matrix must be 2-D, got shape {X.shape}")
    if n_features is not None and X.shape[1] != n_features:
        raise ShapeError(f"model was trained on {n_features} features, got {X.shape[1]}")
    return X


def _check_training(X, y) -> Tuple[np.ndarray, np.ndarray]:
    X = _check_features(X)
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1 or len(y) != len(X):
        raise ShapeError(f"feature matrix {X.shape} and targets {y.shape} do not align")
    if len(y) < 1:
        raise SizeError("need at least one training row")
    return X, y


def _best_split(X: np.ndarray, y: np.ndarray, features: np.ndarray, min_leaf: int):
    """
    Exact scan over sorted values; returns (feature, threshold) or None.

    Ties resolve to the lowest feature index, then the lowest threshold.
    """
    n = len(y)
    total = y.sum()
    parent = total * total / n
    left_n = np.arange(1, n)
    right_n = n - left_n
    size_ok = (left_n >= min_leaf) & (right_n >= min_leaf)

    best_gain, best = 0.0, None
    for j in features:
        order = np.argsort(X[:, j], kind='stable')
        xs = X[order, j]
        left_sum = np.cumsum(y[order])[:-1]
        right_sum = total - left_sum
        valid = size_ok & (xs[:-1] < xs[1:])
        if not valid.any():
            continue
        score = np.where(valid, left_sum ** 2 / left_n + right_sum ** 2 / right_n, -np.inf)
        i = int(np.argmax(score))
        gain = score[i] - parent
        if gain > best_gain:
            threshold = 0.5 * (xs[i] + xs[i + 1])
            if threshold >= xs[i + 1]:
                threshold = xs[i]
            best_gain, best = gain, (int(j), float(threshold))
    return best


def fit_tree(
    X,
    y,
    max_depth: Optional[int] = None,
    min_leaf: int = 1,
    mtry: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> RegressionTree:
    """
    Grow a CART regression tree by greedy variance reduction.

    At each node, mtry features are drawn without replacement (all of them
    when mtry is None or equals the feature count) and the split with the
    largest reduction in squared error is taken. Leaves store target means.

    Args:
        X: feature matrix (n x d), n >= 1
        y: targets
        max_depth (int | None): depth limit, None for unlimited
        min_leaf (int): minimum rows per leaf
        mtry (int | None): features sampled per split
        rng (np.random.Generator | None): feature sampling source

    Returns:
        RegressionTree: the fitted tree

    Example:
        >>> tree = fit_tree([[0.0], [0.0], [1.0], [1.0]], [2.0, 2.0, 5.0, 5.0])
        >>> tree.depth, [float(v) for v in predict_tree(tree, [[0.0], [1.0]])]
        (1, [2.0, 5.0])
    """
    X, y = _check_training(X, y)
    n_features = X.shape[1]
    mtry = n_features if mtry is None else int(mtry)
    if not 1 <= mtry <= n_features:
        raise DomainError(f"mtry must lie in [1, {n_features}], got {mtry}")
    if min_leaf < 1:
        raise DomainError(f"min_leaf must be >= 1, got {min_leaf}")
    if max_depth is not None and max_depth < 0:
        raise DomainError(f"max_depth must be >= 0, got {max_depth}")
    rng = rng if rng is not None else np.random.default_rng(0)
    all_features = np.arange(n_features)

    feature: List[int] = []
    threshold: List[float] = []
    left: List[int] = []
    right: List[int] = []
    value: List[float] = []

    def new_node(rows: np.ndarray) -> int:
        feature.append(_LEAF)
        threshold.append(0.0)
        left.append(_LEAF)
        right.append(_LEAF)
        value.append(float(y[rows].mean()))
        return len(feature) - 1

    stack = [(new_node(np.arange(len(y))), np.arange(len(y)), 0)]
    while stack:
        node, rows, depth = stack.pop()
        if (max_depth is not None and depth >= max_depth) or len(rows) < 2 * min_leaf:
            continue
        targets = y[rows]
        if np.ptp(targets) == 0:
            continue
        if mtry == n_features:
            features = all_features
        else:
            features = np.sort(rng.choice(n_features, size=mtry, replace=False))
        split = _best_split(X[rows], targets, features, min_leaf)
        if split is None:
            continue
        j, cut = split
        goes_left = X[rows, j] <= cut
        left_rows, right_rows = rows[goes_left], rows[~goes_left]
        feature[node], threshold[node] = j, cut
        left[node] = new_node(left_rows)
        right[node] = new_node(right_rows)
        # Right first so the left subtree is numbered before it
        stack.append((right[node], right_rows, depth + 1))
        stack.append((left[node], left_rows, depth + 1))

    return RegressionTree(
        feature=np.array(feature, dtype=int),
        threshold=np.array(threshold, dtype=np.float64),
        left=np.array(left, dtype=int),
        right=np.array(right, dtype=int),
        value=np.array(value, dtype=np.float64),
        n_features=n_features,
        max_depth=max_depth,
        min_leaf=min_leaf,
    )


def predict_tree(tree: RegressionTree, X) -> np.ndarray:
    X = _check_features(X, tree.n_features)
    return tree.value[tree.apply(X)]


# ============================================
# 2. RANDOM FOREST
# ============================================

@dataclass(frozen=True)
class ForestModel:
    """
    Random forest regressor.

    Attributes:
        trees (tuple[RegressionTree]): the k fitted trees
        mtry (int): features sampled per split
        seed (int): root seed of the per-tree RNG streams
        bootstrap (bool): whether each tree saw a bootstrap resample
    """

    trees: Tuple[RegressionTree, ...]
    mtry: int
    seed: int = 0
    bootstrap: bool = True

    @property
    def n_features(self) -> int:
        return self.trees[0].n_features


def default_mtry(n_features: int) -> int:
    """Regression default: ceil(d / 3)."""
    return max(1, math.ceil(n_features / 3))


def _grow_forest_tree(X, y, bootstrap, max_depth, min_leaf, mtry, seed_seq) -> RegressionTree:
    rng = np.random.default_rng(seed_seq)
    if bootstrap:
        rows = rng.integers(0, len(y), size=len(y))
        X, y = X[rows], y[rows]
    return fit_tree(X, y, max_depth=max_depth, min_leaf=min_leaf, mtry=mtry, rng=rng)


def fit_rfr(
    X,
    y,
    n_trees: int = 200,
    mtry: Optional[int] = None,
    seed: int = 0,
    bootstrap: bool = True,
    max_depth: Optional[int] = None,
    min_leaf: int = 5,
    n_jobs: int = 1,
) -> ForestModel:
    """
    Fit a random forest of regression trees.

    Tree i draws its bootstrap rows and split features from its own RNG
    stream spawned from `seed`, so the forest is identical for any n_jobs.

    Args:
        X: feature matrix (n x d)
        y: targets
        n_trees (int): number of trees k >= 1
        mtry (int | None): features per split, default ceil(d / 3)
        seed (int): root seed
        bootstrap (bool): resample n rows with replacement per tree
        max_depth (int | None): tree depth limit
        min_leaf (int): minimum rows per leaf
        n_jobs (int): joblib workers

    Returns:
        ForestModel: the fitted forest
    """
    X, y = _check_training(X, y)
    if n_trees < 1:
        raise DomainError(f"a forest needs at least one tree, got {n_trees}")
    mtry = default_mtry(X.shape[1]) if mtry is None else int(mtry)

    streams = np.random.SeedSequence(seed).spawn(n_trees)
    trees = Parallel(n_jobs=n_jobs)(
        delayed(_grow_forest_tree)(X, y, bootstrap, max_depth, min_leaf, mtry, stream)
        for stream in streams
    )
    logger.debug(
        f"Random forest fitted: {n_trees} trees, mtry={mtry}, bootstrap={bootstrap}, "
        f"mean nodes={np.mean([t.node_count for t in trees]):.1f}"
    )
    return ForestModel(tuple(trees), mtry, seed, bootstrap)


def predict_forest(model: ForestModel, X) -> np.ndarray:
    """Arithmetic mean of the per-tree predictions."""
    X = _check_features(X, model.n_features)
    if len(X) == 0:
        return np.empty(0)
    return np.mean([predict_tree(tree, X) for tree in model.trees], axis=0)


# ============================================
# 3. GRADIENT BOOSTING
# ============================================

@dataclass(frozen=True)
class GbmModel:
    """
    Gradient-boosted regression trees.

    F_0 = f0 and F_m(x) = F_{m-1}(x) + eta * stage_m(x).

    Attributes:
        f0 (float): initial constant (mean, or median for absolute error)
        stages (tuple[RegressionTree]): ordered stage trees
        eta (float): learning rate
        loss (str): 'squared_error' or 'absolute_error'
        train_loss (tuple[float]): training loss after each stage, F_0 first
    """

    f0: float
    stages: Tuple[RegressionTree, ...]
    eta: float
    loss: str = SQUARED_ERROR
    train_loss: Tuple[float, ...] = field(default=())
    n_features: int = 0

    @property
    def n_trees(self) -> int:
        return len(self.stages)


def squared_error_gradient(y, y_hat) -> np.ndarray:
    """d/dy_hat of (y - y_hat)^2, i.e. -2 (y - y_hat)."""
    return -2.0 * (np.asarray(y, dtype=np.float64) - np.asarray(y_hat, dtype=np.float64))


def _loss(kind: str, residual: np.ndarray) -> float:
    if kind == ABSOLUTE_ERROR:
        return float(np.mean(np.abs(residual)))
    return float(np.mean(residual ** 2))


def fit_gbm(
    X,
    y,
    n_trees: int = 500,
    eta: float = 0.05,
    max_depth: int = 3,
    min_leaf: int = 5,
    loss: str = SQUARED_ERROR,
) -> GbmModel:
    """
    Fit gradient-boosted trees.

    With squared error each stage fits the residuals y - F_{m-1}(X), the
    negative half-gradient of the loss. With absolute error each stage
    fits the residual signs and its leaves are reset to the residual
    medians of the rows they hold.

    Raises:
        DomainError: if n_trees < 1, eta not in (0, 1] or the loss is unknown

    Example:
        >>> model = fit_gbm([[0.0], [1.0]], [1.0, 3.0], n_trees=1, eta=1.0, max_depth=0, min_leaf=1)
        >>> [float(v) for v in predict_gbm(model, [[0.0], [1.0]])]
        [2.0, 2.0]
    """
    X, y = _check_training(X, y)
    if n_trees < 1:
        raise DomainError(f"boosting needs at least one stage, got {n_trees}")
    if not 0 < eta <= 1:
        raise DomainError(f"learning rate must lie in (0, 1], got {eta}")
    if loss not in GBM_LOSSES:
        raise DomainError(f"unknown boosting loss {loss!r}; choose one of: {', '.join(GBM_LOSSES)}")

    f0 = float(np.median(y)) if loss == ABSOLUTE_ERROR else float(np.mean(y))
    fitted = np.full(len(y), f0)
    history = [_loss(loss, y - fitted)]
    stages = []
    for _ in range(n_trees):
        residual = y - fitted
        if loss == ABSOLUTE_ERROR:
            tree = fit_tree(X, np.sign(residual), max_depth=max_depth, min_leaf=min_leaf)
            leaves = tree.apply(X)
            medians = tree.value.copy()
            for leaf in np.unique(leaves):
                medians[leaf] = np.median(residual[leaves == leaf])
            tree = tree.with_leaf_values(medians)
        else:
            tree = fit_tree(X, residual, max_depth=max_depth, min_leaf=min_leaf)
        fitted = fitted + eta * predict_tree(tree, X)
        stages.append(tree)
        history.append(_loss(loss, y - fitted))

    logger.debug(
        f"GBM fitted: {n_trees} stages, eta={eta}, depth={max_depth}, loss={loss}, "
        f"train loss {history[0]:.4g} -> {history[-1]:.4g}"
    )
    return GbmModel(f0, tuple(stages), float(eta), loss, tuple(history), X.shape[1])


def staged_predict_gbm(model: GbmModel, X):
    """Yield F_0(X), F_1(X), ..., F_M(X)."""
    X = _check_features(X, model.n_features)
    current = np.full(len(X), model.f0)
    yield current.copy()
    for tree in model.stages:
        current = current + model.eta * predict_tree(tree, X)
        yield current.copy()


def predict_gbm(model: GbmModel, X) -> np.ndarray:
    """f0 + eta * sum of stage predictions."""
    X = _check_features(X, model.n_features)
    prediction = np.full(len(X), model.f0)
    for tree in model.stages:
        prediction += model.eta * predict_tree(tree, X)
    return prediction


# ============================================
# 4. PERSISTENCE BASELINE
# ============================================

def first_forecast_index(mode: str) -> int:
    """Earliest timestep t at which a forecast of s(t + 1) exists."""
    return 0 if mode == PERSISTENCE_LAST else 1


def persistence_forecast(series: Sequence[float], mode: str = PERSISTENCE_TWO_WINDOW) -> np.ndarray:
    """
    One-step-ahead persistence forecasts.

    Element k of the result forecasts s(t + 1) from data up to t, where
    t = first_forecast_index(mode) + k. The last element is the forecast
    one step beyond the series.

    Modes:
        last:        s_hat(t + 1) = s(t)
        two_window:  s_hat(t + 1) = s(t) + (s(t) - s(t - 1))
        mean_of_two: s_hat(t + 1) = (s(t) + s(t - 1)) / 2

    Raises:
        SizeError: if the series has fewer than 2 samples
        DomainError: on an unknown mode

    Example:
        >>> float(persistence_forecast([4.0, 6.0], 'two_window')[-1])
        8.0
    """
    s = np.asarray(series, dtype=np.float64)
    if mode not in PERSISTENCE_MODES:
        raise DomainError(f"unknown persistence mode {mode!r}; choose one of: {', '.join(PERSISTENCE_MODES)}")
    if s.ndim != 1 or len(s) < 2:
        raise SizeError(f"persistence needs at least 2 samples, got {s.shape}")
    if mode == PERSISTENCE_LAST:
        return s.copy()
    if mode == PERSISTENCE_TWO_WINDOW:
        return 2.0 * s[1:] - s[:-1]
    return 0.5 * (s[1:] + s[:-1])
