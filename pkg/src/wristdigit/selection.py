"""Dataset splitting, k-fold cross-validation, and exhaustive grid search.

The split is a seeded uniform permutation cut at the ratio boundaries
(train and validation sizes floored, the remainder becoming test), with no
stratification. Grid search records per-fold CV AUROCs as diagnostics and
selects by validation AUROC, first maximum winning ties.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import GridSearchError
from .gbdt import GradientBoostedTrees, TrainConfig
from .metrics import auroc
from .segments import Dataset
from .validation import check_seed

N_ESTIMATORS_GRID = (1000, 2000, 3000, 4000, 5000)
TREE_ALGORITHM_GRID = ("hist", "exact")
MAX_DEPTH_GRID = (1, 2, 3, 4, 5, 6, 7, 8)
LEARNING_RATE_GRID = (0.1, 0.3, 0.5)


def _permutation(n: int, seed: int) -> np.ndarray:
    """Seeded uniform permutation of range(n), stable across runs."""
    rng = np.random.Generator(np.random.Philox(key=check_seed(seed)))
    return np.argsort(rng.random(n), kind="stable")


@dataclass(frozen=True)
class SplitSpec:
    """Three-way split ratios plus the permutation seed."""

    ratios: tuple[float, float, float] = (0.6, 0.2, 0.2)
    seed: int = 0

    def __post_init__(self):
        if len(self.ratios) != 3 or any(r <= 0 for r in self.ratios):
            raise ValueError(f"ratios must be three positive values, got {self.ratios}")
        if abs(sum(self.ratios) - 1.0) > 1e-12:
            raise ValueError(f"ratios must sum to 1, got {self.ratios}")
        check_seed(self.seed)


def split_indices(n: int, spec: SplitSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Permute range(n) and cut into (train, val, test) index arrays."""
    if n < 1:
        raise ValueError("cannot split an empty dataset")
    perm = _permutation(n, spec.seed)
    # the epsilon absorbs cases like 0.6 * 400 = 239.999...
    n_train = int(spec.ratios[0] * n + 1e-9)
    n_val = int(spec.ratios[1] * n + 1e-9)
    if n_train < 1 or n_val < 1 or n_train + n_val >= n:
        raise ValueError(f"split of {n} samples at {spec.ratios} leaves an empty part")
    return perm[:n_train], perm[n_train : n_train + n_val], perm[n_train + n_val :]


def split_dataset(dataset: Dataset, spec: SplitSpec = SplitSpec()) -> tuple[Dataset, Dataset, Dataset]:
    """Partition a labeled dataset into train/validation/test."""
    idx_train, idx_val, idx_test = split_indices(len(dataset), spec)
    return dataset.subset(idx_train), dataset.subset(idx_val), dataset.subset(idx_test)


def kfold(n: int, k: int, seed: int = 0) -> list[tuple[np.ndarray, np.ndarray]]:
    """Seeded k-fold partition: k (train indices, held-out indices) pairs.

    Fold sizes differ by at most one; the first n % k folds are the larger.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if k > n:
        raise ValueError(f"k={k} exceeds sample count {n}")
    perm = _permutation(n, seed)
    base, rem = divmod(n, k)
    folds = []
    start = 0
    for i in range(k):
        size = base + (1 if i < rem else 0)
        held = perm[start : start + size]
        train = np.concatenate((perm[:start], perm[start + size :]))
        folds.append((train, held))
        start += size
    return folds


def make_grid(
    n_estimators=N_ESTIMATORS_GRID,
    tree_algorithms=TREE_ALGORITHM_GRID,
    max_depths=MAX_DEPTH_GRID,
    learning_rates=LEARNING_RATE_GRID,
    **fixed,
) -> tuple[TrainConfig, ...]:
    """Cartesian product of the four searched axes, outermost axis first."""
    return tuple(
        TrainConfig(
            n_estimators=n, learning_rate=lr, max_depth=d, tree_algorithm=alg, **fixed
        )
        for n in n_estimators
        for alg in tree_algorithms
        for d in max_depths
        for lr in learning_rates
    )


def default_grid() -> tuple[TrainConfig, ...]:
    """The full 240-combination search grid."""
    return make_grid()


def smoke_grid() -> tuple[TrainConfig, ...]:
    """4-combination subset for fast end-to-end runs."""
    return make_grid(n_estimators=(1000,), max_depths=(1, 6), learning_rates=(0.1,))


def baseline_config() -> TrainConfig:
    """The pre-search reference configuration (single fit, no tuning)."""
    return TrainConfig(n_estimators=100, learning_rate=0.1, max_depth=6, tree_algorithm="exact")


def derive_config_seed(seed: int, index: int) -> int:
    """Per-combination seed, independent of evaluation order."""
    mix = (check_seed(seed) + 0x9E3779B97F4A7C15 * (index + 1)) % 2**64
    mix ^= mix >> 31
    return (mix * 0xBF58476D1CE4E5B9) % 2**64


@dataclass(frozen=True)
class GridEntry:
    """Scores for one hyperparameter combination."""

    config: TrainConfig
    fold_aurocs: tuple[float, ...]
    cv_mean_auroc: float
    val_auroc: float


@dataclass(frozen=True)
class GridResult:
    """All per-combination scores plus the selected best."""

    entries: tuple[GridEntry, ...]
    best_index: int

    @property
    def best(self) -> GridEntry:
        return self.entries[self.best_index]


def grid_search(
    X_train: np.ndarray,
    y_train: np.ndarray,
    X_val: np.ndarray,
    y_val: np.ndarray,
    grid: tuple[TrainConfig, ...],
    n_folds: int = 5,
    seed: int = 0,
) -> GridResult:
    """Score every combination by k-fold CV on train and a fit scored on val.

    The best combination maximizes validation AUROC (first maximum wins).
    Training failures surface as GridSearchError naming the combination.
    """
    if not grid:
        raise ValueError("grid is empty")
    X_train = np.asarray(X_train, dtype=np.float64)
    y_train = np.asarray(y_train)
    folds = kfold(X_train.shape[0], n_folds, seed)

    entries = []
    for i, config in enumerate(grid):
        config = replace(config, seed=derive_config_seed(seed, i))
        try:
            fold_scores = []
            for idx_fit, idx_held in folds:
                model = GradientBoostedTrees.from_config(config)
                model.fit(X_train[idx_fit], y_train[idx_fit])
                fold_scores.append(auroc(model.predict_proba(X_train[idx_held]), y_train[idx_held]))
            model = GradientBoostedTrees.from_config(config).fit(X_train, y_train)
            val_score = auroc(model.predict_proba(X_val), y_val)
        except ValueError as err:
            raise GridSearchError(config, err) from err
        entries.append(
            GridEntry(
                config=config,
                fold_aurocs=tuple(fold_scores),
                cv_mean_auroc=float(np.mean(fold_scores)),
                val_auroc=float(val_score),
            )
        )

    best_index = 0
    for i, entry in enumerate(entries):
        if entry.val_auroc > entries[best_index].val_auroc:
            best_index = i
    return GridResult(entries=tuple(entries), best_index=best_index)


def retrain_final(
    X: np.ndarray,
    y: np.ndarray,
    config: TrainConfig,
    feature_names: tuple[str, ...] | None = None,
) -> GradientBoostedTrees:
    """Fit the deployment model on every labeled sample."""
    return GradientBoostedTrees.from_config(config).fit(X, y, feature_names=feature_names)
