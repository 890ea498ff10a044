"""Gradient-boosted decision trees for binary logistic classification.

Newton boosting: each round fits one regression tree to the per-sample
gradient g = p - y and hessian h = p(1 - p) of the logistic loss, with
L2-regularized leaf weights -G/(H + lambda) and split gain

    1/2 * [G_L^2/(H_L + lambda) + G_R^2/(H_R + lambda) - G^2/(H + lambda)].

Split finding runs over pre-binned features: `exact` gives every distinct
value its own bin (thresholds at midpoints between neighbors), `hist`
caps the bin count at quantile edges. Both share one code path, so when
every feature has no more distinct values than bins the two algorithms
produce identical trees.

Routing rule everywhere: x[feature] < threshold goes left.
"""

import hashlib
import json
import math
from dataclasses import dataclass, fields

import numpy as np

from .errors import ModelFormatError
from .validation import ParamsMixin, as_binary_labels, as_float_matrix, check_seed

FORMAT_VERSION = 1
MODEL_KIND = "gbdt-binary-logistic"

TREE_ALGORITHMS = ("exact", "hist")
_HESSIAN_FLOOR = 1e-16


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters of one training run."""

    n_estimators: int
    learning_rate: float
    max_depth: int
    tree_algorithm: str
    reg_lambda: float = 1.0
    n_bins: int = 256
    min_child_weight: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.n_estimators:
            raise ValueError(f"n_estimators must be >= 1, got {self.n_estimators}")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError(f"learning_rate must be in (0, 1], got {self.learning_rate}")
        if not 1 <= self.max_depth <= 32:
            raise ValueError(f"max_depth must be in [1, 32], got {self.max_depth}")
        if self.tree_algorithm not in TREE_ALGORITHMS:
            raise ValueError(f"tree_algorithm must be one of {TREE_ALGORITHMS}, got {self.tree_algorithm!r}")
        if self.reg_lambda < 0:
            raise ValueError(f"reg_lambda must be >= 0, got {self.reg_lambda}")
        if self.n_bins < 2:
            raise ValueError(f"n_bins must be >= 2, got {self.n_bins}")
        if self.min_child_weight < 0:
            raise ValueError(f"min_child_weight must be >= 0, got {self.min_child_weight}")
        check_seed(self.seed)


def sigmoid(margin: float) -> float:
    """Logistic function, clamped to the open interval (0, 1) in float64."""
    if margin >= 0:
        p = 1.0 / (1.0 + math.exp(-margin))
    else:
        e = math.exp(margin)
        p = e / (1.0 + e)
    if p >= 1.0:
        return float(np.nextafter(1.0, 0.0))
    if p <= 0.0:
        return float(np.nextafter(0.0, 1.0))
    return p


def _sigmoid_array(margins: np.ndarray) -> np.ndarray:
    # same clamped scalar path as sigmoid(); keeps batch and single-row
    # probabilities bit-identical
    out = np.empty_like(margins)
    for i in range(margins.shape[0]):
        out[i] = sigmoid(float(margins[i]))
    return out


class Tree:
    """One regression tree as parallel node arrays.

    feature[i] < 0 marks node i as a leaf with weight value[i]; otherwise
    node i tests x[feature[i]] < threshold[i] and routes to left[i] or
    right[i]. Node 0 is the root; children always follow their parent.
    """

    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self, feature, threshold, left, right, value):
        self.feature = np.asarray(feature, dtype=np.int32)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int32)
        self.right = np.asarray(right, dtype=np.int32)
        self.value = np.asarray(value, dtype=np.float64)

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]

    @property
    def n_leaves(self) -> int:
        return int(np.sum(self.feature < 0))

    def predict_row(self, row: np.ndarray) -> float:
        i = 0
        while self.feature[i] >= 0:
            if row[self.feature[i]] < self.threshold[i]:
                i = self.left[i]
            else:
                i = self.right[i]
        return float(self.value[i])

    def predict(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=np.int32)
        while True:
            feat = self.feature[node]
            active = np.nonzero(feat >= 0)[0]
            if active.size == 0:
                break
            cur = node[active]
            go_left = X[active, feat[active]] < self.threshold[cur]
            node[active] = np.where(go_left, self.left[cur], self.right[cur])
        return self.value[node]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return (
            np.array_equal(self.feature, other.feature)
            and np.array_equal(self.threshold, other.threshold)
            and np.array_equal(self.left, other.left)
            and np.array_equal(self.right, other.right)
            and np.array_equal(self.value, other.value)
        )


def bin_features(X: np.ndarray, n_bins: int) -> tuple[list[np.ndarray], np.ndarray]:
    """Per-feature bin edges and the matrix of bin indices.

    A value v falls in bin #{edges <= v}, so every edge is also a split
    threshold under the `< threshold goes left` rule. Features with at
    most n_bins distinct values get one bin per value with edges at
    midpoints between neighbors; wider features get quantile edges with
    duplicates removed (never more than n_bins bins).
    """
    X = as_float_matrix(X, "X")
    if X.shape[0] < 1:
        raise ValueError("need at least one row to bin")
    if n_bins < 2:
        raise ValueError(f"n_bins must be >= 2, got {n_bins}")
    edges_per_feature: list[np.ndarray] = []
    binned = np.empty(X.shape, dtype=np.int32)
    for j in range(X.shape[1]):
        col = X[:, j]
        distinct = np.unique(col)
        if distinct.shape[0] <= n_bins:
            edges = (distinct[:-1] + distinct[1:]) / 2.0
        else:
            qs = np.arange(1, n_bins) / n_bins
            edges = np.unique(np.quantile(col, qs))
        edges_per_feature.append(edges)
        binned[:, j] = np.searchsorted(edges, col, side="right")
    return edges_per_feature, binned


class _BinnedDesign:
    """Flat-indexed view of a binned matrix plus the split-candidate tables.

    Candidates are laid out feature-major with thresholds ascending, so a
    first-maximum argmax over candidate gains lands on the lowest feature
    index and then the lowest threshold.
    """

    __slots__ = (
        "flat", "n_features", "total_bins", "cand_threshold", "cand_feature",
        "cand_cut", "cand_flat_bin",
    )

    def __init__(self, edges_per_feature: list[np.ndarray], binned: np.ndarray):
        n_bins_each = np.array([e.shape[0] + 1 for e in edges_per_feature], dtype=np.int64)
        offsets = np.concatenate(([0], np.cumsum(n_bins_each)))
        self.n_features = binned.shape[1]
        self.total_bins = int(offsets[-1])
        self.flat = (binned.astype(np.int64) + offsets[:-1]).ravel()
        self.cand_threshold = np.concatenate(edges_per_feature) if edges_per_feature else np.empty(0)
        self.cand_feature = np.repeat(
            np.arange(self.n_features, dtype=np.int64), n_bins_each - 1
        )
        # split after local bin b of feature f: left = bins [0..b]
        self.cand_cut = np.concatenate(
            [np.arange(n - 1, dtype=np.int64) for n in n_bins_each]
        ) if self.n_features else np.empty(0, dtype=np.int64)
        self.cand_flat_bin = self.cand_cut + offsets[self.cand_feature]


def _build_tree(
    design: _BinnedDesign,
    binned: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    max_depth: int,
    reg_lambda: float,
    min_child_weight: float,
) -> Tree:
    """Grow one tree greedily; nodes are numbered in creation order."""
    n, p = binned.shape
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    value: list[float] = []

    def new_node() -> int:
        feature.append(-1)
        threshold.append(math.nan)
        left.append(-1)
        right.append(-1)
        value.append(0.0)
        return len(feature) - 1

    # stack of (node id, row indices, depth); children expand depth-first
    root = new_node()
    stack = [(root, np.arange(n, dtype=np.int64), 0)]
    while stack:
        node_id, rows, depth = stack.pop()
        g_total = float(g[rows].sum())
        h_total = float(h[rows].sum())

        cut = None
        # a split needs min_child_weight of hessian on each side, so nodes
        # below twice that can never split; skips the histogram pass once
        # training has saturated
        if (
            depth < max_depth
            and rows.shape[0] >= 2
            and h_total >= 2.0 * min_child_weight
            and design.cand_flat_bin.shape[0]
        ):
            flat_idx = design.flat.reshape(n, p)[rows].ravel()
            gb = np.bincount(flat_idx, weights=np.repeat(g[rows], p), minlength=design.total_bins)
            hb = np.bincount(flat_idx, weights=np.repeat(h[rows], p), minlength=design.total_bins)
            # prefix sums with a leading 0: left stats for a split after flat
            # bin j of a feature starting at bin o are cs[j + 1] - cs[o]
            cs_g = np.concatenate(([0.0], np.cumsum(gb)))
            cs_h = np.concatenate(([0.0], np.cumsum(hb)))
            start = design.cand_flat_bin - design.cand_cut
            gl = cs_g[design.cand_flat_bin + 1] - cs_g[start]
            hl = cs_h[design.cand_flat_bin + 1] - cs_h[start]
            gr = g_total - gl
            hr = h_total - hl
            with np.errstate(divide="ignore", invalid="ignore"):
                gain = 0.5 * (
                    gl * gl / (hl + reg_lambda)
                    + gr * gr / (hr + reg_lambda)
                    - g_total * g_total / (h_total + reg_lambda)
                )
            # empty-side candidates with reg_lambda 0 produce 0/0
            bad = (hl < min_child_weight) | (hr < min_child_weight) | ~np.isfinite(gain)
            gain[bad] = -np.inf
            best = int(np.argmax(gain))
            if gain[best] > 0.0:
                cut = best

        if cut is None:
            value[node_id] = -g_total / (h_total + reg_lambda)
            continue

        f = int(design.cand_feature[cut])
        feature[node_id] = f
        threshold[node_id] = float(design.cand_threshold[cut])
        go_left = binned[rows, f] <= design.cand_cut[cut]
        left_rows = rows[go_left]
        right_rows = rows[~go_left]
        left_id = new_node()
        right_id = new_node()
        left[node_id] = left_id
        right[node_id] = right_id
        # push right first so the left child is processed (and numbered) next
        stack.append((right_id, right_rows, depth + 1))
        stack.append((left_id, left_rows, depth + 1))

    return Tree(feature, threshold, left, right, value)


class GradientBoostedTrees(ParamsMixin):
    """Binary classifier built from Newton-boosted regression trees.

    Fitted attributes: trees_, base_margin_, feature_names_,
    n_features_in_, train_losses_ (mean logistic loss after each round).
    """

    _param_names = (
        "n_estimators", "learning_rate", "max_depth", "tree_algorithm",
        "reg_lambda", "n_bins", "min_child_weight", "seed",
    )

    def __init__(
        self,
        n_estimators: int = 100,
        learning_rate: float = 0.1,
        max_depth: int = 6,
        tree_algorithm: str = "exact",
        reg_lambda: float = 1.0,
        n_bins: int = 256,
        min_child_weight: float = 1.0,
        seed: int = 0,
    ):
        self.n_estimators = n_estimators
        self.learning_rate = learning_rate
        self.max_depth = max_depth
        self.tree_algorithm = tree_algorithm
        self.reg_lambda = reg_lambda
        self.n_bins = n_bins
        self.min_child_weight = min_child_weight
        self.seed = seed

    @classmethod
    def from_config(cls, config: TrainConfig) -> "GradientBoostedTrees":
        return cls(**{f.name: getattr(config, f.name) for f in fields(TrainConfig)})

    def config(self) -> TrainConfig:
        return TrainConfig(**{name: getattr(self, name) for name in self._param_names})

    def fit(self, X, y, feature_names: tuple[str, ...] | None = None) -> "GradientBoostedTrees":
        cfg = self.config()  # validates parameters
        X = as_float_matrix(X, "X")
        n, p = X.shape
        if n < 2:
            raise ValueError(f"need at least 2 samples, got {n}")
        y = as_binary_labels(y, n_rows=n, require_both=True)
        if feature_names is None:
            feature_names = tuple(f"f{i}" for i in range(p))
        elif len(feature_names) != p:
            raise ValueError(f"expected {p} feature names, got {len(feature_names)}")

        if cfg.tree_algorithm == "exact":
            # one bin per distinct value: binning is lossless
            edges, binned = bin_features(X, n_bins=n)
        else:
            edges, binned = bin_features(X, n_bins=cfg.n_bins)
        design = _BinnedDesign(edges, binned)

        yf = y.astype(np.float64)
        margin = np.zeros(n, dtype=np.float64)
        base = 0.0
        trees: list[Tree] = []
        losses = np.empty(cfg.n_estimators, dtype=np.float64)
        prob = _sigmoid_array(base + margin)
        for t in range(cfg.n_estimators):
            g = prob - yf
            h = np.maximum(prob * (1.0 - prob), _HESSIAN_FLOOR)
            tree = _build_tree(
                design, binned, g, h, cfg.max_depth, cfg.reg_lambda, cfg.min_child_weight
            )
            trees.append(tree)
            margin += cfg.learning_rate * tree.predict(X)
            prob = _sigmoid_array(base + margin)
            losses[t] = -float(np.mean(yf * np.log(prob) + (1.0 - yf) * np.log(1.0 - prob)))

        self.trees_ = tuple(trees)
        self.base_margin_ = base
        self.feature_names_ = tuple(feature_names)
        self.n_features_in_ = p
        self.train_losses_ = losses
        return self

    def _require_fitted(self):
        if not hasattr(self, "trees_"):
            raise ValueError("not fitted; call fit or load a model first")

    def _check_width(self, X: np.ndarray):
        if X.shape[-1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[-1]}")

    def predict_margin(self, X) -> np.ndarray | float:
        """base_margin + learning_rate * sum of tree outputs, tree order fixed."""
        self._require_fitted()
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            self._check_width(X)
            if not np.all(np.isfinite(X)):
                raise ValueError("row contains non-finite values")
            acc = 0.0
            for tree in self.trees_:
                acc += tree.predict_row(X)
            return self.base_margin_ + self.learning_rate * acc
        X = as_float_matrix(X, "X", n_cols=self.n_features_in_)
        acc = np.zeros(X.shape[0], dtype=np.float64)
        for tree in self.trees_:
            acc += tree.predict(X)
        return self.base_margin_ + self.learning_rate * acc

    def predict_proba(self, X) -> np.ndarray | float:
        """Probability of digit 1, strictly inside (0, 1)."""
        margin = self.predict_margin(X)
        if np.ndim(margin) == 0:
            return sigmoid(float(margin))
        return _sigmoid_array(margin)

    def predict(self, X) -> np.ndarray | int:
        """Predicted digit via p >= 0.5 -> 1."""
        proba = self.predict_proba(X)
        if np.ndim(proba) == 0:
            return int(proba >= 0.5)
        return (proba >= 0.5).astype(np.int64)

    def model_id(self) -> str:
        """Short content hash identifying the fitted model."""
        digest = hashlib.sha256(save_model(self).encode("utf-8")).hexdigest()
        return digest[:12]


def _tree_to_nested(tree: Tree, i: int = 0) -> dict:
    if tree.feature[i] < 0:
        return {"leaf": float(tree.value[i])}
    return {
        "feature": int(tree.feature[i]),
        "threshold": float(tree.threshold[i]),
        "left": _tree_to_nested(tree, int(tree.left[i])),
        "right": _tree_to_nested(tree, int(tree.right[i])),
    }


def _write_json(obj, out: list[str]):
    # hand-rolled writer so floats carry 17 significant digits
    if isinstance(obj, dict):
        out.append("{")
        for i, (key, val) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(json.dumps(key))
            out.append(":")
            _write_json(val, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, val in enumerate(obj):
            if i:
                out.append(",")
            _write_json(val, out)
        out.append("]")
    elif isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite number in model document: {obj}")
        out.append(format(float(obj), ".17g"))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def save_model(model: GradientBoostedTrees) -> str:
    """Serialize a fitted model to versioned JSON (17-significant-digit floats)."""
    model._require_fitted()
    cfg = model.config()
    doc = {
        "format_version": FORMAT_VERSION,
        "model": MODEL_KIND,
        "feature_names": list(model.feature_names_),
        "learning_rate": float(model.learning_rate),
        "base_margin": float(model.base_margin_),
        "config": {
            "n_estimators": cfg.n_estimators,
            "learning_rate": float(cfg.learning_rate),
            "max_depth": cfg.max_depth,
            "tree_algorithm": cfg.tree_algorithm,
            "reg_lambda": float(cfg.reg_lambda),
            "n_bins": cfg.n_bins,
            "min_child_weight": float(cfg.min_child_weight),
            "seed": cfg.seed,
        },
        "n_trees": len(model.trees_),
        "trees": [_tree_to_nested(tree) for tree in model.trees_],
    }
    out: list[str] = []
    _write_json(doc, out)
    return "".join(out) + "\n"


_TOP_KEYS = {
    "format_version", "model", "feature_names", "learning_rate",
    "base_margin", "config", "n_trees", "trees",
}
_CONFIG_KEYS = {
    "n_estimators", "learning_rate", "max_depth", "tree_algorithm",
    "reg_lambda", "n_bins", "min_child_weight", "seed",
}


def _want(doc: dict, key: str, kinds, position: str):
    if key not in doc:
        raise ModelFormatError(f"missing field {key!r}", position=position)
    val = doc[key]
    if not isinstance(val, kinds) or isinstance(val, bool):
        raise ModelFormatError(f"field {key!r} has wrong type", position=f"{position}.{key}")
    return val


def _nested_to_arrays(node, position: str, n_features: int, arrays):
    feature, threshold, left, right, value = arrays
    idx = len(feature)
    if not isinstance(node, dict):
        raise ModelFormatError("tree node must be an object", position=position)
    if "leaf" in node:
        if set(node) != {"leaf"}:
            raise ModelFormatError(f"unknown field in leaf: {sorted(set(node) - {'leaf'})}", position=position)
        weight = node["leaf"]
        if not isinstance(weight, (int, float)) or isinstance(weight, bool) or not math.isfinite(weight):
            raise ModelFormatError("leaf weight must be a finite number", position=f"{position}.leaf")
        feature.append(-1)
        threshold.append(math.nan)
        left.append(-1)
        right.append(-1)
        value.append(float(weight))
        return idx
    expected = {"feature", "threshold", "left", "right"}
    if set(node) != expected:
        extra = sorted(set(node) - expected) or sorted(expected - set(node))
        raise ModelFormatError(f"internal node fields mismatch: {extra}", position=position)
    f = node["feature"]
    if not isinstance(f, int) or isinstance(f, bool) or not 0 <= f < n_features:
        raise ModelFormatError(f"split feature out of range: {f!r}", position=f"{position}.feature")
    thr = node["threshold"]
    if not isinstance(thr, (int, float)) or isinstance(thr, bool) or not math.isfinite(thr):
        raise ModelFormatError("threshold must be a finite number", position=f"{position}.threshold")
    feature.append(f)
    threshold.append(float(thr))
    left.append(-1)
    right.append(-1)
    value.append(0.0)
    left_id = _nested_to_arrays(node["left"], f"{position}.left", n_features, arrays)
    right_id = _nested_to_arrays(node["right"], f"{position}.right", n_features, arrays)
    arrays[2][idx] = left_id
    arrays[3][idx] = right_id
    return idx


def load_model(data: str | bytes) -> GradientBoostedTrees:
    """Parse a model document, verifying version, structure, and field types."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as err:
            raise ModelFormatError(f"not UTF-8: {err}", position=err.start) from err
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as err:
        raise ModelFormatError(f"malformed JSON: {err.msg}", position=err.pos) from err
    if not isinstance(doc, dict):
        raise ModelFormatError("top level must be an object", position="$")

    version = _want(doc, "format_version", int, "$")
    if version != FORMAT_VERSION:
        raise ModelFormatError(
            f"unsupported format_version {version} (expected {FORMAT_VERSION})",
            position="$.format_version",
        )
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ModelFormatError(f"unknown field(s): {sorted(unknown)}", position="$")
    kind = _want(doc, "model", str, "$")
    if kind != MODEL_KIND:
        raise ModelFormatError(f"unsupported model kind {kind!r}", position="$.model")

    names = _want(doc, "feature_names", list, "$")
    if not names or not all(isinstance(s, str) for s in names):
        raise ModelFormatError("feature_names must be a non-empty list of strings", position="$.feature_names")
    lr = _want(doc, "learning_rate", (int, float), "$")
    base = _want(doc, "base_margin", (int, float), "$")
    cfg_doc = _want(doc, "config", dict, "$")
    if set(cfg_doc) != _CONFIG_KEYS:
        raise ModelFormatError(
            f"config fields mismatch: {sorted(set(cfg_doc) ^ _CONFIG_KEYS)}", position="$.config"
        )
    try:
        cfg = TrainConfig(**cfg_doc)
    except (TypeError, ValueError) as err:
        raise ModelFormatError(f"bad config: {err}", position="$.config") from err
    if cfg.learning_rate != lr:
        raise ModelFormatError("learning_rate disagrees with config echo", position="$.learning_rate")

    n_trees = _want(doc, "n_trees", int, "$")
    trees_doc = _want(doc, "trees", list, "$")
    if n_trees != len(trees_doc):
        raise ModelFormatError(
            f"n_trees says {n_trees} but trees holds {len(trees_doc)}", position="$.n_trees"
        )
    trees = []
    for t, node in enumerate(trees_doc):
        arrays = ([], [], [], [], [])
        _nested_to_arrays(node, f"$.trees[{t}]", len(names), arrays)
        trees.append(Tree(*arrays))

    model = GradientBoostedTrees.from_config(cfg)
    model.trees_ = tuple(trees)
    model.base_margin_ = float(base)
    model.feature_names_ = tuple(names)
    model.n_features_in_ = len(names)
    model.train_losses_ = np.empty(0, dtype=np.float64)
    return model
