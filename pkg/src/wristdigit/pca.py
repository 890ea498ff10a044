"""Principal component analysis on z-scored features.

The decomposition runs on the correlation-style covariance of the
standardized matrix via cyclic Jacobi rotations. Components carry a
deterministic sign (largest-magnitude entry positive) so repeated fits on
equal input are bit-comparable, and each component can be mapped back to
the single original feature it loads hardest on.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .features import FEATURE_NAMES
from .validation import ParamsMixin, as_float_matrix


class DegenerateFeatureWarning(UserWarning):
    """A feature column had zero variance; its scale was left at 1."""


def _jacobi_eigh(matrix: np.ndarray, tol: float = 1e-12, max_sweeps: int = 128):
    """Eigenvalues and eigenvectors of a symmetric matrix by cyclic Jacobi.

    Sweeps rotate away every off-diagonal pair until the largest
    off-diagonal magnitude drops below tol. Returns (values, vectors) in
    decreasing eigenvalue order, vectors as columns.
    """
    a = np.array(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"need a square matrix, got shape {a.shape}")
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return a.diagonal().copy(), v

    for _ in range(max_sweeps):
        upper = np.triu(a, 1)
        if np.max(np.abs(upper)) < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < tol:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # two-sided rotation in the (p, q) plane
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                v_p, v_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * v_p - s * v_q
                v[:, q] = s * v_p + c * v_q
    else:
        raise RuntimeError(f"eigendecomposition did not converge in {max_sweeps} sweeps")

    values = a.diagonal().copy()
    order = np.argsort(-values, kind="stable")
    return values[order], v[:, order]


@dataclass(frozen=True)
class LoadingEntry:
    """Strongest original feature behind one principal component."""

    component: int
    feature: str
    loading: float


class PrincipalComponents(ParamsMixin):
    """PCA on per-column z-scored data.

    Fitted attributes: means_, stds_, components_ (rows are unit-norm
    principal axes, decreasing eigenvalue order), eigenvalues_,
    explained_variance_ratio_, degenerate_columns_.
    """

    _param_names = ("n_components",)

    def __init__(self, n_components: int | None = None):
        if n_components is not None and n_components < 1:
            raise ValueError(f"n_components must be >= 1 or None, got {n_components}")
        self.n_components = n_components

    def fit(self, X, y=None) -> "PrincipalComponents":
        X = as_float_matrix(X, "X")
        n, p = X.shape
        if n < 2:
            raise ValueError(f"need at least 2 rows to fit, got {n}")
        if self.n_components is not None and self.n_components > p:
            raise ValueError(f"n_components={self.n_components} exceeds {p} columns")

        means = X.mean(axis=0)
        stds = X.std(axis=0, ddof=1)
        degenerate = np.nonzero(stds == 0.0)[0]
        if degenerate.size:
            stds = stds.copy()
            stds[degenerate] = 1.0
            warnings.warn(
                f"zero-variance column(s) {degenerate.tolist()} left unscaled",
                DegenerateFeatureWarning,
                stacklevel=2,
            )
        Z = (X - means) / stds
        cov = Z.T @ Z / (n - 1)

        values, vectors = _jacobi_eigh(cov)
        values = np.maximum(values, 0.0)  # rotation noise can leave tiny negatives
        components = vectors.T
        # sign convention: the entry of largest magnitude is positive
        anchor = np.argmax(np.abs(components), axis=1)
        signs = np.sign(components[np.arange(p), anchor])
        signs[signs == 0] = 1.0
        components = components * signs[:, None]

        k = p if self.n_components is None else self.n_components
        total = values.sum()
        self.means_ = means
        self.stds_ = stds
        self.degenerate_columns_ = degenerate
        self.eigenvalues_ = values[:k]
        self.components_ = components[:k]
        self.explained_variance_ratio_ = (
            values[:k] / total if total > 0 else np.zeros(k)
        )
        return self

    def _require_fitted(self):
        if not hasattr(self, "components_"):
            raise ValueError("not fitted; call fit first")

    def transform(self, X) -> np.ndarray:
        """Project rows onto the principal axes: ((X - means)/stds) @ components.T."""
        self._require_fitted()
        X = as_float_matrix(X, "X", n_cols=self.means_.shape[0])
        return (X - self.means_) / self.stds_ @ self.components_.T

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X, y).transform(X)

    def inverse_transform(self, projected) -> np.ndarray:
        """Map projections back to the original feature space."""
        self._require_fitted()
        Z = as_float_matrix(projected, "projected", n_cols=self.components_.shape[0])
        return Z @ self.components_ * self.stds_ + self.means_

    def loading_report(self, k: int = 3, names: tuple[str, ...] | None = None) -> list[LoadingEntry]:
        """For each of the first k components, the feature with max |loading|.

        Ties resolve to the earliest feature in canonical order. Default
        names are the canonical 31 when the width matches, else f0..fN.
        """
        self._require_fitted()
        p = self.components_.shape[1]
        if k < 0 or k > self.components_.shape[0]:
            raise ValueError(f"k must be in [0, {self.components_.shape[0]}], got {k}")
        if names is None:
            names = FEATURE_NAMES if p == len(FEATURE_NAMES) else tuple(f"f{i}" for i in range(p))
        elif len(names) != p:
            raise ValueError(f"expected {p} names, got {len(names)}")
        report = []
        for i in range(k):
            j = int(np.argmax(np.abs(self.components_[i])))
            report.append(LoadingEntry(component=i, feature=names[j], loading=float(self.components_[i, j])))
        return report
