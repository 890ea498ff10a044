"""Input-validation helpers and the parameter-protocol mixin.

The estimators in this package follow the familiar fit/transform/predict
protocol, including get_params/set_params, so they slot into pipelines and
search tooling that speak that interface. ParamsMixin provides the
parameter half without pulling in any heavyweight dependency.
"""

import numpy as np


class ParamsMixin:
    """get_params/set_params over a class-declared tuple of names.

    Subclasses list their constructor parameters in ``_param_names``; the
    attributes must be stored under the same names.
    """

    _param_names: tuple[str, ...] = ()

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names}

    def set_params(self, **params):
        for name, value in params.items():
            if name not in self._param_names:
                raise ValueError(
                    f"unknown parameter {name!r} for {type(self).__name__}; "
                    f"valid parameters: {sorted(self._param_names)}"
                )
            setattr(self, name, value)
        return self

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"


def as_float_matrix(X, name: str = "X", n_cols: int | None = None) -> np.ndarray:
    """Coerce to a 2-D float64 array, rejecting non-finite values."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if n_cols is not None and arr.shape[1] != n_cols:
        raise ValueError(f"{name} must have {n_cols} columns, got {arr.shape[1]}")
    if arr.size and not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_float_vector(x, name: str = "x", length: int | None = None) -> np.ndarray:
    """Coerce to a 1-D float64 array, rejecting non-finite values."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if length is not None and arr.shape[0] != length:
        raise ValueError(f"{name} must have length {length}, got {arr.shape[0]}")
    if arr.size and not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_binary_labels(y, n_rows: int | None = None, require_both: bool = False) -> np.ndarray:
    """Coerce labels to int64 in {0, 1}; optionally demand both classes."""
    arr = np.asarray(y)
    if arr.ndim != 1:
        raise ValueError(f"labels must be 1-dimensional, got shape {arr.shape}")
    if n_rows is not None and arr.shape[0] != n_rows:
        raise ValueError(f"labels must have length {n_rows}, got {arr.shape[0]}")
    as_int = arr.astype(np.int64)
    if arr.size and not np.array_equal(as_int, np.asarray(arr, dtype=np.float64)):
        raise ValueError("labels must be integers")
    bad = set(np.unique(as_int)) - {0, 1}
    if bad:
        raise ValueError(f"labels must be 0 or 1, got extra values {sorted(bad)}")
    if require_both and len(np.unique(as_int)) < 2:
        raise ValueError("both classes (0 and 1) must be present")
    return as_int


def check_seed(seed: int, name: str = "seed") -> int:
    """Validate a 64-bit unsigned seed."""
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise ValueError(f"{name} must be an integer, got {type(seed).__name__}")
    if not 0 <= int(seed) < 2**64:
        raise ValueError(f"{name} must be in [0, 2**64), got {seed}")
    return int(seed)
