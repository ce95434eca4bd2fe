"""scikit-learn compatible wrappers.

State builders map a parameter table ``(n_samples, 2)`` to a stack of
density matrices ``(n_samples, 4, 4)``; :class:`CorrelationQuantifier`
maps such a stack to a feature table. Both are stateless, so ``fit`` only
validates its input, and they chain in a :class:`sklearn.pipeline.Pipeline`::

    pipe = make_pipeline(AnisotropicXYStates(), CorrelationQuantifier())
    features = pipe.fit_transform([[0.5, 1.0], [0.0, 0.1]])
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array

from .errors import DimensionMismatch, InvalidInput
from .models import AnisotropicXYParams, IsotropicFieldParams, xy_anisotropic_state, xy_isotropic_field_state
from .quantifiers import Convention, correlation_report
from .spectral import DensityMatrix, make_density

MEASURES = ("lqfi", "lqu", "lambda_max_m", "xi_max_w")


def check_parameter_table(X, n_columns: int = 2) -> np.ndarray:
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if X.shape[1] != n_columns:
        raise DimensionMismatch(f"expected {n_columns} parameter columns, got {X.shape[1]}")
    return X


def check_density_batch(X) -> list[DensityMatrix]:
    """Accept one matrix, a stack ``(n, D, D)``, or a sequence of :class:`DensityMatrix`.

    Returns a list of validated density matrices (cached spectra are reused
    when ``DensityMatrix`` objects are passed in).
    """
    if isinstance(X, DensityMatrix):
        return [X]
    if isinstance(X, (list, tuple)) and X and all(isinstance(x, DensityMatrix) for x in X):
        return list(X)
    arr = np.asarray(X)
    if arr.dtype == object:
        items = list(arr.reshape(-1))
        if all(isinstance(x, DensityMatrix) for x in items):
            return items
        raise InvalidInput("object arrays must contain DensityMatrix instances")
    arr = np.asarray(arr, dtype=complex)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise DimensionMismatch(f"expected a stack of square matrices, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise InvalidInput("empty batch")
    return [make_density(a) for a in arr]


class _StatelessTransformer(TransformerMixin, BaseEstimator):
    def fit(self, X, y=None):
        self._validate(X)
        return self

    def __sklearn_is_fitted__(self):
        return True


class _ThermalStates(_StatelessTransformer):
    def _validate(self, X):
        return check_parameter_table(X)

    def _build(self, row) -> DensityMatrix:
        raise NotImplementedError

    def transform(self, X):
        states = [self._build(row) for row in self._validate(X)]
        if self.output == "density":
            out = np.empty(len(states), dtype=object)
            out[:] = states
            return out
        if self.output != "array":
            raise InvalidInput(f"output must be 'array' or 'density', got {self.output!r}")
        return np.array([s.matrix for s in states])


class AnisotropicXYStates(_ThermalStates):
    """Thermal states of the anisotropic XY pair from rows ``[gamma, temperature]``.

    Parameters
    ----------
    output : {"array", "density"}
        ``"array"`` returns a complex ``(n, 4, 4)`` stack; ``"density"`` an
        object array of :class:`DensityMatrix` that keeps the exact Gibbs
        populations.
    """

    def __init__(self, output: str = "array"):
        self.output = output

    def _build(self, row):
        return xy_anisotropic_state(AnisotropicXYParams(float(row[0]), float(row[1])))


class IsotropicFieldStates(_ThermalStates):
    """Thermal states of the isotropic XY pair in a field from rows ``[field, temperature]``."""

    def __init__(self, coupling: float = 1.0, output: str = "array"):
        self.coupling = coupling
        self.output = output

    def _build(self, row):
        return xy_isotropic_field_state(IsotropicFieldParams(float(row[0]), float(row[1]), self.coupling))


class CorrelationQuantifier(_StatelessTransformer):
    """Map density matrices to correlation features.

    Parameters
    ----------
    measures : sequence of str
        Columns to emit, any of ``lqfi``, ``lqu``, ``lambda_max_m``, ``xi_max_w``.
    convention : {"all-pairs", "paper"}
        Sum convention for the Fisher correlation matrix.
    """

    def __init__(self, measures=("lqfi", "lqu"), convention: str = "all-pairs"):
        self.measures = measures
        self.convention = convention

    def _check_params(self):
        measures = tuple(self.measures)
        bad = [m for m in measures if m not in MEASURES]
        if bad or not measures:
            raise InvalidInput(f"measures must be a non-empty subset of {MEASURES}, got {measures}")
        return measures, Convention.parse(self.convention)

    def _validate(self, X):
        self._check_params()
        return check_density_batch(X)

    def transform(self, X):
        measures, convention = self._check_params()
        rows = []
        for rho in check_density_batch(X):
            rep = correlation_report(rho, convention)
            rows.append([getattr(rep, m) for m in measures])
        return np.array(rows, dtype=float)

    def get_feature_names_out(self, input_features=None):
        return np.array(self._check_params()[0], dtype=object)
