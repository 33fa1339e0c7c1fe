"""Scikit-learn style transformer wrapping the toolpath pipeline."""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin

from .geometry import PolygonSet
from .pipeline import GenerateParams, generate_toolpaths


class ToolpathGenerator(BaseEstimator, TransformerMixin):
    """Stateless transformer: layer outlines in, extrusion toolpaths out.

    Args:
        scheme: beading scheme name.
        w_star: preferred bead width (mm).
        alpha_max: limit bisector angle (degrees).
        d_discretization: max discretized edge piece length (mm).
        n_weight: inward-distribution weight N.
        c: bead count for the constant scheme.
        widening: (w_min, r_min) for the widening meta-scheme, or None.
        shell: max bead count M for the shell meta-scheme, or None.
        retreat: retreat ratio at 3-way intersections, or None for default.
    """

    def __init__(self, scheme="inward", w_star=0.4, alpha_max=135.0,
                 d_discretization=0.2, n_weight=2.0, c=4, widening=None,
                 shell=None, retreat=None):
        self.scheme = scheme
        self.w_star = w_star
        self.alpha_max = alpha_max
        self.d_discretization = d_discretization
        self.n_weight = n_weight
        self.c = c
        self.widening = widening
        self.shell = shell
        self.retreat = retreat

    def fit(self, X, y=None):
        """No-op; the pipeline has no fitted state."""
        return self

    def transform(self, X):
        """Generate toolpaths for each outline in X.

        Args:
            X: iterable of PolygonSet, or of mm ring lists.
        """
        params = GenerateParams(
            scheme=self.scheme, w_star=self.w_star, alpha_max=self.alpha_max,
            d_discretization=self.d_discretization, c=self.c,
            n_weight=self.n_weight, widening=self.widening, shell=self.shell,
            retreat=self.retreat)
        out = []
        for outline in X:
            if not isinstance(outline, PolygonSet):
                outline = PolygonSet.from_mm(outline)
            out.append(generate_toolpaths(outline, self.scheme, params))
        return out
