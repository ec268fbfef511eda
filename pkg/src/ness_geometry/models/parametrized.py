"""Families of quadratic Lindbladians over named control parameters."""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from ness_geometry.errors import StructuralInputError
from ness_geometry.lindblad.shape import (
    QuadraticLindbladian,
    StructureDerivative,
    StructureMatrices,
    build_structure,
)

__all__ = ["DERIVATIVE_STEP", "ParametrizedModel"]

logger = logging.getLogger(__name__)

DERIVATIVE_STEP = 1e-3


@dataclass(frozen=True)
class ParametrizedModel:
    """A map from a parameter point to a `QuadraticLindbladian`.

    Every builder in this package is at most quadratic in each axis, so the central
    differences of `structure_derivatives` are exact up to rounding.

    Attributes
    ----------
    name : str
        Model family name.
    axes : Tuple[str, ...]
        Parameter axes available for differentiation.
    builder : Callable[[Mapping[str, float]], QuadraticLindbladian]
        Builds the model at a complete parameter point.
    defaults : Mapping[str, float]
        Base point; `build` fills missing entries from it.
    """

    name: str
    axes: Tuple[str, ...]
    builder: Callable[[Mapping[str, float]], QuadraticLindbladian] = field(repr=False)
    defaults: Mapping[str, float] = field(default_factory=dict)

    def point(self, point: Optional[Mapping[str, float]] = None) -> Dict[str, float]:
        """Complete a partial parameter point with the defaults."""
        full = dict(self.defaults)
        full.update(point or {})
        return full

    def build(
        self, point: Optional[Mapping[str, float]] = None
    ) -> QuadraticLindbladian:
        """Build the model at `point`."""
        return self.builder(self.point(point))

    def structure(
        self, point: Optional[Mapping[str, float]] = None
    ) -> StructureMatrices:
        """Structure matrices at `point`."""
        return build_structure(self.build(point))

    def structure_derivatives(
        self,
        point: Optional[Mapping[str, float]] = None,
        axes: Optional[Sequence[str]] = None,
        step: float = DERIVATIVE_STEP,
    ) -> List[StructureDerivative]:
        """Derivatives of X and Y along each axis by central differences.

        Parameters
        ----------
        point : Mapping[str, float], optional
            Parameter point; defaults fill the rest.
        axes : Sequence[str], optional
            Axes to differentiate along. Defaults to all axes.
        step : float
            Half-width of the central difference.

        Returns
        -------
        List[StructureDerivative]
            One entry per axis, in the requested order.

        Raises
        ------
        StructuralInputError
            If an axis is unknown.
        """
        base = self.point(point)
        axes = self.axes if axes is None else tuple(axes)
        out = []
        for axis in axes:
            if axis not in self.axes:
                raise StructuralInputError(
                    f"Unknown axis '{axis}' for model {self.name}; "
                    f"known axes: {self.axes}."
                )
            plus = build_structure(self.builder({**base, axis: base[axis] + step}))
            minus = build_structure(self.builder({**base, axis: base[axis] - step}))
            out.append(
                StructureDerivative(
                    axis=axis,
                    dX=(plus.X - minus.X) / (2.0 * step),
                    dY=(plus.Y - minus.Y) / (2.0 * step),
                )
            )
        logger.debug("Structure derivatives of %s along %s", self.name, axes)
        return out
