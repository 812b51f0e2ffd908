"""Protocol definitions for zenerwave.

Field assembly in ``simulate`` goes through these interfaces, so a boundary
signal kind only has to say how one x column of the response is computed.
"""

from __future__ import annotations

from abc import abstractmethod
from typing import Protocol, runtime_checkable

from numpy.typing import NDArray

from .inversion import Impulse


@runtime_checkable
class ColumnResponse(Protocol):
    """Displacement u(x, ·) at one position for a fixed boundary signal."""

    @property
    @abstractmethod
    def kind(self) -> str:
        """Signal kind identifier ('dirac', 'heaviside' or 'sampled')."""
        ...

    @abstractmethod
    def column(self, x: float, ts: NDArray) -> NDArray:
        """Regular part of u(x, t) for every t in ``ts`` (t = 0 allowed).

        Args:
            x: Position, x ≥ 0.
            ts: Strictly increasing times starting at or after 0.

        Returns:
            Array of the same length as ``ts``.
        """
        ...

    @abstractmethod
    def impulses(self, x: float, t_max: float) -> tuple[Impulse, ...]:
        """δ content of u(x, ·) on [0, t_max], empty when there is none."""
        ...
