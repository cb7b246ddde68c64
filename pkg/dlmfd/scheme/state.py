"""
State and energy records of the time stepping scheme.
"""

from dataclasses import dataclass
from typing import NamedTuple

from ..fem.space import FEFunction


@dataclass(frozen=True, eq=False)
class SimState:
    """
    Fields of the scheme at time step `n`, including the solid map of the
    previous step for the discrete solid velocity.
    """

    u: FEFunction
    p: FEFunction
    x: FEFunction
    x_prev: FEFunction
    lam: FEFunction
    t: float
    n: int


class EnergyBreakdown(NamedTuple):
    """
    Components of the discrete energy of a state, with the viscous
    dissipation of the step that produced it.
    """

    kinetic: float
    solid_kinetic: float
    elastic: float
    dissipation: float

    @property
    def total(self) -> float:
        """
        Retrieve the stored energy, which excludes the dissipation.
        """

        return self.kinetic + self.solid_kinetic + self.elastic
