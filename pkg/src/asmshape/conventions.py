"""Shared constants: the three solvable weight cases and contour orientations."""
from __future__ import annotations

from enum import Enum
from fractions import Fraction

__all__ = ["Case", "C0_ORIENTATION", "C1_ORIENTATION", "efp_prefactor_sign"]


class Case(Enum):
    """Solvable points at ``t = 1``, tagged by the enumeration weight q.

    ``delta = 1 - q/2``: q=1 (plain ASM count) is delta=1/2, q=2 (free
    fermions, domino tilings) is delta=0, q=3 is delta=-1/2.
    """

    Q1 = "q1"
    Q2 = "q2"
    Q3 = "q3"

    @property
    def q(self) -> Fraction:
        return Fraction(int(self.value[1]))

    @property
    def delta(self) -> Fraction:
        return 1 - self.q / 2

    @classmethod
    def parse(cls, value) -> "Case":
        """Accept a Case, a tag ("q1"), a q value (1, 2, 3) or a delta ("1/2", "0", "-1/2")."""
        if isinstance(value, Case):
            return value
        if isinstance(value, str):
            v = value.strip().lower()
            for c in cls:
                if v == c.value:
                    return c
            try:
                value = Fraction(v)
            except ValueError:
                raise ValueError(f"unknown case {value!r}") from None
            for c in cls:
                if value == c.delta:
                    return c
            raise ValueError(f"unsupported delta {value}")
        f = Fraction(value)
        for c in cls:
            if f == c.q:
                return c
        raise ValueError(f"unsupported case {value!r}; use q in {{1, 2, 3}}")

    @classmethod
    def from_params(cls, params) -> "Case":
        """Case matching ``ModelParams``; only ``t = 1`` with delta in {1/2, 0, -1/2}."""
        if params.t != 1:
            raise ValueError(f"only t = 1 is solvable here, got t={params.t}")
        for c in cls:
            if params.delta == c.delta:
                return c
        raise ValueError(f"no closed-form generating function for delta={params.delta}")


# Residue conventions. A contour integral (1/2 pi i) \oint f dz equals
# orientation * (sum of enclosed residues).
#   C_0   : anticlockwise around z = 0 (emptiness probability)      -> +1
#   C_1^- : clockwise around z = 1 (companion unit integral)        -> -1
C0_ORIENTATION = 1
C1_ORIENTATION = -1


def efp_prefactor_sign(s: int) -> int:
    """The ``(-1)**s`` in front of the s-fold emptiness integral."""
    return -1 if s % 2 else 1
