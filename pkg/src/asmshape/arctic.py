"""Arctic curves of q-enumerated ASMs from the reduced saddle-point equation.

Scaled coordinates: ``x = (n - r)/n`` and ``y = s/n``; the computed branch is the
top-left quarter of the limit shape, running from ``(1/2, 0)`` at ``omega = 1``
to ``(0, 1/2)`` as ``omega -> oo``. At ``t = 1`` the reduced equation is

    g(z; x, y) = y/(z-1) - (1-x)/z - y/(z + 1 - 2 delta) + L'(z) = 0

which is affine in ``(x, y)``; asking for a double root at ``z = omega``
is two linear conditions, solved directly.

Note on q = 2: the often-quoted form ``y/(z-1) - x/z + (1-y)/(z+1) = 0``
differs from the one above (``-x/z`` against ``-(1-x)/z``). Both give the same
point ``(x, y)`` on the circle, but that form has its double root at
``1/omega``. This module always uses the form above, whose double root sits at
``omega``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np
from scipy import integrate, optimize

from .conventions import Case
from .genfun import LogDensityLimit
from .polys import RationalPoly

__all__ = [
    "ScaledCoords", "ReducedSpe", "ArcticCurve", "QuadratureError",
    "double_root_solve", "parametric_curve", "implicit_residual",
    "temperate_area", "curve_sample", "crossing_x", "full_curve",
    "curve_csv", "area_report",
]


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class ScaledCoords(NamedTuple):
    x: float
    y: float


TOP = ScaledCoords(Fraction(1, 2), Fraction(0))
LEFT = ScaledCoords(Fraction(0), Fraction(1, 2))


def _is_inf(omega) -> bool:
    return isinstance(omega, float) and math.isinf(omega)


def _check_omega(omega):
    if not (omega >= 1):
        raise ValueError(f"omega must lie in [1, oo), got {omega}")


@dataclass(frozen=True)
class ReducedSpe:
    """Left-hand side of the reduced saddle-point equation for one case (t = 1)."""

    case: Case

    @property
    def _shift(self) -> Fraction:
        return 1 - 2 * self.case.delta

    def affine_coefficients(self, z) -> Tuple[tuple, tuple]:
        """``(c0, cx, cy)`` with ``g = c0 + cx x + cy y``, and the same for dg/dz."""
        ld = LogDensityLimit(self.case)
        sh = self._shift
        g = (ld.derivative(z) - 1 / z, 1 / z, 1 / (z - 1) - 1 / (z + sh))
        dg = (ld.second_derivative(z) + 1 / z**2, -1 / z**2,
              -1 / (z - 1) ** 2 + 1 / (z + sh) ** 2)
        return g, dg

    def __call__(self, z, x, y):
        (c0, cx, cy), _ = self.affine_coefficients(z)
        return c0 + cx * x + cy * y

    def derivative(self, z, x, y):
        _, (d0, dx, dy) = self.affine_coefficients(z)
        return d0 + dx * x + dy * y


def double_root_solve(case, omega) -> ScaledCoords:
    """Point of the limit shape where the reduced equation has a double root at ``omega``.

    Exact for rational ``omega`` when q = 2 or 3. ``omega = 1`` and
    ``omega = inf`` return the contact points.
    """
    case = Case.parse(case)
    _check_omega(omega)
    if omega == 1:
        return TOP
    if _is_inf(omega):
        return LEFT
    if case is Case.Q1 and isinstance(omega, Rational):
        omega = float(omega)
    (c0, cx, cy), (d0, dx, dy) = ReducedSpe(case).affine_coefficients(omega)
    det = cx * dy - cy * dx
    if det == 0:
        raise ZeroDivisionError(f"degenerate double-root system at omega={omega}")
    x = (-c0 * dy + cy * d0) / det
    y = (-cx * d0 + c0 * dx) / det
    return ScaledCoords(x, y)


# closed-form parametrisations (numerator, denominator) for the rational cases
_P = RationalPoly
_CLOSED = {
    Case.Q2: ((_P([1]), _P([1, 0, 1])),
              (_P([1, -2, 1]), _P([2, 0, 2]))),
    Case.Q3: ((_P([2, 12, 19, 14, 7]),
               _P([2, 0, 1]) * _P([1, 2]) ** 2 * _P([1, 1]) ** 2),
              (_P([1, -2, 1]) * _P([6, 16, 19, 16, 6]),
               _P([2, 0, 1]) * _P([1, 2]) ** 2 * _P([1, 1]) ** 2 * 3)),
}


def parametric_curve(case, omega) -> ScaledCoords:
    """The closed-form parametrisation of the limit shape."""
    case = Case.parse(case)
    _check_omega(omega)
    if _is_inf(omega):
        return LEFT
    if case is Case.Q1:
        w = float(omega)
        S = math.sqrt(w * w - w + 1.0)
        return ScaledCoords(1.0 - (2.0 * w - 1.0) / (2.0 * S), 1.0 - (w + 1.0) / (2.0 * S))
    (xn, xd), (yn, yd) = _CLOSED[case]
    return ScaledCoords(xn(omega) / xd(omega), yn(omega) / yd(omega))


def _dx_domega(case: Case, omega: float) -> float:
    if case is Case.Q1:
        S = math.sqrt(omega * omega - omega + 1.0)
        return -3.0 / (4.0 * S**3)
    num, den = _CLOSED[case][0]
    return (num.derivative()(omega) * den(omega) - num(omega) * den.derivative()(omega)) / den(omega) ** 2


_SEXTIC = {
    (6, 0): 324, (5, 1): 1620, (4, 2): 3429, (3, 3): 4254, (2, 4): 3429, (1, 5): 1620, (0, 6): 324,
    (5, 0): -972, (4, 1): -1458, (3, 2): -2970, (2, 3): -2970, (1, 4): -1458, (0, 5): -972,
    (4, 0): -6147, (3, 1): -9150, (2, 2): -17462, (1, 3): -9150, (0, 4): -6147,
    (3, 0): 13914, (2, 1): 24086, (1, 2): 24086, (0, 3): 13914,
    (2, 0): -11511, (1, 1): -17258, (0, 2): -11511,
    (1, 0): 4392, (0, 1): 4392, (0, 0): -648,
}


def implicit_residual(case, p) -> float:
    """Left minus right side of the implicit limit-shape equation at ``p = (x, y)``.

    Exact on rational input.
    """
    case = Case.parse(case)
    x, y = p
    if case is Case.Q1:
        return 4 * x * (1 - x) + 4 * y * (1 - y) + 4 * x * y - 1
    if case is Case.Q2:
        return 4 * x * (1 - x) + 4 * y * (1 - y) - 1
    return sum(c * x**i * y**j for (i, j), c in _SEXTIC.items())


def _omega_of_theta(theta: float) -> float:
    # omega = tan(theta) on [pi/4, pi/2]; clamp the rounding of tan(pi/4) below 1
    return math.inf if theta >= math.pi / 2 else max(1.0, math.tan(theta))


def temperate_area(case, tol: float = 1e-10) -> float:
    """Area of the disordered region inside the full limit shape.

    The frozen top-left corner is bounded by the axes and the curve, so its
    area is ``int_1^oo y(omega) (-dx/domega) domega``; the four corners are
    congruent by the symmetries of the square.
    """
    case = Case.parse(case)

    def integrand(w):
        return float(parametric_curve(case, w).y) * -_dx_domega(case, w)

    corner, err = integrate.quad(integrand, 1.0, math.inf, epsabs=tol, epsrel=tol, limit=200)
    if not err <= tol:
        raise QuadratureError(f"corner area quadrature reached only {err:.3g} (wanted {tol:.3g})")
    return 1.0 - 4.0 * corner


def crossing_x(case, y: float) -> float:
    """x-coordinate of the curve at height ``y`` in [0, 1/2]."""
    case = Case.parse(case)
    if not 0 <= y <= 0.5:
        raise ValueError(f"y must lie in [0, 1/2], got {y}")
    if y == 0:
        return 0.5
    if y == 0.5:
        return 0.0
    theta = optimize.brentq(
        lambda th: float(parametric_curve(case, _omega_of_theta(th)).y) - y,
        math.pi / 4, math.pi / 2, xtol=1e-15)
    return float(parametric_curve(case, _omega_of_theta(theta)).x)


def curve_sample(case, m: int, *, grid: int = 20001) -> List[ScaledCoords]:
    """``m`` points on the quarter curve, roughly equally spaced in arc length.

    Both contact points are included exactly. Arc length is measured on a
    dense polyline in ``theta = arctan(omega)``; each sample is then evaluated
    on the curve itself.
    """
    case = Case.parse(case)
    if m < 2:
        raise ValueError("need at least two samples")
    thetas = np.linspace(math.pi / 4, math.pi / 2, grid)
    pts = np.array([[float(c) for c in parametric_curve(case, _omega_of_theta(t))] for t in thetas])
    seg = np.hypot(*np.diff(pts, axis=0).T)
    arc = np.concatenate([[0.0], np.cumsum(seg)])
    targets = np.linspace(0.0, arc[-1], m)
    out = [TOP]
    for tgt in targets[1:-1]:
        th = float(np.interp(tgt, arc, thetas))
        out.append(parametric_curve(case, _omega_of_theta(th)))
    out.append(LEFT)
    return [ScaledCoords(float(p.x), float(p.y)) for p in out]


def full_curve(quarter: Sequence[ScaledCoords]) -> List[List[ScaledCoords]]:
    """The four arcs of the full limit shape from the top-left quarter.

    Images under ``(x, y) -> (1 - y, x)`` rotated around the centre, which
    composes the reflections ``(x,y) -> (y,x)`` and ``(x,y) -> (1-x,1-y)``.
    """
    arcs = [list(quarter)]
    for _ in range(3):
        arcs.append([ScaledCoords(1 - p.y, p.x) for p in arcs[-1]])
    return arcs


@dataclass(frozen=True)
class ArcticCurve:
    """Convenience bundle of one case's parametrisation and implicit form."""

    case: Case

    def __call__(self, omega) -> ScaledCoords:
        return parametric_curve(self.case, omega)

    def residual(self, x, y) -> float:
        return implicit_residual(self.case, (x, y))

    def sample(self, m: int) -> List[ScaledCoords]:
        return curve_sample(self.case, m)

    def area(self) -> float:
        return temperate_area(self.case)


def curve_csv(case, m: int) -> str:
    """CSV with columns ``omega, x, y, residual`` (omega = inf at the left contact)."""
    case = Case.parse(case)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["omega", "x", "y", "residual"])
    for p in curve_sample(case, m):
        omega = _omega_from_point(case, p)
        w.writerow([repr(omega), repr(p.x), repr(p.y), repr(float(implicit_residual(case, p)))])
    return buf.getvalue()


def _omega_from_point(case: Case, p: ScaledCoords) -> float:
    if p.x == 0:
        return math.inf
    if p.y == 0:
        return 1.0
    th = optimize.brentq(lambda t: float(parametric_curve(case, _omega_of_theta(t)).y) - p.y,
                         math.pi / 4, math.pi / 2, xtol=1e-15)
    return _omega_of_theta(th)


def area_report(case, tol: float = 1e-10) -> str:
    case = Case.parse(case)
    return json.dumps({"case": case.value, "area": temperate_area(case, tol), "tol": tol})
