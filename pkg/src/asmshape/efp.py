"""Emptiness formation probability from its s-fold contour integral, by exact residues.

For ``t = 1`` and ``alpha = t^2 - 2 t delta``::

    F(r, s) = (-1)^s / (2 pi i)^s  \\oint_{C_0} ... \\oint_{C_0}
              prod_j  (alpha z_j + 1)^(s-j) / (z_j^r (z_j - 1)^(s-j+1))
              prod_{j<k} (z_j - z_k) / (t^2 z_j z_k - 2 t delta z_j + 1)
              h_{n,s}(z_1, ..., z_s)  dz_1 ... dz_s

Around the origin every factor other than ``z_j^-r`` is analytic, and the
reciprocal factors are unit power series, so the integral is the coefficient
of ``prod z_j^(r-1)`` in one truncated multivariate series.

The companion integral with clockwise contours around ``z = 1`` equals one.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .conventions import C0_ORIENTATION, C1_ORIENTATION, Case, efp_prefactor_sign
from .genfun import h_multi, h_poly
from .polys import MultiPoly, RationalPoly, TruncatedSeries, binomial_series
from .sixvertex import ModelParams

__all__ = [
    "EfpQuery", "UTransform", "efp_residue", "efp_profile",
    "unit_integral_check", "unit_integral_series", "efp_record", "profile_csv",
]


@dataclass(frozen=True)
class EfpQuery:
    n: int
    r: int
    s: int
    params: ModelParams

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not (1 <= self.r <= self.n and 1 <= self.s <= self.n):
            raise IndexError(f"need 1 <= r, s <= n={self.n}, got r={self.r}, s={self.s}")

    @classmethod
    def from_q(cls, n: int, r: int, s: int, q) -> "EfpQuery":
        return cls(n, r, s, ModelParams.from_q(q))

    @property
    def case(self) -> Case:
        return Case.from_params(self.params)


@dataclass(frozen=True)
class UTransform:
    """``u(z) = -(z - 1) / ((t^2 - 2 t delta) z + 1)``; u(1) = 0, u(0) = 1."""

    params: ModelParams

    def __call__(self, z):
        t, d = self.params.t, self.params.delta
        return -(z - 1) / ((t * t - 2 * t * d) * z + 1)


def _alpha(p: ModelParams) -> Fraction:
    return p.t * p.t - 2 * p.t * p.delta


def _cross_parts(params: ModelParams, s: int, j: int, k: int):
    """Numerator ``z_j - z_k`` and denominator ``t^2 z_j z_k - 2 t delta z_j + 1``."""
    t, d = params.t, params.delta
    zj, zk = MultiPoly.variable(j, s), MultiPoly.variable(k, s)
    num = zj - zk
    den = zj * zk * (t * t) + zj * (-2 * t * d) + MultiPoly.one(s)
    return num, den


def _integrand_factors(query: EfpQuery, order: Sequence[int]):
    """Analytic part of the integrand near the origin, as (variables, series) pairs."""
    s, p = query.s, query.params
    alpha = _alpha(p)
    factors = []
    for j in range(s):
        up = s - 1 - j      # power of (alpha z + 1)
        pole = s - j        # power of (z - 1) in the denominator
        # (z - 1)^-pole = (-1)^pole (1 - z)^-pole
        poly = RationalPoly([1, alpha]) ** up * binomial_series(pole, order[j]).scale((-1) ** pole)
        factors.append(((j,), TruncatedSeries.from_univariate(poly, j, order)))
    for j in range(s):
        for k in range(j + 1, s):
            num, den = _cross_parts(p, s, j, k)
            den_series = TruncatedSeries.from_poly(den, order)
            name = f"1/(t^2 z{j} z{k} - 2 t delta z{j} + 1)"
            if den_series.constant_term() != 1:
                raise ArithmeticError(f"{name} is not a unit series at the origin")
            factors.append(((j, k), TruncatedSeries.from_poly(num, order) * den_series.inverse(name)))
    return factors


def efp_residue(query: EfpQuery, *, variable_order: Optional[Sequence[int]] = None,
                orientation: int = C0_ORIENTATION) -> Fraction:
    """Exact F(r, s) by coefficient extraction at the origin.

    ``variable_order`` changes the order in which per-variable factors are
    multiplied (the result must not depend on it); ``orientation`` is the
    sign attached to each contour.
    """
    n, r, s = query.n, query.r, query.s
    case = query.case
    order = (r - 1,) * s
    factors = _integrand_factors(query, order)
    rank = {v: i for i, v in enumerate(variable_order if variable_order is not None else range(s))}
    if sorted(rank) != list(range(s)):
        raise ValueError(f"variable_order must be a permutation of range({s})")
    factors.sort(key=lambda f: max(rank[v] for v in f[0]))
    acc = TruncatedSeries.one(order)
    for _, series in factors:
        acc = acc * series
    coeff = acc.dot(h_multi(n, s, case), order)
    return efp_prefactor_sign(s) * orientation**s * coeff


def efp_profile(n: int, s: int, params: ModelParams) -> List[Fraction]:
    """``[F(r, s) for r = 1 .. n]``."""
    return [efp_residue(EfpQuery(n, r, s, params)) for r in range(1, n + 1)]


def _inverse_power_at_one(r: int, order: int) -> RationalPoly:
    """``(1 + w)^-r`` up to ``w^order``."""
    return RationalPoly([(-1) ** i * c for i, c in enumerate(binomial_series(r, order).coeffs)])


def _residue_at_one(g: RationalPoly, r: int) -> Fraction:
    """Residue at z = 1 of ``g(z) z^-r (z - 1)^-1``: constant term of g(1+w)(1+w)^-r."""
    return (g.shift(1) * _inverse_power_at_one(r, 0)).coeff(0)


def unit_integral_check(n: int, r: int, s: int, params: ModelParams) -> Fraction:
    """The clockwise-around-one integral, evaluated by peeling one variable at a time.

    Integrating ``z_m`` picks the simple pole at ``z_m = 1`` of
    ``(z_m - 1)^-1``; there every cross factor becomes
    ``(z_j - 1)/(alpha z_j + 1)``, which lowers both exponents of the
    remaining per-variable factors by one, and ``h_{n,m}(.., 1)`` must reduce
    to ``h_{n,m-1}``. What is left is the (m-1)-fold integral of the same form.
    """
    query = EfpQuery(n, r, s, params)
    case = query.case
    alpha_z_plus_1 = RationalPoly([1, _alpha(params)]).to_multi(0, 1)
    num, den = _cross_parts(params, 2, 0, 1)
    if (den.substitute(1, 1) != alpha_z_plus_1
            or num.substitute(1, 1) != RationalPoly([-1, 1]).to_multi(0, 1)):
        raise ArithmeticError("cross factor at z_k = 1 is not (z_j - 1)/(alpha z_j + 1)")
    factor = Fraction(1)
    for m in range(s, 1, -1):
        upper, lower = h_multi(n, m, case), h_multi(n, m - 1, case)
        if upper.substitute(m - 1, 1) != lower:
            raise ArithmeticError(f"h_{{{n},{m}}}(..., 1) != h_{{{n},{m - 1}}}")
        # z_m enters only through z^-r (alpha z + 1)^0 (z - 1)^-1 and the cross factors
        factor *= C1_ORIENTATION * _residue_at_one(RationalPoly([1]), r)
    factor *= C1_ORIENTATION * _residue_at_one(h_poly(n, case), r)
    return efp_prefactor_sign(s) * factor


def _shift_multi(h: MultiPoly, order: Sequence[int]) -> TruncatedSeries:
    """``h(1 + w_1, ..., 1 + w_s)`` truncated at ``order``."""
    out = {}
    for e, c in h.terms.items():
        parts = [[(i, math.comb(k, i)) for i in range(min(k, o) + 1)] for k, o in zip(e, order)]
        stack = [((), c)]
        for opts in parts:
            stack = [(ex + (i,), cc * b) for ex, cc in stack for i, b in opts]
        for ex, cc in stack:
            out[ex] = out.get(ex, 0) + cc
    return TruncatedSeries(order, out)


def unit_integral_series(n: int, r: int, s: int, params: ModelParams) -> Fraction:
    """Same integral as :func:`unit_integral_check`, by one global expansion at z = 1.

    Independent route: substitute ``z_j = 1 + w_j``; the clockwise integrals
    pick the coefficient of ``prod w_j^(s-j)`` of the analytic part.
    """
    query = EfpQuery(n, r, s, params)
    p = params
    alpha = _alpha(p)
    order = tuple(s - 1 - j for j in range(s))
    acc = TruncatedSeries.one(order)
    for j in range(s):
        # (alpha (1+w) + 1)^(s-1-j) (1+w)^-r
        base = RationalPoly([alpha + 1, alpha]) ** (s - 1 - j)
        acc = acc * TruncatedSeries.from_univariate(base * _inverse_power_at_one(r, order[j]), j, order)
    t, d = p.t, p.delta
    for j in range(s):
        for k in range(j + 1, s):
            ej = [0] * s
            ej[j] = 1
            ek = [0] * s
            ek[k] = 1
            ejk = [0] * s
            ejk[j] = ejk[k] = 1
            num = TruncatedSeries(order, {tuple(ej): 1, tuple(ek): -1})
            # t^2 (1+w_j)(1+w_k) - 2 t delta (1+w_j) + 1
            den = TruncatedSeries(order, {
                (0,) * s: t * t - 2 * t * d + 1,
                tuple(ej): t * t - 2 * t * d,
                tuple(ek): t * t,
                tuple(ejk): t * t,
            })
            acc = acc * num * den.inverse(f"cross factor ({j},{k}) at z = 1")
    acc = acc * _shift_multi(h_multi(n, s, query.case), order)
    return efp_prefactor_sign(s) * C1_ORIENTATION**s * acc.coefficient(order)


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def efp_record(n: int, r: int, s: int, q, efp: Optional[Fraction] = None,
               oracle: Optional[Fraction] = None) -> dict:
    """JSON-ready ``{n, r, s, q, efp, oracle, match}`` with ``"p/q"`` strings."""
    rec = {"n": n, "r": r, "s": s, "q": _frac_str(Fraction(q))}
    if efp is not None:
        rec["efp"] = _frac_str(efp)
    if oracle is not None:
        rec["oracle"] = _frac_str(oracle)
    if efp is not None and oracle is not None:
        rec["match"] = efp == oracle
    return rec


def profile_csv(values: Sequence[Fraction]) -> str:
    """CSV text with columns ``r, value`` (value as float)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "value"])
    for r, v in enumerate(values, start=1):
        w.writerow([r, repr(float(v))])
    return buf.getvalue()
