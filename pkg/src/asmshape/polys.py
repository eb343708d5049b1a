"""Exact polynomial and truncated power-series arithmetic over the rationals.

Three small value types, all immutable:

``RationalPoly``
    dense univariate polynomial, ``coeffs[k]`` is the coefficient of ``z**k``;
``MultiPoly``
    sparse polynomial in a fixed number of variables, keyed by exponent tuples;
``TruncatedSeries``
    multivariate power series truncated at a per-variable maximal exponent.

Coefficients are ``fractions.Fraction`` (plain ``int`` is accepted on input).
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from numbers import Rational
from typing import Dict, Iterable, Mapping, Sequence, Tuple

Exps = Tuple[int, ...]

__all__ = ["RationalPoly", "MultiPoly", "TruncatedSeries", "binomial_series"]


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, Rational):
        return Fraction(c)
    raise TypeError(f"exact rational coefficient expected, got {type(c).__name__}")


class RationalPoly:
    """Univariate polynomial with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: Tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c) -> "RationalPoly":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> "RationalPoly":
        return cls([0] * k + [c])

    @classmethod
    def linear(cls, c0, c1) -> "RationalPoly":
        """``c0 + c1*z``."""
        return cls([c0, c1])

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __call__(self, z):
        """Horner evaluation; exact for rational ``z``, floating otherwise."""
        exact = isinstance(z, Rational)
        acc = Fraction(0) if exact else 0.0
        for c in reversed(self.coeffs):
            acc = acc * z + (c if exact else float(c))
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, Rational):
            return self.coeffs == RationalPoly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RationalPoly([{', '.join(str(c) for c in self.coeffs)}])"

    def _coerce(self, other) -> "RationalPoly":
        if isinstance(other, RationalPoly):
            return other
        if isinstance(other, Rational):
            return RationalPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return RationalPoly([c + (b[i] if i < len(b) else 0) for i, c in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> "RationalPoly":
        return RationalPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return RationalPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return RationalPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RationalPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = RationalPoly([1]), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "RationalPoly":
        c = _frac(c)
        return RationalPoly([c * a for a in self.coeffs])

    def derivative(self) -> "RationalPoly":
        return RationalPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def shift(self, a) -> "RationalPoly":
        """Return ``p(z + a)``."""
        lin = RationalPoly([a, 1])
        acc = RationalPoly()
        for c in reversed(self.coeffs):
            acc = acc * lin + c
        return acc

    def divmod(self, other: "RationalPoly") -> Tuple["RationalPoly", "RationalPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.coeffs[-1]
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - dq - 1, -1, -1):
            c = rem[k + dq] / lead
            quot[k] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[k + i] -= c * b
        return RationalPoly(quot), RationalPoly(rem[:dq] if dq > 0 else [])

    def to_multi(self, var: int, nvars: int) -> "MultiPoly":
        terms = {}
        for k, c in enumerate(self.coeffs):
            if c:
                e = [0] * nvars
                e[var] = k
                terms[tuple(e)] = c
        return MultiPoly(nvars, terms, _trusted=True)


class MultiPoly:
    """Sparse polynomial in ``nvars`` variables ``z_0 .. z_{nvars-1}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exps, object] = (), *, _trusted: bool = False):
        self.nvars = nvars
        if _trusted:
            self.terms: Dict[Exps, Fraction] = dict(terms)
            return
        clean: Dict[Exps, Fraction] = {}
        for e, c in dict(terms).items():
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} does not have {nvars} entries")
            c = _frac(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def one(cls, nvars: int) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: Fraction(1)}, _trusted=True)

    @classmethod
    def variable(cls, var: int, nvars: int) -> "MultiPoly":
        e = [0] * nvars
        e[var] = 1
        return cls(nvars, {tuple(e): Fraction(1)}, _trusted=True)

    def is_zero(self) -> bool:
        return not self.terms

    def degree_in(self, var: int) -> int:
        return max((e[var] for e in self.terms), default=-1)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def __repr__(self) -> str:
        return f"MultiPoly({self.nvars}, {len(self.terms)} terms)"

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly(self.nvars, out, _trusted=True)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Rational):
            c = _frac(other)
            if not c:
                return MultiPoly(self.nvars)
            return MultiPoly(self.nvars, {e: c * a for e, a in self.terms.items()}, _trusted=True)
        out: Dict[Exps, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(i + j for i, j in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return MultiPoly(self.nvars, {e: c for e, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __call__(self, *point):
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} values")
        total = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(point, e):
                if k:
                    t = t * v**k
            total = total + t
        return total

    def substitute(self, var: int, value) -> "MultiPoly":
        """Set ``z_var = value`` and drop that variable."""
        value = _frac(value)
        out: Dict[Exps, Fraction] = {}
        for e, c in self.terms.items():
            k = e[var]
            if k and not value:
                continue
            e2 = e[:var] + e[var + 1:]
            out[e2] = out.get(e2, 0) + c * value**k
        return MultiPoly(self.nvars - 1, {e: c for e, c in out.items() if c}, _trusted=True)

    def permute(self, perm: Sequence[int]) -> "MultiPoly":
        """Return ``p(z_{perm[0]}, z_{perm[1]}, ...)``.

        Variable slot ``i`` of the result receives variable ``perm[i]``.
        """
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * self.nvars
            for i, p in enumerate(perm):
                e2[p] = e[i]
            out[tuple(e2)] = c
        return MultiPoly(self.nvars, out, _trusted=True)

    def divide_linear(self, j: int, k: int) -> "MultiPoly":
        """Exact quotient by ``(z_j - z_k)``; raises ArithmeticError on remainder.

        Synthetic division in ``z_j``, coefficients being polynomials in the
        remaining variables.
        """
        if j == k:
            raise ValueError("divisor z_j - z_j is zero")
        # group by the z_j exponent, highest first
        by_deg: Dict[int, Dict[Exps, Fraction]] = {}
        for e, c in self.terms.items():
            by_deg.setdefault(e[j], {})[e] = c
        if not by_deg:
            return MultiPoly(self.nvars)
        top = max(by_deg)
        quot: Dict[Exps, Fraction] = {}
        carry: Dict[Exps, Fraction] = {}  # keys carry exponent of z_j == d
        for d in range(top, -1, -1):
            cur = dict(carry)
            for e, c in by_deg.get(d, {}).items():
                v = cur.get(e, 0) + c
                if v:
                    cur[e] = v
                else:
                    cur.pop(e, None)
            if d == 0:
                if cur:
                    raise ArithmeticError(
                        f"division by (z_{j} - z_{k}) left a nonzero remainder "
                        f"with {len(cur)} terms")
                break
            carry = {}
            for e, c in cur.items():
                # quotient term: same monomial with z_j exponent d-1
                eq = list(e)
                eq[j] = d - 1
                eq = tuple(eq)
                quot[eq] = quot.get(eq, 0) + c
                # carry z_k * (quotient term) into degree d-1
                ec = list(eq)
                ec[k] += 1
                ec = tuple(ec)
                v = carry.get(ec, 0) + c
                if v:
                    carry[ec] = v
                else:
                    carry.pop(ec, None)
        return MultiPoly(self.nvars, {e: c for e, c in quot.items() if c}, _trusted=True)

    def to_univariate(self) -> RationalPoly:
        if self.nvars != 1:
            raise ValueError("not a univariate polynomial")
        deg = self.degree_in(0)
        cs = [Fraction(0)] * (deg + 1)
        for (k,), c in self.terms.items():
            cs[k] = c
        return RationalPoly(cs)


def binomial_series(m: int, order: int) -> RationalPoly:
    """Coefficients of ``(1 - z)**(-m)`` up to ``z**order``."""
    cs = [Fraction(1)]
    for i in range(1, order + 1):
        cs.append(cs[-1] * (m + i - 1) / i)
    return RationalPoly(cs)


class TruncatedSeries:
    """Power series in ``len(order)`` variables, exponents capped at ``order``.

    Only monomials with ``e[i] <= order[i]`` for every ``i`` are stored; ring
    operations discard anything beyond.
    """

    __slots__ = ("order", "terms")

    def __init__(self, order: Sequence[int], terms: Mapping[Exps, Fraction] = ()):
        self.order: Exps = tuple(order)
        if any(o < 0 for o in self.order):
            raise ValueError(f"negative truncation order {self.order}")
        self.terms: Dict[Exps, Fraction] = {
            tuple(e): _frac(c) for e, c in dict(terms).items()
            if c and all(k <= o for k, o in zip(e, self.order))
        }

    @property
    def nvars(self) -> int:
        return len(self.order)

    @classmethod
    def one(cls, order: Sequence[int]) -> "TruncatedSeries":
        return cls(order, {(0,) * len(order): Fraction(1)})

    @classmethod
    def from_poly(cls, p: MultiPoly, order: Sequence[int]) -> "TruncatedSeries":
        if p.nvars != len(order):
            raise ValueError("variable count mismatch")
        return cls(order, p.terms)

    @classmethod
    def from_univariate(cls, p: RationalPoly, var: int, order: Sequence[int]) -> "TruncatedSeries":
        terms = {}
        for k, c in enumerate(p.coeffs[: order[var] + 1]):
            e = [0] * len(order)
            e[var] = k
            terms[tuple(e)] = c
        return cls(order, terms)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.nvars)

    def __eq__(self, other) -> bool:
        return (isinstance(other, TruncatedSeries) and self.order == other.order
                and self.terms == other.terms)

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.order}, {self.terms})"

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return TruncatedSeries(self.order, out)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.order, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Rational):
            c = _frac(other)
            return TruncatedSeries(self.order, {e: c * a for e, a in self.terms.items()})
        self._check(other)
        order = self.order
        out: Dict[Exps, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(i + j for i, j in zip(ea, eb))
                if any(k > o for k, o in zip(e, order)):
                    continue
                out[e] = out.get(e, 0) + ca * cb
        return TruncatedSeries(order, out)

    __rmul__ = __mul__

    def inverse(self, name: str = "series") -> "TruncatedSeries":
        """Multiplicative inverse; requires a nonzero constant term."""
        c0 = self.constant_term()
        if c0 == 0:
            raise ZeroDivisionError(f"cannot invert {name}: constant term is zero")
        # 1/f = (1/c0) * sum_p (-u)^p with u = f/c0 - 1 nilpotent in the truncation
        u = self * (1 / c0) - TruncatedSeries.one(self.order)
        neg_u = -u
        max_total = sum(self.order)
        acc = TruncatedSeries.one(self.order)
        power = TruncatedSeries.one(self.order)
        for _ in range(max_total):
            power = power * neg_u
            if not power.terms:
                break
            acc = acc + power
        return acc * (1 / c0)

    def dot(self, p: MultiPoly, target: Sequence[int]) -> Fraction:
        """Coefficient of ``z**target`` in ``self * p`` without forming the product."""
        total = Fraction(0)
        target = tuple(target)
        for e, c in self.terms.items():
            rest = tuple(t - k for t, k in zip(target, e))
            pc = p.terms.get(rest)
            if pc:
                total += c * pc
        return total

    def _check(self, other: "TruncatedSeries") -> None:
        if self.order != other.order:
            raise ValueError(f"truncation orders differ: {self.order} vs {other.order}")


def all_exponents(order: Sequence[int]):
    return product(*(range(o + 1) for o in order))
