"""Refined q-enumeration generating functions h_N(z) and their multi-variable versions.

``h_poly(n, case)`` returns the polynomial ``sum_r H_n^(r) z^(r-1)`` built from the
closed forms for q = 1, 2, 3, ``h_multi(n, s, case)`` the symmetric polynomial
obtained from an s x s determinant divided by the Vandermonde product, and
``log_density(case)`` the leading large-n behaviour ``ln h_n(z) ~ n L(z)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Callable, Dict, List, Sequence

from .conventions import Case
from .polys import MultiPoly, RationalPoly

__all__ = [
    "hypergeometric_terms", "h_poly", "h_multi", "B_poly",
    "LogDensityLimit", "log_density", "empirical_log_density", "MULTI_MAX_S",
]

MULTI_MAX_S = 5


def hypergeometric_terms(a: int, b, c) -> List[Fraction]:
    """Coefficients ``t_k`` of the terminating series 2F1(a, b; c; w) = sum_k t_k w^k.

    ``a`` must be a non-positive integer; the series stops at ``k = -a``.
    """
    if a > 0 or int(a) != a:
        raise ValueError(f"2F1 terminates only for a non-positive integer first parameter, got {a}")
    b, c = Fraction(b), Fraction(c)
    terms = [Fraction(1)]
    for k in range(-a):
        denom = (c + k) * (k + 1)
        if denom == 0:
            raise ZeroDivisionError("lower parameter hits a non-positive integer")
        terms.append(terms[-1] * (a + k) * (b + k) / denom)
    return terms


def _imul(p: Sequence[int], q: Sequence[int]) -> List[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _ipowers(p: Sequence[int], m: int) -> List[List[int]]:
    pw = [[1]]
    for _ in range(m):
        pw.append(_imul(pw[-1], p))
    return pw


def _h_q1(n: int) -> RationalPoly:
    # 2F1(1-n, n; 2n; 1-z) expanded in powers of z
    t = hypergeometric_terms(1 - n, n, 2 * n)
    coeffs = []
    for j in range(n):
        acc = Fraction(0)
        binom = 1  # C(k, j) for k = j
        for k in range(j, n):
            acc += t[k] * binom
            binom = binom * (k + 1) // (k + 1 - j)
        coeffs.append(acc if j % 2 == 0 else -acc)
    return RationalPoly(coeffs)


def _h_q2(n: int) -> RationalPoly:
    d = n - 1
    return RationalPoly([Fraction(math.comb(d, k), 2**d) for k in range(d + 1)])


@lru_cache(maxsize=None)
def B_poly(m: int) -> RationalPoly:
    """The degree-2m polynomial entering h_n at q = 3.

    ``B_2m(z) = (m+1)/(3^(m-1)(2m+3)) z^m (z+2)^m F(-m, m+2; 2m+4; w)
              - m/(3^(m-1)(2m+3)) z^m (z+2)^(m-1) F(1-m, m+2; 2m+4; w)``
    with ``w = (z^2-1)/(z(z+2))``; each ``w^k`` is cleared against the
    prefactors, so only integer polynomials are multiplied.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    scale = Fraction(3) ** (1 - m) / (2 * m + 3)
    a_pows = _ipowers([-1, 0, 1], m)   # (z^2 - 1)^k
    b_pows = _ipowers([0, 2, 1], m)    # (z(z+2))^k
    acc: Dict[int, Fraction] = {}

    def add(coef: Fraction, poly: Sequence[int]):
        for i, c in enumerate(poly):
            if c:
                acc[i] = acc.get(i, Fraction(0)) + coef * c

    for k, tk in enumerate(hypergeometric_terms(-m, m + 2, 2 * m + 4)):
        # z^m (z+2)^m w^k = (z^2-1)^k (z(z+2))^(m-k)
        add(scale * (m + 1) * tk, _imul(a_pows[k], b_pows[m - k]))
    if m > 0:
        for k, tk in enumerate(hypergeometric_terms(1 - m, m + 2, 2 * m + 4)):
            # z^m (z+2)^(m-1) w^k = z (z^2-1)^k (z(z+2))^(m-1-k)
            add(-scale * m * tk, [0] + _imul(a_pows[k], b_pows[m - 1 - k]))
    deg = max(acc, default=0)
    return RationalPoly([acc.get(i, 0) for i in range(deg + 1)])


def _h_q3(n: int) -> RationalPoly:
    if n == 1:
        return RationalPoly([1])
    if n % 2 == 0:
        m = (n - 2) // 2
        pre = RationalPoly([Fraction(1, 2), Fraction(1, 2)])
    else:
        m = (n - 3) // 2
        pre = RationalPoly([2, 5, 2]).scale(Fraction(1, 9))  # (2z+1)(z+2)/9
    return pre * B_poly(m)


_BUILDERS: Dict[Case, Callable[[int], RationalPoly]] = {
    Case.Q1: _h_q1, Case.Q2: _h_q2, Case.Q3: _h_q3,
}


@lru_cache(maxsize=None)
def _h_poly_cached(n: int, case: Case) -> RationalPoly:
    return _BUILDERS[case](n)


def h_poly(n: int, case) -> RationalPoly:
    """Generating function of the first-row boundary correlation, exact."""
    case = Case.parse(case)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return _h_poly_cached(int(n), case)


def _det(mat: List[List[Fraction]]) -> Fraction:
    m = [row[:] for row in mat]
    size = len(m)
    det = Fraction(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if m[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, size):
            f = m[r][col] * inv
            if f:
                for c in range(col, size):
                    m[r][c] -= f * m[col][c]
    return det


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def determinant_numerator(n: int, s: int, case) -> MultiPoly:
    """``det_{j,k} [z_j^(k-1) (z_j - 1)^(s-k) h_{n-k+1}(z_j)]`` as a polynomial."""
    case = Case.parse(case)
    zm1 = RationalPoly([-1, 1])
    cols = [RationalPoly.monomial(k - 1) * zm1 ** (s - k) * h_poly(n - k + 1, case)
            for k in range(1, s + 1)]
    width = max(c.degree for c in cols) + 1
    coef = [[c.coeff(a) for a in range(width)] for c in cols]  # coef[k][a]
    perms = [(p, _perm_sign(p)) for p in permutations(range(s))]
    terms: Dict[tuple, Fraction] = {}
    # antisymmetric: sum over exponent sets A of det(C_A) * alternant of z^A
    for A in combinations(range(width), s):
        d = _det([[coef[k][a] for k in range(s)] for a in A])
        if not d:
            continue
        for p, sign in perms:
            terms[tuple(A[p[j]] for j in range(s))] = sign * d
    return MultiPoly(s, terms)


@lru_cache(maxsize=None)
def _h_multi_cached(n: int, s: int, case: Case) -> MultiPoly:
    if s == 1:
        return h_poly(n, case).to_multi(0, 1)
    p = determinant_numerator(n, s, case)
    for j in range(s):
        for k in range(j + 1, s):
            try:
                p = p.divide_linear(j, k)
            except ArithmeticError as exc:  # pragma: no cover - construction bug
                raise AssertionError(
                    f"Vandermonde division failed for n={n}, s={s}, {case}: {exc}") from exc
    return p


def h_multi(n: int, s: int, case) -> MultiPoly:
    """Symmetric multi-variable generalisation ``h_{n,s}(z_1, ..., z_s)``.

    Variable ``z_j`` of the formulas is slot ``j - 1`` of the MultiPoly.
    """
    case = Case.parse(case)
    if not 1 <= s <= n:
        raise ValueError(f"need 1 <= s <= n, got s={s}, n={n}")
    if s > MULTI_MAX_S:
        raise ValueError(f"s={s} exceeds the supported bound {MULTI_MAX_S}")
    return _h_multi_cached(int(n), int(s), case)


@dataclass(frozen=True)
class LogDensityLimit:
    """``L(z) = lim (1/n) ln h_n(z)`` with its first two derivatives, for real z > 0.

    Closed forms (S = sqrt(z^2 - z + 1)):

    * q = 1: ``L = ln[4 v (1-v)(1-v+zv)]``, ``v = (2-z-S)/(3(1-z)) = 1/(2-z+S)``,
      ``L' = (1-S)/(z(1-z)) = 1/(1+S)``;
    * q = 2: ``L = ln((z+1)/2)``, ``L' = 1/(z+1)``;
    * q = 3: ``L = ln[2(2z+1)(z+2)/(9(z+1))]``,
      ``L' = (2z^2+4z+3)/((1+z)(2+z)(1+2z))``.

    The rationalised q = 1 forms have no 0/0 at z = 1, where every case has
    ``L(1) = 0`` and ``L'(1) = 1/2``.
    """

    case: Case

    @staticmethod
    def _check(z: float) -> float:
        z = float(z)
        if not z > 0:
            raise ValueError(f"log-density limit defined for z > 0, got {z}")
        return z

    def v(self, z: float) -> float:
        """Auxiliary saddle point of the q = 1 Euler integral."""
        if self.case is not Case.Q1:
            raise AttributeError("v(z) is only defined for q = 1")
        z = self._check(z)
        return 1.0 / (2.0 - z + math.sqrt(z * z - z + 1.0))

    def value(self, z: float) -> float:
        z = self._check(z)
        if self.case is Case.Q1:
            v = self.v(z)
            return math.log(4.0 * v * (1.0 - v) * (1.0 - v + z * v))
        if self.case is Case.Q2:
            return math.log((z + 1.0) / 2.0)
        return math.log(2.0 * (2.0 * z + 1.0) * (z + 2.0) / (9.0 * (z + 1.0)))

    def derivative(self, z):
        """L'(z); exact for rational z when q = 2 or 3."""
        if self.case is Case.Q1:
            z = self._check(z)
            return 1.0 / (1.0 + math.sqrt(z * z - z + 1.0))
        if z <= 0:
            raise ValueError(f"log-density limit defined for z > 0, got {z}")
        if self.case is Case.Q2:
            return 1 / (z + 1)
        return (2 * z * z + 4 * z + 3) / ((1 + z) * (2 + z) * (1 + 2 * z))

    def second_derivative(self, z):
        if self.case is Case.Q1:
            z = self._check(z)
            S = math.sqrt(z * z - z + 1.0)
            return -(2.0 * z - 1.0) / (2.0 * S * (1.0 + S) ** 2)
        if z <= 0:
            raise ValueError(f"log-density limit defined for z > 0, got {z}")
        if self.case is Case.Q2:
            return -1 / (z + 1) ** 2
        return -4 / (2 * z + 1) ** 2 - 1 / (z + 2) ** 2 + 1 / (z + 1) ** 2

    def __call__(self, z: float) -> float:
        return self.value(z)


def log_density(case) -> LogDensityLimit:
    return LogDensityLimit(Case.parse(case))


def _log_frac(c: Fraction) -> float:
    return math.log(c.numerator) - math.log(c.denominator)


def empirical_log_density(n_list: Sequence[int], case, z: float) -> List[float]:
    """``(1/n) ln h_n(z)`` for each n, evaluated as a log-sum-exp over exact coefficients."""
    z = float(z)
    if not z > 0:
        raise ValueError(f"z must be positive, got {z}")
    lz = math.log(z)
    out = []
    for n in n_list:
        coeffs = h_poly(n, case).coeffs
        if any(c <= 0 for c in coeffs):
            raise ValueError("log-sum-exp evaluation requires positive coefficients")
        logs = [_log_frac(c) + k * lz for k, c in enumerate(coeffs)]
        top = max(logs)
        out.append((top + math.log(sum(math.exp(t - top) for t in logs))) / n)
    return out
