"""Exact rational computation of Bernoulli numbers of the second kind.

The numbers b_n (also called Gregory coefficients) are the power series
coefficients of x/ln(1+x):

    x/ln(1+x) = sum_{n>=0} b_n x^n,  b_0 = 1, b_1 = 1/2, b_2 = -1/12, ...

Two algebraically independent exact algorithms are provided:

* ``bernoulli2_series``   -- series-division recurrence, O(N^2) rationals.
* ``bernoulli2_explicit`` -- closed nested-sum formula over the chain
  sums S(m, d); much slower, which is exactly why it makes a good
  cross-check of the recurrence.

All arithmetic is exact over arbitrary-precision rationals; floats never
enter this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

# Canonical exact rational value type.  fractions.Fraction already
# guarantees denominator > 0 and gcd-reduced form after every operation,
# so no wrapper is needed.
BigRational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)
ONE_HALF = Fraction(1, 2)


def format_rational(q: Fraction) -> str:
    """Serialize ``q`` as ``"num/den"`` in lowest terms.

    Integers keep an explicit denominator: ``Fraction(3)`` renders as
    ``"3/1"``.  This is the wire format used by the CSV/JSON emitters.
    """
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse the ``"num/den"`` form produced by :func:`format_rational`.

    Bare integer strings are accepted as a convenience.
    """
    return Fraction(text.strip())


class TableMethod(Enum):
    """Which exact algorithm produced a :class:`GregoryTable`."""

    SERIES_RECURRENCE = "series"
    EXPLICIT_FORMULA = "explicit"


@dataclass(frozen=True)
class GregoryTable:
    """Exact table of b_0..b_N with method provenance.

    Invariants, checked at construction rather than assumed:

    * ``values[0] == 1`` and, when present, ``values[1] == 1/2``;
    * ``sign(values[n]) == (-1)**(n+1)`` for n >= 1;
    * ``max_index == len(values) - 1``.
    """

    values: tuple[Fraction, ...]
    method: TableMethod

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("table must hold at least b_0")
        if self.values[0] != ONE:
            raise ValueError("b_0 must be 1")
        if len(self.values) > 1 and self.values[1] != ONE_HALF:
            raise ValueError("b_1 must be 1/2")
        for n in range(1, len(self.values)):
            expected = 1 if n % 2 == 1 else -1
            v = self.values[n]
            if v == 0 or (1 if v > 0 else -1) != expected:
                raise ValueError(f"sign of b_{n} violates (-1)**(n+1) alternation")

    @property
    def max_index(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int) -> Fraction:
        return self.values[n]


def bernoulli2_series(n_max: int) -> GregoryTable:
    """Exact b_0..b_{n_max} by the series-division recurrence.

    Dividing x by ln(1+x) = sum_{k>=1} (-1)**(k+1) x^k / k and equating
    coefficients gives

        b_0 = 1,  b_n = -sum_{k=1}^{n} (-1)**k b_{n-k} / (k+1).

    Total function for n_max >= 0; memory is the only practical limit.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    values = [ONE]
    for n in range(1, n_max + 1):
        acc = ZERO
        for k in range(1, n + 1):
            term = values[n - k] / (k + 1)
            acc += -term if k % 2 else term
        values.append(-acc)
    return GregoryTable(values=tuple(values), method=TableMethod.SERIES_RECURRENCE)


class NestedSumMemo:
    """Triangular memo of the chain sums S(m, d).

    S(m, d) is the sum over strictly decreasing integer chains
    m >= l_1 > l_2 > ... > l_d >= 1 of prod_j 1/l_j, with the
    conventions S(m, 0) = 1 (the empty chain) and S(m, d) = 0 for
    d > m.  Rows are grown in place through

        S(m, d) = S(m-1, d) + (1/m) S(m-1, d-1),

    splitting on whether a chain starts at m.  Instances mutate while
    they grow, so share one between threads only behind a lock, or
    hand each thread its own.
    """

    def __init__(self) -> None:
        self._rows: list[list[Fraction]] = [[ONE]]  # row m holds S(m, 0..m)

    def value(self, m: int, d: int) -> Fraction:
        if m < 0 or d < 0:
            raise ValueError("chain sum indices must be nonnegative")
        if d > m:
            return ZERO
        while len(self._rows) <= m:
            prev = self._rows[-1]
            mm = len(self._rows)
            inv = Fraction(1, mm)
            row = [ONE]
            for dd in range(1, mm + 1):
                above = prev[dd] if dd < len(prev) else ZERO
                row.append(above + inv * prev[dd - 1])
            self._rows.append(row)
        return self._rows[m][d]


def nested_sum(m: int, d: int, memo: NestedSumMemo | None = None) -> Fraction:
    """S(m, d), the strictly-decreasing-chain sum (see NestedSumMemo).

    A fresh memo is created when none is passed; callers looping over
    many (m, d) pairs should pass one in and reuse it.
    """
    if m < 0 or d < 0:
        raise ValueError("m and d must be nonnegative")
    return (memo if memo is not None else NestedSumMemo()).value(m, d)


def a_coefficient(n: int, i: int, memo: NestedSumMemo | None = None) -> Fraction:
    """Exact coefficient a(n, i) of the explicit formula.

    a(n, 2) = (n-1)! and, for 3 <= i <= n+1,
    a(n, i) = (i-1)! (n-1)! S(n-1, i-2).

    Raises ValueError outside 2 <= i <= n+1, where the coefficient is
    undefined.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if i < 2 or i > n + 1:
        raise ValueError(f"a({n}, {i}) is undefined: need 2 <= i <= n+1")
    if i == 2:
        return Fraction(math.factorial(n - 1))
    memo = memo if memo is not None else NestedSumMemo()
    weight = math.factorial(i - 1) * math.factorial(n - 1)
    return weight * memo.value(n - 1, i - 2)


def _a_or_zero(n: int, i: int, memo: NestedSumMemo) -> Fraction:
    # indices outside 2 <= i <= n+1 contribute nothing to the main sum
    if n < 1 or i < 2 or i > n + 1:
        return ZERO
    return a_coefficient(n, i, memo)


def bernoulli2_explicit(n: int, memo: NestedSumMemo | None = None) -> Fraction:
    """Exact b_n by the explicit nested-sum formula, valid for n >= 2.

        b_n = (-1)**n / n! * [ 1/(n+1)
              + sum_{k=2}^{n} (a(n, k) - n a(n-1, k)) / k! ]

    Out-of-range a(., .) terms are taken as 0, which makes the sum total
    without changing any defined term.
    """
    if n < 2:
        raise ValueError("explicit formula applies for n >= 2 only")
    memo = memo if memo is not None else NestedSumMemo()
    acc = Fraction(1, n + 1)
    for k in range(2, n + 1):
        acc += (_a_or_zero(n, k, memo) - n * _a_or_zero(n - 1, k, memo)) / math.factorial(k)
    sign = 1 if n % 2 == 0 else -1
    return Fraction(sign, math.factorial(n)) * acc


def bernoulli2_explicit_table(n_max: int) -> GregoryTable:
    """GregoryTable built from the explicit formula.

    The closed formula starts at n = 2; b_0 = 1 and b_1 = 1/2 are series
    constants and are filled in directly so both methods cover the same
    index range.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    memo = NestedSumMemo()
    values = [ONE, ONE_HALF][: n_max + 1]
    for n in range(2, n_max + 1):
        values.append(bernoulli2_explicit(n, memo))
    return GregoryTable(values=tuple(values), method=TableMethod.EXPLICIT_FORMULA)


def signed_moment_sequence(table: GregoryTable) -> tuple[Fraction, ...]:
    """The sequence mu_n = (-1)**n b_{n+1}, n = 0..max_index-1.

    This is the nonnegative moment sequence whose structural properties
    the checks in :mod:`gregory.properties` verify.
    """
    return tuple((-ONE) ** n * table.values[n + 1] for n in range(table.max_index))
