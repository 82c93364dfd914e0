"""Structural property checks for the coefficient family.

The unsigned coefficient magnitudes form a Hausdorff moment sequence, so
a bundle of classical consequences is machine-checkable: complete
monotonicity of the moments, nonnegative Hankel determinants, product
inequalities along majorization order, and log-convexity of the
factorial-scaled magnitudes.  This module implements those checks
exactly over rationals where the data is exact, and with explicit slack
where values come from quadrature.

Every check returns a :class:`CmReport` carrying a pass flag, the
checked horizon, and the lexicographically first violation if any, so
failures are reproducible rather than just boolean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Optional, Sequence

from .exact import GregoryTable, format_rational
from .quadrature import IntegrandEvaluationError, shifted_kernel_integral

DEFAULT_GRID_ORDER = 8          # difference orders checked by the grid tests
DEFAULT_CLOSED_FORM_SLACK = 1e-12
DEFAULT_QUADRATURE_SLACK = 1e-6


def _value_string(v) -> str:
    # reports serialize violating values as exact "num/den" strings;
    # floats are converted exactly (binary rational), never rounded
    return format_rational(Fraction(v))


@dataclass(frozen=True)
class DifferenceTable:
    """Forward difference table: rows[k][n] holds the raw k-th difference.

    Row 0 is the input sequence itself; row k has k fewer entries.  The
    values are raw differences, not sign-adjusted: callers testing
    complete monotonicity multiply row k by (-1)**k themselves.
    """

    rows: tuple[tuple, ...]

    @property
    def base(self) -> tuple:
        return self.rows[0]

    @property
    def order(self) -> int:
        return len(self.rows) - 1

    def forward(self, k: int, n: int):
        return self.rows[k][n]

    def alternating(self, k: int, n: int):
        """(-1)**k times the k-th forward difference at n."""
        v = self.rows[k][n]
        return -v if k % 2 else v


def difference_table(mu: Sequence, K: int) -> DifferenceTable:
    """Build forward differences of mu through order K.

    Requires 0 <= K <= len(mu) - 1 so every requested row is nonempty.
    Works on any subtractable values; exact inputs give exact rows.
    """
    terms = tuple(mu)
    if not terms:
        raise ValueError("sequence must be nonempty")
    if K < 0 or K > len(terms) - 1:
        raise ValueError(f"order K={K} needs a sequence of at least K+1 terms")
    rows = [terms]
    for _ in range(K):
        prev = rows[-1]
        rows.append(tuple(prev[n + 1] - prev[n] for n in range(len(prev) - 1)))
    return DifferenceTable(rows=tuple(rows))


@dataclass(frozen=True)
class CmReport:
    """Outcome of one property suite.

    ``horizon`` records how far the check looked, as (max n index,
    max difference order).  ``first_violation`` is the lexicographically
    smallest offending (k, n) with the signed offending value serialized
    as a string, or None.  For direct checks passed is equivalent to
    first_violation being None; the minimality check inverts this and
    stores the violation it found in the perturbed sequence as evidence.
    """

    suite_name: str
    passed: bool
    horizon: tuple[int, int]
    first_violation: Optional[tuple[int, int, str]]

    def to_json_dict(self) -> dict:
        fv = None
        if self.first_violation is not None:
            k, n, value = self.first_violation
            fv = {"k": k, "n": n, "value": value}
        return {
            "suite": self.suite_name,
            "passed": self.passed,
            "horizon": [self.horizon[0], self.horizon[1]],
            "first_violation": fv,
        }


def check_cm_sequence(mu: Sequence, suite_name: str = "cm-sequence") -> CmReport:
    """Check that mu is completely monotonic as far as its length allows.

    Requires (-1)**k (forward difference)^k mu_n >= 0 for every order
    k = 0..len(mu)-1 and every offset n, the k = 0 row included (the
    terms themselves must be nonnegative).  Exact comparison, no slack.
    """
    table = difference_table(mu, len(tuple(mu)) - 1)
    K = table.order
    for k in range(K + 1):
        row = table.rows[k]
        for n in range(len(row)):
            signed = table.alternating(k, n)
            if signed < 0:
                return CmReport(suite_name=suite_name, passed=False,
                                horizon=(len(table.base) - 1, K),
                                first_violation=(k, n, _value_string(signed)))
    return CmReport(suite_name=suite_name, passed=True,
                    horizon=(len(table.base) - 1, K), first_violation=None)


def check_minimality_perturbation(mu: Sequence, epsilon: Fraction) -> CmReport:
    """Probe whether mu_0 can be lowered by epsilon without breaking CM.

    mu itself must be completely monotonic over its horizon.  The check
    passes when the perturbed sequence (mu_0 - epsilon, mu_1, ...)
    VIOLATES complete monotonicity somewhere in the horizon: that
    violation is direct evidence mu_0 sits within epsilon of the least
    admissible leading term, and it is recorded in first_violation.  A
    perturbed sequence that still looks CM proves nothing at this
    horizon, so passed=False there means inconclusive, not refuted.
    """
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    base = check_cm_sequence(mu, suite_name="minimality")
    if not base.passed:
        raise ValueError("sequence must be completely monotonic before perturbing")
    terms = tuple(mu)
    perturbed = (terms[0] - eps,) + terms[1:]
    probe = check_cm_sequence(perturbed, suite_name="minimality")
    return CmReport(suite_name="minimality", passed=not probe.passed,
                    horizon=probe.horizon, first_violation=probe.first_violation)


# ----------------------------------------------------------------------
# Hankel determinants
# ----------------------------------------------------------------------

class DeterminantVariant(Enum):
    """Moment matrix flavor: raw factorial moments or sign-prefixed ones."""

    PLAIN = "plain"
    SIGNED = "signed"


def bareiss_determinant(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant of a square rational matrix.

    Rows are scaled to integers by their denominator lcm, then reduced
    by fraction-free Bareiss elimination, so intermediate values stay
    integral and the only division at the end is by the tracked scale.
    """
    m = len(rows)
    if m == 0:
        raise ValueError("matrix must be nonempty")
    if any(len(row) != m for row in rows):
        raise ValueError("matrix must be square")
    scale = 1
    imat: list[list[int]] = []
    for row in rows:
        qrow = [Fraction(v) for v in row]
        den = math.lcm(*(q.denominator for q in qrow))
        scale *= den
        imat.append([int(q * den) for q in qrow])
    sign = 1
    prev = 1
    for col in range(m - 1):
        if imat[col][col] == 0:
            for r in range(col + 1, m):
                if imat[r][col] != 0:
                    imat[col], imat[r] = imat[r], imat[col]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = imat[col][col]
        for r in range(col + 1, m):
            for c in range(col + 1, m):
                imat[r][c] = (imat[r][c] * pivot - imat[r][col] * imat[col][c]) // prev
            imat[r][col] = 0
        prev = pivot
    return Fraction(sign * imat[m - 1][m - 1], scale)


def _validate_index_tuple(indices) -> tuple[int, ...]:
    out = tuple(indices)
    if not out:
        raise ValueError("index tuple must be nonempty")
    for a in out:
        if isinstance(a, bool) or not isinstance(a, int):
            raise ValueError(f"indices must be integers, got {a!r}")
        if a < 0:
            raise ValueError(f"indices must be nonnegative, got {a}")
    return out


def hankel_determinant(table: GregoryTable, indices,
                       variant: DeterminantVariant = DeterminantVariant.PLAIN) -> Fraction:
    """det of the factorial-moment matrix picked out by an index tuple.

    Entry (i, j) is (a_i + a_j)! b_{a_i+a_j+1}, optionally prefixed with
    (-1)**(a_i+a_j) in the SIGNED variant.  Both variants agree: the
    sign prefix is a diagonal similarity.  The table must reach index
    2 * max(indices) + 1.
    """
    idx = _validate_index_tuple(indices)
    needed = 2 * max(idx) + 1
    if needed > table.max_index:
        raise ValueError(
            f"need coefficients through index {needed}, table stops at {table.max_index}")
    mat = []
    for ai in idx:
        row = []
        for aj in idx:
            s = ai + aj
            entry = math.factorial(s) * table[s + 1]
            if variant is DeterminantVariant.SIGNED and s % 2:
                entry = -entry
            row.append(entry)
        mat.append(row)
    return bareiss_determinant(mat)


# ----------------------------------------------------------------------
# majorization and log-convexity
# ----------------------------------------------------------------------

def is_majorized(lam, mu) -> bool:
    """True when lam is majorized by mu.

    Both tuples are sorted descending and padded with zeros to a common
    length; lam is majorized by mu when every descending partial sum of
    lam is at most the matching partial sum of mu and the totals agree.
    """
    a = sorted(_validate_index_tuple(lam), reverse=True)
    b = sorted(_validate_index_tuple(mu), reverse=True)
    width = max(len(a), len(b))
    a += [0] * (width - len(a))
    b += [0] * (width - len(b))
    if sum(a) != sum(b):
        return False
    run_a = run_b = 0
    for i in range(width):
        run_a += a[i]
        run_b += b[i]
        if run_a > run_b:
            return False
    return True


def _factorial_moment_product(table: GregoryTable, indices: tuple[int, ...]) -> Fraction:
    # |prod_i  indices_i! * b_{indices_i + 1}|, exact
    out = Fraction(1)
    for a in indices:
        out *= math.factorial(a) * table[a + 1]
    return abs(out)


def check_majorization_inequality(table: GregoryTable, lam, mu) -> CmReport:
    """Product inequality along majorization order.

    For lam majorized by mu, the product of a!*|b_{a+1}| over the
    entries of lam must not exceed the same product over mu.  The
    inequality is a statement about equal-length tuples, so unequal
    lengths are first zero-padded to match, exactly as in
    :func:`is_majorized`; each padded zero contributes a factor
    0!*|b_1| = 1/2.  Raises if lam is not majorized by mu; equality
    (e.g. identical tuples) passes.
    """
    lam_t = _validate_index_tuple(lam)
    mu_t = _validate_index_tuple(mu)
    if not is_majorized(lam_t, mu_t):
        raise ValueError(f"{lam_t} is not majorized by {mu_t}")
    top = max(max(lam_t), max(mu_t))
    if top + 1 > table.max_index:
        raise ValueError(
            f"need coefficients through index {top + 1}, table stops at {table.max_index}")
    width = max(len(lam_t), len(mu_t))
    lhs = _factorial_moment_product(table, lam_t + (0,) * (width - len(lam_t)))
    rhs = _factorial_moment_product(table, mu_t + (0,) * (width - len(mu_t)))
    horizon = (width, top)
    if lhs > rhs:
        return CmReport(suite_name="majorization", passed=False, horizon=horizon,
                        first_violation=(0, 0, format_rational(lhs - rhs)))
    return CmReport(suite_name="majorization", passed=True, horizon=horizon,
                    first_violation=None)


def check_log_convexity(table: GregoryTable) -> CmReport:
    """Log-convexity of the factorial-scaled coefficient magnitudes.

    Checks (i! b_{i+1}) ((i+2)! b_{i+3}) >= ((i+1)! b_{i+2})**2 exactly
    for every i with i+3 <= max_index.  The left side pairs
    coefficients of equal sign, so the literal signed products already
    compare cleanly.  Needs a table through index 3 at least.
    """
    N = table.max_index
    if N < 3:
        raise ValueError("log-convexity needs coefficients through index 3")
    for i in range(0, N - 2):
        lhs = (math.factorial(i) * table[i + 1]) * (math.factorial(i + 2) * table[i + 3])
        rhs = (math.factorial(i + 1) * table[i + 2]) ** 2
        if lhs < rhs:
            return CmReport(suite_name="log-convexity", passed=False, horizon=(N, 0),
                            first_violation=(0, i, format_rational(lhs - rhs)))
    return CmReport(suite_name="log-convexity", passed=True, horizon=(N, 0),
                    first_violation=None)


# ----------------------------------------------------------------------
# float-grid checks for functions given only pointwise
# ----------------------------------------------------------------------

def _grid_step(x: float, K: int, h: Optional[float]) -> float:
    if h is not None:
        return h
    return min(0.1, x / (2 * max(K, 1)))


def _sampled_difference_table(f: Callable[[float], float], x: float,
                              K: int, step: float) -> DifferenceTable:
    samples = []
    for j in range(K + 1):
        abscissa = x + j * step
        v = f(abscissa)
        if not math.isfinite(v):
            raise IntegrandEvaluationError(abscissa, v)
        samples.append(v)
    return difference_table(samples, K)


def cm_grid_test(f: Callable[[float], float], x_grid: Sequence[float],
                 K: int = DEFAULT_GRID_ORDER, h: Optional[float] = None,
                 slack: float = DEFAULT_CLOSED_FORM_SLACK,
                 suite_name: str = "cm-grid") -> CmReport:
    """Finite-difference screen for complete monotonicity on a grid.

    At every grid point x the signed forward differences
    (-1)**k Delta_h^k f(x) for k = 0..K must clear -slack.  The step is
    h when given, otherwise min(0.1, x/(2K)) per point, keeping the
    sample window proportionate near the origin.  Violations are
    reported as (k, grid index, signed value); scanning is k-major so
    the lowest offending order wins.  This is a screen, not a proof:
    slack absorbs rounding, and only the sampled window is seen.
    """
    points = tuple(x_grid)
    if not points:
        raise ValueError("x_grid must be nonempty")
    if any(x <= 0 for x in points):
        raise ValueError("grid points must be positive")
    if K < 0:
        raise ValueError("difference order K must be >= 0")
    if h is not None and h <= 0:
        raise ValueError("step h must be positive")
    if slack < 0:
        raise ValueError("slack must be >= 0")
    tables = [_sampled_difference_table(f, x, K, _grid_step(x, K, h))
              for x in points]
    for k in range(K + 1):
        for n, table in enumerate(tables):
            signed = table.alternating(k, 0)
            if signed < -slack:
                return CmReport(suite_name=suite_name, passed=False,
                                horizon=(len(points) - 1, K),
                                first_violation=(k, n, _value_string(signed)))
    return CmReport(suite_name=suite_name, passed=True,
                    horizon=(len(points) - 1, K), first_violation=None)


@dataclass(frozen=True)
class DegreeBracket:
    """Bracketing of the largest power weight that keeps a function CM.

    last_pass is the largest exponent in the scanned grid whose weighted
    function x**r * f(x) passed the grid screen, first_fail the smallest
    that failed; either end is None when the grid saw no such exponent.
    """

    last_pass: Optional[float]
    first_fail: Optional[float]


def estimate_cm_degree(f: Callable[[float], float], r_grid: Sequence[float],
                       x_grid: Sequence[float], K: int = DEFAULT_GRID_ORDER,
                       h: Optional[float] = None,
                       slack: float = DEFAULT_CLOSED_FORM_SLACK) -> DegreeBracket:
    """Scan exponents r and bracket where x**r * f(x) stops being CM.

    r_grid must be strictly ascending.  Each candidate runs the same
    grid screen as :func:`cm_grid_test` on the weighted function.
    """
    rs = tuple(r_grid)
    if not rs:
        raise ValueError("r_grid must be nonempty")
    if any(rs[i] >= rs[i + 1] for i in range(len(rs) - 1)):
        raise ValueError("r_grid must be strictly ascending")
    last_pass: Optional[float] = None
    first_fail: Optional[float] = None
    for r in rs:
        def weighted(x: float, _r=r) -> float:
            return x ** _r * f(x)
        report = cm_grid_test(weighted, x_grid, K=K, h=h, slack=slack,
                              suite_name="degree")
        if report.passed:
            last_pass = r
        elif first_fail is None:
            first_fail = r
    return DegreeBracket(last_pass=last_pass, first_fail=first_fail)


def check_bernstein(f: Callable[[float], float], f_prime: Callable[[float], float],
                    x_grid: Sequence[float], K: int = DEFAULT_GRID_ORDER,
                    h: Optional[float] = None,
                    slack: float = DEFAULT_CLOSED_FORM_SLACK,
                    suite_name: str = "bernstein") -> CmReport:
    """Grid screen for the Bernstein property: f >= 0 and f' completely monotonic.

    Order 0 violations report f itself dipping below -slack; an order
    k >= 1 violation is the (k-1)-th signed difference of f' failing at
    that grid point, so the report's k axis reads as derivative order of
    f.  Horizon order is K + 1 accordingly.
    """
    points = tuple(x_grid)
    if not points:
        raise ValueError("x_grid must be nonempty")
    if any(x <= 0 for x in points):
        raise ValueError("grid points must be positive")
    for n, x in enumerate(points):
        v = f(x)
        if not math.isfinite(v):
            raise IntegrandEvaluationError(x, v)
        if v < -slack:
            return CmReport(suite_name=suite_name, passed=False,
                            horizon=(len(points) - 1, K + 1),
                            first_violation=(0, n, _value_string(v)))
    tables = [_sampled_difference_table(f_prime, x, K, _grid_step(x, K, h))
              for x in points]
    for k in range(K + 1):
        for n, table in enumerate(tables):
            signed = table.alternating(k, 0)
            if signed < -slack:
                return CmReport(suite_name=suite_name, passed=False,
                                horizon=(len(points) - 1, K + 1),
                                first_violation=(k + 1, n, _value_string(signed)))
    return CmReport(suite_name=suite_name, passed=True,
                    horizon=(len(points) - 1, K + 1), first_violation=None)


# ----------------------------------------------------------------------
# determinants of the shifted kernel integrals (numeric)
# ----------------------------------------------------------------------

def _float_determinant(rows: list[list[float]]) -> float:
    m = len(rows)
    mat = [row[:] for row in rows]
    sign = 1.0
    det = 1.0
    for col in range(m):
        pivot_row = max(range(col, m), key=lambda r: abs(mat[r][col]))
        if mat[pivot_row][col] == 0.0:
            return 0.0
        if pivot_row != col:
            mat[col], mat[pivot_row] = mat[pivot_row], mat[col]
            sign = -sign
        pivot = mat[col][col]
        det *= pivot
        for r in range(col + 1, m):
            factor = mat[r][col] / pivot
            for c in range(col, m):
                mat[r][c] -= factor * mat[col][c]
    return sign * det


def check_shifted_kernel_determinants(x: float, m_max: int = 2, entry_max: int = 2,
                                      n: int = 1, tol: float = 1e-10,
                                      slack: float = DEFAULT_QUADRATURE_SLACK) -> CmReport:
    """Nonnegativity of determinants built from the shifted kernel integrals.

    For every nondecreasing index tuple (a_1..a_m) with m <= m_max and
    entries <= entry_max, forms the matrix with entries

        (n + a_i + a_j - 1)! / (n - 1)!  *  h_{n + a_i + a_j}(x)

    and its sign-prefixed variant ((-1)**(a_i+a_j) factor), and requires
    both determinants to clear -slack.  Matrix entries come from
    quadrature at absolute tolerance tol and are cached across tuples.
    Violations report (variant stage, tuple index): stage 0 is the plain
    variant, stage 1 the signed one.
    """
    if x < 0.0:
        raise ValueError("x must be >= 0")
    if n < 1:
        raise ValueError("n must be >= 1")
    if m_max < 1 or entry_max < 0:
        raise ValueError("m_max must be >= 1 and entry_max >= 0")
    cache: dict[int, float] = {}

    def entry(s: int) -> float:
        if s not in cache:
            ratio = math.factorial(n + s - 1) // math.factorial(n - 1)
            cache[s] = ratio * shifted_kernel_integral(n + s, x, tol).value
        return cache[s]

    tuples = [t for m in range(1, m_max + 1)
              for t in combinations_with_replacement(range(entry_max + 1), m)]
    for stage, variant in enumerate((DeterminantVariant.PLAIN, DeterminantVariant.SIGNED)):
        for idx, a in enumerate(tuples):
            mat = []
            for ai in a:
                row = []
                for aj in a:
                    v = entry(ai + aj)
                    if variant is DeterminantVariant.SIGNED and (ai + aj) % 2:
                        v = -v
                    row.append(v)
                mat.append(row)
            det = _float_determinant(mat)
            if det < -slack:
                return CmReport(suite_name="kernel-determinants", passed=False,
                                horizon=(len(tuples) - 1, 1),
                                first_violation=(stage, idx, _value_string(det)))
    return CmReport(suite_name="kernel-determinants", passed=True,
                    horizon=(len(tuples) - 1, 1), first_violation=None)
