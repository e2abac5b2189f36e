"""Exact arithmetic on q-ary generalized Pascal triangles.

The n-th row of the q-ary triangle holds the coefficients of
(1 + x + x^2 + ... + x^(q-1))^n, so it has n(q-1)+1 entries, sums to q^n,
and obeys the recurrence

    C(q; k, n) = sum_{j=0}^{q-1} C(q; k-j, n-1)

with out-of-range terms taken as 0.  For q = 2 this is the ordinary
binomial triangle.  All coefficients are exact Python integers; the
probabilities derived from them are exact rationals.  The two analytic
bounds (the multinomial bound and the central-coefficient bound) are the
only places floating point appears, and those comparisons run at adaptive
mpmath precision with a relative guard band before a violation is declared.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import NoCentralCoefficient

# Relative slack applied before declaring an analytic bound violated, so
# rounding in the irrational constants can never produce a false alarm.
GUARD_BAND = 1e-9


class TriangleTable:
    """Lazily grown rows of one q-ary triangle.

    Rows are append-only: once computed they are never mutated, so a shared
    table may be read concurrently after the rows of interest exist.  Row
    extension itself is serialized by an internal lock.
    """

    def __init__(self, q: int, max_row: int | None = None):
        if q < 2:
            raise ValueError(f"alphabet size q must be >= 2, got {q}")
        self.q = q
        self._rows: list[list[int]] = [[1]]
        self._lock = threading.Lock()
        if max_row is not None:
            self.row(max_row)

    def row(self, n: int) -> list[int]:
        """Row n as a fresh list of n(q-1)+1 integers."""
        if n < 0:
            raise ValueError(f"row index must be >= 0, got {n}")
        if n >= len(self._rows):
            with self._lock:
                while n >= len(self._rows):
                    self._rows.append(self._next_row(self._rows[-1]))
        return list(self._rows[n])

    def _next_row(self, prev: list[int]) -> list[int]:
        # Sliding window over the q parents of each entry:
        # new[k] = new[k-1] + prev[k] - prev[k-q].
        q = self.q
        size = len(prev) + q - 1
        new = [0] * size
        window = 0
        for k in range(size):
            window += prev[k] if k < len(prev) else 0
            if k - q >= 0 and k - q < len(prev):
                window -= prev[k - q]
            new[k] = window
        return new

    def coefficient(self, k: int, n: int) -> int:
        """C(q; k, n), with 0 outside the range 0 <= k <= n(q-1)."""
        if n < 0:
            raise ValueError(f"row index must be >= 0, got {n}")
        if k < 0 or k > n * (self.q - 1):
            return 0
        return self._rows[n][k] if n < len(self._rows) else self.row(n)[k]


_tables: dict[int, TriangleTable] = {}
_tables_lock = threading.Lock()


def _table(q: int) -> TriangleTable:
    table = _tables.get(q)
    if table is None:
        with _tables_lock:
            table = _tables.setdefault(q, TriangleTable(q))
    return table


def coefficient(q: int, k: int, n: int) -> int:
    """Coefficient of x^k in (1 + x + ... + x^(q-1))^n.

    Returns 0 when k lies outside [0, n(q-1)], matching the implicit
    zero-padding of the recurrence.  Raises ValueError for q < 2 or n < 0.
    """
    return _table(q).coefficient(k, n)


def row(q: int, n: int) -> list[int]:
    """The full n-th row; length n(q-1)+1, entries summing to q^n."""
    return _table(q).row(n)


def central_coefficient(q: int, n: int) -> int:
    """The middle entry of row n, its maximum.

    Exists only when n(q-1) is even, i.e. unless n is odd and q is even;
    otherwise NoCentralCoefficient is raised.
    """
    width = n * (q - 1)
    if width % 2 != 0:
        raise NoCentralCoefficient(
            f"row n={n} of the {q}-ary triangle has an even number of entries"
        )
    return coefficient(q, width // 2, n)


@dataclass(frozen=True)
class ConvolutionCheck:
    holds: bool
    lhs: int
    rhs: int


def check_convolution_identity(q: int, n: int, j: int) -> ConvolutionCheck:
    """Check C(q; (n-j)(q-1), 2n) == sum_k C(q; k, n+j) * C(q; k, n-j).

    The identity comes from splitting (1+...+x^(q-1))^(2n) into the product
    of the (n+j)-th and (n-j)-th powers and reading off one coefficient via
    row symmetry.  It must always hold; a False result signals a bug in the
    coefficient computation, so this doubles as a self-test.
    """
    if not 0 <= j <= n:
        raise ValueError(f"need 0 <= j <= n, got j={j}, n={n}")
    lhs = coefficient(q, (n - j) * (q - 1), 2 * n)
    upper = _table(q).row(n - j)
    other = _table(q).row(n + j)
    rhs = sum(other[k] * upper[k] for k in range(len(upper)))
    return ConvolutionCheck(lhs == rhs, lhs, rhs)


@dataclass(frozen=True)
class DominanceCheck:
    holds: bool
    equal: bool
    lhs: int
    rhs: int


def check_dominance(q: int, n: int, j: int) -> DominanceCheck:
    """Compare sum_k C(q; k, n)^2 against sum_k C(q; k, n+j)*C(q; k, n-j).

    The squared sum dominates, with equality exactly at j = 0 (both sides
    then equal the central coefficient of row 2n).
    """
    if not 0 <= j <= n:
        raise ValueError(f"need 0 <= j <= n, got j={j}, n={n}")
    full = _table(q).row(n)
    lhs = sum(c * c for c in full)
    short = _table(q).row(n - j)
    other = _table(q).row(n + j)
    rhs = sum(other[k] * short[k] for k in range(len(short)))
    return DominanceCheck(lhs >= rhs, lhs == rhs, lhs, rhs)


def multinomial(counts: list[int]) -> int:
    """Exact multinomial (sum counts)! / prod(count_i!)."""
    if any(a < 0 for a in counts):
        raise ValueError("multinomial parts must be nonnegative")
    total = sum(counts)
    result = math.factorial(total)
    for a in counts:
        result //= math.factorial(a)
    return result


def check_multinomial_bound(counts: list[int]) -> bool:
    """Check the Stirling-type upper bound on a multinomial.

    With A = sum of the (positive) parts a_1..a_m, verifies

        multinomial <= (2*pi)^(-(m-1)/2) * A^(A+1/2) / prod a_i^(a_i+1/2).

    Zero parts are stripped first since they leave the multinomial
    unchanged.  Squaring both sides turns everything except pi^(m-1) into
    exact integers, so the comparison needs just one high-precision
    multiplication; a violation is declared only beyond GUARD_BAND.
    """
    parts = [a for a in counts if a != 0]
    if not parts:
        raise ValueError("need at least one positive part")
    if any(a < 0 for a in parts):
        raise ValueError("multinomial parts must be nonnegative")
    m = len(parts)
    total = sum(parts)
    coef = multinomial(parts)
    # bound  <=>  coef^2 * 2^(m-1) * prod a_i^(2a_i+1) * pi^(m-1) <= A^(2A+1)
    lhs_int = coef * coef * (2 ** (m - 1))
    for a in parts:
        lhs_int *= a ** (2 * a + 1)
    rhs_int = total ** (2 * total + 1)
    if m == 1:
        return lhs_int <= rhs_int
    prec = max(lhs_int.bit_length(), rhs_int.bit_length()) + 64
    with mpmath.workprec(prec):
        lhs = mpmath.mpf(lhs_int) * mpmath.pi ** (m - 1)
        return lhs <= mpmath.mpf(rhs_int) * (1 + GUARD_BAND)


@dataclass(frozen=True)
class CentralBoundsCheck:
    power_bound: bool   # central <= q^(n-1)
    sqrt_bound: bool    # central <= q^(n+1) / sqrt(n) * c_q
    central: int


def central_bound_constant(q: int) -> float:
    """The constant c_q = (1/2) * (2/pi)^((q-1)/2) * e/(e-1)."""
    return 0.5 * (2.0 / math.pi) ** ((q - 1) / 2) * math.e / (math.e - 1.0)


def check_central_bounds(q: int, n: int) -> CentralBoundsCheck:
    """Check both upper bounds on the central coefficient of row n.

    The first bound (central <= q^(n-1)) is exact integer arithmetic.  The
    second (central <= q^(n+1)/sqrt(n) * c_q) is checked by squaring, which
    leaves pi^(q-1) and (e/(e-1))^2 as the only irrational factors.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    central = central_coefficient(q, n)
    power_bound = central <= q ** (n - 1)
    # squared form: central^2 * n * pi^(q-1) <= q^(2n+2) * (1/2)^2 * 2^(q-1) * (e/(e-1))^2
    lhs_int = central * central * n
    rhs_int = q ** (2 * n + 2) * 2 ** (q - 1)
    prec = max(lhs_int.bit_length(), rhs_int.bit_length()) + 64
    with mpmath.workprec(prec):
        ratio = mpmath.e / (mpmath.e - 1)
        lhs = mpmath.mpf(lhs_int) * mpmath.pi ** (q - 1)
        rhs = mpmath.mpf(rhs_int) * ratio * ratio / 4
        sqrt_bound = lhs <= rhs * (1 + GUARD_BAND)
    return CentralBoundsCheck(power_bound, bool(sqrt_bound), central)


@dataclass(frozen=True)
class ZeroDotProbability:
    """Exact probability that a random q-ary row is orthogonal to a sign pattern.

    For a row r drawn uniformly from {0,...,q-1}^(w_plus+w_minus), this is
    the probability that the sum over the w_plus "+1" coordinates equals the
    sum over the w_minus "-1" coordinates.
    """

    numerator: int
    denominator: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)


def zero_dot_probability(q: int, w_plus: int, w_minus: int) -> ZeroDotProbability:
    """Probability of a zero dot product with w_plus ones and w_minus minus-ones.

    The numerator counts, via the convolution identity, the pairs of partial
    sums that coincide: sum_k C(q; k, w_plus) * C(q; k, w_minus).  The
    denominator is q^(w_plus + w_minus).  Requires w_plus + w_minus >= 1.
    """
    if w_plus < 0 or w_minus < 0:
        raise ValueError("weights must be nonnegative")
    if w_plus + w_minus == 0:
        raise ValueError("need w_plus + w_minus >= 1")
    lo, hi = sorted((w_plus, w_minus))
    short = _table(q).row(lo)
    other = _table(q).row(hi)
    numerator = sum(other[k] * short[k] for k in range(len(short)))
    return ZeroDotProbability(numerator, q ** (w_plus + w_minus))
