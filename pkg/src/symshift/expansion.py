"""
Quasi-greedy and greedy expansions of 1, the value map, and the Parry
correspondence between bases and their quasi-greedy expansions.

A base ``q`` in ``(1, M+1]`` is an :class:`AlgebraicBase`. Four
representations are supported:

``rational``
    an exact :class:`fractions.Fraction`.
``poly``
    the unique root of an integer polynomial inside a rational isolating
    interval. Signs of polynomial expressions at ``q`` are decided
    exactly: interval evaluation on the enclosure first, then a gcd based
    zero test, then refinement.
``interval``
    just a rational interval. Comparisons that straddle a tie raise
    :class:`UndecidableComparison`.
``expansion``
    a base given by a digit generator for its quasi-greedy expansion
    (used for the Komornik-Loreti constant). The enclosure comes from
    truncation bounds.

Digit recursion: with remainder ``r_0 = 1`` and ``r_k = q r_{k-1} - a_k``,
the quasi-greedy digit is the largest ``d <= M`` with ``d < q r_{k-1}``;
the greedy digit uses ``<=`` instead.
"""

import threading
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .errors import (
    BaseOutOfRange,
    DegeneratePeriod,
    NotEventuallyPeriodicWithinDepth,
    NotInVhat,
    UndecidableComparison,
)
from .words import EventuallyPeriodicSeq, Word

__all__ = [
    "AlgebraicBase",
    "GreedyExpansion",
    "quasi_greedy_digits",
    "greedy_digits",
    "pi_q",
    "parry_polynomial",
    "base_from_alpha",
    "roundtrip_check",
]

_X = sympy.Symbol("x")


def _horner(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _interval_eval(coeffs, lo, hi):
    """Enclose ``sum c_i x^i`` for ``x`` in ``[lo, hi]`` with ``lo > 0``."""
    pos = [c if c > 0 else 0 for c in coeffs]
    neg = [-c if c < 0 else 0 for c in coeffs]
    return _horner(pos, lo) - _horner(neg, hi), _horner(pos, hi) - _horner(neg, lo)


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _reduce(coeffs, modulus):
    """Remainder of ``coeffs`` modulo a monic ``modulus`` (ascending lists)."""
    coeffs = _trim(coeffs)
    n = len(modulus) - 1
    while len(coeffs) > n:
        lead = coeffs[-1]
        shift = len(coeffs) - 1 - n
        for i in range(n):
            coeffs[shift + i] -= lead * modulus[i]
        coeffs.pop()
        coeffs = _trim(coeffs)
    return coeffs


def _sympy_poly(coeffs):
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator)
                                     if isinstance(c, Fraction) else sympy.Integer(c)
                                     for c in coeffs])) or [0], _X, domain="QQ")


def _to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact inputs; pass a Fraction or 'p/q'")
    return Fraction(x)


class AlgebraicBase:
    """An exact base ``q`` in ``(1, M+1]``.

    Use the constructors :meth:`rational`, :meth:`poly_root`,
    :meth:`interval_only` or :meth:`from_expansion`. The enclosure is
    refined in place under a lock, so an instance may be shared.
    """

    def __init__(self, M, kind, *, value=None, coeffs=None, lo=None, hi=None, digits=None):
        self.M = M
        self.kind = kind
        self._value = value
        self._coeffs = coeffs
        self._lo = lo
        self._hi = hi
        self._digits = digits
        self._ndigits = 64
        self._lock = threading.Lock()

    # construction -----------------------------------------------------
    @classmethod
    def rational(cls, value, M):
        v = _to_fraction(value)
        if not 1 < v <= M + 1:
            raise BaseOutOfRange(f"q = {v} is not in (1, {M + 1}]")
        return cls(M, "rational", value=v, lo=v, hi=v)

    @classmethod
    def poly_root(cls, coeffs, lo, hi, M):
        """The root of ``sum coeffs[i] x^i`` isolated in ``(lo, hi)``.

        The polynomial must change sign on the interval and its
        square-free part must have exactly one root there.
        """
        coeffs = [int(c) for c in coeffs]
        if not any(coeffs):
            raise ValueError("zero polynomial")
        lo, hi = max(_to_fraction(lo), Fraction(1)), min(_to_fraction(hi), Fraction(M + 1))
        if not lo < hi:
            raise BaseOutOfRange(f"isolating interval does not meet (1, {M + 1}]")
        p = _sympy_poly(coeffs)
        sqf = p.sqf_part()
        for end in (hi, lo):
            if _horner(coeffs, end) == 0:
                if sqf.count_roots(sympy.Rational(lo.numerator, lo.denominator),
                                   sympy.Rational(hi.numerator, hi.denominator)) == 1 and end > 1:
                    return cls.rational(end, M)
                raise ValueError("root on the boundary of a non-isolating interval")
        if sqf.count_roots(sympy.Rational(lo.numerator, lo.denominator),
                           sympy.Rational(hi.numerator, hi.denominator)) != 1:
            raise ValueError("interval does not isolate exactly one root")
        if (_horner(coeffs, lo) > 0) == (_horner(coeffs, hi) > 0):
            raise ValueError("no sign change on the isolating interval")
        # keep a monic square-free integer version for remainder arithmetic
        monic = [Fraction(int(c.p), int(c.q)) for c in reversed(sqf.monic().all_coeffs())]
        if all(c.denominator == 1 for c in monic):
            monic = [int(c) for c in monic]
        return cls(M, "poly", coeffs=monic, lo=lo, hi=hi)

    @classmethod
    def interval_only(cls, lo, hi, M):
        lo, hi = _to_fraction(lo), _to_fraction(hi)
        if not (1 < lo <= hi <= M + 1):
            raise BaseOutOfRange(f"[{lo}, {hi}] is not inside (1, {M + 1}]")
        return cls(M, "interval", lo=lo, hi=hi)

    @classmethod
    def from_expansion(cls, digit_fn, M):
        """Base whose quasi-greedy expansion is produced by ``digit_fn(n)``.

        ``digit_fn(n)`` must return the first ``n`` digits. The enclosure is
        derived from the partial sums, which bound the base from below,
        and the tails padded with ``M``, which bound it from above.
        """
        return cls(M, "expansion", digits=digit_fn, lo=Fraction(1), hi=Fraction(M + 1))

    # queries ----------------------------------------------------------
    @property
    def is_exact(self):
        return self.kind in ("rational", "poly")

    @property
    def polynomial(self):
        return list(self._coeffs) if self._coeffs is not None else None

    def enclosure(self):
        return self._lo, self._hi

    def refine(self, width):
        """Shrink the enclosure to width at most ``width`` when possible."""
        width = _to_fraction(width)
        with self._lock:
            if self.kind == "poly":
                self._bisect_poly(width)
            elif self.kind == "expansion":
                self._bisect_expansion(width)
        return self._lo, self._hi

    def _bisect_poly(self, width):
        c = self._coeffs
        s_lo = _horner(c, self._lo) > 0
        while self._hi - self._lo > width:
            mid = (self._lo + self._hi) / 2
            v = _horner(c, mid)
            if v == 0:
                self.kind, self._value, self._lo, self._hi = "rational", mid, mid, mid
                return
            if (v > 0) == s_lo:
                self._lo = mid
            else:
                self._hi = mid

    def _partial(self, x, n):
        d = self._digits(n)
        return _horner([0] + list(d), 1 / x)

    def _bisect_expansion(self, width):
        M = self.M
        while self._hi - self._lo > width:
            mid = (self._lo + self._hi) / 2
            n = self._ndigits
            s = self._partial(mid, n)
            if s > 1:
                self._lo = mid
            elif s + M * mid ** (-n) / (mid - 1) < 1:
                self._hi = mid
            elif n < 1 << 14:
                self._ndigits *= 2
            else:
                raise UndecidableComparison("could not separate the base from a dyadic point")

    def sign_of(self, coeffs):
        """Exact sign of the polynomial ``sum coeffs[i] q^i``."""
        if self.kind == "rational":
            v = _horner(coeffs, self._value)
            return (v > 0) - (v < 0)
        if self.kind == "poly":
            coeffs = _reduce([_to_fraction(c) for c in coeffs], self._coeffs)
            if not coeffs:
                return 0
        zero_checked = False
        rounds = 0
        while True:
            lo, hi = self._lo, self._hi
            a, b = _interval_eval(coeffs, lo, hi)
            if a > 0:
                return 1
            if b < 0:
                return -1
            if self.kind == "interval":
                raise UndecidableComparison(
                    f"sign of an expression at q is not determined on [{lo}, {hi}]")
            if self.kind == "poly" and not zero_checked:
                if self._is_root(coeffs):
                    return 0
                zero_checked = True
            if self.kind == "rational":
                v = _horner(coeffs, self._value)
                return (v > 0) - (v < 0)
            rounds += 1
            if rounds > 400:
                raise UndecidableComparison("refinement limit reached")
            self.refine((hi - lo) / 16)

    def _is_root(self, coeffs):
        g = _sympy_poly(coeffs).gcd(_sympy_poly(self._coeffs))
        if g.degree() <= 0:
            return False
        lo, hi = self._lo, self._hi
        return g.count_roots(sympy.Rational(lo.numerator, lo.denominator),
                             sympy.Rational(hi.numerator, hi.denominator)) > 0

    def compare(self, other):
        """-1, 0 or 1 as ``self`` is below, equal to or above ``other``."""
        if isinstance(other, AlgebraicBase):
            if other.kind == "rational":
                other = other._value
            elif self.kind == "rational":
                return -other.compare(self._value)
            else:
                while True:
                    if self._hi < other._lo:
                        return -1
                    if self._lo > other._hi:
                        return 1
                    if self.kind == "poly" and other.kind == "poly":
                        g = _sympy_poly(self._coeffs).gcd(_sympy_poly(other._coeffs))
                        lo = max(self._lo, other._lo)
                        hi = min(self._hi, other._hi)
                        if g.degree() > 0 and lo <= hi and self.sign_of(
                                [Fraction(int(c.p), int(c.q)) for c in reversed(g.all_coeffs())]) == 0:
                            return 0
                    w = max(self._hi - self._lo, other._hi - other._lo) / 16
                    if self.kind == "interval" and other.kind == "interval":
                        raise UndecidableComparison("overlapping interval bases")
                    self.refine(w)
                    other.refine(w)
        return self.sign_of([-_to_fraction(other), 1])

    def __float__(self):
        if self.kind == "rational":
            return float(self._value)
        if self.kind != "interval":
            self.refine(Fraction(1, 10 ** 17))
        return float((self._lo + self._hi) / 2)

    def describe(self):
        d = {"M": self.M, "kind": self.kind,
             "enclosure": [str(self._lo), str(self._hi)]}
        if self.kind == "rational":
            d["value"] = str(self._value)
        if self.kind == "poly":
            d["polynomial"] = [str(c) for c in self._coeffs]
        return d

    def __repr__(self):
        if self.kind == "rational":
            return f"AlgebraicBase.rational({self._value}, M={self.M})"
        return f"AlgebraicBase<{self.kind}, M={self.M}, ~{float(self):.12g}>"


def _digit_recursion(q, n, strict):
    """Return (digits, index where remainder hit 0 or None)."""
    M = q.M
    if q.kind == "rational":
        x, r, out = q._value, Fraction(1), []
        for k in range(n):
            t = x * r
            d = min(M, (t.numerator - 1) // t.denominator if strict else t.numerator // t.denominator)
            out.append(d)
            r = t - d
            if r == 0:
                return tuple(out) + (0,) * (n - k - 1), k + 1
        return tuple(out), None
    r, out = [Fraction(1)], []
    for k in range(n):
        t = [Fraction(0)] + r
        if q.kind == "poly":
            t = _reduce(t, q._coeffs)
        lo, hi = _interval_eval(t, *q.enclosure())
        d = 0
        j = min(M, int(hi) + 1)
        while j >= 1:
            if j <= lo - 1 and j <= M:
                d = j
                break
            s = q.sign_of(_sub_const(t, j))
            if s > 0 or (s == 0 and not strict):
                d = j
                break
            j -= 1
        out.append(d)
        r = _sub_const(t, d)
        if q.kind == "poly":
            r = _reduce(r, q._coeffs)
        if not r or (d > 0 and q.sign_of(r) == 0):
            return tuple(out) + (0,) * (n - k - 1), k + 1
    return tuple(out), None


def _sub_const(coeffs, c):
    coeffs = list(coeffs) or [Fraction(0)]
    coeffs[0] = coeffs[0] - c
    return coeffs


def quasi_greedy_digits(q, n):
    """First ``n`` digits of the quasi-greedy expansion of 1 in base ``q``.

    Parameters
    ----------
    q : AlgebraicBase
    n : int

    Returns
    -------
    Word

    Examples
    --------
    >>> str(quasi_greedy_digits(AlgebraicBase.rational(2, 1), 5))
    '11111'
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if q.kind == "expansion":
        return Word(q._digits(n), q.M)
    digits, _ = _digit_recursion(q, n, strict=True)
    return Word(digits, q.M)


@dataclass(frozen=True)
class GreedyExpansion:
    """Greedy digits together with the position where they terminate."""

    word: Word
    finite_at: int | None

    @property
    def is_finite(self):
        return self.finite_at is not None

    def quasi_greedy(self):
        """The quasi-greedy expansion implied by a finite greedy one."""
        if self.finite_at is None:
            raise ValueError("greedy expansion is infinite; it equals the quasi-greedy one")
        k = self.finite_at
        block = self.word.digits[:k - 1] + (self.word.digits[k - 1] - 1,)
        return EventuallyPeriodicSeq((), block, self.word.M)


def greedy_digits(q, n):
    """First ``n`` greedy digits of 1 in base ``q`` and a finiteness flag.

    When the expansion terminates at position ``k``, the quasi-greedy
    expansion is checked to equal ``(b_1 ... b_{k-1} (b_k - 1))^oo`` on the
    first ``n`` digits.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    digits, k = _digit_recursion(q, n, strict=False)
    out = GreedyExpansion(Word(digits, q.M), k)
    if k is not None:
        expected = out.quasi_greedy().take(n)
        if quasi_greedy_digits(q, n).digits != expected:
            raise AssertionError("greedy/quasi-greedy relation failed")
    return out


def _series_value(x, q):
    """Closed form of ``sum x_i q^-i`` at a rational point ``q``."""
    if isinstance(x, Word):
        return _horner([0] + list(x.digits), 1 / q)
    r, m = len(x.preperiod), len(x.period)
    head = _horner([0] + list(x.preperiod), 1 / q)
    cyc = _horner([0] + list(x.period), 1 / q)
    if x.period == (0,) * m:
        return head
    return head + q ** (-r) * cyc / (1 - q ** (-m))


def pi_q(x, q, width=Fraction(1, 10 ** 12)):
    """Enclose the value ``sum x_i q^{-i}``.

    Parameters
    ----------
    x : Word or EventuallyPeriodicSeq
        A finite word is read as padded with zeros.
    q : AlgebraicBase
    width : Fraction
        Target width of the returned interval.

    Returns
    -------
    tuple of Fraction
        ``(lo, hi)`` containing the exact value. For a rational base
        ``lo == hi``.
    """
    if q.kind == "rational":
        v = _series_value(x, q._value)
        return v, v
    width = _to_fraction(width)
    w = Fraction(1, 4) if q.kind != "interval" else None
    # the closed form is singular at 1, so move the lower end off it first
    while q.kind != "interval" and q.enclosure()[0] <= 1:
        lo, hi = q.enclosure()
        q.refine((hi - lo) / 2)
    while True:
        lo, hi = q.enclosure()
        # the series is nonincreasing in q for nonnegative digits
        a, b = _series_value(x, hi), _series_value(x, lo)
        if b - a <= width or q.kind == "interval":
            return a, b
        w = min(w, hi - lo) / 4
        q.refine(w)


def parry_polynomial(alpha):
    """Integer polynomial (ascending) whose root in (1, M+1] is the base.

    For ``alpha = u p^oo`` with ``|u| = r`` and ``|p| = m`` this is
    ``x^{r+m} - x^r - (x^m - 1) A(x) - B(x)`` with
    ``A = sum u_i x^{r-i}`` and ``B = sum p_j x^{m-j}``. It is monic,
    negative at 1 and positive above the root.
    """
    u, p = alpha.preperiod, alpha.period
    r, m = len(u), len(p)
    c = [0] * (r + m + 1)
    c[r + m] += 1
    c[r] -= 1
    for i, ui in enumerate(u, start=1):
        c[r - i + m] -= ui
        c[r - i] += ui
    for j, pj in enumerate(p, start=1):
        c[m - j] -= pj
    return c


def base_from_alpha(alpha, M=None):
    """The base ``q`` whose quasi-greedy expansion of 1 is ``alpha``.

    Parameters
    ----------
    alpha : EventuallyPeriodicSeq
        Must lie in the symmetric shift space (checked).
    M : int, optional
        Defaults to ``alpha.M``.

    Returns
    -------
    AlgebraicBase
        Rational when the root is an integer, otherwise a polynomial root
        isolated by exact bisection.

    Examples
    --------
    >>> base_from_alpha(EventuallyPeriodicSeq((), (1,), 1))
    AlgebraicBase.rational(2, M=1)
    """
    from .classify import is_in_Vhat

    M = alpha.M if M is None else M
    if all(d == 0 for d in alpha.period):
        raise DegeneratePeriod("the period consists of zeros")
    if not is_in_Vhat(alpha).yes:
        raise NotInVhat(f"{alpha} is not in the symmetric shift space")
    if alpha.preperiod == () and alpha.period == (M,):
        return AlgebraicBase.rational(M + 1, M)
    c = parry_polynomial(alpha)
    for k in range(2, M + 2):
        if _horner(c, k) == 0:
            return AlgebraicBase.rational(k, M)
    q = AlgebraicBase(M, "poly", coeffs=c, lo=Fraction(1), hi=Fraction(M + 1))
    q.refine(Fraction(1, 2 ** 20))
    return q


def roundtrip_check(q, depth):
    """Detect an eventually periodic expansion of ``q`` and map it back.

    A tail ``p`` of length ``m`` after a preperiod of length ``r`` is
    accepted as a candidate when it repeats at least three times inside
    the first ``depth`` digits. Candidates are verified exactly by the
    Parry polynomial when ``q`` is exact, and then ``base_from_alpha`` of
    the detected sequence must enclose ``q``.

    Raises
    ------
    NotEventuallyPeriodicWithinDepth
        When no candidate survives. This is a verdict, not a failure.
    """
    d = quasi_greedy_digits(q, depth).digits
    from .classify import is_in_Vhat

    for total in range(1, depth + 1):
        for m in range(1, total + 1):
            r = total - m
            if r + 3 * m > depth:
                continue
            if any(d[i] != d[i + m] for i in range(r, depth - m)):
                continue
            alpha = EventuallyPeriodicSeq(d[:r], d[r:r + m], q.M)
            if all(x == 0 for x in alpha.period) or not is_in_Vhat(alpha).yes:
                continue
            if q.is_exact and q.sign_of(parry_polynomial(alpha)) != 0:
                continue
            back = base_from_alpha(alpha)
            w = Fraction(1, 10 ** 12)
            lo1, hi1 = back.refine(w)
            lo2, hi2 = q.refine(w)
            return lo1 <= hi2 and lo2 <= hi1
    raise NotEventuallyPeriodicWithinDepth(
        f"no eventually periodic pattern detected in the first {depth} digits")
