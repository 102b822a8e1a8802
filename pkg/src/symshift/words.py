"""
Finite words and eventually periodic sequences over ``{0, ..., M}``.

Both types are immutable. Digits are stored as plain tuples of ints, so
the built-in tuple comparison already gives the lexicographic order on
words of equal length.

Textual form::

    SEQ  := WORD | WORD "(" WORD ")"
    WORD := digit* | "[" int ("," int)* "]"

so ``1(10)`` is the sequence 1 10 10 10 ... and, for ``M > 9``,
``[2,10,0]([11,0])`` uses bracketed comma-separated digits.
"""

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from math import gcd

from .errors import (
    AlphabetMismatch,
    DigitOverflow,
    DigitUnderflow,
    LengthMismatch,
    ParseError,
)

__all__ = [
    "Ordering",
    "Word",
    "EventuallyPeriodicSeq",
    "lex_cmp",
    "compare_word_to_prefix",
    "reflect",
    "plus",
    "minus",
    "cylinder_distance",
    "thue_morse",
    "shift",
    "format_digits",
    "parse_word",
    "parse_seq",
]


class Ordering(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def _ordering(a, b):
    if a < b:
        return Ordering.LT
    if a > b:
        return Ordering.GT
    return Ordering.EQ


def _check_digits(digits, M):
    if not isinstance(M, int) or M < 1:
        raise ValueError(f"alphabet parameter M must be an integer >= 1, got {M!r}")
    for d in digits:
        if not isinstance(d, int) or d < 0 or d > M:
            raise ValueError(f"digit {d!r} outside [0, {M}]")


def _primitive_root(t):
    n = len(t)
    for d in range(1, n + 1):
        if n % d == 0 and t[:d] * (n // d) == t:
            return t[:d]
    return t


@dataclass(frozen=True)
class Word:
    """A finite word ``w_1 ... w_n`` over ``{0, ..., M}``.

    Indexing is 0-based like any Python sequence; slicing returns a Word.
    """

    digits: tuple
    M: int

    def __post_init__(self):
        digits = tuple(self.digits)
        _check_digits(digits, self.M)
        object.__setattr__(self, "digits", digits)

    @classmethod
    def parse(cls, text, M):
        return parse_word(text, M)

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, key):
        if isinstance(key, slice):
            return Word(self.digits[key], self.M)
        return self.digits[key]

    def __add__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        _same_alphabet(self, other)
        return Word(self.digits + other.digits, self.M)

    def __mul__(self, k):
        return Word(self.digits * k, self.M)

    def __str__(self):
        return format_digits(self.digits, self.M)

    def periodic(self):
        """Return the sequence ``w w w ...``."""
        return EventuallyPeriodicSeq((), self.digits, self.M)


@dataclass(frozen=True)
class EventuallyPeriodicSeq:
    """The sequence ``u p p p ...`` in canonical form.

    The period is reduced to its primitive root and the preperiod is made
    as short as possible, so two instances are equal exactly when they
    denote the same infinite sequence.

    Examples
    --------
    >>> s = EventuallyPeriodicSeq((1, 0), (1, 0), 1)
    >>> str(s)
    '(10)'
    """

    preperiod: tuple
    period: tuple
    M: int

    def __post_init__(self):
        pre = tuple(self.preperiod.digits if isinstance(self.preperiod, Word) else self.preperiod)
        per = tuple(self.period.digits if isinstance(self.period, Word) else self.period)
        if not per:
            raise ValueError("period must be nonempty")
        _check_digits(pre + per, self.M)
        per = _primitive_root(per)
        while pre and pre[-1] == per[-1]:
            per = (pre[-1],) + per[:-1]
            pre = pre[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def parse(cls, text, M):
        return parse_seq(text, M)

    @classmethod
    def periodic(cls, word, M=None):
        if isinstance(word, Word):
            return cls((), word.digits, word.M)
        return cls((), tuple(word), M)

    @property
    def is_periodic(self):
        return not self.preperiod

    def at(self, i):
        """Digit at 0-based position ``i``."""
        r = len(self.preperiod)
        if i < r:
            return self.preperiod[i]
        return self.period[(i - r) % len(self.period)]

    def take(self, n):
        """First ``n`` digits as a tuple."""
        r = len(self.preperiod)
        if n <= r:
            return self.preperiod[:n]
        m = len(self.period)
        reps = (n - r) // m + 1
        return (self.preperiod + self.period * reps)[:n]

    def prefix(self, n):
        return Word(self.take(n), self.M)

    def __str__(self):
        return format_digits(self.preperiod, self.M) + "(" + format_digits(self.period, self.M) + ")"


def format_digits(digits, M):
    if M <= 9:
        return "".join(str(d) for d in digits)
    if not digits:
        return ""
    return "[" + ",".join(str(d) for d in digits) + "]"


class _Reader:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def word(self, M):
        digits = []
        if self.peek() == "[":
            self.pos += 1
            while True:
                start = self.pos
                while self.peek().isdigit():
                    self.pos += 1
                if start == self.pos:
                    raise ParseError("expected an integer digit", self.pos)
                d = int(self.text[start:self.pos])
                if d > M:
                    raise ParseError(f"digit {d} exceeds M={M}", start)
                digits.append(d)
                if self.peek() == ",":
                    self.pos += 1
                elif self.peek() == "]":
                    self.pos += 1
                    break
                else:
                    raise ParseError("expected ',' or ']'", self.pos)
            return tuple(digits)
        while self.peek().isdigit():
            d = int(self.peek())
            if d > M:
                raise ParseError(f"digit {d} exceeds M={M}", self.pos)
            digits.append(d)
            self.pos += 1
        return tuple(digits)


def _clean(text):
    return "".join(text.split())


def parse_word(text, M):
    """Parse a finite word, e.g. ``"1101"`` or ``"[10,0,3]"``."""
    r = _Reader(_clean(text))
    digits = r.word(M)
    if r.pos != len(r.text):
        raise ParseError(f"unexpected character {r.peek()!r}", r.pos)
    return Word(digits, M)


def parse_seq(text, M):
    """Parse ``WORD`` followed by an optional parenthesised period.

    A bare word ``w`` (no parentheses) is read as ``w 0 0 0 ...``.
    """
    r = _Reader(_clean(text))
    pre = r.word(M)
    if r.peek() == "":
        return EventuallyPeriodicSeq(pre, (0,), M)
    if r.peek() != "(":
        raise ParseError(f"expected '(' but found {r.peek()!r}", r.pos)
    r.pos += 1
    per = r.word(M)
    if not per:
        raise ParseError("empty period", r.pos)
    if r.peek() != ")":
        raise ParseError("expected ')'", r.pos)
    r.pos += 1
    if r.pos != len(r.text):
        raise ParseError(f"unexpected character {r.peek()!r}", r.pos)
    return EventuallyPeriodicSeq(pre, per, M)


def _same_alphabet(x, y):
    if x.M != y.M:
        raise AlphabetMismatch(f"M={x.M} versus M={y.M}")


def _horizon(x, y):
    mx, my = len(x.period), len(y.period)
    return len(x.preperiod) + len(y.preperiod) + mx * my // gcd(mx, my)


def lex_cmp(x, y):
    """Compare two words of equal length, or two sequences.

    Returns an :class:`Ordering`. Sequences ``u p^oo`` are decided from the
    first ``|u_x| + |u_y| + lcm(|p_x|, |p_y|)`` digits, after which both
    are periodic with a common period.
    """
    _same_alphabet(x, y)
    if isinstance(x, Word) and isinstance(y, Word):
        if len(x) != len(y):
            raise LengthMismatch(f"cannot compare words of length {len(x)} and {len(y)}")
        return _ordering(x.digits, y.digits)
    if isinstance(x, EventuallyPeriodicSeq) and isinstance(y, EventuallyPeriodicSeq):
        if x == y:
            return Ordering.EQ
        n = _horizon(x, y)
        return _ordering(x.take(n), y.take(n))
    raise TypeError("lex_cmp needs two Words or two EventuallyPeriodicSeq values")


def compare_word_to_prefix(w, seq):
    """Compare ``w`` with the first ``len(w)`` digits of ``seq``."""
    _same_alphabet(w, seq)
    return _ordering(w.digits, seq.take(len(w)))


def reflect(x):
    """Digitwise ``d -> M - d``."""
    M = x.M
    if isinstance(x, Word):
        return Word(tuple(M - d for d in x.digits), M)
    return EventuallyPeriodicSeq(
        tuple(M - d for d in x.preperiod), tuple(M - d for d in x.period), M
    )


def plus(w):
    if not len(w):
        raise DigitOverflow("empty word has no last digit")
    if w.digits[-1] == w.M:
        raise DigitOverflow(f"last digit already equals M={w.M}")
    return Word(w.digits[:-1] + (w.digits[-1] + 1,), w.M)


def minus(w):
    if not len(w):
        raise DigitUnderflow("empty word has no last digit")
    if w.digits[-1] == 0:
        raise DigitUnderflow("last digit is 0")
    return Word(w.digits[:-1] + (w.digits[-1] - 1,), w.M)


def cylinder_distance(x, y):
    """``2**-j`` where ``j`` is the first (1-based) index with ``x_j != y_j``.

    Returns ``Fraction(0)`` for equal sequences.
    """
    _same_alphabet(x, y)
    if x == y:
        return Fraction(0)
    a, b = x.take(_horizon(x, y)), y.take(_horizon(x, y))
    j = next(i for i in range(len(a)) if a[i] != b[i]) + 1
    return Fraction(1, 2 ** j)


def thue_morse(n):
    """First ``n`` terms of the Thue-Morse sequence, starting at index 0."""
    if n < 1:
        raise ValueError("n must be at least 1")
    t = [0] * n
    for i in range(1, n):
        t[i] = t[i // 2] if i % 2 == 0 else 1 - t[i // 2]
    return t


def shift(x, n):
    """The shift map applied ``n`` times, in canonical form."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    r, m = len(x.preperiod), len(x.period)
    if n <= r:
        return EventuallyPeriodicSeq(x.preperiod[n:], x.period, x.M)
    k = (n - r) % m
    return EventuallyPeriodicSeq((), x.period[k:] + x.period[:k], x.M)
