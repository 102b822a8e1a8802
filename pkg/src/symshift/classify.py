"""
Predicates on quasi-greedy expansions and the named constants.

Every predicate returns a :class:`TriState`. On an
:class:`~symshift.words.EventuallyPeriodicSeq` the verdict is exact; on a
finite prefix (a :class:`~symshift.words.Word`) a violation inside the
prefix gives ``No`` while the absence of one gives ``Unknown`` with the
horizon that was inspected.

Irreducibility of an eventually periodic ``alpha`` is decided exactly.
Write ``c`` for the longest common prefix of any shift ``shift^k(alpha)``
(``k >= 1``) with ``reflect(alpha)``. For ``j >= c + 2`` the shift
``shift^j(alpha)`` exceeds ``reflect(alpha)`` before position ``j``, while
``reflect(alpha_1 ... alpha_j)^+`` only differs from ``reflect(alpha)`` at
position ``j``; hence the defining inequality holds for free and only
``j <= c + 1`` needs checking. When some shift equals ``reflect(alpha)``
the sequence is periodic, ``alpha = (u reflect(u))^oo``, and no ``j``
beyond ``|u|`` passes the membership pre-check.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    BelowGoldenRatio,
    NotInU,
    NotInVhat,
    NotIrreducible,
    NotPeriodic,
    OutOfStarRange,
    PrefixTooShort,
    TooShort,
)
from .words import (
    EventuallyPeriodicSeq,
    Ordering,
    Word,
    lex_cmp,
    plus,
    reflect,
    shift,
    thue_morse,
)

__all__ = [
    "TriState",
    "Constants",
    "Approximant",
    "StrongWeak",
    "SpecCertificate",
    "IrreducibleInterval",
    "is_in_Vhat",
    "is_in_U",
    "is_in_closureU",
    "constants",
    "kl_digits",
    "xi",
    "is_irreducible",
    "is_star_irreducible",
    "natural_approx_below",
    "natural_approx_above",
    "is_fundamental",
    "classify_strong_weak",
    "spec_certificate",
    "in_IN",
    "plateau_from_left",
    "dimension_Uq",
    "IN_dim_lower_bound",
    "classify",
]

SCHEMA = "symshift.report/1"


@dataclass(frozen=True)
class TriState:
    """A ``Yes``/``No``/``Unknown`` verdict.

    ``horizon`` records how far a finite input was inspected (or the bound
    used by an exact argument) and ``witness`` explains a ``No``.
    """

    verdict: str
    horizon: int | None = None
    witness: object = None
    exact: bool = True

    @property
    def yes(self):
        return self.verdict == "Yes"

    @property
    def no(self):
        return self.verdict == "No"

    @property
    def unknown(self):
        return self.verdict == "Unknown"

    def to_dict(self):
        d = {"verdict": self.verdict, "horizon": self.horizon, "exact": self.exact}
        if self.witness is not None:
            d["witness"] = _jsonable(self.witness)
        return d

    def __str__(self):
        if self.unknown:
            return f"Unknown(<= {self.horizon})"
        return self.verdict


def _jsonable(x):
    if isinstance(x, (Word, EventuallyPeriodicSeq)):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


YES = TriState("Yes")


def _digits(alpha):
    return alpha.digits if isinstance(alpha, Word) else None


def _is_seq(alpha):
    return isinstance(alpha, EventuallyPeriodicSeq)


def _distinct_shifts(alpha):
    return [shift(alpha, n) for n in range(len(alpha.preperiod) + len(alpha.period))]


def _lcp(x, y, limit):
    a, b = x.take(limit), y.take(limit)
    for i in range(limit):
        if a[i] != b[i]:
            return i
    return limit


def _horizon_of(alpha):
    return len(alpha.preperiod) + len(alpha.period)


def _prefix_scan(w, upper_strict, lower_strict, start):
    """Scan suffixes of a finite prefix against the two-sided condition."""
    M = w.M
    d = w.digits
    n = len(d)
    for k in range(start, n):
        s = d[k:]
        up = d[:n - k]
        lo = tuple(M - x for x in up)
        if s > up or s < lo:
            return TriState("No", n, {"shift": k}, True)
    return TriState("Unknown", n, None, False)


def is_in_Vhat(alpha):
    """Whether ``reflect(alpha) <= shift^n(alpha) <= alpha`` for all ``n``.

    Examples
    --------
    >>> from symshift.words import parse_seq
    >>> is_in_Vhat(parse_seq("(10)", 1)).verdict
    'Yes'
    >>> is_in_Vhat(parse_seq("(0)", 1)).verdict
    'No'
    """
    if not _is_seq(alpha):
        return _prefix_scan(alpha, False, False, 0)
    ra = reflect(alpha)
    for n, s in enumerate(_distinct_shifts(alpha)):
        if lex_cmp(s, alpha) == Ordering.GT or lex_cmp(s, ra) == Ordering.LT:
            return TriState("No", _horizon_of(alpha), {"shift": n})
    return TriState("Yes", _horizon_of(alpha))


def is_in_U(alpha):
    """Strict version: ``reflect(alpha) < shift^n(alpha) < alpha`` for ``n >= 1``.

    ``M^oo`` (the base ``M + 1``) is in ``U`` by convention.
    """
    if not _is_seq(alpha):
        return _prefix_scan(alpha, True, True, 1)
    if alpha.preperiod == () and alpha.period == (alpha.M,):
        return TriState("Yes", 1)
    ra = reflect(alpha)
    if lex_cmp(ra, alpha) != Ordering.LT:
        return TriState("No", _horizon_of(alpha), {"shift": 0})
    for n, s in enumerate(_distinct_shifts(alpha) + [shift(alpha, _horizon_of(alpha))]):
        if n == 0:
            continue
        if lex_cmp(s, alpha) != Ordering.LT or lex_cmp(s, ra) != Ordering.GT:
            return TriState("No", _horizon_of(alpha), {"shift": n})
    return TriState("Yes", _horizon_of(alpha))


def is_in_closureU(alpha):
    """``reflect(alpha) < shift^n(alpha) <= alpha`` for all ``n >= 0``."""
    if not _is_seq(alpha):
        return _prefix_scan(alpha, False, True, 0)
    ra = reflect(alpha)
    for n, s in enumerate(_distinct_shifts(alpha)):
        if lex_cmp(s, alpha) == Ordering.GT or lex_cmp(s, ra) != Ordering.GT:
            return TriState("No", _horizon_of(alpha), {"shift": n})
    return TriState("Yes", _horizon_of(alpha))


# constants -----------------------------------------------------------


def kl_digits(M, n):
    """First ``n`` digits of the quasi-greedy expansion at the Komornik-Loreti constant."""
    k = M // 2
    tau = thue_morse(n + 1)
    if M % 2:
        return tuple(k + tau[i] for i in range(1, n + 1))
    return tuple(k + tau[i] - tau[i - 1] for i in range(1, n + 1))


def golden_alpha(M):
    k = M // 2
    return EventuallyPeriodicSeq((), (k,) if M % 2 == 0 else (k + 1, k), M)


def transitive_alpha(M):
    k = M // 2
    if M % 2 == 0:
        return EventuallyPeriodicSeq((k + 1,), (k,), M)
    return EventuallyPeriodicSeq((k + 1,), (k + 1, k), M)


@dataclass
class Constants:
    """The golden, transitive and Komornik-Loreti bases for a given ``M``."""

    M: int
    alpha_G: EventuallyPeriodicSeq
    q_G: object
    alpha_T: EventuallyPeriodicSeq
    q_T: object
    q_KL: object

    def kl_prefix(self, n):
        return Word(kl_digits(self.M, n), self.M)


def constants(M):
    """Return the named bases with their expansions and enclosures.

    Examples
    --------
    >>> c = constants(1)
    >>> str(c.alpha_T), str(c.kl_prefix(8))
    ('1(10)', '11010011')
    """
    from .expansion import AlgebraicBase, base_from_alpha

    aG, aT = golden_alpha(M), transitive_alpha(M)
    qKL = AlgebraicBase.from_expansion(lambda n: kl_digits(M, n), M)
    return Constants(M, aG, base_from_alpha(aG), aT, base_from_alpha(aT), qKL)


def xi(n, M):
    """The sequence ``l_1 ... l_L (reflect(l_1 ... l_L)^+)^oo``.

    ``l`` is the Komornik-Loreti expansion and ``L = 2^(n-1)`` for even
    ``M``, ``2^n`` for odd ``M``. ``xi(1)`` is the expansion of the
    transitive base and ``xi(n)`` decreases to the Komornik-Loreti one.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    L = 2 ** (n - 1) if M % 2 == 0 else 2 ** n
    head = Word(kl_digits(M, L), M)
    return EventuallyPeriodicSeq(head.digits, plus(reflect(head)).digits, M)


# irreducibility ------------------------------------------------------


def _periodized_minus(prefix, M):
    if prefix[-1] == 0:
        return None
    return EventuallyPeriodicSeq((), prefix[:-1] + (prefix[-1] - 1,), M)


def _irreducible_bound(alpha):
    """Largest ``j`` that can violate irreducibility (see module notes)."""
    ra = reflect(alpha)
    total = _horizon_of(alpha)
    limit = total + 2 * len(alpha.period) + 2
    c = 0
    for k in range(1, total + 1):
        s = shift(alpha, k)
        if s == ra:
            return k
        c = max(c, _lcp(s, ra, limit))
    return c + 1


def _irreducibility_holds(alpha_digits_fn, j, M):
    """Compare ``alpha_1..alpha_j (reflect(.)^+)^oo`` with alpha.

    ``alpha_digits_fn(n)`` returns the first ``n`` digits or fewer if not
    available. Returns True/False or None when undetermined.
    """
    w = Word(alpha_digits_fn(j), M)
    tail = plus(reflect(w)).digits
    test = EventuallyPeriodicSeq(w.digits, tail, M)
    n = 2 * j + 2 * len(tail) + 2
    a = alpha_digits_fn(n)
    b = test.take(len(a))
    if b < a:
        return True
    if b > a:
        return False
    return None


def _candidate(prefix, M):
    per = _periodized_minus(prefix, M)
    return per is not None and is_in_Vhat(per).yes


def is_irreducible(alpha, horizon=None, min_j=0):
    """Decide irreducibility.

    Parameters
    ----------
    alpha : EventuallyPeriodicSeq or Word
        An exact sequence in the symmetric shift, or a finite prefix.
    horizon : int, optional
        Only used for prefixes; defaults to the prefix length.
    min_j : int
        Only indices ``j > min_j`` are examined (used by the starred
        variant).

    Returns
    -------
    TriState
        ``No`` carries the failing ``j`` as witness. For exact input the
        answer is ``Yes``/``No`` with ``horizon`` equal to the largest
        index that needed checking.
    """
    M = alpha.M
    if _is_seq(alpha):
        if not is_in_Vhat(alpha).yes:
            raise NotInVhat(f"{alpha} is not in the symmetric shift space")
        bound = _irreducible_bound(alpha)
        for j in range(min_j + 1, bound + 1):
            pre = alpha.take(j)
            if not _candidate(pre, M):
                continue
            if not _irreducibility_holds(alpha.take, j, M):
                return TriState("No", bound, {"j": j})
        return TriState("Yes", bound)
    d = alpha.digits
    H = len(d) if horizon is None else min(horizon, len(d))
    if is_in_Vhat(alpha).no:
        raise NotInVhat("prefix violates the shift condition")
    for j in range(min_j + 1, H + 1):
        if not _candidate(d[:j], M):
            continue
        r = _irreducibility_holds(lambda n: d[:n], j, M)
        if r is False:
            return TriState("No", H, {"j": j})
    return TriState("Unknown", H, None, False)


def _star_bracket(alpha):
    """Return ``n`` with ``xi(n+1) <= alpha < xi(n)`` or None below the limit."""
    M = alpha.M
    if lex_cmp(alpha, xi(1, M)) != Ordering.LT:
        raise OutOfStarRange(f"{alpha} is not below xi(1) = {xi(1, M)}")
    n = 1
    while True:
        nxt = xi(n + 1, M)
        c = lex_cmp(nxt, alpha)
        if c != Ordering.GT:
            return n
        L = len(nxt.preperiod)
        if L > 4 * (_horizon_of(alpha) + 4):
            # alpha agrees with xi(n+1) beyond its own structure: it lies
            # below the Komornik-Loreti limit if it is below the limit prefix
            kl = kl_digits(M, L)
            if alpha.take(L) < kl:
                return None
        n += 1


def is_star_irreducible(alpha, horizon=None):
    """The starred irreducibility condition below the transitive base.

    Locates ``n`` with ``xi(n+1) <= alpha < xi(n)`` and checks the
    irreducibility inequality for ``j > 2^n`` (even ``M``) or ``2^(n+1)``
    (odd ``M``). Sequences below every ``xi(n)`` get ``No``.
    """
    if not _is_seq(alpha):
        raise NotPeriodic("the starred test needs an eventually periodic sequence")
    if not is_in_Vhat(alpha).yes:
        raise NotInVhat(f"{alpha} is not in the symmetric shift space")
    M = alpha.M
    n = _star_bracket(alpha)
    if n is None:
        return TriState("No", None, {"reason": "below the Komornik-Loreti expansion"})
    threshold = 2 ** n if M % 2 == 0 else 2 ** (n + 1)
    r = is_irreducible(alpha, min_j=threshold)
    return TriState(r.verdict, r.horizon, dict(r.witness or {}, bracket=n) if r.no else {"bracket": n})


# approximations ------------------------------------------------------


@dataclass(frozen=True)
class Approximant:
    """One term of a natural approximation."""

    index: int
    n: int
    alpha: EventuallyPeriodicSeq
    fundamental: bool | None = None

    def to_dict(self):
        d = {"index": self.index, "n": self.n, "alpha": str(self.alpha)}
        if self.fundamental is not None:
            d["fundamental"] = self.fundamental
        return d


def _reflection_period(alpha):
    """Smallest ``k >= 0`` with ``shift^k(alpha) == reflect(alpha)`` or None."""
    ra = reflect(alpha)
    for k in range(_horizon_of(alpha) + 1):
        if shift(alpha, k) == ra:
            return k
    return None


def natural_approx_below(alpha, count=None, max_n=None):
    """Periodic approximants ``(alpha_1 ... alpha_n^-)^oo`` from below.

    Parameters
    ----------
    alpha : EventuallyPeriodicSeq or Word
    count : int, optional
        Stop after this many terms.
    max_n : int, optional
        Largest index ``n`` scanned. Defaults to the prefix length for
        words and to ``6 (r + m)`` for sequences when ``count`` is unset.

    Returns
    -------
    list of Approximant
        For a sequence whose shift hits its reflection the list is finite
        and ends with ``alpha`` itself.
    """
    M = alpha.M
    if _is_seq(alpha):
        if not is_in_Vhat(alpha).yes:
            raise NotInVhat(f"{alpha} is not in the symmetric shift space")
        get = alpha.take
        kref = _reflection_period(alpha)
        if kref is not None:
            out = []
            for n in range(1, kref + 1):
                pre = get(n)
                if _candidate(pre, M):
                    out.append(Approximant(len(out) + 1, n, _periodized_minus(pre, M)))
            if not out or out[-1].alpha != alpha:
                out.append(Approximant(len(out) + 1, len(alpha.period), alpha))
            return out[:count] if count else out
        if max_n is None:
            max_n = 10 ** 6 if count else 6 * _horizon_of(alpha)
    else:
        d = alpha.digits
        get = lambda n: d[:n]
        max_n = len(d) if max_n is None else min(max_n, len(d))
    out = []
    n = 0
    while n < max_n and (count is None or len(out) < count):
        n += 1
        pre = get(n)
        if _candidate(pre, M):
            out.append(Approximant(len(out) + 1, n, _periodized_minus(pre, M)))
    return out


def is_fundamental(w):
    """Whether ``reflect(w_1..w_{n-i}) <= w_{i+1}..w_n < w_1..w_{n-i}`` for ``1 <= i < n``.

    Raises
    ------
    TooShort
        For words of length at most 2.
    """
    n = len(w)
    if n <= 2:
        raise TooShort("fundamental words have length greater than 2")
    d, M = w.digits, w.M
    for i in range(1, n):
        s, p = d[i:], d[:n - i]
        if not (tuple(M - x for x in p) <= s < p):
            return False
    return True


def natural_approx_above(alpha, count):
    """Periodic approximants from above built from fundamental prefixes.

    ``m_1`` is the first index with ``alpha_m < alpha_1``; each next
    ``m`` is the first position where ``alpha`` drops below the
    periodisation of the previous fundamental prefix. Periodic sequences
    outside ``U`` use ``m_j = j m`` instead; only the ``j = 1`` block of
    those is fundamental and ``fundamental`` records this.
    """
    M = alpha.M
    if _is_seq(alpha) and not is_in_U(alpha).yes:
        if not is_in_Vhat(alpha).yes:
            raise NotInU(f"{alpha} is outside the symmetric shift space")
        if not alpha.is_periodic:
            raise NotInU(f"{alpha} is not in U and not periodic")
        m = len(alpha.period)
        out = []
        for j in range(1, count + 1):
            w = Word(alpha.take(m * j), M)
            fund = is_fundamental(w) if len(w) > 2 else None
            out.append(Approximant(j, m * j, alpha, fund))
        return out
    get = alpha.take if _is_seq(alpha) else (lambda n: alpha.digits[:n])
    avail = None if _is_seq(alpha) else len(alpha.digits)
    first = get(1)[0]
    m = None
    n = 1
    while avail is None or n < avail:
        n += 1
        if get(n)[n - 1] < first:
            m = n
            break
    out = []
    while m is not None and len(out) < count:
        w = Word(get(m), M)
        fund = is_fundamental(w) if m > 2 else None
        out.append(Approximant(len(out) + 1, m, EventuallyPeriodicSeq((), w.digits, M), fund))
        per = EventuallyPeriodicSeq((), w.digits, M)
        nxt = None
        ell = m
        while avail is None or ell < avail:
            ell += 1
            if get(ell)[ell - 1] != per.at(ell - 1):
                nxt = ell
                break
            if avail is None and ell > 50 * m + 200:
                break
        if nxt is None:
            break
        a_l, p_l = get(nxt)[nxt - 1], per.at(nxt - 1)
        if not (a_l < first and M - p_l <= a_l < p_l):
            break
        m = nxt
    return out


# strong and weak irreducibility ---------------------------------------


@dataclass(frozen=True)
class StrongWeak:
    """Strong/weak irreducibility verdict.

    ``verdict`` is ``"Strong"``, ``"Weak"`` or ``"Unknown"``. For strong
    sequences ``type`` is 1, 2 or 3, ``N`` is the index from which every
    approximant is irreducible and ``n_N`` its length index.
    """

    verdict: str
    type: int | None = None
    N: int | None = None
    n_N: int | None = None
    last_non_irreducible: EventuallyPeriodicSeq | None = None
    non_irreducible: tuple = ()
    horizon: int | None = None
    exact: bool = True
    witnesses: tuple = ()

    def __str__(self):
        if self.verdict == "Strong":
            return f"Strong(Type{self.type})"
        if self.verdict == "Weak":
            return f"Weak({len(self.witnesses)} witnesses)"
        return f"Unknown({self.horizon})"

    def to_dict(self):
        d = {"verdict": self.verdict, "type": self.type, "N": self.N, "n_N": self.n_N,
             "horizon": self.horizon, "exact": self.exact,
             "non_irreducible": [a.to_dict() for a in self.non_irreducible]}
        if self.last_non_irreducible is not None:
            d["last_non_irreducible"] = str(self.last_non_irreducible)
        if self.witnesses:
            d["witnesses"] = list(self.witnesses)
        return d


def _type_of(nonirr, M):
    if not nonirr:
        return 1
    aT = transitive_alpha(M)
    if all(lex_cmp(a.alpha, aT) == Ordering.LT for a in nonirr):
        return 2
    return 3


def classify_strong_weak(alpha, depth=None, witness_schedule=None):
    """Strong or weak irreducibility together with the Type.

    For eventually periodic input the answer is exact: approximants are
    scanned until the first irreducible one whose index exceeds the
    preperiod plus the period, after which every approximant is
    irreducible. As a consistency check the scan continues up to three
    times that length.

    Parameters
    ----------
    alpha : EventuallyPeriodicSeq or Word
    depth : int, optional
        Scan bound for prefixes.
    witness_schedule : sequence of int, optional
        Indices of non-irreducible approximants guaranteed to recur by a
        construction. When given, the verdict is ``Weak``.
    """
    M = alpha.M
    irr = is_irreducible(alpha)
    if irr.no:
        raise NotIrreducible(f"not irreducible (witness j={irr.witness['j']})")
    if witness_schedule:
        return StrongWeak("Weak", horizon=depth, exact=False,
                          witnesses=tuple(int(x) for x in witness_schedule))
    if _is_seq(alpha):
        total = _horizon_of(alpha)
        apps = []
        stop = None
        n_scan = 0
        for a in natural_approx_below(alpha, count=None, max_n=max(3 * total, 8)):
            apps.append(a)
        kref = _reflection_period(alpha)
        if kref is None:
            # make sure the exact stopping point is covered
            extra = natural_approx_below(alpha, count=len(apps) + 64)
            apps = extra
        flags = []
        for a in apps:
            ok = is_irreducible(a.alpha).yes if a.alpha != alpha else True
            flags.append(ok)
            if stop is None and ok and (a.n > total or a.alpha == alpha):
                stop = a.index
            n_scan = a.n
            if stop is not None and a.n >= 3 * total and a.index > stop:
                break
        nonirr = tuple(a for a, ok in zip(apps, flags) if not ok)
        if stop is not None and any(a.index > stop for a in nonirr):
            raise AssertionError("non-irreducible approximant after the stabilisation index")
        t = _type_of(nonirr, M)
        N = nonirr[-1].index + 1 if nonirr else 1
        nN = next((a.n for a in apps if a.index == N), None)
        return StrongWeak("Strong", t, N, nN, nonirr[-1].alpha if nonirr else None,
                          nonirr, n_scan, True)
    d = alpha.digits
    H = len(d) if depth is None else min(depth, len(d))
    apps = natural_approx_below(Word(d[:H], M))
    nonirr = tuple(a for a in apps if not is_irreducible(a.alpha).yes)
    return StrongWeak("Unknown", None, None, None,
                      nonirr[-1].alpha if nonirr else None, nonirr, H, False)


# specification --------------------------------------------------------


@dataclass(frozen=True)
class SpecCertificate:
    """``Certificate``, ``Refuted`` or ``Unknown`` for the specification property.

    For a certificate ``K`` is the least integer with
    ``d(shift^k(alpha), reflect(alpha)) >= 2^-K`` for all ``k >= 1``.
    """

    verdict: str
    K: int | None = None
    reason: str = ""
    data: dict = field(default_factory=dict)
    horizon: int | None = None
    exact: bool = True

    def __str__(self):
        if self.verdict == "Certificate":
            return f"Certificate(K={self.K})"
        return f"{self.verdict}({self.reason})" if self.reason else self.verdict

    def to_dict(self):
        return {"verdict": self.verdict, "K": self.K, "reason": self.reason,
                "data": _jsonable(self.data), "horizon": self.horizon, "exact": self.exact}


def _max_reflection_run(d, M, start=1):
    """Longest determined common prefix of ``shift^k(d)`` and ``reflect(d)``."""
    n = len(d)
    rd = tuple(M - x for x in d)
    best = 0
    for k in range(start, n):
        j = 0
        while k + j < n and d[k + j] == rd[j]:
            j += 1
        if k + j < n:
            best = max(best, j)
    return best


def spec_certificate(alpha, K_max=64, horizon=None):
    """Certificate, refutation or ``Unknown`` for the specification property.

    Parameters
    ----------
    alpha : EventuallyPeriodicSeq, Word or ConstructionTrace
    K_max : int
    horizon : int, optional
        Prefix length examined for non-exact inputs.
    """
    from .construct import ConstructionTrace

    if isinstance(alpha, ConstructionTrace):
        return _spec_from_trace(alpha, K_max)
    M = alpha.M
    if not _is_seq(alpha):
        return _spec_from_prefix(alpha, K_max, horizon)
    if not is_in_Vhat(alpha).yes:
        raise NotInVhat(f"{alpha} is not in the symmetric shift space")
    if alpha == golden_alpha(M) and M % 2 == 0:
        return SpecCertificate("Certificate", 0, "one-point shift", {"strong": "Strong(Type1)"})
    irr = is_irreducible(alpha)
    if irr.no:
        return SpecCertificate("Refuted", None, "not irreducible", {"j": irr.witness["j"]})
    sw = classify_strong_weak(alpha)
    ra = reflect(alpha)
    total = _horizon_of(alpha)
    limit = total + 2 * len(alpha.period) + 2
    c = 0
    for k in range(1, total + 1):
        s = shift(alpha, k)
        if s == ra:
            return SpecCertificate("Refuted", None, "a shift equals the reflection",
                                   {"shift": k, "strong": str(sw)})
        c = max(c, _lcp(s, ra, limit))
    K = c + 1
    if K > K_max:
        return SpecCertificate("Unknown", None, f"K={K} exceeds K_max", {"strong": str(sw)})
    return SpecCertificate("Certificate", K, "", {"strong": str(sw), "N": sw.N, "max_run": c})


def _spec_from_prefix(w, K_max, horizon):
    d = w.digits if horizon is None else w.digits[:horizon]
    M = w.M
    lead = 0
    while lead < len(d) and d[lead] == M:
        lead += 1
    if lead % 2 == 1 and lead < len(d) and d[lead] == 0:
        N = (lead + 1) // 2
        if N >= 2 and in_IN(Word(d, M), N).verdict != "No":
            c = _max_reflection_run(d, M)
            return SpecCertificate("Certificate", c + 1, "I_N member up to horizon",
                                   {"N": N, "bound": 2 * N, "max_run": c}, len(d), False)
    return SpecCertificate("Unknown", None, "prefix only", {}, len(d), False)


def _spec_from_trace(trace, K_max):
    target = trace.target_class
    if target == "WeakIrreducible":
        counts = [s.get("weak_witnesses") for s in trace.steps]
        return SpecCertificate("Refuted", None, "weak irreducibility witnesses recur",
                               {"witness_counts": counts}, len(trace.limit_prefix), False)
    if target == "StrongNoSpec":
        return SpecCertificate("Refuted", None, "matching runs with the reflection grow",
                               {"distances": [s.get("distance") for s in trace.steps]},
                               len(trace.limit_prefix), False)
    if target == "StrongIrreducible":
        d = trace.limit_prefix.digits
        c = _max_reflection_run(d, trace.limit_prefix.M)
        if c + 1 <= K_max:
            return SpecCertificate("Certificate", c + 1, "bounded runs on the agreed prefix",
                                   {"max_run": c}, len(d), False)
    return SpecCertificate("Unknown", None, "no certificate available",
                           {}, len(trace.limit_prefix), False)


def in_IN(alpha, N, horizon=None):
    """Membership pattern for the sets ``I_N``.

    The expansion must start with ``M^(2N-1) 0`` and each window
    ``alpha_{rN+1} ... alpha_{(r+1)N}`` with ``r >= 2`` must lie strictly
    between ``0^N`` and ``M^N``.
    """
    M = alpha.M
    if _is_seq(alpha):
        total = len(alpha.preperiod) + N * len(alpha.period) + 3 * N
        d = alpha.take(total)
        exact = True
    else:
        d = alpha.digits if horizon is None else alpha.digits[:horizon]
        exact = False
    if len(d) < 2 * N:
        raise PrefixTooShort(f"need at least {2 * N} digits")
    if d[:2 * N] != (M,) * (2 * N - 1) + (0,):
        return TriState("No", len(d), {"prefix": Word(d[:2 * N], M)})
    r = 2
    while (r + 1) * N <= len(d):
        win = d[r * N:(r + 1) * N]
        if win == (0,) * N or win == (M,) * N:
            return TriState("No", len(d), {"window": r})
        r += 1
    return TriState("Yes", len(d), None, exact)


@dataclass(frozen=True)
class IrreducibleInterval:
    left: EventuallyPeriodicSeq
    right: EventuallyPeriodicSeq
    left_base: object
    right_base: object


def plateau_from_left(alpha_L):
    """Right endpoint ``w^+ (reflect(w))^oo`` of the interval generated by ``(w)^oo``."""
    from .expansion import base_from_alpha

    if not _is_seq(alpha_L) or not alpha_L.is_periodic:
        raise NotPeriodic("the left endpoint must be a periodic sequence")
    ok = is_irreducible(alpha_L).yes
    if not ok:
        try:
            ok = is_star_irreducible(alpha_L).yes
        except OutOfStarRange:
            ok = False
    if not ok:
        raise NotIrreducible(f"{alpha_L} is neither irreducible nor starred irreducible")
    w = Word(alpha_L.period, alpha_L.M)
    right = EventuallyPeriodicSeq(plus(w).digits, reflect(w).digits, alpha_L.M)
    return IrreducibleInterval(alpha_L, right, base_from_alpha(alpha_L), base_from_alpha(right))


def _log_interval(lo, hi):
    a = math.nextafter(math.log(math.nextafter(float(lo), 0)), -math.inf)
    b = math.nextafter(math.log(math.nextafter(float(hi), math.inf)), math.inf)
    return a, b


def dimension_Uq(alpha, q=None):
    """Enclosure of ``h_top / log q`` for the base with expansion ``alpha``."""
    from .expansion import base_from_alpha
    from .shiftlang import build_automaton, entropy

    if lex_cmp(alpha, golden_alpha(alpha.M)) == Ordering.LT:
        raise BelowGoldenRatio(f"{alpha} lies below the generalised golden ratio")
    if not is_in_Vhat(alpha).yes:
        raise NotInVhat(f"{alpha} is not in the symmetric shift space")
    q = base_from_alpha(alpha) if q is None else q
    ent = entropy(build_automaton(alpha))
    lo, hi = q.refine(Fraction(1, 10 ** 15))
    if q.kind == "rational" and lo == hi:
        llo = lhi = math.log(float(lo)) if float(lo) == lo else None
        if llo is None:
            llo, lhi = _log_interval(lo, hi)
        else:
            llo, lhi = math.nextafter(llo, -math.inf), math.nextafter(lhi, math.inf)
    else:
        llo, lhi = _log_interval(lo, hi)
    a = math.nextafter(ent.log[0] / lhi, -math.inf)
    b = math.nextafter(ent.log[1] / llo, math.inf)
    return max(0.0, a), b


def IN_dim_lower_bound(M, N):
    """``log((M+1)^N - 2) / (N log(M+1))`` as a rational interval.

    The interval is degenerate when ``(M+1)^N - 2`` is a power of ``M+1``.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    v = (M + 1) ** N - 2
    e, p = 0, 1
    while p < v:
        p *= M + 1
        e += 1
    if p == v:
        x = Fraction(e, N)
        return x, x
    num_lo, num_hi = _log_interval(v, v)
    den_lo, den_hi = _log_interval(M + 1, M + 1)
    lo = math.nextafter(num_lo / (N * den_hi), -math.inf)
    hi = math.nextafter(num_hi / (N * den_lo), math.inf)
    return Fraction(lo), Fraction(hi)


# full report ----------------------------------------------------------


def classify(alpha, horizon=None, cap=64, spec_n=None):
    """Assemble a JSON-compatible report for ``alpha``.

    Raises :class:`NotInVhat` for sequences outside the shift space.
    """
    from .expansion import base_from_alpha
    from .shiftlang import build_automaton, entropy, transitivity_mixing

    M = alpha.M
    vh = is_in_Vhat(alpha)
    if vh.no:
        raise NotInVhat(f"{alpha} is not in the symmetric shift space")
    rep = {"schema": SCHEMA, "alpha": str(alpha), "M": M,
           "in_Vhat": vh.to_dict(), "in_U": is_in_U(alpha).to_dict(),
           "in_closureU": is_in_closureU(alpha).to_dict()}
    irr = is_irreducible(alpha, horizon)
    rep["irreducible"] = irr.to_dict()
    if _is_seq(alpha):
        try:
            rep["star_irreducible"] = is_star_irreducible(alpha).to_dict()
        except OutOfStarRange:
            rep["star_irreducible"] = {"verdict": "NotApplicable", "reason": "at or above xi(1)"}
        rep["strong_weak"] = (classify_strong_weak(alpha).to_dict() if irr.yes
                              else {"verdict": "NotApplicable", "reason": "not irreducible"})
        sc = spec_certificate(alpha)
        rep["spec"] = sc.to_dict()
        aut = build_automaton(alpha)
        tm = transitivity_mixing(aut)
        rep["transitive"] = tm["transitive"]
        rep["mixing"] = tm["mixing"]
        rep["period_gcd"] = tm["period_gcd"]
        rep["SFT"] = alpha.is_periodic
        rep["sofic"] = True
        ent = entropy(aut)
        rep["entropy"] = {"log": list(ent.log), "normalized": list(ent.normalized)}
        q = base_from_alpha(alpha)
        rep["base"] = q.describe()
        rep["dimension"] = list(dimension_Uq(alpha, q))
        rep["approx_below"] = [a.to_dict() for a in natural_approx_below(alpha, count=8)]
    else:
        rep["strong_weak"] = (classify_strong_weak(alpha, horizon).to_dict()
                              if not irr.no else {"verdict": "NotApplicable"})
        rep["spec"] = spec_certificate(alpha, horizon=horizon).to_dict()
        rep["approx_below"] = [a.to_dict() for a in natural_approx_below(alpha)][:8]
    rep["summary"] = _summary(rep)
    return rep


def _yes_no(flag):
    return "Yes" if flag else "No"


def _summary(rep):
    """Short strings for each verdict; the human output prints exactly these."""
    out = {}
    for key in ("in_Vhat", "in_U", "in_closureU", "irreducible", "star_irreducible"):
        v = rep.get(key)
        if v is None:
            continue
        text = v["verdict"]
        if text == "Unknown":
            text = f"Unknown(<={v['horizon']})"
        elif text == "No" and v.get("witness") and "j" in v["witness"]:
            text = f"No(j={v['witness']['j']})"
        out[key] = text
    sw = rep["strong_weak"]
    if sw["verdict"] == "Strong":
        out["strong_weak"] = f"Strong(Type{sw['type']})"
    elif sw["verdict"] == "Unknown":
        out["strong_weak"] = f"Unknown({sw['horizon']})"
    else:
        out["strong_weak"] = sw["verdict"]
    sp = rep["spec"]
    out["spec"] = f"Certificate(K={sp['K']})" if sp["verdict"] == "Certificate" else sp["verdict"]
    for key in ("transitive", "mixing", "SFT", "sofic"):
        if key in rep:
            out[key] = _yes_no(rep[key])
    if "entropy" in rep:
        lo, hi = rep["entropy"]["log"]
        out["entropy"] = f"[{lo:.12f}, {hi:.12f}]"
        lo, hi = rep["dimension"]
        out["dimension"] = f"[{lo:.12f}, {hi:.12f}]"
    return out
