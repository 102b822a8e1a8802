"""
Iterative constructions of irreducible expansions.

Four procedures grow a chain of periodic expansions whose limit has a
prescribed dynamical behaviour:

* :func:`construct_strong` walks up through plateau endpoints and picks
  short fundamental prefixes (strongly irreducible limit);
* :func:`construct_weak` picks long prefixes so that non-irreducible
  approximants keep reappearing (weakly irreducible limit);
* :func:`construct_strong_nospec` takes maximal prefixes so that shifts of
  the limit come arbitrarily close to its reflection;
* :func:`construct_dense` walks down through periodic words
  ``theta`` that contain every short admissible word.

Each step records the chosen parameter, the new periodic expansion and the
predicates that were checked, so traces can be replayed and audited.
"""

from collections import deque
from dataclasses import dataclass, field

from .classify import (
    is_fundamental,
    is_in_Vhat,
    is_irreducible,
    natural_approx_above,
    natural_approx_below,
    plateau_from_left,
    transitive_alpha,
)
from .errors import (
    BelowTransitiveBase,
    ConnectorSearchExhausted,
    NoFundamentalPrefixInRange,
    NotAdmissible,
    NotIrreducible,
    NotPeriodic,
    NotPrimitive,
)
from .shiftlang import build_automaton, essential_words
from .words import (
    EventuallyPeriodicSeq,
    Ordering,
    Word,
    cylinder_distance,
    lex_cmp,
    reflect,
    shift,
)

__all__ = [
    "ConstructionTrace",
    "is_primitive",
    "reflection_recurrence",
    "reflection_recurrence_iter",
    "suffix_extend",
    "prefix_extend",
    "DeltaTheta",
    "build_delta_theta",
    "theta_checks",
    "construct_strong",
    "construct_weak",
    "construct_dense",
    "construct_strong_nospec",
]

STRONG = "StrongIrreducible"
WEAK = "WeakIrreducible"
DENSE = "DenseOrbit"
NOSPEC = "StrongNoSpec"


@dataclass(frozen=True)
class ConstructionTrace:
    """Immutable record of a construction.

    ``steps[0]`` describes the seed. ``limit_prefix`` is the longest common
    prefix of the last two intermediate expansions.
    """

    target_class: str
    seed: EventuallyPeriodicSeq
    steps: tuple
    limit_prefix: Word
    schedule: tuple = ()
    upper_bound: EventuallyPeriodicSeq | None = None

    @property
    def alphas(self):
        return [s["alpha"] for s in self.steps]

    @property
    def M(self):
        return self.seed.M

    def to_dict(self):
        steps = []
        for s in self.steps:
            d = {}
            for k, v in s.items():
                if isinstance(v, (Word, EventuallyPeriodicSeq)):
                    v = str(v)
                elif isinstance(v, tuple):
                    v = list(v)
                d[k] = v
            steps.append(d)
        return {
            "schema": "symshift.trace/1",
            "target_class": self.target_class,
            "seed": str(self.seed),
            "M": self.M,
            "schedule": list(self.schedule),
            "steps": steps,
            "limit_prefix": str(self.limit_prefix),
            "limit_prefix_length": len(self.limit_prefix),
            "upper_bound": None if self.upper_bound is None else str(self.upper_bound),
        }


# word-level helpers --------------------------------------------------


def is_primitive(w):
    """Whether ``reflect(w_1..w_{n-i}) < w_{i+1}..w_n <= w_1..w_{n-i}`` for ``0 <= i < n``.

    Examples
    --------
    >>> from symshift.words import Word
    >>> is_primitive(Word((1, 1), 1)), is_primitive(Word((1, 0), 1))
    (True, False)
    """
    if len(w) < 1:
        raise ValueError("primitive words are nonempty")
    d, M = w.digits, w.M
    n = len(d)
    for i in range(n):
        s, p = d[i:], d[:n - i]
        if not (tuple(M - x for x in p) < s <= p):
            return False
    return True


def reflection_recurrence(w):
    """Truncate a primitive word at its reflection recurrence index.

    ``s`` is the least index with ``w_{s+1}..w_n^- = reflect(w_1..w_{n-s})``;
    the result is ``w_1..w_s`` (the whole word when no such ``s < n`` exists).
    """
    if not is_primitive(w):
        raise NotPrimitive(f"{w} is not primitive")
    d, M = w.digits, w.M
    n = len(d)
    assert d[-1] > 0
    for s in range(n):
        tail = d[s:-1] + (d[-1] - 1,)
        if tail == tuple(M - x for x in d[:n - s]):
            return Word(d[:s], M)
    return w


def reflection_recurrence_iter(w, n):
    """Apply :func:`reflection_recurrence` ``n + 1`` times, stopping at a fixed point."""
    cur = reflection_recurrence(w)
    for _ in range(n):
        if len(cur) == 0 or not is_primitive(cur):
            break
        nxt = reflection_recurrence(cur)
        if nxt == cur:
            break
        cur = nxt
    return cur


def _in_language(aut, word):
    return bool(aut.read_essential(aut.essential, word))


def suffix_extend(upsilon, alpha, m):
    """Extend ``upsilon`` on the right until it ends in ``alpha_1..alpha_m`` or its reflection.

    Follows the case analysis on the least indices ``s+`` and ``s-`` at
    which a suffix of ``upsilon`` equals a prefix of ``alpha`` or of its
    reflection.
    """
    aut = build_automaton(alpha)
    u = upsilon.digits
    M = alpha.M
    if not _in_language(aut, u):
        raise NotAdmissible(f"{upsilon} is not in the language")
    n = len(u)
    if m <= n:
        raise ValueError("m must exceed the length of upsilon")
    a = alpha.take(m + n)
    abar = tuple(M - x for x in a)
    s_plus = next((s for s in range(n) if u[s:] == a[:n - s]), None)
    s_minus = next((s for s in range(n) if u[s:] == abar[:n - s]), None)
    if s_plus is None and s_minus is None:
        eta = a[:m]
    elif s_minus is None or (s_plus is not None and s_plus <= s_minus):
        eta = a[n - s_plus:m]
    else:
        eta = abar[n - s_minus:m]
    out = Word(eta, M)
    if not _in_language(aut, u + eta):
        raise NotAdmissible(f"no admissible right extension found for {upsilon}")
    return out


def _golden_block(M, m):
    k = M // 2
    return (k,) * m if M % 2 == 0 else (k + 1, k) * m


def prefix_extend(nu, alpha, m=1, budget=None):
    """Return ``eta`` with ``eta nu`` admissible and starting with the golden block.

    The block is ``k^m`` for ``M = 2k`` and ``((k+1)k)^m`` for ``M = 2k + 1``.
    Overlaps with the start of ``nu`` are tried first, then a breadth
    first search over middle words.
    """
    M = alpha.M
    if lex_cmp(alpha, transitive_alpha(M)) == Ordering.LT:
        raise BelowTransitiveBase(f"{alpha} lies below the transitive base")
    aut = build_automaton(alpha)
    v = nu.digits
    if not _in_language(aut, v):
        raise NotAdmissible(f"{nu} is not in the language")
    G = _golden_block(M, m)
    for ell in range(len(G) + 1):
        rest = G[ell:]
        if v[:len(rest)] == rest and _in_language(aut, G[:ell] + v):
            return Word(G[:ell], M)
    start = aut.read_essential(aut.essential, G)
    budget = budget or 64 * (aut.num_states + 1) * (M + 1)
    seen = {start}
    queue = deque([(start, ())])
    used = 0
    while queue:
        states, z = queue.popleft()
        if aut.read_essential(states, v):
            return Word(G + z, M)
        for d in range(M, -1, -1):
            used += 1
            nxt = aut.read_essential(states, (d,))
            if nxt and nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, z + (d,)))
        if used > budget:
            break
    raise NotAdmissible(f"no admissible left extension found for {nu}")


# delta and theta -----------------------------------------------------


@dataclass(frozen=True)
class DeltaTheta:
    """Result of :func:`build_delta_theta`.

    ``checks`` holds the four verified properties of ``theta``:
    ``fundamental``, ``coverage``, ``below`` (``theta^oo < alpha``) and
    ``irreducible``. ``constrained`` is False when connectors had to be
    searched without the occurrence restrictions.
    """

    delta: Word
    theta: Word
    words: tuple
    connectors: tuple
    checks: dict
    cover_length: int
    constrained: bool = True
    extended: int = 0

    @property
    def ok(self):
        return all(self.checks.values())


class _Builder:
    """Append words while tracking language states and forbidden blocks."""

    def __init__(self, aut, forbidden, budget, constrained):
        self.aut = aut
        self.M = aut.M
        self.forbidden = forbidden
        self.window = max(len(f) for f in forbidden)
        self.budget = budget
        self.constrained = constrained

    def _clean(self, tail, extra):
        if not self.constrained:
            return True
        buf = tail + extra
        w = self.window
        for end in range(len(tail) + 1, len(buf) + 1):
            if end >= w and buf[end - w:end] in self.forbidden:
                return False
        return True

    def _tail(self, tail, extra):
        buf = tail + extra
        return buf[-(self.window - 1):] if self.window > 1 else ()

    def advance(self, states, tail, word):
        nxt = self.aut.read_essential(states, word)
        if not nxt or not self._clean(tail, word):
            return None
        return nxt, self._tail(tail, word)

    def connect(self, states, tail, target):
        """Shortest connector ``c`` (largest digits first) with ``c target`` allowed."""
        start = (states, tail)
        seen = {start}
        queue = deque([(states, tail, ())])
        used = 0
        while queue:
            st, tl, conn = queue.popleft()
            if self.advance(st, tl, target) is not None:
                return conn
            for d in range(self.M, -1, -1):
                used += 1
                r = self.advance(st, tl, (d,))
                if r is not None and r not in seen:
                    seen.add(r)
                    queue.append((r[0], r[1], conn + (d,)))
            if used > self.budget:
                break
        return None


def theta_checks(theta, alpha, cover):
    """Verify the four properties of ``theta`` against ``alpha``."""
    aut = build_automaton(alpha)
    per = EventuallyPeriodicSeq((), theta.digits, alpha.M)
    words = essential_words(aut, cover)
    td = theta.digits
    factors = {td[i:i + cover] for i in range(len(td) - cover + 1)}
    coverage = all(w in factors for w in words)
    fund = len(theta) > 2 and is_fundamental(theta)
    below = lex_cmp(per, alpha) == Ordering.LT
    irr = False
    if is_in_Vhat(per).yes:
        irr = is_irreducible(per).yes
    return {"fundamental": fund, "coverage": coverage, "below": below, "irreducible": irr}


def build_delta_theta(alpha, t=2, cover=None, budget=None):
    """Assemble ``delta`` and the fundamental word ``theta = delta reflect(alpha_1)``.

    Parameters
    ----------
    alpha : EventuallyPeriodicSeq
        Periodic irreducible expansion with period word ``p`` of length ``m``.
    t : int
        Exponent of the leading block ``p^t``; at least 2.
    cover : int, optional
        Length of the language slice whose words are threaded into
        ``delta``. Defaults to ``m``. Every admissible word of length at
        most ``cover`` then occurs in ``theta``.
    budget : int, optional
        Transition budget of each connector search; defaults to
        ``4 m |B_cover|``.

    Returns
    -------
    DeltaTheta

    Notes
    -----
    The words of ``B_cover`` are visited in decreasing order, starting
    with ``p^t`` and ending with ``reflect(p)``. Each word is preceded by
    the shortest connector keeping ``delta`` in the language and free of
    further occurrences of ``p^t`` and ``reflect(p)^t``; these two
    restrictions make every long suffix of ``delta`` fall strictly between
    the reflected and the plain prefixes. Middle words are padded to
    extended words when that keeps the search feasible. If no connector
    satisfies the restrictions the search is repeated without them and
    the failed checks are reported.
    """
    if not alpha.is_periodic:
        raise NotPeriodic("build_delta_theta needs a periodic expansion")
    if t < 2:
        raise ValueError("t must be at least 2")
    if not is_irreducible(alpha).yes:
        raise NotIrreducible(f"{alpha} is not irreducible")
    M = alpha.M
    p = alpha.period
    m = len(p)
    pbar = tuple(M - x for x in p)
    cover = m if cover is None else cover
    aut = build_automaton(alpha)
    layer = sorted(essential_words(aut, cover), reverse=True)
    budget = budget or 4 * m * max(len(layer), 1)
    forbidden = {p * t, pbar * t}
    middle = [w for w in layer if w not in (p[:cover], pbar[:cover])] if cover <= m else layer
    for constrained in (True, False):
        res = _assemble(aut, alpha, p, pbar, t, middle, forbidden, budget, constrained, cover)
        if res is not None:
            delta, words, conns, ext = res
            theta = Word(delta + (M - p[0],), M)
            checks = theta_checks(theta, alpha, cover)
            if constrained and not all(checks.values()):
                continue
            return DeltaTheta(Word(delta, M), theta, tuple(Word(w, M) for w in words),
                              tuple(Word(c, M) for c in conns), checks, cover, constrained, ext)
    raise ConnectorSearchExhausted(budget)


def _assemble(aut, alpha, p, pbar, t, middle, forbidden, budget, constrained, cover):
    M = alpha.M
    b = _Builder(aut, forbidden, budget, constrained)
    head = p * t
    states = aut.read_essential(aut.essential, head)
    if not states:
        return None
    tail = b._tail((), head)
    built = list(head)
    words, conns = [head], []
    ext = 0

    def place(target):
        nonlocal states, tail
        c = b.connect(states, tail, target)
        if c is None:
            return False
        r = b.advance(states, tail, c + target)
        states, tail = r
        built.extend(c + target)
        conns.append(c)
        words.append(target)
        return True

    for w in middle:
        if _has_factor(built, w):
            continue
        cand = _extended_word(alpha, w) if cover == len(p) else None
        if cand is not None and place(cand):
            ext += 1
            continue
        if not place(w):
            return None
    if not place(pbar):
        return None
    return tuple(built), words, conns, ext


def _has_factor(built, w):
    k = len(w)
    for i in range(len(built) - k + 1):
        if tuple(built[i:i + k]) == w:
            return True
    return False


def _extended_word(alpha, w):
    """``eta w gamma`` with the golden block in front and ``alpha_1..alpha_m`` at the end."""
    M = alpha.M
    try:
        eta = prefix_extend(Word(w, M), alpha)
    except (NotAdmissible, BelowTransitiveBase):
        return None
    core = Word(eta.digits + w, M)
    m = len(alpha.period)
    target = m * (len(core) // m + 1)
    try:
        gamma = suffix_extend(core, alpha, target)
    except (NotAdmissible, ValueError):
        return None
    full = core.digits + gamma.digits
    if full[-m:] != alpha.period:
        return None
    return full


# iterative constructions ---------------------------------------------


def _lcp_len(x, y):
    n = len(x.preperiod) + len(y.preperiod) + 2 * (len(x.period) + len(y.period))
    a, b = x.take(n), y.take(n)
    i = 0
    while i < n and a[i] == b[i]:
        i += 1
    return i


def _limit_prefix(alphas):
    if len(alphas) == 1:
        a = alphas[0]
        return a.prefix(len(a.preperiod) + len(a.period))
    x, y = alphas[-2], alphas[-1]
    return x.prefix(_lcp_len(x, y))


def _check_seed(seed):
    if not isinstance(seed, EventuallyPeriodicSeq) or not seed.is_periodic:
        raise NotPeriodic("the seed must be a periodic sequence")
    if not is_in_Vhat(seed).yes or not is_irreducible(seed).yes:
        raise NotIrreducible(f"seed {seed} is not a periodic irreducible expansion")


def _valid_prefixes(source, lo, hi, bound=None):
    """Lengths ``m`` in ``[lo, hi]`` giving a fundamental prefix with irreducible periodisation.

    With ``bound`` the periodisation must also lie strictly below it.
    """
    M = source.M
    out = []
    for m in range(lo, hi + 1):
        w = source.prefix(m)
        if m <= 2 or not is_fundamental(w):
            continue
        per = EventuallyPeriodicSeq((), w.digits, M)
        if bound is not None and lex_cmp(per, bound) != Ordering.LT:
            continue
        if is_in_Vhat(per).yes and is_irreducible(per).yes:
            out.append(m)
    return out


def _pick(chooser, candidates):
    if chooser in (None, "smallest"):
        return candidates[0]
    if chooser == "largest":
        return candidates[-1]
    m = chooser(list(candidates))
    if m not in candidates:
        raise ValueError(f"chooser returned {m}, not one of {candidates}")
    return m


def _monotone(alphas, increasing):
    want = Ordering.LT if increasing else Ordering.GT
    return all(lex_cmp(a, b) == want for a, b in zip(alphas, alphas[1:]))


def _seed_step(seed):
    return {"step": 0, "parameter": len(seed.period), "alpha": seed,
            "irreducible": True, "period": len(seed.period)}


def construct_strong(seed, steps=3, chooser="smallest"):
    """Climb through plateau endpoints using short fundamental prefixes.

    At step ``n`` the right endpoint ``p_n`` of the plateau generated by
    ``alpha(q_n)`` is formed, and ``m_{n+1}`` is chosen in
    ``{m_n + 1, ..., 2 m_n}`` such that ``alpha(p_n)_1..m_{n+1}`` is a
    fundamental word with an irreducible periodisation.

    Parameters
    ----------
    seed : EventuallyPeriodicSeq
        Periodic irreducible expansion.
    steps : int
    chooser : {"smallest", "largest"} or callable
        Picks ``m_{n+1}`` from the sorted list of valid lengths.

    Returns
    -------
    ConstructionTrace
    """
    _check_seed(seed)
    return _climb(seed, steps, chooser, STRONG, lambda m, n: (m + 1, 2 * m))


def construct_weak(seed, N_schedule, steps=None):
    """Climb while keeping close to plateaus, forcing recurring non-irreducible approximants.

    ``m_{n+1}`` is the smallest valid length in
    ``{(N_n + 1) m_n, ..., (N_n + 2) m_n}``. Each step records the indices
    ``i`` for which ``(alpha_1..alpha_i^-)^oo`` lies in the shift space
    but is not irreducible, and checks there are at least
    ``N_1 + ... + N_n`` of them.
    """
    _check_seed(seed)
    N_schedule = tuple(int(x) for x in N_schedule)
    if not N_schedule or min(N_schedule) < 1:
        raise ValueError("N_schedule must be a nonempty list of positive integers")
    steps = len(N_schedule) if steps is None else steps
    if steps > len(N_schedule):
        raise ValueError("N_schedule is shorter than the number of steps")
    return _climb(seed, steps, "smallest", WEAK,
                  lambda m, n: ((N_schedule[n] + 1) * m, (N_schedule[n] + 2) * m),
                  N_schedule[:steps])


def _weak_witnesses(alpha):
    out = []
    for a in natural_approx_below(alpha, max_n=len(alpha.period)):
        if a.alpha != alpha and not is_irreducible(a.alpha).yes:
            out.append(a.n)
    return out


def _climb(seed, steps, chooser, target, window, schedule=()):
    alphas = [seed]
    records = [_seed_step(seed)]
    cur = seed
    needed = 0
    # every intermediate stays below the first approximant from above of p_1
    bound = natural_approx_above(plateau_from_left(seed).right, 1)[0].alpha
    for n in range(steps):
        m = len(cur.period)
        endpoint = plateau_from_left(cur).right
        lo, hi = window(m, n)
        cands = _valid_prefixes(endpoint, lo, hi, bound)
        if not cands:
            raise NoFundamentalPrefixInRange(f"no valid prefix of {endpoint} with length in [{lo}, {hi}]")
        mn = _pick(chooser, cands)
        nxt = EventuallyPeriodicSeq((), endpoint.take(mn), seed.M)
        rec = {"step": n + 1, "parameter": mn, "alpha": nxt, "endpoint": endpoint,
               "candidates": tuple(cands), "fundamental": True, "irreducible": True,
               "period": mn}
        if target == WEAK:
            needed += schedule[n]
            wit = _weak_witnesses(nxt)
            rec["weak_witnesses"] = len(wit)
            rec["witness_indices"] = tuple(wit)
            rec["required_witnesses"] = needed
            rec["witnesses_ok"] = len(wit) >= needed
        alphas.append(nxt)
        records.append(rec)
        cur = nxt
    if not _monotone(alphas, True):
        raise AssertionError("intermediate expansions are not increasing")
    return ConstructionTrace(target, seed, tuple(records), _limit_prefix(alphas), tuple(schedule),
                             bound)


def construct_strong_nospec(seed, steps=3):
    """Choose maximal fundamental prefixes so shifts approach the reflection.

    Starting from ``p_1 = seed``, ``q_n`` is the plateau endpoint of
    ``p_n`` and ``p_{n+1} = (alpha(q_n)_1..m_{n+1})^oo`` with ``m_{n+1}``
    maximal in ``{m_n + 1, ..., 2 m_n}``. Each step checks
    ``d(shift^{m_n}(alpha(p_{n+1})), reflect(alpha(p_{n+1}))) <= 2^-m_n``.
    """
    _check_seed(seed)
    alphas = [seed]
    records = [_seed_step(seed)]
    cur = seed
    for n in range(steps):
        m = len(cur.period)
        endpoint = plateau_from_left(cur).right
        cands = _valid_prefixes(endpoint, m + 1, 2 * m)
        if not cands:
            raise NoFundamentalPrefixInRange(f"no valid prefix of {endpoint} in [{m + 1}, {2 * m}]")
        mn = cands[-1]
        nxt = EventuallyPeriodicSeq((), endpoint.take(mn), seed.M)
        dist = cylinder_distance(shift(nxt, m), reflect(nxt))
        records.append({"step": n + 1, "parameter": mn, "alpha": nxt, "endpoint": endpoint,
                        "candidates": tuple(cands), "fundamental": True, "irreducible": True,
                        "period": mn, "distance": str(dist), "shift": m,
                        "distance_ok": dist <= 2 ** -m})
        alphas.append(nxt)
        cur = nxt
    if not _monotone(alphas, True):
        raise AssertionError("intermediate expansions are not increasing")
    return ConstructionTrace(NOSPEC, seed, tuple(records), _limit_prefix(alphas))


def construct_dense(seed, t_schedule, steps=None, cover_cap=6):
    """Descend through ``alpha(q_{n+1}) = theta(q_n, t_n)^oo``.

    ``theta`` is built over ``B_L`` with ``L = min(m_n, cover_cap)``, so
    every admissible word of length at most ``L`` for ``q_n`` is a factor
    of the next period word.
    """
    _check_seed(seed)
    t_schedule = tuple(int(x) for x in t_schedule)
    if not t_schedule or min(t_schedule) < 2:
        raise ValueError("t_schedule entries must be at least 2")
    steps = len(t_schedule) if steps is None else steps
    if steps > len(t_schedule):
        raise ValueError("t_schedule is shorter than the number of steps")
    alphas = [seed]
    records = [_seed_step(seed)]
    cur = seed
    aT = transitive_alpha(seed.M)
    for n in range(steps):
        m = len(cur.period)
        L = min(m, cover_cap)
        dt = build_delta_theta(cur, t_schedule[n], cover=L)
        nxt = EventuallyPeriodicSeq((), dt.theta.digits, seed.M)
        records.append({"step": n + 1, "parameter": t_schedule[n], "alpha": nxt,
                        "period": len(dt.theta), "cover_length": L,
                        "coverage": dt.checks["coverage"], "fundamental": dt.checks["fundamental"],
                        "below": dt.checks["below"], "irreducible": dt.checks["irreducible"],
                        "constrained": dt.constrained,
                        "above_transitive": lex_cmp(nxt, aT) != Ordering.LT})
        alphas.append(nxt)
        cur = nxt
        if not dt.ok:
            break
    if not _monotone(alphas, False):
        raise AssertionError("intermediate expansions are not decreasing")
    return ConstructionTrace(DENSE, seed, tuple(records), _limit_prefix(alphas), t_schedule[:steps])
