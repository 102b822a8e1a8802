"""
Languages and deterministic presentations of the symmetric shift and of
the greedy shift attached to an eventually periodic ``alpha``.

A word is *admissible* when every suffix ``w_{i+1} ... w_n`` lies between
the reflected and the plain prefix of ``alpha`` of the same length. The
language of the shift space itself consists of admissible words that
extend to bi-infinite admissible sequences; it is read off the
*essential* part of the automaton built by :func:`build_automaton`.

Automaton states are pairs ``(a, b)``: ``a`` is the length of the longest
suffix of the input equal to a prefix of ``alpha`` and ``b`` the same for
the reflection. Because ``shift^n(alpha) <= alpha`` the longest such
suffix carries the whole constraint, so digit ``d`` is allowed in state
``(a, b)`` iff ``reflect(alpha)_{b+1} <= d <= alpha_{a+1}``. A length that
reaches ``r + m`` is folded back to ``r`` since both describe the same
tail of ``alpha``.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product

import networkx as nx
import numpy as np

from .errors import (
    AlphabetMismatch,
    EmptyEssentialPart,
    NotAdmissible,
    NotEventuallyPeriodic,
    NotTransitive,
)
from .words import EventuallyPeriodicSeq, Word

__all__ = [
    "ShiftAutomaton",
    "LanguageSlice",
    "EntropyResult",
    "SpecNumber",
    "SyncResult",
    "is_admissible",
    "enumerate_admissible",
    "enumerate_Bn",
    "build_automaton",
    "essential_words",
    "count_words",
    "entropy",
    "transitivity_mixing",
    "spec_number",
    "follower_set",
    "prefix_set",
    "find_sync_word",
    "is_factor",
]

SYMMETRIC = "SymmetricShift"
GREEDY = "GreedyShift"


def _check(w, alpha):
    if w.M != alpha.M:
        raise AlphabetMismatch(f"M={w.M} versus M={alpha.M}")


def _admissible_digits(w, alpha):
    M = alpha.M
    n = len(w)
    a = alpha.take(n)
    lower = tuple(M - x for x in a)
    for i in range(n):
        s = w[i:]
        k = n - i
        if not (lower[:k] <= s <= a[:k]):
            return False
    return True


def is_admissible(w, alpha):
    """Check the two-sided prefix inequality for every suffix of ``w``.

    Examples
    --------
    >>> from symshift.words import parse_word, parse_seq
    >>> is_admissible(parse_word("11", 1), parse_seq("(10)", 1))
    False
    """
    _check(w, alpha)
    return _admissible_digits(tuple(w.digits), alpha)


def _full_prefix_ok(w, a, lower):
    k = len(w)
    return lower[:k] <= w <= a[:k]


def enumerate_admissible(alpha, n):
    """All admissible words of length ``n`` by depth-first extension.

    This over-approximates the language of the shift space: some
    admissible words cannot be extended to the left indefinitely.
    """
    M = alpha.M
    a = alpha.take(n)
    lower = tuple(M - x for x in a)
    out = []

    def grow(w):
        if len(w) == n:
            out.append(w)
            return
        for d in range(M + 1):
            v = w + (d,)
            k = len(v)
            # only suffixes ending at the new digit are new
            if all(lower[:k - i] <= v[i:] <= a[:k - i] for i in range(k)):
                grow(v)

    grow(())
    return out


def _left_extendable(w, alpha, depth):
    M = alpha.M
    a = alpha.take(len(w) + depth)
    lower = tuple(M - x for x in a)
    seen = set()

    def go(v, left):
        if left == 0:
            return True
        key = (v, left)
        if key in seen:
            return False
        for d in range(M + 1):
            u = (d,) + v
            if _full_prefix_ok(u, a, lower) and go(u, left - 1):
                return True
        seen.add(key)
        return False

    return go(tuple(w), depth)


@dataclass(frozen=True)
class LanguageSlice:
    """Sorted words of length ``n`` and the counts for lengths ``1..n``."""

    n: int
    words: tuple
    counts: tuple

    def export(self):
        return "\n".join(str(w) for w in self.words)


def _admissible_with_signatures(alpha, n, depth):
    """Yield ``(w, sig)`` for admissible ``w`` of length ``n``.

    ``sig[j - 1]`` holds the signs of ``w`` against ``alpha[j:j+n]`` and
    its reflection for ``1 <= j <= depth``. A left extension of ``w``
    only ever consults these comparisons. Every comparison is kept open
    while the digits agree, so each step only touches undecided ones.
    """
    M = alpha.M
    a = alpha.take(n + depth)
    lower = tuple(M - x for x in a)

    def grow(w, hi_open, lo_open, sig_hi, sig_lo):
        k = len(w)
        if k == n:
            yield w, tuple(zip(sig_hi, sig_lo))
            return
        for d in range(M + 1):
            # admissibility: suffixes starting at i are still equal to a / lower
            nh = []
            ok = True
            for i in hi_open + (k,):
                c = a[k - i]
                if d > c:
                    ok = False
                    break
                if d == c:
                    nh.append(i)
            if not ok:
                continue
            nl = []
            for i in lo_open + (k,):
                c = lower[k - i]
                if d < c:
                    ok = False
                    break
                if d == c:
                    nl.append(i)
            if not ok:
                continue
            sh, sl = list(sig_hi), list(sig_lo)
            for j in range(depth):
                if sh[j] is None:
                    c = a[j + 1 + k]
                    if d != c:
                        sh[j] = 1 if d > c else -1
                if sl[j] is None:
                    c = lower[j + 1 + k]
                    if d != c:
                        sl[j] = 1 if d > c else -1
            yield from grow(w + (d,), tuple(nh), tuple(nl), sh, sl)

    start = [None] * depth
    for w, sig in grow((), (), (), start, start):
        yield w, tuple((h or 0, l or 0) for h, l in sig)


def enumerate_Bn(alpha, n):
    """Words of length ``n`` in the language of the symmetric shift.

    Independent of the automaton: admissible words are produced by
    depth-first search, then kept only if they admit an admissible left
    extension of length ``3(r + m) + 2``. That is at least the number of
    automaton states, so such a left extension passes through a cycle;
    right extensions always exist for ``alpha`` in the shift space.

    Whether a left extension exists depends on ``w`` only through its
    comparisons with the shifted prefixes of ``alpha`` and its
    reflection, so the search runs once per comparison pattern. Counts
    for shorter lengths are read off the prefixes of the final slice.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    depth = 3 * (len(alpha.preperiod) + len(alpha.period)) + 2
    memo = {}
    words = []
    for w, sig in _admissible_with_signatures(alpha, n, depth):
        if sig not in memo:
            memo[sig] = _left_extendable(w, alpha, depth)
        if memo[sig]:
            words.append(w)
    counts = tuple(len({w[:k] for w in words}) for k in range(1, n + 1))
    return LanguageSlice(n, tuple(Word(w, alpha.M) for w in sorted(words)), counts)


@dataclass(frozen=True)
class ShiftAutomaton:
    """Deterministic labelled graph presenting a shift space.

    ``delta[s]`` maps a digit to the successor state index. All states
    accept. ``essential`` is the set of states lying on bi-infinite paths.
    """

    alpha: EventuallyPeriodicSeq
    kind: str
    labels: tuple
    delta: tuple
    start: int
    essential: frozenset
    exactness: str = "Exact"
    _graph: object = field(default=None, repr=False, compare=False)

    @property
    def M(self):
        return self.alpha.M

    @property
    def num_states(self):
        return len(self.labels)

    def read(self, state, word):
        """State after reading ``word`` from ``state`` or ``None``."""
        for d in word:
            state = self.delta[state].get(d)
            if state is None:
                return None
        return state

    def read_essential(self, states, word):
        """Subset of essential states reached reading ``word`` inside the essential part."""
        ess = self.essential
        cur = set(states)
        for d in word:
            nxt = set()
            for s in cur:
                t = self.delta[s].get(d)
                if t is not None and t in ess:
                    nxt.add(t)
            cur = nxt
            if not cur:
                break
        return frozenset(cur)

    def graph(self, essential_only=True):
        g = nx.MultiDiGraph()
        keep = self.essential if essential_only else range(self.num_states)
        g.add_nodes_from(keep)
        for s in keep:
            for d, t in self.delta[s].items():
                if t in keep:
                    g.add_edge(s, t, digit=d)
        return g

    def to_text(self):
        """Line-based export ``state digit -> state`` (essential states starred)."""
        lines = []
        for s, moves in enumerate(self.delta):
            for d in sorted(moves):
                lines.append(f"{s} {d} -> {moves[d]}")
        lines.append("# labels: " + " ".join(f"{i}={self._label(i)}" for i in range(self.num_states)))
        lines.append("# essential: " + " ".join(str(s) for s in sorted(self.essential)))
        return "\n".join(lines)

    def _label(self, i):
        return ",".join(str(x) for x in self.labels[i])


def build_automaton(alpha, kind=SYMMETRIC):
    """Exact deterministic presentation of the symmetric or greedy shift.

    Parameters
    ----------
    alpha : EventuallyPeriodicSeq
        Quasi-greedy expansion, assumed to lie in the symmetric shift.
    kind : {"SymmetricShift", "GreedyShift"}

    Returns
    -------
    ShiftAutomaton
    """
    if not isinstance(alpha, EventuallyPeriodicSeq):
        raise NotEventuallyPeriodic("an EventuallyPeriodicSeq is required")
    if kind not in (SYMMETRIC, GREEDY):
        raise ValueError(f"unknown kind {kind!r}")
    M = alpha.M
    r, m = len(alpha.preperiod), len(alpha.period)
    L = r + m

    def fold(x):
        return r if x == L else x

    def moves(state):
        a = state[0]
        hi = alpha.at(a)
        if kind == GREEDY:
            out = {}
            for d in range(hi + 1):
                out[d] = (fold(a + 1) if d == hi else 0,)
            return out
        b = state[1]
        lo = M - alpha.at(b)
        out = {}
        for d in range(lo, hi + 1):
            na = fold(a + 1) if d == hi else 0
            nb = fold(b + 1) if d == lo else 0
            out[d] = (na, nb)
        return out

    start = (0,) if kind == GREEDY else (0, 0)
    index = {start: 0}
    labels = [start]
    raw = []
    i = 0
    while i < len(labels):
        mv = moves(labels[i])
        row = {}
        for d, t in mv.items():
            if t not in index:
                index[t] = len(labels)
                labels.append(t)
            row[d] = index[t]
        raw.append(row)
        i += 1
    essential = _essential(raw)
    return ShiftAutomaton(alpha, kind, tuple(labels), tuple(raw), 0, frozenset(essential))


def _essential(delta):
    alive = set(range(len(delta)))
    while True:
        has_out = {s for s in alive if any(t in alive for t in delta[s].values())}
        has_in = {t for s in alive for t in delta[s].values() if t in alive}
        nxt = has_out & has_in
        if nxt == alive:
            return alive
        alive = nxt


def _succ_masks(aut):
    ess = aut.essential
    masks = [0] * aut.num_states
    for s in ess:
        for t in aut.delta[s].values():
            if t in ess:
                masks[s] |= 1 << t
    return masks


def _mask(states):
    return reduce(lambda x, s: x | (1 << s), states, 0)


def essential_words(aut, n):
    """Words of length ``n`` labelling paths in the essential part, with end sets.

    Returns a dict ``word tuple -> frozenset of end states``.
    """
    ess = aut.essential
    layer = {(): frozenset(ess)}
    for _ in range(n):
        nxt = {}
        for w, cur in layer.items():
            for d in range(aut.M + 1):
                s = aut.read_essential(cur, (d,))
                if s:
                    nxt[w + (d,)] = s
        layer = nxt
    return layer


def count_words(aut, n):
    """Number of words of each length ``1..n`` in the essential language."""
    if not aut.essential:
        return [0] * n
    layer = {frozenset(aut.essential): 1}
    out = []
    for _ in range(n):
        nxt = {}
        for cur, c in layer.items():
            for d in range(aut.M + 1):
                s = aut.read_essential(cur, (d,))
                if s:
                    nxt[s] = nxt.get(s, 0) + c
        layer = nxt
        out.append(sum(layer.values()))
    return out


def is_factor(w, seq):
    """Whether the finite word ``w`` occurs in the sequence ``seq``."""
    w = tuple(w)
    unrolled = seq.preperiod + seq.period * (len(w) // len(seq.period) + 2)
    k = len(w)
    return any(unrolled[i:i + k] == w for i in range(len(unrolled) - k + 1))


@dataclass(frozen=True)
class EntropyResult:
    """Enclosures of the spectral radius, its natural log and ``log_{M+1}``."""

    radius: tuple
    log: tuple
    normalized: tuple

    @property
    def value(self):
        return (self.log[0] + self.log[1]) / 2

    @property
    def h(self):
        return (self.normalized[0] + self.normalized[1]) / 2


def _down(x):
    return math.nextafter(x, -math.inf)


def _up(x):
    return math.nextafter(x, math.inf)


def _perron_bounds(mat):
    """Collatz-Wielandt bracket of the spectral radius of ``mat + I``.

    ``mat`` is the integer adjacency matrix of a strongly connected graph,
    so ``mat + I`` is primitive. Any positive vector ``v`` gives
    ``min (Bv)_i / v_i <= rho(B) <= max (Bv)_i / v_i``.
    """
    n = mat.shape[0]
    B = mat + np.eye(n, dtype=np.int64)
    vals, vecs = np.linalg.eig(B.astype(float))
    k = int(np.argmax(vals.real))
    v = np.abs(vecs[:, k].real)
    if not np.all(v > 0):
        v = np.ones(n)
    for _ in range(3):
        w = B @ v
        v = w / w.max()
    vf = [Fraction(float(x)) for x in v]
    rows = [[int(x) for x in row] for row in B]
    quotients = []
    for i in range(n):
        s = sum(c * vf[j] for j, c in enumerate(rows[i]) if c)
        quotients.append(s / vf[i])
    return min(quotients) - 1, max(quotients) - 1


def entropy(aut):
    """Topological entropy of the presented shift.

    The spectral radius of the essential adjacency matrix is bracketed
    exactly by Collatz-Wielandt quotients on every strongly connected
    component; logarithms are then rounded outward.

    Returns
    -------
    EntropyResult
        ``radius`` as Fractions, ``log`` (natural) and ``normalized``
        (divided by ``log(M+1)``) as float intervals.
    """
    if not aut.essential:
        raise EmptyEssentialPart("no bi-infinite paths")
    g = aut.graph()
    best = (Fraction(0), Fraction(0))
    for comp in nx.strongly_connected_components(g):
        nodes = sorted(comp)
        pos = {s: i for i, s in enumerate(nodes)}
        mat = np.zeros((len(nodes), len(nodes)), dtype=np.int64)
        for s in nodes:
            for t in aut.delta[s].values():
                if t in pos:
                    mat[pos[s], pos[t]] += 1
        if not mat.any():
            continue
        lo, hi = _perron_bounds(mat)
        best = (max(lo, best[0]), max(hi, best[1]))
    lo, hi = max(best[0], Fraction(1)), max(best[1], Fraction(1))
    llo = max(0.0, _down(_down(math.log(_down(float(lo))))))
    lhi = _up(_up(math.log(_up(float(hi)))))
    base = math.log(aut.M + 1)
    return EntropyResult((lo, hi), (llo, lhi), (max(0.0, _down(llo / _up(base))), _up(lhi / _down(base))))


def transitivity_mixing(aut):
    """Transitivity, mixing and the gcd of cycle lengths of the essential part.

    The presentation need not be minimal (at the transitive base one
    strongly connected component presents a subshift of another), so both
    properties are decided on the language. Every word ``u`` determines the
    set ``S_u`` of states it can end in and every ``v`` the set ``P_v`` it
    can start from; ``u w v`` is in the language for some ``|w| = k`` iff
    the ``k``-step successor set of ``S_u`` meets ``P_v``. Only the finitely
    many distinct sets matter, and only the inclusion-minimal ones.
    """
    if not aut.essential:
        raise EmptyEssentialPart("no bi-infinite paths")
    g = nx.DiGraph(aut.graph())
    period = 0
    for comp in nx.strongly_connected_components(g):
        sub = g.subgraph(comp)
        if sub.number_of_edges():
            p = _cycle_gcd(sub)
            period = p if not period else math.gcd(period, p)
    succ = _succ_masks(aut)
    starts = _minimal(_closure(aut, forward=True))
    targets = _minimal(_closure(aut, forward=False))
    transitive = mixing = True
    for S in starts:
        orbit, cycle = _mask_orbit(S, succ)
        seen = 0
        for X in orbit:
            seen |= X
        if any(not seen & P for P in targets):
            transitive = mixing = False
            break
        if any(not X & P for X in cycle for P in targets):
            mixing = False
    return {"transitive": transitive, "mixing": mixing, "period_gcd": period}


def _step(mask, succ):
    out = 0
    while mask:
        low = mask & -mask
        out |= succ[low.bit_length() - 1]
        mask ^= low
    return out


def _mask_orbit(S, succ):
    """The sequence ``S, succ(S), ...`` up to its first repeat, and the repeating part."""
    index, orbit = {}, []
    while S not in index:
        index[S] = len(orbit)
        orbit.append(S)
        S = _step(S, succ)
    return orbit, orbit[index[S]:]


def _closure(aut, forward):
    """All distinct nonempty end-sets (``forward``) or start-sets of language words."""
    ess = aut.essential
    full = _mask(ess)
    seen = {full}
    stack = [full]
    while stack:
        X = stack.pop()
        for d in range(aut.M + 1):
            if forward:
                states = [s for s in ess if X >> s & 1]
                t = _mask(aut.read_essential(states, (d,)))
            else:
                t = 0
                for s in ess:
                    u = aut.delta[s].get(d)
                    if u is not None and u in ess and X >> u & 1:
                        t |= 1 << s
            if t and t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


def _minimal(masks):
    ms = sorted(masks, key=lambda x: bin(x).count("1"))
    out = []
    for X in ms:
        if not any(Y & X == Y for Y in out):
            out.append(X)
    return out


def _cycle_gcd(g):
    root = next(iter(g.nodes))
    level = nx.single_source_shortest_path_length(g, root)
    p = 0
    for u, v in g.edges():
        if u in level and v in level:
            p = math.gcd(p, level[u] + 1 - level[v])
    return abs(p)


@dataclass(frozen=True)
class SpecNumber:
    """Result of :func:`spec_number`.

    ``value`` is ``None`` when no connector length up to ``cap`` works; the
    witness pair is then the pair with the fewest feasible lengths.
    """

    n: int
    cap: int
    value: int | None
    witness: tuple | None = None
    almost: bool = False

    def __str__(self):
        return f"none<={self.cap}" if self.value is None else str(self.value)


def spec_number(aut, n, cap, almost=False):
    """Least ``k`` such that all pairs of ``n``-words join through some ``k``-word.

    With ``almost=True`` the connector may have any length ``<= k``.

    Notes
    -----
    For a word ``u`` let ``S_u`` be the set of states reached by reading it
    inside the essential part, and for ``v`` let ``P_v`` be the set of states
    from which it can be read. A connector of length ``k`` exists iff the
    ``k``-step successor set of ``S_u`` meets ``P_v``. Words are grouped by
    these sets, so the work depends on the number of distinct sets only.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    ends = _end_sets(aut, n)
    if not ends:
        raise EmptyEssentialPart("no bi-infinite paths")
    pres = _pre_sets(aut, n)
    succ = _succ_masks(aut)

    reach = {}
    for S in ends:
        seq, cur = [], S
        for _ in range(cap + 1):
            seq.append(cur)
            nxt = 0
            x = cur
            while x:
                low = x & -x
                nxt |= succ[low.bit_length() - 1]
                x ^= low
            cur = nxt
        reach[S] = seq

    ok_by_k = [True] * (cap + 1)
    worst, worst_count = None, None
    for S, seq in reach.items():
        for P in pres:
            feasible = [bool(seq[k] & P) for k in range(cap + 1)]
            if almost:
                feasible = [any(feasible[:k + 1]) for k in range(cap + 1)]
            for k in range(cap + 1):
                ok_by_k[k] = ok_by_k[k] and feasible[k]
            c = sum(feasible)
            if worst_count is None or c < worst_count:
                worst, worst_count = (S, P), c
    for k in range(cap + 1):
        if ok_by_k[k]:
            return SpecNumber(n, cap, k, None, almost)
    S, P = worst
    pair = (Word(ends[S], aut.M), Word(pres[P], aut.M))
    return SpecNumber(n, cap, None, pair, almost)


def _end_sets(aut, n):
    """Distinct end-state masks of ``n``-words, each with one representative word."""
    layer = {_mask(aut.essential): ()}
    for _ in range(n):
        nxt = {}
        for S, w in layer.items():
            states = [i for i in aut.essential if S >> i & 1]
            for d in range(aut.M + 1):
                t = _mask(aut.read_essential(states, (d,)))
                if t and t not in nxt:
                    nxt[t] = w + (d,)
        layer = nxt
    return layer


def _pre_sets(aut, n):
    """Distinct masks of states from which an ``n``-word can be read, with representatives."""
    ess = aut.essential
    layer = {_mask(ess): ()}
    for _ in range(n):
        nxt = {}
        for X, w in layer.items():
            for d in range(aut.M + 1):
                t = 0
                for s in ess:
                    u = aut.delta[s].get(d)
                    if u is not None and X >> u & 1:
                        t |= 1 << s
                if t and t not in nxt:
                    nxt[t] = (d,) + w
        layer = nxt
    return layer


def _ensure_in_language(aut, w):
    s = aut.read_essential(aut.essential, w.digits)
    if not s:
        raise NotAdmissible(f"{w} is not in the language of the shift")
    return s


def follower_set(aut, w, m):
    """Words ``v`` of length ``m`` such that ``w v`` lies in the language."""
    cur = _ensure_in_language(aut, w)
    out = set()
    for v in product(range(aut.M + 1), repeat=m):
        if aut.read_essential(cur, v):
            out.add(Word(v, aut.M))
    return out


def prefix_set(aut, w, m):
    """Words ``v`` of length ``m`` such that ``v w`` lies in the language."""
    _ensure_in_language(aut, w)
    pre = {s for s in aut.essential if aut.read_essential({s}, w.digits)}
    out = set()
    for v, ends in essential_words(aut, m).items():
        if ends & pre:
            out.add(Word(v, aut.M))
    return out


@dataclass(frozen=True)
class SyncResult:
    """Outcome of :func:`find_sync_word`.

    ``word`` is a language word that is not a factor of ``alpha`` nor of its
    reflection and that was checked to collapse the presentation; ``None``
    when no such word exists up to ``max_len``. ``collapsing_word`` is a
    shortest word (possibly a factor) collapsing the presentation.
    """

    word: Word | None
    method: str
    max_len: int
    collapses: bool
    collapsing_word: Word | None


def collapses(aut, w):
    """Whether reading ``w`` from every essential state ends in one state."""
    ends = {aut.read_essential({s}, w) for s in aut.essential}
    reached = set().union(*ends) if ends else set()
    return len(reached) == 1


def find_sync_word(aut, alpha, max_len):
    """Search for an intrinsically synchronising word.

    Candidates are language words, by increasing length and then
    lexicographically, that are not factors of ``alpha`` or of its
    reflection. The first candidate that also collapses the presentation
    is returned with ``method="non_factor"``.
    """
    from .words import reflect

    if not transitivity_mixing(aut)["transitive"]:
        raise NotTransitive("the shift is not transitive")
    ra = reflect(alpha)
    found = None
    shortest = None
    for k in range(1, max_len + 1):
        for w in sorted(essential_words(aut, k)):
            c = collapses(aut, w)
            if c and shortest is None:
                shortest = Word(w, aut.M)
            if found is None and c and not is_factor(w, alpha) and not is_factor(w, ra):
                found = Word(w, aut.M)
        if found is not None and shortest is not None:
            break
    return SyncResult(found, "non_factor", max_len, found is not None, shortest)
