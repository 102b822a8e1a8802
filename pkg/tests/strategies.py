from functools import lru_cache
from itertools import product

from hypothesis import strategies as st

from symshift.words import EventuallyPeriodicSeq

from oracles import in_vhat


@lru_cache(maxsize=None)
def vhat_corpus(M_max=3, max_pre=3, max_per=5, periodic=False):
    """Every canonical eventually periodic sequence in the symmetric shift
    within the given size limits, found by brute force."""
    out = []
    pres = [0] if periodic else range(max_pre + 1)
    for M in range(1, M_max + 1):
        for r in pres:
            for m in range(1, max_per + 1):
                for pre in product(range(M + 1), repeat=r):
                    for per in product(range(M + 1), repeat=m):
                        if not any(per):
                            continue
                        x = EventuallyPeriodicSeq(pre, per, M)
                        if len(x.preperiod) != r or len(x.period) != m:
                            continue
                        if in_vhat((x.preperiod, x.period), M):
                            out.append(x)
    return tuple(out)


def vhat_seqs(M_max=3, max_pre=3, max_per=5, periodic=False):
    return st.sampled_from(vhat_corpus(M_max, max_pre, max_per, periodic))
