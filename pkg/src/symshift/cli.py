"""Command line interface.

Every command accepts ``--format human|json``. Verdicts of any kind exit
with status 0; malformed input and library errors exit with status 2 and
print an error record.
"""

import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import click

from . import classify as C
from . import construct as K
from . import expansion as E
from . import shiftlang as S
from .errors import ParseError, SymShiftError
from .words import Word, parse_seq, parse_word

SCHEMA = C.SCHEMA


@dataclass(frozen=True)
class RunConfig:
    M: int
    horizon: int | None = None
    precision: Fraction = Fraction(1, 10 ** 9)
    cap: int = 64
    output: str = "human"

    def __post_init__(self):
        if self.M < 1:
            raise click.BadParameter("M must be at least 1")
        if self.horizon is not None and self.horizon < 1:
            raise click.BadParameter("horizon must be at least 1")
        if self.precision <= 0:
            raise click.BadParameter("precision must be positive")
        if self.cap < 1:
            raise click.BadParameter("cap must be at least 1")


def parse_base(spec, M):
    """Parse ``p/q``, ``root:c0,c1,...:lo:hi`` or ``alpha:SEQ``."""
    spec = spec.strip()
    if spec.startswith("root:"):
        parts = spec[5:].split(":")
        if len(parts) != 3:
            raise ParseError("expected root:<coeffs>:<lo>:<hi>", 0)
        try:
            coeffs = [int(c) for c in parts[0].split(",")]
        except ValueError:
            raise ParseError("coefficients must be integers", 5) from None
        return E.AlgebraicBase.poly_root(coeffs, Fraction(parts[1]), Fraction(parts[2]), M)
    if spec.startswith("alpha:"):
        return E.base_from_alpha(parse_seq(spec[6:], M))
    try:
        value = Fraction(spec)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"cannot read base {spec!r}", 0) from None
    return E.AlgebraicBase.rational(value, M)


def parse_alpha(text, M):
    """A sequence ``u(p)`` or, without parentheses, a finite prefix."""
    if "(" in text:
        return parse_seq(text, M)
    return parse_word(text, M)


def _emit(ctx, data, human):
    if ctx.obj["format"] == "json":
        click.echo(json.dumps(data, sort_keys=True))
    else:
        click.echo(human)


def _run(fn):
    """Turn library errors into an error record and exit status 2."""
    try:
        return fn()
    except SymShiftError as exc:
        ctx = click.get_current_context()
        rec = {"schema": SCHEMA, "error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ParseError):
            rec["position"] = exc.position
        if ctx.obj and ctx.obj.get("format") == "json":
            click.echo(json.dumps(rec, sort_keys=True))
        else:
            click.echo(f"error: {rec['error']}: {rec['message']}", err=True)
        ctx.exit(2)


def _fmt_interval(lo, hi, places=12):
    return f"[{float(lo):.{places}f}, {float(hi):.{places}f}]"


@click.group()
@click.option("--format", "fmt", type=click.Choice(["human", "json"]), default="human",
              help="Output style.")
@click.pass_context
def main(ctx, fmt):
    """Symmetric q-shifts, univoque bases and irreducible expansions."""
    ctx.ensure_object(dict)
    ctx.obj["format"] = fmt


def _m_option(f):
    return click.option("--M", "M", type=int, required=True, help="Largest digit.")(f)


def _alpha_option(f):
    return click.option("--alpha", "alpha", required=True,
                        help="Expansion such as 1(10); without parentheses a finite prefix.")(f)


@main.command()
@click.option("--base", required=True, help="p/q, root:c0,c1,..:lo:hi or alpha:SEQ.")
@_m_option
@click.option("--digits", type=int, default=16, show_default=True)
@click.option("--greedy", is_flag=True, help="Print the greedy expansion instead.")
@click.pass_context
def expand(ctx, base, M, digits, greedy):
    """Print digits of the quasi-greedy (or greedy) expansion of 1."""
    def go():
        q = parse_base(base, M)
        if greedy:
            g = E.greedy_digits(q, digits)
            w = g.word
            extra = {"finite_at": g.finite_at}
        else:
            w = E.quasi_greedy_digits(q, digits)
            extra = {}
        _emit(ctx, dict({"schema": SCHEMA, "digits": str(w), "base": q.describe()}, **extra), str(w))
    _run(go)


def _summary_lines(rep):
    return "\n".join(f"{k}={v}" for k, v in rep["summary"].items())


@main.command("classify")
@_alpha_option
@_m_option
@click.option("--horizon", type=int, default=None, help="Scan bound for finite prefixes.")
@click.pass_context
def classify_cmd(ctx, alpha, M, horizon):
    """Full classification report."""
    def go():
        RunConfig(M, horizon)
        a = parse_alpha(alpha, M)
        rep = C.classify(a, horizon)
        _emit(ctx, rep, _summary_lines(rep))
    _run(go)


@main.group()
def lang():
    """Language slices of the symmetric shift."""


@lang.command("count")
@_alpha_option
@_m_option
@click.option("--n", "n", type=int, required=True)
@click.pass_context
def lang_count(ctx, alpha, M, n):
    """Number of words of length n."""
    def go():
        aut = S.build_automaton(parse_seq(alpha, M))
        c = S.count_words(aut, n)[-1] if n > 0 else 1
        _emit(ctx, {"schema": SCHEMA, "n": n, "count": c}, str(c))
    _run(go)


@lang.command("list")
@_alpha_option
@_m_option
@click.option("--n", "n", type=int, required=True)
@click.pass_context
def lang_list(ctx, alpha, M, n):
    """All words of length n, in decreasing order."""
    def go():
        aut = S.build_automaton(parse_seq(alpha, M))
        words = [str(Word(w, M)) for w in sorted(S.essential_words(aut, n), reverse=True)]
        _emit(ctx, {"schema": SCHEMA, "n": n, "words": words}, "\n".join(words))
    _run(go)


@main.command()
@_alpha_option
@_m_option
@click.option("--kind", type=click.Choice([S.SYMMETRIC, S.GREEDY]), default=S.SYMMETRIC)
@click.pass_context
def entropy(ctx, alpha, M, kind):
    """Topological entropy enclosure (natural log)."""
    def go():
        ent = S.entropy(S.build_automaton(parse_seq(alpha, M), kind))
        _emit(ctx, {"schema": SCHEMA, "kind": kind, "log": list(ent.log),
                    "normalized": list(ent.normalized)},
              f"h in {_fmt_interval(*ent.log)}")
    _run(go)


@main.command()
@_alpha_option
@_m_option
@click.option("--n", "n", type=int, required=True)
@click.option("--cap", type=int, default=64, show_default=True)
@click.option("--almost", is_flag=True, help="Allow connector lengths up to k.")
@click.pass_context
def specnum(ctx, alpha, M, n, cap, almost):
    """Specification number s_n."""
    def go():
        RunConfig(M, cap=cap)
        s = S.spec_number(S.build_automaton(parse_seq(alpha, M)), n, cap, almost)
        _emit(ctx, {"schema": SCHEMA, "n": n, "cap": cap, "value": s.value,
                    "text": str(s)}, str(s))
    _run(go)


@main.command()
@_alpha_option
@_m_option
@click.option("--max-len", type=int, default=8, show_default=True)
@click.pass_context
def syncword(ctx, alpha, M, max_len):
    """Search for an intrinsically synchronising word."""
    def go():
        a = parse_seq(alpha, M)
        r = S.find_sync_word(S.build_automaton(a), a, max_len)
        data = {"schema": SCHEMA, "word": None if r.word is None else str(r.word),
                "method": r.method, "max_len": r.max_len, "collapses": r.collapses,
                "collapsing_word": None if r.collapsing_word is None else str(r.collapsing_word)}
        _emit(ctx, data, f"none<={max_len}" if r.word is None else str(r.word))
    _run(go)


@main.group()
def approx():
    """Natural approximations."""


@approx.command("below")
@_alpha_option
@_m_option
@click.option("--count", type=int, default=8, show_default=True)
@click.pass_context
def approx_below(ctx, alpha, M, count):
    """Approximants (alpha_1..alpha_n^-)^oo from below."""
    def go():
        out = C.natural_approx_below(parse_alpha(alpha, M), count=count)
        _emit(ctx, {"schema": SCHEMA, "approximants": [a.to_dict() for a in out]},
              "\n".join(f"{a.n}\t{a.alpha}" for a in out))
    _run(go)


@approx.command("above")
@_alpha_option
@_m_option
@click.option("--count", type=int, default=8, show_default=True)
@click.pass_context
def approx_above(ctx, alpha, M, count):
    """Approximants built from fundamental prefixes."""
    def go():
        out = C.natural_approx_above(parse_alpha(alpha, M), count)
        _emit(ctx, {"schema": SCHEMA, "approximants": [a.to_dict() for a in out]},
              "\n".join(f"{a.n}\t{a.alpha}" for a in out))
    _run(go)


def _schedule(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter("schedule must be comma separated integers") from None


def _trace_human(tr):
    lines = [f"target={tr.target_class}"]
    for s in tr.steps:
        lines.append(f"step {s['step']}: parameter={s['parameter']} alpha={s['alpha']}")
    lines.append(f"limit_prefix={tr.limit_prefix}")
    return "\n".join(lines)


@main.group()
def construct():
    """Iterative constructions; each prints a trace."""


def _construct_cmd(name, build, schedule_help=None):
    @click.option("--seed", required=True, help="Periodic irreducible expansion, e.g. (1110).")
    @_m_option
    @click.option("--steps", type=int, default=None)
    @click.pass_context
    def cmd(ctx, seed, M, steps, schedule=None):
        def go():
            tr = build(parse_seq(seed, M), steps, _schedule(schedule) if schedule else None)
            _emit(ctx, tr.to_dict(), _trace_human(tr))
        _run(go)

    if schedule_help:
        cmd = click.option("--schedule", required=True, help=schedule_help)(cmd)
    cmd.__doc__ = build.__doc__
    construct.command(name)(cmd)


_construct_cmd("strong", lambda a, n, _: K.construct_strong(a, n or 3))
_construct_cmd("nospec", lambda a, n, _: K.construct_strong_nospec(a, n or 3))
_construct_cmd("weak", lambda a, n, s: K.construct_weak(a, s, n), "N values, e.g. 2,2")
_construct_cmd("dense", lambda a, n, s: K.construct_dense(a, s, n), "t values, e.g. 2,2")
for _name, _doc in [("strong", "Strongly irreducible limit via short fundamental prefixes."),
                    ("nospec", "Strongly irreducible limit without specification."),
                    ("weak", "Weakly irreducible limit; --schedule gives N_n."),
                    ("dense", "Dense-orbit limit; --schedule gives t_n.")]:
    construct.commands[_name].help = _doc


@main.command()
@_m_option
@click.option("--digits", type=int, default=16, show_default=True)
@click.pass_context
def constants(ctx, M, digits):
    """Golden, transitive and Komornik-Loreti bases."""
    def go():
        c = C.constants(M)
        for q in (c.q_G, c.q_T):
            q.refine(Fraction(1, 10 ** 12))
        kl = c.kl_prefix(digits)
        data = {"schema": SCHEMA, "M": M,
                "q_G": {"alpha": str(c.alpha_G), "base": c.q_G.describe()},
                "q_T": {"alpha": str(c.alpha_T), "base": c.q_T.describe()},
                "q_KL": {"alpha_prefix": str(kl)}}
        human = "\n".join([
            f"q_G in {_fmt_interval(*c.q_G.enclosure())}  alpha(q_G)={c.alpha_G}",
            f"q_T in {_fmt_interval(*c.q_T.enclosure())}  alpha(q_T)={c.alpha_T}",
            f"alpha(q_KL) prefix {kl}",
        ])
        _emit(ctx, data, human)
    _run(go)


@main.command()
@_alpha_option
@_m_option
@click.option("--kind", type=click.Choice([S.SYMMETRIC, S.GREEDY]), default=S.SYMMETRIC)
@click.pass_context
def automaton(ctx, alpha, M, kind):
    """Export the deterministic presentation."""
    def go():
        aut = S.build_automaton(parse_seq(alpha, M), kind)
        _emit(ctx, {"schema": SCHEMA, "text": aut.to_text()}, aut.to_text())
    _run(go)


def _classify_record(line):
    M_text, _, seq = line.partition("\t")
    try:
        M = int(M_text)
        return C.classify(parse_alpha(seq.strip(), M))
    except (SymShiftError, ValueError) as exc:
        return {"schema": SCHEMA, "input": line, "error": type(exc).__name__, "message": str(exc)}


@main.command()
@click.argument("path", type=click.File("r"))
@click.option("--workers", type=int, default=1, show_default=True)
def corpus(path, workers):
    """Classify ``M<TAB>SEQ`` records, one JSON report per line, in input order."""
    lines = [ln.rstrip("\n") for ln in path if ln.strip() and not ln.startswith("#")]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            reports = list(ex.map(_classify_record, lines))
    else:
        reports = [_classify_record(ln) for ln in lines]
    for rep in reports:
        click.echo(json.dumps(rep, sort_keys=True))


if __name__ == "__main__":
    sys.exit(main())
