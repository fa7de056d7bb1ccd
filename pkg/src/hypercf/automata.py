"""k-kernels, automata with output, Christol digit sequences and paperfolding.

Sequences are 1-indexed: a kernel member (i, j) is n -> v(k^i n + j) for
n >= 1, and its children are (i+1, j + d k^i).  Kernel reports built from
finite prefixes are evidence about automaticity, never proofs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .algebra.field import FieldCtx
from .algebra.series import LaurentSeries
from .validation import check_int

DEFAULT_SKIP = 64
MIN_WINDOW = 32
EVIDENCE_CLOSED = "evidence of automaticity (finite prefix; not a proof)"
EVIDENCE_OPEN = "evidence against automaticity (finite prefix; not a proof)"


@dataclass(frozen=True)
class SymbolSequence:
    """A materialised prefix v(start), v(start+1), ..."""

    terms: tuple
    alphabet: tuple = ()
    origin: str = ""
    start: int = 1

    def __post_init__(self):
        terms = tuple(self.terms)
        object.__setattr__(self, "terms", terms)
        if not self.alphabet:
            object.__setattr__(self, "alphabet", _sorted_alphabet(set(terms)))
        else:
            allowed = set(self.alphabet)
            for i, t in enumerate(terms):
                if t not in allowed:
                    raise ValueError(f"term v({self.start + i})={t!r} is not in the alphabet")
            object.__setattr__(self, "alphabet", tuple(self.alphabet))

    def __len__(self):
        return len(self.terms)

    @property
    def last_index(self) -> int:
        return self.start + len(self.terms) - 1

    def at(self, n: int):
        """v(n) in the sequence's own indexing."""
        i = n - self.start
        if not 0 <= i < len(self.terms):
            raise IndexError(f"v({n}) lies outside the materialised prefix")
        return self.terms[i]

    def prefix(self, n: int) -> SymbolSequence:
        return SymbolSequence(self.terms[:n], self.alphabet, self.origin, self.start)

    def member(self, k: int, i: int, j: int) -> list:
        """Terms v(k^i n + j), n >= 1, available in the prefix."""
        step = k**i
        first = step + j - self.start
        if first < 0:
            first += step * ((-first + step - 1) // step)
        return list(self.terms[first::step])


def _sorted_alphabet(symbols) -> tuple:
    try:
        return tuple(sorted(symbols))
    except TypeError:
        return tuple(sorted(symbols, key=repr))


def as_sequence(terms, origin: str = "", alphabet=(), start: int = 1) -> SymbolSequence:
    if isinstance(terms, SymbolSequence):
        return terms
    return SymbolSequence(tuple(terms), tuple(alphabet), origin, start)


def decimate(v: SymbolSequence, k: int, j: int) -> SymbolSequence:
    """(T_j v)(n) = v(kn + j) for n >= 1."""
    k = check_int(k, "k", minimum=2)
    j = check_int(j, "j", minimum=0)
    if j >= k:
        raise ValueError(f"residue j={j} must be < k={k}")
    terms = v.member(k, 1, j)
    if not terms:
        raise ValueError("decimation leaves no terms inside the prefix")
    return SymbolSequence(tuple(terms), v.alphabet, f"T_{j}[k={k}]({v.origin})", 1)


# -- kernel enumeration -------------------------------------------------------------------


@dataclass
class KernelReport:
    k: int
    depth: int
    skip: int
    classes: list[tuple[int, int]]
    closed: bool
    class_map: dict[tuple[int, int], int]
    growth: list[int]
    max_classes: int
    window: int = MIN_WINDOW
    prefix_length: int = 0
    exceeded: bool = False
    verdict: str = ""

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "depth": self.depth,
            "skip": self.skip,
            "closed": self.closed,
            "class_count": self.class_count,
            "growth": list(self.growth),
            "max_classes": self.max_classes,
            "prefix_length": self.prefix_length,
            "verdict": self.verdict,
        }


def required_prefix(k: int, depth: int, skip: int, window: int = MIN_WINDOW) -> int:
    """Prefix length for which every depth-``depth`` member keeps ``window`` terms after ``skip``."""
    return k**depth * (skip + window + 1) + k**depth


class _Matcher:
    """Classes of sequences up to ultimate equality on a comparison window."""

    def __init__(self, skip: int, window: int):
        self.skip = skip
        self.window = window
        self.reps: list[list] = []
        self.buckets: dict[tuple, list[int]] = {}

    def key(self, seq):
        return tuple(seq[self.skip:self.skip + self.window])

    def find(self, seq) -> int | None:
        for cid in self.buckets.get(self.key(seq), ()):
            rep = self.reps[cid]
            n = min(len(rep), len(seq))
            if rep[self.skip:n] == seq[self.skip:n]:
                return cid
        return None

    def add(self, seq) -> int:
        cid = len(self.reps)
        self.reps.append(seq)
        self.buckets.setdefault(self.key(seq), []).append(cid)
        return cid


def kernel_enumerate(
    v,
    k: int = 2,
    depth: int = 8,
    skip: int = DEFAULT_SKIP,
    max_classes: int = 200,
    window: int = MIN_WINDOW,
) -> KernelReport:
    """Breadth-first closure of the k-kernel of ``v`` up to ultimate equality.

    Members whose terms agree after dropping ``skip`` initial terms, over an
    overlap of at least ``window`` terms, share a class.  Only class
    representatives are expanded (ultimately equal sequences have ultimately
    equal decimations).  ``closed`` means every child of every class fell into
    an existing class; a class first seen at the depth limit, or more than
    ``max_classes`` classes, leaves the report open.
    """
    v = as_sequence(v)
    k = check_int(k, "k", minimum=2)
    depth = check_int(depth, "depth", minimum=0)
    skip = check_int(skip, "skip", minimum=0)
    max_classes = check_int(max_classes, "max_classes", minimum=1)
    shortest = len(v.member(k, depth, k**depth - 1)) if depth else len(v.member(k, 0, 0))
    if shortest < skip + window:
        need = required_prefix(k, depth, skip, window)
        raise ValueError(
            f"prefix of {len(v)} terms is too short for depth {depth} with skip {skip}; need about {need}"
        )
    matcher = _Matcher(skip, window)
    classes: list[tuple[int, int]] = []
    class_map: dict[tuple[int, int], int] = {}
    root = v.member(k, 0, 0)
    class_map[(0, 0)] = matcher.add(root)
    classes.append((0, 0))
    queue = deque([(0, 0)])
    closed = True
    exceeded = False
    while queue:
        i, j = queue.popleft()
        if i >= depth:
            closed = False
            continue
        for d in range(k):
            child = (i + 1, j + d * k**i)
            seq = v.member(k, *child)
            cid = matcher.find(seq)
            if cid is None:
                if len(classes) >= max_classes:
                    exceeded = True
                    break
                cid = matcher.add(seq)
                classes.append(child)
                queue.append(child)
            class_map[child] = cid
        if exceeded:
            closed = False
            break
    growth = [sum(1 for (i, _) in classes if i <= t) for t in range(depth + 1)]
    return KernelReport(
        k=k,
        depth=depth,
        skip=skip,
        classes=classes,
        closed=closed,
        class_map=class_map,
        growth=growth,
        max_classes=max_classes,
        window=window,
        prefix_length=len(v),
        exceeded=exceeded,
        verdict=EVIDENCE_CLOSED if closed else EVIDENCE_OPEN,
    )


# -- automata with output ---------------------------------------------------------------------


@dataclass
class Dfao:
    k: int
    transitions: list[list[int]]
    outputs: list
    initial: int = 0
    digit_order: str = "lsd"
    labels: list = field(default_factory=list)

    @property
    def states(self) -> list[int]:
        return list(range(len(self.outputs)))

    @property
    def n_states(self) -> int:
        return len(self.outputs)

    def to_json(self) -> dict:
        return {
            "states": self.states,
            "initial": self.initial,
            "transitions": [list(t) for t in self.transitions],
            "outputs": [_jsonable(o) for o in self.outputs],
            "digit_order": self.digit_order,
        }


def _jsonable(x):
    if isinstance(x, (int, str, float, bool)) or x is None:
        return x
    return str(x)


def digits(n: int, k: int) -> list[int]:
    """Base-k digits of n, least significant first (empty for n = 0)."""
    out = []
    while n:
        n, d = divmod(n, k)
        out.append(d)
    return out


def dfao_eval(d: Dfao, n: int):
    n = check_int(n, "n", minimum=0)
    ds = digits(n, d.k)
    if d.digit_order == "msd":
        ds.reverse()
    s = d.initial
    for x in ds:
        s = d.transitions[s][x]
    return d.outputs[s]


def _exact_kernel(v0: list, k: int, limit: int, window: int):
    """Exact kernel of a 0-indexed list: members n -> v0(k^i n + j), n >= 0."""
    def member(i, j):
        return v0[j::k**i]

    reps = {}
    order: list[tuple[int, int]] = []
    seqs: list[list] = []
    trans: list[list[int]] = []

    def find_or_add(i, j):
        seq = member(i, j)
        if len(seq) < window:
            raise ValueError("prefix too short to separate kernel members exactly")
        key = tuple(seq[:window])
        for cid in reps.get(key, ()):
            rep = seqs[cid]
            n = min(len(rep), len(seq))
            if rep[:n] == seq[:n]:
                return cid, False
        cid = len(seqs)
        reps.setdefault(key, []).append(cid)
        seqs.append(seq)
        order.append((i, j))
        trans.append([None] * k)
        return cid, True

    find_or_add(0, 0)
    queue = deque([0])
    while queue:
        cid = queue.popleft()
        i, j = order[cid]
        for d in range(k):
            child, new = find_or_add(i + 1, j + d * k**i)
            trans[cid][d] = child
            if new:
                if len(seqs) > limit:
                    return None
                queue.append(child)
    outputs = [seqs[c][0] for c in range(len(seqs))]
    return trans, outputs, order


def dfao_from_kernel(report: KernelReport, v, state_limit: int | None = None, window: int = MIN_WINDOW) -> Dfao:
    """Least-significant-digit-first automaton for ``v`` (n >= 1).

    States are classes of the exact kernel of v extended by a value at n = 0;
    the value giving the fewest states is used.  The skip-tolerant report only
    licenses the construction; exactness of the states is what makes the
    automaton reproduce every term.
    """
    if not report.closed:
        raise ValueError("cannot build an automaton from a kernel report that did not close")
    v = as_sequence(v)
    k = report.k
    limit = state_limit or max(4 * report.max_classes, 64)
    if v.start > 1:
        raise ValueError("sequence must start at index 0 or 1")
    tail = list(v.terms) if v.start == 1 else list(v.terms[1:])
    choices = list(v.alphabet) if v.start == 1 else [v.terms[0]]
    best = None
    for c in choices:
        built = _exact_kernel([c] + tail, k, limit, window)
        if built is not None and (best is None or len(built[1]) < len(best[1])):
            best = built
    if best is None:
        raise ValueError(f"exact kernel exceeded {limit} states; prefix may be too short")
    trans, outputs, order = best
    return Dfao(k=k, transitions=trans, outputs=outputs, initial=0, digit_order="lsd", labels=order)


def to_msd(d: Dfao) -> Dfao:
    """Equivalent automaton reading most significant digits first.

    After reading a prefix u (MSD order), the state is the map
    s -> output of the native automaton started at s and fed u reversed;
    reading digit x sends h to s -> h(tau(s, x)).
    """
    if d.digit_order == "msd":
        return d
    n = d.n_states
    index: dict[tuple, int] = {}
    funcs: list[tuple] = []

    def intern(h):
        if h not in index:
            index[h] = len(funcs)
            funcs.append(h)
        return index[h]

    intern(tuple(d.outputs))
    trans: list[list[int]] = []
    i = 0
    while i < len(funcs):
        h = funcs[i]
        row = []
        for x in range(d.k):
            row.append(intern(tuple(h[d.transitions[s][x]] for s in range(n))))
        trans.append(row)
        i += 1
    outputs = [h[d.initial] for h in funcs]
    return Dfao(k=d.k, transitions=trans, outputs=outputs, initial=0, digit_order="msd")


# -- Christol digits and paperfolding -----------------------------------------------------------


def christol_digits(f: LaurentSeries) -> SymbolSequence:
    """u(n) = coefficient of T^(-n), 0 <= n < N, for f known above -N."""
    if f.prec is None:
        raise ValueError("christol_digits needs a series with finite precision")
    N = -f.prec
    if N <= 0:
        raise ValueError("no coefficients at nonpositive exponents are known")
    codes = f.window(0, -(N - 1))
    return SymbolSequence(tuple(codes), tuple(range(f.ctx.q)), "christol", start=0)


def paperfold(n_terms: int, convention: str = "signed", ctx: FieldCtx | None = None) -> SymbolSequence:
    """Fold recursion S_{n+1} = S_n, -1, -(S_n reversed) (``signed``), or the
    literal S_{n+1} = S_n, -1, S_n reversed; +1 -> 1 and -1 -> q - 1 in F_q."""
    n_terms = check_int(n_terms, "n_terms", minimum=1)
    if convention not in ("signed", "literal"):
        raise ValueError(f"unknown fold convention {convention!r}")
    ctx = ctx or FieldCtx(3)
    s = [1]
    while len(s) < n_terms:
        tail = [-x for x in reversed(s)] if convention == "signed" else list(reversed(s))
        s = s + [-1] + tail
    minus = ctx.neg(1)
    codes = tuple(1 if x == 1 else minus for x in s[:n_terms])
    return SymbolSequence(codes, tuple(sorted({1, minus})), f"paperfold[{convention}]")
