"""Data model and execution semantics for width-bounded ordered binary
decision diagrams (OBDDs) in four flavors.

A program is a layered graph: level ``j`` (for ``j = 1..n``) tests one input
bit and maps the ``w[j-1]`` nodes of level ``j-1`` to the ``w[j]`` nodes of
level ``j``.  Which bit is tested at step ``j`` is given by a variable order
``perm``; the bit tested at step ``j`` is ``x[perm[j-1]]`` (0-based
positions).  The four flavors differ only in how a level transforms state:

``deterministic``
    each node has exactly one successor per symbol (a map).
``nondeterministic``
    each node has a *set* of successors per symbol (a relation); the input
    is accepted iff some path from the initial node ends in an accepting
    node.
``probabilistic``
    each symbol applies a column-stochastic matrix to a probability
    distribution over nodes; acceptance probability is the final mass on
    the accepting set.
``quantum``
    each symbol applies a unitary to an amplitude vector; acceptance
    probability is the squared final amplitude mass on the accepting set.

Nodes are numbered ``0..w[j]-1`` within each level.  Matrices act as
``v_next = M @ v`` with ``M[t, s]`` the weight of the move from source node
``s`` to target node ``t`` (columns are sources).  A program is *stable*
when every level carries the identical transition pair, and *ID* when its
order is the natural one; a stable ID program of fixed width behaves like a
realtime finite automaton.

All program objects are immutable; every operation here is a pure function
of its inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

#: absolute tolerance for structural numeric checks (stochastic columns,
#: unitarity, state-vector normalization)
STRUCT_TOL = 1e-9

#: absolute tolerance when deciding that an acceptance probability equals
#: 0 or 1 in ``exact`` mode (double-precision rotations accumulate error)
EXACT_TOL = 1e-6

#: hard cap on exhaustive input enumeration in :func:`computes`
ENUMERATION_CAP = 24

Bits = Union[str, Sequence[int]]


class ObddError(Exception):
    """Base class for errors raised by this package."""


class InvalidProgramError(ObddError, ValueError):
    """A program failed validation and was used anyway."""


class ModeKindMismatchError(ObddError, ValueError):
    """An acceptance mode was combined with a program kind it cannot judge."""


class CapExceededError(ObddError, RuntimeError):
    """A feasibility cap (enumeration size, subset blow-up, ...) was hit."""


class NotStableError(ObddError, ValueError):
    """A stable-only operation was applied to a non-stable program."""


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

KINDS = ("deterministic", "nondeterministic", "probabilistic", "quantum")


@dataclass(frozen=True)
class VariableOrder:
    """Order in which the n input positions are tested.

    ``perm[j]`` is the 0-based input position tested at step ``j+1``.
    """

    n: int
    perm: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        object.__setattr__(self, "perm", tuple(int(i) for i in self.perm))
        if sorted(self.perm) != list(range(self.n)):
            raise ValueError(f"perm {self.perm} is not a permutation of 0..{self.n - 1}")

    @property
    def is_id(self) -> bool:
        """True for the natural order (an ID program tests bits left to right)."""
        return self.perm == tuple(range(self.n))


def natural_order(n: int) -> VariableOrder:
    """The identity order (0, 1, ..., n-1)."""
    return VariableOrder(n, tuple(range(n)))


def pairing_order(n: int) -> VariableOrder:
    """The outside-in order (0, n-1, 1, n-2, ...) that pairs mirrored positions."""
    perm = []
    lo, hi = 0, n - 1
    while lo <= hi:
        perm.append(lo)
        if hi != lo:
            perm.append(hi)
        lo, hi = lo + 1, hi - 1
    return VariableOrder(n, tuple(perm))


def _as_map(obj) -> tuple[int, ...]:
    return tuple(int(t) for t in obj)


def _as_relation(obj) -> tuple[frozenset[int], ...]:
    return tuple(frozenset(int(t) for t in row) for row in obj)


def transition_shape(obj) -> str:
    """Classify a raw transition object: map, relation, stochastic or unitary."""
    if isinstance(obj, np.ndarray):
        return "unitary" if np.iscomplexobj(obj) else "stochastic"
    if isinstance(obj, tuple) and (not obj or isinstance(obj[0], frozenset)):
        return "relation"
    if isinstance(obj, tuple):
        return "map"
    raise TypeError(f"unrecognized transition object {type(obj)!r}")


@dataclass(frozen=True)
class LevelTransition:
    """The pair of per-symbol transitions applied at one level.

    ``on0``/``on1`` must share a shape class and dimensions: maps and
    relations are tuples indexed by source node; matrices are
    ``(targets, sources)`` arrays.
    """

    on0: object
    on1: object

    def __post_init__(self):
        s0, s1 = transition_shape(self.on0), transition_shape(self.on1)
        if s0 != s1:
            raise ValueError(f"symbol transitions disagree in shape: {s0} vs {s1}")
        if s0 in ("stochastic", "unitary"):
            if self.on0.shape != self.on1.shape:
                raise ValueError("symbol matrices disagree in dimensions")
            for a in (self.on0, self.on1):
                a.setflags(write=False)
        elif len(self.on0) != len(self.on1):
            raise ValueError("symbol transitions disagree in source dimension")

    @property
    def shape_class(self) -> str:
        return transition_shape(self.on0)

    @property
    def source_dim(self) -> int:
        if self.shape_class in ("stochastic", "unitary"):
            return self.on0.shape[1]
        return len(self.on0)

    def target_dim(self) -> int | None:
        """Target dimension, when intrinsic (matrices only)."""
        if self.shape_class in ("stochastic", "unitary"):
            return self.on0.shape[0]
        return None

    def on(self, symbol: int):
        return self.on1 if symbol else self.on0


def level_map(on0: Iterable[int], on1: Iterable[int]) -> LevelTransition:
    """Deterministic level from two source-indexed target lists."""
    return LevelTransition(_as_map(on0), _as_map(on1))


def level_relation(on0: Iterable[Iterable[int]], on1: Iterable[Iterable[int]]) -> LevelTransition:
    """Nondeterministic level from two source-indexed target-set lists."""
    return LevelTransition(_as_relation(on0), _as_relation(on1))


def level_stochastic(on0, on1) -> LevelTransition:
    """Probabilistic level from two column-stochastic matrices."""
    return LevelTransition(np.array(on0, dtype=float), np.array(on1, dtype=float))


def level_unitary(on0, on1) -> LevelTransition:
    """Quantum level from two unitary matrices."""
    return LevelTransition(np.array(on0, dtype=complex), np.array(on1, dtype=complex))


_KIND_SHAPES = {
    "deterministic": "map",
    "nondeterministic": "relation",
    "probabilistic": "stochastic",
    "quantum": "unitary",
}


@dataclass(frozen=True, eq=False)
class ObddProgram:
    """A width-bounded layered program.

    Parameters
    ----------
    kind : str
        One of ``deterministic``, ``nondeterministic``, ``probabilistic``,
        ``quantum``.
    order : VariableOrder
        Which input position each step tests.
    widths : tuple of int
        ``n + 1`` level sizes ``w[0] .. w[n]`` (ragged levels are allowed;
        the paper-style single width is ``max(widths)``).
    levels : tuple of LevelTransition
        ``n`` transitions; ``levels[j-1]`` maps level ``j-1`` to level ``j``.
    initial : int
        Start node in level 0 (a basis state for the vector kinds).
    accept : frozenset of int
        Accepting nodes in the final level.
    stable : bool
        Claim that all levels carry one identical transition pair.
    """

    kind: str
    order: VariableOrder
    widths: tuple[int, ...]
    levels: tuple[LevelTransition, ...]
    initial: int
    accept: frozenset[int]
    stable: bool = False

    def __post_init__(self):
        object.__setattr__(self, "widths", tuple(int(w) for w in self.widths))
        object.__setattr__(self, "levels", tuple(self.levels))
        object.__setattr__(self, "accept", frozenset(int(a) for a in self.accept))
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")

    @property
    def n(self) -> int:
        return self.order.n

    def level(self, j: int) -> LevelTransition:
        """Transition applied at step ``j`` (1-based)."""
        return self.levels[j - 1]

    def require_valid(self) -> None:
        # programs are immutable, so the validation verdict is memoized
        report = getattr(self, "_validation", None)
        if report is None:
            report = validate_program(self)
            object.__setattr__(self, "_validation", report)
        if not report.ok:
            raise InvalidProgramError("; ".join(report.violations))


@dataclass(frozen=True)
class StateVector:
    """Distribution (probabilistic) or amplitude vector (quantum) over a level."""

    entries: np.ndarray
    quantum: bool

    def normalization_defect(self) -> float:
        if self.quantum:
            return abs(float(np.sum(np.abs(self.entries) ** 2)) - 1.0)
        return abs(float(np.sum(self.entries)) - 1.0)


@dataclass(frozen=True)
class AcceptanceMode:
    """How acceptance probabilities are judged against a target function.

    ``deterministic`` demands probability exactly 1/0; ``exact`` the same up
    to :data:`EXACT_TOL`; ``bounded_error(eps)`` demands at least
    ``1/2 + eps`` on 1-inputs and at most ``1/2 - eps`` on 0-inputs;
    ``nondeterministic(cutoff)`` treats probability above ``cutoff`` as
    acceptance (``cutoff = 0`` is the classical existing-path test).
    """

    variant: str
    epsilon: float | None = None
    cutoff: float | None = None

    def __post_init__(self):
        if self.variant not in ("deterministic", "exact", "bounded_error", "nondeterministic"):
            raise ValueError(f"unknown acceptance mode {self.variant!r}")
        if self.variant == "bounded_error":
            if self.epsilon is None or not 0.0 < self.epsilon <= 0.5:
                raise ValueError("bounded_error needs epsilon in (0, 1/2]")
        if self.variant == "nondeterministic":
            if self.cutoff is None or self.cutoff < 0.0:
                raise ValueError("nondeterministic needs cutoff >= 0")

    @classmethod
    def deterministic(cls) -> "AcceptanceMode":
        return cls("deterministic")

    @classmethod
    def exact(cls) -> "AcceptanceMode":
        return cls("exact")

    @classmethod
    def bounded_error(cls, epsilon: float) -> "AcceptanceMode":
        return cls("bounded_error", epsilon=epsilon)

    @classmethod
    def nondeterministic(cls, cutoff: float = 0.0) -> "AcceptanceMode":
        return cls("nondeterministic", cutoff=cutoff)

    def accepts_yes(self, p: float) -> bool:
        if self.variant == "deterministic":
            return p == 1.0
        if self.variant == "exact":
            return abs(p - 1.0) <= EXACT_TOL
        if self.variant == "bounded_error":
            return p >= 0.5 + self.epsilon - STRUCT_TOL
        return p > self.cutoff

    def accepts_no(self, p: float) -> bool:
        if self.variant == "deterministic":
            return p == 0.0
        if self.variant == "exact":
            return p <= EXACT_TOL
        if self.variant == "bounded_error":
            return p <= 0.5 - self.epsilon + STRUCT_TOL
        return p <= self.cutoff


#: program kinds each mode can judge
MODE_KINDS = {
    "deterministic": ("deterministic",),
    "exact": ("deterministic", "probabilistic", "quantum"),
    "bounded_error": ("deterministic", "probabilistic", "quantum"),
    "nondeterministic": ("nondeterministic", "quantum"),
}


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _check_level(kind: str, j: int, t: LevelTransition, w_in: int, w_out: int, out: list[str]):
    if t.shape_class != _KIND_SHAPES[kind]:
        out.append(f"level {j}: {t.shape_class} transition in a {kind} program")
        return
    if t.source_dim != w_in:
        out.append(f"level {j}: source dimension {t.source_dim} != width {w_in}")
        return
    if kind == "deterministic":
        for sym in (0, 1):
            for s, tgt in enumerate(t.on(sym)):
                if not 0 <= tgt < w_out:
                    out.append(f"level {j} symbol {sym}: node {s} maps to {tgt} outside 0..{w_out - 1}")
    elif kind == "nondeterministic":
        for sym in (0, 1):
            for s, tgts in enumerate(t.on(sym)):
                bad = [x for x in tgts if not 0 <= x < w_out]
                if bad:
                    out.append(f"level {j} symbol {sym}: node {s} maps to {sorted(bad)} outside 0..{w_out - 1}")
    else:
        for sym in (0, 1):
            m = t.on(sym)
            if m.shape != (w_out, w_in):
                out.append(f"level {j} symbol {sym}: matrix shape {m.shape} != ({w_out}, {w_in})")
                continue
            if kind == "probabilistic":
                if np.any(m < -STRUCT_TOL):
                    out.append(f"level {j} symbol {sym}: negative entries")
                sums = m.sum(axis=0)
                for col, s in enumerate(sums):
                    if abs(s - 1.0) > STRUCT_TOL:
                        out.append(f"level {j} symbol {sym}: column {col} sums to {s:.6g}")
            else:
                if w_out != w_in:
                    out.append(f"level {j} symbol {sym}: unitary must be square, got {m.shape}")
                    continue
                defect = np.max(np.abs(m.conj().T @ m - np.eye(w_in)))
                if defect > STRUCT_TOL:
                    out.append(f"level {j} symbol {sym}: not unitary (max |U*U - I| = {defect:.3g})")


def _levels_identical(a: LevelTransition, b: LevelTransition) -> bool:
    if a.shape_class != b.shape_class:
        return False
    if a.shape_class in ("stochastic", "unitary"):
        return np.array_equal(a.on0, b.on0) and np.array_equal(a.on1, b.on1)
    return a.on0 == b.on0 and a.on1 == b.on1


def validate_program(p: ObddProgram) -> ValidationReport:
    """Check every structural invariant of a program; never raises.

    Returns a report listing violations: dimension mismatches,
    non-stochastic columns, non-unitary matrices, out-of-range initial or
    accepting nodes, and a stable flag set on a non-stable program.
    """
    out: list[str] = []
    n = p.n
    if len(p.widths) != n + 1:
        out.append(f"expected {n + 1} level widths, got {len(p.widths)}")
        return ValidationReport(tuple(out))
    if any(w < 1 for w in p.widths):
        out.append("level widths must be positive")
    if len(p.levels) != n:
        out.append(f"expected {n} level transitions, got {len(p.levels)}")
        return ValidationReport(tuple(out))
    if not 0 <= p.initial < p.widths[0]:
        out.append(f"initial node {p.initial} outside 0..{p.widths[0] - 1}")
    bad_accept = [a for a in p.accept if not 0 <= a < p.widths[n]]
    if bad_accept:
        out.append(f"accepting nodes {sorted(bad_accept)} outside 0..{p.widths[n] - 1}")
    for j in range(1, n + 1):
        _check_level(p.kind, j, p.level(j), p.widths[j - 1], p.widths[j], out)
    if p.stable:
        if len(set(p.widths)) != 1:
            out.append("stable flag set but level widths vary")
        first = p.levels[0]
        for j in range(2, n + 1):
            if not _levels_identical(first, p.level(j)):
                out.append(f"stable flag set but level {j} differs from level 1")
                break
    return ValidationReport(tuple(out))


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------

def parse_bits(bits: Bits, n: int | None = None) -> tuple[int, ...]:
    """Normalize '0101' / [0,1,0,1] to a tuple of ints, checking length."""
    if isinstance(bits, str):
        if set(bits) - {"0", "1"}:
            raise ValueError(f"input {bits!r} contains non-binary symbols")
        vals = tuple(int(c) for c in bits)
    else:
        vals = tuple(int(b) for b in bits)
        if any(b not in (0, 1) for b in vals):
            raise ValueError("input bits must be 0 or 1")
    if n is not None and len(vals) != n:
        raise ValueError(f"input length {len(vals)} != n = {n}")
    return vals


def _symbols(p: ObddProgram, x: tuple[int, ...]):
    # symbol consumed at step j is the input bit at tested position perm[j-1]
    return (x[pos] for pos in p.order.perm)


def simulate(p: ObddProgram, bits: Bits) -> float:
    """Acceptance probability of ``p`` on one input.

    Deterministic programs return exactly 0.0 or 1.0; nondeterministic
    programs return 1.0 iff an accepting path exists (reachable-set
    propagation, no floating point); the vector kinds return final mass on
    the accepting set.
    """
    p.require_valid()
    x = parse_bits(bits, p.n)
    if p.kind == "deterministic":
        node = p.initial
        for j, sym in enumerate(_symbols(p, x), start=1):
            node = p.level(j).on(sym)[node]
        return 1.0 if node in p.accept else 0.0
    if p.kind == "nondeterministic":
        current: frozenset[int] = frozenset((p.initial,))
        for j, sym in enumerate(_symbols(p, x), start=1):
            rel = p.level(j).on(sym)
            current = frozenset(itertools.chain.from_iterable(rel[s] for s in current))
            if not current:
                return 0.0
        return 1.0 if current & p.accept else 0.0
    v = _initial_vector(p)
    for j, sym in enumerate(_symbols(p, x), start=1):
        v = p.level(j).on(sym) @ v
    return _accept_mass(p, v)


def _initial_vector(p: ObddProgram) -> np.ndarray:
    dtype = complex if p.kind == "quantum" else float
    v = np.zeros(p.widths[0], dtype=dtype)
    v[p.initial] = 1.0
    return v


def _accept_mass(p: ObddProgram, v: np.ndarray) -> float:
    idx = sorted(p.accept)
    if p.kind == "quantum":
        return float(np.sum(np.abs(v[idx]) ** 2))
    return float(np.sum(v[idx]))


def state_trace(p: ObddProgram, bits: Bits) -> list[StateVector]:
    """Per-level state vectors ``v^0 .. v^n`` for the vector kinds."""
    if p.kind not in ("probabilistic", "quantum"):
        raise ValueError("state_trace applies to probabilistic/quantum programs")
    p.require_valid()
    x = parse_bits(bits, p.n)
    quantum = p.kind == "quantum"
    v = _initial_vector(p)
    trace = [StateVector(v, quantum)]
    for j, sym in enumerate(_symbols(p, x), start=1):
        v = p.level(j).on(sym) @ v
        trace.append(StateVector(v, quantum))
    return trace


def node_trace(p: ObddProgram, bits: Bits) -> list:
    """Per-level node (deterministic) or reachable node set (nondeterministic)."""
    if p.kind == "deterministic":
        p.require_valid()
        x = parse_bits(bits, p.n)
        node = p.initial
        out = [node]
        for j, sym in enumerate(_symbols(p, x), start=1):
            node = p.level(j).on(sym)[node]
            out.append(node)
        return out
    if p.kind == "nondeterministic":
        p.require_valid()
        x = parse_bits(bits, p.n)
        cur = frozenset((p.initial,))
        out = [cur]
        for j, sym in enumerate(_symbols(p, x), start=1):
            rel = p.level(j).on(sym)
            cur = frozenset(itertools.chain.from_iterable(rel[s] for s in cur))
            out.append(cur)
        return out
    raise ValueError("node_trace applies to deterministic/nondeterministic programs")


# ---------------------------------------------------------------------------
# checking a program against a function
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComputesResult:
    """Verdict of :func:`computes`: yes, or no with a witness input."""

    ok: bool
    counterexample: str | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _class_representatives(f) -> list[tuple[int, str]]:
    # one representative input per count class; sound for programs whose
    # per-symbol transitions commute (rotations, counters), cheap everywhere
    n = f.n
    if f.symmetry == "ones":
        return [(m, "1" * m + "0" * (n - m)) for m in range(n + 1)]
    if f.symmetry == "prefix_ones":
        k = f.k
        return [(m, "1" * m + "0" * (k - m) + "0" * (n - k)) for m in range(k + 1)]
    raise ValueError(f"{f.name} carries no symmetry metadata; classwise check unsound")


def computes(p: ObddProgram, f, mode: AcceptanceMode, *, classwise: bool = False) -> ComputesResult:
    """Does ``p`` compute ``f`` under ``mode``?

    Every input with ``f = 1`` must satisfy the mode's accept side and every
    ``f = 0`` input its reject side; inputs where ``f`` is undefined are
    unconstrained.  By default all ``2**n`` inputs are enumerated (capped at
    ``n <= 24``); with ``classwise=True`` only one representative per count
    class of a symmetric function is simulated.
    """
    if p.n != f.n:
        raise ValueError(f"program has n = {p.n} but function has n = {f.n}")
    if p.kind not in MODE_KINDS[mode.variant]:
        raise ModeKindMismatchError(f"{mode.variant} mode cannot judge a {p.kind} program")
    p.require_valid()

    if classwise:
        profile = f.count_profile()
        if profile is None:
            raise ValueError(f"{f.name} is not symmetric; classwise check unavailable")
        for m, rep in _class_representatives(f):
            want = profile[m]
            if want is None:
                continue
            prob = simulate(p, rep)
            good = mode.accepts_yes(prob) if want == 1 else mode.accepts_no(prob)
            if not good:
                return ComputesResult(False, rep, f"count class {m}: f = {want}, acceptance {prob:.6g}")
        return ComputesResult(True)

    n = f.n
    if n > ENUMERATION_CAP:
        raise CapExceededError(f"exhaustive check needs n <= {ENUMERATION_CAP}, got {n}")
    table = f.truth_table()
    for i in range(1 << n):
        want = int(table[i])
        if want == 2:
            continue
        rep = format(i, f"0{n}b")
        prob = simulate(p, rep)
        good = mode.accepts_yes(prob) if want == 1 else mode.accepts_no(prob)
        if not good:
            return ComputesResult(False, rep, f"f = {want} but acceptance {prob:.6g}")
    return ComputesResult(True)


# ---------------------------------------------------------------------------
# width accounting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProgramWidths:
    """Level sizes of a program, plus (for the classical kinds) the sizes
    counting only nodes reachable from the initial node."""

    per_level: tuple[int, ...]
    max_width: int
    reachable_per_level: tuple[int, ...] | None = None
    reachable_max: int | None = None


def program_width(p: ObddProgram) -> ProgramWidths:
    """Level widths ``w[0..n]`` and their maximum.

    The maximum is taken over all levels including level 0; reports quote
    both this and the reachable variant, since conventions differ on
    whether the source level counts.
    """
    p.require_valid()
    per_level = p.widths
    reach_counts = None
    if p.kind in ("deterministic", "nondeterministic"):
        cur = {p.initial}
        counts = [1]
        for j in range(1, p.n + 1):
            t = p.level(j)
            nxt: set[int] = set()
            for sym in (0, 1):
                tr = t.on(sym)
                if p.kind == "deterministic":
                    nxt.update(tr[s] for s in cur)
                else:
                    for s in cur:
                        nxt.update(tr[s])
            cur = nxt
            counts.append(len(cur))
        reach_counts = tuple(counts)
    return ProgramWidths(
        per_level=per_level,
        max_width=max(per_level),
        reachable_per_level=reach_counts,
        reachable_max=max(reach_counts) if reach_counts else None,
    )


# ---------------------------------------------------------------------------
# model-level transformations
# ---------------------------------------------------------------------------

def nobdd_to_obdd_subset(p: ObddProgram, *, subset_cap: int = 1 << 16) -> ObddProgram:
    """Determinize a nondeterministic program by the subset construction.

    The result accepts exactly the inputs ``p`` accepts and has width at
    most ``2**w`` where ``w`` is the width of ``p``; only subsets reachable
    from ``{initial}`` are materialized.  Raises :class:`CapExceededError`
    if any level needs more than ``subset_cap`` subset nodes.
    """
    if p.kind != "nondeterministic":
        raise ValueError("subset construction applies to nondeterministic programs")
    p.require_valid()

    level_subsets: list[list[frozenset[int]]] = [[frozenset((p.initial,))]]
    maps: list[LevelTransition] = []
    for j in range(1, p.n + 1):
        t = p.level(j)
        index: dict[frozenset[int], int] = {}
        out_maps: list[list[int]] = [[], []]
        for subset in level_subsets[-1]:
            for sym in (0, 1):
                rel = t.on(sym)
                image = frozenset(itertools.chain.from_iterable(rel[s] for s in subset))
                if image not in index:
                    index[image] = len(index)
                    if len(index) > subset_cap:
                        raise CapExceededError(
                            f"subset construction exceeded {subset_cap} nodes at level {j}"
                        )
                out_maps[sym].append(index[image])
        ordered = sorted(index, key=index.get)
        level_subsets.append(ordered)
        maps.append(level_map(out_maps[0], out_maps[1]))

    accept = frozenset(
        i for i, subset in enumerate(level_subsets[-1]) if subset & p.accept
    )
    return ObddProgram(
        kind="deterministic",
        order=p.order,
        widths=tuple(len(s) for s in level_subsets),
        levels=tuple(maps),
        initial=0,
        accept=accept,
        stable=False,
    )


def lift_deterministic(p: ObddProgram) -> ObddProgram:
    """View a deterministic program as a probabilistic one with 0/1 matrices."""
    if p.kind != "deterministic":
        raise ValueError("lift applies to deterministic programs")
    p.require_valid()
    levels = []
    for j in range(1, p.n + 1):
        t = p.level(j)
        mats = []
        for sym in (0, 1):
            m = np.zeros((p.widths[j], p.widths[j - 1]))
            for s, tgt in enumerate(t.on(sym)):
                m[tgt, s] = 1.0
            mats.append(m)
        levels.append(level_stochastic(mats[0], mats[1]))
    return ObddProgram(
        kind="probabilistic",
        order=p.order,
        widths=p.widths,
        levels=tuple(levels),
        initial=p.initial,
        accept=p.accept,
        stable=p.stable,
    )


def stable_symbol_chain(p: ObddProgram, symbol: int) -> np.ndarray:
    """The single per-symbol transition of a stable program, as a
    column-stochastic matrix (the Markov chain of reading that symbol
    forever).  Deterministic maps are lifted to 0/1 matrices."""
    if symbol not in (0, 1):
        raise ValueError("symbol must be 0 or 1")
    if not p.stable:
        raise NotStableError("program is not stable: levels differ")
    if p.kind not in ("deterministic", "probabilistic"):
        raise ValueError(f"symbol chain is defined for classical chains, not {p.kind}")
    p.require_valid()
    t = p.levels[0].on(symbol)
    if p.kind == "probabilistic":
        return np.array(t, dtype=float)
    w = p.widths[0]
    m = np.zeros((w, w))
    for s, tgt in enumerate(t):
        m[tgt, s] = 1.0
    return m


def programs_structurally_equal(a: ObddProgram, b: ObddProgram) -> bool:
    """Field-by-field equality (exact array comparison for the vector kinds)."""
    if (a.kind, a.order, a.widths, a.initial, a.accept, a.stable) != (
        b.kind, b.order, b.widths, b.initial, b.accept, b.stable
    ):
        return False
    return all(_levels_identical(x, y) for x, y in zip(a.levels, b.levels))
