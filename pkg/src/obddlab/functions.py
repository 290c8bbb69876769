"""Evaluators and truth tables for the Boolean function families under study.

Each family comes as a :class:`FunctionSpec`: a (possibly partial) function
from n-bit strings to {0, 1, undefined}, with the parameter ``k`` where one
applies and with symmetry metadata.  Undefined inputs (the promise setting)
are reported as ``None`` by evaluators and as the code ``2`` in truth
tables.

Families
--------
``PartialMOD``  1 when the number of ones is 0 mod ``2**(k+1)``, 0 when it
                is ``2**k`` mod ``2**(k+1)``, undefined otherwise.
``MOD``         1 iff the number of ones is divisible by ``k``.
``NotO``        0 iff ones and zeros balance exactly.
``NotOk``       0 iff the first ``k`` bits balance exactly (``k`` even).
``NotSQUARE``   0 iff ``#ones = (#zeros)**2``.
``NotPOWER``    0 iff ``#ones = 2**(#zeros)``.
``EQS``         marker/value equality on the first ``k`` bits (see below).
``NotEQS``      the inversion of ``EQS``.
``NotPAL``      1 iff the input is not a palindrome.

For ``EQS`` the odd positions of the first ``k`` bits are *markers* and the
even positions are *values*: value bit ``2i`` joins string ``alpha`` when
marker bit ``2i-1`` is 0 and joins ``beta`` otherwise; the function is 1
iff ``alpha == beta``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, IO, Sequence

import numpy as np

from .core import Bits, parse_bits

#: truth-table code for "function undefined here"
STAR = 2

FAMILY_NAMES = (
    "PartialMOD", "MOD", "NotO", "NotOk", "NotSQUARE", "NotPOWER",
    "EQS", "NotEQS", "NotPAL",
)


@dataclass(frozen=True)
class MarkerValueSplit:
    """Value bits routed left/right by their marker bits."""

    alpha: tuple[int, ...]
    beta: tuple[int, ...]


def split_marker_value(bits: Bits, k: int) -> MarkerValueSplit:
    """Split the first ``k`` bits into the marker-routed strings.

    Position ``2i-1`` (1-based; the odd positions) is the marker for value
    bit ``2i``: marker 0 routes the value bit to ``alpha``, marker 1 to
    ``beta``.  Bits past position ``k`` are ignored.
    """
    x = parse_bits(bits)
    if k % 4 != 0 or k < 4:
        raise ValueError(f"k must be a positive multiple of 4, got {k}")
    if k > len(x):
        raise ValueError(f"k = {k} exceeds input length {len(x)}")
    alpha, beta = [], []
    for i in range(k // 2):
        marker, value = x[2 * i], x[2 * i + 1]
        (beta if marker else alpha).append(value)
    return MarkerValueSplit(tuple(alpha), tuple(beta))


@dataclass(frozen=True)
class FunctionSpec:
    """A total or partial Boolean function on ``n``-bit inputs.

    ``symmetry`` is ``"ones"`` when the value depends on the input only
    through its number of ones, ``"prefix_ones"`` when it depends only on
    the number of ones among the first ``k`` bits, and ``None`` otherwise.
    """

    name: str
    n: int
    k: int | None
    symmetry: str | None
    _evaluate: Callable[[tuple[int, ...]], int | None] = field(repr=False)
    _build_table: Callable[[], np.ndarray] | None = field(default=None, repr=False)

    def __call__(self, bits: Bits) -> int | None:
        return self._evaluate(parse_bits(bits, self.n))

    @property
    def total(self) -> bool:
        return bool(np.all(self.truth_table() != STAR))

    def truth_table(self) -> np.ndarray:
        """Values over all ``2**n`` inputs as int8 codes {0, 1, STAR}.

        Index ``i`` is the input whose first bit is the most significant
        bit of ``i``.  The table is built once and cached.
        """
        cached = getattr(self, "_table", None)
        if cached is None:
            if self._build_table is not None:
                cached = self._build_table()
            else:
                cached = np.empty(1 << self.n, dtype=np.int8)
                for i in range(1 << self.n):
                    v = self._evaluate(tuple((i >> (self.n - 1 - j)) & 1 for j in range(self.n)))
                    cached[i] = STAR if v is None else v
            cached.setflags(write=False)
            object.__setattr__(self, "_table", cached)
        return cached

    def count_profile(self) -> dict[int, int | None] | None:
        """Outcome per count class for the symmetric families, else None.

        Keys run over 0..n ones for ``"ones"`` symmetry and over 0..k ones
        within the examined prefix for ``"prefix_ones"``.
        """
        if self.symmetry == "ones":
            return {m: self._evaluate(_rep(m, self.n)) for m in range(self.n + 1)}
        if self.symmetry == "prefix_ones":
            k = self.k
            return {m: self._evaluate(_rep(m, k) + (0,) * (self.n - k)) for m in range(k + 1)}
        return None


def _rep(m: int, length: int) -> tuple[int, ...]:
    return (1,) * m + (0,) * (length - m)


def count_profile(f: FunctionSpec) -> dict[int, int | None] | None:
    """Module-level alias for :meth:`FunctionSpec.count_profile`."""
    return f.count_profile()


# ---------------------------------------------------------------------------
# table helpers
# ---------------------------------------------------------------------------

def _popcounts(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.uint64)
    return np.bitwise_count(idx).astype(np.int64)


def _table_from_count_profile(n: int, profile: Sequence[int | None]) -> np.ndarray:
    codes = np.array([STAR if v is None else v for v in profile], dtype=np.int8)
    return codes[_popcounts(n)]


def _table_from_prefix_values(n: int, k: int, prefix_values: np.ndarray) -> np.ndarray:
    # value depends only on the first k bits = the top k bits of the index
    idx = np.arange(1 << n, dtype=np.int64)
    return prefix_values[idx >> (n - k)]


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------

def partial_mod(k: int, n: int) -> FunctionSpec:
    """1 on inputs with ``#ones = 0 mod 2**(k+1)``, 0 at ``2**k``, else undefined."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if n < 1:
        raise ValueError("n must be >= 1")
    period = 1 << (k + 1)
    half = 1 << k

    def value_of_count(m: int) -> int | None:
        r = m % period
        if r == 0:
            return 1
        if r == half:
            return 0
        return None

    return FunctionSpec(
        name="PartialMOD", n=n, k=k, symmetry="ones",
        _evaluate=lambda x: value_of_count(sum(x)),
        _build_table=lambda: _table_from_count_profile(
            n, [value_of_count(m) for m in range(n + 1)]
        ),
    )


def mod_count(k: int, n: int) -> FunctionSpec:
    """1 iff the number of ones is divisible by ``k`` (requires 1 < k <= n/2)."""
    if not 1 < k <= n // 2:
        raise ValueError(f"MOD needs 1 < k <= n/2, got k = {k}, n = {n}")
    return FunctionSpec(
        name="MOD", n=n, k=k, symmetry="ones",
        _evaluate=lambda x: int(sum(x) % k == 0),
        _build_table=lambda: _table_from_count_profile(
            n, [int(m % k == 0) for m in range(n + 1)]
        ),
    )


def not_o(n: int) -> FunctionSpec:
    """0 iff ones and zeros balance (constant 1 for odd n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return FunctionSpec(
        name="NotO", n=n, k=None, symmetry="ones",
        _evaluate=lambda x: int(2 * sum(x) != n),
        _build_table=lambda: _table_from_count_profile(
            n, [int(2 * m != n) for m in range(n + 1)]
        ),
    )


def not_o_prefix(k: int, n: int) -> FunctionSpec:
    """0 iff the first ``k`` bits hold exactly ``k/2`` ones (k even, 1 < k <= n)."""
    if k % 2 != 0 or not 1 < k <= n:
        raise ValueError(f"NotOk needs even k with 1 < k <= n, got k = {k}, n = {n}")
    return FunctionSpec(
        name="NotOk", n=n, k=k, symmetry="prefix_ones",
        _evaluate=lambda x: int(sum(x[:k]) != k // 2),
        _build_table=lambda: _table_from_prefix_values(
            n, k,
            np.array([int(int(np.bitwise_count(np.uint64(p))) != k // 2)
                      for p in range(1 << k)], dtype=np.int8),
        ),
    )


def not_square(n: int) -> FunctionSpec:
    """0 iff ``#ones`` equals the square of ``#zeros``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return FunctionSpec(
        name="NotSQUARE", n=n, k=None, symmetry="ones",
        _evaluate=lambda x: int((n - sum(x)) ** 2 != sum(x)),
        _build_table=lambda: _table_from_count_profile(
            n, [int((n - m) ** 2 != m) for m in range(n + 1)]
        ),
    )


def not_power(n: int) -> FunctionSpec:
    """0 iff ``#ones`` equals ``2 ** (#zeros)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return FunctionSpec(
        name="NotPOWER", n=n, k=None, symmetry="ones",
        _evaluate=lambda x: int(2 ** (n - sum(x)) != sum(x)),
        _build_table=lambda: _table_from_count_profile(
            n, [int(2 ** (n - m) != m) for m in range(n + 1)]
        ),
    )


def _eqs_prefix_values(k: int) -> np.ndarray:
    vals = np.empty(1 << k, dtype=np.int8)
    for p in range(1 << k):
        bits = tuple((p >> (k - 1 - j)) & 1 for j in range(k))
        s = split_marker_value(bits, k)
        vals[p] = int(s.alpha == s.beta)
    return vals


def eqs(k: int, n: int) -> FunctionSpec:
    """Marker/value equality on the first ``k`` bits (k a multiple of 4, k <= n)."""
    if k % 4 != 0 or not 4 <= k <= n:
        raise ValueError(f"EQS needs k a multiple of 4 with 4 <= k <= n, got k = {k}, n = {n}")

    def ev(x: tuple[int, ...]) -> int:
        s = split_marker_value(x, k)
        return int(s.alpha == s.beta)

    return FunctionSpec(
        name="EQS", n=n, k=k, symmetry=None,
        _evaluate=ev,
        _build_table=lambda: _table_from_prefix_values(n, k, _eqs_prefix_values(k)),
    )


def not_eqs(k: int, n: int) -> FunctionSpec:
    """The inversion of :func:`eqs`."""
    base = eqs(k, n)
    return FunctionSpec(
        name="NotEQS", n=n, k=k, symmetry=None,
        _evaluate=lambda x: 1 - base._evaluate(x),
        _build_table=lambda: (1 - base.truth_table()).astype(np.int8),
    )


def not_pal(n: int) -> FunctionSpec:
    """1 iff the input differs from its reversal."""
    if n < 1:
        raise ValueError("n must be >= 1")

    def build() -> np.ndarray:
        idx = np.arange(1 << n, dtype=np.int64)
        rev = np.zeros_like(idx)
        for j in range(n):
            rev |= ((idx >> j) & 1) << (n - 1 - j)
        return (idx != rev).astype(np.int8)

    return FunctionSpec(
        name="NotPAL", n=n, k=None, symmetry=None,
        _evaluate=lambda x: int(tuple(x) != tuple(reversed(x))),
        _build_table=build,
    )


_FAMILIES_WITH_K = {
    "partialmod": partial_mod,
    "mod": mod_count,
    "notok": not_o_prefix,
    "eqs": eqs,
    "noteqs": not_eqs,
}

_FAMILIES_NO_K = {
    "noto": not_o,
    "notsquare": not_square,
    "notpower": not_power,
    "notpal": not_pal,
}


def make_function(name: str, k: int | None = None, n: int | None = None) -> FunctionSpec:
    """Build a family member by name (case-insensitive)."""
    if n is None:
        raise ValueError("n is required")
    key = name.replace("_", "").lower()
    if key in _FAMILIES_WITH_K:
        if k is None:
            raise ValueError(f"{name} requires the parameter k")
        return _FAMILIES_WITH_K[key](k, n)
    if key in _FAMILIES_NO_K:
        if k is not None:
            raise ValueError(f"{name} takes no parameter k")
        return _FAMILIES_NO_K[key](n)
    raise ValueError(f"unknown function family {name!r} (choose from {FAMILY_NAMES})")


# ---------------------------------------------------------------------------
# truth-table text format: one line per input, "<bitstring> <0|1|*>"
# ---------------------------------------------------------------------------

def format_truth_table(f: FunctionSpec) -> str:
    table = f.truth_table()
    rows = []
    for i in range(1 << f.n):
        v = int(table[i])
        rows.append(f"{format(i, f'0{f.n}b')} {'*' if v == STAR else v}")
    return "\n".join(rows) + "\n"


def write_truth_table(f: FunctionSpec, stream: IO[str]) -> None:
    stream.write(format_truth_table(f))


def from_table(values: np.ndarray, name: str = "table") -> FunctionSpec:
    """Wrap an explicit table (codes {0, 1, STAR}) as a FunctionSpec."""
    values = np.asarray(values, dtype=np.int8)
    size = values.shape[0]
    n = size.bit_length() - 1
    if size != 1 << n or values.ndim != 1:
        raise ValueError(f"table size {values.shape} is not a power of two")
    if not np.all((values == 0) | (values == 1) | (values == STAR)):
        raise ValueError("table entries must be 0, 1 or STAR")
    values = values.copy()
    values.setflags(write=False)

    def ev(x: tuple[int, ...]) -> int | None:
        i = int("".join(str(b) for b in x), 2) if x else 0
        v = int(values[i])
        return None if v == STAR else v

    return FunctionSpec(
        name=name, n=n, k=None, symmetry=None,
        _evaluate=ev, _build_table=lambda: values,
    )


def read_truth_table(stream: IO[str], name: str = "table") -> FunctionSpec:
    """Parse the text format back into a FunctionSpec (all 2**n lines required)."""
    entries: dict[int, int] = {}
    n = None
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2 or set(parts[0]) - {"0", "1"} or parts[1] not in ("0", "1", "*"):
            raise ValueError(f"line {lineno}: expected '<bitstring> <0|1|*>', got {line!r}")
        if n is None:
            n = len(parts[0])
        elif len(parts[0]) != n:
            raise ValueError(f"line {lineno}: bitstring length {len(parts[0])} != {n}")
        i = int(parts[0], 2)
        if i in entries:
            raise ValueError(f"line {lineno}: duplicate input {parts[0]}")
        entries[i] = STAR if parts[1] == "*" else int(parts[1])
    if n is None:
        raise ValueError("empty truth table")
    if len(entries) != 1 << n:
        raise ValueError(f"expected {1 << n} rows for n = {n}, got {len(entries)}")
    values = np.empty(1 << n, dtype=np.int8)
    for i, v in entries.items():
        values[i] = v
    return from_table(values, name=name)
