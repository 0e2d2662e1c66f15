"""Tuple universes, their orders, and the index bookkeeping shared by all modules.

An indecomposable M_x is named by a non-decreasing (d+1)-tuple ``x`` of
integers. Tuples are plain Python tuples; a universe fixes their canonical
(lexicographic) order and hands out bit positions, so a set of
indecomposables is an ``int`` bitmask throughout the package.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from dtorsion.errors import DomainError, ResourceError, UsageError, ValidationError

OsTuple = tuple  # tuple[int, ...], non-decreasing

MAX_UNIVERSE = 4096
MAX_COORD = 10**6

AUSLANDER = "auslander"
NAKAYAMA = "nakayama"
AINF = "ainf"


# -- Kupisch series and contexts ----------------------------------------------

@dataclass(frozen=True)
class KupischSeries:
    """Loewy-length bounds of a higher Nakayama algebra.

    ``kind`` is ``"A"`` (a connected series ``l_0, ..., l_{n-1}`` with
    ``l_0 = 1``) or ``"Ainf"`` (a finite series of type A-infinity-infinity
    whose first listed entry sits at position ``offset``; every position
    outside the window is an implicit zero). Ainf windows are normalised by
    trimming zeros at either end.
    """

    values: tuple
    kind: str = "A"
    offset: int = 0

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        if self.kind == "A":
            if self.offset != 0:
                raise ValidationError("a type A Kupisch series has offset 0")
            _validate_type_a(values)
        elif self.kind == "Ainf":
            offset = int(self.offset)
            while values and values[0] == 0:
                values = values[1:]
                offset += 1
            while values and values[-1] == 0:
                values = values[:-1]
            if not values:
                offset = 0
            _validate_type_ainf(values, offset)
            object.__setattr__(self, "offset", offset)
        else:
            raise ValidationError(f"unknown Kupisch series kind {self.kind!r}")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    def at(self, position: int) -> int:
        """Entry at an absolute position; zero outside the window."""
        i = position - self.offset
        if 0 <= i < len(self.values):
            return self.values[i]
        return 0

    def positions(self) -> range:
        return range(self.offset, self.offset + len(self.values))


def _validate_type_a(values):
    if not values:
        raise ValidationError("a type A Kupisch series needs at least one entry")
    if values[0] != 1:
        raise ValidationError(f"Kupisch series violates l_0 = 1 at position 0 (l_0={values[0]})")
    for i in range(1, len(values)):
        if not 2 <= values[i] <= values[i - 1] + 1:
            raise ValidationError(
                f"Kupisch series violates 2 <= l_i <= l_(i-1)+1 at position {i} "
                f"(l_{i}={values[i]}, l_{i - 1}={values[i - 1]})")


def _validate_type_ainf(values, offset):
    prev = 0
    for i, v in enumerate(values):
        if v < 0:
            raise ValidationError(f"Kupisch series entry at position {offset + i} is negative ({v})")
        if v > prev + 1:
            raise ValidationError(
                f"Kupisch series violates l_i <= l_(i-1)+1 at position {offset + i} "
                f"(l_{offset + i}={v}, l_{offset + i - 1}={prev})")
        prev = v


@dataclass(frozen=True)
class Context:
    """Which d-cluster tilting subcategory we are working in.

    Exactly one of ``n`` (higher Auslander algebra A_n^d) or ``kupisch``
    (higher Nakayama algebra) is set. Use the classmethods to build one.
    """

    d: int
    n: Optional[int] = None
    kupisch: Optional[KupischSeries] = None

    def __post_init__(self):
        if int(self.d) < 1:
            raise ValidationError(f"d must be a positive integer (got {self.d})")
        if (self.n is None) == (self.kupisch is None):
            raise ValidationError("a context takes exactly one of n or a Kupisch series")
        if self.n is not None and int(self.n) < 1:
            raise ValidationError(f"n must be a positive integer (got {self.n})")

    @classmethod
    def auslander(cls, n: int, d: int) -> "Context":
        return cls(d=d, n=n)

    @classmethod
    def nakayama(cls, values: Sequence[int], d: int) -> "Context":
        return cls(d=d, kupisch=KupischSeries(tuple(values), "A"))

    @classmethod
    def ainf(cls, values: Sequence[int], d: int, offset: int = 0) -> "Context":
        return cls(d=d, kupisch=KupischSeries(tuple(values), "Ainf", offset))

    @property
    def kind(self) -> str:
        if self.n is not None:
            return AUSLANDER
        return NAKAYAMA if self.kupisch.kind == "A" else AINF

    @property
    def ambient_n(self) -> Optional[int]:
        """Number of vertices of the ambient Auslander algebra, if there is one."""
        if self.n is not None:
            return self.n
        if self.kupisch.kind == "A":
            return len(self.kupisch)
        return None

    def bound(self, position: int) -> Optional[int]:
        """Loewy-length bound at ``position``; ``None`` means unbounded."""
        if self.kupisch is None:
            return None
        return self.kupisch.at(position)

    def admits(self, y: Sequence[int]) -> bool:
        """Is ``y`` (of any length) a non-decreasing tuple of this context?"""
        if any(a > b for a, b in zip(y, y[1:])):
            return False
        if self.kind == AUSLANDER:
            return 0 <= y[0] and y[-1] < self.n
        if self.kind == NAKAYAMA and not (0 <= y[0] and y[-1] < len(self.kupisch)):
            return False
        return loewy_length(y) <= self.kupisch.at(y[-1])

    def describe(self) -> dict:
        if self.kind == AUSLANDER:
            return {"kind": AUSLANDER, "n": self.n, "d": self.d}
        desc = {"kind": self.kind, "kupisch": list(self.kupisch.values), "d": self.d}
        if self.kind == AINF:
            desc["offset"] = self.kupisch.offset
        return desc

    @classmethod
    def from_description(cls, desc: dict) -> "Context":
        kind = desc.get("kind")
        if kind == AUSLANDER:
            return cls.auslander(desc["n"], desc["d"])
        if kind == NAKAYAMA:
            return cls.nakayama(desc["kupisch"], desc["d"])
        if kind == AINF:
            return cls.ainf(desc["kupisch"], desc["d"], desc.get("offset", 0))
        raise ValidationError(f"unknown context kind {kind!r}")

    def __str__(self):
        if self.kind == AUSLANDER:
            return f"Auslander(n={self.n}, d={self.d})"
        vals = ",".join(map(str, self.kupisch.values))
        if self.kind == NAKAYAMA:
            return f"NakayamaA(l=({vals}), d={self.d})"
        return f"NakayamaAInf(l=({vals}), offset={self.kupisch.offset}, d={self.d})"


# -- tuple operations -----------------------------------------------------------

def _same_length(x, y):
    if len(x) != len(y):
        raise UsageError(f"tuple length mismatch: {tuple(x)} vs {tuple(y)}")


def leq(x: Sequence[int], y: Sequence[int]) -> bool:
    """Product order."""
    _same_length(x, y)
    return all(a <= b for a, b in zip(x, y))


def squig(x: Sequence[int], y: Sequence[int]) -> bool:
    """The interleaving relation x_0 <= y_0 <= x_1 <= y_1 <= ... <= x_d <= y_d."""
    _same_length(x, y)
    prev = None
    for a, b in zip(x, y):
        if (prev is not None and prev > a) or a > b:
            return False
        prev = b
    return True


def tau_d(x: Sequence[int]) -> OsTuple:
    return tuple(c - 1 for c in x)


def loewy_length(y: Sequence[int]) -> int:
    return y[-1] - y[0] + 1


def mixtures(x: Sequence[int], z: Sequence[int]) -> Iterator[tuple]:
    """Every tuple y with y_i in {x_i, z_i}, as (y, number of positions i with y_i == z_i).

    Equal tuples reached by different choice vectors are reported once, with
    the choice that takes x_i whenever x_i == z_i.
    """
    seen = set()
    for choice in itertools.product((0, 1), repeat=len(x)):
        y = tuple(zi if c else xi for xi, zi, c in zip(x, z, choice))
        if y in seen:
            continue
        seen.add(y)
        yield y, sum(1 for yi, zi in zip(y, z) if yi == zi)


# -- universes -------------------------------------------------------------------

def _mask_rows(matrix: np.ndarray) -> list:
    """Boolean (N, N) matrix -> list of N int bitmasks (bit j set iff matrix[i, j])."""
    if matrix.shape[1] == 0:
        return [0] * matrix.shape[0]
    packed = np.packbits(matrix, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


class TupleUniverse:
    """The ordered set of indecomposables of a context, with relation tables.

    Bit ``i`` of a mask stands for ``tuples[i]``. Tables are computed lazily
    and never mutated afterwards, so one universe can be shared freely.
    """

    def __init__(self, context: Context, tuples: Sequence[tuple]):
        self.context = context
        self.d = context.d
        self.tuples = tuple(tuples)
        self.index = {t: i for i, t in enumerate(self.tuples)}
        self.size = len(self.tuples)
        self.full_mask = (1 << self.size) - 1

    def __len__(self):
        return self.size

    def __iter__(self):
        return iter(self.tuples)

    def __contains__(self, t):
        return tuple(t) in self.index

    def __repr__(self):
        return f"TupleUniverse({self.context}, size={self.size})"

    def position(self, t: Sequence[int]) -> int:
        t = tuple(t)
        try:
            return self.index[t]
        except KeyError:
            raise DomainError(f"{t} is not in the universe of {self.context}") from None

    def mask_of(self, tuples: Iterable[Sequence[int]]) -> int:
        mask = 0
        for t in tuples:
            mask |= 1 << self.position(t)
        return mask

    def tuples_of(self, mask: int) -> list:
        out = []
        while mask:
            low = mask & -mask
            out.append(self.tuples[low.bit_length() - 1])
            mask ^= low
        return out

    # relation tables, precomputed once per universe

    @cached_property
    def _array(self) -> np.ndarray:
        return np.array(self.tuples, dtype=np.int64).reshape(self.size, self.d + 1)

    def _squig_matrix(self, shift: int) -> np.ndarray:
        """M[i, j] = tuples[i] ~> (tuples[j] - shift)."""
        x = self._array[:, None, :]
        y = self._array[None, :, :] - shift
        ok = np.all(x <= y, axis=2)
        if self.d:
            ok &= np.all(y[:, :, :-1] <= x[:, :, 1:], axis=2)
        return ok

    @cached_property
    def up_masks(self) -> list:
        """up_masks[i]: every y with tuples[i] <= y and equal last coordinate."""
        x = self._array[:, None, :]
        y = self._array[None, :, :]
        rel = np.all(x <= y, axis=2) & (x[:, :, -1] == y[:, :, -1])
        return _mask_rows(rel)

    @cached_property
    def down_masks(self) -> list:
        x = self._array[:, None, :]
        y = self._array[None, :, :]
        rel = np.all(x >= y, axis=2) & (x[:, :, -1] == y[:, :, -1])
        return _mask_rows(rel)

    @cached_property
    def hom_masks(self) -> list:
        """hom_masks[i]: every y with tuples[i] ~> y."""
        return _mask_rows(self._squig_matrix(0))

    @cached_property
    def ext_out_masks(self) -> list:
        """ext_out_masks[i]: every z with tuples[i] ~> tau_d(z), i.e. Ext^d(M_z, M_x) != 0."""
        return _mask_rows(self._squig_matrix(1))

    @cached_property
    def ext_in_masks(self) -> list:
        """ext_in_masks[j]: every x with x ~> tau_d(tuples[j])."""
        return _mask_rows(self._squig_matrix(1).T)

    @cached_property
    def mixture_masks(self) -> dict:
        """(i, j) -> mask of universe mixtures of tuples[i], tuples[j], for every Ext pair."""
        table = {}
        for i, x in enumerate(self.tuples):
            row = self.ext_out_masks[i]
            while row:
                low = row & -row
                row ^= low
                j = low.bit_length() - 1
                mask = 0
                for y, _ in mixtures(x, self.tuples[j]):
                    k = self.index.get(y)
                    if k is not None:
                        mask |= 1 << k
                table[i, j] = mask
        return table


def _nondecreasing(lo: int, hi: int, length: int):
    return itertools.combinations_with_replacement(range(lo, hi + 1), length)


def _auslander_tuples(n, d):
    return list(_nondecreasing(0, n - 1, d + 1))


def _kupisch_tuples(context: Context):
    d = context.d
    out = []
    for last in context.kupisch.positions():
        bound = context.kupisch.at(last)
        if bound <= 0:
            continue
        lo = last - bound + 1
        if context.kind == NAKAYAMA:
            lo = max(lo, 0)
        for head in _nondecreasing(lo, last, d):
            out.append(head + (last,))
    return sorted(out)


def _predicted_size(context: Context) -> int:
    from math import comb
    d = context.d
    if context.kind == AUSLANDER:
        return comb(context.n + d, d + 1)
    total = 0
    for last in context.kupisch.positions():
        bound = context.kupisch.at(last)
        if bound > 0:
            if context.kind == NAKAYAMA:
                bound = min(bound, last + 1)
            total += comb(bound - 1 + d, d)
    return total


@lru_cache(maxsize=64)
def _cached_universe(context: Context, max_size: int) -> TupleUniverse:
    size = _predicted_size(context)
    if size > max_size:
        raise ResourceError(f"{context} has {size} indecomposables, above the cap of {max_size}")
    if context.kind == AUSLANDER:
        tuples = _auslander_tuples(context.n, context.d)
    else:
        tuples = _kupisch_tuples(context)
    if tuples and max(abs(tuples[0][0]), abs(tuples[-1][-1])) > MAX_COORD:
        raise ResourceError(f"coordinates of {context} exceed {MAX_COORD}")
    return TupleUniverse(context, tuples)


def build_universe(context: Context, max_size: int = MAX_UNIVERSE) -> TupleUniverse:
    """The indecomposables of ``context`` in canonical order (memoised)."""
    return _cached_universe(context, max_size)


def module_support(x: Sequence[int], context: Context) -> set:
    """Vertices (d-tuples) in the support of M_x; its size is dim M_x."""
    x = tuple(x)
    universe = build_universe(context)
    universe.position(x)
    ranges = [range(x[i], x[i + 1] + 1) for i in range(context.d)]
    support = set()
    for y in itertools.product(*ranges):
        if context.kind == AUSLANDER or context.admits(y):
            support.add(y)
    return support
