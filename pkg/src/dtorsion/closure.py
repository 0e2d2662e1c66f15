"""d-quotient closure, d-extension closure and the torsion-class test."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from dtorsion.combinatorics import AUSLANDER, TupleUniverse
from dtorsion.errors import UsageError


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class ModuleSet:
    """A set of indecomposables of one universe, stored as a bitmask."""

    __slots__ = ("universe", "mask")

    def __init__(self, universe: TupleUniverse, mask: int = 0):
        if mask & ~universe.full_mask:
            raise UsageError("mask has bits outside the universe")
        self.universe = universe
        self.mask = mask

    @classmethod
    def from_tuples(cls, universe: TupleUniverse, tuples: Iterable[Sequence[int]]) -> "ModuleSet":
        return cls(universe, universe.mask_of(tuples))

    @classmethod
    def full(cls, universe: TupleUniverse) -> "ModuleSet":
        return cls(universe, universe.full_mask)

    def tuples(self) -> list:
        return self.universe.tuples_of(self.mask)

    def indices(self) -> list:
        return list(iter_bits(self.mask))

    def __iter__(self):
        return iter(self.tuples())

    def __len__(self):
        return self.mask.bit_count()

    def __contains__(self, t):
        i = self.universe.index.get(tuple(t))
        return i is not None and bool(self.mask >> i & 1)

    def _check(self, other):
        if other.universe.context != self.universe.context:
            raise UsageError("module sets from different universes")

    def __and__(self, other):
        self._check(other)
        return ModuleSet(self.universe, self.mask & other.mask)

    def __or__(self, other):
        self._check(other)
        return ModuleSet(self.universe, self.mask | other.mask)

    def __le__(self, other):
        self._check(other)
        return self.mask & ~other.mask == 0

    def __eq__(self, other):
        if not isinstance(other, ModuleSet):
            return NotImplemented
        return self.mask == other.mask and self.universe.context == other.universe.context

    def __hash__(self):
        return hash((self.universe.context, self.mask))

    def __repr__(self):
        body = ", ".join("".join(map(str, t)) if all(0 <= c < 10 for c in t) else str(t)
                         for t in self.tuples())
        return f"ModuleSet({{{body}}})"


# -- d-quotient closure ---------------------------------------------------------

def dq_single(x: Sequence[int], u: TupleUniverse) -> ModuleSet:
    """{y : x <= y and x_d = y_d}, the smallest d-quotient closed set containing x."""
    return ModuleSet(u, u.up_masks[u.position(x)])


def dq_mask(u: TupleUniverse, mask: int) -> int:
    up = u.up_masks
    out = mask
    for i in iter_bits(mask):
        out |= up[i]
    return out


def dq_set(members: ModuleSet) -> ModuleSet:
    return ModuleSet(members.universe, dq_mask(members.universe, members.mask))


# -- torsion-class test -----------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    """Why a set fails to be a d-torsion class.

    ``condition`` 1: ``x`` is in the set, ``y`` lies above it in the same
    last-coordinate layer but is missing (``z`` is ``y``).
    ``condition`` 2: ``x``, ``z`` are in the set with x ~> tau_d(z) and the
    mixture ``y`` is missing.
    """

    condition: int
    x: tuple
    z: tuple
    y: tuple

    def as_dict(self) -> dict:
        return {"condition": self.condition, "x": list(self.x), "z": list(self.z), "y": list(self.y)}


def find_violation(u: TupleUniverse, mask: int) -> Optional[Violation]:
    """First violation in canonical order, condition 1 before condition 2."""
    tuples = u.tuples
    for i in iter_bits(mask):
        missing = u.up_masks[i] & ~mask
        if missing:
            j = (missing & -missing).bit_length() - 1
            return Violation(1, tuples[i], tuples[j], tuples[j])
    mix = u.mixture_masks
    for i in iter_bits(mask):
        for j in iter_bits(u.ext_out_masks[i] & mask):
            missing = mix[i, j] & ~mask
            if missing:
                k = (missing & -missing).bit_length() - 1
                return Violation(2, tuples[i], tuples[j], tuples[k])
    return None


def is_torsion_mask(u: TupleUniverse, mask: int) -> bool:
    for i in iter_bits(mask):
        if u.up_masks[i] & ~mask:
            return False
    mix = u.mixture_masks
    for i in iter_bits(mask):
        for j in iter_bits(u.ext_out_masks[i] & mask):
            if mix[i, j] & ~mask:
                return False
    return True


def is_torsion_class(members: ModuleSet) -> tuple:
    """(verdict, witness); the witness is ``None`` on success."""
    witness = find_violation(members.universe, members.mask)
    return witness is None, witness


# -- minimal torsion class containing a set -------------------------------------------

def _layer_fill(u: TupleUniverse, mask: int, frontier: bool) -> int:
    """Alternate "add (x_0..x_{d-1}, y_d) for Ext pairs" and "dq-close" until stable."""
    tuples, index = u.tuples, u.index
    ext_out, ext_in = u.ext_out_masks, u.ext_in_masks
    current = mask
    fresh = mask
    while True:
        scan = fresh if frontier else current
        added = 0
        # step 2: pairs with at least one member in `scan`
        for i in iter_bits(scan):
            xi = tuples[i]
            for j in iter_bits(ext_out[i] & current):
                added |= 1 << index[xi[:-1] + tuples[j][-1:]]
            for j in iter_bits(ext_in[i] & current):
                added |= 1 << index[tuples[j][:-1] + xi[-1:]]
        after_ext = current | added
        # step 3
        dq_from = (after_ext & ~current) | scan if frontier else after_ext
        after_dq = after_ext | dq_mask(u, dq_from)
        if after_dq == current:
            return current
        fresh = after_dq & ~current
        current = after_dq


def _condition_fixpoint(u: TupleUniverse, mask: int, frontier: bool) -> int:
    """Close under both characterising conditions until nothing changes."""
    ext_out, ext_in, mix = u.ext_out_masks, u.ext_in_masks, u.mixture_masks
    current = mask
    fresh = mask
    while True:
        scan = fresh if frontier else current
        added = dq_mask(u, scan)
        for i in iter_bits(scan):
            for j in iter_bits(ext_out[i] & current):
                added |= mix[i, j]
            for j in iter_bits(ext_in[i] & current):
                added |= mix[j, i]
        new = current | added
        if new == current:
            return current
        fresh = new & ~current
        current = new


def minimal_mask(u: TupleUniverse, mask: int, method: str = "auto", frontier: bool = True) -> int:
    if method == "auto":
        method = "paper" if u.context.kind == AUSLANDER else "fixpoint"
    if method == "paper":
        if u.context.kind != AUSLANDER:
            raise UsageError("the single-mixture closure is only valid for higher Auslander contexts")
        return _layer_fill(u, mask, frontier)
    if method == "fixpoint":
        return _condition_fixpoint(u, mask, frontier)
    raise UsageError(f"unknown closure method {method!r}")


def generate_minimal(generators: Iterable[Sequence[int]], u: TupleUniverse,
                     method: str = "auto", frontier: bool = True) -> ModuleSet:
    """Smallest d-torsion class containing ``generators``.

    ``method="paper"`` (the default on Auslander contexts) only adds the top
    mixture of each Ext pair and relies on dq-closure for the rest;
    ``"fixpoint"`` (default elsewhere) adds every mixture in the universe.
    ``frontier=False`` rescans all pairs on every round.
    """
    return ModuleSet(u, minimal_mask(u, u.mask_of(generators), method, frontier))


class Closer:
    """Incremental closure for sets that are already torsion classes.

    ``extend(closed, new)`` returns the least torsion class containing both;
    each newly added element is processed exactly once, pairing it with
    every Ext partner already present.
    """

    def __init__(self, u: TupleUniverse):
        self.universe = u
        self.up = u.up_masks
        partners = [{} for _ in range(u.size)]
        for (i, j), req in u.mixture_masks.items():
            bi, bj = 1 << i, 1 << j
            partners[i][bj] = partners[i].get(bj, 0) | req
            partners[j][bi] = partners[j].get(bi, 0) | req
        self.partners = partners
        self.partner_masks = [sum(p) for p in partners]

    def extend(self, closed: int, new: int) -> int:
        up, partners, pmask = self.up, self.partners, self.partner_masks
        todo = new & ~closed
        s = closed
        while todo:
            low = todo & -todo
            todo ^= low
            s |= low
            e = low.bit_length() - 1
            add = up[e]
            hits = pmask[e] & s
            if hits:
                req = partners[e]
                while hits:
                    b = hits & -hits
                    hits ^= b
                    add |= req[b]
            todo |= add & ~s
        return s

    def close(self, mask: int) -> int:
        return self.extend(0, mask)


def closer_for(u: TupleUniverse) -> Closer:
    closer = u.__dict__.get("_closer")
    if closer is None:
        closer = u.__dict__["_closer"] = Closer(u)
    return closer
