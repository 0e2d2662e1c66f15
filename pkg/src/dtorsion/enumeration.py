"""Enumerating every d-torsion class of a context."""
from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import prod
from typing import Iterator, Sequence

from dtorsion.combinatorics import (
    AINF, AUSLANDER, NAKAYAMA, Context, KupischSeries, TupleUniverse, build_universe)
from dtorsion.closure import ModuleSet, closer_for, is_torsion_mask, iter_bits, minimal_mask
from dtorsion.errors import ResourceError, UsageError

log = logging.getLogger(__name__)

MAX_CLASSES = 10**6
SWEEP_MAX_UNIVERSE = 64


def canonical_key(mask: int, size: int):
    """Sort key for (cardinality, lexicographic member list).

    For equal cardinalities the member lists first differ at the smallest
    element of the symmetric difference, and the set holding it sorts first;
    reversing the bit order turns that into plain integer comparison.
    """
    rev = int(format(mask, f"0{size}b")[::-1], 2) if size else 0
    return mask.bit_count(), -rev


@dataclass
class ClassCollection:
    """All d-torsion classes of a context, as masks in canonical order."""

    context: Context
    universe: TupleUniverse
    masks: list

    @classmethod
    def from_masks(cls, universe: TupleUniverse, masks) -> "ClassCollection":
        size = universe.size
        ordered = sorted(set(masks), key=lambda m: canonical_key(m, size))
        return cls(universe.context, universe, ordered)

    def __len__(self):
        return len(self.masks)

    def __iter__(self) -> Iterator[ModuleSet]:
        return (ModuleSet(self.universe, m) for m in self.masks)

    def __getitem__(self, i) -> ModuleSet:
        return ModuleSet(self.universe, self.masks[i])

    def index_of(self) -> dict:
        return {m: i for i, m in enumerate(self.masks)}

    def as_tuples(self) -> list:
        return [self.universe.tuples_of(m) for m in self.masks]

    def __eq__(self, other):
        if not isinstance(other, ClassCollection):
            return NotImplemented
        return self.context == other.context and self.masks == other.masks


# -- generator-set sweep -----------------------------------------------------

def enumerate_paper(context: Context, max_universe: int = SWEEP_MAX_UNIVERSE,
                    closure_method: str = "kernel") -> ClassCollection:
    """Generator-set sweep: closures of all l-element generator sets, l = 1, 2, ...

    Stops after the first level that contributes no new class. Generator sets
    containing x != y with y in dq(x) are skipped, since dropping y leaves
    the closure unchanged. Within a level, sets are visited depth-first in
    lexicographic order and the closure of each prefix is reused.
    ``closure_method="direct"`` instead recomputes every closure from scratch
    with ``generate_minimal``.
    """
    if context.kind not in (AUSLANDER, NAKAYAMA):
        raise UsageError("enumerate_paper handles Auslander and type A Nakayama contexts")
    u = build_universe(context)
    if u.size > max_universe:
        raise ResourceError(
            f"{context} has {u.size} indecomposables, above the generator-sweep cap of "
            f"{max_universe}; use enumerate_incremental")
    closer = closer_for(u)
    comparable = [u.up_masks[i] | u.down_masks[i] for i in range(u.size)]
    found = {0}
    size = u.size

    def sweep(level):
        new = 0

        def visit(start, closed, forbidden, prefix, depth):
            nonlocal new
            for i in range(start, size):
                if forbidden >> i & 1:
                    continue
                if depth + 1 == level:
                    if closure_method == "direct":
                        result = minimal_mask(u, prefix | 1 << i)
                    else:
                        result = closer.extend(closed, 1 << i)
                    if result not in found:
                        found.add(result)
                        new += 1
                else:
                    visit(i + 1, closer.extend(closed, 1 << i), forbidden | comparable[i],
                          prefix | 1 << i, depth + 1)

        visit(0, 0, 0, 0, 0)
        return new

    level = 1
    while True:
        added = sweep(level)
        log.debug("generator sets of size %d added %d classes", level, added)
        if not added:
            break
        level += 1
    return ClassCollection.from_masks(u, found)


# -- incremental join saturation ---------------------------------------------------------

_worker_closer = None


def _init_worker(context):
    global _worker_closer
    _worker_closer = closer_for(build_universe(context))


def _expand_chunk(chunk):
    return _expand(_worker_closer, chunk)


def _expand(closer, chunk):
    full = closer.universe.full_mask
    extend = closer.extend
    out = {}
    for s in chunk:
        rest = full & ~s
        while rest:
            low = rest & -rest
            rest ^= low
            t = extend(s, low)
            if t not in out:
                out[t] = None
    return list(out)


def enumerate_incremental(context: Context, workers: int = 1, max_classes: int = MAX_CLASSES,
                          chunk_size: int = 2048) -> ClassCollection:
    """Breadth-first saturation from the empty class.

    Every class is the join of dq-closures of its members, so repeatedly
    adding one missing indecomposable to a known class and closing reaches
    all of them. Each level's frontier is split into chunks that may go to
    worker processes; results are merged in chunk order, and the final
    collection is sorted canonically, so the output does not depend on
    ``workers``.
    """
    u = build_universe(context)
    closer = closer_for(u)
    seen = {0}
    frontier = [0]
    pool = ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(context,)) \
        if workers > 1 else None
    try:
        while frontier:
            chunks = [frontier[k:k + chunk_size] for k in range(0, len(frontier), chunk_size)]
            if pool is None:
                results = (_expand(closer, c) for c in chunks)
            else:
                results = pool.map(_expand_chunk, chunks)
            nxt = []
            for batch in results:
                for t in batch:
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
                if len(seen) > max_classes:
                    raise ResourceError(
                        f"{context} has more than {max_classes} d-torsion classes (class cap)")
            log.debug("level done: %d new, %d total", len(nxt), len(seen))
            frontier = nxt
    finally:
        if pool is not None:
            pool.shutdown()
    return ClassCollection.from_masks(u, seen)


def enumerate_classes(context: Context, algorithm: str = "incremental", workers: int = 1,
                      max_classes: int = MAX_CLASSES) -> ClassCollection:
    if context.kind == AINF:
        raise UsageError("use enumerate_ainf for A-infinity Kupisch series")
    if algorithm == "incremental":
        return enumerate_incremental(context, workers=workers, max_classes=max_classes)
    if algorithm == "paper":
        return enumerate_paper(context)
    raise UsageError(f"unknown algorithm {algorithm!r}")


def brute_force_classes(context: Context, max_universe: int = 20) -> ClassCollection:
    """Filter every subset of the universe through the torsion-class test."""
    u = build_universe(context)
    if u.size > max_universe:
        raise ResourceError(f"brute force over 2^{u.size} subsets refused")
    return ClassCollection.from_masks(u, [m for m in range(1 << u.size) if is_torsion_mask(u, m)])


# -- finite A-infinity Kupisch series ---------------------------------------------------

@dataclass(frozen=True)
class BlockDecomposition:
    """Type A pieces of a finite A-infinity series; ``blocks`` holds (offset, series)."""

    blocks: tuple

    def reassemble(self) -> KupischSeries:
        if not self.blocks:
            return KupischSeries((), "Ainf")
        start = self.blocks[0][0]
        end = self.blocks[-1][0] + len(self.blocks[-1][1])
        values = [0] * (end - start)
        for offset, series in self.blocks:
            values[offset - start:offset - start + len(series)] = series.values
        return KupischSeries(tuple(values), "Ainf", start)


def decompose_blocks(series: KupischSeries) -> BlockDecomposition:
    """Cut the window before every entry <= 1.

    Nothing straddles such a cut: a tuple y with y_0 < i <= y_d and l_i <= 1
    would need Loewy length above l_{y_d}.
    """
    if series.kind != "Ainf":
        raise UsageError("decompose_blocks expects an A-infinity Kupisch series")
    blocks = []
    current = None
    for pos in series.positions():
        v = series.at(pos)
        if v <= 1:
            if current is not None:
                blocks.append(current)
            current = (pos, [1]) if v == 1 else None
        else:
            current[1].append(v)
    if current is not None:
        blocks.append(current)
    return BlockDecomposition(tuple((off, KupischSeries(tuple(vals), "A")) for off, vals in blocks))


@dataclass
class AInfEnumeration:
    context: Context
    decomposition: BlockDecomposition
    collections: list

    @property
    def count(self) -> int:
        return prod(len(c) for c in self.collections)

    def iter_index_tuples(self) -> Iterator[tuple]:
        """Global classes as one class index per block, in lexicographic order."""
        return itertools.product(*(range(len(c)) for c in self.collections))

    def materialise(self, choice: Sequence[int]) -> ModuleSet:
        u = build_universe(self.context)
        members = []
        for (offset, _), coll, i in zip(self.decomposition.blocks, self.collections, choice):
            members.extend(tuple(c + offset for c in t) for t in coll.universe.tuples_of(coll.masks[i]))
        return ModuleSet.from_tuples(u, members)

    def iter_classes(self) -> Iterator[ModuleSet]:
        return (self.materialise(c) for c in self.iter_index_tuples())


def enumerate_ainf(context: Context, algorithm: str = "incremental", workers: int = 1,
                   max_classes: int = MAX_CLASSES) -> AInfEnumeration:
    if context.kind != AINF:
        raise UsageError("enumerate_ainf expects an A-infinity context")
    decomposition = decompose_blocks(context.kupisch)
    collections = [
        enumerate_classes(Context.nakayama(series.values, context.d), algorithm, workers, max_classes)
        for _, series in decomposition.blocks
    ]
    return AInfEnumeration(context, decomposition, collections)


# -- restriction to a Nakayama quotient --------------------------------------------------

def restrict_mask(mask: int, source: TupleUniverse, target: TupleUniverse) -> int:
    index = target.index
    out = 0
    for i in iter_bits(mask):
        j = index.get(source.tuples[i])
        if j is not None:
            out |= 1 << j
    return out


def restrict(classes: ClassCollection, kupisch: Sequence[int]) -> ClassCollection:
    """Images I -> I ∩ os_l of every class, as a collection over the Nakayama context."""
    if classes.context.kind != AUSLANDER:
        raise UsageError("restrict expects classes of a higher Auslander context")
    kupisch = tuple(kupisch.values if isinstance(kupisch, KupischSeries) else kupisch)
    if len(kupisch) != classes.context.n:
        raise UsageError(
            f"Kupisch series has length {len(kupisch)} but the Auslander context has n={classes.context.n}")
    target = build_universe(Context.nakayama(kupisch, classes.context.d))
    return ClassCollection.from_masks(
        target, [restrict_mask(m, classes.universe, target) for m in classes.masks])
