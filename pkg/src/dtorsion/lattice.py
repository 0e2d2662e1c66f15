"""The lattice of d-torsion classes: meets, joins, Hasse diagram, structural checks."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional

import numpy as np

from dtorsion.closure import ModuleSet, closer_for, find_violation, iter_bits
from dtorsion.enumeration import ClassCollection
from dtorsion.errors import InconsistentDataError, ResourceError, UsageError

MAX_TRIPLE_SCAN = 2000


def _require_torsion(*sets: ModuleSet):
    for s in sets:
        witness = find_violation(s.universe, s.mask)
        if witness is not None:
            raise UsageError(f"{s} is not a d-torsion class (violates condition {witness.condition})")


def meet(U: ModuleSet, V: ModuleSet) -> ModuleSet:
    _require_torsion(U, V)
    result = U & V
    assert find_violation(result.universe, result.mask) is None
    return result


def join(U: ModuleSet, V: ModuleSet) -> ModuleSet:
    _require_torsion(U, V)
    U._check(V)
    return ModuleSet(U.universe, closer_for(U.universe).extend(U.mask, V.mask))


@dataclass
class TorsionLattice:
    collection: ClassCollection
    covers: list  # (upper index, lower index), sorted
    top: int
    bottom: int

    def __len__(self):
        return len(self.collection)

    def degrees(self) -> list:
        deg = [0] * len(self.collection)
        for upper, lower in self.covers:
            deg[upper] += 1
            deg[lower] += 1
        return deg


def _check_ends(collection: ClassCollection):
    index = collection.index_of()
    full = collection.universe.full_mask
    if 0 not in index or full not in index:
        raise InconsistentDataError("collection lacks the zero class or the full subcategory")
    return index, index[full], index[0]


def minimal_extension_covers(collection: ClassCollection) -> list:
    """Covers of U are the inclusion-minimal classes among closure(U + x), x not in U."""
    index, _, _ = _check_ends(collection)
    closer = closer_for(collection.universe)
    full = collection.universe.full_mask
    covers = []
    for lower, mask in enumerate(collection.masks):
        candidates = {closer.extend(mask, 1 << x) for x in iter_bits(full & ~mask)}
        for v in candidates:
            if any(w != v and w & ~v == 0 for w in candidates):
                continue
            upper = index.get(v)
            if upper is None:
                raise InconsistentDataError(
                    f"class #{lower} extends to a torsion class missing from the collection")
            covers.append((upper, lower))
    covers.sort()
    return covers


def inclusion_covers(collection: ClassCollection) -> list:
    """Transitive reduction of strict inclusion by pairwise scan (cubic; for checking)."""
    masks = collection.masks
    n = len(masks)
    below = [[j for j in range(n) if j != i and masks[j] & ~masks[i] == 0] for i in range(n)]
    covers = []
    for i in range(n):
        strict = set(below[i])
        for j in below[i]:
            if not any(k in strict and masks[j] & ~masks[k] == 0 and k != j for k in below[i]):
                covers.append((i, j))
    covers.sort()
    return covers


def build_hasse(collection: ClassCollection, method: str = "extension") -> TorsionLattice:
    _, top, bottom = _check_ends(collection)
    if method == "extension":
        covers = minimal_extension_covers(collection)
    elif method == "inclusion":
        covers = inclusion_covers(collection)
    else:
        raise UsageError(f"unknown cover method {method!r}")
    return TorsionLattice(collection, covers, top, bottom)


# -- operation tables and structural checks -----------------------------------------

def meet_table(collection: ClassCollection) -> np.ndarray:
    index = collection.index_of()
    masks = collection.masks
    n = len(masks)
    table = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(a, n):
            m = index.get(masks[a] & masks[b])
            if m is None:
                raise InconsistentDataError(f"classes #{a} and #{b} meet outside the collection")
            table[a, b] = table[b, a] = m
    return table


def join_table(collection: ClassCollection) -> np.ndarray:
    index = collection.index_of()
    masks = collection.masks
    closer = closer_for(collection.universe)
    n = len(masks)
    table = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(a, n):
            m = index.get(closer.extend(masks[a], masks[b]))
            if m is None:
                raise InconsistentDataError(f"classes #{a} and #{b} join outside the collection")
            table[a, b] = table[b, a] = m
    return table


def is_lattice(collection: ClassCollection) -> bool:
    try:
        _check_ends(collection)
        meet_table(collection)
        join_table(collection)
    except InconsistentDataError:
        return False
    return True


@dataclass(frozen=True)
class SemidistributivityReport:
    join_sd: bool
    meet_sd: bool
    join_witness: Optional[tuple]
    meet_witness: Optional[tuple]

    @property
    def semidistributive(self) -> bool:
        return self.join_sd and self.meet_sd

    @property
    def witness(self) -> Optional[dict]:
        if self.join_witness is not None:
            return {"law": "join", "triple": list(self.join_witness)}
        if self.meet_witness is not None:
            return {"law": "meet", "triple": list(self.meet_witness)}
        return None


def _first_violation(op: np.ndarray, dual: np.ndarray) -> Optional[tuple]:
    """First (a, b, c) with op(a,b) = op(a,c) but op(a,b) != op(a, dual(b,c))."""
    for a in range(op.shape[0]):
        row = op[a]
        bad = (row[:, None] == row[None, :]) & (row[:, None] != row[dual])
        if bad.any():
            b, c = np.unravel_index(int(np.argmax(bad)), bad.shape)
            return a, int(b), int(c)
    return None


def check_semidistributive(lat: TorsionLattice, max_nodes: int = MAX_TRIPLE_SCAN,
                           force: bool = False) -> SemidistributivityReport:
    """Exhaustive triple scan of both semidistributive laws.

    Join: a v b = a v c implies a v b = a v (b ^ c); meet is the dual.
    Witnesses are node indices, the first violation in lexicographic order.
    """
    n = len(lat.collection)
    if n > max_nodes and not force:
        raise ResourceError(f"triple scan over {n} classes exceeds the cap of {max_nodes}")
    meets = meet_table(lat.collection)
    joins = join_table(lat.collection)
    jw = _first_violation(joins, meets)
    mw = _first_violation(meets, joins)
    return SemidistributivityReport(jw is None, mw is None, jw, mw)


def check_hasse_regular(lat: TorsionLattice) -> tuple:
    """(regular, {degree: count}), degree counting covers in both directions."""
    multiset = Counter(lat.degrees())
    return len(multiset) <= 1, dict(sorted(multiset.items()))


def property_report(lat: TorsionLattice, max_nodes: int = MAX_TRIPLE_SCAN, force: bool = False) -> dict:
    lattice_ok = is_lattice(lat.collection)
    if lattice_ok:
        sd = check_semidistributive(lat, max_nodes, force)
        join_sd, meet_sd, witness = sd.join_sd, sd.meet_sd, sd.witness
    else:
        join_sd = meet_sd = False
        witness = None
    regular, degrees = check_hasse_regular(lat)
    return {
        "is_lattice": lattice_ok,
        "join_semidistributive": join_sd,
        "meet_semidistributive": meet_sd,
        "witness": witness,
        "hasse_regular": regular,
        "degree_multiset": {str(k): v for k, v in degrees.items()},
    }
