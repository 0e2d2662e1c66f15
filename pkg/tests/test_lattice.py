import random

import pytest

from dtorsion import (
    Context, ModuleSet, build_hasse, build_universe, check_hasse_regular, check_semidistributive,
    dq_single, enumerate_incremental, generate_minimal, join, meet)
from dtorsion.enumeration import ClassCollection, restrict_mask
from dtorsion.errors import InconsistentDataError, ResourceError, UsageError
from dtorsion.lattice import inclusion_covers, is_lattice, property_report

import oracles

NAK = build_universe(Context.nakayama((1, 2, 2, 3), 2))
A32 = build_universe(Context.auslander(3, 2))


def ms(u, tuples):
    return ModuleSet.from_tuples(u, tuples)


def test_meet_examples():
    u = ms(NAK, [(0, 0, 0), (1, 3, 3), (2, 2, 2), (2, 2, 3), (2, 3, 3), (3, 3, 3)])
    v = ms(NAK, [(1, 1, 2), (1, 1, 3), (1, 2, 2), (1, 2, 3), (2, 2, 2), (1, 3, 3), (2, 2, 3), (2, 3, 3), (3, 3, 3)])
    assert meet(u, ModuleSet.full(NAK)) == u
    assert meet(u, ms(NAK, [])) == ms(NAK, [])
    assert meet(u, v) == ms(NAK, [(2, 2, 2), (1, 3, 3), (2, 2, 3), (2, 3, 3), (3, 3, 3)])
    with pytest.raises(UsageError):
        meet(ms(A32, [(0, 0, 0), (1, 1, 1)]), ModuleSet.full(A32))


def test_join_examples():
    u = dq_single((0, 0, 0), A32)
    v = dq_single((1, 1, 1), A32)
    assert join(u, ms(A32, [])) == u
    assert join(u, ModuleSet.full(A32)) == ModuleSet.full(A32)
    assert join(u, v) == generate_minimal([(0, 0, 0), (1, 1, 1)], A32) == \
        ms(A32, [(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1)])


def test_join_laws():
    coll = enumerate_incremental(Context.auslander(4, 2))
    rng = random.Random(4)
    sets = list(coll)
    empty, full = ms(coll.universe, []), ModuleSet.full(coll.universe)
    for _ in range(300):
        a, b, c = rng.sample(sets, 3)
        assert join(a, b) == join(b, a)
        assert join(join(a, b), c) == join(a, join(b, c))
        assert join(a, a) == a and join(a, empty) == a and join(a, full) == full


def test_hasse_examples():
    lat = build_hasse(enumerate_incremental(Context.auslander(1, 1)))
    assert len(lat) == 2 and lat.covers == [(1, 0)]
    assert len(build_hasse(enumerate_incremental(Context.auslander(3, 3)))) == 46
    pent = build_hasse(enumerate_incremental(Context.auslander(2, 1)))
    assert len(pent) == 5
    brute = oracles.cover_pairs(oracles.all_torsion_classes(oracles.auslander_tuples(2, 1)))
    assert len(pent.covers) == len(brute) == 5


@pytest.mark.parametrize("ctx", [Context.auslander(3, 2), Context.auslander(4, 2), Context.auslander(3, 3),
                                 Context.nakayama((1, 2, 2, 3), 2), Context.auslander(2, 6)], ids=str)
def test_extension_covers_equal_transitive_reduction(ctx):
    coll = enumerate_incremental(ctx)
    lat = build_hasse(coll)
    assert lat.covers == inclusion_covers(coll)
    for upper, lower in lat.covers:
        assert coll.masks[lower] & ~coll.masks[upper] == 0 and coll.masks[lower] != coll.masks[upper]
    if len(coll.universe) <= 13:
        brute = oracles.cover_pairs([frozenset(c) for c in coll.as_tuples()])
        got = {(frozenset(coll.universe.tuples_of(coll.masks[a])), frozenset(coll.universe.tuples_of(coll.masks[b])))
               for a, b in lat.covers}
        assert got == brute


def test_semidistributive_chain():
    lat = build_hasse(enumerate_incremental(Context.auslander(1, 4)))
    report = check_semidistributive(lat)
    assert report.join_sd and report.meet_sd and report.witness is None
    assert check_hasse_regular(lat) == (True, {1: 2})


def test_auslander_2_2_against_oracle():
    lat = build_hasse(enumerate_incremental(Context.auslander(2, 2)))
    classes = oracles.all_torsion_classes(oracles.auslander_tuples(2, 2))
    join_sd, meet_sd = oracles.semidistributive(classes)
    assert (join_sd, meet_sd) == (True, True)
    report = check_semidistributive(lat)
    assert (report.join_sd, report.meet_sd) == (join_sd, meet_sd)
    assert check_hasse_regular(lat) == (True, {2: 6})


@pytest.mark.parametrize("n,d", [(3, 2), (2, 3), (4, 1)])
def test_semidistributive_against_oracle(n, d):
    lat = build_hasse(enumerate_incremental(Context.auslander(n, d)))
    classes = oracles.all_torsion_classes(oracles.auslander_tuples(n, d))
    report = check_semidistributive(lat)
    assert (report.join_sd, report.meet_sd) == oracles.semidistributive(classes)


def test_a33_structure():
    lat = build_hasse(enumerate_incremental(Context.auslander(3, 3)))
    report = check_semidistributive(lat)
    assert not report.meet_sd
    a, b, c = report.meet_witness
    masks = lat.collection.masks
    # a ^ b == a ^ c but a ^ (b v c) differs
    assert masks[a] & masks[b] == masks[a] & masks[c]
    bc = generate_minimal(lat.collection.universe.tuples_of(masks[b] | masks[c]), lat.collection.universe).mask
    assert masks[a] & bc != masks[a] & masks[b]
    regular, degrees = check_hasse_regular(lat)
    assert not regular and {3, 4, 5} <= set(degrees)


def test_triple_scan_cap():
    lat = build_hasse(enumerate_incremental(Context.auslander(3, 3)))
    with pytest.raises(ResourceError):
        check_semidistributive(lat, max_nodes=10)
    assert check_semidistributive(lat, max_nodes=10, force=True).meet_witness is not None


def test_incomplete_collection_rejected():
    coll = enumerate_incremental(Context.auslander(3, 2))
    broken = ClassCollection.from_masks(coll.universe, coll.masks[:-2] + coll.masks[-1:])
    with pytest.raises(InconsistentDataError):
        build_hasse(broken)
    no_top = ClassCollection.from_masks(coll.universe, coll.masks[:-1])
    with pytest.raises(InconsistentDataError):
        build_hasse(no_top)
    assert not is_lattice(no_top)


def test_restriction_preserves_meets():
    coll = enumerate_incremental(Context.auslander(4, 2))
    target = build_universe(Context.nakayama((1, 2, 2, 3), 2))
    r = {m: restrict_mask(m, coll.universe, target) for m in coll.masks}
    for a in coll.masks:
        for b in coll.masks:
            assert restrict_mask(a & b, coll.universe, target) == r[a] & r[b]


def test_property_report_shape():
    report = property_report(build_hasse(enumerate_incremental(Context.auslander(1, 1))))
    assert report == {"is_lattice": True, "join_semidistributive": True, "meet_semidistributive": True,
                      "witness": None, "hasse_regular": True, "degree_multiset": {"1": 2}}
