import itertools
import random

import numpy as np
import pytest

from entrolp import (
    Dependency,
    SymmetryGroup,
    build_reduction_map,
    check_group,
    dependency_closure,
    parse_file,
)
from entrolp.reduction import GROUP_OK_MESSAGE, reduction_report_lines

from .oracles import brute_force_classes, brute_force_closure, close_permutations


def _pd(n, deps=(), perms=(), al=0):
    """A bare problem description for reduction tests."""
    from entrolp.model import ProblemDescription

    return ProblemDescription(
        rv_names=[f"V{k}" for k in range(n)],
        al_names=[f"C{k}" for k in range(al)],
        sym=SymmetryGroup(perms=tuple(tuple(p) for p in perms)),
        deps=[Dependency(dependent=d, given=g) for d, g in deps],
    )


# ---------------------------------------------------------------------------
# group checking


def test_full_symmetric_action_is_a_group(rg16_pd):
    report = check_group(rg16_pd.sym, rg16_pd.rv_names)
    assert report.ok
    assert report.message == GROUP_OK_MESSAGE


def test_identity_alone_is_a_group():
    report = check_group(SymmetryGroup(perms=((0, 1, 2),)))
    assert report.ok


def test_empty_rows_are_trivially_fine():
    assert check_group(SymmetryGroup(perms=())).ok


def test_missing_composition_detected():
    # two transpositions of S3 without their product
    rows = ((0, 1, 2), (1, 0, 2), (0, 2, 1))
    report = check_group(SymmetryGroup(perms=rows), ["X", "Y", "Z"])
    assert not report.ok
    assert report.message.startswith("Bad Symmetry -- missing permutation")
    # the closure of the two generators is all of S3
    assert len(close_permutations(rows, 3)) == 6
    assert report.missing in set(close_permutations(rows, 3))


def test_missing_identity_detected():
    report = check_group(SymmetryGroup(perms=((1, 0),)))
    assert not report.ok


# ---------------------------------------------------------------------------
# dependency closure


def test_closure_simple_chain():
    deps = [Dependency(dependent=0b100, given=0b011),
            Dependency(dependent=0b1000, given=0b100)]
    assert dependency_closure(0b011, deps) == 0b1111
    assert dependency_closure(0b001, deps) == 0b001


def test_closure_empty_set_stays_empty():
    deps = [Dependency(dependent=0b10, given=0b01)]
    assert dependency_closure(0, deps) == 0


def test_closure_without_deps_is_identity():
    assert dependency_closure(0b1011, []) == 0b1011


def test_closure_regenerating_repair_chain(rg16_pd):
    # incoming repair data for node 1 pins down W1 and its outgoing data,
    # and nothing else (the other nodes' givens stay incomplete)
    pd = rg16_pd
    idx = pd.rv_index
    s = sum(1 << idx[nm] for nm in ("S21", "S31", "S41"))
    closed = dependency_closure(s, pd.deps)
    expect = s | sum(1 << idx[nm] for nm in ("W1", "S12", "S13", "S14"))
    assert closed == expect
    from .oracles import brute_force_closure

    assert closed == brute_force_closure(
        s, [(d.dependent, d.given) for d in pd.deps])
    # the full collection of node contents does reach the full support
    w_all = sum(1 << idx[f"W{i}"] for i in range(1, 5))
    assert dependency_closure(w_all, pd.deps) == (1 << 16) - 1


def test_closure_matches_bruteforce_oracle():
    rnd = random.Random(7)
    for _ in range(100):
        n = rnd.randint(2, 6)
        deps = []
        for _k in range(rnd.randint(0, 4)):
            giv = rnd.randrange(1 << n)
            dep = rnd.randrange(1, 1 << n) & ~giv
            if dep:
                deps.append(Dependency(dependent=dep, given=giv))
        s = rnd.randrange(1 << n)
        expect = brute_force_closure(s, [(d.dependent, d.given) for d in deps])
        assert dependency_closure(s, deps) == expect


# ---------------------------------------------------------------------------
# the canonical map


def test_trivial_reduction_count():
    rmap = build_reduction_map(_pd(4))
    assert rmap.count_before == 16
    assert rmap.count_after == 16


def test_three_rv_example():
    # V2 determined by (V0, V1); V0 and V1 interchangeable
    pd = _pd(3, deps=[(0b100, 0b011)], perms=[(0, 1, 2), (1, 0, 2)])
    rmap = build_reduction_map(pd)
    classes = {}
    for s in range(8):
        classes.setdefault(int(rmap.canon[s]), set()).add(s)
    assert classes == {
        0b000: {0b000},
        0b001: {0b001, 0b010},
        0b100: {0b100},
        0b011: {0b011, 0b111},
        0b101: {0b101, 0b110},
    }
    assert rmap.count_after == 5


def test_canon_invariants(rg16_rmap, rg16_pd):
    rmap = rg16_rmap
    canon = rmap.canon
    assert canon[0] == 0
    # idempotence over everything
    assert np.array_equal(canon[canon], canon)
    # invariance under every group row (spot sample for speed)
    rng = np.random.default_rng(1)
    sample = rng.integers(0, 1 << 16, size=4096)
    for perm in rg16_pd.sym.perms[:6]:
        img = np.zeros_like(sample)
        for j in range(16):
            img |= ((sample >> j) & 1) << perm[j]
        assert np.array_equal(canon[img], canon[sample])
    # dependency merge rule
    for d in rg16_pd.deps:
        sel = (sample & d.given) == d.given
        assert np.array_equal(canon[sample[sel] | d.dependent], canon[sample[sel]])


def test_acceptance_counts(rg16_rmap, rg16_pd):
    assert rg16_rmap.count_before == 65536
    lines = reduction_report_lines(rg16_rmap, len(rg16_pd.al_names))
    assert lines[0] == "Total number of elements before reduction: 65536"
    assert lines[1] == "Total number of elements after reduction: 179"


def test_map_matches_bruteforce_oracle():
    rnd = random.Random(11)
    for trial in range(30):
        n = rnd.randint(2, 4)
        deps = []
        for _k in range(rnd.randint(0, 3)):
            giv = rnd.randrange(1 << n)
            dep = rnd.randrange(1, 1 << n) & ~giv
            if dep:
                deps.append((dep, giv))
        gens = []
        for _k in range(rnd.randint(0, 2)):
            p = list(range(n))
            rnd.shuffle(p)
            gens.append(tuple(p))
        group = close_permutations(gens, n)
        pd = _pd(n, deps=deps, perms=group)
        rmap = build_reduction_map(pd)
        oracle = brute_force_classes(n, deps, group)
        for s in range(1 << n):
            assert int(rmap.canon[s]) == oracle[s], (trial, n, deps, group, s)


def test_subgroup_never_merges_more():
    # the full node action vs the subgroup fixing node 1
    text = open("problems/PDRG4x3x3.pd").read()
    pd = parse_file(text).pd
    full = build_reduction_map(pd).count_after

    keep = []
    for perm in pd.sym.perms:
        if perm[0] == 0:  # W1 fixed
            keep.append(perm)
    assert len(keep) == 6
    from dataclasses import replace

    sub = replace(pd, sym=SymmetryGroup(perms=tuple(keep)))
    sub_count = build_reduction_map(sub).count_after
    assert sub_count >= full


def test_orbit_minimum_without_deps():
    # pure orbit canonicalization: canon is the orbit minimum
    n = 4
    group = close_permutations([(1, 0, 2, 3), (0, 2, 1, 3)], n)
    pd = _pd(n, perms=group)
    rmap = build_reduction_map(pd)
    for s in range(1 << n):
        orbit = set()
        for g in group:
            img = 0
            for j in range(n):
                if s >> j & 1:
                    img |= 1 << g[j]
            orbit.add(img)
        assert int(rmap.canon[s]) == min(orbit)


def test_index_of_is_dense_and_ascending(rg16_rmap):
    reps = rg16_rmap.reps
    assert reps == sorted(reps)
    assert 0 not in rg16_rmap.index_of
    assert sorted(rg16_rmap.index_of.values()) == list(range(len(reps)))
