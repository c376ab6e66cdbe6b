"""Acceptance suite: every criterion prints one [PASS]/[FAIL] line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import contextlib
import json
import os
import random
import time

import numpy as np
import pytest

from entrolp import (
    assemble,
    build_reduction_map,
    parse_file,
    run_hull,
    run_prove,
    run_regular,
    run_sensitivity,
    serialize,
    solve_lp,
)
from entrolp.lp_build import elemental_count
from entrolp.reduction import reduction_report_lines

from .oracles import brute_force_classes, close_permutations, joint_entropies_from_pmf, random_pmf, vertex_enumeration_min


@contextlib.contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"[FAIL] {name}")
        raise
    print(f"[PASS] {name}")


def test_reduction_counts(rg16_pd):
    with criterion("reduction counts 65536 -> 179 in under 10 s"):
        t0 = time.monotonic()
        rmap = build_reduction_map(rg16_pd)
        elapsed = time.monotonic() - t0
        lines = reduction_report_lines(rmap, len(rg16_pd.al_names))
        assert lines[0] == "Total number of elements before reduction: 65536"
        assert lines[1] == "Total number of elements after reduction: 179"
        assert elapsed < 10.0, f"reduction took {elapsed:.1f} s"


def test_regular_mode(rg16_pd, rg16_instance):
    with criterion("regular mode: optimum 0.625 and queried values"):
        res = run_regular(rg16_pd, rg16_instance)
        assert res.optimal_value == pytest.approx(0.625, abs=1e-6)
        values = dict(res.queries)
        assert values["A"] == pytest.approx(0.375, abs=1e-5)
        assert values["B"] == pytest.approx(0.25, abs=1e-5)
        assert values["2H(S12|S13)"] == pytest.approx(0.25, abs=1e-5)
        assert values["-2I(S12;S21|S32)"] == pytest.approx(-0.25, abs=1e-5)


CORNERS = [(1 / 3, 1 / 3), (0.375, 0.25), (0.5, 1 / 6)]


def _on_segment(p, a, b, tol):
    (px, py), (ax, ay), (bx, by) = p, a, b
    if not (min(ax, bx) - tol <= px <= max(ax, bx) + tol):
        return False
    cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    return abs(cross) <= tol * (1.0 + abs(bx - ax) + abs(by - ay))


def test_hull_mode(rg16_pd, rg16_instance):
    with criterion("hull mode: the three tradeoff corners"):
        res = run_hull(rg16_pd, rg16_instance)
        pts = [p.as_tuple() for p in res.points]
        for corner in CORNERS:
            assert any(abs(x - corner[0]) < 1e-5 and abs(y - corner[1]) < 1e-5
                       for x, y in pts), f"missing corner {corner}"
        for p in pts:
            near_corner = any(
                abs(p[0] - c[0]) < 1e-5 and abs(p[1] - c[1]) < 1e-5
                for c in CORNERS
            )
            on_boundary = any(
                _on_segment(p, CORNERS[k], CORNERS[k + 1], 1e-6)
                for k in range(len(CORNERS) - 1)
            )
            assert near_corner or on_boundary, f"spurious point {p}"


def test_prove_mode(rg16_pd, rg16_instance):
    with criterion("prove mode: weight sums 7 and 29, float and integer"):
        res = run_prove(rg16_pd, rg16_instance)
        assert [p.target_pretty for p in res.proofs] == ["2A + B >= 1", "4A + 6B >= 3"]
        by_target = {p.target_pretty: p for p in res.proofs}
        p1 = by_target["2A + B >= 1"]
        assert p1.float_proof.weight_sum == pytest.approx(7.0, abs=1e-6)
        assert p1.int_proof is not None
        assert p1.int_proof.weight_sum == 7.0
        assert all(w.weight == round(w.weight) for w in p1.int_proof.lines)
        p2 = by_target["4A + 6B >= 3"]
        assert p2.float_proof.weight_sum == pytest.approx(29.0, abs=1e-6)
        assert p2.int_proof.weight_sum == 29.0
        assert all(w.weight == round(w.weight) for w in p2.int_proof.lines)
        # run_prove re-sums every emitted proof against its target and raises
        # on mismatch, so reaching this point certifies proof validity


def test_sensitivity_mode(rg16_pd, rg16_instance):
    with criterion("sensitivity mode: three singleton ranges"):
        res = run_sensitivity(rg16_pd, rg16_instance)
        expected = {
            "A": (0.375, 0.375),
            "B": (0.25, 0.25),
            "2I(S12;S21|S32) + H(S21|S31) + A": (0.875, 0.875),
        }
        assert len(res.ranges) == 3
        for r in res.ranges:
            lo, hi = expected[r.target]
            assert r.lo == pytest.approx(lo, abs=1e-5)
            assert r.hi == pytest.approx(hi, abs=1e-5)


def test_constraint_count(rg16_instance):
    # The 40862 target counts constraint rows before deduplication (a solver
    # presolve on that row set keeps ~5084, which is exactly what exact-match
    # dedup produces here), so the target cannot be met without handing the
    # solver tens of thousands of duplicate rows.  Asserted as stated; known
    # red.
    with criterion("constraint count within 2% of 40862 (breakdown below)"):
        c = rg16_instance.counts
        print(
            f"    breakdown: total {c['total']} = elemental {c['elemental']} "
            f"(deduplicated from {c['elemental_generated']} generated) "
            f"+ independence {c['independence']} + constant bounds {c['bounds']}"
        )
        assert abs(c["total"] - 40862) <= 0.02 * 40862, (
            f"total {c['total']} vs target 40862: the target predates "
            "deduplication (presolve on it keeps ~5084 rows), unreachable "
            "alongside exact-match dedup"
        )


def test_property_suite():
    t0 = time.monotonic()
    rnd = random.Random(424242)

    with criterion("property (a): canonical map matches the brute-force oracle"):
        for _ in range(8):
            n = rnd.randint(3, 4)
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
            from entrolp.model import Dependency, ProblemDescription, SymmetryGroup

            pd = ProblemDescription(
                rv_names=[f"V{k}" for k in range(n)],
                al_names=[],
                deps=[Dependency(dependent=d, given=g) for d, g in deps],
                sym=SymmetryGroup(perms=tuple(group)),
            )
            rmap = build_reduction_map(pd)
            oracle = brute_force_classes(n, deps, group)
            assert all(int(rmap.canon[s]) == oracle[s] for s in range(1 << n))

    with criterion("property (a): LP optima match vertex enumeration"):
        checked = 0
        for _ in range(20):
            n = 3
            from entrolp.model import ProblemDescription

            pd = ProblemDescription(rv_names=[f"V{k}" for k in range(n)], al_names=[])
            rmap = build_reduction_map(pd)
            inst = assemble(pd, rmap)
            c = {k: rnd.uniform(0.1, 1.0) for k in range(inst.num_cols)}
            rows = [(dict(r.entries), r.sense, r.rhs) for r in inst.rows]
            rows.append(({inst.num_cols - 1: 1.0}, ">=", 1.0))
            from entrolp.lp_build import SparseRow

            extra = SparseRow(entries=((inst.num_cols - 1, 1.0),), sense=">=",
                              rhs=1.0, kind="bound")
            sol = solve_lp(inst.with_extra_rows([extra]).with_objective(c))
            cvec = np.zeros(inst.num_cols)
            for k, v in c.items():
                cvec[k] = v
            expect = vertex_enumeration_min(rows, cvec, inst.num_cols)
            assert sol.status == "optimal" and expect is not None
            assert sol.objective_value == pytest.approx(expect, abs=1e-7)
            checked += 1
        assert checked == 20

    with criterion("property (b): elemental count formula up to n = 12"):
        for n in range(1, 13):
            expect = n + (n * (n - 1) // 2) * (1 << (n - 2)) if n >= 2 else 1
            assert elemental_count(n) == expect

    with criterion("property (c): sampled entropy vectors satisfy every row"):
        rng = np.random.default_rng(99)
        from entrolp.model import ProblemDescription

        pd = ProblemDescription(rv_names=["X", "Y", "Z"], al_names=[])
        rmap = build_reduction_map(pd)
        inst = assemble(pd, rmap)
        for _ in range(30):
            h = joint_entropies_from_pmf(random_pmf(rng, 3))
            x = np.zeros(inst.num_cols)
            for mask, v in h.items():
                if mask:
                    x[rmap.col_of(mask)] = v
            for row in inst.rows:
                assert sum(v * x[c2] for c2, v in row.entries) >= -1e-9

    with criterion("property (d): parser round-trip on 50 generated documents"):
        for k in range(50):
            n = rnd.randint(1, 5)
            rvs = [f"V{j}" for j in range(n)]
            doc = {"RV": rvs, "O": f"H({rvs[0]})"}
            if n >= 2:
                doc["D"] = [{"dependent": [rvs[-1]], "given": [rvs[0]]}]
                doc["BC"] = [f"H({','.join(rvs)}) >= 1"]
                if rnd.random() < 0.5:
                    swapped = list(rvs)
                    swapped[0], swapped[1] = swapped[1], swapped[0]
                    doc["S"] = [rvs, swapped]
            pd = parse_file("PD\n" + json.dumps(doc)).pd
            assert parse_file(serialize(pd)).pd == pd

    with criterion("property (e): hull agrees with bounding planes"):
        text = ('PD\n{"RV":["X"],"AL":["A","B"],"O":"A + B",'
                '"BC":["2A + B >= 3","A + 2B >= 3","A <= 4","B <= 4"]}')
        pd = parse_file(text).pd
        rmap = build_reduction_map(pd)
        inst = assemble(pd, rmap)
        hull = run_hull(pd, inst)
        for _ in range(10):
            c1, c2 = rnd.uniform(0.2, 2.0), rnd.uniform(0.2, 2.0)
            sol = solve_lp(inst.with_objective({inst.al_cols["A"]: c1,
                                                inst.al_cols["B"]: c2}))
            best = min(c1 * p.x + c2 * p.y for p in hull.points)
            assert sol.objective_value == pytest.approx(best, abs=1e-6)

    elapsed = time.monotonic() - t0
    with criterion(f"property suite runtime under 2 minutes ({elapsed:.1f} s)"):
        assert elapsed < 120.0


@pytest.mark.skipif(not os.environ.get("ENTROLP_RUN_STRETCH"),
                    reason="stretch target: set ENTROLP_RUN_STRETCH=1 to run")
def test_stretch_5_4_4_prove(monkeypatch):
    # the five-node weight program is past the bundled dense-basis engine's
    # reach, so this goes through the external-solver adapter
    pytest.importorskip("scipy")
    import sys

    from entrolp.lp_build import reduce_expr
    from entrolp.modes import (
        _check_proof,
        _converted_ge_rows,
        _proof_from_weights,
        _weight_instance,
    )

    with criterion("stretch: (5,4,4) weight program certifies 15A + 10B >= 6"):
        text = open(os.path.join(os.path.dirname(__file__), "..", "problems",
                                 "PDRG5x4x4.pd")).read()
        pd = parse_file(text).pd
        rmap = build_reduction_map(pd)
        inst = assemble(pd, rmap)
        conv = _converted_ge_rows(inst)
        cb = pd.bp[0]
        target_entries = tuple(
            reduce_expr(cb.lhs.expr, rmap, inst.n_entropy_cols))
        winst = _weight_instance(inst, conv, target_entries, cb.rhs)
        script = os.path.join(os.path.dirname(__file__),
                              "external_scipy_solver.py")
        monkeypatch.setenv("ENTROLP_SOLVER_CMD",
                           f"{sys.executable} {script} {{lp}} {{out}}")
        sol = solve_lp(winst)
        assert sol.status == "optimal"
        _check_proof(conv, sol.primal, target_entries, cb.rhs)
        proof = _proof_from_weights(conv, sol.primal, inst.col_names)
        print(f"    weight sum {proof.weight_sum:.6f} over "
              f"{len(proof.lines)} rows")
