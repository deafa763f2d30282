"""Acceptance suite: one PASS/FAIL line per criterion, timed."""

import random
import time
from fractions import Fraction as F

import pytest

from conftest import all_tight_graphs
from gridrig.characterize import crosscheck_batch, random_framework, random_quotient
from gridrig.geometry import F1, L1, LINF, Framework, colour_edges
from gridrig.moves import ANTI, SYM, extract_sequence, replay
from gridrig.quotient import find_switching_isomorphism
from gridrig.realize import realize
from gridrig.rigidity import decompose_flex, is_antisymmetric_vector, is_symmetric_vector, flex_bases, general_rigidity_matrix, rigidity_matrix, rigidity_report
from gridrig.sparsity import check_gain_sparse, oracle_gain_sparse_edge_subsets


@pytest.fixture
def verdict(capsys):
    def emit(number, title, ok, seconds, limit, detail=""):
        within = seconds < limit
        line = f"[{'PASS' if ok and within else 'FAIL'}] criterion {number}: {title} ({seconds:.1f}s / {limit}s) {detail}"
        with capsys.disabled():
            print("\n" + line.rstrip())
        assert ok, line
        assert within, line

    return emit


@pytest.fixture(scope="module")
def corpus():
    t = time.perf_counter()
    summary = crosscheck_batch(1000, max_orbits=5, seed=42, norm=LINF)
    return summary, time.perf_counter() - t


def test_criterion_1_sym_crosscheck(corpus, verdict):
    summary, seconds = corpus
    failed = [r for r in summary["failures"] if r["predicate"] == "sym_isostatic"]
    ok = summary["cases"] == 1000 and not failed
    verdict(1, "sym_isostatic rank vs monochrome", ok, seconds, 60, f"positives={summary['positives']['sym_isostatic']}")


def test_criterion_2_anti_and_rigid_crosscheck(corpus, verdict):
    summary, seconds = corpus
    ok = summary["agreements"] == 1000 and not summary["failures"]
    pos = summary["positives"]
    verdict(2, "anti_isostatic and inf_rigid rank vs monochrome", ok, seconds, 60, f"positives anti={pos['anti_isostatic']} rigid={pos['inf_rigid']}")


def test_criterion_3_decomposition_laws(verdict):
    t = time.perf_counter()
    rng = random.Random(3)
    bad = 0
    for _ in range(500):
        f = random_framework(rng, max_orbits=5)
        rep = rigidity_report(f)
        bad += rep.ranks["df"] != rep.ranks["O1"] + rep.ranks["O2"]
        bad += rep.nullities["df"] != rep.nullities["O1"] + rep.nullities["O2"]
        df = rigidity_matrix(f)
        for v in flex_bases(f)["full"].vectors:
            sym, anti = decompose_flex(f, v)
            bad += any(a + b != c for a, b, c in zip(sym, anti, v))
            bad += any(df.apply(sym)) or any(df.apply(anti))
            bad += not (is_symmetric_vector(f, sym) and is_antisymmetric_vector(f, anti))
    verdict(3, "rank/nullity additivity and flex parts in ker df", bad == 0, time.perf_counter() - t, 30, f"violations={bad}")


def test_criterion_4_sparsity_oracle(verdict):
    t = time.perf_counter()
    rng = random.Random(4)
    bad = tight = rejected = 0
    for _ in range(1000):
        q = random_quotient(rng, max_orbits=5, n_edges=rng.randint(0, 12))
        for variant in ("221", "220"):
            a = check_gain_sparse(q, variant)
            b = oracle_gain_sparse_edge_subsets(q, variant)
            bad += (a.sparse, a.tight) != (b.sparse, b.tight)
            tight += b.tight
            rejected += not b.sparse
    verdict(4, "check_gain_sparse equals edge-subset oracle", bad == 0, time.perf_counter() - t, 120, f"tight={tight} not_sparse={rejected} disagreements={bad}")


def test_criterion_5_construction_completeness(verdict):
    t = time.perf_counter()
    graphs = all_tight_graphs(4)
    bad = runs = 0
    for g in graphs:
        modes = (SYM,) if g.has_loops() else (SYM, ANTI)
        for mode in modes:
            runs += 1
            rebuilt = replay(extract_sequence(g, mode), mode)
            bad += find_switching_isomorphism(rebuilt, g) is None
    verdict(5, "extract + replay over all tight graphs with <=4 orbits", bad == 0, time.perf_counter() - t, 300, f"graphs={len(graphs)} runs={runs} failures={bad}")


def test_criterion_6_realization_soundness(verdict):
    t = time.perf_counter()
    bad = runs = 0
    for g in all_tight_graphs(4):
        n = len(g.orbits)
        for mode in (SYM,) if g.has_loops() else (SYM, ANTI):
            for norm in (LINF, L1):
                runs += 1
                rep = rigidity_report(realize(g, mode, norm).framework)
                key, flag = ("O1", rep.sym_isostatic) if mode == SYM else ("O2", rep.anti_isostatic)
                bad += not (flag and rep.ranks[key] == 2 * n - 1 and rep.nullities[key] == 1)
    verdict(6, "realizations certified by orbit-matrix ranks", bad == 0, time.perf_counter() - t, 300, f"runs={runs} failures={bad}")


def test_criterion_7_reference_frameworks(verdict, tall_triangles, flat_triangles):
    t = time.perf_counter()
    pts = {"p0": (0, 0), "p1": (1, F(1, 5)), "p2": (F(-1, 5), 1), "p3": (F(6, 5), F(7, 5))}
    two_dof = Framework((("p0", "p1"), ("p0", "p2")), {k: pts[k] for k in ("p0", "p1", "p2")}, LINF)
    one_dof = Framework((("p0", "p1"), ("p0", "p2"), ("p1", "p2")), {k: pts[k] for k in ("p0", "p1", "p2")}, LINF)
    rigid = Framework(tuple((a, b) for i, a in enumerate(pts) for b in list(pts)[i + 1 :]), pts, LINF)
    nullities = [general_rigidity_matrix(fw).nullity() for fw in (two_dof, one_dof, rigid)]
    a, c = rigidity_report(tall_triangles), rigidity_report(flat_triangles)
    ok = (
        nullities == [4, 3, 2]
        and a.sym_isostatic and not a.anti_isostatic and not a.inf_rigid
        and c.anti_isostatic and not c.sym_isostatic and not c.inf_rigid
        and c.counts["E0"] < 2 * c.counts["V0"]
    )
    verdict(7, "reference frameworks", ok, time.perf_counter() - t, 10, f"nullities={nullities}")


def test_criterion_8_structural_invariants(verdict):
    t = time.perf_counter()
    rng = random.Random(8)
    frameworks = [random_framework(rng, max_orbits=5) for _ in range(600)]
    for g in all_tight_graphs(4):
        frameworks.append(realize(g, SYM).framework)
        if not g.has_loops():
            frameworks.append(realize(g, ANTI, L1).framework)
    bad = anti = fixed = 0
    for f in frameworks:
        rep = rigidity_report(f)
        colours = colour_edges(f).colour
        if rep.anti_isostatic:
            anti += 1
            bad += f.quotient.has_loops()
        fixed += len(f.quotient.loops())
        bad += any(colours[e.id] != F1 for e in f.quotient.loops())
        bad += rep.trivial_dims != {"dimT": 2, "dimT1": 1, "dimT2": 1}
    verdict(8, "anti => loopless, fixed bars F1, trivial dims (2,1,1)", bad == 0, time.perf_counter() - t, 60, f"frameworks={len(frameworks)} anti={anti} fixed_bars={fixed} violations={bad}")
