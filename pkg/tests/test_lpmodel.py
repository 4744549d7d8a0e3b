import random
from fractions import Fraction

import pytest

from polymat.lpmodel import (AkQuery, CiQuery, LinearProgram,
                             ak_candidate_triples, build_ak_feasibility,
                             build_ci_feasibility, build_kappa, build_lambda,
                             build_sigma, candidate_queries,
                             ci_candidate_pairs, shannon_block,
                             to_port_ground_mask)
from polymat.matroid import (catalog, contract, mask_of, random_sparse_paving,
                             uniform_matroid)
from polymat.secretsharing import AccessStructure, port
from polymat.simplex import solve


def test_shannon_block_counts():
    assert len(shannon_block(3)) == 3 + 3 * 2
    assert len(shannon_block(9)) == 9 + 36 * 128
    with pytest.raises(ValueError):
        shannon_block(13)


def test_shannon_rows_hold_for_catalog():
    for name in ("V8", "P3", "tictactoe"):
        m = catalog(name)
        for entries, rel, rhs in shannon_block(m.n):
            val = sum(c * m.ranks[mask] for mask, c in entries)
            assert val >= rhs


def test_kappa_lp_shape(v8):
    acc = port(v8, 0)
    lp = build_kappa(acc)
    # 7 share rows + 1 normalisation + port rows + shannon block
    n = 8
    shannon = n + 28 * 64
    port_rows = 1 + len(acc.min_qualified) + len(acc.max_unqualified())
    assert len(lp.rows) == 7 + port_rows + shannon
    assert lp.var_keys[-1] == "v"
    assert lp.num_vars == (1 << n) - 1 + 1


def test_kappa_matroid_port_is_one(v8):
    out = solve(build_kappa(port(v8, 0)))
    assert out.status == "optimal" and out.value == 1


def test_kappa_threshold():
    # 2-of-3 threshold structure is a uniform-matroid port
    u = uniform_matroid(2, 4)
    out = solve(build_kappa(port(u, 0)))
    assert out.value == 1


def test_kappa_non_port_three_halves():
    acc = AccessStructure((1, 2, 3, 4),
                          [mask_of([0, 1]), mask_of([1, 2]), mask_of([2, 3])])
    out = solve(build_kappa(acc))
    assert out.value == Fraction(3, 2)


def test_lambda_no_queries_equals_kappa(v8):
    acc = port(v8, 0)
    a = build_kappa(acc)
    b = build_lambda(acc, [])
    assert a.var_keys == b.var_keys
    assert a.rows == b.rows
    assert a.objective == b.objective


def test_lambda_dominates_kappa(v8):
    acc = port(v8, 0)
    ci, _ = candidate_queries(v8, 0, max_pairs=3, max_triples=1)
    kappa = solve(build_kappa(acc)).value
    for q in ci:
        val = solve(build_lambda(acc, [q])).value
        assert val >= kappa


def test_rank3_always_ci_feasible(rng):
    # every rank-3 matroid admits every common-information extension
    for _ in range(6):
        m = random_sparse_paving(6, 3, rng, max_chs=rng.randint(0, 6))
        for q in ci_candidate_pairs(m):
            out = solve(build_ci_feasibility(m, q))
            assert out.status == "optimal", (m.name, q)


def test_v8_spic_pair_infeasible(v8):
    from polymat.inequalities import spic_witness
    w = spic_witness(v8)
    out = solve(build_ci_feasibility(v8, CiQuery(w.a2, w.a3)))
    assert out.status == "infeasible"
    # and an AK triple derived from the witness is infeasible as well
    statuses = set()
    for (u, v, z) in ((w.a2, w.a3, w.a1), (w.a1, w.a2, w.a3),
                      (w.a1, w.a3, w.a2)):
        statuses.add(solve(build_ak_feasibility(v8, AkQuery(u, v, z))).status)
    assert "infeasible" in statuses


def test_ci_implies_ak_on_candidates(p3):
    # whenever the pair (UV, Z) has a common information, the triple
    # (U, V, Z) has an AK information
    triples = ak_candidate_triples(p3, cap=12)
    for t in triples:
        ci = solve(build_ci_feasibility(p3, CiQuery(t.u | t.v, t.z)))
        if ci.status == "optimal":
            ak = solve(build_ak_feasibility(p3, t))
            assert ak.status == "optimal"


def test_tictactoe_parallel_lines_infeasible(tictactoe):
    row0 = mask_of([0, 1, 2])
    row1 = mask_of([3, 4, 5])
    col0 = mask_of([0, 3, 6])
    col2 = mask_of([2, 5, 8])
    assert solve(build_ci_feasibility(
        tictactoe, CiQuery(row0, row1))).status == "infeasible"
    assert solve(build_ci_feasibility(
        tictactoe, CiQuery(col0, col2))).status == "infeasible"
    # intersecting lines are fine
    assert solve(build_ci_feasibility(
        tictactoe, CiQuery(row0, col0))).status == "optimal"


def test_candidate_pair_priority_finds_failure_early(tictactoe):
    pairs = ci_candidate_pairs(tictactoe)
    row0, row1 = mask_of([0, 1, 2]), mask_of([3, 4, 5])
    idx = next(i for i, q in enumerate(pairs)
               if (q.a, q.b) == (row0, row1))
    assert idx < 16


def test_candidate_queries_deterministic(v8):
    a = candidate_queries(v8, 0, max_pairs=30, max_triples=30)
    b = candidate_queries(v8, 0, max_pairs=30, max_triples=30)
    assert a == b
    ci, ak = a
    assert 0 < len(ci) <= 30 and 0 < len(ak) <= 30
    # port-point translation: position n-1 encodes the port point
    n = v8.n
    po_bit = 1 << (n - 1)
    assert any((q.u | q.v | q.z) & po_bit for q in ak)


def test_to_port_ground_mask():
    # matroid points 0..8, po = 0: point 0 -> bit 8, point k -> bit k-1
    assert to_port_ground_mask(mask_of([0]), 0, 9) == 1 << 8
    assert to_port_ground_mask(mask_of([1, 2]), 0, 9) == mask_of([0, 1])
    assert to_port_ground_mask(mask_of([4]), 2, 8) == mask_of([3])


def test_lp_reproducibility(v8):
    acc = port(v8, 0)
    ci, ak = candidate_queries(v8, 0, max_pairs=2, max_triples=2)
    for build in (lambda: build_kappa(acc),
                  lambda: build_lambda(acc, ci),
                  lambda: build_sigma(acc, ak),
                  lambda: build_ci_feasibility(v8, ci[0] and CiQuery(3, 12))):
        lp1, lp2 = build(), build()
        assert lp1.rows == lp2.rows
        assert lp1.var_keys == lp2.var_keys


def test_lp_dump_readable(v8):
    acc = port(v8, 0)
    lp = build_kappa(acc)
    text = lp.dump()
    assert "minimize" in text and "v" in text
    assert "{" in text  # subset-style variable names
    lp2 = build_ci_feasibility(v8, CiQuery(3, 12))
    assert "x_o" in lp2.dump()


def test_feasibility_lp_uses_extension_vars_only(p3):
    lp = build_ci_feasibility(p3, CiQuery(3, 12))
    assert lp.num_vars == 1 << p3.n
    assert all("x_o" in key for key in lp.var_keys)
    assert lp.objective == ()
