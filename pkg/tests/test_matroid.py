import json
import random

import pytest

from polymat.matroid import (Matroid, MatroidError, MatroidFileError,
                             Polymatroid, SparsePavingSpec, catalog,
                             catalog_names, dump_matroid, from_sparse_paving,
                             load_matroid, mask_of, points_of, popcount,
                             random_sparse_paving, uniform_matroid)


def _masks(strings):
    return [mask_of(int(c) for c in s) for s in strings]


def test_p8_construction():
    p8 = catalog("P8")
    assert p8.rank_total == 4
    assert p8.ranks[mask_of([0, 1, 2, 7])] == 3
    assert p8.ranks[mask_of([0, 1, 2, 3])] == 4
    assert len(p8.circuit_hyperplanes()) == 10
    assert p8.is_sparse_paving()


def test_uniform_from_empty_ch_list():
    u24 = from_sparse_paving(SparsePavingSpec(4, 2, ()))
    for m in range(16):
        assert u24.ranks[m] == min(popcount(m), 2)


def test_sparse_paving_roundtrip():
    p8 = catalog("P8")
    chs = p8.circuit_hyperplanes()
    again = from_sparse_paving(SparsePavingSpec(8, 4, tuple(chs)))
    assert again.ranks == p8.ranks


def test_sparse_paving_intersection_rejected():
    with pytest.raises(MatroidError):
        SparsePavingSpec(8, 4, (mask_of([0, 1, 2, 3]), mask_of([0, 1, 2, 4])))


def test_polymatroid_axioms_rejected():
    # corrupt a valid vector: break monotonicity
    u = uniform_matroid(2, 4)
    ranks = list(u.ranks)
    ranks[mask_of([0, 1, 2, 3])] = 1
    with pytest.raises(MatroidError):
        Polymatroid(4, ranks)
    # break submodularity
    ranks = list(u.ranks)
    ranks[mask_of([0, 1])] = 3
    with pytest.raises(MatroidError):
        Matroid(4, ranks)
    # non-integer matroid
    with pytest.raises(MatroidError):
        Matroid(1, [0, "1/2"])


def test_relaxation_chain_counts():
    # derived: ten circuit-hyperplanes lose one per relaxation step
    assert len(catalog("P8").circuit_hyperplanes()) == 10
    assert len(catalog("P1").circuit_hyperplanes()) == 9
    assert len(catalog("P2p").circuit_hyperplanes()) == 8
    assert len(catalog("P2pp").circuit_hyperplanes()) == 8
    assert len(catalog("P3").circuit_hyperplanes()) == 7
    assert len(catalog("L8").circuit_hyperplanes()) == 8
    assert len(catalog("L8p").circuit_hyperplanes()) == 7


def test_relax_matches_catalog():
    p8 = catalog("P8")
    p1 = p8.relax(mask_of([3, 5, 6, 7]))
    assert p1.ranks == catalog("P1").ranks
    p2p = p1.relax(mask_of([0, 3, 4, 7]))
    assert p2p.ranks == catalog("P2p").ranks
    p2pp = p1.relax(mask_of([1, 2, 5, 6]))
    assert p2pp.ranks == catalog("P2pp").ranks
    p3 = p2p.relax(mask_of([1, 2, 5, 6]))
    assert p3.ranks == catalog("P3").ranks
    l8p = catalog("L8").relax(mask_of([0, 4, 5, 7]))
    assert l8p.ranks == catalog("L8p").ranks


def test_relax_increases_exactly_one_entry():
    p8 = catalog("P8")
    h = mask_of([3, 5, 6, 7])
    p1 = p8.relax(h)
    diffs = [(m, a, b) for m, (a, b) in enumerate(zip(p8.ranks, p1.ranks))
             if a != b]
    assert diffs == [(h, 3, 4)]
    with pytest.raises(MatroidError):
        p1.relax(h)  # no longer a circuit-hyperplane


def test_dual_involution_and_bases():
    for name in ("P8", "V8", "L8p", "tictactoe"):
        m = catalog(name)
        d = m.dual()
        assert d.dual().ranks == m.ranks
        assert d.ranks[0] == 0
        if m.n <= 8:
            full = m.full_mask
            dual_bases = set(d.bases())
            assert dual_bases == {full ^ b for b in m.bases()}
    u = uniform_matroid(2, 4)
    assert u.dual().ranks == u.ranks


def test_minors():
    p8 = catalog("P8")
    assert p8.contract(0).ranks == p8.ranks
    assert p8.delete(0).ranks == p8.ranks
    c = p8.contract(mask_of([0]))
    assert isinstance(c, Matroid)
    assert c.n == 7 and c.rank_total == 3
    # contraction formula f(X|B) spot check
    keep = [1, 2, 3, 4, 5, 6, 7]
    for _ in range(50):
        sub = random.Random(_).sample(keep, 3)
        new_mask = mask_of(keep.index(p) for p in sub)
        assert c.ranks[new_mask] == (p8.ranks[mask_of(sub) | 1]
                                     - p8.ranks[1])


def test_minor_commutation():
    m = catalog("tictactoe")
    a = mask_of([1])   # contract cell (0,1)
    b = mask_of([5])   # delete cell (1,2)
    left = m.contract(a).delete(mask_of([4]))   # 5 shifts to position 4
    right = m.delete(b).contract(a)
    assert left.ranks == right.ranks


def test_delete_tictactoe_corner():
    m = catalog("tictactoe")
    d = m.delete(mask_of([8]))  # remove cell (2,2)
    assert d.n == 8 and d.rank_total == 5
    assert isinstance(d, Matroid)
    # circuit-hyperplanes of the restriction: the lines avoiding (2,2)
    # C_00, C_01, C_10 survive (C_11 was relaxed); points keep their order
    expected = []
    for (a, b) in ((0, 0), (0, 1), (1, 0)):
        pts = {3 * a + j for j in range(3)} | {3 * i + b for i in range(3)}
        expected.append(mask_of(pts))
    assert sorted(d.circuit_hyperplanes()) == sorted(expected)


def test_flats():
    u24 = uniform_matroid(2, 4)
    assert u24.flats(rank=1) == [1, 2, 4, 8]
    for name in ("P8", "V8"):
        m = catalog(name)
        fl = m.flats()
        assert m.full_mask in fl
        # oracle: flats = fixed points of the closure operator
        oracle = [x for x in range(1 << m.n) if m.closure(x) == x]
        assert fl == oracle


def test_vamos_rank2_flats_count(v8):
    # every pair is closed: circuits have size >= 4
    assert len(v8.flats(rank=2)) == 28


def test_catalog_grid_family():
    mo = catalog("M_o")
    assert len(mo.circuit_hyperplanes()) == 9
    ttt = catalog("tictactoe")
    assert len(ttt.circuit_hyperplanes()) == 8
    c11 = mask_of([3, 4, 5, 1, 7])  # row 1 plus column 1
    assert mo.relax(c11).ranks == ttt.ranks
    for a in range(3):
        for b in range(3):
            if (a, b) == (1, 1):
                continue
            mab = catalog(f"M_{a}{b}")
            assert len(mab.circuit_hyperplanes()) == 7
            assert mab.rank_total == 5


def test_catalog_cube_family():
    ag = catalog("AG32")
    assert len(ag.circuit_hyperplanes()) == 14
    agp = catalog("AG32p")
    assert len(agp.circuit_hyperplanes()) == 13
    # one relaxation of the cube
    diff = set(ag.circuit_hyperplanes()) - set(agp.circuit_hyperplanes())
    assert len(diff) == 1
    assert agp.ranks == ag.relax(diff.pop()).ranks
    assert len(catalog("F8").circuit_hyperplanes()) == 12
    assert len(catalog("Q8").circuit_hyperplanes()) == 11
    v8 = catalog("V8")
    assert len(v8.circuit_hyperplanes()) == 5
    # V8 is an iterated relaxation of the cube (its labelling keeps the
    # circuit-hyperplanes among the cube's planes)
    assert set(v8.circuit_hyperplanes()) <= set(ag.circuit_hyperplanes())


def test_catalog_all_sparse_paving():
    for name in catalog_names():
        m = catalog(name)
        assert m.is_sparse_paving(), name
        assert m.dual().dual().ranks == m.ranks


def test_catalog_unknown_name():
    with pytest.raises(KeyError):
        catalog("nope")


def test_random_sparse_paving_valid(rng):
    for _ in range(20):
        m = random_sparse_paving(8, 4, rng, max_chs=rng.randint(0, 12))
        assert m.is_sparse_paving()


def test_file_roundtrip(tmp_path):
    path = tmp_path / "v8.json"
    dump_matroid(catalog("V8"), path)
    back = load_matroid(path)
    assert back.ranks == catalog("V8").ranks
    assert back.name == "V8"


def test_file_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(MatroidFileError):
        load_matroid(bad)
    bad.write_text(json.dumps({"ground_size": 4, "kind": "nope"}))
    with pytest.raises(MatroidFileError):
        load_matroid(bad)
    bad.write_text(json.dumps({
        "ground_size": 8, "kind": "sparse_paving", "rank": 4,
        "circuit_hyperplanes": [[0, 1, 2, 3], [0, 1, 2, 4]]}))
    with pytest.raises(MatroidFileError) as ei:
        load_matroid(bad)
    assert "intersect" in str(ei.value)
    bad.write_text(json.dumps({
        "ground_size": 2, "kind": "rank_vector",
        "ranks": [0, 1, 1, "3/2"]}))
    with pytest.raises(MatroidFileError):
        load_matroid(bad)
