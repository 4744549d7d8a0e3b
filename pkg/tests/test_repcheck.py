import random

import pytest

from polymat.algebra import RING_H, RING_Q, field_make, mat_rank
from polymat.inequalities import ingleton_scan
from polymat.matroid import catalog, mask_of
from polymat.repcheck import (FoldedRepresentation, RepresentationFileError,
                              block_pattern_check, builtin_representation,
                              builtin_representation_keys, dump_representation,
                              grid_matroid_representation,
                              l8p_representation_gf25,
                              l8p_representation_quaternion,
                              load_representation, p3_representation_gf5,
                              p3_representation_quaternion,
                              polymatroid_from_representation,
                              representation_from_blocks,
                              verify_representation,
                              verify_skew_representation)


def test_p3_gf5_golden(p3):
    rep = p3_representation_gf5()
    assert verify_representation(p3, rep).ok
    assert block_pattern_check(p3, rep)
    # the relaxed set {3,5,6,7} is a basis: full block rank
    sub = rep.columns_of(mask_of([3, 5, 6, 7]))
    assert mat_rank(rep.ring, sub) == 8


def test_l8p_gf25_golden_two_moduli():
    l8p = catalog("L8p")
    rep = l8p_representation_gf25()
    assert verify_representation(l8p, rep).ok
    assert block_pattern_check(l8p, rep)
    # verdict is independent of the modulus choice (i recomputed per field)
    default = field_make(5, 2)
    other = None
    for c0 in range(5):
        for c1 in range(5):
            try:
                cand = field_make(5, 2, modulus=(c0, c1, 1))
            except ValueError:
                continue
            if cand.modulus != default.modulus:
                other = cand
                break
        if other:
            break
    assert other is not None
    rep2 = l8p_representation_gf25(field=other)
    assert verify_representation(l8p, rep2).ok


def test_quaternion_goldens(p3):
    l8p = catalog("L8p")
    assert verify_skew_representation(p3, p3_representation_quaternion()).ok
    assert verify_skew_representation(
        l8p, l8p_representation_quaternion()).ok


def test_grid_family_goldens():
    for name in ("M_o", "M_00", "M_01", "M_02", "M_10", "M_20", "M_12",
                 "M_21", "M_22"):
        m = catalog(name)
        rep = grid_matroid_representation(name)
        assert verify_representation(m, rep).ok, name


def test_failure_reports_first_subset(p3):
    rep = p3_representation_gf5()
    # duplicate block-column 4 into column 5: points 4,5 become parallel,
    # but they are independent in the matroid
    ring = rep.ring
    blocks = [[rep.block(i, j) for j in range(rep.n)] for i in range(rep.m)]
    for i in range(rep.m):
        blocks[i][5] = blocks[i][4]
    bad = representation_from_blocks(ring, rep.ell, blocks)
    res = verify_representation(p3, bad)
    assert not res.ok
    assert res.failing_subset == mask_of([4, 5])
    assert res.expected == 4 and res.got == 2


def test_block_pattern_check_zero_block(p3):
    rep = p3_representation_gf5()
    ring = rep.ring
    blocks = [[rep.block(i, j) for j in range(rep.n)] for i in range(rep.m)]
    # zero out a block that must be invertible
    blocks[1][4] = [[ring.zero] * rep.ell for _ in range(rep.ell)]
    bad = representation_from_blocks(ring, rep.ell, blocks)
    assert not block_pattern_check(p3, bad)


def test_block_scaling_invariance(p3, rng):
    rep = p3_representation_gf5()
    ring = rep.ring

    def random_invertible():
        while True:
            g = [[ring.from_int(rng.randint(0, 4)) for _ in range(2)]
                 for _ in range(2)]
            if mat_rank(ring, g) == 2:
                return g

    def matmul(x, y):
        return [[_dot(ring, x[r], [y[i][c] for i in range(2)])
                 for c in range(2)] for r in range(2)]

    def _dot(ring, xs, ys):
        acc = ring.zero
        for a, b in zip(xs, ys):
            acc = ring.add(acc, ring.mul(a, b))
        return acc

    blocks = [[rep.block(i, j) for j in range(rep.n)] for i in range(rep.m)]
    g = random_invertible()
    i = rng.randrange(rep.m)
    scaled = [row[:] for row in blocks]
    scaled[i] = [matmul(g, blk) for blk in scaled[i]]
    assert verify_representation(
        p3, representation_from_blocks(ring, 2, scaled)).ok
    h = random_invertible()
    j = rng.randrange(rep.n)
    scaled2 = [row[:] for row in blocks]
    for r in range(rep.m):
        scaled2[r][j] = matmul(scaled2[r][j], h)
    assert verify_representation(
        p3, representation_from_blocks(ring, 2, scaled2)).ok


def test_polymatroid_from_representation(v8):
    rep = grid_matroid_representation("M_o")
    lin = polymatroid_from_representation(rep)
    mo = catalog("M_o")
    assert lin.ranks == mo.ranks  # fold 1: ranks match directly
    assert ingleton_scan(lin) is None
    # folded: P3's representation doubles every rank
    p3rep = p3_representation_gf5()
    lin2 = polymatroid_from_representation(p3rep)
    p3 = catalog("P3")
    assert all(lin2.ranks[m] == 2 * p3.ranks[m] for m in range(1 << 8))


def test_zero_representation():
    gf = field_make(3)
    zero_block = [[gf.zero]]
    rep = representation_from_blocks(gf, 1, [[zero_block] * 4])
    poly = polymatroid_from_representation(rep)
    assert all(r == 0 for r in poly.ranks)


def test_consistency_verify_iff_scaled_ranks(p3):
    rep = p3_representation_gf5()
    lin = polymatroid_from_representation(rep)
    ok = verify_representation(p3, rep).ok
    assert ok == all(lin.ranks[m] == 2 * p3.ranks[m] for m in range(1 << 8))


def test_builtin_keys():
    keys = builtin_representation_keys()
    assert "P3_gf5" in keys and "L8p_quaternion" in keys
    assert "M_o_f11" in keys
    name, rep = builtin_representation("P3_gf5")
    assert name == "P3" and rep.ell == 2
    with pytest.raises(KeyError):
        builtin_representation("nope")


def test_file_roundtrip(tmp_path):
    for key in ("P3_gf5", "L8p_quaternion", "M_o_f11"):
        name, rep = builtin_representation(key)
        path = tmp_path / f"{key}.json"
        dump_representation(rep, path)
        back = load_representation(path)
        m = catalog(name)
        assert verify_representation(m, back).ok


def test_file_errors(tmp_path):
    p = tmp_path / "r.json"
    p.write_text("[]")
    with pytest.raises(RepresentationFileError):
        load_representation(p)
    p.write_text('{"ring": "gf", "p": 4, "k": 1, "ell": 1, '
                 '"blocks": [[[[1]]]]}')
    with pytest.raises(RepresentationFileError):
        load_representation(p)
    p.write_text('{"ring": "gf", "p": 5, "k": 1, "ell": 2, '
                 '"blocks": [[[[1]]]]}')
    with pytest.raises(RepresentationFileError):
        load_representation(p)


def test_dimension_mismatch(p3):
    rep = grid_matroid_representation("M_o")  # 9 points vs 8
    with pytest.raises(ValueError):
        verify_representation(p3, rep)
