from fractions import Fraction

import pytest

from polymat.lpmodel import CiQuery
from polymat.matroid import catalog, mask_of, uniform_matroid
from polymat.repcheck import grid_matroid_representation
from polymat.secretsharing import (AccessStructure, AccessStructureError,
                                   Decomposition, DecompositionError,
                                   DecompositionPart, bound, contract_structure,
                                   delete_structure, dual_structure,
                                   is_matroid_port, port,
                                   tictactoe_decomposition,
                                   verify_decomposition)


def test_threshold_port():
    u = uniform_matroid(2, 4)
    acc = port(u, 0)
    # 2-of-3 threshold on the remaining players
    assert acc.min_qualified == (0b011, 0b101, 0b110)
    assert acc.qualified(0b111)
    assert not acc.qualified(0b001)


def test_port_preconditions():
    u = uniform_matroid(2, 4)
    loop = catalog("P8").contract(mask_of([0, 1, 2, 3]))  # rank 0 remainder
    with pytest.raises(AccessStructureError):
        port(loop, 0)
    # coloop: a point whose removal drops the rank
    m = uniform_matroid(2, 2)
    with pytest.raises(AccessStructureError):
        port(m, 0)
    assert port(u, 3) is not None


def test_antichain_and_connectivity_validation():
    with pytest.raises(AccessStructureError):
        AccessStructure((1, 2, 3), [0b011, 0b111])  # nested qualified sets
    with pytest.raises(AccessStructureError):
        AccessStructure((1, 2, 3), [0b011])  # player 3 dangling


def test_dual_structure_involution(v8):
    acc = port(v8, 0)
    assert dual_structure(dual_structure(acc)) == acc


def test_dual_port_is_port_of_dual(v8):
    for name in ("V8", "P3", "L8p"):
        m = catalog(name)
        acc = port(m, 0)
        assert dual_structure(acc) == port(m.dual(), 0)


def test_port_minor_commutation(tictactoe):
    m = tictactoe
    acc = port(m, 0)
    # delete cell 8: qualified remainder required and satisfied here
    b_pos = acc.ground_label  # silence lint; positions: players are 1..8
    del_acc = delete_structure(acc, 1 << 7)   # player 8 sits at position 7
    assert del_acc == port(m.delete(mask_of([8])), 0)
    con_acc = contract_structure(acc, 1 << 7)
    assert con_acc == port(m.contract(mask_of([8])), 0)


def test_contract_qualified_errors(v8):
    acc = port(v8, 0)
    full = (1 << acc.num_players) - 1
    with pytest.raises(AccessStructureError):
        contract_structure(acc, full)


def test_is_matroid_port(v8):
    assert is_matroid_port(port(v8, 0))
    acc = AccessStructure((1, 2, 3, 4),
                          [mask_of([0, 1]), mask_of([1, 2]), mask_of([2, 3])])
    assert not is_matroid_port(acc)
    assert is_matroid_port(dual_structure(port(v8, 3)))


def test_kappa_duality_invariance(v8):
    for name in ("V8", "P3"):
        acc = port(catalog(name), 1)
        a = bound(acc, "kappa").value
        b = bound(dual_structure(acc), "kappa").value
        assert a == b == 1


def test_kappa_minor_monotonicity(tictactoe):
    acc = port(tictactoe, 0)
    minor = delete_structure(acc, 1 << 7)
    assert bound(minor, "kappa").value <= bound(acc, "kappa").value


def test_bound_requires_source():
    acc = AccessStructure((1, 2, 3, 4),
                          [mask_of([0, 1]), mask_of([1, 2]), mask_of([2, 3])])
    with pytest.raises(AccessStructureError):
        bound(acc, "lambda_lower")
    with pytest.raises(ValueError):
        bound(acc, "nope")


def test_lambda_bound_v8(v8):
    acc = port(v8, 0)
    rep = bound(acc, "lambda_lower", max_pairs=8,
                target=Fraction(4, 3))
    assert rep.value == Fraction(4, 3)
    assert rep.queries and rep.verify()
    assert "CI(" in rep.query_text()


def test_sigma_bound_v8_port2(v8):
    acc = port(v8, 2)
    rep = bound(acc, "sigma_bar_lower", max_triples=24,
                target=Fraction(9, 8), depth2=False)
    assert rep.value == Fraction(9, 8)
    assert rep.verify()


def test_bound_chain(v8):
    acc = port(v8, 2)
    k = bound(acc, "kappa").value
    s = bound(acc, "sigma_bar_lower", max_triples=12,
              target=Fraction(9, 8), depth2=False).value
    lam = bound(acc, "lambda_lower", max_pairs=8,
                target=Fraction(4, 3)).value
    assert k <= s <= lam


def test_bound_gap_note(v8):
    acc = port(v8, 0)
    rep = bound(acc, "lambda_lower", max_pairs=2, target=Fraction(99),
                depth2=False)
    assert rep.note and "not reached" in rep.note


def test_bound_worker_invariance(v8):
    acc = port(v8, 0)
    r1 = bound(acc, "lambda_lower", max_pairs=6, target=Fraction(4, 3),
               workers=1)
    r2 = bound(acc, "lambda_lower", max_pairs=6, target=Fraction(4, 3),
               workers=2)
    assert r1.value == r2.value
    assert r1.queries == r2.queries
    assert r1.searched == r2.searched
    assert r1.render() == r2.render()


def test_tictactoe_decomposition_golden():
    d = tictactoe_decomposition()
    assert verify_decomposition(d) == Fraction(6, 5)


def test_trivial_decomposition():
    mo = catalog("M_o")
    d = Decomposition(port(mo, 0),
                      (DecompositionPart(mo, 0,
                                         grid_matroid_representation("M_o")),),
                      1)
    assert verify_decomposition(d) == 1


def test_decomposition_dropped_part_fails():
    full = tictactoe_decomposition()
    for drop in range(len(full.parts)):
        parts = tuple(p for i, p in enumerate(full.parts) if i != drop)
        d = Decomposition(full.target, parts, full.threshold)
        with pytest.raises(DecompositionError) as ei:
            verify_decomposition(d)
        assert "covered only" in str(ei.value)


def test_decomposition_bad_witness():
    full = tictactoe_decomposition()
    # swap in a representation of the wrong matroid
    bad = (DecompositionPart(full.parts[0].matroid, 0,
                             grid_matroid_representation("M_00")),) \
        + full.parts[1:]
    with pytest.raises(DecompositionError) as ei:
        verify_decomposition(Decomposition(full.target, bad, 5))
    assert "witness" in str(ei.value)


def test_decomposition_threshold_validation():
    full = tictactoe_decomposition()
    with pytest.raises(DecompositionError):
        verify_decomposition(Decomposition(full.target, full.parts, 0))
    with pytest.raises(DecompositionError):
        verify_decomposition(Decomposition(full.target, full.parts, 7))
