"""Verification of folded-linear and skew-field block-matrix representations.

A representation with fold ell assigns point j the span of block-column j of
an (m*ell) x (n*ell) matrix over a division ring; it represents a matroid
when every subset's column span has dimension ell times the matroid rank.
Verification iterates all 2^n subsets, so it is sound for arbitrary inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (GF, QUAT_I, QUAT_J, QUAT_K, Quaternion, RING_H, RING_Q,
                      RingMatrix, field_make, mat_rank)
from .matroid import Matroid, Polymatroid, points_of, subset_label


@dataclass(frozen=True)
class FoldedRepresentation:
    """Block matrix over a division ring claimed to represent a matroid."""

    ring: object
    ell: int
    m: int          # block rows (matroid rank)
    n: int          # block columns (ground size)
    matrix: RingMatrix

    def __post_init__(self):
        if self.matrix.rows != self.m * self.ell or self.matrix.cols != self.n * self.ell:
            raise ValueError("matrix dimensions do not match block layout")

    def columns_of(self, mask: int) -> RingMatrix:
        cols = []
        for j in points_of(mask):
            cols.extend(range(j * self.ell, (j + 1) * self.ell))
        return self.matrix.column_submatrix(cols)

    def block(self, i: int, j: int):
        ell = self.ell
        return [[self.matrix.at(i * ell + r, j * ell + c) for c in range(ell)]
                for r in range(ell)]

    def subset_rank(self, mask: int) -> int:
        return mat_rank(self.ring, self.columns_of(mask))


def representation_from_blocks(ring, ell, blocks) -> FoldedRepresentation:
    """Assemble a representation from an m x n grid of ell x ell blocks."""
    m = len(blocks)
    n = len(blocks[0]) if m else 0
    rows = []
    for bi in range(m):
        if len(blocks[bi]) != n:
            raise ValueError("ragged block grid")
        for r in range(ell):
            row = []
            for bj in range(n):
                blk = blocks[bi][bj]
                if len(blk) != ell or any(len(br) != ell for br in blk):
                    raise ValueError("block is not ell x ell")
                row.extend(blk[r])
            rows.append(row)
    return FoldedRepresentation(ring, ell, m, n, RingMatrix.from_rows(ring, rows))


@dataclass(frozen=True)
class RepCheckResult:
    ok: bool
    failing_subset: int | None = None
    expected: int | None = None
    got: int | None = None

    def __bool__(self):
        return self.ok

    def describe(self):
        if self.ok:
            return "all subset ranks match"
        return (f"first failure at {subset_label(self.failing_subset)}: "
                f"expected rank {self.expected}, got {self.got}")


def verify_representation(m: Matroid, rep: FoldedRepresentation) -> RepCheckResult:
    """True iff every subset's column rank equals ell times the matroid rank.

    Checks subsets in ascending mask order and reports the first failure.
    """
    if rep.n != m.n:
        raise ValueError(f"representation has {rep.n} points, matroid has {m.n}")
    for mask in range(1, 1 << m.n):
        want = rep.ell * m.ranks[mask]
        got = rep.subset_rank(mask)
        if got != want:
            return RepCheckResult(False, mask, want, got)
    return RepCheckResult(True)


def verify_skew_representation(m: Matroid, rep: FoldedRepresentation) -> RepCheckResult:
    """Representation check over the quaternions (left row rank)."""
    if not isinstance(rep.ring, type(RING_H)):
        raise ValueError("skew verification expects a quaternion representation")
    return verify_representation(m, rep)


def block_pattern_check(m: Matroid, rep: FoldedRepresentation) -> bool:
    """For a representation in basis form (identity blocks on the first
    block-columns), each remaining block must be invertible exactly when its
    row index lies in the fundamental circuit of its column."""
    ring = rep.ring
    ell = rep.ell
    k = rep.m
    basis_mask = (1 << k) - 1
    if not m.is_basis(basis_mask):
        raise ValueError("first block-columns do not form a basis")
    for j in range(k):
        for i in range(k):
            blk = rep.block(i, j)
            want_identity = i == j
            for r in range(ell):
                for c in range(ell):
                    v = blk[r][c]
                    expect = ring.one if (want_identity and r == c) else ring.zero
                    if v != expect:
                        raise ValueError("representation is not in basis form")
    for j in range(k, rep.n):
        circ = m.fundamental_circuit(j, basis_mask)
        for i in range(k):
            blk = rep.block(i, j)
            inv = mat_rank(ring, blk) == ell
            zero = all(ring.is_zero(v) for row in blk for v in row)
            if circ >> i & 1:
                if not inv:
                    return False
            else:
                if not zero:
                    return False
    return True


def polymatroid_from_representation(rep: FoldedRepresentation) -> Polymatroid:
    """Rank vector f(X) = dim of the span of X's block-columns (a linear
    polymatroid; dividing by ell recovers the represented matroid)."""
    ranks = [rep.subset_rank(mask) for mask in range(1 << rep.n)]
    return Polymatroid(rep.n, ranks, name="linear", validate=False)


# ---------------------------------------------------------------------------
# Built-in representations.
#
# The two folded representations of the relaxed eight-point matroids follow
# one shape: identity blocks on the basis 0123 and parameter blocks B, E
# (resp. D, E) in the dependent columns.  The same shapes instantiated with
# quaternion units give the skew-field representations.  The three
# eleven-element-field matrices represent the nine-point grid matroids.
# ---------------------------------------------------------------------------


def _p3_blocks(ring, ell, B, E):
    """Parameterised block grid for the triple relaxation of the first
    eight-point family: columns 4..7 over basis 0123."""
    def matmul(X, Y):
        return [[_dot(ring, X[r], [Y[i][c] for i in range(ell)])
                 for c in range(ell)] for r in range(ell)]

    def sub(X, Y):
        return [[ring.sub(X[r][c], Y[r][c]) for c in range(ell)]
                for r in range(ell)]

    I = _identity(ring, ell)
    Z = _zero(ring, ell)
    IminusE = sub(I, E)
    EB = matmul(E, B)
    IEB = matmul(IminusE, B)
    return [
        [I, Z, Z, Z, Z, I, I, I],
        [Z, I, Z, Z, I, Z, I, IminusE],
        [Z, Z, I, Z, I, B, Z, EB],
        [Z, Z, Z, I, I, IEB, E, Z],
    ]


def _l8p_blocks(ring, ell, D, E):
    """Parameterised block grid for the relaxed second family: columns 4..7
    over basis 0123."""
    def sub(X, Y):
        return [[ring.sub(X[r][c], Y[r][c]) for c in range(ell)]
                for r in range(ell)]

    def add(X, Y):
        return [[ring.add(X[r][c], Y[r][c]) for c in range(ell)]
                for r in range(ell)]

    I = _identity(ring, ell)
    Z = _zero(ring, ell)
    C = add(sub(I, E), D)  # I - E + D
    return [
        [I, Z, Z, Z, I, I, Z, I],
        [Z, I, Z, Z, D, C, I, D],
        [Z, Z, I, Z, E, I, I, I],
        [Z, Z, Z, I, D, I, I, Z],
    ]


def _identity(ring, ell):
    return [[ring.one if r == c else ring.zero for c in range(ell)]
            for r in range(ell)]


def _zero(ring, ell):
    return [[ring.zero for _ in range(ell)] for _ in range(ell)]


def _dot(ring, xs, ys):
    acc = ring.zero
    for x, y in zip(xs, ys):
        acc = ring.add(acc, ring.mul(x, y))
    return acc


def p3_representation_gf5(field=None) -> FoldedRepresentation:
    """Fold-2 representation of catalog P3 over GF(5)."""
    ring = field if field is not None else field_make(5, 1)
    e = ring.from_int
    B = [[e(1), e(1)], [e(1), e(0)]]
    E = [[e(0), e(2)], [e(2), e(0)]]
    return representation_from_blocks(ring, 2, _p3_blocks(ring, 2, B, E))


def l8p_representation_gf25(field=None) -> FoldedRepresentation:
    """Fold-2 representation of catalog L8p over GF(25), built from an
    element i with i*i = -1 (recomputed per modulus)."""
    ring = field if field is not None else field_make(5, 2)
    i = ring.sqrt_of_minus_one()
    zero, one = ring.zero, ring.one
    minus_one = ring.neg(one)
    D = [[zero, minus_one], [one, zero]]
    E = [[i, zero], [zero, ring.neg(i)]]
    return representation_from_blocks(ring, 2, _l8p_blocks(ring, 2, D, E))


def p3_representation_quaternion() -> FoldedRepresentation:
    """Fold-1 skew representation of P3 with B = k and E = j."""
    ring = RING_H
    B = [[QUAT_K]]
    E = [[QUAT_J]]
    return representation_from_blocks(ring, 1, _p3_blocks(ring, 1, B, E))


def l8p_representation_quaternion() -> FoldedRepresentation:
    """Fold-1 skew representation of L8p with E = i and D = j."""
    ring = RING_H
    D = [[QUAT_J]]
    E = [[QUAT_I]]
    return representation_from_blocks(ring, 1, _l8p_blocks(ring, 1, D, E))


# Columns are indexed by grid cells (0,0),(0,1),...,(2,2), i.e. point 3a+b.
_F11_MATRICES = {
    "M_o": [
        [1, 0, 1, 1, 1, 0, 0, 1, 1],
        [1, 1, 0, 1, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 1, 0, 1, 1],
        [0, 0, 0, 1, 1, 0, 1, 1, 0],
        [0, 6, 0, 1, 0, 4, 0, 2, 3],
    ],
    "M_00": [
        [1, 1, 1, 1, 1, 0, 0, 1, 1],
        [0, 0, 0, 5, 0, 1, 1, 0, 10],
        [1, 0, 8, 1, 0, 3, 0, 0, 0],
        [0, 0, 0, 1, 1, 0, 6, 7, 0],
        [1, 5, 0, 1, 1, 0, 0, 0, 0],
    ],
    "M_01": [
        [1, 0, 1, 1, 1, 0, 0, 7, 1],
        [1, 1, 0, 1, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 1, 0, 7, 1],
        [0, 0, 0, 1, 1, 0, 1, 1, 0],
        [9, 0, 7, 6, 0, 3, 6, 0, 6],
    ],
}

# Grid relabellings deriving the remaining relaxations from M_00 / M_01:
# point (a, b) of the target matroid corresponds to source point perm(a, b).
_GRID_REP_SOURCES = {
    "M_02": ("M_00", lambda a, b: (a, 2 - b)),          # swap columns 0 and 2
    "M_20": ("M_00", lambda a, b: (2 - a, b)),          # swap rows 0 and 2
    "M_10": ("M_01", lambda a, b: (b, a)),              # transpose
    "M_21": ("M_01", lambda a, b: (2 - a, b)),          # swap rows 0 and 2
    "M_12": ("M_01", lambda a, b: (2 - b, a)),          # transpose + row swap
    "M_22": ("M_00", lambda a, b: (2 - a, 2 - b)),      # rotate by 180
}


def grid_matroid_representation(name: str) -> FoldedRepresentation:
    """F11-linear (fold 1) representation of a nine-point grid matroid from
    the catalog (M_o, tictactoe relaxations M_ab)."""
    ring = field_make(11, 1)
    if name in _F11_MATRICES:
        scalars = _F11_MATRICES[name]
    elif name in _GRID_REP_SOURCES:
        src, perm = _GRID_REP_SOURCES[name]
        base = _F11_MATRICES[src]
        scalars = [[None] * 9 for _ in range(5)]
        for a in range(3):
            for b in range(3):
                sa, sb = perm(a, b)
                for r in range(5):
                    scalars[r][3 * a + b] = base[r][3 * sa + sb]
    else:
        raise KeyError(f"no built-in representation for {name!r}")
    blocks = [[[[ring.from_int(v)]] for v in row] for row in scalars]
    return representation_from_blocks(ring, 1, blocks)


_BUILTINS = {
    "P3_gf5": ("P3", p3_representation_gf5),
    "L8p_gf25": ("L8p", l8p_representation_gf25),
    "P3_quaternion": ("P3", p3_representation_quaternion),
    "L8p_quaternion": ("L8p", l8p_representation_quaternion),
}


def builtin_representation(key: str):
    """(matroid name, representation) for a named built-in."""
    if key in _BUILTINS:
        name, fn = _BUILTINS[key]
        return name, fn()
    if key.endswith("_f11"):
        name = key[:-4]
        return name, grid_matroid_representation(name)
    raise KeyError(f"unknown built-in representation {key!r}; known: "
                   + ", ".join(sorted(builtin_representation_keys())))


def builtin_representation_keys():
    keys = list(_BUILTINS)
    keys += [f"{n}_f11" for n in list(_F11_MATRICES) + list(_GRID_REP_SOURCES)]
    return sorted(keys)


# ---------------------------------------------------------------------------
# File format.
# ---------------------------------------------------------------------------


class RepresentationFileError(ValueError):
    pass


def _entry_from_json(ring, v, where):
    try:
        if isinstance(v, bool):
            raise TypeError("booleans are not ring elements")
        if isinstance(v, int):
            return ring.from_int(v)
        if isinstance(v, str) and "/" in v:
            num, den = v.split("/")
            q = Fraction(int(num), int(den))
            if isinstance(ring, type(RING_Q)):
                return q
            raise TypeError("fractional entries need the rational ring")
        if isinstance(v, list) and len(v) == 4:
            if isinstance(ring, type(RING_H)):
                return Quaternion.of(*[Fraction(str(t)) for t in v])
            raise TypeError("quaternion entries need the quaternion ring")
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise RepresentationFileError(f"{where}: bad entry {v!r} ({e})")
    raise RepresentationFileError(f"{where}: bad entry {v!r}")


def load_representation(path) -> FoldedRepresentation:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise RepresentationFileError(f"{path}: {e}")
    except json.JSONDecodeError as e:
        raise RepresentationFileError(f"{path}:{e.lineno}:{e.colno}: {e.msg}")
    if not isinstance(doc, dict):
        raise RepresentationFileError(f"{path}: top level must be an object")
    kind = doc.get("ring")
    if kind == "gf":
        try:
            ring = field_make(doc.get("p", 0), doc.get("k", 1),
                              tuple(doc["modulus"]) if "modulus" in doc else None)
        except ValueError as e:
            raise RepresentationFileError(f"{path}: {e}")
    elif kind == "rational":
        ring = RING_Q
    elif kind == "quaternion":
        ring = RING_H
    else:
        raise RepresentationFileError(f"{path}: ring must be gf, rational or "
                                      f"quaternion (got {kind!r})")
    ell = doc.get("ell", 1)
    if not isinstance(ell, int) or ell < 1:
        raise RepresentationFileError(f"{path}: ell must be a positive int")
    blocks_doc = doc.get("blocks")
    if not isinstance(blocks_doc, list) or not blocks_doc:
        raise RepresentationFileError(f"{path}: missing blocks")
    blocks = []
    for bi, brow in enumerate(blocks_doc):
        row = []
        for bj, blk in enumerate(brow):
            where = f"{path}: blocks[{bi}][{bj}]"
            if not (isinstance(blk, list) and len(blk) == ell
                    and all(isinstance(r, list) and len(r) == ell for r in blk)):
                raise RepresentationFileError(f"{where}: expected {ell}x{ell} entries")
            row.append([[_entry_from_json(ring, v, where) for v in r]
                        for r in blk])
        blocks.append(row)
    try:
        return representation_from_blocks(ring, ell, blocks)
    except ValueError as e:
        raise RepresentationFileError(f"{path}: {e}")


def dump_representation(rep: FoldedRepresentation, path):
    ring = rep.ring
    if isinstance(ring, GF):
        head = {"ring": "gf", "p": ring.p, "k": ring.k,
                "modulus": list(ring.modulus)}

        def enc(v):
            # subfield elements encode as plain integers
            if all(c == 0 for c in v[1:]):
                return v[0]
            raise ValueError("extension-field entries have no file encoding")
    elif isinstance(ring, type(RING_H)):
        head = {"ring": "quaternion"}

        def enc(v):
            return [str(v.a), str(v.b), str(v.c), str(v.d)]
    else:
        head = {"ring": "rational"}

        def enc(v):
            return str(v)
    blocks = []
    for i in range(rep.m):
        row = []
        for j in range(rep.n):
            blk = rep.block(i, j)
            row.append([[enc(v) for v in r] for r in blk])
        blocks.append(row)
    head.update({"ell": rep.ell, "blocks": blocks})
    with open(path, "w") as fh:
        json.dump(head, fh)
        fh.write("\n")
