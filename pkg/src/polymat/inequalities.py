"""Ingleton and Zhang-Yeung compliance checks, the sparse-paving witness
criterion, the bundle condition, and eight-point minor witnesses.

The exhaustive quadruple scans run over an integer copy of the rank vector
(rationals are scaled by their common denominator first), so every verdict
is exact; reported deficits are re-evaluated with Fraction arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from ._parallel import pmap
from .matroid import Matroid, Polymatroid, mask_of, points_of, popcount, subset_label


@dataclass(frozen=True)
class QuadrupleWitness:
    """Four subsets violating an inequality, plus the exact positive deficit."""

    a1: int
    a2: int
    a3: int
    a4: int
    deficit: Fraction

    def sets(self):
        return (self.a1, self.a2, self.a3, self.a4)

    def describe(self):
        return ("A1=%s A2=%s A3=%s A4=%s deficit=%s"
                % (subset_label(self.a1), subset_label(self.a2),
                   subset_label(self.a3), subset_label(self.a4), self.deficit))


@dataclass(frozen=True)
class SpicWitness:
    """Disjoint B, A1..A4 with B+A1+A4 a basis and the other five unions
    circuit-hyperplanes."""

    b: int
    a1: int
    a2: int
    a3: int
    a4: int

    def pairs(self):
        return (self.a1, self.a2, self.a3, self.a4)

    def quadruple(self):
        """The subsets (B+A_i) whose quadruple violates both inequalities."""
        return tuple(self.b | a for a in self.pairs())

    def describe(self):
        return ("B=%s A1=%s A2=%s A3=%s A4=%s"
                % tuple(subset_label(s) for s in (self.b,) + self.pairs()))


@dataclass(frozen=True)
class BundleWitness:
    """Four rank-2 flats in the forbidden bundle configuration."""

    a1: int
    a2: int
    a3: int
    a4: int

    def sets(self):
        return (self.a1, self.a2, self.a3, self.a4)


def ingleton_deficit(p: Polymatroid, a1, a2, a3, a4):
    """Positive iff the quadruple violates the four-set rank inequality."""
    r = p.ranks
    return (r[a2] + r[a3] + r[a1 | a4] + r[a1 | a2 | a3] + r[a2 | a3 | a4]
            - r[a2 | a3] - r[a1 | a2] - r[a1 | a3] - r[a2 | a4] - r[a3 | a4])


def zy_deficit(p: Polymatroid, a1, a2, a3, a4):
    """Positive iff the quadruple violates the four-set information
    inequality (the non-Shannon one with the doubled mutual term)."""
    r = p.ranks
    return (2 * r[a2] + 2 * r[a3] + r[a1] + r[a1 | a4]
            + 4 * r[a1 | a2 | a3] + r[a2 | a3 | a4]
            - 3 * r[a2 | a3] - 3 * r[a1 | a2] - 3 * r[a1 | a3]
            - r[a2 | a4] - r[a3 | a4])


# ---------------------------------------------------------------------------
# Exhaustive scans.
#
# For fixed (A1, A4) both deficits reduce to g[A2] + g[A3] + h[A2|A3] + const
# for vectors g, h indexed by subsets, so one (A1, A4) step costs a couple of
# numpy operations on an N x N matrix.  The scan order (A1 asc, A4 asc, then
# row-major (A2, A3)) fixes the deterministic first witness; parallel runs
# partition the A1 range and keep the earliest hit.
# ---------------------------------------------------------------------------

_SCAN_LIMIT = 10


def _scan_chunk(args):
    ranks, n, mode, a1_lo, a1_hi, find_all, limit = args
    r = np.array(ranks, dtype=np.int64)
    N = 1 << n
    masks = np.arange(N, dtype=np.intp)
    union = masks[:, None] | masks[None, :]
    ru = r[union]  # ru[a, x] = r[a | x]
    hits = []
    for a1 in range(a1_lo, a1_hi):
        u1 = ru[a1]
        a4_start = a1 if mode == "ingleton" else 0
        for a4 in range(a4_start, N):
            if mode == "ingleton":
                h = u1 + ru[a4] - r
                mat = h[union]
                mat -= h[:, None]
                mat -= h[None, :]
                mat += r[a1 | a4]
            else:
                u4 = ru[a4]
                g2 = 2 * r - 3 * u1 - u4
                h2 = 4 * u1 + u4 - 3 * r
                mat = h2[union]
                mat += g2[:, None]
                mat += g2[None, :]
                mat += r[a1] + r[a1 | a4]
            if mat.max() <= 0:
                continue
            pos = np.argwhere(mat > 0)
            for a2, a3 in pos:
                if a2 > a3:
                    continue  # symmetric copy already seen
                hits.append((a1, int(a2), int(a3), a4))
                if not find_all:
                    return hits
                if limit is not None and len(hits) >= limit:
                    return hits
    return hits


def _run_scan(p, mode, find_all, limit, workers):
    if p.n > _SCAN_LIMIT:
        raise ValueError(
            f"exhaustive scan limited to {_SCAN_LIMIT} points (got {p.n}); "
            "use spic_witness for sparse paving matroids")
    scaled, _den = p.scaled_ranks()
    ranks = tuple(int(v) for v in scaled)
    N = 1 << p.n
    workers = max(1, workers)
    if workers == 1:
        chunks = [(ranks, p.n, mode, 0, N, find_all, limit)]
    else:
        step = max(1, N // (workers * 4))
        chunks = [(ranks, p.n, mode, lo, min(lo + step, N), find_all, limit)
                  for lo in range(0, N, step)]
    out = []
    for chunk_hits in pmap(_scan_chunk, chunks, workers=workers):
        out.extend(chunk_hits)
        if not find_all and out:
            break
        if find_all and limit is not None and len(out) >= limit:
            out = out[:limit]
            break
    deficit_fn = ingleton_deficit if mode == "ingleton" else zy_deficit
    witnesses = []
    for a1, a2, a3, a4 in out:
        d = deficit_fn(p, a1, a2, a3, a4)
        assert d > 0, "scan hit must re-evaluate to a violation"
        witnesses.append(QuadrupleWitness(a1, a2, a3, a4, Fraction(d)))
        if not find_all:
            return witnesses[0]
    if find_all:
        return witnesses
    return None


def ingleton_scan(p: Polymatroid, find_all=False, limit=None, workers=1):
    """First violating quadruple in deterministic order, or None.

    With find_all=True, returns the list of violations (capped by limit).
    Exploits the A2<->A3 and A1<->A4 symmetries.
    """
    return _run_scan(p, "ingleton", find_all, limit, workers)


def zy_scan(p: Polymatroid, find_all=False, limit=None, workers=1):
    """Like ingleton_scan for the stronger information inequality.  Only the
    A2<->A3 symmetry holds here, so the scan covers all (A1, A4) pairs."""
    return _run_scan(p, "zy", find_all, limit, workers)


# ---------------------------------------------------------------------------
# Sparse-paving witness criterion.
# ---------------------------------------------------------------------------


def _pair_partitions(points8):
    """All partitions of 8 points into 4 unordered pairs, deterministically."""
    if not points8:
        yield ()
        return
    head = points8[0]
    rest = points8[1:]
    for i, other in enumerate(rest):
        pair = (head, other)
        remaining = rest[:i] + rest[i + 1:]
        for sub in _pair_partitions(remaining):
            yield (pair,) + sub


# unordered {A1,A4} choices out of 4 pairs; the remaining two become {A2,A3}
_ROLE_SPLITS = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)),
                ((1, 2), (0, 3)), ((1, 3), (0, 2)), ((2, 3), (0, 1))]


def spic_witness(m: Matroid, find_all=False):
    """Search for the five-disjoint-subset configuration that characterises
    Ingleton violation in sparse paving matroids of rank >= 4."""
    if not m.is_sparse_paving():
        raise ValueError("spic_witness requires a sparse paving matroid")
    k = m.rank_total
    results = []
    if k < 4 or m.n < k + 4:
        return [] if find_all else None
    r = m.ranks
    points = list(range(m.n))
    for bpts in combinations(points, k - 4):
        b = mask_of(bpts)
        rest = [p for p in points if not b >> p & 1]
        for eight in combinations(rest, 8):
            for pairs in _pair_partitions(eight):
                pmask = [mask_of(pr) for pr in pairs]
                for (i14, (j2, j3)) in _ROLE_SPLITS:
                    a1 = pmask[i14[0]]
                    a4 = pmask[i14[1]]
                    a2 = pmask[j2]
                    a3 = pmask[j3]
                    if r[b | a1 | a4] != k:
                        continue
                    if (r[b | a1 | a2] == k - 1 and r[b | a1 | a3] == k - 1
                            and r[b | a2 | a3] == k - 1
                            and r[b | a2 | a4] == k - 1
                            and r[b | a3 | a4] == k - 1):
                        w = SpicWitness(b, a1, a2, a3, a4)
                        if not find_all:
                            return w
                        results.append(w)
    return results if find_all else None


def bundle_violation(m: Matroid):
    """Four rank-2 flats with pairwise-union ranks 3 except r(A1 A4) = 4 and
    all triple/quadruple unions of rank 4, if such a configuration exists."""
    r = m.ranks
    flats2 = m.flats(rank=2)
    for i2, a2 in enumerate(flats2):
        for a3 in flats2[i2 + 1:]:
            if r[a2 | a3] != 3:
                continue
            for i1, a1 in enumerate(flats2):
                if a1 in (a2, a3):
                    continue
                if r[a1 | a2] != 3 or r[a1 | a3] != 3:
                    continue
                if r[a1 | a2 | a3] != 4:
                    continue
                for a4 in flats2[i1 + 1:]:
                    if a4 in (a2, a3):
                        continue
                    if r[a1 | a4] != 4:
                        continue
                    if r[a2 | a4] != 3 or r[a3 | a4] != 3:
                        continue
                    if (r[a1 | a2 | a4] == 4 and r[a1 | a3 | a4] == 4
                            and r[a2 | a3 | a4] == 4
                            and r[a1 | a2 | a3 | a4] == 4):
                        return BundleWitness(a1, a2, a3, a4)
    return None


@dataclass(frozen=True)
class MinorWitness:
    """Reduction of an Ingleton violation to an eight-point minor."""

    ops: tuple          # sequence of ("contract"|"delete", mask) on the input
    minor: Matroid      # the resulting 8-point matroid
    spic: SpicWitness   # witness inside the minor (B is empty there)
    quadruple: QuadrupleWitness  # violating quadruple inside the minor


def ingleton_minor_witness(m: Matroid):
    """For a non-Ingleton-compliant sparse paving matroid, produce an
    8-point minor that is still non-compliant, together with its witness."""
    w = spic_witness(m)
    if w is None:
        return None
    keep_mask = w.a1 | w.a2 | w.a3 | w.a4
    drop = m.full_mask & ~keep_mask & ~w.b
    ops = []
    minor = m
    cur_b, cur_pairs = w.b, list(w.pairs())

    def remap(mask, removed):
        keep = [p for p in range(minor.n) if not removed >> p & 1]
        pos = {p: i for i, p in enumerate(keep)}
        return mask_of(pos[p] for p in points_of(mask))

    if w.b:
        ops.append(("contract", w.b))
        removed = w.b
        cur_pairs = [remap(a, removed) for a in cur_pairs]
        drop = remap(drop, removed)
        minor = minor.contract(w.b)
        cur_b = 0
    if drop:
        ops.append(("delete", drop))
        cur_pairs = [remap(a, drop) for a in cur_pairs]
        minor = minor.delete(drop)
    a1, a2, a3, a4 = cur_pairs
    spic = SpicWitness(0, a1, a2, a3, a4)
    d = ingleton_deficit(minor, a1, a2, a3, a4)
    assert d > 0, "minor must inherit the violation"
    quad = QuadrupleWitness(a1, a2, a3, a4, Fraction(d))
    return MinorWitness(tuple(ops), minor, spic, quad)
