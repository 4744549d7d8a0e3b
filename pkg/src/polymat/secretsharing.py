"""Access structures, matroid ports, bound orchestration and
lambda-decomposition verification.

Bound searches evaluate candidate query sets in a fixed logical order and
in fixed-size batches, so the reported value, witness queries and searched
counts are identical for any worker count.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._parallel import pmap
from .lpmodel import (AkQuery, CiQuery, build_ak_feasibility,
                      build_ci_feasibility, build_kappa, build_lambda,
                      build_sigma, candidate_queries, ci_candidate_pairs,
                      subset_label)
from .matroid import Matroid, mask_of, points_of, popcount
from .repcheck import FoldedRepresentation, verify_representation
from .simplex import SolveOutcome, export_certificate, solve

_SEARCH_BATCH = 16  # fixed logical batch; workers only split within a batch


class AccessStructureError(ValueError):
    pass


class AccessStructure:
    """Perfect access function given by its minimal qualified sets.

    Masks are over player positions (index into the sorted player tuple).
    """

    def __init__(self, players, min_qualified, po_name="p_o", name=None,
                 source=None):
        self.players = tuple(players)
        self.po_name = po_name
        self.name = name
        self.source = source  # (Matroid, po point) for ports
        mq = sorted(set(int(m) for m in min_qualified))
        if not mq or 0 in mq:
            raise AccessStructureError("need nonempty minimal qualified sets")
        for a in mq:
            for b in mq:
                if a != b and a & b == a:
                    raise AccessStructureError(
                        "minimal qualified sets must form an antichain")
        covered = 0
        for a in mq:
            covered |= a
        if covered != (1 << len(self.players)) - 1:
            missing = [self.players[i] for i in range(len(self.players))
                       if not covered >> i & 1]
            raise AccessStructureError(
                f"structure is not connected: players {missing} are in no "
                f"minimal qualified set")
        self.min_qualified = tuple(mq)
        self._max_unqual = None

    @property
    def num_players(self):
        return len(self.players)

    def label(self, mask):
        return subset_label(mask, self.players)

    def ground_label(self, mask):
        """Label for a mask over players plus the port point (last bit)."""
        return subset_label(mask, tuple(self.players) + (self.po_name,))

    def qualified(self, mask: int) -> bool:
        return any(mask & q == q for q in self.min_qualified)

    def max_unqualified(self):
        """Maximal unqualified sets, by complement enumeration."""
        if self._max_unqual is None:
            full = (1 << self.num_players) - 1
            out = []
            for m in range(full + 1):
                if self.qualified(m):
                    continue
                if all(self.qualified(m | (1 << i))
                       for i in range(self.num_players) if not m >> i & 1):
                    out.append(m)
            self._max_unqual = tuple(out)
        return self._max_unqual

    def __eq__(self, other):
        return (isinstance(other, AccessStructure)
                and self.players == other.players
                and self.min_qualified == other.min_qualified)

    def __hash__(self):
        return hash((self.players, self.min_qualified))

    def __repr__(self):
        return (f"<AccessStructure {self.name or ''} on {self.num_players} "
                f"players, {len(self.min_qualified)} min qualified>")

    # -- duality and minors --------------------------------------------------

    def dual(self) -> "AccessStructure":
        full = (1 << self.num_players) - 1
        mq = []
        for m in range(full + 1):
            if self.qualified(full ^ m):
                continue
            if all(self.qualified(full ^ (m & ~(1 << i)))
                   for i in range(self.num_players) if m >> i & 1):
                mq.append(m)  # minimal with unqualified complement
        return AccessStructure(self.players, mq, po_name=self.po_name,
                               name=None if self.name is None
                               else self.name + "*")

    def _remap(self, keep_positions, masks):
        pos = {p: i for i, p in enumerate(keep_positions)}
        return [mask_of(pos[p] for p in points_of(m)) for m in masks]

    def delete(self, bmask: int) -> "AccessStructure":
        full = (1 << self.num_players) - 1
        if not self.qualified(full ^ bmask):
            raise AccessStructureError(
                "deletion requires the remaining players to be qualified")
        keep = [i for i in range(self.num_players) if not bmask >> i & 1]
        mq = [q for q in self.min_qualified if not q & bmask]
        return AccessStructure([self.players[i] for i in keep],
                               self._remap(keep, mq), po_name=self.po_name)

    def contract(self, bmask: int) -> "AccessStructure":
        if self.qualified(bmask):
            raise AccessStructureError(
                "contraction requires an unqualified set")
        keep = [i for i in range(self.num_players) if not bmask >> i & 1]
        reduced = sorted(set(q & ~bmask for q in self.min_qualified))
        mq = [q for q in reduced
              if not any(o != q and o & q == o for o in reduced)]
        return AccessStructure([self.players[i] for i in keep],
                               self._remap(keep, mq), po_name=self.po_name)


def port(m: Matroid, po: int, name=None) -> AccessStructure:
    """Access structure on Q minus po where X is qualified iff adding po
    does not raise its rank."""
    if not 0 <= po < m.n:
        raise AccessStructureError(
            f"port point {po} outside the ground set 0..{m.n - 1}")
    if m.ranks[1 << po] == 0:
        raise AccessStructureError("port point must not be a loop")
    if m.ranks[m.full_mask & ~(1 << po)] != m.rank_total:
        raise AccessStructureError("port point must not be a coloop")
    players = [p for p in range(m.n) if p != po]
    po_bit = 1 << po

    def to_matroid_mask(pm):
        return mask_of(players[i] for i in points_of(pm))

    mq = []
    for pm in range(1 << len(players)):
        x = to_matroid_mask(pm)
        if m.ranks[x | po_bit] != m.ranks[x]:
            continue
        minimal = True
        for i in points_of(pm):
            y = to_matroid_mask(pm & ~(1 << i))
            if m.ranks[y | po_bit] == m.ranks[y]:
                minimal = False
                break
        if minimal:
            mq.append(pm)
    if name is None and m.name is not None:
        name = f"{m.name}:port{po}"
    return AccessStructure(players, mq, po_name=str(po), name=name,
                           source=(m, po))


def dual_structure(acc: AccessStructure) -> AccessStructure:
    return acc.dual()


def delete_structure(acc: AccessStructure, bmask: int) -> AccessStructure:
    return acc.delete(bmask)


def contract_structure(acc: AccessStructure, bmask: int) -> AccessStructure:
    return acc.contract(bmask)


# ---------------------------------------------------------------------------
# Bounds.
# ---------------------------------------------------------------------------

BOUND_KINDS = ("kappa", "lambda_lower", "sigma_bar_lower")


@dataclass
class BoundReport:
    structure: str
    kind: str
    value: Fraction
    queries: tuple          # achieving query set (possibly empty)
    searched: int           # candidate sets evaluated
    outcome: SolveOutcome   # certificate for the achieving program
    acc: AccessStructure
    note: str = ""

    def query_text(self):
        acc = self.acc
        parts = []
        for q in self.queries:
            if isinstance(q, CiQuery):
                parts.append(f"CI(A={acc.ground_label(q.a)}, "
                             f"B={acc.ground_label(q.b)})")
            else:
                parts.append(f"AK(U={acc.ground_label(q.u)}, "
                             f"V={acc.ground_label(q.v)}, "
                             f"Z={acc.ground_label(q.z)})")
        return "; ".join(parts) if parts else "-"

    def build_lp(self):
        if self.kind == "kappa":
            return build_kappa(self.acc)
        if self.kind == "lambda_lower":
            return build_lambda(self.acc, self.queries)
        return build_sigma(self.acc, self.queries)

    def verify(self) -> bool:
        """Re-check the stored certificate against a freshly built LP."""
        from .simplex import verify_certificate
        return verify_certificate(self.build_lp(), self.outcome)

    def certificate_text(self):
        return export_certificate(self.build_lp(), self.outcome)

    def render(self, decimal=False) -> str:
        val = str(self.value)
        if decimal:
            val += f" (~{float(self.value):.6f})"
        lines = [f"structure: {self.structure}",
                 f"bound: {self.kind}",
                 f"value: {val}",
                 f"queries: {self.query_text()}",
                 f"candidates-searched: {self.searched}"]
        if self.note:
            lines.append(f"note: {self.note}")
        return "\n".join(lines) + "\n"


def _solve_query_set(args):
    acc, kind, queries = args
    if kind == "lambda_lower":
        lp = build_lambda(acc, queries)
    else:
        lp = build_sigma(acc, queries)
    return solve(lp)


def bound(acc: AccessStructure, kind: str, max_pairs=512, max_triples=1024,
          target=None, depth2=True, workers=1) -> BoundReport:
    """Best certified lower bound over candidate query sets within budget.

    kappa is exact; lambda_lower / sigma_bar_lower report the maximum LP
    optimum over single-query candidates, escalating to pairs of queries
    (two extension points) when a target value is not reached.  Any reported
    value is a valid lower bound; optimality over all query sets is never
    claimed.
    """
    if kind not in BOUND_KINDS:
        raise ValueError(f"unknown bound kind {kind!r}")
    sid = acc.name or "structure"
    if kind == "kappa":
        out = solve(build_kappa(acc))
        return BoundReport(sid, kind, out.value, (), 1, out, acc)
    if acc.source is None:
        raise AccessStructureError(
            "lambda/sigma bounds need a matroid-port structure")
    m, po = acc.source
    ci, ak = candidate_queries(m, po, max_pairs=max_pairs,
                               max_triples=max_triples)
    singles = ci if kind == "lambda_lower" else ak
    base = solve(build_kappa(acc))
    best_value, best_queries, best_out = base.value, (), base
    searched = 0
    single_scores = []  # (value, candidate index), for depth-2 ranking

    def consider(queries, out):
        nonlocal best_value, best_queries, best_out
        if out.value > best_value:
            best_value, best_queries, best_out = out.value, tuple(queries), out

    done = False
    for lo in range(0, len(singles), _SEARCH_BATCH):
        batch = singles[lo:lo + _SEARCH_BATCH]
        outs = pmap(_solve_query_set,
                    [(acc, kind, (q,)) for q in batch], workers=workers)
        for off, (q, out) in enumerate(zip(batch, outs)):
            searched += 1
            single_scores.append((out.value, lo + off))
            consider((q,), out)
        if target is not None and best_value >= target:
            done = True
            break
    if not done and depth2 and target is not None and best_value < target:
        # escalate to two extension points, pairing the strongest singles
        top = [i for _, i in sorted(single_scores,
                                    key=lambda t: (-t[0], t[1]))[:12]]
        pairs = [(singles[i], singles[j])
                 for ii, i in enumerate(top) for j in top[ii + 1:]]
        for lo in range(0, len(pairs), _SEARCH_BATCH):
            batch = pairs[lo:lo + _SEARCH_BATCH]
            outs = pmap(_solve_query_set,
                        [(acc, kind, qs) for qs in batch], workers=workers)
            for qs, out in zip(batch, outs):
                searched += 1
                consider(qs, out)
            if best_value >= target:
                break
    note = ""
    if target is not None and best_value < target:
        note = (f"target {target} not reached within budget; certified "
                f"lower bound is {best_value}")
    return BoundReport(sid, kind, best_value, best_queries, searched,
                       best_out, acc, note=note)


def is_matroid_port(acc: AccessStructure) -> bool:
    """True iff kappa equals 1.  The known gap (no structure has kappa
    strictly between 1 and 3/2) is asserted as a sanity check."""
    rep = bound(acc, "kappa")
    k = rep.value
    assert not (1 < k < Fraction(3, 2)), f"kappa gap violated: {k}"
    return k == 1


# ---------------------------------------------------------------------------
# Lambda decompositions.
# ---------------------------------------------------------------------------


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class DecompositionPart:
    """An ideal linear scheme witness: a matroid, its verified
    representation, and the port point."""

    matroid: Matroid
    po: int
    representation: FoldedRepresentation

    def structure(self):
        return port(self.matroid, self.po)


@dataclass(frozen=True)
class Decomposition:
    target: AccessStructure
    parts: tuple
    threshold: int  # minimum number of parts covering each qualified set


def verify_decomposition(d: Decomposition) -> Fraction:
    """All-or-nothing combinatorial check of a decomposition.

    Each part must carry a verified representation over one common ring;
    every minimal qualified set of the target must be qualified in at least
    `threshold` parts and every maximal unqualified set must be unqualified
    in all parts.  Returns the information ratio len(parts)/threshold.
    """
    if not d.parts or d.threshold < 1 or d.threshold > len(d.parts):
        raise DecompositionError("need 1 <= threshold <= number of parts")
    rings = set()
    structures = []
    for i, part in enumerate(d.parts):
        res = verify_representation(part.matroid, part.representation)
        if not res:
            raise DecompositionError(
                f"part {i} has an invalid ideal-scheme witness: "
                f"{res.describe()}")
        rings.add(part.representation.ring)
        s = part.structure()
        if s.players != d.target.players:
            raise DecompositionError(f"part {i} has a different player set")
        structures.append(s)
    if len(rings) != 1:
        raise DecompositionError("parts must share a common field")
    for q in d.target.min_qualified:
        cover = sum(1 for s in structures if s.qualified(q))
        if cover < d.threshold:
            raise DecompositionError(
                f"qualified set {d.target.label(q)} is covered only {cover} "
                f"times (need {d.threshold})")
    for u in d.target.max_unqualified():
        for i, s in enumerate(structures):
            if s.qualified(u):
                raise DecompositionError(
                    f"unqualified set {d.target.label(u)} is qualified in "
                    f"part {i}")
    return Fraction(len(d.parts), d.threshold)


def tictactoe_decomposition() -> Decomposition:
    """The six-part decomposition of the tic-tac-toe port at cell (0,0),
    built from the nine-point grid matroids and their representations."""
    from .matroid import catalog
    from .repcheck import grid_matroid_representation
    target = port(catalog("tictactoe"), 0)
    parts = []
    for name in ("M_o", "M_00", "M_01", "M_02", "M_10", "M_20"):
        parts.append(DecompositionPart(
            catalog(name), 0, grid_matroid_representation(name)))
    return Decomposition(target, tuple(parts), 5)
