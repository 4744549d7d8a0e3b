"""Construction of the bound and extension-feasibility linear programs.

Variables are the rank values of subsets of an extended ground set (the
empty set is pinned to rank 0 and never becomes a variable).  Every builder
emits rows in a fixed documented order, so identical inputs produce
byte-identical programs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .inequalities import spic_witness
from .matroid import Matroid, Polymatroid, mask_of, points_of, popcount, subset_label


@dataclass(frozen=True)
class Row:
    """Sparse constraint row: sum(coeff * var) rel rhs, rel in {>=, =}."""

    coeffs: tuple   # ((var_index, Fraction), ...) sorted by var index
    rel: str
    rhs: Fraction

    def evaluate(self, x):
        return sum(c * x[j] for j, c in self.coeffs)

    def satisfied_by(self, x) -> bool:
        v = self.evaluate(x)
        return v == self.rhs if self.rel == "=" else v >= self.rhs


def make_row(coeff_map, rel, rhs) -> Row:
    items = tuple(sorted((j, Fraction(c)) for j, c in coeff_map.items() if c != 0))
    if rel == "<=":
        items = tuple((j, -c) for j, c in items)
        rel, rhs = ">=", -Fraction(rhs)
    if rel not in (">=", "="):
        raise ValueError(f"bad relation {rel!r}")
    return Row(items, rel, Fraction(rhs))


class LinearProgram:
    """Minimisation LP over named variables with exact-rational rows."""

    def __init__(self, var_keys, rows, objective, description=""):
        self.var_keys = tuple(var_keys)
        self.rows = tuple(rows)
        self.objective = tuple(sorted((j, Fraction(c)) for j, c in objective))
        self.description = description
        for row in self.rows:
            for j, _ in row.coeffs:
                if not 0 <= j < len(self.var_keys):
                    raise ValueError("row references undeclared variable")

    @property
    def num_vars(self):
        return len(self.var_keys)

    def objective_value(self, x):
        return sum(c * x[j] for j, c in self.objective)

    def dump(self) -> str:
        """Plain-text rendering for cross-checks with external solvers."""
        out = [f"# {self.description}" if self.description else "# lp"]
        if self.objective:
            terms = " + ".join(f"{c}*{self.var_keys[j]}" for j, c in self.objective)
            out.append(f"minimize {terms}")
        else:
            out.append("feasibility")
        for row in self.rows:
            terms = " ".join(
                f"{'+' if c >= 0 else '-'}{abs(c)}*{self.var_keys[j]}"
                for j, c in row.coeffs)
            out.append(f"{terms} {row.rel} {row.rhs}")
        return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Ground bookkeeping.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtendedGround:
    """Base points (with an optional designated secret point) plus ordered
    extension points, all mapped to bit positions 0..n-1."""

    base_names: tuple
    po_index: int
    ext_names: tuple = ()

    def __post_init__(self):
        if self.size > 16:
            raise ValueError("extended ground exceeds 16 points")
        if len(set(self.base_names) | set(self.ext_names)) != self.size:
            raise ValueError("extension points must be distinct from the base")

    @property
    def size(self) -> int:
        return len(self.base_names) + len(self.ext_names)

    @property
    def names(self):
        return tuple(self.base_names) + tuple(self.ext_names)

    def label(self, mask: int) -> str:
        return subset_label(mask, self.names)


@dataclass(frozen=True)
class CiQuery:
    """Request a common-information point for the pair (a, b)."""

    a: int
    b: int
    point: str = "x_o"


@dataclass(frozen=True)
class AkQuery:
    """Request an AK-information point for the triple (u, v, z)."""

    u: int
    v: int
    z: int
    point: str = "z_o"


# ---------------------------------------------------------------------------
# Shannon block: the elemental monotonicity and submodularity rows, which
# imply the polymatroid axioms for any function with f(empty) = 0.
# ---------------------------------------------------------------------------

SHANNON_GROUND_LIMIT = 12


@lru_cache(maxsize=None)
def shannon_block(n: int):
    """Elemental rows over masks: n monotonicity rows f(G)-f(G\\x) >= 0 and
    C(n,2)*2^(n-2) submodularity rows f(Zx)+f(Zy)-f(Zxy)-f(Z) >= 0."""
    if n > SHANNON_GROUND_LIMIT:
        raise ValueError(f"ground of {n} points exceeds the LP limit "
                         f"({SHANNON_GROUND_LIMIT})")
    rows = []
    full = (1 << n) - 1
    for x in range(n):
        rows.append((((full, 1), (full ^ (1 << x), -1)), ">=", 0))
    for x in range(n):
        bx = 1 << x
        for y in range(x + 1, n):
            by = 1 << y
            rest = [i for i in range(n) if i != x and i != y]
            for zsel in range(1 << len(rest)):
                z = 0
                for t, i in enumerate(rest):
                    if zsel >> t & 1:
                        z |= 1 << i
                rows.append((((z | bx, 1), (z | by, 1),
                              (z | bx | by, -1), (z, -1)), ">=", 0))
    return tuple(rows)


def _mask_rows_to_lp_rows(mask_rows, var_index):
    """Convert (mask, coeff) rows to variable-index rows, dropping the
    pinned f(empty) = 0 term."""
    out = []
    for entries, rel, rhs in mask_rows:
        coeffs = {}
        for mask, c in entries:
            if mask == 0:
                continue
            j = var_index(mask)
            coeffs[j] = coeffs.get(j, 0) + c
        out.append(make_row(coeffs, rel, rhs))
    return out


# ---------------------------------------------------------------------------
# Port bound programs.
# ---------------------------------------------------------------------------


def _port_ground(acc, ext_names):
    base = tuple(str(p) for p in acc.players) + (str(acc.po_name),)
    return ExtendedGround(base, len(acc.players), tuple(ext_names))


def _build_port_lp(acc, ci_queries=(), ak_queries=(), kind="kappa"):
    t = len(acc.players)
    po_bit = 1 << t
    ext_names = []
    for i, q in enumerate(list(ci_queries) + list(ak_queries)):
        name = q.point
        if name in ext_names:
            name = f"{name}{i + 1}"
        ext_names.append(name)
    ground = _port_ground(acc, ext_names)
    n = ground.size
    nsub = (1 << n) - 1
    v_index = nsub  # objective variable comes after all subset variables

    def var_index(mask):
        return mask - 1

    var_keys = [ground.label(m) for m in range(1, 1 << n)] + ["v"]

    mask_rows = []
    # share-size rows: v - f(x) >= 0 per player
    lp_rows = []
    for i in range(t):
        lp_rows.append(make_row({v_index: 1, var_index(1 << i): -1}, ">=", 0))
    # secret normalisation f(p_o) = 1
    mask_rows.append((((po_bit, 1),), "=", 1))
    # minimal qualified: f(X p_o) - f(X) = 0
    for x in sorted(acc.min_qualified):
        mask_rows.append((((x | po_bit, 1), (x, -1)), "=", 0))
    # maximal unqualified: f(X p_o) - f(X) = 1
    for x in sorted(acc.max_unqualified()):
        mask_rows.append((((x | po_bit, 1), (x, -1)), "=", 1))
    # extension-point rows
    ext_base = t + 1
    for i, q in enumerate(ci_queries):
        e = 1 << (ext_base + i)
        a, b = q.a, q.b
        mask_rows.append((((a | e, 1), (a, -1)), "=", 0))
        mask_rows.append((((b | e, 1), (b, -1)), "=", 0))
        mask_rows.append((((e, 1), (a, -1), (b, -1), (a | b, 1)), "=", 0))
    for i, q in enumerate(ak_queries):
        e = 1 << (ext_base + len(ci_queries) + i)
        u, v, z = q.u, q.v, q.z
        mask_rows.append((((u | v | e, 1), (u | v, -1)), "=", 0))
        mask_rows.append((((u | e, 1), (e, -1), (u | z, -1), (z, 1)), "=", 0))
        mask_rows.append((((v | e, 1), (e, -1), (v | z, -1), (z, 1)), "=", 0))
        mask_rows.append((((u | v | e, 1), (e, -1), (u | v | z, -1), (z, 1)),
                          "=", 0))
    mask_rows.extend(shannon_block(n))
    lp_rows.extend(_mask_rows_to_lp_rows(mask_rows, var_index))
    desc = f"{kind} LP for {acc.name or 'structure'} on {n} points"
    return LinearProgram(var_keys, lp_rows, [(v_index, 1)], description=desc)


def build_kappa(acc) -> LinearProgram:
    """Shannon-only share-size LP; its optimum is the kappa parameter."""
    return _build_port_lp(acc, kind="kappa")


def build_lambda(acc, ci_queries) -> LinearProgram:
    """Kappa LP plus common-information rows; the optimum is a valid lower
    bound for linear schemes."""
    return _build_port_lp(acc, ci_queries=tuple(ci_queries), kind="lambda")


def build_sigma(acc, ak_queries) -> LinearProgram:
    """Kappa LP plus AK-information rows; the optimum is a valid lower bound
    for general schemes and for almost-entropic polymatroids."""
    return _build_port_lp(acc, ak_queries=tuple(ak_queries), kind="sigma")


# ---------------------------------------------------------------------------
# Extension feasibility programs.  Only the 2^n values f(X + x_o) are
# variables; base values are constants from the given polymatroid.
# ---------------------------------------------------------------------------


def _substitute_mask_rows(p, mask_rows, ext_bit):
    """Turn mask rows over ground+ext into variable rows: subsets containing
    the extension point are variables (indexed by their base mask), the rest
    are constants taken from p.  All-constant rows are checked and dropped."""
    rows = []
    ranks = p.ranks
    for entries, rel, rhs in mask_rows:
        coeffs = {}
        r = Fraction(rhs)
        constant_only = True
        for mask, c in entries:
            if mask & ext_bit:
                j = mask & ~ext_bit
                coeffs[j] = coeffs.get(j, 0) + c
                constant_only = False
            elif mask:
                r -= c * Fraction(ranks[mask])
        if constant_only:
            lhs = Fraction(rhs) - r  # = sum of the constant terms
            ok = lhs == Fraction(rhs) if rel == "=" else lhs >= Fraction(rhs)
            if not ok:
                raise ValueError("base polymatroid violates a Shannon row")
            continue
        rows.append(make_row(coeffs, rel, r))
    return rows


@lru_cache(maxsize=4)
def _feasibility_skeleton(p: Polymatroid):
    """Shannon rows of the one-point extension LP, shared by every query on
    the same polymatroid."""
    return tuple(_substitute_mask_rows(p, shannon_block(p.n + 1), 1 << p.n))


def _feasibility_lp(p: Polymatroid, extra_mask_rows, ext_label, desc):
    n = p.n
    e = 1 << n
    names = tuple(str(i) for i in range(n)) + (ext_label,)
    var_keys = [subset_label(m | e, names) for m in range(1 << n)]
    rows = _substitute_mask_rows(p, extra_mask_rows, e)
    rows.extend(_feasibility_skeleton(p))
    return LinearProgram(var_keys, rows, [], description=desc)


def build_ci_feasibility(p: Polymatroid, q: CiQuery) -> LinearProgram:
    """Feasible iff p admits a one-point extension carrying the common
    information of the pair (q.a, q.b)."""
    n = p.n
    e = 1 << n
    a, b = q.a, q.b
    extra = [
        (((a | e, 1), (a, -1)), "=", 0),
        (((b | e, 1), (b, -1)), "=", 0),
        (((e, 1), (a, -1), (b, -1), (a | b, 1)), "=", 0),
    ]
    desc = (f"common-information feasibility for A={subset_label(a)} "
            f"B={subset_label(b)} on {p.name or 'polymatroid'}")
    return _feasibility_lp(p, extra, q.point, desc)


def build_ak_feasibility(p: Polymatroid, q: AkQuery) -> LinearProgram:
    """Feasible iff p admits a one-point extension carrying the
    AK-information of the triple (q.u, q.v, q.z)."""
    n = p.n
    e = 1 << n
    u, v, z = q.u, q.v, q.z
    extra = [
        (((u | v | e, 1), (u | v, -1)), "=", 0),
        (((u | e, 1), (e, -1), (u | z, -1), (z, 1)), "=", 0),
        (((v | e, 1), (e, -1), (v | z, -1), (z, 1)), "=", 0),
        (((u | v | e, 1), (e, -1), (u | v | z, -1), (z, 1)), "=", 0),
    ]
    desc = (f"AK-information feasibility for U={subset_label(u)} "
            f"V={subset_label(v)} Z={subset_label(z)} on {p.name or 'polymatroid'}")
    return _feasibility_lp(p, extra, q.point, desc)


# ---------------------------------------------------------------------------
# Candidate query generation.
#
# Compliance testing over all subset pairs reduces (exactly, for matroids)
# to incomparable flats of rank >= 2 with positive mutual rank: closures
# preserve feasibility, comparable pairs and rank-<=1 members always admit a
# parallel-copy extension, and zero mutual rank admits a loop extension.
# ---------------------------------------------------------------------------


def ci_candidate_pairs(m: Matroid):
    """Complete reduced candidate list for 1-CI compliance.

    Pairs where both flats arise as intersections of circuit-hyperplanes
    come first (the known failure configurations live there); within each
    block, decreasing mutual rank then lexicographic order.
    """
    fl = [f for f in m.flats() if m.ranks[f] >= 2]
    special = set()
    if m.is_sparse_paving():
        chs = m.circuit_hyperplanes()
        for i, h1 in enumerate(chs):
            for h2 in chs[i + 1:]:
                x = h1 & h2
                if m.ranks[x] >= 2:
                    special.add(x)  # intersections of flats are flats
    out = []
    for i, a in enumerate(fl):
        for b in fl[i + 1:]:
            if a & b == a or a & b == b:
                continue
            mi = m.ranks[a] + m.ranks[b] - m.ranks[a | b]
            if mi >= 1:
                prio = 0 if (a in special and b in special) else 1
                out.append((prio, mi, a, b))
    out.sort(key=lambda t: (t[0], -t[1], t[2], t[3]))
    return [CiQuery(a, b) for _, _, a, b in out]


def ak_candidate_triples(m: Matroid, cap=1024):
    """Budgeted AK triple candidates: witness-derived triples first, then
    splits of the CI candidate pairs."""
    triples = []
    seen = set()

    def push(u, v, z):
        if u > v:
            u, v = v, u
        key = (u, v, z)
        if u and v and z and key not in seen:
            seen.add(key)
            triples.append(AkQuery(u, v, z))

    if m.is_sparse_paving() and m.rank_total >= 4:
        for w in spic_witness(m, find_all=True) or []:
            sets = [w.b | a for a in w.pairs()]
            for i in range(4):
                for j in range(i + 1, 4):
                    rest = [l for l in range(4) if l not in (i, j)]
                    for l in rest:
                        push(sets[i], sets[j], sets[l])
                    push(sets[i], sets[j], sets[rest[0]] | sets[rest[1]])
            if len(triples) >= cap:
                return triples[:cap]
    for q in ci_candidate_pairs(m):
        for big, other in ((q.a, q.b), (q.b, q.a)):
            pts = points_of(big)
            if len(pts) < 2:
                continue
            u = 1 << pts[0]
            v = big & ~u
            push(u, v, other)
            if len(triples) >= cap:
                return triples[:cap]
    return triples[:cap]


def to_port_ground_mask(mask: int, po: int, n: int) -> int:
    """Translate a matroid-ground mask into the port LP's base indexing:
    players keep their order at positions 0..n-2, the port point moves to
    position n-1."""
    out = 0
    for p in points_of(mask):
        if p == po:
            out |= 1 << (n - 1)
        else:
            out |= 1 << (p if p < po else p - 1)
    return out


def candidate_queries(m: Matroid, po: int, max_pairs=512, max_triples=1024):
    """Deterministic CI pair and AK triple candidates for the port at po,
    as masks over the port LP's base ground (players plus the port point).

    Witness-derived sets come first; sets may contain the port point (the
    extension properties hold for arbitrary subsets of the whole ground, so
    such queries still yield valid bounds).  Flat pairs fill the remainder.
    """
    n = m.n
    ci = []
    seen_ci = set()

    def push_ci(a, b):
        if not a or not b or a == b:
            return
        a2, b2 = (to_port_ground_mask(s, po, n) for s in (a, b))
        if a2 > b2:
            a2, b2 = b2, a2
        if (a2, b2) not in seen_ci:
            seen_ci.add((a2, b2))
            ci.append(CiQuery(a2, b2))

    ak = []
    seen_ak = set()

    def push_ak(u, v, z):
        if not u or not v or not z or u == v:
            return
        u2, v2, z2 = (to_port_ground_mask(s, po, n) for s in (u, v, z))
        if u2 > v2:
            u2, v2 = v2, u2
        if (u2, v2, z2) not in seen_ak:
            seen_ak.add((u2, v2, z2))
            ak.append(AkQuery(u2, v2, z2))

    if m.is_sparse_paving() and m.rank_total >= 4:
        for w in spic_witness(m, find_all=True) or []:
            sets = [w.b | a for a in w.pairs()]
            # the two triangles whose pairwise unions are all
            # circuit-hyperplanes carry the strongest single queries
            for tri in ((0, 1, 2), (1, 2, 3)):
                for k in range(3):
                    i, j = tri[k], tri[(k + 1) % 3]
                    l = tri[(k + 2) % 3]
                    push_ak(sets[i], sets[j], sets[l])
            for i in range(4):
                for j in range(i + 1, 4):
                    push_ci(sets[i], sets[j])
                    rest = [l for l in range(4) if l not in (i, j)]
                    for l in rest:
                        push_ak(sets[i], sets[j], sets[l])
                    push_ak(sets[i], sets[j], sets[rest[0]] | sets[rest[1]])
            if len(ci) >= max_pairs and len(ak) >= max_triples:
                break
    for q in ci_candidate_pairs(m):
        if len(ci) >= max_pairs:
            break
        push_ci(q.a, q.b)
    for q in ak_candidate_triples(m, cap=4 * max_triples):
        if len(ak) >= max_triples:
            break
        push_ak(q.u, q.v, q.z)
    return ci[:max_pairs], ak[:max_triples]
