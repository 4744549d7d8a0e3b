"""Command-line interface: classification, bounds, representation checks,
decompositions and batch reproduction reports.

Exit codes: 0 success, 2 validation error, 3 resource exhaustion,
4 verification failure.  All numeric output is exact "p/q"; --decimal adds
clearly-marked approximations.  Reports never contain timing information
(timings go to stderr), so outputs are byte-identical across reruns and
worker counts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from ._parallel import pmap, resolve_workers
from .inequalities import (bundle_violation, ingleton_scan, spic_witness,
                           zy_scan)
from .lpmodel import (AkQuery, CiQuery, ak_candidate_triples,
                      build_ak_feasibility, build_ci_feasibility, build_kappa,
                      build_lambda, build_sigma, ci_candidate_pairs)
from .matroid import (Matroid, MatroidError, MatroidFileError, catalog,
                      catalog_names, load_matroid, mask_of, subset_label)
from .repcheck import (RepresentationFileError, builtin_representation,
                       builtin_representation_keys, load_representation,
                       verify_representation)
from .secretsharing import (AccessStructureError, Decomposition,
                            DecompositionError, DecompositionPart, bound,
                            port, tictactoe_decomposition,
                            verify_decomposition)
from .simplex import (CertificationError, ResourceExhausted, solve)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RESOURCE = 3
EXIT_VERIFICATION = 4

_CHUNK = 16  # fixed logical batch size for parallel scans


class CliError(Exception):
    def __init__(self, message, code=EXIT_VALIDATION):
        super().__init__(message)
        self.code = code


def _log(msg):
    print(msg, file=sys.stderr)


def resolve_matroid(spec: str) -> Matroid:
    """A matroid from "catalog:NAME" or a file path."""
    if spec.startswith("catalog:"):
        name = spec.split(":", 1)[1]
        try:
            return catalog(name)
        except KeyError as e:
            raise CliError(str(e))
    try:
        return load_matroid(spec)
    except MatroidFileError as e:
        raise CliError(str(e))


def _fmt(value, decimal=False):
    s = str(value)
    if decimal and isinstance(value, Fraction) and value.denominator != 1:
        s += f" (~{float(value):.6f})"
    return s


def _write_report(args, default_name, text):
    print(text, end="")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, default_name)
        with open(path, "w") as fh:
            fh.write(text)
        _log(f"# report written to {path}")


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------


def _ci_status(task):
    m, q = task
    return solve(build_ci_feasibility(m, q)).status


def _ak_status(task):
    m, q = task
    return solve(build_ak_feasibility(m, q)).status


def _first_infeasible(m, queries, workers, solver):
    """(index, query) of the first infeasible query in candidate order, or
    None; evaluated in fixed batches so worker count cannot change it."""
    for lo in range(0, len(queries), _CHUNK):
        batch = queries[lo:lo + _CHUNK]
        outs = pmap(solver, [(m, q) for q in batch], workers=workers)
        for off, st in enumerate(outs):
            if st == "infeasible":
                return lo + off, batch[off]
    return None


def classify_matroid(m: Matroid, budget_pairs=0, budget_triples=0,
                     with_ak=False, workers=1):
    """Classification report fields for one matroid (library surface of the
    classify command).  budget 0 means no cap."""
    t0 = time.time()
    fields = {}
    sparse = m.is_sparse_paving()
    fields["ground-size"] = str(m.n)
    fields["rank"] = str(m.rank_total)
    fields["sparse-paving"] = "yes" if sparse else "no"
    if sparse and m.rank_total >= 4:
        w = spic_witness(m)
        fields["spic"] = w.describe() if w else "none"
    else:
        fields["spic"] = "not-applicable"
    _log(f"# spic done ({time.time() - t0:.1f}s)")
    iw = ingleton_scan(m, workers=workers)
    fields["ingleton"] = ("compliant" if iw is None
                          else "violated: " + iw.describe())
    _log(f"# ingleton scan done ({time.time() - t0:.1f}s)")
    zw = zy_scan(m, workers=workers)
    fields["zy"] = "compliant" if zw is None else "violated: " + zw.describe()
    _log(f"# zy scan done ({time.time() - t0:.1f}s)")
    bw = bundle_violation(m)
    fields["bundle"] = ("satisfied" if bw is None else "violated: "
                        + " ".join(subset_label(s) for s in bw.sets()))
    pairs = ci_candidate_pairs(m)
    total = len(pairs)
    if budget_pairs:
        pairs = pairs[:budget_pairs]
    hit = _first_infeasible(m, pairs, workers, _ci_status)
    if hit is None:
        scope = ("all" if len(pairs) == total
                 else f"first {len(pairs)} of {total}")
        fields["ci"] = f"compliant ({scope} candidate pairs feasible)"
    else:
        _, q = hit
        fields["ci"] = (f"not 1-CI-compliant: pair A={subset_label(q.a)} "
                        f"B={subset_label(q.b)} infeasible")
    _log(f"# ci batch done ({time.time() - t0:.1f}s)")
    if with_ak:
        triples = ak_candidate_triples(m, cap=budget_triples or 1024)
        hit = _first_infeasible(m, triples, workers, _ak_status)
        if hit is None:
            fields["ak"] = (f"compliant ({len(triples)} candidate triples "
                            f"feasible, budgeted)")
        else:
            _, q = hit
            fields["ak"] = (f"not 1-AK-compliant: triple U={subset_label(q.u)} "
                            f"V={subset_label(q.v)} Z={subset_label(q.z)} "
                            f"infeasible")
        _log(f"# ak batch done ({time.time() - t0:.1f}s)")
    return fields


def render_classification(name, fields):
    lines = [f"matroid: {name}"]
    for key in ("ground-size", "rank", "sparse-paving", "spic", "ingleton",
                "zy", "bundle", "ci", "ak"):
        if key in fields:
            lines.append(f"{key}: {fields[key]}")
    return "\n".join(lines) + "\n"


def cmd_classify(args):
    m = resolve_matroid(args.matroid)
    workers = resolve_workers(args.workers)
    fields = classify_matroid(m, budget_pairs=args.budget_pairs,
                              budget_triples=args.budget_triples,
                              with_ak=args.ak, workers=workers)
    name = m.name or args.matroid
    text = render_classification(name, fields)
    _write_report(args, f"classify_{_safe(name)}.txt", text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# check (single-property surface)
# ---------------------------------------------------------------------------


def cmd_check(args):
    m = resolve_matroid(args.matroid)
    workers = resolve_workers(args.workers)
    lines = []
    if args.ingleton:
        w = ingleton_scan(m, workers=workers)
        lines.append("ingleton: " + ("compliant" if w is None
                                     else "violated: " + w.describe()))
    if args.zy:
        w = zy_scan(m, workers=workers)
        lines.append("zy: " + ("compliant" if w is None
                               else "violated: " + w.describe()))
    if args.bundle:
        w = bundle_violation(m)
        lines.append("bundle: " + ("satisfied" if w is None else "violated: "
                     + " ".join(subset_label(s) for s in w.sets())))
    if args.spic:
        if not m.is_sparse_paving():
            raise CliError("spic check requires a sparse paving matroid")
        w = spic_witness(m)
        lines.append("spic: " + (w.describe() if w else "none"))
    if not lines:
        raise CliError("pick at least one of --ingleton/--zy/--bundle/--spic")
    text = "\n".join([f"matroid: {m.name or args.matroid}"] + lines) + "\n"
    _write_report(args, f"check_{_safe(m.name or 'matroid')}.txt", text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# bound
# ---------------------------------------------------------------------------


def _parse_fraction(s):
    try:
        if "/" in s:
            a, b = s.split("/")
            return Fraction(int(a), int(b))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError):
        raise CliError(f"bad fraction {s!r}")


def cmd_bound(args):
    m = resolve_matroid(args.matroid)
    try:
        acc = port(m, args.port)
    except AccessStructureError as e:
        raise CliError(str(e))
    kind = {"kappa": "kappa", "lambda": "lambda_lower",
            "sigma": "sigma_bar_lower"}[args.kind]
    workers = resolve_workers(args.workers)
    target = _parse_fraction(args.target) if args.target else None
    t0 = time.time()
    try:
        rep = bound(acc, kind, max_pairs=args.budget_pairs or 512,
                    max_triples=args.budget_triples or 1024,
                    target=target, workers=workers)
    except AccessStructureError as e:
        raise CliError(str(e))
    _log(f"# bound search done ({time.time() - t0:.1f}s)")
    text = rep.render(decimal=args.decimal)
    _write_report(args, f"bound_{_safe(rep.structure)}_{args.kind}.txt", text)
    if args.out:
        cert = os.path.join(args.out,
                            f"cert_{_safe(rep.structure)}_{args.kind}.txt")
        with open(cert, "w") as fh:
            fh.write(rep.certificate_text())
        _log(f"# certificate written to {cert}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify-rep
# ---------------------------------------------------------------------------


def resolve_representation(spec):
    if spec.startswith("builtin:"):
        key = spec.split(":", 1)[1]
        try:
            return builtin_representation(key)[1]
        except KeyError as e:
            raise CliError(str(e))
    try:
        return load_representation(spec)
    except RepresentationFileError as e:
        raise CliError(str(e))


def cmd_verify_rep(args):
    m = resolve_matroid(args.matroid)
    rep = resolve_representation(args.representation)
    try:
        res = verify_representation(m, rep)
    except ValueError as e:
        raise CliError(str(e))
    name = m.name or args.matroid
    text = (f"matroid: {name}\nrepresentation: {args.representation}\n"
            f"result: {'pass' if res.ok else 'FAIL'}\n")
    if not res.ok:
        text += f"detail: {res.describe()}\n"
    _write_report(args, f"verifyrep_{_safe(name)}.txt", text)
    return EXIT_OK if res.ok else EXIT_VERIFICATION


# ---------------------------------------------------------------------------
# decompose
# ---------------------------------------------------------------------------


def cmd_decompose(args):
    if args.builtin_tictactoe:
        d = tictactoe_decomposition()
    else:
        if not args.manifest:
            raise CliError("need --builtin-tictactoe or a manifest file")
        d = _decomposition_from_manifest(args.manifest)
    try:
        ratio = verify_decomposition(d)
    except DecompositionError as e:
        text = f"decomposition: INVALID\nreason: {e}\n"
        _write_report(args, "decompose.txt", text)
        return EXIT_VERIFICATION
    text = (f"decomposition: valid\nparts: {len(d.parts)}\n"
            f"threshold: {d.threshold}\n"
            f"information-ratio: {_fmt(ratio, args.decimal)}\n")
    _write_report(args, "decompose.txt", text)
    return EXIT_OK


def _decomposition_from_manifest(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise CliError(f"{path}: {e}")
    try:
        target = port(resolve_matroid(doc["target"]["matroid"]),
                      doc["target"]["port"])
        parts = []
        for p in doc["parts"]:
            parts.append(DecompositionPart(
                resolve_matroid(p["matroid"]), p["port"],
                resolve_representation(p["representation"])))
        return Decomposition(target, tuple(parts), doc["threshold"])
    except (KeyError, TypeError) as e:
        raise CliError(f"{path}: missing or bad field ({e})")
    except AccessStructureError as e:
        raise CliError(f"{path}: {e}")


# ---------------------------------------------------------------------------
# table2 batch
# ---------------------------------------------------------------------------

# Published strong rows: matroid -> (ports, sigma-bar target)
TABLE2_TARGETS = {
    "V8": ((2, 3, 6, 7), Fraction(33, 29)),
    "F8": ((1, 7), Fraction(8, 7)),
    "Q8": ((1, 4, 6, 7), Fraction(49, 43)),
    "AG32p": ((1, 3, 5, 7), Fraction(49, 43)),
}
TABLE2_SECONDARY = {
    "F8": ((3, 4, 5, 6), Fraction(33, 29)),
}


def table2_rows(names=("V8", "F8", "Q8", "AG32p"), ports=None,
                budget_pairs=64, budget_triples=64, workers=1,
                with_lambda=True):
    """Bound reports for the catalog eight-point ports: kappa, the linear
    lower bound via one common information, and the best sigma-bar lower
    bound found within budget (searching up to two AK extensions)."""
    rows = []
    for name in names:
        m = catalog(name)
        port_list = ports if ports is not None else range(m.n)
        for po in port_list:
            acc = port(m, po)
            k = bound(acc, "kappa", workers=workers)
            lam = None
            if with_lambda:
                lam = bound(acc, "lambda_lower", max_pairs=budget_pairs,
                            target=Fraction(4, 3), workers=workers)
            target = Fraction(9, 8)
            for tname, (tports, tval) in TABLE2_TARGETS.items():
                if tname == name and po in tports:
                    target = tval
            for tname, (tports, tval) in TABLE2_SECONDARY.items():
                if tname == name and po in tports:
                    target = tval
            sig = bound(acc, "sigma_bar_lower", max_triples=budget_triples,
                        target=target, workers=workers)
            rows.append((name, po, k, lam, sig))
    return rows


def render_table2(rows, decimal=False):
    lines = ["matroid | port | kappa | lambda-lb | sigma-bar-lb | queries"]
    for name, po, k, lam, sig in rows:
        lam_s = _fmt(lam.value, decimal) if lam else "-"
        lines.append(f"{name} | {po} | {_fmt(k.value, decimal)} | {lam_s} | "
                     f"{_fmt(sig.value, decimal)} | {sig.query_text()}")
        if sig.note:
            lines.append(f"#   note: {sig.note}")
    return "\n".join(lines) + "\n"


def cmd_table2(args):
    workers = resolve_workers(args.workers)
    names = args.matroids.split(",") if args.matroids else \
        ("V8", "F8", "Q8", "AG32p")
    ports = [int(p) for p in args.ports.split(",")] if args.ports else None
    t0 = time.time()
    rows = table2_rows(names, ports, budget_pairs=args.budget_pairs or 64,
                       budget_triples=args.budget_triples or 64,
                       workers=workers, with_lambda=not args.no_lambda)
    _log(f"# table computed ({time.time() - t0:.1f}s)")
    text = render_table2(rows, decimal=args.decimal)
    _write_report(args, "table2.txt", text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# lp-dump
# ---------------------------------------------------------------------------


def _parse_points(s):
    try:
        return mask_of(int(t) for t in s.split(",") if t != "")
    except ValueError:
        raise CliError(f"bad point list {s!r}")


def cmd_lp_dump(args):
    m = resolve_matroid(args.matroid)
    if args.kind in ("kappa", "lambda", "sigma"):
        if args.port is None:
            raise CliError(f"--port required for {args.kind}")
        acc = port(m, args.port)
        if args.kind == "kappa":
            lp = build_kappa(acc)
        elif args.kind == "lambda":
            if not args.pair:
                raise CliError("--pair A B required for lambda")
            queries = [CiQuery(_parse_points(args.pair[0]),
                               _parse_points(args.pair[1]))]
            lp = build_lambda(acc, queries)
        else:
            if not args.triple:
                raise CliError("--triple U V Z required for sigma")
            queries = [AkQuery(*(_parse_points(t) for t in args.triple))]
            lp = build_sigma(acc, queries)
    elif args.kind == "ci":
        if not args.pair:
            raise CliError("--pair A B required for ci")
        lp = build_ci_feasibility(
            m, CiQuery(_parse_points(args.pair[0]),
                       _parse_points(args.pair[1])))
    elif args.kind == "ak":
        if not args.triple:
            raise CliError("--triple U V Z required for ak")
        lp = build_ak_feasibility(
            m, AkQuery(*(_parse_points(t) for t in args.triple)))
    else:
        raise CliError(f"unknown lp kind {args.kind!r}")
    _write_report(args, f"lp_{args.kind}.txt", lp.dump())
    return EXIT_OK


# ---------------------------------------------------------------------------
# batch
# ---------------------------------------------------------------------------


def cmd_batch(args):
    try:
        with open(args.manifest) as fh:
            doc = json.load(fh)
        jobs = doc["jobs"]
    except (OSError, json.JSONDecodeError, KeyError) as e:
        raise CliError(f"{args.manifest}: {e}")
    summary = []
    worst = EXIT_OK
    for i, argv in enumerate(jobs):
        if not isinstance(argv, list):
            raise CliError(f"job {i} must be an argv list")
        _log(f"# job {i}: {' '.join(argv)}")
        code = main(argv + (["--out", args.out] if args.out else []))
        summary.append(f"job {i}: {' '.join(argv)} -> exit {code}")
        worst = max(worst, code)
    text = "\n".join(summary) + "\n"
    _write_report(args, "batch_summary.txt", text)
    return worst


def _safe(name):
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in str(name))


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common(sp):
    sp.add_argument("--workers", type=int, default=None,
                    help="worker processes (default: POLYMAT_WORKERS or 1)")
    sp.add_argument("--out", default=None, help="directory for report files")
    sp.add_argument("--decimal", action="store_true",
                    help="append approximate decimal values")
    sp.add_argument("--budget-pairs", type=int, default=0)
    sp.add_argument("--budget-triples", type=int, default=0)
    sp.add_argument("--pivot-cap", type=int, default=0)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="polymat",
        description="Exact-arithmetic matroid classification and "
                    "secret-sharing bounds")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("classify", help="full classification report")
    sp.add_argument("matroid", help="catalog:NAME or matroid file")
    sp.add_argument("--ak", action="store_true",
                    help="include the budgeted 1-AK check")
    _add_common(sp)
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("check", help="individual compliance checks")
    sp.add_argument("matroid")
    sp.add_argument("--ingleton", action="store_true")
    sp.add_argument("--zy", action="store_true")
    sp.add_argument("--bundle", action="store_true")
    sp.add_argument("--spic", action="store_true")
    _add_common(sp)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("bound", help="kappa / lambda / sigma lower bounds")
    sp.add_argument("matroid")
    sp.add_argument("--port", type=int, required=True)
    sp.add_argument("--kind", choices=("kappa", "lambda", "sigma"),
                    required=True)
    sp.add_argument("--target", default=None,
                    help="stop the search once this value is certified")
    _add_common(sp)
    sp.set_defaults(fn=cmd_bound)

    sp = sub.add_parser("verify-rep", help="check a claimed representation")
    sp.add_argument("matroid")
    sp.add_argument("representation",
                    help="representation file or builtin:KEY "
                         f"({', '.join(builtin_representation_keys())})")
    _add_common(sp)
    sp.set_defaults(fn=cmd_verify_rep)

    sp = sub.add_parser("decompose", help="verify a lambda-decomposition")
    sp.add_argument("manifest", nargs="?", default=None)
    sp.add_argument("--builtin-tictactoe", action="store_true")
    _add_common(sp)
    sp.set_defaults(fn=cmd_decompose)

    sp = sub.add_parser("table2", help="batch bound reproduction report")
    sp.add_argument("--matroids", default=None,
                    help="comma list (default V8,F8,Q8,AG32p)")
    sp.add_argument("--ports", default=None, help="comma list of ports")
    sp.add_argument("--no-lambda", action="store_true")
    _add_common(sp)
    sp.set_defaults(fn=cmd_table2)

    sp = sub.add_parser("lp-dump", help="write an LP in plain-text rows")
    sp.add_argument("matroid")
    sp.add_argument("--kind", required=True,
                    choices=("kappa", "lambda", "sigma", "ci", "ak"))
    sp.add_argument("--port", type=int, default=None)
    sp.add_argument("--pair", nargs=2, default=None,
                    metavar=("A", "B"), help="comma-separated point lists")
    sp.add_argument("--triple", nargs=3, default=None, metavar=("U", "V", "Z"))
    _add_common(sp)
    sp.set_defaults(fn=cmd_lp_dump)

    sp = sub.add_parser("batch", help="run a manifest of jobs")
    sp.add_argument("manifest")
    _add_common(sp)
    sp.set_defaults(fn=cmd_batch)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as e:
        _log(f"error: {e}")
        return e.code
    except (MatroidError, MatroidFileError, RepresentationFileError,
            AccessStructureError) as e:
        _log(f"error: {e}")
        return EXIT_VALIDATION
    except ResourceExhausted as e:
        _log(f"resource limit: {e}")
        return EXIT_RESOURCE
    except CertificationError as e:
        _log(f"certification failure: {e}")
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
