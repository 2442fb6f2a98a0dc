"""Command-line front end.

Each subcommand emits exactly one JSON report on stdout and a short
human summary on stderr.  The report envelope is
{command, parameters, results, seed, wall_time_ms, version}; the
results payload is a pure function of parameters and seed (wall time
lives outside it), so scripted re-runs can diff results byte for byte
regardless of thread count.

Exit codes: 0 success or forced verdict; 10 counterexample, witness, or
bound violation found; 2 usage or parse error; 3 capacity error.
Rationals are rendered as "num/den" strings, floats with 12 significant
digits.  --format csv is accepted only by the tabular reports (stats,
lemma-check).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .colorings import (
    ConstructionParams,
    TwoColoring,
    construction_statistics,
    expected_book_sizes,
    margins,
    pack_bits_hex,
    read_coloring_file,
    tripartite_parts,
    tripartite_random,
    two_cliques,
    write_coloring_file,
)
from .errors import CapacityError, ParseError
from .graphs import Graph, read_graph6_file
from .numbers import as_fraction, fraction_str, round_sig
from .ramsey import (
    RamseyQuery,
    WitnessCertificate,
    exhaustive_verify,
    witness_check,
)
from .regularity import (
    ORACLE_SIDE_CAP,
    BipartitePairView,
    MultiPairConfig,
    bad_pair_count_cross,
    bad_pair_count_shared,
    book_bound_cross,
    book_bound_shared,
    classify_pairs,
    nonuniformity_search,
    triangle_bound_cross,
    triangle_bound_shared,
    uniformity_oracle,
)
from .stability import classify, trichotomy_check

EXIT_OK = 0
EXIT_FOUND = 10
EXIT_USAGE = 2
EXIT_CAPACITY = 3


def jsonable(x):
    """Recursively convert report values to JSON-safe types."""
    if isinstance(x, Fraction):
        return fraction_str(x)
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, float):
        return round_sig(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return round_sig(float(x))
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(jsonable(v) for v in x)
    return x


def read_any_file(path):
    """Graph6 or BRC1 file, detected by header."""
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read()
    first = text.lstrip().split("\n", 1)[0] if text.strip() else ""
    if first.startswith("BRC1"):
        return TwoColoring.from_brc1(text)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.strip():
            return Graph.from_graph6(raw.strip(), line=lineno)
    raise ParseError("empty input file", line=1)


def load_config(path) -> dict:
    """JSON descriptor: {graph: graph6, blocks: [[...],...], epsilon, ...}."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON config: {exc.msg}", line=exc.lineno, offset=exc.colno)
    if not isinstance(cfg, dict):
        raise ParseError("config must be a JSON object", line=1)
    if "graph" not in cfg or "blocks" not in cfg:
        raise ParseError("config needs 'graph' and 'blocks' fields", line=1)
    cfg["graph"] = Graph.from_graph6(str(cfg["graph"]))
    blocks = cfg["blocks"]
    if not isinstance(blocks, list) or not all(isinstance(b, list) for b in blocks):
        raise ParseError("'blocks' must be a list of vertex lists", line=1)
    cfg["blocks"] = [tuple(int(v) for v in b) for b in blocks]
    return cfg


# ------------------------------------------------------------------ verify


def cmd_verify(args):
    query = RamseyQuery(args.N, args.p, args.q)
    outcome = exhaustive_verify(
        query, force=args.force, prune=args.prune, threads=args.threads
    )
    results = {
        "verdict": outcome.verdict,
        "colorings_examined": outcome.colorings_examined,
    }
    if outcome.counterexample is not None:
        results["counterexample_n"] = outcome.counterexample.n
        results["counterexample_hex"] = pack_bits_hex(outcome.counterexample.blue_bits())
    summary = (
        f"every 2-coloring of K_{args.N} has a red {args.p}-book or blue {args.q}-book"
        if outcome.verdict == "forced"
        else f"K_{args.N} admits a coloring avoiding both books"
    )
    code = EXIT_OK if outcome.verdict == "forced" else EXIT_FOUND
    return results, summary, code


def cmd_bk(args):
    obj = read_any_file(args.file)

    def side(size, cert):
        out = {"booksize": size}
        out["base"] = list(cert.base) if cert is not None else None
        return out

    if isinstance(obj, TwoColoring):
        b, bc = obj.bk_blue()
        r, rc = obj.bk_red()
        results = {"kind": "coloring", "n": obj.n, "blue": side(b, bc), "red": side(r, rc)}
        summary = f"coloring on {obj.n} vertices: blue booksize {b}, red booksize {r}"
    else:
        s, cert = obj.booksize()
        results = {"kind": "graph", "n": obj.n, **side(s, cert)}
        summary = f"graph on {obj.n} vertices: booksize {s}"
    return results, summary, EXIT_OK


def cmd_witness_check(args):
    c = read_coloring_file(args.file)
    res = witness_check(c, args.p, args.q)
    if isinstance(res, WitnessCertificate):
        results = {
            "verdict": "certificate",
            "n": res.n,
            "p": res.p,
            "q": res.q,
            "claim": f"r(B_{res.p},B_{res.q}) > {res.n}",
        }
        return results, results["claim"] + " certified", EXIT_OK
    results = {
        "verdict": "refutation",
        "book_color": res.color,
        "base": list(res.certificate.base),
        "pages": res.certificate.size,
    }
    summary = f"{res.color} book of size {res.certificate.size} at base {res.certificate.base}"
    return results, summary, EXIT_FOUND


# --------------------------------------------------------------- construct


def cmd_construct(args):
    if args.kind == "two-cliques":
        c = two_cliques(args.q)
        write_coloring_file(args.out, c)
        b, _ = c.bk_blue()
        r, _ = c.bk_red()
        results = {"kind": "two-cliques", "n": c.n, "q": args.q, "bk_blue": b, "bk_red": r, "file": args.out}
        summary = f"wrote {c.n}-vertex two-clique coloring to {args.out}"
        return results, summary, EXIT_OK

    params = ConstructionParams(
        n=args.n,
        epsilon=as_fraction(args.epsilon),
        seed=args.seed,
        delta=as_fraction(args.delta) if args.delta is not None else None,
    )
    c = tripartite_random(params)
    write_coloring_file(args.out, c)
    k1, k2 = margins(params)
    ri, bc, rc = expected_book_sizes(params)
    results = {
        "kind": "tripartite",
        "n": params.n,
        "epsilon": params.epsilon,
        "delta": params.delta,
        "p": params.p,
        "q_prob": params.q_prob,
        "margins": {"k1": k1, "k2": k2},
        "expected_book_sizes": {"red_intra": ri, "blue_cross": bc, "red_cross": rc},
        "file": args.out,
    }
    summary = (
        f"wrote {params.n}-vertex tripartite coloring to {args.out}; "
        f"expected codegrees {float(ri):.4f} / {float(bc):.4f} / {float(rc):.4f}"
    )
    return results, summary, EXIT_OK


def cmd_stats(args):
    c = read_coloring_file(args.file)
    if args.parts is not None:
        with open(args.parts, "r", encoding="utf-8") as fh:
            parts = [tuple(int(v) for v in p) for p in json.load(fh)]
        if len(parts) != 3:
            raise ValueError("parts file must hold exactly three lists")
    else:
        parts = tripartite_parts(c.n)
    report = construction_statistics(c, parts)
    summary = (
        f"bk_red {report['bk_red']} ({float(report['bk_red_over_n']):.4f} n), "
        f"bk_blue {report['bk_blue']} ({float(report['bk_blue_over_n']):.4f} n)"
    )
    return report, summary, EXIT_OK


def stats_csv(report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["edge_class", "edges", "mean_codegree", "mean_pages_third_part", "mean_pages_own_parts"])

    def cell(x):
        return "" if x is None else fraction_str(x)

    for name in ("red_intra", "blue_cross", "red_cross"):
        row = report[name]
        w.writerow(
            [
                name,
                row["edges"],
                cell(row["mean_codegree"]),
                cell(row.get("mean_pages_third_part")),
                cell(row.get("mean_pages_own_parts")),
            ]
        )
    w.writerow(["bk_red", "", report["bk_red"], "", ""])
    w.writerow(["bk_blue", "", report["bk_blue"], "", ""])
    return buf.getvalue()


# -------------------------------------------------------------- regularity


def cmd_uniformity(args):
    cfg = load_config(args.config)
    if len(cfg["blocks"]) != 2:
        raise ValueError("uniformity needs exactly two blocks")
    eps = as_fraction(cfg["epsilon"])
    pair = BipartitePairView(cfg["graph"], *cfg["blocks"])
    if args.sampled:
        witness = nonuniformity_search(pair, eps, samples=args.samples, seed=args.seed)
        results = {
            "method": "search",
            "density": pair.density,
            "epsilon": eps,
            "uniform": None,
            "witness": [list(witness[0]), list(witness[1])] if witness else None,
        }
        if witness:
            return results, "non-uniformity witness found", EXIT_FOUND
        return results, "no witness found (certifies nothing)", EXIT_OK
    verdict = uniformity_oracle(pair, eps)
    results = {
        "method": "oracle",
        "density": pair.density,
        "epsilon": eps,
        "uniform": verdict.uniform,
        "witness": [list(verdict.witness[0]), list(verdict.witness[1])]
        if verdict.witness
        else None,
    }
    if verdict.uniform:
        return results, "pair is uniform at the given epsilon", EXIT_OK
    return results, "pair is not uniform; witness attached", EXIT_FOUND


def cmd_lemma_check(args):
    cfg = load_config(args.config)
    eps = as_fraction(cfg["epsilon"])
    nbases = int(cfg.get("bases", 1))
    if nbases not in (1, 2):
        raise ValueError("'bases' must be 1 or 2")
    if len(cfg["blocks"]) < nbases + 1:
        raise ValueError("need at least one page block after the bases")
    mp = MultiPairConfig(
        cfg["graph"],
        tuple(cfg["blocks"][:nbases]),
        tuple(cfg["blocks"][nbases:]),
        eps,
    )
    t, k = mp.t, mp.k

    pairs = []
    all_uniform: bool | None = True
    for i in range(nbases):
        for j in range(k):
            if t <= ORACLE_SIDE_CAP:
                u = uniformity_oracle(mp.base_pair(i, j), eps).uniform
            else:
                u = None
            if u is not True:
                all_uniform = None if u is None else False
            pairs.append({"base": i, "page": j, "uniform": u})
    certified = all_uniform is True

    checks = []
    violations = 0
    positive = 0

    def record(name, bound, actual, page=None):
        nonlocal violations, positive
        ok = Fraction(actual) >= bound
        if bound > 0:
            positive += 1
        if certified and not ok:
            violations += 1
        row = {"check": name, "bound": bound, "actual": actual, "satisfied": ok}
        if page is not None:
            row["page"] = page
        checks.append(row)

    if nbases == 1:
        for j in range(k):
            pv = mp.base_pair(0, j)
            cap = 2 * eps * t * t
            try:
                cnt = bad_pair_count_shared(pv, eps)
            except ValueError:
                checks.append(
                    {"check": "bad_pairs_shared", "page": j, "bound": cap, "actual": None, "satisfied": None}
                )
                continue
            ok = cnt <= cap
            if certified and not ok:
                violations += 1
            checks.append(
                {"check": "bad_pairs_shared", "page": j, "bound": cap, "actual": cnt, "satisfied": ok}
            )
        bound, actual = triangle_bound_shared(mp)
        record("triangle_shared", bound, actual)
        if mp.host.edges_within(mp.bases[0]) > 0:
            bound, cert = book_bound_shared(mp)
            record("book_shared", bound, cert.size)
            book_base = list(cert.base)
        else:
            book_base = None
    else:
        for j in range(k):
            p1 = mp.base_pair(0, j)
            p2 = mp.base_pair(1, j)
            cap = 2 * eps * t * t
            try:
                cnt = bad_pair_count_cross(p1, p2, eps)
            except ValueError:
                checks.append(
                    {"check": "bad_pairs_cross", "page": j, "bound": cap, "actual": None, "satisfied": None}
                )
                continue
            ok = cnt <= cap
            if certified and not ok:
                violations += 1
            checks.append(
                {"check": "bad_pairs_cross", "page": j, "bound": cap, "actual": cnt, "satisfied": ok}
            )
        bound, actual = triangle_bound_cross(mp)
        record("triangle_cross", bound, actual)
        _, _, e12 = mp.host.cut_and_induced_counts(*mp.bases)
        if e12 > 0:
            bound, cert = book_bound_cross(mp)
            record("book_cross", bound, cert.size)
            book_base = list(cert.base)
        else:
            book_base = None

    results = {
        "t": t,
        "k": k,
        "epsilon": eps,
        "bases": nbases,
        "pairs_uniform": pairs,
        "all_pairs_uniform": all_uniform,
        "checks": checks,
        "book_base": book_base,
        "violations": violations,
        "bounds_checked": len(checks),
        "positive_bounds": positive,
    }
    summary = (
        f"{len(checks)} checks, {positive} positive bounds, "
        f"{violations} certified violations"
    )
    return results, summary, EXIT_OK if violations == 0 else EXIT_FOUND


def lemma_csv(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check", "page", "bound", "actual", "satisfied"])
    for row in results["checks"]:
        w.writerow(
            [
                row["check"],
                row.get("page", ""),
                fraction_str(row["bound"]),
                "" if row["actual"] is None else row["actual"],
                "" if row["satisfied"] is None else row["satisfied"],
            ]
        )
    return buf.getvalue()


def cmd_classify(args):
    cfg = load_config(args.config)
    for field in ("epsilon", "beta", "gamma"):
        if field not in cfg:
            raise ValueError(f"classify config needs '{field}'")
    blue = cfg["graph"]
    c = TwoColoring(blue.n, blue)
    labels = classify_pairs(
        c,
        cfg["blocks"],
        as_fraction(cfg["epsilon"]),
        as_fraction(cfg["beta"]),
        as_fraction(cfg["gamma"]),
        samples=args.samples,
        seed=args.seed,
    )
    counts = {"irr": 0, "blue": 0, "mid": 0, "red": 0}
    for row in labels:
        counts[row["label"]] += 1
    results = {
        "blocks": len(cfg["blocks"]),
        "t": len(cfg["blocks"][0]),
        "labels": [
            {
                "pair": list(row["pair"]),
                "label": row["label"],
                "red_density": row["red_density"],
                "method": row["method"],
            }
            for row in labels
        ],
        "counts": counts,
    }
    summary = ", ".join(f"{k}: {v}" for k, v in counts.items())
    return results, summary, EXIT_OK


def cmd_trichotomy(args):
    g = read_graph6_file(args.file)
    candidate = None
    if args.candidate:
        with open(args.candidate, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, list) or len(raw) != 2:
            raise ValueError("candidate file must hold [U1, U2]")
        candidate = (tuple(int(v) for v in raw[0]), tuple(int(v) for v in raw[1]))
    res = trichotomy_check(g, as_fraction(args.xi), candidate=candidate, seed=args.seed)
    branches = ", ".join(f"({b}) {res[b]}" for b in ("i", "ii", "iii"))
    return res, branches, EXIT_OK


# -------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bookramsey",
        description="Booksizes, small-order book Ramsey verification, "
        "lower-bound colorings, and uniform-pair counting checks.",
    )
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized operations")
    ap.add_argument("--threads", type=int, default=1, help="worker cap for parallel scans")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    # the same flags are accepted after the subcommand; SUPPRESS keeps the
    # subparser from clobbering a value parsed at the top level
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=lambda **kw: argparse.ArgumentParser(parents=[common], **kw))

    p = sub.add_parser("bk", help="booksize of a graph6 graph or BRC1 coloring")
    p.add_argument("file")
    p.set_defaults(handler=cmd_bk, seeded=False)

    p = sub.add_parser("verify", help="exhaustively verify a small Ramsey statement")
    p.add_argument("N", type=int)
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--force", action="store_true", help="allow orders beyond the default cap")
    p.add_argument("--prune", action="store_true", help="fix vertex 0's star up to sorting")
    p.set_defaults(handler=cmd_verify, seeded=False)

    p = sub.add_parser("witness-check", help="certify a lower bound from a coloring file")
    p.add_argument("file")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.set_defaults(handler=cmd_witness_check, seeded=False)

    p = sub.add_parser("construct", help="write a lower-bound coloring to a BRC1 file")
    p.add_argument("kind", choices=("two-cliques", "tripartite"))
    p.add_argument("--q", type=int, help="clique parameter for two-cliques")
    p.add_argument("--n", type=int, help="order for tripartite (divisible by 3)")
    p.add_argument("--epsilon", help="margin parameter, decimal or num/den")
    p.add_argument("--delta", help="bias override (default 8.25 * epsilon)")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_construct, seeded=True)

    p = sub.add_parser("stats", help="codegree statistics of a coloring vs a 3-part split")
    p.add_argument("file")
    p.add_argument("--parts", help="JSON file with three vertex lists (default: contiguous thirds)")
    p.set_defaults(handler=cmd_stats, seeded=False, csv=stats_csv)

    p = sub.add_parser("uniformity", help="uniformity oracle on a two-block config")
    p.add_argument("config")
    p.add_argument("--sampled", action="store_true", help="use the witness search instead of the oracle")
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(handler=cmd_uniformity, seeded=True)

    p = sub.add_parser("lemma-check", help="counting bounds on a bases-plus-pages config")
    p.add_argument("config")
    p.set_defaults(handler=cmd_lemma_check, seeded=False, csv=lemma_csv)

    p = sub.add_parser("classify", help="label block pairs irr/blue/mid/red")
    p.add_argument("config")
    p.add_argument("--samples", type=int, default=500)
    p.set_defaults(handler=cmd_classify, seeded=True)

    p = sub.add_parser("trichotomy", help="evaluate the three structure branches")
    p.add_argument("file")
    p.add_argument("--xi", required=True)
    p.add_argument("--candidate", help="JSON file [U1, U2] naming the bipartite parts")
    p.set_defaults(handler=cmd_trichotomy, seeded=True)

    return ap


def _parameters(args) -> dict:
    skip = {"handler", "seeded", "csv", "command", "format"}
    out = {}
    for key, val in sorted(vars(args).items()):
        if key in skip or val is None:
            continue
        out[key] = val
    return out


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.format == "csv" and not hasattr(args, "csv"):
        print("error: --format csv is only available for tabular reports", file=sys.stderr)
        return EXIT_USAGE
    start = time.perf_counter()
    try:
        results, summary, code = args.handler(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    wall_ms = int(round((time.perf_counter() - start) * 1000))

    if args.format == "csv":
        sys.stdout.write(args.csv(results))
    else:
        report = {
            "command": args.command,
            "parameters": jsonable(_parameters(args)),
            "results": jsonable(results),
            "seed": args.seed if args.seeded else None,
            "wall_time_ms": wall_ms,
            "version": __version__,
        }
        json.dump(report, sys.stdout, sort_keys=True)
        sys.stdout.write("\n")
    print(summary, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
