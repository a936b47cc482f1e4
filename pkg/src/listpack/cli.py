"""Batch command-line front end.

Exit codes: 0 success/verified, 1 refuted/failed verification, 2 timeout,
3 usage or format error.  All randomness flows through an explicit --seed
flag; outputs are canonical JSON so reruns produce identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time

from .errors import (
    FormatError,
    ListpackError,
    OracleTimeout,
    PreconditionFailed,
    ScaleRefused,
)
from .gadget import build_amplified_gadget, build_core_gadget, gadget_to_dot
from .graph_core import (
    Graph,
    dumps_canonical,
    graph_from_json_dict,
    graph_to_dot,
    graph_to_json_dict,
    random_d_tree,
)
from .oracle import SearchBudget, exists_packing
from .packer import Unknown, pack_auto, pack_chordal_2dm1
from .packing_core import (
    ListAssignment,
    find_bad_cliques,
    lists_from_json_dict,
    lists_to_json_dict,
    packing_from_json_dict,
    packing_to_json_dict,
    validate_packing,
)
from .reduction import origin_to_json_dict, product_reduce
from .rng import SplitMix64

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_TIMEOUT = 2
EXIT_USAGE = 3

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on bad usage; the contract says 3."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _configure_logging() -> None:
    level_name = os.environ.get("LISTPACK_LOG", "").upper()
    if level_name:
        level = getattr(logging, level_name, None)
        if isinstance(level, int):
            logging.basicConfig(level=level)


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from exc


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _budget_from_args(args) -> SearchBudget | None:
    if args.budget_nodes is None and args.budget_secs is None:
        return None
    return SearchBudget(max_nodes=args.budget_nodes, max_seconds=args.budget_secs)


def cmd_gen(args) -> int:
    if args.n < args.d + 1:
        print(f"error: a d-tree needs n >= d+1 = {args.d + 1}", file=sys.stderr)
        return EXIT_USAGE
    g = random_d_tree(args.d, args.n, args.seed)
    _write_text(args.out, dumps_canonical(graph_to_json_dict(g)))
    return EXIT_OK


def cmd_pack(args) -> int:
    g, _ = graph_from_json_dict(_load_json(args.graph))
    lists = lists_from_json_dict(_load_json(args.lists))
    if args.d is not None:
        if lists.k != 2 * args.d - 1:
            print(f"error: --d {args.d} expects lists of size {2 * args.d - 1}, "
                  f"got {lists.k}", file=sys.stderr)
            return EXIT_USAGE
        packing, trace = pack_chordal_2dm1(g, lists, args.d)
        if args.trace:
            _write_text(args.trace, trace.to_jsonl())
        result = packing
    else:
        result = pack_auto(g, lists, budget=_budget_from_args(args))
    if isinstance(result, Unknown):
        report = {"status": result.status, "stats": result.stats}
        _write_text(args.out, dumps_canonical(report))
        return EXIT_TIMEOUT if result.status == "timeout" else EXIT_REFUTED
    _write_text(args.out, dumps_canonical(packing_to_json_dict(result)))
    return EXIT_OK


def cmd_verify(args) -> int:
    g, _ = graph_from_json_dict(_load_json(args.graph))
    lists = lists_from_json_dict(_load_json(args.lists))
    packing = packing_from_json_dict(_load_json(args.packing))
    if packing.k != 2 * args.d - 1:
        print(f"error: --d {args.d} expects k = {2 * args.d - 1}, "
              f"packing has k = {packing.k}", file=sys.stderr)
        return EXIT_USAGE
    try:
        violations = validate_packing(g, lists, packing)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    bad = []
    if not violations:
        bad = [{"clique": list(c), "witness": list(w)}
               for c, w in find_bad_cliques(g, packing, args.d)]
    report = {
        "valid": not violations,
        "violations": violations,
        "bad_cliques": bad,
    }
    _write_text(args.out, dumps_canonical(report))
    return EXIT_OK if not violations and not bad else EXIT_REFUTED


def cmd_gadget(args) -> int:
    if args.d < 2:
        print("error: the gadget construction needs d >= 2", file=sys.stderr)
        return EXIT_USAGE
    instance = (build_core_gadget(args.d) if args.variant == "core"
                else build_amplified_gadget(args.d))
    prefix = args.out
    _write_text(f"{prefix}.graph.json",
                dumps_canonical(graph_to_json_dict(instance.graph, instance.names)))
    _write_text(f"{prefix}.lists.json", dumps_canonical(lists_to_json_dict(instance.lists)))
    names_payload = {
        "d": instance.d,
        "names": {str(v): instance.names[v] for v in sorted(instance.names)},
        "clique_index": {",".join(map(str, c)): list(xs)
                         for c, xs in sorted(instance.clique_index.items())},
    }
    _write_text(f"{prefix}.names.json", dumps_canonical(names_payload))
    if args.format == "dot":
        _write_text(f"{prefix}.dot", gadget_to_dot(instance))
    return EXIT_OK


def cmd_certify(args) -> int:
    if args.d not in (2, 3):
        print("error: certification is supported for d in {2, 3} "
              "(larger gadgets are beyond desk scale)", file=sys.stderr)
        return EXIT_USAGE
    instance = build_amplified_gadget(args.d)
    outcome = exists_packing(instance.graph, instance.lists, args.d + 1,
                             budget=_budget_from_args(args))
    report = {
        "d": args.d,
        "vertices": instance.graph.n,
        "status": outcome.status,
        "nodes": outcome.stats.nodes,
        "elapsed": round(outcome.stats.elapsed, 3),
    }
    _write_text(args.out, dumps_canonical(report))
    if outcome.status == "no":
        return EXIT_OK
    if outcome.status == "timeout":
        return EXIT_TIMEOUT
    return EXIT_REFUTED  # a packing exists, so the gadget is not a counterexample


def cmd_reduce(args) -> int:
    g, _ = graph_from_json_dict(_load_json(args.graph))
    lists = lists_from_json_dict(_load_json(args.lists))
    if lists.k != args.k:
        print(f"error: lists must be uniform of size k = {args.k}", file=sys.stderr)
        return EXIT_USAGE
    pi = product_reduce(g, lists, args.k)
    prefix = args.out
    _write_text(f"{prefix}.graph.json", dumps_canonical(graph_to_json_dict(pi.graph)))
    _write_text(f"{prefix}.lists.json", dumps_canonical(lists_to_json_dict(pi.lists)))
    _write_text(f"{prefix}.origin.json", dumps_canonical(origin_to_json_dict(pi)))
    if args.format == "dot":
        _write_text(f"{prefix}.dot", graph_to_dot(pi.graph))
    return EXIT_OK


_BENCH_SUITES = {
    "packer": [(3, 40), (3, 120), (4, 40), (4, 120), (5, 40), (5, 120)],
}


def _bench_instance(d: int, n: int, seed: int) -> tuple[Graph, ListAssignment]:
    g = random_d_tree(d, n, seed)
    # separate stream for the lists so graph and lists stay independent
    rng = SplitMix64(seed ^ 0x5EED_0F_1157)
    pool = list(range(1, 4 * d + 1))
    k = 2 * d - 1
    lists = {v: frozenset(rng.sample(pool, k)) for v in g.vertices()}
    return g, ListAssignment(lists)


def _bench_row(task: tuple) -> dict:
    suite, d, n, seed = task
    g, lists = _bench_instance(d, n, seed)
    t0 = time.monotonic()
    packing, _ = pack_chordal_2dm1(g, lists, d)
    millis = (time.monotonic() - t0) * 1000.0
    ok = not validate_packing(g, lists, packing) and not find_bad_cliques(g, packing, d)
    return {"suite": suite, "d": d, "n": n, "seed": seed,
            "millis": f"{millis:.2f}", "ok": ok}


def cmd_bench(args) -> int:
    if args.suite not in _BENCH_SUITES:
        print(f"error: unknown suite {args.suite!r}; known: "
              f"{sorted(_BENCH_SUITES)}", file=sys.stderr)
        return EXIT_USAGE
    tasks = [(args.suite, d, n, args.seed) for d, n in _BENCH_SUITES[args.suite]]
    if args.workers > 1:
        import multiprocessing

        with multiprocessing.Pool(args.workers) as pool:
            rows = pool.map(_bench_row, tasks)
    else:
        rows = [_bench_row(t) for t in tasks]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["suite", "d", "n", "seed", "millis", "ok"])
    writer.writeheader()
    writer.writerows(rows)
    _write_text(args.out, buf.getvalue())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="listpack",
                     description="List packings of chordal graphs: constructive "
                                 "packer, gadget certification, product reduction.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random d-tree as graph JSON")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("pack", help="pack a graph under a list assignment")
    p.add_argument("graph")
    p.add_argument("lists")
    p.add_argument("--d", type=int, default=None,
                   help="force the constructive route for this d")
    p.add_argument("--budget-nodes", type=int, default=None)
    p.add_argument("--budget-secs", type=float, default=None)
    p.add_argument("--trace", default=None, help="write a JSONL insertion trace here")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("verify", help="validate a packing and scan for bad cliques")
    p.add_argument("graph")
    p.add_argument("lists")
    p.add_argument("packing")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gadget", help="emit a lower-bound gadget instance")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--variant", choices=["core", "amplified"], default="amplified")
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("--out", required=True, help="output file prefix")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("certify",
                       help="exhaustively refute (d+1)-packings of the amplified gadget")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--budget-nodes", type=int, default=None)
    p.add_argument("--budget-secs", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("reduce", help="emit the product list-coloring instance")
    p.add_argument("graph")
    p.add_argument("lists")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("--out", required=True, help="output file prefix")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("bench", help="run a timing suite and emit CSV")
    p.add_argument("--suite", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1,
                   help="fan independent instances across this many processes")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except OracleTimeout as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    except (FormatError, PreconditionFailed, ScaleRefused, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ListpackError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        raise


if __name__ == "__main__":
    sys.exit(main())
