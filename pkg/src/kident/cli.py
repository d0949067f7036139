"""Command-line interface.

Subcommands:
  table1          nearest-distance survey of all MECs, grouped by edge count
  nearest         nearest neighbor of one graph (mn or bn mode)
  learn           run a bounded-error learner on an answer table
  chain-verify    chain closed-form distances against brute force
  adversary-demo  play the query game on a promise instance
  conjectures     single-edge nearest-witness reports

``learn`` exits 0 when the answer is unique, 2 when nothing fits, and 3
when several candidates fit. Report subcommands accept ``--figures DIR``
to render PNG charts next to the delimited output.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import adversary, identify, learners
from .graphs import (
    Dag,
    UndirectedGraph,
    graph_to_json,
    load_graph,
    make_chain_undirected,
    mec_key,
)
from .oracle import load_oracle
from .tables import _bayes_bits, load_table, table_distance, table_of_markov

EXIT_UNIQUE = 0
EXIT_NONE = 2
EXIT_NOT_UNIQUE = 3


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _emit_json(payload: dict, path) -> None:
    text = json.dumps(payload, indent=2)
    fh, close = _open_out(path)
    try:
        fh.write(text + "\n")
    finally:
        if close:
            fh.close()


def cmd_table1(args) -> int:
    rows = identify.mec_distance_stats(args.n, threads=args.threads)
    fh, close = _open_out(args.out)
    try:
        writer = csv.writer(fh)
        writer.writerow(["edges", "mecs", "min", "mean", "max"])
        for r in rows:
            writer.writerow([r.edges, r.mec_count, r.dmin, f"{r.mean_rounded:.1f}", r.dmax])
    finally:
        if close:
            fh.close()
    if args.figures:
        from .figures import save_stats_figure

        path = save_stats_figure(rows, args.n, args.figures)
        print(f"figure written to {path}", file=sys.stderr)
    return 0


def cmd_nearest(args) -> int:
    g = load_graph(args.graph)
    if args.mode == "mn":
        if not isinstance(g, UndirectedGraph):
            return _fail("mn mode needs an undirected graph (edges key)")
        result = identify.nearest_mn(g)
    else:
        if not isinstance(g, Dag):
            return _fail("bn mode needs a DAG (arcs key)")
        result = identify.nearest_bn(g)
    payload = {
        "distance": result.distance,
        "max_k": identify.max_identifiable_k(result.distance),
        "witness": graph_to_json(result.witness),
    }
    _emit_json(payload, args.out)
    return 0


def cmd_learn(args) -> int:
    if args.oracle:
        oracle = load_oracle(args.oracle)
        table = oracle.full_table()
        k = oracle.k if args.k is None else args.k
    else:
        table = load_table(args.table)
        if args.k is None:
            return _fail("--k is required with --table")
        k = args.k
    if args.mode == "mn":
        result = learners.solve_mnsl(table, k, max_witnesses=args.max_witnesses)
    else:
        result = learners.solve_bnsl(table, k, max_witnesses=args.max_witnesses)
    payload = {
        "status": result.status,
        "graph": graph_to_json(result.graph) if result.graph else None,
        "witnesses": [graph_to_json(w) for w in result.witnesses],
        "distance": result.distance,
    }
    _emit_json(payload, args.out)
    if result.status == learners.STATUS_UNIQUE:
        return EXIT_UNIQUE
    if result.status == learners.STATUS_NONE:
        return EXIT_NONE
    return EXIT_NOT_UNIQUE


def cmd_chain_verify(args) -> int:
    if not 3 <= args.n_max <= 6:
        return _fail("--n-max must be between 3 and 6")
    all_pass = True
    rows = []
    for n in range(3, args.n_max + 1):
        brute = identify.nearest_mn(make_chain_undirected(n))
        closed = identify.chain_mn_nearest_closed_form(n)
        witness_d = table_distance(
            table_of_markov(closed.witness), table_of_markov(make_chain_undirected(n))
        )
        ok = brute.distance == closed.distance == witness_d
        all_pass &= ok
        rows.append(("mn", n, brute.distance, closed.distance))
        print(
            f"mn n={n}: brute {brute.distance} closed-form {closed.distance} "
            f"witness {witness_d} {'pass' if ok else 'FAIL'}"
        )
    bn_max = min(args.n_max, 5)
    for n in range(3, bn_max + 1):
        family = list(identify.all_chain_dags(n))
        tabs = [_bayes_bits(n, d.parents) for d in family]
        keys = [mec_key(d) for d in family]
        expected = (1 << (n - 1)) - 2
        seen = set()
        ok = True
        for i, d in enumerate(family):
            best = min(
                (tabs[i] ^ tabs[j]).bit_count()
                for j in range(len(family))
                if keys[j] != keys[i]
            )
            witness = identify.chain_swap_witness(d)
            wd = (tabs[i] ^ _bayes_bits(n, witness.parents)).bit_count()
            seen.add(best)
            if best != expected or wd != expected or mec_key(witness) == keys[i]:
                ok = False
        all_pass &= ok
        rows.append(("bn", n, max(seen), expected))
        print(
            f"bn n={n}: family-min {sorted(seen)} closed-form {expected} "
            f"over {len(family)} chain DAGs {'pass' if ok else 'FAIL'}"
        )
    if args.figures:
        from .figures import save_chain_figure

        path = save_chain_figure(rows, args.figures)
        print(f"figure written to {path}", file=sys.stderr)
    return 0 if all_pass else 1


def cmd_adversary_demo(args) -> int:
    if args.mode == "mn":
        inst = adversary.promise_mn(args.n)
    else:
        inst = adversary.promise_bn(args.n)
    if args.k is not None:
        inst = inst.with_k(args.k)
    strategy = adversary.STRATEGIES[args.strategy]
    policy = adversary.POLICIES[args.policy]
    transcript = adversary.run_game(strategy, inst, policy)
    print(f"mode={inst.mode} n={inst.n} k={inst.k} queries={inst.size}")
    print(f"strategy={args.strategy} policy={args.policy}")
    print(f"queries used: {transcript.queries_used}")
    print(f"decision: {transcript.decision}")
    print(f"achievable outcomes: {sorted(transcript.achievable)}")
    print(f"fooled: {transcript.fooled}")
    if args.out:
        text = adversary.transcript_to_json_str(transcript, inst)
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        print(f"transcript written to {args.out}", file=sys.stderr)
    return 0


def cmd_conjectures(args) -> int:
    modes = ["mn", "bn"] if args.mode == "both" else [args.mode]
    reports = []
    for mode in modes:
        report = identify.single_edge_neighbor_report(args.n, mode)
        reports.append(report)
        print(
            f"{mode} n={args.n}: {report.satisfied}/{report.total} have a "
            f"single-edge nearest witness"
        )
        for graph, dmin, best in report.counterexamples:
            print(
                f"  counterexample: {graph_to_json(graph)} nearest {dmin} "
                f"best single-edge {best}"
            )
    if args.figures:
        from .figures import save_conjecture_figure

        path = save_conjecture_figure(reports, args.figures)
        print(f"figure written to {path}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kident",
        description="structure learning of Markov/Bayesian networks "
        "under a CI oracle with at most k wrong answers",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    common.add_argument("--threads", type=int, default=1, help="worker cap for sweeps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "table1",
        parents=[common],
        help="per-edge-count nearest-distance survey over all MECs",
    )
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.add_argument("--figures", default=None, metavar="DIR")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("nearest", parents=[common], help="nearest neighbor of a graph")
    p.add_argument("--graph", required=True, help="graph JSON file")
    p.add_argument("--mode", choices=["mn", "bn"], required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_nearest)

    p = sub.add_parser("learn", parents=[common], help="run a bounded-error learner")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--table", help="answer table (.csv or binary)")
    src.add_argument("--oracle", help="oracle spec JSON")
    p.add_argument("--k", type=int, default=None, help="error bound")
    p.add_argument("--mode", choices=["mn", "bn"], required=True)
    p.add_argument("--max-witnesses", type=int, default=learners.DEFAULT_MAX_WITNESSES)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser(
        "chain-verify",
        parents=[common],
        help="chain nearest-distance closed forms vs brute force",
    )
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--figures", default=None, metavar="DIR")
    p.set_defaults(func=cmd_chain_verify)

    p = sub.add_parser(
        "adversary-demo", parents=[common], help="query game on a promise instance"
    )
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--mode", choices=["mn", "bn"], required=True)
    p.add_argument(
        "--strategy", choices=sorted(adversary.STRATEGIES), required=True
    )
    p.add_argument(
        "--policy", choices=sorted(adversary.POLICIES), default="late-error"
    )
    p.add_argument("--k", type=int, default=None, help="override the error budget")
    p.add_argument("--out", default=None, help="transcript JSON path")
    p.set_defaults(func=cmd_adversary_demo)

    p = sub.add_parser(
        "conjectures",
        parents=[common],
        help="single-edge nearest-witness reports",
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["mn", "bn", "both"], default="both")
    p.add_argument("--figures", default=None, metavar="DIR")
    p.set_defaults(func=cmd_conjectures)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
