"""Command line front end: ``iso group|ring|pgroup|series|gen|bench``.

Exit status is 0 for isomorphic, 1 for not isomorphic and 2 for any error.
Structures are given either as table files or as constructor expressions
(``iso group "cyclic 4" "elementary 2 2"``).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import random
import sys
from pathlib import Path

from .algebra import CayleyTable, prime_power, relabel
from .collision import ChunkPlan
from .corpus import format_group, format_ring, make_structure, parse_table_file
from .errors import IsoError, OrderMismatch
from .groupiso import IsoDecision, generator_enumeration, is_isomorphic_groups, split_depth
from .rings import RingTable, is_isomorphic_rings, ring_generator_enumeration
from .series import composition_series_alice, composition_series_bob, compute_t, p_group_iso_via_series

SCHEMA = 1
REPORT_FIELDS = ("schema", "isomorphic", "algorithm", "n", "p", "d", "delta", "a_count", "b_count",
                 "chunk_pairs", "peak_fingerprints", "millis", "witness")

log = logging.getLogger("bidiso")


class UsageError(Exception):
    pass


def load(arg: str) -> CayleyTable | RingTable:
    """A path to a table file, or failing that a constructor expression."""
    if Path(arg).is_file():
        return parse_table_file(arg).structure
    return make_structure(arg)


def _load_group(arg):
    G = load(arg)
    if not isinstance(G, CayleyTable):
        raise UsageError(f"{arg!r} is a ring, expected a group")
    return G


def _load_ring(arg):
    R = load(arg)
    if not isinstance(R, RingTable):
        raise UsageError(f"{arg!r} is a group, expected a ring")
    return R


def parse_delta(text: str) -> ChunkPlan:
    if text == "all":
        return ChunkPlan(None)
    try:
        return ChunkPlan(int(text))
    except ValueError as exc:
        raise UsageError(f"bad --delta {text!r}: {exc}") from None


def run_report(decision: IsoDecision, include_witness: bool) -> dict:
    st = decision.stats
    witness = list(decision.witness.map) if (include_witness and decision.witness) else None
    report = {
        "schema": SCHEMA,
        "isomorphic": decision.isomorphic,
        "algorithm": st.get("algorithm"),
        "n": st.get("n"),
        "p": st.get("p"),
        "d": st.get("d"),
        "delta": st.get("delta"),
        "a_count": st.get("a_count", 0),
        "b_count": st.get("b_count", 0),
        "chunk_pairs": st.get("chunk_pairs", 0),
        "peak_fingerprints": st.get("peak_fingerprints", 0),
        "millis": round(float(st.get("millis", 0.0)), 3),
        "witness": witness,
    }
    assert tuple(report) == REPORT_FIELDS
    return report


def _mismatch(n: int, m: int, algorithm: str) -> IsoDecision:
    return IsoDecision(False, None, {"algorithm": algorithm, "n": n, "note": f"orders {n} and {m} differ"})


def _series_decision(G, H) -> IsoDecision:
    res = p_group_iso_via_series(G, H)
    # the series pipeline reports its split point as d and holds Bob's series in memory
    res.stats = {**res.stats, "chunk_pairs": res.stats.get("pairs", 0), "peak_fingerprints": res.stats.get("b_count", 0)}
    return res


def decide_groups(G, H, algo: str, plan: ChunkPlan, threads: int) -> IsoDecision:
    if G.n != H.n:
        return _mismatch(G.n, H.n, algo)
    if algo == "genenum":
        res = generator_enumeration(G, H)
        if G.n > 1:
            res.stats.setdefault("p", split_depth(G.n)[0])
        return res
    if algo == "series":
        if prime_power(G.n) is None:
            raise UsageError(f"--algo series needs a p-group, order {G.n} is not a prime power")
        return _series_decision(G, H)
    return is_isomorphic_groups(G, H, plan, threads)


def decide_rings(R, S, algo: str, plan: ChunkPlan, threads: int) -> IsoDecision:
    if R.n != S.n:
        return _mismatch(R.n, S.n, algo)
    if algo == "genenum":
        return ring_generator_enumeration(R, S)
    return is_isomorphic_rings(R, S, plan, threads)


def _emit(decision: IsoDecision, args) -> int:
    report = run_report(decision, args.witness)
    if args.json:
        print(json.dumps(report))
    else:
        print("isomorphic" if decision.isomorphic else "not isomorphic")
        for key in REPORT_FIELDS[2:-1]:
            if report[key] is not None:
                print(f"  {key}: {report[key]}")
        if args.witness and decision.witness is not None:
            print("  witness: " + " ".join(map(str, decision.witness.map)))
    return 0 if decision.isomorphic else 1


def cmd_group(args) -> int:
    G, H = _load_group(args.a), _load_group(args.b)
    return _emit(decide_groups(G, H, args.algo, parse_delta(args.delta), args.threads), args)


def cmd_ring(args) -> int:
    R, S = _load_ring(args.a), _load_ring(args.b)
    return _emit(decide_rings(R, S, args.algo, parse_delta(args.delta), args.threads), args)


def cmd_pgroup(args) -> int:
    G, H = _load_group(args.a), _load_group(args.b)
    if G.n != H.n:
        return _emit(_mismatch(G.n, H.n, "series"), args)
    for X in (G, H):
        if prime_power(X.n) is None:
            raise UsageError(f"order {X.n} is not a prime power")
    return _emit(_series_decision(G, H), args)


def cmd_series(args) -> int:
    G = _load_group(args.a)
    params = compute_t(G)
    t = params.t if args.t is None else args.t
    alice = composition_series_alice(G, t)
    bob = composition_series_bob(G, t)
    print(json.dumps({
        "schema": SCHEMA,
        "n": G.n,
        "p": params.p,
        "t": t,
        "computed_t": params.t,
        "ell": params.ell,
        "m": list(params.m),
        "s": list(params.s),
        "alice": len(alice),
        "bob": len(bob),
    }))
    return 0


def cmd_gen(args) -> int:
    X = make_structure(args.spec)
    text = format_group(X) if isinstance(X, CayleyTable) else format_ring(X)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


FAMILIES = {
    "elementary2": lambda n: f"elementary 2 {n.bit_length() - 1}" if n >= 2 and n & (n - 1) == 0 else None,
    "elementary3": lambda n: _power_spec(n, 3, "elementary 3 {k}"),
    "cyclic": lambda n: f"cyclic {n}" if n >= 2 else None,
    "dihedral": lambda n: f"dihedral {n // 2}" if n >= 6 and n % 2 == 0 else None,
}


def _power_spec(n, p, fmt):
    k = 0
    while p ** (k + 1) <= n:
        k += 1
    return fmt.format(k=k) if k >= 1 and p**k == n else None


def cmd_bench(args) -> int:
    """Each family member against a random relabelling of itself, for each algorithm and chunk size.

    Decisions must agree across chunk sizes; a disagreement is reported as an error.
    """
    plans = [parse_delta(x.strip()) for x in args.deltas.split(",") if x.strip()]
    rng = random.Random(args.seed)
    writer = csv.writer(sys.stdout)
    writer.writerow(["n", "algo", "delta", "candidates", "chunk_pairs", "peak_fingerprints", "millis", "isomorphic"])
    for n in range(2, args.max_order + 1):
        spec = FAMILIES[args.family](n)
        if spec is None:
            continue
        G = make_structure(spec)
        perm = list(range(G.n))
        rng.shuffle(perm)
        H = relabel(G, perm)
        for algo in args.algos.split(","):
            decisions = set()
            for plan in (plans if algo == "bidi" else [ChunkPlan(None)]):
                res = decide_groups(G, H, algo, plan, args.threads)
                decisions.add(res.isomorphic)
                st = res.stats
                writer.writerow([n, algo, "all" if plan.delta is None else plan.delta,
                                 st.get("a_count", 0) + st.get("b_count", 0), st.get("chunk_pairs", 0),
                                 st.get("peak_fingerprints", 0), round(st.get("millis", 0.0), 3), int(res.isomorphic)])
            if len(decisions) != 1:
                raise IsoError(f"decision changed with the chunk size at n={n}, algo={algo}")
    sys.stdout.flush()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iso", description="Isomorphism testing of finite groups and rings given by tables.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def pair(name, helptext, algos):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("a", help="table file or constructor expression")
        p.add_argument("b", help="table file or constructor expression")
        if algos:
            p.add_argument("--algo", choices=algos, default="bidi")
            p.add_argument("--delta", default="all", help="chunk size for collision detection, or 'all' (default)")
            p.add_argument("--threads", type=int, default=1)
        p.add_argument("--json", action="store_true", help="print a JSON report")
        p.add_argument("--witness", action="store_true", help="include the isomorphism found")
        return p

    pair("group", "decide group isomorphism", ["bidi", "genenum", "series"]).set_defaults(func=cmd_group)
    pair("ring", "decide ring isomorphism", ["bidi", "genenum"]).set_defaults(func=cmd_ring)
    pair("pgroup", "decide p-group isomorphism through composition series", None).set_defaults(func=cmd_pgroup)

    p = sub.add_parser("series", help="sizes of the two composition-series candidate sets")
    p.add_argument("a")
    p.add_argument("--t", type=int, default=None, help="split point (default: computed)")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("gen", help="write the table of a constructor expression")
    p.add_argument("spec")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="tradeoff measurements as CSV")
    p.add_argument("--family", choices=sorted(FAMILIES), default="elementary2")
    p.add_argument("--max-order", type=int, default=16)
    p.add_argument("--deltas", default="1,16,all")
    p.add_argument("--algos", default="genenum,bidi")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        return args.func(args)
    except (IsoError, UsageError, OSError) as exc:
        print(f"iso: error: {exc}", file=sys.stderr)
        return 2


run_cli = main

if __name__ == "__main__":
    sys.exit(main())
