"""Command-line front end.

Exit codes follow SAT-competition practice: 10 satisfiable, 20
unsatisfiable, 0 unknown, 1 usage or input errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from . import benchgen
from .derivation import Policy
from .engine import PRESETS, SolverConfig, Status, solve
from .formula_io import ParseError, read_file, write_file
from .oracle import VAR_LIMIT, gf2_feasible, is_satisfiable
from .xor_algebra import evaluate, evaluate_or

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_UNKNOWN = 0
EXIT_ERROR = 1

_CUTS = {"closest": Policy.CLOSEST, "uip": Policy.FIRST_UIP, "furthest": Policy.FURTHEST}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def _seed(arg: Optional[int]) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("XORSAT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise SystemExit(f"XORSAT_SEED must be an integer, got {env!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dpllxor", description="CDCL solver with xor-clause reasoning")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve a cnf-xor instance")
    s.add_argument("file")
    s.add_argument("--preset", choices=sorted(PRESETS), help="named configuration (flags below override it)")
    s.add_argument("--module", choices=["up", "subst", "ec", "none"])
    s.add_argument("--explain", choices=["implicative", "parity"])
    s.add_argument("--learn-xor", action="store_true", default=None)
    s.add_argument("--no-xor-filter", action="store_true", help="accept every learned xor candidate")
    s.add_argument("--cut", choices=sorted(_CUTS))
    s.add_argument("--seed", type=int)
    s.add_argument("--max-conflicts", type=int)
    s.add_argument("--verify", action="store_true")
    s.add_argument("--stats", action="store_true")

    g = sub.add_parser("gen", help="generate benchmark instances")
    gsub = g.add_subparsers(dest="family", required=True, parser_class=_Parser)
    pg = gsub.add_parser("parity-graph")
    size = pg.add_mutually_exclusive_group(required=True)
    size.add_argument("--nodes", type=int)
    size.add_argument("--grid", type=int)
    pg.add_argument("--degree", type=int, default=4)
    pg.add_argument("--charge", choices=["top", "bot"], default="top")
    pg.add_argument("--seed", type=int)
    pg.add_argument("--cnf-only", action="store_true")
    pg.add_argument("-o", "--output", required=True)

    r = sub.add_parser("refute", help="spanning-tree refutation of a parity-graph instance")
    r.add_argument("file")
    r.add_argument("--dump", action="store_true", help="print the derivation")
    return p


def _config(a) -> SolverConfig:
    base = dict(PRESETS[a.preset]) if a.preset else {}
    if a.module is not None:
        base["module"] = a.module
    module = base.get("module", "up")
    if a.explain is not None:
        base["explanation"] = a.explain
    elif "explanation" not in base:
        base["explanation"] = "parity" if module in ("up", "subst") else "implicative"
    if module == "none":
        base["explanation"] = "implicative"
    if a.learn_xor:
        base["learn_xor"] = True
    if a.no_xor_filter:
        base["xor_filter"] = False
    if a.cut is not None:
        base["cut_primary"] = _CUTS[a.cut]
    base["seed"] = _seed(a.seed)
    base["max_conflicts"] = a.max_conflicts
    return SolverConfig(**base)


def _cmd_solve(a) -> int:
    f = read_file(a.file)
    try:
        cfg = _config(a)
    except ValueError as e:
        print(f"dpllxor: {e}", file=sys.stderr)
        return EXIT_ERROR
    res = solve(f, cfg)
    if res.status is Status.SAT:
        print("s SATISFIABLE")
        lits = [v if res.model[v] else -v for v in range(1, f.num_vars + 1)]
        for i in range(0, len(lits), 10):
            print("v " + " ".join(map(str, lits[i:i + 10])))
        print("v 0")
        code = EXIT_SAT
    elif res.status is Status.UNSAT:
        print("s UNSATISFIABLE")
        code = EXIT_UNSAT
    else:
        print("s UNKNOWN")
        code = EXIT_UNKNOWN
    if a.stats:
        for line in res.stats.lines():
            print(line)
    if a.verify and code != EXIT_UNKNOWN:
        ok = _verify(f, res)
        if ok is None:
            print("c verify: skipped (instance too large for the oracle)")
        elif ok:
            print("c verify: ok")
        else:
            print("c verify: FAILED")
            print("dpllxor: verification failed", file=sys.stderr)
            return EXIT_ERROR
    return code


def _verify(f, res) -> Optional[bool]:
    if res.status is Status.SAT:
        return all(evaluate_or(c, res.model) for c in f.or_clauses) and all(
            evaluate(c, res.model) for c in f.xor_clauses)
    if not f.or_clauses:
        return not gf2_feasible(f.xor_clauses)
    if f.num_vars <= VAR_LIMIT:
        return not is_satisfiable(f)
    return None


def _cmd_gen(a) -> int:
    total = a.charge == "top"
    seed = _seed(a.seed)
    try:
        if a.grid is not None:
            g = benchgen.grid_graph(a.grid, total, seed)
        else:
            g = benchgen.random_parity_graph(a.nodes, a.degree, total, seed)
        f = benchgen.clauses(g) if a.cnf_only else benchgen.xorclauses(g)
    except ValueError as e:
        print(f"dpllxor: {e}", file=sys.stderr)
        return EXIT_ERROR
    write_file(f, a.output)
    print(f"c wrote {a.output}: {g.n_nodes} nodes, {len(g.edges)} edges, "
          f"{len(f.or_clauses)} or-clauses, {len(f.xor_clauses)} xor-clauses")
    return 0


def _cmd_refute(a) -> int:
    f = read_file(a.file)
    try:
        g = benchgen.parity_graph_from_formula(f)
        ref = benchgen.spanning_tree_refutation(g)
    except ValueError as e:
        print(f"dpllxor: {e}", file=sys.stderr)
        return EXIT_ERROR
    print(f"c nodes={g.n_nodes} edges={len(g.edges)} assumptions={len(ref.assumptions)} "
          f"vertices={len(ref.graph)}")
    if a.dump:
        sys.stdout.write(ref.graph.dump())
    print(f"pexpl {ref.pexpl}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_ERROR
    try:
        if a.cmd == "solve":
            return _cmd_solve(a)
        if a.cmd == "gen":
            return _cmd_gen(a)
        return _cmd_refute(a)
    except (OSError, ParseError) as e:
        print(f"dpllxor: {e}", file=sys.stderr)
        return EXIT_ERROR
    except SystemExit as e:
        print(f"dpllxor: {e.code}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
