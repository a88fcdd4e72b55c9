"""Median decisions and explanation sizes per preset on random charged parity graphs."""

import argparse
import statistics
from dataclasses import dataclass

from dpllxor.benchgen import random_parity_graph, xorclauses
from dpllxor.engine import PRESETS, SolverConfig, solve


@dataclass(frozen=True)
class ComparisonConfig:
    nodes: int = 14
    degree: int = 4
    instances: int = 5
    presets: tuple = tuple(PRESETS)
    max_conflicts: int = 200_000
    max_seconds: float = 20.0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nodes", type=int, default=ComparisonConfig.nodes)
    ap.add_argument("--degree", type=int, default=ComparisonConfig.degree)
    ap.add_argument("--instances", type=int, default=ComparisonConfig.instances)
    ap.add_argument("--presets", nargs="+", default=list(ComparisonConfig.presets))
    args = ap.parse_args()
    cfg = ComparisonConfig(args.nodes, args.degree, args.instances, tuple(args.presets))
    graphs = [xorclauses(random_parity_graph(cfg.nodes, cfg.degree, True, seed=i))
              for i in range(cfg.instances)]
    print(f"{'preset':16s} {'solved':>6} {'decisions':>10} {'avg expl':>9} {'learned xor':>11}")
    for name in cfg.presets:
        scfg = SolverConfig.preset(name, max_conflicts=cfg.max_conflicts, max_seconds=cfg.max_seconds)
        res = [solve(f, scfg) for f in graphs]
        solved = sum(r.status.value != "UNKNOWN" for r in res)
        dec = statistics.median(r.stats.decisions for r in res)
        sizes = [r.stats.explanation_size_sum / r.stats.explanations for r in res if r.stats.explanations]
        avg = f"{statistics.mean(sizes):.2f}" if sizes else "-"
        learned = sum(r.stats.learned_xor for r in res)
        print(f"{name:16s} {solved:>6} {dec:>10g} {avg:>9} {learned:>11}")


if __name__ == "__main__":
    main()
