"""Solve random cnf-xor formulas under every preset and compare with brute force."""

import argparse
from collections import Counter
from dataclasses import fields

from dpllxor.experiments import AgreementConfig, oracle_agreement


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=AgreementConfig.instances)
    ap.add_argument("--seed", type=int, default=AgreementConfig.seed)
    ap.add_argument("--max-vars", type=int, default=AgreementConfig.max_vars)
    ap.add_argument("--max-clauses", type=int, default=AgreementConfig.max_clauses)
    args = ap.parse_args()
    cfg = AgreementConfig(args.instances, args.seed, args.max_vars, args.max_clauses, record=False)
    print(", ".join(f"{f.name}={getattr(cfg, f.name)}" for f in fields(cfg)))
    rep = oracle_agreement(cfg)
    per = Counter(r.preset for r in rep.runs)
    bad = Counter(r.preset for r in rep.mismatches)
    for name in cfg.presets:
        print(f"{name:16s} {per[name] - bad[name]}/{per[name]} agree")
    for r in rep.mismatches[:10]:
        print(f"mismatch: preset={r.preset} instance={r.index} expected_sat={r.expected} got={r.status.value}")
    print(f"total {rep.seconds:.1f}s")


if __name__ == "__main__":
    main()
