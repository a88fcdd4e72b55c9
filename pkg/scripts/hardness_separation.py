"""Decisions needed to refute charged torus parity graphs, pure CNF vs xor reasoning."""

import argparse

from dpllxor.experiments import SeparationConfig, hardness_separation


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=list(SeparationConfig.sizes))
    ap.add_argument("--seeds", type=int, nargs="+", default=list(SeparationConfig.seeds))
    ap.add_argument("--baseline", default=SeparationConfig.baseline)
    ap.add_argument("--candidate", default=SeparationConfig.candidate)
    ap.add_argument("--max-conflicts", type=int, default=SeparationConfig.max_conflicts)
    ap.add_argument("--max-seconds", type=float, default=SeparationConfig.max_seconds,
                    help="wall budget per solver run; 0 disables it")
    args = ap.parse_args()
    cfg = SeparationConfig(tuple(args.sizes), tuple(args.seeds), args.baseline, args.candidate,
                           args.max_conflicts, args.max_seconds or None)
    print(f"{'size':>4} {'preset':16s} {'seed':>4} {'status':8s} {'decisions':>10} "
          f"{'conflicts':>10} {'seconds':>8}")
    rep = hardness_separation(cfg, log=lambda r: print(
        f"{r.size:>4} {r.preset:16s} {r.seed:>4} {r.status.value:8s} {r.decisions:>10} "
        f"{r.conflicts:>10} {r.seconds:>8.2f}", flush=True))
    print(f"largest size solved by both: {rep.largest_common}")
    if rep.ratio is not None:
        print(f"median decisions {cfg.candidate}={rep.median_candidate} "
              f"{cfg.baseline}={rep.median_baseline} ratio={rep.ratio:.4f}")


if __name__ == "__main__":
    main()
