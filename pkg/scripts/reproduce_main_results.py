"""Recompute HF+ and the obstruction verdict for Y_p = Sigma(p, 2p-1, 2p+1).

Writes one JSON record per p and prints a compact table. Example:

    python3 scripts/reproduce_main_results.py --p-max 30 --out results/family.json
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from hfsurgery.brieskorn import BrieskornParams, decompose_creature, n_value, structural_checks
from hfsurgery.graded_root import u_kills_red_at
from hfsurgery.pipeline import run_brieskorn


@dataclass
class Config:
    p_min: int = 3
    p_max: int = 20
    structural: bool = False
    out: str | None = None


def family_record(p: int, structural: bool) -> dict:
    t0 = time.perf_counter()
    res = run_brieskorn(BrieskornParams.family(p))
    m = res.module
    rec = {
        "p": p,
        "triple": list(res.params.triple),
        "N": n_value(res.params),
        "reduced_length": len(res.reduced),
        "d": res.d,
        "HF+": m.pretty(),
        "dim_H0": m.dim(0),
        "dim_kerU0": m.ker_u_dim(0),
        "U_kills_red0": u_kills_red_at(m, 0),
        "verdict": res.verdict["status"],
    }
    if p % 2 == 0 and p >= 4:
        dec = decompose_creature(p, res.reduced)
        rec["prefix_length"] = len(dec.prefix)
        if structural:
            rec["structural_ok"] = structural_checks(p, res.expanded).ok
    rec["seconds"] = round(time.perf_counter() - t0, 3)
    return rec


def run(cfg: Config) -> list[dict]:
    rows = [family_record(p, cfg.structural) for p in range(cfg.p_min, cfg.p_max + 1)]
    if cfg.out:
        path = Path(cfg.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps({"config": asdict(cfg), "rows": rows}, indent=2) + "\n")
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p-min", type=int, default=Config.p_min)
    ap.add_argument("--p-max", type=int, default=Config.p_max)
    ap.add_argument("--structural", action="store_true")
    ap.add_argument("--out")
    cfg = Config(**vars(ap.parse_args()))
    print(f"{'p':>3} {'d':>5} {'H0':>4} {'kerU0':>6} {'Ukills':>7}  verdict")
    for r in run(cfg):
        print(f"{r['p']:>3} {r['d']:>5} {r['dim_H0']:>4} {r['dim_kerU0']:>6} {str(r['U_kills_red0']):>7}  {r['verdict']}")


if __name__ == "__main__":
    main()
