"""Headline numbers for the 2x1 tube: counts, growth rates, norm bound,
lower-bound column and knotting under pattern insertion.

    python3 scripts/run_experiments.py [--nmax 16] [--out results.json]
"""

import argparse
import json
import math
import random
import time

from tubeknots import blocks, diagram, patterns, spectral
from tubeknots.enumerate import count_no_2section, enumerate_polygons, generate_polygons
from tubeknots.lattice import two_section_indices


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nmax", type=int, default=16)
    ap.add_argument("--sample", type=int, default=200, help="polygons per knotting experiment")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out")
    a = ap.parse_args()
    t0 = time.monotonic()
    res = {}

    all_ = enumerate_polygons(n_max=a.nmax).totals()
    no2 = count_no_2section(n_max=a.nmax).totals()
    res["counts"] = {n: {"all": all_[n], "no_2sections": no2.get(n, 0)} for n in sorted(all_)}
    for n, row in res["counts"].items():
        print(f"n={n:3d}  p_n={row['all']:>10d}  no-2-section={row['no_2sections']:>8d}  (1/n)log p_n={math.log(row['all']) / n:.6f}")

    full = patterns.generate_one_patterns()
    rest = patterns.restrict_no_2sections(full)
    res["kappa"] = spectral.growth_rate(full)
    res["kappa_hat"] = spectral.growth_rate(rest)
    nb = spectral.norm_power_bound_detail(spectral.evaluate(rest, "T", 0.64), 10)
    res["norm_bound"] = {"value": nb.value, "certified": nb.certified}
    res["lower_bound_column"] = spectral.lower_bound_column(all_)
    print(f"kappa={res['kappa']:.14f}  kappa_hat={res['kappa_hat']:.14f}  bound={nb.certified:.10f}")

    # knotting: insert the trefoil pattern at a random 2-section of census polygons
    rng = random.Random(a.seed)
    pat = blocks.make_trefoil_pattern()
    pool = [p for p in generate_polygons(n_max=min(a.nmax, 12)) if two_section_indices(p)]
    kinds = {}
    for p in rng.sample(pool, min(a.sample, len(pool))):
        q = blocks.insert_pattern_at_2section(p, rng.choice(two_section_indices(p)), pat)
        lt = str(diagram.classify_polygon(q))
        kinds[lt] = kinds.get(lt, 0) + 1
    res["trefoil_insertions"] = kinds
    print("trefoil insertions:", kinds)

    res["seconds"] = round(time.monotonic() - t0, 1)
    if a.out:
        with open(a.out, "w") as f:
            json.dump(res, f, indent=1, sort_keys=True)


if __name__ == "__main__":
    main()
