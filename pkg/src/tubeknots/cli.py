"""Command-line entry point: `python3 -m tubeknots.cli <command> ...` or `tubeknots <command>`.

Scalar results are printed as one JSON document, record streams as JSON
lines, count tables as CSV by default.  Exit codes: 0 ok, 1 a check failed,
2 usage or input error, 3 resource limit, 70 internal invariant violated.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
import traceback
from pathlib import Path

from . import blocks, braid, diagram, patterns, spectral, verify
from .enumerate import Budget, EnumerationConfig, generate_polygons, run_enumeration
from .errors import InvariantViolation, ResourceLimit, TubeKnotError
from .lattice import TubeDims, read_polygons, two_section_indices, write_polygons

EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE, EXIT_INTERNAL = 1, 2, 3, 70
LONG_RUN_N = 20


class UsageError(Exception):
    pass


@dataclasses.dataclass
class RunConfig:
    command: str
    dims: TubeDims = dataclasses.field(default_factory=lambda: TubeDims(2, 1))
    n_max: int | None = None
    tol: float = 1e-12
    shards: int = 1
    shard: int = 0
    input: str | None = None
    output: str | None = None
    budget: float | None = None

    def __post_init__(self):
        if self.n_max is not None and self.n_max >= LONG_RUN_N and self.budget is None:
            raise UsageError(f"runs with n >= {LONG_RUN_N} need an explicit --budget SECONDS")
        if self.budget is not None and self.budget <= 0:
            raise UsageError("--budget must be positive")
        if not 0 <= self.shard < self.shards:
            raise UsageError("--shard must lie in 0..shards-1")


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):  # numpy scalars
        return x.item()
    return x


def _emit(doc, out=None) -> None:
    text = json.dumps(_jsonable(doc), sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _polygons_in(path: str | None, dims: TubeDims):
    if path is None or path == "-":
        yield from read_polygons(sys.stdin, dims)
        return
    with open(path) as fh:
        yield from read_polygons(fh, dims)


def _system(dims: TubeDims, restricted: bool):
    sys_ = patterns.generate_one_patterns(dims)
    return patterns.restrict_no_2sections(sys_) if restricted else sys_


# ------------------------------------------------------------- commands


def cmd_enumerate(a, cfg: RunConfig) -> int:
    ecfg = EnumerationConfig(cfg.dims, cfg.n_max, a.filter, cfg.shards, cfg.shard, cfg.budget)
    if a.emit:
        budget = Budget(cfg.budget)
        with open(a.emit, "w") as fh:
            write_polygons(fh, generate_polygons(cfg.dims, cfg.n_max, a.filter, budget))
    if a.workers > 1:
        if a.checkpoint or cfg.shards > 1:
            raise UsageError("--workers runs every shard itself; drop --shards/--checkpoint")
        table = _parallel_count(ecfg, a.workers)
    else:
        table = run_enumeration(ecfg, a.checkpoint)
    if a.format == "json":
        _emit({"config": ecfg.key(), "totals": table.totals(), "counts": table.to_json()["counts"]}, cfg.output)
    else:
        text = table.to_csv(by_span=a.by_span)
        if cfg.output:
            Path(cfg.output).write_text(text)
        else:
            sys.stdout.write(text)
    return 0


def _parallel_count(ecfg: EnumerationConfig, workers: int):
    from concurrent.futures import ProcessPoolExecutor

    parts = [dataclasses.replace(ecfg, shards=workers, shard=i) for i in range(workers)]
    with ProcessPoolExecutor(workers) as ex:
        tables = list(ex.map(run_enumeration, parts))
    out = tables[0]
    for t in tables[1:]:
        out = out.merge(t)
    return out


def cmd_growth(a, cfg: RunConfig) -> int:
    t = time.monotonic()
    g = spectral.growth_rate_detail(_system(cfg.dims, a.restricted), cfg.tol)
    _emit(
        {
            "dims": str(cfg.dims),
            "restricted": a.restricted,
            "kappa": g.kappa,
            "x0": g.x0,
            "bisection_steps": g.bisection_steps,
            "eigen_iterations": g.eigen_iterations,
            "seconds": round(time.monotonic() - t, 3),
        },
        cfg.output,
    )
    return 0


def cmd_bound(a, cfg: RunConfig) -> int:
    import math

    s = _system(cfg.dims, not a.unrestricted)
    nb = spectral.norm_power_bound_detail(spectral.evaluate(s, "T", a.x), a.k)
    _emit(
        {
            "x": a.x,
            "k": a.k,
            "restricted": not a.unrestricted,
            "value": nb.value,
            "rounding_budget": nb.rounding_budget,
            "certified": nb.certified,
            "below_one": bool(nb.certified < 1),
            "kappa_bound": -math.log(a.x) if nb.certified < 1 else None,
        },
        cfg.output,
    )
    return 0


def cmd_lower_bound(a, cfg: RunConfig) -> int:
    if a.counts:
        counts = {}
        for line in Path(a.counts).read_text().splitlines()[1:]:
            fields = line.split(",")
            counts[int(fields[0])] = counts.get(int(fields[0]), 0) + int(fields[-1])
    else:
        from .enumerate import enumerate_polygons

        counts = enumerate_polygons(cfg.dims, cfg.n_max or 18, budget=Budget(cfg.budget)).totals()
    col = spectral.lower_bound_column(counts)
    doc = {"column": col, "best": max(col.values())}
    if a.n is not None:
        doc["n"] = a.n
        doc["value"] = spectral.unknot_lower_bound(counts, a.n)
    _emit(doc, cfg.output)
    return 0


def cmd_patterns(a, cfg: RunConfig) -> int:
    _emit(_system(cfg.dims, a.restricted).to_json(), cfg.output)
    return 0


def _classify_record(p) -> dict:
    lt = diagram.classify_polygon(p)
    return {
        "n": p.n,
        "span": p.span,
        "link_type": str(lt),
        "f_L": lt.f_L,
        "linked_part_size": diagram.size_of_linked_part(p),
        "factors": [{"alpha": f.alpha, "beta": f.beta} for f in lt.factors],
    }


def _stream(records, out) -> int:
    fh = open(out, "w") if out else sys.stdout
    try:
        n = 0
        for r in records:
            fh.write(json.dumps(_jsonable(r), sort_keys=True) + "\n")
            n += 1
    finally:
        if out:
            fh.close()
    return n


def cmd_classify(a, cfg: RunConfig) -> int:
    _stream((_classify_record(p) for p in _polygons_in(cfg.input, cfg.dims)), cfg.output)
    return 0


def cmd_unknot(a, cfg: RunConfig) -> int:
    def recs():
        for p in _polygons_in(cfg.input, cfg.dims):
            lt = diagram.classify_polygon(p)
            if lt.is_unknot:
                yield {"n": p.n, "link_type": "unknot", "insertions": [], "result": p.to_text()}
                continue
            u, ins = diagram.unknot_polygon(p)
            if not diagram.classify_polygon(u).is_unknot:
                raise InvariantViolation("unknotting insertion did not give an unknot")
            yield {
                "n": p.n,
                "link_type": str(lt),
                "insertions": [{"section": i.section, "word": str(i.word), "variant": i.variant, "span": i.block.span} for i in ins],
                "result": u.to_text(),
            }

    _stream(recs(), cfg.output)
    return 0


def _diagram_arg(a) -> braid.PlatDiagram:
    if a.knot:
        if a.knot in braid.KNOWN:
            return braid.KNOWN[a.knot].diagram()
        return braid.ConwayForm.parse(a.knot).diagram()
    if a.diagram:
        return braid.PlatDiagram.parse(a.diagram)
    raise UsageError("give --knot or --diagram")


def cmd_braid(a, cfg: RunConfig) -> int:
    d = _diagram_arg(a)
    if a.action == "normal-form":
        c = braid.conway_normal_form(d)
        _emit({"diagram": str(d), "normal_form": str(c), "crossings": c.crossings}, cfg.output)
    elif a.action == "classify":
        lt = braid.classify_plat(d)
        _emit({"diagram": str(d), "link_type": lt.to_json(), "text": str(lt), "determinant": braid.determinant_oracle(d)}, cfg.output)
    else:
        c = braid.conway_normal_form(d)
        w0 = braid.BraidWord.parse(a.word) if a.word else braid.unknotting_word(c)
        pos, v = braid.find_unknotting_insertion(d, w0)
        res = braid.insert_word(d, pos, braid.variant(w0, v))
        if not braid.classify_plat(res).is_unknot:
            raise InvariantViolation("insertion search returned a non-unknotting insertion")
        _emit({"diagram": str(d), "w0": str(w0), "position": pos, "variant": v, "result": str(res)}, cfg.output)
    return 0


def cmd_surgery(a, cfg: RunConfig) -> int:
    polys = list(_polygons_in(cfg.input, cfg.dims))
    if not polys:
        raise UsageError("no input polygons")
    p = polys[0]
    if a.action == "insert-pattern":
        k = a.section if a.section is not None else min(two_section_indices(p), default=None)
        if k is None:
            raise UsageError("polygon has no 2-section")
        q = blocks.insert_pattern_at_2section(p, k, blocks.make_trefoil_pattern())
        doc = {"section": k, "result": q.to_text(), "n": q.n, "link_type": str(diagram.classify_polygon(q))}
    elif a.action == "split":
        p1, p2 = blocks.split_first_2section(p)
        doc = {"left": p1.to_text(), "right": p2.to_text(), "lengths": [p1.n, p2.n], "D": blocks.SPLIT_D}
    elif a.action == "concat":
        if len(polys) < 2:
            raise UsageError("concat needs two polygons")
        q = blocks.concatenate(polys[0], polys[1], a.mode)
        doc = {"mode": a.mode, "result": q.to_text(), "n": q.n, "span": q.span}
    elif a.action == "remove-2sections":
        r = blocks.remove_2sections(p)
        doc = {"result": r.polygon.to_text(), "n": r.polygon.n, "t": r.t, "lengths": list(r.lengths), "E": blocks.COMBINE_E}
    else:
        sites = blocks.uv_sites(p)
        if not sites:
            raise UsageError("no U or V pattern in the polygon")
        k = a.section if a.section is not None else sites[0][0]
        q = blocks.interchange_UV(p, k)
        doc = {"hinge": k, "result": q.to_text(), "n": q.n}
    _emit(doc, cfg.output)
    return 0


def cmd_verify(a, cfg: RunConfig) -> int:
    vcfg = verify.VerifyConfig(fast=a.fast, extended=a.extended)
    only = {int(x) for x in a.only.split(",")} if a.only else None
    checks = verify.run_all(vcfg, only)
    for c in checks:
        print(c.line(), file=sys.stderr)
    _emit({"fast": a.fast, "passed": all(c.passed for c in checks), "checks": [dataclasses.asdict(c) for c in checks]}, cfg.output)
    return 0 if all(c.passed for c in checks) else EXIT_FAIL


# --------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tubeknots", description="Knotted polygons in the 2x1 lattice tube.")
    ap.add_argument("--output", "-o", help="write the result here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    def dims(p):
        p.add_argument("--dims", default="2x1", help="tube size M1xM2")

    p = sub.add_parser("enumerate", help="count (and optionally emit) polygons")
    dims(p)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--filter", choices=["none", "no-2-sections"], default="none")
    p.add_argument("--by-span", action="store_true")
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--shard", type=int, default=0)
    p.add_argument("--checkpoint")
    p.add_argument("--emit", help="also write every polygon to this file")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--workers", type=int, default=1, help="count shards in this many processes")
    p.add_argument("--budget", type=float, help="seconds; required for n >= 20")

    p = sub.add_parser("growth", help="growth rate from the transfer matrix")
    dims(p)
    p.add_argument("--restricted", action="store_true", help="polygons without 2-sections")
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("bound", help="certified norm bound ||T(x)^k||^(1/k) for the restricted system")
    dims(p)
    p.add_argument("--x", type=float, default=0.64)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--unrestricted", action="store_true")

    p = sub.add_parser("lower-bound", help="(1/n) log p_{n-6} column")
    dims(p)
    p.add_argument("--n", type=int)
    p.add_argument("--nmax", type=int, help="enumerate counts up to this length (default 18)")
    p.add_argument("--counts", help="CSV n,count or n,span,count instead of enumerating")
    p.add_argument("--budget", type=float)

    p = sub.add_parser("patterns", help="dump the transfer system")
    p.add_argument("action", choices=["dump"])
    dims(p)
    p.add_argument("--restricted", action="store_true")

    for name, hlp in (("classify", "classify polygons (JSON lines)"), ("unknot", "unknot polygons by braid insertion")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("--in", dest="input", default="-")
        p.add_argument("--out", dest="out")

    p = sub.add_parser("braid", help="4-plat diagrams")
    p.add_argument("action", choices=["normal-form", "classify", "unknot-insert"])
    p.add_argument("--knot", help="a name such as 3_1 or a Conway form C(2,2)")
    p.add_argument("--diagram", help="plat diagram text, e.g. '[1| s1 s1 s1 |1]'")
    p.add_argument("--word", help="w0 to insert (default: derived from the normal form)")

    p = sub.add_parser("surgery", help="lattice surgery on the first input polygon")
    p.add_argument("action", choices=["insert-pattern", "split", "concat", "remove-2sections", "uv"])
    p.add_argument("--in", dest="input", default="-")
    p.add_argument("--mode", choices=["no2section", "plain"], default="no2section")
    p.add_argument("--section", type=int)

    p = sub.add_parser("verify-paper", help="run the acceptance suite")
    p.add_argument("--fast", action="store_true")
    p.add_argument("--extended", action="store_true", help="also count n = 20..24")
    p.add_argument("--only", help="comma-separated criterion numbers")
    return ap


COMMANDS = {
    "enumerate": cmd_enumerate,
    "growth": cmd_growth,
    "bound": cmd_bound,
    "lower-bound": cmd_lower_bound,
    "patterns": cmd_patterns,
    "classify": cmd_classify,
    "unknot": cmd_unknot,
    "braid": cmd_braid,
    "surgery": cmd_surgery,
    "verify-paper": cmd_verify,
}


def run(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig(
            command=a.command,
            dims=TubeDims.parse(getattr(a, "dims", "2x1")),
            n_max=getattr(a, "nmax", None),
            tol=getattr(a, "tol", 1e-12),
            shards=getattr(a, "shards", 1),
            shard=getattr(a, "shard", 0),
            input=getattr(a, "input", None),
            output=getattr(a, "out", None) or a.output,
            budget=getattr(a, "budget", None),
        )
        return COMMANDS[a.command](a, cfg)
    except BrokenPipeError:
        raise
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        traceback.print_exc()
        return EXIT_INTERNAL
    except TubeKnotError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream closed early, e.g. `| head`
        sys.stdout = None
        code = 0
    sys.exit(code)


if __name__ == "__main__":
    main()
