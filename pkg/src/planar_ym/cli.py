"""Command-line interface: ``python3 -m planar_ym <command> ...``.

Exit codes: 0 success, 1 a verification failed, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import replace

import numpy as np

from . import braid as br
from . import groups as gp
from . import index as ix
from . import levy as lv
from . import suite
from . import yangmills as ym
from .config import (
    ConfigError,
    RunConfig,
    build_graph,
    build_levy_from,
    build_tree,
    default_threads,
    parse_areas,
    parse_grid,
    resolve_loops,
)


class UsageError(ValueError):
    pass


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="JSON run configuration")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--threads", type=int, help="worker threads (default: available cores)")
    p.add_argument("--grid", metavar="WxH", help="use the built-in grid graph")
    p.add_argument("--group", metavar="SPEC", help="finite group, e.g. S3, Z4")
    p.add_argument("--areas", metavar="LIST", help="comma-separated face areas")
    p.add_argument("--loops", metavar="LIST", help="e.g. L(0,0),L(0,2-strip),F(1),[1,2,-3]")
    p.add_argument("--samples", type=int, help="Monte Carlo sample count")
    p.add_argument("--out", metavar="PATH", help="write the result here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="planar-ym", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("faces", help="list the faces of a graph")
    _common(p)
    p.add_argument("--emit", metavar="PATH", help="also write the graph as JSON")

    p = sub.add_parser("sample", help="sample holonomy fields (JSON: edge id -> element)")
    _common(p)

    for name, text in (("law-lasso", "exact loop law from face increments"),
                       ("law-density", "exact loop law from the edge density")):
        p = sub.add_parser(name, help=text)
        _common(p)
        p.add_argument("--raw", action="store_true", help="tabulate raw tuples, not conjugacy classes")

    p = sub.add_parser("wilson", help="Monte Carlo Wilson loop expectation")
    _common(p)
    p.add_argument("--observable", choices=["identity", "character", "cos"], default=None,
                   help="identity: all holonomies trivial; character: product of permutation "
                        "characters; cos: cosine of the summed angles (circle)")
    p.add_argument("--circle", metavar="SIGMA2[,DRIFT]", help="Brownian motion on the circle")

    p = sub.add_parser("braid", help="braid actions and basis-change search")
    _common(p)
    p.add_argument("--braid", metavar="[i,...]", help="braid word, e.g. [1,-2,1]")
    p.add_argument("--elements", metavar="LABELS", help="tuple to act on, e.g. '(12) (13)'")
    p.add_argument("--strands", type=int, help="act on free generators of this rank")
    p.add_argument("--search", action="store_true", help="find the grid(2,2) facial basis-change braid")
    p.add_argument("--max-len", type=int, default=8)

    p = sub.add_parser("winding", help="winding numbers and integrated index")
    _common(p)
    p.add_argument("--polyline", metavar="PTS", help="closed polyline 'x,y;x,y;...' or a JSON file")
    p.add_argument("--point", metavar="X,Y")
    p.add_argument("--drift", type=float, help="also print the index phase D * integral")

    p = sub.add_parser("mixing", help="total variation of convolution powers to Haar")
    _common(p)
    p.add_argument("--measure", metavar="LAW", help="'label:weight,...' (default: lazy transpositions)")
    p.add_argument("--n-max", type=int, default=30)
    p.add_argument("--tol", type=float, default=0.01)

    p = sub.add_parser("verify", help="run the verification suite")
    _common(p)
    p.add_argument("--all", action="store_true", help="run every check (default)")
    p.add_argument("--only", metavar="NAMES", help="comma-separated check names")
    return parser


def load_config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    if args.grid:
        cfg = replace(cfg, graph={"grid": parse_grid(args.grid)})
    if args.group:
        cfg = replace(cfg, group=args.group)
    if args.areas:
        cfg = replace(cfg, areas=parse_areas(args.areas))
    if args.loops:
        cfg = replace(cfg, loops=[args.loops])
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.samples is not None:
        if args.samples < 1:
            raise UsageError("--samples must be positive")
        cfg = replace(cfg, samples=args.samples)
    threads = args.threads if args.threads is not None else (None if args.config else default_threads())
    if threads is not None:
        if threads < 1:
            raise UsageError("--threads must be positive")
        cfg = replace(cfg, threads=threads)
    return cfg


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _setup(cfg: RunConfig):
    g = build_graph(cfg)
    T = build_tree(cfg, g)
    if cfg.areas is not None and len(cfg.areas) != len(g.bounded_faces):
        raise ConfigError(f"{len(cfg.areas)} areas given for {len(g.bounded_faces)} bounded faces")
    return g, T


# -- commands --------------------------------------------------------------------

def cmd_faces(args, cfg) -> int:
    g = build_graph(cfg)
    areas = g.face_areas(cfg.areas)
    faces = []
    for f in g.faces:
        faces.append({
            "index": f.index,
            "bounded": f.bounded,
            "key": f.key,
            "boundary": [g.external_dart(d) for d in f.boundary],
            "area": float(areas[f.index]) if f.bounded else None,
        })
    if args.emit:
        with open(args.emit, "w") as fh:
            json.dump(g.to_json(), fh, indent=1, sort_keys=True)
    if args.out:
        _emit(json.dumps({"faces": faces}, indent=1, sort_keys=True) + "\n", args.out)
    else:
        for f in faces:
            kind = "bounded" if f["bounded"] else "unbounded"
            area = f"{f['area']:.17g}" if f["bounded"] else "-"
            print(f"{f['index']}\t{kind}\tarea={area}\tboundary={f['key'] if f['bounded'] else f['boundary']}")
        print(f"{len(g.bounded_faces)} bounded, 1 unbounded")
    return 0


def cmd_sample(args, cfg) -> int:
    g, T = _setup(cfg)
    levy = build_levy_from(cfg)
    rng = np.random.default_rng(cfg.seed)
    n = args.samples or 1
    vals = ym.sample_fields(g, T, cfg.areas, levy, rng, n)
    fields = [ym.HolonomyField(g, levy.group, v).to_json() for v in vals]
    out = fields[0] if n == 1 else fields
    _emit(json.dumps(out, indent=1, sort_keys=True) + "\n", args.out)
    return 0


def _finite_levy(cfg):
    levy = build_levy_from(cfg)
    if not isinstance(levy, lv.JumpMeasure):
        raise ConfigError("exact laws need a finite group")
    return levy


def cmd_law(args, cfg, kind: str) -> int:
    g, T = _setup(cfg)
    levy = _finite_levy(cfg)
    names, loops = resolve_loops(cfg, g, T)
    if kind == "lasso":
        law = ym.exact_lasso_law(g, T, cfg.areas, levy, loops, canonical=not args.raw, names=names)
    else:
        G = levy.group
        gauge = None
        if not args.raw and G.order ** g.n_edges > ym.ENUMERATION_BUDGET:
            gauge = T
        law = ym.exact_density_law(g, cfg.areas, levy, loops, canonical=not args.raw,
                                   names=names, gauge_tree=gauge)
    _emit(law.to_csv(), args.out)
    return 0


def _observable(name, levy, k):
    if isinstance(levy, lv.CircleLevy):
        if name not in (None, "cos"):
            raise UsageError("the circle group supports --observable cos only")
        return lambda X: np.cos(X.sum(axis=1))
    G = levy.group
    if name in (None, "identity"):
        return lambda X: np.all(X == G.identity, axis=1).astype(float)
    if name == "character":
        perms = getattr(G, "_perms", None)
        if perms is not None:
            chi = (np.asarray(perms) == np.arange(np.asarray(perms).shape[1])).sum(axis=1).astype(float)
        elif G.is_abelian() and G.name.startswith("Z"):
            chi = np.cos(2 * np.pi * np.arange(G.order) / G.order)
        else:
            raise UsageError(f"no built-in character for {G.name}")
        return lambda X: np.prod(chi[X], axis=1)
    raise UsageError(f"observable {name!r} needs the circle group")


def cmd_wilson(args, cfg) -> int:
    if args.circle:
        parts = [float(x) for x in args.circle.split(",")]
        cfg = replace(cfg, levy={"circle": {"sigma2": parts[0], "drift": parts[1] if len(parts) > 1 else 0.0}})
    g, T = _setup(cfg)
    levy = build_levy_from(cfg)
    names, loops = resolve_loops(cfg, g, T)
    f = _observable(args.observable, levy, len(loops))
    est = ym.wilson_estimate(g, T, cfg.areas, levy, loops, f, cfg.samples,
                             rng=cfg.seed, threads=cfg.threads)
    out = {"loops": names, "mean": est.mean, "stderr": est.stderr, "samples": est.n_samples,
           "seed": cfg.seed}
    _emit(suite._fmt(out) + "\n", args.out)
    return 0


def cmd_braid(args, cfg) -> int:
    if args.search:
        g, TA, bA, TB, bB = suite.braid_fixture()
        targets, _, _ = suite.facial_targets(g, TA, bA, TB, bB)
        beta = br.find_braid(targets, args.max_len)
        out = {"targets": [list(t) for t in targets], "artin_check": br.artin_check(targets),
               "braid": list(beta.letters) if beta is not None else None}
        _emit(json.dumps(out, sort_keys=True) + "\n", args.out)
        return 0 if beta is not None else 1
    if not args.braid:
        raise UsageError("braid needs --braid (or --search)")
    if args.elements:
        G = gp.build_group(cfg.group)
        labels = re.findall(r"\([^)]*\)|[^\s,()]+", args.elements)
        x = [G.element(lab) for lab in labels]
        beta = br.parse_braid(args.braid, len(x))
        y = br.act_on_tuple(beta, x, G)
        out = {"input": [G.label(v) for v in x], "image": [G.label(v) for v in y],
               "permutation": [p + 1 for p in br.permutation_of(beta)]}
    else:
        n = args.strands or 2
        beta = br.parse_braid(args.braid, n)
        images = br.act_on_free(beta, br.free_generators(n))
        out = {"images": [list(w) for w in images], "artin_check": br.artin_check(images),
               "permutation": [p + 1 for p in br.permutation_of(beta)]}
    _emit(json.dumps(out, sort_keys=True) + "\n", args.out)
    return 0


def _parse_points(text: str) -> np.ndarray:
    if text.strip().startswith("[") or text.endswith(".json"):
        data = json.loads(text) if text.strip().startswith("[") else json.load(open(text))
        return np.asarray(data, dtype=float)
    try:
        return np.array([[float(c) for c in p.split(",")] for p in text.split(";") if p.strip()])
    except ValueError:
        raise UsageError(f"cannot parse points {text!r}") from None


def cmd_winding(args, cfg) -> int:
    if args.polyline:
        pts = _parse_points(args.polyline)
        out = {"integrated_index": ix.polyline_integrated_index(pts)}
        if args.point:
            out["winding"] = ix.winding_number(pts, _parse_points(args.point)[0])
        _emit(suite._fmt(out) + "\n", args.out)
        return 0
    g, T = _setup(cfg)
    names, loops = resolve_loops(cfg, g, T)
    rows = []
    for name, word in zip(names, loops):
        row = {"loop": name, "windings": ix.windings(g, word).tolist(),
               "integrated_index": ix.integrated_index(g, word, cfg.areas)}
        if args.drift is not None:
            row["phase"] = ix.index_holonomy(g, word, args.drift, cfg.areas)
        if args.point:
            row["winding_at_point"] = ix.winding_number(g.path_points(word), _parse_points(args.point)[0])
        rows.append(row)
    _emit(suite._fmt(rows) + "\n", args.out)
    return 0


def cmd_mixing(args, cfg) -> int:
    G = gp.build_group(cfg.group)
    p = np.zeros(G.order)
    if args.measure:
        for item in args.measure.split(","):
            lab, _, w = item.rpartition(":")
            p[G.element(lab.strip())] += float(w)
    else:
        p[G.identity] = 0.5
        perms = getattr(G, "_perms", None)
        if perms is None:
            raise UsageError("give --measure for groups other than S_n")
        moved = (np.asarray(perms) != np.arange(np.asarray(perms).shape[1])).sum(axis=1)
        trans = np.flatnonzero(moved == 2)
        p[trans] += 0.5 / len(trans)
    if not np.isclose(p.sum(), 1.0) or (p < 0).any():
        raise UsageError("measure weights must be non-negative and sum to 1")
    res = lv.itokawada_mixing(G, p, args.n_max, args.tol)
    lines = ["n,tv"] + [f"{n},{d:.17g}" for n, d in enumerate(res.trace, start=1)]
    _emit("\n".join(lines) + "\n", args.out)
    if res.degenerate:
        print("warning: support generates a proper subgroup or misses the identity", file=sys.stderr)
    return 0


def cmd_verify(args, cfg) -> int:
    only = [s.strip() for s in args.only.split(",")] if args.only else None
    if only:
        known = {name for name, _ in suite.SUITE}
        bad = [s for s in only if s not in known]
        if bad:
            raise UsageError(f"unknown check(s) {bad}; known: {sorted(known)}")
    samples = args.samples if args.samples is not None else 10 ** 6
    conf = suite.SuiteConfig(seed=cfg.seed if args.seed is not None or args.config else 7,
                             threads=cfg.threads, wilson_samples=samples)
    reports = suite.run_all(conf, only)
    text = suite.reports_json(reports, conf.seed)
    if args.out:
        _emit(text, args.out)
    sys.stdout.write(suite.reports_text(reports))
    return 0 if all(r.passed for r in reports) else 1


COMMANDS = {
    "faces": cmd_faces,
    "sample": cmd_sample,
    "law-lasso": lambda a, c: cmd_law(a, c, "lasso"),
    "law-density": lambda a, c: cmd_law(a, c, "density"),
    "wilson": cmd_wilson,
    "braid": cmd_braid,
    "winding": cmd_winding,
    "mixing": cmd_mixing,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](args, cfg)
    except (ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
