"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data or validation error.
Set ``PATHMODEL_LOG`` to ``quiet``, ``info`` or ``debug`` for log verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

from . import store, synth
from .correct import correct_path
from .errors import PathModelError
from .gmodel import DEFAULT_FILTER_SIGMA, ModelLibrary, build_model
from .recognize import confusion_matrix, recognize
from .tune import parse_grid, tune_epsilon

log = logging.getLogger("pathmodel")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

_LOG_LEVELS = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def cmd_gen(args) -> None:
    if args.sets < 1:
        raise UsageError("--sets must be >= 1")
    spec = synth.ShapeSpec(args.shape, n_points=args.points)
    sets = synth.teaching_sets(spec, count=args.sets, noise_fraction=args.noise_rel, seed=args.seed)
    store.save_path_set(args.out, store.PathSet(label=args.label or args.shape, sets=sets))
    print(f"wrote {len(sets)} set(s) of {args.points} points to {args.out}")


def cmd_build(args) -> None:
    if args.name and len(args.inputs) != 1:
        raise UsageError("--name needs exactly one --in file")
    existing = []
    if args.append and Path(args.out).exists():
        lib = store.load_library(args.out)
        if lib.filter_sigma != args.filter_sigma:
            raise PathModelError(
                f"library {args.out} uses filter sigma {lib.filter_sigma}, not {args.filter_sigma}"
            )
        existing = list(lib.models)
    built = []
    for path in args.inputs:
        data = store.load_path_set(path)
        name = args.name or data.label
        try:
            model = build_model(data.sets, args.epsilon, args.filter_sigma, name=name)
        except PathModelError as exc:
            raise PathModelError(f"{path}: {exc}") from None
        log.info("built %s: %d keypoints from %d sets", name, model.keypoint_count, len(data.sets))
        built.append(model)
    new_names = {m.name for m in built}
    models = [m for m in existing if m.name not in new_names] + built
    store.save_library(args.out, ModelLibrary(tuple(models), filter_sigma=args.filter_sigma))
    print(f"wrote {len(models)} model(s) to {args.out}")


def _first_set(path):
    data = store.load_path_set(path)
    if not data.sets:
        raise PathModelError(f"{path}: no path sets")
    return data, data.sets[0]


def cmd_recognize(args) -> None:
    lib = store.load_library(args.lib)
    data = store.load_path_set(args.demo)
    report = []
    for i, demo in enumerate(data.sets):
        result = recognize(demo, lib)
        print(f"demo {data.label}[{i}]: best = {result.best.name} ({result.best.variant})")
        rows = []
        for rank, cand in enumerate(result.ranked, 1):
            flag = "  (demo too short)" if cand.too_short else ""
            print(f"  {rank:3d}  {cand.name:<20s} {str(cand.variant):<8s} {cand.score: .6f}{flag}")
            # -inf is not valid JSON
            score = cand.score if math.isfinite(cand.score) else None
            rows.append({"name": cand.name, "variant": str(cand.variant), "score": score,
                         "too_short": cand.too_short})
        report.append({"demo": f"{data.label}[{i}]", "best": result.best.name,
                       "best_variant": str(result.best.variant), "ranked": rows})
    if args.report:
        text = json.dumps(report, indent=1, allow_nan=False)
        Path(args.report).write_text(text + "\n", encoding="utf-8")


def cmd_decanon(args) -> None:
    lib = store.load_library(args.lib)
    if args.model not in lib.names:
        raise PathModelError(f"model {args.model!r} not in library {args.lib}")
    _, demo = _first_set(args.demo)
    result = recognize(demo, lib)
    points = result.localize(args.model)
    store.save_path_set(args.out, store.PathSet(label=args.model, sets=[points]))
    print(f"wrote {len(points)} keypoints of {args.model} ({result.best_for(args.model).variant}) to {args.out}")


def cmd_correct(args) -> None:
    lib = store.load_library(args.lib)
    _, demo = _first_set(args.demo)
    _, correction = _first_set(args.correction)
    result = recognize(demo, lib)
    best = result.best
    out = correct_path(best.model, correction, args.epsilon, result.demo_params)
    first, last = out.redundant_range
    store.save_path_set(args.out, store.PathSet(label=f"{best.name}-corrected", sets=[out.corrected]))
    print(f"recognized {best.name} ({best.variant}); replaced keypoints {first}..{last} "
          f"with {len(out.correction_keypoints)} correction keypoints; wrote {args.out}")


def cmd_tune(args) -> None:
    lib = store.load_library(args.lib)
    teach = store.load_path_set(args.teach)
    _, demo = _first_set(args.demo)
    grid = parse_grid(args.grid)
    others = [m for m in lib.models if m.name != teach.label]
    curve = tune_epsilon(teach.sets, demo, others, grid, lib.filter_sigma, name=teach.label)
    Path(args.out).write_text(curve.to_csv(), encoding="utf-8")
    print(f"selected epsilon {curve.selected_epsilon!r}; wrote {args.out}")


def cmd_matrix(args) -> None:
    lib = store.load_library(args.lib)
    demos = []
    for path in args.demos:
        data = store.load_path_set(path)
        if len(data.sets) == 1:
            demos.append((data.label, data.sets[0]))
        else:
            demos.extend((f"{data.label}[{i}]", s) for i, s in enumerate(data.sets))
    cm = confusion_matrix(demos, lib)
    Path(args.out).write_text(cm.to_csv(), encoding="utf-8")
    print(f"{cm.misclassifications()} misclassification(s) over {len(demos)} demo(s); wrote {args.out}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pathmodel", description="Gaussian path models from demonstrated 3-D paths.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate synthetic path sets")
    g.add_argument("--shape", required=True, choices=synth.SHAPES)
    g.add_argument("--sets", type=int, default=synth.DEFAULT_TEACHING_SETS)
    g.add_argument("--points", type=int, default=200)
    g.add_argument("--noise-rel", type=float, default=synth.DEFAULT_NOISE_FRACTION,
                   help="noise sigma as a fraction of the bounding-box diagonal")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--label", help="label stored in the file (default: shape name)")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("build", help="build models from teaching path sets (one model per file)")
    b.add_argument("--in", dest="inputs", nargs="+", required=True)
    b.add_argument("--epsilon", type=float, required=True, help="RDP tolerance in canonical units")
    b.add_argument("--filter-sigma", type=float, default=DEFAULT_FILTER_SIGMA)
    b.add_argument("--name", help="model name (default: the file's label)")
    b.add_argument("--append", action="store_true", help="add to an existing library")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build)

    r = sub.add_parser("recognize", help="rank library models against demonstrations")
    r.add_argument("--lib", required=True)
    r.add_argument("--demo", required=True)
    r.add_argument("--report")
    r.set_defaults(func=cmd_recognize)

    d = sub.add_parser("decanon", help="emit a model's keypoints in demonstration coordinates")
    d.add_argument("--lib", required=True)
    d.add_argument("--demo", required=True)
    d.add_argument("--model", required=True)
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_decanon)

    c = sub.add_parser("correct", help="splice a demonstrated correction into the recognized path")
    c.add_argument("--lib", required=True)
    c.add_argument("--demo", required=True)
    c.add_argument("--correction", required=True)
    c.add_argument("--epsilon", type=float, required=True, help="RDP tolerance in demonstration units")
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_correct)

    t = sub.add_parser("tune", help="sweep the RDP tolerance for one path")
    t.add_argument("--teach", required=True)
    t.add_argument("--demo", required=True)
    t.add_argument("--lib", required=True, help="library holding the other (incorrect) models")
    t.add_argument("--grid", required=True, help="start:stop:step")
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_tune)

    m = sub.add_parser("matrix", help="best-score matrix of models against demonstrations")
    m.add_argument("--lib", required=True)
    m.add_argument("--demos", nargs="+", required=True)
    m.add_argument("--out", required=True)
    m.set_defaults(func=cmd_matrix)
    return p


def _setup_logging() -> None:
    level = _LOG_LEVELS.get(os.environ.get("PATHMODEL_LOG", "quiet").lower(), logging.ERROR)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def run(argv=None) -> int:
    _setup_logging()
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    where = f"pathmodel {args.command}"
    try:
        args.func(args)
    except UsageError as exc:
        print(f"{where}: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PathModelError, OSError) as exc:
        print(f"{where}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def main() -> None:
    sys.exit(run())
