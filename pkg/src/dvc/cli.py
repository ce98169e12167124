"""`dvc` command line: fmt, check, render, recommend, classify, stats.

Exit codes: 0 success, 1 diagnostics with errors, 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import __version__

EXIT_OK, EXIT_DIAG, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class _IOFailure(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise _IOFailure(f"{path}: {exc}") from None


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load(path: str):
    """Parse a script, printing diagnostics; returns None on errors."""
    from .speclang import parse_with_diagnostics

    spec, diags = parse_with_diagnostics(_read(path))
    for d in diags:
        _err(d.format(path))
    if spec is None or any(d.severity == "error" for d in diags):
        return None
    return spec


def cmd_fmt(args) -> int:
    from .speclang import print_spec

    spec = _load(args.file)
    if spec is None:
        return EXIT_DIAG
    text = print_spec(spec)
    if args.write:
        try:
            with open(args.file, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise _IOFailure(f"{args.file}: {exc}") from None
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check(args) -> int:
    from .analyze import lint
    from .speclang import validate

    spec = _load(args.file)
    if spec is None:
        return EXIT_DIAG
    diags = validate(spec)
    if not any(d.severity == "error" for d in diags):
        seen = set(diags)
        diags = diags + [d for d in lint(spec) if d not in seen]
    for d in diags:
        _err(d.format(args.file))
    return EXIT_DIAG if any(d.severity == "error" for d in diags) else EXIT_OK


def cmd_render(args) -> int:
    from .compiler import PlanError
    from .render import render_video
    from .speclang import validate

    spec = _load(args.file)
    if spec is None:
        return EXIT_DIAG
    diags = validate(spec)
    for d in diags:
        _err(d.format(args.file))
    if any(d.severity == "error" for d in diags):
        return EXIT_DIAG
    try:
        fs = render_video(spec, args.out)
    except PlanError as exc:
        _err(f"{args.file}: error[{exc.code}]: {exc}")
        return EXIT_DIAG
    except OSError as exc:
        raise _IOFailure(f"{getattr(exc, 'filename', None) or args.out}: {exc.strerror or exc}") from None
    print(f"{len(fs.files)} frames written to {args.out}")
    return EXIT_OK


def cmd_recommend(args) -> int:
    from .recommend import Context, recommend

    try:
        ctx = Context(args.from_form, args.relation, tuple(args.vis or ()))
    except ValueError as exc:
        _err(f"dvc recommend: {exc}")
        return EXIT_USAGE
    recs = recommend(ctx)
    if args.json:
        out = [{"rank": r.rank, "transition": r.transition.name, "score": r.score,
                "rationale": r.rationale} for r in recs]
        print(json.dumps(out, indent=2))
    else:
        width = max(len(r.transition.name) for r in recs)
        for r in recs:
            print(f"{r.rank:>3}  {r.transition.name:<{width}}  {r.score}  {r.rationale}")
    return EXIT_OK


def cmd_classify(args) -> int:
    from .analyze import classify, label_names, observe
    from .compiler import PlanError, plan_clip

    spec = _load(args.file)
    if spec is None:
        return EXIT_DIAG
    n = len(spec.clips)
    if not 1 <= args.clip <= n:
        _err(f"dvc classify: --clip must lie in 1..{n}")
        return EXIT_USAGE
    try:
        tl = plan_clip(spec, args.clip - 1)
    except PlanError as exc:
        _err(f"{args.file}: error[{exc.code}]: {exc}")
        return EXIT_DIAG
    names = label_names(classify(observe(tl)))
    if args.json:
        clip = spec.clips[args.clip - 1]
        print(json.dumps({"clip": args.clip, "from": clip.source, "to": clip.target,
                          "declared": [t.type.name for t in clip.transitions],
                          "labels": names}, indent=2))
    else:
        print("\n".join(names))
    return EXIT_OK


def cmd_stats(args) -> int:
    from .analyze import corpus_stats, load_labels, paper_fixture

    if args.paper_fixture == bool(args.labels):
        _err("dvc stats: give a labels file or --paper-fixture, not both")
        return EXIT_USAGE
    agreement = None
    if args.paper_fixture:
        rows, agreement = paper_fixture()
    else:
        text = _read(args.labels)
        from .analyze import parse_labels

        try:
            rows = parse_labels(text)
        except ValueError as exc:
            _err(f"{args.labels}: {exc}")
            return EXIT_DIAG
    try:
        stats = corpus_stats(rows, agreement)
    except ValueError as exc:
        _err(f"dvc stats: {exc}")
        return EXIT_DIAG
    if args.json:
        print(json.dumps(stats.to_dict(), indent=2))
    else:
        sys.stdout.write(stats.table())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dvc", description="Data-video script compiler.")
    p.add_argument("--version", action="version", version=f"dvc {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("fmt", help="print a script in canonical form")
    s.add_argument("file")
    s.add_argument("--write", action="store_true", help="rewrite the file in place")
    s.set_defaults(run=cmd_fmt)

    s = sub.add_parser("check", help="parse, validate and lint a script")
    s.add_argument("file")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("render", help="render SVG frames and a manifest")
    s.add_argument("file")
    s.add_argument("--out", required=True, help="output directory")
    s.set_defaults(run=cmd_render)

    s = sub.add_parser("recommend", help="rank transitions for an authoring context")
    s.add_argument("--from-form", dest="from_form", help="vis->vis, vis->non-vis or non-vis->vis")
    s.add_argument("--relation", help="question_answer, whole_part, progress, supplement, contrast, none")
    s.add_argument("--vis", action="append", help="chart type of either scene (repeatable)")
    s.add_argument("--json", action="store_true")
    s.set_defaults(run=cmd_recommend)

    s = sub.add_parser("classify", help="label the planned transition of one clip")
    s.add_argument("file")
    s.add_argument("--clip", type=int, required=True, help="1-based clip number")
    s.add_argument("--json", action="store_true")
    s.set_defaults(run=cmd_classify)

    s = sub.add_parser("stats", help="corpus statistics from a labels file")
    s.add_argument("labels", nargs="?", help="file of form<TAB>label[,label...] lines")
    s.add_argument("--paper-fixture", action="store_true",
                   help="use the bundled encoding of the published corpus counts")
    s.add_argument("--json", action="store_true")
    s.set_defaults(run=cmd_stats)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.run(args)
    except _IOFailure as exc:
        _err(f"dvc: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
