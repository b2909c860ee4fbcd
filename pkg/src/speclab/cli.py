"""Batch command line front end.

Word syntax: lowercase letters are generators, uppercase their inverses;
`a b A B` and `abAB` are the same word.  Every randomized command takes a
mandatory --seed and is byte-reproducible.  Enumerated class lists are
cached under $SPECLAB_CACHE_DIR when set.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from . import boundary, characters, fricke, surface_group as sg
# NB: `speclab.spectrum` the attribute is the spectrum() function (it shadows
# the submodule), so pull what we need from the submodule directly.
from .spectrum import (
    pattern as length_pattern,
    rows_to_csv,
    scan_generic,
    spectrum as length_spectrum,
    subrelation,
)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_VERIFICATION_FAILED = 2


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _out(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _config_digest(payload: dict) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]


def _load_rep(args) -> fricke.SurfaceRep:
    sources = [args.rep_file is not None, args.seed is not None]
    if sum(sources) != 1:
        raise SystemExit2("exactly one of --rep-file / --seed is required")
    if args.rep_file:
        return fricke.rep_from_json(Path(args.rep_file).read_text())
    return fricke.schottky_sample(args.seed, args.rank)


class SystemExit2(Exception):
    pass


def _cached_classes(pres: sg.Presentation, maxlen: int):
    cache_dir = os.environ.get("SPECLAB_CACHE_DIR")
    if not cache_dir:
        return sg.enumerate_classes(pres, maxlen)
    key = _config_digest({"g": pres.genus, "n": pres.punctures, "maxlen": maxlen})
    path = Path(cache_dir) / f"classes-{key}.txt"
    if path.exists():
        words = []
        for line in path.read_text().splitlines():
            if line.strip():
                words.append(sg.parse_word(line, pres))
        return [sg.canonical_class(w, pres) for w in words]
    classes = sg.enumerate_classes(pres, maxlen)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(sg.format_word(k.word, pres) for k in classes) + "\n")
    return classes


# -- subcommands -------------------------------------------------------------

def cmd_sample(args) -> int:
    rep = fricke.schottky_sample(args.seed, args.rank)
    _out(args, fricke.rep_to_json(rep) + "\n")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    rep = _load_rep(args)
    classes = _cached_classes(rep.presentation, args.maxlen)
    s = length_spectrum(rep, args.maxlen, args.tolerance, classes=classes)
    if args.format == "csv":
        _out(args, rows_to_csv(s.as_rows()))
    else:
        lines = []
        for key, t, l in s.as_rows():
            lines.append(
                json.dumps(
                    {
                        "class": sg.format_word(key.word, rep.presentation),
                        "trace": _fmt(t),
                        "length": _fmt(l),
                    },
                    sort_keys=True,
                )
            )
        _out(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_pattern(args) -> int:
    rep = _load_rep(args)
    classes = _cached_classes(rep.presentation, args.maxlen)
    s = length_spectrum(rep, args.maxlen, args.tolerance, classes=classes)
    p = length_pattern(s)
    doc = {
        "rep_digest": s.rep_digest,
        "tolerance": _fmt(p.tolerance),
        "blocks": [
            [sg.format_word(k.word, rep.presentation) for k in block] for block in p.blocks
        ],
    }
    _out(args, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_compare(args) -> int:
    rep1 = fricke.rep_from_json(Path(args.rep_file).read_text())
    rep2 = fricke.rep_from_json(Path(args.other).read_text())
    s1 = length_spectrum(rep1, args.maxlen, args.tolerance)
    s2 = length_spectrum(rep2, args.maxlen, args.tolerance)
    p1, p2 = length_pattern(s1), length_pattern(s2)
    sub = subrelation(p1, p2)
    doc = {
        "holds": sub["holds"],
        "violations": [[str(a), str(b)] for a, b in sub["violations"]],
    }
    _out(args, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if sub["holds"] else EXIT_VERIFICATION_FAILED


def cmd_tracepoly(args) -> int:
    pres = sg.Presentation(genus=1, punctures=args.rank - 1)
    w = sg.parse_word(args.word, pres)
    if not w:
        raise SystemExit2("empty word")
    p = characters.trace_poly(w, args.rank)
    _out(args, p.text() + "\n")
    return EXIT_OK


def cmd_rmin(args) -> int:
    pres = sg.Presentation(genus=1, punctures=args.rank - 1)
    words = [sg.parse_word(t, pres) for t in args.words]
    lines = []
    any_distinct = False
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            verdict = characters.rmin_test(
                words[i], words[j], args.rank, seed=args.seed, n_reps=args.samples
            )
            if verdict.kind == characters.RminVerdict.DISTINCT:
                any_distinct = True
            lines.append(
                json.dumps(
                    {"pair": [args.words[i], args.words[j]], "verdict": verdict.kind},
                    sort_keys=True,
                )
            )
    _out(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_scan(args) -> int:
    records = list(
        scan_generic(
            args.seed,
            args.trials,
            maxlen=args.maxlen,
            tol=args.tolerance,
            m=args.rank,
            include_arithmetic_point=args.arithmetic_point,
        )
    )
    text = "\n".join(json.dumps(r, sort_keys=True) for r in records) + "\n"
    _out(args, text)
    hard_fail = any(r["violations"] for r in records)
    return EXIT_VERIFICATION_FAILED if hard_fail else EXIT_OK


def cmd_cocycle_verify(args) -> int:
    rep = fricke.schottky_sample(args.seed, args.rank)
    reports = boundary.run_all_checks(rep, seed=args.seed, samples=args.samples)
    text = "\n".join(r.to_json() for r in reports) + "\n"
    _out(args, text)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFICATION_FAILED


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="speclab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, seed_required=True):
        p.add_argument("--rank", type=int, default=2, help="free rank m (default 2)")
        p.add_argument("--maxlen", type=int, default=6)
        p.add_argument("--tolerance", type=float, default=1e-9)
        p.add_argument("--seed", type=int, required=False, default=None)
        p.add_argument("--output", type=str, default=None)
        p.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
        p.add_argument("--config", type=str, default=None, help="JSON config file")

    p = sub.add_parser("sample", help="emit a certified discrete rep")
    common(p)
    p.set_defaults(fn=cmd_sample, needs_seed=True)

    p = sub.add_parser("spectrum", help="class / trace / length table")
    common(p)
    p.add_argument("--rep-file", type=str, default=None)
    p.set_defaults(fn=cmd_spectrum, needs_seed=False)

    p = sub.add_parser("pattern", help="equal-length blocks")
    common(p)
    p.add_argument("--rep-file", type=str, default=None)
    p.set_defaults(fn=cmd_pattern, needs_seed=False)

    p = sub.add_parser("compare", help="sub-relation report for two reps")
    common(p)
    p.add_argument("--rep-file", type=str, required=True)
    p.add_argument("--other", type=str, required=True)
    p.set_defaults(fn=cmd_compare, needs_seed=False)

    p = sub.add_parser("tracepoly", help="canonical character polynomial of a word")
    common(p)
    p.add_argument("--word", type=str, required=True)
    p.set_defaults(fn=cmd_tracepoly, needs_seed=False)

    p = sub.add_parser("rmin", help="pairwise minimal-relation verdicts")
    common(p)
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("words", nargs="+")
    p.set_defaults(fn=cmd_rmin, needs_seed=True)

    p = sub.add_parser("scan", help="genericity experiment")
    common(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--arithmetic-point", action="store_true")
    p.set_defaults(fn=cmd_scan, needs_seed=True)

    p = sub.add_parser("cocycle-verify", help="run the B-cocycle identity suite")
    common(p)
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(fn=cmd_cocycle_verify, needs_seed=True)

    return ap


def _apply_config(args) -> None:
    if getattr(args, "config", None):
        doc = json.loads(Path(args.config).read_text())
        for k, v in doc.items():
            setattr(args, k.replace("-", "_"), v)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        _apply_config(args)
        if getattr(args, "needs_seed", False) and args.seed is None:
            raise SystemExit2("--seed is mandatory for randomized commands")
        return args.fn(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (fricke.FrickeError, sg.WordError, FileNotFoundError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
