"""Command-line entry point: ``spaceword <command> ...``."""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path

from . import corpus as corpus_mod
from .experiment import (
    histogram_csv,
    log_spaced_cutoffs,
    offsets_csv,
    scan,
    scan_rho_csv,
    scatter_csv,
)
from .rankfreq import (
    DistMode,
    build_dist,
    dist_from_csv,
    dist_to_csv,
    escape_surface,
    rank_map,
    rank_map_to_csv,
)
from .regression import FitError, RangeError, fit_shift, quotient_series
from .simon import SimonConfig, run_vs_analytic, simulate
from .tokenizer import TokenizerConfig, decode_utf8, load_contraction_rules, tokenize

EXIT_OK, EXIT_PARTIAL, EXIT_FATAL = corpus_mod.EXIT_OK, corpus_mod.EXIT_PARTIAL, corpus_mod.EXIT_FATAL


def _read_text(path: str) -> str:
    data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    return decode_utf8(data)


def _tok_config(args) -> TokenizerConfig:
    kw = {}
    if getattr(args, "rules", None):
        kw["contraction_rules"] = load_contraction_rules(args.rules)
    if getattr(args, "collapse_runs", False):
        kw["collapse_runs"] = True
    return TokenizerConfig(**kw)


def _emit(text: str, dest: str | None) -> None:
    if dest is None or dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text, encoding="utf-8")


def _cutoffs(args, upper: int | None = None) -> list[int]:
    if args.cutoffs:
        return sorted({int(c) for c in args.cutoffs.split(",")})
    return log_spaced_cutoffs(args.cutoff_min, upper or args.cutoff_max, args.cutoff_count)


def cmd_tokenize(args) -> int:
    toks = tokenize(_read_text(args.input), _tok_config(args))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "start", "end", "kind", "surface"])
    for i, t in enumerate(toks):
        w.writerow([i, t.start, t.end, t.kind.value, escape_surface(t.surface)])
    _emit(buf.getvalue(), args.output)
    return EXIT_OK


def cmd_rankfreq(args) -> int:
    toks = tokenize(_read_text(args.input), _tok_config(args))
    integ = build_dist(toks, DistMode.Integrated)
    words = build_dist(toks, DistMode.WordOnly)
    rmap = rank_map(integ, words)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "integrated.csv").write_text(dist_to_csv(integ), encoding="utf-8")
    (out / "word_only.csv").write_text(dist_to_csv(words), encoding="utf-8")
    (out / "rank_map.csv").write_text(rank_map_to_csv(rmap, words), encoding="utf-8")
    print(f"N={len(integ)} R={len(words)} n1={rmap.n1}")
    return EXIT_OK


def cmd_fit(args) -> int:
    if args.input.endswith(".csv"):
        dist = dist_from_csv(Path(args.input).read_text(encoding="utf-8"))
    else:
        dist = build_dist(tokenize(_read_text(args.input), _tok_config(args)), args.mode)
    r_cut = min(args.rcut, len(dist)) if args.rcut else len(dist)
    try:
        res = fit_shift(quotient_series(dist, r_cut))
    except (FitError, RangeError) as exc:
        print(f"fit failed: {exc}", file=sys.stderr)
        return EXIT_FATAL
    print(json.dumps(res.to_dict()))
    return EXIT_OK


def cmd_simon(args) -> int:
    cfg = SimonConfig(args.alpha, args.steps, args.seed)
    run = simulate(cfg)
    if args.output:
        Path(args.output).write_text(run.to_csv(), encoding="utf-8")
    info = {"alpha": cfg.alpha, "steps": run.steps, "seed": cfg.seed, "rng": run.rng, "N": run.N,
            "mean_gap": float(run.gaps.mean()) if run.N > 1 else None}
    if args.compare:
        rep = run_vs_analytic(run, cfg.theta)
        d = rep.to_dict()
        if args.report:
            Path(args.report).write_text(json.dumps(d, indent=2) + "\n", encoding="utf-8")
        info.update({k: d[k] for k in ("first_mover_ratio", "predicted_first_mover_ratio",
                                       "mean_log_rel_error")})
    print(json.dumps(info, indent=2))
    return EXIT_OK


def cmd_corpus(args) -> int:
    manifest = corpus_mod.load_manifest(args.manifest)
    out = args.out_dir or os.environ.get(corpus_mod.OUTPUT_ENV)
    if not out:
        print("no output directory: pass --out-dir or set " + corpus_mod.OUTPUT_ENV, file=sys.stderr)
        return EXIT_FATAL
    try:
        run = corpus_mod.run_corpus(manifest, out, _tok_config(args), _cutoffs(args),
                                    workers=args.workers, resume=not args.no_resume)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FATAL
    print(run.summary())
    return run.exit_code


def cmd_scan(args) -> int:
    records = corpus_mod.load_records(args.records)
    if len(records) < 3:
        print(f"scan needs at least 3 records, found {len(records)}", file=sys.stderr)
        return EXIT_FATAL
    res = scan(records)
    out = Path(args.out_dir or args.records)
    out.mkdir(parents=True, exist_ok=True)
    corpus_mod.write_json(out / "scan.json", res.to_dict())
    (out / "scan.csv").write_text(scan_rho_csv(res), encoding="utf-8")
    (out / "offsets.csv").write_text(offsets_csv(res), encoding="utf-8")
    print(f"rho_max = {res.rho_max} at r_cut = {res.r_cut_star}; {len(res.exclusions)} cutoffs excluded")
    return EXIT_OK


def cmd_report(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.text:
        toks = tokenize(_read_text(args.text), _tok_config(args))
        integ = build_dist(toks, DistMode.Integrated)
        words = build_dist(toks, DistMode.WordOnly)
        rmap = rank_map(integ, words)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "n_r", "freq", "surface"])
        for r, (n, e) in enumerate(zip(rmap.n_of_r, words.entries), 1):
            w.writerow([r, int(n), e.freq, escape_surface(e.surface)])
        (out / "fig1_rank_translation.csv").write_text(buf.getvalue(), encoding="utf-8")
        (out / "fig1_integrated.csv").write_text(dist_to_csv(integ), encoding="utf-8")
    if args.records:
        records = corpus_mod.load_records(args.records)
        if len(records) < 3:
            print(f"report needs at least 3 records, found {len(records)}", file=sys.stderr)
            return EXIT_FATAL
        res = scan(records)
        if res.r_cut_star is None:
            print("no cutoff produced a correlation", file=sys.stderr)
            return EXIT_FATAL
        i = res.index_of(args.cutoff) if args.cutoff else res.index_of(res.r_cut_star)
        (out / "fig2_top_left.csv").write_text(scan_rho_csv(res), encoding="utf-8")
        (out / "fig2_top_right.csv").write_text(scatter_csv(records, i), encoding="utf-8")
        (out / "fig2_bottom_left.csv").write_text(offsets_csv(res), encoding="utf-8")
        (out / "fig2_bottom_right.csv").write_text(histogram_csv(records, i), encoding="utf-8")
    if not (args.text or args.records):
        print("report: pass --records and/or --text", file=sys.stderr)
        return EXIT_FATAL
    return EXIT_OK


def _read_config_file(path: str) -> dict:
    cp = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        cp.read_string("[spaceword]\n" + fh.read())
    return {k.replace("-", "_"): v for k, v in cp["spaceword"].items()}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spaceword", description=__doc__)
    p.add_argument("--config", help="key = value file; command-line flags take precedence")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def tok_flags(sp):
        sp.add_argument("--rules", help="contraction rule file (surface<TAB>part|part)")
        sp.add_argument("--collapse-runs", action="store_true",
                        help="merge runs of one repeated delimiter into a single token")

    def cutoff_flags(sp):
        sp.add_argument("--cutoffs", help="explicit comma-separated cutoffs")
        sp.add_argument("--cutoff-min", type=int, default=2)
        sp.add_argument("--cutoff-max", type=int, default=10_000)
        sp.add_argument("--cutoff-count", type=int, default=676)

    sp = sub.add_parser("tokenize", help="text -> token CSV")
    sp.add_argument("input", help="UTF-8 text file or '-'")
    sp.add_argument("-o", "--output")
    tok_flags(sp)
    sp.set_defaults(func=cmd_tokenize)

    sp = sub.add_parser("rankfreq", help="text -> distribution CSVs and rank map")
    sp.add_argument("input")
    sp.add_argument("--out-dir", default=".")
    tok_flags(sp)
    sp.set_defaults(func=cmd_rankfreq)

    sp = sub.add_parser("fit", help="distribution CSV or text -> FitResult JSON")
    sp.add_argument("input")
    sp.add_argument("--mode", choices=[m.value for m in DistMode], default="word-only")
    sp.add_argument("--rcut", type=int)
    tok_flags(sp)
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("simon", help="simulate the Simon model")
    sp.add_argument("--alpha", type=float, default=0.1)
    sp.add_argument("--steps", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--compare", action="store_true", help="compare against the analytic law")
    sp.add_argument("-o", "--output", help="write j,M_j,freq CSV")
    sp.add_argument("--report", help="write the comparison report JSON")
    sp.set_defaults(func=cmd_simon)

    sp = sub.add_parser("corpus", help="manifest -> records, corpus CSV and scan")
    sp.add_argument("manifest")
    sp.add_argument("--out-dir")
    sp.add_argument("--workers", type=int)
    sp.add_argument("--no-resume", action="store_true")
    tok_flags(sp)
    cutoff_flags(sp)
    sp.set_defaults(func=cmd_corpus)

    sp = sub.add_parser("scan", help="record directory -> ScanResult files")
    sp.add_argument("records", help="corpus output directory holding records/")
    sp.add_argument("--out-dir")
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("report", help="plot-ready CSVs for the rank-translation and scan figures")
    sp.add_argument("--records", help="corpus output directory")
    sp.add_argument("--text", help="text for the rank-translation data")
    sp.add_argument("--cutoff", type=int, help="cutoff for scatter/histogram (default: best)")
    sp.add_argument("--out-dir", default=".")
    tok_flags(sp)
    sp.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        # file values become defaults, then re-parse so explicit flags win
        conf = _read_config_file(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest: a for a in sub._actions}
        defaults = {}
        for k, v in conf.items():
            if k in known:
                a = known[k]
                defaults[k] = (v.lower() in ("1", "true", "yes", "on")) if a.nargs == 0 else (
                    a.type(v) if a.type else v)
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
