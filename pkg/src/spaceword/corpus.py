"""Corpus ingestion, batch orchestration and the on-disk record store.

Layout of an output directory::

    records/<text_id>.json   one TextRecord per text, written atomically
    errors.csv               text_id,error for texts that produced no record
    corpus.csv               text_id,R,N,n1,r_cut,k_zm,k_s,offset
    scan.json / scan.csv     the ScanResult
"""
from __future__ import annotations

import csv
import io
import json
import logging
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .experiment import (
    ScanResult,
    SkipText,
    TextRecord,
    analyze_text,
    log_spaced_cutoffs,
    offsets_csv,
    scan,
    scan_rho_csv,
)
from .tokenizer import TokenizerConfig, TokenizerEncodingError, decode_utf8

__all__ = [
    "ManifestEntry",
    "CorpusManifest",
    "CorpusRun",
    "strip_boilerplate",
    "load_manifest",
    "process_entry",
    "run_corpus",
    "load_records",
    "write_json",
    "corpus_csv",
    "OUTPUT_ENV",
    "EXIT_OK",
    "EXIT_PARTIAL",
    "EXIT_FATAL",
]

log = logging.getLogger(__name__)

OUTPUT_ENV = "SPACEWORD_OUTPUT_DIR"
EXIT_OK, EXIT_PARTIAL, EXIT_FATAL = 0, 1, 2

_START = re.compile(r"^\*\*\*\s*START OF.*$", re.MULTILINE | re.IGNORECASE)
_END = re.compile(r"^\*\*\*\s*END OF", re.MULTILINE | re.IGNORECASE)
_SAFE_ID = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


def strip_boilerplate(raw: str) -> tuple[str, bool]:
    """Cut a Gutenberg header and footer.

    Returns ``(body, found)``.  The body lies strictly between the
    ``*** START OF`` line and the ``*** END OF`` line; when either marker is
    missing the input comes back unchanged with ``found=False``.
    """
    start = _START.search(raw)
    if start is None:
        return raw, False
    end = _END.search(raw, start.end())
    if end is None:
        return raw, False
    body = raw[start.end():end.start()]
    if body.startswith("\r\n"):
        body = body[2:]
    elif body.startswith("\n"):
        body = body[1:]
    return body, True


@dataclass(frozen=True)
class ManifestEntry:
    text_id: str
    path: Path
    language: str | None = None

    @property
    def byte_size(self) -> int | None:
        try:
            return self.path.stat().st_size
        except OSError:
            return None


@dataclass
class CorpusManifest:
    entries: list[ManifestEntry]
    source_notes: str = ""

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            if e.text_id in seen:
                raise ValueError(f"duplicate text_id {e.text_id!r}")
            if not _SAFE_ID.match(e.text_id):
                raise ValueError(f"text_id {e.text_id!r} is not usable as a file name")
            seen.add(e.text_id)

    def __len__(self) -> int:
        return len(self.entries)

    def missing(self) -> list[ManifestEntry]:
        return [e for e in self.entries if not e.path.is_file()]


def load_manifest(path: str | Path, strict: bool = False) -> CorpusManifest:
    """Read ``text_id,path[,language]`` CSV; relative paths resolve against the manifest.

    With ``strict`` a missing file is an error; otherwise it is reported
    per text when the corpus runs.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if rows and rows[0][:2] == ["text_id", "path"]:
        rows = rows[1:]
    entries = []
    for row in rows:
        if len(row) < 2:
            raise ValueError(f"{path}: malformed manifest row {row!r}")
        p = Path(row[1])
        if not p.is_absolute():
            p = path.parent / p
        lang = row[2] if len(row) > 2 and row[2] else None
        entries.append(ManifestEntry(row[0], p, lang))
    manifest = CorpusManifest(entries, source_notes=str(path))
    if strict and (gone := manifest.missing()):
        raise FileNotFoundError(f"manifest paths missing: {[str(e.path) for e in gone]}")
    return manifest


def process_entry(entry: ManifestEntry, config: TokenizerConfig | None, cutoffs: Sequence[int]) -> TextRecord:
    """Read, strip and analyze one manifest entry."""
    data = entry.path.read_bytes()
    try:
        raw = decode_utf8(data)
    except TokenizerEncodingError as exc:
        raise SkipText(f"{entry.path}: {exc}") from None
    body, found = strip_boilerplate(raw)
    rec = analyze_text(body, config, cutoffs, text_id=entry.text_id)
    if not found:
        rec.notes.append("no Gutenberg start/end markers; full file analyzed")
    return rec


def _worker(args):
    entry, config, cutoffs = args
    try:
        return entry.text_id, process_entry(entry, config, cutoffs).to_dict(), None
    except (OSError, ValueError) as exc:
        return entry.text_id, None, f"{type(exc).__name__}: {exc}"


def write_json(path: Path, obj) -> None:
    """Atomic write of stable JSON."""
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, ensure_ascii=False, allow_nan=False)
        fh.write("\n")
    os.replace(tmp, path)


def _write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def load_records(out_dir: str | Path) -> list[TextRecord]:
    rec_dir = Path(out_dir) / "records"
    records = []
    for p in sorted(rec_dir.glob("*.json")):
        with open(p, encoding="utf-8") as fh:
            records.append(TextRecord.from_dict(json.load(fh)))
    return records


def corpus_csv(records: Sequence[TextRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["text_id", "R", "N", "n1", "r_cut", "k_zm", "k_s", "offset"])
    for rec in sorted(records, key=lambda r: r.text_id):
        for i, c in enumerate(rec.cutoffs):
            fz, fs = rec.fits_zm[i], rec.fits_s[i]
            off = rec.offset(i)
            w.writerow([rec.text_id, rec.R, rec.N, rec.n1, c,
                        repr(fz.k_hat) if fz.ok else "",
                        repr(fs.k_hat) if fs.ok else "",
                        repr(off) if off is not None else ""])
    return buf.getvalue()


@dataclass
class CorpusRun:
    records: list[TextRecord]
    errors: dict[str, str]
    scan: ScanResult | None
    scan_error: str | None = None
    resumed: list[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        if not self.records:
            return EXIT_FATAL
        return EXIT_PARTIAL if self.errors else EXIT_OK

    def summary(self) -> str:
        lines = [f"records: {len(self.records)} ({len(self.resumed)} resumed), errors: {len(self.errors)}"]
        if self.scan is not None and self.scan.rho_max is not None:
            lines.append(f"rho_max = {self.scan.rho_max:.4f} at r_cut = {self.scan.r_cut_star}")
        if self.scan_error:
            lines.append(f"scan: {self.scan_error}")
        return "\n".join(lines)


def run_corpus(manifest: CorpusManifest, out_dir: str | Path, config: TokenizerConfig | None = None,
               cutoffs: Sequence[int] | None = None, workers: int | None = None,
               resume: bool = True, limit: int | None = None) -> CorpusRun:
    """Process every manifest entry, persist records as they finish, then scan.

    Texts whose record file already exists are loaded instead of
    recomputed (when ``resume``).  ``limit`` stops after that many new
    texts, which is how an interruption is simulated in tests.
    """
    if not manifest.entries:
        raise ValueError("manifest is empty")
    out = Path(out_dir)
    rec_dir = out / "records"
    rec_dir.mkdir(parents=True, exist_ok=True)
    cutoffs = list(cutoffs) if cutoffs is not None else log_spaced_cutoffs(2, 10_000)
    config = config or TokenizerConfig()

    done: dict[str, TextRecord] = {}
    resumed = []
    todo = []
    for e in manifest.entries:
        p = rec_dir / f"{e.text_id}.json"
        if resume and p.is_file():
            with open(p, encoding="utf-8") as fh:
                rec = TextRecord.from_dict(json.load(fh))
            if rec.cutoffs == list(cutoffs):
                done[e.text_id] = rec
                resumed.append(e.text_id)
                continue
        todo.append(e)
    if limit is not None:
        todo = todo[:limit]

    errors: dict[str, str] = {}
    jobs = [(e, config, cutoffs) for e in todo]
    workers = workers or os.cpu_count() or 1

    def handle(result):
        text_id, rec_dict, err = result
        if err is not None:
            log.warning("%s: %s", text_id, err)
            errors[text_id] = err
            return
        write_json(rec_dir / f"{text_id}.json", rec_dict)
        done[text_id] = TextRecord.from_dict(rec_dict)

    if workers == 1 or len(jobs) <= 1:
        for job in jobs:
            handle(_worker(job))
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            # results are consumed (and written) here, in the parent only
            for result in pool.map(_worker, jobs):
                handle(result)

    records = [done[k] for k in sorted(done)]
    _write_text(out / "errors.csv", "text_id,error\n" + "".join(
        f"{k},{json.dumps(v)}\n" for k, v in sorted(errors.items())))
    _write_text(out / "corpus.csv", corpus_csv(records))

    run = CorpusRun(records, errors, None, resumed=resumed)
    if len(records) < 3:
        run.scan_error = f"scan needs at least 3 records, have {len(records)}"
        return run
    res = scan(records, cutoffs)
    run.scan = res
    write_json(out / "scan.json", res.to_dict())
    _write_text(out / "scan.csv", scan_rho_csv(res))
    _write_text(out / "offsets.csv", offsets_csv(res))
    return run
