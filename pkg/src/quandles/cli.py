"""Command-line interface: ``quandles {enumerate,analyze,verify,counts}``.

Exit codes: 0 success, 1 a check failed, 2 I/O error, 64 usage error,
65 bad input data.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from typing import TextIO

from . import __version__
from .analyze import analyze_library, verify_conj_inn, verify_dihedral_aut, verify_dihedral_inn
from .core import NotAQuandleError, Quandle, TableFormatError, format_cycle_columns, parse_cycle_columns
from .enumeration import default_workers, enumerate_quandles
from .permgroup import GroupOrderError, catalog_construct, catalog_names, parse_group_name

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_IO = 2
EXIT_USAGE = 64
EXIT_DATA = 65

EXPECTED_COUNTS = (1, 1, 3, 7, 22, 73, 298, 1581, 11079)


class DataError(Exception):
    """Unparseable or invalid input record; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class QuandleRecord:
    n: int
    table: tuple[tuple[int, ...], ...]
    label: str | None = None

    @classmethod
    def of(cls, q: Quandle, label: str | None = None) -> QuandleRecord:
        return cls(q.n, q.table, label)

    def quandle(self) -> Quandle:
        return Quandle(self.table)

    def to_json(self) -> str:
        obj: dict = {"n": self.n, "table": [list(r) for r in self.table]}
        if self.label is not None:
            obj["label"] = self.label
        return json.dumps(obj)

    def to_cycles(self) -> str:
        text = format_cycle_columns(self.quandle())
        return text if self.label is None else f"{self.label} {text}"


def _parse_json_line(text: str) -> QuandleRecord:
    obj = json.loads(text)
    if not isinstance(obj, dict) or "table" not in obj:
        raise TableFormatError("record needs a 'table' key")
    table = obj["table"]
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        raise TableFormatError("'table' must be a list of rows")
    if any(not isinstance(v, int) or isinstance(v, bool) for r in table for v in r):
        raise TableFormatError("table entries must be integers")
    n = obj.get("n", len(table))
    if n != len(table):
        raise TableFormatError(f"'n' is {n} but the table has {len(table)} rows")
    label = obj.get("label")
    return QuandleRecord(n, tuple(tuple(r) for r in table), None if label is None else str(label))


def _parse_cycles_line(text: str) -> tuple[str | None, Quandle]:
    label = None
    if not text.startswith("("):
        label, _, text = text.partition(" ")
        text = text.strip()
    return label, parse_cycle_columns(None, text)


def read_quandles(stream: TextIO) -> list[tuple[str | None, Quandle]]:
    """Records from a JSONL or cycles stream; the format is sniffed per line.

    Raises :class:`DataError` with the offending line number.
    """
    out = []
    for lineno, raw in enumerate(stream, 1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        try:
            if text.startswith("{"):
                rec = _parse_json_line(text)
                out.append((rec.label, rec.quandle()))
            else:
                out.append(_parse_cycles_line(text))
        except NotAQuandleError as e:
            raise DataError(lineno, str(e)) from e
        except (TableFormatError, ValueError) as e:
            raise DataError(lineno, f"cannot parse record: {e}") from e
    return out


def write_quandles(stream: TextIO, quandles: list[Quandle], fmt: str) -> None:
    for k, q in enumerate(quandles, 1):
        rec = QuandleRecord.of(q, f"Q{k}")
        stream.write((rec.to_json() if fmt == "jsonl" else rec.to_cycles()) + "\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quandles", description="Enumerate finite quandles and analyse their automorphisms.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def workers(p):
        p.add_argument("--threads", type=int, default=None, metavar="K",
                       help="worker processes (default: all CPUs)")

    p = sub.add_parser("enumerate", help="all quandles of one order up to isomorphism")
    p.add_argument("--order", type=int, required=True, metavar="N")
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    p.add_argument("--format", choices=["jsonl", "cycles"], default="jsonl")
    p.add_argument("--dedup-level", type=int, choices=range(4), default=3, metavar="0..3")
    p.add_argument("--no-symmetry-break", action="store_true")
    workers(p)

    p = sub.add_parser("analyze", help="Inn and Aut of every quandle in a file")
    p.add_argument("--in", dest="input", required=True, metavar="PATH", help="JSONL or cycles file ('-' for stdin)")
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("verify", help="check the dihedral and conjugation theorems")
    p.add_argument("target", choices=["dihedral-aut", "dihedral-inn", "conj-inn"])
    p.add_argument("--n-max", type=int, default=12, metavar="N")
    p.add_argument("--group", metavar="NAME", help="conj-inn: one group, e.g. S3 or 'D4 x Z2'")
    p.add_argument("--max-order", type=int, default=24, metavar="N",
                   help="conj-inn without --group: every catalog group up to this order")

    p = sub.add_parser("counts", help="number of quandles of each order")
    p.add_argument("--max-order", type=int, required=True, metavar="N")
    p.add_argument("--no-check", action="store_true", help="do not compare with the known sequence")
    workers(p)
    return parser


def _open_out(path: str | None) -> TextIO:
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="\n")


def run_enumerate(args) -> int:
    if not 1 <= args.order <= 9:
        print("quandles: --order must be in 1..9", file=sys.stderr)
        return EXIT_USAGE
    start = time.perf_counter()
    result = enumerate_quandles(args.order, args.dedup_level, workers=args.threads,
                                symmetry_break=not args.no_symmetry_break)
    buf = io.StringIO()
    write_quandles(buf, result, args.format)
    out = _open_out(args.out)
    try:
        out.write(buf.getvalue())
    finally:
        if out is not sys.stdout:
            out.close()
    print(f"order={args.order} classes={len(result)} elapsed={time.perf_counter() - start:.3f}")
    return EXIT_OK


ROW_FIELDS = ("label", "inn_name", "inn_order", "aut_name", "aut_order", "faithful")


def run_analyze(args) -> int:
    if args.input == "-":
        records = read_quandles(sys.stdin)
    else:
        with open(args.input, encoding="utf-8") as f:
            records = read_quandles(f)
    labels = [lab if lab is not None else f"Q{k}" for k, (lab, _) in enumerate(records, 1)]
    rows = [a.as_row() for a in analyze_library([q for _, q in records], labels)]
    buf = io.StringIO()
    if args.format == "json":
        json.dump(rows, buf, indent=2)
        buf.write("\n")
    else:
        w = csv.DictWriter(buf, fieldnames=ROW_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    out = _open_out(args.out)
    try:
        out.write(buf.getvalue())
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def run_verify(args) -> int:
    if args.target == "conj-inn":
        if args.group is not None:
            try:
                names = [parse_group_name(args.group)]
            except ValueError as e:
                print(f"quandles: {e}", file=sys.stderr)
                return EXIT_USAGE
        else:
            names = catalog_names(args.max_order)
        reports = []
        for nm in names:
            try:
                g = catalog_construct(nm)
            except (ValueError, GroupOrderError) as e:
                print(f"quandles: {e}", file=sys.stderr)
                return EXIT_USAGE
            if g.order > 100:
                print(f"quandles: {nm} has order {g.order} > 100", file=sys.stderr)
                return EXIT_USAGE
            reports.append(verify_conj_inn(g, args.group or str(nm)))
    else:
        if args.n_max < 2:
            print("quandles: --n-max must be at least 2", file=sys.stderr)
            return EXIT_USAGE
        check = verify_dihedral_aut if args.target == "dihedral-aut" else verify_dihedral_inn
        reports = [check(n) for n in range(2, args.n_max + 1)]
    for r in reports:
        print(r.line())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def run_counts(args) -> int:
    if not 1 <= args.max_order <= 9:
        print("quandles: --max-order must be in 1..9", file=sys.stderr)
        return EXIT_USAGE
    status = EXIT_OK
    for n in range(1, args.max_order + 1):
        count = len(enumerate_quandles(n, workers=args.threads))
        note = ""
        if not args.no_check and count != EXPECTED_COUNTS[n - 1]:
            note = f" expected={EXPECTED_COUNTS[n - 1]}"
            status = EXIT_FAIL
        print(f"n={n} count={count}{note}", flush=True)
    return status


COMMANDS = {"enumerate": run_enumerate, "analyze": run_analyze, "verify": run_verify, "counts": run_counts}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", None) is None:
        args.threads = default_workers()
    elif args.threads < 1:
        print("quandles: --threads must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except DataError as e:
        print(f"quandles: {e}", file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f"quandles: {e}", file=sys.stderr)
        return EXIT_IO
