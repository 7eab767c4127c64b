"""Command-line front end.

Exit codes
----------
0  success (``convertible``: the conversion is possible)
1  ``convertible`` only: the conversion is impossible
2  usage error or invalid input
3  numerical failure, failed inversion or failed verification
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .characterize import (invert_ghz_generic, invert_ghz_mes, invert_ghz_vanishing, invert_w,
                           measure, mes_min_eigs_from_c)
from .convert import convertible
from .errors import AmbiguousInversion, InversionError, LoccVolumesError, NumericalError
from .jsonio import dumps
from .oracle import VERIFY_CASES, sample_ghz_array, sample_w, verify_all, worker_count
from .states import GhzParams, SchmidtVector, WParams, state_from_dict, validate_ghz, validate_w
from .volumes import bipartite_volumes, concurrences, volumes

EXIT_OK = 0
EXIT_NOT_CONVERTIBLE = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

CSV_COLUMNS = ("class", "x0", "x1", "x2", "x3", "g1", "g2", "g3", "r", "phi",
               "C1", "C2", "C3", "Ea", "Es", "dim_a", "dim_s")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise UsageError(f"cannot parse number list {text!r}") from None


def _load_json(path_or_text: str):
    """JSON from a file path, or the argument itself when it looks like JSON."""
    s = path_or_text.strip()
    try:
        if s[:1] in "{[":
            return json.loads(s)
        with open(path_or_text, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path_or_text!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON in {path_or_text!r}: {exc.msg}") from None


def _state(cls: Optional[str], inline: Optional[str], path: Optional[str], what: str):
    """Build a state from an inline list or a JSON file; both at once is an error."""
    if inline is not None and path is not None:
        raise UsageError(f"{what}: give either an inline list or a JSON file, not both")
    if path is not None:
        data = _load_json(path)
        if not isinstance(data, dict):
            raise UsageError(f"{what}: JSON state must be an object")
        if cls is not None and str(data.get("class", cls)).lower() != cls:
            raise UsageError(f"{what}: --class {cls} conflicts with JSON class {data.get('class')!r}")
        data = {"class": cls, **data}
        return state_from_dict(data)
    if inline is None:
        raise UsageError(f"{what}: missing state")
    if ":" in inline:
        prefix, inline = inline.split(":", 1)
        if cls is not None and prefix.lower() != cls:
            raise UsageError(f"{what}: --class {cls} conflicts with prefix {prefix!r}")
        cls = prefix.lower()
    vals = _floats(inline)
    if cls == "w":
        return validate_w(vals)
    if cls == "ghz":
        return validate_ghz(vals)
    if cls == "bipartite":
        return SchmidtVector.from_values(vals)
    raise UsageError(f"{what}: state class required (--class or a 'w:'/'ghz:' prefix)")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_measure(args) -> tuple[int, object]:
    st = _state(args.cls, args.params, args.params_file, "measure")
    if isinstance(st, SchmidtVector):
        raise UsageError("measure takes a three-qubit state; use 'bipartite' for Schmidt vectors")
    out = measure(st, tol=args.tol).to_dict()
    out["state"] = st.to_dict()
    return EXIT_OK, out


def _cmd_convertible(args) -> tuple[int, object]:
    src = _state(args.cls, args.src, args.src_file, "--from")
    dst = _state(args.cls, args.dst, args.dst_file, "--to")
    dec = convertible(src, dst)
    return (EXIT_OK if dec.convertible else EXIT_NOT_CONVERTIBLE), dec.to_dict()


def _bit(args) -> Optional[bool]:
    return None if args.bit is None else bool(args.bit)


def _cmd_invert(args) -> tuple[int, object]:
    from .volumes import MeasureTuple
    data = _load_json(args.measures)
    if not isinstance(data, dict):
        raise UsageError("--measures must be a JSON object")
    try:
        if args.cls == "w":
            res = invert_w({k: v for k, v in data.items() if k in ("C1", "C2", "C3", "Ea", "Es")})
        elif args.cls == "ghz":
            res = invert_ghz_generic(MeasureTuple.from_dict(data), bit=_bit(args))
        elif args.cls == "ghz-mes":
            e = data.get("e")
            if e is None:
                e = mes_min_eigs_from_c([data["C1"], data["C2"], data["C3"]])
            bit = _bit(args) if args.bit is not None else data.get("bit")
            res = invert_ghz_mes(e, bit=bit)
        else:
            res = invert_ghz_vanishing(MeasureTuple.from_dict(data))
    except KeyError as exc:
        raise UsageError(f"--measures is missing key {exc.args[0]!r}") from None
    return EXIT_OK, res.to_dict()


def _cmd_verify(args) -> tuple[int, object]:
    cases = None
    if args.cases:
        cases = [c.strip() for c in args.cases.split(",") if c.strip()]
        bad = [c for c in cases if c not in VERIFY_CASES]
        if bad:
            raise UsageError(f"unknown cases {bad}; choose from {', '.join(VERIFY_CASES)}")
    rep = verify_all(n_per_case=args.per_case, n=args.n, seed=args.seed, cases=cases)
    return (EXIT_OK if rep.passed else EXIT_NUMERICAL), rep.to_dict()


def _row(cls: str, st, rep, C) -> dict:
    row = dict.fromkeys(CSV_COLUMNS)
    row["class"] = cls
    if isinstance(st, WParams):
        row.update(x0=st.x0, x1=st.x1, x2=st.x2, x3=st.x3)
    else:
        row.update(g1=st.g1, g2=st.g2, g3=st.g3, r=st.r, phi=st.phi)
    row.update(C1=C[0], C2=C[1], C3=C[2], Ea=rep.Ea, Es=rep.Es,
               dim_a=rep.dims.accessible, dim_s=rep.dims.source)
    return row


def sample_rows(cls: str, n: int, seed: int, r_one: bool = False) -> list[dict]:
    """Plot-ready rows of parameters and measures for ``n`` seeded states."""
    if cls.lower() == "w":
        states = sample_w(n, seed)
        tag = "w"
    else:
        states = [GhzParams(*map(float, row)) for row in sample_ghz_array(cls, n, seed, r_one)]
        tag = None
    rows = []
    for st in states:
        rows.append(_row(tag or st.to_dict()["tag"], st, volumes(st), concurrences(st)))
    return rows


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _cmd_sample(args) -> tuple[int, object]:
    if args.n < 0:
        raise UsageError("-n must be non-negative")
    rows = sample_rows(args.cls, args.n, args.seed, args.r_one)
    if args.format == "json":
        return EXIT_OK, rows
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        w.writerow([_csv_cell(row[c]) for c in CSV_COLUMNS])
    return EXIT_OK, buf.getvalue()


def _cmd_bipartite(args) -> tuple[int, object]:
    lam = SchmidtVector.from_values(_floats(args.schmidt))
    rep = bipartite_volumes(lam, method=args.method, n=args.n, seed=args.seed)
    out = rep.to_dict()
    out["state"] = lam.to_dict()
    return EXIT_OK, out


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="locc-volumes", description="Operational entanglement measures of pure states.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("measure", help="measure tuple of a W- or GHZ-class state")
    m.add_argument("--class", dest="cls", choices=("w", "ghz"))
    m.add_argument("--params", help="inline list, e.g. 0.4,0.2,0.2,0.2")
    m.add_argument("--params-file", help="JSON file (or literal) with the state object")
    m.add_argument("--tol", type=float, default=1e-8, help="cubature tolerance")
    m.set_defaults(func=_cmd_measure)

    c = sub.add_parser("convertible", help="decide deterministic LOCC convertibility")
    c.add_argument("--class", dest="cls", choices=("w", "ghz", "bipartite"))
    c.add_argument("--from", dest="src", help="inline source state, optionally 'w:'/'ghz:' prefixed")
    c.add_argument("--from-file", dest="src_file")
    c.add_argument("--to", dest="dst", help="inline target state")
    c.add_argument("--to-file", dest="dst_file")
    c.set_defaults(func=_cmd_convertible)

    i = sub.add_parser("invert", help="reconstruct a state from its measures")
    i.add_argument("--class", dest="cls", required=True,
                   choices=("w", "ghz", "ghz-mes", "ghz-vanishing"))
    i.add_argument("--measures", required=True, help="JSON object or file")
    i.add_argument("--bit", type=int, choices=(0, 1))
    i.set_defaults(func=_cmd_invert)

    v = sub.add_parser("verify", help="closed forms against the Monte-Carlo oracle")
    v.add_argument("--n", type=int, default=100_000, help="samples per estimate")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--per-case", type=int, default=20, help="states per case")
    v.add_argument("--cases", help=f"comma list from {', '.join(VERIFY_CASES)}")
    v.set_defaults(func=_cmd_verify)

    s = sub.add_parser("sample", help="emit seeded states with their measures")
    s.add_argument("--class", dest="cls", required=True,
                   help="'w' or a GHZ tag such as GenericNonMes, Mes, VanishingTwo(1,3)")
    s.add_argument("-n", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--r-one", action="store_true", help="r = 1 variant of vanishing cases")
    s.set_defaults(func=_cmd_sample)

    b = sub.add_parser("bipartite", help="volumes of a bipartite Schmidt vector")
    b.add_argument("--schmidt", required=True, help="inline list, e.g. 0.7,0.3")
    b.add_argument("--method", choices=("auto", "exact", "mc"), default="auto")
    b.add_argument("--n", type=int, default=1_000_000)
    b.add_argument("--seed", type=int, default=0)
    b.set_defaults(func=_cmd_bipartite)
    return p


def _config_line(args) -> str:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    cfg["threads"] = worker_count()
    cfg["LOCC_VOLUMES_THREADS"] = os.environ.get("LOCC_VOLUMES_THREADS")
    return "config: " + json.dumps(cfg, sort_keys=True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:          # --help / --version
        return int(exc.code or 0)
    print(_config_line(args), file=sys.stderr)
    try:
        code, out = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AmbiguousInversion as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(dumps({"error": "AmbiguousInversion", "candidates": list(exc.candidates)}))
        return EXIT_NUMERICAL
    except (NumericalError, InversionError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (LoccVolumesError, ValueError) as exc:
        print(f"usage error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(out if isinstance(out, str) else dumps(out) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
