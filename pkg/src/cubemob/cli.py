"""``cubemob``: reports on the face semilattice of the n-cube.

Exit codes: 0 success, 1 an internal cross-check failed, 2 usage error,
3 the audit found a printed formula that disagrees with its oracle.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import __version__
from . import audit as au
from . import census as cs
from . import faces as fc
from . import mobius as mb
from . import subalgebra as sa
from .cache import Cache, resolve_dir

log = logging.getLogger("cubemob")

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_DISCREPANCY = 0, 1, 2, 3
FORMATS = ("json", "csv", "table")

# inclusive n range per subcommand
N_RANGE = {
    "faces": (1, 8),
    "subalgebras": (1, sa.MAX_STRUCTURAL_N),
    "census": (1, sa.MAX_STRUCTURAL_N),
    "mobius": (1, mb.MAX_RECURRENCE_N),
    "derangements": (1, cs.MAX_DIRECT_N),
    "audit": (1, au.MAX_AUDIT_N),
}


@dataclass
class Report:
    """``data`` is the JSON document; ``columns``/``rows`` are its tabular view."""

    data: dict
    columns: list[str]
    rows: list[dict] = field(default_factory=list)


class UsageError(Exception):
    pass


# -- emit ----------------------------------------------------------------------------


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return str(v)


def emit(report: Report, fmt: str) -> bytes:
    if fmt == "json":
        return (json.dumps(report.data, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(report.columns)
        for row in report.rows:
            w.writerow([_cell(row.get(c)) for c in report.columns])
        return buf.getvalue().encode()
    if fmt == "table":
        cells = [report.columns] + [[_cell(r.get(c)) for c in report.columns] for r in report.rows]
        widths = [max(len(line[i]) for line in cells) for i in range(len(report.columns))]
        lines = ["  ".join(s.ljust(w) for s, w in zip(line, widths)).rstrip() for line in cells]
        lines.insert(1, "  ".join("-" * w for w in widths))
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unsupported format {fmt!r}")


# -- cached computations --------------------------------------------------------------


def mr_poset_cached(n: int, cache: Cache) -> mb.PosetTable:
    """The subalgebra poset with its Möbius table filled from, or stored to, the cache."""
    poset = mb.mr_poset(n)
    key = f"mr-mu|{n}|{poset.content_hash()}"
    hit = cache.get(key)
    if hit is not None:
        try:
            poset.load_mu_table(hit.payload)
            return poset
        except (mb.PosetError, ValueError, TypeError, IndexError) as exc:
            log.warning("cached Möbius table %s unusable (%s); recomputing", key, exc)
            poset = mb.mr_poset(n)
    cache.put(key, poset.mu_table(), {"kind": "mr-mu", "n": n, "size": len(poset)})
    return poset


def direct_derangements_cached(n: int, jobs: int, cache: Cache) -> int:
    key = f"derangements-direct|{n}"
    hit = cache.get(key)
    if hit is not None and isinstance(hit.payload, int):
        return hit.payload
    value = cs.derangements_direct(n, jobs)
    cache.put(key, value, {"kind": "derangements-direct", "n": n})
    return value


# -- subcommands ----------------------------------------------------------------------


def cmd_faces(args, cache) -> tuple[Report, int]:
    faces = fc.all_faces(args.n)
    rows = [{"face": str(x), "corank": x.corank} for x in faces]
    census = au.corank_census(args.n)
    data = {
        "n": args.n,
        "count": len(faces),
        "corank_census": {str(r): c for r, c in census.items()},
        "faces": rows,
    }
    return Report(data, ["face", "corank"], rows), EXIT_OK


def _subalgebra_row(a: sa.MRSubalgebra) -> dict:
    t = sa.type_of(a)
    return {
        "subalgebra": str(a),
        "blocks": a.to_json()["blocks"],
        "k": a.k,
        "type": str(t),
        "r": t.r,
        "size": 3 ** a.k,
    }


def cmd_subalgebras(args, cache) -> tuple[Report, int]:
    rows = [_subalgebra_row(a) for a in sa.enumerate_subalgebras(args.n)]
    data = {"n": args.n, "count": len(rows), "subalgebras": rows}
    return Report(data, ["subalgebra", "k", "type", "r", "size", "blocks"], rows), EXIT_OK


def cmd_census(args, cache) -> tuple[Report, int]:
    n = args.n
    poset = mr_poset_cached(n, cache) if n <= cs.MAX_BRUTE_N else None
    rows = [r.as_dict() for r in cs.census_rows(n, args.jobs, poset)]
    data: dict = {"n": n, "rows": rows, "sample_check": None}
    code = EXIT_OK if all(cs.CensusRow(**r).agrees() for r in rows) else EXIT_CHECK
    if n == cs.MAX_BRUTE_N:
        bad = cs.sample_check(n, 50, args.seed)
        data["sample_check"] = {"seed": args.seed, "size": 50, "mismatches": bad}
        if bad:
            code = EXIT_CHECK
    return Report(data, list(cs.CENSUS_COLUMNS), rows), code


MOBIUS_METHODS = ("all", "bruteforce", "printed", "adjudicated")


def cmd_mobius(args, cache) -> tuple[Report, int]:
    n = args.n
    method = args.method or "all"
    if method not in MOBIUS_METHODS:
        raise UsageError(f"mobius --method must be one of {', '.join(MOBIUS_METHODS)}")
    if method == "bruteforce" and n > mb.MAX_MR_POSET_N:
        raise UsageError(f"mobius --method bruteforce supports n <= {mb.MAX_MR_POSET_N}")
    poset = mr_poset_cached(n, cache) if n <= mb.MAX_MR_POSET_N and method in ("all", "bruteforce") else None
    if method == "all":
        data = mb.mobius_report(n, poset)
    else:
        data = {
            "n": n,
            "mu_bruteforce": mb.mr_mobius_bruteforce(n, poset) if method == "bruteforce" else None,
            "mu_recurrence_paper": mb.fraction_json(mb.mr_recurrence_paper(n)) if method == "printed" else None,
            "mu_recurrence_adjudicated": mb.mr_recurrence_adjudicated(n) if method == "adjudicated" else None,
        }
    cols = ["n", "mu_bruteforce", "mu_recurrence_paper", "mu_recurrence_adjudicated"]
    return Report(data, cols, [{c: data.get(c) for c in cols}]), EXIT_OK


DERANGEMENT_METHODS = ("both", "inversion", "direct")


def cmd_derangements(args, cache) -> tuple[Report, int]:
    n = args.n
    method = args.method or "both"
    if method not in DERANGEMENT_METHODS:
        raise UsageError(f"derangements --method must be one of {', '.join(DERANGEMENT_METHODS)}")
    if method != "direct" and n > mb.MAX_MR_POSET_N:
        raise UsageError(f"derangements by inversion supports n <= {mb.MAX_MR_POSET_N}; use --method direct")
    data: dict = {"n": n, "inversion": None, "direct": None, "agree": None}
    if method != "direct":
        poset = mr_poset_cached(n, cache)
        data["inversion"] = cs.s_table(n, poset)[sa.trivial(n)]
    if method != "inversion":
        data["direct"] = direct_derangements_cached(n, args.jobs, cache)
    code = EXIT_OK
    if method == "both":
        data["agree"] = data["inversion"] == data["direct"]
        code = EXIT_OK if data["agree"] else EXIT_CHECK
    return Report(data, ["n", "inversion", "direct", "agree"], [dict(data)]), code


def cmd_audit(args, cache) -> tuple[Report, int]:
    rep = au.run_audit(args.n, args.seed)
    data = rep.to_json()
    rows = [{"kind": "check", **c} for c in data["checks"]]
    rows += [
        {"kind": "discrepancy", "name": d["check"], "status": "DISCREPANCY",
         "detail": f"printed {d['printed']}, oracle {d['oracle']}"}
        for d in data["discrepancies"]
    ]
    if rep.failed:
        code = EXIT_CHECK
    elif rep.discrepancies:
        code = EXIT_DISCREPANCY
    else:
        code = EXIT_OK
    return Report(data, ["kind", "name", "status", "detail"], rows), code


COMMANDS = {
    "faces": (cmd_faces, "list the faces of the n-cube with their coranks"),
    "subalgebras": (cmd_subalgebras, "enumerate MR-subalgebras as signed partial partitions"),
    "census": (cmd_census, "orbit, stabiliser, freezer and restriction counts per type"),
    "mobius": (cmd_mobius, "mu({1}, L_n) by brute force and by recurrence, with closure fibres"),
    "derangements": (cmd_derangements, "automorphisms fixing only the whole cube"),
    "audit": (cmd_audit, "run every cross-check and list formula discrepancies"),
}

WITH_METHOD = {"mobius": MOBIUS_METHODS, "derangements": DERANGEMENT_METHODS}
WITH_SEED = {"census", "audit"}


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cubemob", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, helptext) in COMMANDS.items():
        p = sub.add_parser(name, help=helptext, description=helptext)
        p.add_argument("--n", type=int, required=True, help="cube dimension")
        p.add_argument("--format", choices=FORMATS, default="json")
        p.add_argument("--cache-dir", default=None, help="overrides $CUBEMOB_CACHE_DIR")
        p.add_argument("--jobs", type=_positive, default=1, help="worker processes")
        p.add_argument("-v", "--verbose", action="store_true")
        if name in WITH_METHOD:
            p.add_argument("--method", choices=WITH_METHOD[name], default=None)
        if name in WITH_SEED:
            p.add_argument("--seed", type=int, default=cs.DEFAULT_SEED, help="sampling seed")
    return parser


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    out = stdout if stdout is not None else sys.stdout.buffer
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="cubemob: %(levelname)s: %(message)s", stream=sys.stderr)
    lo, hi = N_RANGE[args.command]
    if not lo <= args.n <= hi:
        print(f"cubemob {args.command}: --n must be in [{lo}, {hi}], got {args.n}", file=sys.stderr)
        return EXIT_USAGE
    cache = Cache(resolve_dir(args.cache_dir))
    handler = COMMANDS[args.command][0]
    try:
        report, code = handler(args, cache)
    except UsageError as exc:
        print(f"cubemob {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.write(emit(report, args.format))
    out.flush()
    return code


def main() -> None:
    sys.exit(run())
