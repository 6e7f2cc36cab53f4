"""Command line front end: ``ncga <command> <algebra> [options]``.

``<algebra>`` is a path to an ``.alg`` file or the name of a bundled one
(``ncga regular jordan``).  ``--json`` prints the machine report; every
number in it is an exact string.  Exit codes: 0 ok, 1 usage, 2 parse,
3 inconclusive or fixture mismatch, 4 internal error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from importlib import resources
from pathlib import Path

from gmpy2 import mpq

from . import __version__
from .algfile import AlgebraFile, ParseError, parse_algebra, print_algebra
from .freealg import Q

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INCONCLUSIVE, EXIT_INTERNAL = 0, 1, 2, 3, 4

COMMANDS = ("gb", "hilbert", "gkdim", "resolve", "regular", "nakayama", "points", "twist", "normal")


class UsageError(Exception):
    pass


class Inconclusive(Exception):
    """Raised by a command that has no certified answer for its input."""


# ---------------------------------------------------------------------------
# report helpers


def exact(obj):
    """Recursively turn numbers into exact strings; bools and None pass through."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, type(mpq(0)))):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): exact(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [exact(v) for v in obj]
    if isinstance(obj, float):
        raise TypeError("floats have no place in an exact report")
    return str(obj)


def _poly_terms(f, order=None):
    return [[c, f.gens.word_str(w)] for w, c in f.sorted_terms(order)]


def _matrix(rows):
    return [[str(x) for x in r] for r in rows]


def list_bundled() -> list:
    return sorted(p.name[:-4] for p in resources.files("ncga").joinpath("data").iterdir()
                  if p.name.endswith(".alg"))


def load_algebra(name_or_path: str, overrides=None) -> AlgebraFile:
    path = Path(name_or_path)
    if path.is_file():
        return parse_algebra(path.read_text(encoding="utf-8"), overrides, str(path))
    res = resources.files("ncga").joinpath("data", f"{name_or_path}.alg")
    if res.is_file():
        return parse_algebra(res.read_text(encoding="utf-8"), overrides, f"{name_or_path}.alg")
    raise UsageError(f"no such file or bundled algebra: {name_or_path} (bundled: {', '.join(list_bundled())})")


def parse_tau(text: str, n: int):
    """"1,0;1,1" -> [[1,0],[1,1]] (rows separated by ';')."""
    try:
        rows = [[Q(c) for c in row.split(",")] for row in text.split(";") if row.strip()]
    except ValueError as e:
        raise UsageError(f"bad --tau matrix {text!r}: {e}") from None
    if len(rows) != n or any(len(r) != n for r in rows):
        raise UsageError(f"--tau must be a {n}x{n} matrix")
    return rows


def parse_params(items) -> dict:
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"--param expects NAME=VALUE, got {item!r}")
        try:
            out[name.strip()] = Q(value)
        except ValueError:
            raise UsageError(f"--param value {value!r} is not a rational") from None
    return out


# ---------------------------------------------------------------------------
# commands; each returns (result, certificates, human lines, conclusive)


def cmd_gb(af, args):
    from .gbasis import complete
    p = af.presentation
    gb = complete(p, args.maxdeg)
    rules = [{"lead": p.gens.word_str(r.lead), "terms": _poly_terms(r.poly(), p.order)}
             for r in gb.rules]
    result = {"rules": rules, "D": args.maxdeg, "complete": gb.complete,
              "rule_count": len(gb.rules),
              "rules_by_degree": {d: c for d, c in sorted(gb.rules_by_degree.items())}}
    certs = {"certified_degree": "unbounded" if gb.complete else gb.certified_degree}
    lines = [f"{len(gb.rules)} rules, complete={gb.complete}"] + ["  " + s for s in gb.format()]
    return result, certs, lines, gb.complete


def _series_for(gb, D):
    """(series, certified) from a complete basis, else an advisory fit of the counts."""
    from .gbasis import dimension_sequence
    from .hilbert import fit_rational, series_from_automaton
    if gb.complete:
        return series_from_automaton(gb), True
    dims = dimension_sequence(gb, D)
    e = (D - 2) // 2
    return (fit_rational(list(dims), e) if e >= 0 else None), False


def cmd_hilbert(af, args):
    from .gbasis import complete, dimension_sequence
    gb = complete(af.presentation, args.maxdeg)
    dims = dimension_sequence(gb, args.maxdeg)
    s, certified = _series_for(gb, args.maxdeg)
    result = {"dimensions": list(dims), "dimensions_status": dims.status,
              "series": None if s is None else {"numerator": list(s.numerator),
                                                "denominator": list(s.denominator),
                                                "text": str(s)},
              "series_certified": certified}
    lines = ["dimensions: " + " ".join(map(str, dims)) + f"  ({dims.status})",
             f"series: {s if s is not None else 'none found'}"
             + ("" if certified or s is None else f" (advisory, {s.note})")]
    return result, {"groebner_complete": gb.complete}, lines, certified


def cmd_gkdim(af, args):
    from .gbasis import complete
    from .hilbert import series_growth
    gb = complete(af.presentation, args.maxdeg)
    s, certified = _series_for(gb, args.maxdeg)
    if s is None:
        raise Inconclusive(f"no rational series fits the dimensions through degree {args.maxdeg}")
    g = series_growth(s)
    result = {"growth": g.kind, "gkdim": g.gkdim, "series": str(s), "certified": certified}
    lines = [str(g) + ("" if certified else " (advisory)"), f"series: {s}"]
    return result, {"groebner_complete": gb.complete}, lines, certified


def cmd_resolve(af, args):
    from .gbasis import complete
    from .regularity import (GradedAlgebra, compose_is_zero, euler_check,
                             hilbert_from_resolution, is_minimal, minimal_free_resolution)
    p = af.presentation
    gb = complete(p, args.maxdeg)
    alg = GradedAlgebra(gb)
    c = minimal_free_resolution(p, args.homdeg, args.maxdeg, gb)
    certs = {"differentials_compose_to_zero": compose_is_zero(c, alg),
             "minimal": is_minimal(c), "groebner_complete": gb.complete}
    result = {"terminated": c.terminated, "length": c.length, "shifts": c.shifts(),
              "differentials": [m.format() for m in c.differentials]}
    if c.terminated:
        certs["euler_identity"] = euler_check(c, alg, args.maxdeg)
        result["series"] = str(hilbert_from_resolution(c))
    lines = [f"shifts: {c.shifts()}", f"terminated: {c.terminated}"]
    for k, m in enumerate(c.differentials, 1):
        lines.append(f"d{k}: {m.format()}")
    return result, certs, lines, c.terminated


def cmd_regular(af, args):
    from .regularity import as_regular_report
    v = as_regular_report(af.presentation, args.homdeg, args.maxdeg)
    result = {"status": v.status, "regular": v.regular, "gldim": v.gldim,
              "gorenstein": v.gorenstein, "ell": v.ell,
              "growth": None if v.growth is None else v.growth.kind,
              "gkdim": None if v.growth is None else v.growth.gkdim,
              "shifts": v.shifts, "series": None if v.series is None else str(v.series)}
    certs = {k: val for k, val in v.certificates.items() if k not in ("H", "D")}
    lines = [f"verdict: {v.status}", f"gldim: {v.gldim}", f"gorenstein: {v.gorenstein}",
             f"ell: {v.ell}", f"growth: {v.growth}", f"shifts: {v.shifts}"]
    return result, certs, lines, v.regular is not None


def cmd_nakayama(af, args):
    from .gbasis import complete
    from .regularity import minimal_free_resolution, nakayama_data, standard_form_vmv
    p = af.presentation
    gb = complete(p, args.maxdeg)
    c = minimal_free_resolution(p, args.homdeg, args.maxdeg, gb)
    if not c.terminated:
        raise Inconclusive(f"resolution did not terminate within H={args.homdeg}")
    try:
        v, M = standard_form_vmv(c, p)
        nd = nakayama_data(v, M, p)
    except ValueError as e:
        raise Inconclusive(str(e)) from None
    result = {"v": [f.format() for f in v], "M": [[f.format(p.order) for f in r] for r in M],
              "Q": _matrix(nd.Q), "tau": _matrix(nd.tau), "pi": nd.pi.format(p.order)}
    certs = {"pi_invariant": nd.pi_invariant, "preserves_relations": nd.preserves_relations}
    lines = [f"Q = {_matrix(nd.Q)}", f"tau = {_matrix(nd.tau)}", f"pi = {nd.pi.format(p.order)}",
             f"tau(pi) = pi: {nd.pi_invariant}", f"tau preserves relations: {nd.preserves_relations}"]
    return result, certs, lines, nd.pi_invariant and nd.preserves_relations


def cmd_points(af, args):
    from .pointscheme import (BudgetExceeded, DEFAULT_PRIMES, det_locus, matrix_form,
                              sigma_cross_product, stabilization_probe, truncated_scheme_system)
    p = af.presentation
    m = args.mmax
    sys_m = truncated_scheme_system(p, m)
    result = {"m": m, "variables": list(sys_m.names),
              "equations": [e.format() for e in sys_m.equations]}
    lines = [f"X_{m}: {len(sys_m.equations)} equations in {len(sys_m.names)} variables"]
    conclusive = True
    if args.matrix:
        left, right = matrix_form(p)
        dl = det_locus(left)
        result["matrix"] = {
            "left": [[e.format() for e in r] for r in left.matrix],
            "right": [[e.format() for e in r] for r in right.matrix],
            "det_left": dl.format(), "det_right": det_locus(right).format(),
            "det_normalized": det_locus(left, normalize=True).format(),
            "sigma": [e.format() for e in sigma_cross_product(left)],
        }
        lines.append(f"det = {dl.format()}")
        lines.append("sigma = (" + ", ".join(result["matrix"]["sigma"]) + ")")
    probes = {}
    for prime in (args.prime or DEFAULT_PRIMES):
        try:
            rows = stabilization_probe(p, prime, m)
        except BudgetExceeded as e:
            probes[prime] = {"error": str(e)}
            conclusive = False
            lines.append(f"F_{prime}: {e}")
            continue
        except ValueError as e:
            probes[prime] = {"error": str(e)}
            lines.append(f"F_{prime}: skipped ({e})")
            continue
        probes[prime] = [{"m": r.m, "count": r.count, "injective": r.injective,
                          "surjective": r.surjective} for r in rows]
        lines.append(f"F_{prime}: " + ", ".join(
            f"|X_{r.m}|={r.count}" + ("" if r.injective is None else
                                      f" (phi_{r.m} inj={r.injective} surj={r.surjective})")
            for r in rows))
    result["probes"] = probes
    return result, {}, lines, conclusive


def cmd_twist(af, args):
    from .gbasis import complete, dimension_sequence
    from .twist import GradedAutomorphism, preserves_relations, twist_presentation, untwist_round_trip
    p = af.presentation
    if args.tau is None:
        raise UsageError("twist needs --tau")
    try:
        tau = GradedAutomorphism(parse_tau(args.tau, p.n))
    except ValueError as e:
        raise UsageError(str(e)) from None
    preserves = preserves_relations(p, tau)
    t = twist_presentation(p, tau)
    dims0 = dimension_sequence(complete(p, args.maxdeg), args.maxdeg)
    dims1 = dimension_sequence(complete(t, args.maxdeg), args.maxdeg)
    result = {"relations": [f.format(t.order) for f in t.given_relations],
              "presentation": print_algebra(AlgebraFile(t, {})),
              "tau_is_automorphism": preserves, "dimensions": list(dims1)}
    certs = {"round_trip": untwist_round_trip(p, tau), "dimensions_preserved": list(dims0) == list(dims1)}
    lines = ["twisted relations:"] + ["  " + r for r in result["relations"]]
    if not preserves:
        lines.append("note: tau does not preserve the relations, so it is not an algebra automorphism")
    return result, certs, lines, True


def cmd_normal(af, args):
    from .gbasis import complete, find_normal_elements
    p = af.presentation
    gb = complete(p, args.maxdeg)
    d = args.degree
    D = args.check_degree if args.check_degree is not None else args.maxdeg - d
    if D < 1:
        raise UsageError("--maxdeg must exceed --degree")
    try:
        ne = find_normal_elements(gb, d, D)
    except ValueError as e:
        raise Inconclusive(str(e)) from None
    result = {"degree": d, "checked_degree": ne.checked_degree, "exhaustive": ne.exhaustive,
              "method": ne.method, "basis": [g.format(p.order) for g in ne]}
    lines = [f"{len(ne)} normal element(s) in degree {d} ({ne.method}, checked through {D})"]
    lines += ["  " + g.format(p.order) for g in ne]
    return result, {}, lines, True


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def run_command(name: str, af: AlgebraFile, args) -> tuple:
    """Build the machine report; returns (report, human lines, conclusive)."""
    p = af.presentation
    result, certs, lines, conclusive = HANDLERS[name](af, args)
    canon = print_algebra(af)
    report = {
        "command": name,
        "algebra": {"generators": list(p.gens.names), "weights": list(p.gens.weights),
                    "relations": [f.format(p.order) for f in p.given_relations]},
        "params": dict(sorted(af.params.items())),
        "digest": hashlib.sha256(canon.encode()).hexdigest(),
        "bounds": {"D": args.maxdeg, "H": args.homdeg, "primes": list(args.prime or [])},
        "result": result,
        "certificates": certs,
        "version": __version__,
    }
    return exact(report), lines, conclusive


def dumps(report) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _diff(a, b, path="$"):
    if type(a) is not type(b):
        return [f"{path}: {a!r} != {b!r}"]
    if isinstance(a, dict):
        out = []
        for k in sorted(set(a) | set(b)):
            if k not in a or k not in b:
                out.append(f"{path}.{k}: present on one side only")
            else:
                out += _diff(a[k], b[k], f"{path}.{k}")
        return out
    if isinstance(a, list):
        if len(a) != len(b):
            return [f"{path}: length {len(a)} != {len(b)}"]
        return [x for i, (u, v) in enumerate(zip(a, b)) for x in _diff(u, v, f"{path}[{i}]")]
    return [] if a == b else [f"{path}: {a!r} != {b!r}"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ncga", description="Exact computations with graded algebras.")
    ap.add_argument("--version", action="version", version=f"ncga {__version__}")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("algebra", help=".alg file, or the name of a bundled algebra")
    ap.add_argument("--maxdeg", type=int, default=12, metavar="D", help="degree bound (default 12)")
    ap.add_argument("--homdeg", type=int, default=6, metavar="H", help="homological bound (default 6)")
    ap.add_argument("--prime", type=int, action="append", metavar="P", help="prime for point counts (repeatable)")
    ap.add_argument("--json", action="store_true", help="print the machine report")
    ap.add_argument("--fixture-check", metavar="GOLDEN", help="compare the machine report with a golden file")
    ap.add_argument("--param", action="append", metavar="NAME=VALUE", help="override a parameter")
    ap.add_argument("--tau", help="twisting matrix, rows separated by ';' and entries by ','; column j is the image of generator j")
    ap.add_argument("--degree", type=int, default=1, help="degree for the normal element search")
    ap.add_argument("--check-degree", type=int, help="normality is checked through this degree")
    ap.add_argument("--matrix", action="store_true", help="points: include matrix forms and determinant")
    ap.add_argument("--mmax", type=int, default=3, help="points: largest truncation m (default 3)")
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:     # usage errors, --help, --version
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    if args.maxdeg < 1 or args.homdeg < 1 or args.mmax < 1:
        print("ncga: error: bounds must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        af = load_algebra(args.algebra, parse_params(args.param))
    except UsageError as e:
        print(f"ncga: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as e:
        print(f"ncga: parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    start = time.perf_counter()
    try:
        report, lines, conclusive = run_command(args.command, af, args)
    except UsageError as e:
        print(f"ncga: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Inconclusive as e:
        print(f"ncga: inconclusive: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except Exception as e:  # noqa: BLE001
        print(f"ncga: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    elapsed = time.perf_counter() - start

    if args.json:
        sys.stdout.write(dumps(report))
    else:
        print(f"{args.command} {af.presentation.name} (D={args.maxdeg}, H={args.homdeg})")
        for line in lines:
            print(line)
        print(f"time: {elapsed:.2f} s")

    if args.fixture_check:
        try:
            golden = json.loads(Path(args.fixture_check).read_text(encoding="utf-8"))
        except (OSError, ValueError) as e:
            print(f"ncga: error: cannot read golden report: {e}", file=sys.stderr)
            return EXIT_USAGE
        diffs = _diff(golden, report)
        if diffs:
            print("fixture check failed:", file=sys.stderr)
            for d in diffs[:20]:
                print("  " + d, file=sys.stderr)
            return EXIT_INCONCLUSIVE
        print("fixture check passed", file=sys.stderr)
    return EXIT_OK if conclusive else EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
