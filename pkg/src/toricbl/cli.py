"""Command-line front end: ``toricbl analyze | rank2 | width``.

Reports are plain nested dicts whose leaves are strings, booleans or
``None``; integers travel as decimal strings and rationals as ``"a/b"`` so a
JSON dump parses back to the identical object.  The text rendering lists the
same leaves, one ``path = value`` line each.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .blowup import inclusion_chain, nef_chamber_fan
from .exact import LatticeVector, hermite_normal_form
from .ideal import BUDGETS, BudgetExceeded, Binomial, format_matrix, lib_directions, surface_ideal, test_comp_basis
from .mult1 import decide_mult1
from .polytope import Polygon, parse_points, six_direction_check, width_data
from .rank2 import (
    H1,
    H2,
    E,
    Rank2Model,
    build_model,
    certify,
    effective_cone,
    fibonacci_model,
    normalize_fan,
    table,
    zero_curve_family,
)
from .toric import build_surface, read_fan

SCHEMA = 1

EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2


class InvalidInput(ValueError):
    pass


# ---------------------------------------------------------------------------
# encoding


def encode(x):
    """Canonical JSON-safe form: decimal strings for numbers, sorted sets."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return [encode(v) for v in sorted(x)]
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    raise TypeError(f"cannot encode {type(x).__name__}")


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def flatten(report, prefix: str = "") -> list[tuple[str, object]]:
    """Leaves as ``(path, value)``; lists without dicts inside count as one leaf."""
    out = []
    if isinstance(report, dict):
        if not report:
            return [(prefix, {})]
        for k in sorted(report):
            out += flatten(report[k], f"{prefix}.{k}" if prefix else k)
    elif isinstance(report, list):
        if not _has_dict(report):
            return [(prefix, report)]
        for i, v in enumerate(report):
            out += flatten(v, f"{prefix}[{i}]")
    else:
        out.append((prefix, report))
    return out


def _has_dict(x) -> bool:
    if isinstance(x, dict):
        return True
    return isinstance(x, list) and any(_has_dict(v) for v in x)


def to_text(report: dict) -> str:
    lines = []
    for path, value in flatten(report):
        lines.append(f"{path} = {json.dumps(value, ensure_ascii=False)}")
    return "\n".join(lines) + "\n"


def parse_text(text: str) -> list[tuple[str, object]]:
    """Inverse of :func:`to_text` at the level of leaves."""
    out = []
    for line in text.splitlines():
        path, _, value = line.partition(" = ")
        out.append((path, json.loads(value)))
    return out


# ---------------------------------------------------------------------------
# report sections


def _dirs(vs) -> list:
    return [list(v) for v in sorted(LatticeVector(v) for v in vs)]


def _names(r: int) -> list[str]:
    return [f"x{i + 1}" for i in range(r)]


def _binomial(b: Binomial, names) -> dict:
    return {"text": b.format(names), "plus": list(b.plus), "minus": list(b.minus)}


def surface_section(s) -> dict:
    return {
        "rays": [list(r) for r in s.rays],
        "class_rank": s.class_rank,
        "torsion": list(s.torsion),
        "grading": [list(row) for row in s.grading.tolist()],
        "grading_hnf": [list(row) for row in hermite_normal_form(s.grading).tolist()],
        "intersection_form": [list(row) for row in s.form.matrix],
        "ray_classes": [list(c.free_part) for c in s.ray_classes],
        "nef_rays": [list(c.free_part) for c in s.nef_rays],
        "ample_class": list(s.ample_class.free_part),
    }


def rank2_section(m: Rank2Model) -> dict:
    eff, pseudo = certify(m)
    rep = effective_cone(m)
    rows = []
    for row in table(m):
        rows.append({**row, "class": list(row["class"])})
    return {
        "p": m.p,
        "q": m.q,
        "continued_fraction": list(m.c),
        "a": list(m.a),
        "b": list(m.b),
        "beta": list(m.beta),
        "table": rows,
        "eff_rays": [_class_label(i) for i in rep.ray_indices],
        "eff_ray_classes": [list(x) for x in rep.rays],
        "zero_curve": rep.zero_curve,
        "tangency": [_basis_label(t, m) for t in rep.tangency],
        "chain_test": eff is not None,
        "chain_rays": [list(x) for x in eff.rays] if eff is not None else None,
        "pseudogenerating": bool(pseudo) if pseudo is not None else False,
        "pseudo_failures": [[list(d), lab] for d, lab in pseudo.failures] if pseudo is not None else [],
    }


def _class_label(i) -> str:
    return "E" if i is None else f"C{i}"


def _basis_label(t, m: Rank2Model) -> str:
    if tuple(t) == H1:
        return "H1"
    if tuple(t) == H2:
        return "H2"
    if tuple(t) == E:
        return "E"
    return f"C{m.classes.index(tuple(t))}"


def _rank2_model_of(s):
    if s.r != 4:
        return None
    try:
        p, q = normalize_fan(s.rays)
    except ValueError:
        return None
    if q < 2:
        return None
    return build_model(p, q)


def analyze(s, budget: str = "normal") -> tuple[dict, bool]:
    """Full report for a surface; the flag is ``True`` when a budget ran out."""
    cap = BUDGETS[budget]
    exhausted = False
    report: dict = {"schema": SCHEMA, "command": "analyze", "budget": budget, "surface": encode(surface_section(s))}
    names = _names(s.r)
    try:
        si = surface_ideal(s, cap)
    except BudgetExceeded as exc:
        partial = [
            {"plus": list(a), "minus": list(b)} for a, b in (exc.partial or [])
        ]
        report["ideal"] = encode({"complete": False, "partial_generators": partial})
        report["status"] = "partial"
        return report, True
    lib = lib_directions(s, cap)
    tc = test_comp_basis(si.minimal)
    cls = si.classification
    report["ideal"] = encode(
        {
            "complete": True,
            "markov": [_binomial(b, names) for b in si.markov.generators],
            "minimal": [_binomial(b, names) for b in si.minimal],
            "classification": {
                "kind": cls.kind,
                "matrix": format_matrix(cls.matrix, names) if cls.matrix is not None else None,
                "diagnostic": cls.diagnostic,
            },
            "lib": _dirs(lib.directions),
            "lib_all_minimal_bases": _dirs(lib.union),
            "lib_unique": lib.unique,
        }
    )
    report["test_comp"] = encode({"passed": tc.passed, "witnesses": [list(w) for w in tc.witnesses]})
    chain = inclusion_chain(s, cap)
    report["directions"] = encode(
        {
            "neg": _dirs(chain.neg),
            "wd": _dirs(chain.wd),
            "lib": _dirs(chain.lib),
            "chain_holds": chain.holds,
            "candidates_widened": chain.widened,
        }
    )
    verdict = decide_mult1(s, cap)
    if verdict.status is None:
        exhausted = True
    details = {}
    if "dims" in verdict.details:
        details = {"dims": verdict.details["dims"], "base": verdict.details["base"]}
    report["mult1"] = encode({"verdict": verdict.label, "reason": verdict.reason, **details})
    if s.class_rank == 2:
        ch = nef_chamber_fan(s, cap)
        report["chambers"] = encode(
            {
                "nef_rays": [list(r) for r in ch.nef_rays],
                "chambers": [{"rays": [list(r) for r in c.rays], "width_directions": _dirs(c.minimizers)} for c in ch.chambers],
                "walls": [{"ray": list(w.ray), "width_directions": _dirs(w.minimizers)} for w in ch.walls],
                "basis": _dirs(ch.basis),
            }
        )
    m = _rank2_model_of(s)
    if m is not None:
        report["rank2"] = encode(rank2_section(m))
    report["status"] = "partial" if exhausted else "complete"
    return report, exhausted


def width_report(poly: Polygon) -> dict:
    lw, wd = width_data(poly)
    trip = six_direction_check(wd) if len(wd) == 6 else None
    return {
        "schema": SCHEMA,
        "command": "width",
        "vertices": encode([list(v) for v in poly.vertices]),
        "lattice_width": encode(lw),
        "width_directions": encode(_dirs(wd)),
        "zero_sum_triple": encode([list(v) for v in trip]) if trip else None,
    }


def rank2_report(m: Rank2Model) -> dict:
    return {"schema": SCHEMA, "command": "rank2", "rank2": encode(rank2_section(m))}


def rank2_csv(m: Rank2Model) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "c", "a", "b", "beta", "class_H1", "class_H2", "class_E", "square", "eff_ray"])
    for row in table(m):
        c = row["class"]
        w.writerow(
            [row["i"], "" if row["c"] is None else row["c"], row["a"], row["b"], row["beta"], c[0], c[1], c[2], encode(row["square"]), int(row["ray"])]
        )
    return buf.getvalue()


def rank2_plotdata(m: Rank2Model) -> str:
    """Eff ray coordinates in the basis (H1, H2, E), one ray per line."""
    rep = effective_cone(m)
    lines = ["# label H1 H2 E"]
    for i, x in zip(rep.ray_indices, rep.rays):
        lines.append(f"{_class_label(i)} {x[0]} {x[1]} {x[2]}")
    for t in rep.tangency:
        lines.append(f"tangent:{_basis_label(t, m)} {t[0]} {t[1]} {t[2]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument handling


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("toricbl") / "fixtures" / name))


def _read(path: str, suffix: str = "") -> str:
    """Read ``path``; a bare name falls back to the bundled fixture of that name."""
    p = Path(path)
    if not p.exists() and p.parent == Path("."):
        for cand in (fixture_path(path), fixture_path(path + suffix)):
            if cand.is_file():
                p = cand
                break
    try:
        return p.read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None


def _read_grading(path: str) -> list[list[int]]:
    rows = []
    for lineno, raw in enumerate(_read(path, ".grading").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([int(t) for t in line.replace(",", " ").split()])
        except ValueError:
            raise InvalidInput(f"line {lineno}: grading rows must be integers: {raw!r}") from None
    return rows


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="toricbl", description="Blow-ups of toric surfaces at a general point.")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="full analysis of a complete fan")
    a.add_argument("fan_file")
    a.add_argument("--budget", choices=sorted(BUDGETS), default="normal")
    a.add_argument("--grading", metavar="FILE", help="rows of a grading matrix to use as the class basis")
    a.add_argument("--emit", choices=["json", "text"], default="text")

    r = sub.add_parser("rank2", help="Picard rank two models (p, q)")
    g = r.add_mutually_exclusive_group()
    g.add_argument("--fibonacci", type=int, metavar="F")
    g.add_argument("--zero-family", nargs=3, metavar=("R", "S", "SIGN"))
    r.add_argument("pq", nargs="*", type=int, metavar="P Q")
    r.add_argument("--emit", choices=["csv", "json", "plotdata", "text"], default="text")

    w = sub.add_parser("width", help="lattice width of a polygon")
    w.add_argument("polytope_file")
    w.add_argument("--emit", choices=["json", "text"], default="text")
    return ap


def _rank2_args(args) -> Rank2Model:
    if args.fibonacci is not None:
        if args.pq:
            raise InvalidInput("give either P Q or a family option, not both")
        return fibonacci_model(args.fibonacci)
    if args.zero_family is not None:
        if args.pq:
            raise InvalidInput("give either P Q or a family option, not both")
        r_, s_, sign = args.zero_family
        signs = {"+": 1, "-": -1, "+1": 1, "-1": -1, "1": 1}
        if sign not in signs:
            raise InvalidInput(f"sign must be + or -, got {sign!r}")
        try:
            return zero_curve_family(int(r_), int(s_), signs[sign])
        except ValueError as exc:
            raise InvalidInput(str(exc)) from None
    if len(args.pq) != 2:
        raise InvalidInput("rank2 needs P Q, --fibonacci F or --zero-family R S SIGN")
    return build_model(*args.pq)


def _emit(report: dict, fmt: str, out) -> None:
    out.write(to_json(report) if fmt == "json" else to_text(report))


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "analyze":
            fan = read_fan(_read(args.fan_file, ".fan"))
            grading = _read_grading(args.grading) if args.grading else None
            s = build_surface(fan, grading)
            report, exhausted = analyze(s, args.budget)
            _emit(report, args.emit, out)
            return EXIT_BUDGET if exhausted else EXIT_OK
        if args.command == "rank2":
            m = _rank2_args(args)
            if args.emit == "csv":
                out.write(rank2_csv(m))
            elif args.emit == "plotdata":
                out.write(rank2_plotdata(m))
            else:
                _emit(rank2_report(m), args.emit, out)
            return EXIT_OK
        if args.command == "width":
            pts = parse_points(_read(args.polytope_file, ".poly"), "vertex")
            if not pts:
                raise InvalidInput("no vertices given")
            poly = Polygon.hull(pts)
            _emit(width_report(poly), args.emit, out)
            return EXIT_OK
    except (InvalidInput, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_INVALID  # pragma: no cover


__all__ = [
    "analyze",
    "encode",
    "flatten",
    "main",
    "parse_text",
    "rank2_csv",
    "rank2_plotdata",
    "rank2_report",
    "to_json",
    "to_text",
    "width_report",
]
