"""Command-line front end.

Commands operate on a stacky-fan JSON file
({"dim": int, "stacky_vectors": [[int]], "max_cones": [[int]],
optional "labels": [int]}) and emit text, canonical JSON, or CSV.
Exit codes: 0 success, 2 verification failure, 1 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Optional

from . import crc as crc_mod
from .extended import build_extended
from .fan import (StackyFan, basic_box_class, compute_box, fan_from_json,
                  fan_to_json, is_gorenstein, star_subdivide_xbar,
                  validate_fan, wall_curve_classes)
from .mirror import extract_open_gw, hori_vafa, lf_superpotential, mirror_map
from .series import series_to_json


class SchemaError(ValueError):
    pass


def _frac(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def _load_fan(path: str) -> StackyFan:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise SchemaError(f"cannot read fan file {path}: {e}")
    if not isinstance(data, dict):
        raise SchemaError("fan file must hold a JSON object")
    for key in ("dim", "stacky_vectors", "max_cones"):
        if key not in data:
            raise SchemaError(f"fan file missing required key {key!r}")
    try:
        return fan_from_json(data)
    except (ValueError, TypeError) as e:
        raise SchemaError(f"invalid fan data: {e}")


def _series_json(s) -> dict:
    return series_to_json(s)


def _emit(payload: dict, fmt: str, out: Optional[str],
          table: Optional[tuple[list[str], list[list]]] = None) -> None:
    if fmt == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        if table is not None:
            header, rows = table
            w.writerow(header)
            for row in rows:
                w.writerow(row)
        else:
            w.writerow(["key", "value"])
            for k in sorted(payload):
                w.writerow([k, json.dumps(payload[k], sort_keys=True)])
        text = buf.getvalue()
    else:
        lines = []
        if table is not None:
            header, rows = table
            lines.append("  ".join(header))
            for row in rows:
                lines.append("  ".join(str(x) for x in row))
        else:
            for k in sorted(payload):
                lines.append(f"{k}: {json.dumps(payload[k], sort_keys=True)}")
        text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _gauge_arg(arg: Optional[str]) -> Optional[tuple[int, ...]]:
    if arg is None:
        return None
    try:
        return tuple(sorted(int(x) for x in arg.split(",")))
    except ValueError:
        raise SchemaError(f"bad --gauge value {arg!r}; expected e.g. '0,2'")


# -- command implementations ---------------------------------------------


def cmd_validate(args) -> int:
    fan = _load_fan(args.fan)
    rep = validate_fan(fan)
    _emit({"simplicial": rep.simplicial, "complete": rep.complete,
           "errors": list(rep.errors), "valid": rep.valid},
          args.format, args.out)
    return 0 if rep.valid else 2


def cmd_box(args) -> int:
    fan = _load_fan(args.fan)
    box = compute_box(fan)
    rows = [[_frac_vec(el.nu), list(el.cone), [_frac(t) for t in el.t],
             _frac(el.age), el.age <= 1] for el in box]
    payload = {"gorenstein": is_gorenstein(fan),
               "box": [{"nu": r[0], "cone": r[1], "t": r[2], "age": r[3],
                        "extended": r[4]} for r in rows]}
    table = (["nu", "cone", "t", "age", "extended"],
             [[json.dumps(r[0]), json.dumps(r[1]), json.dumps(r[2]),
               r[3], r[4]] for r in rows])
    _emit(payload, args.format, args.out, table)
    return 0


def _frac_vec(v) -> list:
    return [_frac(x) for x in v]


def cmd_check(args) -> int:
    fan = _load_fan(args.fan)
    rep = validate_fan(fan)
    if not rep.valid:
        _emit({"valid": False, "errors": list(rep.errors)}, args.format, args.out)
        return 2
    walls = wall_curve_classes(fan)
    payload = {
        "gorenstein": is_gorenstein(fan),
        "walls": [{"wall": list(w.wall), "relation": _frac_vec(w.relation),
                   "c1": _frac(w.c1)} for w in walls],
        "semi_fano": all(w.c1 >= 0 for w in walls),
        "fano": all(w.c1 > 0 for w in walls),
    }
    table = (["wall", "relation", "c1"],
             [[json.dumps(list(w.wall)), json.dumps(_frac_vec(w.relation)),
               _frac(w.c1)] for w in walls])
    _emit(payload, args.format, args.out, table)
    return 0


def _potential_json(pot) -> dict:
    return {"gauge": list(pot.gauge),
            "terms": [{"vector": _frac_vec(t.vector),
                       "ray_index": t.ray_index,
                       "extended": t.is_extended,
                       "coefficient": _series_json(t.coefficient)}
                      for t in pot.terms]}


def cmd_hori_vafa(args) -> int:
    fan = _load_fan(args.fan)
    ext = build_extended(fan)
    pot = hori_vafa(ext, _gauge_arg(args.gauge), order=args.order)
    _emit(_potential_json(pot), args.format, args.out)
    return 0


def cmd_mirror_map(args) -> int:
    fan = _load_fan(args.fan)
    ext = build_extended(fan)
    mm = mirror_map(ext, args.order)
    payload = {"q_names": list(mm.q_names), "tau_names": list(mm.tau_names),
               "q_denoms": list(mm.q_denoms),
               "log_corrections": [_series_json(s) for s in mm.log_corrections],
               "tau": [_series_json(s) for s in mm.tau]}
    _emit(payload, args.format, args.out)
    return 0


def cmd_superpotential(args) -> int:
    fan = _load_fan(args.fan)
    ext = build_extended(fan)
    lf = lf_superpotential(ext, args.order, _gauge_arg(args.gauge))
    payload = _potential_json(lf.potential)
    payload["status"] = lf.status
    _emit(payload, args.format, args.out)
    return 0


def cmd_open_gw(args) -> int:
    fan = _load_fan(args.fan)
    ext = build_extended(fan)
    lf = lf_superpotential(ext, args.order, _gauge_arg(args.gauge))
    tab = extract_open_gw(lf, ext)
    rows = []
    for (j, qe, te), v in sorted(tab.entries.items()):
        rows.append([j, [_frac(x) for x in qe], list(te), _frac(v)])
    payload = {"status": tab.status,
               "entries": [{"ray": r[0], "q_exp": r[1], "tau_exp": r[2],
                            "invariant": r[3]} for r in rows]}
    table = (["ray", "q_exp", "tau_exp", "invariant"],
             [[r[0], json.dumps(r[1]), json.dumps(r[2]), r[3]] for r in rows])
    _emit(payload, args.format, args.out, table)
    return 0


def cmd_xbar(args) -> int:
    fan = _load_fan(args.fan)
    box = compute_box(fan)
    extended = [k for k, el in enumerate(box) if el.age <= 1]
    if not extended:
        raise SchemaError("fan has no twisted sector of age at most one")
    beta = basic_box_class(fan, extended[0], box)
    xbar = star_subdivide_xbar(fan, beta)
    payload = {"fan": fan_to_json(xbar.fan),
               "boundary_vector": _frac_vec(xbar.boundary_vector),
               "infinity_vector": _frac_vec(xbar.infinity_vector),
               "new_ray_index": xbar.new_ray_index,
               "replaced_ray": xbar.replaced_ray,
               "note": xbar.beta_bar_note}
    _emit(payload, args.format, args.out)
    return 0


def cmd_crc(args) -> int:
    fan = _load_fan(args.fan)
    if not args.resolution:
        raise SchemaError("crc requires --resolution FILE")
    res = _load_fan(args.resolution)
    pair = crc_mod.ResolutionPair.make(fan, res)
    payload = crc_mod.pair_report(pair, order=args.order)
    failed = not payload["crepancy"]["crepant"]
    if args.wpn is not None:
        reports = crc_mod.crc_verify(args.wpn, order=args.order,
                                     samples=args.samples, tol=args.tol)
        payload["reports"] = [r.to_json() for r in reports]
        failed = failed or any(r.status != "pass" for r in reports)
    elif "reports" in payload:
        failed = failed or any(r["status"] != "pass" for r in payload["reports"])
    _emit(payload, args.format, args.out)
    return 2 if failed else 0


def cmd_specialize(args) -> int:
    fan = _load_fan(args.fan)
    pair = None
    if args.resolution:
        pair = crc_mod.ResolutionPair.make(fan, _load_fan(args.resolution))
    reports = crc_mod.specialization_check(pair, order=args.order)
    payload = {"reports": [r.to_json() for r in reports]}
    _emit(payload, args.format, args.out)
    return 0 if all(r.status == "pass" for r in reports) else 2


COMMANDS = {
    "validate": cmd_validate,
    "box": cmd_box,
    "check": cmd_check,
    "hori-vafa": cmd_hori_vafa,
    "mirror-map": cmd_mirror_map,
    "superpotential": cmd_superpotential,
    "open-gw": cmd_open_gw,
    "xbar": cmd_xbar,
    "crc": cmd_crc,
    "specialize": cmd_specialize,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="orbimirror",
        description="Landau-Ginzburg mirrors, open invariants, and "
                    "crepant-resolution checks for toric orbifolds.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("fan", help="path to a stacky-fan JSON file")
        sp.add_argument("--order", type=int, default=10)
        sp.add_argument("--gauge", default=None,
                        help="comma-separated ray indices of the gauge cone")
        sp.add_argument("--format", choices=("text", "json", "csv"),
                        default="text")
        sp.add_argument("--samples", type=int, default=20)
        sp.add_argument("--tol", type=float, default=1e-10)
        sp.add_argument("--resolution", default=None,
                        help="path to the resolution fan JSON file")
        sp.add_argument("--wpn", type=int, default=None,
                        help="n for the P(1,...,1,n) family closed forms")
        sp.add_argument("--out", default=None, help="write output to a file")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.order < 1:
        print("error: --order must be >= 1", file=sys.stderr)
        return 1
    if args.tol <= 0:
        print("error: --tol must be positive", file=sys.stderr)
        return 1
    try:
        return COMMANDS[args.command](args)
    except SchemaError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except crc_mod.MismatchBeyondTolerance as e:
        print(f"verification failure: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
