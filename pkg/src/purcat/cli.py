"""Command line front end: one workspace file in, one report out.

    purcat <command> [--json] [--seed N] [--depth N] [--jobs N] <input>

The input is a JSON workspace file (or - for stdin); the report goes to
stdout as text, or as JSON with --json.  Exit status is 0 for a clean
run, 1 for a refuted claim (a NotPure verdict, a failing adjunction
link, an invalid certificate), and 2 for an error.  Runs are
deterministic: the same input and seed produce the same report up to
the timing figure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from purcat.exact_linalg import InputError, WorkbenchError
from purcat.complexes import (
    cone,
    homology,
    homology_invariants,
    is_acyclic,
    tensor_module_complex,
    truncate_geq,
    truncate_leq,
)
from purcat.purity import default_battery, is_pure_acyclic, is_pure_qis
from purcat.resolutions import (
    INJECTIVE,
    PROJECTIVE,
    DepthInsufficient,
    check_colimit_sum_formula,
    check_limit_product_formula,
    colimit_tower,
    injective_tower,
    limit_tower,
    projective_tower,
    required_depth,
    resolve,
    validate_certificate,
    validate_direct_tower,
    validate_inverse_tower,
)
from purcat.monoidal import check_dpur_adjunction, phom, validate_derived_hom
from purcat.serialize import (
    FORMAT,
    WorkbenchInput,
    decode_certificate,
    encode_certificate,
    encode_complex,
    parse_input,
)

DEFAULT_SEED = 1729

COMMANDS = (
    "homology",
    "cone",
    "truncate",
    "purity",
    "qis",
    "resolve",
    "towers",
    "phom",
    "adjunction",
    "validate-cert",
)


# ---------------------------------------------------------------------------
# parameter plumbing


def _window(cx) -> list:
    if not cx.modules:
        return []
    return [cx.lo, cx.hi]


def _homology_table(cx) -> dict:
    table = homology_invariants(cx)
    return {f"H^{i}": list(table[i]) for i in sorted(table)}


def _complex_arg(wi: WorkbenchInput, key: str = "complex"):
    name = wi.parameters.get(key)
    if not isinstance(name, str):
        raise InputError(f"parameters must name a complex under {key!r}")
    if name not in wi.complexes:
        raise InputError(f"unknown complex {name!r}")
    return name, wi.complexes[name]


def _map_arg(wi: WorkbenchInput, key: str = "map"):
    name = wi.parameters.get(key)
    if not isinstance(name, str):
        raise InputError(f"parameters must name a chain map under {key!r}")
    if name not in wi.maps:
        raise InputError(f"unknown map {name!r}")
    return name, wi.maps[name]


def _side_arg(wi: WorkbenchInput) -> str:
    side = wi.parameters.get("side")
    if side not in (INJECTIVE, PROJECTIVE):
        raise InputError('parameters must set "side" to injective or projective')
    return side


def _depth_arg(wi: WorkbenchInput, args):
    if args.depth is not None:
        return args.depth
    depth = wi.parameters.get("depth")
    if depth is not None and (not isinstance(depth, int) or isinstance(depth, bool)):
        raise InputError("depth must be an integer")
    return depth


def _recheck_probes(cx, battery, jobs: int) -> int:
    """Independent soundness pass: every probe tensor must be acyclic."""

    def check(probe):
        return is_acyclic(tensor_module_complex(cx, probe))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            flags = list(pool.map(check, battery.probes))
    else:
        flags = [check(p) for p in battery.probes]
    if not all(flags):
        raise WorkbenchError("pure verdict contradicted by a tensor probe")
    return len(flags)


# ---------------------------------------------------------------------------
# command handlers


def cmd_homology(wi, args):
    name, cx = _complex_arg(wi)
    degree = wi.parameters.get("degree")
    if degree is not None:
        if not isinstance(degree, int) or isinstance(degree, bool):
            raise InputError("degree must be an integer")
        table = {f"H^{degree}": list(homology(cx, degree).invariant_factors)}
    else:
        table = _homology_table(cx)
    return "ok", {"complex": name, "window": _window(cx), "homology": table}


def cmd_cone(wi, args):
    name, f = _map_arg(wi)
    c = cone(f).complex
    return "ok", {
        "map": name,
        "window": _window(c),
        "homology": _homology_table(c),
        "complex": encode_complex(c),
    }


def cmd_truncate(wi, args):
    name, cx = _complex_arg(wi)
    degree = wi.parameters.get("degree")
    if not isinstance(degree, int) or isinstance(degree, bool):
        raise InputError("truncate needs an integer degree")
    keep = wi.parameters.get("keep", "leq")
    if keep == "leq":
        t, _ = truncate_leq(cx, degree)
    elif keep == "geq":
        t, _ = truncate_geq(cx, degree)
    else:
        raise InputError('truncation keep must be "leq" or "geq"')
    return "ok", {
        "complex": name,
        "keep": keep,
        "degree": degree,
        "window": _window(t),
        "homology": _homology_table(t),
        "truncation": encode_complex(t),
    }


def cmd_purity(wi, args):
    name, cx = _complex_arg(wi)
    battery = default_battery(cx.ring, cx)
    verdict = is_pure_acyclic(cx, battery)
    results = {
        "complex": name,
        "verdict": verdict.verdict,
        "probes": [list(p.invariant_factors) for p in battery.probes],
    }
    if verdict.is_pure():
        results["probes_checked"] = _recheck_probes(cx, battery, args.jobs)
        return "ok", results
    results["detail"] = verdict.detail
    if verdict.probe is not None:
        results["failing_probe"] = list(verdict.probe.invariant_factors)
        results["failing_degree"] = verdict.witness
    return "refuted", results


def cmd_qis(wi, args):
    name, f = _map_arg(wi)
    if not f.is_chain_map():
        raise InputError(f"{name!r} is not a chain map")
    c = cone(f).complex
    battery = default_battery(f.src.ring, c)
    verdict = is_pure_qis(f, battery)
    results = {
        "map": name,
        "cone_window": _window(c),
        "verdict": verdict.verdict,
        "probes": [list(p.invariant_factors) for p in battery.probes],
    }
    if verdict.is_pure():
        results["probes_checked"] = _recheck_probes(c, battery, args.jobs)
        return "ok", results
    results["detail"] = verdict.detail
    if verdict.probe is not None:
        results["failing_probe"] = list(verdict.probe.invariant_factors)
        results["failing_degree"] = verdict.witness
    return "refuted", results


def cmd_resolve(wi, args):
    name, cx = _complex_arg(wi)
    side = _side_arg(wi)
    cert = resolve(cx, side, depth=_depth_arg(wi, args))
    if not validate_certificate(cert):
        raise WorkbenchError("computed certificate failed revalidation")
    return "ok", {
        "complex": name,
        "side": side,
        "resolution_window": _window(cert.target),
        "resolution_homology": _homology_table(cert.target),
        "revalidated": True,
        "certificate": encode_certificate(cert),
    }


def cmd_towers(wi, args):
    name, cx = _complex_arg(wi)
    side = _side_arg(wi)
    depth = _depth_arg(wi, args)
    if depth is None:
        depth = required_depth(cx, side)
    if side == INJECTIVE:
        tower, fs = injective_tower(cx, depth)
        valid = validate_inverse_tower(tower, fs)
        formula_key = "limit_product_formula"
        formula = check_limit_product_formula(tower)
        cert = limit_tower(tower, fs)
    else:
        tower, fs = projective_tower(cx, depth)
        valid = validate_direct_tower(tower, fs)
        formula_key = "colimit_sum_formula"
        formula = check_colimit_sum_formula(tower)
        cert = colimit_tower(tower, fs)
    levels = []
    for n, level in enumerate(tower.levels):
        levels.append({
            "level": n,
            "window": _window(level),
            "generators": [
                level.module(i).generators for i in range(level.lo, level.hi + 1)
            ],
        })
    cert_valid = validate_certificate(cert)
    results = {
        "complex": name,
        "side": side,
        "depth": tower.depth,
        "levels": levels,
        "tower_valid": valid,
        formula_key: formula,
        "certificate_valid": cert_valid,
        "certificate": encode_certificate(cert),
    }
    ok = valid and formula and cert_valid
    return ("ok" if ok else "refuted"), results


def cmd_phom(wi, args):
    aname, a = _complex_arg(wi, "a")
    bname, b = _complex_arg(wi, "b")
    result = phom(a, b, depth=_depth_arg(wi, args))
    ok = validate_derived_hom(result)
    return ("ok" if ok else "refuted"), {
        "a": aname,
        "b": bname,
        "value_window": _window(result.value),
        "value_homology": _homology_table(result.value),
        "revalidated": ok,
        "projective_certificate": encode_certificate(result.proj_res),
        "injective_certificate": encode_certificate(result.inj_res),
    }


def cmd_adjunction(wi, args):
    aname, a = _complex_arg(wi, "a")
    bname, b = _complex_arg(wi, "b")
    cname, c = _complex_arg(wi, "c")
    report = check_dpur_adjunction(a, b, c, depth=_depth_arg(wi, args))
    links = {}
    for link in report.links:
        links[link.name] = {
            "left": list(link.left),
            "right": list(link.right),
            "ok": link.ok,
        }
    results = {
        "a": aname,
        "b": bname,
        "c": cname,
        "witness_ok": report.witness_ok,
        "links": links,
    }
    return ("ok" if report.ok else "refuted"), results


def cmd_validate_cert(text, args):
    """Validate certificates from a bare object, a wrapper, or a report."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"input is not valid JSON: {exc}")
    found = []
    if isinstance(data, dict):
        if "side" in data and "map" in data:
            found.append(("certificate", data))
        elif isinstance(data.get("certificate"), dict) and "results" not in data:
            found.append(("certificate", data["certificate"]))
        elif isinstance(data.get("results"), dict):
            for key, value in data["results"].items():
                if key.endswith("certificate") and isinstance(value, dict):
                    found.append((key, value))
    if not found:
        raise InputError("no certificate found in the input")
    table = {}
    all_ok = True
    for label, payload in found:
        cert = decode_certificate(payload, where=label)
        ok = validate_certificate(cert)
        all_ok = all_ok and ok
        table[label] = {
            "side": cert.side,
            "source_window": _window(cert.source),
            "resolution_window": _window(cert.target),
            "valid": ok,
        }
    results = {"checked": len(found), "certificates": table}
    return ("ok" if all_ok else "refuted"), results


HANDLERS = {
    "homology": cmd_homology,
    "cone": cmd_cone,
    "truncate": cmd_truncate,
    "purity": cmd_purity,
    "qis": cmd_qis,
    "resolve": cmd_resolve,
    "towers": cmd_towers,
    "phom": cmd_phom,
    "adjunction": cmd_adjunction,
}


# ---------------------------------------------------------------------------
# report rendering


def serialize_report(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def _text_lines(key, value, indent: int, out: list) -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            out.append(f"{pad}{key}: none")
            return
        out.append(f"{pad}{key}:")
        for k, v in value.items():
            _text_lines(k, v, indent + 1, out)
    elif isinstance(value, bool):
        out.append(f"{pad}{key}: {'true' if value else 'false'}")
    elif isinstance(value, list):
        if not value:
            out.append(f"{pad}{key}: none")
        elif all(isinstance(x, int) and not isinstance(x, bool) for x in value):
            out.append(f"{pad}{key}: " + " ".join(str(x) for x in value))
        elif all(isinstance(x, dict) for x in value):
            out.append(f"{pad}{key}:")
            label = key[:-1] if key.endswith("s") else key
            for j, item in enumerate(value):
                _text_lines(f"{label} {j}", item, indent + 1, out)
        else:
            out.append(f"{pad}{key}: " + json.dumps(value, separators=(",", ":")))
    else:
        out.append(f"{pad}{key}: {value}")


def render_text(report: dict) -> str:
    lines = []
    for key, value in report.items():
        if key in ("format", "timing"):
            continue
        _text_lines(key, value, 0, lines)
    lines.append(f"elapsed: {report['timing']['seconds']:.6f}s")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# entry point


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="purcat",
        description="pure homological algebra workbench for complexes over Z and Z/m",
    )
    ap.add_argument("command", choices=COMMANDS, metavar="command",
                    help="one of: " + ", ".join(COMMANDS))
    ap.add_argument("input", help="path to a JSON workspace file, or - for stdin")
    ap.add_argument("--json", action="store_true", help="emit the report as JSON")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED,
                    help="seed echoed into the report (default %(default)s)")
    ap.add_argument("--depth", type=int, default=None,
                    help="tower depth override for resolution commands")
    ap.add_argument("--jobs", type=int, default=1,
                    help="worker threads for probe re-validation")
    args = ap.parse_args(argv)

    started = time.perf_counter()
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, "r", encoding="utf-8") as fh:
                text = fh.read()
        if args.command == "validate-cert":
            status, results = cmd_validate_cert(text, args)
        else:
            status, results = HANDLERS[args.command](parse_input(text), args)
    except DepthInsufficient as exc:
        status, results = "error", {"error": str(exc), "required_depth": exc.required}
    except WorkbenchError as exc:
        status, results = "error", {"error": str(exc)}
    except OSError as exc:
        status, results = "error", {"error": f"cannot read input: {exc}"}

    report = {
        "format": FORMAT,
        "command": args.command,
        "seed": args.seed,
        "status": status,
        "results": results,
        "timing": {"seconds": round(time.perf_counter() - started, 6)},
    }
    sys.stdout.write(serialize_report(report) if args.json else render_text(report))
    return {"ok": 0, "refuted": 1, "error": 2}[status]


if __name__ == "__main__":
    raise SystemExit(main())
