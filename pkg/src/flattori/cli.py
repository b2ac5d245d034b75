"""Command-line surface: every subcommand prints one JSON report to stdout.

Reports are deterministic (sorted keys, no timestamps) and always carry the
fields ``command``, ``inputs``, ``result``, and ``paper_ref`` (a stable
identifier of the mathematical claim the command decides).  Exit codes:
0 for success/true/found, 1 for refuted/false/none-within-bound, 2 for
input errors.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import abranes, cohomology, equivalence, fock, jsonio, tduality
from .errors import (BudgetExceededError, FlatToriError, RecoveryError,
                     SchemaError, ValidationError)
from .exactlinear import rat_str
from .torus import doubled, narain_form, omega, validate

CLAIM_IDS = {
    "validate": "flat-torus-data-invariants",
    "doubled": "doubled-lattice-structures",
    "spectrum": "zero-mode-spectrum-invariants",
    "check-iso": "scft-isomorphism-lattice-criterion",
    "check-mirror": "mirror-symmetry-lattice-criterion",
    "check-derived-eq": "derived-equivalence-lattice-criterion",
    "verify-map": "lattice-map-verification",
    "mirror": "tduality-mirror-construction",
    "hodge": "hodge-diamond-ranks",
    "pp-classes": "rational-pp-classes",
    "lefschetz": "middle-degree-lefschetz-kernel",
    "fm": "duality-cohomology-transport",
    "check-mirror-class": "mirror-class-condition",
    "beta": "bfield-brauer-torsion",
    "abrane-check": "coisotropic-brane-conditions",
    "fock-verify": "oscillator-algebra-relations",
}

DEFAULTS = {
    "bound": 2,
    "budget": equivalence.DEFAULT_NODE_BUDGET,
    "fingerprint_height": 1,
    "split_bound": 1,
}


def _emit(command, inputs, result, code):
    report = {
        "command": command,
        "inputs": inputs,
        "result": result,
        "paper_ref": CLAIM_IDS[command],
    }
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return code


def _load_config(path):
    cfg = dict(DEFAULTS)
    if path:
        data = jsonio.load_json(path)
        if not isinstance(data, dict):
            raise SchemaError("config must be an object", path)
        for key in DEFAULTS:
            if key in data:
                if not isinstance(data[key], int) or data[key] < 0:
                    raise SchemaError(f"config {key} must be a nonnegative integer", key)
                cfg[key] = data[key]
    return cfg


def _setting(args, cfg, name):
    value = getattr(args, name.replace("-", "_"), None)
    return cfg[name] if value is None else value


def parse_splitting(text, n):
    """Parse ``"1,0;0,1|0,1;1,0"``-style A|B vector lists."""
    try:
        a_part, b_part = text.split("|")
        a_vecs = [[int(x) for x in v.split(",")] for v in a_part.split(";") if v]
        b_vecs = [[int(x) for x in v.split(",")] for v in b_part.split(";") if v]
    except ValueError:
        raise SchemaError("splitting must look like 'a1;a2|b1;b2' with comma-separated "
                          "integer entries", "--split")
    if any(len(v) != n for v in a_vecs + b_vecs):
        raise SchemaError(f"splitting vectors must have length {n}", "--split")
    return tduality.LagrangianSplitting.from_vectors(a_vecs, b_vecs)


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------


def _cmd_validate(args, cfg):
    t = jsonio.load_torus(args.torus)
    report = validate(t)
    result = {"ok": report.ok,
              "checks": [{"name": c.name, "ok": c.ok} for c in report.checks]}
    return _emit("validate", {"torus": jsonio.torus_to_json(t)}, result,
                 0 if report.ok else 1)


def _cmd_doubled(args, cfg):
    t = jsonio.load_torus(args.torus)
    ds = doubled(t)
    result = {
        "q": jsonio.matrix_to_json(ds.q),
        "calI": jsonio.matrix_to_json(ds.calI),
        "calJ": jsonio.matrix_to_json(ds.calJ),
        "calItilde": jsonio.matrix_to_json(ds.calItilde),
        "block_convention": ds.block_convention,
        "omega": jsonio.matrix_to_json(omega(t)),
        "narain_form": jsonio.matrix_to_json(narain_form(t)),
    }
    return _emit("doubled", {"torus": jsonio.torus_to_json(t)}, result, 0)


def _cmd_spectrum(args, cfg):
    t = jsonio.load_torus(args.torus)
    height = args.height if args.height is not None else cfg["fingerprint_height"]
    fp = equivalence.spectrum_fingerprint(t, height)
    result = {"height": height,
              "triples": [[rat_str(x) for x in triple] for triple in fp]}
    return _emit("spectrum", {"torus": jsonio.torus_to_json(t)}, result, 0)


def _search_command(command, kind, args, cfg):
    t1 = jsonio.load_torus(args.source)
    t2 = jsonio.load_torus(args.target)
    bound = _setting(args, cfg, "bound")
    budget = _setting(args, cfg, "budget")
    inputs = {"source": jsonio.torus_to_json(t1), "target": jsonio.torus_to_json(t2),
              "bound": bound}
    fingerprints_match = None
    fp_height = cfg["fingerprint_height"]
    if (2 * fp_height + 1) ** (4 * t1.d) <= 10000:
        fingerprints_match = (equivalence.spectrum_fingerprint(t1, fp_height)
                              == equivalence.spectrum_fingerprint(t2, fp_height))
    outcome = equivalence.search_relation(t1, t2, kind, bound, node_budget=budget)
    if outcome.found:
        result = {"found": True,
                  "certificate": jsonio.certificate_to_json(outcome.certificate),
                  "nodes": outcome.nodes_used}
        return _emit(command, inputs, result, 0)
    result = {"found": False, "verdict": "none within bound",
              "nodes": outcome.nodes_used,
              "fingerprint_height": fp_height,
              "fingerprints_match": fingerprints_match}
    if fingerprints_match is False and kind == "iso":
        result["refuted_by"] = "zero-mode spectrum mismatch"
    return _emit(command, inputs, result, 1)


def _cmd_check_iso(args, cfg):
    return _search_command("check-iso", "iso", args, cfg)


def _cmd_check_mirror(args, cfg):
    return _search_command("check-mirror", "mirror", args, cfg)


def _cmd_check_derived(args, cfg):
    return _search_command("check-derived-eq", "derived_eq", args, cfg)


def _cmd_verify_map(args, cfg):
    m = jsonio.load_map(args.map)
    cert = equivalence.verify_map(m)
    result = {"valid": cert.valid,
              "certificate": jsonio.certificate_to_json(cert)}
    if not cert.valid:
        result["refuting_check"] = cert.first_failure
    return _emit("verify-map", {"map": args.map, "kind": m.kind}, result,
                 0 if cert.valid else 1)


def _cmd_mirror(args, cfg):
    t = jsonio.load_torus(args.torus)
    if args.split:
        s = parse_splitting(args.split, t.rank)
    else:
        bound = args.split_bound if args.split_bound is not None else cfg["split_bound"]
        s = tduality.find_lagrangian_splitting(t, bound)
        if s is None:
            return _emit("mirror", {"torus": jsonio.torus_to_json(t)},
                         {"found": False,
                          "verdict": f"no Lagrangian splitting within height {bound}"}, 1)
    inputs = {"torus": jsonio.torus_to_json(t),
              "split": {"A": [list(v) for v in s.a_basis],
                        "B": [list(v) for v in s.b_basis]}}
    try:
        mr = tduality.mirror_via_tduality(t, s)
    except RecoveryError as exc:
        return _emit("mirror", inputs,
                     {"found": False, "verdict": "recovery failed", "block": exc.block}, 1)
    result = {
        "found": True,
        "mirror": jsonio.torus_to_json(mr.mirror),
        "certificate": jsonio.certificate_to_json(mr.duality_certificate),
        "recovery_report": [{"name": n, "ok": ok} for n, ok in mr.recovery_report],
    }
    if args.out_torus:
        with open(args.out_torus, "w") as fh:
            json.dump(jsonio.torus_to_json(mr.mirror), fh, sort_keys=True, indent=2)
            fh.write("\n")
    if args.out_cert:
        with open(args.out_cert, "w") as fh:
            json.dump(jsonio.certificate_to_json(mr.duality_certificate), fh,
                      sort_keys=True, indent=2)
            fh.write("\n")
    return _emit("mirror", inputs, result, 0)


def _cmd_hodge(args, cfg):
    t = jsonio.load_torus(args.torus)
    hd = cohomology.hodge_diamond(t)
    result = {"d": hd.d, "h": [list(row) for row in hd.h]}
    return _emit("hodge", {"torus": jsonio.torus_to_json(t)}, result, 0)


def _cmd_pp_classes(args, cfg):
    t = jsonio.load_torus(args.torus)
    classes = cohomology.rational_pp_classes(t, args.p)
    result = {"p": args.p, "dimension": len(classes),
              "basis": [jsonio.class_to_json(c.element) for c in classes]}
    return _emit("pp-classes", {"torus": jsonio.torus_to_json(t)}, result, 0)


def _cmd_lefschetz(args, cfg):
    t = jsonio.load_torus(args.torus)
    dim = cohomology.lefschetz_kernel_dim(t)
    from math import comb
    result = {"kernel_dimension": dim,
              "expected": comb(2 * t.d, t.d) - (comb(2 * t.d, t.d + 2) if t.d >= 1 else 0)}
    return _emit("lefschetz", {"torus": jsonio.torus_to_json(t)}, result, 0)


def _cmd_fm(args, cfg):
    t = jsonio.load_torus(args.torus)
    s = parse_splitting(args.split, t.rank)
    data = jsonio.load_json(args.cls)
    element = jsonio.class_from_json(data, t.rank)
    alpha = cohomology.CohClass(t, element)
    image = cohomology.fm_transform(s, alpha)
    result = {"image": jsonio.class_to_json(image.element),
              "mirror": jsonio.torus_to_json(image.torus)}
    inputs = {"torus": jsonio.torus_to_json(t), "class": jsonio.class_to_json(element),
              "split": args.split}
    return _emit("fm", inputs, result, 0)


def _cmd_check_mirror_class(args, cfg):
    t = jsonio.load_torus(args.torus)
    element = jsonio.class_from_json(jsonio.load_json(args.cls), t.rank)
    alpha = cohomology.CohClass(t, element)
    ok = cohomology.mirror_class_condition(t, alpha)
    inputs = {"torus": jsonio.torus_to_json(t), "class": jsonio.class_to_json(element)}
    return _emit("check-mirror-class", inputs, {"satisfied": ok}, 0 if ok else 1)


def _cmd_beta(args, cfg):
    t = jsonio.load_torus(args.torus)
    rep = cohomology.beta_torsion(t)
    result = {
        "torsion": rep.torsion,
        "projection_nonzero": rep.projection_nonzero,
        "projection_02": [jsonio.gauss_to_json(x) for x in rep.projection],
        "membership_solution": [rat_str(x) for x in rep.membership_solution],
    }
    return _emit("beta", {"torus": jsonio.torus_to_json(t)}, result,
                 0 if rep.torsion else 1)


def _cmd_abrane_check(args, cfg):
    b = jsonio.load_brane(args.brane)
    rep = abranes.check_abrane(b)
    result = {
        "accepted": rep.accepted,
        "k": rep.k,
        "conditions": [{"name": c.name, "ok": c.ok, "detail": c.detail}
                       for c in rep.conditions],
    }
    if rep.accepted:
        result["transverse_complex_structure"] = (
            jsonio.matrix_to_json(rep.transverse_j) if rep.transverse_j is not None else [])
        anomaly = abranes.anomaly_check_affine(b)
        result["anomaly"] = {
            "h_constant": anomaly.h_constant,
            "bockstein_class_zero": anomaly.bockstein_class_zero,
            "top_coefficient": jsonio.gauss_to_json(anomaly.top_coefficient),
        }
        wedge_rep = abranes.wedge_characterization(b)
        result["wedge_powers"] = {
            "vanishing_powers": list(wedge_rep.vanishing_powers),
            "first_vanishing_power": wedge_rep.first_vanishing_power,
            "stated_conditions_hold": wedge_rep.stated_conditions_hold,
            "agreement_with_condition_iii": wedge_rep.agreement,
        }
    else:
        result["rejection"] = rep.rejection
    return _emit("abrane-check", {"brane": args.brane}, result,
                 0 if rep.accepted else 1)


def _cmd_fock_verify(args, cfg):
    from .exactlinear import RatMatrix
    if args.torus:
        t = jsonio.load_torus(args.torus)
        g = t.G
        d = t.d
    else:
        d = args.d
        if d is None:
            raise SchemaError("need --d or --torus", "--d")
        g = RatMatrix.identity(2 * d)
    cap = Fraction(args.cap)
    space = fock.TruncatedFock(d, cap, g)
    rows = fock.ccr_car_sweep(space)
    fails = sum(1 for r in rows if r["status"] == "fail")
    passes = sum(1 for r in rows if r["status"] == "pass")
    inconclusive = sum(1 for r in rows if r["status"] == "inconclusive")
    result = {"d": d, "cap": str(cap), "basis_dimension": len(space.basis),
              "pass": passes, "fail": fails, "inconclusive": inconclusive,
              "checks": rows}
    return _emit("fock-verify", {"d": d, "cap": str(cap)}, result, 0 if fails == 0 else 1)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser():
    top = argparse.ArgumentParser(prog="flattori", description=__doc__)
    top.add_argument("--config", help="JSON sidecar with bound/budget defaults")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, handler, configure):
        p = sub.add_parser(name)
        configure(p)
        p.set_defaults(handler=handler)

    add("validate", _cmd_validate, lambda p: p.add_argument("torus"))
    add("doubled", _cmd_doubled, lambda p: p.add_argument("torus"))

    def spectrum_args(p):
        p.add_argument("torus")
        p.add_argument("--height", type=int, default=None)
    add("spectrum", _cmd_spectrum, spectrum_args)

    def search_args(p):
        p.add_argument("source")
        p.add_argument("target")
        p.add_argument("--bound", type=int, default=None)
        p.add_argument("--budget", type=int, default=None)
    add("check-iso", _cmd_check_iso, search_args)
    add("check-mirror", _cmd_check_mirror, search_args)
    add("check-derived-eq", _cmd_check_derived, search_args)

    add("verify-map", _cmd_verify_map, lambda p: p.add_argument("map"))

    def mirror_args(p):
        p.add_argument("--torus", required=True)
        p.add_argument("--split", default=None)
        p.add_argument("--split-bound", type=int, default=None)
        p.add_argument("--out-torus", default=None)
        p.add_argument("--out-cert", default=None)
    add("mirror", _cmd_mirror, mirror_args)

    add("hodge", _cmd_hodge, lambda p: p.add_argument("torus"))

    def pp_args(p):
        p.add_argument("torus")
        p.add_argument("--p", type=int, required=True)
    add("pp-classes", _cmd_pp_classes, pp_args)

    add("lefschetz", _cmd_lefschetz, lambda p: p.add_argument("torus"))

    def fm_args(p):
        p.add_argument("--torus", required=True)
        p.add_argument("--split", required=True)
        p.add_argument("--class", dest="cls", required=True)
    add("fm", _cmd_fm, fm_args)

    def cmc_args(p):
        p.add_argument("--torus", required=True)
        p.add_argument("--class", dest="cls", required=True)
    add("check-mirror-class", _cmd_check_mirror_class, cmc_args)

    add("beta", _cmd_beta, lambda p: p.add_argument("torus"))
    add("abrane-check", _cmd_abrane_check,
        lambda p: p.add_argument("--brane", required=True))

    def fock_args(p):
        p.add_argument("--d", type=int, default=None)
        p.add_argument("--cap", default="2")
        p.add_argument("--torus", default=None)
    add("fock-verify", _cmd_fock_verify, fock_args)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config)
        return args.handler(args, cfg)
    except SchemaError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc} ({exc.nodes_used}/{exc.budget} nodes)",
              file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except FlatToriError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
