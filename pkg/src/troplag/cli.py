"""Command-line entry point: troplag <subcommand> <input.json> [options].

Exit codes: 0 success or Certified, 1 unreadable or malformed input,
2 Fail / Violated / refused realization, 3 Inconclusive certificate.
"""
from __future__ import annotations

import argparse
import sys
import warnings
from typing import Optional, Sequence

from . import __version__
from .bundle import kaneyama_tropicalize, mirror_summary, rigidity_invert
from .documents import (SCHEMA_VERSION, build_bundle, build_tropical, bundle_document, dumps, load_document,
                        rounded)
from .errors import BranchPointSkipped, BundleError, DocumentError, RealizationError, TroplagError
from .multisection import genericity_count, realizability, validate
from .render import render_cloud, render_tropical

EXIT_OK, EXIT_PARSE, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 1, 2, 3
VERDICT_EXIT = {"Certified": EXIT_OK, "Violated": EXIT_FAIL, "Inconclusive": EXIT_INCONCLUSIVE}


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _note(msg: str):
    print(msg, file=sys.stderr)


def _tropical_from(doc: dict, doc_type: str, source: str):
    if doc_type == "tropical_multisection":
        return build_tropical(doc, source)
    if doc_type == "kaneyama_bundle":
        return kaneyama_tropicalize(build_bundle(doc, source))
    if doc_type == "realization":
        return build_tropical(doc["input"], source)
    raise DocumentError(f"no tropical data in a {doc_type} document", f"{source}: $.type")


# ---------------------------------------------------------------- subcommands


def cmd_validate(args, doc, doc_type) -> int:
    if doc_type == "kaneyama_bundle":
        build_bundle(doc, args.input)
        _emit(dumps({"valid": True, "violations": []}), args.output)
        _note("valid")
        return EXIT_OK
    ts = _tropical_from(doc, doc_type, args.input)
    rep = validate(ts)
    _emit(dumps(rep.to_json()), args.output)
    _note("valid" if rep.ok else f"invalid: {len(rep.violations)} violation(s)")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_genericity(args, doc, doc_type) -> int:
    ts = _tropical_from(doc, doc_type, args.input)
    rep = genericity_count(ts)
    body = rep.to_json()
    body["verdict"] = realizability(ts, rep).to_json()
    _emit(dumps(body), args.output)
    _note(f"N = {rep.N}" if rep.ok else f"N = Fail ({rep.failure_reason})")
    return EXIT_OK if rep.ok else EXIT_FAIL


def _realization_options(args, doc) -> dict:
    block = dict(doc.get("realization", {}))
    opts = {
        "f": block.get("f"),
        "roots": block.get("roots"),
        "R": args.R if args.R is not None else block.get("R"),
        "eps": args.eps if args.eps is not None else block.get("eps", 0.1),
        "K": args.series_order if args.series_order is not None else block.get("K", 40),
        "a_d_initial": block.get("a_d_initial", 1.0),
    }
    opts["resolution"] = args.resolution if args.resolution is not None else block.get("resolution", 400)
    return opts


def _scan_and_cloud(args, gp, resolution: int) -> dict:
    from .realization.cloud import sample_lagrangian, scan_self_intersections

    extra = {}
    if args.scan:
        extra["scan"] = scan_self_intersections(gp, 4 * resolution).to_json()
    if args.cloud:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", BranchPointSkipped)
            cloud = sample_lagrangian(gp, n_r=args.cloud_samples, n_theta=args.cloud_samples, r_min=0.0)
        with open(args.cloud, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(cloud.to_csv())
        extra["cloud"] = {"path": args.cloud, "points": len(cloud)}
    return extra


def cmd_realize(args, doc, doc_type) -> int:
    from .realization.certify import verify_embedding
    from .realization.glue import realize
    from .realization.immersed import immersed_points

    if doc_type != "tropical_multisection":
        raise DocumentError("realize expects a tropical_multisection document", f"{args.input}: $.type")
    ts = build_tropical(doc, args.input)
    opts = _realization_options(args, doc)
    rep = genericity_count(ts)
    verdict = realizability(ts, rep)
    head = {"schema": SCHEMA_VERSION, "type": "realization_refusal",
            "genericity": rep.to_json(), "verdict": verdict.to_json()}
    try:
        real = realize(ts, opts["f"], roots=opts["roots"], R=opts["R"], eps=opts["eps"], K=opts["K"],
                       a_d_initial=opts["a_d_initial"])
    except (RealizationError, TroplagError) as e:
        head["reason"] = str(e)
        _emit(dumps(head), args.output)
        _note(f"refused: {e}")
        return EXIT_FAIL
    gp = real.glued
    cert = verify_embedding(gp, opts["resolution"])
    body = {
        "genericity": rep.to_json(),
        "verdict": verdict.to_json(),
        "realization": real.to_json(),
        "certificate": cert.to_json(),
        "immersed_points": [p.to_json() for p in immersed_points(gp)],
    }
    body.update(_scan_and_cloud(args, gp, opts["resolution"]))
    params = {
        "coefficients": [float(c) for c in gp.model.coefficients],
        "R": float(gp.R),
        "eps": float(gp.eps),
        "K": int(gp.model.K),
        "branch_sign": int(gp.model.sign),
        "halvings": int(gp.halvings),
        "a_d_initial": float(gp.a_d_initial),
        "resolution": int(opts["resolution"]),
    }
    # parameters and input stay at full precision so that verify rebuilds the same potential
    response = {"schema": SCHEMA_VERSION, "type": "realization", "input": doc, "parameters": params}
    response.update(rounded(body))
    _emit(dumps(response, round_floats=False), args.output)
    _note(f"{cert.verdict} (margin {cert.margin:.6g}, resolution {opts['resolution']})")
    return VERDICT_EXIT[cert.verdict]


def _glued_from_response(doc: dict, source: str):
    from .realization.glue import glued_from_parameters

    ts = build_tropical(doc["input"], source)
    p = doc["parameters"]
    try:
        return glued_from_parameters(ts, p["coefficients"], p["R"], p["eps"], p["K"], p["branch_sign"],
                                     p.get("halvings", 0), p.get("a_d_initial", 1.0))
    except TroplagError as e:
        raise DocumentError(f"stored parameters do not rebuild a potential: {e}", f"{source}: $.parameters") from None


def cmd_verify(args, doc, doc_type) -> int:
    from .realization.certify import verify_embedding

    if doc_type != "realization":
        raise DocumentError("verify expects the output of realize", f"{args.input}: $.type")
    gp = _glued_from_response(doc, args.input)
    resolution = args.resolution or 2 * int(doc["parameters"].get("resolution", 400))
    cert = verify_embedding(gp, resolution)
    body = {"certificate": cert.to_json()}
    body.update(_scan_and_cloud(args, gp, resolution))
    _emit(dumps(body), args.output)
    _note(f"{cert.verdict} (margin {cert.margin:.6g}, resolution {resolution})")
    return VERDICT_EXIT[cert.verdict]


def cmd_bundle(args, doc, doc_type) -> int:
    try:
        if doc_type == "kaneyama_bundle":
            summary = mirror_summary(build_bundle(doc, args.input))
            _emit(dumps(summary.to_json()), args.output)
            _note(f"{summary.bundle}: N = {summary.N}, genus {summary.genus}")
            return EXIT_OK
        ts = _tropical_from(doc, doc_type, args.input)
        kb = rigidity_invert(ts)
    except BundleError as e:
        _emit(dumps({"error": type(e).__name__, "reason": str(e)}), args.output)
        _note(f"{type(e).__name__}: {e}")
        return EXIT_FAIL
    _emit(dumps(bundle_document(kb)), args.output)
    _note(f"recovered {kb}")
    return EXIT_OK


def cmd_plot(args, doc, doc_type) -> int:
    if doc_type == "realization":
        from .realization.cloud import sample_lagrangian
        from .realization.immersed import immersed_points

        gp = _glued_from_response(doc, args.input)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", BranchPointSkipped)
            cloud = sample_lagrangian(gp, n_r=args.cloud_samples, n_theta=args.cloud_samples, r_min=0.0)
        imm = [p.location for p in immersed_points(gp)]
        branch = [(z.real, z.imag) for z, m in gp.model.roots if m == 1]
        svg = render_cloud(cloud.xi, cloud.sheet, imm, branch)
    else:
        svg = render_tropical(_tropical_from(doc, doc_type, args.input))
    _emit(svg, args.output)
    return EXIT_OK


COMMANDS = {
    "validate": (cmd_validate, "check the multi-section conditions (multiplicity, continuity, covering)"),
    "genericity": (cmd_genericity, "count sheet crossings on the circle and report the realizability verdict"),
    "realize": (cmd_realize, "build, glue and certify a realization; writes a realization document"),
    "verify": (cmd_verify, "re-certify a stored realization (default: twice its resolution)"),
    "bundle": (cmd_bundle, "mirror summary of a bundle, or recover the bundle from tropical data"),
    "plot": (cmd_plot, "SVG of tropical data or of a realization's point cloud"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="troplag", description="Tropical Lagrangian multi-sections and realizations.")
    p.add_argument("--version", action="version", version=f"troplag {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="subcommand")
    for name, (_, help_text) in COMMANDS.items():
        s = sub.add_parser(name, help=help_text, description=help_text)
        s.add_argument("input", help="troplag/1 JSON document")
        s.add_argument("-o", "--output", help="output path (default: standard output)")
        if name in ("realize", "verify"):
            s.add_argument("--resolution", type=int, help="certificate grid per band (realize default 400)")
            s.add_argument("--scan", action="store_true", help="also run the self-intersection scan at 4x resolution")
            s.add_argument("--cloud", metavar="CSV", help="write a sampled point cloud")
        if name == "realize":
            s.add_argument("--series-order", type=int, dest="series_order", help="series truncation K (default 40)")
            s.add_argument("--R", type=float, help="gluing radius (default: chosen from the model)")
            s.add_argument("--eps", type=float, help="collar width in (0, 1) (default 0.1)")
        if name in ("realize", "verify", "plot"):
            s.add_argument("--cloud-samples", type=int, default=120, dest="cloud_samples",
                           help="radial and angular samples per region for clouds (default 120)")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        doc, doc_type = load_document(args.input)
        return handler(args, doc, doc_type)
    except DocumentError as e:
        _note(f"error: {e}")
        return EXIT_PARSE
    except OSError as e:
        _note(f"error: {e}")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
