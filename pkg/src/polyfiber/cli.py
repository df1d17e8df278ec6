"""Command line front end: ``polyfiber {count,certify,scan,stratum}``.

Every command prints one JSON document (or writes it to ``--output``) and
exits with

* 0 on success,
* 1 when a check ran and failed (certification FAIL, scan or stratum violation),
* 2 on invalid input,
* 3 when certification is inconclusive,
* 4 on an internal consistency fault (a non-integral or negative count).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
from typing import List, Optional

from polyfiber import __version__
from polyfiber.counting import fiber_count
from polyfiber.errors import ConsistencyError, ParseError, PolyfiberError
from polyfiber.exact import gr_parse
from polyfiber.oracle.certify import certify
from polyfiber.oracle.homotopy import SolverConfig
from polyfiber.scan import check_stratum, run_scan
from polyfiber.spectrum import (
    ResidueVector,
    SpectrumInput,
    residues_from_eigenvalues,
    validate_v_d,
)

SCHEMA_VERSION = "1.0"

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INCONCLUSIVE, EXIT_CONSISTENCY = 0, 1, 2, 3, 4


class InputError(PolyfiberError):
    exit_code = EXIT_INPUT

    def __init__(self, message: str, problems: Optional[List[str]] = None):
        super().__init__(message)
        self.problems = problems or []


def load_input(path: str):
    """Read ``{d, mode, values}`` and return ``(spectrum_or_residues, mode)``."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from exc
    if not isinstance(data, dict):
        raise InputError("input must be a JSON object with fields d, mode, values")
    missing = [k for k in ("mode", "values") if k not in data]
    if missing:
        raise InputError(f"missing field(s): {', '.join(missing)}")
    mode = data["mode"]
    if mode not in ("residues", "eigenvalues"):
        raise InputError(f"mode must be 'residues' or 'eigenvalues', got {mode!r}")
    raw = data["values"]
    if not isinstance(raw, list) or not all(isinstance(v, str) for v in raw):
        raise InputError("values must be a list of strings such as \"1/2-3/4i\"")
    d = data.get("d", len(raw))
    if d != len(raw):
        raise InputError(f"d = {d} but {len(raw)} values were given")
    if d < 4:
        raise InputError(f"d must be at least 4, got {d}")
    values = [gr_parse(v) for v in raw]
    if mode == "eigenvalues":
        s = SpectrumInput(values)
        problems = validate_v_d(s)
        if problems:
            raise InputError("spectrum is not in V_d", problems)
        return s, mode
    return ResidueVector(values, scaled=False), mode


def _count_document(report, mode: str) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "command": "count", "input_mode": mode}
    doc.update(report.to_dict())
    if mode == "residues":
        doc["scale_assumed"] = True
    return doc


def cmd_count(args) -> tuple:
    s, mode = load_input(args.input)
    return _count_document(fiber_count(s), mode), EXIT_OK


def cmd_certify(args) -> tuple:
    s, mode = load_input(args.input)
    cfg = SolverConfig(
        seed=args.seed,
        tol_res=args.tol_res,
        tol_sep=args.tol_sep,
        precision=args.precision,
        max_retries=args.max_retries,
        path_budget=args.path_budget,
    )
    cert = certify(s, cfg)
    doc = _count_document(cert.report, mode)
    doc["command"] = "certify"
    doc["solver"] = cfg.to_dict()
    doc["certification"] = cert.to_dict()
    return doc, EXIT_OK if cert.verdict == "PASS" else EXIT_FAIL


def cmd_scan(args) -> tuple:
    report = run_scan(args.d, args.bound, exhaustive=args.exhaustive, samples=args.samples, seed=args.seed)
    doc = {"schema_version": SCHEMA_VERSION, "command": "scan"}
    doc.update(report.to_dict(include_rows=args.rows))
    if report.consistency_faults:
        return doc, EXIT_CONSISTENCY
    return doc, EXIT_OK if report.ok else EXIT_FAIL


def cmd_stratum(args) -> tuple:
    s, mode = load_input(args.input)
    m = residues_from_eigenvalues(s) if isinstance(s, SpectrumInput) else s
    check = check_stratum(m, args.perturbations, random.Random(args.seed))
    doc = {"schema_version": SCHEMA_VERSION, "command": "stratum", "input_mode": mode, "seed": args.seed}
    doc.update(check.to_dict())
    return doc, EXIT_OK if check.ok else EXIT_FAIL


def _error_document(exc: Exception, command: str) -> dict:
    err = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, InputError) and exc.problems:
        err["problems"] = exc.problems
    if isinstance(exc, ConsistencyError):
        err["ledger"] = exc.ledger
    return {"schema_version": SCHEMA_VERSION, "command": command, "error": err}


def _emit(doc: dict, output: Optional[str]) -> None:
    text = json.dumps(doc, indent=2, sort_keys=False, default=str) + "\n"
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(output))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".polyfiber-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, output)
    except BaseException:
        os.unlink(tmp)
        raise


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyfiber",
        description="Count polynomial maps with a prescribed fixed-point multiplier spectrum.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_output(p):
        p.add_argument("--output", "-o", help="write the JSON report here instead of standard output")
        return p

    p = with_output(sub.add_parser("count", help="exact fiber count with the full ledger"))
    p.add_argument("--input", "-i", required=True, help="JSON file {d, mode, values}")
    p.set_defaults(func=cmd_count)

    p = with_output(sub.add_parser("certify", help="compare the exact count with numerical path tracking"))
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol-res", type=float, default=1e-9, help="residual bound for a regular solution")
    p.add_argument("--tol-sep", type=float, default=1e-6, help="separation and dedup tolerance")
    p.add_argument("--precision", type=int, default=53, help="bits; above 53 every path is tracked with mpmath")
    p.add_argument("--max-retries", type=int, default=3)
    p.add_argument("--path-budget", type=int, default=720, help="largest (d-2)! accepted")
    p.set_defaults(func=cmd_certify)

    p = with_output(sub.add_parser("scan", help="emptiness criterion over primitive integer vectors"))
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--bound", type=int, required=True, help="largest absolute entry")
    p.add_argument("--exhaustive", action="store_true", help="enumerate all vectors instead of sampling")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rows", action="store_true", help="include every vector in the report")
    p.set_defaults(func=cmd_scan)

    p = with_output(sub.add_parser("stratum", help="ledger constancy under perturbations within the stratum"))
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--perturbations", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_stratum)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, code = args.func(args)
    except (ParseError, InputError) as exc:
        doc, code = _error_document(exc, args.command), EXIT_INPUT
    except PolyfiberError as exc:
        doc, code = _error_document(exc, args.command), exc.exit_code
    _emit(doc, getattr(args, "output", None))
    return code


if __name__ == "__main__":
    sys.exit(main())
