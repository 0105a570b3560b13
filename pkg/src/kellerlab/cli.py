"""Command line interface: ``kellerlab <command> <file>... [options]``.

The map in a problem file is ``H``; commands that need a Keller map use
``F = x + H``.  Exit codes: 0 success, 2 hypothesis failed, 3 unresolved,
1 any other error.  With several files the exit code is the largest one.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import HypothesisFailed, KellerError, Unresolved
from .jordanlab import JordanVectorForm, jordan_point_search, jordan_with_vector
from .mpoly import Poly, render_poly
from .polymap import (
    PolyMap,
    PolyMatrix,
    check_qt,
    check_trdeg1,
    compose,
    conjugate,
    find_algebraic_relation,
    image_exponent,
    invert_keller,
    is_keller,
    is_nilpotent,
    jacobian,
    preimage_exponent,
    rank_over_Kx,
)
from .problem import ProblemFile, parse_problem
from .scalars import QQ, Matrix

COMMANDS = (
    "jacobian",
    "nilpotent",
    "rank",
    "keller",
    "ie-pe",
    "jordan",
    "normalize-rkform",
    "classify",
    "relation",
    "invert",
    "conjugate",
    "compose",
    "verify-tame",
    "check-qt",
    "check-trdeg1",
)

# text mode prints polynomials with more terms than this as a summary
LARGE_POLY_TERMS = 60
DEFAULT_DMAX = 6


def encode(obj, guard: bool = False):
    """JSON-ready form of results: polynomials and scalars become strings."""
    if isinstance(obj, Poly):
        if guard and len(obj.terms) > LARGE_POLY_TERMS:
            return f"<polynomial with {len(obj.terms)} terms, degree {obj.degree()}>"
        return render_poly(obj)
    if isinstance(obj, PolyMap):
        return [encode(c, guard) for c in obj]
    if isinstance(obj, PolyMatrix):
        return [[encode(obj[i, j], guard) for j in range(obj.ncols)] for i in range(obj.nrows)]
    if isinstance(obj, Matrix):
        return obj.render()
    if isinstance(obj, JordanVectorForm):
        return {
            "T": obj.T.render(),
            "N": obj.N.render(),
            "w": [str(a) for a in obj.w],
            "indices": list(obj.indices),
            "ie_chain": list(obj.ie_chain),
            "pe_chain": list(obj.pe_chain),
            "block_sizes": list(obj.block_sizes),
        }
    if isinstance(obj, dict):
        return {str(k): encode(v, guard) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v, guard) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


# ---------------------------------------------------------------------------
# commands


def _keller_map(prob: ProblemFile) -> PolyMap:
    H = prob.polymap()
    return PolyMap.identity(prob.field, H.nvars) + H


def _vector(prob: ProblemFile, default):
    return prob.vectors.get("v", default)


def cmd_jacobian(prob, opts):
    return {"JH": jacobian(prob.polymap())}


def cmd_nilpotent(prob, opts):
    ok, index = is_nilpotent(jacobian(prob.polymap()))
    return {"nilpotent": ok, "index": index if ok else None}


def cmd_rank(prob, opts):
    return {"rank": rank_over_Kx(jacobian(prob.polymap()))}


def cmd_keller(prob, opts):
    return {"keller": is_keller(_keller_map(prob))}


def cmd_ie_pe(prob, opts):
    if "M" in prob.matrices:
        M = prob.matrices["M"]
        v = tuple(p.constant_term() for p in _vector(prob, ()))
        if not v:
            raise HypothesisFailed("a constant matrix M needs a vector v")
    else:
        M = jacobian(prob.polymap())
        v = _vector(prob, tuple(Poly.gens(prob.field, prob.nvars)))
    return {"IE": image_exponent(M, v), "PE": preimage_exponent(M, v)}


def cmd_jordan(prob, opts):
    if "M" in prob.matrices:
        M = prob.matrices["M"]
        v = tuple(p.constant_term() for p in _vector(prob, ()))
        if not v:
            raise HypothesisFailed("a constant matrix M needs a vector v")
        return {"form": jordan_with_vector(M, v)}
    res = jordan_point_search(prob.polymap(), opts.budget)
    return {
        "T": res.T,
        "point": [str(a) for a in res.v],
        "N": res.N,
        "form": res.form,
        "generic_ranks": list(res.generic_ranks),
        "IE": res.ie,
        "PE": res.pe,
        "candidates_tried": res.candidates_tried,
    }


def cmd_normalize_rkform(prob, opts):
    from .classify import normalize_rkform

    S, T, Ht, info = normalize_rkform(prob.polymap(), prob.scalars.get("r"), opts.budget)
    w = info["w"]
    return {"case": info["case"], "w": None if w is None else [str(a) for a in w], "S": S, "T": T, "normal_form": Ht}


def cmd_classify(prob, opts):
    from .classify import classify

    report = classify(prob.polymap())
    report.seed = opts.seed
    return report.to_dict()


def cmd_relation(prob, opts):
    dmax = prob.scalars.get("dmax", opts.degree_cap or DEFAULT_DMAX)
    H = prob.polymap()
    f = find_algebraic_relation(H, dmax)
    names = [f"y{i + 1}" for i in range(H.m)]
    return {"dmax": dmax, "relation": None if f is None else render_poly(f, names)}


def cmd_invert(prob, opts):
    F = _keller_map(prob)
    witness = None
    try:
        from .classify import classify

        witness = classify(prob.polymap()).T
    except KellerError:
        witness = None
    G = invert_keller(F, opts.degree_cap, witness=witness)
    # invert_keller raises unless both compositions are the identity
    return {"G": G, "checks": {"F∘G = id": True, "G∘F = id": True}, "via_normal_form": witness is not None}


def cmd_conjugate(prob, opts):
    if "T" not in prob.matrices:
        raise HypothesisFailed("conjugate needs a matrix T")
    return {"conjugate": conjugate(prob.polymap(), prob.matrices["T"])}


def cmd_compose(prob, opts):
    return {"composition": compose(prob.polymap("H"), prob.polymap("G"))}


def cmd_verify_tame(prob, opts):
    from .classify import tame_decomposition_parabolic, tame_decomposition_rank2

    K = prob.field if prob is not None else QQ
    if opts.lemma == "rank2":
        # x3, x4, x5 stand for the free parameters a, b, c; x6 is auxiliary
        x = Poly.gens(K, 6)
        dec = tame_decomposition_rank2(x[2], x[3], x[4], aux=5)
        params = {"a": "x3", "b": "x4", "c": "x5", "auxiliary": "x6"}
    else:
        x = Poly.gens(K, 4)
        dec = tame_decomposition_parabolic(x[3])
        params = {"c": "x4"}
    return {
        "lemma": opts.lemma,
        "parameters": params,
        "target": dec.target,
        "factors": dec.factors,
        "factor_kinds": dec.factor_kinds(),
        "identity holds": dec.holds(),
    }


def cmd_check_qt(prob, opts):
    return check_qt(prob.polymap())


def cmd_check_trdeg1(prob, opts):
    return check_trdeg1(_keller_map(prob))


HANDLERS = {name: globals()["cmd_" + name.replace("-", "_")] for name in COMMANDS}


# ---------------------------------------------------------------------------
# driver


def run(command: str, prob: ProblemFile | None, opts) -> dict:
    """Run one command; returns ``{"status", "exit_code", "result" | "error"}``."""
    try:
        result = HANDLERS[command](prob, opts)
        return {"status": "ok", "exit_code": 0, "result": result}
    except HypothesisFailed as exc:
        return _error(exc, 2)
    except Unresolved as exc:
        out = _error(exc, 3)
        out["error"]["trace"] = list(getattr(exc, "trace", []))
        return out
    except (KellerError, ValueError, ArithmeticError) as exc:
        return _error(exc, 1)


def _error(exc, code):
    return {"status": "error", "exit_code": code, "error": {"type": type(exc).__name__, "message": str(exc)}}


def process_file(command: str, path: str | None, opts) -> dict:
    header = {"command": command, "file": path}
    prob = None
    if path is not None:
        try:
            prob = parse_problem(Path(path).read_text())
        except KellerError as exc:
            return {**header, **_error(exc, 1)}
        except OSError as exc:
            return {**header, **_error(exc, 1)}
        header.update(field=str(prob.field), nvars=prob.nvars)
    elif command != "verify-tame":
        return {**header, **_error(ValueError(f"{command} needs a problem file"), 1)}
    return {**header, **run(command, prob, opts)}


def render_text(report: dict) -> str:
    lines = [f"== {report['command']}" + (f" {report['file']}" if report.get("file") else "")]
    if report["status"] != "ok":
        err = report["error"]
        lines.append(f"error: {err['type']}: {err['message']}")
        for t in err.get("trace", []):
            lines.append(f"  trace: {t}")
        return "\n".join(lines)
    _text_lines(encode(report["result"], guard=True), lines, "")
    return "\n".join(lines)


def _text_lines(obj, lines, indent):
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{indent}{k}:")
                _text_lines(v, lines, indent + "  ")
            else:
                lines.append(f"{indent}{k}: {_flat_text(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{indent}-")
                _text_lines(v, lines, indent + "  ")
            else:
                lines.append(f"{indent}{_flat_text(v)}")
    else:
        lines.append(f"{indent}{_flat_text(obj)}")


def _flat(v) -> bool:
    """Short lists of scalars fit on one line; longer ones get a line per item."""
    return isinstance(v, list) and all(not isinstance(a, (dict, list)) for a in v) and len(_flat_text(v)) <= 100


def _flat_text(v) -> str:
    if isinstance(v, list):
        return "(" + ", ".join(_flat_text(a) for a in v) + ")"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kellerlab", description="Exact computations with Keller maps.")
    ap.add_argument("--version", action="version", version=f"kellerlab {__version__}")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("files", nargs="*", help="problem files (verify-tame needs none)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--degree-cap", type=int, default=None)
    ap.add_argument("--budget", type=int, default=100_000)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--json", metavar="OUT", default=None, help="write the full report as JSON ('-' for stdout)")
    ap.add_argument("--lemma", choices=("rank2", "parabolic"), default="rank2", help="identity checked by verify-tame")
    return ap


def main(argv=None) -> int:
    opts = build_parser().parse_args(argv)
    files = opts.files or [None]
    if opts.jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=opts.jobs) as pool:
            reports = list(pool.map(process_file, [opts.command] * len(files), files, [opts] * len(files)))
    else:
        reports = [process_file(opts.command, f, opts) for f in files]
    doc = {"kellerlab": __version__, "reports": [encode(r) for r in reports]}
    text = json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if opts.json == "-":
        sys.stdout.write(text)
    else:
        if opts.json:
            Path(opts.json).write_text(text, encoding="utf-8")
        sys.stdout.write("\n".join(render_text(r) for r in reports) + "\n")
    return max(r["exit_code"] for r in reports)


if __name__ == "__main__":
    sys.exit(main())
