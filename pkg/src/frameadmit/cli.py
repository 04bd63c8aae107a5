"""Command-line interface.

Exit codes: 0 success or pass, 1 not admissible or verification failure,
2 input error, 3 undetermined.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .admissibility import ADMISSIBLE, NOT_ADMISSIBLE, UNDETERMINED, classify, excess_forced_infinite
from .errors import (
    DimensionMismatch,
    FrameAdmitError,
    HorizonExceeded,
    InvalidSpec,
    KMismatch,
    NotPositiveDefinite,
    NotSummable,
    UnknownExample,
)
from .fixtures import FIXTURES, run_example
from .frames import excess, verify_pair
from .operators import DiagonalOperator, FiniteHermitian, l_k_op, u_k_op
from .schur_horn import construct_diagonal_unitary
from .sequences import DEFAULT_TOL, SequenceModel, l_k_seq, majorizes, u_k_seq
from .synthesis import (
    greedy_extend,
    head_decompose,
    synthesize_finite,
    synthesize_truncated_summable,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNDETERMINED = 0, 1, 2, 3
INPUT_ERRORS = (InvalidSpec, DimensionMismatch, KMismatch, NotPositiveDefinite, UnknownExample, NotSummable)
STATUS_EXIT = {ADMISSIBLE: EXIT_OK, NOT_ADMISSIBLE: EXIT_FAIL, UNDETERMINED: EXIT_UNDETERMINED}


# -- rendering ------------------------------------------------------------

def _text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key, val in obj.items():
            if isinstance(val, (dict, list)) and val and not _flat_list(val):
                lines.append(f"{pad}{key}:")
                lines.append(_text(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(val)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, dict):
                lines.append(f"{pad}-")
                lines.append(_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return "\n".join(lines)


def _flat_list(val):
    return isinstance(val, list) and all(not isinstance(v, (dict, list)) for v in val)


def _scalar(val):
    if isinstance(val, list):
        return "[" + ", ".join(_scalar(v) for v in val) + "]"
    if isinstance(val, float):
        return f"{val:.12g}"
    return str(val)


def emit(report, args):
    text = io.dump(report) if args.format == "json" else _text(report)
    if args.out and getattr(args, "_report_to_out", True):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# -- input helpers --------------------------------------------------------

def _operator_or_sequence(spec):
    data = io.load_json(spec)
    if isinstance(data, dict) and "kind" in data:
        return io.parse_operator(data)
    return io.parse_sequence(data)


def _vector(spec):
    data = io.load_json(spec)
    if isinstance(data, dict):
        seq = io.parse_sequence(data)
        if not seq.is_finite:
            raise InvalidSpec("expected a finite sequence")
        return seq.head
    return np.asarray(data, dtype=float).reshape(-1)


# -- subcommands ----------------------------------------------------------

def _extreme(args, upper):
    obj = _operator_or_sequence(args.input)
    is_op = isinstance(obj, (FiniteHermitian, DiagonalOperator))
    if is_op:
        fn = u_k_op if upper else l_k_op
    else:
        fn = u_k_seq if upper else l_k_seq
    ks = [args.k] if args.upto is None else list(range(1, args.upto + 1))
    rows = []
    for k in ks:
        est = fn(obj, k)
        rows.append({"k": k, "value": est.value, "error": est.error})
    name = "U_k" if upper else "L_k"
    report = {"functional": name, "values": rows}
    if args.against is not None:
        other = io.parse_sequence(args.against)
        other_fn = u_k_seq if upper else l_k_seq
        report["table"] = [[r["k"], r["value"], other_fn(other, r["k"]).value] for r in rows]
    emit(report, args)
    return EXIT_OK


def cmd_uk(args):
    return _extreme(args, True)


def cmd_lk(args):
    return _extreme(args, False)


def cmd_majorize(args):
    b, c = _vector(args.b), _vector(args.c)
    ok = majorizes(b, c, args.tol)
    emit({"majorized": bool(ok), "b": b.tolist(), "c": c.tolist()}, args)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_schur_horn(args):
    b, c = _vector(args.b), _vector(args.c)
    U = construct_diagonal_unitary(b, c, args.tol)
    diag = np.einsum("ij,i,ij->j", U, b, U)
    emit({
        "U": U.tolist(),
        "diagonal_residual": float(np.max(np.abs(diag - c))),
        "orthogonality_residual": float(np.max(np.abs(U.T @ U - np.eye(b.size)))),
    }, args)
    return EXIT_OK


def cmd_check(args):
    S = io.parse_operator(args.operator)
    c = io.parse_sequence(args.sequence)
    verdict = classify(S, c, args.horizon, args.tol)
    emit(verdict.to_dict(), args)
    return STATUS_EXIT[verdict.status]


def _synthesis_request(args):
    if args.request is not None:
        req = io.parse_synthesis_request(args.request)
    else:
        if args.operator is None or args.sequence is None:
            raise InvalidSpec("synthesize needs --request or both --operator and --sequence")
        req = {"operator": io.parse_operator(args.operator), "sequence": io.parse_sequence(args.sequence),
               "mode": args.mode}
        if args.N is not None:
            req["N"] = args.N
        req["steps"] = args.steps
    req.setdefault("tol", args.tol)
    req.setdefault("horizon", args.horizon)
    return req


def cmd_synthesize(args):
    req = _synthesis_request(args)
    S, c, mode, tol = req["operator"], req["sequence"], req["mode"], req["tol"]
    if mode in ("finite", "truncated"):
        if not isinstance(S, FiniteHermitian):
            raise InvalidSpec(f"mode {mode!r} needs a finite operator")
        if mode == "finite":
            if not c.is_finite:
                raise InvalidSpec("mode 'finite' needs a finite sequence")
            F = synthesize_finite(S, c.head, tol)
            norms = c.head
        else:
            if "N" not in req:
                raise InvalidSpec("mode 'truncated' needs N")
            F = synthesize_truncated_summable(S, c, req["N"], tol)
            norms = np.einsum("ij,ij->i", F.vectors, F.vectors)
        target = S
    else:
        if not isinstance(S, DiagonalOperator):
            raise InvalidSpec(f"mode {mode!r} needs an infinite diagonal operator")
        dec = head_decompose(S, c, req["horizon"], tol)
        steps = 1 if mode == "head" else req.get("steps", 3)
        res = greedy_extend(dec, c, steps, req["horizon"], tol)
        F = res.frame
        norms = res.norms
        # the realized block: S minus the untouched remainder on the active coordinates
        L = F.dim
        target = FiniteHermitian(np.diag(S.diag.entries(L) - res.residual_diag.entries(L)))
    frame_doc = io.frame_to_dict(F, target, norms)
    report = verify_pair(F, target, norms, max(tol, 1e-8)).to_dict()
    report.update({"mode": mode, "m": F.m, "dim": F.dim, "excess": excess(F)})
    if mode in ("head", "greedy"):
        report.update({"steps_completed": res.steps_completed, "stopped_early": res.stopped_early})
        if res.reason:
            report["reason"] = res.reason
    if args.out:
        io.dump(frame_doc, args.out)
        report["frame_file"] = args.out
        args._report_to_out = False
    else:
        report["frame"] = frame_doc
    emit(report, args)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_verify(args):
    F, S, c = io.parse_frame(args.frame)
    if args.operator is not None:
        S = io.parse_operator(args.operator)
    if args.norms is not None:
        c = _vector(args.norms)
    if S is None or c is None:
        raise InvalidSpec("verify needs a target operator and norms (in the frame file or as flags)")
    if not isinstance(S, FiniteHermitian):
        raise InvalidSpec("verify needs a finite target operator")
    report = verify_pair(F, S, c, max(args.tol, 1e-8)).to_dict()
    emit(report, args)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_excess(args):
    if args.frame is not None:
        F, _, _ = io.parse_frame(args.frame)
        emit({"m": F.m, "dim": F.dim, "excess": excess(F, args.tol)}, args)
        return EXIT_OK
    if args.operator is None or args.sequence is None:
        raise InvalidSpec("excess needs --frame, or --operator with --sequence")
    S = io.parse_operator(args.operator)
    c = io.parse_sequence(args.sequence)
    emit({"excess_forced_infinite": excess_forced_infinite(S, c, args.tol)}, args)
    return EXIT_OK


def cmd_examples(args):
    if args.name is None or args.list:
        emit({"examples": {k: fx.title for k, fx in FIXTURES.items()}}, args)
        return EXIT_OK
    report = run_example(args.name, args.horizon, args.tol)
    emit(report, args)
    if not report["matches_expected"]:
        return EXIT_FAIL
    return STATUS_EXIT[report["status"]]


# -- parser ---------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="comparison tolerance (default 1e-9)")
    common.add_argument("--horizon", type=int, default=200, help="k-range checked explicitly (default 200)")
    common.add_argument("--out", help="write the report (or, for synthesize, the frame file) here")
    common.add_argument("--format", choices=("json", "text"), default="json")

    parser = argparse.ArgumentParser(prog="frameadmit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, what in (("uk", cmd_uk, "supremum"), ("lk", cmd_lk, "infimum")):
        p = sub.add_parser(name, parents=[common], help=f"{what} of k-term sums of a sequence or operator")
        p.add_argument("input", help="sequence or operator spec (path or inline JSON)")
        group = p.add_mutually_exclusive_group()
        group.add_argument("--k", type=int, default=1)
        group.add_argument("--upto", type=int, help="tabulate k = 1..UPTO")
        p.add_argument("--against", help="second sequence tabulated alongside")
        p.set_defaults(func=fn)

    p = sub.add_parser("majorize", parents=[common], help="is c majorized by b")
    p.add_argument("--b", required=True)
    p.add_argument("--c", required=True)
    p.set_defaults(func=cmd_majorize)

    p = sub.add_parser("schur-horn", parents=[common], help="orthogonal U with diag(U^T diag(b) U) = c")
    p.add_argument("--b", required=True)
    p.add_argument("--c", required=True)
    p.set_defaults(func=cmd_schur_horn)

    p = sub.add_parser("check", parents=[common], help="classify a pair (S, c)")
    p.add_argument("--operator", required=True)
    p.add_argument("--sequence", required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("synthesize", parents=[common], help="build a frame for an admissible pair")
    p.add_argument("--request", help="synthesis request spec")
    p.add_argument("--operator")
    p.add_argument("--sequence")
    p.add_argument("--mode", choices=io.SYNTHESIS_MODES, default="finite")
    p.add_argument("--N", type=int)
    p.add_argument("--steps", type=int, default=3)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("verify", parents=[common], help="check a frame file against its target pair")
    p.add_argument("frame")
    p.add_argument("--operator")
    p.add_argument("--norms")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("excess", parents=[common], help="frame excess, or whether it is forced infinite")
    p.add_argument("--frame")
    p.add_argument("--operator")
    p.add_argument("--sequence")
    p.set_defaults(func=cmd_excess)

    p = sub.add_parser("examples", parents=[common], help="run a worked example end to end")
    p.add_argument("name", nargs="?", help=f"one of {sorted(FIXTURES)}")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error [{exc.condition}]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except HorizonExceeded as exc:
        print(f"undetermined [{exc.condition}]: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED
    except FrameAdmitError as exc:
        print(f"failed [{exc.condition}]: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, TypeError) as exc:
        print(f"error [invalid-spec]: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
