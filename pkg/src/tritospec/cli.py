"""Command-line front end.

Every command prints a JSON RunReport (complex numbers as ``[re, im]``).
``figure --csv`` writes the raw data series as CSV instead.

Exit codes: 0 success, 2 usage error, 3 numerical failure (the error class
name is printed on stderr).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import platform
import sys
import warnings
from typing import Optional

import numpy as np

from . import __version__
from .applications import (
    RefinementWarning,
    accuracy_report,
    naive_eigenvalues,
    projection_report,
    refine_spectral_factorization,
    sort_spectrum,
)
from .conditioning import global_min_gap_toeplitz, global_min_gap_type, min_gap_toeplitz, min_gap_type
from .errors import TritospecError
from .lab import run_bound_suite
from .numeric import TridiagonalMatrix, eig
from .structured import (
    Subspace,
    condition_reports,
    project_subspace,
    structured_eig_condition,
    structured_eig_condition_projected,
    structured_pseudospectrum,
    wilkinson,
)
from .toeplitz import (
    ToeplitzTypeCase,
    TriToeplitz,
    eigenvalues_toeplitz,
    eigenvalues_type,
    normalize,
    right_eigenvector_type,
    type_tridiagonal,
    unit_right_eigenvector,
)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- serialization


def encode(obj):
    """Recursively convert numpy/complex values into JSON-ready structures."""
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return encode(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, (Subspace, ToeplitzTypeCase)):
        return obj.name
    return obj


def parse_number(value) -> complex:
    """Accept a JSON [re, im] pair, a real number, or a string such as '1-2j'."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise UsageError(f"complex value must be [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", "").replace("i", "j"))
        except ValueError as exc:
            raise UsageError(f"cannot parse number {value!r}") from exc
    return complex(value)


# ---------------------------------------------------------------- matrix input


class MatrixSpec:
    """kind is 'toeplitz', 'type' or 'tridiagonal'."""

    def __init__(self, kind: str, T: Optional[TriToeplitz] = None, case=None, tri=None):
        self.kind = kind
        self.T = T
        self.case = case
        self.tri = tri

    @property
    def n(self) -> int:
        return self.T.n if self.T is not None else self.tri.n

    def tridiagonal(self) -> TridiagonalMatrix:
        if self.kind == "toeplitz":
            return self.T.to_tridiagonal()
        if self.kind == "type":
            return type_tridiagonal(self.T, self.case)
        return self.tri

    def dense(self) -> np.ndarray:
        return self.tridiagonal().to_dense()

    def echo(self) -> dict:
        out = {"kind": self.kind, "n": self.n}
        if self.T is not None:
            out.update(sigma=self.T.sigma, delta=self.T.delta, tau=self.T.tau)
        if self.case is not None:
            out["case"] = self.case.name
        if self.tri is not None:
            out["diagonals"] = {"sub": self.tri.sub, "diag": self.tri.diag, "sup": self.tri.sup}
        return out

    @classmethod
    def from_json(cls, data: dict) -> MatrixSpec:
        kind = data.get("kind")
        required = {
            "toeplitz": {"kind", "n", "sigma", "delta", "tau"},
            "type": {"kind", "n", "sigma", "delta", "tau", "case"},
            "tridiagonal": {"kind", "diagonals"},
        }
        if kind not in required:
            raise UsageError(f"--file: kind must be toeplitz, type or tridiagonal, got {kind!r}")
        keys = set(data)
        allowed = required[kind] | ({"n"} if kind == "tridiagonal" else set())
        if not required[kind] <= keys or not keys <= allowed:
            raise UsageError(
                f"--file: kind {kind!r} needs exactly the fields {sorted(required[kind])}, got {sorted(keys)}"
            )
        if kind == "tridiagonal":
            d = data["diagonals"]
            try:
                tri = TridiagonalMatrix(
                    [parse_number(v) for v in d["sub"]],
                    [parse_number(v) for v in d["diag"]],
                    [parse_number(v) for v in d["sup"]],
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise UsageError(f"--file: bad diagonals ({exc})") from exc
            if "n" in data and int(data["n"]) != tri.n:
                raise UsageError("--file: n does not match the diagonal lengths")
            return cls("tridiagonal", tri=tri)
        T = TriToeplitz(
            int(data["n"]), parse_number(data["sigma"]), parse_number(data["delta"]), parse_number(data["tau"])
        )
        if kind == "type":
            return cls("type", T, _parse_case(data["case"], "--file"))
        return cls("toeplitz", T)


def _parse_case(text, flag: str) -> ToeplitzTypeCase:
    try:
        return ToeplitzTypeCase.parse(str(text))
    except (ValueError, KeyError) as exc:
        names = ", ".join(c.name for c in ToeplitzTypeCase)
        raise UsageError(f"{flag}: unknown case {text!r}; expected one of {names}") from exc


def read_spec(args) -> MatrixSpec:
    if args.file:
        if args.params:
            raise UsageError("--file cannot be combined with positional n sigma delta tau")
        try:
            with open(args.file, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"--file: cannot read {args.file} ({exc})") from exc
        spec = MatrixSpec.from_json(data)
        if args.case is not None:
            if spec.kind == "tridiagonal":
                raise UsageError("--case does not apply to a tridiagonal --file")
            spec = MatrixSpec("type", spec.T, _parse_case(args.case, "--case"))
        return spec
    if len(args.params) != 4:
        raise UsageError("expected positional n sigma delta tau (or --file)")
    try:
        n = int(args.params[0])
    except ValueError as exc:
        raise UsageError(f"n must be an integer, got {args.params[0]!r}") from exc
    if n < 1:
        raise UsageError("n must be at least 1")
    sigma, delta, tau = (parse_number(p) for p in args.params[1:])
    T = TriToeplitz(n, sigma, delta, tau)
    if args.case is not None:
        return MatrixSpec("type", T, _parse_case(args.case, "--case"))
    return MatrixSpec("toeplitz", T)


def _require_structured(spec: MatrixSpec, command: str) -> None:
    if spec.kind == "tridiagonal":
        raise UsageError(f"{command} needs a Toeplitz or Toeplitz-type matrix, not a tridiagonal --file")


# ---------------------------------------------------------------- commands


def cmd_spectrum(spec: MatrixSpec, args, seed: int):
    result = {}
    notes = []
    T = spec.T
    if spec.kind == "tridiagonal" or (T is not None and T.degenerate and T.n > 1):
        F = eig(spec.dense(), seed=seed)
        values = F.values
        vectors = F.vectors
        result["method"] = "dense"
        if spec.kind != "tridiagonal":
            notes.append("sigma*tau = 0: closed forms do not apply, used the dense solver")
    else:
        if spec.kind == "toeplitz":
            values = eigenvalues_toeplitz(T) if T.n > 1 else np.array([T.delta])
            vecs = [unit_right_eigenvector(T, h) for h in range(1, T.n + 1)] if T.n > 1 else [np.ones(1)]
        else:
            values = eigenvalues_type(T, spec.case)
            vecs = [normalize(right_eigenvector_type(T, spec.case, h)) for h in range(1, T.n + 1)]
        vectors = np.column_stack(vecs)
        result["method"] = "closed-form"
    result["eigenvalues"] = values
    if args.vectors:
        result["eigenvectors"] = vectors.T
    if args.dense and result["method"] == "closed-form":
        F = eig(spec.dense(), seed=seed)
        result["dense_eigenvalues"] = sort_spectrum(F.values)
        result["dense_max_difference"] = accuracy_report(F.values, values)
    return result, notes


def cmd_cond(spec: MatrixSpec, args, seed: int):
    _require_structured(spec, "cond")
    sub = Subspace.parse(args.subspace)
    if sub is Subspace.GENERAL:
        raise UsageError("--subspace: choose none, T, ST or AT")
    rows = condition_reports(spec.T, spec.case, sub)
    table = [
        {
            "h": r.h,
            "lambda": r.lam,
            "min_gap": r.min_gap,
            "kappa_eig": r.kappa_eig,
            "kappa_vec": r.kappa_vec,
            "kappa_structured": r.kappa_structured,
        }
        for r in rows
    ]
    return {"subspace": sub.value if sub else None, "rows": table}, []


def cmd_gaps(spec: MatrixSpec, args, seed: int):
    _require_structured(spec, "gaps")
    T, case = spec.T, spec.case
    n = T.n
    if case is None:
        rows = [min_gap_toeplitz(T, h) for h in range(1, n + 1)]
        glob = global_min_gap_toeplitz(T)
    else:
        rows = [min_gap_type(T, case, h) for h in range(1, n + 1)]
        glob = global_min_gap_type(T, case)
    return {"min_gap": rows, "global_min_gap": glob}, []


def cmd_structured(spec: MatrixSpec, args, seed: int):
    _require_structured(spec, "structured")
    if spec.kind == "type":
        raise UsageError("--case: structured condition numbers are defined for Toeplitz matrices only")
    sub = Subspace.parse(args.subspace)
    if sub in (None, Subspace.GENERAL):
        raise UsageError("--subspace: choose T, ST or AT")
    T = spec.T
    hs = [args.h] if args.h is not None else range(1, T.n + 1)
    rows = []
    for h in hs:
        P = project_subspace(wilkinson(T, h).W, sub)
        rows.append(
            {
                "h": h,
                "kappa_structured": structured_eig_condition(T, h, sub),
                "kappa_projected": structured_eig_condition_projected(T, h, sub),
                "projection": {"sigma": P.sigma_h, "delta": P.delta_h, "tau": P.tau_h, "norm": P.frobenius_norm},
            }
        )
    return {"subspace": sub.value, "rows": rows}, []


def cmd_pseudospectrum(spec: MatrixSpec, args, seed: int):
    _require_structured(spec, "pseudospectrum")
    if spec.kind == "type":
        raise UsageError("--case: structured pseudospectra are defined for Toeplitz matrices only")
    if args.eps < 0:
        raise UsageError("--eps must be non-negative")
    mode = args.mode
    b = structured_pseudospectrum(spec.T, args.eps, mode, m=args.points)
    out = {"kind": b.kind, "eps": b.eps, "pieces": b.pieces}
    if b.points is not None:
        out["points"] = b.points
    return out, []


def cmd_project(spec: MatrixSpec, args, seed: int):
    rep = projection_report(spec.tridiagonal())
    T = rep.T
    return {
        "nearest": {"n": T.n, "sigma": T.sigma, "delta": T.delta, "tau": T.tau},
        "distance": rep.distance,
        "hw_lhs": rep.hw_lhs,
        "hw_rhs": rep.hw_rhs,
        "traceless": rep.traceless,
        "singular": rep.singular,
        "kappa2": rep.kappa2,
        "pd_check": rep.pd_check,
    }, []


def cmd_refine(spec: MatrixSpec, args, seed: int):
    A = spec.tridiagonal()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RefinementWarning)
        rf = refine_spectral_factorization(A)
    out = {
        "nearest": {"n": rf.T.n, "sigma": rf.T.sigma, "delta": rf.T.delta, "tau": rf.T.tau},
        "eigenvalues": sort_spectrum(rf.values),
        "residual": rf.residual,
    }
    exact = None
    if args.exact:
        if spec.kind == "type":
            exact = eigenvalues_type(spec.T, spec.case)
        elif spec.kind == "toeplitz":
            exact = eigenvalues_toeplitz(spec.T)
        else:
            raise UsageError("--exact needs a Toeplitz or Toeplitz-type matrix with a closed-form spectrum")
        naive = naive_eigenvalues(A)
        out["exact"] = sort_spectrum(exact)
        out["refined_error"] = accuracy_report(rf.values, exact)
        out["naive_error"] = accuracy_report(naive, exact)
        out["naive_eigenvalues"] = sort_spectrum(naive)
    return out, list(rf.warnings)


def cmd_lab(spec: MatrixSpec, args, seed: int):
    _require_structured(spec, "lab")
    if args.seeds < 1:
        raise UsageError("--seeds must be positive")
    target = spec.T if spec.case is None else (spec.T, spec.case)
    seeds = range(seed, seed + args.seeds)
    rep = run_bound_suite(seeds=seeds, subspace=args.subspace, target=target, eps=args.eps)
    out = rep.as_dict()
    if args.eps is not None:
        out["eps"] = args.eps
    return out, []


def figure_data(fig: int, theta1: float = 0.0, theta2: float = 0.0, delta: complex = 0.0, sigma: float = 1.0):
    """(header, rows) for the data series behind each figure."""
    if fig in (1, 4):
        T = TriToeplitz(25, 1, 0, 0.01)
        if fig == 1:
            A = T.to_tridiagonal()
            exact = eigenvalues_toeplitz(T)
        else:
            case = ToeplitzTypeCase.PLUS_MINUS
            A = type_tridiagonal(T, case)
            exact = eigenvalues_type(T, case)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RefinementWarning)
            refined = refine_spectral_factorization(A).values
        naive = naive_eigenvalues(A)
        cols = [sort_spectrum(v) for v in (exact, naive, refined)]
        header = ["index", "exact_re", "exact_im", "naive_re", "naive_im", "refined_re", "refined_im"]
        rows = []
        for i in range(T.n):
            row = [i + 1]
            for c in cols:
                row += [float(c[i].real), float(c[i].imag)]
            rows.append(row)
        return header, rows
    if fig == 2:
        n = 100
        T = TriToeplitz(n, complex(math.cos(theta1), math.sin(theta1)), delta, complex(math.cos(theta2), math.sin(theta2)))
        return ["h", "kappa_vec"], [[h, 1.0 / min_gap_toeplitz(T, h)] for h in range(1, n + 1)]
    if fig == 3:
        n = 100
        T = TriToeplitz(n, sigma, delta, sigma)
        return ["h", "kappa_ST"], [[h, structured_eig_condition(T, h, Subspace.ST)] for h in range(1, n + 1)]
    raise UsageError(f"figure id must be 1, 2, 3 or 4, got {fig}")


def cmd_figure(spec, args, seed: int):
    header, rows = figure_data(args.id, args.theta1, args.theta2, parse_number(args.delta), args.sigma)
    return {"figure": args.id, "columns": header, "rows": rows}, []


COMMANDS = {
    "spectrum": cmd_spectrum,
    "cond": cmd_cond,
    "gaps": cmd_gaps,
    "structured": cmd_structured,
    "pseudospectrum": cmd_pseudospectrum,
    "project": cmd_project,
    "refine": cmd_refine,
    "lab": cmd_lab,
    "figure": cmd_figure,
}


# ---------------------------------------------------------------- parser


def _add_matrix_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("params", nargs="*", metavar="n sigma delta tau", help="inline Toeplitz parameters")
    p.add_argument("--toeplitz", action="store_true", help="positional parameters describe (n; sigma, delta, tau)")
    p.add_argument("--case", help="Toeplitz-type corner case, e.g. PLUS_MINUS or '+-'")
    p.add_argument("--file", help="JSON MatrixSpec file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tritospec", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"tritospec {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (default $TRITOSPEC_SEED or 0)")
    common.add_argument("--out", help="write output to this path instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="eigenvalues and eigenvectors")
    _add_matrix_args(p)
    p.add_argument("--vectors", action="store_true", help="include unit eigenvectors")
    p.add_argument("--dense", action="store_true", help="also run the dense solver and compare")

    p = sub.add_parser("cond", parents=[common], help="per-eigenvalue condition numbers")
    _add_matrix_args(p)
    p.add_argument("--subspace", default="none", choices=["none", "T", "ST", "AT"])

    p = sub.add_parser("gaps", parents=[common], help="eigenvalue gaps")
    _add_matrix_args(p)

    p = sub.add_parser("structured", parents=[common], help="structured condition numbers")
    _add_matrix_args(p)
    p.add_argument("--subspace", default="T", choices=["T", "ST", "AT"])
    p.add_argument("--h", type=int, default=None, help="single eigenvalue index")

    p = sub.add_parser("pseudospectrum", parents=[common], help="structured pseudospectrum boundary")
    _add_matrix_args(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--mode", default="ST", choices=["ST", "AT", "ellipse"])
    p.add_argument("--points", type=int, default=256, help="points on the ellipse")

    p = sub.add_parser("project", parents=[common], help="nearest Toeplitz matrix")
    _add_matrix_args(p)

    p = sub.add_parser("refine", parents=[common], help="refined spectral factorization")
    _add_matrix_args(p)
    p.add_argument("--exact", action="store_true", help="compare against the closed-form spectrum")

    p = sub.add_parser("lab", parents=[common], help="eigenvector angle bound suite")
    _add_matrix_args(p)
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--eps", type=float, default=None, help="default: 1e-6 times the global minimum gap")
    p.add_argument("--subspace", default="general", choices=["general", "T", "ST", "AT"])

    p = sub.add_parser("figure", parents=[common], help="data behind the figures")
    p.add_argument("id", type=int, choices=[1, 2, 3, 4])
    p.add_argument("--csv", action="store_true", help="emit CSV instead of JSON")
    p.add_argument("--theta1", type=float, default=0.0, help="figure 2: phase of sigma")
    p.add_argument("--theta2", type=float, default=0.0, help="figure 2: phase of tau")
    p.add_argument("--delta", default="0", help="figures 2 and 3: diagonal value")
    p.add_argument("--sigma", type=float, default=1.0, help="figure 3: off-diagonal value")
    return parser


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("TRITOSPEC_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise UsageError(f"TRITOSPEC_SEED must be an integer, got {env!r}") from exc


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        seed = _seed(args)
        if args.command == "figure":
            spec = None
            echo = {"figure": args.id}
        else:
            spec = read_spec(args)
            echo = spec.echo()
        results, notes = COMMANDS[args.command](spec, args, seed)
    except UsageError as exc:
        parser.error(str(exc))
    except TritospecError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    if args.command == "figure" and args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(results["columns"])
        for row in results["rows"]:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])
        _emit(buf.getvalue(), args.out)
        return 0
    report = {
        "command": args.command,
        "input": echo,
        "results": results,
        "warnings": notes,
        "versions": {
            "tritospec": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "seed": seed,
    }
    _emit(json.dumps(encode(report), indent=2) + "\n", args.out)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
