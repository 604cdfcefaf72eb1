"""Command-line interface: ``qhtest <verb> [options]``.

Every verb writes JSON to standard output (``--format csv`` switches to a
header row plus data rows). Validation problems, including unreadable or
malformed state files, are reported on standard error with exit status 2.
Quantities measured in nats (divergences, ``ln beta``, rates) are rescaled
to bits with ``--bits``. ``QHT_DENSE_CAP`` overrides the largest dense
operator dimension (default 4096).

Verbs:
  divergence         fidelity, distance or divergence between two states
  perr               optimal symmetric error with n copies
  beta               optimal type-II error at type-I level eps
  sample-complexity  bounds and search for n* ("sym" or "asym")
  mary               M-ary errors for an ensemble file (and n* with --eps)
  fuchs-caves        Fuchs-Caves measurement and its product-strategy error
  fig-compare        table comparing 1/(-ln x) with 1/(2(1 - sqrt x))
  random-state       random density matrix as a state file
  selftest           property checks at reduced size
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import math
import sys

import numpy as np

from . import divergences as dv
from ._validation import ValidationError
from .binary import BinaryInstance, helstrom_error, log_beta
from .complexity import n_star_asymmetric, n_star_mary, n_star_symmetric
from .figure import fig_compare
from .io import load_ensemble, load_state, state_to_dict
from .linalg import random_density
from .multi import Ensemble, error_of_povm, optimal_error_iterative, pgm, pgm_error_bound
from .selftest import run_selftest
from .strategies import fc_error, fuchs_caves

__all__ = ["main", "build_parser"]

LN2 = math.log(2.0)

MEASURES = {
    "fidelity": (lambda a, b, o: dv.fidelity(a, b), False),
    "holevo_fidelity": (lambda a, b, o: dv.holevo_fidelity(a, b), False),
    "z_fidelity": (lambda a, b, o: dv.z_fidelity(a, b, _need(o.z, "--z")), False),
    "trace_distance": (lambda a, b, o: dv.trace_distance(a, b), False),
    "bures_distance": (lambda a, b, o: dv.bures_distance(a, b), False),
    "hellinger_distance": (lambda a, b, o: dv.hellinger_distance(a, b), False),
    "petz_renyi": (lambda a, b, o: dv.petz_renyi(a, b, _need(o.alpha, "--alpha")), True),
    "sandwiched_renyi": (lambda a, b, o: dv.sandwiched_renyi(a, b, _need(o.alpha, "--alpha")), True),
    "relative_entropy": (lambda a, b, o: dv.relative_entropy(a, b), True),
    "chernoff": (lambda a, b, o: dv.chernoff(a, b)[0], True),
}


def _need(value, flag):
    if value is None:
        raise ValidationError(f"this measure needs {flag}")
    return value


# ------------------------------------------------------------------ output


def _plain(x):
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return None
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return x


def _flatten(obj, prefix=""):
    out = {}
    for k, v in obj.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = json.dumps(v)
        else:
            out[key] = v
    return out


def _emit(result, fmt, stream):
    """Write a record (dict) or a table (list of dicts)."""
    result = _plain(result)
    if fmt == "json":
        stream.write(json.dumps(result, indent=2) + "\n")
        return
    rows = result if isinstance(result, list) else [result]
    rows = [_flatten(r) for r in rows]
    fields = list(dict.fromkeys(k for r in rows for k in r))
    buf = _io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    stream.write(buf.getvalue())


def _to_bits(value, bits):
    if not bits or value is None or isinstance(value, str):
        return value
    return value / LN2


# ----------------------------------------------------------------- commands


def _cmd_divergence(args):
    a, b = load_state(args.a), load_state(args.b)
    fn, in_nats = MEASURES[args.measure]
    value = fn(a, b, args)
    out = {"measure": args.measure, "value": _to_bits(value, args.bits and in_nats)}
    if args.measure in ("petz_renyi", "sandwiched_renyi"):
        out["alpha"] = args.alpha
    if args.measure == "z_fidelity":
        out["z"] = args.z
    if in_nats:
        out["unit"] = "bits" if args.bits else "nats"
    return out


def _cmd_perr(args):
    inst = BinaryInstance(args.p, load_state(args.rho), load_state(args.sigma))
    pe, _ = helstrom_error(inst, args.n, args.backend)
    return {"p_e": pe, "n": args.n, "p": args.p, "backend": args.backend}


def _cmd_beta(args):
    rho, sigma = load_state(args.rho), load_state(args.sigma)
    lb = log_beta(rho, sigma, args.eps, args.n, args.backend)
    return {
        "beta": math.exp(lb) if lb > -745 else 0.0,
        "log_beta": _to_bits(lb, args.bits),
        "rate": _to_bits(-lb / args.n, args.bits),
        "n": args.n,
        "eps": args.eps,
        "backend": args.backend,
        "unit": "bits" if args.bits else "nats",
    }


def _cmd_sample_complexity(args):
    rho, sigma = load_state(args.rho), load_state(args.sigma)
    search = not args.no_search
    if args.setting == "sym":
        rep = n_star_symmetric(BinaryInstance(args.p, rho, sigma), args.eps, args.backend, args.n_max, search)
    else:
        if args.delta is None:
            raise ValidationError("sample-complexity asym needs --delta")
        rep = n_star_asymmetric(rho, sigma, args.eps, args.delta, args.gamma, args.backend, args.n_max, search)
    out = rep.to_dict()
    if args.bits:
        for key in ("relative_entropy",):
            if isinstance(out.get(key), float):
                out[key] = out[key] / LN2
        if isinstance(out.get("stein_ratio"), dict):
            out["stein_ratio"]["value"] /= LN2
    return out


def _cmd_mary(args):
    priors, states = load_ensemble(args.ensemble)
    ens = Ensemble(tuple(priors), tuple(states))
    out = {"n": args.n, "pgm_bound": pgm_error_bound(ens, args.n)}
    if not args.bound_only:
        out["pgm_error"] = error_of_povm(ens, args.n, pgm(ens, args.n))
        res = optimal_error_iterative(ens, args.n, args.tol, args.max_iters)
        out["optimal_error"] = res.p_e
        out["certificate_residual"] = res.residual
        out["certified"] = res.converged
        out["gap_bound"] = res.gap_bound
        out["iterations"] = res.iterations
    if args.eps is not None:
        out["sample_complexity"] = n_star_mary(ens, args.eps, optimal=not args.bound_only,
                                               search=not args.bound_only).to_dict()
    return out


def _cmd_fuchs_caves(args):
    rho, sigma = load_state(args.rho), load_state(args.sigma)
    fc = fuchs_caves(rho, sigma)
    out = {
        "lambdas": fc.lambdas,
        "P": fc.P,
        "Q": fc.Q,
        "classical_fidelity": fc.classical_fidelity,
        "fidelity": dv.fidelity(rho, sigma),
    }
    if args.n is not None:
        out["n"] = args.n
        out["fc_error"] = fc_error(args.p, rho, sigma, args.n)
        out["helstrom_error"] = helstrom_error(BinaryInstance(args.p, rho, sigma), args.n,
                                               "schur" if rho.shape[0] == 2 else "dense")[0]
    return out


def _cmd_fig_compare(args):
    table = fig_compare(args.grid)
    return [
        {"x": x, "inverse_neg_log": f, "inverse_bures": g, "gap": d}
        for x, f, g, d in table.rows()
    ]


def _cmd_random_state(args):
    rho = random_density(args.dim, args.rank, args.seed)
    obj = state_to_dict(rho)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(obj, fh)
        return {"written": args.out, "dim": args.dim, "rank": args.rank or args.dim, "seed": args.seed}
    return obj


def _cmd_selftest(args):
    results = run_selftest(args.scale, args.seed)
    rows = [
        {"name": r.name, "passed": r.passed, "worst": r.worst, "cases": r.cases, "seconds": round(r.seconds, 3)}
        for r in results
    ]
    return rows, 0 if all(r.passed for r in results) else 1


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json", help="output format (default json)")
    common.add_argument("--bits", action="store_true", help="report nat-valued quantities in bits")

    parser = argparse.ArgumentParser(
        prog="qhtest", description="Quantum hypothesis testing: errors, divergences and sample complexity."
    )
    sub = parser.add_subparsers(dest="verb", required=True, metavar="verb")

    def add(name, help_text, func, epilog=None):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text, epilog=epilog)
        p.set_defaults(func=func)
        return p

    backend = dict(choices=("dense", "schur"), default=None,
                   help="computation backend (default: schur for qubits, else dense)")

    p = add("divergence", "fidelity, distance or divergence between two states", _cmd_divergence,
            "CSV columns: measure, value, [alpha|z], [unit]")
    p.add_argument("--measure", required=True, choices=sorted(MEASURES))
    p.add_argument("--a", required=True, help="first state file")
    p.add_argument("--b", required=True, help="second state file")
    p.add_argument("--alpha", type=float, help="order for Renyi divergences")
    p.add_argument("--z", type=float, help="parameter for z_fidelity")

    p = add("perr", "optimal symmetric (Helstrom) error with n copies", _cmd_perr,
            "CSV columns: p_e, n, p, backend")
    p.add_argument("--p", type=float, required=True, help="prior of rho")
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--backend", **backend)

    p = add("beta", "optimal type-II error at type-I level eps", _cmd_beta,
            "CSV columns: beta, log_beta, rate, n, eps, backend, unit")
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--backend", **backend)

    p = add("sample-complexity", "bounds on and search for the sample complexity n*", _cmd_sample_complexity,
            "CSV columns: flattened report fields (lower_bounds.*, upper_bounds.*, parameters.*, ...)")
    p.add_argument("setting", choices=("sym", "asym"))
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--eps", type=float, required=True, help="target error (type-I level for asym)")
    p.add_argument("--p", type=float, default=0.5, help="prior of rho (sym)")
    p.add_argument("--delta", type=float, help="type-II target (asym)")
    p.add_argument("--gamma", type=float, default=2.0, help="largest sandwiched order for asym lower bounds")
    p.add_argument("--n-max", type=int, help="search cap")
    p.add_argument("--no-search", action="store_true", help="report bounds only")
    p.add_argument("--backend", **backend)

    p = add("mary", "M-ary errors for an ensemble file", _cmd_mary,
            "CSV columns: n, pgm_bound, pgm_error, optimal_error, certificate_residual, ...")
    p.add_argument("--ensemble", required=True, help='file {"priors": [...], "states": [...]}')
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--eps", type=float, help="also report the sample complexity for this target")
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--bound-only", action="store_true", help="skip the dense computations")

    p = add("fuchs-caves", "Fuchs-Caves measurement and product-strategy error", _cmd_fuchs_caves,
            "CSV columns: lambdas, P, Q, classical_fidelity, fidelity, [n, fc_error, helstrom_error]")
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--n", type=int, help="copies for the exact product-strategy error (qubits)")

    p = add("fig-compare", "table of 1/(-ln x), 1/(2(1 - sqrt x)) and their gap", _cmd_fig_compare,
            "CSV columns: x, inverse_neg_log, inverse_bures, gap; the first row is the x -> 0 limit")
    p.add_argument("--grid", type=int, default=101, help="number of interior grid points")

    p = add("random-state", "random density matrix (Hilbert-Schmidt measure)", _cmd_random_state,
            "CSV columns: dim, re, im (JSON-encoded rows)")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the state file here instead of standard output")

    p = add("selftest", "property checks at reduced size", _cmd_selftest,
            "CSV columns: name, passed, worst, cases, seconds; exit status 1 if any check fails")
    p.add_argument("--scale", type=float, default=0.1, help="fraction of the full batch sizes")
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "backend", "unset") is None and hasattr(args, "rho"):
        try:
            dim = load_state(args.rho).shape[0]
        except ValidationError as exc:
            print(f"qhtest: error: {exc}", file=sys.stderr)
            return 2
        args.backend = "schur" if dim == 2 else "dense"
    try:
        result = args.func(args)
    except ValidationError as exc:
        print(f"qhtest: error: {exc}", file=sys.stderr)
        return 2
    code = 0
    if isinstance(result, tuple):
        result, code = result
    _emit(result, args.format, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
