"""Command line interface: ``rod-hearing {forward,identify,classify,xvector,roundtrip}``.

Exit codes: 0 success, 2 bad input, 3 forward-solver or boundary-rank error,
4 rank-deficient inverse system, 5 no configuration fits.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import sys
import warnings
from dataclasses import asdict

import numpy as np

from . import __version__
from .charfn import xvector_of
from .core import classify, duality_distance
from .errors import (
    ConfigError,
    DomainError,
    NoFit,
    RankDeficient,
    RodHearingError,
    ScanExhausted,
    ZeroRow,
)
from .formats import (
    load_config,
    load_spectrum,
    result_payload,
    sig15,
    spectrum_payload,
    write_json,
)
from .forward import SolverOptions, forward_spectrum
from .inverse import FIT_TOL, NOISY_FIT_TOL, N_EIGEN, InverseOptions, build_system, identify, solve_xvector

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_FORWARD = 3
EXIT_RANK = 4
EXIT_FIT = 5


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, RankDeficient):
        return EXIT_RANK
    if isinstance(exc, NoFit):
        return EXIT_FIT
    if isinstance(exc, (ScanExhausted, ZeroRow, DomainError)):
        return EXIT_FORWARD
    return EXIT_INPUT


def _timestamp() -> str | None:
    # wall-clock time would break byte-stable outputs; honour SOURCE_DATE_EPOCH only
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if not epoch:
        return None
    return _dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc).isoformat()


def _manifest(command: str, inputs: dict, options: dict) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "options": options,
        "tool_version": __version__,
        "timestamp": _timestamp(),
    }


def _inverse_options(args, noisy: bool = False) -> InverseOptions:
    fit_tol = args.fit_tol
    if fit_tol is None:
        fit_tol = NOISY_FIT_TOL if noisy else FIT_TOL
    return InverseOptions(rank_eps=args.rank_eps, fit_tol=fit_tol, grid=args.grid,
                          legacy_case_analysis=args.legacy_case_analysis)


def _emit(payload: dict, out: str | None) -> None:
    if out:
        write_json(out, payload)
    else:
        print(json.dumps(payload, indent=2, sort_keys=True))


def _require(value, flag: str):
    if value is None:
        raise ConfigError(f"{flag} is required")
    return value


# --- commands ---------------------------------------------------------------

def cmd_forward(args) -> int:
    config = load_config(_require(args.config, "--config"))
    if args.count < 1:
        raise ConfigError("--count must be at least 1")
    opts = SolverOptions(beta_max=args.beta_max)
    sp = forward_spectrum(config, args.count, opts)
    payload = spectrum_payload(sp.values, sp.residuals)
    payload["diagnostics"] = list(sp.diagnostics)
    payload["manifest"] = _manifest("forward", {"config": args.config},
                                    {"count": args.count, **asdict(opts)})
    _emit(payload, args.out)
    return EXIT_OK


def cmd_identify(args) -> int:
    values = load_spectrum(_require(args.spectrum, "--spectrum"))
    if len(values) < N_EIGEN:
        raise ConfigError(f"need at least {N_EIGEN} eigenvalues, got {len(values)}")
    if len(values) > N_EIGEN:
        warnings.warn(f"using the first {N_EIGEN} of {len(values)} eigenvalues", stacklevel=1)
        values = values[:N_EIGEN]
    opts = _inverse_options(args)
    result = identify(values, opts)
    payload = result_payload(result)
    payload["manifest"] = _manifest("identify", {"spectrum": args.spectrum}, _opts_dict(opts))
    _emit(payload, args.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    config = load_config(_require(args.config, "--config"))
    left, right = classify(config)
    line = f"left: {left}, right: {right}"
    if args.out:
        write_json(args.out, {"labels": [str(left), str(right)],
                              "manifest": _manifest("classify", {"config": args.config}, {})})
    print(line)
    return EXIT_OK


def cmd_xvector(args) -> int:
    if args.config:
        config = load_config(args.config)
        xv = xvector_of(config)
        payload = {"x": [sig15(v) for v in xv.values],
                   "x_canonical": [sig15(v) for v in xv.canonical().values],
                   "convention": xv.convention}
        inputs = {"config": args.config}
    else:
        values = load_spectrum(_require(args.spectrum, "--config or --spectrum"))[:N_EIGEN]
        system = build_system(values, args.rank_eps)
        xv, rank, gap = solve_xvector(system)
        payload = {"x_canonical": [sig15(v) for v in xv.values], "rank": rank, "gap": sig15(gap),
                   "singular_values": [sig15(v) for v in system.singular_values]}
        inputs = {"spectrum": args.spectrum}
    payload["manifest"] = _manifest("xvector", inputs, {"rank_eps": args.rank_eps})
    _emit(payload, args.out)
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    config = load_config(_require(args.config, "--config"))
    if not args.noise >= 0:
        raise ConfigError("--noise must be nonnegative")
    if args.trials < 1:
        raise ConfigError("--trials must be at least 1")
    exact = forward_spectrum(config, N_EIGEN).as_array()
    opts = _inverse_options(args, noisy=args.noise > 0)
    rng = np.random.default_rng(args.seed)
    trials = []
    first_failure = EXIT_OK
    for k in range(args.trials):
        s = exact * (1.0 + args.noise * rng.uniform(-1.0, 1.0, size=exact.size))
        entry = {"trial": k, "s": [sig15(v) for v in s]}
        try:
            res = identify(s, opts)
        except RodHearingError as exc:
            entry["error"] = type(exc).__name__
            entry["message"] = str(exc)
            first_failure = first_failure or exit_code_for(exc)
        else:
            err = duality_distance(res.primary_config, config)
            entry["recovery_error"] = sig15(err)
            entry["fit_residual"] = sig15(res.fit_residual)
            if args.noise > 0:
                entry["amplification"] = sig15(err / args.noise)
        trials.append(entry)
    errors = [t["recovery_error"] for t in trials if "recovery_error" in t]
    payload = {
        "trials": trials,
        "max_recovery_error": sig15(max(errors)) if errors else None,
        "max_amplification": (sig15(max(errors) / args.noise) if errors and args.noise > 0 else None),
        "failures": sum("error" in t for t in trials),
        "manifest": _manifest("roundtrip", {"config": args.config},
                              {"noise": args.noise, "seed": args.seed, "trials": args.trials,
                               **_opts_dict(opts)}),
    }
    _emit(payload, args.out)
    return first_failure


def _opts_dict(opts: InverseOptions) -> dict:
    d = asdict(opts)
    d.pop("threads", None)
    return d


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="configuration JSON {\"a\": [a1..a8]}")
    common.add_argument("--spectrum", help="spectrum file (JSON {\"s\": [...]} or one value per line)")
    common.add_argument("--out", help="output JSON path (default: stdout)")
    common.add_argument("--count", type=int, default=9, help="number of eigenvalues (forward)")
    common.add_argument("--grid", type=int, default=32, help="grid points per angle axis")
    common.add_argument("--fit-tol", type=float, default=None,
                        help="max relative eigenvalue misfit (default 1e-6, or 1e-3 with --noise)")
    common.add_argument("--rank-eps", type=float, default=1e-8, help="relative singular-value cutoff")
    common.add_argument("--noise", type=float, default=0.0, help="relative eigenvalue noise (roundtrip)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=1)
    common.add_argument("--beta-max", type=float, default=400.0, help="scan ceiling in sqrt(s)")
    common.add_argument("--legacy-case-analysis", action="store_true",
                        help="reconstruct only via the zero-pattern case analysis")

    parser = argparse.ArgumentParser(prog="rod-hearing",
                                     description="Rod fastening from flexural eigenvalues.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, help_ in [
        ("forward", cmd_forward, "eigenvalues of a configuration"),
        ("identify", cmd_identify, "configuration pair from nine eigenvalues"),
        ("classify", cmd_classify, "fastening names of a configuration"),
        ("xvector", cmd_xvector, "x-vector of a configuration or a spectrum"),
        ("roundtrip", cmd_roundtrip, "forward, perturb, identify"),
    ]:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RodHearingError as exc:
        print(f"rod-hearing {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except ValueError as exc:
        print(f"rod-hearing {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
