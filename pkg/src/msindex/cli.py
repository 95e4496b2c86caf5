"""Command-line front end and JSON report serialization.

Exit codes: 0 all checks passed / computation succeeded; 1 at least one
violation or falsification alarm; 2 usage, parse, or configuration error.
Reports are byte-identical for identical argv + seed (wall_time_ms is the
one field excluded from that contract); floats serialize through Python's
shortest round-trip repr, so every value reloads exactly.
"""

import argparse
import dataclasses
import json
import sys
import time

import numpy as np

from . import __version__
from .bounds import (
    BOUND_IDS,
    BoundReport,
    check_maclaurin,
    check_proof_claims,
    check_prop1_chain,
    check_recurrences,
    check_thm1_upper,
    check_thm2_lower,
    check_thm3_partial,
)
from .conjecture import (
    ConjectureVerdict,
    SearchBudgetError,
    SearchLimits,
    check_conjecture,
    search,
)
from .hypergraph import (
    Hypergraph,
    HypergraphParseError,
    colex_segment,
    parse_hypergraph,
    serialize_hypergraph,
)
from .optimize import OptimizationResult, OptimizerOptions, ms_index
from .sampling import InfeasibleCapError, SweepConfig, SweepReport, run_bound_sweep
from .symfun import SimplexVector, stat_bundle

__all__ = ["dispatch", "main"]

_CLAIM_BOUNDS = ("claim_moment", "claim_sigma_rec", "claim_insig")


class ConfigError(ValueError):
    pass


def parse_vector_file(text: str, normalize: bool = False) -> SimplexVector:
    """Whitespace/newline-separated decimal literals; '#' lines ignored."""
    values = []
    for raw in text.splitlines():
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        for tok in stripped.split():
            try:
                values.append(float(tok))
            except ValueError:
                raise ConfigError(f"bad vector entry {tok!r}") from None
    if not values:
        raise ConfigError("vector file holds no entries")
    return SimplexVector(values, normalize=normalize)


def _jsonify(obj):
    if isinstance(obj, SimplexVector):
        return [float(v) for v in obj.entries]
    if isinstance(obj, Hypergraph):
        return {
            "r": obj.r,
            "n": obj.n,
            "m": obj.m,
            "edges": [[v + 1 for v in e] for e in obj.edges],
        }
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: _jsonify(getattr(obj, f.name)) for f in dataclasses.fields(obj)
        }
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _result_kind(res):
    if isinstance(res, BoundReport):
        return "bound_report"
    if isinstance(res, SweepReport):
        return "sweep_report"
    if isinstance(res, OptimizationResult):
        return "optimization_result"
    if isinstance(res, ConjectureVerdict):
        return "conjecture_verdict"
    return "report"


def _tag(results):
    return [{"kind": _result_kind(r), **_jsonify(r)} for r in results]


def _write_report(command, config, results, started, out_path):
    report = {
        "command": command,
        "version": __version__,
        "config": _jsonify(config),
        "results": _tag(results),
        "wall_time_ms": int((time.perf_counter() - started) * 1000),
    }
    text = json.dumps(report, indent=2) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _has_violation(results) -> bool:
    for res in results:
        if isinstance(res, BoundReport) and res.violated:
            return True
        if isinstance(res, SweepReport) and res.violations > 0:
            return True
        if isinstance(res, ConjectureVerdict) and res.alarm:
            return True
    return False


def _int_list(text: str):
    try:
        return [int(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def _optimizer_options(args) -> OptimizerOptions:
    return OptimizerOptions(
        restarts=args.restarts,
        max_iters=args.max_iters,
        tol=args.tol,
        kkt_tol=args.kkt_tol,
        seed=args.seed,
    )


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None


def _cmd_compute(args, started):
    if not args.input:
        raise ConfigError("compute requires --input GRAPH_FILE")
    g = parse_hypergraph(_read(args.input))
    opts = _optimizer_options(args)
    result = ms_index(g, opts)
    config = {
        "input": args.input,
        "graph": {"r": g.r, "n": g.n, "m": g.m},
        "options": opts,
        "threads": args.threads,
    }
    _write_report("compute", config, [result], started, args.out)
    return 0


def _cmd_symfun(args, started):
    if not args.input:
        raise ConfigError("symfun requires --input VECTOR_FILE")
    x = parse_vector_file(_read(args.input), normalize=args.normalize)
    K = args.k[0] if args.k else x.n
    if K < 0:
        raise ConfigError("--k must be >= 0")
    bundle = stat_bundle(x, K)
    result = {
        "n": x.n,
        "n_prime": bundle.n_prime,
        "sigma": bundle.sigma,
        "q": bundle.q,
        "p": bundle.p,
        "t4": bundle.t4,
        "x_max": bundle.x_max,
        "esp": bundle.esp,
        "entries": x,
    }
    config = {"input": args.input, "normalize": args.normalize, "k": K}
    _write_report("symfun", config, [result], started, args.out)
    return 0


def _check_single(bound_id, x, k, args):
    if bound_id == "maclaurin":
        return [check_maclaurin(x, k)]
    if bound_id == "thm1_upper":
        return [check_thm1_upper(x, k, "relaxed" if args.relaxed else "standard")]
    if bound_id == "thm1_remark":
        return [check_thm1_upper(x, k, "remark")]
    if bound_id == "thm2_lower":
        return [check_thm2_lower(x, k)]
    if bound_id == "thm3_partial":
        return [check_thm3_partial(x, k, experimental=args.experimental)]
    if bound_id == "prop2_rec":
        return [check_recurrences(x, k)[0]]
    if bound_id == "prop3_rec":
        return [check_recurrences(x, k)[1]]
    if bound_id == "prop1_chain":
        return [check_prop1_chain(x)]
    if bound_id in _CLAIM_BOUNDS:
        return [r for r in check_proof_claims(x, k) if r.bound_id == bound_id]
    raise ConfigError(f"unknown bound {bound_id!r}")


def _sweep_configs(bound_ids, args):
    ks = args.k or [3]
    ns = args.n or []
    if not ns:
        raise ConfigError("sweep mode requires --n")
    configs = []
    for bound_id in bound_ids:
        for k in ks:
            if bound_id == "claim_insig" and k != 5:
                continue  # the degree-5 moment claim only exists at k = 5
            for n in ns:
                configs.append(
                    SweepConfig(
                        bound_id=bound_id,
                        k=k,
                        n=n,
                        samples=args.samples,
                        seed=args.seed,
                        cap_policy=args.cap_policy,
                        experimental=args.experimental,
                    )
                )
    return configs


def _cmd_bounds(args, started, bound_ids=None):
    command = "proof-claims" if bound_ids else "bounds"
    if bound_ids is None:
        if not args.bound:
            raise ConfigError("bounds requires --bound")
        if args.bound not in BOUND_IDS:
            raise ConfigError(
                f"unknown bound {args.bound!r}; choose from {', '.join(BOUND_IDS)}"
            )
        bound_ids = [args.bound]

    if args.input:
        x = parse_vector_file(_read(args.input), normalize=args.normalize)
        results = []
        if command == "proof-claims":
            for k in args.k or [3]:
                results.extend(check_proof_claims(x, k))
        else:
            for k in args.k or [3]:
                results.extend(_check_single(bound_ids[0], x, k, args))
        config = {
            "input": args.input,
            "bounds": bound_ids,
            "k": args.k or [3],
            "normalize": args.normalize,
        }
        _write_report(command, config, results, started, args.out)
        return 1 if _has_violation(results) else 0

    configs = _sweep_configs(bound_ids, args)
    reports = run_bound_sweep(configs, threads=args.threads)
    config = {
        "bounds": bound_ids,
        "k": args.k or [3],
        "n": args.n,
        "samples": args.samples,
        "cap_policy": args.cap_policy,
        "seed": args.seed,
        "threads": args.threads,
        "experimental": args.experimental,
    }
    _write_report(command, config, reports, started, args.out)
    # experimental sweeps report violations as evidence, never as failures
    flagged = [r for r, c in zip(reports, configs) if not c.experimental]
    return 1 if _has_violation(flagged) else 0


def _cmd_proof_claims(args, started):
    return _cmd_bounds(args, started, bound_ids=list(_CLAIM_BOUNDS))


def _cmd_conjecture(args, started):
    opts = _optimizer_options(args)
    if args.input:
        g = parse_hypergraph(_read(args.input))
        verdicts = [check_conjecture(g, opts)]
        config = {"input": args.input, "options": opts, "threads": args.threads}
    else:
        if args.r is None or args.m is None:
            raise ConfigError("conjecture requires --input or both --r and --m")
        mode = args.mode or "colex"
        limits = SearchLimits(
            n_max=args.n_max if args.n_max is not None else max(args.r + 1, 6),
            count=args.count,
            budget=args.budget,
        )
        verdicts = search(args.r, args.m, mode, limits, opts, threads=args.threads)
        config = {
            "r": args.r,
            "m": args.m,
            "mode": mode,
            "limits": limits,
            "options": opts,
            "threads": args.threads,
        }
    _write_report("conjecture", config, verdicts, started, args.out)
    return 1 if _has_violation(verdicts) else 0


def _cmd_colex(args, started):
    if args.r is None or args.m is None:
        raise ConfigError("colex requires --r and --m")
    text = serialize_hypergraph(colex_segment(args.r, args.m))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="msindex",
        description="MS-index optimization and symmetric-function bound checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--input", help="input graph or vector file")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--normalize", action="store_true",
                       help="rescale vector file entries by their sum")
        p.add_argument("--restarts", type=int, default=64)
        p.add_argument("--max-iters", type=int, default=100_000)
        p.add_argument("--tol", type=float, default=1e-14)
        p.add_argument("--kkt-tol", type=float, default=1e-8)
        p.add_argument("--bound", help="bound identifier for checks/sweeps")
        p.add_argument("--k", type=_int_list, help="degree(s), comma-separated")
        p.add_argument("--n", type=_int_list, help="vector length(s), comma-separated")
        p.add_argument("--samples", type=int, default=10_000)
        p.add_argument("--cap-policy", choices=["none", "cap", "boundary"],
                       default="cap")
        p.add_argument("--r", type=int, help="uniformity")
        p.add_argument("--m", type=int, help="edge count")
        p.add_argument("--mode", choices=["colex", "random", "exhaustive"])
        p.add_argument("--n-max", type=int, help="vertex budget for searches")
        p.add_argument("--count", type=int, default=100,
                       help="graphs to draw in random mode")
        p.add_argument("--budget", type=int, default=1_000_000,
                       help="cap on exhaustive enumeration size")
        p.add_argument("--experimental", action="store_true",
                       help="allow the speculative k=6 partial-derivative bound")
        p.add_argument("--relaxed", action="store_true",
                       help="use the wider (unproven) thresholds for the upper bound")

    for name in ("compute", "symfun", "bounds", "proof-claims", "conjecture", "colex"):
        add_common(sub.add_parser(name))
    return parser


_HANDLERS = {
    "compute": _cmd_compute,
    "symfun": _cmd_symfun,
    "bounds": _cmd_bounds,
    "proof-claims": _cmd_proof_claims,
    "conjecture": _cmd_conjecture,
    "colex": _cmd_colex,
}


def dispatch(argv) -> int:
    """Run one subcommand; returns the process exit code."""
    started = time.perf_counter()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code else 0
    try:
        return _HANDLERS[args.command](args, started)
    except (
        ConfigError,
        HypergraphParseError,
        SearchBudgetError,
        InfeasibleCapError,
        ValueError,
    ) as exc:
        print(f"msindex {args.command}: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
