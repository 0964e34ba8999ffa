"""Command line interface: ``localcert <subcommand>``.

Exit codes: 0 success, 2 input error, 3 numerical non-convergence or a failed
check.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import io as lio
from .certification import (
    CertificationProblem,
    ProtocolSearchError,
    certify_global,
    certify_local,
    one_way_protocol,
    simulate_protocol,
    wilson_interval,
)
from .linalg import DimensionError, NotUnitaryError, haar_unitary, reflection_example, t_alpha_family
from .numrange import boundary, dist_origin, v_unitary
from .pnr import (
    DEFAULT_RESTARTS,
    shadow_sample,
    theorem_bound,
    trace_upper_bound,
    z_diagonal_quadruples,
    z_distance,
    z_product_case,
    zero_fraction_study,
)

SEED_ENV = "LOCALCERT_SEED"
EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


class InputError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {raw!r}")


def _parse_split(text: str | None, dim: int) -> tuple[int, int]:
    if text is None:
        d = math.isqrt(dim)
        if d * d != dim:
            raise InputError(f"--split is required for dimension {dim}")
        return d, d
    try:
        d1, d2 = (int(p) for p in text.split(":"))
    except ValueError:
        raise InputError(f"--split must look like d1:d2, got {text!r}")
    if d1 < 1 or d2 < 1 or d1 * d2 != dim:
        raise InputError(f"--split {d1}:{d2} does not factor dimension {dim}")
    return d1, d2


def _load(path) -> np.ndarray:
    try:
        return lio.load_matrix(path)
    except lio.FormatError as exc:
        raise InputError(str(exc))


def _emit(doc: dict, out: str | None, summary: list[str]) -> None:
    text = lio.dumps(doc)
    if out:
        lio.write_atomic(out, text)
        for line in summary:
            print(line)
    else:
        for line in summary:
            print(line, file=sys.stderr)
        sys.stdout.write(text)


def cmd_numrange(args) -> int:
    X = _load(args.matrix)
    if X.shape[0] != X.shape[1]:
        raise InputError(f"matrix must be square, got {X.shape[0]}x{X.shape[1]}")
    poly = boundary(X, args.angles)
    res = dist_origin(X)
    doc = {
        "command": "numrange",
        "polygon": lio.polygon_to_json(poly),
        "n_angles": poly.n_angles,
        "dist_origin": lio.numrange_result_to_json(res),
    }
    _emit(doc, args.out, [f"distance {res.distance:.7f}", f"vertices {len(poly.vertices)}"])
    return EXIT_OK if res.converged else EXIT_NUMERIC


def cmd_pnr_min(args) -> int:
    X = _load(args.matrix)
    if X.shape[0] != X.shape[1]:
        raise InputError(f"matrix must be square, got {X.shape[0]}x{X.shape[1]}")
    split = _parse_split(args.split, X.shape[0])
    seed = args.seed if args.seed is not None else _default_seed()
    res = z_distance(X, split, restarts=args.restarts, seed=seed)
    bound = trace_upper_bound(X, split)
    doc = {
        "command": "pnr-min",
        "seed": seed,
        "split": list(split),
        "restarts": args.restarts,
        "result": lio.pnr_result_to_json(res),
        "trace_upper_bound": bound,
    }
    _emit(doc, args.out, [f"distance {res.distance:.7f}  trace_upper_bound {bound:.7f}"])
    return EXIT_OK if res.converged else EXIT_NUMERIC


def _histogram(values: np.ndarray, bins: int) -> dict:
    if values.size == 0:
        return {"edges": [], "counts": []}
    counts, edges = np.histogram(values, bins=bins)
    return {"edges": edges.tolist(), "counts": counts.tolist()}


def cmd_shadow(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    rng = np.random.default_rng(seed)
    meta = {"command": "shadow", "seed": seed, "n": args.n}
    if args.family == "t-alpha":
        if args.d is None or args.alpha is None:
            raise InputError("--family t-alpha needs --d and --alpha")
        if not 0.0 <= args.alpha <= 1.0:
            raise InputError("--alpha must lie in [0, 1]")
        U, V = haar_unitary(args.d, rng), haar_unitary(args.d, rng)
        X = t_alpha_family(U, V, args.alpha)
        split = (args.d, args.d)
        meta.update(family="t-alpha", d=args.d, alpha=args.alpha)
    elif args.matrix is not None:
        X = _load(args.matrix)
        if X.shape[0] != X.shape[1]:
            raise InputError(f"matrix must be square, got {X.shape[0]}x{X.shape[1]}")
        split = _parse_split(args.split, X.shape[0])
        meta.update(matrix=str(args.matrix))
    else:
        raise InputError("give a matrix file or --family t-alpha")
    shadow = shadow_sample(X, split, args.n, seed=rng)
    meta.update(
        split=list(split),
        marginal_re=_histogram(shadow.samples.real, args.bins),
        marginal_im=_histogram(shadow.samples.imag, args.bins),
        numerical_range_polygon=lio.polygon_to_json(boundary(X, 256)),
        eigenvalues=lio.complex_pairs(np.linalg.eigvals(X)),
    )
    csv_text = lio.shadow_to_csv(shadow.samples)
    if args.out:
        lio.write_atomic(args.out, csv_text)
        lio.write_atomic(args.out + ".meta.json", lio.dumps(meta))
        print(f"{args.n} samples written to {args.out}")
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def cmd_certify(args) -> int:
    U, V = _load(args.U), _load(args.V)
    if U.shape != V.shape:
        raise InputError(f"U and V differ in size: {U.shape} vs {V.shape}")
    if U.shape[0] != U.shape[1]:
        raise InputError("U and V must be square")
    if not 0.0 <= args.delta <= 1.0:
        raise InputError("--delta must lie in [0, 1]")
    split = _parse_split(args.split, U.shape[0])
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        problem = CertificationProblem(U, V, args.delta, split)
    except (NotUnitaryError, DimensionError) as exc:
        raise InputError(str(exc))
    rng = np.random.default_rng(seed)
    seeds = rng.integers(2**63, size=3)
    if args.mode == "local":
        plan = certify_local(problem, restarts=args.restarts, seed=int(seeds[0]))
    else:
        plan = certify_global(problem)
    doc = {"command": "certify", "seed": seed, "plan": lio.plan_to_json(plan)}
    summary = [f"{args.mode}: distance {plan.distance:.7f}  p2 {plan.p2_predicted:.7f}  branch {plan.branch}"]
    status = EXIT_OK if plan.converged else EXIT_NUMERIC
    if args.simulate:
        try:
            protocol = one_way_protocol(plan.omega, plan.rejection_state, split, seed=int(seeds[1]))
        except ProtocolSearchError as exc:
            doc["protocol_error"] = {"message": str(exc), "residual": exc.residual}
            _emit(doc, args.out, summary + [f"protocol search failed: {exc}"])
            return EXIT_NUMERIC
        transcript = simulate_protocol(problem, plan, protocol, args.simulate, seed=int(seeds[2]))
        doc["protocol_residual"] = protocol.residual
        doc["transcript"] = lio.transcript_to_json(transcript, args.delta, plan.p2_predicted)
        summary.append(f"simulated p1_hat {transcript.p1_hat:.5f}  p2_hat {transcript.p2_hat:.5f}")
    _emit(doc, args.out, summary)
    return status


def cmd_haar_study(args) -> int:
    if args.trials < 1:
        raise InputError("--trials must be at least 1")
    seed = args.seed if args.seed is not None else _default_seed()
    fraction, distances = zero_fraction_study(args.d1, args.d2, args.trials, seed=seed, restarts=args.restarts)
    zeros = int(round(fraction * args.trials))
    bound = theorem_bound(args.d1, args.d2)
    doc = {
        "command": "haar-study",
        "seed": seed,
        "d1": args.d1,
        "d2": args.d2,
        "trials": args.trials,
        "restarts": args.restarts,
        "fraction_zero": fraction,
        "wilson95": list(wilson_interval(zeros, args.trials)),
        "distances": distances,
        "theorem_exp_term": math.exp(-math.log(2) / 2 * max(args.d1, args.d2) ** 2),
        "asymptotic_bound_context": bound,
    }
    summary = [f"P(z=0) ~ {fraction:.4f}  (asymptotic bound, context only: {bound:.4f})"]
    _emit(doc, args.out, summary)
    return EXIT_OK


def _check(label, computed, expected, tol=1e-6) -> bool:
    ok = abs(computed - expected) <= tol
    print(f"  {label:<34} expected {expected:.7f}  computed {computed:.7f}  {'PASS' if ok else 'FAIL'}")
    return ok


def _example_reflection(seed) -> bool:
    ok = True
    for d in range(2, 6):
        U = reflection_example(d)
        ok &= _check(f"d={d} z=(d-2)/d", z_distance(U, (d, d), seed=seed).distance, (d - 2) / d)
        ok &= _check(f"d={d} v=0", dist_origin(U).distance, 0.0)
    return ok


def _example_product(seed) -> bool:
    P = np.diag([1, 1j])
    X = np.kron(P, P)
    ok = _check("v(U1 (x) U2)", dist_origin(X).distance, 0.0)
    ok &= _check("z via v(U1) v(U2)", z_product_case(P, P), 0.5)
    ok &= _check("z via seesaw", z_distance(X, (2, 2), seed=seed).distance, 0.5)
    return ok


def _example_diagonal(seed) -> bool:
    D = np.diag([1, 1j, 1j, -1])
    ok = _check("v(D)", dist_origin(D).distance, 0.0)
    ok &= _check("z via quadruples", z_diagonal_quadruples(D, (2, 2)), 0.5)
    ok &= _check("z via seesaw", z_distance(D, (2, 2), seed=seed).distance, 0.5)
    return ok


def _example_trace(seed) -> bool:
    rng = np.random.default_rng(seed)
    ok = True
    for k in range(20):
        U = haar_unitary(4, rng)
        z = z_distance(U, (2, 2), seed=rng).distance
        bound = trace_upper_bound(U, (2, 2))
        good = z <= bound + 1e-8
        ok &= good
        print(f"  draw {k:2d}  z {z:.7f}  |tr U|/4 {bound:.7f}  {'PASS' if good else 'FAIL'}")
    return ok


EXAMPLES = {
    "reflection": _example_reflection,
    "product-ii": _example_product,
    "diagonal-quadruple": _example_diagonal,
    "trace-bound": _example_trace,
}


def cmd_examples(args) -> int:
    if args.name not in EXAMPLES:
        raise InputError(f"unknown example {args.name!r}; available: {', '.join(EXAMPLES)}")
    seed = args.seed if args.seed is not None else _default_seed()
    print(f"example {args.name} (seed {seed})")
    return EXIT_OK if EXAMPLES[args.name](seed) else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="localcert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("numrange", help="numerical range polygon and distance from 0")
    p.add_argument("matrix")
    p.add_argument("--angles", type=int, default=256)
    p.add_argument("--out")
    p.set_defaults(func=cmd_numrange)

    p = sub.add_parser("pnr-min", help="distance from 0 to the product numerical range")
    p.add_argument("matrix")
    p.add_argument("--split")
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_pnr_min)

    p = sub.add_parser("shadow", help="Monte Carlo samples of the product numerical range")
    p.add_argument("matrix", nargs="?")
    p.add_argument("--split")
    p.add_argument("--family", choices=["t-alpha"])
    p.add_argument("--d", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_shadow)

    p = sub.add_parser("certify", help="optimal certification plan for U against V")
    p.add_argument("U")
    p.add_argument("V")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--mode", choices=["local", "global"], default="local")
    p.add_argument("--split")
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--simulate", type=int, metavar="SHOTS")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("haar-study", help="fraction of Haar unitaries with z = 0")
    p.add_argument("--d1", type=int, required=True)
    p.add_argument("--d2", type=int, required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_haar_study)

    p = sub.add_parser("examples", help="reproduce a worked example")
    p.add_argument("name")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
