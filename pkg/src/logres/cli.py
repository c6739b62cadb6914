"""Command-line front end: resolution runs, jet-chart verification, rank
reports, global form construction, degree bounds, and indeterminacy sampling.

Exit codes: 0 success / all checks verified, 1 verification failure (the
report names the offending certificate), 2 usage error.  All JSON output is
key-sorted and seeded, so identical invocations are byte-identical.  The
environment variable LOGRES_THREADS caps the per-chart worker count.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__, bounds, logconn, logjet, residues
from .ratmat import to_text
from .symcore import LogresError, Polynomial, parse_polynomial

DEFAULT_SEED = 1789
SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError as err:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from err


def build_parser() -> _Parser:
    parser = _Parser(
        prog="logres",
        description="exact blow-up resolution and log differential form toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("resolve", help="resolve a fiber-chart obstruction system")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--k", type=int, default=None, help="components through the point (default c)")
    p.add_argument("--t", type=int, default=1, help="fiber chart index (default 1)")
    p.add_argument("--mode", choices=("canonical", "minimal"), default="canonical")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default=None)

    p = sub.add_parser("verify-jet", help="verify obstruction-ideal identities")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", default=None)

    p = sub.add_parser("rank", help="exact rank reports for the evaluation map")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--eps", type=int, default=1)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--stratum", default="", help="comma-separated vanishing slots")
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--matrix", action="store_true", help="include the matrix text")
    p.add_argument("--out", default=None)

    p = sub.add_parser("forms", help="global log 1-forms for an arrangement")
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--components",
        required=True,
        help="semicolon-separated homogeneous polynomials in x0..xn",
    )
    p.add_argument("--out", default=None)

    p = sub.add_parser("bounds", help="effective degree bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", required=True, help="comma-separated degrees")
    p.add_argument("--eps", required=True, help="comma-separated twist degrees")
    p.add_argument("--c", type=int, default=None)
    p.add_argument("--alpha", default=None, help="rational scale p/q to split")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", default=None)

    p = sub.add_parser("sample", help="indeterminacy sampling")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--eps", type=int, default=1)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default=None)

    return parser


def _emit(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# -- verbs ----------------------------------------------------------------------


def _cmd_resolve(args) -> tuple[int, str]:
    k = args.c if args.k is None else args.k
    if args.c > args.n:
        raise UsageError(f"c = {args.c} exceeds n = {args.n}")
    if not (0 <= k <= args.c) or not (1 <= args.t <= args.n):
        raise UsageError(f"need 0 <= k <= c and 1 <= t <= n, got k={k}, t={args.t}")
    jet, system = logjet.build_obstruction_system(args.n, args.c, k, args.t)
    result = logjet.resolve_obstruction_system(jet, system, args.mode)

    targets = []
    for i in range(1, args.c + 1):
        complement = sorted(set(range(1, args.c + 1)) - {i})
        if complement:
            targets.append((f"complement_of_{i}", complement))
    if args.mode == "canonical":
        targets.append(("all_components", list(range(1, args.c + 1))))

    certificates = []
    failed = None
    for name, I in targets:
        ideal = logjet.obstruction_ideal(jet, I)
        entry = {
            "ideal": name,
            "I": I,
            "base_generators": ideal.gens_as_strings(),
        }
        try:
            cert = logjet.verify_principalization(result, jet, I)
        except logjet.NotResolved as err:
            entry.update({"principal": False, "error": str(err)})
            failed = failed or name
        else:
            entry.update({"principal": True, "divisor": cert.to_dict()["divisor"]})
        certificates.append(entry)

    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "resolve",
        "params": {
            "n": args.n,
            "c": args.c,
            "k": k,
            "t": args.t,
            "mode": args.mode,
            "seed": args.seed,
        },
        "result": result.to_dict(),
        "certificates": certificates,
    }
    if args.format == "text":
        lines = [f"resolution mode={args.mode} n={args.n} c={args.c} k={k} t={args.t}"]
        lines.append(f"stages: {len(result.per_stage_systems)}")
        lines.append(f"leaf charts: {len(result.leaves())}")
        for entry in certificates:
            status = "principal" if entry.get("principal") else "FAILED"
            lines.append(f"  {entry['ideal']} (I={entry['I']}): {status}")
        text = "\n".join(lines) + "\n"
    else:
        text = _emit(payload)
    return (1 if failed else 0), text


def _cmd_verify_jet(args) -> tuple[int, str]:
    from .monideal import ideal_sum

    n = args.n
    if n < 2:
        raise UsageError("verify-jet needs n >= 2")
    c = n
    lift_failures = []
    relation_failures = []
    principality_failures = []
    certificates = []
    checked = 0
    subsets = sorted(
        {
            tuple(i + 1 for i in range(c) if mask & (1 << i))
            for mask in range(1, 1 << c)
        },
        key=lambda s: (len(s), s),
    )
    for k in range(0, c + 1):
        for t in range(1, n + 1):
            jet, system = logjet.build_obstruction_system(n, c, k, t)
            result = logjet.resolve_obstruction_system(jet, system, "canonical")
            for I in subsets:
                cert = logjet.obstruction_certificate(jet, I)
                checked += 1
                if not cert["equal"]:
                    lift_failures.append(cert)
                try:
                    principality = logjet.verify_principalization(result, jet, I)
                except logjet.NotResolved as err:
                    cert["principal"] = False
                    principality_failures.append(
                        {"k": k, "t": t, "I": list(I), "error": str(err)}
                    )
                else:
                    cert["principal"] = True
                    cert["divisor"] = principality.to_dict()["divisor"]
                certificates.append(cert)
            for I in subsets:
                for J in subsets:
                    pi = logjet.stratum_prime(jet, I)
                    pj = logjet.stratum_prime(jet, J)
                    common = set(I) & set(J)
                    if common:
                        target = logjet.stratum_prime(jet, common)
                        ok = ideal_sum([pi, pj]).contains_ideal(target)
                    else:
                        ok = pi.is_unit or pj.is_unit
                    if not ok:
                        relation_failures.append(
                            {"k": k, "t": t, "I": list(I), "J": list(J)}
                        )
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify-jet",
        "params": {"n": n, "c": c},
        "ideals_checked": checked,
        "certificates": certificates,
        "lift_ideal_failures": lift_failures,
        "intersection_failures": relation_failures,
        "principality_failures": principality_failures,
        "verified": not lift_failures
        and not relation_failures
        and not principality_failures,
    }
    code = 0 if payload["verified"] else 1
    if args.format == "text":
        text = (
            f"verify-jet n={n}: {checked} ideals checked, "
            f"{len(lift_failures)} lift failures, "
            f"{len(relation_failures)} relation failures\n"
        )
    else:
        text = _emit(payload)
    return code, text


def _cmd_rank(args) -> tuple[int, str]:
    import random

    stratum = frozenset(_int_list(args.stratum))
    ctx = logconn.make_connection_context(args.n, args.eps, args.delta, args.r)
    if not stratum <= set(ctx.stratum_candidates()):
        raise UsageError(
            f"stratum {sorted(stratum)} not attainable; "
            f"vanishing slots are {ctx.stratum_candidates()}"
        )
    rng = random.Random(args.seed)
    reports = []
    all_ok = True
    for _ in range(args.samples):
        basepoint = logconn.random_stratum_point(ctx, rng, stratum)
        while True:
            xi0 = logconn.random_fraction(rng)
            xi = tuple(logconn.random_fraction(rng) for _ in range(args.n))
            if xi0 or any(xi):
                break
        vector = logconn.LogTangentVector(xi0, xi, basepoint)
        report = logconn.connection_rank(ctx, vector, stratum)
        entry = {
            "basepoint": [str(x) for x in basepoint],
            "xi0": str(xi0),
            "xi": [str(x) for x in xi],
            **report.to_dict(),
        }
        if args.matrix:
            _, matrix = logconn.connection_matrix(ctx, vector, stratum)
            entry["matrix"] = to_text(matrix)
        reports.append(entry)
        all_ok = all_ok and report.satisfied
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "rank",
        "params": {
            "n": args.n,
            "delta": args.delta,
            "eps": args.eps,
            "r": args.r,
            "stratum": sorted(stratum),
            "samples": args.samples,
            "seed": args.seed,
        },
        "reports": reports,
        "verified": all_ok,
    }
    return (0 if all_ok else 1), _emit(payload)


def _cmd_forms(args) -> tuple[int, str]:
    variables = residues.projective_variables(args.n)
    texts = [part.strip() for part in args.components.split(";") if part.strip()]
    if not texts:
        raise UsageError("no components given")
    try:
        polys = [parse_polynomial(text, variables) for text in texts]
        arrangement = residues.DivisorArrangement.make(args.n, polys)
        forms = residues.construct_global_log_forms(arrangement)
    except (ValueError, LogresError) as err:
        return 1, _emit(
            {
                "schema_version": SCHEMA_VERSION,
                "command": "forms",
                "error": str(err),
            }
        )
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "forms",
        "params": {"n": args.n, "components": texts},
        "count": len(forms),
        "degrees": list(arrangement.degrees),
        "forms": [form.serialize() for form in forms],
        "residue_matrix": [
            [str(x) for x in row] for row in residues.residue_matrix(forms)
        ],
    }
    return 0, _emit(payload)


def _cmd_bounds(args) -> tuple[int, str]:
    delta = _int_list(args.delta)
    eps = _int_list(args.eps)
    try:
        report = bounds.effective_bounds(args.n, delta, eps)
    except (ValueError, LogresError) as err:
        raise UsageError(str(err)) from err
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "bounds",
        "effective": report.to_dict(),
    }
    if args.c is not None:
        payload["threshold"] = bounds.degree_threshold(args.n, args.c, delta).to_dict()
    if args.alpha is not None:
        try:
            alpha = Fraction(args.alpha)
        except (ValueError, ZeroDivisionError) as err:
            raise UsageError(f"bad rational {args.alpha!r}") from err
        payload["reconstruction"] = bounds.reconstruct_parameters(alpha, delta).to_dict()
    if args.format == "json":
        return 0, _emit(payload)
    lines = [
        f"n={report.n}  applicable={'yes' if report.applicable else 'no'}",
        f"{'i':>3} {'delta':>6} {'eps':>5} {'b':>8} {'m':>10}",
    ]
    for i, (d, e, b, m) in enumerate(
        zip(report.delta, report.eps, report.b, report.m), start=1
    ):
        lines.append(f"{i:>3} {d:>6} {e:>5} {b:>8} {m:>10}")
    lines.append(f"r_min = {report.r_min}")
    if "threshold" in payload:
        thr = payload["threshold"]
        lines.append(
            f"m_threshold = {thr['m_threshold']}  chain_holds = {thr['chain_holds']}"
            + (f"  alpha_min = {thr['alpha_min']}" if thr["alpha_min"] else "")
        )
    if "reconstruction" in payload:
        rec = payload["reconstruction"]
        lines.append(
            f"alpha = {rec['alpha']}: r = {rec['r']}, eps = {rec['eps']}, valid = {rec['valid']}"
        )
    return 0, "\n".join(lines) + "\n"


def _cmd_sample(args) -> tuple[int, str]:
    ctx = logconn.make_connection_context(args.n, args.eps, args.delta, args.r)
    try:
        report = logconn.sample_indeterminacy(ctx, args.trials, args.seed)
    except ValueError as err:
        raise UsageError(str(err)) from err
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "sample",
        "params": {
            "n": args.n,
            "delta": args.delta,
            "eps": args.eps,
            "r": args.r,
            "trials": args.trials,
            "seed": args.seed,
        },
        **report.to_dict(),
    }
    return (0 if report.failures == 0 else 1), _emit(payload)


_HANDLERS = {
    "resolve": _cmd_resolve,
    "verify-jet": _cmd_verify_jet,
    "rank": _cmd_rank,
    "forms": _cmd_forms,
    "bounds": _cmd_bounds,
    "sample": _cmd_sample,
}


def run_command(argv: list[str]) -> tuple[int, str]:
    """Parse and execute; returns (exit status, output text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        code, text = _HANDLERS[args.verb](args)
    except UsageError as err:
        return 2, f"usage error: {err}\n"
    except LogresError as err:
        return 1, f"verification failure: {err}\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        return code, ""
    return code, text


def main(argv: list[str] | None = None) -> int:
    code, text = run_command(sys.argv[1:] if argv is None else argv)
    if code == 2:
        sys.stderr.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
