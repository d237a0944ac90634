"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 domain-invalid input, 4 parse failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import equilibrium as eq
from . import game, probset, quantum_source

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_PARSE = 0, 2, 3, 4


class ParseFailure(Exception):
    pass


def _unit_number(text: str) -> Fraction:
    try:
        v = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 <= v <= 1:
        raise argparse.ArgumentTypeError(f"{text} is outside [0, 1]")
    return v


def _profile(text: str) -> probset.StrategyProfile:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("profile needs four comma-separated values p,q,p',q'")
    return probset.StrategyProfile(*(float(_unit_number(p)) for p in parts))


def _angles(text: str) -> quantum_source.DirectionConfig:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("angles needs four comma-separated radians a,c,b,d")
    try:
        return quantum_source.DirectionConfig.from_angles(*(float(p) for p in parts))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseFailure(f"cannot read {path}: {exc}") from None


def _fmt(x) -> str:
    return game.fmt_number(x)


def _fmt_tuple(values) -> str:
    return "(" + ",".join(_fmt(v) for v in values) + ")"


def _fmt_payoffs(pq) -> str:
    return "({},{}),({},{})".format(*map(_fmt, pq))


def _emit(args, text: str, data: dict):
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        sys.stdout.write(text)


def _load_game(args) -> game.GameSpec:
    if args.game in game.PRESETS:
        spec = game.PRESETS[args.game]
    else:
        data = _load_json(args.game)
        try:
            spec = game.GameSpec.from_json(data)
        except (KeyError, TypeError, IndexError) as exc:
            raise ParseFailure(f"malformed game JSON: {exc}") from None
    return spec.with_omega(args.omega)


def _report_text(report: eq.EquilibriumReport) -> str:
    s = report.profile
    verdict = "equilibrium" if report.equilibrium else "not an equilibrium"
    lines = [
        f"{report.kind} profile {{({_fmt(s.p)},{_fmt(s.q)}),({_fmt(s.p_prime)},{_fmt(s.q_prime)})}}: {verdict}",
        f"  payoffs (A1,A2),(B1,B2) = {_fmt_payoffs(report.payoffs)}",
        f"  best-response gains A1,A2,B1,B2 = {_fmt_tuple(report.margins)}",
    ]
    if report.gradients is not None:
        lines.append(f"  slopes = {_fmt_tuple(report.gradients)}")
    return "\n".join(lines) + "\n"


def cmd_solve_classical(args) -> int:
    spec = _load_game(args)
    if args.profile is not None:
        report = eq.verify_classical(spec, args.profile)
        _emit(args, _report_text(report), report.to_json())
        return EXIT_OK

    pure = eq.find_pure_bne(spec)
    cases = eq.find_classical_bne(spec)
    lines = [f"omega = {_fmt(spec.omega)}", "pure Bayesian Nash equilibria:"]
    lines += [f"  {quad}  payoffs {_fmt_payoffs(pay)}" for quad, pay in pure]
    lines.append("mixed-strategy case analysis:")
    for r in cases.equilibria:
        lines.append("  " + _report_text(r).rstrip("\n").replace("\n", "\n  "))
    for label, r in cases.degenerate:
        lines.append(f"  continuum on support pattern {label}; one member:")
        lines.append("    " + _report_text(r).rstrip("\n").replace("\n", "\n    "))
    data = {
        "omega": float(spec.omega),
        "pure": [
            {"quadruple": str(quad), "profile": [float(v) for v in quad.as_profile().as_tuple()],
             "payoffs": [float(v) for v in pay]}
            for quad, pay in pure
        ],
        "mixed": [r.to_json() for r in cases.equilibria],
        "degenerate": [{"pattern": label, "witness": r.to_json()} for label, r in cases.degenerate],
    }
    _emit(args, "\n".join(lines) + "\n", data)
    return EXIT_OK


def cmd_solve_quantum(args) -> int:
    spec = game.BOS_FIG1.with_omega(args.omega)
    report = eq.quantum_bne(spec)
    s = report.profile
    classical = "yes" if report.classical_equilibrium else "no"
    text = (
        f"omega = {_fmt(spec.omega)}\n"
        f"marginals (p,q,p',q') = {_fmt_tuple(s.as_tuple())}\n"
        f"eps* = {_fmt_tuple(report.behavior.eps)}\n"
        f"payoffs (A1,A2),(B1,B2) = {_fmt_payoffs(report.payoffs)}\n"
        f"slopes = {_fmt_tuple(report.gradients)}\n"
        f"delta = {_fmt(report.delta)}  class = {report.chsh_class}\n"
        f"equilibrium of the factorizable game as well: {classical}\n"
    )
    _emit(args, text, report.to_json())
    return EXIT_OK


def _set_summary(b: probset.BehaviorSet) -> dict:
    cls = probset.classify(b)
    return {"eps": list(b.eps), "delta": cls.delta, "class": cls.label,
            "factorizable": probset.is_factorizable(b)}


def cmd_generate(args) -> int:
    if args.state in quantum_source.PRESET_STATES:
        state = quantum_source.PRESET_STATES[args.state]
    elif os.path.exists(args.state):
        data = _load_json(args.state)
        try:
            state = quantum_source.TwoQubitState.from_json(data)
        except quantum_source.NormalizationError:
            raise
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            raise ParseFailure(f"malformed state JSON: {exc}") from None
    else:
        print(f"error: {args.state!r} is neither a state file nor a preset "
              f"({', '.join(sorted(quantum_source.PRESET_STATES))})", file=sys.stderr)
        return EXIT_USAGE
    b = probset.require_valid(quantum_source.generate(state, args.angles))
    data = _set_summary(b)
    text = (
        json.dumps(b.to_json()) + "\n"
        f"delta = {_fmt(data['delta'])}  class = {data['class']}  factorizable = {data['factorizable']}\n"
    )
    _emit(args, text, data)
    return EXIT_OK


def cmd_check(args) -> int:
    data = _load_json(args.set)
    try:
        if isinstance(data, dict) and "mu" in data:
            b = probset.reconstruct(probset.IndependentOctet.from_json(data))
        else:
            b = probset.BehaviorSet.from_json(data)
    except (KeyError, TypeError, probset.MalformedError) as exc:
        raise ParseFailure(f"malformed probability-set JSON: {exc}") from None
    report = probset.validate(b)
    out = {"valid": report.ok, "max_residual": report.max_residual,
           "violations": report.violations, "residuals": report.residuals}
    lines = [f"valid = {report.ok}  max residual = {report.max_residual:.3e}"]
    lines += [f"  violated {v}: residual {report.residuals[v]:.3e}" for v in report.violations]
    code = EXIT_OK
    if report.ok:
        summary = _set_summary(b)
        out.update(summary)
        lines.append(f"delta = {_fmt(summary['delta'])}  class = {summary['class']}")
        lines.append(f"factorizable = {summary['factorizable']}")
        if args.factorizable and not summary["factorizable"]:
            code = EXIT_DOMAIN
    else:
        code = EXIT_DOMAIN
    _emit(args, "\n".join(lines) + "\n", out)
    return code


def cmd_table(args) -> int:
    spec = game.BOS_FIG1.with_omega(args.omega)
    table = game.build_table(args.which, spec)
    data = game.table_to_json(table)
    data["omega"] = float(args.omega)
    text = game.render_table(table)
    if args.which == "one-sided":
        eqs = game.one_sided_table(spec).equilibria
        data["equilibria"] = [[a, list(bob)] for a, bob in eqs]
        text += "".join(f"Nash equilibrium: ({a},({b1},{b2}))\n" for a, (b1, b2) in eqs)
    _emit(args, text, data)
    return EXIT_OK


def cmd_oracle(args) -> int:
    spec = _load_game(args)
    rows = []
    for k, label in enumerate(eq.TYPE_LABELS):
        br = eq.brute_force_best_response(spec, args.profile, k, args.grid)
        rows.append({"type": label, "deviation": br.deviation, "payoff": br.payoff, "gain": br.gain})
    certified = all(r["gain"] <= probset.TAU for r in rows)
    text = "".join(
        f"{r['type']}: best deviation {_fmt(r['deviation'])} payoff {_fmt(r['payoff'])} gain {_fmt(r['gain'])}\n"
        for r in rows
    ) + f"certified = {certified}\n"
    _emit(args, text, {"grid": args.grid, "types": rows, "certified": certified})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eprgame",
        description="Bayesian Battle of Sexes over factorizable and EPR probabilities.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    p = add("solve-classical", cmd_solve_classical, "classical Bayesian Nash equilibria")
    p.add_argument("--omega", type=_unit_number, required=True)
    p.add_argument("--profile", type=_profile, help="verify p,q,p',q' instead of searching")
    p.add_argument("--game", default="bos-fig1", help="preset name or GameSpec JSON file")

    p = add("solve-quantum", cmd_solve_quantum, "equilibrium over EPR probabilities")
    p.add_argument("--omega", type=_unit_number, required=True)

    p = add("generate", cmd_generate, "16 probabilities from a two-qubit state")
    p.add_argument("--state", required=True,
                   help="state JSON file or preset: " + ", ".join(sorted(quantum_source.PRESET_STATES)))
    p.add_argument("--angles", type=_angles, required=True, help="a,c,b,d in radians")

    p = add("check", cmd_check, "validate and classify a probability set")
    p.add_argument("--set", required=True, help='JSON file with {"eps": [16]} or {"mu": [8]}')
    p.add_argument("--factorizable", action="store_true",
                   help="exit 3 unless the set is factorizable")

    p = add("table", cmd_table, "render a payoff table")
    p.add_argument("--which", choices=sorted(game.TABLES), required=True)
    p.add_argument("--omega", type=_unit_number, default=Fraction(2, 3))

    p = add("oracle", cmd_oracle, "brute-force best responses at a profile")
    p.add_argument("--omega", type=_unit_number, required=True)
    p.add_argument("--profile", type=_profile, required=True)
    p.add_argument("--grid", type=int, default=2)
    p.add_argument("--game", default="bos-fig1", help="preset name or GameSpec JSON file")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "grid", 2) < 2:
        parser.error("--grid must be at least 2")
    try:
        return args.func(args)
    except ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except quantum_source.NormalizationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except probset.ProbsetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
