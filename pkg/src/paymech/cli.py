"""Command line front end.

Exit codes: 0 success (including a passing verify and a bound report),
1 negative result (infeasible synthesis, failed verify, target not
implementable), 2 bad input or usage (validation, JSON, file, unbounded
program), 3 numerical failure.  A GAME or SCHEME argument of "-" reads
the document from stdin.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import jsonio
from .bounds import deposit_lower_bound
from .case_studies import (
    COMMERCE_ALPHABET,
    CommerceParams,
    PvcParams,
    build_commerce,
    build_pvc,
    pvc_alphabet,
)
from .errors import (
    Error,
    Infeasible,
    NoConstraints,
    NotLeftInvertible,
    NumericalBreakdown,
    TargetNotImplementable,
    Unbounded,
    ValidationError,
)
from .escrow import monte_carlo
from .game_core import backward_induction, expected_utilities, utility_matrix
from .info_structure import scheme_for_target
from .reductions import AlaSpec, ala_scheme, lp_to_game
from .security import SecurityParams, verify
from .synthesis import (
    HONEST_EXPECTED,
    HONEST_PER_LEAF,
    OBJ_MINMAX,
    OBJ_WEIGHTED,
    SynthesisOptions,
    synthesize,
)


def _read_doc(path: str, stdin):
    if path == "-":
        text = stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


def _write_doc(doc, out_path, stdout) -> None:
    text = jsonio.dumps_canonical(doc) + "\n"
    if out_path and out_path != "-":
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def _security_params(args) -> SecurityParams:
    return SecurityParams(delta=args.delta, t=args.t)


def _cmd_synth(args, stdout, stderr, stdin) -> int:
    game = jsonio.parse_game_doc(_read_doc(args.game, stdin))
    opts = SynthesisOptions(
        objective=OBJ_WEIGHTED if args.objective == "cost" else OBJ_MINMAX,
        zero_inflation=args.zero_inflation,
        honest_invariance=args.honest_invariant,
        honest_form=args.honest_form,
    )
    # infinite cost entries pin scheme entries to zero, so the matrix
    # matters under either objective when the document carries one
    cost = game.costs
    if args.objective == "cost" and cost is None:
        raise ValidationError("--objective cost needs a 'costs' entry in the game document")
    try:
        scheme = synthesize(game.tree, game.info, game.profile,
                            _security_params(args), cost=cost, opts=opts)
    except Infeasible as exc:
        _write_doc({"status": "infeasible", "reason": str(exc)}, args.output, stdout)
        stderr.write(f"infeasible: {exc}\n")
        return 1
    _write_doc(jsonio.scheme_to_doc(game.info.alphabet, scheme), args.output, stdout)
    return 0


def _cmd_verify(args, stdout, stderr, stdin) -> int:
    game = jsonio.parse_game_doc(_read_doc(args.game, stdin))
    alphabet, scheme = jsonio.parse_scheme_doc(_read_doc(args.scheme, stdin))
    if alphabet != game.info.alphabet:
        raise ValidationError("scheme and game alphabets differ")
    report = verify(game.tree, game.info, scheme, game.profile, _security_params(args))
    doc = {
        "passed": report.passed,
        "delta": args.delta,
        "t": args.t,
        "num_constraints": int(report.slacks.size),
        "num_violations": len(report.violations),
        "min_slack": report.min_slack,
        "violations": [
            {
                "subgame": row.subgame,
                "coalition": list(row.coalition),
                "deviator": row.deviator,
                "leaf": row.leaf,
                "slack": slack,
            }
            for row, slack in report.violations
        ],
    }
    _write_doc(doc, args.output, stdout)
    return 0 if report.passed else 1


def _cmd_implement(args, stdout, stderr, stdin) -> int:
    game = jsonio.parse_game_doc(_read_doc(args.game, stdin))
    target_doc = _read_doc(args.target, stdin)
    if not isinstance(target_doc, dict) or "target_e" not in target_doc:
        raise ValidationError("target document must contain 'target_e'")
    target = np.asarray(target_doc["target_e"], dtype=np.float64)
    u = utility_matrix(game.tree)
    try:
        scheme = scheme_for_target(u, target, game.info)
    except TargetNotImplementable as exc:
        _write_doc(
            {"status": "not_implementable", "worst_residual": exc.worst_residual},
            args.output, stdout,
        )
        stderr.write(f"not implementable: {exc}\n")
        return 1
    _write_doc(jsonio.scheme_to_doc(game.info.alphabet, scheme), args.output, stdout)
    return 0


def _cmd_bound(args, stdout, stderr, stdin) -> int:
    game = jsonio.parse_game_doc(_read_doc(args.game, stdin))
    try:
        report = deposit_lower_bound(game.tree, game.info, game.profile, _security_params(args))
    except NoConstraints as exc:
        doc = {
            "optimistic_bound": None,
            "conservative_bound": None,
            "delta_g": exc.min_max_deposit,
            "delta": args.delta,
            "t": args.t,
            "alpha": 0,
            "note": "no deviation constraints at these parameters",
        }
        _write_doc(doc, args.output, stdout)
        return 0
    doc = {
        "optimistic_bound": report.optimistic_bound,
        "conservative_bound": report.conservative_bound,
        "delta_g": report.delta_g,
        "delta": report.delta,
        "t": report.t,
        "n": report.n,
        "num_symbols": report.num_symbols,
        "alpha": report.alpha,
        "au_norm": report.au_norm,
    }
    _write_doc(doc, args.output, stdout)
    return 0


def _cmd_spe(args, stdout, stderr, stdin) -> int:
    game = jsonio.parse_game_doc(_read_doc(args.game, stdin))
    profile = backward_induction(game.tree)
    values = expected_utilities(game.tree, profile)
    doc = {
        "profile": profile,
        "utilities": values.tolist(),
        "players": list(game.tree.players),
        "matches_intended": profile == game.profile,
    }
    _write_doc(doc, args.output, stdout)
    return 0


def _cmd_simulate(args, stdout, stderr, stdin) -> int:
    game = jsonio.parse_game_doc(_read_doc(args.game, stdin))
    alphabet, scheme = jsonio.parse_scheme_doc(_read_doc(args.scheme, stdin))
    if alphabet != game.info.alphabet:
        raise ValidationError("scheme and game alphabets differ")
    profile = game.profile
    if args.profile is not None:
        raw = _read_doc(args.profile, stdin)
        if not isinstance(raw, dict):
            raise ValidationError("profile document must be an object mapping branch to move")
        profile = {str(k): str(v) for k, v in raw.items()}
    result = monte_carlo(game.tree, game.info, scheme, profile, args.trials, args.seed)
    doc = {
        "trials": result.trials,
        "seed": result.seed,
        "players": list(game.tree.players),
        "alphabet": list(game.info.alphabet),
        "mean_utilities": result.mean_utilities.tolist(),
        "std_errors": result.std_errors.tolist(),
        "symbol_frequencies": result.symbol_frequencies.tolist(),
        "mean_net_losses": result.mean_net_losses.tolist(),
    }
    _write_doc(doc, args.output, stdout)
    return 0


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ValidationError(f"{flag} expects comma-separated numbers, got {text!r}")


def _parse_json_array(text: str, flag: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{flag} expects a JSON array: {exc}")


def _cmd_gen(args, stdout, stderr, stdin) -> int:
    if args.kind == "commerce":
        y = args.y if args.y is not None else 1.5 * args.x
        inst = build_commerce(CommerceParams(x=args.x, x_prime=args.x_prime, y=y, eps=args.eps))
        doc = jsonio.game_to_doc(inst.tree, COMMERCE_ALPHABET, inst.profile)
    elif args.kind == "pvc":
        u_plus = _parse_float_list(args.u_plus, "--u-plus")
        params = PvcParams(n=args.n, eps=args.eps,
                           u_plus=u_plus[0] if len(u_plus) == 1 else tuple(u_plus),
                           u_minus=args.u_minus, delta=args.delta)
        inst = build_pvc(params, collapse=not args.uncollapsed)
        doc = jsonio.game_to_doc(inst.tree, pvc_alphabet(params.n), inst.profile)
        stderr.write(
            f"self-contained: {inst.self_contained} "
            f"(needs delta >= {inst.self_containment_threshold:.6g}, "
            f"conservative threshold {inst.conservative_threshold:.6g})\n"
        )
    elif args.kind == "from-lp":
        a = _parse_json_array(args.a, "--a")
        b = _parse_json_array(args.b, "--b")
        c = _parse_json_array(args.c, "--c")
        inst = lp_to_game(a, b, c)
        doc = jsonio.game_to_doc(inst.tree, inst.info.alphabet, inst.profile, costs=inst.costs)
    else:  # ala
        damages = _parse_float_list(args.damages, "--damages")
        alphabet, scheme = ala_scheme(AlaSpec(tuple(damages)))
        doc = jsonio.scheme_to_doc(alphabet, scheme)
    _write_doc(doc, args.output, stdout)
    return 0


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("-o", "--output", default=None, help="write the JSON result here instead of stdout")


def _add_security(p: argparse.ArgumentParser) -> None:
    p.add_argument("--delta", type=float, required=True, help="required utility margin")
    p.add_argument("--t", type=int, default=1, help="maximum coalition size (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paymech",
        description="Synthesize, verify, and simulate escrow payment schemes for game documents.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="solve for a payment scheme securing the intended profile")
    p.add_argument("game", help="game document path, or - for stdin")
    _add_security(p)
    p.add_argument("--objective", choices=["minmax", "cost"], default="minmax",
                   help="minimize the largest deposit, or the cost-weighted total")
    p.add_argument("--zero-inflation", action="store_true",
                   help="force every symbol's payments to sum to zero")
    p.add_argument("--honest-invariant", action="store_true",
                   help="forbid expected payments on the intended path")
    p.add_argument("--honest-form", choices=[HONEST_PER_LEAF, HONEST_EXPECTED],
                   default=HONEST_PER_LEAF,
                   help="honest invariance per support leaf, or in expectation")
    _add_output(p)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("verify", help="check a scheme against the deviation constraints")
    p.add_argument("game")
    p.add_argument("scheme", help="scheme document path, or - for stdin")
    _add_security(p)
    _add_output(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("implement", help="solve for a scheme hitting target utilities exactly")
    p.add_argument("game")
    p.add_argument("--target", required=True,
                   help="JSON file with a 'target_e' matrix (players x leaves)")
    _add_output(p)
    p.set_defaults(func=_cmd_implement)

    p = sub.add_parser("bound", help="report deposit lower bounds for the game")
    p.add_argument("game")
    _add_security(p)
    _add_output(p)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("spe", help="backward-induction profile of the raw game")
    p.add_argument("game")
    _add_output(p)
    p.set_defaults(func=_cmd_spe)

    p = sub.add_parser("simulate", help="Monte Carlo episodes of the escrow loop")
    p.add_argument("game")
    p.add_argument("scheme")
    p.add_argument("--profile", default=None, help="override the intended profile with this JSON map")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("gen", help="generate built-in games and schemes")
    gen_sub = p.add_subparsers(dest="kind", required=True)

    g = gen_sub.add_parser("commerce", help="two-party trade game with noisy receipts")
    g.add_argument("--x", type=float, required=True, help="price paid by the buyer")
    g.add_argument("--xprime", type=float, required=True, dest="x_prime",
                   help="seller's cost of the item")
    g.add_argument("--y", type=float, default=None, help="buyer's value of the item (default 1.5x)")
    g.add_argument("--eps", type=float, required=True, help="receipt noise level, in (0, 1/2)")
    _add_output(g)
    g.set_defaults(func=_cmd_gen)

    g = gen_sub.add_parser("pvc", help="n-party sequential computation with cheating lotteries")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--eps", type=float, required=True, help="probability a cheat is caught")
    g.add_argument("--u-plus", required=True,
                   help="cheat payoff(s) > 1, single number or comma-separated per player")
    g.add_argument("--u-minus", type=float, required=True, help="victim payoff, < 0")
    g.add_argument("--delta", type=float, required=True, help="required margin, >= 0")
    g.add_argument("--uncollapsed", action="store_true",
                   help="keep the explicit catch lottery as a chance node")
    _add_output(g)
    g.set_defaults(func=_cmd_gen)

    g = gen_sub.add_parser("from-lp", help="three-player game encoding a linear program")
    g.add_argument("--a", required=True, help="JSON rows of the constraint matrix (nonnegative)")
    g.add_argument("--b", required=True, help="JSON right-hand side")
    g.add_argument("--c", required=True, help="JSON objective vector")
    _add_output(g)
    g.set_defaults(func=_cmd_gen)

    g = gen_sub.add_parser("ala", help="blame-symbol scheme charging listed damages")
    g.add_argument("--damages", required=True, help="comma-separated damage per player")
    _add_output(g)
    g.set_defaults(func=_cmd_gen)

    return parser


def dispatch(argv=None, stdout=None, stderr=None, stdin=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    stdin = stdin if stdin is not None else sys.stdin
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args, stdout, stderr, stdin)
    except (Infeasible, TargetNotImplementable, NotLeftInvertible) as exc:
        stderr.write(f"no solution: {exc}\n")
        return 1
    except NumericalBreakdown as exc:
        stderr.write(f"numerical failure: {exc}\n")
        return 3
    except Unbounded as exc:
        stderr.write(f"unbounded program: {exc}\n")
        return 2
    except (Error, json.JSONDecodeError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    raise SystemExit(dispatch())


if __name__ == "__main__":
    main()
