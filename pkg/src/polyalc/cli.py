"""Command line front end: one thin subcommand per library entry point.

Exit codes: 0 for success (sat, model found, defender wins), 1 for a
negative verdict (unsat, no model, challenger wins), 2 for input errors,
3 for an exceeded budget or cap. `-` stands for stdin in file positions.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Mapping, Optional

from .bridge import to_alc, to_gra
from .errors import BudgetError, InputError
from .gra import DEFAULT_BUDGET, EvalEnv, eval_term
from .game import duplicator_wins, winning_trace
from .model import Interp, interp_to_dict, load_interp, save_interp
from .reify import ReifySignature, translate, with_dom
from .semantics import check_concept, oracle_sat
from .syntax import (
    Concept,
    RoleExpr,
    concept_names,
    concept_roles,
    concept_to_alcqi,
    expand_shorthand,
    parse_concept,
    parse_gra_term,
    print_alcqi,
    print_concept,
    print_gra_term,
)
from .tableau import (
    DEFAULT_K_CAP,
    DEFAULT_STEP_BUDGET,
    alcqi_sat,
    alcqp_sat,
    branching_bound,
)
from .unravel import g_unravel


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit(data: object) -> None:
    print(json.dumps(data, indent=2, sort_keys=True))


def _load_model(path: str) -> Interp:
    return load_interp(_read(path))


def _parse_atoms(text: str) -> dict[str, int]:
    atoms: dict[str, int] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, eq, arity = part.partition("=")
        name, arity = name.strip(), arity.strip()
        if not eq or not name or not arity.isdigit() or int(arity) < 1:
            raise InputError("bad atom declaration %r, expected NAME=ARITY" % part)
        if name in atoms:
            raise InputError("atom %s declared twice" % name)
        atoms[name] = int(arity)
    if not atoms:
        raise InputError("empty atom declaration list")
    return atoms


# ---------------------------------------------------------------------------
# subcommands

def cmd_check(args: argparse.Namespace) -> int:
    interp = _load_model(args.model)
    concept = expand_shorthand(parse_concept(args.concept))
    elems = sorted(check_concept(concept, interp))
    if args.json:
        _emit(elems)
    else:
        for e in elems:
            print(e)
    return 0


def cmd_eval_gra(args: argparse.Namespace) -> int:
    interp = _load_model(args.model)
    env = EvalEnv.for_interp(interp, args.budget)
    term = parse_gra_term(args.term, env.atoms)
    rel = eval_term(term, env)
    tuples = sorted(rel.tuples)
    if args.json:
        _emit({"arity": rel.arity, "tuples": [list(t) for t in tuples]})
    else:
        for t in tuples:
            print("(%s)" % ", ".join(t))
    return 0


def cmd_reify(args: argparse.Namespace) -> int:
    concept = expand_shorthand(parse_concept(_read(args.concept)))
    sig = ReifySignature.from_concept(concept)
    target = translate(concept, sig)
    if args.with_dom:
        target = with_dom(target)
    text = print_alcqi(target)
    if args.json:
        _emit({"concept": text})
    else:
        print(text)
    return 0


def _uses_generated_names(c: Concept) -> bool:
    if any(n.startswith("@") for n in concept_names(c)):
        return True
    return any(n.startswith("@") for n in concept_roles(c))


def cmd_sat(args: argparse.Namespace) -> int:
    concept = expand_shorthand(parse_concept(_read(args.concept)))
    if _uses_generated_names(concept):
        # output of `reify`: already binary, decide it directly
        res = alcqi_sat(concept_to_alcqi(concept), args.k_cap,
                        args.step_budget, args.shuffle_seed)
    else:
        res = alcqp_sat(concept, args.k_cap, args.step_budget,
                        args.shuffle_seed)
    if args.json:
        out: dict[str, object] = {"sat": res.sat}
        if res.sat:
            out["element"] = res.element
            out["witness"] = interp_to_dict(res.witness)
        _emit(out)
    elif res.sat:
        print("sat")
        print("element: %s" % res.element)
    else:
        print("unsat")
    if res.sat and args.witness is not None:
        _write(args.witness, save_interp(res.witness))
    return 0 if res.sat else 1


def cmd_oracle_sat(args: argparse.Namespace) -> int:
    concept = expand_shorthand(parse_concept(_read(args.concept)))
    bound = args.max_domain
    if bound is None:
        bound = branching_bound(concept)
    res = oracle_sat(concept, bound, args.node_budget)
    if args.json:
        out: dict[str, object] = {"sat": res.sat, "max_domain": bound}
        if res.sat:
            out["element"] = res.element
            out["domain_size"] = res.domain_size
            out["witness"] = interp_to_dict(res.witness)
        _emit(out)
    elif res.sat:
        print("sat")
        print("element: %s" % res.element)
    else:
        print("no model <= %d" % bound)
    if res.sat and args.witness is not None:
        _write(args.witness, save_interp(res.witness))
    return 0 if res.sat else 1


def cmd_unravel(args: argparse.Namespace) -> int:
    interp = _load_model(args.model)
    res = g_unravel(interp, args.root, args.depth, args.max_nodes)
    _emit({
        "model": interp_to_dict(res.tree),
        "canon": dict(sorted(res.canon.items())),
        "root": res.root,
    })
    return 0


def cmd_bridge(args: argparse.Namespace) -> int:
    if args.to_gra is not None:
        concept = parse_concept(args.to_gra)
        term = to_gra(concept)
        text = print_gra_term(term)
        kind = "term"
    else:
        atoms = _parse_atoms(args.atoms) if args.atoms else {}
        term = parse_gra_term(args.to_alc, atoms if atoms else None)
        back = to_alc(term, atoms)
        if isinstance(back, RoleExpr):
            text = back.name
            kind = "role"
        else:
            text = print_concept(back)
            kind = "concept"
    if args.json:
        _emit({"kind": kind, "text": text})
    else:
        print(text)
    return 0


def cmd_game(args: argparse.Namespace) -> int:
    left = _load_model(args.model_a)
    right = _load_model(args.model_b)
    won = duplicator_wins(left, args.point_a, right, args.point_b,
                          args.rounds, args.grading)
    winner = "defender" if won else "challenger"
    trace = None
    if args.trace:
        trace = winning_trace(left, args.point_a, right, args.point_b,
                              args.rounds, args.grading)
    if args.json:
        out: dict[str, object] = {
            "winner": winner,
            "rounds": args.rounds,
            "grading": args.grading,
        }
        if trace is not None:
            out["trace"] = trace
        _emit(out)
    else:
        print("winner: %s" % winner)
        if trace is not None:
            print(trace)
    return 0 if won else 1


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyalc",
        description="polyadic description logic toolkit",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("check", help="evaluate a concept over a model")
    p.add_argument("model", help="model JSON file, - for stdin")
    p.add_argument("concept", help="concept text")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("eval-gra", help="evaluate a relation-algebra term")
    p.add_argument("model", help="model JSON file, - for stdin")
    p.add_argument("term", help="term text")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="intermediate relation size cap")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval_gra)

    p = sub.add_parser("reify", help="translate a concept to binary roles")
    p.add_argument("concept", help="concept file, - for stdin")
    p.add_argument("--with-dom", action="store_true",
                   help="conjoin the @dom marker")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_reify)

    p = sub.add_parser("sat", help="decide satisfiability (tableau pipeline)")
    p.add_argument("concept", help="concept file, - for stdin")
    p.add_argument("--witness", metavar="OUT",
                   help="write the witness model JSON here, - for stdout")
    p.add_argument("--k-cap", type=int, default=DEFAULT_K_CAP)
    p.add_argument("--step-budget", type=int, default=DEFAULT_STEP_BUDGET)
    p.add_argument("--shuffle-seed", type=int, default=None,
                   help="randomize rule exploration order, verdict-invariant")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sat)

    p = sub.add_parser("oracle-sat",
                       help="decide satisfiability by bounded model search")
    p.add_argument("concept", help="concept file, - for stdin")
    p.add_argument("--max-domain", type=int, default=None,
                   help="domain size bound, default: tree branching bound")
    p.add_argument("--node-budget", type=int, default=2_000_000,
                   help="search effort cap")
    p.add_argument("--witness", metavar="OUT",
                   help="write the witness model JSON here, - for stdout")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oracle_sat)

    p = sub.add_parser("unravel", help="unravel a binary model into a tree")
    p.add_argument("model", help="model JSON file, - for stdin")
    p.add_argument("--root", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--max-nodes", type=int, default=None)
    p.add_argument("--json", action="store_true",
                   help="accepted for uniformity, output is always JSON")
    p.set_defaults(func=cmd_unravel)

    p = sub.add_parser("bridge",
                       help="translate between concepts and algebra terms")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--to-gra", metavar="CONCEPT", help="concept text")
    g.add_argument("--to-alc", metavar="TERM", help="term text")
    p.add_argument("--atoms", metavar="DECLS",
                   help="comma-separated NAME=ARITY, required with --to-alc")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bridge)

    p = sub.add_parser("game", help="play the comparison game on two models")
    p.add_argument("model_a", help="left model JSON file")
    p.add_argument("point_a", help="left starting element")
    p.add_argument("model_b", help="right model JSON file")
    p.add_argument("point_b", help="right starting element")
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--grading", type=int, required=True)
    p.add_argument("--trace", action="store_true",
                   help="print one winning strategy line")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_game)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetError as exc:
        print("budget exceeded: %s" % exc, file=sys.stderr)
        return 3
    except InputError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
