"""Command line surface: file ingestion and machine-readable reports.

Problem files are UTF-8 JSON; every probability is an exact rational
string "p/q" (never a float).  Subcommands: check, run, verify,
symmetry-cost, decompose.  Exit codes: 0 = verdicts computed, 1 = a
violation/inefficiency was found (for CI use), 2 = input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import axioms, bvn, efficiency, mechanisms, welfare
from .core import Allocation, Preference, Profile, rat, validate_allocation


class ParseError(ValueError):
    pass


def _rat_from_str(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ParseError(f"rational values must be strings like '2/3', got {s!r}")
    try:
        value = Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"bad rational {s!r}: {e}") from None
    return value


def _rat_to_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _matrix_to_json(rows) -> list[list[str]]:
    return [[_rat_to_str(p) for p in row] for row in rows]


class Problem:
    def __init__(self, data: dict):
        if not isinstance(data, dict):
            raise ParseError("problem file must hold a JSON object")
        try:
            self.objects: list[str] = list(data["objects"])
        except KeyError:
            raise ParseError("missing 'objects'") from None
        self.index = {name: i for i, name in enumerate(self.objects)}
        if len(self.index) != len(self.objects):
            raise ParseError("duplicate object names")
        self.n = len(self.objects)
        self.profile = self._parse_profile(data.get("preferences"))
        self.allocation = self._parse_allocation(data.get("allocation"))
        self.mechanism_spec = data.get("mechanism")

    def _parse_profile(self, prefs) -> Optional[Profile]:
        if prefs is None:
            return None
        if len(prefs) != self.n:
            raise ParseError(f"expected {self.n} preference lists, got {len(prefs)}")
        rankings = []
        for row in prefs:
            try:
                rankings.append(tuple(self.index[name] for name in row))
            except KeyError as e:
                raise ParseError(f"unknown object name {e.args[0]!r} in preferences") from None
        try:
            return Profile(tuple(Preference(r) for r in rankings))
        except ValueError as e:
            raise ParseError(str(e)) from None

    def _parse_allocation(self, rows) -> Optional[Allocation]:
        if rows is None:
            return None
        try:
            return validate_allocation([[_rat_from_str(p) for p in row] for row in rows])
        except ValueError as e:
            raise ParseError(str(e)) from None


class DeclarativeRule:
    """Decision list over history-signature predicates.

    Each clause is {"when": {...}, "do": {...}}; the first clause whose
    predicates all hold fires.  Predicates: "step" (number of completed
    steps), "residual-integral", "last-step-integral", "min-free"
    (at least this many unallocated agents).  Directives: {"monarchy": i},
    {"monarchy-next": [order...]}, {"diarchy": [i, j], "alpha": "p/q"},
    {"diarchy-next": [order...], "alpha": "p/q"} (the -next forms pick
    the first unallocated agents along the given order).
    """

    def __init__(self, clauses: list, n: int):
        if not isinstance(clauses, list) or not clauses:
            raise ParseError("'rule' must be a nonempty list of clauses")
        self.clauses = clauses
        self.n = n

    def __call__(self, sig: mechanisms.HistorySignature):
        free = [i for i in range(self.n) if i not in sig.allocated]
        for clause in self.clauses:
            when = clause.get("when", {})
            if "step" in when and when["step"] != len(sig.steps):
                continue
            if "residual-integral" in when and when["residual-integral"] != sig.residual_integral:
                continue
            if "last-step-integral" in when and when["last-step-integral"] != sig.last_step_integral:
                continue
            if "min-free" in when and len(free) < when["min-free"]:
                continue
            do = clause.get("do", {})
            if "monarchy" in do:
                return mechanisms.Monarchy(do["monarchy"])
            if "monarchy-next" in do:
                agent = next(i for i in do["monarchy-next"] if i in free)
                return mechanisms.Monarchy(agent)
            alpha = _rat_from_str(do.get("alpha", "1/2"))
            if "diarchy" in do:
                i, j = do["diarchy"]
                return mechanisms.Diarchy(i, j, alpha)
            if "diarchy-next" in do:
                picks = [i for i in do["diarchy-next"] if i in free][:2]
                if len(picks) < 2:
                    raise ParseError("diarchy-next needs two unallocated agents")
                return mechanisms.Diarchy(picks[0], picks[1], alpha)
            raise ParseError(f"clause has no directive: {clause}")
        raise ParseError(f"no rule clause matches signature {sig}")


def build_mechanism(spec, n: int):
    """Mechanism callable from a problem file's 'mechanism' entry."""
    if not isinstance(spec, dict):
        raise ParseError("'mechanism' must be a JSON object")
    if "builtin" in spec:
        return axioms.HmdMechanism(mechanisms.builtin_rule(spec["builtin"], n))
    if "serial-dictatorship" in spec:
        return axioms.SerialDictatorshipMechanism(spec["serial-dictatorship"])
    if "uniform-rsd" in spec:
        return axioms.UniformRsdMechanism()
    if "rsd" in spec:
        block = spec["rsd"]
        orders = [tuple(o) for o in block["orders"]]
        weights = [_rat_from_str(w) for w in block["weights"]]
        if len(orders) != len(weights):
            raise ParseError("rsd orders and weights differ in length")
        table = dict(zip(orders, weights))
        return lambda profile: mechanisms.rsd(table, profile)
    if "rule" in spec:
        return axioms.HmdMechanism(DeclarativeRule(spec["rule"], n))
    raise ParseError(f"unrecognized mechanism spec {spec}")


def _load(path: str) -> Problem:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from None
    return Problem(data)


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
        return
    for key, value in report.items():
        print(f"{key}: {json.dumps(value)}")


def cmd_check(args) -> int:
    prob = _load(args.file)
    if prob.profile is None or prob.allocation is None:
        raise ParseError("'check' needs both preferences and an allocation")
    amb = efficiency.is_ambiguously_efficient(prob.allocation, prob.profile)
    unamb = efficiency.is_unambiguously_efficient(prob.allocation, prob.profile)
    report = {
        "ambiguous": isinstance(amb, efficiency.Efficient),
        "unambiguous": isinstance(unamb, efficiency.Efficient),
        "lemma_violations": {
            "support_bound": efficiency.check_support_bound(prob.allocation),
            "no_gaps": [
                [i, j, prob.objects[a], prob.objects[b], prob.objects[c]]
                for i, j, a, b, c in efficiency.check_no_gaps(prob.allocation, prob.profile)
            ],
        },
    }
    if isinstance(unamb, efficiency.Certified):
        cert = unamb.certificate
        report["certificate"] = {
            "shift": _matrix_to_json(cert.shift.eta),
            "witnesses": list(cert.witnesses),
        }
        utilities = efficiency.falsifying_utilities(cert, prob.allocation, prob.profile)
        report["falsifying_utilities"] = _matrix_to_json(u.values for u in utilities)
    _emit(report, args.json)
    return 0 if report["unambiguous"] else 1


def cmd_run(args) -> int:
    prob = _load(args.file)
    if prob.profile is None or prob.mechanism_spec is None:
        raise ParseError("'run' needs preferences and a mechanism spec")
    mech = build_mechanism(prob.mechanism_spec, prob.n)
    report: dict = {"objects": prob.objects}
    if isinstance(mech, axioms.HmdMechanism):
        alloc, history = mechanisms.hmd_run(mech.rule, prob.profile)
        report["trace"] = [
            {str(i): _matrix_to_json([step.rows[i]])[0] for i in sorted(step.allocated)}
            for step in history.steps
        ]
    else:
        alloc = mech(prob.profile)
    report["allocation"] = _matrix_to_json(alloc.rows)
    if args.decompose:
        dec = bvn.decompose(alloc)
        report["decomposition"] = [
            {"weight": _rat_to_str(w), "matrix": _matrix_to_json(perm.rows)}
            for w, perm in dec.terms
        ]
    _emit(report, args.json)
    return 0


def cmd_verify(args) -> int:
    prob = _load(args.file)
    if prob.mechanism_spec is None:
        raise ParseError("'verify' needs a mechanism spec")
    mech = axioms.MechanismHandle(args.file, prob.n, build_mechanism(prob.mechanism_spec, prob.n))
    names = args.axioms.split(",") if args.axioms else list(axioms.AXIOMS)
    report = {}
    failed = False
    for name in names:
        r = axioms.check_axiom(mech, name, mode=args.mode, trials=args.trials, seed=args.seed)
        failed = failed or not r.holds
        report[name] = {"verdict": r.verdict, "mode": r.mode, "trials": r.trials, "witness": r.witness}
    _emit(report, args.json)
    return 1 if failed else 0


def cmd_symmetry_cost(args) -> int:
    r = welfare.symmetry_cost(args.n, _rat_from_str(args.eps))
    report = {
        "n": r.n,
        "eps": _rat_to_str(r.eps),
        "exchange_rates": {str(k): _rat_to_str(mu) for k, mu in zip(range(3, r.n + 1), r.rates)},
        "agent_1_lottery": _matrix_to_json([r.lottery])[0],
        "gain": _rat_to_str(r.gain),
        "bound": _rat_to_str(r.bound),
    }
    _emit(report, args.json)
    return 0


def cmd_decompose(args) -> int:
    prob = _load(args.file)
    if prob.allocation is None:
        raise ParseError("'decompose' needs an allocation")
    dec = bvn.decompose(prob.allocation)
    report = {
        "terms": [
            {"weight": _rat_to_str(w), "matrix": _matrix_to_json(perm.rows)}
            for w, perm in dec.terms
        ]
    }
    _emit(report, args.json)
    return 0


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ordalloc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="efficiency verdicts for an allocation")
    c.add_argument("file")
    c.add_argument("--json", action="store_true")
    c.set_defaults(fn=cmd_check)

    r = sub.add_parser("run", help="run a mechanism on a profile")
    r.add_argument("file")
    r.add_argument("--decompose", action="store_true")
    r.add_argument("--json", action="store_true")
    r.set_defaults(fn=cmd_run)

    v = sub.add_parser("verify", help="axiom checks for a mechanism")
    v.add_argument("file")
    v.add_argument("--axioms", default=None, help="comma-separated axiom names")
    v.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    v.add_argument("--trials", type=int, default=10000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json", action="store_true")
    v.set_defaults(fn=cmd_verify)

    s = sub.add_parser("symmetry-cost", help="cost-of-symmetry report")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--eps", required=True, help="rational like 1/1000000")
    s.add_argument("--json", action="store_true")
    s.set_defaults(fn=cmd_symmetry_cost)

    d = sub.add_parser("decompose", help="lottery over deterministic assignments")
    d.add_argument("file")
    d.add_argument("--json", action="store_true")
    d.set_defaults(fn=cmd_decompose)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
