"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 budget exceeded,
3 internal consistency check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Optional

from .coxeter import CoxeterGroup, format_word, load_matrix, parse_word
from .errors import BudgetExceeded, SpecialMatchError, SystemViolation
from .poset import (
    DEFAULT_ENUMERATION_BUDGET,
    DEFAULT_INTERVAL_BUDGET,
    build_interval,
    enumerate_special_matchings,
    is_multiplication_matching,
    poset_isomorphic,
)
from .rpoly import IntPoly, polynomials, r_polynomial_abstract
from .systems import enumerate_SMw, induced_matching, sm_systems, system_from_json

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_INTERNAL = 0, 1, 2, 3


class Inconsistent(Exception):
    """A built-in cross-check disagreed."""


@dataclass
class RunConfig:
    command: str
    matrix: str
    word: tuple
    budget_interval: int = DEFAULT_INTERVAL_BUDGET
    budget_closure: int = 2_000_000
    format: str = "text"
    out: Optional[str] = None

    def __post_init__(self):
        if self.budget_interval <= 0 or self.budget_closure <= 0:
            raise ValueError("budgets must be positive")

    def group(self, matrix=None) -> CoxeterGroup:
        return CoxeterGroup(load_matrix(matrix or self.matrix), closure_budget=self.budget_closure)


@contextmanager
def _output(cfg: RunConfig):
    if cfg.out:
        with open(cfg.out, "w") as fh:
            yield fh
    else:
        yield sys.stdout


def _emit(cfg: RunConfig, text: str = "", data=None):
    with _output(cfg) as fh:
        if cfg.format == "json" and data is not None:
            json.dump(data, fh, indent=2)
            fh.write("\n")
        else:
            fh.write(text if text.endswith("\n") else text + "\n")


def cmd_interval(cfg: RunConfig) -> int:
    G = cfg.group()
    w = G.element(cfg.word)
    I = build_interval(G, w, budget=cfg.budget_interval)
    if cfg.format == "dot":
        _emit(cfg, I.to_dot())
        return EXIT_OK
    ranks = " ".join(str(n) for n in I.rank_sizes())
    text = f"w = {format_word(w)}\nelements: {I.size}\nranks: {ranks}"
    _emit(cfg, text, I.to_json())
    return EXIT_OK


def _brute_and_systems(cfg: RunConfig):
    G = cfg.group()
    w = G.element(cfg.word)
    I = build_interval(G, w, budget=cfg.budget_interval)
    brute = enumerate_special_matchings(I, budget=DEFAULT_ENUMERATION_BUDGET)
    pairs = enumerate_SMw(G, w, I)
    return G, w, I, brute, pairs


def cmd_matchings(cfg: RunConfig) -> int:
    G, w, I, brute, pairs = _brute_and_systems(cfg)
    ids = {M.partner: k for k, M in enumerate(brute)}
    equal = set(ids) == {M.partner for _, M in pairs}
    lines = [f"w = {format_word(w)}: {len(brute)} special matchings"]
    for k, M in enumerate(brute):
        tag = "multiplication" if is_multiplication_matching(M) else "non-multiplication"
        lines.append(f"  [{k}] ({tag}) {M.describe()}")
    lines.append(f"SM_w: {len(pairs)} distinct matchings from systems")
    for S, M in pairs:
        lines.append(f"  [{ids.get(M.partner, '?')}] J={sorted(S.J)} H={sorted(S.H)} kind={S.kind}")
    lines.append("equality with brute force: " + ("OK" if equal else "MISMATCH"))
    data = {
        "w": list(w),
        "matchings": [M.to_json() for M in brute],
        "systems": [dict(S.to_json(), matching=ids.get(M.partner)) for S, M in pairs],
        "equal": equal,
    }
    _emit(cfg, "\n".join(lines), data)
    if not equal:
        raise Inconsistent("SM_w differs from the brute-force special matchings")
    return EXIT_OK


def cmd_systems(cfg: RunConfig, system_file: Optional[str] = None) -> int:
    G = cfg.group()
    if system_file:
        with open(system_file) as fh:
            raw = json.load(fh)
        try:
            S = system_from_json(G, raw)
        except SystemViolation as err:
            _emit(cfg, f"not a system: {err}", {"valid": False, "violation": err.as_dict()})
            return EXIT_OK
        _emit(cfg, f"valid system of the {S.kind} kind", {"valid": True, "kind": S.kind})
        return EXIT_OK
    w = G.element(cfg.word)
    I = build_interval(G, w, budget=cfg.budget_interval)
    brute = enumerate_special_matchings(I)
    ids = {M.partner: k for k, M in enumerate(brute)}
    systems = sm_systems(G, w)
    lines = [f"w = {format_word(w)}: {len(systems)} systems in SM_w"]
    data = []
    for S in systems:
        k = ids.get(induced_matching(S, I).partner)
        if k is None:
            raise Inconsistent(f"{S!r} induces a matching missing from the brute-force list")
        lines.append(f"  J={sorted(S.J)} H={sorted(S.H)} kind={S.kind} -> matching [{k}]")
        data.append(dict(S.to_json(), kind=S.kind, matching=k))
    _emit(cfg, "\n".join(lines), data)
    return EXIT_OK


def cmd_rpoly(cfg: RunConfig, u_word, mode: str = "classical") -> int:
    G = cfg.group()
    w = G.element(cfg.word)
    u = G.element(u_word)
    table = polynomials(G)
    reference = table.classical(u, w)
    I = build_interval(G, w, budget=cfg.budget_interval)

    def by_matching(k: int) -> IntPoly:
        brute = enumerate_special_matchings(I)
        if not 0 <= k < len(brute):
            raise ValueError(f"matching id {k} out of range (0..{len(brute) - 1})")
        return table.via_matching(u, brute[k])

    def abstract() -> IntPoly:
        P, perm = I.scrambled(seed=0)
        f = poset_isomorphic(I, P)
        if f is None:
            raise Inconsistent("scrambled copy is not isomorphic to the interval")
        if u not in I.index:
            return IntPoly()
        return r_polynomial_abstract(P)[f[I.index[u]]]

    results = {}
    if mode == "classical":
        results["classical"] = reference
    elif mode == "abstract":
        results["abstract"] = abstract()
    elif mode.startswith("matching:"):
        results[mode] = by_matching(int(mode.split(":", 1)[1]))
    elif mode == "all":
        results["classical"] = reference
        for k in range(len(enumerate_special_matchings(I)) if u in I.index else 0):
            results[f"matching:{k}"] = by_matching(k)
        results["abstract"] = abstract()
    else:
        raise ValueError(f"unknown mode {mode!r}")

    agree = all(p == reference for p in results.values())
    if mode == "all":
        lines = [f"{k}: {p}" for k, p in results.items()]
        lines.append("all modes agree" if agree else "MODES DISAGREE")
        text = "\n".join(lines)
    else:
        text = str(next(iter(results.values())))
    data = {"u": list(u), "w": list(w), "results": {k: p.to_json() for k, p in results.items()},
            "agree": agree}
    _emit(cfg, text, data)
    if not agree:
        raise Inconsistent("R-polynomial routes disagree")
    return EXIT_OK


def cmd_klpoly(cfg: RunConfig, u_word) -> int:
    G = cfg.group()
    w = G.element(cfg.word)
    u = G.element(u_word)
    p = polynomials(G).kl(u, w)
    _emit(cfg, str(p), {"u": list(u), "w": list(w), "P": p.to_json()})
    return EXIT_OK


def cmd_invariance(cfg: RunConfig, matrix2: str, word2) -> int:
    G1 = cfg.group()
    G2 = cfg.group(matrix2)
    w1, w2 = G1.element(cfg.word), G2.element(word2)
    I1 = build_interval(G1, w1, budget=cfg.budget_interval)
    I2 = build_interval(G2, w2, budget=cfg.budget_interval)
    f = poset_isomorphic(I1, I2)
    if f is None:
        _emit(cfg, "NOT ISOMORPHIC", {"isomorphic": False})
        return EXIT_OK
    t1, t2 = polynomials(G1), polynomials(G2)
    ok = all(t1.classical(x, w1) == t2.classical(I2.elements[f[i]], w2)
             for i, x in enumerate(I1.elements))
    _emit(cfg, "isomorphic; R-polynomials transported: " + ("PASS" if ok else "FAIL"),
          {"isomorphic": True, "bijection": f, "pass": ok})
    return EXIT_OK if ok else EXIT_INTERNAL


def cmd_export_dot(cfg: RunConfig, matching_id: Optional[int] = None) -> int:
    G = cfg.group()
    w = G.element(cfg.word)
    I = build_interval(G, w, budget=cfg.budget_interval)
    M = None
    if matching_id is not None:
        brute = enumerate_special_matchings(I)
        if not 0 <= matching_id < len(brute):
            raise ValueError(f"matching id {matching_id} out of range")
        M = brute[matching_id]
    with _output(cfg) as fh:
        fh.write(I.to_dot(M))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--matrix", required=True,
                        help="Coxeter matrix JSON file, or a type name such as A3, B3, H3, I2(5)")
    common.add_argument("--word", default="", help='element as indices, e.g. "0 1 0"')
    common.add_argument("--budget-interval", type=int, default=DEFAULT_INTERVAL_BUDGET)
    common.add_argument("--budget-closure", type=int, default=2_000_000)
    common.add_argument("--format", choices=("text", "json", "dot"), default="text")
    common.add_argument("--out", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="specialmatch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("interval", parents=[common], help="build [e, w]")
    sub.add_parser("matchings", parents=[common], help="special matchings, brute force vs systems")
    p = sub.add_parser("systems", parents=[common], help="list SM_w or validate a system file")
    p.add_argument("--system", help="JSON system file to validate")
    p = sub.add_parser("rpoly", parents=[common], help="R-polynomial R_{u,w}")
    p.add_argument("--u", default="", help="lower element")
    p.add_argument("--mode", default="classical", help="classical | matching:<id> | abstract | all")
    p = sub.add_parser("klpoly", parents=[common], help="Kazhdan-Lusztig polynomial P_{u,w}")
    p.add_argument("--u", default="")
    p = sub.add_parser("invariance", parents=[common], help="compare two lower intervals")
    p.add_argument("--matrix2", required=True)
    p.add_argument("--word2", default="")
    p = sub.add_parser("export-dot", parents=[common], help="Graphviz Hasse diagram")
    p.add_argument("--matching", type=int, help="highlight a matching by id")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = RunConfig(
            command=args.command, matrix=args.matrix, word=parse_word(args.word),
            budget_interval=args.budget_interval, budget_closure=args.budget_closure,
            format=args.format, out=args.out,
        )
        if args.command == "interval":
            return cmd_interval(cfg)
        if args.command == "matchings":
            return cmd_matchings(cfg)
        if args.command == "systems":
            return cmd_systems(cfg, args.system)
        if args.command == "rpoly":
            return cmd_rpoly(cfg, parse_word(args.u), args.mode)
        if args.command == "klpoly":
            return cmd_klpoly(cfg, parse_word(args.u))
        if args.command == "invariance":
            return cmd_invariance(cfg, args.matrix2, parse_word(args.word2))
        if args.command == "export-dot":
            return cmd_export_dot(cfg, args.matching)
    except BudgetExceeded as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BUDGET
    except Inconsistent as err:
        print(f"internal check failed: {err}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, KeyError, OSError, json.JSONDecodeError, SpecialMatchError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
