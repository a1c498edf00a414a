"""Command-line front end.

Exit codes: 0 success, 1 usage or I/O error, 2 input invalid for the model,
3 Unknown proof status or failed check.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .action import derive_report, qlin_presentation
from .cstar import (CStarError, f_diagonal, f_matrix, graph_algebra_presentation,
                    tau, format_monomial, v2plus_basis)
from .graph import GraphError, adjacency_matrix, classical_automorphisms, classify, load_graph
from .ncpoly import ExprError
from .presentations import (Presentation, PresentationError, aut_f, banica, doubling, free_circles,
                            s_n_plus)
from .reps import MatrixRep, RepError, builtin_rep, verify_rep, witness_noncommutativity
from .rewrite import Caps, prove_zero

MODELS = ("graph", "banica", "snplus", "autf", "qlin", "free-circles", "doubling-k2")

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_FAIL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    command: str
    graph: str | None
    model: str | None
    degree_cap: int = 8
    rule_cap: int = 20000
    depth: int = 4
    seed: int = 0
    dim: int = 3
    tol: float = 1e-9
    json: bool = False
    out: str | None = None

    def __post_init__(self):
        for name in ("degree_cap", "rule_cap", "depth", "dim"):
            if getattr(self, name) < 1:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.tol <= 0:
            raise UsageError("--tol must be positive")
        if self.model is not None and self.model not in MODELS and not self.model.endswith(".json"):
            raise UsageError(f"unknown model {self.model!r}; choose from {', '.join(MODELS)} or a .json file")

    @property
    def caps(self) -> Caps:
        return Caps(self.degree_cap, self.rule_cap)


def build_presentation(model: str, g, depth: int = 4) -> Presentation:
    if model.endswith(".json"):
        with open(model, encoding="utf-8") as fh:
            return Presentation.from_json(json.load(fh))
    if model == "graph":
        return graph_algebra_presentation(g)
    if model == "banica":
        return banica(g)
    if model == "snplus":
        return s_n_plus(g.n_vertices, labels=g.vertices)
    if model == "autf":
        F = f_diagonal(g)
        n = len(F)
        return aut_f([[F[i] if i == j else 0 for j in range(n)] for i in range(n)], n)
    if model == "qlin":
        return qlin_presentation(g, depth)
    if model == "free-circles":
        return free_circles(g.n_edges)
    if model == "doubling-k2":
        return doubling(free_circles(2), {"z_1": "z_2", "z_2": "z_1"})
    raise UsageError(f"unknown model {model!r}")


def _load_rep(spec: str, g, cfg: RunConfig) -> MatrixRep:
    if spec.startswith("builtin:"):
        params = {"d": cfg.dim, "graph": g}
        name = spec.split(":", 1)[1]
        if name in ("cuntz-classical", "path-diagonal"):
            params["n"] = g.n_edges
        if name == "banica-classical":
            params.pop("n", None)
        return builtin_rep(name, params, cfg.seed, cfg.tol)
    with open(spec, encoding="utf-8") as fh:
        rep = MatrixRep.from_json(json.load(fh))
    rep.tolerance = cfg.tol
    return rep


# ---------------------------------------------------------------------------
# commands; each returns (exit code, json payload, text lines)

def cmd_analyze(g, cfg):
    cl = classify(g)
    basis = v2plus_basis(g)
    tf = tau(g)
    auts = classical_automorphisms(g)
    data = {
        "vertices": list(g.vertices),
        "edges": [list(e) for e in g.edges],
        "classification": {"has_loop": cl.has_loop, "has_multi_edge": cl.has_multi_edge,
                           "sinks": sorted(cl.sinks), "sources_only": sorted(cl.sources_only),
                           "acyclic": cl.acyclic},
        "adjacency": adjacency_matrix(g).tolist(),
        "basis": {"pairs": [list(p) for p in basis.pair_set], "sinks": list(basis.sink_list),
                  "size": len(basis)},
        "tau": [{"element": format_monomial(g, m), "value": str(v)} for m, v in tf.table().items()],
        "f_matrix": f_matrix(g).tolist(),
        "automorphism_group_order": len(auts),
    }
    lines = [f"vertices: {' '.join(g.vertices)}",
             f"edges: {', '.join(f'{e}: {s}->{t}' for e, s, t in g.edges)}",
             f"loops: {cl.has_loop}  multi-edges: {cl.has_multi_edge}  acyclic: {cl.acyclic}",
             f"sinks: {', '.join(sorted(cl.sinks)) or '-'}",
             "adjacency:"] + ["  " + " ".join(str(x) for x in row) for row in data["adjacency"]]
    lines.append(f"basis B ({len(basis)} elements):")
    lines += [f"  tau({t['element']}) = {t['value']}" for t in data["tau"]]
    lines.append("F = diag(" + ", ".join(str(x) for x in f_diagonal(g)) + ")")
    lines.append(f"|Aut| = {len(auts)}")
    return EXIT_OK, data, lines


def cmd_present(g, cfg):
    P = build_presentation(cfg.model, g, cfg.depth)
    lines = [f"presentation {P.name}: {len(P.gens.names)} generators, {len(P.relations)} relations",
             "generators: " + " ".join(P.gens.names)]
    if P.coproduct:
        lines.append(f"coproduct: {P.coproduct}")
    lines += [f"  {P.format(r)} = 0" for r in P.relations]
    return EXIT_OK, P.to_json(), lines


def cmd_derive(g, cfg):
    rep = derive_report(g, cfg.depth)
    lines = [f"F = {rep['f_matrix']}", f"{len(rep['constraints'])} constraints:"]
    lines += [f"  [{c['source']}] {c['left_leg']}: {c['relation']} = 0" for c in rep["constraints"]]
    return EXIT_OK, rep, lines


def cmd_prove(g, cfg, expr, antipode=True, cstar=True):
    P = build_presentation(cfg.model, g, cfg.depth)
    goal = P.parse(expr)
    use_antipode = antipode and P.gens.layout is not None
    res = prove_zero(goal, P.relations, P.gens, cfg.caps, use_cstar_inference=cstar,
                     use_antipode=use_antipode, antipode_weights=P.weights)
    data = res.to_json()
    lines = [f"{res.status}: {P.format(goal)} = 0",
             f"degree reached {res.degree_reached}, {res.rules} rules, antipode used: {res.antipode_used}"]
    if res.flags.get("truncated"):
        lines.append("note: completion truncated at the degree cap")
    if res.proved:
        for step in res.certificate():
            if step["step"] == "rewrite":
                lines.append(f"  rewrite {step['coeff']} · {step['prefix']} [{step['rule']}] {step['suffix']}")
            else:
                lines.append(f"  {step['step']}: adjoin {step['fact']} = 0  (from {step['from']})")
    return (EXIT_OK if res.proved else EXIT_FAIL), data, lines


def cmd_repcheck(g, cfg, rep_spec):
    P = build_presentation(cfg.model, g, cfg.depth)
    rep = _load_rep(rep_spec, g, cfg)
    report = verify_rep(P, rep)
    data = report.to_json()
    data["seed"] = cfg.seed if rep_spec.startswith("builtin:") else None
    lines = [f"{'pass' if report.passed else 'FAIL'}: max residual {report.max_residual:.3e} "
             f"(tolerance {rep.tolerance:g}, dim {rep.dim}, seed {data['seed']})"]
    lines += [f"  {r:.3e}  {rel}" for rel, r in report.per_relation if r >= rep.tolerance]
    return (EXIT_OK if report.passed else EXIT_FAIL), data, lines


def cmd_witness(g, cfg, trials=10):
    P = build_presentation(cfg.model, g, cfg.depth)
    w = witness_noncommutativity(P, cfg.dim, cfg.seed, trials, graph=g)
    if w is None:
        return EXIT_FAIL, {"witness": None}, [f"no witness in {trials} trials"]
    return EXIT_OK, {"witness": w.to_json()}, [
        f"||[{w.a}, {w.b}]|| = {w.norm:.4f} (family {w.family}, seed {w.seed})"]


def cmd_auts(g, cfg):
    auts = classical_automorphisms(g)
    perms = [{g.vertices[i]: g.vertices[s] for i, s in enumerate(a.image)} for a in auts]
    lines = [f"|Aut| = {len(auts)}"]
    lines += ["  " + ", ".join(f"{k}->{v}" for k, v in p.items()) for p in perms]
    return EXIT_OK, {"order": len(auts), "automorphisms": perms}, lines


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degree-cap", type=int, default=8)
    common.add_argument("--rule-cap", type=int, default=20000)
    common.add_argument("--depth", type=int, default=4)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--dim", type=int, default=3)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", help="write output to this file")

    p = _Parser(prog="graphqsym", description="Quantum symmetries of graph C*-algebras")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, hlp in [("analyze", "structural report of a graph"), ("derive", "constraints of a linear coaction"),
                      ("auts", "classical automorphisms")]:
        sp = sub.add_parser(name, parents=[common], help=hlp)
        sp.add_argument("graph")
    sp = sub.add_parser("present", parents=[common], help="print a presentation")
    sp.add_argument("graph")
    sp.add_argument("model")
    sp = sub.add_parser("prove", parents=[common], help="try to prove expr = 0")
    sp.add_argument("graph")
    sp.add_argument("model")
    sp.add_argument("expr")
    sp.add_argument("--no-antipode", action="store_true")
    sp.add_argument("--no-cstar", action="store_true")
    sp = sub.add_parser("repcheck", parents=[common], help="check a matrix representation")
    sp.add_argument("graph")
    sp.add_argument("model")
    sp.add_argument("rep", help="builtin:<family> or a representation JSON file")
    sp = sub.add_parser("witness", parents=[common], help="search for a noncommutativity witness")
    sp.add_argument("graph")
    sp.add_argument("model")
    sp.add_argument("--trials", type=int, default=10)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.command, args.graph, getattr(args, "model", None), args.degree_cap,
                        args.rule_cap, args.depth, args.seed, args.dim, args.tol, args.json, args.out)
    except UsageError as exc:
        print(f"graphqsym: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        g = load_graph(cfg.graph)
        if cfg.command == "analyze":
            code, data, lines = cmd_analyze(g, cfg)
        elif cfg.command == "present":
            code, data, lines = cmd_present(g, cfg)
        elif cfg.command == "derive":
            code, data, lines = cmd_derive(g, cfg)
        elif cfg.command == "prove":
            code, data, lines = cmd_prove(g, cfg, args.expr, not args.no_antipode, not args.no_cstar)
        elif cfg.command == "repcheck":
            code, data, lines = cmd_repcheck(g, cfg, args.rep)
        elif cfg.command == "witness":
            code, data, lines = cmd_witness(g, cfg, args.trials)
        else:
            code, data, lines = cmd_auts(g, cfg)
    except OSError as exc:
        print(f"graphqsym: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphError, PresentationError, ExprError, RepError, CStarError, ValueError) as exc:
        print(f"graphqsym: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = json.dumps(data, indent=2, ensure_ascii=False) if cfg.json else "\n".join(lines)
    if cfg.out:
        try:
            Path(cfg.out).write_text(text + "\n", encoding="utf-8")
        except OSError as exc:
            print(f"graphqsym: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
