"""Command-line interface.

Exit codes: 0 success, 1 computation failure, 2 input error,
3 verification mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import sys
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import bounds, graphs as gr
from .graphs import GraphError, anticycle, cycle
from .io import (InputFormatError, dumps, format_pauli_list, load_graph,
                 load_hamiltonian, load_paulis)
from .numerics import LanczosConvergenceError, extreme_eigs
from .pauli import DimensionGuardError, PauliParseError, PauliSumOperator, parse_pauli
from .represent import (complete_saur, edge_saur, frustration_graph, pentagon_or,
                        saura_from_or, standard_saur)
from .sdp.programs import lovasz_theta, q_upper_ppt, q_upper_threehalf
from .sdp.solver import SdpGuardError
from .seesaw import SeeSawConfig, q_lower, seesaw_coefficient, weighted_square_sum

EXIT_OK, EXIT_FAILURE, EXIT_INPUT, EXIT_MISMATCH = 0, 1, 2, 3

# The seven anticommutation-complement strings used throughout the checks.
C7BAR_STRINGS = ("ZZI", "ZII", "IXI", "XII", "XZX", "YZZ", "YYY")
# 5-cycle labelled so that vertex i is adjacent to i +- 2 (mod 5)
PENTAGON_EDGES = ((0, 2), (2, 4), (4, 1), (1, 3), (3, 0))


# -- verification cases ------------------------------------------------------

@dataclass
class Check:
    name: str
    value: float
    expected: str
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "expected": self.expected,
                "pass": self.passed}


@dataclass
class Verification:
    case: str
    checks: list[Check] = field(default_factory=list)
    table: list[dict] | None = None

    def near(self, name: str, value: float, target: float, tol: float) -> None:
        self.checks.append(Check(name, float(value), f"{target:.10g} ± {tol:g}",
                                 bool(abs(value - target) <= tol)))

    def at_least(self, name: str, value: float, bound: float, tol: float = 0.0) -> None:
        self.checks.append(Check(name, float(value), f">= {bound:.10g} - {tol:g}",
                                 bool(value >= bound - tol)))

    def at_most(self, name: str, value: float, bound: float, tol: float = 0.0) -> None:
        self.checks.append(Check(name, float(value), f"<= {bound:.10g} + {tol:g}",
                                 bool(value <= bound + tol)))

    def flag(self, name: str, ok: bool) -> None:
        self.checks.append(Check(name, float(ok), "true", bool(ok)))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        out = {"case": self.case, "pass": self.passed,
               "checks": [c.to_dict() for c in self.checks]}
        if self.table is not None:
            out["table"] = self.table
        return out


def _verify_c7bar(cfg: SeeSawConfig) -> Verification:
    v = Verification("c7bar")
    g = anticycle(7)
    strings = [parse_pauli(s) for s in C7BAR_STRINGS]
    v.flag("frustration graph of the listed strings is the 7-anticycle",
           frustration_graph(strings).same_adjacency(g))
    low = q_lower(standard_saur(g), None, cfg)
    # closed form of the best known state value: (9 + 4 sqrt 2) / 7
    v.at_least("see-saw lower bound", low.value, (9 + 4 * np.sqrt(2)) / 7, 1e-6)
    v.at_least("exceeds independence number 2", low.value, 2 + 1e-6)
    # theta of odd anticycles: 1 + 1/cos(pi/7)
    v.near("theta", lovasz_theta(g).value, 1 + 1 / np.cos(np.pi / 7), 1e-5)
    return v


def _verify_c5(cfg: SeeSawConfig) -> Verification:
    v = Verification("c5")
    g = gr.from_edges(5, PENTAGON_EDGES)
    strings = standard_saur(g, [(0, 2), (3, 4)])
    v.flag("standard representation is XI IY ZI ZX XZ",
           [s.label for s in strings] == ["XI", "IY", "ZI", "ZX", "XZ"])
    est = bounds.beta_estimate(g, None, cfg)
    v.near("beta lower", est.lower, 2.0, 1e-8)
    v.near("beta upper", est.upper, 2.0, 0.0)
    v.flag("upper bound from the cycle rule", est.upper_provenance == "cycle-rule")
    v.near("theta", lovasz_theta(g).value, np.sqrt(5), 1e-6)
    est7 = bounds.beta_estimate(cycle(7), None, cfg)
    v.near("beta(C7) lower", est7.lower, 3.0, 1e-8)
    v.near("beta(C7) upper", est7.upper, 3.0, 0.0)
    return v


def _verify_pentagon(cfg: SeeSawConfig) -> Verification:
    v = Verification("pentagon")
    rep = pentagon_or()
    ops = saura_from_or(rep)
    g = gr.from_edges(5, PENTAGON_EDGES)
    v.flag("orthogonal representation of the pentagon", rep.is_orthogonal_for(g))
    rho = (np.eye(2) + np.array([[0, 1], [1, 0]])) / 2
    v.near("sum of squared expectations", weighted_square_sum(ops, None, rho), np.sqrt(5), 1e-10)
    return v


def _verify_ladder(cfg: SeeSawConfig) -> Verification:
    v = Verification("ladder")
    v.at_least("dual certificate min eigenvalue",
               float(np.linalg.eigvalsh(bounds.ladder_dual_matrix())[0]), 0.0, 1e-9)
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    v.near("Bell state value", bounds.ladder_value(bell), 1.0, 1e-12)
    v.at_most("random and optimized states", bounds.ladder_value_scan(10_000, cfg.seed), 1.0, 1e-9)
    return v


def _verify_h14(cfg: SeeSawConfig) -> Verification:
    v = Verification("h14")
    g = anticycle(7)
    terms = edge_saur(g, [(j, i) for i, j in g.edges()])
    h = PauliSumOperator([(1.0, s) for s in terms])
    eig = extreme_eigs(h, "both", seed=cfg.seed)
    v.near("lambda_max", eig.maximum, 1 + 2 * np.sqrt(2), 1e-5)
    v.near("lambda_min", eig.minimum, -(1 + 2 * np.sqrt(2)), 1e-5)
    low = q_lower(standard_saur(g), None, cfg)
    v.near("sqrt(7 beta_lower)", np.sqrt(7 * low.value), eig.maximum, 1e-5)
    report = bounds.gse_bound([(1.0, s) for s in terms], reference=False, config=cfg)
    v.at_least("certified bound above lambda_max", report.bound, eig.maximum, 1e-8)
    return v


def _verify_c9bar(cfg: SeeSawConfig) -> Verification:
    v = Verification("c9bar")
    g = anticycle(9)
    run = seesaw_coefficient(standard_saur(g), None,
                             SeeSawConfig(min(cfg.restarts, 64), 500, cfg.rel_tol, cfg.seed))
    v.near("see-saw estimate", run.value, 2.057505, 1e-4)
    v.at_least("certified sqrt(9 theta)", np.sqrt(9 * lovasz_theta(g).value), 4.303201)
    return v


def _verify_anticycle_scan(cfg: SeeSawConfig, n_max: int = 10) -> Verification:
    v = Verification("anticycle-scan")
    rows = []
    for n in range(2, n_max + 1):
        g = anticycle(2 * n + 1)
        run = seesaw_coefficient(standard_saur(g), None, cfg)
        theta = lovasz_theta(g).value
        rows.append({"n": n, "beta_tilde": run.value, "theta": theta})
        v.at_most(f"n={n}: estimate below theta", run.value, theta, 1e-6)
        if n >= 3:
            v.at_least(f"n={n}: estimate above 2", run.value, 2 + 1e-9)
    v.table = rows
    return v


VERIFY_CASES: dict[str, Callable[[SeeSawConfig], Verification]] = {
    "c7bar": _verify_c7bar,
    "c5": _verify_c5,
    "pentagon": _verify_pentagon,
    "ladder": _verify_ladder,
    "h14": _verify_h14,
    "c9bar": _verify_c9bar,
    "anticycle-scan": _verify_anticycle_scan,
}


# -- command handlers -------------------------------------------------------

def _weights(args, n: int):
    if args.weights is None:
        return None
    try:
        w = [float(x) for x in args.weights.split(",")]
    except ValueError as exc:
        raise InputFormatError(f"bad --weights: {exc}") from exc
    if len(w) != n:
        raise InputFormatError(f"--weights needs {n} values, got {len(w)}")
    return w


def _config(args, restarts: int = 32) -> SeeSawConfig:
    if args.restarts is not None:
        restarts = args.restarts
    return SeeSawConfig(restarts=restarts, max_iters=args.max_iters, seed=args.seed)


def _emit(args, data: dict, text: str | None = None) -> None:
    if args.format == "json" or text is None:
        sys.stdout.write(dumps(data))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_frustration(args) -> int:
    g = frustration_graph(load_paulis(args.paulis))
    _emit(args, g.to_dict(), f"{g.n} vertices\n" + "".join(f"{i} {j}\n" for i, j in g.edges()))
    return EXIT_OK


def cmd_alpha(args) -> int:
    g = load_graph(args.graph)
    value, witness = gr.weighted_independence(g, _weights(args, g.n))
    _emit(args, {"alpha": value, "independent_set": witness}, f"{value:.12g}")
    return EXIT_OK


def cmd_theta(args) -> int:
    g = load_graph(args.graph)
    res = lovasz_theta(g, _weights(args, g.n), tol=args.tol or 1e-9)
    _emit(args, res.to_dict(), f"{res.value:.12g}")
    return EXIT_OK if res.status == "optimal" else EXIT_FAILURE


def cmd_beta(args) -> int:
    g = load_graph(args.graph)
    decls = []
    if args.declare_lex:
        decls.append(bounds.LexDeclaration(load_graph(args.declare_lex[0]),
                                           load_graph(args.declare_lex[1])))
    if args.declare_embedding:
        outer, inner, verts = args.declare_embedding
        try:
            vertices = tuple(int(x) for x in verts.split(","))
        except ValueError as exc:
            raise InputFormatError(f"bad embedding vertex list: {exc}") from exc
        decls.append(bounds.EmbeddingDeclaration(load_graph(outer), load_graph(inner), vertices))
    est = bounds.beta_estimate(g, _weights(args, g.n), _config(args), decls)
    _emit(args, est.to_dict(),
          f"beta in [{est.lower:.10g}, {est.upper:.10g}] "
          f"({est.lower_provenance} / {est.upper_provenance})")
    return EXIT_OK


def _saur_command(build):
    def handler(args) -> int:
        g = load_graph(args.graph)
        strings = build(g, args)
        sys.stdout.write(format_pauli_list(strings))
        return EXIT_OK
    return handler


def _edge(g, args):
    orient = [(j, i) for i, j in g.edges()] if args.reverse else None
    return edge_saur(g, orient)


def cmd_gse_bound(args) -> int:
    terms = load_hamiltonian(args.hamiltonian)
    report = bounds.gse_bound(terms, optimize=not args.no_optimize,
                              reference=not args.no_reference, config=_config(args))
    lines = [f"{r.label:>10}  bound {r.bound:.10g}  ({r.provenance} {r.q_upper:.10g})"
             for r in report.rows]
    if report.reference is not None:
        lines.append(f" reference {report.reference:.10g} (not certified)")
    _emit(args, report.to_dict(), "\n".join(lines))
    return EXIT_OK


def cmd_extremal_energy(args) -> int:
    terms = load_hamiltonian(args.hamiltonian)
    h = PauliSumOperator(terms)
    eig = extreme_eigs(h, "both", tol=args.tol or 1e-8, seed=args.seed)
    _emit(args, {"min": eig.minimum, "max": eig.maximum, "iterations": eig.iterations},
          f"min {eig.minimum:.12g}\nmax {eig.maximum:.12g}")
    return EXIT_OK


def cmd_q_upper(args) -> int:
    strings = load_paulis(args.paulis)
    w = _weights(args, len(strings))
    solver = q_upper_ppt if args.level == "ppt" else q_upper_threehalf
    res = solver(strings, w, tol=args.tol or 1e-9)
    _emit(args, res.to_dict(), f"{res.value:.12g}")
    return EXIT_OK if res.status == "optimal" else EXIT_FAILURE


def cmd_verify(args) -> int:
    cfg = _config(args, 4 if args.case == "anticycle-scan" else 32)
    if args.case == "anticycle-scan":
        if args.n_max < 2:
            raise InputFormatError("--n-max must be at least 2")
        result = _verify_anticycle_scan(cfg, args.n_max)
    else:
        result = VERIFY_CASES[args.case](cfg)
    if args.case == "anticycle-scan" and args.format == "text":
        buf = _io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "beta_tilde", "theta"])
        for row in result.table:
            writer.writerow([row["n"], f"{row['beta_tilde']:.8f}", f"{row['theta']:.8f}"])
        sys.stdout.write(buf.getvalue())
        for c in result.checks:
            if not c.passed:
                sys.stderr.write(f"MISMATCH {c.name}: {c.value!r} expected {c.expected}\n")
        sys.stderr.write("PASS\n" if result.passed else "FAIL\n")
    else:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.value:.10g} "
                 f"(expected {c.expected})" for c in result.checks]
        lines.append("PASS" if result.passed else "FAIL")
        _emit(args, result.to_dict(), "\n".join(lines))
    return EXIT_OK if result.passed else EXIT_MISMATCH


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--restarts", type=int, default=None,
                        help="see-saw restarts (default 32, or 4 for anticycle-scan)")
    common.add_argument("--max-iters", type=int, default=500)
    common.add_argument("--tol", type=float, default=None,
                        help="solver tolerance (default 1e-9 for SDPs, 1e-8 for Lanczos)")

    parser = argparse.ArgumentParser(prog="pauligraph",
                                     description="Bounds on sums of squared Pauli expectations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("frustration", parents=[common], help="anticommutation graph of Pauli strings")
    p.add_argument("paulis")
    p.set_defaults(func=cmd_frustration)

    for name, func, text in (("alpha", cmd_alpha, "exact weighted independence number"),
                             ("theta", cmd_theta, "weighted Lovasz number")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("graph")
        p.add_argument("--weights", help="comma-separated vertex weights")
        p.set_defaults(func=func)

    p = sub.add_parser("beta", parents=[common], help="certified interval for beta")
    p.add_argument("graph")
    p.add_argument("--weights")
    p.add_argument("--declare-lex", nargs=2, metavar=("OUTER", "INNER"))
    p.add_argument("--declare-embedding", nargs=3, metavar=("OUTER", "INNER", "VERTICES"))
    p.set_defaults(func=cmd_beta)

    builders = {
        "standard-saur": lambda g, a: standard_saur(g),
        "edge-saur": _edge,
        "complete-saur": lambda g, a: complete_saur(g),
    }
    for name, build in builders.items():
        p = sub.add_parser(name, parents=[common], help=f"{name.split('-')[0]} representation as Pauli strings")
        p.add_argument("graph")
        if name == "edge-saur":
            p.add_argument("--reverse", action="store_true",
                           help="put X on the larger endpoint of each edge")
        p.set_defaults(func=_saur_command(build))

    p = sub.add_parser("gse-bound", parents=[common], help="ground-state energy bound")
    p.add_argument("hamiltonian")
    p.add_argument("--no-optimize", action="store_true", help="skip the weight search")
    p.add_argument("--no-reference", action="store_true", help="skip the see-saw reference value")
    p.set_defaults(func=cmd_gse_bound)

    p = sub.add_parser("extremal-energy", parents=[common], help="Lanczos min and max eigenvalues")
    p.add_argument("hamiltonian")
    p.set_defaults(func=cmd_extremal_energy)

    p = sub.add_parser("q-upper", parents=[common], help="SDP upper bound on sum of squared expectations")
    p.add_argument("paulis")
    p.add_argument("--weights")
    p.add_argument("--level", choices=("ppt", "3half"), default="ppt")
    p.set_defaults(func=cmd_q_upper)

    p = sub.add_parser("verify", parents=[common], help="check stored reference cases")
    p.add_argument("case", choices=sorted(VERIFY_CASES))
    p.add_argument("--n-max", type=int, default=10,
                   help="anticycle-scan: largest n, scanning anticycles on 2n+1 vertices")
    p.set_defaults(func=cmd_verify)
    return parser


INPUT_ERRORS = (InputFormatError, PauliParseError, GraphError, FileNotFoundError)
COMPUTE_ERRORS = (LanczosConvergenceError, SdpGuardError, DimensionGuardError,
                  RuntimeError, np.linalg.LinAlgError)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except COMPUTE_ERRORS as exc:
        sys.stderr.write(f"computation failed: {exc}\n")
        return EXIT_FAILURE
    except ValueError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
