import itertools

import numpy as np
import pytest

from pauligraph import graphs as gr
from pauligraph.bounds import (
    EmbeddingDeclaration,
    LexDeclaration,
    beta_estimate,
    beta_upper,
    gse_bound,
    ladder_dual_check,
    ladder_dual_matrix,
    ladder_value,
    ladder_value_scan,
    purity_bound,
    purity_check,
    uncertainty_bound,
)
from pauligraph.graphs import GraphError, from_edges
from pauligraph.numerics import random_density
from pauligraph.pauli import PauliSumOperator, parse_pauli, to_matrix
from pauligraph.represent import edge_saur, frustration_graph, pentagon_or, saura_from_or, standard_saur
from pauligraph.sdp.programs import lovasz_theta
from pauligraph.seesaw import SeeSawConfig, q_lower

C7BAR_LOW = (9 + 4 * np.sqrt(2)) / 7
C7BAR_THETA = 1 + 1 / np.cos(np.pi / 7)
C7BAR_STRINGS = ["ZZI", "ZII", "IXI", "XII", "XZX", "YZZ", "YYY"]
FAST = SeeSawConfig(restarts=4, max_iters=300)


def test_c7bar_interval():
    est = beta_estimate(gr.anticycle(7))
    assert est.lower >= C7BAR_LOW - 1e-9
    assert est.upper == pytest.approx(C7BAR_THETA, abs=1e-6)
    assert est.width < 0.017
    assert (est.lower_provenance, est.upper_provenance) == ("see-saw", "theta")


def test_c5_closed_by_cycle_rule():
    est = beta_estimate(gr.cycle(5), config=FAST)
    assert est.lower == pytest.approx(2, abs=1e-9)
    assert est.upper == 2
    assert est.upper_provenance == "cycle-rule"


def test_union_of_two_c7bar():
    g = gr.disjoint_union(gr.anticycle(7), gr.anticycle(7))
    up = beta_upper(g)
    assert up.provenance == "union-rule"
    assert up.value == pytest.approx(2 * C7BAR_THETA, abs=2e-6)


def test_lexicographic_declaration():
    g = gr.lexicographic(gr.anticycle(7), gr.complete(2))
    up = beta_upper(g, declarations=[LexDeclaration(gr.anticycle(7), gr.complete(2))])
    assert up.provenance == "lexicographic-rule"
    assert up.value == pytest.approx(C7BAR_THETA, abs=1e-6)
    with pytest.raises(GraphError):
        beta_upper(g, declarations=[LexDeclaration(gr.cycle(7), gr.complete(2))])
    with pytest.raises(GraphError):
        beta_upper(g, np.arange(1, 15), declarations=[LexDeclaration(gr.anticycle(7), gr.complete(2))])


def test_embedding_declaration():
    host_outer, host_inner = gr.cycle(5), gr.complete(2)
    host = gr.lexicographic(host_outer, host_inner)
    verts = (0, 1, 2, 4, 6, 8, 9)
    g = host.induced_subgraph(list(verts))
    up = beta_upper(g, declarations=[EmbeddingDeclaration(host_outer, host_inner, verts)])
    assert up.value <= 2 + 1e-9
    with pytest.raises(GraphError):
        beta_upper(g, declarations=[EmbeddingDeclaration(host_outer, host_inner, (0, 1, 2, 3, 4, 5, 6))])


def test_edgeless_and_alpha_equals_theta():
    est = beta_estimate(gr.empty_graph(4), config=FAST)
    assert est.lower == est.upper == 4
    # perfect graph: the path
    up = beta_upper(gr.path(4))
    assert up.provenance in ("alpha-equals-theta", "theta") and up.value == pytest.approx(2, abs=1e-7)


def test_join_rule_matches_see_saw():
    g = gr.join(gr.cycle(5), gr.complete(2))
    est = beta_estimate(g, config=FAST)
    assert est.upper_provenance == "join-rule"
    assert est.upper == pytest.approx(est.lower, abs=1e-6)


def test_union_rule_matches_see_saw():
    g = gr.disjoint_union(gr.cycle(5), gr.complete(2))
    est = beta_estimate(g, config=SeeSawConfig(restarts=16))
    assert est.upper_provenance == "union-rule"
    assert est.upper == pytest.approx(3)
    assert abs(est.upper - est.lower) < 1e-4


@pytest.mark.parametrize("pair", [(gr.cycle(5), gr.complete(2)), (gr.complete(2), gr.complete(2))],
                         ids=["C5xK2", "K2xK2"])
def test_xor_product_super_multiplicative(pair):
    a, b = pair
    la = q_lower(standard_saur(a), config=FAST).value
    lb = q_lower(standard_saur(b), config=FAST).value
    prod = q_lower(standard_saur(gr.xor_product(a, b)), config=SeeSawConfig(restarts=8)).value
    assert prod >= la * lb - 1e-6


def test_vertex_removal_from_lex_product():
    host = gr.lexicographic(gr.cycle(5), gr.complete(2))
    cfg = SeeSawConfig(restarts=2, max_iters=100)
    for verts in itertools.combinations(range(10), 7):
        g = host.induced_subgraph(list(verts))
        assert q_lower(standard_saur(g), config=cfg).value <= 2 + 1e-6


def test_weighted_rules_and_ties():
    g = gr.join(gr.cycle(5), gr.complete(2))
    w = np.array([1, 1, 1, 1, 1, 3, 0.5])
    up = beta_upper(g, w)
    assert up.provenance == "join-rule" and up.value == pytest.approx(3)
    # the cycle rule needs uniform weights
    w = [1, 1.2, 1, 1, 1]
    up = beta_upper(gr.cycle(5), w)
    assert up.provenance == "theta"
    assert up.value == pytest.approx(lovasz_theta(gr.cycle(5), w).value)
    assert up.value > gr.weighted_independence(gr.cycle(5), w)[0]


def test_estimate_validation():
    with pytest.raises(ValueError):
        beta_estimate(gr.cycle(5), [1, 1, 1, 1, -1])
    with pytest.raises(ValueError):
        beta_upper(gr.cycle(5), [1, 1])


def test_estimate_to_dict():
    d = beta_estimate(gr.cycle(5), config=FAST).to_dict()
    assert d["upper_provenance"] == "cycle-rule"
    assert d["graph"]["n"] == 5


def test_gse_fourteen_qubits():
    strings = edge_saur(gr.anticycle(7))
    report = gse_bound([(1.0, s) for s in strings])
    assert report.rows[0].bound == pytest.approx(np.sqrt(7 * C7BAR_THETA), abs=1e-5)
    assert report.bound <= report.rows[0].bound + 1e-12
    assert report.reference == pytest.approx(1 + 2 * np.sqrt(2), abs=1e-6)
    lam = 1 + 2 * np.sqrt(2)
    assert lam <= report.bound and report.bound - lam < 0.015
    assert report.to_dict()["reference_certified"] is False


def test_gse_single_nonzero_term():
    strings = standard_saur(gr.cycle(5))
    terms = [(1.0 if i == 0 else 0.0, s) for i, s in enumerate(strings)]
    report = gse_bound(terms, reference=False)
    rows = {r.label: r for r in report.rows}
    assert rows["t=1"].bound == pytest.approx(1)
    assert rows["t=0"].bound == pytest.approx(np.sqrt(beta_upper(gr.cycle(5)).value))
    assert rows["t=0"].bound >= 1


def test_gse_errors():
    with pytest.raises(ValueError):
        gse_bound([])
    with pytest.raises(ValueError):
        gse_bound([(0.0, "XX"), (0.0, "ZZ")])


def test_gse_optimized_row_helps_on_skewed_coefficients():
    terms = [(3.0, "XI"), (1.0, "ZI"), (0.5, "IX"), (2.0, "IZ"), (1.0, "XX")]
    report = gse_bound(terms, reference=False)
    lam = np.abs(np.linalg.eigvalsh(PauliSumOperator([(a, parse_pauli(s)) for a, s in terms]).to_matrix())).max()
    assert report.rows[-1].label == "optimized"
    assert report.rows[-1].bound <= min(r.bound for r in report.rows[:3]) + 1e-12
    assert lam <= report.bound + 1e-8


def test_gse_sound_on_random_hamiltonians(rng):
    for _ in range(20):
        n = int(rng.integers(1, 6))
        labels = ["".join(rng.choice(list("IXYZ"), n)) for _ in range(int(rng.integers(1, 6)))]
        coeffs = rng.standard_normal(len(labels))
        report = gse_bound(list(zip(coeffs, labels)), reference=False, iterations=40)
        h = PauliSumOperator([(a, parse_pauli(s)) for a, s in zip(coeffs, labels)])
        spec = np.linalg.eigvalsh(h.to_matrix())
        assert max(abs(spec[0]), abs(spec[-1])) <= report.bound + 1e-8


def variance_sum(mats, psi):
    return sum(np.vdot(psi, m @ m @ psi).real - np.vdot(psi, m @ psi).real ** 2 for m in mats)


def random_states(d, count, rng):
    psi = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
    return psi / np.linalg.norm(psi, axis=1, keepdims=True)


def test_uncertainty_qubit(rng):
    mats = [to_matrix(parse_pauli(s)) for s in "XYZ"]
    bound = uncertainty_bound(mats, gr.complete(3))
    assert float(bound) == pytest.approx(2, abs=1e-7)
    assert all(variance_sum(mats, psi) >= 2 - 1e-9 for psi in random_states(2, 500, rng))
    z = uncertainty_bound([parse_pauli("Z")], gr.complete(1))
    assert float(z) == pytest.approx(0, abs=1e-8)


def test_uncertainty_c7bar_strings(rng):
    ops = [parse_pauli(s) for s in C7BAR_STRINGS]
    g = frustration_graph(ops)
    bound = uncertainty_bound(ops, g)
    assert float(bound) == pytest.approx(7 - C7BAR_THETA, abs=1e-5)
    assert float(bound) == pytest.approx(4.890084, abs=1e-6)
    mats = [to_matrix(o) for o in ops]
    assert min(variance_sum(mats, psi) for psi in random_states(8, 1000, rng)) >= float(bound) - 1e-9
    # dense path on the same family agrees
    assert float(uncertainty_bound(mats, g)) == pytest.approx(float(bound), abs=1e-8)


def test_uncertainty_general_observables(rng):
    # rescaled and non-dichotomic observables still give a valid bound
    mats = [2.0 * to_matrix(parse_pauli("X")), np.diag([0.3, -1.0])]
    g = gr.empty_graph(2)
    bound = uncertainty_bound(mats, g)
    assert all(variance_sum(mats, psi) >= float(bound) - 1e-9 for psi in random_states(2, 500, rng))
    with pytest.raises(ValueError):
        uncertainty_bound([to_matrix(parse_pauli("X"))], gr.complete(2))


def test_uncertainty_rejects_wrong_graph():
    mats = [to_matrix(parse_pauli(s)) for s in ("XI", "IX")]
    with pytest.raises(ValueError):
        uncertainty_bound(mats, gr.complete(2))


def test_purity_bound_values():
    assert purity_bound(gr.complete(3), 2, 1.0) == pytest.approx(1, abs=1e-7)
    assert purity_bound(gr.cycle(5), 4, 0.25) == pytest.approx(0, abs=1e-9)
    with pytest.raises(ValueError):
        purity_bound(gr.cycle(5), 2, 0.3)


def test_purity_maximally_mixed():
    ops = standard_saur(gr.cycle(5))
    rep = purity_check(ops, np.eye(4) / 4)
    assert rep.lhs == pytest.approx(0) and rep.bound == pytest.approx(0, abs=1e-8)
    assert rep.holds


@pytest.mark.parametrize("x", [0.0, 0.3, 0.7, 1.0])
def test_purity_pentagon_tight(x):
    rep_or = pentagon_or()
    ops = saura_from_or(rep_or)
    g = from_edges(5, [(0, 2), (2, 4), (4, 1), (1, 3), (3, 0)])
    # rho = (1 + x * sum_k u_k A_k) / 2 with handle u = e_1, so A_1 = X
    rho = (np.eye(2) + x * to_matrix(parse_pauli("X"))) / 2
    rep = purity_check(ops, rho, g)
    assert rep.family == "SARA"
    assert rep.purity == pytest.approx((1 + x * x) / 2)
    assert rep.lhs == pytest.approx(x * x * np.sqrt(5), abs=1e-9)
    assert rep.bound == pytest.approx(x * x * np.sqrt(5), abs=1e-6)
    assert rep.holds


def test_purity_random_states_respect_bound():
    ops = standard_saur(gr.anticycle(7))
    for seed in range(30):
        rho = random_density(8, seed=seed, rank=1 + seed % 8)
        assert purity_check(ops, rho).holds


def test_purity_trace_orthogonal_family():
    # sqrt(2) P ⊗ |0><0| is traceless with squared norm d = 4 but not a contraction
    p0 = np.diag([1.0, 0.0])
    ops = [np.sqrt(2) * np.kron(to_matrix(parse_pauli(s)), p0) for s in "ZX"]
    g = gr.complete(2)
    for seed in range(20):
        rep = purity_check(ops, random_density(4, seed=seed, rank=1 + seed % 4), g)
        assert rep.family == "trace-orthogonal" and rep.holds
    zero = np.zeros(4)
    zero[0] = 1
    rep = purity_check(ops, np.outer(zero, zero), g)
    assert rep.lhs == pytest.approx(2) and rep.bound == pytest.approx(3, abs=1e-7)
    with pytest.raises(ValueError):
        purity_check([2 * o for o in ops], np.eye(4) / 4, g)


def test_ladder():
    assert ladder_dual_check()
    assert np.linalg.eigvalsh(ladder_dual_matrix())[0] >= -1e-9
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert ladder_value(bell) == pytest.approx(1, abs=1e-12)
    assert ladder_value(np.outer(bell, bell)) == pytest.approx(1, abs=1e-12)
    best = ladder_value_scan(samples=10_000, seed=0)
    assert best <= 1 + 1e-9
    assert best == pytest.approx(1, abs=1e-6)


def test_lower_never_exceeds_theta_on_corpus(rng):
    for _ in range(6):
        n = int(rng.integers(4, 8))
        g = from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5])
        est = beta_estimate(g, config=SeeSawConfig(restarts=2, max_iters=100))
        assert gr.independence_number(g) - 1e-9 <= est.lower <= est.upper <= lovasz_theta(g).value + 1e-6
