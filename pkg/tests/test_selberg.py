import time

import pytest

from selzeta.graphs import GraphSum, IndexTuple, OrderedRootedGraph, wedge_chain
from selzeta.mzv import MZVIndex, mzv_eval
from selzeta.selberg import (
    ExponentAssignment,
    QuadratureError,
    beta_prototype,
    beta_taylor_target,
    integrate_graph,
    integrate_sum,
    selberg_component,
    sum_relation_defect,
    taylor_coefficients,
)


def G(n, roots, *edges):
    return OrderedRootedGraph(n, frozenset(roots), tuple(edges))


def alpha3(a, b, ab=0.1):
    return ExponentAssignment({(1, 2): ab, (1, 3): a, (2, 3): b})


def test_beta_identity():
    start = time.time()
    for a, b in [(0.1, 0.2), (0.5, 0.5)]:
        got = integrate_graph(G(3, {1, 2}, (2, 3)), alpha3(a, b), tol=1e-12)
        assert abs(got.value - beta_prototype(a, b)) < 1e-8
    assert time.time() - start < 1.0


def test_beta_small_exponent_limit():
    # the value tends to 1 as both exponents shrink; 0.03 is the engine floor
    got = integrate_graph(G(3, {1, 2}, (2, 3)), alpha3(0.03, 0.03), tol=1e-9)
    assert abs(got.value - 1.0) < 0.01
    assert abs(got.value - beta_prototype(0.03, 0.03)) < 1e-5


def test_non_tree_is_exact_zero():
    got = integrate_graph(G(4, {1, 2}, (1, 2), (3, 4)), ExponentAssignment.uniform(4, 0.1))
    assert got.value == 0.0 and got.evaluations == 0


def test_sum_linearity():
    alpha = ExponentAssignment.uniform(4, 0.1)
    gs = wedge_chain(IndexTuple(2, 4, (2, 2)))
    total = integrate_sum(gs, alpha, tol=1e-9)
    parts = sum(integrate_graph(g, alpha, tol=1e-9).value * c for g, c in gs.terms.items())
    assert abs(total.value - parts) < 1e-14
    empty = GraphSum(4, frozenset({1, 2}), {})
    assert integrate_sum(empty, alpha).value == 0.0
    diff = GraphSum.single(G(4, {1, 2}, (2, 3), (2, 4))) - GraphSum.single(G(4, {1, 2}, (2, 3), (2, 4)))
    assert integrate_sum(diff, alpha).value == 0.0


def test_scheme_cross_check():
    alpha = ExponentAssignment.uniform(4, 0.1)
    g = G(4, {1, 2}, (2, 3), (2, 4))
    de = integrate_graph(g, alpha, tol=1e-8, method="de")
    ha = integrate_graph(g, alpha, tol=1e-4, method="halton")
    assert abs(de.value - ha.value) < 3 * max(ha.err_estimate, 1e-4)


def test_three_dimensional_star_against_product_form():
    # star at vertex 2 with equal exponents: the integrand is symmetric in the
    # three free coordinates, so the simplex integral is 1/3! of the product
    # of one-dimensional Beta factors (cross pairs carry negligible exponents)
    g = G(5, {1, 2}, (2, 3), (2, 4), (2, 5))
    a, b = 0.15, 0.25
    alphas = {}
    for k in (3, 4, 5):
        alphas[(1, k)] = a
        alphas[(2, k)] = b
    for p in [(1, 2), (3, 4), (3, 5), (4, 5)]:
        alphas[p] = 1e-9
    got = integrate_graph(G(5, {1, 2}, (2, 3), (2, 4), (2, 5)), ExponentAssignment(alphas), tol=1e-5)
    want = beta_prototype(a, b) ** 3 / 6.0
    assert got.evaluations > 1000
    assert abs(got.value - want) < max(5e-3 * want, 3 * got.err_estimate)


def test_dimension_guard():
    with pytest.raises(QuadratureError):
        integrate_graph(G(6, {1, 2}, (2, 3), (3, 4), (4, 5), (5, 6)), ExponentAssignment.uniform(6, 0.1))


def test_roots_only_value():
    got = integrate_graph(G(2, {1, 2}), ExponentAssignment.uniform(2, 0.3))
    assert got.value == 1.0
    got3 = integrate_graph(
        G(3, {1, 2, 3}), ExponentAssignment.uniform(3, 2.0), root_values={1: 0.0, 2: 1.0, 3: 0.25}
    )
    assert abs(got3.value - (0.25**2 * 0.75**2)) < 1e-15


def test_taylor_coefficients_match_gamma_expansion():
    start = time.time()
    gs = wedge_chain(IndexTuple(2, 3, (2,)))
    for a, b in [(1.0, 1.0), (0.1, 0.2)]:
        direction = ExponentAssignment({(1, 2): max(a, b), (1, 3): a, (2, 3): b})
        coeffs, residual = taylor_coefficients(gs, direction, 4, tol=1e-11)
        target = beta_taylor_target(a, b, 4)
        for got, want in zip(coeffs, target):
            assert abs(got - want) < 1e-6
        assert residual < 1e-7
    direction = ExponentAssignment({(1, 2): 1.0, (1, 3): 1.0, (2, 3): 1.0})
    coeffs, _ = taylor_coefficients(gs, direction, 4, tol=1e-11)
    assert abs(coeffs[0] - 1.0) < 1e-7
    assert abs(coeffs[1]) < 1e-6
    assert abs(coeffs[2] + mzv_eval(MZVIndex((2,)))) < 1e-6
    assert time.time() - start < 10.0


def test_taylor_fit_residual_threshold():
    gs = wedge_chain(IndexTuple(2, 3, (2,)))
    direction = ExponentAssignment({(1, 2): 1.0, (1, 3): 1.0, (2, 3): 1.0})
    with pytest.raises(QuadratureError):
        taylor_coefficients(gs, direction, 4, tol=1e-9, method="polyfit", fit_degree=2, max_residual=1e-12)


def test_taylor_polyfit_residual_decreases_with_degree():
    gs = wedge_chain(IndexTuple(2, 3, (2,)))
    direction = ExponentAssignment({(1, 2): 1.0, (1, 3): 1.0, (2, 3): 1.0})
    _, res4 = taylor_coefficients(gs, direction, 4, tol=1e-12, method="polyfit", fit_degree=4, t_lo=0.05, t_hi=0.3)
    _, res6 = taylor_coefficients(gs, direction, 4, tol=1e-12, method="polyfit", fit_degree=6, t_lo=0.05, t_hi=0.3)
    assert res6 < res4


def test_sum_relation_three_vertices():
    d, est = sum_relation_defect(3, 2, 3, {}, ExponentAssignment.uniform(3, 0.12), tol=1e-11)
    assert d < 1e-8


def test_sum_relation_four_vertices():
    alpha = ExponentAssignment.uniform(4, 0.1)
    d, _ = sum_relation_defect(4, 3, 4, {}, alpha, tol=1e-10, root_values={1: 0.0, 2: 1.0, 3: 0.45})
    assert d < 1e-7
    for p, partial in [(3, {4: 1}), (3, {4: 2}), (3, {4: 3}), (4, {3: 1}), (4, {3: 2})]:
        d, _ = sum_relation_defect(4, 2, p, partial, alpha, tol=1e-9)
        assert d < 1e-7


def test_sum_relation_scaling_invariance():
    alpha = ExponentAssignment.uniform(3, 0.1)
    for t in (0.5, 1.0, 2.0):
        d, _ = sum_relation_defect(3, 2, 3, {}, alpha.scale(t), tol=1e-11)
        assert d < 1e-8


def test_positivity_of_calibration_family():
    # the single-edge prototype and the attach-to-2 chains that extend it
    for a, b in [(0.1, 0.2), (0.5, 0.5), (1.0, 1.5)]:
        assert integrate_graph(G(3, {1, 2}, (2, 3)), alpha3(a, b), tol=1e-10).value > 0
    alpha = ExponentAssignment.uniform(4, 0.1)
    for entries in [(2, 2), (2, 3)]:
        assert selberg_component(IndexTuple(2, 4, entries), alpha, tol=1e-9).value > 0


def test_exponent_assignment_utilities():
    with pytest.raises(ValueError):
        ExponentAssignment({(1, 2): -0.1})
    al = ExponentAssignment({(1, 2): 0.1, (1, 3): 0.2, (2, 3): 0.3})
    assert al[(2, 1)] == 0.1
    merged = ExponentAssignment({(1, 2): 0.1, (1, 3): 0.2, (2, 3): 0.3, (1, 4): 0.4, (3, 4): 0.5, (2, 4): 0.6}).merge_into(2, 3)
    assert abs(merged[(1, 2)] - 0.3) < 1e-15  # alpha_12 + alpha_13
    assert abs(merged[(2, 4)] - 1.1) < 1e-15  # alpha_24 + alpha_34
    relabeled = al.relabel({1: 1, 3: 2})
    assert relabeled[(1, 2)] == 0.2
    assert relabeled.get((2, 3)) is None
