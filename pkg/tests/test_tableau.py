import json
from fractions import Fraction

import numpy as np
import pytest

from ccolloc.tableau import (
    ButcherTableau,
    CollocationKernel,
    Family,
    cc_nodes,
    cc_tableau,
    collocation_tableau,
    gauss_legendre_nodes,
    gl_tableau,
    make_tableau,
    nc_tableau,
    newton_cotes_nodes,
    order_of,
)


def exact_collocation(nodes):
    """Lagrange integrals in rational arithmetic (monomial expansion is exact here)."""
    s = len(nodes)
    A = [[None] * s for _ in range(s)]
    b = [None] * s
    for j in range(s):
        poly = [Fraction(1)]
        for k in range(s):
            if k == j:
                continue
            den = nodes[j] - nodes[k]
            new = [Fraction(0)] * (len(poly) + 1)
            for p, a in enumerate(poly):
                new[p + 1] += a / den
                new[p] -= a * nodes[k] / den
            poly = new

        def integral(x):
            return sum(a * x ** (p + 1) / (p + 1) for p, a in enumerate(poly))

        for i in range(s):
            A[i][j] = integral(nodes[i])
        b[j] = integral(Fraction(1))
    return A, b


def test_cc_tableau_s2_trapezoidal():
    tab = cc_tableau(2)
    np.testing.assert_array_equal(tab.c, [0, 1])
    np.testing.assert_allclose(tab.A, [[0, 0], [0.5, 0.5]], atol=1e-16)
    np.testing.assert_allclose(tab.b, [0.5, 0.5], atol=1e-16)


def test_cc_tableau_s3_lobatto_pattern():
    tab = cc_tableau(3)
    np.testing.assert_array_equal(tab.c, [0, 0.5, 1])
    A = [[0, 0, 0], [5 / 24, 1 / 3, -1 / 24], [1 / 6, 2 / 3, 1 / 6]]
    np.testing.assert_allclose(tab.A, A, atol=1e-16)
    np.testing.assert_allclose(tab.b, [1 / 6, 2 / 3, 1 / 6], atol=1e-16)


@pytest.mark.parametrize("s", range(2, 21))
def test_weights_sum_to_one(s):
    assert cc_tableau(s).b.sum() == pytest.approx(1.0, abs=1e-13)


def test_collocation_two_nodes_is_trapezoidal():
    tab = collocation_tableau([0.0, 1.0])
    np.testing.assert_allclose(tab.A, [[0, 0], [0.5, 0.5]], atol=1e-16)


def test_collocation_single_node_is_midpoint():
    tab = collocation_tableau([0.5])
    assert tab.A[0, 0] == 0.5 and tab.b[0] == 1.0


def test_collocation_cc3_matches_closed_form():
    tab = collocation_tableau(cc_nodes(3), Family.CLENSHAW_CURTIS)
    np.testing.assert_allclose(tab.A, cc_tableau(3).A, atol=1e-12)


@pytest.mark.parametrize("s", [2, 3, 4, 5, 7])
def test_newton_cotes_against_rational_oracle(s):
    nodes = [Fraction(i, s - 1) for i in range(s)]
    A, b = exact_collocation(nodes)
    tab = nc_tableau(s)
    np.testing.assert_allclose(tab.A, np.array(A, dtype=float), atol=1e-15)
    np.testing.assert_allclose(tab.b, np.array(b, dtype=float), atol=1e-15)


def test_arbitrary_nodes_against_rational_oracle():
    nodes = [Fraction(1, 10), Fraction(1, 3), Fraction(7, 11), Fraction(9, 10)]
    A, b = exact_collocation(nodes)
    tab = collocation_tableau([float(x) for x in nodes])
    np.testing.assert_allclose(tab.A, np.array(A, dtype=float), atol=1e-14)
    np.testing.assert_allclose(tab.b, np.array(b, dtype=float), atol=1e-14)


def test_collocation_rejects_duplicates_and_unsorted():
    with pytest.raises(ValueError):
        collocation_tableau([0.2, 0.2, 0.7])
    with pytest.raises(ValueError):
        collocation_tableau([0.7, 0.2])


@pytest.mark.parametrize("s", [0, 1])
def test_cc_tableau_needs_two_nodes(s):
    with pytest.raises(ValueError):
        cc_tableau(s)


def test_gauss_legendre_nodes_examples():
    assert gauss_legendre_nodes(1).tolist() == [0.5]
    r = np.sqrt(3) / 6
    np.testing.assert_allclose(gauss_legendre_nodes(2), [0.5 - r, 0.5 + r], atol=1e-16)
    assert gauss_legendre_nodes(3)[1] == 0.5


@pytest.mark.parametrize("s", [1, 2, 5, 10, 31, 64, 100])
def test_gauss_legendre_nodes_residual_and_symmetry(s):
    c = gauss_legendre_nodes(s)
    x = 2 * c - 1
    ref, _ = np.polynomial.legendre.leggauss(s)
    np.testing.assert_allclose(np.sort(x), np.sort(ref), atol=1e-14)
    coef = np.zeros(s + 1)
    coef[s] = 1
    resid = np.abs(np.polynomial.legendre.legval(x, coef))
    if s <= 20:
        assert resid.max() <= 1e-14
    else:
        # one ulp in x moves P_s by about |P_s'(x)| * eps
        slope = np.abs(np.polynomial.legendre.legval(x, np.polynomial.legendre.legder(coef)))
        assert np.all(resid <= 4 * np.finfo(float).eps * (1 + slope))
    np.testing.assert_array_equal(c + c[::-1], np.ones(s))
    assert np.all(np.diff(c) > 0)


def test_newton_cotes_nodes_examples():
    assert newton_cotes_nodes(2).tolist() == [0, 1]
    assert newton_cotes_nodes(3).tolist() == [0, 0.5, 1]
    assert newton_cotes_nodes(5).tolist() == [0, 0.25, 0.5, 0.75, 1]
    with pytest.raises(ValueError):
        newton_cotes_nodes(1)


@pytest.mark.parametrize("family", ["cc", "gl", "nc"])
@pytest.mark.parametrize("s", [2, 3, 6, 11, 20])
def test_tableau_invariants(family, s):
    make_tableau(family, s).check(1e-13)


def test_gl_tableau_matches_known_two_stage():
    tab = gl_tableau(2)
    r = np.sqrt(3) / 6
    np.testing.assert_allclose(tab.A, [[0.25, 0.25 - r], [0.25 + r, 0.25]], atol=1e-16)


def test_check_flags_broken_tableau():
    bad = ButcherTableau([[0, 0], [0.5, 0.4]], [0.5, 0.5], [0, 1], Family.CLENSHAW_CURTIS)
    with pytest.raises(ValueError, match="row sums"):
        bad.check()


def test_family_parsing():
    assert Family.parse("cc") is Family.CLENSHAW_CURTIS
    assert Family.parse("GaussLegendre") is Family.GAUSS_LEGENDRE
    assert Family.parse(Family.NEWTON_COTES) is Family.NEWTON_COTES
    with pytest.raises(ValueError):
        Family.parse("radau")


def test_json_round_trip():
    tab = cc_tableau(5)
    text = tab.to_json()
    data = json.loads(text)
    assert set(data) == {"s", "family", "c", "b", "A"}
    assert data["family"] == "ClenshawCurtis" and data["s"] == 5
    for x in data["b"] + data["A"][2]:
        assert isinstance(x, str)
        assert len(x.split("e")[0].replace("-", "").replace(".", "")) >= 17
    back = ButcherTableau.from_json(text)
    np.testing.assert_array_equal(back.A, tab.A)
    np.testing.assert_array_equal(back.b, tab.b)
    np.testing.assert_array_equal(back.c, tab.c)
    assert back.family is Family.CLENSHAW_CURTIS


def test_json_rejects_inconsistent_s():
    data = json.loads(cc_tableau(3).to_json())
    data["s"] = 4
    with pytest.raises(ValueError):
        ButcherTableau.from_json(json.dumps(data))


def test_kernel_basics():
    k = CollocationKernel.for_family("cc", 4)
    assert k.coeffs[-1] == pytest.approx(1 / 24)
    for c in cc_nodes(4):
        assert abs(k(c)) < 1e-15


def test_order_gl2():
    rep = order_of(CollocationKernel.for_family("gl", 2))
    assert (rep.m, rep.order) == (2, 4)


def test_order_cc3_is_four():
    assert order_of(CollocationKernel.for_family("cc", 3)).order == 4


def test_order_cc2_moment():
    rep = order_of(CollocationKernel.for_family("cc", 2))
    assert rep.m == 0 and rep.order == 2
    assert rep.moments[0] == pytest.approx(-1 / 12)


def test_order_from_float_nodes():
    assert order_of(CollocationKernel.from_nodes(gauss_legendre_nodes(3))).order == 6


@pytest.mark.parametrize("s", range(2, 13))
def test_newton_cotes_order_at_least_s(s):
    rep = order_of(CollocationKernel.for_family("nc", s))
    assert rep.order >= s
    assert rep.order == s + (s % 2)
