"""Tests for the exact polynomial layer."""

import numpy as np
import pytest
from sympy import Matrix
from sympy.polys.domains import QQ

from errors import InvalidInputError, ParseError, ResourceLimitError, VariableMismatchError
from poly import (
    XYZ,
    absolute_conic,
    bareiss_determinant,
    content,
    discriminant,
    embed,
    equal_up_to_scalar,
    evaluate_at,
    factor_univariate,
    first_subresultant,
    format_polynomial,
    gen,
    normalize,
    parse_polynomial,
    polynomial_ring,
    rational_roots,
    resultant,
    squarefree,
    substitute,
    trial_divide,
)


def test_parse_and_format():
    R = polynomial_ring(XYZ)
    x, y, z = R.gens
    p = parse_polynomial("x^2 - 3/2*x*y + z", R)
    assert p == x**2 - QQ(3, 2) * x * y + z
    assert format_polynomial(p) == "x^2 - 3/2*x*y + z"
    assert parse_polynomial(format_polynomial(p), R) == p


def test_parse_implicit_products():
    R = polynomial_ring(XYZ)
    x, y, z = R.gens
    assert parse_polynomial("2xy^2z - y", R) == 2 * x * y**2 * z - y
    assert parse_polynomial("-x + x", R) == R.zero


def test_parse_error_positions():
    R = polynomial_ring(XYZ)
    with pytest.raises(ParseError) as info:
        parse_polynomial("x + $y", R)
    assert info.value.position == 4

    with pytest.raises(ParseError) as info:
        parse_polynomial("x^2 + 3*y ++ z", R)
    assert info.value.position == 11

    with pytest.raises(ParseError) as info:
        parse_polynomial("x + q", R)
    assert info.value.position == 4

    with pytest.raises(ParseError):
        parse_polynomial("x^", R)
    with pytest.raises(ParseError):
        parse_polynomial("x + *y", R)
    with pytest.raises(ParseError):
        parse_polynomial("1/0*x", R)
    with pytest.raises(ParseError):
        parse_polynomial("   ", R)


def test_parse_error_exit_code():
    assert ParseError("bad", 3).exit_code == 2


def test_embed_by_name(R3, R4):
    x, y, z = R3.gens
    p = embed(x * y - z**2, R4)
    assert p.ring == R4
    assert embed(p, R3) == x * y - z**2
    with pytest.raises(VariableMismatchError):
        embed(R4.gens[3], R3)


def test_content_of_rational_coefficients(R3):
    x, y, z = R3.gens
    assert content(-QQ(2, 3) * x**2 + QQ(4, 3) * y * z) == QQ(2, 3)
    assert content(QQ(3, 4) * x + QQ(5, 6) * y) == QQ(1, 12)
    assert content(R3.zero) == 0
    assert normalize(QQ(3, 4) * x + QQ(5, 6) * y) == 9 * x + 10 * y


def test_normalize_and_scalar_equality(R3):
    x, y, z = R3.gens
    p = -QQ(2, 3) * x**2 + QQ(4, 3) * y * z
    assert normalize(p) == x**2 - 2 * y * z
    assert equal_up_to_scalar(p, x**2 - 2 * y * z)
    assert not equal_up_to_scalar(p, x**2 + 2 * y * z)


def test_discriminant_of_quadratic():
    R = polynomial_ring(("x", "y"))
    x, y = R.gens
    assert resultant(x**2 - y, 2 * x, "x") == -4 * y
    assert discriminant(x**2 - y, "x") == y


def test_discriminant_needs_degree_two(R3):
    x, y, _ = R3.gens
    with pytest.raises(InvalidInputError):
        discriminant(x + y, "x")


def test_resultant_vanishes_on_common_root():
    R = polynomial_ring(("x", "y"))
    x, y = R.gens
    assert resultant((x - y) * (x + 1), (x - y) * (x - 2), "x") == 0


def test_resultant_specialization_agrees():
    R = polynomial_ring(("x", "y"))
    x, y = R.gens
    rng = np.random.default_rng(7)

    def sample(degree):
        p = x**degree
        for e in range(degree):
            c = [int(v) for v in rng.integers(-3, 4, size=2)]
            p += (c[0] + c[1] * y) * x**e
        return p

    for _ in range(100):
        p, q = sample(int(rng.integers(1, 4))), sample(int(rng.integers(1, 4)))
        y0 = int(rng.integers(-5, 6))
        lhs = evaluate_at(resultant(p, q, "x"), {"y": y0})
        rhs = resultant(evaluate_at(p, {"y": y0}), evaluate_at(q, {"y": y0}), "x")
        assert lhs == rhs


def test_bareiss_matches_sympy_det():
    R = polynomial_ring(("x",))
    rng = np.random.default_rng(3)
    for _ in range(20):
        rows = rng.integers(-5, 6, size=(4, 4)).tolist()
        entries = [[R(int(v)) for v in row] for row in rows]
        assert bareiss_determinant(entries) == R(int(Matrix(rows).det()))


def test_first_subresultant_common_root():
    R = polynomial_ring(("x",))
    x = R.gens[0]
    s1, s0 = first_subresultant((x - 1) * (x - 2), (x - 1) * (x + 5), "x")
    assert s1 == 7
    assert s0 == -7


def test_trial_divide(R3):
    x, _, _ = R3.gens
    A = absolute_conic(R3)
    quotient, k = trial_divide(A**3 * x, A)
    assert k == 3
    assert quotient == x
    assert trial_divide(x**2, A) == (x**2, 0)


def test_squarefree_binary_form(R3):
    x, y, z = R3.gens
    p = 5 * (y - z)**3 * (y + 2 * z)**2 * (y**2 + z**2) * z**2
    sqf = squarefree(p)
    assert sqf.part(1) == [y**2 + z**2]
    assert sorted(sqf.part(2), key=str) == sorted([y + 2 * z, z], key=str)
    assert sqf.part(3) == [y - z]
    assert sqf.expand() == p


def test_squarefree_reconstructs_random_polynomials():
    R = polynomial_ring(("x",))
    x = R.gens[0]
    rng = np.random.default_rng(11)
    for _ in range(100):
        p = R(int(rng.integers(1, 6)))
        degree = 0
        while True:
            d = int(rng.integers(1, 4))
            k = int(rng.integers(1, 4))
            if degree + d * k > 16:
                break
            f = x**d + sum(int(c) * x**e for e, c in enumerate(rng.integers(-4, 5, size=d)))
            p *= f**k
            degree += d * k
        if p.is_ground:
            continue
        sqf = squarefree(p)
        assert sqf.expand() == p
        factors = [f for f, _ in sqf.factors]
        for i, f in enumerate(factors):
            assert f.gcd(f.diff(x)).is_ground
            for g in factors[i + 1:]:
                assert f.gcd(g).is_ground

        product = R.one
        for f, k in factor_univariate(p):
            product *= f**k
        assert equal_up_to_scalar(product, p)


def test_factor_degree_limit(R3):
    _, y, z = R3.gens
    with pytest.raises(ResourceLimitError):
        factor_univariate(y**30 + z**30, max_degree=20)


def test_rational_roots():
    R = polynomial_ring(("x",))
    x = R.gens[0]
    assert rational_roots((2 * x - 1) * (x + 3) * (x**2 + 1)) == [QQ(-3), QQ(1, 2)]
    assert rational_roots(x**2 - 2) == []


def test_substitute_keeps_ring(R4):
    x, y, z, w = R4.gens
    p = substitute(x * w + w**2, "w", y - z)
    assert p == x * (y - z) + (y - z)**2
    assert gen(R4, "w") == w
