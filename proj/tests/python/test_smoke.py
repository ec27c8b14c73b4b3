from fractions import Fraction
from itertools import product

import pytest

import primfield


def poly_text(q, coeffs):
    return f"q={q};" + ",".join(str(c) for c in coeffs)


def brute_irreducible_count(q, n):
    # monic polys of degree n minus products of lower-degree monic factors
    def mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % q
        return tuple(out)

    monic = {d: [tuple(c) + (1,) for c in product(range(q), repeat=d)] for d in range(1, n)}
    reducible = set()
    for d in range(1, n // 2 + 1):
        for a in monic[d]:
            for b in monic[n - d]:
                reducible.add(mul(a, b))
    return q**n - len(reducible)


@pytest.mark.parametrize("q,n", [(2, 6), (3, 4), (5, 3)])
def test_pi_prime_matches_brute_force(q, n):
    assert primfield.pi_prime(q, n) == brute_irreducible_count(q, n)


def test_count_table_rows_sum_to_squarefree_counts():
    rows = primfield.count_table(2, 12)
    assert rows[2][2] == 1
    for n in range(2, 13):
        assert sum(rows[n]) == 2**n - 2 ** (n - 1)


def test_primitive_check_and_erdos_sum():
    x = poly_text(2, [0, 1])
    assert primfield.check_primitive(2, 4, [x, poly_text(2, [0, 1, 1])]) == (x, poly_text(2, [0, 1, 1]))
    layer = [poly_text(2, [a, b, 1]) for a in range(2) for b in range(2)]
    assert primfield.check_primitive(2, 2, layer) is None
    assert primfield.erdos_sum(2, 2, layer) == Fraction(1, 2)


def test_brackets_and_certificate():
    lo, hi = primfield.evaluate_g(2, 0.0, 1e-9)
    assert float(lo) <= 1.0 <= float(hi)
    product_bracket, _, exact = primfield.mertens(2, 5)
    assert exact is not None
    assert float(product_bracket[0]) <= float(Fraction(exact)) <= float(product_bracket[1])
    k0, partial, tail = primfield.t_sequence(2)
    assert k0 == 7
    assert partial + tail < Fraction(1, 2)


def test_errors_and_cli():
    with pytest.raises(ValueError):
        primfield.kth_irreducible(4, 1)
    assert primfield.kth_irreducible(2, 3) == "q=2;1,1,1"
    code, out, _ = primfield.run_cli(["count", "table", "--q", "2", "--max-n", "5"])
    assert code == 0
    assert "\n2,2,1\n" in out
