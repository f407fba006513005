import random

import pytest

from purcat.exact_linalg import (
    IntMatrix,
    InputError,
    LinearSystem,
    Ring,
    ZZ,
    Zmod,
    hstack,
    invert_unimodular,
    kernel_basis,
    smith_normal_form,
    solve_linear,
)

from helpers import (
    brute_solve_column,
    expected_smith_diagonal,
    mat,
    random_matrix_rows,
)

RINGS = [ZZ, Zmod(2), Zmod(5), Zmod(6), Zmod(8), Zmod(12)]


def check_decomposition(a, ring, snf):
    left = ring.reduce_matrix(snf.u @ a @ snf.v)
    assert left == snf.d, f"U A V != D for {a.data} over {ring}"
    ident_r = IntMatrix.identity(a.rows)
    ident_c = IntMatrix.identity(a.cols)
    assert ring.reduce_matrix(snf.u @ snf.u_inv) == ident_r
    assert ring.reduce_matrix(snf.u_inv @ snf.u) == ident_r
    assert ring.reduce_matrix(snf.v @ snf.v_inv) == ident_c
    assert ring.reduce_matrix(snf.v_inv @ snf.v) == ident_c
    # diagonal shape and divisibility chain
    for i in range(snf.d.rows):
        for j in range(snf.d.cols):
            if i != j:
                assert snf.d.at(i, j) == 0
    diag = snf.diagonal()
    m = ring.modulus
    for x, y in zip(diag, diag[1:]):
        xx = x if (m is None or x) else m
        yy = y if (m is None or y) else m
        if xx:
            assert yy % xx == 0, f"divisibility chain broken: {diag}"
        else:
            assert yy == 0
    if m is not None:
        for x in diag:
            assert 0 <= x < m
            assert (m % x == 0) if x else True, f"diagonal {x} does not divide {m}"
    else:
        assert all(x >= 0 for x in diag)


def test_smith_frozen_examples():
    snf = smith_normal_form(mat([[2, 4], [6, 8]]), ZZ)
    assert snf.diagonal() == [2, 4]

    snf = smith_normal_form(mat([[3]]), Zmod(6))
    assert snf.diagonal() == [3]

    snf = smith_normal_form(IntMatrix.identity(3), ZZ)
    assert snf.d == IntMatrix.identity(3)


def test_smith_empty_and_zero():
    snf = smith_normal_form(IntMatrix.zeros(2, 3), ZZ)
    assert snf.diagonal() == [0, 0]
    snf = smith_normal_form(IntMatrix.zeros(0, 3), ZZ)
    assert snf.d.rows == 0 and snf.d.cols == 3
    snf = smith_normal_form(IntMatrix.zeros(3, 0), Zmod(4))
    assert snf.d.cols == 0


@pytest.mark.parametrize("ring", RINGS)
def test_smith_random_against_minors_oracle(ring):
    rng = random.Random(1801 + (ring.modulus or 0))
    for _ in range(60):
        r = rng.randint(0, 4)
        c = rng.randint(0, 4)
        rows = random_matrix_rows(rng, r, c)
        a = ring.reduce_matrix(mat(rows)) if r and c else IntMatrix.zeros(r, c)
        snf = smith_normal_form(a, ring)
        check_decomposition(a, ring, snf)
        lifted = a.to_lists()
        expected = expected_smith_diagonal(lifted, ring.modulus)
        assert snf.diagonal() == expected, (
            f"diagonal {snf.diagonal()} != oracle {expected} for {lifted} over {ring}"
        )


def test_smith_is_deterministic():
    rng = random.Random(77)
    for _ in range(20):
        rows = random_matrix_rows(rng, 3, 3)
        a = mat(rows)
        first = smith_normal_form(a, ZZ)
        second = smith_normal_form(a, ZZ)
        assert first == second


def test_solve_frozen_examples():
    assert solve_linear(mat([[2]]), mat([[3]]), ZZ) is None
    x = solve_linear(mat([[2]]), mat([[3]]), Zmod(5))
    assert x == mat([[4]])
    with pytest.raises(InputError):
        solve_linear(mat([[1, 2]]), mat([[1], [2]]), ZZ)


@pytest.mark.parametrize("ring", RINGS)
def test_solve_random(ring):
    rng = random.Random(2202 + (ring.modulus or 0))
    for _ in range(60):
        r = rng.randint(1, 3)
        c = rng.randint(1, 3)
        k = rng.randint(1, 2)
        a = ring.reduce_matrix(mat(random_matrix_rows(rng, r, c, -5, 5)))
        if rng.random() < 0.5:
            # solvable by construction
            x0 = ring.reduce_matrix(mat(random_matrix_rows(rng, c, k, -4, 4)))
            b = ring.reduce_matrix(a @ x0)
        else:
            b = ring.reduce_matrix(mat(random_matrix_rows(rng, r, k, -5, 5)))
        x = solve_linear(a, b, ring)
        if x is not None:
            assert ring.reduce_matrix(a @ x) == b, "returned solution does not verify"
        else:
            # None means at least one column has no solution
            founds = [
                brute_solve_column(a.to_lists(), [b.at(i, j) for i in range(r)],
                                   ring.modulus, bound=8)
                for j in range(k)
            ]
            assert any(f is None for f in founds), (
                f"solver said unsolvable but box search solved every column: "
                f"{a.data} X = {b.data} over {ring}"
            )


def test_kernel_frozen_examples():
    k = kernel_basis(mat([[2]]), Zmod(4))
    assert k == mat([[2]])
    k = kernel_basis(mat([[1]]), ZZ)
    assert k.cols == 0
    k = kernel_basis(IntMatrix.zeros(1, 2), ZZ)
    assert k.cols == 2


@pytest.mark.parametrize("ring", RINGS)
def test_kernel_random(ring):
    rng = random.Random(3303 + (ring.modulus or 0))
    for _ in range(50):
        r = rng.randint(1, 3)
        c = rng.randint(1, 3)
        a = ring.reduce_matrix(mat(random_matrix_rows(rng, r, c, -5, 5)))
        ker = kernel_basis(a, ring)
        if ker.cols:
            assert ring.reduce_matrix(a @ ker).is_zero(), "kernel columns not annihilated"
        # completeness: every kernel vector in a box is a combination
        vals = range(ring.modulus) if ring.modulus else range(-4, 5)
        import itertools
        count = 0
        for cand in itertools.product(vals, repeat=c):
            vec = IntMatrix.from_rows([[v] for v in cand])
            if ring.reduce_matrix(a @ vec).is_zero():
                count += 1
                if count > 40:
                    break
                sol = solve_linear(ker, vec, ring) if ker.cols else (
                    vec if vec.is_zero() else None
                )
                if ker.cols == 0 and vec.is_zero():
                    sol = IntMatrix.zeros(0, 1)
                assert sol is not None, (
                    f"kernel vector {cand} of {a.data} over {ring} not in span"
                )


def test_invert_unimodular():
    u = mat([[1, 2], [0, 1]])
    assert invert_unimodular(u, ZZ) == mat([[1, -2], [0, 1]])
    with pytest.raises(InputError):
        invert_unimodular(mat([[2]]), ZZ)
    inv = invert_unimodular(mat([[3]]), Zmod(7))
    assert inv == mat([[5]])


def test_linear_system_basic():
    sys = LinearSystem(ZZ)
    sys.add_unknown("x", 2, 2)
    left = mat([[2, 0], [0, 2]])
    sys.add_equation([(left, "x", IntMatrix.identity(2))], mat([[4, 2], [0, 6]]))
    sol = sys.solve()
    assert sol is not None
    assert left @ sol["x"] == mat([[4, 2], [0, 6]])


def test_linear_system_two_unknowns():
    # x * [[2]] + [[3]] * y = [[7]] over Z: e.g. x = 2, y = 1
    sys = LinearSystem(ZZ)
    sys.add_unknown("x", 1, 1)
    sys.add_unknown("y", 1, 1)
    one = IntMatrix.identity(1)
    sys.add_equation([(mat([[2]]), "x", one), (mat([[3]]), "y", one)], mat([[7]]))
    sol = sys.solve()
    assert sol is not None
    assert 2 * sol["x"].at(0, 0) + 3 * sol["y"].at(0, 0) == 7


def test_linear_system_unsolvable():
    sys = LinearSystem(ZZ)
    sys.add_unknown("x", 1, 1)
    sys.add_equation([(mat([[2]]), "x", IntMatrix.identity(1))], mat([[3]]))
    assert sys.solve() is None


def test_linear_system_sandwich():
    # L X R = C with known solution over Z/6
    ring = Zmod(6)
    left = mat([[1, 1], [0, 1]])
    right = mat([[1, 2], [0, 1]])
    x0 = mat([[2, 1], [3, 0]])
    c = ring.reduce_matrix(left @ x0 @ right)
    sys = LinearSystem(ring)
    sys.add_unknown("x", 2, 2)
    sys.add_equation([(left, "x", right)], c)
    sol = sys.solve()
    assert sol is not None
    assert ring.reduce_matrix(left @ sol["x"] @ right) == c
