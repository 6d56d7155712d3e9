import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modlift.rings import (
    AffineSystem,
    Consistent,
    Inconsistent,
    Mat,
    NonMonicDivisor,
    NotDivisible,
    NotInKernel,
    PolyFp,
    PolyInt,
    PrimeCtx,
    Singular,
    binom_div_p,
    is_prime,
    merge_kernel_element,
    solve_affine,
    split_kernel_element,
)


def test_prime_ctx_validation():
    ctx = PrimeCtx(7)
    assert ctx.p2 == 49
    with pytest.raises(ValueError):
        PrimeCtx(6)
    with pytest.raises(ValueError):
        PrimeCtx(1)


def test_is_prime_small():
    primes = [n for n in range(60) if is_prime(n)]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]


# --- matrix arithmetic ---------------------------------------------------


def test_mat_mul_identity(rng):
    m = Mat(4, rng.integers(0, 4, (3, 3)))
    assert Mat.identity(4, 3) @ m == m
    assert m @ Mat.identity(4, 3) == m


def test_mat_mul_x_squared():
    x = Mat(2, [[0, 1], [1, 1]])
    assert (x @ x).rows() == ((1, 1), (1, 0))  # x^2 = x + 1


def test_companion_power():
    c = Mat(4, [[0, 0, -1], [1, 0, -1], [0, 1, -1]])
    assert (c ** 4).is_identity()


def test_mat_mul_mismatch():
    with pytest.raises(ValueError):
        Mat(2, [[1]]) @ Mat(2, [[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        Mat(2, [[1]]) @ Mat(4, [[1]])


def test_mat_inv_examples():
    assert Mat.identity(9, 3).inv() == Mat.identity(9, 3)
    x = Mat(2, [[0, 1], [1, 1]])
    assert x.inv().rows() == ((1, 1), (1, 0))
    with pytest.raises(Singular):
        Mat(4, [[2, 0], [0, 2]]).inv()


def test_mat_inv_random(rng):
    for p in (2, 3, 5):
        p2 = p * p
        for _ in range(25):
            m = Mat(p2, rng.integers(0, p2, (4, 4)))
            try:
                inv = m.inv()
            except Singular:
                with pytest.raises(Singular):
                    m.reduce(p).inv()
                continue
            assert (inv @ m).is_identity()
            assert (m.reduce(p).inv() @ m.reduce(p)).is_identity()


def test_zero_dimensional_matrices():
    z = Mat(4, [])
    assert z.n == 0
    assert (z @ z).is_identity()
    assert z.inv() == z


def test_split_kernel_examples():
    assert split_kernel_element(Mat.identity(9, 2), 3) == Mat.zeros(3, 2)
    assert split_kernel_element(Mat(4, [[1, 2], [0, 1]]), 2) == Mat(2, [[0, 1], [0, 0]])
    assert split_kernel_element(Mat(9, [[4, 3], [6, 4]]), 3) == Mat(3, [[1, 1], [2, 1]])
    with pytest.raises(NotInKernel):
        split_kernel_element(Mat(4, [[0, 1], [1, 0]]), 2)


@settings(max_examples=60, deadline=None)
@given(
    p=st.sampled_from([2, 3, 5]),
    data=st.data(),
)
def test_split_merge_round_trip(p, data):
    n = data.draw(st.integers(min_value=1, max_value=4))
    entries = data.draw(
        st.lists(
            st.lists(st.integers(min_value=0, max_value=p - 1), min_size=n, max_size=n),
            min_size=n,
            max_size=n,
        )
    )
    x = Mat(p, entries)
    assert split_kernel_element(merge_kernel_element(x, p), p) == x


# --- affine solving ------------------------------------------------------


def test_solve_identity_system():
    res = solve_affine(AffineSystem(2, [[1, 0], [0, 1]], [1, 0]))
    assert isinstance(res, Consistent)
    assert list(res.particular) == [1, 0]
    assert res.nullspace == ()


def test_solve_underdetermined():
    res = solve_affine(AffineSystem(2, [[1, 1]], [1]))
    assert isinstance(res, Consistent)
    assert list(res.particular) == [1, 0]
    assert len(res.nullspace) == 1
    assert list(res.nullspace[0]) == [1, 1]


def test_solve_inconsistent():
    sys = AffineSystem(2, [[1, 0], [1, 0]], [0, 1])
    res = solve_affine(sys)
    assert isinstance(res, Inconsistent)
    assert list(res.functional) == [1, 1]
    assert sys.checks_refutation(res.functional)


def test_solve_empty_rows():
    res = solve_affine(AffineSystem(3, np.zeros((0, 2), dtype=int), []))
    assert isinstance(res, Consistent)
    assert len(res.nullspace) == 2


def _enumerate_solutions(sys):
    p, cols = sys.p, sys.cols
    count = 0
    for idx in range(p ** cols):
        x = [(idx // p ** j) % p for j in range(cols)]
        if sys.is_solution(x):
            count += 1
    return count


def test_solve_agrees_with_enumeration(rng):
    for _ in range(40):
        p = int(rng.choice([2, 3]))
        rows = int(rng.integers(1, 6))
        cols = int(rng.integers(1, 6))
        sys = AffineSystem(p, rng.integers(0, p, (rows, cols)), rng.integers(0, p, rows))
        res = solve_affine(sys)
        n_solutions = _enumerate_solutions(sys)
        if isinstance(res, Consistent):
            assert sys.is_solution(res.particular)
            for v in res.nullspace:
                assert not ((sys.matrix @ v) % p).any()
            assert n_solutions == p ** len(res.nullspace)
        else:
            assert n_solutions == 0
            assert sys.checks_refutation(res.functional)


# --- binomials -----------------------------------------------------------


def test_binom_examples():
    assert binom_div_p(2, 1, PrimeCtx(2)) == 1
    assert binom_div_p(9, 3, PrimeCtx(3)) == 1
    assert binom_div_p(25, 5, PrimeCtx(5)) != 0
    with pytest.raises(NotDivisible):
        binom_div_p(4, 1, PrimeCtx(3))


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_binom_nonzero_on_prime_powers(p, n):
    assert binom_div_p(p ** n, p ** (n - 1), PrimeCtx(p)) != 0


# --- polynomials ---------------------------------------------------------


def test_poly_product_t4_minus_1():
    prod = PolyInt([-1, 1]) * PolyInt([1, 1]) * PolyInt([1, 0, 1])
    assert prod == PolyInt.x_pow_minus_one(4)


def test_poly_divmod_detects_nondivisor():
    q, r = PolyInt.x_pow_minus_one(4).divmod_exact(PolyInt([1, 1, 1]))
    assert not r.is_zero()


def test_poly_reduction_mod_3():
    lhs = PolyInt([1, 1, 1]).reduce(3)
    rhs = PolyFp.t_minus_one(3) ** 2
    assert lhs == rhs


def test_poly_divmod_requires_monic():
    with pytest.raises(NonMonicDivisor):
        PolyInt([1, 0, 1]).divmod_exact(PolyInt([1, 2]))


def test_poly_eval_mat_horner():
    c = Mat(4, [[0, 3], [1, 3]])  # companion of t^2 + t + 1 over Z/4
    val = PolyInt([1, 1, 1]).eval_mat(c)
    assert val.is_zero()


@settings(max_examples=60, deadline=None)
@given(
    a=st.lists(st.integers(min_value=-9, max_value=9), min_size=0, max_size=6),
    b=st.lists(st.integers(min_value=-9, max_value=9), min_size=0, max_size=4),
)
def test_poly_divmod_exact_recovers_factor(a, b):
    divisor = PolyInt(b + [1])  # force monic
    prod = PolyInt(a) * divisor
    q, r = prod.divmod_exact(divisor)
    assert r.is_zero()
    assert q == PolyInt(a)


def test_layout_round_trip():
    from modlift.rings import UnknownLayout

    lay = UnknownLayout(3, 4)
    seen = set()
    for g in range(3):
        for r in range(4):
            for c in range(4):
                j = lay.col(g, r, c)
                assert lay.describe(j) == (g, r, c)
                seen.add(j)
    assert seen == set(range(lay.cols))


def test_matmul_object_fallback_near_prime_cap(rng):
    # p close to 2^15 puts single dot products past int64 range for n >= 8,
    # which must route through the exact object-dtype fallback
    p = 32749
    mod = p * p
    a = Mat(mod, rng.integers(0, mod, (8, 8)))
    b = Mat(mod, rng.integers(0, mod, (8, 8)))
    prod = a @ b
    i, j = 3, 5
    expected = sum(int(a.a[i, k]) * int(b.a[k, j]) for k in range(8)) % mod
    assert int(prod.a[i, j]) == expected


def test_solve_agreement_wider_systems(rng):
    # up to 8 unknowns, enumeration done vectorized
    for _ in range(6):
        p = int(rng.choice([2, 3]))
        cols = int(rng.integers(6, 9))
        rows = int(rng.integers(2, 5))
        sys = AffineSystem(p, rng.integers(0, p, (rows, cols)), rng.integers(0, p, rows))
        res = solve_affine(sys)
        idx = np.arange(p ** cols)
        digits = (idx[:, None] // p ** np.arange(cols)[None, :]) % p
        residual = (digits @ sys.matrix.T - sys.rhs) % p
        count = int((residual == 0).all(axis=1).sum())
        if isinstance(res, Consistent):
            assert count == p ** len(res.nullspace)
        else:
            assert count == 0
