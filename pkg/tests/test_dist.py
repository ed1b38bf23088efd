import random

import pytest

from anticyclo.dist import (
    WEYL,
    ClassicalChar,
    HomogDist,
    IwasawaScalars,
    OneVarDist,
    UniversalChar,
    ZmodScalars,
    cells_at_level,
    coind_reconstruct,
    coind_slices,
    dirac_table,
    grouplike_series,
    up_slice,
)
from anticyclo.iwasawa import IwasawaAlgebra
from anticyclo.padic import PrecisionError


def random_table(ring, char, level, M, rng, mass_zero=False):
    mu = HomogDist(ring, char, level, M)
    for cell in mu.vals:
        for m in range(M + 1):
            mu.vals[cell][m] = ring.from_int(rng.randrange(ring.mod))
    if mass_zero:
        cells = list(mu.vals)
        first = cells[0]
        total = ring.zero()
        for cell in cells[1:]:
            total = ring.add(total, mu.vals[cell][0])
        mu.vals[first][0] = ring.sub(ring.zero(), total)
    return mu


def random_lambda_table(alg, a_p, level, M, rng):
    ring = IwasawaScalars(alg)
    char = UniversalChar(ring, a_p)
    mu = HomogDist(ring, char, level, M)
    for cell in mu.vals:
        for m in range(M + 1):
            x = alg.zero()
            for j in range(min(3, alg.p - 1)):
                co = [rng.randrange(alg.mod) for _ in range(alg.D)]
                from anticyclo.iwasawa import IwasawaElem
                x = x + IwasawaElem(alg, {j: tuple(co)})
            mu.vals[cell][m] = x
    return mu


@pytest.fixture(scope="module")
def Z5():
    return ZmodScalars(5, 8)


def gl2_random(p, rng):
    while True:
        m = tuple(rng.randrange(-20, 21) for _ in range(4))
        det = m[0] * m[3] - m[1] * m[2]
        if det % p:
            return m


def test_identity_acts_trivially(Z5):
    rng = random.Random(0)
    char = ClassicalChar(Z5, 0)
    mu = random_table(Z5, char, 2, 3, rng)
    assert mu.act_matrix((1, 0, 0, 1)).eq(mu)


def test_gl2_action_composes(Z5):
    # exact in the moment filtration once M is large enough (M >= N - level)
    rng = random.Random(1)
    for k in (0, 2):
        char = ClassicalChar(Z5, k, alpha_star=1)
        mu = random_table(Z5, char, 2, 6, rng)
        for _ in range(5):
            g = gl2_random(5, rng)
            h = gl2_random(5, rng)
            gh = (g[0] * h[0] + g[1] * h[2], g[0] * h[1] + g[1] * h[3],
                  g[2] * h[0] + g[3] * h[2], g[2] * h[1] + g[3] * h[3])
            lhs = mu.act_matrix(h).act_matrix(g)
            rhs = mu.act_matrix(gh)
            assert lhs.eq_filt(rhs)


def test_gl2_action_composes_lambda():
    rng = random.Random(2)
    alg = IwasawaAlgebra(5, N=6, D=3)
    a_p = alg.group_like(1 + 5)
    mu = random_lambda_table(alg, a_p, 2, 4, rng)
    for _ in range(2):
        g = gl2_random(5, rng)
        h = gl2_random(5, rng)
        gh = (g[0] * h[0] + g[1] * h[2], g[0] * h[1] + g[1] * h[3],
              g[2] * h[0] + g[3] * h[2], g[2] * h[1] + g[3] * h[3])
        assert mu.act_matrix(h).act_matrix(g).eq_filt(mu.act_matrix(gh))


def test_weyl_involution(Z5):
    rng = random.Random(3)
    char = ClassicalChar(Z5, 2)
    mu = random_table(Z5, char, 2, 6, rng)
    again = mu.act_matrix(WEYL).act_matrix(WEYL)
    assert again.eq_filt(mu)


def test_res_iwahori_equivariance(Z5):
    # res intertwines the Iwahori actions (Remark 7.1 compatibility)
    rng = random.Random(4)
    char = ClassicalChar(Z5, 2, alpha_star=2)
    mu = random_table(Z5, char, 2, 4, rng)
    for _ in range(5):
        while True:
            g = gl2_random(5, rng)
            if g[2] % 5 == 0 and g[0] % 5:
                break
        lhs = mu.act_matrix(g).res_to_onevar()
        adj = (g[3], -g[1], -g[2], g[0])
        rhs = mu.res_to_onevar().act_sigma(adj)
        assert lhs.eq(rhs)


def test_lemma64_diag_closed_form(Z5):
    # diag(omega,1)^{-1} dual action: mu(U, p*b, n) values shifted with alpha*
    rng = random.Random(5)
    for k, astar in ((0, 3), (2, 2)):
        char = ClassicalChar(Z5, k, alpha_star=astar)
        mu = random_table(Z5, char, 2, 4, rng)
        nu = mu.act_matrix((1, 0, 0, 5))  # ~ diag(omega,1)^{-1} in PGL_2
        for b in range(5):
            for m in range(5):
                lhs = nu.value_at("U", b, 1, m)
                rhs = Z5.smul(mu.value_at("U", 5 * b, 2, m), astar)
                assert Z5.eq(lhs, rhs)


def test_up_slice_eigen_classical(Z5):
    # Prop 7.3 mechanism: U_p phi(mu) = alpha* phi(mu) for every mu
    rng = random.Random(6)
    for k, astar in ((0, 1), (0, 4), (2, 3)):
        char = ClassicalChar(Z5, k, alpha_star=astar)
        mu = random_table(Z5, char, 2, 4, rng)
        lhs = up_slice(mu)
        rhs = mu.res_to_onevar(mu.level - 1).scale(char.alpha_star)
        assert lhs.eq(rhs)


def test_up_slice_eigen_lambda():
    rng = random.Random(7)
    alg = IwasawaAlgebra(5, N=8, D=3)
    a_p = alg.group_like(1 + 5) * alg.from_int(1)
    mu = random_lambda_table(alg, a_p, 2, 2, rng)
    lhs = up_slice(mu)
    rhs = mu.res_to_onevar(mu.level - 1).scale(a_p)
    assert lhs.eq(rhs)


def test_coind_round_trip(Z5):
    rng = random.Random(8)
    char = ClassicalChar(Z5, 0, alpha_star=2)
    for _ in range(10):
        mu = random_table(Z5, char, 2, 3, rng)
        u, v = coind_slices(mu)
        back = coind_reconstruct(Z5, char, 2, 3, u, v)
        assert back.eq(mu)


def test_coind_round_trip_lambda():
    rng = random.Random(9)
    alg = IwasawaAlgebra(5, N=8, D=3)
    a_p = alg.group_like(1 + 5)
    for _ in range(3):
        mu = random_lambda_table(alg, a_p, 2, 2, rng)
        u, v = coind_slices(mu)
        back = coind_reconstruct(mu.ring, mu.char, 2, 2, u, v)
        assert back.eq(mu)


def test_dirac_admissible(Z5):
    char = ClassicalChar(Z5, 0)
    mu = dirac_table(Z5, char, 3, 4, 7, 3)
    ok, a = mu.is_admissible(0)
    assert ok
    # mass p^{-n} style growth: 1-admissible but not 0-admissible
    bad = HomogDist(Z5, char, 3, 0)
    for n_cell in bad.vals:
        bad.vals[n_cell][0] = 1
    # emulate mu(U(a,n)) = p^{-n} by scaling masses at the deepest level only:
    # build from per-level masses via a table whose level-n aggregates are
    # p^{N-n} (valuation N-n, dropping with depth)
    grow = HomogDist(Z5, char, 3, 0)
    for (side, b) in grow.vals:
        grow.vals[(side, b)][0] = 5**(8 - 3) if side == "U" else 0
    ok0, witness = grow.is_admissible(0)
    ok1, _ = grow.is_admissible(1)
    assert not ok0 and witness is not None
    assert ok1


def test_dirac_extension_telescopes(Z5):
    # for a Dirac the partial sum at level n has the exact closed form
    # X(7) ((z_n - a)/p)^m with z_n = z mod p^n; deeper levels telescope
    char = ClassicalChar(Z5, 0)
    mu = dirac_table(Z5, char, 3, 2, 7, 3)
    z = 3 * pow(7, -1, 5**9) % 5**9
    a = z % 5
    for m in (0, 1, 2, 5, 8):
        for n in (2, 3):
            val, err = mu.extend_moment("U", a, 1, m, schedule=list(range(1, n + 1)))
            zn = z % 5**n
            expect = Z5.mul(char.chi_m2_unit(7), pow((zn - a) // 5, m, 5**8))
            assert Z5.eq(val, expect)
        # certified error from the last Cauchy gap covers the true limit
        val, err = mu.extend_moment("U", a, 1, m)
        limit = Z5.mul(char.chi_m2_unit(7), pow((z - a) // 5, m, 5**8))
        assert Z5.val(Z5.sub(val, limit)) >= min(err, 8)


def test_extension_consistency_low_moments(Z5):
    # for m <= k the double sum converges to the stored moment (Prop 5.2);
    # at depth n the Riemann sum agrees mod p^(n - N_lev)
    char = ClassicalChar(Z5, 2, alpha_star=1)
    mu = dirac_table(Z5, char, 3, 3, 2, 9)
    z = 9 * pow(2, -1, 5**9) % 5**9
    a = z % 5
    got, err = mu.extend_moment("U", a, 1, 1)
    assert Z5.val(Z5.sub(got, mu.value_at("U", a, 1, 1))) >= 2


def test_extension_two_schedules(Z5):
    char = ClassicalChar(Z5, 0, alpha_star=1)
    mu = dirac_table(Z5, char, 3, 2, 7, 3)
    a = 3 * pow(7, -1, 5) % 5
    v1, e1 = mu.extend_moment("U", a, 1, 6, schedule=[1, 2, 3])
    v2, e2 = mu.extend_moment("U", a, 1, 6, schedule=[1, 3])
    assert Z5.val(Z5.sub(v1, v2)) >= min(e1, e2)


def test_admissibility_invariance_under_gl2(Z5):
    # Lemma 6.4: the action preserves h-admissibility (h = 0 here)
    rng = random.Random(11)
    char = ClassicalChar(Z5, 0, alpha_star=2)
    mu = dirac_table(Z5, char, 3, 3, 7, 3)
    gens = [(1, 1, 0, 1), (1, 0, 1, 1), (0, 1, 1, 0)]
    for g in gens:
        ok, _ = mu.act_matrix(g).is_admissible(0)
        assert ok
    ok, _ = mu.act_matrix((1, 0, 0, 5)).is_admissible(0)
    assert ok


def test_grouplike_series_specializes():
    alg = IwasawaAlgebra(5, N=6, D=3)
    M = 4
    ser = [7, 5, 25]  # u(w) = 7 + 5w + 25w^2
    out = grouplike_series(alg, ser, -2, M)
    # rho_{x^k} of [u(w)]^{-2} should match u(w)^{-2k/2*...}: for k=2,
    # [u]^{-2} -> u(w)^{... } with chi = x^{-1}: [u] -> u^{-1}? use k=2:
    # rho_{x^2}([u]^{-2}) = u^{-4}... check against direct series power
    from anticyclo.dist import poly_pow
    mod = 5**6
    direct = poly_pow(ser, -4, mod, M)
    for t in range(M + 1):
        got = out[t].specialize(2)
        # truncation: accurate mod 5^D=3 at least
        assert (got - direct[t]) % 5**3 == 0
    # rho_1: [u]^{-2} |-> 1 at t=0, 0 beyond (unit character kills the series)
    assert out[0].rho_one() == 1
    for t in range(1, M + 1):
        assert out[t].rho_one() == 0


def test_value_at_aggregation(Z5):
    rng = random.Random(12)
    char = ClassicalChar(Z5, 0)
    mu = random_table(Z5, char, 2, 3, rng)
    # aggregated mass at level 1 equals the sum of level-2 masses
    for b in range(5):
        total = Z5.zero()
        for t in range(5):
            total = Z5.add(total, mu.vals[("U", b + 5 * t)][0])
        assert Z5.eq(mu.value_at("U", b, 1, 0), total)
