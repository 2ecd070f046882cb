from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weylflow import oracles, transfer
from weylflow.rootdata import Coweight


def test_k33_equals_halved_nonbacktracking(k33):
    tm = k33.tm(Coweight((1,)), 1)
    assert tm.m_mu == 2
    b, des = oracles.non_backtracking_matrix([(i, 3 + j) for i in range(3) for j in range(3)])
    pos = {e: k for k, e in enumerate(des)}
    table = k33.space.table(1)
    vid = k33.system.vertex_ids
    perm = np.empty(len(table), dtype=np.int64)
    for gpos, g in enumerate(table.germs):
        rot = k33.system.root_system.rotations[g.sigma_index].perm
        e = g.chambers[0]
        perm[gpos] = pos[(vid[rot[0]][e], vid[rot[1]][e])]
    assert np.array_equal(tm.counts, b.T[np.ix_(perm, perm)])
    for h in range(tm.dim):
        for g in range(tm.dim):
            assert tm.entry(h, g) in (Fraction(0), Fraction(1, 2))


def test_row_sums_every_fixture(contexts):
    for name, ctx in contexts.items():
        for mu_coords in ([1] * ctx.rank, [2] + [0] * (ctx.rank - 1)):
            tm = ctx.tm(Coweight(tuple(mu_coords)), 1)
            assert tm.row_sums_ok(), name


def test_semigroup_exact_rank1(k33):
    t1 = k33.tm(Coweight((1,)), 2)
    t2 = k33.tm(Coweight((2,)), 2)
    assert np.array_equal(t1.counts @ t1.counts, t2.counts)
    assert t2.m_mu == t1.m_mu**2


def test_semigroup_exact_a2(a2):
    t1 = a2.tm(Coweight((1, 0)), 1)
    t2 = a2.tm(Coweight((0, 1)), 1)
    t12 = a2.tm(Coweight((1, 1)), 1)
    assert t12.m_mu == t1.m_mu * t2.m_mu
    assert np.array_equal(t1.counts @ t2.counts, t12.counts)
    assert np.array_equal(t2.counts @ t1.counts, t12.counts)


def test_counting_depth_independent(a2):
    base = transfer.transfer_matrix(a2.space, Coweight((1, 0)), 1, depth=0)
    deeper = transfer.transfer_matrix(a2.space, Coweight((1, 0)), 1, depth=1)
    assert np.array_equal(base.counts, deeper.counts)


def test_apply_constant_is_fixed(contexts):
    for ctx in contexts.values():
        tm = ctx.tm(ctx.generators[0], 1)
        ones = [Fraction(1)] * tm.dim
        assert transfer.apply(tm, ones) == ones


def test_apply_parity_flips(k33):
    tm = k33.tm(Coweight((1,)), 1)
    table = k33.space.table(1)
    rots = k33.system.root_system.rotations
    phi = [Fraction(1 if rots[g.sigma_index].perm[0] == 0 else -1) for g in table.germs]
    assert transfer.apply(tm, phi) == [-x for x in phi]


@settings(max_examples=20, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3), min_size=18, max_size=18))
def test_apply_sup_norm_contracts(phi):
    from weylflow import fixtures
    from weylflow.verify import context_for

    ctx = context_for("k33", fixtures.load_fixture("k33"))
    tm = ctx.tm(Coweight((1,)), 1)
    out = transfer.apply(tm, phi)
    assert transfer.sup_norm(out) <= transfer.sup_norm(phi)


def test_pi_projection_idempotent(k33):
    space = k33.space
    phi2 = [Fraction(k % 5, 3) for k in range(len(space.table(2)))]
    lifted = transfer.lift_to(space, transfer.pi_projection(space, phi2, 2, 1), 1, 2)
    assert transfer.pi_projection(space, lifted, 2, 1) == transfer.pi_projection(
        space, phi2, 2, 1
    )
    # a function already constant on radius-1 classes projects to itself
    phi1 = [Fraction(k % 7) for k in range(len(space.table(1)))]
    assert transfer.pi_projection(space, transfer.lift_to(space, phi1, 1, 2), 2, 1) == phi1


def test_pi_projection_indicator(k33):
    space = k33.space
    t2 = space.table(2)
    for target in range(0, len(t2), 7):
        phi = [Fraction(0)] * len(t2)
        phi[target] = Fraction(1)
        proj = transfer.pi_projection(space, phi, 2, 1)
        cls = int(t2.restriction_map(1)[target])
        assert all(v in (Fraction(0), Fraction(1)) for v in proj)
        assert all(v == 0 for k, v in enumerate(proj) if k != cls)


def test_pi_projection_contracts_seminorm(k33):
    import random

    space = k33.space
    rng = random.Random(5)
    theta = Fraction(1, 2)
    for _ in range(10):
        phi = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(len(space.table(2)))]
        proj = transfer.lift_to(space, transfer.pi_projection(space, phi, 2, 1), 1, 2)
        assert transfer.lipschitz_seminorm(space, proj, 2, theta) <= transfer.lipschitz_seminorm(
            space, phi, 2, theta
        )


def test_seminorm_examples(k33):
    space = k33.space
    dim = len(space.table(1))
    const = [Fraction(3, 7)] * dim
    assert transfer.lipschitz_seminorm(space, const, 1, Fraction(1, 2)) == 0
    ind = [Fraction(0)] * dim
    ind[0] = Fraction(1)
    assert transfer.lipschitz_seminorm(space, ind, 1, Fraction(1, 2)) == 2
    scaled = [Fraction(-5, 2) * v for v in ind]
    assert transfer.lipschitz_seminorm(space, scaled, 1, Fraction(1, 2)) == 5


def test_seminorm_matches_pairwise_definition(k33):
    import random

    space = k33.space
    table = space.table(2)
    kmat = table.k_matrix()
    theta = Fraction(1, 2)
    rng = random.Random(11)
    for _ in range(5):
        phi = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(len(table))]
        brute = Fraction(0)
        for a in range(len(table)):
            for b in range(len(table)):
                kk = int(kmat[a, b])
                if kk <= 2:
                    brute = max(brute, abs(phi[a] - phi[b]) / theta**kk)
        assert transfer.lipschitz_seminorm(space, phi, 2, theta) == brute


def test_lasota_yorke_k33_radius2(k33):
    rep = transfer.check_lasota_yorke(k33.space, Coweight((1,)), 2, Fraction(1, 2))
    assert rep.passed and rep.checked == 36


def test_lasota_yorke_a2(a2):
    rep = transfer.check_lasota_yorke(
        a2.space, Coweight((1, 1)), 2, Fraction(1, 2), matrix=a2.tm(Coweight((1, 1)), 2)
    )
    assert rep.passed


def test_fn_invariance_k33(k33):
    rep = transfer.check_fn_invariance(k33.space, Coweight((1,)), 1)
    assert rep.compression_exact
    rep2 = transfer.check_fn_invariance(k33.space, Coweight((1,)), 2)
    assert rep2.passed and rep2.maps_into_smaller


def test_zero_shift_is_identity_matrix(k33):
    tm = k33.tm(Coweight((0,)), 1)
    assert tm.m_mu == 1
    assert np.array_equal(tm.counts, np.eye(tm.dim, dtype=np.int64))


def test_budget_guard():
    with pytest.raises(ValueError):
        transfer.transfer_matrix(None, Coweight((1,)), 0)
