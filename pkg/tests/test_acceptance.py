"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
report.  All tolerances are fixed here; exact statements use rational or
integer arithmetic and carry no tolerance at all.
"""

import itertools
import time
from fractions import Fraction

import numpy as np
import pytest

from weylflow import fixtures, oracles, spectra, transfer
from weylflow.rootdata import Coweight
from weylflow.verify import check_distance_cross_validation, check_metric_suite

THETAS = (Fraction(1, 2), Fraction(1, 4))


def _report(num, text):
    print(f"[PASS] criterion {num}: {text}")


def _strongly_dominant(rank, max_norm):
    out = []
    for cs in itertools.product(range(1, max_norm + 1), repeat=rank):
        if sum(cs) <= max_norm:
            out.append(Coweight(cs))
    return out


def test_criterion_1_rank1_oracle(k33):
    start = time.time()
    edges = fixtures.k33_edges()
    tm = k33.tm(Coweight((1,)), 1)
    assert tm.dim == 18 and tm.m_mu == 2

    b, des = oracles.non_backtracking_matrix(edges)
    pos = {e: k for k, e in enumerate(des)}
    vid = k33.system.vertex_ids
    table = k33.space.table(1)
    perm = np.empty(18, dtype=np.int64)
    for gpos, g in enumerate(table.germs):
        rot = k33.system.root_system.rotations[g.sigma_index].perm
        e = g.chambers[0]
        perm[gpos] = pos[(vid[rot[0]][e], vid[rot[1]][e])]
    assert np.array_equal(tm.counts, b.T[np.ix_(perm, perm)])  # exact rational match

    got = np.linalg.eigvals(tm.dense())
    assert oracles.multiset_close(got, oracles.k33_expected_normalized(), 1e-8)
    elapsed = time.time() - start
    assert elapsed < 1.0
    _report(1, f"transfer matrix = halved edge operator, 18 eigenvalues match ({elapsed:.2f}s)")


def test_criterion_2_trivial_joint_eigenvalue(contexts):
    for name, ctx in contexts.items():
        mats, exact = ctx.family(1)
        dim = mats[0].shape[0]
        ones = np.ones(dim) / np.sqrt(dim)
        residual = max(float(np.linalg.norm(m @ ones - ones)) for m in mats)
        assert residual <= 1e-10, name
        joint = spectra.joint_spectrum(mats, exact=exact)
        assert any(max(abs(c - 1) for c in j.chi) < 1e-9 for j in joint), name
        if ctx.system.kind == "A1~":  # parity flips under the one-step shift
            assert any(abs(j.chi[0] + 1) < 1e-9 for j in joint), name
    _report(2, "chi = 1 with the constant eigenvector everywhere; parity -1 on A1~ graphs")


def test_criterion_3_exact_structural_identities(contexts):
    pairs = 0
    for name, ctx in contexts.items():
        mus = [Coweight(c) for c in itertools.product(range(3), repeat=ctx.rank) if 0 < sum(c) <= 2]
        for n in (1, 2):
            for mu in mus:
                if n + mu.norm > 4:
                    continue
                assert ctx.tm(mu, n).row_sums_ok(), (name, mu, n)
            for m1 in mus:
                for m2 in mus:
                    if n + m1.norm + m2.norm > 4:
                        continue
                    t1, t2, t12 = ctx.tm(m1, n), ctx.tm(m2, n), ctx.tm(m1 + m2, n)
                    assert t12.m_mu == t1.m_mu * t2.m_mu
                    assert np.array_equal(t1.counts @ t2.counts, t12.counts), (name, m1, m2, n)
                    assert np.array_equal(t2.counts @ t1.counts, t12.counts), (name, m1, m2, n)
                    pairs += 1
    _report(3, f"row sums and semigroup/commutation exact over {pairs} products")


def test_criterion_4_metric_suite(contexts):
    start = time.time()
    for name, ctx in contexts.items():
        for radius in (1, 2, 3):
            for res in check_metric_suite(ctx, radius=radius):
                assert res.passed, f"{name}: {res.name} {res.detail}"
        cross = check_distance_cross_validation(ctx, radius=2)
        assert cross.passed, f"{name}: {cross.detail}"
    elapsed = time.time() - start
    assert elapsed < 60.0
    _report(4, f"ultrametric, direction formula, shift laws over all pairs at radius <= 3 ({elapsed:.1f}s)")


def test_criterion_5_lasota_yorke(contexts):
    checked = 0
    for name, ctx in contexts.items():
        for mu in _strongly_dominant(ctx.rank, 2):
            tm = ctx.tm(mu, 2)
            for theta in THETAS:
                rep = transfer.check_lasota_yorke(ctx.space, mu, 2, theta, matrix=tm)
                assert rep.passed, f"{name} mu={tuple(mu.coords)} theta={theta}: {rep.violations[:2]}"
                checked += rep.checked
    _report(5, f"|L phi| <= theta |phi| + 2/theta |phi|_oo over {checked} indicators")


def test_criterion_6_fn_mapping(contexts):
    for name, ctx in contexts.items():
        for mu in [ctx.generators[0], ctx.strong]:
            rep = transfer.check_fn_invariance(ctx.space, mu, 1)
            assert rep.compression_exact, name
        rep = transfer.check_fn_invariance(ctx.space, ctx.strong, 2)
        assert rep.compression_exact and rep.maps_into_smaller, name
    _report(6, "radius compression exact; strongly dominant shifts map F_2 into F_1")


def test_criterion_7_koszul_suite(contexts):
    rng = np.random.default_rng(2024)
    for name, ctx in contexts.items():
        mats, exact = ctx.family(1)
        r = len(mats)
        scale = max(np.linalg.norm(m, 2) for m in mats) + 1.0
        per_op = [np.linalg.eigvals(m) for m in mats]
        joint = spectra.joint_spectrum(mats, exact=exact)
        chars = [j.chi for j in joint]
        chars += [
            tuple(complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)) for _ in range(r))
            for _ in range(100)
        ]
        for chi in chars:
            rec = spectra.koszul_complexes(mats, chi)
            assert rec.max_defect <= 1e-10 * scale, name
            assert sum((-1) ** p * h for p, h in enumerate(rec.cohomology)) == 0, name
            assert rec.homology == tuple(rec.cohomology[r - p] for p in range(r + 1)), name
            far = max(min(abs(c - v) for v in vals) for c, vals in zip(chi, per_op))
            if far > 1e-3:
                assert all(h == 0 for h in rec.cohomology), (name, chi)
        for j in joint:
            rec = spectra.koszul_complexes(mats, j.chi)
            assert rec.cohomology[0] == j.multiplicity, (name, j.chi)
    _report(7, "d o d = 0, Euler = 0, far vanishing, H^0 = joint eigenspace, duality")


def test_criterion_8_parametrix_and_homotopy(contexts):
    rng = np.random.default_rng(4096)
    worst = 0.0
    for name, ctx in contexts.items():
        mats, _ = ctx.family(1)
        r = len(mats)
        exps = [e for e in itertools.product(range(5), repeat=r) if 0 < sum(e) <= 4]
        for _ in range(20):
            chi = tuple(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(r))
            for e in exps:
                bs = spectra.parametrix(mats, e, chi)
                res = spectra.parametrix_residual(mats, e, chi, bs)
                worst = max(worst, res)
                assert res <= 1e-12, (name, e)
        for j in spectra.joint_spectrum(mats)[:5]:
            _, ok = spectra.homotopy_zero_check(
                mats, j.chi, tuple(1 for _ in range(r)), tol=1e-8
            )
            assert ok, (name, j.chi)
    _report(8, f"telescoping identity to 1e-12 (worst {worst:.1e}); homotopy zero to 1e-8")


def test_criterion_9_main_theorem_on_f1(contexts):
    for name, ctx in contexts.items():
        mats, exact = ctx.family(1)
        for theta in (0.25, 0.5):
            report = spectra.taylor_report(mats, theta, exact=exact)
            assert not report.mismatches, (name, theta, report.mismatches[:1])
            joint_set = [j.chi for j in report.joint]
            for chi, member in report.taylor.items():
                is_joint = any(
                    max(abs(a - b) for a, b in zip(chi, jc)) < 1e-6 for jc in joint_set
                )
                assert member == is_joint, (name, theta, chi)
    _report(9, "gated Taylor members coincide with joint eigenvalues at theta = 1/4, 1/2")


def test_criterion_10_a2_fixture_health(a2):
    assert a2.system.validate().passed
    n_ch = a2.system.num_chambers
    assert len(a2.space.table(1)) == 3 * n_ch
    q = a2.system.params[0]
    t1 = a2.tm(Coweight((1, 0)), 1)
    assert t1.m_mu == q * q and t1.row_sums_ok()
    t2 = a2.tm(Coweight((0, 1)), 1)
    assert np.array_equal(t1.counts @ t2.counts, t2.counts @ t1.counts)
    t1b, t2b = a2.tm(Coweight((1, 0)), 2), a2.tm(Coweight((0, 1)), 2)
    assert np.array_equal(t1b.counts @ t2b.counts, t2b.counts @ t1b.counts)
    _report(10, f"presentation valid, dim F_1 = {3 * n_ch}, M = q^2 = {q * q}, generators commute")
