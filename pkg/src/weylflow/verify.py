"""Executable invariant suite over the bundled (or user-supplied) systems.

Each check returns a CheckResult; `run_suite` drives all of them for one
chamber system and is what the CLI `verify` subcommand and the acceptance
tests call.  Metric checks run exhaustively over germ pairs using the
class-array encoding of the ultrametric (sentinel = radius + 1), with the
explicit region-growing distance cross-checked against it on subsamples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List

import numpy as np

from . import oracles, spectra, transfer
from .chamber import ChamberSystem
from .rootdata import Coweight, translation_parameter
from .sectors import SENTINEL, SectorSpace


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}" + (
            f": {self.detail}" if self.detail else ""
        )


class FixtureContext:
    """Caches germ tables and transfer matrices for one system."""

    def __init__(self, name: str, system: ChamberSystem):
        self.name = name
        self.system = system
        self.space = SectorSpace(system)
        self.rank = system.root_system.rank
        self._tms: Dict[tuple, transfer.TransferMatrix] = {}

    def gen(self, *coords) -> Coweight:
        return Coweight(tuple(coords))

    @property
    def generators(self) -> List[Coweight]:
        r = self.rank
        return [Coweight(tuple(1 if j == i else 0 for j in range(r))) for i in range(r)]

    @property
    def strong(self) -> Coweight:
        return Coweight(tuple(1 for _ in range(self.rank)))

    def tm(self, mu: Coweight, n: int) -> transfer.TransferMatrix:
        key = (tuple(mu.coords), n)
        if key not in self._tms:
            self._tms[key] = transfer.transfer_matrix(self.space, mu, n)
        return self._tms[key]

    def family(self, n: int = 1):
        """Dense generator matrices on F_n plus their exact integer forms."""
        mats, exact = [], []
        for g in self.generators:
            tm = self.tm(g, n)
            mats.append(tm.dense())
            exact.append((tm.counts, tm.m_mu))
        return mats, exact


_CONTEXTS: Dict[int, FixtureContext] = {}


def context_for(name: str, system: ChamberSystem) -> FixtureContext:
    key = id(system)
    if key not in _CONTEXTS:
        _CONTEXTS[key] = FixtureContext(name, system)
    return _CONTEXTS[key]


# ----------------------------------------------------------------------
# individual checks


def check_walk_parameters(ctx: FixtureContext) -> List[CheckResult]:
    from .rootdata import all_minimal_walk_products

    R = ctx.system.root_system
    q = ctx.system.params
    out = []
    coords = _dominant_coords(ctx.rank, 4)
    unique_ok, mult_ok, inv_ok = True, True, True
    detail = []
    values = {}
    for cs in coords:
        mu = Coweight(cs)
        prods = all_minimal_walk_products(R, q, mu)
        if len(prods) != 1:
            unique_ok = False
            detail.append(f"walk products for {cs}: {sorted(prods)}")
        values[cs] = translation_parameter(R, q, mu)
        if values[cs] != max(prods):
            unique_ok = False
    for a in coords:
        for b in coords:
            c = tuple(x + y for x, y in zip(a, b))
            if sum(c) <= 4 and c in values:
                if values[c] != values[a] * values[b]:
                    mult_ok = False
                    detail.append(f"q_t not multiplicative at {a}+{b}")
    from .rootdata import minimal_walk_types

    for cs in coords:
        if sum(cs) == 0:
            continue
        mu = Coweight(cs)
        back = _walk_product_any(R, q, -mu)
        if back != values[cs]:
            inv_ok = False
            detail.append(f"q_t({cs}) = {values[cs]} but reverse walk gives {back}")
    out.append(CheckResult("walk q-product independent of the minimal walk", unique_ok))
    out.append(CheckResult("q_t multiplicative on dominant sums", mult_ok))
    out.append(CheckResult("q_t symmetric under negation", inv_ok, "; ".join(detail)))
    return out


def _walk_product_any(R, q, mu: Coweight) -> int:
    """q-product of a minimal walk to the translate by an arbitrary coweight."""
    from .rootdata import _minimal_walk_data

    dist, preds, start, goal = _minimal_walk_data(R, mu)
    out = 1
    cur = goal.key
    while cur != start.key:
        prev, label = preds[cur][0]
        out *= q[label]
        cur = prev
    return out


def _dominant_coords(rank: int, bound: int):
    out = []
    for cs in itertools.product(range(bound + 1), repeat=rank):
        if 0 < sum(cs) <= bound:
            out.append(cs)
    return sorted(out, key=lambda c: (sum(c), c))


def check_tables(ctx: FixtureContext, max_radius: int = 3) -> List[CheckResult]:
    out = []
    space = ctx.space
    sizes = [len(space.table(n)) for n in range(max_radius + 1)]
    out.append(CheckResult("germ tables built", True, f"sizes {sizes}"))

    surj = True
    regular = True
    details = []
    for n in range(1, max_radius + 1):
        restr = space.table(n).restriction_map(n - 1)
        counts = np.bincount(restr, minlength=len(space.table(n - 1)))
        if np.any(counts == 0):
            surj = False
            details.append(f"radius {n}: restriction misses {int(np.sum(counts == 0))} classes")
        if counts.max() != counts.min():
            regular = False
            details.append(
                f"radius {n}: extension counts range {counts.min()}..{counts.max()}"
            )
    out.append(CheckResult("restriction maps surjective", surj, "; ".join(details)))
    out.append(CheckResult("extension count independent of the germ", regular))
    return out


def check_metric_suite(ctx: FixtureContext, radius: int = 3) -> List[CheckResult]:
    out = []
    space = ctx.space
    table = space.table(radius)
    n = radius
    size = len(table)
    k = table.k_matrix()
    sent = n + 1

    # ultrametric triple inequality
    if size <= 150:
        kk = k.astype(np.int32)
        ok = True
        for b in range(size):
            m = np.minimum(kk[:, b][:, None], kk[b, :][None, :])
            if np.any(kk < m):
                ok = False
                break
        out.append(CheckResult(f"ultrametric triple inequality (radius {radius})", ok))
    else:
        # classes are nested partitions by construction, so the triple
        # inequality is structural; certify the construction instead
        ok = True
        for m in range(n + 1):
            cls = table.restriction_map(m)
            prev = table.restriction_map(m - 1) if m >= 1 else None
            if prev is not None:
                # same class at level m must imply same class at level m-1
                seen = {}
                for pos in range(size):
                    c = int(cls[pos])
                    if c in seen and prev[pos] != prev[seen[c]]:
                        ok = False
                    seen.setdefault(c, pos)
        out.append(
            CheckResult(
                f"ultrametric triple inequality (radius {radius})",
                ok,
                "via nestedness of the agreement partitions",
            )
        )

    # max-over-directions formula
    kis = [table.ki_matrix(i) for i in range(ctx.rank)]
    kmin = kis[0]
    for other in kis[1:]:
        kmin = np.minimum(kmin, other)
    resolved = (k <= n)
    for other in kis:
        resolved &= other <= n
    ok = bool(np.all(k[resolved] == kmin[resolved]))
    out.append(CheckResult(f"direction formula k = min_i k_i (radius {radius})", ok))

    # shift monotonicity and the strong-dominance inequality
    mono_ok, key_ok, dir_ok = True, True, True
    for mu in ctx.generators + [ctx.strong]:
        if mu.norm > n:
            continue
        gate = table.region_classes(mu)
        same = gate[:, None] == gate[None, :]
        smap = space.shift_map(n, mu)
        ksmall = space.table(n - mu.norm).k_matrix()
        kshift = ksmall[np.ix_(smap, smap)]
        if np.any(k[same] < kshift[same]):
            mono_ok = False
        if mu.strongly_dominant and np.any(k[same] < kshift[same] + 1):
            key_ok = False
    out.append(CheckResult(f"shift monotonicity (radius {radius})", mono_ok))
    out.append(CheckResult(f"strong-dominance key inequality (radius {radius})", key_ok))

    for i, mu in enumerate(ctx.generators):
        gate = table.ray_classes(i, 1)
        same = gate[:, None] == gate[None, :]
        smap = space.shift_map(n, mu)
        small = space.table(n - 1)
        ki_small = small.ki_matrix(i)[np.ix_(smap, smap)]
        ki_big = kis[i]
        if not np.all(ki_big[same] == np.minimum(ki_small[same] + 1, sent)):
            dir_ok = False
        for j in range(ctx.rank):
            if j == i:
                continue
            kj_small = small.ki_matrix(j)[np.ix_(smap, smap)]
            kj_big = kis[j]
            if not np.all(kj_big[same] >= kj_small[same]):
                dir_ok = False
    out.append(CheckResult(f"directional shift laws (radius {radius})", dir_ok))
    return out


def check_distance_cross_validation(ctx: FixtureContext, radius: int = 2) -> CheckResult:
    """Region-growing distance must agree with the class-array distance."""
    space = ctx.space
    table = space.table(radius)
    size = len(table)
    idxs = range(size) if size <= 80 else range(0, size, max(1, size // 60))
    ok = True
    detail = ""
    for a in idxs:
        for b in idxs:
            res, _ = space.distance(table.germs[a], table.germs[b])
            fast = table.k_between(a, b)
            if res.k != fast:
                ok = False
                detail = f"pair ({a},{b}): region gives {res.k}, classes give {fast}"
                break
            for i in range(ctx.rank):
                ell = res.k_directional[i]
                enc = table.ki_matrix(i)[a, b]
                want = SENTINEL if enc == radius + 1 else int(enc)
                if ell != want:
                    ok = False
                    detail = f"pair ({a},{b}) direction {i}: {ell} vs {want}"
                    break
        if not ok:
            break
    return CheckResult(f"explicit distance matches class distance (radius {radius})", ok, detail)


def check_transfer_exact(ctx: FixtureContext) -> List[CheckResult]:
    out = []
    mus = [Coweight(cs) for cs in _dominant_coords(ctx.rank, 2)]

    rows_ok = True
    detail = ""
    try:
        for mu in mus:
            for n in (1, 2):
                ctx.tm(mu, n)
    except RuntimeError as exc:
        rows_ok = False
        detail = str(exc)
    out.append(CheckResult("row sums equal M_mu on F_1 and F_2", rows_ok, detail))

    semi_ok = True
    for n in (1, 2):
        for m1 in mus:
            for m2 in mus:
                if n + m1.norm + m2.norm > 4:
                    continue
                tm1, tm2 = ctx.tm(m1, n), ctx.tm(m2, n)
                tm12 = ctx.tm(m1 + m2, n)
                if tm12.m_mu != tm1.m_mu * tm2.m_mu:
                    semi_ok = False
                if not np.array_equal(tm1.counts @ tm2.counts, tm12.counts):
                    semi_ok = False
                if not np.array_equal(tm2.counts @ tm1.counts, tm12.counts):
                    semi_ok = False
    out.append(CheckResult("semigroup and commutation exact", semi_ok))

    sup_ok = all(
        transfer.check_sup_contraction(ctx.space, ctx.tm(mu, n))
        for mu in mus
        for n in (1, 2)
    )
    out.append(CheckResult("sup norm non-expansive", sup_ok))
    return out


def check_lasota_yorke(ctx: FixtureContext) -> List[CheckResult]:
    out = []
    strong_mus = [mu for mu in [ctx.strong] if mu.norm <= 2]
    if ctx.rank == 1:
        strong_mus = [Coweight((1,)), Coweight((2,))]
    for theta in (Fraction(1, 2), Fraction(1, 4)):
        ok = True
        worst = None
        for mu in strong_mus:
            rep = transfer.check_lasota_yorke(
                ctx.space, mu, 2, theta, matrix=ctx.tm(mu, 2)
            )
            ok = ok and rep.passed
            if rep.max_slack is not None and (worst is None or rep.max_slack < worst):
                worst = rep.max_slack
        out.append(
            CheckResult(
                f"seminorm contraction, theta = {theta}",
                ok,
                f"min slack {worst}",
            )
        )
    # non-expansion for merely dominant shifts
    ok = True
    for mu in ctx.generators:
        rep = transfer.check_lasota_yorke(ctx.space, mu, 2, Fraction(1, 2), matrix=ctx.tm(mu, 2))
        ok = ok and rep.passed
    out.append(CheckResult("seminorm non-expansion for dominant shifts", ok))

    # iterated contraction |L^l phi| <= theta^l |phi| + C |phi|_oo, C = (2/theta)/(1-theta)
    theta = Fraction(1, 2)
    mu = ctx.strong if ctx.rank > 1 else Coweight((1,))
    tm = ctx.tm(mu, 2)
    c_iter = (2 / theta) / (1 - theta)
    iter_ok = True
    power = np.eye(tm.dim, dtype=np.int64)
    denom = 1
    for ell in range(1, 4):
        power = power @ tm.counts
        denom *= tm.m_mu
        for g in range(tm.dim):
            image = [Fraction(int(power[h, g]), denom) for h in range(tm.dim)]
            lhs = transfer.lipschitz_seminorm(ctx.space, image, 2, theta)
            phi = [Fraction(0)] * tm.dim
            phi[g] = Fraction(1)
            rhs = theta**ell * transfer.lipschitz_seminorm(ctx.space, phi, 2, theta) + c_iter
            if lhs > rhs:
                iter_ok = False
    out.append(CheckResult("iterated contraction up to the third power", iter_ok))
    return out


def check_fn_invariance(ctx: FixtureContext) -> List[CheckResult]:
    out = []
    comp_ok, col_ok = True, True
    details = []
    for mu in ctx.generators + ([ctx.strong] if ctx.strong.norm > 1 else []):
        rep = transfer.check_fn_invariance(ctx.space, mu, 1)
        comp_ok = comp_ok and rep.compression_exact
        details.extend(rep.details)
    rep = transfer.check_fn_invariance(ctx.space, ctx.strong, 2)
    comp_ok = comp_ok and rep.compression_exact
    if rep.maps_into_smaller is not None:
        col_ok = rep.maps_into_smaller
    details.extend(rep.details)
    out.append(CheckResult("matrix compression consistent across radii", comp_ok, "; ".join(details[:3])))
    out.append(CheckResult("strongly dominant shift maps F_2 into F_1", col_ok))
    return out


def check_joint_trivial(ctx: FixtureContext) -> List[CheckResult]:
    out = []
    mats, exact = ctx.family(1)
    dim = mats[0].shape[0]
    ones = np.ones(dim) / np.sqrt(dim)
    res = max(float(np.linalg.norm(m @ ones - ones)) for m in mats)
    joint = spectra.joint_spectrum(mats, exact=exact)
    has_one = any(
        max(abs(c - 1) for c in j.chi) < 1e-8 for j in joint
    )
    out.append(
        CheckResult(
            "constant function is a joint eigenvector",
            res <= 1e-10 and has_one,
            f"residual {res:.2e}",
        )
    )
    if ctx.rank == 1 and ctx.system.kind == "A1~":
        has_minus = any(abs(j.chi[0] + 1) < 1e-8 for j in joint)
        out.append(CheckResult("parity eigenvalue -1 present", has_minus))
    return out


def check_koszul_suite(ctx: FixtureContext, n_random: int = 100, seed: int = 7) -> List[CheckResult]:
    out = []
    mats, exact = ctx.family(1)
    r = len(mats)
    dim = mats[0].shape[0]
    rng = np.random.default_rng(seed)
    per_op = [np.linalg.eigvals(m) for m in mats]

    joint = spectra.joint_spectrum(mats, exact=exact)
    chars = [j.chi for j in joint]
    randoms = [
        tuple(complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)) for _ in range(r))
        for _ in range(n_random)
    ]

    dd_ok, euler_ok, far_ok, dual_ok = True, True, True, True
    scale = max(np.linalg.norm(m, 2) for m in mats) + 1.0
    for chi in chars + randoms:
        rec = spectra.koszul_complexes(mats, chi)
        if rec.max_defect > 1e-10 * scale:
            dd_ok = False
        if sum((-1) ** p * h for p, h in enumerate(rec.cohomology)) != 0:
            euler_ok = False
        if rec.homology != tuple(rec.cohomology[r - p] for p in range(r + 1)):
            dual_ok = False
        far = max(min(abs(c - v) for v in vals) for c, vals in zip(chi, per_op))
        if far > 1e-3 and any(h != 0 for h in rec.cohomology):
            far_ok = False
    out.append(CheckResult("Koszul differentials square to zero", dd_ok))
    out.append(CheckResult("Euler characteristic of cohomology vanishes", euler_ok))
    out.append(CheckResult("cohomology vanishes away from the spectra", far_ok))
    out.append(CheckResult("chain/cochain duality dim H_p = dim H^(r-p)", dual_ok))

    h0_ok = True
    for j in joint:
        rec = spectra.koszul_complexes(mats, j.chi)
        if rec.cohomology[0] != j.multiplicity:
            h0_ok = False
    out.append(CheckResult("dim H^0 equals the joint eigenspace dimension", h0_ok))
    return out


def check_parametrix(ctx: FixtureContext, n_random: int = 20, seed: int = 11) -> List[CheckResult]:
    mats, _ = ctx.family(1)
    r = len(mats)
    rng = np.random.default_rng(seed)
    exps = [e for e in itertools.product(range(5), repeat=r) if 0 < sum(e) <= 4]
    ident_ok, hom_ok = True, True
    worst = 0.0
    for _ in range(n_random):
        chi = tuple(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(r))
        for e in exps:
            bs = spectra.parametrix(mats, e, chi)
            res = spectra.parametrix_residual(mats, e, chi, bs)
            worst = max(worst, res)
            if res > 1e-12 * max(1.0, 4.0 ** sum(e)):
                ident_ok = False
    for _ in range(5):
        chi = tuple(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(r))
        _, ok = spectra.homotopy_zero_check(mats, chi, tuple(1 for _ in range(r)))
        hom_ok = hom_ok and ok
    for j in spectra.joint_spectrum(mats)[:4]:
        _, ok = spectra.homotopy_zero_check(mats, j.chi, tuple(1 for _ in range(r)))
        hom_ok = hom_ok and ok
    return [
        CheckResult("parametrix identity to 1e-12", ident_ok, f"worst residual {worst:.2e}"),
        CheckResult("homotopy operator is zero on cohomology", hom_ok),
    ]


def check_taylor_main(ctx: FixtureContext) -> List[CheckResult]:
    out = []
    mats, exact = ctx.family(1)
    for theta in (0.25, 0.5):
        report = spectra.taylor_report(mats, theta, exact=exact)
        gate_chars = list(report.taylor)
        joint_set = [j.chi for j in report.joint]
        ok = not report.mismatches
        for chi in gate_chars:
            member = report.taylor[chi]
            is_joint = any(
                max(abs(a - b) for a, b in zip(chi, jc)) < spectra.TOL_MERGE
                for jc in joint_set
            )
            if member != is_joint:
                ok = False
        detail = f"{len(gate_chars)} gated characters, {len(joint_set)} joint eigenvalues"
        out.append(CheckResult(f"Taylor members = joint eigenvalues (theta={theta})", ok, detail))
    return out


def check_rank1_oracle(ctx: FixtureContext, edges) -> List[CheckResult]:
    out = []
    vals, residual, des, q = oracles.ihara_spectrum(edges)
    out.append(
        CheckResult("determinant identity residual <= 1e-10", residual <= 1e-10, f"{residual:.2e}")
    )
    tm = ctx.tm(Coweight((1,)), 1)
    table = ctx.space.table(1)
    b, _ = oracles.non_backtracking_matrix(edges)
    pos = {e: kk for kk, e in enumerate(des)}
    vid = ctx.system.vertex_ids
    perm = np.empty(len(table), dtype=np.int64)
    for gpos, g in enumerate(table.germs):
        rot = ctx.system.root_system.rotations[g.sigma_index].perm
        e = g.chambers[0]
        tail = vid[rot[0]][e]
        head = vid[rot[1]][e]
        perm[gpos] = pos[(tail, head)]
    bt = b.T
    match = tm.m_mu == q and np.array_equal(tm.counts, bt[np.ix_(perm, perm)])
    out.append(CheckResult("transfer matrix equals the halved edge operator", bool(match)))
    mine = np.linalg.eigvals(tm.dense())
    ok = oracles.multiset_close(np.sort_complex(mine), np.sort_complex(vals / q), 1e-8)
    out.append(CheckResult("spectrum matches the edge-operator oracle", ok))
    return out


def check_a2_health(ctx: FixtureContext) -> List[CheckResult]:
    out = []
    n_ch = ctx.system.num_chambers
    dim = len(ctx.space.table(1))
    out.append(CheckResult("dim F_1 = 3 N", dim == 3 * n_ch, f"N={n_ch}, dim={dim}"))
    q = ctx.system.params[0]
    m1 = ctx.tm(Coweight((1, 0)), 1).m_mu
    out.append(CheckResult("M_w1 = q^2", m1 == q * q, f"M={m1}"))
    t1 = ctx.tm(Coweight((1, 0)), 1)
    t2 = ctx.tm(Coweight((0, 1)), 1)
    ok1 = np.array_equal(t1.counts @ t2.counts, t2.counts @ t1.counts)
    t1b = ctx.tm(Coweight((1, 0)), 2)
    t2b = ctx.tm(Coweight((0, 1)), 2)
    ok2 = np.array_equal(t1b.counts @ t2b.counts, t2b.counts @ t1b.counts)
    out.append(CheckResult("generators commute exactly on F_1 and F_2", ok1 and ok2))
    return out


# ----------------------------------------------------------------------
# the full suite


def run_suite(name: str, system: ChamberSystem, metric_radius: int = 3, edges=None) -> List[CheckResult]:
    ctx = context_for(name, system)
    results: List[CheckResult] = []
    report = system.validate()
    results.append(CheckResult("local building checks", report.passed, ""))
    results += check_walk_parameters(ctx)
    results += check_tables(ctx, max_radius=metric_radius)
    results += check_metric_suite(ctx, radius=metric_radius)
    results.append(check_distance_cross_validation(ctx, radius=min(2, metric_radius)))
    results += check_transfer_exact(ctx)
    results += check_lasota_yorke(ctx)
    results += check_fn_invariance(ctx)
    results += check_joint_trivial(ctx)
    results += check_koszul_suite(ctx)
    results += check_parametrix(ctx)
    results += check_taylor_main(ctx)
    if edges is not None and system.kind == "A1~":
        results += check_rank1_oracle(ctx, edges)
    if system.kind == "A2~":
        results += check_a2_health(ctx)
    return results
