"""Transfer operators on the finite spaces F_n of germ functions.

F_n is spanned by the indicator functions of radius-n germ classes.  The
operator for a dominant coweight mu averages a function over the M_mu
preimages of the shift by mu; on F_n it becomes an exact rational matrix
whose entries are integer counts divided by M_mu.  The counts are taken
over radius-(n+|mu|) germs, fibered by (shift, restriction):

    entry[h][g] = #{G : shift(G, mu) = h and G|_n = g} / M_mu

Row sums must equal M_mu exactly; a violation aborts, since it would mean
the germ tables are inconsistent with the preimage count.

The Lipschitz seminorm of an F_n function is computed exactly: pairs of
distinct germ classes always resolve their distance within the truncation,
and pairs in the same class contribute nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from .rootdata import Coweight, translation_parameter
from .sectors import SectorSpace


@dataclass
class TransferMatrix:
    """Exact matrix of one transfer operator on F_n."""

    mu: Coweight
    radius: int
    counts: np.ndarray  # integer preimage counts, shape (dim, dim)
    m_mu: int

    @property
    def dim(self) -> int:
        return self.counts.shape[0]

    def entry(self, h: int, g: int) -> Fraction:
        return Fraction(int(self.counts[h, g]), self.m_mu)

    def dense(self) -> np.ndarray:
        return self.counts.astype(np.float64) / self.m_mu

    def row_sums_ok(self) -> bool:
        return bool(np.all(self.counts.sum(axis=1) == self.m_mu))


def transfer_matrix(
    space: SectorSpace, mu: Coweight, radius: int, depth: Optional[int] = None
) -> TransferMatrix:
    """Assemble the transfer matrix for `mu` on F_radius.

    A preimage of a sector is pinned on the whole translated sector, so
    inside a radius-N truncation (N = radius + |mu| + depth) it is pinned on
    the intersection with mu + S_0.  The radius-N germs are grouped by that
    restriction; each group is a finite disjoint union of preimage-germ sets
    of individual sectors, and every such set carries the same count vector
    because the operator respects the radius-`radius` classes.  The group
    totals must therefore be a single multiple lambda * M_mu across all
    groups, with every group vector divisible by lambda; the preimage counts
    are the quotients.  Any gate failure escalates the depth and ultimately
    aborts, since it would falsify the counting model.
    """
    if radius < 1:
        raise ValueError("transfer matrices need radius >= 1")
    if not mu.dominant:
        raise ValueError("transfer operators are indexed by dominant coweights")
    depths = (depth,) if depth is not None else (0, 1, 2)
    last_error = None
    for d in depths:
        try:
            return _transfer_matrix_at_depth(space, mu, radius, d)
        except _CountingDepthError as exc:
            last_error = exc
    raise RuntimeError(
        f"preimage counting failed for mu={tuple(mu.coords)} on F_{radius}: {last_error}"
    )


class _CountingDepthError(RuntimeError):
    pass


def _transfer_matrix_at_depth(
    space: SectorSpace, mu: Coweight, radius: int, depth: int
) -> TransferMatrix:
    from .rootdata import dot, vsub

    R = space.root_system
    big_radius = radius + mu.norm + depth
    big = space.table(big_radius)
    small = space.table(radius)
    m_mu = translation_parameter(R, space.system.params, mu)
    shifted = space.shift_map(big_radius, mu)  # radius big_radius - |mu|
    rows = space.table(big_radius - mu.norm).restriction_map(radius)[shifted]
    cols = big.restriction_map(radius)
    tv = R.coweight_vector(mu)
    plug_alcoves = [
        k
        for k, a in enumerate(big.trunc.alcoves)
        if all(dot(beta, vsub(v, tv)) >= 0 for v in a.verts for beta in R.simple_roots)
    ]
    dim = len(small.germs)

    groups: Dict[tuple, np.ndarray] = {}
    group_row: Dict[tuple, int] = {}
    for pos, g in enumerate(big.germs):
        key = (g.sigma_index,) + tuple(g.chambers[k] for k in plug_alcoves)
        if key not in groups:
            groups[key] = np.zeros(dim, dtype=np.int64)
            group_row[key] = int(rows[pos])
        groups[key][int(cols[pos])] += 1

    totals = {int(vec.sum()) for vec in groups.values()}
    if len(totals) != 1:
        raise _CountingDepthError(f"conditioning groups have mixed sizes {sorted(totals)}")
    total = totals.pop()
    if total % m_mu != 0:
        raise _CountingDepthError(
            f"group size {total} is not a multiple of M_mu={m_mu}"
        )
    lam = total // m_mu

    counts = np.zeros((dim, dim), dtype=np.int64)
    seen_row = np.zeros(dim, dtype=bool)
    for key, vec in groups.items():
        if np.any(vec % lam != 0):
            raise _CountingDepthError(
                "group counts are not uniform over the preimage multiplicity"
            )
        reduced = vec // lam
        h = group_row[key]
        if seen_row[h]:
            if not np.array_equal(counts[h], reduced):
                raise _CountingDepthError(
                    f"preimage counts at class {h} depend on the representative"
                )
        else:
            counts[h] = reduced
            seen_row[h] = True
    if not np.all(seen_row):
        raise _CountingDepthError("some classes received no conditioning group")
    return TransferMatrix(mu, radius, counts, m_mu)


def apply(tm: TransferMatrix, phi: Sequence) -> List[Fraction]:
    """Exact matrix-vector product for rational (or integer) vectors."""
    if len(phi) != tm.dim:
        raise ValueError("dimension mismatch")
    out = []
    for h in range(tm.dim):
        acc = Fraction(0)
        row = tm.counts[h]
        for g in np.nonzero(row)[0]:
            acc += Fraction(int(row[g])) * Fraction(phi[int(g)])
        out.append(acc / tm.m_mu)
    return out


def pi_projection(space: SectorSpace, phi: Sequence, m: int, n: int) -> List:
    """Project an F_m vector to F_n by sampling canonical representatives.

    The value on a radius-n class is the value of `phi` at the smallest
    radius-m class restricting to it.
    """
    if n >= m:
        raise ValueError("projection goes to a strictly smaller radius")
    big = space.table(m)
    small = space.table(n)
    if len(phi) != len(big.germs):
        raise ValueError("dimension mismatch")
    restr = big.restriction_map(n)
    rep = {}
    for pos in range(len(big.germs)):
        cls = int(restr[pos])
        if cls not in rep:
            rep[cls] = pos
    return [phi[rep[c]] for c in range(len(small.germs))]


def lift_to(space: SectorSpace, phi: Sequence, n: int, m: int) -> List:
    """View an F_n vector inside F_m (constant on restriction fibers)."""
    if m < n:
        raise ValueError("lift goes to a larger radius")
    big = space.table(m)
    restr = big.restriction_map(n)
    return [phi[int(restr[pos])] for pos in range(len(big.germs))]


def sup_norm(phi: Sequence) -> Fraction:
    return max((abs(Fraction(x)) for x in phi), default=Fraction(0))


def lipschitz_seminorm(space: SectorSpace, phi: Sequence, n: int, theta: Fraction) -> Fraction:
    """Exact Lipschitz seminorm of a real rational F_n vector.

    Pairs at first-disagreement norm m contribute |dphi| / theta^m; the
    maximum over pairs inside one radius-(m-1) class of the value range
    realizes the supremum, because any such pair disagrees at norm >= m.
    """
    table = space.table(n)
    theta = Fraction(theta)
    vals = [Fraction(x) for x in phi]
    if len(vals) != len(table.germs):
        raise ValueError("dimension mismatch")
    best = Fraction(0)
    for m in range(n + 1):
        if m == 0:
            groups = {0: range(len(vals))}
        else:
            cls = table.restriction_map(m - 1)
            groups = {}
            for pos in range(len(vals)):
                groups.setdefault(int(cls[pos]), []).append(pos)
        spread = Fraction(0)
        for members in groups.values():
            lo = hi = None
            for pos in members:
                v = vals[pos]
                lo = v if lo is None or v < lo else lo
                hi = v if hi is None or v > hi else hi
            if lo is not None and hi - lo > spread:
                spread = hi - lo
        cand = spread / theta**m
        if cand > best:
            best = cand
    return best


def lipschitz_seminorm_complex(space: SectorSpace, phi: Sequence, n: int, theta: float) -> float:
    """Pairwise seminorm for complex vectors (small dimensions only)."""
    table = space.table(n)
    k = table.k_matrix()
    arr = np.asarray(phi, dtype=np.complex128)
    best = 0.0
    for a in range(len(arr)):
        d = np.abs(arr - arr[a])
        scale = np.power(float(theta), -k[a].astype(np.float64))
        scale[k[a] == n + 1] = 0.0
        best = max(best, float(np.max(d * scale)))
    return best


@dataclass
class InequalityReport:
    checked: int
    violations: List[str]
    max_slack: Optional[Fraction]

    @property
    def passed(self) -> bool:
        return not self.violations


def check_lasota_yorke(
    space: SectorSpace,
    mu: Coweight,
    n: int,
    theta: Fraction,
    matrix: Optional[TransferMatrix] = None,
) -> InequalityReport:
    """Check the seminorm contraction on every indicator of F_n.

    For strongly dominant mu the bound is theta * |phi| + (2/theta) * |phi|_oo,
    and for merely dominant mu the non-expansive variant |phi| + C |phi|_oo
    with the same constant.  Slack is the smallest margin observed.
    """
    theta = Fraction(theta)
    tm = matrix if matrix is not None else transfer_matrix(space, mu, n)
    factor = theta if mu.strongly_dominant else Fraction(1)
    c_theta = 2 / theta
    violations = []
    max_slack = None
    for g in range(tm.dim):
        phi = [Fraction(0)] * tm.dim
        phi[g] = Fraction(1)
        image = [Fraction(int(tm.counts[h, g]), tm.m_mu) for h in range(tm.dim)]
        lhs = lipschitz_seminorm(space, image, n, theta)
        rhs = factor * lipschitz_seminorm(space, phi, n, theta) + c_theta * sup_norm(phi)
        if lhs > rhs:
            violations.append(f"indicator {g}: |L phi| = {lhs} > {rhs}")
        slack = rhs - lhs
        if max_slack is None or slack < max_slack:
            max_slack = slack
    return InequalityReport(tm.dim, violations, max_slack)


def check_sup_contraction(space: SectorSpace, tm: TransferMatrix) -> bool:
    """Row-stochasticity makes the sup norm non-increasing: check on indicators."""
    col_max = tm.counts.max(axis=0)
    return bool(np.all(col_max <= tm.m_mu))


@dataclass
class FnInvarianceReport:
    compression_exact: bool
    maps_into_smaller: Optional[bool]
    details: List[str]

    @property
    def passed(self) -> bool:
        ok = self.compression_exact
        if self.maps_into_smaller is not None:
            ok = ok and self.maps_into_smaller
        return ok


def check_fn_invariance(space: SectorSpace, mu: Coweight, n: int) -> FnInvarianceReport:
    """Consistency of the matrices across radii.

    (a) The radius-(n+1) matrix, compressed through the restriction maps,
        must equal the radius-n matrix entry for entry.
    (b) For strongly dominant mu and n >= 2, rows belonging to germs with a
        common radius-(n-1) restriction must be identical after the column
        compression, i.e. the operator maps F_n into F_{n-1}.
    """
    details = []
    tm_small = transfer_matrix(space, mu, n)
    tm_big = transfer_matrix(space, mu, n + 1)
    big = space.table(n + 1)
    restr = big.restriction_map(n)
    dim_small = tm_small.dim
    # compress columns of the big matrix along restriction fibers
    col_view = np.zeros((dim_small, tm_big.dim), dtype=np.int64)
    np.add.at(col_view, restr, tm_big.counts.T)
    col_view = col_view.T  # shape (big dim, small dim)
    compression_exact = True
    for pos in range(tm_big.dim):
        if not np.array_equal(col_view[pos], tm_small.counts[int(restr[pos])]):
            compression_exact = False
            details.append(f"big class {pos}: compressed row differs")
            break

    maps_into_smaller = None
    if mu.strongly_dominant and n >= 2:
        small = space.table(n)
        down = small.restriction_map(n - 1)
        maps_into_smaller = True
        seen: Dict[int, int] = {}
        for pos in range(dim_small):
            cls = int(down[pos])
            if cls in seen:
                if not np.array_equal(tm_small.counts[pos], tm_small.counts[seen[cls]]):
                    maps_into_smaller = False
                    details.append(
                        f"rows {seen[cls]} and {pos} differ inside radius-{n-1} class {cls}"
                    )
                    break
            else:
                seen[cls] = pos
    return FnInvarianceReport(compression_exact, maps_into_smaller, details)
