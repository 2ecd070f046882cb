"""Joint spectra of the commuting transfer family and Koszul complexes.

The generator family (one operator per fundamental coweight, or a custom
set) is converted to dense complex matrices.  Joint eigenvalues are found
from a seeded random linear combination and certified through the singular
values of the stacked system; Koszul cochain and chain complexes give the
cohomological picture, with parametrices realizing the Nullstellensatz
identity sum_i (A_i - chi_i) B_i(chi) = A_mu - chi(mu).

Rank decisions use a relative singular-value threshold with an explicit
ambiguity band; characters with singular values inside the band are
reported as ambiguous rather than classified.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

DEFAULT_SEED = 0xC0FFEE
TOL_RES = 1e-8
TOL_RANK = 1e-9
TOL_MERGE = 1e-6
AMBIGUITY_BAND = 10.0


def eigen(a: np.ndarray, tol_res: float = TOL_RES):
    """Eigenvalues with eigenvectors and residuals, deterministically ordered.

    Pairs are sorted by (real, imaginary); each vector is normalized with
    its largest-magnitude entry rotated to the positive real axis.  A pair
    whose residual ||A v - w v|| exceeds tol_res * ||A|| is reported as
    non-converged by raising, never returned silently.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError("eigen expects a nonempty square matrix")
    vals, vecs = np.linalg.eig(a)
    scale = max(np.linalg.norm(a, 2), 1e-300)
    order = np.lexsort((vals.imag, vals.real))
    out = []
    for idx in order:
        v = vecs[:, idx]
        v = v / np.linalg.norm(v)
        pivot = int(np.argmax(np.abs(v)))
        phase = v[pivot] / abs(v[pivot])
        v = v / phase
        res = float(np.linalg.norm(a @ v - vals[idx] * v))
        if res > tol_res * scale:
            raise RuntimeError(
                f"eigen pair residual {res:.3e} exceeds {tol_res:.1e} * ||A||"
            )
        out.append((complex(vals[idx]), v, res))
    return out


@dataclass
class Character:
    """Values of a multiplicative character on the generator family."""

    values: tuple  # complex, one per generator
    gate_elements: tuple = ()  # coweight coordinate tuples used by the gate

    def value_at(self, coords) -> complex:
        out = 1 + 0j
        for v, a in zip(self.values, coords):
            out *= v ** a
        return out

    def magnitude(self) -> float:
        if not self.gate_elements:
            return max(abs(v) for v in self.values)
        return max(abs(self.value_at(k)) for k in self.gate_elements)

    def passes_gate(self, theta: float) -> bool:
        return self.magnitude() > theta


def default_gate_elements(rank: int) -> tuple:
    ones = tuple(1 for _ in range(rank))
    twos = tuple(2 for _ in range(rank))
    return (ones, twos)


@dataclass
class JointEigenvalue:
    chi: tuple
    multiplicity: int
    residual: float
    vector: np.ndarray


@dataclass
class SpectrumReport:
    theta: float
    generators: List[tuple]
    dim: int
    joint: List[JointEigenvalue]
    per_operator: List[List[complex]]
    taylor: Dict[tuple, bool] = field(default_factory=dict)
    cohomology: Dict[tuple, tuple] = field(default_factory=dict)
    ambiguous: List[tuple] = field(default_factory=list)
    offspectrum: List[tuple] = field(default_factory=list)
    mismatches: List[str] = field(default_factory=list)


def _check_commuting(int_mats: Sequence[Tuple[np.ndarray, int]]):
    """Exact commutation of count/denominator pairs via integer products."""
    for (a, ma), (b, mb) in itertools.combinations(int_mats, 2):
        if not np.array_equal(a @ b, b @ a):
            raise ValueError("the operator family does not commute exactly")


def joint_spectrum(
    mats: Sequence[np.ndarray],
    exact: Optional[Sequence[Tuple[np.ndarray, int]]] = None,
    seed: int = DEFAULT_SEED,
    tol_res: float = TOL_RES,
    tol_merge: float = TOL_MERGE,
    tol_rank: float = TOL_RANK,
) -> List[JointEigenvalue]:
    """Joint eigenvalues of a commuting family of dense matrices.

    Candidates come from the eigenvectors of a random (seeded) complex
    combination; each candidate tuple is certified by the null space of the
    stacked matrix [A_i - chi_i], and candidates closer than tol_merge are
    merged.
    """
    mats = [np.asarray(m, dtype=np.complex128) for m in mats]
    dim = mats[0].shape[0]
    if exact is not None:
        _check_commuting(exact)
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0.0, 2 * np.pi, size=len(mats))
    combo = sum(np.exp(1j * p) * m for p, m in zip(phases, mats))
    pairs = eigen(combo, tol_res=max(tol_res, 1e-6))
    candidates = []
    for _, v, _ in pairs:
        chi = tuple(complex(np.vdot(v, m @ v) / np.vdot(v, v)) for m in mats)
        candidates.append(chi)
    merged: List[tuple] = []
    for chi in candidates:
        if not any(
            max(abs(a - b) for a, b in zip(chi, other)) < tol_merge for other in merged
        ):
            merged.append(chi)
    out = []
    for chi in merged:
        null_dim, vecs, _ = _stacked_null_space(mats, chi, tol_rank)
        if null_dim == 0:
            continue
        v = vecs[:, 0]
        res = max(float(np.linalg.norm(m @ v - c * v)) for m, c in zip(mats, chi))
        if res > tol_res * max(np.linalg.norm(m, 2) for m in mats):
            continue
        out.append(JointEigenvalue(chi, null_dim, res, v))
    out.sort(key=lambda j: tuple((c.real, c.imag) for c in j.chi))
    return out


def _stacked_null_space(mats, chi, tol_rank):
    dim = mats[0].shape[0]
    stacked = np.vstack([m - c * np.eye(dim) for m, c in zip(mats, chi)])
    u, s, vh = np.linalg.svd(stacked)
    smax = s[0] if len(s) and s[0] > 0 else 1.0
    thresh = tol_rank * smax * dim
    null_dim = int(np.sum(s <= thresh))
    band = (np.sum((s > thresh) & (s < thresh * AMBIGUITY_BAND)) > 0) or (
        np.sum((s <= thresh) & (s > thresh / AMBIGUITY_BAND)) > 0
    )
    vecs = vh.conj().T[:, dim - null_dim:] if null_dim else np.zeros((dim, 0))
    return null_dim, vecs, bool(band)


# ----------------------------------------------------------------------
# Koszul complexes


def _wedge_basis(r: int, p: int):
    return list(itertools.combinations(range(r), p))


def koszul_cochain(mats: Sequence[np.ndarray], chi: Sequence[complex]):
    """Matrices of the cochain differentials wedge(e_i) x (A_i - chi_i)."""
    mats = [np.asarray(m, dtype=np.complex128) for m in mats]
    r = len(mats)
    d = mats[0].shape[0]
    shifted = [m - c * np.eye(d) for m, c in zip(mats, chi)]
    diffs = []
    for p in range(r):
        src = _wedge_basis(r, p)
        dst = _wedge_basis(r, p + 1)
        dst_pos = {c: k for k, c in enumerate(dst)}
        mat = np.zeros((len(dst) * d, len(src) * d), dtype=np.complex128)
        for sc, combo in enumerate(src):
            for i in range(r):
                if i in combo:
                    continue
                tgt = tuple(sorted(combo + (i,)))
                sign = (-1) ** tgt.index(i)
                tc = dst_pos[tgt]
                mat[tc * d:(tc + 1) * d, sc * d:(sc + 1) * d] += sign * shifted[i]
        diffs.append(mat)
    return diffs


def koszul_chain(mats: Sequence[np.ndarray], chi: Sequence[complex]):
    """Matrices of the chain differentials contraction(e_i) x (A_i - chi_i)."""
    mats = [np.asarray(m, dtype=np.complex128) for m in mats]
    r = len(mats)
    d = mats[0].shape[0]
    shifted = [m - c * np.eye(d) for m, c in zip(mats, chi)]
    diffs = []
    for p in range(1, r + 1):
        src = _wedge_basis(r, p)
        dst = _wedge_basis(r, p - 1)
        dst_pos = {c: k for k, c in enumerate(dst)}
        mat = np.zeros((len(dst) * d, len(src) * d), dtype=np.complex128)
        for sc, combo in enumerate(src):
            for pos, i in enumerate(combo):
                tgt = tuple(x for x in combo if x != i)
                sign = (-1) ** pos
                tc = dst_pos[tgt]
                mat[tc * d:(tc + 1) * d, sc * d:(sc + 1) * d] += sign * shifted[i]
        diffs.append(mat)
    return diffs


def _rank(mat: np.ndarray, tol_rank: float):
    if mat.size == 0:
        return 0, False
    s = np.linalg.svd(mat, compute_uv=False)
    smax = s[0] if s[0] > 0 else 1.0
    thresh = tol_rank * smax * max(mat.shape)
    rank = int(np.sum(s > thresh))
    band = bool(
        np.any((s > thresh) & (s < thresh * AMBIGUITY_BAND))
        or np.any((s <= thresh) & (s > thresh / AMBIGUITY_BAND))
    )
    return rank, band


@dataclass
class KoszulComplexRec:
    """Cohomology data of one character against the operator family."""

    chi: tuple
    cochain_dims: tuple       # dimensions of the cochain spaces
    cohomology: tuple         # dim H^p for p = 0..r
    homology: tuple           # dim H_p for p = 0..r
    max_defect: float         # largest ||delta o delta|| over both complexes
    ambiguous: bool
    tol_rank: float


def koszul_complexes(
    mats: Sequence[np.ndarray], chi: Sequence[complex], tol_rank: float = TOL_RANK
) -> KoszulComplexRec:
    mats = [np.asarray(m, dtype=np.complex128) for m in mats]
    r = len(mats)
    d = mats[0].shape[0]
    co = koszul_cochain(mats, chi)
    ch = koszul_chain(mats, chi)
    dims = tuple(len(_wedge_basis(r, p)) * d for p in range(r + 1))

    defect = 0.0
    for a, b in zip(co, co[1:]):
        defect = max(defect, float(np.linalg.norm(b @ a, 2)))
    for a, b in zip(ch, ch[1:]):
        defect = max(defect, float(np.linalg.norm(a @ b, 2)))

    ambiguous = False
    ranks_co = []
    for mat in co:
        rk, band = _rank(mat, tol_rank)
        ranks_co.append(rk)
        ambiguous = ambiguous or band
    coh = []
    for p in range(r + 1):
        incoming = ranks_co[p - 1] if p >= 1 else 0
        outgoing = ranks_co[p] if p < r else 0
        coh.append(dims[p] - outgoing - incoming)

    ranks_ch = []
    for mat in ch:
        rk, band = _rank(mat, tol_rank)
        ranks_ch.append(rk)
        ambiguous = ambiguous or band
    hom = []
    for p in range(r + 1):
        outgoing = ranks_ch[p - 1] if p >= 1 else 0   # boundary leaving degree p
        incoming = ranks_ch[p] if p < r else 0        # boundary arriving from p+1
        hom.append(dims[p] - outgoing - incoming)

    return KoszulComplexRec(
        tuple(chi), dims, tuple(coh), tuple(hom), defect, ambiguous, tol_rank
    )


# ----------------------------------------------------------------------
# parametrix and homotopy


def parametrix(mats: Sequence[np.ndarray], exponents: Sequence[int], chi: Sequence[complex]):
    """Telescoping solution of the ideal-membership identity.

    Returns B_1..B_r with sum_i (A_i - chi_i) B_i = prod A_i^{l_i} - prod chi_i^{l_i},
    using prod x - prod b = sum_i (prod_{j<i} x_j)(x_i^{l_i} - b_i^{l_i})(prod_{j>i} b_j)
    and the geometric factorization of x^l - b^l.
    """
    mats = [np.asarray(m, dtype=np.complex128) for m in mats]
    d = mats[0].shape[0]
    eye = np.eye(d, dtype=np.complex128)
    out = []
    for i, (a, li, bi) in enumerate(zip(mats, exponents, chi)):
        geom = np.zeros((d, d), dtype=np.complex128)
        power = eye.copy()
        for mpow in range(li):
            geom += power * (bi ** (li - 1 - mpow))
            power = power @ a
        prefix = eye.copy()
        for j in range(i):
            prefix = prefix @ np.linalg.matrix_power(mats[j], exponents[j])
        suffix = 1 + 0j
        for j in range(i + 1, len(mats)):
            suffix *= chi[j] ** exponents[j]
        out.append(prefix @ geom * suffix)
    return out


def parametrix_residual(mats, exponents, chi, bs) -> float:
    mats = [np.asarray(m, dtype=np.complex128) for m in mats]
    d = mats[0].shape[0]
    lhs = np.zeros((d, d), dtype=np.complex128)
    for a, c, b in zip(mats, chi, bs):
        lhs += (a - c * np.eye(d)) @ b
    target = np.eye(d, dtype=np.complex128)
    scalar = 1 + 0j
    for a, l in zip(mats, exponents):
        target = target @ np.linalg.matrix_power(a, l)
    for c, l in zip(chi, exponents):
        scalar *= c ** l
    return float(np.linalg.norm(lhs - (target - scalar * np.eye(d)), 2))


def homotopy_zero_check(
    mats: Sequence[np.ndarray],
    chi: Sequence[complex],
    exponents: Sequence[int],
    tol: float = 1e-8,
    tol_rank: float = TOL_RANK,
):
    """Verify that sum (A_i - chi_i) B_i kills every cohomology class.

    For each degree p, vectors in the kernel of the cochain differential are
    mapped by the blockwise operator and the component orthogonal to the
    image of the previous differential must vanish within tolerance.
    """
    mats = [np.asarray(m, dtype=np.complex128) for m in mats]
    r = len(mats)
    d = mats[0].shape[0]
    bs = parametrix(mats, exponents, chi)
    f = np.zeros((d, d), dtype=np.complex128)
    for a, c, b in zip(mats, chi, bs):
        f += (a - c * np.eye(d)) @ b
    scale = max(float(np.linalg.norm(f, 2)), 1.0)
    co = koszul_cochain(mats, chi)
    worst = 0.0
    for p in range(r + 1):
        blocks = len(_wedge_basis(r, p))
        big_f = np.kron(np.eye(blocks), f)
        if p < r:
            mat = co[p]
            u, s, vh = np.linalg.svd(mat)
            smax = s[0] if len(s) and s[0] > 0 else 1.0
            thresh = tol_rank * smax * max(mat.shape)
            rank = int(np.sum(s > thresh))
            kernel = vh.conj().T[:, rank:]
        else:
            kernel = np.eye(blocks * d, dtype=np.complex128)
        if kernel.shape[1] == 0:
            continue
        moved = big_f @ kernel
        if p >= 1:
            prev = co[p - 1]
            u, s, vh = np.linalg.svd(prev)
            smax = s[0] if len(s) and s[0] > 0 else 1.0
            thresh = tol_rank * smax * max(prev.shape)
            rank = int(np.sum(s > thresh))
            img = u[:, :rank]
            moved = moved - img @ (img.conj().T @ moved)
        worst = max(worst, float(np.linalg.norm(moved, 2)))
    return worst, worst <= tol * scale


# ----------------------------------------------------------------------
# full report


def taylor_report(
    mats: Sequence[np.ndarray],
    theta: float,
    exact: Optional[Sequence[Tuple[np.ndarray, int]]] = None,
    gate_elements: Optional[Sequence[tuple]] = None,
    extra_characters: Sequence[tuple] = (),
    n_offspectrum: int = 8,
    seed: int = DEFAULT_SEED,
    tol_res: float = TOL_RES,
    tol_rank: float = TOL_RANK,
    tol_merge: float = TOL_MERGE,
) -> SpectrumReport:
    """Classify characters as joint eigenvalues and by Koszul cohomology.

    Tested characters are the computed joint eigenvalues, random samples
    away from the per-operator spectra, and any user-supplied tuples.  A
    character passing the magnitude gate must be a Taylor member (nonzero
    cohomology) exactly when it matches a joint eigenvalue.
    """
    mats = [np.asarray(m, dtype=np.complex128) for m in mats]
    r = len(mats)
    if gate_elements is None:
        gate_elements = default_gate_elements(r)
    joint = joint_spectrum(
        mats, exact=exact, seed=seed, tol_res=tol_res, tol_merge=tol_merge, tol_rank=tol_rank
    )
    per_op = [[val for val, _, _ in eigen(m, tol_res=max(tol_res, 1e-6))] for m in mats]
    rng = np.random.default_rng(seed ^ 0x5EED)
    off = []
    guard = 0
    while len(off) < n_offspectrum and guard < 100 * n_offspectrum:
        guard += 1
        cand = tuple(
            complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(r)
        )
        dists = [
            min(abs(c - v) for v in vals) for c, vals in zip(cand, per_op)
        ]
        if max(dists) > 1e-2:
            off.append(cand)
    report = SpectrumReport(
        theta=float(theta),
        generators=[],
        dim=mats[0].shape[0],
        joint=joint,
        per_operator=per_op,
    )
    report.offspectrum = off
    tested = [j.chi for j in joint] + list(off) + [tuple(c) for c in extra_characters]
    joint_set = [j.chi for j in joint]
    for chi in tested:
        ch = Character(tuple(chi), tuple(gate_elements))
        rec = koszul_complexes(mats, chi, tol_rank=tol_rank)
        member = any(h != 0 for h in rec.cohomology)
        report.cohomology[tuple(chi)] = rec.cohomology
        if rec.ambiguous:
            report.ambiguous.append(tuple(chi))
        if not ch.passes_gate(theta):
            continue
        report.taylor[tuple(chi)] = member
        is_joint = any(
            max(abs(a - b) for a, b in zip(chi, jc)) < tol_merge for jc in joint_set
        )
        if member != is_joint and tuple(chi) not in report.ambiguous:
            report.mismatches.append(
                f"character {chi}: Taylor membership {member} but joint-eigenvalue "
                f"status {is_joint}"
            )
    return report
