"""Sector germs on a chamber system, their ultrametric, and the shifts.

A radius-n germ is the restriction of a locally injective, type-rotating
simplicial morphism from the dominant sector to the radius-n truncation:
concretely a type rotation together with one chamber per truncation alcove,
respecting panel adjacencies and injective around every truncation vertex.

Two germs at distance theta^k first disagree at a dominant coweight of norm
k, where "agree at lambda" means the connected component of the base vertex
inside the face-by-face agreement region reaches lambda.  Faces are compared
through their residue classes (a vertex of type t maps to the class of the
complementary relation), which is exactly agreement of lifts through the
covering.  Because agreement components are convex, membership of lambda in
the component is equivalent to agreement of the two germs on the hull of
{0, lambda}; the table therefore carries per-radius and per-ray restriction
classes which give all pairwise distances in O(1) after preprocessing.  The
explicit region-growing computation is kept as `distance` and the two routes
are cross-checked in the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np

from .chamber import ChamberSystem
from .rootdata import (
    Coweight,
    RootSystem,
    TruncatedSector,
    OUTSIDE,
    WALL,
    embed_shift,
    truncated_sector,
)


@dataclass(frozen=True)
class Germ:
    """A radius-n sector germ: type rotation plus alcove images."""

    radius: int
    sigma_index: int
    chambers: tuple  # image chamber per truncation alcove, truncation order
    base_id: tuple   # face id of the image of the base vertex

    @property
    def canonical_key(self):
        if self.radius == 0:
            return (self.sigma_index, self.base_id)
        return (self.sigma_index, self.chambers)


SENTINEL = None  # distance not resolved within the truncation radius


@dataclass(frozen=True)
class DistanceResult:
    k: Optional[int]                 # None: at least radius+1 (same germ)
    k_directional: tuple             # per direction, same sentinel convention
    agreeing_region: frozenset       # face indices of the component of 0

    @property
    def resolved(self) -> bool:
        return self.k is not None


def _face_plan(system: ChamberSystem, trunc: TruncatedSector, perm):
    """For one type rotation: per face, how to read off its image id.

    Returns a list over faces of (anchor, kind, payload) where kind "C"
    means the chamber itself, "B" a single-relation block, and "J" a class
    of a joined partition (payload = (classes, J)).
    """
    rank = system.root_system.rank
    index_set = system.index_set
    plan = []
    for f in trunc.faces:
        img_types = tuple(sorted(perm[t] for t in f.types))
        if len(img_types) == rank + 1:
            plan.append((f.anchor, "C", None))
            continue
        if rank == 1:
            # faces are vertices; the image vertex is the color-t endpoint
            plan.append((f.anchor, "B", perm[f.types[0]]))
            continue
        J = tuple(i for i in index_set if i not in img_types)
        if len(J) == 1:
            plan.append((f.anchor, "B", J[0]))
        else:
            classes, _ = system.partition(J)
            plan.append((f.anchor, "J", (classes, J)))
    return plan


def _face_id(system, plan_entry, chambers):
    anchor, kind, payload = plan_entry
    c = chambers[anchor]
    if kind == "C":
        return ("C", c)
    if kind == "B":
        return ("B", payload, system.block_of[payload][c])
    classes, J = payload
    return ("J", J, classes[c])


class GermTable:
    """All radius-n germs of one chamber system, canonically ordered."""

    def __init__(self, space: "SectorSpace", radius: int):
        self.space = space
        self.radius = radius
        self.trunc = space.truncation(radius)
        self.germs: List[Germ] = []
        self.index: Dict[tuple, int] = {}
        self._restriction: Dict[int, np.ndarray] = {}
        self._ray_classes: Dict[tuple, np.ndarray] = {}
        self._region_classes: Dict[tuple, np.ndarray] = {}
        self._build()

    def __len__(self):
        return len(self.germs)

    def position(self, germ: Germ) -> int:
        return self.index[germ.canonical_key]

    # -- construction ----------------------------------------------------

    def _build(self):
        space = self.space
        system = space.system
        R = space.root_system
        if self.radius == 0:
            self._build_radius_zero()
            return
        parent = space.table(self.radius - 1)
        trunc = self.trunc
        start = trunc.alcove_count(self.radius - 1)
        stop = trunc.alcove_count(self.radius)
        prop, star_earlier = space._extension_plan(self.radius)

        def extend(parents):
            out = []
            for pg in parents:
                perm = R.rotations[pg.sigma_index].perm
                assign = list(pg.chambers) + [0] * (stop - start)
                seeds = self._base_candidates(pg) if self.radius == 1 else None

                def rec(k):
                    if k == stop:
                        out.append(
                            Germ(self.radius, pg.sigma_index, tuple(assign), pg.base_id)
                        )
                        return
                    if k == 0:
                        cands = seeds
                    else:
                        cands = None
                        for (j, lab_src) in prop[k]:
                            blk = system.block_members(perm[lab_src], assign[j])
                            cs = [c for c in blk if c != assign[j]]
                            cands = cs if cands is None else [c for c in cands if c in cs]
                            if not cands:
                                return
                    taken = {assign[j] for j in star_earlier[k]}
                    for c in cands:
                        if c in taken:
                            continue
                        assign[k] = c
                        rec(k + 1)

                rec(start)
            return out

        germs = []
        workers = space.threads
        if workers > 1 and len(parent.germs) > 4 * workers:
            from concurrent.futures import ThreadPoolExecutor

            chunk = -(-len(parent.germs) // workers)
            blocks = [
                parent.germs[i:i + chunk] for i in range(0, len(parent.germs), chunk)
            ]
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for part in pool.map(extend, blocks):
                    germs.extend(part)
        else:
            germs = extend(parent.germs)
        germs.sort(key=lambda g: g.canonical_key)
        self.germs = germs
        self.index = {g.canonical_key: pos for pos, g in enumerate(germs)}
        if len(self.index) != len(germs):
            raise AssertionError("duplicate canonical germ keys")

    def _build_radius_zero(self):
        R = self.space.root_system
        germs = []
        for s, rot in enumerate(R.rotations):
            base_type = rot.perm[0]
            ncls = self._base_class_count(base_type)
            for b in range(ncls):
                germs.append(Germ(0, s, (), ("base", base_type, b)))
        germs.sort(key=lambda g: g.canonical_key)
        self.germs = germs
        self.index = {g.canonical_key: pos for pos, g in enumerate(germs)}

    def _base_class_count(self, base_type: int) -> int:
        system = self.space.system
        if system.root_system.rank == 1:
            return len(system.residues[base_type])
        J = tuple(i for i in system.index_set if i != base_type)
        _, n = system.partition(J)
        return n

    def _base_class_of(self, base_type: int, chamber: int) -> int:
        system = self.space.system
        if system.root_system.rank == 1:
            return system.block_of[base_type][chamber]
        J = tuple(i for i in system.index_set if i != base_type)
        classes, _ = system.partition(J)
        return classes[chamber]

    def _base_candidates(self, pg: Germ):
        system = self.space.system
        base_type = pg.base_id[1]
        b = pg.base_id[2]
        return [
            c
            for c in range(system.num_chambers)
            if self._base_class_of(base_type, c) == b
        ]

    # -- restriction and classes -----------------------------------------

    def restriction_map(self, r: int) -> np.ndarray:
        """Position in table(r) of each germ's radius-r restriction."""
        if r > self.radius:
            raise ValueError("can only restrict to a smaller radius")
        if r not in self._restriction:
            if r == self.radius:
                arr = np.arange(len(self.germs), dtype=np.int64)
            else:
                target = self.space.table(r)
                cnt = self.trunc.alcove_count(r) if r >= 1 else 0
                out = np.empty(len(self.germs), dtype=np.int64)
                for pos, g in enumerate(self.germs):
                    rg = _restrict_germ(self, g, r, cnt)
                    out[pos] = target.index[rg.canonical_key]
                arr = out
            self._restriction[r] = arr
        return self._restriction[r]

    def germ_base_id(self, g: Germ) -> tuple:
        return g.base_id

    def ray_classes(self, direction: int, ell: int) -> np.ndarray:
        """Class ids by agreement on the hull of {0, ell * w_direction}."""
        key = (direction, ell)
        if key not in self._ray_classes:
            R = self.space.root_system
            vecb = R.coweight_vector(
                Coweight(tuple(ell if i == direction else 0 for i in range(R.rank)))
            )
            self._ray_classes[key] = self._classes_for_region(vecb)
        return self._ray_classes[key]

    def region_classes(self, mu: Coweight) -> np.ndarray:
        """Class ids by agreement on the hull of {0, mu}."""
        key = tuple(mu.coords)
        if key not in self._region_classes:
            R = self.space.root_system
            self._region_classes[key] = self._classes_for_region(R.coweight_vector(mu))
        return self._region_classes[key]

    def _classes_for_region(self, bound_vec) -> np.ndarray:
        system = self.space.system
        R = self.space.root_system
        faces = self.trunc.faces_within(bound_vec)
        plans = [_face_plan(system, self.trunc, rot.perm) for rot in R.rotations]
        seen: Dict[tuple, int] = {}
        out = np.empty(len(self.germs), dtype=np.int64)
        for pos, g in enumerate(self.germs):
            plan = plans[g.sigma_index]
            # the base id covers the radius-0 case, where no face exists
            sig = (g.sigma_index, g.base_id) + tuple(
                _face_id(system, plan[fi], g.chambers) for fi in faces
            )
            if sig not in seen:
                seen[sig] = len(seen)
            out[pos] = seen[sig]
        return out

    def k_matrix(self) -> np.ndarray:
        """Pairwise first-disagreement norms; radius+1 encodes the sentinel."""
        n = self.radius
        size = len(self.germs)
        out = np.full((size, size), n + 1, dtype=np.int16)
        for m in range(n, -1, -1):
            cls = self.restriction_map(m)
            diff = cls[:, None] != cls[None, :]
            out[diff] = m
        return out

    def ki_matrix(self, direction: int) -> np.ndarray:
        n = self.radius
        size = len(self.germs)
        out = np.full((size, size), n + 1, dtype=np.int16)
        for ell in range(n, -1, -1):
            cls = self.ray_classes(direction, ell)
            diff = cls[:, None] != cls[None, :]
            out[diff] = ell
        return out

    def k_between(self, a: int, b: int) -> Optional[int]:
        for m in range(self.radius + 1):
            if self.restriction_map(m)[a] != self.restriction_map(m)[b]:
                return m
        return SENTINEL


def _restrict_germ(table: GermTable, g: Germ, r: int, count_r: int) -> Germ:
    if r == 0:
        return Germ(0, g.sigma_index, (), g.base_id)
    return Germ(r, g.sigma_index, g.chambers[:count_r], g.base_id)


class SectorSpace:
    """Bundles a chamber system with cached truncations and germ tables."""

    def __init__(self, system: ChamberSystem, check: bool = True, threads: int = 0):
        self.system = system
        self.root_system: RootSystem = system.root_system
        if threads <= 0:
            import os

            threads = os.cpu_count() or 1
        self.threads = threads
        if check:
            report = system.validate()
            if not report.passed:
                raise ValueError(
                    "chamber system fails the local checks:\n" + report.summary()
                )
        self._truncations: Dict[int, TruncatedSector] = {}
        self._tables: Dict[int, GermTable] = {}
        self._plans: Dict[int, tuple] = {}
        self._shift_maps: Dict[tuple, np.ndarray] = {}
        self._face_plans: Dict[tuple, list] = {}
        self._covers: Dict[int, tuple] = {}

    def truncation(self, radius: int) -> TruncatedSector:
        if radius not in self._truncations:
            t = truncated_sector(self.root_system, radius)
            if radius >= 1:
                prev = self._truncations.get(radius - 1)
                if prev is not None:
                    same = all(
                        a.key == b.key
                        for a, b in zip(prev.alcoves, t.alcoves[: len(prev.alcoves)])
                    )
                    if not same:
                        raise AssertionError("truncation ordering lost its prefix property")
            self._truncations[radius] = t
        return self._truncations[radius]

    def table(self, radius: int) -> GermTable:
        if radius not in self._tables:
            self._tables[radius] = GermTable(self, radius)
        return self._tables[radius]

    def _extension_plan(self, radius: int):
        """Constraint-propagation metadata for alcoves of the radius ring."""
        if radius not in self._plans:
            trunc = self.truncation(radius)
            stop = trunc.alcove_count(radius)
            rank = self.root_system.rank
            prop = []
            star_sets = []
            vert_stars: Dict[int, List[int]] = {}
            for k in range(stop):
                entries = []
                for (cotype, nb, panel_idx, panel_types) in trunc.adjacency[k]:
                    if nb in (OUTSIDE, WALL) or nb >= stop or nb >= k:
                        continue
                    lab_src = panel_types[0] if rank == 1 else cotype
                    entries.append((nb, lab_src))
                prop.append(entries)
                shared = set()
                for v in trunc.alcoves[k].verts:
                    vi = trunc.vertex_index[v]
                    for j in vert_stars.get(vi, ()):  # alcoves placed before k
                        shared.add(j)
                    vert_stars.setdefault(vi, []).append(k)
                shared.difference_update(j for j, _ in prop[k])
                star_sets.append(sorted(shared))
            self._plans[radius] = (prop, star_sets)
        return self._plans[radius]

    # -- operations -------------------------------------------------------

    def enumerate_germs(self, radius: int) -> GermTable:
        return self.table(radius)

    def restrict(self, g: Germ, r: int) -> Germ:
        if r > g.radius:
            raise ValueError("can only restrict to a smaller radius")
        table = self.table(g.radius)
        cnt = table.trunc.alcove_count(r) if r >= 1 else 0
        return _restrict_germ(table, g, r, cnt)

    def shift_rotation(self, mu: Coweight):
        return self.root_system.rotation_of(mu)

    def shift(self, g: Germ, mu: Coweight) -> Germ:
        """Discard the part of the germ before `mu`: precompose with x + mu."""
        if not mu.dominant:
            raise ValueError("shift needs a dominant coweight")
        if mu.norm > g.radius:
            raise ValueError("insufficient radius for this shift")
        new_radius = g.radius - mu.norm
        R = self.root_system
        rho = R.rotation_of(mu)
        sigma = R.rotations[g.sigma_index]
        new_perm = tuple(sigma.perm[rho.perm[t]] for t in R.index_set)
        new_sigma = R.rotation_index(new_perm)
        trunc = self.truncation(g.radius)
        emb = embed_shift(R, trunc, mu)
        chambers = tuple(g.chambers[emb[a]] for a in range(len(emb)))
        if new_radius == 0:
            base = self._vertex_image_at(g, R.coweight_vector(mu), new_perm)
            return Germ(0, new_sigma, (), base)
        out = Germ(new_radius, new_sigma, chambers, self._base_of(new_sigma, chambers))
        return out

    def _base_of(self, sigma_index: int, chambers) -> tuple:
        base_type = self.root_system.rotations[sigma_index].perm[0]
        b = self.table(1)._base_class_of(base_type, chambers[0]) if chambers else 0
        return ("base", base_type, b)

    def _vertex_image_at(self, g: Germ, point, new_perm) -> tuple:
        trunc = self.truncation(g.radius)
        base_type = new_perm[0]
        for k, a in enumerate(trunc.alcoves):
            if point in a.verts:
                c = g.chambers[k]
                return ("base", base_type, self.table(1)._base_class_of(base_type, c))
        raise ValueError("point is not a vertex of the truncation")

    def shift_map(self, radius: int, mu: Coweight) -> np.ndarray:
        """table(radius) -> table(radius - |mu|) position map of the shift."""
        key = (radius, tuple(mu.coords))
        if key not in self._shift_maps:
            src = self.table(radius)
            dst = self.table(radius - mu.norm)
            out = np.empty(len(src.germs), dtype=np.int64)
            R = self.root_system
            rho = R.rotation_of(mu)
            emb = embed_shift(R, src.trunc, mu)
            sigma_map = {}
            for s, rot in enumerate(R.rotations):
                perm = tuple(rot.perm[rho.perm[t]] for t in R.index_set)
                sigma_map[s] = R.rotation_index(perm)
            for pos, g in enumerate(src.germs):
                chambers = tuple(g.chambers[e] for e in emb)
                if dst.radius == 0:
                    sg = Germ(0, sigma_map[g.sigma_index], (),
                              self._vertex_image_at(g, R.coweight_vector(mu),
                                                    R.rotations[sigma_map[g.sigma_index]].perm))
                else:
                    sg = Germ(dst.radius, sigma_map[g.sigma_index], chambers,
                              self._base_of(sigma_map[g.sigma_index], chambers))
                out[pos] = dst.index[sg.canonical_key]
            self._shift_maps[key] = out
        return self._shift_maps[key]

    # -- the explicit metric ------------------------------------------------

    def _cached_plan(self, radius: int, sigma_index: int):
        key = (radius, sigma_index)
        if key not in self._face_plans:
            trunc = self.truncation(radius)
            perm = self.root_system.rotations[sigma_index].perm
            self._face_plans[key] = _face_plan(self.system, trunc, perm)
        return self._face_plans[key]

    def distance(self, g1: Germ, g2: Germ, theta: Fraction = Fraction(1, 2)):
        """Region-growing distance between two germs of equal radius.

        Returns (DistanceResult, value) where the value is theta^k, or
        theta^radius as an upper bound when the germs coincide on the whole
        truncation (the sentinel case).
        """
        if g1.radius != g2.radius:
            raise ValueError("germs must have the same radius")
        n = g1.radius
        system = self.system
        R = self.root_system
        trunc = self.truncation(n)
        perm1 = R.rotations[g1.sigma_index].perm
        perm2 = R.rotations[g2.sigma_index].perm
        plan1 = self._cached_plan(n, g1.sigma_index)
        plan2 = self._cached_plan(n, g2.sigma_index)

        agree = []
        for fi, f in enumerate(trunc.faces):
            if any(perm1[t] != perm2[t] for t in f.types):
                agree.append(False)
                continue
            agree.append(
                _face_id(system, plan1[fi], g1.chambers)
                == _face_id(system, plan2[fi], g2.chambers)
            )

        region = self._component_of_base(trunc, agree)
        k = SENTINEL
        for cw, norm, vidx in trunc.coweight_vertices:
            fi = trunc.face_index[(vidx,)]
            if fi not in region:
                k = norm
                break
        kdir = []
        for i in range(R.rank):
            ki = SENTINEL
            for ell in range(n + 1):
                v = R.coweight_vector(
                    Coweight(tuple(ell if j == i else 0 for j in range(R.rank)))
                )
                vidx = trunc.vertex_index.get(v)
                if vidx is None:
                    break
                if trunc.face_index[(vidx,)] not in region:
                    ki = ell
                    break
            kdir.append(ki)
        result = DistanceResult(k, tuple(kdir), frozenset(region))
        value = theta ** (k if k is not SENTINEL else n)
        return result, value

    def _cover_relations(self, trunc: TruncatedSector):
        key = trunc.radius
        if key not in self._covers:
            subs: List[List[int]] = [[] for _ in trunc.faces]
            sups: List[List[int]] = [[] for _ in trunc.faces]
            for fi, f in enumerate(trunc.faces):
                if len(f.vidx) == 1:
                    continue
                for drop in range(len(f.vidx)):
                    sub = tuple(v for j, v in enumerate(f.vidx) if j != drop)
                    si = trunc.face_index[sub]
                    subs[fi].append(si)
                    sups[si].append(fi)
            self._covers[key] = (subs, sups)
        return self._covers[key]

    def _component_of_base(self, trunc: TruncatedSector, agree: List[bool]):
        zero = tuple(Fraction(0) for _ in range(self.root_system.dim))
        base_face = trunc.face_index[(trunc.vertex_index[zero],)]
        if not agree[base_face]:
            return set()
        subs, sups = self._cover_relations(trunc)
        region = {base_face}
        fringe = [base_face]
        while fringe:
            fi = fringe.pop()
            for nb in itertools.chain(subs[fi], sups[fi]):
                if nb not in region and agree[nb]:
                    region.add(nb)
                    fringe.append(nb)
        return region

    def directional_k(self, g1: Germ, g2: Germ, direction: int) -> Optional[int]:
        res, _ = self.distance(g1, g2)
        return res.k_directional[direction]

    def vertex_images(self, g: Germ):
        """Induced map on truncation vertices: vertex index -> face id."""
        trunc = self.truncation(g.radius)
        plan = self._cached_plan(g.radius, g.sigma_index)
        out = {}
        for vi in range(len(trunc.vertices)):
            fi = trunc.face_index[(vi,)]
            out[vi] = _face_id(self.system, plan[fi], g.chambers)
        return out


def enumerate_germs(system: ChamberSystem, radius: int, check: bool = True) -> GermTable:
    """Convenience wrapper: a fresh table for one-off use."""
    return SectorSpace(system, check=check).table(radius)


def export_germs_json(table: GermTable) -> dict:
    return {
        "format": "germs/v1",
        "radius": table.radius,
        "count": len(table.germs),
        "germs": [
            {"sigma": g.sigma_index, "chambers": list(g.chambers)}
            for g in table.germs
        ],
    }
