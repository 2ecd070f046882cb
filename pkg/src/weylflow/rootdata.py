"""Exact rational root-system data for the supported affine types.

Everything here is combinatorial geometry over the rationals: simple and
positive roots, fundamental coweights, the affine reflection arrangement,
alcove walks, truncations of the dominant sector, and the type rotations
induced by coweight translations.  All coordinates are `fractions.Fraction`,
so enumeration, wall crossings and walk lengths are exact.

Supported kinds (the exact strings used in file formats and CLI flags):

    "A1~"   rank 1, reduced          (homogeneous trees)
    "BC1~"  rank 1, non-reduced      (biregular trees)
    "A2~"   rank 2                   (triangle buildings)
    "B2~"   rank 2                   (also covers the C2 convention)
    "G2~"   rank 2

The ambient realizations are fixed once and for all: A-type and G2 live in
the sum-zero subspace of Q^3, rank-1 types and B2 in Q^1 / Q^2.  Only the
combinatorics (adjacency, wall crossings, vertex types) feed the rest of
the library, so any other rational realization would give identical
results.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

Vec = tuple  # tuple[Fraction, ...]

KINDS = ("A1~", "BC1~", "A2~", "B2~", "G2~")

#: Sentinel for an infinite entry of the Coxeter matrix.
INFINITE = None

_ORDER_CAP = 64  # affine dihedral orders in rank <= 2 never exceed 12


def _fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vec(*xs) -> Vec:
    return tuple(_fr(x) for x in xs)


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a: Vec) -> Vec:
    c = _fr(c)
    return tuple(c * x for x in a)


def dot(a: Vec, b: Vec) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _solve(rows, rhs):
    """Solve a small square rational linear system by Gaussian elimination."""
    n = len(rows)
    m = [list(row) + [r] for row, r in zip(rows, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = Fraction(1) / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


@dataclass(frozen=True)
class Coweight:
    """Integer coordinates in the fundamental-coweight basis."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(a) for a in self.coords))

    @property
    def norm(self) -> int:
        return sum(abs(a) for a in self.coords)

    @property
    def dominant(self) -> bool:
        return all(a >= 0 for a in self.coords)

    @property
    def strongly_dominant(self) -> bool:
        return all(a >= 1 for a in self.coords)

    def __add__(self, other: "Coweight") -> "Coweight":
        return Coweight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Coweight":
        return Coweight(tuple(-a for a in self.coords))

    def __iter__(self):
        return iter(self.coords)


def coweight_norm(mu: Coweight) -> int:
    """The 1-norm of the coordinate vector."""
    return Coweight(tuple(mu)).norm if not isinstance(mu, Coweight) else mu.norm


class TypeRotation(NamedTuple):
    """Permutation of the type set induced by a coweight translation."""

    perm: tuple
    rep: tuple  # coordinates of a coweight inducing the permutation

    def __call__(self, i: int) -> int:
        return self.perm[i]


class Alcove(NamedTuple):
    """A top-dimensional cell of the affine arrangement.

    Vertices are kept lexicographically sorted, with `types` aligned to
    `verts`, so the vertex tuple is a canonical key.
    """

    verts: tuple  # tuple[Vec, ...], sorted
    types: tuple  # tuple[int, ...], aligned with verts

    @property
    def key(self):
        return self.verts

    def barycenter(self) -> Vec:
        n = len(self.verts)
        acc = self.verts[0]
        for v in self.verts[1:]:
            acc = vadd(acc, v)
        return vscale(Fraction(1, n), acc)


def _make_alcove(pairs) -> Alcove:
    pairs = sorted(pairs, key=lambda p: p[0])
    return Alcove(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))


_SIMPLE_DATA = {
    # kind -> (ambient dim, simple roots, positive roots as coefficient tuples)
    "A1~": (1, [vec(1)], [(1,)]),
    "BC1~": (1, [vec(1)], [(1,), (2,)]),
    "A2~": (3, [vec(1, -1, 0), vec(0, 1, -1)], [(1, 0), (0, 1), (1, 1)]),
    "B2~": (2, [vec(1, -1), vec(0, 1)], [(1, 0), (0, 1), (1, 1), (1, 2)]),
    "G2~": (
        3,
        [vec(1, -1, 0), vec(-1, 2, -1)],
        [(1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2)],
    ),
}

# Z-bases of the coroot lattice (coefficients are exact ambient vectors below).
_COROOT_BASIS_COEFFS = {
    "A1~": [(2,)],        # alpha-dual of the single root
    "BC1~": [(1,)],       # dual of the divisible root spans everything
    "A2~": [(1, 0), (0, 1)],
    "B2~": [(1, 0), (0, 2)],   # beta1 and 2*beta2 in root coefficients
    "G2~": None,          # computed from the two simple coroots
}


class RootSystem:
    """Exact realization of one irreducible (possibly non-reduced) system.

    The index set is I = {0, ..., rank}; node 0 is the affine node attached
    through the reflection in the wall {<highest_root, x> = 1}.
    """

    def __init__(self, kind: str):
        if kind not in KINDS:
            raise ValueError(f"unsupported root system kind: {kind!r}")
        self.kind = kind
        dim, simples, pos_coeffs = _SIMPLE_DATA[kind]
        self.dim = dim
        self.rank = len(simples)
        self.index_set = tuple(range(self.rank + 1))
        self.simple_roots = list(simples)
        self.positive_roots = [
            tuple(sum((_fr(c) * b[k] for c, b in zip(cs, simples)), Fraction(0))
                  for k in range(dim))
            for cs in pos_coeffs
        ]
        self.positive_coeffs = [tuple(cs) for cs in pos_coeffs]
        hi = max(range(len(pos_coeffs)), key=lambda t: sum(pos_coeffs[t]))
        self.highest_root = self.positive_roots[hi]
        self.marks = tuple(int(c) for c in pos_coeffs[hi])
        self.coweights = self._solve_coweights()
        self.coxeter_matrix = self._coxeter_matrix()
        self._coroot_basis = self._build_coroot_basis()
        self.rotations = self._type_rotations()
        self.good_types = frozenset(
            self.vertex_type(self.coweight_vector(Coweight(c)))
            for c in self._small_coweight_coords()
        )

    # ------------------------------------------------------------------
    # construction helpers

    def _solve_coweights(self):
        gram = [[dot(bi, bj) for bj in self.simple_roots] for bi in self.simple_roots]
        out = []
        for i in range(self.rank):
            rhs = [Fraction(1) if j == i else Fraction(0) for j in range(self.rank)]
            coeffs = _solve(gram, rhs)
            w = tuple(
                sum((c * b[k] for c, b in zip(coeffs, self.simple_roots)), Fraction(0))
                for k in range(self.dim)
            )
            out.append(w)
        return out

    def coroot(self, alpha: Vec) -> Vec:
        return vscale(Fraction(2) / dot(alpha, alpha), alpha)

    def _build_coroot_basis(self):
        coeffs = _COROOT_BASIS_COEFFS[self.kind]
        if coeffs is None:  # G2: simple coroots already span
            return [self.coroot(b) for b in self.simple_roots]
        if self.kind == "A1~":
            return [self.coroot(self.simple_roots[0])]
        if self.kind == "BC1~":
            return [self.coroot(self.highest_root)]
        basis = []
        for cs in coeffs:
            v = tuple(
                sum((_fr(c) * self.coroot(b)[k] for c, b in zip(cs, self.simple_roots)),
                    Fraction(0))
                for k in range(self.dim)
            )
            basis.append(v)
        return basis

    def _affine_generator(self, i: int):
        """Reflection for node i as an affine map (matrix rows, offset)."""
        if i == 0:
            alpha, k = self.highest_root, Fraction(1)
        else:
            alpha, k = self.simple_roots[i - 1], Fraction(0)
        av = self.coroot(alpha)
        rows = []
        for r in range(self.dim):
            e = tuple(Fraction(1) if c == r else Fraction(0) for c in range(self.dim))
            rows.append(tuple(e[c] - av[r] * alpha[c] for c in range(self.dim)))
        off = vscale(k, av)
        return tuple(rows), off

    @staticmethod
    def _compose(f, g):
        (fa, fb), (ga, gb) = f, g
        rows = tuple(
            tuple(sum((fa[r][k] * ga[k][c] for k in range(len(ga))), Fraction(0))
                  for c in range(len(ga)))
            for r in range(len(fa))
        )
        off = tuple(
            sum((fa[r][k] * gb[k] for k in range(len(gb))), Fraction(0)) + fb[r]
            for r in range(len(fa))
        )
        return rows, off

    def _coxeter_matrix(self):
        gens = [self._affine_generator(i) for i in self.index_set]
        n = len(gens)
        ident_rows = tuple(
            tuple(Fraction(1) if c == r else Fraction(0) for c in range(self.dim))
            for r in range(self.dim)
        )
        ident = (ident_rows, tuple(Fraction(0) for _ in range(self.dim)))
        mat = [[1] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                prod = self._compose(gens[i], gens[j])
                cur, order = prod, 1
                while cur != ident and order <= _ORDER_CAP:
                    cur = self._compose(prod, cur)
                    order += 1
                m = order if order <= _ORDER_CAP else INFINITE
                mat[i][j] = mat[j][i] = m
        return tuple(tuple(row) for row in mat)

    def _small_coweight_coords(self):
        rng = range(0, 3)
        return [c for c in itertools.product(rng, repeat=self.rank) if sum(c) <= 2]

    def _type_rotations(self):
        seen = {}
        for coords in self._small_coweight_coords():
            mu = Coweight(coords)
            v = self.coweight_vector(mu)
            perm = tuple(self.vertex_type(vadd(u, v)) for u in self._c0_vertices())
            if perm not in seen or sum(coords) < sum(seen[perm]):
                seen[perm] = coords
        rots = [TypeRotation(p, seen[p]) for p in seen]
        rots.sort(key=lambda r: (r.perm != tuple(self.index_set), r.perm))
        perms = {r.perm for r in rots}
        for a in rots:  # the permutations must form a group
            for b in rots:
                comp = tuple(a.perm[b.perm[i]] for i in self.index_set)
                if comp not in perms:
                    raise AssertionError("type rotations do not close under composition")
        # a rotation is recovered from the image of the base type; the germ
        # machinery relies on this to compare germs with unequal rotations
        if len({r.perm[0] for r in rots}) != len(rots):
            raise AssertionError("type rotations not separated by the base type")
        return rots

    def rotation_index(self, perm) -> int:
        for k, r in enumerate(self.rotations):
            if r.perm == tuple(perm):
                return k
        raise KeyError(f"not a type rotation: {perm}")

    def rotation_of(self, mu: Coweight) -> TypeRotation:
        """The type rotation induced by translation by `mu`."""
        v = self.coweight_vector(mu)
        perm = tuple(self.vertex_type(vadd(u, v)) for u in self._c0_vertices())
        return self.rotations[self.rotation_index(perm)]

    # ------------------------------------------------------------------
    # coweights and vertex types

    def coweight_vector(self, mu: Coweight) -> Vec:
        acc = tuple(Fraction(0) for _ in range(self.dim))
        for a, w in zip(mu.coords, self.coweights):
            acc = vadd(acc, vscale(a, w))
        return acc

    def coweight_coords(self, v: Vec):
        """Coordinates of `v` in the coweight basis (pairings with simples)."""
        return tuple(dot(v, b) for b in self.simple_roots)

    def coweight_at(self, v: Vec) -> Optional[Coweight]:
        cs = self.coweight_coords(v)
        if any(c.denominator != 1 for c in cs):
            return None
        if self.coweight_vector(Coweight(tuple(int(c) for c in cs))) != v:
            return None
        return Coweight(tuple(int(c) for c in cs))

    def _c0_vertices(self):
        """Vertices of the fundamental alcove, position t holding type t."""
        zero = tuple(Fraction(0) for _ in range(self.dim))
        out = [zero]
        for i in range(self.rank):
            out.append(vscale(Fraction(1, self.marks[i]), self.coweights[i]))
        return out

    def fundamental_alcove(self) -> Alcove:
        vs = self._c0_vertices()
        return _make_alcove([(vs[t], t) for t in range(self.rank + 1)])

    def wall_through(self, points: Sequence[Vec]):
        """The arrangement hyperplane (alpha, k) containing all `points`."""
        for alpha in self.positive_roots:
            k = dot(alpha, points[0])
            if k.denominator == 1 and all(dot(alpha, p) == k for p in points[1:]):
                return alpha, k
        raise ValueError("points do not span an arrangement wall")

    def reflect_point(self, alpha: Vec, k: Fraction, x: Vec) -> Vec:
        return vsub(x, vscale(dot(x, alpha) - k, self.coroot(alpha)))

    def neighbor(self, a: Alcove, drop: int) -> Alcove:
        """The alcove across the panel obtained by dropping vertex `drop`."""
        panel = [v for j, v in enumerate(a.verts) if j != drop]
        alpha, k = self.wall_through(panel)
        new = self.reflect_point(alpha, k, a.verts[drop])
        pairs = [(v, t) for j, (v, t) in enumerate(zip(a.verts, a.types)) if j != drop]
        pairs.append((new, a.types[drop]))
        return _make_alcove(pairs)

    def vertex_type(self, x: Vec) -> int:
        """Type of an arrangement vertex, found by walking an alcove to it."""
        a = self.fundamental_alcove()
        guard = 0
        while x not in a.verts:
            guard += 1
            if guard > 10000:
                raise RuntimeError("vertex walk did not terminate")
            bary = a.barycenter()
            moved = False
            for drop in range(len(a.verts)):
                panel = [v for j, v in enumerate(a.verts) if j != drop]
                alpha, k = self.wall_through(panel)
                side_a = dot(alpha, bary) - k
                side_x = dot(alpha, x) - k
                if side_x * side_a < 0:
                    a = self.neighbor(a, drop)
                    moved = True
                    break
            if not moved:
                raise ValueError(f"{x} is not a vertex of the arrangement")
        return a.types[a.verts.index(x)]

    def in_coroot_lattice(self, v: Vec) -> bool:
        basis = self._coroot_basis
        gram = [[dot(bi, bj) for bj in basis] for bi in basis]
        rhs = [dot(v, bj) for bj in basis]
        coeffs = _solve(gram, rhs)
        if any(c.denominator != 1 for c in coeffs):
            return False
        acc = tuple(Fraction(0) for _ in range(self.dim))
        for c, b in zip(coeffs, basis):
            acc = vadd(acc, vscale(c, b))
        return acc == v


_ROOT_CACHE = {}


def build_root_system(kind: str) -> RootSystem:
    """Construct (and cache) the root-system data for one supported kind."""
    if kind not in _ROOT_CACHE:
        _ROOT_CACHE[kind] = RootSystem(kind)
    return _ROOT_CACHE[kind]


def type_rotations(R: RootSystem):
    """The full group of type rotations, identity first."""
    return list(R.rotations)


# ----------------------------------------------------------------------
# parameter systems


class ParameterSystem:
    """Thickness parameters q_i > 0 per type, with the regularity constraints.

    q_i = q_j is forced whenever the Coxeter entry m_ij is odd and finite,
    and q_i = q_{sigma(i)} for every type rotation sigma.
    """

    def __init__(self, R: RootSystem, q):
        self.R = R
        if isinstance(q, int):
            q = {i: q for i in R.index_set}
        self.q = {int(i): int(q[i]) for i in sorted(q)}
        if set(self.q) != set(R.index_set):
            raise ValueError("parameter system must cover every type")
        if any(v < 1 for v in self.q.values()):
            raise ValueError("parameters must be positive")
        M = R.coxeter_matrix
        for i in R.index_set:
            for j in R.index_set:
                m = M[i][j]
                if i != j and m is not INFINITE and m % 2 == 1 and self.q[i] != self.q[j]:
                    raise ValueError(f"odd Coxeter entry m[{i}][{j}]={m} forces q_{i} = q_{j}")
        for rot in R.rotations:
            for i in R.index_set:
                if self.q[i] != self.q[rot(i)]:
                    raise ValueError("parameters must be constant on rotation orbits")

    def __getitem__(self, i: int) -> int:
        return self.q[i]

    def as_dict(self):
        return dict(self.q)


# ----------------------------------------------------------------------
# alcove walks and translation parameters


def _walk_region_test(R: RootSystem, target_vec: Vec):
    # minimal galleries stay inside the hull of the two alcoves; the hull is
    # bounded by arrangement walls, so the caps round outward to integers
    caps = []
    for alpha in R.positive_roots:
        r = max(dot(alpha, v) for v in R._c0_vertices())
        t = dot(alpha, target_vec)
        lo = min(Fraction(0), t)
        hi = max(Fraction(0), t) + r
        lo = Fraction(lo.numerator // lo.denominator)  # floor
        hi = Fraction(-((-hi.numerator) // hi.denominator))  # ceil
        caps.append((alpha, lo, hi))

    def inside(a: Alcove) -> bool:
        return all(
            lo <= dot(alpha, v) <= hi
            for alpha, lo, hi in caps
            for v in a.verts
        )

    return inside


def _minimal_walk_data(R: RootSystem, mu: Coweight):
    """BFS between the base alcove and its translate by `mu`.

    Returns (distance map, predecessor lists with crossing labels, start, goal).
    Minimal galleries between the two alcoves stay inside the convex hull of
    their union, so the search is restricted to that finite box.
    """
    tv = R.coweight_vector(mu)
    start = R.fundamental_alcove()
    goal = _make_alcove([(vadd(v, tv), t) for v, t in zip(start.verts, start.types)])
    inside = _walk_region_test(R, tv)
    dist = {start.key: 0}
    preds = {start.key: []}
    alcoves = {start.key: start}
    fringe = deque([start])
    while fringe:
        a = fringe.popleft()
        d = dist[a.key]
        for drop in range(len(a.verts)):
            b = R.neighbor(a, drop)
            if not inside(b):
                continue
            label = a.types[drop]  # cotype of the crossed panel
            if b.key not in dist:
                dist[b.key] = d + 1
                preds[b.key] = [(a.key, label)]
                alcoves[b.key] = b
                fringe.append(b)
            elif dist[b.key] == d + 1:
                preds[b.key].append((a.key, label))
    if goal.key not in dist:
        raise RuntimeError("translation walk failed to reach its target")
    return dist, preds, start, goal


def minimal_walk_types(R: RootSystem, mu: Coweight):
    """Crossing cotypes of one minimal alcove walk to the translated alcove."""
    if not mu.dominant:
        raise ValueError("coweight must be dominant")
    dist, preds, start, goal = _minimal_walk_data(R, mu)
    labels = []
    cur = goal.key
    while cur != start.key:
        prev, label = preds[cur][0]
        labels.append(label)
        cur = prev
    labels.reverse()
    return labels


def all_minimal_walk_products(R: RootSystem, q: ParameterSystem, mu: Coweight):
    """Set of q-products over *all* minimal walks (should be a singleton)."""
    dist, preds, start, goal = _minimal_walk_data(R, mu)
    cache = {start.key: {1}}

    def products(key):
        if key not in cache:
            acc = set()
            for prev, label in preds[key]:
                for p in products(prev):
                    acc.add(p * q[label])
            cache[key] = acc
        return cache[key]

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * dist[goal.key] + 100))
    try:
        return products(goal.key)
    finally:
        sys.setrecursionlimit(old)


def translation_parameter(R: RootSystem, q: ParameterSystem, mu: Coweight) -> int:
    """q-product along one minimal alcove walk to the mu-translated alcove.

    This is the number of chambers at the corresponding gallery position,
    hence also the preimage count of the shift by `mu` on sectors.
    """
    if not mu.dominant:
        raise ValueError("coweight must be dominant")
    out = 1
    for label in minimal_walk_types(R, mu):
        out *= q[label]
    return out


# ----------------------------------------------------------------------
# truncated sectors


class Face(NamedTuple):
    """A face of the truncation, identified by its sorted vertex indices."""

    vidx: tuple       # vertex indices, sorted
    types: tuple      # aligned vertex types
    anchor: int       # lowest incident alcove index
    anchor_pos: tuple  # positions of the face vertices inside the anchor


OUTSIDE = -1   # neighbor exists in the sector but not in the truncation
WALL = -2      # crossing would leave the dominant sector


class TruncatedSector:
    """All alcoves of the dominant sector inside the hull of Y_n.

    Y_n is the set of dominant coweights of norm at most n and the hull is
    cut out by the inequalities 0 <= <alpha, x> <= n * max_i <alpha, w_i>
    over positive roots alpha.  Alcoves are ordered by (entry radius,
    gallery distance from the base alcove, barycenter), which makes the
    alcove list of a smaller radius a prefix of a larger one.
    """

    def __init__(self, R: RootSystem, radius: int):
        if radius < 0:
            raise ValueError("radius must be >= 0")
        self.R = R
        self.radius = radius
        self._cstar = [
            max(dot(alpha, w) for w in R.coweights) for alpha in R.positive_roots
        ]
        self._enumerate()
        self._index_vertices()
        self._build_adjacency()
        self._build_faces()

    # -- enumeration ----------------------------------------------------

    def _entry_radius(self, a: Alcove) -> int:
        worst = 0
        for alpha, c in zip(self.R.positive_roots, self._cstar):
            top = max(dot(alpha, v) for v in a.verts)
            need = -(-top.numerator // (top.denominator * c))  # ceil
            worst = max(worst, int(need))
        return worst

    def _inside(self, a: Alcove) -> bool:
        for alpha, c in zip(self.R.positive_roots, self._cstar):
            cap = self.radius * c
            for v in a.verts:
                d = dot(alpha, v)
                if d < 0 or d > cap:
                    return False
        return True

    def _enumerate(self):
        R = self.R
        if self.radius == 0:
            self.alcoves = []
            self.gallery_dist = []
            self.entry_radius = []
            self.count_at_radius = [0]
            return
        start = R.fundamental_alcove()
        dist = {start.key: 0}
        store = {start.key: start}
        fringe = deque([start])
        while fringe:
            a = fringe.popleft()
            for drop in range(len(a.verts)):
                b = R.neighbor(a, drop)
                if b.key in dist or not self._inside(b):
                    continue
                dist[b.key] = dist[a.key] + 1
                store[b.key] = b
                fringe.append(b)
        order = sorted(
            store.values(),
            key=lambda a: (self._entry_radius(a), dist[a.key], a.barycenter()),
        )
        self.alcoves = order
        self.gallery_dist = [dist[a.key] for a in order]
        self.entry_radius = [self._entry_radius(a) for a in order]
        self.count_at_radius = [
            sum(1 for r in self.entry_radius if r <= k) for k in range(self.radius + 1)
        ]

    # -- vertices and adjacency -----------------------------------------

    def _index_vertices(self):
        self.vertex_index = {}
        self.vertices = []
        self.vertex_types = []
        for a in self.alcoves:
            for v, t in zip(a.verts, a.types):
                if v not in self.vertex_index:
                    self.vertex_index[v] = len(self.vertices)
                    self.vertices.append(v)
                    self.vertex_types.append(t)
        self.coweight_vertices = []
        for idx, v in enumerate(self.vertices):
            cw = self.R.coweight_at(v)
            if cw is not None and cw.dominant:
                self.coweight_vertices.append((cw, cw.norm, idx))
        self.coweight_vertices.sort(key=lambda t: (t[1], t[0].coords))

    def _build_adjacency(self):
        key_to_idx = {a.key: i for i, a in enumerate(self.alcoves)}
        self.adjacency = []
        for a in self.alcoves:
            row = []
            for drop in range(len(a.verts)):
                cotype = a.types[drop]
                panel_idx = tuple(
                    self.vertex_index[v] for j, v in enumerate(a.verts) if j != drop
                )
                panel_types = tuple(t for j, t in enumerate(a.types) if j != drop)
                b = self.R.neighbor(a, drop)
                if b.key in key_to_idx:
                    nb = key_to_idx[b.key]
                elif all(dot(beta, b.barycenter()) > 0 for beta in self.R.simple_roots):
                    nb = OUTSIDE
                else:
                    nb = WALL
                row.append((cotype, nb, panel_idx, panel_types))
            self.adjacency.append(tuple(row))

    def _build_faces(self):
        seen = {}
        faces = []
        for ai, a in enumerate(self.alcoves):
            idxs = [self.vertex_index[v] for v in a.verts]
            m = len(idxs)
            for size in range(1, m + 1):
                for sub in itertools.combinations(range(m), size):
                    key = tuple(sorted(idxs[j] for j in sub))
                    if key in seen:
                        continue
                    seen[key] = len(faces)
                    order = sorted(sub, key=lambda j: idxs[j])
                    faces.append(
                        Face(
                            vidx=key,
                            types=tuple(a.types[j] for j in order),
                            anchor=ai,
                            anchor_pos=tuple(order),
                        )
                    )
        self.faces = faces
        self.face_index = seen

    # -- derived data -----------------------------------------------------

    def alcove_count(self, radius: Optional[int] = None) -> int:
        if radius is None:
            return len(self.alcoves)
        if radius > self.radius:
            raise ValueError("radius exceeds the truncation")
        return self.count_at_radius[radius]

    def faces_within(self, bound_vec: Vec):
        """Indices of faces inside the hull of {0, bound_vec}."""
        caps = [(alpha, dot(alpha, bound_vec)) for alpha in self.R.positive_roots]
        out = []
        for fi, f in enumerate(self.faces):
            ok = True
            for alpha, cap in caps:
                for vi in f.vidx:
                    d = dot(alpha, self.vertices[vi])
                    if d < 0 or d > cap:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append(fi)
        return out


def truncated_sector(R: RootSystem, radius: int) -> TruncatedSector:
    """Enumerate the radius-n truncation of the dominant sector."""
    return TruncatedSector(R, radius)


def embed_shift(R: RootSystem, trunc: TruncatedSector, mu: Coweight):
    """Index map sending alcoves of the radius-(n-|mu|) truncation into
    `trunc` by translation by `mu`.

    Entry j of the result is the index inside `trunc` of (alcove j) + mu.
    """
    if not mu.dominant:
        raise ValueError("coweight must be dominant")
    small_radius = trunc.radius - mu.norm
    if small_radius < 0:
        raise ValueError("truncation radius too small for this shift")
    tv = R.coweight_vector(mu)
    key_to_idx = {a.key: i for i, a in enumerate(trunc.alcoves)}
    out = []
    for a in trunc.alcoves[: trunc.alcove_count(small_radius)]:
        shifted = _make_alcove(
            [(vadd(v, tv), t) for v, t in zip(a.verts, a.types)]
        )
        out.append(key_to_idx[shifted.key])
    return out
