from fractions import Fraction

import numpy as np
import pytest

from weylflow.rootdata import Coweight
from weylflow.sectors import SENTINEL


def test_germ_counts_rank1(k33):
    assert len(k33.space.table(1)) == 18  # one germ per directed edge
    assert len(k33.space.table(2)) == 36  # each extends in q = 2 ways


def test_germ_counts_a2(a2):
    # one germ per (rotation, chamber): the radius-1 truncation is one alcove
    assert len(a2.space.table(1)) == 3 * a2.system.num_chambers


def test_rank1_radius_one_rotation_matches_base_color(k33):
    table = k33.space.table(1)
    rots = k33.system.root_system.rotations
    for g in table.germs:
        base_type = rots[g.sigma_index].perm[0]
        assert g.base_id[1] == base_type


def test_restrict_identity_and_tower(k33):
    space = k33.space
    t3 = space.table(3)
    for g in t3.germs:
        assert space.restrict(g, 3) == g
        assert space.restrict(space.restrict(g, 2), 1) == space.restrict(g, 1)


def test_restriction_maps_surjective(a2):
    for n in (1, 2, 3):
        restr = a2.space.table(n).restriction_map(n - 1)
        assert len(set(restr.tolist())) == len(a2.space.table(n - 1))


def test_extension_regularity(contexts):
    for name, ctx in contexts.items():
        for n in (1, 2, 3):
            restr = ctx.space.table(n).restriction_map(n - 1)
            counts = np.bincount(restr, minlength=len(ctx.space.table(n - 1)))
            assert counts.min() == counts.max(), f"{name} radius {n}"


def test_shift_zero_is_identity(k33):
    space = k33.space
    for g in space.table(2).germs:
        assert space.shift(g, Coweight((0,))) == g


def test_shift_drops_first_edge(k33):
    space = k33.space
    t2 = space.table(2)
    t1 = space.table(1)
    for g in t2.germs:
        s = space.shift(g, Coweight((1,)))
        assert s.radius == 1
        # the remaining edge is the second edge of the path
        assert s.chambers == (g.chambers[1],)
        assert t1.index[s.canonical_key] is not None


def test_shift_composes_with_embedding(a2):
    from weylflow.rootdata import embed_shift

    space = a2.space
    mu = Coweight((1, 0))
    t2 = space.table(2)
    emb = embed_shift(space.root_system, t2.trunc, mu)
    for g in t2.germs[::17]:
        s = space.shift(g, mu)
        assert s.radius == 1
        assert s.chambers == (g.chambers[emb[0]],)


def test_shift_insufficient_radius(k33):
    with pytest.raises(ValueError):
        k33.space.shift(k33.space.table(1).germs[0], Coweight((2,)))


def test_distance_equal_germs_is_sentinel(k33):
    space = k33.space
    g = space.table(2).germs[0]
    res, val = space.distance(g, g)
    assert res.k is SENTINEL
    assert val == Fraction(1, 4)  # reported upper bound theta^radius
    assert res.k_directional == (SENTINEL,)


def test_distance_zero_for_different_base(k33):
    space = k33.space
    table = space.table(1)
    for a in table.germs:
        for b in table.germs:
            res, val = space.distance(a, b)
            if a.base_id != b.base_id or a.sigma_index != b.sigma_index:
                assert res.k == 0 and val == 1


def test_distance_one_for_same_tail_different_edge(k33):
    space = k33.space
    table = space.table(1)
    found = 0
    for a in table.germs:
        for b in table.germs:
            if a is b:
                continue
            if a.sigma_index == b.sigma_index and a.base_id == b.base_id:
                res, val = space.distance(a, b)
                assert res.k == 1 and val == Fraction(1, 2)
                assert res.k_directional == (1,)
                found += 1
    assert found == 18 * 2  # each of 18 germs pairs with q = 2 others


def test_rank1_directional_equals_plain(biregular):
    space = biregular.space
    table = space.table(2)
    for a in range(len(table)):
        for b in range(len(table)):
            res, _ = space.distance(table.germs[a], table.germs[b])
            assert res.k_directional[0] == res.k


def test_a2_direction_split_witness(a2):
    # a pair agreeing along one coweight direction strictly farther than the other
    table = a2.space.table(2)
    k1 = table.ki_matrix(0)
    k2 = table.ki_matrix(1)
    asym = (k2 == 1) & (k1 > 1)
    assert np.any(asym)
    a, b = map(int, np.argwhere(asym)[0])
    res, _ = a2.space.distance(table.germs[a], table.germs[b])
    assert res.k_directional[1] == 1
    assert res.k_directional[0] is SENTINEL or res.k_directional[0] > 1


def test_ultrametric_exhaustive_small(k33, biregular):
    for ctx in (k33, biregular):
        k = ctx.space.table(2).k_matrix().astype(int)
        size = k.shape[0]
        for b in range(size):
            bound = np.minimum(k[:, b][:, None], k[b, :][None, :])
            assert np.all(k >= bound)


def test_max_formula_a2(a2):
    table = a2.space.table(2)
    k = table.k_matrix()
    k1 = table.ki_matrix(0)
    k2 = table.ki_matrix(1)
    resolved = (k <= 2) & (k1 <= 2) & (k2 <= 2)
    assert np.all(k[resolved] == np.minimum(k1, k2)[resolved])


def test_germ_table_canonical_order(contexts):
    for ctx in contexts.values():
        for n in (1, 2):
            germs = ctx.space.table(n).germs
            keys = [g.canonical_key for g in germs]
            assert keys == sorted(keys)


def test_germ_export_schema(k33):
    from weylflow.sectors import export_germs_json

    doc = export_germs_json(k33.space.table(2))
    assert doc["format"] == "germs/v1"
    assert doc["radius"] == 2
    assert doc["count"] == 36
    assert len(doc["germs"]) == 36
    assert set(doc["germs"][0]) == {"sigma", "chambers"}
