"""Stacky fans: validation, Box elements, walls, polytopes, subdivisions."""

from fractions import Fraction as F

import pytest

from orbimirror.exact import cone_index
from orbimirror.fan import (DiscClass, IncompleteFanError,
                            InvalidDiscDataError, LabeledPolytope,
                            NonBasicClassError, NonSimpleVertexError,
                            PointNotInteriorError, StackyFan, basic_box_class,
                            basic_ray_class, blaschke_boundary_check,
                            compute_box, disc_area, fan_from_json,
                            fan_to_json, fan_to_polytope, is_gorenstein,
                            maslov_index_cw, maslov_index_desingularized,
                            polytope_to_fan, primitive_collections,
                            star_subdivide_xbar, validate_fan,
                            wall_curve_classes)
from orbimirror.families import (f2_fan, kp_bundle_fan, p1_orbifold, p2_fan,
                                 wpn_fan)


def test_validate_families():
    for fan in (wpn_fan(2), wpn_fan(3), wpn_fan(4), f2_fan(),
                kp_bundle_fan(3), p2_fan(), p1_orbifold(3, 5)):
        assert validate_fan(fan).valid


def test_validate_incomplete():
    fan = StackyFan.make(2, ((1, 0), (0, 1)), ((0, 1),))
    rep = validate_fan(fan)
    assert not rep.valid and not rep.complete


def test_validate_overlapping():
    # two maximal cones overlapping in their interiors
    fan = StackyFan.make(2, ((1, 0), (0, 1), (1, 1), (-1, -1)),
                         ((0, 1), (0, 2), (1, 2), (0, 3), (1, 3)))
    assert not validate_fan(fan).valid


def test_box_p112():
    fan = wpn_fan(2)
    box = compute_box(fan)
    assert len(box) == 1
    el = box[0]
    assert el.nu == (0, 1) and el.age == 1 and el.t == (F(1, 2), F(1, 2))
    assert is_gorenstein(fan)


def test_box_football():
    fan = p1_orbifold(3, 5)
    box = compute_box(fan)
    assert len(box) == 6
    assert sorted(el.age for el in box) == [F(1, 5), F(1, 3), F(2, 5),
                                            F(3, 5), F(2, 3), F(4, 5)]
    assert not is_gorenstein(fan)


def test_box_smooth_empty():
    assert compute_box(p2_fan()) == ()
    assert compute_box(f2_fan()) == ()


def test_box_size_is_index():
    for fan in (wpn_fan(2), wpn_fan(3), p1_orbifold(3, 5)):
        box = compute_box(fan)
        # Box elements of each maximal cone, counted with the cone they
        # belong to, cover the group of that cone minus the identity
        total = sum(cone_index(fan.cone_generators(c)) - 1
                    for c in fan.max_cones)
        # elements on shared faces are counted once per containing cone
        assert len(box) <= total
        assert len(box) >= max(cone_index(fan.cone_generators(c))
                               for c in fan.max_cones) - 1


def test_walls_p2():
    walls = wall_curve_classes(p2_fan())
    assert len(walls) == 3
    assert all(w.c1 == 3 for w in walls)


def test_walls_f2():
    walls = wall_curve_classes(f2_fan())
    assert sorted(w.c1 for w in walls) == [0, 2, 2, 4]
    # semi-Fano but not Fano
    assert all(w.c1 >= 0 for w in walls)


def test_walls_p112():
    walls = wall_curve_classes(wpn_fan(2))
    # e.g. (1,0) + (-1,2) + 2(0,-1) = 0 sums to 4 for every wall
    assert sorted(w.c1 for w in walls) == [4, 4, 4]


def test_primitive_collections():
    assert primitive_collections(p2_fan()) == [(0, 1, 2)]
    assert sorted(primitive_collections(f2_fan())) == [(0, 1), (2, 3)]


def test_polytope_roundtrip():
    fan = p2_fan()
    P = fan_to_polytope(fan, [-1, -1, -1])
    back = polytope_to_fan(P)
    assert set(back.max_cones) == set(fan.max_cones)
    assert back.stacky_vectors == fan.stacky_vectors


def test_polytope_non_simple():
    # square pyramid apex: four facets meeting in one vertex (dim 3)
    P = LabeledPolytope.make(
        [(0, 0, 1), (1, 0, -1), (-1, 0, -1), (0, 1, -1), (0, -1, -1)],
        [0, -1, -1, -1, -1])
    with pytest.raises(NonSimpleVertexError):
        polytope_to_fan(P)


def test_disc_area():
    fan = wpn_fan(2)
    P = fan_to_polytope(fan, [-1, -1, -1])
    box = compute_box(fan)
    u = (F(0), F(0))
    areas = [disc_area(P, u, j) for j in range(3)]
    assert all(a > 0 for a in areas)
    nu_area = disc_area(P, u, box[0])
    assert nu_area == F(1, 2) * areas[0] + F(1, 2) * areas[1]
    with pytest.raises(PointNotInteriorError):
        disc_area(P, (10, 10), 0)


def test_maslov_indices():
    fan = wpn_fan(2)
    box = compute_box(fan)
    beta_ray = basic_ray_class(fan, 0, box)
    assert maslov_index_cw(beta_ray, box) == 2
    beta_box = basic_box_class(fan, 0, box)
    assert maslov_index_cw(beta_box, box) == 2  # age one sector
    assert maslov_index_desingularized(beta_box, box) == 0


def test_xbar_replaces_opposite_ray():
    fan = wpn_fan(2)
    box = compute_box(fan)
    beta = basic_box_class(fan, 0, box)
    xbar = star_subdivide_xbar(fan, beta)
    # -nu = (0,-1) is already the third ray
    assert xbar.replaced_ray and xbar.new_ray_index == 2
    assert xbar.fan == fan


def test_xbar_star_subdivides():
    fan = p2_fan()
    box = compute_box(fan)
    beta = basic_ray_class(fan, 0, box)
    xbar = star_subdivide_xbar(fan, beta)
    assert not xbar.replaced_ray
    assert xbar.infinity_vector == (-1, 0)
    assert len(xbar.fan.stacky_vectors) == 4
    assert validate_fan(xbar.fan).valid


def test_xbar_requires_basic():
    fan = p2_fan()
    box = compute_box(fan)
    beta = DiscClass(fan, (1, 1, 0), (), F(0))
    with pytest.raises(NonBasicClassError):
        star_subdivide_xbar(fan, beta)


def test_xbar_requires_complete():
    fan = StackyFan.make(2, ((1, 0), (0, 1)), ((0, 1),))
    beta = DiscClass(fan, (1, 0), (), F(0))
    with pytest.raises(IncompleteFanError):
        star_subdivide_xbar(fan, beta)


def test_fan_json_roundtrip():
    fan = wpn_fan(3)
    data = fan_to_json(fan)
    assert fan_from_json(data) == fan


def test_fan_json_labels():
    data = {"dim": 1, "stacky_vectors": [[1], [-1]],
            "max_cones": [[0], [1]], "labels": [3, 5]}
    fan = fan_from_json(data)
    assert fan.stacky_vectors == ((3,), (-5,))


def test_blaschke_boundary():
    # single Blaschke factor: |w| = |a| on the whole boundary circle
    dev = blaschke_boundary_check({"a": [2.0], "alphas": [[0.3 + 0.1j]],
                                   "z_plus": [], "t": []})
    assert dev < 1e-12
    with pytest.raises(InvalidDiscDataError):
        blaschke_boundary_check({"a": [1.0], "alphas": [[1.5]],
                                 "z_plus": [], "t": []})
