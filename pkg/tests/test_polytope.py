import pytest

from orthoforge import (
    build_lattice,
    build_polytope,
    generate,
    is_integer_point,
    is_vertex,
    lift_point,
    membership,
)
from orthoforge.incidence import Q
from orthoforge.polytope import integer_rank
from orthoforge.search import brute_force_orthos


def test_b2_row_counts(b2):
    system = build_polytope(b2)
    assert system.num_vars == 16
    assert len(system.symmetry) == 6
    assert len(system.row_sums) == 4
    assert len(system.commutation) == 16
    assert len(system.all_rows()) == 27
    assert system.trace[1] == 4


def test_one_element_system_forces_one():
    lat = build_lattice(generate("chain", 1))
    system = build_polytope(lat)
    assert system.num_vars == 1
    point = [Q(1)]
    assert membership(system, point).ok
    assert not membership(system, [Q(1, 2)]).ok
    assert is_vertex(system, point)


def test_c2_swap_satisfies_every_row():
    lat = build_lattice(generate("chain", 2))
    system = build_polytope(lat)
    report = membership(system, lift_point(2, (1, 0)))
    assert report.ok
    assert all(report.family_ok.values())


def test_b3_ortho_is_member(b3):
    sigma = brute_force_orthos(b3).orthos[0].sigma
    report = membership(build_polytope(b3), lift_point(8, sigma))
    assert report.ok


def test_b2_identity_violates_trace(b2):
    system = build_polytope(b2)
    report = membership(system, lift_point(4, (0, 1, 2, 3)))
    assert not report.ok
    assert report.family_ok["trace"] is False  # 9 != 4
    assert report.witness is not None


def test_membership_dimension_mismatch(b2):
    with pytest.raises(ValueError):
        membership(build_polytope(b2), [Q(0)] * 3)


def test_negative_coordinate_rejected(b2):
    system = build_polytope(b2)
    point = lift_point(4, (3, 2, 1, 0))
    point[0] -= Q(1, 2)
    report = membership(system, point)
    assert report.family_ok["nonneg"] is False


def test_mo2_midpoint_member_not_integral_not_vertex(mo2):
    system = build_polytope(mo2)
    orthos = brute_force_orthos(mo2).orthos
    assert len(orthos) == 3
    a = lift_point(6, orthos[0].sigma)
    b = lift_point(6, orthos[1].sigma)
    mid = [(x + y) / 2 for x, y in zip(a, b)]
    assert membership(system, mid).ok
    integral, sigma = is_integer_point(system, mid)
    assert not integral and sigma is None
    assert not is_vertex(system, mid)
    # the defining directions: each endpoint is a vertex
    assert is_vertex(system, a)
    assert is_vertex(system, b)


def test_integer_point_extraction(mo2):
    system = build_polytope(mo2)
    ortho = brute_force_orthos(mo2).orthos[0]
    integral, sigma = is_integer_point(system, lift_point(6, ortho.sigma))
    assert integral
    assert sigma == ortho.sigma


def test_third_valued_point_not_integral(b2):
    system = build_polytope(b2)
    point = [Q(1, 3)] * 16
    integral, _ = is_integer_point(system, point)
    assert not integral


def test_convex_combination_stays_member(mo2):
    system = build_polytope(mo2)
    orthos = brute_force_orthos(mo2).orthos
    pts = [lift_point(6, o.sigma) for o in orthos]
    weights = [Q(1, 2), Q(1, 3), Q(1, 6)]
    combo = [
        sum((w * p[i] for w, p in zip(weights, pts)), Q(0))
        for i in range(len(pts[0]))
    ]
    assert membership(system, combo).ok


def test_conjointness_floor_on_members(corpus_lattices):
    # every member has cu-weighted coordinate sum >= n
    for _name, lat in corpus_lattices:
        system = build_polytope(lat)
        for ortho in brute_force_orthos(lat).orthos:
            point = lift_point(lat.n, ortho.sigma)
            cu = system.cu
            total = sum(
                (c * v for c, v in zip(cu, point)), Q(0)
            )
            assert total >= lat.n


def test_integer_rank():
    assert integer_rank([[1, 0], [0, 1]]) == 2
    assert integer_rank([[1, 2], [2, 4]]) == 1
    assert integer_rank([[0, 0], [0, 0]]) == 0
    assert integer_rank([]) == 0
    assert integer_rank([[2, 3, 5], [7, 11, 13], [9, 14, 19]]) == 3
    assert integer_rank([[2, 3, 5], [7, 11, 13], [9, 14, 18]]) == 2
    # Bareiss must survive a zero leading pivot
    assert integer_rank([[0, 1], [1, 0]]) == 2
