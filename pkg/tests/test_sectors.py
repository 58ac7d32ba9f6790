"""Finite groups, hom enumeration, conjugacy, and sector sums."""

from fractions import Fraction

import pytest

from orbichar import (
    FgAbelian,
    FiniteGroup,
    FixedPointCharacter,
    FixedPointDataError,
    FreeGroup,
    HomBudgetExceeded,
    MirroredCylinder,
    OrbifoldSignature,
    Presented,
    chi_es_mirrored,
    chi_gamma,
    chi_gamma_mirrored,
    chi_gamma_quotient,
    chi_top,
    cyclic_group,
    dihedral_group,
    direct_product,
    enumerate_homs,
    group_by_name,
    hom_classes,
    hom_count_cyclic,
    rotation_kernel,
    rotation_sphere_action,
)

BATTERY = (
    FgAbelian(0),
    FgAbelian(1),
    FgAbelian(2),
    FgAbelian(3),
    FgAbelian(0, (2,)),
    FgAbelian(0, (6,)),
    FgAbelian(1, (4,)),
)


# ---------------------------------------------------------------------------
# group construction
# ---------------------------------------------------------------------------

def test_cyclic_group_structure():
    group = cyclic_group(6)
    assert group.order == 6
    assert group.identity == 0
    assert group.element_order(1) == 6
    assert group.inverse[2] == 4


def test_dihedral_group_structure():
    group = dihedral_group(3)
    assert group.order == 6
    # nonabelian: a reflection and a rotation do not commute
    assert group.mul(1, 3) != group.mul(3, 1)
    # reflections square to the identity
    assert all(group.mul(i, i) == 0 for i in range(3, 6))


def test_direct_product_matches_cyclic_by_hom_counts():
    product = direct_product(cyclic_group(2), cyclic_group(3))
    six = cyclic_group(6)
    assert product.order == 6
    for gamma in BATTERY:
        assert len(enumerate_homs(gamma, product)) == len(enumerate_homs(gamma, six))


def test_group_by_name():
    assert group_by_name("C6").order == 6
    assert group_by_name("D10").order == 10
    assert group_by_name("C2xC3").order == 6
    with pytest.raises(ValueError):
        group_by_name("Q8")
    with pytest.raises(ValueError):
        group_by_name("D7")


def test_table_validation():
    with pytest.raises(ValueError):
        FiniteGroup([[0, 1], [1, 1]])  # 1 has no inverse
    with pytest.raises(ValueError):
        FiniteGroup([[1, 0], [0, 0]])  # no identity row/column pairing
    with pytest.raises(ValueError):
        FiniteGroup([[0, 1], [1, 2]])  # entry out of range
    # the smallest nonassociative magma with an identity
    with pytest.raises(ValueError):
        FiniteGroup(
            [
                [0, 1, 2, 3, 4],
                [1, 0, 3, 4, 2],
                [2, 4, 0, 1, 3],
                [3, 2, 4, 0, 1],
                [4, 3, 1, 2, 0],
            ]
        )


def test_group_json_round_trip():
    group = dihedral_group(5)
    clone = FiniteGroup.from_json(group.to_json())
    assert clone.table == group.table
    with pytest.raises(ValueError):
        FiniteGroup.from_json({"order": 3, "table": [[0, 1], [1, 0]]})


def test_subgroup_closure():
    group = dihedral_group(3)
    assert group.subgroup_closure([1]) == frozenset({0, 1, 2})
    assert group.subgroup_closure([3]) == frozenset({0, 3})
    assert group.subgroup_closure([1, 3]) == frozenset(range(6))
    assert group.subgroup_closure([]) == frozenset({0})


# ---------------------------------------------------------------------------
# hom enumeration
# ---------------------------------------------------------------------------

def test_enumerate_homs_counts():
    assert len(enumerate_homs(FgAbelian(1), cyclic_group(6))) == 6
    assert len(enumerate_homs(FgAbelian(2), dihedral_group(3))) == 18
    assert enumerate_homs(FgAbelian(0), dihedral_group(7)) == [()]


def test_free_group_homs_are_unconstrained():
    group = dihedral_group(3)
    assert len(enumerate_homs(FreeGroup(2), group)) == 36
    assert len(enumerate_homs(FgAbelian(2), group)) == 18


def test_presented_homs_check_relators():
    group = dihedral_group(3)
    involutions = enumerate_homs(Presented(("x",), ("x^2",)), group)
    # the identity plus the three reflections
    assert sorted(involutions) == [(0,), (3,), (4,), (5,)]
    klein = Presented(("x", "y"), ("x^2", "y^2", "x y x^-1 y^-1"))
    # no two distinct reflections commute when the rotation count is odd
    images = enumerate_homs(klein, group)
    assert all(x == 0 or y == 0 or x == y for x, y in images)


def test_hom_counts_into_cyclic_match_closed_form():
    for rank in range(3):
        for torsion in [(), (2,), (5,), (8,), (3, 4), (8, 8)]:
            gamma = FgAbelian(rank, torsion)
            for m in range(1, 13):
                assert len(enumerate_homs(gamma, cyclic_group(m))) == hom_count_cyclic(
                    gamma, m
                )


def test_hom_budget():
    with pytest.raises(HomBudgetExceeded):
        enumerate_homs(FgAbelian(3), cyclic_group(12), budget=1000)
    assert len(enumerate_homs(FgAbelian(3), cyclic_group(12), budget=1729)) == 1728


def test_hom_budget_env_override(monkeypatch):
    monkeypatch.setenv("ORBICHAR_HOM_BUDGET", "10")
    with pytest.raises(HomBudgetExceeded):
        enumerate_homs(FgAbelian(2), cyclic_group(6))


# ---------------------------------------------------------------------------
# conjugacy classes
# ---------------------------------------------------------------------------

def test_hom_classes_abelian_group():
    classes = hom_classes(FgAbelian(1), cyclic_group(6))
    assert len(classes) == 6
    assert all(cls.centralizer_order == 6 and cls.size == 1 for cls in classes)


def test_hom_classes_dihedral():
    classes = hom_classes(FgAbelian(1), dihedral_group(3))
    assert [(cls.size, cls.centralizer_order) for cls in classes] == [
        (1, 6),
        (2, 3),
        (3, 2),
    ]
    reflection_class = classes[-1]
    assert reflection_class.image == frozenset({0, 3})


def test_class_equation():
    for gamma in (FgAbelian(1), FgAbelian(2), FgAbelian(0, (2,))):
        for group in (dihedral_group(3), dihedral_group(5), cyclic_group(8)):
            classes = hom_classes(gamma, group)
            assert sum(cls.size for cls in classes) == len(enumerate_homs(gamma, group))
            assert all(cls.size * cls.centralizer_order == group.order for cls in classes)


# ---------------------------------------------------------------------------
# fixed-point data and quotient sums
# ---------------------------------------------------------------------------

def test_fixed_point_character_json():
    fixed = FixedPointCharacter({frozenset({0}): 2, frozenset({0, 1}): 0})
    clone = FixedPointCharacter.from_json(fixed.to_json())
    assert clone.chi(frozenset({0, 1})) == 0
    assert clone.subgroups() == [frozenset({0}), frozenset({0, 1})]


def test_fixed_point_character_missing_entry():
    fixed = FixedPointCharacter({frozenset({0}): 2})
    with pytest.raises(FixedPointDataError) as err:
        fixed.chi(frozenset({0, 2, 4}))
    assert "[0, 2, 4]" in str(err.value)


def test_quotient_missing_subgroup_names_it():
    group, fixed = rotation_sphere_action(6, 1)
    partial = FixedPointCharacter({frozenset({0}): 2})
    with pytest.raises(FixedPointDataError):
        chi_gamma_quotient(group, partial, FgAbelian(1))


def test_rotation_sphere_kernels():
    assert rotation_kernel(6, 1) == frozenset({0})
    assert rotation_kernel(6, 2) == frozenset({0, 3})
    assert rotation_kernel(6, 3) == frozenset({0, 2, 4})
    with pytest.raises(ValueError):
        rotation_kernel(6, 6)


def test_rotation_sphere_action_covers_all_subgroups():
    group, fixed = rotation_sphere_action(12, 5)
    assert len(fixed.subgroups()) == 6  # one subgroup per divisor of 12
    assert all(fixed.chi(sub) == 2 for sub in fixed.subgroups())


def test_noneffective_rotations_are_indistinguishable():
    effective = rotation_sphere_action(6, 1)
    noneffective = rotation_sphere_action(6, 2)
    for gamma in BATTERY:
        assert chi_gamma_quotient(*effective, gamma) == chi_gamma_quotient(
            *noneffective, gamma
        )
    assert chi_gamma_quotient(*effective, FgAbelian(1)) == 2
    classes = hom_classes(FgAbelian(1), effective[0])
    assert len(classes) == 6
    assert all(Fraction(2, cls.centralizer_order) == Fraction(1, 3) for cls in classes)


def test_quotient_matches_signature_formula():
    # Z/n rotations on the sphere present Sigma_0(n, n)
    for n in (2, 5, 12):
        action = rotation_sphere_action(n, 1)
        signature = OrbifoldSignature(0, {n: 2})
        for gamma in BATTERY:
            assert chi_gamma_quotient(*action, gamma) == chi_gamma(signature, gamma)


def test_quotient_free_abelian_closed_form():
    for n in (3, 7, 10):
        action = rotation_sphere_action(n, 1)
        for level in range(4):
            assert chi_gamma_quotient(*action, FgAbelian(level)) == 2 * Fraction(n) ** (
                level - 1
            )


def test_quotient_abelian_group_ignores_commutators():
    action = rotation_sphere_action(6, 1)
    presented = Presented(("x", "y"), ("x y x^-1 y^-1", "y^4"))
    assert chi_gamma_quotient(*action, presented) == chi_gamma_quotient(
        *action, FgAbelian(1, (4,))
    )


# ---------------------------------------------------------------------------
# mirrored cylinders
# ---------------------------------------------------------------------------

MIRROR_BATTERY = (
    FgAbelian(0),
    FgAbelian(1),
    FgAbelian(2),
    FgAbelian(3),
    FgAbelian(0, (2,)),
    FgAbelian(0, (3,)),
    FgAbelian(1, (2,)),
)


def test_mirrored_battery_equality():
    first = MirroredCylinder((3, 5), (7, 11))
    second = MirroredCylinder((3, 7), (5, 11))
    for gamma in MIRROR_BATTERY:
        assert chi_gamma_mirrored(first, gamma) == chi_gamma_mirrored(second, gamma)


def test_mirrored_trivial_gamma_is_chi_es():
    cylinder = MirroredCylinder((3, 5), (7, 11))
    assert chi_gamma_mirrored(cylinder, FgAbelian(0)) == Fraction(-1867, 1155)
    assert chi_gamma_mirrored(cylinder, FgAbelian(0)) == chi_es_mirrored(cylinder)


def test_mirrored_inertia_value_is_chi_top():
    # the level-1 characteristic equals the Euler characteristic of the
    # underlying space, which is 0 for a cylinder
    cylinder = MirroredCylinder((3, 5), (7, 11))
    assert chi_gamma_mirrored(cylinder, FgAbelian(1)) == 0


def test_mirrored_depends_only_on_corner_multiset():
    values = set()
    for split in [((3, 5), (7, 11)), ((3, 5, 7, 11), ()), ((11,), (3, 5, 7))]:
        values.add(chi_gamma_mirrored(MirroredCylinder(*split), FgAbelian(2)))
    assert len(values) == 1
    assert values == {Fraction(11)}


def test_mirrored_rotation_classes_match_cyclic_hom_count():
    # per corner of order n the nontrivial rotation-image classes pair up
    # homs with their inverses: (|HOM(gamma, Z/n)| - 1) / 2 classes, 1/n each
    cylinder = MirroredCylinder((5,), ())
    for gamma in MIRROR_BATTERY:
        expected = chi_es_mirrored(cylinder) + Fraction(
            hom_count_cyclic(gamma, 5) - 1, 2 * 5
        )
        assert chi_gamma_mirrored(cylinder, gamma) == expected


def test_mirrored_free_group_uses_abelianization():
    cylinder = MirroredCylinder((3, 5), (7, 11))
    assert chi_gamma_mirrored(cylinder, FreeGroup(2)) == chi_gamma_mirrored(
        cylinder, FgAbelian(2)
    )
