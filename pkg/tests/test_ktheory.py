import pytest

from isotower.errors import InvalidInput, NotInvertible, TooLarge
from isotower.ktheory import (
    GroupSpec,
    RepElement,
    RepPoly,
    Representation,
    all_representations,
    augmentation,
    character_value,
    check_scale,
    exterior_power,
    f_product_check,
    f_V,
    f_V_product,
    is_subrep,
    laurent_reduce,
    residue,
    restriction_kernel_check,
)
from isotower.lattice import to_lists

Z2 = GroupSpec((2,))
Z3 = GroupSpec((3,))
ONE = RepElement.one(Z2)
SIGMA = RepElement.char(Z2, (1,))


def _rep(group, *chars):
    return Representation.of(group, [(c,) for c in chars])


def test_group_parse():
    assert GroupSpec.parse("2x3").orders == (2, 3)
    assert GroupSpec.parse("trivial").orders == (1,)
    assert GroupSpec.parse(" 1 ").order == 1
    assert GroupSpec.parse("2x3").order == 6


@pytest.mark.parametrize("text", ["abc", "2x", "0", "2x-1"])
def test_group_parse_errors(text):
    with pytest.raises(InvalidInput):
        GroupSpec.parse(text)


def test_ring_arithmetic():
    assert SIGMA * SIGMA == ONE
    assert ((ONE + SIGMA) * (ONE - SIGMA)).is_zero()
    assert 2 * SIGMA - SIGMA == SIGMA
    assert 1 - SIGMA == ONE - SIGMA


def test_elements_of_different_groups_do_not_mix():
    with pytest.raises(InvalidInput):
        SIGMA + RepElement.one(Z3)


def test_unit_inverse():
    omega = RepElement.char(Z3, (1,))
    assert omega.unit_inverse() == RepElement.char(Z3, (2,))
    assert (-omega).unit_inverse() * (-omega) == 1
    with pytest.raises(NotInvertible):
        (ONE + SIGMA).unit_inverse()
    with pytest.raises(NotInvertible):
        RepElement(Z2, {(0,): 2}).unit_inverse()


def test_augmentation_and_characters():
    x = ONE + 3 * SIGMA
    assert augmentation(x) == 4
    assert character_value(x, (0,)) == pytest.approx(4.0)
    assert character_value(x, (1,)) == pytest.approx(-2.0)
    assert character_value(ONE + SIGMA, (1,)) == pytest.approx(0.0, abs=1e-12)


def test_exterior_powers():
    v = _rep(Z2, 0, 1)
    assert exterior_power(v, 0) == ONE
    assert exterior_power(v, 1) == ONE + SIGMA
    assert exterior_power(v, 2) == SIGMA
    assert exterior_power(v, 3).is_zero()
    with pytest.raises(InvalidInput):
        exterior_power(v, -1)


def test_f_of_the_trivial_line():
    assert f_V(_rep(Z2, 0)) == RepPoly(Z2, [-1, 1])


def test_f_matches_the_product_of_lines():
    for v in all_representations(Z3, 3):
        assert f_V(v) == f_V_product(v)


def test_f_is_multiplicative():
    reps = all_representations(Z3, 2)
    for v in reps:
        for w in reps:
            assert f_product_check(v, w)


def test_residue_of_one():
    assert residue(RepPoly(Z2, [1]), _rep(Z2, 0), _rep(Z2, 1)) == ONE - SIGMA


def test_residue_vanishes_on_subrepresentations():
    g = RepPoly(Z2, [1, SIGMA, 1])
    assert residue(g, _rep(Z2, 1), _rep(Z2, 0, 1)).is_zero()
    assert residue(RepPoly(Z3, [1]), _rep(Z3, 1), _rep(Z3, 0, 1)).is_zero()


def test_residue_of_a_laurent_polynomial():
    t_inv = RepPoly.monomial(Z2, -1)
    assert residue(t_inv, _rep(Z2, 1), _rep(Z2, 0)) == ONE - SIGMA


def test_residue_needs_dimensions():
    with pytest.raises(InvalidInput):
        residue(RepPoly(Z2, [1]), Representation(Z2, ()), _rep(Z2, 0))
    with pytest.raises(InvalidInput):
        residue(RepPoly(Z2, [1]), _rep(Z2, 0, 1), _rep(Z2, 0))


def test_laurent_reduce_errors():
    g = RepPoly.monomial(Z2, -1)
    with pytest.raises(InvalidInput):
        laurent_reduce(g, RepPoly(Z2, [1, 2]))
    with pytest.raises(NotInvertible):
        laurent_reduce(g, RepPoly(Z2, [ONE + SIGMA, ONE]))
    with pytest.raises(NotInvertible):
        laurent_reduce(g, RepPoly.monomial(Z2, 1))


def test_laurent_reduce_of_t_inverse():
    # T ≡ σ, so T⁻¹ ≡ σ
    modulus = f_V(_rep(Z2, 1))
    assert laurent_reduce(RepPoly.monomial(Z2, -1), modulus) == RepPoly(Z2, [SIGMA])


def test_check_scale():
    with pytest.raises(TooLarge):
        check_scale(GroupSpec((7,)))
    trivial = GroupSpec((1,))
    with pytest.raises(TooLarge):
        check_scale(trivial, Representation.of(trivial, [(0,)] * 4), Representation.of(trivial, [(0,)] * 3))
    check_scale(Z2, _rep(Z2, 0, 1), _rep(Z2, 0))


@pytest.mark.parametrize("group,v0,v1", [
    (GroupSpec((1,)), (0,), (0,)),
    (Z2, (1,), (0,)),
    (Z2, (1,), (0, 1)),
])
def test_restriction_kernel(group, v0, v1):
    report = restriction_kernel_check(_rep(group, *v0), _rep(group, *v1))
    assert report.ok, [c.witness for c in report.failed]
    record = report.checks[0]
    assert record.metrics["kernel_rank"] == record.metrics["expected_rank"]


def test_restriction_kernel_of_the_zero_representation_is_everything():
    report = restriction_kernel_check(Representation(Z2, ()), _rep(Z2, 0))
    assert report.ok
    record = report.checks[0]
    assert record.status == "pass"
    assert record.metrics["kernel"] == "everything"
    assert record.metrics["kernel_rank"] == 2


def test_all_representations():
    assert len(all_representations(Z2, 2)) == 6
    assert len(all_representations(Z2, 2, min_dim=1)) == 5


def test_representation_parse():
    g = GroupSpec((2, 3))
    v = Representation.parse(g, "1,0;0,1")
    assert v.chars == ((0, 1), (1, 0))
    assert v.label() == "0,1;1,0"
    assert Representation.parse(g, "none").dim == 0
    assert Representation.parse(g, "1,5").chars == ((1, 2),)
    with pytest.raises(InvalidInput):
        Representation.parse(g, "a,b")
    with pytest.raises(InvalidInput):
        Representation.parse(g, "1")


def test_is_subrep():
    assert is_subrep(_rep(Z3, 1), _rep(Z3, 0, 1))
    assert not is_subrep(_rep(Z3, 1, 1), _rep(Z3, 0, 1))
    assert is_subrep(Representation(Z3, ()), _rep(Z3, 2))


def test_rep_poly_basics():
    p = RepPoly(Z2, [0, ONE + SIGMA, -SIGMA], low=-1)
    assert p.low == 0
    assert p.degree == 1
    assert not p.is_monic()
    assert p.augmented() == {0: 2, 1: -1}
    assert RepPoly(Z2, []).degree == -1
    assert (RepPoly(Z2, [-SIGMA, 1]) ** 2).coefficient(0) == ONE


def test_regular_matrix():
    assert to_lists(SIGMA.regular_matrix()) == [[0, 1], [1, 0]]
    assert to_lists((ONE + SIGMA).regular_matrix()) == [[1, 1], [1, 1]]
