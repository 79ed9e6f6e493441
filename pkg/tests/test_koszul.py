import pytest

from isotower.errors import InvalidInput
from isotower.koszul import KoszulComplex, koszul_build, tower_koszul, tower_sequence
from isotower.ktheory import GroupSpec, RepElement, Representation
from isotower.lattice import to_lists

Z2 = GroupSpec((2,))
Z3 = GroupSpec((3,))


def _rep(group, *chars):
    return Representation.of(group, [(c,) for c in chars])


def test_tower_koszul_sign_line():
    complex_, report = tower_koszul(_rep(Z2, 0), _rep(Z2, 1))
    assert report.ok
    assert complex_.sequence == (RepElement.one(Z2) - RepElement.char(Z2, (1,)),)
    assert to_lists(complex_.integer_blocks(1)) == [[1, -1], [-1, 1]]
    assert not complex_.is_zero()
    subrep = next(c for c in report.checks if c.id.startswith("koszul.vanishing-iff-subrep"))
    assert subrep.metrics["subrep"] is False


def test_tower_koszul_vanishes_on_subrepresentations():
    complex_, report = tower_koszul(_rep(Z3, 1), _rep(Z3, 0, 1))
    assert report.ok
    assert complex_.is_zero()
    subrep = next(c for c in report.checks if c.id.startswith("koszul.vanishing-iff-subrep"))
    assert subrep.metrics["subrep"] is True


def test_trivial_line_in_the_plane():
    trivial = GroupSpec((1,))
    v0 = Representation.of(trivial, [(0,)])
    v1 = Representation.of(trivial, [(0,), (0,)])
    assert all(x.is_zero() for x in tower_sequence(v0, v1))
    complex_, report = tower_koszul(v0, v1)
    assert report.ok and complex_.is_zero()


def test_tower_koszul_record_ids():
    _, report = tower_koszul(_rep(Z2, 0, 1), _rep(Z2, 1, 1, 0))
    assert {c.id for c in report.checks} == {
        "koszul.d-squared.2.0;1.0;1;1",
        "koszul.vanishing-iff-subrep.2.0;1.0;1;1",
    }
    assert report.ok


def test_koszul_on_three_elements():
    one = RepElement.one(Z3)
    omega = RepElement.char(Z3, (1,))
    complex_ = koszul_build([one - omega, omega, 2 * one + omega * omega])
    assert complex_.rank == 3
    assert complex_.d_squared_zero()
    d2 = complex_.differential(2)
    assert len(d2) == 3 and len(d2[0]) == 3
    assert len(complex_.differential(3)) == 3
    assert complex_.integer_blocks(1).shape == (3, 9)


def test_koszul_needs_a_group_for_an_empty_sequence():
    with pytest.raises(InvalidInput):
        koszul_build([])
    complex_ = koszul_build([], Z2)
    assert complex_.rank == 0
    assert complex_.d_squared_zero()


def test_koszul_rejects_mixed_groups():
    with pytest.raises(InvalidInput):
        koszul_build([RepElement.one(Z2), RepElement.one(Z3)])


def test_to_dict():
    complex_, _ = tower_koszul(_rep(Z2, 0), _rep(Z2, 1))
    data = complex_.to_dict()
    assert set(data) == {"rank", "orders", "sequence", "differentials", "d_squared_zero"}
    assert data["differentials"][0]["matrix"] == [[1, -1], [-1, 1]]
    assert data["differentials"][0]["target_basis"] == [[]]


def test_koszul_build_rejects_differentials_that_do_not_square_to_zero(monkeypatch):
    monkeypatch.setattr(KoszulComplex, "d_squared_zero", lambda self: False)
    with pytest.raises(InvalidInput):
        koszul_build([RepElement.one(Z2), RepElement.char(Z2, (1,))])
