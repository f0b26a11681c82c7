import pytest

from kitaev_kms import GroupSpec, pairing, pairing_exponent
from kitaev_kms.cyclotomic import Cyclo
from kitaev_kms.errors import SizeGuardError, SpecMismatchError

Z2 = GroupSpec((2,))
Z3 = GroupSpec((3,))
Z4 = GroupSpec((4,))
Z23 = GroupSpec((2, 3))


def test_spec_validation():
    with pytest.raises(ValueError):
        GroupSpec(())
    with pytest.raises(ValueError):
        GroupSpec((1,))
    with pytest.raises(ValueError):
        GroupSpec((2, 1))
    assert Z23.order == 6
    assert Z23.scalar_order == 12


def test_compose_examples():
    assert (Z2.element([1]) * Z2.element([1])).residues == (0,)
    assert (Z3.element([1]) * Z3.element([2])).residues == (0,)
    assert (Z23.element([1, 2]) * Z23.element([1, 2])).residues == (0, 1)


def test_inverse_examples():
    assert Z4.element([3]).inverse().residues == (1,)
    assert Z2.element([1]).inverse().residues == (1,)
    n = Z23.neutral_element()
    assert n.inverse() == n
    for g in Z23.elements():
        assert (g * g.inverse()).is_neutral


def test_pairing_examples():
    assert pairing(Z2.character([1]), Z2.element([1])) == Cyclo.rational(4, -1)
    for g in Z23.elements():
        assert pairing(Z23.neutral_character(), g) == Cyclo.one(12)
    # primitive fourth root
    assert pairing(Z4.character([1]), Z4.element([1])) == Cyclo.root(4, 1)


def test_pairing_multiplicative_exhaustive():
    for spec in (Z2, Z3, Z4, Z23, GroupSpec((2, 2, 3))):
        for chi in spec.characters():
            for g in spec.elements():
                for h in spec.elements():
                    assert pairing_exponent(chi, g * h) == (
                        pairing_exponent(chi, g) + pairing_exponent(chi, h)
                    ) % spec.scalar_order


def test_character_orthogonality():
    for spec in (Z2, Z3, Z23):
        L = spec.scalar_order
        for chi in spec.characters():
            total = Cyclo.zero(L)
            for h in spec.elements():
                total = total + pairing(chi, h)
            want = Cyclo.rational(L, spec.order if chi.is_neutral else 0)
            assert total == want


def test_enumeration():
    els = Z23.elements()
    assert len(els) == 6
    assert els[0].is_neutral
    assert len(set(els)) == 6
    assert [e.residues for e in GroupSpec((2, 2)).elements()] == [
        (0, 0),
        (0, 1),
        (1, 0),
        (1, 1),
    ]
    with pytest.raises(SizeGuardError):
        GroupSpec((2,) * 21).elements()


def test_spec_mismatch():
    with pytest.raises(SpecMismatchError):
        Z2.element([1]) * Z3.element([1])
    with pytest.raises(SpecMismatchError):
        pairing(Z2.character([1]), Z3.element([1]))


def test_residues_normalized():
    assert Z3.element([5]).residues == (2,)
    assert Z23.character([3, -1]).residues == (1, 2)
