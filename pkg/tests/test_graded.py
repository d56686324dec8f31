"""Koszul signs, multilinear maps, symmetrization, insertion."""
import itertools
from fractions import Fraction

import pytest

from bvkit.errors import InputError
from bvkit.graded import (GradedVectorSpace, MultilinearMap, identity_map, insert,
                          koszul_sign, symmetric_closure, symmetrize, vector)


def sl2():
    return GradedVectorSpace({0: ["e", "f", "h"]})


def sl2_bracket(space):
    # [e,f]=h, [h,e]=2e, [h,f]=-2f
    return symmetric_closure(
        (space, space), space, 0,
        [(("e", "f"), "h", 1), (("h", "e"), "e", 2), (("h", "f"), "f", -2)],
        shift=1)


def test_koszul_sign_trivial_cases():
    assert koszul_sign([1, 0], [1, 1]) == -1          # odd-odd swap
    assert koszul_sign([1, 0], [1, 2]) == 1           # (-1)^(1*2)
    assert koszul_sign([0, 1, 2], [3, 5, 7]) == 1     # identity
    assert koszul_sign([], []) == 1


def test_koszul_sign_input_errors():
    with pytest.raises(InputError):
        koszul_sign([0, 1], [1])
    with pytest.raises(InputError):
        koszul_sign([0, 0], [1, 1])


def test_koszul_sign_multiplicative():
    # koszul(sigma o tau) = koszul(sigma on tau-permuted degrees) * koszul(tau),
    # exhaustive on <= 4 letters over a mixed degree vector (5 letters in the
    # acceptance-level suite; 4 keeps this unit test quick).
    degrees = [0, 1, 2, 3]
    k = len(degrees)
    for tau in itertools.permutations(range(k)):
        tau_degs = [degrees[t] for t in tau]
        for sigma in itertools.permutations(range(k)):
            comp = [tau[s] for s in sigma]
            lhs = koszul_sign(comp, degrees)
            rhs = koszul_sign(sigma, tau_degs) * koszul_sign(tau, degrees)
            assert lhs == rhs


def test_koszul_sign_multiplicative_five_letters():
    degrees = [1, 1, 2, 3, 1]
    k = len(degrees)
    for tau in itertools.permutations(range(k)):
        tau_degs = [degrees[t] for t in tau]
        for sigma in itertools.permutations(range(k)):
            comp = [tau[s] for s in sigma]
            assert koszul_sign(comp, degrees) == \
                koszul_sign(sigma, tau_degs) * koszul_sign(tau, degrees)


def test_space_basics():
    V = GradedVectorSpace({0: ["a"], 1: ["b", "c"], -2: ["d"]})
    assert V.dim == 4
    assert V.degree("c") == 1
    assert V.component(1) == ("b", "c")
    W = V.shift(1)
    assert W.degree("a") == -1 and W.degree("b") == 0
    with pytest.raises(InputError):
        GradedVectorSpace({0: ["a"], 1: ["a"]})
    with pytest.raises(InputError):
        V.degree("zz")


def test_degree_rule_enforced():
    V = GradedVectorSpace({0: ["a"], 1: ["b"]})
    with pytest.raises(InputError):
        MultilinearMap((V,), V, 0, {("a",): {"b": 1}})
    m = MultilinearMap((V,), V, 1, {("a",): {"b": 1}})
    assert m.coefficient(("a",), "b") == 1


def test_symmetric_closure_sl2():
    V = sl2()
    b = sl2_bracket(V)
    # symmetric on g[1]: degree-0 elements have shifted degree -1, so the
    # closure is antisymmetric on labels
    assert b.coefficient(("e", "f"), "h") == 1
    assert b.coefficient(("f", "e"), "h") == -1
    assert b.check_symmetry() == []


def test_symmetrize_idempotent_and_preserves_symmetric():
    V = sl2()
    b = sl2_bracket(V)
    raw = MultilinearMap((V, V), V, 0, b.coefficients)  # forget the symmetry
    s = symmetrize(raw, shift=1)
    assert s.coefficients == b.coefficients
    # idempotence: symmetrizing the coefficients again changes nothing
    s2 = symmetrize(MultilinearMap((V, V), V, 0, s.coefficients), shift=1)
    assert s2.coefficients == s.coefficients


def test_symmetrize_projects():
    V = GradedVectorSpace({0: ["x", "y"]})
    # a lone (x,y) -> x entry; shifted degrees are odd, so the projection
    # splits it into halves with opposite signs on the two orderings
    m = MultilinearMap((V, V), V, 0, {("x", "y"): {"x": 1}})
    s = symmetrize(m, shift=1)
    assert s.coefficient(("x", "y"), "x") == Fraction(1, 2)
    assert s.coefficient(("y", "x"), "x") == Fraction(-1, 2)
    assert s.check_symmetry() == []


def test_symmetrize_arity_one():
    V = GradedVectorSpace({0: ["x"], 1: ["y"]})
    m = MultilinearMap((V,), V, 1, {("x",): {"y": 3}})
    assert symmetrize(m, shift=1).coefficients == m.coefficients


def test_insert_identity():
    V = sl2()
    b = sl2_bracket(V)
    for slot in (0, 1):
        c = insert(b, identity_map(V), slot)
        assert c.coefficients == b.coefficients
        assert c.degree == b.degree


def test_insert_space_mismatch():
    V = sl2()
    W = GradedVectorSpace({0: ["w"]})
    b = sl2_bracket(V)
    with pytest.raises(InputError):
        insert(b, identity_map(W), 0)


def test_insert_jacobiator_summand():
    V = sl2()
    b = sl2_bracket(V)
    c = insert(b, b, 0)  # (x,y,z) -> [[x,y],z]
    # [[e,f],h] = [h,h] = 0; [[h,e],f] = 2[e,f] = 2h; [[e,h],f] = -2h
    assert c.coefficient(("e", "f", "h"), "h") == 0
    assert c.coefficient(("h", "e", "f"), "h") == 2
    assert c.coefficient(("e", "h", "f"), "h") == -2
    assert c.arity == 3 and c.degree == 0


def test_insert_partial_evaluation():
    V = sl2()
    b = sl2_bracket(V)
    ve = vector(V, {"e": 1})
    c = insert(b, ve, 0)  # [e, -]
    assert c.arity == 1
    assert c.coefficient(("f",), "h") == 1
    assert c.coefficient(("h",), "e") == -2


def test_insert_associative_in_disjoint_slots():
    # (outer after inner1 in slot 0) after inner2 in a later slot agrees with
    # the other order up to the Koszul sign of moving the maps past each other
    V = GradedVectorSpace({0: ["x"], 1: ["y"]})
    outer = MultilinearMap((V, V), V, 1, {("x", "x"): {"y": 1}, ("x", "y"): {}, })
    inner1 = MultilinearMap((V,), V, 0, {("x",): {"x": 2}})
    inner2 = MultilinearMap((V,), V, 0, {("x",): {"x": 3}, ("y",): {"y": 5}})
    a = insert(insert(outer, inner1, 0), inner2, 1)
    c = insert(insert(outer, inner2, 1), inner1, 0)
    assert a.coefficients == c.coefficients  # both inner maps are even here


def test_insert_disjoint_slots_with_odd_maps():
    V = GradedVectorSpace({0: ["x"], 1: ["y"]})
    outer = MultilinearMap((V, V), V, -2, {("y", "y"): {"x": 1}})
    odd1 = MultilinearMap((V,), V, 1, {("x",): {"y": 1}})
    odd2 = MultilinearMap((V,), V, 1, {("x",): {"y": 7}})
    a = insert(insert(outer, odd1, 0), odd2, 1)
    c = insert(insert(outer, odd2, 1), odd1, 0)
    # moving odd2 past odd1 costs a sign
    key = ("x", "x")
    assert a.coefficient(key, "x") == -c.coefficient(key, "x") != 0
