import pytest

from fphomalg.errors import AlphabetError, CrossCheckError, ParityDomainError, ValidationError
from fphomalg.freelie import (
    Alphabet,
    Generator,
    TensorElement,
    ad_power,
    bracket_closure_dims,
    check_axioms,
    free_lie_symbol_dims,
    is_lyndon,
    lyndon_basis,
    lyndon_words,
    parse_generators,
    restricted_basis,
    restricted_closure_dims,
    restricted_symbol_dims,
    restriction_power,
    shifted_bracket,
    span_dims,
    standard_factorization,
    tensor_mul,
)


def alph(p, *degs):
    names = "xyzw"
    return Alphabet([Generator(names[i], d) for i, d in enumerate(degs)], p)


def gens(*degs):
    names = "xyzw"
    return [Generator(names[i], d) for i, d in enumerate(degs)]


def test_generator_validation():
    with pytest.raises(ValidationError):
        Generator("x", 0)
    with pytest.raises(ValidationError):
        parse_generators([{"name": "x", "degree": 2}, {"name": "x", "degree": 3}])


def test_tensor_mul_examples():
    a2 = alph(2, 2, 2)
    x = TensorElement.from_generator(a2, "x")
    y = TensorElement.from_generator(a2, "y")
    assert tensor_mul(x, y).terms == {(0, 1): 1}
    # bilinearity over F_2: (x+y)*x = xx + yx
    assert tensor_mul(x + y, x).terms == {(0, 0): 1, (1, 0): 1}
    # scalars mod 3: (2x)*(2x) = 4xx = xx
    a3 = alph(3, 2)
    x3 = TensorElement.from_generator(a3, "x").scale(2)
    assert tensor_mul(x3, x3).terms == {(0, 0): 1}


def test_tensor_mul_alphabet_mismatch():
    x = TensorElement.from_generator(alph(2, 2), "x")
    y = TensorElement.from_generator(alph(3, 2), "x")
    with pytest.raises(AlphabetError):
        tensor_mul(x, y)


def test_homogeneity_enforced():
    a = alph(3, 2, 3)
    with pytest.raises(ValidationError):
        TensorElement(a, {(0,): 1, (1,): 1})


def test_shifted_bracket_examples():
    # x of degree 2 at p=3: [x,x] = 2*xx, of unshifted degree 3
    a = alph(3, 2)
    x = TensorElement.from_generator(a, "x")
    b = shifted_bracket(x, x)
    assert b.terms == {(0, 0): 2}
    assert b.v_degree == 3
    # x of degree 3 at p=5: [x,x] = 0
    a5 = alph(5, 3)
    x5 = TensorElement.from_generator(a5, "x")
    assert shifted_bracket(x5, x5).is_zero()
    # p=2: [x,x] = 0 whatever the degree
    a2 = alph(2, 2)
    x2 = TensorElement.from_generator(a2, "x")
    assert shifted_bracket(x2, x2).is_zero()


def test_restriction_power_examples():
    # p=2, |x|=2: xi x = xx in degree 3
    a2 = alph(2, 2)
    x2 = TensorElement.from_generator(a2, "x")
    sq = restriction_power(x2)
    assert sq.terms == {(0, 0): 1} and sq.v_degree == 3
    # p=3, [x,x] with |x|=2 has odd degree 3; cube is 2 * x^{(6)} in degree 7
    a3 = alph(3, 2)
    x3 = TensorElement.from_generator(a3, "x")
    b = shifted_bracket(x3, x3)
    cube = restriction_power(b)
    assert cube.terms == {(0,) * 6: 2}
    assert cube.v_degree == 7
    # p=3 on even degree: domain error naming the axiom
    with pytest.raises(ParityDomainError, match="even degree"):
        restriction_power(x3)


def test_ad_power_matches_bracket_with_power():
    # [x, y^p] = ad^p(y)(x) for admissible y
    a = alph(3, 2, 3)
    x = TensorElement.from_generator(a, "x")
    y = TensorElement.from_generator(a, "y")  # degree 3, odd: admissible
    lhs = shifted_bracket(x, restriction_power(y))
    rhs = ad_power(y, x, 3)
    assert (lhs - rhs).is_zero()


def test_lyndon_word_generation():
    words = [w for w in lyndon_words(2, 4)]
    assert (0,) in words and (1,) in words and (0, 1) in words
    assert (0, 0) not in words
    assert all(is_lyndon(w) for w in words)
    assert standard_factorization((0, 1, 1)) == ((0, 1), (1,))


def test_lyndon_basis_one_generator_examples():
    # p=3, x of degree 2: basis degrees {2:1, 3:1} (x and [x,x])
    basis = lyndon_basis(gens(2), 10, 10, p=3)
    degs = {}
    for b in basis:
        degs[b.v_degree] = degs.get(b.v_degree, 0) + 1
    assert degs == {2: 1, 3: 1}
    assert any(b.selfbracket_flag for b in basis)
    # p=2: [x,x] = 0, only x remains
    basis2 = lyndon_basis(gens(2), 10, 10, p=2)
    assert [b.v_degree for b in basis2] == [2]


def test_lyndon_basis_two_generators_p5():
    # p=5, x,y of degree 2, degrees <= 4: {2:2, 3:3, 4:2}
    basis = lyndon_basis(gens(2, 2), 8, 4, p=5)
    degs = {}
    for b in basis:
        degs[b.v_degree] = degs.get(b.v_degree, 0) + 1
    assert degs == {2: 2, 3: 3, 4: 2}


def test_bracket_closure_examples():
    assert bracket_closure_dims(gens(2), 10, p=3).dims == {2: 1, 3: 1}
    assert bracket_closure_dims(gens(2), 10, p=2).dims == {2: 1}
    assert bracket_closure_dims(gens(3), 10, p=5).dims == {3: 1}


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("degs", [(2,), (3,), (2, 2), (2, 3)])
def test_lyndon_count_matches_closure(p, degs):
    cap, wcap = 8, 6
    count = free_lie_symbol_dims(gens(*degs), cap, p=p, weight_cap=wcap)
    oracle = bracket_closure_dims(gens(*degs), cap, p=p, weight_cap=wcap)
    assert count == oracle


def test_restricted_basis_examples():
    # p=2, {x:2}: restriction orbit degrees 2,3,5,9
    symbols, dims = restricted_basis(gens(2), 10, p=2)
    assert dims.dims == {2: 1, 3: 1, 5: 1, 9: 1}
    # p=3, {x:2}, cap 8: x, [x,x], xi[x,x]
    symbols, dims = restricted_basis(gens(2), 8, p=3)
    assert dims.dims == {2: 1, 3: 1, 7: 1}
    # p=3, {x:3}, cap 8: x, xi x
    symbols, dims = restricted_basis(gens(3), 8, p=3)
    assert dims.dims == {3: 1, 7: 1}


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("degs", [(2,), (3,), (2, 3)])
def test_restricted_count_matches_closure(p, degs):
    cap, wcap = 9, 9
    count = restricted_symbol_dims(gens(*degs), cap, p=p, weight_cap=wcap)
    oracle = restricted_closure_dims(gens(*degs), cap, p=p, weight_cap=wcap)
    assert count == oracle


def test_span_dims_detects_dependence():
    a = alph(3, 2)
    x = TensorElement.from_generator(a, "x")
    assert span_dims([x, x.scale(2)], 3).dims == {2: 1}


@pytest.mark.parametrize("p,degs", [(2, (2, 3)), (3, (2, 3)), (5, (2, 4))])
def test_check_axioms_all_pass(p, degs):
    report = check_axioms(gens(*degs), degree_cap=14, trials=40, rng_seed=7, p=p)
    assert report["all_pass"], report
    assert report["checks"]["antisymmetry"]["tested"] > 0
    assert report["checks"]["restriction_ad"]["tested"] > 0
    if p == 2:
        assert report["checks"]["additivity_p2"]["tested"] > 0


def test_check_axioms_jacobi_on_triple_x():
    # p=3: all terms proportional to [x,[x,x]] = 0
    a = alph(3, 2)
    x = TensorElement.from_generator(a, "x")
    assert shifted_bracket(x, shifted_bracket(x, x)).is_zero()


def test_restriction_scalar_linearity():
    a = alph(5, 3)
    x = TensorElement.from_generator(a, "x")
    for lam in range(1, 5):
        lhs = restriction_power(x.scale(lam))
        rhs = restriction_power(x).scale(lam)
        assert (lhs - rhs).is_zero()
