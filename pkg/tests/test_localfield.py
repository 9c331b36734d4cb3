import random
from fractions import Fraction

import pytest

from coverkit.errors import DegreeNotSupported, UnsupportedField, UnsupportedWildCase
from coverkit.localfield import (
    CoverElement,
    ResidueField,
    cover_identity,
    cover_mul,
    exact_root_of_unity,
    genuine_character_obstruction,
    hilbert2,
    kummer_f_entry,
    laurent_element,
    minus_one_element,
    mu_count,
    one_element,
    padic_element,
    parse_element,
    parse_field,
    tame_symbol,
    tau,
)

from conic_oracle import laurent_conic_solvable, padic_conic_solvable

Q2 = parse_field("Qp:2")
Q3 = parse_field("Qp:3")
Q5 = parse_field("Qp:5")
Q7 = parse_field("Qp:7")
F3T = parse_field("Fq((t)):3")
F5T = parse_field("Fq((t)):5")
F9T = parse_field("Fq((t)):9:x^2+x+2")


def _random_padic(rng, field):
    while True:
        num = rng.randint(-40, 40)
        den = rng.randint(1, 40)
        if num:
            return padic_element(field, Fraction(num, den))


def _random_laurent(rng, field):
    q = field.residue.q
    while True:
        coeffs = {}
        for d in range(rng.randint(-2, 0), rng.randint(1, 3)):
            c = rng.randrange(q)
            if c:
                coeffs[d] = c
        if coeffs:
            return laurent_element(field, coeffs)


def _random_element(rng, field):
    if field.kind == "p-adic":
        return _random_padic(rng, field)
    return _random_laurent(rng, field)


def _oracle(field, a, b):
    if field.kind == "p-adic":
        return padic_conic_solvable(field.residue.p, a.rational, b.rational)
    return laurent_conic_solvable(field.residue, dict(a.laurent), dict(b.laurent))


# --- residue fields -------------------------------------------------------


def test_residue_field_f9():
    rf = ResidueField(3, 2, (2, 1, 1))  # x^2 + x + 2
    assert rf.q == 9
    x = 3  # the class of x
    assert rf.mul(x, x) == rf._encode([-2, -1])  # x^2 = -x - 2
    assert rf.primitive_root == 3
    assert rf.pow(3, 8) == 1
    assert rf.pow(3, 4) == 2  # x^4 = -1
    for a in range(1, 9):
        assert rf.mul(a, rf.inv(a)) == 1


def test_reducible_modulus_rejected():
    with pytest.raises(UnsupportedField):
        ResidueField(3, 2, (1, 2, 1))  # x^2 + 2x + 1 = (x+1)^2


def test_primitive_roots_prime_fields():
    assert ResidueField(5).primitive_root == 2
    assert ResidueField(7).primitive_root == 3
    assert ResidueField(3).primitive_root == 2


def test_field_descriptors_round_trip():
    for f in (Q2, Q7, F5T, F9T):
        assert parse_field(f.descriptor) == f
    with pytest.raises(UnsupportedField):
        parse_field("Qp:6")
    with pytest.raises(UnsupportedField):
        parse_field("Fq((t)):12")
    with pytest.raises(UnsupportedField):
        parse_field("Fq((t)):9")  # missing modulus


def test_element_parsing():
    e = parse_element(Q5, "-3/4")
    assert e.rational == Fraction(-3, 4)
    t = parse_element(F5T, "1:1")
    assert t.laurent == ((1, 1),)
    mixed = parse_element(F5T, "-1:3,0:1")
    assert mixed.laurent == ((-1, 3), (0, 1))
    assert mixed.valuation() == -1
    with pytest.raises(ValueError):
        parse_element(Q5, "0")


# --- Hilbert symbols ------------------------------------------------------


def test_hilbert_q2_minus_one_minus_one():
    m = minus_one_element(Q2)
    assert hilbert2(Q2, m, m) == -1


def test_hilbert_q3_minus_one_minus_one():
    m = minus_one_element(Q3)
    assert hilbert2(Q3, m, m) == 1


def test_hilbert_q3_3_3():
    e = padic_element(Q3, 3)
    assert hilbert2(Q3, e, e) == -1


def test_hilbert_steinberg_negation():
    rng = random.Random(1)
    for field in (Q2, Q3, Q5, Q7, F3T, F5T, F9T):
        for _ in range(50):
            a = _random_element(rng, field)
            neg_a = a.mul(minus_one_element(field))
            assert hilbert2(field, a, neg_a) == 1, field.descriptor


def test_hilbert_unsupported_field():
    f2t = parse_field("Fq((t)):2")
    t = laurent_element(f2t, {1: 1})
    with pytest.raises(UnsupportedField):
        hilbert2(f2t, t, t)


def _sub_one(field, a):
    # 1 - a, as an exact element (None when zero)
    if field.kind == "p-adic":
        v = 1 - a.rational
        return padic_element(field, v) if v else None
    rf = field.residue
    coeffs = dict(a.laurent)
    neg = {d: rf.neg(c) for d, c in coeffs.items()}
    neg[0] = rf.add(neg.get(0, 0), 1)
    if all(c == 0 for c in neg.values()):
        return None
    return laurent_element(field, {d: c for d, c in neg.items() if c})


def test_hilbert_steinberg_relation():
    rng = random.Random(2)
    for field in (Q2, Q3, Q5, Q7, F3T, F5T):
        done = 0
        while done < 200:
            a = _random_element(rng, field)
            one_minus = _sub_one(field, a)
            if one_minus is None:
                continue
            done += 1
            assert hilbert2(field, a, one_minus) == 1, field.descriptor


def test_hilbert_symmetry_and_bimultiplicativity():
    rng = random.Random(3)
    for field in (Q2, Q3, Q5, Q7, F3T, F5T, F9T):
        for _ in range(100):
            a = _random_element(rng, field)
            b = _random_element(rng, field)
            c = _random_element(rng, field)
            assert hilbert2(field, a, b) == hilbert2(field, b, a)
            lhs = hilbert2(field, a.mul(c), b)
            rhs = hilbert2(field, a, b) * hilbert2(field, c, b)
            assert lhs == rhs, field.descriptor


def test_hilbert_against_conic_oracle():
    rng = random.Random(4)
    for field in (Q2, Q3, Q5, Q7, F3T, F5T):
        for _ in range(60):
            a = _random_element(rng, field)
            b = _random_element(rng, field)
            expected = 1 if _oracle(field, a, b) else -1
            assert hilbert2(field, a, b) == expected, (field.descriptor, a.format(), b.format())


def test_hilbert_f9_against_oracle():
    rng = random.Random(5)
    for _ in range(8):
        a = _random_element(rng, F9T)
        b = _random_element(rng, F9T)
        expected = 1 if _oracle(F9T, a, b) else -1
        assert hilbert2(F9T, a, b) == expected


def test_nondegeneracy_on_square_classes():
    # p odd: {1, n, p, np}; Q2: units {1,-1,5,-5} and twice them
    for field in (Q3, Q5, Q7, F3T, F5T, F9T):
        rf = field.residue
        n = next(u for u in range(2, rf.q) if rf.eta(u) == -1)
        if field.kind == "p-adic":
            unit = padic_element(field, n)
            pi = padic_element(field, rf.p)
        else:
            unit = laurent_element(field, {0: n})
            pi = laurent_element(field, {1: 1})
        reps = [one_element(field), unit, pi, unit.mul(pi)]
        for i, c in enumerate(reps):
            if i == 0:
                continue
            assert any(hilbert2(field, c, d) == -1 for d in reps), field.descriptor
    reps2 = [padic_element(Q2, v) for v in (1, -1, 5, -5, 2, -2, 10, -10)]
    for i, c in enumerate(reps2):
        if i == 0:
            continue
        assert any(hilbert2(Q2, c, d) == -1 for d in reps2)


# --- tame symbols ---------------------------------------------------------


def test_tame_pinned_f5_degree4():
    t = parse_element(F5T, "1:1")
    two = parse_element(F5T, "0:2")
    assert F5T.residue.primitive_root == 2
    assert tame_symbol(F5T, 4, t, two) == 3


def test_tame_steinberg():
    rng = random.Random(6)
    for field, m in ((Q5, 4), (Q7, 3), (F5T, 4), (F9T, 8), (F3T, 2)):
        for _ in range(50):
            a = _random_element(rng, field)
            neg_a = a.mul(minus_one_element(field))
            assert tame_symbol(field, m, a, neg_a) == 0, field.descriptor


def test_tame_bimultiplicative():
    rng = random.Random(7)
    for field, m in ((Q5, 4), (F5T, 4), (F9T, 4), (Q7, 6)):
        for _ in range(60):
            a = _random_element(rng, field)
            b = _random_element(rng, field)
            c = _random_element(rng, field)
            lhs = tame_symbol(field, m, a.mul(c), b)
            rhs = (tame_symbol(field, m, a, b) + tame_symbol(field, m, c, b)) % m
            assert lhs == rhs
            lhs2 = tame_symbol(field, m, a, b.mul(c))
            rhs2 = (tame_symbol(field, m, a, b) + tame_symbol(field, m, a, c)) % m
            assert lhs2 == rhs2


def test_tame_degree2_matches_hilbert():
    rng = random.Random(8)
    for field in (Q3, Q5, Q7, F3T, F5T, F9T):
        for _ in range(80):
            a = _random_element(rng, field)
            b = _random_element(rng, field)
            t = tame_symbol(field, 2, a, b)
            h = hilbert2(field, a, b)
            assert (t == 0) == (h == 1), field.descriptor


def test_tame_degree_errors():
    t = parse_element(F5T, "1:1")
    with pytest.raises(DegreeNotSupported):
        tame_symbol(F5T, 5, t, t)  # p | m
    with pytest.raises(DegreeNotSupported):
        tame_symbol(F5T, 3, t, t)  # m does not divide q - 1


# --- roots of unity -------------------------------------------------------


def test_mu_counts():
    assert mu_count(Q5, 4) == 4
    assert mu_count(Q7, 4) == 2
    assert mu_count(Q2, 2) == 2
    assert mu_count(F9T, 8) == 8
    assert mu_count(Q5, 1) == 1
    with pytest.raises(UnsupportedWildCase):
        mu_count(Q2, 4)
    with pytest.raises(UnsupportedWildCase):
        mu_count(Q3, 3)
    with pytest.raises(UnsupportedWildCase):
        mu_count(F5T, 10)


def test_exact_roots_of_unity():
    z = exact_root_of_unity(F5T, 4)
    assert z is not None and z.valuation() == 0
    # the marked generator's residue is g^((q-1)/m) = 2^1 = 2
    assert z.unit_residue() == 2
    assert exact_root_of_unity(Q5, 4) is None  # i is not rational
    m1 = exact_root_of_unity(Q5, 2)
    assert m1 is not None and m1.rational == Fraction(-1)


# --- the sign cover -------------------------------------------------------


def test_cover_identity_law():
    rng = random.Random(9)
    for field in (Q2, Q3, F5T):
        for _ in range(20):
            x = CoverElement(_random_element(rng, field), rng.choice((1, -1)))
            e = cover_identity(field)
            prod = cover_mul(field, e, x)
            assert prod.sign == x.sign
            assert prod.element.valuation() == x.element.valuation()


def test_cover_pinned_products():
    m1 = CoverElement(minus_one_element(Q2), 1)
    prod = cover_mul(Q2, m1, m1)
    assert prod.sign == -1
    assert prod.element.rational == 1
    three = CoverElement(padic_element(Q3, 3), 1)
    prod3 = cover_mul(Q3, three, three)
    assert prod3.sign == -1
    assert prod3.element.rational == 9


def test_cover_associativity():
    rng = random.Random(10)
    for field in (Q2, Q3, Q5, Q7, F3T, F5T):
        for _ in range(100):
            x = CoverElement(_random_element(rng, field), rng.choice((1, -1)))
            y = CoverElement(_random_element(rng, field), rng.choice((1, -1)))
            z = CoverElement(_random_element(rng, field), rng.choice((1, -1)))
            left = cover_mul(field, cover_mul(field, x, y), z)
            right = cover_mul(field, x, cover_mul(field, y, z))
            assert left.sign == right.sign
            if field.kind == "p-adic":
                assert left.element.rational == right.element.rational
            else:
                assert left.element.laurent == right.element.laurent


def test_tau_pinned_values():
    assert tau(Q2, one_element(Q2)).sign == 1
    t = tau(Q2, minus_one_element(Q2))
    assert t.element.rational == 1 and t.sign == -1
    t3 = tau(Q3, padic_element(Q3, 3))
    assert t3.element.rational == 9 and t3.sign == -1


def test_tau_homomorphism():
    rng = random.Random(11)
    for field in (Q2, Q3, Q5, Q7, F3T, F5T):
        for _ in range(100):
            a = _random_element(rng, field)
            b = _random_element(rng, field)
            lhs = tau(field, a.mul(b))
            rhs = cover_mul(field, tau(field, a), tau(field, b))
            assert lhs.sign == rhs.sign, field.descriptor


def test_binomial_cocycle_identities():
    # the integer identities behind the cover's monoidal splitting
    def binom2(x):
        return x * (x - 1) // 2

    for a in range(-100, 101):
        for b in range(-100, 101):
            assert binom2(a + b) - binom2(a) - binom2(b) == a * b
    for a in range(-100, 101):
        assert (binom2(2 * a) - a) % 2 == 0


# --- genuine characters ---------------------------------------------------


def test_genuine_character_trivial_vanishes():
    rep = genuine_character_obstruction(Q5, [2, 4], [0, 0], [0, 0], 4)
    assert rep.vanishes
    assert rep.values == (0, 0)


def test_genuine_character_q2_eps_one():
    rep = genuine_character_obstruction(Q2, [2], [1], [0], 2)
    assert rep.values == (1,)
    assert not rep.vanishes
    assert rep.minus_one_symbol == -1


def test_genuine_character_q3_eps_one():
    rep = genuine_character_obstruction(Q3, [2], [1], [0], 2)
    assert rep.values == (0,)
    assert rep.vanishes
    assert rep.minus_one_symbol == 1


def test_genuine_character_validation():
    with pytest.raises(ValueError):
        genuine_character_obstruction(Q3, [2], [1], [0], 3)  # odd modulus, eps set
    with pytest.raises(ValueError):
        # mu_3(Q_7) has order 3 but 3 * 1 != 0 mod 2: not a character
        genuine_character_obstruction(Q7, [3], [0], [1], 2)
    with pytest.raises(UnsupportedWildCase):
        genuine_character_obstruction(Q2, [4], [0], [0], 2)


def test_kummer_entries_q5():
    five = padic_element(Q5, 5)
    two = padic_element(Q5, 2)
    one = padic_element(Q5, 1)
    assert kummer_f_entry(Q5, 2, one) == 0
    assert kummer_f_entry(Q5, 2, five) == 0  # {5, -1} = +1 over Q_5
    assert kummer_f_entry(Q5, 2, two) == 0  # valuation-zero symbol is trivial
    # cross-check through hilbert2: {5, -1} = (-1 | 5) = +1
    assert hilbert2(Q5, five, minus_one_element(Q5)) == 1


def test_kummer_entry_detects_nontrivial_class():
    # over Q_7, -1 is not a square, so {7, zeta_2} = {7, -1} = -1
    seven = padic_element(Q7, 7)
    assert kummer_f_entry(Q7, 2, seven) == 1
    assert hilbert2(Q7, seven, minus_one_element(Q7)) == -1


def test_kummer_entry_matches_materialized_zeta_laurent():
    rng = random.Random(12)
    for field, m in ((F5T, 4), (F5T, 2), (F9T, 8), (F3T, 2)):
        zeta = exact_root_of_unity(field, m)
        assert zeta is not None
        for _ in range(40):
            c = _random_element(rng, field)
            assert kummer_f_entry(field, m, c) == tame_symbol(field, m, c, zeta)


def test_genuine_character_with_kummer_f():
    # eps = 0, f built from c = 5 over Q_5 at degree 2: the table is zero,
    # so a genuine character exists
    f_entry = kummer_f_entry(Q5, 2, padic_element(Q5, 5))
    rep = genuine_character_obstruction(Q5, [2], [0], [f_entry], 2)
    assert rep.values == (0,)
    assert rep.vanishes
