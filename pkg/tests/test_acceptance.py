"""Acceptance suite: one test per criterion, each printing a verdict line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; timing budgets are asserted inside the tests.
"""

import itertools
import json
import random
import sys
import time
from fractions import Fraction

from coverkit.cli import dump_json, main
from coverkit.intlinalg import IntMatrix, solve
from coverkit.localfield import (
    CoverElement,
    cover_mul,
    genuine_character_obstruction,
    hilbert2,
    kummer_f_entry,
    laurent_element,
    minus_one_element,
    padic_element,
    parse_field,
    tau,
)
from coverkit.obstruction import (
    build_gamma,
    check_adjoint_pairing,
    solve_obstruction,
    verify_vanishing,
)
from coverkit.quadform import (
    check_strict_weyl_invariance,
    derive_b2,
    form_from_offdiag,
    restrict_form,
    sharp_root_datum,
    sharpen,
)
from coverkit.rootdatum import catalog, validate

from conic_oracle import laurent_conic_solvable, padic_conic_solvable
from gridcases import grid_cases, kp_form_gl2

PASS = "ACCEPTANCE {n}: PASS ({dt:.2f}s) - {what}"


def _report(n, t0, what):
    print(PASS.format(n=n, dt=time.monotonic() - t0, what=what), file=sys.stderr)


def test_criterion_1_gl2_kazhdan_patterson_vector():
    t0 = time.monotonic()
    datum, _ = catalog("GL", size=2)
    forms = [kp_form_gl2(), form_from_offdiag(2, (1, 1), (1,))]
    for form in forms:
        assert check_strict_weyl_invariance(datum, form) == []
        b2 = derive_b2(datum, form)
        z = b2.kernel_basis.column(0)
        assert z in ((1, 1), (-1, -1))
        assert b2.value((1,), (1,)) == 1
    dt = time.monotonic() - t0
    assert dt < 1.0
    _report(1, t0, "b2(pi1 generator, e1+e2) = 1 for strictly invariant Z/2 forms on GL2")


def _middle_window(seq):
    g = seq.middle.group
    n = seq.modulus
    axes = [range(d) for d in g.invariant_factors]
    axes += [range(-2 * n, 2 * n + 1)] * g.free_rank
    return [g.reduce(c) for c in itertools.product(*axes)]


def _in_image(seq, x):
    g = seq.middle.group
    cols = [list(seq.induced.matrix.column(j)) for j in range(seq.induced.matrix.cols)]
    for i, d in enumerate(g.invariant_factors):
        e = [0] * g.dim
        e[i] = d
        cols.append(e)
    m = IntMatrix.from_columns(cols, rows=g.dim)
    return solve(m, list(x)) is not None


def test_criterion_2_exact_sequence_grid():
    t0 = time.monotonic()
    cases = grid_cases()
    assert len(cases) >= 12
    moduli = {form.modulus for _, _, _, form in cases}
    assert {2, 3, 4, 6} <= moduli
    for label, datum, action, form in cases:
        seq = build_gamma(datum, action, form)
        assert seq.c_group.order() <= 1000, label
        for x in _middle_window(seq):
            assert (seq.gamma.apply(x) == seq.c_group.zero()) == _in_image(seq, x), label
        for chi in seq.c_group.elements():
            rep = solve_obstruction(seq, chi)
            assert verify_vanishing(seq, rep.solution_representative, chi), label
    dt = time.monotonic() - t0
    assert dt < 30.0
    _report(2, t0, f"image = kernel and gamma-surjectivity on {len(cases)} grid cases")


def test_criterion_3_torsor_property():
    t0 = time.monotonic()
    for label, datum, action, form in grid_cases():
        seq = build_gamma(datum, action, form)
        window = _middle_window(seq)
        for chi in seq.c_group.elements():
            rep = solve_obstruction(seq, chi).solution_representative
            vanish_set = {x for x in window if verify_vanishing(seq, x, chi)}
            coset_set = {x for x in window if _in_image(seq, seq.middle.group.sub(x, rep))}
            assert vanish_set == coset_set, label
    dt = time.monotonic() - t0
    assert dt < 30.0
    _report(3, t0, "solution sets equal representative + kernel on every grid case")


def test_criterion_4_adjoint_pairing_isomorphism():
    t0 = time.monotonic()
    rng = random.Random(20260810)
    failures = 0
    for _ in range(100):
        n1 = rng.randint(1, 4)
        n2 = rng.randint(1, 4)
        modulus = rng.randint(2, 12)
        c = IntMatrix.from_rows(
            [[rng.randrange(modulus) for _ in range(n2)] for _ in range(n1)], cols=n2
        )
        ok, wit = check_adjoint_pairing(c, modulus)
        if not ok:
            failures += 1
        assert wit.left_quotient.order() == wit.right_quotient.order()
    assert failures == 0
    _report(4, t0, "100 random pairings all induce quotient/dual isomorphisms")


FIELDS_FOR_SYMBOLS = ("Qp:2", "Qp:3", "Qp:5", "Qp:7", "Fq((t)):3", "Fq((t)):5")


def _random_element(rng, field):
    if field.kind == "p-adic":
        while True:
            num = rng.randint(-50, 50)
            den = rng.randint(1, 50)
            if num:
                return padic_element(field, Fraction(num, den))
    q = field.residue.q
    while True:
        coeffs = {}
        for d in range(rng.randint(-2, 0), rng.randint(1, 3)):
            c = rng.randrange(q)
            if c:
                coeffs[d] = c
        if coeffs:
            return laurent_element(field, coeffs)


def test_criterion_5_hilbert_symbol_against_oracle():
    t0 = time.monotonic()
    rng = random.Random(55)
    for desc in FIELDS_FOR_SYMBOLS:
        field = parse_field(desc)
        for _ in range(500):
            a = _random_element(rng, field)
            b = _random_element(rng, field)
            if field.kind == "p-adic":
                expected = padic_conic_solvable(field.residue.p, a.rational, b.rational)
            else:
                expected = laurent_conic_solvable(field.residue, dict(a.laurent), dict(b.laurent))
            assert hilbert2(field, a, b) == (1 if expected else -1), (
                desc,
                a.format(),
                b.format(),
            )
    # pinned dyadic value
    q2 = parse_field("Qp:2")
    assert hilbert2(q2, minus_one_element(q2), minus_one_element(q2)) == -1
    # Steinberg, symmetry, bimultiplicativity
    for desc in FIELDS_FOR_SYMBOLS:
        field = parse_field(desc)
        for _ in range(100):
            a = _random_element(rng, field)
            b = _random_element(rng, field)
            c = _random_element(rng, field)
            assert hilbert2(field, a, a.mul(minus_one_element(field))) == 1
            assert hilbert2(field, a, b) == hilbert2(field, b, a)
            assert hilbert2(field, a.mul(c), b) == hilbert2(field, a, b) * hilbert2(field, c, b)
    dt = time.monotonic() - t0
    assert dt < 60.0
    _report(5, t0, "500 oracle comparisons per field plus pinned and algebraic laws")


def test_criterion_6_sign_cover_algebra():
    t0 = time.monotonic()
    rng = random.Random(66)
    for desc in FIELDS_FOR_SYMBOLS:
        field = parse_field(desc)
        for _ in range(500):
            x = CoverElement(_random_element(rng, field), rng.choice((1, -1)))
            y = CoverElement(_random_element(rng, field), rng.choice((1, -1)))
            z = CoverElement(_random_element(rng, field), rng.choice((1, -1)))
            left = cover_mul(field, cover_mul(field, x, y), z)
            right = cover_mul(field, x, cover_mul(field, y, z))
            assert left.sign == right.sign
            a = x.element
            b = y.element
            lhs = tau(field, a.mul(b))
            rhs = cover_mul(field, tau(field, a), tau(field, b))
            assert lhs.sign == rhs.sign
            assert tau(field, a).sign == hilbert2(field, a, a)

    def binom2(v):
        return v * (v - 1) // 2

    for a_int in range(-100, 101):
        for b_int in range(-100, 101):
            assert binom2(a_int + b_int) - binom2(a_int) - binom2(b_int) == a_int * b_int
        assert (binom2(2 * a_int) - a_int) % 2 == 0
    _report(6, t0, "cover associativity, section homomorphism, binomial cocycle identities")


def test_criterion_7_sharp_construction_invariants():
    t0 = time.monotonic()
    from coverkit.intlinalg import solve_matrix

    for label, datum, _, form in grid_cases():
        sharp = sharpen(datum, form)
        n = form.modulus
        assert solve_matrix(sharp.basis, IntMatrix.identity(datum.rank).scaled(n)) is not None, label
        rng = random.Random(77)
        for _ in range(25):
            x = sharp.basis.apply([rng.randint(-4, 4) for _ in range(datum.rank)])
            assert (2 * form.q_value(x)) % n == 0, label
        for j in range(sharp.sc_basis.cols):
            assert form.q_value(sharp.sc_basis.column(j)) == 0, label
        sd = sharp_root_datum(datum, sharp)
        assert validate(sd) == [], label
        again = sharpen(sd, restrict_form(form, sharp.basis))
        assert again.basis.data == IntMatrix.identity(datum.rank).data, label
    _report(7, t0, "radical containment, 2-torsion restriction, valid sharp datum, idempotence")


def test_criterion_8_genuine_character_criterion():
    t0 = time.monotonic()
    q2 = parse_field("Qp:2")
    q3 = parse_field("Qp:3")
    q5 = parse_field("Qp:5")
    assert genuine_character_obstruction(q2, [2], [1], [0], 2).vanishes is False
    assert genuine_character_obstruction(q3, [2], [1], [0], 2).vanishes is True
    entry = kummer_f_entry(q5, 2, padic_element(q5, 5))
    assert entry == 0  # {5, -1} = +1 over Q_5, by hand
    rep = genuine_character_obstruction(q5, [2], [0], [entry], 2)
    assert rep.values == (0,)
    assert rep.vanishes is True
    dt = time.monotonic() - t0
    assert dt < 1.0
    _report(8, t0, "verdicts: no over Q2, yes over Q3, Kummer-built table over Q5")


def test_criterion_9_cli_end_to_end(tmp_path, capsys):
    t0 = time.monotonic()
    assert main(["analyze", "sample_documents/gl2_kp.json"]) == 0
    out = capsys.readouterr().out
    assert "K ≅ Z/2" in out
    assert main(["obstruction", "sample_documents/gl2_kp.json", "--chi", "1"]) == 0
    out = capsys.readouterr().out
    assert "solutions: 1 + 2Z" in out

    assert main(["analyze", "sample_documents/gl2_kp.json", "--json"]) == 0
    first = capsys.readouterr().out
    report_path = tmp_path / "report.json"
    report_path.write_text(first)
    assert main(["analyze", str(report_path), "--json"]) == 0
    second = capsys.readouterr().out
    assert first == second
    assert dump_json(json.loads(first)) == first
    _report(9, t0, "CLI analyze/obstruction on the GL2 document; byte-stable round trip")
