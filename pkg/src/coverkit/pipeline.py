"""Report builders: the full analysis pipeline over a problem document.

Everything returns plain dicts with deterministic content; serialization
order is fixed by dumping with sorted keys.
"""

from __future__ import annotations

import itertools
import random
from typing import Sequence

from .documents import (
    GenuineBlock,
    NormalizedProblem,
    ProblemDocument,
    group_dict,
    matrix_rows,
    normalize_document,
)
from .errors import BadChi, BadDocument
from .localfield import (
    genuine_character_obstruction,
    hilbert2,
    kummer_f_entry,
    parse_element,
    parse_field,
    tame_symbol,
)
from .obstruction import GammaSequence, build_gamma, solve_obstruction, verify_vanishing
from .quadform import (
    check_strict_weyl_invariance,
    derive_b2,
    dual_root_datum,
    galois_invariance_violations,
    sharp_root_datum,
    sharpen,
)
from .rootdatum import action_permutes_blocks
from .rootdatum import catalog as catalog_lookup
from .rootdatum import derive, validate

TATE_TWIST_WARNING = (
    "Tate twists are identified with Z/N throughout; Galois equivariance of the "
    "form is meaningful only when the cyclotomic action on Z/N is trivial "
    "(e.g. mu_N inside the base field)."
)


def analyze(doc: ProblemDocument, seed: int = 0) -> dict:
    """Full pipeline: validate, derive, sharpen, dualize, build the sequence."""
    norm = normalize_document(doc)
    datum, action, form = norm.datum, norm.action, norm.form

    strict = check_strict_weyl_invariance(datum, form)
    if strict:
        raise BadDocument("form is not strictly Weyl-invariant: " + "; ".join(strict))
    warnings = [TATE_TWIST_WARNING]
    if action is not None:
        if norm.twist_declared_trivial:
            qv = galois_invariance_violations(form, action.generators)
            if qv:
                raise BadDocument(
                    "form is not invariant under the Galois action "
                    "(cyclotomic twist was declared trivial): " + "; ".join(qv)
                )
        else:
            warnings.append(
                "cyclotomic twist not declared trivial: Galois equivariance of the "
                "form was not checked"
            )
        if norm.product_ranks and action_permutes_blocks(norm.product_ranks, action):
            warnings.append(
                "a Galois generator permutes the product factors; coinvariants are "
                "taken on the full product lattice"
            )

    derived = derive(datum)
    sharp = sharpen(datum, form)
    sharp_datum = sharp_root_datum(datum, sharp)
    dual_datum = dual_root_datum(sharp_datum)
    b2 = derive_b2(datum, form, derived)
    seq = build_gamma(datum, action, form, sharp)

    report = {
        "input": norm.document,
        "validation": {
            "datum": [],
            "strict_weyl_invariance": [],
        },
        "derived": {
            "cartan_matrix": matrix_rows(datum.cartan_matrix()),
            "pi1": group_dict(derived.pi1.group),
            "pi1_torsion": group_dict(derived.pi1_torsion),
        },
        "b1": {
            "table": [
                [form.q_value(datum.coroots[i]) if i == k else 0 for k in range(datum.semisimple_rank)]
                for i in range(datum.semisimple_rank)
            ],
        },
        "b2": {
            "kernel_basis": matrix_rows(b2.kernel_basis),
            "table": [list(r) for r in b2.table],
        },
        "sharp": {
            "basis": matrix_rows(sharp.basis),
            "index": sharp.index,
            "coroot_orders": list(sharp.coroot_orders),
            "pi1_sharp": group_dict(sharp.pi1.group),
            "epsilon": list(sharp.epsilon),
            "sc_basis": matrix_rows(sharp.sc_basis),
            "ad_kernel_basis": matrix_rows(sharp.ad_kernel_basis),
        },
        "sharp_datum": _datum_dict(sharp_datum),
        "dual_datum": _datum_dict(dual_datum),
        "gamma": {
            "source": group_dict(seq.source.group),
            "middle": group_dict(seq.middle.group),
            "induced_matrix": matrix_rows(seq.induced.matrix),
            "gamma_matrix": matrix_rows(seq.gamma.matrix),
            "C": group_dict(seq.c_group),
            "K": group_dict(seq.k_group),
        },
        "spot_checks": _spot_checks(norm, b2, seed),
        "warnings": warnings,
    }
    if doc.genuine_character is not None:
        report["genuine"] = genuine_block_report(doc.genuine_character, form.modulus)
    return report


def _datum_dict(datum) -> dict:
    return {
        "rank": datum.rank,
        "simple_coroots": [list(c) for c in datum.coroots],
        "simple_roots": [list(r) for r in datum.roots],
        "name": datum.name,
        "valid": validate(datum) == [],
    }


def _spot_checks(norm: NormalizedProblem, b2, seed: int) -> dict:
    """Randomized lift-independence checks; seeded for reproducibility."""
    rng = random.Random(seed)
    form = norm.form
    pi1 = b2.pi1
    samples = 0
    for _ in range(20):
        if pi1.group.dim == 0 or b2.kernel_basis.cols == 0:
            break
        coords = pi1.group.reduce([rng.randint(0, 5) for _ in range(pi1.group.dim)])
        lift1 = pi1.lift(coords)
        rel = pi1.relation_lattice()
        lift2 = list(lift1)
        for j in range(rel.cols):
            c = rng.randint(-2, 2)
            lift2 = [x + c * y for x, y in zip(lift2, rel.column(j))]
        for k in range(b2.kernel_basis.cols):
            z = b2.kernel_basis.column(k)
            if form.b_value(lift1, z) != form.b_value(lift2, z):
                raise AssertionError("central pairing depends on the lift")
        samples += 1
    return {"seed": seed, "b2_lift_independence_samples": samples, "passed": True}


def rebuild_sequence(doc: ProblemDocument) -> tuple[NormalizedProblem, GammaSequence]:
    norm = normalize_document(doc)
    strict = check_strict_weyl_invariance(norm.datum, norm.form)
    if strict:
        raise BadDocument("form is not strictly Weyl-invariant: " + "; ".join(strict))
    seq = build_gamma(norm.datum, norm.action, norm.form)
    return norm, seq


def obstruction_report(doc: ProblemDocument, chi: Sequence[int] | None, window: int = 8) -> dict:
    """Analysis plus the solution coset for the requested character."""
    if chi is None:
        if doc.obstruction is None:
            raise BadChi("no chi given and the document has no obstruction block")
        chi = doc.obstruction.chi
    report = analyze(doc)
    _, seq = rebuild_sequence(doc)
    sol = solve_obstruction(seq, tuple(chi))
    window_elements = _solution_window(seq, tuple(chi), window)
    report["obstruction"] = {
        "chi": list(sol.chi),
        "solution_representative": list(sol.solution_representative),
        "kernel_generators": [list(g) for g in sol.kernel_generators],
        "solvable": sol.solvable,
        "coset_size": "infinite" if sol.coset_size is None else sol.coset_size,
        "coset": sol.describe_coset(),
        "window": window,
        "solutions_in_window": window_elements,
    }
    return report


def _solution_window(seq: GammaSequence, chi: tuple[int, ...], window: int) -> list[list[int]]:
    g = seq.middle.group
    axes = [range(d) for d in g.invariant_factors]
    axes += [range(-window, window + 1)] * g.free_rank
    out = []
    for combo in itertools.product(*axes):
        x = g.reduce(combo)
        if verify_vanishing(seq, x, chi):
            out.append(list(x))
        if len(out) >= 500:
            break
    return out


def genuine_report(doc: ProblemDocument) -> dict:
    if doc.genuine_character is None:
        raise BadDocument("document has no genuine_character block")
    block = doc.genuine_character
    modulus = doc.form.N
    return genuine_block_report(block, modulus)


def genuine_block_report(block: GenuineBlock, modulus: int) -> dict:
    field = parse_field(block.field)
    if block.f_table is not None:
        f_values = list(block.f_table)
    else:
        if len(block.f_kummer) != len(block.torsion):
            raise BadDocument("f_kummer needs one element per torsion degree")
        f_values = []
        for m, text in zip(block.torsion, block.f_kummer):
            c = parse_element(field, text)
            entry = kummer_f_entry(field, m, c)
            if modulus % m:
                raise BadDocument(
                    f"cannot embed a degree-{m} symbol value into Z/{modulus}"
                )
            f_values.append((entry * (modulus // m)) % modulus)
    try:
        rep = genuine_character_obstruction(field, block.torsion, block.eps, f_values, modulus)
    except ValueError as exc:
        raise BadDocument(str(exc)) from None
    return {
        "field": field.descriptor,
        "modulus": modulus,
        "torsion": list(rep.torsion_degrees),
        "mu_orders": list(rep.mu_orders),
        "f_values": f_values,
        "values": list(rep.values),
        "minus_one_symbol": rep.minus_one_symbol,
        "exists": rep.vanishes,
    }


def hilbert_eval(field_desc: str, a_text: str, b_text: str) -> dict:
    field = parse_field(field_desc)
    a = parse_element(field, a_text)
    b = parse_element(field, b_text)
    value = hilbert2(field, a, b)
    return {
        "field": field.descriptor,
        "a": a.format(),
        "b": b.format(),
        "symbol": value,
        "display": "+1" if value == 1 else "-1",
    }


def tame_eval(field_desc: str, m: int, a_text: str, b_text: str) -> dict:
    field = parse_field(field_desc)
    a = parse_element(field, a_text)
    b = parse_element(field, b_text)
    value = tame_symbol(field, m, a, b)
    root = field.residue.primitive_root
    return {
        "field": field.descriptor,
        "degree": m,
        "a": a.format(),
        "b": b.format(),
        "value": value,
        "primitive_root": root,
        "display": f"{value} (mod {m}; primitive root {root})",
    }


def catalog_document(name: str, **params) -> dict:
    datum, action = catalog_lookup(name, **params)
    gens = [[list(row) for row in g.data] for g in (action.generators if action else ())]
    return {
        "root_datum": {
            "rank": datum.rank,
            "simple_coroots": [list(c) for c in datum.coroots],
            "simple_roots": [list(r) for r in datum.roots],
            "galois_generators": gens,
            "name": datum.name,
        }
    }


# --- text rendering --------------------------------------------------------


def render_analysis_text(report: dict) -> str:
    lines = []
    rd = report["input"]["root_datum"]
    lines.append(f"datum: {rd['name'] or 'unnamed'} (rank {rd['rank']}, {len(rd['simple_coroots'])} simple coroots)")
    lines.append(f"form: modulus {report['input']['form']['N']}, Q(e_i) = {report['input']['form']['q_basis']}")
    lines.append(f"pi1 ≅ {report['derived']['pi1']['pretty']}")
    lines.append(f"pi1 torsion ≅ {report['derived']['pi1_torsion']['pretty']}")
    sharp = report["sharp"]
    lines.append(f"sharp lattice index: {sharp['index']}, coroot orders {sharp['coroot_orders']}")
    lines.append(f"sharp pi1 ≅ {sharp['pi1_sharp']['pretty']}, epsilon bits {sharp['epsilon']}")
    lines.append(f"sharp datum: {report['sharp_datum']['name']} coroots {report['sharp_datum']['simple_coroots']}")
    lines.append(f"dual datum: coroots {report['dual_datum']['simple_coroots']}")
    if report["b2"]["table"]:
        lines.append(f"central pairing table: {report['b2']['table']} on kernel basis {report['b2']['kernel_basis']}")
    g = report["gamma"]
    lines.append(f"coinvariants: source ≅ {g['source']['pretty']}, middle ≅ {g['middle']['pretty']}")
    lines.append(f"C ≅ {g['C']['pretty']}")
    lines.append(f"K ≅ {g['K']['pretty']}")
    if "obstruction" in report:
        ob = report["obstruction"]
        lines.append(f"chi = {ob['chi']}")
        lines.append(f"solutions: {ob['coset']}")
        lines.append(f"kernel generators: {ob['kernel_generators']}")
        lines.append(f"solutions in window (width {ob['window']}): {ob['solutions_in_window']}")
    if "genuine" in report:
        lines.append(render_genuine_text(report["genuine"]))
    for w in report["warnings"]:
        lines.append(f"warning: {w}")
    return "\n".join(lines)


def render_genuine_text(rep: dict) -> str:
    lines = [
        f"field: {rep['field']}, modulus {rep['modulus']}",
        f"torsion degrees: {rep['torsion']} with mu orders {rep['mu_orders']}",
        f"obstruction character values: {rep['values']}",
        f"genuine character exists: {'yes' if rep['exists'] else 'no'}",
    ]
    if rep["minus_one_symbol"] is not None:
        lines.insert(2, f"{{-1,-1}} = {'+1' if rep['minus_one_symbol'] == 1 else '-1'}")
    return "\n".join(lines)
