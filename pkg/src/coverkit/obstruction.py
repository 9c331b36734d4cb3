"""Coinvariant sequences and the obstruction-vanishing solver.

From a datum, a Galois action and a strictly Weyl-invariant form we build
the exact sequence

    (radical pi1)_Gamma  ->  (pi1)_Gamma  --gamma-->  C  ->  0,

where C is the cokernel of the induced map.  C is N-torsion, its dual K is
the obstruction group, and solving gamma(x) = -chi enumerates the classes
on which a prescribed obstruction character dies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .abgroup import AbHom, FgAbGroup, Presentation, cokernel, hom_kernel_image, pontryagin_dual
from .errors import ActionDoesNotPreserveSharp, BadChi, BadParams
from .intlinalg import IntMatrix, mod_kernel_basis, solve_matrix
from .quadform import MetaplecticForm, SharpData, require_strict, sharpen
from .rootdatum import BasedRootDatum, GaloisAction, require_valid, validate_action


@dataclass(frozen=True)
class GammaSequence:
    modulus: int
    sharp: SharpData
    source: Presentation  # coinvariants of the radical pi1, radical coordinates
    middle: Presentation  # coinvariants of pi1, lattice coordinates
    induced: AbHom  # source.group -> middle.group
    c_pres: Presentation  # C as a quotient of the same ambient lattice
    gamma: AbHom  # middle.group -> C

    @property
    def c_group(self) -> FgAbGroup:
        return self.c_pres.group

    @property
    def k_group(self) -> FgAbGroup:
        return pontryagin_dual(self.c_group, self.modulus)

    def gamma_of(self, middle_coords: Sequence[int]) -> tuple[int, ...]:
        return self.gamma.apply(middle_coords)


def build_gamma(
    datum: BasedRootDatum,
    action: GaloisAction | None,
    form: MetaplecticForm,
    sharp: SharpData | None = None,
) -> GammaSequence:
    require_valid(datum)
    require_strict(datum, form)
    if action is not None:
        problems = validate_action(datum, action)
        if problems:
            raise BadParams("action incompatible with datum: " + "; ".join(problems))
    if sharp is None:
        sharp = sharpen(datum, form)
    n = datum.rank
    gens = list(action.generators) if action else []

    sharp_gens = []
    for g in gens:
        moved = solve_matrix(sharp.basis, g @ sharp.basis)
        if moved is None:
            raise ActionDoesNotPreserveSharp(
                "a Galois generator moves the radical sublattice; "
                "the form is not equivariant for this action"
            )
        sharp_gens.append(moved)
        if sharp.sc_basis.cols and solve_matrix(sharp.sc_basis, g @ sharp.sc_basis) is None:
            raise ActionDoesNotPreserveSharp(
                "a Galois generator moves the scaled-coroot span; "
                "the form is not equivariant for this action"
            )

    coroot_cols = IntMatrix.from_columns(list(datum.coroots), rows=n)
    middle_rel = coroot_cols
    for g in gens:
        middle_rel = middle_rel.hstack(g - IntMatrix.identity(n))
    middle = cokernel(middle_rel)

    source_rel = IntMatrix.from_columns(list(sharp.coroots), rows=n)
    for g in sharp_gens:
        source_rel = source_rel.hstack(g - IntMatrix.identity(n))
    source = cokernel(source_rel)

    cols = []
    for g in source.group.generators():
        lift = source.lift(g)
        cols.append(middle.project(sharp.basis.apply(lift)))
    induced = AbHom(
        source.group, middle.group, IntMatrix.from_columns(cols, rows=middle.group.dim)
    )

    c_pres = cokernel(middle_rel.hstack(sharp.basis))
    gcols = [c_pres.project(middle.lift(g)) for g in middle.group.generators()]
    gamma = AbHom(
        middle.group, c_pres.group, IntMatrix.from_columns(gcols, rows=c_pres.group.dim)
    )

    assert c_pres.group.is_finite(), "C must be finite (N * lattice lies in the radical)"
    for d in c_pres.group.invariant_factors:
        assert form.modulus % d == 0, "C must be N-torsion"
    return GammaSequence(form.modulus, sharp, source, middle, induced, c_pres, gamma)


@dataclass(frozen=True)
class AdjointPairingWitness:
    left_quotient: FgAbGroup
    right_quotient: FgAbGroup
    hom_matrix: IntMatrix
    kernel_order: int
    is_isomorphism: bool


def check_adjoint_pairing(c: IntMatrix, modulus: int) -> tuple[bool, AdjointPairingWitness]:
    """Does the pairing identify each side's quotient with the other's dual?

    ``c`` is an n1 x n2 table mod ``modulus``.  Both radicals are computed,
    the induced map  Z^n1/rad1 -> Hom(Z^n2/rad2, Z/modulus)  is assembled on
    generators, and bijectivity is certified by order count plus a trivial
    kernel (both from normal forms).
    """
    rad1 = mod_kernel_basis(c.transpose(), modulus)
    rad2 = mod_kernel_basis(c, modulus)
    q1 = cokernel(rad1)
    q2 = cokernel(rad2)
    assert q1.group.is_finite() and q2.group.is_finite()
    dual2 = pontryagin_dual(q2.group, modulus)

    rows = []
    factors = q2.group.invariant_factors
    for i, d in enumerate(factors):
        # coordinate i of the hom sending x -> <x, y_i>, in dual coordinates
        row = []
        y = q2.lift(tuple(1 if k == i else 0 for k in range(q2.group.dim)))
        for g in q1.group.generators():
            x = q1.lift(g)
            val = sum(a * b for a, b in zip(c.apply(y), x)) % modulus
            step = modulus // d
            if val % step:
                raise AssertionError("pairing value does not respect torsion orders")
            row.append((val // step) % d)
        rows.append(row)
    hom_matrix = IntMatrix.from_rows(rows, cols=q1.group.dim)
    f = AbHom(q1.group, dual2, hom_matrix)
    ker, im = hom_kernel_image(f)
    ok = (
        ker.group.is_trivial()
        and q1.group.order() == dual2.order()
        and im.group.order() == dual2.order()
    )
    witness = AdjointPairingWitness(
        left_quotient=q1.group,
        right_quotient=q2.group,
        hom_matrix=hom_matrix,
        kernel_order=ker.group.order() or 0,
        is_isomorphism=ok,
    )
    return ok, witness


@dataclass(frozen=True)
class ObstructionReport:
    chi: tuple[int, ...]
    solution_representative: tuple[int, ...]
    kernel_generators: tuple[tuple[int, ...], ...]
    solvable: bool
    coset_size: int | None  # None means infinite

    def describe_coset(self) -> str:
        rep = list(self.solution_representative)
        if len(rep) == 1 and self.coset_size is None and len(self.kernel_generators) >= 1:
            steps = sorted({abs(g[0]) for g in self.kernel_generators if g[0]})
            if len(steps) == 1:
                return f"{rep[0]} + {steps[0]}Z"
        gens = ", ".join(str(list(g)) for g in self.kernel_generators) or "0"
        return f"{list(rep)} + <{gens}>"


def validate_chi(seq: GammaSequence, chi: Sequence[int]) -> tuple[int, ...]:
    if len(chi) != seq.c_group.dim:
        raise BadChi(f"expected {seq.c_group.dim} coordinates for C = {seq.c_group}, got {len(chi)}")
    for x in chi:
        if not isinstance(x, int):
            raise BadChi(f"non-integer coordinate {x!r}")
    return seq.c_group.reduce(chi)


def _reduce_mod_lattice(vec: tuple[int, ...], lattice_cols: list[tuple[int, ...]]) -> tuple[int, ...]:
    """Canonical small representative of vec modulo the spanned lattice."""
    from .intlinalg import row_hermite_form

    if not lattice_cols:
        return vec
    h = row_hermite_form(IntMatrix.from_rows([list(c) for c in lattice_cols], cols=len(vec)))
    out = list(vec)
    for row in h.data:
        j = next((k for k, x in enumerate(row) if x), None)
        if j is None:
            continue
        q = out[j] // row[j]
        if q:
            out = [x - q * y for x, y in zip(out, row)]
    return tuple(out)


def solve_obstruction(seq: GammaSequence, chi: Sequence[int]) -> ObstructionReport:
    """A representative with gamma(rep) = -chi and the kernel it is a coset of."""
    chi = validate_chi(seq, chi)
    target = seq.c_group.neg(chi)
    rep = seq.middle.project(seq.c_pres.lift(target))
    kgens = tuple(seq.induced.apply(g) for g in seq.source.group.generators())
    mg = seq.middle.group
    torsion_cols = [
        tuple(d if k == i else 0 for k in range(mg.dim))
        for i, d in enumerate(mg.invariant_factors)
    ]
    rep = mg.reduce(_reduce_mod_lattice(rep, [tuple(g) for g in kgens] + torsion_cols))
    assert seq.gamma.apply(rep) == target, "projection lift must solve the congruence"
    middle_order = seq.middle.group.order()
    c_order = seq.c_group.order()
    coset = None if middle_order is None else middle_order // c_order
    return ObstructionReport(
        chi=chi,
        solution_representative=rep,
        kernel_generators=kgens,
        solvable=True,
        coset_size=coset,
    )


def verify_vanishing(seq: GammaSequence, beta_class: Sequence[int], chi: Sequence[int]) -> bool:
    """Does the class beta kill the obstruction character chi?"""
    chi = validate_chi(seq, chi)
    beta = seq.middle.group.reduce(beta_class)
    return seq.gamma.apply(beta) == seq.c_group.neg(chi)
