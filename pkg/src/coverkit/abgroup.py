"""Finitely generated abelian groups in invariant-factor form.

A group is Z/d1 x ... x Z/dk x Z^r with 2 <= d1 | d2 | ... | dk.  Element
coordinates are (torsion..., free...), torsion coordinate i reduced into
[0, di).  Presentations keep the base change used to build a quotient, so
elements can be transported between the quotient and its ambient lattice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import WellDefinednessFailure
from .intlinalg import (
    IntMatrix,
    inverse_unimodular,
    kernel_basis,
    lattice_basis,
    smith_normal_form,
    solve_matrix,
)


@dataclass(frozen=True)
class FgAbGroup:
    invariant_factors: tuple[int, ...]
    free_rank: int = 0

    def __post_init__(self) -> None:
        for d in self.invariant_factors:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a != 0:
                raise ValueError(f"divisibility chain broken: {a} does not divide {b}")
        if self.free_rank < 0:
            raise ValueError("negative free rank")

    @property
    def dim(self) -> int:
        return len(self.invariant_factors) + self.free_rank

    @property
    def torsion_dim(self) -> int:
        return len(self.invariant_factors)

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def is_trivial(self) -> bool:
        return self.dim == 0

    def order(self) -> int | None:
        """Group order, or None when infinite."""
        if not self.is_finite():
            return None
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(coords)}")
        out = [c % d for c, d in zip(coords, self.invariant_factors)]
        out.extend(int(c) for c in coords[self.torsion_dim:])
        return tuple(out)

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.dim

    def add(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        return self.reduce([a + b for a, b in zip(x, y)])

    def neg(self, x: Sequence[int]) -> tuple[int, ...]:
        return self.reduce([-a for a in x])

    def sub(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        return self.reduce([a - b for a, b in zip(x, y)])

    def scale(self, n: int, x: Sequence[int]) -> tuple[int, ...]:
        return self.reduce([n * a for a in x])

    def generators(self) -> list[tuple[int, ...]]:
        return [tuple(1 if i == j else 0 for j in range(self.dim)) for i in range(self.dim)]

    def elements(self) -> Iterator[tuple[int, ...]]:
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite group")
        for combo in itertools.product(*(range(d) for d in self.invariant_factors)):
            yield combo

    def element_order(self, x: Sequence[int]) -> int | None:
        x = self.reduce(x)
        if any(x[self.torsion_dim:]):
            return None
        n = 1
        for c, d in zip(x, self.invariant_factors):
            if c:
                g = _gcd(c, d)
                n = _lcm(n, d // g)
        return n

    def describe(self) -> str:
        """Human form like 'Z^2 x Z/2 x Z/6' (invariant factors ascending)."""
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " x ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.describe()


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _lcm(a: int, b: int) -> int:
    return abs(a * b) // _gcd(a, b) if a and b else 0


@dataclass(frozen=True)
class Presentation:
    """A quotient Z^n / L presented in invariant-factor form.

    ``project`` maps an ambient vector to its class; ``lift`` picks a
    distinguished preimage.  project(v) == 0 exactly when v lies in L.
    """

    ambient_dim: int
    group: FgAbGroup
    u: IntMatrix
    u_inv: IntMatrix
    diag: tuple[int, ...]  # per ambient coordinate: 0 free, 1 dropped, d>=2 torsion
    slots: tuple[int, ...]  # ambient row index backing each group coordinate

    def project(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.ambient_dim:
            raise ValueError(f"expected ambient vector of length {self.ambient_dim}")
        w = self.u.apply(vec)
        return self.group.reduce([w[i] for i in self.slots])

    def lift(self, coords: Sequence[int]) -> tuple[int, ...]:
        coords = self.group.reduce(coords)
        w = [0] * self.ambient_dim
        for c, i in zip(coords, self.slots):
            w[i] = c
        return self.u_inv.apply(w)

    def generator_lifts(self) -> list[tuple[int, ...]]:
        return [self.lift(g) for g in self.group.generators()]

    def relation_lattice(self) -> IntMatrix:
        """Columns spanning the lattice L with group = Z^n / L."""
        cols = []
        for i, d in enumerate(self.diag):
            if d >= 1:
                e = [0] * self.ambient_dim
                e[i] = d
                cols.append(self.u_inv.apply(e))
        return IntMatrix.from_columns(cols, rows=self.ambient_dim)


def cokernel(relations: IntMatrix) -> Presentation:
    """Z^rows modulo the column span of ``relations``."""
    n = relations.rows
    snf = smith_normal_form(relations)
    sd = snf.diagonal
    diag = tuple(sd[i] if i < len(sd) else 0 for i in range(n))
    torsion = [i for i in range(n) if diag[i] >= 2]
    free = [i for i in range(n) if diag[i] == 0]
    group = FgAbGroup(tuple(diag[i] for i in torsion), len(free))
    return Presentation(
        ambient_dim=n,
        group=group,
        u=snf.U,
        u_inv=inverse_unimodular(snf.U),
        diag=diag,
        slots=tuple(torsion + free),
    )


def lattice_presentation(n: int) -> Presentation:
    """Z^n presented as a quotient of itself by nothing."""
    return cokernel(IntMatrix.from_columns([], rows=n))


def relation_columns(group: FgAbGroup) -> IntMatrix:
    """Columns spanning the relation lattice of the canonical presentation."""
    cols = []
    for i, d in enumerate(group.invariant_factors):
        e = [0] * group.dim
        e[i] = d
        cols.append(e)
    return IntMatrix.from_columns(cols, rows=group.dim)


@dataclass(frozen=True)
class AbHom:
    """Homomorphism between groups in canonical coordinates.

    ``matrix`` (target.dim x source.dim) gives the images of the source
    generators; construction rejects matrices that do not respect torsion.
    """

    source: FgAbGroup
    target: FgAbGroup
    matrix: IntMatrix

    def __post_init__(self) -> None:
        if self.matrix.rows != self.target.dim or self.matrix.cols != self.source.dim:
            raise ValueError(
                f"matrix shape {self.matrix.rows}x{self.matrix.cols} does not match "
                f"hom {self.target.dim}x{self.source.dim}"
            )
        for j, d in enumerate(self.source.invariant_factors):
            col = self.matrix.column(j)
            scaled = [d * x for x in col]
            if any(self.target.reduce(scaled)):
                raise WellDefinednessFailure(
                    f"generator {j} has order {d} but its image does not: "
                    f"column {col} scaled by {d} is nonzero in {self.target}"
                )

    def apply(self, coords: Sequence[int]) -> tuple[int, ...]:
        return self.target.reduce(self.matrix.apply(self.source.reduce(coords)))

    @staticmethod
    def identity(group: FgAbGroup) -> "AbHom":
        return AbHom(group, group, IntMatrix.identity(group.dim))

    @staticmethod
    def zero(source: FgAbGroup, target: FgAbGroup) -> "AbHom":
        return AbHom(source, target, IntMatrix.zero(target.dim, source.dim))


@dataclass(frozen=True)
class Subquotient:
    """A subgroup-or-quotient piece of an ambient group, with generator lifts."""

    group: FgAbGroup
    generators_in_ambient: tuple[tuple[int, ...], ...]


def hom_kernel_image(f: AbHom) -> tuple[Subquotient, Subquotient]:
    """Kernel and image of f, each in invariant-factor form with lifts.

    Kernel generators live in source coordinates, image generators in
    target coordinates.
    """
    rs = relation_columns(f.source)
    rt = relation_columns(f.target)

    # Kernel: x with f.matrix @ x in the target relation lattice.
    block = f.matrix.hstack(rt.scaled(-1)) if rt.cols else f.matrix
    kb = kernel_basis(block)
    xparts = [kb.column(j)[: f.source.dim] for j in range(kb.cols)]
    xparts = [x for x in xparts if any(x)]
    k_lat = lattice_basis(IntMatrix.from_columns(xparts, rows=f.source.dim))
    ker = _lattice_subquotient(k_lat, rs, f.source)

    # Image: span of matrix columns inside the target group.
    gens = f.matrix.hstack(rt) if rt.cols else f.matrix
    i_lat = lattice_basis(gens)
    im = _lattice_subquotient(i_lat, rt, f.target)
    return ker, im


def _lattice_subquotient(num: IntMatrix, den: IntMatrix, ambient: FgAbGroup) -> Subquotient:
    """Present num-lattice / den-lattice; den must lie inside num."""
    if num.cols == 0:
        return Subquotient(FgAbGroup((), 0), ())
    den_in_num = solve_matrix(num, den) if den.cols else IntMatrix.from_columns([], rows=num.cols)
    if den_in_num is None:
        raise WellDefinednessFailure("denominator lattice is not inside the numerator lattice")
    pres = cokernel(den_in_num)
    gens = []
    for g in pres.group.generators():
        v = pres.lift(g)
        gens.append(ambient.reduce(num.apply(v)))
    return Subquotient(pres.group, tuple(gens))


def pontryagin_dual(group: FgAbGroup, modulus: int) -> FgAbGroup:
    """Hom(G, Z/modulus) for a finite group whose exponent divides modulus.

    The dual has the same invariant factors; dual coordinate i pairs with
    group coordinate i through (modulus/di) * xi * yi mod modulus.
    """
    if not group.is_finite():
        raise ValueError("Pontryagin dual requires a finite group")
    for d in group.invariant_factors:
        if modulus % d != 0:
            raise ValueError(f"invariant factor {d} does not divide modulus {modulus}")
    return FgAbGroup(group.invariant_factors, 0)


def dual_pairing(group: FgAbGroup, modulus: int, phi: Sequence[int], x: Sequence[int]) -> int:
    """Value in Z/modulus of a dual element phi on a group element x."""
    phi = pontryagin_dual(group, modulus).reduce(phi)
    x = group.reduce(x)
    total = 0
    for p, c, d in zip(phi, x, group.invariant_factors):
        total += p * c * (modulus // d)
    return total % modulus
