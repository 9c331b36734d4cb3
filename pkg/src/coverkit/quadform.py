"""Quadratic forms on the cocharacter lattice and their derived structure.

A form is stored by its basis values Q(e_i) in Z/N together with the
symmetric matrix of the associated bilinear form b (whose diagonal is 2Q).
From a strictly Weyl-invariant form we derive the pairing on the coroot and
coweight lattices, the pairing between the fundamental-group quotient and
the central sublattice, and the radical ("sharp") sublattice with its own
based root datum and 2-torsion character.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .abgroup import Presentation, cokernel
from .errors import InvalidForm, WellDefinednessFailure
from .intlinalg import IntMatrix, kernel_basis, lattice_basis, mod_kernel_basis, solve_matrix
from .rootdatum import BasedRootDatum, DerivedLattices, derive, require_valid, validate


@dataclass(frozen=True)
class MetaplecticForm:
    """Q : Z^n -> Z/modulus with b(x, y) = Q(x+y) - Q(x) - Q(y)."""

    modulus: int
    q_basis: tuple[int, ...]
    b_matrix: IntMatrix

    def __post_init__(self) -> None:
        n = len(self.q_basis)
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        if self.b_matrix.rows != n or self.b_matrix.cols != n:
            raise ValueError("bilinear matrix shape does not match q_basis")
        for i in range(n):
            if not 0 <= self.q_basis[i] < self.modulus:
                raise ValueError(f"q_basis[{i}] not reduced mod {self.modulus}")
            if self.b_matrix.data[i][i] % self.modulus != (2 * self.q_basis[i]) % self.modulus:
                raise ValueError(f"diagonal b[{i}][{i}] != 2 Q(e_{i}) mod {self.modulus}")
            for j in range(n):
                if not 0 <= self.b_matrix.data[i][j] < self.modulus:
                    raise ValueError("bilinear matrix not reduced mod modulus")
                if self.b_matrix.data[i][j] != self.b_matrix.data[j][i]:
                    raise ValueError("bilinear matrix not symmetric")

    @property
    def rank(self) -> int:
        return len(self.q_basis)

    def q_value(self, vec: Sequence[int]) -> int:
        n = self.rank
        if len(vec) != n:
            raise ValueError("vector length mismatch")
        total = 0
        for i in range(n):
            total += vec[i] * vec[i] * self.q_basis[i]
            for j in range(i + 1, n):
                total += vec[i] * vec[j] * self.b_matrix.data[i][j]
        return total % self.modulus

    def b_value(self, v: Sequence[int], w: Sequence[int]) -> int:
        return sum(x * y for x, y in zip(self.b_matrix.apply(v), w)) % self.modulus


def form_from_offdiag(modulus: int, q_basis: Sequence[int], b_offdiag: Sequence[int]) -> MetaplecticForm:
    """Build a form from basis values and the upper off-diagonal of b."""
    n = len(q_basis)
    expected = n * (n - 1) // 2
    if len(b_offdiag) != expected:
        raise ValueError(f"expected {expected} off-diagonal entries, got {len(b_offdiag)}")
    q = tuple(x % modulus for x in q_basis)
    b = [[0] * n for _ in range(n)]
    it = iter(b_offdiag)
    for i in range(n):
        b[i][i] = (2 * q[i]) % modulus
        for j in range(i + 1, n):
            v = next(it) % modulus
            b[i][j] = b[j][i] = v
    return MetaplecticForm(modulus, q, IntMatrix.from_rows(b, cols=n))


def restrict_form(form: MetaplecticForm, basis: IntMatrix) -> MetaplecticForm:
    """The form pulled back to a sublattice given by basis columns."""
    n = basis.cols
    q = tuple(form.q_value(basis.column(j)) for j in range(n))
    b = [[form.b_value(basis.column(i), basis.column(j)) for j in range(n)] for i in range(n)]
    return MetaplecticForm(form.modulus, q, IntMatrix.from_rows(b, cols=n))


def check_strict_weyl_invariance(datum: BasedRootDatum, form: MetaplecticForm) -> list[str]:
    """Violations of b(coroot, e_j) = Q(coroot) <root, e_j> mod N."""
    if form.rank != datum.rank:
        return [f"form rank {form.rank} does not match datum rank {datum.rank}"]
    out = []
    n = form.modulus
    for i, alpha in enumerate(datum.coroots):
        qa = form.q_value(alpha)
        for j in range(datum.rank):
            ej = tuple(1 if k == j else 0 for k in range(datum.rank))
            lhs = form.b_value(alpha, ej)
            rhs = (qa * datum.roots[i][j]) % n
            if lhs != rhs:
                out.append(
                    f"coroot {i}, basis vector {j}: b = {lhs} but Q(coroot)*<root, e_j> = {rhs} mod {n}"
                )
    return out


def require_strict(datum: BasedRootDatum, form: MetaplecticForm) -> None:
    problems = check_strict_weyl_invariance(datum, form)
    if problems:
        raise InvalidForm("; ".join(problems))


def galois_invariance_violations(form: MetaplecticForm, generators: Sequence[IntMatrix]) -> list[str]:
    """Q(g x) = Q(x) for all x, checked on basis values and b entries."""
    out = []
    n = form.rank
    basis = [tuple(1 if k == j else 0 for k in range(n)) for j in range(n)]
    for gi, g in enumerate(generators):
        imgs = [g.apply(e) for e in basis]
        for j in range(n):
            if form.q_value(imgs[j]) != form.q_basis[j]:
                out.append(f"generator {gi} changes Q(e_{j})")
        for i in range(n):
            for j in range(n):
                if form.b_value(imgs[i], imgs[j]) != form.b_matrix.data[i][j] % form.modulus:
                    out.append(f"generator {gi} changes b(e_{i}, e_{j})")
    return out


@dataclass(frozen=True)
class CorootCoweightPairing:
    """b restricted to the coroot lattice, in coroot x coweight coordinates."""

    modulus: int
    table: tuple[tuple[int, ...], ...]  # l x l


def derive_b1(datum: BasedRootDatum, form: MetaplecticForm) -> CorootCoweightPairing:
    require_valid(datum)
    require_strict(datum, form)
    n = form.modulus
    l = datum.semisimple_rank
    table = tuple(
        tuple((form.q_value(datum.coroots[i]) if i == k else 0) % n for k in range(l))
        for i in range(l)
    )
    # agreement with b on coroot x lattice, transported through the coweight map
    ad = datum.root_matrix()
    for i in range(l):
        for j in range(datum.rank):
            ej = tuple(1 if k == j else 0 for k in range(datum.rank))
            w = ad.apply(ej)
            lhs = sum(table[i][k] * w[k] for k in range(l)) % n
            if lhs != form.b_value(datum.coroots[i], ej):
                raise WellDefinednessFailure(
                    "coroot/coweight pairing disagrees with b on the lattice"
                )
    return CorootCoweightPairing(n, table)


@dataclass(frozen=True)
class CenterPairing:
    """Pairing of pi1 classes against the kernel of the coweight map."""

    modulus: int
    pi1: Presentation
    kernel_basis: IntMatrix  # columns span Ker(lattice -> coweight lattice)
    table: tuple[tuple[int, ...], ...]  # pi1.dim x kernel rank

    def value(self, pi1_coords: Sequence[int], kernel_coords: Sequence[int]) -> int:
        coords = self.pi1.group.reduce(pi1_coords)
        total = 0
        for i, c in enumerate(coords):
            for k, z in enumerate(kernel_coords):
                total += c * z * self.table[i][k]
        return total % self.modulus


def derive_b2(datum: BasedRootDatum, form: MetaplecticForm, derived: DerivedLattices | None = None) -> CenterPairing:
    require_strict(datum, form)
    if derived is None:
        derived = derive(datum)
    n = form.modulus
    zker = kernel_basis(derived.ad_map)
    # independence of the pi1 lift: b must kill (coroot, kernel) pairs
    for alpha in datum.coroots:
        for k in range(zker.cols):
            if form.b_value(alpha, zker.column(k)) != 0:
                raise WellDefinednessFailure(
                    "pairing depends on the choice of lift: b(coroot, kernel) != 0"
                )
    table = []
    for g in derived.pi1.group.generators():
        lift = derived.pi1.lift(g)
        table.append(tuple(form.b_value(lift, zker.column(k)) for k in range(zker.cols)))
    return CenterPairing(n, derived.pi1, zker, tuple(table))


@dataclass(frozen=True)
class SharpData:
    """The radical sublattice of b with its induced root datum data."""

    modulus: int
    basis: IntMatrix  # n x n columns spanning the radical, canonical
    index: int  # lattice index [full : radical]
    coroot_orders: tuple[int, ...]  # additive order of Q(coroot_i) in Z/N
    coroots: tuple[tuple[int, ...], ...]  # scaled coroots, in radical coordinates
    roots: tuple[tuple[int, ...], ...]  # divided roots, as covectors on the radical
    sc_basis: IntMatrix  # span of the scaled coroots, in ambient coordinates
    ad_kernel_basis: IntMatrix  # radical of the coroot/coweight pairing, coweight side
    pi1: Presentation  # radical modulo scaled-coroot span (radical coordinates)
    epsilon: tuple[int, ...]  # Z/2 value of Q on each pi1 generator


def sharpen(datum: BasedRootDatum, form: MetaplecticForm) -> SharpData:
    require_valid(datum)
    require_strict(datum, form)
    n = form.modulus
    rank = datum.rank

    basis = mod_kernel_basis(form.b_matrix, n)
    assert basis.cols == rank, "radical of an N-torsion pairing must have full rank"
    index = abs(basis.det())

    # N * lattice is always inside the radical
    assert solve_matrix(basis, IntMatrix.identity(rank).scaled(n)) is not None

    orders = tuple(n // gcd(n, form.q_value(a)) for a in datum.coroots)
    scaled = [tuple(o * x for x in a) for o, a in zip(orders, datum.coroots)]
    coroot_coords = []
    for v in scaled:
        c = solve_matrix(basis, IntMatrix.from_columns([v]))
        assert c is not None, "scaled coroot fell outside the radical"
        coroot_coords.append(c.column(0))
    roots = []
    for o, root in zip(orders, datum.roots):
        vals = [sum(root[k] * basis.data[k][j] for k in range(rank)) for j in range(rank)]
        divided = []
        for v in vals:
            assert v % o == 0, "root value on the radical is not divisible by the order"
            divided.append(v // o)
        roots.append(tuple(divided))

    sc_basis = lattice_basis(IntMatrix.from_columns(scaled, rows=rank))
    # cross-check: the coroot-side radical of the coroot/coweight pairing is
    # exactly the span of the scaled coroots
    l = datum.semisimple_rank
    b1_diag = IntMatrix.from_rows(
        [[form.q_value(datum.coroots[i]) if i == j else 0 for j in range(l)] for i in range(l)],
        cols=l,
    )
    sc_radical = mod_kernel_basis(b1_diag, n)
    expected = lattice_basis(
        IntMatrix.from_columns(
            [tuple(o if i == j else 0 for i in range(l)) for j, o in enumerate(orders)],
            rows=l,
        )
    )
    assert sc_radical.data == expected.data, "coroot-side radical disagrees with scaled coroots"
    ad_kernel = mod_kernel_basis(b1_diag.transpose(), n)

    pi1 = cokernel(IntMatrix.from_columns(coroot_coords, rows=rank))
    eps = []
    for g in pi1.group.generators():
        lift = pi1.lift(g)
        ambient = basis.apply(lift)
        val = form.q_value(ambient)
        if val == 0:
            eps.append(0)
        elif n % 2 == 0 and val == n // 2:
            eps.append(1)
        else:
            raise WellDefinednessFailure(
                f"Q takes non-2-torsion value {val} mod {n} on the radical"
            )
    for bit, d in zip(eps, pi1.group.invariant_factors):
        assert bit == 0 or d % 2 == 0, "2-torsion character inconsistent with generator order"
    return SharpData(
        modulus=n,
        basis=basis,
        index=index,
        coroot_orders=orders,
        coroots=tuple(coroot_coords),
        roots=tuple(roots),
        sc_basis=sc_basis,
        ad_kernel_basis=ad_kernel,
        pi1=pi1,
        epsilon=tuple(eps),
    )


def sharp_root_datum(datum: BasedRootDatum, sharp: SharpData) -> BasedRootDatum:
    out = BasedRootDatum(
        rank=datum.rank,
        coroots=sharp.coroots,
        roots=sharp.roots,
        name=(datum.name + "#") if datum.name else "sharp",
    )
    problems = validate(out)
    if problems:
        raise AssertionError(f"sharp construction produced an invalid datum: {problems}")
    return out


def dual_root_datum(datum: BasedRootDatum) -> BasedRootDatum:
    """Swap the lattice with its dual and the coroots with the roots."""
    require_valid(datum)
    out = BasedRootDatum(
        rank=datum.rank,
        coroots=datum.roots,
        roots=datum.coroots,
        name=(datum.name + "^") if datum.name else "dual",
    )
    problems = validate(out)
    assert not problems, f"dual of a valid datum must be valid: {problems}"
    return out


def epsilon_value(form: MetaplecticForm, sharp: SharpData, radical_coords: Sequence[int]) -> int:
    """Z/2 value of the 2-torsion character on a radical lattice vector."""
    val = form.q_value(sharp.basis.apply(radical_coords))
    if val == 0:
        return 0
    if form.modulus % 2 == 0 and val == form.modulus // 2:
        return 1
    raise WellDefinednessFailure(f"Q takes non-2-torsion value {val} on the radical")
