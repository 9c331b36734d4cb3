"""Based root data with Galois actions.

A datum is a cocharacter lattice Z^n with chosen simple coroots (vectors)
and simple roots (covectors), whose pairing matrix is a finite-type Cartan
matrix.  Galois actions are given by integer matrices permuting the simple
coroots; coinvariants are taken with respect to the generators only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .abgroup import FgAbGroup, Presentation, cokernel
from .errors import BadParams, CapExceeded, InvalidDatum, UnknownName
from .intlinalg import IntMatrix, matrix_rank

GALOIS_CLOSURE_CAP = 100_000


@dataclass(frozen=True)
class BasedRootDatum:
    rank: int
    coroots: tuple[tuple[int, ...], ...]
    roots: tuple[tuple[int, ...], ...]
    name: str = ""

    @property
    def semisimple_rank(self) -> int:
        return len(self.coroots)

    def cartan_matrix(self) -> IntMatrix:
        """Pairing <root_i, coroot_j>."""
        return IntMatrix.from_rows(
            [[_dot(r, c) for c in self.coroots] for r in self.roots],
            cols=self.semisimple_rank,
        )

    def coroot_matrix(self) -> IntMatrix:
        """n x l matrix whose columns are the simple coroots."""
        return IntMatrix.from_columns(list(self.coroots), rows=self.rank)

    def root_matrix(self) -> IntMatrix:
        """l x n matrix whose rows are the simple roots."""
        return IntMatrix.from_rows(list(self.roots), cols=self.rank)

    def reflection(self, i: int) -> IntMatrix:
        """s_i on the cocharacter lattice: x -> x - <root_i, x> coroot_i."""
        a = self.coroots[i]
        b = self.roots[i]
        return IntMatrix.from_rows(
            [[(1 if r == c else 0) - a[r] * b[c] for c in range(self.rank)] for r in range(self.rank)]
        )


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def validate(datum: BasedRootDatum) -> list[str]:
    """All violated invariants, as human-readable strings.  Empty = valid."""
    out: list[str] = []
    n, l = datum.rank, datum.semisimple_rank
    if n < 0:
        return [f"negative rank {n}"]
    if len(datum.roots) != l:
        return [f"{l} simple coroots but {len(datum.roots)} simple roots"]
    for tag, vecs in (("coroot", datum.coroots), ("root", datum.roots)):
        for i, v in enumerate(vecs):
            if len(v) != n:
                out.append(f"{tag} {i} has length {len(v)}, expected {n}")
    if out:
        return out
    cm = datum.cartan_matrix().data
    for i in range(l):
        if cm[i][i] != 2:
            out.append(f"pairing <root_{i}, coroot_{i}> = {cm[i][i]}, expected 2")
        for j in range(l):
            if i == j:
                continue
            if cm[i][j] > 0:
                out.append(f"off-diagonal positive: <root_{i}, coroot_{j}> = {cm[i][j]}")
            if (cm[i][j] == 0) != (cm[j][i] == 0):
                out.append(f"asymmetric zero pattern at ({i}, {j})")
    if out:
        return out
    if not _symmetrization_positive_definite(cm, l):
        out.append("symmetrized pairing matrix is not positive definite (not finite type)")
    if matrix_rank(datum.coroot_matrix()) != l:
        out.append("simple coroots are linearly dependent")
    if matrix_rank(datum.root_matrix()) != l:
        out.append("simple roots are linearly dependent")
    return out


def _symmetrization_positive_definite(cm, l: int) -> bool:
    """Find d_i > 0 with d_i cm[i][j] = d_j cm[j][i], then LDL-check > 0."""
    d: list[Fraction | None] = [None] * l
    for start in range(l):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(l):
                if i == j or cm[i][j] == 0:
                    continue
                want = d[i] * cm[i][j] / cm[j][i]
                if d[j] is None:
                    d[j] = want
                    stack.append(j)
                elif d[j] != want:
                    return False  # not symmetrizable
    if any(x is None or x <= 0 for x in d):
        return False
    s = [[d[i] * cm[i][j] for j in range(l)] for i in range(l)]
    for i in range(l):
        for j in range(l):
            if s[i][j] != s[j][i]:
                return False
    # exact rational Cholesky (LDL^T): positive definite iff all pivots > 0
    a = [row[:] for row in s]
    for k in range(l):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, l):
            f = a[i][k] / a[k][k]
            for j in range(k, l):
                a[i][j] -= f * a[k][j]
    return True


def require_valid(datum: BasedRootDatum) -> None:
    problems = validate(datum)
    if problems:
        raise InvalidDatum("; ".join(problems))


@dataclass(frozen=True)
class GaloisAction:
    """Finite group of lattice automorphisms, given by generators."""

    generators: tuple[IntMatrix, ...]

    def closed_group(self, cap: int = GALOIS_CLOSURE_CAP) -> list[IntMatrix]:
        n = self.generators[0].rows if self.generators else 0
        seen = {IntMatrix.identity(n).data: IntMatrix.identity(n)}
        frontier = list(seen.values())
        while frontier:
            nxt = []
            for g in frontier:
                for h in self.generators:
                    prod = h @ g
                    if prod.data not in seen:
                        seen[prod.data] = prod
                        nxt.append(prod)
                        if len(seen) > cap:
                            raise CapExceeded(f"group closure exceeded cap {cap}")
            frontier = nxt
        return list(seen.values())


def trivial_action(rank: int) -> GaloisAction:
    return GaloisAction(())


def validate_action(datum: BasedRootDatum, action: GaloisAction) -> list[str]:
    out: list[str] = []
    n = datum.rank
    for k, g in enumerate(action.generators):
        if g.rows != n or g.cols != n:
            out.append(f"generator {k} is {g.rows}x{g.cols}, expected {n}x{n}")
            continue
        if g.det() not in (1, -1):
            out.append(f"generator {k} is not invertible over Z (det {g.det()})")
            continue
        perm = _coroot_permutation(datum, g)
        if perm is None:
            out.append(f"generator {k} does not permute the simple coroots")
            continue
        for i, root in enumerate(datum.roots):
            if g.transpose().apply(datum.roots[perm[i]]) != tuple(root):
                out.append(
                    f"generator {k}: contragredient does not send root {i} to root {perm[i]}"
                )
                break
    if not out:
        try:
            action.closed_group()
        except CapExceeded as exc:
            out.append(str(exc))
    return out


def _coroot_permutation(datum: BasedRootDatum, g: IntMatrix) -> list[int] | None:
    index = {tuple(c): i for i, c in enumerate(datum.coroots)}
    perm = []
    for c in datum.coroots:
        img = g.apply(c)
        if img not in index:
            return None
        perm.append(index[img])
    if len(set(perm)) != len(perm):
        return None
    return perm


@dataclass(frozen=True)
class DerivedLattices:
    """Sublattices and quotients attached to a datum."""

    sc_inclusion: IntMatrix  # n x l, columns span the coroot lattice
    ad_map: IntMatrix  # l x n: x -> (<root_i, x>)_i in the coweight basis
    pi1: Presentation  # Z^n modulo the coroot lattice
    pi1_torsion: FgAbGroup
    pi1_torsion_inclusion: IntMatrix  # pi1 coords of each torsion generator


def derive(datum: BasedRootDatum) -> DerivedLattices:
    require_valid(datum)
    sc = datum.coroot_matrix()
    ad = datum.root_matrix()
    assert (ad @ sc).data == datum.cartan_matrix().data
    pi1 = cokernel(sc)
    tor = FgAbGroup(pi1.group.invariant_factors, 0)
    cols = []
    for i in range(tor.dim):
        e = [0] * pi1.group.dim
        e[i] = 1
        cols.append(e)
    incl = IntMatrix.from_columns(cols, rows=pi1.group.dim)
    return DerivedLattices(sc, ad, pi1, tor, incl)


def weyl_group(datum: BasedRootDatum, cap: int = 100_000) -> list[IntMatrix]:
    """Every element of the group generated by the simple reflections."""
    require_valid(datum)
    gens = [datum.reflection(i) for i in range(datum.semisimple_rank)]
    ident = IntMatrix.identity(datum.rank)
    seen = {ident.data: ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                prod = s @ w
                if prod.data not in seen:
                    seen[prod.data] = prod
                    nxt.append(prod)
                    if len(seen) > cap:
                        raise CapExceeded(f"Weyl group exceeded cap {cap}")
        frontier = nxt
    return list(seen.values())


def coinvariants(pres: Presentation, action: GaloisAction) -> Presentation:
    """Quotient of a presented group by the span of {g.x - x}.

    The action matrices act on the ambient lattice of the presentation and
    must preserve its relation lattice.
    """
    n = pres.ambient_dim
    blocks = pres.relation_lattice()
    for g in action.generators:
        if g.rows != n or g.cols != n:
            raise ValueError(f"action matrix is {g.rows}x{g.cols}, ambient is {n}")
        blocks = blocks.hstack(g - IntMatrix.identity(n))
    out = cokernel(blocks)
    _require_action_preserves(pres, action)
    return out


def _require_action_preserves(pres: Presentation, action: GaloisAction) -> None:
    # each g must send the relation lattice into itself, otherwise the
    # action does not descend to the presented group
    rel = pres.relation_lattice()
    for g in action.generators:
        for j in range(rel.cols):
            if any(pres.project(g.apply(rel.column(j)))):
                raise ValueError("action does not preserve the relation lattice")


def induced_on_coinvariants(
    source: Presentation,
    target: Presentation,
    matrix: IntMatrix,
) -> IntMatrix:
    """Matrix of the map induced on quotients by an ambient lattice map."""
    cols = []
    for g in source.group.generators():
        v = source.lift(g)
        cols.append(target.project(matrix.apply(v)))
    return IntMatrix.from_columns(cols, rows=target.group.dim)


# --- catalog -------------------------------------------------------------

_FAMILIES = ("SL", "GL", "PGL", "Sp", "SO_odd", "Torus", "Product")


def _type_a_cartan(l: int) -> list[list[int]]:
    return [
        [2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(l)]
        for i in range(l)
    ]


def catalog(name: str, **params) -> tuple[BasedRootDatum, GaloisAction | None]:
    """Standard data by family name.

    SL/GL/PGL/Sp/SO_odd take ``size`` (the subscript: SL_size, Sp_size, ...);
    Torus takes ``rank`` and optional ``galois_generators``; Product takes
    ``components`` (a list of catalog parameter dicts, each with "name").
    """
    if name not in _FAMILIES:
        raise UnknownName(f"unknown catalog family {name!r}; choose from {_FAMILIES}")
    if name == "Torus":
        rank = params.get("rank")
        if not isinstance(rank, int) or rank < 0:
            raise BadParams(f"Torus needs a nonnegative integer rank, got {rank!r}")
        datum = BasedRootDatum(rank, (), (), name=f"Torus_{rank}")
        action = _action_from_params(datum, params)
        return datum, action
    if name == "Product":
        comps = params.get("components")
        if not comps:
            raise BadParams("Product needs a nonempty list of components")
        data = []
        for c in comps:
            c = dict(c)
            cname = c.pop("name", None)
            if cname is None:
                raise BadParams("each Product component needs a name")
            sub, sub_action = catalog(cname, **c)
            data.append((sub, sub_action))
        datum = _product_datum([d for d, _ in data])
        blocks = _product_action([d for d, _ in data], [a for _, a in data])
        action = _action_from_params(datum, params, extra=blocks)
        return datum, action

    size = params.get("size")
    if not isinstance(size, int):
        raise BadParams(f"{name} needs an integer size, got {size!r}")
    if name == "SL":
        if size < 2:
            raise BadParams(f"SL_{size} is degenerate; need size >= 2")
        l = size - 1
        cm = _type_a_cartan(l)
        datum = BasedRootDatum(
            l,
            tuple(tuple(1 if i == j else 0 for j in range(l)) for i in range(l)),
            tuple(tuple(cm[i]) for i in range(l)),
            name=f"SL_{size}",
        )
    elif name == "GL":
        if size < 1:
            raise BadParams(f"GL_{size} is degenerate; need size >= 1")
        n = size
        coroots = tuple(
            tuple(1 if j == i else (-1 if j == i + 1 else 0) for j in range(n))
            for i in range(n - 1)
        )
        datum = BasedRootDatum(n, coroots, coroots, name=f"GL_{size}")
    elif name == "PGL":
        if size < 2:
            raise BadParams(f"PGL_{size} is degenerate; need size >= 2")
        l = size - 1
        cm = _type_a_cartan(l)
        datum = BasedRootDatum(
            l,
            tuple(tuple(cm[j][i] for j in range(l)) for i in range(l)),  # Cartan columns
            tuple(tuple(1 if i == j else 0 for j in range(l)) for i in range(l)),
            name=f"PGL_{size}",
        )
    elif name == "Sp":
        if size < 2 or size % 2:
            raise BadParams(f"Sp_{size} needs an even size >= 2")
        r = size // 2
        coroots = [
            tuple(1 if j == i else (-1 if j == i + 1 else 0) for j in range(r))
            for i in range(r - 1)
        ]
        coroots.append(tuple(1 if j == r - 1 else 0 for j in range(r)))
        roots = [
            tuple(1 if j == i else (-1 if j == i + 1 else 0) for j in range(r))
            for i in range(r - 1)
        ]
        roots.append(tuple(2 if j == r - 1 else 0 for j in range(r)))
        datum = BasedRootDatum(r, tuple(coroots), tuple(roots), name=f"Sp_{size}")
    else:  # SO_odd
        if size < 3 or size % 2 == 0:
            raise BadParams(f"SO_odd needs an odd size >= 3, got {size}")
        r = (size - 1) // 2
        coroots = [
            tuple(1 if j == i else (-1 if j == i + 1 else 0) for j in range(r))
            for i in range(r - 1)
        ]
        coroots.append(tuple(2 if j == r - 1 else 0 for j in range(r)))
        roots = [
            tuple(1 if j == i else (-1 if j == i + 1 else 0) for j in range(r))
            for i in range(r - 1)
        ]
        roots.append(tuple(1 if j == r - 1 else 0 for j in range(r)))
        datum = BasedRootDatum(r, tuple(coroots), tuple(roots), name=f"SO_{size}")
    problems = validate(datum)
    assert not problems, f"catalog produced an invalid datum: {problems}"
    action = _action_from_params(datum, params)
    return datum, action


def _action_from_params(
    datum: BasedRootDatum,
    params: dict,
    extra: list[IntMatrix] | None = None,
) -> GaloisAction | None:
    gens = list(extra or [])
    for g in params.get("galois_generators") or []:
        gens.append(IntMatrix.from_rows(g, cols=datum.rank))
    if not gens:
        return None
    action = GaloisAction(tuple(gens))
    problems = validate_action(datum, action)
    if problems:
        raise BadParams("bad galois_generators: " + "; ".join(problems))
    return action


def _product_datum(data: list[BasedRootDatum]) -> BasedRootDatum:
    rank = sum(d.rank for d in data)
    coroots = []
    roots = []
    offset = 0
    for d in data:
        for c in d.coroots:
            coroots.append((0,) * offset + tuple(c) + (0,) * (rank - offset - d.rank))
        for r in d.roots:
            roots.append((0,) * offset + tuple(r) + (0,) * (rank - offset - d.rank))
        offset += d.rank
    name = " x ".join(d.name or "?" for d in data)
    return BasedRootDatum(rank, tuple(coroots), tuple(roots), name=name)


def _product_action(
    data: list[BasedRootDatum], actions: list[GaloisAction | None]
) -> list[IntMatrix]:
    """Block-diagonal extensions of the component actions."""
    rank = sum(d.rank for d in data)
    out = []
    offset = 0
    for d, a in zip(data, actions):
        if a is not None:
            for g in a.generators:
                rows = []
                for i in range(rank):
                    if offset <= i < offset + d.rank:
                        row = [0] * offset + list(g.row(i - offset)) + [0] * (rank - offset - d.rank)
                    else:
                        row = [1 if j == i else 0 for j in range(rank)]
                    rows.append(row)
                out.append(IntMatrix.from_rows(rows))
        offset += d.rank
    return out


def action_permutes_blocks(datum_ranks: list[int], action: GaloisAction) -> bool:
    """True when some generator mixes distinct factors of a product."""
    offsets = []
    pos = 0
    for r in datum_ranks:
        offsets.append((pos, pos + r))
        pos += r
    for g in action.generators:
        for (a0, a1) in offsets:
            for i in range(a0, a1):
                row = g.row(i)
                if any(row[j] for j in range(len(row)) if not (a0 <= j < a1)):
                    return True
    return False
