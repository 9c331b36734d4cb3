"""Problem-document schema (pydantic) and conversion to core objects.

A problem document carries a root datum (inline or as a catalog reference),
an optional Galois action, a quadratic form, and optional obstruction /
genuine-character blocks.  ``normalize_document`` expands catalog references
so reports echo a self-contained document.
"""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field, model_validator

from .errors import BadDocument
from .intlinalg import IntMatrix
from .quadform import MetaplecticForm, form_from_offdiag
from .rootdatum import (
    BasedRootDatum,
    GaloisAction,
    catalog,
    validate,
    validate_action,
)


class RootDatumDoc(BaseModel):
    rank: int
    simple_coroots: list[list[int]] = Field(default_factory=list)
    simple_roots: list[list[int]] = Field(default_factory=list)
    galois_generators: list[list[list[int]]] = Field(default_factory=list)
    name: str = ""


class CatalogRef(BaseModel):
    name: str
    size: Optional[int] = None
    rank: Optional[int] = None
    galois_generators: Optional[list[list[list[int]]]] = None
    components: Optional[list[dict]] = None

    def params(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        if self.size is not None:
            out["size"] = self.size
        if self.rank is not None:
            out["rank"] = self.rank
        if self.galois_generators is not None:
            out["galois_generators"] = self.galois_generators
        if self.components is not None:
            out["components"] = self.components
        return out


class FormDoc(BaseModel):
    N: int
    q_basis: list[int]
    b_offdiag: list[int] = Field(default_factory=list)
    # Galois equivariance of the form is only meaningful (and only checked)
    # when the cyclotomic action on Z/N is declared trivial, e.g. mu_N in F.
    cyclotomic_twist_trivial: bool = True


class ObstructionBlock(BaseModel):
    chi: list[int]


class GenuineBlock(BaseModel):
    field: str
    torsion: list[int]
    eps: list[int]
    f_table: Optional[list[int]] = None
    f_kummer: Optional[list[str]] = None

    @model_validator(mode="after")
    def _one_f_source(self):
        if (self.f_table is None) == (self.f_kummer is None):
            raise ValueError("provide exactly one of f_table, f_kummer")
        return self


class ProblemDocument(BaseModel):
    root_datum: Optional[RootDatumDoc] = None
    catalog: Optional[CatalogRef] = None
    galois_generators: Optional[list[list[list[int]]]] = None
    form: FormDoc
    obstruction: Optional[ObstructionBlock] = None
    genuine_character: Optional[GenuineBlock] = None

    @model_validator(mode="after")
    def _one_datum_source(self):
        if (self.root_datum is None) == (self.catalog is None):
            raise ValueError("provide exactly one of root_datum, catalog")
        return self


class NormalizedProblem(BaseModel):
    """A document with the catalog expanded and the action merged."""

    datum: BasedRootDatum
    action: Optional[GaloisAction]
    form: MetaplecticForm
    document: dict  # self-contained echo, feeds back into analyze unchanged
    product_ranks: Optional[list[int]] = None  # component ranks for Product data
    twist_declared_trivial: bool = True

    model_config = {"arbitrary_types_allowed": True}


def normalize_document(doc: ProblemDocument) -> NormalizedProblem:
    action_gens: list[IntMatrix] = []
    product_ranks: Optional[list[int]] = None
    if doc.root_datum is not None:
        rd = doc.root_datum
        datum = BasedRootDatum(
            rank=rd.rank,
            coroots=tuple(tuple(c) for c in rd.simple_coroots),
            roots=tuple(tuple(r) for r in rd.simple_roots),
            name=rd.name,
        )
        for g in rd.galois_generators:
            action_gens.append(IntMatrix.from_rows(g, cols=rd.rank))
    else:
        try:
            datum, cat_action = catalog(doc.catalog.name, **doc.catalog.params())
        except TypeError as exc:
            raise BadDocument(f"bad catalog parameters: {exc}") from None
        if cat_action is not None:
            action_gens.extend(cat_action.generators)
        if doc.catalog.name == "Product":
            product_ranks = []
            for comp in doc.catalog.components or []:
                comp = dict(comp)
                sub, _ = catalog(comp.pop("name"), **comp)
                product_ranks.append(sub.rank)
    for g in doc.galois_generators or []:
        action_gens.append(IntMatrix.from_rows(g, cols=datum.rank))

    problems = validate(datum)
    if problems:
        raise BadDocument("invalid root datum: " + "; ".join(problems))
    action = GaloisAction(tuple(action_gens)) if action_gens else None
    if action is not None:
        action_problems = validate_action(datum, action)
        if action_problems:
            raise BadDocument("invalid galois action: " + "; ".join(action_problems))

    n = datum.rank
    if len(doc.form.q_basis) != n:
        raise BadDocument(f"form has {len(doc.form.q_basis)} basis values, datum rank is {n}")
    try:
        form = form_from_offdiag(doc.form.N, doc.form.q_basis, doc.form.b_offdiag)
    except ValueError as exc:
        raise BadDocument(f"bad form block: {exc}") from None

    echo: dict[str, Any] = {
        "root_datum": {
            "rank": datum.rank,
            "simple_coroots": [list(c) for c in datum.coroots],
            "simple_roots": [list(r) for r in datum.roots],
            "galois_generators": [[list(row) for row in g.data] for g in action_gens],
            "name": datum.name,
        },
        "form": {
            "N": form.modulus,
            "q_basis": list(form.q_basis),
            "b_offdiag": [
                form.b_matrix.data[i][j] for i in range(n) for j in range(i + 1, n)
            ],
            "cyclotomic_twist_trivial": doc.form.cyclotomic_twist_trivial,
        },
    }
    if doc.obstruction is not None:
        echo["obstruction"] = {"chi": list(doc.obstruction.chi)}
    if doc.genuine_character is not None:
        echo["genuine_character"] = doc.genuine_character.model_dump(exclude_none=True)
    return NormalizedProblem(
        datum=datum,
        action=action,
        form=form,
        document=echo,
        product_ranks=product_ranks,
        twist_declared_trivial=doc.form.cyclotomic_twist_trivial,
    )


def document_from_payload(payload: dict) -> ProblemDocument:
    """Accept either a problem document or a previously emitted report."""
    if not isinstance(payload, dict):
        raise BadDocument("document must be a JSON object")
    if "input" in payload and "form" not in payload:
        payload = payload["input"]
    try:
        return ProblemDocument.model_validate(payload)
    except Exception as exc:
        raise BadDocument(f"document failed schema validation: {exc}") from None


def group_dict(group) -> dict:
    return {
        "invariant_factors": list(group.invariant_factors),
        "free_rank": group.free_rank,
        "pretty": str(group),
    }


def matrix_rows(m: IntMatrix) -> list[list[int]]:
    return [list(r) for r in m.data]
