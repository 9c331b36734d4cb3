"""Exact local-field arithmetic over Q_p and F_q((t)).

Elements are global objects (rationals, Laurent polynomials over F_q), so
valuations and residues are exact and every symbol below is computed with
no precision budget.  Provides quadratic Hilbert symbols, tame norm-residue
symbols of degree m (p not dividing m), root-of-unity counting, the sign
double cover with its square-compatible section, and the genuine-character
obstruction evaluator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Mapping, Sequence

from .errors import (
    DegreeNotSupported,
    UnsupportedField,
    UnsupportedWildCase,
)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_power(q: int) -> tuple[int, int] | None:
    for p in range(2, q + 1):
        if not _is_prime(p):
            continue
        e = 0
        m = q
        while m % p == 0:
            m //= p
            e += 1
        if m == 1 and e >= 1:
            return p, e
    return None


# --- residue fields -------------------------------------------------------


@dataclass(frozen=True)
class ResidueField:
    """F_q with q = p^degree; elements are encoded as ints in [0, q).

    The encoding is base-p: the integer sum(c_i p^i) stands for the
    polynomial sum(c_i x^i) modulo the defining polynomial.
    """

    p: int
    degree: int = 1
    modulus: tuple[int, ...] | None = None  # monic, little-endian, length degree+1

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise UnsupportedField(f"residue characteristic {self.p} is not prime")
        if self.degree < 1:
            raise UnsupportedField("residue degree must be >= 1")
        if self.degree == 1:
            if self.modulus is not None:
                raise UnsupportedField("prime residue fields take no modulus")
            return
        if self.modulus is None:
            raise UnsupportedField(
                f"residue field of size {self.p}^{self.degree} needs an explicit modulus"
            )
        mod = self.modulus
        if len(mod) != self.degree + 1 or mod[-1] % self.p != 1:
            raise UnsupportedField("modulus must be monic of degree equal to the field degree")
        if any(not 0 <= c < self.p for c in mod[:-1]):
            raise UnsupportedField("modulus coefficients must be reduced mod p")
        if not _poly_irreducible(mod, self.p):
            raise UnsupportedField("modulus polynomial is reducible")

    @property
    def q(self) -> int:
        return self.p ** self.degree

    def _decode(self, a: int) -> list[int]:
        out = []
        for _ in range(self.degree):
            out.append(a % self.p)
            a //= self.p
        return out

    def _encode(self, coeffs: Sequence[int]) -> int:
        a = 0
        for c in reversed(list(coeffs[: self.degree])):
            a = a * self.p + (c % self.p)
        return a

    def add(self, a: int, b: int) -> int:
        if self.degree == 1:
            return (a + b) % self.p
        ca, cb = self._decode(a), self._decode(b)
        return self._encode([x + y for x, y in zip(ca, cb)])

    def neg(self, a: int) -> int:
        if self.degree == 1:
            return (-a) % self.p
        return self._encode([-x for x in self._decode(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.degree == 1:
            return (a * b) % self.p
        prod = _poly_mul(self._decode(a), self._decode(b), self.p)
        prod = _poly_rem(prod, list(self.modulus), self.p)
        return self._encode(prod + [0] * self.degree)

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero in the residue field")
        if self.degree == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out = 1
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    @cached_property
    def primitive_root(self) -> int:
        """Smallest encoding generating the unit group (fixed, reported)."""
        order = self.q - 1
        factors = _prime_factors(order)
        for g in range(2, self.q):
            if all(self.pow(g, order // f) != 1 for f in factors):
                return g
        raise AssertionError("no primitive root found (impossible for a field)")

    @cached_property
    def _dlog_table(self) -> dict[int, int]:
        table = {}
        g = self.primitive_root
        x = 1
        for k in range(self.q - 1):
            table[x] = k
            x = self.mul(x, g)
        return table

    def dlog(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("discrete log of zero")
        return self._dlog_table[a % self.q]

    def eta(self, a: int) -> int:
        """Quadratic character: +1 on nonzero squares, -1 otherwise (q odd)."""
        if self.q % 2 == 0:
            raise UnsupportedField("quadratic character needs odd q")
        return 1 if self.pow(a, (self.q - 1) // 2) == 1 else -1


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _poly_rem(a: list[int], mod: list[int], p: int) -> list[int]:
    a = a[:]
    d = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    while len(a) > d:
        c = (a[-1] * inv_lead) % p
        if c:
            for i in range(d + 1):
                a[len(a) - 1 - d + i] = (a[len(a) - 1 - d + i] - c * mod[i]) % p
        a.pop()
    return a


def _poly_irreducible(mod: Sequence[int], p: int) -> bool:
    deg = len(mod) - 1
    if deg == 1:
        return True
    mod = list(mod)
    for d in range(1, deg // 2 + 1):
        for code in range(p ** d):
            trial = []
            c = code
            for _ in range(d):
                trial.append(c % p)
                c //= p
            trial.append(1)  # monic
            if _poly_divides(trial, mod, p):
                return False
    return True


def _poly_divides(div: list[int], a: list[int], p: int) -> bool:
    rem = _poly_rem(a[:], div, p)
    return all(c % p == 0 for c in rem)


# --- local fields ---------------------------------------------------------


@dataclass(frozen=True)
class LocalField:
    """Q_p (kind 'p-adic') or F_q((t)) (kind 'laurent')."""

    kind: str
    residue: ResidueField

    def __post_init__(self) -> None:
        if self.kind not in ("p-adic", "laurent"):
            raise UnsupportedField(f"unknown field kind {self.kind!r}")
        if self.kind == "p-adic" and self.residue.degree != 1:
            raise UnsupportedField("p-adic fields here are Q_p only (prime residue field)")

    @property
    def descriptor(self) -> str:
        if self.kind == "p-adic":
            return f"Qp:{self.residue.p}"
        if self.residue.degree == 1:
            return f"Fq((t)):{self.residue.p}"
        return f"Fq((t)):{self.residue.q}:{_format_poly(self.residue.modulus)}"

    def supports_hilbert2(self) -> bool:
        if self.kind == "laurent":
            return self.residue.q % 2 == 1
        return True  # Q_p for every p, including p = 2


_POLY_TERM = re.compile(r"^(\d+)?\*?(?:x(?:\^(\d+))?)?$")


def _parse_poly(text: str) -> tuple[int, ...]:
    """Parse 'x^2+x+2' into little-endian coefficients (2, 1, 1)."""
    s = text.replace(" ", "").replace("-", "+-")
    terms = [t for t in s.split("+") if t]
    coeffs: dict[int, int] = {}
    for term in terms:
        sign = 1
        if term.startswith("-"):
            sign = -1
            term = term[1:]
        m = _POLY_TERM.match(term)
        if not m or (m.group(1) is None and "x" not in term):
            raise UnsupportedField(f"cannot parse polynomial term {term!r} in {text!r}")
        coeff = int(m.group(1)) if m.group(1) is not None else 1
        if "x" in term:
            exp = int(m.group(2)) if m.group(2) is not None else 1
        else:
            exp = 0
        coeffs[exp] = coeffs.get(exp, 0) + sign * coeff
    deg = max(coeffs)
    return tuple(coeffs.get(i, 0) for i in range(deg + 1))


def _format_poly(coeffs: Sequence[int]) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append("x" if c == 1 else f"{c}x")
        else:
            terms.append(f"x^{i}" if c == 1 else f"{c}x^{i}")
    return "+".join(terms) if terms else "0"


def parse_field(descriptor: str) -> LocalField:
    """Parse 'Qp:5', 'Fq((t)):5' or 'Fq((t)):9:x^2+x+2'."""
    parts = descriptor.split(":")
    if parts[0] == "Qp" and len(parts) == 2:
        p = _parse_int(parts[1], descriptor)
        return LocalField("p-adic", ResidueField(p))
    if parts[0] == "Fq((t))" and len(parts) in (2, 3):
        q = _parse_int(parts[1], descriptor)
        pe = _prime_power(q)
        if pe is None:
            raise UnsupportedField(f"{q} is not a prime power in {descriptor!r}")
        p, e = pe
        if e == 1:
            if len(parts) == 3:
                raise UnsupportedField("prime residue fields take no modulus")
            return LocalField("laurent", ResidueField(p))
        if len(parts) != 3:
            raise UnsupportedField(
                f"residue field of size {q} needs an explicit modulus, e.g. {descriptor}:x^2+x+2"
            )
        mod = tuple(c % p for c in _parse_poly(parts[2]))
        return LocalField("laurent", ResidueField(p, e, mod))
    raise UnsupportedField(f"cannot parse field descriptor {descriptor!r}")


def _parse_int(s: str, ctx: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise UnsupportedField(f"bad integer {s!r} in field descriptor {ctx!r}") from None


# --- field elements -------------------------------------------------------


@dataclass(frozen=True)
class FieldElement:
    """Nonzero element: a rational (p-adic) or Laurent polynomial (laurent)."""

    field: LocalField
    rational: Fraction | None = None
    laurent: tuple[tuple[int, int], ...] | None = None  # sorted (degree, coeff != 0)

    def __post_init__(self) -> None:
        if self.field.kind == "p-adic":
            if self.rational is None or self.laurent is not None:
                raise ValueError("p-adic elements are rationals")
            if self.rational == 0:
                raise ValueError("elements must be nonzero")
        else:
            if self.laurent is None or self.rational is not None:
                raise ValueError("laurent elements are Laurent polynomials")
            if not self.laurent:
                raise ValueError("elements must be nonzero")
            for _, c in self.laurent:
                if c % self.field.residue.q == 0:
                    raise ValueError("laurent coefficients must be nonzero")

    def valuation(self) -> int:
        if self.field.kind == "p-adic":
            return _rational_valuation(self.rational, self.field.residue.p)
        return self.laurent[0][0]

    def unit_residue(self) -> int:
        """Residue-field encoding of the unit part."""
        if self.field.kind == "p-adic":
            p = self.field.residue.p
            num, den = self.rational.numerator, self.rational.denominator
            num //= p ** _int_valuation(num, p)
            den //= p ** _int_valuation(den, p)
            return (num * pow(den, -1, p)) % p
        return self.laurent[0][1]

    def mul(self, other: "FieldElement") -> "FieldElement":
        if self.field != other.field:
            raise ValueError("elements of different fields")
        if self.field.kind == "p-adic":
            return FieldElement(self.field, rational=self.rational * other.rational)
        rf = self.field.residue
        acc: dict[int, int] = {}
        for d1, c1 in self.laurent:
            for d2, c2 in other.laurent:
                d = d1 + d2
                acc[d] = rf.add(acc.get(d, 0), rf.mul(c1, c2))
        return laurent_element(self.field, acc)

    def square(self) -> "FieldElement":
        return self.mul(self)

    def format(self) -> str:
        if self.field.kind == "p-adic":
            return str(self.rational)
        return ",".join(f"{d}:{c}" for d, c in self.laurent)


def _int_valuation(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _rational_valuation(x: Fraction, p: int) -> int:
    return _int_valuation(x.numerator, p) - _int_valuation(x.denominator, p)


def padic_element(field: LocalField, value: Fraction | int | str) -> FieldElement:
    return FieldElement(field, rational=Fraction(value))


def laurent_element(field: LocalField, coeffs: Mapping[int, int]) -> FieldElement:
    q = field.residue.q
    clean = {}
    for d, c in coeffs.items():
        if field.residue.degree == 1:
            c = c % field.residue.p
        elif not 0 <= c < q:
            raise ValueError(f"coefficient encoding {c} out of range for F_{q}")
        if c:
            clean[int(d)] = c
    if not clean:
        raise ValueError("elements must be nonzero")
    return FieldElement(field, laurent=tuple(sorted(clean.items())))


def parse_element(field: LocalField, text: str) -> FieldElement:
    """Rationals as 'num/den' or 'num'; Laurent polynomials as 'deg:coeff,...'."""
    text = text.strip()
    if field.kind == "p-adic":
        try:
            return padic_element(field, Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rational {text!r}: {exc}") from None
    rf = field.residue
    coeffs: dict[int, int] = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" not in chunk:
            raise ValueError(f"laurent element chunk {chunk!r} is not 'deg:coeff'")
        d, c = chunk.split(":", 1)
        deg = int(d)
        val = int(c)
        if rf.degree == 1:
            val %= rf.p
        elif not 0 <= val < rf.q:
            raise ValueError(f"coefficient encoding {val} out of range for F_{rf.q}")
        coeffs[deg] = rf.add(coeffs.get(deg, 0), val)
    return laurent_element(field, coeffs)


def one_element(field: LocalField) -> FieldElement:
    if field.kind == "p-adic":
        return padic_element(field, 1)
    return laurent_element(field, {0: 1})


def minus_one_element(field: LocalField) -> FieldElement:
    if field.kind == "p-adic":
        return padic_element(field, -1)
    return laurent_element(field, {0: field.residue.neg(1)})


# --- symbols --------------------------------------------------------------


def hilbert2(field: LocalField, a: FieldElement, b: FieldElement) -> int:
    """Quadratic Hilbert symbol: +1 iff z^2 = a x^2 + b y^2 has a nonzero solution."""
    if not field.supports_hilbert2():
        raise UnsupportedField(
            f"{field.descriptor} has even residue field; no quadratic symbol is available"
        )
    if field.kind == "p-adic" and field.residue.p == 2:
        return _hilbert2_dyadic(a, b)
    rf = field.residue
    va, vb = a.valuation(), b.valuation()
    ea = rf.eta(a.unit_residue())
    eb = rf.eta(b.unit_residue())
    em = rf.eta(rf.neg(1))
    sign = 1
    if vb % 2:
        sign *= ea
    if va % 2:
        sign *= eb
    if (va * vb) % 2:
        sign *= em
    return sign


def _unit_mod_2k(x: Fraction, k: int) -> int:
    num, den = x.numerator, x.denominator
    num //= 2 ** _int_valuation(num, 2)
    den //= 2 ** _int_valuation(den, 2)
    return (num * pow(den, -1, 2 ** k)) % (2 ** k)


def _hilbert2_dyadic(a: FieldElement, b: FieldElement) -> int:
    # classical unit-part formula over Q_2 with
    # eps(u) = (u-1)/2 mod 2 and omega(u) = (u^2-1)/8 mod 2
    va = a.valuation()
    vb = b.valuation()
    ua = _unit_mod_2k(a.rational, 3)
    ub = _unit_mod_2k(b.rational, 3)
    eps_a = ((ua - 1) // 2) % 2
    eps_b = ((ub - 1) // 2) % 2
    omega_a = ((ua * ua - 1) // 8) % 2
    omega_b = ((ub * ub - 1) // 8) % 2
    exponent = (eps_a * eps_b + va * omega_b + vb * omega_a) % 2
    return -1 if exponent else 1


def tame_symbol(field: LocalField, m: int, a: FieldElement, b: FieldElement) -> int:
    """Degree-m norm-residue symbol as an element of Z/m.

    Computed as the discrete log (base the field's fixed primitive root) of
    the residue of (-1)^(v(a) v(b)) a^(v(b)) b^(-v(a)), reduced mod m.
    Needs p not dividing m and m dividing q - 1.
    """
    rf = field.residue
    if m < 1:
        raise DegreeNotSupported(f"degree {m} must be >= 1")
    if m % rf.p == 0:
        raise DegreeNotSupported(
            f"degree {m} is divisible by the residue characteristic {rf.p} (wild case)"
        )
    if (rf.q - 1) % m != 0:
        raise DegreeNotSupported(f"degree {m} does not divide q - 1 = {rf.q - 1}")
    va, vb = a.valuation(), b.valuation()
    x = rf.pow(rf.neg(1), va * vb)
    x = rf.mul(x, rf.pow(a.unit_residue(), vb))
    x = rf.mul(x, rf.pow(b.unit_residue(), -va))
    return rf.dlog(x) % m


def mu_count(field: LocalField, m: int) -> int:
    """Number of m-th roots of unity in the field."""
    if m < 1:
        raise UnsupportedWildCase(f"m must be >= 1, got {m}")
    rf = field.residue
    if m % rf.p != 0:
        return gcd(m, rf.q - 1)
    if field.kind == "p-adic" and rf.p == 2 and m == 2:
        return 2  # {1, -1}
    raise UnsupportedWildCase(
        f"mu_{m} over {field.descriptor} is wild (p = {rf.p} divides m)"
    )


def exact_root_of_unity(field: LocalField, m: int) -> FieldElement | None:
    """The marked generator of mu_m as an exact element, when representable.

    Laurent fields carry every mu_m with m | q-1 as constants; Q_p can only
    represent m <= 2 exactly.
    """
    rf = field.residue
    if m == 1:
        return one_element(field)
    if m % rf.p == 0 or (rf.q - 1) % m != 0:
        return None
    zeta_res = rf.pow(rf.primitive_root, (rf.q - 1) // m)
    if field.kind == "laurent":
        return laurent_element(field, {0: zeta_res})
    if m == 2:
        return minus_one_element(field)
    return None


# --- the sign double cover ------------------------------------------------


@dataclass(frozen=True)
class CoverElement:
    element: FieldElement
    sign: int

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError("sign must be +-1")


def cover_mul(field: LocalField, x: CoverElement, y: CoverElement) -> CoverElement:
    """(a, s)(b, t) = (ab, s t {a, b})."""
    s = x.sign * y.sign * hilbert2(field, x.element, y.element)
    return CoverElement(x.element.mul(y.element), s)


def cover_identity(field: LocalField) -> CoverElement:
    return CoverElement(one_element(field), 1)


def tau(field: LocalField, a: FieldElement) -> CoverElement:
    """The section over squaring: a -> (a^2, {a, a}); a group homomorphism."""
    return CoverElement(a.square(), hilbert2(field, a, a))


# --- genuine-character obstruction ----------------------------------------


@dataclass(frozen=True)
class GenuineCharacterReport:
    torsion_degrees: tuple[int, ...]
    mu_orders: tuple[int, ...]
    values: tuple[int, ...]  # obstruction character on each mu generator, in Z/N
    vanishes: bool
    minus_one_symbol: int | None  # {-1, -1} when the sign part was evaluated


def genuine_character_obstruction(
    field: LocalField,
    torsion_degrees: Sequence[int],
    eps_bits: Sequence[int],
    f_values: Sequence[int],
    modulus: int,
) -> GenuineCharacterReport:
    """Evaluate the obstruction character on the root-of-unity generators.

    Each torsion degree m contributes the cyclic group mu_m(F) with one
    marked generator theta.  The character value on theta is the sign part
    {-1,-1}^eps, embedded in Z/modulus as 0 or modulus/2, plus the given
    linear part f(theta).  A genuine character exists iff all values vanish.
    """
    if modulus < 1:
        raise ValueError("modulus must be >= 1")
    if not (len(torsion_degrees) == len(eps_bits) == len(f_values)):
        raise ValueError("torsion, eps and f tables must have equal length")
    for bit in eps_bits:
        if bit not in (0, 1):
            raise ValueError(f"eps entries are Z/2 bits, got {bit!r}")
    if modulus % 2 and any(eps_bits):
        raise ValueError(
            "a nonzero sign character needs 2-torsion in Z/modulus; modulus is odd"
        )
    orders = tuple(mu_count(field, m) for m in torsion_degrees)
    hsym = None
    hbit = 0
    if any(eps_bits):
        hsym = hilbert2(field, minus_one_element(field), minus_one_element(field))
        hbit = 1 if hsym == -1 else 0
    values = []
    for m, count, bit, f in zip(torsion_degrees, orders, eps_bits, f_values):
        sign_part = (modulus // 2) * bit * hbit if modulus % 2 == 0 else 0
        val = (sign_part + f) % modulus
        if (count * val) % modulus != 0:
            raise ValueError(
                f"value {val} on a generator of order {count} does not define a character mod {modulus}"
            )
        values.append(val)
    return GenuineCharacterReport(
        torsion_degrees=tuple(torsion_degrees),
        mu_orders=orders,
        values=tuple(values),
        vanishes=all(v == 0 for v in values),
        minus_one_symbol=hsym,
    )


def kummer_f_entry(field: LocalField, m: int, c: FieldElement) -> int:
    """Linear-part table entry from a Kummer class: the degree-m symbol of
    (c, zeta) where zeta is the marked generator of mu_m.

    zeta has valuation 0, so only its residue enters the tame formula.
    """
    rf = field.residue
    if m < 1:
        raise DegreeNotSupported(f"degree {m} must be >= 1")
    if m % rf.p == 0:
        raise DegreeNotSupported(f"degree {m} is wild over {field.descriptor}")
    if (rf.q - 1) % m != 0:
        raise DegreeNotSupported(f"mu_{m} is not full over {field.descriptor}")
    zeta = exact_root_of_unity(field, m)
    if zeta is not None:
        return tame_symbol(field, m, c, zeta)
    dlog_zeta = (rf.q - 1) // m
    return (-c.valuation() * dlog_zeta) % m
