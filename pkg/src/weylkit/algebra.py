"""Normal-ordered operator algebra over complex variables and their conjugates.

A variable and its conjugate are independent symbols with independent
derivative symbols (Wirtinger calculus).  Operators are finite sums of
normal-form terms: all multiplication symbols to the left of all derivative
symbols, with a single rewriting rule

    d[x] * x  ->  x * d[x] + 1

for each variable; distinct symbols commute.  Coefficients are exact
Gaussian rationals, so operator equality is decidable term-map equality.
"""

from __future__ import annotations

import itertools
import re as _re
from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb, factorial, perm

from .rational import GaussianRational

# Variable families used by the toolkit.  PAIR is the two-variable (u1, u2)
# system of the worked representation example; OSC is the u/v oscillator
# system with block, internal and set indices.
FAMILY_PAIR = "pair"
FAMILY_OSC = "osc"


@dataclass(frozen=True, order=True)
class VariableId:
    """Structured name of one complex variable.

    The field order doubles as the canonical total order used for normal
    forms.  Families that do not use an index fix it to 1.
    """

    family: str
    kind: str
    block: int
    index: int
    set_index: int
    conjugated: bool

    def __post_init__(self):
        if self.kind not in ("u", "v"):
            raise ValueError(f"kind must be 'u' or 'v', got {self.kind!r}")
        if self.block not in (1, 2):
            raise ValueError(f"block must be 1 or 2, got {self.block}")
        if self.index < 1 or self.set_index < 1:
            raise ValueError("indices must be >= 1")

    @property
    def base(self) -> "VariableId":
        """The unconjugated partner (self if already unconjugated)."""
        return replace(self, conjugated=False) if self.conjugated else self

    def token(self) -> str:
        bar = "~" if self.conjugated else ""
        if self.family == FAMILY_PAIR:
            return f"{self.kind}{self.index}{bar}"
        return f"{self.kind}{self.block}{self.index}m{self.set_index}{bar}"


def osc_var(kind: str, block: int, index: int, set_index: int = 1,
            conjugated: bool = False) -> VariableId:
    return VariableId(FAMILY_OSC, kind, block, index, set_index, conjugated)


def pair_var(index: int, conjugated: bool = False) -> VariableId:
    return VariableId(FAMILY_PAIR, "u", 1, index, 1, conjugated)


def conjugate_var(var: VariableId) -> VariableId:
    return replace(var, conjugated=not var.conjugated)


_OSC_TOKEN = _re.compile(r"([uv])([12])(\d+)m(\d+)(~?)$")
_PAIR_TOKEN = _re.compile(r"([uv])(\d+)(~?)$")


def parse_var(token: str) -> VariableId:
    match = _OSC_TOKEN.match(token)
    if match:
        kind, block, index, set_index, bar = match.groups()
        return osc_var(kind, int(block), int(index), int(set_index), bar == "~")
    match = _PAIR_TOKEN.match(token)
    if match:
        kind, index, bar = match.groups()
        if kind != "u":
            raise ValueError(f"unknown variable token {token!r}")
        return pair_var(int(index), bar == "~")
    raise ValueError(f"unknown variable token {token!r}")


Powers = tuple[tuple[VariableId, int], ...]


def _as_powers(mapping) -> Powers:
    items = sorted((v, e) for v, e in dict(mapping).items() if e)
    for _, e in items:
        if e < 0:
            raise ValueError("exponents must be positive")
    return tuple(items)


@dataclass(frozen=True, order=True)
class Monomial:
    """Multiplication part times derivative part, exponent maps kept sorted."""

    var_powers: Powers = ()
    deriv_powers: Powers = ()

    @classmethod
    def build(cls, var_powers=(), deriv_powers=()) -> "Monomial":
        return cls(_as_powers(var_powers), _as_powers(deriv_powers))

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.var_powers)

    @property
    def deriv_degree(self) -> int:
        return sum(e for _, e in self.deriv_powers)

    def tokens(self) -> list[str]:
        out = [f"{v.token()}^{e}" for v, e in self.var_powers]
        out += [f"d[{v.token()}]^{e}" for v, e in self.deriv_powers]
        return out

    def __str__(self) -> str:
        return " ".join(self.tokens()) if (self.var_powers or self.deriv_powers) else "1"


_MONO_ONE = Monomial()


class WeylOperator:
    """Finite Gaussian-rational combination of normal-form monomials.

    Instances are treated as immutable; all operations return new operators.
    A polynomial is an operator whose terms carry no derivative symbols.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean: dict[Monomial, GaussianRational] = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = GaussianRational.coerce(coeff)
                if coeff:
                    clean[mono] = coeff
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls) -> "WeylOperator":
        return cls()

    @classmethod
    def scalar(cls, value) -> "WeylOperator":
        return cls({_MONO_ONE: GaussianRational.coerce(value)})

    @classmethod
    def one(cls) -> "WeylOperator":
        return cls.scalar(1)

    @classmethod
    def variable(cls, var: VariableId) -> "WeylOperator":
        return cls({Monomial.build({var: 1}): GaussianRational(1)})

    @classmethod
    def derivative(cls, var: VariableId) -> "WeylOperator":
        return cls({Monomial.build({}, {var: 1}): GaussianRational(1)})

    # -- structure -------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylOperator):
            return NotImplemented
        return self.terms == other.terms

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def is_polynomial(self) -> bool:
        return all(not m.deriv_powers for m in self.terms)

    @property
    def is_first_order(self) -> bool:
        return all(m.deriv_degree == 1 for m in self.terms)

    def variables(self) -> set[VariableId]:
        out: set[VariableId] = set()
        for mono in self.terms:
            out.update(v for v, _ in mono.var_powers)
            out.update(v for v, _ in mono.deriv_powers)
        return out

    def canonical_key(self):
        """Hashable canonical form (for dedup sets and dict keys)."""
        return tuple(
            (mono, coeff.re, coeff.im)
            for mono, coeff in sorted(self.terms.items())
        )

    def coefficient(self, mono: Monomial) -> GaussianRational:
        return self.terms.get(mono, GaussianRational())

    # -- linear operations ------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, WeylOperator):
            return NotImplemented
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            _accumulate(out, mono, coeff)
        return WeylOperator(out)

    def __sub__(self, other):
        if not isinstance(other, WeylOperator):
            return NotImplemented
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            _accumulate(out, mono, -coeff)
        return WeylOperator(out)

    def __neg__(self):
        return WeylOperator({m: -c for m, c in self.terms.items()})

    def scaled(self, value) -> "WeylOperator":
        value = GaussianRational.coerce(value)
        if not value:
            return WeylOperator()
        return WeylOperator({m: c * value for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, WeylOperator):
            return multiply(self, other)
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scaled(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scaled(other)
        return NotImplemented

    # -- algebra -----------------------------------------------------------

    def apply(self, poly: "WeylOperator") -> "WeylOperator":
        return apply_operator(self, poly)

    def hermitian_counterpart(self) -> "WeylOperator":
        """Swap conjugation flags on every symbol and conjugate coefficients."""
        out: dict[Monomial, GaussianRational] = {}
        for mono, coeff in self.terms.items():
            flipped = Monomial.build(
                {conjugate_var(v): e for v, e in mono.var_powers},
                {conjugate_var(v): e for v, e in mono.deriv_powers},
            )
            _accumulate(out, flipped, coeff.conjugate())
        return WeylOperator(out)

    def evaluate(self, point: dict[VariableId, complex]) -> complex:
        """Evaluate a polynomial at an assignment of the unconjugated variables.

        Conjugated variables take the complex conjugate of their partner's
        value.  Raises if a variable is unassigned or a derivative is present.
        """
        if not self.is_polynomial:
            raise ValueError("evaluate expects a polynomial (no derivative symbols)")
        total = 0j
        for mono, coeff in self.terms.items():
            value = complex(coeff)
            for var, exp in mono.var_powers:
                base = var.base
                if base not in point:
                    raise ValueError(f"unassigned variable {var.token()}")
                x = complex(point[base])
                if var.conjugated:
                    x = x.conjugate()
                value *= x ** exp
            total += value
        return total

    # -- serialization ------------------------------------------------------

    def to_text(self) -> str:
        """One term per line: coefficient then monomial tokens, sorted."""
        if not self.terms:
            return "0"
        lines = []
        for mono in sorted(self.terms):
            lines.append(" ".join([self.terms[mono].to_text()] + mono.tokens()))
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str) -> "WeylOperator":
        out: dict[Monomial, GaussianRational] = {}
        for line in text.strip().splitlines():
            line = line.strip()
            if not line or line == "0":
                continue
            fields = line.split()
            coeff = GaussianRational.from_text(fields[0])
            var_powers: dict[VariableId, int] = {}
            deriv_powers: dict[VariableId, int] = {}
            for field in fields[1:]:
                name, _, exp = field.partition("^")
                power = int(exp) if exp else 1
                if name.startswith("d[") and name.endswith("]"):
                    var = parse_var(name[2:-1])
                    deriv_powers[var] = deriv_powers.get(var, 0) + power
                else:
                    var = parse_var(name)
                    var_powers[var] = var_powers.get(var, 0) + power
            _accumulate(out, Monomial.build(var_powers, deriv_powers), coeff)
        return cls(out)

    def __str__(self) -> str:
        return self.to_text().replace("\n", "  +  ") if self.terms else "0"

    __repr__ = __str__


def _accumulate(store: dict, mono: Monomial, coeff: GaussianRational) -> None:
    prev = store.get(mono)
    total = coeff if prev is None else prev + coeff
    if total:
        store[mono] = total
    elif prev is not None:
        del store[mono]


def _merge_powers(left: Powers, extra: dict[VariableId, int]) -> dict[VariableId, int]:
    out = dict(left)
    for var, exp in extra.items():
        if exp:
            out[var] = out.get(var, 0) + exp
    return out


def _monomial_products(left: Monomial, right: Monomial):
    """Expand (vars_a d_a) * (vars_b d_b) into normal-form (monomial, int) pairs.

    Only derivatives of ``left`` meeting matching variables of ``right`` need
    rewriting; for each such variable,
    d^b x^c = sum_j C(b,j) C(c,j) j!  x^(c-j) d^(b-j).
    """
    derivs_a = dict(left.deriv_powers)
    vars_b = dict(right.var_powers)
    shared = [v for v in derivs_a if v in vars_b]
    if not shared:
        mono = Monomial.build(
            _merge_powers(left.var_powers, vars_b),
            _merge_powers(right.deriv_powers, derivs_a),
        )
        yield mono, 1
        return
    ranges = [range(min(derivs_a[v], vars_b[v]) + 1) for v in shared]
    for picks in itertools.product(*ranges):
        factor = 1
        var_delta = dict(vars_b)
        deriv_delta = dict(derivs_a)
        for var, j in zip(shared, picks):
            if j:
                factor *= comb(deriv_delta[var], j) * comb(var_delta[var], j) * factorial(j)
                var_delta[var] -= j
                deriv_delta[var] -= j
        mono = Monomial.build(
            _merge_powers(left.var_powers, var_delta),
            _merge_powers(right.deriv_powers, deriv_delta),
        )
        yield mono, factor


def multiply(left: WeylOperator, right: WeylOperator) -> WeylOperator:
    """Associative normal-ordered product."""
    out: dict[Monomial, GaussianRational] = {}
    for mono_a, coeff_a in left.terms.items():
        for mono_b, coeff_b in right.terms.items():
            coeff = coeff_a * coeff_b
            for mono, factor in _monomial_products(mono_a, mono_b):
                _accumulate(out, mono, coeff * factor)
    return WeylOperator(out)


def commutator(left: WeylOperator, right: WeylOperator) -> WeylOperator:
    return multiply(left, right) - multiply(right, left)


def apply_operator(op: WeylOperator, poly: WeylOperator) -> WeylOperator:
    """Act with ``op`` on a polynomial; linear in both arguments."""
    if not poly.is_polynomial:
        raise ValueError("apply expects a polynomial argument")
    out: dict[Monomial, GaussianRational] = {}
    for mono_op, coeff_op in op.terms.items():
        for mono_p, coeff_p in poly.terms.items():
            powers = dict(mono_p.var_powers)
            factor = 1
            for var, order in mono_op.deriv_powers:
                have = powers.get(var, 0)
                if have < order:
                    factor = 0
                    break
                factor *= perm(have, order)
                powers[var] = have - order
            if not factor:
                continue
            mono = Monomial.build(_merge_powers(mono_op.var_powers, powers))
            _accumulate(out, mono, coeff_op * coeff_p * factor)
    return WeylOperator(out)


def hermitian_completion(op: WeylOperator) -> WeylOperator:
    """``op`` plus its conjugate-variable counterpart."""
    return op + op.hermitian_counterpart()
