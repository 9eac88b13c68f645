"""Invertible linear substitutions on the variable alphabet.

A map fixes an ordered tuple of unconjugated variables and the image of each
as a linear form; the image of a conjugated variable is the conjugate of its
partner's image (conjugation flags swapped, coefficients conjugated).
Variables outside the declared alphabet are left fixed.  Exact maps carry
Gaussian-rational coefficients; float maps carry complex ones.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .algebra import Monomial, VariableId, WeylOperator, conjugate_var, multiply
from .rational import GaussianRational

EXACT = "exact"
FLOAT = "float"


class SingularMapError(ValueError):
    pass


class LinearVariableMap:

    __slots__ = ("order", "images", "mode")

    def __init__(self, images, mode=EXACT, check=True):
        self.mode = mode
        self.images = {}
        for var, form in images.items():
            if var.conjugated:
                raise ValueError("map rows are keyed by unconjugated variables")
            row = {}
            for target, coeff in form.items():
                coeff = self._coerce(coeff)
                if self._nonzero(coeff):
                    row[target] = coeff
            self.images[var] = row
        self.order = tuple(sorted(self.images))
        if check:
            self._check_invertible()

    def _coerce(self, coeff):
        if self.mode == EXACT:
            return GaussianRational.coerce(coeff)
        return complex(coeff)

    def _nonzero(self, coeff) -> bool:
        return bool(coeff) if self.mode == EXACT else coeff != 0

    def _conj(self, coeff):
        return coeff.conjugate()

    # -- constructors ----------------------------------------------------

    @classmethod
    def identity(cls, variables, mode=EXACT) -> "LinearVariableMap":
        one = GaussianRational(1) if mode == EXACT else 1.0 + 0j
        return cls({v: {v: one} for v in variables}, mode=mode, check=False)

    @classmethod
    def from_rows(cls, variables, matrix, mode=EXACT) -> "LinearVariableMap":
        """Row convention: variables[r] maps to sum_c matrix[r][c] * variables[c]."""
        variables = tuple(variables)
        images = {}
        for r, var in enumerate(variables):
            images[var] = {variables[c]: matrix[r][c] for c in range(len(variables))}
        return cls(images, mode=mode)

    @classmethod
    def group_action(cls, variables, matrix, mode=FLOAT) -> "LinearVariableMap":
        """Substitution carrying a group element acting on the variable tuple.

        Uses transposed bookkeeping (variables[a] -> sum_b matrix[b][a] *
        variables[b]) so that representation matrices built from these maps
        compose covariantly: the map of a matrix product B@A equals the map
        of A followed by the map of B.
        """
        variables = tuple(variables)
        n = len(variables)
        rows = [[matrix[b][a] for b in range(n)] for a in range(n)]
        return cls.from_rows(variables, rows, mode=mode)

    # -- structure ----------------------------------------------------------

    def image_of(self, var: VariableId) -> dict:
        if var.conjugated:
            base_row = self.images.get(var.base)
            if base_row is None:
                return {var: self._coerce(1)}
            return {conjugate_var(t): self._conj(c) for t, c in base_row.items()}
        row = self.images.get(var)
        if row is None:
            return {var: self._coerce(1)}
        return dict(row)

    def _symbols(self) -> tuple[VariableId, ...]:
        doubled = list(self.order) + [conjugate_var(v) for v in self.order]
        return tuple(doubled)

    def _check_invertible(self) -> None:
        symbols = self._symbols()
        pos = {v: k for k, v in enumerate(symbols)}
        n = len(symbols)
        rows = []
        for sym in symbols:
            row = [self._coerce(0)] * n
            for target, coeff in self.image_of(sym).items():
                if target not in pos:
                    raise ValueError(
                        f"image of {sym.token()} uses {target.token()} outside the alphabet")
            for target, coeff in self.image_of(sym).items():
                row[pos[target]] = coeff
            rows.append(row)
        if self.mode == FLOAT:
            mat = np.array([[complex(c) for c in row] for row in rows])
            if np.linalg.matrix_rank(mat) < n:
                raise SingularMapError("variable map is not invertible")
        elif not _exact_invertible(rows):
            raise SingularMapError("variable map is not invertible")

    # -- substitution ---------------------------------------------------------

    def substitute(self, poly: WeylOperator) -> WeylOperator:
        """Replace every variable of an exact polynomial by its image form."""
        if self.mode != EXACT:
            raise ValueError("substitute requires an exact-mode map")
        if not poly.is_polynomial:
            raise ValueError("substitute expects a polynomial")
        image_cache: dict[VariableId, WeylOperator] = {}

        def image_poly(var: VariableId) -> WeylOperator:
            if var not in image_cache:
                image_cache[var] = WeylOperator(
                    {Monomial.build({t: 1}): c for t, c in self.image_of(var).items()})
            return image_cache[var]

        total = WeylOperator()
        for mono, coeff in poly.terms.items():
            term = WeylOperator.scalar(coeff)
            for var, exp in mono.var_powers:
                base = image_poly(var)
                for _ in range(exp):
                    term = multiply(term, base)
            total = total + term
        return total

    def substitute_float(self, poly: WeylOperator) -> dict[Monomial, complex]:
        """Float-mode substitution, returning a complex coefficient map."""
        if not poly.is_polynomial:
            raise ValueError("substitute expects a polynomial")
        images = {}

        def image_form(var: VariableId) -> dict[Monomial, complex]:
            if var not in images:
                images[var] = {
                    Monomial.build({t: 1}): complex(c)
                    for t, c in self.image_of(var).items()
                }
            return images[var]

        total: dict[Monomial, complex] = {}
        for mono, coeff in poly.terms.items():
            term = {Monomial(): complex(coeff)}
            for var, exp in mono.var_powers:
                for _ in range(exp):
                    term = _float_poly_mul(term, image_form(var))
            for m, c in term.items():
                total[m] = total.get(m, 0j) + c
        return {m: c for m, c in total.items() if c != 0}

    def then(self, other: "LinearVariableMap") -> "LinearVariableMap":
        """The map whose substitution equals self's substitution followed by other's."""
        if self.mode != other.mode:
            raise ValueError("cannot compose maps of different modes")
        domain = sorted(set(self.order) | set(other.order))
        images = {}
        for var in domain:
            row: dict[VariableId, object] = {}
            for mid, coeff in self.image_of(var).items():
                for target, c2 in other.image_of(mid).items():
                    prev = row.get(target)
                    value = coeff * c2 if prev is None else prev + coeff * c2
                    row[target] = value
            images[var] = {t: c for t, c in row.items() if self._nonzero(self._coerce(c))}
        return LinearVariableMap(images, mode=self.mode)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearVariableMap):
            return NotImplemented
        return self.mode == other.mode and self.images == other.images


def _float_poly_mul(a: dict[Monomial, complex], b: dict[Monomial, complex]):
    out: dict[Monomial, complex] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            powers = dict(ma.var_powers)
            for v, e in mb.var_powers:
                powers[v] = powers.get(v, 0) + e
            mono = Monomial.build(powers)
            out[mono] = out.get(mono, 0j) + ca * cb
    return out


def _exact_invertible(rows) -> bool:
    """Gaussian elimination over exact Gaussian rationals."""
    mat = [list(row) for row in rows]
    n = len(mat)
    for col in range(n):
        pivot = next((r for r in range(col, n) if mat[r][col]), None)
        if pivot is None:
            return False
        mat[col], mat[pivot] = mat[pivot], mat[col]
        inv = GaussianRational(1) / mat[col][col]
        for r in range(col + 1, n):
            if mat[r][col]:
                scale = mat[r][col] * inv
                mat[r] = [a - scale * b for a, b in zip(mat[r], mat[col])]
    return True
