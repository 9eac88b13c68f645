"""SU(n) realized as first-order operators, plus the two-variable U(2) example.

Variables with block 1 carry the fundamental index action; block-2 variables
carry the conjugate (negative-transpose) action.  Conjugation swaps the two,
so ubar/vbar with block 2 act like the fundamental again.  The matrix basis
is the generalized Gell-Mann family with integer diagonal entries, which is
trace-orthogonal and keeps every structure constant an exact rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .algebra import (
    Monomial,
    WeylOperator,
    commutator,
    hermitian_completion,
    osc_var,
    pair_var,
)
from .lorentz import AS_PRINTED, CORRECTED
from .rational import GaussianRational, HALF, I, ONE

Matrix = tuple[tuple[GaussianRational, ...], ...]


def _matrix(entries) -> Matrix:
    return tuple(tuple(GaussianRational.coerce(x) for x in row) for row in entries)


@lru_cache(maxsize=None)
def gell_mann_matrices(n: int) -> tuple[Matrix, ...]:
    """Hermitian traceless basis of su(n): symmetric and antisymmetric pair
    matrices interleaved with the diagonal ladder, in the conventional order
    (for n=2 this is exactly the three Pauli matrices)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    out: list[Matrix] = []
    zero = GaussianRational()
    for k in range(2, n + 1):
        for j in range(1, k):
            sym = [[zero] * n for _ in range(n)]
            sym[j - 1][k - 1] = GaussianRational(1)
            sym[k - 1][j - 1] = GaussianRational(1)
            out.append(_matrix(sym))
            asym = [[zero] * n for _ in range(n)]
            asym[j - 1][k - 1] = GaussianRational(0, -1)
            asym[k - 1][j - 1] = GaussianRational(0, 1)
            out.append(_matrix(asym))
        diag = [[zero] * n for _ in range(n)]
        for j in range(k - 1):
            diag[j][j] = GaussianRational(1)
        diag[k - 1][k - 1] = GaussianRational(1 - k)
        out.append(_matrix(diag))
    return tuple(out)


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum((a[r][k] * b[k][c] for k in range(n)), GaussianRational())
              for c in range(n))
        for r in range(n)
    )


def _mat_commutator(a: Matrix, b: Matrix) -> Matrix:
    ab, ba = _mat_mul(a, b), _mat_mul(b, a)
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(ab, ba))


def _trace_product(a: Matrix, b: Matrix) -> GaussianRational:
    n = len(a)
    return sum((a[r][c] * b[c][r] for r in range(n) for c in range(n)),
               GaussianRational())


def is_diagonal(mat: Matrix) -> bool:
    return all(not mat[r][c] for r in range(len(mat)) for c in range(len(mat)) if r != c)


@lru_cache(maxsize=None)
def structure_constants(n: int) -> dict[tuple[int, int, int], GaussianRational]:
    """f in [b_a, b_b] = i sum_g f_{abg} b_g, exact, against gell_mann_matrices."""
    basis = gell_mann_matrices(n)
    norms = [_trace_product(m, m) for m in basis]
    out: dict[tuple[int, int, int], GaussianRational] = {}
    for a, b in product(range(len(basis)), repeat=2):
        if a == b:
            continue
        bracket = _mat_commutator(basis[a], basis[b])
        residual = [list(row) for row in bracket]
        for g, mat in enumerate(basis):
            coeff = _trace_product(bracket, mat) / (I * norms[g])
            if coeff:
                out[(a, b, g)] = coeff
                for r in range(n):
                    for c in range(n):
                        residual[r][c] = residual[r][c] - I * coeff * mat[r][c]
        if any(x for row in residual for x in row):
            raise RuntimeError("matrix basis failed to close under commutation")
    return out


# block/conjugation classes carrying the fundamental vs conjugate action
_FUNDAMENTAL = (("u", 1, False), ("v", 1, False), ("u", 2, True), ("v", 2, True))
_CONJUGATE = (("u", 2, False), ("v", 2, False), ("u", 1, True), ("v", 1, True))


@dataclass(frozen=True)
class SunGeneratorSet:
    n: int
    sets: tuple[int, ...]
    basis: tuple[Matrix, ...]
    generators: tuple[WeylOperator, ...]

    @property
    def diagonal_indices(self) -> tuple[int, ...]:
        return tuple(a for a, mat in enumerate(self.basis) if is_diagonal(mat))


def build_sun_generators(n: int, sets=(1,)) -> SunGeneratorSet:
    if n < 2:
        raise ValueError("n must be >= 2")
    basis = gell_mann_matrices(n)
    gens = []
    for mat in basis:
        terms: dict[Monomial, GaussianRational] = {}
        for m in sets:
            for kind, block, conj in _FUNDAMENTAL:
                for j in range(n):
                    for k in range(n):
                        if not mat[j][k]:
                            continue
                        var = osc_var(kind, block, j + 1, m, conj)
                        der = osc_var(kind, block, k + 1, m, conj)
                        mono = Monomial.build({var: 1}, {der: 1})
                        prev = terms.get(mono, GaussianRational())
                        terms[mono] = prev + mat[j][k]
            for kind, block, conj in _CONJUGATE:
                for j in range(n):
                    for k in range(n):
                        if not mat[j][k]:
                            continue
                        var = osc_var(kind, block, k + 1, m, conj)
                        der = osc_var(kind, block, j + 1, m, conj)
                        mono = Monomial.build({var: 1}, {der: 1})
                        prev = terms.get(mono, GaussianRational())
                        terms[mono] = prev - mat[j][k]
        gens.append(WeylOperator(terms))
    return SunGeneratorSet(n, tuple(sets), basis, tuple(gens))


def invariant_pairing(n: int, set_index: int = 1) -> WeylOperator:
    """sum_j u1j * v2j, the fundamental x conjugate singlet combination."""
    terms = {}
    for j in range(1, n + 1):
        u1 = osc_var("u", 1, j, set_index)
        v2 = osc_var("v", 2, j, set_index)
        terms[Monomial.build({u1: 1, v2: 1})] = GaussianRational(1)
    return WeylOperator(terms)


def structure_constant_residuals(gs: SunGeneratorSet):
    """Symbolic [T_a, T_b] against the matrix-level expansion, per pair."""
    consts = structure_constants(gs.n)
    out = []
    count = len(gs.generators)
    for a in range(count):
        for b in range(a + 1, count):
            expected = WeylOperator()
            for g in range(count):
                coeff = consts.get((a, b, g))
                if coeff:
                    expected = expected + gs.generators[g].scaled(I * coeff)
            residual = commutator(gs.generators[a], gs.generators[b]) - expected
            out.append(((a, b), residual))
    return out


def charge_labels(state: WeylOperator, gs: SunGeneratorSet):
    """Eigenvalues of the diagonal generators on ``state``, or None if the
    state is not a simultaneous eigenvector."""
    if not state:
        raise ValueError("charge labels of the zero polynomial are undefined")
    charges: list[Fraction] = []
    for idx in gs.diagonal_indices:
        image = gs.generators[idx].apply(state)
        if not image:
            charges.append(Fraction(0))
            continue
        lead = min(state.terms)
        lead_coeff = state.terms[lead]
        ratio = image.coefficient(lead) / lead_coeff
        if not ratio.is_real:
            return None
        if image - state.scaled(ratio):
            return None
        charges.append(ratio.re)
    return charges


# ---------------------------------------------------------------------------
# the two-variable U(2) worked example


@dataclass(frozen=True)
class ExampleBasis:
    states: tuple[WeylOperator, WeylOperator, WeylOperator]
    labels: tuple[tuple[int, int], ...]  # (total invariant, z eigenvalue)


@dataclass(frozen=True)
class U2Example:
    variant: str
    operator: WeylOperator
    l_ops: tuple[WeylOperator, WeylOperator, WeylOperator]
    basis: ExampleBasis


def example_operator() -> WeylOperator:
    terms = {}
    for idx in (1, 2):
        u = pair_var(idx)
        ubar = pair_var(idx, conjugated=True)
        terms[Monomial.build({}, {u: 1, ubar: 1})] = GaussianRational(1)
    return WeylOperator(terms)


def example_basis() -> ExampleBasis:
    u1 = pair_var(1)
    u2 = pair_var(2)
    states = (
        WeylOperator({Monomial.build({u1: 2}): GaussianRational(1)}),
        WeylOperator({Monomial.build({u1: 1, u2: 1}): GaussianRational(1)}),
        WeylOperator({Monomial.build({u2: 2}): GaussianRational(1)}),
    )
    return ExampleBasis(states, ((2, 1), (2, 0), (2, -1)))


def _printed_holomorphic_parts() -> tuple[WeylOperator, WeylOperator, WeylOperator]:
    u1, u2 = pair_var(1), pair_var(2)
    t = lambda var, der: Monomial.build({var: 1}, {der: 1})
    lx = WeylOperator({t(u2, u1): HALF, t(u1, u2): HALF})
    ly = WeylOperator({t(u2, u1): -I * HALF, t(u1, u2): I * HALF})
    lz = WeylOperator({t(u1, u1): HALF, t(u2, u2): -HALF})
    return lx, ly, lz


@lru_cache(maxsize=1)
def _corrected_u2_signs() -> tuple[tuple[int, int], ...]:
    """Search (holomorphic sign, conjugate-part sign) per generator for the
    minimal-flip assignment with su(2) closure, example-operator invariance,
    and the printed z-eigenvalues.  The constraints leave a two-fold sign
    ambiguity; the lexicographically least flip pattern wins, which keeps the
    holomorphic x-part as printed."""
    holos = _printed_holomorphic_parts()
    op = example_operator()
    basis = example_basis()
    best = None
    for signs in product(*(((1, 1), (1, -1), (-1, 1), (-1, -1)),) * 3):
        ls = [holos[k].scaled(s) + holos[k].hermitian_counterpart().scaled(t)
              for k, (s, t) in enumerate(signs)]
        if commutator(ls[0], ls[1]) != ls[2].scaled(I):
            continue
        if commutator(ls[1], ls[2]) != ls[0].scaled(I):
            continue
        if commutator(ls[2], ls[0]) != ls[1].scaled(I):
            continue
        if any(commutator(op, l) for l in ls):
            continue
        if any(ls[2].apply(state) != state.scaled(lz)
               for state, (_, lz) in zip(basis.states, basis.labels)):
            continue
        flips = sum(int(s < 0) + int(t < 0) for s, t in signs)
        rank = (flips, tuple((int(s < 0), int(t < 0)) for s, t in signs))
        if best is None or rank < best[0]:
            best = (rank, signs)
    if best is None:
        raise RuntimeError("no consistent sign assignment for the example generators")
    return best[1]


def build_u2_example(variant: str = CORRECTED) -> U2Example:
    holos = _printed_holomorphic_parts()
    if variant == AS_PRINTED:
        l_ops = tuple(hermitian_completion(h) for h in holos)
    elif variant == CORRECTED:
        signs = _corrected_u2_signs()
        l_ops = tuple(
            holos[k].scaled(s) + holos[k].hermitian_counterpart().scaled(t)
            for k, (s, t) in enumerate(signs)
        )
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return U2Example(variant, example_operator(), l_ops, example_basis())


def casimir(l_ops) -> WeylOperator:
    total = WeylOperator()
    for l in l_ops:
        total = total + l * l
    return total
