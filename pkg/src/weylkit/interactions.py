"""Multi-set operator, per-slot momenta, and the momentum-conserving invariants.

Index conventions for the bilinears (sets named by their position):

* ``invariant_i(j, jset, k, kset)``   = u1[j,jset] v2[k,kset] - v1[j,jset] u2[k,kset]
* ``invariant_ibar(j, jset, k, kset)``= conjugate-variable twin of the above
* ``cross_x2(j, jset, i, iset)``      = u1[j,jset] vbar1[i,iset] - v1[j,jset] ubar1[i,iset]
* ``pair_j(i, j, m, nset)``           = invariant_i(j, nset, i, m) + invariant_ibar(i, m, j, nset)

``pair_j`` resolves the printed definition's stray set label as the named set
(the only reading under which the total momentum annihilates it); the
construction record of every invariant stores the resolved arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Monomial, WeylOperator, commutator, osc_var
from .lorentz import momentum_component, single_particle_operator, translation_generator
from .rational import GaussianRational


def all_sets(count: int) -> tuple[int, ...]:
    if count < 1:
        raise ValueError("set count must be >= 1")
    return tuple(range(1, count + 1))


def total_momentum(mu: int, n: int, n_sets: int) -> WeylOperator:
    return translation_generator(mu, n, all_sets(n_sets))


def total_single_particle(n: int, n_sets: int) -> WeylOperator:
    total = WeylOperator()
    for m in all_sets(n_sets):
        total = total + single_particle_operator(n, m)
    return total


@dataclass(frozen=True)
class InvariantOperator:
    """An operator together with the construction record that replays it."""

    name: str
    args: tuple[int, ...]
    operator: WeylOperator

    def replay(self) -> "InvariantOperator":
        return _BUILDERS[self.name](*self.args)

    def to_text(self) -> str:
        header = f"# {self.name}{self.args}"
        return header + "\n" + self.operator.to_text()


def _mono(pairs) -> Monomial:
    return Monomial.build(dict(pairs))


def invariant_i(j: int, jset: int, k: int, kset: int) -> InvariantOperator:
    u1 = osc_var("u", 1, j, jset)
    v1 = osc_var("v", 1, j, jset)
    u2 = osc_var("u", 2, k, kset)
    v2 = osc_var("v", 2, k, kset)
    op = WeylOperator({
        _mono([(u1, 1), (v2, 1)]): GaussianRational(1),
        _mono([(v1, 1), (u2, 1)]): GaussianRational(-1),
    })
    return InvariantOperator("I", (j, jset, k, kset), op)


def invariant_ibar(j: int, jset: int, k: int, kset: int) -> InvariantOperator:
    u1 = osc_var("u", 1, j, jset, conjugated=True)
    v1 = osc_var("v", 1, j, jset, conjugated=True)
    u2 = osc_var("u", 2, k, kset, conjugated=True)
    v2 = osc_var("v", 2, k, kset, conjugated=True)
    op = WeylOperator({
        _mono([(u1, 1), (v2, 1)]): GaussianRational(1),
        _mono([(v1, 1), (u2, 1)]): GaussianRational(-1),
    })
    return InvariantOperator("Ibar", (j, jset, k, kset), op)


def cross_x2(j: int, jset: int, i: int, iset: int) -> InvariantOperator:
    u1 = osc_var("u", 1, j, jset)
    v1 = osc_var("v", 1, j, jset)
    ub1 = osc_var("u", 1, i, iset, conjugated=True)
    vb1 = osc_var("v", 1, i, iset, conjugated=True)
    op = WeylOperator({
        _mono([(u1, 1), (vb1, 1)]): GaussianRational(1),
        _mono([(v1, 1), (ub1, 1)]): GaussianRational(-1),
    })
    return InvariantOperator("X2", (j, jset, i, iset), op)


def pair_j(i: int, j: int, m: int, nset: int) -> InvariantOperator:
    op = invariant_i(j, nset, i, m).operator + invariant_ibar(i, m, j, nset).operator
    return InvariantOperator("J", (i, j, m, nset), op)


def quartic_v(m: int, m_prime: int, n: int) -> InvariantOperator:
    """Sum over i, j of pair_j(i, j, m, m') * pair_j(j, i, m', m); symmetric
    under exchanging the two sets."""
    if m == m_prime:
        raise ValueError("the quartic interaction couples two distinct sets")
    total = WeylOperator()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            total = total + pair_j(i, j, m, m_prime).operator * pair_j(j, i, m_prime, m).operator
    return InvariantOperator("V", (m, m_prime, n), total)


_BUILDERS = {
    "I": invariant_i,
    "Ibar": invariant_ibar,
    "X2": cross_x2,
    "J": pair_j,
    "V": quartic_v,
}


def build_total_operator(n: int, n_sets: int, include_interaction: bool = True) -> WeylOperator:
    """Per-set wave operators plus the ordered-pair sum of quartic couplings."""
    total = total_single_particle(n, n_sets)
    if include_interaction and n_sets >= 2:
        for m in all_sets(n_sets):
            for mp in all_sets(n_sets):
                if m != mp:
                    total = total + quartic_v(m, mp, n).operator
    return total


def relabel_sets(op: WeylOperator, swap: dict[int, int]) -> WeylOperator:
    """Rename set indices throughout an operator (a permutation of sets)."""
    out: dict[Monomial, GaussianRational] = {}
    for mono, coeff in op.terms.items():
        new = Monomial.build(
            {_swap_set(v, swap): e for v, e in mono.var_powers},
            {_swap_set(v, swap): e for v, e in mono.deriv_powers},
        )
        prev = out.get(new)
        out[new] = coeff if prev is None else prev + coeff
    return WeylOperator(out)


def _swap_set(var, swap):
    target = swap.get(var.set_index)
    if target is None:
        return var
    return osc_var(var.kind, var.block, var.index, target, var.conjugated)


# ---------------------------------------------------------------------------
# identity checks (residual-valued; zero residual means the identity holds)


def x2_transfer_residuals(n: int, sets: tuple[int, int]):
    """The three momentum-transfer identities for every index pair in range:
    applying the displayed per-slot momentum component to the bilinears must
    land exactly on the cross terms."""
    m, nset = sets
    out = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            p2_im = momentum_component(2, i, m).scaled(GaussianRational(0, -1))
            p2_jn = momentum_component(2, j, nset).scaled(GaussianRational(0, -1))
            lhs1 = p2_im.apply(invariant_i(j, nset, i, m).operator)
            res1 = lhs1 - cross_x2(j, nset, i, m).operator
            out.append((("line1", i, j), res1))
            lhs2 = p2_im.apply(invariant_ibar(j, nset, i, m).operator)
            res2 = lhs2 + cross_x2(i, m, j, nset).operator
            out.append((("line2", i, j), res2))
            lhs3 = p2_jn.apply(invariant_ibar(i, m, j, nset).operator)
            res3 = lhs3 + cross_x2(j, nset, i, m).operator
            out.append((("line3", i, j), res3))
    return out


def momentum_restriction_residual(mu: int, n: int, n_sets: int) -> WeylOperator:
    """Summing the per-slot components over all (i, set) must recover the
    total translation generator."""
    total = WeylOperator()
    for m in all_sets(n_sets):
        for i in range(1, n + 1):
            total = total + momentum_component(mu, i, m)
    return total - total_momentum(mu, n, n_sets)


def zero_total_momentum_residuals(op: WeylOperator, n: int, n_sets: int):
    """[P_mu_total, op] for each mu; all must vanish for a momentum singlet."""
    return [(mu, commutator(total_momentum(mu, n, n_sets), op)) for mu in range(4)]


def per_set_momentum(mu: int, n: int, set_index: int) -> WeylOperator:
    return translation_generator(mu, n, (set_index,))
