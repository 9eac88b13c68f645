"""Finite group actions, representation matrices, flows, and the grid charts.

Conventions fixed here (and recorded in report headers):

* The closed-form translation action is taken verbatim from its printed
  form.  Its first-order expansion equals the substitution action of
  -i * P0 for the time component but +i * Pk for the spatial components
  (the exponent is metric-contracted).  ``flow_field`` integrates the
  -i direction uniformly, anchored to the time-translation contract; the
  spatial closed forms are therefore reproduced at negated parameter.
* Representation matrices are built from ``LinearVariableMap.group_action``
  (transposed bookkeeping), the unique choice under which the entry rule
  R11 = a11**2 and the product rule R(B@A) = R(B) R(A) hold simultaneously.
* "Orthogonal" means the Euclidean inner product on the real coordinates
  (Re, Im pairs in canonical variable order).

Note on grid charts: for n = 1 the four translation directions are linearly
dependent at every point (the chart construction reports the degeneracy);
independence, and with it the 8n-4 dimensional complement, first appears at
n >= 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import Monomial, VariableId, WeylOperator, osc_var
from .linmap import EXACT, FLOAT, LinearVariableMap
from .lorentz import oscillator_variables
from .rational import GaussianRational, I


class BasisNotClosedError(ValueError):
    """An image polynomial left the span of the representation basis."""


# ---------------------------------------------------------------------------
# closed-form actions


def translation_map(x, n: int, mode: str = EXACT, set_index: int = 1) -> LinearVariableMap:
    """The finite translation with parameters x = (x0, x1, x2, x3).

    Block-1 variables are fixed; block-2 variables shift by linear
    combinations of conjugated block-1 variables.
    """
    if len(x) != 4:
        raise ValueError("translation takes four parameters")
    if mode == EXACT:
        coeffs = [GaussianRational(Fraction(v)) for v in x]
        one = GaussianRational(1)
        i_unit = I
    else:
        coeffs = [complex(v) for v in x]
        one = 1.0 + 0j
        i_unit = 1j
    x0, x1, x2, x3 = coeffs
    images = {}
    for i in range(1, n + 1):
        u1 = osc_var("u", 1, i, set_index)
        v1 = osc_var("v", 1, i, set_index)
        u2 = osc_var("u", 2, i, set_index)
        v2 = osc_var("v", 2, i, set_index)
        u1c = osc_var("u", 1, i, set_index, conjugated=True)
        v1c = osc_var("v", 1, i, set_index, conjugated=True)
        images[u1] = {u1: one}
        images[v1] = {v1: one}
        images[u2] = {u2: one,
                      v1c: -i_unit * x0 - i_unit * x3,
                      u1c: i_unit * x1 - x2}
        images[v2] = {v2: one,
                      u1c: i_unit * x0 - i_unit * x3,
                      v1c: -i_unit * x1 - x2}
    return LinearVariableMap(images, mode=mode)


def lorentz_action_map(matrix, n: int, mode: str = EXACT, set_index: int = 1) -> LinearVariableMap:
    """The homogeneous action u -> a11 u + a12 v, v -> a21 u + a22 v, applied
    to every block and internal index (conjugates transform conjugately)."""
    images = {}
    for block in (1, 2):
        for i in range(1, n + 1):
            u = osc_var("u", block, i, set_index)
            v = osc_var("v", block, i, set_index)
            images[u] = {u: matrix[0][0], v: matrix[0][1]}
            images[v] = {u: matrix[1][0], v: matrix[1][1]}
    return LinearVariableMap(images, mode=mode)


# ---------------------------------------------------------------------------
# representation matrices


@dataclass(frozen=True)
class RepresentationMatrix:
    matrix: tuple            # rows; entries exact or complex per mode
    basis: tuple[WeylOperator, ...]
    mode: str

    def as_array(self) -> np.ndarray:
        return np.array([[complex(entry) for entry in row] for row in self.matrix])


def _basis_monomials(polys) -> list[Monomial]:
    monos = set()
    for p in polys:
        monos.update(p.terms)
    return sorted(monos)


def representation_matrix(basis, vmap: LinearVariableMap, tol: float = 1e-12) -> RepresentationMatrix:
    """Matrix of the substitution action on a closed polynomial basis.

    Column i holds the coordinates of the image of basis vector i, so the
    image of |i> is sum_j |j> R[j][i].  Raises BasisNotClosedError when an
    image leaves the span.
    """
    basis = tuple(basis)
    if vmap.mode == EXACT:
        images = [vmap.substitute(p).terms for p in basis]
        return _exact_expand(basis, images)
    images = [vmap.substitute_float(p) for p in basis]
    return _float_expand(basis, images, tol)


def _float_expand(basis, images, tol) -> RepresentationMatrix:
    monos = _basis_monomials(list(basis) + [WeylOperator()])
    extra = set()
    for img in images:
        extra.update(img)
    monos = sorted(set(monos) | extra)
    b_mat = np.array([[complex(p.coefficient(m)) for p in basis] for m in monos])
    columns = []
    for img in images:
        y = np.array([img.get(m, 0j) for m in monos])
        coeffs, *_ = np.linalg.lstsq(b_mat, y, rcond=None)
        residual = np.abs(b_mat @ coeffs - y).max() if len(y) else 0.0
        if residual > tol * max(1.0, float(np.abs(y).max(initial=0.0))):
            raise BasisNotClosedError(f"image leaves the basis span (residual {residual:.3e})")
        columns.append(coeffs)
    matrix = tuple(tuple(col[r] for col in columns) for r in range(len(basis)))
    return RepresentationMatrix(matrix, basis, FLOAT)


def _exact_expand(basis, images) -> RepresentationMatrix:
    monos = sorted(set().union(*[set(p.terms) for p in basis],
                               *[set(img) for img in images]))
    zero = GaussianRational()
    rows = [[p.coefficient(m) for p in basis] for m in monos]
    columns = []
    for img in images:
        target = [img.get(m, zero) for m in monos]
        coeffs = _exact_solve(rows, target)
        if coeffs is None:
            raise BasisNotClosedError("image leaves the basis span")
        columns.append(coeffs)
    matrix = tuple(tuple(col[r] for col in columns) for r in range(len(basis)))
    return RepresentationMatrix(matrix, tuple(basis), EXACT)


def _exact_solve(rows, target):
    """Least-structure exact solve of an overdetermined consistent system."""
    mat = [list(row) + [t] for row, t in zip(rows, target)]
    n_cols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = next((k for k in range(r, len(mat)) if mat[k][c]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = GaussianRational(1) / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for k in range(len(mat)):
            if k != r and mat[k][c]:
                scale = mat[k][c]
                mat[k] = [a - scale * b for a, b in zip(mat[k], mat[r])]
        pivots.append(c)
        r += 1
    solution = [GaussianRational() for _ in range(n_cols)]
    for row_idx, col in enumerate(pivots):
        solution[col] = mat[row_idx][-1]
    for k in range(r, len(mat)):
        if mat[k][-1]:
            return None
    if len(pivots) < n_cols:
        # basis not linearly independent; reject rather than guess
        raise ValueError("representation basis is linearly dependent")
    return solution


def verify_homomorphism(basis, a_matrix, b_matrix, variables, tol: float = 1e-10):
    """Compare R(B@A) against R(B) R(A) entrywise; returns (passed, max_err)."""
    basis = tuple(basis)
    map_a = LinearVariableMap.group_action(variables, a_matrix, mode=FLOAT)
    map_b = LinearVariableMap.group_action(variables, b_matrix, mode=FLOAT)
    r_a = representation_matrix(basis, map_a).as_array()
    r_b = representation_matrix(basis, map_b).as_array()
    product_map = LinearVariableMap.group_action(
        variables, np.asarray(b_matrix) @ np.asarray(a_matrix), mode=FLOAT)
    r_ba = representation_matrix(basis, product_map).as_array()
    err = float(np.abs(r_ba - r_b @ r_a).max())
    return err <= tol, err


# ---------------------------------------------------------------------------
# flows and grid charts


def flow_field(generator: WeylOperator, variables):
    """Real vector field on the (Re, Im) coordinates whose flow reproduces the
    closed-form finite action: the substitution direction of -i * generator."""
    if not generator.is_first_order:
        raise ValueError("flow field needs a first-order generator")
    neg_i = GaussianRational(0, -1)
    coeff_polys = [generator.apply(WeylOperator.variable(v)).scaled(neg_i)
                   for v in variables]

    def field(coords: np.ndarray) -> np.ndarray:
        point = {var: complex(coords[2 * k], coords[2 * k + 1])
                 for k, var in enumerate(variables)}
        out = np.empty_like(coords)
        for k, poly in enumerate(coeff_polys):
            w = poly.evaluate(point)
            out[2 * k] = w.real
            out[2 * k + 1] = w.imag
        return out

    return field


def integrate_flow(generator: WeylOperator, amount: float, start, variables,
                   steps: int | None = None) -> np.ndarray:
    """Fixed-step RK4 integration of the generator's flow from ``start``."""
    coords = np.array(start, dtype=float)
    if coords.shape != (2 * len(variables),):
        raise ValueError("start must supply Re, Im for every variable")
    if amount == 0:
        return coords
    if steps is None:
        steps = max(1, int(np.ceil(abs(amount) * 1000)))
    field = flow_field(generator, variables)
    h = amount / steps
    for _ in range(steps):
        k1 = field(coords)
        k2 = field(coords + 0.5 * h * k1)
        k3 = field(coords + 0.5 * h * k2)
        k4 = field(coords + h * k3)
        coords = coords + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return coords


def apply_map_to_point(vmap: LinearVariableMap, coords, variables) -> np.ndarray:
    """Move a coordinate point by the closed-form variable action."""
    point = {var: complex(coords[2 * k], coords[2 * k + 1])
             for k, var in enumerate(variables)}
    out = np.empty(2 * len(variables))
    for k, var in enumerate(variables):
        total = 0j
        for target, coeff in vmap.image_of(var).items():
            value = point[target.base]
            if target.conjugated:
                value = value.conjugate()
            total += complex(coeff) * value
        out[2 * k] = total.real
        out[2 * k + 1] = total.imag
    return out


@dataclass(frozen=True)
class GridChart:
    point: np.ndarray
    directions: np.ndarray        # 4 x dim rows, one per translation generator
    complement: np.ndarray | None  # (dim-4) x dim orthonormal rows, or None
    degenerate: bool

    def to_dict(self) -> dict:
        return {
            "point": [repr(float(x)) for x in self.point],
            "degenerate": self.degenerate,
            "directions": [[repr(float(x)) for x in row] for row in self.directions],
            "complement": None if self.complement is None else
                          [[repr(float(x)) for x in row] for row in self.complement],
        }


def grid_chart(point, translations, variables, degeneracy_tol: float = 1e-9) -> GridChart:
    """Directions of the four translation flows at a point plus a Gram-Schmidt
    orthonormal basis of their Euclidean orthogonal complement."""
    point = np.array(point, dtype=float)
    fields = [flow_field(gen, variables) for gen in translations]
    directions = np.array([f(point) for f in fields])
    svals = np.linalg.svd(directions, compute_uv=False)
    smin = float(svals.min()) if svals.size else 0.0
    smax = float(svals.max()) if svals.size else 0.0
    if len(svals) < 4 or smin <= degeneracy_tol * max(1.0, smax):
        return GridChart(point, directions, None, True)
    frame: list[np.ndarray] = []
    for row in directions:
        vec = _project_out(row, frame)
        frame.append(vec / np.linalg.norm(vec))
    complement = []
    dim = directions.shape[1]
    for k in range(dim):
        vec = _project_out(np.eye(dim)[k], frame)
        norm = np.linalg.norm(vec)
        if norm > 1e-10:
            frame.append(vec / norm)
            complement.append(frame[-1])
    if len(complement) != dim - 4:
        return GridChart(point, directions, None, True)
    return GridChart(point, directions, np.array(complement), False)


def _project_out(vec: np.ndarray, frame) -> np.ndarray:
    out = vec.astype(float)
    for _ in range(2):  # second pass keeps residual orthogonality near roundoff
        for basis_vec in frame:
            out = out - (out @ basis_vec) * basis_vec
    return out


def pair_variables() -> tuple[VariableId, ...]:
    from .algebra import pair_var
    return (pair_var(1), pair_var(2))


def osc_real_dimension(n: int) -> int:
    return 2 * len(oscillator_variables(n))
