"""Exact l1-minimal boundary preimages via rational simplex.

Filling a cycle z with a chain b of one degree higher is the linear
program  min |b|_1  subject to  (boundary) b = z.  It is solved in exact
rational arithmetic: the absolute values are split into nonnegative
variable pairs, the restricted problems run a two-phase tableau simplex
with Bland's rule, and columns are generated lazily.  A solve only
finishes when a full pricing sweep over every admissible column certifies
dual feasibility, so the reported optimum carries an exact strong-duality
certificate.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .chains import AltChain
from .limits import DEFAULT_LP_BASIS_CAP, CapExceeded

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class BoundaryProblem:
    """Boundary data of one degree of a (sub)complex.

    `rows` are the canonical degree-`degree` tuples, `columns` the
    canonical tuples one degree up that fillings may use.  Both must be
    sorted; the column family must be face-closed into the rows.
    """

    degree: int
    rows: tuple[tuple[int, ...], ...]
    columns: tuple[tuple[int, ...], ...]

    @staticmethod
    def faces_of(col: tuple[int, ...]) -> list[tuple[tuple[int, ...], int]]:
        return [
            (col[:j] + col[j + 1 :], -1 if j % 2 else 1) for j in range(len(col))
        ]


@dataclass
class PreimageResult:
    """Outcome of a minimal-filling solve."""

    status: str  # "optimal" or "infeasible"
    chain: AltChain | None
    norm: Fraction | None
    dual: dict[tuple[int, ...], Fraction] | None
    rounds: int
    certified: bool

    @property
    def ok(self) -> bool:
        return self.status == "optimal"

    def norm_record(self) -> tuple[int, int]:
        if self.norm is None:
            raise ValueError("no norm on an infeasible result")
        return self.norm.numerator, self.norm.denominator


class _Simplex:
    """Two-phase tableau simplex with fraction-free integer pivoting.

    The tableau is kept integer at a common scale D (the last pivot value,
    possibly negative): true entries are stored // D, and the one-step
    update (a*T[i][j] - T[i][c]*T[p][j]) / D_old divides exactly because
    the entries are minors of the integer input.  True signs are stored
    signs times sign(D).  Pivot selection is Dantzig's rule until a long
    degenerate streak, then Bland's rule for guaranteed termination.
    Artificial variables stay in the tableau (banned from the basis in
    phase 2) so duals can be read off the cost row's artificial cells.
    """

    _BLAND_AFTER = 40  # consecutive degenerate pivots before switching

    def __init__(self, columns: list[dict[int, int]], rhs: list[int]):
        self.m = len(rhs)
        self.n = len(columns)
        self.row_sign = [1] * self.m
        self.tableau: list[list[int]] = []
        for i in range(self.m):
            sign = -1 if rhs[i] < 0 else 1
            self.row_sign[i] = sign
            row = [sign * col.get(i, 0) for col in columns]
            row.extend(1 if k == i else 0 for k in range(self.m))
            row.append(sign * rhs[i])
            self.tableau.append(row)
        self.tableau.append([0] * (self.n + self.m + 1))  # cost row
        self.basis = [self.n + i for i in range(self.m)]
        self.active_rows = list(range(self.m))
        self.scale = 1

    def _rebuild_cost_row(self, costs: list[int]) -> None:
        """Cost row = D*c - sum of basic costs times their rows (integer)."""
        width = self.n + self.m + 1
        d = self.scale
        row = [d * costs[j] if j < self.n + self.m else 0 for j in range(width)]
        for i in self.active_rows:
            cb = costs[self.basis[i]]
            if cb:
                ti = self.tableau[i]
                for j in range(width):
                    row[j] -= cb * ti[j]
        self.tableau[-1] = row

    def _pivot(self, row: int, col: int) -> None:
        tab = self.tableau
        prow = tab[row]
        a = prow[col]
        d = self.scale
        for i in self.active_rows + [len(tab) - 1]:
            if i == row:
                continue
            ri = tab[i]
            factor = ri[col]
            if factor:
                tab[i] = [(a * x - factor * y) // d for x, y in zip(ri, prow)]
            elif a != d:
                tab[i] = [(a * x) // d for x in ri]
        self.basis[row] = col
        self.scale = a

    def _iterate(self, allow_artificial: bool) -> None:
        width = self.n + (self.m if allow_artificial else 0)
        bland = False
        degenerate_streak = 0
        while True:
            sgn = 1 if self.scale > 0 else -1
            cost_row = self.tableau[-1]
            enter = -1
            if bland:
                for j in range(width):
                    if sgn * cost_row[j] < 0:
                        enter = j
                        break
            else:
                best_cost = 0
                for j in range(width):
                    v = sgn * cost_row[j]
                    if v < best_cost:
                        best_cost = v
                        enter = j
            if enter < 0:
                return
            leave_row = -1
            best: Fraction | None = None
            for i in self.active_rows:
                a = self.tableau[i][enter]
                if sgn * a > 0:
                    ratio = Fraction(self.tableau[i][-1], a)
                    if best is None or ratio < best or (
                        ratio == best and self.basis[i] < self.basis[leave_row]
                    ):
                        best = ratio
                        leave_row = i
            if leave_row < 0:
                raise ArithmeticError("unbounded linear program")
            if best == 0:
                degenerate_streak += 1
                if degenerate_streak > self._BLAND_AFTER:
                    bland = True
            else:
                degenerate_streak = 0
            self._pivot(leave_row, enter)

    def solve(self) -> tuple[Fraction, dict[int, Fraction], list[Fraction]]:
        """Returns (phase1 residual, primal solution, dual of the rhs rows).

        A positive residual means the equalities are unsatisfiable with
        the given columns; the dual is then the phase-1 (Farkas) vector
        certifying that fact instead of optimality.
        """
        phase1 = [0] * self.n + [1] * self.m
        self._rebuild_cost_row(phase1)
        self._iterate(allow_artificial=True)
        residual = sum(
            (
                Fraction(self.tableau[i][-1], self.scale)
                for i in self.active_rows
                if self.basis[i] >= self.n
            ),
            _ZERO,
        )
        art_costs = 1
        if residual == 0:
            # Degenerate artificials: pivot out where possible, else the
            # row is a redundant equation and drops out.
            for i in list(self.active_rows):
                if self.basis[i] < self.n:
                    continue
                pivot_col = -1
                for j in range(self.n):
                    if self.tableau[i][j]:
                        pivot_col = j
                        break
                if pivot_col >= 0:
                    self._pivot(i, pivot_col)
                else:
                    self.active_rows.remove(i)
            art_costs = 0
            self._rebuild_cost_row([1] * self.n + [0] * self.m)
            self._iterate(allow_artificial=False)
        solution = {
            self.basis[i]: Fraction(self.tableau[i][-1], self.scale)
            for i in self.active_rows
            if self.basis[i] < self.n
        }
        # The artificial block records each tableau row as a combination of
        # original rows, so these cells give a dual vector feasible for the
        # full original system, dropped redundant rows included.
        cost_row = self.tableau[-1]
        duals = [
            (art_costs - Fraction(cost_row[self.n + k], self.scale))
            * self.row_sign[k]
            for k in range(self.m)
        ]
        return residual, solution, duals


def _column_vector(
    col: tuple[int, ...], row_index: dict[tuple[int, ...], int]
) -> dict[int, int]:
    vec: dict[int, int] = {}
    for face, sign in BoundaryProblem.faces_of(col):
        idx = row_index.get(face)
        if idx is None:
            raise ValueError(f"column {col} has face {face} outside the row family")
        vec[idx] = sign
    return vec


def _price_support(
    dual: dict[tuple[int, ...], Fraction],
    universe: Sequence[int],
    column_set: frozenset[tuple[int, ...]],
    active_set: set[tuple[int, ...]],
) -> list[tuple[Fraction, tuple[int, ...]]]:
    """|dual . boundary(col)| over every inactive column that can be nonzero.

    A column prices to zero unless one of its faces carries dual weight, so
    it is enough to grow each dual-support row by one vertex; every other
    column satisfies the dual constraints (and the Farkas annihilation)
    trivially.
    """
    candidates: set[tuple[int, ...]] = set()
    for row in dual:
        for w in universe:
            if w in row:
                continue
            i = bisect_left(row, w)
            col = row[:i] + (w,) + row[i:]
            if col in column_set and col not in active_set:
                candidates.add(col)
    out = []
    for col in sorted(candidates):
        value = _ZERO
        for face, sign in BoundaryProblem.faces_of(col):
            y = dual.get(face)
            if y is not None:
                value += y if sign > 0 else -y
        if value:
            out.append((abs(value), col))
    return out


def min_l1_preimage(
    problem: BoundaryProblem,
    z: AltChain,
    *,
    warm_columns: Iterable[tuple[int, ...]] | None = None,
    lp_basis_cap: int = DEFAULT_LP_BASIS_CAP,
    batch: int = 50,
    max_rounds: int = 400,
) -> PreimageResult:
    """Exact minimal-l1 filling of the cycle z by one-degree-up chains.

    z must be a cycle supported on the problem rows.  The result is either
    an optimal filling with a globally certified dual, or the distinct
    infeasible outcome when z is not a boundary of the column family.

    `warm_columns` seeds the restricted problem (columns outside the
    family are ignored); pricing still certifies against every column, so
    the seed affects speed only.  The default seed is every column whose
    vertices lie in the support of z.
    """
    if z.degree != problem.degree:
        raise ValueError(f"z has degree {z.degree}, problem expects {problem.degree}")
    row_set = set(problem.rows)
    if not set(z.terms) <= row_set:
        raise ValueError("z is supported outside the problem rows")
    if z.degree >= 1:
        if not z.boundary().is_zero():
            raise ValueError("z is not a cycle")
    elif z.augmentation() != 0:
        raise ValueError("z has nonzero augmentation")
    if z.is_zero():
        return PreimageResult(
            "optimal", AltChain.zero(z.degree + 1), _ZERO, {}, 0, True
        )

    scale = math.lcm(*(coeff.denominator for coeff in z.terms.values()))
    z_int = {key: int(coeff * scale) for key, coeff in z.terms.items()}

    column_set = frozenset(problem.columns)
    universe = sorted({v for row in problem.rows for v in row})
    if warm_columns is not None:
        active_set = set(warm_columns) & column_set
    else:
        support_vertices = set()
        for key in z_int:
            support_vertices.update(key)
        active_set = {
            col for col in problem.columns if set(col) <= support_vertices
        }
    active = sorted(active_set)

    rounds = 0
    while True:
        rounds += 1
        if rounds > max_rounds:
            raise ArithmeticError("column generation failed to converge")
        touched: set[tuple[int, ...]] = set(z_int)
        for col in active:
            for face, _ in BoundaryProblem.faces_of(col):
                touched.add(face)
        rows = sorted(touched)
        if len(rows) > lp_basis_cap:
            raise CapExceeded(
                f"restricted LP needs {len(rows)} rows (cap {lp_basis_cap})"
            )
        row_index = {tup: i for i, tup in enumerate(rows)}
        rhs = [z_int.get(tup, 0) for tup in rows]
        vectors = [_column_vector(col, row_index) for col in active]
        split: list[dict[int, int]] = []
        for vec in vectors:
            split.append(vec)
            split.append({i: -v for i, v in vec.items()})
        residual, solution, dual_list = _Simplex(split, rhs).solve()
        dual = {rows[i]: dual_list[i] for i in range(len(rows)) if dual_list[i]}

        priced_all = _price_support(dual, universe, column_set, active_set)
        if residual > 0:
            # Farkas pricing: any column the certificate does not
            # annihilate can still reduce the infeasibility.
            priced = [(val, col) for val, col in priced_all if val > 0]
            if not priced:
                return PreimageResult("infeasible", None, None, dual, rounds, True)
        else:
            priced = [(val, col) for val, col in priced_all if val > 1]
            if not priced:
                coeffs: dict[tuple[int, ...], Fraction] = {}
                for idx, value in solution.items():
                    if not value:
                        continue
                    col = active[idx // 2]
                    signed = value if idx % 2 == 0 else -value
                    coeffs[col] = coeffs.get(col, _ZERO) + signed
                chain = AltChain(
                    problem.degree + 1, {k: v / scale for k, v in coeffs.items() if v}
                )
                check = chain.boundary()
                if check != AltChain(
                    problem.degree, {k: Fraction(v, scale) for k, v in z_int.items()}
                ):
                    raise AssertionError("simplex returned a non-filling")
                norm = chain.l1_norm()
                dual_obj = sum(
                    (dual.get(k, _ZERO) * v for k, v in z_int.items()), _ZERO
                )
                if dual_obj != norm * scale:
                    raise AssertionError("strong duality failed on exact data")
                return PreimageResult("optimal", chain, norm, dual, rounds, True)

        priced.sort(key=lambda pair: (-pair[0], pair[1]))
        for _, col in priced[:batch]:
            active_set.add(col)
        active = sorted(active_set)
