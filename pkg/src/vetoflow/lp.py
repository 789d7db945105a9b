"""An exact rational LP solver, sized for the distortion computations.

Maximization over nonnegative variables with sparse "le"/"eq" constraints.
The solver is a dense two-phase tableau simplex.  Pivoting starts with the
largest-reduced-cost rule and switches permanently to Bland's rule after a
run of degenerate pivots, so termination is guaranteed while typical
instances stay fast.

Constraint sets here are huge but mostly slack (quadrangle rows grow as
n^2 m^2), so rows are activated lazily: solve with a small active set,
then add violated rows and repeat.  An optimum with no violated inactive
row is globally optimal.  An unbounded ray is only trusted once no
inactive row blocks it and a caller-supplied feasible point certifies the
full system.

Arithmetic uses gmpy2 rationals when available and fractions.Fraction
otherwise; the API boundary is always Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

try:
    from gmpy2 import mpq as _num
except ImportError:
    _num = Fraction

_ZERO = _num(0)
_ONE = _num(1)


@dataclass(frozen=True)
class LinearConstraint:
    """Sparse row: sum of coeffs[j] * x[j] (<= or ==) rhs."""

    coeffs: dict[int, Fraction]
    rhs: Fraction
    kind: str = "le"

    def __post_init__(self) -> None:
        if self.kind not in ("le", "eq"):
            raise ValueError(f"unknown constraint kind {self.kind!r}")

    def value_at(self, x: Sequence) -> Fraction:
        return sum((c * x[j] for j, c in self.coeffs.items()), Fraction(0))

    def satisfied_by(self, x: Sequence) -> bool:
        v = self.value_at(x)
        return v == self.rhs if self.kind == "eq" else v <= self.rhs


@dataclass(frozen=True)
class LinearProgram:
    """maximize objective . x  subject to the constraints and x >= 0."""

    num_vars: int
    objective: tuple[Fraction, ...]
    constraints: tuple[LinearConstraint, ...]

    def __post_init__(self) -> None:
        if len(self.objective) != self.num_vars:
            raise ValueError("objective length must equal num_vars")
        for row in self.constraints:
            if any(j < 0 or j >= self.num_vars for j in row.coeffs):
                raise ValueError("constraint touches an unknown variable")


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "unbounded"
    value: Fraction | None
    x: tuple[Fraction, ...] | None
    ray: tuple[Fraction, ...] | None


_DEGENERATE_STREAK_LIMIT = 40


class _Simplex:
    """Dense tableau over the active rows; columns are the original variables
    followed by one slack per "le" row, then artificials during phase 1."""

    def __init__(self, num_vars: int, rows: list[LinearConstraint]) -> None:
        self.num_vars = num_vars
        self.rows = rows
        self.bland = False
        self.degenerate_streak = 0
        num_slacks = sum(1 for r in rows if r.kind == "le")
        self.total = num_vars + num_slacks
        self.tab: list[list] = []
        self.basis: list[int] = []
        self.art_cols: list[int] = []

        slack_at = num_vars
        art_at = self.total
        pending_art: list[int] = []
        for r in rows:
            dense = [_ZERO] * self.total
            for j, c in r.coeffs.items():
                dense[j] = _num(c.numerator, c.denominator)
            rhs = _num(r.rhs.numerator, r.rhs.denominator)
            flip = rhs < 0
            if flip:
                dense = [-v for v in dense]
                rhs = -rhs
            if r.kind == "le" and not flip:
                dense[slack_at] = _ONE
                self.basis.append(slack_at)
                pending_art.append(-1)
                slack_at += 1
            elif r.kind == "le":
                # flipped to >=: surplus column, artificial basis
                dense[slack_at] = -_ONE
                slack_at += 1
                pending_art.append(len(self.tab))
                self.basis.append(-1)
            else:
                pending_art.append(len(self.tab))
                self.basis.append(-1)
            dense.append(rhs)
            self.tab.append(dense)

        # append artificial columns where needed
        art_rows = [i for i in pending_art if i >= 0]
        if art_rows:
            block = len(art_rows)
            for r_i, row in enumerate(self.tab):
                rhs = row.pop()
                row.extend([_ZERO] * block)
                row.append(rhs)
            for k, i in enumerate(art_rows):
                col = self.total + k
                self.art_cols.append(col)
                self.tab[i][col] = _ONE
                self.basis[i] = col
        self.width = self.total + len(self.art_cols)

    def _pivot(self, r: int, c: int) -> None:
        tab = self.tab
        piv = tab[r][c]
        if piv != _ONE:
            inv = _ONE / piv
            tab[r] = [v * inv if v else v for v in tab[r]]
        prow = tab[r]
        for i, row in enumerate(tab):
            if i != r and row[c]:
                f = row[c]
                tab[i] = [a - f * b if b else a for a, b in zip(row, prow)]
        f = self.obj[c]
        if f:
            self.obj = [a - f * b if b else a for a, b in zip(self.obj, prow)]
        self.basis[r] = c

    def _price_out(self, objective: list) -> None:
        # objective includes the value cell at the end
        self.obj = objective
        for r, bv in enumerate(self.basis):
            if self.obj[bv] != 0:
                f = self.obj[bv]
                self.obj = [a - f * b if b else a for a, b in zip(self.obj, self.tab[r])]

    def _choose_entering(self, allowed: int) -> int | None:
        best = None
        best_val = _ZERO
        for j in range(allowed):
            rc = self.obj[j]
            if rc > 0:
                if self.bland:
                    return j
                if best is None or rc > best_val:
                    best, best_val = j, rc
        return best

    def _ratio_row(self, col: int) -> int | None:
        best = None
        best_ratio = None
        for r, row in enumerate(self.tab):
            a = row[col]
            if a > 0:
                ratio = row[-1] / a
                if best_ratio is None or ratio < best_ratio or (
                    ratio == best_ratio and self.basis[r] < self.basis[best]
                ):
                    best, best_ratio = r, ratio
        if best is not None:
            if best_ratio == 0:
                self.degenerate_streak += 1
                if self.degenerate_streak > _DEGENERATE_STREAK_LIMIT:
                    self.bland = True
            else:
                self.degenerate_streak = 0
        return best

    def _run(self, allowed: int) -> int | None:
        """Pivot to optimality; returns an entering column on unboundedness."""
        while True:
            col = self._choose_entering(allowed)
            if col is None:
                return None
            row = self._ratio_row(col)
            if row is None:
                return col
            self._pivot(row, col)

    def prepare(self) -> None:
        """Phase 1, then drop artificial columns and redundant rows."""
        if self.art_cols:
            phase1 = [_ZERO] * self.width + [_ZERO]
            for c in self.art_cols:
                phase1[c] = -_ONE
            self._price_out(phase1)
            col = self._run(self.width)
            assert col is None, "phase 1 cannot be unbounded"
            if self.obj[-1] != 0:
                raise AssertionError("LP infeasible; the caller promised feasibility")
            # pivot lingering zero-level artificials out of the basis
            art_set = set(self.art_cols)
            redundant = []
            for r, bv in enumerate(self.basis):
                if bv in art_set:
                    for j in range(self.total):
                        if self.tab[r][j] != 0:
                            self._pivot(r, j)
                            break
                    else:
                        redundant.append(r)
            for r in reversed(redundant):
                del self.tab[r]
                del self.basis[r]
            # artificial columns sit between the slacks and the rhs cell
            for i, row in enumerate(self.tab):
                self.tab[i] = row[: self.total] + [row[-1]]
            self.art_cols = []
            self.width = self.total

    def set_objective(self, objective_dense: list) -> None:
        obj = [_ZERO] * self.width + [_ZERO]
        for j, c in enumerate(objective_dense):
            obj[j] = _num(c.numerator, c.denominator)
        self._price_out(obj)

    def primal(self) -> int | None:
        """Pivot to optimality; returns the entering column on unboundedness."""
        return self._run(self.width)

    def objective_value(self):
        return -self.obj[-1]

    def ray_of(self, col: int) -> list:
        ray = [_ZERO] * self.width
        ray[col] = _ONE
        for r, bv in enumerate(self.basis):
            ray[bv] = -self.tab[r][col]
        return ray

    def add_row(self, r: LinearConstraint) -> None:
        """Append a "le" row, priced against the current basis, with its slack
        basic.  The slack may come out negative; dual_restore fixes that."""
        assert r.kind == "le" and not self.art_cols
        dense = [_ZERO] * self.width
        for j, c in r.coeffs.items():
            dense[j] = _num(c.numerator, c.denominator)
        dense.append(_num(r.rhs.numerator, r.rhs.denominator))
        for rr, bv in enumerate(self.basis):
            f = dense[bv]
            if f:
                dense = [a - f * b if b else a for a, b in zip(dense, self.tab[rr])]
        slack = self.width
        rhs = dense.pop()
        dense.append(_ONE)
        dense.append(rhs)
        for i, row in enumerate(self.tab):
            rr_rhs = row.pop()
            row.append(_ZERO)
            row.append(rr_rhs)
        self.obj.insert(slack, _ZERO)
        self.tab.append(dense)
        self.basis.append(slack)
        self.rows.append(r)
        self.total += 1
        self.width += 1

    def has_negative_rhs(self) -> bool:
        return any(row[-1] < 0 for row in self.tab)

    def dual_restore(self) -> None:
        """Dual simplex: assumes reduced costs are optimal (obj entries <= 0)
        and pivots until every basic value is nonnegative again.

        Leaving row: most negative basic value, or smallest basic index once
        a degenerate streak forces Bland mode.  Entering column: minimum
        dual ratio, ties to the smallest index; the ratio test is never
        relaxed, Bland mode only changes tie-breaking, so dual feasibility
        is preserved throughout.
        """
        bland = False
        streak = 0
        while True:
            r = None
            if bland:
                for i, row in enumerate(self.tab):
                    if row[-1] < 0 and (r is None or self.basis[i] < self.basis[r]):
                        r = i
            else:
                worst = _ZERO
                for i, row in enumerate(self.tab):
                    if row[-1] < worst:
                        r, worst = i, row[-1]
            if r is None:
                return
            row = self.tab[r]
            col = None
            best = None
            for j in range(self.width):
                a = row[j]
                if a < 0:
                    ratio = self.obj[j] / a
                    if best is None or ratio < best or (ratio == best and j < col):
                        col, best = j, ratio
            if col is None:
                raise AssertionError("cut made the LP infeasible; rows are inconsistent")
            if self.obj[col] == 0:
                streak += 1
                if streak > _DEGENERATE_STREAK_LIMIT:
                    bland = True
            else:
                streak = 0
            self._pivot(r, col)

    def solution_vector(self) -> list:
        x = [_ZERO] * self.width
        for r, bv in enumerate(self.basis):
            x[bv] = self.tab[r][-1]
        return x


def _to_fraction(v) -> Fraction:
    return Fraction(v.numerator, v.denominator)


def solve_lp(
    lp: LinearProgram,
    feasible_point: Sequence[Fraction] | None = None,
    dense_threshold: int = 2,
    max_new_rows: int = 100,
) -> LpSolution:
    """Solve with lazy constraint activation.

    Rows with at most ``dense_threshold`` nonzeros and all equalities start
    active; after each solve the most violated inactive rows (up to
    ``max_new_rows``) are added.  An unbounded result is only returned when
    the ray violates no inactive row and, if a ``feasible_point`` is given,
    that point satisfies every constraint.
    """
    if feasible_point is not None:
        for row in lp.constraints:
            if not row.satisfied_by(feasible_point):
                raise ValueError("feasible_point violates the constraints")

    active = [
        i for i, r in enumerate(lp.constraints)
        if r.kind == "eq" or len(r.coeffs) <= dense_threshold
    ]
    active_set = set(active)

    def fresh() -> _Simplex:
        s = _Simplex(lp.num_vars, [lp.constraints[i] for i in active])
        s.prepare()
        s.set_objective(list(lp.objective))
        return s

    simplex = fresh()
    while True:
        col = simplex.primal()

        if col is None:
            full = simplex.solution_vector()
            x = [_to_fraction(v) for v in full[: lp.num_vars]]
            violated = []
            for i, r in enumerate(lp.constraints):
                if i in active_set:
                    continue
                v = r.value_at(x)
                if (r.kind == "le" and v > r.rhs) or (r.kind == "eq" and v != r.rhs):
                    violated.append((v - r.rhs if v > r.rhs else r.rhs - v, i))
            if not violated:
                value = _to_fraction(simplex.objective_value())
                return LpSolution("optimal", value, tuple(x), None)
            violated.sort(key=lambda t: (-t[0], t[1]))
            # the basis stays dual feasible at an optimum, so new rows are
            # absorbed by dual pivots instead of a solve from scratch
            for _, i in violated[:max_new_rows]:
                active.append(i)
                active_set.add(i)
                simplex.add_row(lp.constraints[i])
            simplex.dual_restore()
            continue

        ray_cols = simplex.ray_of(col)
        ray = [_to_fraction(v) for v in ray_cols[: lp.num_vars]]
        blockers = []
        for i, r in enumerate(lp.constraints):
            if i in active_set:
                continue
            drift = r.value_at(ray)
            if (r.kind == "le" and drift > 0) or (r.kind == "eq" and drift != 0):
                blockers.append(i)
        if blockers:
            for i in blockers[:max_new_rows]:
                active.append(i)
                active_set.add(i)
                simplex.add_row(lp.constraints[i])
            if simplex.has_negative_rhs():
                # mid-flight the reduced costs are not dual feasible, so a
                # violated new row forces a restart on the enlarged set
                simplex = fresh()
            continue
        if any(v < 0 for v in ray):
            raise AssertionError("unbounded ray leaves the nonnegative orthant")
        if sum(c * v for c, v in zip(lp.objective, ray)) <= 0:
            raise AssertionError("unbounded ray does not improve the objective")
        return LpSolution("unbounded", None, None, tuple(ray))
