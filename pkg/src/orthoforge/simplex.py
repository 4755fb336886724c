"""Exact rational linear programming.

Minimizes a linear objective subject to equality rows and nonnegativity
on all variables, over arbitrary-precision rationals.  Two-phase dense
simplex with Bland's anti-cycling rule, so termination is guaranteed and
every returned point satisfies its constraints with literally zero
residual.

A deterministic presolve keeps desk-scale instances fast:

  * frozen variables are substituted out (branch-and-bound support);
  * two-variable rows of the shape x_i - x_j = 0 merge the variables
    (union-find), which collapses the symmetry block of the
    precomplement systems;
  * zero rows and exact duplicate rows are dropped.

None of these steps changes the feasible set.  When a dual certificate
is requested the alias merge is skipped so that the certificate maps
one-to-one onto the input rows.
"""

import time
from dataclasses import dataclass, field

from .incidence import Q

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

DEFAULT_PIVOT_CAP = 1_000_000


class PivotLimitExceeded(RuntimeError):
    """Raised when a solve exceeds the configured pivot cap."""

    def __init__(self, pivots):
        super().__init__("pivot cap exceeded after %d pivots" % pivots)
        self.pivots = pivots


@dataclass
class LPProblem:
    num_vars: int
    costs: list  # length num_vars
    rows: list  # (dict var -> coefficient, rhs)
    frozen: dict = None  # var -> value, substituted before solving


@dataclass
class LPSolution:
    status: str
    x: list = None
    value: object = None
    pivots: int = 0
    dual: list = None  # one multiplier per input row, when requested


def solve(problem, pivot_cap=DEFAULT_PIVOT_CAP, want_dual=False):
    """Solve min costs.x over the equality rows with x >= 0."""
    n = problem.num_vars
    frozen = dict(problem.frozen or {})
    for v, val in frozen.items():
        if not 0 <= v < n:
            raise ValueError("frozen variable %d out of range" % v)
        if val < 0:
            raise ValueError("frozen value for variable %d is negative" % v)

    # Substitute frozen variables; rows become (dict over free vars, rhs).
    rows = []
    for coef, rhs in problem.rows:
        c = {}
        r = Q(rhs)
        for v, a in coef.items():
            if a == 0:
                continue
            if v in frozen:
                r -= Q(a) * Q(frozen[v])
            else:
                c[v] = c.get(v, Q(0)) + Q(a)
        rows.append(({v: a for v, a in c.items() if a != 0}, r))

    # Alias merge: x_i - x_j = 0 identifies the two variables.
    parent = {}

    def find(v):
        root = v
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(v, v) != v:
            parent[v], v = root, parent[v]
        return root

    alias_rows = []  # (row_index, kept_var, merged_var) in merge order
    if not want_dual:
        changed = True
        while changed:
            changed = False
            for ri, (coef, rhs) in enumerate(rows):
                if rhs != 0 or len(coef) != 2:
                    continue
                (v1, a1), (v2, a2) = sorted(coef.items())
                if a1 != -a2:
                    continue
                r1, r2 = find(v1), find(v2)
                if r1 == r2:
                    continue
                keep, merge = min(r1, r2), max(r1, r2)
                parent[merge] = keep
                alias_rows.append((ri, keep, merge))
                changed = True
            if changed:
                rows = [_remap(coef, rhs, find) for coef, rhs in rows]

    free = sorted(
        v for v in range(n) if v not in frozen and find(v) == v
    )
    col_of = {v: j for j, v in enumerate(free)}
    k = len(free)

    costs = [Q(0)] * k
    for v in range(n):
        if v in frozen:
            continue
        costs[col_of[find(v)]] += Q(problem.costs[v])

    # Classify rows: keep, drop zero rows, dedupe exact duplicates.
    kept = []  # (original_index, dense_row, rhs, sign)
    seen = {}
    for ri, (coef, rhs) in enumerate(rows):
        if not coef:
            if rhs != 0:
                return LPSolution(status=INFEASIBLE)
            continue
        lead = coef[min(coef)]
        key = (
            tuple(sorted((v, a / lead) for v, a in coef.items())),
            rhs / lead,
        )
        if key in seen:
            continue
        seen[key] = ri
        dense = [Q(0)] * k
        for v, a in coef.items():
            dense[col_of[v]] = a
        sign = 1
        if rhs < 0:
            dense = [-a for a in dense]
            rhs = -rhs
            sign = -1
        kept.append((ri, dense, rhs, sign))

    core = _SimplexCore(
        [row for _, row, _, _ in kept],
        [rhs for _, _, rhs, _ in kept],
        costs,
        pivot_cap,
    )
    status = core.run()
    if status == INFEASIBLE:
        return LPSolution(status=INFEASIBLE, pivots=core.pivots)
    if status == UNBOUNDED:
        return LPSolution(status=UNBOUNDED, pivots=core.pivots)

    x = [Q(0)] * n
    for v, val in frozen.items():
        x[v] = Q(val)
    xr = core.solution()
    for v in range(n):
        if v not in frozen:
            x[v] = xr[col_of[find(v)]]
    value = sum((Q(problem.costs[v]) * x[v] for v in range(n)), Q(0))

    dual = None
    if want_dual:
        dual = [Q(0)] * len(problem.rows)
        yr = core.dual()
        for (ri, _row, _rhs, sign), y in zip(
            (kept[i] for i in core.kept_row_order()), yr
        ):
            dual[ri] = sign * y

    return LPSolution(status=OPTIMAL, x=x, value=value, pivots=core.pivots, dual=dual)


def solve_with_frozen(problem, assignments, pivot_cap=DEFAULT_PIVOT_CAP, want_dual=False):
    """Solve with extra variable fixings layered over the problem's own."""
    frozen = dict(problem.frozen or {})
    frozen.update(assignments)
    return solve(
        LPProblem(problem.num_vars, problem.costs, problem.rows, frozen=frozen),
        pivot_cap=pivot_cap,
        want_dual=want_dual,
    )


def verify_dual_certificate(problem, sol):
    """Weak-duality check: the returned row combination proves the bound.

    Requires sum_k y_k row_k <= costs on every non-frozen variable and
    sum_k y_k rhs_k, plus the frozen cost contribution, equal to the
    optimal value.  All comparisons exact.
    """
    if sol.status != OPTIMAL or sol.dual is None:
        return False
    frozen = dict(problem.frozen or {})
    reduced = [Q(0)] * problem.num_vars
    bound = Q(0)
    for y, (coef, rhs) in zip(sol.dual, problem.rows):
        if y == 0:
            continue
        bound += y * Q(rhs)
        for v, a in coef.items():
            reduced[v] += y * Q(a)
            if v in frozen:
                bound -= y * Q(a) * Q(frozen[v])
    for v in range(problem.num_vars):
        if v in frozen:
            bound += Q(problem.costs[v]) * Q(frozen[v])
        elif reduced[v] > Q(problem.costs[v]):
            return False
    return bound == sol.value


def _remap(coef, rhs, find):
    c = {}
    for v, a in coef.items():
        r = find(v)
        c[r] = c.get(r, Q(0)) + a
    return ({v: a for v, a in c.items() if a != 0}, rhs)


class _SimplexCore:
    """Dense two-phase tableau simplex under Bland's rule."""

    def __init__(self, rows, rhs, costs, pivot_cap):
        self.m = len(rows)
        self.k = len(costs)
        self.costs = costs
        self.pivot_cap = pivot_cap
        self.pivots = 0
        self.orig_rows = [list(r) for r in rows]
        self.orig_rhs = list(rhs)
        # tableau: k structural columns, m artificial columns, rhs
        self.T = [
            rows[i] + [Q(1) if j == i else Q(0) for j in range(self.m)] + [rhs[i]]
            for i in range(self.m)
        ]
        self.basis = [self.k + i for i in range(self.m)]
        self.row_ids = list(range(self.m))  # surviving original row order

    def run(self):
        if self.m == 0:
            if any(c < 0 for c in self.costs):
                return UNBOUNDED
            self._x = [Q(0)] * self.k
            return OPTIMAL

        # Phase 1: minimize the artificial sum.
        obj = [Q(0)] * (self.k + self.m + 1)
        for row in self.T:
            for j in range(self.k):
                obj[j] -= row[j]
            obj[-1] -= row[-1]
        status = self._iterate(obj, range(self.k + self.m))
        if status == UNBOUNDED:  # cannot happen: phase-1 objective >= 0
            raise RuntimeError("phase-1 unbounded")
        if obj[-1] != 0:
            return INFEASIBLE

        self._drive_out_artificials()

        # Phase 2 over structural columns only.
        obj = [Q(0)] * (self.k + self.m + 1)
        for j in range(self.k):
            obj[j] = self.costs[j]
        for i, b in enumerate(self.basis):
            cb = self.costs[b]  # artificials are gone from the basis
            if cb == 0:
                continue
            row = self.T[i]
            for j in range(self.k):
                obj[j] -= cb * row[j]
            obj[-1] -= cb * row[-1]
        status = self._iterate(obj, range(self.k))
        if status == UNBOUNDED:
            return UNBOUNDED
        self._x = [Q(0)] * self.k
        for i, b in enumerate(self.basis):
            self._x[b] = self.T[i][-1]
        return OPTIMAL

    def solution(self):
        return self._x

    def kept_row_order(self):
        return self.row_ids

    def dual(self):
        """Multipliers for the surviving rows from the optimal basis."""
        m = len(self.T)
        cols = [self.orig_rows[self.row_ids[i]] for i in range(m)]
        # Solve B^T y = c_B where B columns are the basic structural vars.
        mat = [
            [cols[i][self.basis[r]] for i in range(m)] + [self.costs[self.basis[r]]]
            for r in range(m)
        ]
        return _gauss_solve(mat)

    def _iterate(self, obj, allowed):
        while True:
            enter = None
            for j in allowed:
                if obj[j] < 0:
                    enter = j
                    break
            if enter is None:
                return OPTIMAL
            leave = None
            best = None
            for i, row in enumerate(self.T):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[i] < self.basis[leave])
                    ):
                        best = ratio
                        leave = i
            if leave is None:
                return UNBOUNDED
            self._pivot(leave, enter, obj)

    def _pivot(self, i, j, obj):
        self.pivots += 1
        if self.pivots > self.pivot_cap:
            raise PivotLimitExceeded(self.pivots)
        prow = self.T[i]
        piv = prow[j]
        if piv != 1:
            inv = 1 / piv
            self.T[i] = prow = [a * inv for a in prow]
        for r, row in enumerate(self.T):
            if r == i:
                continue
            f = row[j]
            if f != 0:
                self.T[r] = [a - f * b for a, b in zip(row, prow)]
        f = obj[j]
        if f != 0:
            for t in range(len(obj)):
                obj[t] -= f * prow[t]
        self.basis[i] = j

    def _drive_out_artificials(self):
        drop = []
        for i in range(len(self.T)):
            if self.basis[i] < self.k:
                continue
            row = self.T[i]
            j = next((c for c in range(self.k) if row[c] != 0), None)
            if j is None:
                drop.append(i)  # redundant original row
            else:
                self._pivot(i, j, [Q(0)] * (self.k + self.m + 1))
        for i in reversed(drop):
            del self.T[i]
            del self.basis[i]
            del self.row_ids[i]


def _gauss_solve(aug):
    """Solve a square rational system given as augmented rows (in place)."""
    m = len(aug)
    for col in range(m):
        piv = next(r for r in range(col, m) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [a * inv for a in aug[col]]
        for r in range(m):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][-1] for r in range(m)]
