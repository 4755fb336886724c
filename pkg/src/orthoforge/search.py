"""Enumerate all orthocomplementations of a finite lattice.

Two independent routes:

  * brute_force_orthos: backtracking over order-reversing disjoint
    involution pairings.  This is the ground-truth oracle and shares no
    machinery with the LP route beyond the lattice itself.
  * lp_orthos: minimize the conjointness trace over the relaxed
    precomplement rows (row sums, symmetry, commutation, nonnegativity)
    and enumerate every integer optimum by exhaustive branch-and-bound.

cross_check runs both, demands identical result sets, and certifies the
polytope-side facts (membership, integrality, vertexhood, trace values)
for every ortho found.
"""

import threading
import time
from collections import deque
from dataclasses import dataclass, field

from .incidence import (
    Q,
    conjointness_trace,
    disjointness_trace,
    lift_permutation,
)
from .polytope import (
    build_polytope,
    is_integer_point,
    is_vertex,
    lift_point,
    membership,
    var_index,
)
from .simplex import (
    DEFAULT_PIVOT_CAP,
    INFEASIBLE,
    OPTIMAL,
    LPProblem,
    PivotLimitExceeded,
    solve,
)

SUPPORTED_SIZE = 20  # larger inputs are accepted with a warning upstream


@dataclass(frozen=True)
class Orthocomplementation:
    sigma: tuple
    involution: bool
    order_reversing: bool
    all_disjoint: bool
    all_conjoint: bool
    disjointness: object  # exact trace value, equals n
    conjointness: object

    def as_label_map(self, lattice):
        return {
            lattice.labels[p]: lattice.labels[self.sigma[p]]
            for p in range(lattice.n)
        }


@dataclass(frozen=True)
class OrthoViolation:
    condition: str  # bijection | involution | order_reversal | disjoint | conjoint
    witness: tuple


@dataclass(frozen=True)
class NonexistenceCertificate:
    kind: str  # "infeasible" or "optimum_above_n"
    optimum: object = None


@dataclass
class SearchStats:
    lp_solves: int = 0
    branch_nodes: int = 0
    elapsed_ms: int = 0


@dataclass
class SearchReport:
    method: str
    orthos: tuple
    nonexistence: NonexistenceCertificate = None
    stats: SearchStats = field(default_factory=SearchStats)


class CrossCheckError(AssertionError):
    """The two search routes disagree, or a polytope certificate failed."""


class SearchAborted(RuntimeError):
    """Pivot cap hit during branch-and-bound; carries partial statistics."""

    def __init__(self, stats):
        super().__init__(
            "search aborted by pivot cap after %d LP solves" % stats.lp_solves
        )
        self.stats = stats


def verify_ortho(lattice, sigma):
    """Certify sigma, or report the first violated condition with a witness."""
    n = lattice.n
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(n)):
        return OrthoViolation("bijection", (sigma,))
    for p in range(n):
        if sigma[sigma[p]] != p:
            return OrthoViolation("involution", (lattice.labels[p],))
    for p in range(n):
        if lattice.meet(p, sigma[p]) != lattice.bottom:
            return OrthoViolation("disjoint", (lattice.labels[p],))
    for p in range(n):
        if lattice.join(p, sigma[p]) != lattice.top:
            return OrthoViolation("conjoint", (lattice.labels[p],))
    for p in range(n):
        for q in range(n):
            if lattice.leq[p][q] and not lattice.leq[sigma[q]][sigma[p]]:
                return OrthoViolation(
                    "order_reversal", (lattice.labels[p], lattice.labels[q])
                )

    lifted = lift_permutation(n, sigma)
    dis = disjointness_trace(lattice, lifted)
    con = conjointness_trace(lattice, lifted)
    return Orthocomplementation(
        sigma=sigma,
        involution=True,
        order_reversing=True,
        all_disjoint=True,
        all_conjoint=True,
        disjointness=dis,
        conjointness=con,
    )


def brute_force_orthos(lattice):
    """Backtracking oracle over involution pairings.

    Prunes on involution structure, order reversal against already
    assigned pairs, and disjointness.  Conjointness is deliberately not
    used for pruning; verify_ortho confirms it afterwards on every
    completed involution.
    """
    start = time.monotonic()
    n = lattice.n
    leq = lattice.leq
    sigma = [None] * n
    found = []
    stats = SearchStats()

    def compatible(p, q):
        # sigma(p) = q against everything already assigned
        if lattice.meet(p, q) != lattice.bottom:
            return False
        for r in range(n):
            s = sigma[r]
            if s is None:
                continue
            for a, b in ((p, q), (q, p)):
                if leq[r][a] and not leq[b][s]:
                    return False
                if leq[a][r] and not leq[s][b]:
                    return False
        return True

    def extend():
        p = next((i for i in range(n) if sigma[i] is None), None)
        if p is None:
            cert = verify_ortho(lattice, tuple(sigma))
            if isinstance(cert, Orthocomplementation):
                found.append(cert)
            return
        for q in range(p, n):
            if q != p and sigma[q] is not None:
                continue
            stats.branch_nodes += 1
            if not compatible(p, q):
                continue
            sigma[p], sigma[q] = q, p
            extend()
            sigma[p] = sigma[q] = None

    extend()
    found.sort(key=lambda o: o.sigma)
    stats.elapsed_ms = int((time.monotonic() - start) * 1000)
    return SearchReport(method="brute", orthos=tuple(found), stats=stats)


def build_search_lp(lattice, objective="conjoint"):
    """The relaxation rows (no trace row) with the chosen trace objective."""
    system = build_polytope(lattice)
    rows = [
        (dict(terms), rhs)
        for terms, rhs in system.row_sums + system.symmetry + system.commutation
    ]
    if objective == "conjoint":
        costs = list(system.cu)
    elif objective == "disjoint":
        costs = list(system.cl)
    else:
        raise ValueError("objective must be 'conjoint' or 'disjoint'")
    return LPProblem(num_vars=system.num_vars, costs=costs, rows=rows)


def _propagate(n, frozen):
    """Close a partial 0/1 assignment under row-sum and symmetry logic.

    Returns the closed assignment, or None on conflict.  Setting
    x_{pq} = 1 zeroes the rest of rows p and q (and mirrors); a row with
    all but one entry zero forces the survivor to 1.
    """
    frozen = dict(frozen)

    def put(v, val):
        old = frozen.get(v)
        if old is not None:
            return old == val
        frozen[v] = val
        return True

    changed = True
    while changed:
        changed = False
        for p in range(n):
            ones = [
                q for q in range(n) if frozen.get(var_index(n, p, q)) == 1
            ]
            if len(ones) > 1:
                return None
            if ones:
                q = ones[0]
                for r in range(n):
                    for v in (
                        (var_index(n, p, r), var_index(n, r, p))
                        if r != q
                        else ()
                    ):
                        if frozen.get(v) is None:
                            frozen[v] = 0
                            changed = True
                        elif frozen[v] != 0:
                            return None
                    if r != p:
                        for v in (var_index(n, q, r), var_index(n, r, q)):
                            if frozen.get(v) is None:
                                frozen[v] = 0
                                changed = True
                            elif frozen[v] != 0:
                                return None
                if not put(var_index(n, q, p), 1):
                    return None
            else:
                open_cols = [
                    q
                    for q in range(n)
                    if frozen.get(var_index(n, p, q)) is None
                ]
                if not open_cols:
                    return None  # full row of zeros contradicts the row sum
                if len(open_cols) == 1:
                    q = open_cols[0]
                    for v in (var_index(n, p, q), var_index(n, q, p)):
                        if not put(v, 1):
                            return None
                    changed = True
    return frozen


def lp_orthos(lattice, objective="conjoint", workers=1, pivot_cap=DEFAULT_PIVOT_CAP):
    """Enumerate all integer optima of the trace-minimization LP.

    The root relaxation certifies nonexistence when infeasible or when
    its optimum exceeds n.  Otherwise binary branch-and-bound on the
    most fractional coordinate (symmetric partner frozen identically)
    explores the whole tree; only nodes with optimum > n or infeasible
    are pruned, so every optimal integer point is collected.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    start = time.monotonic()
    n = lattice.n
    problem = build_search_lp(lattice, objective)
    stats = SearchStats()
    found = {}
    lock = threading.Lock()
    cond = threading.Condition(lock)
    pending = deque()
    state = {"active": 0, "error": None}

    def solve_node(frozen):
        with lock:
            stats.lp_solves += 1
            stats.branch_nodes += 1
        return solve(
            LPProblem(
                num_vars=problem.num_vars,
                costs=problem.costs,
                rows=problem.rows,
                frozen=frozen,
            ),
            pivot_cap=pivot_cap,
        )

    def process(frozen, sol):
        """Record/branch one node; returns the child assignments."""
        if sol.status == INFEASIBLE:
            return []
        if sol.status != OPTIMAL:
            raise RuntimeError("unexpected LP status %r" % sol.status)
        if sol.value > n:
            return []
        if sol.value < n:
            raise RuntimeError("relaxation broke the objective floor")

        x = sol.x
        fractional = [
            v
            for v in range(n * n)
            if v not in frozen and x[v] != 0 and x[v] != 1
        ]
        if not fractional:
            sigma = tuple(
                next(q for q in range(n) if x[var_index(n, p, q)] == 1)
                for p in range(n)
            )
            cert = verify_ortho(lattice, sigma)
            if not isinstance(cert, Orthocomplementation):
                raise RuntimeError(
                    "integral optimum failed verification: %r" % (cert,)
                )
            with lock:
                found[sigma] = cert
            undecided = [
                p
                for p in range(n)
                if not any(
                    frozen.get(var_index(n, p, q)) == 1 for q in range(n)
                )
            ]
            if not undecided:
                return []
            p = undecided[0]
            branch = var_index(n, p, sigma[p])
        else:
            # most fractional, ties by lowest variable index
            def dist(v):
                f = x[v]
                return min(f, 1 - f) if f < 1 else Q(-1)

            branch = max(fractional, key=lambda v: (dist(v), -v))

        p, q = divmod(branch, n)
        mirror = var_index(n, q, p)
        children = []
        one = _propagate(n, {**frozen, branch: 1, mirror: 1})
        if one is not None:
            children.append(one)
        zero = _propagate(n, {**frozen, branch: 0, mirror: 0})
        if zero is not None:
            children.append(zero)
        return children

    # Root first: it owns the nonexistence certificate.
    try:
        root_sol = solve_node({})
    except PivotLimitExceeded:
        stats.elapsed_ms = int((time.monotonic() - start) * 1000)
        raise SearchAborted(stats)
    certificate = None
    if root_sol.status == INFEASIBLE:
        certificate = NonexistenceCertificate(kind="infeasible")
    elif root_sol.value > n:
        certificate = NonexistenceCertificate(
            kind="optimum_above_n", optimum=root_sol.value
        )
    if certificate is None:
        pending.extend(process({}, root_sol))

        def worker():
            while True:
                with cond:
                    while not pending and state["active"] and not state["error"]:
                        cond.wait()
                    if state["error"] or (not pending and not state["active"]):
                        cond.notify_all()
                        return
                    frozen = pending.popleft()
                    state["active"] += 1
                try:
                    sol = solve_node(frozen)
                    children = process(frozen, sol)
                except BaseException as exc:
                    with cond:
                        state["error"] = exc
                        state["active"] -= 1
                        cond.notify_all()
                    return
                with cond:
                    pending.extend(children)
                    state["active"] -= 1
                    cond.notify_all()

        if workers == 1:
            worker()
        else:
            threads = [
                threading.Thread(target=worker) for _ in range(workers)
            ]
            for t in threads:
                t.start()
            for t in threads:
                t.join()
        if state["error"] is not None:
            stats.elapsed_ms = int((time.monotonic() - start) * 1000)
            if isinstance(state["error"], PivotLimitExceeded):
                raise SearchAborted(stats)
            raise state["error"]

    orthos = tuple(found[s] for s in sorted(found))
    stats.elapsed_ms = int((time.monotonic() - start) * 1000)
    return SearchReport(
        method="lp", orthos=orthos, nonexistence=certificate, stats=stats
    )


def cross_check(lattice, objective="conjoint", workers=1, pivot_cap=DEFAULT_PIVOT_CAP):
    """Run both routes and certify every claim the theory makes about them."""
    brute = brute_force_orthos(lattice)
    lp = lp_orthos(
        lattice, objective=objective, workers=workers, pivot_cap=pivot_cap
    )

    brute_sigmas = [o.sigma for o in brute.orthos]
    lp_sigmas = [o.sigma for o in lp.orthos]
    if brute_sigmas != lp_sigmas:
        extra = set(lp_sigmas) ^ set(brute_sigmas)
        raise CrossCheckError(
            "method disagreement, witness sigma %r" % (sorted(extra)[0],)
        )
    if lp.nonexistence is not None and brute.orthos:
        raise CrossCheckError(
            "LP claims nonexistence but the oracle found %d orthos"
            % len(brute.orthos)
        )

    n = lattice.n
    system = build_polytope(lattice)
    points = []
    for ortho in brute.orthos:
        point = lift_point(n, ortho.sigma)
        report = membership(system, point)
        if not report.ok:
            raise CrossCheckError(
                "lifted ortho not a member, witness %r" % (report.witness,)
            )
        integral, sigma = is_integer_point(system, point)
        if not integral or sigma != ortho.sigma:
            raise CrossCheckError("lifted ortho not integral: %r" % (sigma,))
        if not is_vertex(system, point):
            raise CrossCheckError(
                "lifted ortho is not a vertex: %r" % (ortho.sigma,)
            )
        if ortho.disjointness != n or ortho.conjointness != n:
            raise CrossCheckError(
                "trace values off n for %r" % (ortho.sigma,)
            )
        points.append(point)

    # Midpoints of distinct orthos: members, fractional, not vertices.
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            mid = [(a + b) / 2 for a, b in zip(points[i], points[j])]
            report = membership(system, mid)
            if not report.ok:
                raise CrossCheckError("midpoint left the polytope")
            integral, _ = is_integer_point(system, mid)
            if integral:
                raise CrossCheckError("midpoint of distinct orthos integral")
            if is_vertex(system, mid):
                raise CrossCheckError("midpoint passed the vertex test")

    return {"brute": brute, "lp": lp, "count": len(brute.orthos)}
