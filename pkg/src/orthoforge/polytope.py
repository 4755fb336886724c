"""The polytope of precomplements as an explicit exact constraint system.

Variables are x_{pq} for every ordered pair of elements, flattened
row-major (index p*n + q).  Four equality families plus nonnegativity:

  symmetry     x_{pq} - x_{qp} = 0            for p < q
  row sums     sum_q x_{pq} = 1               for each p
  commutation  sum_{r<=q} x_{pr} - sum_{r<=p} x_{rq} = 0   for each (p, q)
  trace        sum_{p,q} cl(p,q) x_{pq} = n

where cl counts common lower bounds.  All coefficients are integers.
Redundant rows are kept on purpose: the system reads off line-for-line
against its defining conditions, and the LP engine absorbs rank
deficiency.
"""

from dataclasses import dataclass

from .incidence import Q, common_lower_counts, common_upper_counts

# A row is (terms, rhs) with terms a tuple of (var_index, int_coefficient).


@dataclass(frozen=True)
class ConstraintSystem:
    n: int
    num_vars: int
    symmetry: tuple
    row_sums: tuple
    commutation: tuple
    trace: tuple  # single row
    cl: tuple  # flattened common-lower-bound counts (cost vector)
    cu: tuple  # flattened common-upper-bound counts (cost vector)

    def families(self):
        return (
            ("symmetry", self.symmetry),
            ("row_sum", self.row_sums),
            ("commutation", self.commutation),
            ("trace", (self.trace,)),
        )

    def all_rows(self):
        return self.symmetry + self.row_sums + self.commutation + (self.trace,)


@dataclass(frozen=True)
class MembershipReport:
    ok: bool
    family_ok: dict
    witness: tuple = None  # (family, row_or_var, lhs, rhs) for first violation


def var_index(n, p, q):
    return p * n + q


def build_polytope(poset):
    """Materialize the constraint system for any validated poset.

    The trace row counts common lower bounds directly over leq, so the
    construction does not require meet/join tables.
    """
    n = poset.n
    leq = poset.leq
    cl = common_lower_counts(poset)
    cu = common_upper_counts(poset)

    symmetry = tuple(
        (((var_index(n, p, q), 1), (var_index(n, q, p), -1)), 0)
        for p in range(n)
        for q in range(p + 1, n)
    )
    row_sums = tuple(
        (tuple((var_index(n, p, q), 1) for q in range(n)), 1) for p in range(n)
    )

    commutation = []
    for p in range(n):
        for q in range(n):
            coef = {}
            for r in range(n):
                if leq[r][q]:
                    v = var_index(n, p, r)
                    coef[v] = coef.get(v, 0) + 1
                if leq[r][p]:
                    v = var_index(n, r, q)
                    coef[v] = coef.get(v, 0) - 1
            terms = tuple(
                (v, c) for v, c in sorted(coef.items()) if c != 0
            )
            commutation.append((terms, 0))

    trace = (
        tuple(
            (var_index(n, p, q), cl[p][q])
            for p in range(n)
            for q in range(n)
        ),
        n,
    )

    return ConstraintSystem(
        n=n,
        num_vars=n * n,
        symmetry=symmetry,
        row_sums=row_sums,
        commutation=tuple(commutation),
        trace=trace,
        cl=tuple(cl[p][q] for p in range(n) for q in range(n)),
        cu=tuple(cu[p][q] for p in range(n) for q in range(n)),
    )


def lift_point(n, sigma):
    """Flatten the matrix of a lifted permutation into polytope coordinates."""
    coords = [Q(0)] * (n * n)
    for p in range(n):
        coords[var_index(n, p, sigma[p])] = Q(1)
    return coords


def membership(system, point):
    """Check every constraint family; report the first violated row."""
    if len(point) != system.num_vars:
        raise ValueError(
            "point has %d coordinates, system has %d variables"
            % (len(point), system.num_vars)
        )
    family_ok = {}
    witness = None

    neg = next((i for i, v in enumerate(point) if v < 0), None)
    family_ok["nonneg"] = neg is None
    if neg is not None and witness is None:
        witness = ("nonneg", neg, point[neg], 0)

    for name, rows in system.families():
        ok = True
        for i, (terms, rhs) in enumerate(rows):
            lhs = sum((point[v] * c for v, c in terms), Q(0))
            if lhs != rhs:
                ok = False
                if witness is None:
                    witness = (name, i, lhs, rhs)
                break
        family_ok[name] = ok

    return MembershipReport(
        ok=all(family_ok.values()), family_ok=family_ok, witness=witness
    )


def is_integer_point(system, point):
    """True iff every coordinate is 0 or 1; extracts the involution if so.

    Precondition: the point is a member of the system.  Integral members
    are permutation matrices (forced by row sums), and symmetric
    permutation matrices are involutions; anything else trips a bug trap.
    """
    n = system.n
    if any(v != 0 and v != 1 for v in point):
        return False, None
    sigma = []
    for p in range(n):
        ones = [q for q in range(n) if point[var_index(n, p, q)] == 1]
        if len(ones) != 1:
            raise RuntimeError("integral member is not a permutation matrix")
    for p in range(n):
        sigma.append(
            next(q for q in range(n) if point[var_index(n, p, q)] == 1)
        )
    if any(sigma[sigma[p]] != p for p in range(n)):
        raise RuntimeError("integral member is not an involution")
    return True, tuple(sigma)


def integer_rank(rows):
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    mat = [list(r) for r in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot = next(
            (r for r in range(rank, len(mat)) if mat[r][col] != 0), None
        )
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        piv = mat[rank][col]
        for r in range(rank + 1, len(mat)):
            f = mat[r][col]
            if f == 0 and prev == 1:
                continue
            row = mat[r]
            prow = mat[rank]
            mat[r] = [
                (piv * row[j] - f * prow[j]) // prev for j in range(ncols)
            ]
        prev = piv
        rank += 1
    return rank


def is_vertex(system, point):
    """Exact extreme-point test by active-constraint rank.

    A member is a vertex iff no nonzero direction stays inside all
    equality rows while vanishing on the zero coordinates, i.e. iff the
    equality matrix restricted to the support columns has full column
    rank.
    """
    support = [i for i, v in enumerate(point) if v != 0]
    if not support:
        return True
    rows = []
    for terms, _rhs in system.all_rows():
        coef = dict(terms)
        rows.append([coef.get(i, 0) for i in support])
    return integer_rank(rows) == len(support)
