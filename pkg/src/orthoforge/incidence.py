"""Exact linear algebra over the delta basis of a finite poset.

All values are arbitrary-precision rationals (gmpy2.mpq when available,
fractions.Fraction otherwise).  Nothing in this module ever touches a
float.  Matrices are plain nested tuples/lists indexed by element index;
row p, column q of the zeta matrix is 1 iff p <= q.
"""

from functools import lru_cache

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - gmpy2 is normally present
    from fractions import Fraction as Q


def rat_str(x):
    """Serialize exactly: "num/den", or plain integer string when den == 1."""
    return str(x)


def parse_rat(s):
    if "/" in s:
        num, den = s.split("/")
        return Q(int(num), int(den))
    return Q(int(s))


def delta(n, p):
    v = [Q(0)] * n
    v[p] = Q(1)
    return v


def unit_vector(n):
    """The algebra unit: sum of all delta functions."""
    return [Q(1)] * n


def pointwise_product(f, g):
    if len(f) != len(g):
        raise ValueError("dimension mismatch: %d vs %d" % (len(f), len(g)))
    return [a * b for a, b in zip(f, g)]


def mat_vec(m, v):
    if any(len(row) != len(v) for row in m):
        raise ValueError("dimension mismatch")
    return [sum((a * b for a, b in zip(row, v)), Q(0)) for row in m]


def mat_mul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def transpose(m):
    return [list(row) for row in zip(*m)]


@lru_cache(maxsize=None)
def zeta_matrix(poset):
    """Incidence matrix of the order: entry (p, q) = 1 iff p <= q."""
    return tuple(
        tuple(1 if poset.leq[p][q] else 0 for q in range(poset.n))
        for p in range(poset.n)
    )


@lru_cache(maxsize=None)
def moebius_matrix(poset):
    """Exact inverse of zeta via the triangular recursion.

    mu(p, p) = 1 and mu(p, q) = -sum of mu(p, r) over p <= r < q; entries
    outside the order are 0.  The result is integer-valued.  The inverse
    identity is re-verified by exact multiplication; failure would be an
    internal bug, not a data error.
    """
    n = poset.n
    pos = poset.position()
    mu = [[0] * n for _ in range(n)]
    for a in range(n):
        mu[a][a] = 1
        above = sorted(
            (b for b in range(n) if poset.leq[a][b] and b != a),
            key=lambda b: pos[b],
        )
        for b in above:
            mu[a][b] = -sum(
                mu[a][r]
                for r in range(n)
                if poset.leq[a][r] and poset.leq[r][b] and r != b
            )
    zeta = zeta_matrix(poset)
    prod = mat_mul(mu, zeta)
    for i in range(n):
        for j in range(n):
            if prod[i][j] != (1 if i == j else 0):
                raise RuntimeError("moebius inversion identity failed")
    return tuple(tuple(row) for row in mu)


def lift_permutation(n, sigma):
    """Matrix of the operator sending delta_p to delta_{sigma(p)}.

    Column p carries the image of the p-th basis vector, so entry (q, p)
    is 1 iff q == sigma(p).
    """
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(n)):
        raise ValueError("not a bijection on 0..%d: %r" % (n - 1, sigma))
    return [[1 if q == sigma[p] else 0 for p in range(n)] for q in range(n)]


@lru_cache(maxsize=None)
def common_lower_counts(poset):
    """cl(p, q) = number of common lower bounds of p and q."""
    n, leq = poset.n, poset.leq
    return tuple(
        tuple(
            sum(1 for r in range(n) if leq[r][p] and leq[r][q])
            for q in range(n)
        )
        for p in range(n)
    )


@lru_cache(maxsize=None)
def common_upper_counts(poset):
    """cu(p, q) = number of common upper bounds of p and q."""
    n, leq = poset.n, poset.leq
    return tuple(
        tuple(
            sum(1 for r in range(n) if leq[p][r] and leq[q][r])
            for q in range(n)
        )
        for p in range(n)
    )


def _trace(m):
    return sum((m[i][i] for i in range(len(m))), Q(0))


def disjointness_trace(poset, m):
    """trace(zeta^T zeta m), the common-lower-bound weighted coordinate sum."""
    _check_square(poset, m)
    zeta = zeta_matrix(poset)
    gram = mat_mul(transpose(zeta), zeta)
    return _trace(mat_mul(gram, m))


def conjointness_trace(poset, m):
    """trace(zeta zeta^T m), the common-upper-bound weighted coordinate sum."""
    _check_square(poset, m)
    zeta = zeta_matrix(poset)
    gram = mat_mul(zeta, transpose(zeta))
    return _trace(mat_mul(gram, m))


def _check_square(poset, m):
    if len(m) != poset.n or any(len(row) != poset.n for row in m):
        raise ValueError("matrix dimension does not match the poset")


def linearized_meet(poset, f, g):
    """Meet lifted to the whole linear hull: mu((zeta f) . (zeta g)).

    On a lattice this sends delta_p, delta_q to delta of their meet; on a
    general poset the result is a weighted sum of elements.
    """
    if len(f) != poset.n or len(g) != poset.n:
        raise ValueError("vector dimension does not match the poset")
    zeta = zeta_matrix(poset)
    mu = moebius_matrix(poset)
    return mat_vec(mu, pointwise_product(mat_vec(zeta, f), mat_vec(zeta, g)))


def linearized_join(poset, f, g):
    """The order dual of linearized_meet, via transposed zeta and mu."""
    if len(f) != poset.n or len(g) != poset.n:
        raise ValueError("vector dimension does not match the poset")
    zt = transpose(zeta_matrix(poset))
    mt = transpose(moebius_matrix(poset))
    return mat_vec(mt, pointwise_product(mat_vec(zt, f), mat_vec(zt, g)))
