"""Finite posets and lattices built from cover relations.

A poset is described by an ordered list of element labels and a list of
cover pairs (lower, upper).  The element order in the input is significant:
it fixes the tie-break of the linear extension, which in turn fixes every
matrix and every downstream output bit-for-bit.
"""

import json
import os
from dataclasses import dataclass


class PosetParseError(ValueError):
    """Malformed input: bad document, unknown label, duplicate element, cycle."""


class NotALatticeError(ValueError):
    """The poset is valid but fails a lattice axiom."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NoBottomError(NotALatticeError):
    pass


class NoTopError(NotALatticeError):
    pass


@dataclass(frozen=True)
class PosetSpec:
    """Normalized description: distinct labels plus an irredundant cover set."""

    elements: tuple
    covers: tuple  # (lower_label, upper_label) pairs, transitively reduced
    warnings: tuple = ()


@dataclass(frozen=True)
class Poset:
    n: int
    labels: tuple
    leq: tuple  # leq[p][q] is True iff p <= q
    covers: tuple  # index pairs (lower, upper)
    extension: tuple  # permutation of indices, a linear extension

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise PosetParseError("unknown element label: %r" % (label,))

    def position(self):
        """Map index -> position in the linear extension."""
        pos = [0] * self.n
        for i, p in enumerate(self.extension):
            pos[p] = i
        return pos


@dataclass(frozen=True)
class Lattice(Poset):
    meet_table: tuple = ()
    join_table: tuple = ()
    bottom: int = 0
    top: int = 0

    def meet(self, p, q):
        return self.meet_table[p][q]

    def join(self, p, q):
        return self.join_table[p][q]


def _normalize(elements, raw_covers):
    """Validate labels, drop duplicate and transitively implied covers.

    Returns (covers_as_index_pairs, warnings).  Raises PosetParseError on
    unknown labels, self-loops, or cycles.
    """
    index = {lab: i for i, lab in enumerate(elements)}
    warnings = []
    seen = set()
    covers = []
    for low, high in raw_covers:
        if low not in index:
            raise PosetParseError("unknown element label in cover: %r" % (low,))
        if high not in index:
            raise PosetParseError("unknown element label in cover: %r" % (high,))
        pair = (index[low], index[high])
        if pair[0] == pair[1]:
            raise PosetParseError("cover %r -> %r is a cycle" % (low, high))
        if pair in seen:
            warnings.append("duplicate cover (%s, %s) dropped" % (low, high))
            continue
        seen.add(pair)
        covers.append(pair)

    n = len(elements)
    succ = [[] for _ in range(n)]
    for a, b in covers:
        succ[a].append(b)

    # Cycle check via iterative DFS coloring.
    color = [0] * n  # 0 unvisited, 1 on stack, 2 done
    for root in range(n):
        if color[root]:
            continue
        stack = [(root, iter(succ[root]))]
        color[root] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == 1:
                    raise PosetParseError(
                        "cycle in covers through %r" % (elements[nxt],)
                    )
                if color[nxt] == 0:
                    color[nxt] = 1
                    stack.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = 2
                stack.pop()

    # Transitive reduction: a cover (a, b) is redundant when b is reachable
    # from a along a path of length >= 2.
    def reachable(src, dst, skip):
        pending = [src]
        hit = set()
        while pending:
            cur = pending.pop()
            for nxt in succ[cur]:
                if (cur, nxt) == skip:
                    continue
                if nxt == dst:
                    return True
                if nxt not in hit:
                    hit.add(nxt)
                    pending.append(nxt)
        return False

    reduced = []
    for a, b in covers:
        if reachable(a, b, skip=(a, b)):
            warnings.append(
                "redundant cover (%s, %s) dropped"
                % (elements[a], elements[b])
            )
            succ[a].remove(b)
        else:
            reduced.append((a, b))
    return tuple(reduced), tuple(warnings)


def make_spec(elements, covers):
    """Build a normalized PosetSpec from labels and label cover pairs."""
    elements = tuple(elements)
    if len(set(elements)) != len(elements):
        raise PosetParseError("duplicate element label")
    for lab in elements:
        if not isinstance(lab, str):
            raise PosetParseError("element labels must be strings")
    idx_covers, warnings = _normalize(elements, covers)
    label_covers = tuple(
        (elements[a], elements[b]) for a, b in idx_covers
    )
    return PosetSpec(elements, label_covers, warnings)


def parse_poset(text):
    """Parse the JSON lattice document format into a normalized PosetSpec.

    The env var ORTHOFORGE_SEED_ORDER=lex re-sorts elements
    lexicographically before the order is frozen (default: input order).
    """
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise PosetParseError("not valid JSON: %s" % exc)
    if not isinstance(doc, dict):
        raise PosetParseError("document must be a JSON object")
    if "elements" not in doc or "covers" not in doc:
        raise PosetParseError('document needs "elements" and "covers" keys')
    elements = doc["elements"]
    covers = doc["covers"]
    if not isinstance(elements, list) or not elements:
        raise PosetParseError('"elements" must be a non-empty list')
    if not isinstance(covers, list):
        raise PosetParseError('"covers" must be a list')
    for pair in covers:
        if not (isinstance(pair, list) and len(pair) == 2):
            raise PosetParseError("each cover must be a [lower, upper] pair")
    if os.environ.get("ORTHOFORGE_SEED_ORDER", "input") == "lex":
        elements = sorted(elements)
    return make_spec(elements, [tuple(c) for c in covers])


def poset_from_spec(spec):
    """Order-closure pathway: works for any valid poset, lattice or not."""
    n = len(spec.elements)
    index = {lab: i for i, lab in enumerate(spec.elements)}
    covers = tuple((index[a], index[b]) for a, b in spec.covers)
    succ = [[] for _ in range(n)]
    for a, b in covers:
        succ[a].append(b)

    # leq = reflexive-transitive closure of the cover digraph.
    leq = [[False] * n for _ in range(n)]
    for src in range(n):
        leq[src][src] = True
        pending = [src]
        while pending:
            cur = pending.pop()
            for nxt in succ[cur]:
                if not leq[src][nxt]:
                    leq[src][nxt] = True
                    pending.append(nxt)

    # Stable topological sort: always pick the lowest input index among the
    # elements whose lower covers are all placed.
    indeg = [0] * n
    for _, b in covers:
        indeg[b] += 1
    placed = []
    ready = sorted(i for i in range(n) if indeg[i] == 0)
    while ready:
        cur = ready.pop(0)
        placed.append(cur)
        for nxt in succ[cur]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                # keep the ready list sorted by input index
                lo, hi = 0, len(ready)
                while lo < hi:
                    mid = (lo + hi) // 2
                    if ready[mid] < nxt:
                        lo = mid + 1
                    else:
                        hi = mid
                ready.insert(lo, nxt)
    # acyclicity was established during normalization
    assert len(placed) == n

    return Poset(
        n=n,
        labels=spec.elements,
        leq=tuple(tuple(row) for row in leq),
        covers=covers,
        extension=tuple(placed),
    )


def build_lattice(spec):
    """Validate the lattice axioms and build meet/join tables.

    Raises NoBottomError / NoTopError when a pair has no common lower/upper
    bound at all, and NotALatticeError naming a witness pair when the bounds
    exist but have no greatest/least element.
    """
    poset = poset_from_spec(spec)
    n, leq, labels = poset.n, poset.leq, poset.labels

    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for p in range(n):
        for q in range(p, n):
            lower = [r for r in range(n) if leq[r][p] and leq[r][q]]
            if not lower:
                raise NoBottomError(
                    "(%s, %s) have no common lower bound (no bottom element)"
                    % (labels[p], labels[q]),
                    witness=(labels[p], labels[q]),
                )
            glb = [g for g in lower if all(leq[s][g] for s in lower)]
            if not glb:
                raise NotALatticeError(
                    "not a lattice: (%s, %s) has no meet"
                    % (labels[p], labels[q]),
                    witness=(labels[p], labels[q]),
                )
            meet[p][q] = meet[q][p] = glb[0]

            upper = [r for r in range(n) if leq[p][r] and leq[q][r]]
            if not upper:
                raise NoTopError(
                    "(%s, %s) have no common upper bound (no top element)"
                    % (labels[p], labels[q]),
                    witness=(labels[p], labels[q]),
                )
            lub = [g for g in upper if all(leq[g][s] for s in upper)]
            if not lub:
                raise NotALatticeError(
                    "not a lattice: (%s, %s) has no join"
                    % (labels[p], labels[q]),
                    witness=(labels[p], labels[q]),
                )
            join[p][q] = join[q][p] = lub[0]

    bottom = next(r for r in range(n) if all(leq[r][x] for x in range(n)))
    top = next(r for r in range(n) if all(leq[x][r] for x in range(n)))

    return Lattice(
        n=n,
        labels=labels,
        leq=leq,
        covers=poset.covers,
        extension=poset.extension,
        meet_table=tuple(tuple(row) for row in meet),
        join_table=tuple(tuple(row) for row in join),
        bottom=bottom,
        top=top,
    )


def dual_spec(spec):
    """Order dual: same elements, every cover flipped."""
    return make_spec(spec.elements, [(b, a) for a, b in spec.covers])


_FIXED_SIZE_FAMILIES = {"n5", "hexagon"}


def generate(family, k=None):
    """Canonical generators for the test-corpus families.

    chain k    : labels "0".."k-1", a total order (k >= 1)
    boolean k  : subsets of a k-set, labels are characteristic bitstrings
                 ordered by (popcount, string); 1 <= k <= 6
    m k        : height-2 lattice M_k with atoms a1..ak (k >= 1)
    mo k       : height-2 lattice MO_k with atoms a1..ak, b1..bk (k >= 1)
    n5         : pentagon 0 < a < 1, 0 < b < c < 1
    hexagon    : benzene 0 < a < b < 1, 0 < c < d < 1
    """
    if family in _FIXED_SIZE_FAMILIES:
        if k is not None:
            raise ValueError("family %r takes no size parameter" % family)
    elif k is None:
        raise ValueError("family %r needs a size parameter" % family)

    if family == "chain":
        if k < 1:
            raise ValueError("chain size must be >= 1")
        labels = [str(i) for i in range(k)]
        covers = [(labels[i], labels[i + 1]) for i in range(k - 1)]
        return make_spec(labels, covers)

    if family == "boolean":
        if not 1 <= k <= 6:
            raise ValueError("boolean size must be in 1..6")
        masks = sorted(range(1 << k), key=lambda m: (bin(m).count("1"), _bits(m, k)))
        labels = [_bits(m, k) for m in masks]
        covers = []
        for m in masks:
            for i in range(k):
                if not m & (1 << i):
                    covers.append((_bits(m, k), _bits(m | (1 << i), k)))
        return make_spec(labels, covers)

    if family == "m":
        if k < 1:
            raise ValueError("m size must be >= 1")
        atoms = ["a%d" % (i + 1) for i in range(k)]
        covers = [("0", a) for a in atoms] + [(a, "1") for a in atoms]
        return make_spec(["0"] + atoms + ["1"], covers)

    if family == "mo":
        if k < 1:
            raise ValueError("mo size must be >= 1")
        atoms = ["a%d" % (i + 1) for i in range(k)] + [
            "b%d" % (i + 1) for i in range(k)
        ]
        covers = [("0", a) for a in atoms] + [(a, "1") for a in atoms]
        return make_spec(["0"] + atoms + ["1"], covers)

    if family == "n5":
        return make_spec(
            ["0", "a", "b", "c", "1"],
            [("0", "a"), ("a", "1"), ("0", "b"), ("b", "c"), ("c", "1")],
        )

    if family == "hexagon":
        return make_spec(
            ["0", "a", "b", "c", "d", "1"],
            [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "d"), ("d", "1")],
        )

    raise ValueError("unknown family: %r" % (family,))


def _bits(mask, k):
    return "".join("1" if mask & (1 << i) else "0" for i in range(k))


def corpus():
    """The standard desk-scale corpus as (name, PosetSpec) pairs."""
    out = []
    for k in range(1, 7):
        out.append(("C_%d" % k, generate("chain", k)))
    for k in (2, 3, 4):
        out.append(("B_%d" % k, generate("boolean", k)))
    for k in (3, 4, 5):
        out.append(("M_%d" % k, generate("m", k)))
    out.append(("N_5", generate("n5")))
    for k in (1, 2, 3):
        out.append(("MO_%d" % k, generate("mo", k)))
    out.append(("hexagon", generate("hexagon")))
    return out
