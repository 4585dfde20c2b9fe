"""Brute-force oracles for small groups.

These enumerations are deliberately exhaustive and independent of the chain
machinery, so they can cross-check it: subgroup lattices of small tables,
all groups of a small order (as regular permutation groups found by closure
search over fixed-point-free elements), and all transitive groups of degree
at most 7 up to conjugacy in the symmetric group.

Permutation elements are handled as bytes internally; composition is a
single translate call, which keeps the degree-7 lattice walk near C speed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

from .construct import CayleyTable
from .errors import BudgetExceeded
from .permcore import Perm, PermGroup

SUBGROUP_TABLE_CAP = 64
TRANSITIVE_DEGREE_CAP = 7
_PAD = {n: bytes(range(n, 256)) for n in range(1, 17)}


@dataclass(frozen=True)
class SubgroupList:
    """All subgroups of a small parent, as sorted element-index tuples,
    in (size, elements) order.  Contains the trivial subgroup and the
    whole group."""
    parent: object
    subgroups: tuple


def all_subgroups(T: CayleyTable, bound: int = SUBGROUP_TABLE_CAP) -> SubgroupList:
    """Breadth-first closure: cyclic subgroups first, then extension of each
    known subgroup by each outside element, deduplicated by element set."""
    if T.order > bound:
        raise BudgetExceeded("subgroup enumeration capped at order %d" % (bound,))
    found = {}
    frontier = []
    for x in range(T.order):
        s = T.subgroup_closure([x])
        if s not in found:
            found[s] = (x,) if x else ()
            frontier.append(s)
    while frontier:
        nxt = []
        for s in frontier:
            gens = found[s]
            inside = set(s)
            for x in range(T.order):
                if x in inside:
                    continue
                j = T.subgroup_closure(list(gens) + [x])
                if j not in found:
                    found[j] = tuple(gens) + (x,)
                    nxt.append(j)
        frontier = nxt
    return SubgroupList(T, tuple(sorted(found, key=lambda s: (len(s), s))))


def characteristic_subgroups(T: CayleyTable) -> SubgroupList:
    """Subgroups invariant under every automorphism of the table."""
    from .construct import automorphism_group

    autos = automorphism_group(T)
    kept = []
    for s in all_subgroups(T).subgroups:
        sset = set(s)
        if all({a.images[x] for x in s} == sset for a in autos):
            kept.append(s)
    return SubgroupList(T, tuple(kept))


# -- groups of a small order --------------------------------------------------

def _bytes_compose(a: bytes, b: bytes, n: int) -> bytes:
    # result[i] = b[a[i]]
    return a.translate(b + _PAD[n])


def _cycle_lengths(p: bytes):
    n = len(p)
    seen = [False] * n
    out = []
    for i in range(n):
        if seen[i]:
            continue
        k, j = 0, i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            k += 1
        out.append(k)
    return tuple(sorted(out))


def _mulclose_bytes(gens, n: int, cap: int = 10**6):
    idp = bytes(range(n))
    elems = {idp}
    frontier = [idp]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = _bytes_compose(a, g, n)
                if c not in elems:
                    elems.add(c)
                    nxt.append(c)
                    if len(elems) > cap:
                        raise BudgetExceeded("closure exceeded %d elements" % cap)
        frontier = nxt
    return elems


def groups_of_order(n: int):
    """All isomorphism types of groups of order n (n <= 8), realized as
    regular subgroups of the symmetric group on n points.

    Uses the normal-series structure of groups of order <= 8 (all solvable):
    every such group is built from a subgroup of prime index by adjoining a
    normalizing fixed-point-free element, starting from the trivial group.
    Results are converted to tables via the point-element bijection and
    deduplicated by brute-force isomorphism.
    """
    if n > 8:
        raise BudgetExceeded("groups_of_order capped at 8")
    if n == 1:
        return [CayleyTable([[0]], name="c1", validate=False)]
    idp = bytes(range(n))
    # semiregular candidates: fixed-point-free with all cycles of one length
    candidates = []
    for p in permutations(range(n)):
        bp = bytes(p)
        if bp == idp:
            continue
        lengths = set(_cycle_lengths(bp))
        if len(lengths) == 1 and 1 not in lengths:
            candidates.append(bp)
    primes = [p for p in (2, 3, 5, 7) if n % p == 0]

    seen = {frozenset([idp]): [idp]}
    layers = [[(frozenset([idp]), [])]]
    regulars = []
    while layers:
        layer = layers.pop(0)
        nxt = []
        for sset, gens in layer:
            size = len(sset)
            if size == n:
                regulars.append((sset, gens))
                continue
            for p in primes:
                if (n // size) % p:
                    continue
                orbit0 = {e[0] for e in sset}
                beta = min(set(range(n)) - orbit0)
                for x in candidates:
                    if x[0] != beta:
                        continue
                    xinv = bytes(sorted(range(n), key=lambda i: x[i]))
                    # x must normalize the subgroup and x^p must fall into it
                    if any(_bytes_compose(_bytes_compose(xinv, g, n), x, n)
                           not in sset for g in gens):
                        continue
                    xp = x
                    for _ in range(p - 1):
                        xp = _bytes_compose(xp, x, n)
                    if xp not in sset:
                        continue
                    try:
                        j = _mulclose_bytes(gens + [x], n, cap=n)
                    except BudgetExceeded:
                        continue
                    if len(j) != size * p:
                        continue
                    if any(len(set(_cycle_lengths(e))) != 1
                           for e in j if e != idp):
                        continue
                    key = frozenset(j)
                    if key not in seen:
                        seen[key] = gens + [x]
                        nxt.append((key, gens + [x]))
        if nxt:
            layers.append(nxt)

    tables = []
    for sset, gens in sorted(regulars, key=lambda r: sorted(r[0])):
        elem_of_point = {e[0]: e for e in sset}
        table = [[elem_of_point[q][p] for q in range(n)] for p in range(n)]
        tables.append(CayleyTable(table, validate=False))
    distinct = []
    for t in tables:
        if not any(tables_isomorphic(t, u) for u in distinct):
            distinct.append(t)
    distinct.sort(key=lambda t: (sorted(t.element_order(x) for x in range(n)),
                                 t.table))
    return distinct


def tables_isomorphic(t1: CayleyTable, t2: CayleyTable) -> bool:
    """Brute-force isomorphism test via generator-image backtracking."""
    if t1.order != t2.order:
        return False
    o1 = sorted(t1.element_order(x) for x in range(t1.order))
    o2 = sorted(t2.element_order(x) for x in range(t2.order))
    if o1 != o2:
        return False
    gens = t1.generating_indices()
    orders2 = [t2.element_order(x) for x in range(t2.order)]
    cands = [[y for y in range(t2.order)
              if orders2[y] == t1.element_order(g)] for g in gens]

    def propagate(images):
        phi = {0: 0}
        queue = [0]
        while queue:
            a = queue.pop()
            for g, ig in zip(gens, images):
                b = t1.table[a][g]
                fb = t2.table[phi[a]][ig]
                if b in phi:
                    if phi[b] != fb:
                        return False
                else:
                    phi[b] = fb
                    queue.append(b)
        return len(phi) == t1.order and len(set(phi.values())) == t1.order

    def search(k, images):
        if k == len(gens):
            return propagate(images)
        return any(search(k + 1, images + [y]) for y in cands[k])

    return search(0, [])


# -- transitive groups of small degree ----------------------------------------

def _perm_bytes_all(n: int):
    return [bytes(p) for p in permutations(range(n))]


def _invariant_key(elems, n: int):
    types = Counter(_cycle_lengths(e) for e in elems)
    orbit = _orbit_sizes(elems, n)
    return (len(elems), tuple(sorted(types.items())), orbit)


def _orbit_sizes(elems, n: int):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in elems:
        for a in range(n):
            ra, rb = find(a), find(e[a])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    return tuple(sorted(Counter(find(x) for x in range(n)).values()))


def _conjugate_subgroups(s1, s2, n: int, sigmas):
    """Is sigma^-1 s1 sigma == s2 for some sigma in S_n (exhaustive scan)?"""
    for sigma in sigmas:
        sinv = bytes(sorted(range(n), key=lambda i: sigma[i]))
        ok = True
        for e in s1:
            if _bytes_compose(_bytes_compose(sinv, e, n), sigma, n) not in s2:
                ok = False
                break
        if ok:
            return True
    return False


@lru_cache(maxsize=None)
def subgroup_classes(n: int):
    """All subgroups of S_n up to conjugacy (n <= 7), bottom-up.

    From each known class representative H, the extensions <H, x> over
    right-coset representatives x cover every over-class; new subgroups are
    deduplicated first by element set, then by exhaustive-relabeling
    conjugacy inside invariant buckets.  Returns (element set, generators)
    pairs in discovery order, which is deterministic.
    """
    if n > TRANSITIVE_DEGREE_CAP:
        raise BudgetExceeded("subgroup classes capped at degree %d"
                             % (TRANSITIVE_DEGREE_CAP,))
    all_elems = _perm_bytes_all(n)
    sigmas = all_elems
    idp = bytes(range(n))
    trivial = frozenset([idp])
    classes = [(trivial, [])]
    by_key = {_invariant_key(trivial, n): [trivial]}
    seen_sets = {trivial}
    queue = [(trivial, [])]
    while queue:
        sset, gens = queue.pop(0)
        marked = set()
        for x in all_elems:
            if x in marked or x in sset:
                continue
            for h in sset:
                marked.add(_bytes_compose(h, x, n))
            j = frozenset(_mulclose_bytes(gens + [x], n))
            if j in seen_sets:
                continue
            seen_sets.add(j)
            key = _invariant_key(j, n)
            bucket = by_key.setdefault(key, [])
            if any(_conjugate_subgroups(j, other, n, sigmas)
                   for other in bucket):
                continue
            bucket.append(j)
            jgens = gens + [x]
            classes.append((j, tuple(jgens)))
            queue.append((j, jgens))
    return tuple(classes)


@lru_cache(maxsize=None)
def transitive_groups(n: int):
    """Transitive groups of degree n (2 <= n <= 7) up to conjugacy in the
    symmetric group, as PermGroup representatives in a deterministic order."""
    if not 2 <= n <= TRANSITIVE_DEGREE_CAP:
        raise BudgetExceeded("transitive enumeration supports degrees 2..%d"
                             % (TRANSITIVE_DEGREE_CAP,))
    out = []
    for sset, gens in subgroup_classes(n):
        if _orbit_sizes(sset, n) != (n,):
            continue
        out.append(PermGroup(n, [Perm(tuple(g)) for g in gens]))
    out.sort(key=lambda G: (G.order, sorted(g.images for g in G.generators)))
    return tuple(out)
