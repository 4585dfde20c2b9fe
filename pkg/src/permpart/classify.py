"""Classification predicates for transitive permutation groups.

The central notions, for a transitive group G:

* primitive: no non-trivial invariant partition;
* quasiprimitive: every non-trivial normal subgroup is transitive;
* pre-primitive: every invariant partition is the orbit partition of a
  subgroup (equivalently of a normal subgroup, namely the kernel of the
  partition's block action);
* pre-synchronizing: every section-regular partition is invariant.

Quasiprimitivity is decided through block-system kernels rather than
normal-subgroup enumeration: a non-trivial intransitive normal subgroup
exists iff some non-trivial invariant partition has a non-trivial kernel
(the orbit partition of such a subgroup is invariant and the subgroup lies
inside its kernel).  This keeps large groups tractable, since kernels come
from chains, never from element lists.

All witnesses are deterministic: the first failure in the sorted block
system order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import BudgetExceeded, NotTransitiveError
from .partitions import (
    BlockLattice,
    Partition,
    all_block_systems,
    is_invariant,
    minimal_block,
    orbit_partition,
)
from .permcore import (
    DEFAULT_ELEMENT_BUDGET,
    Perm,
    PermGroup,
    action_on_blocks,
    elements_bounded,
    is_normal,
    orbit_data,
    point_stabilizer,
    restriction,
    stabilizers,
)

DEFAULT_SECTION_DEGREE_CAP = 12
SUBGROUP_SEARCH_CAP = 2**20


@dataclass(frozen=True)
class ClassificationFlags:
    """Boolean classification of one group, plus a pre-primitivity witness.

    ``witness`` is an invariant partition failing the kernel-orbit test when
    preprimitive is false, otherwise None.  For transitive inputs,
    primitive == quasiprimitive and preprimitive.
    """
    transitive: bool
    primitive: bool
    quasiprimitive: bool
    preprimitive: bool
    witness: Partition | None = None
    n_systems: int = 0

    def csv_fragment(self) -> str:
        """Fixed-order 0/1 fragment: transitive,primitive,quasiprimitive,preprimitive."""
        return ",".join(str(int(b)) for b in (
            self.transitive, self.primitive, self.quasiprimitive,
            self.preprimitive))


def _require_transitive(G: PermGroup):
    if not orbit_data(G)[1]:
        raise NotTransitiveError("group is not transitive")


def classify_group(G: PermGroup, cap: int = 100_000) -> ClassificationFlags:
    """One-pass classification: computes the block lattice and each kernel
    exactly once and derives all flags from them."""
    if not orbit_data(G)[1]:
        return ClassificationFlags(False, False, False, False, None, 0)
    lattice = all_block_systems(G, cap=cap)
    primitive = all(s.is_trivial() for s in lattice)
    quasiprimitive = True
    preprimitive = True
    witness = None
    for pi in lattice:
        if pi.is_trivial():
            continue
        kernel = action_on_blocks(G, pi).kernel
        if kernel.order > 1:
            quasiprimitive = False
        if preprimitive and orbit_partition(kernel.generators, G.degree) != pi:
            preprimitive = False
            witness = pi
    return ClassificationFlags(True, primitive, quasiprimitive, preprimitive,
                               witness, len(lattice))


def is_primitive(G: PermGroup) -> bool:
    """No non-trivial invariant partition; decided via minimal blocks.

    The minimal block for (0, beta) only depends on the suborbit of beta,
    so one representative per suborbit is checked.
    """
    _require_transitive(G)
    n = G.degree
    if n == 1:
        return True
    stab = point_stabilizer(G, 0)
    sub = orbit_partition(stab.generators, n) if stab.generators else \
        Partition.singletons(n)
    for part in sub.parts():
        if 0 in part:
            continue
        if len(minimal_block(G, 0, min(part))) != n:
            return False
    return True


def is_quasiprimitive(G: PermGroup) -> bool:
    """Every non-trivial normal subgroup transitive, via kernel triviality."""
    _require_transitive(G)
    if is_primitive(G):
        return True
    for pi in all_block_systems(G):
        if pi.is_trivial():
            continue
        if action_on_blocks(G, pi).kernel.order > 1:
            return False
    return True


def preprimitivity(G: PermGroup, cap: int = 100_000):
    """(flag, witness): flag is true iff the kernel-orbit test passes for
    every invariant partition; the witness is the first failure in the
    deterministic system ordering."""
    _require_transitive(G)
    for pi in all_block_systems(G, cap=cap):
        if pi.is_trivial():
            continue
        kernel = action_on_blocks(G, pi).kernel
        if orbit_partition(kernel.generators, G.degree) != pi:
            return False, pi
    return True, None


def overgroup_check(G: PermGroup) -> bool:
    """Subgroup-side characterization of pre-primitivity.

    For each invariant partition, the stabilizer H of the part containing 0
    satisfies |H| = |G| / #parts, and with N the kernel of the partition,
    |N G_0| = |N| |G_0| / |N_0| where N_0 is the point stabilizer of 0 in N.
    The group is pre-primitive iff N G_0 = H for every partition, i.e. the
    part through 0 is an N-orbit.  Must always agree with preprimitivity.
    """
    _require_transitive(G)
    order = G.order
    n = G.degree
    stab_order = order // n
    for pi in all_block_systems(G):
        if pi.is_trivial():
            continue
        kernel = action_on_blocks(G, pi).kernel
        h_order = order // pi.n_parts
        kernel_stab = PermGroup(n, kernel.generators, base_prefix=(0,))
        n0_order = kernel.order // len(kernel_stab._levels[0].orbit)
        if kernel.order * stab_order // n0_order != h_order:
            return False
    return True


def is_pre_qp(G: PermGroup) -> bool:
    """True iff the restriction to every orbit is quasiprimitive.

    Intransitive groups are allowed; single-point orbits restrict to the
    trivial group, which is quasiprimitive by convention.
    """
    orbits, _ = orbit_data(G)
    for orbit in orbits:
        if len(orbit) == 1:
            continue
        if not is_quasiprimitive(restriction(G, orbit)):
            return False
    return True


def is_generously_transitive(G: PermGroup, k: int = 2,
                             bound: int = DEFAULT_ELEMENT_BUDGET) -> bool:
    """Setwise stabilizer of every k-set induces the full symmetric group.

    k = 2 is the orbital pairing test: every orbital must be self-paired.
    k > 2 filters elements, so it requires order(G) <= bound.
    """
    n = G.degree
    if not 2 <= k < n:
        raise ValueError("need 2 <= k < degree")
    if k == 2:
        ids = _pair_orbit_ids(G)
        for x in range(n):
            for y in range(x + 1, n):
                if ids[x * n + y] != ids[y * n + x]:
                    return False
        return True
    if G.order > bound:
        raise BudgetExceeded("generous transitivity for k > 2 needs order <= %d"
                             % (bound,))
    elems = elements_bounded(G, bound)
    full = _factorial(k)
    for subset in combinations(range(n), k):
        index = {p: i for i, p in enumerate(subset)}
        induced = set()
        sset = set(subset)
        for g in elems:
            if {g.images[p] for p in subset} == sset:
                induced.add(tuple(index[g.images[p]] for p in subset))
        if len(induced) != full:
            return False
    return True


def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def _pair_orbit_ids(G: PermGroup):
    """Orbit id for each ordered pair (x, y), indexed by x*n + y."""
    n = G.degree
    parent = list(range(n * n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in G.generators:
        im = g.images
        for x in range(n):
            base = x * n
            imx = im[x] * n
            for y in range(n):
                ra, rb = find(base + y), find(imx + im[y])
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    return [find(i) for i in range(n * n)]


def is_dedekind(table) -> bool:
    """True iff every subgroup of the finite group is normal.

    It suffices to check cyclic subgroups, since every subgroup is a join
    of cyclic ones and normality is preserved under joins.
    """
    n = table.order
    mul = table.table
    inv = table.inverse
    for x in range(1, n):
        cyc = {0}
        y = x
        while y != 0:
            cyc.add(y)
            y = mul[y][x]
        for g in range(n):
            if mul[mul[inv[g]][x]][g] not in cyc:
                return False
    return True


def rns_criterion(G: PermGroup, N: PermGroup):
    """Criterion for groups with a regular normal subgroup N.

    Identifies the points with the elements of N (point 0 is the identity),
    computes the orbits of the point stabilizer G_0 acting by conjugation,
    and enumerates the G_0-invariant subgroups of N: these are exactly the
    product-closed unions of orbits containing the identity, and every such
    union is a join of single-orbit closures.  Returns (True, None) when all
    of them are normal in N, else (False, witness_generators) for the first
    non-normal one in the deterministic (size, elements) order.
    """
    _require_transitive(G)
    n = G.degree
    if N.order != n:
        raise ValueError("N is not regular: order %d != degree %d" % (N.order, n))
    if not orbit_data(N)[1]:
        raise NotTransitiveError("N is not transitive")
    if not is_normal(G, N):
        raise ValueError("N is not normal in G")

    elems = elements_bounded(N, n)
    elem_of_point = {}
    for e in elems:
        elem_of_point[e.images[0]] = e
    # point product: 0^(e_p e_q) = (0^(e_p))^(e_q) = e_q[p]
    prod = [[elem_of_point[q].images[p] for q in range(n)] for p in range(n)]
    inv_point = [elem_of_point[p].inverse().images[0] for p in range(n)]

    stab = point_stabilizer(G, 0)
    sub = orbit_partition(stab.generators, n) if stab.generators else \
        Partition.singletons(n)
    orbit_label = sub.part_of

    def close(points):
        s = set(points)
        s.add(0)
        queue = list(sorted(s))
        while queue:
            x = queue.pop()
            for y in sorted(s):
                for z in (prod[x][y], prod[y][x]):
                    if z not in s:
                        s.add(z)
                        queue.append(z)
        # a product-closed union of conjugation orbits; absorb full orbits
        changed = True
        while changed:
            changed = False
            for part in sub.parts():
                if any(p in s for p in part) and not all(p in s for p in part):
                    for p in part:
                        if p not in s:
                            s.add(p)
                            queue.append(p)
                    changed = True
            while queue:
                x = queue.pop()
                for y in sorted(s):
                    for z in (prod[x][y], prod[y][x]):
                        if z not in s:
                            s.add(z)
                            queue.append(z)
                            changed = True
        return frozenset(s)

    base_subgroups = set()
    for part in sub.parts():
        base_subgroups.add(close(part))
    discovered = set(base_subgroups)
    discovered.add(frozenset([0]))
    frontier = list(base_subgroups)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(discovered):
                if a <= b:
                    continue
                j = close(a | b)
                if j not in discovered:
                    discovered.add(j)
                    nxt.append(j)
                    if len(discovered) > SUBGROUP_SEARCH_CAP:
                        raise BudgetExceeded("invariant subgroup search cap hit")
        frontier = nxt

    gen_points = [g.images[0] for g in N.generators]
    for subgroup in sorted(discovered, key=lambda s: (len(s), sorted(s))):
        for s in sorted(subgroup):
            for t in gen_points:
                if prod[prod[inv_point[t]][s]][t] not in subgroup:
                    witness = [elem_of_point[p] for p in sorted(subgroup)]
                    return False, witness
    return True, None


@dataclass(frozen=True)
class SectionRegularWitness:
    """A section-regular partition with one witness section.

    Every group translate of the section meets every part exactly once;
    ``invariant`` records whether the partition is also G-invariant.
    """
    partition: Partition
    section: tuple
    invariant: bool


def _set_partitions(n: int):
    """All partitions of {0..n-1} as restricted-growth label strings."""
    labels = [0] * n
    maxes = [0] * n

    def rec(i):
        if i == n:
            yield tuple(labels)
            return
        top = maxes[i - 1] if i else -1
        for v in range(top + 2):
            labels[i] = v
            maxes[i] = max(top, v)
            yield from rec(i + 1)

    yield from rec(0)


def section_regular_search(G: PermGroup,
                           max_degree: int = DEFAULT_SECTION_DEGREE_CAP,
                           element_budget: int = DEFAULT_ELEMENT_BUDGET):
    """All non-trivial section-regular partitions, each with one section.

    A candidate section picks one point per part; a prefix survives iff it
    stays a partial transversal under every group element, which is
    equivalent to avoiding every orbital that meets a same-part pair (the
    orbitals are precomputed once, so the group is never enumerated).  No
    uniformity of part sizes is assumed.
    """
    n = G.degree
    if n > max_degree:
        raise BudgetExceeded("section-regular search capped at degree %d"
                             % (max_degree,))
    if G.order > element_budget:
        raise BudgetExceeded("section-regular search capped at order %d"
                             % (element_budget,))
    ids = _pair_orbit_ids(G)
    out = []
    for labels in _set_partitions(n):
        nparts = max(labels) + 1
        if nparts == 1 or nparts == n:
            continue
        pi = Partition(labels)
        bad = set()
        for x in range(n):
            for y in range(n):
                if x != y and labels[x] == labels[y]:
                    bad.add(ids[x * n + y])
        parts = pi.parts()
        chosen = []

        def extend(i):
            if i == len(parts):
                return True
            for p in parts[i]:
                ok = True
                for q in chosen:
                    if ids[q * n + p] in bad or ids[p * n + q] in bad:
                        ok = False
                        break
                if ok:
                    chosen.append(p)
                    if extend(i + 1):
                        return True
                    chosen.pop()
            return False

        if extend(0):
            out.append(SectionRegularWitness(
                partition=pi, section=tuple(chosen),
                invariant=is_invariant(G, pi)))
    return out


def sync_flags(G: PermGroup,
               max_degree: int = DEFAULT_SECTION_DEGREE_CAP,
               element_budget: int = DEFAULT_ELEMENT_BUDGET):
    """(synchronizing, presynchronizing).

    Synchronizing means no non-trivial section-regular partition exists;
    pre-synchronizing means every one found is invariant (vacuously true
    when the search comes back empty).
    """
    _require_transitive(G)
    witnesses = section_regular_search(G, max_degree, element_budget)
    return (not witnesses, all(w.invariant for w in witnesses))


def jordan_check(G: PermGroup, delta) -> bool:
    """Hypothesis check: |delta| > degree/2 and the pointwise stabilizer of
    the complement acts transitively and pre-primitively on delta.

    When this returns True, the ambient group must itself be pre-primitive.
    """
    _require_transitive(G)
    delta = sorted(set(delta))
    n = G.degree
    if 2 * len(delta) <= n:
        return False
    outside = [p for p in range(n) if p not in set(delta)]
    if outside:
        H = stabilizers(G, outside, mode="pointwise")
    else:
        H = G
    restricted = restriction(H, delta)
    if not orbit_data(restricted)[1]:
        return False
    return preprimitivity(restricted)[0]
