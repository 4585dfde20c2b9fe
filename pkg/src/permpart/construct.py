"""Builders for the standard construction families.

Abstract groups are carried as multiplication tables (CayleyTable); the
identity is always element 0.  Point-indexing conventions are normative so
that partitions and witnesses are comparable across runs:

* product action on pairs: (gamma, delta) -> gamma * |Delta| + delta;
* imprimitive wreath blocks: (gamma, delta) -> delta * |Gamma| + gamma;
* power actions (product-action wreath, diagonal groups): words in
  mixed-radix order with coordinate 0 most significant.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import product as iter_product

from .errors import BudgetExceeded, ParseError, PermpartError
from .partitions import Partition
from .permcore import (
    DEFAULT_ELEMENT_BUDGET,
    Perm,
    PermGroup,
    elements_bounded,
    orbit_data,
)

DEFAULT_DEGREE_CAP = 10**6
AUTOMORPHISM_TABLE_CAP = 256


class CayleyTable:
    """A finite group as a multiplication table over indices 0..n-1.

    Element 0 is the identity.  Associativity, identity and inverse laws are
    verified at construction, as is the Latin-square property of the table.
    """

    __slots__ = ("order", "table", "inverse", "name")

    def __init__(self, table, name: str | None = None, validate: bool = True):
        table = tuple(tuple(row) for row in table)
        n = len(table)
        if validate:
            full = set(range(n))
            for i, row in enumerate(table):
                if len(row) != n or set(row) != full:
                    raise PermpartError("row %d is not a permutation" % i)
                if table[i][0] != i or table[0][i] != i:
                    raise PermpartError("element 0 is not an identity")
            for col in range(n):
                if {table[r][col] for r in range(n)} != full:
                    raise PermpartError("column %d is not a permutation" % col)
            for a in range(n):
                for b in range(n):
                    tab = table[a][b]
                    ta = table[a]
                    for c in range(n):
                        if table[tab][c] != ta[table[b][c]]:
                            raise PermpartError(
                                "associativity fails at (%d,%d,%d)" % (a, b, c))
        inverse = [0] * n
        for a in range(n):
            for b in range(n):
                if table[a][b] == 0:
                    inverse[a] = b
                    break
            else:
                raise PermpartError("element %d has no inverse" % a)
        object.__setattr__(self, "order", n)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "inverse", tuple(inverse))
        object.__setattr__(self, "name", name)

    def __setattr__(self, *a):
        raise AttributeError("CayleyTable is immutable")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def generating_indices(self):
        """A small generating set, chosen greedily in index order."""
        gens = []
        closure = {0}
        for x in range(1, self.order):
            if x in closure:
                continue
            gens.append(x)
            closure = self.closure(gens)
            if len(closure) == self.order:
                break
        return gens

    def closure(self, indices):
        out = {0}
        queue = [0]
        gens = list(indices)
        while queue:
            a = queue.pop()
            for g in gens:
                b = self.table[a][g]
                if b not in out:
                    out.add(b)
                    queue.append(b)
        return out

    def subgroup_closure(self, indices):
        """Subgroup generated by the indices, as a sorted tuple."""
        return tuple(sorted(self.closure(indices)))

    def __repr__(self):
        return "CayleyTable(order=%d%s)" % (
            self.order, ", name=%r" % self.name if self.name else "")


# -- bundled tables ---------------------------------------------------------

def cyclic_table(n: int) -> CayleyTable:
    return CayleyTable([[(i + j) % n for j in range(n)] for i in range(n)],
                       name="c%d" % n)


def dihedral_table(order: int) -> CayleyTable:
    """Dihedral group of the given (even, >= 2) order.

    Element e*k + a stands for s^e r^a with rotation part a mod k.
    """
    if order % 2 or order < 2:
        raise ValueError("dihedral order must be even and positive")
    k = order // 2

    def mul(x, y):
        e1, a1 = divmod(x, k)
        e2, a2 = divmod(y, k)
        a = (a2 + (a1 if e2 == 0 else -a1)) % k
        return ((e1 + e2) % 2) * k + a

    return CayleyTable([[mul(x, y) for y in range(order)] for x in range(order)],
                       name="d%d" % order)


def quaternion_table() -> CayleyTable:
    """The quaternion group of order 8: 1, -1, i, -i, j, -j, k, -k."""
    axes = "1ijk"
    mul_axis = {
        ("1", a): (1, a) for a in axes
    }
    mul_axis.update({(a, "1"): (1, a) for a in axes})
    for a in "ijk":
        mul_axis[(a, a)] = (-1, "1")
    mul_axis[("i", "j")] = (1, "k")
    mul_axis[("j", "i")] = (-1, "k")
    mul_axis[("j", "k")] = (1, "i")
    mul_axis[("k", "j")] = (-1, "i")
    mul_axis[("k", "i")] = (1, "j")
    mul_axis[("i", "k")] = (-1, "j")
    elems = [(1, "1"), (-1, "1"), (1, "i"), (-1, "i"),
             (1, "j"), (-1, "j"), (1, "k"), (-1, "k")]
    index = {e: i for i, e in enumerate(elems)}

    def mul(x, y):
        sx, ax = elems[x]
        sy, ay = elems[y]
        s, a = mul_axis[(ax, ay)]
        return index[(s * sx * sy, a)]

    return CayleyTable([[mul(x, y) for y in range(8)] for x in range(8)],
                       name="q8")


def table_from_perm_group(G: PermGroup, name: str | None = None,
                          bound: int = DEFAULT_ELEMENT_BUDGET) -> CayleyTable:
    """Multiplication table of a permutation group (identity first, elements
    in lexicographic image order)."""
    elems = elements_bounded(G, bound)
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[a * b] for b in elems] for a in elems]
    return CayleyTable(table, name=name, validate=False)


def product_table(t1: CayleyTable, t2: CayleyTable,
                  name: str | None = None) -> CayleyTable:
    """Direct product table; element (a, b) has index a * |t2| + b."""
    n1, n2 = t1.order, t2.order
    table = [[0] * (n1 * n2) for _ in range(n1 * n2)]
    for a1 in range(n1):
        for b1 in range(n2):
            for a2 in range(n1):
                for b2 in range(n2):
                    table[a1 * n2 + b1][a2 * n2 + b2] = \
                        t1.table[a1][a2] * n2 + t2.table[b1][b2]
    if name is None and t1.name and t2.name:
        name = "%sx%s" % (t1.name, t2.name)
    return CayleyTable(table, name=name, validate=False)


def _sym_table(n: int, even_only: bool) -> CayleyTable:
    if n > 5:
        raise BudgetExceeded("bundled symmetric/alternating tables stop at 5")
    gens = [Perm((1, 0) + tuple(range(2, n))), Perm(tuple(range(1, n)) + (0,))]
    G = PermGroup(n, gens)
    if even_only:
        kept = [g for g in elements_bounded(G) if _is_even(g)]
        G = PermGroup(n, [g for g in kept if not g.is_identity()])
    return table_from_perm_group(G)


def _is_even(p: Perm) -> bool:
    return sum(len(c) - 1 for c in p.cycles()) % 2 == 0


_FIXED_TABLES = {}


def named_table(name: str) -> CayleyTable:
    """Bundled tables: c<n>, d<order>, v4, q8, s3, s4, a4, a5, c8xc8."""
    name = name.lower()
    if name in _FIXED_TABLES:
        return _FIXED_TABLES[name]
    table = None
    if name == "v4":
        table = CayleyTable(product_table(cyclic_table(2), cyclic_table(2)).table,
                            name="v4", validate=False)
    elif name == "q8":
        table = quaternion_table()
    elif name == "s3":
        table = CayleyTable(_sym_table(3, False).table, name="s3", validate=False)
    elif name == "s4":
        table = CayleyTable(_sym_table(4, False).table, name="s4", validate=False)
    elif name == "a4":
        table = CayleyTable(_sym_table(4, True).table, name="a4", validate=False)
    elif name == "a5":
        table = CayleyTable(_sym_table(5, True).table, name="a5", validate=False)
    elif name == "c8xc8":
        table = CayleyTable(product_table(cyclic_table(8), cyclic_table(8)).table,
                            name="c8xc8", validate=False)
    elif name.startswith("c") and name[1:].isdigit():
        table = cyclic_table(int(name[1:]))
    elif name.startswith("d") and name[1:].isdigit():
        table = dihedral_table(int(name[1:]))
    if table is None:
        raise ParseError("unknown table name %r" % (name,))
    _FIXED_TABLES[name] = table
    return table


# -- actions of abstract groups ---------------------------------------------

def regular_action(T: CayleyTable) -> PermGroup:
    """Right-multiplication action on the group itself; point 0 = identity."""
    gens = [Perm(tuple(row[x] for row in T.table))
            for x in T.generating_indices()]
    return PermGroup(T.order, gens)


def automorphism_group(T: CayleyTable):
    """All automorphisms as permutations of element indices, found by brute
    force over images of a fixed generating sequence, in sorted order."""
    if T.order > AUTOMORPHISM_TABLE_CAP:
        raise BudgetExceeded("automorphism search capped at order %d"
                             % (AUTOMORPHISM_TABLE_CAP,))
    gens = T.generating_indices()
    if not gens:
        return [Perm.identity(1)][:1] if T.order == 1 else []
    orders = [T.element_order(x) for x in range(T.order)]
    candidates = [[y for y in range(T.order) if orders[y] == orders[g]]
                  for g in gens]
    found = []

    def propagate(images):
        phi = {0: 0}
        queue = [0]
        while queue:
            x = queue.pop()
            for g, ig in zip(gens, images):
                y = T.table[x][g]
                fy = T.table[phi[x]][ig]
                if y in phi:
                    if phi[y] != fy:
                        return None
                else:
                    phi[y] = fy
                    queue.append(y)
        if len(phi) != T.order or len(set(phi.values())) != T.order:
            return None
        return phi

    def search(k, images):
        if k == len(gens):
            phi = propagate(images)
            if phi is not None:
                found.append(Perm(tuple(phi[x] for x in range(T.order))))
            return
        for y in candidates[k]:
            search(k + 1, images + [y])

    search(0, [])
    return sorted(found)


def holomorph(T: CayleyTable) -> PermGroup:
    """Group on the elements of T generated by right multiplications and all
    automorphisms; its order is |T| * |Aut(T)|."""
    autos = automorphism_group(T)
    reg = regular_action(T)
    G = PermGroup(T.order, tuple(reg.generators) + tuple(autos))
    if G.order != T.order * len(autos):
        raise AssertionError("holomorph order %d != %d * %d"
                             % (G.order, T.order, len(autos)))
    return G


# -- products ---------------------------------------------------------------

def direct_product(G: PermGroup, H: PermGroup) -> PermGroup:
    """Product action on pairs: (gamma, delta)(g, h) = (gamma g, delta h)."""
    if not orbit_data(G)[1] or not orbit_data(H)[1]:
        warnings.warn("direct_product factors are not both transitive")
    dg, dh = G.degree, H.degree
    gens = []
    for g in G.generators:
        gens.append(Perm(tuple(g.images[p // dh] * dh + (p % dh)
                               for p in range(dg * dh))))
    for h in H.generators:
        gens.append(Perm(tuple((p // dh) * dh + h.images[p % dh]
                               for p in range(dg * dh))))
    return PermGroup(dg * dh, gens)


def cartesian_product_partition(pi: Partition, sigma: Partition) -> Partition:
    """Parts are all products of a part of pi and a part of sigma, under the
    pair convention (gamma, delta) -> gamma * |Delta| + delta."""
    dh = sigma.degree
    return Partition([pi.part_of[p // dh] * sigma.n_parts + sigma.part_of[p % dh]
                      for p in range(pi.degree * dh)])


@dataclass(frozen=True)
class ProductDecomposition:
    """Projection and fibre partitions of a partition of a product domain.

    ``k`` is the number of fibre parts inside one projection part (equal on
    both sides); ``latin_square_ok`` records whether, inside each cell of
    projection parts, the fibre-product grid meets every partition part
    exactly once per row and per column.
    """
    p_g: Partition
    f_g: Partition
    p_h: Partition
    f_h: Partition
    k: int
    latin_square_ok: bool


def decomposition(pi: Partition, dims) -> ProductDecomposition:
    """Split a partition of a product domain into projection and fibre data.

    Raises PermpartError when the part projections fail to be pairwise
    disjoint or the two fibre counts differ, which signals that the input
    was not invariant under a transitive product group.
    """
    dg, dh = dims
    if pi.degree != dg * dh:
        raise PermpartError("partition degree %d != %d * %d" % (pi.degree, dg, dh))

    def projection(axis):
        label_of = [-1] * (dg if axis == 0 else dh)
        sizes = []
        for part in pi.parts():
            coords = sorted({(p // dh) if axis == 0 else (p % dh)
                             for p in part})
            states = {label_of[c] for c in coords}
            if states == {-1}:
                label = len(sizes)
                for c in coords:
                    label_of[c] = label
                sizes.append(len(coords))
            elif len(states) == 1 and -1 not in states:
                if sizes[states.pop()] != len(coords):
                    raise PermpartError(
                        "part projections are not pairwise disjoint")
            else:
                raise PermpartError("part projections are not pairwise disjoint")
        return Partition(label_of)

    p_g = projection(0)
    p_h = projection(1)
    f_g = Partition([pi.part_of[gamma * dh + 0] for gamma in range(dg)])
    f_h = Partition([pi.part_of[0 * dh + delta] for delta in range(dh)])

    def fibre_count(f, p):
        counts = {}
        for fpart in f.parts():
            target = {p.part_of[x] for x in fpart}
            if len(target) != 1:
                raise PermpartError("fibre partition does not refine projection")
            label = target.pop()
            counts[label] = counts.get(label, 0) + 1
        if len(set(counts.values())) != 1:
            raise PermpartError("fibre count varies across projection parts")
        return next(iter(counts.values()))

    k_g = fibre_count(f_g, p_g)
    k_h = fibre_count(f_h, p_h)
    if k_g != k_h:
        raise PermpartError("fibre counts differ: %d vs %d" % (k_g, k_h))

    latin = True
    if k_g > 1:
        fg_parts = f_g.parts()
        fh_parts = f_h.parts()
        for a_label in range(p_g.n_parts):
            for b_label in range(p_h.n_parts):
                rows = [i for i, part in enumerate(fg_parts)
                        if p_g.part_of[part[0]] == a_label]
                cols = [j for j, part in enumerate(fh_parts)
                        if p_h.part_of[part[0]] == b_label]
                grid = {}
                ok = True
                for i in rows:
                    for j in cols:
                        cell = {pi.part_of[x * dh + y]
                                for x in fg_parts[i] for y in fh_parts[j]}
                        if len(cell) != 1:
                            ok = False
                            break
                        grid[(i, j)] = cell.pop()
                    if not ok:
                        break
                if not ok:
                    latin = False
                    break
                for i in rows:
                    if len({grid[(i, j)] for j in cols}) != len(cols):
                        latin = False
                for j in cols:
                    if len({grid[(i, j)] for i in rows}) != len(rows):
                        latin = False
            if not latin:
                break
    return ProductDecomposition(p_g, f_g, p_h, f_h, k_g, latin)


# -- wreath products ---------------------------------------------------------

@dataclass(frozen=True)
class WreathImprimitive:
    """Imprimitive wreath product together with its canonical partition into
    the blocks (copies of the first factor)."""
    group: PermGroup
    canonical: Partition


def wreath_imprimitive(G: PermGroup, H: PermGroup) -> WreathImprimitive:
    """G wr H on |Gamma| * |Delta| points; point (gamma, delta) has index
    delta * |Gamma| + gamma.

    One copy of G's generators is planted on a representative block of each
    H-orbit (top conjugates then generate the whole base group, also when H
    is intransitive), plus the top copy of H permuting blocks.
    """
    dg, dh = G.degree, H.degree
    n = dg * dh
    gens = []
    h_orbits = orbit_data(H)[0] if H.generators else [[d] for d in range(dh)]
    for orbit in h_orbits:
        d0 = min(orbit)
        for g in G.generators:
            images = list(range(n))
            for gamma in range(dg):
                images[d0 * dg + gamma] = d0 * dg + g.images[gamma]
            gens.append(Perm(images))
    for h in H.generators:
        gens.append(Perm(tuple(h.images[p // dg] * dg + (p % dg)
                               for p in range(n))))
    group = PermGroup(n, gens)
    canonical = Partition([p // dg for p in range(n)])
    return WreathImprimitive(group=group, canonical=canonical)


def _word_points(dg: int, b: int):
    return iter_product(range(dg), repeat=b)


def wreath_product_action(G: PermGroup, H: PermGroup,
                          degree_cap: int = DEFAULT_DEGREE_CAP) -> PermGroup:
    """G wr H acting on words of length |Delta| over Gamma (mixed radix,
    coordinate 0 most significant)."""
    dg, b = G.degree, H.degree
    n = dg ** b
    if n > degree_cap:
        raise BudgetExceeded("product action degree %d exceeds cap %d"
                             % (n, degree_cap))
    weights = [dg ** (b - 1 - i) for i in range(b)]
    gens = []
    h_orbits = orbit_data(H)[0] if H.generators else [[d] for d in range(b)]
    for orbit in h_orbits:
        i0 = min(orbit)
        for g in G.generators:
            images = []
            for w in _word_points(dg, b):
                images.append(sum(
                    (g.images[c] if i == i0 else c) * weights[i]
                    for i, c in enumerate(w)))
            gens.append(Perm(images))
    for h in H.generators:
        hinv = h.inverse()
        images = []
        for w in _word_points(dg, b):
            images.append(sum(w[hinv.images[i]] * weights[i] for i in range(b)))
        gens.append(Perm(images))
    return PermGroup(n, gens)


# -- diagonal groups ----------------------------------------------------------

def diagonal_group(T: CayleyTable, m: int,
                   degree_cap: int = DEFAULT_DEGREE_CAP) -> PermGroup:
    """The diagonal group on m-tuples over T.

    Generators: right multiplications by table generators in each coordinate,
    every automorphism applied diagonally (left multiplications are omitted
    as redundant: two of left multiplication, right multiplication and
    diagonal conjugation generate the third, and inner automorphisms arrive
    with the automorphism generators), adjacent coordinate transpositions,
    and the twist [t1,...,tm] -> [t1^-1, t1^-1 t2, ..., t1^-1 tm].
    """
    nT = T.order
    n = nT ** m
    if n > degree_cap:
        raise BudgetExceeded("diagonal group degree %d exceeds cap %d"
                             % (n, degree_cap))
    weights = [nT ** (m - 1 - i) for i in range(m)]
    mul = T.table
    inv = T.inverse
    gens = []
    for i in range(m):
        for x in T.generating_indices():
            images = []
            for w in iter_product(range(nT), repeat=m):
                images.append(sum(
                    (mul[c][x] if j == i else c) * weights[j]
                    for j, c in enumerate(w)))
            gens.append(Perm(images))
    for alpha in automorphism_group(T):
        if alpha.is_identity():
            continue
        images = []
        for w in iter_product(range(nT), repeat=m):
            images.append(sum(alpha.images[c] * weights[j]
                              for j, c in enumerate(w)))
        gens.append(Perm(images))
    for i in range(m - 1):
        images = []
        for w in iter_product(range(nT), repeat=m):
            s = list(w)
            s[i], s[i + 1] = s[i + 1], s[i]
            images.append(sum(c * weights[j] for j, c in enumerate(s)))
        gens.append(Perm(images))
    images = []
    for w in iter_product(range(nT), repeat=m):
        t1inv = inv[w[0]]
        s = [t1inv] + [mul[t1inv][c] for c in w[1:]]
        images.append(sum(c * weights[j] for j, c in enumerate(s)))
    gens.append(Perm(images))
    return PermGroup(n, gens)


def diag_condition(T: CayleyTable, m: int, table_cap: int = 64) -> bool:
    """Sufficient condition for pre-primitivity of the diagonal group.

    For every characteristic subgroup K of T, let L be the subgroup of K
    generated by (m+1)st powers and commutators of elements of K; the
    condition holds iff every subgroup between L and K is normal in T.
    True here must imply pre-primitivity of diagonal_group(T, m).
    """
    from .smallgroups import all_subgroups, characteristic_subgroups

    if T.order > table_cap:
        raise BudgetExceeded("diag condition capped at table order %d"
                             % (table_cap,))
    subs = all_subgroups(T).subgroups
    mul = T.table
    inv = T.inverse

    def power(x, e):
        out = 0
        for _ in range(e):
            out = mul[out][x]
        return out

    for K in characteristic_subgroups(T).subgroups:
        seeds = [power(k, m + 1) for k in K]
        seeds += [mul[mul[inv[a]][inv[b]]][mul[a][b]] for a in K for b in K]
        L = set(T.subgroup_closure(seeds))
        kset = set(K)
        for S in subs:
            sset = set(S)
            if not (L <= sset and sset <= kset):
                continue
            for s in S:
                for g in range(T.order):
                    if mul[mul[inv[g]][s]][g] not in sset:
                        return False
    return True
