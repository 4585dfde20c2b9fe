"""Permutations and permutation groups with deterministic stabilizer chains.

Conventions used throughout the package:

* Points are 0-based internally.  All textual interfaces (cycle notation,
  partition strings, catalog files) are 1-based.
* Composition is left to right: ``(a * b)`` means "apply a, then b", so
  ``point^(a*b) = (point^a)^b``.  This is asserted by a round-trip test.
* The base point for transitive groups is always point 0.
* Stabilizer chains pick the smallest moved point as the base point at each
  level.  There is no randomization anywhere; identical inputs always produce
  identical chains, orders and witnesses.

Group orders are exact Python integers (catalog groups can exceed 10^13).

All values are immutable after construction.  The stabilizer chain is built
once, inside ``PermGroup.__init__``; no operation mutates shared state, so
distinct values may be used freely from concurrent workers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import (
    BudgetExceeded,
    DegreeMismatch,
    NotInvariantError,
    NotSubgroupError,
    ParseError,
)

DEFAULT_ELEMENT_BUDGET = 10**6


class Perm:
    """A bijection of {0, ..., degree-1}, stored as an image tuple.

    ``images[i]`` is the image of point ``i``.  Instances are immutable and
    hashable; they compare by image tuple.
    """

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        n = len(images)
        seen = [False] * n
        for x in images:
            if not isinstance(x, int) or not 0 <= x < n or seen[x]:
                raise ParseError("image sequence %r is not a permutation" % (images,))
            seen[x] = True
        object.__setattr__(self, "images", images)

    @staticmethod
    def identity(degree: int) -> "Perm":
        return Perm(range(degree))

    @property
    def degree(self) -> int:
        return len(self.images)

    def apply(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Perm") -> "Perm":
        """Left-to-right composition: apply self, then other."""
        if len(self.images) != len(other.images):
            raise DegreeMismatch("cannot compose degree %d with degree %d"
                                 % (len(self.images), len(other.images)))
        p = Perm.__new__(Perm)
        object.__setattr__(p, "images",
                           tuple(map(other.images.__getitem__, self.images)))
        return p

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        p = Perm.__new__(Perm)
        object.__setattr__(p, "images", tuple(inv))
        return p

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return self.inverse() ** (-k)
        result = Perm.identity(len(self.images))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self, by: "Perm") -> "Perm":
        """by^-1 * self * by."""
        return by.inverse() * self * by

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def moved_points(self):
        return [i for i, j in enumerate(self.images) if i != j]

    def cycles(self):
        """Nontrivial cycles, each rotated to start at its minimum, sorted."""
        seen = [False] * len(self.images)
        out = []
        for i in range(len(self.images)):
            if seen[i] or self.images[i] == i:
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def __str__(self):
        return format_perm(self)

    def __repr__(self):
        return "Perm(%r)" % (list(self.images),)

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __lt__(self, other):
        return self.images < other.images

    def __setattr__(self, *a):
        raise AttributeError("Perm is immutable")


def parse_perm(text: str, degree: int) -> Perm:
    """Parse 1-based cycle notation into a Perm of the given degree.

    The grammar is ``perm := "()" | cycle+`` with
    ``cycle := "(" int ("," int)+ ")"``; whitespace is ignored and the cycles
    must be disjoint.  File point k is internal point k-1.
    """
    s = "".join(text.split())
    if s == "()":
        return Perm.identity(degree)
    if not s:
        raise ParseError("empty permutation text", position=0)
    images = list(range(degree))
    used = set()
    pos = 0
    while pos < len(s):
        if s[pos] != "(":
            raise ParseError("expected '(' at offset %d in %r" % (pos, text),
                             position=pos)
        end = s.find(")", pos)
        if end < 0:
            raise ParseError("unbalanced parenthesis in %r" % (text,), position=pos)
        body = s[pos + 1:end]
        parts = body.split(",")
        if len(parts) < 2:
            raise ParseError("cycle %r needs at least two points" % (s[pos:end + 1],),
                             position=pos)
        cyc = []
        for item in parts:
            if not item.isdigit():
                raise ParseError("bad point %r in %r" % (item, text), position=pos)
            k = int(item)
            if not 1 <= k <= degree:
                raise ParseError("point %d out of range 1..%d" % (k, degree),
                                 position=pos)
            if k - 1 in used:
                raise ParseError("repeated point %d in %r" % (k, text), position=pos)
            used.add(k - 1)
            cyc.append(k - 1)
        for a, b in zip(cyc, cyc[1:]):
            images[a] = b
        images[cyc[-1]] = cyc[0]
        pos = end + 1
    return Perm(images)


def format_perm(p: Perm) -> str:
    """Cycle notation with 1-based points; identity prints as "()"."""
    cycs = p.cycles()
    if not cycs:
        return "()"
    return "".join("(" + ",".join(str(x + 1) for x in cyc) + ")" for cyc in cycs)


def perm_algebra(a: Perm, b: Perm | None = None, mode: str = "compose") -> Perm:
    """Basic algebra on permutations: compose, inverse or conjugate.

    ``compose`` is a*b under the left-to-right convention, ``inverse``
    ignores b, and ``conjugate`` is b^-1 * a * b.
    """
    if mode == "inverse":
        return a.inverse()
    if b is None:
        raise ValueError("mode %r needs a second permutation" % (mode,))
    if a.degree != b.degree:
        raise DegreeMismatch("degree %d vs %d" % (a.degree, b.degree))
    if mode == "compose":
        return a * b
    if mode == "conjugate":
        return a.conjugate(b)
    raise ValueError("unknown mode %r" % (mode,))


class _Level:
    """One level of a stabilizer chain.

    ``nav`` is a Schreier vector: nav[base] is None, and nav[beta] is a
    (parent, edge) pair with parent^edge == beta, where edge is one of the
    level generators or an inverse of one.  Transversal elements are
    reconstructed on demand, which keeps memory linear in the orbit size
    even at degree a few thousand.

    ``pending`` holds (orbit point, generator index) Schreier pairs that have
    not been sifted yet.  Pairs are queued exactly once, so chain completion
    never reprocesses work when orbits or generator lists grow.
    """

    __slots__ = ("base", "degree", "gens", "edges", "nav", "orbit",
                 "pending", "_queued")

    def __init__(self, base, degree):
        self.base = base
        self.degree = degree
        self.gens = []
        self.edges = []
        self.nav = {base: None}
        self.orbit = [base]
        self.pending = deque()
        self._queued = set()

    def install(self, g: Perm):
        """Add a generator, extend the orbit, queue the new Schreier pairs."""
        gi = len(self.gens)
        self.gens.append(g)
        self.edges.append(g)
        self.edges.append(g.inverse())
        old_len = len(self.orbit)
        i = 0
        while i < len(self.orbit):
            a = self.orbit[i]
            i += 1
            for e in self.edges:
                b = e.images[a]
                if b not in self.nav:
                    self.nav[b] = (a, e)
                    self.orbit.append(b)
        for a in self.orbit[:old_len]:
            self._queue(a, gi)
        for a in self.orbit[old_len:]:
            for k in range(len(self.gens)):
                self._queue(a, k)

    def _queue(self, point, gen_idx):
        key = (point, gen_idx)
        if key not in self._queued:
            self._queued.add(key)
            self.pending.append(key)

    def transversal(self, beta: int) -> Perm:
        """An element u with base^u == beta (the identity for the base)."""
        path = []
        while True:
            step = self.nav[beta]
            if step is None:
                break
            parent, edge = step
            path.append(edge)
            beta = parent
        result = Perm.identity(self.degree)
        # compose edges from the root outward (path was collected leaf-first)
        for edge in reversed(path):
            result = result * edge
        return result


class PermGroup:
    """A permutation group given by generators, with a cached stabilizer chain.

    The chain is built deterministically at construction time (Schreier-Sims
    with the smallest-moved-point base rule) and gives exact ``order`` and
    ``contains`` without ever enumerating elements.  The trivial group is
    represented by an empty generator list.

    ``base_prefix`` forces the chain to start with the given base points,
    which is how point and pointwise stabilizers are extracted.
    """

    __slots__ = ("degree", "generators", "_levels", "_order")

    def __init__(self, degree: int, generators, base_prefix=()):
        gens = tuple(generators)
        for g in gens:
            if not isinstance(g, Perm):
                raise TypeError("generators must be Perm instances")
            if g.degree != degree:
                raise DegreeMismatch("generator degree %d != group degree %d"
                                     % (g.degree, degree))
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "generators", gens)
        levels = [_Level(b, degree) for b in base_prefix]
        object.__setattr__(self, "_levels", levels)
        object.__setattr__(self, "_order", None)
        for g in gens:
            self._extend(g)
        order = 1
        for lvl in levels:
            order *= len(lvl.orbit)
        object.__setattr__(self, "_order", order)

    def __setattr__(self, *a):
        raise AttributeError("PermGroup is immutable")

    # -- chain construction ------------------------------------------------

    def _strip(self, g: Perm, start: int = 0):
        """Sift g through levels[start:]; return (residue, stop_level)."""
        for i in range(start, len(self._levels)):
            lvl = self._levels[i]
            beta = g.images[lvl.base]
            if beta == lvl.base:
                continue
            if beta not in lvl.nav:
                return g, i
            g = g * lvl.transversal(beta).inverse()
        return g, len(self._levels)

    def _extend(self, g: Perm):
        h, i = self._strip(g, 0)
        if h.is_identity():
            return
        self._install_at(i, h)
        self._process_pending()

    def _install_at(self, j: int, h: Perm):
        # h fixes the bases of levels 0..j-1, so it belongs to the generator
        # set of every level up to and including j: the basic orbit at level
        # i is the orbit of base_i under all strong generators fixing the
        # first i base points.
        if j == len(self._levels):
            self._levels.append(_Level(min(h.moved_points()), self.degree))
        for i in range(j + 1):
            self._levels[i].install(h)

    def _process_pending(self):
        # Sift queued Schreier pairs until no level has pending work.  At the
        # fixpoint every Schreier generator of level i lies in the group
        # generated by the level-(i+1) generators, which is exactly the
        # strong generating condition, so the basic orbit lengths multiply
        # to the group order.
        progress = True
        while progress:
            progress = False
            li = 0
            while li < len(self._levels):
                lvl = self._levels[li]
                while lvl.pending:
                    progress = True
                    beta, gi = lvl.pending.popleft()
                    s = lvl.gens[gi]
                    u = lvl.transversal(beta)
                    schreier = u * s * lvl.transversal(s.images[beta]).inverse()
                    if schreier.is_identity():
                        continue
                    h, j = self._strip(schreier, li + 1)
                    if not h.is_identity():
                        self._install_at(j, h)
                li += 1

    # -- queries -----------------------------------------------------------

    @property
    def order(self) -> int:
        if self._order is not None:
            return self._order
        order = 1
        for lvl in self._levels:
            order *= len(lvl.orbit)
        return order

    def contains(self, g: Perm) -> bool:
        if g.degree != self.degree:
            return False
        h, _ = self._strip(g, 0)
        return h.is_identity()

    def __contains__(self, g: Perm) -> bool:
        return self.contains(g)

    def base(self):
        return tuple(lvl.base for lvl in self._levels)

    def basic_orbit_lengths(self):
        return tuple(len(lvl.orbit) for lvl in self._levels)

    def strong_generators(self, from_level: int = 0):
        """Strong generators fixing the first from_level base points; they
        generate the pointwise stabilizer of those points."""
        if from_level >= len(self._levels):
            return []
        return list(self._levels[from_level].gens)

    def is_trivial(self) -> bool:
        return self.order == 1

    def __repr__(self):
        return "PermGroup(degree=%d, order=%d, gens=%d)" % (
            self.degree, self.order, len(self.generators))


def stabilizer_chain(G: PermGroup):
    """Summary of the cached chain: list of (base point, basic orbit length).

    The chain itself lives inside the group; this accessor exists so callers
    can inspect determinism (fixed base rule) without touching internals.
    """
    return list(zip(G.base(), G.basic_orbit_lengths()))


def orbit_data(G: PermGroup):
    """All orbits (sorted lists, ordered by minimal point) and transitivity."""
    n = G.degree
    seen = [False] * n
    orbits = []
    for start in range(n):
        if seen[start]:
            continue
        orb = [start]
        seen[start] = True
        i = 0
        while i < len(orb):
            a = orb[i]
            i += 1
            for g in G.generators:
                b = g.images[a]
                if not seen[b]:
                    seen[b] = True
                    orb.append(b)
        orbits.append(sorted(orb))
    return orbits, len(orbits) == 1


def orbit_of(G: PermGroup, point: int):
    """The orbit of a single point, as a sorted list."""
    orb = [point]
    seen = {point}
    i = 0
    while i < len(orb):
        a = orb[i]
        i += 1
        for g in G.generators:
            b = g.images[a]
            if b not in seen:
                seen.add(b)
                orb.append(b)
    return sorted(orb)


def point_stabilizer(G: PermGroup, alpha: int) -> PermGroup:
    chain = PermGroup(G.degree, G.generators, base_prefix=(alpha,))
    return PermGroup(G.degree, _dedup(chain.strong_generators(1)))


def stabilizers(G: PermGroup, points, mode: str = "point",
                bound: int = DEFAULT_ELEMENT_BUDGET) -> PermGroup:
    """Point, pointwise or setwise stabilizer of a point set.

    Point and pointwise stabilizers come from a chain built with the points
    as forced base prefix.  The setwise stabilizer filters all elements and
    therefore requires order(G) <= bound.
    """
    pts = sorted(set(points))
    if not pts:
        raise ValueError("empty point set")
    for p in pts:
        if not 0 <= p < G.degree:
            raise ValueError("point %d out of range" % p)
    if mode == "point":
        if len(pts) != 1:
            raise ValueError("point mode needs exactly one point")
        return point_stabilizer(G, pts[0])
    if mode == "pointwise":
        chain = PermGroup(G.degree, G.generators, base_prefix=tuple(pts))
        return PermGroup(G.degree, _dedup(chain.strong_generators(len(pts))))
    if mode == "setwise":
        if G.order > bound:
            raise BudgetExceeded("setwise stabilizer needs order <= %d, got %d"
                                 % (bound, G.order))
        sset = set(pts)
        kept = []
        for g in elements_bounded(G, bound):
            if {g.images[p] for p in pts} == sset:
                kept.append(g)
        return group_from_elements(G.degree, kept)
    raise ValueError("unknown mode %r" % (mode,))


def _dedup(perms):
    out = []
    seen = set()
    for p in perms:
        if p.images not in seen and not p.is_identity():
            seen.add(p.images)
            out.append(p)
    return out


def group_from_elements(degree: int, elements) -> PermGroup:
    """Group generated by the given elements, with a thinned generator list.

    Feeds elements in deterministic order and keeps only those not already
    generated, so huge element lists do not bloat the generating set.
    """
    kept = []
    known = PermGroup(degree, ())
    for g in sorted(set(elements)):
        if g.is_identity() or known.contains(g):
            continue
        kept.append(g)
        known = PermGroup(degree, kept)
    return known


def elements_bounded(G: PermGroup, bound: int = DEFAULT_ELEMENT_BUDGET):
    """All elements, sorted lexicographically by image sequence.

    Raises BudgetExceeded when order(G) > bound; chain-based algorithms must
    be used instead in that case.
    """
    if G.order > bound:
        raise BudgetExceeded("element enumeration needs order <= %d, got %d"
                             % (bound, G.order))
    elems = [Perm.identity(G.degree)]
    for lvl in reversed(G._levels):
        transversal = [lvl.transversal(beta) for beta in sorted(lvl.orbit)]
        elems = [h * u for h in elems for u in transversal]
    return sorted(set(elems))


def normal_closure(G: PermGroup, h_gens) -> PermGroup:
    """Smallest normal subgroup of G containing the given members of G."""
    h_gens = list(h_gens)
    for h in h_gens:
        if not G.contains(h):
            raise NotSubgroupError("element %s is not in the group" % (h,))
    closure_gens = []
    closure = PermGroup(G.degree, ())
    queue = list(h_gens)
    while queue:
        x = queue.pop(0)
        if closure.contains(x):
            continue
        closure_gens.append(x)
        closure = PermGroup(G.degree, closure_gens)
        for g in G.generators:
            queue.append(x.conjugate(g))
    return closure


def is_normal(G: PermGroup, H: PermGroup) -> bool:
    """True iff H (a membership-verified subgroup of G) is normal in G."""
    for h in H.generators:
        if not G.contains(h):
            raise NotSubgroupError("H is not a subgroup of G")
    for h in H.generators:
        for g in G.generators:
            if not H.contains(h.conjugate(g)):
                return False
    return True


def coset_action(G: PermGroup, H: PermGroup) -> PermGroup:
    """Right-coset action of G on the cosets of H; point 0 is the coset H.

    The result is transitive of degree |G|/|H| and is returned as-is: its
    kernel is the core of H in G, so the action may be unfaithful.
    """
    if H.degree != G.degree:
        raise DegreeMismatch("H acts on %d points, G on %d" % (H.degree, G.degree))
    for h in H.generators:
        if not G.contains(h):
            raise NotSubgroupError("H is not a subgroup of G")
    reps = [Perm.identity(G.degree)]

    def coset_index(x):
        for i, r in enumerate(reps):
            if H.contains(x * r.inverse()):
                return i
        reps.append(x)
        return len(reps) - 1

    images = [dict() for _ in G.generators]
    i = 0
    while i < len(reps):
        r = reps[i]
        for gi, g in enumerate(G.generators):
            images[gi][i] = coset_index(r * g)
        i += 1
    degree = len(reps)
    gens = [Perm(tuple(img[i] for i in range(degree))) for img in images]
    return PermGroup(degree, gens)


@dataclass(frozen=True)
class BlockAction:
    """Decomposition of a group along an invariant partition.

    ``image`` acts on the part labels, ``kernel`` is the subgroup fixing
    every part setwise (always normal), and ``part_index`` maps each point
    to its part label.  |G| = |image| * |kernel|.
    """
    image: PermGroup
    kernel: PermGroup
    part_index: tuple


def _label_perm(g: Perm, part_of, nparts: int):
    """Action of g on part labels, or None if g does not permute the parts."""
    out = [-1] * nparts
    for point, img in enumerate(g.images):
        a, b = part_of[point], part_of[img]
        if out[a] == -1:
            out[a] = b
        elif out[a] != b:
            return None
    if sorted(out) != list(range(nparts)):
        return None
    return Perm(out)


def action_on_blocks(G: PermGroup, partition) -> BlockAction:
    """Split G along a G-invariant partition into block image and kernel.

    The kernel generators come from a stabilizer chain of the auxiliary
    action on points plus part labels, with the labels forced first in the
    base; no element enumeration happens at any size.
    """
    part_of = tuple(partition.part_of)
    if len(part_of) != G.degree:
        raise DegreeMismatch("partition degree %d != group degree %d"
                             % (len(part_of), G.degree))
    nparts = len(set(part_of))
    label_perms = []
    for g in G.generators:
        lp = _label_perm(g, part_of, nparts)
        if lp is None:
            raise NotInvariantError("partition is not invariant under %s" % (g,))
        label_perms.append(lp)
    image = PermGroup(nparts, _dedup(label_perms))

    n = G.degree
    aux_gens = []
    for g, lp in zip(G.generators, label_perms):
        aux_gens.append(Perm(tuple(g.images) + tuple(n + x for x in lp.images)))
    aux = PermGroup(n + nparts, aux_gens, base_prefix=tuple(range(n, n + nparts)))
    kernel_gens = []
    for g in aux.strong_generators(nparts):
        kernel_gens.append(Perm(g.images[:n]))
    kernel = PermGroup(n, _dedup(kernel_gens))
    if image.order * kernel.order != G.order:
        raise AssertionError("block action decomposition failed: %d * %d != %d"
                             % (image.order, kernel.order, G.order))
    return BlockAction(image=image, kernel=kernel, part_index=part_of)


def restriction(G: PermGroup, points) -> PermGroup:
    """Action of G restricted to an invariant point set, relabeled 0..k-1."""
    pts = sorted(points)
    index = {p: i for i, p in enumerate(pts)}
    gens = []
    for g in G.generators:
        try:
            gens.append(Perm(tuple(index[g.images[p]] for p in pts)))
        except KeyError:
            raise NotInvariantError("point set is not invariant") from None
    return PermGroup(len(pts), _dedup(gens))
