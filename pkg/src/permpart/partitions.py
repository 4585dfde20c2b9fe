"""Partitions of a point set, the refinement lattice, and block systems.

A Partition is canonical: part labels appear in increasing order of their
minimal point, so two partitions are equal iff their ``part_of`` sequences
are equal.  The text form is 1-based, parts separated by "|" and points by
",", e.g. ``1,3|2,4``.

Everything here is a pure function over immutable inputs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import (
    BudgetExceeded,
    DegreeMismatch,
    NotInvariantError,
    NotTransitiveError,
    ParseError,
)
from .permcore import PermGroup, action_on_blocks, orbit_data, point_stabilizer

DEFAULT_SYSTEM_CAP = 100_000


class Partition:
    """A partition of {0, ..., degree-1} with canonical part labels."""

    __slots__ = ("part_of",)

    def __init__(self, part_of):
        part_of = tuple(part_of)
        relabel = {}
        canon = []
        for label in part_of:
            if label not in relabel:
                relabel[label] = len(relabel)
            canon.append(relabel[label])
        object.__setattr__(self, "part_of", tuple(canon))

    def __setattr__(self, *a):
        raise AttributeError("Partition is immutable")

    @staticmethod
    def singletons(degree: int) -> "Partition":
        return Partition(range(degree))

    @staticmethod
    def one_part(degree: int) -> "Partition":
        return Partition([0] * degree)

    @staticmethod
    def from_parts(parts, degree: int) -> "Partition":
        part_of = [-1] * degree
        for label, part in enumerate(parts):
            for p in part:
                if not 0 <= p < degree:
                    raise ParseError("point %d out of range" % p)
                if part_of[p] != -1:
                    raise ParseError("point %d in two parts" % p)
                part_of[p] = label
        if -1 in part_of:
            raise ParseError("point %d missing from partition" % part_of.index(-1))
        return Partition(part_of)

    @property
    def degree(self) -> int:
        return len(self.part_of)

    @property
    def n_parts(self) -> int:
        return max(self.part_of) + 1 if self.part_of else 0

    def parts(self):
        """Parts as sorted lists, in label order."""
        out = [[] for _ in range(self.n_parts)]
        for point, label in enumerate(self.part_of):
            out[label].append(point)
        return out

    def part_containing(self, point: int):
        label = self.part_of[point]
        return [p for p, l in enumerate(self.part_of) if l == label]

    def is_trivial(self) -> bool:
        return self.n_parts == 1 or self.n_parts == self.degree

    def __eq__(self, other):
        return isinstance(other, Partition) and self.part_of == other.part_of

    def __hash__(self):
        return hash(self.part_of)

    def __lt__(self, other):
        return (self.n_parts, self.part_of) < (other.n_parts, other.part_of)

    def __str__(self):
        return format_partition(self)

    def __repr__(self):
        return "Partition(%r)" % (list(self.part_of),)


def parse_partition(text: str, degree: int) -> Partition:
    """Parse the 1-based text form, e.g. "1,3|2,4" on 4 points."""
    s = "".join(text.split())
    parts = []
    for chunk in s.split("|"):
        if not chunk:
            raise ParseError("empty part in %r" % (text,))
        pts = []
        for item in chunk.split(","):
            if not item.isdigit():
                raise ParseError("bad point %r in %r" % (item, text))
            k = int(item)
            if not 1 <= k <= degree:
                raise ParseError("point %d out of range 1..%d" % (k, degree))
            pts.append(k - 1)
        parts.append(pts)
    return Partition.from_parts(parts, degree)


def format_partition(pi: Partition) -> str:
    return "|".join(",".join(str(p + 1) for p in part) for part in pi.parts())


def orbit_partition(gens, degree: int) -> Partition:
    """Partition into orbits of the group generated by gens (union-find)."""
    parent = list(range(degree))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        if g.degree != degree:
            raise DegreeMismatch("generator degree %d != %d" % (g.degree, degree))
        for a, b in enumerate(g.images):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    return Partition([find(x) for x in range(degree)])


def refines(pi: Partition, sigma: Partition) -> bool:
    """True iff every part of sigma is a union of parts of pi."""
    if pi.degree != sigma.degree:
        raise DegreeMismatch("degree %d vs %d" % (pi.degree, sigma.degree))
    image = {}
    for label, target in zip(pi.part_of, sigma.part_of):
        if image.setdefault(label, target) != target:
            return False
    return True


def join(pi: Partition, sigma: Partition) -> Partition:
    """Finest common coarsening."""
    if pi.degree != sigma.degree:
        raise DegreeMismatch("degree %d vs %d" % (pi.degree, sigma.degree))
    parent = list(range(pi.degree))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    first_of = {}
    for point in range(pi.degree):
        for label in ((0, pi.part_of[point]), (1, sigma.part_of[point])):
            if label in first_of:
                ra, rb = find(first_of[label]), find(point)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
            else:
                first_of[label] = point
    return Partition([find(x) for x in range(pi.degree)])


def meet(pi: Partition, sigma: Partition) -> Partition:
    """Coarsest common refinement: parts are label-pair classes."""
    if pi.degree != sigma.degree:
        raise DegreeMismatch("degree %d vs %d" % (pi.degree, sigma.degree))
    return Partition(list(zip(pi.part_of, sigma.part_of)))


def lattice_ops(pi: Partition, sigma: Partition, mode: str):
    if mode == "refines":
        return refines(pi, sigma)
    if mode == "join":
        return join(pi, sigma)
    if mode == "meet":
        return meet(pi, sigma)
    raise ValueError("unknown mode %r" % (mode,))


def is_invariant(G: PermGroup, pi: Partition) -> bool:
    """True iff every generator maps every part onto a part."""
    if pi.degree != G.degree:
        raise DegreeMismatch("partition degree %d != group degree %d"
                             % (pi.degree, G.degree))
    part_of = pi.part_of
    for g in G.generators:
        image = {}
        for point, target in enumerate(g.images):
            label = part_of[point]
            if image.setdefault(label, part_of[target]) != part_of[target]:
                return False
    return True


def _congruence_closure(G: PermGroup, points) -> Partition:
    """Finest G-invariant partition placing the given points in one part."""
    n = G.degree
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    gens = G.generators
    queue = deque((points[0], y) for y in points[1:])
    while queue:
        x, y = queue.popleft()
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        parent[max(rx, ry)] = min(rx, ry)
        for g in gens:
            queue.append((g.images[x], g.images[y]))
    return Partition([find(x) for x in range(n)])


def minimal_block(G: PermGroup, alpha: int, beta: int):
    """Smallest block of imprimitivity containing {alpha, beta} (sorted list).

    Uses the union-find merging procedure driven by generator images.
    """
    if alpha == beta:
        raise ValueError("alpha and beta must differ")
    if not orbit_data(G)[1]:
        raise NotTransitiveError("minimal blocks need a transitive group")
    pi = _congruence_closure(G, [alpha, beta])
    return pi.part_containing(alpha)


@dataclass(frozen=True)
class BlockLattice:
    """All invariant partitions of a transitive group, join-closed, including
    both trivial partitions, sorted by (number of parts, canonical form)."""
    degree: int
    systems: tuple = field(default_factory=tuple)

    def __iter__(self):
        return iter(self.systems)

    def __len__(self):
        return len(self.systems)

    def non_trivial(self):
        return [s for s in self.systems if not s.is_trivial()]


def all_block_systems(G: PermGroup, cap: int = DEFAULT_SYSTEM_CAP) -> BlockLattice:
    """Every G-invariant partition of a transitive group.

    The blocks containing point 0 are exactly the joins of the minimal
    blocks through 0, and the minimal block for (0, beta) only depends on
    the suborbit of beta, so seeds are computed per suborbit representative
    and closed under the partition join.
    """
    orbits, transitive = orbit_data(G)
    if not transitive:
        raise NotTransitiveError("block systems need a transitive group")
    n = G.degree
    if n == 1:
        return BlockLattice(1, (Partition.one_part(1),))

    stab = point_stabilizer(G, 0)
    sub = orbit_partition(stab.generators, n) if stab.generators else \
        Partition.singletons(n)
    reps = sorted({min(part) for part in sub.parts() if 0 not in part})

    seeds = []
    seen = set()
    for beta in reps:
        pi = _congruence_closure(G, [0, beta])
        if pi.part_of not in seen:
            seen.add(pi.part_of)
            seeds.append(pi)

    systems = {Partition.singletons(n), Partition.one_part(n)}
    frontier = [s for s in seeds if s not in systems]
    systems.update(frontier)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(systems):
                j = join(a, b)
                if j not in systems:
                    systems.add(j)
                    nxt.append(j)
                    if len(systems) > cap:
                        raise BudgetExceeded(
                            "more than %d block systems" % (cap,))
        frontier = nxt
    return BlockLattice(n, tuple(sorted(systems)))


def kernel_orbit_test(G: PermGroup, pi: Partition) -> bool:
    """True iff pi is the orbit partition of the kernel of its block action.

    For an invariant partition this is equivalent to being the orbit
    partition of some subgroup: the subgroup can be taken normal, and every
    normal subgroup fixing the parts lies in the kernel, whose orbit
    partition therefore refines pi and coarsens any witness's orbits.
    """
    if not is_invariant(G, pi):
        raise NotInvariantError("partition is not invariant")
    kernel = action_on_blocks(G, pi).kernel
    return orbit_partition(kernel.generators, G.degree) == pi
