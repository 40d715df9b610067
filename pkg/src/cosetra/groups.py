"""Finite groups given by Cayley tables, and the coset machinery built on them.

Elements are integer ids ``0..order-1`` with the identity fixed at ``0``.
Subsets of a group are passed around as ``frozenset`` of ids; anything that
is stored on a type is kept as a sorted tuple so that reprs and reports are
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence

ElementSet = frozenset


class GroupError(ValueError):
    """Raised when a table, subgroup, coset or quotient map is not valid.

    ``kind`` is a short machine-readable tag and ``witness`` holds the
    offending elements, so callers can tell failures apart.
    """

    def __init__(self, kind: str, message: str, witness=None):
        super().__init__(message)
        self.kind = kind
        self.witness = witness


# ---------------------------------------------------------------------------
# Groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group by composition table.

    ``coords`` optionally gives each element a tuple name (used by direct
    products so that ``(0, 1, 1)`` can be looked up); it defaults to
    ``(i,)`` for element ``i``.
    """

    table: tuple[tuple[int, ...], ...]
    name: str = "G"
    coords: tuple[tuple[int, ...], ...] | None = None
    inverse: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        n = len(self.table)
        if n == 0:
            raise GroupError("empty", "a group needs at least one element")
        rows = tuple(tuple(int(v) for v in row) for row in self.table)
        object.__setattr__(self, "table", rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise GroupError("shape", f"row {i} has length {len(row)}, expected {n}")
            for v in row:
                if not 0 <= v < n:
                    raise GroupError("range", f"entry {v} in row {i} out of range", (i, v))
        for a in range(n):
            if rows[0][a] != a or rows[a][0] != a:
                raise GroupError("identity", f"element 0 is not an identity for {a}", (a,))
        inv = []
        for a in range(n):
            right = [b for b in range(n) if rows[a][b] == 0]
            if len(right) != 1 or rows[right[0]][a] != 0:
                raise GroupError("inverse", f"element {a} has no two-sided inverse", (a,))
            inv.append(right[0])
        object.__setattr__(self, "inverse", tuple(inv))
        for a, b, c in product(range(n), repeat=3):
            if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
                raise GroupError("associativity", f"({a}*{b})*{c} != {a}*({b}*{c})", (a, b, c))
        if self.coords is None:
            object.__setattr__(self, "coords", tuple((i,) for i in range(n)))
        elif len(self.coords) != n:
            raise GroupError("shape", "coords must name every element")

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def identity(self) -> int:
        return 0

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def element(self, coords: Sequence[int]) -> int:
        """Element id for a coordinate tuple such as ``(0, 1, 1)``."""
        try:
            return self._coord_index[tuple(coords)]
        except KeyError:
            raise GroupError("range", f"no element with coordinates {tuple(coords)}") from None

    @cached_property
    def _coord_index(self) -> dict[tuple[int, ...], int]:
        return {c: i for i, c in enumerate(self.coords)}

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def generated(self, gens: Iterable[int]) -> ElementSet:
        """The subgroup generated by ``gens``."""
        gens = list(gens)
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = self.table[a][g]
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return frozenset(seen)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"


def cyclic_group(n: int) -> FiniteGroup:
    """The cyclic group Z_n with element ``i`` the residue ``i``."""
    if n < 1:
        raise GroupError("order", f"cyclic group order must be positive, got {n}")
    table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    return FiniteGroup(table, name=f"Z{n}")


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    """Componentwise product; the pair ``(i, j)`` gets id ``i * |b| + j``."""
    m = b.order
    n = a.order * m
    table = tuple(
        tuple(a.table[x // m][y // m] * m + b.table[x % m][y % m] for y in range(n))
        for x in range(n)
    )
    coords = tuple(a.coords[x // m] + b.coords[x % m] for x in range(n))
    return FiniteGroup(table, name=f"{a.name}x{b.name}", coords=coords)


def symmetric_group(n: int) -> FiniteGroup:
    """Permutations of ``range(n)``, identity first, the rest in lexicographic order.

    Composition is ``(a*b)(i) = b(a(i))`` (apply ``a`` first).
    """
    from itertools import permutations

    perms = sorted(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = tuple(
        tuple(index[tuple(q[p[i]] for i in range(n))] for q in perms) for p in perms
    )
    return FiniteGroup(table, name=f"S{n}", coords=tuple(perms))


def complex_product(a: Iterable[int], b: Iterable[int], g: FiniteGroup) -> ElementSet:
    """The complex ``{u*v : u in a, v in b}``."""
    a = tuple(a)
    b = tuple(b)
    for v in a + b:
        if not 0 <= v < g.order:
            raise GroupError("range", f"element {v} not in {g.name}", (v,))
    t = g.table
    return frozenset(t[u][v] for u in a for v in b)


def set_inverse(s: Iterable[int], g: FiniteGroup) -> ElementSet:
    return frozenset(g.inverse[v] for v in s)


# ---------------------------------------------------------------------------
# Subgroups and cosets
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        elems = tuple(sorted(set(self.elements)))
        object.__setattr__(self, "elements", elems)
        g = self.parent
        for v in elems:
            if not 0 <= v < g.order:
                raise GroupError("range", f"element {v} not in {g.name}", (v,))
        members = frozenset(elems)
        if 0 not in members:
            raise GroupError("identity", "subset does not contain the identity")
        for v in elems:
            if g.inverse[v] not in members:
                raise GroupError("inverse", f"inverse of {v} missing", (v, g.inverse[v]))
        for u in elems:
            for v in elems:
                if g.table[u][v] not in members:
                    raise GroupError(
                        "closure", f"{u}*{v}={g.table[u][v]} not in subset", (u, v, g.table[u][v])
                    )

    @cached_property
    def members(self) -> ElementSet:
        return frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.elements == other.elements

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def __repr__(self) -> str:
        return f"Subgroup({self.parent.name}, {list(self.elements)})"


def subgroup(parent: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    return Subgroup(parent, tuple(elements))


def trivial_subgroup(g: FiniteGroup) -> Subgroup:
    return Subgroup(g, (0,))


def whole_group(g: FiniteGroup) -> Subgroup:
    return Subgroup(g, tuple(g.elements))


def subgroup_product(a: Subgroup, b: Subgroup) -> Subgroup:
    """``a*b`` for subgroups that commute as sets (always true if one is normal)."""
    if a.parent is not b.parent:
        raise GroupError("parent", "subgroups of different groups")
    return Subgroup(a.parent, tuple(complex_product(a.elements, b.elements, a.parent)))


def is_normal(s: Subgroup) -> bool:
    g = s.parent
    t = g.table
    members = s.members
    return all(t[t[g.inverse[x]][h]][x] in members for x in g.elements for h in s.elements)


@dataclass(frozen=True, eq=False)
class Coset:
    subgroup: Subgroup
    representative: int
    elements: tuple[int, ...]

    @classmethod
    def of(cls, s: Subgroup, element: int) -> "Coset":
        """The coset ``element * s`` (normality makes left and right agree)."""
        elems = tuple(sorted(complex_product((element,), s.elements, s.parent)))
        return cls(s, elems[0], elems)

    @cached_property
    def members(self) -> ElementSet:
        return frozenset(self.elements)

    def __eq__(self, other):
        if not isinstance(other, Coset):
            return NotImplemented
        return self.subgroup == other.subgroup and self.elements == other.elements

    def __hash__(self):
        return hash((self.subgroup, self.elements))

    def __repr__(self) -> str:
        return f"Coset({list(self.elements)})"


def is_union_of_cosets(s: Iterable[int], sub: Subgroup) -> bool:
    s = frozenset(s)
    g = sub.parent
    return all(g.table[v][h] in s for v in s for h in sub.elements)


# ---------------------------------------------------------------------------
# Quotients
# ---------------------------------------------------------------------------


class QuotientGroup:
    """``G/N`` with coset 0 the subgroup itself and the rest ordered by least element."""

    def __init__(self, group: FiniteGroup, normal: Subgroup):
        if normal.parent is not group:
            raise GroupError("parent", "subgroup does not belong to this group")
        if not is_normal(normal):
            raise GroupError("not-normal", f"{normal} is not normal in {group.name}")
        self.group = group
        self.normal = normal
        index = [-1] * group.order
        cosets: list[Coset] = []
        for v in group.elements:
            if index[v] < 0:
                c = Coset.of(normal, v)
                for w in c.elements:
                    index[w] = len(cosets)
                cosets.append(c)
        self.cosets: tuple[Coset, ...] = tuple(cosets)
        self.index: tuple[int, ...] = tuple(index)
        k = len(cosets)
        reps = [c.representative for c in cosets]
        t = group.table
        self.table: tuple[tuple[int, ...], ...] = tuple(
            tuple(index[t[reps[i]][reps[j]]] for j in range(k)) for i in range(k)
        )
        self.inverse: tuple[int, ...] = tuple(index[group.inverse[r]] for r in reps)

    @property
    def order(self) -> int:
        return len(self.cosets)

    def coset_of(self, v: int) -> int:
        return self.index[v]

    def coset_index(self, c: Coset | Iterable[int]) -> int:
        """Index of a coset given as a ``Coset`` or as an element set."""
        elems = c.members if isinstance(c, Coset) else frozenset(c)
        if not elems:
            raise GroupError("not-coset", "empty set is not a coset")
        i = self.index[min(elems)]
        if self.cosets[i].members != elems:
            raise GroupError("not-coset", f"{sorted(elems)} is not a coset of {self.normal}",
                             sorted(elems))
        return i

    def indices_of_union(self, s: Iterable[int]) -> tuple[int, ...]:
        """Coset indices making up ``s``; raises if ``s`` is not a union of cosets."""
        s = frozenset(s)
        idx = sorted({self.index[v] for v in s})
        if sum(len(self.cosets[i].elements) for i in idx) != len(s):
            raise GroupError("not-union", f"{sorted(s)} is not a union of cosets of {self.normal}",
                             sorted(s))
        return tuple(idx)

    def union(self, indices: Iterable[int]) -> ElementSet:
        return frozenset(v for i in indices for v in self.cosets[i].elements)

    def as_group(self) -> FiniteGroup:
        return FiniteGroup(self.table, name=f"{self.group.name}/N{self.normal.order}")

    def __repr__(self) -> str:
        return f"QuotientGroup({self.group.name}/{list(self.normal.elements)}, order={self.order})"


def quotient(g: FiniteGroup, n: Subgroup) -> QuotientGroup:
    return QuotientGroup(g, n)


class QuotientIso:
    """An isomorphism ``G_x/H -> G_y/K`` stored as a coset-index map."""

    def __init__(self, domain: QuotientGroup, codomain: QuotientGroup, mapping: Sequence[int]):
        mapping = tuple(int(v) for v in mapping)
        if domain.order != codomain.order or len(mapping) != domain.order:
            raise GroupError("shape", f"map of length {len(mapping)} between quotients of order "
                             f"{domain.order} and {codomain.order}")
        if sorted(mapping) != list(range(codomain.order)):
            raise GroupError("not-bijective", f"map {list(mapping)} is not a bijection",
                             list(mapping))
        if mapping[0] != 0:
            raise GroupError("identity", "map must send coset 0 to coset 0", (0, mapping[0]))
        dt, ct = domain.table, codomain.table
        for i in range(domain.order):
            for j in range(domain.order):
                if mapping[dt[i][j]] != ct[mapping[i]][mapping[j]]:
                    raise GroupError("not-homomorphism",
                                     f"map({i}*{j}) != map({i})*map({j})", (i, j))
        self.domain = domain
        self.codomain = codomain
        self.map = mapping

    @property
    def h(self) -> Subgroup:
        return self.domain.normal

    @property
    def k(self) -> Subgroup:
        return self.codomain.normal

    def inverse(self) -> "QuotientIso":
        inv = [0] * len(self.map)
        for i, j in enumerate(self.map):
            inv[j] = i
        return QuotientIso(self.codomain, self.domain, inv)

    def image(self, s: Iterable[int]) -> ElementSet:
        """``phi[s]`` for a union of cosets ``s`` of the domain subgroup."""
        idx = self.domain.indices_of_union(s)
        return self.codomain.union(self.map[i] for i in idx)

    def preimage(self, s: Iterable[int]) -> ElementSet:
        idx = self.codomain.indices_of_union(s)
        back = {j: i for i, j in enumerate(self.map)}
        return self.domain.union(back[j] for j in idx)

    def same_as(self, other: "QuotientIso") -> bool:
        return (self.domain.group is other.domain.group
                and self.codomain.group is other.codomain.group
                and self.h == other.h and self.k == other.k and self.map == other.map)

    def __repr__(self) -> str:
        return (f"QuotientIso({self.domain.group.name}/{list(self.h.elements)} -> "
                f"{self.codomain.group.name}/{list(self.k.elements)}, {list(self.map)})")


def quotient_iso(domain: QuotientGroup, codomain: QuotientGroup, mapping: Sequence[int]) -> QuotientIso:
    return QuotientIso(domain, codomain, mapping)


def identity_iso(g: FiniteGroup) -> QuotientIso:
    """The identity automorphism of ``G/{e}``."""
    q = QuotientGroup(g, trivial_subgroup(g))
    return QuotientIso(q, q, range(q.order))


def induced_iso(phi: QuotientIso, coarser: Subgroup) -> QuotientIso:
    """The map ``G_x/coarser -> G_y/phi[coarser]`` induced by ``phi``."""
    if coarser.parent is not phi.domain.group:
        raise GroupError("parent", "coarser subgroup lives in a different group")
    if not phi.h.members <= coarser.members:
        raise GroupError("not-coarser", f"{coarser} does not contain {phi.h}")
    target = phi.image(coarser.elements)
    try:
        target_sub = Subgroup(phi.codomain.group, tuple(target))
    except GroupError as exc:
        raise GroupError("image-not-subgroup", f"phi[{list(coarser.elements)}] is not a subgroup",
                         sorted(target)) from exc
    qd = QuotientGroup(phi.domain.group, coarser)
    qc = QuotientGroup(phi.codomain.group, target_sub)
    mapping = []
    for c in qd.cosets:
        img = phi.image(c.elements)
        mapping.append(qc.coset_index(img))
    return QuotientIso(qd, qc, mapping)


def inner_automorphism(q: QuotientGroup, c: Coset | Iterable[int]) -> tuple[int, ...]:
    """The index map ``D -> c^-1 * D * c`` on the cosets of ``q``."""
    ci = q.coset_index(c)
    t, inv = q.table, q.inverse
    return tuple(t[t[inv[ci]][d]][ci] for d in range(q.order))


def center_contains(q: QuotientGroup, c: Coset | Iterable[int]) -> bool:
    ci = q.coset_index(c)
    t = q.table
    return all(t[ci][d] == t[d][ci] for d in range(q.order))


# ---------------------------------------------------------------------------
# Isomorphism enumeration (used by the frame searches)
# ---------------------------------------------------------------------------


def generating_set(g: FiniteGroup) -> list[int]:
    gens: list[int] = []
    span = frozenset({0})
    for v in g.elements:
        if v not in span:
            gens.append(v)
            span = g.generated(gens)
    return gens


def isomorphisms(a: FiniteGroup, b: FiniteGroup) -> Iterator[tuple[int, ...]]:
    """Every isomorphism ``a -> b`` as an element map, in lexicographic order of generator images."""
    if a.order != b.order:
        return
    gens = generating_set(a)
    # words for every element as (previous element, generator) steps
    parent: dict[int, tuple[int, int]] = {}
    order = [0]
    seen = {0}
    for v in order:
        for gi, gv in enumerate(gens):
            w = a.table[v][gv]
            if w not in seen:
                seen.add(w)
                parent[w] = (v, gi)
                order.append(w)
    candidates = [[y for y in b.elements if b.element_order(y) == a.element_order(gv)]
                  for gv in gens]
    for images in product(*candidates):
        f = [-1] * a.order
        f[0] = 0
        for w in order[1:]:
            v, gi = parent[w]
            f[w] = b.table[f[v]][images[gi]]
        if sorted(f) != list(b.elements):
            continue
        if all(f[a.table[x][y]] == b.table[f[x]][f[y]] for x in a.elements for y in a.elements):
            yield tuple(f)


def quotient_isos(domain: QuotientGroup, codomain: QuotientGroup) -> Iterator[QuotientIso]:
    """All quotient isomorphisms between two quotients, in lexicographic map order."""
    maps = sorted(isomorphisms(domain.as_group(), codomain.as_group()))
    for m in maps:
        yield QuotientIso(domain, codomain, m)
