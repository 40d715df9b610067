"""The coset relation algebra of a group triple.

Atoms are the relations ``R_{xy,alpha}``; an element is an int bitset over
the global atom index. Concrete relations are kept per block ``(x, y)`` as a
tuple of row masks: row ``g`` has bit ``h`` set when ``(g, h)`` is in the
relation.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .groups import complex_product, set_inverse
from .frame import (
    GroupTriple,
    ValidationReport,
    check_pre_semi_frame,
    check_semi_frame,
    components,
    coset_enumeration,
)

Rows = tuple[int, ...]


class AlgebraError(ValueError):
    pass


class NotInAlgebra(AlgebraError):
    """A relation that is not a union of atoms; ``witness`` is ``(x, g, y, h)``."""

    def __init__(self, message: str, witness):
        super().__init__(message)
        self.witness = witness


def bits_of(n: int) -> Iterator[int]:
    while n:
        low = n & -n
        yield low.bit_length() - 1
        n ^= low


@dataclass(frozen=True)
class Atom:
    x: str
    y: str
    alpha: int

    def __str__(self) -> str:
        return f"R[{self.x},{self.y},{self.alpha}]"


class ConcreteRelation:
    """A binary relation on the tagged base set, stored block by block."""

    def __init__(self, sizes: dict[str, int], blocks: dict[tuple[str, str], Rows] | None = None):
        self.sizes = sizes
        self.blocks: dict[tuple[str, str], Rows] = {}
        for key, rows in (blocks or {}).items():
            if any(rows):
                self.blocks[key] = tuple(rows)

    @classmethod
    def from_pairs(cls, sizes: dict[str, int], pairs: Iterable[tuple[str, int, str, int]]):
        acc: dict[tuple[str, str], list[int]] = {}
        for x, g, y, h in pairs:
            rows = acc.setdefault((x, y), [0] * sizes[x])
            rows[g] |= 1 << h
        return cls(sizes, {k: tuple(v) for k, v in acc.items()})

    def pairs(self) -> Iterator[tuple[str, int, str, int]]:
        for (x, y), rows in sorted(self.blocks.items()):
            for g, row in enumerate(rows):
                for h in bits_of(row):
                    yield (x, g, y, h)

    def count(self) -> int:
        return sum(bin(r).count("1") for rows in self.blocks.values() for r in rows)

    def inverse(self) -> "ConcreteRelation":
        out = {}
        for (x, y), rows in self.blocks.items():
            inv = [0] * self.sizes[y]
            for g, row in enumerate(rows):
                for h in bits_of(row):
                    inv[h] |= 1 << g
            out[(y, x)] = tuple(inv)
        return ConcreteRelation(self.sizes, out)

    def compose(self, other: "ConcreteRelation") -> "ConcreteRelation":
        acc: dict[tuple[str, str], list[int]] = {}
        for (x, y), rows in self.blocks.items():
            for (y2, z), rows2 in other.blocks.items():
                if y2 != y:
                    continue
                out = acc.setdefault((x, z), [0] * self.sizes[x])
                for g, row in enumerate(rows):
                    v = 0
                    for h in bits_of(row):
                        v |= rows2[h]
                    out[g] |= v
        return ConcreteRelation(self.sizes, {k: tuple(v) for k, v in acc.items()})

    def union(self, other: "ConcreteRelation") -> "ConcreteRelation":
        keys = set(self.blocks) | set(other.blocks)
        out = {}
        for k in keys:
            a = self.blocks.get(k)
            b = other.blocks.get(k)
            if a is None:
                out[k] = b
            elif b is None:
                out[k] = a
            else:
                out[k] = tuple(u | v for u, v in zip(a, b))
        return ConcreteRelation(self.sizes, out)

    def intersect(self, other: "ConcreteRelation") -> "ConcreteRelation":
        out = {}
        for k, a in self.blocks.items():
            b = other.blocks.get(k)
            if b is not None:
                out[k] = tuple(u & v for u, v in zip(a, b))
        return ConcreteRelation(self.sizes, out)

    def contains(self, x: str, g: int, y: str, h: int) -> bool:
        rows = self.blocks.get((x, y))
        return bool(rows and rows[g] >> h & 1)

    def is_function(self) -> bool:
        """Every row with a pair has exactly one."""
        return all(r & (r - 1) == 0 for rows in self.blocks.values() for r in rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, ConcreteRelation) and self.blocks == other.blocks

    def __hash__(self):
        return hash(tuple(sorted(self.blocks.items())))

    def __repr__(self) -> str:
        return f"ConcreteRelation({self.count()} pairs in {len(self.blocks)} blocks)"


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    algebra: "CosetRelationAlgebra"
    bits: int

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra is other.algebra and self.bits == other.bits

    def __hash__(self):
        return hash((id(self.algebra), self.bits))

    def atoms(self) -> list[Atom]:
        return [self.algebra.atoms[i] for i in bits_of(self.bits)]

    def __or__(self, other):
        return self.algebra.union(self, other)

    def __and__(self, other):
        return self.algebra.intersect(self, other)

    def __invert__(self):
        return self.algebra.complement(self)

    def __le__(self, other):
        self.algebra._same(other)
        return self.bits & ~other.bits == 0

    def __repr__(self) -> str:
        return "{" + ", ".join(str(a) for a in self.atoms()) + "}"


# worker state for process pools (inherited through fork)
_WORKER: dict = {}


def _run_chunks(fn: Callable, chunks: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, chunks))


class CosetRelationAlgebra:
    def __init__(self, triple: GroupTriple):
        pre = check_pre_semi_frame(triple)
        if not pre.ok:
            bad = pre.failures()[0]
            raise AlgebraError(f"not a pre-semi-frame: {bad.condition} fails at "
                               f"({','.join(bad.instance)}): {bad.detail}")
        self.triple = triple
        self.semi_frame = check_semi_frame(triple).ok
        isos = triple.isos
        self.indices = triple.indices
        self.sizes = {x: triple.system[x].order for x in self.indices}
        self.blocks: list[tuple[str, str]] = isos.relation()
        self.atoms: list[Atom] = []
        self.block_atoms: dict[tuple[str, str], range] = {}
        self._enum: dict[tuple[str, str], tuple[int, ...]] = {}
        for x, y in self.blocks:
            n = isos.phi(x, y).domain.order
            start = len(self.atoms)
            self.atoms.extend(Atom(x, y, a) for a in range(n))
            self.block_atoms[(x, y)] = range(start, len(self.atoms))
            self._enum[(x, y)] = coset_enumeration(isos, x, y)
        self.index = {a: i for i, a in enumerate(self.atoms)}
        self.n = len(self.atoms)
        self._rows: list[Rows] = [self._atom_rows(a) for a in self.atoms]
        self.identity_bits = 0
        for x in self.indices:
            self.identity_bits |= 1 << self.block_atoms[(x, x)][0]
        self.unit_bits = (1 << self.n) - 1
        self.converse_table: list[int] = [self._converse_index(a) for a in self.atoms]
        self.otimes_table: list[list[int]] = [[0] * self.n for _ in range(self.n)]
        for y in self.indices:
            for x in self.indices:
                if not isos.in_e(x, y):
                    continue
                for z in self.indices:
                    if not isos.in_e(y, z):
                        continue
                    for i in self.block_atoms[(x, y)]:
                        row = self.otimes_table[i]
                        for j in self.block_atoms[(y, z)]:
                            row[j] = self._otimes_formula(i, j, shifted=True)

    # -- coset data -----------------------------------------------------
    def h_coset(self, x: str, y: str, gamma: int) -> frozenset:
        """``H_{xy,gamma}`` as an element set of ``G_x``."""
        q = self.triple.phi(x, y).domain
        return q.cosets[self._enum[(x, y)][gamma]].members

    def k_coset(self, x: str, y: str, gamma: int) -> frozenset:
        phi = self.triple.phi(x, y)
        return phi.codomain.cosets[phi.map[self._enum[(x, y)][gamma]]].members

    def _atom_rows(self, a: Atom) -> Rows:
        phi = self.triple.phi(a.x, a.y)
        enum = self._enum[(a.x, a.y)]
        qd, qc = phi.domain, phi.codomain
        ka = phi.map[enum[a.alpha]]
        masks = []
        for k in range(qc.order):
            m = 0
            for v in qc.cosets[qc.table[k][ka]].elements:
                m |= 1 << v
            masks.append(m)
        return tuple(masks[phi.map[qd.index[g]]] for g in range(qd.group.order))

    def _converse_index(self, a: Atom) -> int:
        g = self.triple.system[a.x]
        inv = set_inverse(self.h_coset(a.x, a.y, a.alpha), g)
        n = len(self._enum[(a.x, a.y)])
        beta = next(b for b in range(n) if self.h_coset(a.x, a.y, b) == inv)
        return self.index[Atom(a.y, a.x, beta)]

    def _otimes_formula(self, i: int, j: int, shifted: bool) -> int:
        a, b = self.atoms[i], self.atoms[j]
        if a.y != b.x:
            return 0
        x, y, z = a.x, a.y, b.y
        t = self.triple
        gx, gy = t.system[x], t.system[y]
        s = complex_product(self.k_coset(x, y, a.alpha), self.h_coset(y, z, b.alpha), gy)
        p = t.phi(x, y).preimage(s)
        if shifted:
            p = complex_product(p, t.c(x, y, z), gx)
        out = 0
        for k in self.block_atoms[(x, z)]:
            if self.h_coset(x, z, self.atoms[k].alpha) <= p:
                out |= 1 << k
        return out

    # -- element plumbing -------------------------------------------------
    def _same(self, e: AlgebraElement):
        if not isinstance(e, AlgebraElement) or e.algebra is not self:
            raise AlgebraError("element belongs to a different algebra")

    def element(self, bits: int) -> AlgebraElement:
        if bits < 0 or bits >> self.n:
            raise AlgebraError(f"bitset {bits:#x} has bits beyond the {self.n} atoms")
        return AlgebraElement(self, bits)

    def atom(self, x: str, y: str, alpha: int) -> AlgebraElement:
        return AlgebraElement(self, 1 << self.index[Atom(x, y, alpha)])

    @property
    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, 0)

    @property
    def one(self) -> AlgebraElement:
        return AlgebraElement(self, self.unit_bits)

    @property
    def identity(self) -> AlgebraElement:
        return AlgebraElement(self, self.identity_bits)

    def subidentity_atoms(self) -> list[int]:
        return [self.block_atoms[(x, x)][0] for x in self.indices]

    # -- bit-level operations ---------------------------------------------
    def converse_bits(self, e: int) -> int:
        out = 0
        for i in bits_of(e):
            out |= 1 << self.converse_table[i]
        return out

    def otimes_bits(self, e: int, f: int) -> int:
        out = 0
        fl = list(bits_of(f))
        for i in bits_of(e):
            row = self.otimes_table[i]
            for j in fl:
                out |= row[j]
        return out

    def rows(self, i: int) -> Rows:
        return self._rows[i]

    # -- public element operations ----------------------------------------
    def union(self, e: AlgebraElement, f: AlgebraElement) -> AlgebraElement:
        self._same(e), self._same(f)
        return AlgebraElement(self, e.bits | f.bits)

    def intersect(self, e: AlgebraElement, f: AlgebraElement) -> AlgebraElement:
        self._same(e), self._same(f)
        return AlgebraElement(self, e.bits & f.bits)

    def complement(self, e: AlgebraElement) -> AlgebraElement:
        self._same(e)
        return AlgebraElement(self, self.unit_bits & ~e.bits)

    def converse(self, e: AlgebraElement) -> AlgebraElement:
        self._same(e)
        return AlgebraElement(self, self.converse_bits(e.bits))

    def otimes(self, e: AlgebraElement, f: AlgebraElement) -> AlgebraElement:
        self._same(e), self._same(f)
        return AlgebraElement(self, self.otimes_bits(e.bits, f.bits))

    def concrete(self, e: AlgebraElement | int) -> ConcreteRelation:
        bits = e if isinstance(e, int) else e.bits
        if not isinstance(e, int):
            self._same(e)
        acc: dict[tuple[str, str], list[int]] = {}
        for i in bits_of(bits):
            a = self.atoms[i]
            rows = acc.setdefault((a.x, a.y), [0] * self.sizes[a.x])
            for g, r in enumerate(self._rows[i]):
                rows[g] |= r
        return ConcreteRelation(self.sizes, {k: tuple(v) for k, v in acc.items()})

    def abstract(self, r: ConcreteRelation) -> AlgebraElement:
        """The atom set whose union is ``r``; raises :class:`NotInAlgebra` otherwise."""
        bits = 0
        for x, y in self.blocks:
            rows = r.blocks.get((x, y))
            if rows is None:
                continue
            for i in self.block_atoms[(x, y)]:
                ar = self._rows[i]
                hit = any(u & v for u, v in zip(ar, rows))
                if not hit:
                    continue
                if all(u & ~v == 0 for u, v in zip(ar, rows)):
                    bits |= 1 << i
                else:
                    g = next(g for g, (u, v) in enumerate(zip(ar, rows)) if u & v)
                    h = next(bits_of(ar[g] & rows[g]))
                    raise NotInAlgebra(
                        f"pair ({x}:{g}, {y}:{h}) lies in {self.atoms[i]} but the atom is not "
                        f"contained in the relation", (x, g, y, h))
        for (x, y), rows in sorted(r.blocks.items()):
            if (x, y) not in self.block_atoms:
                g = next(g for g, v in enumerate(rows) if v)
                raise NotInAlgebra(f"pair in block ({x},{y}) lies outside the unit",
                                   (x, g, y, next(bits_of(rows[g]))))
        return AlgebraElement(self, bits)

    def try_abstract(self, r: ConcreteRelation) -> AlgebraElement | None:
        try:
            return self.abstract(r)
        except NotInAlgebra:
            return None

    # -- atom operations ---------------------------------------------------
    def atom_converse(self, a: Atom) -> Atom:
        return self.atoms[self.converse_table[self.index[a]]]

    def atom_otimes(self, a: Atom, b: Atom) -> AlgebraElement:
        return AlgebraElement(self, self.otimes_table[self.index[a]][self.index[b]])

    def compose_concrete(self, i: int, j: int) -> ConcreteRelation:
        return self.concrete(1 << i).compose(self.concrete(1 << j))

    def atom_compose_relational(self, a: Atom, b: Atom):
        """``(in_A, value)``: the raw relational composition, as an element when it lies in A."""
        raw = self.compose_concrete(self.index[a], self.index[b])
        e = self.try_abstract(raw)
        return (True, e) if e is not None else (False, raw)

    def composition_formula(self, a: Atom, b: Atom) -> AlgebraElement:
        """The unshifted formula, valid for relational composition in a group frame."""
        return AlgebraElement(self, self._otimes_formula(self.index[a], self.index[b], False))

    def compatible_pairs(self) -> Iterator[tuple[int, int]]:
        for i, a in enumerate(self.atoms):
            for y2, z in self.blocks:
                if y2 == a.y:
                    for j in self.block_atoms[(y2, z)]:
                        yield i, j


# ---------------------------------------------------------------------------
# Reports on the built algebra
# ---------------------------------------------------------------------------


def build_atoms(t: GroupTriple) -> CosetRelationAlgebra:
    return CosetRelationAlgebra(t)


def verify_partition(alg: CosetRelationAlgebra) -> ValidationReport:
    rep = ValidationReport("partition")
    for x, y in alg.blocks:
        full = (1 << alg.sizes[y]) - 1
        acc = [0] * alg.sizes[x]
        ok = True
        detail = ""
        for i in alg.block_atoms[(x, y)]:
            rows = alg.rows(i)
            if not any(rows):
                ok, detail = False, f"{alg.atoms[i]} is empty"
                break
            if any(a & r for a, r in zip(acc, rows)):
                ok, detail = False, f"{alg.atoms[i]} overlaps an earlier atom"
                break
            acc = [a | r for a, r in zip(acc, rows)]
        if ok and any(a != full for a in acc):
            ok, detail = False, "atoms do not cover the block"
        rep.add("partition", (x, y), ok, detail)
    return rep


def verify_converse(alg: CosetRelationAlgebra) -> ValidationReport:
    rep = ValidationReport("converse")
    for i, a in enumerate(alg.atoms):
        j = alg.converse_table[i]
        ok = alg.concrete(1 << j) == alg.concrete(1 << i).inverse() and alg.converse_table[j] == i
        rep.add("converse", (a.x, a.y, a.alpha), ok,
                "" if ok else f"converse of {a} is not {alg.atoms[j]}")
    return rep


def verify_block_structure(alg: CosetRelationAlgebra) -> ValidationReport:
    """Products of atoms with different middle indices are empty (checked once per block shape)."""
    rep = ValidationReport("block structure")
    for (x, y) in alg.blocks:
        for (w, z) in alg.blocks:
            if y == w:
                continue
            i, j = alg.block_atoms[(x, y)][0], alg.block_atoms[(w, z)][0]
            val = alg._otimes_formula(i, j, shifted=True) | alg.otimes_table[i][j]
            rep.add("empty off-block product", (x, y, w, z), val == 0)
    return rep


def _r4_chunk(first: Sequence[int]) -> list[tuple]:
    alg: CosetRelationAlgebra = _WORKER["alg"]
    fails = []
    tab = alg.otimes_table
    for i in first:
        a = alg.atoms[i]
        for (y, z) in alg.blocks:
            if y != a.y:
                continue
            for j in alg.block_atoms[(y, z)]:
                ab = tab[i][j]
                for (z2, w) in alg.blocks:
                    if z2 != z:
                        continue
                    for k in alg.block_atoms[(z2, w)]:
                        left = 0
                        for m in bits_of(ab):
                            left |= tab[m][k]
                        bc = tab[j][k]
                        right = 0
                        for m in bits_of(bc):
                            right |= tab[i][m]
                        if left != right:
                            fails.append((i, j, k))
    return fails


def _r11_chunk(first: Sequence[int]) -> list[tuple]:
    alg: CosetRelationAlgebra = _WORKER["alg"]
    fails = []
    tab, conv = alg.otimes_table, alg.converse_table
    for i in first:
        a = alg.atoms[i]
        ci = conv[i]
        for (y, z) in alg.blocks:
            if y != a.y:
                continue
            for j in alg.block_atoms[(y, z)]:
                rs = tab[i][j]
                for k in alg.block_atoms[(a.x, z)]:
                    # s <= r^ (x) t  implies  t <= r (x) s
                    if tab[ci][k] >> j & 1 and not rs >> k & 1:
                        fails.append((i, j, k))
    return fails


def _chunks(n: int, jobs: int) -> list[list[int]]:
    if jobs <= 1:
        return [list(range(n))]
    size = max(1, -(-n // (jobs * 4)))
    return [list(range(s, min(n, s + size))) for s in range(0, n, size)]


def check_axioms(alg: CosetRelationAlgebra, jobs: int = 1, samples: int = 200,
                 seed: int = 0) -> ValidationReport:
    """R5 and R7 on all atoms and atom pairs, R4 and R11 on all compatible atom triples,
    the remaining axioms on a seeded sample of elements."""
    rep = ValidationReport("axioms")
    atoms = alg.atoms
    tab = alg.otimes_table

    def name(*ids):
        return tuple(str(atoms[i]) for i in ids)

    fails5 = [i for i in range(alg.n) if alg.otimes_bits(1 << i, alg.identity_bits) != 1 << i]
    rep.add("R5", ("all atoms",), not fails5,
            "" if not fails5 else f"{atoms[fails5[0]]} (x) 1' != {atoms[fails5[0]]}",
            name(*fails5[:1]))

    fails7 = []
    for i, j in alg.compatible_pairs():
        lhs = alg.converse_bits(tab[i][j])
        rhs = tab[alg.converse_table[j]][alg.converse_table[i]]
        if lhs != rhs:
            fails7.append((i, j))
    rep.add("R7", ("all atom pairs",), not fails7,
            "" if not fails7 else "(r (x) s)^ != s^ (x) r^ for r=%s, s=%s" % name(*fails7[0]),
            name(*fails7[0]) if fails7 else ())

    _WORKER["alg"] = alg
    try:
        chunks = _chunks(alg.n, jobs)
        fails11 = [f for part in _run_chunks(_r11_chunk, chunks, jobs) for f in part]
        fails4 = [f for part in _run_chunks(_r4_chunk, chunks, jobs) for f in part]
    finally:
        _WORKER.pop("alg", None)
    rep.add("R11", ("all compatible atom triples",), not fails11,
            "" if not fails11 else
            "s <= r^ (x) t but not t <= r (x) s for r=%s, s=%s, t=%s" % name(*fails11[0]),
            name(*fails11[0]) if fails11 else ())
    rep.add("R4", ("all compatible atom triples",), not fails4,
            "" if not fails4 else
            "(r (x) s) (x) t != r (x) (s (x) t) for r=%s, s=%s, t=%s" % name(*fails4[0]),
            name(*fails4[0]) if fails4 else ())

    rng = random.Random(seed)
    unit = alg.unit_bits
    sample = [rng.getrandbits(alg.n) & unit for _ in range(samples)] if alg.n else [0] * samples
    triples = [(sample[i], sample[(i + 1) % samples], sample[(i + 2) % samples])
               for i in range(samples)]
    ok1 = all(r | s == s | r for r, s, _ in triples)
    ok2 = all(r | (s | t) == (r | s) | t for r, s, t in triples)

    def neg(v):
        return unit & ~v

    # Huntington's law: -(-r + s) + -(-r + -s) = r
    ok3 = all(neg(neg(r) | s) | neg(neg(r) | neg(s)) == r for r, s, _ in triples)
    ok6 = all(alg.converse_bits(alg.converse_bits(r)) == r for r, _, _ in triples)
    ok8 = all(alg.otimes_bits(r | s, t) == alg.otimes_bits(r, t) | alg.otimes_bits(s, t)
              for r, s, t in triples[: max(1, samples // 4)])
    ok9 = all(alg.converse_bits(r | s) == alg.converse_bits(r) | alg.converse_bits(s)
              for r, s, _ in triples)
    for label, ok in (("R1", ok1), ("R2", ok2), ("R3", ok3), ("R6", ok6), ("R8", ok8), ("R9", ok9)):
        rep.add(label, (f"{samples} sampled elements",), ok)
    return rep


AXIOMS = ("R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8", "R9", "R11")


@dataclass
class MeasureEntry:
    index: str
    measure: int
    square_pairs: int
    square_is_block: bool
    atoms_in_square: int
    all_bijective: bool
    abstract_functional: bool

    @property
    def ok(self) -> bool:
        size = self.measure
        return (self.square_is_block and self.atoms_in_square == size and self.all_bijective
                and self.abstract_functional and self.square_pairs == size * size)


@dataclass
class MeasurabilityReport:
    entries: list[MeasureEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def measures(self) -> dict[str, int]:
        return {e.index: e.measure for e in self.entries}


def measurability_report(alg: CosetRelationAlgebra) -> MeasurabilityReport:
    out = MeasurabilityReport()
    for x in alg.indices:
        sub = 1 << alg.block_atoms[(x, x)][0]
        square = alg.otimes_bits(alg.otimes_bits(sub, alg.unit_bits), sub)
        conc = alg.concrete(square)
        n = alg.sizes[x]
        block_full = conc.blocks.get((x, x)) == tuple([(1 << n) - 1] * n) and len(conc.blocks) == 1
        atoms = list(bits_of(square))
        bij = all(alg.concrete(1 << i).is_function() and alg.concrete(1 << i).inverse().is_function()
                  for i in atoms)
        func = all(alg.otimes_bits(alg.converse_bits(1 << i), 1 << i) & ~alg.identity_bits == 0
                   for i in atoms)
        out.entries.append(MeasureEntry(x, len(atoms), conc.count(), block_full, len(atoms),
                                        bij, func))
    return out


def is_simple(alg: CosetRelationAlgebra) -> bool:
    if alg.n == 0:
        return False
    one = alg.unit_bits
    return all(alg.otimes_bits(alg.otimes_bits(one, 1 << r), one) == one
               for r in alg.subidentity_atoms())


@dataclass
class Decomposition:
    factors: list[CosetRelationAlgebra]
    correspondence: dict[int, tuple[int, int]]
    report: ValidationReport

    @property
    def ok(self) -> bool:
        return self.report.ok


def decompose(alg: CosetRelationAlgebra) -> Decomposition:
    """Factor algebras on the components of the frame, with the product correspondence verified."""
    rep = ValidationReport("decomposition")
    factors = [CosetRelationAlgebra(c) for c in components(alg.triple)]
    corr: dict[int, tuple[int, int]] = {}
    owner = {}
    for f, fac in enumerate(factors):
        for x in fac.indices:
            owner[x] = f
        for j, a in enumerate(fac.atoms):
            i = alg.index.get(a)
            if i is None:
                rep.add("atom correspondence", (str(a),), False, "factor atom missing from algebra")
                continue
            corr[i] = (f, j)
    rep.add("atom correspondence", ("bijective",),
            len(corr) == alg.n and sum(fac.n for fac in factors) == alg.n)
    cross = [(x, y) for x in alg.indices for y in alg.indices
             if owner.get(x) != owner.get(y) and (x, y) in alg.block_atoms]
    rep.add("cross-component blocks are zero", ("all",), not cross,
            "" if not cross else f"block {cross[0]} is in the unit")
    ok_conv = all(corr[alg.converse_table[i]] == (f, factors[f].converse_table[j])
                  for i, (f, j) in corr.items())
    rep.add("converse corresponds", ("all atoms",), ok_conv)
    ok_id = all(
        (alg.identity_bits >> i & 1) == (factors[f].identity_bits >> j & 1)
        for i, (f, j) in corr.items())
    rep.add("identity corresponds", ("all atoms",), ok_id)

    def lift(f: int, bits: int) -> int:
        out = 0
        fac = factors[f]
        for j in bits_of(bits):
            out |= 1 << alg.index[fac.atoms[j]]
        return out

    bad = None
    for i, (f, j) in corr.items():
        for i2, (f2, j2) in corr.items():
            want = lift(f, factors[f].otimes_table[j][j2]) if f == f2 else 0
            if alg.otimes_table[i][i2] != want:
                bad = (alg.atoms[i], alg.atoms[i2])
                break
        if bad:
            break
    rep.add("product corresponds", ("all atom pairs",), bad is None,
            "" if bad is None else f"{bad[0]} (x) {bad[1]} differs from the factor product")
    return Decomposition(factors, corr, rep)


def jobs_default() -> int:
    return max(1, os.cpu_count() or 1)
