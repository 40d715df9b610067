"""The five-vertex pentagon triple over (Z2)^3, its abelian generalizations,
and the scaffold chase that shows its coset algebra has no representation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Iterator, Mapping, Sequence

from .groups import (
    FiniteGroup,
    GroupError,
    QuotientGroup,
    QuotientIso,
    Subgroup,
    cyclic_group,
    direct_product,
    quotient_isos,
    set_inverse,
    subgroup,
)
from .algebra import bits_of
from .frame import (
    CosetSystem,
    FrameError,
    GroupSystem,
    GroupTriple,
    IsoSystem,
    ValidationReport,
    check_coset_conditions,
    check_semi_frame,
)

VERTICES = ("p", "q", "r", "s", "t")

# (x, y) -> label of H_xy, as read off the normal subgroup diagram
LABEL_ANCHORS: dict[tuple[str, str], int] = {
    ("p", "t"): 3, ("t", "p"): 0,
    ("q", "s"): 2, ("s", "q"): 1,
    ("p", "q"): 0, ("q", "p"): 0,
}

# phi_pq on the cosets of L0, by coordinate representatives: C0->C0, C3->C1, C1->C3, C2->C2
PHI_PQ_ANCHOR: tuple[tuple[tuple[int, int, int], tuple[int, int, int]], ...] = (
    ((0, 0, 0), (0, 0, 0)),
    ((0, 1, 1), (0, 1, 0)),
    ((0, 1, 0), (0, 1, 1)),
    ((0, 0, 1), (0, 0, 1)),
)


class SearchError(RuntimeError):
    """A constrained search found nothing; for the pentagon this means a bug."""


# ---------------------------------------------------------------------------
# Cube groups and their four distinguished subgroups
# ---------------------------------------------------------------------------


def cube(base: FiniteGroup) -> FiniteGroup:
    g = direct_product(direct_product(base, base), base)
    return FiniteGroup(g.table, name=f"{base.name}^3", coords=g.coords)


def line_subgroups(g3: FiniteGroup, base: FiniteGroup) -> tuple[Subgroup, ...]:
    """The three factor embeddings and the diagonal of ``base^3``."""
    n = base.order
    f0 = [g3.element((a, 0, 0)) for a in range(n)]
    f1 = [g3.element((0, a, 0)) for a in range(n)]
    f2 = [g3.element((0, 0, a)) for a in range(n)]
    diag = [g3.element((a, a, a)) for a in range(n)]
    return tuple(subgroup(g3, s) for s in (f0, f1, f2, diag))


# ---------------------------------------------------------------------------
# Labelings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PentagonLabeling:
    labels: tuple[tuple[tuple[str, str], int], ...]

    @classmethod
    def from_rows(cls, rows: Mapping[str, Sequence[int]]) -> "PentagonLabeling":
        """``rows[x]`` lists the labels of ``x``'s edges to the other vertices in vertex order."""
        out = []
        for x in VERTICES:
            others = [y for y in VERTICES if y != x]
            for y, lab in zip(others, rows[x]):
                out.append(((x, y), int(lab)))
        return cls(tuple(out))

    def __getitem__(self, pair: tuple[str, str]) -> int:
        return dict(self.labels)[pair]

    def row(self, x: str) -> tuple[int, ...]:
        d = dict(self.labels)
        return tuple(d[(x, y)] for y in VERTICES if y != x)

    def rows(self) -> dict[str, tuple[int, ...]]:
        return {x: self.row(x) for x in VERTICES}

    def validate(self) -> list[str]:
        problems = []
        d = dict(self.labels)
        for x in VERTICES:
            row = self.row(x)
            if sorted(row) != [0, 1, 2, 3]:
                problems.append(f"labels at {x} are not distinct: {row}")
        for pair, lab in LABEL_ANCHORS.items():
            if d.get(pair) != lab:
                problems.append(f"label{pair} = {d.get(pair)}, expected {lab}")
        return problems


# ---------------------------------------------------------------------------
# Iso search
# ---------------------------------------------------------------------------


class _Cube:
    """Shared data for one base group: the cube, its lines, and cached quotients."""

    def __init__(self, base: FiniteGroup):
        if not base.is_abelian():
            raise GroupError("not-abelian", f"base group {base.name} is not abelian")
        if base.order < 2:
            raise GroupError("trivial", "base group must be nontrivial")
        self.base = base
        self.g = cube(base)
        self.lines = line_subgroups(self.g, base)
        self._q: dict[int, QuotientGroup] = {}

    def quotient(self, label: int) -> QuotientGroup:
        if label not in self._q:
            self._q[label] = QuotientGroup(self.g, self.lines[label])
        return self._q[label]

    def product(self, *labels: int) -> frozenset:
        s = frozenset({0})
        t = self.g.table
        for lab in labels:
            s = frozenset(t[a][b] for a in s for b in self.lines[lab].elements)
        return s


def _meets_image_condition(cb: _Cube, labeling: Mapping[tuple[str, str], int],
                           x: str, y: str, phi: QuotientIso) -> bool:
    hxy, kxy = labeling[(x, y)], labeling[(y, x)]
    for z in VERTICES:
        if z in (x, y):
            continue
        if phi.image(cb.product(hxy, labeling[(x, z)])) != cb.product(kxy, labeling[(y, z)]):
            return False
    return True


def _meets_anchor(cb: _Cube, phi: QuotientIso, anchor) -> bool:
    g = cb.g
    for src, dst in anchor:
        a = phi.domain.cosets[phi.domain.coset_of(g.element(src))].members
        b = phi.codomain.cosets[phi.codomain.coset_of(g.element(dst))].members
        if phi.image(a) != b:
            return False
    return True


def pair_candidates(cb: _Cube, labeling: Mapping[tuple[str, str], int], x: str, y: str,
                    anchor=None) -> list[QuotientIso]:
    """Quotient isos ``G/H_xy -> G/K_xy`` meeting the image condition, in lexicographic order."""
    out = []
    for phi in quotient_isos(cb.quotient(labeling[(x, y)]), cb.quotient(labeling[(y, x)])):
        if anchor is not None and not _meets_anchor(cb, phi, anchor):
            continue
        if _meets_image_condition(cb, labeling, x, y, phi):
            out.append(phi)
    return out


def _get(isos: Mapping[tuple[str, str], QuotientIso], x: str, y: str) -> QuotientIso:
    if (x, y) in isos:
        return isos[(x, y)]
    return isos[(y, x)].inverse()


def _coherent(cb: _Cube, labeling, isos, x: str, y: str, z: str) -> bool:
    """phi_yz[phi_xy[D]] = phi_xz[D] for each coset D of H_xy H_xz."""
    hh = cb.product(labeling[(x, y)], labeling[(x, z)])
    q = QuotientGroup(cb.g, Subgroup(cb.g, tuple(hh)))
    pxy, pyz, pxz = _get(isos, x, y), _get(isos, y, z), _get(isos, x, z)
    try:
        return all(pyz.image(pxy.image(c.members)) == pxz.image(c.members) for c in q.cosets)
    except GroupError:
        return False


def find_frame_isos(base: FiniteGroup, labeling: PentagonLabeling,
                    anchor=PHI_PQ_ANCHOR, limit: int | None = 1) -> list[dict]:
    """Coherent iso systems ``{(x, y): phi_xy}`` for ``x < y``, lexicographically by map.

    ``anchor`` constrains ``phi_pq``; it only makes sense for the base Z2 and
    is ignored for other bases.
    """
    cb = _Cube(base)
    lab = dict(labeling.labels)
    use_anchor = anchor if base.order == 2 else None
    order = [(x, y) for i, x in enumerate(VERTICES) for y in VERTICES[i + 1:]]
    cands = {pr: pair_candidates(cb, lab, *pr, anchor=use_anchor if pr == ("p", "q") else None)
             for pr in order}
    found: list[dict] = []
    chosen: dict[tuple[str, str], QuotientIso] = {}

    def ready(x, y, z):
        return all(((a, b) in chosen or (b, a) in chosen) for a, b in ((x, y), (y, z), (x, z)))

    def step(i: int) -> bool:
        if i == len(order):
            found.append(dict(chosen))
            return limit is not None and len(found) >= limit
        x, y = order[i]
        for phi in cands[(x, y)]:
            chosen[(x, y)] = phi
            ok = True
            for z in VERTICES:
                if z in (x, y):
                    continue
                for a, b, c in permutations((x, y, z)):
                    if ready(a, b, c) and not _coherent(cb, lab, chosen, a, b, c):
                        ok = False
                        break
                if not ok:
                    break
            if ok and step(i + 1):
                return True
            del chosen[(x, y)]
        return False

    step(0)
    return found


def labelings(anchor=PHI_PQ_ANCHOR) -> Iterator[PentagonLabeling]:
    """Every anchored labeling whose pairs all admit an iso, in lexicographic row order."""
    cb = _Cube(cyclic_group(2))
    rows: dict[str, tuple[int, ...]] = {}
    lab: dict[tuple[str, str], int] = {}

    def assign(x, row):
        others = [y for y in VERTICES if y != x]
        for y, v in zip(others, row):
            lab[(x, y)] = v

    def unassign(x):
        for y in VERTICES:
            lab.pop((x, y), None)

    def consistent(x) -> bool:
        for (a, b), v in LABEL_ANCHORS.items():
            if (a, b) in lab and lab[(a, b)] != v:
                return False
        i = VERTICES.index(x)
        for u in VERTICES[:i]:
            anc = anchor if (u, x) == ("p", "q") else None
            if not pair_candidates(cb, lab, u, x, anc):
                return False
        return True

    def rec(i: int):
        if i == len(VERTICES):
            yield PentagonLabeling.from_rows(rows)
            return
        x = VERTICES[i]
        for row in permutations(range(4)):
            assign(x, row)
            rows[x] = row
            if consistent(x):
                yield from rec(i + 1)
            unassign(x)
            del rows[x]

    yield from rec(0)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


@dataclass
class PentagonBuild:
    triple: GroupTriple
    labeling: PentagonLabeling
    isos: dict
    report: ValidationReport
    notes: list[str] = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "labels": {x: list(r) for x, r in self.labeling.rows().items()},
            "isos": {f"{x}{y}": list(phi.map) for (x, y), phi in sorted(self.isos.items())},
            "valid": self.report.ok,
        }


def build_generalized(base: FiniteGroup, labeling: PentagonLabeling,
                      isos: Mapping[tuple[str, str], QuotientIso] | None = None,
                      shift: int | None = None, validate: bool = True) -> GroupTriple:
    """The pentagon construction over ``base^3``.

    ``isos`` maps each ``(x, y)`` with ``x < y`` to a quotient iso between the
    cubes of this call's base (get them from :func:`find_frame_isos`); they are
    validated, not derived. ``shift`` is a representative of ``C_pqr``;
    by default the least element outside ``H_pq H_pr``.
    """
    problems = labeling.validate()
    if problems:
        raise FrameError("; ".join(problems))
    cb = _Cube(base)
    lab = dict(labeling.labels)
    if isos is None:
        found = find_frame_isos(base, labeling)
        if not found:
            raise SearchError("no coherent quotient isomorphisms for this labeling")
        isos = found[0]
    g = cb.g
    system = GroupSystem(VERTICES, {x: g for x in VERTICES})
    forward = {}
    for (x, y), phi in isos.items():
        # isos may come from a different cube object; rebuild over this one
        dom = cb.quotient(lab[(x, y)])
        cod = cb.quotient(lab[(y, x)])
        if dom.order != phi.domain.order or phi.h.elements != dom.normal.elements \
                or phi.k.elements != cod.normal.elements:
            raise FrameError(f"iso for ({x},{y}) does not match the labeling")
        forward[(x, y)] = QuotientIso(dom, cod, phi.map)
    iso_sys = IsoSystem.from_forward(system, [VERTICES], forward)
    hh = cb.product(lab[("p", "q")], lab[("p", "r")])
    if shift is None:
        shift = min(v for v in g.elements if v not in hh)
    elif shift in hh:
        raise FrameError("C_pqr must be a non-identity coset")
    c = frozenset(g.table[shift][h] for h in hh)
    phi_pq, phi_pr = iso_sys.phi("p", "q"), iso_sys.phi("p", "r")
    c_qrp = phi_pq.image(c)
    c_rpq = phi_pr.image(c)
    cos = {
        ("p", "q", "r"): c,
        ("p", "r", "q"): set_inverse(c, g),
        ("q", "r", "p"): c_qrp,
        ("q", "p", "r"): set_inverse(c_qrp, g),
        ("r", "p", "q"): c_rpq,
        ("r", "q", "p"): set_inverse(c_rpq, g),
    }
    reps = {t: min(s) for t, s in cos.items()}
    triple = GroupTriple(system, iso_sys, CosetSystem(iso_sys, reps))
    if validate:
        rep = check_semi_frame(triple)
        rep.extend(check_coset_conditions(triple, require_semi_frame=False))
        if not rep.ok:
            bad = rep.failures()[0]
            raise FrameError(f"{bad.condition} fails at ({','.join(bad.instance)}): {bad.detail}")
    return triple


@lru_cache(maxsize=1)
def pentagon_construction() -> PentagonBuild:
    z2 = cyclic_group(2)
    for labeling in labelings():
        found = find_frame_isos(z2, labeling)
        if not found:
            continue
        isos = found[0]
        triple = build_generalized(z2, labeling, isos, validate=False)
        rep = check_semi_frame(triple)
        rep.extend(check_coset_conditions(triple, require_semi_frame=False))
        if not rep.ok:
            bad = rep.failures()[0]
            raise SearchError(f"pentagon candidate fails {bad.condition} at {bad.instance}")
        fixed = {xy: triple.phi(*xy) for xy in isos}
        return PentagonBuild(triple, labeling, fixed, rep)
    raise SearchError("no labeling completion admits a coherent iso system")


def build_pentagon() -> GroupTriple:
    return pentagon_construction().triple


def generalized_pentagon(base: FiniteGroup, shift: int | None = None,
                         choice: int = 0) -> GroupTriple:
    """``base^3`` version on the pentagon's labeling; ``choice`` picks among coherent iso systems."""
    labeling = pentagon_construction().labeling
    found = find_frame_isos(base, labeling, limit=choice + 1)
    if len(found) <= choice:
        raise SearchError(f"only {len(found)} coherent iso systems for base {base.name}")
    return build_generalized(base, labeling, found[choice], shift=shift)


# ---------------------------------------------------------------------------
# Scaffolds and the chase
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Scaffold:
    """An atom ``a_xy`` for every pair of indices, stored as global atom indices."""

    entries: tuple[tuple[tuple[str, str], int], ...]

    def a(self, x: str, y: str) -> int:
        return dict(self.entries)[(x, y)]

    def as_dict(self) -> dict[tuple[str, str], int]:
        return dict(self.entries)


def _roles(alg, triangle: Sequence[str]) -> tuple[str, str, str, str, str]:
    p, q, r = triangle
    rest = [x for x in alg.indices if x not in (p, q, r)]
    if len(rest) != 2 or len(set(triangle)) != 3 or any(x not in alg.indices for x in triangle):
        raise FrameError("the chase needs five indices: a triangle and two others")
    if len(alg.triple.isos.classes) != 1:
        raise FrameError("scaffolds need a simple frame")
    return p, q, r, rest[0], rest[1]


def triangle_triples(triangle: Sequence[str]) -> frozenset:
    return frozenset(permutations(tuple(triangle)))


def enumerate_scaffolds(alg, exempt: Iterable[tuple[str, str, str]] = (),
                        limit: int | None = None) -> list[Scaffold]:
    """Every atom system with ``a_xx`` the subidentity atom, ``a_yx`` the converse of ``a_xy``
    and ``a_xz <= a_xy (x) a_yz`` outside ``exempt``; lexicographic in atom indices."""
    exempt = frozenset(exempt)
    idx = alg.indices
    if len(alg.triple.isos.classes) > 1:
        return []
    tab, conv = alg.otimes_table, alg.converse_table
    cur: dict[tuple[str, str], int] = {(x, x): alg.block_atoms[(x, x)][0] for x in idx}
    order = [(x, y) for i, x in enumerate(idx) for y in idx[i + 1:]]
    out: list[Scaffold] = []

    def fine(x: str, y: str) -> bool:
        for u, v, w in product(idx, repeat=3):
            if (u, v, w) in exempt:
                continue
            if not {x, y} <= {u, v, w}:
                continue
            try:
                a, b, c = cur[(u, v)], cur[(v, w)], cur[(u, w)]
            except KeyError:
                continue
            if not tab[a][b] >> c & 1:
                return False
        return True

    def rec(i: int) -> bool:
        if i == len(order):
            out.append(Scaffold(tuple(sorted(cur.items(), key=lambda kv: (
                alg.triple.system.position[kv[0][0]], alg.triple.system.position[kv[0][1]])))))
            return limit is not None and len(out) >= limit
        x, y = order[i]
        for a in alg.block_atoms[(x, y)]:
            cur[(x, y)] = a
            cur[(y, x)] = conv[a]
            if fine(x, y) and rec(i + 1):
                return True
            del cur[(x, y)], cur[(y, x)]
        return False

    rec(0)
    return out


def enumerate_pre_scaffolds(alg, triangle: Sequence[str] = ("p", "q", "r"),
                            limit: int | None = None) -> list[Scaffold]:
    """Scaffolds with condition (3) waived on the permutations of ``triangle``."""
    return enumerate_scaffolds(alg, triangle_triples(triangle), limit)


def verify_scaffold_properties(alg, s: Scaffold, triangle: Sequence[str] = ("p", "q", "r"),
                               exempt_triangle: bool = False) -> ValidationReport:
    """Properties (4)-(7) checked bit-exactly on concrete relations."""
    rep = ValidationReport("scaffold properties")
    p, q, r, s_, t_ = _roles(alg, triangle)
    tri = set(triangle)
    idx = alg.indices
    d = s.as_dict()

    def conc(i):
        return alg.concrete(1 << i)

    rep.add("(1)", ("all",), all(d[(x, x)] == alg.block_atoms[(x, x)][0] for x in idx))
    for x, y in product(idx, repeat=2):
        ok = conc(d[(y, x)]) == conc(d[(x, y)]).inverse()
        rep.add("(4)", (x, y), ok)
    for x, y, z in product(idx, repeat=3):
        if exempt_triangle and (x, y, z) in triangle_triples(triangle):
            continue
        ok = bool(alg.otimes_table[d[(x, y)]][d[(y, z)]] >> d[(x, z)] & 1)
        rep.add("(3)", (x, y, z), ok)
    for x, y, z in product(idx, repeat=3):
        ot = alg.concrete(alg.otimes_table[d[(x, y)]][d[(y, z)]])
        co = alg.compose_concrete(d[(x, y)], d[(y, z)])
        if {x, y, z} == tri:
            n_x, n_z = alg.sizes[x], alg.sizes[z]
            full = [(1 << n_z) - 1] * n_x
            cr = co.blocks.get((x, z), tuple([0] * n_x))
            want = tuple(f & ~c for f, c in zip(full, cr))
            ok = ot.blocks.get((x, z), tuple([0] * n_x)) == want
            rep.add("(6)", (x, y, z), ok,
                    "" if ok else f"{ot.count()} product pairs vs {co.count()} composition pairs")
        else:
            ok = ot == co
            rep.add("(5)", (x, y, z), ok)
    for a, b in ((p, q), (q, r), (p, r)):
        for u, v in ((a, b), (b, a)):
            inter = (alg.otimes_table[d[(u, s_)]][d[(s_, v)]]
                     & alg.otimes_table[d[(u, t_)]][d[(t_, v)]])
            ok = inter == 1 << d[(u, v)]
            rep.add("(7)", (u, v), ok,
                    "" if ok else f"intersection has {bin(inter).count('1')} atoms")
    return rep


@dataclass
class Membership:
    relation: str
    pair: tuple[tuple[str, int], tuple[str, int]]
    reason: str

    def to_dict(self) -> dict:
        return {"relation": self.relation, "pair": [list(self.pair[0]), list(self.pair[1])],
                "reason": self.reason}


@dataclass
class RefutationCertificate:
    triangle: tuple[str, str, str]
    others: tuple[str, str]
    scaffold: dict[str, int]
    start: tuple[int, int]
    witnesses: dict[str, int]
    memberships: list[Membership]
    intersection_pairs: int
    shifted_meets_composition: int
    refuted: bool
    conclusion: str

    def to_dict(self) -> dict:
        return {
            "triangle": list(self.triangle),
            "others": list(self.others),
            "scaffold": dict(sorted(self.scaffold.items())),
            "start": list(self.start),
            "witnesses": dict(sorted(self.witnesses.items())),
            "memberships": [m.to_dict() for m in self.memberships],
            "intersection_pairs": self.intersection_pairs,
            "shifted_meets_composition": self.shifted_meets_composition,
            "refuted": self.refuted,
            "conclusion": self.conclusion,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RefutationCertificate":
        return cls(
            triangle=tuple(d["triangle"]),
            others=tuple(d["others"]),
            scaffold={k: int(v) for k, v in d["scaffold"].items()},
            start=tuple(d["start"]),
            witnesses={k: int(v) for k, v in d["witnesses"].items()},
            memberships=[Membership(m["relation"], (tuple(m["pair"][0]), tuple(m["pair"][1])),
                                    m["reason"]) for m in d["memberships"]],
            intersection_pairs=int(d["intersection_pairs"]),
            shifted_meets_composition=int(d["shifted_meets_composition"]),
            refuted=bool(d["refuted"]),
            conclusion=d["conclusion"],
        )


class ChaseError(RuntimeError):
    """A chase step found no witness; the scaffold properties must have failed."""


def _key(x, y):
    return f"{x}{y}"


def chase_refute(alg, s: Scaffold, triangle: Sequence[str] = ("p", "q", "r")) -> RefutationCertificate:
    p, q, r, s_, t_ = _roles(alg, triangle)
    d = s.as_dict()

    def rel(x, y):
        return alg.concrete(1 << d[(x, y)])

    mem: list[Membership] = []
    a_st = rel(s_, t_).blocks[(s_, t_)]
    us = next(g for g, row in enumerate(a_st) if row)
    ut = next(bits_of(a_st[us]))
    mem.append(Membership(f"a_{s_}{t_}", ((s_, us), (t_, ut)), "least pair of the atom"))
    u = {s_: us, t_: ut}
    for x in (p, q, r):
        sx, xt = rel(s_, x), rel(x, t_)
        cand = [v for v in range(alg.sizes[x]) if sx.contains(s_, us, x, v) and xt.contains(x, v, t_, ut)]
        if not cand:
            raise ChaseError(f"no point for {x} between ({s_}:{us}) and ({t_}:{ut})")
        u[x] = cand[0]
        mem.append(Membership(f"a_{s_}{x}", ((s_, us), (x, u[x])), f"least witness for {x}"))
        mem.append(Membership(f"a_{x}{t_}", ((x, u[x]), (t_, ut)), f"least witness for {x}"))
    for x, y in ((p, q), (p, r), (r, q)):
        ok = rel(x, y).contains(x, u[x], y, u[y])
        if not ok:
            raise ChaseError(f"(7) does not place ({x}:{u[x]},{y}:{u[y]}) in a_{x}{y}")
        mem.append(Membership(
            f"a_{x}{y}", ((x, u[x]), (y, u[y])),
            f"in a_{x}{s_}.a_{s_}{y} and a_{x}{t_}.a_{t_}{y}, whose products meet in a_{x}{y}"))
    comp = alg.compose_concrete(d[(p, r)], d[(r, q)])
    if not comp.contains(p, u[p], q, u[q]):
        raise ChaseError("composition through the triangle point failed")
    mem.append(Membership(f"a_{p}{r}.a_{r}{q}", ((p, u[p]), (q, u[q])), f"through ({r}:{u[r]})"))
    inter = rel(p, q).intersect(comp).count()
    shifted = alg.concrete(alg.otimes_table[d[(p, r)]][d[(r, q)]])
    meets = shifted.intersect(comp).count()
    refuted = inter > 0 and meets == 0
    if refuted:
        conclusion = (f"a_{p}{q} meets a_{p}{r}.a_{r}{q}, which is disjoint from "
                      f"a_{p}{r}(x)a_{r}{q}, so a_{p}{q} <= a_{p}{r}(x)a_{r}{q} fails")
    else:
        conclusion = f"no contradiction: a_{p}{r}(x)a_{r}{q} meets a_{p}{r}.a_{r}{q}"
    return RefutationCertificate(
        triangle=(p, q, r), others=(s_, t_),
        scaffold={_key(x, y): v for (x, y), v in d.items()},
        start=(us, ut), witnesses={x: u[x] for x in (p, q, r)},
        memberships=mem, intersection_pairs=inter, shifted_meets_composition=meets,
        refuted=refuted, conclusion=conclusion,
    )


def revalidate(alg, cert: RefutationCertificate) -> bool:
    """Replay every membership and both closing facts against concrete relations."""
    p, q, r = cert.triangle
    idx = alg.indices

    def parse(name: str):
        body = name[2:]
        for x in idx:
            for y in idx:
                if body == x + y:
                    return x, y
        raise ValueError(name)

    d = {}
    for k, v in cert.scaffold.items():
        d[parse("a_" + k)] = v
    for m in cert.memberships:
        (x, g), (y, h) = m.pair
        if "." in m.relation:
            left, right = m.relation.split(".")
            (a, b), (_, c) = parse(left), parse(right)
            rel = alg.compose_concrete(d[(a, b)], d[(b, c)])
        else:
            rel = alg.concrete(1 << d[parse(m.relation)])
        if not rel.contains(x, g, y, h):
            return False
    comp = alg.compose_concrete(d[(p, r)], d[(r, q)])
    if alg.concrete(1 << d[(p, q)]).intersect(comp).count() != cert.intersection_pairs:
        return False
    shifted = alg.concrete(alg.otimes_table[d[(p, r)]][d[(r, q)]])
    if shifted.intersect(comp).count() != cert.shifted_meets_composition:
        return False
    return cert.refuted == (cert.intersection_pairs > 0 and cert.shifted_meets_composition == 0)


@dataclass
class RefutationSummary:
    scaffold_count: int
    pre_scaffold_count: int
    certificates: list[RefutationCertificate]
    all_refuted: bool

    def to_dict(self) -> dict:
        return {
            "scaffold_count": self.scaffold_count,
            "pre_scaffold_count": self.pre_scaffold_count,
            "certificates": len(self.certificates),
            "refuted": sum(1 for c in self.certificates if c.refuted),
            "all_refuted": self.all_refuted,
        }


def refute(alg, triangle: Sequence[str] = ("p", "q", "r")) -> RefutationSummary:
    """Count scaffolds and chase every pre-scaffold.

    ``all_refuted`` holds when no scaffold exists and every pre-scaffold chase
    ends in the contradiction.
    """
    full = enumerate_scaffolds(alg)
    pre = enumerate_pre_scaffolds(alg, triangle)
    certs = [chase_refute(alg, s, triangle) for s in pre]
    all_ref = not full and bool(certs) and all(c.refuted for c in certs)
    return RefutationSummary(len(full), len(pre), certs, all_ref)
