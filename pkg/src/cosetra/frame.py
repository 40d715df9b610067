"""Group pairs and group triples, and the validators for every condition family.

A triple is ``(groups, quotient isomorphisms over E, cosets over E3)``. The
index set is an ordered tuple of names; its order is the linear order used
by the simplified conditions. ``E`` is given as a partition of the indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .groups import (
    Coset,
    FiniteGroup,
    GroupError,
    QuotientGroup,
    QuotientIso,
    Subgroup,
    complex_product,
    identity_iso,
    induced_iso,
    inner_automorphism,
    set_inverse,
    subgroup_product,
    trivial_subgroup,
)

Pair = tuple[str, str]
Triple = tuple[str, str, str]


class FrameError(ValueError):
    """Structural problem with a system (shape, missing entries, bad references)."""


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    condition: str
    instance: tuple
    ok: bool
    detail: str = ""
    witness: tuple = ()

    def line(self) -> str:
        inst = ",".join(str(v) for v in self.instance)
        status = "pass" if self.ok else "FAIL"
        tail = f"  {self.detail}" if self.detail and not self.ok else ""
        return f"{status}  {self.condition}  ({inst}){tail}"


@dataclass
class ValidationReport:
    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, condition: str, instance: tuple, ok: bool, detail: str = "", witness: tuple = ()):
        self.checks.append(Check(condition, tuple(instance), bool(ok), detail, tuple(witness)))

    def extend(self, other: "ValidationReport"):
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def conditions(self) -> list[str]:
        seen: dict[str, None] = {}
        for c in self.checks:
            seen.setdefault(c.condition, None)
        return list(seen)

    def condition_ok(self, name: str) -> bool:
        return all(c.ok for c in self.checks if c.condition == name)

    def summary(self) -> dict[str, bool]:
        return {name: self.condition_ok(name) for name in self.conditions()}

    def first_failure(self, name: str) -> Check | None:
        for c in self.checks:
            if c.condition == name and not c.ok:
                return c
        return None

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "conditions": [
                {"name": name, "ok": ok, "checked": sum(1 for c in self.checks if c.condition == name)}
                for name, ok in self.summary().items()
            ],
            "failures": [
                {"condition": c.condition, "instance": list(c.instance), "detail": c.detail,
                 "witness": [list(w) if isinstance(w, (tuple, list, frozenset)) else w
                             for w in c.witness]}
                for c in self.failures()
            ],
        }


def _fmt(s: Iterable[int]) -> str:
    return "{" + ",".join(str(v) for v in sorted(s)) + "}"


# ---------------------------------------------------------------------------
# Systems
# ---------------------------------------------------------------------------


class GroupSystem:
    """Ordered index names, each carrying its own group (tagging makes them disjoint)."""

    def __init__(self, indices: Sequence[str], groups: Mapping[str, FiniteGroup]):
        indices = tuple(indices)
        if len(set(indices)) != len(indices):
            raise FrameError(f"duplicate index names in {list(indices)}")
        for x in indices:
            if x not in groups:
                raise FrameError(f"index {x!r} has no group")
        self.indices = indices
        self.groups = {x: groups[x] for x in indices}
        self.position = {x: i for i, x in enumerate(indices)}

    def __getitem__(self, x: str) -> FiniteGroup:
        return self.groups[x]

    def less(self, x: str, y: str) -> bool:
        return self.position[x] < self.position[y]

    def restrict(self, keep: Iterable[str]) -> "GroupSystem":
        keep = set(keep)
        idx = [x for x in self.indices if x in keep]
        return GroupSystem(idx, {x: self.groups[x] for x in idx})


@dataclass(frozen=True)
class PairData:
    h: Subgroup
    k: Subgroup
    phi: QuotientIso


class IsoSystem:
    """Quotient isomorphisms for every pair of ``E``, stored explicitly per direction."""

    def __init__(self, system: GroupSystem, classes: Sequence[Sequence[str]],
                 pairs: Mapping[Pair, QuotientIso]):
        self.system = system
        seen: set[str] = set()
        cls_list = []
        for c in classes:
            c = [x for x in system.indices if x in set(c)]
            for x in c:
                if x in seen:
                    raise FrameError(f"index {x!r} appears in two classes")
                seen.add(x)
            bad = set(c) - set(system.indices)
            if bad:
                raise FrameError(f"unknown indices in class: {sorted(bad)}")
            if c:
                cls_list.append(tuple(c))
        if seen != set(system.indices):
            raise FrameError(f"indices not covered by classes: {sorted(set(system.indices) - seen)}")
        # order classes by their first member
        cls_list.sort(key=lambda c: system.position[c[0]])
        self.classes: tuple[tuple[str, ...], ...] = tuple(cls_list)
        self.class_of = {x: i for i, c in enumerate(self.classes) for x in c}
        self.data: dict[Pair, PairData] = {}
        for x, y in self.relation():
            if (x, y) not in pairs:
                raise FrameError(f"missing quotient isomorphism for pair ({x},{y})")
            phi = pairs[(x, y)]
            if phi.domain.group is not system[x] or phi.codomain.group is not system[y]:
                raise FrameError(f"isomorphism for ({x},{y}) is between the wrong groups")
            self.data[(x, y)] = PairData(phi.h, phi.k, phi)
        extra = set(pairs) - set(self.data)
        if extra:
            raise FrameError(f"isomorphisms given for pairs outside E: {sorted(extra)}")

    @classmethod
    def from_forward(cls, system: GroupSystem, classes: Sequence[Sequence[str]],
                     forward: Mapping[Pair, QuotientIso]) -> "IsoSystem":
        """Fill in ``(y, x)`` by inversion and ``(x, x)`` by the identity where missing."""
        pairs: dict[Pair, QuotientIso] = {}
        for (x, y), phi in forward.items():
            pairs[(x, y)] = phi
            if x != y and (y, x) not in forward:
                pairs[(y, x)] = phi.inverse()
        for c in classes:
            for x in c:
                pairs.setdefault((x, x), identity_iso(system[x]))
        return cls(system, classes, pairs)

    def relation(self) -> list[Pair]:
        pos = self.system.position
        out = [(x, y) for c in self.classes for x in c for y in c]
        out.sort(key=lambda p: (pos[p[0]], pos[p[1]]))
        return out

    def in_e(self, x: str, y: str) -> bool:
        return self.class_of[x] == self.class_of[y]

    def h(self, x: str, y: str) -> Subgroup:
        return self.data[(x, y)].h

    def k(self, x: str, y: str) -> Subgroup:
        return self.data[(x, y)].k

    def phi(self, x: str, y: str) -> QuotientIso:
        return self.data[(x, y)].phi

    def replaced(self, changes: Mapping[Pair, QuotientIso]) -> "IsoSystem":
        pairs = {p: d.phi for p, d in self.data.items()}
        pairs.update(changes)
        return IsoSystem(self.system, self.classes, pairs)


def e3(isos: IsoSystem) -> list[Triple]:
    pos = isos.system.position
    out = [(x, y, z) for c in isos.classes for x in c for y in c for z in c]
    out.sort(key=lambda t: tuple(pos[v] for v in t))
    return out


def e4(isos: IsoSystem) -> list[tuple[str, str, str, str]]:
    pos = isos.system.position
    out = [q for c in isos.classes for q in product(c, repeat=4)]
    out.sort(key=lambda t: tuple(pos[v] for v in t))
    return out


class CosetSystem:
    """A coset ``C_xyz`` of ``H_xy H_xz`` in ``G_x`` for every triple of ``E3``."""

    def __init__(self, isos: IsoSystem, representatives: Mapping[Triple, int] | None = None):
        representatives = dict(representatives or {})
        self.isos = isos
        self.cosets: dict[Triple, Coset] = {}
        self._hh: dict[Triple, Subgroup] = {}
        for t in e3(isos):
            x, y, z = t
            hh = subgroup_product(isos.h(x, y), isos.h(x, z))
            self._hh[t] = hh
            rep = representatives.pop(t, 0)
            g = isos.system[x]
            if not 0 <= rep < g.order:
                raise FrameError(f"coset representative {rep} for {t} is not an element of {x}")
            self.cosets[t] = Coset.of(hh, rep)
        if representatives:
            raise FrameError(f"cosets given for triples outside E3: {sorted(representatives)}")

    def __getitem__(self, t: Triple) -> Coset:
        return self.cosets[t]

    def subgroup(self, t: Triple) -> Subgroup:
        return self._hh[t]

    def representatives(self) -> dict[Triple, int]:
        return {t: c.representative for t, c in self.cosets.items()}

    def is_identity(self, t: Triple) -> bool:
        return self.cosets[t].members == self._hh[t].members


class GroupPair:
    def __init__(self, system: GroupSystem, isos: IsoSystem):
        if isos.system is not system:
            raise FrameError("isomorphism system built over a different group system")
        self.system = system
        self.isos = isos

    @property
    def indices(self) -> tuple[str, ...]:
        return self.system.indices


class GroupTriple(GroupPair):
    def __init__(self, system: GroupSystem, isos: IsoSystem, cosets: CosetSystem):
        super().__init__(system, isos)
        if cosets.isos is not isos:
            raise FrameError("coset system built over a different isomorphism system")
        self.cosets = cosets

    @classmethod
    def build(cls, system: GroupSystem, isos: IsoSystem,
              representatives: Mapping[Triple, int] | None = None) -> "GroupTriple":
        return cls(system, isos, CosetSystem(isos, representatives))

    # shorthands -------------------------------------------------------
    def h(self, x, y) -> Subgroup:
        return self.isos.h(x, y)

    def k(self, x, y) -> Subgroup:
        return self.isos.k(x, y)

    def phi(self, x, y) -> QuotientIso:
        return self.isos.phi(x, y)

    def c(self, x, y, z) -> frozenset:
        return self.cosets[(x, y, z)].members

    def hh(self, x, y, z) -> Subgroup:
        return self.cosets.subgroup((x, y, z))

    # variants ---------------------------------------------------------
    def with_cosets(self, changes: Mapping[Triple, int]) -> "GroupTriple":
        reps = self.cosets.representatives()
        reps.update(changes)
        return GroupTriple(self.system, self.isos, CosetSystem(self.isos, reps))

    def with_isos(self, changes: Mapping[Pair, QuotientIso], sync: bool = True) -> "GroupTriple":
        """Replace some isomorphisms; with ``sync`` the reverse direction is replaced by the inverse."""
        changes = dict(changes)
        if sync:
            for (x, y), phi in list(changes.items()):
                if x != y and (y, x) not in changes:
                    changes[(y, x)] = phi.inverse()
        isos = self.isos.replaced(changes)
        return GroupTriple(self.system, isos, CosetSystem(isos, self.cosets.representatives()))

    def restrict(self, keep: Iterable[str]) -> "GroupTriple":
        keep = set(keep)
        system = self.system.restrict(keep)
        classes = [[x for x in c if x in keep] for c in self.isos.classes]
        classes = [c for c in classes if c]
        pairs = {p: d.phi for p, d in self.isos.data.items() if p[0] in keep and p[1] in keep}
        isos = IsoSystem(system, classes, pairs)
        reps = {t: r for t, r in self.cosets.representatives().items() if set(t) <= keep}
        return GroupTriple(system, isos, CosetSystem(isos, reps))

    def identity_variant(self) -> "GroupTriple":
        """Same pair, every coset replaced by the identity coset."""
        return GroupTriple(self.system, self.isos, CosetSystem(self.isos, {}))


# ---------------------------------------------------------------------------
# Coset enumerations (the atom indices)
# ---------------------------------------------------------------------------


def coset_enumeration(isos: IsoSystem, x: str, y: str) -> tuple[int, ...]:
    """Domain coset indices in atom order: position ``gamma`` holds the index of ``H_{xy,gamma}``.

    Pairs with ``x`` before ``y`` (or equal) use the canonical quotient order.
    Reverse pairs follow the forward pair, ``H_{yx,gamma} = K_{xy,gamma}``,
    whenever ``H_yx = K_xy``; otherwise they fall back to the canonical order.
    """
    d = isos.data[(x, y)]
    n = d.phi.domain.order
    if x == y or isos.system.less(x, y):
        return tuple(range(n))
    fwd = isos.data[(y, x)]
    if fwd.k.elements != d.h.elements:
        return tuple(range(n))
    enum_fwd = coset_enumeration(isos, y, x)
    q = d.phi.domain
    return tuple(
        q.coset_index(fwd.phi.codomain.cosets[fwd.phi.map[g]].members) for g in enum_fwd
    )


# ---------------------------------------------------------------------------
# Frame conditions
# ---------------------------------------------------------------------------


def _safe(fn: Callable[[], frozenset]) -> tuple[frozenset | None, str]:
    try:
        return fn(), ""
    except GroupError as exc:
        return None, str(exc)


def _cond_i(t: GroupPair, rep: ValidationReport, name: str):
    for x in t.indices:
        if not t.isos.in_e(x, x):
            continue
        d = t.isos.data[(x, x)]
        ok = (d.h.order == 1 and d.k.order == 1 and d.phi.map == tuple(range(len(d.phi.map))))
        rep.add(name, (x,), ok, "" if ok else f"phi_{x}{x} is not the identity of G/{{e}}",
                (d.h.elements, d.k.elements, d.phi.map))


def _cond_ii(t: GroupPair, rep: ValidationReport, name: str, only_ordered: bool = False):
    isos = t.isos
    for x, y in isos.relation():
        if only_ordered and not t.system.less(x, y):
            continue
        a, b = isos.data[(x, y)], isos.data[(y, x)]
        ok = (a.h.elements == b.k.elements and a.k.elements == b.h.elements
              and all(b.phi.image(a.phi.image(c.members)) == c.members
                      for c in a.phi.domain.cosets))
        rep.add(name, (x, y), ok, "" if ok else f"phi_{y}{x} is not the inverse of phi_{x}{y}",
                (a.h.elements, b.k.elements))


def _image_eq(t: GroupPair, x, y, z, which: int) -> tuple[bool, str, tuple]:
    """``which`` 0: phi_xy[H_xy H_xz] = K_xy H_yz; 1: phi_yz[K_xy H_yz] = K_xz K_yz."""
    isos = t.isos
    gx, gy = t.system[x], t.system[y]
    if which == 0:
        src = complex_product(isos.h(x, y).elements, isos.h(x, z).elements, gx)
        want = complex_product(isos.k(x, y).elements, isos.h(y, z).elements, gy)
        got, err = _safe(lambda: isos.phi(x, y).image(src))
        label = f"phi_{x}{y}[H_{x}{y} H_{x}{z}]"
    else:
        gz = t.system[z]
        src = complex_product(isos.k(x, y).elements, isos.h(y, z).elements, gy)
        want = complex_product(isos.k(x, z).elements, isos.k(y, z).elements, gz)
        got, err = _safe(lambda: isos.phi(y, z).image(src))
        label = f"phi_{y}{z}[K_{x}{y} H_{y}{z}]"
    if got is None:
        return False, f"{label} undefined: {err}", (tuple(sorted(src)),)
    ok = got == want
    return ok, "" if ok else f"{label} = {_fmt(got)} != {_fmt(want)}", (
        tuple(sorted(got)), tuple(sorted(want)))


def _composition_law(t: GroupPair, x, y, z, shift: frozenset | None) -> tuple[bool, str, tuple]:
    """Check phi_yz[phi_xy[D]] = phi_xz[tau(D)] on every coset D of H_xy H_xz.

    ``shift`` is ``C_xyz`` (``None`` means no twist, as in a group frame).
    """
    isos = t.isos
    try:
        hh = subgroup_product(isos.h(x, y), isos.h(x, z))
        hat_xy = induced_iso(isos.phi(x, y), hh)
        hat_xz = induced_iso(isos.phi(x, z), hh)
        hat_yz = induced_iso(isos.phi(y, z), hat_xy.k)
    except GroupError as exc:
        return False, f"induced maps undefined: {exc}", ()
    q = hat_xy.domain
    tau = inner_automorphism(q, shift) if shift is not None else tuple(range(q.order))
    for d in range(q.order):
        lhs = hat_yz.codomain.cosets[hat_yz.map[hat_xy.map[d]]].members
        rhs = hat_xz.codomain.cosets[hat_xz.map[tau[d]]].members
        if lhs != rhs:
            dm = q.cosets[d].members
            return False, f"coset {_fmt(dm)}: {_fmt(lhs)} != {_fmt(rhs)}", (
                tuple(sorted(dm)), tuple(sorted(lhs)), tuple(sorted(rhs)))
    return True, "", ()


def check_group_frame(pair: GroupPair) -> ValidationReport:
    rep = ValidationReport("group frame")
    _cond_i(pair, rep, "frame condition (i)")
    _cond_ii(pair, rep, "frame condition (ii)")
    triples = e3(pair.isos)
    for x, y, z in triples:
        ok0, d0, w0 = _image_eq(pair, x, y, z, 0)
        ok1, d1, w1 = _image_eq(pair, x, y, z, 1)
        rep.add("frame condition (iii)", (x, y, z), ok0 and ok1, d0 or d1, w0 if not ok0 else w1)
    for x, y, z in triples:
        ok, d, w = _composition_law(pair, x, y, z, None)
        rep.add("frame condition (iv)", (x, y, z), ok, d, w)
    return rep


def check_pre_semi_frame(t: GroupTriple) -> ValidationReport:
    rep = ValidationReport("pre-semi-frame")
    _cond_i(t, rep, "semi-frame condition (i)")
    _cond_ii(t, rep, "semi-frame condition (ii)")
    for x, y, z in e3(t.isos):
        ok, d, w = _image_eq(t, x, y, z, 0)
        rep.add("semi-frame condition (iii)", (x, y, z), ok, d, w)
    return rep


def check_semi_frame(t: GroupTriple) -> ValidationReport:
    rep = check_pre_semi_frame(t)
    rep.title = "semi-frame"
    for x, y, z in e3(t.isos):
        ok, d, w = _composition_law(t, x, y, z, t.c(x, y, z))
        rep.add("semi-frame condition (iv)", (x, y, z), ok, d, w)
    return rep


def sfimage_forms(t: GroupTriple, x: str, y: str, z: str) -> tuple[bool, bool, bool]:
    """The three equivalent forms of the twisted composition law, each checked on every union of cosets."""
    isos = t.isos
    gx, gy, gz = t.system[x], t.system[y], t.system[z]
    c = t.c(x, y, z)
    ci = set_inverse(c, gx)
    p_xy, p_yz, p_xz = isos.phi(x, y), isos.phi(y, z), isos.phi(x, z)

    def unions(sub_elems: frozenset, g: FiniteGroup) -> Iterator[frozenset]:
        sub = Subgroup(g, tuple(sub_elems))
        q = QuotientGroup(g, sub)
        for mask in range(1 << q.order):
            yield q.union(i for i in range(q.order) if mask >> i & 1)

    def conj(s: frozenset) -> frozenset:
        return complex_product(complex_product(ci, s, gx), c, gx)

    def holds(fn) -> bool:
        try:
            return fn()
        except GroupError:
            return False

    hh = complex_product(isos.h(x, y).elements, isos.h(x, z).elements, gx)
    kh = complex_product(isos.k(x, y).elements, isos.h(y, z).elements, gy)
    kk = complex_product(isos.k(x, z).elements, isos.k(y, z).elements, gz)
    f1 = holds(lambda: all(p_yz.image(p_xy.image(Q)) == p_xz.image(conj(Q)) for Q in unions(hh, gx)))
    f2 = holds(lambda: all(p_xz.preimage(p_yz.image(Q)) == conj(p_xy.preimage(Q))
                           for Q in unions(kh, gy)))
    f3 = holds(lambda: all(complex_product(c, p_xz.preimage(Q), gx)
                           == complex_product(p_xy.preimage(p_yz.preimage(Q)), c, gx)
                           for Q in unions(kk, gz)))
    return f1, f2, f3


# ---------------------------------------------------------------------------
# Coset conditions
# ---------------------------------------------------------------------------


def _coset_eq(name: str, lhs_fn, rhs_fn) -> tuple[bool, str, tuple]:
    lhs, e1 = _safe(lhs_fn)
    rhs, e2 = _safe(rhs_fn)
    if lhs is None or rhs is None:
        return False, f"{name}: undefined ({e1 or e2})", ()
    ok = lhs == rhs
    return ok, "" if ok else f"{name}: {_fmt(lhs)} != {_fmt(rhs)}", (
        tuple(sorted(lhs)), tuple(sorted(rhs)))


def _coset_i(t: GroupTriple, x, y):
    return _coset_eq(f"C_{x}{y}{y} = H_{x}{y}", lambda: t.c(x, y, y),
                     lambda: t.h(x, y).members)


def _coset_ii(t: GroupTriple, x, y, z):
    gz = t.system[z]
    return _coset_eq(f"phi_{x}{z}[C_{x}{y}{z}] = C_{z}{y}{x}^-1",
                     lambda: t.phi(x, z).image(t.c(x, y, z)),
                     lambda: set_inverse(t.c(z, y, x), gz))


def _coset_iii(t: GroupTriple, x, y, z):
    gy = t.system[y]
    return _coset_eq(f"phi_{x}{y}[C_{x}{y}{z}] = C_{y}{x}{z}^-1",
                     lambda: t.phi(x, y).image(t.c(x, y, z)),
                     lambda: set_inverse(t.c(y, x, z), gy))


def _coset_iv(t: GroupTriple, x, y, z, w):
    gx, gy = t.system[x], t.system[y]
    return _coset_eq(
        f"C_{x}{y}{z} C_{x}{z}{w} = phi_{y}{x}[C_{y}{z}{w} H_{y}{x}] C_{x}{y}{w}",
        lambda: complex_product(t.c(x, y, z), t.c(x, z, w), gx),
        lambda: complex_product(
            t.phi(y, x).image(complex_product(t.c(y, z, w), t.h(y, x).elements, gy)),
            t.c(x, y, w), gx),
    )


def check_coset_conditions(t: GroupTriple, require_semi_frame: bool = True) -> ValidationReport:
    """The four coset conditions over E, E3 and E4.

    They are only meaningful for a semi-frame; when that precondition fails the
    report carries a failing ``precondition: semi-frame`` entry and the four
    families are still evaluated.
    """
    rep = ValidationReport("coset conditions")
    if require_semi_frame:
        sf = check_semi_frame(t)
        bad = sf.failures()
        rep.add("precondition: semi-frame", (), sf.ok,
                "" if sf.ok else f"{bad[0].condition} fails at ({','.join(bad[0].instance)})")
    for x, y in t.isos.relation():
        ok, d, w = _coset_i(t, x, y)
        rep.add("coset condition (i)", (x, y), ok, d, w)
    triples = e3(t.isos)
    for x, y, z in triples:
        ok, d, w = _coset_ii(t, x, y, z)
        rep.add("coset condition (ii)", (x, y, z), ok, d, w)
    for x, y, z in triples:
        ok, d, w = _coset_iii(t, x, y, z)
        rep.add("coset condition (iii)", (x, y, z), ok, d, w)
    for q in e4(t.isos):
        ok, d, w = _coset_iv(t, *q)
        rep.add("coset condition (iv)", q, ok, d, w)
    return rep


COSET_CONDITIONS = ("coset condition (i)", "coset condition (ii)",
                    "coset condition (iii)", "coset condition (iv)")
SEMI_FRAME_CONDITIONS = ("semi-frame condition (i)", "semi-frame condition (ii)",
                         "semi-frame condition (iii)", "semi-frame condition (iv)")


def check_all(t: GroupTriple) -> ValidationReport:
    """Semi-frame conditions followed by the four coset conditions."""
    rep = check_semi_frame(t)
    rep.title = "semi-frame and coset conditions"
    rep.extend(check_coset_conditions(t, require_semi_frame=False))
    return rep


# ---------------------------------------------------------------------------
# Simplified conditions
# ---------------------------------------------------------------------------


def check_simplified(t: GroupTriple) -> ValidationReport:
    """Conditions (i)-(ix), each only on the ordered instances it needs."""
    rep = ValidationReport("simplified conditions")
    less = t.system.less
    _cond_i(t, rep, "simplified (i)")
    _cond_ii(t, rep, "simplified (ii)", only_ordered=True)
    triples = e3(t.isos)
    ordered = [(x, y, z) for x, y, z in triples if less(x, y) and less(y, z)]
    for x, y, z in ordered:
        ok0, d0, w0 = _image_eq(t, x, y, z, 0)
        ok1, d1, w1 = _image_eq(t, x, y, z, 1)
        rep.add("simplified (iii)", (x, y, z), ok0 and ok1, d0 or d1, w0 if not ok0 else w1)
    for x, y, z in ordered:
        ok, d, w = _composition_law(t, x, y, z, t.c(x, y, z))
        rep.add("simplified (iv)", (x, y, z), ok, d, w)
    for x, y in t.isos.relation():
        h = t.h(x, y).members
        bad = [(a, b, c) for a, b, c in ((x, x, y), (x, y, x), (x, y, y)) if t.c(a, b, c) != h]
        rep.add("simplified (v)", (x, y), not bad,
                "" if not bad else f"C_{''.join(bad[0])} != H_{x}{y}",
                (tuple(sorted(t.c(*bad[0]))), tuple(sorted(h))) if bad else ())
    for x, y, z in triples:
        if len({x, y, z}) < 3:
            continue
        gx = t.system[x]
        ok, d, w = _coset_eq(f"C_{x}{y}{z}^-1 = C_{x}{z}{y}",
                             lambda: set_inverse(t.c(x, y, z), gx), lambda: t.c(x, z, y))
        rep.add("simplified (vi)", (x, y, z), ok, d, w)
    for x, y, z in ordered:
        ok, d, w = _coset_eq(f"phi_{x}{y}[C_{x}{y}{z}] = C_{y}{z}{x}",
                             lambda: t.phi(x, y).image(t.c(x, y, z)), lambda: t.c(y, z, x))
        rep.add("simplified (vii)", (x, y, z), ok, d, w)
    for x, y, z in ordered:
        ok, d, w = _coset_eq(f"phi_{x}{z}[C_{x}{y}{z}] = C_{z}{x}{y}",
                             lambda: t.phi(x, z).image(t.c(x, y, z)), lambda: t.c(z, x, y))
        rep.add("simplified (viii)", (x, y, z), ok, d, w)
    for q in e4(t.isos):
        x, y, z, w_ = q
        if less(x, y) and less(y, z) and less(z, w_):
            ok, d, w = _coset_iv(t, *q)
            rep.add("simplified (ix)", q, ok, d, w)
    return rep


SIMPLIFIED_FIRST_EIGHT = tuple(f"simplified ({n})" for n in
                               ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii"))


def simplified_verdicts(t: GroupTriple) -> tuple[bool, bool]:
    """(conditions (i)-(viii) hold, condition (ix) holds)."""
    rep = check_simplified(t)
    first = all(rep.condition_ok(n) for n in SIMPLIFIED_FIRST_EIGHT)
    return first, rep.condition_ok("simplified (ix)")


# ---------------------------------------------------------------------------
# Shortcut corollaries
# ---------------------------------------------------------------------------


def check_tripsub(t: GroupTriple) -> bool:
    """Whether ``H_xy H_xz H_xw = G_x`` for every quadruple of pairwise distinct indices in E4.

    Quadruples with repeated indices are excluded: there the triple product
    collapses to a proper subgroup for any nontrivial ``H``, so the hypothesis
    could never hold.
    """
    for x, y, z, w in e4(t.isos):
        if len({x, y, z, w}) < 4:
            continue
        g = t.system[x]
        prod = complex_product(complex_product(t.h(x, y).elements, t.h(x, z).elements, g),
                               t.h(x, w).elements, g)
        if len(prod) != g.order:
            return False
    return True


def check_trithm(t: GroupTriple, p: str, q: str, r: str) -> ValidationReport:
    rep = ValidationReport(f"single non-identity coset family ({p},{q},{r})")
    if not (t.system.less(p, q) and t.system.less(q, r)):
        raise FrameError(f"expected {p} < {q} < {r} in the index order")
    assoc = set(permutations((p, q, r)))
    others = [tr for tr in e3(t.isos) if tr not in assoc and not t.cosets.is_identity(tr)]
    rep.add("hypothesis: other cosets are identity cosets", (p, q, r), not others,
            "" if not others else f"C_{''.join(others[0])} is not the identity coset")
    gp = t.system[p]
    ok = all(set_inverse(t.c(a, b, c), t.system[a]) == t.c(a, c, b)
             for a, b, c in ((p, q, r), (q, r, p), (r, p, q)))
    rep.add("corollary condition (i)", (p, q, r), ok,
            "" if ok else "a coset is not inverse to its swapped partner")
    ok, d, w = _coset_eq(f"phi_{p}{q}[C_{p}{q}{r}] = C_{q}{r}{p}",
                         lambda: t.phi(p, q).image(t.c(p, q, r)), lambda: t.c(q, r, p))
    rep.add("corollary condition (ii)", (p, q, r), ok, d, w)
    ok, d, w = _coset_eq(f"phi_{p}{r}[C_{p}{q}{r}] = C_{r}{p}{q}",
                         lambda: t.phi(p, r).image(t.c(p, q, r)), lambda: t.c(r, p, q))
    rep.add("corollary condition (iii)", (p, q, r), ok, d, w)
    inter = frozenset(gp.elements)
    for s in t.system.indices:
        if s in (p, q, r) or not t.isos.in_e(p, s):
            continue
        inter &= complex_product(complex_product(t.h(p, q).elements, t.h(p, r).elements, gp),
                                 t.h(p, s).elements, gp)
    ok = t.c(p, q, r) <= inter
    rep.add("corollary condition (iv)", (p, q, r), ok,
            "" if ok else f"C_{p}{q}{r} not inside {_fmt(inter)}")
    return rep


# ---------------------------------------------------------------------------
# Simplicity, components, identity-coset triples
# ---------------------------------------------------------------------------


def is_simple_frame(t: GroupPair) -> bool:
    return len(t.indices) > 0 and len(t.isos.classes) == 1


def components(t: GroupTriple) -> list[GroupTriple]:
    return [t.restrict(c) for c in t.isos.classes]


def reassemble(parts: Sequence[GroupTriple], order: Sequence[str] | None = None) -> GroupTriple:
    """Disjoint union of triples over pairwise disjoint index sets."""
    indices: list[str] = []
    groups: dict[str, FiniteGroup] = {}
    for part in parts:
        for x in part.indices:
            if x in groups:
                raise FrameError(f"index {x!r} occurs in two parts")
            indices.append(x)
            groups[x] = part.system[x]
    if order is not None:
        if sorted(order) != sorted(indices):
            raise FrameError("order does not list exactly the indices of the parts")
        indices = list(order)
    system = GroupSystem(indices, groups)
    classes = [list(c) for part in parts for c in part.isos.classes]
    pairs: dict[Pair, QuotientIso] = {}
    reps: dict[Triple, int] = {}
    for part in parts:
        pairs.update({p: d.phi for p, d in part.isos.data.items()})
        reps.update(part.cosets.representatives())
    isos = IsoSystem(system, classes, pairs)
    return GroupTriple(system, isos, CosetSystem(isos, reps))


def same_triple(a: GroupTriple, b: GroupTriple) -> bool:
    """Structural equality: index order, tables, E, subgroups, maps and cosets."""
    if a.indices != b.indices:
        return False
    if any(a.system[x].table != b.system[x].table for x in a.indices):
        return False
    if a.isos.classes != b.isos.classes:
        return False
    for p, d in a.isos.data.items():
        e = b.isos.data.get(p)
        if e is None or (d.h.elements, d.k.elements, d.phi.map) != (e.h.elements, e.k.elements,
                                                                     e.phi.map):
            return False
    if set(a.isos.data) != set(b.isos.data):
        return False
    return all(a.cosets[t].elements == b.cosets[t].elements for t in e3(a.isos))


def from_group_pair(pair: GroupPair) -> GroupTriple:
    """The identity-coset triple of a group frame; rejects pairs that are not frames."""
    rep = check_group_frame(pair)
    if not rep.ok:
        bad = rep.failures()[0]
        raise FrameError(f"not a group frame: {bad.condition} fails at "
                         f"({','.join(bad.instance)}): {bad.detail}")
    return GroupTriple(pair.system, pair.isos, CosetSystem(pair.isos, {}))


def single_group_triple(name: str, g: FiniteGroup) -> GroupTriple:
    system = GroupSystem([name], {name: g})
    isos = IsoSystem.from_forward(system, [[name]], {})
    return GroupTriple(system, isos, CosetSystem(isos, {}))


def empty_triple() -> GroupTriple:
    system = GroupSystem([], {})
    isos = IsoSystem(system, [], {})
    return GroupTriple(system, isos, CosetSystem(isos, {}))


__all__ = [
    "Check", "ValidationReport", "FrameError", "GroupSystem", "PairData", "IsoSystem",
    "CosetSystem", "GroupPair", "GroupTriple", "e3", "e4", "coset_enumeration",
    "check_group_frame", "check_pre_semi_frame", "check_semi_frame", "sfimage_forms",
    "check_coset_conditions", "check_all", "check_simplified", "simplified_verdicts",
    "check_tripsub", "check_trithm", "is_simple_frame", "components", "reassemble",
    "same_triple", "from_group_pair", "single_group_triple", "empty_triple",
    "COSET_CONDITIONS", "SEMI_FRAME_CONDITIONS", "SIMPLIFIED_FIRST_EIGHT", "trivial_subgroup",
]
