"""Small group triples for randomized checks.

Every generator takes a ``random.Random`` so runs are reproducible.
"""

from __future__ import annotations

import random
from itertools import combinations

from cosetra.frame import GroupSystem, GroupTriple, IsoSystem, e3
from cosetra.groups import (
    FiniteGroup,
    QuotientGroup,
    QuotientIso,
    Subgroup,
    cyclic_group,
    direct_product,
    is_normal,
    isomorphisms,
    quotient_isos,
    symmetric_group,
    trivial_subgroup,
)
from cosetra.nonrep import build_pentagon

NAMES = "abcd"


def small_groups() -> list[FiniteGroup]:
    z2 = cyclic_group(2)
    return [
        z2, cyclic_group(3), cyclic_group(4), direct_product(z2, z2), cyclic_group(5),
        cyclic_group(6), symmetric_group(3), cyclic_group(8), direct_product(z2, cyclic_group(4)),
        direct_product(direct_product(z2, z2), z2),
    ]


ABELIAN = [g for g in small_groups() if g.is_abelian()]


def copies(g: FiniteGroup, k: int) -> GroupSystem:
    names = NAMES[:k]
    return GroupSystem(names, {x: FiniteGroup(g.table, name=x, coords=g.coords) for x in names})


def _auts(g: FiniteGroup) -> list[tuple[int, ...]]:
    return sorted(isomorphisms(g, g))


def _compose(f, g):
    """``g after f`` on element maps."""
    return tuple(g[v] for v in f)


def automorphism_frame(rng: random.Random, g: FiniteGroup, k: int, coherent: bool) -> IsoSystem:
    """``H = {e}`` everywhere; forward isos are automorphisms, composable if ``coherent``."""
    system = copies(g, k)
    auts = _auts(g)
    names = system.indices
    step = {i: rng.choice(auts) for i in range(k - 1)}
    fwd = {}
    for i, j in combinations(range(k), 2):
        if coherent:
            m = tuple(range(g.order))
            for s in range(i, j):
                m = _compose(m, step[s])
        else:
            m = rng.choice(auts)
        qx = QuotientGroup(system[names[i]], trivial_subgroup(system[names[i]]))
        qy = QuotientGroup(system[names[j]], trivial_subgroup(system[names[j]]))
        fwd[(names[i], names[j])] = QuotientIso(qx, qy, m)
    return IsoSystem.from_forward(system, [names], fwd)


def coboundary_cosets(rng: random.Random, isos: IsoSystem) -> dict:
    """``C_xyz = a_xy a_yz a_zx`` with ``a`` antisymmetric; valid when every iso is the identity map."""
    names = isos.system.indices
    g = isos.system[names[0]]
    a = {}
    for x, y in combinations(names, 2):
        v = rng.randrange(g.order)
        a[(x, y)], a[(y, x)] = v, g.inv(v)
    for x in names:
        a[(x, x)] = 0
    return {(x, y, z): g.mul(g.mul(a[(x, y)], a[(y, z)]), a[(z, x)]) for x, y, z in e3(isos)}


def alternating_cosets(rng: random.Random, isos: IsoSystem) -> dict:
    """One element per 3-set of indices, inverted on odd orderings; repeats get the identity.

    Meets the coset conditions (i)-(iii) on an identity frame but usually not (iv).
    """
    names = isos.system.indices
    pos = isos.system.position
    g = isos.system[names[0]]
    value = {frozenset(s): rng.randrange(g.order) for s in combinations(names, 3)}
    reps = {}
    for x, y, z in e3(isos):
        if len({x, y, z}) < 3:
            continue
        p = [pos[x], pos[y], pos[z]]
        odd = sum(p[i] > p[j] for i in range(3) for j in range(i + 1, 3)) % 2
        v = value[frozenset((x, y, z))]
        reps[(x, y, z)] = g.inv(v) if odd else v
    return reps


def identity_frame(g: FiniteGroup, k: int) -> IsoSystem:
    system = copies(g, k)
    names = system.indices
    fwd = {}
    for x, y in combinations(names, 2):
        qx = QuotientGroup(system[x], trivial_subgroup(system[x]))
        qy = QuotientGroup(system[y], trivial_subgroup(system[y]))
        fwd[(x, y)] = QuotientIso(qx, qy, range(g.order))
    return IsoSystem.from_forward(system, [names], fwd)


def normal_subgroups(g: FiniteGroup) -> list[tuple[int, ...]]:
    out = set()
    for a in g.elements:
        for b in g.elements:
            s = g.generated([a, b])
            if is_normal(Subgroup(g, tuple(s))):
                out.add(tuple(sorted(s)))
    return sorted(out)


def quotient_frame(rng: random.Random, g: FiniteGroup, k: int) -> IsoSystem | None:
    """Random normal ``H`` per forward pair with a random quotient iso; None if nothing matches."""
    system = copies(g, k)
    names = system.indices
    subs = normal_subgroups(g)
    fwd = {}
    for x, y in combinations(names, 2):
        options = []
        for h in subs:
            for kk in subs:
                if len(h) == len(kk):
                    options.append((h, kk))
        rng.shuffle(options)
        for h, kk in options:
            qx = QuotientGroup(system[x], Subgroup(system[x], h))
            qy = QuotientGroup(system[y], Subgroup(system[y], kk))
            isos = list(quotient_isos(qx, qy))
            if isos:
                fwd[(x, y)] = rng.choice(isos)
                break
        else:
            return None
    return IsoSystem.from_forward(system, [names], fwd)


def random_reps(rng: random.Random, isos: IsoSystem, n: int) -> dict:
    trs = e3(isos)
    return {tr: rng.randrange(isos.system[tr[0]].order) for tr in rng.sample(trs, min(n, len(trs)))}


def mutate(rng: random.Random, t: GroupTriple, n: int) -> GroupTriple:
    reps = t.cosets.representatives()
    reps.update(random_reps(rng, t.isos, n))
    return GroupTriple.build(t.system, t.isos, reps)


def random_triple(rng: random.Random) -> tuple[str, GroupTriple]:
    """One triple from a rotating mix of families: (family name, triple)."""
    kind = rng.choice(["identity-coboundary", "automorphism", "automorphism-coherent",
                       "quotient", "pentagon-restriction", "s3-twisted", "alternating"])
    k = rng.choice([3, 4])
    if kind == "identity-coboundary":
        g = rng.choice(ABELIAN)
        isos = identity_frame(g, k)
        reps = coboundary_cosets(rng, isos)
        t = GroupTriple.build(isos.system, isos, reps)
        if rng.random() < 0.5:
            t = mutate(rng, t, rng.choice([1, 2]))
        return kind, t
    if kind == "alternating":
        g = rng.choice(ABELIAN)
        isos = identity_frame(g, k)
        return kind, GroupTriple.build(isos.system, isos, alternating_cosets(rng, isos))
    if kind.startswith("automorphism"):
        g = rng.choice(small_groups())
        isos = automorphism_frame(rng, g, k, coherent=kind.endswith("coherent"))
        reps = random_reps(rng, isos, rng.choice([0, 0, 1, 3]))
        return kind, GroupTriple.build(isos.system, isos, reps)
    if kind == "quotient":
        g = rng.choice([g for g in small_groups() if g.order in (4, 6, 8)])
        isos = quotient_frame(rng, g, k)
        if isos is None:
            isos = identity_frame(g, k)
        reps = random_reps(rng, isos, rng.choice([0, 2]))
        return kind, GroupTriple.build(isos.system, isos, reps)
    if kind == "pentagon-restriction":
        keep = rng.sample("pqrst", k)
        t = build_pentagon().restrict(keep)
        if rng.random() < 0.6:
            t = mutate(rng, t, rng.choice([1, 2]))
        return kind, t
    return kind, s3_twisted(rng.random() < 0.5)


def s3_twisted(consistent: bool = True) -> GroupTriple:
    """Three copies of S3, ``H = {e}``, ``phi_xz`` conjugation by a transposition.

    With ``consistent`` the cosets ``C_xyz = C_yzx = C_zxy = c`` make the
    twisted composition law hold; otherwise they are left as identity cosets.
    """
    g = symmetric_group(3)
    system = copies(g, 3)
    a, b, c = system.indices
    tau = next(v for v in g.elements if g.element_order(v) == 2)
    conj = tuple(g.mul(g.mul(g.inv(tau), v), tau) for v in g.elements)
    q = {x: QuotientGroup(system[x], trivial_subgroup(system[x])) for x in system.indices}
    ident = range(g.order)
    fwd = {(a, b): QuotientIso(q[a], q[b], ident), (b, c): QuotientIso(q[b], q[c], ident),
           (a, c): QuotientIso(q[a], q[c], conj)}
    isos = IsoSystem.from_forward(system, [system.indices], fwd)
    reps = {}
    if consistent:
        inv = g.inv(tau)
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            reps[(x, y, z)] = tau
            reps[(x, z, y)] = inv
    return GroupTriple.build(system, isos, reps)
