"""Random instances for property tests and randomized audits.

Group systems are built as subquotients ``S_a / L_a`` of ``Z^3`` with
lattices growing along the order (direct) or shrinking (inverse), so every
bond is induced by an inclusion and functoriality holds by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from . import abgroup as ab
from .abgroup import FpAbGroup, GroupHom
from .exactla import IntMatrix, smith_normal_form
from .posets import DirectedPoset, OrderMap
from .simplicial import SimplicialComplex, SimplicialPair
from .systems import DIRECT, GroupSystem, SystemMorphism

AMBIENT = 3
MAX_TORSION = 12


class Rejected(Exception):
    """Candidate instance outside the requested size bounds."""


def random_poset(rng: random.Random, max_size: int = 8, *, duplicates: bool = True) -> DirectedPoset:
    """Random directed preorder with a top; may contain equivalent elements."""
    n = rng.randint(1, max_size)
    core = rng.randint(1, n) if duplicates else n
    pairs = [(i, j) for i in range(core) for j in range(i + 1, core) if rng.random() < 0.35]
    pairs += [(i, core - 1) for i in range(core - 1)]
    for extra in range(core, n):
        twin = rng.randrange(core)
        pairs += [(extra, twin), (twin, extra)]
    return DirectedPoset.from_relation(n, pairs)


def random_order_map(rng: random.Random, A: DirectedPoset, B: DirectedPoset) -> OrderMap:
    """Random order-preserving map, built along a linear extension of ``A``."""
    choice: dict[int, int] = {}
    for a in A.linear_extension():
        if a in choice:
            continue
        below = [choice[x] for x in A.strictly_below(a)]
        cands = [t for t in B.elements() if all(B.le(s, t) for s in below)]
        pick = rng.choice(cands)
        for x in A.elements():
            if A.equivalent(a, x):
                choice[x] = pick
    return OrderMap(A, B, tuple(choice[a] for a in A.elements()))


def random_inflation(rng: random.Random, P: DirectedPoset) -> OrderMap:
    """Random order-preserving ``s`` with ``a <= s(a)``."""
    choice: dict[int, int] = {}
    for a in P.linear_extension():
        if a in choice:
            continue
        below = [choice[x] for x in P.strictly_below(a)]
        cls = [x for x in P.elements() if P.equivalent(a, x)]
        cands = [t for t in P.elements() if P.le(a, t) and all(P.le(s, t) for s in below)]
        pick = rng.choice(cands)
        for x in cls:
            choice[x] = pick
    return OrderMap(P, P, tuple(choice[a] for a in P.elements()))


def _random_vector(rng: random.Random, bound: int = 3) -> tuple[int, ...]:
    return tuple(rng.randint(-bound, bound) for _ in range(AMBIENT))


@dataclass
class LatticeSeeds:
    """Per-element seed vectors for the generator and relation lattices."""

    gens: list[list[tuple[int, ...]]]
    rels: list[list[tuple[int, ...]]]


def random_seeds(rng: random.Random, size: int) -> LatticeSeeds:
    gens, rels = [], []
    for _ in range(size):
        gens.append([_random_vector(rng) for _ in range(rng.randint(0, 2))])
        rels.append([tuple(rng.randint(1, 4) * x for x in _random_vector(rng, 2)) for _ in range(rng.randint(0, 1))])
    return LatticeSeeds(gens, rels)


def _span(vectors: Sequence[tuple[int, ...]]) -> IntMatrix:
    if not vectors:
        return IntMatrix.zeros(AMBIENT, 0)
    return smith_normal_form(IntMatrix.from_columns(vectors, rows=AMBIENT)).image_basis()


def _coords(basis: IntMatrix, vectors: IntMatrix) -> IntMatrix:
    snf = smith_normal_form(basis)
    cols = []
    for j in range(vectors.cols):
        x = snf.solve(vectors.col(j))
        assert x is not None
        cols.append(x)
    return IntMatrix.from_columns(cols, rows=basis.cols) if cols else IntMatrix.zeros(basis.cols, 0)


@dataclass
class Subquotient:
    """``span(S) / span(L)`` with ``L`` inside ``S``, both as column bases."""

    S: IntMatrix
    L: IntMatrix

    def group(self) -> FpAbGroup:
        return FpAbGroup(self.S.cols, _coords(self.S, self.L))

    def map_into(self, other: "Subquotient") -> IntMatrix:
        return _coords(other.S, self.S)


def subquotients(P: DirectedPoset, seeds: LatticeSeeds, variance: str) -> list[Subquotient]:
    out = []
    for a in P.elements():
        near = [x for x in P.elements() if (P.le(x, a) if variance == DIRECT else P.le(a, x))]
        rels = [v for x in near for v in seeds.rels[x]]
        gens = [v for x in near for v in seeds.gens[x]] + rels
        out.append(Subquotient(_span(gens), _span(rels)))
    return out


def _check_bounds(G: FpAbGroup) -> None:
    free, torsion = G.canonical_form()
    if any(t > MAX_TORSION for t in torsion):
        raise Rejected()


def system_from_subquotients(P: DirectedPoset, parts: Sequence[Subquotient], variance: str) -> tuple[GroupSystem, list]:
    """Simplified system plus, per element, the map from raw to simplified coordinates."""
    raw = [q.group() for q in parts]
    simp = [ab.simplify(G) for G in raw]
    for S, _, _ in simp:
        _check_bounds(S)
    bonds = {}
    for a, b in P.comparable_pairs():
        lo, hi = (a, b) if variance == DIRECT else (b, a)
        # inverse bonds run X_b -> X_a, induced by S_b inside S_a
        inc = parts[lo].map_into(parts[hi])
        m = simp[hi][1].matrix @ inc @ simp[lo][2].matrix
        bonds[(a, b)] = GroupHom(simp[lo][0], simp[hi][0], m, check=False)
    return GroupSystem(variance, P, tuple(S for S, _, _ in simp), bonds), simp


def random_system(rng: random.Random, variance: str = DIRECT, max_size: int = 8, P: Optional[DirectedPoset] = None) -> GroupSystem:
    """Random valid system of groups with rank <= 3 and torsion factors <= 12."""
    while True:
        Q = P or random_poset(rng, max_size)
        seeds = random_seeds(rng, Q.size)
        try:
            S, _ = system_from_subquotients(Q, subquotients(Q, seeds, variance), variance)
        except Rejected:
            continue
        return S


@dataclass
class RandomMorphism:
    morphism: SystemMorphism
    source_seeds: LatticeSeeds
    target_seeds: LatticeSeeds


def random_morphism(
    rng: random.Random,
    variance: str = DIRECT,
    max_size: int = 6,
    source: Optional[tuple[DirectedPoset, LatticeSeeds]] = None,
) -> RandomMorphism:
    """Random morphism whose components are induced by lattice inclusions.

    The target seeds absorb the source seeds along the index map, which
    forces every source lattice into the lattice it is sent to.
    """
    while True:
        if source is None:
            A = random_poset(rng, max_size)
            sa = random_seeds(rng, A.size)
        else:
            A, sa = source
        B = random_poset(rng, max_size)
        sb = random_seeds(rng, B.size)
        if variance == DIRECT:
            f = random_order_map(rng, A, B)
            for a in A.elements():
                sb.gens[f(a)] = sb.gens[f(a)] + sa.gens[a]
                sb.rels[f(a)] = sb.rels[f(a)] + sa.rels[a]
        else:
            f = random_order_map(rng, B, A)
            for b in B.elements():
                for x in A.elements():
                    if A.le(f(b), x):
                        sb.gens[b] = sb.gens[b] + sa.gens[x]
                        sb.rels[b] = sb.rels[b] + sa.rels[x]
        qa, qb = subquotients(A, sa, variance), subquotients(B, sb, variance)
        try:
            X, simp_a = system_from_subquotients(A, qa, variance)
            Y, simp_b = system_from_subquotients(B, qb, variance)
        except Rejected:
            continue
        comps = []
        for k in f.source.elements():
            a, b = (k, f(k)) if variance == DIRECT else (f(k), k)
            m = simp_b[b][1].matrix @ qa[a].map_into(qb[b]) @ simp_a[a][2].matrix
            comps.append(GroupHom(X.objects[a], Y.objects[b], m, check=False))
        return RandomMorphism(SystemMorphism(X, Y, f, tuple(comps)), sa, sb)


def random_composable_pair(rng: random.Random, variance: str = DIRECT, max_size: int = 5):
    """``(F, G)`` with ``G o F`` defined."""
    first = random_morphism(rng, variance, max_size)
    src = (first.morphism.target.index, first.target_seeds)
    second = random_morphism(rng, variance, max_size, source=src)
    F, G = first.morphism, second.morphism
    return F, SystemMorphism(F.target, G.target, G.index_map, G.components)


def push_forward(F: SystemMorphism, sigma: OrderMap) -> SystemMorphism:
    """Equivalent morphism obtained by composing with bonds along ``sigma``.

    ``sigma`` must be inflationary on the index set where the index map
    lands (the target index for direct systems, the source index for
    inverse ones).
    """
    f = F.index_map
    g = f.then(sigma)
    if F.variance == DIRECT:
        comps = tuple(ab.compose(F.target.bond(f(a), g(a)), F.components[a]) for a in f.source.elements())
    else:
        comps = tuple(ab.compose(F.components[b], F.source.bond(f(b), g(b))) for b in f.source.elements())
    return SystemMorphism(F.source, F.target, g, comps)


def random_equivalent(rng: random.Random, F: SystemMorphism) -> SystemMorphism:
    P = F.index_map.target
    return push_forward(F, random_inflation(rng, P))


# -- simplicial ------------------------------------------------------------------------


def random_complex(rng: random.Random, max_vertices: int = 12, max_dim: int = 2, min_vertices: int = 1) -> SimplicialComplex:
    n = rng.randint(min(min_vertices, max_vertices), max_vertices)
    facets = [(v,) for v in range(n)]
    for _ in range(rng.randint(0, 2 * n)):
        k = rng.randint(2, min(max_dim + 1, n)) if n >= 2 else 1
        facets.append(tuple(rng.sample(range(n), k)))
    return SimplicialComplex.from_simplices(facets)


def random_subcomplex(rng: random.Random, K: SimplicialComplex, keep: float = 0.5) -> SimplicialComplex:
    """Downward closure of a random sample of the facets of ``K``."""
    return SimplicialComplex.from_simplices(s for s in K.maximal_simplices() if rng.random() < keep)


def random_pair(rng: random.Random, max_vertices: int = 8, max_dim: int = 2) -> SimplicialPair:
    K = random_complex(rng, max_vertices, max_dim, min_vertices=max_vertices // 2)
    return SimplicialPair(K, random_subcomplex(rng, K))


def random_family(rng: random.Random, K: SimplicialComplex, max_members: int = 10) -> list[SimplicialComplex]:
    """Distinct nonempty subcomplexes of ``K``, some pairwise unions, and ``K`` itself."""
    target = rng.randint(min(3, max_members), max_members)
    members: list[SimplicialComplex] = [K]
    for _ in range(4 * max_members):
        if len(members) >= target:
            break
        if len(members) >= 3 and rng.random() < 0.3:
            a, b = rng.sample(members[1:], 2) if len(members) > 2 else (members[1], members[1])
            L = a.union(b)
        else:
            L = random_subcomplex(rng, K, rng.choice([0.2, 0.4, 0.7]))
        if L.simplices and L not in members:
            members.append(L)
    rng.shuffle(members)
    return members


def random_model(rng: random.Random, max_vertices: int = 12, max_members: int = 10, max_dim: int = 2):
    from .shapefunctors import build_filtered_model

    K = random_complex(rng, max_vertices, max_dim, min_vertices=max_vertices // 2)
    return build_filtered_model(K, random_family(rng, K, max_members))
