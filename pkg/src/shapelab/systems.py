"""Direct and inverse systems of finitely presented abelian groups.

Conventions, fixed once here:

* Composition is function-application order: ``compose(g, f) = g o f``.
* A direct system has bonds ``X_a -> X_b`` for ``a <= b``; an inverse system
  has bonds ``X_b -> X_a`` for ``a <= b``.  Either way ``bond(a, b)`` is the
  map attached to the comparable pair ``a <= b``.
* A morphism of direct systems ``X (over A) -> Y (over B)`` has an index map
  ``f: A -> B`` and components ``X_a -> Y_f(a)`` keyed by ``a in A``.
* A morphism of inverse systems ``X (over A) -> Y (over B)`` has an index map
  ``f: B -> A`` and components ``X_f(b) -> Y_b`` keyed by ``b in B``.  So in
  both cases ``components[i]`` is keyed by the domain of ``index_map``.

Colimits and limits are built from presentations (a quotient of the direct
sum, resp. the kernel of the difference map), never by reading off a top
element; the top-element answer is kept as an independent check.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from . import abgroup as ab
from .abgroup import FpAbGroup, GroupHom
from .exactla import IntMatrix, hstack, vstack
from .posets import DirectedPoset, OrderMap, PosetError, cofinality_witness, find_top, restrict

DIRECT = "direct"
INVERSE = "inverse"


class SystemCheckError(ValueError):
    """A system-level check failed; ``kind`` names it, ``witness`` holds indices."""

    def __init__(self, kind: str, witness: tuple = (), message: str = ""):
        super().__init__(message or f"{kind}: witness {witness}")
        self.kind = kind
        self.witness = witness


@dataclass(frozen=True, eq=False)
class GroupSystem:
    variance: str
    index: DirectedPoset
    objects: tuple[FpAbGroup, ...]
    bonds: Mapping[tuple[int, int], GroupHom]

    def __post_init__(self):
        if self.variance not in (DIRECT, INVERSE):
            raise SystemCheckError("bad-variance", (self.variance,))
        if len(self.objects) != self.index.size:
            raise SystemCheckError("shape-mismatch", (len(self.objects),), "one object per index element required")
        for a, b in self.index.comparable_pairs():
            h = self.bonds.get((a, b))
            if h is None:
                raise SystemCheckError("missing-bond", (a, b))
            src, tgt = (a, b) if self.variance == DIRECT else (b, a)
            if h.source != self.objects[src] or h.target != self.objects[tgt]:
                raise SystemCheckError("shape-mismatch", (a, b), f"bond {a}<={b} has the wrong source or target")

    def bond(self, a: int, b: int) -> GroupHom:
        return self.bonds[(a, b)]

    @property
    def size(self) -> int:
        return self.index.size

    @classmethod
    def build(
        cls,
        variance: str,
        index: DirectedPoset,
        objects: Sequence[FpAbGroup],
        bonds: Mapping[tuple[int, int], GroupHom],
    ) -> "GroupSystem":
        """Fill in identities and missing bonds by composing given ones.

        Missing pairs are completed along a shortest path of supplied bonds;
        the result still has to pass :func:`validate_system`.
        """
        objects = tuple(objects)
        full: dict[tuple[int, int], GroupHom] = dict(bonds)
        for a in index.elements():
            full.setdefault((a, a), GroupHom.identity(objects[a]))
        steps: dict[int, list[int]] = {a: [] for a in index.elements()}
        for a, b in bonds:
            if a != b:
                steps[a].append(b)
        for a in index.elements():
            prev = {a: None}
            queue = deque([a])
            while queue:
                x = queue.popleft()
                for y in sorted(steps[x]):
                    if y not in prev:
                        prev[y] = x
                        queue.append(y)
            for b in index.elements():
                if not index.le(a, b) or (a, b) in full:
                    continue
                if b not in prev:
                    raise SystemCheckError("missing-bond", (a, b))
                path = [b]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                path.reverse()
                h = full[(path[0], path[1])]
                for x, y in zip(path[1:], path[2:]):
                    step = full[(x, y)]
                    h = ab.compose(step, h) if variance == DIRECT else ab.compose(h, step)
                full[(a, b)] = h
        return cls(variance, index, objects, full)


def constant_system(variance: str, index: DirectedPoset, G: FpAbGroup) -> GroupSystem:
    idh = GroupHom.identity(G)
    return GroupSystem(variance, index, (G,) * index.size, {p: idh for p in index.comparable_pairs()})


def chain_system(variance: str, objects: Sequence[FpAbGroup], maps: Sequence[IntMatrix]) -> GroupSystem:
    """System over the chain ``0 <= 1 <= ... <= n-1`` from consecutive bonds.

    ``maps[i]`` is the bond for ``i <= i+1`` (direct: ``X_i -> X_i+1``;
    inverse: ``X_i+1 -> X_i``).
    """
    n = len(objects)
    P = DirectedPoset.chain(n)
    bonds = {}
    for i, m in enumerate(maps):
        src, tgt = (objects[i], objects[i + 1]) if variance == DIRECT else (objects[i + 1], objects[i])
        bonds[(i, i + 1)] = GroupHom(src, tgt, m)
    return GroupSystem.build(variance, P, objects, bonds)


def validate_system(S: GroupSystem) -> GroupSystem:
    """Check identity bonds and the composition law, raising with witnesses."""
    P = S.index
    for a in P.elements():
        if not ab.hom_equal(S.bond(a, a), GroupHom.identity(S.objects[a])):
            raise SystemCheckError("identity-violation", (a,))
    n = P.size
    for a in range(n):
        for b in range(n):
            if a == b or not P.le(a, b):
                continue
            for c in range(n):
                if c == b or not P.le(b, c):
                    continue
                if S.variance == DIRECT:
                    composite = ab.compose(S.bond(b, c), S.bond(a, b))
                else:
                    composite = ab.compose(S.bond(a, b), S.bond(b, c))
                if not ab.hom_equal(composite, S.bond(a, c)):
                    raise SystemCheckError("composition-violation", (a, b, c))
    return S


# -- morphisms ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SystemMorphism:
    source: GroupSystem
    target: GroupSystem
    index_map: OrderMap
    components: tuple[GroupHom, ...]

    def __post_init__(self):
        if self.source.variance != self.target.variance:
            raise SystemCheckError("variance-mismatch", ())
        dom, cod = (self.source, self.target) if self.variance == DIRECT else (self.target, self.source)
        if self.index_map.source != dom.index or self.index_map.target != cod.index:
            raise SystemCheckError("index-mismatch", (), "index map does not match the systems' index sets")
        if len(self.components) != dom.index.size:
            raise SystemCheckError("shape-mismatch", (len(self.components),))
        for x, h in enumerate(self.components):
            src, tgt = self.component_ends(x)
            if h.source != src or h.target != tgt:
                raise SystemCheckError("shape-mismatch", (x,), f"component {x} has the wrong source or target")

    @property
    def variance(self) -> str:
        return self.source.variance

    def component_ends(self, x: int) -> tuple[FpAbGroup, FpAbGroup]:
        fx = self.index_map(x)
        if self.variance == DIRECT:
            return self.source.objects[x], self.target.objects[fx]
        return self.source.objects[fx], self.target.objects[x]


def identity_morphism(S: GroupSystem) -> SystemMorphism:
    return SystemMorphism(S, S, OrderMap.identity(S.index), tuple(GroupHom.identity(G) for G in S.objects))


def _square_holds(F: SystemMorphism, x: int, y: int) -> bool:
    f, S, T = F.index_map, F.source, F.target
    if F.variance == DIRECT:
        lhs = ab.compose(T.bond(f(x), f(y)), F.components[x])
        rhs = ab.compose(F.components[y], S.bond(x, y))
    else:
        lhs = ab.compose(F.components[x], S.bond(f(x), f(y)))
        rhs = ab.compose(T.bond(x, y), F.components[y])
    return ab.hom_equal(lhs, rhs)


def validate_morphism(F: SystemMorphism) -> SystemMorphism:
    """Check every commuting square, raising ``square-violation`` with the pair."""
    for x, y in F.index_map.source.comparable_pairs():
        if x != y and not _square_holds(F, x, y):
            raise SystemCheckError("square-violation", (x, y))
    return F


def compose_morphisms(G: SystemMorphism, F: SystemMorphism) -> SystemMorphism:
    """``G o F`` for ``F: X -> Y`` and ``G: Y -> Z``."""
    if F.target is not G.source and not _same_system(F.target, G.source):
        raise SystemCheckError("not-composable", ())
    if F.variance == DIRECT:
        index_map = F.index_map.then(G.index_map)
        comps = tuple(ab.compose(G.components[F.index_map(a)], F.components[a]) for a in F.source.index.elements())
    else:
        index_map = G.index_map.then(F.index_map)
        comps = tuple(ab.compose(G.components[c], F.components[G.index_map(c)]) for c in G.target.index.elements())
    return SystemMorphism(F.source, G.target, index_map, comps)


def _same_system(S: GroupSystem, T: GroupSystem) -> bool:
    if S.variance != T.variance or S.index != T.index or S.objects != T.objects:
        return False
    return all(ab.hom_equal(S.bond(*p), T.bond(*p)) for p in S.index.comparable_pairs())


@dataclass(frozen=True)
class EquivalenceVerdict:
    """Outcome of a ``~`` test; truthy iff equivalent.

    ``witness`` maps each domain index of the index maps to the reconciling
    index; ``failed_at`` is the first index that no candidate reconciles.
    """

    equivalent: bool
    witness: dict = field(default_factory=dict)
    failed_at: Optional[int] = None

    def __bool__(self):
        return self.equivalent


def morphisms_equivalent(F: SystemMorphism, G: SystemMorphism) -> EquivalenceVerdict:
    """Exhaustive search for reconciling indices, one per domain index."""
    if F.variance != G.variance or not (_same_system(F.source, G.source) and _same_system(F.target, G.target)):
        raise SystemCheckError("shape-mismatch", (), "morphisms must share source and target")
    f, g = F.index_map, G.index_map
    far = f.target  # index set where the reconciling element lives
    witness = {}
    for x in f.source.elements():
        fx, gx = f(x), g(x)
        cands = [c for c in far.upper_bounds(fx, gx)]
        cands.sort(key=lambda c: (c != fx, c != gx, c))
        for c in cands:
            if F.variance == DIRECT:
                lhs = ab.compose(F.target.bond(fx, c), F.components[x])
                rhs = ab.compose(G.target.bond(gx, c), G.components[x])
            else:
                lhs = ab.compose(F.components[x], F.source.bond(fx, c))
                rhs = ab.compose(G.components[x], G.source.bond(gx, c))
            if ab.hom_equal(lhs, rhs):
                witness[x] = c
                break
        else:
            return EquivalenceVerdict(False, witness, x)
    return EquivalenceVerdict(True, witness)


# -- limits ---------------------------------------------------------------------


def generating_pairs(P: DirectedPoset) -> list[tuple[int, int]]:
    """Strict comparable pairs whose reflexive-transitive closure is ``<=``.

    Cover relations between equivalence classes (via class representatives)
    plus a cycle through each class of equivalent elements.
    """
    n = P.size
    rep = [min(b for b in range(n) if P.equivalent(a, b)) for a in range(n)]
    reps = sorted(set(rep))
    pairs = []
    for r in reps:
        cls = [a for a in range(n) if rep[a] == r]
        if len(cls) > 1:
            pairs.extend(zip(cls, cls[1:] + cls[:1]))
    for r in reps:
        for s in reps:
            if r == s or not P.le(r, s):
                continue
            if any(t not in (r, s) and P.le(r, t) and P.le(t, s) for t in reps):
                continue
            pairs.append((r, s))
    return sorted(pairs)


@dataclass(frozen=True, eq=False)
class LimitResult:
    """(Co)limit group with its canonical projections.

    ``presentation`` is the raw construction; ``group`` is its simplified
    form and ``to_group``/``from_group`` connect the two.  ``structure`` is
    the quotient ``sum X_a -> presentation`` (direct) or the inclusion
    ``presentation -> sum X_a`` (inverse).
    """

    system: GroupSystem
    group: FpAbGroup
    projections: tuple[GroupHom, ...]
    presentation: FpAbGroup
    structure: GroupHom
    to_group: GroupHom
    from_group: GroupHom


def colimit(S: GroupSystem, *, pairs: str = "generating") -> LimitResult:
    """Direct sum of the objects modulo ``inj_b(p_ab(g)) - inj_a(g)``.

    ``pairs="generating"`` imposes the relations only along a generating
    set of comparable pairs (same quotient); ``"all"`` uses every pair.
    """
    if S.variance != DIRECT:
        raise SystemCheckError("bad-variance", (S.variance,), "colimit needs a direct system")
    total, injections, _ = ab.direct_sum(*S.objects)
    rel_cols = list(total.relations.columns())
    use = generating_pairs(S.index) if pairs == "generating" else [p for p in S.index.comparable_pairs() if p[0] != p[1]]
    for a, b in use:
        step = ab.compose(injections[b], S.bond(a, b)).matrix - injections[a].matrix
        rel_cols.extend(step.columns())
    raw = FpAbGroup(total.n_gens, IntMatrix.from_columns(rel_cols, rows=total.n_gens) if rel_cols else IntMatrix.zeros(total.n_gens, 0))
    quotient = GroupHom(total, raw, IntMatrix.identity(total.n_gens), check=False)
    G, to_g, from_g = ab.simplify(raw)
    projections = tuple(
        GroupHom(S.objects[a], G, to_g.matrix @ injections[a].matrix, check=False) for a in S.index.elements()
    )
    return LimitResult(S, G, projections, raw, quotient, to_g, from_g)


def limit(S: GroupSystem, *, pairs: str = "generating") -> LimitResult:
    """Compatible families: kernel of ``(x_a) -> (x_a - p_ab(x_b))``."""
    if S.variance != INVERSE:
        raise SystemCheckError("bad-variance", (S.variance,), "limit needs an inverse system")
    total, injections, projections = ab.direct_sum(*S.objects)
    use = generating_pairs(S.index) if pairs == "generating" else [p for p in S.index.comparable_pairs() if p[0] != p[1]]
    diff_target, _, _ = ab.direct_sum(*(S.objects[a] for a, _ in use))
    blocks = []
    for a, b in use:
        row = projections[a].matrix - ab.compose(S.bond(a, b), projections[b]).matrix
        blocks.append(row)
    D = GroupHom(total, diff_target, vstack(*blocks, cols=total.n_gens), check=False)
    raw, incl = ab.kernel(D)
    G, to_g, from_g = ab.simplify(raw)
    embed = incl.matrix @ from_g.matrix
    projs = tuple(
        GroupHom(G, S.objects[a], projections[a].matrix @ embed, check=False) for a in S.index.elements()
    )
    return LimitResult(S, G, projs, raw, incl, to_g, from_g)


def limit_of(S: GroupSystem) -> LimitResult:
    return colimit(S) if S.variance == DIRECT else limit(S)


def mediating_morphism(L: LimitResult, candidate: Sequence[GroupHom]) -> GroupHom:
    """Unique map between ``L`` and the apex of a compatible family.

    Direct: ``candidate[a]: X_a -> Y`` and the result ``g: L -> Y`` has
    ``g o p_a == candidate[a]``.  Inverse: ``candidate[a]: Y -> X_a`` and
    ``g: Y -> L`` has ``p_a o g == candidate[a]``.
    Raises ``incompatible-family`` with the offending pair.
    """
    S = L.system
    if len(candidate) != S.size:
        raise SystemCheckError("shape-mismatch", (len(candidate),), "one candidate map per index required")
    for a, b in S.index.comparable_pairs():
        if a == b:
            continue
        if S.variance == DIRECT:
            ok = ab.hom_equal(ab.compose(candidate[b], S.bond(a, b)), candidate[a])
        else:
            ok = ab.hom_equal(ab.compose(S.bond(a, b), candidate[b]), candidate[a])
        if not ok:
            raise SystemCheckError("incompatible-family", (a, b))
    if S.variance == DIRECT:
        Y = candidate[0].target
        raw = GroupHom(L.presentation, Y, hstack(*(h.matrix for h in candidate), rows=Y.n_gens))
        return ab.compose(raw, L.from_group)
    Y = candidate[0].source
    total = L.structure.target
    h = GroupHom(Y, total, vstack(*(c.matrix for c in candidate), cols=Y.n_gens), check=False)
    raw = ab.lift(h, L.structure)
    if raw is None:
        raise SystemCheckError("incompatible-family", (), "family does not factor through the limit")
    return ab.compose(L.to_group, raw)


def limit_of_morphism(
    F: SystemMorphism,
    source_limit: Optional[LimitResult] = None,
    target_limit: Optional[LimitResult] = None,
) -> GroupHom:
    """Induced map on (co)limits, characterised by ``f^oo p_a = q_f(a) f_a``."""
    LX = source_limit or limit_of(F.source)
    LY = target_limit or limit_of(F.target)
    f = F.index_map
    if F.variance == DIRECT:
        family = [ab.compose(LY.projections[f(a)], F.components[a]) for a in F.source.index.elements()]
        return mediating_morphism(LX, family)
    family = [ab.compose(F.components[b], LX.projections[f(b)]) for b in F.target.index.elements()]
    return mediating_morphism(LY, family)


def subsystem(S: GroupSystem, sub: Sequence[int]) -> GroupSystem:
    P = restrict(S.index, sub)
    bonds = {(i, j): S.bond(sub[i], sub[j]) for i, j in P.comparable_pairs()}
    return GroupSystem(S.variance, P, tuple(S.objects[a] for a in sub), bonds)


def restrict_to_cofinal(S: GroupSystem, sub: Sequence[int]) -> tuple[GroupSystem, SystemMorphism]:
    """Subsystem over a cofinal subset and its injection morphism.

    Direct variance: the injection goes subsystem -> S.  Inverse variance:
    the natural morphism is the restriction S -> subsystem.  In both cases
    the index map is the inclusion of ``sub`` and components are identities.
    """
    sub = list(sub)
    w = cofinality_witness(sub, S.index)
    if w is not None:
        raise SystemCheckError("not-cofinal", (w,))
    try:
        T = subsystem(S, sub)
    except PosetError as e:
        raise SystemCheckError("not-directed", e.witness) from e
    incl = OrderMap(T.index, S.index, tuple(sub))
    comps = tuple(GroupHom.identity(G) for G in T.objects)
    if S.variance == DIRECT:
        return T, SystemMorphism(T, S, incl, comps)
    return T, SystemMorphism(S, T, incl, comps)


def reindex_along(
    S: GroupSystem, j: OrderMap, isos: Sequence[GroupHom]
) -> tuple[GroupSystem, SystemMorphism]:
    """Transport ``S`` along an order isomorphism ``j: C -> S.index``.

    ``isos[c]`` is an isomorphism ``S.objects[j(c)] -> T_c``.  Returns the
    transported system ``T`` over ``C`` and the connecting morphism
    ``S -> T`` whose components are the given isomorphisms.
    """
    if j.target != S.index or not j.is_order_isomorphism():
        raise SystemCheckError("not-an-order-iso", ())
    C = j.source
    if len(isos) != C.size:
        raise SystemCheckError("shape-mismatch", (len(isos),))
    for c, phi in enumerate(isos):
        if phi.source != S.objects[j(c)]:
            raise SystemCheckError("shape-mismatch", (c,))
        if not ab.is_isomorphism(phi):
            raise SystemCheckError("component-not-iso", (c,))
    inv = [ab.inverse(phi) for phi in isos]
    bonds = {}
    for c, d in C.comparable_pairs():
        b = S.bond(j(c), j(d))
        if S.variance == DIRECT:
            bonds[(c, d)] = ab.compose(isos[d], ab.compose(b, inv[c]))
        else:
            bonds[(c, d)] = ab.compose(isos[c], ab.compose(b, inv[d]))
    T = GroupSystem(S.variance, C, tuple(phi.target for phi in isos), bonds)
    if S.variance == DIRECT:
        jinv = j.inverse()
        F = SystemMorphism(S, T, jinv, tuple(isos[jinv(a)] for a in S.index.elements()))
    else:
        F = SystemMorphism(S, T, j, tuple(isos))
    return T, F


@dataclass(frozen=True)
class CriterionVerdict:
    """Result of the cofinal-isomorphism criterion for inverse morphisms.

    ``reason`` is ``"i"``, ``"ii"`` or ``"iii"`` for the failed condition
    (None when all hold); ``witness`` is the offending index.
    """

    holds: bool
    reason: Optional[str] = None
    witness: Optional[int] = None
    limit_is_iso: Optional[bool] = None

    def __bool__(self):
        return self.holds


def check_limit_iso_criterion(F: SystemMorphism, sub: Sequence[int], *, confirm: bool = True) -> CriterionVerdict:
    """Sufficient condition for ``lim F`` to be an isomorphism.

    ``F: X (over A) -> Y (over B)`` with index map ``f: B -> A``.  Holds iff
    (i) ``sub`` is cofinal in ``B``, (ii) ``f(B)`` is cofinal in ``A`` and
    (iii) each component at ``b in sub`` is an isomorphism.  With
    ``confirm`` the limit map is also computed and tested.
    """
    if F.variance != INVERSE:
        raise SystemCheckError("bad-variance", (F.variance,), "criterion is stated for inverse systems")
    B = F.target.index
    w = cofinality_witness(sub, B)
    if w is not None:
        return CriterionVerdict(False, "i", w)
    w = cofinality_witness(F.index_map.image(), F.source.index)
    if w is not None:
        return CriterionVerdict(False, "ii", w)
    for b in sub:
        if not ab.is_isomorphism(F.components[b]):
            return CriterionVerdict(False, "iii", b)
    iso = ab.is_isomorphism(limit_of_morphism(F)) if confirm else None
    return CriterionVerdict(True, None, None, iso)


def top_element_oracle(S: GroupSystem) -> tuple[bool, bool]:
    """(group matches the top object, top projection is an isomorphism)."""
    t = find_top(S.index)
    L = limit_of(S)
    return L.group.isomorphic(S.objects[t]), ab.is_isomorphism(L.projections[t])
