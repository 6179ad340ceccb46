"""Shape (co)homology of finite filtered simplicial models.

A :class:`FilteredModel` is a complex (or pair) together with a directed
family of subcomplexes (subpairs) ordered by inclusion whose union is the
whole.  Applying homology to the family gives a direct system whose colimit
is the shape homology; cohomology gives an inverse system whose limit is
the shape cohomology.  For finite models both agree with the (co)homology of
the total space, and the comparison map is produced explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence, Union

from . import abgroup as ab
from .abgroup import FpAbGroup, GroupHom
from .posets import DirectedPoset, OrderMap, PosetError, cofinality_witness, validate_directed
from .simplicial import (
    ComplexError,
    SimplicialComplex,
    SimplicialMap,
    SimplicialPair,
    Space,
    _simplex_key,
    as_pair,
    coboundary_hom,
    excision_witness,
    homology_data,
    induced_hom,
    normalize_simplex,
    parse_coeff,
)
from .systems import (
    DIRECT,
    INVERSE,
    CriterionVerdict,
    EquivalenceVerdict,
    GroupSystem,
    LimitResult,
    SystemCheckError,
    SystemMorphism,
    check_limit_iso_criterion,
    compose_morphisms,
    identity_morphism,
    limit_of,
    limit_of_morphism,
    mediating_morphism,
    morphisms_equivalent,
    validate_morphism,
)


class ModelError(ValueError):
    """Rejected model input; ``witness`` locates the problem."""

    def __init__(self, kind: str, witness=None, message: str = ""):
        super().__init__(message or f"{kind}: {witness!r}")
        self.kind = kind
        self.witness = witness


@dataclass(frozen=True, eq=False)
class FilteredModel:
    total: SimplicialPair
    members: tuple[SimplicialPair, ...]
    index: DirectedPoset
    is_pair: bool = False

    @property
    def size(self) -> int:
        return len(self.members)

    def member(self, a: int) -> Space:
        return self.members[a] if self.is_pair else self.members[a].total

    def space(self) -> Space:
        return self.total if self.is_pair else self.total.total

    def top(self) -> int:
        from .posets import find_top

        return find_top(self.index)

    def member_size(self, a: int) -> int:
        m = self.members[a]
        return len(m.total) + len(m.sub)


def _contains(big: SimplicialPair, small: SimplicialPair) -> bool:
    return small.total.simplices <= big.total.simplices and small.sub.simplices <= big.sub.simplices


def build_filtered_model(total: Space, family: Sequence[Space]) -> FilteredModel:
    """Validate a directed family covering ``total`` and order it by inclusion."""
    is_pair = isinstance(total, SimplicialPair)
    T = as_pair(total)
    members = []
    for a, m in enumerate(family):
        if isinstance(m, SimplicialPair) != is_pair:
            raise ModelError("kind-mismatch", a, "family members must match the total (complex vs pair)")
        P = as_pair(m)
        if not P.total.simplices:
            raise ModelError("empty-member", a)
        for s in sorted(P.total.simplices - T.total.simplices, key=_simplex_key):
            raise ModelError("not-a-subcomplex", (a, s))
        for s in sorted(P.sub.simplices - T.sub.simplices, key=_simplex_key):
            raise ModelError("not-a-subcomplex", (a, s))
        members.append(P)
    if not members:
        raise ModelError("empty-family", None)
    leq = [[_contains(b, a) for b in members] for a in members]
    try:
        P = validate_directed(leq)
    except PosetError as e:
        raise ModelError(e.kind, e.witness) from e
    covered_total = frozenset().union(*(m.total.simplices for m in members))
    covered_sub = frozenset().union(*(m.sub.simplices for m in members))
    for s in sorted(T.total.simplices - covered_total, key=_simplex_key):
        raise ModelError("union-deficit", s)
    for s in sorted(T.sub.simplices - covered_sub, key=_simplex_key):
        raise ModelError("union-deficit", s)
    return FilteredModel(T, tuple(members), P, is_pair)


def star_model(K: SimplicialComplex) -> FilteredModel:
    """Closed vertex stars, their pairwise unions and ``K`` itself."""
    stars = [K.closed_star(v) for v in K.vertices]
    family = list(stars)
    for i in range(len(stars)):
        for j in range(i + 1, len(stars)):
            family.append(stars[i].union(stars[j]))
    family.append(K)
    return build_filtered_model(K, _dedupe(family))


def _dedupe(family: Iterable) -> list:
    seen, out = set(), []
    for m in family:
        if m not in seen:
            seen.add(m)
            out.append(m)
    return out


# -- systems ------------------------------------------------------------------------


@lru_cache(maxsize=1024)
def _system(M: FilteredModel, n: int, coeff: int, cohomology: bool) -> GroupSystem:
    objects = tuple(homology_data(M.member(a), n, coeff, cohomology=cohomology).group for a in M.index.elements())
    bonds = {}
    for a, b in M.index.comparable_pairs():
        if a == b:
            bonds[(a, b)] = GroupHom.identity(objects[a])
            continue
        incl = SimplicialMap.inclusion(M.member(a), M.member(b))
        bonds[(a, b)] = induced_hom(incl, n, coeff, cohomology=cohomology)
    return GroupSystem(INVERSE if cohomology else DIRECT, M.index, objects, bonds)


def homology_system(M: FilteredModel, n: int, coeff: Union[int, str] = 0) -> GroupSystem:
    """Direct system ``a -> H_n(M_a)`` with inclusion-induced bonds."""
    return _system(M, n, parse_coeff(coeff), False)


def cohomology_system(M: FilteredModel, n: int, coeff: Union[int, str] = 0) -> GroupSystem:
    """Inverse system ``a -> H^n(M_a)`` with restriction bonds."""
    return _system(M, n, parse_coeff(coeff), True)


def sub_cohomology_system(M: FilteredModel, n: int, coeff: Union[int, str] = 0) -> GroupSystem:
    """``a -> H^n(L_a)`` for the subcomplexes of a pair model, over the same index."""
    m = parse_coeff(coeff)
    subs = [P.sub for P in M.members]
    objects = tuple(homology_data(L, n, m, cohomology=True).group for L in subs)
    bonds = {}
    for a, b in M.index.comparable_pairs():
        bonds[(a, b)] = induced_hom(SimplicialMap.inclusion(subs[a], subs[b]), n, m, cohomology=True)
    return GroupSystem(INVERSE, M.index, objects, bonds)


@dataclass(frozen=True, eq=False)
class ShapeComparison:
    """Shape (co)homology next to the direct computation on the total space.

    ``comparison`` is the mediating map ``colim -> H_n(total)`` for homology
    and ``H^n(total) -> lim`` for cohomology.
    """

    degree: int
    limit: LimitResult
    direct: FpAbGroup
    comparison: GroupHom
    is_isomorphism: bool

    @property
    def group(self) -> FpAbGroup:
        return self.limit.group


def compare_shape_homology(M: FilteredModel, n: int, coeff: Union[int, str] = 0) -> ShapeComparison:
    m = parse_coeff(coeff)
    L = limit_of(homology_system(M, n, m))
    top = M.space()
    family = [induced_hom(SimplicialMap.inclusion(M.member(a), top), n, m) for a in M.index.elements()]
    comp = mediating_morphism(L, family)
    direct = homology_data(top, n, m).group
    return ShapeComparison(n, L, direct, comp, ab.is_isomorphism(comp))


def compare_shape_cohomology(M: FilteredModel, n: int, coeff: Union[int, str] = 0) -> ShapeComparison:
    m = parse_coeff(coeff)
    L = limit_of(cohomology_system(M, n, m))
    top = M.space()
    family = [induced_hom(SimplicialMap.inclusion(M.member(a), top), n, m, cohomology=True) for a in M.index.elements()]
    comp = mediating_morphism(L, family)
    direct = homology_data(top, n, m, cohomology=True).group
    return ShapeComparison(n, L, direct, comp, ab.is_isomorphism(comp))


class ShapeMismatch(AssertionError):
    pass


def shape_homology(M: FilteredModel, n: int, coeff: Union[int, str] = 0, *, verify: bool = True) -> FpAbGroup:
    """Colimit of the homology system; with ``verify`` the comparison map must be an isomorphism."""
    if not verify:
        return limit_of(homology_system(M, n, coeff)).group
    c = compare_shape_homology(M, n, coeff)
    if not c.is_isomorphism:
        raise ShapeMismatch(f"shape homology in degree {n} does not match the total space")
    return c.group


def shape_cohomology(M: FilteredModel, n: int, coeff: Union[int, str] = 0, *, verify: bool = True) -> FpAbGroup:
    if not verify:
        return limit_of(cohomology_system(M, n, coeff)).group
    c = compare_shape_cohomology(M, n, coeff)
    if not c.is_isomorphism:
        raise ShapeMismatch(f"shape cohomology in degree {n} does not match the total space")
    return c.group


# -- morphisms ------------------------------------------------------------------------


def greedy_index_map(
    source: DirectedPoset,
    target: DirectedPoset,
    admissible: Callable[[int, int], bool],
    weight: Callable[[int], int],
) -> tuple[int, ...]:
    """Order-preserving ``f: source -> target`` with ``admissible(a, f(a))``.

    Elements are handled along a linear extension; each takes the lightest
    admissible target (ties by index) lying above the choices already made
    for elements strictly below it.  Equivalent elements share a choice.
    Raises ``ModelError('no-admissible-target', a)``.
    """
    choice: dict[int, int] = {}
    for a in source.linear_extension():
        if a in choice:
            continue
        below = [choice[x] for x in source.strictly_below(a)]
        cls = [x for x in source.elements() if source.equivalent(a, x)]
        cands = [
            t
            for t in target.elements()
            if all(admissible(x, t) for x in cls) and all(target.le(s, t) for s in below)
        ]
        if not cands:
            raise ModelError("no-admissible-target", a)
        pick = min(cands, key=lambda t: (weight(t), t))
        for x in cls:
            choice[x] = pick
    return tuple(choice[a] for a in source.elements())


def _image_pair(phi: SimplicialMap, P: SimplicialPair) -> SimplicialPair:
    return SimplicialPair(phi.image_of(P.total), phi.image_of(P.sub))


def member_choice(phi: SimplicialMap, MX: FilteredModel, MY: FilteredModel) -> OrderMap:
    """Index map ``a -> smallest member of MY containing phi(MX_a)``, made order-preserving."""
    images = [_image_pair(phi, P) for P in MX.members]
    for a, img in enumerate(images):
        if not any(_contains(Q, img) for Q in MY.members):
            raise ModelError("image-escapes-family", a)
    mapping = greedy_index_map(
        MX.index, MY.index, lambda a, t: _contains(MY.members[t], images[a]), MY.member_size
    )
    return OrderMap(MX.index, MY.index, mapping)


def induced_system_morphism(
    phi: SimplicialMap,
    MX: FilteredModel,
    MY: FilteredModel,
    n: int,
    coeff: Union[int, str] = 0,
    *,
    cohomology: bool = False,
    index_map: Optional[OrderMap] = None,
) -> SystemMorphism:
    """System morphism induced by a simplicial map between models.

    Homology: ``H_n(MX) -> H_n(MY)``.  Cohomology: ``H^n(MY) -> H^n(MX)``.
    In both cases the index map sends ``a`` to a member containing
    ``phi(MX_a)``; pass ``index_map`` to override the default choice.
    """
    m = parse_coeff(coeff)
    f = index_map or member_choice(phi, MX, MY)
    comps = []
    for a in MX.index.elements():
        local = phi.restrict(MX.member(a), MY.member(f(a)))
        comps.append(induced_hom(local, n, m, cohomology=cohomology))
    if cohomology:
        F = SystemMorphism(cohomology_system(MY, n, m), cohomology_system(MX, n, m), f, tuple(comps))
    else:
        F = SystemMorphism(homology_system(MX, n, m), homology_system(MY, n, m), f, tuple(comps))
    return validate_morphism(F)


@dataclass(frozen=True, eq=False)
class ShapeEquivalenceCertificate:
    F: SystemMorphism
    G: SystemMorphism
    degree: Optional[int]
    gf_identity: EquivalenceVerdict
    fg_identity: EquivalenceVerdict
    limits_agree: Optional[bool] = None

    @property
    def accepted(self) -> bool:
        return bool(self.gf_identity) and bool(self.fg_identity)

    def __bool__(self):
        return self.accepted


def verify_system_equivalence(
    F: SystemMorphism, G: SystemMorphism, degree: Optional[int] = None
) -> ShapeEquivalenceCertificate:
    """Test ``G o F ~ 1`` and ``F o G ~ 1``; on success compare the (co)limits."""
    try:
        GF = compose_morphisms(G, F)
        FG = compose_morphisms(F, G)
    except SystemCheckError as e:
        raise SystemCheckError("shape-mismatch", e.witness, "F and G must run in opposite directions") from e
    gf = morphisms_equivalent(GF, identity_morphism(F.source))
    fg = morphisms_equivalent(FG, identity_morphism(F.target))
    agree = None
    if gf and fg:
        agree = limit_of(F.source).group.isomorphic(limit_of(F.target).group)
    return ShapeEquivalenceCertificate(F, G, degree, gf, fg, agree)


# -- excision --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExcisionDegreeReport:
    degree: int
    criterion_J: CriterionVerdict
    criterion_G: CriterionVerdict
    component_isos: tuple[bool, ...]
    composite_matches_inclusion: EquivalenceVerdict
    factorization_holds: bool
    inclusion_is_iso: bool

    @property
    def passed(self) -> bool:
        return (
            bool(self.criterion_J)
            and bool(self.criterion_G)
            and bool(self.composite_matches_inclusion)
            and self.factorization_holds
            and self.inclusion_is_iso
            and self.criterion_J.limit_is_iso is not False
            and self.criterion_G.limit_is_iso is not False
        )


@dataclass(frozen=True, eq=False)
class ExcisionReport:
    model: FilteredModel
    excised: FilteredModel
    removed: frozenset
    admissible: tuple[int, ...]
    admissible_cofinal: bool
    preimage_cofinal: bool
    g_map: tuple[int, ...]
    degrees: tuple[ExcisionDegreeReport, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return self.admissible_cofinal and self.preimage_cofinal and all(d.passed for d in self.degrees)


def _restrict_W(W: frozenset, P: SimplicialPair) -> frozenset:
    return frozenset(s for s in W if s in P.total.simplices)


def excision_pipeline(
    M: FilteredModel,
    W: Iterable[Iterable],
    degrees: Iterable[int] = range(3),
    coeff: Union[int, str] = 0,
    *,
    strict: bool = True,
) -> ExcisionReport:
    """Check that excising ``W`` induces an isomorphism on shape cohomology.

    The map is factored through an auxiliary system over a copy ``C`` of
    the index set whose objects are the excised members.  ``J`` compares the
    model with that system (index map the identity) and ``G`` compares the
    auxiliary system with the excised model.  Both limit maps are tested
    with the cofinal-isomorphism criterion, and the inclusion-induced map
    is checked to be equivalent to ``G o J`` and to be an isomorphism.

    With ``strict`` every member meeting ``W`` must admit the excision;
    otherwise such members are merely left out of the admissible set.
    """
    if not M.is_pair:
        raise ModelError("not-a-pair-model", None)
    m = parse_coeff(coeff)
    W = frozenset(normalize_simplex(s) for s in W)
    bad = excision_witness(M.total, W)
    if bad is not None:
        raise ComplexError(bad[0], bad[1])
    admissible = []
    for a, P in enumerate(M.members):
        bad = excision_witness(P, _restrict_W(W, P))
        if bad is None:
            admissible.append(a)
        elif strict:
            raise ModelError("member-rejects-excision", (a, bad[0], bad[1]))

    def cut(P: SimplicialPair) -> SimplicialPair:
        return SimplicialPair(P.total.remove(W), P.sub.remove(W))

    C_members = [cut(P) for P in M.members]
    excised_total = cut(M.total)
    B = build_filtered_model(excised_total, _dedupe(P for P in C_members if P.total.simplices))
    A = M.index
    C = A  # same order, objects are the excised members
    j = OrderMap(C, A, tuple(A.elements()))
    admissible_cofinal = cofinality_witness(admissible, A) is None
    preimage = [c for c in C.elements() if j(c) in admissible]
    preimage_cofinal = cofinality_witness(preimage, C) is None

    g = greedy_index_map(
        B.index,
        C,
        lambda b, c: _contains(C_members[c], B.members[b]),
        lambda c: len(C_members[c].total) + len(C_members[c].sub),
    )
    g_map = OrderMap(B.index, C, g)
    G_exact = [b for b in B.index.elements() if C_members[g[b]] == B.members[b]]

    reports = []
    for n in degrees:
        HA = cohomology_system(M, n, m)
        HB = cohomology_system(B, n, m)
        objs = tuple(homology_data(P, n, m, cohomology=True).group for P in C_members)
        bonds = {
            (c, d): induced_hom(SimplicialMap.inclusion(C_members[c], C_members[d]), n, m, cohomology=True)
            for c, d in C.comparable_pairs()
        }
        HC = GroupSystem(INVERSE, C, objs, bonds)
        J = validate_morphism(SystemMorphism(
            HA,
            HC,
            j,
            tuple(
                induced_hom(SimplicialMap.inclusion(C_members[c], M.members[j(c)]), n, m, cohomology=True)
                for c in C.elements()
            ),
        ))
        G = validate_morphism(SystemMorphism(
            HC,
            HB,
            g_map,
            tuple(
                induced_hom(SimplicialMap.inclusion(B.members[b], C_members[g[b]]), n, m, cohomology=True)
                for b in B.index.elements()
            ),
        ))
        incl = SimplicialMap.inclusion(B.total, M.total)
        I = induced_system_morphism(incl, B, M, n, m, cohomology=True)
        verdict_J = check_limit_iso_criterion(J, preimage)
        verdict_G = check_limit_iso_criterion(G, G_exact)
        LA, LB, LC = limit_of(HA), limit_of(HB), limit_of(HC)
        j_hat = limit_of_morphism(J, LA, LC)
        g_hat = limit_of_morphism(G, LC, LB)
        i_hat = limit_of_morphism(I, LA, LB)
        reports.append(
            ExcisionDegreeReport(
                n,
                verdict_J,
                verdict_G,
                tuple(ab.is_isomorphism(h) for h in J.components),
                morphisms_equivalent(compose_morphisms(G, J), I),
                ab.hom_equal(i_hat, ab.compose(g_hat, j_hat)),
                ab.is_isomorphism(i_hat),
            )
        )
    return ExcisionReport(M, B, W, tuple(admissible), admissible_cofinal, preimage_cofinal, g, tuple(reports))


# -- naturality ----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NaturalityReport:
    degree: int
    index_map: tuple[int, ...]
    squares: tuple[bool, ...]
    systems_equivalent: EquivalenceVerdict
    limit_square: bool

    @property
    def passed(self) -> bool:
        return all(self.squares) and bool(self.systems_equivalent) and self.limit_square


def coboundary_morphism(M: FilteredModel, n: int, coeff: Union[int, str] = 0) -> SystemMorphism:
    """``H^n(sub system) -> H^n+1(pair system)`` with coboundary components."""
    m = parse_coeff(coeff)
    comps = tuple(coboundary_hom(P, n, m) for P in M.members)
    return validate_morphism(SystemMorphism(
        sub_cohomology_system(M, n, m), cohomology_system(M, n + 1, m), OrderMap.identity(M.index), comps
    ))


def naturality_audit(
    phi: SimplicialMap, MX: FilteredModel, MY: FilteredModel, n: int, coeff: Union[int, str] = 0
) -> NaturalityReport:
    """Coboundary versus induced maps, index by index, as systems and on limits."""
    if not (MX.is_pair and MY.is_pair):
        raise ModelError("family-mismatch", None, "naturality needs pair models")
    if as_pair(phi.source) != MX.total or as_pair(phi.target) != MY.total:
        raise ModelError("family-mismatch", None, "map must run between the models' total pairs")
    m = parse_coeff(coeff)
    f = member_choice(phi, MX, MY)
    F = induced_system_morphism(phi, MX, MY, n + 1, m, cohomology=True, index_map=f)
    sub_comps = tuple(
        induced_hom(phi.restrict(MX.members[a].sub, MY.members[f(a)].sub), n, m, cohomology=True)
        for a in MX.index.elements()
    )
    G = validate_morphism(SystemMorphism(sub_cohomology_system(MY, n, m), sub_cohomology_system(MX, n, m), f, sub_comps))
    DX = coboundary_morphism(MX, n, m)
    DY = coboundary_morphism(MY, n, m)
    squares = tuple(
        ab.hom_equal(ab.compose(DX.components[a], G.components[a]), ab.compose(F.components[a], DY.components[f(a)]))
        for a in MX.index.elements()
    )
    left = compose_morphisms(DX, G)
    right = compose_morphisms(F, DY)
    verdict = morphisms_equivalent(left, right)
    LX0, LX = limit_of(DX.source), limit_of(DX.target)
    LY0, LY = limit_of(DY.source), limit_of(DY.target)
    lhs = ab.compose(limit_of_morphism(DX, LX0, LX), limit_of_morphism(G, LY0, LX0))
    rhs = ab.compose(limit_of_morphism(F, LY, LX), limit_of_morphism(DY, LY0, LY))
    return NaturalityReport(n, f.mapping, squares, verdict, ab.hom_equal(lhs, rhs))
