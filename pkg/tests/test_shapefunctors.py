import random
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from instances import cx, cycle, excision_cases, loose_excision_case, naturality_cases, piece_model
from shapelab import abgroup as ab
from shapelab.generators import random_complex, random_family, random_model
from shapelab.posets import OrderMap, find_top
from shapelab.shapefunctors import (
    ModelError,
    build_filtered_model,
    cohomology_system,
    compare_shape_cohomology,
    compare_shape_homology,
    excision_pipeline,
    homology_system,
    induced_system_morphism,
    member_choice,
    naturality_audit,
    shape_cohomology,
    shape_homology,
    star_model,
    verify_system_equivalence,
)
from shapelab.simplicial import (
    ComplexError,
    SimplicialComplex,
    SimplicialMap,
    SimplicialPair,
    cohomology,
    homology,
    induced_hom,
)
from shapelab.systems import (
    SystemCheckError,
    compose_morphisms,
    identity_morphism,
    morphisms_equivalent,
    validate_system,
)


def cf(G):
    return G.canonical_form()


circle = cycle([0, 1, 2])
arcs = [cx((0, 1)), cx((1, 2)), cx((0, 2))]


def circle_model():
    family = arcs + [a.union(b) for a, b in combinations(arcs, 2)] + [circle]
    return build_filtered_model(circle, family)


def all_subcomplexes(K):
    simplices = K.sorted_simplices()
    out = []
    for r in range(1, len(simplices) + 1):
        for chosen in combinations(simplices, r):
            try:
                out.append(SimplicialComplex(frozenset(chosen)))
            except ComplexError:
                pass
    return out


# -- building models ---------------------------------------------------------------


def test_all_subcomplexes_model():
    K = cx((0, 1), (1, 2))
    family = all_subcomplexes(K)
    M = build_filtered_model(K, family)
    assert M.size == len(family) and M.member(M.top()) == K


def test_disjoint_edges_not_directed():
    K = cx((0, 1), (1, 2), (2, 3))
    with pytest.raises(ModelError) as err:
        build_filtered_model(K, [cx((0, 1)), cx((2, 3))])
    assert err.value.kind == "not-directed" and err.value.witness == (0, 1)


def test_star_model_valid():
    K = cx((0, 1, 2), (2, 3), (3, 4), (4, 2))
    M = star_model(K)
    assert M.member(M.top()) == K


def test_model_errors():
    K = cx((0, 1), (1, 2))
    with pytest.raises(ModelError) as err:
        build_filtered_model(K, [cx((0, 1))])
    assert err.value.kind == "union-deficit" and err.value.witness == (2,)
    with pytest.raises(ModelError) as err:
        build_filtered_model(K, [K, cx((0, 5))])
    assert err.value.kind == "not-a-subcomplex" and err.value.witness == (1, (5,))
    with pytest.raises(ModelError) as err:
        build_filtered_model(K, [SimplicialPair(K, K)])
    assert err.value.kind == "kind-mismatch"
    with pytest.raises(ModelError) as err:
        build_filtered_model(K, [K, SimplicialComplex.empty()])
    assert err.value.kind == "empty-member"
    with pytest.raises(ModelError) as err:
        build_filtered_model(K, [])
    assert err.value.kind == "empty-family"


# -- systems ----------------------------------------------------------------------


def test_singleton_family():
    M = build_filtered_model(circle, [circle])
    S = homology_system(M, 1)
    assert S.size == 1 and cf(S.objects[0]) == (1, ())
    assert cf(shape_homology(M, 1)) == (1, ())
    assert cf(shape_cohomology(M, 1)) == (1, ())


def test_circle_model_systems():
    M = circle_model()
    for S in (homology_system(M, 1), cohomology_system(M, 1)):
        validate_system(S)
        top = find_top(M.index)
        assert [cf(G) for G in S.objects] == [(1, ()) if a == top else (0, ()) for a in M.index.elements()]
    assert cf(shape_homology(M, 1)) == (1, ())
    assert cf(shape_cohomology(M, 1)) == (1, ())
    assert cf(shape_homology(M, 0)) == (1, ())


def test_pair_model_bond_by_hand():
    disk, rim = cx((0, 1, 2)), cycle([0, 1, 2])
    M = build_filtered_model(SimplicialPair(disk, rim), [SimplicialPair(disk, cx((0, 1), (1, 2))), SimplicialPair(disk, rim)])
    S = homology_system(M, 2)
    # (disk, arc) has trivial H_2; (disk, rim) has H_2 = Z
    assert cf(S.objects[0]) == (0, ()) and cf(S.objects[1]) == (1, ())
    T = cohomology_system(M, 1)
    # H^1(disk, arc) = 0 and H^1(disk, rim) = 0
    assert all(G.is_trivial() for G in T.objects)
    assert cf(shape_cohomology(M, 2)) == (1, ())
    assert cf(shape_homology(M, 2)) == (1, ())


def test_wedge_of_circles():
    K = cycle([0, 1, 2]).union(cycle([0, 3, 4]))
    M = star_model(K)
    assert cf(shape_homology(M, 1)) == (2, ())
    assert cf(shape_cohomology(M, 1)) == (2, ())
    assert cf(homology(K, 1)) == (2, ())


def test_mediating_map_is_the_comparison():
    M = circle_model()
    c = compare_shape_homology(M, 1)
    assert c.is_isomorphism
    top = M.space()
    for a in M.index.elements():
        incl = induced_hom(SimplicialMap.inclusion(M.member(a), top), 1)
        assert ab.hom_equal(ab.compose(c.comparison, c.limit.projections[a]), incl)


# -- induced morphisms ---------------------------------------------------------------


def test_identity_induces_identity():
    M = circle_model()
    F = induced_system_morphism(SimplicialMap.identity(circle), M, M, 1)
    assert morphisms_equivalent(F, identity_morphism(homology_system(M, 1)))


def test_constant_map_components_vanish():
    M = circle_model()
    P = build_filtered_model(cx((0,)), [cx((0,))])
    phi = SimplicialMap.from_dict(circle, cx((0,)), {0: 0, 1: 0, 2: 0})
    F = induced_system_morphism(phi, M, P, 1)
    assert all(ab.is_zero(h) for h in F.components)


def test_image_escapes_family():
    M = circle_model()
    small = build_filtered_model(cx((0, 1)), [cx((0, 1))])
    phi = SimplicialMap.from_dict(circle, circle, {0: 0, 1: 1, 2: 2})
    with pytest.raises(ModelError) as err:
        member_choice(phi, M, small)
    assert err.value.kind == "image-escapes-family"


def test_two_filtrations_of_circle_are_equivalent():
    A = circle_model()
    B = build_filtered_model(circle, [cx((0, 1), (1, 2)), circle])
    ident = SimplicialMap.identity(circle)
    for n in (0, 1):
        F = induced_system_morphism(ident, A, B, n)
        G = induced_system_morphism(ident, B, A, n)
        cert = verify_system_equivalence(F, G, n)
        assert cert.accepted and cert.limits_agree


def test_circle_and_point_not_equivalent():
    A = circle_model()
    P = build_filtered_model(cx((0,)), [cx((0,))])
    F = induced_system_morphism(SimplicialMap.from_dict(circle, cx((0,)), {0: 0, 1: 0, 2: 0}), A, P, 1)
    G = induced_system_morphism(SimplicialMap.from_dict(cx((0,)), circle, {0: 0}), P, A, 1)
    cert = verify_system_equivalence(F, G, 1)
    assert cert.fg_identity  # the point is dominated by the circle
    assert not cert.gf_identity and not cert.accepted
    assert cert.gf_identity.failed_at == find_top(A.index)


def test_identity_certificate():
    M = circle_model()
    I = identity_morphism(homology_system(M, 1))
    assert verify_system_equivalence(I, I).accepted


def test_certificate_needs_opposite_directions():
    M = circle_model()
    I = identity_morphism(homology_system(M, 1))
    J = identity_morphism(homology_system(M, 0))
    with pytest.raises(SystemCheckError) as err:
        verify_system_equivalence(I, J)
    assert err.value.kind == "shape-mismatch"


# -- excision and naturality -------------------------------------------------------------


@pytest.mark.parametrize("case", excision_cases(), ids=lambda c: c.name)
def test_excision_instances(case):
    report = excision_pipeline(case.model, case.W, range(3))
    assert report.admissible_cofinal and report.preimage_cofinal
    for d in report.degrees:
        assert d.criterion_J and d.criterion_J.limit_is_iso
        assert d.criterion_G and d.criterion_G.limit_is_iso
        assert d.composite_matches_inclusion and d.factorization_holds and d.inclusion_is_iso
    assert report.passed


def test_excision_shape_cohomology_matches_direct():
    case = excision_cases()[0]
    report = excision_pipeline(case.model, case.W, range(3))
    for n in range(3):
        assert cf(shape_cohomology(report.excised, n)) == cf(cohomology(case.model.total, n))


def test_empty_W_gives_identity():
    case = next(c for c in excision_cases() if c.name == "empty-W")
    report = excision_pipeline(case.model, case.W)
    assert report.excised.size == case.model.size
    assert all(all(d.component_isos) for d in report.degrees)


def test_loose_member_strict_and_relaxed():
    case = loose_excision_case()
    with pytest.raises(ModelError) as err:
        excision_pipeline(case.model, case.W)
    assert err.value.kind == "member-rejects-excision"
    assert err.value.witness[1:] == ("closure-escapes-sub", (0,))
    report = excision_pipeline(case.model, case.W, strict=False)
    assert 0 not in report.admissible and report.admissible_cofinal
    assert report.passed


def test_excision_closure_violation():
    K = cx((0, 1, 2), (1, 2, 3))
    M = piece_model(K, cx((0, 1)), [cx((0, 1, 2))])
    with pytest.raises(ComplexError) as err:
        excision_pipeline(M, K.open_star(0))
    assert err.value.kind == "closure-escapes-sub"


def test_excision_needs_pair_model():
    with pytest.raises(ModelError):
        excision_pipeline(circle_model(), [])


@pytest.mark.parametrize("case", naturality_cases(), ids=lambda c: c.name)
def test_naturality_instances(case):
    for n in range(3):
        report = naturality_audit(case.phi, case.source, case.target, n)
        assert all(report.squares) and report.systems_equivalent and report.limit_square


def test_naturality_needs_matching_models():
    case = naturality_cases()[0]
    with pytest.raises(ModelError):
        naturality_audit(case.phi, circle_model(), case.target, 0)


# -- randomized properties --------------------------------------------------------------


seeds = st.integers(0, 10**6)


@given(seeds, st.sampled_from([0, 3]))
def test_shape_groups_match_total(seed, coeff):
    M = random_model(random.Random(seed), 9, 6)
    for n in range(3):
        assert compare_shape_homology(M, n, coeff).is_isomorphism
        assert compare_shape_cohomology(M, n, coeff).is_isomorphism


@given(seeds)
def test_member_choice_does_not_change_class(seed):
    rng = random.Random(seed)
    M = random_model(rng, 8, 6)
    phi = SimplicialMap.identity(M.total.total)
    to_top = OrderMap(M.index, M.index, tuple(find_top(M.index) for _ in M.index.elements()))
    for n in (0, 1):
        F = induced_system_morphism(phi, M, M, n)
        G = induced_system_morphism(phi, M, M, n, index_map=to_top)
        assert morphisms_equivalent(F, G)


@given(seeds)
def test_composite_induced_morphism(seed):
    rng = random.Random(seed)
    K = random_complex(rng, 7, 2, min_vertices=3)
    m1 = {v: rng.randrange(5) for v in K.vertices}
    L = SimplicialComplex.from_simplices([[m1[v] for v in s] for s in K.maximal_simplices()])
    m2 = {v: rng.randrange(4) for v in L.vertices}
    N = SimplicialComplex.from_simplices([[m2[v] for v in s] for s in L.maximal_simplices()])
    MK, ML, MN = (build_filtered_model(X, random_family(rng, X, 5)) for X in (K, L, N))
    f = SimplicialMap.from_dict(K, L, m1)
    g = SimplicialMap.from_dict(L, N, m2)
    for n in (0, 1):
        F = induced_system_morphism(f, MK, ML, n)
        G = induced_system_morphism(g, ML, MN, n)
        assert morphisms_equivalent(induced_system_morphism(f.then(g), MK, MN, n), compose_morphisms(G, F))
        Fc = induced_system_morphism(f, MK, ML, n, cohomology=True)
        Gc = induced_system_morphism(g, ML, MN, n, cohomology=True)
        assert morphisms_equivalent(induced_system_morphism(f.then(g), MK, MN, n, cohomology=True), compose_morphisms(Fc, Gc))


@given(seeds)
def test_certificate_soundness(seed):
    rng = random.Random(seed)
    K = random_complex(rng, 8, 2, min_vertices=3)
    A = build_filtered_model(K, random_family(rng, K, 6))
    B = build_filtered_model(K, random_family(rng, K, 6))
    ident = SimplicialMap.identity(K)
    for n in range(3):
        cert = verify_system_equivalence(induced_system_morphism(ident, A, B, n), induced_system_morphism(ident, B, A, n), n)
        assert cert.accepted
        assert cert.limits_agree
        assert cf(shape_homology(A, n)) == cf(shape_homology(B, n))
