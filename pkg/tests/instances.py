"""Hand-built pair models for the excision and naturality checks."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from shapelab.shapefunctors import FilteredModel, build_filtered_model
from shapelab.simplicial import SimplicialComplex, SimplicialMap, SimplicialPair, open_star_of_vertices


def cx(*facets) -> SimplicialComplex:
    return SimplicialComplex.from_simplices(facets)


def cycle(vertices) -> SimplicialComplex:
    vs = list(vertices)
    return cx(*[(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))])


def piece_model(total: SimplicialComplex, sub: SimplicialComplex, pieces, *, unions: bool = True) -> FilteredModel:
    """Members ``(P, P & sub)`` for each piece, optional pairwise unions, and the whole pair."""
    pieces = list(pieces)
    if unions:
        pieces += [a.union(b) for a, b in combinations(pieces, 2)]
    family, seen = [], set()
    for P in pieces + [total]:
        pair = SimplicialPair(P, P.intersection(sub))
        if P.simplices and pair not in seen:
            seen.add(pair)
            family.append(pair)
    return build_filtered_model(SimplicialPair(total, sub), family)


def stars(K: SimplicialComplex, vertices) -> list[SimplicialComplex]:
    return [K.closed_star(v) for v in vertices]


def octahedron() -> SimplicialComplex:
    # +x=0, -x=1, +y=2, -y=3, +z=4, -z=5
    return cx(*[(x, y, z) for x in (0, 1) for y in (2, 3) for z in (4, 5)])


def projective_plane() -> SimplicialComplex:
    return cx(
        (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
        (2, 3, 5), (3, 4, 6), (2, 4, 5), (3, 5, 6), (2, 4, 6),
    )


def torus() -> SimplicialComplex:
    return cx(*[(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)], *[(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)])


@dataclass
class ExcisionCase:
    name: str
    model: FilteredModel
    W: frozenset


def excision_cases() -> list[ExcisionCase]:
    out = []

    # two filled triangles glued along 12; sub is triangle 012; excise the far vertex 0
    K = cx((0, 1, 2), (1, 2, 3))
    K0 = cx((0, 1, 2))
    M = piece_model(K, K0, [cx((0, 1, 2)), cx((1, 2, 3)), cx((1, 2))])
    out.append(ExcisionCase("two-triangles", M, open_star_of_vertices(K, [0])))

    out.append(ExcisionCase("empty-W", M, frozenset()))

    # hollow version: two triangle boundaries sharing edge 12, sub the two edges at 3
    K = cx((0, 1), (0, 2), (1, 2), (1, 3), (2, 3))
    K0 = cx((1, 3), (2, 3))
    M = piece_model(K, K0, [cycle([0, 1, 2]), K0, cx((1, 2), (1, 3), (2, 3))], unions=False)
    out.append(ExcisionCase("hollow-triangles", M, open_star_of_vertices(K, [3])))

    # hexagon with an arc around vertex 0
    K = cycle(range(6))
    K0 = cx((5, 0), (0, 1), (1, 2))
    M = piece_model(K, K0, [cx((0, 1), (1, 2), (2, 3)), cx((3, 4), (4, 5), (5, 0)), cx((5, 0), (0, 1))])
    out.append(ExcisionCase("hexagon-arc", M, open_star_of_vertices(K, [0])))

    # path with stars at both ends excised together
    K = cx(*[(i, i + 1) for i in range(6)])
    K0 = cx((0, 1), (5, 6))
    M = piece_model(K, K0, [cx((0, 1), (1, 2), (2, 3)), cx((3, 4), (4, 5), (5, 6))])
    out.append(ExcisionCase("path-ends", M, open_star_of_vertices(K, [0, 6])))

    # octahedron, sub the closed upper hemisphere star of the north pole
    K = octahedron()
    K0 = K.closed_star(4)
    M = piece_model(K, K0, [K.closed_star(4), K.closed_star(5), *stars(K, [0, 2])])
    out.append(ExcisionCase("sphere-cap", M, open_star_of_vertices(K, [4])))

    # projective plane minus the star of vertex 1
    K = projective_plane()
    K0 = K.closed_star(1).union(cx((2, 3, 5)))
    M = piece_model(K, K0, stars(K, [1, 2, 4]))
    out.append(ExcisionCase("projective-plane", M, open_star_of_vertices(K, [1])))

    # seven-vertex torus
    K = torus()
    K0 = K.closed_star(0)
    M = piece_model(K, K0, stars(K, [0, 3, 5]))
    out.append(ExcisionCase("torus", M, open_star_of_vertices(K, [0])))

    # two disjoint circles, sub a whole circle plus an arc of the other
    K = cycle([0, 1, 2]).union(cycle([10, 11, 12, 13]))
    K0 = cycle([0, 1, 2]).union(cx((10, 11)))
    M = piece_model(K, K0, [cycle([0, 1, 2]), cycle([10, 11, 12, 13]), cx((0, 1), (0, 2))])
    out.append(ExcisionCase("two-circles", M, open_star_of_vertices(K, [0])))

    # cone over a square with the apex excised; string labels
    K = cx(*[("apex", a, b) for a, b in (("n", "e"), ("e", "s"), ("s", "w"), ("w", "n"))])
    K0 = K.closed_star("apex")
    M = piece_model(K, K0, [cx(("apex", "n", "e"), ("apex", "e", "s")), cx(("apex", "s", "w"), ("apex", "w", "n"))])
    out.append(ExcisionCase("cone-apex", M, open_star_of_vertices(K, ["apex"])))

    return out


def loose_excision_case() -> ExcisionCase:
    """A model with one member whose sub misses the closed star of the centre.

    The member ``(star of 0, its boundary edge 12)`` meets ``W`` but cannot
    be excised; the rest of the family stays cofinal.
    """
    K = cx((0, 1, 2), (1, 2, 3))
    K0 = cx((0, 1, 2))
    bad = SimplicialPair(cx((0, 1, 2)), cx((1, 2)))
    family = [bad, SimplicialPair(cx((0, 1, 2)), K0), SimplicialPair(cx((1, 2, 3)), cx((1, 2))), SimplicialPair(K, K0)]
    M = build_filtered_model(SimplicialPair(K, K0), family)
    return ExcisionCase("loose-member", M, open_star_of_vertices(K, [0]))


@dataclass
class NaturalityCase:
    name: str
    phi: SimplicialMap
    source: FilteredModel
    target: FilteredModel


def _map(source: FilteredModel, target: FilteredModel, mapping) -> SimplicialMap:
    return SimplicialMap.from_dict(source.total, target.total, mapping)


def naturality_cases() -> list[NaturalityCase]:
    out = []
    disk = cx((0, 1, 2))
    rim = cycle([0, 1, 2])
    D = piece_model(disk, rim, [cx((0, 1), (1, 2)), cx((1, 2), (2, 0)), cx((0, 1), (0, 2))], unions=False)
    out.append(NaturalityCase("identity", _map(D, D, {0: 0, 1: 1, 2: 2}), D, D))
    out.append(NaturalityCase("rotation", _map(D, D, {0: 1, 1: 2, 2: 0}), D, D))
    out.append(NaturalityCase("reflection", _map(D, D, {0: 0, 1: 2, 2: 1}), D, D))

    # the rim pair (circle, arc) includes into the disk pair
    arc = cx((0, 1), (1, 2))
    R = piece_model(rim, arc, [arc, cx((1, 2), (2, 0))], unions=False)
    out.append(NaturalityCase("subpair-inclusion", _map(R, D, {0: 0, 1: 1, 2: 2}), R, D))

    # coned square collapsing onto the triangle: 3 -> 2 and apex -> 0
    cone = cx(*[(4, a, b) for a, b in ((0, 1), (1, 2), (2, 3), (3, 0))])
    square = cycle([0, 1, 2, 3])
    S = piece_model(cone, square, [cone.closed_star(0), cone.closed_star(2)])
    out.append(NaturalityCase("collapse", _map(S, D, {0: 0, 1: 1, 2: 2, 3: 2, 4: 0}), S, D))

    # hexagon wrapping twice around the triangle, based at a vertex
    hexagon = cycle(range(6))
    H = piece_model(hexagon, cx((0,)), [cx((0, 1), (1, 2), (2, 3)), cx((3, 4), (4, 5), (5, 0))])
    T = piece_model(rim, cx((0,)), [arc, cx((2, 0))])
    out.append(NaturalityCase("double-cover", _map(H, T, {i: i % 3 for i in range(6)}), H, T))

    # antipodal map of the octahedron preserving the equator
    K = octahedron()
    eq = cycle([0, 2, 1, 3])
    O = piece_model(K, eq, [K.closed_star(4), K.closed_star(5)])
    out.append(NaturalityCase("antipodal", _map(O, O, {0: 1, 1: 0, 2: 3, 3: 2, 4: 5, 5: 4}), O, O))

    # everything to a point
    P = piece_model(cx((0,)), cx((0,)), [])
    out.append(NaturalityCase("constant", _map(O, P, {v: 0 for v in range(6)}), O, P))

    # projective plane: enlarge the sub from one star to two
    K = projective_plane()
    A = piece_model(K, K.closed_star(1), stars(K, [1, 3, 5]))
    B = piece_model(K, K.closed_star(1).union(K.closed_star(2)), stars(K, [2, 4]))
    out.append(NaturalityCase("projective-enlarge", _map(A, B, {v: v for v in K.vertices}), A, B))

    # cylinder squashed onto the triangle rim, both ends wrapping once
    cyl = cx((0, 1, 3), (1, 3, 4), (1, 2, 4), (2, 4, 5), (2, 0, 5), (0, 5, 3))
    ends = cycle([0, 1, 2]).union(cycle([3, 4, 5]))
    C = piece_model(cyl, ends, [cyl.closed_star(0), cyl.closed_star(4)])
    out.append(NaturalityCase("cylinder-squash", _map(C, D, {0: 0, 1: 1, 2: 2, 3: 0, 4: 1, 5: 2}), C, D))
    return out
