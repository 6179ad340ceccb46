"""Finite simplicial complexes, pairs and maps, with (co)homology.

Simplices are tuples of vertex labels in sorted order; that order fixes the
orientation and the boundary signs.  Coefficients are given as an integer
modulus ``m``: ``0`` means Z and ``m >= 2`` means Z/m.  A plain complex is
treated as the pair ``(K, empty)`` wherever a pair is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Optional, Sequence, Union

from . import abgroup as ab
from .abgroup import ExactSequence, FpAbGroup, GroupHom
from .exactla import IntMatrix, hstack, smith_normal_form

Simplex = tuple


def _label_key(v):
    return (isinstance(v, str), v)


def _simplex_key(s):
    return (len(s), tuple(_label_key(v) for v in s))


def normalize_simplex(vertices: Iterable[Hashable]) -> Simplex:
    vs = sorted(set(vertices), key=_label_key)
    if not vs:
        raise ValueError("simplices are nonempty vertex sets")
    return tuple(vs)


class ComplexError(ValueError):
    """Rejected simplicial input; ``witness`` is an offending simplex or vertex."""

    def __init__(self, kind: str, witness=None, message: str = ""):
        super().__init__(message or f"{kind}: {witness!r}")
        self.kind = kind
        self.witness = witness


@dataclass(frozen=True)
class SimplicialComplex:
    simplices: frozenset

    def __post_init__(self):
        for s in self.simplices:
            if len(s) > 1:
                for face in combinations(s, len(s) - 1):
                    if face not in self.simplices:
                        raise ComplexError("not-closed", face, f"face {face} of {s} is missing")

    @classmethod
    def from_simplices(cls, simplices: Iterable[Iterable[Hashable]]) -> "SimplicialComplex":
        """Downward closure of the given simplices."""
        out = set()
        for s in simplices:
            s = normalize_simplex(s)
            for k in range(1, len(s) + 1):
                out.update(combinations(s, k))
        return cls(frozenset(out))

    @classmethod
    def empty(cls) -> "SimplicialComplex":
        return cls(frozenset())

    @classmethod
    def full_simplex(cls, vertices: Iterable[Hashable]) -> "SimplicialComplex":
        return cls.from_simplices([vertices])

    @cached_property
    def _by_dim(self) -> dict[int, list[Simplex]]:
        out: dict[int, list[Simplex]] = {}
        for s in sorted(self.simplices, key=_simplex_key):
            out.setdefault(len(s) - 1, []).append(s)
        return out

    def simplices_of_dim(self, n: int) -> list[Simplex]:
        return self._by_dim.get(n, [])

    @property
    def vertices(self) -> list:
        return [s[0] for s in self.simplices_of_dim(0)]

    @property
    def dimension(self) -> int:
        return max(self._by_dim, default=-1)

    def sorted_simplices(self) -> list[Simplex]:
        return [s for n in sorted(self._by_dim) for s in self._by_dim[n]]

    def maximal_simplices(self) -> list[Simplex]:
        out = []
        for s in self.sorted_simplices():
            if not any(len(t) == len(s) + 1 and set(s) <= set(t) for t in self.simplices_of_dim(len(s))):
                out.append(s)
        return out

    def __contains__(self, s) -> bool:
        return normalize_simplex(s) in self.simplices

    def __len__(self) -> int:
        return len(self.simplices)

    def __le__(self, other: "SimplicialComplex") -> bool:
        return self.simplices <= other.simplices

    def union(self, other: "SimplicialComplex") -> "SimplicialComplex":
        return SimplicialComplex(self.simplices | other.simplices)

    def intersection(self, other: "SimplicialComplex") -> "SimplicialComplex":
        return SimplicialComplex(self.simplices & other.simplices)

    def remove(self, W: Iterable[Simplex]) -> "SimplicialComplex":
        """Complex minus a set of simplices; raises unless the rest is closed."""
        return SimplicialComplex(self.simplices - frozenset(W))

    def open_star(self, v) -> frozenset:
        return frozenset(s for s in self.simplices if v in s)

    def closed_star(self, v) -> "SimplicialComplex":
        return SimplicialComplex.from_simplices(self.open_star(v))

    def f_vector(self) -> list[int]:
        return [len(self.simplices_of_dim(n)) for n in range(self.dimension + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * c for n, c in enumerate(self.f_vector()))

    def connected_components(self) -> list[list]:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.simplices_of_dim(1):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
        groups: dict = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        return list(groups.values())

    def induced_subcomplex(self, vertices: Iterable[Hashable]) -> "SimplicialComplex":
        vs = set(vertices)
        return SimplicialComplex(frozenset(s for s in self.simplices if set(s) <= vs))


@dataclass(frozen=True)
class SimplicialPair:
    total: SimplicialComplex
    sub: SimplicialComplex

    def __post_init__(self):
        extra = self.sub.simplices - self.total.simplices
        if extra:
            raise ComplexError("not-a-subcomplex", min(extra, key=_simplex_key))

    def relative_simplices(self, n: int) -> list[Simplex]:
        return [s for s in self.total.simplices_of_dim(n) if s not in self.sub.simplices]

    def le(self, other: "SimplicialPair") -> bool:
        return self.total <= other.total and self.sub <= other.sub

    def union(self, other: "SimplicialPair") -> "SimplicialPair":
        return SimplicialPair(self.total.union(other.total), self.sub.union(other.sub))

    def euler_characteristic(self) -> int:
        return self.total.euler_characteristic() - self.sub.euler_characteristic()


Space = Union[SimplicialComplex, SimplicialPair]


def as_pair(X: Space) -> SimplicialPair:
    if isinstance(X, SimplicialPair):
        return X
    return SimplicialPair(X, SimplicialComplex.empty())


@dataclass(frozen=True)
class SimplicialMap:
    """Vertex map between complexes (or pairs) sending simplices to simplices."""

    source: Space
    target: Space
    vertex_map: tuple  # sorted (vertex, image) items

    def __post_init__(self):
        X, Y = as_pair(self.source), as_pair(self.target)
        m = dict(self.vertex_map)
        for v in X.total.vertices:
            if v not in m:
                raise ComplexError("unmapped-vertex", v)
        for s in X.total.simplices:
            img = normalize_simplex(m[v] for v in s)
            if img not in Y.total.simplices:
                raise ComplexError("image-not-a-simplex", s)
            if s in X.sub.simplices and img not in Y.sub.simplices:
                raise ComplexError("sub-not-preserved", s)

    @classmethod
    def from_dict(cls, source: Space, target: Space, mapping: Mapping) -> "SimplicialMap":
        X = as_pair(source)
        items = tuple(sorted(((v, mapping[v]) for v in X.total.vertices if v in mapping), key=lambda kv: _label_key(kv[0])))
        missing = [v for v in X.total.vertices if v not in mapping]
        if missing:
            raise ComplexError("unmapped-vertex", missing[0])
        return cls(source, target, items)

    @classmethod
    def identity(cls, X: Space) -> "SimplicialMap":
        return cls.from_dict(X, X, {v: v for v in as_pair(X).total.vertices})

    @classmethod
    def inclusion(cls, X: Space, Y: Space) -> "SimplicialMap":
        return cls.from_dict(X, Y, {v: v for v in as_pair(X).total.vertices})

    @cached_property
    def mapping(self) -> dict:
        return dict(self.vertex_map)

    def __call__(self, v):
        return self.mapping[v]

    def image_of(self, K: SimplicialComplex) -> SimplicialComplex:
        m = self.mapping
        return SimplicialComplex(frozenset(normalize_simplex(m[v] for v in s) for s in K.simplices))

    def restrict(self, source: Space, target: Space) -> "SimplicialMap":
        return SimplicialMap.from_dict(source, target, self.mapping)

    def then(self, other: "SimplicialMap") -> "SimplicialMap":
        """``other o self``."""
        return SimplicialMap.from_dict(self.source, other.target, {v: other(self(v)) for v in self.mapping})


def contiguous(f: SimplicialMap, g: SimplicialMap) -> bool:
    """Every simplex has images under ``f`` and ``g`` spanning a common simplex."""
    X, Y = as_pair(f.source), as_pair(f.target)
    for s in X.total.simplices:
        span = normalize_simplex([f(v) for v in s] + [g(v) for v in s])
        if span not in Y.total.simplices:
            return False
        if s in X.sub.simplices and span not in Y.sub.simplices:
            return False
    return True


# -- chain level ------------------------------------------------------------------------


def parse_coeff(text: Union[str, int]) -> int:
    """``'z'`` -> 0, ``'z/4'`` -> 4; integers pass through."""
    if isinstance(text, int):
        m = text
    else:
        t = text.strip().lower()
        if t in ("z", "zz", "0"):
            m = 0
        elif t.startswith("z/"):
            m = int(t[2:])
        else:
            raise ValueError(f"unknown coefficient ring {text!r}")
    if m < 0 or m == 1:
        raise ValueError("coefficient modulus must be 0 (integers) or at least 2")
    return m


def coeff_name(m: int) -> str:
    return "Z" if m == 0 else f"Z/{m}"


def chain_group(k: int, coeff: int) -> FpAbGroup:
    if coeff == 0:
        return FpAbGroup.free(k)
    return FpAbGroup(k, IntMatrix.identity(k).scale(coeff))


def boundary_matrix(X: Space, n: int) -> IntMatrix:
    """Relative boundary ``C_n(X) -> C_n-1(X)`` in the sorted bases."""
    P = as_pair(X)
    cols = P.relative_simplices(n)
    rows = P.relative_simplices(n - 1) if n > 0 else []
    pos = {s: i for i, s in enumerate(rows)}
    out = [[0] * len(cols) for _ in rows]
    if n > 0:
        for j, s in enumerate(cols):
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                r = pos.get(face)
                if r is not None:
                    out[r][j] += -1 if i % 2 else 1
    return IntMatrix.from_rows(out, len(cols))


def chain_map_matrix(f: SimplicialMap, n: int) -> IntMatrix:
    """Matrix of ``f_#`` on relative n-chains."""
    X, Y = as_pair(f.source), as_pair(f.target)
    cols = X.relative_simplices(n)
    rows = Y.relative_simplices(n)
    pos = {s: i for i, s in enumerate(rows)}
    out = [[0] * len(cols) for _ in rows]
    m = f.mapping
    for j, s in enumerate(cols):
        img = [m[v] for v in s]
        if len(set(img)) < len(img):
            continue
        order = sorted(range(len(img)), key=lambda i: _label_key(img[i]))
        r = pos.get(tuple(img[i] for i in order))
        if r is None:
            continue
        out[r][j] += _perm_sign(order)
    return IntMatrix.from_rows(out, len(cols))


def _perm_sign(perm: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True, eq=False)
class HomologyData:
    """One (co)homology group with the data needed to push classes around.

    ``representatives`` has one column per generator of ``group``: a
    (co)cycle in the (co)chain basis representing it.
    """

    group: FpAbGroup
    chains: FpAbGroup
    cycles: GroupHom
    projection: GroupHom
    representatives: IntMatrix

    def classify(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Class of a (co)cycle given in (co)chain coordinates."""
        A = hstack(self.cycles.matrix, self.chains.relations)
        x = smith_normal_form(A).solve(tuple(vector))
        if x is None:
            raise ValueError("vector is not a cycle")
        return self.projection.matrix.apply(x[: self.cycles.source.n_gens])

    def classify_all(self, M: IntMatrix) -> IntMatrix:
        cols = [self.classify(M.col(j)) for j in range(M.cols)]
        n = self.group.n_gens
        return IntMatrix.from_columns(cols, rows=n) if cols else IntMatrix.zeros(n, 0)


def _homology_from(d_in: GroupHom, d_out: GroupHom) -> HomologyData:
    Z, incl = ab.kernel(d_out)
    boundaries = ab.lift(d_in, incl)
    assert boundaries is not None, "d o d != 0"
    Hraw, proj = ab.cokernel(boundaries)
    H, to_h, from_h = ab.simplify(Hraw)
    projection = GroupHom(Z, H, to_h.matrix @ proj.matrix, check=False)
    reps = incl.matrix @ from_h.matrix
    return HomologyData(H, d_out.source, incl, projection, reps)


@lru_cache(maxsize=4096)
def _homology_data(P: SimplicialPair, n: int, coeff: int, cohomology: bool) -> HomologyData:
    k_lo = len(P.relative_simplices(n - 1)) if n > 0 else 0
    k = len(P.relative_simplices(n))
    k_hi = len(P.relative_simplices(n + 1))
    C_lo, C, C_hi = chain_group(k_lo, coeff), chain_group(k, coeff), chain_group(k_hi, coeff)
    d_n = boundary_matrix(P, n)
    d_hi = boundary_matrix(P, n + 1)
    if not cohomology:
        return _homology_from(GroupHom(C_hi, C, d_hi, check=False), GroupHom(C, C_lo, d_n, check=False))
    return _homology_from(GroupHom(C_lo, C, d_n.T, check=False), GroupHom(C, C_hi, d_hi.T, check=False))


def homology_data(X: Space, n: int, coeff: int = 0, *, cohomology: bool = False) -> HomologyData:
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return _homology_data(as_pair(X), n, parse_coeff(coeff), cohomology)


def homology(X: Space, n: int, coeff: Union[int, str] = 0) -> FpAbGroup:
    """Simplicial homology ``H_n(X; coeff)`` in simplified presentation."""
    return homology_data(X, n, parse_coeff(coeff)).group


def cohomology(X: Space, n: int, coeff: Union[int, str] = 0) -> FpAbGroup:
    return homology_data(X, n, parse_coeff(coeff), cohomology=True).group


def induced_hom(f: SimplicialMap, n: int, coeff: Union[int, str] = 0, *, cohomology: bool = False) -> GroupHom:
    """``f_*: H_n(X) -> H_n(Y)``, or ``f^*: H^n(Y) -> H^n(X)`` with ``cohomology``."""
    m = parse_coeff(coeff)
    HX = homology_data(f.source, n, m, cohomology=cohomology)
    HY = homology_data(f.target, n, m, cohomology=cohomology)
    C = chain_map_matrix(f, n)
    if not cohomology:
        return GroupHom(HX.group, HY.group, HY.classify_all(C @ HX.representatives), check=False)
    return GroupHom(HY.group, HX.group, HX.classify_all(C.T @ HY.representatives), check=False)


def connecting_hom(pair: SimplicialPair, n: int, coeff: Union[int, str] = 0) -> GroupHom:
    """Boundary ``H_n(K, L) -> H_n-1(L)`` for ``n >= 1``."""
    if n < 1:
        raise ValueError("connecting homomorphism needs n >= 1")
    m = parse_coeff(coeff)
    K, L = pair.total, pair.sub
    Hrel = homology_data(pair, n, m)
    HL = homology_data(L, n - 1, m)
    rel = pair.relative_simplices(n)
    dK = boundary_matrix(K, n)
    all_n = K.simplices_of_dim(n)
    pos = {s: i for i, s in enumerate(all_n)}
    embed = IntMatrix.from_rows([[1 if pos[s] == i else 0 for s in rel] for i in range(len(all_n))], len(rel))
    faces = K.simplices_of_dim(n - 1)
    keep = [i for i, s in enumerate(faces) if s in L.simplices]
    restricted = (dK @ embed @ Hrel.representatives).select_rows(keep)
    return GroupHom(Hrel.group, HL.group, HL.classify_all(restricted), check=False)


def coboundary_hom(pair: SimplicialPair, n: int, coeff: Union[int, str] = 0) -> GroupHom:
    """Coboundary ``H^n(L) -> H^n+1(K, L)``."""
    m = parse_coeff(coeff)
    K, L = pair.total, pair.sub
    HL = homology_data(L, n, m, cohomology=True)
    Hrel = homology_data(pair, n + 1, m, cohomology=True)
    L_n = L.simplices_of_dim(n)
    K_n = K.simplices_of_dim(n)
    posL = {s: i for i, s in enumerate(L_n)}
    extend = IntMatrix.from_rows([[1 if posL.get(s) == j else 0 for j in range(len(L_n))] for s in K_n], len(L_n))
    delta = boundary_matrix(K, n + 1).T
    hi = K.simplices_of_dim(n + 1)
    keep = [i for i, s in enumerate(hi) if s not in L.simplices]
    cochains = (delta @ extend @ HL.representatives).select_rows(keep)
    return GroupHom(HL.group, Hrel.group, Hrel.classify_all(cochains), check=False)


def long_exact_sequence(
    pair: SimplicialPair, coeff: Union[int, str] = 0, max_degree: int = 3, *, cohomology: bool = False
) -> ExactSequence:
    """Long exact sequence of the pair truncated at ``max_degree``.

    Homology runs ``H_N+1(K,L) -> H_N(L) -> H_N(K) -> H_N(K,L) -> ... ->
    H_0(K,L) -> 0``; cohomology runs ``0 -> H^0(K,L) -> ... -> H^N(L) ->
    H^N+1(K,L)``.
    """
    m = parse_coeff(coeff)
    K, L = pair.total, pair.sub
    i = SimplicialMap.inclusion(L, K)
    j = SimplicialMap.inclusion(K, pair)
    groups, maps, labels = [], [], []
    if not cohomology:
        N = max_degree
        groups.append(homology(pair, N + 1, m))
        labels.append(f"H_{N + 1}(total,sub)")
        maps.append(connecting_hom(pair, N + 1, m))
        for n in range(N, -1, -1):
            groups += [homology(L, n, m), homology(K, n, m), homology(pair, n, m)]
            labels += [f"H_{n}(sub)", f"H_{n}(total)", f"H_{n}(total,sub)"]
            maps += [induced_hom(i, n, m), induced_hom(j, n, m)]
            if n > 0:
                maps.append(connecting_hom(pair, n, m))
        zero = FpAbGroup.trivial()
        maps.append(GroupHom.zero(groups[-1], zero))
        groups.append(zero)
        labels.append("0")
        return ExactSequence(tuple(groups), tuple(maps), tuple(labels))
    zero = FpAbGroup.trivial()
    groups.append(zero)
    labels.append("0")
    for n in range(0, max_degree + 1):
        rel, tot, sub = cohomology_of(pair, n, m), cohomology_of(K, n, m), cohomology_of(L, n, m)
        if n == 0:
            maps.append(GroupHom.zero(zero, rel))
        groups += [rel, tot, sub]
        labels += [f"H^{n}(total,sub)", f"H^{n}(total)", f"H^{n}(sub)"]
        maps += [induced_hom(j, n, m, cohomology=True), induced_hom(i, n, m, cohomology=True)]
        maps.append(coboundary_hom(pair, n, m))
    groups.append(cohomology_of(pair, max_degree + 1, m))
    labels.append(f"H^{max_degree + 1}(total,sub)")
    return ExactSequence(tuple(groups), tuple(maps), tuple(labels))


def cohomology_of(X: Space, n: int, m: int) -> FpAbGroup:
    return homology_data(X, n, m, cohomology=True).group


# -- excision -------------------------------------------------------------------


def open_star_of_vertices(K: SimplicialComplex, vertices: Iterable[Hashable]) -> frozenset:
    out = set()
    for v in vertices:
        out |= K.open_star(v)
    return frozenset(out)


def excision_witness(pair: SimplicialPair, W: Iterable[Simplex]) -> Optional[tuple[str, Simplex]]:
    """Why ``W`` may not be excised from ``pair``, or None.

    ``W`` must be a union of open stars of vertices whose closed stars lie
    in the subcomplex.
    """
    W = frozenset(normalize_simplex(s) for s in W)
    K, L = pair.total, pair.sub
    for s in sorted(W, key=_simplex_key):
        if s not in K.simplices:
            raise ComplexError("not-in-total", s)
    centers = [v for v in K.vertices if K.open_star(v) <= W]
    covered = open_star_of_vertices(K, centers)
    for s in sorted(W - covered, key=_simplex_key):
        return ("not-open", s)
    for v in centers:
        for s in K.closed_star(v).sorted_simplices():
            if s not in L.simplices:
                return ("closure-escapes-sub", s)
    return None


def excise(pair: SimplicialPair, W: Iterable[Simplex]) -> tuple[SimplicialPair, SimplicialMap]:
    """Remove an admissible open set ``W``; returns the pair and its inclusion."""
    W = frozenset(normalize_simplex(s) for s in W)
    bad = excision_witness(pair, W)
    if bad is not None:
        raise ComplexError(bad[0], bad[1])
    small = SimplicialPair(pair.total.remove(W), pair.sub.remove(W))
    return small, SimplicialMap.inclusion(small, pair)
