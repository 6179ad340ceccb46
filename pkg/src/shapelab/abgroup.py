"""Finitely presented abelian groups and homomorphisms between them.

A group is ``Z^n / L`` where ``L`` is the column lattice of an ``n x m``
relation matrix.  A homomorphism ``G -> H`` is an integer matrix with one
column per generator of ``G`` written in the generators of ``H``.  Equality
of elements and of homomorphisms is always tested modulo the target
relations, never entrywise.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from functools import cached_property
from typing import Optional, Sequence

from .exactla import (
    IntMatrix,
    SmithDecomposition,
    block_diag,
    hstack,
    smith_normal_form,
    vstack,
)


class GroupError(ValueError):
    """Raised for rejected inputs (dimension mismatch, ill-defined maps)."""


class NotWellDefined(GroupError):
    def __init__(self, relation_index: int):
        super().__init__(f"relation {relation_index} of the source does not map into the target relations")
        self.relation_index = relation_index


@dataclass(frozen=True, eq=True)
class FpAbGroup:
    """Abelian group with ``n_gens`` generators and relations as columns."""

    n_gens: int
    relations: IntMatrix

    def __post_init__(self):
        if self.relations.rows != self.n_gens:
            raise GroupError(
                f"relation matrix has {self.relations.rows} rows for {self.n_gens} generators"
            )

    @classmethod
    def free(cls, rank: int) -> "FpAbGroup":
        return cls(rank, IntMatrix.zeros(rank, 0))

    @classmethod
    def trivial(cls) -> "FpAbGroup":
        return cls.free(0)

    @classmethod
    def cyclic(cls, order: int) -> "FpAbGroup":
        """``Z/order``; order 0 gives Z."""
        return cls(1, IntMatrix.from_rows([[order]]) if order else IntMatrix.zeros(1, 0))

    @classmethod
    def from_invariants(cls, free_rank: int, torsion: Sequence[int] = ()) -> "FpAbGroup":
        torsion = [t for t in torsion if t != 1]
        n = len(torsion) + free_rank
        return cls(n, IntMatrix.diagonal(list(torsion), n, len(torsion)))

    @classmethod
    def presented(cls, n_gens: int, relations: Sequence[Sequence[int]]) -> "FpAbGroup":
        """Build from a list of relation vectors (one per relation)."""
        if not relations:
            return cls.free(n_gens)
        return cls(n_gens, IntMatrix.from_columns(relations, rows=n_gens))

    @cached_property
    def _snf(self) -> SmithDecomposition:
        return smith_normal_form(self.relations)

    def contains(self, vector: Sequence[int]) -> bool:
        """True iff ``vector`` (in generator coordinates) is zero in the group."""
        if len(vector) != self.n_gens:
            raise GroupError("element has the wrong length")
        if not self.relations.cols:
            return not any(vector)
        return self._snf.contains(vector)

    def canonical_form(self) -> tuple[int, tuple[int, ...]]:
        d = self._snf.invariant_factors
        return self.n_gens - len(d), tuple(x for x in d if x != 1)

    @property
    def free_rank(self) -> int:
        return self.canonical_form()[0]

    @property
    def torsion(self) -> tuple[int, ...]:
        return self.canonical_form()[1]

    def is_trivial(self) -> bool:
        return self.canonical_form() == (0, ())

    def isomorphic(self, other: "FpAbGroup") -> bool:
        return self.canonical_form() == other.canonical_form()

    def order(self) -> Optional[int]:
        r, t = self.canonical_form()
        if r:
            return None
        out = 1
        for x in t:
            out *= x
        return out

    def __str__(self):
        return describe(*self.canonical_form())


def describe(free_rank: int, torsion: Sequence[int]) -> str:
    parts = []
    if free_rank == 1:
        parts.append("Z")
    elif free_rank > 1:
        parts.append(f"Z^{free_rank}")
    parts.extend(f"Z/{d}" for d in torsion)
    return " + ".join(parts) if parts else "0"


def canonical_form(G: FpAbGroup) -> tuple[int, tuple[int, ...]]:
    return G.canonical_form()


@dataclass(frozen=True, eq=False)
class GroupHom:
    """Homomorphism given on generators; well-definedness checked on creation.

    Pass ``check=False`` to build a candidate without the check, e.g. to ask
    :func:`hom_well_defined` about it.
    """

    source: FpAbGroup
    target: FpAbGroup
    matrix: IntMatrix
    check: InitVar[bool] = True

    def __post_init__(self, check):
        if self.matrix.shape != (self.target.n_gens, self.source.n_gens):
            raise GroupError(
                f"matrix shape {self.matrix.shape} does not match "
                f"{self.target.n_gens} x {self.source.n_gens}"
            )
        if check:
            bad = _first_bad_relation(self)
            if bad is not None:
                raise NotWellDefined(bad)

    @classmethod
    def identity(cls, G: FpAbGroup) -> "GroupHom":
        return cls(G, G, IntMatrix.identity(G.n_gens), check=False)

    @classmethod
    def zero(cls, G: FpAbGroup, H: FpAbGroup) -> "GroupHom":
        return cls(G, H, IntMatrix.zeros(H.n_gens, G.n_gens), check=False)

    @classmethod
    def scalar(cls, G: FpAbGroup, k: int) -> "GroupHom":
        return cls(G, G, IntMatrix.identity(G.n_gens).scale(k), check=False)

    def __call__(self, element: Sequence[int]) -> tuple[int, ...]:
        return self.matrix.apply(element)

    def __matmul__(self, other: "GroupHom") -> "GroupHom":
        return compose(self, other)

    def __repr__(self):
        return f"GroupHom({self.source} -> {self.target}, {self.matrix.to_rows()})"


def _first_bad_relation(h: GroupHom) -> Optional[int]:
    rel = h.source.relations
    for j in range(rel.cols):
        if not h.target.contains(h.matrix.apply(rel.col(j))):
            return j
    return None


def hom_well_defined(h: GroupHom) -> bool:
    return _first_bad_relation(h) is None


def hom_equal(h1: GroupHom, h2: GroupHom) -> bool:
    if h1.source != h2.source or h1.target != h2.target:
        raise GroupError("hom_equal needs a common source and target")
    if h1.matrix == h2.matrix:
        return True
    diff = h1.matrix - h2.matrix
    return all(h1.target.contains(diff.col(j)) for j in range(diff.cols))


def is_zero(h: GroupHom) -> bool:
    return all(h.target.contains(h.matrix.col(j)) for j in range(h.matrix.cols))


def compose(g: GroupHom, f: GroupHom) -> GroupHom:
    """``g o f`` in function-application order."""
    if f.target != g.source:
        raise GroupError("cannot compose: target of the first map is not the source of the second")
    return GroupHom(f.source, g.target, g.matrix @ f.matrix, check=False)


def add(h1: GroupHom, h2: GroupHom) -> GroupHom:
    if h1.source != h2.source or h1.target != h2.target:
        raise GroupError("sum of homomorphisms with different domains")
    return GroupHom(h1.source, h1.target, h1.matrix + h2.matrix, check=False)


def negate(h: GroupHom) -> GroupHom:
    return GroupHom(h.source, h.target, -h.matrix, check=False)


# -- constructions ------------------------------------------------------------


def _preimage_lattice(h: GroupHom) -> IntMatrix:
    """Spanning set (columns) of ``{x : h(x) in relations(target)}``."""
    M, R = h.matrix, h.target.relations
    n = h.source.n_gens
    if not R.cols:
        return smith_normal_form(M).kernel()
    K = smith_normal_form(hstack(M, R)).kernel()
    return K.select_rows(range(n))


def _express(basis: IntMatrix, vectors: IntMatrix) -> IntMatrix:
    """Coordinates of each column of ``vectors`` in the independent ``basis``."""
    snf = smith_normal_form(basis)
    cols = []
    for j in range(vectors.cols):
        x = snf.solve(vectors.col(j))
        if x is None:
            raise GroupError("vector outside the lattice")
        cols.append(x)
    return IntMatrix.from_columns(cols, rows=basis.cols) if cols else IntMatrix.zeros(basis.cols, 0)


def kernel(h: GroupHom) -> tuple[FpAbGroup, GroupHom]:
    """Kernel subgroup with its inclusion into ``h.source``."""
    n = h.source.n_gens
    span = _preimage_lattice(h)
    basis = smith_normal_form(span).image_basis() if span.cols else IntMatrix.zeros(n, 0)
    rels = _express(basis, h.source.relations)
    K = FpAbGroup(basis.cols, rels)
    return K, GroupHom(K, h.source, basis, check=False)


def image(h: GroupHom) -> tuple[FpAbGroup, GroupHom]:
    """Image subgroup with its inclusion into ``h.target``."""
    rels = _preimage_lattice(h)
    I = FpAbGroup(h.source.n_gens, rels)
    return I, GroupHom(I, h.target, h.matrix, check=False)


def cokernel(h: GroupHom) -> tuple[FpAbGroup, GroupHom]:
    T = h.target
    C = FpAbGroup(T.n_gens, hstack(T.relations, h.matrix))
    return C, GroupHom(T, C, IntMatrix.identity(T.n_gens), check=False)


def direct_sum(*groups: FpAbGroup) -> tuple[FpAbGroup, list[GroupHom], list[GroupHom]]:
    """Direct sum with its injections and projections."""
    S = FpAbGroup(
        sum(G.n_gens for G in groups),
        block_diag(*(G.relations for G in groups)) if groups else IntMatrix.zeros(0, 0),
    )
    injections, projections = [], []
    offset = 0
    for G in groups:
        rows = [[1 if i == offset + j else 0 for j in range(G.n_gens)] for i in range(S.n_gens)]
        inj = IntMatrix.from_rows(rows, G.n_gens)
        injections.append(GroupHom(G, S, inj, check=False))
        projections.append(GroupHom(S, G, inj.T, check=False))
        offset += G.n_gens
    return S, injections, projections


def hom_from_blocks(source: FpAbGroup, target: FpAbGroup, blocks: Sequence[IntMatrix], *, stacked: str) -> GroupHom:
    """Assemble ``[h_1 | h_2 | ...]`` (``stacked='h'``) or its vertical analog."""
    M = hstack(*blocks, rows=target.n_gens) if stacked == "h" else vstack(*blocks, cols=source.n_gens)
    return GroupHom(source, target, M, check=False)


def lift(h: GroupHom, through: GroupHom) -> Optional[GroupHom]:
    """Find ``g`` with ``through o g == h``; None if ``h`` does not factor.

    ``through`` is usually a monomorphism, in which case ``g`` is unique.
    """
    if h.target != through.target:
        raise GroupError("lift needs maps into a common target")
    A = hstack(through.matrix, through.target.relations)
    snf = smith_normal_form(A)
    k = through.source.n_gens
    cols = []
    for j in range(h.matrix.cols):
        x = snf.solve(h.matrix.col(j))
        if x is None:
            return None
        cols.append(x[:k])
    M = IntMatrix.from_columns(cols, rows=k) if cols else IntMatrix.zeros(k, 0)
    return GroupHom(h.source, through.source, M)


def in_subgroup(element: Sequence[int], inclusion: GroupHom) -> bool:
    """Membership of an element of ``inclusion.target`` in the image of ``inclusion``."""
    A = hstack(inclusion.matrix, inclusion.target.relations)
    return smith_normal_form(A).solve(tuple(element)) is not None


def is_injective(h: GroupHom) -> bool:
    return kernel(h)[0].is_trivial()


def is_surjective(h: GroupHom) -> bool:
    return cokernel(h)[0].is_trivial()


def is_isomorphism(h: GroupHom) -> bool:
    return is_surjective(h) and is_injective(h)


def inverse(h: GroupHom) -> GroupHom:
    if not is_isomorphism(h):
        raise GroupError("homomorphism is not invertible")
    g = lift(GroupHom.identity(h.target), h)
    assert g is not None
    return g


def simplify(G: FpAbGroup) -> tuple[FpAbGroup, GroupHom, GroupHom]:
    """Diagonal presentation ``Z^r + Z/d1 + ...`` with mutually inverse isos.

    Returns ``(S, to_s, from_s)`` with ``to_s: G -> S``, ``from_s: S -> G``.
    Generators of ``S`` are ordered torsion first (d1 | d2 | ...), then free.
    """
    snf = G._snf
    d = snf.invariant_factors
    keep = [i for i in range(G.n_gens) if i >= len(d) or d[i] != 1]
    torsion = [d[i] for i in keep if i < len(d)]
    S = FpAbGroup.from_invariants(len(keep) - len(torsion), torsion)
    to_s = GroupHom(G, S, snf.U.select_rows(keep), check=False)
    from_s = GroupHom(S, G, snf.U_inv.select_cols(keep), check=False)
    return S, to_s, from_s


def reduce_element(G: FpAbGroup, element: Sequence[int]) -> tuple[int, ...]:
    """Normal-form coordinates of an element in the simplified presentation."""
    S, to_s, _ = simplify(G)
    v = list(to_s(element))
    t = len(S.torsion)
    for i in range(t):
        v[i] %= S.torsion[i]
    return tuple(v)


# -- exactness ------------------------------------------------------------------


@dataclass(frozen=True)
class ExactnessDefect:
    """Why a composable pair fails to be exact.

    ``kind`` is ``"composite-nonzero"`` (image not inside kernel; ``element``
    is a source generator of ``f`` whose image ``g`` does not kill) or
    ``"kernel-not-in-image"`` (``element`` is a kernel element of ``g``, in
    the middle group's coordinates, that ``f`` does not hit).
    """

    kind: str
    element: tuple[int, ...]
    generator: Optional[int] = None


def exactness_defect(f: GroupHom, g: GroupHom) -> Optional[ExactnessDefect]:
    if f.target != g.source:
        raise GroupError("is_exact_at needs target(f) == source(g)")
    gf = g.matrix @ f.matrix
    for j in range(gf.cols):
        if not g.target.contains(gf.col(j)):
            return ExactnessDefect("composite-nonzero", f.matrix.col(j), j)
    K, incl = kernel(g)
    A = hstack(f.matrix, f.target.relations)
    snf = smith_normal_form(A)
    for j in range(incl.matrix.cols):
        v = incl.matrix.col(j)
        if snf.solve(v) is None:
            return ExactnessDefect("kernel-not-in-image", v, j)
    return None


def is_exact_at(f: GroupHom, g: GroupHom) -> bool:
    """True iff ``image(f) == kernel(g)`` inside ``f.target``."""
    return exactness_defect(f, g) is None



@dataclass(frozen=True)
class ExactSequence:
    """Finite sequence ``G_0 -> G_1 -> ... -> G_k`` with ``maps[i]: G_i -> G_i+1``."""

    groups: tuple
    maps: tuple
    labels: tuple = ()

    def __post_init__(self):
        if len(self.maps) != len(self.groups) - 1:
            raise GroupError("a sequence of k+1 groups needs k maps")
        for i, h in enumerate(self.maps):
            if h.source != self.groups[i] or h.target != self.groups[i + 1]:
                raise GroupError(f"map {i} does not connect groups {i} and {i + 1}")

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def audit(self) -> list[tuple[int, Optional[ExactnessDefect]]]:
        """Exactness check at every interior position."""
        return [(i, exactness_defect(self.maps[i - 1], self.maps[i])) for i in range(1, len(self.groups) - 1)]

    def first_failure(self) -> Optional[tuple[int, ExactnessDefect]]:
        for i, d in self.audit():
            if d is not None:
                return i, d
        return None

    def is_exact(self) -> bool:
        return self.first_failure() is None
