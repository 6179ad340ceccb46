"""Finite directed preorders, order-preserving maps and cofinal subsets.

Elements are the integers ``0..size-1``.  Equivalent but distinct elements
(``a <= b`` and ``b <= a``) are allowed: the index sets are preorders.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional, Sequence


class PosetError(ValueError):
    """A preorder axiom failed; ``kind`` names it and ``witness`` holds elements."""

    def __init__(self, kind: str, witness: tuple, message: str = ""):
        super().__init__(message or f"{kind}: witness {witness}")
        self.kind = kind
        self.witness = witness


@dataclass(frozen=True)
class DirectedPoset:
    size: int
    leq: tuple[tuple[bool, ...], ...]

    def le(self, a: int, b: int) -> bool:
        return self.leq[a][b]

    def elements(self) -> range:
        return range(self.size)

    def comparable_pairs(self) -> list[tuple[int, int]]:
        """All ``(a, b)`` with ``a <= b``, including ``a == b``."""
        return [(a, b) for a in range(self.size) for b in range(self.size) if self.leq[a][b]]

    def upper_bounds(self, *elems: int) -> list[int]:
        return [c for c in range(self.size) if all(self.leq[e][c] for e in elems)]

    def strictly_below(self, a: int) -> list[int]:
        return [b for b in range(self.size) if self.leq[b][a] and not self.leq[a][b]]

    def equivalent(self, a: int, b: int) -> bool:
        return self.leq[a][b] and self.leq[b][a]

    def linear_extension(self) -> list[int]:
        """Elements sorted so that ``a < b`` strictly implies ``a`` comes first."""
        return sorted(range(self.size), key=lambda a: (sum(self.leq[b][a] for b in range(self.size)), a))

    @classmethod
    def chain(cls, n: int) -> "DirectedPoset":
        return validate_directed([[i <= j for j in range(n)] for i in range(n)])

    @classmethod
    def from_relation(cls, size: int, pairs: Iterable[tuple[int, int]]) -> "DirectedPoset":
        """Reflexive-transitive closure of ``pairs``, then validated."""
        leq = [[i == j for j in range(size)] for i in range(size)]
        for a, b in pairs:
            if not (0 <= a < size and 0 <= b < size):
                raise PosetError("out-of-range", (a, b))
            leq[a][b] = True
        for k in range(size):
            for i in range(size):
                if leq[i][k]:
                    row_k = leq[k]
                    row_i = leq[i]
                    for j in range(size):
                        if row_k[j]:
                            row_i[j] = True
        return validate_directed(leq)

    @classmethod
    def from_subsets(cls, sets: Sequence[frozenset]) -> "DirectedPoset":
        """Inclusion order on a family of sets."""
        return validate_directed([[a <= b for b in sets] for a in sets])


def validate_directed(leq: Sequence[Sequence[bool]]) -> DirectedPoset:
    """Check reflexivity, transitivity and directedness, raising with a witness."""
    n = len(leq)
    rel = tuple(tuple(bool(x) for x in row) for row in leq)
    if any(len(row) != n for row in rel):
        raise PosetError("not-square", (n,), "order relation must be a square matrix")
    for a in range(n):
        if not rel[a][a]:
            raise PosetError("not-reflexive", (a,))
    for a, b, c in product(range(n), repeat=3):
        if rel[a][b] and rel[b][c] and not rel[a][c]:
            raise PosetError("not-transitive", (a, b, c))
    for a in range(n):
        for b in range(a + 1, n):
            if not any(rel[a][c] and rel[b][c] for c in range(n)):
                raise PosetError("not-directed", (a, b))
    return DirectedPoset(n, rel)


def is_cofinal(sub: Iterable[int], P: DirectedPoset) -> bool:
    sub = list(sub)
    return all(any(P.le(a, s) for s in sub) for a in P.elements())


def cofinality_witness(sub: Iterable[int], P: DirectedPoset) -> Optional[int]:
    """An element of ``P`` with nothing of ``sub`` above it, or None."""
    sub = list(sub)
    for a in P.elements():
        if not any(P.le(a, s) for s in sub):
            return a
    return None


def find_top(P: DirectedPoset) -> int:
    """Smallest-index element above every element."""
    for t in P.elements():
        if all(P.le(a, t) for a in P.elements()):
            return t
    raise PosetError("empty", (), "an empty index set has no top element")


def restrict(P: DirectedPoset, sub: Sequence[int]) -> DirectedPoset:
    """Restriction of the order to ``sub``; element ``i`` is ``sub[i]``."""
    if len(set(sub)) != len(sub):
        raise PosetError("duplicate-element", tuple(sub))
    return validate_directed([[P.le(a, b) for b in sub] for a in sub])


@dataclass(frozen=True)
class OrderMap:
    source: DirectedPoset
    target: DirectedPoset
    mapping: tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != self.source.size:
            raise PosetError("wrong-length", (len(self.mapping),), "order map must assign every element")
        for x in self.mapping:
            if not 0 <= x < self.target.size:
                raise PosetError("out-of-range", (x,))
        for a, b in self.source.comparable_pairs():
            if not self.target.le(self.mapping[a], self.mapping[b]):
                raise PosetError("not-order-preserving", (a, b))

    def __call__(self, a: int) -> int:
        return self.mapping[a]

    @classmethod
    def identity(cls, P: DirectedPoset) -> "OrderMap":
        return cls(P, P, tuple(P.elements()))

    def then(self, other: "OrderMap") -> "OrderMap":
        """``other o self``."""
        if self.target != other.source:
            raise PosetError("not-composable", ())
        return OrderMap(self.source, other.target, tuple(other.mapping[x] for x in self.mapping))

    def is_order_isomorphism(self) -> bool:
        if self.source.size != self.target.size or len(set(self.mapping)) != self.source.size:
            return False
        m = self.mapping
        return all(
            self.source.le(a, b) == self.target.le(m[a], m[b])
            for a in self.source.elements()
            for b in self.source.elements()
        )

    def inverse(self) -> "OrderMap":
        if not self.is_order_isomorphism():
            raise PosetError("not-an-order-iso", ())
        inv = [0] * self.source.size
        for a, b in enumerate(self.mapping):
            inv[b] = a
        return OrderMap(self.target, self.source, tuple(inv))

    def image(self) -> list[int]:
        return sorted(set(self.mapping))
