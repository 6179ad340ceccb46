"""Randomized property checks shared by the ``audit`` command."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator

from . import abgroup as ab
from .exactla import IntMatrix, smith_normal_form
from .generators import random_composable_pair, random_equivalent, random_model, random_morphism, random_pair, random_system
from .posets import find_top
from .shapefunctors import compare_shape_cohomology, compare_shape_homology
from .simplicial import long_exact_sequence
from .systems import (
    DIRECT,
    INVERSE,
    compose_morphisms,
    identity_morphism,
    limit_of,
    limit_of_morphism,
    morphisms_equivalent,
    restrict_to_cofinal,
    top_element_oracle,
    validate_morphism,
    validate_system,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    witness: object = None


def snf_identity_holds(A: IntMatrix) -> bool:
    snf = smith_normal_form(A)
    D = snf.D
    if snf.U @ A @ snf.V != D:
        return False
    diag = [D[i, i] for i in range(min(D.rows, D.cols))]
    if any(D[i, j] for i in range(D.rows) for j in range(D.cols) if i != j):
        return False
    if any(d < 0 for d in diag):
        return False
    nz = [d for d in diag if d]
    if diag[: len(nz)] != nz or any(b % a for a, b in zip(nz, nz[1:])):
        return False
    return abs(snf.U.determinant()) == 1 and abs(snf.V.determinant()) == 1


def random_matrix(rng: random.Random, max_dim: int = 6, bound: int = 9) -> IntMatrix:
    r, c = rng.randint(1, max_dim), rng.randint(1, max_dim)
    return IntMatrix.from_rows([[rng.randint(-bound, bound) for _ in range(c)] for _ in range(r)], c)


def _count(name: str, trials: int, body: Callable[[int], bool]) -> CheckResult:
    for t in range(trials):
        if not body(t):
            return CheckResult(name, False, f"failed on trial {t} of {trials}", t)
    return CheckResult(name, True, f"{trials} trials")


def property_suite(seed: int = 0, count: int = 20, max_degree: int = 2) -> Iterator[CheckResult]:
    rng = random.Random(seed)

    yield _count("smith normal form identities", count, lambda _: snf_identity_holds(random_matrix(rng)))

    def cofinal(variance):
        def body(_):
            S = validate_system(random_system(rng, variance))
            group_ok, proj_ok = top_element_oracle(S)
            _, inj = restrict_to_cofinal(S, [find_top(S.index)])
            return group_ok and proj_ok and ab.is_isomorphism(limit_of_morphism(inj))

        return body

    yield _count("cofinality oracle (direct)", count, cofinal(DIRECT))
    yield _count("cofinality oracle (inverse)", count, cofinal(INVERSE))

    def functor(variance):
        def body(_):
            F, G = random_composable_pair(rng, variance)
            validate_morphism(F)
            validate_morphism(G)
            LX, LY, LZ = limit_of(F.source), limit_of(F.target), limit_of(G.target)
            ident = limit_of_morphism(identity_morphism(F.source), LX, LX)
            if not ab.hom_equal(ident, ab.GroupHom.identity(LX.group)):
                return False
            f_hat, g_hat = limit_of_morphism(F, LX, LY), limit_of_morphism(G, LY, LZ)
            composite = ab.compose(g_hat, f_hat)
            if not ab.hom_equal(limit_of_morphism(compose_morphisms(G, F), LX, LZ), composite):
                return False
            F2 = random_equivalent(rng, F)
            return bool(morphisms_equivalent(F, F2)) and ab.hom_equal(f_hat, limit_of_morphism(F2, LX, LY))

        return body

    yield _count("functor laws (direct)", count, functor(DIRECT))
    yield _count("functor laws (inverse)", count, functor(INVERSE))

    def relation(_):
        F = random_morphism(rng, DIRECT).morphism
        F1 = random_equivalent(rng, F)
        F2 = random_equivalent(rng, F1)
        return (
            bool(morphisms_equivalent(F, F))
            and bool(morphisms_equivalent(F, F1)) == bool(morphisms_equivalent(F1, F))
            and bool(morphisms_equivalent(F, F2))
        )

    yield _count("equivalence relation", count, relation)

    def shape(_):
        M = random_model(rng)
        return all(
            compare_shape_homology(M, n).is_isomorphism and compare_shape_cohomology(M, n).is_isomorphism
            for n in range(max_degree + 1)
        )

    yield _count("shape (co)homology matches the total space", max(1, count // 2), shape)

    def exact(_):
        P = random_pair(rng)
        return all(
            long_exact_sequence(P, m, max_degree, cohomology=c).is_exact() for m in (0, 4) for c in (False, True)
        )

    yield _count("long exact sequences", max(1, count // 2), exact)
