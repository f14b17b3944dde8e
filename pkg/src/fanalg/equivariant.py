"""Base change of the fan algebra along a torus quotient.

A closed subgroup of the torus is presented by the induced map Q of
cocharacter lattices, either directly or through the characters cutting the
subgroup out.  The Smith form of Q supplies the diagonal presentation: in
suitable coordinates the quotient map raises the i-th coordinate to the
power d_i, discrete factors contributing roots of monodromy and connected
factors killing it.

The base-changed algebra is kept abstract: a free module on the basis
elements f(sigma, tau) = (forced divisor) E(sigma, tau) with structure
constants over the quotient Laurent ring, because taking the quotient can
kill matrix entries without killing the element itself.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from fanalg.algebra import matrix_unit, required_divisor, required_rays
from fanalg.diagram import DiagramModule, axiom_report, validate
from fanalg.fan import Cone, Fan, cone_key
from fanalg.lattice import IntMatrix, Vec, snf
from fanalg.laurent import LaurentPoly, binomial, monomial_map
from fanalg.linalg import QMat
from fanalg.report import Report


@dataclass(frozen=True)
class QuotientData:
    """Full-row-rank integer matrix presenting the quotient of cocharacter
    lattices, with its Smith data U @ Q @ V = D and the invariants d_i."""

    q: IntMatrix
    d: tuple[int, ...]
    row_transform: IntMatrix
    col_transform: IntMatrix

    @property
    def source_rank(self) -> int:
        return self.q.cols

    @property
    def target_rank(self) -> int:
        return self.q.rows


def quotient_presentation(
    q: IntMatrix | Sequence[Sequence[int]] | None = None,
    characters: Sequence[Sequence[int]] | None = None,
    rank: int | None = None,
) -> QuotientData:
    """Build QuotientData from a quotient matrix or from cutting characters.

    The lattice of characters vanishing on the subgroup is the row lattice of
    the character matrix; its Hermite-style basis, read off the Smith form,
    gives the rows of Q.
    """
    if (q is None) == (characters is None):
        raise ValueError("provide exactly one of a quotient matrix or characters")
    if characters is not None:
        chars = [tuple(int(x) for x in row) for row in characters]
        if chars:
            rank = len(chars[0])
        if rank is None:
            raise ValueError("rank required when no characters are given")
        if any(len(c) != rank for c in chars):
            raise ValueError("mixed character lengths")
        cmat = IntMatrix(chars, shape=(len(chars), rank))
        u, dmat, v = snf(cmat)
        vinv = v.inverse()
        rows = []
        for i in range(min(cmat.rows, cmat.cols)):
            di = dmat[i, i]
            if di == 0:
                break
            rows.append(tuple(di * x for x in vinv.entries[i]))
        q = IntMatrix(rows, shape=(len(rows), rank))
    elif not isinstance(q, IntMatrix):
        rows = [tuple(int(x) for x in row) for row in q]
        if rows:
            rank = len(rows[0])
        if rank is None:
            raise ValueError("rank required for an empty matrix")
        q = IntMatrix(rows, shape=(len(rows), rank))

    u, dmat, v = snf(q)
    d = tuple(dmat[i, i] for i in range(min(q.rows, q.cols)))
    if len(d) < q.rows or any(x == 0 for x in d):
        raise ValueError("rank-deficient Q: the quotient map must be onto a torus")
    return QuotientData(q, d, u, v)


def structure_rays(sigma: Cone, tau: Cone, rho: Cone) -> tuple[int, ...]:
    """Rays whose binomials survive in the product f(sigma,tau) f(tau,rho):
    the divisor sets of the factors minus the divisor set of the target."""
    left = set(sigma) - set(tau)
    right = set(tau) - set(rho)
    target = set(sigma) - set(rho)
    return tuple(sorted((left | right) - target))


@dataclass(frozen=True)
class EqStructure:
    """Structure constants of the base-changed algebra on the basis f(sigma, tau)."""

    fan: Fan
    quotient: QuotientData
    table: Mapping[tuple[Cone, Cone, Cone], LaurentPoly]

    def constant(self, sigma: Cone, tau: Cone, rho: Cone) -> LaurentPoly:
        return self.table[(tuple(sorted(sigma)), tuple(sorted(tau)), tuple(sorted(rho)))]

    def multiply(
        self,
        x: Mapping[tuple[Cone, Cone], LaurentPoly],
        y: Mapping[tuple[Cone, Cone], LaurentPoly],
    ) -> dict[tuple[Cone, Cone], LaurentPoly]:
        """Product of elements written in the f basis with quotient-ring coefficients."""
        nt = self.quotient.target_rank
        out: dict[tuple[Cone, Cone], LaurentPoly] = {}
        for (sigma, tau), c1 in x.items():
            for (tau2, rho), c2 in y.items():
                if tau != tau2:
                    continue
                key = (sigma, rho)
                acc = out.get(key, LaurentPoly.zero(nt)) + c1 * c2 * self.constant(sigma, tau, rho)
                if acc.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = acc
        return out

    def unit_element(self) -> dict[tuple[Cone, Cone], LaurentPoly]:
        one = LaurentPoly.one(self.quotient.target_rank)
        return {(c, c): one for c in self.fan.cones}


def ag_structure(fan: Fan, quotient: QuotientData, check: bool = True, samples: int = 25) -> EqStructure:
    """Structure-constant table c(sigma,tau,rho) = image of the surviving
    binomial product under the quotient monomial map."""
    if quotient.source_rank != fan.rank:
        raise ValueError("quotient matrix does not act on the fan lattice")
    q = quotient.q
    table = {}
    cones = fan.cone_list()
    for sigma in cones:
        for tau in cones:
            for rho in cones:
                c = LaurentPoly.one(fan.rank)
                for i in structure_rays(sigma, tau, rho):
                    c = c * binomial(fan.rays[i])
                table[(sigma, tau, rho)] = monomial_map(c, q)
    out = EqStructure(fan, quotient, table)
    if check:
        rep = associativity_report(out, samples=samples)
        if not rep.ok:
            raise ArithmeticError("structure constants are not associative: " + rep.lines()[0])
    return out


def associativity_report(s: EqStructure, samples: int | None = None, seed: int = 0) -> Report:
    """Check (f1 f2) f3 = f1 (f2 f3) on basis 4-tuples, exhaustively for
    small fans or on a seeded sample."""
    rep = Report()
    cones = s.fan.cone_list()
    quads = [(a, b, c, d) for a in cones for b in cones for c in cones for d in cones]
    if samples is not None and len(quads) > samples:
        rng = random.Random(seed)
        quads = [quads[rng.randrange(len(quads))] for _ in range(samples)]
    for a, b, c, d in quads:
        left = s.constant(a, b, c) * s.constant(a, c, d)
        right = s.constant(b, c, d) * s.constant(a, b, d)
        if left != right:
            rep.add(
                "associativity",
                f"({cone_key(a)})({cone_key(b)})({cone_key(c)})({cone_key(d)})",
                f"(f f) f gives {left}, f (f f) gives {right}",
            )
    return rep


def structure_against_algebra(fan: Fan, sigma: Cone, tau: Cone, rho: Cone) -> LaurentPoly:
    """Independent computation of one structure constant by multiplying the
    basis elements inside the plain algebra and dividing off the target basis
    polynomial.  Used to cross-check structure_rays."""
    from fanalg.laurent import divide_by_product

    left = matrix_unit(fan, sigma, tau, required_divisor(fan, sigma, tau))
    right = matrix_unit(fan, tau, rho, required_divisor(fan, tau, rho))
    prod = left * right
    poly = prod.entry(sigma, rho)
    rays = [fan.rays[i] for i in required_rays(sigma, rho)]
    out = divide_by_product(poly, rays)
    assert out is not None
    return out


class EqDiagramModule(DiagramModule):
    """Diagram module whose torus matrices live over the quotient coordinates."""

    __slots__ = ("quotient",)

    def __init__(
        self,
        fan: Fan,
        quotient: QuotientData,
        dims: Mapping[Cone, int],
        torus: Mapping[Cone, Sequence[QMat]],
        u: Mapping[tuple[Cone, Cone], QMat],
        v: Mapping[tuple[Cone, Cone], QMat],
    ):
        super().__init__(fan, dims, torus, u, v, nt=quotient.target_rank)
        object.__setattr__(self, "quotient", quotient)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EqDiagramModule)
            and self.quotient == other.quotient
            and super().__eq__(other)
        )


def validate_equivariant(m: EqDiagramModule) -> Report:
    """Plain axioms with monodromy exponents pushed through the quotient map,
    so rays killed by the quotient force vanishing compositions."""
    if not isinstance(m, EqDiagramModule):
        raise ValueError("expected an equivariant module")

    def exponent(w: Vec) -> Vec:
        return m.quotient.q.apply(w)

    return axiom_report(m, exponent)


def inflate(m: EqDiagramModule) -> DiagramModule:
    """Restrict along the base change: the plain torus matrices are the
    quotient-coordinate products prescribed column by column by Q."""
    rep = validate_equivariant(m)
    if not rep.ok:
        raise ValueError("invalid equivariant module: " + rep.lines()[0])
    fan = m.fan
    q = m.quotient.q
    torus = {}
    for c in fan.cones:
        mats = []
        for j in range(fan.rank):
            acc = QMat.identity(m.dims[c])
            for jp in range(q.rows):
                k = q[jp, j]
                if k:
                    acc = acc @ m.torus[c][jp].pow_int(k)
            mats.append(acc)
        torus[c] = tuple(mats)
    out = DiagramModule(fan, dict(m.dims), torus, dict(m.u), dict(m.v))
    check = validate(out)
    assert check.ok, check.render()
    return out
