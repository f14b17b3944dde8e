"""Descent data over the affine chart cover of a fan.

A descent datum assigns to every maximal cone a diagram module over its
face fan and to every ordered pair of maximal cones a gluing isomorphism on
the blocks of the overlap, subject to the cocycle condition on triples.
Gluing picks one chart representative per cone and transports all arrows
into the chosen representatives; the cocycle condition makes the result
independent of the choice up to isomorphism.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping

from fanalg.diagram import DiagramModule, validate
from fanalg.fan import Cone, Fan, cone_key, covering_pairs
from fanalg.linalg import QMat, random_invertible
from fanalg.report import Report


def restrict(m: DiagramModule, cone) -> DiagramModule:
    """Sub-diagram on the faces of one cone, over the face fan."""
    c = m.fan.require_cone(cone)
    sub = m.fan.subfan(c)
    faces = set(sub.cones)
    dims = {f: m.dims[f] for f in faces}
    torus = {f: m.torus[f] for f in faces}
    u = {k: mat for k, mat in m.u.items() if k[1] in faces}
    v = {k: mat for k, mat in m.v.items() if k[1] in faces}
    return DiagramModule(sub, dims, torus, u, v, nt=m.nt)


@dataclass(frozen=True)
class DescentDatum:
    fan: Fan
    charts: Mapping[Cone, DiagramModule]
    glue_maps: Mapping[tuple[Cone, Cone], Mapping[Cone, QMat]]

    def glue_block(self, sigma: Cone, tau: Cone, rho: Cone) -> QMat:
        """Block of phi from chart sigma to chart tau at a common face rho."""
        if sigma == tau:
            return QMat.identity(self.charts[sigma].dims[rho])
        return self.glue_maps[(sigma, tau)][rho]


def _overlap_cones(fan: Fan, sigma: Cone, tau: Cone) -> list[Cone]:
    common = tuple(sorted(set(sigma) & set(tau)))
    return fan.subfan(common).cone_list() if fan.is_cone(common) else []


def check_cocycle(d: DescentDatum) -> Report:
    """Well-formedness, intertwining, inverse pairs, and the triple condition."""
    rep = Report()
    fan = d.fan
    maxc = list(fan.maximal)
    for sigma in maxc:
        if sigma not in d.charts:
            rep.add("chart", f"({cone_key(sigma)})", "missing chart module")
    if not rep.ok:
        return rep
    for sigma in maxc:
        chart_rep = validate(d.charts[sigma])
        for f in chart_rep.findings:
            rep.add("chart", f"({cone_key(sigma)}):{f.location}", f"{f.code}: {f.detail}")

    for sigma in maxc:
        for tau in maxc:
            if sigma == tau:
                continue
            if (sigma, tau) not in d.glue_maps:
                rep.add("glue", f"({cone_key(sigma)})->({cone_key(tau)})", "missing gluing map")
                continue
            blocks = d.glue_maps[(sigma, tau)]
            for rho in _overlap_cones(fan, sigma, tau):
                loc = f"({cone_key(sigma)})->({cone_key(tau)}) at ({cone_key(rho)})"
                if rho not in blocks:
                    rep.add("glue", loc, "missing block")
                    continue
                b = blocks[rho]
                ds = d.charts[sigma].dims[rho]
                dt = d.charts[tau].dims[rho]
                if (b.m, b.n) != (dt, ds):
                    rep.add("shape", loc, f"block is {b.m}x{b.n}, expected {dt}x{ds}")
                elif not b.is_invertible():
                    rep.add("invertible", loc, "block is singular")
    if not rep.ok:
        return rep

    # intertwining: each phi is a morphism of the restricted modules
    for sigma in maxc:
        for tau in maxc:
            if sigma == tau:
                continue
            ms, mt = d.charts[sigma], d.charts[tau]
            overlap = _overlap_cones(fan, sigma, tau)
            oset = set(overlap)
            for rho in overlap:
                loc = f"({cone_key(sigma)})->({cone_key(tau)}) at ({cone_key(rho)})"
                for j in range(ms.nt):
                    if d.glue_block(sigma, tau, rho) @ ms.torus[rho][j] != mt.torus[rho][j] @ d.glue_block(sigma, tau, rho):
                        rep.add("intertwine", loc, f"torus matrix {j + 1} not intertwined")
            for (lo, hi) in ms.u:
                if lo in oset and hi in oset:
                    loc = f"({cone_key(sigma)})->({cone_key(tau)}) pair ({cone_key(lo)})<({cone_key(hi)})"
                    if d.glue_block(sigma, tau, hi) @ ms.u[(lo, hi)] != mt.u[(lo, hi)] @ d.glue_block(sigma, tau, lo):
                        rep.add("intertwine", loc, "u arrow not intertwined")
                    if d.glue_block(sigma, tau, lo) @ ms.v[(lo, hi)] != mt.v[(lo, hi)] @ d.glue_block(sigma, tau, hi):
                        rep.add("intertwine", loc, "v arrow not intertwined")

    # inverse pairs
    for sigma in maxc:
        for tau in maxc:
            if sigma >= tau:
                continue
            for rho in _overlap_cones(fan, sigma, tau):
                fwd = d.glue_block(sigma, tau, rho)
                bwd = d.glue_block(tau, sigma, rho)
                if not (bwd @ fwd).is_identity():
                    rep.add(
                        "inverse",
                        f"({cone_key(sigma)})<->({cone_key(tau)}) at ({cone_key(rho)})",
                        "maps are not mutually inverse",
                    )

    # cocycle on ordered triples
    for sigma in maxc:
        for tau in maxc:
            for omega in maxc:
                if len({sigma, tau, omega}) < 3:
                    continue
                triple = set(sigma) & set(tau) & set(omega)
                base = tuple(sorted(triple))
                if not d.fan.is_cone(base):
                    continue
                for rho in d.fan.subfan(base).cone_list():
                    direct = d.glue_block(sigma, omega, rho)
                    composite = d.glue_block(tau, omega, rho) @ d.glue_block(sigma, tau, rho)
                    if direct != composite:
                        rep.add(
                            "cocycle",
                            f"({cone_key(sigma)})->({cone_key(tau)})->({cone_key(omega)}) at ({cone_key(rho)})",
                            "triple composition disagrees with the direct map",
                        )
    return rep


def _chart_of(fan: Fan, rho: Cone, policy: str) -> Cone:
    holders = sorted(s for s in fan.maximal if set(rho) <= set(s))
    if not holders:
        raise ValueError(f"cone ({cone_key(rho)}) lies in no maximal cone")
    return holders[0] if policy == "lex_min" else holders[-1]


def glue(d: DescentDatum, policy: str = "lex_min") -> DiagramModule:
    """Glue a cocycle-passing datum into a global module.

    Every cone takes its space from a chosen containing chart; arrows are
    transported into the chosen representatives through the gluing maps.  The
    output is validated and its restrictions are isomorphic to the charts.
    """
    rep = check_cocycle(d)
    if not rep.ok:
        raise ValueError("descent datum rejected: " + rep.lines()[0])
    fan = d.fan
    chart_of = {rho: _chart_of(fan, rho, policy) for rho in fan.cones}
    dims = {rho: d.charts[chart_of[rho]].dims[rho] for rho in fan.cones}
    torus = {rho: d.charts[chart_of[rho]].torus[rho] for rho in fan.cones}
    u = {}
    v = {}
    for tau, sigma, _ in covering_pairs(fan):
        a = chart_of[tau]
        b = chart_of[sigma]
        move = d.glue_block(a, b, tau)  # chart a and chart b both contain tau
        back = d.glue_block(b, a, tau)
        u[(tau, sigma)] = d.charts[b].u[(tau, sigma)] @ move
        v[(tau, sigma)] = back @ d.charts[b].v[(tau, sigma)]
    out = DiagramModule(fan, dims, torus, u, v, nt=next(iter(d.charts.values())).nt if d.charts else fan.rank)
    out_rep = validate(out)
    assert out_rep.ok, out_rep.render()
    for sigma in fan.maximal:
        iso = _restriction_iso(d, out, sigma, chart_of)
        assert iso, f"glued module does not restrict to the chart at ({cone_key(sigma)})"
    return out


def _restriction_iso(d: DescentDatum, glued: DiagramModule, sigma: Cone, chart_of: Mapping[Cone, Cone]) -> bool:
    """The gluing maps themselves exhibit restrict(glued, sigma) ~ chart sigma."""
    from fanalg.diagram import BlockMap, is_morphism

    sub = restrict(glued, sigma)
    chart = d.charts[sigma]
    blocks = {}
    for rho in sub.fan.cones:
        blocks[rho] = d.glue_block(chart_of[rho], sigma, rho)
    f = BlockMap(sub, chart, blocks)
    return f.is_isomorphism() and is_morphism(f)


def tautological_datum(m: DiagramModule) -> DescentDatum:
    """Restrictions to the maximal cones with identity gluing maps."""
    fan = m.fan
    charts = {sigma: restrict(m, sigma) for sigma in fan.maximal}
    glue_maps = {}
    for sigma in fan.maximal:
        for tau in fan.maximal:
            if sigma == tau:
                continue
            blocks = {}
            for rho in _overlap_cones(fan, sigma, tau):
                blocks[rho] = QMat.identity(m.dims[rho])
            glue_maps[(sigma, tau)] = blocks
    return DescentDatum(fan, charts, glue_maps)


def twisted_datum(m: DiagramModule, rng: random.Random) -> DescentDatum:
    """Tautological datum conjugated chartwise by random invertibles; the
    gluing maps compensate, so the datum still glues to a module isomorphic
    to the original."""
    from fanalg.diagram import conjugate

    fan = m.fan
    twists: dict[Cone, dict[Cone, QMat]] = {}
    for sigma in fan.maximal:
        twists[sigma] = {rho: random_invertible(m.dims[rho], rng) for rho in fan.subfan(sigma).cones}
    charts = {}
    for sigma in fan.maximal:
        charts[sigma] = conjugate(restrict(m, sigma), twists[sigma])
    glue_maps = {}
    for sigma in fan.maximal:
        for tau in fan.maximal:
            if sigma == tau:
                continue
            blocks = {}
            for rho in _overlap_cones(fan, sigma, tau):
                blocks[rho] = twists[tau][rho] @ twists[sigma][rho].inverse()
            glue_maps[(sigma, tau)] = blocks
    return DescentDatum(fan, charts, glue_maps)
