"""JSON-friendly data forms for every object the CLI reads or writes.

Conventions: rationals are "p/q" strings, matrices are row-major flat lists,
cone keys are comma-joined sorted ray indices with the empty string for the
zero cone.  parse(serialize(x)) must reproduce x exactly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Mapping

from fanalg.algebra import AlgebraElement
from fanalg.descent import DescentDatum
from fanalg.diagram import DiagramModule
from fanalg.equivariant import EqDiagramModule, QuotientData, quotient_presentation
from fanalg.fan import Cone, Fan, build_fan, cone_key, parse_cone_key
from fanalg.lattice import IntMatrix
from fanalg.laurent import poly_from_data, poly_to_data
from fanalg.linalg import QMat


def fan_to_data(fan: Fan) -> dict:
    return {
        "rank": fan.rank,
        "rays": [list(r) for r in fan.rays],
        "max_cones": [list(c) for c in fan.maximal],
    }


def fan_from_data(data: Mapping) -> Fan:
    return build_fan(int(data["rank"]), data["rays"], data["max_cones"])


def _mat_to_data(m: QMat) -> list[str]:
    return [str(x) for x in m.flat()]


def _mat_from_data(flat, rows: int, cols: int) -> QMat:
    return QMat.from_flat(rows, cols, [Fraction(str(x)) for x in flat])


def element_to_data(x: AlgebraElement, fan_data: Any | None = None) -> dict:
    return {
        "fan": fan_to_data(x.fan) if fan_data is None else fan_data,
        "entries": [
            {"row": cone_key(sigma), "col": cone_key(tau), "poly": poly_to_data(p)}
            for (sigma, tau), p in sorted(x.entries.items())
        ],
    }


def element_from_data(data: Mapping, fan: Fan, check: bool = True) -> AlgebraElement:
    entries = {}
    for rec in data["entries"]:
        sigma = fan.require_cone(parse_cone_key(rec["row"]))
        tau = fan.require_cone(parse_cone_key(rec["col"]))
        entries[(sigma, tau)] = poly_from_data(rec["poly"], fan.rank)
    return AlgebraElement(fan, entries, check=check)


def _module_body(m: DiagramModule) -> dict:
    return {
        "spaces": {cone_key(c): m.dims[c] for c in m.fan.cone_list()},
        "torus": {cone_key(c): [_mat_to_data(s) for s in m.torus[c]] for c in m.fan.cone_list()},
        "u": {f"{cone_key(tau)}|{cone_key(sigma)}": _mat_to_data(mat) for (tau, sigma), mat in sorted(m.u.items())},
        "v": {f"{cone_key(sigma)}|{cone_key(tau)}": _mat_to_data(m.v[(tau, sigma)]) for (tau, sigma) in sorted(m.v)},
    }


def module_to_data(m: DiagramModule, fan_data: Any | None = None) -> dict:
    out = {"fan": fan_to_data(m.fan) if fan_data is None else fan_data}
    out.update(_module_body(m))
    return out


def _module_parts(data: Mapping, fan: Fan, nt: int):
    dims = {}
    for key, d in data.get("spaces", {}).items():
        dims[fan.require_cone(parse_cone_key(key))] = int(d)
    torus = {}
    for key, mats in data.get("torus", {}).items():
        c = fan.require_cone(parse_cone_key(key))
        d = dims.get(c, 0)
        if len(mats) != nt:
            raise ValueError(f"cone ({key}) carries {len(mats)} torus matrices, expected {nt}")
        torus[c] = tuple(_mat_from_data(flat, d, d) for flat in mats)
    u = {}
    for key, flat in data.get("u", {}).items():
        tau_k, sigma_k = key.split("|")
        tau = fan.require_cone(parse_cone_key(tau_k))
        sigma = fan.require_cone(parse_cone_key(sigma_k))
        u[(tau, sigma)] = _mat_from_data(flat, dims.get(sigma, 0), dims.get(tau, 0))
    v = {}
    for key, flat in data.get("v", {}).items():
        sigma_k, tau_k = key.split("|")
        sigma = fan.require_cone(parse_cone_key(sigma_k))
        tau = fan.require_cone(parse_cone_key(tau_k))
        v[(tau, sigma)] = _mat_from_data(flat, dims.get(tau, 0), dims.get(sigma, 0))
    return dims, torus, u, v


def module_from_data(data: Mapping, fan: Fan) -> DiagramModule:
    dims, torus, u, v = _module_parts(data, fan, fan.rank)
    return DiagramModule(fan, dims, torus, u, v)


def quotient_to_data(q: QuotientData) -> dict:
    return {"Q": [list(r) for r in q.q.entries] if q.q.rows else [], "rank": q.q.cols}


def quotient_from_data(data: Mapping) -> QuotientData:
    if "Q" in data:
        rows = data["Q"]
        rank = data.get("rank")
        if rank is None and not rows:
            raise ValueError("empty Q needs an explicit rank")
        if rank is None:
            rank = len(rows[0])
        mat = IntMatrix([tuple(int(x) for x in r) for r in rows], shape=(len(rows), int(rank)))
        return quotient_presentation(q=mat)
    if "characters" in data:
        return quotient_presentation(characters=data["characters"], rank=data.get("rank"))
    raise ValueError("quotient data needs a Q matrix or characters")


def eq_module_to_data(m: EqDiagramModule, fan_data: Any | None = None) -> dict:
    out = {
        "fan": fan_to_data(m.fan) if fan_data is None else fan_data,
        "quotient": quotient_to_data(m.quotient),
    }
    out.update(_module_body(m))
    return out


def eq_module_from_data(data: Mapping, fan: Fan) -> EqDiagramModule:
    quotient = quotient_from_data(data["quotient"])
    dims, torus, u, v = _module_parts(data, fan, quotient.target_rank)
    return EqDiagramModule(fan, quotient, dims, torus, u, v)


def descent_to_data(d: DescentDatum, fan_data: Any | None = None) -> dict:
    charts = {cone_key(sigma): _module_body(m) for sigma, m in sorted(d.charts.items())}
    glue = {}
    for (sigma, tau), blocks in sorted(d.glue_maps.items()):
        glue[f"{cone_key(sigma)}|{cone_key(tau)}"] = {
            cone_key(rho): _mat_to_data(b) for rho, b in sorted(blocks.items())
        }
    return {
        "fan": fan_to_data(d.fan) if fan_data is None else fan_data,
        "charts": charts,
        "glue": glue,
    }


def descent_from_data(data: Mapping, fan: Fan) -> DescentDatum:
    charts = {}
    for key, body in data["charts"].items():
        sigma = fan.require_cone(parse_cone_key(key))
        sub = fan.subfan(sigma)
        dims, torus, u, v = _module_parts(body, sub, fan.rank)
        charts[sigma] = DiagramModule(sub, dims, torus, u, v)
    glue_maps: dict[tuple[Cone, Cone], dict[Cone, QMat]] = {}
    for key, blocks in data.get("glue", {}).items():
        sig_k, tau_k = key.split("|")
        sigma = fan.require_cone(parse_cone_key(sig_k))
        tau = fan.require_cone(parse_cone_key(tau_k))
        out = {}
        for rho_k, flat in blocks.items():
            rho = fan.require_cone(parse_cone_key(rho_k))
            out[rho] = _mat_from_data(flat, charts[tau].dims.get(rho, 0), charts[sigma].dims.get(rho, 0))
        glue_maps[(sigma, tau)] = out
    return DescentDatum(fan, charts, glue_maps)
