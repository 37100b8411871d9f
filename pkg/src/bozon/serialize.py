"""JSON (de)serialization for maps, couplings, defects, and reports.

All dumps are canonical: sorted keys, two-space indent, trailing newline,
and no timestamps, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from typing import Any, Mapping, Sequence

from .dimer import QuadDimerGraph
from .errors import LengthMismatch, MalformedRotation, NonPositiveCoupling
from .ising import CouplingAssignment, IsingCorrelator, base_couplings
from .planar_map import CombinatorialMap, DefectSet, PathSpec, build_map


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------- graphs


def map_to_dict(m: CombinatorialMap) -> dict[str, Any]:
    return {
        "vertices": [
            {"id": v, "darts": list(m.vertex_darts[v])}
            for v in range(m.vertex_count)
        ],
        "edges": [
            {"id": e, "darts": list(m.edge_darts[e])}
            for e in range(m.edge_count)
        ],
    }


def _dense_ids(items: Sequence[Mapping[str, Any]], what: str) -> list[Mapping[str, Any]]:
    try:
        ordered = sorted(items, key=lambda it: it["id"])
    except (TypeError, KeyError) as exc:
        raise MalformedRotation(f"every {what} needs an integer id") from exc
    ids = [it["id"] for it in ordered]
    if ids != list(range(len(ids))):
        raise MalformedRotation(f"{what} ids must be dense 0..{len(ids) - 1}, got {ids}")
    return ordered


def map_from_dict(obj: Mapping[str, Any]) -> CombinatorialMap:
    if not isinstance(obj, Mapping) or "vertices" not in obj or "edges" not in obj:
        raise MalformedRotation("graph object needs 'vertices' and 'edges'")
    vertices = _dense_ids(obj["vertices"], "vertex")
    edges = _dense_ids(obj["edges"], "edge")
    rotations = []
    for it in vertices:
        darts = it.get("darts")
        if not isinstance(darts, list):
            raise MalformedRotation(f"vertex {it['id']} needs a dart list")
        rotations.append([int(d) for d in darts])
    pairs = []
    for it in edges:
        darts = it.get("darts")
        if not isinstance(darts, list) or len(darts) != 2:
            raise MalformedRotation(f"edge {it['id']} needs exactly two darts")
        pairs.append((int(darts[0]), int(darts[1])))
    return build_map(rotations, pairs)


# ------------------------------------------------------------- couplings


def couplings_to_dict(j: CouplingAssignment) -> dict[str, Any]:
    return {
        "edges": [{"id": e, "J": j.real[e]} for e in range(j.edge_count)]
    }


def couplings_from_dict(
    obj: Mapping[str, Any], edge_count: int | None = None
) -> CouplingAssignment:
    if not isinstance(obj, Mapping) or "edges" not in obj:
        raise NonPositiveCoupling("couplings object needs an 'edges' list")
    items = _dense_ids(obj["edges"], "coupling")
    values = []
    for it in items:
        if "J" not in it:
            raise NonPositiveCoupling(f"coupling {it['id']} needs a J value")
        values.append(float(it["J"]))
    if edge_count is not None and len(values) != edge_count:
        raise LengthMismatch(
            f"{len(values)} couplings for {edge_count} edges"
        )
    return base_couplings(values)


# --------------------------------------------------------------- defects


def _path_to_dict(p: PathSpec) -> dict[str, Any]:
    return {"endpoints": list(p.endpoints), "edges": list(p.edges)}


def _path_from_dict(obj: Mapping[str, Any]) -> PathSpec:
    try:
        u, v = obj["endpoints"]
        edges = tuple(int(e) for e in obj["edges"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedRotation(
            "each path needs 'endpoints' [u, v] and an 'edges' list"
        ) from exc
    return PathSpec((int(u), int(v)), edges)


def defects_to_dict(d: DefectSet) -> dict[str, Any]:
    return {
        "order_paths": [_path_to_dict(p) for p in d.order_paths],
        "disorder_paths": [_path_to_dict(p) for p in d.disorder_paths],
    }


def defect_paths_from_dict(
    obj: Mapping[str, Any],
) -> tuple[tuple[PathSpec, ...], tuple[PathSpec, ...]]:
    """Parse the two path families; validation against a map happens in
    validate_defects, which the caller owns."""
    if not isinstance(obj, Mapping):
        raise MalformedRotation("defects object must be a mapping")
    order = tuple(_path_from_dict(p) for p in obj.get("order_paths", ()))
    disorder = tuple(_path_from_dict(p) for p in obj.get("disorder_paths", ()))
    return order, disorder


# ----------------------------------------------------- correlators, G_Q


def correlator_to_dict(c: IsingCorrelator, d: DefectSet) -> dict[str, Any]:
    return {
        "value_re": c.value.real,
        "value_im": c.value.imag,
        "gamma": sorted(d.gamma),
        "gamma_star": sorted(d.gamma_star),
    }


def gq_to_dict(
    gq: QuadDimerGraph, weights: Sequence[float] | None = None
) -> dict[str, Any]:
    """G_Q as JSON: vertices with bipartition class, edges with kind (and
    weight when given), quads grouped per primal edge."""
    out: dict[str, Any] = {
        "vertices": [
            {"id": v, "class": "black" if gq.color[v] == 0 else "white"}
            for v in range(gq.vertex_count)
        ],
        "edges": [],
        "quads": [
            {
                "edge": q.edge,
                "vertices": list(q.vertices),
                "primal_parallel": list(q.primal_parallel),
                "dual_parallel": list(q.dual_parallel),
            }
            for q in gq.quads
        ],
    }
    for k in range(gq.edge_count):
        u, v = gq.map.edge_endpoints(k)
        rec: dict[str, Any] = {
            "id": k,
            "endpoints": [u, v],
            "kind": gq.edge_kind[k],
            "primal_edge": gq.edge_primal_edge[k],
        }
        if weights is not None:
            rec["weight"] = weights[k]
        out["edges"].append(rec)
    return out
