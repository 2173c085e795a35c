"""JSON input schemas for complexes, posets, and panel structures.

Accepted shapes:

* complex: ``{"m": int, "maximal_simplices": [[int, ...], ...]}``
* poset: ``{"elements": [...], "covers": [[a, b], ...],
  "vertex_labels": {element: label}}`` with ``a`` covered by ``b`` and the
  order the transitive closure of the covers
* panel inputs, dispatched on their keys:
  ``{"K": <complex>}`` canonical panelization,
  ``{"K": <complex>, "partition": [[...], ...]}`` merged panels,
  ``{"S": <poset>}`` poset panelization,
  ``{"complex": <complex>, "panels": [[[int, ...], ...], ...]}`` explicit
  panels given by their maximal simplices.

Schema violations raise :class:`SchemaError`; semantic problems (labels out
of range, invalid posets, panels that are not subcomplexes) surface as
:class:`facelab.complexes.InvalidComplexError`.
"""

from __future__ import annotations

from .complexes import (
    SimplicialComplex,
    SimplicialPoset,
    build_complex,
    build_poset,
)
from .constructions import (
    PanelComplex,
    panelize_generic,
    panelize_partition,
    panelize_poset,
    panelize_simplicial,
)


class SchemaError(ValueError):
    pass


def _require(data, key, types):
    if not isinstance(data, dict) or key not in data:
        raise SchemaError(f"missing key {key!r}")
    if not isinstance(data[key], types):
        raise SchemaError(f"key {key!r} has the wrong type")
    return data[key]


def complex_from_json(data) -> SimplicialComplex:
    m = _require(data, "m", int)
    maximal = _require(data, "maximal_simplices", list)
    for s in maximal:
        if not isinstance(s, list) or not all(isinstance(v, int) for v in s):
            raise SchemaError("maximal_simplices must be lists of integers")
    return build_complex(m, maximal)


def poset_from_json(data) -> SimplicialPoset:
    elements = _require(data, "elements", list)
    covers = _require(data, "covers", list)
    for pair in covers:
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError("covers must be pairs")
    labels = data.get("vertex_labels")
    if labels is not None and not isinstance(labels, dict):
        raise SchemaError("vertex_labels must be an object")
    return build_poset(elements, covers, labels)


def panel_input_from_json(data) -> tuple:
    """Build a panel complex from any accepted input shape.

    Returns ``(panel_complex, kind, source)`` with ``kind`` one of
    ``simplicial | partition | poset | generic`` and ``source`` the parsed
    complex or poset (None for generic input).
    """
    if not isinstance(data, dict):
        raise SchemaError("input must be a JSON object")
    if "S" in data:
        poset = poset_from_json(_require(data, "S", dict))
        return panelize_poset(poset), "poset", poset
    if "K" in data and "partition" in data:
        complex = complex_from_json(_require(data, "K", dict))
        partition = _require(data, "partition", list)
        return panelize_partition(complex, partition), "partition", complex
    if "K" in data:
        complex = complex_from_json(_require(data, "K", dict))
        return panelize_simplicial(complex), "simplicial", complex
    if "complex" in data and "panels" in data:
        complex = complex_from_json(_require(data, "complex", dict))
        panels = []
        for gens in _require(data, "panels", list):
            if not isinstance(gens, list):
                raise SchemaError("each panel must be a list of simplices")
            simplices = {frozenset()}
            for s in gens:
                if not isinstance(s, list):
                    raise SchemaError("panel simplices must be lists")
                sub = build_complex(complex.m, [s])
                simplices |= sub.simplices
            panels.append(
                SimplicialComplex(m=complex.m, simplices=frozenset(simplices))
            )
        return panelize_generic(complex, panels), "generic", None
    raise SchemaError(
        "expected one of the input shapes: K / K+partition / S / complex+panels"
    )
