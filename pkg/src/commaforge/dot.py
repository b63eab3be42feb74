"""Graphviz DOT text for a finite category."""

from __future__ import annotations

import json

from .core import FiniteCategory


def _q(x: str) -> str:
    # JSON string escaping is a valid DOT quoted string for these ids
    return json.dumps(x, ensure_ascii=False)


def emit_dot(cat: FiniteCategory, identities: bool = False, graph_name: str | None = None) -> str:
    """Objects become nodes and arrows labeled edges, in canonical order.

    Identity loops are left out unless ``identities`` is set.
    """
    lines = [f"digraph {_q(graph_name or cat.name)} {{"]
    lines.extend(f"  {_q(a)};" for a in cat.objects)
    for f in cat.arrows:
        if identities or not cat.is_identity(f):
            lines.append(f"  {_q(cat.dom[f])} -> {_q(cat.cod[f])} [label={_q(f)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
