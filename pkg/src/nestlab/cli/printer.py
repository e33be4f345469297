"""Render a workspace back into the text format accepted by :func:`parse`."""
from __future__ import annotations

from collections import Counter

from .parser import Workspace


def _tuple(xs) -> str:
    return "(" + ",".join(str(x) for x in xs) + ")"


def format_summands(summands) -> str:
    counts = Counter(summands)
    parts = [_tuple(f) + (f" x{n}" if n > 1 else "") for f, n in sorted(counts.items())]
    return "summands{ " + "; ".join(parts) + " }"


def format_ghom(gamma) -> str:
    cells = []
    for cell, g in gamma.X:
        body = "; ".join(f"{_tuple(c)}:{v}" for c, v in sorted(g.items()))
        cells.append(f"cell{_tuple(cell)}{{ {body} }}" if body else f"cell{_tuple(cell)}{{ }}")
    return " ".join(cells)


def format_workspace(ws: Workspace) -> str:
    lines = []
    for name, A in ws.algebras.items():
        lines.append(f"algebra {name} = nest{_tuple(A.atom_ranks)}")
    for name, e in ws.embeddings.items():
        lines.append(f"embedding {name} : {e.domain} -> {e.codomain} = {format_summands(e.value.summands)}")
    for name, e in ws.ghoms.items():
        lines.append(f"ghom {name} : {e.domain} -> {e.codomain} = {format_ghom(e.value)}")
    for name, s in ws.systems.items():
        chain = s.stages[0] + "".join(f" -{m}-> {a}" for m, a in zip(s.maps, s.stages[1:]))
        lines.append(f"system {name} = {chain}")
    return "\n".join(lines) + ("\n" if lines else "")
