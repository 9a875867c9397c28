"""Graphviz DOT output for lattices, modules and frames.

Orders are drawn as Hasse diagrams (covering pairs, bottom to top). A
ternary triple becomes its own small node with arcs labelled 1, 2 and 3 to
its coordinates.
"""
import json

from .order import Poset


def _q(text) -> str:
    return json.dumps(str(text))


def _hasse(lines, P: Poset, prefix: str, indent="  "):
    for k, lab in enumerate(P.labels):
        lines.append(f"{indent}{prefix}{k} [label={_q(lab)}];")
    for a, b in P.covers():
        lines.append(f"{indent}{prefix}{a} -> {prefix}{b};")


def lattice_dot(L, name="lattice") -> str:
    lines = [f"digraph {_q(name)} {{", "  rankdir=BT;", "  node [shape=circle];"]
    _hasse(lines, L.poset, "n")
    lines.append("}")
    return "\n".join(lines) + "\n"


def module_dot(M, name="module") -> str:
    lines = [f"digraph {_q(name)} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for sort, L in (("A", M.A), ("B", M.B)):
        lines.append(f"  subgraph cluster_{sort} {{")
        lines.append(f"    label={_q(sort)};")
        _hasse(lines, L.poset, sort.lower(), "    ")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def frame_dot(F, name="frame") -> str:
    lines = [f"digraph {_q(name)} {{", "  node [shape=circle];"]
    _hasse(lines, F.X, "x_")
    _hasse(lines, F.Y, "y_")
    for rel, triples, sorts in (("R", F.R, ("x_", "y_", "x_")), ("T", F.T, ("y_", "x_", "x_"))):
        for k, (a, b, c) in enumerate(sorted(triples)):
            node = f"{rel.lower()}{k}"
            lines.append(f"  {node} [shape=box, label={_q(rel)}];")
            lines.append(f"  {sorts[0]}{a} -> {node} [label=\"1\", style=dashed];")
            lines.append(f"  {sorts[1]}{b} -> {node} [label=\"2\", style=dashed];")
            lines.append(f"  {node} -> {sorts[2]}{c} [label=\"3\", style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
