import re

from fidl_lab.dot import frame_dot, lattice_dot, module_dot
from fidl_lab.fidl import BOOL4, CHAIN2, CHAIN3


def nodes(text, prefix):
    return set(re.findall(rf"^\s*({prefix}\d+) \[", text, re.M))


def edges(text):
    return re.findall(r"^\s*(\w+) -> (\w+);", text, re.M)


def test_chain():
    out = lattice_dot(CHAIN2)
    assert out.startswith('digraph "lattice" {') and out.endswith("}\n")
    assert nodes(out, "n") == {"n0", "n1"} and edges(out) == [("n0", "n1")]


def test_hasse_edges_are_covers_only():
    assert len(edges(lattice_dot(BOOL4))) == 4
    assert len(nodes(lattice_dot(BOOL4), "n")) == 4
    # 0 < m < 1 has two covers, not the implied 0 < 1
    assert sorted(edges(lattice_dot(CHAIN3))) == [("n0", "n1"), ("n1", "n2")]


def test_module_clusters(MOD2):
    out = module_dot(MOD2, "m")
    assert "subgraph cluster_A" in out and "subgraph cluster_B" in out
    assert nodes(out, "a") == {"a0", "a1"} and nodes(out, "b") == {"b0", "b1"}


def test_frame_triples(PT):
    out = frame_dot(PT)
    assert nodes(out, "x_") == {"x_0"} and nodes(out, "y_") == {"y_0"}
    assert nodes(out, "r") == {"r0"} and nodes(out, "t") == {"t0"}
    assert out.count('label="1"') == 2 and out.count('label="3"') == 2


def test_labels_are_quoted():
    from fidl_lab.order import chain

    out = lattice_dot(chain(2, ('say "hi"', "b")), 'we"ird')
    assert 'label="say \\"hi\\""' in out and 'digraph "we\\"ird"' in out
