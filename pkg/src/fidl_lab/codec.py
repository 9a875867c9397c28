"""Canonical JSON for lattices, modules, frames, homomorphisms, carriers and
congruences.

Serialization sorts object keys, keeps arrays in index order and never emits
floats, so equal values always give identical bytes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import KindMismatch, MalformedInput, NoMeetOrJoin, NotBounded
from .fidl import FidlModule, validate_module
from .order import (
    FiniteLattice,
    Poset,
    bits,
    mask_of,
    partition_blocks,
    partition_from_blocks,
    spectrum,
    validate_lattice,
    validate_poset,
)

KINDS = ("lattice", "module", "frame", "hom", "subalgebra", "congruence")
GENERATOR_VERSION = "1"


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise MalformedInput(f"not valid JSON: {e}")


def _need(obj, key, kind=dict):
    if not isinstance(obj, dict) or key not in obj:
        raise MalformedInput(f"missing field {key!r}", field=key)
    value = obj[key]
    if not isinstance(value, kind):
        raise MalformedInput(f"field {key!r} has the wrong type", field=key)
    return value


def _int_list(value, name):
    if not isinstance(value, list) or any(not isinstance(v, int) or isinstance(v, bool) for v in value):
        raise MalformedInput(f"{name} must be a list of integers", field=name)
    return value


def _table(value, name):
    if not isinstance(value, list):
        raise MalformedInput(f"{name} must be a list of rows", field=name)
    return [_int_list(row, name) for row in value]


# -- posets and lattices ---------------------------------------------------

def encode_poset(P: Poset) -> dict:
    return {"elements": list(P.labels), "leq": P.leq_table()}


def decode_poset(obj) -> Poset:
    labels = _need(obj, "elements", list)
    if any(not isinstance(x, str) for x in labels):
        raise MalformedInput("element labels must be strings")
    return validate_poset(labels, _need(obj, "leq", list))


def encode_lattice(L: FiniteLattice, derived: bool = False) -> dict:
    out = encode_poset(L.poset)
    if derived:
        out.update(
            meet=[list(r) for r in L.meet],
            join=[list(r) for r in L.join],
            bottom=L.bottom,
            top=L.top,
        )
    return out


def decode_lattice(obj) -> FiniteLattice:
    labels = _need(obj, "elements", list)
    if any(not isinstance(x, str) for x in labels):
        raise MalformedInput("element labels must be strings")
    L = validate_lattice(labels, _need(obj, "leq", list))
    for key, stored, exc in (("meet", L.meet, NoMeetOrJoin), ("join", L.join, NoMeetOrJoin)):
        if key in obj and [tuple(r) for r in _table(obj[key], key)] != list(stored):
            raise exc(f"stored {key} table disagrees with the order", law=key)
    for key, value in (("bottom", L.bottom), ("top", L.top)):
        if key in obj and obj[key] != value:
            raise NotBounded(f"stored {key} disagrees with the order", law=key)
    return L


# -- modules ---------------------------------------------------------------

def encode_module(M: FidlModule) -> dict:
    return {
        "A": encode_lattice(M.A),
        "B": encode_lattice(M.B),
        "f": [list(r) for r in M.f],
        "i": [list(r) for r in M.i],
    }


def decode_module(obj) -> FidlModule:
    A = decode_lattice(_need(obj, "A"))
    B = decode_lattice(_need(obj, "B"))
    return validate_module(A, B, _table(_need(obj, "f", list), "f"), _table(_need(obj, "i", list), "i"))


# -- frames ----------------------------------------------------------------

def encode_frame(F) -> dict:
    return {
        "X": encode_poset(F.X),
        "Y": encode_poset(F.Y),
        "R": [list(t) for t in sorted(F.R)],
        "T": [list(t) for t in sorted(F.T)],
    }


def decode_frame(obj):
    from .frames import validate_frame

    X = decode_poset(_need(obj, "X"))
    Y = decode_poset(_need(obj, "Y"))
    R = _table(_need(obj, "R", list), "R")
    T = _table(_need(obj, "T", list), "T")
    return validate_frame(X, Y, R, T)


# -- homomorphisms, carriers, congruences ----------------------------------

def encode_hom(hom) -> dict:
    return {"alpha": list(hom.alpha), "gamma": list(hom.gamma)}


def decode_hom(obj, src: FidlModule, tgt: FidlModule):
    from .morphisms import validate_hom

    alpha = _int_list(_need(obj, "alpha", list), "alpha")
    gamma = _int_list(_need(obj, "gamma", list), "gamma")
    return validate_hom(src, tgt, alpha, gamma)


def encode_carriers(c) -> dict:
    return {"carrierA": list(bits(c.carrier_a)), "carrierB": list(bits(c.carrier_b))}


def decode_carriers(obj, M: FidlModule):
    from .morphisms import subalgebra_candidate

    ca = _int_list(_need(obj, "carrierA", list), "carrierA")
    cb = _int_list(_need(obj, "carrierB", list), "carrierB")
    if any(not 0 <= v < M.A.size for v in ca) or any(not 0 <= v < M.B.size for v in cb):
        raise MalformedInput("carrier index out of range")
    return subalgebra_candidate(M, mask_of(ca), mask_of(cb))


def encode_congruence(c) -> dict:
    return {"thetaA": partition_blocks(c.thetaA), "thetaB": partition_blocks(c.thetaB)}


def decode_congruence(obj, M: FidlModule):
    """Parse block lists and check them as a congruence of M."""
    from .congruences import FidlCongruence, compatibility_witness
    from .errors import PropertyFailure
    from .order import is_lattice_congruence

    pa = partition_from_blocks(M.A.size, _table(_need(obj, "thetaA", list), "thetaA"))
    pb = partition_from_blocks(M.B.size, _table(_need(obj, "thetaB", list), "thetaB"))
    for side, L, p in (("A", M.A, pa), ("B", M.B, pb)):
        if not is_lattice_congruence(L, p):
            raise PropertyFailure(f"theta{side} is not a lattice congruence", side=side)
    bad = compatibility_witness(M, pa, pb)
    if bad is not None:
        raise PropertyFailure(f"congruence fails {bad['condition']}", **bad)
    return FidlCongruence(pa, pb)


def encode_closed_pair(Z) -> list:
    return [list(bits(Z.Z1)), list(bits(Z.Z2))]


def encode_congruence_lists(M: FidlModule, cons, closed) -> dict:
    return {
        "congruences": [encode_congruence(c) for c in cons],
        "stronglyClosed": [encode_closed_pair(z) for z in closed],
    }


def encode_filter(L: FiniteLattice, mask: int) -> list:
    return [L.labels[a] for a in bits(mask)]


def encode_primes(L: FiniteLattice) -> list:
    return [encode_filter(L, p) for p in spectrum(L).primes]


# -- documents -------------------------------------------------------------

@dataclass(frozen=True)
class InstanceDocument:
    kind: str
    payload: dict
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "payload": self.payload, "meta": self.meta}

    def dumps(self) -> str:
        return dumps(self.to_json())


def infer_kind(obj) -> str:
    if not isinstance(obj, dict):
        raise MalformedInput("document must be a JSON object")
    keys = set(obj)
    if {"A", "B", "f", "i"} <= keys:
        return "module"
    if {"X", "Y", "R", "T"} <= keys:
        return "frame"
    if {"elements", "leq"} <= keys:
        return "lattice"
    if {"alpha", "gamma"} <= keys:
        return "hom"
    if {"carrierA", "carrierB"} <= keys:
        return "subalgebra"
    if {"thetaA", "thetaB"} <= keys:
        return "congruence"
    raise MalformedInput("cannot tell what kind of document this is")


def parse_document(text: str) -> InstanceDocument:
    obj = loads(text)
    if isinstance(obj, dict) and "kind" in obj and "payload" in obj:
        kind = obj["kind"]
        if kind not in KINDS:
            raise MalformedInput(f"unknown kind {kind!r}", kind=kind)
        payload = _need(obj, "payload")
        meta = obj.get("meta", {})
        if not isinstance(meta, dict):
            raise MalformedInput("meta must be an object")
        return InstanceDocument(kind, payload, meta)
    return InstanceDocument(infer_kind(obj), obj, {})


def document(kind: str, payload: dict, **meta) -> InstanceDocument:
    return InstanceDocument(kind, payload, dict(meta))


def module_document(M: FidlModule, **meta) -> InstanceDocument:
    return document("module", encode_module(M), **meta)


def frame_document(F, **meta) -> InstanceDocument:
    return document("frame", encode_frame(F), **meta)


def hom_document(hom, **meta) -> InstanceDocument:
    payload = {"source": encode_module(hom.source), "target": encode_module(hom.target), **encode_hom(hom)}
    return document("hom", payload, **meta)


def subalgebra_document(c, **meta) -> InstanceDocument:
    return document("subalgebra", {"module": encode_module(c.host), **encode_carriers(c)}, **meta)


def congruence_document(M: FidlModule, c, **meta) -> InstanceDocument:
    return document("congruence", {"module": encode_module(M), **encode_congruence(c)}, **meta)


def decode_document(doc: InstanceDocument):
    """Validate a document's payload under its kind and return the value."""
    p = doc.payload
    if doc.kind == "lattice":
        return decode_lattice(p)
    if doc.kind == "module":
        return decode_module(p)
    if doc.kind == "frame":
        return decode_frame(p)
    if doc.kind == "hom":
        if "source" not in p or "target" not in p:
            raise MalformedInput("hom document needs source and target modules")
        return decode_hom(p, decode_module(p["source"]), decode_module(p["target"]))
    if doc.kind == "subalgebra":
        return decode_carriers(p, decode_module(_need(p, "module")))
    if doc.kind == "congruence":
        return decode_congruence(p, decode_module(_need(p, "module")))
    raise KindMismatch(f"unknown kind {doc.kind!r}")


def encode_value(kind: str, value) -> dict:
    """Inverse of decode_document for the payload."""
    if kind == "lattice":
        return encode_lattice(value)
    if kind == "module":
        return encode_module(value)
    if kind == "frame":
        return encode_frame(value)
    if kind == "hom":
        return hom_document(value).payload
    if kind == "subalgebra":
        return subalgebra_document(value).payload
    raise KindMismatch(f"cannot encode kind {kind!r} without context")
