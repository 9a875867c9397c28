"""FI-frames: two posets X, Y with R in X x Y x X and T in Y x X x X.

Relations are frozensets of index triples. Quantifier scans go through the
cached fibre indices below rather than through the triple sets.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .errors import ClosureViolation, ConditionViolation, MalformedInput
from .fidl import FidlModule, fusion_image, implication_image, validate_module
from .morphisms import FidlHomomorphism, validate_hom
from .order import (
    IncreasingSetLattice,
    Poset,
    bits,
    increasing_sets,
    mask_of,
    spectrum,
)


@dataclass(frozen=True)
class FiFrame:
    X: Poset
    Y: Poset
    R: frozenset
    T: frozenset

    @cached_property
    def r_targets(self) -> dict:
        """(x, y) -> mask of z with (x, y, z) in R."""
        out = {}
        for x, y, z in self.R:
            out[x, y] = out.get((x, y), 0) | 1 << z
        return out

    @cached_property
    def t_targets(self) -> dict:
        """(y, x) -> mask of z with (y, x, z) in T."""
        out = {}
        for y, x, z in self.T:
            out[y, x] = out.get((y, x), 0) | 1 << z
        return out

    @cached_property
    def r_sources(self) -> dict:
        """z -> sorted list of (x, y) with (x, y, z) in R."""
        out = {}
        for x, y, z in sorted(self.R):
            out.setdefault(z, []).append((x, y))
        return out

    @cached_property
    def t_by_middle(self) -> dict:
        """x -> sorted list of (y, z) with (y, x, z) in T."""
        out = {}
        for y, x, z in sorted(self.T):
            out.setdefault(x, []).append((y, z))
        return out

    def r_image(self, x, y) -> int:
        return self.r_targets.get((x, y), 0)

    def t_image(self, y, x) -> int:
        return self.t_targets.get((y, x), 0)


def _check_triples(name, triples, sizes):
    out = set()
    for t in triples:
        t = tuple(t)
        if len(t) != 3 or any(
            not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n
            for v, n in zip(t, sizes)
        ):
            raise MalformedInput(f"bad {name} triple {list(t)}", relation=name, triple=list(t))
        out.add(t)
    return frozenset(out)


def closure_violation(F: FiFrame):
    """First (relation, 6-tuple witness) breaking down-down-up closure, or None."""
    for name, P1, P2, targets in (
        ("R", F.X, F.Y, F.r_targets),
        ("T", F.Y, F.X, F.t_targets),
    ):
        for (a, b), zs in sorted(targets.items()):
            for a2 in bits(P1.down[a]):
                for b2 in bits(P2.down[b]):
                    have = targets.get((a2, b2), 0)
                    for z in bits(zs):
                        missing = F.X.up[z] & ~have
                        if missing:
                            z2 = next(bits(missing))
                            return name, [a, b, z, a2, b2, z2]
    return None


def validate_frame(X: Poset, Y: Poset, R: Iterable, T: Iterable) -> FiFrame:
    R = _check_triples("R", R, (len(X), len(Y), len(X)))
    T = _check_triples("T", T, (len(Y), len(X), len(X)))
    F = FiFrame(X, Y, R, T)
    bad = closure_violation(F)
    if bad is not None:
        name, w = bad
        raise ClosureViolation(f"{name} is not closed", relation=name, witness=w)
    return F


def close_frame(X: Poset, Y: Poset, R: Iterable, T: Iterable) -> FiFrame:
    """Smallest FI-frame on X, Y whose relations contain the given triples."""
    def close(triples, P1, P2):
        out = set()
        for a, b, z in triples:
            for a2 in bits(P1.down[a]):
                for b2 in bits(P2.down[b]):
                    for z2 in bits(X.up[z]):
                        out.add((a2, b2, z2))
        return frozenset(out)

    return FiFrame(X, Y, close(R, X, Y), close(T, Y, X))


def pt_frame() -> FiFrame:
    P = Poset(("pt",), (1,))
    return validate_frame(P, P, [(0, 0, 0)], [(0, 0, 0)])


# -- complex module --------------------------------------------------------

def raw_fusion(F: FiFrame, U: int, V: int) -> int:
    """{z : (x, y, z) in R for some x in U, y in V}."""
    out = 0
    for x in bits(U):
        for y in bits(V):
            out |= F.r_image(x, y)
    return out


def raw_implication(F: FiFrame, V: int, U: int) -> int:
    """{w in X : every (v, w, z) in T with v in V has z in U}."""
    return mask_of(
        w for w in range(len(F.X)) if all(F.t_image(v, w) & ~U == 0 for v in bits(V))
    )


@dataclass(frozen=True)
class ComplexModule:
    module: FidlModule
    upsets_x: IncreasingSetLattice
    upsets_y: IncreasingSetLattice


@lru_cache(maxsize=256)
def complex_structure(F: FiFrame) -> ComplexModule:
    ux, uy = increasing_sets(F.X), increasing_sets(F.Y)
    try:
        f = [[ux.index[raw_fusion(F, U, V)] for V in uy.sets] for U in ux.sets]
        i = [[ux.index[raw_implication(F, V, U)] for U in ux.sets] for V in uy.sets]
    except KeyError:
        bad = closure_violation(F)
        raise ClosureViolation("frame relations are not closed", relation=bad[0], witness=bad[1])
    return ComplexModule(validate_module(ux.lattice, uy.lattice, f, i), ux, uy)


def complex_module(F: FiFrame) -> FidlModule:
    """The module of increasing sets of X and Y with fusion and implication read off R and T."""
    return complex_structure(F).module


# -- canonical frame -------------------------------------------------------

@lru_cache(maxsize=256)
def canonical_frame(M: FidlModule) -> FiFrame:
    """Spectra of A and B with (Q,R,P) in R iff f(Q,R) <= P and (R,P,Q) in T iff i(R,P) <= Q."""
    SA, SB = spectrum(M.A), spectrum(M.B)
    R, T = set(), set()
    for q, Q in enumerate(SA.primes):
        for r, Rb in enumerate(SB.primes):
            img = fusion_image(M, Q, Rb)
            for p, P in enumerate(SA.primes):
                if img & ~P == 0:
                    R.add((q, r, p))
    for r, Rb in enumerate(SB.primes):
        for p, P in enumerate(SA.primes):
            img = implication_image(M, Rb, P)
            for q, Q in enumerate(SA.primes):
                if img & ~Q == 0:
                    T.add((r, p, q))
    return FiFrame(SA.order, SB.order, frozenset(R), frozenset(T))


# -- FI-morphisms ----------------------------------------------------------

@dataclass(frozen=True)
class FiMorphism:
    source: FiFrame = field(repr=False)
    target: FiFrame = field(repr=False)
    g: tuple
    h: tuple


def fi_morphism_violation(F: FiFrame, G: FiFrame, g: Sequence[int], h: Sequence[int]):
    """First failed condition as (name, witness dict), or None."""
    w = F.X.is_monotone_map(G.X, g)
    if w is not None:
        return "monotone", {"sort": "X", "pair": list(w)}
    w = F.Y.is_monotone_map(G.Y, h)
    if w is not None:
        return "monotone", {"sort": "Y", "pair": list(w)}
    for x, y, z in sorted(F.R):
        if (g[x], h[y], g[z]) not in G.R:
            return "M1", {"triple": [x, y, z]}
    for z in range(len(F.X)):
        preimages = F.r_sources.get(z, [])
        for xb, yb, zb in sorted(G.R):
            if zb != g[z]:
                continue
            if not any(G.X.leq(xb, g[x]) and G.Y.leq(yb, h[y]) for x, y in preimages):
                return "M2", {"z": z, "target_triple": [xb, yb, zb]}
    for y, x, z in sorted(F.T):
        if (h[y], g[x], g[z]) not in G.T:
            return "N1", {"triple": [y, x, z]}
    for x in range(len(F.X)):
        preimages = F.t_by_middle.get(x, [])
        for yb, xb, zb in sorted(G.T):
            if xb != g[x]:
                continue
            if not any(G.Y.leq(yb, h[y]) and G.X.leq(g[z], zb) for y, z in preimages):
                return "N2", {"x": x, "target_triple": [yb, xb, zb]}
    return None


def validate_fi_morphism(F: FiFrame, G: FiFrame, g: Sequence[int], h: Sequence[int]) -> FiMorphism:
    if len(g) != len(F.X) or any(not 0 <= v < len(G.X) for v in g):
        raise MalformedInput("g must map X into the target X")
    if len(h) != len(F.Y) or any(not 0 <= v < len(G.Y) for v in h):
        raise MalformedInput("h must map Y into the target Y")
    bad = fi_morphism_violation(F, G, g, h)
    if bad is not None:
        name, w = bad
        raise ConditionViolation(f"FI-morphism condition {name} fails", condition=name, **w)
    return FiMorphism(F, G, tuple(g), tuple(h))


def compose_fi(first: FiMorphism, second: FiMorphism) -> FiMorphism:
    """``second`` after ``first``."""
    return FiMorphism(
        first.source,
        second.target,
        tuple(second.g[v] for v in first.g),
        tuple(second.h[v] for v in first.h),
    )


def identity_fi(F: FiFrame) -> FiMorphism:
    return FiMorphism(F, F, tuple(range(len(F.X))), tuple(range(len(F.Y))))


# -- dualities -------------------------------------------------------------

def _preimage_index(S, phi, target_mask) -> int:
    pre = mask_of(a for a, v in enumerate(phi) if (target_mask >> v) & 1)
    return S.index[pre]


def dual_of_hom(hom: FidlHomomorphism) -> FiMorphism:
    """Preimage maps between canonical frames, in the reverse direction."""
    M, N = hom.source, hom.target
    SA, SB = spectrum(M.A), spectrum(M.B)
    g = [_preimage_index(SA, hom.alpha, P) for P in spectrum(N.A).primes]
    h = [_preimage_index(SB, hom.gamma, R) for R in spectrum(N.B).primes]
    return validate_fi_morphism(canonical_frame(N), canonical_frame(M), g, h)


def dual_of_fi_morphism(m: FiMorphism) -> FidlHomomorphism:
    """Preimage maps between complex modules, in the reverse direction."""
    src, tgt = complex_structure(m.target), complex_structure(m.source)
    alpha = [_preimage_index(tgt.upsets_x, m.g, U) for U in src.upsets_x.sets]
    gamma = [_preimage_index(tgt.upsets_y, m.h, V) for V in src.upsets_y.sets]
    return validate_hom(src.module, tgt.module, alpha, gamma)


def transpose_to_hom(F: FiFrame, M: FidlModule, g: Sequence[int], h: Sequence[int]) -> FidlHomomorphism:
    """Lattice maps a -> {x : a in g(x)} for an FI-morphism (g, h) from F to the canonical frame of M."""
    validate_fi_morphism(F, canonical_frame(M), g, h)
    C = complex_structure(F)
    SA, SB = spectrum(M.A), spectrum(M.B)
    alpha = [
        C.upsets_x.index[mask_of(x for x in range(len(F.X)) if (SA.primes[g[x]] >> a) & 1)]
        for a in range(M.A.size)
    ]
    gamma = [
        C.upsets_y.index[mask_of(y for y in range(len(F.Y)) if (SB.primes[h[y]] >> b) & 1)]
        for b in range(M.B.size)
    ]
    return validate_hom(M, C.module, alpha, gamma)


@dataclass(frozen=True)
class IsoReport:
    morphism: object
    inverse: object
    iso: bool
    reason: str | None = None


def _invert(phi: Sequence[int], n: int):
    inv = [None] * n
    for a, v in enumerate(phi):
        if inv[v] is not None:
            return None, {"collision": [inv[v], a]}
        inv[v] = a
    if None in inv:
        return None, {"missed": inv.index(None)}
    return inv, None


def representation_iso(M: FidlModule) -> IsoReport:
    """(beta_A, beta_B) from M to the complex module of its canonical frame."""
    C = complex_structure(canonical_frame(M))
    SA, SB = spectrum(M.A), spectrum(M.B)
    alpha = [C.upsets_x.index[SA.beta(a)] for a in range(M.A.size)]
    gamma = [C.upsets_y.index[SB.beta(b)] for b in range(M.B.size)]
    hom = validate_hom(M, C.module, alpha, gamma)
    ia, wa = _invert(alpha, C.module.A.size)
    ig, wg = _invert(gamma, C.module.B.size)
    if ia is None or ig is None:
        return IsoReport(hom, None, False, f"not bijective: {wa or wg}")
    inverse = validate_hom(C.module, M, ia, ig)
    return IsoReport(hom, inverse, True)


def counit_iso(F: FiFrame) -> IsoReport:
    """(eps_X, eps_Y) sending a point to the prime filter of increasing sets containing it."""
    C = complex_structure(F)
    G = canonical_frame(C.module)
    SA, SB = spectrum(C.module.A), spectrum(C.module.B)

    def eps(P: Poset, ups: IncreasingSetLattice, S):
        return [
            S.index[mask_of(k for k, U in enumerate(ups.sets) if (U >> p) & 1)]
            for p in range(len(P))
        ]

    g = eps(F.X, C.upsets_x, SA)
    h = eps(F.Y, C.upsets_y, SB)
    m = validate_fi_morphism(F, G, g, h)
    ig, wg = _invert(g, len(G.X))
    ih, wh = _invert(h, len(G.Y))
    if ig is None or ih is None:
        return IsoReport(m, None, False, f"not bijective: {wg or wh}")
    for P, Q, phi, inv in ((F.X, G.X, g, ig), (F.Y, G.Y, h, ih)):
        if P.is_monotone_map(Q, phi) is not None or Q.is_monotone_map(P, inv) is not None:
            return IsoReport(m, None, False, "not an order isomorphism")
    inverse = validate_fi_morphism(G, F, ig, ih)
    return IsoReport(m, inverse, True)


# -- finite Urquhart conditions --------------------------------------------

URQUHART_CONDITIONS = (
    "priestley_spaces",
    "relation_sorts",
    "operations_increasing",
    "fusion_converse",
    "implication_converse",
)
URQUHART_READING = "f and i on filters of increasing sets read as filter extensions of the complex module"


@dataclass(frozen=True)
class UrquhartReport:
    results: dict
    reading: str = URQUHART_READING

    @property
    def passed(self) -> bool:
        return all(r["pass"] for r in self.results.values())

    def to_json(self):
        return {"conditions": self.results, "reading": self.reading, "pass": self.passed}


def _poset_ok(P: Poset):
    n = len(P)
    for a in range(n):
        if not (P.up[a] >> a) & 1:
            return {"law": "reflexive", "witness": [a]}
        for b in bits(P.up[a] & ~(1 << a)):
            if (P.up[b] >> a) & 1:
                return {"law": "antisymmetric", "witness": [a, b]}
            if P.up[b] & ~P.up[a]:
                return {"law": "transitive", "witness": [a, b]}
    return None


def urquhart_check(F: FiFrame) -> UrquhartReport:
    """The five conditions on a finite discrete bi-space with relations.

    Operations are evaluated on raw masks, so frames whose relations are not
    closed can fail the converse conditions.
    """
    res = {}
    bad = _poset_ok(F.X) or _poset_ok(F.Y)
    res["priestley_spaces"] = {"pass": bad is None, "witness": bad}

    nx, ny = len(F.X), len(F.Y)
    bad = next(
        ([n, *t] for n, rel, sz in (("R", F.R, (nx, ny, nx)), ("T", F.T, (ny, nx, nx)))
         for t in sorted(rel) if any(not 0 <= v < s for v, s in zip(t, sz))),
        None,
    )
    res["relation_sorts"] = {"pass": bad is None, "witness": bad}
    if bad is not None:
        for name in URQUHART_CONDITIONS[2:]:
            res[name] = {"pass": False, "witness": "skipped: relation sorts"}
        return UrquhartReport(res)

    ux, uy = increasing_sets(F.X), increasing_sets(F.Y)
    fus = {(U, V): raw_fusion(F, U, V) for U in ux.sets for V in uy.sets}
    imp = {(V, U): raw_implication(F, V, U) for V in uy.sets for U in ux.sets}
    bad = next(
        ({"op": op, "args": [set_, other]}
         for op, table in (("f", fus), ("i", imp))
         for (set_, other), w in sorted(table.items()) if not F.X.is_increasing(w)),
        None,
    )
    res["operations_increasing"] = {"pass": bad is None, "witness": bad}

    # eps(p) as a mask over the increasing sets containing p
    def eps(ups, p):
        return mask_of(k for k, U in enumerate(ups.sets) if (U >> p) & 1)

    def f_ext(Gm, Hm):
        out = 0
        for a in bits(Gm):
            for b in bits(Hm):
                w = fus[ux.sets[a], uy.sets[b]]
                out |= mask_of(k for k, W in enumerate(ux.sets) if w & ~W == 0)
        return out

    def i_ext(Hm, Gm):
        out = 0
        for k, W in enumerate(ux.sets):
            if any(ux.sets[a] & ~imp[uy.sets[b], W] == 0 for b in bits(Hm) for a in bits(Gm)):
                out |= 1 << k
        return out

    bad = None
    for y in range(nx):
        for x in range(ny):
            ext = f_ext(eps(ux, y), eps(uy, x))
            for z in range(nx):
                if ext & ~eps(ux, z) == 0 and (y, x, z) not in F.R:
                    bad = bad or {"triple": [y, x, z]}
    res["fusion_converse"] = {"pass": bad is None, "witness": bad}

    bad = None
    for x in range(ny):
        for y in range(nx):
            ext = i_ext(eps(uy, x), eps(ux, y))
            for z in range(nx):
                if ext & ~eps(ux, z) == 0 and (x, y, z) not in F.T:
                    bad = bad or {"triple": [x, y, z]}
    res["implication_converse"] = {"pass": bad is None, "witness": bad}
    return UrquhartReport(res)
