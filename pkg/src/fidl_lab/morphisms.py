"""Homomorphisms, subalgebras and subdirect embeddings of FIDL-modules."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    CarrierNotSublattice,
    MalformedInput,
    NotLatticeHom,
    SquareViolation,
    TargetMismatch,
)
from .fidl import FidlModule, product_module
from .order import FiniteLattice, bits, lattice_hom_violation, mask_of, spectrum


@dataclass(frozen=True)
class FidlHomomorphism:
    source: FidlModule = field(repr=False)
    target: FidlModule = field(repr=False)
    alpha: tuple
    gamma: tuple


def square_violation(M: FidlModule, N: FidlModule, alpha, gamma):
    for x in range(M.A.size):
        for b in range(M.B.size):
            if alpha[M.f[x][b]] != N.f[alpha[x]][gamma[b]]:
                return {"square": "fusion", "x": x, "b": b}
    for b in range(M.B.size):
        for x in range(M.A.size):
            if alpha[M.i[b][x]] != N.i[gamma[b]][alpha[x]]:
                return {"square": "implication", "b": b, "x": x}
    return None


def validate_hom(src: FidlModule, tgt: FidlModule, alpha: Sequence[int], gamma: Sequence[int]) -> FidlHomomorphism:
    if len(alpha) != src.A.size or any(not 0 <= v < tgt.A.size for v in alpha):
        raise MalformedInput("alpha must map A into the target A")
    if len(gamma) != src.B.size or any(not 0 <= v < tgt.B.size for v in gamma):
        raise MalformedInput("gamma must map B into the target B")
    for side, L, K, phi in (("A", src.A, tgt.A, alpha), ("B", src.B, tgt.B, gamma)):
        bad = lattice_hom_violation(L, K, phi)
        if bad is not None:
            raise NotLatticeHom(f"map on {side} is not a lattice homomorphism", side=side, **bad)
    bad = square_violation(src, tgt, alpha, gamma)
    if bad is not None:
        raise SquareViolation(f"{bad['square']} square does not commute", **bad)
    return FidlHomomorphism(src, tgt, tuple(alpha), tuple(gamma))


def identity_hom(M: FidlModule) -> FidlHomomorphism:
    return FidlHomomorphism(M, M, tuple(range(M.A.size)), tuple(range(M.B.size)))


def compose(first: FidlHomomorphism, second: FidlHomomorphism) -> FidlHomomorphism:
    """``second`` after ``first``."""
    if first.target != second.source:
        raise TargetMismatch("homomorphisms are not composable")
    return FidlHomomorphism(
        first.source,
        second.target,
        tuple(second.alpha[v] for v in first.alpha),
        tuple(second.gamma[v] for v in first.gamma),
    )


def is_injective(phi: Sequence[int]) -> bool:
    return len(set(phi)) == len(phi)


def is_surjective(phi: Sequence[int], n: int) -> bool:
    return set(phi) == set(range(n))


def is_iso(hom: FidlHomomorphism):
    """(True, inverse) when both maps are bijective, else (False, None)."""
    M, N = hom.source, hom.target
    if not (is_injective(hom.alpha) and is_surjective(hom.alpha, N.A.size)
            and is_injective(hom.gamma) and is_surjective(hom.gamma, N.B.size)):
        return False, None
    ia = [0] * N.A.size
    for a, v in enumerate(hom.alpha):
        ia[v] = a
    ig = [0] * N.B.size
    for b, v in enumerate(hom.gamma):
        ig[v] = b
    return True, validate_hom(N, M, ia, ig)


# -- subalgebras -----------------------------------------------------------

@dataclass(frozen=True)
class SubalgebraCandidate:
    host: FidlModule = field(repr=False)
    carrier_a: int
    carrier_b: int


def sublattice_violation(L: FiniteLattice, S: int):
    if not (S >> L.bottom) & 1:
        return {"law": "bottom"}
    if not (S >> L.top) & 1:
        return {"law": "top"}
    members = list(bits(S))
    for a in members:
        for b in members:
            if not (S >> L.meet[a][b]) & 1:
                return {"law": "meet", "x": a, "y": b}
            if not (S >> L.join[a][b]) & 1:
                return {"law": "join", "x": a, "y": b}
    return None


def sublattice_closure(L: FiniteLattice, S: int) -> int:
    S |= 1 << L.bottom | 1 << L.top
    while True:
        members = list(bits(S))
        grown = S
        for a in members:
            for b in members:
                grown |= 1 << L.meet[a][b] | 1 << L.join[a][b]
        if grown == S:
            return S
        S = grown


def subalgebra_candidate(M: FidlModule, carrier_a, carrier_b) -> SubalgebraCandidate:
    """Build a candidate from index lists or masks, checking both are bounded sublattices."""
    ca = carrier_a if isinstance(carrier_a, int) else mask_of(carrier_a)
    cb = carrier_b if isinstance(carrier_b, int) else mask_of(carrier_b)
    if ca >> M.A.size or cb >> M.B.size:
        raise MalformedInput("carrier index out of range")
    for side, L, S in (("A", M.A, ca), ("B", M.B, cb)):
        bad = sublattice_violation(L, S)
        if bad is not None:
            raise CarrierNotSublattice(f"carrier of {side} is not a bounded sublattice", side=side, **bad)
    return SubalgebraCandidate(M, ca, cb)


@dataclass(frozen=True)
class SubalgebraVerdict:
    fusion_closed: bool
    implication_closed: bool
    fusion_witness: object = None
    implication_witness: object = None

    @property
    def is_subalgebra(self) -> bool:
        return self.fusion_closed and self.implication_closed


def validate_subalgebra_direct(c: SubalgebraCandidate) -> SubalgebraVerdict:
    """Check that f and i map the carriers back into the carrier of A."""
    M, SA, SB = c.host, c.carrier_a, c.carrier_b
    fw = next(
        ({"x": x, "b": b} for x in bits(SA) for b in bits(SB) if not (SA >> M.f[x][b]) & 1), None
    )
    iw = next(
        ({"b": b, "x": x} for b in bits(SB) for x in bits(SA) if not (SA >> M.i[b][x]) & 1), None
    )
    return SubalgebraVerdict(fw is None, iw is None, fw, iw)


def validate_subalgebra_relational(c: SubalgebraCandidate) -> SubalgebraVerdict:
    """Decide the same question by quantifying over the canonical frame.

    Fusion: for all primes P, Q, Q1 of A and R1 of B with (Q1, R1, P) in R and
    P meet carrier contained in Q, some (Q2, R2, Q) in R has Q1 and R1 meet
    carrier inside Q2, R2.
    Implication: for (R1, Q, Q1) in T and P meet carrier inside Q, some
    (R2, P, Q2) in T has Q2 meet carrier inside Q1 and R1 meet carrier inside R2.
    """
    from .frames import canonical_frame

    M, CA, CB = c.host, c.carrier_a, c.carrier_b
    F = canonical_frame(M)
    XA, XB = spectrum(M.A).primes, spectrum(M.B).primes
    nA, nB = range(len(XA)), range(len(XB))

    def below(S1, S2, carrier):
        return S1 & carrier & ~S2 == 0

    fw = None
    for q1, r1, p in sorted(F.R):
        for q in nA:
            if not below(XA[p], XA[q], CA):
                continue
            if not any(
                (q2, r2, q) in F.R and below(XA[q1], XA[q2], CA) and below(XB[r1], XB[r2], CB)
                for q2 in nA for r2 in nB
            ):
                fw = {"P": p, "Q": q, "Q1": q1, "R1": r1}
                break
        if fw:
            break

    iw = None
    for r1, q, q1 in sorted(F.T):
        for p in nA:
            if not below(XA[p], XA[q], CA):
                continue
            if not any(
                (r2, p, q2) in F.T and below(XA[q2], XA[q1], CA) and below(XB[r1], XB[r2], CB)
                for q2 in nA for r2 in nB
            ):
                iw = {"P": p, "Q": q, "Q1": q1, "R1": r1}
                break
        if iw:
            break
    return SubalgebraVerdict(fw is None, iw is None, fw, iw)


# -- subdirect embeddings --------------------------------------------------

@dataclass(frozen=True)
class SubdirectVerdict:
    injective: bool
    onto_factors: tuple

    @property
    def is_subdirect(self) -> bool:
        return self.injective and all(self.onto_factors)


def check_subdirect_embedding(M: FidlModule, factors, hom: FidlHomomorphism) -> SubdirectVerdict:
    P, projections = product_module(list(factors))
    if hom.source != M or hom.target != P:
        raise TargetMismatch("homomorphism does not run from M into the product of the factors")
    injective = is_injective(hom.alpha) and is_injective(hom.gamma)
    onto = tuple(
        is_surjective([pa[v] for v in hom.alpha], N.A.size)
        and is_surjective([pb[v] for v in hom.gamma], N.B.size)
        for N, (pa, pb) in zip(factors, projections)
    )
    return SubdirectVerdict(injective, onto)
