"""Congruences of FIDL-modules and their dual description by closed pairs.

A congruence is a pair of partitions ``(thetaA, thetaB)`` (see order.py for
the partition encoding). A closed pair is a pair of masks ``(Z1, Z2)`` over the
two sorts of a frame.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import budget
from .errors import NotStronglyClosed, PropertyFailure
from .fidl import FidlModule
from .frames import FiFrame, canonical_frame
from .order import (
    bits,
    enumerate_partitions,
    identity_partition,
    is_lattice_congruence,
    lattice_congruences_spectral,
    partition_leq,
    theta_from_closed,
    total_partition,
)

FUSION_ONLY = "fusion"
IMPLICATION_ONLY = "implication"
BOTH = "both"
WHICH = (FUSION_ONLY, IMPLICATION_ONLY, BOTH)

VERDICTS = ("trivial", "simple", "subdirectly_irreducible_not_simple", "not_SI")


@dataclass(frozen=True, order=True)
class FidlCongruence:
    thetaA: tuple
    thetaB: tuple

    def leq(self, other: "FidlCongruence") -> bool:
        return partition_leq(self.thetaA, other.thetaA) and partition_leq(self.thetaB, other.thetaB)


# -- compatibility ---------------------------------------------------------

def fusion_compatible(M: FidlModule, pa, pb) -> bool:
    """C1 checked one argument at a time; transitivity gives the rest."""
    f = M.f
    nA, nB = M.A.size, M.B.size
    for a in range(nA):
        for c in range(a + 1, nA):
            if pa[a] == pa[c] and any(pa[f[a][b]] != pa[f[c][b]] for b in range(nB)):
                return False
    for b in range(nB):
        for d in range(b + 1, nB):
            if pb[b] == pb[d] and any(pa[f[a][b]] != pa[f[a][d]] for a in range(nA)):
                return False
    return True


def implication_compatible(M: FidlModule, pa, pb) -> bool:
    i = M.i
    nA, nB = M.A.size, M.B.size
    for a in range(nA):
        for c in range(a + 1, nA):
            if pa[a] == pa[c] and any(pa[i[b][a]] != pa[i[b][c]] for b in range(nB)):
                return False
    for b in range(nB):
        for d in range(b + 1, nB):
            if pb[b] == pb[d] and any(pa[i[b][a]] != pa[i[d][a]] for a in range(nA)):
                return False
    return True


def compatibility_witness(M: FidlModule, pa, pb, which=BOTH):
    """Literal check over all (a, c) in thetaA and (b, d) in thetaB; first failure or None."""
    nA, nB = M.A.size, M.B.size
    pairs_a = [(a, c) for a in range(nA) for c in range(nA) if pa[a] == pa[c]]
    pairs_b = [(b, d) for b in range(nB) for d in range(nB) if pb[b] == pb[d]]
    for a, c in pairs_a:
        for b, d in pairs_b:
            if which != IMPLICATION_ONLY and pa[M.f[a][b]] != pa[M.f[c][d]]:
                return {"condition": "C1", "a": a, "c": c, "b": b, "d": d}
            if which != FUSION_ONLY and pa[M.i[b][a]] != pa[M.i[d][c]]:
                return {"condition": "C2", "a": a, "c": c, "b": b, "d": d}
    return None


def _compatible(M, pa, pb, which):
    if which != IMPLICATION_ONLY and not fusion_compatible(M, pa, pb):
        return False
    if which != FUSION_ONLY and not implication_compatible(M, pa, pb):
        return False
    return True


def enumerate_congruences_oracle(M: FidlModule, which: str = BOTH, method: str = "partition") -> list:
    """All congruence pairs of M compatible with f, i, or both, sorted.

    ``partition`` scans every partition of each carrier; ``spectral`` obtains
    the lattice congruences of each sort from subsets of its spectrum.
    """
    if which not in WHICH:
        raise ValueError(f"unknown compatibility {which!r}")
    if method == "partition":
        budget.require("partition_a", M.A.size, "|A| for the partition oracle")
        budget.require("partition_b", M.B.size, "|B| for the partition oracle")
        ca = [p for p in enumerate_partitions(M.A.size) if is_lattice_congruence(M.A, p)]
        cb = [p for p in enumerate_partitions(M.B.size) if is_lattice_congruence(M.B, p)]
    elif method == "spectral":
        ca = lattice_congruences_spectral(M.A)
        cb = lattice_congruences_spectral(M.B)
    else:
        raise ValueError(f"unknown method {method!r}")
    return sorted(FidlCongruence(pa, pb) for pa in ca for pb in cb if _compatible(M, pa, pb, which))


# -- neighbourhood sets ----------------------------------------------------
#
# Maximality and minimality are taken inside the fibre being described (the
# set of x with (x, y, z) in R, and so on).

def r1(F: FiFrame, y: int, z: int) -> int:
    return F.X.maximal(_mask(x for x in range(len(F.X)) if (x, y, z) in F.R))


def r2(F: FiFrame, x: int, z: int) -> int:
    return F.Y.maximal(_mask(y for y in range(len(F.Y)) if (x, y, z) in F.R))


def t1(F: FiFrame, x: int, z: int) -> int:
    return F.Y.maximal(_mask(y for y in range(len(F.Y)) if (y, x, z) in F.T))


def t3(F: FiFrame, y: int, x: int) -> int:
    return F.X.minimal(F.t_image(y, x))


def _mask(it) -> int:
    m = 0
    for k in it:
        m |= 1 << k
    return m


def max_r_inverse(F: FiFrame, z: int) -> list:
    """Pairs (x, y) with x in r1(y, z) and y in r2(x, z)."""
    return [
        (x, y) for x, y in F.r_sources.get(z, [])
        if (r1(F, y, z) >> x) & 1 and (r2(F, x, z) >> y) & 1
    ]


def d_set(F: FiFrame, x: int) -> list:
    """Pairs (y, z) with y in t1(x, z) and z in t3(y, x)."""
    return [
        (y, z) for y, z in F.t_by_middle.get(x, [])
        if (t1(F, x, z) >> y) & 1 and (t3(F, y, x) >> z) & 1
    ]


@dataclass(frozen=True)
class _Requirements:
    # for z in Z1, Z1 must contain r_x[z] and Z2 must contain r_y[z]
    r_x: tuple
    r_y: tuple
    # for x in Z1, Z2 must contain t_y[x] and Z1 must contain t_z[x]
    t_y: tuple
    t_z: tuple


@lru_cache(maxsize=256)
def _requirements(F: FiFrame) -> _Requirements:
    rx, ry, ty, tz = [], [], [], []
    for p in range(len(F.X)):
        pairs = max_r_inverse(F, p)
        rx.append(_mask(x for x, _ in pairs))
        ry.append(_mask(y for _, y in pairs))
        pairs = d_set(F, p)
        ty.append(_mask(y for y, _ in pairs))
        tz.append(_mask(z for _, z in pairs))
    return _Requirements(tuple(rx), tuple(ry), tuple(ty), tuple(tz))


def is_r_closed(F: FiFrame, Z1: int, Z2: int) -> bool:
    q = _requirements(F)
    return all(q.r_x[z] & ~Z1 == 0 and q.r_y[z] & ~Z2 == 0 for z in bits(Z1))


def is_t_closed(F: FiFrame, Z1: int, Z2: int) -> bool:
    q = _requirements(F)
    return all(q.t_z[x] & ~Z1 == 0 and q.t_y[x] & ~Z2 == 0 for x in bits(Z1))


@dataclass(frozen=True, order=True)
class ClosedPair:
    Z1: int
    Z2: int
    r_closed: bool
    t_closed: bool

    @property
    def strongly_closed(self) -> bool:
        return self.r_closed and self.t_closed

    def leq(self, other: "ClosedPair") -> bool:
        return self.Z1 & ~other.Z1 == 0 and self.Z2 & ~other.Z2 == 0


def closed_pair(F: FiFrame, Z1: int, Z2: int) -> ClosedPair:
    return ClosedPair(Z1, Z2, is_r_closed(F, Z1, Z2), is_t_closed(F, Z1, Z2))


def enumerate_closed_pairs(F: FiFrame, which: str = BOTH) -> list:
    """Every (Z1, Z2) that is R-closed, T-closed, or both, in (Z1, Z2) mask order."""
    nx, ny = len(F.X), len(F.Y)
    budget.require("closed_pairs", nx + ny, "|X| + |Y| for closed-pair enumeration")
    keep_r, keep_t = which != IMPLICATION_ONLY, which != FUSION_ONLY
    out = []
    for Z1 in range(1 << nx):
        for Z2 in range(1 << ny):
            cp = closed_pair(F, Z1, Z2)
            if (not keep_r or cp.r_closed) and (not keep_t or cp.t_closed):
                out.append(cp)
    return out


def enumerate_strongly_closed(F: FiFrame) -> list:
    return enumerate_closed_pairs(F, BOTH)


def closure_strongly_closed(F: FiFrame, Z1: int, Z2: int) -> ClosedPair:
    """Least strongly closed pair containing (Z1, Z2), by fixpoint iteration."""
    budget.require("closed_pairs", len(F.X) + len(F.Y), "|X| + |Y| for closure")
    q = _requirements(F)
    while True:
        n1, n2 = Z1, Z2
        for p in bits(Z1):
            n1 |= q.r_x[p] | q.t_z[p]
            n2 |= q.r_y[p] | q.t_y[p]
        if (n1, n2) == (Z1, Z2):
            return closed_pair(F, Z1, Z2)
        Z1, Z2 = n1, n2


def theta_pair(M: FidlModule, Z: ClosedPair, F: FiFrame | None = None, which: str = BOTH) -> FidlCongruence:
    """(theta(Z1), theta(Z2)) for a closed pair of the canonical frame of M."""
    F = F or canonical_frame(M)
    Z = closed_pair(F, Z.Z1, Z.Z2)
    needs_r, needs_t = which != IMPLICATION_ONLY, which != FUSION_ONLY
    if (needs_r and not Z.r_closed) or (needs_t and not Z.t_closed):
        raise NotStronglyClosed(
            "pair is not closed", Z1=Z.Z1, Z2=Z.Z2, r_closed=Z.r_closed, t_closed=Z.t_closed
        )
    cong = FidlCongruence(theta_from_closed(M.A, Z.Z1), theta_from_closed(M.B, Z.Z2))
    bad = compatibility_witness(M, cong.thetaA, cong.thetaB, which)
    if bad is not None:
        raise PropertyFailure("closed pair yields an incompatible pair of congruences", Z1=Z.Z1, Z2=Z.Z2, **bad)
    return cong


# -- anti-isomorphism ------------------------------------------------------

@dataclass(frozen=True)
class PairingResult:
    which: str
    closed_count: int
    congruence_count: int
    bijective: bool
    order_reversing: bool
    problems: tuple

    @property
    def ok(self) -> bool:
        return self.bijective and self.order_reversing and not self.problems


@dataclass(frozen=True)
class AntiIsoReport:
    pairings: tuple
    oracles_agree: bool | None

    @property
    def ok(self) -> bool:
        return all(p.ok for p in self.pairings) and self.oracles_agree is not False

    def to_json(self):
        return {
            "ok": self.ok,
            "oraclesAgree": self.oracles_agree,
            "pairings": [
                {
                    "which": p.which,
                    "closedCount": p.closed_count,
                    "congruenceCount": p.congruence_count,
                    "bijective": p.bijective,
                    "orderReversing": p.order_reversing,
                    "problems": list(p.problems),
                }
                for p in self.pairings
            ],
        }


def pairing_check(M: FidlModule, which: str, F: FiFrame | None = None, method: str = "spectral") -> PairingResult:
    F = F or canonical_frame(M)
    closed = enumerate_closed_pairs(F, which)
    cons = enumerate_congruences_oracle(M, which, method)
    problems = []
    images = []
    for Z in closed:
        try:
            images.append(theta_pair(M, Z, F, which))
        except PropertyFailure as e:
            problems.append({"Z1": Z.Z1, "Z2": Z.Z2, "error": str(e)})
            images.append(None)
    con_set = set(cons)
    image_set = {c for c in images if c is not None}
    bijective = (
        not problems
        and len(image_set) == len(images)
        and image_set == con_set
    )
    for c in sorted(con_set - image_set):
        problems.append({"missed": [list(c.thetaA), list(c.thetaB)]})
    reversing = True
    if bijective:
        for Z, c in zip(closed, images):
            for W, d in zip(closed, images):
                if Z.leq(W) != d.leq(c):
                    reversing = False
                    problems.append({"order": [[Z.Z1, Z.Z2], [W.Z1, W.Z2]]})
                    break
            if not reversing:
                break
    else:
        reversing = False
    return PairingResult(which, len(closed), len(cons), bijective, reversing, tuple(problems))


def oracles_agree(M: FidlModule) -> bool:
    return all(
        enumerate_congruences_oracle(M, w, "partition") == enumerate_congruences_oracle(M, w, "spectral")
        for w in WHICH
    )


def anti_isomorphism_check(M: FidlModule, compare_oracles: bool | None = None) -> AntiIsoReport:
    """Check that theta maps R-closed, T-closed and strongly closed pairs
    bijectively and order-reversingly onto the matching congruence lists.

    The two congruence oracles are compared when the partition oracle is
    within budget (or when ``compare_oracles`` forces it).
    """
    F = canonical_frame(M)
    pairings = tuple(pairing_check(M, w, F) for w in WHICH)
    if compare_oracles is None:
        compare_oracles = (
            M.A.size <= budget.limit("partition_a") and M.B.size <= budget.limit("partition_b")
        )
    agree = oracles_agree(M) if compare_oracles else None
    return AntiIsoReport(pairings, agree)


# -- classification --------------------------------------------------------

def identity_congruence(M: FidlModule) -> FidlCongruence:
    return FidlCongruence(identity_partition(M.A.size), identity_partition(M.B.size))


def total_congruence(M: FidlModule) -> FidlCongruence:
    return FidlCongruence(total_partition(M.A.size), total_partition(M.B.size))


def verdict_from_congruences(M: FidlModule, cons: list) -> str:
    if M.is_trivial:
        return "trivial"
    if len(cons) == 2:
        return "simple"
    delta = identity_congruence(M)
    rest = [c for c in cons if c != delta]
    if any(all(c.leq(d) for d in rest) for c in rest):
        return "subdirectly_irreducible_not_simple"
    return "not_SI"


@dataclass(frozen=True)
class Classification:
    verdict: str
    congruences: tuple
    strongly_closed: tuple
    discrepancies: tuple

    @property
    def is_subdirectly_irreducible(self) -> bool:
        return self.verdict != "not_SI"

    def to_json(self):
        return {
            "verdict": self.verdict,
            "conLatticeSize": len(self.congruences),
            "stronglyClosedCount": len(self.strongly_closed),
            "discrepancies": list(self.discrepancies),
        }


def _discrepancy(M, F, cons, closed, criterion, predicted, verdict, pair):
    from .codec import encode_frame, encode_module, encode_congruence_lists

    return {
        "criterion": criterion,
        "predicted": predicted,
        "verdict": verdict,
        "pair": pair,
        "module": encode_module(M),
        "frame": encode_frame(F),
        **encode_congruence_lists(M, cons, closed),
    }


def classify(M: FidlModule, method: str = "spectral") -> Classification:
    """Verdict read off the congruence lattice, with the point-closure criteria as diagnostics.

    The diagnostics compare two spectral criteria with the verdict:
    ``point_closure_simplicity`` predicts "simple" when the least strongly
    closed pair above every point pair is the full pair;
    ``point_closure_subdirect_irreducibility`` predicts "SI but not simple"
    when the set of point pairs with full closure is nonempty and not all of
    X x Y. Disagreements are recorded, not raised.
    """
    cons = enumerate_congruences_oracle(M, BOTH, method)
    verdict = verdict_from_congruences(M, cons)
    if M.is_trivial:
        return Classification(verdict, tuple(cons), (), ())
    F = canonical_frame(M)
    closed = enumerate_strongly_closed(F)
    full1, full2 = (1 << len(F.X)) - 1, (1 << len(F.Y)) - 1
    extreme = {(0, 0), (full1, full2)}
    if (verdict == "simple") != ({(z.Z1, z.Z2) for z in closed} == extreme):
        raise PropertyFailure("simplicity does not match the strongly closed pairs", verdict=verdict)

    points = [(p, q) for p in range(len(F.X)) for q in range(len(F.Y))]
    full_closure = {
        (p, q) for p, q in points
        if (lambda z: (z.Z1, z.Z2) == (full1, full2))(closure_strongly_closed(F, 1 << p, 1 << q))
    }
    records = []
    predicted_simple = len(full_closure) == len(points)
    if predicted_simple != (verdict == "simple"):
        offending = next((z for z in closed if (z.Z1, z.Z2) not in extreme), None)
        records.append(_discrepancy(
            M, F, cons, closed, "point_closure_simplicity",
            "simple" if predicted_simple else "not_simple", verdict,
            None if offending is None else [offending.Z1, offending.Z2],
        ))
    predicted_si = bool(full_closure) and len(full_closure) != len(points)
    if predicted_si != (verdict == "subdirectly_irreducible_not_simple"):
        records.append(_discrepancy(
            M, F, cons, closed, "point_closure_subdirect_irreducibility",
            "subdirectly_irreducible_not_simple" if predicted_si else "other", verdict,
            sorted([p, q] for p, q in full_closure),
        ))
    return Classification(verdict, tuple(cons), tuple(closed), tuple(records))
