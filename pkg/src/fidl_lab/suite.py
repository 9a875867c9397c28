"""Property suite run over a module: every construction is recomputed and
its guaranteed properties are checked exhaustively.

Each check returns ``None`` on success or a JSON-able witness. Checks that
would exceed a size budget report ``"skipped"``.
"""
from __future__ import annotations

from .congruences import (
    anti_isomorphism_check,
    classify,
    closure_strongly_closed,
    enumerate_strongly_closed,
    verdict_from_congruences,
)
from .errors import BudgetExceeded, FidlError
from .fidl import (
    FUSION,
    IMPLICATION,
    FidlModule,
    axiom_violations,
    extend_to_primes,
    filter_extension,
    membership_check,
    monotonicity_violation,
)
from .frames import (
    canonical_frame,
    closure_violation,
    complex_module,
    counit_iso,
    representation_iso,
    urquhart_check,
)
from .order import enumerate_filters, spectrum

# properties whose failure means a bug or a false claim; diagnostics are separate
HARD = (
    "axioms",
    "monotonicity",
    "filter_extensions",
    "prime_extension",
    "membership",
    "canonical_frame_closed",
    "complex_module_valid",
    "representation",
    "frame_roundtrip",
    "urquhart",
    "anti_isomorphism",
    "closure",
    "classification",
)

PRIME_EXTENSION_LIMITS = (6, 4)


def check_filter_extensions(M: FidlModule):
    """Every extension is a filter and is monotone in both arguments."""
    FA, FB = enumerate_filters(M.A), enumerate_filters(M.B)
    for mode in (FUSION, IMPLICATION):
        table = {}
        for G in FA:
            for H in FB:
                try:
                    table[G, H] = filter_extension(M, mode, G, H).result
                except AssertionError:
                    return {"mode": mode, "G": G, "H": H, "reason": "not a filter"}
        for (G, H), res in table.items():
            for (G2, H2), res2 in table.items():
                if G & ~G2 == 0 and H & ~H2 == 0 and res & ~res2:
                    return {"mode": mode, "G": G, "H": H, "G2": G2, "H2": H2, "reason": "not monotone"}
    return None


def check_prime_extension(M: FidlModule):
    """Every (G, H, P) meeting the hypothesis has a prime witness; returns (checked, failure)."""
    checked = 0
    for mode in (FUSION, IMPLICATION):
        for G in enumerate_filters(M.A):
            for H in enumerate_filters(M.B):
                ext = filter_extension(M, mode, G, H).result
                for P in spectrum(M.A).primes:
                    if ext & ~P:
                        continue
                    checked += 1
                    if extend_to_primes(M, mode, G, H, P) is None:
                        return checked, {"mode": mode, "G": G, "H": H, "P": P}
    return checked, None


def check_membership(M: FidlModule):
    for x in range(M.A.size):
        for b in range(M.B.size):
            for P in spectrum(M.A).primes:
                rep = membership_check(M, x, b, P)
                if not rep.agrees:
                    return {"x": x, "b": b, "P": P}
    return None


def check_closure(F):
    """closure_strongly_closed(seed) is the least enumerated pair above every seed."""
    closed = enumerate_strongly_closed(F)
    for s1 in range(1 << len(F.X)):
        for s2 in range(1 << len(F.Y)):
            above = [z for z in closed if s1 & ~z.Z1 == 0 and s2 & ~z.Z2 == 0]
            least = [z for z in above if all(z.leq(w) for w in above)]
            got = closure_strongly_closed(F, s1, s2)
            if len(least) != 1 or (got.Z1, got.Z2) != (least[0].Z1, least[0].Z2):
                return {"seed": [s1, s2], "closure": [got.Z1, got.Z2]}
    return None


def run_module_suite(M: FidlModule) -> dict:
    """Results keyed by property name: "pass", "skipped", or a failure record."""
    out = {}

    def record(name, fn):
        try:
            w = fn()
        except BudgetExceeded:
            out[name] = "skipped"
            return
        except FidlError as e:
            w = e.to_json()
        out[name] = "pass" if w is None else {"fail": w}

    record("axioms", lambda: axiom_violations(M.A, M.B, M.f, M.i) or None)
    record("monotonicity", lambda: monotonicity_violation(M))
    record("filter_extensions", lambda: check_filter_extensions(M))

    def prime_ext():
        la, lb = PRIME_EXTENSION_LIMITS
        if M.A.size > la or M.B.size > lb:
            raise BudgetExceeded("prime extension check limited to small modules")
        return check_prime_extension(M)[1]

    record("prime_extension", prime_ext)
    record("membership", lambda: check_membership(M))
    F = canonical_frame(M)
    record("canonical_frame_closed", lambda: closure_violation(F))

    def cm():
        complex_module(F)

    record("complex_module_valid", cm)
    record("representation", lambda: None if representation_iso(M).iso else {"iso": False})
    record("frame_roundtrip", lambda: None if counit_iso(F).iso else {"iso": False})
    record("urquhart", lambda: None if urquhart_check(F).passed else urquhart_check(F).to_json())

    def anti():
        rep = anti_isomorphism_check(M)
        return None if rep.ok else rep.to_json()

    record("anti_isomorphism", anti)
    record("closure", lambda: check_closure(F))

    diagnostics = []

    def cls():
        c = classify(M)
        diagnostics.extend({"criterion": d["criterion"], "predicted": d["predicted"], "verdict": d["verdict"]}
                           for d in c.discrepancies)
        out["verdict"] = c.verdict
        if c.verdict != verdict_from_congruences(M, list(c.congruences)):
            return {"verdict": c.verdict}
        return None

    record("classification", cls)
    out["diagnostics"] = diagnostics
    return out


def hard_failures(result: dict) -> list:
    return [k for k in HARD if isinstance(result.get(k), dict)]
