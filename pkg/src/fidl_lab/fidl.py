"""FIDL-modules: two lattices A, B with a fusion f: A x B -> A and an
implication i: B x A -> A.

Tables are indexed as ``f[x][b]`` and ``i[b][x]``. Filters are passed around
as bitmasks over the relevant carrier.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import budget
from .errors import (
    AxiomViolation,
    EmptyBase,
    NotAHomomorphism,
    PreconditionFailed,
    ShapeMismatch,
    SortMismatch,
)
from .order import (
    FiniteLattice,
    bits,
    chain,
    heyting_arrow,
    is_filter,
    lattice_hom_violation,
    product_coordinates,
    product_lattice,
    spectrum,
    trivial_lattice,
)

FUSION = "fusion"
IMPLICATION = "implication"
AXIOMS = ("F1", "F2", "F3", "F4", "I1", "I2", "I3")


@dataclass(frozen=True)
class FidlModule:
    A: FiniteLattice
    B: FiniteLattice
    f: tuple
    i: tuple

    @property
    def is_trivial(self) -> bool:
        return self.A.size == 1 and self.B.size == 1


def _check_shape(A, B, f, i):
    n, m = A.size, B.size
    if len(f) != n or any(len(row) != m for row in f):
        raise ShapeMismatch(f"f must be a {n}x{m} table", table="f")
    if len(i) != m or any(len(row) != n for row in i):
        raise ShapeMismatch(f"i must be a {m}x{n} table", table="i")
    for name, table in (("f", f), ("i", i)):
        for row in table:
            for v in row:
                if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
                    raise ShapeMismatch(f"{name} has an entry outside A", table=name, value=v)


def axiom_violations(A: FiniteLattice, B: FiniteLattice, f, i) -> list:
    """First witness for each violated axiom, in axiom order."""
    n, m = A.size, B.size
    aj, am, bj = A.join, A.meet, B.join
    out = []

    def first(name, gen):
        w = next(gen, None)
        if w is not None:
            out.append({"axiom": name, **w})

    first("F1", ({"x": x, "y": y, "b": b}
                 for x in range(n) for y in range(x + 1, n) for b in range(m)
                 if f[aj[x][y]][b] != aj[f[x][b]][f[y][b]]))
    first("F2", ({"x": x, "b": b, "c": c}
                 for x in range(n) for b in range(m) for c in range(b + 1, m)
                 if f[x][bj[b][c]] != aj[f[x][b]][f[x][c]]))
    first("F3", ({"b": b} for b in range(m) if f[A.bottom][b] != A.bottom))
    first("F4", ({"x": x} for x in range(n) if f[x][B.bottom] != A.bottom))
    first("I1", ({"b": b, "x": x, "y": y}
                 for b in range(m) for x in range(n) for y in range(x + 1, n)
                 if i[b][am[x][y]] != am[i[b][x]][i[b][y]]))
    first("I2", ({"b": b, "c": c, "x": x}
                 for b in range(m) for c in range(b + 1, m) for x in range(n)
                 if i[bj[b][c]][x] != am[i[b][x]][i[c][x]]))
    first("I3", ({"b": b} for b in range(m) if i[b][A.top] != A.top))
    return out


def validate_module(A: FiniteLattice, B: FiniteLattice, f: Sequence, i: Sequence) -> FidlModule:
    _check_shape(A, B, f, i)
    f = tuple(tuple(row) for row in f)
    i = tuple(tuple(row) for row in i)
    violations = axiom_violations(A, B, f, i)
    if violations:
        raise AxiomViolation(violations)
    return FidlModule(A, B, f, i)


def implication_bottom_holds(M: FidlModule) -> bool:
    """Whether i(0, x) = 1 for every x.

    The axioms do not force this, but the relational representation does:
    the complex module of any frame satisfies it, so a module failing it is
    not isomorphic to the complex module of its canonical frame.
    """
    return all(v == M.A.top for v in M.i[M.B.bottom])


def monotonicity_violation(M: FidlModule):
    """First (x, y, b, c) with x <= y, b <= c breaking f or i monotonicity."""
    A, B = M.A, M.B
    for x in range(A.size):
        for y in bits(A.up[x]):
            for b in range(B.size):
                for c in bits(B.up[b]):
                    if not A.leq(M.f[x][b], M.f[y][c]):
                        return {"op": "f", "x": x, "y": y, "b": b, "c": c}
                    if not A.leq(M.i[c][x], M.i[b][y]):
                        return {"op": "i", "x": x, "y": y, "b": b, "c": c}
    return None


def section_f(M: FidlModule, b: int) -> tuple:
    return tuple(M.f[x][b] for x in range(M.A.size))


def section_i(M: FidlModule, b: int) -> tuple:
    return tuple(M.i[b])


# -- filter extensions -----------------------------------------------------

@dataclass(frozen=True)
class FilterPairExtension:
    source: FidlModule = field(repr=False)
    mode: str
    G: int
    H: int
    result: int


def fusion_image(M: FidlModule, G: int, H: int) -> int:
    """{x : f(g, h) <= x for some g in G, h in H}."""
    out = 0
    for g in bits(G):
        row = M.f[g]
        for h in bits(H):
            out |= M.A.up[row[h]]
    return out


def implication_image(M: FidlModule, H: int, G: int) -> int:
    """{x : g <= i(h, x) for some h in H, g in G}."""
    down = M.A.down
    out = 0
    for x in range(M.A.size):
        for h in bits(H):
            if down[M.i[h][x]] & G:
                out |= 1 << x
                break
    return out


def filter_extension(M: FidlModule, mode: str, G: int, H: int) -> FilterPairExtension:
    """Extend the fusion or implication to a filter G of A and a filter H of B."""
    if mode == FUSION:
        result = fusion_image(M, G, H)
    elif mode == IMPLICATION:
        result = implication_image(M, H, G)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    assert is_filter(M.A, result), (mode, G, H, result)
    return FilterPairExtension(M, mode, G, H, result)


def extend_to_primes(M: FidlModule, mode: str, G: int, H: int, P: int):
    """Prime filters Q of A and R of B with G <= Q, H <= R whose extension lies in P.

    Raises PreconditionFailed unless the extension of (G, H) already lies in
    P. Returns the first pair (Q, R) in spectrum order, scanning Q in the
    outer loop, or None when no pair exists.
    """
    ext = filter_extension(M, mode, G, H).result
    if ext & ~P:
        raise PreconditionFailed(
            f"{mode} extension is not contained in P", mode=mode, G=G, H=H, P=P, extension=ext
        )
    image = fusion_image if mode == FUSION else (lambda M, Q, R: implication_image(M, R, Q))
    for Q in spectrum(M.A).primes:
        if G & ~Q:
            continue
        for R in spectrum(M.B).primes:
            if H & ~R:
                continue
            if image(M, Q, R) & ~P == 0:
                return Q, R
    return None


@dataclass(frozen=True)
class MembershipReport:
    fusion_member: bool
    fusion_related: bool
    fusion_witness: tuple | None
    impl_member: bool
    impl_related: bool
    impl_counterexample: tuple | None

    @property
    def agrees(self) -> bool:
        return self.fusion_member == self.fusion_related and self.impl_member == self.impl_related


def membership_check(M: FidlModule, x: int, b: int, P: int) -> MembershipReport:
    """Evaluate both sides of the two prime-membership equivalences.

    Left sides are table lookups. Right sides quantify over the relations of
    the canonical frame: f(x,b) in P iff some (Q,R,P) in R has x in Q and
    b in R; i(b,x) in P iff every (R,P,Q) in T with b in R has x in Q.
    """
    from .frames import canonical_frame

    F = canonical_frame(M)
    SA, SB = spectrum(M.A), spectrum(M.B)
    p = SA.index[P]
    witness = None
    for q, Q in enumerate(SA.primes):
        if not (Q >> x) & 1:
            continue
        for r, R in enumerate(SB.primes):
            if (R >> b) & 1 and (q, r, p) in F.R:
                witness = (Q, R)
                break
        if witness:
            break
    counter = None
    for r, R in enumerate(SB.primes):
        if not (R >> b) & 1:
            continue
        for q, Q in enumerate(SA.primes):
            if (r, p, q) in F.T and not (Q >> x) & 1:
                counter = (R, Q)
                break
        if counter:
            break
    return MembershipReport(
        fusion_member=bool((P >> M.f[x][b]) & 1),
        fusion_related=witness is not None,
        fusion_witness=witness,
        impl_member=bool((P >> M.i[b][x]) & 1),
        impl_related=counter is None,
        impl_counterexample=counter,
    )


# -- derived structures ----------------------------------------------------

@dataclass(frozen=True)
class FusionImplicationAlgebra:
    lattice: FiniteLattice
    fusion: tuple
    implication: tuple
    identities_hold: bool
    residuated: bool
    residuation_counterexample: tuple | None


def as_fusion_implication_algebra(M: FidlModule) -> FusionImplicationAlgebra:
    """Read a module with B = A as a lattice with binary fusion and implication."""
    if M.B != M.A:
        raise SortMismatch("fusion/implication algebra needs B equal to A")
    L = M.A
    n = L.size
    o, imp = M.f, M.i
    J, Mt = L.join, L.meet
    r = range(n)
    ok = (
        all(o[x][J[y][z]] == J[o[x][y]][o[x][z]] for x in r for y in r for z in r)
        and all(o[J[x][y]][z] == J[o[x][z]][o[y][z]] for x in r for y in r for z in r)
        and all(o[x][L.bottom] == L.bottom == o[L.bottom][x] for x in r)
        and all(imp[x][L.top] == L.top for x in r)
        and all(Mt[imp[x][y]][imp[x][z]] == imp[x][Mt[y][z]] for x in r for y in r for z in r)
        and all(Mt[imp[x][z]][imp[y][z]] == imp[J[x][y]][z] for x in r for y in r for z in r)
    )
    counter = next(
        ((x, y, z) for x in r for y in r for z in r
         if L.leq(o[x][y], z) != L.leq(x, imp[y][z])),
        None,
    )
    return FusionImplicationAlgebra(L, o, imp, ok, counter is None, counter)


@dataclass(frozen=True)
class ModalLattice:
    lattice: FiniteLattice
    diamond: tuple
    box: tuple
    laws_hold: bool


def as_modal_lattice(M: FidlModule) -> ModalLattice:
    """Diamond x = f(x, 1) and box x = i(1, x) for a module over a two-element B."""
    if M.B.size != 2:
        raise SortMismatch("modal reading needs a two-element B", size=M.B.size)
    A, one = M.A, M.B.top
    dia = tuple(M.f[x][one] for x in range(A.size))
    box = tuple(M.i[one][x] for x in range(A.size))
    r = range(A.size)
    ok = (
        dia[A.bottom] == A.bottom
        and box[A.top] == A.top
        and all(dia[A.join[x][y]] == A.join[dia[x]][dia[y]] for x in r for y in r)
        and all(box[A.meet[x][y]] == A.meet[box[x]][box[y]] for x in r for y in r)
    )
    return ModalLattice(A, dia, box, ok)


def heyting_power_module(H: FiniteLattice, X) -> FidlModule:
    """A = H^X pointwise, B = H, f(g, a) = a meet g, i(a, g) = a -> g pointwise.

    ``X`` is a positive size or a sequence of point names.
    """
    k = X if isinstance(X, int) else len(X)
    if k < 1:
        raise EmptyBase("the base set must be nonempty")
    A = product_lattice([H] * k)
    coords = product_coordinates([H] * k)
    index = {c: n for n, c in enumerate(coords)}
    arrow = heyting_arrow(H)
    f = [[index[tuple(H.meet[a][g] for g in c)] for a in range(H.size)] for c in coords]
    i = [[index[tuple(arrow[a][g] for g in c)] for c in coords] for a in range(H.size)]
    return validate_module(A, H, f, i)


def restriction_module(M: FidlModule, C: FiniteLattice, h: Sequence[int]):
    """Pull the module back along a lattice homomorphism h: C -> B.

    Returns the new module and the maps (identity on A, h) forming a
    homomorphism into M.
    """
    if len(h) != C.size or any(not 0 <= v < M.B.size for v in h):
        raise ShapeMismatch("h must map every element of C into B")
    bad = lattice_hom_violation(C, M.B, h)
    if bad is not None:
        raise NotAHomomorphism("h is not a bounded lattice homomorphism", **bad)
    f = [[M.f[x][h[c]] for c in range(C.size)] for x in range(M.A.size)]
    i = [list(M.i[h[c]]) for c in range(C.size)]
    N = validate_module(M.A, C, f, i)
    return N, (tuple(range(M.A.size)), tuple(h))


def product_module(members: Sequence[FidlModule]):
    """Componentwise product; returns the module and one projection pair per factor."""
    if not members:
        raise ShapeMismatch("product of an empty family")
    size = 1
    for N in members:
        size *= N.A.size
    budget.require("lattice", size, "product module")
    A = product_lattice([N.A for N in members])
    B = product_lattice([N.B for N in members])
    ca = product_coordinates([N.A for N in members])
    cb = product_coordinates([N.B for N in members])
    ia = {c: k for k, c in enumerate(ca)}
    f = [[ia[tuple(N.f[x][b] for N, x, b in zip(members, s, t))] for t in cb] for s in ca]
    i = [[ia[tuple(N.i[b][x] for N, x, b in zip(members, s, t))] for s in ca] for t in cb]
    P = FidlModule(A, B, tuple(map(tuple, f)), tuple(map(tuple, i)))
    projections = [
        (tuple(s[k] for s in ca), tuple(t[k] for t in cb)) for k in range(len(members))
    ]
    return P, projections


# -- fixtures --------------------------------------------------------------

CHAIN2 = chain(2)
CHAIN3 = chain(3)
BOOL4 = product_lattice([CHAIN2, CHAIN2], labels=("0", "a", "b", "1"))


def mod2() -> FidlModule:
    """A = B = two-element chain, f = meet, i = classical implication."""
    L = CHAIN2
    return validate_module(L, L, L.meet, heyting_arrow(L))


def modal_bool4() -> FidlModule:
    """A = BOOL4, B = two-element chain, diamond and box both the identity."""
    n = BOOL4.size
    f = [[BOOL4.bottom, x] for x in range(n)]
    i = [[BOOL4.top] * n, list(range(n))]
    return validate_module(BOOL4, CHAIN2, f, i)


def trivial_module() -> FidlModule:
    L = trivial_lattice()
    return validate_module(L, L, [[0]], [[0]])
