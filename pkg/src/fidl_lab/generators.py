"""Seeded random instances: lattices, modules, frames, homomorphisms, carriers.

Every generator takes a ``random.Random`` and is deterministic given its
state. Modules are always returned validated.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from . import budget
from .errors import AxiomViolation, BudgetExceeded, MalformedInput
from .fidl import (
    FidlModule,
    heyting_power_module,
    implication_bottom_holds,
    product_module,
    restriction_module,
    validate_module,
)
from .order import (
    FiniteLattice,
    Poset,
    bits,
    chain,
    increasing_sets,
    permute_lattice,
    poset_from_relation,
    spectrum,
)

STRATEGIES = ("heyting-power", "modal", "product", "random-tables")


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 1
    count: int = 10
    strategy: str = "mixed"
    max_a: int = 8
    max_b: int = 6

    def validate(self) -> "FuzzConfig":
        if self.strategy not in STRATEGIES + ("mixed",):
            raise MalformedInput(f"unknown strategy {self.strategy!r}", strategy=self.strategy)
        if self.count < 1:
            raise MalformedInput("count must be at least 1")
        if self.max_a < 1 or self.max_b < 1:
            raise MalformedInput("size bounds must be positive")
        lim = budget.limit("lattice")
        if self.max_a > lim or self.max_b > lim:
            raise BudgetExceeded("size bound above the lattice budget", budget="lattice", limit=lim)
        if not 0 <= self.seed < 2 ** 64:
            raise MalformedInput("seed must be a 64-bit unsigned integer")
        return self

    def rng(self, k: int) -> random.Random:
        """Independent stream for instance ``k``."""
        return random.Random(self.seed * 1_000_003 + k)


# -- posets and lattices ---------------------------------------------------

def random_poset(rng: random.Random, n: int, density: float | None = None, prefix="p") -> Poset:
    """Random order: a shuffled linear order thinned to a random relation, then closed."""
    if density is None:
        density = rng.random()
    order = list(range(n))
    rng.shuffle(order)
    pairs = [(order[a], order[b]) for a in range(n) for b in range(a + 1, n) if rng.random() < density]
    return poset_from_relation(tuple(f"{prefix}{k}" for k in range(n)), pairs)


def relabel(L: FiniteLattice, labels) -> FiniteLattice:
    return FiniteLattice(Poset(tuple(labels), L.up), L.meet, L.join, L.bottom, L.top)


def random_lattice(rng: random.Random, max_size: int, min_size: int = 1, shuffle: bool = True) -> FiniteLattice:
    """A random distributive lattice: the increasing sets of a random poset."""
    max_size = max(max_size, 1)
    min_size = min(min_size, max_size)
    while True:
        n = rng.randint(0, max(0, min(max_size - 1, 7)))
        P = random_poset(rng, n)
        ups = increasing_sets(P)
        size = len(ups.sets)
        if min_size <= size <= max_size:
            break
    L = ups.lattice
    if shuffle:
        perm = list(range(size))
        rng.shuffle(perm)
        L = permute_lattice(L, perm)
    return relabel(L, [f"e{k}" for k in range(size)])


# -- operators from irreducibles ------------------------------------------

def random_join_hom(rng: random.Random, L: FiniteLattice, into: FiniteLattice | None = None) -> list:
    """A map preserving 0 and joins, fixed by random values on join-irreducibles."""
    into = into or L
    values = {j: rng.randrange(into.size) for j in L.join_irreducibles}
    return [into.join_all(values[j] for j in L.join_irreducibles if L.leq(j, x)) for x in range(L.size)]


def random_meet_hom(rng: random.Random, L: FiniteLattice, into: FiniteLattice | None = None) -> list:
    """A map preserving 1 and meets, fixed by random values on meet-irreducibles."""
    into = into or L
    values = {m: rng.randrange(into.size) for m in L.meet_irreducibles}
    return [into.meet_all(values[m] for m in L.meet_irreducibles if L.leq(x, m)) for x in range(L.size)]


def modal_module(rng: random.Random, max_a: int) -> FidlModule:
    A = random_lattice(rng, max_a)
    B = chain(2)
    dia, box = random_join_hom(rng, A), random_meet_hom(rng, A)
    f = [[A.bottom, dia[x]] for x in range(A.size)]
    i = [[A.top] * A.size, box]
    return validate_module(A, B, f, i)


def heyting_module(rng: random.Random, max_a: int, max_b: int) -> FidlModule:
    H = random_lattice(rng, min(max_a, max_b), min_size=1)
    k = 1
    while H.size ** (k + 1) <= max_a and rng.random() < 0.6:
        k += 1
    return heyting_power_module(H, k)


@dataclass
class TableStats:
    proposed: int = 0
    accepted: int = 0

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.proposed if self.proposed else 1.0


def tables_from_sections(rng: random.Random, A: FiniteLattice, B: FiniteLattice):
    """Fusion and implication assembled from random sections at the join-irreducibles of B.

    f(x, b) is the join of the fusion sections at join-irreducibles below b,
    i(b, x) the meet of the implication sections there.
    """
    fs = {j: random_join_hom(rng, A) for j in B.join_irreducibles}
    is_ = {j: random_meet_hom(rng, A) for j in B.join_irreducibles}
    below = [[j for j in B.join_irreducibles if B.leq(j, b)] for b in range(B.size)]
    f = [[A.join_all(fs[j][x] for j in below[b]) for b in range(B.size)] for x in range(A.size)]
    i = [[A.meet_all(is_[j][x] for j in below[b]) for x in range(A.size)] for b in range(B.size)]
    return f, i


def random_tables_module(rng: random.Random, max_a: int, max_b: int, stats: TableStats | None = None,
                         perturb: float = 0.3) -> FidlModule:
    """Section-built tables, sometimes with one entry overwritten at random.

    Perturbed candidates that break an axiom are discarded and redrawn, as
    are those with i(0, x) != 1 for some x: the axioms allow that, but such
    modules fall outside the relational representation.
    """
    stats = stats if stats is not None else TableStats()
    while True:
        A = random_lattice(rng, max_a)
        B = random_lattice(rng, max_b)
        f, i = tables_from_sections(rng, A, B)
        if rng.random() < perturb:
            table, rows, cols = (f, A.size, B.size) if rng.random() < 0.5 else (i, B.size, A.size)
            table[rng.randrange(rows)][rng.randrange(cols)] = rng.randrange(A.size)
        stats.proposed += 1
        try:
            M = validate_module(A, B, f, i)
        except AxiomViolation:
            continue
        if not implication_bottom_holds(M):
            continue
        stats.accepted += 1
        return M


def product_of_random(rng: random.Random, max_a: int, max_b: int, stats=None) -> FidlModule:
    a1 = max(1, max_a // 2)
    b1 = max(1, max_b // 2)
    M1 = _small_factor(rng, a1, b1, stats)
    M2 = _small_factor(rng, max(1, max_a // M1.A.size), max(1, max_b // M1.B.size), stats)
    return product_module([M1, M2])[0]


def _small_factor(rng, max_a, max_b, stats):
    pick = rng.choice(("heyting-power", "modal", "random-tables") if max_b >= 2 else ("random-tables",))
    if pick == "modal":
        return modal_module(rng, max_a)
    if pick == "heyting-power":
        return heyting_module(rng, max_a, max_b)
    return random_tables_module(rng, max_a, max_b, stats)


def random_module(rng: random.Random, strategy: str, max_a: int, max_b: int,
                  stats: TableStats | None = None) -> FidlModule:
    if strategy == "mixed":
        strategy = rng.choice(STRATEGIES)
    if strategy == "heyting-power":
        return heyting_module(rng, max_a, max_b)
    if strategy == "modal":
        if max_b < 2:
            return random_tables_module(rng, max_a, max_b, stats)
        return modal_module(rng, max_a)
    if strategy == "product":
        return product_of_random(rng, max_a, max_b, stats)
    if strategy == "random-tables":
        return random_tables_module(rng, max_a, max_b, stats)
    raise MalformedInput(f"unknown strategy {strategy!r}")


def module_stream(seed: int, count: int, strategy="mixed", max_a=8, max_b=6, stats=None):
    cfg = FuzzConfig(seed, count, strategy, max_a, max_b).validate()
    return [random_module(cfg.rng(k), strategy, max_a, max_b, stats) for k in range(count)]


# -- mutations -------------------------------------------------------------

def mutate_entry(rng: random.Random, M: FidlModule):
    """Overwrite one table entry with a different value.

    Returns ``(table_name, row, col, f, i)`` with fresh list tables.
    """
    if M.A.size < 2:
        raise MalformedInput("a one-element A admits no mutation")
    f = [list(r) for r in M.f]
    i = [list(r) for r in M.i]
    name = rng.choice(("f", "i"))
    table = f if name == "f" else i
    r = rng.randrange(len(table))
    c = rng.randrange(len(table[r]))
    old = table[r][c]
    table[r][c] = rng.choice([v for v in range(M.A.size) if v != old])
    return name, r, c, f, i


# -- frames ----------------------------------------------------------------

def random_frame(rng: random.Random, max_x: int, max_y: int, density: float | None = None):
    """Closure of a random set of triples over random posets."""
    from .frames import close_frame

    X = random_poset(rng, rng.randint(0, max_x), prefix="x")
    Y = random_poset(rng, rng.randint(0, max_y), prefix="y")
    nx, ny = len(X), len(Y)
    if density is None:
        density = rng.choice((0.0, 0.05, 0.15, 0.3, 0.6))
    R = [(a, b, c) for a in range(nx) for b in range(ny) for c in range(nx) if rng.random() < density]
    T = [(b, a, c) for b in range(ny) for a in range(nx) for c in range(nx) if rng.random() < density]
    return close_frame(X, Y, R, T)


# -- homomorphisms ---------------------------------------------------------

def random_lattice_hom_into(rng: random.Random, B: FiniteLattice, max_size: int):
    """A random lattice C and bounded homomorphism h: C -> B.

    Built dually: a random monotone map from the spectrum of B to a random
    poset P gives the preimage map from increasing sets of P into B.
    """
    S = spectrum(B)
    Y = S.order
    for _ in range(50):
        P = random_poset(rng, rng.randint(1, 3), prefix="q")
        phi = [rng.randrange(len(P)) for _ in range(len(Y))]
        if Y.is_monotone_map(P, phi) is None:
            break
    else:
        P = Poset(("q0",), (1,))
        phi = [0] * len(Y)
    ups = increasing_sets(P)
    if len(ups.sets) > max_size:
        P = Poset(("q0",), (1,))
        phi = [0] * len(Y)
        ups = increasing_sets(P)
    beta_inv = {S.beta(b): b for b in range(B.size)}
    h = []
    for U in ups.sets:
        pre = sum(1 << y for y in range(len(Y)) if (U >> phi[y]) & 1)
        h.append(beta_inv[pre])
    C = relabel(ups.lattice, [f"c{k}" for k in range(len(ups.sets))])
    return C, h


HOM_KINDS = ("identity", "projection", "diagonal", "restriction", "representation", "composite")


def random_hom(rng: random.Random, max_a: int = 6, max_b: int = 4, kind: str | None = None):
    """A validated homomorphism of one of several shapes."""
    from .frames import representation_iso
    from .morphisms import compose, identity_hom, validate_hom

    kind = kind or rng.choice(HOM_KINDS)
    if kind == "identity":
        M = random_module(rng, "mixed", max_a, max_b)
        return identity_hom(M)
    if kind in ("projection", "diagonal"):
        M1 = random_module(rng, "mixed", max(1, max_a // 2), max(1, max_b // 2))
        if kind == "diagonal":
            P, _ = product_module([M1, M1])
            ia = {c: k for k, c in enumerate(_coords(M1.A, M1.A))}
            ib = {c: k for k, c in enumerate(_coords(M1.B, M1.B))}
            return validate_hom(M1, P, [ia[x, x] for x in range(M1.A.size)],
                                [ib[b, b] for b in range(M1.B.size)])
        M2 = random_module(rng, "mixed", max(1, max_a // M1.A.size), max(1, max_b // M1.B.size))
        P, proj = product_module([M1, M2])
        k = rng.randrange(2)
        return validate_hom(P, (M1, M2)[k], *proj[k])
    if kind == "restriction":
        M = random_module(rng, "mixed", max_a, max_b)
        C, h = random_lattice_hom_into(rng, M.B, max_b)
        N, (alpha, gamma) = restriction_module(M, C, h)
        return validate_hom(N, M, alpha, gamma)
    if kind == "representation":
        M = random_module(rng, "mixed", max_a, max_b)
        return representation_iso(M).morphism
    if kind == "composite":
        M = random_module(rng, "mixed", max_a, max_b)
        C, h = random_lattice_hom_into(rng, M.B, max_b)
        N, maps = restriction_module(M, C, h)
        first = validate_hom(N, M, *maps)
        return compose(first, representation_iso(M).morphism)
    raise MalformedInput(f"unknown hom kind {kind!r}")


def _coords(L1, L2):
    return [(a, b) for a in range(L1.size) for b in range(L2.size)]


# -- carriers --------------------------------------------------------------

def generated_subalgebra(M: FidlModule, SA: int, SB: int):
    """Least carriers containing the seeds and closed under lattice operations, f and i."""
    A, B = M.A, M.B
    SA |= 1 << A.bottom | 1 << A.top
    SB |= 1 << B.bottom | 1 << B.top
    while True:
        na, nb = SA, SB
        la, lb = list(bits(SA)), list(bits(SB))
        for a in la:
            for c in la:
                na |= 1 << A.meet[a][c] | 1 << A.join[a][c]
            for b in lb:
                na |= 1 << M.f[a][b] | 1 << M.i[b][a]
        for b in lb:
            for d in lb:
                nb |= 1 << B.meet[b][d] | 1 << B.join[b][d]
        if (na, nb) == (SA, SB):
            return SA, SB
        SA, SB = na, nb


def random_carriers(rng: random.Random, M: FidlModule, subalgebra: bool | None = None):
    """Random bounded sublattice carriers; closed under f and i when ``subalgebra``."""
    from .morphisms import subalgebra_candidate, sublattice_closure

    if subalgebra is None:
        subalgebra = rng.random() < 0.5
    seed_a = sum(1 << a for a in range(M.A.size) if rng.random() < 0.25)
    seed_b = sum(1 << b for b in range(M.B.size) if rng.random() < 0.25)
    if subalgebra:
        SA, SB = generated_subalgebra(M, seed_a, seed_b)
    else:
        SA, SB = sublattice_closure(M.A, seed_a), sublattice_closure(M.B, seed_b)
    return subalgebra_candidate(M, SA, SB)


# -- corpus ----------------------------------------------------------------

def generate_corpus(cfg: FuzzConfig):
    """Deterministic list of (name, InstanceDocument) plus generator statistics."""
    from .codec import GENERATOR_VERSION, module_document

    cfg.validate()
    stats = TableStats()
    docs = []
    width = len(str(cfg.count - 1))
    for k in range(cfg.count):
        M = random_module(cfg.rng(k), cfg.strategy, cfg.max_a, cfg.max_b, stats)
        name = f"module-{k:0{width}d}"
        docs.append((name, module_document(
            M, name=name, seed=cfg.seed, index=k, strategy=cfg.strategy, generator=GENERATOR_VERSION,
        )))
    return docs, stats
