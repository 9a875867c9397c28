"""Finite posets, bounded distributive lattices, filters and prime spectra.

Elements are dense integer indices; labels exist only for I/O. A subset of a
carrier is an ``int`` bitmask with element 0 as the least significant bit, so
"canonical order" for families of subsets means ascending mask value.

Lattice congruences are stored as partitions: a tuple ``p`` with ``p[a]`` the
block number of ``a``, blocks numbered by first occurrence.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

from . import budget
from .errors import (
    BudgetExceeded,
    MalformedInput,
    NoMeetOrJoin,
    NotAPoset,
    NotBounded,
    NotDistributive,
)

Partition = tuple


# -- bitmask helpers -------------------------------------------------------

def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for k in indices:
        m |= 1 << k
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


# -- posets ----------------------------------------------------------------

@dataclass(frozen=True)
class Poset:
    """A finite partial order; ``up[i]`` is the mask of all ``j`` with i <= j."""

    labels: tuple
    up: tuple

    def __len__(self):
        return len(self.labels)

    @property
    def size(self) -> int:
        return len(self.labels)

    @cached_property
    def down(self) -> tuple:
        down = [0] * len(self.up)
        for i, u in enumerate(self.up):
            for j in bits(u):
                down[j] |= 1 << i
        return tuple(down)

    @cached_property
    def full(self) -> int:
        return (1 << len(self.labels)) - 1

    def leq(self, i: int, j: int) -> bool:
        return (self.up[i] >> j) & 1 == 1

    def leq_table(self) -> list:
        n = len(self.labels)
        return [[self.leq(i, j) for j in range(n)] for i in range(n)]

    def index(self, label) -> int:
        return self.labels.index(label)

    def up_closure(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.up[i]
        return out

    def down_closure(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.down[i]
        return out

    def is_increasing(self, mask: int) -> bool:
        return all(self.up[i] & ~mask == 0 for i in bits(mask))

    def is_decreasing(self, mask: int) -> bool:
        return all(self.down[i] & ~mask == 0 for i in bits(mask))

    def maximal(self, mask: int) -> int:
        """Mask of the maximal elements of the subset ``mask``."""
        return mask_of(i for i in bits(mask) if self.up[i] & mask == 1 << i)

    def minimal(self, mask: int) -> int:
        return mask_of(i for i in bits(mask) if self.down[i] & mask == 1 << i)

    def covers(self) -> list:
        """Covering pairs ``(i, j)``: i < j with nothing strictly between."""
        out = []
        for i in range(len(self.labels)):
            strict = self.up[i] & ~(1 << i)
            for j in bits(strict):
                between = strict & self.down[j] & ~(1 << j)
                if not between:
                    out.append((i, j))
        return out

    def linear_extension(self) -> list:
        return sorted(range(len(self.labels)), key=lambda i: (popcount(self.down[i]), i))

    def is_monotone_map(self, other: "Poset", g: Sequence[int]):
        """First pair ``(i, j)`` with i <= j but g(i) > g(j), or None."""
        for i in range(len(self.labels)):
            for j in bits(self.up[i]):
                if not other.leq(g[i], g[j]):
                    return (i, j)
        return None


def _check_labels(labels):
    labels = tuple(labels)
    if len(set(labels)) != len(labels):
        seen = set()
        for lab in labels:
            if lab in seen:
                raise MalformedInput(f"duplicate element label {lab!r}", label=lab)
            seen.add(lab)
    return labels


def _check_square(n, leq):
    if len(leq) != n or any(len(row) != n for row in leq):
        raise MalformedInput(f"leq must be a {n}x{n} table")
    for row in leq:
        for v in row:
            if not isinstance(v, bool):
                raise MalformedInput("leq entries must be booleans")


def validate_poset(labels: Sequence, leq: Sequence[Sequence[bool]]) -> Poset:
    labels = _check_labels(labels)
    n = len(labels)
    _check_square(n, leq)
    for i in range(n):
        if not leq[i][i]:
            raise NotAPoset("not reflexive", law="reflexive", witness=[i])
    for i in range(n):
        for j in range(i + 1, n):
            if leq[i][j] and leq[j][i]:
                raise NotAPoset("not antisymmetric", law="antisymmetric", witness=[i, j])
    up = tuple(mask_of(j for j in range(n) if leq[i][j]) for i in range(n))
    for i in range(n):
        for j in bits(up[i]):
            missing = up[j] & ~up[i]
            if missing:
                k = next(bits(missing))
                raise NotAPoset("not transitive", law="transitive", witness=[i, j, k])
    return Poset(labels, up)


def poset_from_relation(labels: Sequence, pairs: Iterable) -> Poset:
    """Reflexive-transitive closure of ``pairs``; raises NotAPoset on a cycle."""
    labels = _check_labels(labels)
    n = len(labels)
    up = [1 << i for i in range(n)]
    for i, j in pairs:
        up[i] |= 1 << j
    changed = True
    while changed:
        changed = False
        for i in range(n):
            closed = up[i]
            for j in bits(up[i]):
                closed |= up[j]
            if closed != up[i]:
                up[i] = closed
                changed = True
    for i in range(n):
        for j in bits(up[i] & ~(1 << i)):
            if up[j] >> i & 1:
                raise NotAPoset("relation has a cycle", law="antisymmetric", witness=[i, j])
    return Poset(labels, tuple(up))


def antichain(n: int, prefix="p") -> Poset:
    return Poset(tuple(f"{prefix}{k}" for k in range(n)), tuple(1 << k for k in range(n)))


def chain_poset(n: int, prefix="p") -> Poset:
    return Poset(
        tuple(f"{prefix}{k}" for k in range(n)),
        tuple(((1 << n) - 1) & ~((1 << k) - 1) for k in range(n)),
    )


# -- lattices --------------------------------------------------------------

@dataclass(frozen=True)
class FiniteLattice:
    poset: Poset
    meet: tuple
    join: tuple
    bottom: int
    top: int

    def __len__(self):
        return len(self.poset.labels)

    @property
    def size(self) -> int:
        return len(self.poset.labels)

    @property
    def labels(self) -> tuple:
        return self.poset.labels

    @property
    def up(self) -> tuple:
        return self.poset.up

    @property
    def down(self) -> tuple:
        return self.poset.down

    @property
    def full(self) -> int:
        return self.poset.full

    def leq(self, a: int, b: int) -> bool:
        return self.poset.leq(a, b)

    def meet_all(self, elements: Iterable[int]) -> int:
        m = self.top
        for a in elements:
            m = self.meet[m][a]
        return m

    def join_all(self, elements: Iterable[int]) -> int:
        j = self.bottom
        for a in elements:
            j = self.join[j][a]
        return j

    @property
    def is_trivial(self) -> bool:
        return len(self.poset.labels) == 1

    @cached_property
    def join_irreducibles(self) -> tuple:
        """Elements with exactly one lower cover."""
        out = []
        for a in range(self.size):
            below = self.down[a] & ~(1 << a)
            if below and popcount(self.poset.maximal(below)) == 1:
                out.append(a)
        return tuple(out)

    @cached_property
    def meet_irreducibles(self) -> tuple:
        out = []
        for a in range(self.size):
            above = self.up[a] & ~(1 << a)
            if above and popcount(self.poset.minimal(above)) == 1:
                out.append(a)
        return tuple(out)


def _derive_tables(poset: Poset):
    n = len(poset)
    by_down = {d: k for k, d in enumerate(poset.down)}
    by_up = {u: k for k, u in enumerate(poset.up)}
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            m = by_down.get(poset.down[a] & poset.down[b])
            if m is None:
                raise NoMeetOrJoin("no greatest lower bound", law="meet", witness=[a, b])
            j = by_up.get(poset.up[a] & poset.up[b])
            if j is None:
                raise NoMeetOrJoin("no least upper bound", law="join", witness=[a, b])
            meet[a][b] = meet[b][a] = m
            join[a][b] = join[b][a] = j
    return tuple(map(tuple, meet)), tuple(map(tuple, join))


def _bounds(poset: Poset):
    n = len(poset)
    bottom = next((k for k in range(n) if poset.up[k] == poset.full), None)
    top = next((k for k in range(n) if poset.down[k] == poset.full), None)
    if bottom is None or top is None:
        raise NotBounded("lattice has no bottom or no top", law="bounded")
    return bottom, top


def distributivity_witness(L: FiniteLattice):
    """First triple with x meet (y join z) != (x meet y) join (x meet z)."""
    n = L.size
    meet, join = L.meet, L.join
    for x in range(n):
        for y in range(n):
            for z in range(y + 1, n):
                if meet[x][join[y][z]] != join[meet[x][y]][meet[x][z]]:
                    return (x, y, z)
    return None


def lattice_from_poset(poset: Poset, check_distributive=True) -> FiniteLattice:
    if len(poset) == 0:
        raise MalformedInput("a lattice needs at least one element")
    meet, join = _derive_tables(poset)
    bottom, top = _bounds(poset)
    L = FiniteLattice(poset, meet, join, bottom, top)
    if check_distributive:
        w = distributivity_witness(L)
        if w is not None:
            raise NotDistributive("lattice is not distributive", law="distributive", witness=list(w))
    return L


def validate_lattice(labels: Sequence, leq: Sequence[Sequence[bool]]) -> FiniteLattice:
    """Validate a raw element list and order table as a bounded distributive lattice."""
    if len(labels) == 0:
        raise MalformedInput("a lattice needs at least one element")
    return lattice_from_poset(validate_poset(labels, leq))


def lattice_from_tables(labels: Sequence, meet: Sequence[Sequence[int]],
                        join: Sequence[Sequence[int]]) -> FiniteLattice:
    """Trusted constructor: order is recovered from the meet table."""
    n = len(labels)
    up = tuple(mask_of(b for b in range(n) if meet[a][b] == a) for a in range(n))
    poset = Poset(tuple(labels), up)
    bottom, top = _bounds(poset)
    return FiniteLattice(poset, tuple(map(tuple, meet)), tuple(map(tuple, join)), bottom, top)


def chain(n: int, labels: Sequence | None = None) -> FiniteLattice:
    if labels is None:
        labels = ("0", "1") if n == 2 else ("0", "m", "1") if n == 3 else tuple(str(k) for k in range(n))
    meet = tuple(tuple(min(a, b) for b in range(n)) for a in range(n))
    join = tuple(tuple(max(a, b) for b in range(n)) for a in range(n))
    return lattice_from_tables(labels, meet, join)


def trivial_lattice() -> FiniteLattice:
    return chain(1, ("0",))


def product_lattice(factors: Sequence[FiniteLattice], labels: Sequence | None = None) -> FiniteLattice:
    """Cartesian product; element order is itertools.product order of the factors."""
    size = 1
    for L in factors:
        size *= L.size
    budget.require("lattice", size, "product lattice")
    tuples = list(product(*[range(L.size) for L in factors]))
    index = {t: k for k, t in enumerate(tuples)}
    if labels is None:
        labels = ["(" + ",".join(L.labels[c] for L, c in zip(factors, t)) + ")" for t in tuples]
    meet = [[index[tuple(L.meet[p][q] for L, p, q in zip(factors, s, t))] for t in tuples] for s in tuples]
    join = [[index[tuple(L.join[p][q] for L, p, q in zip(factors, s, t))] for t in tuples] for s in tuples]
    return lattice_from_tables(labels, meet, join)


def product_coordinates(factors: Sequence[FiniteLattice]) -> list:
    """Coordinate tuples of the elements of ``product_lattice(factors)``."""
    return list(product(*[range(L.size) for L in factors]))


def permute_lattice(L: FiniteLattice, perm: Sequence[int]) -> FiniteLattice:
    """Relabel indices: old element ``a`` becomes new element ``perm[a]``."""
    n = L.size
    inv = [0] * n
    for a, p in enumerate(perm):
        inv[p] = a
    labels = [L.labels[inv[k]] for k in range(n)]
    meet = [[perm[L.meet[inv[a]][inv[b]]] for b in range(n)] for a in range(n)]
    join = [[perm[L.join[inv[a]][inv[b]]] for b in range(n)] for a in range(n)]
    return lattice_from_tables(labels, meet, join)


def heyting_arrow(L: FiniteLattice) -> tuple:
    """Relative pseudocomplement: ``arrow[a][b]`` is the largest c with a meet c <= b."""
    n = L.size
    return tuple(
        tuple(L.join_all(c for c in range(n) if L.leq(L.meet[a][c], b)) for b in range(n))
        for a in range(n)
    )


def lattice_hom_violation(src: FiniteLattice, tgt: FiniteLattice, phi: Sequence[int]):
    """First law a map fails to preserve (0, 1, join, meet), as a witness dict."""
    if phi[src.bottom] != tgt.bottom:
        return {"law": "bottom"}
    if phi[src.top] != tgt.top:
        return {"law": "top"}
    for a in range(src.size):
        for b in range(a + 1, src.size):
            if phi[src.join[a][b]] != tgt.join[phi[a]][phi[b]]:
                return {"law": "join", "x": a, "y": b}
            if phi[src.meet[a][b]] != tgt.meet[phi[a]][phi[b]]:
                return {"law": "meet", "x": a, "y": b}
    return None


# -- filters and ideals ----------------------------------------------------

def is_filter(L: FiniteLattice, mask: int) -> bool:
    if not (mask >> L.top) & 1 or not L.poset.is_increasing(mask):
        return False
    members = list(bits(mask))
    return all((mask >> L.meet[a][b]) & 1 for a in members for b in members)


def is_ideal(L: FiniteLattice, mask: int) -> bool:
    if not (mask >> L.bottom) & 1 or not L.poset.is_decreasing(mask):
        return False
    members = list(bits(mask))
    return all((mask >> L.join[a][b]) & 1 for a in members for b in members)


def fig(L: FiniteLattice, X: int) -> int:
    """Least filter containing ``X``; finite meets of X collapse to a single one."""
    return L.up[L.meet_all(bits(X))]


def idg(L: FiniteLattice, X: int) -> int:
    """Least ideal containing ``X``."""
    return L.down[L.join_all(bits(X))]


def enumerate_filters(L: FiniteLattice) -> list:
    # every filter of a finite lattice is principal
    return sorted(set(L.up))


def enumerate_ideals(L: FiniteLattice) -> list:
    return sorted(set(L.down))


def is_prime_filter(L: FiniteLattice, mask: int) -> bool:
    if mask == L.full or not is_filter(L, mask):
        return False
    n = L.size
    for a in range(n):
        if (mask >> a) & 1:
            continue
        for b in range(a + 1, n):
            if not (mask >> b) & 1 and (mask >> L.join[a][b]) & 1:
                return False
    return True


def prime_label(L: FiniteLattice, mask: int) -> str:
    return "[" + L.labels[L.meet_all(bits(mask))] + ")"


@dataclass(frozen=True)
class Spectrum:
    """Prime filters of a lattice ordered by inclusion."""

    lattice: FiniteLattice
    primes: tuple
    order: Poset

    def __len__(self):
        return len(self.primes)

    @cached_property
    def index(self) -> dict:
        return {p: k for k, p in enumerate(self.primes)}

    @cached_property
    def full(self) -> int:
        return (1 << len(self.primes)) - 1

    @cached_property
    def beta_table(self) -> tuple:
        return tuple(
            mask_of(k for k, p in enumerate(self.primes) if (p >> a) & 1)
            for a in range(self.lattice.size)
        )

    def beta(self, a: int) -> int:
        return self.beta_table[a]


def _make_spectrum(L: FiniteLattice, primes) -> Spectrum:
    primes = tuple(sorted(primes))
    up = tuple(mask_of(k for k, q in enumerate(primes) if p & ~q == 0) for p in primes)
    labels = tuple(prime_label(L, p) for p in primes)
    return Spectrum(L, primes, Poset(labels, up))


@lru_cache(maxsize=512)
def spectrum(L: FiniteLattice) -> Spectrum:
    """All prime filters, found by testing every filter for primality."""
    return _make_spectrum(L, [F for F in enumerate_filters(L) if is_prime_filter(L, F)])


def spectrum_from_join_irreducibles(L: FiniteLattice) -> Spectrum:
    """Prime filters as principal filters of join-irreducible elements."""
    return _make_spectrum(L, [L.up[j] for j in L.join_irreducibles])


def beta(L: FiniteLattice, a: int) -> int:
    """Mask, over ``spectrum(L).primes``, of the prime filters containing ``a``."""
    return spectrum(L).beta(a)


# -- increasing sets -------------------------------------------------------

@dataclass(frozen=True)
class IncreasingSetLattice:
    base: Poset
    sets: tuple
    lattice: FiniteLattice

    @cached_property
    def index(self) -> dict:
        return {s: k for k, s in enumerate(self.sets)}

    def index_of(self, mask: int) -> int:
        return self.index[mask]


def _upsets(P: Poset, limit: int) -> list:
    order = sorted(range(len(P)), key=lambda i: (-popcount(P.down[i]), i))
    out = []

    def rec(k, mask):
        if k == len(order):
            out.append(mask)
            if len(out) > limit:
                raise BudgetExceeded(
                    f"more than {limit} increasing sets", budget="lattice", limit=limit
                )
            return
        x = order[k]
        rec(k + 1, mask)
        if P.up[x] & ~(1 << x) & ~mask == 0:
            rec(k + 1, mask | 1 << x)

    rec(0, 0)
    return sorted(out)


def set_label(P: Poset, mask: int) -> str:
    return "{" + ",".join(P.labels[i] for i in bits(mask)) + "}"


@lru_cache(maxsize=512)
def increasing_sets(P: Poset) -> IncreasingSetLattice:
    """All increasing subsets of ``P`` with the lattice they form under union and intersection."""
    sets = _upsets(P, budget.limit("lattice"))
    index = {s: k for k, s in enumerate(sets)}
    meet = tuple(tuple(index[s & t] for t in sets) for s in sets)
    join = tuple(tuple(index[s | t] for t in sets) for s in sets)
    up = tuple(mask_of(k for k, t in enumerate(sets) if s & ~t == 0) for s in sets)
    poset = Poset(tuple(set_label(P, s) for s in sets), up)
    lattice = FiniteLattice(poset, meet, join, index[0], index[P.full])
    return IncreasingSetLattice(P, tuple(sets), lattice)


# -- partitions and lattice congruences ------------------------------------

def canonical_partition(keys: Sequence) -> Partition:
    seen = {}
    return tuple(seen.setdefault(k, len(seen)) for k in keys)


def partition_blocks(p: Partition) -> list:
    blocks = {}
    for a, b in enumerate(p):
        blocks.setdefault(b, []).append(a)
    return [blocks[b] for b in sorted(blocks)]


def partition_from_blocks(n: int, blocks: Sequence[Sequence[int]]) -> Partition:
    keys = [None] * n
    for k, block in enumerate(blocks):
        for a in block:
            if not 0 <= a < n or keys[a] is not None:
                raise MalformedInput("blocks do not partition the carrier", element=a)
            keys[a] = k
    if any(k is None for k in keys):
        raise MalformedInput("blocks do not cover the carrier")
    return canonical_partition(keys)


def partition_leq(p: Partition, q: Partition) -> bool:
    """True when p is contained in q as a relation (p refines q)."""
    image = {}
    for a, b in zip(p, q):
        if image.setdefault(a, b) != b:
            return False
    return True


def identity_partition(n: int) -> Partition:
    return tuple(range(n))


def total_partition(n: int) -> Partition:
    return (0,) * n


def enumerate_partitions(n: int) -> Iterator[Partition]:
    """All partitions of range(n) as restricted growth strings."""
    if n == 0:
        yield ()
        return
    word = [0] * n

    def rec(k, top):
        if k == n:
            yield tuple(word)
            return
        for v in range(top + 2):
            word[k] = v
            yield from rec(k + 1, max(top, v))

    yield from rec(1, 0)


def is_lattice_congruence(L: FiniteLattice, p: Partition) -> bool:
    n = L.size
    for a in range(n):
        for c in range(a + 1, n):
            if p[a] != p[c]:
                continue
            for b in range(n):
                if p[L.meet[a][b]] != p[L.meet[c][b]] or p[L.join[a][b]] != p[L.join[c][b]]:
                    return False
    return True


def lattice_congruences(L: FiniteLattice) -> list:
    """Brute force: every partition of the carrier that is compatible with meet and join."""
    return [p for p in enumerate_partitions(L.size) if is_lattice_congruence(L, p)]


def theta_from_closed(L: FiniteLattice, Y: int) -> Partition:
    """Identify a and b when the same primes of ``Y`` contain them."""
    S = spectrum(L)
    return canonical_partition([S.beta(a) & Y for a in range(L.size)])


def lattice_congruences_spectral(L: FiniteLattice) -> list:
    """Lattice congruences as theta(Y) for every subset Y of the spectrum."""
    S = spectrum(L)
    budget.require("spectral", len(S), "spectrum")
    return sorted({theta_from_closed(L, Y) for Y in range(1 << len(S))})
