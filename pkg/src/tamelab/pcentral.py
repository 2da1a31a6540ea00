"""Finite congruence quotients: enumeration, p-central series, uniformity.

Groups are enumerated as sets of flattened integer tuples (matrices mod p^N)
so closures stay cheap; `RingMatrix` views are available at the boundary.

The p-central series is computed level by level: with Y generating P_n and X
generating G, P_(n+1) is the normal closure of {y^p} union {[x, y]} over
y in Y, x in X.  (In the quotient by that closure the images of Y are
central of order p, so the image of P_n is central elementary abelian and
the image of P_(n+1) vanishes; the reverse inclusion is immediate.)
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import (
    DepthError,
    InsufficientPrecision,
    LimitExceeded,
    NotPGroup,
    PrecisionMismatch,
    WindowTooLarge,
)
from .matgrp import RingMatrix, commutator, congruence_depth, int_power, mat_log
from .padic import PadicScalar, ScalarRing, int_valuation

DEFAULT_CLOSURE_LIMIT = 10**6


def closure_limit() -> int:
    """Default element cap; TAMELAB_CLOSURE_LIMIT overrides."""
    env = os.environ.get("TAMELAB_CLOSURE_LIMIT")
    return int(env) if env else DEFAULT_CLOSURE_LIMIT


# ---------------------------------------------------------------------------
# flattened-tuple matrix arithmetic mod p^N


def _tmul(a: tuple, b: tuple, m: int, mod: int) -> tuple:
    if m == 2:
        a0, a1, a2, a3 = a
        b0, b1, b2, b3 = b
        return (
            (a0 * b0 + a1 * b2) % mod,
            (a0 * b1 + a1 * b3) % mod,
            (a2 * b0 + a3 * b2) % mod,
            (a2 * b1 + a3 * b3) % mod,
        )
    return tuple(
        sum(a[i * m + t] * b[t * m + j] for t in range(m)) % mod
        for i in range(m)
        for j in range(m)
    )


def _tidentity(m: int) -> tuple:
    return tuple(1 if i == j else 0 for i in range(m) for j in range(m))


def _tpow(a: tuple, e: int, m: int, mod: int) -> tuple:
    acc = _tidentity(m)
    while e:
        if e & 1:
            acc = _tmul(acc, a, m, mod)
        a = _tmul(a, a, m, mod)
        e >>= 1
    return acc


def _tdepth(a: tuple, m: int, p: int, prec: int) -> int:
    depth = prec
    for i in range(m):
        for j in range(m):
            delta = a[i * m + j] - (1 if i == j else 0)
            depth = min(depth, int_valuation(delta % p**prec, p, prec))
            if depth == 0:
                return 0
    return depth


# ---------------------------------------------------------------------------
# enumerated groups


@dataclass(frozen=True)
class FiniteQuotientGroup:
    """A finite p-group of matrices mod p^N with its full element set."""

    ring: ScalarRing
    m: int
    generators: tuple
    elements: frozenset

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def prec(self) -> int:
        return self.ring.prec

    @property
    def modulus(self) -> int:
        return self.ring.modulus

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> tuple:
        return _tidentity(self.m)

    # exponent bound p^E with E = prec + m covers every element order here
    @property
    def _exp_levels(self) -> int:
        return self.prec + self.m

    def mul(self, a: tuple, b: tuple) -> tuple:
        return _tmul(a, b, self.m, self.modulus)

    def inv(self, a: tuple) -> tuple:
        return _tpow(a, self.p**self._exp_levels - 1, self.m, self.modulus)

    def power(self, a: tuple, e: int) -> tuple:
        if e < 0:
            return self.inv(_tpow(a, -e, self.m, self.modulus))
        return _tpow(a, e, self.m, self.modulus)

    def comm(self, a: tuple, b: tuple) -> tuple:
        return self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))

    def element_order(self, a: tuple) -> int:
        e = 1
        acc = a
        while acc != self.identity:
            acc = self.mul(acc, a)
            e += 1
        return e

    def element_depth(self, a: tuple) -> int:
        return _tdepth(a, self.m, self.p, self.prec)

    def to_matrix(self, a: tuple) -> RingMatrix:
        return RingMatrix.from_int_rows(
            self.ring, [a[i * self.m : (i + 1) * self.m] for i in range(self.m)]
        )

    def to_tuple(self, g: RingMatrix) -> tuple:
        if g.ring != self.ring:
            raise PrecisionMismatch("matrix ring differs from group ring")
        return tuple(e.value for row in g.rows for e in row)

    def subgroup_closure(self, seed, limit: int | None = None) -> frozenset:
        """Elements generated by `seed` (finite, so the monoid is the group)."""
        limit = closure_limit() if limit is None else limit
        seed = [s for s in seed if s != self.identity]
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for a in frontier:
                for s in seed:
                    c = self.mul(a, s)
                    if c not in seen:
                        if len(seen) >= limit:
                            raise LimitExceeded(f"subgroup closure past {limit}")
                        seen.add(c)
                        nxt.append(c)
            frontier = nxt
        return frozenset(seen)

    def normal_closure(self, seed, limit: int | None = None):
        """Normal closure of `seed` under the group generators.

        Returns (elements, generating set); the set returned generates the
        closure as a plain subgroup.
        """
        seed = [s for s in dict.fromkeys(seed) if s != self.identity]
        gen_invs = [self.inv(g) for g in self.generators]
        while True:
            sub = self.subgroup_closure(seed, limit)
            new = []
            for s in seed:
                for g, ginv in zip(self.generators, gen_invs):
                    t = self.mul(self.mul(g, s), ginv)
                    if t not in sub:
                        new.append(t)
            if not new:
                return sub, seed
            seed.extend(dict.fromkeys(new))


def closure(
    generators: list[RingMatrix],
    limit: int | None = None,
    allow_depth_zero: bool = False,
) -> FiniteQuotientGroup:
    """Breadth-first enumeration of the group the generators produce mod p^N.

    Generators must be congruent to I mod p unless `allow_depth_zero` opts
    out (needed for p-groups, like semidirect products with a nontrivial
    mod-p action, that admit no congruence-kernel model).  The resulting
    order must be a power of p.
    """
    if not generators:
        raise ValueError("need at least one generator")
    limit = closure_limit() if limit is None else limit
    ring = generators[0].ring
    if not isinstance(ring, ScalarRing):
        raise PrecisionMismatch("enumeration works over scalar rings only")
    m = generators[0].m
    gens = []
    for g in generators:
        if g.ring != ring or g.m != m:
            raise PrecisionMismatch("generators live in different rings")
        if not allow_depth_zero and congruence_depth(g) < 1:
            raise DepthError("generator not congruent to I mod p")
        gens.append(tuple(e.value for row in g.rows for e in row))

    shell = FiniteQuotientGroup(ring, m, tuple(gens), frozenset([_tidentity(m)]))
    elements = shell.subgroup_closure(gens, limit)
    order = len(elements)
    n = order
    while n % ring.p == 0:
        n //= ring.p
    if n != 1:
        raise NotPGroup(f"order {order} is not a power of {ring.p}")
    return FiniteQuotientGroup(ring, m, tuple(gens), elements)


# ---------------------------------------------------------------------------
# p-central series


@dataclass
class PCentralChain:
    """P_1 >= P_2 >= ... >= {1} with per-level generating sets and dims."""

    group: FiniteQuotientGroup
    levels: list[frozenset]
    level_gens: list[list]
    dims: list[int] = field(default_factory=list)

    def level(self, n: int) -> frozenset:
        """P_n, defined as the trivial group past the computed chain."""
        if n < 1:
            raise ValueError("levels are indexed from 1")
        if n <= len(self.levels):
            return self.levels[n - 1]
        return frozenset([self.group.identity])

    def depth_filtration(self, n: int) -> frozenset:
        """Elements of G congruent to I mod p^n; the dictionary's other side."""
        return frozenset(
            a for a in self.group.elements if self.group.element_depth(a) >= n
        )


def pcentral_series(G: FiniteQuotientGroup, limit: int | None = None) -> PCentralChain:
    levels = [G.elements]
    level_gens = [list(G.generators)]
    while len(levels[-1]) > 1:
        seed = []
        for y in level_gens[-1]:
            seed.append(G.power(y, G.p))
        for x in G.generators:
            for y in level_gens[-1]:
                seed.append(G.comm(x, y))
        nxt, gens = G.normal_closure(seed, limit)
        if len(nxt) >= len(levels[-1]):
            raise NotPGroup("p-central series failed to descend")
        levels.append(nxt)
        level_gens.append(gens)
    dims = []
    for a, b in zip(levels, levels[1:]):
        quotient = len(a) // len(b)
        d = int_valuation(quotient, G.p, quotient.bit_length())
        if G.p**d != quotient:
            raise NotPGroup(f"layer size {quotient} is not a power of {G.p}")
        dims.append(d)
    return PCentralChain(G, levels, level_gens, dims)


# ---------------------------------------------------------------------------
# uniformity


@dataclass
class UniformityReport:
    window: int
    frattini_abelian: bool
    power_map_bijective: list[bool]
    dims: list[int]
    uniform: bool

    def to_json(self) -> dict:
        return {
            "window": self.window,
            "frattini_abelian": self.frattini_abelian,
            "power_map_bijective": self.power_map_bijective,
            "dims": self.dims,
            "uniform": self.uniform,
        }


def _coset_rep(G: FiniteQuotientGroup, a: tuple, subgroup: list) -> tuple:
    return min(G.mul(a, h) for h in subgroup)


def uniformity_check(
    G: FiniteQuotientGroup,
    window: int,
    chain: PCentralChain | None = None,
) -> UniformityReport:
    """Check the powering maps gr_n -> gr_(n+1) for n <= window.

    A quotient mod p^N only reflects the pro-p group faithfully for
    n < N - 1, hence the window precondition.
    """
    if window >= G.prec - 1:
        raise WindowTooLarge(f"window {window} needs precision > {window + 1}")
    chain = pcentral_series(G) if chain is None else chain

    power_set = {G.power(a, G.p) for a in G.elements}
    gp = G.subgroup_closure(power_set)
    frattini_abelian = all(
        G.comm(x, y) in gp for x in G.generators for y in G.generators
    )

    bijective = []
    for n in range(1, window + 1):
        pn = chain.level(n)
        size_n = len(pn) // len(chain.level(n + 1))
        size_n1 = len(chain.level(n + 1)) // len(chain.level(n + 2))
        lower = sorted(chain.level(n + 2))
        # powering is well-defined on graded layers for any p-central series
        # (Hall-Petrescu), so counting distinct images over all of P_n decides
        # bijectivity: |images| = |gr_n| forces injectivity, = |gr_(n+1)|
        # forces surjectivity
        images = {_coset_rep(G, G.power(a, G.p), lower) for a in pn}
        bijective.append(len(images) == size_n == size_n1)

    uniform = frattini_abelian and all(bijective)
    return UniformityReport(window, frattini_abelian, bijective, chain.dims, uniform)


# ---------------------------------------------------------------------------
# the dictionary bracket


@dataclass
class DictionaryBracket:
    """Stabilized value of log([g^(p^n), h^(p^n)])^(p^-2n) with its trust level."""

    matrix: RingMatrix
    certified_levels: int
    steps: int

    def to_json(self) -> dict:
        return {
            "matrix": self.matrix.to_json(),
            "certified_levels": self.certified_levels,
            "steps": self.steps,
        }


def _reduce_matrix(g: RingMatrix, prec: int) -> RingMatrix:
    ring = ScalarRing(g.ring.p, prec)
    return RingMatrix(
        ring, [[PadicScalar(ring.p, prec, e.value) for e in row] for row in g.rows]
    )


def dictionary_bracket(
    g: RingMatrix, h: RingMatrix, steps: int | None = None
) -> DictionaryBracket:
    """Lie bracket of log g and log h read off the group commutator limit.

    Step n computes log([g^(p^n), h^(p^n)]) and strips p^(2n); the p^(-2n)
    root of the limit formula is realized by this precision shift, never by
    root extraction.  Successive steps must agree on their overlap, and the
    certified level is what the series analysis guarantees:
    min(N - 2n, n + 3) levels (n + 2 for p = 3).
    """
    g._check(h)
    ring = g.ring
    if not isinstance(ring, ScalarRing):
        raise PrecisionMismatch("dictionary bracket needs a scalar ring")
    if congruence_depth(g) < 1 or congruence_depth(h) < 1:
        raise DepthError("dictionary bracket needs depth >= 1 arguments")
    p, prec = ring.p, ring.prec
    max_steps = (prec - 2) // 2
    if steps is None:
        steps = max_steps
    if steps < 1 or steps > max_steps:
        raise InsufficientPrecision(
            f"precision {prec} supports 1..{max_steps} steps, got {steps}"
        )
    gain = 3 if p >= 5 else 2

    results = []
    for n in range(1, steps + 1):
        gn = int_power(g, p**n)
        hn = int_power(h, p**n)
        level = mat_log(commutator(gn, hn))
        shifted_prec = prec - 2 * n
        rows = []
        for row in level.rows:
            out = []
            for e in row:
                if e.value % p ** (2 * n) != 0:
                    raise InsufficientPrecision(
                        f"commutator log not divisible by p^{2 * n}"
                    )
                out.append(PadicScalar(p, shifted_prec, e.value // p ** (2 * n)))
            rows.append(out)
        results.append(RingMatrix(ScalarRing(p, shifted_prec), rows))

    for n in range(1, steps):
        overlap = min(prec - 2 * (n + 1), n + gain)
        if _reduce_matrix(results[n - 1], overlap) != _reduce_matrix(
            results[n], overlap
        ):
            raise InsufficientPrecision(f"no stabilization between steps {n}, {n + 1}")

    certified, best = 0, 1
    for n in range(1, steps + 1):
        level = min(prec - 2 * n, n + gain)
        if level > certified:
            certified, best = level, n
    return DictionaryBracket(
        _reduce_matrix(results[best - 1], certified), certified, steps
    )
