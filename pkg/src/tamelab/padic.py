"""Exact fixed-precision arithmetic in Z/p^N and in Z_p[[T_1..T_n]] mod m^M.

Scalars carry their odd prime and precision; operations between values with
different (p, N) raise PrecisionMismatch instead of coercing, so precision
loss is never silent.  Series elements carry graded precision: the
coefficient of a total-degree-j monomial is a residue mod p^(M-j), which is
exactly the information present in the quotient by m^M, m = (p, T_1..T_n).

The log/exp pair and the Hensel square root here feed the congruence-group
constructions in `matgrp` and `certify`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, NonResidue, NonUnit, PrecisionMismatch, SchemaError

# ---------------------------------------------------------------------------
# integer helpers


@lru_cache(maxsize=None)
def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def int_valuation(n: int, p: int, cap: int) -> int:
    """Largest v <= cap with p^v | n; 0 reports the cap."""
    if n == 0:
        return cap
    v = 0
    while v < cap and n % p == 0:
        n //= p
        v += 1
    return v


def digit_sum(n: int, p: int) -> int:
    s = 0
    while n:
        n, r = divmod(n, p)
        s += r
    return s


def factorial_valuation(n: int, p: int) -> int:
    """v_p(n!) via the digit-sum identity (n - s_p(n)) / (p - 1)."""
    return (n - digit_sum(n, p)) // (p - 1)


def _sqrt_mod_prime(a: int, p: int) -> int | None:
    """Tonelli-Shanks square root mod an odd prime, or None for a nonresidue."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    c = pow(z, q, p)
    r = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = s
    while t != 1:
        t2 = t
        i = 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return r


# ---------------------------------------------------------------------------
# scalar ring Z/p^N


@dataclass(frozen=True)
class ScalarRing:
    """Descriptor for Z/p^N viewed as the length-N truncation of Z_p."""

    p: int
    prec: int

    def __post_init__(self):
        if not is_odd_prime(self.p):
            raise DomainError(f"p must be an odd prime, got {self.p}")
        if self.prec < 1:
            raise DomainError(f"precision must be >= 1, got {self.prec}")

    @property
    def cap(self) -> int:
        return self.prec

    @property
    def n_vars(self) -> int:
        return 0

    @property
    def modulus(self) -> int:
        return self.p**self.prec

    def zero(self) -> "PadicScalar":
        return PadicScalar(self.p, self.prec, 0)

    def one(self) -> "PadicScalar":
        return PadicScalar(self.p, self.prec, 1)

    def from_int(self, n: int) -> "PadicScalar":
        return PadicScalar(self.p, self.prec, n)

    def element_from_json(self, obj) -> "PadicScalar":
        return PadicScalar.from_json(obj)

    def json_header(self) -> dict:
        return {"type": "padic", "p": self.p, "prec": self.prec}


class PadicScalar:
    """A residue in [0, p^N) standing for a p-adic integer known mod p^N."""

    __slots__ = ("p", "prec", "value")

    def __init__(self, p: int, prec: int, value: int):
        if not is_odd_prime(p):
            raise DomainError(f"p must be an odd prime, got {p}")
        if prec < 1:
            raise DomainError(f"precision must be >= 1, got {prec}")
        self.p = p
        self.prec = prec
        self.value = value % p**prec

    @property
    def ring(self) -> ScalarRing:
        return ScalarRing(self.p, self.prec)

    def _check(self, other: "PadicScalar"):
        if not isinstance(other, PadicScalar):
            raise TypeError(f"expected PadicScalar, got {type(other).__name__}")
        if self.p != other.p or self.prec != other.prec:
            raise PrecisionMismatch(
                f"(p={self.p}, N={self.prec}) vs (p={other.p}, N={other.prec})"
            )

    def __add__(self, other):
        self._check(other)
        return PadicScalar(self.p, self.prec, self.value + other.value)

    def __sub__(self, other):
        self._check(other)
        return PadicScalar(self.p, self.prec, self.value - other.value)

    def __neg__(self):
        return PadicScalar(self.p, self.prec, -self.value)

    def __mul__(self, other):
        self._check(other)
        return PadicScalar(self.p, self.prec, self.value * other.value)

    def inv(self) -> "PadicScalar":
        if not self.is_unit():
            raise NonUnit(f"{self!r} has valuation {self.valuation()}")
        return PadicScalar(self.p, self.prec, pow(self.value, -1, self.p**self.prec))

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        return PadicScalar(self.p, self.prec, pow(self.value, e, self.p**self.prec))

    def valuation(self) -> int:
        """v_p capped at the precision; the zero residue reports the cap."""
        return int_valuation(self.value, self.p, self.prec)

    def depth(self) -> int:
        return self.valuation()

    def p_content(self) -> int:
        return self.valuation()

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def is_zero(self) -> bool:
        return self.value == 0

    def __eq__(self, other):
        return (
            isinstance(other, PadicScalar)
            and self.p == other.p
            and self.prec == other.prec
            and self.value == other.value
        )

    def __hash__(self):
        return hash((self.p, self.prec, self.value))

    def __repr__(self):
        return f"PadicScalar(p={self.p}, N={self.prec}, {self.value})"

    def lift(self) -> dict:
        return {(): self.value}

    def to_json(self) -> dict:
        return {"p": self.p, "prec": self.prec, "value": str(self.value)}

    @classmethod
    def from_json(cls, obj) -> "PadicScalar":
        try:
            return cls(int(obj["p"]), int(obj["prec"]), int(obj["value"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad scalar payload {obj!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# special functions on scalars


def hensel_sqrt(u: PadicScalar) -> PadicScalar:
    """Square root of a unit by Newton lifting from a Tonelli-Shanks seed.

    Of the two roots the one whose residue mod p lies in [1, (p-1)/2] is
    returned, so a square that is 1 mod p gets the root that is 1 mod p.
    """
    if not u.is_unit():
        raise NonUnit("hensel_sqrt needs a unit argument")
    p, prec = u.p, u.prec
    r = _sqrt_mod_prime(u.value % p, p)
    if r is None:
        raise NonResidue(f"{u.value} is not a square mod {p}")
    if r > p - r:
        r = p - r
    inv2 = pow(2, -1, p**prec)
    modulus = p
    while modulus < p**prec:
        modulus = min(modulus * modulus, p**prec)
        r = (r + u.value * pow(r, -1, modulus)) * inv2 % modulus
    root = PadicScalar(p, prec, r)
    assert (root * root).value == u.value
    return root


def _log_cutoff(p: int, prec: int) -> int:
    # all terms x^i/i with i > B have valuation i - v_p(i) >= prec
    e = 0
    while p**e < prec + e:
        e += 1
    return prec + e


def _exp_cutoff(p: int, prec: int) -> int:
    # term i has valuation >= i - (i-1)/(p-1), increasing in i
    i = 1
    while i * (p - 2) + 1 < prec * (p - 1):
        i += 1
    return i


def plog(u: PadicScalar) -> PadicScalar:
    """p-adic logarithm of a 1-unit, truncated exactly at the carried precision."""
    if u.value % u.p != 1:
        raise DomainError("plog needs u congruent to 1 mod p")
    p, prec = u.p, u.prec
    modulus = p**prec
    x = u.value - 1  # divisible by p as an integer
    cutoff = _log_cutoff(p, prec)
    headroom = max(int_valuation(i, p, prec) for i in range(1, cutoff + 1))
    work = p ** (prec + headroom)
    total = 0
    power = 1
    for i in range(1, cutoff + 1):
        power = power * x % work
        e = int_valuation(i, p, prec + headroom)
        term = (power // p**e) * pow(i // p**e, -1, modulus) % modulus
        total = (total - term if i % 2 == 0 else total + term) % modulus
    return PadicScalar(p, prec, total)


def pexp(x: PadicScalar) -> PadicScalar:
    """p-adic exponential of an element of pZ_p, truncated exactly."""
    if x.value % x.p != 0:
        raise DomainError("pexp needs x congruent to 0 mod p")
    p, prec = x.p, x.prec
    modulus = p**prec
    cutoff = _exp_cutoff(p, prec)
    headroom = factorial_valuation(cutoff, p)
    work = p ** (prec + headroom)
    total = 1
    power = 1
    fact = 1
    for i in range(1, cutoff + 1):
        power = power * x.value % work
        fact *= i
        e = factorial_valuation(i, p)
        unit = (fact // p**e) % modulus
        total = (total + (power // p**e) * pow(unit, -1, modulus)) % modulus
    return PadicScalar(p, prec, total)


def alpha_ratio(a: PadicScalar, b: PadicScalar, k: int) -> PadicScalar:
    """log(1+bp^k) / log(1+ap^k) for a unit a, computed with k+2 guard levels.

    The result alpha satisfies (1+ap^k)^alpha = 1+bp^k mod p^(N+k) and is
    returned at precision N.
    """
    a._check(b)
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if not a.is_unit():
        raise DomainError("alpha_ratio needs a unit first argument")
    p, prec = a.p, a.prec
    work = prec + k + 2
    num = plog(PadicScalar(p, work, 1 + a.value * p**k))
    den = plog(PadicScalar(p, work, 1 + b.value * p**k))
    # log(1+ap^k) has valuation exactly k for unit a
    unit = num.value // p**k
    alpha = (den.value // p**k) * pow(unit, -1, p ** (work - k)) % p ** (work - k)
    return PadicScalar(p, prec, alpha)


# ---------------------------------------------------------------------------
# truncated multivariate power series


def monomial_key(exps: tuple) -> tuple:
    """Graded-lex sort key used for canonical serialization."""
    return (sum(exps), exps)


@dataclass(frozen=True)
class SeriesRing:
    """Descriptor for Z_p[[T_1..T_n]] / m^M with m = (p, T_1..T_n)."""

    p: int
    n_vars: int
    trunc: int

    def __post_init__(self):
        if not is_odd_prime(self.p):
            raise DomainError(f"p must be an odd prime, got {self.p}")
        if self.n_vars < 0:
            raise DomainError("n_vars must be >= 0")
        if self.trunc < 1:
            raise DomainError("truncation must be >= 1")

    @property
    def cap(self) -> int:
        return self.trunc

    def coeff_modulus(self, degree: int) -> int:
        return self.p ** (self.trunc - degree)

    def zero(self) -> "SeriesElement":
        return SeriesElement(self, {})

    def one(self) -> "SeriesElement":
        return SeriesElement(self, {(0,) * self.n_vars: 1})

    def from_int(self, n: int) -> "SeriesElement":
        return SeriesElement(self, {(0,) * self.n_vars: n})

    def from_terms(self, terms: dict) -> "SeriesElement":
        return SeriesElement(self, dict(terms))

    def variable(self, index: int) -> "SeriesElement":
        exps = [0] * self.n_vars
        exps[index] = 1
        return SeriesElement(self, {tuple(exps): 1})

    def element_from_json(self, obj) -> "SeriesElement":
        return SeriesElement.from_json(self, obj)

    def json_header(self) -> dict:
        return {
            "type": "series",
            "p": self.p,
            "n_vars": self.n_vars,
            "trunc": self.trunc,
        }


class SeriesElement:
    """Element of A/m^M stored as monomial -> residue mod p^(M - degree)."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: SeriesRing, coeffs: dict):
        self.ring = ring
        reduced = {}
        for exps, c in coeffs.items():
            exps = tuple(exps)
            if len(exps) != ring.n_vars:
                raise DomainError(f"exponent vector {exps} has wrong arity")
            deg = sum(exps)
            if deg >= ring.trunc:
                continue
            c %= ring.coeff_modulus(deg)
            if c:
                reduced[exps] = c
        self.coeffs = reduced

    def _check(self, other: "SeriesElement"):
        if not isinstance(other, SeriesElement):
            raise TypeError(f"expected SeriesElement, got {type(other).__name__}")
        if self.ring != other.ring:
            raise PrecisionMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for exps, c in other.coeffs.items():
            out[exps] = out.get(exps, 0) + c
        return SeriesElement(self.ring, out)

    def __neg__(self):
        return SeriesElement(self.ring, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for exps, c in other.coeffs.items():
            out[exps] = out.get(exps, 0) - c
        return SeriesElement(self.ring, out)

    def __mul__(self, other):
        self._check(other)
        trunc = self.ring.trunc
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                if sum(exps) >= trunc:
                    continue
                out[exps] = out.get(exps, 0) + c1 * c2
        return SeriesElement(self.ring, out)

    def m_adic_depth(self) -> int:
        """Largest k with the element in m^k, capped at the truncation order."""
        depth = self.ring.trunc
        for exps, c in self.coeffs.items():
            deg = sum(exps)
            depth = min(depth, deg + int_valuation(c, self.ring.p, self.ring.trunc - deg))
        return depth

    def depth(self) -> int:
        return self.m_adic_depth()

    def p_content(self) -> int:
        """Minimal coefficient valuation; infinite (capped) for the zero element."""
        if not self.coeffs:
            return self.ring.trunc
        return min(
            int_valuation(c, self.ring.p, self.ring.trunc - sum(e))
            for e, c in self.coeffs.items()
        )

    def constant_coefficient(self) -> int:
        return self.coeffs.get((0,) * self.ring.n_vars, 0)

    def is_unit(self) -> bool:
        return self.constant_coefficient() % self.ring.p != 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def inv(self) -> "SeriesElement":
        """Newton iteration; each step doubles the correct m-adic depth."""
        if not self.is_unit():
            raise NonUnit("series inverse needs a unit constant coefficient")
        ring = self.ring
        x = ring.from_int(pow(self.constant_coefficient(), -1, ring.p**ring.trunc))
        two = ring.from_int(2)
        depth = 1
        while depth < ring.trunc:
            x = x * (two - self * x)
            depth *= 2
        assert (self * x) == ring.one()
        return x

    def sorted_terms(self) -> list:
        return sorted(self.coeffs.items(), key=lambda item: monomial_key(item[0]))

    def __eq__(self, other):
        return (
            isinstance(other, SeriesElement)
            and self.ring == other.ring
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ring, tuple(self.sorted_terms())))

    def __repr__(self):
        if not self.coeffs:
            return "SeriesElement(0)"
        parts = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                f"T{i+1}^{e}" if e > 1 else f"T{i+1}" for i, e in enumerate(exps) if e
            )
            parts.append(f"{c}*{mono}" if mono else str(c))
        return f"SeriesElement({' + '.join(parts)})"

    def lift(self) -> dict:
        return dict(self.coeffs)

    def to_json(self) -> dict:
        return {
            "p": self.ring.p,
            "n_vars": self.ring.n_vars,
            "trunc": self.ring.trunc,
            "coeffs": [[list(e), str(c)] for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, ring: SeriesRing, obj) -> "SeriesElement":
        try:
            if int(obj["p"]) != ring.p or int(obj["n_vars"]) != ring.n_vars or int(
                obj["trunc"]
            ) != ring.trunc:
                raise SchemaError(f"series payload {obj!r} does not match {ring}")
            coeffs = {tuple(int(x) for x in e): int(c) for e, c in obj["coeffs"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad series payload {obj!r}: {exc}") from exc
        return cls(ring, coeffs)
