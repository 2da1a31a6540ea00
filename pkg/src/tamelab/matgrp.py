"""Matrices over Z/p^N or truncated power-series rings.

Covers the group-side kernel machinery: commutators under the convention
[g, h] = g h g^-1 h^-1, Z_p-exponent powering, exact truncated matrix
exp/log, congruence depth, and the standard depth-one generating set of
the first congruence subgroup of SL_m.

The commutator convention is load-bearing: it is the one under which the
diagonal/unipotent relations of the SL_2 construction hold with exponent q-1 on the nose, and
flipping it flips exponent signs everywhere downstream.
"""

from __future__ import annotations

from .errors import (
    DepthError,
    NonUnitDeterminant,
    PrecisionMismatch,
    SchemaError,
)
from .padic import (
    PadicScalar,
    ScalarRing,
    SeriesElement,
    SeriesRing,
    _exp_cutoff,
    _log_cutoff,
    factorial_valuation,
    int_valuation,
)

Ring = ScalarRing | SeriesRing


class RingMatrix:
    """Square matrix with entries in one coefficient ring."""

    __slots__ = ("ring", "m", "rows")

    def __init__(self, ring: Ring, rows):
        self.ring = ring
        self.rows = tuple(tuple(row) for row in rows)
        self.m = len(self.rows)
        for row in self.rows:
            if len(row) != self.m:
                raise ValueError("matrix must be square")
            for entry in row:
                if entry.ring != ring:
                    raise PrecisionMismatch("entries live in different rings")

    # -- constructors -------------------------------------------------

    @classmethod
    def identity(cls, ring: Ring, m: int) -> "RingMatrix":
        one, zero = ring.one(), ring.zero()
        return cls(ring, [[one if i == j else zero for j in range(m)] for i in range(m)])

    @classmethod
    def zeros(cls, ring: Ring, m: int) -> "RingMatrix":
        zero = ring.zero()
        return cls(ring, [[zero] * m for _ in range(m)])

    @classmethod
    def from_int_rows(cls, ring: Ring, rows) -> "RingMatrix":
        return cls(ring, [[ring.from_int(e) for e in row] for row in rows])

    # -- ring operations ----------------------------------------------

    def _check(self, other: "RingMatrix"):
        if not isinstance(other, RingMatrix):
            raise TypeError(f"expected RingMatrix, got {type(other).__name__}")
        if self.ring != other.ring or self.m != other.m:
            raise PrecisionMismatch("matrices live in different rings or sizes")

    def __mul__(self, other):
        self._check(other)
        m = self.m
        rows = []
        for i in range(m):
            row = []
            for j in range(m):
                acc = self.rows[i][0] * other.rows[0][j]
                for t in range(1, m):
                    acc = acc + self.rows[i][t] * other.rows[t][j]
                row.append(acc)
            rows.append(row)
        return RingMatrix(self.ring, rows)

    def __add__(self, other):
        self._check(other)
        return RingMatrix(
            self.ring,
            [
                [self.rows[i][j] + other.rows[i][j] for j in range(self.m)]
                for i in range(self.m)
            ],
        )

    def __sub__(self, other):
        self._check(other)
        return RingMatrix(
            self.ring,
            [
                [self.rows[i][j] - other.rows[i][j] for j in range(self.m)]
                for i in range(self.m)
            ],
        )

    def __neg__(self):
        return RingMatrix(self.ring, [[-e for e in row] for row in self.rows])

    def scale(self, c) -> "RingMatrix":
        return RingMatrix(self.ring, [[c * e for e in row] for row in self.rows])

    def trace(self):
        acc = self.rows[0][0]
        for i in range(1, self.m):
            acc = acc + self.rows[i][i]
        return acc

    def det(self):
        """Division-free determinant: DP over column subsets."""
        m = self.m
        dp = {0: self.ring.one()}
        for k in range(m):
            nxt = {}
            for mask, val in dp.items():
                idx = 0
                for j in range(m):
                    bit = 1 << j
                    if mask & bit:
                        continue
                    term = val * self.rows[k][j]
                    if idx % 2 == 1:
                        term = -term
                    new = mask | bit
                    nxt[new] = nxt[new] + term if new in nxt else term
                    idx += 1
            dp = nxt
        return dp[(1 << m) - 1]

    def _minor(self, drop_i: int, drop_j: int) -> "RingMatrix":
        rows = [
            [e for j, e in enumerate(row) if j != drop_j]
            for i, row in enumerate(self.rows)
            if i != drop_i
        ]
        return RingMatrix(self.ring, rows)

    def inverse(self) -> "RingMatrix":
        d = self.det()
        if not d.is_unit():
            raise NonUnitDeterminant(f"determinant {d!r} is not a unit")
        if self.m <= 4:
            dinv = d.inv()
            rows = []
            for i in range(self.m):
                row = []
                for j in range(self.m):
                    c = self._minor(j, i).det() if self.m > 1 else self.ring.one()
                    if (i + j) % 2 == 1:
                        c = -c
                    row.append(c * dinv)
                rows.append(row)
            return RingMatrix(self.ring, rows)
        return self._gauss_jordan_inverse()

    def _gauss_jordan_inverse(self) -> "RingMatrix":
        # unit pivots always exist for invertible matrices over a local ring
        m = self.m
        a = [list(row) for row in self.rows]
        b = [list(row) for row in RingMatrix.identity(self.ring, m).rows]
        for col in range(m):
            pivot = next(
                (r for r in range(col, m) if a[r][col].is_unit()),
                None,
            )
            if pivot is None:
                raise NonUnitDeterminant(f"no unit pivot in column {col}")
            a[col], a[pivot] = a[pivot], a[col]
            b[col], b[pivot] = b[pivot], b[col]
            scale = a[col][col].inv()
            a[col] = [scale * e for e in a[col]]
            b[col] = [scale * e for e in b[col]]
            for r in range(m):
                if r == col or a[r][col].is_zero():
                    continue
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
                b[r] = [x - factor * y for x, y in zip(b[r], b[col])]
        return RingMatrix(self.ring, b)

    # -- comparisons and serialization ----------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, RingMatrix)
            and self.ring == other.ring
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ring, self.rows))

    def __repr__(self):
        body = "; ".join(
            ", ".join(repr(e) for e in row) for row in self.rows
        )
        return f"RingMatrix[{body}]"

    def to_json(self) -> dict:
        return {
            "ring": self.ring.json_header(),
            "m": self.m,
            "entries": [e.to_json() for row in self.rows for e in row],
        }

    @classmethod
    def from_json(cls, obj) -> "RingMatrix":
        try:
            header = obj["ring"]
            if header["type"] == "padic":
                ring: Ring = ScalarRing(int(header["p"]), int(header["prec"]))
            elif header["type"] == "series":
                ring = SeriesRing(
                    int(header["p"]), int(header["n_vars"]), int(header["trunc"])
                )
            else:
                raise SchemaError(f"unknown ring type {header!r}")
            m = int(obj["m"])
            entries = [ring.element_from_json(e) for e in obj["entries"]]
            if len(entries) != m * m:
                raise SchemaError("entry count does not match size")
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad matrix payload: {exc}") from exc
        return cls(ring, [entries[i * m : (i + 1) * m] for i in range(m)])


# ---------------------------------------------------------------------------
# commutators and powering


def commutator(g: RingMatrix, h: RingMatrix) -> RingMatrix:
    """[g, h] = g h g^-1 h^-1."""
    g._check(h)
    return g * h * g.inverse() * h.inverse()


def int_power(g: RingMatrix, e: int) -> RingMatrix:
    if e < 0:
        return int_power(g.inverse(), -e)
    acc = RingMatrix.identity(g.ring, g.m)
    base = g
    while e:
        if e & 1:
            acc = acc * base
        base = base * base
        e >>= 1
    return acc


def congruence_depth(g: RingMatrix) -> int:
    """Largest k <= precision cap with g congruent to I mod m^k."""
    one, zero = g.ring.one(), g.ring.zero()
    depth = g.ring.cap
    for i in range(g.m):
        for j in range(g.m):
            delta = g.rows[i][j] - (one if i == j else zero)
            depth = min(depth, delta.depth())
            if depth == 0:
                return 0
    return depth


def zp_power(g: RingMatrix, alpha: PadicScalar) -> RingMatrix:
    """g^alpha for a depth->=1 element, via the canonical integer representative.

    A depth-1 element satisfies g^(p^(cap-1)) = I at the working precision, so
    the result depends only on alpha mod p^(cap-1).
    """
    if g.ring.p != alpha.p:
        raise PrecisionMismatch("exponent prime differs from matrix prime")
    if congruence_depth(g) < 1:
        raise DepthError("zp_power needs g congruent to I mod m")
    window = min(alpha.prec, g.ring.cap - 1)
    return int_power(g, alpha.value % g.ring.p**window)


# ---------------------------------------------------------------------------
# truncated matrix exp / log
#
# Terms are accumulated on exact integer lifts (monomial -> coefficient
# dictionaries) so that division by i! or i is an exact integer division;
# coefficients are kept modulo p^(cap - degree + headroom) where headroom
# absorbs the worst denominator valuation over the cutoff range.


def _content(g: RingMatrix) -> int:
    return min(e.p_content() for row in g.rows for e in row)


def _lift(g: RingMatrix):
    return [[e.lift() for e in row] for row in g.rows]


def _poly_mat_mul(a, b, m, max_deg, mods):
    out = []
    for i in range(m):
        row = []
        for j in range(m):
            acc: dict = {}
            for t in range(m):
                for e1, c1 in a[i][t].items():
                    for e2, c2 in b[t][j].items():
                        exps = tuple(x + y for x, y in zip(e1, e2))
                        deg = sum(exps)
                        if deg >= max_deg:
                            continue
                        acc[exps] = (acc.get(exps, 0) + c1 * c2) % mods[deg]
            row.append({e: c for e, c in acc.items() if c})
        out.append(row)
    return out


def _series_sum(g: RingMatrix, kind: str) -> RingMatrix:
    ring = g.ring
    p, cap = ring.p, ring.cap
    if isinstance(ring, SeriesRing):
        max_deg = ring.trunc
        base_mods = [p ** (cap - d) for d in range(max_deg)]
    else:
        max_deg = 1
        base_mods = [p**cap]

    if kind == "exp":
        cutoff = _exp_cutoff(p, cap)
        headroom = factorial_valuation(cutoff, p)
    else:
        cutoff = _log_cutoff(p, cap)
        headroom = max(int_valuation(i, p, cap) for i in range(1, cutoff + 1))
    mods = [mod * p**headroom for mod in base_mods]

    ident = _lift(RingMatrix.identity(ring, g.m))
    x = _lift(g)
    acc = [[dict(e) for e in row] for row in ident] if kind == "exp" else [
        [{} for _ in range(g.m)] for _ in range(g.m)
    ]
    power = ident
    fact = 1
    for i in range(1, cutoff + 1):
        power = _poly_mat_mul(power, x, g.m, max_deg, mods)
        if kind == "exp":
            fact *= i
            e = factorial_valuation(i, p)
            unit = fact // p**e
            sign = 1
        else:
            e = int_valuation(i, p, cap + headroom)
            unit = i // p**e
            sign = 1 if i % 2 == 1 else -1
        unit_inv = pow(unit % base_mods[0], -1, base_mods[0])
        shift = p**e
        for r in range(g.m):
            for c_ in range(g.m):
                cell = acc[r][c_]
                for exps, coeff in power[r][c_].items():
                    deg = sum(exps)
                    term = (coeff // shift) * unit_inv * sign
                    cell[exps] = (cell.get(exps, 0) + term) % base_mods[deg]

    if isinstance(ring, SeriesRing):
        rows = [[SeriesElement(ring, cell) for cell in row] for row in acc]
    else:
        rows = [
            [PadicScalar(p, cap, cell.get((), 0)) for cell in row] for row in acc
        ]
    return RingMatrix(ring, rows)


def mat_exp(x: RingMatrix) -> RingMatrix:
    """exp of a matrix divisible by p, truncated exactly at the ring precision."""
    if _content(x) < 1:
        raise DepthError("mat_exp needs every entry divisible by p")
    return _series_sum(x, "exp")


def mat_log(g: RingMatrix) -> RingMatrix:
    """log of a matrix congruent to I mod p, truncated exactly."""
    delta = g - RingMatrix.identity(g.ring, g.m)
    if _content(delta) < 1:
        raise DepthError("mat_log needs g congruent to I mod p")
    return _series_sum(delta, "log")


# ---------------------------------------------------------------------------
# standard generators of the first congruence subgroup of SL_m


def sl_standard_generators(m: int, p: int, prec: int = 4) -> list[RingMatrix]:
    """Depth-one generators of ker(SL_m(Z/p^prec) -> SL_m(Z/p)).

    Off-diagonal generators are exp of the elementary matrices with p in
    place of 1; the m-1 diagonal-block generators are exp of
    E_i = E_(i,i) - E_(i+1,i+1) + E_(i,i+1) - E_(i+1,i), all trace zero.
    Total count m^2 - 1.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    ring = ScalarRing(p, prec)
    gens = []
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            e = [[0] * m for _ in range(m)]
            e[i][j] = p
            gens.append(mat_exp(RingMatrix.from_int_rows(ring, e)))
    for i in range(m - 1):
        e = [[0] * m for _ in range(m)]
        e[i][i] = p
        e[i + 1][i + 1] = -p
        e[i][i + 1] = p
        e[i + 1][i] = -p
        gens.append(mat_exp(RingMatrix.from_int_rows(ring, e)))
    return gens
