"""Group-side inertial certificates, local plans, and identity suites.

A certificate is a pair (x, y) with [x, y] = y^(a p^k) for a unit a and
k >= 1.  Powering x by alpha = log(1+bp^k)/log(1+ap^k) turns it into a
lift of the two-generator tame local group, whose single defining relation
[sigma, tau] = tau^(q-1) the plan must satisfy exactly; because the local
presentation has one relation, that check alone certifies the lift extends.

The suites reproduce, with exact equality at the stated precision, every
explicit matrix identity the constructions rest on: the SL_2 diagonal /
unipotent relations, the quaternion-lattice identities inside SL_4, and
the weight-k conjugation relations over truncated power-series rings,
together with the span of their images in the graded layer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    CertificateInvalid,
    DomainError,
    NotNonresidue,
    RingMismatch,
    SchemaError,
    TameRelationFailed,
    ZeroVector,
)
from .matgrp import RingMatrix, commutator, int_power, mat_exp, mat_log, zp_power
from .padic import (
    PadicScalar,
    ScalarRing,
    SeriesRing,
    alpha_ratio,
    hensel_sqrt,
    int_valuation,
)
from .pcentral import FiniteQuotientGroup, PCentralChain, dictionary_bracket
from .report import SuiteReport


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class GroupInertialCertificate:
    """y != 1 together with x, a unit a and k >= 1 with [x, y] = y^(a p^k)."""

    y: RingMatrix
    x: RingMatrix
    a: PadicScalar
    k: int

    @property
    def ring(self):
        return self.y.ring

    @property
    def exponent(self) -> int:
        return self.a.value * self.ring.p**self.k

    def to_json(self) -> dict:
        return {
            "y": self.y.to_json(),
            "x": self.x.to_json(),
            "a": self.a.to_json(),
            "k": self.k,
        }

    @classmethod
    def from_json(cls, obj) -> "GroupInertialCertificate":
        try:
            return cls(
                RingMatrix.from_json(obj["y"]),
                RingMatrix.from_json(obj["x"]),
                PadicScalar.from_json(obj["a"]),
                int(obj["k"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad certificate payload: {exc}") from exc


def verify_certificate(cert: GroupInertialCertificate) -> bool:
    """Exact check of [x, y] = y^(a p^k) at the working precision."""
    if cert.x.ring != cert.y.ring or cert.a.p != cert.y.ring.p:
        raise RingMismatch("certificate pieces live over different rings")
    if cert.k < 1 or not cert.a.is_unit():
        return False
    if cert.y == RingMatrix.identity(cert.y.ring, cert.y.m):
        return False
    return commutator(cert.x, cert.y) == int_power(cert.y, cert.exponent)


@dataclass(frozen=True)
class LocalPlan:
    """Lift sigma -> x^alpha, tau -> y of the tame local group at q = 1 + b p^k."""

    certificate: GroupInertialCertificate
    b: PadicScalar
    alpha: PadicScalar
    sigma_image: RingMatrix
    tau_image: RingMatrix

    @property
    def q_minus_one(self) -> int:
        return self.b.value * self.certificate.ring.p**self.certificate.k

    def to_json(self) -> dict:
        # q - 1 = b p^k is faithful at k extra levels beyond b's precision
        ring = self.certificate.ring
        q_scalar = PadicScalar(ring.p, self.b.prec + self.certificate.k, self.q_minus_one)
        out = self.certificate.to_json()
        out.update(
            {
                "b": self.b.to_json(),
                "alpha": self.alpha.to_json(),
                "q_minus_1": q_scalar.to_json(),
            }
        )
        return out


def build_local_plan(cert: GroupInertialCertificate, b: PadicScalar) -> LocalPlan:
    """Construct and exactly re-verify the plan for a prime of norm 1 + b p^k.

    TameRelationFailed is raised, not reported: with a verified certificate
    and alpha computed at k+2 guard digits the relation can only fail
    through a precision shortfall, which must halt loudly.
    """
    if not verify_certificate(cert):
        raise CertificateInvalid("certificate identity fails at this precision")
    b._check(cert.a)
    alpha = alpha_ratio(cert.a, b, cert.k)
    sigma = zp_power(cert.x, alpha)
    plan = LocalPlan(cert, b, alpha, sigma, cert.y)
    lhs = commutator(sigma, cert.y)
    rhs = int_power(cert.y, plan.q_minus_one)
    if lhs != rhs:
        raise TameRelationFailed("tame relation failed despite valid certificate")
    return plan


def standard_inertial_certificate(
    p: int, precision: int, a: PadicScalar | int, k: int
) -> GroupInertialCertificate:
    """Diagonal-versus-unipotent certificate with exponent exactly a p^k.

    y is the upper unipotent with entry p, x = diag(beta, beta^-1) with
    beta the square root of 1 + a p^k that is 1 mod p; conjugation scales
    the unipotent entry by beta^2.
    """
    ring = ScalarRing(p, precision)
    if isinstance(a, int):
        a = PadicScalar(p, precision, a)
    beta = hensel_sqrt(PadicScalar(p, precision, 1 + a.value * p**k))
    y = RingMatrix.from_int_rows(ring, [[1, p], [0, 1]])
    x = RingMatrix(
        ring,
        [[beta, ring.zero()], [ring.zero(), beta.inv()]],
    )
    return GroupInertialCertificate(y, x, a, k)


# ---------------------------------------------------------------------------
# the SL_2 witness family


def sl2_witnesses(ring: ScalarRing, qnorm: int) -> dict:
    """Generators x, y, z of depth one and the diagonal/rotation pair s, t.

    alpha is the square root of qnorm that is 1 mod p.  t is symmetric with
    off-diagonal (alpha^-1 - alpha)/2, the sign under which conjugation
    scales the nilpotent direction of z by alpha^2.
    """
    p = ring.p
    if qnorm % p != 1:
        raise ValueError("qnorm must be 1 mod p")
    alpha = hensel_sqrt(ring.from_int(qnorm))
    alpha_inv = alpha.inv()
    half = ring.from_int(2).inv()
    c = (alpha + alpha_inv) * half
    s_off = (alpha_inv - alpha) * half
    zero = ring.zero()
    return {
        "x": RingMatrix.from_int_rows(ring, [[1, p], [0, 1]]),
        "y": RingMatrix.from_int_rows(ring, [[1, 0], [p, 1]]),
        "z": RingMatrix.from_int_rows(ring, [[1 + p, p], [-p, 1 - p]]),
        "s": RingMatrix(ring, [[alpha, zero], [zero, alpha_inv]]),
        "t": RingMatrix(ring, [[c, s_off], [s_off, c]]),
        "alpha": alpha,
    }


def sl2_relation_suite(p: int, precision: int, qnorm: int) -> SuiteReport:
    """The three tame relations of the SL_2 construction, checked exactly."""
    ring = ScalarRing(p, precision)
    w = sl2_witnesses(ring, qnorm)
    report = SuiteReport("sl2", data={"p": p, "precision": precision, "qnorm": qnorm})
    e = qnorm - 1
    for anchor, g, u in (
        ("[s,x]=x^(q-1)", w["s"], w["x"]),
        ("[s^-1,y]=y^(q-1)", w["s"].inverse(), w["y"]),
        ("[t,z]=z^(q-1)", w["t"], w["z"]),
    ):
        report.add(anchor, commutator(g, u) == int_power(u, e))
    return report


# ---------------------------------------------------------------------------
# weight-k relations over truncated series rings


def _weight_monomials(ring: SeriesRing, k: int):
    """Elements p^(a0) T^beta of total weight k, as (a0, beta, element)."""
    for beta in itertools.product(range(k + 1), repeat=ring.n_vars):
        t_deg = sum(beta)
        if t_deg > k:
            continue
        a0 = k - t_deg
        yield a0, beta, ring.from_terms({beta: ring.p**a0})


def _embedded(ring, m: int, entries: dict) -> RingMatrix:
    rows = [[ring.one() if i == j else ring.zero() for j in range(m)] for i in range(m)]
    for (i, j), val in entries.items():
        rows[i][j] = val
    return RingMatrix(ring, rows)


def _embedded_raw(ring, m: int, entries: dict) -> RingMatrix:
    rows = [[ring.zero() for _ in range(m)] for _ in range(m)]
    for (i, j), val in entries.items():
        rows[i][j] = val
    return RingMatrix(ring, rows)


def slm_series_suite(
    m: int, k: int, n_vars: int, truncation: int, p: int
) -> SuiteReport:
    """Conjugation relations in weight k over Z_p[[T_1..T_n]]/m^M, plus span.

    For every weight-k monomial mu and ordered basis pair (i, j), checks the
    diagonal conjugations of I + mu E_ij and I + mu E_ji and the D/N pair
    (N the rank-one nilpotent, D the symmetric conjugator scaling N by
    (p^k - 1)^2), each with exponent (p^k - 1)^2 exactly.  The harvested
    unipotent directions must span the full graded layer, verified by an
    independent rank computation over F_p.
    """
    if truncation <= k:
        raise ValueError("truncation must exceed the weight k")
    ring = SeriesRing(p, n_vars, truncation)
    report = SuiteReport(
        f"slm-series/m{m}k{k}n{n_vars}",
        data={"m": m, "k": k, "n_vars": n_vars, "trunc": truncation, "p": p},
    )
    u = ring.from_int(1 - p**k)
    u_inv = u.inv()
    half = ring.from_int(2).inv()
    c = (u + u_inv) * half
    s_off = (u_inv - u) * half
    exponent = (p**k - 1) ** 2

    monomials = list(_weight_monomials(ring, k))
    pairs = [(i, j) for i in range(m) for j in range(m) if i != j]

    # gr_k coordinates: (monomial slot) x (matrix slot: E_ij then partial diag sums)
    mono_index = {beta: t for t, (a0, beta, _) in enumerate(monomials)}
    pair_index = {pr: t for t, pr in enumerate(pairs)}
    mat_dim = len(pairs) + (m - 1)
    gr_dim = len(monomials) * mat_dim
    harvested = []

    def gr_coords(w: RingMatrix):
        """Coordinates of (w - I)'s weight-k part in the graded layer, mod p."""
        coords = [0] * gr_dim
        for i in range(m):
            for j in range(m):
                entry = w.rows[i][j] - (ring.one() if i == j else ring.zero())
                for exps, coeff in entry.coeffs.items():
                    t_deg = sum(exps)
                    val = int_valuation(coeff, p, truncation - t_deg)
                    if t_deg + val != k or exps not in mono_index:
                        continue
                    digit = (coeff // p**val) % p
                    slot = mono_index[exps] * mat_dim
                    if i != j:
                        coords[slot + pair_index[(i, j)]] = digit
                    else:
                        # diagonal entry contributes to partial-sum coordinates
                        for t in range(i, m - 1):
                            base = slot + len(pairs) + t
                            coords[base] = (coords[base] + digit) % p
        return coords

    checked_dn = False
    for a0, beta, mu in monomials:
        mono_label = f"p^{a0}" + "".join(
            f"*T{i+1}^{e}" for i, e in enumerate(beta) if e
        )
        for i, j in pairs:
            s = _embedded(ring, m, {(i, i): u, (j, j): u_inv})
            upper = _embedded(ring, m, {(i, j): mu})
            report.add(
                f"{mono_label}/({i},{j})/diag-conj-upper",
                s * upper * s.inverse() == int_power(upper, exponent),
            )
            s_swap = _embedded(ring, m, {(i, i): u_inv, (j, j): u})
            lower = _embedded(ring, m, {(j, i): mu})
            report.add(
                f"{mono_label}/({i},{j})/diag-conj-lower",
                s_swap * lower * s_swap.inverse() == int_power(lower, exponent),
            )
            one = ring.one()
            n_mat = _embedded_raw(
                ring, m, {(i, i): one, (i, j): one, (j, i): -one, (j, j): -one}
            )
            d_mat = _embedded(
                ring, m, {(i, i): c, (i, j): s_off, (j, i): s_off, (j, j): c}
            )
            if not checked_dn:
                report.add("N-nilpotent", n_mat * n_mat == RingMatrix.zeros(ring, m))
                report.add(
                    "DND^-1=(p^k-1)^2*N",
                    d_mat * n_mat * d_mat.inverse()
                    == n_mat.scale(ring.from_int(exponent)),
                )
                checked_dn = True
            w = RingMatrix.identity(ring, m) + n_mat.scale(mu)
            report.add(
                f"{mono_label}/({i},{j})/DN-conj",
                d_mat * w * d_mat.inverse() == int_power(w, exponent),
            )
            if i < j:
                harvested.append(gr_coords(upper))
                harvested.append(gr_coords(lower))
                harvested.append(gr_coords(w))

    spanned = _fp_rank(harvested, p) == gr_dim
    report.add("gr_k-span", spanned, f"rank target {gr_dim}")
    report.data["gr_dim"] = gr_dim
    return report


def _fp_rank(rows: list, p: int) -> int:
    rows = [list(r) for r in rows if any(r)]
    rank_ = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((i for i in range(rank_, len(rows)) if rows[i][c] % p), None)
        if pivot is None:
            continue
        rows[rank_], rows[pivot] = rows[pivot], rows[rank_]
        inv = pow(rows[rank_][c], -1, p)
        rows[rank_] = [(inv * x) % p for x in rows[rank_]]
        for i in range(len(rows)):
            if i != rank_ and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank_])]
        rank_ += 1
    return rank_


# ---------------------------------------------------------------------------
# stable generation audits


@dataclass
class AuditLevel:
    level: int
    membership_ok: bool
    certificates_ok: bool
    meaningful: bool
    spans: bool

    @property
    def ok(self) -> bool:
        return self.membership_ok and self.certificates_ok and self.spans


def stable_generation_audit(
    G: FiniteQuotientGroup,
    chain: PCentralChain,
    certs_by_level: dict,
    window: int,
    require_deeper_x: bool = False,
) -> list[AuditLevel]:
    """Per-level audit: certificates live in P_n, hold exactly, and span gr_n.

    `require_deeper_x` additionally demands x in P_(n+1) (the power-shift
    refinement; off by default since the base definitions do not need it).
    At finite modulus a certificate only carries information when
    y^(a p^k) != I, which is recorded in `meaningful`.
    """
    out = []
    for n in range(1, window + 1):
        pn = chain.level(n)
        pn1 = chain.level(n + 1)
        certs = certs_by_level.get(n, [])
        membership_ok = True
        certs_ok = bool(certs)
        meaningful = bool(certs)
        y_tuples = []
        for cert in certs:
            y_t = G.to_tuple(cert.y)
            x_t = G.to_tuple(cert.x)
            y_tuples.append(y_t)
            if y_t not in pn or x_t not in G.elements:
                membership_ok = False
            if require_deeper_x and x_t not in pn1:
                membership_ok = False
            if not verify_certificate(cert):
                certs_ok = False
            if int_power(cert.y, cert.exponent) == RingMatrix.identity(
                cert.ring, cert.y.m
            ):
                meaningful = False
        gen_set = list(y_tuples) + list(chain.level_gens[n]) if n < len(
            chain.level_gens
        ) else list(y_tuples)
        spans = certs_ok and membership_ok and G.subgroup_closure(gen_set) == pn
        out.append(AuditLevel(n, membership_ok, certs_ok, meaningful, spans))
    return out


# ---------------------------------------------------------------------------
# quaternion lattice inside SL_4


def is_nonresidue(a: int, p: int) -> bool:
    return pow(a % p, (p - 1) // 2, p) == p - 1


def quaternion_matrices(ring: ScalarRing, a: int) -> dict:
    p = ring.p
    u = [[0, p], [1, 0]]
    zeros = [[0, 0], [0, 0]]

    def block(tl, tr, bl, br):
        rows = []
        for r in range(2):
            rows.append(list(tl[r]) + list(tr[r]))
        for r in range(2):
            rows.append(list(bl[r]) + list(br[r]))
        return RingMatrix.from_int_rows(ring, rows)

    neg_u = [[-e for e in row] for row in u]
    a_id = [[a, 0], [0, a]]
    ident = [[1, 0], [0, 1]]
    return {
        "A": block(u, zeros, zeros, neg_u),
        "B": block(zeros, a_id, ident, zeros),
    }


def quaternion_uniform_suite(
    a: int, p: int, precision: int, search_exponent_bound: int | None = None
) -> SuiteReport:
    """Identities of the quaternion lattice and a bounded certificate search.

    Builds A, B with A^2 = pI, B^2 = aI, AB = -BA, exponentiates the scaled
    lattice basis to x, y, z, searches cyclic-direction candidates for any
    meaningful inertial certificate (none should exist: the associated Lie
    algebra is toral), and records the structure constants the commutator
    limit produces on (log x, log y, log z).
    """
    if not is_nonresidue(a, p):
        raise NotNonresidue(f"{a} is a square mod {p}")
    ring = ScalarRing(p, precision)
    report = SuiteReport("quaternion", data={"a": a, "p": p, "precision": precision})
    mats = quaternion_matrices(ring, a)
    big_a, big_b = mats["A"], mats["B"]
    ident = RingMatrix.identity(ring, 4)
    report.add("A^2=pI", big_a * big_a == ident.scale(ring.from_int(p)))
    report.add("B^2=aI", big_b * big_b == ident.scale(ring.from_int(a)))
    report.add("AB=-BA", big_a * big_b == -(big_b * big_a))

    a0 = big_a.scale(ring.from_int(p))
    b0 = big_b.scale(ring.from_int(p))
    c0 = (big_a * big_b).scale(ring.from_int(p))
    x, y, z = mat_exp(a0), mat_exp(b0), mat_exp(c0)
    report.add(
        "log-roundtrip", mat_log(x) == a0 and mat_log(y) == b0 and mat_log(z) == c0
    )

    bound = search_exponent_bound or p ** min(3, precision - 1)
    found = _cyclic_direction_certificate_search((x, y, z), bound)
    report.add(
        "no-inertial-certificate",
        found is None,
        f"cyclic-direction search, exponent bound {bound}",
    )

    # bracket recording needs headroom: the commutator limit divides by p^2
    # and the interesting coordinates carry one extra factor of p
    work = max(precision, 6)
    wring = ScalarRing(p, work)
    wa = quaternion_matrices(wring, a)
    wa0 = wa["A"].scale(wring.from_int(p))
    wb0 = wa["B"].scale(wring.from_int(p))
    wc0 = (wa["A"] * wa["B"]).scale(wring.from_int(p))
    wx, wy, wz = mat_exp(wa0), mat_exp(wb0), mat_exp(wc0)
    constants = {}
    pairs = {"xy": (wx, wy), "xz": (wx, wz), "yz": (wy, wz)}
    basis = (wa0, wb0, wc0)
    ok_brackets = True
    for label, (g, h) in pairs.items():
        bra = dictionary_bracket(g, h)
        coords = _quaternion_coordinates(bra.matrix, basis, p)
        constants[label] = {
            "coords": [str(v) for v in coords] if coords else None,
            "certified_levels": bra.certified_levels,
        }
        if coords is None:
            ok_brackets = False
    report.add("dictionary-brackets-in-lattice", ok_brackets)
    report.data["structure_constants"] = constants
    return report


def _quaternion_coordinates(bracket: RingMatrix, basis, p: int):
    """Solve bracket = c1 A0 + c2 B0 + c3 C0 via disjoint probe entries."""
    prec = bracket.ring.prec
    reduced = [
        RingMatrix(
            bracket.ring,
            [
                [PadicScalar(p, prec, e.value) for e in row]
                for row in mat.rows
            ],
        )
        for mat in basis
    ]
    probes = [(1, 0), (2, 0), (3, 0)]  # A0, B0, C0 are the only ones nonzero there
    coords = []
    for idx, (r, c) in enumerate(probes):
        denom = reduced[idx].rows[r][c]
        num = bracket.rows[r][c]
        v = denom.valuation()
        if denom.is_zero() or num.value % p**v:
            return None
        scaled_prec = prec - v
        coord = (
            num.value
            // p**v
            * pow(denom.value // p**v, -1, p**scaled_prec)
            % p**scaled_prec
        )
        coords.append(PadicScalar(p, scaled_prec, coord))
    # consistency: the combination must reproduce the bracket at that precision
    combo_prec = min(c_.prec for c_ in coords)
    lhs = _reduce_to(bracket, combo_prec)
    combo = None
    for coord, mat in zip(coords, reduced):
        term = _reduce_to(mat, combo_prec).scale(
            PadicScalar(p, combo_prec, coord.value)
        )
        combo = term if combo is None else combo + term
    if combo != lhs:
        return None
    return [c_.value for c_ in coords]


def _reduce_to(mat: RingMatrix, prec: int) -> RingMatrix:
    ring = ScalarRing(mat.ring.p, prec)
    return RingMatrix(
        ring,
        [[PadicScalar(ring.p, prec, e.value) for e in row] for row in mat.rows],
    )


def _cyclic_direction_certificate_search(directions, exponent_bound: int):
    """Search [g^e, y] = y^(a p^k) over cyclic powers of the given directions."""
    ring = directions[0].ring
    p = ring.p
    ident = RingMatrix.identity(ring, directions[0].m)
    for y in directions:
        powers = {}
        acc = ident
        e = 1
        while True:
            acc = acc * y
            if acc == ident:
                break
            powers[acc] = e
            e += 1
            if e > exponent_bound * p:
                break
        y_inv = y.inverse()
        for g in directions:
            g_inv = g.inverse()
            base, base_inv = ident, ident
            for _ in range(1, exponent_bound):
                base = base * g
                base_inv = g_inv * base_inv
                com = base * y * base_inv * y_inv
                if com == ident:
                    continue
                if com in powers:
                    hit = powers[com]
                    k = int_valuation(hit, p, ring.prec)
                    if 1 <= k and hit // p**k % p:
                        return {"y": y, "x": base, "exponent": hit}
    return None


# ---------------------------------------------------------------------------
# exhaustive certificate search in enumerated groups


def brute_search_certificate(
    G: FiniteQuotientGroup, y, k_max: int
) -> GroupInertialCertificate | None:
    """Exhaustive scan over x in G for [x, y] = y^(a p^k), y^(a p^k) != 1.

    Sound and complete at the given modulus: every x is tried against the
    full nontrivial power table of y.  Torsion-degenerate certificates
    (exponent annihilating y) are excluded; at finite modulus they exist
    for every element and carry no information.
    """
    y_t = y if isinstance(y, tuple) else G.to_tuple(y)
    if y_t == G.identity:
        raise ZeroVector("y must differ from the identity")
    if y_t not in G.elements:
        raise DomainError("y is not an element of the enumerated group")
    powers = {}
    acc = y_t
    e = 1
    while acc != G.identity:
        powers[acc] = e
        acc = G.mul(acc, y_t)
        e += 1
    y_inv = G.inv(y_t)
    for x_t in sorted(G.elements):
        com = G.mul(G.mul(x_t, y_t), G.mul(G.inv(x_t), y_inv))
        if com == G.identity or com not in powers:
            continue
        hit = powers[com]
        k = int_valuation(hit, G.p, G.prec)
        if k < 1 or k > k_max:
            continue
        unit = hit // G.p**k
        if unit % G.p == 0:
            continue
        cert = GroupInertialCertificate(
            G.to_matrix(y_t),
            G.to_matrix(x_t),
            PadicScalar(G.p, G.prec, unit),
            k,
        )
        assert verify_certificate(cert)
        return cert
    return None
