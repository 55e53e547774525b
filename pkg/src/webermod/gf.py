"""Arithmetic in GF(p) and GF(p^2), square roots, and polynomial roots.

GF(p^2) is realized as GF(p)[u]/(u^2 - d) with d the smallest positive
quadratic nonresidue mod p, so serialized elements are reproducible.
Polynomials store (a, b) coefficient pairs and run their convolutions on
numpy int64 arrays; all intermediate products stay below 2^63 for the
desk-scale primes this package targets.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InternalError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class GF2Field:
    """GF(p^2) = GF(p)[u]/(u^2 - d), d the smallest positive nonresidue."""

    __slots__ = ("p", "d", "_gen", "_nru_cache")

    def __init__(self, p: int, d: int):
        self.p = p
        self.d = d
        self._gen = None
        self._nru_cache: dict[int, "GF2Elt"] = {}

    def __repr__(self):
        return f"GF2Field(p={self.p}, d={self.d})"

    def __eq__(self, other):
        return isinstance(other, GF2Field) and (self.p, self.d) == (other.p, other.d)

    def __hash__(self):
        return hash((self.p, self.d))

    def elt(self, a: int, b: int = 0) -> "GF2Elt":
        return GF2Elt(self, a % self.p, b % self.p)

    def zero(self) -> "GF2Elt":
        return self.elt(0)

    def one(self) -> "GF2Elt":
        return self.elt(1)

    def from_text(self, text: str) -> "GF2Elt":
        s = text.strip().replace(" ", "")
        if "u" in s:
            head, _, _ = s.partition("u")
            head = head.rstrip("*")
            if head in ("", "+", "-"):
                a_s, b_s = "0", head + "1"
            else:
                cut = max(head.rfind("+"), head.rfind("-"), 0)
                if cut == 0 and head[0] not in "+-":
                    a_s, b_s = "0", head
                else:
                    a_s, b_s = head[:cut], head[cut:]
                    if a_s == "":
                        a_s = "0"
                    if b_s in ("+", "-"):
                        b_s += "1"
            return self.elt(int(a_s or 0), int(b_s))
        return self.elt(int(s))

    def elements(self):
        for a in range(self.p):
            for b in range(self.p):
                yield self.elt(a, b)

    def generator(self) -> "GF2Elt":
        """Canonical multiplicative generator: first in (a, b) order."""
        if self._gen is not None:
            return self._gen
        order = self.p * self.p - 1
        primes = list(_factorize(order))
        for x in self.elements():
            if x.is_zero():
                continue
            if all(x ** (order // q) != self.one() for q in primes):
                self._gen = x
                return x
        raise InternalError("no generator found")  # pragma: no cover

    def header(self) -> str:
        return f"p={self.p} d={self.d}"


def make_field(p: int) -> GF2Field:
    """Canonical GF(p^2) for an odd prime p."""
    if p < 3 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")
    d = None
    for c in range(2, p):
        if pow(c, (p - 1) // 2, p) == p - 1:
            d = c
            break
    if d is None:
        raise DomainError(f"no quadratic nonresidue mod {p}")  # pragma: no cover
    return GF2Field(p, d)


class GF2Elt:
    """a + b*u in GF(p^2)."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: GF2Field, a: int, b: int):
        self.field = field
        self.a = a
        self.b = b

    def __repr__(self):
        return f"GF2Elt({self.to_text()} over p={self.field.p})"

    def to_text(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*u"
        return f"{self.a}+{self.b}*u"

    def key(self) -> tuple[int, int]:
        return (self.a, self.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def in_prime_field(self) -> bool:
        return self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            return self.a == other % self.field.p and self.b == 0
        if not isinstance(other, GF2Elt):
            return NotImplemented
        return (self.a, self.b) == (other.a, other.b) and self.field == other.field

    def __hash__(self):
        return hash((self.a, self.b, self.field.p))

    def _coerce(self, other) -> "GF2Elt":
        if isinstance(other, GF2Elt):
            return other
        if isinstance(other, int):
            return self.field.elt(other)
        raise TypeError(f"cannot coerce {other!r}")

    def __add__(self, other):
        o = self._coerce(other)
        p = self.field.p
        return GF2Elt(self.field, (self.a + o.a) % p, (self.b + o.b) % p)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return GF2Elt(self.field, (-self.a) % p, (-self.b) % p)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        p, d = self.field.p, self.field.d
        a = (self.a * o.a + d * self.b * o.b) % p
        b = (self.a * o.b + self.b * o.a) % p
        return GF2Elt(self.field, a, b)

    __rmul__ = __mul__

    def inverse(self) -> "GF2Elt":
        if self.is_zero():
            raise DomainError("division by zero in GF(p^2)")
        p, d = self.field.p, self.field.d
        n = (self.a * self.a - d * self.b * self.b) % p
        ninv = pow(n, p - 2, p)
        return GF2Elt(self.field, self.a * ninv % p, (-self.b) * ninv % p)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "GF2Elt":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def norm(self) -> int:
        """Norm to GF(p)."""
        p, d = self.field.p, self.field.d
        return (self.a * self.a - d * self.b * self.b) % p

    def is_square(self) -> bool:
        if self.is_zero():
            return True
        return pow(self.norm(), (self.field.p - 1) // 2, self.field.p) == 1


def _sqrt_fp(n: int, p: int, d: int) -> int | None:
    """Tonelli-Shanks in GF(p) with the canonical nonresidue as helper."""
    n %= p
    if n == 0:
        return 0
    if pow(n, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = pow(d, q, p)
    m, c, t, r = s, z, pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t = t * c % p
        r = r * b % p
    return r


def sqrt(x: GF2Elt):
    """Deterministic square root in GF(p^2): the lexicographically smaller
    of the two roots in (a, b) order, or None when x is a non-square."""
    F = x.field
    p, d = F.p, F.d
    if x.is_zero():
        return F.zero()
    if not x.is_square():
        return None
    if x.b == 0:
        r = _sqrt_fp(x.a, p, d)
        if r is not None:
            y = F.elt(r)
        else:
            # a = (b' u)^2 = b'^2 d  ->  b' = sqrt(a/d)
            r = _sqrt_fp(x.a * pow(d, p - 2, p) % p, p, d)
            if r is None:  # pragma: no cover
                raise InternalError("square classified wrongly")
            y = F.elt(0, r)
    else:
        # y = c + e u with c^2 + d e^2 = a and 2 c e = b.
        nrm = _sqrt_fp(x.norm(), p, d)
        if nrm is None:  # pragma: no cover
            raise InternalError("square has non-square norm")
        half = pow(2, p - 2, p)
        c2 = (x.a + nrm) * half % p
        c = _sqrt_fp(c2, p, d)
        if c is None or c == 0:
            c2 = (x.a - nrm) * half % p
            c = _sqrt_fp(c2, p, d)
        if c is None or c == 0:  # pragma: no cover
            raise InternalError("no valid half-trace branch")
        e = x.b * half % p * pow(c, p - 2, p) % p
        y = F.elt(c, e)
    return min(y, -y, key=lambda t: t.key())


def nth_root_of_unity(F: GF2Field, n: int) -> GF2Elt:
    """The lexicographically smallest element of exact order n."""
    order = F.p * F.p - 1
    if n <= 0 or order % n != 0:
        raise DomainError(f"{n} does not divide p^2 - 1 = {order}")
    cached = F._nru_cache.get(n)
    if cached is not None:
        return cached
    z = F.generator() ** (order // n)
    best = None
    for k in range(1, n + 1):
        if _gcd(k, n) == 1:
            c = z**k
            if best is None or c.key() < best.key():
                best = c
    F._nru_cache[n] = best
    return best


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# Polynomials over GF(p^2)


class GFPoly:
    """Univariate polynomial over GF(p^2), dense (a, b) coefficient arrays."""

    __slots__ = ("field", "ca", "cb")

    def __init__(self, field: GF2Field, ca: np.ndarray, cb: np.ndarray):
        self.field = field
        n = len(ca)
        while n > 0 and ca[n - 1] == 0 and cb[n - 1] == 0:
            n -= 1
        self.ca = np.ascontiguousarray(ca[:n], dtype=np.int64)
        self.cb = np.ascontiguousarray(cb[:n], dtype=np.int64)

    @classmethod
    def from_coeffs(cls, field: GF2Field, coeffs) -> "GFPoly":
        ca = np.array([c.a if isinstance(c, GF2Elt) else c % field.p for c in coeffs], dtype=np.int64)
        cb = np.array([c.b if isinstance(c, GF2Elt) else 0 for c in coeffs], dtype=np.int64)
        return cls(field, ca % field.p, cb % field.p)

    @classmethod
    def x_poly(cls, field: GF2Field) -> "GFPoly":
        return cls.from_coeffs(field, [0, 1])

    def degree(self) -> int:
        return len(self.ca) - 1

    def is_zero(self) -> bool:
        return len(self.ca) == 0

    def coeff(self, i: int) -> GF2Elt:
        if i >= len(self.ca):
            return self.field.zero()
        return self.field.elt(int(self.ca[i]), int(self.cb[i]))

    def coeffs(self) -> list[GF2Elt]:
        return [self.coeff(i) for i in range(len(self.ca))]

    def leading(self) -> GF2Elt:
        if self.is_zero():
            raise DomainError("zero polynomial")
        return self.coeff(self.degree())

    def __eq__(self, other):
        return (
            isinstance(other, GFPoly)
            and self.field == other.field
            and np.array_equal(self.ca, other.ca)
            and np.array_equal(self.cb, other.cb)
        )

    def __add__(self, other: "GFPoly") -> "GFPoly":
        n = max(len(self.ca), len(other.ca))
        ca = np.zeros(n, dtype=np.int64)
        cb = np.zeros(n, dtype=np.int64)
        ca[: len(self.ca)] = self.ca
        cb[: len(self.cb)] = self.cb
        ca[: len(other.ca)] += other.ca
        cb[: len(other.cb)] += other.cb
        p = self.field.p
        return GFPoly(self.field, ca % p, cb % p)

    def __neg__(self) -> "GFPoly":
        p = self.field.p
        return GFPoly(self.field, (-self.ca) % p, (-self.cb) % p)

    def __sub__(self, other: "GFPoly") -> "GFPoly":
        return self + (-other)

    def __mul__(self, other) -> "GFPoly":
        if isinstance(other, GF2Elt):
            p, d = self.field.p, self.field.d
            ca = (self.ca * other.a + self.cb * other.b % p * d) % p
            cb = (self.ca * other.b + self.cb * other.a) % p
            return GFPoly(self.field, ca, cb)
        if self.is_zero() or other.is_zero():
            return GFPoly(self.field, np.zeros(0, np.int64), np.zeros(0, np.int64))
        p, d = self.field.p, self.field.d
        aa = np.convolve(self.ca, other.ca)
        bb = np.convolve(self.cb, other.cb)
        ab = np.convolve(self.ca, other.cb)
        ba = np.convolve(self.cb, other.ca)
        return GFPoly(self.field, (aa + bb % p * d) % p, (ab + ba) % p)

    __rmul__ = __mul__

    def monic(self) -> "GFPoly":
        if self.is_zero():
            return self
        lead = self.leading()
        if lead == 1:
            return self
        return self * lead.inverse()

    def divmod(self, other: "GFPoly") -> tuple["GFPoly", "GFPoly"]:
        if other.is_zero():
            raise DomainError("division by zero polynomial")
        p, d = self.field.p, self.field.d
        ra = self.ca.copy()
        rb = self.cb.copy()
        n, m = len(ra), len(other.ca)
        if n < m:
            return GFPoly(self.field, np.zeros(0, np.int64), np.zeros(0, np.int64)), self
        inv = other.leading().inverse()
        qa = np.zeros(n - m + 1, dtype=np.int64)
        qb = np.zeros(n - m + 1, dtype=np.int64)
        da, db = other.ca, other.cb
        for k in range(n - m, -1, -1):
            la, lb = int(ra[k + m - 1]), int(rb[k + m - 1])
            if la == 0 and lb == 0:
                continue
            qa_k = (la * inv.a + lb * inv.b % p * d) % p
            qb_k = (la * inv.b + lb * inv.a) % p
            qa[k], qb[k] = qa_k, qb_k
            ra[k : k + m] = (ra[k : k + m] - (qa_k * da + qb_k * db % p * d)) % p
            rb[k : k + m] = (rb[k : k + m] - (qa_k * db + qb_k * da)) % p
        return GFPoly(self.field, qa, qb), GFPoly(self.field, ra[: m - 1], rb[: m - 1])

    def __mod__(self, other: "GFPoly") -> "GFPoly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "GFPoly") -> "GFPoly":
        return self.divmod(other)[0]

    def gcd(self, other: "GFPoly") -> "GFPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def mulmod(self, other: "GFPoly", modulus: "GFPoly") -> "GFPoly":
        return (self * other) % modulus

    def powmod(self, e: int, modulus: "GFPoly") -> "GFPoly":
        result = GFPoly.from_coeffs(self.field, [1])
        base = self % modulus
        while e:
            if e & 1:
                result = result.mulmod(base, modulus)
            base = base.mulmod(base, modulus)
            e >>= 1
        return result

    def __pow__(self, n: int) -> "GFPoly":
        result = GFPoly.from_coeffs(self.field, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self) -> "GFPoly":
        if self.degree() < 1:
            return GFPoly(self.field, np.zeros(0, np.int64), np.zeros(0, np.int64))
        mult = np.arange(1, len(self.ca), dtype=np.int64)
        p = self.field.p
        return GFPoly(self.field, self.ca[1:] * mult % p, self.cb[1:] * mult % p)

    def evaluate(self, x: GF2Elt) -> GF2Elt:
        acc = self.field.zero()
        for i in range(len(self.ca) - 1, -1, -1):
            acc = acc * x + self.field.elt(int(self.ca[i]), int(self.cb[i]))
        return acc

    def shift_x(self, c: GF2Elt) -> "GFPoly":
        """P(x + c) by Horner."""
        acc = GFPoly.from_coeffs(self.field, [self.coeff(self.degree())])
        lin = GFPoly.from_coeffs(self.field, [c, self.field.one()])
        for i in range(self.degree() - 1, -1, -1):
            acc = acc * lin + GFPoly.from_coeffs(self.field, [self.coeff(i)])
        return acc

    def __repr__(self):
        return f"GFPoly(deg={self.degree()} over p={self.field.p})"


def _det_rng(f: GFPoly) -> random.Random:
    h = hashlib.sha256()
    h.update(str(f.field.p).encode())
    h.update(str(f.field.d).encode())
    h.update(f.ca.tobytes())
    h.update(f.cb.tobytes())
    return random.Random(int.from_bytes(h.digest()[:8], "big"))


def _frobenius_power(f: GFPoly) -> GFPoly:
    """x^(p^2) mod f."""
    F = f.field
    x = GFPoly.x_poly(F)
    xp = x.powmod(F.p, f)
    return xp.powmod(F.p, f)


def split_count(f: GFPoly) -> int:
    """Number of distinct roots in GF(p^2): deg gcd(f, x^(p^2) - x)."""
    if f.degree() < 1:
        raise DomainError("need degree >= 1")
    xq = _frobenius_power(f)
    g = f.gcd(xq - GFPoly.x_poly(f.field))
    return g.degree()


def roots(f: GFPoly) -> list[tuple[GF2Elt, int]]:
    """All roots in GF(p^2) with multiplicities, deterministically ordered.

    Distinct roots come from gcd with the field equation followed by
    equal-degree splitting seeded from a hash of (p, f); multiplicities by
    repeated division.
    """
    if f.degree() < 1:
        raise DomainError("need degree >= 1")
    F = f.field
    xq = _frobenius_power(f)
    g = f.gcd(xq - GFPoly.x_poly(F))
    rng = _det_rng(f)
    found: list[GF2Elt] = []
    _split_linear(g, rng, found)
    out = []
    for r in sorted(found, key=lambda e: e.key()):
        mult = 0
        rem = f
        lin = GFPoly.from_coeffs(F, [-r, F.one()])
        while True:
            q, rr = rem.divmod(lin)
            if not rr.is_zero():
                break
            mult += 1
            rem = q
        out.append((r, mult))
    return out


def _split_linear(g: GFPoly, rng: random.Random, out: list[GF2Elt]) -> None:
    """Equal-degree splitting of a squarefree product of linear factors."""
    F = g.field
    d = g.degree()
    if d <= 0:
        return
    if d == 1:
        c = g.monic()
        out.append(-c.coeff(0))
        return
    if d == 2:
        c = g.monic()
        b, c0 = c.coeff(1), c.coeff(0)
        disc = b * b - 4 * c0
        s = sqrt(disc)
        if s is None:  # pragma: no cover - g splits by construction
            raise InternalError("quadratic with no GF(p^2) root in splitting")
        half = F.elt(pow(2, F.p - 2, F.p))
        out.append((-b + s) * half)
        out.append((-b - s) * half)
        return
    e = (F.p * F.p - 1) // 2
    while True:
        h = GFPoly.from_coeffs(
            F, [F.elt(rng.randrange(F.p), rng.randrange(F.p)), F.one()]
        )
        w = h.powmod(e, g) - GFPoly.from_coeffs(F, [1])
        g1 = g.gcd(w)
        if 0 < g1.degree() < d:
            _split_linear(g1, rng, out)
            _split_linear(g // g1, rng, out)
            return


# ---------------------------------------------------------------------------
# Prime-field polynomial helpers (arrays of ints mod p)


def fp_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, np.int64)
    return np.convolve(a, b) % p


def fp_trim(a: np.ndarray) -> np.ndarray:
    n = len(a)
    while n > 0 and a[n - 1] == 0:
        n -= 1
    return a[:n]


def fp_divmod(a: np.ndarray, b: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    a = fp_trim(a % p).copy()
    b = fp_trim(b % p)
    if len(b) == 0:
        raise DomainError("division by zero polynomial")
    n, m = len(a), len(b)
    if n < m:
        return np.zeros(0, np.int64), a
    inv = pow(int(b[-1]), p - 2, p)
    q = np.zeros(n - m + 1, dtype=np.int64)
    for k in range(n - m, -1, -1):
        c = int(a[k + m - 1]) * inv % p
        if c:
            q[k] = c
            a[k : k + m] = (a[k : k + m] - c * b) % p
    return q, fp_trim(a[: m - 1])


def fp_gcd(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    a, b = fp_trim(a % p), fp_trim(b % p)
    while len(b):
        a, b = b, fp_divmod(a, b, p)[1]
    if len(a):
        a = a * pow(int(a[-1]), p - 2, p) % p
    return a


def fp_powmod_x(e: int, modulus: np.ndarray, p: int) -> np.ndarray:
    """x^e mod modulus over GF(p)."""
    result = np.array([1], dtype=np.int64)
    base = fp_divmod(np.array([0, 1], dtype=np.int64), modulus, p)[1]
    while e:
        if e & 1:
            result = fp_divmod(fp_mul(result, base, p), modulus, p)[1]
        base = fp_divmod(fp_mul(base, base, p), modulus, p)[1]
        e >>= 1
    return result


def fp_powmod(poly: np.ndarray, e: int, modulus: np.ndarray, p: int) -> np.ndarray:
    result = np.array([1], dtype=np.int64)
    base = fp_divmod(poly, modulus, p)[1]
    while e:
        if e & 1:
            result = fp_divmod(fp_mul(result, base, p), modulus, p)[1]
        base = fp_divmod(fp_mul(base, base, p), modulus, p)[1]
        e >>= 1
    return result
