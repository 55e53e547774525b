"""Exact arithmetic in Q and in the cyclotomic field Q(zeta_48).

Elements of Q(zeta_48) are stored against the power basis 1, z, ..., z^15
where z is a primitive 48-th root of unity, reduced modulo the 48-th
cyclotomic polynomial x^16 - x^8 + 1.  Internally an element keeps a tuple
of 16 integer numerators over one positive common denominator, so that the
hot paths (series convolution) never touch Fraction objects.

The field contains every constant used elsewhere: zeta_24 = z^2,
zeta_16 = z^3, zeta_12 = z^4, zeta_8 = z^6, zeta_3 = z^16, i = z^12 and
sqrt(2) = z^6 + z^42.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import DomainError

# The coefficient domain for q-expansions: reduced fractions with a
# positive denominator, exactly the invariants fractions.Fraction keeps.
Rational = Fraction

DEGREE = 16

# x^16 = x^8 - 1, applied repeatedly: bare powers z^m for 0 <= m < 64
# expand to signed sums of basis monomials.
def _build_reduction_table() -> list[tuple[tuple[int, int], ...]]:
    table: list[tuple[tuple[int, int], ...]] = []
    for m in range(64):
        terms: dict[int, int] = {}
        stack = [(m, 1)]
        while stack:
            e, s = stack.pop()
            if e < DEGREE:
                terms[e] = terms.get(e, 0) + s
            else:
                stack.append((e - 8, s))
                stack.append((e - 16, -s))
        table.append(tuple((e, s) for e, s in sorted(terms.items()) if s))
    return table


_REDUCE = _build_reduction_table()

_ZERO16 = (0,) * DEGREE


def _normalized(nums: tuple[int, ...], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        nums = tuple(-n for n in nums)
        den = -den
    g = den
    for n in nums:
        if n:
            g = gcd(g, n)
            if g == 1:
                break
    if g > 1:
        nums = tuple(n // g for n in nums)
        den //= g
    return nums, den


class CycloElt:
    """An element of Q(zeta_48) in canonical reduced form."""

    __slots__ = ("nums", "den")

    def __init__(self, nums, den: int = 1):
        if den == 0:
            raise DomainError("zero denominator")
        nums = tuple(nums)
        if len(nums) != DEGREE:
            raise DomainError(f"need {DEGREE} coefficients, got {len(nums)}")
        self.nums, self.den = _normalized(nums, den)

    @classmethod
    def from_rational(cls, value) -> "CycloElt":
        f = Fraction(value)
        return cls((f.numerator,) + (0,) * (DEGREE - 1), f.denominator)

    @classmethod
    def zero(cls) -> "CycloElt":
        return _ZERO

    @classmethod
    def one(cls) -> "CycloElt":
        return _ONE

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        """The 16 rational coordinates against the power basis."""
        return tuple(Fraction(n, self.den) for n in self.nums)

    def is_zero(self) -> bool:
        return self.nums == _ZERO16

    def is_rational(self) -> bool:
        return all(n == 0 for n in self.nums[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise DomainError(f"{self} is not rational")
        return Fraction(self.nums[0], self.den)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycloElt.from_rational(other)
        if not isinstance(other, CycloElt):
            return NotImplemented
        return self.nums == other.nums and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.nums, self.den))

    def __neg__(self) -> "CycloElt":
        return CycloElt(tuple(-n for n in self.nums), self.den)

    def __add__(self, other) -> "CycloElt":
        if isinstance(other, (int, Fraction)):
            other = CycloElt.from_rational(other)
        if not isinstance(other, CycloElt):
            return NotImplemented
        da, db = self.den, other.den
        return CycloElt(
            tuple(n * db + m * da for n, m in zip(self.nums, other.nums)), da * db
        )

    __radd__ = __add__

    def __sub__(self, other) -> "CycloElt":
        if isinstance(other, (int, Fraction)):
            other = CycloElt.from_rational(other)
        if not isinstance(other, CycloElt):
            return NotImplemented
        da, db = self.den, other.den
        return CycloElt(
            tuple(n * db - m * da for n, m in zip(self.nums, other.nums)), da * db
        )

    def __rsub__(self, other) -> "CycloElt":
        return (-self) + other

    def __mul__(self, other) -> "CycloElt":
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return CycloElt(
                tuple(n * f.numerator for n in self.nums), self.den * f.denominator
            )
        if not isinstance(other, CycloElt):
            return NotImplemented
        a, b = self.nums, other.nums
        if all(n == 0 for n in b[1:]):
            c = b[0]
            return CycloElt(tuple(n * c for n in a), self.den * other.den)
        if all(n == 0 for n in a[1:]):
            c = a[0]
            return CycloElt(tuple(n * c for n in b), self.den * other.den)
        acc = [0] * DEGREE
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if not bj:
                    continue
                p = ai * bj
                for e, s in _REDUCE[i + j]:
                    acc[e] += p if s > 0 else -p
        return CycloElt(tuple(acc), self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycloElt":
        """Field inverse via the extended Euclidean algorithm over Q."""
        if self.is_zero():
            raise DomainError("division by zero in Q(zeta_48)")
        if self.is_rational():
            return CycloElt((self.den,) + (0,) * (DEGREE - 1), self.nums[0])
        # Work with polynomials as Fraction lists, low degree first.
        modulus = [Fraction(0)] * 17
        modulus[0], modulus[8], modulus[16] = Fraction(1), Fraction(-1), Fraction(1)
        a = list(self.coeffs)
        r0, r1 = modulus, _poly_trim(a)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or (len(r1) == 1 and r1[0] != 0):
            if len(r1) == 1:
                break
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # r1 is a nonzero constant c with s1*self = c (mod Phi_48).
        c = r1[0]
        inv = [x / c for x in s1]
        inv += [Fraction(0)] * (DEGREE - len(inv))
        den = 1
        for f in inv:
            den = den * f.denominator // gcd(den, f.denominator)
        return CycloElt(tuple(f.numerator * (den // f.denominator) for f in inv), den)

    def __truediv__(self, other) -> "CycloElt":
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            if f == 0:
                raise DomainError("division by zero")
            return self * Fraction(f.denominator, f.numerator)
        if not isinstance(other, CycloElt):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n: int) -> "CycloElt":
        if n < 0:
            return self.inverse() ** (-n)
        result = _ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def to_text(self) -> str:
        """Canonical text form, e.g. "1/2 + 3*z^6 - z^15" with z = zeta_48."""
        if self.is_zero():
            return "0"
        parts: list[str] = []
        for i, n in enumerate(self.nums):
            if not n:
                continue
            mag = Fraction(abs(n), self.den)
            if i == 0:
                body = str(mag)
            else:
                var = "z" if i == 1 else f"z^{i}"
                body = var if mag == 1 else f"{mag}*{var}"
            if not parts:
                parts.append(body if n > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if n > 0 else f"- {body}")
        return " ".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "CycloElt":
        s = text.strip().replace(" ", "")
        if not s:
            raise DomainError("empty cyclotomic literal")
        coeffs = [Fraction(0)] * DEGREE
        # Split into signed terms at top level.
        terms: list[str] = []
        cur = ""
        for ch in s:
            if ch in "+-" and cur and cur[-1] not in "+-/*^":
                terms.append(cur)
                cur = ch
            else:
                cur += ch
        terms.append(cur)
        for term in terms:
            if not term or term in "+-":
                raise DomainError(f"bad cyclotomic literal {text!r}")
            sign = 1
            while term and term[0] in "+-":
                if term[0] == "-":
                    sign = -sign
                term = term[1:]
            if "z" in term:
                coef_s, _, pow_s = term.partition("z")
                coef_s = coef_s.rstrip("*")
                e = 1
                if pow_s:
                    if not pow_s.startswith("^"):
                        raise DomainError(f"bad cyclotomic literal {text!r}")
                    e = int(pow_s[1:])
                coef = Fraction(coef_s) if coef_s else Fraction(1)
            else:
                coef = Fraction(term)
                e = 0
            if not 0 <= e < DEGREE:
                raise DomainError(f"exponent out of range in {text!r}")
            coeffs[e] += sign * coef
        den = 1
        for f in coeffs:
            den = den * f.denominator // gcd(den, f.denominator)
        return cls(tuple(f.numerator * (den // f.denominator) for f in coeffs), den)

    def __repr__(self) -> str:
        return f"CycloElt({self.to_text()})"


def _poly_trim(c: list[Fraction]) -> list[Fraction]:
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = a[:]
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        k = len(a) - len(b)
        c = a[-1] * inv
        q[k] = c
        for i, bi in enumerate(b):
            a[k + i] -= c * bi
        a.pop()
    return _poly_trim(q), _poly_trim(a if a else [Fraction(0)])


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _poly_trim([x - y for x, y in zip(a, b)])


_ZERO = CycloElt(_ZERO16)
_ONE = CycloElt((1,) + (0,) * (DEGREE - 1))

# z^e for 0 <= e < 48, computed once through the reduction table.
def _build_zpow() -> tuple[CycloElt, ...]:
    out = []
    for e in range(48):
        nums = [0] * DEGREE
        for idx, s in _REDUCE[e % 48 if e % 48 < 64 else 0]:
            nums[idx] += s
        out.append(CycloElt(tuple(nums)))
    return tuple(out)


Z_POW = _build_zpow()


def zeta_power(e: int) -> CycloElt:
    """zeta_48^e for any integer e."""
    return Z_POW[e % 48]


def root_of_unity(m: int, k: int = 1) -> CycloElt:
    """zeta_48^((48/m)*k): the k-th power of a primitive m-th root of unity.

    Requires m | 48; the result has multiplicative order m / gcd(m, k).
    """
    if m <= 0 or 48 % m != 0:
        raise DomainError(f"{m} does not divide 48")
    return zeta_power((48 // m) * k)


def sqrt2() -> CycloElt:
    """The square root of 2 fixed throughout: zeta_8 + zeta_8^(-1)."""
    return zeta_power(6) + zeta_power(-6)


def cyclo_arith(a: CycloElt, b: CycloElt, op: str) -> CycloElt:
    """Dispatch {add, mul, div} on field elements; div by zero raises."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise DomainError("division by zero")
        return a / b
    raise DomainError(f"unknown operation {op!r}")
