"""Weierstrass curves over GF(p^2), isogenies, and the parametrized families.

Curves are kept in long Weierstrass form with a1 = a3 = 0 (every family
here has that shape); quotient formulas emit the translated form they
produce, with no simplification pass, so the (0,0)-kernel normalization
of the explicit chains stays visible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, KernelError, SingularParameter
from .gf import GF2Elt, GF2Field, GFPoly


class Curve:
    """y^2 = x^3 + a2 x^2 + a4 x + a6 over GF(p^2)."""

    __slots__ = ("field", "a2", "a4", "a6")

    def __init__(self, field: GF2Field, a2: GF2Elt, a4: GF2Elt, a6: GF2Elt):
        self.field = field
        self.a2 = a2
        self.a4 = a4
        self.a6 = a6
        if self.discriminant().is_zero():
            raise SingularParameter("curve is singular")

    def b_invariants(self):
        a2, a4, a6 = self.a2, self.a4, self.a6
        return 4 * a2, 2 * a4, 4 * a6, 4 * a2 * a6 - a4 * a4

    def c_invariants(self):
        b2, b4, b6, _ = self.b_invariants()
        return b2 * b2 - 24 * b4, -(b2 * b2 * b2) + 36 * b2 * b4 - 216 * b6

    def discriminant(self) -> GF2Elt:
        b2, b4, b6, b8 = self.b_invariants()
        return (
            -(b2 * b2) * b8 - 8 * (b4 * b4 * b4) - 27 * (b6 * b6) + 9 * b2 * b4 * b6
        )

    def j_invariant(self) -> GF2Elt:
        c4, _ = self.c_invariants()
        return c4 * c4 * c4 / self.discriminant()

    def rhs(self, x: GF2Elt) -> GF2Elt:
        return ((x + self.a2) * x + self.a4) * x + self.a6

    def rhs_poly(self) -> GFPoly:
        return GFPoly.from_coeffs(self.field, [self.a6, self.a4, self.a2, self.field.one()])

    def contains(self, P: "Point") -> bool:
        if P.is_identity():
            return True
        return (P.y * P.y - self.rhs(P.x)).is_zero()

    def point(self, x, y) -> "Point":
        F = self.field
        if isinstance(x, int):
            x = F.elt(x)
        if isinstance(y, int):
            y = F.elt(y)
        P = Point(self, x, y)
        if not self.contains(P):
            raise DomainError(f"({x.to_text()}, {y.to_text()}) not on the curve")
        return P

    def identity(self) -> "Point":
        return Point(self, None, None)

    def two_torsion_points(self) -> list["Point"]:
        from .gf import roots

        out = []
        for r, _ in roots(self.rhs_poly()):
            out.append(Point(self, r, self.field.zero()))
        return out

    def random_point(self, rng) -> "Point":
        from .gf import sqrt

        F = self.field
        while True:
            x = F.elt(rng.randrange(F.p), rng.randrange(F.p))
            y2 = self.rhs(x)
            y = sqrt(y2)
            if y is not None:
                return Point(self, x, y)

    def __eq__(self, other):
        return (
            isinstance(other, Curve)
            and self.field == other.field
            and self.a2 == other.a2
            and self.a4 == other.a4
            and self.a6 == other.a6
        )

    def __repr__(self):
        return (
            f"Curve(y^2 = x^3 + {self.a2.to_text()}x^2 + "
            f"{self.a4.to_text()}x + {self.a6.to_text()})"
        )


class Point:
    """Affine point or the identity (projectively (0:1:0))."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: Curve, x: GF2Elt | None, y: GF2Elt | None):
        self.curve = curve
        self.x = x
        self.y = y

    def is_identity(self) -> bool:
        return self.x is None

    def projective(self) -> tuple[GF2Elt, GF2Elt, GF2Elt]:
        F = self.curve.field
        if self.is_identity():
            return (F.zero(), F.one(), F.zero())
        return (self.x, self.y, F.one())

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        if self.is_identity() or other.is_identity():
            return self.is_identity() and other.is_identity()
        return self.x == other.x and self.y == other.y

    def __neg__(self) -> "Point":
        if self.is_identity():
            return self
        return Point(self.curve, self.x, -self.y)

    def __add__(self, other: "Point") -> "Point":
        if self.is_identity():
            return other
        if other.is_identity():
            return self
        E = self.curve
        if self.x == other.x:
            if self.y == -other.y:
                return E.identity()
            # Doubling; y != 0 here since y = -y was handled above.
            lam = (3 * self.x * self.x + 2 * E.a2 * self.x + E.a4) / (2 * self.y)
        else:
            lam = (other.y - self.y) / (other.x - self.x)
        x3 = lam * lam - E.a2 - self.x - other.x
        y3 = lam * (self.x - x3) - self.y
        return Point(E, x3, y3)

    def __sub__(self, other: "Point") -> "Point":
        return self + (-other)

    def double(self) -> "Point":
        return self + self

    def multiply(self, n: int) -> "Point":
        if n < 0:
            return (-self).multiply(-n)
        result = self.curve.identity()
        base = self
        while n:
            if n & 1:
                result = result + base
            base = base.double()
            n >>= 1
        return result

    def __repr__(self):
        if self.is_identity():
            return "Point(identity)"
        return f"Point({self.x.to_text()}, {self.y.to_text()})"


@dataclass
class Isogeny:
    """Separable isogeny given by x' = num(x)/den(x), y' = y * ynum(x)/yden(x)."""

    domain: Curve
    codomain: Curve
    degree: int
    kernel_polynomial: GFPoly
    x_num: GFPoly
    x_den: GFPoly
    y_num: GFPoly
    y_den: GFPoly

    def __call__(self, P: Point) -> Point:
        if P.is_identity():
            return self.codomain.identity()
        den = self.x_den.evaluate(P.x)
        if den.is_zero():
            return self.codomain.identity()
        x2 = self.x_num.evaluate(P.x) / den
        y2 = P.y * self.y_num.evaluate(P.x) / self.y_den.evaluate(P.x)
        return Point(self.codomain, x2, y2)


# ---------------------------------------------------------------------------
# Parametrized families


def family_E0(u: GF2Elt, n: int) -> Curve:
    """y^2 = x(x^2 - ((u^n - 64)/4) x - (u^n - 64)), j = (u^n - 16)^3 / u^n."""
    F = u.field
    un = u**n
    if un.is_zero() or un == 64:
        raise SingularParameter("u^n in {0, 64} collapses the family")
    c = un - 64
    return Curve(F, -c / F.elt(4), -c, F.zero())


def family_E1(u: GF2Elt, n: int) -> Curve:
    """The (0,0)-quotient partner: y^2 = x(x^2 + ((u^n-64)/2) x + ((u^n-64)/16) u^n)."""
    F = u.field
    un = u**n
    if un.is_zero() or un == 64:
        raise SingularParameter("u^n in {0, 64} collapses the family")
    c = un - 64
    return Curve(F, c / F.elt(2), c * un / F.elt(16), F.zero())


def family_C(s: GF2Elt, which: str) -> Curve:
    """The Fermat-quotient families: C0: y^2 = x(x-1)(x+t) with t = -(s+1);
    C1: y^2 = x((x+s)^2 + 4x)."""
    F = s.field
    if s.is_zero() or s == -1:
        raise SingularParameter("s in {0, -1} collapses the family")
    if which == "C0":
        t = -(s + 1)
        # x(x-1)(x+t) = x^3 + (t-1)x^2 - t x
        return Curve(F, t - 1, -t, F.zero())
    if which == "C1":
        # x((x+s)^2 + 4x) = x^3 + (2s+4)x^2 + s^2 x
        return Curve(F, 2 * s + 4, s * s, F.zero())
    raise DomainError(f"unknown family member {which!r}")


def j_C0(s: GF2Elt) -> GF2Elt:
    num = s * s + s + 1
    return 256 * num**3 / (s * s * (s + 1) ** 2)


def j_C1(s: GF2Elt) -> GF2Elt:
    num = s * s + 16 * s + 16
    return 16 * num**3 / (s**4 * (s + 1))


# ---------------------------------------------------------------------------
# Isogenies


def two_isogeny_quotient(E: Curve, T: Point) -> Isogeny:
    """Quotient by the order-2 subgroup {O, T}.

    Translated so the kernel sits at the origin, the classical map is
    x' = x + t/(x - x0) with t = f'(x0); the codomain keeps the resulting
    shifted model.
    """
    if T.is_identity() or not T.y.is_zero() or not E.contains(T):
        raise DomainError("T must be a finite 2-torsion point")
    F = E.field
    x0 = T.x
    # f(x + x0) = x^3 + A x^2 + B x  with A = a2 + 3 x0, B = f'(x0).
    A = E.a2 + 3 * x0
    B = (3 * x0 + 2 * E.a2) * x0 + E.a4
    # Quotient of y^2 = x(x^2 + Ax + B) by (0,0): Y^2 = (X + A)(X^2 - 4B),
    # translated back by x0: X = x' - x0.
    a2n = A - 3 * x0
    a4n = -4 * B - 2 * A * x0 + 3 * x0 * x0
    a6n = (x0 * x0 - A * x0 - 4 * B) * (-x0) - 4 * A * B
    codomain = Curve(F, a2n, a4n, a6n)
    one = F.one()
    # x' = (x - x0) + B/(x - x0) + x0  =  (x^2 - x0 x + B) / (x - x0)
    x_num = GFPoly.from_coeffs(F, [B, -x0, one])
    x_den = GFPoly.from_coeffs(F, [-x0, one])
    # y' = y d/dx(x + B/(x-x0)) = y (1 - B/(x-x0)^2)
    y_num = GFPoly.from_coeffs(F, [x0 * x0 - B, -2 * x0, one])
    y_den = GFPoly.from_coeffs(F, [x0 * x0, -2 * x0, one])
    h = GFPoly.from_coeffs(F, [-x0, one])
    return Isogeny(E, codomain, 2, h, x_num, x_den, y_num, y_den)


def _power_sums(h: GFPoly, k: int) -> list[GF2Elt]:
    """Newton power sums s_1..s_k of the roots of h from its coefficients."""
    F = h.field
    n = h.degree()
    lead_inv = h.leading().inverse()
    # e[i] = (-1)^i * elementary symmetric
    e = [h.coeff(n - i) * lead_inv for i in range(n + 1)]
    s: list[GF2Elt] = [F.zero()] * (k + 1)
    for i in range(1, k + 1):
        acc = -i * e[i] if i <= n else F.zero()
        for j in range(1, min(i, n) + 1):
            acc = acc - e[j] * s[i - j]
        s[i] = acc
    return s


def velu(E: Curve, h: GFPoly) -> Isogeny:
    """Velu isogeny from a kernel polynomial with coefficients in GF(p^2).

    The kernel polynomial may mix 2-torsion roots (where the curve cubic
    vanishes) with x-coordinates of paired points; validation is by
    structural degree accounting plus on-curve checks of sample images.
    """
    if h.degree() < 1:
        raise KernelError("kernel polynomial must be nonconstant")
    F = E.field
    h = h.monic()
    f = E.rhs_poly()
    fprime = f.derivative()
    if h.gcd(h.derivative()).degree() > 0:
        raise KernelError("kernel polynomial has repeated roots")
    h_even = h.gcd(f)
    h_odd = h // h_even
    deg = 1 + h_even.degree() + 2 * h_odd.degree()
    if h_even.degree() == 2:
        raise KernelError("even part must be trivial or a full 2-torsion orbit")

    b2, b4, b6, _ = E.b_invariants()
    t = F.zero()
    w = F.zero()
    for part, factor in ((h_even, 1), (h_odd, 2)):
        n = part.degree()
        if n == 0:
            continue
        s = _power_sums(part, 3)
        p1, p2, p3 = s[1], s[2], s[3]
        # t_Q = factor * f'(x_Q), u_Q = 4 f(x_Q) (zero on 2-torsion roots).
        t_part = factor * (3 * p2 + 2 * E.a2 * p1 + n * E.a4)
        u_part = 4 * (p3 + E.a2 * p2 + E.a4 * p1 + n * E.a6) if factor == 2 else F.zero()
        xt = factor * (3 * p3 + 2 * E.a2 * p2 + E.a4 * p1)
        t = t + t_part
        w = w + u_part + xt

    try:
        codomain = Curve(F, E.a2, E.a4 - 5 * t, E.a6 - b2 * t - 7 * w)
    except SingularParameter:
        raise KernelError("kernel polynomial does not define a subgroup") from None

    # x-map: x + sum over kernel of [ t_Q/(x-x_Q) + u_Q/(x-x_Q)^2 ].
    # With G1 = (t_Q-interpolant * h') mod h and G2 = (u_Q-interpolant * h')
    # mod h:  x' = x + G1/h + (G2 h' - G2' h)/h^2.
    hprime = h.derivative()
    tq = _interp_times_hprime(h, h_even, h_odd, fprime)
    g2 = _interp_u(h, h_odd, h_even, f)
    num = (
        _xpoly(F) * h * h
        + tq * h
        + g2 * hprime
        - g2.derivative() * h
    )
    den = h * h
    y_num = _rat_derivative_num(num, den)
    y_den = den * den
    iso = Isogeny(E, codomain, deg, h, num, den, y_num, y_den)
    _validate_isogeny(iso)
    return iso


def _xpoly(F: GF2Field) -> GFPoly:
    return GFPoly.x_poly(F)


def _interp_times_hprime(h: GFPoly, h_even: GFPoly, h_odd: GFPoly, fprime: GFPoly) -> GFPoly:
    """Polynomial G of degree < deg h with G(x_Q) = t_Q h'(x_Q)."""
    # t_Q = f'(x_Q) on 2-torsion roots, 2 f'(x_Q) on paired roots; realize
    # as (c(x) f'(x) h'(x)) mod h with c = 1 or 2 chosen by CRT over the
    # coprime factors.
    F = h.field
    hp = h.derivative()
    if h_even.degree() == 0:
        return (fprime * hp * F.elt(2)) % h
    if h_odd.degree() == 0:
        return (fprime * hp) % h
    # CRT: G = fprime*hp * (1 + indicator of odd part)
    ind = _indicator(h, h_odd, h_even)
    return (fprime * hp * (ind + _one_poly(F))) % h


def _interp_u(h: GFPoly, h_odd: GFPoly, h_even: GFPoly, f: GFPoly) -> GFPoly:
    """Polynomial G of degree < deg h with G(x_Q) = u_Q h'(x_Q), u_Q = 4 f."""
    # u_Q vanishes on 2-torsion roots automatically since f(x_Q) = 0.
    F = h.field
    hp = h.derivative()
    return (f * hp * F.elt(4)) % h


def _indicator(h: GFPoly, part: GFPoly, other: GFPoly) -> GFPoly:
    """1 on roots of part, 0 on roots of other (mod h)."""
    F = h.field
    # part and other are coprime: find a*part + b*other = 1, indicator = b*other.
    g, a, b = _ext_gcd(part, other)
    ginv = g.leading().inverse()
    return (b * other * ginv) % h


def _ext_gcd(a: GFPoly, b: GFPoly):
    F = a.field
    r0, r1 = a, b
    s0, s1 = _one_poly(F), _zero_poly(F)
    t0, t1 = _zero_poly(F), _one_poly(F)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return r0, s0, t0


def _one_poly(F: GF2Field) -> GFPoly:
    return GFPoly.from_coeffs(F, [1])


def _zero_poly(F: GF2Field) -> GFPoly:
    return GFPoly.from_coeffs(F, [])


def _rat_derivative_num(num: GFPoly, den: GFPoly) -> GFPoly:
    """Numerator of d/dx (num/den); y-map of a normalized isogeny."""
    return num.derivative() * den - num * den.derivative()


def _validate_isogeny(iso: Isogeny, samples: int = 6) -> None:
    import random

    rng = random.Random(0xC0FFEE ^ iso.domain.field.p)
    for _ in range(samples):
        P = iso.domain.random_point(rng)
        Q = iso(P)
        if not iso.codomain.contains(Q):
            raise KernelError("kernel polynomial does not define a subgroup")
    # Additivity spot check.
    P = iso.domain.random_point(rng)
    Q = iso.domain.random_point(rng)
    if iso(P + Q) != iso(P) + iso(Q):
        raise KernelError("image map is not a homomorphism")


def division_polynomial(E: Curve, n: int) -> GFPoly:
    """psi_n as a polynomial in x (n <= 4; even n divided by 2y)."""
    F = E.field
    b2, b4, b6, b8 = E.b_invariants()
    x = GFPoly.x_poly(F)
    one = _one_poly(F)
    if n == 1:
        return one
    if n == 2:
        # psi_2 = 2y; psi_2^2 = 4 f(x); return the x-part 4f.
        return E.rhs_poly() * F.elt(4)
    if n == 3:
        return (
            x * x * x * x * F.elt(3)
            + x * x * x * b2
            + x * x * (3 * b4)
            + x * (3 * b6)
            + GFPoly.from_coeffs(F, [b8])
        )
    if n == 4:
        inner = (
            x**6 * F.elt(2)
            + x**5 * b2
            + x**4 * (5 * b4)
            + x**3 * (10 * b6)
            + x**2 * (10 * b8)
            + x * (b2 * b8 - b4 * b6)
            + GFPoly.from_coeffs(F, [b4 * b8 - b6 * b6])
        )
        return inner  # psi_4 / (2y) up to the conventional factor
    raise DomainError("division polynomials implemented for n <= 4")
