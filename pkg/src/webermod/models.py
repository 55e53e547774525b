"""Projective Weber curves, Fermat curves, and their isomorphisms.

The Weber model of level n (n dividing 8) lives in P^3:

    X0^n + X1^n + X2^n = 48 X3^n,   X0 X1 X2 = sqrt(8)^(8/n) X3^3,

its triple-cover variant (levels 3n) replaces the first equation by
X0^n + X1^n + X2^n = 0 and the constant by sqrt(2)^(8/n).  The Fermat
model is X^n + Y^n + Z^n = 0 in P^2.  The isomorphisms between the two
n | 8 families and the coordinate projections to the quotient lines are
explicit; sqrt(2) is the canonical square root from gf, which makes the
sign-sensitive maps reproducible across machines.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ChartError, DomainError
from .gf import GF2Elt, GF2Field, GFPoly, roots, sqrt


class ProjPoint:
    """Projective point; equality up to a common scalar."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        coords = tuple(coords)
        if all(c.is_zero() for c in coords):
            raise DomainError("all projective coordinates vanish")
        self.coords = coords

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        if not isinstance(other, ProjPoint) or len(self) != len(other):
            return NotImplemented
        # Cross-ratio equality: find the first nonzero coordinate of self.
        k = next(i for i, c in enumerate(self.coords) if not c.is_zero())
        if other.coords[k].is_zero():
            return False
        a, b = self.coords[k], other.coords[k]
        return all(c * b == d * a for c, d in zip(self.coords, other.coords))

    def __repr__(self):
        return "(" + ":".join(c.to_text() for c in self.coords) + ")"


@dataclass(frozen=True)
class ModelSpec:
    """A Weber or Fermat model at level n (the 3n Weber variants allowed)."""

    n: int
    which: str  # "weber" | "fermat"

    def __post_init__(self):
        if self.which == "weber":
            if self.n not in (1, 2, 4, 8, 3, 6, 12, 24):
                raise DomainError(f"no Weber model at level {self.n}")
        elif self.which == "fermat":
            if self.n not in (1, 2, 4, 8):
                raise DomainError(f"no Fermat model at level {self.n}")
        else:
            raise DomainError(f"unknown model kind {self.which!r}")

    @property
    def arity(self) -> int:
        return 4 if self.which == "weber" else 3

    def exponent(self) -> int:
        return self.n // 3 if self.which == "weber" and self.n % 3 == 0 else self.n


def _sqrt2(F: GF2Field) -> GF2Elt:
    s = sqrt(F.elt(2))
    if s is None:  # pragma: no cover - 2 is always a square in GF(p^2)
        raise DomainError("sqrt(2) missing")
    return s


def _weber_constant(F: GF2Field, spec: ModelSpec) -> GF2Elt:
    n = spec.exponent()
    m = 8 // n
    if spec.which == "weber" and spec.n % 3 == 0:
        return _sqrt2(F) ** m
    return _sqrt2(F) ** (3 * m)  # sqrt(8)^m


def on_model(spec: ModelSpec, P: ProjPoint) -> bool:
    """Both defining equations vanish at P."""
    if len(P) != spec.arity:
        raise DomainError(f"expected {spec.arity} coordinates, got {len(P)}")
    F = P[0].field
    n = spec.exponent()
    if spec.which == "fermat":
        return (P[0] ** n + P[1] ** n + P[2] ** n).is_zero()
    triple = P[0] ** n + P[1] ** n + P[2] ** n
    if spec.n % 3 == 0:
        eq1 = triple
    else:
        eq1 = triple - 48 * P[3] ** n
    eq2 = P[0] * P[1] * P[2] - _weber_constant(F, spec) * P[3] ** 3
    return eq1.is_zero() and eq2.is_zero()


# ---------------------------------------------------------------------------
# The isomorphisms between Weber and Fermat models (levels n | 8)


def fermat_to_weber(n: int, P: ProjPoint) -> ProjPoint:
    """(s0:s1:s2) -> (k s0^3 : k s1^3 : k s2^3 : s0 s1 s2)."""
    spec = ModelSpec(n, "fermat")
    if len(P) != 3:
        raise DomainError("Fermat points have 3 coordinates")
    if not on_model(spec, P):
        raise DomainError("point is not on the Fermat model")
    F = P[0].field
    k = {8: _sqrt2(F), 4: F.elt(2), 2: F.elt(4), 1: F.elt(16)}[n]
    s0, s1, s2 = P.coords
    img = ProjPoint((k * s0**3, k * s1**3, k * s2**3, s0 * s1 * s2))
    if not on_model(ModelSpec(n, "weber"), img):  # pragma: no cover
        raise DomainError("image left the Weber model")
    return img


def weber_to_fermat(n: int, P: ProjPoint) -> ProjPoint:
    """The inverse isomorphism, given per level by explicit coordinates."""
    spec = ModelSpec(n, "weber")
    if len(P) != 4:
        raise DomainError("Weber points have 4 coordinates")
    if not on_model(spec, P):
        raise DomainError("point is not on the Weber model")
    F = P[0].field
    u0, u1, u2, u3 = P.coords
    r2 = _sqrt2(F)
    if n == 8:
        img = (
            r2 * u2**5 * u3 - u0**3 * u1**3,
            u1**6 - 2 * u0**2 * u2**2 * u3**2,
            r2 * u0**5 * u3 - u1**3 * u2**3,
        )
        out = ProjPoint(img)
    elif n == 4:
        out = ProjPoint(
            (
                u0**3 - 2 * u1 * u2 * u3,
                u1**3 - 2 * u0 * u2 * u3,
                u2**3 - 2 * u0 * u1 * u3,
            )
        )
    elif n == 2:
        charts = (
            (-(u0**2) + 16 * u3**2, u0 * u1 - 4 * u2 * u3, u0 * u2 - 4 * u1 * u3),
            (u0 * u1 - 4 * u2 * u3, -(u1**2) + 16 * u3**2, u1 * u2 - 4 * u0 * u3),
            (u0 * u2 - 4 * u1 * u3, u1 * u2 - 4 * u0 * u3, -(u2**2) + 16 * u3**2),
        )
        out = None
        for chart in charts:
            if not all(c.is_zero() for c in chart):
                out = ProjPoint(chart)
                break
        if out is None:
            raise ChartError("all three charts vanish at this point")
    elif n == 1:
        out = ProjPoint((u0 - 16 * u3, u1 - 16 * u3, u2 - 16 * u3))
    else:
        raise DomainError(f"no isomorphism at level {n}")
    if not on_model(ModelSpec(n, "fermat"), out):
        raise DomainError("image left the Fermat model")
    return out


def fermat_projection(i: int, P: ProjPoint) -> GF2Elt:
    """Affine coordinate of the i-th quotient-line projection of F_n."""
    if i not in (0, 1, 2):
        raise DomainError("projection index must be 0, 1 or 2")
    if len(P) != 3:
        raise DomainError("Fermat points have 3 coordinates")
    num, den = {0: (1, 2), 1: (0, 2), 2: (0, 1)}[i]
    if P[den].is_zero():
        raise ChartError(f"projection {i} undefined: coordinate {den} vanishes")
    return P[num] / P[den]


# ---------------------------------------------------------------------------
# Random on-model sampling


def random_fermat_point(n: int, F: GF2Field, rng) -> ProjPoint:
    """Uniformish sample: fix X = 1, pick Y, solve Z^n = -(1 + Y^n)."""
    spec = ModelSpec(n, "fermat")
    one = F.one()
    while True:
        y = F.elt(rng.randrange(F.p), rng.randrange(F.p))
        target = -(one + y**n)
        if target.is_zero():
            continue
        poly = [F.zero()] * (n + 1)
        poly[0] = -target
        poly[n] = one
        rts = roots(GFPoly.from_coeffs(F, poly))
        if not rts:
            continue
        z = rts[rng.randrange(len(rts))][0]
        P = ProjPoint((one, y, z))
        if on_model(spec, P):
            return P


def random_weber_point(n: int, F: GF2Field, rng) -> ProjPoint:
    """Sample with X3 = 1: pick X0, solve for X1 through the two equations."""
    spec = ModelSpec(n, "weber")
    one = F.one()
    c = _weber_constant(F, spec)
    while True:
        x0 = F.elt(rng.randrange(F.p), rng.randrange(F.p))
        if x0.is_zero():
            continue
        # X1^n + X2^n = 48 - X0^n with X1 X2 = c / X0:
        # X1^(2n) - (48 - X0^n) X1^n + (c/X0)^n = 0.
        rhs = F.elt(48) - x0**n
        q = (c / x0) ** n
        poly = [F.zero()] * (2 * n + 1)
        poly[0] = q
        poly[n] = -rhs
        poly[2 * n] = one
        rts = roots(GFPoly.from_coeffs(F, poly))
        if not rts:
            continue
        x1 = rts[rng.randrange(len(rts))][0]
        if x1.is_zero():
            continue
        x2 = c / (x0 * x1)
        P = ProjPoint((x0, x1, x2, one))
        if on_model(spec, P):
            return P
