"""Truncated Laurent series in q^(1/48) over Q(zeta_48).

A series knows its coefficients for the exponent window [val, limit), in
steps of q^(1/48).  Internally the coefficients are split into components
along the power basis of Q(zeta_48): ``comps[k]`` holds a pair
``(den, nums)`` meaning that the z^k-coordinate of the coefficient at
exponent val+i is nums[i]/den.  Purely rational series (the common case:
eta quotients, Weber functions, j) live in the single component k = 0, so
all heavy convolutions run on plain integer arrays.

Integer convolution uses Kronecker substitution: pack each array into one
big integer, multiply with gmpy2, unpack with balanced digits.  This makes
products of ten-thousand-term integer series take milliseconds instead of
minutes, which is what the large modular-polynomial runs need.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

import gmpy2

from .errors import DomainError, PrecisionError
from .exactnum import _REDUCE, CycloElt, sqrt2, zeta_power

# ---------------------------------------------------------------------------
# Integer convolution kernel


def conv_int(a: list[int], b: list[int], out_len: int | None = None) -> list[int]:
    """Exact convolution of integer sequences, optionally truncated."""
    na, nb = len(a), len(b)
    full = na + nb - 1
    if out_len is None or out_len > full:
        out_len = full
    if na == 0 or nb == 0 or out_len <= 0:
        return []
    if na > out_len:
        a = a[:out_len]
        na = out_len
    if nb > out_len:
        b = b[:out_len]
        nb = out_len
    ba = max((x.bit_length() for x in a), default=0)
    bb = max((x.bit_length() for x in b), default=0)
    if ba == 0 or bb == 0:
        return [0] * out_len
    if na * nb <= 1024:
        out = [0] * out_len
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y and i + j < out_len:
                        out[i + j] += x * y
        return out
    bits = ba + bb + min(na, nb).bit_length() + 2
    nbytes = (bits + 7) // 8
    A = _pack(a, nbytes)
    B = _pack(b, nbytes)
    C = gmpy2.mpz(A) * gmpy2.mpz(B)
    return _unpack(C, nbytes, out_len)


def _pack(a: list[int], nbytes: int) -> int:
    pos = bytearray(nbytes * len(a))
    neg = bytearray(nbytes * len(a))
    for i, x in enumerate(a):
        if x > 0:
            pos[i * nbytes : i * nbytes + (x.bit_length() + 7) // 8] = x.to_bytes(
                (x.bit_length() + 7) // 8, "little"
            )
        elif x < 0:
            y = -x
            neg[i * nbytes : i * nbytes + (y.bit_length() + 7) // 8] = y.to_bytes(
                (y.bit_length() + 7) // 8, "little"
            )
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _unpack(c, nbytes: int, out_len: int) -> list[int]:
    b = nbytes * 8
    half = 1 << (b - 1)
    # Add half to every digit so that balanced digits become non-negative.
    # The repunit 1 + 2^b + 2^(2b) + ... is built from raw bytes: everything
    # here must stay linear in the packed size.
    rep = bytearray(nbytes * out_len)
    for i in range(0, len(rep), nbytes):
        rep[i] = 1
    offset = int.from_bytes(rep, "little") << (b - 1)
    mask = (1 << (b * out_len)) - 1
    total = int(c & mask) + offset
    # A possible borrow out of the kept window is irrelevant: digits below
    # out_len are exact because the offset prevents all interior borrows.
    raw = total.to_bytes(nbytes * out_len + 16, "little", signed=False)
    out = []
    for i in range(out_len):
        out.append(int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") - half)
    return out


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# ---------------------------------------------------------------------------
# The series type


class QSeries:
    """Laurent series in q^(1/48), exact over Q(zeta_48), fixed window."""

    __slots__ = ("val", "limit", "comps")

    def __init__(self, val: int, limit: int, comps: dict[int, tuple[int, list[int]]]):
        if limit < val:
            limit = val
        width = limit - val
        clean: dict[int, tuple[int, list[int]]] = {}
        for k, (den, nums) in comps.items():
            if len(nums) != width:
                raise DomainError("component width mismatch")
            if any(nums):
                clean[k] = _norm_comp(den, nums)
        # Strip leading all-zero exponents so val is the true valuation.
        if clean:
            lead = min(next(i for i, x in enumerate(nums) if x) for _, nums in clean.values())
            if lead:
                val += lead
                clean = {k: (den, nums[lead:]) for k, (den, nums) in clean.items()}
        else:
            clean = {}
        self.val = val
        self.limit = limit
        self.comps = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, val: int, limit: int) -> "QSeries":
        return cls(val, limit, {})

    @classmethod
    def from_terms(cls, terms: dict[int, CycloElt], limit: int) -> "QSeries":
        """Series from an exponent -> coefficient map, known below ``limit``."""
        live = {e: c for e, c in terms.items() if not c.is_zero()}
        if not live:
            return cls.zero(limit, limit)
        val = min(live)
        width = limit - val
        comps: dict[int, tuple[int, list[int]]] = {}
        dens: dict[int, int] = {}
        for e, c in live.items():
            for k, n in enumerate(c.nums):
                if n:
                    dens[k] = _lcm(dens.get(k, 1), c.den)
        for k, den in dens.items():
            comps[k] = (den, [0] * width)
        for e, c in live.items():
            for k, n in enumerate(c.nums):
                if n:
                    den, nums = comps[k]
                    nums[e - val] = n * (den // c.den)
        return cls(val, limit, comps)

    @classmethod
    def constant(cls, c, prec: int) -> "QSeries":
        if not isinstance(c, CycloElt):
            c = CycloElt.from_rational(c)
        return cls.from_terms({0: c}, prec)

    # -- basic views -------------------------------------------------------

    @property
    def valuation(self) -> int:
        return self.val

    @property
    def precision(self) -> int:
        """Number of retained q^(1/48) steps starting at the valuation."""
        return self.limit - self.val

    def is_zero(self) -> bool:
        return not self.comps

    def coefficient(self, e: int) -> CycloElt:
        """Exact coefficient of q^(e/48); reading past the window raises."""
        if e >= self.limit:
            raise PrecisionError(f"coefficient {e} beyond precision limit {self.limit}")
        if e < self.val:
            return CycloElt.zero()
        i = e - self.val
        nums = [0] * 16
        den = 1
        for k, (d, arr) in self.comps.items():
            if arr[i]:
                nd = _lcm(den, d)
                if nd != den:
                    nums = [x * (nd // den) for x in nums]
                    den = nd
                nums[k] += arr[i] * (den // d)
        return CycloElt(tuple(nums), den)

    def leading_coefficient(self) -> CycloElt:
        if self.is_zero():
            raise DomainError("zero series has no leading coefficient")
        return self.coefficient(self.val)

    def support(self) -> list[int]:
        """Exponents with a nonzero coefficient."""
        width = self.limit - self.val
        live = [False] * width
        for _, arr in self.comps.values():
            for i, x in enumerate(arr):
                if x:
                    live[i] = True
        return [self.val + i for i, f in enumerate(live) if f]

    def is_rational(self) -> bool:
        return set(self.comps) <= {0}

    def rational_pair(self) -> tuple[int, list[int]]:
        """(den, nums) of a rational series; raises otherwise."""
        if not self.is_rational():
            raise DomainError("series has non-rational coefficients")
        if not self.comps:
            return 1, []
        return self.comps[0]

    def dump(self) -> str:
        """Debug format: one line per nonzero term, "e c"."""
        lines = []
        for e in self.support():
            lines.append(f"{e} {self.coefficient(e).to_text()}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        head = self.support()[:4]
        terms = ", ".join(f"q^{e}/48" for e in head)
        return f"QSeries(val={self.val}, limit={self.limit}, terms~[{terms}])"

    # -- arithmetic --------------------------------------------------------

    def __neg__(self) -> "QSeries":
        return QSeries(
            self.val,
            self.limit,
            {k: (den, [-x for x in nums]) for k, (den, nums) in self.comps.items()},
        )

    def _aligned(self, other: "QSeries") -> tuple[int, int]:
        val = min(self.val, other.val)
        limit = min(self.limit, other.limit)
        return val, limit

    def __add__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction, CycloElt)):
            other = QSeries.constant(other, self.limit)
        val, limit = self._aligned(other)
        width = max(0, limit - val)
        comps: dict[int, tuple[int, list[int]]] = {}
        for src in (self, other):
            for k, (den, nums) in src.comps.items():
                off = src.val - val
                if k not in comps:
                    arr = [0] * width
                    for i, x in enumerate(nums):
                        if 0 <= off + i < width:
                            arr[off + i] = x
                    comps[k] = (den, arr)
                else:
                    d0, arr = comps[k]
                    nd = _lcm(d0, den)
                    if nd != d0:
                        arr = [x * (nd // d0) for x in arr]
                    m = nd // den
                    for i, x in enumerate(nums):
                        if x and 0 <= off + i < width:
                            arr[off + i] += x * m
                    comps[k] = (nd, arr)
        return QSeries(val, limit, comps)

    __radd__ = __add__

    def __sub__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction, CycloElt)):
            other = QSeries.constant(other, self.limit)
        return self + (-other)

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def scale(self, c) -> "QSeries":
        """Multiply by a scalar from Q(zeta_48)."""
        if not isinstance(c, CycloElt):
            c = CycloElt.from_rational(c)
        if c.is_zero():
            return QSeries.zero(self.val, self.limit)
        comps: dict[int, tuple[int, list[int]]] = {}
        acc: dict[int, list[tuple[int, list[int]]]] = {}
        for k1, (den, nums) in self.comps.items():
            for k2, n2 in enumerate(c.nums):
                if not n2:
                    continue
                for e, s in _REDUCE[k1 + k2]:
                    v = n2 if s > 0 else -n2
                    acc.setdefault(e, []).append((den * c.den, [x * v for x in nums]))
        for k, parts in acc.items():
            comps[k] = _sum_comp_parts(parts, self.limit - self.val)
        return QSeries(self.val, self.limit, comps)

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction, CycloElt)):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        val = self.val + other.val
        limit = min(self.limit + other.val, other.limit + self.val)
        width = max(0, limit - val)
        if self.is_zero() or other.is_zero() or width == 0:
            return QSeries.zero(val, limit)
        acc: dict[int, list[tuple[int, list[int]]]] = {}
        for k1, (d1, a1) in self.comps.items():
            for k2, (d2, a2) in other.comps.items():
                conv = conv_int(a1, a2, width)
                den = d1 * d2
                for e, s in _REDUCE[k1 + k2]:
                    arr = conv if s > 0 else [-x for x in conv]
                    acc.setdefault(e, []).append((den, arr))
        comps = {k: _sum_comp_parts(parts, width) for k, parts in acc.items()}
        return QSeries(val, limit, comps)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "QSeries":
        if n < 0:
            return self.invert() ** (-n)
        if n == 0:
            return QSeries.constant(1, self.precision)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self, new_limit: int) -> "QSeries":
        if new_limit >= self.limit:
            return self
        width = max(0, new_limit - self.val)
        return QSeries(
            self.val,
            new_limit,
            {k: (den, nums[:width]) for k, (den, nums) in self.comps.items()},
        )

    def _extend_zeros(self, new_limit: int) -> "QSeries":
        # Zero-extend the window.  Only valid where the caller supplies the
        # missing digits itself (Newton iteration is self-correcting, so any
        # representative agreeing on the known window will do).
        if new_limit <= self.limit:
            return self
        pad = new_limit - self.limit
        return QSeries(
            self.val,
            new_limit,
            {k: (den, nums + [0] * pad) for k, (den, nums) in self.comps.items()},
        )

    def shift_q(self, steps: int) -> "QSeries":
        """Multiply by q^(steps/48)."""
        return QSeries(
            self.val + steps,
            self.limit + steps,
            {k: (den, list(nums)) for k, (den, nums) in self.comps.items()},
        )

    def invert(self) -> "QSeries":
        """Reciprocal by Newton iteration; leading coefficient must be nonzero."""
        if self.is_zero():
            raise DomainError("cannot invert the zero series")
        prec = self.precision
        unit = self.shift_q(-self.val)  # valuation 0
        lead = unit.coefficient(0)
        x = QSeries.constant(lead.inverse(), 1)
        known = 1
        while known < prec:
            known = min(2 * known, prec)
            u = unit.truncate(known)
            two = QSeries.constant(2, known)
            xr = x._extend_zeros(known)
            x = (xr * (two - u * xr)).truncate(known)
        return x.shift_q(-self.val)

    def __truediv__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction, CycloElt)):
            if not isinstance(other, CycloElt):
                other = CycloElt.from_rational(other)
            return self.scale(other.inverse())
        if not isinstance(other, QSeries):
            return NotImplemented
        return self * other.invert()

    # -- modular substitutions ----------------------------------------------

    def substitute_qpower(self, ell: int) -> "QSeries":
        """q^(e/48) -> q^(ell*e/48) on every term."""
        if ell < 1:
            raise DomainError("substitution power must be >= 1")
        if ell == 1:
            return self
        if self.is_zero():
            return QSeries.zero(self.val * ell, (self.limit - 1) * ell + 1)
        width = self.limit - self.val
        new_val = self.val * ell
        new_limit = (self.limit - 1) * ell + 1
        new_width = new_limit - new_val
        comps = {}
        for k, (den, nums) in self.comps.items():
            arr = [0] * new_width
            for i, x in enumerate(nums):
                if x:
                    arr[i * ell] = x
            comps[k] = (den, arr)
        return QSeries(new_val, new_limit, comps)

    def shift_tau(self, k: int) -> "QSeries":
        """tau -> tau + k: scale the coefficient of q^(e/48) by zeta_48^(k*e)."""
        k %= 48
        if k == 0:
            return self
        width = self.limit - self.val
        acc: dict[int, list[tuple[int, list[int]]]] = {}
        for k1, (den, nums) in self.comps.items():
            buckets: dict[int, list[int]] = {}
            for i, x in enumerate(nums):
                if not x:
                    continue
                m = k1 + (k * (self.val + i)) % 48
                for e, s in _REDUCE[m]:
                    arr = buckets.get(e)
                    if arr is None:
                        arr = buckets[e] = [0] * width
                    arr[i] += x if s > 0 else -x
            for e, arr in buckets.items():
                acc.setdefault(e, []).append((den, arr))
        comps = {k2: _sum_comp_parts(parts, width) for k2, parts in acc.items()}
        return QSeries(self.val, self.limit, comps)


def _norm_comp(den: int, nums: list[int]) -> tuple[int, list[int]]:
    if den < 0:
        den = -den
        nums = [-x for x in nums]
    if den != 1:
        g = den
        for x in nums:
            if x:
                g = gcd(g, x)
                if g == 1:
                    break
        if g > 1:
            den //= g
            nums = [x // g for x in nums]
    return den, nums


def _sum_comp_parts(parts: list[tuple[int, list[int]]], width: int) -> tuple[int, list[int]]:
    den = 1
    for d, _ in parts:
        den = _lcm(den, d)
    out = [0] * width
    for d, arr in parts:
        m = den // d
        if m == 1:
            for i, x in enumerate(arr):
                if x:
                    out[i] += x
        else:
            for i, x in enumerate(arr):
                if x:
                    out[i] += x * m
    return den, out


# ---------------------------------------------------------------------------
# Eta components and Weber functions


def _pentagonal_terms(max_index: int):
    """Yield (generalized pentagonal number g_k, (-1)^k) while g_k <= max_index."""
    yield 0, 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        s = -1 if k % 2 else 1
        if g1 > max_index and g2 > max_index:
            return
        if g1 <= max_index:
            yield g1, s
        if g2 <= max_index:
            yield g2, s
        k += 1


_ETA_STEP = {"tau": (2, 48), "tau_half": (1, 24), "tau_plus1_half": (1, 24), "two_tau": (4, 96)}


def eta_component(variant: str, prec: int) -> QSeries:
    """q-expansion of the Dedekind eta function at tau, tau/2, (tau+1)/2 or 2*tau.

    All four variants come from one pentagonal-number kernel: the argument
    only rescales the exponent grid, and (tau+1)/2 additionally applies the
    tau -> tau+1 coefficient twist.
    """
    if variant not in _ETA_STEP:
        raise DomainError(f"unknown eta variant {variant!r}")
    if prec < 1:
        raise DomainError("precision must be >= 1")
    val, step = _ETA_STEP[variant]
    arr = [0] * prec
    for g, s in _pentagonal_terms((prec - 1) // step):
        arr[g * step] = s
    series = QSeries(val, val + prec, {0: (1, arr)})
    if variant == "tau_plus1_half":
        series = series.shift_tau(1)
    return series


_WEBER_CACHE: dict[tuple[str, int], QSeries] = {}


def weber_series(which: str, prec: int) -> QSeries:
    """q-expansion of f, f1, f2 or of the normalized triple u0, u1, u2."""
    if prec < 1:
        raise DomainError("precision must be >= 1")
    key = (which, prec)
    cached = _WEBER_CACHE.get(key)
    if cached is not None:
        return cached
    guard = prec + 4
    if which == "f":
        s = eta_component("tau_plus1_half", guard) / eta_component("tau", guard)
        s = s.scale(zeta_power(-1))
    elif which == "f1":
        s = eta_component("tau_half", guard) / eta_component("tau", guard)
    elif which == "f2":
        s = eta_component("two_tau", guard) / eta_component("tau", guard)
        s = s.scale(sqrt2())
    elif which == "u0":
        s = weber_series("f", prec)
    elif which == "u1":
        s = weber_series("f1", prec).scale(zeta_power(3))
    elif which == "u2":
        s = weber_series("f2", prec).scale(zeta_power(-3))
    else:
        raise DomainError(f"unknown Weber function {which!r}")
    s = s.truncate(s.val + prec)
    _WEBER_CACHE[key] = s
    return s


def _sigma3_series(n_terms: int) -> list[int]:
    out = [0] * n_terms
    for d in range(1, n_terms):
        c = d * d * d
        for m in range(d, n_terms, d):
            out[m] += c
    return out


_J_CACHE: dict[int, QSeries] = {}


def j_series(prec: int) -> QSeries:
    """j as E4^3 / Delta, independently of the Weber functions.

    E4 = 1 + 240 sum sigma_3(n) q^n and Delta = q prod (1-q^n)^24; the
    result has valuation -48 in q^(1/48) steps.
    """
    if prec < 1:
        raise DomainError("precision must be >= 1")
    cached = _J_CACHE.get(prec)
    if cached is not None:
        return cached
    nq = prec // 48 + 3
    sig = _sigma3_series(nq)
    e4_arr = [0] * (nq * 48)
    e4_arr[0] = 1
    for n in range(1, nq):
        e4_arr[48 * n] = 240 * sig[n]
    e4 = QSeries(0, nq * 48, {0: (1, e4_arr)})
    eta24 = eta_component("tau", nq * 48) ** 24  # = q * prod(1-q^n)^24 on the grid
    j = (e4 ** 3) / eta24
    j = j.truncate(j.val + prec)
    _J_CACHE[prec] = j
    return j


def line_series(line, prec: int) -> QSeries:
    """The invariant q-expansion of a registered line (by name or object)."""
    name = getattr(line, "name", line)
    if name == "j":
        return j_series(prec)
    if name == "t":
        return weber_series("f1", prec + 16) ** 8
    if name == "r":
        return weber_series("f", prec + 8) ** 3
    if name.startswith("x"):
        n = int(name[1:])
        if 24 % n != 0:
            raise DomainError(f"unknown line {name!r}")
        k = 24 // n
        return weber_series("f", prec + 2 * k) ** k
    if name.startswith("y"):
        n = int(name[1:])
        if 8 % n != 0:
            raise DomainError(f"unknown line {name!r}")
        k = 8 // n
        u0 = weber_series("u0", prec + 2 * k + 8)
        u1 = weber_series("u1", prec + 2 * k + 8)
        s = (u0 / u1) ** k
        return s.truncate(s.val + prec)
    raise DomainError(f"unknown line {name!r}")
