"""Supersingular moduli, isogeny graphs on invariant lines, and walks.

Supersingular j-invariants are enumerated through the Legendre/Hasse
polynomial sum_i C(m,i)^2 x^i with m = (p-1)/2: its roots over GF(p^2)
are exactly the supersingular Legendre parameters, which the sextic map
to j collapses onto the supersingular locus.  A closure check under the
classical 2-isogeny polynomial and the count formula floor(p/12) + eps
cross-validate every enumeration.

Graph nodes on a line are the fiber values above each supersingular j
(roots of numerator(J(x) - j0) with multiplicity); edges come from the
roots of the line's level-ell modular polynomial specialized at a node.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field

import numpy as np

from . import modpoly
from .errors import DomainError, InternalError
from .exactnum import CycloElt
from .gf import (
    GF2Elt,
    GF2Field,
    GFPoly,
    fp_divmod,
    fp_gcd,
    fp_mul,
    fp_powmod,
    fp_powmod_x,
    fp_trim,
    nth_root_of_unity,
    roots,
    sqrt,
)

_SS_EPS = {1: 0, 5: 1, 7: 1, 11: 2}


def ss_count_formula(p: int) -> int:
    return p // 12 + _SS_EPS[p % 12]


def _hasse_poly(p: int) -> np.ndarray:
    m = (p - 1) // 2
    coeffs = np.zeros(m + 1, dtype=np.int64)
    c = 1
    for i in range(m + 1):
        coeffs[i] = c * c % p
        # C(m, i+1) = C(m, i) * (m - i) / (i + 1)
        c = c * (m - i) % p * pow(i + 1, p - 2, p) % p
    return coeffs


def _legendre_j(lam: GF2Elt) -> GF2Elt:
    num = lam * lam - lam + 1
    den = lam * lam * (lam - 1) ** 2
    return 256 * num**3 / den


def _edf_quadratic(q: np.ndarray, p: int, rng: random.Random) -> list[np.ndarray]:
    """Split a squarefree product of irreducible quadratics over GF(p)."""
    q = fp_trim(q)
    if len(q) <= 1:
        return []
    if len(q) == 3:
        return [q]
    e = (p * p - 1) // 2
    while True:
        h = np.array([rng.randrange(p), rng.randrange(1, p)], dtype=np.int64)
        w = fp_powmod(h, e, q, p)
        w = w.copy()
        if len(w) == 0:
            continue
        w[0] = (w[0] - 1) % p
        g = fp_gcd(q, w, p)
        if 0 < len(g) - 1 < len(q) - 1:
            rest = fp_divmod(q, g, p)[0]
            return _edf_quadratic(g, p, rng) + _edf_quadratic(rest, p, rng)


def ss_j_enumerate(F: GF2Field) -> list[GF2Elt]:
    """All supersingular j-invariants in GF(p^2), canonically ordered."""
    p = F.p
    if p < 5:
        raise DomainError("supersingular enumeration needs p >= 5")
    H = _hasse_poly(p)
    # GF(p)-roots by direct scan (0 and 1 are never roots).
    fp_roots = [x for x in range(p) if _horner_fp(H, x, p) == 0]
    rest = H
    for r in fp_roots:
        rest = fp_divmod(rest, np.array([-r % p, 1], dtype=np.int64), p)[0]
    lams = [F.elt(r) for r in fp_roots]
    if len(rest) > 1:
        # The remaining factor must split into quadratics over GF(p^2).
        xq = fp_powmod_x(p, rest, p)
        xq2 = fp_powmod(xq, p, rest, p)
        xq2 = xq2.copy()
        if len(xq2) < 2:
            xq2 = np.concatenate([xq2, np.zeros(2 - len(xq2), np.int64)])
        xq2[1] = (xq2[1] - 1) % p
        if len(fp_gcd(rest, xq2, p)) != len(rest):
            raise InternalError("Hasse polynomial does not split over GF(p^2)")
        seed = int.from_bytes(
            hashlib.sha256(f"hasse:{p}".encode()).digest()[:8], "big"
        )
        rng = random.Random(seed)
        for quad in _edf_quadratic(rest, p, rng):
            b, c = int(quad[1]), int(quad[0])
            lead_inv = pow(int(quad[2]), p - 2, p)
            b = b * lead_inv % p
            c = c * lead_inv % p
            disc = F.elt(b * b - 4 * c)
            s = sqrt(disc)
            if s is None:
                raise InternalError("irreducible quadratic with no GF(p^2) root")
            half = F.elt(pow(2, p - 2, p))
            lams.append((F.elt(-b) + s) * half)
            lams.append((F.elt(-b) - s) * half)
    j_set: dict[tuple[int, int], GF2Elt] = {}
    for lam in lams:
        j = _legendre_j(lam)
        j_set[j.key()] = j
    out = sorted(j_set.values(), key=lambda e: e.key())
    if len(out) != ss_count_formula(p):
        raise InternalError(
            f"supersingular count mismatch at p={p}: {len(out)} vs {ss_count_formula(p)}"
        )
    _phi2_closure_check(F, out)
    return out


def _horner_fp(coeffs: np.ndarray, x: int, p: int) -> int:
    acc = 0
    for c in coeffs[::-1]:
        acc = (acc * x + int(c)) % p
    return acc


def _phi2_closure_check(F: GF2Field, j_list: list[GF2Elt]) -> None:
    phi2 = modpoly.builtin("phi2_j")
    keys = {j.key() for j in j_list}
    for j in j_list:
        poly = specialize_biPoly(phi2, F, j)
        for r, _ in roots(poly):
            if r.key() not in keys:
                raise InternalError(
                    f"2-isogeny neighbor {r.to_text()} escaped the supersingular set"
                )


# ---------------------------------------------------------------------------
# Coefficient reduction GF(p^2) <- Q(zeta_48)


def cyclo_to_gf(c: CycloElt, F: GF2Field) -> GF2Elt:
    """Reduce an element of Q(zeta_48) at the canonical prime above p."""
    if c.is_rational():
        v = c.rational_value()
        num = F.elt(v.numerator % F.p)
        return num / F.elt(v.denominator % F.p)
    z = nth_root_of_unity(F, 48)
    acc = F.zero()
    zp = F.one()
    for n in c.nums:
        if n:
            acc = acc + zp * F.elt(n % F.p)
        zp = zp * z
    return acc / F.elt(c.den % F.p)


def specialize_biPoly(poly: modpoly.BiPoly, F: GF2Field, y0: GF2Elt) -> GFPoly:
    """Phi(x, y0) as a GFPoly in x."""
    dx = max((i for i, _ in poly.terms), default=0)
    coeffs = [F.zero()] * (dx + 1)
    ypow: dict[int, GF2Elt] = {}

    def ypower(j: int) -> GF2Elt:
        if j not in ypow:
            ypow[j] = y0**j
        return ypow[j]

    for (i, j), c in poly.terms.items():
        coeffs[i] = coeffs[i] + cyclo_to_gf(c, F) * ypower(j)
    return GFPoly.from_coeffs(F, coeffs)


# ---------------------------------------------------------------------------
# Node fibers and graphs


def nodes_above(line_name, j0: GF2Elt) -> list[tuple[GF2Elt, int]]:
    """Roots with multiplicity of numerator(J_line(x) - j0)."""
    ln = modpoly.line(line_name)
    F = j0.field
    num, den = ln.j_num, ln.j_den
    n = max(len(num), len(den))
    coeffs = []
    for i in range(n):
        a = F.elt(num[i] % F.p) if i < len(num) else F.zero()
        b = F.elt(den[i] % F.p) if i < len(den) else F.zero()
        coeffs.append(a - j0 * b)
    poly = GFPoly.from_coeffs(F, coeffs)
    found = roots(poly)
    total = sum(m for _, m in found)
    if total != ln.cover_degree:
        raise InternalError(
            f"fiber above {j0.to_text()} on {ln.name} has weight {total}, "
            f"expected {ln.cover_degree}"
        )
    return found


@dataclass
class SSGraph:
    field: GF2Field
    line: str
    ell: int
    nodes: list[GF2Elt]
    multiplicities: list[int]
    edges: list[tuple[int, int, int]]  # (src, dst, mult)
    level_shifted: bool = False

    def node_index(self) -> dict[tuple[int, int], int]:
        return {v.key(): i for i, v in enumerate(self.nodes)}

    def out_multiplicity(self, src: int) -> int:
        return sum(m for s, _, m in self.edges if s == src)

    def to_json_dict(self) -> dict:
        return {
            "p": self.field.p,
            "d": self.field.d,
            "line": self.line,
            "ell": self.ell,
            "nodes": [
                {"id": i, "value": v.to_text(), "mult": m}
                for i, (v, m) in enumerate(zip(self.nodes, self.multiplicities))
            ],
            "edges": [list(e) for e in self.edges],
        }

    def to_dot(self) -> str:
        lines = [f'digraph ss_{self.line}_{self.ell} {{']
        for i, v in enumerate(self.nodes):
            lines.append(f'  n{i} [label="{v.to_text()}"];')
        for s, t, m in self.edges:
            label = f' [label="{m}"]' if m > 1 else ""
            lines.append(f"  n{s} -> n{t}{label};")
        lines.append("}")
        return "\n".join(lines)


def _graph_polynomial(line_name: str, ell: int) -> tuple[modpoly.BiPoly, bool]:
    ln = modpoly.line(line_name)
    shifted = False
    if ln.name == "x24" and ell in (2, 3):
        shifted = ell == 2
    if ln.name == "t" and ell == 2:
        shifted = True
    poly = modpoly.cached_generate(ln.name, ell)
    return poly, shifted


def build_graph(F: GF2Field, line_name, ell: int, poly: modpoly.BiPoly | None = None) -> SSGraph:
    """Nodes above every supersingular j, edges from the modular polynomial."""
    ln = modpoly.line(line_name)
    if poly is None:
        poly, shifted = _graph_polynomial(ln.name, ell)
    else:
        shifted = False
    ss = ss_j_enumerate(F)
    if not ss:
        raise InternalError("supersingular set is empty")
    node_pairs: list[tuple[GF2Elt, int]] = []
    for j0 in ss:
        node_pairs.extend(nodes_above(ln, j0))
    node_pairs.sort(key=lambda vm: vm[0].key())
    nodes = [v for v, _ in node_pairs]
    mults = [m for _, m in node_pairs]
    index = {v.key(): i for i, v in enumerate(nodes)}
    edges: list[tuple[int, int, int]] = []
    for src, u in enumerate(nodes):
        spec = specialize_biPoly(poly, F, u)
        out = 0
        for r, m in roots(spec):
            dst = index.get(r.key())
            if dst is None:
                raise InternalError(
                    f"edge target {r.to_text()} is not a node on {ln.name}"
                )
            edges.append((src, dst, m))
            out += m
        if out != ell + 1:
            raise InternalError(
                f"out-multiplicity {out} != {ell + 1} at node {u.to_text()}"
            )
    return SSGraph(
        field=F,
        line=ln.name,
        ell=ell,
        nodes=nodes,
        multiplicities=mults,
        edges=edges,
        level_shifted=shifted,
    )


# ---------------------------------------------------------------------------
# Splitting checks and walks


@dataclass
class SplitReport:
    p: int
    entries: list[tuple[str, int, int, bool]]  # (j0, distinct, expected, ok)
    violations: int = field(init=False)

    def __post_init__(self):
        self.violations = sum(0 if ok else 1 for _, _, _, ok in self.entries)


def split_check(F: GF2Field) -> SplitReport:
    """Degree-72 Weber fiber polynomial splits over GF(p^2) for every ss j."""
    from .gf import split_count

    entries = []
    for j0 in ss_j_enumerate(F):
        coeffs = [F.zero()] * 73
        # (x^24 - 16)^3 - j0 x^24
        coeffs[0] = F.elt(-4096)
        coeffs[24] = F.elt(768) - j0
        coeffs[48] = F.elt(-48)
        coeffs[72] = F.one()
        poly = GFPoly.from_coeffs(F, coeffs)
        distinct = split_count(poly)
        if j0 == F.zero():
            expected = 24
        elif j0 == F.elt(1728):
            expected = 36
        else:
            expected = 72
        entries.append((j0.to_text(), distinct, expected, distinct == expected))
    return SplitReport(p=F.p, entries=entries)


@dataclass
class WalkReport:
    path: list[GF2Elt]
    dead_end: bool
    seed: int


def walk(
    F: GF2Field,
    line_name,
    ell: int,
    u0: GF2Elt,
    length: int,
    rng_seed: int,
    poly: modpoly.BiPoly | None = None,
) -> WalkReport:
    """Non-backtracking random walk along the level-ell correspondence."""
    if length < 1:
        raise DomainError("walk length must be >= 1")
    ln = modpoly.line(line_name)
    if poly is None:
        poly, _ = _graph_polynomial(ln.name, ell)
    rng = random.Random(rng_seed)
    path = [u0]
    prev: GF2Elt | None = None
    dead = False
    for _ in range(length):
        cur = path[-1]
        spec = specialize_biPoly(poly, F, cur)
        rts = [r for r, _ in roots(spec)]
        if not rts:
            dead = True
            break
        options = rts
        if prev is not None:
            non_back = [r for r in rts if r != prev]
            if non_back:
                options = non_back
            else:
                dead = True
        choice = options[rng.randrange(len(options))]
        prev = cur
        path.append(choice)
    return WalkReport(path=path, dead_end=dead, seed=rng_seed)
