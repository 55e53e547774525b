"""Integer Hecke operators on supersingular modules and the factor sieve.

The adjacency matrix of a level-ell supersingular graph acts on the free
module over its nodes; columns index sources, so column sums are ell + 1
and the all-ones row vector is a left eigenvector.  The sieve enumerates
Hasse-bounded integer eigenvalue candidates per operator and intersects
exact rational kernels, which finds every simultaneous integer
eigensystem without factoring characteristic polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import AmbiguousOrbit, DomainError
from .linalg import kernel_rational, mat_mul_int
from .ssgraph import SSGraph


@dataclass
class HeckeOp:
    ell: int
    matrix: list[list[int]]  # matrix[dst][src] = multiplicity

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def column_sums(self) -> list[int]:
        n = self.dim
        return [sum(self.matrix[i][j] for i in range(n)) for j in range(n)]


def hecke_matrix(g: SSGraph) -> HeckeOp:
    n = len(g.nodes)
    m = [[0] * n for _ in range(n)]
    for src, dst, mult in g.edges:
        m[dst][src] += mult
    return HeckeOp(ell=g.ell, matrix=m)


def commute_check(A: HeckeOp, B: HeckeOp) -> bool:
    if A.dim != B.dim:
        raise DomainError("operators act on different modules")
    return mat_mul_int(A.matrix, B.matrix) == mat_mul_int(B.matrix, A.matrix)


@dataclass
class Eigensystem:
    eigenvalues: dict[int, int]  # ell -> a_ell
    space_dim: int
    basis: list[list[Fraction]]

    def is_eisenstein(self) -> bool:
        return all(a == ell + 1 for ell, a in self.eigenvalues.items())

    def hasse_ok(self) -> bool:
        return all(
            a * a <= 4 * ell or a == ell + 1 for ell, a in self.eigenvalues.items()
        )


def _kernel_on_subspace(
    op: list[list[int]], a: int, basis: list[list[Fraction]]
) -> list[list[Fraction]]:
    """Basis of ker(op - a) intersected with span(basis)."""
    n = len(op)
    k = len(basis)
    rows = []
    for i in range(n):
        row = []
        for t in range(k):
            v = basis[t]
            s = sum(Fraction(op[i][j]) * v[j] for j in range(n) if op[i][j])
            s -= a * v[i]
            row.append(s)
        rows.append(row)
    combo = kernel_rational(rows)
    out = []
    for c in combo:
        vec = [Fraction(0)] * n
        for t, coef in enumerate(c):
            if coef:
                for j in range(n):
                    vec[j] += coef * basis[t][j]
        out.append(vec)
    return out


def eigen_sieve(ops: list[HeckeOp], exclude_eisenstein: bool = True) -> list[Eigensystem]:
    """All maximal simultaneous integer eigensystems of commuting operators.

    Candidates per operator are the integers within the Hasse bound
    together with ell + 1; kernels are intersected exactly over Q.
    """
    if not ops:
        raise DomainError("need at least one operator")
    n = ops[0].dim
    for a, b in zip(ops, ops[1:]):
        if a.dim != b.dim:
            raise DomainError("operators act on different modules")
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if not commute_check(ops[i], ops[j]):
                raise DomainError("operators do not commute")

    identity = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    systems: list[Eigensystem] = []

    def descend(level: int, eigenvalues: dict[int, int], basis: list[list[Fraction]]):
        if level == len(ops):
            systems.append(
                Eigensystem(
                    eigenvalues=dict(eigenvalues),
                    space_dim=len(basis),
                    basis=basis,
                )
            )
            return
        op = ops[level]
        bound = math.isqrt(4 * op.ell)
        candidates = list(range(-bound, bound + 1)) + [op.ell + 1]
        for a in candidates:
            sub = _kernel_on_subspace(op.matrix, a, basis)
            if sub:
                eigenvalues[op.ell] = a
                descend(level + 1, eigenvalues, sub)
                del eigenvalues[op.ell]

    descend(0, {}, identity)
    if exclude_eisenstein:
        systems = [s for s in systems if not s.is_eisenstein()]
    systems.sort(key=lambda s: tuple(sorted(s.eigenvalues.items())))
    return systems


# ---------------------------------------------------------------------------
# Twist orbits


def _quadratic_characters_mod24():
    """All 8 quadratic characters of (Z/24)^*, as residue -> +-1 maps."""
    residues = (1, 5, 7, 11, 13, 17, 19, 23)
    # (Z/24)^* is elementary 2-abelian, generated by 5, 7, 13.
    gens = (5, 7, 13)
    chars = []
    for mask in range(8):
        signs = {g: (-1 if (mask >> k) & 1 else 1) for k, g in enumerate(gens)}
        table = {1: 1}
        # Fill by multiplicativity.
        for r in residues[1:]:
            # express r as a product of generators
            val = 1
            x = r
            rep = {
                5: (5,), 7: (7,), 13: (13,),
                11: (5, 7, 13), 17: (5, 13), 19: (5, 7), 23: (7, 13),
            }[r]
            for g in rep:
                val *= signs[g]
            table[r] = val
        chars.append(table)
    return chars


_CHARS24 = _quadratic_characters_mod24()


@dataclass
class TwistOrbit:
    members: list[int]  # indices into the input system list
    character: dict[int, int] | None  # residue -> sign linking member 0 to 1
    ambiguous: bool = False


def _linking_characters(a: Eigensystem, b: Eigensystem) -> list[dict[int, int]]:
    for ell in a.eigenvalues:
        if math.gcd(ell, 24) != 1:
            raise DomainError(
                f"twist grouping needs Hecke levels coprime to 24, got {ell}"
            )
    out = []
    for chi in _CHARS24:
        ok = True
        for ell, av in a.eigenvalues.items():
            bv = b.eigenvalues.get(ell)
            if bv is None or bv != chi[ell % 24] * av:
                ok = False
                break
        if ok:
            out.append(chi)
    return out


def twist_orbits(systems: list[Eigensystem], line_name: str | None = None) -> list[TwistOrbit]:
    """Group eigensystems by sign-twists under quadratic characters mod 24."""
    n = len(systems)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    links: dict[tuple[int, int], list[dict[int, int]]] = {}
    for i in range(n):
        for j in range(i + 1, n):
            chis = _linking_characters(systems[i], systems[j])
            if chis:
                links[(i, j)] = chis
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    orbits = []
    for members in groups.values():
        members.sort()
        chi = None
        ambiguous = False
        if len(members) > 1:
            pair = (members[0], members[1])
            chis = links.get(pair, [])
            if not chis:
                # connected through a chain; recompute directly
                chis = _linking_characters(systems[pair[0]], systems[pair[1]])
            if len(chis) == 1:
                chi = chis[0]
            else:
                ambiguous = True
        if len(members) not in (1, 2, 4):
            raise AmbiguousOrbit(
                f"orbit size {len(members)} out of the expected {{1, 2, 4}}"
            )
        orbits.append(TwistOrbit(members=members, character=chi, ambiguous=ambiguous))
    orbits.sort(key=lambda o: o.members[0])
    return orbits
