"""The 3x3 monomial representation of PSL_2(Z) on normalized Weber triples.

The two generator images are monomial matrices over Q(zeta_24) (stored in
Q(zeta_48)); the closure of the group they generate has order 1152, its
diagonal subgroup has order 192, and the quotient realizes the symmetric
group permuting the three functions.  The level-16 congruence identity
from the split-Cartan discussion is checked directly in SL_2(Z/16).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DivergenceError, DomainError
from .exactnum import CycloElt, zeta_power

_Z8 = zeta_power(6)
_Z24 = zeta_power(2)
_ZERO = CycloElt.zero()
_ONE = CycloElt.one()


class CycMat3:
    """3x3 matrix over Q(zeta_48), hashable for closure bookkeeping."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise DomainError("need a 3x3 matrix")
        self.rows = rows

    def __eq__(self, other):
        return isinstance(other, CycMat3) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __mul__(self, other: "CycMat3") -> "CycMat3":
        a, b = self.rows, other.rows
        out = []
        for i in range(3):
            row = []
            for j in range(3):
                acc = _ZERO
                for k in range(3):
                    if not a[i][k].is_zero() and not b[k][j].is_zero():
                        acc = acc + a[i][k] * b[k][j]
                row.append(acc)
            out.append(row)
        return CycMat3(out)

    def scale(self, c: CycloElt) -> "CycMat3":
        return CycMat3([[x * c for x in row] for row in self.rows])

    def is_monomial(self) -> bool:
        for rows in (self.rows, tuple(zip(*self.rows))):
            for r in rows:
                if sum(0 if x.is_zero() else 1 for x in r) != 1:
                    return False
        return True

    def permutation(self) -> tuple[int, int, int]:
        """Column index of the nonzero entry in each row (monomial only)."""
        out = []
        for r in self.rows:
            idx = [j for j, x in enumerate(r) if not x.is_zero()]
            if len(idx) != 1:
                raise DomainError("matrix is not monomial")
            out.append(idx[0])
        return tuple(out)

    def is_diagonal(self) -> bool:
        return self.permutation() == (0, 1, 2)

    def inverse(self) -> "CycMat3":
        """Inverse of a monomial matrix: transpose with inverted entries."""
        perm = self.permutation()
        rows = [[_ZERO] * 3 for _ in range(3)]
        for i, j in enumerate(perm):
            rows[j][i] = self.rows[i][j].inverse()
        return CycMat3(rows)

    def __repr__(self):
        body = "; ".join(
            ", ".join(x.to_text() for x in row) for row in self.rows
        )
        return f"CycMat3[{body}]"


IDENTITY = CycMat3([[_ONE, _ZERO, _ZERO], [_ZERO, _ONE, _ZERO], [_ZERO, _ZERO, _ONE]])

IOTA_S = CycMat3(
    [
        [_ONE, _ZERO, _ZERO],
        [_ZERO, _ZERO, _Z8.inverse()],
        [_ZERO, _Z8, _ZERO],
    ]
)

IOTA_T = CycMat3(
    [
        [_ZERO, _Z24, _ZERO],
        [(_Z24 * _Z24).inverse(), _ZERO, _ZERO],
        [_ZERO, _ZERO, _Z24],
    ]
)


def iota_word(word: str) -> CycMat3:
    """Product of generator images; lowercase letters are inverses."""
    gens = {
        "S": IOTA_S,
        "T": IOTA_T,
        "s": IOTA_S.inverse(),
        "t": IOTA_T.inverse(),
    }
    acc = IDENTITY
    for ch in word:
        if ch not in gens:
            raise DomainError(f"unknown generator {ch!r}")
        acc = acc * gens[ch]
    return acc


def mat_pow(m: CycMat3, n: int) -> CycMat3:
    acc = IDENTITY
    base = m
    if n < 0:
        base = m.inverse()
        n = -n
    while n:
        if n & 1:
            acc = acc * base
        base = base * base
        n >>= 1
    return acc


@dataclass
class ClosureReport:
    order_g: int
    order_d: int
    quotient: str
    quotient_order: int
    relation_t16: bool
    coset_permutations: dict


def group_closure(bound: int = 4096) -> ClosureReport:
    """BFS closure of <iota(S), iota(T)> with exact equality testing."""
    gens = [IOTA_S, IOTA_T]
    seen = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                c = m * g
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
                    if len(seen) > bound:
                        raise DivergenceError(
                            f"closure exceeded safety bound {bound}"
                        )
        frontier = nxt
    diag = [m for m in seen if m.is_diagonal()]
    perms = {m.permutation() for m in seen}
    # The permutation map must be a homomorphism onto S3 with kernel D.
    quotient = "S3" if len(perms) == 6 else f"order-{len(perms)} permutation group"
    t16 = mat_pow(IOTA_T, 16)
    z3inv = zeta_power(-16)
    relation = (
        t16 == IDENTITY.scale(z3inv)
        and mat_pow(iota_word("STS"), 16) == IDENTITY.scale(z3inv)
    )
    coset = {
        "U": iota_word("tST").permutation(),
        "V": iota_word("ttSTT").permutation(),
        "W": iota_word("STTT").permutation(),
    }
    return ClosureReport(
        order_g=len(seen),
        order_d=len(diag),
        quotient=quotient,
        quotient_order=len(perms),
        relation_t16=relation,
        coset_permutations=coset,
    )


# ---------------------------------------------------------------------------
# SL_2(Z/16) identity


class SL2Mod:
    """2x2 matrix over Z/mZ with determinant 1."""

    __slots__ = ("m", "a", "b", "c", "d")

    def __init__(self, m: int, a: int, b: int, c: int, d: int):
        self.m = m
        self.a, self.b, self.c, self.d = a % m, b % m, c % m, d % m
        if (self.a * self.d - self.b * self.c) % m != 1:
            raise DomainError("determinant is not 1")

    def __mul__(self, o: "SL2Mod") -> "SL2Mod":
        m = self.m
        return SL2Mod(
            m,
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def inverse(self) -> "SL2Mod":
        return SL2Mod(self.m, self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "SL2Mod":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        acc = SL2Mod(self.m, 1, 0, 0, 1)
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __eq__(self, o):
        return (
            isinstance(o, SL2Mod)
            and (self.m, self.a, self.b, self.c, self.d)
            == (o.m, o.a, o.b, o.c, o.d)
        )

    def reduce(self, m2: int) -> "SL2Mod":
        return SL2Mod(m2, self.a, self.b, self.c, self.d)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __repr__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]] mod {self.m}"


def sl2_identity_check() -> dict:
    """T^2 U^2 T^-2 U^-2 with U = S T S^-1 in SL_2(Z/16).

    Returns the three verdicts: the word equals [[13,8],[8,5]], its square
    is 9 I, and the reduction mod 8 is the diagonal [[5,0],[0,5]].
    """
    S = SL2Mod(16, 0, -1, 1, 0)
    T = SL2Mod(16, 1, 1, 0, 1)
    U = S * T * S.inverse()
    word = (T**2) * (U**2) * (T**-2) * (U**-2)
    target = SL2Mod(16, 13, 8, 8, 5)
    sq = word * word
    return {
        "word": word.entries(),
        "matches_13_8_8_5": word == target,
        "square_is_9I": sq == SL2Mod(16, 9, 0, 0, 9),
        "mod8_is_5I": word.reduce(8) == SL2Mod(8, 5, 0, 0, 5),
    }
