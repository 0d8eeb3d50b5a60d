"""Exact octonion arithmetic and the spin actions of the twisting elements.

The octonions are R^8 with orthonormal basis e_0..e_7, e_0 the identity and
e_i e_j = a_ijk e_k - delta_ij e_0 for the totally antisymmetric tensor with
a_ijk = 1 on the triples 123, 154, 264, 374, 176, 257, 365.

A spin element is a list of Clifford factors b_1..b_n; its three induced
8x8 matrices (vector, spinor, conjugate spinor) are exact rationals,
normalized by the unique positive scalar making them orthogonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import divisors, mobius, sqrt_exact
from .etaq import CycleShape

TRIPLES = ((1, 2, 3), (1, 5, 4), (2, 6, 4), (3, 7, 4),
           (1, 7, 6), (2, 5, 7), (3, 6, 5))


class IrrationalNormalizer(ArithmeticError):
    """Spinor normalization scalar is not rational for these factors."""


class OrderExceedsCap(ArithmeticError):
    """Matrix order search exceeded its cap."""


class NotProductOfCyclotomicBlocks(ArithmeticError):
    """Characteristic polynomial is not a product of (x^a - 1)^b factors."""


def _build_table():
    # table[i][j] = list of (basis index, sign) contributions of e_i * e_j
    table = [[None] * 8 for _ in range(8)]
    for j in range(8):
        table[0][j] = (j, 1)
        table[j][0] = (j, 1)
    for i in range(1, 8):
        table[i][i] = (0, -1)
    for (i, j, k) in TRIPLES:
        for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
            table[a][b] = (c, 1)
            table[b][a] = (c, -1)
    return table


_TABLE = _build_table()

Octonion = tuple  # 8-tuple of Fractions


def octonion(coords) -> Octonion:
    coords = tuple(Fraction(c) for c in coords)
    if len(coords) != 8:
        raise ValueError("an octonion has 8 coordinates")
    return coords


def basis_octonion(i: int) -> Octonion:
    return octonion([1 if j == i else 0 for j in range(8)])


def oct_mul(a: Octonion, b: Octonion) -> Octonion:
    out = [Fraction(0)] * 8
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if not bj:
                continue
            k, s = _TABLE[i][j]
            out[k] += ai * bj if s > 0 else -ai * bj
    return tuple(out)


def oct_norm(a: Octonion) -> Fraction:
    return sum(c * c for c in a)


# ----------------------------------------------------------------------
# 8x8 exact matrices

def mat_mul8(a, b):
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt)
                 for row in a)


def mat_vec8(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def mat_scale8(a, c):
    c = Fraction(c)
    return tuple(tuple(c * x for x in row) for row in a)


def mat_identity8():
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(8))
                 for i in range(8))


def mat_trace8(a) -> Fraction:
    return sum(a[i][i] for i in range(8))


def left_mult_matrix(b: Octonion):
    """Matrix of x -> b*x in the basis e_0..e_7."""
    cols = [oct_mul(b, basis_octonion(j)) for j in range(8)]
    return tuple(tuple(cols[j][i] for j in range(8)) for i in range(8))


def right_mult_matrix(b: Octonion):
    """Matrix of x -> x*b."""
    cols = [oct_mul(basis_octonion(j), b) for j in range(8)]
    return tuple(tuple(cols[j][i] for j in range(8)) for i in range(8))


def bi_mult_matrix(b: Octonion):
    """Matrix of x -> b*(x*b); the two composition orders agree."""
    lb, rb = left_mult_matrix(b), right_mult_matrix(b)
    m = mat_mul8(lb, rb)
    assert m == mat_mul8(rb, lb), "L_b and R_b must commute"
    return m


# ----------------------------------------------------------------------
# spin elements

@dataclass(frozen=True)
class SpinElement:
    """A product of Clifford factors 1b_1 ... 1b_n (n even, N(b_i) > 0)."""

    factors: tuple[Octonion, ...]

    def __post_init__(self):
        if len(self.factors) % 2 != 0:
            raise ValueError("spin elements need an even number of factors")
        if any(oct_norm(b) <= 0 for b in self.factors):
            raise ValueError("factors must have positive norm")

    def norm_product(self) -> Fraction:
        p = Fraction(1)
        for b in self.factors:
            p *= oct_norm(b)
        return p

    def spinor_normalizer(self) -> Fraction:
        """1/sqrt(prod N(b_i)); must be rational."""
        s = sqrt_exact(self.norm_product())
        if s is None:
            raise IrrationalNormalizer(
                "product of factor norms is not a rational square")
        return 1 / s


def _composite(matrices):
    m = mat_identity8()
    for f in matrices:
        m = mat_mul8(m, f)
    return m


def rho_V(u: SpinElement):
    """Vector representation: normalized product of the bi-multiplications."""
    m = _composite([bi_mult_matrix(b) for b in u.factors])
    return mat_scale8(m, 1 / u.norm_product())


def rho_L(u: SpinElement):
    """Conjugate-spinor representation: normalized left multiplications."""
    m = _composite([left_mult_matrix(b) for b in u.factors])
    return mat_scale8(m, u.spinor_normalizer())


def rho_R(u: SpinElement):
    """Spinor representation: normalized right multiplications."""
    m = _composite([right_mult_matrix(b) for b in u.factors])
    return mat_scale8(m, u.spinor_normalizer())


def build_twist_element(order: int) -> SpinElement:
    """The shipped twisting elements of order 3 and 7 (order 1: empty word)."""
    e = basis_octonion

    def diff(i, j):
        return tuple(a - b for a, b in zip(e(i), e(j)))

    if order == 1:
        return SpinElement(())
    if order == 3:
        return SpinElement((diff(2, 3), diff(1, 2), diff(6, 7), diff(5, 6)))
    if order == 7:
        return SpinElement((diff(6, 7), diff(5, 6), diff(4, 5),
                            diff(3, 4), diff(2, 3), diff(1, 2)))
    raise ValueError(f"no shipped twist element of order {order}")


# expected basis permutations of the shipped twist actions on R^8
# (index i maps to REFERENCE_ACTIONS[order][i])
REFERENCE_ACTIONS = {
    1: {i: i for i in range(8)},
    3: {0: 0, 1: 3, 2: 1, 3: 2, 4: 4, 5: 7, 6: 5, 7: 6},
    7: {0: 0, 1: 7, 2: 1, 3: 2, 4: 3, 5: 4, 6: 5, 7: 6},
}


def permutation_matrix(perm: dict):
    """8x8 matrix sending e_i to e_{perm[i]}."""
    return tuple(tuple(Fraction(1 if perm[j] == i else 0) for j in range(8))
                 for i in range(8))


def matrix_order(m, cap: int = 64) -> int:
    ident = mat_identity8()
    p = m
    for k in range(1, cap + 1):
        if p == ident:
            return k
        p = mat_mul8(p, m)
    raise OrderExceedsCap(f"order exceeds cap {cap}")


def _char_poly(m) -> list[Fraction]:
    """Characteristic polynomial coefficients [1, -e1, e2, ...] of x^8-...

    Computed from power traces via the Newton identities.
    """
    p = []
    mk = m
    for _ in range(8):
        p.append(mat_trace8(mk))
        mk = mat_mul8(mk, m)
    e = [Fraction(1)]
    for k in range(1, 9):
        s = Fraction(0)
        for i in range(1, k + 1):
            s += (-1) ** (i - 1) * e[k - i] * p[i - 1]
        e.append(s / k)
    return [(-1) ** k * e[k] for k in range(9)]  # coeffs of x^8..x^0


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def cycle_shape(m, cap: int = 64) -> CycleShape:
    """Recover the cycle shape of a finite-order orthogonal 8x8 matrix.

    Inverts tr(M^d) = sum_{a|d} a*b_a over the divisors of the order, then
    validates against the characteristic polynomial.
    """
    order = matrix_order(m, cap)
    traces = {}
    mk = m
    for d in range(1, order + 1):
        if order % d == 0:
            traces[d] = mat_trace8(mk)
        mk = mat_mul8(mk, m)
    b = {}
    for a in divisors(order):
        s = sum(mobius(a // d) * traces[d] for d in divisors(a))
        ba = s / a
        if ba.denominator != 1 or ba < 0:
            raise NotProductOfCyclotomicBlocks(
                f"trace inversion gives non-integral multiplicity at {a}")
        if ba:
            b[a] = int(ba)
    shape = CycleShape(tuple(sorted(b.items())))
    # validate: char poly must equal prod (x^a - 1)^{b_a}
    target = [Fraction(1)]
    for a, ba in shape.cycles:
        block = [Fraction(1)] + [Fraction(0)] * (a - 1) + [Fraction(-1)]
        for _ in range(ba):
            target = _poly_mul(target, block)
    if target != _char_poly(m) or shape.weight != 8:
        raise NotProductOfCyclotomicBlocks(
            "characteristic polynomial is not a product of x^a - 1 blocks")
    return shape


def verify_triality(u: SpinElement, samples=()) -> bool:
    """Exact triality check on all 64 basis pairs plus extra sample pairs."""
    rv, rl, rr = rho_V(u), rho_L(u), rho_R(u)
    pairs = [(basis_octonion(i), basis_octonion(j))
             for i in range(8) for j in range(8)]
    pairs.extend(samples)
    for a, b in pairs:
        lhs = mat_vec8(rv, oct_mul(a, b))
        rhs = oct_mul(mat_vec8(rl, a), mat_vec8(rr, b))
        if lhs != rhs:
            return False
    return True
