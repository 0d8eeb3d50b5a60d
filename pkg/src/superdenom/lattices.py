"""Exact integral-lattice machinery.

Definite lattices live in Euclidean R^n and are given by a rational basis
(rows) with integer Gram matrix.  The hyperbolic plane II_{1,1} is fixed once
and for all with Gram [[0,-1],[-1,0]] and positive cone {m >= 0, n >= 0};
Lorentzian points are handled by LorentzianLattice below without an explicit
ambient Lorentzian space.

All enumeration is exact-rational (Fincke-Pohst with rational interval
bounds) and deterministic (lexicographic coordinate order).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .arith import floor_sqrt
from .intlinalg import (det, hnf, left_kernel_basis, mat_inv, mat_mul,
                        mat_vec, snf_invariants, transpose)
from .series import QSeries


class SingularGram(ArithmeticError):
    """Dual of a degenerate lattice requested."""


class SearchExhausted(RuntimeError):
    """A bounded search failed to find a required vector."""


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


class IntegralLattice:
    """A lattice with rational basis rows in Euclidean ambient space."""

    def __init__(self, basis, gram=None):
        self.basis = tuple(tuple(Fraction(x) for x in row) for row in basis)
        self.rank = len(self.basis)
        self.ambient_dim = len(self.basis[0]) if self.rank else 0
        if gram is None:
            gram = [[_dot(u, v) for v in self.basis] for u in self.basis]
        self.gram = tuple(tuple(Fraction(x) for x in row) for row in gram)
        for i in range(self.rank):
            for j in range(self.rank):
                if self.gram[i][j] != _dot(self.basis[i], self.basis[j]):
                    raise ValueError("gram does not match the basis")

    # -- basic invariants ------------------------------------------------

    def det(self) -> Fraction:
        return det([list(r) for r in self.gram]) if self.rank else Fraction(1)

    def is_even(self) -> bool:
        return all(g.denominator == 1 and g.numerator % 2 == 0
                   for g in (self.gram[i][i] for i in range(self.rank)))

    def gram_int(self):
        if any(x.denominator != 1 for row in self.gram for x in row):
            raise ValueError("gram is not integral")
        return [[int(x) for x in row] for row in self.gram]

    def gram_inv(self):
        if self.rank == 0:
            return []
        g = det([list(r) for r in self.gram])
        if g == 0:
            raise SingularGram("degenerate Gram matrix")
        return mat_inv([list(r) for r in self.gram])

    # -- coordinates -----------------------------------------------------

    def vector(self, coords):
        """Ambient vector of integer/rational basis coordinates."""
        v = [Fraction(0)] * self.ambient_dim
        for c, row in zip(coords, self.basis):
            if c:
                for i, x in enumerate(row):
                    v[i] += c * x
        return tuple(v)

    def coords_of(self, v):
        """Basis coordinates of an ambient vector in the span (exact)."""
        rhs = [_dot(row, v) for row in self.basis]
        c = mat_vec(self.gram_inv(), rhs)
        if self.vector(c) != tuple(Fraction(x) for x in v):
            raise ValueError("vector is not in the span of the lattice")
        return tuple(c)

    def norm_of_coords(self, coords):
        g = self.gram
        n = Fraction(0)
        for i, ci in enumerate(coords):
            if ci:
                for j, cj in enumerate(coords):
                    if cj:
                        n += ci * cj * g[i][j]
        return n

    # -- derived lattices ------------------------------------------------

    def dual(self) -> "IntegralLattice":
        """Dual lattice; its Gram is the inverse Gram."""
        if self.rank == 0:
            return IntegralLattice(())
        gi = self.gram_inv()
        dual_basis = mat_mul(gi, [list(r) for r in self.basis])
        return IntegralLattice(dual_basis, gi)

    def level(self) -> int:
        """Least N with N*beta^2 in 2Z for every dual vector beta."""
        if self.rank == 0:
            return 1
        gi = self.gram_inv()
        n = 1
        for i in range(self.rank):
            for j in range(self.rank):
                e = gi[i][j] / 2 if i == j else gi[i][j]
                n = n * e.denominator // gcd(n, e.denominator)
        return n

    def discriminant_group(self) -> "DiscriminantGroup":
        g = self.gram_int()
        invs = [d for d in snf_invariants(g) if d != 1]
        return DiscriminantGroup(self, tuple(invs))


@dataclass
class DiscriminantGroup:
    """The quotient L*/L with invariant factors and coset representatives."""

    lattice: IntegralLattice
    invariants: tuple[int, ...]

    def __post_init__(self):
        self.order = 1
        for d in self.invariants:
            self.order *= d
        g = self.lattice.gram_int() if self.lattice.rank else []
        self._hnf = hnf(g) if g else []

    def coset_label(self, dual_coords) -> tuple[int, ...]:
        """Canonical representative of a dual vector modulo the lattice.

        Dual coordinates v (integers in the dual basis) are reduced modulo
        the row span of the Gram matrix, which is the image of L in dual
        coordinates.
        """
        v = [int(x) for x in dual_coords]
        for row in self._hnf:
            piv = next(i for i, x in enumerate(row) if x)
            q = v[piv] // row[piv]
            if q:
                for i in range(len(v)):
                    v[i] -= q * row[i]
        return tuple(v)

    def coset_representatives(self):
        """All coset labels with a minimal-norm dual vector for each.

        Returned sorted by (norm, label); found by enumerating dual vectors
        of increasing norm.
        """
        if self.lattice.rank == 0 or self.order == 1:
            return {(0,) * self.lattice.rank: (0,) * self.lattice.rank} \
                if self.lattice.rank else {(): ()}
        dual = self.lattice.dual()
        found: dict[tuple, tuple] = {}
        bound = 2
        for _ in range(20):
            for coords in enumerate_coset(dual, None, Fraction(bound)):
                lab = self.coset_label(coords)
                if lab not in found:
                    found[lab] = coords
            if len(found) == self.order:
                return found
            bound *= 2
        raise SearchExhausted("could not reach every discriminant coset")


# ----------------------------------------------------------------------
# enumeration

def _fp_decompose(gram):
    """Quadratic-form completion q(x) = sum_i d_i (x_i + sum_{j>i} c_ij x_j)^2."""
    n = len(gram)
    q = [[Fraction(x) for x in row] for row in gram]
    for i in range(n):
        if q[i][i] <= 0:
            raise ValueError("Gram matrix is not positive definite")
        for j in range(i + 1, n):
            t = q[i][j] / q[i][i]
            for k in range(j, n):
                q[j][k] -= t * q[i][k]
        for j in range(i + 1, n):
            q[i][j] /= q[i][i]
    d = [q[i][i] for i in range(n)]
    c = [[q[i][j] for j in range(n)] for i in range(n)]
    return d, c


def _enumerate_scaled(lattice: IntegralLattice, s, max_norm):
    """All (coords, (x+s)^2 as Fraction) with (x + s)^2 <= max_norm.

    Everything is rescaled to integers once so the recursion runs on plain
    ints: with M a common denominator of the completion data, the offset
    centers live on the grid (1/M^2)Z and the partial norms are tracked as
    q * T for a fixed global scale T.
    """
    n = lattice.rank
    d, c = _fp_decompose(lattice.gram)
    M = 1
    for f in list(s) + [c[i][j] for i in range(n) for j in range(i + 1, n)]:
        M = M * f.denominator // gcd(M, f.denominator)
    dden = 1
    for f in d:
        dden = dden * f.denominator // gcd(dden, f.denominator)
    dden = dden * max_norm.denominator // gcd(dden, max_norm.denominator)
    T = dden * M ** 4
    m2, m4 = M * M, M ** 4
    # integer data: sN = M*s, cN = M*c, dN = d*T/M^4
    sN = [int(f * M) for f in s]
    cN = [[int(c[i][j] * M) for j in range(n)] for i in range(n)]
    dN = [int(d[i] * dden) for i in range(n)]
    R0 = int(max_norm * T)
    out = []
    x = [0] * n
    y = [0] * n  # y[j] = M*(x[j] + s[j])

    def recurse(i, remaining):
        if i < 0:
            out.append((tuple(x), Fraction(R0 - remaining, T)))
            return
        ci = cN[i]
        centerN = M * sN[i] + sum(ci[j] * y[j] for j in range(i + 1, n))
        di = dN[i]
        r = floor_sqrt(remaining // (di * m4))
        lo = -r - 1 + ((-centerN) // m2)    # -r - 1 - ceil(centerN/M^2)
        hi = r + 1 - centerN // m2
        base = m2 * lo + centerN
        for xi in range(lo, hi + 1):
            used = di * base * base
            if used <= remaining:
                x[i] = xi
                y[i] = M * xi + sN[i]
                recurse(i - 1, remaining - used)
            base += m2
        x[i] = 0

    recurse(n - 1, R0)
    return out


def enumerate_coset(lattice: IntegralLattice, shift, max_norm):
    """All integer coordinate vectors x with (x + s)^2 <= max_norm.

    shift is an ambient vector in the span of the lattice (or None for 0);
    the returned coordinates are relative to the lattice basis.  Order is
    deterministic: ascending lexicographic from the last coordinate.
    """
    max_norm = Fraction(max_norm)
    if max_norm < 0:
        return []
    n = lattice.rank
    if n == 0:
        return [()]
    s = [Fraction(0)] * n if shift is None else list(lattice.coords_of(shift))
    return sorted(coords for coords, _ in
                  _enumerate_scaled(lattice, s, max_norm))


def theta_coset(lattice: IntegralLattice, shift, prec) -> QSeries:
    """Theta series sum_v q^{v^2/2} over the translated lattice shift + L."""
    prec = Fraction(prec)
    if lattice.rank == 0:
        return QSeries.one(trunc=prec)
    counts: dict[Fraction, int] = {}
    s = [Fraction(0)] * lattice.rank if shift is None \
        else list(lattice.coords_of(shift))
    for _, norm in _enumerate_scaled(lattice, s, 2 * prec):
        e = norm / 2
        if e < prec:
            counts[e] = counts.get(e, 0) + 1
    return QSeries.from_terms(counts.items(), trunc=prec)


# ----------------------------------------------------------------------
# the E8 lattice in octonion coordinates

def e8_lattice() -> IntegralLattice:
    """E8 embedded in R^8: integer or all-half-integer points with even sum.

    The basis is the Hermite normal form of a natural generating set, so it
    is canonical for this embedding.
    """
    gens = []
    for i in range(7):
        row = [0] * 8
        row[i], row[i + 1] = 2, -2      # 2*(e_i - e_{i+1})
        gens.append(row)
    row = [0] * 8
    row[6] = row[7] = 2                 # 2*(e_6 + e_7)
    gens.append(row)
    gens.append([1] * 8)                # 2*(1/2, ..., 1/2)
    doubled = hnf(gens)
    basis = [[Fraction(x, 2) for x in row] for row in doubled]
    lat = IntegralLattice(basis)
    assert lat.det() == 1 and lat.is_even()
    return lat


def matrix_action_on(lattice: IntegralLattice, m):
    """Basis-coordinate matrix A of an ambient map: M b_k = sum_j A[j][k] b_j."""
    cols = []
    for b in lattice.basis:
        mb = tuple(sum(m[i][j] * b[j] for j in range(len(b)))
                   for i in range(len(m)))
        cols.append(lattice.coords_of(mb))
    return [[cols[k][j] for k in range(lattice.rank)]
            for j in range(lattice.rank)]


def preserves_lattice(lattice: IntegralLattice, m) -> bool:
    """True if the ambient map sends the lattice into itself bijectively."""
    try:
        a = matrix_action_on(lattice, m)
    except ValueError:
        return False
    if any(x.denominator != 1 for row in a for x in row):
        return False
    return abs(det(a)) == 1


def fixed_sublattice(m, lattice: IntegralLattice) -> IntegralLattice:
    """Primitive sublattice of vectors fixed by an ambient map preserving L."""
    a = matrix_action_on(lattice, m)
    k = [[int(a[i][j]) - (1 if i == j else 0) for j in range(lattice.rank)]
         for i in range(lattice.rank)]
    # right kernel of k = left kernel of its transpose
    kernel = left_kernel_basis([list(r) for r in zip(*k)])
    basis = [lattice.vector(c) for c in kernel]
    return IntegralLattice(basis)


def orthogonal_complement(sub: IntegralLattice,
                          container: IntegralLattice) -> IntegralLattice:
    """All container vectors orthogonal to the sublattice, as a lattice."""
    if sub.rank == 0:
        return container
    w = [[_dot(b, s) for s in sub.basis] for b in container.basis]
    wi = [[int(x) for x in row] for row in w]
    if any(Fraction(x).denominator != 1 for row in w for x in row):
        raise ValueError("pairings must be integral")
    kernel = left_kernel_basis(wi)
    basis = [container.vector(c) for c in kernel]
    return IntegralLattice(basis)


def projection_coords(fixed: IntegralLattice, v) -> tuple:
    """Dual-basis coordinates of the orthogonal projection of v onto span(fixed).

    The i-th coordinate is the pairing of v with the i-th basis vector, so
    for v in a lattice containing `fixed` primitively these are integers.
    """
    return tuple(_dot(b, tuple(Fraction(x) for x in v)) for b in fixed.basis)


def build_coset_shift_table(fixed: IntegralLattice,
                            container: IntegralLattice,
                            disc: DiscriminantGroup):
    """For each coset of fixed*/fixed, a complement shift r-perp.

    Finds container vectors x with projection onto span(fixed) in the coset,
    and records x - proj(x); the result depends only on the coset.
    """
    dual = fixed.dual()
    table: dict[tuple, tuple] = {}
    bound = 2
    for _ in range(8):
        for coords in enumerate_coset(container, None, Fraction(bound)):
            x = container.vector(coords)
            p = projection_coords(fixed, x)
            if any(c.denominator != 1 for c in p):
                raise ValueError("projection has non-integral dual coordinates")
            lab = disc.coset_label(p)
            if lab not in table:
                proj = dual.vector(p)
                table[lab] = tuple(a - b for a, b in zip(x, proj))
        if len(table) == disc.order or (disc.order == 1 and table):
            return table
        bound *= 2
    raise SearchExhausted("projection did not reach every discriminant coset")


# ----------------------------------------------------------------------
# Lorentzian points over L = fixed + II_{1,1}

@dataclass(frozen=True, order=True)
class LorentzianPoint:
    """A point (r*; m, n) of L* = fixed* + II_{1,1}, r* in dual coordinates."""

    rcoords: tuple[int, ...]
    m: int
    n: int

    @property
    def height(self) -> int:
        return self.m + self.n

    def divide(self, t: int) -> "LorentzianPoint":
        if any(c % t for c in self.rcoords) or self.m % t or self.n % t:
            raise ValueError(f"point is not divisible by {t}")
        return LorentzianPoint(tuple(c // t for c in self.rcoords),
                               self.m // t, self.n // t)

    def multiply(self, k: int) -> "LorentzianPoint":
        return LorentzianPoint(tuple(c * k for c in self.rcoords),
                               self.m * k, self.n * k)


class LorentzianLattice:
    """L = fixed + II_{1,1} with its dual, cone and membership machinery."""

    def __init__(self, fixed: IntegralLattice):
        self.fixed = fixed
        self.dual = fixed.dual() if fixed.rank else fixed
        self.gram_int = fixed.gram_int()
        self.dual_gram = fixed.gram_inv() if fixed.rank else []
        self._norm_cache: dict[tuple[int, ...], Fraction] = {}

    def rstar_norm(self, rcoords) -> Fraction:
        key = tuple(rcoords)
        n = self._norm_cache.get(key)
        if n is None:
            g = self.dual_gram
            n = Fraction(0)
            for i, ci in enumerate(key):
                if ci:
                    for j, cj in enumerate(key):
                        if cj:
                            n += ci * cj * g[i][j]
            self._norm_cache[key] = n
        return n

    def norm(self, p: LorentzianPoint) -> Fraction:
        return self.rstar_norm(p.rcoords) - 2 * p.m * p.n

    def pairing_divisor(self, p: LorentzianPoint) -> int:
        g = 0
        for c in p.rcoords:
            g = gcd(g, c)
        return gcd(gcd(g, p.m), p.n)

    def in_lattice(self, p: LorentzianPoint) -> bool:
        """Membership of the definite part in the fixed lattice itself."""
        if not self.fixed.rank:
            return True
        w = mat_vec(self.dual_gram, [Fraction(c) for c in p.rcoords])
        return all(x.denominator == 1 for x in w)

    def lattice_coords(self, p: LorentzianPoint):
        """(fixed-basis coords of r, m, n) for a point of L."""
        w = mat_vec(self.dual_gram, [Fraction(c) for c in p.rcoords])
        if any(x.denominator != 1 for x in w):
            raise ValueError("point is not in L")
        return tuple(int(x) for x in w), p.m, p.n

    def in_n_dual(self, p: LorentzianPoint, n: int) -> bool:
        """Membership in N*L*."""
        return (all(c % n == 0 for c in p.rcoords)
                and p.m % n == 0 and p.n % n == 0)

    def in_n_lattice(self, p: LorentzianPoint, n: int) -> bool:
        """Membership in N*L."""
        return self.in_n_dual(p, n) and self.in_lattice(p.divide(n))

    # -- enumeration -----------------------------------------------------

    def _dual_vectors_by_norm(self, max_norm: Fraction):
        """Sorted list of (norm, coords) of dual vectors with norm <= bound."""
        out = []
        for coords in enumerate_coset(self.dual, None, max_norm):
            out.append((self.rstar_norm(coords), coords))
        out.sort()
        return out

    def positive_cone_enum(self, max_height: int):
        """All nonzero points (r*; m, n), m,n >= 0, m+n <= H, r*^2 <= 2mn.

        Deterministic order: by (height, m, coords).
        """
        if max_height < 1:
            return []
        max_mn = (max_height // 2) * ((max_height + 1) // 2)
        vecs = self._dual_vectors_by_norm(Fraction(2 * max_mn)) \
            if self.fixed.rank else [(Fraction(0), ())]
        out = []
        for h in range(1, max_height + 1):
            for m in range(h + 1):
                n = h - m
                cap = 2 * m * n
                for nrm, coords in vecs:
                    if nrm > cap:
                        break
                    out.append(LorentzianPoint(coords, m, n))
        return out

    def primitive_isotropic_enum(self, max_height: int):
        """Primitive norm-zero points of L^+ with height <= H.

        Returns a list of (point, max_multiple) with max_multiple the largest
        k such that k*height <= H.
        """
        out = []
        zero = (0,) * self.fixed.rank
        for p in [LorentzianPoint(zero, 1, 0), LorentzianPoint(zero, 0, 1)]:
            if max_height >= 1:
                out.append((p, max_height))
        for m in range(1, max_height):
            for n in range(1, max_height + 1 - m):
                target = Fraction(2 * m * n)
                if not self.fixed.rank:
                    continue
                for coords in enumerate_coset(self.fixed, None, target):
                    if self.fixed.norm_of_coords(coords) != target:
                        continue
                    g = 0
                    for c in coords:
                        g = gcd(g, c)
                    if gcd(gcd(g, m), n) != 1:
                        continue
                    p = projection_coords(self.fixed,
                                          self.fixed.vector(coords))
                    pt = LorentzianPoint(tuple(int(x) for x in p), m, n)
                    out.append((pt, max_height // (m + n)))
        out.sort(key=lambda t: (t[0].height, t[0].m, t[0].rcoords))
        return out
