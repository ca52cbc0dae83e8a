"""Orders and locally principal left ideals in the definite quaternion algebra:
level-p Eichler orders (and the maximal orders of trivial discriminant when
every residue degree above p is even), neighbor construction at an auxiliary
prime, ideal-class enumeration with a mass-formula termination certificate,
and unit-group weights."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .errors import BadPrime, LevelOneImpossible, MassMismatch, NotAnOrder
from .fields import (
    AlgebraicInteger,
    FieldDescriptor,
    PrimeIdeal,
    canonical_positive_associate,
    divides,
    enumerate_totally_positive,
    exact_div,
    field_gcd,
    is_associate,
    primes_above,
)
from .lattices import QuaternionLattice
from .linalg import residue_nullspace, residue_rowreduce
from .quaternions import QuaternionAlgebra, QuaternionElement, verify_ramification
from .shortvec import short_vectors


class Order:
    """A certified order: full lattice containing 1 and closed under multiplication."""

    def __init__(self, lattice: QuaternionLattice):
        self.lattice = lattice
        self.algebra = lattice.algebra
        if not lattice.contains(self.algebra.one):
            raise NotAnOrder("lattice does not contain 1")
        self._structure = None
        self._disc = None
        bs = lattice.basis()
        for x in bs:
            for y in bs:
                if not lattice.contains(x * y):
                    raise NotAnOrder("lattice is not closed under multiplication")

    def basis(self):
        return self.lattice.basis()

    def structure_constants(self):
        """coords of b_m * b_n in the order basis, as AlgebraicInteger 4-vectors."""
        if self._structure is None:
            bs = self.basis()
            self._structure = [
                [tuple(c.to_integer() for c in self.lattice.coordinates(x * y)) for y in bs]
                for x in bs
            ]
        return self._structure

    def reduced_discriminant(self) -> AlgebraicInteger:
        """Canonical totally positive d(O) with d(O)^2 = det Trd(b_i b_j) as ideals."""
        if self._disc is not None:
            return self._disc
        det = self.lattice.det_pairing()
        if not det.is_integral():
            raise NotAnOrder("pairing determinant is not integral")
        d = _ideal_sqrt(det.to_integer())
        if d is None:
            raise NotAnOrder("pairing determinant is not an ideal square")
        self._disc = d
        return d

    def __eq__(self, other):
        return isinstance(other, Order) and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def __repr__(self):
        return f"Order({self.lattice!r})"


def _ideal_sqrt(det: AlgebraicInteger) -> AlgebraicInteger | None:
    """Canonical totally positive s with (s)^2 = (det), if the ideal is a square."""
    fld = det.field
    if fld.degree == 1:
        n = abs(det.a)
        s = isqrt(n)
        return fld.integer(s) if s * s == n else None
    target = abs(det.norm())
    ns = isqrt(target)
    if ns * ns != target:
        return None
    bound = 2 * isqrt(ns) + 2
    while bound < 16 * (ns + 2):
        for s in enumerate_totally_positive(fld, bound)[1:]:
            if s.norm() == ns and is_associate(s * s, det):
                return s
        bound *= 2
    return None


@dataclass(frozen=True)
class LeftIdeal:
    """A locally principal left ideal of `order`, with its cached reduced norm."""

    lattice: QuaternionLattice
    order: Order
    norm: AlgebraicInteger

    def __repr__(self):
        return f"LeftIdeal(norm={self.norm!r}, {self.lattice!r})"


def unit_ideal(order: Order) -> LeftIdeal:
    return LeftIdeal(order.lattice, order, order.algebra.field.one)


def left_order(lat: QuaternionLattice) -> Order:
    return Order(lat.multiplier_lattice("left"))


def right_order(lat: QuaternionLattice) -> Order:
    return Order(lat.multiplier_lattice("right"))


# ---------------------------------------------------------------------------
# Reduced norms of ideals


_COEFF_SETS_1 = [(0, 1), (-1, 0, 1), (-2, -1, 0, 1, 2)]
_COEFF_SETS_2 = [
    ((0, 0), (1, 0), (0, 1), (1, 1)),
    ((0, 0), (1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (1, -1), (-1, 1)),
    tuple((a, b) for a in (-2, -1, 0, 1, 2) for b in (-2, -1, 0, 1, 2)),
]


def ideal_norm(lat: QuaternionLattice, order: "Order | None" = None) -> AlgebraicInteger:
    """Canonical totally positive generator of the ideal generated by all Nrd values.

    Accumulates a gcd of reduced norms over a small coefficient box; the
    4th-root of the Gram determinant ratio certifies completeness, so the
    box is enlarged until the certificate is met.
    """
    fld = lat.algebra.field
    det = lat.det_pairing()
    if order is None:
        order = right_order(lat)
    ratio = det / order.lattice.det_pairing()
    nval = abs(
        ratio.norm().numerator if fld.degree == 2 else ratio.coords()[0].numerator
    )
    dval = ratio.norm().denominator if fld.degree == 2 else ratio.coords()[0].denominator
    if dval != 1:
        raise ValueError("determinant ratio is not integral")
    t = isqrt(isqrt(nval))
    if t ** 4 != nval:
        raise ValueError("determinant ratio is not a fourth power")
    bs = lat.basis()
    sets = _COEFF_SETS_1 if fld.degree == 1 else _COEFF_SETS_2
    for coeffs in sets:
        g = fld.zero
        for combo in itertools.product(coeffs, repeat=4):
            if not any(c != 0 and c != (0, 0) for c in combo):
                continue
            x = None
            for c, b in zip(combo, bs):
                if fld.degree == 1:
                    if c == 0:
                        continue
                    term = b.scale(fld.element(c))
                else:
                    if c == (0, 0):
                        continue
                    term = b.scale(fld.element(c[0], c[1]))
                x = term if x is None else x + term
            nr = x.reduced_norm()
            if not nr.is_integral():
                raise ValueError("ideal is not integral enough for norm gcd")
            g = field_gcd(g, nr.to_integer())
            if abs(g.norm()) == t:
                return canonical_positive_associate(g)
    raise ValueError("norm gcd did not reach the determinant certificate")


# ---------------------------------------------------------------------------
# Residue algebra O / qO


class ResidueAlgebra:
    """O/qO as a 4-dimensional algebra over the residue field of q."""

    def __init__(self, order: Order, prime: PrimeIdeal):
        self.order = order
        self.prime = prime
        self.F = prime.residue_field()
        S = order.structure_constants()
        self.table = [
            [tuple(self.F.reduce(c) for c in S[m][n]) for n in range(4)] for m in range(4)
        ]
        one = order.lattice.coordinates(order.algebra.one)
        self.one = tuple(self.F.reduce(c.to_integer()) for c in one)
        self.zero = (self.F.zero,) * 4

    def mul(self, x, y):
        F = self.F
        out = [F.zero] * 4
        for m in range(4):
            if x[m] == F.zero:
                continue
            for n in range(4):
                if y[n] == F.zero:
                    continue
                c = F.mul(x[m], y[n])
                t = self.table[m][n]
                for r in range(4):
                    if t[r] != F.zero:
                        out[r] = F.add(out[r], F.mul(c, t[r]))
        return tuple(out)

    def elements(self):
        return itertools.product(self.F.elements(), repeat=4)

    def is_nilpotent(self, x) -> bool:
        y = self.mul(x, x)
        y = self.mul(y, y)
        return y == self.zero

    def lift(self, vec) -> QuaternionElement:
        """A lattice element reducing to the given coordinate vector."""
        fld = self.order.algebra.field
        out = None
        for c, b in zip(vec, self.order.basis()):
            if c == self.F.zero:
                continue
            term = b.scale(fld.element(c[0], c[1] if fld.degree == 2 else 0))
            out = term if out is None else out + term
        return out if out is not None else self.order.algebra.zero


def _radical_basis(A: ResidueAlgebra) -> list[tuple]:
    """Basis of the Jacobson radical of O/qO as coordinate vectors over F."""
    F = A.F
    if F.ell != 2:
        # odd characteristic: radical of the reduced-trace pairing
        bs = A.order.basis()
        M = []
        for x in bs:
            row = []
            for y in bs:
                tr = (x * y).reduced_trace()
                row.append(F.reduce(tr.to_integer()))
            M.append(row)
        return [tuple(v) for v in residue_nullspace(F, M)]
    # characteristic 2: brute force over the (tiny) algebra
    nil = [x for x in A.elements() if A.is_nilpotent(x)]
    rad = []
    for x in nil:
        if all(A.is_nilpotent(A.mul(x, y)) for y in A.elements()):
            rad.append(list(x))
    return [tuple(v) for v in residue_rowreduce(F, rad)] if rad else []


def _radical_enlarge(order: Order, prime: PrimeIdeal) -> Order | None:
    """Right order of (q*O + radical); enlarges any order that is not hereditary at q."""
    A = ResidueAlgebra(order, prime)
    rad = _radical_basis(A)
    if not rad:
        return None
    pi = prime.generator.to_element()
    gens = [b.scale(pi) for b in order.basis()] + [A.lift(v) for v in rad]
    J = QuaternionLattice.from_generators(order.algebra, gens)
    return Order(J.multiplier_lattice("right"))


def _idempotent_enlarge(order: Order, prime: PrimeIdeal) -> Order | None:
    """Left order of (radical + O*e) for an idempotent lift e.

    At a hereditary-but-not-maximal prime the radical move is stationary;
    the left order of this ideal steps from the local intersection of two
    maximal orders into one of them.
    """
    A = ResidueAlgebra(order, prime)
    idem = None
    for x in A.elements():
        if x == A.zero or x == A.one:
            continue
        if A.mul(x, x) == x:
            idem = x
            break
    if idem is None:
        return None
    rad = _radical_basis(A)
    pi = prime.generator.to_element()
    e = A.lift(idem)
    gens = [b.scale(pi) for b in order.basis()] + [A.lift(v) for v in rad] + [
        b * e for b in order.basis()
    ]
    P = QuaternionLattice.from_generators(order.algebra, gens)
    return Order(P.multiplier_lattice("left"))


def _saturate_at(order: Order, prime: PrimeIdeal, target_val: int) -> Order:
    """Enlarge the order at one prime until its discriminant valuation hits the target."""
    while True:
        disc = order.reduced_discriminant()
        val = prime.valuation(disc)
        if val <= target_val:
            if val < target_val:
                raise NotAnOrder(f"saturation overshot at {prime!r}")
            return order
        for move in (_radical_enlarge, _idempotent_enlarge):
            bigger = move(order, prime)
            if bigger is not None and prime.valuation(bigger.reduced_discriminant()) < val:
                order = bigger
                break
        else:
            raise NotAnOrder(f"saturation made no progress at {prime!r}")


_MAXIMAL_SEEDS = {
    # p -> (denominator, rows of integer coordinates w.r.t. (1, i, j, k))
    2: (2, [(2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 2, 0), (1, 1, 1, 1)]),
}


def _rational_maximal_rows(p: int) -> tuple[int, list[tuple[int, int, int, int]]]:
    """Denominator and basis rows of the classical maximal order of the rational algebra."""
    if p == 2:
        return _MAXIMAL_SEEDS[2]
    if p % 4 == 3:
        return (2, [(1, 0, 1, 0), (0, 1, 0, 1), (0, 0, 2, 0), (0, 0, 0, 2)])
    return (1, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])


@lru_cache(maxsize=None)
def standard_order(alg: QuaternionAlgebra) -> Order:
    """The reference Eichler order of reduced discriminant (p).

    Over Q this is a classical maximal order: seeded from the tabulated
    basis and, where the seed is the ordinary integer span, completed by
    radical saturation at the primes sharing the surplus discriminant.
    Over L it is the same order with scalars extended to O_L.
    """
    fld = alg.field
    den, rows = _rational_maximal_rows(alg.p)
    gens = [
        alg.element(*[fld.element(c, 0, den) for c in row])
        for row in rows
    ]
    order = Order(QuaternionLattice.from_generators(alg, gens))
    target = fld.integer(alg.p)
    disc = order.reduced_discriminant()
    surplus = exact_div(disc, target)
    ell = 2
    while not surplus.is_unit():
        for P in primes_above(fld, ell):
            tv = P.valuation(target)
            if P.valuation(disc) > tv:
                order = _saturate_at(order, P, tv)
        disc = order.reduced_discriminant()
        surplus = exact_div(disc, target)
        ell += 1
    if not is_associate(order.reduced_discriminant(), target):
        raise NotAnOrder(f"standard order certification failed for {alg!r}")
    return order


@lru_cache(maxsize=None)
def level_one_order(alg: QuaternionAlgebra) -> Order:
    """A maximal order of trivial reduced discriminant, when one exists.

    Exists exactly when every prime above p has even residue degree; built
    by saturating the standard order at those primes.
    """
    fld = alg.field
    plist = primes_above(fld, alg.p)
    if any(P.f % 2 == 1 for P in plist):
        raise LevelOneImpossible(
            f"some residue degree above {alg.p} is odd; the algebra is ramified there"
        )
    order = standard_order(alg)
    for P in plist:
        order = _saturate_at(order, P, 0)
    if not order.reduced_discriminant().is_unit():
        raise NotAnOrder("level-one saturation did not reach trivial discriminant")
    return order


# ---------------------------------------------------------------------------
# Unit weights and the mass formula


def unit_weight(order: Order) -> int:
    """#(O^x / O_L^x): half the number of reduced-norm-one elements.

    Every totally positive unit of O_L is a square under the narrow-class-
    number-one certificate, so scaling by units of O_L moves any unit of O
    onto one of reduced norm exactly 1.
    """
    fld = order.algebra.field
    zb = order.lattice.z_basis()
    gram = _trace_gram(order.lattice, fld.one)
    count = 0
    for vec in short_vectors(gram, 2 * fld.degree):
        x = _combination(zb, vec)
        if x.reduced_norm() == fld.one:
            count += 1
    return count


def _trace_gram(lat: QuaternionLattice, normalizer: AlgebraicInteger) -> list[list[int]]:
    """Integer Gram of (x, y) -> Tr_{L/Q}(Trd(x conj(y)) / n) on the Z-structure."""
    zb = lat.z_basis()
    rows = []
    for x in zb:
        row = []
        for y in zb:
            v = (x * y.conjugate()).reduced_trace() / normalizer.to_element()
            if not v.is_integral():
                raise ValueError("trace form is not integral for this normalizer")
            row.append(v.to_integer().trace())
        rows.append(row)
    return rows


def _combination(zb, vec) -> QuaternionElement:
    out = None
    for c, b in zip(vec, zb):
        if c == 0:
            continue
        term = b.scale(c)
        out = term if out is None else out + term
    return out


def mass_formula(order: Order) -> Fraction:
    """2^(1-g) * |zeta_L(-1)| * prod_{q | D}(Nq - 1) * prod_{q | N}(Nq + 1).

    D is the set of finite ramified primes of the algebra, N the remaining
    primes dividing the reduced discriminant; both must be squarefree and
    supported above p.
    """
    alg = order.algebra
    fld = alg.field
    disc = order.reduced_discriminant()
    ram = {P.generator.coords(): P for P in verify_ramification(alg)}
    mass = Fraction(1, 2 ** (fld.degree - 1)) * fld.zeta_minus_one_abs
    residual = disc
    for P in ram.values():
        if not divides(P.generator, residual):
            raise NotAnOrder("ramified prime does not divide the discriminant")
        residual = exact_div(residual, P.generator)
        mass *= P.norm - 1
    for P in primes_above(fld, alg.p):
        if P.generator.coords() in ram:
            continue
        if divides(P.generator, residual):
            residual = exact_div(residual, P.generator)
            mass *= P.norm + 1
    if not residual.is_unit():
        raise NotAnOrder(f"discriminant {disc!r} is not squarefree over p")
    return mass


# ---------------------------------------------------------------------------
# Neighbors, isomorphism testing, class enumeration


def _splitting_data(order: Order, prime: PrimeIdeal):
    """An isomorphism O/qO = M_2(F) described by the action on a rank-2 module."""
    A = ResidueAlgebra(order, prime)
    F = A.F
    idem = None
    for x in A.elements():
        if x == A.zero or x == A.one:
            continue
        if A.mul(x, x) == x:
            idem = x
            break
    if idem is None:
        raise BadPrime(f"O/{prime!r}O has no nontrivial idempotent; prime not split in the order")
    basis_imgs = [tuple(F.one if m == n else F.zero for n in range(4)) for m in range(4)]
    span = [list(A.mul(e, idem)) for e in basis_imgs]
    V = residue_rowreduce(F, span)
    if len(V) != 2:
        raise BadPrime("idempotent module has wrong rank")
    pivots = []
    for row in V:
        for c, val in enumerate(row):
            if val != F.zero:
                pivots.append(c)
                break

    def in_V(vec):
        # coordinates w.r.t. the reduced basis V using its pivot columns
        co = [vec[pivots[0]], vec[pivots[1]]]
        chk = [F.add(F.mul(co[0], V[0][c]), F.mul(co[1], V[1][c])) for c in range(4)]
        if list(chk) != list(vec):
            raise ArithmeticError("vector not in idempotent module")
        return co

    # phi[m] = 2x2 matrix of left multiplication by basis image e_m on V
    phi = []
    for e in basis_imgs:
        cols = []
        for v in V:
            cols.append(in_V(A.mul(e, tuple(v))))
        phi.append([[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]])
    return A, phi


def neighbors(ideal: LeftIdeal, prime: PrimeIdeal) -> list[LeftIdeal]:
    """The Nq+1 left subideals of q-times-larger norm, indexed by lines of the residue plane."""
    alg = ideal.order.algebra
    fld = alg.field
    if prime.residue_char == alg.p or alg.p % prime.residue_char == 0:
        raise BadPrime(f"{prime!r} divides the level")
    if fld.discriminant % prime.residue_char == 0:
        raise BadPrime(f"{prime!r} ramifies in the base field")
    o_r = right_order(ideal.lattice)
    A, phi = _splitting_data(o_r, prime)
    F = A.F
    lines = [(F.one, F.zero)] + [(c, F.one) for c in F.elements()]
    pi = prime.generator.to_element()
    out = []
    for (u, v) in lines:
        rows = []
        for r in range(2):
            rows.append([F.add(F.mul(phi[m][r][0], u), F.mul(phi[m][r][1], v)) for m in range(4)])
        null = residue_nullspace(F, rows)
        if len(null) != 2:
            raise ArithmeticError("line kernel has wrong dimension")
        gens = [b.scale(pi) for b in o_r.basis()] + [A.lift(tuple(w)) for w in null]
        P = QuaternionLattice.from_generators(alg, gens)
        J = ideal.lattice.multiply(P)
        norm = canonical_positive_associate(prime.generator * ideal.norm)
        out.append(LeftIdeal(J, ideal.order, norm))
    return out


def _hom_lattice_norm(K: QuaternionLattice, order_disc: AlgebraicInteger) -> AlgebraicInteger:
    """Reduced norm of a product lattice conj(J)*I, certified by determinants."""
    fld = K.algebra.field
    det = K.det_pairing()
    dn = det.norm() if fld.degree == 2 else det.coords()[0]
    # |N(det(K))| = N(norm)^4 * N(disc)^2
    nval = abs(dn.numerator)
    if dn.denominator != 1:
        raise ValueError("non-integral product lattice determinant")
    base = nval // (order_disc.norm() ** 2)
    if base * (order_disc.norm() ** 2) != nval:
        raise ValueError("determinant certificate failed")
    t = isqrt(isqrt(base))
    if t ** 4 != base:
        raise ValueError("determinant ratio is not a fourth power")
    return _gcd_norm_with_target(K, t)


def _gcd_norm_with_target(lat: QuaternionLattice, t: int) -> AlgebraicInteger:
    fld = lat.algebra.field
    bs = lat.basis()
    sets = _COEFF_SETS_1 if fld.degree == 1 else _COEFF_SETS_2
    for coeffs in sets:
        g = fld.zero
        for combo in itertools.product(coeffs, repeat=4):
            x = None
            for c, b in zip(combo, bs):
                if fld.degree == 1:
                    if c == 0:
                        continue
                    term = b.scale(fld.element(c))
                else:
                    if c == (0, 0):
                        continue
                    term = b.scale(fld.element(c[0], c[1]))
                x = term if x is None else x + term
            if x is None:
                continue
            nr = x.reduced_norm()
            if not nr.is_integral():
                raise ValueError("product lattice has non-integral norms")
            g = field_gcd(g, nr.to_integer())
            if abs(g.norm()) == t:
                return canonical_positive_associate(g)
    raise ValueError("norm gcd did not reach the determinant certificate")


def is_isomorphic(I: LeftIdeal, J: LeftIdeal, with_witness: bool = False):
    """I = J x test: search conj(J)*I for an element of minimal reduced norm.

    Scaling by units of O_L reduces the search to elements whose normalized
    norm is exactly 1, which live inside the smallest trace-form ball.
    """
    alg = I.order.algebra
    fld = alg.field
    K = J.lattice.conjugate().multiply(I.lattice)
    n = _hom_lattice_norm(K, I.order.reduced_discriminant())
    gram = _trace_gram(K, n)
    zb = K.z_basis()
    for vec in short_vectors(gram, 2 * fld.degree):
        x = _combination(zb, vec)
        nr = x.reduced_norm() / n.to_element()
        if nr == fld.one:
            return (True, x) if with_witness else True
    return (False, None) if with_witness else False


@dataclass
class ClassSet:
    """A complete list of left ideal class representatives with unit weights."""

    order: Order
    ideals: list[LeftIdeal]
    weights: list[int]
    aux_prime: PrimeIdeal
    mass: Fraction

    @property
    def size(self) -> int:
        return len(self.ideals)


def default_aux_prime(fld: FieldDescriptor, p: int) -> PrimeIdeal:
    """Smallest-norm prime of O_L away from p and the field discriminant."""
    best = None
    for ell in range(2, 100):
        if any(ell % f == 0 for f in range(2, ell)):
            continue
        if p % ell == 0 or fld.discriminant % ell == 0:
            continue
        for P in primes_above(fld, ell):
            if best is None or (P.norm, P.generator.key()) < (best.norm, best.generator.key()):
                best = P
        if best is not None and best.norm <= ell:
            break
    if best is None:
        raise BadPrime("no auxiliary prime available")
    return best


def ideal_classes(order: Order, aux_prime: PrimeIdeal | None = None) -> ClassSet:
    """Breadth-first enumeration over the neighbor graph, stopped by the mass identity."""
    alg = order.algebra
    fld = alg.field
    if aux_prime is None:
        aux_prime = default_aux_prime(fld, alg.p)
    target = mass_formula(order)
    start = unit_ideal(order)
    reps = [start]
    weights = [unit_weight(order)]
    mass = Fraction(1, weights[0])
    queue = deque([start])
    while mass < target and queue:
        current = queue.popleft()
        for J in neighbors(current, aux_prime):
            if any(is_isomorphic(J, R) for R in reps):
                continue
            reps.append(J)
            w = unit_weight(right_order(J.lattice))
            weights.append(w)
            mass += Fraction(1, w)
            queue.append(J)
            if mass > target:
                raise MassMismatch(f"mass overshot: {mass} > {target}")
    if mass != target:
        raise MassMismatch(f"neighbor graph exhausted at mass {mass}, expected {target}")
    return ClassSet(order, reps, weights, aux_prime, mass)
