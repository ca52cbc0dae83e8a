"""Hom modules between ideal classes, carried as O_L-lattices with the
normalized degree form Q(x) = Nrd(x) / n, where n is the canonical totally
positive generator of the reduced norm of the product lattice."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LevelMismatch
from .fields import (
    AlgebraicInteger,
    canonical_positive_associate,
    field_gcd,
    is_associate,
)
from .lattices import QuaternionLattice
from .linalg import det_generic, inverse_generic
from .orders import LeftIdeal, _hom_lattice_norm


@dataclass(frozen=True)
class QuadraticModule:
    """conj(I_j) * I_i with Q = Nrd/n: integral, primitive, totally positive definite."""

    lattice: QuaternionLattice
    normalizer: AlgebraicInteger
    i: int
    j: int
    gram: tuple  # 4x4 of AlgebraicInteger: B(b_r, b_s) = Trd(b_r conj(b_s)) / n

    @property
    def field(self):
        return self.lattice.algebra.field

    def value(self, x) -> AlgebraicInteger:
        """Q(x) = Nrd(x)/n for a lattice element."""
        return (x.reduced_norm() / self.normalizer.to_element()).to_integer()

    def bilinear(self, x, y) -> AlgebraicInteger:
        """B(x, y) = Q(x+y) - Q(x) - Q(y) = Trd(x conj(y)) / n."""
        return ((x * y.conjugate()).reduced_trace() / self.normalizer.to_element()).to_integer()


def hom_module(I_i: LeftIdeal, I_j: LeftIdeal, i: int = 0, j: int = 0) -> QuadraticModule:
    """The quadratic module of maps from class i to class j.

    The lattice is conj(I_j) * I_i; dividing Nrd by the canonical generator
    of its norm makes the form integral with unit content.
    """
    K = I_j.lattice.conjugate().multiply(I_i.lattice)
    n = _hom_lattice_norm(K, I_i.order.reduced_discriminant())
    bs = K.basis()
    ne = n.to_element()
    gram = []
    for x in bs:
        row = []
        for y in bs:
            v = (x * y.conjugate()).reduced_trace() / ne
            if not v.is_integral():
                raise ValueError("degree form is not integral: wrong normalizer")
            row.append(v.to_integer())
        gram.append(tuple(row))
    mod = QuadraticModule(K, n, i, j, tuple(gram))
    _check_unit_content(mod)
    return mod


def _check_unit_content(mod: QuadraticModule) -> None:
    """The ideal generated by all Q values must be trivial (primitivity)."""
    fld = mod.field
    g = fld.zero
    for r in range(4):
        d = mod.gram[r][r]
        half = fld.element(d.a, d.b, 2)  # Q(b_r) = B(b_r, b_r)/2
        if not half.is_integral():
            raise ValueError("diagonal of the degree form is odd")
        g = field_gcd(g, half.to_integer())
    for r in range(4):
        for s in range(r + 1, 4):
            g = field_gcd(g, mod.gram[r][s])
    if not g.is_unit():
        raise ValueError(f"degree form has nontrivial content ({g!r})")


def gram_and_level(mod: QuadraticModule, expected_level: AlgebraicInteger | None = None):
    """Determinant of the bilinear Gram and the lattice level.

    The level is the smallest ideal N such that N * gram^{-1} is integral
    with diagonal in 2*O_L (the classical level of an integral lattice).
    Raises LevelMismatch when an expected level is supplied and differs.
    """
    fld = mod.field
    zero, one = fld.element(0), fld.element(1)
    rows = [[e.to_element() for e in r] for r in mod.gram]
    det = det_generic(rows, zero).to_integer()
    inv = inverse_generic(rows, zero, one)
    level = fld.one
    for r in range(4):
        for s in range(4):
            e = inv[r][s] if r != s else inv[r][s] / fld.element(2)
            level = _lcm_denominator(level, e)
    level = canonical_positive_associate(level)
    if expected_level is not None and not is_associate(level, expected_level):
        raise LevelMismatch(f"lattice level {level!r}, expected ({expected_level!r})")
    return det, level


def _lcm_denominator(cur: AlgebraicInteger, e) -> AlgebraicInteger:
    """Smallest m (up to units) with (cur) | (m) and m * e integral."""
    fld = cur.field
    den = fld.integer(e.den)
    g = field_gcd(e.num, den)
    need = (den.to_element() / g.to_element()).to_integer()
    g2 = field_gcd(cur, need)
    return ((cur * need).to_element() / g2.to_element()).to_integer()
