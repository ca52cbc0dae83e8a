"""Representation numbers of the degree form: a_nu = #{x in M : Q(x) = nu},
computed by exact branch-and-bound over the integer trace form of rank 4g."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IncompatibleBounds
from .fields import AlgebraicInteger, enumerate_totally_positive
from .orders import ClassSet, _combination
from .quadmod import QuadraticModule, hom_module
from .shortvec import DEFAULT_CAP, short_vectors


def trace_form(mod: QuadraticModule) -> list[list[int]]:
    """Positive definite integer Gram of (x, y) -> Tr_{L/Q}(B(x, y)) on the Z-structure."""
    fld = mod.field
    g = fld.degree
    n = 4 * g
    rows = [[0] * n for _ in range(n)]
    w = fld.omega if g == 2 else None
    for r in range(4):
        for s in range(4):
            base = mod.gram[r][s]
            if g == 1:
                rows[r][s] = base.trace()
            else:
                rows[2 * r][2 * s] = base.trace()
                rows[2 * r][2 * s + 1] = (base * w).trace()
                rows[2 * r + 1][2 * s] = (w * base).trace()
                rows[2 * r + 1][2 * s + 1] = (w * base * w).trace()
    return rows


@dataclass(frozen=True)
class ThetaSeries:
    """Coefficient table nu -> a_nu over the canonical totally positive index set."""

    field: object
    i: int
    j: int
    bound: int
    nus: tuple[AlgebraicInteger, ...]
    counts: tuple[int, ...]

    def coefficient(self, nu: AlgebraicInteger) -> int:
        try:
            return self.counts[self.nus.index(nu)]
        except ValueError:
            raise IncompatibleBounds(f"{nu!r} is outside the computed index set") from None

    def vector(self) -> tuple[int, ...]:
        return self.counts

    def total(self) -> int:
        return sum(self.counts)


def theta(mod: QuadraticModule, bound: int, workers: int = 1, cap: int = DEFAULT_CAP) -> ThetaSeries:
    """Enumerate all lattice points with Tr(Q(x)) <= bound and bucket by the exact value of Q.

    The enumeration runs over the integer trace form with budget 2*bound
    (since the trace form evaluates Tr(2Q)); each enumerated representative
    stands for the pair {x, -x}.
    """
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    fld = mod.field
    gram = trace_form(mod)
    zb = mod.lattice.z_basis()
    buckets: dict[tuple[int, int], int] = {}
    for vec in short_vectors(gram, 2 * bound, workers=workers, cap=cap):
        x = _combination(zb, vec)
        nu = mod.value(x)
        buckets[nu.coords()] = buckets.get(nu.coords(), 0) + 2
    index = enumerate_totally_positive(fld, bound)
    allowed = {nu.coords() for nu in index}
    stray = [k for k in buckets if k not in allowed]
    if stray:
        raise ArithmeticError(f"enumerated values {stray} fall outside the index set")
    counts = [1 if nu.is_zero() else buckets.get(nu.coords(), 0) for nu in index]
    return ThetaSeries(fld, mod.i, mod.j, bound, tuple(index), tuple(counts))


def theta_matrix(classes: ClassSet, bound: int, workers: int = 1) -> list[list[ThetaSeries]]:
    """Theta series of every Hom module between the enumerated classes."""
    H = classes.size
    out = []
    for i in range(H):
        row = []
        for j in range(H):
            mod = hom_module(classes.ideals[i], classes.ideals[j], i, j)
            row.append(theta(mod, bound, workers=workers))
        out.append(row)
    return out


def theta_difference(t1: ThetaSeries, t2: ThetaSeries) -> tuple[int, ...]:
    """Coefficient-wise t1 - t2 in canonical index order; constant term cancels."""
    if t1.field is not t2.field or t1.bound != t2.bound:
        raise IncompatibleBounds("theta series differ in field or trace bound")
    return tuple(a - b for a, b in zip(t1.counts, t2.counts))
