"""Command-line driver: run the full pipeline for one (field, prime, mode)
configuration, emit a deterministic JSON report, and cache class lists."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .basis import classical_dimension, hilbert_consistency, span_rank
from .brandt import brandt, hecke_property_suite, cuspidal_eigenvalues, prime_power_index, ramanujan_ok
from .errors import QuathetaError
from .fields import AlgebraicInteger, field, primes_above
from .lattices import QuaternionLattice
from .orders import (
    ClassSet,
    LeftIdeal,
    Order,
    default_aux_prime,
    ideal_classes,
    level_one_order,
    mass_formula,
    standard_order,
)
from .quadmod import gram_and_level, hom_module
from .quaternions import construct, verify_ramification
from .theta import theta_matrix

SCHEMA_VERSION = 1


@dataclass
class RunConfig:
    d: int
    p: int
    mode: str = "level_p"
    bound: int = 20
    aux_prime: int | None = None
    hecke_primes: tuple[int, ...] = ()
    out: str | None = None
    cache_dir: str | None = None
    workers: int = 1
    use_cache: bool = True

    def validate(self) -> None:
        if self.mode not in ("level_p", "level_one"):
            raise ValueError(f"unknown mode {self.mode}")
        if self.bound < 0:
            raise ValueError("bound must be nonnegative")
        if self.workers < 1:
            raise ValueError("workers must be positive")


def _coords(x: AlgebraicInteger) -> list[int]:
    return [x.a, x.b]


def _cache_key(cfg: RunConfig, aux) -> str:
    raw = f"v{SCHEMA_VERSION}:d{cfg.d}:p{cfg.p}:{cfg.mode}:l{aux.generator.coords()}"
    return hashlib.sha256(raw.encode()).hexdigest()[:16]


def _serialize_classes(order: Order, classes: ClassSet) -> dict:
    """Ideal bases as integer matrices of coordinates in the order basis."""
    fld = order.algebra.field
    items = []
    for ideal, w in zip(classes.ideals, classes.weights):
        rows = []
        for b in ideal.lattice.basis():
            co = [c.to_integer() for c in order.lattice.coordinates(b)]
            if fld.degree == 1:
                rows.append([c.a for c in co])
            else:
                rows.append([v for c in co for v in (c.a, c.b)])
                wrow = [fld.omega * c for c in co]
                rows.append([v for c in wrow for v in (c.a, c.b)])
        items.append({"basis": rows, "weight": w, "norm": _coords(ideal.norm)})
    return {
        "schema": SCHEMA_VERSION,
        "aux_prime": _coords(classes.aux_prime.generator),
        "classes": items,
    }


def _deserialize_classes(order: Order, payload: dict, aux) -> ClassSet | None:
    fld = order.algebra.field
    try:
        if payload["schema"] != SCHEMA_VERSION:
            return None
        ideals, weights = [], []
        for item in payload["classes"]:
            rows = item["basis"]
            gens = []
            step = 2 if fld.degree == 2 else 1
            for r in rows[::step]:
                if fld.degree == 1:
                    coeffs = [fld.integer(c) for c in r]
                else:
                    coeffs = [fld.integer(r[2 * t], r[2 * t + 1]) for t in range(4)]
                q = None
                for c, b in zip(coeffs, order.basis()):
                    term = b.scale(c.to_element())
                    q = term if q is None else q + term
                gens.append(q)
            lat = QuaternionLattice.from_generators(order.algebra, gens)
            norm = fld.integer(*item["norm"])
            ideals.append(LeftIdeal(lat, order, norm))
            weights.append(int(item["weight"]))
        mass = sum(Fraction(1, w) for w in weights)
        if mass != mass_formula(order):
            return None
        return ClassSet(order, ideals, weights, aux, mass)
    except (KeyError, ValueError, TypeError, IndexError):
        return None


def cache_lookup(cfg: RunConfig, order: Order, aux) -> ClassSet | None:
    if not cfg.use_cache or not cfg.cache_dir:
        return None
    path = Path(cfg.cache_dir) / f"classes_{_cache_key(cfg, aux)}.json"
    if not path.exists():
        return None
    try:
        payload = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        print(f"warning: ignoring corrupted cache entry {path}", file=sys.stderr)
        return None
    got = _deserialize_classes(order, payload, aux)
    if got is None:
        print(f"warning: ignoring stale cache entry {path}", file=sys.stderr)
    return got


def cache_store(cfg: RunConfig, order: Order, classes: ClassSet) -> None:
    if not cfg.use_cache or not cfg.cache_dir:
        return
    path = Path(cfg.cache_dir)
    path.mkdir(parents=True, exist_ok=True)
    target = path / f"classes_{_cache_key(cfg, classes.aux_prime)}.json"
    target.write_text(json.dumps(_serialize_classes(order, classes), sort_keys=True))


def _default_hecke(fld, p: int, bound: int) -> list:
    """Primes of norm at most 25, coprime to p, whose index fits under the bound."""
    out = []
    for ell in (2, 3, 5, 7, 11, 13, 17, 19, 23):
        if ell == p or p % ell == 0:
            continue
        for P in primes_above(fld, ell):
            if P.norm <= 25 and prime_power_index(P, 1).trace() <= bound:
                out.append(P)
    out.sort(key=lambda P: (P.norm, P.generator.key()))
    return out


def run(cfg: RunConfig) -> dict:
    """Full pipeline; returns the report dict (deterministic body plus timings)."""
    cfg.validate()
    timings: dict[str, float] = {}
    t0 = time.monotonic()
    fld = field(cfg.d)
    alg = construct(fld, cfg.p)
    ram = verify_ramification(alg)
    timings["algebra"] = time.monotonic() - t0

    t0 = time.monotonic()
    order = standard_order(alg) if cfg.mode == "level_p" else level_one_order(alg)
    expected_level = fld.integer(cfg.p) if cfg.mode == "level_p" else fld.one
    mass = mass_formula(order)
    timings["order"] = time.monotonic() - t0

    t0 = time.monotonic()
    aux = (
        primes_above(fld, cfg.aux_prime)[0]
        if cfg.aux_prime is not None
        else default_aux_prime(fld, cfg.p)
    )
    classes = cache_lookup(cfg, order, aux)
    cached = classes is not None
    if classes is None:
        classes = ideal_classes(order, aux)
        cache_store(cfg, order, classes)
    timings["classes"] = time.monotonic() - t0

    t0 = time.monotonic()
    H = classes.size
    mods = [
        [hom_module(classes.ideals[i], classes.ideals[j], i, j) for j in range(H)]
        for i in range(H)
    ]
    levels = []
    for i in range(H):
        for j in range(H):
            det, level = gram_and_level(mods[i][j], expected_level)
            levels.append(
                {
                    "i": i,
                    "j": j,
                    "normalizer": _coords(mods[i][j].normalizer),
                    "gram": [[_coords(e) for e in row] for row in mods[i][j].gram],
                    "det": _coords(det),
                    "level": _coords(level),
                }
            )
    timings["hom_modules"] = time.monotonic() - t0

    t0 = time.monotonic()
    thetas = theta_matrix(classes, cfg.bound, workers=cfg.workers)
    timings["theta"] = time.monotonic() - t0

    t0 = time.monotonic()
    if cfg.hecke_primes:
        hecke = []
        for ell in cfg.hecke_primes:
            hecke.extend(primes_above(fld, ell))
        hecke = [P for P in hecke if prime_power_index(P, 1).trace() <= cfg.bound]
    else:
        hecke = _default_hecke(fld, cfg.p, cfg.bound)
    suite = hecke_property_suite(classes, thetas, hecke, cfg.bound)
    brandt_blocks = []
    for P in hecke:
        M = brandt(classes, thetas, prime_power_index(P, 1))
        evs = cuspidal_eigenvalues(classes, thetas, P) if H >= 2 else []
        brandt_blocks.append(
            {
                "prime": _coords(P.generator),
                "norm": P.norm,
                "matrix": [list(r) for r in M.entries],
                "charpoly": M.charpoly(),
                "cuspidal": [
                    {
                        "minpoly": list(e.minpoly),
                        "exact": str(e.exact) if e.exact is not None else None,
                        "interval": [str(e.interval[0]), str(e.interval[1])]
                        if e.interval
                        else None,
                        "ramanujan": ramanujan_ok(e, P),
                    }
                    for e in evs
                ],
            }
        )
    timings["brandt"] = time.monotonic() - t0

    t0 = time.monotonic()
    if fld.degree == 1:
        span = span_rank(thetas, classical_dimension(cfg.p) if cfg.mode == "level_p" else None)
        extra_checks = None
    else:
        span, extra_checks = hilbert_consistency(classes, thetas, hecke)
    timings["span"] = time.monotonic() - t0

    all_ok = suite.all_ok and span.verdict in ("pass", "rank-reported")
    if extra_checks is not None:
        all_ok = all_ok and extra_checks.all_ok

    report = {
        "schema": SCHEMA_VERSION,
        "config": {
            "field": cfg.d,
            "prime": cfg.p,
            "mode": cfg.mode,
            "bound": cfg.bound,
            "aux_prime": _coords(aux.generator),
            "hecke": [_coords(P.generator) for P in hecke],
        },
        "algebra": {
            "a": _coords(alg.a),
            "b": _coords(alg.b),
            "ramified": [_coords(P.generator) for P in ram],
        },
        "order": {
            "basis_denominator": order.lattice.den,
            "basis": [[_coords(e) for e in row] for row in order.lattice.mat],
            "reduced_discriminant": _coords(order.reduced_discriminant()),
        },
        "mass": str(mass),
        "classes": {
            "count": H,
            "weights": list(classes.weights),
            "norms": [_coords(I.norm) for I in classes.ideals],
        },
        "hom_modules": levels,
        "theta": {
            "bound": cfg.bound,
            "tables": [
                {
                    "i": i,
                    "j": j,
                    "coefficients": [
                        {"nu": _coords(nu), "count": c}
                        for nu, c in zip(thetas[i][j].nus, thetas[i][j].counts)
                    ],
                }
                for i in range(H)
                for j in range(H)
            ],
        },
        "brandt": brandt_blocks,
        "hecke_checks": suite.checks,
        "hilbert_checks": extra_checks.checks if extra_checks is not None else None,
        "span": {
            "class_count": span.class_count,
            "bound": span.bound,
            "rank": span.rank,
            "pivot_nus": [list(c) for c in span.pivot_nus],
            "expected_dimension": span.expected_dimension,
            "stable": span.stable,
            "verdict": span.verdict,
        },
        "all_checks_pass": all_ok,
        "timings": {"workers": cfg.workers, "classes_from_cache": cached, **timings},
    }
    return report


def report_body(report: dict) -> dict:
    """The deterministic part of a report (timings stripped)."""
    return {k: v for k, v in report.items() if k != "timings"}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="quatheta",
        description="Ideal classes, theta series, Brandt matrices and span checks "
        "for definite quaternion orders over Q and real quadratic fields.",
    )
    parser.add_argument("--field", type=int, required=True, help="field index d (1 for Q)")
    parser.add_argument("--prime", type=int, required=True, help="the prime p")
    parser.add_argument("--mode", choices=["level_p", "level_one"], default="level_p")
    parser.add_argument("--bound", type=int, required=True, help="trace bound for theta coefficients")
    parser.add_argument("--aux-prime", type=int, default=None, help="auxiliary neighbor prime")
    parser.add_argument("--hecke", type=str, default=None, help="comma-separated rational primes")
    parser.add_argument("--out", type=str, default=None, help="report output path (default stdout)")
    parser.add_argument("--cache", type=str, default=None, help="cache directory")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--no-cache", action="store_true")
    args = parser.parse_args(argv)

    hecke = tuple(int(t) for t in args.hecke.split(",")) if args.hecke else ()
    cfg = RunConfig(
        d=args.field,
        p=args.prime,
        mode=args.mode,
        bound=args.bound,
        aux_prime=args.aux_prime,
        hecke_primes=hecke,
        out=args.out,
        cache_dir=args.cache,
        workers=args.workers,
        use_cache=not args.no_cache,
    )
    try:
        report = run(cfg)
    except QuathetaError as exc:
        payload = {"error": exc.code, "message": str(exc)}
        print(json.dumps(payload, indent=2))
        return 1
    except ValueError as exc:
        print(json.dumps({"error": "InvalidConfig", "message": str(exc)}, indent=2))
        return 1
    text = json.dumps(report, indent=2)
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text)
    return 0 if report["all_checks_pass"] else 2


if __name__ == "__main__":
    sys.exit(main())
