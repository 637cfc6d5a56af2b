"""Enumeration of torsor points under the lifted height conditions.

The height conditions |x_i| <= B pull back to exact integer inequalities on
the torsor coordinates, so the whole counter runs on integer arithmetic:

    xi^LAMBDA <= B                  (the x2 bound)
    |tau1| * xi^X3_EXPONENTS <= B   (the x3 bound)
    |tau2| * xi^X0_EXPONENTS <= B   (the x0 bound)
    |tauL| <= B                     (the x1 bound; tauL is solved for)

Two inner strategies share the same xi/tau1 nest: a plain scan over tau2
(``count_torsor``), and a congruence-class walk that solves
tau2^2 * xi2 = -tau1^3 * xi1^2 * xi3 modulo xiL^3 * xi4^2 * xi5 with modular
square roots and steps only through admissible residues
(``count_torsor_fast``).  Both must agree exactly; the brute surface scan is
the independent oracle for both.

Work may be partitioned into ``parts`` slices by the residue class of xi1,
the innermost and longest loop; summing slice counts reproduces the full
count, so parallel runs are deterministic.
"""

import math
import time
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Iterator

from .arith import _sqrt_mod_factored, factorize
from .records import CountReport
from .surface import RationalPoint
from .torsor import (
    FL_EXPONENTS,
    LAMBDA,
    T1_SCHEME,
    TAU_NAMES,
    X0_EXPONENTS,
    X3_EXPONENTS,
    XI_NAMES,
    CoprimalityScheme,
    TorsorPoint,
)

__all__ = [
    "HeightBounds",
    "CountReport",
    "count_torsor",
    "count_torsor_fast",
    "enumerate_points",
    "enumerate_torsor_points",
    "counts_upto",
]

# Loop nest order: largest lambda exponent outermost, xi1 innermost.
_LOOP_ORDER = (6, 5, 4, 3, 2, 1, 0)  # indices into XI_NAMES / LAMBDA


@dataclass(frozen=True)
class HeightBounds:
    """Exact integer height data attached to one xi-tuple.

    The float forms X0, X1, X2 are provided for inspection and for the
    density computation; all counting decisions use the integer fields.
    """

    B: int
    xi: tuple

    @property
    def x2(self) -> int:
        return _mono(self.xi, LAMBDA)

    @property
    def x0_unit(self) -> int:
        return _mono(self.xi, X0_EXPONENTS)

    @property
    def x3_unit(self) -> int:
        return _mono(self.xi, X3_EXPONENTS)

    @property
    def f_ell(self) -> int:
        return _mono(self.xi, FL_EXPONENTS)

    def admissible(self) -> bool:
        return self.x2 <= self.B

    def tau1_max(self) -> int:
        return self.B // self.x3_unit

    def tau2_max(self) -> int:
        return self.B // self.x0_unit

    def X0(self) -> float:
        return (self.x2 / self.B) ** (1.0 / 6.0)

    def X1(self) -> float:
        xi1, _, xi3, xiL, xi4, xi5, _ = self.xi
        return (self.B * xiL**3 * xi4**2 * xi5 / (xi1**2 * xi3)) ** (1.0 / 3.0)

    def X2(self) -> float:
        _, xi2, _, xiL, xi4, xi5, _ = self.xi
        return (self.B * xiL**3 * xi4**2 * xi5 / xi2) ** 0.5


def _mono(xi, exps):
    out = 1
    for v, e in zip(xi, exps):
        if e:
            out *= v**e
    return out


def _squarefree_table(limit):
    flags = bytearray([1]) * (limit + 1)
    d = 2
    while d * d <= limit:
        flags[d * d :: d * d] = bytearray(len(range(d * d, limit + 1, d * d)))
        d += 1
    return flags


def _scheme_tables(scheme):
    """Precompute per-level filters for the xi nest and tau partner sets."""
    for a, b in scheme.pairs:
        if a in TAU_NAMES and b in TAU_NAMES:
            raise NotImplementedError("tau-tau coprimality is not supported")
    if any(name in TAU_NAMES for name in scheme.squarefree):
        raise NotImplementedError("squarefree taus are not supported")
    sf = [XI_NAMES[i] in scheme.squarefree for i in _LOOP_ORDER]
    earlier = []
    for pos, i in enumerate(_LOOP_ORDER):
        checks = []
        for prev in range(pos):
            j = _LOOP_ORDER[prev]
            if scheme.requires_coprime(XI_NAMES[i], XI_NAMES[j]):
                checks.append(prev)
        earlier.append(tuple(checks))
    tau_partners = []
    for tau in TAU_NAMES:
        idxs = tuple(
            XI_NAMES.index(n) for n in scheme.coprime_partners(tau) if n in XI_NAMES
        )
        tau_partners.append(idxs)
    return sf, earlier, tau_partners


def _xi_tuples(B, scheme, parts, part):
    """Yield admissible xi-tuples (canonical order) with xi^LAMBDA <= B.

    Applies the xi-part of the scheme incrementally; slices the xi1 range
    by residue class when parts > 1.
    """
    sf, earlier, _ = _scheme_tables(scheme)
    sqfree = _squarefree_table(math.isqrt(B) + 1)
    exps = tuple(LAMBDA[i] for i in _LOOP_ORDER)
    vals = [1] * 7  # in loop order
    gcd = math.gcd

    def rec(level, mono):
        if level == 7:
            yield (vals[6], vals[5], vals[4], vals[3], vals[2], vals[1], vals[0])
            return
        e = exps[level]
        checks = earlier[level]
        squarefree_needed = sf[level]
        v = 1
        while True:
            m = mono * v**e
            if m > B:
                break
            if (
                (not squarefree_needed or sqfree[v])
                and all(gcd(v, vals[j]) == 1 for j in checks)
                and (level != 6 or parts == 1 or v % parts == part)
            ):
                vals[level] = v
                yield from rec(level + 1, m)
            v += 1

    if B >= 1:
        yield from rec(0, 1)


def _solutions(B, scheme, fast, parts, part):
    """Yield (xi, tau1, tau2, tauL, x2, x0_unit, x3_unit) for all solutions."""
    _, _, tau_partners = _scheme_tables(scheme)
    gcd = math.gcd
    isqrt = math.isqrt
    for xi in _xi_tuples(B, scheme, parts, part):
        xi1, xi2, xi3, xiL, xi4, xi5, xi6 = xi
        x2 = _mono(xi, LAMBDA)
        m0 = _mono(xi, X0_EXPONENTS)
        m3 = _mono(xi, X3_EXPONENTS)
        fl = xiL**3 * xi4**2 * xi5
        f1 = xi1 * xi1 * xi3
        c1 = _mono_over(xi, tau_partners[0])
        c2 = _mono_over(xi, tau_partners[1])
        cl = _mono_over(xi, tau_partners[2])
        t1max = B // m3
        t2max = B // m0
        bfl = B * fl
        if fast:
            fl_factors = factorize(fl) if fl > 1 else []
            inv2 = pow(xi2, -1, fl)
            root_cache = {}

            def classes(t1):
                # tau2 window from |tauL| <= B, i.e. |tau2^2*xi2 + A| <= B*fl,
                # intersected with |tau2| <= t2max; empty-forever sentinel when
                # the lower edge passes t2max (monotone in |t1|).
                A = t1 * t1 * t1 * f1
                hi_num = bfl - A
                if hi_num < 0:
                    return None, None  # stays negative for all larger t1
                lo_num = -bfl - A
                if lo_num > 0:
                    lo_sq = -((-lo_num) // xi2)  # ceil(lo_num / xi2)
                    lo = isqrt(lo_sq - 1) + 1
                else:
                    lo = 0
                if lo > t2max:
                    return None, None  # window above the x0 bound for good
                hi = min(t2max, isqrt(hi_num // xi2))
                if lo > hi:
                    return A, ()
                target = (-A * inv2) % fl
                roots = root_cache.get(target)
                if roots is None:
                    roots = _sqrt_mod_factored(target, fl, fl_factors)
                    root_cache[target] = roots
                if not roots:
                    return A, ()
                if lo == 0:
                    ivs = ((-hi, hi),)
                else:
                    ivs = ((-hi, -lo), (lo, hi))
                return A, tuple((r, iv) for r in roots for iv in ivs)

            for run in (range(0, t1max + 1), range(-1, -t1max - 1, -1)):
                for t1 in run:
                    if gcd(t1, c1) != 1:
                        continue
                    A, work = classes(t1)
                    if work is None:
                        break
                    for r, (a_lo, a_hi) in work:
                        start = a_lo + ((r - a_lo) % fl)
                        for t2 in range(start, a_hi + 1, fl):
                            tl = -((t2 * t2 * xi2 + A) // fl)
                            if gcd(t2, c2) == 1 and gcd(tl, cl) == 1:
                                yield (xi, t1, t2, tl, x2, m0, m3)
        else:
            for t1 in range(-t1max, t1max + 1):
                if gcd(t1, c1) != 1:
                    continue
                A = t1 * t1 * t1 * f1
                for t2 in range(-t2max, t2max + 1):
                    num = t2 * t2 * xi2 + A
                    tl, rem = divmod(num, fl)
                    if rem:
                        continue
                    tl = -tl
                    if tl < -B or tl > B:
                        continue
                    if gcd(t2, c2) == 1 and gcd(tl, cl) == 1:
                        yield (xi, t1, t2, tl, x2, m0, m3)


def _mono_over(xi, idxs):
    out = 1
    for i in idxs:
        out *= xi[i]
    return out


def _count_part(args):
    B, fast, parts, part, scheme = args
    return sum(1 for _ in _solutions(B, scheme, fast, parts, part))


def _count(B, fast, threads, scheme):
    if B < 0:
        raise ValueError("height bound must be non-negative")
    threads = max(1, int(threads))
    if threads == 1:
        return _count_part((B, fast, 1, 0, scheme)), 1
    jobs = [(B, fast, threads, p, scheme) for p in range(threads)]
    with Pool(threads) as pool:
        partial = pool.map(_count_part, jobs)
    return sum(partial), threads


def count_torsor(B: int, threads: int = 1, scheme: CoprimalityScheme = T1_SCHEME) -> CountReport:
    """Exact N(B) by torsor enumeration with a scanned tau2 loop."""
    t0 = time.perf_counter()
    n, parts = _count(B, False, threads, scheme)
    return CountReport(B, n, "torsor", time.perf_counter() - t0, parts)


def count_torsor_fast(B: int, threads: int = 1, scheme: CoprimalityScheme = T1_SCHEME) -> CountReport:
    """Exact N(B) stepping tau2 through admissible congruence classes."""
    t0 = time.perf_counter()
    n, parts = _count(B, True, threads, scheme)
    return CountReport(B, n, "fast", time.perf_counter() - t0, parts)


def enumerate_torsor_points(
    B: int,
    scheme: CoprimalityScheme = T1_SCHEME,
    fast: bool = True,
    parts: int = 1,
    part: int = 0,
) -> Iterator[TorsorPoint]:
    """All torsor points meeting the scheme and height conditions at B."""
    for xi, t1, t2, tl, _, _, _ in _solutions(B, scheme, fast, parts, part):
        yield TorsorPoint(*xi, t1, t2, tl)


def enumerate_points(
    B: int,
    scheme: CoprimalityScheme = T1_SCHEME,
    fast: bool = True,
    parts: int = 1,
    part: int = 0,
) -> Iterator[RationalPoint]:
    """Surface points of height <= B as psi-images, each exactly once."""
    for xi, t1, t2, tl, x2, m0, m3 in _solutions(B, scheme, fast, parts, part):
        yield RationalPoint(m0 * t2, tl, x2, m3 * t1)


def counts_upto(Bmax: int, fast: bool = True, scheme: CoprimalityScheme = T1_SCHEME) -> list[int]:
    """N(B) for every B in [0, Bmax] from a single enumeration at Bmax."""
    hist = [0] * (Bmax + 1)
    for _, t1, t2, tl, x2, m0, m3 in _solutions(Bmax, scheme, fast, 1, 0):
        h = max(x2, m0 * abs(t2), m3 * abs(t1), abs(tl))
        hist[h] += 1
    out = [0] * (Bmax + 1)
    acc = 0
    for b in range(Bmax + 1):
        acc += hist[b]
        out[b] = acc
    return out
