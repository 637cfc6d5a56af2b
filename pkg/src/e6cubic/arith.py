"""Exact elementary number theory.

Factorization, the classical multiplicative functions, square roots modulo
arbitrary moduli, and exact interval congruence counts built on the sawtooth
function.  Everything in this module is exact: values are ``int`` or
``Fraction``, never floats, so the counting identities hold as equalities.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "is_prime",
    "factorize",
    "is_squarefree",
    "mobius",
    "omega_distinct",
    "phi_star",
    "eta",
    "eta_scan",
    "sqrt_mod",
    "psi_frac",
    "psi_tilde",
    "CongruenceCount",
    "count_congruence_interval",
]


def _small_primes(limit):
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return tuple(i for i, flag in enumerate(sieve) if flag)


_TRIAL_PRIMES = _small_primes(10_000)

# Witness set making Miller-Rabin deterministic for n < 3.3 * 10^24,
# far beyond the 64-bit widths this library needs.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test (Miller-Rabin with fixed witnesses)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n):
    """Find a nontrivial factor of composite odd n.  Deterministic restarts."""
    if n % 2 == 0:
        return 2
    for c in range(1, 1000):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")


def _factor_into(n, counts):
    if n == 1:
        return
    if is_prime(n):
        counts[n] = counts.get(n, 0) + 1
        return
    d = _brent_rho(n)
    _factor_into(d, counts)
    _factor_into(n // d, counts)


def factorize(n: int) -> list[tuple[int, int]]:
    """Factor ``abs(n)`` into (prime, exponent) pairs with primes ascending.

    Trial division handles the small primes; anything left is split with
    Brent's rho after a deterministic primality check.  Zero is rejected.
    """
    if n == 0:
        raise ValueError("0 has no prime factorization")
    n = abs(n)
    counts = {}
    for p in _TRIAL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            counts[p] = e
    if n > 1:
        _factor_into(n, counts)
    return sorted(counts.items())


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factorize(n))


def mobius(n: int) -> int:
    """Moebius function: (-1)^k on squarefree n with k prime factors, else 0."""
    if n < 1:
        raise ValueError("mobius is defined for n >= 1")
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def omega_distinct(n: int) -> int:
    """Number of distinct prime factors."""
    if n < 1:
        raise ValueError("omega is defined for n >= 1")
    return len(factorize(n))


def phi_star(n: int) -> Fraction:
    """phi(n)/n as an exact rational, i.e. the product of (1 - 1/p) over p | n."""
    if n < 1:
        raise ValueError("phi_star is defined for n >= 1")
    out = Fraction(1)
    for p, _ in factorize(n):
        out *= Fraction(p - 1, p)
    return out


# --- square roots modulo prime powers and composites ---------------------


def _tonelli_shanks(a, p):
    """Square roots of a modulo an odd prime p, for a not divisible by p."""
    if pow(a, (p - 1) // 2, p) != 1:
        return []
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return [r, p - r]
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    c = pow(z, q, p)
    r = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = s
    while t != 1:
        i, x = 0, t
        while x != 1:
            x = x * x % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return [r, p - r]


def _lift_odd_root(r, a, p, e):
    """Newton-lift r with r^2 = a (mod p) to a root modulo p^e (p odd)."""
    k = 1
    while k < e:
        k = min(2 * k, e)
        mod = p**k
        r = (r + (a % mod) * pow(r, -1, mod)) * pow(2, -1, mod) % mod
    return r


def _unit_roots_pow2(a, e):
    """Roots of x^2 = a (mod 2^e) for odd a."""
    if e == 1:
        return [1]
    if e == 2:
        return [1, 3] if a % 4 == 1 else []
    if a % 8 != 1:
        return []
    r = 1
    for k in range(3, e):
        if (r * r - a) % (1 << (k + 1)):
            r += 1 << (k - 1)
    q = 1 << e
    return sorted({r, q - r, (r + (q >> 1)) % q, (q - r + (q >> 1)) % q})


def _prime_power_roots(a, p, e):
    """All residues x modulo p^e with x^2 = a (mod p^e)."""
    q = p**e
    a %= q
    if a == 0:
        step = p ** ((e + 1) // 2)
        return list(range(0, q, step))
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    if v % 2:
        return []
    # x = p^(v/2) * u with u^2 = unit part of a modulo p^(e-v)
    if p == 2:
        unit = _unit_roots_pow2(a, e - v)
    else:
        unit = _tonelli_shanks(a % p, p)
        if unit:
            r = _lift_odd_root(unit[0], a, p, e - v)
            unit = sorted({r, p ** (e - v) - r})
    if not unit:
        return []
    half = v // 2
    shift = p ** (e - v)
    out = []
    for r in unit:
        for t in range(p ** (v - half)):
            out.append((p**half * (r + t * shift)) % q)
    return sorted(set(out))


def _sqrt_mod_factored(a, q, factors):
    roots = [0]
    mod = 1
    for p, e in factors:
        pe = p**e
        local = _prime_power_roots(a, p, e)
        if not local:
            return []
        inv = pow(mod % pe, -1, pe)
        combined = []
        for r0 in roots:
            for rp in local:
                combined.append(r0 + mod * (((rp - r0) * inv) % pe))
        roots = combined
        mod *= pe
    return sorted(roots)


def sqrt_mod(a: int, q: int) -> list[int]:
    """All residues x in [0, q) with x^2 = a (mod q).

    Works for any a (including a shared factor with q) by solving each prime
    power of q separately and recombining with the Chinese remainder theorem.
    """
    if q < 1:
        raise ValueError("modulus must be positive")
    if q == 1:
        return [0]
    return _sqrt_mod_factored(a % q, q, factorize(q))


def eta(a: int, q: int) -> int:
    """Number of n in [1, q] with n^2 = a (mod q)."""
    return len(sqrt_mod(a, q))


def eta_scan(a: int, q: int) -> int:
    """Reference implementation of :func:`eta` by exhaustive residue scan."""
    if q < 1:
        raise ValueError("modulus must be positive")
    a %= q
    return sum(1 for n in range(1, q + 1) if (n * n - a) % q == 0)


# --- sawtooth and interval congruence counting ----------------------------


def psi_frac(t) -> Fraction:
    """Sawtooth {t} - 1/2, exact on rationals."""
    t = Fraction(t)
    return t - (t.numerator // t.denominator) - Fraction(1, 2)


def psi_tilde(t) -> Fraction:
    """Sawtooth shifted up by 1 at integers; equals psi_frac elsewhere."""
    t = Fraction(t)
    val = psi_frac(t)
    if t.denominator == 1:
        val += 1
    return val


@dataclass(frozen=True)
class CongruenceCount:
    """Exact count of a residue class in an interval, with its decomposition.

    ``exact_count == main_term + remainder`` holds as an identity of rationals
    whenever the decomposition is present (it is omitted when gcd(a, q) > 1,
    where the decomposition lemma's hypothesis fails).
    """

    exact_count: int
    main_term: Fraction | None
    remainder: Fraction | None


def count_congruence_interval(b1, b2, a: int, q: int) -> CongruenceCount:
    """Count n in [b1, b2] with n = a (mod q); b1, b2 may be rationals.

    The count is always computed directly.  When gcd(a, q) = 1 the main
    term (b2 - b1)/q and the sawtooth remainder are attached and satisfy
    the exact identity above.
    """
    if q < 1:
        raise ValueError("modulus must be positive")
    b1, b2 = Fraction(b1), Fraction(b2)
    if b1 > b2:
        raise ValueError("empty interval: b1 > b2")
    lo = -((-b1.numerator) // b1.denominator)  # ceil(b1)
    hi = b2.numerator // b2.denominator  # floor(b2)
    first = lo + ((a - lo) % q)
    exact = max(0, (hi - first) // q + 1) if first <= hi else 0
    if math.gcd(a, q) != 1:
        return CongruenceCount(exact, None, None)
    main = (b2 - b1) / q
    rem = psi_tilde((b1 - a) / q) - psi_frac((b2 - a) / q)
    return CongruenceCount(exact, main, rem)
