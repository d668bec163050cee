"""Exact integer arithmetic helpers: primality, factorization, symbols,
modular square roots.

Everything here is deterministic and exact; no floating point touches a
decision.  Sizes are desk-scale (discriminants of 64-bit-entry Gram
matrices), so trial division backed by Miller-Rabin and Brent's rho is
plenty.
"""

import math

from .errors import ZeroInput

_SMALL_PRIME_LIMIT = 1000
_SMALL_PRIMES = []


def _init_small_primes():
    sieve = bytearray([1]) * _SMALL_PRIME_LIMIT
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(_SMALL_PRIME_LIMIT) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    _SMALL_PRIMES.extend(i for i in range(_SMALL_PRIME_LIMIT) if sieve[i])


_init_small_primes()

# Deterministic Miller-Rabin witness set, valid for n < 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic primality test (Miller-Rabin with fixed witnesses)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES[:25]:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n):
    # Brent's cycle-finding variant of Pollard rho; deterministic sweep over
    # increment constants, n odd composite and not a prime power of a small
    # prime.
    if n % 2 == 0:
        return 2
    for c in range(1, 50):
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
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")


def factorize(n):
    """Full factorization of n >= 1 as a dict {prime: exponent}."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    fac = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            fac[p] = fac.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            fac[m] = fac.get(m, 0) + 1
            continue
        root = math.isqrt(m)
        if root * root == m:
            stack.extend([root, root])
            continue
        d = _brent_rho(m)
        stack.extend([d, m // d])
    return dict(sorted(fac.items()))


def valuation(n, q):
    """Largest e with q^e dividing n (n nonzero)."""
    if n == 0:
        raise ZeroInput("valuation of 0 is infinite")
    n = abs(n)
    e = 0
    while n % q == 0:
        n //= q
        e += 1
    return e


def radical(d):
    """Squarefree kernel of d: product of primes dividing d to an odd power."""
    out = 1
    for p, e in factorize(d).items():
        if e % 2 == 1:
            out *= p
    return out


def radical_nonp(d, p):
    """radical(d) with the prime p removed if present."""
    r = radical(d)
    return r // p if r % p == 0 else r


def legendre(a, p):
    """Legendre symbol (a/p) for an odd prime p; 0 when p divides a."""
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def least_nonsquare(p):
    """Smallest positive quadratic nonresidue modulo the odd prime p."""
    for u in range(2, p):
        if legendre(u, p) == -1:
            return u
    raise ArithmeticError(f"no nonsquare mod {p}")


def sqrt_mod_prime(a, p):
    """Tonelli-Shanks square root of a modulo an odd prime p.

    Returns r with r*r == a mod p, or None when a is a nonresidue.
    """
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = least_nonsquare(p)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2 = t
        i = 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def sqrt_mod_prime_power(a, p, alpha):
    """Square root of the unit a modulo p^alpha (p odd), via Hensel lifting.

    Returns the root in [1, p^alpha / 2], or None when a is a nonresidue
    mod p.
    """
    if a % p == 0:
        raise ValueError("sqrt_mod_prime_power expects a unit")
    r = sqrt_mod_prime(a, p)
    if r is None:
        return None
    mod = p
    while mod < p**alpha:
        mod *= p
        # Newton step: r <- r - (r^2 - a) / (2r) mod p^k
        r = (r - (r * r - a) * pow(2 * r, -1, mod)) % mod
    mod = p**alpha
    r %= mod
    return min(r, mod - r) if r != 0 else 0


def isqrt_floor(n):
    """Floor of sqrt(n) for n >= 0 (thin wrapper, kept for symmetry)."""
    return math.isqrt(n)
