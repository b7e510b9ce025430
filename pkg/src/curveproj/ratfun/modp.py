"""Small helpers for univariate polynomials over GF(p), ascending int lists."""
from __future__ import annotations

PRIMES = (2147483647, 2147483629, 2147483587)


def trim(c):
    while c and not c[-1]:
        c.pop()
    return c


def reduce(c, p):
    return trim([v % p for v in c])


def deriv(c, p):
    return trim([(i * c[i]) % p for i in range(1, len(c))])


def rem(a, b, p):
    a = list(a)
    inv = pow(b[-1], p - 2, p)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        f = (a[-1] * inv) % p
        shift = len(a) - 1 - db
        for i in range(db + 1):
            a[shift + i] = (a[shift + i] - f * b[i]) % p
        a.pop()
        trim(a)
    return a


def gcd(a, b, p):
    a, b = trim(list(a)), trim(list(b))
    while b:
        a, b = b, rem(a, b, p)
    if not a:
        return a
    inv = pow(a[-1], p - 2, p)
    return [(v * inv) % p for v in a]


def evaluate(c, x, p):
    acc = 0
    for v in reversed(c):
        acc = (acc * x + v) % p
    return acc


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 4.7e9 (bases 2, 7, 61)."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13):
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 7, 61):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_below(n: int = 2 ** 31):
    """Primes in decreasing order starting just below n."""
    k = n - 1
    while k > 2:
        if is_prime(k):
            yield k
        k -= 1
