"""Finite orders in GL(n, Z): the psi function, Ord_n, cyclotomic companion
matrices, exact matrix orders, and Goldbach witnesses.

psi is the additive-over-prime-powers variant of Euler's totient with
psi(1) = psi(2) = 0; the set of element orders of GL(n, Z) is exactly
{m : psi(m) <= n}.  A Goldbach witness in dimension n is a matrix of order
p*q for distinct odd primes with p + q = n + 2; since psi(pq) = p + q - 2,
no smaller dimension admits that order.

All arithmetic is over Python's arbitrary-precision integers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

IntegerMatrix = tuple[tuple[int, ...], ...]


class CrystalloError(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer matrices


def int_identity(n: int) -> IntegerMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def int_mat_mul(a: IntegerMatrix, b: IntegerMatrix) -> IntegerMatrix:
    n = len(a)
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def int_mat_pow(m: IntegerMatrix, e: int) -> IntegerMatrix:
    if e < 0:
        raise CrystalloError("negative exponent")
    result = int_identity(len(m))
    base = m
    while e:
        if e & 1:
            result = int_mat_mul(result, base)
        base = int_mat_mul(base, base) if e > 1 else base
        e >>= 1
    return result


def int_mat_det(m: IntegerMatrix) -> int:
    """Fraction-free Bareiss determinant; exact for any integer matrix."""
    n = len(m)
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def in_gl_z(m: IntegerMatrix) -> bool:
    return int_mat_det(m) in (1, -1)


def block_diag(*blocks: IntegerMatrix) -> IntegerMatrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[off + i][off + j] = v
        off += len(b)
    return tuple(tuple(row) for row in out)


def negate(m: IntegerMatrix) -> IntegerMatrix:
    return tuple(tuple(-v for v in row) for row in m)


# ---------------------------------------------------------------------------
# psi and Ord_n


def factorize(m: int) -> dict[int, int]:
    """Prime factorization by trial division; fine at desk scale."""
    if m < 1:
        raise CrystalloError("factorize needs a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def is_prime(p: int) -> bool:
    return p >= 2 and factorize(p) == {p: 1}


def _phi_prime_power(p: int, r: int) -> int:
    return p**r - p ** (r - 1)


def _psi_prime_power(p: int, r: int) -> int:
    if p == 2 and r == 1:
        return 0
    return _phi_prime_power(p, r)


@dataclass(frozen=True)
class PsiValue:
    m: int
    value: int
    factorization: tuple[tuple[int, int], ...]


def psi_value(m: int) -> PsiValue:
    if m < 1:
        raise CrystalloError("psi is defined for positive integers")
    if m == 1:
        return PsiValue(m=1, value=0, factorization=())
    fac = factorize(m)
    val = sum(_psi_prime_power(p, r) for p, r in fac.items())
    return PsiValue(m=m, value=val, factorization=tuple(sorted(fac.items())))


def psi(m: int) -> int:
    """psi(1) = psi(2) = 0; psi(p^r) = phi(p^r) otherwise; additive over factors."""
    return psi_value(m).value


def ord_set(n: int) -> list[int]:
    """All finite orders of elements of GL(n, Z): {m : psi(m) <= n}, sorted.

    Enumeration recurses over prime powers p^r with psi(p^r) <= n (hence
    p <= n + 1), multiplying factors while the psi budget lasts; this is a
    complete finite search, no cutoff heuristics.
    """
    if n < 2:
        raise CrystalloError("ord_set is defined for n >= 2")
    primes = [p for p in range(2, n + 2) if is_prime(p)]
    results: set[int] = set()

    def rec(idx: int, value: int, budget: int) -> None:
        if idx == len(primes):
            results.add(value)
            return
        p = primes[idx]
        rec(idx + 1, value, budget)
        r = 1
        while True:
            cost = _psi_prime_power(p, r)
            if cost > budget:  # cost is nondecreasing in r, so stop here
                break
            rec(idx + 1, value * p**r, budget - cost)
            r += 1
    rec(0, 1, n)
    return sorted(results)


# ---------------------------------------------------------------------------
# cyclotomic companion matrices and matrix orders


def cyclotomic_polynomial_prime_power(p: int, r: int = 1) -> list[int]:
    """Coefficients (constant first) of Phi_{p^r} for prime p."""
    if not is_prime(p):
        raise CrystalloError(f"{p} is not prime")
    if r < 1:
        raise CrystalloError("exponent must be >= 1")
    # Phi_p(x) = 1 + x + ... + x^(p-1); Phi_{p^r}(x) = Phi_p(x^(p^(r-1)))
    step = p ** (r - 1)
    coeffs = [0] * ((p - 1) * step + 1)
    for k in range(p):
        coeffs[k * step] = 1
    return coeffs


def companion_matrix(coeffs: list[int]) -> IntegerMatrix:
    """Companion matrix of a monic integer polynomial (constant term first)."""
    if coeffs[-1] != 1:
        raise CrystalloError("polynomial must be monic")
    n = len(coeffs) - 1
    if n < 1:
        raise CrystalloError("degree must be >= 1")
    m = [[0] * n for _ in range(n)]
    for i in range(1, n):
        m[i][i - 1] = 1
    for i in range(n):
        m[i][n - 1] = -coeffs[i]
    return tuple(tuple(row) for row in m)


def cyclotomic_companion(p: int) -> IntegerMatrix:
    """Companion of the p-th cyclotomic polynomial: size p-1, order exactly p."""
    if not is_prime(p):
        raise CrystalloError(f"{p} is not prime")
    if p == 2:
        return ((-1,),)
    return companion_matrix(cyclotomic_polynomial_prime_power(p))


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def matrix_order(
    m: IntegerMatrix, cap: int = 10**6, multiple_hint: int | None = None
) -> int | None:
    """Smallest k with m^k = identity, or None when it exceeds the cap.

    When a multiple of the order is known (``multiple_hint``), the order is
    found by binary powering plus a divisor scan instead of stepping.
    """
    if not in_gl_z(m):
        raise CrystalloError("matrix is not in GL(n, Z): determinant not +-1")
    if cap < 1:
        raise CrystalloError("cap must be >= 1")
    ident = int_identity(len(m))
    if multiple_hint is not None and multiple_hint >= 1:
        if int_mat_pow(m, multiple_hint) == ident:
            for d in _divisors(multiple_hint):
                if d > cap:
                    return None
                if int_mat_pow(m, d) == ident:
                    return d
    power = m
    for k in range(1, cap + 1):
        if power == ident:
            return k
        power = int_mat_mul(power, m)
    return None


def matrix_with_order(m: int, n: int) -> IntegerMatrix:
    """An n x n integer matrix of exact multiplicative order m.

    Built from cyclotomic companion blocks of the prime-power factors,
    padded with an identity block; a single factor 2 is absorbed by
    negating the odd part.  Requires psi(m) <= n.
    """
    if m < 1 or n < 1:
        raise CrystalloError("need m >= 1 and n >= 1")
    if psi(m) > n:
        raise CrystalloError(
            f"no order-{m} element in GL({n}, Z): psi({m}) = {psi(m)} > {n}"
        )
    fac = factorize(m) if m > 1 else {}
    two_exp = fac.pop(2, 0)
    blocks = [
        companion_matrix(cyclotomic_polynomial_prime_power(p, r))
        for p, r in sorted(fac.items())
    ]
    if two_exp >= 2:
        blocks.append(companion_matrix(cyclotomic_polynomial_prime_power(2, two_exp)))
    if blocks:
        core = block_diag(*blocks)
        if two_exp == 1:
            core = negate(core)
    else:
        core = negate(int_identity(1)) if two_exp == 1 else int_identity(1)
    pad = n - len(core)
    if pad < 0:
        raise CrystalloError("internal: construction exceeded the dimension")
    return block_diag(core, int_identity(pad)) if pad else core


# ---------------------------------------------------------------------------
# Goldbach witnesses


@dataclass(frozen=True)
class GoldbachWitness:
    n: int
    p: int
    q: int
    matrix: IntegerMatrix
    order: int


def goldbach_witness(n: int) -> GoldbachWitness | None:
    """Distinct odd primes p < q with p + q = n + 2 and the witness matrix.

    The matrix is the block diagonal of the companion matrices of Phi_p and
    Phi_q: size (p-1) + (q-1) = n, exactly verified order p*q, and
    psi(p*q) = n so no smaller dimension contains an element of that order.
    Returns None when no prime pair exists, which would refute the strong
    Goldbach conjecture at n + 2.
    """
    if n < 6 or n % 2:
        raise CrystalloError("need an even n >= 6")
    target = n + 2
    for p in range(3, target // 2 + 1, 2):
        q = target - p
        if q <= p:
            break
        if not (is_prime(p) and is_prime(q)):
            continue
        mat = block_diag(cyclotomic_companion(p), cyclotomic_companion(q))
        order = matrix_order(mat, cap=p * q, multiple_hint=p * q)
        if order != p * q:
            raise CrystalloError(
                f"constructed witness has order {order}, expected {p * q}"
            )
        if psi(p * q) != n:
            raise CrystalloError("psi(pq) != n; minimality check failed")
        return GoldbachWitness(n=n, p=p, q=q, matrix=mat, order=order)
    return None
