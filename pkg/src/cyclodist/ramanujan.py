"""Ramanujan sums c_n(m) and their value distribution over n.

c_n(m) = sum of e^(2*pi*i*m*k/n) over 1 <= k <= n coprime to n.  The fast
evaluation path is Hölder's closed form

    c_n(m) = mu(n/(n,m)) * phi(n) / phi(n/(n,m)),

always an integer.  A root-of-unity summation oracle is kept alongside as
an independent check.  For fixed m the sequence n -> c_n(m) has an
asymptotic distribution; its exact point masses and moments are computed
here from local valuation profiles.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Tuple

import numpy as np

from .arith import FactoredLike, as_factored
from .density import Basis, DensityTable, merge_values
from .errors import InternalConsistencyError, OraclePrecisionError, ResourceBudgetError

_DIRECT_LIMIT = 100_000
_ROUND_TOLERANCE = 0.4


def ramanujan_sum(n: FactoredLike, m: int) -> int:
    """c_n(m) by Hölder's formula, exact integer arithmetic throughout."""
    if m < 1:
        raise ValueError("ramanujan_sum requires m >= 1")
    fn = as_factored(n)
    out = 1
    for q, e in fn.factors:
        a = 0
        mm = m
        while mm % q == 0:
            mm //= q
            a += 1
        # local factor c_{q^e}(q^a): the cofactor of m coprime to q is invisible
        if e <= a:
            out *= (q - 1) * q ** (e - 1)  # phi(q^e)
        elif e == a + 1:
            out *= -(q**a)
        else:
            return 0
    return out


@lru_cache(maxsize=4096)
def _coprime_residues(n: int) -> np.ndarray:
    ks = np.arange(1, n + 1, dtype=np.int64)
    return ks[np.gcd(ks, n) == 1]


def ramanujan_sum_direct(n: int, m: int) -> int:
    """Oracle: sum the primitive n-th roots of unity raised to the m-th
    power and round the real part.  Refuses to round once accumulated
    floating error could be ambiguous."""
    if n < 1 or m < 1:
        raise ValueError("ramanujan_sum_direct requires n, m >= 1")
    if n > _DIRECT_LIMIT:
        raise ResourceBudgetError(f"direct oracle capped at n <= {_DIRECT_LIMIT}")
    ks = _coprime_residues(n)
    angles = (2.0 * math.pi * m / n) * ks
    real = float(np.cos(angles).sum())
    imag = float(np.sin(angles).sum())
    nearest = round(real)
    if abs(imag) >= _ROUND_TOLERANCE or abs(real - nearest) >= _ROUND_TOLERANCE:
        raise OraclePrecisionError(
            f"root-of-unity sum for (n={n}, m={m}) too far from an integer: "
            f"{real} + {imag}i"
        )
    return int(nearest)


def ramanujan_local_product(n: FactoredLike, m: int) -> int:
    """c_n(m) assembled prime by prime over all p | n*m:

        prod_p mu(p^nu_p(n) / (n, p^nu_p(m))) * phi(n) / phi(n / (n, p^nu_p(m)))

    (primes dividing m but not n contribute a factor 1; primes dividing n
    but not m contribute mu of their full power)."""
    if m < 1:
        raise ValueError("requires m >= 1")
    fn = as_factored(n)
    phi_n = fn.phi()
    out = 1
    support = sorted(set(fn.primes()) | set(as_factored(m).primes()))
    for p in support:
        e = fn.nu(p)
        a = 0
        mm = m
        while mm % p == 0:
            mm //= p
            a += 1
        g = p ** min(e, a)  # (n, p^nu_p(m))
        rem = e - min(e, a)
        mu_part = 0 if rem >= 2 else (-1 if rem == 1 else 1)
        # phi(n)/phi(n/g): only the p-component differs
        if g == 1:
            ratio = 1
        elif rem == 0:
            ratio = (p - 1) * p ** (e - 1)  # phi(p^e)
        else:
            ratio = p ** min(e, a)
        out *= mu_part * ratio
    return out


# -- value distribution over the integers -----------------------------------


@dataclass(frozen=True)
class LocalProfile:
    """One class of n in the decomposition n = (prod_q q^e_q) * b with b
    squarefree and coprime to m: the exponent e_q at each prime q | m plus
    the Möbius sign of b."""

    exponents: Tuple[Tuple[int, int], ...]  # (q, e_q) with 0 <= e_q <= nu_q(m)+1
    cofactor_sign: int  # mu(b) in {-1, +1}

    def n_part(self) -> int:
        out = 1
        for q, e in self.exponents:
            out *= q**e
        return out


def _local_value(q: int, e: int, nu: int) -> int:
    """c_{q^e}(q^nu): 1, phi(q^e), or -q^nu depending on e vs nu."""
    if e == 0:
        return 1
    if e <= nu:
        return (q - 1) * q ** (e - 1)
    if e == nu + 1:
        return -(q**nu)
    return 0


def iter_local_profiles(m: FactoredLike) -> Iterator[Tuple[LocalProfile, int, Fraction]]:
    """Yield (profile, value of c_n(m) on it, density coefficient on 6/pi^2).

    Exponents e_q >= nu_q(m) + 2 force value 0 and are excluded; the
    squarefree-cofactor density of each exponent pattern is
    (1/2) * prod_q q^(-e_q) / (1 + 1/q) per Möbius sign.
    """
    fm = as_factored(m)
    qs = fm.factors
    ranges = [range(e + 2) for _, e in qs]
    for combo in itertools.product(*ranges):
        weight = Fraction(1, 2)
        val = 1
        for (q, nu), e in zip(qs, combo):
            val *= _local_value(q, e, nu)
            weight *= Fraction(1, q**e) / (1 + Fraction(1, q))
        for sign in (1, -1):
            profile = LocalProfile(
                tuple((q, e) for (q, _), e in zip(qs, combo)), sign
            )
            yield profile, sign * val, weight


def natural_density_of_ramanujan(m: FactoredLike) -> DensityTable:
    """Exact density of each nonzero value of c_n(m) over the integers n,
    as coefficients on the basis 6/pi^2; coinciding values from different
    profiles merge by summation, and v = 0 carries the complementary mass."""
    fm = as_factored(m)
    merged = merge_values((value, coeff) for _, value, coeff in iter_local_profiles(fm))
    return DensityTable.from_dict(f"c_n({fm.value})", Basis.SIX_OVER_PI2, merged)


def _local_moment_factor(q: int, nu: int, order: int) -> Fraction:
    """Per-prime factor of the even-order moment at s = 1:
    (1 + sum_{i<=nu} phi(q^i)^order / q^i + q^(order*nu) / q^(nu+1)) / (1 + 1/q)."""
    total = Fraction(1)
    for i in range(1, nu + 1):
        total += Fraction(((q - 1) * q ** (i - 1)) ** order, q**i)
    total += Fraction(q ** (order * nu), q ** (nu + 1))
    return total / (1 + Fraction(1, q))


def natural_moment_of_ramanujan(m: FactoredLike, order: int) -> Tuple[Fraction, Basis]:
    """Mean of c_n(m)^order over n: exactly 0 for odd order, and an exact
    rational multiple of 6/pi^2 for even order.  The closed form is checked
    against the density table before returning."""
    if order < 1:
        raise ValueError("moment order must be >= 1")
    if order % 2 == 1:
        return Fraction(0), Basis.ONE
    fm = as_factored(m)
    coeff = Fraction(1)
    for q, nu in fm.factors:
        coeff *= _local_moment_factor(q, nu, order)
    from_table = natural_density_of_ramanujan(fm).moment(order)
    if from_table != coeff:
        raise InternalConsistencyError(
            f"moment mismatch for m={fm.value}, order={order}: "
            f"{coeff} vs density sum {from_table}"
        )
    return coeff, Basis.SIX_OVER_PI2
