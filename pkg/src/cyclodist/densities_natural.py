"""Exact means and value densities of cyclotomic coefficients over n.

The scaled mean e_k = zeta(2) * M_n(a_n(k)) is an explicit rational.  It
is computed by two fully independent routes:

* the divisor-profile route: a weighted sum of (a_d(k) + a_(d*q)(k))/d over
  the divisors d of M_k = k * prod_(p<=k) p, with cheaper variants when k
  is odd (halved divisor set) or prime (divisors of prod_(2<p<k) p only);
* the partition route: a sum over the partitions lambda of k involving
  only lcm/gcd of the parts and Möbius values, which scales far beyond the
  divisor route (p(61) partitions instead of 2^pi(61) divisors).

Per-value densities delta(a_n(k) = v) come from the same divisor profiles
and are stored in Table convention: coefficient zeta(2)*delta on the basis
6/pi^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from .arith import FactoredLike, FactoredNat, as_factored, small_primes
from .cyclotomic import (
    coeff_profile,
    cyclo_coeff,
    iter_partitions,
    partition_count,
    support_modulus,
)
from .density import Basis, DensityTable, merge_values
from .errors import InternalConsistencyError, ResourceBudgetError
from .arith import least_prime_above

MEAN_MAX_K = 40
PARTITION_MEAN_BUDGET = 2_000_000  # p(k) cap; p(61) = 1_121_505 fits


@dataclass(frozen=True)
class EkValue:
    """e_k = zeta(2) * mean of a_n(k), with the integer witness
    e_k * k * prod_(p<=k) (p+1) (observed integral well beyond k = 61; the
    doubled form 2k * prod always is)."""

    k: int
    e_k: Fraction
    integrality_witness: int


def _prod_p_plus_1(k: int) -> int:
    out = 1
    for p in small_primes(k):
        out *= p + 1
    return out


def _make_ek(k: int, e_k: Fraction) -> EkValue:
    witness = e_k * k * _prod_p_plus_1(k)
    if witness.denominator != 1:
        raise InternalConsistencyError(
            f"e_{k} * k * prod(p+1) unexpectedly non-integral: {witness}"
        )
    return EkValue(k, e_k, int(witness))


def mean_coeff(k: int) -> EkValue:
    """e_k by the cheapest applicable divisor-profile formula.

    k = 1 is special: the degree-1 polynomial at n = 1 breaks the generic
    d = 1 term, and the true mean of a_n(1) = -mu(n) (n > 1) is 0."""
    if k < 1:
        raise ValueError("mean_coeff requires k >= 1")
    if k == 1:
        return EkValue(1, Fraction(0), 0)
    if k > MEAN_MAX_K:
        raise ResourceBudgetError(f"divisor-profile mean limited to k <= {MEAN_MAX_K}")
    primes = small_primes(k)
    q = least_prime_above(k)
    if k % 2 == 1 and len(as_factored(k).factors) == 1 and as_factored(k).factors[0][1] == 1:
        # prime k >= 3: divisors of prod_(2<p<k) p suffice
        fac = tuple((p, 1) for p in primes if 2 < p < k)
        support = FactoredNat(math.prod(p for p, _ in fac), fac)
        scale = Fraction(1, 6)
        for p, _ in fac:
            scale /= 1 + Fraction(1, p)
        total = Fraction(0)
        for d in support.iter_divisors_factored():
            a = cyclo_coeff(d, k)
            aq = cyclo_coeff(d.times_prime(q), k)
            total += Fraction(a + aq, d.value)
        return _make_ek(k, scale * total)
    if k % 2 == 1:
        # odd k >= 3: halve the divisor set via a_(2d)(k) = -a_d(k)
        m_k = support_modulus(k)
        half = FactoredNat(
            m_k.value // 2, tuple((p, e) for p, e in m_k.factors if p != 2)
        )
        scale = Fraction(1, 6)
        for p in primes:
            if p > 2:
                scale /= 1 + Fraction(1, p)
        total = Fraction(0)
        for d in half.iter_divisors_factored():
            a = cyclo_coeff(d, k)
            aq = cyclo_coeff(d.times_prime(q), k)
            total += Fraction(a + aq, d.value)
        return _make_ek(k, scale * total)
    profile = coeff_profile(k)
    scale = Fraction(1, 2)
    for p in primes:
        scale /= 1 + Fraction(1, p)
    total = Fraction(0)
    for d, (a, aq) in profile.entries.items():
        total += Fraction(a + aq, d)
    return _make_ek(k, scale * total)


# -- partition route ----------------------------------------------------------


@lru_cache(maxsize=None)
def _exponents_small(n: int) -> Tuple[Tuple[int, int], ...]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


@lru_cache(maxsize=None)
def _support_data(parts: Tuple[int, ...]):
    """Per distinct-part-set data: None when lcm/gcd of the parts has a
    non-squarefree quotient (no contribution), else
    (mu values of lcm/part aligned with parts, denominator G * prod_(p | L/G) (p+1))."""
    exps: Dict[int, int] = {}
    for j in parts:
        for p, e in _exponents_small(j):
            if exps.get(p, 0) < e:
                exps[p] = e
    g = parts[0]
    for j in parts[1:]:
        g = math.gcd(g, j)
    mus = []
    for j in parts:
        cnt = 0
        for p, e in exps.items():
            rem = e - _nu_small(j, p)
            if rem >= 2:
                return None
            cnt += rem
        mus.append(-1 if cnt % 2 else 1)
    denom = g
    for p, e in exps.items():
        if e > _nu_small(g, p):
            denom *= p + 1
    return tuple(mus), denom


def _nu_small(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def mean_coeff_partition(k: int) -> EkValue:
    """e_k as (1/2) * sum over partitions of k of eps(lambda) / denom(lambda).

    For a partition with distinct parts k_j (multiplicity n_j), L = lcm and
    G = gcd of the parts, and mu_j = mu(L/k_j):

        eps = prod_j (-1)^(n_j) C(mu_j, n_j) + prod_j (-1)^(n_j) C(-mu_j, n_j)
        denom = G * prod_(p | L/G) (p + 1)

    where (-1)^n C(1, n) is 1, -1, 0 for n = 0, 1, >= 2 and
    (-1)^n C(-1, n) = 1 — so each of the two products is (+-1 or 0) read off
    from which parts have multiplicity 1."""
    if k < 1:
        raise ValueError("mean_coeff_partition requires k >= 1")
    if partition_count(k) > PARTITION_MEAN_BUDGET:
        raise ResourceBudgetError(f"p({k}) exceeds partition budget")
    # integer epsilon sums bucketed per denominator; one Fraction pass at the end
    buckets: Dict[int, int] = {}
    for partition in iter_partitions(k):
        parts = tuple(j for j, _ in partition)
        data = _support_data(parts)
        if data is None:
            continue
        mus, denom = data
        plus_ok = 1  # prod over mu_j = +1 parts of (-1 if n_j == 1 else 0)
        minus_ok = 1  # same with roles of the signs swapped
        for (j, mult), mu_j in zip(partition, mus):
            if mu_j == 1:
                if mult == 1:
                    plus_ok = -plus_ok
                else:
                    plus_ok = 0
            else:
                if mult == 1:
                    minus_ok = -minus_ok
                else:
                    minus_ok = 0
            if not plus_ok and not minus_ok:
                break
        eps = plus_ok + minus_ok
        if eps:
            buckets[denom] = buckets.get(denom, 0) + eps
    e_k = sum((Fraction(num, 2 * den) for den, num in buckets.items()), Fraction(0))
    return _make_ek(k, e_k)


# -- per-value densities --------------------------------------------------------


def coeff_density(k: int) -> DensityTable:
    """Exact density of each nonzero value of a_n(k) over n, stored as
    zeta(2)*delta on the basis 6/pi^2 (so entries can be compared to the
    reference tables string-for-string)."""
    if k < 1:
        raise ValueError("coeff_density requires k >= 1")
    if k == 1:
        return DensityTable.from_dict(
            "a_n(1)", Basis.SIX_OVER_PI2, {-1: Fraction(1, 2), 1: Fraction(1, 2)}
        )
    profile = coeff_profile(k)
    scale = Fraction(1, 2)
    for p in small_primes(k):
        scale /= 1 + Fraction(1, p)
    pairs = []
    for d, (a, aq) in profile.entries.items():
        w = scale / d
        pairs.append((a, w))
        pairs.append((aq, w))
    return DensityTable.from_dict(
        f"a_n({k})", Basis.SIX_OVER_PI2, merge_values(pairs)
    )


def _coeff_density_oddhalf(k: int) -> DensityTable:
    """Same table for odd k >= 3 from the odd divisors only, using the
    sign flip a_(2d)(k) = -a_d(k); cross-checked against coeff_density."""
    if k < 3 or k % 2 == 0:
        raise ValueError("odd-half density requires odd k >= 3")
    m_k = support_modulus(k)
    half = FactoredNat(m_k.value // 2, tuple((p, e) for p, e in m_k.factors if p != 2))
    q = least_prime_above(k)
    scale = Fraction(1, 2)
    for p in small_primes(k):
        scale /= 1 + Fraction(1, p)
    pairs = []
    for d in half.iter_divisors_factored():
        a = cyclo_coeff(d, k)
        aq = cyclo_coeff(d.times_prime(q), k)
        w = scale / d.value
        pairs.append((a, w))
        pairs.append((aq, w))
        pairs.append((-a, w / 2))
        pairs.append((-aq, w / 2))
    return DensityTable.from_dict(
        f"a_n({k})", Basis.SIX_OVER_PI2, merge_values(pairs)
    )


def squarefree_coprime_density(r: FactoredLike) -> Tuple[Fraction, Basis]:
    """Density of squarefree integers coprime to r: (6/pi^2) / prod_(p|r) (1 + 1/p)."""
    fr = as_factored(r)
    coeff = Fraction(1)
    for p, _ in fr.factors:
        coeff /= 1 + Fraction(1, p)
    return coeff, Basis.SIX_OVER_PI2


@dataclass(frozen=True)
class MollerScanEntry:
    k: int
    e_k: Fraction
    sign_ok: bool  # (-1)^k (e_k - e_(k+1)) > 0
    range_ok: bool  # 0 <= e_k <= 1/2


def moller_conjecture_scan(kmax: int) -> List[MollerScanEntry]:
    """Probe the two conjectured monotonicity/range properties of e_k for
    k = 1..kmax (e_(kmax+1) is computed internally for the last sign flag)."""
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    evals = [mean_coeff_partition(k).e_k for k in range(1, kmax + 2)]
    out = []
    for k in range(1, kmax + 1):
        e_k, e_next = evals[k - 1], evals[k]
        sign = (e_k - e_next) if k % 2 == 0 else (e_next - e_k)
        out.append(
            MollerScanEntry(
                k=k,
                e_k=e_k,
                sign_ok=sign > 0,
                range_ok=Fraction(0) <= e_k <= Fraction(1, 2),
            )
        )
    return out
