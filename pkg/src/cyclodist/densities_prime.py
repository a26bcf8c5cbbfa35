"""Densities and averages over shifted primes p - 1.

Everything here is an exact rational multiple of the Artin constant

    A = prod_p (1 - 1/(p(p-1))) = 0.3739558136...,

which is also the density of primes p with p - 1 squarefree.  The local
ingredients are the valuation densities delta(nu_q(p-1) = e) (1 - 1/(q-1)
for e = 0, q^-e for e >= 1) and the requirement that the cofactor of p - 1
outside a finite prime set be squarefree.  Signed statements (splitting a
value class between +v and -v) additionally assume that Möbius signs over
such shifted-prime classes equidistribute; those outputs carry an explicit
``conditional`` flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .arith import FactoredLike, SievePack, as_factored, default_pack
from .cyclotomic import coeff_profile
from .density import Basis, DensityTable, basis_numeric, merge_values
from .errors import InternalConsistencyError, ResourceBudgetError

#: pi(x) < 1.25506 x / log x (Rosser-Schoenfeld) turns, via partial
#: summation, into  sum_(p > P) 1/(p(p-1)) <= 2.52 / (P log P).
_TAIL_CONSTANT = 2.52
#: slack for float rounding in the truncated product accumulation
_FLOAT_SLACK = 1e-12


@dataclass(frozen=True)
class EulerProductConstant:
    """A truncated Euler product with a proven bound on the truncation error."""

    value: float
    truncation_prime: int
    tail_bound: float


def _tail_bound(limit: int) -> float:
    return _TAIL_CONSTANT / (limit * math.log(limit)) + _FLOAT_SLACK


def artin_constant(
    precision_goal: float = 1e-8, pack: Optional[SievePack] = None
) -> EulerProductConstant:
    """A = prod_p (1 - 1/(p(p-1))) truncated over the pack's primes.

    The documented tail estimate 2.52/(P log P) must not exceed the goal,
    otherwise the configured sieve cannot reach the precision and the
    request is refused."""
    pack = pack or default_pack()
    bound = _tail_bound(pack.limit)
    if bound > precision_goal:
        raise ResourceBudgetError(
            f"tail bound {bound:.3g} at sieve limit {pack.limit} exceeds "
            f"precision goal {precision_goal:.3g}"
        )
    p = pack.primes.astype(np.float64)
    value = float(np.exp(np.log1p(-1.0 / (p * (p - 1.0))).sum()))
    return EulerProductConstant(value, int(pack.primes[-1]), bound)


def shifted_prime_kfree_density(
    r: int, k: int, pack: Optional[SievePack] = None
) -> EulerProductConstant:
    """Density of primes q with q - r k-th-power-free:
    prod_(p not dividing r) (1 - 1/(p^(k-1) (p-1)))."""
    if r == 0:
        raise ValueError("shift r must be nonzero")
    if k < 2:
        raise ValueError("powerfree order k must be >= 2")
    pack = pack or default_pack()
    p = pack.primes.astype(np.float64)
    with np.errstate(over="ignore"):
        terms = np.log1p(-1.0 / (p ** (k - 1) * (p - 1.0)))
    mask = np.isfinite(terms)
    for q, _ in as_factored(abs(r)).factors:
        mask &= pack.primes != q
    value = float(np.exp(terms[mask].sum()))
    return EulerProductConstant(value, int(pack.primes[-1]), _tail_bound(pack.limit))


# -- valuation profiles ----------------------------------------------------------

ExponentSpec = Union[int, Tuple[str, int]]  # e or ("ge", E)


@dataclass(frozen=True)
class ValuationConstraint:
    """Prescribed valuations nu_q(p-1) at finitely many primes q, plus the
    condition that p - 1 be squarefree outside those primes.

    Each exponent is either an exact value e >= 0 or ("ge", E)."""

    entries: Tuple[Tuple[int, ExponentSpec], ...]
    squarefree_outside: bool = True

    def __post_init__(self):
        last = 1
        for q, spec in self.entries:
            if q <= last:
                raise ValueError("constraint primes must be distinct and increasing")
            last = q
            if isinstance(spec, tuple):
                tag, e = spec
                if tag != "ge" or e < 0:
                    raise ValueError(f"bad exponent spec {spec}")
            elif spec < 0:
                raise ValueError("exponents must be >= 0")

    def matches(self, factors: Sequence[Tuple[int, int]]) -> bool:
        """Does a factorization of p - 1 satisfy the valuation part?"""
        exps = dict(factors)
        for q, spec in self.entries:
            e = exps.get(q, 0)
            if isinstance(spec, tuple):
                if e < spec[1]:
                    return False
            elif e != spec:
                return False
        return True

    def primes(self) -> Tuple[int, ...]:
        return tuple(q for q, _ in self.entries)


def local_valuation_density(q: int, spec: ExponentSpec) -> Fraction:
    """delta(nu_q(p-1) = e) = 1 - 1/(q-1) (e = 0) or q^-e (e >= 1);
    tail classes ("ge", E) sum the geometric series."""
    if isinstance(spec, tuple):
        e = spec[1]
        if e == 0:
            return Fraction(1)
        return Fraction(1, q ** (e - 1) * (q - 1))
    if spec == 0:
        return 1 - Fraction(1, q - 1)
    return Fraction(1, q**spec)


def artin_local_factor(q: int) -> Fraction:
    return 1 - Fraction(1, q * (q - 1))


@dataclass(frozen=True)
class ProfileDensity:
    coefficient: Fraction
    basis: Basis
    note: Optional[str] = None

    def numeric(self, artin_value: Optional[float] = None) -> float:
        if self.basis is Basis.ARTIN:
            a = artin_value if artin_value is not None else basis_numeric(Basis.ARTIN)
            return float(self.coefficient) * a
        return float(self.coefficient)


def valuation_profile_density(constraint: ValuationConstraint) -> ProfileDensity:
    """Density of primes p whose p - 1 satisfies the constraint.

    With the squarefree-outside condition the result is the exact rational
    multiple of A obtained by dividing out the constrained primes' local
    Artin factors; without it only the local valuation densities remain
    (basis 1).  Contradictory prescriptions (e.g. nu_2(p-1) = 0) come out
    as coefficient 0."""
    coeff = Fraction(1)
    note = None
    for q, spec in constraint.entries:
        local = local_valuation_density(q, spec)
        if local == 0:
            note = f"nu_{q}(p-1) = {spec} never occurs (local density 0)"
        coeff *= local
    if not constraint.squarefree_outside:
        return ProfileDensity(coeff, Basis.ONE, note)
    for q, _ in constraint.entries:
        coeff /= artin_local_factor(q)
    return ProfileDensity(coeff, Basis.ARTIN, note)


# -- Ramanujan sums over shifted primes -------------------------------------------


def _local_value(q: int, e: int, nu: int) -> int:
    if e == 0:
        return 1
    if e <= nu:
        return (q - 1) * q ** (e - 1)
    if e == nu + 1:
        return -(q**nu)
    return 0


def iter_prime_profiles(k: FactoredLike) -> Iterator[Tuple[int, Fraction]]:
    """(value of c_(p-1)(k), A-coefficient) over all valuation profiles of
    p - 1 at the primes dividing k with squarefree cofactor; exponents
    nu_q(p-1) >= nu_q(k) + 2 force the value 0 and are skipped."""
    fk = as_factored(k)
    combos = [(Fraction(1), 1)]
    for q, nu in fk.factors:
        nxt = []
        for coeff, val in combos:
            for e in range(nu + 2):
                loc = local_valuation_density(q, e) / artin_local_factor(q)
                if loc == 0:
                    continue
                nxt.append((coeff * loc, val * _local_value(q, e, nu)))
        combos = nxt
    yield from ((val, coeff) for coeff, val in combos)


def ramanujan_prime_density(k: FactoredLike, signed: bool = False) -> DensityTable:
    """Value distribution of c_(p-1)(k) over primes p, basis A.

    Unsigned (|c|) is unconditional; `signed` splits every profile evenly
    between the two Möbius signs of the cofactor and is flagged
    conditional."""
    fk = as_factored(k)
    pairs = []
    for value, coeff in iter_prime_profiles(fk):
        if signed:
            pairs.append((value, coeff / 2))
            pairs.append((-value, coeff / 2))
        else:
            pairs.append((abs(value), coeff))
    name = f"c_(p-1)({fk.value})" if signed else f"|c_(p-1)({fk.value})|"
    return DensityTable.from_dict(
        name, Basis.ARTIN, merge_values(pairs), conditional=signed
    )


def ramanujan_prime_mean_abs(k: FactoredLike) -> Tuple[Fraction, Basis]:
    """Mean of |c_(p-1)(k)| over primes:
    A * prod_(q|k) (1 + nu_q(k) (q-1)^2 / (q^2 - q - 1)); cross-checked
    against the value distribution before returning."""
    fk = as_factored(k)
    coeff = Fraction(1)
    for q, nu in fk.factors:
        coeff *= 1 + Fraction(nu * (q - 1) ** 2, q * q - q - 1)
    from_table = ramanujan_prime_density(fk, signed=False).moment(1)
    if from_table != coeff:
        raise InternalConsistencyError(
            f"mean |c_(p-1)({fk.value})| mismatch: {coeff} vs {from_table}"
        )
    return coeff, Basis.ARTIN


def ramanujan_prime_moment(
    k: FactoredLike, z: Union[int, float, Fraction]
) -> Tuple[Union[Fraction, float], Basis]:
    """z-th absolute moment of c_(p-1)(k) over primes, as a multiple of A:

        prod_(q|k) (1 + (q^(nu(z-1)) - 1)(q-1)[(q-1)^z + q^(z-1) - 1]
                        / ((q^2 - q - 1)(q^(z-1) - 1)))

    Exact rational for integer z; floating point otherwise (per-factor
    error ~1e-12).  z = 1 is the removable singularity: use
    ramanujan_prime_mean_abs."""
    if isinstance(z, Rational) and z == int(z):
        z = int(z)
    if z == 1:
        raise ValueError("z = 1 is the mean; use ramanujan_prime_mean_abs")
    if not z > 0:
        raise ValueError("moment order z must be positive")
    fk = as_factored(k)
    if isinstance(z, int):
        coeff = Fraction(1)
        for q, nu in fk.factors:
            qz = Fraction(q) ** (z - 1)
            num = (qz**nu - 1) * (q - 1) * (Fraction(q - 1) ** z + qz - 1)
            coeff *= 1 + num / ((q * q - q - 1) * (qz - 1))
        return coeff, Basis.ARTIN
    zf = float(z)
    out = 1.0
    for q, nu in fk.factors:
        qz = q ** (zf - 1.0)
        num = (qz**nu - 1.0) * (q - 1.0) * ((q - 1.0) ** zf + qz - 1.0)
        out *= 1.0 + num / ((q * q - q - 1.0) * (qz - 1.0))
    return out, Basis.ARTIN


# -- elementary symmetric functions of primitive roots, small k --------------------

_S_SMALL: Dict[int, Dict[int, Fraction]] = {
    1: {-1: Fraction(1, 2), 1: Fraction(1, 2)},
    2: {-1: Fraction(1, 4), 1: Fraction(3, 4)},
    3: {-1: Fraction(1, 15), 1: Fraction(17, 30)},
    4: {-1: Fraction(13, 40), 1: Fraction(27, 40)},
}


def s_small_density(k: int) -> DensityTable:
    """Distribution of the k-th elementary symmetric function of the
    primitive roots mod p, reduced to the symmetric residue range, for
    k <= 4; closed forms assembled from the valuation cases of mu(p-1),
    mu((p-1)/2), nu_3(p-1) and nu_2(p-1).  Sign splits are conditional."""
    if k not in _S_SMALL:
        raise ValueError("closed forms cover k in {1, 2, 3, 4}; use coeff_prime_density")
    return DensityTable.from_dict(
        f"s_{k}(p) mod p", Basis.ARTIN, dict(_S_SMALL[k]), conditional=True
    )


def coeff_prime_density(k: int) -> Tuple[DensityTable, Fraction]:
    """Value distribution and mean of a_(p-1)(k) over primes p, as
    multiples of A (table coefficients are delta/A).  Conditional on the
    Möbius sign-equidistribution conjecture.

    Built from the divisor profile of M_k restricted to even d:

        delta(a_(p-1)(k) = v)/A = prod_(2<q<=k) q(q-2)/(q^2-q-1) *
            sum over even d | M_k with a_d(k) = v (or a_(dr)(k) = v)
            of (1/d) prod_(q | d, q > 2) (q-1)/(q-2).
    """
    if k < 1:
        raise ValueError("coeff_prime_density requires k >= 1")
    if k == 1:
        # a_(p-1)(1) = -mu(p-1) for p >= 3; the sign flip is invisible by symmetry
        table = DensityTable.from_dict(
            "a_(p-1)(1)",
            Basis.ARTIN,
            {-1: Fraction(1, 2), 1: Fraction(1, 2)},
            conditional=True,
        )
        return table, Fraction(0)
    profile = coeff_profile(k)
    prefactor = Fraction(1)
    for q in _odd_primes_upto(k):
        prefactor *= Fraction(q * (q - 2), q * q - q - 1)
    pairs = []
    mean = Fraction(0)
    for d in profile.m_k.iter_divisors_factored():
        if d.value % 2:
            continue
        a, aq = profile.entries[d.value]
        w = prefactor / d.value
        for q, _ in d.factors:
            if q > 2:
                w *= Fraction(q - 1, q - 2)
        pairs.append((a, w))
        pairs.append((aq, w))
        mean += (a + aq) * w
    table = DensityTable.from_dict(
        f"a_(p-1)({k})", Basis.ARTIN, merge_values(pairs), conditional=True
    )
    if table.moment(1) != mean:
        raise InternalConsistencyError(
            f"mean of a_(p-1)({k}) disagrees with its own distribution"
        )
    return table, mean


def _odd_primes_upto(k: int) -> List[int]:
    from .arith import small_primes

    return [p for p in small_primes(k) if p > 2]
