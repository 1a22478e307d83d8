"""Exact integer and modular arithmetic primitives.

Factorization (trial division, desk scale), Euler's totient, p-adic
valuations with an infinite marker for 0, modular inverses, CRT
recombination and unit-group enumeration.  Everything is plain
arbitrary-precision integer arithmetic; nothing here is approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, NotAUnitError

DEFAULT_FACTOR_BOUND = 10**9


def is_prime(p: int) -> bool:
    """Deterministic trial-division primality check."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Modulus:
    """An integer m >= 2 together with its full prime factorization.

    ``factors`` is a tuple of (prime, exponent) pairs with strictly
    increasing primes whose product reconstructs ``value``.
    """

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.value < 2:
            raise DomainError(f"modulus must be >= 2, got {self.value}")
        prod = 1
        prev_p = 1
        for p, e in self.factors:
            if p <= prev_p:
                raise DomainError("factor primes must be strictly increasing")
            if e < 1:
                raise DomainError("factor exponents must be >= 1")
            if not is_prime(p):
                raise DomainError(f"{p} is not prime")
            prod *= p**e
            prev_p = p
        if prod != self.value:
            raise DomainError(
                f"factorization {self.factors} does not multiply to {self.value}"
            )

    def prime_power(self) -> tuple[int, int]:
        """Return (p, e) if the value is a prime power, else raise."""
        if len(self.factors) != 1:
            raise DomainError(f"{self.value} is not a prime power")
        return self.factors[0]

    @property
    def is_prime_power(self) -> bool:
        return len(self.factors) == 1

    def __int__(self) -> int:
        return self.value


def factorize(m: int, bound: int = DEFAULT_FACTOR_BOUND) -> Modulus:
    """Factor m >= 2 by trial division.

    ``bound`` caps the accepted input; this is a desk-scale tool, not a
    general-purpose factorizer.
    """
    if m < 2:
        raise DomainError(f"cannot factor {m}: need an integer >= 2")
    if m > bound:
        raise DomainError(f"{m} exceeds the factorization bound {bound}")
    factors = []
    rest = m
    p = 2
    while p * p <= rest:
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            factors.append((p, e))
        p = 3 if p == 2 else p + 2
    if rest > 1:
        factors.append((rest, 1))
    return Modulus(m, tuple(factors))


def as_modulus(m: int | Modulus) -> Modulus:
    return m if isinstance(m, Modulus) else factorize(m)


class Valuation:
    """A p-adic valuation: a nonnegative integer or the infinite marker.

    The infinite value arises exactly for input 0 and compares greater
    than every finite valuation, so min() and comparisons against plain
    ints behave the way the arithmetic needs (min(INFINITE, e) == e).
    """

    __slots__ = ("_value",)

    INFINITE: "Valuation"

    def __init__(self, value: int | None):
        if value is not None and value < 0:
            raise DomainError(f"valuation must be nonnegative, got {value}")
        object.__setattr__(self, "_value", value)

    @property
    def is_infinite(self) -> bool:
        return self._value is None

    @property
    def finite(self) -> int:
        """The integer value; raises on the infinite marker."""
        if self._value is None:
            raise DomainError("valuation is infinite")
        return self._value

    def cap(self, bound: int) -> int:
        """min(self, bound) as a plain integer."""
        if self._value is None:
            return bound
        return min(self._value, bound)

    @staticmethod
    def _raw(other: "Valuation | int") -> int | None:
        if isinstance(other, Valuation):
            return other._value
        if isinstance(other, int):
            return other
        return NotImplemented  # type: ignore[return-value]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Valuation):
            return self._value == other._value
        if isinstance(other, int):
            return self._value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._value)

    def __lt__(self, other: "Valuation | int") -> bool:
        o = self._raw(other)
        if o is NotImplemented:
            return NotImplemented
        if self._value is None:
            return False
        if o is None:
            return True
        return self._value < o

    def __le__(self, other: "Valuation | int") -> bool:
        o = self._raw(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return True
        if self._value is None:
            return False
        return self._value <= o

    def __gt__(self, other: "Valuation | int") -> bool:
        le = self.__le__(other)
        return NotImplemented if le is NotImplemented else not le

    def __ge__(self, other: "Valuation | int") -> bool:
        lt = self.__lt__(other)
        return NotImplemented if lt is NotImplemented else not lt

    def __add__(self, other: "Valuation | int") -> "Valuation":
        o = self._raw(other)
        if o is NotImplemented:
            return NotImplemented
        if self._value is None or o is None:
            return Valuation.INFINITE
        return Valuation(self._value + o)

    __radd__ = __add__

    def __repr__(self) -> str:
        return "Valuation.INFINITE" if self._value is None else f"Valuation({self._value})"


Valuation.INFINITE = Valuation(None)


def nu_p(p: int, t: int) -> Valuation:
    """Largest e with p^e | t; the infinite marker for t = 0."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if t == 0:
        return Valuation.INFINITE
    t = abs(t)
    e = 0
    while t % p == 0:
        t //= p
        e += 1
    return Valuation(e)


def euler_phi(m: int | Modulus) -> int:
    """Euler's totient, computed from the factorization."""
    mod = as_modulus(m)
    phi = 1
    for p, e in mod.factors:
        phi *= p**e - p ** (e - 1)
    return phi


def mod_inverse(a: int, m: int) -> int:
    """The inverse of a modulo m, in [0, m)."""
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    if math.gcd(a, m) != 1:
        raise NotAUnitError(f"{a} is not a unit modulo {m}")
    return pow(a, -1, m)


def crt_combine(residues: list[tuple[int, int]] | tuple[tuple[int, int], ...]) -> int:
    """Combine (value, modulus) pairs with pairwise coprime moduli.

    Returns the unique x in [0, prod moduli) with x = value_s mod modulus_s
    for every s.
    """
    if not residues:
        raise DomainError("need at least one residue")
    for _, m in residues:
        if m < 1:
            raise DomainError(f"modulus must be >= 1, got {m}")
    for i in range(len(residues)):
        for j in range(i + 1, len(residues)):
            if math.gcd(residues[i][1], residues[j][1]) != 1:
                raise DomainError(
                    f"moduli {residues[i][1]} and {residues[j][1]} are not coprime"
                )
    x, m = residues[0][0] % residues[0][1], residues[0][1]
    for v, mi in residues[1:]:
        # x + m*k = v (mod mi)  =>  k = (v - x) / m (mod mi)
        k = ((v - x) * pow(m, -1, mi)) % mi if mi > 1 else 0
        x += m * k
        m *= mi
        x %= m
    return x


@lru_cache(maxsize=None)
def units(m: int) -> tuple[int, ...]:
    """Ascending tuple of all units of Z_m."""
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    return tuple(a for a in range(1, m) if math.gcd(a, m) == 1)
