"""Exact coefficient rings: the rationals, prime fields, the integers and Z/m.

All scalar arithmetic in the package goes through these ring objects.  Values
are plain Python objects (Fraction for Q, int for everything else) kept in a
canonical form: Fractions are auto-normalized, modular values live in
[0, m).  No floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction


class CapabilityError(Exception):
    """The requested computation is not supported over the chosen ring."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, n + 1):
        if p * p > n:
            return True  # n itself is prime
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
    return False


class Ring:
    """Base interface for an exact commutative unital ring."""

    name: str
    is_field: bool
    # span/kernel/quotient machinery is only available over fields and Z
    supports_submodules: bool
    is_indecomposable: bool

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def coerce(self, k: int):
        """Image of the integer k in the ring."""
        raise NotImplementedError

    def format(self, a) -> str:
        raise NotImplementedError

    def parse(self, s: str):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Ring) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"Ring({self.name})"


class Rationals(Ring):
    name = "Q"
    is_field = True
    supports_submodules = True
    is_indecomposable = True

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)

    def coerce(self, k):
        return Fraction(k)

    def format(self, a):
        return str(a)

    def parse(self, s):
        return Fraction(s)


class Integers(Ring):
    name = "Z"
    is_field = False
    supports_submodules = True
    is_indecomposable = True

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a in (1, -1):
            return a
        raise CapabilityError(f"{a} is not invertible in Z")

    def coerce(self, k):
        return int(k)

    def format(self, a):
        return str(a)

    def parse(self, s):
        return int(s)


class ModularRing(Ring):
    """Z/m for a general modulus m >= 2."""

    is_field = False
    supports_submodules = False

    def __init__(self, m: int):
        if m < 2:
            raise ValueError("modulus must be >= 2")
        self.modulus = m
        self.name = f"Zm:{m}"
        self.is_indecomposable = is_prime_power(m)

    def zero(self):
        return 0

    def one(self):
        return 1 % self.modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def mul(self, a, b):
        return (a * b) % self.modulus

    def neg(self, a):
        return (-a) % self.modulus

    def inv(self, a):
        try:
            return pow(a, -1, self.modulus)
        except ValueError:
            raise CapabilityError(f"{a} is not invertible mod {self.modulus}")

    def coerce(self, k):
        return k % self.modulus

    def format(self, a):
        return f"{a % self.modulus} mod {self.modulus}"

    def parse(self, s):
        return int(s.split("mod")[0].strip()) % self.modulus


class PrimeField(ModularRing):
    """F_p, the field with p elements."""

    is_field = True
    supports_submodules = True

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        super().__init__(p)
        self.name = f"Fp:{p}"
        self.is_indecomposable = True


def ring_from_spec(spec: str) -> Ring:
    """Parse a CLI ring name: Q | Fp:<p> | Z | Zm:<m>."""
    spec = spec.strip()
    if spec == "Q":
        return Rationals()
    if spec == "Z":
        return Integers()
    if spec.startswith("Fp:"):
        return PrimeField(int(spec[3:]))
    if spec.startswith("Zm:"):
        return ModularRing(int(spec[3:]))
    raise ValueError(f"unknown ring spec {spec!r}; expected Q, Fp:<p>, Z or Zm:<m>")
