"""Arithmetic in the binary fields GF(2^m), 1 <= m <= 32.

Elements are plain integers holding the coefficient vector in the
polynomial basis 1, X, ..., X^(m-1) modulo the field modulus.  The hot
paths (point counting, root scans) work on these raw integers or on numpy
arrays of them; :class:`FieldElement` is the checked, operator-friendly
wrapper used at API boundaries.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

MAX_DEGREE = 32


def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2)[x] polynomials encoded as integers."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def polymod(a: int, modulus: int) -> int:
    deg = modulus.bit_length() - 1
    while a.bit_length() - 1 >= deg:
        a ^= modulus << (a.bit_length() - 1 - deg)
    return a


def polygcd(a: int, b: int) -> int:
    while b:
        a, b = b, polymod(a, b)
    return a


def _mulmod(a: int, b: int, modulus: int) -> int:
    return polymod(clmul(a, b), modulus)


def _frobenius_power(k: int, modulus: int) -> int:
    """x^(2^k) mod modulus."""
    t = 0b10
    for _ in range(k):
        t = _mulmod(t, t, modulus)
    return t


def prime_factors(n: int) -> list[int]:
    factors = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            factors.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        factors.append(n)
    return factors


def is_irreducible(poly: int) -> bool:
    """Rabin's test over GF(2).

    ``poly`` has degree m.  It is irreducible iff x^(2^m) = x mod poly and
    gcd(x^(2^(m/p)) - x, poly) = 1 for every prime p dividing m.
    """
    m = poly.bit_length() - 1
    if m < 1:
        return False
    if _frobenius_power(m, poly) != polymod(0b10, poly):
        return False
    for p in prime_factors(m):
        t = _frobenius_power(m // p, poly) ^ 0b10
        if polygcd(poly, t) != 1:
            return False
    return True


class BinaryField:
    """GF(2^m) with a fixed modulus and multiplicative generator.

    Use :func:`make_field` rather than calling this directly; it picks the
    lexicographically smallest irreducible modulus and caches the result so
    that descriptors for the same degree are shared.
    """

    def __init__(self, m: int, modulus: int):
        if not 1 <= m <= MAX_DEGREE:
            raise ValueError(f"extension degree must be in [1, {MAX_DEGREE}], got {m}")
        if modulus.bit_length() - 1 != m or not is_irreducible(modulus):
            raise ValueError(f"{modulus:#b} is not an irreducible polynomial of degree {m}")
        self.m = m
        self.modulus = modulus
        self.size = 1 << m
        self.order = self.size - 1
        self.mask = self.size - 1
        self.generator = self._smallest_generator()
        self.trace_mask = sum(self._trace_def(1 << k) << k for k in range(m))
        # reduction of bits m.. of an unreduced product, in 8-bit chunks
        self._reduce_tables = None

    def __repr__(self):
        return f"GF(2^{self.m}) mod {self.modulus:#x}"

    def __eq__(self, other):
        return isinstance(other, BinaryField) and (self.m, self.modulus) == (other.m, other.modulus)

    def __hash__(self):
        return hash((self.m, self.modulus))

    def __call__(self, bits: int) -> FieldElement:
        return FieldElement(self, bits)

    # -- scalar arithmetic on raw integers -------------------------------

    def mul(self, a: int, b: int) -> int:
        return polymod(clmul(a, b), self.modulus)

    def square(self, a: int) -> int:
        return self.mul(a, a)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.pow(a, self.size - 2)

    def sqrt(self, a: int) -> int:
        # Frobenius has order m, so its inverse is the (m-1)-th power of it
        for _ in range(self.m - 1):
            a = self.mul(a, a)
        return a

    def _trace_def(self, a: int) -> int:
        t, s = 0, a
        for _ in range(self.m):
            t ^= s
            s = self.mul(s, s)
        assert t in (0, 1)
        return t

    def trace(self, a: int) -> int:
        return (a & self.trace_mask).bit_count() & 1

    def multiplicative_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        order = self.order
        for p in prime_factors(self.order):
            while order % p == 0 and self.pow(a, order // p) == 1:
                order //= p
        return order

    def _smallest_generator(self) -> int:
        if self.m == 1:
            return 1
        for g in range(2, self.size):
            if self.multiplicative_order(g) == self.order:
                return g
        raise AssertionError("finite field without a generator")

    def artin_schreier_root(self, c: int) -> int | None:
        """A root y of y^2 + y = c, or None when trace(c) = 1.

        The other root is y + 1.  Solved as a GF(2)-linear system.
        """
        if self.trace(c):
            return None
        # rows: image of basis vector j under y -> y^2 + y, augmented with unit j
        rows = []
        for j in range(self.m):
            b = 1 << j
            rows.append((self.mul(b, b) ^ b, b))
        target, solution = c, 0
        pivots = []
        for img, pre in rows:
            for p_img, p_pre in pivots:
                if img ^ p_img < img:
                    img, pre = img ^ p_img, pre ^ p_pre
            if img:
                pivots.append((img, pre))
                pivots.sort(reverse=True)
        for p_img, p_pre in pivots:
            if target ^ p_img < target:
                target, solution = target ^ p_img, solution ^ p_pre
        if target:
            raise AssertionError("trace-zero element outside image of y^2 + y")
        return solution

    # -- iteration and sampling -----------------------------------------

    def elements(self):
        return range(self.size)

    def nonzero_elements(self):
        return range(1, self.size)

    def random_element(self, rng: random.Random | None = None, nonzero: bool = False) -> int:
        rng = rng or random
        lo = 1 if nonzero else 0
        return rng.randrange(lo, self.size)

    # -- vectorised arithmetic on uint64 arrays --------------------------

    def _tables(self):
        if self._reduce_tables is None:
            x_m = polymod(1 << self.m, self.modulus)
            tables = []
            for chunk in range((self.m + 7) // 8):
                table = np.array(
                    [self.mul(v << (8 * chunk), x_m) for v in range(256)], dtype=np.uint64
                )
                tables.append(table)
            self._reduce_tables = tables
        return self._reduce_tables

    def vreduce(self, product: np.ndarray) -> np.ndarray:
        """Reduce carry-less products of degree < 2m modulo the modulus."""
        m = np.uint64(self.m)
        high = product >> m
        out = product & np.uint64(self.mask)
        for chunk, table in enumerate(self._tables()):
            out ^= table[(high >> np.uint64(8 * chunk)) & np.uint64(0xFF)]
        return out

    def vmul(self, a: np.ndarray, b: np.ndarray | int) -> np.ndarray:
        """Elementwise product; ``b`` may be an array or a scalar."""
        a = np.asarray(a, dtype=np.uint64)
        acc = np.zeros(np.broadcast(a, np.asarray(b)).shape, dtype=np.uint64)
        if np.isscalar(b) or np.ndim(b) == 0:
            b = int(b)
            bit = 0
            while b:
                if b & 1:
                    acc ^= a << np.uint64(bit)
                b >>= 1
                bit += 1
        else:
            b = np.asarray(b, dtype=np.uint64)
            one = np.uint64(1)
            for bit in range(self.m):
                sel = (b >> np.uint64(bit)) & one
                acc ^= (a << np.uint64(bit)) * sel
        return self.vreduce(acc)

    def vpow(self, a: np.ndarray, e: int) -> np.ndarray:
        result = np.ones_like(np.asarray(a, dtype=np.uint64))
        base = np.asarray(a, dtype=np.uint64)
        while e:
            if e & 1:
                result = self.vmul(result, base)
            e >>= 1
            if e:
                base = self.vmul(base, base)
        return result

    def linear_functional_mask(self, c: int) -> int:
        """Bit mask M with trace(c*y) = parity(y & M) for every y."""
        return sum(self.trace(self.mul(c, 1 << k)) << k for k in range(self.m))

    def to_json(self) -> dict:
        return {"m": self.m, "modulus": self.modulus}


@lru_cache(maxsize=None)
def make_field(m: int) -> BinaryField:
    """GF(2^m) with the lexicographically smallest irreducible modulus.

    Moduli are scanned in increasing integer order among polynomials with
    nonzero constant term (so GF(2) gets x + 1), and the generator is the
    smallest integer of full multiplicative order.

    >>> bin(make_field(4).modulus)
    '0b10011'
    """
    if not isinstance(m, int) or not 1 <= m <= MAX_DEGREE:
        raise ValueError(f"extension degree must be in [1, {MAX_DEGREE}], got {m!r}")
    for poly in range((1 << m) | 1, 1 << (m + 1), 2):
        if is_irreducible(poly):
            return BinaryField(m, poly)
    raise AssertionError(f"no irreducible polynomial of degree {m}")


def field_from_json(data: dict) -> BinaryField:
    field = make_field(int(data["m"]))
    if "modulus" in data and int(data["modulus"]) != field.modulus:
        raise ValueError(
            f"modulus {data['modulus']} differs from the canonical modulus {field.modulus} "
            f"for m={field.m}"
        )
    return field


@dataclass(frozen=True)
class FieldElement:
    field: BinaryField
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < self.field.size:
            raise ValueError(f"{self.bits} is not an element of {self.field}")

    def _check(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError(f"mixing elements of {self.field} and {other.field}")
            return other.bits
        if isinstance(other, int) and other in (0, 1):
            return other
        return NotImplemented

    def __add__(self, other):
        b = self._check(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.bits ^ b)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        b = self._check(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.bits, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._check(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.bits, self.field.inv(b)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.bits, e))

    def __bool__(self):
        return self.bits != 0

    def __int__(self):
        return self.bits

    def __repr__(self):
        return f"{self.field.m}:{self.bits:#x}"


def _same_field(a: FieldElement, b: FieldElement) -> BinaryField:
    if a.field != b.field:
        raise ValueError(f"mixing elements of {a.field} and {b.field}")
    return a.field


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return FieldElement(_same_field(a, b), a.field.mul(a.bits, b.bits))


def inv(a: FieldElement) -> FieldElement:
    return FieldElement(a.field, a.field.inv(a.bits))


def sqrt(a: FieldElement) -> FieldElement:
    return FieldElement(a.field, a.field.sqrt(a.bits))


def trace(a: FieldElement) -> int:
    return a.field.trace(a.bits)


@lru_cache(maxsize=None)
def embedding_images(source: BinaryField, target: BinaryField) -> tuple[int, ...]:
    """Images of the source basis 1, X, ..., X^(e-1) in ``target``.

    X is sent to the root of the source modulus of the form
    g^(k (2^E - 1)/(2^e - 1)) with the smallest k >= 0, g the target
    generator.  When the source modulus is primitive with generator X this
    is the generator-to-generator-power map.
    """
    e, big = source.m, target.m
    if big % e:
        raise ValueError(f"GF(2^{e}) does not embed in GF(2^{big})")
    if source == target:
        return tuple(1 << j for j in range(e))
    step = target.pow(target.generator, target.order // source.order)
    coeffs = [(source.modulus >> j) & 1 for j in range(e + 1)]
    gamma = 1
    for _ in range(source.order):
        value = 0
        for c in reversed(coeffs):
            value = target.mul(value, gamma) ^ c
        if value == 0:
            images = [1]
            for _ in range(e - 1):
                images.append(target.mul(images[-1], gamma))
            return tuple(images)
        gamma = target.mul(gamma, step)
    raise AssertionError(f"{source} modulus has no root in {target}")


def embed_bits(a: int, source: BinaryField, target: BinaryField) -> int:
    images = embedding_images(source, target)
    out, j = 0, 0
    while a:
        if a & 1:
            out ^= images[j]
        a >>= 1
        j += 1
    return out


def embed(a: FieldElement, target: BinaryField) -> FieldElement:
    """Ring embedding GF(2^e) -> GF(2^(e n)) fixing GF(2)."""
    return FieldElement(target, embed_bits(a.bits, a.field, target))


def smallest_common_extension(*fields: BinaryField) -> BinaryField:
    m = 1
    for f in fields:
        m = m * f.m // gcd(m, f.m)
    return make_field(m)
