"""Exact arithmetic in GF(p^s).

Field elements are plain ints in ``range(q)``: the base-p digits of the int
are the coefficients (low degree first) of the element written in the basis
``1, x, ..., x^(s-1)`` of ``F_p[x]/(modulus)``.  Scalar operations live on
:class:`GF`; the ``v*`` methods are the numpy-vectorised versions used by the
linear algebra layer.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

MAX_DEGREE = 16
MAX_ORDER = 2**31
_TABLE_LIMIT = 2**22
_ADD_TABLE_LIMIT = 1024


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorisation; fine for the group orders in scope."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def multiplicative_order(a: int, n: int) -> int:
    if math.gcd(a, n) != 1:
        raise FieldError(f"{a} is not a unit mod {n}")
    if n == 1:
        return 1
    order = 1
    x = a % n
    while x != 1:
        x = (x * a) % n
        order += 1
    return order


def splitting_degree(p: int, e: int) -> int:
    """Least s with e | p^s - 1, i.e. GF(p^s) holds all e-th roots of unity."""
    if e < 1:
        raise FieldError("e must be positive")
    if math.gcd(e, p) != 1:
        raise FieldError(f"gcd({e}, {p}) != 1")
    return multiplicative_order(p, e)


# --- polynomials over F_p as low-first coefficient lists (used for moduli) ---

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = (a[-1] * inv_lead) % p
        shift = len(a) - len(m)
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _pmulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(out, m, p)


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _x_pow_mod(e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod([0, 1], m, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Irreducibility of a monic polynomial over F_p (low-first coefficients)."""
    m = list(poly)
    s = len(m) - 1
    if s == 1:
        return True
    if m[0] == 0:
        return False
    if any(sum(c * pow(r, i, p) for i, c in enumerate(m)) % p == 0 for r in range(p)):
        return False
    for d in range(1, s):
        if s % d:
            continue
        h = _x_pow_mod(p**d, m, p)
        h = h + [0] * (2 - len(h)) if len(h) < 2 else h
        h[1] = (h[1] - 1) % p
        if len(_pgcd(m, _trim(h), p)) > 1:
            return False
    # x^(p^s) == x mod m
    h = _x_pow_mod(p**s, m, p)
    return _trim(h) == [0, 1]


def least_irreducible(p: int, s: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree s, low-first order."""
    if s == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=s):
        poly = tuple(low) + (1,)
        if is_irreducible(poly, p):
            return poly
    raise FieldError(f"no irreducible of degree {s} over F_{p}")  # pragma: no cover


@dataclass(frozen=True, eq=False)
class GF:
    """The finite field GF(p^s) with its canonical modulus."""

    p: int
    s: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.s

    @property
    def is_prime_field(self) -> bool:
        return self.s == 1

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GF) and (self.p, self.s) == (other.p, other.s)

    def __hash__(self) -> int:
        return hash((self.p, self.s))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.s})" if self.s > 1 else f"GF({self.p})"

    # -- encoding -------------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.s):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        if len(coeffs) > self.s:
            coeffs = _pmod(list(coeffs), list(self.modulus), self.p)
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p inside the field."""
        return n % self.p

    def check(self, a: int) -> None:
        if not 0 <= a < self.q:
            raise FieldError(f"{a} is not an element of {self}")

    # -- scalar arithmetic ----------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.s == 1:
            return (a + b) % self.p
        return self.from_coeffs([x + y for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def neg(self, a: int) -> int:
        if self.s == 1:
            return (-a) % self.p
        return self.from_coeffs([-x for x in self.coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.s == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        if self._tables is not None:
            exp, log = self._tables
            return int(exp[log[a] + log[b]])
        return self.from_coeffs(
            _pmulmod(_trim(list(self.coeffs(a))), _trim(list(self.coeffs(b))), list(self.modulus), self.p)
        )

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in {self}")
        if self.s == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def element_order(self, a: int) -> int:
        if a == 0:
            raise FieldError("zero has no multiplicative order")
        n = self.q - 1
        for ell in factorize(n):
            while n % ell == 0 and self.pow(a, n // ell) == 1:
                n //= ell
        return n

    @functools.cached_property
    def primitive_element(self) -> int:
        for g in range(1, self.q):
            if self.element_order(g) == self.q - 1:
                return g
        raise FieldError("no primitive element")  # pragma: no cover

    def root_of_unity(self, e: int) -> int:
        """A primitive e-th root of unity (canonical: a power of the primitive element)."""
        if (self.q - 1) % e:
            raise FieldError(f"{self} has no primitive {e}-th root of unity")
        return self.pow(self.primitive_element, (self.q - 1) // e)

    def positive(self, a: int) -> bool:
        """True for the integer-smaller member of each pair {a, -a}."""
        return a <= self.neg(a)

    # -- vectorised arithmetic ------------------------------------------

    @functools.cached_property
    def _tables(self):
        if self.s == 1 or self.q > _TABLE_LIMIT:
            return None
        q = self.q
        g = None
        # primitive element without recursing through the table-based mul
        m = list(self.modulus)
        for cand in range(2, q):
            c = _trim(list(self.coeffs(cand)))
            n = q - 1
            ok = True
            for ell in factorize(n):
                e = n // ell
                r, b = [1], c
                while e:
                    if e & 1:
                        r = _pmulmod(r, b, m, self.p)
                    b = _pmulmod(b, b, m, self.p)
                    e >>= 1
                if r == [1]:
                    ok = False
                    break
            if ok:
                g = c
                break
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        cur = [1]
        for i in range(q - 1):
            v = self.from_coeffs(cur)
            exp[i] = v
            log[v] = i
            cur = _pmulmod(cur, g, m, self.p)
        exp[q - 1:] = exp[: q - 1]
        return exp, log

    @functools.cached_property
    def _powers(self) -> np.ndarray:
        return np.array([self.p**i for i in range(self.s)], dtype=np.int64)

    @functools.cached_property
    def _add_table(self):
        if self.s == 1 or self.q > _ADD_TABLE_LIMIT:
            return None
        r = np.arange(self.q, dtype=np.int64)
        return self._digit_add(r[:, None], r[None, :])

    def _digits(self, a: np.ndarray) -> np.ndarray:
        return (a[..., None] // self._powers) % self.p

    def _undigits(self, d: np.ndarray) -> np.ndarray:
        return (d % self.p) @ self._powers

    def _digit_add(self, a, b):
        return self._undigits(self._digits(a) + self._digits(b))

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.s == 1:
            return (a + b) % self.p
        t = self._add_table
        if t is not None:
            return t[a, b]
        return self._digit_add(a, b)

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.s == 1:
            return (-a) % self.p
        return self._undigits(-self._digits(a))

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.s == 1:
            return (a * b) % self.p
        tables = self._tables
        if tables is None:
            return np.vectorize(self.mul, otypes=[np.int64])(a, b)
        exp, log = tables
        out = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vsum(self, a, axis=None):
        a = np.asarray(a, dtype=np.int64)
        if self.s == 1:
            return a.sum(axis=axis) % self.p
        d = self._digits(a)
        if axis is None:
            return int(self._undigits(d.reshape(-1, self.s).sum(axis=0)))
        axis = axis % a.ndim
        return self._undigits(d.sum(axis=axis))

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        if self.s == 1:
            return np.vectorize(lambda x: pow(int(x), self.p - 2, self.p), otypes=[np.int64])(a)
        tables = self._tables
        if tables is None:
            return np.vectorize(self.inv, otypes=[np.int64])(a)
        exp, log = tables
        return exp[(self.q - 1 - log[a]) % (self.q - 1)]

    def vmatmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.s == 1:
            if a.shape[-1] * (self.p - 1) ** 2 < 2**62:
                return (a @ b) % self.p
            return ((a.astype(object) @ b.astype(object)) % self.p).astype(np.int64)
        if a.ndim != 2 or b.ndim != 2:
            return self.vsum(self.vmul(a[..., :, :, None], b[..., None, :, :]), axis=-2)
        # digit planes: (sum_i A_i x^i)(sum_j B_j x^j), reduced through x^(i+j) mod modulus
        ad = self._digits(a)
        bd = self._digits(b)
        if a.shape[1] * self.s * (self.p - 1) ** 3 >= 2**62:
            return self.vsum(self.vmul(a[:, :, None], b[None, :, :]), axis=1)
        t = np.einsum("nmi,ijc->nmjc", ad, self._reduction)
        out = np.einsum("nmjc,mkj->nkc", t, bd, optimize=True)
        return self._undigits(out)

    @functools.cached_property
    def _reduction(self) -> np.ndarray:
        """R[i, j, c]: coefficient of x^c in x^(i+j) mod the modulus."""
        s, p = self.s, self.p
        m = list(self.modulus)
        r = np.zeros((s, s, s), dtype=np.int64)
        for i in range(s):
            for j in range(s):
                red = _pmod([0] * (i + j) + [1], m, p)
                for c, v in enumerate(red):
                    r[i, j, c] = v
        return r


@functools.lru_cache(maxsize=None)
def field_create(p: int, s: int = 1) -> GF:
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if not 1 <= s <= MAX_DEGREE:
        raise FieldError(f"extension degree {s} outside [1, {MAX_DEGREE}]")
    if p**s > MAX_ORDER:
        raise FieldError(f"field order {p}^{s} exceeds 2^31")
    return GF(p, s, least_irreducible(p, s))


@dataclass(frozen=True)
class Scalar:
    """A field element bundled with its field, for readable scalar code."""

    field: GF
    value: int

    def __post_init__(self):
        self.field.check(self.value)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.value)

    def _other(self, other) -> int:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldError(f"field mismatch: {self.field} vs {other.field}")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._other(other)))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * Scalar(self.field, self.field.inv(self._other(other)))

    def __pow__(self, e: int):
        return Scalar(self.field, self.field.pow(self.value, e))

    def inv(self):
        return Scalar(self.field, self.field.inv(self.value))

    def __bool__(self):
        return self.value != 0


def scalar(field: GF, coeffs) -> Scalar:
    return Scalar(field, field.from_coeffs(list(coeffs)))


def field_arithmetic(a: Scalar, b: Scalar | None, op: str) -> Scalar:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    if op == "pow":
        if not isinstance(b, int):
            raise TypeError("pow takes an integer exponent")
        return a**b
    raise ValueError(f"unknown op {op!r}")


# --- polynomials over an arbitrary GF, low-first lists of field ints ------

def poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(F: GF, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return poly_trim(out)


def poly_divmod(F: GF, a, b):
    a = poly_trim(a)
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = F.inv(b[-1])
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = F.mul(a[-1], inv_lead)
        shift = len(a) - len(b)
        quot[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] = F.sub(a[shift + i], F.mul(c, bc))
        a = poly_trim(a)
    return poly_trim(quot), a


def poly_monic(F: GF, a):
    a = poly_trim(a)
    if not a:
        return a
    c = F.inv(a[-1])
    return [F.mul(c, x) for x in a]


def poly_gcd(F: GF, a, b):
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_divmod(F, a, b)[1]
    return poly_monic(F, a)


def poly_lcm(F: GF, a, b):
    g = poly_gcd(F, a, b)
    return poly_monic(F, poly_divmod(F, poly_mul(F, a, b), g)[0])


def poly_derivative(F: GF, a):
    return poly_trim([F.mul(F.from_int(i), c) for i, c in enumerate(a)][1:])
