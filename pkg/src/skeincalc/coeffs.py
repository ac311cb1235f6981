"""Exact coefficient arithmetic for skein computations.

The base ring is Z[s, s^-1] where s stands for q^(1/2), so q = s^2 and
half-integer powers of q are honest monomials.  A root-of-unity mode
works in Z[q]/(Phi_n(q)) for odd n >= 3, where Phi_n is the n-th
cyclotomic polynomial; there s specializes to q^((n+1)/2), the standard
square root of q when q is a primitive n-th root of unity.

On top of the scalar ring sit coefficients carrying formal invertible
vertex variables, one per interior puncture, because reconnecting a
strand at a puncture weighs the result by the inverse of that vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


@dataclass(frozen=True)
class RingMode:
    """Either the generic ring (order None) or an odd root-of-unity mode."""

    order: int | None

    def __post_init__(self) -> None:
        if self.order is not None and (self.order < 3 or self.order % 2 == 0):
            raise ValueError("root-of-unity order must be odd and >= 3")

    @property
    def is_generic(self) -> bool:
        return self.order is None

    def __str__(self) -> str:
        return "generic" if self.order is None else f"root:{self.order}"


GENERIC = RingMode(None)


def root_of_unity(n: int) -> RingMode:
    return RingMode(n)


def _poly_div_exact(num: list[int], den: tuple[int, ...]) -> list[int]:
    """Exact division of dense integer polynomials, constant term first.

    The divisor must be monic and divide the numerator.
    """
    work = list(num)
    dd = len(den) - 1
    out = [0] * (len(work) - dd)
    for i in range(len(work) - 1, dd - 1, -1):
        c = work[i]
        if c:
            out[i - dd] = c
            for j, a in enumerate(den):
                work[i - dd + j] -= c * a
    if any(work):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, constant term first.

    Computed by dividing x^n - 1 by Phi_d for every proper divisor d.
    """
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_div_exact(poly, cyclotomic(d))
    return tuple(poly)


def euler_phi(n: int) -> int:
    return len(cyclotomic(n)) - 1


def reduce_mod_cyclotomic(coeffs, n: int) -> tuple[int, ...]:
    """Reduce a dense q-polynomial (constant term first) modulo Phi_n."""
    phi = cyclotomic(n)
    deg = len(phi) - 1
    work = list(coeffs)
    if len(work) < deg:
        work += [0] * (deg - len(work))
    for i in range(len(work) - 1, deg - 1, -1):
        c = work[i]
        if not c:
            continue
        work[i] = 0
        for j in range(deg):
            work[i - deg + j] -= c * phi[j]
    return tuple(work[:deg])


@lru_cache(maxsize=None)
def _q_power_table(n: int) -> dict[tuple[int, ...], int]:
    """Map from the reduced representation of q^j to j, for 0 <= j < n."""
    table = {}
    for j in range(n):
        rep = reduce_mod_cyclotomic([0] * j + [1], n)
        table[rep] = j
    return table


class Scalar:
    """An element of the coefficient ring in a fixed mode.

    Generic mode stores a sorted tuple of (exponent of s, integer)
    pairs with no zero entries.  Root mode of order n stores a dense
    integer tuple of length phi(n) over the basis 1, q, ..., q^(phi(n)-1).
    """

    __slots__ = ("mode", "rep")

    def __init__(self, mode: RingMode, rep: tuple):
        self.mode = mode
        self.rep = rep

    @staticmethod
    def zero(mode: RingMode) -> Scalar:
        if mode.is_generic:
            return Scalar(mode, ())
        return Scalar(mode, (0,) * euler_phi(mode.order))

    @staticmethod
    def integer(k: int, mode: RingMode) -> Scalar:
        return Scalar.s_power(0, mode, coeff=k)

    @staticmethod
    def one(mode: RingMode) -> Scalar:
        return Scalar.integer(1, mode)

    @staticmethod
    def s_power(e: int, mode: RingMode, coeff: int = 1) -> Scalar:
        """coeff * s^e, where s = q^(1/2)."""
        if coeff == 0:
            return Scalar.zero(mode)
        if mode.is_generic:
            return Scalar(mode, ((e, coeff),))
        n = mode.order
        j = (e * ((n + 1) // 2)) % n
        return Scalar(mode, reduce_mod_cyclotomic([0] * j + [coeff], n))

    @staticmethod
    def q_power(k: int, mode: RingMode, coeff: int = 1) -> Scalar:
        return Scalar.s_power(2 * k, mode, coeff=coeff)

    def _check(self, other: Scalar) -> None:
        if self.mode != other.mode:
            raise ValueError(f"mode mismatch: {self.mode} vs {other.mode}")

    def __add__(self, other: Scalar) -> Scalar:
        self._check(other)
        if self.mode.is_generic:
            acc = dict(self.rep)
            for e, c in other.rep:
                c2 = acc.get(e, 0) + c
                if c2:
                    acc[e] = c2
                else:
                    acc.pop(e, None)
            return Scalar(self.mode, tuple(sorted(acc.items())))
        return Scalar(self.mode, tuple(a + b for a, b in zip(self.rep, other.rep)))

    def __neg__(self) -> Scalar:
        if self.mode.is_generic:
            return Scalar(self.mode, tuple((e, -c) for e, c in self.rep))
        return Scalar(self.mode, tuple(-a for a in self.rep))

    def __sub__(self, other: Scalar) -> Scalar:
        return self + (-other)

    def __mul__(self, other: Scalar) -> Scalar:
        self._check(other)
        if self.mode.is_generic:
            acc: dict[int, int] = {}
            for e1, c1 in self.rep:
                for e2, c2 in other.rep:
                    e = e1 + e2
                    c = acc.get(e, 0) + c1 * c2
                    if c:
                        acc[e] = c
                    else:
                        del acc[e]
            return Scalar(self.mode, tuple(sorted(acc.items())))
        n = self.mode.order
        a, b = self.rep, other.rep
        conv = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        return Scalar(self.mode, reduce_mod_cyclotomic(conv, n))

    def __pow__(self, k: int) -> Scalar:
        if k < 0:
            raise ValueError("negative scalar powers are only defined for unit monomials")
        out = Scalar.one(self.mode)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        if self.mode.is_generic:
            return not self.rep
        return not any(self.rep)

    def specialize(self, mode: RingMode) -> Scalar:
        """Apply the ring map sending s to q^((n+1)/2) at a root of unity."""
        if mode == self.mode:
            return self
        if not self.mode.is_generic:
            raise ValueError("can only specialize from the generic mode")
        out = Scalar.zero(mode)
        for e, c in self.rep:
            out = out + Scalar.s_power(e, mode, coeff=c)
        return out

    def as_signed_s_power(self):
        """Return (sign, e) if this scalar equals sign * s^e, else None.

        In a root mode the exponent returned is even, i.e. a plain power
        of q, since powers of s and of q coincide there.
        """
        if self.mode.is_generic:
            if len(self.rep) == 1 and self.rep[0][1] in (1, -1):
                e, c = self.rep[0]
                return (c, e)
            return None
        table = _q_power_table(self.mode.order)
        j = table.get(self.rep)
        if j is not None:
            return (1, 2 * j)
        j = table.get(tuple(-a for a in self.rep))
        if j is not None:
            return (-1, 2 * j)
        return None

    def unit_inverse(self) -> Scalar:
        """Inverse of a scalar of the form +-s^e."""
        se = self.as_signed_s_power()
        if se is None:
            raise ArithmeticError("not an invertible monomial")
        sign, e = se
        return Scalar.s_power(-e, self.mode, coeff=sign)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.mode == other.mode and self.rep == other.rep

    def __hash__(self) -> int:
        return hash((self.mode, self.rep))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        if self.mode.is_generic:
            parts = []
            for e, c in sorted(self.rep, reverse=True):
                parts.append(_term_str(c, _q_base_str(e), first=not parts))
            return "".join(parts)
        parts = []
        for j in range(len(self.rep) - 1, -1, -1):
            c = self.rep[j]
            if not c:
                continue
            base = "1" if j == 0 else ("q" if j == 1 else f"q^{j}")
            parts.append(_term_str(c, base, first=not parts))
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Scalar({self.mode}, {self})"


def _q_base_str(e: int) -> str:
    """Render s^e as a power of q."""
    if e == 0:
        return "1"
    if e % 2 == 0:
        k = e // 2
        return "q" if k == 1 else f"q^{k}"
    return f"q^({e}/2)"


def _term_str(c: int, base: str, first: bool) -> str:
    sign = "-" if c < 0 else "+"
    mag = abs(c)
    if base == "1":
        body = str(mag)
    elif mag == 1:
        body = base
    else:
        body = f"{mag}*{base}"
    if first:
        return body if c > 0 else "-" + body
    return f" {sign} {body}"


def _vmono_mul(a: tuple, b: tuple) -> tuple:
    acc = dict(a)
    for vid, e in b:
        e2 = acc.get(vid, 0) + e
        if e2:
            acc[vid] = e2
        else:
            del acc[vid]
    return tuple(sorted(acc.items()))


def vmono_str(vmono: tuple) -> str:
    if not vmono:
        return "1"
    return "*".join(vid if e == 1 else f"{vid}^{e}" for vid, e in vmono)


class Coefficient:
    """Scalar-linear combination of monomials in the vertex variables.

    The representation is a sorted tuple of (vmono, Scalar) pairs where
    vmono is a sorted tuple of (vertex id, nonzero exponent) pairs.
    """

    __slots__ = ("mode", "rep")

    def __init__(self, mode: RingMode, rep: tuple):
        self.mode = mode
        self.rep = rep

    @staticmethod
    def zero(mode: RingMode) -> Coefficient:
        return Coefficient(mode, ())

    @staticmethod
    def from_scalar(sc: Scalar) -> Coefficient:
        if sc.is_zero():
            return Coefficient.zero(sc.mode)
        return Coefficient(sc.mode, (((), sc),))

    @staticmethod
    def one(mode: RingMode) -> Coefficient:
        return Coefficient.from_scalar(Scalar.one(mode))

    @staticmethod
    def vertex(vid: str, mode: RingMode, exp: int = 1) -> Coefficient:
        if exp == 0:
            return Coefficient.one(mode)
        return Coefficient(mode, ((((vid, exp),), Scalar.one(mode)),))

    def _check(self, other: Coefficient) -> None:
        if self.mode != other.mode:
            raise ValueError(f"mode mismatch: {self.mode} vs {other.mode}")

    def __add__(self, other: Coefficient) -> Coefficient:
        self._check(other)
        acc = dict(self.rep)
        for vm, sc in other.rep:
            sc2 = acc[vm] + sc if vm in acc else sc
            if sc2.is_zero():
                acc.pop(vm, None)
            else:
                acc[vm] = sc2
        return Coefficient(self.mode, tuple(sorted(acc.items())))

    def __neg__(self) -> Coefficient:
        return Coefficient(self.mode, tuple((vm, -sc) for vm, sc in self.rep))

    def __sub__(self, other: Coefficient) -> Coefficient:
        return self + (-other)

    def __mul__(self, other) -> Coefficient:
        if isinstance(other, Scalar):
            other = Coefficient.from_scalar(other)
        elif isinstance(other, int):
            other = Coefficient.from_scalar(Scalar.integer(other, self.mode))
        self._check(other)
        acc: dict[tuple, Scalar] = {}
        for vm1, sc1 in self.rep:
            for vm2, sc2 in other.rep:
                vm = _vmono_mul(vm1, vm2)
                sc = sc1 * sc2
                if vm in acc:
                    sc = acc[vm] + sc
                if sc.is_zero():
                    acc.pop(vm, None)
                else:
                    acc[vm] = sc
        return Coefficient(self.mode, tuple(sorted(acc.items())))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Coefficient:
        if k < 0:
            raise ValueError("negative coefficient powers are only defined for unit monomials")
        out = Coefficient.one(self.mode)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.rep

    def specialize(self, mode: RingMode) -> Coefficient:
        if mode == self.mode:
            return self
        rep = tuple((vm, sc.specialize(mode)) for vm, sc in self.rep)
        return Coefficient(mode, tuple((vm, sc) for vm, sc in rep if not sc.is_zero()))

    def split_by_vertex_monomial(self) -> dict[tuple, Scalar]:
        return dict(self.rep)

    def as_unit_monomial(self):
        """Return (vmono, sign, e) if this is +-s^e times one vertex monomial."""
        if len(self.rep) != 1:
            return None
        vm, sc = self.rep[0]
        se = sc.as_signed_s_power()
        if se is None:
            return None
        return (vm, se[0], se[1])

    def unit_inverse(self) -> Coefficient:
        um = self.as_unit_monomial()
        if um is None:
            raise ArithmeticError("not an invertible monomial")
        vm, sign, e = um
        inv_vm = tuple(sorted((vid, -x) for vid, x in vm))
        return Coefficient(self.mode, ((inv_vm, Scalar.s_power(-e, self.mode, coeff=sign)),))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Coefficient):
            return NotImplemented
        return self.mode == other.mode and self.rep == other.rep

    def __hash__(self) -> int:
        return hash((self.mode, self.rep))

    def __str__(self) -> str:
        if not self.rep:
            return "0"
        parts = []
        for vm, sc in self.rep:
            if not vm:
                parts.append(str(sc))
                continue
            vs = vmono_str(vm)
            if sc == Scalar.one(self.mode):
                parts.append(vs)
            elif sc == Scalar.integer(-1, self.mode):
                parts.append(f"-{vs}")
            elif len(sc.rep) == 1 or (not sc.mode.is_generic and sum(1 for a in sc.rep if a) == 1):
                parts.append(f"{sc}*{vs}")
            else:
                parts.append(f"({sc})*{vs}")
        out = parts[0]
        for p in parts[1:]:
            if p.startswith("-"):
                out += " - " + p[1:]
            else:
                out += " + " + p
        return out

    def __repr__(self) -> str:
        return f"Coefficient({self.mode}, {self})"
