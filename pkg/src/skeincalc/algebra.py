"""Skein elements: linear combinations of basis curves and their product.

The product of two basis curves stacks the first factor above the second,
resolves every crossing and busy puncture, and collects the reduced
diagrams.  Structure constants are computed once per ordered pair in the
generic ring and cached on the surface, so specializations reuse them.
"""

from __future__ import annotations

from .coeffs import GENERIC, Coefficient, RingMode, Scalar
from .curves import MultiCurve, deg_V, empty_curve, engine_memo
from .diagrams import EngineError, resolve, superpose

__all__ = ["Skein", "mul", "pair_product", "normalize", "commutator",
           "threaded_power"]


def pair_product(a: MultiCurve, b: MultiCurve, rng=None) -> dict:
    """Structure constants of an ordered basis pair.

    Returns canonical-key -> generic Coefficient.  A seeded rng picks a
    different (equivalent) slot interleaving at superposition; those runs
    bypass the cache so tests can compare drawings.
    """
    surf = a.surf
    if surf is not b.surf:
        raise EngineError("factors live on different surfaces")
    cache = surf.__dict__.setdefault("_product_cache", {})
    pkey = (a.key, b.key)
    if rng is None and pkey in cache:
        return cache[pkey]
    d, pref = superpose(a.diagram(), b.diagram(), rng)
    result = {k: c * pref for k, c in resolve(d, engine_memo(surf)).items()}
    if rng is None:
        cache[pkey] = result
    return result


def _coerce(c, mode: RingMode) -> Coefficient:
    if isinstance(c, int):
        return Coefficient.from_scalar(Scalar.integer(c, mode))
    if isinstance(c, Scalar):
        c = Coefficient.from_scalar(c)
    if isinstance(c, Coefficient):
        if c.mode == mode:
            return c
        if c.mode.is_generic:
            return c.specialize(mode)
        raise EngineError(f"coefficient mode {c.mode} does not match {mode}")
    raise TypeError(f"cannot use {type(c).__name__} as a coefficient")


class Skein:
    """A finite linear combination of basis multicurves on one surface."""

    __slots__ = ("surf", "mode", "terms")

    def __init__(self, surf, mode: RingMode = GENERIC, terms=None):
        self.surf = surf
        self.mode = mode
        self.terms: dict[MultiCurve, Coefficient] = {}
        if terms:
            for mc, c in terms.items():
                if not c.is_zero():
                    self.terms[mc] = c

    @staticmethod
    def zero(surf, mode: RingMode = GENERIC) -> Skein:
        return Skein(surf, mode)

    @staticmethod
    def unit(surf, mode: RingMode = GENERIC) -> Skein:
        return Skein.of(empty_curve(surf), mode)

    @staticmethod
    def of(mc: MultiCurve, mode: RingMode = GENERIC, coeff=None) -> Skein:
        c = Coefficient.one(mode) if coeff is None else _coerce(coeff, mode)
        return Skein(mc.surf, mode, {mc: c})

    def _check(self, other: Skein) -> None:
        if self.surf is not other.surf:
            raise EngineError("skeins live on different surfaces")
        if self.mode != other.mode:
            raise EngineError(f"mode mismatch: {self.mode} vs {other.mode}")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, mc: MultiCurve) -> Coefficient:
        return self.terms.get(mc, Coefficient.zero(self.mode))

    def support(self) -> list[MultiCurve]:
        return sorted(self.terms, key=MultiCurve.sort_key)

    def leading_term(self):
        """The (curve, coefficient) pair maximal in coordinate order."""
        if not self.terms:
            raise EngineError("the zero skein has no leading term")
        mc = max(self.terms, key=MultiCurve.sort_key)
        return mc, self.terms[mc]

    def __add__(self, other: Skein) -> Skein:
        self._check(other)
        out = dict(self.terms)
        for mc, c in other.terms.items():
            tot = out[mc] + c if mc in out else c
            if tot.is_zero():
                out.pop(mc, None)
            else:
                out[mc] = tot
        return Skein(self.surf, self.mode, out)

    def __neg__(self) -> Skein:
        return Skein(self.surf, self.mode,
                     {mc: -c for mc, c in self.terms.items()})

    def __sub__(self, other: Skein) -> Skein:
        return self + (-other)

    def scale(self, c) -> Skein:
        cc = _coerce(c, self.mode)
        out = {}
        for mc, old in self.terms.items():
            new = old * cc
            if not new.is_zero():
                out[mc] = new
        return Skein(self.surf, self.mode, out)

    def __mul__(self, other):
        if isinstance(other, Skein):
            self._check(other)
            out: dict[MultiCurve, Coefficient] = {}
            for a, ca in self.terms.items():
                for b, cb in other.terms.items():
                    cab = ca * cb
                    for k, c in pair_product(a, b).items():
                        mc = MultiCurve.intern(self.surf, k)
                        add = c.specialize(self.mode) * cab
                        tot = out[mc] + add if mc in out else add
                        if tot.is_zero():
                            out.pop(mc, None)
                        else:
                            out[mc] = tot
            return Skein(self.surf, self.mode, out)
        if isinstance(other, (Coefficient, Scalar, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Coefficient, Scalar, int)):
            return self.scale(other)
        return NotImplemented

    def mul(self, other: Skein, rng=None) -> Skein:
        """Product with an optional seeded rng varying the superposition.

        Any seed yields the same element; the rng only picks a different
        (equivalent) drawing, which is what the robustness tests compare.
        """
        if rng is None:
            return self * other
        self._check(other)
        out: dict[MultiCurve, Coefficient] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                cab = ca * cb
                for k, c in pair_product(a, b, rng).items():
                    mc = MultiCurve.intern(self.surf, k)
                    add = c.specialize(self.mode) * cab
                    tot = out[mc] + add if mc in out else add
                    if tot.is_zero():
                        out.pop(mc, None)
                    else:
                        out[mc] = tot
        return Skein(self.surf, self.mode, out)

    def __pow__(self, k: int) -> Skein:
        if k < 0:
            raise EngineError("negative powers are not defined")
        acc = Skein.unit(self.surf, self.mode)
        for _ in range(k):
            acc = acc * self
        return acc

    def specialize(self, mode: RingMode) -> Skein:
        if mode == self.mode:
            return self
        if not self.mode.is_generic:
            raise EngineError("can only specialize from the generic ring")
        return Skein(self.surf, mode,
                     {mc: c.specialize(mode) for mc, c in self.terms.items()})

    def degree_vectors(self) -> set[tuple]:
        """All vertex degrees appearing among (curve, vertex-monomial) terms."""
        pidx = {v: i for i, v in enumerate(self.surf.punctures)}
        degs = set()
        for mc, coeff in self.terms.items():
            base = deg_V(mc)
            for vmono in coeff.split_by_vertex_monomial():
                d = list(base)
                for vid, k in vmono:
                    d[pidx[vid]] -= 2 * k
                degs.add(tuple(d))
        return degs

    @property
    def is_homogeneous(self) -> bool:
        return len(self.degree_vectors()) <= 1

    def __eq__(self, other) -> bool:
        return (isinstance(other, Skein) and other.surf is self.surf
                and other.mode == self.mode and other.terms == self.terms)

    def __hash__(self):
        return hash((self.mode, frozenset(self.terms.items())))

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for mc in self.support():
            bits.append(f"({self.terms[mc]}) * {mc.describe()}")
        return " + ".join(bits)

    def __repr__(self):
        return f"<skein {self} on {self.surf.name} [{self.mode}]>"


def mul(a: Skein, b: Skein, rng=None) -> Skein:
    """Module-level spelling of Skein.mul."""
    return a.mul(b, rng)


def normalize(d, mode: RingMode = GENERIC) -> Skein:
    """Canonical form of a diagram that may violate reducedness.

    Reconnects punctures carrying two strand ends, removes turnbacks and
    trivial loops or arcs, and collects the surviving reduced diagrams.
    """
    surf = d.surf
    out = resolve(d.copy(), engine_memo(surf))
    return Skein(surf, mode,
                 {MultiCurve.intern(surf, k): c.specialize(mode)
                  for k, c in out.items()})


def commutator(a: Skein, b: Skein) -> Skein:
    return a * b - b * a


def threaded_power(mc: MultiCurve, poly, mode: RingMode = GENERIC) -> Skein:
    """Evaluate an integer polynomial at a basis curve.

    poly[k] is the coefficient of x^k.  For simple curves (every basis
    curve is one) threading along the framing is plain powering, so the
    polynomial may be evaluated with the algebra product directly.
    """
    x = Skein.of(mc, mode)
    out = Skein.zero(mc.surf, mode)
    acc = Skein.unit(mc.surf, mode)
    for k, c in enumerate(poly):
        if c:
            out = out + acc.scale(c)
        if k + 1 < len(poly):
            acc = acc * x
    return out
