"""Exact scalar tower: rationals, Gaussian rationals, one quadratic extension,
prime fields, and approximate complex values.

Exact kinds decide zero-ness exactly; the approximate kind exists only for the
numeric witness search and never feeds a classification predicate.  Arithmetic
never coerces between field descriptors silently — lifting into an extension
is an explicit call.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import BadPrime, DivisionByZero, FieldMismatch, SecondExtensionRequired

RatLike = Union[int, Fraction]


def _frac(x: RatLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not a rational value: {x!r}")


def rational_sqrt(f: Fraction) -> Optional[Fraction]:
    """Exact nonnegative square root of a nonnegative rational, or None."""
    if f < 0:
        return None
    num, den = f.numerator, f.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


class Qi:
    """Gaussian rational re + im*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re: RatLike = 0, im: RatLike = 0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("Qi is immutable")

    # -- constructors -------------------------------------------------
    @classmethod
    def i(cls) -> "Qi":
        return cls(0, 1)

    @classmethod
    def parse(cls, text: str) -> "Qi":
        return parse_scalar(text)

    # -- predicates ---------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_rational(self) -> bool:
        return self.im == 0

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "Qi":
        if isinstance(other, Qi):
            return other
        if isinstance(other, (int, Fraction)):
            return Qi(other)
        if isinstance(other, Quad):
            raise FieldMismatch("Gaussian rational mixed with extension scalar; lift explicitly")
        if isinstance(other, Fp):
            raise FieldMismatch("Gaussian rational mixed with prime-field scalar")
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Qi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Qi(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Qi(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Qi(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise DivisionByZero("division by zero Gaussian rational")
        return Qi((self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__truediv__(self)

    def __neg__(self):
        return Qi(-self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Qi(other)
        if not isinstance(other, Qi):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash(("Qi", self.re, self.im))

    def conj(self) -> "Qi":
        return Qi(self.re, -self.im)

    def norm(self) -> Fraction:
        """re^2 + im^2 as an exact rational."""
        return self.re * self.re + self.im * self.im

    def __repr__(self):
        return f"Qi({self.re}, {self.im})"

    def __str__(self):
        return format_scalar(self)

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))


ZERO = Qi(0)
ONE = Qi(1)
I_UNIT = Qi(0, 1)


def qi_sqrt(x: Qi) -> Optional[Qi]:
    """The Gaussian-rational square root of x if one exists, else None.

    Of the two roots the returned one has (re, im) lexicographically >= (0, 0).
    """
    if x.is_zero:
        return ZERO
    if x.im == 0:
        if x.re > 0:
            r = rational_sqrt(x.re)
            return Qi(r) if r is not None else None
        r = rational_sqrt(-x.re)
        return Qi(0, r) if r is not None else None
    m = rational_sqrt(x.norm())
    if m is None:
        return None
    c2 = (x.re + m) / 2
    c = rational_sqrt(c2)
    if c is None or c == 0:
        return None
    return Qi(c, x.im / (2 * c))


class Quad:
    """Element a + b*sqrt(d) of the quadratic extension of the Gaussian
    rationals by a fixed non-square radicand d."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Qi, b: Qi, d: Qi):
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Quad is immutable")

    @classmethod
    def lift(cls, x: Union[Qi, int, Fraction], d: Qi) -> "Quad":
        """Embed a Gaussian rational into the extension with radicand d."""
        if isinstance(x, (int, Fraction)):
            x = Qi(x)
        return cls(x, ZERO, d)

    @classmethod
    def root(cls, d: Qi) -> "Quad":
        """The adjoined square root itself."""
        return cls(ZERO, ONE, d)

    @property
    def is_zero(self) -> bool:
        return self.a.is_zero and self.b.is_zero

    def _coerce(self, other) -> "Quad":
        if isinstance(other, Quad):
            if other.d != self.d:
                raise FieldMismatch("extension scalars with different radicands")
            return other
        if isinstance(other, (int, Fraction)):
            return Quad.lift(Qi(other), self.d)
        if isinstance(other, (Qi, Fp)):
            raise FieldMismatch("extension scalar mixed with another field; lift explicitly")
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Quad(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Quad(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Quad(o.a - self.a, o.b - self.b, self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Quad(self.a * o.a + self.b * o.b * self.d, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero:
            raise DivisionByZero("division by zero extension scalar")
        # multiply by the conjugate; the norm a^2 - b^2 d is a nonzero Qi
        # because d is not a square in Q(i)
        nrm = o.a * o.a - o.b * o.b * o.d
        num = self * Quad(o.a, -o.b, self.d)
        return Quad(num.a / nrm, num.b / nrm, self.d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__truediv__(self)

    def __neg__(self):
        return Quad(-self.a, -self.b, self.d)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Quad.lift(Qi(other), self.d)
        if isinstance(other, Qi):
            return self.b.is_zero and self.a == other
        if not isinstance(other, Quad):
            return NotImplemented
        return self.d == other.d and self.a == other.a and self.b == other.b

    def __hash__(self):
        if self.b.is_zero:
            return hash(("Qi", self.a.re, self.a.im))
        return hash(("Quad", self.a, self.b, self.d))

    def as_qi(self) -> Qi:
        """Project back to Q(i); valid only when the radical part vanishes."""
        if not self.b.is_zero:
            raise FieldMismatch("scalar genuinely lives in the extension")
        return self.a

    def __repr__(self):
        return f"Quad({self.a!r}, {self.b!r}, d={self.d!r})"

    def to_complex(self) -> complex:
        return self.a.to_complex() + self.b.to_complex() * cmath.sqrt(self.d.to_complex())


def sqrt_adjoin(x: Qi) -> Union[Qi, Quad]:
    """A square root of a nonzero Gaussian rational.

    Stays in Q(i) when x is a perfect square there (deterministic branch:
    leading coefficient (re, im) lexicographically >= (0, 0)); otherwise the
    result is the generator of Q(i)(sqrt(x)).
    """
    if isinstance(x, Quad):
        raise SecondExtensionRequired("square root of an extension scalar")
    if x.is_zero:
        raise DivisionByZero("sqrt_adjoin of zero")
    r = qi_sqrt(x)
    if r is not None:
        return r
    return Quad.root(x)


class Fp:
    """Residue val mod a fixed prime p."""

    __slots__ = ("val", "p")

    def __init__(self, val: int, p: int):
        object.__setattr__(self, "val", val % p)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("Fp is immutable")

    @property
    def is_zero(self) -> bool:
        return self.val == 0

    def _coerce(self, other) -> "Fp":
        if isinstance(other, Fp):
            if other.p != self.p:
                raise FieldMismatch(f"prime fields F_{self.p} and F_{other.p}")
            return other
        if isinstance(other, int):
            return Fp(other, self.p)
        if isinstance(other, (Qi, Quad)):
            raise FieldMismatch("prime-field scalar mixed with characteristic-zero scalar")
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(self.val + o.val, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(self.val - o.val, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(o.val - self.val, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(self.val * o.val, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.val == 0:
            raise DivisionByZero(f"division by zero in F_{self.p}")
        return Fp(self.val * pow(o.val, self.p - 2, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__truediv__(self)

    def __neg__(self):
        return Fp(-self.val, self.p)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Fp(other, self.p)
        if not isinstance(other, Fp):
            return NotImplemented
        return self.p == other.p and self.val == other.val

    def __hash__(self):
        return hash(("Fp", self.p, self.val))

    def __repr__(self):
        return f"Fp({self.val}, p={self.p})"


def sqrt_mod(a: int, p: int) -> Optional[int]:
    """Smallest square root of a modulo the prime p, or None."""
    a %= p
    for r in range(p):
        if r * r % p == a:
            return r
    return None


def reduce_qi_mod(x: Qi, p: int) -> Fp:
    """Reduce a Gaussian rational mod p; i maps to the smallest root of -1."""
    def red(f: Fraction) -> int:
        if f.denominator % p == 0:
            raise BadPrime(f"denominator of {f} divisible by {p}")
        return f.numerator * pow(f.denominator, p - 2, p) % p

    re = red(x.re)
    if x.im == 0:
        return Fp(re, p)
    if p % 4 != 1:
        raise BadPrime(f"imaginary part present but -1 is not a square mod {p}")
    i_p = sqrt_mod(p - 1, p)
    assert i_p is not None
    return Fp(re + red(x.im) * i_p, p)


Scalar = Union[Qi, Quad, Fp, complex]


# ---------------------------------------------------------------------------
# field descriptors


@dataclass(frozen=True)
class FieldDescriptor:
    """Names the scalar domain an algebra's coefficients live in."""

    kind: str  # "Q" | "Qi" | "Qi_sqrt" | "Fp" | "approx"
    d: Optional[Qi] = None
    p: Optional[int] = None
    tolerance: float = 0.0

    def __post_init__(self):
        if self.kind not in ("Q", "Qi", "Qi_sqrt", "Fp", "approx"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "Qi_sqrt" and self.d is None:
            raise ValueError("Qi_sqrt descriptor needs a radicand")
        if self.kind == "Fp" and not self.p:
            raise ValueError("Fp descriptor needs a prime")
        if self.kind != "approx" and self.tolerance != 0.0:
            raise ValueError("tolerance only applies to the approximate kind")

    @property
    def exact(self) -> bool:
        return self.kind != "approx"

    def zero(self) -> Scalar:
        return self.coerce(0)

    def one(self) -> Scalar:
        return self.coerce(1)

    def coerce(self, x) -> Scalar:
        """Build a scalar of this field from an int/Fraction/Qi seed."""
        if self.kind in ("Q", "Qi"):
            if isinstance(x, Qi):
                return x
            return Qi(x)
        if self.kind == "Qi_sqrt":
            if isinstance(x, Quad):
                if x.d != self.d:
                    raise FieldMismatch("radicand mismatch")
                return x
            if isinstance(x, (int, Fraction, Qi)):
                return Quad.lift(Qi(x) if not isinstance(x, Qi) else x, self.d)
            raise FieldMismatch(f"cannot coerce {x!r}")
        if self.kind == "Fp":
            if isinstance(x, Fp):
                if x.p != self.p:
                    raise FieldMismatch("modulus mismatch")
                return x
            if isinstance(x, int):
                return Fp(x, self.p)
            if isinstance(x, Qi):
                return reduce_qi_mod(x, self.p)
            raise FieldMismatch(f"cannot coerce {x!r}")
        # approx
        if isinstance(x, complex):
            return x
        if isinstance(x, (int, float, Fraction)):
            return complex(x)
        if isinstance(x, (Qi, Quad)):
            return x.to_complex()
        raise FieldMismatch(f"cannot coerce {x!r}")

    def is_zero(self, x: Scalar) -> bool:
        if self.kind == "approx":
            return abs(x) <= self.tolerance
        return x.is_zero  # type: ignore[union-attr]

    def to_json(self) -> dict:
        if self.kind == "Qi_sqrt":
            return {"kind": "Qi_sqrt", "d": {"re": _fmt_frac(self.d.re), "im": _fmt_frac(self.d.im)}}
        if self.kind == "Fp":
            return {"kind": "Fp", "p": self.p}
        if self.kind == "approx":
            return {"kind": "approx", "tolerance": self.tolerance}
        return {"kind": self.kind}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldDescriptor":
        kind = obj["kind"]
        if kind == "Qi_sqrt":
            return cls("Qi_sqrt", d=Qi(Fraction(obj["d"]["re"]), Fraction(obj["d"]["im"])))
        if kind == "Fp":
            return cls("Fp", p=int(obj["p"]))
        if kind == "approx":
            return cls("approx", tolerance=float(obj.get("tolerance", 1e-9)))
        return cls(kind)


QQ_FIELD = FieldDescriptor("Q")
QI_FIELD = FieldDescriptor("Qi")


def fp_field(p: int) -> FieldDescriptor:
    return FieldDescriptor("Fp", p=p)


def quad_field(d: Qi) -> FieldDescriptor:
    return FieldDescriptor("Qi_sqrt", d=d)


def approx_field(tolerance: float = 1e-9) -> FieldDescriptor:
    return FieldDescriptor("approx", tolerance=tolerance)


# ---------------------------------------------------------------------------
# parsing and serialization


def _fmt_frac(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def parse_scalar(text: str) -> Qi:
    """Parse a Gaussian-rational literal like "3", "-1/2", "i", "1-2i", "3/2+1/2i"."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError(f"empty scalar literal in {text!r}")
    try:
        if "i" not in s:
            return Qi(Fraction(s))
        if not s.endswith("i"):
            raise ValueError
        body = s[:-1]
        # split off the real part at the last top-level sign
        cut = -1
        for idx in range(len(body) - 1, 0, -1):
            if body[idx] in "+-" and body[idx - 1] not in "/+-":
                cut = idx
                break
        if cut == -1:
            re_part, im_part = "", body
        else:
            re_part, im_part = body[:cut], body[cut:]
        if im_part in ("", "+"):
            im = Fraction(1)
        elif im_part == "-":
            im = Fraction(-1)
        else:
            im = Fraction(im_part)
        re = Fraction(re_part) if re_part else Fraction(0)
        return Qi(re, im)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"bad scalar literal {text!r}") from None


def format_scalar(x: Union[Qi, Quad, Fp, complex]) -> str:
    """Human-readable form; inverse of parse_scalar for Qi values."""
    if isinstance(x, Qi):
        if x.im == 0:
            return str(x.re)
        im = "" if abs(x.im) == 1 else str(abs(x.im))
        sign = "-" if x.im < 0 else ("+" if x.re != 0 else "")
        if x.re == 0:
            return f"{sign}{im}i"
        return f"{x.re}{sign}{im}i"
    if isinstance(x, Quad):
        return f"({format_scalar(x.a)}) + ({format_scalar(x.b)})*sqrt({format_scalar(x.d)})"
    if isinstance(x, Fp):
        return f"{x.val} (mod {x.p})"
    return repr(x)


def scalar_to_json(x: Scalar, field: FieldDescriptor):
    if field.kind == "Q":
        if not isinstance(x, Qi) or x.im != 0:
            raise FieldMismatch("kind-Q field holds plain rationals")
        return _fmt_frac(x.re)
    if field.kind == "Qi":
        return {"re": _fmt_frac(x.re), "im": _fmt_frac(x.im)}
    if field.kind == "Qi_sqrt":
        return {
            "a": {"re": _fmt_frac(x.a.re), "im": _fmt_frac(x.a.im)},
            "b": {"re": _fmt_frac(x.b.re), "im": _fmt_frac(x.b.im)},
            "d": {"re": _fmt_frac(x.d.re), "im": _fmt_frac(x.d.im)},
        }
    if field.kind == "Fp":
        return {"mod": x.p, "val": x.val}
    return {"re": x.real, "im": x.imag}


def scalar_from_json(obj, field: FieldDescriptor) -> Scalar:
    if field.kind == "Q":
        return Qi(Fraction(obj))
    if field.kind == "Qi":
        return Qi(Fraction(obj["re"]), Fraction(obj["im"]))
    if field.kind == "Qi_sqrt":
        return Quad(
            Qi(Fraction(obj["a"]["re"]), Fraction(obj["a"]["im"])),
            Qi(Fraction(obj["b"]["re"]), Fraction(obj["b"]["im"])),
            Qi(Fraction(obj["d"]["re"]), Fraction(obj["d"]["im"])),
        )
    if field.kind == "Fp":
        if int(obj["mod"]) != field.p:
            raise FieldMismatch("modulus mismatch in JSON scalar")
        return Fp(int(obj["val"]), field.p)
    return complex(obj["re"], obj["im"])
