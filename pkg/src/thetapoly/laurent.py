"""Exact Laurent polynomials in one variable and their formal quotients.

Coefficients are Python ints, so state sums can never overflow.  Quotients
are kept unreduced; two quotients are equal when their cross products agree.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Union

__all__ = ["LaurentPoly", "RationalFn", "to_canonical_string", "A", "ONE", "ZERO", "PHI", "DELTA"]


class LaurentPoly:
    """An element of Z[A, A^-1], stored as ``{exponent: coefficient}``.

    >>> p = LaurentPoly({1: 1, -1: 1})
    >>> str(p * p)
    'A^2 + 2 + A^-2'
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[int, int] = {}
        for e, c in items:
            if c:
                clean[int(e)] = clean.get(int(e), 0) + int(c)
        self._terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    @classmethod
    def monomial(cls, coefficient: int = 1, exponent: int = 0) -> LaurentPoly:
        return cls({exponent: coefficient})

    @classmethod
    def constant(cls, c: int) -> LaurentPoly:
        return cls({0: c})

    @classmethod
    def coerce(cls, x) -> LaurentPoly:
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return cls({0: x})
        raise TypeError(f"cannot treat {type(x).__name__} as a Laurent polynomial")

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def degree(self) -> int:
        return max(self._terms) if self._terms else 0

    def valuation(self) -> int:
        return min(self._terms) if self._terms else 0

    def coefficient(self, e: int) -> int:
        return self._terms.get(e, 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __add__(self, other) -> LaurentPoly:
        if isinstance(other, RationalFn):
            return NotImplemented
        other = LaurentPoly.coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __sub__(self, other) -> LaurentPoly:
        if isinstance(other, RationalFn):
            return NotImplemented
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other) -> LaurentPoly:
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other) -> LaurentPoly:
        if isinstance(other, RationalFn):
            return NotImplemented
        other = LaurentPoly.coerce(other)
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials are invertible in Z[A, A^-1]")
            ((e, c),) = self._terms.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials are invertible in Z[A, A^-1]")
            return LaurentPoly({e * n: c ** (-n)})
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other) -> RationalFn:
        return RationalFn(self) / other

    def __rtruediv__(self, other) -> RationalFn:
        return RationalFn(LaurentPoly.coerce(other)) / self

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by ``A**k``."""
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def substitute_power(self, k: int) -> LaurentPoly:
        """Substitute ``A -> A**k``.

        >>> str(LaurentPoly({1: 1, 0: 1, -1: 1}).substitute_power(4))
        'A^4 + 1 + A^-4'
        """
        if k == 0:
            raise ValueError("substitution A -> A^0 is not invertible")
        return LaurentPoly({e * k: c for e, c in self._terms.items()})

    def evaluate(self, value):
        """Evaluate at ``value`` (a LaurentPoly or int); exponents must be >= 0
        unless ``value`` is an invertible monomial."""
        value = LaurentPoly.coerce(value)
        if not self._terms:
            return ZERO
        if self.valuation() < 0:
            return (value ** self.valuation()) * self.shift(-self.valuation()).evaluate(value)
        acc = ZERO
        for e in range(self.degree(), -1, -1):
            acc = acc * value + self._terms.get(e, 0)
        return acc

    def __repr__(self) -> str:
        return f"LaurentPoly({to_canonical_string(self)!r})"

    def __str__(self) -> str:
        return to_canonical_string(self)


class RationalFn:
    """Formal quotient ``num / den`` of Laurent polynomials, never reduced."""

    __slots__ = ("num", "den")
    __hash__ = None  # equality is by cross-multiplication

    def __init__(self, num, den=1):
        num = LaurentPoly.coerce(num)
        den = LaurentPoly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    @classmethod
    def coerce(cls, x) -> RationalFn:
        if isinstance(x, RationalFn):
            return x
        return cls(LaurentPoly.coerce(x))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, LaurentPoly)):
            other = RationalFn(other)
        if not isinstance(other, RationalFn):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __neg__(self) -> RationalFn:
        return RationalFn(-self.num, self.den)

    def __add__(self, other) -> RationalFn:
        other = RationalFn.coerce(other)
        if self.den == other.den:
            return RationalFn(self.num + other.num, self.den)
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> RationalFn:
        return self + (-RationalFn.coerce(other))

    def __rsub__(self, other) -> RationalFn:
        return RationalFn.coerce(other) - self

    def __mul__(self, other) -> RationalFn:
        other = RationalFn.coerce(other)
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RationalFn:
        other = RationalFn.coerce(other)
        return RationalFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> RationalFn:
        return RationalFn.coerce(other) / self

    def substitute_power(self, k: int) -> RationalFn:
        return RationalFn(self.num.substitute_power(k), self.den.substitute_power(k))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def as_laurent(self) -> LaurentPoly | None:
        """The quotient as a Laurent polynomial when ``den`` divides ``num``."""
        q, r = _divmod(self.num, self.den)
        return q if r.is_zero() else None

    def __repr__(self) -> str:
        return f"RationalFn({to_canonical_string(self)!r})"

    def __str__(self) -> str:
        return to_canonical_string(self)


def _divmod(p: LaurentPoly, q: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    # long division from the top degree; exact over Z only when q's lead coefficient divides
    quotient: dict[int, int] = {}
    rem = p
    lead_e, lead_c = q.degree(), q.coefficient(q.degree())
    span = q.degree() - q.valuation()
    while not rem.is_zero() and rem.degree() - rem.valuation() >= span:
        e, c = rem.degree(), rem.coefficient(rem.degree())
        if c % lead_c:
            break
        k = c // lead_c
        quotient[e - lead_e] = k
        rem = rem - q.shift(e - lead_e) * k
    return LaurentPoly(quotient), rem


Value = Union[LaurentPoly, RationalFn]


def _poly_string(p: LaurentPoly, var: str) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for i, e in enumerate(sorted(p._terms, reverse=True)):
        c = p._terms[e]
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            power = var if e == 1 else f"{var}^{e}"
            body = power if mag == 1 else f"{mag}*{power}"
        if i == 0:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def to_canonical_string(value: Value | int, var: str = "A") -> str:
    """Render terms in decreasing exponent order, e.g. ``-A^2 - A - 2 - A^-1 - A^-2``.

    Quotients print as ``(<num>) / (<den>)``.
    """
    if isinstance(value, int):
        value = LaurentPoly.constant(value)
    if isinstance(value, RationalFn):
        return f"({_poly_string(value.num, var)}) / ({_poly_string(value.den, var)})"
    return _poly_string(value, var)


def parse_laurent(text: str, var: str = "A") -> LaurentPoly:
    """Inverse of the canonical polynomial format."""
    text = text.strip()
    if text == "0":
        return ZERO
    terms: dict[int, int] = {}
    tokens = text.replace(" - ", " + -").split(" + ")
    for tok in tokens:
        tok = tok.strip()
        neg = tok.startswith("-")
        if neg:
            tok = tok[1:]
        if "*" in tok:
            coef_s, power = tok.split("*", 1)
            coef = int(coef_s)
        elif tok.startswith(var):
            coef, power = 1, tok
        else:
            coef, power = int(tok), ""
        if not power:
            e = 0
        elif power == var:
            e = 1
        elif power.startswith(var + "^"):
            e = int(power[len(var) + 1:])
        else:
            raise ValueError(f"bad term {tok!r}")
        terms[e] = terms.get(e, 0) + (-coef if neg else coef)
    return LaurentPoly(terms)


def parse_value(text: str, var: str = "A") -> Value:
    text = text.strip()
    if text.startswith("(") and ") / (" in text and text.endswith(")"):
        num, den = text[1:-1].split(") / (")
        return RationalFn(parse_laurent(num, var), parse_laurent(den, var))
    return parse_laurent(text, var)


ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1)
A = LaurentPoly.monomial(1, 1)
PHI = LaurentPoly({2: 1, -2: 1})
DELTA = -PHI
