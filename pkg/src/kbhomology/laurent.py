"""Integer Laurent polynomials in one variable, plus the bivariate
Poincaré-polynomial variant keyed by ``(t_exponent, exponent)``."""

from __future__ import annotations

import re
from typing import Iterable, Mapping


def _clean(terms: Mapping) -> dict:
    return {k: int(v) for k, v in terms.items() if v}


def _monomial(coef: int, body: str) -> str:
    if not body:
        return str(coef)
    if coef == 1:
        return body
    if coef == -1:
        return "-" + body
    return f"{coef}{body}"


def _join(parts: Iterable[str]) -> str:
    out = ""
    for p in parts:
        if out and not p.startswith("-"):
            out += "+"
        out += p
    return out or "0"


class LaurentPoly:
    """Immutable ``sum c_k * var^k`` with integer coefficients.

    Zero coefficients are never stored, so equality is structural.
    """

    __slots__ = ("_terms", "var")

    def __init__(self, terms: Mapping[int, int] | None = None, var: str = "A"):
        self._terms = _clean(terms or {})
        self.var = var

    @classmethod
    def monomial(cls, exponent: int, coef: int = 1, var: str = "A") -> "LaurentPoly":
        return cls({exponent: coef}, var)

    @classmethod
    def one(cls, var: str = "A") -> "LaurentPoly":
        return cls({0: 1}, var)

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, int):
            return self._terms == _clean({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly({0: other}, self.var)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self._terms.items()}, self.var)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[int, int] = {}
        for k1, v1 in self._terms.items():
            for k2, v2 in other._terms.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + v1 * v2
        return LaurentPoly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            ((k, v),) = self._terms.items()
            if v not in (1, -1):
                raise ValueError("only unit monomials are invertible over Z")
            return LaurentPoly({k * n: v ** (-n)}, self.var)
        result = LaurentPoly.one(self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``var**k``."""
        return LaurentPoly({e + k: v for e, v in self._terms.items()}, self.var)

    def substitute(self, scale: int, sign: int = 1) -> "LaurentPoly":
        """Return ``p(sign * var**scale)``."""
        return LaurentPoly(
            {e * scale: v * (sign ** (e % 2)) for e, v in self._terms.items()}, self.var
        )

    def exponents(self) -> list[int]:
        return sorted(self._terms)

    def coefficient(self, k: int) -> int:
        return self._terms.get(k, 0)

    def __str__(self):
        parts = []
        for e in sorted(self._terms, reverse=True):
            body = "" if e == 0 else (self.var if e == 1 else f"{self.var}^{e}")
            parts.append(_monomial(self._terms[e], body))
        return _join(parts)

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"

    def to_json(self) -> dict[str, int]:
        return {str(k): v for k, v in sorted(self._terms.items())}

    @classmethod
    def parse(cls, text: str, var: str = "A") -> "LaurentPoly":
        """Parse ``-A^28+A^24-2A^-3+5`` style text."""
        text = text.replace(" ", "").replace("{", "").replace("}", "")
        if text in ("", "0"):
            return cls({}, var)
        pattern = re.compile(rf"([+-]?)(\d*)({re.escape(var)}(?:\^(-?\d+))?)?")
        out: dict[int, int] = {}
        pos = 0
        while pos < len(text):
            m = pattern.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
            sign, digits, has_var, exp = m.groups()
            if not digits and not has_var:
                raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
            coef = int(digits) if digits else 1
            if sign == "-":
                coef = -coef
            e = (int(exp) if exp is not None else 1) if has_var else 0
            out[e] = out.get(e, 0) + coef
            pos = m.end()
        return cls(out, var)


class PoincarePoly:
    """Bivariate ``sum c * t^i * var^j`` keyed by ``(i, j)``."""

    __slots__ = ("_terms", "var")

    def __init__(self, terms: Mapping[tuple[int, int], int] | None = None, var: str = "A"):
        self._terms = _clean(terms or {})
        self.var = var

    @property
    def terms(self) -> dict[tuple[int, int], int]:
        return dict(self._terms)

    def __eq__(self, other):
        if not isinstance(other, PoincarePoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "PoincarePoly") -> "PoincarePoly":
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return PoincarePoly(out, self.var)

    def part(self, t_exponent: int) -> LaurentPoly:
        return LaurentPoly(
            {j: v for (i, j), v in self._terms.items() if i == t_exponent}, self.var
        )

    def evaluate_t(self, t: int) -> LaurentPoly:
        """Specialize ``t`` to ``1`` or ``-1`` (``-1`` gives the Euler characteristic)."""
        if t not in (1, -1):
            raise ValueError("t must be 1 or -1")
        out: dict[int, int] = {}
        for (i, j), v in self._terms.items():
            out[j] = out.get(j, 0) + v * t ** (i % 2)
        return LaurentPoly(out, self.var)

    def __str__(self):
        t_exps = sorted({i for i, _ in self._terms})
        parts = []
        for i in t_exps:
            inner = self.part(i)
            if i == 0:
                parts.append(str(inner))
                continue
            tt = "t" if i == 1 else f"t^{i}"
            if len(inner.terms) == 1:
                ((e, c),) = inner.terms.items()
                unit = "" if e == 0 else str(LaurentPoly({e: 1}, self.var))
                parts.append(_monomial(c, tt + unit))
            else:
                parts.append(f"{tt}({inner})")
        return _join(parts)

    def __repr__(self):
        return f"PoincarePoly({str(self)!r})"

    def to_json(self) -> list[dict[str, int]]:
        return [{"t": i, "exponent": j, "coefficient": v} for (i, j), v in sorted(self._terms.items())]
