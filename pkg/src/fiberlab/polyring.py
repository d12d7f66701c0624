"""Coefficient fields, monomial orders, polynomials and presented graded rings.

Polynomials are immutable mappings from exponent tuples to nonzero field
elements.  Prime-field elements are plain ints in ``[0, p)``; rational
elements are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

DEFAULT_CHARACTERISTIC = 32003

Exponents = tuple  # tuple[int, ...]


class PolynomialSyntaxError(ValueError):
    """Raised by :func:`parse_polynomial` on text outside the grammar."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class CoefficientField:
    """The rationals (``characteristic == 0``) or a prime field GF(p)."""

    characteristic: int = DEFAULT_CHARACTERISTIC

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and (p >= 2**31 or not _is_prime(p)):
            raise ValueError(f"characteristic must be 0 or a prime < 2^31, got {p}")

    @classmethod
    def parse(cls, spec: str) -> "CoefficientField":
        """Parse ``"qq"`` or ``"gf:P"``."""
        spec = spec.strip().lower()
        if spec in ("qq", "q", "rationals"):
            return cls(0)
        m = re.fullmatch(r"gf[:(]?(\d+)\)?", spec)
        if not m:
            raise ValueError(f"unknown field spec {spec!r}")
        return cls(int(m.group(1)))

    @property
    def is_prime_field(self) -> bool:
        return self.characteristic != 0

    @property
    def spec(self) -> str:
        return f"gf:{self.characteristic}" if self.characteristic else "qq"

    @property
    def zero(self):
        return 0 if self.characteristic else Fraction(0)

    @property
    def one(self):
        return 1 if self.characteristic else Fraction(1)

    def __call__(self, value):
        p = self.characteristic
        if p:
            if isinstance(value, Fraction):
                return value.numerator % p * pow(value.denominator % p, -1, p) % p
            return int(value) % p
        return Fraction(value)

    def add(self, a, b):
        return (a + b) % self.characteristic if self.characteristic else a + b

    def sub(self, a, b):
        return (a - b) % self.characteristic if self.characteristic else a - b

    def mul(self, a, b):
        return a * b % self.characteristic if self.characteristic else a * b

    def neg(self, a):
        return -a % self.characteristic if self.characteristic else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        return pow(a, -1, p) if p else 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def random_element(self, rng: random.Random, nonzero: bool = False, bound: int = 50):
        """Uniform element of GF(p); for QQ a uniform integer in ``[-bound, bound]``."""
        while True:
            if self.characteristic:
                c = rng.randrange(self.characteristic)
            else:
                c = Fraction(rng.randint(-bound, bound))
            if c or not nonzero:
                return c

    def signed(self, a):
        """Representative of ``a`` in ``(-p/2, p/2]`` (identity over QQ)."""
        p = self.characteristic
        if p and a > p // 2:
            return a - p
        return a

    def format(self, a) -> str:
        s = self.signed(a)
        if isinstance(s, Fraction) and s.denominator == 1:
            return str(s.numerator)
        return str(s)


QQ = CoefficientField(0)
GF32003 = CoefficientField(DEFAULT_CHARACTERISTIC)


# ---------------------------------------------------------------------------
# monomial orders


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order encoded by non-negative integer weight rows.

    ``kind`` is one of ``lex``, ``grlex``, ``grevlex``, ``elim`` and
    ``weight``.  Graded kinds use ``weights`` for the leading degree row
    (all ones when ``None``).  ``elim`` puts every monomial involving a
    variable of ``block`` above every monomial free of them.  ``weight``
    compares by the ``rows`` first and breaks ties with grevlex.
    """

    kind: str = "grevlex"
    weights: tuple | None = None
    block: tuple = ()
    rows: tuple = ()

    def __post_init__(self):
        if self.kind not in ("lex", "grlex", "grevlex", "elim", "weight"):
            raise ValueError(f"unknown order kind {self.kind!r}")
        for r in self.rows:
            if any(v < 0 for v in r):
                raise ValueError("weight rows must be non-negative")
        if self.weights is not None and any(w < 0 for w in self.weights):
            raise ValueError("order weights must be non-negative")

    def matrix(self, n: int) -> list[list[int]]:
        w = list(self.weights) if self.weights is not None else [1] * n
        if len(w) != n:
            raise ValueError("order weights do not match the number of variables")
        if self.kind == "lex":
            return [[int(i == j) for j in range(n)] for i in range(n)]
        if self.kind == "grlex":
            return [w] + [[int(i == j) for j in range(n)] for i in range(n)]
        revlex = [[1 if j < k else 0 for j in range(n)] for k in range(n, 0, -1)]
        if all(v == 1 for v in w):
            graded = revlex
        else:
            graded = [w] + revlex
        if self.kind == "grevlex":
            return graded
        if self.kind == "elim":
            blk = set(self.block)
            return [[1 if j in blk else 0 for j in range(n)]] + graded
        for r in self.rows:
            if len(r) != n:
                raise ValueError("weight row length mismatch")
        return [list(r) for r in self.rows] + revlex

    def key(self, exps: Sequence[int], n: int | None = None) -> tuple:
        m = self.matrix(len(exps) if n is None else n)
        return tuple(sum(a * b for a, b in zip(row, exps) if a) for row in m)


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def compare_monomials(order: MonomialOrder, a: Sequence[int], b: Sequence[int]) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to, or greater than ``b``."""
    if len(a) != len(b):
        raise ValueError("monomials from different rings")
    ka, kb = order.key(a), order.key(b)
    return (ka > kb) - (ka < kb)


# ---------------------------------------------------------------------------
# degrees


class _Marker:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


#: degree of the zero polynomial; homogeneous of every degree, equal to no integer
BOTTOM = _Marker("BOTTOM")
#: returned by :func:`multidegree` for inhomogeneous input
NOT_HOMOGENEOUS = _Marker("NOT_HOMOGENEOUS")


@dataclass(frozen=True)
class Grading:
    """One weight vector, or several for a multigrading (e.g. ring degree and T-degree)."""

    weights: tuple

    def __post_init__(self):
        ws = self.weights
        if ws and isinstance(ws[0], int):
            object.__setattr__(self, "weights", (tuple(ws),))

    @property
    def rank(self) -> int:
        return len(self.weights)

    def degree_of(self, exps: Sequence[int]):
        d = tuple(sum(w * e for w, e in zip(ws, exps)) for ws in self.weights)
        return d[0] if len(d) == 1 else d


def multidegree(f: "Polynomial", g: Grading | Sequence[int] | None = None):
    """Common weighted degree of all terms of ``f``.

    Returns :data:`BOTTOM` for the zero polynomial and
    :data:`NOT_HOMOGENEOUS` when the terms disagree.
    """
    if g is None:
        g = Grading(f.ring.weights)
    elif not isinstance(g, Grading):
        g = Grading(tuple(g))
    if not f._terms:
        return BOTTOM
    it = iter(f._terms)
    d = g.degree_of(next(it))
    for e in it:
        if g.degree_of(e) != d:
            return NOT_HOMOGENEOUS
    return d


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Immutable polynomial in the variables of a :class:`PresentedRing`.

    Arithmetic never reduces modulo the ring relations; that is the job
    of the Groebner machinery.
    """

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: "PresentedRing", terms: Mapping | None = None):
        self.ring = ring
        F = ring.field
        clean = {}
        if terms:
            n = ring.nvars
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n or any(x < 0 for x in e):
                    raise ValueError(f"bad exponent vector {e}")
                c = F(c)
                if c:
                    clean[e] = F.add(clean[e], c) if e in clean else c
                    if not clean[e]:
                        del clean[e]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms: dict) -> "Polynomial":
        p = object.__new__(cls)
        p.ring = ring
        p._terms = terms
        p._hash = None
        return p

    # -- basic accessors -------------------------------------------------
    @property
    def terms_dict(self) -> dict:
        return dict(self._terms)

    def terms(self, order: MonomialOrder | None = None) -> list:
        """(coefficient, exponents) pairs, strictly decreasing in ``order``."""
        order = order or GREVLEX
        n = self.ring.nvars
        mat = order.matrix(n)
        key = lambda e: tuple(sum(a * b for a, b in zip(row, e)) for row in mat)
        return [(self._terms[e], e) for e in sorted(self._terms, key=key, reverse=True)]

    def leading_term(self, order: MonomialOrder | None = None):
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return self.terms(order)[0]

    def leading_monomial(self, order: MonomialOrder | None = None) -> Exponents:
        return self.leading_term(order)[1]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self):
        return self._terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def degree(self, weights: Sequence[int] | None = None) -> int:
        w = self.ring.weights if weights is None else weights
        return max((sum(a * b for a, b in zip(w, e)) for e in self._terms), default=-1)

    def support(self) -> set:
        """Indices of variables that occur."""
        return {i for e in self._terms for i, x in enumerate(e) if x}

    def is_homogeneous(self, weights: Sequence[int] | None = None) -> bool:
        return multidegree(self, weights) is not NOT_HOMOGENEOUS

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        F = self.ring.field
        out = dict(self._terms)
        for e, c in other._terms.items():
            if e in out:
                v = F.add(out[e], c)
                if v:
                    out[e] = v
                else:
                    del out[e]
            else:
                out[e] = c
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return Polynomial._raw(self.ring, {e: F.neg(c) for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        F = self.ring.field
        c = F(c)
        if not c:
            return self.ring.zero
        return Polynomial._raw(self.ring, {e: F.mul(v, c) for e, v in self._terms.items()})

    def shift(self, exps: Sequence[int], c=1) -> "Polynomial":
        """Multiply by the term ``c * x^exps``."""
        F = self.ring.field
        c = F(c)
        if not c:
            return self.ring.zero
        return Polynomial._raw(
            self.ring,
            {tuple(a + b for a, b in zip(e, exps)): F.mul(v, c) for e, v in self._terms.items()},
        )

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._coerce(other)
        F = self.ring.field
        p = F.characteristic
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                v = out.get(e)
                v = ca * cb if v is None else v + ca * cb
                out[e] = v % p if p else v
        return Polynomial._raw(self.ring, {e: v for e, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result, base = self.ring.one, self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def monic(self, order: MonomialOrder | None = None) -> "Polynomial":
        if not self._terms:
            return self
        c, _ = self.leading_term(order)
        return self.scale(self.ring.field.inv(c))

    def subs(self, mapping: Mapping) -> "Polynomial":
        """Substitute polynomials (or constants) for variables, given by name or index."""
        ring = self.ring
        images = [None] * ring.nvars
        for k, v in mapping.items():
            i = ring.index(k) if isinstance(k, str) else k
            images[i] = v if isinstance(v, Polynomial) else ring.constant(v)
        result = ring.zero
        cache: dict = {}
        for e, c in self._terms.items():
            kept = [0] * ring.nvars
            term = ring.constant(c)
            for i, x in enumerate(e):
                if not x:
                    continue
                if images[i] is None:
                    kept[i] = x
                else:
                    key = (i, x)
                    if key not in cache:
                        cache[key] = images[i] ** x
                    term = term * cache[key]
            result = result + term.shift(kept)
        return result

    def map_to(self, ring: "PresentedRing", index_map: Sequence[int] | None = None) -> "Polynomial":
        """Reinterpret in ``ring``; variable ``i`` goes to ``index_map[i]`` (by name if omitted)."""
        if index_map is None:
            index_map = [ring.index(v) for v in self.ring.variables]
        n = ring.nvars
        out = {}
        F = ring.field
        for e, c in self._terms.items():
            ne = [0] * n
            for i, x in enumerate(e):
                if x:
                    j = index_map[i]
                    if j is None:
                        raise ValueError(f"variable {self.ring.variables[i]} has no image")
                    ne[j] += x
            out[tuple(ne)] = F(c) if F != self.ring.field else c
        return Polynomial(ring, out) if F != self.ring.field else Polynomial._raw(ring, out)

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- printing --------------------------------------------------------
    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def _format_monomial(names, e) -> str:
    parts = []
    for name, x in zip(names, e):
        if x == 1:
            parts.append(name)
        elif x:
            parts.append(f"{name}^{x}")
    return "*".join(parts)


def format_polynomial(f: Polynomial, order: MonomialOrder | None = None) -> str:
    """Canonical spelling: grevlex-descending terms, ``x1^2*x2``, no ``^1``."""
    if not f._terms:
        return "0"
    F = f.ring.field
    out = []
    for c, e in f.terms(order or GREVLEX):
        s = F.signed(c)
        neg = s < 0
        a = -s if neg else s
        mono = _format_monomial(f.ring.variables, e)
        a_str = F.format(a)
        if not mono:
            body = a_str
        elif a == 1:
            body = mono
        elif isinstance(a, Fraction) and a.denominator != 1:
            body = f"({a_str})*{mono}"
        else:
            body = f"{a_str}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# ---------------------------------------------------------------------------
# presented rings

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class PresentedRing:
    """``k[x_1..x_n]/P`` with positive integer weights on the variables.

    ``relations`` must be homogeneous for the weights.  The domain flag is
    trusted, never verified.
    """

    def __init__(
        self,
        variables: Sequence[str],
        field: CoefficientField | None = None,
        weights: Sequence[int] | None = None,
        relations: Iterable = (),
        is_domain: bool = True,
    ):
        variables = tuple(variables)
        for v in variables:
            if not _NAME_RE.match(v):
                raise ValueError(f"bad variable name {v!r}")
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        self.variables = variables
        self.field = field if field is not None else GF32003
        self.weights = tuple(weights) if weights is not None else (1,) * len(variables)
        if len(self.weights) != len(variables):
            raise ValueError("one weight per variable required")
        if any((not isinstance(w, int)) or w <= 0 for w in self.weights):
            raise ValueError("weights must be positive integers")
        self.is_domain = bool(is_domain)
        self._index = {v: i for i, v in enumerate(variables)}
        rels = []
        for r in relations:
            if isinstance(r, str):
                r = parse_polynomial(r, self)
            elif isinstance(r, Polynomial):
                r = r.map_to(self)
            else:
                r = Polynomial(self, r)
            if r:
                if not r.is_homogeneous(self.weights):
                    raise ValueError(f"relation {r} is not homogeneous for weights {self.weights}")
                rels.append(r)
        self._relations = tuple(rels)
        self._key = (
            self.variables,
            self.field,
            self.weights,
            frozenset(frozenset(r._terms.items()) for r in rels),
            self.is_domain,
        )

    # -- identity --------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, PresentedRing) and (self is other or self._key == other._key)

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        rel = f", {len(self._relations)} relations" if self._relations else ""
        return f"PresentedRing({', '.join(self.variables)}; {self.field.spec}; w={self.weights}{rel})"

    # -- structure ---------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def relations(self) -> tuple:
        return self._relations

    @property
    def grading(self) -> Grading:
        return Grading(self.weights)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r}") from None

    def var(self, name: str | int) -> Polynomial:
        i = self.index(name) if isinstance(name, str) else name
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial._raw(self, {tuple(e): self.field.one})

    def gens(self) -> list:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps: Sequence[int], c=1) -> Polynomial:
        return Polynomial(self, {tuple(exps): c})

    def constant(self, c) -> Polynomial:
        c = self.field(c)
        if not c:
            return Polynomial._raw(self, {})
        return Polynomial._raw(self, {(0,) * self.nvars: c})

    @property
    def zero(self) -> Polynomial:
        return Polynomial._raw(self, {})

    @property
    def one(self) -> Polynomial:
        return self.constant(1)

    def __call__(self, value) -> Polynomial:
        if isinstance(value, str):
            return parse_polynomial(value, self)
        if isinstance(value, Polynomial):
            return value if value.ring == self else value.map_to(self)
        return self.constant(value)

    def parse(self, text: str) -> Polynomial:
        return parse_polynomial(text, self)

    def free(self) -> "PresentedRing":
        """Same variables, field and weights, no relations."""
        if not self._relations:
            return self
        return PresentedRing(self.variables, self.field, self.weights, (), True)

    def extend(self, names: Sequence[str], weights: Sequence[int] | None = None, first: bool = False,
               is_domain: bool | None = None) -> "PresentedRing":
        """Adjoin new variables (appended, or prepended with ``first``); relations carry over."""
        names = tuple(names)
        w = tuple(weights) if weights is not None else (1,) * len(names)
        if first:
            variables, weights_all = names + self.variables, w + self.weights
        else:
            variables, weights_all = self.variables + names, self.weights + w
        tmp = PresentedRing(variables, self.field, weights_all, (), True)
        rels = [r.map_to(tmp) for r in self._relations]
        return PresentedRing(variables, self.field, weights_all, rels,
                             self.is_domain if is_domain is None else is_domain)

    def with_weights(self, weights: Sequence[int]) -> "PresentedRing":
        tmp = PresentedRing(self.variables, self.field, weights, (), True)
        return PresentedRing(self.variables, self.field, weights,
                             [r.map_to(tmp) for r in self._relations], self.is_domain)

    def with_field(self, field: CoefficientField) -> "PresentedRing":
        tmp = PresentedRing(self.variables, field, self.weights, (), True)
        return PresentedRing(self.variables, field, self.weights,
                             [Polynomial(tmp, r._terms) for r in self._relations], self.is_domain)

    def subring(self, names: Sequence[str]) -> "PresentedRing":
        """Polynomial ring on a subset of the variables; keeps relations living there."""
        names = tuple(names)
        w = tuple(self.weights[self.index(v)] for v in names)
        tmp = PresentedRing(names, self.field, w, (), True)
        keep = set(names)
        rels = []
        for r in self._relations:
            if all(self.variables[i] in keep for i in r.support()):
                rels.append(r.map_to(tmp))
        return PresentedRing(names, self.field, w, rels, self.is_domain)

    @property
    def dimension(self) -> int:
        """Krull dimension of the ring (needs a Groebner basis of the relations)."""
        from .groebner import krull_dimension

        return krull_dimension(self.relations, self.free())


def polynomial_ring(names: str | Sequence[str], field: CoefficientField | None = None,
                    weights: Sequence[int] | None = None) -> PresentedRing:
    """Polynomial ring from ``"x,y,z"`` or a sequence of names."""
    if isinstance(names, str):
        names = [v.strip() for v in names.replace(" ", ",").split(",") if v.strip()]
    return PresentedRing(names, field, weights)


def ring_arithmetic(op: str, f: Polynomial, g) -> Polynomial:
    """``add``, ``multiply`` or ``scale``; results are not reduced modulo relations."""
    if op == "add":
        return f + g
    if op == "multiply":
        return f * g
    if op == "scale":
        return f.scale(g)
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# parser
#
#   expr   := term (("+" | "-") term)*
#   term   := unary ("*" unary)*
#   unary  := "-" unary | "+" unary | power
#   power  := atom ("^" INT)?
#   atom   := INT | IDENT | "(" expr ")"

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            break
        if m.group(1) is not None:
            toks.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), m.start(2)))
        else:
            ch = m.group(3)
            if ch == "/":
                raise PolynomialSyntaxError(f"division is not supported (position {m.start(3)})")
            if ch not in "+-*^()":
                raise PolynomialSyntaxError(f"unexpected character {ch!r} at position {m.start(3)}")
            toks.append(("op", ch, m.start(3)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text, ring):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        t = self.take()
        if t[1] != value:
            raise PolynomialSyntaxError(f"expected {value!r} at position {t[2]}, found {t[1] or 'end'!r}")

    def expr(self):
        f = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.unary()
        while self.peek() == ("op", "*", self.peek()[2]):
            self.take()
            f = f * self.unary()
        return f

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            f = self.unary()
            return -f if t[1] == "-" else f
        return self.power()

    def power(self):
        f = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            e = self.take()
            if e[0] != "int":
                raise PolynomialSyntaxError(f"malformed exponent at position {e[2]}")
            f = f ** int(e[1])
        return f

    def atom(self):
        t = self.take()
        if t[0] == "int":
            return self.ring.constant(int(t[1]))
        if t[0] == "name":
            if t[1] not in self.ring._index:
                raise PolynomialSyntaxError(f"unknown variable {t[1]!r}")
            return self.ring.var(t[1])
        if t[1] == "(":
            f = self.expr()
            self.expect(")")
            return f
        raise PolynomialSyntaxError(f"unexpected {t[1] or 'end of input'!r} at position {t[2]}")


def parse_polynomial(text: str, ring: PresentedRing) -> Polynomial:
    """Parse ``text`` (identifiers, integers, ``+ - * ^`` and parentheses) in ``ring``."""
    p = _Parser(text, ring)
    if p.peek()[0] == "end":
        raise PolynomialSyntaxError("empty polynomial")
    f = p.expr()
    t = p.peek()
    if t[0] != "end":
        raise PolynomialSyntaxError(f"unexpected {t[1]!r} at position {t[2]}")
    return f


def random_polynomial(ring: PresentedRing, rng: random.Random, nterms: int = 4, max_deg: int = 4,
                      homogeneous_degree: int | None = None, coeff_bound: int = 20) -> Polynomial:
    """Random polynomial; with ``homogeneous_degree`` all terms share that weighted degree."""
    F = ring.field
    n = ring.nvars
    if homogeneous_degree is not None:
        monos = monomials_of_degree(ring.weights, homogeneous_degree)
        if not monos:
            return ring.zero
        chosen = [rng.choice(monos) for _ in range(nterms)]
    else:
        chosen = []
        for _ in range(nterms):
            d = rng.randint(0, max_deg)
            e = [0] * n
            for _ in range(d):
                e[rng.randrange(n)] += 1
            chosen.append(tuple(e))
    terms: dict = {}
    for e in chosen:
        c = F(rng.randint(-coeff_bound, coeff_bound))
        terms[e] = F.add(terms.get(e, F.zero), c)
    return Polynomial(ring, terms)


def monomials_of_degree(weights: Sequence[int], d: int) -> list:
    """All exponent vectors of weighted degree exactly ``d``."""
    n = len(weights)
    out = []

    def rec(i, left, acc):
        if i == n - 1:
            w = weights[i]
            if w == 0:
                if left == 0:
                    out.append(tuple(acc + [0]))
                return
            if left % w == 0:
                out.append(tuple(acc + [left // w]))
            return
        w = weights[i]
        if w == 0:
            rec(i + 1, left, acc + [0])
            return
        for x in range(left // w, -1, -1):
            rec(i + 1, left - x * w, acc + [x])

    if n == 0:
        return [()] if d == 0 else []
    rec(0, d, [])
    return out
