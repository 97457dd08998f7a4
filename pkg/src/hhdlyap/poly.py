"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Polynomial` maps exponent tuples to nonzero :class:`Fraction`
coefficients. Values are immutable; every operation returns a new
polynomial in canonical form, so two equal polynomials always have
identical term maps and equality is decided exactly.

Text form (used by the CLI)::

    -29/24*x^4 + 0.5*x*y - y

Terms are joined by ``+``/``-``; a term is a product of an optional
rational coefficient (``29/24``, ``0.5``, decimals converted exactly) and
variable powers (``x^4``). Whitespace is ignored.
"""

from fractions import Fraction
from numbers import Rational
from types import MappingProxyType

import numpy as np

from .errors import ParseError

__all__ = [
    "Polynomial",
    "PolyVectorField",
    "poly_arith",
    "partial_derivative",
    "gradient",
    "divergence",
    "laplacian",
    "evaluate",
    "parse_polynomial",
    "format_polynomial",
    "default_variables",
    "monomials_of_degree",
]


def _to_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, (float, np.floating)):
        if not np.isfinite(value):
            raise ValueError(f"non-finite coefficient {value!r}")
        return Fraction(float(value))
    if isinstance(value, np.integer):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def _grlex_key(exps):
    return (sum(exps), tuple(-e for e in exps))


def default_variables(n):
    """Variable names used when none are given: x, y for n <= 2, else x1..xn."""
    if n == 1:
        return ("x",)
    if n == 2:
        return ("x", "y")
    return tuple(f"x{i + 1}" for i in range(n))


def monomials_of_degree(n, d):
    """All exponent tuples of total degree ``d`` in ``n`` variables, grlex order."""
    if d < 0:
        return []
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + (e,), remaining - e, slots - 1)

    if n == 0:
        return [()] if d == 0 else []
    rec((), d, n)
    return out


class Polynomial:
    """Exact sparse polynomial in ``nvars`` variables."""

    __slots__ = ("_terms", "_nvars", "_horner_cache", "_hash", "_compiled")

    def __init__(self, terms=None, nvars=None):
        clean = {}
        if terms:
            for exps, coef in dict(terms).items():
                exps = tuple(int(e) for e in exps)
                if nvars is None:
                    nvars = len(exps)
                if len(exps) != nvars:
                    raise ValueError(
                        f"monomial {exps} has {len(exps)} exponents, expected {nvars}")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = _to_fraction(coef)
                if c:
                    clean[exps] = clean.get(exps, Fraction(0)) + c
                    if not clean[exps]:
                        del clean[exps]
        if nvars is None:
            raise ValueError("nvars is required for an empty polynomial")
        self._terms = clean
        self._nvars = int(nvars)
        self._horner_cache = None
        self._hash = None
        self._compiled = None

    # construction helpers

    @classmethod
    def zero(cls, nvars):
        return cls({}, nvars)

    @classmethod
    def constant(cls, value, nvars):
        return cls({(0,) * nvars: value}, nvars)

    @classmethod
    def variable(cls, axis, nvars):
        if not 0 <= axis < nvars:
            raise IndexError(f"axis {axis} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[axis] = 1
        return cls({tuple(exps): 1}, nvars)

    @classmethod
    def from_string(cls, text, variables):
        return parse_polynomial(text, variables)

    # basic properties

    @property
    def nvars(self):
        return self._nvars

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def sorted_terms(self):
        """Terms in graded lexicographic order (low degree first)."""
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]))

    @property
    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._nvars == other._nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other, self._nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r}, nvars={self._nvars})"

    def __str__(self):
        return format_polynomial(self)

    def coefficient(self, exps):
        return self._terms.get(tuple(exps), Fraction(0))

    @property
    def constant_term(self):
        return self.coefficient((0,) * self._nvars)

    def homogeneous_part(self, k):
        return Polynomial({e: c for e, c in self._terms.items() if sum(e) == k},
                          self._nvars)

    def truncate(self, max_degree):
        return Polynomial({e: c for e, c in self._terms.items() if sum(e) <= max_degree},
                          self._nvars)

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other._nvars != self._nvars:
                raise ValueError(
                    f"dimension mismatch: {self._nvars} vs {other._nvars} variables")
            return other
        try:
            return Polynomial.constant(_to_fraction(other), self._nvars)
        except TypeError:
            return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial(terms, self._nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({e: -c for e, c in self._terms.items()}, self._nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        other = self._coerce(other)
        terms = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial(terms, self._nvars)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Polynomial.constant(1, self._nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, factor):
        f = _to_fraction(factor)
        return Polynomial({e: c * f for e, c in self._terms.items()}, self._nvars)

    # calculus

    def diff(self, axis):
        """Formal partial derivative with respect to variable ``axis``."""
        if not 0 <= axis < self._nvars:
            raise IndexError(f"axis {axis} out of range for {self._nvars} variables")
        terms = {}
        for e, c in self._terms.items():
            k = e[axis]
            if k:
                ne = e[:axis] + (k - 1,) + e[axis + 1:]
                terms[ne] = c * k
        return Polynomial(terms, self._nvars)

    def gradient(self):
        return PolyVectorField([self.diff(i) for i in range(self._nvars)])

    def laplacian(self):
        total = Polynomial.zero(self._nvars)
        for i in range(self._nvars):
            total = total + self.diff(i).diff(i)
        return total

    def gradient_at(self, point):
        """Exact gradient at a rational point, as a list of Fractions."""
        return [g.exact_value(point) for g in self.gradient()]

    def hessian_at(self, point):
        """Exact Hessian at a rational point, as nested lists of Fractions."""
        n = self._nvars
        first = [self.diff(i) for i in range(n)]
        return [[first[i].diff(j).exact_value(point) for j in range(n)] for i in range(n)]

    # evaluation

    def _horner_tree(self):
        if self._horner_cache is None:
            def build(items, axis):
                if axis == self._nvars:
                    return sum((c for _, c in items), Fraction(0))
                groups = {}
                for e, c in items:
                    groups.setdefault(e[axis], []).append((e, c))
                return {k: build(v, axis + 1) for k, v in groups.items()}
            self._horner_cache = build(list(self._terms.items()), 0)
        return self._horner_cache

    def _horner(self, point, cast):
        def rec(node, axis):
            if axis == self._nvars:
                return cast(node)
            x = point[axis]
            top = max(node)
            acc = rec(node[top], axis + 1)
            for k in range(top - 1, -1, -1):
                acc = acc * x
                if k in node:
                    acc = acc + rec(node[k], axis + 1)
            return acc
        if not self._terms:
            return None
        return rec(self._horner_tree(), 0)

    def _check_point(self, point):
        if len(point) != self._nvars:
            raise ValueError(
                f"point has dimension {len(point)}, polynomial has {self._nvars} variables")

    def evaluate(self, point):
        """Float value at ``point`` (Horner accumulation per variable)."""
        point = [float(v) for v in point]
        self._check_point(point)
        value = self._horner(point, float)
        return 0.0 if value is None else float(value)

    def exact_value(self, point):
        """Exact rational value at a point with rational (or float) coordinates."""
        point = [_to_fraction(v) for v in point]
        self._check_point(point)
        value = self._horner(point, lambda c: c)
        return Fraction(0) if value is None else value

    def horner_source(self, names):
        """Python expression evaluating the polynomial in nested Horner form."""
        def rec(node, axis):
            if axis == self._nvars:
                return repr(float(node))
            x = names[axis]
            top = max(node)
            expr = rec(node[top], axis + 1)
            for k in range(top - 1, -1, -1):
                expr = f"({expr})*{x}"
                if k in node:
                    expr = f"{expr} + {rec(node[k], axis + 1)}"
            return expr
        if not self._terms:
            return "0.0"
        return rec(self._horner_tree(), 0)

    def compiled(self):
        """Fast float evaluator ``f(*coords)`` built from :meth:`horner_source`."""
        names = [f"_v{i}" for i in range(self._nvars)]
        src = f"lambda {', '.join(names)}: {self.horner_source(names)}"
        return eval(src, {})  # generated from numeric literals only

    def __call__(self, *coords):
        """Vectorised float evaluation; one array (or scalar) per variable."""
        self._check_point(coords)
        arrays = [np.asarray(c, dtype=float) for c in coords]
        shape = np.broadcast_shapes(*(a.shape for a in arrays)) if arrays else ()
        if self._compiled is None:
            self._compiled = self.compiled()
        value = self._compiled(*arrays)
        return np.broadcast_to(np.asarray(value, dtype=float), shape).copy()


class PolyVectorField:
    """An n-tuple of Polynomials in n variables."""

    __slots__ = ("_components",)

    def __init__(self, components):
        comps = tuple(components)
        if not comps:
            raise ValueError("a vector field needs at least one component")
        n = comps[0].nvars
        for c in comps:
            if not isinstance(c, Polynomial):
                raise TypeError("components must be Polynomials")
            if c.nvars != n:
                raise ValueError("all components must share the same number of variables")
        self._components = comps

    @classmethod
    def from_strings(cls, components, variables=None):
        if variables is None:
            variables = default_variables(len(components))
        return cls([parse_polynomial(s, variables) for s in components])

    @classmethod
    def zero(cls, n, size=None):
        return cls([Polynomial.zero(n)] * (n if size is None else size))

    @property
    def nvars(self):
        return self._components[0].nvars

    @property
    def components(self):
        return self._components

    def __len__(self):
        return len(self._components)

    def __iter__(self):
        return iter(self._components)

    def __getitem__(self, i):
        return self._components[i]

    def __eq__(self, other):
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return self._components == other._components

    def __hash__(self):
        return hash(self._components)

    def __repr__(self):
        return f"PolyVectorField({[str(c) for c in self._components]!r})"

    def _check(self, other):
        if not isinstance(other, PolyVectorField):
            raise TypeError("expected a PolyVectorField")
        if len(other) != len(self) or other.nvars != self.nvars:
            raise ValueError("dimension mismatch between vector fields")

    def __add__(self, other):
        self._check(other)
        return PolyVectorField([a + b for a, b in zip(self, other)])

    def __sub__(self, other):
        self._check(other)
        return PolyVectorField([a - b for a, b in zip(self, other)])

    def __neg__(self):
        return PolyVectorField([-a for a in self])

    def scale(self, factor):
        return PolyVectorField([a.scale(factor) for a in self])

    def dot(self, other):
        self._check(other)
        total = Polynomial.zero(self.nvars)
        for a, b in zip(self, other):
            total = total + a * b
        return total

    def is_zero(self):
        return all(c.is_zero() for c in self._components)

    def divergence(self):
        if len(self) != self.nvars:
            raise ValueError("divergence needs a square field (n components in n variables)")
        total = Polynomial.zero(self.nvars)
        for i, c in enumerate(self._components):
            total = total + c.diff(i)
        return total

    def jacobian(self):
        """Matrix of partial-derivative polynomials, rows = components."""
        return [[c.diff(j) for j in range(self.nvars)] for c in self._components]

    def jacobian_at(self, point):
        """Exact Jacobian at a rational point (nested lists of Fractions)."""
        return [[d.exact_value(point) for d in row] for row in self.jacobian()]

    def exact_value(self, point):
        return [c.exact_value(point) for c in self._components]

    def evaluate(self, point):
        return np.array([c.evaluate(point) for c in self._components])

    def __call__(self, *coords):
        return np.stack([c(*coords) for c in self._components])

    def compiled(self):
        """Fast evaluator returning one value (array or scalar) per component."""
        names = [f"_v{i}" for i in range(self.nvars)]
        body = ", ".join(c.horner_source(names) for c in self._components)
        return eval(f"lambda {', '.join(names)}: ({body},)", {})

    def to_strings(self, variables=None):
        if variables is None:
            variables = default_variables(self.nvars)
        return [format_polynomial(c, variables) for c in self._components]


# functional surface

_OPS = ("add", "sub", "mul", "scale")


def poly_arith(lhs, rhs, op):
    """Apply ``op`` in {"add", "sub", "mul", "scale"}; for "scale", rhs is a rational."""
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        if not isinstance(rhs, Polynomial):
            raise TypeError("mul expects two polynomials")
        return lhs * rhs
    if op == "scale":
        return lhs.scale(rhs)
    raise ValueError(f"unknown op {op!r}; expected one of {_OPS}")


def partial_derivative(p, axis):
    return p.diff(axis)


def gradient(p):
    return p.gradient()


def divergence(field):
    return field.divergence()


def laplacian(p):
    return p.laplacian()


def evaluate(p, point):
    return p.evaluate(point)


# text form

def _format_coefficient(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p, variables=None):
    """Canonical text; parses back to the identical polynomial."""
    if variables is None:
        variables = default_variables(p.nvars)
    if len(variables) != p.nvars:
        raise ValueError("variable name count does not match polynomial dimension")
    if p.is_zero():
        return "0"
    parts = []
    for exps, coef in p.sorted_terms():
        factors = []
        for name, e in zip(variables, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(coef)
        if not factors:
            body = _format_coefficient(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _format_coefficient(mag) + "*" + "*".join(factors)
        sign = "-" if coef < 0 else "+"
        if not parts:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


class _Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def location(self, pos=None):
        pos = self.pos if pos is None else pos
        before = self.text[:pos]
        line = before.count("\n") + 1
        column = pos - (before.rfind("\n") + 1) + 1
        return line, column

    def error(self, message, pos=None):
        line, column = self.location(pos)
        return ParseError(message, line, column)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, s):
        self.skip()
        if self.text.startswith(s, self.pos):
            self.pos += len(s)
            return True
        return False

    def digits(self):
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return self.text[start:self.pos]

    def number(self):
        self.skip()
        start = self.pos
        whole = self.digits()
        frac = ""
        if self.pos < len(self.text) and self.text[self.pos] == ".":
            self.pos += 1
            frac = self.digits()
            if not whole and not frac:
                raise self.error("malformed number", start)
        if not whole and not frac:
            raise self.error("expected a number", start)
        value = Fraction(f"{whole or '0'}.{frac or '0'}")
        if self.take("/"):
            self.skip()
            dpos = self.pos
            den = self.digits()
            if not den:
                raise self.error("expected a denominator", dpos)
            if int(den) == 0:
                raise self.error("zero denominator", dpos)
            value /= int(den)
        return value

    def identifier(self):
        self.skip()
        start = self.pos
        if self.pos < len(self.text) and (self.text[self.pos].isalpha() or self.text[self.pos] == "_"):
            self.pos += 1
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
        return self.text[start:self.pos], start


def parse_polynomial(text, variables):
    """Parse the CLI polynomial grammar into a :class:`Polynomial`."""
    variables = list(variables)
    index = {name: i for i, name in enumerate(variables)}
    n = len(variables)
    sc = _Scanner(text)
    result = {}

    def parse_factor(exps):
        ch = sc.peek()
        if ch.isdigit() or ch == ".":
            return sc.number()
        name, start = sc.identifier()
        if not name:
            raise sc.error(f"unexpected character {ch!r}" if ch else "unexpected end of input")
        if name not in index:
            raise sc.error(f"unknown variable {name!r}", start)
        power = 1
        if sc.take("^") or sc.take("**"):
            sc.skip()
            ppos = sc.pos
            p = sc.digits()
            if not p:
                raise sc.error("expected an integer exponent", ppos)
            power = int(p)
        exps[index[name]] += power
        return Fraction(1)

    sign = Fraction(1)
    if sc.take("-"):
        sign = Fraction(-1)
    else:
        sc.take("+")
    if sc.peek() == "":
        raise sc.error("empty polynomial")
    while True:
        exps = [0] * n
        coef = parse_factor(exps)
        while sc.take("*"):
            coef *= parse_factor(exps)
        key = tuple(exps)
        result[key] = result.get(key, Fraction(0)) + sign * coef
        ch = sc.peek()
        if ch == "":
            break
        if sc.take("+"):
            sign = Fraction(1)
        elif sc.take("-"):
            sign = Fraction(-1)
        else:
            raise sc.error(f"unexpected character {ch!r}")
    return Polynomial(result, n)
