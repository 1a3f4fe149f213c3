"""Exact multivariate Laurent polynomials with rational coefficients.

Variables are the Chern roots ``a{i}_{u}`` (vertex ``i``, slot ``u``) and the
deformation variable ``y``.  Variables are totally ordered vertex-major, then
by slot, with ``y`` last; monomials are ordered lexicographically on exponent
vectors under that variable order, and every rendering lists terms from the
largest monomial down.

Internally a polynomial is a dictionary from packed monomial keys to
coefficients (``int`` or :class:`fractions.Fraction`).  A :class:`Layout`
fixes which variables own which bit field of a key; the first variable sits
in the most significant field so that integer order on keys is the monomial
order.
"""
from __future__ import annotations

import ast
import json
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Union

from . import kernels
from .errors import InputError
from .kernels import BIAS, FIELD_BITS, MASK, NotDivisible

Coeff = Union[int, Fraction]

__all__ = [
    "Coeff",
    "LaurentPoly",
    "NonInvertibleImage",
    "NotDivisible",
    "RationalExpr",
    "Var",
    "Y",
    "add",
    "alpha",
    "exact_div_linear",
    "is_symmetric",
    "mul",
    "substitute",
]


class NonInvertibleImage(InputError):
    """A negative power was substituted by something that is not a monomial."""


class Var(NamedTuple):
    """A ring variable; ``kind`` 0 is a Chern root, ``kind`` 1 is ``y``."""

    kind: int
    vertex: int
    slot: int

    def __str__(self) -> str:
        if self.kind:
            return "y"
        return f"a{self.vertex}_{self.slot}"


def alpha(vertex: int, slot: int) -> Var:
    if slot < 1:
        raise ValueError(f"slot must be >= 1, got {slot}")
    return Var(0, vertex, slot)


Y = Var(1, 0, 0)

_VAR_RE = re.compile(r"^a(\d+)_(\d+)$")


def parse_var(name: str) -> Var:
    if name == "y":
        return Y
    m = _VAR_RE.match(name)
    if not m:
        raise ValueError(f"not a variable name: {name!r}")
    return alpha(int(m.group(1)), int(m.group(2)))


class Layout:
    """Assignment of bit fields to an ordered tuple of variables."""

    __slots__ = ("variables", "index", "shifts", "zero")

    def __init__(self, variables: tuple[Var, ...]):
        n = len(variables)
        self.variables = variables
        self.index = {v: j for j, v in enumerate(variables)}
        self.shifts = tuple(FIELD_BITS * (n - 1 - j) for j in range(n))
        self.zero = sum(BIAS << s for s in self.shifts)

    def encode(self, exps: Mapping[Var, int]) -> int:
        key = self.zero
        for v, e in exps.items():
            if e:
                key += e << self.shifts[self.index[v]]
        return key

    def decode(self, key: int) -> tuple[int, ...]:
        return tuple(((key >> s) & MASK) - BIAS for s in self.shifts)

    def exponent(self, key: int, var: Var) -> int:
        j = self.index.get(var)
        if j is None:
            return 0
        return ((key >> self.shifts[j]) & MASK) - BIAS

    def __repr__(self) -> str:
        return f"Layout({', '.join(map(str, self.variables))})"

    def __reduce__(self):
        return (layout_for, (self.variables,))


@lru_cache(maxsize=None)
def layout_for(variables: tuple[Var, ...]) -> Layout:
    return Layout(variables)


def _layout_of(variables: Iterable[Var]) -> Layout:
    return layout_for(tuple(sorted(set(variables))))


_EMPTY = layout_for(())


def _norm(c: Coeff) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _div_coeff(c: Coeff, n: Coeff) -> Coeff:
    if isinstance(c, int) and isinstance(n, int) and c % n == 0:
        return c // n
    return _norm(Fraction(c) / n)


def _repack(terms: dict, src: Layout, dst: Layout) -> dict:
    if src is dst:
        return terms
    moves = [(s, dst.shifts[dst.index[v]]) for v, s in zip(src.variables, src.shifts)]
    out = {}
    z = dst.zero
    for k, c in terms.items():
        nk = z
        for s, d in moves:
            nk += (((k >> s) & MASK) - BIAS) << d
        out[nk] = c
    return out


def _coerce(x) -> "LaurentPoly":
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")


class LaurentPoly:
    """Immutable exact Laurent polynomial.

    Use the constructors :meth:`const`, :meth:`var`, :meth:`monomial`,
    :meth:`from_terms` or :meth:`parse`; the raw constructor expects an
    already-pruned term dictionary.
    """

    __slots__ = ("_layout", "_terms", "_hash", "_decoded")

    def __init__(self, layout: Layout, terms: dict):
        self._layout = layout
        self._terms = terms
        self._hash = None
        self._decoded = None

    def __getstate__(self):
        return (self._layout.variables, self._terms)

    def __setstate__(self, state):
        variables, terms = state
        self._layout = layout_for(variables)
        self._terms = terms
        self._hash = None
        self._decoded = None

    def _sparse_terms(self) -> list:
        """Cached ``(coeff, ((var, exp), ...))`` list for repeated evaluation."""
        if self._decoded is None:
            lay = self._layout
            self._decoded = [
                (c, tuple((v, e) for v, e in zip(lay.variables, lay.decode(k)) if e))
                for k, c in self._terms.items()
            ]
        return self._decoded

    # construction -----------------------------------------------------
    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls(_EMPTY, {})

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls.const(1)

    @classmethod
    def const(cls, c: Coeff) -> "LaurentPoly":
        c = _norm(c)
        return cls(_EMPTY, {0: c} if c else {})

    @classmethod
    def var(cls, v: Var) -> "LaurentPoly":
        return cls.monomial({v: 1})

    @classmethod
    def monomial(cls, exps: Mapping[Var, int], coeff: Coeff = 1) -> "LaurentPoly":
        if exps.get(Y, 0) < 0:
            raise ValueError("negative power of y")
        lay = _layout_of(v for v, e in exps.items() if e)
        coeff = _norm(coeff)
        return cls(lay, {lay.encode(exps): coeff} if coeff else {})

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Mapping[Var, int], Coeff]]) -> "LaurentPoly":
        terms = list(terms)
        lay = _layout_of(v for exps, _ in terms for v, e in exps.items() if e)
        out: dict = {}
        for exps, c in terms:
            if exps.get(Y, 0) < 0:
                raise ValueError("negative power of y")
            k = lay.encode(exps)
            out[k] = out.get(k, 0) + c
        return cls(lay, {k: _norm(c) for k, c in out.items() if c})

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Parse an arithmetic expression in ``a{i}_{u}``, ``y`` and rationals.

        ``^`` and ``**`` both denote powers; division is allowed by nonzero
        constants and monomials.
        """
        tree = ast.parse(text.replace("^", "**"), mode="eval")
        return _eval_ast(tree.body)

    # internal access ----------------------------------------------------
    @property
    def layout(self) -> Layout:
        return self._layout

    @property
    def raw_terms(self) -> dict:
        return self._terms

    def _with(self, layout: Layout) -> dict:
        return _repack(self._terms, self._layout, layout)

    def _aligned(self, other: "LaurentPoly") -> tuple[Layout, dict, dict]:
        if self._layout is other._layout:
            return self._layout, self._terms, other._terms
        if not other._terms:
            return self._layout, self._terms, {}
        if not self._terms:
            return other._layout, {}, other._terms
        lay = _layout_of(self._layout.variables + other._layout.variables)
        return lay, self._with(lay), other._with(lay)

    def in_layout(self, layout: Layout) -> "LaurentPoly":
        """Same polynomial re-encoded over ``layout`` (a superset of variables)."""
        missing = set(self.variables()) - set(layout.variables)
        if missing:
            raise ValueError(f"layout lacks variables {sorted(map(str, missing))}")
        trimmed = self.trimmed()
        return LaurentPoly(layout, trimmed._with(layout))

    def trimmed(self) -> "LaurentPoly":
        """Drop layout variables that do not occur."""
        used = self.variables()
        if len(used) == len(self._layout.variables):
            return self
        lay = layout_for(used)
        return LaurentPoly(lay, self._with_subset(lay))

    def _with_subset(self, lay: Layout) -> dict:
        src = self._layout
        moves = [(src.shifts[src.index[v]], s) for v, s in zip(lay.variables, lay.shifts)]
        out = {}
        z = lay.zero
        for k, c in self._terms.items():
            nk = z
            for s, d in moves:
                nk += (((k >> s) & MASK) - BIAS) << d
            out[nk] = c
        return out

    # queries ------------------------------------------------------------
    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def variables(self) -> tuple[Var, ...]:
        lay = self._layout
        used = []
        for v, s in zip(lay.variables, lay.shifts):
            for k in self._terms:
                if (k >> s) & MASK != BIAS:
                    used.append(v)
                    break
        return tuple(used)

    def terms(self) -> list[tuple[dict[Var, int], Coeff]]:
        """Terms as ``(exponents, coefficient)`` from the largest monomial down."""
        lay = self._layout
        out = []
        for k in sorted(self._terms, reverse=True):
            exps = {v: e for v, e in zip(lay.variables, lay.decode(k)) if e}
            out.append((exps, self._terms[k]))
        return out

    def coefficient(self, exps: Mapping[Var, int]) -> Coeff:
        if any(v not in self._layout.index for v, e in exps.items() if e):
            return 0
        return self._terms.get(self._layout.encode(exps), 0)

    def constant_term(self) -> Coeff:
        return self._terms.get(self._layout.zero, 0)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and self._layout.zero in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def degree_in(self, v: Var) -> tuple[int, int]:
        """Minimal and maximal exponent of ``v`` (``(0, 0)`` for zero)."""
        if not self._terms:
            return (0, 0)
        es = [self._layout.exponent(k, v) for k in self._terms]
        return min(es), max(es)

    def alpha_degrees(self) -> tuple[int, int]:
        """Minimal and maximal total Chern-root degree over all terms."""
        lay = self._layout
        idx = [j for j, v in enumerate(lay.variables) if v.kind == 0]
        degs = [sum(lay.decode(k)[j] for j in idx) for k in self._terms]
        if not degs:
            return (0, 0)
        return min(degs), max(degs)

    def has_negative_exponents(self) -> bool:
        lay = self._layout
        return any(e < 0 for k in self._terms for e in lay.decode(k))

    # arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "LaurentPoly":
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        lay, a, b = self._aligned(other)
        out = dict(a)
        kernels.add_into(out, b)
        return LaurentPoly(lay, {k: _norm(c) for k, c in out.items() if c})

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self._layout, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        lay, a, b = self._aligned(other)
        out = dict(a)
        kernels.add_into(out, b, -1)
        return LaurentPoly(lay, {k: _norm(c) for k, c in out.items() if c})

    def __rsub__(self, other) -> "LaurentPoly":
        return _coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        lay, a, b = self._aligned(other)
        if not a or not b:
            return LaurentPoly.zero()
        out = kernels.mul(a, b, lay.zero)
        return LaurentPoly(lay, {k: _norm(c) for k, c in out.items()})

    __rmul__ = __mul__

    def scale(self, c: Coeff) -> "LaurentPoly":
        c = _norm(c)
        if not c:
            return LaurentPoly.zero()
        if c == 1:
            return self
        return LaurentPoly(self._layout, {k: _norm(v * c) for k, v in self._terms.items()})

    def __pow__(self, n: int) -> "LaurentPoly":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse_monomial() ** (-n)
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse_monomial(self) -> "LaurentPoly":
        if len(self._terms) != 1:
            raise NonInvertibleImage("only monomials are invertible")
        (k, c), = self._terms.items()
        exps = self._layout.decode(k)
        lay = self._layout
        if lay.index.get(Y) is not None and exps[lay.index[Y]] > 0:
            raise NonInvertibleImage("y is not invertible")
        return LaurentPoly(lay, {2 * lay.zero - k: _norm(Fraction(1) / c)})

    def __truediv__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return LaurentPoly(self._layout, {k: _div_coeff(c, other) for k, c in self._terms.items()})
        if isinstance(other, LaurentPoly):
            if other.is_constant():
                return self / other.constant_term()
            return self * other.inverse_monomial()
        return NotImplemented

    def div_exact(self, n: Coeff) -> "LaurentPoly":
        """Divide by a scalar, requiring integral results for integral input."""
        out = self / n
        if all(isinstance(c, int) for c in self._terms.values()) and not all(
            isinstance(c, int) for c in out._terms.values()
        ):
            raise NotDivisible(f"coefficients not divisible by {n}")
        return out

    # comparison ---------------------------------------------------------
    def _canonical(self) -> frozenset:
        lay = self._layout
        out = []
        for k, c in self._terms.items():
            mono = tuple((v, e) for v, e in zip(lay.variables, lay.decode(k)) if e)
            out.append((mono, c))
        return frozenset(out)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if self._layout is other._layout:
            return self._terms == other._terms
        if len(self._terms) != len(other._terms):
            return False
        return self._canonical() == other._canonical()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._canonical())
        return self._hash

    # structural operations ----------------------------------------------
    def rename(self, mapping: Mapping[Var, Var]) -> "LaurentPoly":
        """Injective renaming of variables (unmapped variables stay)."""
        lay = self._layout
        new_vars = [mapping.get(v, v) for v in lay.variables]
        if len(set(new_vars)) != len(new_vars):
            raise ValueError("renaming is not injective on the variables in use")
        dst = _layout_of(new_vars)
        moves = [(s, dst.shifts[dst.index[nv]]) for nv, s in zip(new_vars, lay.shifts)]
        z = dst.zero
        out = {}
        for k, c in self._terms.items():
            nk = z
            for s, d in moves:
                nk += (((k >> s) & MASK) - BIAS) << d
            out[nk] = c
        return LaurentPoly(dst, out)

    def permute(self, perm: Mapping[Var, Var]) -> "LaurentPoly":
        """Apply a permutation of variables that all lie in the layout.

        Faster than :meth:`rename` because the layout is kept.
        """
        lay = self._layout
        src = [lay.shifts[lay.index[v]] for v in perm]
        dst = [lay.shifts[lay.index[w]] for w in perm.values()]
        return LaurentPoly(lay, kernels.relabel(self._terms, src, dst))

    def substitute(self, assignment: Mapping[Var, object]) -> "LaurentPoly":
        """Simultaneously substitute variables; unassigned ones stay."""
        images = {v: _coerce(p) for v, p in assignment.items()}
        if all(
            p.is_monomial() and len(p.variables()) == 1 and p.constant_term() == 0
            and next(iter(p._terms.values())) == 1
            and p.degree_in(p.variables()[0]) == (1, 1)
            for p in images.values()
        ):
            mapping = {v: p.variables()[0] for v, p in images.items()}
            targets = list(mapping.values())
            kept = [v for v in self.variables() if v not in mapping]
            if len(set(targets)) == len(targets) and not set(targets) & set(kept):
                return self.rename(mapping)
        lay = self._layout
        powers: dict = {}

        def power(v: Var, e: int) -> LaurentPoly:
            key = (v, e)
            if key not in powers:
                base = images.get(v)
                if base is None:
                    base = LaurentPoly.var(v)
                if e < 0 and not base.is_monomial():
                    raise NonInvertibleImage(f"cannot invert image of {v}")
                powers[key] = base ** e
            return powers[key]

        total: dict = {}
        out_lay = None
        parts = []
        for k, c in self._terms.items():
            term = LaurentPoly.const(c)
            for v, e in zip(lay.variables, lay.decode(k)):
                if e:
                    term = term * power(v, e)
            parts.append(term)
        if not parts:
            return LaurentPoly.zero()
        out_lay = _layout_of(v for p in parts for v in p._layout.variables)
        for p in parts:
            kernels.add_into(total, p._with(out_lay))
        return LaurentPoly(out_lay, {k: _norm(c) for k, c in total.items() if c})

    def exact_div_linear(self, x: Var, ybar: "LaurentPoly | Var") -> "LaurentPoly":
        """Return ``q`` with ``self == (x - ybar) * q``.

        ``ybar`` must be a monomial (with coefficient) not involving ``x``.
        Raises :class:`NotDivisible` if the remainder is nonzero.
        """
        if isinstance(ybar, Var):
            ybar = LaurentPoly.var(ybar)
        if not self._terms:
            return self
        if not ybar.is_monomial():
            raise ValueError("ybar must be a monomial")
        if x in ybar.variables():
            raise ValueError("ybar must not involve x")
        base = _layout_of(self._layout.variables + ybar._layout.variables + (x,))
        p = self._with(base) if self._layout is not base else self._terms
        (mk, mc), = ybar._with(base).items()
        q = kernels.div_linear(p, base.shifts[base.index[x]], mk - base.zero, mc)
        return LaurentPoly(base, q)

    def exact_div_univariate(self, v: Var, divisor: "LaurentPoly") -> "LaurentPoly":
        """Exact division by a polynomial in the single variable ``v``."""
        dvars = divisor.variables()
        if any(w != v for w in dvars):
            raise ValueError("divisor must be univariate in v")
        if divisor.is_constant():
            return self / divisor.constant_term()
        dterms = {divisor._layout.exponent(k, v): c for k, c in divisor._terms.items()}
        dtop = max(dterms)
        dlow = min(dterms)
        if dlow < 0:
            raise ValueError("divisor must be a polynomial")
        lead = dterms[dtop]
        lay = _layout_of(self._layout.variables + (v,))
        vshift = lay.shifts[lay.index[v]]
        rem = dict(self._with(lay))
        q: dict = {}
        while rem:
            top = max(((k >> vshift) & MASK) - BIAS for k in rem)
            lowest = min(((k >> vshift) & MASK) - BIAS for k in rem)
            if top - dtop < lowest - dlow:
                raise NotDivisible("remainder is nonzero")
            lead_terms = {k: c for k, c in rem.items() if ((k >> vshift) & MASK) - BIAS == top}
            for k, c in lead_terms.items():
                qc = _div_coeff(c, lead)
                qk = k - (dtop << vshift)
                q[qk] = q.get(qk, 0) + qc
                for e, dc in dterms.items():
                    nk = qk + (e << vshift)
                    rem[nk] = rem.get(nk, 0) - qc * dc
            rem = {k: c for k, c in rem.items() if c}
        return LaurentPoly(lay, {k: _norm(c) for k, c in q.items() if c})

    def evaluate(self, point: Mapping[Var, Coeff]) -> Fraction:
        """Exact value at a rational point (all variables must be assigned)."""
        total = Fraction(0)
        for c, exps in self._sparse_terms():
            term = Fraction(c)
            for v, e in exps:
                if v not in point:
                    raise KeyError(f"no value for {v}")
                term *= Fraction(point[v]) ** e
            total += term
        return total

    def evaluate_mod(self, point: Mapping[Var, int], prime: int) -> int:
        """Value modulo ``prime`` at an integer point (no coordinate may vanish)."""
        total = 0
        for c, exps in self._sparse_terms():
            if isinstance(c, Fraction):
                term = c.numerator * pow(c.denominator, -1, prime) % prime
            else:
                term = c % prime
            for v, e in exps:
                if v not in point:
                    raise KeyError(f"no value for {v}")
                term = term * pow(point[v], e, prime) % prime
            total += term
        return total % prime

    def is_symmetric(self, blocks: Iterable[Iterable[Var]]) -> bool:
        for block in blocks:
            block = list(block)
            for v, w in zip(block, block[1:]):
                if self.rename({v: w, w: v}) != self:
                    return False
        return True

    # rendering ----------------------------------------------------------
    def to_text(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for exps, c in self.terms():
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            factors = []
            for v, e in sorted(exps.items()):
                factors.append(str(v) if e == 1 else f"{v}^{e}")
            if not factors:
                body = str(a)
            elif a == 1:
                body = "*".join(factors)
            else:
                body = f"{a}*" + "*".join(factors)
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    __str__ = to_text

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_text()!r})"

    def to_json(self) -> list[dict]:
        out = []
        for exps, c in self.terms():
            c = Fraction(c)
            out.append(
                {
                    "exponents": {str(v): e for v, e in sorted(exps.items())},
                    "coeff": [c.numerator, c.denominator],
                }
            )
        return out

    @classmethod
    def from_json(cls, data: list[dict]) -> "LaurentPoly":
        return cls.from_terms(
            ({parse_var(name): e for name, e in t["exponents"].items()}, Fraction(*t["coeff"]))
            for t in data
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _eval_ast(node) -> LaurentPoly:
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return LaurentPoly.const(node.value)
    if isinstance(node, ast.Name):
        return LaurentPoly.var(parse_var(node.id))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        val = _eval_ast(node.operand)
        return -val if isinstance(node.op, ast.USub) else val
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            exp = node.right
            sign = 1
            if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                sign, exp = -1, exp.operand
            if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                raise ValueError("exponents must be integer literals")
            return _eval_ast(node.left) ** (sign * exp.value)
        left, right = _eval_ast(node.left), _eval_ast(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if right.is_constant():
                c = right.constant_term()
                return left.scale(Fraction(1) / c) if c else left / 0
            return left / right
    raise ValueError(f"unsupported syntax: {ast.dump(node)}")


class RationalExpr:
    """Numerator over a factored denominator ``monomial * prod (x - ybar)^k``.

    The denominator is never expanded; :meth:`to_poly` clears it with exact
    linear divisions.
    """

    __slots__ = ("numerator", "linear_factors", "monomial")

    def __init__(
        self,
        numerator: LaurentPoly,
        linear_factors: Iterable[tuple[Var, LaurentPoly, int]] = (),
        monomial: LaurentPoly | None = None,
    ):
        self.numerator = numerator
        self.linear_factors = tuple(linear_factors)
        self.monomial = LaurentPoly.one() if monomial is None else monomial
        if not self.monomial.is_monomial():
            raise ValueError("monomial part must be a monomial")

    def to_poly(self) -> LaurentPoly:
        p = self.numerator / self.monomial
        for x, ybar, k in self.linear_factors:
            for _ in range(k):
                p = p.exact_div_linear(x, ybar)
        return p

    def evaluate(self, point: Mapping[Var, Coeff]) -> Fraction:
        den = self.monomial.evaluate(point)
        for x, ybar, k in self.linear_factors:
            den *= (Fraction(point[x]) - ybar.evaluate(point)) ** k
        return self.numerator.evaluate(point) / den

    def __repr__(self) -> str:
        den = " * ".join(f"({x} - {y})^{k}" for x, y, k in self.linear_factors)
        return f"RationalExpr(({self.numerator}) / ({self.monomial}{' * ' + den if den else ''}))"


# functional spellings of the ring operations
def add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return _coerce(p) + q


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return _coerce(p) * q


def exact_div_linear(p: LaurentPoly, x: Var, ybar) -> LaurentPoly:
    return p.exact_div_linear(x, ybar)


def substitute(p: LaurentPoly, assignment: Mapping[Var, object]) -> LaurentPoly:
    return p.substitute(assignment)


def is_symmetric(p: LaurentPoly, blocks: Iterable[Iterable[Var]]) -> bool:
    return p.is_symmetric(blocks)
