"""Exact multivariate polynomials over the rationals.

Polynomials are the backbone of every section and coordinate change: keeping
their arithmetic exact lets cocycle and intertwining identities be decided by
normal-form comparison instead of floating tolerances.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from ._util import as_fraction


class Polynomial:
    """A polynomial in ``nvars`` variables with Fraction coefficients.

    Internal representation: dict mapping exponent tuples to nonzero
    Fractions.  The representation is canonical, so ``==`` decides equality
    of polynomials.
    """

    __slots__ = ("nvars", "coeffs")

    def __init__(self, nvars: int, coeffs: dict | None = None):
        self.nvars = int(nvars)
        clean = {}
        if coeffs:
            for exps, c in coeffs.items():
                c = as_fraction(c)
                if c == 0:
                    continue
                exps = tuple(int(e) for e in exps)
                if len(exps) != self.nvars:
                    raise ValueError("exponent tuple has wrong length")
                clean[exps] = clean.get(exps, Fraction(0)) + c
        self.coeffs = {e: c for e, c in clean.items() if c != 0}

    # -- constructors -------------------------------------------------

    @staticmethod
    def constant(nvars: int, value) -> "Polynomial":
        v = as_fraction(value)
        if v == 0:
            return Polynomial(nvars, {})
        return Polynomial(nvars, {(0,) * nvars: v})

    @staticmethod
    def variable(nvars: int, index: int) -> "Polynomial":
        exps = [0] * nvars
        exps[index] = 1
        return Polynomial(nvars, {tuple(exps): Fraction(1)})

    # -- ring operations ----------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise ValueError("polynomials in different variable counts")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other)
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Polynomial(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other)
        self._check(other)
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.coeffs.items()))))

    def is_zero(self) -> bool:
        return not self.coeffs

    # -- calculus ------------------------------------------------------

    def derivative(self, var: int) -> "Polynomial":
        out = {}
        for e, c in self.coeffs.items():
            if e[var] == 0:
                continue
            ne = list(e)
            ne[var] -= 1
            out[tuple(ne)] = c * e[var]
        return Polynomial(self.nvars, out)

    def gradient(self) -> list:
        return [self.derivative(i) for i in range(self.nvars)]

    # -- evaluation -----------------------------------------------------

    def __call__(self, point: Sequence):
        """Evaluate; exact when all coordinates are Fractions/ints."""
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        exact = all(isinstance(x, (Fraction, int)) for x in point)
        total = Fraction(0) if exact else 0.0
        for e, c in self.coeffs.items():
            term = c if exact else float(c)
            for x, k in zip(point, e):
                if k:
                    term *= x**k
            total += term
        return total

    def compose(self, args: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute args[i] for variable i (all args share one variable count)."""
        if len(args) != self.nvars:
            raise ValueError("wrong number of substitution arguments")
        if args:
            m = args[0].nvars
        else:
            m = 0
        out = Polynomial.constant(m, 0)
        for e, c in self.coeffs.items():
            term = Polynomial.constant(m, c)
            for arg, k in zip(args, e):
                if k:
                    term = term * arg**k
            out = out + term
        return out

    def interval(self, box: Sequence[tuple]) -> tuple:
        """Interval evaluation over a box [(lo, hi), ...]; exact rational bounds."""
        lo_total, hi_total = Fraction(0), Fraction(0)
        for e, c in self.coeffs.items():
            lo, hi = Fraction(1), Fraction(1)
            for (a, b), k in zip(box, e):
                if k == 0:
                    continue
                a, b = as_fraction(a), as_fraction(b)
                cands = [a**k, b**k]
                if a < 0 < b and k % 2 == 0:
                    cands.append(Fraction(0))
                plo, phi = min(cands), max(cands)
                cands2 = [lo * plo, lo * phi, hi * plo, hi * phi]
                lo, hi = min(cands2), max(cands2)
            if c >= 0:
                lo_total += c * lo
                hi_total += c * hi
            else:
                lo_total += c * hi
                hi_total += c * lo
        return lo_total, hi_total

    def coeff_l1(self) -> Fraction:
        return sum((abs(c) for c in self.coeffs.values()), Fraction(0))

    def degree(self) -> int:
        if not self.coeffs:
            return 0
        return max(sum(e) for e in self.coeffs)

    # -- formatting ------------------------------------------------------

    def __repr__(self):
        return f"Polynomial({self.to_string()!r})"

    def to_string(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in sorted(self.coeffs.items(), key=lambda item: (sum(item[0]), item[0]), reverse=True):
            factors = []
            if c == -1 and any(e):
                head = "-"
            elif c == 1 and any(e):
                head = ""
            else:
                head = str(c)
                if any(e):
                    head += "*"
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(f"x{i + 1}")
                elif k > 1:
                    factors.append(f"x{i + 1}^{k}")
            parts.append(head + "*".join(factors))
        s = " + ".join(parts)
        return s.replace("+ -", "- ")


# ---------------------------------------------------------------------------
# Parsing.  Grammar: rational coefficients, + - *, integer ^, variables x<k>.
# ---------------------------------------------------------------------------


class _Tokens:
    def __init__(self, text: str):
        self.toks = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch in "+-*^()":
                self.toks.append(ch)
                i += 1
            elif ch == "/":
                self.toks.append(ch)
                i += 1
            elif ch.isdigit() or ch == ".":
                j = i
                while j < len(text) and (text[j].isdigit() or text[j] == "."):
                    j += 1
                self.toks.append(text[i:j])
                i = j
            elif ch == "x":
                j = i + 1
                while j < len(text) and text[j].isdigit():
                    j += 1
                if j == i + 1:
                    raise ValueError(f"bad variable name at {text[i:]!r}")
                self.toks.append(text[i:j])
                i = j
            else:
                raise ValueError(f"unexpected character {ch!r} in polynomial")
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self):
        t = self.peek()
        self.pos += 1
        return t


def parse_polynomial(text: str, nvars: int) -> Polynomial:
    """Parse the polynomial grammar into an exact Polynomial.

    Coefficients may be integers, decimals, or a/b fractions; variables are
    x1..x<nvars>; operators are + - * and integer ^ with () grouping.
    """
    toks = _Tokens(str(text))

    def parse_expr():
        node = parse_term()
        while toks.peek() in ("+", "-"):
            op = toks.next()
            rhs = parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term():
        node = parse_factor()
        while True:
            nxt = toks.peek()
            if nxt == "*":
                toks.next()
                node = node * parse_factor()
            elif nxt == "/":
                # allow rational written as p/q for a constant denominator
                toks.next()
                den = parse_factor()
                if den.degree() != 0 or den.is_zero():
                    raise ValueError("division only by nonzero constants")
                node = node * Polynomial.constant(nvars, 1 / den.coeffs[(0,) * nvars])
            else:
                return node

    def parse_factor():
        base = parse_atom()
        if toks.peek() == "^":
            toks.next()
            exp = toks.next()
            if exp is None or not exp.isdigit():
                raise ValueError("exponent must be a nonnegative integer")
            return base ** int(exp)
        return base

    def parse_atom():
        t = toks.next()
        if t is None:
            raise ValueError("unexpected end of polynomial")
        if t == "(":
            node = parse_expr()
            if toks.next() != ")":
                raise ValueError("unbalanced parenthesis")
            return node
        if t == "-":
            # unary minus binds weaker than ^, so -x1^2 means -(x1^2)
            return -parse_factor()
        if t == "+":
            return parse_factor()
        if t.startswith("x"):
            idx = int(t[1:]) - 1
            if not 0 <= idx < nvars:
                raise ValueError(f"variable {t} out of range for {nvars} variables")
            return Polynomial.variable(nvars, idx)
        # numeric token
        return Polynomial.constant(nvars, Fraction(t))

    node = parse_expr()
    if toks.peek() is not None:
        raise ValueError(f"trailing tokens in polynomial: {toks.toks[toks.pos:]}")
    return node


def parse_polynomials(texts: Iterable[str], nvars: int) -> list:
    return [parse_polynomial(t, nvars) for t in texts]
