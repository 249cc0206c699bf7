"""Small sparse multivariate polynomial type.

Coefficients may be ``Fraction`` (exact pipeline) or ``float``; the class
never converts between them on its own.
"""

from fractions import Fraction
from numbers import Number


class Poly:
    """Sparse polynomial in ``nvars`` variables.

    Terms are kept as ``{exponent tuple: coefficient}`` with zero
    coefficients dropped, so two equal polynomials have equal term maps.
    """

    __slots__ = ("nvars", "terms", "names")

    def __init__(self, nvars, terms=None, names=None):
        self.nvars = nvars
        self.names = names or tuple(f"x{i + 1}" for i in range(nvars))
        self.terms = {}
        for exps, coef in (terms or {}).items():
            if len(exps) != nvars:
                raise ValueError(f"exponent {exps} does not have {nvars} entries")
            if coef != 0:
                self.terms[tuple(exps)] = self.terms.get(tuple(exps), 0) + coef
        self.terms = {e: c for e, c in self.terms.items() if c != 0}

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, nvars, value, names=None):
        return cls(nvars, {(0,) * nvars: value}, names)

    @classmethod
    def variable(cls, nvars, index, names=None):
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): 1}, names)

    @classmethod
    def linear(cls, coefs, names=None):
        """``sum(c_i * x_i)`` for the given coefficient sequence."""
        nvars = len(coefs)
        terms = {}
        for i, c in enumerate(coefs):
            exps = [0] * nvars
            exps[i] = 1
            terms[tuple(exps)] = c
        return cls(nvars, terms, names)

    def _new(self, terms):
        out = Poly.__new__(Poly)
        out.nvars = self.nvars
        out.names = self.names
        out.terms = {e: c for e, c in terms.items() if c != 0}
        return out

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        if isinstance(other, Number):
            return Poly.constant(self.nvars, other, self.names)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return self._new({e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return self._new(terms)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, Number):
            return NotImplemented
        return self._new({e: c / scalar for e, c in self.terms.items()})

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = Poly.constant(self.nvars, 1, self.names)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- calculus and structure ------------------------------------------
    def diff(self, index):
        terms = {}
        for e, c in self.terms.items():
            if e[index] == 0:
                continue
            new = list(e)
            new[index] -= 1
            terms[tuple(new)] = terms.get(tuple(new), 0) + c * e[index]
        return self._new(terms)

    def degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degrees(self):
        return sorted({sum(e) for e in self.terms})

    def homogeneous(self, k):
        return self._new({e: c for e, c in self.terms.items() if sum(e) == k})

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), 0)

    def is_zero(self, tol=0):
        return all(abs(c) <= tol for c in self.terms.values())

    def compose(self, images):
        """Substitute ``x_i -> images[i]`` (polynomials in a common ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        target = images[0]
        out = Poly(target.nvars, {}, target.names)
        cache = {}
        for e, c in self.terms.items():
            term = Poly.constant(target.nvars, c, target.names)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    term = term * cache[key]
            out = out + term
        return out

    def map_coefficients(self, fn):
        return self._new({e: fn(c) for e, c in self.terms.items()})

    def to_float(self):
        return self.map_coefficients(float)

    def __call__(self, *point):
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * x**k
            total = total + term
        return total

    def almost_equal(self, other, tol=1e-12):
        diff = self - other
        return diff.is_zero(tol)

    # -- display ----------------------------------------------------------
    def __repr__(self):
        return f"Poly({self.nvars}, {self.terms!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-k for k in e))):
            c = self.terms[e]
            mono = "*".join(
                name if k == 1 else f"{name}^{k}"
                for name, k in zip(self.names, e)
                if k
            )
            coef = str(c) if isinstance(c, Fraction) else repr(c)
            parts.append(f"{coef}*{mono}" if mono else coef)
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        """List of ``{"exponents": [...], "coefficient": ...}`` records."""
        rows = []
        for e in sorted(self.terms):
            c = self.terms[e]
            value = str(c) if isinstance(c, (Fraction, int)) else float(c)
            rows.append({"exponents": list(e), "coefficient": value})
        return rows
