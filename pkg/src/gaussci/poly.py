"""Sparse multivariate polynomials with exact integer coefficients.

Two kinds of variables appear: error variances ``w<v>`` (one per node) and
edge weights ``l<a>_<b>`` (one per edge).  A variable is a plain tuple so
ordering and hashing come for free:

* ``(0, v)`` is the omega variable of node v,
* ``(1, a, b)`` is the lambda variable of edge a -> b.

All omega variables precede all lambda variables; omegas sort by node,
lambdas by (a, b).  A monomial is a tuple of (variable, exponent) pairs
sorted by variable; the empty tuple is the constant monomial.  Terms are
kept in a dict and iterated in graded lexicographic order (total degree
first, then lex on the variable order), largest term first, which fixes
the canonical text form.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Mapping, Sequence

Variable = tuple
Monomial = tuple


class NotDivisible(ValueError):
    """Raised by exact_divide when no polynomial quotient exists."""


def omega_var(v: int) -> Variable:
    return (0, int(v))


def lambda_var(a: int, b: int) -> Variable:
    return (1, int(a), int(b))


def variable_text(var: Variable) -> str:
    if var[0] == 0:
        return f"w{var[1]}"
    return f"l{var[1]}_{var[2]}"


def monomial_degree(mono: Monomial) -> int:
    return sum(e for _, e in mono)


def monomial_mul(m1: Monomial, m2: Monomial) -> Monomial:
    """Product of two monomials (merge of sorted exponent lists)."""
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        v1, e1 = m1[i]
        v2, e2 = m2[j]
        if v1 == v2:
            out.append((v1, e1 + e2))
            i += 1
            j += 1
        elif v1 < v2:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def monomial_div(m1: Monomial, m2: Monomial) -> Monomial | None:
    """m1 / m2, or None when some exponent would go negative."""
    if not m2:
        return m1
    exps = dict(m1)
    for v, e in m2:
        left = exps.get(v, 0) - e
        if left < 0:
            return None
        if left == 0:
            exps.pop(v, None)
        else:
            exps[v] = left
    return tuple(sorted(exps.items()))


def _mono_key(mono: Monomial):
    # Ascending sort by this key lists terms in descending graded lex order.
    return (-monomial_degree(mono), tuple((v, -e) for v, e in mono))


def _monomial_text(mono: Monomial) -> str:
    parts = []
    for v, e in mono:
        t = variable_text(v)
        parts.append(t if e == 1 else f"{t}^{e}")
    return "*".join(parts)


class MvPoly:
    """Immutable sparse polynomial with int coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        clean: dict[Monomial, int] = {}
        if terms:
            for mono, coef in terms.items():
                if coef:
                    clean[mono] = int(coef)
        self._terms = clean
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "MvPoly":
        return cls()

    @classmethod
    def constant(cls, c: int) -> "MvPoly":
        return cls({(): int(c)}) if c else cls()

    @classmethod
    def variable(cls, var: Variable) -> "MvPoly":
        return cls({((var, 1),): 1})

    @classmethod
    def term(cls, mono: Monomial, coef: int = 1) -> "MvPoly":
        return cls({mono: coef})

    # -- predicates and views ------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        """Exactly one term; the zero polynomial is not a monomial."""
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def terms(self) -> list[tuple[Monomial, int]]:
        """Terms in canonical (descending graded lex) order."""
        return sorted(self._terms.items(), key=lambda kv: _mono_key(kv[0]))

    def terms_dict(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def leading(self) -> tuple[Monomial, int]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        mono = min(self._terms, key=_mono_key)
        return mono, self._terms[mono]

    def variables(self) -> set[Variable]:
        out: set[Variable] = set()
        for mono in self._terms:
            out.update(v for v, _ in mono)
        return out

    def total_degree(self) -> int:
        if not self._terms:
            return 0
        return max(monomial_degree(m) for m in self._terms)

    def coefficient(self, mono: Monomial) -> int:
        return self._terms.get(mono, 0)

    def content(self) -> int:
        """Positive gcd of all coefficients (0 for the zero polynomial)."""
        g = 0
        for c in self._terms.values():
            g = gcd(g, abs(c))
            if g == 1:
                break
        return g

    def primitive_part(self) -> "MvPoly":
        g = self.content()
        if g <= 1:
            return self
        return MvPoly({m: c // g for m, c in self._terms.items()})

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "MvPoly") -> "MvPoly":
        if not isinstance(other, MvPoly):
            return NotImplemented
        acc = dict(self._terms)
        for mono, coef in other._terms.items():
            s = acc.get(mono, 0) + coef
            if s:
                acc[mono] = s
            else:
                acc.pop(mono, None)
        out = MvPoly.__new__(MvPoly)
        out._terms = acc
        out._hash = None
        return out

    def __neg__(self) -> "MvPoly":
        out = MvPoly.__new__(MvPoly)
        out._terms = {m: -c for m, c in self._terms.items()}
        out._hash = None
        return out

    def __sub__(self, other: "MvPoly") -> "MvPoly":
        if not isinstance(other, MvPoly):
            return NotImplemented
        acc = dict(self._terms)
        for mono, coef in other._terms.items():
            s = acc.get(mono, 0) - coef
            if s:
                acc[mono] = s
            else:
                acc.pop(mono, None)
        out = MvPoly.__new__(MvPoly)
        out._terms = acc
        out._hash = None
        return out

    def __mul__(self, other: "MvPoly") -> "MvPoly":
        if not isinstance(other, MvPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return MvPoly()
        if len(a) > len(b):
            a, b = b, a
        acc: dict[Monomial, int] = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = monomial_mul(m1, m2)
                s = acc.get(m, 0) + c1 * c2
                if s:
                    acc[m] = s
                else:
                    acc.pop(m, None)
        out = MvPoly.__new__(MvPoly)
        out._terms = acc
        out._hash = None
        return out

    def scale(self, c: int) -> "MvPoly":
        if not c:
            return MvPoly()
        out = MvPoly.__new__(MvPoly)
        out._terms = {m: k * c for m, k in self._terms.items()}
        out._hash = None
        return out

    def __pow__(self, k: int) -> "MvPoly":
        if k < 0:
            raise ValueError("negative power")
        result = MvPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, MvPoly) and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- misc ----------------------------------------------------------------

    def evaluate(self, values: Mapping[Variable, float]) -> float:
        """Numeric value at a point; every variable present must be mapped."""
        total = 0.0
        for mono, coef in self._terms.items():
            x = float(coef)
            for v, e in mono:
                x *= values[v] ** e
            total += x
        return total

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for idx, (mono, coef) in enumerate(self.terms()):
            sign = "-" if coef < 0 else "+"
            mag = abs(coef)
            if mono:
                body = _monomial_text(mono)
                if mag != 1:
                    body = f"{mag}*{body}"
            else:
                body = str(mag)
            if idx == 0:
                pieces.append(body if coef > 0 else f"-{body}")
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"MvPoly({self})"


def add(f: MvPoly, g: MvPoly) -> MvPoly:
    return f + g


def mul(f: MvPoly, g: MvPoly) -> MvPoly:
    return f * g


def negate(f: MvPoly) -> MvPoly:
    return -f


def exact_divide(f: MvPoly, g: MvPoly) -> MvPoly:
    """Quotient q with f == q*g, via greedy leading-term division.

    Raises :class:`NotDivisible` when no such q exists over the integers.
    With a single divisor the greedy loop is a complete decision procedure:
    whenever g divides f, every intermediate leading term of the remainder
    is a term of the true quotient.  A quotient that exists over the
    rationals but not the integers also raises; callers wanting the
    rational divisibility test should strip integer content first
    (Gauss's lemma makes the primitive parts decide it).
    """
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero():
        return MvPoly()
    lg_mono, lg_coef = g.leading()
    g_terms = g.terms_dict()
    rem = dict(f.terms_dict())
    quo: dict[Monomial, int] = {}
    while rem:
        lr_mono = min(rem, key=_mono_key)
        lr_coef = rem[lr_mono]
        qm = monomial_div(lr_mono, lg_mono)
        if qm is None:
            raise NotDivisible("leading monomial not divisible")
        qc, residue = divmod(lr_coef, lg_coef)
        if residue:
            raise NotDivisible("leading coefficient not divisible")
        quo[qm] = quo.get(qm, 0) + qc
        for m2, c2 in g_terms.items():
            m = monomial_mul(qm, m2)
            s = rem.get(m, 0) - qc * c2
            if s:
                rem[m] = s
            else:
                rem.pop(m, None)
    return MvPoly(quo)


def divides(g: MvPoly, f: MvPoly) -> bool:
    """True when g divides f over the rationals (content-insensitive)."""
    if g.is_zero():
        return f.is_zero()
    try:
        exact_divide(f.primitive_part(), g.primitive_part())
        return True
    except NotDivisible:
        return False


def monomial_factors(f: MvPoly) -> tuple[Monomial, MvPoly]:
    """Largest monomial m dividing every term, and the cofactor f/m.

    The cofactor has no remaining common variable factor; the integer
    content is deliberately left alone.  Undefined for the zero polynomial.
    """
    if f.is_zero():
        raise ValueError("zero polynomial has no monomial factorization")
    common: dict[Variable, int] | None = None
    for mono in f.terms_dict():
        exps = dict(mono)
        if common is None:
            common = exps
        else:
            common = {
                v: min(e, exps[v]) for v, e in common.items() if v in exps
            }
        if not common:
            break
    mono = tuple(sorted((common or {}).items()))
    if not mono:
        return (), f
    cof = {monomial_div(m, mono): c for m, c in f.terms_dict().items()}
    return mono, MvPoly(cof)


# -- matrices ----------------------------------------------------------------


@dataclass(frozen=True)
class PolyMatrix:
    """Square matrix of polynomials (rows of equal length)."""

    entries: tuple[tuple[MvPoly, ...], ...]

    def __post_init__(self):
        d = len(self.entries)
        for row in self.entries:
            if len(row) != d:
                raise ValueError("matrix must be square")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[MvPoly]]) -> "PolyMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @property
    def dim(self) -> int:
        return len(self.entries)


def _det_cofactor(rows: list[list[MvPoly]]) -> MvPoly:
    d = len(rows)
    if d == 1:
        return rows[0][0]
    if d == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    # dim 3: first-row expansion
    a, b, c = rows[0]
    m1 = rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1]
    m2 = rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0]
    m3 = rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]
    return a * m1 - b * m2 + c * m3


def _det_bareiss(rows: list[list[MvPoly]]) -> MvPoly:
    """Fraction-free Bareiss elimination with row pivoting.

    Every interior division is by the previous pivot and is exact by the
    Sylvester identity; a failed division would mean corrupted arithmetic,
    so it is surfaced as a hard error rather than NotDivisible.
    """
    d = len(rows)
    m = [row[:] for row in rows]
    sign = 1
    prev = MvPoly.constant(1)
    for k in range(d - 1):
        if m[k][k].is_zero():
            pivot_row = next(
                (r for r in range(k + 1, d) if not m[r][k].is_zero()), None
            )
            if pivot_row is None:
                return MvPoly()
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, d):
            for j in range(k + 1, d):
                num = pivot * m[i][j] - m[i][k] * m[k][j]
                try:
                    m[i][j] = exact_divide(num, prev)
                except NotDivisible as exc:  # pragma: no cover - invariant
                    raise AssertionError(
                        "Bareiss interior division failed"
                    ) from exc
        prev = pivot
    det = m[d - 1][d - 1]
    return det if sign > 0 else -det


def determinant(matrix: PolyMatrix | Sequence[Sequence[MvPoly]]) -> MvPoly:
    """Exact determinant: cofactor expansion below dim 4, Bareiss from 4 up."""
    if isinstance(matrix, PolyMatrix):
        rows = [list(row) for row in matrix.entries]
    else:
        rows = [list(row) for row in matrix]
        d = len(rows)
        for row in rows:
            if len(row) != d:
                raise ValueError("matrix must be square")
    if not rows:
        raise ValueError("empty matrix")
    if len(rows) < 4:
        return _det_cofactor(rows)
    return _det_bareiss(rows)
