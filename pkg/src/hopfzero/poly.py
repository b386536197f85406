"""Sparse multivariate polynomials over the exact rationals.

A Polynomial maps exponent tuples to nonzero rational coefficients over a
fixed, ordered variable list.  Everything here is exact; no floats enter.
Canonical term order is graded lexicographic, which makes serialization and
report output deterministic.
"""

from __future__ import annotations

from .rationals import Q, ZERO, rational


class VariableMismatch(ValueError):
    """Operands are defined over different variable lists."""


class Polynomial:
    __slots__ = ("variables", "terms")

    def __init__(self, variables, terms=None):
        self.variables = tuple(variables)
        self.terms = {}
        if terms:
            for exps, c in terms.items():
                if c:
                    self.terms[tuple(exps)] = Q(c)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, variables):
        return cls(variables)

    @classmethod
    def constant(cls, variables, c):
        variables = tuple(variables)
        p = cls(variables)
        c = Q(c)
        if c:
            p.terms[(0,) * len(variables)] = c
        return p

    @classmethod
    def variable(cls, variables, name):
        variables = tuple(variables)
        exps = [0] * len(variables)
        exps[variables.index(name)] = 1
        return cls(variables, {tuple(exps): Q(1)})

    @classmethod
    def monomial(cls, variables, exps, c=1):
        return cls(variables, {tuple(exps): Q(c)})

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), ZERO)

    def constant_term(self):
        return self.terms.get((0,) * len(self.variables), ZERO)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.variables == other.variables
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # -- arithmetic ---------------------------------------------------

    def _check(self, other):
        if self.variables != other.variables:
            raise VariableMismatch(
                f"variable lists differ: {self.variables} vs {other.variables}"
            )

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.variables, other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e, ZERO) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        out = Polynomial(self.variables)
        out.terms = terms
        return out

    def __neg__(self):
        out = Polynomial(self.variables)
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.variables, other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = Q(other)
            out = Polynomial(self.variables)
            if c:
                out.terms = {e: v * c for e, v in self.terms.items()}
            return out
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = terms.get(e, ZERO) + c1 * c2
                if v:
                    terms[e] = v
                else:
                    terms.pop(e, None)
        out = Polynomial(self.variables)
        out.terms = terms
        return out

    __rmul__ = __mul__
    __radd__ = __add__

    def __pow__(self, n: int):
        out = Polynomial.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def scale(self, c):
        return self * c

    # -- structure ----------------------------------------------------

    def truncate(self, d: int) -> "Polynomial":
        """Drop all terms of total degree > d."""
        out = Polynomial(self.variables)
        out.terms = {e: c for e, c in self.terms.items() if sum(e) <= d}
        return out

    def homogeneous_part(self, d: int) -> "Polynomial":
        out = Polynomial(self.variables)
        out.terms = {e: c for e, c in self.terms.items() if sum(e) == d}
        return out

    def derivative(self, name) -> "Polynomial":
        i = self.variables.index(name)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                terms[tuple(e2)] = c * e[i]
        out = Polynomial(self.variables)
        out.terms = terms
        return out

    def substitute(self, assignment) -> "Polynomial":
        """Replace some variables by rational values; keeps the variable list."""
        idx = {self.variables.index(k): Q(v) for k, v in assignment.items()}
        out = Polynomial(self.variables)
        for e, c in self.terms.items():
            v = c
            e2 = list(e)
            for i, val in idx.items():
                v *= val ** e[i]
                e2[i] = 0
            e2 = tuple(e2)
            acc = out.terms.get(e2, ZERO) + v
            if acc:
                out.terms[e2] = acc
            else:
                out.terms.pop(e2, None)
        return out

    def evaluate(self, assignment):
        """Evaluate at rational values for all variables."""
        total = ZERO
        vals = [Q(assignment[v]) for v in self.variables]
        for e, c in self.terms.items():
            v = c
            for x, p in zip(vals, e):
                if p:
                    v *= x**p
            total += v
        return total

    def rename(self, variables) -> "Polynomial":
        variables = tuple(variables)
        if len(variables) != len(self.variables):
            raise VariableMismatch("rename must keep the variable count")
        out = Polynomial(variables)
        out.terms = dict(self.terms)
        return out

    def extend(self, variables) -> "Polynomial":
        """Re-express over a superset variable list."""
        variables = tuple(variables)
        pos = [variables.index(v) for v in self.variables]
        out = Polynomial(variables)
        for e, c in self.terms.items():
            e2 = [0] * len(variables)
            for p, x in zip(pos, e):
                e2[p] = x
            out.terms[tuple(e2)] = c
        return out

    # -- univariate views ----------------------------------------------

    def degree_in(self, name) -> int:
        i = self.variables.index(name)
        return max((e[i] for e in self.terms), default=0)

    def coefficients_in(self, name):
        """Coefficients of powers of one variable, as polynomials in the rest."""
        i = self.variables.index(name)
        rest = self.variables
        out = {}
        for e, c in self.terms.items():
            d = e[i]
            e2 = list(e)
            e2[i] = 0
            p = out.setdefault(d, Polynomial(rest))
            p.terms[tuple(e2)] = p.terms.get(tuple(e2), ZERO) + c
        return {d: p for d, p in out.items() if p.terms}

    # -- canonical order and rendering ---------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: (sum(item[0]), item[0]))

    def serialize(self):
        """Canonical record list used by all report emitters."""
        return [
            {
                "coeff_num": int(c.numerator),
                "coeff_den": int(c.denominator),
                "exponents": list(e),
            }
            for e, c in self.sorted_terms()
        ]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            facs = []
            for name, p in zip(self.variables, e):
                if p == 1:
                    facs.append(name)
                elif p > 1:
                    facs.append(f"{name}^{p}")
            mono = "*".join(facs)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    __repr__ = __str__


class PolyMap:
    """Ordered tuple of polynomials over one variable list, jet-truncated."""

    __slots__ = ("components", "truncation_degree")

    def __init__(self, components, truncation_degree):
        components = list(components)
        self.components = [p.truncate(truncation_degree) for p in components]
        self.truncation_degree = truncation_degree

    @property
    def variables(self):
        return self.components[0].variables

    @classmethod
    def identity(cls, variables, d):
        variables = tuple(variables)
        return cls([Polynomial.variable(variables, v) for v in variables], d)

    def __len__(self):
        return len(self.components)

    def __eq__(self, other):
        return (
            isinstance(other, PolyMap) and self.components == other.components
        )

    def linear_matrix(self):
        """Rows = components, columns = variables; entries are exact."""
        rows = []
        n = len(self.variables)
        for p in self.components:
            row = []
            for j in range(n):
                e = [0] * n
                e[j] = 1
                row.append(p.coefficient(e))
            rows.append(row)
        return rows


class RankError(ValueError):
    def __init__(self, rank, size):
        super().__init__(f"linear part is singular: rank {rank} of {size}")
        self.rank = rank
        self.size = size


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def truncate(p: Polynomial, d: int) -> Polynomial:
    if d < 0:
        raise ValueError("truncation degree must be >= 0")
    return p.truncate(d)


def compose(outer: Polynomial, substitution: PolyMap, d: int) -> Polynomial:
    """outer with its variables replaced by the map's components, mod degree d+1.

    Computed by graded Horner over the canonical term order; exact.
    """
    if len(substitution) != len(outer.variables):
        raise VariableMismatch(
            f"need {len(outer.variables)} components, got {len(substitution)}"
        )
    target = substitution.variables
    comps = [p.truncate(d) for p in substitution.components]
    out = Polynomial(target)
    powers = [{0: Polynomial.constant(target, 1)} for _ in comps]

    def power(i, n):
        cache = powers[i]
        if n not in cache:
            cache[n] = (power(i, n - 1) * comps[i]).truncate(d)
        return cache[n]

    for e, c in outer.sorted_terms():
        term = Polynomial.constant(target, c)
        for i, p in enumerate(e):
            if p:
                term = (term * power(i, p)).truncate(d)
        out = out + term
    return out


def compose_map(outer: PolyMap, inner: PolyMap, d: int) -> PolyMap:
    return PolyMap([compose(p, inner, d) for p in outer.components], d)


def _solve_linear(matrix, rhs):
    """Solve a square exact system; returns None if singular."""
    n = len(matrix)
    aug = [list(row) + [r] for row, r in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def invert_map(psi: PolyMap, d: int) -> PolyMap:
    """Compositional inverse of a zero-constant map with invertible linear part.

    Degree-by-degree Newton substitution: phi <- phi - L^{-1} (psi(phi) - id),
    which gains one exact degree per pass.
    """
    n = len(psi)
    if n != len(psi.variables):
        raise VariableMismatch("invert_map needs a square map")
    for p in psi.components:
        if p.constant_term():
            raise ValueError("invert_map needs zero constant terms")
    L = psi.linear_matrix()
    cols = []
    rank = 0
    # rank via elimination on a copy
    m = [row[:] for row in L]
    rows_left = list(range(n))
    for col in range(n):
        piv = next((r for r in rows_left if m[r][col]), None)
        if piv is None:
            continue
        rank += 1
        rows_left.remove(piv)
        pv = m[piv][col]
        for r in rows_left:
            if m[r][col]:
                f = m[r][col] / pv
                m[r] = [x - f * y for x, y in zip(m[r], m[piv])]
    if rank < n:
        raise RankError(rank, n)

    variables = psi.variables
    # columns of L^{-1}
    for j in range(n):
        rhs = [Q(1) if i == j else Q(0) for i in range(n)]
        cols.append(_solve_linear(L, rhs))
    ident = PolyMap.identity(variables, d)

    def apply_Linv(vec_polys):
        out = []
        for i in range(n):
            acc = Polynomial(variables)
            for j in range(n):
                cij = cols[j][i]
                if cij:
                    acc = acc + vec_polys[j] * cij
            out.append(acc)
        return out

    phi = PolyMap(apply_Linv(ident.components), d)
    for _ in range(d):
        err = [
            compose(psi.components[i], phi, d) - ident.components[i]
            for i in range(n)
        ]
        if all(p.is_zero() for p in err):
            break
        corr = apply_Linv(err)
        phi = PolyMap(
            [phi.components[i] - corr[i] for i in range(n)], d
        )
    return phi


def resultant(p: Polynomial, q: Polynomial, name: str) -> Polynomial:
    """Resultant in one variable via the Sylvester determinant, exact."""
    pc = p.coefficients_in(name)
    qc = q.coefficients_in(name)
    dp = max(pc, default=0)
    dq = max(qc, default=0)
    rest = p.variables
    zero = Polynomial(rest)
    if dp == 0 and dq == 0:
        return Polynomial.constant(rest, 1)
    size = dp + dq
    rows = []
    for i in range(dq):
        row = [zero] * size
        for j, dcoef in enumerate(range(dp, -1, -1)):
            row[i + j] = pc.get(dcoef, zero)
        rows.append(row)
    for i in range(dp):
        row = [zero] * size
        for j, dcoef in enumerate(range(dq, -1, -1)):
            row[i + j] = qc.get(dcoef, zero)
        rows.append(row)
    return _poly_det(rows, rest)


def _poly_det(rows, variables):
    """Determinant of a polynomial matrix by cofactor expansion with memo."""
    n = len(rows)

    def det(cols_mask, r):
        if r == n:
            return Polynomial.constant(variables, 1)
        key = (cols_mask, r)
        if key in memo:
            return memo[key]
        acc = Polynomial(variables)
        sign = 1
        for c in range(n):
            bit = 1 << c
            if cols_mask & bit:
                continue
            entry = rows[r][c]
            if not entry.is_zero():
                sub = det(cols_mask | bit, r + 1)
                acc = acc + entry * sub * sign
            sign = -sign
        memo[key] = acc
        return acc

    memo = {}
    return det(0, 0)


def discriminant(p: Polynomial, name: str) -> Polynomial:
    """Resultant of p and dp/dname; the leading-coefficient division is omitted
    on purpose (only the vanishing locus is used downstream)."""
    return resultant(p, p.derivative(name), name)


def solve_series_branch(eq: Polynomial, solve_for: str, in_terms_of: str, degree: int):
    """Series y(t) with eq(y(t), t) = 0 mod t^{degree+1}, y(0) = 0.

    eq must vanish at the origin with d(eq)/d(solve_for)(0) != 0; Newton
    iteration in the t-adic sense doubles correct orders, all exact.
    Returns a univariate Polynomial in in_terms_of.
    """
    if eq.constant_term():
        raise ValueError("no branch through the origin")
    dfdy0 = eq.derivative(solve_for).constant_term()
    if not dfdy0:
        raise ValueError("branch is not simple at the origin")
    tvars = (in_terms_of,)
    y = Polynomial(tvars)
    for _ in range(degree.bit_length() + 2):
        sub = _branch_sub(eq.variables, solve_for, in_terms_of, y, degree)
        val = compose(eq, sub, degree)
        if val.is_zero():
            break
        dval = compose(eq.derivative(solve_for), sub, degree)
        corr = _series_divide(val, dval, degree)
        y = (y - corr).truncate(degree)
    sub = _branch_sub(eq.variables, solve_for, in_terms_of, y, degree)
    if not compose(eq, sub, degree).is_zero():
        raise ValueError("series solve did not converge")
    return y


def _branch_sub(variables, solve_for, in_terms_of, y, degree):
    comps = []
    tvars = (in_terms_of,)
    for v in variables:
        if v == solve_for:
            comps.append(y)
        elif v == in_terms_of:
            comps.append(Polynomial.variable(tvars, in_terms_of))
        else:
            comps.append(Polynomial.zero(tvars))
    return PolyMap(comps, degree)


def _series_divide(num: Polynomial, den: Polynomial, degree: int) -> Polynomial:
    """num/den as a truncated series in one variable; den(0) != 0."""
    c0 = den.constant_term()
    if not c0:
        raise ZeroDivisionError("series division by a zero-constant series")
    inv = Polynomial.constant(num.variables, 1 / c0)
    rest = (den * (1 / c0)) - Polynomial.constant(num.variables, 1)
    acc = inv
    powr = Polynomial.constant(num.variables, 1)
    for _ in range(degree):
        powr = (powr * (-rest)).truncate(degree)
        if powr.is_zero():
            break
        acc = acc + powr * (1 / c0)
    return (num * acc).truncate(degree)


def parse_polynomial(text: str, variables) -> Polynomial:
    """Parse '+/-' separated products of rationals and powered variables.

    Accepts integers, fractions 'a/b', decimals, '^' or '**' powers and '*'
    products; whitespace is free.  Anything else is a structural error.
    """
    variables = tuple(variables)
    s = text.replace("**", "^").replace(" ", "")
    if not s:
        return Polynomial.zero(variables)
    tokens = []
    cur = ""
    depth = 0
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur not in ("", "(") and cur[-1] not in "+-*/^(":
            tokens.append(cur)
            cur = ch
        else:
            cur += ch
    if depth != 0:
        raise ValueError(f"unbalanced parentheses in {text!r}")
    tokens.append(cur)
    out = Polynomial.zero(variables)
    for tok in tokens:
        out = out + _parse_term(tok, variables)
    return out


def _parse_term(tok: str, variables) -> Polynomial:
    sign = Q(1)
    while tok and tok[0] in "+-":
        if tok[0] == "-":
            sign = -sign
        tok = tok[1:]
    if not tok:
        raise ValueError("empty term")
    p = Polynomial.constant(variables, sign)
    for fac in tok.split("*"):
        if not fac:
            raise ValueError(f"empty factor in {tok!r}")
        fac = fac.strip("()")
        if "^" in fac:
            base, exp = fac.split("^")
            exp = int(exp)
        else:
            base, exp = fac, 1
        if base in variables:
            p = p * Polynomial.variable(variables, base) ** exp
        else:
            try:
                c = rational(base)
            except (ValueError, ZeroDivisionError) as err:
                raise ValueError(f"cannot parse factor {base!r}") from err
            p = p * (c**exp if exp != 1 else c)
    return p
