"""Graded Lie algebra of Hopf-zero normal form terms in cylindrical coordinates.

Basis vector fields over (x, rho, theta):

    F[l,k] = (k-l+1) x^{l+1} rho^{2(k-l)} d/dx - ((l+1)/2) x^l rho^{2(k-l)+1} d/drho
    E[l,k] = x^{l+1} rho^{2(k-l)} d/dx + (1/2) x^l rho^{2(k-l)+1} d/drho
    T[l,k] = -x^l rho^{2(k-l)} d/dtheta

with k >= l, l >= -1 for F and l >= 0 for E, T.  Time rescaling generators
are the scalars Z[m,n] = x^m rho^{2(n-m)} acting by multiplication.  Brackets
use the convention [v, w] = (Dw) v - (Dv) w and are computed directly on the
coordinate fields, then re-expanded in the basis (the algebra is closed, so a
re-expansion failure is an internal error, not user error).

Elements optionally carry parameter monomials mu^n; parameters are inert
scalars, so mu-monomials simply multiply through every operation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rationals import Q, ZERO, ONE

F, E, T = "F", "E", "T"
_KIND_RANK = {F: 0, E: 1, T: 2}


class LieStructureError(ValueError):
    """Invalid basis index or a re-expansion that cannot exist."""


def basis_term(kind, l, k):
    if kind not in _KIND_RANK:
        raise LieStructureError(f"unknown kind {kind!r}")
    lmin = -1 if kind == F else 0
    if not (k >= l >= lmin):
        raise LieStructureError(f"invalid indices {kind}[{l},{k}]")
    return (kind, l, k)


def term_str(term):
    kind, l, k = term
    name = {"F": "F", "E": "E", "T": "Theta"}[kind]
    return f"{name}[{l},{k}]"


# -- coordinate fields ------------------------------------------------------
# A planar-plus-phase field is a triple of {(x_power, rho_power): coeff} dicts.


def _dadd(a, b, factor=None):
    out = dict(a)
    for k, v in b.items():
        w = v if factor is None else v * factor
        acc = out.get(k, ZERO) + w
        if acc:
            out[k] = acc
        else:
            out.pop(k, None)
    return out


def _dmul(a, b):
    out = {}
    for (a1, b1), c1 in a.items():
        for (a2, b2), c2 in b.items():
            k = (a1 + a2, b1 + b2)
            acc = out.get(k, ZERO) + c1 * c2
            if acc:
                out[k] = acc
            else:
                out.pop(k, None)
    return out


def _ddiff(a, axis):
    out = {}
    for (ax, bx), c in a.items():
        p = ax if axis == 0 else bx
        if p:
            k = (ax - 1, bx) if axis == 0 else (ax, bx - 1)
            out[k] = c * p
    return out


def to_coordinate_field(term):
    """Exact (d/dx, d/drho, d/dtheta) polynomial components of a basis term."""
    kind, l, k = term
    j = k - l
    if kind == F:
        fx = {(l + 1, 2 * j): Q(k - l + 1)}
        frho = {} if l == -1 else {(l, 2 * j + 1): Q(-(l + 1), 2)}
        return fx, frho, {}
    if kind == E:
        return {(l + 1, 2 * j): ONE}, {(l, 2 * j + 1): Q(1, 2)}, {}
    return {}, {}, {(l, 2 * j): Q(-1)}


def expand_field(fx, frho, ftheta):
    """Re-expand coordinate components over the basis; exact.

    Raises LieStructureError when the components are outside the span (odd
    parity, negative powers) — impossible for brackets and rescalings of
    basis terms, hence an internal consistency failure if it ever triggers.
    """
    out = {}
    for (a, b), c in ftheta.items():
        if b % 2:
            raise LieStructureError("theta component with odd rho power")
        t = basis_term(T, a, a + b // 2)
        out[t] = out.get(t, ZERO) - c
    slots = {}
    for (a, b), c in fx.items():
        if b % 2:
            raise LieStructureError("x component with odd rho power")
        slots.setdefault((a - 1, b // 2), [ZERO, ZERO])[0] = c
    for (a, b), c in frho.items():
        if b % 2 == 0:
            raise LieStructureError("rho component with even rho power")
        slots.setdefault((a, (b - 1) // 2), [ZERO, ZERO])[1] = c
    for (l, j), (alpha, beta) in slots.items():
        k = l + j
        if l == -1:
            if beta:
                raise LieStructureError("rho component with negative x power")
            coef = alpha / (j + 1)
            if coef:
                out[basis_term(F, -1, k)] = out.get((F, -1, k), ZERO) + coef
            continue
        a_f = (alpha - 2 * beta) / (k + 2)
        b_e = alpha - a_f * (j + 1)
        if a_f:
            t = basis_term(F, l, k)
            acc = out.get(t, ZERO) + a_f
            if acc:
                out[t] = acc
        if b_e:
            t = basis_term(E, l, k)
            acc = out.get(t, ZERO) + b_e
            if acc:
                out[t] = acc
    return {t: c for t, c in out.items() if c}


_BRACKET_CACHE = {}


def bracket_terms(t1, t2):
    """[t1, t2] expanded over the basis; cached."""
    key = (t1, t2)
    hit = _BRACKET_CACHE.get(key)
    if hit is not None:
        return hit
    vx, vr, vt = to_coordinate_field(t1)
    wx, wr, wt = to_coordinate_field(t2)

    def transport(px, pr, qx):
        # (p . grad) applied to a scalar component q
        return _dadd(_dmul(px, _ddiff(qx, 0)), _dmul(pr, _ddiff(qx, 1)))

    bx = _dadd(transport(vx, vr, wx), transport(wx, wr, vx), Q(-1))
    br = _dadd(transport(vx, vr, wr), transport(wx, wr, vr), Q(-1))
    bt = _dadd(transport(vx, vr, wt), transport(wx, wr, vt), Q(-1))
    out = expand_field(bx, br, bt)
    _BRACKET_CACHE[key] = out
    return out


# -- time rescaling ---------------------------------------------------------


def rescale_term(m, n):
    if not 0 <= m <= n:
        raise LieStructureError(f"invalid rescale generator Z[{m},{n}]")
    return (m, n)


def in_restricted_rescaling(z) -> bool:
    m, n = z
    return n == m or n == m + 1


_ACTION_CACHE = {}


def rescale_action_term(z, t):
    """Z[m,n] . term by the structure-constant rows, cross-checked against
    direct multiplication of the coordinate field."""
    key = (z, t)
    hit = _ACTION_CACHE.get(key)
    if hit is not None:
        return hit
    m, n = z
    kind, l, k = t
    if kind == F:
        cf = Q(k + 2, k + n + 2)
        ce = Q(m * (k + 2) - n * (l + 1), k + n + 2)
        out = {}
        if cf:
            out[basis_term(F, l + m, k + n)] = cf
        if ce:
            out[basis_term(E, l + m, k + n)] = ce
    else:
        out = {basis_term(kind, l + m, k + n): ONE}
    scalar = {(m, 2 * (n - m)): ONE}
    fx, fr, ft = to_coordinate_field(t)
    direct = expand_field(_dmul(scalar, fx), _dmul(scalar, fr), _dmul(scalar, ft))
    if direct != out:
        raise LieStructureError(
            f"rescale action mismatch for Z[{m},{n}] . {term_str(t)}"
        )
    _ACTION_CACHE[key] = out
    return out


# -- gradings and style -----------------------------------------------------


@dataclass(frozen=True)
class GradingScheme:
    """Integer weights making the algebra graded.

    delta1(r):        F/E -> r(k-l)+k, Theta shifted by +r (mu adds (r+1)|n|).
    param_stage1:     everything -> k + 2|n|   (second-level bookkeeping).
    param_stage_r(r,s): F/E -> r(k-l)+k+(r+1)|n|, Theta shifted by +s.
    Z[m,n] is graded so the module action is additive.
    """

    variant: str
    r: int = 1
    s: int = 0

    def grade_basis(self, term, mu_degree: int = 0) -> int:
        kind, l, k = term
        if self.variant == "param_stage1":
            return k + 2 * mu_degree
        g = self.r * (k - l) + k + (self.r + 1) * mu_degree
        if kind == T:
            g += self.r if self.variant == "delta1" else self.s
        return g

    def grade_rescale(self, z, mu_degree: int = 0) -> int:
        m, n = z
        if self.variant == "param_stage1":
            return n + 2 * mu_degree
        return self.r * (n - m) + n + (self.r + 1) * mu_degree


def delta1(r: int) -> GradingScheme:
    return GradingScheme("delta1", r=r)


def param_stage1() -> GradingScheme:
    return GradingScheme("param_stage1")


def param_stage_r(r: int, s: int) -> GradingScheme:
    return GradingScheme("param_stage_r", r=r, s=s)


def grade(item, scheme: GradingScheme, mu_degree: int = 0) -> int:
    if len(item) == 3:
        return scheme.grade_basis(item, mu_degree)
    return scheme.grade_rescale(item, mu_degree)


def style_key(term, mu, scheme: GradingScheme):
    """Total elimination-priority order: grade, then F < E < Theta, then
    parameter-independent terms first, then l, then mu lexicographic."""
    kind, l, k = term
    return (
        scheme.grade_basis(term, sum(mu)),
        _KIND_RANK[kind],
        sum(mu),
        l,
        mu,
        k,
    )


def style_compare(a, b, scheme: GradingScheme) -> int:
    """-1, 0, 1 comparison of (term, mu) pairs under the style order."""
    ka = style_key(a[0], a[1], scheme)
    kb = style_key(b[0], b[1], scheme)
    return (ka > kb) - (ka < kb)


# -- elements ---------------------------------------------------------------


class LieElement:
    """Sparse exact expansion over (basis term, mu monomial) slots."""

    __slots__ = ("nparams", "terms")

    def __init__(self, nparams: int = 0, terms=None):
        self.nparams = nparams
        self.terms = {}
        if terms:
            for (t, mu), c in terms.items():
                if c:
                    self.terms[(t, tuple(mu))] = Q(c)

    @classmethod
    def single(cls, term, coeff=1, mu=None, nparams=0):
        mu = tuple(mu) if mu is not None else (0,) * nparams
        return cls(len(mu), {(term, mu): coeff})

    def copy(self):
        out = LieElement(self.nparams)
        out.terms = dict(self.terms)
        return out

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, LieElement)
            and self.nparams == other.nparams
            and self.terms == other.terms
        )

    def _check(self, other):
        if self.nparams != other.nparams:
            raise LieStructureError("parameter counts differ")

    def add(self, other, factor=None):
        self._check(other)
        out = self.copy()
        for key, c in other.terms.items():
            w = c if factor is None else c * factor
            acc = out.terms.get(key, ZERO) + w
            if acc:
                out.terms[key] = acc
            else:
                out.terms.pop(key, None)
        return out

    def scale(self, c):
        c = Q(c)
        out = LieElement(self.nparams)
        if c:
            out.terms = {k: v * c for k, v in self.terms.items()}
        return out

    def add_slot(self, term, mu, coeff):
        out = self.copy()
        key = (term, tuple(mu))
        acc = out.terms.get(key, ZERO) + Q(coeff)
        if acc:
            out.terms[key] = acc
        else:
            out.terms.pop(key, None)
        return out

    def coefficient(self, term, mu=None):
        mu = tuple(mu) if mu is not None else (0,) * self.nparams
        return self.terms.get((term, mu), ZERO)

    def bracket(self, other: "LieElement") -> "LieElement":
        self._check(other)
        out = LieElement(self.nparams)
        acc = out.terms
        for (t1, m1), c1 in self.terms.items():
            for (t2, m2), c2 in other.terms.items():
                base = bracket_terms(t1, t2)
                if not base:
                    continue
                c12 = c1 * c2
                mu = tuple(a + b for a, b in zip(m1, m2))
                for t, c in base.items():
                    key = (t, mu)
                    v = acc.get(key, ZERO) + c12 * c
                    if v:
                        acc[key] = v
                    else:
                        acc.pop(key, None)
        return out

    def filtered(self, keep) -> "LieElement":
        out = LieElement(self.nparams)
        out.terms = {
            (t, mu): c for (t, mu), c in self.terms.items() if keep(t, mu)
        }
        return out

    def graded_part(self, scheme: GradingScheme, g: int) -> "LieElement":
        return self.filtered(
            lambda t, mu: scheme.grade_basis(t, sum(mu)) == g
        )

    def max_grade(self, scheme: GradingScheme) -> int:
        return max(
            (scheme.grade_basis(t, sum(mu)) for (t, mu) in self.terms),
            default=0,
        )

    def sorted_slots(self, scheme: GradingScheme):
        return sorted(
            self.terms.items(), key=lambda kv: style_key(kv[0][0], kv[0][1], scheme)
        )

    def render(self, scheme: GradingScheme, param_names=None) -> str:
        lines = []
        for (t, mu), c in self.sorted_slots(scheme):
            if any(mu):
                names = param_names or [
                    f"mu{i+1}" for i in range(self.nparams)
                ]
                facs = [
                    f"{names[i]}^{p}" if p > 1 else names[i]
                    for i, p in enumerate(mu)
                    if p
                ]
                lines.append(f"{c} * {term_str(t)} * " + "*".join(facs))
            else:
                lines.append(f"{c} * {term_str(t)}")
        return "\n".join(lines) if lines else "0"

    def serialize(self, scheme: GradingScheme):
        return [
            {
                "kind": t[0],
                "l": t[1],
                "k": t[2],
                "mu": list(mu),
                "coeff_num": int(c.numerator),
                "coeff_den": int(c.denominator),
            }
            for (t, mu), c in self.sorted_slots(scheme)
        ]

    def __repr__(self):
        return f"LieElement({len(self.terms)} terms, p={self.nparams})"


class RescaleElement:
    """Sparse expansion over (Z[m,n], mu monomial) slots."""

    __slots__ = ("nparams", "terms")

    def __init__(self, nparams: int = 0, terms=None):
        self.nparams = nparams
        self.terms = {}
        if terms:
            for (z, mu), c in terms.items():
                if c:
                    self.terms[(z, tuple(mu))] = Q(c)

    @classmethod
    def single(cls, z, coeff=1, mu=None, nparams=0):
        mu = tuple(mu) if mu is not None else (0,) * nparams
        return cls(len(mu), {(z, mu): coeff})

    def is_zero(self):
        return not self.terms

    def add(self, other, factor=None):
        out = RescaleElement(self.nparams)
        out.terms = dict(self.terms)
        for key, c in other.terms.items():
            w = c if factor is None else c * factor
            acc = out.terms.get(key, ZERO) + w
            if acc:
                out.terms[key] = acc
            else:
                out.terms.pop(key, None)
        return out

    def scale(self, c):
        out = RescaleElement(self.nparams)
        c = Q(c)
        if c:
            out.terms = {k: v * c for k, v in self.terms.items()}
        return out

    def apply_to(self, v: LieElement) -> LieElement:
        """Module action: multiply v by the rescaling scalar, re-expand."""
        if self.nparams != v.nparams:
            raise LieStructureError("parameter counts differ")
        out = LieElement(v.nparams)
        acc = out.terms
        for (z, m1), c1 in self.terms.items():
            for (t, m2), c2 in v.terms.items():
                base = rescale_action_term(z, t)
                c12 = c1 * c2
                mu = tuple(a + b for a, b in zip(m1, m2))
                for t2, c in base.items():
                    key = (t2, mu)
                    w = acc.get(key, ZERO) + c12 * c
                    if w:
                        acc[key] = w
                    else:
                        acc.pop(key, None)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, RescaleElement)
            and self.nparams == other.nparams
            and self.terms == other.terms
        )

    def __repr__(self):
        return f"RescaleElement({len(self.terms)} terms, p={self.nparams})"


def rescale_action(z: RescaleElement, v: LieElement) -> LieElement:
    return z.apply_to(v)


def bracket(a: LieElement, b: LieElement) -> LieElement:
    return a.bracket(b)


def exp_ad(S: LieElement, v: LieElement, keep) -> LieElement:
    """exp(ad_S) v truncated by the keep predicate.

    Terminates because every generator used in this package strictly raises
    the working grade; a guard trips if that ever fails.
    """
    out = v.filtered(keep)
    cur = out
    k = 1
    while True:
        cur = S.bracket(cur).filtered(keep).scale(Q(1, k))
        if cur.is_zero():
            return out
        out = out.add(cur)
        k += 1
        if k > 400:
            raise LieStructureError("exp(ad) did not terminate under truncation")


def apply_rescale(Tgen: RescaleElement, v: LieElement, keep) -> LieElement:
    """(1 + T) . v truncated by the keep predicate."""
    return v.add(Tgen.apply_to(v).filtered(keep))
