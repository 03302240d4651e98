"""Exact scalar and polynomial arithmetic.

Everything is over the rationals: Laurent polynomials in q (graded
dimensions, quantum integers), sparse multivariate polynomials (the
commuting generators x_k and the auxiliary variables u, v, w), and the
parameter polynomials attached to a Borcherds-Cartan datum together with
their derived three-variable polynomials.

The base ring is the rationals concentrated in degree 0, which forces the
parameter polynomials to be homogeneous: every monomial u^p v^q of the pair
polynomial for (i, j) satisfies d_i p + d_j q = -(alpha_i|alpha_j), and every
monomial of the self polynomial for i satisfies p + q = 1 - a_ii/2.
"""

from __future__ import annotations

from fractions import Fraction


# ---------------------------------------------------------------------------
# Laurent polynomials in q
# ---------------------------------------------------------------------------

class LaurentQ:
    """Finitely supported Fraction-valued function on integer powers of q."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                v = Fraction(v)
                if v:
                    c[int(e)] = v
        self.c = c

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def q_power(cls, e, coeff=1):
        return cls({e: coeff})

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentQ({0: other})
        return isinstance(other, LaurentQ) and self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentQ({0: other})
        c = dict(self.c)
        for e, v in other.c.items():
            w = c.get(e, Fraction(0)) + v
            if w:
                c[e] = w
            else:
                c.pop(e, None)
        out = LaurentQ()
        out.c = c
        return out

    __radd__ = __add__

    def __neg__(self):
        out = LaurentQ()
        out.c = {e: -v for e, v in self.c.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentQ({0: other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            out = LaurentQ()
            if other:
                out.c = {e: v * other for e, v in self.c.items()}
            return out
        c = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = e1 + e2
                w = c.get(e, Fraction(0)) + v1 * v2
                if w:
                    c[e] = w
                else:
                    c.pop(e, None)
        out = LaurentQ()
        out.c = c
        return out

    __rmul__ = __mul__

    def bar(self):
        """q -> q^{-1}."""
        out = LaurentQ()
        out.c = {-e: v for e, v in self.c.items()}
        return out

    def is_bar_symmetric(self):
        return self.c == {-e: v for e, v in self.c.items()}

    def eval_one(self):
        return sum(self.c.values(), Fraction(0))

    def min_degree(self):
        return min(self.c) if self.c else 0

    def max_degree(self):
        return max(self.c) if self.c else 0

    def shift(self, k):
        out = LaurentQ()
        out.c = {e + k: v for e, v in self.c.items()}
        return out

    def divide_exact(self, other):
        """Exact quotient self/other; raises ArithmeticError on a remainder."""
        if not other:
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if not self:
            return LaurentQ()
        # shift both to ordinary polynomials and long-divide
        s_min, o_min = self.min_degree(), other.min_degree()
        num = {e - s_min: v for e, v in self.c.items()}
        den = {e - o_min: v for e, v in other.c.items()}
        dn = max(den)
        lead = den[dn]
        quo = {}
        while num:
            en = max(num)
            if en < dn:
                raise ArithmeticError("Laurent division leaves a remainder")
            f = num[en] / lead
            quo[en - dn] = f
            for e, v in den.items():
                t = en - dn + e
                w = num.get(t, Fraction(0)) - f * v
                if w:
                    num[t] = w
                else:
                    num.pop(t, None)
        return LaurentQ({e + s_min - o_min: v for e, v in quo.items()})

    def to_jsonable(self):
        return {str(e): _frac_str(v) for e, v in sorted(self.c.items())}

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for e in sorted(self.c):
            v = self.c[e]
            if e == 0:
                parts.append(str(v))
            elif e == 1:
                parts.append(f"{v if v != 1 else ''}q".replace("-1q", "-q"))
            else:
                parts.append(f"{v if v != 1 else ''}q^{e}".replace("-1q", "-q"))
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def _frac_str(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)


def parse_fraction(s) -> Fraction:
    return Fraction(s)


def quantum_integer(n: int, d_i: int = 1) -> LaurentQ:
    """[n]_i = (q_i^n - q_i^{-n}) / (q_i - q_i^{-1}) with q_i = q^{d_i}.

    Extended to any positive d_i as the formal Laurent polynomial
    sum_{k=0}^{n-1} q_i^{n-1-2k}; at q = 1 this evaluates to n.
    """
    if n < 0:
        raise ValueError("quantum integer of a negative integer")
    return LaurentQ({d_i * (n - 1 - 2 * k): 1 for k in range(n)})


def quantum_factorial(n: int, d_i: int = 1) -> LaurentQ:
    out = LaurentQ.one()
    for k in range(1, n + 1):
        out = out * quantum_integer(k, d_i)
    return out


def quantum_binomial(m: int, n: int, d_i: int = 1) -> LaurentQ:
    """[m]_i! / ([m-n]_i! [n]_i!), computed by exact Laurent division."""
    if not 0 <= n <= m:
        raise ValueError("quantum binomial requires 0 <= n <= m")
    num = quantum_factorial(m, d_i)
    den = quantum_factorial(m - n, d_i) * quantum_factorial(n, d_i)
    return num.divide_exact(den)


# ---------------------------------------------------------------------------
# Sparse multivariate polynomials
# ---------------------------------------------------------------------------

def _trim(exps):
    exps = tuple(exps)
    while exps and exps[-1] == 0:
        exps = exps[:-1]
    return exps


class MPoly:
    """Sparse polynomial in x_0, x_1, ... with Fraction coefficients.

    Keys are exponent tuples with trailing zeros trimmed, so a polynomial is
    usable in any ambient variable count.  Printing uses graded-lex monomial
    order for a canonical text form.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for exps, v in coeffs.items():
                v = Fraction(v)
                if v:
                    c[_trim(exps)] = v
        self.c = c

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def const(cls, v):
        return cls({(): v})

    @classmethod
    def var(cls, k, power=1):
        e = [0] * (k + 1)
        e[k] = power
        return cls({tuple(e): 1})

    @classmethod
    def monomial(cls, exps, coeff=1):
        return cls({tuple(exps): coeff})

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        return isinstance(other, MPoly) and self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        c = dict(self.c)
        for e, v in other.c.items():
            w = c.get(e, Fraction(0)) + v
            if w:
                c[e] = w
            else:
                c.pop(e, None)
        out = MPoly()
        out.c = c
        return out

    __radd__ = __add__

    def __neg__(self):
        out = MPoly()
        out.c = {e: -v for e, v in self.c.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            out = MPoly()
            if other:
                out.c = {e: v * other for e, v in self.c.items()}
            return out
        c = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                n = max(len(e1), len(e2))
                e = tuple(
                    (e1[k] if k < len(e1) else 0) + (e2[k] if k < len(e2) else 0)
                    for k in range(n)
                )
                w = c.get(e, Fraction(0)) + v1 * v2
                if w:
                    c[e] = w
                else:
                    c.pop(e, None)
        out = MPoly()
        out.c = c
        return out

    __rmul__ = __mul__

    def apply_perm(self, perm):
        """Relabel variables: x_k -> x_{perm[k]}; positions beyond perm stay put."""
        c = {}
        for e, v in self.c.items():
            img = [perm[k] if k < len(perm) else k for k in range(len(e))]
            m = max((img[k] for k in range(len(e)) if e[k]), default=-1)
            ne = [0] * (m + 1)
            for k, p in enumerate(e):
                if p:
                    ne[img[k]] += p
            key = _trim(ne)
            c[key] = c.get(key, Fraction(0)) + v
        out = MPoly()
        out.c = {e: v for e, v in c.items() if v}
        return out

    def swap(self, a, b):
        """Transpose variables x_a and x_b."""
        c = {}
        for e, v in self.c.items():
            n = max(len(e), a + 1, b + 1)
            ne = list(e) + [0] * (n - len(e))
            ne[a], ne[b] = ne[b], ne[a]
            key = _trim(ne)
            c[key] = c.get(key, Fraction(0)) + v
        out = MPoly()
        out.c = {e: v for e, v in c.items() if v}
        return out

    def subs_var(self, a, b):
        """Substitute x_a := x_b."""
        c = {}
        for e, v in self.c.items():
            n = max(len(e), a + 1, b + 1)
            ne = list(e) + [0] * (n - len(e))
            ne[b] += ne[a]
            ne[a] = 0
            key = _trim(ne)
            w = c.get(key, Fraction(0)) + v
            if w:
                c[key] = w
            else:
                c.pop(key, None)
        out = MPoly()
        out.c = c
        return out

    def divided_difference(self, a, b=None):
        """(s_{a,b} f - f) / (x_a - x_b); b defaults to a+1.  Always exact."""
        if b is None:
            b = a + 1
        if a == b:
            raise ValueError("divided difference requires two distinct positions")
        c = {}

        def bump(key, v):
            w = c.get(key, Fraction(0)) + v
            if w:
                c[key] = w
            else:
                c.pop(key, None)

        for e, v in self.c.items():
            n = max(len(e), a + 1, b + 1)
            ee = list(e) + [0] * (n - len(e))
            p, qq = ee[a], ee[b]
            if p == qq:
                continue
            # (u^q v^p - u^p v^q)/(u-v) = sign * u^min v^min * sum_{i+j=|p-q|-1} u^i v^j
            lo, hi = min(p, qq), max(p, qq)
            sign = -1 if p > qq else 1
            for i in range(hi - lo):
                ne = list(ee)
                ne[a] = lo + i
                ne[b] = lo + (hi - lo - 1 - i)
                bump(_trim(ne), sign * v)
        out = MPoly()
        out.c = c
        return out

    def divide_linear(self, a, b):
        """Exact quotient by (x_a - x_b); raises ArithmeticError on remainder.

        Works by repeatedly stripping the leading x_a-part: f = (x_a - x_b) g
        iff substituting x_a := x_b kills f.
        """
        rem = self.subs_var(a, b)
        if rem:
            raise ArithmeticError("polynomial is not divisible by the variable difference")
        # - divided_difference with f(swap) trick: f/(x_a-x_b) when s_{a,b}-image known
        # direct synthetic division in x_a
        c = {}
        for e, v in self.c.items():
            n = max(len(e), a + 1, b + 1)
            ee = list(e) + [0] * (n - len(e))
            p = ee[a]
            # x_a^p = sum_{i<p} x_a^i x_b^{p-1-i} (x_a - x_b) + x_b^p
            for i in range(p):
                ne = list(ee)
                ne[a] = i
                ne[b] += p - 1 - i
                key = _trim(ne)
                w = c.get(key, Fraction(0)) + v
                if w:
                    c[key] = w
                else:
                    c.pop(key, None)
        out = MPoly()
        out.c = c
        return out

    def degree_in(self, k):
        return max((e[k] for e in self.c if len(e) > k), default=0)

    def coeff_of_power(self, k, p):
        """Coefficient of x_k^p, an MPoly in the remaining variables."""
        c = {}
        for e, v in self.c.items():
            ek = e[k] if len(e) > k else 0
            if ek != p:
                continue
            ne = list(e) + [0] * (max(0, k + 1 - len(e)))
            ne[k] = 0
            c[_trim(ne)] = v
        out = MPoly()
        out.c = c
        return out

    def weighted_degree(self, weights):
        """Common weighted degree; raises on inhomogeneous input."""
        degs = {
            sum((weights[k] if k < len(weights) else 0) * p for k, p in enumerate(e))
            for e in self.c
        }
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("polynomial is not weighted-homogeneous")
        return degs.pop()

    def monomials(self):
        return list(self.c.items())

    def to_jsonable(self):
        return [[list(e), _frac_str(v)] for e, v in sorted(self.c.items(), key=_grlex)]

    def __str__(self, names=None):
        if not self.c:
            return "0"
        parts = []
        for e in sorted(self.c, key=lambda e: _grlex((e, None))):
            v = self.c[e]
            factors = []
            for k, p in enumerate(e):
                if p:
                    nm = names[k] if names else f"x{k + 1}"
                    factors.append(nm if p == 1 else f"{nm}^{p}")
            mono = "*".join(factors) if factors else "1"
            if v == 1 and factors:
                parts.append(mono)
            elif v == -1 and factors:
                parts.append(f"-{mono}")
            elif factors:
                parts.append(f"{_frac_str(v)}*{mono}")
            else:
                parts.append(_frac_str(v))
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def _grlex(item):
    e = item[0]
    return (sum(e), tuple(-p for p in e))


# ---------------------------------------------------------------------------
# Parameter polynomials
# ---------------------------------------------------------------------------

class ParamError(ValueError):
    pass


class ParamFamily:
    """The pair polynomials Q_{i,j}(u,v) and self polynomials P_i(u,v).

    Over a degree-0 base field the grading constraints make both families
    homogeneous: Q_{i,j} carries only monomials with d_i p + d_j q =
    -(alpha_i|alpha_j) and unit coefficient on u^{-a_ij}; P_i carries only
    monomials with p + q = 1 - a_ii/2 and unit coefficients on both extreme
    powers.  Q_{i,i} = 0 and Q_{i,j}(u,v) = Q_{j,i}(v,u); P_i need not be
    symmetric.  Variables: u = x_0, v = x_1 in the MPoly encoding.
    """

    def __init__(self, datum, Q, P, validate=True):
        self.datum = datum
        self.Q = Q  # dict[(i, j)] -> MPoly in (u, v)
        self.P = P  # dict[i] -> MPoly in (u, v)
        if validate:
            self.validate()

    def q_poly(self, i, j) -> MPoly:
        if i == j:
            return MPoly.zero()
        return self.Q[(i, j)]

    def p_poly(self, i) -> MPoly:
        return self.P[i]

    def p_self_degree(self, i) -> int:
        return 1 - self.datum.a(i, i) // 2

    def validate(self):
        problems = []
        datum = self.datum
        n = datum.n_indices
        names = datum.indices
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                Qij = self.q_poly(i, j)
                Qji = self.q_poly(j, i)
                if Qij.swap(0, 1) != Qji:
                    problems.append(f"Q[{names[i]},{names[j]}](u,v) != Q[{names[j]},{names[i]}](v,u)")
                if i < j:
                    target = -datum.bilinear(i, j)
                    for e, _v in Qij.c.items():
                        p = e[0] if len(e) > 0 else 0
                        qq = e[1] if len(e) > 1 else 0
                        if datum.d[i] * p + datum.d[j] * qq != target:
                            problems.append(
                                f"Q[{names[i]},{names[j]}] has a monomial off the homogeneity line"
                            )
                            break
                    lead = Qij.c.get(_trim((-datum.a(i, j), 0)), None)
                    if not lead:
                        problems.append(
                            f"Q[{names[i]},{names[j]}] has zero coefficient on u^{-datum.a(i, j)}"
                        )
        for i in range(n):
            Pi = self.p_poly(i)
            top = self.p_self_degree(i)
            for e, _v in Pi.c.items():
                if sum(e) != top:
                    problems.append(f"P[{names[i]}] has a monomial of total degree != {top}")
                    break
            if not Pi.c.get(_trim((top, 0)), None):
                problems.append(f"P[{names[i]}] has zero coefficient on u^{top}")
            if not Pi.c.get(_trim((0, top)), None):
                problems.append(f"P[{names[i]}] has zero coefficient on v^{top}")
        if problems:
            raise ParamError("; ".join(problems))

    def to_jsonable(self):
        out_q = {}
        for (i, j), poly in sorted(self.Q.items()):
            if i < j:
                out_q[f"{self.datum.indices[i]},{self.datum.indices[j]}"] = poly.to_jsonable()
        out_p = {self.datum.indices[i]: poly.to_jsonable() for i, poly in sorted(self.P.items())}
        return {"Q": out_q, "P": out_p}

    def transpose(self) -> "ParamFamily":
        """The family with every P_i(u,v) replaced by P_i(v,u); Q is unchanged."""
        P = {i: poly.swap(0, 1) for i, poly in self.P.items()}
        return ParamFamily(self.datum, dict(self.Q), P)


def default_params(datum) -> ParamFamily:
    """A canonical admissible choice: Q_{i,j} = u^{-a_ij} + v^{-a_ji} when
    a_ij < 0 (1 when a_ij = 0), P_i = u^m + v^m with m = 1 - a_ii/2, except
    P_i = 1 at real indices where m = 0."""
    n = datum.n_indices
    Q = {}
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if datum.a(i, j) == 0:
                Q[(i, j)] = MPoly.const(1)
            else:
                Q[(i, j)] = MPoly.var(0, -datum.a(i, j)) + MPoly.var(1, -datum.a(j, i))
    P = {}
    for i in range(n):
        m = 1 - datum.a(i, i) // 2
        if m == 0:
            P[i] = MPoly.const(1)
        else:
            P[i] = MPoly.var(0, m) + MPoly.var(1, m)
    return ParamFamily(datum, Q, P)


def qbar(params: ParamFamily, i, j) -> MPoly:
    """(Q_{i,j}(u,v) - Q_{i,j}(w,v)) / (u - w), in variables (u, v, w)."""
    if i == j:
        raise ValueError("the pair polynomial is only defined for distinct indices")
    Q = params.q_poly(i, j)
    num = Q - Q.apply_perm([2, 1])  # u -> w
    return num.divide_linear(0, 2)


def pbar(params: ParamFamily, i) -> tuple[MPoly, MPoly]:
    """The two derived three-variable polynomials for index i.

    Both are genuine polynomials (checked by exact division against the
    common denominator (u-v)(u-w)(v-w)); the first is symmetric in (u, v),
    the second in (v, w).
    """
    P = params.p_poly(i)

    def at(p1, p2):
        # P(arg1, arg2) with args from {u=0, v=1, w=2}
        return P.apply_perm([p1, p2])

    uv = MPoly.var(0) - MPoly.var(1)
    uw = MPoly.var(0) - MPoly.var(2)
    vw = MPoly.var(1) - MPoly.var(2)
    num1 = at(1, 0) * at(0, 2) * vw + at(0, 2) * at(1, 2) * uv - at(0, 1) * at(1, 2) * uw
    num2 = -at(0, 1) * at(0, 2) * vw - at(0, 2) * at(2, 1) * uv + at(0, 1) * at(1, 2) * uw
    p1 = num1.divide_linear(0, 1).divide_linear(0, 2).divide_linear(1, 2)
    p2 = num2.divide_linear(0, 1).divide_linear(0, 2).divide_linear(1, 2)
    return p1, p2


def parse_coeff_list(entries) -> MPoly:
    """[[p, q, "num/den"], ...] -> MPoly in (u, v)."""
    c = {}
    for p, q, val in entries:
        c[_trim((int(p), int(q)))] = Fraction(str(val))
    return MPoly(c)
