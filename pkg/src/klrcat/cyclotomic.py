"""Cyclotomic quotients and the kernel bimodules of induction/restriction.

The quotient of the algebra at beta by the two-sided ideal generated by the
cyclotomic polynomial in the first variable is computed degree by degree as
exact linear algebra over the monomial basis.  Two certificates drive the
stopping rule: constructive per-position annihilator bounds (the minimal
monic polynomial of the last variable inside the ideal generated by the
previous annihilator and its crossing image), and a zero-window argument
above the top crossing degree, since beyond that degree every monomial
carries a positive power of some variable.

The kernel bimodules attached to a direction i are realized through the
free-module decompositions over the top and bottom corner subalgebras; the
basis of such a model is (run, quotient-basis element, power of the dummy
variable), and coordinates of arbitrary elements are extracted structurally
by peeling, never by solving against the big ambient slice.  The two maps
between the kernels (right multiplication by the cyclotomic element followed
by the full staircase of crossings, and by the product of the intertwining
elements) become exact matrices in these coordinates.
"""

from __future__ import annotations

from fractions import Fraction

from .cartan import RootVector, Weight, sequences
from .klr import (
    KLRContext,
    GradedSlice,
    _add_into,
    _add_term,
    act_word,
    min_word_degree,
    max_word_degree,
    omega,
    peel_top,
    run_word_desc,
    term_sort_key,
)
from .linalg import SparseRREF
from .rings import LaurentQ, MPoly

Fr = Fraction


class InfeasiblePresentation(Exception):
    """Raised when a direct quotient computation would exceed the size budget."""


# ---------------------------------------------------------------------------
# cyclotomic polynomial
# ---------------------------------------------------------------------------

def cyclo_degree(lam: Weight, i: int) -> int:
    m = lam.pairing(i)
    if m < 0:
        raise ValueError("the highest weight must pair nonnegatively with every coroot")
    return m


def cyclo_poly_str(lam: Weight, i: int) -> str:
    m = cyclo_degree(lam, i)
    return "1" if m == 0 else ("u" if m == 1 else f"u^{m}")


# ---------------------------------------------------------------------------
# constructive annihilator bounds
# ---------------------------------------------------------------------------

def _poly_reduce_mod(coeffs, g):
    """Reduce a univariate coefficient list modulo monic g (ascending lists)."""
    m = len(g) - 1
    out = list(coeffs)
    for e in range(len(out) - 1, m - 1, -1):
        c = out[e]
        if not c:
            continue
        for k in range(m + 1):
            out[e - m + k] -= c * g[k]
    del out[m:]
    while out and not out[-1]:
        out.pop()
    return out


def min_monic_elim(g, f2: MPoly):
    """Minimal monic polynomial in y inside the ideal (g(x), f2(x, y)).

    g is a monic ascending coefficient list; f2 lives in variables (0, 1) =
    (x, y) and must have a constant nonzero leading y-coefficient.  Works in
    the finite ring k[x]/(g)[y]/(f2): powers of y are reduced and the first
    linear dependence gives the minimal monic element of the elimination
    ideal.  Termination is bounded by deg(g) * deg_y(f2).
    """
    m = len(g) - 1
    if m == 0:
        return [Fr(1)]  # ideal contains 1
    B = f2.degree_in(1)
    lead = f2.coeff_of_power(1, B)
    if lead.degree_in(0) != 0 or not lead:
        raise ValueError("crossing image is not monic in the new variable")
    lead_c = lead.c.get((), Fr(0))
    # f2 as y-coefficient lists over k[x]/(g)
    fy = []
    for j in range(B + 1):
        cj = f2.coeff_of_power(1, j)
        col = [Fr(0)] * max(cj.degree_in(0) + 1, 1)
        for e, v in cj.c.items():
            col[e[0] if e else 0] = v
        fy.append(_poly_reduce_mod(col, g))

    def nf(vec):
        # vec: dict j -> x-coeff list; reduce y-degree below B
        vec = {j: list(c) for j, c in vec.items() if any(c)}
        while True:
            jmax = max((j for j, c in vec.items() if any(c)), default=-1)
            if jmax < B:
                break
            factor = [v / lead_c for v in vec[jmax]]
            # subtract factor * y^{jmax-B} * f2; the leading position cancels
            for j, fj in enumerate(fy):
                if not fj:
                    continue
                prod = [Fr(0)] * (len(factor) + len(fj) - 1)
                for e1, v1 in enumerate(factor):
                    if not v1:
                        continue
                    for e2, v2 in enumerate(fj):
                        if v2:
                            prod[e1 + e2] += v1 * v2
                prod = _poly_reduce_mod(prod, g)
                tgt = vec.setdefault(jmax - B + j, [])
                if len(tgt) < len(prod):
                    tgt.extend([Fr(0)] * (len(prod) - len(tgt)))
                for e, v in enumerate(prod):
                    tgt[e] -= v
            vec = {j: c for j, c in vec.items() if any(c)}
        return vec

    rref = SparseRREF(track=True)
    cur = {0: [Fr(1)]}  # y^0
    e = 0
    cap = m * B + 1
    history = [cur]
    while e <= cap:
        row = {}
        for j, c in cur.items():
            for xe, v in enumerate(c):
                if v:
                    row[(j, xe)] = v
        combo = rref.solve(row)
        if combo is not None:
            h = [Fr(0)] * (e + 1)
            h[e] = Fr(1)
            for k, v in combo.items():
                h[k] -= v
            while h and not h[-1]:
                h.pop()
            return h
        rref.add_row(row)
        # next power
        nxt = {j + 1: list(c) for j, c in cur.items()}
        cur = nf(nxt)
        history.append(cur)
        e += 1
    raise RuntimeError("annihilator search exceeded its certified cap")


class NilpotencyData:
    """Per-position monic annihilator bounds for the quotient at beta.

    The recursion follows the constructive proof: with g killing the variable
    at a position on a component, the next variable is killed by the minimal
    monic polynomial of the elimination ideal of (g at the old variable, g at
    the new variable times the crossing polynomial), where the crossing
    polynomial is the squared self pair for a repeated index and the pair
    polynomial otherwise.
    """

    def __init__(self, ctx: KLRContext, lam: Weight, beta: RootVector):
        self.ctx = ctx
        self.lam = lam
        self.beta = beta
        self._ann = {}

    def annihilator(self, prefix):
        prefix = tuple(prefix)
        got = self._ann.get(prefix)
        if got is not None:
            return got
        if len(prefix) == 1:
            m = cyclo_degree(self.lam, prefix[0])
            h = [Fr(0)] * m + [Fr(1)]
        else:
            mu, j = prefix[:-1], prefix[-1]
            g = self.annihilator(mu)
            gy = MPoly({(0, e): c for e, c in enumerate(g)})
            if j == mu[-1]:
                P = self.ctx.params.p_poly(j)
                f2 = gy * P * P.swap(0, 1)
            else:
                g2 = self.annihilator(mu[:-1] + (j,))
                g2y = MPoly({(0, e): c for e, c in enumerate(g2)})
                f2 = g2y * self.ctx.params.q_poly(mu[-1], j)
            h = min_monic_elim(g, f2)
        self._ann[prefix] = h
        return h

    def bounds(self, nu):
        """Monic annihilator degrees per position along nu."""
        return tuple(len(self.annihilator(nu[: k + 1])) - 1 for k in range(len(nu)))

    def degree_cap(self):
        """A certified top degree for the quotient at beta."""
        cap = None
        for nu in sequences(self.beta):
            bounds = self.bounds(nu)
            if any(b == 0 for b in bounds):
                continue
            d = max_word_degree(self.ctx, nu) + sum(
                2 * self.ctx.datum.d[nu[k]] * (bounds[k] - 1) for k in range(len(nu))
            )
            cap = d if cap is None else max(cap, d)
        return cap


# ---------------------------------------------------------------------------
# the quotient algebra by direct presentation
# ---------------------------------------------------------------------------

def generator_window(datum, support):
    """Max generator degree among x's and crossings on the given support."""
    w = 1
    for i in support:
        w = max(w, 2 * datum.d[i])
        for j in support:
            w = max(w, abs(datum.bilinear(i, j)))
    return w


class CyclotomicAlgebra:
    """The finite-dimensional graded quotient at (lam, beta), fully presented.

    Stores per degree the ideal row reduction and the surviving monomial
    basis, so arbitrary elements reduce to canonical quotient coordinates and
    products can be formed exactly.
    """

    def __init__(self, ctx: KLRContext, lam: Weight, beta: RootVector, slice_limit=4000):
        self.ctx = ctx
        self.lam = lam
        self.beta = beta
        self.n = beta.height
        self.seqs = sequences(beta)
        self.basis = {}
        self.dims = {}
        self._rref = {}
        self.d_min = 0
        self.top_degree = None
        self.computed_max = -1
        self._slice_cache = {}
        if self.n == 0:
            key = ((), (), ())
            self.basis = {0: [key]}
            self.dims = {0: 1}
            self.top_degree = 0
            self.computed_max = 0
            self._deg_of = {key: 0}
            return
        nil = NilpotencyData(ctx, lam, beta)
        self.nil = nil
        cap = nil.degree_cap()
        if cap is None:
            cap = min_word_degree(ctx, self.seqs) - 1  # everything dies
        window = generator_window(ctx.datum, beta.support())
        t_tau = max(max_word_degree(ctx, nu) for nu in self.seqs)
        self.d_min = min_word_degree(ctx, self.seqs)
        gens = self._ideal_generators()
        d = self.d_min
        last_nonzero = None
        self._deg_of = {}
        while True:
            if d > cap:
                break
            floor = max(last_nonzero if last_nonzero is not None else self.d_min, t_tau)
            if d > floor + window:
                break
            cols = self._slice(d)
            if len(cols) > slice_limit:
                raise InfeasiblePresentation(
                    f"slice at degree {d} has {len(cols)} monomials (limit {slice_limit})"
                )
            rref = SparseRREF(col_key=term_sort_key)
            for gen, dg, tgt in gens:
                for u in self._slice(d - dg):
                    if u[2] != tgt:
                        continue
                    row = self.ctx.multiply({u: Fr(1)}, gen)
                    rref.add_row(row)
            keep = [k for k in cols if k not in rref.pivots]
            self._rref[d] = rref
            self.basis[d] = keep
            if keep:
                self.dims[d] = len(keep)
                last_nonzero = d
                for k in keep:
                    self._deg_of[k] = d
            d += 1
        self.top_degree = last_nonzero
        self.computed_max = d - 1

    # -- construction helpers -------------------------------------------------

    def _ideal_generators(self):
        ctx, lam = self.ctx, self.lam
        gens = []
        for mu in self.seqs:
            for a in range(self.n):
                word = tuple(range(a))
                tail = ctx.nf_word(word, MPoly.const(1), mu)
                tgt = act_word(word, mu)
                m = cyclo_degree(lam, tgt[0])
                head = {((), (m,) + (0,) * (self.n - 1), tgt): Fr(1)}
                gen = ctx.multiply(head, tail)
                if not gen:
                    continue
                dg = ctx.element_degree(gen)
                gens.append((gen, dg, tgt))
        return gens

    def _slice(self, d):
        got = self._slice_cache.get(d)
        if got is None:
            got = GradedSlice(self.ctx, self.seqs, d, d).basis(d)
            self._slice_cache[d] = got
        return got

    # -- quotient interface ----------------------------------------------------

    @property
    def total_dim(self):
        return sum(self.dims.values())

    def graded_dim(self) -> LaurentQ:
        return LaurentQ({d: v for d, v in self.dims.items()})

    def dim(self, d):
        return self.dims.get(d, 0)

    def degree_of(self, key):
        return self._deg_of[key]

    def basis_all(self):
        out = []
        for d in sorted(self.basis):
            out.extend(self.basis[d])
        return out

    def reduce(self, element):
        """Quotient coordinates of an engine element, keyed by basis monomials."""
        out = {}
        if not element:
            return out
        for d, part in self.ctx.degree_parts(element).items():
            if self.top_degree is None or d > self.computed_max or d < self.d_min:
                continue  # certified zero beyond the computed range
            rref = self._rref.get(d)
            res = rref.residual(part) if rref is not None else part
            for k, c in res.items():
                _add_term(out, k, c)
        return out

    def lift(self, coords):
        return dict(coords)

    def multiply_mod(self, x, y):
        return self.reduce(self.ctx.multiply(self.lift(x), self.lift(y)))

    def unit(self):
        out = {}
        for nu in self.seqs:
            _add_into(out, self.reduce(self.ctx.idempotent(nu)))
        return out

    def block_dims(self):
        """(target, source) -> q-dims of the idempotent block."""
        out = {}
        for d, keys in self.basis.items():
            for k in keys:
                tgt = self.ctx.term_target(k)
                blk = out.setdefault((tgt, k[2]), {})
                blk[d] = blk.get(d, 0) + 1
        return out

    def source_dims(self, last_letter=None):
        out = {}
        for d, keys in self.basis.items():
            for k in keys:
                if last_letter is not None and k[2][-1] != last_letter:
                    continue
                out[d] = out.get(d, 0) + 1
        return out

    def to_jsonable(self):
        def key_json(k):
            return [list(k[0]), list(k[1]), list(k[2])]

        data = {
            "beta": list(self.beta.mults),
            "lambda": list(self.lam.fund),
            "d_min": self.d_min,
            "computed_max": self.computed_max,
            "top_degree": self.top_degree,
            "dims": {str(d): v for d, v in sorted(self.dims.items())},
            "basis": {str(d): [key_json(k) for k in ks] for d, ks in sorted(self.basis.items())},
            "pivots": {
                str(d): [
                    [key_json(c), [[key_json(cc), f"{v.numerator}/{v.denominator}"] for cc, v in sorted(row.items(), key=lambda t: term_sort_key(t[0]))]]
                    for c, row in sorted(r.pivots.items(), key=lambda t: term_sort_key(t[0]))
                ]
                for d, r in self._rref.items()
            },
        }
        return data

    @classmethod
    def from_jsonable(cls, ctx, lam, beta, data):
        self = cls.__new__(cls)
        self.ctx = ctx
        self.lam = lam
        self.beta = beta
        self.n = beta.height
        self.seqs = sequences(beta)
        self._slice_cache = {}

        def key_of(j):
            return (tuple(j[0]), tuple(j[1]), tuple(j[2]))

        self.d_min = data["d_min"]
        self.computed_max = data["computed_max"]
        self.top_degree = data["top_degree"]
        self.dims = {int(d): v for d, v in data["dims"].items()}
        self.basis = {int(d): [key_of(k) for k in ks] for d, ks in data["basis"].items()}
        self._deg_of = {k: d for d, ks in self.basis.items() for k in ks}
        self._rref = {}
        for d, rows in data["pivots"].items():
            r = SparseRREF(col_key=term_sort_key)
            for c, row in rows:
                r.pivots[key_of(c)] = {key_of(cc): Fr(v) for cc, v in row}
            self._rref[int(d)] = r
        return self


# ---------------------------------------------------------------------------
# kernel bimodule models
# ---------------------------------------------------------------------------

def g_element(ctx: KLRContext, a: int, seqs):
    """The intertwining element at crossing a, summed over the given sources."""
    out = {}
    for nu in seqs:
        if nu[a] != nu[a + 1]:
            _add_into(out, ctx.tau_gen(a, nu))
        else:
            diff = MPoly.var(a + 1) - MPoly.var(a)
            poly = diff * ctx.p_poly_at(nu[a], a)
            _add_into(out, ctx.poly_element(poly, nu))
            sq = diff * diff
            for e, c in sq.monomials():
                exps = tuple(e) + (0,) * (ctx.n - len(e))
                _add_term(out, ((a,), exps, nu), -c)
    return out


class KernelPair:
    """The two kernel bimodules for (lam, beta, i) in free-model coordinates.

    The first kernel (induction) is free over the quotient at beta tensored
    with a dummy polynomial variable, with basis indexed by (ascending run
    start c, quotient basis element b, dummy power m); the second
    (shift-twisted induction) uses descending runs ending at the first strand
    indexed by their length.  Coordinates are extracted by peeling.
    """

    def __init__(self, tower, beta: RootVector, i: int):
        self.tower = tower
        self.beta = beta
        self.i = i
        self.n = beta.height
        self.N = self.n + 1
        self.gamma = beta.plus_simple(i)
        self.ctx = tower.ctx(self.N)
        self.ctx_t = tower.ctx_t(self.N)
        self.pres = tower.algebra(beta)
        self.lam = tower.lam
        self.d_i = tower.datum.d[i]
        self.seqs_gamma = sequences(self.gamma)
        self._k0_shift = {}
        self._k1_shift = {}
        self._b_info = []
        for bkey in self.pres.basis_all():
            self._b_info.append((bkey, self.pres.degree_of(bkey), bkey[2]))
        self._p_el = None
        self._q_el = None
        self._pimg = {}
        self._coker = {}
        self.shift_P = 2 * self.d_i * cyclo_degree(self.lam, i) - self.beta_pairing()

    def beta_pairing(self):
        return sum(
            self.tower.datum.bilinear(self.i, j) * k for j, k in enumerate(self.beta.mults)
        )

    # -- model bases -----------------------------------------------------------

    def k0_shift(self, c, mu):
        key = (c, mu)
        got = self._k0_shift.get(key)
        if got is None:
            word = tuple(range(c, self.N - 1))
            got = self.ctx.word_degree(word, mu + (self.i,))
            self._k0_shift[key] = got
        return got

    def k1_shift(self, a, mu):
        key = (a, mu)
        got = self._k1_shift.get(key)
        if got is None:
            word = run_word_desc(a - 1, 0)
            got = self.ctx.word_degree(word, (self.i,) + mu)
            self._k1_shift[key] = got
        return got

    def k0_basis(self, d):
        out = []
        for c in range(self.N):
            for bkey, db, mu in self._b_info:
                base = self.k0_shift(c, mu) + db
                rem = d - base
                if rem >= 0 and rem % (2 * self.d_i) == 0:
                    out.append((c, bkey, rem // (2 * self.d_i)))
        out.sort(key=lambda t: (t[0], t[2], term_sort_key(t[1])))
        return out

    def k1_basis(self, d):
        out = []
        for a in range(self.N):
            for bkey, db, mu in self._b_info:
                base = self.k1_shift(a, mu) + db
                rem = d - base
                if rem >= 0 and rem % (2 * self.d_i) == 0:
                    out.append((a, bkey, rem // (2 * self.d_i)))
        out.sort(key=lambda t: (t[0], t[2], term_sort_key(t[1])))
        return out

    def k0_dim(self, d):
        return len(self.k0_basis(d))

    def k1_dim(self, d):
        return len(self.k1_basis(d))

    def k0_target(self, label):
        """Target sequence of a model basis vector of the first kernel."""
        c, bkey, _m = label
        tgt_b = self.ctx_small().term_target(bkey) if self.n else ()
        return tgt_b[:c] + (self.i,) + tgt_b[c:]

    def ctx_small(self):
        return self.tower.ctx(self.n)

    # -- elements of model basis vectors ---------------------------------------

    def k0_vector(self, label):
        c, bkey, m = label
        word, exps, mu = bkey
        lift = {(word, exps + (m,), mu + (self.i,)): Fr(1)}
        run = tuple(range(c, self.N - 1))
        if not run:
            return lift
        tgt = self.ctx.term_target(next(iter(lift)))
        run_el = self.ctx.nf_word(run, MPoly.const(1), tgt)
        return self.ctx.multiply(run_el, lift)

    def k1_vector(self, label):
        a, bkey, m = label
        word, exps, mu = bkey
        shifted = {
            (tuple(g + 1 for g in word), (m,) + exps, (self.i,) + mu): Fr(1)
        }
        run = run_word_desc(a - 1, 0)
        if not run:
            return shifted
        tgt = self.ctx.term_target(next(iter(shifted)))
        run_el = self.ctx.nf_word(run, MPoly.const(1), tgt)
        return self.ctx.multiply(run_el, shifted)

    # -- coordinates -----------------------------------------------------------

    def k0_coords(self, z):
        out = {}
        if not z:
            return out
        oz = self.ctx.psi(z)
        for slot, y in peel_top(self.ctx, oz).items():
            w = self.ctx.psi(y)
            grouped = {}
            for (word, exps, src), c in w.items():
                if src[-1] != self.i:
                    raise AssertionError("kernel coordinate outside the idempotent block")
                m = exps[-1]
                grouped.setdefault(m, {})[(word, exps[:-1], src[:-1])] = c
            for m, el in grouped.items():
                for bkey, c in self.pres.reduce(el).items():
                    _add_term(out, (slot, bkey, m), c)
        return out

    def k1_coords(self, z):
        out = {}
        if not z:
            return out
        oz = omega(self.ctx, self.ctx_t, z)
        for slot, y_t in peel_top(self.ctx_t, oz).items():
            a = self.N - 1 - slot
            y = omega(self.ctx_t, self.ctx, y_t)
            sign = Fr(-1) if a % 2 else Fr(1)
            grouped = {}
            for (word, exps, src), c in y.items():
                if src[0] != self.i:
                    raise AssertionError("kernel coordinate outside the idempotent block")
                m = exps[0]
                key = (tuple(g - 1 for g in word), exps[1:], src[1:])
                grouped.setdefault(m, {})[key] = c * sign
            for m, el in grouped.items():
                for bkey, c in self.pres.reduce(el).items():
                    _add_term(out, (a, bkey, m), c)
        return out

    # -- the two maps -----------------------------------------------------------

    def p_element(self):
        if self._p_el is None:
            ctx = self.ctx
            head = {}
            for nu in self.seqs_gamma:
                m = cyclo_degree(self.lam, nu[0])
                head[((), (m,) + (0,) * (self.N - 1), nu)] = Fr(1)
            run = tuple(range(self.N - 1))
            tail = {}
            for nu in self.seqs_gamma:
                _add_into(tail, ctx.nf_word(run, MPoly.const(1), nu))
            self._p_el = ctx.multiply(head, tail)
        return self._p_el

    def q_element(self):
        if self._q_el is None:
            cur = None
            for a in range(self.N - 2, -1, -1):
                g = g_element(self.ctx, a, self.seqs_gamma)
                cur = g if cur is None else self.ctx.multiply(cur, g)
            self._q_el = cur if cur is not None else None
            if cur is None:
                # no crossings at all (N == 1): the empty product
                self._q_el = self.ctx.sum_idempotents(self.seqs_gamma)
        return self._q_el

    def apply_P(self, z):
        return self.ctx.multiply(z, self.p_element())

    def apply_Q(self, z):
        return self.ctx.multiply(z, self.q_element())

    def p_matrix(self, d):
        """Columns: K1 basis at d - shift; entries: K0 coordinates at d."""
        got = self._pimg.get(d)
        if got is None:
            cols = []
            for label in self.k1_basis(d - self.shift_P):
                img = self.apply_P(self.k1_vector(label))
                cols.append((label, self.k0_coords(img)))
            got = cols
            self._pimg[d] = got
        return got

    def p_rank(self, d):
        r = SparseRREF(col_key=_label_key)
        for _label, col in self.p_matrix(d):
            r.add_row(col)
        return r.rank

    def coker_basis(self, d):
        """Surviving K0 model labels of the quotient by the image at degree d."""
        got = self._coker.get(d)
        if got is None:
            r = SparseRREF(col_key=_label_key)
            for _label, col in self.p_matrix(d):
                r.add_row(col)
            keep = [lb for lb in self.k0_basis(d) if lb not in r.pivots]
            got = (keep, r)
            self._coker[d] = got
        return got

    def f_dim(self, d):
        return len(self.coker_basis(d)[0])

    def injective_at(self, d):
        return self.p_rank(d) == self.k1_dim(d - self.shift_P)


def _label_key(lb):
    return (lb[0], lb[2], term_sort_key(lb[1]))


# ---------------------------------------------------------------------------
# the tower: contexts, algebras, kernels, with routing and caching
# ---------------------------------------------------------------------------

class Tower:
    """All computations for one (datum, params, highest weight)."""

    def __init__(self, datum, params, lam: Weight, slice_limit=4000, cache=None):
        self.datum = datum
        self.params = params
        self.params_t = params.transpose()
        self.lam = lam
        self.slice_limit = slice_limit
        self.cache = cache
        self._ctx = {}
        self._ctx_t = {}
        self._alg = {}
        self._kernels = {}
        self._model_dims = {}

    def ctx(self, n) -> KLRContext:
        got = self._ctx.get(n)
        if got is None:
            got = KLRContext(self.datum, self.params, n)
            self._ctx[n] = got
        return got

    def ctx_t(self, n) -> KLRContext:
        got = self._ctx_t.get(n)
        if got is None:
            got = KLRContext(self.datum, self.params_t, n)
            self._ctx_t[n] = got
        return got

    def root_vector(self, mults) -> RootVector:
        return self.datum.root_vector(mults)

    def algebra(self, beta: RootVector) -> CyclotomicAlgebra:
        key = beta.mults
        got = self._alg.get(key)
        if got is None:
            if self.cache is not None:
                got = self.cache.load_algebra(self, beta)
            if got is None:
                got = CyclotomicAlgebra(self.ctx(beta.height), self.lam, beta, self.slice_limit)
                if self.cache is not None:
                    self.cache.store_algebra(self, beta, got)
            self._alg[key] = got
        return got

    def kernels(self, beta: RootVector, i: int) -> KernelPair:
        key = (beta.mults, i)
        got = self._kernels.get(key)
        if got is None:
            got = KernelPair(self, beta, i)
            self._kernels[key] = got
        return got

    def presentation_feasible(self, beta: RootVector) -> bool:
        try:
            self.algebra(beta)
            return True
        except InfeasiblePresentation:
            return False

    # -- quotient dimensions with routing ---------------------------------------

    def quotient_dims(self, beta: RootVector):
        """Graded dims of the quotient at beta: presentation when feasible,
        otherwise assembled from kernel cokernels one height down."""
        if beta.height == 0:
            return {0: 1}, "presentation"
        try:
            alg = self.algebra(beta)
            return dict(alg.dims), "presentation"
        except InfeasiblePresentation:
            dims, _blocks = self.model_dims(beta)
            return dims, "model"

    def quotient_block_dims(self, beta: RootVector):
        """(target, source) -> per-degree dims, with the computation route."""
        if beta.height == 0:
            return {((), ()): {0: 1}}, "presentation"
        try:
            alg = self.algebra(beta)
            return alg.block_dims(), "presentation"
        except InfeasiblePresentation:
            _dims, blocks = self.model_dims(beta)
            return blocks, "model"

    def model_dims(self, beta: RootVector):
        """Dims and (target, source-last) block data via kernel cokernels."""
        key = beta.mults
        got = self._model_dims.get(key)
        if got is not None:
            return got
        pairs = []
        for j in range(self.datum.n_indices):
            sub = beta.minus_simple(j)
            if sub is None:
                continue
            pairs.append((j, self.kernels(sub, j)))
        if not pairs:
            raise ValueError("the zero root vector has the trivial quotient")
        window = generator_window(self.datum, beta.support())
        n = beta.height
        ctx = self.ctx(n)
        t_tau = max(max_word_degree(ctx, nu) for nu in sequences(beta))
        d_min = min_word_degree(ctx, sequences(beta))
        dims = {}
        blocks = {}
        d = d_min
        last_nonzero = None
        while True:
            floor = max(last_nonzero if last_nonzero is not None else d_min, t_tau)
            if d > floor + window:
                break
            total = 0
            for j, ker in pairs:
                if not ker.injective_at(d):
                    raise AssertionError(
                        f"kernel map fails injectivity at degree {d} while assembling dims"
                    )
                keep, _ = ker.coker_basis(d)
                total += len(keep)
                for lb in keep:
                    tgt = ker.k0_target(lb)
                    src_b = lb[1][2]
                    blk = blocks.setdefault((tgt, src_b + (j,)), {})
                    blk[d] = blk.get(d, 0) + 1
            if total:
                dims[d] = total
                last_nonzero = d
            d += 1
        got = (dims, blocks)
        self._model_dims[key] = got
        return got


# ---------------------------------------------------------------------------
# modules and functor application
# ---------------------------------------------------------------------------

class FiniteModule:
    """A finite graded left module presented by labeled basis vectors.

    `labels` maps degree -> list of hashable labels; `act` takes an algebra
    basis key and a label and returns the expansion of the action as a dict
    label -> coefficient.  The algebra is a CyclotomicAlgebra.
    """

    def __init__(self, algebra, labels, act):
        self.algebra = algebra
        self.labels = {d: list(ls) for d, ls in labels.items() if ls}
        self.act = act

    def dim(self, d):
        return len(self.labels.get(d, []))

    def dims(self):
        return {d: len(ls) for d, ls in self.labels.items()}

    def graded_dim(self):
        return LaurentQ({d: len(ls) for d, ls in self.labels.items()})

    def total_dim(self):
        return sum(len(ls) for ls in self.labels.values())

    def shifted(self, k):
        return FiniteModule(self.algebra, {d + k: ls for d, ls in self.labels.items()}, self.act)


def regular_module(alg: CyclotomicAlgebra) -> FiniteModule:
    labels = {d: list(ks) for d, ks in alg.basis.items()}

    def act(akey, label):
        return alg.multiply_mod({akey: Fr(1)}, {label: Fr(1)})

    return FiniteModule(alg, labels, act)


def zero_module(alg: CyclotomicAlgebra) -> FiniteModule:
    return FiniteModule(alg, {}, lambda a, l: {})


def truncate_E(tower: Tower, beta: RootVector, i: int, module: FiniteModule):
    """Restriction along the idempotent keeping targets that end with i.

    Takes a module over the quotient at beta and produces one over the
    quotient at beta - alpha_i, or None when beta has no alpha_i to strip.
    """
    sub = beta.minus_simple(i)
    if sub is None:
        return None
    alg_small = tower.algebra(sub)
    alg_big = module.algebra
    ctx_big = alg_big.ctx
    labels = {}
    for d, ls in module.labels.items():
        sel = [l for l in ls if ctx_big.term_target(l)[-1] == i]
        if sel:
            labels[d] = sel

    def act(akey, label):
        big = ctx_big.multiply(
            {(akey[0], akey[1] + (0,), akey[2] + (i,)): Fr(1)}, {label: Fr(1)}
        )
        return alg_big.reduce(big)

    return FiniteModule(alg_small, labels, act)


def tensor_F(tower: Tower, beta: RootVector, j: int, module: FiniteModule) -> FiniteModule:
    """Induction: the kernel bimodule at (beta, j) tensored over the quotient
    at beta with the given module, degree by degree with all balancing
    relations whose algebra factor can pair two basis degrees."""
    gamma = beta.plus_simple(j)
    alg_g = tower.algebra(gamma)
    alg_b = tower.algebra(beta)
    fkeys = {}
    for d, ks in alg_g.basis.items():
        sel = [k for k in ks if k[2][-1] == j]
        if sel:
            fkeys[d] = sel
    if not fkeys or module.total_dim() == 0:
        return zero_module(alg_g)
    f_degs = sorted(fkeys)
    m_degs = sorted(module.labels)
    a_keys = alg_b.basis_all()
    za_cache = {}
    au_cache = {}

    def za(z, akey):
        got = za_cache.get((z, akey))
        if got is None:
            prod = alg_g.multiply_mod(
                {z: Fr(1)}, {(akey[0], akey[1] + (0,), akey[2] + (j,)): Fr(1)}
            )
            got = {zk: c for zk, c in prod.items() if zk[2][-1] == j}
            za_cache[(z, akey)] = got
        return got

    def au(akey, u):
        got = au_cache.get((akey, u))
        if got is None:
            got = module.act(akey, u)
            au_cache[(akey, u)] = got
        return got

    labels = {}
    for d in range(f_degs[0] + m_degs[0], f_degs[-1] + m_degs[-1] + 1):
        cols = []
        for d1 in f_degs:
            for z in fkeys.get(d1, []):
                for u in module.labels.get(d - d1, []):
                    cols.append((z, u))
        if not cols:
            continue
        rref = SparseRREF(col_key=lambda zu: (term_sort_key(zu[0]), term_sort_key(zu[1])))
        for akey in a_keys:
            da = alg_b.degree_of(akey)
            for d1 in f_degs:
                us = module.labels.get(d - d1 - da, [])
                if not us:
                    continue
                for z in fkeys.get(d1, []):
                    zac = za(z, akey)
                    for u in us:
                        row = {}
                        for zk, c in zac.items():
                            _add_term(row, (zk, u), c)
                        for uk, c in au(akey, u).items():
                            _add_term(row, (z, uk), -c)
                        if row:
                            rref.add_row(row)
        keep = [zu for zu in cols if zu not in rref.pivots]
        if keep:
            labels[d] = keep

    def act(akey, label):
        raise NotImplementedError("iterated induction is applied through fresh tensors")

    return FiniteModule(alg_g, labels, act)


# ---------------------------------------------------------------------------
# explicit elements of the categorification maps
# ---------------------------------------------------------------------------

def a_nu_poly(tower: Tower, nu, i: int) -> MPoly:
    """The composite polynomial acting on the block of nu: the cyclotomic
    polynomial at the new variable times pair polynomials against the letters
    different from i and squared-pair self factors at the letters equal to i.

    Variables: x_0 is the new strand variable, x_{a+1} the strand carrying
    nu_a."""
    m = cyclo_degree(tower.lam, i)
    out = MPoly.var(0, m) if m else MPoly.const(1)
    for a, letter in enumerate(nu):
        if letter != i:
            out = out * tower.params.q_poly(i, letter).apply_perm([0, a + 1])
        else:
            out = out * tower.params.p_poly(i).apply_perm([0, a + 1])
            out = out * tower.params.p_poly(i).apply_perm([a + 1, 0])
    return out


def b_nu_poly(tower: Tower, nu, i: int) -> MPoly:
    """The mirror composite acting on blocks of the other kernel; the new
    strand variable is x_n (the last one), the strand of nu_a is x_a."""
    n = len(nu)
    m = cyclo_degree(tower.lam, i)
    out = MPoly.var(n, m) if m else MPoly.const(1)
    for a, letter in enumerate(nu):
        if letter != i:
            out = out * tower.params.q_poly(i, letter).apply_perm([n, a])
        else:
            out = out * tower.params.p_poly(i).apply_perm([n, a])
            out = out * tower.params.p_poly(i).apply_perm([a, n])
    return out


class PhiData:
    """The diagram-chase data at (lam, beta, i): the invertible scalar, the
    two monic comparison polynomials, and the chase images of the dummy
    powers obtained by projecting along the free-model splitting."""

    def __init__(self, ker: KernelPair):
        self.ker = ker
        self.tower = ker.tower
        self.p = ker.beta.supp(ker.i)
        self.lam_pairing = ker.tower.lam.minus_root(ker.beta).pairing(ker.i)
        self._gamma = None

    def gamma_scalar(self) -> Fr:
        """The unit with gamma * (leading coefficient of the composite) = (-1)^p."""
        if self._gamma is None:
            i = self.ker.i
            lead = Fr(1)
            params = self.tower.params
            top = 1 - self.tower.datum.a(i, i) // 2
            for j, k in enumerate(self.ker.beta.mults):
                if not k:
                    continue
                if j != i:
                    cj = params.q_poly(i, j).c.get(_ktrim((-self.tower.datum.a(i, j), 0)), Fr(0))
                    lead *= cj ** k
                else:
                    w1 = params.p_poly(i).c.get(_ktrim((top, 0)), Fr(0))
                    w2 = params.p_poly(i).c.get(_ktrim((0, top)), Fr(0))
                    lead *= (w1 * w2) ** k
            sign = Fr(-1) if self.p % 2 else Fr(1)
            self._gamma = sign / lead
        return self._gamma

    def phi(self, k: int):
        """The chase image of the k-th dummy power: a dict m -> quotient coords.

        Splits the image inside the restricted kernel along the image of the
        twist map (products through the top crossing) against the dummy-power
        summand; the split is a tracked exact solve in model coordinates.
        """
        ker = self.ker
        ctx = ker.ctx
        N = ker.N
        word = run_word_desc(N - 2, 0)
        vk = {}
        for mu in sequences(ker.beta):
            exps = (k,) + (0,) * (N - 1)
            _add_into(vk, ctx.nf_word(word, MPoly.monomial(exps), (ker.i,) + mu))
        img = ker.apply_P(vk)
        coords = ker.k0_coords(img)
        if not coords:
            return {}
        d = ctx.element_degree(img)
        rref = SparseRREF(col_key=_label_key, track=True)
        n_twist = self._add_twist_rows(rref, d)
        slot_rows = []
        for label in ker.k0_basis(d):
            if label[0] == N - 1:
                slot_rows.append(label)
                if not rref.add_row({label: Fr(1)}):
                    raise AssertionError("twist image meets the dummy-power summand")
        combo = rref.solve(coords)
        if combo is None:
            raise AssertionError("kernel vector escapes the twist/dummy splitting")
        out = {}
        for idx, c in combo.items():
            if idx >= n_twist:
                _slot, bkey, m = slot_rows[idx - n_twist]
                _add_term(out.setdefault(m, {}), bkey, c)
        return {m: coords for m, coords in out.items() if coords}

    def _add_twist_rows(self, rref, d):
        """Rows spanning the image of the twist map at degree d.

        The image is spanned by products (first-strands element with source
        ending i) * top crossing * (quotient basis element with target ending
        i), all right-extended by the new strand letter.
        """
        ker = self.ker
        ctx = ker.ctx
        n, N, i = ker.n, ker.N, ker.i
        if n == 0 or ker.beta.supp(i) == 0:
            return 0
        count = 0
        ctx_small = ker.ctx_small()
        seqs_src = [nu for nu in sequences(ker.beta) if nu[-1] == i]
        if not seqs_src:
            return 0
        bmax = max(
            abs(ctx.datum.bilinear(i, j)) for j in range(ctx.datum.n_indices)
        )
        amin = min_word_degree(ctx_small, seqs_src)
        for b2key in ker.pres.basis_all():
            if ctx_small.term_target(b2key)[-1] != i:
                continue
            db2 = ker.pres.degree_of(b2key)
            b2el = {(b2key[0], b2key[1] + (0,), b2key[2] + (i,)): Fr(1)}
            d1 = amin
            while d1 <= d - db2 + bmax:
                for akey in GradedSlice(ctx_small, seqs_src, d1, d1).basis(d1):
                    ael = {(akey[0], akey[1] + (0,), akey[2] + (i,)): Fr(1)}
                    mid = ctx.rmul_tau(ael, N - 2)
                    el = ctx.multiply(mid, b2el)
                    if not el or ctx.element_degree(el) != d:
                        continue
                    row = ker.k0_coords(el)
                    if row:
                        rref.add_row(row)
                        count += 1
                d1 += 1
        return count

    def s_poly(self):
        """sum over components of the squared differences, as t-coefficients."""
        return self._t_poly(lambda nu: _prod_mpoly(
            [_sq_diff(a + 1) for a, letter in enumerate(nu) if letter == self.ker.i]
        ))

    def f_poly(self):
        i = self.ker.i
        m = cyclo_degree(self.tower.lam, i)
        gam = self.gamma_scalar()
        sign = Fr(-1) if self.p % 2 else Fr(1)

        def make(nu):
            poly = MPoly.var(0, m) if m else MPoly.const(1)
            for a, letter in enumerate(nu):
                if letter != i:
                    poly = poly * self.tower.params.q_poly(i, letter).apply_perm([0, a + 1])
                else:
                    poly = poly * self.tower.params.p_poly(i).apply_perm([0, a + 1])
                    poly = poly * self.tower.params.p_poly(i).apply_perm([a + 1, 0])
            return poly * (gam * sign)

        return self._t_poly(make)

    def _t_poly(self, maker):
        """Assemble sum_nu maker(nu) e(nu) into {t-power: quotient coords};
        inside maker, x_0 stands for t and x_{a+1} for the strand of nu_a."""
        ker = self.ker
        pres = ker.pres
        out = {}
        for nu in sequences(ker.beta):
            poly = maker(nu)
            by_t = {}
            for e, c in poly.monomials():
                tdeg = e[0] if e else 0
                rest = tuple(e[1:]) + (0,) * (ker.n - len(e) + 1)
                by_t.setdefault(tdeg, {})[((), rest[: ker.n], nu)] = c
            for tdeg, el in by_t.items():
                red = pres.reduce(el)
                for bkey, c in red.items():
                    _add_term(out.setdefault(tdeg, {}), bkey, c)
        return {t: coords for t, coords in out.items() if coords}


def _ktrim(exps):
    exps = tuple(exps)
    while exps and exps[-1] == 0:
        exps = exps[:-1]
    return exps


def _sq_diff(pos):
    d = MPoly.var(0) - MPoly.var(pos)
    return d * d


def _prod_mpoly(polys):
    out = MPoly.const(1)
    for p in polys:
        out = out * p
    return out


def t_poly_mul(pres: CyclotomicAlgebra, A, B):
    """Product in the quotient algebra with a central dummy variable adjoined;
    A, B are dicts t-power -> quotient coords."""
    out = {}
    for ta, ca in A.items():
        for tb, cb in B.items():
            prod = pres.multiply_mod(ca, cb)
            if prod:
                tgt = out.setdefault(ta + tb, {})
                for k, c in prod.items():
                    _add_term(tgt, k, c)
    return {t: c for t, c in out.items() if c}


def t_poly_degree(A):
    return max(A) if A else None


def t_poly_coeff(A, t):
    return A.get(t, {})


def t_poly_sub(A, B):
    out = {t: dict(c) for t, c in A.items()}
    for t, c in B.items():
        tgt = out.setdefault(t, {})
        for k, v in c.items():
            _add_term(tgt, k, -v)
    return {t: c for t, c in out.items() if c}


def t_poly_scale(A, s):
    return {t: {k: v * s for k, v in c.items()} for t, c in A.items()}


# ---------------------------------------------------------------------------
# graded tensors of free slices (no cyclotomic quotient)
# ---------------------------------------------------------------------------

def free_tensor_dims(tower: Tower, left_spec, right_spec, kappa: RootVector, degrees):
    """Degreewise dimensions of  M (x)_{R(kappa)} N  for slice bimodules.

    left_spec = (delta, j): M = slices of R(delta) with sources ending in j
    and right action of R(kappa) through the first-strand embedding; this is
    the kernel of induction in direction j applied after restriction.
    right_spec = (beta, i): N = slices of R(beta) with targets ending in i
    (restriction applied to the regular bimodule), left action through the
    same embedding.
    """
    delta, j = left_spec
    beta, i = right_spec
    ctx_l = tower.ctx(delta.height)
    ctx_r = tower.ctx(beta.height)
    ctx_a = tower.ctx(kappa.height) if kappa.height else None
    seqs_l = [nu for nu in sequences(delta) if nu[-1] == j]
    seqs_r = sequences(beta)
    seqs_a = sequences(kappa)
    lmin = min_word_degree(ctx_l, seqs_l) if seqs_l else 0
    rmin = min_word_degree(ctx_r, seqs_r) if seqs_r else 0
    amin = min_word_degree(ctx_a, seqs_a) if ctx_a else 0
    dmax = max(degrees)
    lslices = {}
    rslices = {}

    def lbasis(d):
        if d not in lslices:
            lslices[d] = GradedSlice(ctx_l, seqs_l, d, d).basis(d)
        return lslices[d]

    def rbasis(d):
        if d not in rslices:
            keys = GradedSlice(ctx_r, seqs_r, d, d).basis(d)
            rslices[d] = [k for k in keys if ctx_r.term_target(k)[-1] == i]
        return rslices[d]

    abasis = {}

    def get_abasis(d):
        if ctx_a is None:
            return [((), (), ())] if d == 0 else []
        if d not in abasis:
            abasis[d] = GradedSlice(ctx_a, seqs_a, d, d).basis(d)
        return abasis[d]

    out = {}
    for d in sorted(degrees):
        cols = []
        d1 = lmin
        while d1 <= d - rmin:
            for z in lbasis(d1):
                for u in rbasis(d - d1):
                    cols.append((z, u))
            d1 += 1
        if not cols:
            out[d] = 0
            continue
        rref = SparseRREF(col_key=lambda zu: (term_sort_key(zu[0]), term_sort_key(zu[1])))
        da = amin
        while da <= d - lmin - rmin:
            for akey in get_abasis(da):
                a_l = {(akey[0], akey[1] + (0,), akey[2] + (j,)): Fr(1)}
                a_r = {(akey[0], akey[1] + (0,), akey[2] + (i,)): Fr(1)}
                d1 = lmin
                while d1 <= d - da - rmin:
                    us = rbasis(d - da - d1)
                    if us:
                        for z in lbasis(d1):
                            za = ctx_l.multiply({z: Fr(1)}, a_l)
                            for u in us:
                                row = {}
                                for zk, c in za.items():
                                    _add_term(row, (zk, u), c)
                                au = ctx_r.multiply(a_r, {u: Fr(1)})
                                for uk, c in au.items():
                                    if ctx_r.term_target(uk)[-1] == i:
                                        _add_term(row, (z, uk), -c)
                                if row:
                                    rref.add_row(row)
                    d1 += 1
            da += 1
        out[d] = len(cols) - rref.rank
    return out
