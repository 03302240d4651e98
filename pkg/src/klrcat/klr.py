"""The quiver Hecke algebra attached to a Borcherds-Cartan datum.

Elements are stored in the normal form

    sum  c * tau_w * x^a * e(nu)

where nu runs over sequences of indices (the source idempotent, written on
the right), a is an exponent vector, and w is a permutation represented by
its canonical reduced word.  The canonical word is the staircase word coming
from the tower of symmetric groups: w factors uniquely as w' * (s_t ... s_b)
with w' fixing the top strand, which makes the word a concatenation of
maximal descending runs with strictly increasing tops.  This is exactly the
word shape underlying the free-module decomposition of the algebra over its
top corner subalgebra, so peeling coefficients off that decomposition is a
structural operation rather than a linear solve.

Rewriting is oriented to (a) reduce squares of crossings, (b) move
polynomials to the right of crossings, and (c) resolve braid triples into
the canonical side plus lower-crossing corrections.  Every correction term
strictly reduces the crossing count, which is the termination measure.

Letters, strand positions and index labels are 0-based throughout this
module; printing converts to the 1-based text form ``tau[2,1] * x1^2 *
e(1,2,1)``.
"""

from __future__ import annotations

from fractions import Fraction

from .rings import MPoly

Fr = Fraction


# ---------------------------------------------------------------------------
# permutations and words
# ---------------------------------------------------------------------------

def word_to_perm(word, n):
    p = list(range(n))
    for g in word:
        p[g], p[g + 1] = p[g + 1], p[g]
    return tuple(p)


def perm_inverse(p):
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def act_perm(perm, nu):
    """w . nu with (w.nu)[w[i]] = nu[i]."""
    out = [None] * len(nu)
    for i, v in enumerate(perm):
        out[v] = nu[i]
    return tuple(out)


def act_word(word, nu):
    """The sequence to the left of tau_word * e(nu)."""
    seq = list(nu)
    for g in reversed(word):
        seq[g], seq[g + 1] = seq[g + 1], seq[g]
    return tuple(seq)


def staircase_word(perm) -> tuple:
    """The canonical reduced word of a permutation (tuple of 0-based letters)."""
    word = []
    p = list(perm)
    n = len(p)
    while n > 1:
        a = p.index(n - 1)
        word[:0] = range(n - 2, a - 1, -1)
        del p[a]
        n -= 1
    return tuple(word)


def runs_of_word(word):
    """Split a staircase word into its maximal descending runs."""
    runs = []
    for g in word:
        if runs and runs[-1][-1] == g + 1:
            runs[-1].append(g)
        else:
            runs.append([g])
    return [tuple(r) for r in runs]


def is_staircase(word) -> bool:
    runs = runs_of_word(word)
    tops = [r[0] for r in runs]
    return all(
        all(r[k] == r[0] - k for k in range(len(r))) for r in runs
    ) and all(t1 < t2 for t1, t2 in zip(tops, tops[1:]))


def word_length_ok(word, perm):
    return len(word) == sum(
        1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j]
    )


# ---------------------------------------------------------------------------
# algebra context
# ---------------------------------------------------------------------------

def _add_term(out, key, coeff):
    w = out.get(key)
    w = coeff if w is None else w + coeff
    if w:
        out[key] = w
    else:
        out.pop(key, None)


def _add_into(out, src, scale=1):
    for key, c in src.items():
        _add_term(out, key, c * scale)


class KLRContext:
    """R(n) for a fixed datum, parameter family and strand count.

    Elements are plain dicts {(word, exps, nu): Fraction}.  All methods are
    pure; the context only carries memo tables for the rewriting engine.
    """

    def __init__(self, datum, params, n):
        self.datum = datum
        self.params = params
        self.n = n
        self.zero_exps = (0,) * n
        self._t_memo = {}
        self._nfword_memo = {}
        self._q_at = {}
        self._p_at = {}
        self._qbar_at = {}
        self._pbar_at = {}

    # -- parameter polynomials placed at strand positions -------------------

    def p_poly_at(self, i, a):
        """P_i(x_a, x_{a+1}) as an MPoly."""
        key = (i, a)
        got = self._p_at.get(key)
        if got is None:
            got = self.params.p_poly(i).apply_perm([a, a + 1])
            self._p_at[key] = got
        return got

    def p_poly_at_rev(self, i, a):
        """P_i(x_{a+1}, x_a)."""
        return self.params.p_poly(i).apply_perm([a + 1, a])

    def q_poly_at(self, i, j, a):
        """Q_{i,j}(x_a, x_{a+1})."""
        key = (i, j, a)
        got = self._q_at.get(key)
        if got is None:
            got = self.params.q_poly(i, j).apply_perm([a, a + 1])
            self._q_at[key] = got
        return got

    def qbar_at(self, i, j, k):
        """(Q_{i,j}(x_k, x_{k+1}) - Q_{i,j}(x_{k+2}, x_{k+1})) / (x_k - x_{k+2})."""
        key = (i, j, k)
        got = self._qbar_at.get(key)
        if got is None:
            from .rings import qbar

            got = qbar(self.params, i, j).apply_perm([k, k + 1, k + 2])
            self._qbar_at[key] = got
        return got

    def pbar_at(self, i, k):
        key = (i, k)
        got = self._pbar_at.get(key)
        if got is None:
            from .rings import pbar

            p1, p2 = pbar(self.params, i)
            got = (p1.apply_perm([k, k + 1, k + 2]), p2.apply_perm([k, k + 1, k + 2]))
            self._pbar_at[key] = got
        return got

    # -- element constructors ------------------------------------------------

    def zero(self):
        return {}

    def idempotent(self, nu):
        nu = tuple(nu)
        if len(nu) != self.n:
            raise ValueError("sequence length does not match the strand count")
        return {((), self.zero_exps, nu): Fr(1)}

    def x_gen(self, k, nu):
        if not 0 <= k < self.n:
            raise IndexError(f"x position {k} out of range")
        e = [0] * self.n
        e[k] = 1
        return {((), tuple(e), tuple(nu)): Fr(1)}

    def tau_gen(self, l, nu):
        if not 0 <= l < self.n - 1:
            raise IndexError(f"crossing position {l} out of range")
        return {((l,), self.zero_exps, tuple(nu)): Fr(1)}

    def poly_element(self, poly: MPoly, nu):
        out = {}
        for e, c in poly.monomials():
            exps = tuple(e) + (0,) * (self.n - len(e))
            if len(exps) > self.n:
                raise ValueError("polynomial uses variables beyond the strand count")
            _add_term(out, ((), exps, tuple(nu)), c)
        return out

    def sum_idempotents(self, seqs):
        out = {}
        for nu in seqs:
            _add_into(out, self.idempotent(nu))
        return out

    # -- degrees -------------------------------------------------------------

    def word_degree(self, word, nu):
        d = 0
        seq = list(nu)
        for g in reversed(word):
            d -= self.datum.bilinear(seq[g], seq[g + 1])
            seq[g], seq[g + 1] = seq[g + 1], seq[g]
        return d

    def term_degree(self, key):
        word, exps, nu = key
        d = self.word_degree(word, nu)
        dd = self.datum.d
        return d + sum(2 * dd[nu[k]] * exps[k] for k in range(self.n) if exps[k])

    def element_degree(self, x):
        """The common degree of a homogeneous element (None for zero)."""
        degs = {self.term_degree(k) for k in x}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("element is not homogeneous")
        return degs.pop()

    def degree_parts(self, x):
        parts = {}
        for key, c in x.items():
            parts.setdefault(self.term_degree(key), {})[key] = c
        return parts

    def term_target(self, key):
        word, _exps, nu = key
        return act_perm(word_to_perm(word, self.n), nu)

    # -- the rewriting engine -------------------------------------------------

    def _push(self, f: MPoly, word, nu):
        """f * tau_word * e(nu) -> [(subword, poly)] with the poly on the right.

        Corrections drop the crossed letter and pick up the self polynomial of
        the doubled index, strictly decreasing the crossing count.
        """
        if not word:
            return [((), f)]
        g, rest = word[0], word[1:]
        out = []
        for w2, h in self._push(f.swap(g, g + 1), rest, nu):
            out.append(((g,) + w2, h))
        mu = act_word(rest, nu)
        if mu[g] == mu[g + 1]:
            corr = f.divided_difference(g) * self.p_poly_at(mu[g], g)
            if corr:
                out.extend(self._push(corr, rest, nu))
        return out

    def _emit_poly(self, out, word, poly: MPoly, nu, scale):
        for e, c in poly.monomials():
            exps = tuple(e) + (0,) * (self.n - len(e))
            _add_term(out, (word, exps, nu), c * scale)

    def _concat_norm(self, out, vword, wword, poly, nu, scale):
        word = vword + wword
        if is_staircase(word):
            self._emit_poly(out, word, poly, nu, scale)
        else:
            _add_into(out, self.nf_word(word, poly, nu), scale)

    def _attach_run(self, out, terms, run, nu, scale):
        """terms * tau_run * e(nu), with terms a normal form left of the run."""
        for (vword, vexps, _mu), c in terms.items():
            mono = MPoly.monomial(vexps)
            for w2, h in self._push(mono, run, nu):
                self._concat_norm(out, vword, w2, h, nu, scale * c)

    def tau_mul(self, word, l, nu):
        """Normal form of tau_word * tau_l * e(nu) for a canonical word."""
        key = (word, l, nu)
        got = self._t_memo.get(key)
        if got is not None:
            return got
        out = {}
        if not word:
            out[((l,), self.zero_exps, nu)] = Fr(1)
        else:
            runs = runs_of_word(word)
            run = runs[-1]
            t, b = run[0], run[-1]
            prefix = word[: len(word) - len(run)]
            if l > t:
                out[(word + (l,), self.zero_exps, nu)] = Fr(1)
            elif l == b - 1:
                out[(word + (l,), self.zero_exps, nu)] = Fr(1)
            elif l <= b - 2:
                mu = act_word(run, nu)
                inner = self.tau_mul(prefix, l, mu)
                self._attach_run(out, inner, run, nu, Fr(1))
            elif l == b:
                if nu[b] != nu[b + 1]:
                    poly = self.q_poly_at(nu[b], nu[b + 1], b)
                    self._emit_poly(out, prefix + run[:-1], poly, nu, Fr(1))
                else:
                    poly = self.p_poly_at(nu[b], b).divided_difference(b)
                    if poly:
                        self._emit_poly(out, word, poly, nu, Fr(1))
            else:
                # b + 1 <= l <= t: braid the entering crossing into the run
                mu = act_word(run, nu)
                inner = self.tau_mul(prefix, l - 1, mu)
                self._attach_run(out, inner, run, nu, Fr(1))
                head = tuple(range(t, l, -1))  # (t .. l+1)
                tail = tuple(range(l - 2, b - 1, -1))  # (l-2 .. b)
                muc = act_word(tail, nu)
                i1, i2, i3 = muc[l - 1], muc[l], muc[l + 1]
                if i1 == i3 and i1 != i2:
                    poly = self.p_poly_at(i1, l - 1).swap(l, l + 1) * self.qbar_at(i1, i2, l - 1)
                    for w2, h in self._push(poly, tail, nu):
                        self._concat_norm(out, prefix + head, w2, h, nu, Fr(1))
                elif i1 == i2 == i3:
                    pb1, pb2 = self.pbar_at(i1, l - 1)
                    if pb1:
                        for w2, h in self._push(pb1, (l - 1,) + tail, nu):
                            self._concat_norm(out, prefix + head, w2, h, nu, Fr(1))
                    if pb2:
                        for w2, h in self._push(pb2, (l,) + tail, nu):
                            self._concat_norm(out, prefix + head, w2, h, nu, Fr(1))
        self._t_memo[key] = out
        return out

    def nf_word(self, word, poly, nu):
        """Normal form of tau_word * poly * e(nu) for an arbitrary word."""
        base = self._nf_word_cached(tuple(word), tuple(nu))
        if isinstance(poly, MPoly):
            return self.rmul_poly(base, poly)
        return dict(base) if poly == 1 else {k: c * poly for k, c in base.items()}

    def _nf_word_cached(self, word, nu):
        key = (word, nu)
        got = self._nfword_memo.get(key)
        if got is not None:
            return got
        if not word:
            out = {((), self.zero_exps, nu): Fr(1)}
        else:
            last = word[-1]
            prev = self._nf_word_cached(word[:-1], act_word((last,), nu))
            out = self.rmul_tau(prev, last)
        self._nfword_memo[key] = out
        return out

    # -- products --------------------------------------------------------------

    def rmul_tau(self, x, l):
        out = {}
        for (word, exps, mu), c in x.items():
            nu = list(mu)
            nu[l], nu[l + 1] = nu[l + 1], nu[l]
            nu = tuple(nu)
            swapped = list(exps)
            swapped[l], swapped[l + 1] = swapped[l + 1], swapped[l]
            swapped = tuple(swapped)
            for (w2, e2, _nu2), c2 in self.tau_mul(word, l, nu).items():
                merged = tuple(a + b for a, b in zip(e2, swapped))
                _add_term(out, (w2, merged, nu), c * c2)
            if mu[l] == mu[l + 1]:
                corr = MPoly.monomial(exps).divided_difference(l) * self.p_poly_at(mu[l], l)
                for e, cc in corr.monomials():
                    merged = tuple(e) + (0,) * (self.n - len(e))
                    _add_term(out, (word, merged, nu), c * cc)
        return out

    def rmul_x(self, x, k, power=1):
        out = {}
        for (word, exps, mu), c in x.items():
            e = list(exps)
            e[k] += power
            out[(word, tuple(e), mu)] = c
        return out

    def rmul_poly(self, x, poly: MPoly):
        out = {}
        for (word, exps, mu), c in x.items():
            for e, cc in poly.monomials():
                merged = tuple(
                    exps[k] + (e[k] if k < len(e) else 0) for k in range(self.n)
                )
                _add_term(out, (word, merged, mu), c * cc)
        return out

    def rmul_idempotent(self, x, nu):
        nu = tuple(nu)
        return {key: c for key, c in x.items() if key[2] == nu}

    def lmul_idempotent(self, nu, x):
        nu = tuple(nu)
        return {key: c for key, c in x.items() if self.term_target(key) == nu}

    def multiply(self, x, y):
        """The algebra product x * y."""
        out = {}
        by_word = {}
        for (word, exps, mu), c in y.items():
            by_word.setdefault(word, []).append((exps, mu, c))
        for word, rest in by_word.items():
            cur = x
            for g in word:
                cur = self.rmul_tau(cur, g)
            for exps, mu, c in rest:
                for (w2, e2, s2), c2 in cur.items():
                    if s2 != mu:
                        continue
                    merged = tuple(a + b for a, b in zip(e2, exps))
                    _add_term(out, (w2, merged, mu), c * c2)
        return out

    def normal_form(self, factors, nu):
        """Product of a list of generator descriptions against e(nu).

        Factors are ('tau', l), ('x', k), ('e', seq) or ('poly', MPoly),
        multiplied left to right; nu is the source of the whole word.
        """
        seq = tuple(nu)
        cur = self.idempotent(
            _source_through(factors, seq, self.n)
        )
        for f in factors:
            kind = f[0]
            if kind == "tau":
                cur = self.rmul_tau(cur, f[1])
            elif kind == "x":
                cur = self.rmul_x(cur, f[1])
            elif kind == "e":
                cur = self.rmul_idempotent(cur, tuple(f[1]))
            elif kind == "poly":
                cur = self.rmul_poly(cur, f[1])
            else:
                raise ValueError(f"unknown factor kind {kind!r}")
        return self.rmul_idempotent(cur, seq)

    # -- anti-automorphism and embeddings ---------------------------------------

    def psi(self, x):
        """The anti-automorphism fixing every generator and reversing products."""
        out = {}
        for (word, exps, nu), c in x.items():
            cur = {((), exps, nu): c}
            for g in reversed(word):
                cur = self.rmul_tau(cur, g)
            _add_into(out, cur)
        return out

    def shift_embed(self, x, first_letters):
        """The shift embedding R(n) -> R(n+1), x_k -> x_{k+1}, tau_l -> tau_{l+1}.

        Sources acquire a new first letter running over `first_letters`; the
        target context (one more strand) performs no rewriting because shifted
        normal forms stay normal.
        """
        out = {}
        for (word, exps, nu), c in x.items():
            for i in first_letters:
                key = (
                    tuple(g + 1 for g in word),
                    (0,) + exps,
                    (i,) + nu,
                )
                _add_term(out, key, c)
        return out

    def right_embed(self, x, last_letters):
        """R(n) -> R(n+1) on the first n strands; sources get a last letter."""
        out = {}
        for (word, exps, nu), c in x.items():
            for i in last_letters:
                _add_term(out, (word, exps + (0,), nu + (i,)), c)
        return out

    # -- printing ----------------------------------------------------------------

    def term_str(self, key):
        word, exps, nu = key
        parts = []
        if word:
            parts.append("tau[" + ",".join(str(g + 1) for g in word) + "]")
        for k, p in enumerate(exps):
            if p:
                parts.append(f"x{k + 1}" + (f"^{p}" if p > 1 else ""))
        labels = ",".join(self.datum.indices[i] for i in nu)
        parts.append(f"e({labels})")
        return " * ".join(parts)

    def element_str(self, x):
        if not x:
            return "0"
        parts = []
        for key in sorted(x, key=term_sort_key):
            c = x[key]
            s = self.term_str(key)
            if c == 1:
                parts.append(s)
            elif c == -1:
                parts.append(f"-{s}")
            else:
                parts.append(f"{c} * {s}")
        return " + ".join(parts).replace("+ -", "- ")


def _source_through(factors, nu, n):
    """Source sequence at the left end of a factor word ending against e(nu)."""
    seq = tuple(nu)
    for f in reversed(factors):
        if f[0] == "tau":
            l = f[1]
            s = list(seq)
            s[l], s[l + 1] = s[l + 1], s[l]
            seq = tuple(s)
    return seq


def term_sort_key(key):
    word, exps, nu = key
    return (nu, len(word), word, exps)


# ---------------------------------------------------------------------------
# free-module peeling
# ---------------------------------------------------------------------------

def peel_top(ctx: KLRContext, z):
    """Coordinates of z in the decomposition  R(n) = (+)_a R(n-1,1) tau_{n-2} ... tau_a.

    Returns {slot: y} with slot in 0..n-1, where slot a < n-1 stands for the
    descending run (n-2 .. a) and slot n-1 for the empty run, and y is a
    normal form supported on the first n-1 strands together with powers of
    x_{n-1}, so that z = sum_a y_a * tau_run(a).  Sources of y are the
    sequences to the left of the run.

    The extraction is structural: the monomial part of each term is crossed
    leftward over the term's top run, corrections dropping crossings, and the
    surviving letters below the top run are folded back into the coefficient.
    """
    n = ctx.n
    top = n - 2
    slots = {}

    def emit(slot, y_terms):
        _add_into(slots.setdefault(slot, {}), y_terms)

    for (word, exps, nu), c in z.items():
        runs = runs_of_word(word)
        if not word or runs[-1][0] != top:
            emit(n - 1, {(word, exps, nu): c})
            continue
        run = runs[-1]
        prefix = word[: len(word) - len(run)]
        states = [(run, MPoly.monomial(exps), ())]
        final = []
        while states:
            left, f, crossed = states.pop()
            if not left:
                final.append((f, crossed))
                continue
            g = left[-1]
            states.append((left[:-1], f.swap(g, g + 1), (g,) + crossed))
            mu = act_word(crossed, nu)
            if mu[g] == mu[g + 1]:
                corr = f.divided_difference(g) * ctx.p_poly_at(mu[g], g)
                if corr:
                    states.append((left[:-1], corr, crossed))
        for f, crossed in final:
            if crossed and crossed[0] == top:
                k = 1
                while k < len(crossed) and crossed[k] == crossed[k - 1] - 1:
                    k += 1
                head, rest = crossed[:k], crossed[k:]
                slot = head[-1]
            else:
                head, rest = (), crossed
                slot = n - 1
            mu_head = act_word(head, nu)
            y = {}
            for w2, h in ctx._push(f, rest, mu_head):
                ctx._concat_norm(y, prefix, w2, h, mu_head, c)
            emit(slot, y)
    return {slot: y for slot, y in slots.items() if y}


def run_word_desc(top, bottom):
    return tuple(range(top, bottom - 1, -1))


def reassemble_top(ctx: KLRContext, slots):
    """Inverse of peel_top (for verification)."""
    n = ctx.n
    out = {}
    for slot, y in slots.items():
        if slot == n - 1:
            _add_into(out, y)
            continue
        run = run_word_desc(n - 2, slot)
        for (word, exps, mu), c in y.items():
            cur = {(word, exps, mu): c}
            for g in run:
                cur = ctx.rmul_tau(cur, g)
            _add_into(out, cur)
    return out


def omega(ctx: KLRContext, ctx_t: KLRContext, z):
    """The rotation anti-map tau_l -> -tau_{n-2-l}, x_k -> x_{n-1-k}, e(nu) -> e(reversed nu).

    Lands in the algebra with every self polynomial transposed (the pair
    polynomials are symmetric under the simultaneous swap, so they persist);
    the sign on crossings is what makes the mixed relation between crossings
    and variables carry over.  Composing the map out of the transposed
    context with this one is the identity.
    """
    n = ctx.n
    out = {}
    for (word, exps, nu), c in z.items():
        sign = -1 if len(word) % 2 else 1
        cur = {((), exps[::-1], nu[::-1]): c * sign}
        for g in reversed(word):
            cur = ctx_t.rmul_tau(cur, n - 2 - g)
        _add_into(out, cur)
    return out


# ---------------------------------------------------------------------------
# slices, blocks and membership
# ---------------------------------------------------------------------------

def enumerate_exps(weights, total):
    """Exponent tuples e with sum weights[k]*e[k] == total (weights > 0)."""
    out = []

    def rec(k, left, cur):
        if k == len(weights):
            if left == 0:
                out.append(tuple(cur))
            return
        w = weights[k]
        if k == len(weights) - 1:
            if left % w == 0:
                out.append(tuple(cur + [left // w]))
            return
        e = 0
        while w * e <= left:
            rec(k + 1, left - w * e, cur + [e])
            e += 1

    rec(0, total, [])
    return out


class GradedSlice:
    """Ordered monomial bases of R(beta) in a degree window."""

    def __init__(self, ctx, seqs, d_min, d_max):
        self.ctx = ctx
        self.d_min = d_min
        self.d_max = d_max
        self.seqs = list(seqs)
        self.by_degree = {d: [] for d in range(d_min, d_max + 1)}
        n = ctx.n
        perms = _all_perms(n)
        for nu in self.seqs:
            weights = [2 * ctx.datum.d[i] for i in nu]
            for p in perms:
                word = staircase_word(p)
                base = ctx.word_degree(word, nu)
                for d in range(max(d_min, base), d_max + 1):
                    rem = d - base
                    for exps in enumerate_exps(weights, rem):
                        self.by_degree[d].append((word, exps, nu))
        for d in self.by_degree:
            self.by_degree[d].sort(key=term_sort_key)

    def basis(self, d):
        return self.by_degree.get(d, [])

    def dim(self, d):
        return len(self.by_degree.get(d, []))


def _all_perms(n):
    import itertools

    return sorted(itertools.permutations(range(n)))


def min_word_degree(ctx, seqs):
    """The global minimum degree of R(beta): only crossings can go negative."""
    best = 0
    for nu in seqs:
        for p in _all_perms(ctx.n):
            best = min(best, ctx.word_degree(staircase_word(p), nu))
    return best


def max_word_degree(ctx, nu):
    return max(ctx.word_degree(staircase_word(p), nu) for p in _all_perms(ctx.n))


def basis_slice(ctx, beta_seqs, d_min, d_max) -> GradedSlice:
    return GradedSlice(ctx, beta_seqs, d_min, d_max)


def idempotent_block_dims(slice_: GradedSlice, nu, mu):
    """Per-degree dimensions of e(nu) R e(mu)."""
    ctx = slice_.ctx
    nu, mu = tuple(nu), tuple(mu)
    out = {}
    for d in range(slice_.d_min, slice_.d_max + 1):
        cnt = 0
        for key in slice_.basis(d):
            if key[2] == mu and ctx.term_target(key) == nu:
                cnt += 1
        out[d] = cnt
    return out


def membership(ctx, v, span, degree=None):
    """Exact membership of v in the span of a list of elements.

    All inputs must be homogeneous of one degree.  Returns (True, coords) on
    success with coords the coefficients over `span`, else (False, None).
    """
    from .linalg import SparseRREF

    degs = set()
    for el in list(span) + [v]:
        d = ctx.element_degree(el)
        if d is not None:
            degs.add(d)
    if degree is not None:
        degs.add(degree)
    if len(degs) > 1:
        raise ValueError("membership requires homogeneous input of one degree")
    r = SparseRREF(col_key=term_sort_key, track=True)
    for el in span:
        r.add_row(el)
    combo = r.solve(v)
    if combo is None:
        return False, None
    coords = [combo.get(k, Fr(0)) for k in range(len(span))]
    return True, coords
