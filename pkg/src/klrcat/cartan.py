"""Borcherds-Cartan data, weights, and root combinatorics.

A Borcherds-Cartan matrix is an integer matrix A = (a_ij) with a_ii = 2 or a
nonpositive even integer, a_ij <= 0 off the diagonal, a_ij = 0 iff a_ji = 0,
and DA symmetric for a diagonal matrix D of positive integers d_i.  Indices
with a_ii = 2 are called real, the others imaginary.  Everything downstream
(parameter polynomials, gradings, quotient bounds) is driven by this datum,
so validation happens once, up front, and the validated object is immutable.

Index labels are arbitrary strings; internally indices are positions into the
given ordering, and all deterministic output follows that order.
"""

from __future__ import annotations

from dataclasses import dataclass


class DatumError(ValueError):
    """Raised when a matrix/symmetrizer pair violates the defining axioms."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass(frozen=True)
class BorcherdsCartanDatum:
    indices: tuple[str, ...]
    cartan: tuple[tuple[int, ...], ...]
    d: tuple[int, ...]

    @property
    def n_indices(self) -> int:
        return len(self.indices)

    def a(self, i: int, j: int) -> int:
        return self.cartan[i][j]

    def is_real(self, i: int) -> bool:
        return self.cartan[i][i] == 2

    def is_imaginary(self, i: int) -> bool:
        return not self.is_real(i)

    @property
    def real_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n_indices) if self.is_real(i))

    @property
    def imaginary_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n_indices) if self.is_imaginary(i))

    def bilinear(self, i: int, j: int) -> int:
        """(alpha_i | alpha_j) = d_i a_ij."""
        if not (0 <= i < self.n_indices and 0 <= j < self.n_indices):
            raise IndexError(f"unknown index pair ({i}, {j})")
        return self.d[i] * self.cartan[i][j]

    def position(self, label: str) -> int:
        try:
            return self.indices.index(label)
        except ValueError:
            raise KeyError(f"unknown index label {label!r}") from None

    # -- weights -----------------------------------------------------------

    def fundamental_weight(self, i: int) -> "Weight":
        fund = [0] * self.n_indices
        fund[i] = 1
        return Weight(self, tuple(fund), (0,) * self.n_indices)

    def zero_weight(self) -> "Weight":
        return Weight(self, (0,) * self.n_indices, (0,) * self.n_indices)

    def weight(self, fund_coeffs) -> "Weight":
        fund = tuple(int(c) for c in fund_coeffs)
        if len(fund) != self.n_indices:
            raise ValueError("wrong number of fundamental-weight coefficients")
        return Weight(self, fund, (0,) * self.n_indices)

    # -- roots -------------------------------------------------------------

    def root(self, i: int) -> "RootVector":
        mult = [0] * self.n_indices
        mult[i] = 1
        return RootVector(self, tuple(mult))

    def root_vector(self, mults) -> "RootVector":
        m = tuple(int(k) for k in mults)
        if len(m) != self.n_indices:
            raise ValueError("wrong number of root multiplicities")
        if any(k < 0 for k in m):
            raise ValueError("root multiplicities must be nonnegative")
        return RootVector(self, m)


@dataclass(frozen=True)
class Weight:
    """lambda = sum fund[i]*Lambda_i - sum roots[i]*alpha_i.

    Only pairings against the simple coroots are ever required, so no ambient
    lattice basis is fixed.
    """

    datum: BorcherdsCartanDatum
    fund: tuple[int, ...]
    roots: tuple[int, ...]

    def pairing(self, i: int) -> int:
        """<h_i, self>."""
        a = self.datum.cartan
        return self.fund[i] - sum(r * a[i][j] for j, r in enumerate(self.roots))

    def minus_root(self, beta: "RootVector") -> "Weight":
        roots = tuple(r + k for r, k in zip(self.roots, beta.mults))
        return Weight(self.datum, self.fund, roots)

    def minus_simple(self, i: int) -> "Weight":
        return self.minus_root(self.datum.root(i))

    def is_dominant(self) -> bool:
        return all(self.pairing(i) >= 0 for i in range(self.datum.n_indices))

    def bilinear_with_root(self, i: int) -> int:
        """(alpha_i | self) = d_i <h_i, self>."""
        return self.datum.d[i] * self.pairing(i)

    def __str__(self):
        names = self.datum.indices
        parts = [f"{c}*L({names[i]})" for i, c in enumerate(self.fund) if c]
        parts += [f"-{r}*a({names[i]})" for i, r in enumerate(self.roots) if r]
        return " ".join(parts) if parts else "0"


@dataclass(frozen=True)
class RootVector:
    """An element beta of Q^+ as nonnegative multiplicities of simple roots."""

    datum: BorcherdsCartanDatum
    mults: tuple[int, ...]

    @property
    def height(self) -> int:
        return sum(self.mults)

    def supp(self, i: int) -> int:
        return self.mults[i]

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, k in enumerate(self.mults) if k)

    def plus_simple(self, i: int) -> "RootVector":
        m = list(self.mults)
        m[i] += 1
        return RootVector(self.datum, tuple(m))

    def minus_simple(self, i: int):
        """beta - alpha_i, or None when the result leaves Q^+."""
        if self.mults[i] == 0:
            return None
        m = list(self.mults)
        m[i] -= 1
        return RootVector(self.datum, tuple(m))

    def __str__(self):
        names = self.datum.indices
        parts = [f"{k}*a({names[i]})" for i, k in enumerate(self.mults) if k]
        return " + ".join(parts) if parts else "0"


def validate_datum(cartan, d, indices=None) -> BorcherdsCartanDatum:
    """Validate a matrix/symmetrizer pair, reporting every violated condition.

    Raises DatumError carrying the full list of problems; on success returns
    the immutable datum with the real/imaginary classification derivable from
    the diagonal.
    """
    problems = []
    n = len(cartan)
    if indices is None:
        indices = tuple(str(i + 1) for i in range(n))
    else:
        indices = tuple(str(s) for s in indices)
        if len(set(indices)) != len(indices):
            problems.append("index labels are not distinct")
    if len(indices) != n:
        problems.append(f"{len(indices)} labels for a {n}x{n} matrix")
    rows = []
    for row in cartan:
        if len(row) != n:
            problems.append("cartan matrix is not square")
            raise DatumError(problems)
        rows.append(tuple(int(x) for x in row))
    A = tuple(rows)
    if len(d) != n:
        problems.append("symmetrizer length does not match matrix size")
        raise DatumError(problems)
    dd = tuple(int(x) for x in d)
    for i in range(n):
        if dd[i] <= 0:
            problems.append(f"d_{indices[i]}={dd[i]} is not positive")
        aii = A[i][i]
        if aii != 2 and (aii > 0 or aii % 2 != 0):
            problems.append(
                f"a_{indices[i]}{indices[i]}={aii} is neither 2 nor a nonpositive even integer"
            )
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if A[i][j] > 0:
                problems.append(f"a_{indices[i]}{indices[j]}={A[i][j]} is positive off the diagonal")
            if (A[i][j] == 0) != (A[j][i] == 0):
                problems.append(
                    f"a_{indices[i]}{indices[j]}={A[i][j]} but a_{indices[j]}{indices[i]}={A[j][i]}"
                )
            if dd[i] * A[i][j] != dd[j] * A[j][i]:
                problems.append(
                    f"d_{indices[i]}*a_{indices[i]}{indices[j]} != d_{indices[j]}*a_{indices[j]}{indices[i]}"
                )
    if problems:
        # keep report order deterministic and free of duplicates
        seen, uniq = set(), []
        for p in problems:
            if p not in seen:
                seen.add(p)
                uniq.append(p)
        raise DatumError(uniq)
    return BorcherdsCartanDatum(indices, A, dd)


def sequences(beta: RootVector) -> list[tuple[int, ...]]:
    """All distinct sequences nu in I^beta, in lexicographic order.

    Lexicographic with respect to the input ordering of the index set; the
    count is the multinomial coefficient |beta|! / prod k_i!.
    """
    letters = []
    for i, k in enumerate(beta.mults):
        letters.extend([i] * k)
    out = []

    def emit(remaining, prefix):
        if not any(remaining):
            out.append(tuple(prefix))
            return
        for i, k in enumerate(remaining):
            if k:
                remaining[i] -= 1
                prefix.append(i)
                emit(remaining, prefix)
                prefix.pop()
                remaining[i] += 1

    emit(list(beta.mults), [])
    return out
