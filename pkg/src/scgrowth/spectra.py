"""Certified Perron roots of nonnegative integer matrices.

Every enclosure has exact rational endpoints.  Floating point only supplies a
starting eigenvector guess; the bounds themselves are Collatz-Wielandt
ratios ``min (Ax)_i/x_i <= v(A) <= max (Ax)_i/x_i`` evaluated in exact
integer arithmetic for a positive vector ``x``.  When those refuse to
tighten, the characteristic polynomial is computed exactly and the Perron
root is isolated with Sturm sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = Fraction(1, 10**10)
EXACT_FALLBACK_MAX = 60

Matrix = list[list[int]]


class SpectraError(ValueError):
    pass


def as_matrix(a) -> Matrix:
    rows = [[int(x) for x in row] for row in (a.tolist() if isinstance(a, np.ndarray) else a)]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise SpectraError("matrix must be square")
    if any(x < 0 for r in rows for x in r):
        raise SpectraError("matrix entries must be nonnegative")
    return rows


def sum_elements(a) -> int:
    return sum(sum(r) for r in as_matrix(a))


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col) if x and y) for col in bt] for row in a]


def matrix_power(a, exponent: int) -> Matrix:
    """Exact integer power by repeated squaring."""
    if exponent < 0:
        raise SpectraError("exponent must be nonnegative")
    a = as_matrix(a)
    result = identity(len(a))
    base = a
    while exponent:
        if exponent & 1:
            result = matmul(result, base)
        exponent >>= 1
        if exponent:
            base = matmul(base, base)
    return result


# ----------------------------------------------------------- graph structure


def strongly_connected_components(a) -> list[list[int]]:
    """SCCs of the support graph, sources first (topological order).

    Iterative Tarjan; it emits components in reverse topological order.
    """
    a = as_matrix(a)
    n = len(a)
    succ = [[j for j, x in enumerate(row) if x] for row in a]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            while i < len(succ[v]):
                w = succ[v][i]
                i += 1
                if index[w] == -1:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
    comps.reverse()
    return comps


def is_irreducible(a) -> bool:
    a = as_matrix(a)
    if len(a) == 0:
        return False
    if len(a) == 1:
        # a 1x1 zero matrix has no cycle; convention: irreducible iff nonzero
        return a[0][0] > 0
    return len(strongly_connected_components(a)) == 1


def submatrix(a: Matrix, idx: Sequence[int]) -> Matrix:
    return [[a[i][j] for j in idx] for i in idx]


# ------------------------------------------------------ exact polynomials


def charpoly(a) -> list[int]:
    """Characteristic polynomial det(xI - A), highest degree first.

    Faddeev-LeVerrier; every intermediate matrix is integral for integer A,
    so the divisions by k are exact.
    """
    a = as_matrix(a)
    n = len(a)
    sparse = [[(t, x) for t, x in enumerate(row) if x] for row in a]

    def left_mul(m):
        return [[sum(x * m[t][j] for t, x in sparse[i]) for j in range(n)] for i in range(n)]

    coeffs = [1]
    m = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        m = left_mul(m)
        for i in range(n):
            m[i][i] += coeffs[-1]
        tr = sum(sum(x * m[t][i] for t, x in sparse[i]) for i in range(n))
        c, rem = divmod(-tr, k)
        assert rem == 0
        coeffs.append(c)
    return coeffs


def _trim(p: list) -> list:
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def poly_eval(p: Sequence, x):
    acc = 0
    for c in p:
        acc = acc * x + c
    return acc


def poly_derivative(p: Sequence) -> list:
    n = len(p) - 1
    return _trim([c * (n - i) for i, c in enumerate(p[:-1])]) or [0]


def poly_rem(p: Sequence, q: Sequence) -> list[Fraction]:
    p = [Fraction(c) for c in p]
    q = _trim([Fraction(c) for c in q])
    while len(p) >= len(q) and any(p):
        f = p[0] / q[0]
        for i in range(len(q)):
            p[i] -= f * q[i]
        p = p[1:]
    return _trim(p) if p else [Fraction(0)]


def poly_gcd(p: Sequence, q: Sequence) -> list[Fraction]:
    p = _trim([Fraction(c) for c in p])
    q = _trim([Fraction(c) for c in q])
    while any(q):
        p, q = q, poly_rem(p, q)
    return [c / p[0] for c in p]


def poly_quo(p: Sequence, q: Sequence) -> list[Fraction]:
    p = [Fraction(c) for c in p]
    q = _trim([Fraction(c) for c in q])
    out = []
    while len(p) >= len(q):
        f = p[0] / q[0]
        out.append(f)
        for i in range(len(q)):
            p[i] -= f * q[i]
        p = p[1:]
    return out or [Fraction(0)]


def squarefree(p: Sequence) -> list[Fraction]:
    g = poly_gcd(p, poly_derivative(p))
    return poly_quo(p, g) if len(g) > 1 else [Fraction(c) for c in p]


def sturm_sequence(p: Sequence) -> list[list[Fraction]]:
    seq = [[Fraction(c) for c in p], [Fraction(c) for c in poly_derivative(p)]]
    while len(seq[-1]) > 1 or seq[-1][0] != 0:
        r = poly_rem(seq[-2], seq[-1])
        if len(r) == 1 and r[0] == 0:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(seq, x) -> int:
    signs = [s for s in (poly_eval(p, x) for p in seq) if s != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))


def count_roots(seq, a, b) -> int:
    """Distinct real roots in (a, b] (seq from a squarefree polynomial)."""
    return _sign_changes(seq, a) - _sign_changes(seq, b)


def isolate_largest_root(p: Sequence, lo: Fraction, hi: Fraction, tol: Fraction) -> tuple[Fraction, Fraction]:
    """Narrow [lo, hi] around the largest real root of p, known to lie in it.

    The returned interval (a, b] holds exactly one distinct root of p and
    b - a <= tol, unless the root is found exactly (a == b).
    """
    sf = squarefree(p)
    seq = sturm_sequence(sf)
    lo, hi = Fraction(lo), Fraction(hi)
    if poly_eval(sf, hi) == 0:
        return hi, hi
    a = lo - 1
    if count_roots(seq, a, hi) == 0:
        raise SpectraError("no root in the given interval")
    while hi - a > tol or count_roots(seq, a, hi) > 1:
        mid = (a + hi) / 2
        if count_roots(seq, mid, hi) >= 1:
            a = mid
        else:
            if poly_eval(sf, mid) == 0:
                return mid, mid
            hi = mid
    return a, hi


# ------------------------------------------------------------ enclosures


@dataclass(frozen=True)
class SpectralEnclosure:
    lo: Fraction
    hi: Fraction
    iterations: int = 0
    method: str = ""

    def __post_init__(self):
        if self.lo > self.hi:
            raise SpectraError(f"empty enclosure [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def mid(self) -> float:
        return float((self.lo + self.hi) / 2)

    def contains(self, x) -> bool:
        return self.lo <= Fraction(x) <= self.hi

    def overlaps(self, other: SpectralEnclosure) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def below(self, other: SpectralEnclosure) -> bool:
        """Certified strict inequality self < other."""
        return self.hi < other.lo

    def power(self, n: int) -> SpectralEnclosure:
        return SpectralEnclosure(self.lo**n, self.hi**n, self.iterations, self.method)


def _float_perron_vector(rows: Matrix) -> np.ndarray:
    m = len(rows)
    a = np.array(rows, dtype=float) + np.eye(m)
    vec = None
    if m > 150:
        try:
            from scipy.sparse import csr_matrix
            from scipy.sparse.linalg import eigs

            _, v = eigs(csr_matrix(a), k=1, which="LR", tol=1e-14, maxiter=5000)
            vec = np.abs(v[:, 0].real)
        except Exception:  # ARPACK non-convergence; fall back to dense
            vec = None
    if vec is None:
        w, v = np.linalg.eig(a)
        vec = np.abs(v[:, int(np.argmax(w.real))].real)
    if not np.all(np.isfinite(vec)) or vec.max() <= 0:
        vec = np.ones(m)
    floor = vec.max() * 1e-300
    return np.where(vec > floor, vec, floor)


def _cw_bounds(sparse_rows, x: list[int]) -> tuple[Fraction, Fraction, list[int]]:
    y = [sum(mult * x[j] for j, mult in row) for row in sparse_rows]
    lo_i = min(range(len(x)), key=lambda i: Fraction(y[i], x[i]))
    hi_i = max(range(len(x)), key=lambda i: Fraction(y[i], x[i]))
    return Fraction(y[lo_i], x[lo_i]), Fraction(y[hi_i], x[hi_i]), y


def _irreducible_enclosure(rows: Matrix, tol: Fraction, max_iter: int = 3000) -> SpectralEnclosure:
    m = len(rows)
    if m == 1:
        return SpectralEnclosure(Fraction(rows[0][0]), Fraction(rows[0][0]), 0, "exact-1x1")
    sums = {sum(r) for r in rows}
    if len(sums) == 1:
        v = Fraction(sums.pop())
        return SpectralEnclosure(v, v, 0, "exact-row-sums")
    colsums = {sum(c) for c in zip(*rows)}
    if len(colsums) == 1:
        v = Fraction(colsums.pop())
        return SpectralEnclosure(v, v, 0, "exact-column-sums")
    sparse = [[(j, x) for j, x in enumerate(r) if x] for r in rows]
    guess = _float_perron_vector(rows)
    fr = [Fraction(float(g)) for g in guess]
    denom = max(f.denominator for f in fr)
    x = [int(f * denom) for f in fr]
    lo, hi, y = _cw_bounds(sparse, x)
    it = 0
    while hi - lo > tol and it < max_iter:
        # x <- (A + I) x; A + I is primitive, so the ratios converge
        x = [yi + xi for yi, xi in zip(y, x)]
        top = max(x).bit_length()
        if top > 2048:
            shift = top - 1024
            x = [max(1, xi >> shift) for xi in x]
        lo2, hi2, y = _cw_bounds(sparse, x)
        lo, hi = max(lo, lo2), min(hi, hi2)
        it += 1
    if hi - lo <= tol:
        return SpectralEnclosure(lo, hi, it, "collatz-wielandt")
    if m <= EXACT_FALLBACK_MAX:
        a, b = isolate_largest_root(charpoly(rows), lo, hi, tol)
        return SpectralEnclosure(a, b, it, "sturm")
    return SpectralEnclosure(lo, hi, it, "collatz-wielandt-unconverged")


def block_enclosures(a, tol: Fraction = DEFAULT_TOL) -> list[tuple[list[int], SpectralEnclosure]]:
    a = as_matrix(a)
    out = []
    for comp in strongly_connected_components(a):
        sub = submatrix(a, comp)
        if len(comp) == 1 and sub[0][0] == 0:
            out.append((comp, SpectralEnclosure(Fraction(0), Fraction(0), 0, "trivial-block")))
        else:
            out.append((comp, _irreducible_enclosure(sub, Fraction(tol))))
    return out


def spectral_radius(a, tol: Fraction | float = DEFAULT_TOL) -> SpectralEnclosure:
    """Enclosure of the Perron root; the maximum over irreducible blocks."""
    a = as_matrix(a)
    if not a:
        return SpectralEnclosure(Fraction(0), Fraction(0), 0, "empty")
    tol = Fraction(tol)
    blocks = block_enclosures(a, tol)
    lo = max(e.lo for _, e in blocks)
    hi = max(e.hi for _, e in blocks)
    methods = sorted({e.method for _, e in blocks if e.hi >= lo})
    its = max(e.iterations for _, e in blocks)
    return SpectralEnclosure(lo, hi, its, "+".join(methods))


def perron_polynomial(a) -> tuple[list[int], Fraction, Fraction]:
    """Characteristic polynomial of the block attaining v(A), with bounds."""
    a = as_matrix(a)
    blocks = block_enclosures(a)
    comp, enc = max(blocks, key=lambda t: t[1].hi)
    return charpoly(submatrix(a, comp)), enc.lo, enc.hi


def compare_exact(a, b) -> int:
    """Sign of v(A) - v(B), decided exactly.

    v(A) is the largest real root of det(xI - A).  Both roots are isolated;
    if the isolating intervals meet, a common root of the two
    characteristic polynomials inside the intersection proves equality.
    """
    ea, eb = spectral_radius(a), spectral_radius(b)
    if ea.below(eb):
        return -1
    if eb.below(ea):
        return 1
    pa, pb = charpoly(a), charpoly(b)
    g = poly_gcd(pa, pb)
    gseq = sturm_sequence(squarefree(g)) if len(g) > 1 else None
    tol = max(ea.width, eb.width, Fraction(1, 10**12))
    while tol > Fraction(1, 10**300):
        ia = isolate_largest_root(pa, ea.lo, ea.hi, tol)
        ib = isolate_largest_root(pb, eb.lo, eb.hi, tol)
        if ia[0] == ia[1] and ib[0] == ib[1]:
            return (ia[0] > ib[0]) - (ia[0] < ib[0])
        if ia[1] < ib[0] or (ia[1] == ib[0] and ia[0] < ia[1]):
            return -1
        if ib[1] < ia[0] or (ib[1] == ia[0] and ib[0] < ib[1]):
            return 1
        if gseq is not None:
            left, right = max(ia[0], ib[0]), min(ia[1], ib[1])
            exact_pt = ia[0] if ia[0] == ia[1] else ib[0] if ib[0] == ib[1] else None
            if exact_pt is not None:
                if poly_eval(g, exact_pt) == 0:
                    return 0
            elif count_roots(gseq, left, right) >= 1:
                return 0
        tol /= 1000
    raise SpectraError("could not decide comparison")


@dataclass(frozen=True)
class StrictDecrease:
    original: Matrix
    entry: tuple[int, int]
    modified: Matrix
    v_original: SpectralEnclosure
    v_modified: SpectralEnclosure
    method: str

    @property
    def certified(self) -> bool:
        return self.v_modified.below(self.v_original)


def strict_decrease(a, entry: tuple[int, int], tol: Fraction = DEFAULT_TOL) -> StrictDecrease:
    """Decrement one positive entry of an irreducible matrix and certify v drops."""
    a = as_matrix(a)
    i, j = entry
    if not is_irreducible(a):
        raise SpectraError("matrix is not irreducible")
    if a[i][j] < 1:
        raise SpectraError(f"entry {entry} is zero")
    b = [row[:] for row in a]
    b[i][j] -= 1
    tol = Fraction(tol)
    method = "enclosure"
    while True:
        ea, eb = spectral_radius(a, tol), spectral_radius(b, tol)
        if ea.hi == 0:
            raise SpectraError("spectral radius is zero")
        if eb.below(ea):
            return StrictDecrease(a, (i, j), b, ea, eb, method)
        tol /= 10**4
        method = "enclosure-refined"
        if tol < Fraction(1, 10**60):
            break
    sign = compare_exact(b, a)
    if sign >= 0:
        raise SpectraError("strict decrease failed; this contradicts Perron-Frobenius")
    return StrictDecrease(a, (i, j), b, spectral_radius(a, tol), spectral_radius(b, tol), "exact")


def path_counts(a, start: int, length: int) -> list[int]:
    """Number of paths of each length 0..length leaving ``start``."""
    a = as_matrix(a)
    sparse = [[(j, x) for j, x in enumerate(r) if x] for r in a]
    vec = {start: 1}
    out = [1]
    for _ in range(length):
        nxt: dict[int, int] = {}
        for i, c in vec.items():
            for j, mult in sparse[i]:
                nxt[j] = nxt.get(j, 0) + c * mult
        vec = nxt
        out.append(sum(vec.values()))
    return out


def read_matrix(text: str) -> Matrix:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise SpectraError("empty matrix file")
    try:
        s = int(lines[0])
        rows = [[int(t) for t in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise SpectraError(f"bad matrix file: {exc}") from None
    if len(rows) != s or any(len(r) != s for r in rows):
        raise SpectraError(f"expected {s} rows of {s} integers")
    return as_matrix(rows)


def write_matrix(a) -> str:
    a = as_matrix(a)
    return "\n".join([str(len(a))] + [" ".join(map(str, r)) for r in a]) + "\n"


def decimal(x: Fraction, digits: int = 12) -> str:
    """Fixed-point rendering of a rational, truncated toward minus infinity."""
    x = Fraction(x)
    scaled = math.floor(x * 10**digits)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def ints(rows: Iterable[Iterable]) -> Matrix:
    return [[int(x) for x in r] for r in rows]
