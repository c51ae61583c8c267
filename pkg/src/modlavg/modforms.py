"""Exact q-expansion models of the cusp spaces at prime level.

Spaces are built from Eisenstein series, the weight-2 level series
E2(z) - N E2(Nz), and (at level 11) the weight-2 eta-product cusp form.
Everything is exact integer/rational arithmetic on truncated q-series, so
Hecke traces computed here are an independent oracle for the trace formula,
and the eigenform q-expansions extracted here are the source of the shipped
coefficient data files.

Only prime level and even weight 4 <= k < 12 are supported (such spaces are
entirely new).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import dim_cusp_forms, Eigenform
from .errors import InvariantViolation

__all__ = ["CuspSpace", "newforms_qexp"]


# ---------------------------------------------------------------------------
# exact truncated power series (lists of ints / Fractions, index = q-power)
# ---------------------------------------------------------------------------

def mul_series(a, b, L):
    out = [0] * L
    for i, ai in enumerate(a):
        if ai == 0 or i >= L:
            continue
        top = min(L - i, len(b))
        for j in range(top):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def sigma_list(r, L):
    out = [0] * L
    for d in range(1, L):
        dr = d ** r
        for n in range(d, L, d):
            out[n] += dr
    return out


def eisenstein(w, L):
    if w == 4:
        c, r = 240, 3
    elif w == 6:
        c, r = -504, 5
    else:
        raise ValueError("only weights 4 and 6")
    s = sigma_list(r, L)
    return [1] + [c * s[n] for n in range(1, L)]


def scale_level(series, N, L):
    out = [0] * L
    for n, an in enumerate(series):
        if n * N < L:
            out[n * N] = an
    return out


def e2_prime(N, L):
    """E2(z) - N E2(Nz), a holomorphic weight-2 form of level N."""
    s1 = sigma_list(1, L)
    out = [1 - N] + [0] * (L - 1)
    for n in range(1, L):
        v = -24 * s1[n]
        if n % N == 0:
            v += 24 * N * s1[n // N]
        out[n] = v
    return out


def euler_product(L):
    """Coefficients of prod (1 - q^n) by the pentagonal number theorem."""
    out = [0] * L
    k = 0
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 >= L and k > 0:
            break
        sign = -1 if k % 2 else 1
        if g1 < L:
            out[g1] += sign
        if k > 0:
            g2 = k * (3 * k + 1) // 2
            if g2 < L:
                out[g2] += sign
        k += 1
    return out


def eta_product_11(L):
    """q prod (1-q^n)^2 (1-q^(11n))^2, the weight-2 newform at level 11."""
    p = euler_product(L)
    p2 = mul_series(p, p, L)
    p11 = scale_level(p, 11, L)
    p11_2 = mul_series(p11, p11, L)
    base = mul_series(p2, p11_2, L - 1)
    return [0] + base[: L - 1]


# ---------------------------------------------------------------------------
# number field helper for irrational eigenvalue pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Quad:
    """u + v sqrt(disc) with rational u, v."""

    u: Fraction
    v: Fraction
    disc: int

    def __add__(self, o):
        return Quad(self.u + o.u, self.v + o.v, self.disc)

    def __sub__(self, o):
        return Quad(self.u - o.u, self.v - o.v, self.disc)

    def __mul__(self, o):
        if isinstance(o, Quad):
            return Quad(self.u * o.u + self.disc * self.v * o.v,
                        self.u * o.v + self.v * o.u, self.disc)
        return Quad(self.u * o, self.v * o, self.disc)

    def inverse(self):
        nrm = self.u * self.u - self.disc * self.v * self.v
        return Quad(self.u / nrm, -self.v / nrm, self.disc)

    def to_float(self):
        return float(self.u) + float(self.v) * math.sqrt(self.disc)


# ---------------------------------------------------------------------------
# the cusp space
# ---------------------------------------------------------------------------

class CuspSpace:
    """Weight-k cusp forms of prime level N as exact q-expansions."""

    def __init__(self, N: int, k: int, length: int = 400):
        if k % 2 or not 4 <= k < 12:
            raise ValueError("supported weights are even, 4 <= k < 12")
        self.N, self.k, self.L = N, k, length
        self.dim = dim_cusp_forms(N, k)
        # generators: (series, weight, constant term of the Fricke image)
        gens = {
            "E4": (eisenstein(4, length), 4, Fraction(N ** 2)),
            "E4N": (scale_level(eisenstein(4, length), N, length), 4,
                    Fraction(1, N ** 2)),
            "E6": (eisenstein(6, length), 6, Fraction(N ** 3)),
            "E6N": (scale_level(eisenstein(6, length), N, length), 6,
                    Fraction(1, N ** 3)),
            "G2": (e2_prime(N, length), 2, Fraction(N - 1)),
        }
        if N == 11:
            gens["F2"] = (eta_product_11(length), 2, Fraction(0))
        candidates = self._monomials(gens, k)
        self._build_space(candidates)

    def _monomials(self, gens, k):
        names = sorted(gens)
        out = []

        def rec(idx, weight, series, wconst, used):
            if weight == k:
                out.append((series, wconst))
                return
            if idx == len(names) or weight > k:
                return
            name = names[idx]
            g_series, g_w, g_wc = gens[name]
            rec(idx + 1, weight, series, wconst, used)
            s, wc, w = series, wconst, weight
            while w + g_w <= k:
                s = mul_series(s, g_series, self.L)
                wc = wc * g_wc
                w += g_w
                rec(idx + 1, w, s, wc, used + [name])

        one = [1] + [0] * (self.L - 1)
        rec(0, 0, one, Fraction(1), [])
        return out

    def _build_space(self, candidates):
        dim_m = self.dim + 2
        sturm = self.k * (self.N + 1) // 12 + 3
        ncols = min(sturm + dim_m + 4, self.L)

        # select an independent spanning subset of the modular space
        rows, picked = [], []
        for series, wconst in candidates:
            trial = rows + [[Fraction(c) for c in series[:ncols]]]
            if _rank(trial) > len(rows):
                rows = trial
                picked.append((series, wconst))
            if len(picked) == dim_m:
                break
        if len(picked) != dim_m:
            raise InvariantViolation(
                f"generators span only {len(picked)} of {dim_m} dimensions "
                f"at (N, k) = ({self.N}, {self.k})"
            )

        # cusp subspace: kill the constant term at both cusps
        sys_rows = [
            [Fraction(series[0]) for series, _ in picked],
            [wconst for _, wconst in picked],
        ]
        kernel = _nullspace(sys_rows)
        if len(kernel) != self.dim:
            raise InvariantViolation(
                f"cusp cut gave dimension {len(kernel)}, expected {self.dim}"
            )
        basis = []
        for combo in kernel:
            vec = [Fraction(0)] * self.L
            for coef, (series, _) in zip(combo, picked):
                if coef:
                    for n, an in enumerate(series):
                        vec[n] += coef * an
            basis.append(vec)
        # echelonize against leading q-powers for coordinate solves
        self.basis = _echelon_series(basis)
        self.pivots = [_first_nonzero(v) for v in self.basis]
        for v in self.basis:
            assert v[0] == 0

    # -- linear algebra over the q-expansion model --------------------------

    def coordinates(self, series):
        """Coordinates of a cusp q-series in the echelon basis."""
        work = list(series)
        coords = []
        for vec, piv in zip(self.basis, self.pivots):
            c = Fraction(work[piv]) / vec[piv]
            coords.append(c)
            if c:
                for n in range(min(len(work), self.L)):
                    work[n] -= c * vec[n]
        return coords, work

    def hecke_image(self, series, m, out_len):
        """T_m on a level-N weight-k q-series (gcd(m, N) = 1), or U_N."""
        k, N = self.k, self.N
        out = [Fraction(0)] * out_len
        for n in range(1, out_len):
            total = Fraction(0)
            for d in _divs(math.gcd(m, n)):
                if N % d == 0 and d > 1:
                    continue
                idx = m * n // (d * d)
                if idx < len(series):
                    total += d ** (k - 1) * Fraction(series[idx])
            out[n] = total
        return out

    def hecke_matrix(self, m):
        rows_needed = max(self.pivots) + 1
        if m * rows_needed > self.L:
            raise ValueError(f"series too short for T_{m}")
        cols = []
        for vec in self.basis:
            img = self.hecke_image(vec, m, rows_needed + 1)
            coords, rem = self.coordinates(img + [Fraction(0)] * 0)
            if any(rem[: rows_needed]):
                raise InvariantViolation(f"T_{m} image left the cusp space")
            cols.append(coords)
        # cols[j] = coordinates of T_m(basis_j)
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def trace_hecke(self, m):
        mat = self.hecke_matrix(m)
        tr = sum(mat[i][i] for i in range(self.dim))
        if tr.denominator != 1:
            raise InvariantViolation(f"non-integral Hecke trace {tr}")
        return int(tr)


def _divs(n):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d * d != n:
                out.append(n // d)
        d += 1
    return sorted(out)


def _first_nonzero(vec):
    for i, x in enumerate(vec):
        if x:
            return i
    raise InvariantViolation("zero vector in cusp basis")


def _rank(rows):
    mat = [row[:] for row in rows]
    rank, ncols = 0, len(mat[0]) if mat else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = Fraction(1) / mat[rank][col]
        mat[rank] = [x * inv for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                f = mat[r][col]
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


def _nullspace(rows):
    """Kernel basis of a small rational system (rows are functionals)."""
    ncols = len(rows[0])
    mat = [row[:] for row in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = Fraction(1) / mat[rank][col]
        mat[rank] = [x * inv for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                f = mat[r][col]
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -mat[r][fc]
        out.append(vec)
    return out


def _echelon_series(basis):
    """Reduce cusp-series vectors so leading q-powers are distinct."""
    work = [v[:] for v in basis]
    done = []
    while work:
        work.sort(key=_first_nonzero)
        head = work.pop(0)
        piv = _first_nonzero(head)
        lead = head[piv]
        head = [x / lead for x in head]
        for w in work:
            if w[piv]:
                f = w[piv]
                for n in range(len(w)):
                    w[n] -= f * head[n]
        done.append(head)
    return done


# ---------------------------------------------------------------------------
# eigenform extraction
# ---------------------------------------------------------------------------

def newforms_qexp(N: int, k: int, n_max: int = 100) -> list:
    """Eigenforms of the (entirely new) cusp space, as Eigenform records.

    Coefficients come out exact for rational forms and as floats through
    exact quadratic-field arithmetic otherwise.  The Atkin-Lehner sign is
    read off the level coefficient: c_N = -w N^(k/2-1).
    """
    space = CuspSpace(N, k, length=max(n_max + 1, 4 * (N + 1), 60))
    dim = space.dim
    if dim == 0:
        return []
    if dim == 1:
        vec = space.basis[0]
        lead = vec[1]
        coeffs = [vec[n] / lead for n in range(1, n_max + 1)]
        return [_finalize(N, k, "a", coeffs)]
    if dim == 2:
        tmat = space.hecke_matrix(2)
        tr = tmat[0][0] + tmat[1][1]
        det = tmat[0][0] * tmat[1][1] - tmat[0][1] * tmat[1][0]
        disc = tr * tr - 4 * det
        b0, b1 = space.basis
        if _is_rational_square(disc):
            root = _fraction_sqrt(disc)
            out = []
            for tag, lam in (("a", (tr + root) / 2), ("b", (tr - root) / 2)):
                combo = _eigvec_combo(tmat, lam, b0, b1, n_max)
                out.append(_finalize(N, k, tag, combo))
            return out
        # conjugate pair in Q(sqrt(disc_int))
        disc_int, scale = _normalize_disc(disc)
        out = []
        for tag, sgn in (("a", 1), ("b", -1)):
            lam = Quad(tr / 2, sgn * scale / 2, disc_int)
            combo = _eigvec_combo_quad(tmat, lam, b0, b1, n_max)
            out.append(_finalize(N, k, tag, combo))
        return out
    raise NotImplementedError("newform extraction implemented for dim <= 2")


def _eigvec_combo(tmat, lam, b0, b1, n_max):
    a, b = tmat[0][0], tmat[0][1]
    if b == 0:
        raise InvariantViolation("degenerate Hecke matrix")
    x = (lam - a) / b
    series = [b0[n] + x * b1[n] for n in range(n_max + 1)]
    lead = series[1]
    return [series[n] / lead for n in range(1, n_max + 1)]


def _eigvec_combo_quad(tmat, lam, b0, b1, n_max):
    disc = lam.disc
    a = Quad(tmat[0][0], Fraction(0), disc)
    b = Quad(tmat[0][1], Fraction(0), disc)
    x = (lam - a) * b.inverse()
    series = [Quad(Fraction(b0[n]), Fraction(0), disc) + x * b1[n]
              for n in range(n_max + 1)]
    lead_inv = series[1].inverse()
    return [(series[n] * lead_inv) for n in range(1, n_max + 1)]


def _is_rational_square(x: Fraction) -> bool:
    if x < 0:
        return False
    return (math.isqrt(x.numerator) ** 2 == x.numerator
            and math.isqrt(x.denominator) ** 2 == x.denominator)


def _fraction_sqrt(x: Fraction) -> Fraction:
    return Fraction(math.isqrt(x.numerator), math.isqrt(x.denominator))


def _normalize_disc(disc: Fraction):
    """Write sqrt(disc) = scale * sqrt(d) with d a squarefree-ish integer."""
    num, den = disc.numerator, disc.denominator
    d = num * den  # sqrt(num/den) = sqrt(num*den)/den
    scale = Fraction(1, den)
    f = 2
    while f * f <= d:
        while d % (f * f) == 0:
            d //= f * f
            scale *= f
        f += 1
    return d, scale


def _finalize(N, k, tag, coeffs):
    out = []
    for c in coeffs:
        if isinstance(c, Quad):
            if c.v == 0 and c.u.denominator == 1:
                out.append(int(c.u))
            else:
                out.append(c.to_float())
        elif isinstance(c, Fraction):
            if c.denominator != 1:
                raise InvariantViolation(
                    f"non-integral rational coefficient {c} at level {N}"
                )
            out.append(int(c))
        else:
            out.append(int(c))
    # Atkin-Lehner sign from the level coefficient
    w = None
    if N <= len(out):
        cN = out[N - 1]
        target = N ** (k // 2 - 1)
        if isinstance(cN, int) and abs(cN) == target:
            w = -1 if cN > 0 else +1
    form = Eigenform(level=N, weight=k, label=f"{N}.{k}.{tag}",
                     coeffs=out, atkin_lehner=w)
    return form
