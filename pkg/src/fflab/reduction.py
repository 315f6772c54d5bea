"""Lattice fibration, Hom-lattice systems and reduction-formula verification.

A split scenario carries two complementary pairs on V = V0 (+) V1 together
with lattice chains whose endpoints are stable under the respective
algebra actions.  The machinery realizes the Hom-space P = Hom(V1, V0) as
a flat coordinate space, builds the (conj-)linearity sublattices, the
block map Phi whose kernel encodes compatible connecting maps, and checks
the quasi-isogeny degree formulas and fiber counts against their closed
forms.  The top-level verifier compares full orbital integrals with the
Levi-factorized right-hand sides.
"""

import itertools
import random
from fractions import Fraction

from .errors import MissingInput, SingularMap, Unstable
from .etale import resultant
from .hecke import f_of_m, pi_twist
from .lattices import (canonicalize, from_generators, in_lattice, index,
                       lattice_leq, relative_position, stable_family,
                       standard_lattice, sublattices_of_index,
                       superlattices_of_index, triangular_inverse)
from .linalg import Matrix, kernel_basis, linear_solve, mat_det
from .orbital import OrbitalValue, orbital_alpha, orbital_beta
from .pairs import EmbeddingPair, direct_sum, invariant


# -- fibration of single lattices ------------------------------------------------


class Fibration:
    """Coordinate split V = V0 (+) V1 with V0 the first dim0 coordinates."""

    def __init__(self, field, dim0, dim1):
        self.field = field
        self.dim0 = dim0
        self.dim1 = dim1

    def fibrate(self, lat):
        """(X0, X1, s-representative) for a lattice X in V.

        X0 = X intersect V0 (as a lattice in F^dim0), X1 = projection to V1,
        and s is represented by the list of V0-parts of the canonical lifts
        of the X1 basis.
        """
        d0, d1 = self.dim0, self.dim1
        b = lat.basis
        x0_cols = [[b.rows[i][j] for i in range(d0)] for j in range(d0)]
        x0 = from_generators(self.field, x0_cols)
        x1_cols = [[b.rows[d0 + i][d0 + j] for i in range(d1)] for j in range(d1)]
        x1 = from_generators(self.field, x1_cols)
        lifts = [[b.rows[i][d0 + j] for i in range(d0)] for j in range(d1)]
        return x0, x1, lifts

    def rebuild(self, x0, x1_cols, lifts):
        """Lattice from X0-generators plus lifted graph vectors."""
        d0, d1 = self.dim0, self.dim1
        cols = []
        for j in range(x0.rank):
            cols.append(list(x0.basis.column(j)) + [self.field.zero] * d1)
        for lift, bot in zip(lifts, x1_cols):
            cols.append(list(lift) + list(bot))
        return from_generators(self.field, cols)

    def refibrate_roundtrip(self, lat):
        x0, x1, lifts = self.fibrate(lat)
        x1_cols = [x1.basis.column(j) for j in range(x1.rank)]
        return self.rebuild(x0, x1_cols, lifts)

    def fibrate_chain(self, chain):
        """Component chains of a lattice chain with the index decomposition."""
        comps0, comps1 = [], []
        for lat in chain.lattices:
            x0, x1, _ = self.fibrate(lat)
            comps0.append(x0)
            comps1.append(x1)
        ch0 = LatticeChain(comps0)
        ch1 = LatticeChain(comps1)
        if [a + b for a, b in zip(ch0.steps, ch1.steps)] != chain.steps:
            raise ValueError("component step indices do not sum to the total")
        return ch0, ch1

    def inclusion_compatible(self, x, y):
        """X <= Y iff componentwise inclusion plus the connecting square."""
        x0, x1, sx = self.fibrate(x)
        y0, y1, sy = self.fibrate(y)
        if not (lattice_leq(x0, y0) and lattice_leq(x1, y1)):
            return False
        # s_X = s_Y mod Y0 on X1: check each lifted X1 basis vector lands in Y
        for j in range(x.rank):
            if not in_lattice(y, x.basis.column(j)):
                return False
        return True


# -- scenarios ----------------------------------------------------------------------


class LatticeChain:
    """X_0 <= X_1 <= ... <= X_r with step indices."""

    def __init__(self, lattices, steps=None):
        self.lattices = list(lattices)
        self.steps = []
        for a, b in zip(self.lattices, self.lattices[1:]):
            if not lattice_leq(a, b):
                raise ValueError("chain inclusions fail")
            self.steps.append(index(b, a))
        if steps is not None and list(steps) != self.steps:
            raise ValueError("declared step indices do not match")

    @property
    def bottom(self):
        return self.lattices[0]

    @property
    def top(self):
        return self.lattices[-1]

    @property
    def r(self):
        return len(self.lattices) - 1

    def total(self):
        return sum(self.steps)


class SplitScenario:
    """Two complementary pairs with chains; endpoints stable appropriately."""

    def __init__(self, p0, p1, chain0, chain1):
        self.p0 = p0
        self.p1 = p1
        self.chain0 = chain0
        self.chain1 = chain1
        self.field = p0.field
        self.n0 = p0.n
        self.n1 = p1.n
        for pj, chain in ((p0, chain0), (p1, chain1)):
            fam_a = stable_family(pj.field, pj.A, pj.Ea, _order_span(pj.field, pj.A))
            fam_b = stable_family(pj.field, pj.B, pj.Eb, _order_span(pj.field, pj.B))
            if not fam_a.is_stable(chain.top):
                raise ValueError("chain top is not stable under the first action")
            if not fam_b.is_stable(chain.bottom):
                raise ValueError("chain bottom is not stable under the second action")

    @property
    def m0(self):
        return tuple(self.chain0.steps)

    @property
    def m1(self):
        return tuple(self.chain1.steps)


def _order_span(field, mat):
    size = mat.nrows
    ident = Matrix.identity(field, size)
    cols = [ident.column(j) for j in range(size)]
    cols += [mat.column(j) for j in range(size)]
    return from_generators(field, cols)


def random_chain(pair, m, seed, window=2):
    """A chain in the pair's lattice set with the given step indices.

    The bottom is stable under the second algebra action, the top under the
    first; intermediates are unconstrained superlattice steps.
    """
    rng = random.Random(seed)
    field = pair.field
    fam_a = stable_family(field, pair.A, pair.Ea, _order_span(field, pair.A))
    fam_b = stable_family(field, pair.B, pair.Eb, _order_span(field, pair.B))
    total = sum(m)
    tops = fam_a.ball(window)
    rng.shuffle(tops)
    for top in tops:
        bottoms = [lb for lb in fam_b.ball(window)
                   if index(top, lb) == total and lattice_leq(lb, top)]
        rng.shuffle(bottoms)
        for bottom in bottoms:
            chains = _all_chains(bottom, top, m)
            if chains:
                return LatticeChain(chains[rng.randrange(len(chains))])
    raise SingularMap("no chain with the requested indices in the window")


def _all_chains(bottom, top, m):
    if len(m) == 0:
        return [[bottom]] if bottom == top else []
    if len(m) == 1:
        return [[bottom, top]] if index(top, bottom) == m[0] else []
    out = []
    for nxt in superlattices_of_index(bottom, m[0]):
        if lattice_leq(nxt, top):
            for rest in _all_chains(nxt, top, m[1:]):
                out.append([bottom] + rest)
    return out


# -- Hom-space machinery ---------------------------------------------------------------


def _flatten(field, mat):
    """Row-major flattening of a dim0 x dim1 matrix into a vector."""
    return [mat.rows[i][j] for i in range(mat.nrows) for j in range(mat.ncols)]


def _post_op(field, B0, dim1):
    """Operator f -> B0 * f on flattened Hom(V1, V0)."""
    d0 = B0.nrows
    size = d0 * dim1
    rows = [[field.zero] * size for _ in range(size)]
    for a in range(d0):
        for b in range(dim1):
            for c in range(d0):
                rows[a * dim1 + b][c * dim1 + b] = B0.rows[a][c]
    return Matrix(field, rows)


def _pre_op(field, B1, dim0):
    """Operator f -> f * B1 on flattened Hom(V1, V0)."""
    d1 = B1.nrows
    size = dim0 * d1
    rows = [[field.zero] * size for _ in range(size)]
    for a in range(dim0):
        for b in range(d1):
            for c in range(d1):
                rows[a * d1 + b][a * d1 + c] = B1.rows[c][b]
    return Matrix(field, rows)


def hom_lattice(field, m_top, m_bot):
    """Hom_O(m_bot, m_top) as a lattice in the flattened Hom space.

    Maps f with f(m_bot) <= m_top; basis g_top E_ab g_bot^(-1).
    """
    g_top = m_top.basis
    g_bot_inv = triangular_inverse(m_bot.basis, m_bot.diag)
    d0, d1 = m_top.rank, m_bot.rank
    cols = []
    for a in range(d0):
        for b in range(d1):
            e = Matrix(field, [[field.one if (i, j) == (a, b) else field.zero
                                for j in range(d1)] for i in range(d0)])
            cols.append(_flatten(field, g_top * e * g_bot_inv))
    return from_generators(field, cols)


class SubspaceLattice:
    """A full lattice inside a coordinate subspace of the Hom space."""

    __slots__ = ("field", "W", "coords_lat")

    def __init__(self, field, W, coords_lat):
        self.field = field
        self.W = W                  # ambient x dim basis of the subspace
        self.coords_lat = coords_lat  # Lattice in subspace coordinates

    @property
    def rank(self):
        return self.coords_lat.rank

    def basis_cols(self):
        out = []
        for j in range(self.coords_lat.rank):
            out.append(self.W.apply(self.coords_lat.basis.column(j)))
        return out

    def coords(self, vec):
        y = linear_solve(self.W, vec, zeroish_ok=True)
        inv = triangular_inverse(self.coords_lat.basis, self.coords_lat.diag)
        return inv.apply(y)


def snf_full(mat):
    """U, D, V with mat = U diag(pi^D) V; U, V unimodular over O."""
    field = mat.ring
    n, m = mat.nrows, mat.ncols
    rows = [list(r) for r in mat.rows]
    Ur = [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    Vc = [[field.one if i == j else field.zero for j in range(m)] for i in range(m)]
    top = 0
    D = []
    while top < min(n, m):
        best = None
        for i in range(top, n):
            for j in range(top, m):
                x = rows[i][j]
                if x.coeffs and (best is None or x.val < rows[best[0]][best[1]].val):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        rows[top], rows[bi] = rows[bi], rows[top]
        Ur[top], Ur[bi] = Ur[bi], Ur[top]
        for r in rows:
            r[top], r[bj] = r[bj], r[top]
        for r in Vc:
            r[top], r[bj] = r[bj], r[top]
        piv = rows[top][top]
        D.append(piv.val)
        piv_inv = piv.inv()
        for i in range(top + 1, n):
            x = rows[i][top]
            if x.coeffs:
                f = x * piv_inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[top])]
                Ur[i] = [a - f * b for a, b in zip(Ur[i], Ur[top])]
        for j in range(top + 1, m):
            x = rows[top][j]
            if x.coeffs:
                f = x * piv_inv
                for i in range(top, n):
                    rows[i][j] = rows[i][j] - f * rows[i][top]
                for i in range(m):
                    Vc[i][j] = Vc[i][j] - f * Vc[i][top]
        top += 1
    from .linalg import mat_inverse
    U = mat_inverse(Matrix(field, Ur))
    # columns were transformed as mat * Vc; mat = U D Vc^{-1}
    V = mat_inverse(Matrix(field, Vc))
    return U, D, V


def lattice_in_subspace(field, lat, W):
    """The lattice {y : W y in lat} in subspace coordinates, as SubspaceLattice."""
    inv = triangular_inverse(lat.basis, lat.diag)
    M = inv * W
    U, D, V = snf_full(M)
    dim = W.ncols
    if len(D) != dim:
        raise SingularMap("subspace basis is not full rank against the lattice")
    from .linalg import mat_inverse
    Vinv = mat_inverse(V)
    cols = []
    for k in range(dim):
        col = [Vinv.rows[i][k].shift(-D[k]) for i in range(dim)]
        cols.append(col)
    coords_lat = from_generators(field, cols)
    return SubspaceLattice(field, W, coords_lat)


class HomSystem:
    """All Hom-lattices and projection operators of a split scenario."""

    def __init__(self, sc):
        self.sc = sc
        field = sc.field
        self.field = field
        p0, p1 = sc.p0, sc.p1
        self.d0, self.d1 = 2 * sc.n0, 2 * sc.n1
        self.dim = self.d0 * self.d1
        # generator actions on the two summands
        self.A0, self.A1 = p0.A, p1.A    # first algebra
        self.B0, self.B1 = p0.B, p1.B    # second algebra
        tr_a, tr_b = p0.Ea.tr, p0.Eb.tr
        ident0 = Matrix.identity(field, self.d0)
        self.q_minus = {
            1: _pre_op(field, self.A1, self.d0) - _post_op(field, self.A0, self.d1),
            2: _pre_op(field, self.B1, self.d0) - _post_op(field, self.B0, self.d1),
        }
        self.q_plus = {
            1: _pre_op(field, self.A1, self.d0)
               - _post_op(field, ident0.scale(tr_a) - self.A0, self.d1),
            2: _pre_op(field, self.B1, self.d0)
               - _post_op(field, ident0.scale(tr_b) - self.B0, self.d1),
        }
        # subspace bases: P_i^+ = ker q_i^-, P_i^- = ker q_i^+
        self.P_plus = {i: Matrix.from_columns(field, kernel_basis(self.q_minus[i],
                                                                  zeroish_ok=True))
                       for i in (1, 2)}
        self.P_minus = {i: Matrix.from_columns(field, kernel_basis(self.q_plus[i],
                                                                   zeroish_ok=True))
                        for i in (1, 2)}
        # endpoint lattices: index 1 = chain tops, 2 = chain bottoms
        self.M = {
            (1, 0): sc.chain0.top, (2, 0): sc.chain0.bottom,
            (1, 1): sc.chain1.top, (2, 1): sc.chain1.bottom,
        }
        self.Lambda = {
            i: hom_lattice(field, self.M[(i, 0)], self.M[(i, 1)]) for i in (1, 2)
        }
        self.Lambda_pm = {}
        for i in (1, 2):
            self.Lambda_pm[(i, "+")] = lattice_in_subspace(field, self.Lambda[i],
                                                           self.P_plus[i])
            self.Lambda_pm[(i, "-")] = lattice_in_subspace(field, self.Lambda[i],
                                                           self.P_minus[i])

    def q_image_equals_sublattice(self, i, sign):
        """Surjectivity of the projection onto the (conj-)linear sublattice."""
        op = self.q_minus[i] if sign == "-" else self.q_plus[i]
        target = self.Lambda_pm[(i, "-" if sign == "-" else "+")]
        cols = []
        lam = self.Lambda[i]
        for j in range(lam.rank):
            img = op.apply(lam.basis.column(j))
            cols.append(target.coords(img))
        img_lat = from_generators(self.field, cols)
        return img_lat.det_valuation == 0

    def deg_lambda2_to_lambda1(self):
        """Degree of the inclusion-induced quasi-isogeny Lambda_2 -> Lambda_1."""
        return index(self.Lambda[1], self.Lambda[2])

    def deg_q_pair(self, source_i):
        """deg((q_1^-, q_2^-) : Lambda_source -> Lambda_1^- x Lambda_2^-)."""
        lam = self.Lambda[source_i]
        t1 = self.Lambda_pm[(1, "-")]
        t2 = self.Lambda_pm[(2, "-")]
        cols = []
        for j in range(lam.rank):
            v = lam.basis.column(j)
            c1 = t1.coords(self.q_minus[1].apply(v))
            c2 = t2.coords(self.q_minus[2].apply(v))
            cols.append(list(c1) + list(c2))
        return _det_valuation_of_cols(self.field, cols)

    def deg_restricted(self, i_op, sign_op, source_key, target_key):
        """deg(q_{i_op}^{sign} restricted: Lambda_source^{s} -> Lambda_target^{t})."""
        op = self.q_minus[i_op] if sign_op == "-" else self.q_plus[i_op]
        src = self.Lambda_pm[source_key]
        tgt = self.Lambda_pm[target_key]
        cols = []
        for v in src.basis_cols():
            cols.append(tgt.coords(op.apply(v)))
        return _det_valuation_of_cols(self.field, cols)

    def deg_composite_lambda1_plus(self):
        """deg(q_1^+ q_2^- restricted to Lambda_1^+, an endomorphism)."""
        src = self.Lambda_pm[(1, "+")]
        cols = []
        for v in src.basis_cols():
            w = self.q_plus[1].apply(self.q_minus[2].apply(v))
            cols.append(src.coords(w))
        return _det_valuation_of_cols(self.field, cols)


def _det_valuation_of_cols(field, cols):
    mat = Matrix.from_columns(field, cols)
    d = mat_det(mat)
    if not d.coeffs:
        raise SingularMap("map is not a quasi-isogeny")
    return d.valuation()


def quasi_degree(field, source, target, map_matrix):
    """[target : map(source)]: valuation of det in the two lattice bases."""
    inv = triangular_inverse(target.basis, target.diag)
    m = inv * map_matrix * source.basis
    d = mat_det(m)
    if not d.coeffs:
        raise SingularMap("map is not bijective on the ambient spaces")
    return d.valuation()


# -- the block map Phi -------------------------------------------------------------


class PhiMap:
    """Block matrix whose kernel encodes compatible connecting-map tuples."""

    def __init__(self, sys):
        self.sys = sys
        sc = sys.sc
        field = sys.field
        r = sc.chain0.r
        if sc.chain1.r != r:
            raise ValueError("chains must have equal length")
        self.r = r
        dim = sys.dim
        # source lattices: Hom(X_i^1, X_i^0); targets: minus parts and C_i
        self.sources = []
        for i in range(r + 1):
            self.sources.append(hom_lattice(field, sc.chain0.lattices[i],
                                            sc.chain1.lattices[i]))
        self.c_lattices = []
        for i in range(1, r + 1):
            self.c_lattices.append(hom_lattice(field, sc.chain0.lattices[i],
                                               sc.chain1.lattices[i - 1]))
        self.t_minus_b = lattice_in_subspace(field, self.sources[0],
                                             sys.P_minus[2])
        self.t_minus_a = lattice_in_subspace(field, self.sources[r],
                                             sys.P_minus[1])

    def degree(self):
        """Quasi-isogeny degree of Phi between its source and target lattices."""
        cols = self._matrix_cols()
        return _det_valuation_of_cols(self.sys.field, cols)

    def _matrix_cols(self):
        sys = self.sys
        field = sys.field
        r = self.r
        dim = sys.dim
        half = dim // 2
        cols = []
        for i, src in enumerate(self.sources):
            for j in range(src.rank):
                v = src.basis.column(j)
                col = []
                # block row 0: q_2^- of gamma_0
                col += list(self.t_minus_b.coords(sys.q_minus[2].apply(v))) \
                    if i == 0 else [field.zero] * half
                # block rows 1..r: L_i gamma_i - R_i gamma_{i-1}
                for k in range(1, r + 1):
                    if i == k:
                        c_coords = _lattice_coords(field, self.c_lattices[k - 1], v)
                        col += list(c_coords)
                    elif i == k - 1:
                        c_coords = _lattice_coords(field, self.c_lattices[k - 1], v)
                        col += [-x for x in c_coords]
                    else:
                        col += [field.zero] * dim
                # last block row: q_1^- of gamma_r
                col += list(self.t_minus_a.coords(sys.q_minus[1].apply(v))) \
                    if i == r else [field.zero] * half
                cols.append(col)
        return cols

    def elementary_divisors(self):
        from .lattices import smith_exponents
        cols = self._matrix_cols()
        return smith_exponents(Matrix.from_columns(self.sys.field, cols))

    def deg_l_maps(self):
        """Sum of the degrees of the restriction maps L_i."""
        total = 0
        for i in range(1, self.r + 1):
            total += index(self.c_lattices[i - 1], self.sources[i])
        return total


def _lattice_coords(field, lat, vec):
    inv = triangular_inverse(lat.basis, lat.diag)
    return inv.apply(vec)


def fiber_count_exponent(phi, truncation=None):
    """log_q of the number of solutions of the connecting-map system.

    Counts kernel vectors of the Phi matrix modulo pi^M via its elementary
    divisors, raising the truncation until the count stabilizes.
    """
    divisors = phi.elementary_divisors()
    if truncation is None:
        truncation = max(divisors) + 2 if divisors else 2
    count_prev = sum(min(d, truncation) for d in divisors)
    count_next = sum(min(d, truncation + 2) for d in divisors)
    if count_prev != count_next:
        raise Unstable("fiber count did not stabilize; raise the truncation")
    return count_prev


# -- closed formulas -----------------------------------------------------------------


def reduction_constants(pair_a_alg, pair_b_alg, delta0, delta1, n0, n1):
    """Exponent of q in |Disc_a Disc_b|^(-n0 n1 / 2) |Res(d0, d1)|^(-1).

    Returned as a Fraction; the resultant is taken in the shared target
    algebra and |x| = |Nm x|^(1/2).
    """
    res = resultant(delta0, delta1)
    if not res.is_invertible():
        raise SingularMap("component invariants share a root")
    v_res = res.norm().valuation()
    v_disc = pair_a_alg.disc_valuation + pair_b_alg.disc_valuation
    return Fraction(n0 * n1 * v_disc, 2) + Fraction(v_res, 2)


def closed_phi_exponent(sc, inv0, inv1):
    """Exponent of q in the degree formula for Phi."""
    const = reduction_constants(sc.p0.Ea, sc.p0.Eb, inv0.delta, inv1.delta,
                                sc.n0, sc.n1)
    return const + sc.n1 * sum(sc.m0) + sc.n0 * sum(sc.m1)


def closed_pair_exponent(sc, inv0, inv1):
    """Exponent for deg((q_1^-, q_2^-): Lambda_2 -> Lambda_1^- x Lambda_2^-)."""
    const = reduction_constants(sc.p0.Ea, sc.p0.Eb, inv0.delta, inv1.delta,
                                sc.n0, sc.n1)
    return const + sc.n1 * sum(sc.m0) - sc.n0 * sum(sc.m1)


def closed_composite_exponent(sc, inv0, inv1):
    """Exponent for deg(q_1^+ q_2^- on Lambda_1^+)."""
    return 2 * reduction_constants(sc.p0.Ea, sc.p0.Eb, inv0.delta, inv1.delta,
                                   sc.n0, sc.n1)


def inclusion_degree(sc):
    """2 n1 |m0| - 2 n0 |m1|."""
    return 2 * sc.n1 * sum(sc.m0) - 2 * sc.n0 * sum(sc.m1)


# -- theorem-level verification --------------------------------------------------------


def _q_power_fraction(q, exponent):
    e = Fraction(exponent)
    if e.denominator != 1:
        raise SingularMap("constant is not an integral power of q")
    return Fraction(q) ** e.numerator


def verify_reduction(p0, p1, m, alpha_side=False, slack=1, seed=0):
    """Both sides of the Levi reduction identity for f(m).

    With alpha_side, the matched pairs on (split, E3) are compared as
    Laurent polynomials in Q; otherwise the plain rational integrals are
    compared.  Returns a report dict with exact equality.
    """
    field = p0.field
    q = field.q
    inv0 = invariant(p0)
    inv1 = invariant(p1)
    n0, n1 = p0.n, p1.n
    const_exp = reduction_constants(p0.Ea, p0.Eb, inv0.delta, inv1.delta, n0, n1)
    const = _q_power_fraction(q, const_exp)
    full = direct_sum(p0, p1)
    f_full = f_of_m(2 * (n0 + n1), m, field)
    if alpha_side:
        lhs, w_lhs = orbital_alpha(full, f_full, slack=slack, seed=seed)
        rhs = OrbitalValue()
    else:
        lhs, w_lhs = orbital_beta(full, f_full, slack=slack, seed=seed)
        rhs = Fraction(0)
    windows = [w_lhs]
    for m0 in itertools.product(*[range(mi + 1) for mi in m]):
        m1 = tuple(mi - x for mi, x in zip(m, m0))
        f0 = f_of_m(2 * n0, m0, field)
        f1 = f_of_m(2 * n1, m1, field)
        weight = Fraction(q) ** (n1 * sum(m0) + n0 * sum(m1))
        if alpha_side:
            o0, w0 = orbital_alpha(p0, f0, slack=slack, seed=seed)
            o1, w1 = orbital_alpha(p1, f1, slack=slack, seed=seed)
            rhs = rhs + (o0 * o1) * (weight * const)
        else:
            o0, w0 = orbital_beta(p0, f0, slack=slack, seed=seed)
            o1, w1 = orbital_beta(p1, f1, slack=slack, seed=seed)
            rhs = rhs + const * weight * o0 * o1
        windows += [w0, w1]
    equal = lhs == rhs
    return {
        "m": list(m),
        "alpha_side": alpha_side,
        "constant_exponent": str(const_exp),
        "lhs": lhs.to_json() if alpha_side else str(lhs),
        "rhs": rhs.to_json() if alpha_side else str(rhs),
        "equal": equal,
        "windows": windows,
    }


def evaluate_int_reduction_rhs(int0_values, p1, m, disc_exponent_alg_pair,
                               delta0, n0, slack=1):
    """RHS of the intersection-number reduction, with the connected-side
    numbers supplied externally.

    int0_values maps tuples m0 to rationals; p1 is the etale-side pair whose
    plain orbital integrals are computed here.  delta0 is the connected
    invariant (over the shared target algebra) entering the resultant; for
    n0 = 0 pass a degree-zero polynomial and the constant collapses to one.
    """
    field = p1.field
    q = field.q
    inv1 = invariant(p1)
    n1 = p1.n
    if n0 == 0:
        const = Fraction(1)
    else:
        alg_a, alg_b = disc_exponent_alg_pair
        const_exp = reduction_constants(alg_a, alg_b, delta0, inv1.delta, n0, n1)
        const = _q_power_fraction(q, const_exp)
    total = Fraction(0)
    for m0 in itertools.product(*[range(mi + 1) for mi in m]):
        m1 = tuple(mi - x for mi, x in zip(m, m0))
        if n0 == 0 and any(m0):
            continue
        if tuple(m0) not in int0_values:
            raise MissingInput(f"missing connected-side value for {m0}")
        o1, _ = orbital_beta(p1, f_of_m(2 * n1, m1, field), slack=slack)
        total += const * Fraction(q) ** (n1 * sum(m0) + n0 * sum(m1)) \
            * Fraction(int0_values[tuple(m0)]) * o1
    return total
