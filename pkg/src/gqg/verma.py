"""Verma modules, Shapovalov matrices, radicals and singular vectors.

A vector of M(Lambda) is stored by its coordinates in the registered
F-word basis: v = sum_w c_w F_w v_Lambda.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from . import lattice as lat
from .algebra import U0Elem, UAlgebra, UElement, VerificationFailed, get_algebra, lusztig_map, root_vectors, word_degree
from .groupoid import RootSystemData, enumerate_roots, root_multisets
from .lattice import Bicharacter, CharacterU0, rho_hat
from .linalg import det, nullspace, rank
from .scalars import kappa


class HypothesisViolated(ValueError):
    pass


@dataclass
class VermaVector:
    alg: UAlgebra
    lam: CharacterU0
    terms: dict = dc_field(default_factory=dict)  # F-basis word -> Scalar

    @classmethod
    def highest(cls, alg, lam) -> VermaVector:
        return cls(alg, lam, {(): alg.field.one})

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.terms.values())

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return VermaVector(self.alg, self.lam, {w: c for w, c in out.items() if not c.is_zero()})

    def scale(self, c):
        return VermaVector(self.alg, self.lam, {w: v * c for w, v in self.terms.items() if not (v * c).is_zero()})

    def degrees(self) -> set:
        return {word_degree(w, self.alg.n) for w, c in self.terms.items() if not c.is_zero()}

    def coords(self, beta) -> list:
        """Coordinates in the F-basis of degree beta (M(Lambda)_{-beta})."""
        entry = self.alg.basis(beta)
        z = self.alg.field.zero
        return [self.terms.get(w, z) for w in entry.fwords]

    def to_json(self) -> list:
        return [[[i + 1 for i in w], str(c)] for w, c in sorted(self.terms.items()) if not c.is_zero()]


def act(alg: UAlgebra, u: UElement, v: VermaVector) -> VermaVector:
    """u . v in M(Lambda)."""
    if u.alg is not alg or v.alg is not alg:
        raise TypeError("element and vector live over different algebras")
    chi, n, lam = alg.chi, alg.n, v.lam
    acc: dict = {}
    for (f1, l1, m1, e1), c1 in u.terms.items():
        for w, cw in v.terms.items():
            for (fp, lp, mp, ep), c in alg.ef_order(e1, w).items():
                if ep:
                    continue  # E kills v_Lambda
                dfp = word_degree(fp, n)
                val = c1 * cw * c * lam(lp, mp) * lam(l1, m1) * chi(l1, lat.neg(dfp)) * chi(dfp, m1)
                if val.is_zero():
                    continue
                for fb, cf in alg.reduce_f(f1 + fp).items():
                    acc[fb] = acc[fb] + val * cf if fb in acc else val * cf
    return VermaVector(alg, lam, {w: c for w, c in acc.items() if not c.is_zero()})


@dataclass
class ShapovalovMatrix:
    degree: tuple
    ewords: list
    fwords: list
    entries: list  # rows x (E basis) by cols y (F basis), U0Elem

    @property
    def size(self) -> int:
        return len(self.entries)

    def evaluate(self, lam: CharacterU0) -> list:
        return [[e.evaluate(lam) for e in row] for row in self.entries]

    def to_json(self) -> dict:
        return {"degree": list(self.degree), "rows": [[i + 1 for i in w] for w in self.ewords],
                "cols": [[i + 1 for i in w] for w in self.fwords],
                "entries": [[e.to_json() for e in row] for row in self.entries]}


def sh_word(alg: UAlgebra, eword, fword) -> U0Elem:
    """Sh(E_eword F_fword)."""
    terms = {}
    for (f, l, m, e), c in alg.ef_order(tuple(eword), tuple(fword)).items():
        if not f and not e:
            terms[(l, m)] = terms[(l, m)] + c if (l, m) in terms else c
    return U0Elem(alg.field, alg.n, terms)


_SHAP: dict = {}


def shapovalov_matrix(chi: Bicharacter, beta) -> ShapovalovMatrix:
    key = (chi, tuple(beta))
    hit = _SHAP.get(key)
    if hit is not None and hit.ewords == get_algebra(chi).basis(key[1]).ewords:
        return hit
    alg = get_algebra(chi)
    entry = alg.basis(tuple(beta))
    rows = [[sh_word(alg, e, f) for f in entry.fwords] for e in entry.ewords]
    out = ShapovalovMatrix(tuple(beta), entry.ewords, entry.fwords, rows)
    _SHAP[key] = out
    return out


def u0_det(m: list, field, n: int) -> U0Elem:
    """Determinant over the commutative ring U^0 by memoized Laplace expansion."""
    size = len(m)
    if size == 0:
        return U0Elem.one(field, n)
    memo: dict = {}

    # the sign follows the position of c among the unused columns
    def rec(r, cols):
        if r == size:
            return U0Elem.one(field, n)
        hit = memo.get(cols)
        if hit is not None:
            return hit
        out = U0Elem(field, n)
        pos = 0
        for c in range(size):
            if cols >> c & 1:
                continue
            if not m[r][c].is_zero():
                term = m[r][c] * rec(r + 1, cols | (1 << c))
                out = out + term if pos % 2 == 0 else out - term
            pos += 1
        memo[cols] = out
        return out

    return rec(0, 0)


def shapovalov_factor(chi: Bicharacter, alpha, t: int) -> U0Elem:
    """-rho(alpha) q_alpha^-t K_alpha + L_alpha."""
    f = chi.field
    n = chi.n
    z = lat.zero(n)
    c = -rho_hat(chi, alpha) * chi.qq(alpha) ** (-t)
    return U0Elem(f, n, {(tuple(alpha), z): c, (z, tuple(alpha)): f.one})


def shapovalov_product(chi: Bicharacter, rsd: RootSystemData, beta) -> tuple:
    """(z, product of factors, {(alpha, t): r(alpha, t)}) for the determinant formula."""
    alg = get_algebra(chi)
    entry = alg.basis(tuple(beta))
    z = det(entry.gram, chi.field) if entry.gram else chi.field.one
    prod = U0Elem.one(chi.field, chi.n)
    mult = {}
    for a in rsd.positive_roots:
        t = 1
        while True:
            r = len(root_multisets(rsd, chi, beta, a, t))
            if r == 0:
                break
            mult[(a, t)] = r
            prod = prod * shapovalov_factor(chi, a, t) ** r
            t += 1
    return z, prod, mult


def shapovalov_det_verify(chi: Bicharacter, beta, rsd: RootSystemData | None = None) -> dict:
    rsd = rsd or enumerate_roots(chi)
    for a in rsd.positive_roots:
        if chi.qq(a).is_one():
            raise HypothesisViolated(f"q_alpha = 1 for root {a}")
    sm = shapovalov_matrix(chi, beta)
    lhs = u0_det(sm.entries, chi.field, chi.n)
    z, prod, mult = shapovalov_product(chi, rsd, beta)
    rhs = prod * z
    report = {
        "degree": list(beta),
        "size": sm.size,
        "det": lhs.to_json(),
        "z": str(z),
        "factors": [{"root": list(a), "t": t, "r": r} for (a, t), r in sorted(mult.items())],
        "product": rhs.to_json(),
        "identity": "det Sh-matrix = z * prod (-rho(a) q_a^-t K_a + L_a)^r(a,t)",
    }
    if lhs != rhs:
        raise VerificationFailed(f"Shapovalov determinant mismatch at {beta}: {lhs} != {rhs}")
    report["holds"] = True
    return report


def verma_radical(chi: Bicharacter, lam: CharacterU0, beta) -> list:
    """Basis of N(Lambda)_{-beta}."""
    alg = get_algebra(chi)
    sm = shapovalov_matrix(chi, beta)
    mat = sm.evaluate(lam)
    out = []
    for vec in nullspace(mat, chi.field, len(sm.fwords)):
        out.append(VermaVector(alg, lam, {w: c for w, c in zip(sm.fwords, vec) if not c.is_zero()}))
    return out


def irreducible_dim(chi: Bicharacter, lam: CharacterU0, beta) -> int:
    """dim L(Lambda)_{-beta} = rank Lambda(S_beta)."""
    mat = shapovalov_matrix(chi, beta).evaluate(lam)
    return rank(mat, chi.field) if mat else 0


def hyperplane_value(chi: Bicharacter, lam: CharacterU0, beta, t: int):
    """Lambda(rho(beta) K_beta - q_beta^t L_beta)."""
    return rho_hat(chi, beta) * lam(beta, lat.zero(chi.n)) - chi.qq(beta) ** t * lam(lat.zero(chi.n), beta)


def _require_assst(chi, rsd):
    for a in rsd.positive_roots:
        qa = chi.qq(a)
        if qa.is_one() or kappa(qa) < 2:
            raise HypothesisViolated(f"root {a}: need q_a != 1 and kappa(q_a) >= 2")


def singular_vector(chi: Bicharacter, rsd: RootSystemData, m: int, t: int, lam: CharacterU0) -> VermaVector:
    """The vector v' for the m-th root (1-based) and 1 <= t <= kappa - 1."""
    _require_assst(chi, rsd)
    theta = rsd.theta
    if not 1 <= m <= theta:
        raise ValueError(f"m must lie in 1..{theta}")
    roots = rsd.positive_roots
    kap = [kappa(chi.qq(b)) for b in roots]
    if not 1 <= t <= kap[m - 1] - 1:
        raise ValueError(f"t must lie in 1..{kap[m - 1] - 1}")
    if not hyperplane_value(chi, lam, roots[m - 1], t).is_zero():
        raise HypothesisViolated("Lambda is not on the hyperplane of the m-th root")
    for mp in range(1, m):
        for tp in range(1, kap[mp - 1]):
            if hyperplane_value(chi, lam, roots[mp - 1], tp).is_zero():
                raise HypothesisViolated(f"Lambda also lies on the hyperplane of root {mp}, t = {tp}")
    alg = get_algebra(chi)
    es, fs = root_vectors(chi, rsd)
    v = VermaVector.highest(alg, lam)
    for x in range(m - 1):
        for _ in range(kap[x] - 1):
            v = act(alg, fs[x], v)
    for _ in range(t):
        v = act(alg, fs[m - 1], v)
    for x in range(m - 2, -1, -1):
        for _ in range(kap[x] - 1):
            v = act(alg, es[x], v)
    if v.is_zero():
        raise AssertionError("singular vector vanished")
    for j in range(chi.n):
        if not act(alg, alg.E(j), v).is_zero():
            raise AssertionError(f"E_{j + 1} does not kill the singular vector")
    return v


def reflected_character(chi: Bicharacter, i: int, lam: CharacterU0) -> CharacterU0:
    """Lambda^<i> as a character of U^0 of the reflected object, in its own coordinates."""
    T = lusztig_map(chi, i)
    ai = lat.unit(chi.n, i)
    e = kappa(chi.qq(ai)) - 1
    z = lat.zero(chi.n)
    kv, lv = [], []
    for col in T.basis_map:
        kv.append(lam(col, z) / chi(col, ai) ** e)
        lv.append(lam(z, col) * chi(ai, col) ** e)
    return CharacterU0(tuple(kv), tuple(lv))


class LusztigVerma:
    """X v_{Lambda<i>} -> T_i(X) F_i^(kappa-1) v_Lambda."""

    def __init__(self, chi: Bicharacter, i: int, lam: CharacterU0):
        ai = lat.unit(chi.n, i)
        qa = chi.qq(ai)
        k = kappa(qa)
        if k < 2:
            raise HypothesisViolated("kappa(q_ii) must be at least 2")
        for t in range(k - 1):
            v = -lam(ai, lat.zero(chi.n)) + qa ** t * lam(lat.zero(chi.n), ai)
            if v.is_zero():
                raise HypothesisViolated(f"Lambda(-K_i + q_ii^{t} L_i) = 0")
        self.T = lusztig_map(chi, i)
        self.i, self.kappa = i, k
        self.chi = chi
        self.lam = lam
        self.lam_src = reflected_character(chi, i, lam)
        self.target = self.T.target
        self.source = self.T.source
        base = VermaVector.highest(self.target, lam)
        for _ in range(k - 1):
            base = act(self.target, self.target.F(i), base)
        self.base = base

    def __call__(self, v: VermaVector) -> VermaVector:
        out = VermaVector(self.target, self.lam)
        for w, c in v.terms.items():
            out = out + act(self.target, self.T(self.source.fword(w)), self.base).scale(c)
        return out

    def source_basis(self, gamma) -> list:
        s = self.source
        return [VermaVector(s, self.lam_src, {w: s.field.one}) for w in s.basis(gamma).fwords]

    def check(self, gamma) -> bool:
        """Module-map property on generators and injectivity on degree gamma (source coordinates)."""
        s, t = self.source, self.target
        vecs = self.source_basis(gamma)
        imgs = [self(v) for v in vecs]
        degs = sorted({d for im in imgs for d in im.degrees()})
        if imgs:
            if len(degs) != 1:
                raise AssertionError("image is not homogeneous")
            mat = [im.coords(degs[0]) for im in imgs]
            if rank(mat, t.field) != len(imgs):
                return False
        n = self.chi.n
        for v in vecs:
            for j in range(n):
                for gen_s, gen_t in ((s.E(j), self.T.image_E(j)), (s.F(j), self.T.image_F(j))):
                    lhs = self(act(s, gen_s, v))
                    rhs = act(t, gen_t, self(v))
                    if not (lhs + rhs.scale(-t.field.one)).is_zero():
                        return False
        return True


def lusztig_verma(chi: Bicharacter, i: int, lam: CharacterU0) -> LusztigVerma:
    return LusztigVerma(chi, i, lam)


def _coeff_index(alpha) -> int:
    for j, c in enumerate(alpha):
        if c == 1:
            return j
    raise ValueError(f"root {alpha} has no unit coefficient")


def hyperplane_character(chi: Bicharacter, alpha, t: int, rng: random.Random, pool=None) -> CharacterU0:
    """A pseudorandom Lambda with rho(alpha) Lambda(K_alpha) = q_alpha^t Lambda(L_alpha)."""
    f = chi.field
    pool = pool or [f(x) for x in (2, 3, 5, 7, -2, -3, 11, 13)]
    n = chi.n
    kv = [rng.choice(pool) * f.gen ** rng.randint(-2, 2) if f.is_cyclotomic else rng.choice(pool) * f.gen ** rng.randint(0, 3) for _ in range(n)]
    lv = [rng.choice(pool) for _ in range(n)]
    j = _coeff_index(alpha)
    lam0 = CharacterU0(tuple(kv), tuple(lv))
    kalpha = lam0(tuple(alpha), lat.zero(n))
    want = rho_hat(chi, alpha) * kalpha / chi.qq(alpha) ** t
    rest = f.one
    for k, c in enumerate(alpha):
        if k != j and c:
            rest = rest * lv[k] ** c
    lv[j] = want / rest
    out = CharacterU0(tuple(kv), tuple(lv))
    assert hyperplane_value(chi, out, alpha, t).is_zero()
    return out


def rank_bound_check(chi: Bicharacter, beta, alpha, t: int, samples: int = 20, seed: int = 0,
                     rsd: RootSystemData | None = None) -> dict:
    rsd = rsd or enumerate_roots(chi)
    alg = get_algebra(chi)
    beta, alpha = tuple(beta), tuple(alpha)
    m = alg.dim(beta)
    r = len(root_multisets(rsd, chi, beta, alpha, t))
    if r < 1:
        raise ValueError("need r(alpha, t) >= 1")
    _, _, mult = shapovalov_product(chi, rsd, beta)
    others = [(a, s) for (a, s) in mult if (a, s) != (alpha, t)]
    sm = shapovalov_matrix(chi, beta)
    rng = random.Random(seed)
    ranks, generic_eq, radical_ok = [], 0, 0
    for _ in range(samples):
        lam = hyperplane_character(chi, alpha, t, rng)
        rk = rank(sm.evaluate(lam), chi.field)
        ranks.append(rk)
        if rk > m - r:
            raise VerificationFailed(f"rank {rk} exceeds m - r = {m - r}")
        generic = all(not hyperplane_value(chi, lam, a, s).is_zero() for a, s in others)
        if generic:
            if rk != m - r:
                raise VerificationFailed(f"generic sample has rank {rk}, expected {m - r}")
            generic_eq += 1
            if _radical_generated(chi, lam, beta, alpha, t, r):
                radical_ok += 1
            else:
                raise VerificationFailed("radical is not generated by the degree t*alpha kernel vector")
    if generic_eq == 0:
        raise VerificationFailed("no generic sample drawn")
    return {"degree": list(beta), "root": list(alpha), "t": t, "m": m, "r": r, "ranks": ranks,
            "generic_samples": generic_eq, "radical_generated": radical_ok,
            "identity": "rank Lambda(S_beta) <= m - r, with equality off the other hyperplanes"}


def _radical_generated(chi, lam, beta, alpha, t, r) -> bool:
    alg = get_algebra(chi)
    ta = lat.scale(t, alpha)
    ker = verma_radical(chi, lam, ta)
    if len(ker) != 1:
        return False
    v = ker[0]
    rest = lat.sub(beta, ta)
    if not lat.is_nonneg(rest):
        return False
    gens = [act(alg, alg.fword(w), v) for w in alg.basis(rest).fwords] if any(rest) else [v]
    mat = [g.coords(beta) for g in gens]
    span = rank(mat, chi.field) if mat else 0
    if span != r:
        return False
    rad = [x.coords(beta) for x in verma_radical(chi, lam, beta)]
    return rank(rad + mat, chi.field) == len(rad) == r
