"""Harish-Chandra equations, their solution space, and reconstruction of skew-central elements."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from . import lattice as lat
from .algebra import U0Elem, UAlgebra, UElement, VerificationFailed, get_algebra, lusztig_map, shapovalov_project, u0_divexact, word_degree
from .groupoid import RootSystemData, enumerate_roots
from .lattice import Bicharacter, CharacterU0, EtaHom, eta_shift, rho_hat
from .linalg import nullspace
from .scalars import discrete_log, kappa, kappa_prime
from .verma import HypothesisViolated, shapovalov_matrix, u0_det


class NotInB(ValueError):
    """The input does not satisfy the Harish-Chandra equations."""


class IntegralityFailed(ArithmeticError):
    """A solved coefficient is not in U^0; this signals a bug."""


def _in_box(p, box) -> bool:
    lam, mu = p
    return all(abs(x) <= box for x in lam) and all(abs(x) <= box for x in mu)


@dataclass
class HCWindow:
    """Seed pairs closed under root-ladder moves inside the box |coords| <= box."""

    roots: list
    seeds: list
    box: int
    pairs: list = dc_field(default_factory=list)

    @classmethod
    def build(cls, rsd: RootSystemData, seeds, box: int = 4) -> HCWindow:
        seeds = [(tuple(l), tuple(m)) for l, m in seeds]
        seen = {p for p in seeds if _in_box(p, box)}
        stack = list(seen)
        while stack:
            lam, mu = stack.pop()
            for b in rsd.positive_roots:
                for s in (1, -1):
                    p = (lat.add(lam, lat.scale(s, b)), lat.sub(mu, lat.scale(s, b)))
                    if p not in seen and _in_box(p, box):
                        seen.add(p)
                        stack.append(p)
        return cls(list(rsd.positive_roots), seeds, box, sorted(seen))

    def index(self) -> dict:
        return {p: k for k, p in enumerate(self.pairs)}

    def ladders(self, beta) -> list:
        """Partition of the pairs into beta-ladders, each sorted along beta."""
        groups: dict = {}
        for lam, mu in self.pairs:
            # canonical point: shift lam so that its first nonzero beta-coordinate ratio is minimal
            j = next(k for k, c in enumerate(beta) if c)
            s = lam[j] // beta[j]
            base = (lat.sub(lam, lat.scale(s, beta)), lat.add(mu, lat.scale(s, beta)))
            groups.setdefault(base, []).append((s, (lam, mu)))
        return [[p for _, p in sorted(g)] for _, g in sorted(groups.items())]

    def to_json(self) -> dict:
        return {"box": self.box, "seeds": [[list(l), list(m)] for l, m in self.seeds],
                "pairs": len(self.pairs),
                "truncation": "coefficients outside the box are taken to be 0"}


@dataclass
class HCSolution:
    window: HCWindow
    coeffs: dict  # (lam, mu) -> Scalar
    eta: EtaHom

    def to_u0(self, field, n) -> U0Elem:
        return U0Elem(field, n, dict(self.coeffs))

    def to_json(self) -> list:
        return [[list(l), list(m), str(c)] for (l, m), c in sorted(self.coeffs.items()) if not c.is_zero()]


def _check_asswk(chi, rsd):
    for b in rsd.positive_roots:
        if chi.qq(b).is_one():
            raise HypothesisViolated(f"q_beta = 1 for the root {b}")


def _shift(p, beta, s):
    lam, mu = p
    return (lat.add(lam, lat.scale(s, beta)), lat.sub(mu, lat.scale(s, beta)))


def hc_constraints(chi: Bicharacter, rsd: RootSystemData, eta: EtaHom, window: HCWindow) -> list:
    """Rows of the truncated Harish-Chandra system as sparse dicts {pair index: coeff}, tagged by kind."""
    _check_asswk(chi, rsd)
    f = chi.field
    idx = window.index()
    rows = []
    for beta in rsd.positive_roots:
        qb = chi.qq(beta)
        kap = kappa(qb)
        rb = rho_hat(chi, beta)
        for ladder in window.ladders(beta):
            if kap == 0:
                for p in ladder:
                    x = eta_shift(eta, chi, p[0], p[1], beta)
                    t = discrete_log(x, qb)
                    if t is None:
                        rows.append(("e2", beta, {idx[p]: f.one}))
                    elif t != 0:
                        tgt = _shift(p, beta, t)
                        row = {idx[p]: -rb ** t}
                        if tgt in idx:
                            row[idx[tgt]] = f.one
                        rows.append(("e1", beta, row))
            else:
                # one base point per residue class mod kappa covers every instance
                p0 = ladder[0]
                for s in range(kap):
                    base = _shift(p0, beta, s)
                    x = eta_shift(eta, chi, base[0], base[1], beta)
                    t = discrete_log(x, qb)
                    if t is not None:
                        t %= kap
                        if t == 0:
                            continue
                        kind, ts = "e3", [t]
                    else:
                        kind, ts = "e4", range(1, kap)
                    for tt in ts:
                        row: dict = {}
                        for p in ladder:
                            d = _ladder_offset(base, p, beta)
                            r = d % kap
                            if r == tt:
                                c = rb ** (-d)
                            elif r == 0:
                                c = -rb ** (-d)
                            else:
                                continue
                            row[idx[p]] = row[idx[p]] + c if idx[p] in row else c
                        row = {k: v for k, v in row.items() if not v.is_zero()}
                        if row:
                            rows.append((kind, beta, row))
    return rows


def _ladder_offset(base, p, beta) -> int:
    diff = lat.sub(p[0], base[0])
    j = next(k for k, c in enumerate(beta) if c)
    d = diff[j] // beta[j]
    assert lat.scale(d, beta) == diff
    return d


def solve_B_eta(chi: Bicharacter, rsd: RootSystemData, eta: EtaHom, window: HCWindow) -> list:
    f = chi.field
    ncols = len(window.pairs)
    rows = hc_constraints(chi, rsd, eta, window)
    dense = []
    for _, _, r in rows:
        v = [f.zero] * ncols
        for k, c in r.items():
            v[k] = c
        dense.append(v)
    out = []
    for vec in nullspace(dense, f, ncols):
        out.append(HCSolution(window, {window.pairs[k]: c for k, c in enumerate(vec) if not c.is_zero()}, eta))
    return out


def satisfies_hc(chi: Bicharacter, rsd: RootSystemData, eta: EtaHom, p: U0Elem) -> bool:
    """Exact membership of a finitely supported P in the solution space."""
    if p.is_zero():
        return True
    box = max(max(abs(x) for x in l + m) for l, m in p.terms) + 1
    window = HCWindow.build(rsd, list(p.terms), box)
    idx = window.index()
    for _, _, row in hc_constraints(chi, rsd, eta, window):
        s = chi.field.zero
        for k, c in row.items():
            s = s + c * p.coeff(*window.pairs[k])
        if not s.is_zero():
            return False
    return all(pt in idx for pt in p.terms)


def smscP_check(chi: Bicharacter, eta: EtaHom, p: U0Elem, beta, t: int, lam: CharacterU0) -> bool:
    """Lambda'(P) = eta(beta)^-t Lambda(P) on the hyperplane Lambda(K_b L_-b) = q_b^t / rho(b)."""
    qb = chi.qq(beta)
    kp = kappa_prime(qb)
    if qb.is_one() or not (1 <= t and (kp == float("inf") or t <= kp - 1)):
        raise HypothesisViolated("t out of range")
    if lam(tuple(beta), lat.neg(beta)) != qb ** t / rho_hat(chi, beta):
        raise HypothesisViolated("Lambda is not on the required hyperplane")
    lhs = chi.field.zero
    rhs = chi.field.zero
    for (l, m), c in p.terms.items():
        v = c * lam(l, m)
        rhs = rhs + v
        lhs = lhs + v * chi(tuple(beta), m) ** t / chi(l, tuple(beta)) ** t
    return lhs == eta(beta) ** (-t) * rhs


# --- reconstruction ----------------------------------------------------------

@dataclass
class SkewCentralElement:
    element: UElement
    eta: EtaHom
    source: U0Elem
    transcript: list = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {"eta": self.eta.to_json()["eta"], "P": self.source.to_json(),
                "V": self.element.to_json(), "transcript": self.transcript}


def verify_skew_central(chi: Bicharacter, v: UElement, eta: EtaHom) -> bool:
    alg = v.alg
    n = chi.n
    for i in range(n):
        ai = lat.unit(n, i)
        e, f = alg.E(i), alg.F(i)
        if not (v * e - e * v * eta(ai)).is_zero():
            return False
        if not (v * f - f * v * eta(lat.neg(ai))).is_zero():
            return False
        for g in (alg.K(ai), alg.L(ai)):
            if not (v * g - g * v).is_zero():
                return False
    return True


def pi_times(alg: UAlgebra, v: UElement, fword) -> dict:
    """pi(V F_fword) grouped by F-basis word: {word: U0Elem}."""
    chi, n = alg.chi, alg.n
    acc: dict = {}
    for (f1, l1, m1, e1), c1 in v.terms.items():
        for (fp, lp, mp, ep), c in alg.ef_order(e1, tuple(fword)).items():
            if ep:
                continue
            dfp = word_degree(fp, n)
            val = c1 * c * chi(l1, lat.neg(dfp)) * chi(dfp, m1)
            if val.is_zero():
                continue
            key_l, key_m = lat.add(l1, lp), lat.add(m1, mp)
            for fb, cf in alg.reduce_f(f1 + fp).items():
                d = acc.setdefault(fb, {})
                k = (key_l, key_m)
                d[k] = d[k] + val * cf if k in d else val * cf
    return {w: U0Elem(alg.field, n, t) for w, t in acc.items()}


def _adjugate(s: list, field, n) -> list:
    """adj(S)[y][x] = (-1)^(x+y) det(S without row x, column y)."""
    m = len(s)
    out = [[None] * m for _ in range(m)]
    for x in range(m):
        for y in range(m):
            minor = [[s[r][c] for c in range(m) if c != y] for r in range(m) if r != x]
            d = u0_det(minor, field, n)
            out[y][x] = d if (x + y) % 2 == 0 else -d
    return out


_DET_ADJ: dict = {}


def _det_adj(chi, beta):
    key = (chi, tuple(beta))
    if key not in _DET_ADJ:
        s = shapovalov_matrix(chi, beta).entries
        f, n = chi.field, chi.n
        adj = _adjugate(s, f, n) if len(s) > 1 else [[U0Elem.one(f, n)]]
        _DET_ADJ[key] = (u0_det(s, f, n), adj)
    return _DET_ADJ[key]


def _degrees_of_height(n: int, h: int) -> list:
    return [c for c in itertools.product(range(h + 1), repeat=n) if sum(c) == h]


def reconstruct_center(chi: Bicharacter, rsd: RootSystemData, eta: EtaHom, p: U0Elem) -> SkewCentralElement:
    _check_asswk(chi, rsd)
    if not satisfies_hc(chi, rsd, eta, p):
        raise NotInB("P does not satisfy the Harish-Chandra equations")
    alg = get_algebra(chi)
    f, n = chi.field, chi.n
    v = alg.from_u0(p)
    k = p.degp() if not p.is_zero() else 0
    transcript = [{"height_bound": k}]
    for h in range(1, k + 2):
        for beta in _degrees_of_height(n, h):
            entry = alg.basis(beta)
            m = entry.dim
            if m == 0:
                continue
            ds, adj = _det_adj(chi, beta)
            ebeta = eta(lat.neg(beta))
            yidx = entry.findex
            # C[y][y'] = eta(-beta) P delta - W[y][y']
            cmat = [[U0Elem(f, n) for _ in range(m)] for _ in range(m)]
            for yp, w in enumerate(entry.fwords):
                for word, u in pi_times(alg, v, w).items():
                    cmat[yidx[word]][yp] = cmat[yidx[word]][yp] - u
                cmat[yp][yp] = cmat[yp][yp] + p * ebeta
            terms = {}
            zero_block = True
            for y in range(m):
                for x in range(m):
                    num = U0Elem(f, n)
                    for yp in range(m):
                        if not cmat[y][yp].is_zero() and not adj[yp][x].is_zero():
                            num = num + cmat[y][yp] * adj[yp][x]
                    if num.is_zero():
                        continue
                    zq = u0_divexact(num, ds)
                    if zq is None:
                        raise IntegralityFailed(f"degree {beta}: entry ({y + 1},{x + 1}) is not in U^0")
                    zero_block = False
                    for (l, mu), c in zq.terms.items():
                        terms[(entry.fwords[y], l, mu, entry.ewords[x])] = c
            if h == k + 1:
                if not zero_block:
                    raise VerificationFailed(f"degree {beta} beyond the height bound has nonzero Z")
                continue
            if terms:
                v = v + UElement(alg, terms)
            # per-degree consistency
            for w in entry.fwords:
                got = pi_times(alg, v, w)
                want = {w: p * ebeta} if not p.is_zero() else {}
                if {a: b for a, b in got.items() if not b.is_zero()} != want:
                    raise VerificationFailed(f"pi(V Y) != eta(-beta) Y P at degree {beta}")
            transcript.append({"degree": list(beta), "dim": m, "nonzero_Z": bool(terms)})
    transcript.append({"extra_height_zero": k + 1})
    if not verify_skew_central(chi, v, eta):
        raise VerificationFailed("reconstructed element is not skew central")
    if shapovalov_project(v) != p:
        raise VerificationFailed("Sh(V) differs from P")
    transcript.append({"skew_central": True, "Sh(V)=P": True})
    return SkewCentralElement(v, eta, p, transcript)


def hc_image(chi: Bicharacter, v: UElement, eta: EtaHom | None = None, rsd: RootSystemData | None = None) -> U0Elem:
    p = shapovalov_project(v)
    if eta is not None:
        rsd = rsd or enumerate_roots(chi)
        if not satisfies_hc(chi, rsd, eta, p):
            raise VerificationFailed("Sh(V) violates the Harish-Chandra equations")
    return p


def gamma_shift(chi: Bicharacter, i: int, eta: EtaHom, p: U0Elem) -> U0Elem:
    ai = lat.unit(chi.n, i)
    e = kappa(chi.qq(ai)) - 1
    base = eta(ai) ** e
    return p.map_coeffs(lambda l, m: base * chi(ai, m) ** e / chi(l, ai) ** e)


def shift_conjugation_check(chi: Bicharacter, i: int, eta: EtaHom, v: UElement) -> bool:
    """Sh(T_i(V)) = gamma(Sh(V)) for V skew-central in U of the reflected object.

    Weights of V are in the reflected basis; eta is given on the fixed basis.
    """
    T = lusztig_map(chi, i)
    if v.alg is not T.source:
        raise TypeError("V must live in the reflected algebra")
    eta_src = eta.pullback(T.basis_map)
    if not verify_skew_central(T.source.chi, v, eta_src):
        raise ValueError("V is not skew central for the pulled-back eta")
    lhs = shapovalov_project(T(v))
    rhs = gamma_shift(chi, i, eta, shapovalov_project(v).map_weights(T.weight))
    return lhs == rhs
