"""The algebras U(chi) and their triangular normal form.

Elements of U are stored as dicts keyed by (F-word, lam, mu, E-word) meaning
F_{f} K_lam L_mu E_{e}, with F- and E-words drawn from the basis chosen per
degree.  The quotient by the radical of the Drinfeld pairing is realised by
solving against the Gram matrix of that pairing, so no rewriting system is
needed.  Letters are 0-based generator indices.
"""
from __future__ import annotations

from itertools import permutations

from . import lattice as lat
from .groupoid import CapExceeded, RootSystemData, cartan_entry, enumerate_roots, reflect, root_multisets
from .lattice import Bicharacter
from .linalg import inverse, rank, select_independent_rows, transpose
from .scalars import Field, Scalar, qbinom, qfact, qshift_fact


class RankMismatchError(ArithmeticError):
    """No invertible Gram minor of the predicted size exists."""


class VerificationFailed(AssertionError):
    pass


# --- U^0 -------------------------------------------------------------------

class U0Elem:
    """Laurent polynomial sum a_{lam,mu} K_lam L_mu."""

    __slots__ = ("field", "n", "terms")

    def __init__(self, field: Field, n: int, terms: dict | None = None):
        self.field = field
        self.n = n
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    @classmethod
    def monomial(cls, field, n, lam=None, mu=None, coeff=None) -> U0Elem:
        lam = lam or lat.zero(n)
        mu = mu or lat.zero(n)
        return cls(field, n, {(tuple(lam), tuple(mu)): field.one if coeff is None else field(coeff)})

    @classmethod
    def one(cls, field, n) -> U0Elem:
        return cls.monomial(field, n)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: U0Elem) -> U0Elem:
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return U0Elem(self.field, self.n, out)

    def __neg__(self):
        return U0Elem(self.field, self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: U0Elem) -> U0Elem:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, U0Elem):
            out: dict = {}
            for (l1, m1), a in self.terms.items():
                for (l2, m2), b in other.terms.items():
                    k = (lat.add(l1, l2), lat.add(m1, m2))
                    c = a * b
                    out[k] = out[k] + c if k in out else c
            return U0Elem(self.field, self.n, out)
        c = self.field(other)
        return U0Elem(self.field, self.n, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = U0Elem.one(self.field, self.n)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, U0Elem):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def shift(self, lam, mu) -> U0Elem:
        return U0Elem(self.field, self.n, {(lat.add(l, lam), lat.add(m, mu)): v for (l, m), v in self.terms.items()})

    def map_coeffs(self, fn) -> U0Elem:
        """Multiply each coefficient a_{lam,mu} by fn(lam, mu)."""
        return U0Elem(self.field, self.n, {k: v * fn(*k) for k, v in self.terms.items()})

    def map_weights(self, fn) -> U0Elem:
        out: dict = {}
        for (l, m), v in self.terms.items():
            k = (tuple(fn(l)), tuple(fn(m)))
            out[k] = out[k] + v if k in out else v
        return U0Elem(self.field, self.n, out)

    def evaluate(self, char) -> Scalar:
        total = self.field.zero
        for (l, m), v in self.terms.items():
            total = total + v * char(l, m)
        return total

    def coeff(self, lam, mu) -> Scalar:
        return self.terms.get((tuple(lam), tuple(mu)), self.field.zero)

    def min_shift(self):
        """Componentwise minimal (lam, mu) over the support."""
        ls = [l for l, _ in self.terms]
        ms = [m for _, m in self.terms]
        return (tuple(min(c) for c in zip(*ls)), tuple(min(c) for c in zip(*ms)))

    def degp(self) -> int:
        """Total degree in the K_{alpha_i}, L_{alpha_i} after clearing the minimal shift."""
        if not self.terms:
            return -1
        lo, mo = self.min_shift()
        return max(sum(lat.sub(l, lo)) + sum(lat.sub(m, mo)) for l, m in self.terms)

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def to_json(self) -> list:
        return [{"K": list(l), "L": list(m), "c": str(v)} for (l, m), v in self.sorted_items()]

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (l, m), v in self.sorted_items():
            parts.append(f"({v})K{list(l)}L{list(m)}")
        return " + ".join(parts)


def u0_divexact(a: U0Elem, b: U0Elem) -> U0Elem | None:
    """a / b in the Laurent ring U^0, or None if b does not divide a."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero in U^0")
    if a.is_zero():
        return a
    n = a.n

    def flat(e: U0Elem):
        lo, mo = e.min_shift()
        return {tuple(lat.sub(l, lo)) + tuple(lat.sub(m, mo)): v for (l, m), v in e.terms.items()}, lo + mo

    ra, sa = flat(a)
    pb, sb = flat(b)
    lead_b = max(pb)
    cb = pb[lead_b].inverse()
    quot: dict = {}
    while ra:
        lead = max(ra)
        d = tuple(x - y for x, y in zip(lead, lead_b))
        if any(x < 0 for x in d):
            return None
        c = ra[lead] * cb
        quot[d] = c
        for e, v in pb.items():
            k = tuple(x + y for x, y in zip(e, d))
            nv = ra.get(k, a.field.zero) - c * v
            if nv.is_zero():
                ra.pop(k, None)
            else:
                ra[k] = nv
    shift = tuple(x - y for x, y in zip(sa, sb))
    out = {}
    for e, v in quot.items():
        full = tuple(x + y for x, y in zip(e, shift))
        out[(full[:n], full[n:])] = v
    return U0Elem(a.field, n, out)


# --- words ------------------------------------------------------------------

def word_degree(word, n: int) -> tuple:
    d = [0] * n
    for i in word:
        d[i] += 1
    return tuple(d)


def words_of_degree(beta) -> list:
    """All words with letter multiplicities beta, in lexicographic order."""
    letters = []
    for i, c in enumerate(beta):
        letters.extend([i] * c)
    return sorted(set(permutations(letters)))


class BasisEntry:
    __slots__ = ("degree", "ewords", "fwords", "gram", "gram_inv", "eindex", "findex")

    def __init__(self, degree, ewords, fwords, gram, gram_inv):
        self.degree = degree
        self.ewords = ewords
        self.fwords = fwords
        self.gram = gram
        self.gram_inv = gram_inv
        self.eindex = {w: k for k, w in enumerate(ewords)}
        self.findex = {w: k for k, w in enumerate(fwords)}

    @property
    def dim(self) -> int:
        return len(self.ewords)


_ALGEBRAS: dict = {}


def get_algebra(chi: Bicharacter, height_cap: int = 12, root_cap: int = 1024) -> UAlgebra:
    alg = _ALGEBRAS.get(chi)
    if alg is None:
        alg = UAlgebra(chi, height_cap=height_cap, root_cap=root_cap)
        _ALGEBRAS[chi] = alg
    return alg


class UAlgebra:
    """U(chi) with memoized pairing, bases and normal ordering."""

    def __init__(self, chi: Bicharacter, height_cap: int = 12, root_cap: int = 1024):
        self.chi = chi
        self.n = chi.n
        self.field = chi.field
        self.height_cap = height_cap
        self.root_cap = root_cap
        self._rsd: RootSystemData | None = None
        self._rsd_err: Exception | None = None
        self._pair: dict = {}
        self._basis: dict = {}
        self._red_e: dict = {}
        self._red_f: dict = {}
        self._ef: dict = {}
        self.zero_w = lat.zero(self.n)

    def __repr__(self):
        return f"UAlgebra({self.chi!r})"

    @property
    def rsd(self) -> RootSystemData | None:
        if self._rsd is None and self._rsd_err is None:
            try:
                self._rsd = enumerate_roots(self.chi, cap=self.root_cap)
            except (CapExceeded, ValueError) as exc:
                self._rsd_err = exc
        return self._rsd

    def alpha(self, i: int) -> tuple:
        return lat.unit(self.n, i)

    # pairing on free words
    def pair(self, eword: tuple, fword: tuple) -> Scalar:
        """<E_eword, F_fword>, stripping E letters from the left.

        Uses Delta(F_j) = F_j (x) L_{alpha_j} + 1 (x) F_j on the F-word.
        """
        key = (eword, fword)
        hit = self._pair.get(key)
        if hit is not None:
            return hit
        f = self.field
        if len(eword) != len(fword):
            val = f.zero
        elif not eword:
            val = f.one
        elif word_degree(eword, self.n) != word_degree(fword, self.n):
            val = f.zero
        else:
            i = eword[0]
            rest = eword[1:]
            val = f.zero
            prefix = [0] * self.n
            ai = self.alpha(i)
            for p, j in enumerate(fword):
                if j == i:
                    c = self.chi(ai, tuple(prefix))
                    sub = self.pair(rest, fword[:p] + fword[p + 1:])
                    if not sub.is_zero():
                        val = val + c * sub
                prefix[j] += 1
        self._pair[key] = val
        return val

    def pair_oracle(self, eword: tuple, fword: tuple) -> Scalar:
        """Same pairing via the other rule: strip F letters, Delta(E_i) = E_i (x) 1 + K_i (x) E_i."""
        f = self.field
        if len(eword) != len(fword):
            return f.zero
        if not fword:
            return f.one
        j = fword[0]
        aj = self.alpha(j)
        val = f.zero
        prefix = [0] * self.n
        for p, i in enumerate(eword):
            if i == j:
                val = val + self.chi(tuple(prefix), aj) * self.pair_oracle(eword[:p] + eword[p + 1:], fword[1:])
            prefix[i] += 1
        return val

    # bases
    def expected_dim(self, beta) -> int | None:
        rsd = self.rsd
        if rsd is None:
            return None
        return len(root_multisets(rsd, self.chi, beta))

    def basis(self, beta) -> BasisEntry:
        beta = tuple(beta)
        entry = self._basis.get(beta)
        if entry is not None:
            return entry
        if not lat.is_nonneg(beta):
            raise ValueError(f"degree {beta} is not in the positive cone")
        if lat.height(beta) > self.height_cap:
            raise CapExceeded(f"degree {beta} exceeds height cap {self.height_cap}")
        words = words_of_degree(beta)
        full = [[self.pair(e, f) for f in words] for e in words]
        rows = select_independent_rows(full, self.field)
        sub = [full[r] for r in rows]
        cols = select_independent_rows(transpose(sub), self.field) if rows else []
        expected = self.expected_dim(beta)
        if expected is not None and expected != len(rows):
            raise RankMismatchError(f"degree {beta}: Gram rank {len(rows)} but {expected} root multisets")
        ewords = [words[r] for r in rows]
        fwords = [words[c] for c in cols]
        gram = [[full[r][c] for c in cols] for r in rows]
        ginv = inverse(gram, self.field) if gram else []
        entry = BasisEntry(beta, ewords, fwords, gram, ginv)
        self._basis[beta] = entry
        return entry

    def install_basis(self, beta, ewords, fwords):
        """Re-register a basis (e.g. from a cache); the Gram matrix is recomputed and checked."""
        beta = tuple(beta)
        ewords = [tuple(w) for w in ewords]
        fwords = [tuple(w) for w in fwords]
        gram = [[self.pair(e, f) for f in fwords] for e in ewords]
        if len(ewords) != len(fwords) or (gram and rank(gram, self.field) != len(gram)):
            raise RankMismatchError(f"cached basis for {beta} is not valid")
        full_rank = self.basis_rank_check(beta)
        if full_rank != len(ewords):
            raise RankMismatchError(f"cached basis for {beta} has wrong size")
        self._basis[beta] = BasisEntry(beta, ewords, fwords, gram, inverse(gram, self.field) if gram else [])

    def basis_rank_check(self, beta) -> int:
        words = words_of_degree(beta)
        return rank([[self.pair(e, f) for f in words] for e in words], self.field)

    def dim(self, beta) -> int:
        return self.basis(beta).dim

    # reduction to the basis
    def reduce_e(self, word: tuple) -> dict:
        """Coordinates of E_word in the chosen basis: {basis word: coeff}."""
        hit = self._red_e.get(word)
        if hit is not None:
            return hit
        entry = self.basis(word_degree(word, self.n))
        if word in entry.eindex:
            out = {word: self.field.one}
        else:
            p = [self.pair(word, fw) for fw in entry.fwords]
            out = {}
            for x, ew in enumerate(entry.ewords):
                c = self.field.zero
                for y, py in enumerate(p):
                    if not py.is_zero():
                        c = c + py * entry.gram_inv[y][x]
                if not c.is_zero():
                    out[ew] = c
        self._red_e[word] = out
        return out

    def reduce_f(self, word: tuple) -> dict:
        hit = self._red_f.get(word)
        if hit is not None:
            return hit
        entry = self.basis(word_degree(word, self.n))
        if word in entry.findex:
            out = {word: self.field.one}
        else:
            p = [self.pair(ew, word) for ew in entry.ewords]
            out = {}
            for y, fw in enumerate(entry.fwords):
                c = self.field.zero
                for x, px in enumerate(p):
                    if not px.is_zero():
                        c = c + entry.gram_inv[y][x] * px
                if not c.is_zero():
                    out[fw] = c
        self._red_f[word] = out
        return out

    # normal ordering in the free triangular algebra
    def ef_order(self, eword: tuple, fword: tuple) -> dict:
        """E_eword F_fword as {(f, lam, mu, e): coeff} with f, e unreduced words."""
        key = (eword, fword)
        hit = self._ef.get(key)
        if hit is not None:
            return hit
        zero = self.zero_w
        if not eword or not fword:
            out = {(fword, zero, zero, eword): self.field.one}
            self._ef[key] = out
            return out
        chi = self.chi
        head, i = eword[:-1], eword[-1]
        ai = self.alpha(i)
        out: dict = {}

        def put(k, c):
            if k in out:
                v = out[k] + c
                if v.is_zero():
                    del out[k]
                else:
                    out[k] = v
            elif not c.is_zero():
                out[k] = c

        # E_i F_f = F_f E_i + sum_p F_{f without p} (-chi(a_i,-d) K_i + chi(d,a_i) L_i)
        for (f2, l2, m2, e2), c in self.ef_order(head, fword).items():
            put((f2, l2, m2, e2 + (i,)), c)
        n = self.n
        for p, j in enumerate(fword):
            if j != i:
                continue
            d = word_degree(fword[p + 1:], n)
            rest = fword[:p] + fword[p + 1:]
            ck = -chi(ai, lat.neg(d))
            cl = chi(d, ai)
            for (f2, l2, m2, e2), c in self.ef_order(head, rest).items():
                de = word_degree(e2, n)
                # move K_i (resp. L_i) left past E_{e2}
                put((f2, lat.add(l2, ai), m2, e2), c * ck / chi(ai, de))
                put((f2, l2, lat.add(m2, ai), e2), c * cl * chi(de, ai))
        self._ef[key] = out
        return out

    # element constructors
    def elem(self, terms: dict | None = None) -> UElement:
        return UElement(self, terms or {})

    def one(self) -> UElement:
        z = self.zero_w
        return UElement(self, {((), z, z, ()): self.field.one})

    def scalar(self, c) -> UElement:
        return self.one() * self.field(c)

    def E(self, i: int) -> UElement:
        z = self.zero_w
        return UElement(self, {((), z, z, (i,)): self.field.one})

    def F(self, i: int) -> UElement:
        z = self.zero_w
        return UElement(self, {((i,), z, z, ()): self.field.one})

    def K(self, lam) -> UElement:
        return UElement(self, {((), tuple(lam), self.zero_w, ()): self.field.one})

    def L(self, mu) -> UElement:
        return UElement(self, {((), self.zero_w, tuple(mu), ()): self.field.one})

    def KL(self, lam, mu) -> UElement:
        return UElement(self, {((), tuple(lam), tuple(mu), ()): self.field.one})

    def from_u0(self, z: U0Elem) -> UElement:
        return UElement(self, {((), l, m, ()): v for (l, m), v in z.terms.items()})

    def eword(self, word) -> UElement:
        """E_{i1}...E_{ik} reduced to the basis."""
        z = self.zero_w
        return UElement(self, {((), z, z, w): c for w, c in self.reduce_e(tuple(word)).items()})

    def fword(self, word) -> UElement:
        z = self.zero_w
        return UElement(self, {(w, z, z, ()): c for w, c in self.reduce_f(tuple(word)).items()})

    def multiply(self, a: UElement, b: UElement) -> UElement:
        chi = self.chi
        n = self.n
        acc: dict = {}
        for (f1, l1, m1, e1), c1 in a.terms.items():
            for (f2, l2, m2, e2), c2 in b.terms.items():
                c12 = c1 * c2
                for (fp, lp, mp, ep), c in self.ef_order(e1, f2).items():
                    dfp = word_degree(fp, n)
                    dep = word_degree(ep, n)
                    # K_l1 L_m1 past F_fp to the right; K_l2 L_m2 past E_ep to the left
                    factor = chi(l1, lat.neg(dfp)) * chi(dfp, m1) * chi(dep, m2) / chi(l2, dep)
                    key = (f1 + fp, lat.add(lat.add(l1, lp), l2), lat.add(lat.add(m1, mp), m2), ep + e2)
                    val = c12 * c * factor
                    acc[key] = acc[key] + val if key in acc else val
        return self._reduce_terms(acc)

    def _reduce_terms(self, acc: dict) -> UElement:
        out: dict = {}
        for (f, l, m, e), c in acc.items():
            if c.is_zero():
                continue
            rf = self.reduce_f(f)
            if not rf:
                continue
            re_ = self.reduce_e(e)
            for fb, cf in rf.items():
                cfc = cf * c
                for eb, ce in re_.items():
                    key = (fb, l, m, eb)
                    v = cfc * ce
                    out[key] = out[key] + v if key in out else v
        return UElement(self, out)

    def normalize(self, terms: dict) -> UElement:
        """Reduce arbitrary (possibly non-basis) words to the triangular normal form."""
        return self._reduce_terms(terms)


class UElement:
    """A finite sum of c F_f K_lam L_mu E_e in normal form."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: UAlgebra, terms: dict):
        self.alg = alg
        self.terms = {k: v for k, v in terms.items() if not v.is_zero()}

    def _check(self, other: UElement):
        if other.alg is not self.alg:
            raise TypeError("elements of different algebras")

    def __add__(self, other: UElement) -> UElement:
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return UElement(self.alg, out)

    def __neg__(self):
        return UElement(self.alg, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: UElement) -> UElement:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, UElement):
            self._check(other)
            return self.alg.multiply(self, other)
        c = self.alg.field(other)
        return UElement(self.alg, {k: v * c for k, v in self.terms.items()})

    def __rmul__(self, other):
        c = self.alg.field(other)
        return UElement(self.alg, {k: c * v for k, v in self.terms.items()})

    def __pow__(self, e: int) -> UElement:
        out = self.alg.one()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, UElement):
            return NotImplemented
        return self.alg is other.alg and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> set:
        n = self.alg.n
        return {lat.sub(word_degree(e, n), word_degree(f, n)) for f, _, _, e in self.terms}

    def is_homogeneous(self, beta=None) -> bool:
        d = self.degrees()
        if not d:
            return True
        return len(d) == 1 and (beta is None or tuple(beta) in d)

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0][0]) + len(kv[0][3]), kv[0]))

    def to_json(self) -> list:
        return [{"F": [i + 1 for i in f], "K": list(l), "L": list(m), "E": [i + 1 for i in e], "c": str(v)}
                for (f, l, m, e), v in self.sorted_items()]

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (f, l, m, e), v in self.sorted_items():
            s = f"({v})"
            if f:
                s += "F" + "".join(str(i + 1) for i in f)
            if any(l):
                s += f"K{list(l)}"
            if any(m):
                s += f"L{list(m)}"
            if e:
                s += "E" + "".join(str(i + 1) for i in e)
            parts.append(s)
        return " + ".join(parts)


# --- module-level operations ------------------------------------------------

def pairing(alg: UAlgebra, xplus: UElement, xminus: UElement) -> Scalar:
    """tau(X^+, X^-) for X^+ in U^+ K and X^- in U^- L."""
    chi = alg.chi
    total = alg.field.zero
    for (f1, l1, m1, e1), c1 in xplus.terms.items():
        if f1 or any(m1):
            raise ValueError("first argument must be a combination of K_lam E-words")
        de = word_degree(e1, alg.n)
        for (f2, l2, m2, e2), c2 in xminus.terms.items():
            if e2 or any(l2):
                raise ValueError("second argument must be a combination of F-words L_mu")
            if word_degree(f2, alg.n) != de:
                continue
            # K_l E_e = chi(l, de) E_e K_l; tau(X K_l, Y L_m) = chi(l, m) tau(X, Y)
            total = total + c1 * c2 * chi(l1, de) * chi(l1, m2) * alg.pair(e1, f2)
    return total


def build_basis(alg: UAlgebra, beta) -> BasisEntry:
    return alg.basis(beta)


def reduce(alg: UAlgebra, word, sign: str = "+") -> dict:
    return alg.reduce_e(tuple(word)) if sign == "+" else alg.reduce_f(tuple(word))


def multiply(alg: UAlgebra, a: UElement, b: UElement) -> UElement:
    return alg.multiply(a, b)


def shapovalov_project(a: UElement) -> U0Elem:
    alg = a.alg
    return U0Elem(alg.field, alg.n, {(l, m): v for (f, l, m, e), v in a.terms.items() if not f and not e})


def antipode_minus(alg: UAlgebra, y: UElement) -> UElement:
    """S on U^- L: S(F_i) = -F_i L_{-alpha_i}, S(L_mu) = L_{-mu}, antimultiplicative."""
    out = alg.elem()
    for (f, l, m, e), c in y.terms.items():
        if e or any(l):
            raise ValueError("antipode_minus expects F-words times L")
        term = alg.L(lat.neg(m))
        for i in f:
            term = (-(alg.F(i) * alg.L(lat.neg(alg.alpha(i))))) * term
        out = out + term * c
    return out


def apply_hom(src: UAlgebra, tgt: UAlgebra, a: UElement, e_img, f_img, k_img, l_img, cache=None) -> UElement:
    """Apply the algebra map determined by generator images to a (in src)."""
    cache = {} if cache is None else cache

    def word_img(word, kind):
        key = (kind, word)
        hit = cache.get(key)
        if hit is not None:
            return hit
        if not word:
            val = tgt.one()
        else:
            gen = e_img(word[-1]) if kind == "E" else f_img(word[-1])
            val = word_img(word[:-1], kind) * gen
        cache[key] = val
        return val

    out = tgt.elem()
    for (f, l, m, e), c in a.terms.items():
        term = word_img(f, "F") * (k_img(l) * l_img(m)) * word_img(e, "E")
        out = out + term * c
    return out


def omega(alg: UAlgebra, a: UElement) -> UElement:
    """Omega: K_l -> K_{-l}, L_l -> L_{-l}, E_i -> F_i L_{-a_i}, F_i -> K_{-a_i} E_i."""
    n = alg.n
    return apply_hom(
        alg, alg, a,
        lambda i: alg.F(i) * alg.L(lat.neg(lat.unit(n, i))),
        lambda i: alg.K(lat.neg(lat.unit(n, i))) * alg.E(i),
        lambda l: alg.K(lat.neg(l)),
        lambda m: alg.L(lat.neg(m)),
    )


def xi(alg_op: UAlgebra, a: UElement, alg: UAlgebra | None = None) -> UElement:
    """Xi: U(chi^op) -> U(chi), swapping K <-> L and E <-> F."""
    if alg is None:
        alg = get_algebra(lat.opposite(alg_op.chi), alg_op.height_cap, alg_op.root_cap)
    return apply_hom(alg_op, alg, a, alg.F, alg.E, alg.L, alg.K)


# --- Lusztig isomorphisms ---------------------------------------------------

class LusztigMap:
    """T_i: U(tau_i chi) -> U(chi), in the coordinates of the fixed lattice.

    Source weights are coordinates in the reflected basis; basis_map[j] is the
    image of the j-th reflected simple root in target coordinates.
    """

    def __init__(self, chi: Bicharacter, i: int, height_cap: int = 12, ncap: int = 64):
        step = reflect(chi, i, ncap)
        self.i = i
        self.target = get_algebra(chi, height_cap)
        self.source = get_algebra(step.target, height_cap)
        self.basis_map = step.basis_map
        self.cartan_row = step.cartan_row
        self._cache: dict = {}
        self._e: dict = {}
        self._f: dict = {}

    def weight(self, lam) -> tuple:
        return lat.apply_matrix(self.basis_map, lam)

    def image_E(self, j: int) -> UElement:
        if j in self._e:
            return self._e[j]
        t = self.target
        i = self.i
        q = t.chi.q
        if j == i:
            val = t.F(i) * t.L(lat.neg(t.alpha(i)))
        else:
            nij = self.cartan_row[j]
            val = t.elem()
            for k in range(nij + 1):
                c = (-q[i][j]) ** k * q[i][i] ** (k * (k - 1) // 2) * qbinom(nij, k, q[i][i])
                val = val + t.eword((i,) * (nij - k) + (j,) + (i,) * k) * c
        self._e[j] = val
        return val

    def image_F(self, j: int) -> UElement:
        if j in self._f:
            return self._f[j]
        t = self.target
        i = self.i
        q = t.chi.q
        if j == i:
            val = t.K(lat.neg(t.alpha(i))) * t.E(i)
        else:
            nij = self.cartan_row[j]
            den = qfact(nij, q[i][i]) * qshift_fact(nij, q[i][i], q[i][j] * q[j][i])
            val = t.elem()
            for k in range(nij + 1):
                c = (-q[j][i]) ** k * q[i][i] ** (k * (k - 1) // 2) * qbinom(nij, k, q[i][i])
                val = val + t.fword((i,) * (nij - k) + (j,) + (i,) * k) * c
            val = val * den.inverse()
        self._f[j] = val
        return val

    def __call__(self, a: UElement) -> UElement:
        if a.alg is not self.source:
            raise TypeError("element does not live in the source algebra")
        t = self.target
        return apply_hom(self.source, t, a, self.image_E, self.image_F,
                         lambda l: t.K(self.weight(l)), lambda m: t.L(self.weight(m)), self._cache)

    def check_relations(self) -> bool:
        """The generator images satisfy the defining relations of the source."""
        s, t = self.source, self.target
        n = s.n
        chs = s.chi
        for j in range(n):
            ej, fj = self.image_E(j), self.image_F(j)
            for k in range(n):
                lam = lat.unit(n, k)
                kk, ll = t.K(self.weight(lam)), t.L(self.weight(lam))
                aj = lat.unit(n, j)
                if kk * ej != ej * kk * chs(lam, aj):
                    return False
                if ll * ej != ej * ll * chs(lat.neg(aj), lam):
                    return False
                if kk * fj != fj * kk * chs(lam, lat.neg(aj)):
                    return False
                if ll * fj != fj * ll * chs(aj, lam):
                    return False
                comm = ej * self.image_F(k) - self.image_F(k) * ej
                want = t.elem()
                if j == k:
                    want = t.L(self.weight(aj)) - t.K(self.weight(aj))
                if comm != want:
                    return False
        return True


_LUSZTIG: dict = {}


def lusztig_map(chi: Bicharacter, i: int, height_cap: int = 12) -> LusztigMap:
    key = (chi, i)
    if key not in _LUSZTIG:
        _LUSZTIG[key] = LusztigMap(chi, i, height_cap)
    return _LUSZTIG[key]


def lusztig_apply(T: LusztigMap, a: UElement) -> UElement:
    return T(a)


def root_vectors(chi: Bicharacter, rsd: RootSystemData | None = None, height_cap: int = 12):
    """Root vectors E-dot_t, F-dot_t along the longest word, t = 1..theta."""
    if rsd is None:
        rsd = enumerate_roots(chi)
    es, fs = [], []
    word = rsd.longest_word
    objs = rsd.step_bichars
    for t in range(len(word)):
        a = get_algebra(objs[t], height_cap)
        e, f = a.E(word[t]), a.F(word[t])
        for s in range(t - 1, -1, -1):
            T = lusztig_map(objs[s], word[s], height_cap)
            e, f = T(e), T(f)
        if word_degree_of(e) != {rsd.positive_roots[t]}:
            raise VerificationFailed(f"root vector {t + 1} has degrees {word_degree_of(e)}")
        es.append(e)
        fs.append(f)
    return es, fs


def word_degree_of(a: UElement) -> set:
    return a.degrees()


def cartan_matrix_row(chi: Bicharacter, i: int, cap: int = 64) -> list:
    return [cartan_entry(chi, i, j, cap) for j in range(chi.n)]
