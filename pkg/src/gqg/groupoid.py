"""Cartan entries, reflections, the Weyl groupoid and the positive roots of chi.

Indices are 0-based.  A basis map is a list of column images: entry j is
the image of the j-th simple root, written in the coordinates of the
source basis.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field

from . import lattice as lat
from .lattice import Bicharacter
from .scalars import kappa, qfact

DEFAULT_ROOT_CAP = 1024
DEFAULT_OBJECT_CAP = 4096
DEFAULT_N_CAP = 64


class CapExceeded(RuntimeError):
    """A search exceeded its cap; the object is probably infinite."""


def cartan_entry(chi: Bicharacter, i: int, j: int, cap: int = DEFAULT_N_CAP) -> int:
    """N_ij: the largest m with (m)_{q_ii}! (m; q_ii, q_ij q_ji)! != 0; N_ii = -2."""
    if i == j:
        return -2
    qii = chi.q[i][i]
    y = chi.q[i][j] * chi.q[j][i]
    one = chi.field.one
    p = one  # q_ii^(m-1)
    qn = chi.field.zero  # (m)_{q_ii}
    for m in range(1, cap + 2):
        qn = qn + p
        if qn.is_zero() or (one - p * y).is_zero():
            return m - 1
        p = p * qii
    raise CapExceeded(f"N_{i + 1}{j + 1} exceeds cap {cap}")


def cartan_matrix(chi: Bicharacter, cap: int = DEFAULT_N_CAP) -> list:
    """Generalized Cartan matrix c_ij = -N_ij (so c_ii = 2)."""
    return [[-cartan_entry(chi, i, j, cap) for j in range(chi.n)] for i in range(chi.n)]


@dataclass(frozen=True)
class ReflectionStep:
    i: int
    source: Bicharacter
    target: Bicharacter
    basis_map: tuple
    cartan_row: tuple


def reflect(chi: Bicharacter, i: int, cap: int = DEFAULT_N_CAP) -> ReflectionStep:
    n = chi.n
    row = tuple(cartan_entry(chi, i, j, cap) for j in range(n))
    cols = []
    for j in range(n):
        if j == i:
            cols.append(lat.neg(lat.unit(n, i)))
        else:
            cols.append(lat.add(lat.unit(n, j), lat.scale(row[j], lat.unit(n, i))))
    q = [[chi(cols[j], cols[k]) for k in range(n)] for j in range(n)]
    return ReflectionStep(i, chi, Bicharacter(q, chi.field), tuple(cols), row)


@dataclass
class RootSystemData:
    chi: Bicharacter
    positive_roots: list
    longest_word: list
    step_bichars: list  # chi_{f,t} for t = 0..theta (last one is the end object)
    cartan_matrices: list  # Cartan matrix of chi_{f,t}, t = 0..theta-1
    basis_images: list = dc_field(default_factory=list)  # 1s_{f,t}(alpha_j), t = 0..theta

    @property
    def theta(self) -> int:
        return len(self.positive_roots)

    def q_root(self, beta) -> object:
        return self.chi.qq(beta)

    def kappas(self) -> list:
        return [kappa(self.chi.qq(b)) for b in self.positive_roots]

    def index(self, beta) -> int:
        return self.positive_roots.index(tuple(beta))

    def to_json(self) -> dict:
        return {
            "theta": self.theta,
            "positive_roots": [list(b) for b in self.positive_roots],
            "longest_word": [i + 1 for i in self.longest_word],
            "cartan_matrices": self.cartan_matrices,
        }


def enumerate_roots(chi: Bicharacter, cap: int = DEFAULT_ROOT_CAP, ncap: int = DEFAULT_N_CAP) -> RootSystemData:
    """Greedy longest word: at each step take the smallest i whose current simple root is positive."""
    n = chi.n
    cur = chi
    basis = [lat.unit(n, j) for j in range(n)]
    roots, word, objs, cms, images = [], [], [chi], [], [list(basis)]
    while True:
        cand = None
        for i, b in enumerate(basis):
            if lat.is_positive(b):
                cand = i
                break
            if not lat.is_positive(lat.neg(b)):
                raise ValueError(f"simple root image {b} is neither positive nor negative")
        if cand is None:
            break
        if len(roots) >= cap:
            raise CapExceeded(f"more than {cap} positive roots")
        step = reflect(cur, cand, ncap)
        cms.append([[-x for x in (cartan_entry(cur, i, j, ncap) for j in range(n))] for i in range(n)])
        roots.append(basis[cand])
        word.append(cand)
        basis = [lat.apply_matrix(basis, col) for col in step.basis_map]
        cur = step.target
        objs.append(cur)
        images.append(list(basis))
    if len(set(roots)) != len(roots):
        raise ValueError("repeated root in greedy construction")
    return RootSystemData(chi, roots, word, objs, cms, images)


def rank2_mij(chi: Bicharacter, i: int, j: int, cap: int = DEFAULT_ROOT_CAP, ncap: int = DEFAULT_N_CAP) -> int:
    """Number of positive roots in N alpha_i + N alpha_j; checks the alternating-word relation."""
    if i == j:
        return 1
    rsd = enumerate_roots(chi, cap, ncap)
    m = sum(1 for b in rsd.positive_roots
            if all(c == 0 for k, c in enumerate(b) if k not in (i, j)))
    n = chi.n
    cur = chi
    basis = [lat.unit(n, k) for k in range(n)]
    for s in range(2 * m):
        step = reflect(cur, (i, j)[s % 2], ncap)
        basis = [lat.apply_matrix(basis, col) for col in step.basis_map]
        cur = step.target
    if cur != chi or basis != [lat.unit(n, k) for k in range(n)]:
        raise AssertionError(f"(s_i s_j)^{m} is not the identity at chi")
    return m


@dataclass
class GroupoidAtlas:
    objects: list
    arrows: dict  # (object index, i) -> object index
    cartan: list

    def to_json(self) -> dict:
        return {
            "objects": [[[str(x) for x in r] for r in o.q] for o in self.objects],
            "arrows": [[a + 1, i + 1, b + 1] for (a, i), b in sorted(self.arrows.items())],
            "cartan_matrices": self.cartan,
        }


def explore_groupoid(chi: Bicharacter, object_cap: int = DEFAULT_OBJECT_CAP, ncap: int = DEFAULT_N_CAP) -> GroupoidAtlas:
    n = chi.n
    objs = [chi]
    index = {chi: 0}
    arrows = {}
    cartan = [cartan_matrix(chi, ncap)]
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for i in range(n):
            step = reflect(objs[a], i, ncap)
            tgt = step.target
            if tgt not in index:
                if len(objs) >= object_cap:
                    raise CapExceeded(f"more than {object_cap} objects")
                index[tgt] = len(objs)
                objs.append(tgt)
                cartan.append(cartan_matrix(tgt, ncap))
                queue.append(index[tgt])
            b = index[tgt]
            arrows[(a, i)] = b
    for (a, i), b in arrows.items():
        if arrows[(b, i)] != a:
            raise AssertionError("tau_i is not an involution")
        if cartan[a][i] != cartan[b][i]:
            raise AssertionError("axiom (C2) fails")
    for c in cartan:
        for i in range(n):
            for j in range(n):
                if i != j and (c[i][j] > 0 or (c[i][j] == 0) != (c[j][i] == 0)):
                    raise AssertionError("not a generalized Cartan matrix")
    return GroupoidAtlas(objs, arrows, cartan)


def _walk(chi: Bicharacter, word, ncap: int = DEFAULT_N_CAP):
    n = chi.n
    cur = chi
    basis = [lat.unit(n, k) for k in range(n)]
    for i in word:
        if not 0 <= i < n:
            raise ValueError(f"letter {i} is not composable here")
        step = reflect(cur, i, ncap)
        basis = [lat.apply_matrix(basis, col) for col in step.basis_map]
        cur = step.target
    return cur, basis


def length(chi: Bicharacter, word, ncap: int = DEFAULT_N_CAP) -> int:
    """Length of the morphism given by word, counted as an inversion set."""
    end, basis = _walk(chi, word, ncap)
    rsd_end = enumerate_roots(end, ncap=ncap)
    inv = 0
    for beta in rsd_end.positive_roots:
        img = lat.apply_matrix(basis, beta)
        if lat.is_positive(lat.neg(img)):
            inv += 1
    # cross-check: the exchange rule l(w s_i) = l(w) +- 1
    n = chi.n
    cur, b = chi, [lat.unit(n, k) for k in range(n)]
    ell = 0
    for i in word:
        ell += 1 if lat.is_positive(b[i]) else -1
        step = reflect(cur, i, ncap)
        b = [lat.apply_matrix(b, col) for col in step.basis_map]
        cur = step.target
    if ell != inv:
        raise AssertionError(f"inversion count {inv} disagrees with exchange count {ell}")
    return inv


def root_multisets(rsd: RootSystemData, chi: Bicharacter, beta, alpha=None, tmin: int = 0) -> list:
    """Maps c: R+ -> N (as tuples aligned with rsd.positive_roots) with sum c(a) a = beta.

    Each c(a) must satisfy (c(a))_{q_a}! != 0.  With alpha given, also c(alpha) >= tmin.
    """
    beta = tuple(beta)
    roots = rsd.positive_roots
    bounds = []
    for a in roots:
        k = kappa(chi.qq(a))
        bounds.append(k - 1 if k >= 2 else None)
    if not lat.is_nonneg(beta):
        return []
    aidx = roots.index(tuple(alpha)) if alpha is not None else None
    out = []

    def rec(k, rem, acc):
        if k == len(roots):
            if not any(rem):
                out.append(tuple(acc))
            return
        a = roots[k]
        top = min((r // x for r, x in zip(rem, a) if x > 0), default=0)
        if bounds[k] is not None:
            top = min(top, bounds[k])
        lo = tmin if k == aidx else 0
        for c in range(lo, top + 1):
            rec(k + 1, tuple(r - c * x for r, x in zip(rem, a)), acc + [c])

    rec(0, beta, [])
    # sanity: admissibility via q-factorials
    for c in out:
        for a, v in zip(roots, c):
            assert not qfact(v, chi.qq(a)).is_zero()
    return sorted(out)
