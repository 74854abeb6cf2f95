"""Weights in Z^n, bicharacters chi, the homomorphisms eta and rho-hat, characters of U^0.

Weights are plain integer tuples in the coordinates of the fixed basis
(alpha_1, ..., alpha_n).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .scalars import Field, ParseError, Scalar, parse_scalar


class RankMismatch(ValueError):
    pass


Weight = tuple


def zero(n: int) -> Weight:
    return (0,) * n


def unit(n: int, i: int) -> Weight:
    return tuple(1 if j == i else 0 for j in range(n))


def add(a: Weight, b: Weight) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Weight, b: Weight) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


def neg(a: Weight) -> Weight:
    return tuple(-x for x in a)


def scale(c: int, a: Weight) -> Weight:
    return tuple(c * x for x in a)


def height(a: Weight) -> int:
    return sum(a)


def is_nonneg(a: Weight) -> bool:
    return all(x >= 0 for x in a)


def is_positive(a: Weight) -> bool:
    return is_nonneg(a) and any(a)


def apply_matrix(m, a: Weight) -> Weight:
    """m is a list of column images: a = sum a_j e_j maps to sum a_j m[j]."""
    out = [0] * len(m[0])
    for aj, col in zip(a, m):
        if aj:
            for k, c in enumerate(col):
                out[k] += aj * c
    return tuple(out)


class Bicharacter:
    """chi(alpha_i, alpha_j) = q[i][j], extended bimultiplicatively."""

    __slots__ = ("q", "n", "field", "_key", "_h")

    def __init__(self, q, field: Field | None = None):
        rows = [list(r) for r in q]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise RankMismatch("q must be a nonempty square matrix")
        if field is None:
            field = next(x.field for r in rows for x in r if isinstance(x, Scalar))
        self.q = tuple(tuple(field(x) for x in r) for r in rows)
        if any(x.is_zero() for r in self.q for x in r):
            raise ValueError("bicharacter entries must be nonzero")
        self.n = n
        self.field = field
        self._key = (field.n, self.q)
        self._h = hash(self._key)

    def __eq__(self, other):
        return self is other or (isinstance(other, Bicharacter) and self._h == other._h and self._key == other._key)

    def __hash__(self):
        return self._h

    def __repr__(self):
        return f"Bicharacter({[[str(x) for x in r] for r in self.q]}, {self.field!r})"

    def __call__(self, lam: Weight, mu: Weight) -> Scalar:
        return bichar_eval(self, lam, mu)

    def qq(self, beta: Weight) -> Scalar:
        """q_beta = chi(beta, beta)."""
        return bichar_eval(self, beta, beta)

    def to_json(self) -> dict:
        return {"rank": self.n, "field": self.field.to_json(),
                "q": [[str(x) for x in r] for r in self.q]}

    @classmethod
    def from_json(cls, obj: dict) -> Bicharacter:
        try:
            field = Field.from_json(obj["field"])
            q = obj["q"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bicharacter needs 'field' and 'q': {exc}") from exc
        if "rank" in obj and obj["rank"] != len(q):
            raise RankMismatch("declared rank disagrees with q")
        return cls([[parse_scalar(x, field) for x in r] for r in q], field)


@lru_cache(maxsize=1 << 16)
def bichar_eval(chi: Bicharacter, lam: Weight, mu: Weight) -> Scalar:
    if len(lam) != chi.n or len(mu) != chi.n:
        raise RankMismatch(f"weights of rank {len(lam)}, {len(mu)} for chi of rank {chi.n}")
    out = chi.field.one
    for i, li in enumerate(lam):
        if li:
            for j, mj in enumerate(mu):
                if mj:
                    out = out * chi.q[i][j] ** (li * mj)
    return out


def opposite(chi: Bicharacter) -> Bicharacter:
    return Bicharacter([[chi.q[j][i] for j in range(chi.n)] for i in range(chi.n)], chi.field)


def rho_hat(chi: Bicharacter, beta: Weight) -> Scalar:
    """rho-hat(beta) = prod_j q_jj^(beta_j)."""
    out = chi.field.one
    for j, b in enumerate(beta):
        if b:
            out = out * chi.q[j][j] ** b
    return out


@dataclass(frozen=True)
class EtaHom:
    """A homomorphism Z^n -> K^x given by its values on the alpha_i."""

    values: tuple

    def __call__(self, beta: Weight) -> Scalar:
        out = self.values[0].field.one
        for v, b in zip(self.values, beta):
            if b:
                out = out * v ** b
        return out

    @classmethod
    def trivial(cls, field: Field, n: int) -> EtaHom:
        return cls(tuple(field.one for _ in range(n)))

    @property
    def field(self) -> Field:
        return self.values[0].field

    def is_trivial(self) -> bool:
        return all(v.is_one() for v in self.values)

    def pullback(self, basis) -> EtaHom:
        """eta restricted along a basis change: new value on e_j is eta(basis[j])."""
        return EtaHom(tuple(self(b) for b in basis))

    def to_json(self) -> dict:
        return {"eta": [str(v) for v in self.values]}

    @classmethod
    def from_json(cls, obj, field: Field) -> EtaHom:
        vals = obj["eta"] if isinstance(obj, dict) else obj
        return cls(tuple(parse_scalar(v, field) for v in vals))


def eta_shift(eta: EtaHom, chi: Bicharacter, lam: Weight, mu: Weight, beta: Weight) -> Scalar:
    """eta(beta) chi(beta, mu) / chi(lam, beta)."""
    return eta(beta) * chi(beta, mu) / chi(lam, beta)


@dataclass(frozen=True)
class CharacterU0:
    """Lambda(K_{alpha_i}) = kvals[i], Lambda(L_{alpha_i}) = lvals[i]."""

    kvals: tuple
    lvals: tuple

    def __call__(self, lam: Weight, mu: Weight) -> Scalar:
        return character_eval(self, lam, mu)

    @property
    def field(self) -> Field:
        return self.kvals[0].field

    def to_json(self) -> dict:
        return {"K": [str(v) for v in self.kvals], "L": [str(v) for v in self.lvals]}

    @classmethod
    def from_json(cls, obj: dict, field: Field) -> CharacterU0:
        return cls(tuple(parse_scalar(v, field) for v in obj["K"]),
                   tuple(parse_scalar(v, field) for v in obj["L"]))


def character_eval(lam_char: CharacterU0, lam: Weight, mu: Weight) -> Scalar:
    out = lam_char.field.one
    for v, e in zip(lam_char.kvals, lam):
        if e:
            out = out * v ** e
    for v, e in zip(lam_char.lvals, mu):
        if e:
            out = out * v ** e
    return out
