"""Command-line front end: job parsing, presets, the on-disk cache and reports.

Reports are JSON with 1-based indices for simple roots, letters and root
positions.  Weights are written as coefficient lists in the simple roots.
"""
from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field as dc_field

from . import lattice as lat
from .algebra import RankMismatchError, U0Elem, VerificationFailed, get_algebra
from .groupoid import CapExceeded, enumerate_roots, explore_groupoid, rank2_mij, root_multisets
from .hc import HCWindow, IntegralityFailed, NotInB, reconstruct_center, solve_B_eta, verify_skew_central
from .lattice import Bicharacter, CharacterU0, EtaHom, opposite, rho_hat
from .rank1 import InternalInconsistency, RankOneCtx, central_candidate, classify_center, is_skew_central, lusztig_shift_check, solve_center, spanning_dimension
from .scalars import Field, ParseError, detect_field, kappa, parse_scalar
from .verma import HypothesisViolated, hyperplane_character, hyperplane_value, rank_bound_check, shapovalov_det_verify, singular_vector, verma_radical

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SCHEMA = "gqg-report/1"
COMMANDS = ("roots", "groupoid", "pbw-dims", "shapovalov", "singular", "radical",
            "center-rank1", "hc-solve", "center-lift", "verify-all")
DEFAULT_ROOT_CAP = 1024
DEFAULT_HEIGHT_CAP = 12
DEFAULT_BOX = 4

PRESETS = {
    "A1-generic": ({"rational_function": True}, [["t"]]),
    "A1-zeta3": ({"cyclotomic": 3}, [["z"]]),
    "A2-generic": ({"rational_function": True}, [["t^2", "t^-1"], ["t^-1", "t^2"]]),
    "A2-zeta3": ({"cyclotomic": 3}, [["z", "z"], ["z", "z"]]),
    "B2-preset": ({"rational_function": True}, [["t^2", "t^-1"], ["t^-1", "t"]]),
}


class ValidationError(ValueError):
    def __init__(self, fieldname: str, msg: str):
        super().__init__(f"{fieldname}: {msg}")
        self.fieldname = fieldname


class MathFailure(RuntimeError):
    """Carries a partial report when a verification fails."""


@dataclass
class JobSpec:
    command: str
    field: Field
    q: list
    preset: str | None = None
    eta: list | None = None
    lam: dict | None = None
    window: dict = dc_field(default_factory=dict)
    caps: dict = dc_field(default_factory=dict)
    params: dict = dc_field(default_factory=dict)
    output: str | None = None
    cache: str | None = None

    @property
    def chi(self) -> Bicharacter:
        return Bicharacter(self.q, self.field)

    def echo(self) -> dict:
        out = {"command": self.command, "field": self.field.to_json(),
               "q": [[str(x) for x in r] for r in self.q],
               "caps": self.caps, "box": self.window.get("box")}
        if self.preset:
            out["preset"] = self.preset
        if self.eta is not None:
            out["eta"] = [str(x) for x in self.eta]
        if self.lam is not None:
            out["lambda"] = {k: [str(x) for x in v] for k, v in self.lam.items()}
        if self.window.get("seeds") is not None:
            out["seeds"] = self.window["seeds"]
        if self.params:
            out["params"] = self.params
        return out


# --- parsing ------------------------------------------------------------------

def _field_from(obj, literals) -> Field:
    if obj is None:
        try:
            return detect_field(literals)
        except (ParseError, ValueError) as exc:
            raise ValidationError("field", str(exc)) from exc
    if isinstance(obj, str):
        if obj in ("rational", "rational_function", "Q(t)"):
            return Field.rational()
        if obj.startswith("cyclotomic:"):
            return Field.cyclotomic(int(obj.split(":", 1)[1]))
        raise ValidationError("field", f"unknown field {obj!r}")
    if isinstance(obj, dict):
        if "cyclotomic" in obj:
            n = obj["cyclotomic"]
            if not isinstance(n, int) or n < 1:
                raise ValidationError("field", "cyclotomic order must be a positive integer")
            return Field.cyclotomic(n)
        if obj.get("rational_function"):
            return Field.rational()
    raise ValidationError("field", f"cannot read field spec {obj!r}")


def _literals(x) -> list:
    if isinstance(x, list):
        return [s for y in x for s in _literals(y)]
    if isinstance(x, dict):
        return [s for y in x.values() for s in _literals(y)]
    return [str(x)]


def _scalar(text, fld, name):
    try:
        return parse_scalar(str(text), fld)
    except (ParseError, ValueError, TypeError) as exc:
        raise ValidationError(name, str(exc)) from exc


def load_job_text(text: str, source: str = "<job>") -> dict:
    s = text.lstrip()
    if s.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"{source}: {exc}") from exc


def parse_job(raw: dict) -> JobSpec:
    if not isinstance(raw, dict):
        raise ValidationError("job", "top level must be an object")
    command = raw.get("command")
    if command not in COMMANDS:
        raise ValidationError("command", f"expected one of {', '.join(COMMANDS)}")
    preset = raw.get("preset")
    fobj, q = raw.get("field"), raw.get("q")
    if preset is not None:
        if preset not in PRESETS:
            raise ValidationError("preset", f"unknown preset {preset!r}")
        pf, pq = PRESETS[preset]
        fobj = fobj if fobj is not None else pf
        q = q if q is not None else pq
    if q is None:
        raise ValidationError("q", "missing q matrix")
    if not isinstance(q, list) or not q or any(not isinstance(r, list) or len(r) != len(q) for r in q):
        raise ValidationError("q", "q must be a nonempty square matrix")
    lits = _literals(q) + _literals(raw.get("eta", [])) + _literals(raw.get("lambda", {}))
    syms = {c for s in lits for c in s if c.isalpha()}
    if len(syms) > 1:
        raise ValidationError("q", f"mixed generator symbols {sorted(syms)}")
    fld = _field_from(fobj, lits)
    qm = [[_scalar(x, fld, "q") for x in r] for r in q]
    if any(x.is_zero() for r in qm for x in r):
        raise ValidationError("q", "entries must be nonzero")
    n = len(qm)
    eta = None
    if raw.get("eta") is not None:
        e = raw["eta"]
        if not isinstance(e, list) or len(e) != n:
            raise ValidationError("eta", f"need {n} values")
        eta = [_scalar(x, fld, "eta") for x in e]
        if any(x.is_zero() for x in eta):
            raise ValidationError("eta", "values must be nonzero")
    lam = None
    if raw.get("lambda") is not None:
        lo = raw["lambda"]
        if not isinstance(lo, dict) or set(lo) != {"K", "L"} or any(len(lo[k]) != n for k in lo):
            raise ValidationError("lambda", f"need {{'K': [{n} values], 'L': [{n} values]}}")
        lam = {k: [_scalar(x, fld, "lambda") for x in lo[k]] for k in ("K", "L")}
    caps = {"roots": raw.get("cap_roots", DEFAULT_ROOT_CAP), "height": raw.get("cap_height", DEFAULT_HEIGHT_CAP)}
    for k, v in caps.items():
        if not isinstance(v, int) or v <= 0:
            raise ValidationError(f"cap_{k}", "caps must be positive integers")
    box = raw.get("box", DEFAULT_BOX)
    if not isinstance(box, int) or box < 0:
        raise ValidationError("box", "box radius must be a nonnegative integer")
    seeds = raw.get("seeds")
    if seeds is not None:
        try:
            seeds = [[[int(c) for c in lamw], [int(c) for c in muw]] for lamw, muw in seeds]
        except (TypeError, ValueError) as exc:
            raise ValidationError("seeds", "seeds are pairs of integer weight lists") from exc
        if any(len(a) != n or len(b) != n for a, b in seeds):
            raise ValidationError("seeds", f"weights must have {n} coordinates")
    params = {k: raw[k] for k in ("degree", "max_height", "m", "t", "root", "pair", "k", "P", "sample_seed", "samples")
              if k in raw}
    return JobSpec(command, fld, qm, preset, eta, lam, {"box": box, "seeds": seeds}, caps, params,
                   raw.get("output"), raw.get("cache"))


# --- cache --------------------------------------------------------------------

class Cache:
    """Content-addressed JSON store; problems degrade to cache-off with a warning."""

    def __init__(self, root: str | None):
        self.root = root
        self.hits = 0
        self.misses = 0
        self.warnings: list = []
        self.enabled = root is not None
        if self.enabled:
            try:
                os.makedirs(root, exist_ok=True)
            except OSError as exc:
                self._off(f"cache directory unusable ({exc})")

    def _off(self, msg):
        self.enabled = False
        self.warnings.append(msg)
        print(f"warning: {msg}; continuing without cache", file=sys.stderr)

    @staticmethod
    def key_of(obj) -> str:
        return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()

    def _path(self, h):
        return os.path.join(self.root, h[:2], h + ".json")

    def get(self, key):
        if not self.enabled:
            return None
        h = self.key_of(key)
        try:
            with open(self._path(h)) as fh:
                entry = json.load(fh)
            if entry.get("key") != key or entry.get("digest") != self.key_of(entry.get("value")):
                raise ValueError("digest mismatch")
        except FileNotFoundError:
            self.misses += 1
            return None
        except (OSError, ValueError, TypeError, AttributeError):
            self.misses += 1
            return None  # corrupt: recomputed and overwritten by put
        self.hits += 1
        return entry["value"]

    def put(self, key, value):
        if not self.enabled:
            return
        h = self.key_of(key)
        path = self._path(h)
        try:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            tmp = path + ".tmp"
            with open(tmp, "w") as fh:
                json.dump({"key": key, "value": value, "digest": self.key_of(value)}, fh, sort_keys=True)
            os.replace(tmp, path)
        except OSError as exc:
            self._off(f"cannot write cache ({exc})")


def _chi_key(chi: Bicharacter) -> dict:
    return {"field": chi.field.to_json(), "q": [[str(x) for x in r] for r in chi.q]}


def cached_basis(cache: Cache, chi: Bicharacter, beta):
    alg = get_algebra(chi)
    beta = tuple(beta)
    if beta in alg._basis:
        return alg.basis(beta)
    key = dict(_chi_key(chi), kind="pbw-basis", degree=list(beta))
    hit = cache.get(key)
    if hit is not None:
        try:
            alg.install_basis(beta, hit["e"], hit["f"])
            return alg.basis(beta)
        except (RankMismatchError, KeyError, TypeError, ValueError):
            cache.hits -= 1
            cache.misses += 1
    entry = alg.basis(beta)
    cache.put(key, {"e": [list(w) for w in entry.ewords], "f": [list(w) for w in entry.fwords]})
    return entry


# --- commands -----------------------------------------------------------------

def _w(a) -> list:
    return list(a)


def _degrees_upto(n, h):
    for tot in range(1, h + 1):
        for c in itertools.product(range(tot + 1), repeat=n):
            if sum(c) == tot:
                yield c


def _rsd(job: JobSpec):
    alg = get_algebra(job.chi, job.caps["height"], job.caps["roots"])
    rsd = enumerate_roots(job.chi, cap=job.caps["roots"])
    return alg, rsd


def cmd_roots(job, cache, notes):
    chi = job.chi
    rsd = enumerate_roots(chi, cap=job.caps["roots"])
    out = rsd.to_json()
    out["q_root"] = [str(chi.qq(b)) for b in rsd.positive_roots]
    out["kappa"] = rsd.kappas()
    out["rho_hat"] = [str(rho_hat(chi, b)) for b in rsd.positive_roots]
    return out


def cmd_groupoid(job, cache, notes):
    chi = job.chi
    atlas = explore_groupoid(chi)
    out = atlas.to_json()
    if chi.n >= 2:
        out["m_ij"] = [[rank2_mij(chi, i, j, cap=job.caps["roots"]) for j in range(chi.n)] for i in range(chi.n)]
    out["identity"] = "tau_i is an involution and c_ij(chi) = c_ij(tau_i chi) on every object"
    return out


def cmd_pbw_dims(job, cache, notes):
    alg, rsd = _rsd(job)
    h = job.params.get("max_height", 4)
    rows = []
    for beta in _degrees_upto(job.chi.n, h):
        entry = cached_basis(cache, job.chi, beta)
        expected = len(root_multisets(rsd, job.chi, beta))
        if entry.dim != expected:
            raise VerificationFailed(f"degree {beta}: {entry.dim} != {expected}")
        rows.append({"degree": _w(beta), "dim": entry.dim, "root_multisets": expected,
                     "basis": [[i + 1 for i in w] for w in entry.ewords]})
    return {"max_height": h, "degrees": rows, "identity": "rank of the pairing Gram matrix = number of root multisets"}


def cmd_shapovalov(job, cache, notes):
    alg, rsd = _rsd(job)
    degs = [tuple(job.params["degree"])] if "degree" in job.params else list(_degrees_upto(job.chi.n, job.params.get("max_height", 3)))
    reports = []
    for beta in degs:
        if cached_basis(cache, job.chi, beta).dim == 0:
            continue
        reports.append(shapovalov_det_verify(job.chi, beta, rsd))
    return {"checks": reports}


def _character(job, rsd, alpha=None, t=None) -> CharacterU0:
    if job.lam is not None:
        return CharacterU0(tuple(job.lam["K"]), tuple(job.lam["L"]))
    if alpha is None:
        raise ValidationError("lambda", "a character is required")
    rng = random.Random(job.params.get("sample_seed", 0))
    return hyperplane_character(job.chi, alpha, t, rng)


def _char_json(lam: CharacterU0) -> dict:
    return lam.to_json()


def cmd_singular(job, cache, notes):
    alg, rsd = _rsd(job)
    m = job.params.get("m", 1)
    t = job.params.get("t", 1)
    if not 1 <= m <= rsd.theta:
        raise ValidationError("m", f"must lie in 1..{rsd.theta}")
    lam = _character(job, rsd, rsd.positive_roots[m - 1], t)
    v = singular_vector(job.chi, rsd, m, t, lam)
    return {"m": m, "t": t, "root": _w(rsd.positive_roots[m - 1]), "lambda": _char_json(lam),
            "vector": v.to_json(), "nonzero": True, "killed_by_all_E": True,
            "identity": "v' != 0 and E_j v' = 0 for all j"}


def cmd_radical(job, cache, notes):
    alg, rsd = _rsd(job)
    if "degree" not in job.params:
        raise ValidationError("degree", "radical needs a degree")
    beta = tuple(job.params["degree"])
    lam = _character(job, rsd)
    cached_basis(cache, job.chi, beta)
    basis = verma_radical(job.chi, lam, beta)
    return {"degree": _w(beta), "lambda": _char_json(lam), "dim_M": alg.dim(beta),
            "dim_N": len(basis), "dim_L": alg.dim(beta) - len(basis),
            "basis": [b.to_json() for b in basis],
            "identity": "N(Lambda)_{-beta} = kernel of Lambda(Shapovalov matrix)"}


def cmd_center_rank1(job, cache, notes):
    if job.chi.n != 1:
        raise ValidationError("q", "center-rank1 needs a 1x1 q matrix")
    q = job.q[0][0]
    eta = job.eta[0] if job.eta else job.field.one
    ctx = RankOneCtx(q, eta)
    lam, mu = job.params.get("pair", [0, 1])
    k = job.params.get("k", 1)
    elem, flag = central_candidate(ctx, lam, mu, k)
    verdict = is_skew_central(ctx, elem)
    box = job.window["box"]
    cl = classify_center(ctx, box, box)
    solver = len(solve_center(ctx, box, box))
    span = spanning_dimension(ctx, box, box)
    if solver != span:
        raise VerificationFailed(f"solver dimension {solver} differs from the classification {span}")
    notes.append(f"classification truncated to |lam|, |mu| <= {box} and layer index <= {ctx.mmax(box)}")
    return {"q": str(q), "eta": str(eta), "kappa": ctx.kappa, "pair": [lam, mu], "k": k,
            "layers": elem.to_json(), "criterion": flag, "skew_central": verdict,
            "classification": {"Z'": [list(lbl[1:]) for lbl, _ in cl["Z'"]],
                               "Z''": [list(lbl[1:]) for lbl, _ in cl["Z''"]],
                               "solver_dim": solver, "spanning_dim": span}}


def _eta(job) -> EtaHom:
    if job.eta is None:
        return EtaHom.trivial(job.field, job.chi.n)
    return EtaHom(tuple(job.eta))


def _window(job, rsd) -> HCWindow:
    n = job.chi.n
    seeds = job.window.get("seeds") or [[[0] * n, [0] * n]]
    return HCWindow.build(rsd, [(tuple(a), tuple(b)) for a, b in seeds], job.window["box"])


def cmd_hc_solve(job, cache, notes):
    alg, rsd = _rsd(job)
    w = _window(job, rsd)
    sols = solve_B_eta(job.chi, rsd, _eta(job), w)
    notes.append(w.to_json()["truncation"])
    return {"window": w.to_json(), "dim": len(sols), "basis": [s.to_json() for s in sols],
            "identity": "nullspace of the truncated Harish-Chandra equations"}


def _p_from(job, raw) -> U0Elem:
    terms = {}
    for lamw, muw, c in raw:
        terms[(tuple(lamw), tuple(muw))] = _scalar(c, job.field, "P")
    return U0Elem(job.field, job.chi.n, terms)


def cmd_center_lift(job, cache, notes):
    alg, rsd = _rsd(job)
    eta = _eta(job)
    if "P" in job.params:
        ps = [_p_from(job, job.params["P"])]
    else:
        w = _window(job, rsd)
        notes.append(w.to_json()["truncation"])
        ps = [s.to_u0(job.field, job.chi.n) for s in solve_B_eta(job.chi, rsd, eta, w)]
    out = []
    for p in ps:
        sc = reconstruct_center(job.chi, rsd, eta, p)
        out.append(sc.to_json())
    return {"lifts": out, "identity": "V E_i = eta(a_i) E_i V, V F_i = eta(-a_i) F_i V, Sh(V) = P"}


def verify_all(job, cache, notes) -> dict:
    chi = job.chi
    checks = []

    def record(name, fn):
        try:
            res = fn()
            checks.append({"check": name, "pass": True, **({"detail": res} if res is not None else {})})
        except (VerificationFailed, RankMismatchError, IntegralityFailed, InternalInconsistency, AssertionError,
                NotInB, HypothesisViolated) as exc:
            checks.append({"check": name, "pass": False, "error": f"{type(exc).__name__}: {exc}"})

    rsd = enumerate_roots(chi, cap=job.caps["roots"])
    n = chi.n
    record("roots", lambda: {"theta": rsd.theta, "positive_roots": [_w(b) for b in rsd.positive_roots]})
    record("groupoid", lambda: {"objects": len(explore_groupoid(chi).objects)})

    def pbw():
        for beta in _degrees_upto(n, 5 if n == 1 else 4):
            if cached_basis(cache, chi, beta).dim != len(root_multisets(rsd, chi, beta)):
                raise VerificationFailed(f"PBW dimension mismatch at {beta}")
        return None
    record("pbw-dims", pbw)

    def sym():
        op = get_algebra(opposite(chi))
        for beta in _degrees_upto(n, 4):
            if get_algebra(chi).dim(beta) != op.dim(beta):
                raise VerificationFailed(f"dim U+ differs from dim U+(chi^op) at {beta}")
        return None
    record("opposite-dims", sym)

    def shap():
        for beta in _degrees_upto(n, 4 if n == 1 else 3):
            if get_algebra(chi).dim(beta):
                shapovalov_det_verify(chi, beta, rsd)
        return None
    record("shapovalov", shap)

    if n == 1:
        ctx = RankOneCtx(chi.q[0][0], job.field.one)

        def r1():
            c, flag = central_candidate(ctx, 0, 1, 1)
            if not (flag and is_skew_central(ctx, c)):
                raise VerificationFailed("C_1(0, alpha; 1) is not central")
            if len(solve_center(ctx, 3, 3)) != spanning_dimension(ctx, 3, 3):
                raise VerificationFailed("rank-one classification mismatch")
            src = RankOneCtx(ctx.q, ctx.eta.inverse())
            for part in classify_center(src, 3, 3).values():
                for _, e in part:
                    if not lusztig_shift_check(ctx, e):
                        raise VerificationFailed("rank-one shift identity fails")
            return None
        record("rank-one-center", r1)

    if all(kappa(chi.qq(b)) >= 2 for b in rsd.positive_roots):
        def sing():
            rng = random.Random(0)
            count = 0
            for m, b in enumerate(rsd.positive_roots, 1):
                for t in range(1, kappa(chi.qq(b))):
                    lam = hyperplane_character(chi, b, t, rng)
                    ok = all(not hyperplane_value(chi, lam, rsd.positive_roots[mp - 1], tp).is_zero()
                             for mp in range(1, m) for tp in range(1, kappa(chi.qq(rsd.positive_roots[mp - 1]))))
                    if ok:
                        singular_vector(chi, rsd, m, t, lam)
                        count += 1
            return {"constructed": count}
        record("singular-vectors", sing)

        def rb():
            a = rsd.positive_roots[0]
            return rank_bound_check(chi, lat.add(a, a), a, 1, samples=5, rsd=rsd)["ranks"]
        record("rank-bound", rb)

    def lift():
        eta = EtaHom.trivial(job.field, n)
        w = HCWindow.build(rsd, [(lat.zero(n), lat.zero(n))], 1)
        sols = solve_B_eta(chi, rsd, eta, w)
        for s in sols:
            sc = reconstruct_center(chi, rsd, eta, s.to_u0(job.field, n))
            if not verify_skew_central(chi, sc.element, eta):
                raise VerificationFailed("lift is not skew central")
        return {"window_dim": len(sols)}
    record("center-lift", lift)
    ok = all(c["pass"] for c in checks)
    if not ok:
        raise MathFailure(json.dumps({"checks": checks}))
    return {"checks": checks, "all_pass": ok}


DISPATCH = {
    "roots": cmd_roots, "groupoid": cmd_groupoid, "pbw-dims": cmd_pbw_dims, "shapovalov": cmd_shapovalov,
    "singular": cmd_singular, "radical": cmd_radical, "center-rank1": cmd_center_rank1,
    "hc-solve": cmd_hc_solve, "center-lift": cmd_center_lift, "verify-all": verify_all,
}

MATH_ERRORS = (VerificationFailed, RankMismatchError, CapExceeded, IntegralityFailed, InternalInconsistency,
               NotInB, HypothesisViolated, AssertionError, MathFailure)


def run(job: JobSpec, cache: Cache | None = None, stats: bool = False) -> tuple:
    """Returns (exit code, report dict)."""
    cache = cache or Cache(job.cache)
    notes: list = []
    t0 = time.perf_counter()
    report = {"schema": SCHEMA, "job": job.echo()}
    try:
        report["results"] = DISPATCH[job.command](job, cache, notes)
        code = 0
    except MathFailure as exc:
        report["results"] = json.loads(str(exc))
        report["failure"] = "verification failed"
        code = 1
    except CapExceeded as exc:
        report["failure"] = f"CapExceeded: {exc}"
        report["diagnosis"] = "the root system or groupoid is probably infinite, or the cap is too small"
        code = 1
    except MATH_ERRORS as exc:
        report["failure"] = f"{type(exc).__name__}: {exc}"
        code = 1
    if notes:
        report["notices"] = notes
    if stats:
        report["stats"] = {"seconds": round(time.perf_counter() - t0, 3),
                           "cache_hits": cache.hits, "cache_misses": cache.misses}
    if cache.warnings:
        report["cache_warnings"] = cache.warnings
    return code, report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gqg", description="Generalized quantum groups: roots, PBW bases, "
                                "Shapovalov determinants and skew centers, in exact arithmetic.")
    p.add_argument("command", nargs="?", choices=COMMANDS, help="overrides the job's command")
    p.add_argument("--job", help="JSON or TOML job file ('-' for stdin)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--cache", help="cache directory (GQG_CACHE overrides)")
    p.add_argument("--cap-roots", type=int)
    p.add_argument("--cap-height", type=int)
    p.add_argument("--box", type=int, help="window box radius")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--eta", help="JSON list of eta values on the simple roots")
    p.add_argument("--stats", action="store_true", help="add timing and cache counters to the report")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.job:
            text = sys.stdin.read() if args.job == "-" else open(args.job).read()
            raw = load_job_text(text, args.job)
        else:
            raw = {}
        if args.command:
            raw["command"] = args.command
        if args.preset:
            raw["preset"] = args.preset
        if args.cap_roots is not None:
            raw["cap_roots"] = args.cap_roots
        if args.cap_height is not None:
            raw["cap_height"] = args.cap_height
        if args.box is not None:
            raw["box"] = args.box
        if args.eta:
            raw["eta"] = json.loads(args.eta)
        if args.cache:
            raw["cache"] = args.cache
        if os.environ.get("GQG_CACHE"):
            raw["cache"] = os.environ["GQG_CACHE"]
        job = parse_job(raw)
    except (OSError, ParseError, ValidationError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    code, report = run(job, stats=args.stats)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    out = args.out or job.output
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
