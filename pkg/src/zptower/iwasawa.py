"""Iwasawa invariants of a tower and an end-to-end check of the valuation formula.

Two routes lead to (mu, lambda):

* preparation: Weierstrass-prepare L_rho(T, 1);
* fit: solve v_p(h_n) = mu p^n + lambda n + nu from consecutive differences.

``verify_theorem`` recomputes every level independently and records, per
level, whether v_p(L(chi_n, 1)) = mu + lambda / (p^{n-1}(p-1)) holds exactly.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .errors import CheckFailed, PrecisionError, SpecError
from .lfun import (
    conjugate_product, l_at_one, l_rho_at_one, newton_polygon, ramification_lower_bound,
    specialize, tadic_l, ZpPoly,
)
from .padic import CycloRing, cyclo_substitute, cyclo_valuation, ramification_index, units_mod
from .tower import TowerSpec, spec_from_dict, spec_to_dict
from .tseries import TSeries, weierstrass_prepare


@dataclass(frozen=True)
class IwasawaInvariants:
    mu: int
    lam: int
    nu: int | None = None
    source: str = "prep"
    stable: bool = False


def invariants_from_prep(L1: TSeries) -> IwasawaInvariants:
    prep = weierstrass_prepare(L1)
    return IwasawaInvariants(prep.mu, prep.lam, None, "prep", False)


def invariants_from_fit(vals: Sequence, p: int) -> IwasawaInvariants:
    """Fit v_n = mu p^n + lambda n + nu to values v_0, v_1, ... (at least four).

    (mu, lambda) come from the last two differences; an earlier difference
    must agree before the fit is accepted.
    """
    v = [Fraction(x) for x in vals]
    if len(v) < 4:
        raise ValueError("the fit needs at least four consecutive values")
    delta = [b - a for a, b in zip(v, v[1:])]
    i = len(delta) - 2
    mu = (delta[i + 1] - delta[i]) / ((p - 1) ** 2 * p**i)
    lam = delta[i] - mu * p**i * (p - 1)
    if mu.denominator != 1 or lam.denominator != 1 or mu < 0 or lam < 0:
        raise ArithmeticError("not yet in the stable range: non-integral or negative solution")
    if delta[i - 1] != mu * p ** (i - 1) * (p - 1) + lam:
        raise ArithmeticError("not yet in the stable range: earlier difference disagrees")
    n = len(v) - 1
    nu = v[n] - mu * p**n - lam * n
    if nu.denominator != 1:
        raise ArithmeticError("not yet in the stable range: non-integral nu")
    return IwasawaInvariants(int(mu), int(lam), int(nu), "fit", True)


def _frac(x: Fraction | None):
    return None if x is None else [x.numerator, x.denominator]


@dataclass
class LevelRecord:
    n: int
    ell: int
    slopes: list
    v_L1: list
    identity_ok: bool | None
    ram_lower_bound: int
    conj4_threshold: int | None
    ram_check: str
    cross_route_ok: bool
    galois_invariant: bool
    newton_ok: bool
    slopes_symmetric: bool
    v_h: int | None
    telescoping_ok: bool
    divides_previous: bool


@dataclass
class VerificationReport:
    tower: dict
    per_n: list[LevelRecord]
    mu: int
    lam: int
    nu: int | None
    lambda_nonzero: bool
    c: Fraction | None
    telescoping_ok: bool
    routes_agree: bool | None
    fault_injected: bool = False
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict[str, Any]:
        return {
            "tower": self.tower,
            "per_n": [asdict(r) for r in self.per_n],
            "mu": self.mu, "lambda": self.lam, "nu": self.nu,
            "lambda_nonzero": self.lambda_nonzero, "c": _frac(self.c),
            "telescoping_ok": self.telescoping_ok, "routes_agree": self.routes_agree,
            "fault_injected": self.fault_injected, "failures": list(self.failures), "ok": self.ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def summary(self) -> str:
        lines = [f"tower {self.tower['label']}: mu = {self.mu}, lambda = {self.lam}"]
        for r in self.per_n:
            ident = {True: "ok", False: "FAILED", None: "n/a"}[r.identity_ok]
            lines.append(
                f"  n={r.n}: ell={r.ell} v(L(chi,1))={r.v_L1[0]}/{r.v_L1[1]} identity {ident}, "
                f"v(h)={r.v_h} telescoping {'ok' if r.telescoping_ok else 'FAILED'}, "
                f"ram >= {r.ram_lower_bound} ({r.ram_check})"
            )
        lines.append("all checks passed" if self.ok else "FAILED: " + ", ".join(self.failures))
        return "\n".join(lines)


class _Stage:
    """Prefix precision errors with the name of the pipeline stage."""

    def __init__(self, name: str):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None and issubclass(exc_type, PrecisionError):
            raise PrecisionError(f"{self.name}: {exc}") from exc
        return False


def verify_theorem(spec: TowerSpec, fault: bool = False) -> VerificationReport:
    """Run every check level by level for n = 1..n_max.

    With ``fault`` the constant coefficient of L_rho(T, 1) is shifted by
    p^(a // 2) before anything is derived from it (negative control).
    """
    p, r = spec.p, spec.r
    prec = spec.precision
    with _Stage("tadic_l"):
        L = tadic_l(spec)
    with _Stage("l_rho_at_one"):
        L1 = l_rho_at_one(L)
    if fault:
        coeffs = list(L1.coeffs)
        coeffs[0] += p ** (prec.a // 2)
        L1 = TSeries(p, L1.a, tuple(coeffs), L1.provenance + ("fault injected",))
    with _Stage("weierstrass_prepare"):
        prep = invariants_from_prep(L1)
    mu, lam = prep.mu, prep.lam
    c = Fraction(p - 1, p * lam) if lam else None

    records: list[LevelRecord] = []
    failures: list[str] = []
    vh_values = [Fraction(0)]
    tel_sum = Fraction(0)
    prev_zeta = ZpPoly(p, prec.a, (1,))
    for n in range(1, prec.n_max + 1):
        e = ramification_index(p, n)
        with _Stage(f"specialize(n={n})"):
            cl = specialize(L, n)
        with _Stage(f"newton_polygon(n={n})"):
            npg = newton_polygon(cl)
        value = l_at_one(cl)
        with _Stage(f"l_at_one(n={n})"):
            v1 = cyclo_valuation(value)
        identity = (v1 == mu + Fraction(lam, e)) if e > lam else None
        cross = cyclo_substitute(L1, CycloRing(p, n, prec.a)).coeffs == value.coeffs
        galois = all(newton_polygon(cl.conjugate(u)) == npg for u in units_mod(p, n))
        slopes = npg.slopes
        newton_ok = (npg.vertices[0] == (0, 0) and npg.is_convex() and len(slopes) == cl.degree
                     and all(0 <= s <= r for s in slopes))
        bound = ramification_lower_bound(npg, v1)
        if lam:
            threshold = math.ceil(c * p**n)
            ram_check = "pass" if bound >= threshold else "fail"
        else:
            threshold, ram_check = None, "vacuous (lambda = 0)"
        tel_sum += e * v1
        with _Stage(f"layer_zeta(n={n})"):
            zeta = prev_zeta * conjugate_product(cl)
            h = zeta.at_one()
            v_h = h.valuation()
        telescoping = tel_sum == v_h and tel_sum.denominator == 1 and tel_sum >= 0
        divides = prev_zeta.divides(zeta)
        prev_zeta = zeta
        vh_values.append(tel_sum)
        rec = LevelRecord(
            n=n, ell=cl.degree, slopes=[_frac(s) for s in slopes], v_L1=_frac(v1),
            identity_ok=identity, ram_lower_bound=bound, conj4_threshold=threshold,
            ram_check=ram_check, cross_route_ok=cross, galois_invariant=galois,
            newton_ok=newton_ok, slopes_symmetric=npg.is_symmetric(r), v_h=v_h,
            telescoping_ok=telescoping, divides_previous=divides,
        )
        records.append(rec)
        for name, flag in [("identity", identity), ("cross_route", cross), ("galois_invariance", galois),
                           ("newton_polygon", newton_ok), ("telescoping", telescoping),
                           ("divisibility", divides), ("ramification_bound", ram_check != "fail")]:
            if flag is False:
                failures.append(f"{name}(n={n})")

    nu, routes = None, None
    if len(vh_values) >= 4:
        try:
            fit = invariants_from_fit(vh_values, p)
        except ArithmeticError:
            pass
        else:
            nu = fit.nu
            routes = (fit.mu, fit.lam) == (mu, lam)
            if not routes:
                failures.append("routes_agree")
    tower = spec_to_dict(spec)
    tower["label"] = spec.label()
    return VerificationReport(
        tower=tower, per_n=records, mu=mu, lam=lam, nu=nu, lambda_nonzero=lam != 0, c=c,
        telescoping_ok=all(rec.telescoping_ok for rec in records), routes_agree=routes,
        fault_injected=fault, failures=failures,
    )


# -- family scans ------------------------------------------------------------------------

def expand_family(family: Iterable[Sequence]) -> list[list[int]]:
    """Each member is a coefficient list whose entries are ints or inclusive [lo, hi] ranges."""
    out = []
    for member in family:
        choices = []
        for c in member:
            if isinstance(c, list) and len(c) == 2 and all(isinstance(x, int) for x in c):
                choices.append(range(c[0], c[1] + 1))
            elif isinstance(c, int):
                choices.append([c])
            else:
                raise SpecError(f"family entry {c!r} must be an int or a [lo, hi] range")
        out.extend(list(t) for t in itertools.product(*choices))
    return out


@dataclass
class ScanRow:
    f: list[int]
    status: str
    mu: int | None = None
    lam: int | None = None
    ell: list[int] = field(default_factory=list)
    first_slopes: list[Fraction] = field(default_factory=list)

    def tsv(self) -> str:
        def show(x):
            return "" if x is None else str(x)

        return "\t".join([
            ",".join(map(str, self.f)), self.status, show(self.mu), show(self.lam),
            ",".join(map(str, self.ell)), ",".join(str(s) for s in self.first_slopes),
        ])


SCAN_HEADER = "# f\tstatus\tmu\tlambda\tell\tfirst_slopes"


def scan_family(base: TowerSpec, family: Iterable[Sequence], a: int | None = None) -> list[ScanRow]:
    """(mu, lambda), ell(n) and the first slope per level for each f in the family.

    Members sharing p, r, domain and f_neg with ``base`` get their own automatic
    precision profile; members violating the tower conditions are skipped.
    """
    rows = []
    template = spec_to_dict(base)
    template.pop("precision")
    template["precision"] = {"a": a if a is not None else base.precision.a}
    for f in expand_family(family):
        data = dict(template, f=f)
        try:
            spec = spec_from_dict(data)
        except SpecError as exc:
            rows.append(ScanRow(f, f"skipped: {exc}"))
            continue
        try:
            L = tadic_l(spec)
            prep = weierstrass_prepare(l_rho_at_one(L))
            ells, firsts = [], []
            for n in range(1, spec.precision.n_max + 1):
                cl = specialize(L, n)
                ells.append(cl.degree)
                sl = newton_polygon(cl).slopes
                firsts.append(sl[0] if sl else None)
            rows.append(ScanRow(f, "ok", prep.mu, prep.lam, ells, firsts))
        except (PrecisionError, CheckFailed) as exc:
            rows.append(ScanRow(f, f"error: {exc}"))
    return rows
