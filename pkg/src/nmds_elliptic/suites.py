"""Curve sweeps, record building and the reproduction suites."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from math import comb
from typing import Callable, Iterator

from . import completeness, special
from .catalog import CatalogRecord
from .curves import CurveSpec, hasse_check, hesse, weierstrass
from .errors import ScanTooLarge, SingularCurve
from .field import GF, field_of_order
from .lift import lift_curve
from .tracks import PARITY_CAP, check_track, paritycheck_crosscheck

log = logging.getLogger(__name__)

SMALL_Q = (7, 11, 13)
LARGE_Q = {121: 144, 157: 180, 169: 180, 179: 180}
COMPLETE_FROM = 15
EXHAUSTIVE_SPANS = 5_000_000


# -- curves ----------------------------------------------------------------------
def weierstrass_curves(F: GF, all_curves: bool = False, min_n: int = 9) -> Iterator[CurveSpec]:
    """Nonsingular y^2 = x^3 + ax + b with at least ``min_n`` points, (a, b) in
    encoding order; by default only the first curve of each point count."""
    seen = set()
    for a in range(F.q):
        for b in range(F.q):
            try:
                E = weierstrass(F, a, b)
            except SingularCurve:
                continue
            if E.n < min_n or (not all_curves and E.n in seen):
                continue
            seen.add(E.n)
            yield E


def hesse_parameter(F: GF, other_root: bool = False) -> int:
    """c = 1 + sqrt(3)."""
    return int(F.add(1, F.sqrt(3, other_root=other_root)))


def harmonic_hesse(q: int, other_root: bool = False) -> CurveSpec:
    F = field_of_order(q)
    return hesse(F, hesse_parameter(F, other_root))


# -- records ---------------------------------------------------------------------
def default_mode(n: int) -> str:
    return "exhaustive" if comb(n, 8) <= EXHAUSTIVE_SPANS else "sampled"


def track_summary(E: CurveSpec, seed: int = 0, mode: str | None = None) -> dict:
    track = lift_curve(E)
    mode = mode or default_mode(track.n)
    report = check_track(track, mode=mode, seed=seed)
    out = report.to_dict()
    out["hasse"] = hasse_check(E.n, E.field.q)
    return out


def completeness_record(E: CurveSpec, seed: int = 0, partitions: int = 1,
                        pruning: bool = True, workers: int | None = None,
                        q_cap: int = completeness.SCAN_Q_CAP) -> dict:
    """Verdict record, dispatching on q."""
    F = E.field
    t0 = time.perf_counter()
    if F.h == 1 and F.q <= q_cap:
        res = completeness.small_q_verdict(E, pruning, partitions, "first", workers, q_cap)
        res.pop("_scan")
        rec = {"method": "scan", **res}
    elif F.q >= special.LARGE_Q_MIN:
        res = special.large_q_verdict(E, seed=seed)
        rec = {"method": "special-points", "verdict": res.verdict, "n": res.n,
               "good_hyperplanes": None, "witnesses": [], "pruning": False,
               "partitions": partitions, "classes": res.classes,
               "eliminated_by_cubic": res.by_cubic, "eliminated_by_symmetry": res.by_symmetry,
               "unresolved": res.unresolved, "coverage": res.to_dict()["coverage"],
               "frame": res.frame, "symmetric": res.symmetric}
    else:
        raise ScanTooLarge(f"q = {F.q}: above the scan cap {q_cap} and below {special.LARGE_Q_MIN}")
    rec.update(curve=E.label(), seed=seed, elapsed_ms=int((time.perf_counter() - t0) * 1000))
    return rec


def make_record(E: CurveSpec, seed: int, track: dict | None = None,
                verdict: dict | None = None) -> CatalogRecord:
    return CatalogRecord(field=E.field.describe(), curve=E.describe(), n=E.n,
                         track=track, completeness=verdict, seed=seed)


# -- suites ----------------------------------------------------------------------
@dataclass
class Claim:
    suite: str
    subject: str
    claim: str
    expected: object
    observed: object

    @property
    def passed(self) -> bool:
        return self.expected == self.observed

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.suite:8s} {self.subject:34s} {self.claim:22s} expected={self.expected} observed={self.observed}"


def small_q_suite(seed=0, partitions=1, workers=None, all_curves=False, pruning=True,
                  qs=SMALL_Q, emit: Callable = lambda c: None):
    claims, records = [], []
    for q in qs:
        F = field_of_order(q)
        for E in weierstrass_curves(F, all_curves):
            v = completeness_record(E, seed, partitions, pruning, workers)
            expected = "extendable" if q == 7 or E.n < COMPLETE_FROM else "complete"
            c = Claim("small-q", E.label(), f"n={E.n} verdict", expected, v["verdict"])
            claims.append(c)
            emit(c)
            records.append(make_record(E, seed, verdict=v))
    return claims, records


def large_q_suite(seed=0, partitions=1, workers=None, qs=tuple(LARGE_Q), both_roots=True,
                  emit: Callable = lambda c: None):
    claims, records = [], []
    for q in qs:
        for other in ((False, True) if both_roots else (False,)):
            E = harmonic_hesse(q, other)
            sub = E.label() + (" (other root)" if other else "")
            rows = [Claim("large-q", sub, "point count", LARGE_Q[q], E.n),
                    Claim("large-q", sub, "Hasse bound", True, hasse_check(E.n, q))]
            v = completeness_record(E, seed, partitions, workers=workers)
            rows.append(Claim("large-q", sub, "verdict", "complete", v["verdict"]))
            for c in rows:
                emit(c)
            claims += rows
            records.append(make_record(E, seed, verdict=v))
    return claims, records


def tracks_suite(seed=0, all_curves=True, qs=SMALL_Q, parity_cap=PARITY_CAP,
                 emit: Callable = lambda c: None):
    claims, records = [], []
    for q in qs:
        F = field_of_order(q)
        for E in weierstrass_curves(F, all_curves):
            t = track_summary(E, seed, "exhaustive")
            n = E.n
            # with n = 9 the points sum to zero in the group, so they lie on
            # one cubic besides E and only span a hyperplane: a [9, 8, 2] MDS code
            expected = [9, n - 9, 9, 1, 1] if n > 9 else [8, 2, 9, 0, 0]
            rows = [Claim("tracks", E.label(), "Hasse bound", True, t["hasse"]),
                    Claim("tracks", E.label(), f"n={n} (n;9,7)-set", True, t["valid"]),
                    Claim("tracks", E.label(), "[k, d, d_dual, s, s_dual]", expected,
                          [t["k"], t["d"], t["d_dual"], t["s"], t["s_dual"]])]
            if n <= parity_cap:
                x = paritycheck_crosscheck(lift_curve(E), parity_cap)
                t["paritycheck"] = x
                rows.append(Claim("tracks", E.label(), "NMDS via G and via H", (n > 9, n > 9),
                                  (x["generator"], x["parity_check"])))
            for c in rows:
                emit(c)
            claims += rows
            records.append(make_record(E, seed, track=t))
    return claims, records


SUITES = {"small-q": small_q_suite, "large-q": large_q_suite, "tracks": tracks_suite}
