"""Grid sweeps that check the loss bounds and the saw-tooth shape numerically.

Every sweep returns a :class:`SweepReport`.  Ranges may be split across
worker processes; chunk reports merge associatively, so the final report does
not depend on how the range was partitioned.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple

import numpy as np

from . import bounds
from .errors import InvalidParameter
from .loss import loss_curve
from .strategy import StrategySpec, lambda_at, sequence_until, stepper, validate

REL_SLACK = 1e-9
INVPHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class Violation:
    check: str
    lambda_hat: int
    observed: float
    bound: float

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "lambda_hat": self.lambda_hat,
            "observed": self.observed,
            "bound": self.bound,
        }


@dataclass
class SweepReport:
    descriptor: dict = field(default_factory=dict)
    checks_run: int = 0
    violations: list[Violation] = field(default_factory=list)
    extrema: tuple[float, int] | None = None
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: SweepReport) -> SweepReport:
        """Combine two chunk reports; ``lo``/``hi`` in the descriptor widen to cover both."""
        extrema = self.extrema
        if other.extrema is not None:
            if extrema is None or (other.extrema[0], -other.extrema[1]) > (extrema[0], -extrema[1]):
                extrema = other.extrema
        notes = dict(self.notes)
        for key, val in other.notes.items():
            notes[key] = sorted(notes.get(key, []) + val) if isinstance(val, list) else val
        violations = sorted(self.violations + other.violations, key=lambda v: (v.lambda_hat, v.check))
        descriptor = dict(self.descriptor)
        if "lo" in descriptor and "lo" in other.descriptor:
            descriptor["lo"] = min(descriptor["lo"], other.descriptor["lo"])
            descriptor["hi"] = max(descriptor["hi"], other.descriptor["hi"])
        return SweepReport(descriptor, self.checks_run + other.checks_run, violations, extrema, notes)

    def to_dict(self) -> dict:
        return {
            **self.descriptor,
            "checks_run": self.checks_run,
            "violations": [v.to_dict() for v in self.violations],
            "extrema": None
            if self.extrema is None
            else {"max_rel_loss": self.extrema[0], "argmax_lambda_hat": self.extrema[1]},
            "notes": self.notes,
            "ok": self.ok,
        }


def _check_range(spec: StrategySpec, lo: int, hi: int) -> None:
    validate(spec)
    if not spec.lambda0 <= lo <= hi:
        raise ValueError(f"need lambda0 <= lo <= hi, got lambda0={spec.lambda0}, lo={lo}, hi={hi}")


def _slack(bound: np.ndarray) -> np.ndarray:
    return REL_SLACK * np.maximum(1.0, np.abs(bound))


def _chunks(lo: int, hi: int, parts: int, overlap: bool = False) -> list[tuple[int, int]]:
    """Split ``[lo, hi]`` into at most ``parts`` ranges.

    With ``overlap`` neighbouring ranges share their boundary point (for
    checks on consecutive pairs).
    """
    n = hi - lo + 1
    parts = max(1, min(parts, n - 1 if overlap else n))
    edges = [lo + (n - (1 if overlap else 0)) * i // parts for i in range(parts + 1)]
    if overlap:
        return [(edges[i], edges[i + 1]) for i in range(parts)] if n > 1 else [(lo, hi)]
    return [(edges[i], edges[i + 1] - 1) for i in range(parts)]


def _run(fn: Callable, jobs: list[tuple], workers: int) -> SweepReport:
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(fn, *zip(*jobs)))
    else:
        reports = [fn(*job) for job in jobs]
    out = reports[0]
    for rep in reports[1:]:
        out = out.merge(rep)
    return out


def _sandwich_chunk(spec: StrategySpec, lo: int, hi: int, perturb_upper: float) -> SweepReport:
    curve = loss_curve(spec, lo, hi)
    lh = curve.lambda_hat
    L = curve.loss.astype(np.float64)
    up = np.asarray(bounds.loss_upper(spec, lh)) * (1.0 + perturb_upper)
    low = np.asarray(bounds.loss_lower(spec, lh))
    eps = _slack(up)
    violations = []
    for i in np.flatnonzero(L > up + eps):
        violations.append(Violation("upper", int(lh[i]), float(L[i]), float(up[i])))
    for i in np.flatnonzero(L < low - eps):
        violations.append(Violation("lower", int(lh[i]), float(L[i]), float(low[i])))
    rel = curve.relative_loss
    i = int(np.argmax(rel))
    return SweepReport(
        checks_run=2 * len(lh),
        violations=sorted(violations, key=lambda v: (v.lambda_hat, v.check)),
        extrema=(float(rel[i]), int(lh[i])),
    )


def sandwich_sweep(
    spec: StrategySpec, lo: int, hi: int, *, perturb_upper: float = 0.0, workers: int = 1
) -> SweepReport:
    """Check ``loss_lower <= L <= loss_upper`` at every integer in ``[lo, hi]``.

    ``perturb_upper`` scales the upper bound by ``1 + perturb_upper``; it exists
    so tests can show that a corrupted bound is caught.
    """
    _check_range(spec, lo, hi)
    jobs = [(spec, a, b, perturb_upper) for a, b in _chunks(lo, hi, workers)]
    report = _run(_sandwich_chunk, jobs, workers)
    report.descriptor = {"check": "sandwich", "spec": spec.to_dict(), "lo": lo, "hi": hi}
    return report


def _sawtooth_chunk(spec: StrategySpec, lo: int, hi: int) -> SweepReport:
    if hi == lo:
        return SweepReport()
    curve = loss_curve(spec, lo, hi)
    lh = curve.lambda_hat
    L = curve.loss
    seq = np.asarray(sequence_until(spec, hi).values, dtype=np.int64)
    at_seq = np.isin(lh[:-1], seq)
    descends = L[1:] == L[:-1] - 1
    violations = []
    # unit descent inside a segment, a break exactly after each lambda_k
    for i in np.flatnonzero(descends == at_seq):
        name = "descent" if not at_seq[i] else "jump_location"
        violations.append(Violation(name, int(lh[i + 1]), float(L[i + 1]), float(L[i] - 1)))
    for i in np.flatnonzero(at_seq & (L[1:] <= L[:-1])):
        violations.append(Violation("jump_up", int(lh[i + 1]), float(L[i + 1]), float(L[i])))
    return SweepReport(
        checks_run=len(lh) - 1,
        violations=sorted(violations, key=lambda v: (v.lambda_hat, v.check)),
    )


def sawtooth_sweep(spec: StrategySpec, lo: int, hi: int, *, workers: int = 1) -> SweepReport:
    """Check the saw-tooth shape of the loss on ``[lo, hi]``.

    For each consecutive pair the loss must drop by exactly one, unless the
    left point is a sequence value ``lambda_k``, in which case it must jump up.
    """
    _check_range(spec, lo, hi)
    jobs = [(spec, a, b) for a, b in _chunks(lo, hi, workers, overlap=True)]
    report = _run(_sawtooth_chunk, jobs, workers)
    report.descriptor = {"check": "sawtooth", "spec": spec.to_dict(), "lo": lo, "hi": hi}
    return report


def _max_rel_chunk(spec: StrategySpec, lo: int, hi: int) -> SweepReport:
    curve = loss_curve(spec, lo, hi)
    rel = curve.relative_loss
    i = int(np.argmax(rel))
    return SweepReport(extrema=(float(rel[i]), int(curve.lambda_hat[i])))


def max_relative_loss(spec: StrategySpec, lo: int, hi: int, *, workers: int = 1) -> tuple[float, int]:
    """Largest relative loss on ``[lo, hi]`` and the smallest ``lambda_hat`` attaining it."""
    _check_range(spec, lo, hi)
    jobs = [(spec, a, b) for a, b in _chunks(lo, hi, workers)]
    return _run(_max_rel_chunk, jobs, workers).extrema


def decade_maxima(spec: StrategySpec, lo_exp: int, hi_exp: int) -> list[tuple[float, int]]:
    """``max_relative_loss`` over each decade ``[10**e, 10**(e+1)]``."""
    return [max_relative_loss(spec, 10**e, 10 ** (e + 1)) for e in range(lo_exp, hi_exp)]


class GoldenResult(NamedTuple):
    rho: float
    value: float
    interior: bool


def golden_section(f: Callable, a: float, b: float, tol: float) -> tuple[float, float, float]:
    """Shrink ``[a, b]`` around the minimum of a unimodal ``f`` until ``b - a <= tol``.

    Returns the final bracket and its midpoint.  ``f`` may return any totally
    ordered value (floats, Fractions).
    """
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
        if not a < c < d < b:
            break
    return a, b, (a + b) / 2


def _exact_asymptotic_upper(rho: float) -> Fraction:
    # exact rational evaluation; float64 cannot order values within ~1e-8 of the minimum
    r = Fraction(rho)
    return r + 1 / (r - 1)


def minimize_asymptotic_upper(rho_lo: float, rho_hi: float, tol: float) -> GoldenResult:
    """Golden-section minimization of ``rho + 1/(rho - 1)`` over ``[rho_lo, rho_hi]``.

    When the minimum sits on a bracket end the end point itself is returned
    with ``interior=False``.
    """
    for name, val in (("rho_lo", rho_lo), ("rho_hi", rho_hi), ("tol", tol)):
        if not isinstance(val, (int, float)) or not math.isfinite(val):
            raise InvalidParameter(name, "must be a finite real")
    if rho_lo <= 1:
        raise InvalidParameter("rho_lo", "bracket must lie in (1, inf)")
    if rho_hi <= rho_lo:
        raise InvalidParameter("rho_hi", "must exceed rho_lo")
    if tol <= 0:
        raise InvalidParameter("tol", "must be > 0")

    _, _, x = golden_section(_exact_asymptotic_upper, float(rho_lo), float(rho_hi), tol)
    interior = True
    if x - rho_lo <= tol:
        x, interior = float(rho_lo), False
    elif rho_hi - x <= tol:
        x, interior = float(rho_hi), False
    return GoldenResult(x, float(_exact_asymptotic_upper(x)), interior)


def star_times_nesting(
    lambda0: int, rho: float, k_max: int, *, lambda_hat_max: int = 10**4
) -> SweepReport:
    """Compare the chained and closed-form multiplicative types for equal ``(lambda0, rho)``.

    Checks ``lambda*_k >= lambdax_k`` for ``k <= k_max``, and on
    ``[lambda0, min(lambdax_{k_max}, lambda_hat_max)]`` that the shared upper
    bound and the chained lower bound hold for both losses.  Points where the
    closed-form lower bound exceeds the chained loss are recorded under
    ``notes["crossings"]`` and are not violations.
    """
    star = StrategySpec.star(lambda0, rho)
    times = StrategySpec.times(lambda0, rho)
    violations = []
    identical = True
    step = stepper(star)
    s = lambda0
    for k in range(k_max + 1):
        if k:
            s = step(s, k)
        t = lambda_at(times, k)
        identical &= s == t
        if s < t:
            violations.append(Violation("dominance", k, float(s), float(t)))

    hi = max(lambda0, min(lambda_at(times, k_max), lambda_hat_max))
    cs = loss_curve(star, lambda0, hi)
    ct = loss_curve(times, lambda0, hi)
    lh = cs.lambda_hat
    up = np.asarray(bounds.multiplicative_upper(lh, lambda0, rho))
    low = np.asarray(bounds.star_lower(lh, lambda0, rho))
    eps_up, eps_low = _slack(up), _slack(low)
    for name, L in (("star", cs.loss), ("times", ct.loss)):
        L = L.astype(np.float64)
        for i in np.flatnonzero(L > up + eps_up):
            violations.append(Violation(f"{name}_upper", int(lh[i]), float(L[i]), float(up[i])))
        for i in np.flatnonzero(L < low - eps_low):
            violations.append(Violation(f"{name}_lower", int(lh[i]), float(L[i]), float(low[i])))
    crossings = np.flatnonzero(np.asarray(bounds.times_lower(lh, lambda0, rho)) > cs.loss)
    return SweepReport(
        descriptor={"check": "nesting", "lambda0": lambda0, "rho": rho, "k_max": k_max, "lo": lambda0, "hi": hi},
        checks_run=(k_max + 1) + 4 * len(lh),
        violations=violations,
        notes={"identical_sequences": bool(identical), "crossings": [int(lh[i]) for i in crossings]},
    )

