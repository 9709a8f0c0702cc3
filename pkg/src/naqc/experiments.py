"""Experiment drivers: parameter sweeps, threshold bisection, monogamy scans
and property-verification suites, with CSV / JSON-lines emission.

Every run is deterministic given its seed and configuration: work items
draw from per-index substreams and results are ordered by input index, so
the worker count never changes the output bytes.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import qlin, states, steering
from .coherence import (BasisTriad, COMPLEMENTARITY_BOUND, l1_coherence,
                        triad_coherence_sum, triad_coherences)
from .functionals import (DIRECTION_AB, DIRECTIONS, MODE_FIXED_COHERENCE,
                          MODE_FIXED_MEASUREMENT, NaqcOptions, monogamy_sum,
                          naqc_generalized, naqc_lower_bound, naqc_standard)

SWEEP_FAMILIES = ("bell-mixture", "werner")
SCAN_CLASSES = ("ghz-class", "w-class")
FUNCTIONALS = ("standard", "generalized")

MONOGAMY_BOUND = 2.0 * COMPLEMENTARITY_BOUND
MONOGAMY_SLACK = 1e-3

VERIFY_SUITES = ("ordering", "lu-invariance", "separable-bound",
                 "reduced-state-bound", "closed-form-coherence",
                 "bloch-path", "complementarity")

DEFAULT_TRIALS = {
    "ordering": 500,
    "lu-invariance": 100,
    "separable-bound": 500,
    "reduced-state-bound": 1000,
    "closed-form-coherence": 1000,
    "bloch-path": 1000,
    "complementarity": 10000,
}


@dataclass(frozen=True)
class SweepSpec:
    """Grid of mixing parameters to evaluate for one state family."""

    family: str
    p_grid: tuple
    functionals: tuple = FUNCTIONALS
    opts: NaqcOptions = field(default_factory=NaqcOptions)
    direction: str = DIRECTION_AB

    def __post_init__(self):
        if self.family not in SWEEP_FAMILIES:
            raise ValueError(f"sweep family must be one of {SWEEP_FAMILIES}")
        grid = tuple(float(p) for p in self.p_grid)
        if not grid or any(not 0.0 <= p <= 1.0 for p in grid):
            raise ValueError("grid values must lie in [0, 1]")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("grid must be strictly increasing")
        object.__setattr__(self, "p_grid", grid)
        bad = [f for f in self.functionals if f not in FUNCTIONALS]
        if bad or not self.functionals:
            raise ValueError(f"functionals must be a nonempty subset of "
                             f"{FUNCTIONALS}, got {self.functionals}")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")


@dataclass(frozen=True)
class ScanSpec:
    """Monogamy scan over sampled three-qubit pure states.

    ``n_samples`` states are drawn per listed class; ``probe`` optionally
    appends one deterministic biseparable Bell (x) pure probe record.
    """

    mode: str
    classes: tuple = SCAN_CLASSES
    n_samples: int = 100
    opts: NaqcOptions = field(default_factory=NaqcOptions)
    seed: int = 0
    functional: str = "generalized"
    probe: str | None = None

    def __post_init__(self):
        if self.mode not in (MODE_FIXED_COHERENCE, MODE_FIXED_MEASUREMENT):
            raise ValueError(f"unknown scan mode {self.mode!r}")
        bad = [c for c in self.classes if c not in SCAN_CLASSES]
        if bad or not self.classes:
            raise ValueError(f"classes must be a nonempty subset of "
                             f"{SCAN_CLASSES}, got {self.classes}")
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.functional not in FUNCTIONALS:
            raise ValueError(f"functional must be one of {FUNCTIONALS}")
        if self.probe not in (None, "biseparable-bell"):
            raise ValueError("probe must be None or 'biseparable-bell'")


def _pmap(fn, items, jobs):
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    chunk = max(1, len(items) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def _check_finite(record):
    for key, value in record.items():
        if isinstance(value, float) and not math.isfinite(value):
            raise ValueError(f"non-finite value for {key!r} in record {record}")
    return record


# ---------------------------------------------------------------- sweeps

def _sweep_point(args):
    family, p, functional, direction, opts = args
    rho = states.bell_mixture(p) if family == "bell-mixture" else states.werner(p)
    fn = naqc_standard if functional == "standard" else naqc_generalized
    res = fn(rho, direction, opts)
    return _check_finite({
        "family": family,
        "p": float(p),
        "functional": functional,
        "direction": direction,
        "value": float(res.value),
        "exhibits": res.exhibits,
        "bound": COMPLEMENTARITY_BOUND,
        "restarts_agreeing": res.restarts_agreeing,
        "restarts_converged": res.restarts_converged,
        "seed": opts.seed,
    })


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list:
    """One record per (grid point, functional); deterministic given the seed."""
    items = [(spec.family, p, f, spec.direction, spec.opts)
             for p in spec.p_grid for f in spec.functionals]
    return _pmap(_sweep_point, items, jobs)


# ------------------------------------------------------------- threshold

def find_threshold(family: str, functional: str,
                   opts: NaqcOptions | None = None,
                   bracket: tuple | None = None,
                   direction: str = DIRECTION_AB,
                   dp: float = 1e-4) -> float:
    """Bisect the mixing parameter where the functional crosses sqrt(6).

    The crossing is located on the detection boundary (value minus the
    bound-plus-tolerance used by the ``exhibits`` verdict), assuming the
    value is monotone across the bracket; a bracket without a sign change
    raises ``ValueError``.
    """
    if family not in SWEEP_FAMILIES:
        raise ValueError(f"family must be one of {SWEEP_FAMILIES}")
    if functional not in FUNCTIONALS:
        raise ValueError(f"functional must be one of {FUNCTIONALS}")
    opts = opts or NaqcOptions()
    if bracket is None:
        bracket = (0.0, 0.5) if family == "bell-mixture" else (0.0, 1.0)
    lo, hi = (float(bracket[0]), float(bracket[1]))
    if not 0.0 <= lo < hi <= 1.0:
        raise ValueError(f"invalid bracket {bracket}")
    make = states.bell_mixture if family == "bell-mixture" else states.werner
    fn = naqc_standard if functional == "standard" else naqc_generalized
    margin = COMPLEMENTARITY_BOUND + opts.tol

    def f(p):
        return fn(make(p), direction, opts).value - margin

    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise ValueError(f"no sign change on bracket [{lo}, {hi}]: "
                         f"f(lo)={flo:.6g}, f(hi)={fhi:.6g}")
    while hi - lo > dp:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------- monogamy scan

def _scan_sample(args):
    cls, seed, index, mode, functional, opts = args
    rng = states.substream(seed, index)
    spec = states.FamilySpec(cls, seed=seed)
    try:
        psi = states.sample(spec, rng)
        rec = monogamy_sum(psi, mode, functional, opts)
        return _check_finite({
            "index": index,
            "class": cls,
            "seed": seed,
            "mode": mode,
            "functional": functional,
            "n_ab": float(rec.value_ab),
            "n_ac": float(rec.value_ac),
            "sum": float(rec.total),
            "exhibits_ab": rec.result_ab.exhibits,
            "exhibits_ac": rec.result_ac.exhibits,
            "error": "",
        })
    except (ValueError, RuntimeError) as exc:  # recorded, scan continues
        return {"index": index, "class": cls, "seed": seed, "mode": mode,
                "functional": functional, "n_ab": None, "n_ac": None,
                "sum": None, "exhibits_ab": None, "exhibits_ac": None,
                "error": str(exc)}


def _probe_state() -> np.ndarray:
    ket0 = np.array([1.0, 0.0], dtype=complex)
    return np.kron(states.phi_plus(), ket0)


def run_monogamy_scan(spec: ScanSpec, jobs: int = 1):
    """Per-sample records plus a summary against the 2*sqrt(6) ceiling."""
    items = []
    for ci, cls in enumerate(spec.classes):
        for i in range(spec.n_samples):
            items.append((cls, spec.seed, ci * spec.n_samples + i,
                          spec.mode, spec.functional, spec.opts))
    records = _pmap(_scan_sample, items, jobs)
    if spec.probe == "biseparable-bell":
        rec = monogamy_sum(_probe_state(), spec.mode, spec.functional, spec.opts)
        records.append(_check_finite({
            "index": -1, "class": "biseparable-bell-probe", "seed": spec.seed,
            "mode": spec.mode, "functional": spec.functional,
            "n_ab": float(rec.value_ab), "n_ac": float(rec.value_ac),
            "sum": float(rec.total),
            "exhibits_ab": rec.result_ab.exhibits,
            "exhibits_ac": rec.result_ac.exhibits,
            "error": "",
        }))
    sums = [r["sum"] for r in records if not r["error"]]
    summary = {
        "mode": spec.mode,
        "functional": spec.functional,
        "classes": list(spec.classes),
        "n_samples": spec.n_samples,
        "n_records": len(records),
        "n_failed": sum(1 for r in records if r["error"]),
        "bound": MONOGAMY_BOUND,
        "max_sum": max(sums) if sums else None,
        "violations": sum(1 for s in sums if s > MONOGAMY_BOUND + MONOGAMY_SLACK),
        "seed": spec.seed,
    }
    return records, summary


# -------------------------------------------------------- verify suites

@dataclass
class SuiteResult:
    suite: str
    passed: bool
    trials: int
    violations: int
    worst: float
    tolerance: float
    elapsed: float
    counterexamples: list = field(default_factory=list)


@dataclass
class VerifyReport:
    results: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def _random_triad(rng, family="full"):
    return BasisTriad(rng.uniform(0.0, math.pi), rng.uniform(0.0, 2 * math.pi),
                      rng.uniform(0.0, 2 * math.pi), family=family)


def _verify_complementarity(trials, seed, opts, jobs):
    worst = -math.inf
    violations = 0
    examples = []
    tol = 1e-9
    for i in range(trials):
        rng = states.substream(seed, i)
        rho = states.random_density(2, rng)
        total = triad_coherence_sum(rho, _random_triad(rng))
        excess = total - COMPLEMENTARITY_BOUND
        worst = max(worst, excess)
        if excess > tol:
            violations += 1
            if len(examples) < 5:
                examples.append({"index": i, "sum": total})
    return violations, worst, tol, examples


def _verify_closed_form(trials, seed, opts, jobs):
    worst = 0.0
    violations = 0
    examples = []
    tol = 1e-12
    for i in range(trials):
        rng = states.substream(seed, i)
        rho = states.random_density(2, rng)
        theta = rng.uniform(0.0, math.pi)
        phi = rng.uniform(0.0, 2 * math.pi)
        closed = triad_coherences(rho, theta, phi)
        bases = BasisTriad(theta, phi, family="two-angle").bases()
        for c, b in zip(closed, bases):
            dev = abs(c - l1_coherence(rho, b))
            worst = max(worst, dev)
            if dev > tol:
                violations += 1
                if len(examples) < 5:
                    examples.append({"index": i, "deviation": dev})
    return violations, worst, tol, examples


def _verify_bloch_path(trials, seed, opts, jobs):
    worst = 0.0
    violations = 0
    examples = []
    tol = 1e-12
    for i in range(trials):
        rng = states.substream(seed, i)
        rho = states.random_density(4, rng)
        corr = qlin.to_corr(rho)
        axis = rng.standard_normal(3)
        axis /= np.linalg.norm(axis)
        ens = steering.condition(rho, steering.PARTY_A, axis)
        fast = steering.condition_bloch(corr, axis)
        dev = 0.0
        for (p1, st), (p2, r) in zip(ens.members, fast):
            dev = max(dev, abs(p1 - p2),
                      float(np.abs(qlin.bloch_vector(st) - r).max()))
        worst = max(worst, dev)
        if dev > tol:
            violations += 1
            if len(examples) < 5:
                examples.append({"index": i, "deviation": dev})
    return violations, worst, tol, examples


def _ordering_trial(args):
    seed, index, opts = args
    rng = states.substream(seed, index)
    rho = states.random_density(4, rng)
    return (naqc_lower_bound(rho),
            naqc_standard(rho, DIRECTION_AB, opts).value,
            naqc_generalized(rho, DIRECTION_AB, opts).value)


def _verify_ordering(trials, seed, opts, jobs):
    tol = 5e-4
    rows = _pmap(_ordering_trial, [(seed, i, opts) for i in range(trials)], jobs)
    worst = -math.inf
    violations = 0
    examples = []
    for i, (lb, std, gen) in enumerate(rows):
        dev = max(lb - std, std - gen, gen - 3.0)
        worst = max(worst, dev)
        if dev > tol:
            violations += 1
            if len(examples) < 5:
                examples.append({"index": i, "lower": lb, "standard": std,
                                 "generalized": gen})
    return violations, worst, tol, examples


def _lu_trial(args):
    seed, index, opts = args
    rng = states.substream(seed, index)
    rho = states.random_density(4, rng)
    u = qlin.haar_unitary(2, rng)
    v = qlin.haar_unitary(2, rng)
    rho2 = qlin.apply_local_unitary(rho, u, v)
    devs = []
    for fn in (naqc_standard, naqc_generalized):
        devs.append(abs(fn(rho, DIRECTION_AB, opts).value
                        - fn(rho2, DIRECTION_AB, opts).value))
    return max(devs)


def _verify_lu_invariance(trials, seed, opts, jobs):
    tol = 5e-4
    devs = _pmap(_lu_trial, [(seed, i, opts) for i in range(trials)], jobs)
    worst = max(devs)
    violations = sum(1 for d in devs if d > tol)
    examples = [{"index": i, "deviation": d}
                for i, d in enumerate(devs) if d > tol][:5]
    return violations, worst, tol, examples


def _separable_trial(args):
    seed, index, opts = args
    rng = states.substream(seed, index)
    rho = states.sample(states.FamilySpec("separable", seed=seed), rng)
    return naqc_generalized(rho, DIRECTION_AB, opts).value


def _verify_separable_bound(trials, seed, opts, jobs):
    tol = 5e-4
    vals = _pmap(_separable_trial, [(seed, i, opts) for i in range(trials)], jobs)
    excesses = [v - COMPLEMENTARITY_BOUND for v in vals]
    worst = max(excesses)
    violations = sum(1 for e in excesses if e > tol)
    examples = [{"index": i, "value": v}
                for i, v in enumerate(vals)
                if v - COMPLEMENTARITY_BOUND > tol][:5]
    return violations, worst, tol, examples


def _reduced_bound_trial(args):
    seed, index, opts = args
    rng = states.substream(seed, index)
    rho = states.random_density(4, rng)
    return (naqc_lower_bound(rho),
            naqc_standard(rho, DIRECTION_AB, opts).value)


def _verify_reduced_state_bound(trials, seed, opts, jobs):
    tol = 5e-4
    rows = _pmap(_reduced_bound_trial,
                 [(seed, i, opts) for i in range(trials)], jobs)
    worst = max(lb - v for lb, v in rows)
    violations = sum(1 for lb, v in rows if lb - v > tol)
    examples = [{"index": i, "lower": lb, "standard": v}
                for i, (lb, v) in enumerate(rows) if lb - v > tol][:5]
    return violations, worst, tol, examples


_SUITE_FUNCS = {
    "complementarity": _verify_complementarity,
    "closed-form-coherence": _verify_closed_form,
    "bloch-path": _verify_bloch_path,
    "ordering": _verify_ordering,
    "lu-invariance": _verify_lu_invariance,
    "separable-bound": _verify_separable_bound,
    "reduced-state-bound": _verify_reduced_state_bound,
}


def run_verify(suites, trials: int | None = None, seed: int = 0,
               opts: NaqcOptions | None = None, jobs: int = 1) -> VerifyReport:
    """Run one or more property suites; failures carry counterexamples."""
    if isinstance(suites, str):
        suites = VERIFY_SUITES if suites == "all" else (suites,)
    opts = opts or NaqcOptions()
    results = []
    for name in suites:
        if name not in _SUITE_FUNCS:
            raise ValueError(f"unknown verify suite {name!r}; "
                             f"expected one of {VERIFY_SUITES}")
        n = trials if trials is not None else DEFAULT_TRIALS[name]
        t0 = time.perf_counter()
        violations, worst, tol, examples = _SUITE_FUNCS[name](n, seed, opts, jobs)
        results.append(SuiteResult(
            suite=name, passed=violations == 0, trials=n,
            violations=violations, worst=float(worst), tolerance=tol,
            elapsed=time.perf_counter() - t0, counterexamples=examples))
    return VerifyReport(results)


# ------------------------------------------------------------- emission

def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_records(records, fmt: str = "csv") -> str:
    """Render records as CSV (header row, round-trip floats) or JSON lines."""
    if not records:
        return ""
    if fmt == "jsonl":
        return "".join(json.dumps(r) + "\n" for r in records)
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'jsonl'")
    fields = list(records[0].keys())
    lines = [",".join(fields)]
    for r in records:
        lines.append(",".join(_csv_cell(r.get(k)) for k in fields))
    return "\n".join(lines) + "\n"


def write_records(records, path: str | None, fmt: str = "csv",
                  summary: dict | None = None) -> str:
    """Write the table to ``path`` (or return it) plus a summary sidecar."""
    text = format_records(records, fmt)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
        if summary is not None:
            with open(path + ".summary.json", "w") as fh:
                json.dump(summary, fh, indent=2)
                fh.write("\n")
    return text
