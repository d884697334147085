"""
Threshold temperatures, phase-diagram sweeps and certification of bound
entanglement windows.

A certified window is a temperature interval where every half-half cut of the
ring is PPT while the even-odd cut is NPPT. Since every pair of sites is
separated by some half-half cut, no pair can distill entanglement with fully
local (single-site) LOCC, yet the state is entangled. The certificate says
nothing about distillation by parties that group several sites together.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from scipy.optimize import bisect
from scipy.stats import linregress

from src.errors import NoWindow, ValidationError
from src.partitions import Partition, make_partition, partition_from_setting
from src.systems import SWEEP_PARAMETER, EntanglementSystem, get_system

logger = logging.getLogger(__name__)

# Entanglement-detection floor for both E_l and E_N
EPS_NEG = 1e-10
SCAN_POINTS = 64
WINDOW_POINTS = 256
OFFSET_SAMPLES = 4
OFFSET_SPREAD_TOL = 1e-10
T_MIN = 1e-4


@dataclass(frozen=True)
class ThresholdCurve:
    """
    Threshold temperatures of one partition family along a parameter

    Samples are (parameter value, T_th) pairs kept sorted by parameter.
    """
    family: str
    partition: str
    parameter: str
    samples: Tuple[Tuple[float, float], ...]
    tolerance: float = 1e-6
    bracket: Tuple[float, float] = (T_MIN, 5.0)

    def __post_init__(self):
        ordered = tuple(sorted((float(p), float(t)) for p, t in self.samples))
        if any(t < 0 for _, t in ordered):
            raise ValidationError(f"Negative threshold temperature in curve {self.partition}")
        object.__setattr__(self, 'samples', ordered)

    @property
    def parameters(self) -> np.ndarray:
        return np.array([p for p, _ in self.samples])

    @property
    def thresholds(self) -> np.ndarray:
        return np.array([t for _, t in self.samples])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            self.parameter: self.parameters,
            'partition': self.partition,
            'T_th': self.thresholds,
        })


@dataclass(frozen=True)
class WindowEvidence:
    """Verdicts of one probe temperature"""
    temperature: float
    even_odd: float
    half_half: Dict[int, float]

    def inside(self, eps_neg: float = EPS_NEG) -> bool:
        return self.even_odd > eps_neg and all(v <= eps_neg for v in self.half_half.values())


@dataclass(frozen=True)
class BoundWindow:
    """
    Certified temperature interval of bound entanglement

    Holds only with respect to fully local (n-party, single-site) distillation.
    """
    t_low: float
    t_high: float
    evidence: Tuple[WindowEvidence, ...]
    pair_coverage: bool
    offsets: Tuple[int, ...]
    offsets_mode: str
    system: str = ''
    scope: str = field(default='non-distillable under fully local LOCC only')

    def __post_init__(self):
        if not self.t_low < self.t_high:
            raise NoWindow(f"Empty window ({self.t_low}, {self.t_high})")

    def contains(self, temperature: float) -> bool:
        return self.t_low <= temperature <= self.t_high


@dataclass(frozen=True)
class AreaLawReport:
    """Scaling of E with n: linear fit plus plateau statistics"""
    partition: str
    sizes: Tuple[int, ...]
    values: Tuple[float, ...]
    slope: float
    intercept: float
    r_squared: float
    residuals: Tuple[float, ...]
    saturation_value: float
    saturation_delta: float


def threshold_temperature(system: EntanglementSystem, partition: Partition, t_max: float = 5.0,
                          tol: float = 1e-6, eps_neg: float = EPS_NEG, t_min: float = T_MIN) -> float:
    """
    Highest temperature at which a partition is still entangled

    A 64-point log-spaced scan over (t_min, t_max] locates the last sign change
    of E - eps_neg, which is then refined by bisection. Taking the last crossing
    handles negativities that are not monotone in T.

    Args:
        system (EntanglementSystem): Chain to evaluate
        partition (Partition): Bipartition
        t_max (float): Upper end of the scan
        tol (float): Absolute tolerance of the bisection
        eps_neg (float): Entanglement-detection floor
        t_min (float): Lower end of the scan

    Returns:
        float: T_th, 0.0 when the partition is never entangled on the scan
    """
    if tol <= 0:
        raise ValidationError(f"Tolerance must be positive, got {tol}")
    grid = np.geomspace(t_min, t_max, SCAN_POINTS)
    values = np.array([system.negativity(T, partition) for T in grid])
    entangled = np.flatnonzero(values > eps_neg)
    if entangled.size == 0:
        logger.info(f"{system.describe()} never entangled across {partition.name} below T={t_max}")
        return 0.0
    last = int(entangled[-1])
    if last == grid.size - 1:
        logger.warning(f"{system.describe()} still entangled across {partition.name} at T_max={t_max}")
        return float(t_max)

    def excess(T: float) -> float:
        return system.negativity(T, partition) - eps_neg

    threshold = float(bisect(excess, grid[last], grid[last + 1], xtol=tol))
    logger.debug(f"T_th[{partition.name}] = {threshold:.6g} for {system.describe()}")
    return threshold


def _threshold_task(family: str, n: int, params: Mapping[str, Any], setting: Any,
                    t_max: float, tol: float, eps_neg: float) -> Tuple[str, float]:
    system = get_system(family, n, **params)
    partition = partition_from_setting(setting, n)
    return partition.name, threshold_temperature(system, partition, t_max=t_max, tol=tol, eps_neg=eps_neg)


def _collect_curves(family: str, parameter: str, keys: Sequence[float], results: Sequence[Tuple[str, float]],
                    n_partitions: int, tol: float, t_max: float) -> List[ThresholdCurve]:
    curves = []
    for index in range(n_partitions):
        column = results[index::n_partitions]
        curves.append(ThresholdCurve(
            family=family,
            partition=column[0][0],
            parameter=parameter,
            samples=tuple((key, threshold) for key, (_, threshold) in zip(keys, column)),
            tolerance=tol,
            bracket=(T_MIN, t_max),
        ))
    return curves


def phase_diagram(family: str, param_grid: Sequence[float], partition_list: Sequence[Any], n: int,
                  fixed: Optional[Mapping[str, Any]] = None, t_max: float = 5.0, tol: float = 1e-6,
                  eps_neg: float = EPS_NEG, n_jobs: int = 1,
                  parameter: Optional[str] = None) -> List[ThresholdCurve]:
    """
    Threshold curves T_th(parameter), one per partition family

    The swept parameter is c, mu, J or B depending on the family (see
    SWEEP_PARAMETER). Grid points are evaluated by a joblib pool and
    collected in grid order.

    Args:
        family (str): System family
        param_grid (sequence): Values of the swept parameter
        partition_list (sequence): Partition kinds or config mappings
        n (int): System size
        fixed (mapping): Parameters held fixed (e.g. {'B': 1.9})
        t_max (float): Upper end of each threshold scan
        tol (float): Bisection tolerance
        eps_neg (float): Entanglement-detection floor
        n_jobs (int): Worker count for joblib
        parameter (str): Swept coupling, SWEEP_PARAMETER[family] if omitted

    Returns:
        list: ThresholdCurve per partition, in the order of partition_list
    """
    if len(param_grid) == 0:
        raise ValidationError("Phase diagram needs a nonempty parameter grid")
    if family not in SWEEP_PARAMETER:
        raise ValidationError(f"Unknown system family: {family}")
    parameter = parameter or SWEEP_PARAMETER[family]
    fixed = dict(fixed or {})
    jobs = [
        delayed(_threshold_task)(family, n, {**fixed, parameter: value}, setting, t_max, tol, eps_neg)
        for value in param_grid for setting in partition_list
    ]
    results = Parallel(n_jobs=n_jobs)(jobs)
    curves = _collect_curves(family, parameter, list(param_grid), results, len(partition_list), tol, t_max)
    logger.info(f"Computed {len(curves)} threshold curves for {family} over {len(param_grid)} values of {parameter}")
    return curves


def size_scan(family: str, n_list: Sequence[int], fixed: Mapping[str, Any], partition_list: Sequence[Any],
              t_max: float = 5.0, tol: float = 1e-6, eps_neg: float = EPS_NEG,
              n_jobs: int = 1) -> List[ThresholdCurve]:
    """
    Threshold curves T_th(n) at fixed couplings, one per partition family
    """
    if any(n % 2 != 0 for n in n_list):
        raise ValidationError(f"System sizes must be even, got {list(n_list)}")
    jobs = [
        delayed(_threshold_task)(family, n, fixed, setting, t_max, tol, eps_neg)
        for n in n_list for setting in partition_list
    ]
    results = Parallel(n_jobs=n_jobs)(jobs)
    curves = _collect_curves(family, 'n', [float(n) for n in n_list], results, len(partition_list), tol, t_max)
    logger.info(f"Computed size scan of {family} over n={list(n_list)}")
    return curves


def threshold_gap(curves: Sequence[ThresholdCurve], upper: str = 'even_odd',
                  lower: str = 'half_half(offset=0)') -> np.ndarray:
    """T_th(upper) - T_th(lower) along the shared parameter grid"""
    by_name = {curve.partition: curve for curve in curves}
    return by_name[upper].thresholds - by_name[lower].thresholds


def contiguous_thresholds(system: EntanglementSystem, t_max: float = 5.0, tol: float = 1e-6,
                          eps_neg: float = EPS_NEG) -> ThresholdCurve:
    """
    Thresholds of the contiguous splits n/2-m : n/2+m for m = 0..n/2-1
    """
    samples = []
    for m in range(system.n // 2):
        partition = make_partition('contiguous', system.n, m=m)
        samples.append((float(m), threshold_temperature(system, partition, t_max=t_max, tol=tol, eps_neg=eps_neg)))
    return ThresholdCurve(family=system.family, partition='contiguous', parameter='m',
                          samples=tuple(samples), tolerance=tol, bracket=(T_MIN, t_max))


def negativity_curve(system: EntanglementSystem, partitions: Sequence[Partition],
                     temperatures: Sequence[float]) -> pd.DataFrame:
    """
    Entanglement of several partitions along a temperature grid

    Returns:
        DataFrame: Columns (T, partition, value)
    """
    rows = []
    for T in temperatures:
        for partition, value in zip(partitions, system.negativities(T, partitions)):
            rows.append({'T': float(T), 'partition': partition.name, 'value': value})
    return pd.DataFrame(rows, columns=['T', 'partition', 'value'])


def field_scan(family: str, n: int, fields: Sequence[float], temperature: float,
               partition_list: Sequence[Any], J: float = 1.0, boundary: str = 'periodic',
               n_jobs: int = 1) -> pd.DataFrame:
    """
    Spin-chain entanglement as a function of the field B at fixed T

    Returns:
        DataFrame: Columns (B, partition, value)
    """
    def evaluate(B: float) -> List[Dict[str, Any]]:
        system = get_system(family, n, J=J, B=B, boundary=boundary)
        partitions = [partition_from_setting(setting, n) for setting in partition_list]
        values = system.negativities(temperature, partitions)
        return [{'B': float(B), 'partition': p.name, 'value': v} for p, v in zip(partitions, values)]

    chunks = Parallel(n_jobs=n_jobs)(delayed(evaluate)(B) for B in fields)
    return pd.DataFrame([row for chunk in chunks for row in chunk], columns=['B', 'partition', 'value'])


def pair_coverage(n: int, offsets: Sequence[int]) -> bool:
    """
    True if every pair of sites is split by at least one of the half-half cuts
    """
    cuts = [make_partition('half_half', n, offset=offset) for offset in offsets]
    return all(any(cut.separates(i, j) for cut in cuts) for i, j in combinations(range(n), 2))


def _bisect_boundary(inside, t_inside: float, t_outside: float, tol: float) -> Tuple[float, List[WindowEvidence]]:
    trail = []
    while abs(t_outside - t_inside) > tol:
        middle = 0.5 * (t_inside + t_outside)
        record = inside(middle)
        trail.append(record)
        if record.inside():
            t_inside = middle
        else:
            t_outside = middle
    return t_inside, trail


def certify_bound_window(system: EntanglementSystem, temperatures: Optional[Sequence[float]] = None,
                         t_max: float = 5.0, eps_neg: float = EPS_NEG, tol: float = 1e-4,
                         seed: int = 0) -> BoundWindow:
    """
    Certify a temperature window of bound entanglement

    At each probe T the even-odd negativity and the half-half negativities are
    computed. Translation-invariant rings check OFFSET_SAMPLES random offsets
    and fall back to all n/2 distinct cuts when their values spread by more
    than 1e-10; other systems always use all cuts (offsets o and o+n/2 give the
    same bipartition). The longest run of probes with all half-half cuts PPT and
    even-odd NPPT is refined by bisection at both ends.

    Args:
        system (EntanglementSystem): Ring with an even number of sites
        temperatures (sequence): Probe grid; 256 log-spaced points up to t_max if omitted
        t_max (float): Upper end of the default grid
        eps_neg (float): Entanglement-detection floor
        tol (float): Absolute tolerance of the boundary refinement
        seed (int): Seed for the sampled offsets

    Returns:
        BoundWindow: Certified interval with evidence records
    """
    n = system.n
    if n % 2 != 0:
        raise ValidationError(f"Window certification needs an even ring, got n={n}")
    grid = np.sort(np.asarray(temperatures if temperatures is not None
                              else np.geomspace(1e-2, t_max, WINDOW_POINTS), dtype=float))
    even_odd = make_partition('even_odd', n)
    all_offsets = tuple(range(n // 2))
    if system.is_translation_invariant and len(all_offsets) > OFFSET_SAMPLES:
        rng = np.random.default_rng(seed)
        state = {'offsets': tuple(sorted(int(o) for o in rng.choice(all_offsets, OFFSET_SAMPLES, replace=False))),
                 'mode': 'sampled'}
    else:
        state = {'offsets': all_offsets, 'mode': 'all'}

    def probe(T: float) -> WindowEvidence:
        cuts = [make_partition('half_half', n, offset=o) for o in state['offsets']]
        values = system.negativities(T, [even_odd] + cuts)
        half_half = dict(zip(state['offsets'], values[1:]))
        if state['mode'] == 'sampled' and np.ptp(values[1:]) > OFFSET_SPREAD_TOL:
            logger.warning(f"Half-half values depend on the offset at T={T:g}; checking all {n // 2} cuts")
            state.update(offsets=all_offsets, mode='all')
            return probe(T)
        return WindowEvidence(float(T), float(values[0]), half_half)

    evidence = [probe(T) for T in grid]
    flags = np.array([record.inside(eps_neg) for record in evidence])
    if not flags.any():
        raise NoWindow(f"No bound-entanglement window found for {system.describe()} on the probe grid")

    # Longest run of consecutive inside probes, measured in temperature
    runs, start = [], None
    for index, flag in enumerate(flags):
        if flag and start is None:
            start = index
        if not flag and start is not None:
            runs.append((start, index - 1))
            start = None
    if start is not None:
        runs.append((start, len(flags) - 1))
    first, last = max(runs, key=lambda run: grid[run[1]] - grid[run[0]])

    t_low, t_high = grid[first], grid[last]
    if first > 0:
        t_low, trail = _bisect_boundary(probe, grid[first], grid[first - 1], tol)
        evidence.extend(trail)
    if last < len(grid) - 1:
        t_high, trail = _bisect_boundary(probe, grid[last], grid[last + 1], tol)
        evidence.extend(trail)

    evidence.sort(key=lambda record: record.temperature)
    window = BoundWindow(
        t_low=float(t_low),
        t_high=float(t_high),
        evidence=tuple(evidence),
        pair_coverage=pair_coverage(n, all_offsets),
        offsets=state['offsets'],
        offsets_mode=state['mode'],
        system=system.describe(),
    )
    logger.info(f"Certified bound-entanglement window ({window.t_low:.4g}, {window.t_high:.4g}) for {window.system}")
    return window


def area_law_probe(family: str, n_list: Sequence[int], fixed: Mapping[str, Any], partition_kind: str,
                   temperature: float, n_jobs: int = 1) -> AreaLawReport:
    """
    Fit E(n) for one partition kind: linear fit plus plateau statistics

    Even-odd entanglement grows linearly with n (volume of the boundary), the
    half-half one saturates (fixed boundary).

    Args:
        family (str): System family
        n_list (sequence): At least four even sizes
        fixed (mapping): Couplings of the family
        partition_kind (str): Partition kind evaluated at every size
        temperature (float): Temperature of the thermal state
        n_jobs (int): Worker count for joblib

    Returns:
        AreaLawReport: Slope, intercept, R^2, residuals and plateau statistics
    """
    if len(n_list) < 4:
        raise ValidationError(f"Area-law probe needs at least 4 sizes, got {len(n_list)}")
    sizes = np.array(sorted(n_list), dtype=int)

    def evaluate(n: int) -> float:
        system = get_system(family, int(n), **fixed)
        return system.negativity(temperature, make_partition(partition_kind, int(n)))

    values = np.array(Parallel(n_jobs=n_jobs)(delayed(evaluate)(n) for n in sizes), dtype=float)
    fit = linregress(sizes.astype(float), values)
    residuals = values - (fit.intercept + fit.slope * sizes)
    spread = float(np.sum((values - values.mean()) ** 2))
    r_squared = 1.0 - float(np.sum(residuals ** 2)) / spread if spread > 0 else 1.0
    report = AreaLawReport(
        partition=partition_kind,
        sizes=tuple(int(n) for n in sizes),
        values=tuple(float(v) for v in values),
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=r_squared,
        residuals=tuple(float(r) for r in residuals),
        saturation_value=float(values[-1]),
        saturation_delta=float(abs(values[-1] - values[-2])),
    )
    logger.info(f"Area-law probe {partition_kind}: slope={report.slope:.4g}, R^2={report.r_squared:.6f}")
    return report
