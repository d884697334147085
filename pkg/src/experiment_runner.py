import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import pandas as pd

from src.config import RunConfig
from src.macroscopic_limit import threshold_even_odd_limit, threshold_halfhalf_upper
from src.partitions import make_partition
from src.scan_certify import (
    ThresholdCurve,
    area_law_probe,
    certify_bound_window,
    field_scan,
    negativity_curve,
    phase_diagram,
    size_scan,
)
from src.systems import get_system

logger = logging.getLogger(__name__)

# Column suffixes of threshold tables
SHORT_NAMES = {
    'even_odd': 'eo',
    'half_half': 'hh',
    'one_vs_rest': '1vr',
    'contiguous': 'cont',
}


@dataclass
class RunResult:
    """Rows of one run, their column order and command-specific summary values"""
    frame: pd.DataFrame
    schema: Tuple[str, ...]
    extra: Dict[str, Any] = field(default_factory=dict)


class ExperimentRunner:
    def __init__(self, config: RunConfig):
        """
        Initialize the runner

        Args:
            config (RunConfig): Validated run configuration
        """
        self.config = config

    def run(self) -> RunResult:
        """
        Execute the configured command

        Returns:
            RunResult: Rows ready for CsvExporter.emit_csv
        """
        handlers = {
            'harmonic-negativity': self.negativity_table,
            'spin-negativity': self.negativity_table,
            'harmonic-phase': self.threshold_table,
            'spin-phase': self.threshold_table,
            'harmonic-limit': self.limit_table,
            'certify': self.window_table,
        }
        logger.info(f"Running {self.config.command} for {self.config.family} (preset {self.config.preset})")
        try:
            return handlers[self.config.command]()
        except Exception as e:
            logger.error(f"{self.config.command} failed: {str(e)}")
            raise

    def _system_params(self, **overrides: Any) -> Dict[str, Any]:
        params = dict(self.config.couplings)
        if self.config.is_spin:
            params['boundary'] = self.config.boundary
        params.update(overrides)
        return params

    def negativity_table(self) -> RunResult:
        """
        E versus (n, T, partition); spin runs add the field B as a column

        Harmonic rows hold E_l, spin rows hold E_N.
        """
        config = self.config
        frames = []
        if config.is_spin:
            fields = config.sweep or (config.couplings.get('B', 0.0),)
            schema = ('n', 'B', 'T', 'partition', 'E_N')
            for n in config.sizes:
                for T in config.temperatures:
                    frame = field_scan(config.family, n, fields, T, config.partitions,
                                       J=config.couplings.get('J', 1.0), boundary=config.boundary,
                                       n_jobs=config.n_jobs)
                    frames.append(frame.assign(n=n, T=float(T)).rename(columns={'value': 'E_N'}))
        else:
            schema = ('n', 'T', 'partition', 'E_l')
            for n in config.sizes:
                system = get_system(config.family, n, **self._system_params())
                partitions = [make_partition(kind, n) for kind in config.partitions]
                frame = negativity_curve(system, partitions, config.temperatures)
                frames.append(frame.assign(n=n).rename(columns={'value': 'E_l'}))
        table = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=list(schema))
        result = RunResult(table[list(schema)], schema)
        if config.area_law:
            result.extra['area_law'] = self._area_law_reports()
        return result

    def _area_law_reports(self) -> List[Dict[str, Any]]:
        config = self.config
        if len(config.sizes) < 4:
            logger.warning(f"Area-law fit skipped: needs at least 4 sizes, got {len(config.sizes)}")
            return []
        reports = []
        for T in config.temperatures:
            for kind in config.partitions:
                report = area_law_probe(config.family, config.sizes, self._system_params(), kind, T,
                                        n_jobs=config.n_jobs)
                reports.append({
                    'T': float(T),
                    'partition': kind,
                    'slope': report.slope,
                    'intercept': report.intercept,
                    'r_squared': report.r_squared,
                    'saturation_value': report.saturation_value,
                    'saturation_delta': report.saturation_delta,
                })
        return reports

    def threshold_table(self) -> RunResult:
        """
        Threshold temperatures per partition: along the sweep for a single
        size, along n otherwise
        """
        config = self.config
        if len(config.sizes) == 1:
            parameter = config.sweep_parameter
            curves = phase_diagram(config.family, config.sweep, config.partitions, config.sizes[0],
                                   fixed=self._system_params(), t_max=config.t_max, tol=config.tolerance,
                                   n_jobs=config.n_jobs, parameter=parameter)
        else:
            parameter = 'n'
            curves = size_scan(config.family, config.sizes, self._system_params(), config.partitions,
                               t_max=config.t_max, tol=config.tolerance, n_jobs=config.n_jobs)
        return self._wide(curves, parameter)

    def _wide(self, curves: List[ThresholdCurve], parameter: str) -> RunResult:
        columns = [f"T_{SHORT_NAMES[kind]}" for kind in self.config.partitions]
        schema = (parameter, *columns)
        table = pd.DataFrame({parameter: curves[0].parameters})
        if parameter == 'n':
            table[parameter] = table[parameter].astype(int)
        for column, curve in zip(columns, curves):
            table[column] = curve.thresholds
        extra = {}
        if 'T_eo' in columns and 'T_hh' in columns:
            extra['gap_eo_hh'] = [float(g) for g in table['T_eo'] - table['T_hh']]
        return RunResult(table, schema, extra)

    def limit_table(self) -> RunResult:
        """Macroscopic-limit curves (c, T_eo_limit, T_hh_upper)"""
        config = self.config
        rows = []
        for c in config.sweep:
            rows.append({
                'c': float(c),
                'T_eo_limit': threshold_even_odd_limit(c),
                'T_hh_upper': threshold_halfhalf_upper(c, m=config.m, s=config.s, tol=config.tolerance),
            })
            logger.debug(f"c={c}: {rows[-1]}")
        schema = ('c', 'T_eo_limit', 'T_hh_upper')
        return RunResult(pd.DataFrame(rows, columns=list(schema)), schema)

    def window_table(self) -> RunResult:
        """Probe-by-probe evidence of a bound-entanglement window"""
        config = self.config
        system = get_system(config.family, config.sizes[0], **self._system_params())
        temperatures = config.temperatures if len(config.temperatures) > 1 else None
        window = certify_bound_window(system, temperatures, t_max=config.t_max)
        rows = [{
            'T': record.temperature,
            'E_eo': record.even_odd,
            'E_hh_max': max(record.half_half.values()),
            'inside': bool(record.inside()),
        } for record in window.evidence]
        schema = ('T', 'E_eo', 'E_hh_max', 'inside')
        extra = {
            't_low': window.t_low,
            't_high': window.t_high,
            'pair_coverage': window.pair_coverage,
            'offsets': list(window.offsets),
            'offsets_mode': window.offsets_mode,
            'scope': window.scope,
        }
        return RunResult(pd.DataFrame(rows, columns=list(schema)), schema, extra)
