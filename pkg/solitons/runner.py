"""Mode dispatch shared by the management commands."""
import logging
from dataclasses import dataclass
from typing import Any

from rest_framework.exceptions import ValidationError

from . import catalog, reports, walker3
from .config import lab_setting
from .exceptions import CatalogError, ConfigError, DegenerateGridError
from .serializers import CheckRecordSerializer, RunConfigSerializer
from .verify import PASS, CheckRecord, run_checks

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_EVALUATION = 3


@dataclass
class RunResult:
    status: int
    output: str
    report: Any = None


def validate(config):
    try:
        RunConfigSerializer.check(config)
    except ValidationError as exc:
        raise ConfigError(_flatten_errors(exc.detail)) from exc


def _flatten_errors(detail, prefix=''):
    if isinstance(detail, dict):
        return '; '.join(_flatten_errors(v, f'{k}: ' if k != 'non_field_errors' else '')
                         for k, v in detail.items())
    if isinstance(detail, list):
        return '; '.join(_flatten_errors(v, prefix) for v in detail)
    return f'{prefix}{detail}'


def load_problem(config):
    """(SolitonProblem, ExpectedProfile) for a verify config."""
    if config.family:
        params = dict(config.params)
        if config.lam is not None:
            params['lambda'] = config.lam
        return catalog.instantiate(config.family, params, config.box or None)
    return catalog.custom_problem(
        config.coordinates, config.metric, config.potential,
        0.0 if config.lam is None else config.lam, config.params, config.box or None,
        description=f'custom metric on ({", ".join(config.coordinates)})')


def run_verify(config):
    problem, expected = load_problem(config)
    points = catalog.sample_points(problem, config.samples, config.seed)
    report = run_checks(
        problem, expected, points, config.tolerances,
        rank_tol=float(lab_setting('RANK_TOL', 1e-8)),
        causal_tol=float(lab_setting('CAUSAL_TOL', 1e-9)),
        n_jobs=config.n_jobs, grid_size=int(lab_setting('GRID_SIZE', 5)))
    status = EXIT_OK if report.passed else EXIT_FAILED
    return RunResult(status, reports.render_check_report(report, config.format), report)


def _classify_box(config):
    box = dict(config.box)
    unknown = set(box) - {'x', 'y'}
    if unknown:
        raise ConfigError(f'classify boxes name x and y only, got {", ".join(sorted(unknown))}')
    return box.get('x', (-1.0, 1.0)), box.get('y', (-1.0, 1.0))


def run_classify(config):
    x_box, y_box = _classify_box(config)
    size = int(lab_setting('GRID_SIZE', 5))
    tol = float(lab_setting('CLASSIFY_TOL', 1e-8))
    recon_tol = float(config.tolerances.get('reconstruction', walker3.DEFAULT_TOL))
    params = {k: v for k, v in config.params.items() if isinstance(v, float)}
    grid = walker3.tensor_grid(x_box, y_box, size)
    cls = walker3.classify(config.phi, grid, params, tol)
    logger.info('classified phi=%s as %s', config.phi, cls.verdict)

    potential = record = match = None
    if cls.is_soliton:
        check_grid = walker3.staggered_grid(x_box, y_box, size)
        potential = walker3.construct_potential(
            config.phi, cls, 0.5 * sum(y_box), params, recon_tol, check_grid)
        record = CheckRecordSerializer(CheckRecord(
            'reconstruction', potential.max_residual, recon_tol, PASS, len(check_grid))).data
        match = walker3.match_homogeneous_family(config.phi, grid, params, tol)
    data = reports.classification_data(config.phi, cls, potential, match, record)
    status = EXIT_FAILED if cls.verdict == walker3.NOT_SOLITON else EXIT_OK
    return RunResult(status, reports.render_classification(data, config.format), data)


def catalog_rows():
    return [{'family': name, 'defaults': family.defaults, 'description': family.description}
            for name, family in catalog.FAMILIES.items()]


def run_catalog_list(config):
    rows = catalog_rows()
    if config.format == 'json':
        return RunResult(EXIT_OK, reports.to_json(rows), rows)
    lines = []
    for row in rows:
        defaults = ', '.join(f'{k}={v}' for k, v in row['defaults'].items())
        lines.append(f"{row['family']}: {row['description']}")
        lines.append(f'    defaults: {defaults}')
    return RunResult(EXIT_OK, '\n'.join(lines) + '\n', rows)


MODE_RUNNERS = {
    'verify': run_verify,
    'classify': run_classify,
    'catalog-list': run_catalog_list,
}


def run(config):
    """Validate and execute a RunConfig; returns a RunResult with exit status and output.

    Configuration problems raise ConfigError; evaluation failures propagate as
    EvaluationError with the offending point attached.
    """
    validate(config)
    try:
        return MODE_RUNNERS[config.mode](config)
    except (CatalogError, DegenerateGridError) as exc:
        raise ConfigError(str(exc)) from exc
