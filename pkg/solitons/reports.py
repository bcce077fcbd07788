"""Rendering of check and classification reports as JSON or text tables."""
import json
import math
import re

import numpy as np
import pandas as pd

from .serializers import (CheckReportSerializer, FamilyMatchSerializer,
                          WalkerClassificationSerializer)

SIGNIFICANT_DIGITS = 17

_FLOAT_MARK = '\x1ffloat:'
_FLOAT_TOKEN = re.compile(r'"\\u001ffloat:([^"]*)"')


def _format_float(value):
    return format(value, f'.{SIGNIFICANT_DIGITS}g')


def _mark_floats(data):
    """Floats become marker strings so the encoder leaves their digits alone."""
    if isinstance(data, dict):
        return {k: _mark_floats(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [_mark_floats(v) for v in data]
    if isinstance(data, (bool, np.bool_)):
        return bool(data)
    if isinstance(data, (int, np.integer)):
        return int(data)
    if isinstance(data, (float, np.floating)):
        value = float(data)
        if not math.isfinite(value):
            return None
        return _FLOAT_MARK + _format_float(value)
    return data


def to_json(data):
    """JSON text with every float written to 17 significant digits; non-finite -> null."""
    text = json.dumps(_mark_floats(data), indent=2, sort_keys=False)
    return _FLOAT_TOKEN.sub(lambda m: m.group(1), text) + '\n'


def check_report_data(report):
    return CheckReportSerializer(report).data


def _potential_text(potential):
    gamma = "gamma(y) with gamma'' = (phi_xx - alpha phi_x)/2, gamma(y0) = gamma'(y0) = 0"
    if potential.alpha:
        return f'{potential.alpha!r}*x + ' + gamma
    return gamma


def classification_data(phi, cls, potential=None, match=None, reconstruction=None):
    data = {'phi': phi, **WalkerClassificationSerializer(cls).data}
    data['potential'] = None if potential is None else {
        'expr': _potential_text(potential), 'y0': potential.y0,
        'max_residual': potential.max_residual}
    data['family_match'] = None if match is None else FamilyMatchSerializer(match).data
    data['checks'] = [] if reconstruction is None else [reconstruction]
    return data


def _cell(value):
    if value is None:
        return '-'
    if isinstance(value, float):
        return f'{value:.3e}'
    return str(value)


def check_table(report):
    """pandas table of the checks, one row each."""
    frame = pd.DataFrame([{
        'check': c.name,
        'max_residual': _cell(c.max_residual),
        'tolerance': _cell(c.tolerance),
        'status': c.status,
        'points': c.points_evaluated,
    } for c in report.checks])
    return frame.to_string(index=False)


def check_report_text(report):
    profile = report.profile
    lines = [
        f'problem: {report.problem}',
        f'dim: {report.dim}  lambda: {report.lam!r}',
        '',
        check_table(report),
        '',
        f"Ric spectrum: {_spectrum_text(profile['ric_spectrum'])}  rank {profile['ric_rank']}"
        f"  nilpotency {_cell(profile['ric_nilpotency'])}",
        f"H_f spectrum: {_spectrum_text(profile['hf_spectrum'])}",
        f"grad f: {profile['grad_f_causal_type']}  |grad f|^2 = {profile['grad_f_norm_sq']:.6g}",
    ]
    if report.constancy:
        lines.append('spread: ' + ', '.join(f'{k} {v:.3e}' for k, v in report.constancy.items()))
    lines.extend(f'note: {note}' for note in report.notes)
    lines.append('result: ' + ('PASS' if report.passed else 'FAIL (' + ', '.join(report.failed) + ')'))
    return '\n'.join(lines) + '\n'


def _spectrum_text(spectrum):
    parts = []
    for re_part, im_part in spectrum:
        parts.append(f'{re_part:.6g}' if im_part == 0.0 else f'{re_part:.6g}{im_part:+.6g}i')
    return '[' + ', '.join(parts) + ']'


def classification_text(data):
    lines = [f"phi: {data['phi']}", f"verdict: {data['verdict']}"]
    if data['alpha'] is not None:
        lines.append(f"alpha: {data['alpha']:.12g}")
    lines.append(f"max |phi_xx| {data['max_phi_xx']:.3e}  max |phi_xxx| {data['max_phi_xxx']:.3e}"
                 f"  grid points {data['grid_points']}")
    if data['potential'] is not None:
        potential = data['potential']
        lines.append(f"potential: {potential['expr']}  (y0 = {potential['y0']!r})")
    if data['family_match'] and data['family_match']['family']:
        match = data['family_match']
        detail = ', '.join(f'{k}={v:.12g}' for k, v in sorted(match['params'].items()))
        lines.append(f"homogeneous family: {match['family']}" + (f' ({detail})' if detail else ''))
    if data['checks']:
        frame = pd.DataFrame([{
            'check': c['name'], 'max_residual': _cell(c['max_residual']),
            'tolerance': _cell(c['tolerance']), 'status': c['status'],
            'points': c['points_evaluated'],
        } for c in data['checks']])
        lines.extend(['', frame.to_string(index=False)])
    return '\n'.join(lines) + '\n'


def render_check_report(report, fmt):
    return to_json(check_report_data(report)) if fmt == 'json' else check_report_text(report)


def render_classification(data, fmt):
    return to_json(data) if fmt == 'json' else classification_text(data)
