"""Tests for configuration files and flag precedence."""
import tempfile
from dataclasses import fields
from pathlib import Path
from unittest import mock

from django.test import SimpleTestCase, override_settings

from solitons import catalog, config, verify
from solitons.serializers import RunConfigSerializer
from solitons.exceptions import ConfigError

CUSTOM = '''
# plane wave with the wrong potential coefficient
[problem]
coordinates = "t x y"
potential = "0.25*y^2"
lambda = 0

[metric]
g.t.y = "1"
g.x.x = "1"
g.y.y = "x^2"

[run]
samples = 12
seed = 7

[box]
y = -0.5:0.5

[tolerances]
soliton_residual = 1e-6
'''


class ParseConfigTest(SimpleTestCase):
    def test_sections(self):
        """Every section of a config file is read"""
        values = config.parse_config_text(CUSTOM)
        self.assertEqual(values['coordinates'], ('t', 'x', 'y'))
        self.assertEqual(values['potential'], '0.25*y^2')
        self.assertEqual(values['lam'], 0.0)
        self.assertEqual(values['metric'], {('t', 'y'): '1', ('x', 'x'): '1', ('y', 'y'): 'x^2'})
        self.assertEqual(values['samples'], 12)
        self.assertEqual(values['seed'], 7)
        self.assertEqual(values['box'], {'y': (-0.5, 0.5)})
        self.assertEqual(values['tolerances'], {'soliton_residual': 1e-6})

    def test_params_are_numbers_when_possible(self):
        """Numeric parameters become floats and the rest stay strings"""
        values = config.parse_config_text('[params]\nb = 2\na = "1 + y"\n')
        self.assertEqual(values['params'], {'b': 2.0, 'a': '1 + y'})

    def test_unknown_section(self):
        """Unknown sections are reported with their line"""
        with self.assertRaisesMessage(ConfigError, '<config>:1: unknown section [bounds]'):
            config.parse_config_text('[bounds]\nx = 0:1\n')

    def test_entry_outside_section(self):
        """Entries need a section header"""
        with self.assertRaises(ConfigError):
            config.parse_config_text('samples = 3\n')

    def test_bad_metric_key(self):
        """Metric keys name two coordinates"""
        with self.assertRaisesMessage(ConfigError, 'metric keys look like g.<coord>.<coord>'):
            config.parse_config_text('[metric]\ngtt = "-1"\n')

    def test_bad_interval(self):
        """Intervals need two numbers with lo < hi"""
        for text in ('x = 1:0', 'x = 0', 'x = a:b'):
            with self.subTest(text=text), self.assertRaises(ConfigError):
                config.parse_config_text(f'[box]\n{text}\n')

    def test_missing_file(self):
        """An unreadable file is a configuration error"""
        with self.assertRaises(ConfigError):
            config.load_config_file('/nonexistent/lab.cfg')


class BuildConfigTest(SimpleTestCase):
    def test_settings_defaults(self):
        """Without a file or flags the settings apply"""
        run = config.build_config('verify', {'family': 'N_b'})
        self.assertEqual(run.samples, 100)
        self.assertEqual(run.seed, 42)
        self.assertEqual(run.tolerances['soliton_residual'], 1e-9)

    @override_settings(SOLITONLAB={'SAMPLES': 5, 'SEED': 1, 'TOLERANCES': {'bochner': 1e-4}})
    def test_settings_override(self):
        """Settings tolerances sit on top of the module defaults"""
        run = config.build_config('verify', {})
        self.assertEqual((run.samples, run.seed), (5, 1))
        self.assertEqual(run.tolerances['bochner'], 1e-4)
        self.assertEqual(run.tolerances['soliton_residual'], 1e-9)
        self.assertEqual(set(run.tolerances), set(config.DEFAULT_TOLERANCES))

    def test_flags_beat_file(self):
        """settings < metric file < flags"""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'lab.cfg'
            path.write_text(CUSTOM)
            run = config.build_config('verify', {
                'metric_file': str(path), 'samples': 3, 'lambda': 0.5,
                'box': [['x=0:1', 'y=0:2']], 'tol': ['bochner=1e-5'], 'param': ['k=2'],
            })
        self.assertEqual(run.samples, 3)
        self.assertEqual(run.seed, 7)
        self.assertEqual(run.lam, 0.5)
        self.assertEqual(run.box, {'x': (0.0, 1.0), 'y': (0.0, 2.0)})
        self.assertEqual(run.tolerances['soliton_residual'], 1e-6)
        self.assertEqual(run.tolerances['bochner'], 1e-5)
        self.assertEqual(run.tolerances['trace_identity'], 1e-8)
        self.assertEqual(run.params, {'k': 2.0})

    def test_bad_flag(self):
        """Malformed flags and unknown modes are configuration errors"""
        with self.assertRaises(ConfigError):
            config.build_config('verify', {'param': ['b']})
        with self.assertRaises(ConfigError):
            config.build_config('verify', {'tol': ['bochner=small']})
        with self.assertRaises(ConfigError):
            config.build_config('plot', {})

    def test_fields_match_serializer(self):
        """Every RunConfig field is validated and nothing else is carried"""
        self.assertEqual({f.name for f in fields(config.RunConfig)},
                         set(RunConfigSerializer().fields))


class DefaultTolerancesTest(SimpleTestCase):
    def test_unconfigured_settings(self):
        """Without Django settings the module defaults are used"""
        with mock.patch('solitons.config.settings') as settings:
            settings.configured = False
            self.assertEqual(config.default_tolerances(), config.DEFAULT_TOLERANCES)
            self.assertEqual(config.lab_setting('SAMPLES', 100), 100)

    @override_settings(SOLITONLAB={})
    def test_checks_without_tolerance_setting(self):
        """run_checks needs no TOLERANCES entry in settings"""
        problem, expected = catalog.instantiate('N_b')
        report = verify.run_checks(problem, expected, catalog.sample_points(problem, 3, 0), {})
        self.assertTrue(report.passed, report.failed)
        self.assertEqual(report.check('bochner').tolerance, config.DEFAULT_TOLERANCES['bochner'])
