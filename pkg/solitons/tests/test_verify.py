"""Tests for the soliton identity checks."""
from dataclasses import replace

import numpy as np
from django.test import SimpleTestCase

from solitons import catalog, verify
from solitons.catalog import ExpectedProfile
from solitons.config import default_tolerances
from solitons.exceptions import EvaluationError
from solitons.exprlang import Binary, bind, parse
from solitons.geometry import MetricSpec

FAMILIES = ('minkowski_rigid', 'timelike_linear', 'sphere_rigid', 'cahen_wallach', 'walker3',
            'thm12_case1', 'thm12_case2', 'N_b', 'P_c', 'CWplus', 'CWminus')
WALKER_FAMILIES = ('walker3', 'thm12_case1', 'thm12_case2', 'N_b', 'P_c', 'CWplus', 'CWminus')


def checked(name, params=None, count=8, seed=42, box=None):
    problem, expected = catalog.instantiate(name, params, box)
    points = catalog.sample_points(problem, count, seed)
    return verify.run_checks(problem, expected, points, default_tolerances())


def worst_residual(problem, count=20, seed=42):
    return max(float(np.max(np.abs(verify.soliton_residual(problem, point))))
               for point in catalog.sample_points(problem, count, seed))


class CatalogPassesTest(SimpleTestCase):
    def test_every_family_passes(self):
        """Each catalog family satisfies every asserted check"""
        for name in FAMILIES:
            with self.subTest(family=name):
                report = checked(name)
                self.assertTrue(report.passed, f'{name} failed {report.failed}')
                self.assertEqual([c.name for c in report.checks], list(verify.CHECK_ORDER))

    def test_non_default_parameters(self):
        """Families pass away from their default parameters"""
        for name, params in (('N_b', {'b': -2.0}), ('P_c', {'c': -1.0, 'k': 4.0, 'a1': 0.5}),
                             ('cahen_wallach', {'kappa1': 2.0, 'kappa2': 0.5, 'a1': 1.0}),
                             ('thm12_case1', {'alpha': 0.5, 'a': '2 + y', 'b': 'y^2',
                                              'c': 'sin(y)'}),
                             ('minkowski_rigid', {'dim': 4, 'lambda': -0.3})):
            with self.subTest(family=name):
                report = checked(name, params, count=5)
                self.assertTrue(report.passed, f'{name} failed {report.failed}')

    def test_overridden_boxes(self):
        """Families whose potential depends on the box pass on a moved y interval"""
        for name, params, box in (
                ('P_c', {'c': 1.0, 'k': -1.5, 'a1': 1.0}, {'y': (-3.0, -2.0)}),
                ('thm12_case2', {'a': '2/(1-y)^2', 'a1': 5.0}, {'y': (1.5, 2.5)})):
            with self.subTest(family=name):
                report = checked(name, params, count=6, box=box)
                self.assertTrue(report.passed, f'{name} failed {report.failed}')

    def test_statuses(self):
        """Inapplicable checks are marked rather than passed"""
        report = checked('sphere_rigid', count=4)
        self.assertEqual(report.check('steady_structure').status, verify.NOT_APPLICABLE)
        self.assertIsNone(report.check('steady_structure').max_residual)
        self.assertEqual(report.check('rigid_eigenstructure').status, verify.PASS)
        report = checked('N_b', count=4)
        self.assertEqual(report.check('schouten_codazzi').status, verify.INFO)
        self.assertEqual(report.check('rigid_eigenstructure').status, verify.NOT_APPLICABLE)
        self.assertEqual(report.check('steady_hessian_norm').status, verify.PASS)

    def test_backbone_hundred_points(self):
        """The soliton residual stays below 1e-9 at 100 seeded points of every family"""
        for name in FAMILIES:
            with self.subTest(family=name):
                problem, _ = catalog.instantiate(name)
                worst = max(float(np.max(np.abs(verify.soliton_residual(problem, point))))
                            for point in catalog.sample_points(problem, 100, 42))
                self.assertLess(worst, 1e-9)


class PerturbationTest(SimpleTestCase):
    def test_wrong_potential_coefficient(self):
        """f = y^2/4 on phi = x^2 fails the soliton equation"""
        problem, expected = catalog.walker_problem('x^2', '0.25*y^2')
        points = catalog.sample_points(problem, 6, 1)
        report = verify.run_checks(problem, expected, points, {})
        record = report.check('soliton_residual')
        self.assertEqual(record.status, verify.FAIL)
        self.assertGreater(record.max_residual, 1e-3)
        self.assertFalse(report.passed)

    def test_perturbed_n_b(self):
        """A quadratic term added to f = x fails on phi = e^x"""
        problem, expected = catalog.walker_problem('exp(x)', 'x + 0.01*x^2')
        report = verify.run_checks(problem, expected, catalog.sample_points(problem, 6, 1), {})
        self.assertGreater(report.check('soliton_residual').max_residual, 1e-3)

    def test_cubic_phi_perturbation(self):
        """phi + 0.01 x^3 fails the soliton equation for every Walker family"""
        for name in WALKER_FAMILIES:
            with self.subTest(family=name):
                problem, _ = catalog.instantiate(name)
                phi = Binary('+', problem.walker_phi, parse('0.01*x^3'))
                metric = MetricSpec.from_entries(
                    catalog.WALKER_COORDINATES,
                    {('y', 't'): '1', ('x', 'x'): '1', ('y', 'y'): phi}, problem.metric.params)
                self.assertGreater(worst_residual(replace(problem, metric=metric)), 1e-3)

    def test_cubic_potential_perturbation(self):
        """f + 0.01 y^3 fails the soliton equation for every family with a y coordinate"""
        for name in FAMILIES:
            problem, _ = catalog.instantiate(name)
            if 'y' not in problem.coordinates:
                continue
            with self.subTest(family=name):
                potential = Binary('+', problem.potential,
                                   bind(parse('0.01*y^3'), problem.coordinates, {}))
                self.assertGreater(worst_residual(replace(problem, potential=potential)), 1e-3)

    def test_yy_component(self):
        """f = y^2/2 + 0.01 y^3 on phi = x^2 leaves E_yy = 0.06 y"""
        problem, _ = catalog.walker_problem('x^2', '0.5*y^2 + 0.01*y^3')
        for point in catalog.sample_points(problem, 5, 3):
            residual = verify.soliton_residual(problem, point)
            expected = np.zeros((3, 3))
            expected[2, 2] = 0.06 * point[2]
            np.testing.assert_allclose(residual, expected, atol=1e-12)

    def test_evaluation_error_carries_point(self):
        """A pole of the potential is reported with the sample point"""
        problem, _ = catalog.walker_problem('x^2', '0.5*y^2', box={'y': (0.5, 1.0)})
        pole = bind(parse('1/(y - 0.75)'), catalog.WALKER_COORDINATES, {})
        problem = replace(problem, potential=pole)
        with self.assertRaises(EvaluationError) as ctx:
            verify.soliton_residual(problem, (0.0, 0.0, 0.75))
        self.assertEqual(ctx.exception.point, (0.0, 0.0, 0.75))


class StructureTest(SimpleTestCase):
    def test_plane_wave_hessian(self):
        """On Cahen-Wallach H_f is nonzero while |H_f|^2 vanishes"""
        problem, _ = catalog.instantiate('cahen_wallach')
        for point in catalog.sample_points(problem, 5, 5):
            data = verify.evaluate_point(problem, point)
            self.assertGreater(np.max(np.abs(data.hessian_op)), 0.1)
            self.assertLess(abs(data.hess_norm_sq), 1e-10)

    def test_plane_wave_recurrence(self):
        """grad f = y d/dt is recurrent with theta = dy / y"""
        problem, _ = catalog.instantiate('cahen_wallach')
        for point in catalog.sample_points(problem, 5, 6):
            recurrence = verify.recurrence_theta(problem, point)
            self.assertTrue(recurrence.applicable)
            np.testing.assert_allclose(recurrence.theta, [0.0, 1.0 / point[1], 0.0], atol=1e-10)
            self.assertLess(recurrence.residual, 1e-10)

    def test_recurrence_needs_null_gradient(self):
        """Recurrence only applies to a null gradient"""
        problem, _ = catalog.instantiate('N_b')
        self.assertFalse(verify.recurrence_theta(problem, (0.0, 0.2, 0.1)).applicable)

    def test_rigid_eigenstructure(self):
        """Ric and H_f commute with spectra in {0, lambda} and complementary ranks"""
        for name in ('sphere_rigid', 'minkowski_rigid'):
            problem, _ = catalog.instantiate(name)
            for point in catalog.sample_points(problem, 4, 2):
                self.assertLess(verify.rigid_eigenstructure(problem, point), 1e-10)

    def test_steady_structure(self):
        """P_c satisfies the steady structure identity"""
        problem, _ = catalog.instantiate('P_c')
        for point in catalog.sample_points(problem, 4, 8):
            self.assertLess(verify.steady_structure(problem, point), 1e-10)

    def test_codazzi(self):
        """Cahen-Wallach has a Codazzi Schouten tensor; a y-dependent Case I metric does not"""
        problem, _ = catalog.instantiate('cahen_wallach')
        self.assertLess(verify.schouten_codazzi_residual(problem, (0.1, 0.5, 0.2)), 1e-12)
        problem, _ = catalog.instantiate('thm12_case1', {'a': '1 + 0.3*y'})
        self.assertGreater(verify.schouten_codazzi_residual(problem, (0.1, 0.5, 0.2)), 1e-3)

    def test_killing_checks(self):
        """Translations and the rotation are Killing on flat space"""
        problem, _ = catalog.instantiate('timelike_linear')
        killing, transport = verify.killing_checks(problem, (0.3, -0.2, 0.6))
        self.assertLess(killing, 1e-12)
        self.assertLess(transport, 1e-12)

    def test_scalar_gradient_identity(self):
        """d tau = 2 Ric(grad f) holds on a Case II soliton"""
        problem, _ = catalog.instantiate('thm12_case2', {'a': 'exp(y)'})
        self.assertLess(verify.scalar_gradient_identity(problem, (0.0, 0.4, -0.3)), 1e-9)

    def test_hamilton_identity(self):
        """tau + |grad f|^2 - 2 lambda f is constant on a shrinking soliton"""
        problem, _ = catalog.instantiate('sphere_rigid')
        samples = verify.evaluate_points(problem, catalog.sample_points(problem, 6, 4))
        self.assertLess(verify.hamilton_identity(problem, samples), 1e-10)


class ProfileTest(SimpleTestCase):
    def test_nilpotent_walker_ricci(self):
        """N_b has a rank one Ricci operator that squares to zero"""
        report = checked('N_b', count=4)
        self.assertEqual(report.profile['ric_nilpotency'], 2)
        self.assertEqual(report.profile['ric_rank'], 1)
        self.assertEqual(report.profile['ric_spectrum'], [[0.0, 0.0]] * 3)
        self.assertEqual(report.profile['grad_f_causal_type'], 'spacelike')

    def test_causal_types(self):
        """P_c has a null gradient and timelike_linear a timelike one"""
        self.assertEqual(checked('P_c', count=3).profile['grad_f_causal_type'], 'null')
        self.assertEqual(checked('timelike_linear', count=3).profile['grad_f_causal_type'],
                         'timelike')

    def test_expected_profile_mismatch(self):
        """A wrong expectation fails expected_profile with a message"""
        problem, _ = catalog.instantiate('N_b')
        wrong = ExpectedProfile(steady=True, grad_causal_type='null')
        report = verify.run_checks(problem, wrong, catalog.sample_points(problem, 3, 0), {})
        self.assertEqual(report.check('expected_profile').status, verify.FAIL)
        self.assertTrue(any('expected null' in note for note in report.notes))

    def test_family_note(self):
        """The Walker form of a catalog metric is matched to its homogeneous family"""
        report = checked('N_b', {'b': 2.0}, count=3)
        self.assertIn('walker form: phi matches N_b (b=2)', report.notes)
        problem, _ = catalog.instantiate('cahen_wallach')
        self.assertEqual(verify.family_note(problem), 'walker form: phi matches CWplus')
        problem, _ = catalog.instantiate('sphere_rigid')
        self.assertIsNone(verify.family_note(problem))

    def test_parallel_fan_out(self):
        """Results do not depend on the number of workers"""
        problem, _ = catalog.instantiate('N_b')
        points = catalog.sample_points(problem, 4, 9)
        serial = verify.evaluate_points(problem, points, n_jobs=1)
        fanned = verify.evaluate_points(problem, points, n_jobs=2)
        for a, b in zip(serial, fanned):
            self.assertEqual(a.residuals, b.residuals)

    def test_profile_stable_across_points(self):
        """Homogeneous families show one Ric and H_f profile at every sample point"""
        for name in ('N_b', 'P_c', 'CWplus', 'CWminus', 'cahen_wallach', 'sphere_rigid',
                     'minkowski_rigid', 'timelike_linear'):
            with self.subTest(family=name):
                problem, _ = catalog.instantiate(name)
                samples = verify.evaluate_points(problem, catalog.sample_points(problem, 20, 3))
                profile = verify.ricci_profile(samples)
                self.assertLess(profile.stability, 1e-8)
                for profiles in (profile.ric, profile.hessian):
                    self.assertEqual(len({p.rank for p in profiles}), 1)
                    self.assertEqual(len({p.nilpotency_index for p in profiles}), 1)
