"""Tests for the expression parser and its jet evaluation."""
import math

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis.strategies import floats, tuples

from solitons.catalog import FAMILIES, instantiate
from solitons.exceptions import (EvaluationError, ExprSyntaxError, JetDomainError, UnboundNameError,
                                 UnknownFunctionError)
from solitons.exprlang import (Binary, Call, Constant, DoubleIntegral, Evaluator, ExprKernel, Param,
                               Unary, Var, bind, eval_jet, evaluate, names, parse, to_text)

CORPUS = (
    'x^2 * exp(b*y)',
    '2*t*y + x^2',
    '-x^2',
    '2*x^2/(k - c*y)^2',
    'exp(b*x)/b^2',
    'sin(theta)^2/lam',
    '0.5*lam*((-1.0)*t^2 + (1.0)*x1^2)',
    'a^b^c',
    'sqrt(1 + x^2) - log(2 + cos(y))',
    '1.5e-3*x - .5',
)


class ParseTest(SimpleTestCase):
    """Test the grammar"""

    def test_product_tree(self):
        """x^2 * exp(b*y) parses into the documented tree"""
        tree = parse('x^2 * exp(b*y)')
        expected = Binary('*', Binary('^', Var('x'), Constant(2.0)),
                          Call('exp', Binary('*', Var('b'), Var('y'))))
        self.assertEqual(tree, expected)

    def test_trailing_operator_offset(self):
        """A dangling + reports the end of input at offset 8"""
        with self.assertRaises(ExprSyntaxError) as ctx:
            parse('2*t*y +')
        self.assertEqual(ctx.exception.offset, 8)
        self.assertIn('number', ctx.exception.expected)

    def test_power_binds_tighter_than_negation(self):
        """-x^2 is the negation of x^2"""
        self.assertEqual(parse('-x^2'), Unary('neg', Binary('^', Var('x'), Constant(2.0))))

    def test_power_right_associative(self):
        """a^b^c is a^(b^c)"""
        self.assertEqual(parse('a^b^c'),
                         Binary('^', Var('a'), Binary('^', Var('b'), Var('c'))))

    def test_unknown_function(self):
        """Calls are restricted to the supported functions"""
        with self.assertRaises(UnknownFunctionError) as ctx:
            parse('tan(x)')
        self.assertEqual(ctx.exception.offset, 1)

    def test_bad_character(self):
        """Stray characters are reported at their offset"""
        with self.assertRaises(ExprSyntaxError) as ctx:
            parse('x + $')
        self.assertEqual(ctx.exception.offset, 5)

    def test_empty(self):
        """Blank text is a syntax error"""
        with self.assertRaises(ExprSyntaxError):
            parse('   ')

    def test_round_trip(self):
        """parse(to_text(parse(s))) == parse(s) on the corpus"""
        for text in CORPUS:
            tree = parse(text)
            self.assertEqual(parse(to_text(tree)), tree, text)

    def test_names(self):
        """names collects every identifier"""
        self.assertEqual(names(parse('x^2*exp(b*y)')), {'x', 'b', 'y'})


class BindTest(SimpleTestCase):
    """Test binding names to coordinates and parameters"""

    def test_param(self):
        """Declared parameters become Param nodes"""
        bound = bind(parse('a*x'), ('x',), {'a': 2.0})
        self.assertEqual(bound, Binary('*', Param('a'), Var('x')))

    def test_unbound(self):
        """Undeclared names are rejected"""
        with self.assertRaises(UnboundNameError):
            bind(parse('a*x'), ('x',), {})


class EvaluateTest(SimpleTestCase):
    """Test jet evaluation of expressions"""

    def test_exp(self):
        """Every raw partial of exp(x) at 1 is e"""
        jet = eval_jet(parse('exp(x)'), (1.0,), 3)
        for k in range(4):
            self.assertAlmostEqual(jet.partial((k,)), math.e, places=13)

    def test_param_polynomial(self):
        """x^2*a with a=4 at x=1: value 4, first 8, second 8"""
        jet = eval_jet(parse('x^2*a'), (1.0,), 2, {'a': 4.0})
        self.assertAlmostEqual(jet.value, 4.0)
        self.assertAlmostEqual(jet.derivative(0), 8.0)
        self.assertAlmostEqual(jet.derivative(0, 0), 8.0)

    def test_pole_is_local(self):
        """1/(1-y) is fine at y=2 and fails only at y=1"""
        jet = eval_jet(parse('1/(1-y)'), (2.0,), 1)
        self.assertAlmostEqual(jet.value, -1.0)
        self.assertAlmostEqual(jet.derivative(0), 1.0)
        with self.assertRaises(JetDomainError) as ctx:
            eval_jet(parse('1/(1-y)'), (1.0,), 1)
        self.assertEqual(ctx.exception.point, (1.0,))

    def test_unbound_at_evaluation(self):
        """Evaluating a free name without a value raises"""
        with self.assertRaises(UnboundNameError):
            Evaluator(('x',), (0.0,), 1)(parse('x + q'))

    @settings(max_examples=100, deadline=None)
    @given(tuples(floats(-1.0, 1.0), floats(-1.0, 1.0)))
    def test_order_zero_matches_plain(self, point):
        """Order-0 evaluation equals the float value of the higher-order jet"""
        node = parse('sqrt(1 + x^2) - log(2 + cos(y))*exp(x*y)')
        plain = evaluate(node, point, coordinates=('x', 'y'))
        jet = eval_jet(node, point, 3, coordinates=('x', 'y'))
        self.assertAlmostEqual(plain, jet.value, delta=1e-14 * max(1.0, abs(plain)))

    def test_finite_differences(self):
        """Jet partials agree with central differences on catalog metric entries"""
        rng = np.random.default_rng(5)
        step = 1e-4
        for name in ('N_b', 'P_c', 'sphere_rigid', 'cahen_wallach'):
            problem, _ = instantiate(name)
            lo = np.array([b[0] for b in problem.box])
            hi = np.array([b[1] for b in problem.box])
            d = problem.dim
            for point in lo + (hi - lo) * rng.random((50, d)):
                for (i, j), node in problem.metric.components.items():
                    ev = problem.metric.evaluator(point, 2)
                    jet = ev(node)
                    for axis in range(d):
                        shift = np.zeros(d)
                        shift[axis] = step
                        plus = problem.metric.evaluator(point + shift, 0)(node).value
                        minus = problem.metric.evaluator(point - shift, 0)(node).value
                        central = (plus - minus) / (2 * step)
                        second = (plus - 2 * jet.value + minus) / step ** 2
                        scale = max(1.0, abs(jet.derivative(axis)))
                        self.assertAlmostEqual(jet.derivative(axis), central, delta=1e-6 * scale)
                        scale = max(1.0, abs(jet.value), abs(jet.derivative(axis, axis)))
                        self.assertAlmostEqual(jet.derivative(axis, axis), second,
                                               delta=1e-6 * scale)

    def test_samples_axis(self):
        """Evaluator.at_samples evaluates many points at once"""
        samples = np.array([[0.0], [1.0], [2.0]])
        jet = Evaluator.at_samples(('x',), samples, order=1)(parse('x^2 + 1'))
        np.testing.assert_allclose(jet.value, [1.0, 2.0, 5.0])
        np.testing.assert_allclose(jet.derivative(0), [0.0, 2.0, 4.0])

    def test_samples_reject_double_integral(self):
        """A double integral is not silently evaluated at the first sample only"""
        kernel = ExprKernel(parse('1 + 0*y'), 'y')
        node = Binary('+', parse('y'), DoubleIntegral(kernel, 'y', 0.0))
        samples = np.array([[0.5], [1.0]])
        with self.assertRaises(EvaluationError) as ctx:
            Evaluator.at_samples(('y',), samples)(node)
        self.assertIsNone(ctx.exception.point)
        self.assertAlmostEqual(Evaluator(('y',), (1.0,), 0)(node).value, 1.5, places=13)

    def test_kernel(self):
        """ExprKernel gives values and derivatives of its expression"""
        kernel = ExprKernel(bind(parse('c*y^2'), ('y',), {'c': 3.0}), 'y', (('c', 3.0),))
        np.testing.assert_allclose(kernel.samples([1.0, 2.0]), [3.0, 12.0])
        self.assertEqual([round(v, 12) for v in kernel.derivatives(1.0, 2)], [3.0, 6.0])

    def test_family_defaults_parse(self):
        """Every string default of every family is a valid expression"""
        for family in FAMILIES.values():
            for value in family.defaults.values():
                if isinstance(value, str):
                    parse(value)
