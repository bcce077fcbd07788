"""Tests for the composite Gauss-Legendre reconstruction."""
import math

import numpy as np
from django.test import SimpleTestCase

from solitons.exceptions import QuadratureError
from solitons.exprlang import DoubleIntegral, ExprKernel, Evaluator, bind, parse
from solitons.quadrature import double_integral, gauss_legendre, single_integral


def _kernel(text, **params):
    return ExprKernel(bind(parse(text), ('y',), params), 'y', tuple(sorted(params.items())))


class GaussLegendreTest(SimpleTestCase):
    """Test the node table"""

    def test_weights_sum(self):
        """Weights on [-1, 1] sum to 2"""
        nodes, weights = gauss_legendre(12)
        self.assertEqual(len(nodes), 12)
        self.assertAlmostEqual(float(np.sum(weights)), 2.0, places=14)


class IntegralTest(SimpleTestCase):
    """Test single and double integrals against closed forms"""

    def test_single(self):
        """int_0^1 cos = sin(1)"""
        self.assertAlmostEqual(single_integral(_kernel('cos(y)'), 0.0, 1.0), math.sin(1.0),
                               places=13)

    def test_double_constant(self):
        """gamma'' = 1 from 0 gives y^2/2"""
        self.assertAlmostEqual(double_integral(_kernel('1 + 0*y'), 0.0, 0.8), 0.32, places=13)

    def test_reversed_interval(self):
        """Integrating below the base point keeps the sign conventions"""
        self.assertAlmostEqual(double_integral(_kernel('1 + 0*y'), 0.0, -0.6), 0.18, places=13)
        self.assertAlmostEqual(single_integral(_kernel('1 + 0*y'), 0.0, -0.6), -0.6, places=13)

    def test_p_c_closed_form(self):
        """gamma'' = 2/(k - c y)^2 integrates to -(2/c^2) ln(k - c y) plus an affine term"""
        c, k, y0 = 1.0, 3.0, 0.0
        kernel = _kernel('2/(k - c*y)^2', c=c, k=k)

        def closed(y):
            return -(2.0 / c ** 2) * math.log(k - c * y)

        def closed_slope(y):
            return 2.0 / (c * (k - c * y))

        for y in (-1.0, -0.3, 0.4, 1.0):
            expected = closed(y) - closed(y0) - closed_slope(y0) * (y - y0)
            self.assertAlmostEqual(double_integral(kernel, y0, y), expected, delta=1e-10)

    def test_nonfinite_integrand(self):
        """An integrand that overflows on the interval raises QuadratureError"""
        with self.assertRaises(QuadratureError):
            single_integral(_kernel('exp(1000*y)'), 0.0, 1.0)

    def test_double_integral_node(self):
        """A DoubleIntegral node evaluates to gamma, gamma' and gamma'' in a jet"""
        node = DoubleIntegral(_kernel('exp(y)'), 'y', 0.0)
        jet = Evaluator(('y',), (0.5,), 3)(node)
        self.assertAlmostEqual(jet.value, math.exp(0.5) - 1.0 - 0.5, places=12)
        self.assertAlmostEqual(jet.derivative(0), math.exp(0.5) - 1.0, places=12)
        self.assertAlmostEqual(jet.derivative(0, 0), math.exp(0.5), places=13)
        self.assertAlmostEqual(jet.derivative(0, 0, 0), math.exp(0.5), places=13)

    def test_failure_carries_full_point(self):
        """A quadrature failure inside an evaluation reports the whole sample point"""
        node = DoubleIntegral(_kernel('exp(1000*y)'), 'y', 0.0)
        with self.assertRaises(QuadratureError) as ctx:
            Evaluator(('t', 'x', 'y'), (0.1, -0.2, 0.9), 2)(node)
        self.assertEqual(ctx.exception.point, (0.1, -0.2, 0.9))
        self.assertEqual(ctx.exception.operation, 'quadrature')
