# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

import unittest

from free_field.algebra import linalg, ratops
from free_field.algebra.als import Alphabet
from free_field.algebra.ncpoly import NCPoly
from free_field.algebra.oracle import (
	DISTINCT,
	EQUAL,
	INCONCLUSIVE,
	MatAssignment,
	eval_matrices,
	hankel_rank,
	is_polynomial,
	prob_eq,
	series_coeffs,
	to_ncpoly,
	words_up_to,
)
from free_field.errors import DimensionError, NotRegularError
from free_field.expr import compile_expr

XY = Alphabet.of("x,y")

HUA = "x - inv(inv(x) + inv(inv(y) - x))"


class TestSeries(unittest.TestCase):
	def test_geometric_series(self):
		table = series_coeffs(compile_expr("inv(1 - y*x)", XY), 4)
		self.assertEqual(table.render(), "1 1\nyx 1\nyxyx 1")
		self.assertEqual(table.coefficient(XY.word("xy")), 0)
		with self.assertRaises(DimensionError):
			table.coefficient(XY.word("yxyxy"))

	def test_polynomial_series(self):
		table = series_coeffs(compile_expr("2 - y*x*y", XY), 5)
		self.assertEqual(table.as_dict(), {"1": "2", "yxy": "-1"})

	def test_not_regular(self):
		with self.assertRaises(NotRegularError):
			series_coeffs(compile_expr("inv(x)", XY), 3)

	def test_words_order(self):
		self.assertEqual(words_up_to(2, 2), [(), (0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)])


class TestSeriesLaws(unittest.TestCase):
	REGULAR = ("inv(1 - y*x)", "2 + x*y", "inv(1 - x) - y", "inv(1 - x*y - y)")

	def setUp(self):
		self.elements = [compile_expr(text, XY) for text in self.REGULAR]

	def test_sum_and_scaling(self):
		for f in self.elements:
			for g in self.elements:
				table = series_coeffs(ratops.add(f, g), 6)
				left, right = series_coeffs(f, 6), series_coeffs(g, 6)
				for word in words_up_to(2, 6):
					self.assertEqual(table.coefficient(word), left.coefficient(word) + right.coefficient(word))
			scaled = series_coeffs(ratops.scalar_mul(f, -2), 6)
			for word, c in series_coeffs(f, 6).items():
				self.assertEqual(scaled.coefficient(word), -2 * c)

	def test_product_is_word_convolution(self):
		for f in self.elements:
			for g in self.elements:
				table = series_coeffs(ratops.mul(f, g), 6)
				left, right = series_coeffs(f, 6), series_coeffs(g, 6)
				for word in words_up_to(2, 6):
					expected = sum(left.coefficient(word[:i]) * right.coefficient(word[i:]) for i in range(len(word) + 1))
					self.assertEqual(table.coefficient(word), expected)


class TestHankel(unittest.TestCase):
	def test_rank_matches_dimension(self):
		f = compile_expr("inv(1 - y*x)", XY)
		self.assertEqual(hankel_rank(series_coeffs(f, 4), 2), 2)
		self.assertEqual(f.dim, 2)

	def test_short_table(self):
		with self.assertRaises(DimensionError):
			hankel_rank(series_coeffs(compile_expr("1 + x", XY), 3), 2)


class TestEvaluation(unittest.TestCase):
	def test_letter(self):
		x = compile_expr("x", XY)
		self.assertEqual(linalg.to_rows(eval_matrices(x, MatAssignment.of([[[2]], [[5]]]))), [[2]])
		assignment = MatAssignment.of([[[1, 2], [3, 4]], [[0, 1], [1, 0]]])
		self.assertEqual(linalg.to_rows(eval_matrices(x, assignment)), [[1, 2], [3, 4]])

	def test_singular_point(self):
		self.assertIsNone(eval_matrices(compile_expr("inv(x)", XY), MatAssignment.of([[[0]], [[1]]])))

	def test_assignment_shape(self):
		with self.assertRaises(DimensionError):
			eval_matrices(compile_expr("x", XY), MatAssignment.of([[[1]]]))


class TestProbEq(unittest.TestCase):
	def test_hua_identity(self):
		result = prob_eq(compile_expr(HUA, XY), compile_expr("x*y*x", XY), seed=1)
		self.assertEqual(result.verdict, EQUAL)
		self.assertTrue(result.equal)

	def test_distinct_with_witness(self):
		xy, yx = compile_expr("x*y", XY), compile_expr("y*x", XY)
		result = prob_eq(xy, yx, seed=3)
		self.assertEqual(result.verdict, DISTINCT)
		self.assertGreater(result.witness.size, 1)
		self.assertNotEqual(linalg.to_rows(eval_matrices(xy, result.witness)), linalg.to_rows(eval_matrices(yx, result.witness)))
		self.assertEqual(prob_eq(xy, yx, seed=3).witness.render(), result.witness.render())

	def test_no_trials(self):
		x = compile_expr("x", XY)
		self.assertEqual(prob_eq(x, x, trials=0).verdict, INCONCLUSIVE)


class TestPolynomials(unittest.TestCase):
	def test_to_ncpoly(self):
		p = to_ncpoly(compile_expr("y - y*x*y", XY))
		self.assertEqual(p, NCPoly(XY, {XY.word("y"): 1, XY.word("yxy"): -1}))
		self.assertTrue(to_ncpoly(compile_expr("x - x", XY)).is_zero)

	def test_rational_element(self):
		f = compile_expr("inv(1 - x*y)", XY)
		self.assertFalse(is_polynomial(f))
		self.assertIsNone(to_ncpoly(f))
		self.assertFalse(is_polynomial(compile_expr("inv(x)", XY)))
