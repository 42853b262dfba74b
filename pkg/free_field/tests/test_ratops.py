# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

import random
import unittest
from typing import List, Tuple

from free_field.algebra import linalg, ratops
from free_field.algebra.als import ALS, Alphabet
from free_field.algebra.minimizer import minimize, rank
from free_field.algebra.ncpoly import NCPoly
from free_field.algebra.oracle import eval_matrices, prob_eq, random_assignment, series_coeffs
from free_field.errors import NormalFormError, UndefinedElementError
from free_field.expr import Compiler, Expr, compile_expr
from free_field.tests.test_minimizer import random_expression

XY = Alphabet.of("x,y")
XYZ = Alphabet.of("x,y,z")


def same_element(test, a, b):
	test.assertEqual(prob_eq(a, b, trials=8, sizes=(2, 3), seed=7).verdict, "equal")


class TestConstructions(unittest.TestCase):
	def test_scalar(self):
		self.assertTrue(ratops.scalar_als(XY, 0).is_empty)
		three = ratops.scalar_als(XY, 3)
		self.assertEqual(three.dim, 1)
		self.assertEqual(ratops.as_scalar(three), 3)
		self.assertEqual(ratops.as_scalar(ratops.monomial_als(XY, ())), 1)
		self.assertIsNone(ratops.as_scalar(compile_expr("inv(x)", XY)))

	def test_monomial_rank(self):
		rng = random.Random(11)
		for k in range(11):
			word = tuple(rng.randrange(3) for _ in range(k))
			a = ratops.monomial_als(XYZ, word)
			self.assertEqual(a.dim, k + 1)
			self.assertEqual(rank(a), k + 1)

	def test_poly_trie(self):
		p = NCPoly(XY, {XY.word("xy"): 1, XY.word("xx"): 2, (): -1})
		a, nodes = ratops.poly_trie(p)
		self.assertEqual(nodes, [(), (0,), None])
		self.assertEqual(a.dim, 3)
		self.assertEqual(series_coeffs(a, 2).coeffs, p.terms)

	def test_sum_and_generic_product_dimensions(self):
		f = compile_expr("x*y + inv(x)", XY)
		g = compile_expr("inv(1 - y)", XY)
		self.assertEqual(ratops.add(f, g).dim, f.dim + g.dim)
		self.assertEqual(ratops.mul(f, g, "generic").dim, f.dim + g.dim)
		same_element(self, ratops.mul(f, g, "generic"), compile_expr("(x*y + inv(x))*inv(1 - y)", XY))


class TestTypedProducts(unittest.TestCase):
	def test_last_row_product(self):
		x, y = ratops.monomial_als(XY, (0,)), ratops.monomial_als(XY, (1,))
		self.assertTrue(ratops.in_last_row_form(x))
		product = ratops.mul(x, y, "type-(1,*)")
		self.assertEqual(product.dim, 3)
		self.assertEqual(series_coeffs(product, 2).coeffs, {XY.word("xy"): 1})

	def test_first_column_product(self):
		x, y = ratops.monomial_als(XY, (0,)), ratops.monomial_als(XY, (1,))
		self.assertTrue(ratops.in_first_column_form(y))
		product = ratops.mul(x, y, "type-(*,1)")
		self.assertEqual(product.dim, 3)
		self.assertEqual(series_coeffs(product, 2).coeffs, {XY.word("xy"): 1})

	def test_typed_dimension_law(self):
		f = compile_expr("1 - x*y", XY)
		g = compile_expr("y + 2", XY)
		for strategy in ("type-(1,*)", "type-(*,1)"):
			product = ratops.mul(f, g, strategy)
			self.assertEqual(product.dim, f.dim + g.dim - 1)
			same_element(self, product, compile_expr("(1 - x*y)*(y + 2)", XY))

	def test_missing_normal_form(self):
		f = compile_expr("inv(x)*y", XY)
		element_type = ratops.detect_type(f)
		form = ratops.first_column_form if element_type.one_in_L else ratops.last_row_form
		with self.assertRaises(NormalFormError):
			form(f)
		with self.assertRaises(NormalFormError):
			ratops.last_row_form(compile_expr("inv(x)", XY))


class TestInverse(unittest.TestCase):
	def test_type_11(self):
		x = ratops.monomial_als(XY, (0,))
		element_type = ratops.detect_type(x)
		self.assertTrue(element_type.one_in_L and element_type.one_in_R)
		inverse = ratops.invert(x)
		self.assertEqual(inverse.dim, 1)
		self.assertEqual(rank(ratops.invert(inverse)), 2)

	def test_type_00(self):
		inverse_x = compile_expr("inv(x)", XY)
		element_type = ratops.detect_type(inverse_x)
		self.assertFalse(element_type.one_in_L or element_type.one_in_R)
		self.assertEqual(ratops.invert(inverse_x).dim, 2)

	def test_mixed_type(self):
		f = compile_expr("inv(x)*y", XY)
		self.assertEqual(f.dim, 2)
		element_type = ratops.detect_type(f)
		self.assertNotEqual(element_type.one_in_L, element_type.one_in_R)
		inverse = ratops.invert(f)
		self.assertEqual(inverse.dim, 2)
		same_element(self, inverse, compile_expr("inv(y)*x", XY))

	def test_polynomial_inverse_rank(self):
		for text in ("1 - x*y", "x*y*x + y", "x + y"):
			p = compile_expr(text, XY)
			self.assertEqual(rank(ratops.invert(p)), p.dim - 1)

	def test_scalar_inverse(self):
		inverse = ratops.invert(ratops.scalar_als(XY, 4))
		self.assertEqual(ratops.as_scalar(inverse), ratops.as_scalar(ratops.scalar_als(XY, "1/4")))

	def test_generic_strategy(self):
		f = compile_expr("x*y + 1", XY)
		inverse = ratops.invert(f, strategy="generic")
		self.assertEqual(inverse.dim, f.dim + 1)
		same_element(self, inverse, ratops.invert(f))

	def test_zero(self):
		with self.assertRaises(UndefinedElementError):
			ratops.invert(ratops.scalar_als(XY, 0))
		x = ratops.monomial_als(XY, (0,))
		with self.assertRaises(UndefinedElementError):
			ratops.invert(ratops.add(x, ratops.scalar_mul(x, -1)))

	def test_regular_normalization(self):
		f = compile_expr("inv(1 - x*y)", XY)
		regular = ratops.normalize_regular(f)
		self.assertEqual(series_coeffs(regular, 4).coeffs, series_coeffs(f, 4).coeffs)
		self.assertIsNone(ratops.normalize_regular(compile_expr("inv(x)", XY)))
		self.assertEqual(minimize(regular)[0].dim, f.dim)

	def test_overlapping_witnesses(self):
		for text in ("1 + inv(x)", "2 - inv(x - 2)", "inv(x + y) + inv(1)"):
			with self.subTest(text=text):
				f = compile_expr(text, XY)
				self.assertEqual(f.dim, 2)
				self.assertEqual(ratops.detect_type(f).label, "(1,1)")
				inverse = ratops.invert(f)
				self.assertEqual(inverse.dim, 2)
				self.assertEqual(rank(inverse), 2)
				same_element(self, ratops.mul(f, inverse, "generic"), ratops.scalar_als(XY, 1))


def random_elements(seed: int, count: int) -> List[Tuple[Expr, ALS]]:
	"""Refined minimal systems of dimension at least 2 for random expressions over x, y, z."""
	rng = random.Random(seed)
	compiler = Compiler(XYZ)
	elements = []
	while len(elements) < count:
		e = random_expression(rng, rng.randint(2, 6))
		try:
			a = compiler.compile(e)
		except UndefinedElementError:
			continue
		if a.dim >= 2 and minimize(a)[1].fully_refined:
			elements.append((e, a))
	return elements


class TestInverseCorpus(unittest.TestCase):
	@classmethod
	def setUpClass(cls):
		cls.elements = random_elements(77, 50)

	def test_dimension_law(self):
		expected = {"(1,1)": (-1, 0), "(1,0)": (0,), "(0,1)": (0,), "(0,0)": (1,)}
		for e, f in self.elements:
			with self.subTest(expression=e.render()):
				element_type = ratops.detect_type(f)
				inverse = ratops.invert(f, assume_minimal=True)
				self.assertIn(inverse.dim - f.dim, expected[element_type.label])
				minimal, trace = minimize(inverse)
				if trace.fully_refined:
					self.assertEqual(minimal.dim, inverse.dim)

	def test_double_inversion(self):
		for e, f in self.elements:
			with self.subTest(expression=e.render()):
				twice = ratops.invert(ratops.invert(f))
				same_element(self, twice, f)
				minimal, trace = minimize(twice)
				if trace.fully_refined:
					self.assertEqual(minimal.dim, f.dim)


class TestOperationValues(unittest.TestCase):
	"""Values of sums, products and inverses at random matrix points."""

	@classmethod
	def setUpClass(cls):
		cls.elements = random_elements(78, 50)

	def setUp(self):
		self.rng = random.Random(79)

	def pairs(self):
		for index, (_, f) in enumerate(self.elements):
			yield f, self.elements[(7 * index + 3) % len(self.elements)][1]

	def values(self, *systems):
		assignment = random_assignment(XYZ, 2, self.rng)
		return [eval_matrices(a, assignment) for a in systems]

	def test_add(self):
		checked = 0
		for f, g in self.pairs():
			value_f, value_g, value = self.values(f, g, ratops.add(f, g))
			if value_f is None or value_g is None:
				continue
			checked += 1
			self.assertEqual(linalg.to_rows(value), linalg.to_rows(linalg.add(value_f, value_g)))
		self.assertGreater(checked, 25)

	def test_mul(self):
		checked = 0
		for f, g in self.pairs():
			for strategy in ("auto", "generic"):
				value_f, value_g, value = self.values(f, g, ratops.mul(f, g, strategy))
				if value_f is None or value_g is None or value is None:
					continue
				checked += 1
				self.assertEqual(linalg.to_rows(value), linalg.to_rows(linalg.matmul(value_f, value_g)))
		self.assertGreater(checked, 50)

	def test_scalar_mul(self):
		for f, _ in self.pairs():
			value_f, value = self.values(f, ratops.scalar_mul(f, "-3/2"))
			if value_f is not None:
				self.assertEqual(linalg.to_rows(value), linalg.to_rows(linalg.scale(value_f, linalg.rat("-3/2"))))

	def test_invert(self):
		checked = 0
		for f, _ in self.pairs():
			value_f, value = self.values(f, ratops.invert(f, assume_minimal=True))
			if value_f is None or value is None:
				continue
			checked += 1
			self.assertEqual(linalg.to_rows(linalg.matmul(value_f, value)), linalg.to_rows(linalg.identity(2)))
		self.assertGreater(checked, 25)
