# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

import unittest

from free_field.algebra import ratops
from free_field.algebra.als import Alphabet
from free_field.algebra.ncpoly import NCPoly
from free_field.algebra.oracle import prob_eq
from free_field.errors import ParseError, UndefinedElementError
from free_field.expr import Compiler, Inv, Letter, Mul, Pow, compile_expr, parse_expr, to_ncpoly

XY = Alphabet.of("x,y")
XYZ = Alphabet.of("x,y,z")

HUA = "x - inv(inv(x) + inv(inv(y) - x))"


class TestParser(unittest.TestCase):
	def test_round_trip_rendering(self):
		self.assertEqual(parse_expr(HUA, XY).render(), HUA)
		self.assertEqual(parse_expr("2/3*x", XY).render(), "2/3*x")
		self.assertEqual(parse_expr("(x + 1)^2", XY).render(), "(x + 1)^2")

	def test_juxtaposition(self):
		self.assertEqual(parse_expr("yxz", XYZ), Mul(Mul(Letter("y"), Letter("x")), Letter("z")))
		self.assertEqual(parse_expr("y x", XY), parse_expr("y*x", XY))

	def test_powers(self):
		self.assertEqual(parse_expr("x^-1", XY), Pow(Letter("x"), -1))
		self.assertEqual(parse_expr("inv(y)", XY), Inv(Letter("y")))

	def test_error_columns(self):
		cases = {
			"x + * y": 5,
			"x + w": 5,
			"(x + y": 7,
			"x^1/2": 3,
			"x $ y": 3,
		}
		for text, column in cases.items():
			with self.subTest(text=text):
				with self.assertRaises(ParseError) as context:
					parse_expr(text, XY)
				self.assertEqual(context.exception.column, column)
				self.assertEqual(context.exception.line, 1)


class TestCompiler(unittest.TestCase):
	def test_hua_identity(self):
		self.assertEqual(compile_expr(HUA, XY).dim, 4)
		self.assertEqual(compile_expr(HUA, XY, lazy=True).dim, 4)
		self.assertTrue(compile_expr(f"({HUA}) - x*y*x", XY).is_empty)

	def test_exponents(self):
		self.assertEqual(ratops.as_scalar(compile_expr("x^0", XY)), 1)
		negative = compile_expr("x^-1", XY)
		self.assertEqual(negative.dim, 1)
		self.assertTrue(prob_eq(negative, compile_expr("inv(x)", XY), trials=6, seed=2).equal)
		self.assertEqual(compile_expr("(x*y)^3", XY).dim, 7)

	def test_undefined_subexpression(self):
		for lazy in (False, True):
			with self.subTest(lazy=lazy):
				with self.assertRaises(UndefinedElementError) as context:
					compile_expr("y + inv(x - x)", XY, lazy=lazy)
				self.assertEqual(context.exception.subexpression, "inv(x - x)")

	def test_construct_skips_root_minimization(self):
		compiler = Compiler(XY, lazy=True)
		e = parse_expr("x + x", XY)
		self.assertEqual(compiler.construct(e).dim, 4)
		self.assertEqual(compiler.compile(e).dim, 2)


class TestPolynomials(unittest.TestCase):
	def test_direct_evaluation(self):
		x, one = NCPoly.letter(XY, "x"), NCPoly.constant(XY, 1)
		self.assertEqual(to_ncpoly("(x+1)^2", XY), x * x + x + x + one)
		self.assertEqual(to_ncpoly("2/3*x", XY).render(), "2/3*x")

	def test_through_linear_system(self):
		self.assertEqual(to_ncpoly("inv(x)*x*y", XY), NCPoly.letter(XY, "y"))
		self.assertIsNone(to_ncpoly("inv(1 - x)", XY))
