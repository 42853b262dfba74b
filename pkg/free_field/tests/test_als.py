# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

import random
import unittest

from free_field.algebra import linalg, ratops
from free_field.algebra.als import (
	ALS,
	Alphabet,
	Transformation,
	apply_transformation,
	below_left_witness,
	extend,
	mirror,
	normalize_rhs,
	parse_als,
	pivot_structure,
	restrict,
	serialize,
	validate,
)
from free_field.algebra.linalg import matrix
from free_field.algebra.oracle import eval_matrices, prob_eq, random_assignment, series_coeffs
from free_field.errors import AdmissibilityError, DimensionError, ParseError
from free_field.expr import compile_expr

XY = Alphabet.of("x,y")
XYZ = Alphabet.of("x,y,z")


def nested_block_als() -> ALS:
	"""[[1, -x, 0], [0, y, 1], [0, 1, 0]] with v = e3: pivot blocks of sizes 1 and 2."""
	return ALS.build(
		XY,
		[1, 0, 0],
		[
			[[1, 0, 0], [0, 0, 1], [0, 1, 0]],
			[[0, -1, 0], [0, 0, 0], [0, 0, 0]],
			[[0, 0, 0], [0, 1, 0], [0, 0, 0]],
		],
		[0, 0, 1],
	)


def random_admissible(rng: random.Random, n: int) -> Transformation:
	"""Invertible small-integer P and Q with first row of Q equal to e1."""
	while True:
		p = matrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
		q_rows = [linalg.unit_vector(n, 0)] + [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n - 1)]
		q = matrix(q_rows, (n, n))
		if linalg.invert_scalar(p) is not None and linalg.invert_scalar(q) is not None:
			return Transformation(p, q)


class TestPivotStructure(unittest.TestCase):
	def test_upper_triangular_monomial(self):
		a = ratops.monomial_als(XY, XY.word("xyx"))
		self.assertEqual(pivot_structure(a).sizes, (1, 1, 1, 1))

	def test_nested_block(self):
		structure = pivot_structure(nested_block_als())
		self.assertEqual(structure.sizes, (1, 2))
		self.assertEqual(structure.block(2), [1, 2])
		self.assertEqual(structure.block_of(2), 2)
		with self.assertRaises(DimensionError):
			structure.block(3)

	def test_empty(self):
		with self.assertRaises(DimensionError):
			pivot_structure(ALS.empty(XY))

	def test_refined_sum(self):
		# (inv(y) - x)^-1 + 3z
		f = ALS.build(
			XYZ,
			[1, 0],
			[[[1, 0], [0, 1]], [[0, 0], [-1, 0]], [[0, -1], [0, 0]], [[0, 0], [0, 0]]],
			[0, 1],
		)
		self.assertEqual(prob_eq(f, compile_expr("inv(inv(y) - x)", XYZ), trials=6, seed=2).verdict, "equal")
		three_z = ratops.scalar_mul(ratops.monomial_als(XYZ, (2,)), 3)
		self.assertEqual(pivot_structure(ratops.add(f, three_z)).sizes, (2, 1, 1))

	def test_cuts_are_maximal(self):
		self.assertIsNone(below_left_witness(nested_block_als().pencil, 1))
		self.assertEqual(below_left_witness(nested_block_als().pencil, 2), (0, 2, 1))
		for text in ("x*y*x", "inv(x)*y", "x - inv(inv(x) + inv(inv(y) - x))", "inv(1 - x*y) + y", "x + y*inv(x - y)"):
			a = compile_expr(text, XYZ)
			cuts = pivot_structure(a).cuts
			for c in range(1, a.dim):
				with self.subTest(text=text, cut=c):
					witness = below_left_witness(a.pencil, c)
					if c in cuts:
						self.assertIsNone(witness)
					else:
						self.assertIsNotNone(witness)


class TestValidation(unittest.TestCase):
	def test_admissible(self):
		self.assertTrue(validate(nested_block_als()).ok)

	def test_problems(self):
		a = ALS.build(XY, [0, 1], [[[1, 0], [0, 0]], [[0, 0], [0, 0]], [[0, 0], [0, 0]]], [1, 0])
		problems = validate(a).problems
		self.assertTrue(any("admissibility" in p for p in problems))
		self.assertTrue(any("row 2" in p for p in problems))

	def test_zero_rhs(self):
		a = ratops.monomial_als(XY, (0,)).with_parts(v=matrix([[0], [0]]))
		self.assertTrue(validate(a).represents_zero)


class TestTransformations(unittest.TestCase):
	def test_hua_difference(self):
		# inv(y) - x as the sum system, then the admissible pair that moves the constant into row 1
		a = ALS.build(
			XY,
			[1, 0, 0],
			[
				[[0, 0, 0], [0, 1, 0], [0, 0, 1]],
				[[0, 0, 0], [0, 0, -1], [0, 0, 0]],
				[[1, -1, 0], [0, 0, 0], [0, 0, 0]],
			],
			[1, 0, -1],
		)
		inverse_y = ALS.build(XY, [1], [[[0]], [[0]], [[1]]], [1])
		self.assertEqual(ratops.add(inverse_y, ratops.scalar_mul(ratops.monomial_als(XY, (0,)), -1)), a)
		t = Transformation(matrix([[0, 1, 0], [1, 0, 1], [0, 0, 1]]), matrix([[1, 0, 0], [1, 1, 0], [0, 0, 1]]))
		expected = ALS.build(
			XY,
			[1, 0, 0],
			[
				[[1, 1, 0], [0, 0, 1], [0, 0, 1]],
				[[0, 0, -1], [0, 0, 0], [0, 0, 0]],
				[[0, 0, 0], [0, -1, 0], [0, 0, 0]],
			],
			[0, 0, -1],
		)
		self.assertEqual(apply_transformation(a, t), expected)

	def test_identity_and_row_scaling(self):
		a = compile_expr("inv(1 - x*y)", XY)
		self.assertEqual(apply_transformation(a, Transformation.identity(a.dim)), a)
		scaling = [[1 if i == j else 0 for j in range(a.dim)] for i in range(a.dim)]
		scaling[-1][-1] = -1
		scaled = apply_transformation(a, Transformation(matrix(scaling), linalg.identity(a.dim)))
		self.assertEqual(scaled.v_list[:-1], a.v_list[:-1])
		self.assertEqual(scaled.v_list[-1], -a.v_list[-1])
		self.assertEqual(prob_eq(scaled, a, trials=6, seed=3).verdict, "equal")

	def test_random_admissible_pairs(self):
		rng = random.Random(31)
		texts = ("x*y*x", "inv(1 - x*y) + y", "inv(x)*y - 2", "x - inv(inv(x) + inv(inv(y) - x))")
		for text in texts:
			a = compile_expr(text, XY)
			for _ in range(4):
				t = random_admissible(rng, a.dim)
				b = apply_transformation(a, t)
				with self.subTest(text=text):
					self.assertTrue(b.is_admissible)
					self.assertEqual(prob_eq(a, b, trials=6, sizes=(1, 2), seed=rng.randrange(1000)).verdict, "equal")
					assignment = random_assignment(XY, 2, rng)
					value = eval_matrices(a, assignment)
					if value is not None:
						self.assertEqual(linalg.to_rows(eval_matrices(b, assignment)), linalg.to_rows(value))

	def test_non_admissible_rejected(self):
		a = ratops.monomial_als(XY, (0,))
		swap = matrix([[0, 1], [1, 0]])
		with self.assertRaises(AdmissibilityError):
			apply_transformation(a, Transformation(swap, swap))

	def test_extend_restrict(self):
		a = ratops.monomial_als(XY, XY.word("xy"))
		extended = extend(a)
		self.assertEqual(extended.dim, a.dim)
		self.assertEqual(extended.base.dim, a.dim + 1)
		self.assertEqual(restrict(extended), a)

	def test_mirror_reverses_words(self):
		reversed_als = mirror(ratops.monomial_als(XY, XY.word("xxy")))
		self.assertTrue(reversed_als.is_admissible)
		table = series_coeffs(reversed_als, 3)
		self.assertEqual(table.coeffs, {XY.word("yxx"): 1})

	def test_normalize_rhs(self):
		a = ratops.add(ratops.monomial_als(XY, (0,)), ratops.monomial_als(XY, (1,)))
		normalized = normalize_rhs(a)
		self.assertEqual(normalized.v_list[:-1], [0, 0, 0])
		self.assertNotEqual(normalized.v_list[-1], 0)
		self.assertEqual(series_coeffs(normalized, 2).coeffs, series_coeffs(a, 2).coeffs)


class TestSerialization(unittest.TestCase):
	def test_round_trip(self):
		a = nested_block_als()
		text = serialize(a)
		self.assertTrue(text.startswith("ALS 1\nletters: x y\ndim: 3\nu: 1 0 0\nv: 0 0 1\nA0:\n"))
		self.assertEqual(parse_als(text), a)

	def test_comments_and_fractions(self):
		text = "# one\nALS 1\nletters: x\ndim: 1\nu: 1\nv: 2/3  # rhs\nA0:\n1\nA[x]:\n-1\n"
		a = parse_als(text)
		self.assertEqual(serialize(a).splitlines()[4], "v: 2/3")

	def test_error_position(self):
		text = "ALS 1\nletters: x\ndim: 1\nu: 1\nv: 1 2\n"
		with self.assertRaises(ParseError) as context:
			parse_als(text)
		self.assertEqual((context.exception.line, context.exception.column), (5, 6))

	def test_bad_rational(self):
		text = "ALS 1\nletters: x\ndim: 1\nu: 1\nv: a\n"
		with self.assertRaises(ParseError) as context:
			parse_als(text)
		self.assertEqual((context.exception.line, context.exception.column), (5, 4))

	def test_truncated(self):
		with self.assertRaises(ParseError):
			parse_als("ALS 1\nletters: x\ndim: 2\nu: 1 0\nv: 0 1\nA0:\n1 0\n")
