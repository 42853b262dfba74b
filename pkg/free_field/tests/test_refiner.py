# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

import random
import time
import unittest

from free_field.algebra import ratops
from free_field.algebra.als import ALS, Alphabet, pivot_structure
from free_field.algebra.minimizer import minimize
from free_field.algebra.oracle import prob_eq
from free_field.algebra.refiner import (
	CERTIFIED,
	EXHAUSTIVE_BLOCK_LIMIT,
	HEURISTIC,
	apply_block_split,
	is_bounded,
	refine,
	search_block_split,
	splits_over_extension,
)
from free_field.errors import VerificationError
from free_field.expr import compile_expr

XY = Alphabet.of("x,y")

# coefficient blocks [A0, A[x], A[y]] of 2x2 pivot blocks
SWAP_BLOCK = [[[0, 1], [1, 0]], [[0, 0], [0, 0]], [[1, 0], [0, 0]]]  # [[y, 1], [1, 0]]
IRRATIONAL_BLOCK = [[[1, 0], [0, 1]], [[0, 1], [2, 0]], [[0, 0], [0, 0]]]  # [[1, x], [2x, 1]]
CROSS_BLOCK = [[[1, 0], [0, 1]], [[0, 0], [-1, 0]], [[0, -1], [0, 0]]]  # [[1, -y], [-x, 1]]


def behind_scalar_row(block) -> ALS:
	"""Dimension 3 system with the 2x2 block as its second pivot block, coupled by -x."""
	coeffs = []
	for index, rows in enumerate(block):
		head = [1 if index == 0 else 0, -1 if index == 1 else 0, 0]
		coeffs.append([head, [0, *rows[0]], [0, *rows[1]]])
	return ALS.build(XY, [1, 0, 0], coeffs, [0, 0, 1])


class TestBlockSearch(unittest.TestCase):
	def test_swap_block_splits(self):
		split = search_block_split(SWAP_BLOCK)
		self.assertIsNotNone(split)
		self.assertEqual(split.size, 1)

	def test_irrational_block(self):
		self.assertIsNone(search_block_split(IRRATIONAL_BLOCK))
		self.assertTrue(splits_over_extension(IRRATIONAL_BLOCK))

	def test_cross_block(self):
		self.assertIsNone(search_block_split(CROSS_BLOCK))
		self.assertIsNone(search_block_split(CROSS_BLOCK, first_block=True))
		self.assertFalse(splits_over_extension(CROSS_BLOCK))

	def test_first_block_keeps_admissibility(self):
		# splitting [[y, 1], [1, 0]] needs a column exchange, which is not admissible in block 1
		self.assertIsNone(search_block_split(SWAP_BLOCK, first_block=True))

	def test_block_size(self):
		with self.assertRaises(ValueError):
			search_block_split([[[1]], [[0]], [[0]]])


class TestRefine(unittest.TestCase):
	def test_swap_block_refines_to_scalars(self):
		a = behind_scalar_row(SWAP_BLOCK)
		self.assertEqual(pivot_structure(a).sizes, (1, 2))
		refined, report = refine(a)
		self.assertEqual(pivot_structure(refined).sizes, (1, 1, 1))
		self.assertEqual(len(report.splits), 1)
		self.assertTrue(report.fully_refined)
		self.assertTrue(refined.is_admissible)
		self.assertTrue(prob_eq(a, refined, trials=6, sizes=(2,), seed=3).equal)

	def test_irrational_block_is_heuristic(self):
		refined, report = refine(behind_scalar_row(IRRATIONAL_BLOCK))
		self.assertEqual(pivot_structure(refined).sizes, (1, 2))
		self.assertEqual([block.status for block in report.blocks], [CERTIFIED, HEURISTIC])
		self.assertFalse(report.fully_refined)
		self.assertTrue(report.render().endswith("fully-refined: no"))

	def test_cross_block_is_certified(self):
		a = ALS.build(XY, [1, 0], CROSS_BLOCK, [0, 1])
		refined, report = refine(a)
		self.assertEqual(refined, a)
		self.assertEqual([block.status for block in report.blocks], [CERTIFIED])
		self.assertEqual(report.render(), "block 1..2 (size 2): refined-certified\nfully-refined: yes")

	def test_split_verification(self):
		split = search_block_split(SWAP_BLOCK)
		with self.assertRaises(VerificationError):
			apply_block_split(behind_scalar_row(IRRATIONAL_BLOCK), 1, split)

	def test_factored_polynomial_inverse(self):
		# x(1 - yx) = (1 - xy)x
		x = compile_expr("x", XY)
		for left, right in ((x, compile_expr("1 - y*x", XY)), (compile_expr("1 - x*y", XY), x)):
			p = ratops.mul(left, right, "type-(1,*)")
			self.assertEqual(p.dim, 4)
			inverse, trace = minimize(ratops.invert(p, assume_minimal=True))
			self.assertEqual(inverse.dim, 3)
			self.assertTrue(trace.fully_refined)
			self.assertEqual(sorted(pivot_structure(inverse).sizes), [1, 2])
			self.assertTrue(prob_eq(inverse, compile_expr("inv(1 - y*x)*inv(x)", XY), trials=6, seed=5).equal)


class TestBoundedSearch(unittest.TestCase):
	def test_limit(self):
		self.assertFalse(is_bounded(EXHAUSTIVE_BLOCK_LIMIT))
		self.assertTrue(is_bounded(EXHAUSTIVE_BLOCK_LIMIT + 1))

	def test_dense_block(self):
		rng = random.Random(12)
		n = 12
		coeffs = [[[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)] for _ in range(XY.d + 1)]
		a = ALS.build(XY, [1] + [0] * (n - 1), coeffs, [0] * (n - 1) + [1])
		start = time.monotonic()
		refined, report = refine(a)
		self.assertLess(time.monotonic() - start, 5)
		self.assertEqual(refined, a)
		self.assertEqual(report.render(), "block 1..12 (size 12): refined-heuristic (bounded search)\nfully-refined: no")
