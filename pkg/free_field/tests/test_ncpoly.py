# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

import unittest

from free_field.algebra.als import Alphabet
from free_field.algebra.ncpoly import NCPoly

XYZ = Alphabet.of("x,y,z")


def poly(terms):
	return NCPoly(XYZ, {XYZ.word(word): coeff for word, coeff in terms.items()})


class TestNCPoly(unittest.TestCase):
	def test_render_order(self):
		p = poly({"yxy": -1, "y": 1})
		self.assertEqual(p.render(), "y - y*x*y")
		self.assertEqual(poly({"": 3, "x": "1/2", "yx": -2}).render(), "3 + 1/2*x - 2*y*x")
		self.assertEqual(NCPoly(XYZ).render(), "0")

	def test_arithmetic(self):
		x, y = NCPoly.letter(XYZ, "x"), NCPoly.letter(XYZ, "y")
		one = NCPoly.constant(XYZ, 1)
		self.assertEqual(y * (one - x * y), poly({"y": 1, "yxy": -1}))
		self.assertNotEqual(x * y, y * x)
		self.assertTrue((x - x).is_zero)
		self.assertEqual((x * y + one).degree, 2)

	def test_normalized(self):
		self.assertEqual(poly({"y": -2, "yxy": 2}).normalized(), poly({"y": 1, "yxy": -1}))

	def test_reverse_and_quotient(self):
		p = poly({"yxz": 1, "yxyxz": -1})
		self.assertEqual(p.reverse(), poly({"zxy": 1, "zxyxy": -1}))
		self.assertEqual(p.left_quotient(XYZ.word("yx")), poly({"z": 1, "yxz": -1}))
		self.assertTrue(p.left_quotient(XYZ.word("x")).is_zero)
