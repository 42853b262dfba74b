# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

"""
Noncommutative Polynomials
"""

from typing import Any, Dict, Iterable, List, Optional, Tuple

from free_field.algebra import linalg
from free_field.algebra.als import Alphabet
from free_field.algebra.linalg import ONE, ZERO

Word = Tuple[int, ...]


def word_key(word: Word) -> Tuple[int, Word]:
	"""Length-then-lex order of words."""
	return len(word), word


class NCPoly:
	"""Finitely supported map word -> rational coefficient; zero coefficients are never stored."""

	def __init__(self, alphabet: Alphabet, terms: Optional[Dict[Word, Any]] = None):
		self.alphabet = alphabet
		self.terms: Dict[Word, Any] = {}
		for word, coeff in (terms or {}).items():
			coeff = linalg.rat(coeff)
			if coeff != 0:
				self.terms[tuple(word)] = coeff

	@classmethod
	def constant(cls, alphabet: Alphabet, value: Any) -> "NCPoly":
		return cls(alphabet, {(): value})

	@classmethod
	def monomial(cls, alphabet: Alphabet, word: Iterable[int], coeff: Any = 1) -> "NCPoly":
		return cls(alphabet, {tuple(word): coeff})

	@classmethod
	def letter(cls, alphabet: Alphabet, letter: str) -> "NCPoly":
		return cls.monomial(alphabet, (alphabet.index(letter),))

	def _check(self, other: "NCPoly") -> None:
		if self.alphabet != other.alphabet:
			raise ValueError("polynomials over different alphabets")

	def __add__(self, other: "NCPoly") -> "NCPoly":
		self._check(other)
		terms = dict(self.terms)
		for word, coeff in other.terms.items():
			terms[word] = terms.get(word, ZERO) + coeff
		return NCPoly(self.alphabet, terms)

	def __neg__(self) -> "NCPoly":
		return self.scale(-ONE)

	def __sub__(self, other: "NCPoly") -> "NCPoly":
		return self + (-other)

	def __mul__(self, other: "NCPoly") -> "NCPoly":
		self._check(other)
		terms: Dict[Word, Any] = {}
		for w1, c1 in self.terms.items():
			for w2, c2 in other.terms.items():
				word = w1 + w2
				terms[word] = terms.get(word, ZERO) + c1 * c2
		return NCPoly(self.alphabet, terms)

	def scale(self, factor: Any) -> "NCPoly":
		factor = linalg.rat(factor)
		return NCPoly(self.alphabet, {word: factor * coeff for word, coeff in self.terms.items()})

	def __eq__(self, other: object) -> bool:
		if not isinstance(other, NCPoly):
			return NotImplemented
		return self.alphabet == other.alphabet and self.terms == other.terms

	def __hash__(self) -> int:
		return hash((self.alphabet, tuple(sorted(self.terms.items(), key=lambda t: word_key(t[0])))))

	@property
	def is_zero(self) -> bool:
		return not self.terms

	@property
	def is_constant(self) -> bool:
		return all(len(word) == 0 for word in self.terms)

	@property
	def degree(self) -> int:
		return max((len(word) for word in self.terms), default=-1)

	def coefficient(self, word: Iterable[int]) -> Any:
		return self.terms.get(tuple(word), ZERO)

	def sorted_terms(self) -> List[Tuple[Word, Any]]:
		return sorted(self.terms.items(), key=lambda t: word_key(t[0]))

	def reverse(self) -> "NCPoly":
		return NCPoly(self.alphabet, {tuple(reversed(word)): coeff for word, coeff in self.terms.items()})

	def left_quotient(self, prefix: Iterable[int]) -> "NCPoly":
		"""prefix⁻¹·p: terms prefix·w contribute w."""
		prefix = tuple(prefix)
		k = len(prefix)
		return NCPoly(self.alphabet, {word[k:]: coeff for word, coeff in self.terms.items() if word[:k] == prefix})

	def normalized(self) -> "NCPoly":
		"""Scale so that the first term in length-then-lex order has coefficient 1."""
		if self.is_zero:
			return self
		return self.scale(ONE / self.sorted_terms()[0][1])

	def render(self) -> str:
		"""Canonical text, e.g. "y - y*x*y"; terms in length-then-lex order."""
		if self.is_zero:
			return "0"
		pieces = []
		for word, coeff in self.sorted_terms():
			text = self.alphabet.render_word(word, "*")
			if not word:
				term = linalg.format_rat(coeff)
			elif coeff == 1:
				term = text
			elif coeff == -1:
				term = f"-{text}"
			else:
				term = f"{linalg.format_rat(coeff)}*{text}"
			if not pieces:
				pieces.append(term)
			elif term.startswith("-"):
				pieces.append(f" - {term[1:]}")
			else:
				pieces.append(f" + {term}")
		return "".join(pieces)

	def __str__(self) -> str:
		return self.render()

	def __repr__(self) -> str:
		return f"NCPoly({self.render()!r})"
