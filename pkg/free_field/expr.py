# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

"""
Rational Expressions

Surface syntax for free field elements, parsed by recursive descent and
compiled bottom-up to admissible linear systems:

	expr   := ['+'|'-'] term (('+'|'-') term)*
	term   := factor (['*'] factor)*
	factor := base ('^' ['-'] int)?
	base   := rational | letter | '(' expr ')' | 'inv' '(' expr ')'

A leading minus negates its whole term. Identifiers that are not declared
letters but consist of single-character letters are read as products, so
`yxz` is `y*x*z`.
"""

import re
from dataclasses import dataclass
from typing import Any, List, NamedTuple, Optional, Union

from free_field.algebra import linalg, ratops
from free_field.algebra.als import ALS, Alphabet
from free_field.algebra.minimizer import minimize
from free_field.algebra.ncpoly import NCPoly
from free_field.algebra.oracle import to_ncpoly as als_to_ncpoly
from free_field.algebra.refiner import DEFAULT_MAX_ALTERNATIONS, DEFAULT_PERMUTATION_SEED_LIMIT
from free_field.errors import ParseError, UndefinedElementError
from free_field.logger import logger

INVERSE = "inv"

_TOKEN = re.compile(r"\s*(?:(?P<number>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))")


@dataclass(frozen=True)
class Scalar:
	value: Any

	def render(self) -> str:
		return linalg.format_rat(self.value)


@dataclass(frozen=True)
class Letter:
	name: str

	def render(self) -> str:
		return self.name


@dataclass(frozen=True)
class Neg:
	operand: "Expr"

	def render(self) -> str:
		return f"-({self.operand.render()})"


@dataclass(frozen=True)
class Add:
	left: "Expr"
	right: "Expr"

	def render(self) -> str:
		return f"{self.left.render()} + {self.right.render()}"


@dataclass(frozen=True)
class Sub:
	left: "Expr"
	right: "Expr"

	def render(self) -> str:
		right = self.right.render()
		if isinstance(self.right, (Add, Sub)):
			right = f"({right})"
		return f"{self.left.render()} - {right}"


@dataclass(frozen=True)
class Mul:
	left: "Expr"
	right: "Expr"

	def render(self) -> str:
		return f"{_wrap(self.left)}*{_wrap(self.right)}"


@dataclass(frozen=True)
class Inv:
	operand: "Expr"

	def render(self) -> str:
		return f"inv({self.operand.render()})"


@dataclass(frozen=True)
class Pow:
	base: "Expr"
	exponent: int

	def render(self) -> str:
		return f"{_wrap(self.base, pow_base=True)}^{self.exponent}"


Expr = Union[Scalar, Letter, Neg, Add, Sub, Mul, Inv, Pow]


def _wrap(e: Expr, pow_base: bool = False) -> str:
	if isinstance(e, (Add, Sub, Neg)) or (pow_base and isinstance(e, (Mul, Pow))):
		return f"({e.render()})"
	return e.render()


class Token(NamedTuple):
	kind: str
	text: str
	column: int


def tokenize(text: str) -> List[Token]:
	"""Split an expression into tokens with 1-based columns."""
	tokens = []
	position = 0
	while position < len(text):
		if text[position:].strip() == "":
			break
		match = _TOKEN.match(text, position)
		if not match:
			column = position + len(text[position:]) - len(text[position:].lstrip()) + 1
			raise ParseError(f"unexpected character {text[column - 1]!r}", 1, column)
		kind = match.lastgroup
		tokens.append(Token(kind, match.group(kind), match.start(kind) + 1))
		position = match.end()
	tokens.append(Token("end", "", len(text) + 1))
	return tokens


class _Parser:
	def __init__(self, text: str, alphabet: Alphabet):
		self.tokens = tokenize(text)
		self.alphabet = alphabet
		self.position = 0

	@property
	def current(self) -> Token:
		return self.tokens[self.position]

	def advance(self) -> Token:
		token = self.current
		self.position += 1
		return token

	def expect(self, text: str) -> Token:
		token = self.current
		if token.text != text or token.kind == "end":
			found = "end of input" if token.kind == "end" else repr(token.text)
			raise ParseError(f"expected {text!r}, found {found}", 1, token.column)
		return self.advance()

	def parse(self) -> Expr:
		result = self.expression()
		if self.current.kind != "end":
			raise ParseError(f"unexpected {self.current.text!r}", 1, self.current.column)
		return result

	def expression(self) -> Expr:
		negate = False
		if self.current.text in ("+", "-") and self.current.kind == "op":
			negate = self.advance().text == "-"
		result = self.term()
		if negate:
			result = Neg(result)
		while self.current.kind == "op" and self.current.text in ("+", "-"):
			op = self.advance().text
			right = self.term()
			result = Add(result, right) if op == "+" else Sub(result, right)
		return result

	def starts_base(self) -> bool:
		token = self.current
		return token.kind in ("number", "name") or (token.kind == "op" and token.text == "(")

	def term(self) -> Expr:
		result = self.factor()
		while True:
			if self.current.kind == "op" and self.current.text == "*":
				self.advance()
			elif not self.starts_base():
				return result
			result = Mul(result, self.factor())

	def factor(self) -> Expr:
		base = self.base()
		if self.current.kind == "op" and self.current.text == "^":
			self.advance()
			sign = 1
			if self.current.kind == "op" and self.current.text == "-":
				self.advance()
				sign = -1
			token = self.current
			if token.kind != "number" or "/" in token.text:
				raise ParseError("expected an integer exponent", 1, token.column)
			self.advance()
			return Pow(base, sign * int(token.text))
		return base

	def base(self) -> Expr:
		token = self.current
		if token.kind == "number":
			self.advance()
			return Scalar(linalg.rat(token.text))
		if token.kind == "name":
			self.advance()
			if token.text == INVERSE and self.current.text == "(":
				self.advance()
				operand = self.expression()
				self.expect(")")
				return Inv(operand)
			return self.letters(token)
		if token.kind == "op" and token.text == "(":
			self.advance()
			inner = self.expression()
			self.expect(")")
			return inner
		found = "end of input" if token.kind == "end" else repr(token.text)
		raise ParseError(f"unexpected {found}", 1, token.column)

	def letters(self, token: Token) -> Expr:
		if token.text in self.alphabet.letters:
			return Letter(token.text)
		if all(ch in self.alphabet.letters for ch in token.text):
			result: Expr = Letter(token.text[0])
			for ch in token.text[1:]:
				result = Mul(result, Letter(ch))
			return result
		raise ParseError(f"undeclared letter {token.text!r}", 1, token.column)


def parse_expr(text: str, alphabet: Union[Alphabet, str]) -> Expr:
	"""Parse an expression over the given letters.

	Raises:
		ParseError: with the column of the offending token
	"""
	return _Parser(text, Alphabet.of(alphabet)).parse()


class Compiler:
	"""Bottom-up construction of an ALS for an expression.

	In eager mode every intermediate system is minimized (and refined); in lazy
	mode only the root is, plus the operands of inversions, which must be
	known to be nonzero.
	"""

	def __init__(
		self,
		alphabet: Union[Alphabet, str],
		lazy: bool = False,
		max_alternations: int = DEFAULT_MAX_ALTERNATIONS,
		permutation_seed_limit: int = DEFAULT_PERMUTATION_SEED_LIMIT,
	):
		self.alphabet = Alphabet.of(alphabet)
		self.lazy = lazy
		self.max_alternations = max_alternations
		self.permutation_seed_limit = permutation_seed_limit

	def minimize(self, a: ALS) -> ALS:
		return minimize(a, max_alternations=self.max_alternations, permutation_seed_limit=self.permutation_seed_limit)[0]

	def compile(self, e: Expr) -> ALS:
		result = self.minimize(self.build(e))
		logger("expr").debug(f"Compiled {e.render()} to an ALS of dimension {result.dim}")
		return result

	def construct(self, e: Expr) -> ALS:
		"""ALS of the root node without minimizing it."""
		return self._build(e)

	def build(self, e: Expr) -> ALS:
		result = self._build(e)
		if not self.lazy and not isinstance(e, (Scalar, Letter)):
			result = self.minimize(result)
		return result

	def _build(self, e: Expr) -> ALS:
		if isinstance(e, Scalar):
			return ratops.scalar_als(self.alphabet, e.value)
		if isinstance(e, Letter):
			return ratops.monomial_als(self.alphabet, (self.alphabet.index(e.name),))
		if isinstance(e, Neg):
			return ratops.scalar_mul(self.build(e.operand), -1)
		if isinstance(e, Add):
			return ratops.add(self.build(e.left), self.build(e.right))
		if isinstance(e, Sub):
			return ratops.add(self.build(e.left), ratops.scalar_mul(self.build(e.right), -1))
		if isinstance(e, Mul):
			return ratops.mul(self.build(e.left), self.build(e.right))
		if isinstance(e, Inv):
			return self._invert(self.build(e.operand), e)
		if isinstance(e, Pow):
			return self._power(e)
		raise TypeError(f"not an expression node: {e!r}")

	def _invert(self, a: ALS, node: Expr) -> ALS:
		try:
			return ratops.invert(a)
		except UndefinedElementError:
			raise UndefinedElementError(subexpression=node.render())

	def _power(self, e: Pow) -> ALS:
		if e.exponent == 0:
			return ratops.scalar_als(self.alphabet, 1)
		base = self.build(e.base)
		result = base
		for _ in range(abs(e.exponent) - 1):
			result = ratops.mul(result, base)
			if not self.lazy:
				result = self.minimize(result)
		if e.exponent < 0:
			result = self._invert(result, e)
		return result


def compile_expr(e: Union[Expr, str], alphabet: Union[Alphabet, str], lazy: bool = False, **options) -> ALS:
	"""Minimized ALS of an expression (text or AST).

	Raises:
		UndefinedElementError: when a zero element is inverted; names the subexpression
	"""
	alphabet = Alphabet.of(alphabet)
	if isinstance(e, str):
		e = parse_expr(e, alphabet)
	return Compiler(alphabet, lazy=lazy, **options).compile(e)


def _poly_of(e: Expr, alphabet: Alphabet) -> Optional[NCPoly]:
	"""Direct evaluation for inversion-free expressions with non-negative powers."""
	if isinstance(e, Scalar):
		return NCPoly.constant(alphabet, e.value)
	if isinstance(e, Letter):
		return NCPoly.letter(alphabet, e.name)
	if isinstance(e, Neg):
		inner = _poly_of(e.operand, alphabet)
		return None if inner is None else -inner
	if isinstance(e, (Add, Sub, Mul)):
		left, right = _poly_of(e.left, alphabet), _poly_of(e.right, alphabet)
		if left is None or right is None:
			return None
		if isinstance(e, Add):
			return left + right
		return left - right if isinstance(e, Sub) else left * right
	if isinstance(e, Pow) and e.exponent >= 0:
		base = _poly_of(e.base, alphabet)
		if base is None:
			return None
		result = NCPoly.constant(alphabet, 1)
		for _ in range(e.exponent):
			result = result * base
		return result
	return None


def to_ncpoly(e: Union[Expr, str], alphabet: Union[Alphabet, str]) -> Optional[NCPoly]:
	"""The polynomial an expression denotes, or None when it is not a polynomial."""
	alphabet = Alphabet.of(alphabet)
	if isinstance(e, str):
		e = parse_expr(e, alphabet)
	poly = _poly_of(e, alphabet)
	if poly is not None:
		return poly
	return als_to_ncpoly(compile_expr(e, alphabet), assume_minimal=True)
