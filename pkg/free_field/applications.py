# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

"""
Applications of Minimal Linear Systems

Word problem, left-factor and disjointness tests, left/right greatest common
divisors of polynomials and batch verification of identities.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from free_field.algebra import ratops
from free_field.algebra.als import ALS, Alphabet
from free_field.algebra.minimizer import minimize
from free_field.algebra.ncpoly import NCPoly, Word
from free_field.algebra.oracle import DISTINCT, is_polynomial, prob_eq, to_ncpoly
from free_field.errors import (
	ConstantInputError,
	FreeFieldError,
	ParseError,
	UndefinedElementError,
	VerificationError,
)
from free_field.expr import compile_expr
from free_field.logger import logger

TRUE = "true"
FALSE = "false"
UNDEFINED = "undefined"
ERROR = "error"


@dataclass
class EqResult:
	equal: bool
	rank_left: int
	rank_right: int
	difference_dim: int
	cross_check: Optional[str] = None


@dataclass
class GcdResult:
	"""Greatest common divisor with its captured factor sequence.

	example_grade is set when eliminations outside balanced groups fired or the
	divide-back check rejected part of the factor sequence. quotient_dim is the
	dimension of the minimized p⁻¹·q when the divisor was captured from it.
	"""

	gcd: NCPoly
	factors: List[NCPoly] = field(default_factory=list)
	verified: bool = True
	example_grade: bool = False
	quotient_dim: Optional[int] = None


@dataclass
class IdentityResult:
	line: int
	text: str
	verdict: str
	rank_left: Optional[int] = None
	rank_right: Optional[int] = None
	message: Optional[str] = None

	def render(self) -> str:
		if self.verdict in (TRUE, FALSE):
			return f"{self.line}: {self.verdict} (ranks {self.rank_left}, {self.rank_right})"
		return f"{self.line}: {self.verdict} ({self.message})"


def eq(f: ALS, g: ALS, paranoid: bool = False, **prob_options) -> EqResult:
	"""Decide f = g by minimizing f - g.

	Args:
		f: First system
		g: Second system over the same alphabet
		paranoid: Cross-check with the randomized oracle; a contradiction raises
		**prob_options: trials, sizes, seed and bound for the oracle

	Returns:
		EqResult with the ranks of both sides
	"""
	difference = minimize(ratops.add(f, ratops.scalar_mul(g, -1)))[0]
	result = EqResult(difference.is_empty, minimize(f)[0].dim, minimize(g)[0].dim, difference.dim)
	if paranoid:
		check = prob_eq(f, g, **prob_options)
		result.cross_check = check.verdict
		if result.equal and check.verdict == DISTINCT:
			raise VerificationError(f"structurally equal but distinct at {check.witness.render()}")
		if result.rank_left != result.rank_right and result.equal:
			raise VerificationError("equal elements with different ranks")
	return result


def is_left_factor(h: ALS, f: ALS) -> Optional[ALS]:
	"""The minimized quotient h⁻¹·f when it is a polynomial, else None."""
	try:
		quotient = minimize(ratops.mul(ratops.invert(h), f))[0]
	except UndefinedElementError:
		return None
	return quotient if is_polynomial(quotient) else None


def disjoint(f: ALS, g: ALS) -> bool:
	"""rank(f + g) = rank(f) + rank(g)."""
	return minimize(ratops.add(f, g))[0].dim == minimize(f)[0].dim + minimize(g)[0].dim


def _poly_divisor(h: NCPoly, p: NCPoly, q: NCPoly) -> bool:
	h_als = ratops.poly_als(h)
	return all(is_left_factor(h_als, ratops.poly_als(x)) is not None for x in (p, q))


def _right_quotient(q: NCPoly, cofactor: NCPoly) -> Optional[NCPoly]:
	"""The polynomial q·cofactor⁻¹, or None."""
	return to_ncpoly(ratops.mul(ratops.poly_als(q), ratops.invert(ratops.poly_als(cofactor))))


def _left_quotient_poly(h: NCPoly, f: NCPoly) -> Optional[NCPoly]:
	"""The polynomial h⁻¹·f, or None."""
	quotient = is_left_factor(ratops.poly_als(h), ratops.poly_als(f))
	return None if quotient is None else to_ncpoly(quotient, assume_minimal=True)


def _capture(p: NCPoly, q: NCPoly) -> GcdResult:
	"""Minimize p⁻¹·q with provenance labels and read divisors from balanced elimination groups."""
	p_inverse = ratops.invert(ratops.poly_als(p))
	q_als, q_nodes = ratops.poly_trie(q)
	product = ratops.mul(p_inverse, q_als, "type-(*,1)")
	labels = [("p", i) for i in range(p_inverse.dim)] + [("q", node) for node in q_nodes[1:]]
	reduced, trace = minimize(product, labels)
	logger("applications").debug(f"p⁻¹q minimized from dim {product.dim} to {reduced.dim}")

	candidates: List[Word] = []
	p_count = q_count = 0
	deepest: Optional[Word] = None
	unbalanced = False
	for step in trace.steps:
		for label in step.labels:
			if not isinstance(label, tuple):
				continue
			side, node = label
			if side == "p":
				p_count += 1
			elif side == "q":
				q_count += 1
				if node is not None and (deepest is None or len(node) > len(deepest)):
					deepest = node
		if p_count == q_count and deepest is not None:
			if not candidates or candidates[-1] != deepest:
				candidates.append(deepest)
			unbalanced = False
		else:
			unbalanced = True

	one = NCPoly.constant(p.alphabet, 1)
	factors: List[NCPoly] = []
	divisor = one
	verified = True
	for node in candidates:
		cumulative = _right_quotient(q, q.left_quotient(node))
		if cumulative is None or cumulative.is_constant or not _poly_divisor(cumulative, p, q):
			verified = False
			break
		factor = _left_quotient_poly(divisor, cumulative)
		if factor is None:
			verified = False
			break
		factors.append(factor.normalized())
		divisor = cumulative
	return GcdResult(divisor.normalized(), factors, verified, unbalanced or not verified, reduced.dim)


def lgcd(p: NCPoly, q: NCPoly) -> GcdResult:
	"""Greatest common left divisor of two nonconstant polynomials.

	Args:
		p: First polynomial
		q: Second polynomial

	Returns:
		GcdResult; the divisor is normalized to leading coefficient 1 and verified
		to divide both inputs from the left

	Raises:
		ConstantInputError: when an input is constant
	"""
	if p.is_constant or q.is_constant:
		raise ConstantInputError("gcd needs nonconstant polynomials")
	if p.alphabet != q.alphabet:
		raise ValueError("polynomials over different alphabets")
	if _left_quotient_poly(p, q) is not None:
		return GcdResult(p.normalized(), [p.normalized()])
	if _left_quotient_poly(q, p) is not None:
		return GcdResult(q.normalized(), [q.normalized()])
	return _capture(p, q)


def rgcd(p: NCPoly, q: NCPoly) -> GcdResult:
	"""Greatest common right divisor, by reversal of the left gcd."""
	result = lgcd(p.reverse(), q.reverse())
	factors = [factor.reverse().normalized() for factor in reversed(result.factors)]
	return GcdResult(result.gcd.reverse().normalized(), factors, result.verified, result.example_grade, result.quotient_dim)


def _split_identity(text: str) -> Optional[List[str]]:
	content = text.split("#", 1)[0].strip()
	if not content:
		return None
	if content.count("==") != 1:
		raise ParseError("expected exactly one '=='", 1, 1)
	return [side.strip() for side in content.split("==")]


def check_identity(
	text: str,
	alphabet: Alphabet,
	paranoid: bool = False,
	lazy: bool = False,
	prob_options: Optional[Dict[str, Any]] = None,
) -> List[IdentityResult]:
	"""Check one `lhs == rhs` identity per line; `#` starts a comment.

	Args:
		text: File contents
		alphabet: Letters of the expressions
		paranoid: Cross-check each verdict with the randomized oracle
		lazy: Minimize only at the root of each side
		prob_options: Oracle options for paranoid mode

	Returns:
		One result per identity line, in input order; malformed lines are
		reported as errors and processing continues
	"""
	results = []
	for number, line in enumerate(text.splitlines(), start=1):
		try:
			sides = _split_identity(line)
		except ParseError as e:
			results.append(IdentityResult(number, line.strip(), ERROR, message=e.message))
			continue
		if sides is None:
			continue
		compiled: List[ALS] = []
		for name, side in zip(("left", "right"), sides):
			try:
				compiled.append(compile_expr(side, alphabet, lazy=lazy))
			except UndefinedElementError as e:
				results.append(IdentityResult(number, line.strip(), UNDEFINED, message=f"{name} side: {e}"))
				break
			except ParseError as e:
				results.append(IdentityResult(number, line.strip(), ERROR, message=f"{name} side: {e}"))
				break
		if len(compiled) != 2:
			continue
		try:
			outcome = eq(compiled[0], compiled[1], paranoid=paranoid, **(prob_options or {}))
		except FreeFieldError as e:
			results.append(IdentityResult(number, line.strip(), ERROR, message=str(e)))
			continue
		verdict = TRUE if outcome.equal else FALSE
		results.append(IdentityResult(number, line.strip(), verdict, outcome.rank_left, outcome.rank_right))
	return results


def identity_exit_code(results: Sequence[IdentityResult]) -> int:
	return 0 if all(result.verdict == TRUE for result in results) else 1
