# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

"""
Correctness Oracles

Truncated power series of regular elements, Hankel ranks, evaluation at
rational matrices and a seeded randomized equality test. None of these
depend on the minimizer being right; they exist to check it.
"""

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

from free_field.algebra import linalg
from free_field.algebra.als import ALS, Alphabet
from free_field.algebra.linalg import ONE, ZERO
from free_field.algebra.minimizer import minimize
from free_field.algebra.ncpoly import NCPoly, Word, word_key
from free_field.errors import DimensionError, NotRegularError
from free_field.logger import logger

EQUAL = "equal"
DISTINCT = "distinct"
INCONCLUSIVE = "inconclusive"

DEFAULT_TRIALS = 20
DEFAULT_SIZES = (1, 2, 3)
DEFAULT_ENTRY_BOUND = 10


def words_up_to(d: int, length: int) -> List[Word]:
	"""All words over d letters of length <= length, in length-then-lex order."""
	words: List[Word] = []
	for k in range(length + 1):
		words.extend(product(range(d), repeat=k))
	return words


@dataclass
class SeriesTable:
	"""Coefficients of all words up to max_len; zero coefficients are not stored."""

	alphabet: Alphabet
	max_len: int
	coeffs: Dict[Word, Any] = field(default_factory=dict)

	def coefficient(self, word: Sequence[int]) -> Any:
		word = tuple(word)
		if len(word) > self.max_len:
			raise DimensionError(f"word of length {len(word)} beyond the table length {self.max_len}")
		return self.coeffs.get(word, ZERO)

	def items(self) -> List[Tuple[Word, Any]]:
		return sorted(self.coeffs.items(), key=lambda item: word_key(item[0]))

	def render_word(self, word: Word) -> str:
		return self.alphabet.render_word(word) if word else "1"

	def render(self) -> str:
		"""Lines `word coefficient`, length-then-lex order, ε written as 1."""
		return "\n".join(f"{self.render_word(word)} {linalg.format_rat(c)}" for word, c in self.items())

	def as_dict(self) -> Dict[str, str]:
		return {self.render_word(word): linalg.format_rat(c) for word, c in self.items()}


@dataclass(frozen=True, eq=False)
class MatAssignment:
	"""One size x size rational matrix per letter."""

	size: int
	matrices: Tuple[linalg.Mat, ...]

	def __post_init__(self):
		for m in self.matrices:
			if m.shape != (self.size, self.size):
				raise DimensionError(f"matrix of shape {m.shape} in an assignment of size {self.size}")

	@classmethod
	def of(cls, rows_per_letter: Sequence[Sequence[Sequence[Any]]]) -> "MatAssignment":
		size = len(rows_per_letter[0])
		return cls(size, tuple(linalg.matrix(rows, (size, size)) for rows in rows_per_letter))

	def render(self) -> str:
		parts = []
		for m in self.matrices:
			rows = "; ".join(" ".join(linalg.format_rat(x) for x in row) for row in linalg.to_rows(m))
			parts.append(f"[{rows}]")
		return ", ".join(parts)


@dataclass
class ProbResult:
	verdict: str
	defined_trials: int
	witness: Optional[MatAssignment] = None

	@property
	def equal(self) -> bool:
		return self.verdict == EQUAL


def regular_form(a: ALS) -> ALS:
	"""Equivalent ALS with invertible A0, minimizing first if needed.

	Raises:
		NotRegularError: when A0 of the minimized system is singular
	"""
	if a.is_empty or linalg.invert_scalar(a.A0) is not None:
		return a
	minimized = minimize(a)[0]
	if minimized.is_empty or linalg.invert_scalar(minimized.A0) is not None:
		return minimized
	raise NotRegularError("the element is not regular: A0 of its minimal system is singular")


def is_regular(a: ALS) -> bool:
	try:
		regular_form(a)
	except NotRegularError:
		return False
	return True


def series_coeffs(a: ALS, max_len: int) -> SeriesTable:
	"""Exact coefficients u·N_w·A0⁻¹v of all words w with |w| <= max_len, N_ℓ = -A0⁻¹A_ℓ.

	Args:
		a: ALS of a regular element
		max_len: Longest word length

	Returns:
		SeriesTable
	"""
	table = SeriesTable(a.alphabet, max_len)
	a = regular_form(a)
	if a.is_empty:
		return table
	inverse = linalg.invert_scalar(a.A0)
	steps = [linalg.scale(linalg.matmul(inverse, c), -ONE) for c in a.pencil.letter_coeffs]
	tail = linalg.times_column(inverse, a.v_list)

	level = {(): a.u_list}
	for length in range(max_len + 1):
		following = {}
		for word, row in level.items():
			c = linalg.dot(row, tail)
			if c != 0:
				table.coeffs[word] = c
			# a zero state stays zero under every extension
			if length < max_len and not linalg.is_zero_vector(row):
				for letter, step in enumerate(steps):
					following[word + (letter,)] = linalg.row_times(row, step)
		level = following
	return table


def hankel_rank(s: SeriesTable, length: int) -> int:
	"""Rank of the Hankel block with rows p and columns q over all words of length <= length.

	Raises:
		DimensionError: when the table is shorter than 2·length
	"""
	if s.max_len < 2 * length:
		raise DimensionError(f"Hankel rank with length {length} needs coefficients up to {2 * length}")
	words = words_up_to(s.alphabet.d, length)
	rows = {}
	for i, p in enumerate(words):
		row = {j: s.coeffs[p + q] for j, q in enumerate(words) if p + q in s.coeffs}
		if row:
			rows[i] = row
	if not rows:
		return 0
	return linalg.rank_sparse(rows, len(words), len(words))


def eval_matrices(a: ALS, assignment: MatAssignment) -> Optional[linalg.Mat]:
	"""(u⊗I)·A(X)⁻¹·(v⊗I) with A(X) = A0⊗I + ΣA_ℓ⊗X_ℓ, or None when A(X) is singular."""
	if len(assignment.matrices) != a.alphabet.d:
		raise DimensionError(f"assignment has {len(assignment.matrices)} matrices for {a.alphabet.d} letters")
	size = assignment.size
	if a.is_empty:
		return linalg.zeros(size, size)
	n = a.dim
	big = [[ZERO] * (n * size) for _ in range(n * size)]
	identity = linalg.to_rows(linalg.identity(size))
	blocks = [identity] + [linalg.to_rows(m) for m in assignment.matrices]
	for coeff, block in zip(a.pencil.rows(), blocks):
		for i in range(n):
			for j in range(n):
				c = coeff[i][j]
				if not c:
					continue
				for r in range(size):
					for s in range(size):
						if block[r][s]:
							big[i * size + r][j * size + s] += c * block[r][s]
	inverse = linalg.invert_scalar(linalg.matrix(big, (n * size, n * size)))
	if inverse is None:
		return None

	u, v = a.u_list, a.v_list
	left = [[u[i] if r == t else ZERO for i in range(n) for r in range(size)] for t in range(size)]
	right = [[v[i] if r == t else ZERO for t in range(size)] for i in range(n) for r in range(size)]
	product_left = linalg.matmul(linalg.matrix(left, (size, n * size)), inverse)
	return linalg.matmul(product_left, linalg.matrix(right, (n * size, size)))


def random_assignment(alphabet: Alphabet, size: int, rng: random.Random, bound: int = DEFAULT_ENTRY_BOUND) -> MatAssignment:
	"""Entries p/q with p uniform in -bound..bound and q uniform in 1..bound."""
	matrices = []
	for _ in alphabet.letters:
		rows = [[linalg.rat(rng.randint(-bound, bound)) / rng.randint(1, bound) for _ in range(size)] for _ in range(size)]
		matrices.append(linalg.matrix(rows, (size, size)))
	return MatAssignment(size, tuple(matrices))


def prob_eq(
	a: ALS,
	b: ALS,
	trials: int = DEFAULT_TRIALS,
	sizes: Sequence[int] = DEFAULT_SIZES,
	seed: int = 0,
	bound: int = DEFAULT_ENTRY_BOUND,
) -> ProbResult:
	"""Compare two elements at seeded random matrix points.

	Args:
		a: First system
		b: Second system over the same alphabet
		trials: Number of random assignments
		sizes: Matrix sizes, used round robin
		seed: Seed of the random generator
		bound: Entry bound

	Returns:
		distinct with a witness (certain), equal (evidence), or inconclusive when
		fewer than max(1, trials // 4) trials were defined for both
	"""
	if a.alphabet != b.alphabet:
		raise DimensionError("cannot compare elements over different alphabets")
	rng = random.Random(seed)
	defined = 0
	for trial in range(trials):
		assignment = random_assignment(a.alphabet, sizes[trial % len(sizes)], rng, bound)
		left = eval_matrices(a, assignment)
		right = eval_matrices(b, assignment)
		if left is None or right is None:
			continue
		defined += 1
		if linalg.to_rows(left) != linalg.to_rows(right):
			logger("oracle").debug(f"Distinct at trial {trial} with size {assignment.size}")
			return ProbResult(DISTINCT, defined, assignment)
	if defined < max(1, trials // 4):
		return ProbResult(INCONCLUSIVE, defined)
	return ProbResult(EQUAL, defined)


def _span_basis(matrices: List[List[Any]], width: int) -> List[List[Any]]:
	"""Basis (reduced rows) of the span of flattened matrices."""
	if not matrices:
		return []
	reduced, rank, _ = linalg.rref(linalg.matrix(matrices, (len(matrices), width)))
	return linalg.to_rows(reduced)[:rank]


def is_polynomial(a: ALS) -> bool:
	"""A0 invertible and N = -A0⁻¹·ΣA_ℓ·x_ℓ nilpotent (N^n = 0), for minimal systems."""
	if a.is_empty:
		return True
	inverse = linalg.invert_scalar(a.A0)
	if inverse is None:
		return False
	n = a.dim
	steps = [linalg.scale(linalg.matmul(inverse, c), -ONE) for c in a.pencil.letter_coeffs]

	# span of all products N_w, |w| = k; N^n = 0 iff the span for k = n is zero
	flat = [[x for row in linalg.to_rows(step) for x in row] for step in steps]
	basis = _span_basis(flat, n * n)
	for _ in range(1, n):
		if not basis:
			return True
		products = []
		for vector in basis:
			current = linalg.matrix([vector[r * n : (r + 1) * n] for r in range(n)], (n, n))
			for step in steps:
				products.append([x for row in linalg.to_rows(linalg.matmul(current, step)) for x in row])
		basis = _span_basis(products, n * n)
	return not basis


def to_ncpoly(a: ALS, assume_minimal: bool = False) -> Optional[NCPoly]:
	"""The polynomial represented by an ALS, or None when the element is not a polynomial.

	Args:
		a: ALS of the element
		assume_minimal: Skip minimization (nilpotency is only necessary for minimal systems)

	Returns:
		NCPoly of degree < dim, or None
	"""
	if not assume_minimal:
		a = minimize(a)[0]
	if a.is_empty:
		return NCPoly(a.alphabet)
	if not is_polynomial(a):
		return None
	table = series_coeffs(a, a.dim - 1)
	return NCPoly(a.alphabet, table.coeffs)
