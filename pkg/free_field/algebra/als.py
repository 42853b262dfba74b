# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

"""
Admissible Linear Systems

An ALS (u, A, v) with A = A0 + A[x1]·x1 + ... + A[xd]·xd represents the free
field element u·A⁻¹·v. Left family s = A⁻¹v and right family t = u·A⁻¹ are
never materialized; they only enter through linear equations.
"""

import re
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from free_field.algebra import linalg
from free_field.algebra.linalg import ONE, ZERO, Mat
from free_field.errors import AdmissibilityError, DimensionError, ParseError

FORMAT_HEADER = "ALS 1"


@dataclass(frozen=True)
class Alphabet:
	"""Ordered letters; the coefficient matrix of a letter sits at its position + 1."""

	letters: Tuple[str, ...]

	def __post_init__(self):
		if not self.letters:
			raise DimensionError("alphabet must not be empty")
		if len(set(self.letters)) != len(self.letters):
			raise DimensionError(f"duplicate letters in {' '.join(self.letters)}")

	@classmethod
	def of(cls, letters: Union[str, Sequence[str], "Alphabet"]) -> "Alphabet":
		"""Build an alphabet from "x,y,z", "x y z" or a sequence of names."""
		if isinstance(letters, Alphabet):
			return letters
		if isinstance(letters, str):
			letters = [letter for letter in re.split(r"[,\s]+", letters) if letter]
		return cls(tuple(letters))

	@property
	def d(self) -> int:
		return len(self.letters)

	def index(self, letter: str) -> int:
		try:
			return self.letters.index(letter)
		except ValueError:
			raise DimensionError(f"letter {letter!r} not in alphabet {' '.join(self.letters)}")

	def word(self, text: str) -> Tuple[int, ...]:
		"""Word of single-character letters, e.g. "xyx" -> (0, 1, 0)."""
		return tuple(self.index(ch) for ch in text)

	def render_word(self, word: Sequence[int], separator: str = "") -> str:
		return separator.join(self.letters[i] for i in word)

	def __iter__(self) -> Iterator[str]:
		return iter(self.letters)

	def __len__(self) -> int:
		return len(self.letters)


@dataclass(frozen=True, eq=False)
class Pencil:
	"""Coefficient matrices A0, A[x1], ..., A[xd] of a linear matrix pencil."""

	alphabet: Alphabet
	coeffs: Tuple[Mat, ...]

	def __post_init__(self):
		if len(self.coeffs) != self.alphabet.d + 1:
			raise DimensionError(f"expected {self.alphabet.d + 1} coefficient matrices, got {len(self.coeffs)}")
		n = self.coeffs[0].shape[0]
		for coeff in self.coeffs:
			if coeff.shape != (n, n):
				raise DimensionError(f"coefficient matrix of shape {coeff.shape}, expected {(n, n)}")

	@property
	def n(self) -> int:
		return self.coeffs[0].shape[0]

	@property
	def A0(self) -> Mat:
		return self.coeffs[0]

	@property
	def letter_coeffs(self) -> Tuple[Mat, ...]:
		return self.coeffs[1:]

	def rows(self) -> List[List[List[Any]]]:
		return [linalg.to_rows(coeff) for coeff in self.coeffs]

	def transform(self, p: Mat, q: Mat) -> "Pencil":
		return Pencil(self.alphabet, tuple(linalg.matmul(linalg.matmul(p, c), q) for c in self.coeffs))

	def block_is_zero(self, rows: Sequence[int], cols: Sequence[int]) -> bool:
		return all(all(c[i][j] == 0 for i in rows for j in cols) for c in self.rows())

	def __eq__(self, other: object) -> bool:
		if not isinstance(other, Pencil):
			return NotImplemented
		return self.alphabet == other.alphabet and self.rows() == other.rows()

	__hash__ = None


@dataclass(frozen=True, eq=False)
class ALS:
	"""Linear system (u, A, v); admissible when u = e1. Dimension 0 represents 0."""

	u: Mat
	pencil: Pencil
	v: Mat

	def __post_init__(self):
		n = self.pencil.n
		if self.u.shape != (1, n):
			raise DimensionError(f"u has shape {self.u.shape}, expected {(1, n)}")
		if self.v.shape != (n, 1):
			raise DimensionError(f"v has shape {self.v.shape}, expected {(n, 1)}")

	@classmethod
	def build(
		cls,
		alphabet: Union[Alphabet, str, Sequence[str]],
		u: Sequence[Any],
		coeffs: Sequence[Sequence[Sequence[Any]]],
		v: Sequence[Any],
	) -> "ALS":
		"""Build an ALS from plain lists (entries are ints, Fractions, strings or rationals).

		Args:
			alphabet: Alphabet or letter names
			u: Row vector entries
			coeffs: Row lists of A0 followed by one per letter
			v: Column vector entries

		Returns:
			ALS instance
		"""
		alphabet = Alphabet.of(alphabet)
		n = len(v)
		pencil = Pencil(alphabet, tuple(linalg.matrix(rows, (n, n)) for rows in coeffs))
		return cls(linalg.matrix([list(u)], (1, len(u))), pencil, linalg.column_matrix(v))

	@classmethod
	def empty(cls, alphabet: Union[Alphabet, str, Sequence[str]]) -> "ALS":
		alphabet = Alphabet.of(alphabet)
		pencil = Pencil(alphabet, tuple(linalg.zeros(0, 0) for _ in range(alphabet.d + 1)))
		return cls(linalg.zeros(1, 0), pencil, linalg.zeros(0, 1))

	@property
	def alphabet(self) -> Alphabet:
		return self.pencil.alphabet

	@property
	def dim(self) -> int:
		return self.pencil.n

	@property
	def is_empty(self) -> bool:
		return self.dim == 0

	@property
	def coeffs(self) -> Tuple[Mat, ...]:
		return self.pencil.coeffs

	@property
	def A0(self) -> Mat:
		return self.pencil.A0

	@property
	def u_list(self) -> List[Any]:
		return linalg.row_of(self.u, 0) if self.dim else []

	@property
	def v_list(self) -> List[Any]:
		return linalg.column_of(self.v, 0) if self.dim else []

	@property
	def is_admissible(self) -> bool:
		return self.u_list == linalg.unit_vector(self.dim, 0) if self.dim else True

	def with_parts(
		self, u: Optional[Mat] = None, coeffs: Optional[Sequence[Mat]] = None, v: Optional[Mat] = None
	) -> "ALS":
		pencil = self.pencil if coeffs is None else Pencil(self.alphabet, tuple(coeffs))
		return ALS(self.u if u is None else u, pencil, self.v if v is None else v)

	def __eq__(self, other: object) -> bool:
		if not isinstance(other, ALS):
			return NotImplemented
		return self.pencil == other.pencil and self.u_list == other.u_list and self.v_list == other.v_list

	__hash__ = None

	def __str__(self) -> str:
		return serialize(self)


@dataclass(frozen=True, eq=False)
class ExtendedALS:
	"""ALS with a prepended scalar row/column 0 carrying the admissibility condition."""

	base: ALS

	@property
	def dim(self) -> int:
		return self.base.dim - 1


@dataclass
class Diagnostics:
	"""Result of validating an ALS."""

	problems: List[str] = field(default_factory=list)
	represents_zero: bool = False

	@property
	def ok(self) -> bool:
		return not self.problems


@dataclass(frozen=True)
class PivotStructure:
	"""Maximal block upper triangular decomposition, sizes n1..nm."""

	sizes: Tuple[int, ...]

	@property
	def m(self) -> int:
		return len(self.sizes)

	@property
	def n(self) -> int:
		return sum(self.sizes)

	@property
	def cuts(self) -> List[int]:
		positions, total = [], 0
		for size in self.sizes[:-1]:
			total += size
			positions.append(total)
		return positions

	@property
	def blocks(self) -> List[List[int]]:
		result, start = [], 0
		for size in self.sizes:
			result.append(list(range(start, start + size)))
			start += size
		return result

	def block(self, k: int) -> List[int]:
		"""Indices of block k (1-based)."""
		if not 1 <= k <= self.m:
			raise DimensionError(f"block index {k} out of range 1..{self.m}")
		return self.blocks[k - 1]

	def block_of(self, index: int) -> int:
		for k, block in enumerate(self.blocks, start=1):
			if index in block:
				return k
		raise DimensionError(f"index {index} out of range")


@dataclass(frozen=True, eq=False)
class Transformation:
	"""Pair (P, Q) acting as (u, A, v) -> (uQ, PAQ, Pv)."""

	p: Mat
	q: Mat

	@property
	def admissible(self) -> bool:
		n = self.q.shape[0]
		return n == 0 or linalg.row_of(self.q, 0) == linalg.unit_vector(n, 0)

	@classmethod
	def identity(cls, n: int) -> "Transformation":
		return cls(linalg.identity(n), linalg.identity(n))


def validate(a: ALS) -> Diagnostics:
	"""Check admissibility and structural sanity (fullness is not proven).

	Args:
		a: System to check

	Returns:
		Diagnostics with problems and the represents-zero flag
	"""
	diagnostics = Diagnostics(represents_zero=a.is_empty)
	if a.is_empty:
		return diagnostics
	if not a.is_admissible:
		diagnostics.problems.append(f"admissibility violated: u = [{' '.join(map(linalg.format_rat, a.u_list))}]")

	rows = a.pencil.rows()
	n = a.dim
	for i in range(n):
		if all(c[i][j] == 0 for c in rows for j in range(n)):
			diagnostics.problems.append(f"row {i + 1} of the pencil is zero; the pencil is not full")
	for j in range(n):
		if all(c[i][j] == 0 for c in rows for i in range(n)):
			diagnostics.problems.append(f"column {j + 1} of the pencil is zero; the pencil is not full")
	if linalg.is_zero_vector(a.v_list):
		diagnostics.represents_zero = True
	return diagnostics


def pivot_structure(a: Union[ALS, Pencil]) -> PivotStructure:
	"""Maximal pivot block structure.

	Cut at c iff every coefficient matrix vanishes on rows c..n-1 and columns 0..c-1.

	Args:
		a: ALS or pencil of dimension at least 1

	Returns:
		PivotStructure
	"""
	pencil = a.pencil if isinstance(a, ALS) else a
	n = pencil.n
	if n == 0:
		raise DimensionError("pivot structure of the empty system")

	# entry (i, j) with i > j forbids every cut c with j < c <= i
	forbid = [0] * (n + 2)
	for rows in pencil.rows():
		for i in range(1, n):
			for j in range(i):
				if rows[i][j] != 0:
					forbid[j + 1] += 1
					forbid[i + 1] -= 1

	sizes, start, running = [], 0, 0
	for c in range(1, n):
		running += forbid[c]
		if running == 0:
			sizes.append(c - start)
			start = c
	sizes.append(n - start)
	return PivotStructure(tuple(sizes))


def below_left_witness(pencil: Pencil, c: int) -> Optional[Tuple[int, int, int]]:
	"""A nonzero entry (coefficient index, row, column) below-left of cut position c, if any."""
	for index, rows in enumerate(pencil.rows()):
		for i in range(c, pencil.n):
			for j in range(c):
				if rows[i][j] != 0:
					return index, i, j
	return None


def transform(a: ALS, p: Mat, q: Mat) -> ALS:
	"""(uQ, PAQ, Pv) without admissibility or invertibility checks."""
	return ALS(linalg.matmul(a.u, q), a.pencil.transform(p, q), linalg.matmul(p, a.v))


def apply_transformation(a: ALS, t: Transformation) -> ALS:
	"""Apply an admissible transformation.

	Args:
		a: System to transform
		t: Transformation with invertible P, Q and first row of Q equal to e1

	Returns:
		The transformed system, representing the same element
	"""
	n = a.dim
	if t.p.shape != (n, n) or t.q.shape != (n, n):
		raise DimensionError(f"transformation shape {t.p.shape}/{t.q.shape} does not match dimension {n}")
	if not t.admissible:
		raise AdmissibilityError("first row of Q must be e1")
	if linalg.invert_scalar(t.p) is None or linalg.invert_scalar(t.q) is None:
		raise AdmissibilityError("transformation matrices must be invertible")
	return transform(a, t.p, t.q)


def remove_indices(a: ALS, indices: Sequence[int]) -> ALS:
	"""Drop the given rows and columns."""
	removed = set(indices)
	keep = [i for i in range(a.dim) if i not in removed]
	coeffs = tuple(linalg.extract(c, keep, keep) for c in a.coeffs)
	return ALS(linalg.extract(a.u, [0], keep), Pencil(a.alphabet, coeffs), linalg.extract(a.v, keep, [0]))


def extend(a: ALS) -> ExtendedALS:
	"""Prepend the scalar row/column 0 with row 0 of A0 equal to [1, -1, 0, ...]."""
	if a.is_empty:
		raise DimensionError("cannot extend the empty ALS")
	n = a.dim
	coeffs = []
	for index, rows in enumerate(a.pencil.rows()):
		if index == 0:
			head = [ONE, -ONE] + [ZERO] * (n - 1)
		else:
			head = [ZERO] * (n + 1)
		coeffs.append(linalg.matrix([head] + [[ZERO] + row for row in rows], (n + 1, n + 1)))
	base = ALS(
		linalg.row_matrix(linalg.unit_vector(n + 1, 0)),
		Pencil(a.alphabet, tuple(coeffs)),
		linalg.column_matrix([ZERO] + a.v_list),
	)
	return ExtendedALS(base)


def _first_row_completion(w: Sequence[Any]) -> Mat:
	"""Invertible S with first row w (w != 0): identity, row 0 = w, row j = e1 for j = first nonzero of w."""
	n = len(w)
	j = next(i for i, x in enumerate(w) if x != 0)
	rows = [linalg.unit_vector(n, i) for i in range(n)]
	rows[0] = list(w)
	if j != 0:
		rows[j] = linalg.unit_vector(n, 0)
	return linalg.matrix(rows, (n, n))


def restrict(e: ExtendedALS) -> ALS:
	"""Eliminate the extension row/column 0 by column operations.

	Args:
		e: Extended system with scalar row 0, nonzero (0, 0) entry, zero column 0 below and v[0] = 0

	Returns:
		Equivalent admissible ALS of dimension e.dim
	"""
	base = e.base
	rows = base.pencil.rows()
	n = base.dim
	if any(rows[index][0][j] != 0 for index in range(1, len(rows)) for j in range(n)):
		raise AdmissibilityError("extension row is not scalar")
	if any(c[i][0] != 0 for c in rows for i in range(1, n)):
		raise AdmissibilityError("extension column is not cleared below row 0")
	pivot = rows[0][0][0]
	if pivot == 0 or base.v_list[0] != 0:
		raise AdmissibilityError("extension row cannot be eliminated")

	w = [-x / pivot for x in rows[0][0][1:]]
	if linalg.is_zero_vector(w):
		raise AdmissibilityError("restricted system represents zero")

	rest = remove_indices(base.with_parts(u=linalg.zeros(1, n)), [0])
	q = linalg.invert_scalar(_first_row_completion(w))
	coeffs = tuple(linalg.matmul(c, q) for c in rest.coeffs)
	return ALS(linalg.row_matrix(linalg.unit_vector(n - 1, 0)), Pencil(base.alphabet, coeffs), rest.v)


def normalize_lhs(a: ALS) -> ALS:
	"""Column operations bringing a nonzero u to e1; u = 0 gives the empty ALS."""
	if a.is_empty or a.is_admissible:
		return a
	if linalg.is_zero_vector(a.u_list):
		return ALS.empty(a.alphabet)
	q = linalg.invert_scalar(_first_row_completion(a.u_list))
	return transform(a, linalg.identity(a.dim), q)


def mirror(a: ALS) -> ALS:
	"""ALS of the reversed element: (vᵀΣ, ΣAᵀΣ, Σuᵀ), renormalized to u = e1."""
	if a.is_empty:
		return a
	n = a.dim
	sigma = linalg.reversal(n)
	u_hat = list(reversed(a.v_list))
	v_hat = list(reversed(a.u_list))
	if linalg.is_zero_vector(u_hat):
		return ALS.empty(a.alphabet)
	coeffs = tuple(linalg.matmul(linalg.matmul(sigma, linalg.transpose(c)), sigma) for c in a.coeffs)
	reversed_als = ALS(linalg.row_matrix(u_hat), Pencil(a.alphabet, coeffs), linalg.column_matrix(v_hat))
	return normalize_lhs(reversed_als)


def normalize_rhs(a: ALS, prefer: Optional[Sequence[int]] = None) -> ALS:
	"""Row operations bringing v to λ·e_n (λ != 0).

	Args:
		a: System with v != 0
		prefer: Candidate rows to swap into the last position when v[n-1] = 0, lowest first

	Returns:
		Equivalent system with v = [0, ..., 0, λ]
	"""
	n = a.dim
	v = a.v_list
	if n == 0 or linalg.is_zero_vector(v):
		return a
	p_rows = [linalg.unit_vector(n, i) for i in range(n)]
	if v[n - 1] == 0:
		candidates = [i for i in (prefer or []) if v[i] != 0] or [i for i in range(n) if v[i] != 0]
		j = min(candidates)
		p_rows[j], p_rows[n - 1] = p_rows[n - 1], p_rows[j]
		v = [v[p_rows[i].index(ONE)] for i in range(n)]
	clear = [linalg.unit_vector(n, i) for i in range(n)]
	for i in range(n - 1):
		clear[i][n - 1] = -v[i] / v[n - 1]
	p = linalg.matmul(linalg.matrix(clear, (n, n)), linalg.matrix(p_rows, (n, n)))
	return transform(a, p, linalg.identity(n))


# Serialization


def serialize(a: ALS) -> str:
	"""Render an ALS in the line-oriented text format."""
	fmt = linalg.format_rat
	lines = [
		FORMAT_HEADER,
		" ".join(["letters:", *a.alphabet.letters]),
		f"dim: {a.dim}",
		" ".join(["u:"] + [fmt(x) for x in a.u_list]),
		" ".join(["v:"] + [fmt(x) for x in a.v_list]),
	]
	names = ["A0"] + [f"A[{letter}]" for letter in a.alphabet.letters]
	for name, rows in zip(names, a.pencil.rows()):
		lines.append(f"{name}:")
		lines.extend(" ".join(fmt(x) for x in row) for row in rows)
	return "\n".join(lines) + "\n"


def als_to_dict(a: ALS) -> Dict[str, Any]:
	"""JSON-ready mapping with the field names of the text format."""
	fmt = linalg.format_rat
	data: Dict[str, Any] = {
		"format": FORMAT_HEADER,
		"letters": list(a.alphabet.letters),
		"dim": a.dim,
		"u": [fmt(x) for x in a.u_list],
		"v": [fmt(x) for x in a.v_list],
	}
	names = ["A0"] + [f"A[{letter}]" for letter in a.alphabet.letters]
	for name, rows in zip(names, a.pencil.rows()):
		data[name] = [[fmt(x) for x in row] for row in rows]
	return data


class _LineReader:
	"""Cursor over non-blank, comment-stripped lines with token positions."""

	def __init__(self, text: str):
		self.lines = []
		raw_lines = text.splitlines()
		for number, line in enumerate(raw_lines, start=1):
			content = line.split("#", 1)[0]
			tokens = [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", content)]
			if tokens:
				self.lines.append((number, tokens, len(content.rstrip()) + 1))
		self.end_line = len(raw_lines) + 1
		self.position = 0

	def next(self, expected: str) -> Tuple[int, List[Tuple[str, int]], int]:
		if self.position >= len(self.lines):
			raise ParseError(f"unexpected end of input, expected {expected}", self.end_line, 1)
		line = self.lines[self.position]
		self.position += 1
		return line

	def finish(self) -> None:
		if self.position < len(self.lines):
			number, tokens, _ = self.lines[self.position]
			raise ParseError(f"unexpected content {tokens[0][0]!r}", number, tokens[0][1])


def _parse_entries(tokens: List[Tuple[str, int]], count: int, number: int, end_col: int) -> List[Any]:
	if len(tokens) < count:
		raise ParseError(f"expected {count} entries, found {len(tokens)}", number, end_col)
	if len(tokens) > count:
		raise ParseError(f"expected {count} entries, found {len(tokens)}", number, tokens[count][1])
	values = []
	for token, column in tokens:
		try:
			values.append(linalg.rat(token))
		except ValueError:
			raise ParseError(f"invalid rational {token!r}", number, column)
	return values


def _expect_key(reader: _LineReader, key: str) -> Tuple[int, List[Tuple[str, int]], int]:
	number, tokens, end_col = reader.next(f"'{key}'")
	if tokens[0][0] != key:
		raise ParseError(f"expected '{key}', found {tokens[0][0]!r}", number, tokens[0][1])
	return number, tokens[1:], end_col


def parse_als(text: str) -> ALS:
	"""Parse the text format produced by serialize.

	Args:
		text: File contents

	Returns:
		Parsed ALS (not validated for admissibility)

	Raises:
		ParseError: with line and column of the first malformed token
	"""
	reader = _LineReader(text)

	number, tokens, end_col = reader.next(f"'{FORMAT_HEADER}'")
	if [t for t, _ in tokens] != FORMAT_HEADER.split():
		raise ParseError(f"expected header '{FORMAT_HEADER}'", number, tokens[0][1])

	number, tokens, end_col = _expect_key(reader, "letters:")
	if not tokens:
		raise ParseError("expected at least one letter", number, end_col)
	letters = [t for t, _ in tokens]
	try:
		alphabet = Alphabet.of(letters)
	except DimensionError as e:
		raise ParseError(str(e), number, tokens[0][1])

	number, tokens, end_col = _expect_key(reader, "dim:")
	if len(tokens) != 1 or not tokens[0][0].isdigit():
		raise ParseError("expected a non-negative dimension", number, tokens[0][1] if tokens else end_col)
	n = int(tokens[0][0])

	number, tokens, end_col = _expect_key(reader, "u:")
	u = _parse_entries(tokens, n, number, end_col)
	number, tokens, end_col = _expect_key(reader, "v:")
	v = _parse_entries(tokens, n, number, end_col)

	coeffs = []
	for name in ["A0"] + [f"A[{letter}]" for letter in alphabet.letters]:
		number, tokens, end_col = _expect_key(reader, f"{name}:")
		if tokens:
			raise ParseError(f"unexpected content after '{name}:'", number, tokens[0][1])
		rows = []
		for _ in range(n):
			number, tokens, end_col = reader.next(f"a row of {name}")
			rows.append(_parse_entries(tokens, n, number, end_col))
		coeffs.append(rows)
	reader.finish()

	return ALS.build(alphabet, u, coeffs, v)
