# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

"""
Exact Dense Linear Algebra over the Rationals

Matrices are dense sympy DomainMatrix objects over QQ. Structural helpers
(stacking, slicing, transposition) work on row lists so that zero-sized
shapes behave uniformly; elimination and inversion use DomainMatrix.
"""

from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from free_field.errors import DimensionError

Mat = DomainMatrix
Vector = List[Any]

ZERO = QQ.zero
ONE = QQ.one


def rat(value: Any) -> Any:
	"""Coerce an int, Fraction, "p/q" string or domain element to an exact rational.

	Args:
		value: Value to convert

	Returns:
		QQ domain element in lowest terms
	"""
	if QQ.of_type(value):
		return value
	if isinstance(value, str):
		try:
			value = Fraction(value.strip())
		except (ValueError, ZeroDivisionError):
			raise ValueError(f"not a rational number: {value!r}")
	if isinstance(value, Fraction):
		return QQ(value.numerator, value.denominator)
	if isinstance(value, int):
		return QQ(value)
	return QQ.convert(value)


def format_rat(value: Any) -> str:
	"""Render a rational as p/q, or p when the denominator is 1."""
	value = rat(value)
	numerator, denominator = int(QQ.numer(value)), int(QQ.denom(value))
	if denominator == 1:
		return str(numerator)
	return f"{numerator}/{denominator}"


def matrix(rows: Sequence[Sequence[Any]], shape: Optional[Tuple[int, int]] = None) -> Mat:
	"""Build a dense rational matrix from row lists."""
	rows = [[rat(x) for x in row] for row in rows]
	if shape is None:
		shape = (len(rows), len(rows[0]) if rows else 0)
	if len(rows) != shape[0] or any(len(row) != shape[1] for row in rows):
		raise DimensionError(f"rows do not match shape {shape}")
	return DomainMatrix(rows, shape, QQ)


def zeros(nrows: int, ncols: int) -> Mat:
	return DomainMatrix([[ZERO] * ncols for _ in range(nrows)], (nrows, ncols), QQ)


def identity(n: int) -> Mat:
	return DomainMatrix([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], (n, n), QQ)


def reversal(n: int) -> Mat:
	"""The permutation matrix that reverses the order of rows/columns."""
	return DomainMatrix([[ONE if i + j == n - 1 else ZERO for j in range(n)] for i in range(n)], (n, n), QQ)


def unit_vector(n: int, i: int) -> Vector:
	vector = [ZERO] * n
	vector[i] = ONE
	return vector


def row_matrix(vector: Sequence[Any]) -> Mat:
	return matrix([list(vector)], (1, len(vector)))


def column_matrix(vector: Sequence[Any]) -> Mat:
	return matrix([[x] for x in vector], (len(vector), 1))


def to_rows(m: Mat) -> List[List[Any]]:
	nrows, ncols = m.shape
	if nrows == 0:
		return []
	if ncols == 0:
		return [[] for _ in range(nrows)]
	return [list(row) for row in m.to_list()]


def entry(m: Mat, i: int, j: int) -> Any:
	return m[i, j].element


def row_of(m: Mat, i: int) -> Vector:
	return to_rows(m)[i]


def column_of(m: Mat, j: int) -> Vector:
	return [row[j] for row in to_rows(m)]


def is_zero(m: Mat) -> bool:
	return all(x == 0 for row in to_rows(m) for x in row)


def is_zero_vector(vector: Sequence[Any]) -> bool:
	return all(x == 0 for x in vector)


def transpose(m: Mat) -> Mat:
	nrows, ncols = m.shape
	rows = to_rows(m)
	return matrix([[rows[i][j] for i in range(nrows)] for j in range(ncols)], (ncols, nrows))


def extract(m: Mat, rows: Sequence[int], cols: Sequence[int]) -> Mat:
	"""Submatrix on the given row and column index lists."""
	source = to_rows(m)
	return matrix([[source[i][j] for j in cols] for i in rows], (len(rows), len(cols)))


def hstack(*blocks: Mat) -> Mat:
	nrows = blocks[0].shape[0]
	if any(b.shape[0] != nrows for b in blocks):
		raise DimensionError("hstack: row counts differ")
	parts = [to_rows(b) for b in blocks]
	rows = [[x for part in parts for x in part[i]] for i in range(nrows)]
	return matrix(rows, (nrows, sum(b.shape[1] for b in blocks)))


def vstack(*blocks: Mat) -> Mat:
	ncols = blocks[0].shape[1]
	if any(b.shape[1] != ncols for b in blocks):
		raise DimensionError("vstack: column counts differ")
	rows = [row for b in blocks for row in to_rows(b)]
	return matrix(rows, (len(rows), ncols))


def matmul(a: Mat, b: Mat) -> Mat:
	if a.shape[1] != b.shape[0]:
		raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
	if 0 in a.shape or 0 in b.shape:
		return zeros(a.shape[0], b.shape[1])
	return a.matmul(b)


def add(a: Mat, b: Mat) -> Mat:
	if a.shape != b.shape:
		raise DimensionError(f"cannot add {a.shape} and {b.shape}")
	if 0 in a.shape:
		return a
	return a + b


def scale(m: Mat, factor: Any) -> Mat:
	factor = rat(factor)
	return matrix([[factor * x for x in row] for row in to_rows(m)], m.shape)


def rref(m: Mat) -> Tuple[Mat, int, List[int]]:
	"""Reduced row echelon form.

	Args:
		m: Matrix to reduce

	Returns:
		Tuple (reduced matrix, rank, pivot column indices)
	"""
	nrows, ncols = m.shape
	if nrows == 0 or ncols == 0:
		return m, 0, []
	reduced, pivots = m.rref()
	return reduced, len(pivots), list(pivots)


def rank_of(m: Mat) -> int:
	return rref(m)[1]


def _kernel_from_rref(rows: List[List[Any]], pivots: List[int], ncols: int) -> List[Vector]:
	pivot_set = set(pivots)
	basis = []
	for free in range(ncols):
		if free in pivot_set:
			continue
		vector = unit_vector(ncols, free)
		for r, p in enumerate(pivots):
			vector[p] = -rows[r][free]
		basis.append(vector)
	return basis


def solve(m: Mat, rhs: Mat) -> Optional[Tuple[Mat, List[Mat]]]:
	"""Solve m·x = rhs exactly.

	Free variables of the particular solution are set to zero.

	Args:
		m: Coefficient matrix
		rhs: Right-hand side with m.rows rows

	Returns:
		(particular solution, nullspace basis as column matrices), or None when inconsistent
	"""
	nrows, ncols = m.shape
	if rhs.shape[0] != nrows:
		raise DimensionError(f"right-hand side has {rhs.shape[0]} rows, expected {nrows}")
	width = rhs.shape[1]
	reduced, _, pivots = rref(hstack(m, rhs))
	if any(p >= ncols for p in pivots):
		return None

	rows = to_rows(reduced)
	particular = [[ZERO] * width for _ in range(ncols)]
	for r, p in enumerate(pivots):
		for j in range(width):
			particular[p][j] = rows[r][ncols + j]
	basis = [column_matrix(vector) for vector in _kernel_from_rref(rows, pivots, ncols)]
	return matrix(particular, (ncols, width)), basis


def null_basis(m: Mat) -> List[Vector]:
	"""Basis of {x : m·x = 0} as flat vectors."""
	ncols = m.shape[1]
	if ncols == 0:
		return []
	reduced, _, pivots = rref(m)
	return _kernel_from_rref(to_rows(reduced), pivots, ncols)


def left_null_basis(m: Mat) -> List[Vector]:
	"""Basis of {y : y·m = 0} as flat vectors."""
	return null_basis(transpose(m))


def invert_scalar(m: Mat) -> Optional[Mat]:
	"""Exact inverse of a square matrix, or None when it is singular."""
	nrows, ncols = m.shape
	if nrows != ncols:
		raise DimensionError(f"cannot invert a {nrows}x{ncols} matrix")
	if nrows == 0:
		return m
	try:
		return m.inv()
	except DMNonInvertibleMatrixError:
		return None


def vector_rank(vectors: Sequence[Sequence[Any]], n: int) -> int:
	if not vectors:
		return 0
	return rank_of(matrix([list(v) for v in vectors], (len(vectors), n)))


def complete_basis(
	vectors: Sequence[Sequence[Any]],
	n: int,
	candidates: Optional[Sequence[Sequence[Any]]] = None,
	target: Optional[int] = None,
) -> List[Vector]:
	"""Greedily pick candidates (default: unit vectors) extending vectors to a basis.

	Args:
		vectors: Linearly independent starting vectors of length n
		n: Length of the vectors
		candidates: Vectors to choose from, in priority order
		target: Rank to reach, default n

	Returns:
		The chosen candidates (not including the starting vectors)
	"""
	if candidates is None:
		candidates = [unit_vector(n, i) for i in range(n)]
	target = n if target is None else target
	chosen: List[Vector] = []
	current = [list(v) for v in vectors]
	rank = vector_rank(current, n) if current else 0
	for candidate in candidates:
		if rank >= target:
			break
		trial = current + [list(candidate)]
		trial_rank = vector_rank(trial, n)
		if trial_rank > rank:
			current = trial
			rank = trial_rank
			chosen.append(list(candidate))
	return chosen


def dot(a: Sequence[Any], b: Sequence[Any]) -> Any:
	total = ZERO
	for x, y in zip(a, b):
		if x and y:
			total += x * y
	return total


def row_times(vector: Sequence[Any], m: Mat) -> Vector:
	"""Row vector times matrix."""
	rows = to_rows(m)
	return [dot(vector, [row[j] for row in rows]) for j in range(m.shape[1])]


def times_column(m: Mat, vector: Sequence[Any]) -> Vector:
	"""Matrix times column vector."""
	return [dot(row, vector) for row in to_rows(m)]


def _coerce_dod(rows: Dict[int, Dict[int, Any]]) -> Dict[int, Dict[int, Any]]:
	return {i: {j: rat(x) for j, x in row.items() if x} for i, row in rows.items() if row}


def solve_sparse(rows: Dict[int, Dict[int, Any]], nrows: int, ncols: int) -> Optional[Vector]:
	"""Particular solution of a sparse system; the right-hand side is stored in column ncols.

	Args:
		rows: Nonzero entries as {row: {column: value}}
		nrows: Number of equations
		ncols: Number of unknowns

	Returns:
		Solution with free variables set to zero, or None when inconsistent
	"""
	system = DomainMatrix.from_dod(_coerce_dod(rows), (nrows, ncols + 1), QQ)
	reduced, _, pivots = rref(system)
	if pivots and pivots[-1] == ncols:
		return None
	entries = reduced.to_dod()
	solution = [ZERO] * ncols
	for r, p in enumerate(pivots):
		solution[p] = entries.get(r, {}).get(ncols, ZERO)
	return solution


def rank_sparse(rows: Dict[int, Dict[int, Any]], nrows: int, ncols: int) -> int:
	"""Rank of a sparse matrix given as {row: {column: value}}."""
	system = DomainMatrix.from_dod(_coerce_dod(rows), (nrows, ncols), QQ)
	return rref(system)[1]
