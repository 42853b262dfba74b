# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

"""
Rational Operations on Admissible Linear Systems

Monomials, polynomials, scalar multiplication, addition, the generic and
typed multiplications, and the minimal inverse by element type.
"""

from dataclasses import dataclass
from typing import Any, List, Optional, Sequence, Tuple

from free_field.algebra import linalg
from free_field.algebra.als import ALS, Alphabet, Pencil, Transformation, normalize_rhs, transform
from free_field.algebra.linalg import ONE, ZERO
from free_field.algebra.minimizer import minimize
from free_field.algebra.ncpoly import NCPoly, Word, word_key
from free_field.errors import DimensionError, NormalFormError, UndefinedElementError
from free_field.logger import logger

MUL_STRATEGIES = ("auto", "generic", "type-(1,*)", "type-(*,1)")
INVERT_STRATEGIES = ("minimal", "generic")


@dataclass(frozen=True)
class ElementType:
	"""Whether 1 lies in the span of the left and right family of a minimal ALS."""

	one_in_L: bool
	one_in_R: bool

	@property
	def label(self) -> str:
		return f"({int(self.one_in_R)},{int(self.one_in_L)})"


def _assemble(alphabet: Alphabet, coeff_rows: Sequence[List[List[Any]]], v: Sequence[Any]) -> ALS:
	n = len(v)
	pencil = Pencil(alphabet, tuple(linalg.matrix(rows, (n, n)) for rows in coeff_rows))
	u = linalg.row_matrix(linalg.unit_vector(n, 0)) if n else linalg.zeros(1, 0)
	return ALS(u, pencil, linalg.column_matrix(v))


def _check_alphabets(f: ALS, g: ALS) -> None:
	if f.alphabet != g.alphabet:
		raise DimensionError("operands are over different alphabets")


def scalar_als(alphabet: Alphabet, value: Any) -> ALS:
	"""ALS ([1], [1], [c]) of a constant; the empty ALS for 0."""
	alphabet = Alphabet.of(alphabet)
	value = linalg.rat(value)
	if value == 0:
		return ALS.empty(alphabet)
	return _assemble(alphabet, [[[ONE]]] + [[[ZERO]]] * alphabet.d, [value])


def as_scalar(a: ALS) -> Optional[Any]:
	"""The constant represented by a dimension-1 system without letters, else None."""
	if a.dim != 1:
		return None
	rows = a.pencil.rows()
	if any(c[0][0] != 0 for c in rows[1:]) or rows[0][0][0] == 0:
		return None
	return a.v_list[0] / rows[0][0][0]


def monomial_als(alphabet: Alphabet, word: Sequence[int]) -> ALS:
	"""Minimal bidiagonal polynomial ALS of dimension |w| + 1."""
	alphabet = Alphabet.of(alphabet)
	n = len(word) + 1
	coeffs = [[[ONE if i == j else ZERO for j in range(n)] for i in range(n)]]
	coeffs += [[[ZERO] * n for _ in range(n)] for _ in range(alphabet.d)]
	for i, letter in enumerate(word):
		coeffs[letter + 1][i][i + 1] = -ONE
	return _assemble(alphabet, coeffs, linalg.unit_vector(n, n - 1))


def poly_trie(p: NCPoly) -> Tuple[ALS, List[Optional[Word]]]:
	"""Polynomial ALS whose indices are the prefixes of the support.

	Index i carries the left quotient π⁻¹p of its prefix π; the last index carries 1.

	Args:
		p: Polynomial

	Returns:
		(ALS, node words); the last node is None
	"""
	if p.is_zero:
		return ALS.empty(p.alphabet), []
	if p.is_constant:
		return scalar_als(p.alphabet, p.coefficient(())), [()]

	support = p.terms
	nodes: List[Word] = sorted({w[:i] for w in support for i in range(len(w))}, key=word_key)
	index = {node: i for i, node in enumerate(nodes)}
	n = len(nodes) + 1
	one = n - 1

	coeffs = [[[ONE if i == j else ZERO for j in range(n)] for i in range(n)]]
	coeffs += [[[ZERO] * n for _ in range(n)] for _ in range(p.alphabet.d)]
	for r, node in enumerate(nodes):
		if node in support:
			coeffs[0][r][one] = -support[node]
		k = len(node)
		children = {w[: k + 1] for w in support if len(w) > k and w[:k] == node}
		for child in sorted(children):
			letter_rows = coeffs[child[-1] + 1]
			if child in index:
				letter_rows[r][index[child]] = -ONE
			else:
				letter_rows[r][one] = -support[child]
	return _assemble(p.alphabet, coeffs, linalg.unit_vector(n, one)), [*nodes, None]


def poly_als(p: NCPoly) -> ALS:
	"""Polynomial (upper unitriangular) ALS with v = e_n."""
	return poly_trie(p)[0]


def scalar_mul(a: ALS, mu: Any) -> ALS:
	"""μ·(u, A, v) = (u, A, μ·v)."""
	mu = linalg.rat(mu)
	if mu == 0 or a.is_empty:
		return ALS.empty(a.alphabet)
	return a.with_parts(v=linalg.scale(a.v, mu))


def add(f: ALS, g: ALS) -> ALS:
	"""ALS of f + g of dimension n_f + n_g.

	Args:
		f: Admissible system
		g: Admissible system

	Returns:
		Block system [[A_f, -A_f·e1·e1ᵀ], [0, A_g]] with v = [v_f; v_g]
	"""
	_check_alphabets(f, g)
	if f.is_empty:
		return g
	if g.is_empty:
		return f
	nf, ng = f.dim, g.dim
	coeffs = []
	for mf, mg in zip(f.pencil.rows(), g.pencil.rows()):
		rows = [mf[i] + [-mf[i][0]] + [ZERO] * (ng - 1) for i in range(nf)]
		rows += [[ZERO] * nf + mg[i] for i in range(ng)]
		coeffs.append(rows)
	return _assemble(f.alphabet, coeffs, f.v_list + g.v_list)


def _mul_generic(f: ALS, g: ALS) -> ALS:
	nf, ng = f.dim, g.dim
	vf = f.v_list
	coeffs = []
	for index, (mf, mg) in enumerate(zip(f.pencil.rows(), g.pencil.rows())):
		rows = []
		for i in range(nf):
			coupling = [-vf[i] if index == 0 else ZERO] + [ZERO] * (ng - 1)
			rows.append(mf[i] + coupling)
		rows += [[ZERO] * nf + mg[i] for i in range(ng)]
		coeffs.append(rows)
	return _assemble(f.alphabet, coeffs, [ZERO] * nf + g.v_list)


def _mul_last_row(f: ALS, g: ALS) -> ALS:
	"""f with last row [0, ..., 0, 1] and v_f = λ_f·e_n: f's last row and column fold into g's first column."""
	nf, ng = f.dim, g.dim
	lam = f.v_list[-1]
	coeffs = []
	for mf, mg in zip(f.pencil.rows(), g.pencil.rows()):
		rows = [mf[i][: nf - 1] + [lam * mf[i][nf - 1]] + [ZERO] * (ng - 1) for i in range(nf - 1)]
		rows += [[ZERO] * (nf - 1) + mg[i] for i in range(ng)]
		coeffs.append(rows)
	return _assemble(f.alphabet, coeffs, [ZERO] * (nf - 1) + g.v_list)


def _mul_first_column(f: ALS, g: ALS) -> ALS:
	"""g with first column e1 and v_f = λ_f·e_n: g's first row folds into f's last row."""
	nf, ng = f.dim, g.dim
	lam = f.v_list[-1]
	coeffs = []
	for mf, mg in zip(f.pencil.rows(), g.pencil.rows()):
		rows = []
		for i in range(nf):
			if i == nf - 1:
				rows.append(mf[i] + [lam * x for x in mg[0][1:]])
			else:
				rows.append(mf[i] + [ZERO] * (ng - 1))
		rows += [[ZERO] * nf + mg[i][1:] for i in range(1, ng)]
		coeffs.append(rows)
	return _assemble(f.alphabet, coeffs, [ZERO] * nf + g.v_list[1:])


def _rhs_is_last(a: ALS) -> bool:
	v = a.v_list
	return bool(v) and v[-1] != 0 and linalg.is_zero_vector(v[:-1])


def in_last_row_form(a: ALS) -> bool:
	"""Last row [0, ..., 0, 1] without letters and v = λ·e_n."""
	n = a.dim
	if n < 2 or not _rhs_is_last(a):
		return False
	rows = a.pencil.rows()
	return rows[0][n - 1] == linalg.unit_vector(n, n - 1) and all(
		linalg.is_zero_vector(c[n - 1]) for c in rows[1:]
	)


def in_first_column_form(a: ALS) -> bool:
	"""First column e1 without letters and v = λ·e_n."""
	n = a.dim
	if n < 2 or not _rhs_is_last(a):
		return False
	rows = a.pencil.rows()
	return [row[0] for row in rows[0]] == linalg.unit_vector(n, 0) and all(
		row[0] == 0 for c in rows[1:] for row in c
	)


def _left_witnesses(a: ALS) -> List[List[Any]]:
	"""Row vectors p with p·A_ℓ = 0 for every letter."""
	return linalg.left_null_basis(linalg.hstack(*a.pencil.letter_coeffs))


def _right_witnesses(a: ALS) -> List[List[Any]]:
	"""Column vectors q with A_ℓ·q = 0 for every letter."""
	return linalg.null_basis(linalg.vstack(*a.pencil.letter_coeffs))


def _left_witness(a: ALS) -> Optional[Tuple[List[Any], List[Any], Any]]:
	"""(p, c = p·A0, p·v) with c != 0 and p·v != 0."""
	v = a.v_list
	for p in _left_witnesses(a):
		c = linalg.row_times(p, a.A0)
		pv = linalg.dot(p, v)
		if not linalg.is_zero_vector(c) and pv != 0:
			return p, c, pv
	return None


def _right_witness(a: ALS) -> Optional[Tuple[List[Any], List[Any]]]:
	"""(q, b = A0·q) with q[0] = 1 and b != 0."""
	for q in _right_witnesses(a):
		if q[0] == 0:
			continue
		q = [x / q[0] for x in q]
		b = linalg.times_column(a.A0, q)
		if not linalg.is_zero_vector(b):
			return q, b
	return None


def _from_columns(columns: Sequence[Sequence[Any]], n: int) -> linalg.Mat:
	return linalg.matrix([[col[i] for col in columns] for i in range(n)], (n, n))


def detect_type(a: ALS) -> ElementType:
	"""Element type of a minimal ALS by two nullspace computations.

	Args:
		a: Minimal ALS of dimension at least 1

	Returns:
		ElementType
	"""
	if a.is_empty:
		raise DimensionError("element type of the empty system")
	one_in_L = any(not linalg.is_zero_vector(linalg.row_times(p, a.A0)) for p in _left_witnesses(a))
	one_in_R = any(not linalg.is_zero_vector(linalg.times_column(a.A0, q)) for q in _right_witnesses(a))
	return ElementType(one_in_L=one_in_L, one_in_R=one_in_R)


def last_row_form(a: ALS) -> Tuple[ALS, Transformation]:
	"""Admissible transformation to last row [0, ..., 0, 1] and v = λ·e_n.

	Raises:
		NormalFormError: when 1 is not in the span of the left family
	"""
	n = a.dim
	if n < 2:
		raise NormalFormError("last row form needs dimension at least 2")
	if in_last_row_form(a):
		return a, Transformation.identity(n)
	witness = _left_witness(a)
	e1 = linalg.unit_vector(n, 0)
	if witness is None or linalg.vector_rank([e1, witness[1]], n) < 2:
		raise NormalFormError("no last row form: 1 is not in the span of the left family")
	p, c, pv = witness

	kernel = linalg.null_basis(linalg.row_matrix(p))
	P = linalg.invert_scalar(_from_columns(kernel + [[x / pv for x in a.v_list]], n))
	middle = linalg.complete_basis([e1, c], n)
	Q = linalg.invert_scalar(linalg.matrix([e1, *middle, c], (n, n)))
	return transform(a, P, Q), Transformation(P, Q)


def first_column_form(a: ALS) -> Tuple[ALS, Transformation]:
	"""Admissible transformation to first column e1 and v = e_n.

	Raises:
		NormalFormError: when 1 is not in the span of the right family
	"""
	n = a.dim
	if n < 2:
		raise NormalFormError("first column form needs dimension at least 2")
	if in_first_column_form(a):
		return a, Transformation.identity(n)
	witness = _right_witness(a)
	v = a.v_list
	if witness is None or linalg.vector_rank([witness[1], v], n) < 2:
		raise NormalFormError("no first column form: 1 is not in the span of the right family")
	q, b = witness

	P = linalg.invert_scalar(_from_columns([b, *linalg.complete_basis([b, v], n), v], n))
	Q = linalg.identity(n) if q == linalg.unit_vector(n, 0) else _from_columns(
		[q] + [linalg.unit_vector(n, i) for i in range(1, n)], n
	)
	return transform(a, P, Q), Transformation(P, Q)


def in_corner_form(a: ALS) -> bool:
	return in_first_column_form(a) and in_last_row_form(a)


def corner_form(a: ALS) -> Tuple[ALS, Transformation]:
	"""Both first column e1 and last row [0, ..., 0, 1], v = λ·e_n (type (1,1) elements)."""
	n = a.dim
	if n < 2:
		raise NormalFormError("corner form needs dimension at least 2")
	if in_corner_form(a):
		return a, Transformation.identity(n)
	left, right = _left_witness(a), _right_witness(a)
	if left is None or right is None:
		raise NormalFormError("corner form needs 1 in both family spans")
	p, c, pv = left
	q, b = right
	if linalg.dot(c, q) != 0:
		raise NormalFormError("left and right witnesses overlap")

	kernel_p = linalg.null_basis(linalg.row_matrix(p))
	columns = [b, *linalg.complete_basis([b], n, candidates=kernel_p, target=n - 1), [x / pv for x in a.v_list]]
	P = linalg.invert_scalar(_from_columns(columns, n))
	kernel_q = linalg.null_basis(linalg.row_matrix(q))
	rows = [linalg.unit_vector(n, 0), *linalg.complete_basis([c], n, candidates=kernel_q, target=n - 1), c]
	Q = linalg.invert_scalar(linalg.matrix(rows, (n, n)))
	if P is None or Q is None:
		raise NormalFormError("corner form transformation is singular")
	return transform(a, P, Q), Transformation(P, Q)


def mul(f: ALS, g: ALS, strategy: str = "auto") -> ALS:
	"""ALS of the product f·g.

	Args:
		f: Left factor
		g: Right factor
		strategy: "generic" (dim n_f + n_g), "type-(1,*)" (f in last row form),
			"type-(*,1)" (g in first column form) or "auto"

	Returns:
		ALS of f·g; typed products have dimension n_f + n_g - 1

	Raises:
		NormalFormError: when a typed strategy cannot establish its normal form
	"""
	_check_alphabets(f, g)
	if strategy not in MUL_STRATEGIES:
		raise ValueError(f"unknown multiplication strategy {strategy!r}")
	if f.is_empty or g.is_empty or linalg.is_zero_vector(f.v_list):
		return ALS.empty(f.alphabet)
	if (value := as_scalar(f)) is not None:
		return scalar_mul(g, value)
	if (value := as_scalar(g)) is not None:
		return scalar_mul(f, value)

	if strategy == "generic":
		return _mul_generic(f, g)
	if strategy == "type-(1,*)":
		return _mul_last_row(last_row_form(f)[0], g)
	if strategy == "type-(*,1)":
		return _mul_first_column(normalize_rhs(f), first_column_form(g)[0])

	# auto: fewest normal form transformations, ties to type-(*,1)
	options = []
	try:
		g_form = first_column_form(g)[0]
		cost = int(not in_first_column_form(g)) + int(not _rhs_is_last(f))
		options.append((cost, 0, lambda: _mul_first_column(normalize_rhs(f), g_form)))
	except NormalFormError:
		pass
	try:
		f_form = last_row_form(f)[0]
		options.append((int(not in_last_row_form(f)), 1, lambda: _mul_last_row(f_form, g)))
	except NormalFormError:
		pass
	if not options:
		return _mul_generic(f, g)
	return min(options, key=lambda option: option[:2])[2]()


def _inverse_generic(f: ALS) -> ALS:
	n = f.dim
	u, v = f.u_list, f.v_list
	coeffs = []
	for index, m in enumerate(f.pencil.rows()):
		rows = [[-v[i] if index == 0 else ZERO] + m[i] for i in range(n)]
		rows.append([ZERO] + (list(u) if index == 0 else [ZERO] * n))
		coeffs.append(rows)
	return _assemble(f.alphabet, coeffs, linalg.unit_vector(n + 1, n))


def _inverse_11(a: ALS) -> ALS:
	n, m = a.dim, a.dim - 2
	lam = a.v_list[-1]
	coeffs = []
	for M in a.pencil.rows():
		rows = [[-lam * M[m - i][n - 1]] + [-M[m - i][m - j] for j in range(m)] for i in range(m)]
		rows.append([-lam * M[0][n - 1]] + [-M[0][m - j] for j in range(m)])
		coeffs.append(rows)
	return _assemble(a.alphabet, coeffs, linalg.unit_vector(n - 1, n - 2))


def _inverse_10(a: ALS) -> ALS:
	n, m = a.dim, a.dim - 2
	lam = a.v_list[-1]
	coeffs = []
	for M in a.pencil.rows():
		rows = [[M[0][0], -M[n - 1][n - 1] / lam] + [-M[n - 1][m - j] / lam for j in range(m)]]
		rows += [[ZERO, -M[m - i][n - 1]] + [-M[m - i][m - j] for j in range(m)] for i in range(m)]
		rows.append([ZERO, -M[0][n - 1]] + [-M[0][m - j] for j in range(m)])
		coeffs.append(rows)
	return _assemble(a.alphabet, coeffs, linalg.unit_vector(n, n - 1))


def _inverse_01(a: ALS) -> ALS:
	n, m = a.dim, a.dim - 2
	lam = a.v_list[-1]
	coeffs = []
	for M in a.pencil.rows():
		rows = [
			[-lam * M[m - i][n - 1]] + [-M[m - i][m - j] for j in range(m)] + [-M[m - i][0]] for i in range(m)
		]
		rows.append([-lam * M[0][n - 1]] + [-M[0][m - j] for j in range(m)] + [-M[0][0]])
		rows.append([ZERO] * (n - 1) + [M[n - 1][n - 1]])
		coeffs.append(rows)
	return _assemble(a.alphabet, coeffs, linalg.unit_vector(n, n - 1))


def _inverse_00(a: ALS) -> ALS:
	n = a.dim
	u, v = a.u_list, a.v_list
	coeffs = []
	for index, M in enumerate(a.pencil.rows()):
		rows = [[v[n - 1 - i] if index == 0 else ZERO] + [-M[n - 1 - i][n - 1 - j] for j in range(n)] for i in range(n)]
		rows.append([ZERO] + [u[n - 1 - j] if index == 0 else ZERO for j in range(n)])
		coeffs.append(rows)
	return _assemble(a.alphabet, coeffs, linalg.unit_vector(n + 1, n))


def invert(f: ALS, assume_minimal: bool = False, strategy: str = "minimal") -> ALS:
	"""ALS of f⁻¹.

	Args:
		f: System of a nonzero element
		assume_minimal: Skip the minimization of f
		strategy: "minimal" (typed inverse by element type) or "generic" (dimension n + 1)

	Returns:
		ALS of the inverse; for minimal f of type (1,1), (1,0), (0,1), (0,0)
		the dimension is n - 1, n, n, n + 1 respectively
		(n for a type (1,1) element whose left and right witnesses overlap)

	Raises:
		UndefinedElementError: when f represents 0
	"""
	if strategy not in INVERT_STRATEGIES:
		raise ValueError(f"unknown inversion strategy {strategy!r}")
	if f.is_empty or linalg.is_zero_vector(f.v_list):
		raise UndefinedElementError()
	if strategy == "generic":
		return _inverse_generic(f)
	if not assume_minimal:
		f = minimize(f)[0]
		if f.is_empty:
			raise UndefinedElementError()

	if (value := as_scalar(f)) is not None:
		return scalar_als(f.alphabet, ONE / value)

	element_type = detect_type(f)
	attempts = []
	if element_type.one_in_L and element_type.one_in_R:
		attempts.append(lambda: _inverse_11(corner_form(f)[0]))
	if element_type.one_in_R:
		attempts.append(lambda: _inverse_10(first_column_form(f)[0]))
	if element_type.one_in_L:
		attempts.append(lambda: _inverse_01(last_row_form(f)[0]))
	if not attempts:
		attempts.append(lambda: _inverse_00(normalize_rhs(f)))
	# overlapping witnesses of a type (1,1) element leave only the dimension n forms
	for attempt in attempts:
		try:
			return attempt()
		except NormalFormError as e:
			logger("ratops").debug(f"Typed inverse for type {element_type.label} not applicable: {e}")
	logger("ratops").warning(f"Falling back to the generic inverse for type {element_type.label}")
	return _inverse_generic(f)


def normalize_regular(f: ALS) -> Optional[ALS]:
	"""(u, I - N, A0⁻¹v) with N = -A0⁻¹·ΣA_ℓ·x_ℓ, or None when A0 is singular."""
	inverse = linalg.invert_scalar(f.A0)
	if inverse is None:
		return None
	return transform(f, inverse, linalg.identity(f.dim))
