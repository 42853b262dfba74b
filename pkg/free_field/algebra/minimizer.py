# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

"""
Block Minimization

Left and right block minimization equations, their particular block
transformations, the minimization loop for refined systems and the linear
minimality certificate.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple, Union

from free_field.algebra import linalg
from free_field.algebra.als import (
	ALS,
	ExtendedALS,
	Pencil,
	extend,
	normalize_lhs,
	normalize_rhs,
	pivot_structure,
	remove_indices,
	restrict,
	transform,
)
from free_field.algebra.linalg import ONE, ZERO
from free_field.algebra.refiner import (
	DEFAULT_MAX_ALTERNATIONS,
	DEFAULT_PERMUTATION_SEED_LIMIT,
	RefinementReport,
	refine,
)
from free_field.errors import DimensionError, VerificationError
from free_field.logger import logger

LEFT = "L"
RIGHT = "R"
PAD = "pad"

System = Union[ALS, ExtendedALS]


@dataclass
class MinimizationSystem:
	"""Flattened scalar system of the left or right block minimization equations.

	Unknowns are numbered U first, then T, row-major. Equation rows are ordered
	constant part first, then letters in alphabet order, then (left side) the
	v-rows and finally the admissibility rows U[0][:] = 0.
	"""

	side: str
	k: int
	extended: bool
	block: List[int]
	other: List[int]
	rows: Dict[int, Dict[int, Any]]
	nrows: int
	ncols: int

	@property
	def block_size(self) -> int:
		return len(self.block)

	@property
	def other_size(self) -> int:
		return len(self.other)

	def solve(self) -> Optional[Tuple[List[List[Any]], List[List[Any]]]]:
		"""Particular solution as (T, U) row lists, or None when unsolvable."""
		solution = linalg.solve_sparse(self.rows, self.nrows, self.ncols)
		if solution is None:
			return None
		a, n = self.block_size, self.other_size
		if self.side == LEFT:
			u = [[solution[p * n + j] for j in range(n)] for p in range(a)]
			t = [[solution[a * n + i * n + q] for q in range(n)] for i in range(a)]
		else:
			u = [[solution[p * a + j] for j in range(a)] for p in range(n)]
			t = [[solution[n * a + i * a + q] for q in range(a)] for i in range(n)]
		return t, u


@dataclass
class MinimizationStep:
	side: str
	k: int
	dim_before: int
	dim_after: int
	removed: List[int]
	labels: List[Hashable]
	extended: bool = False

	def render(self) -> str:
		removed = ",".join(str(i + 1) for i in self.removed)
		return f"{self.side} k:{self.k} dim:{self.dim_before}->{self.dim_after} removed:{removed}"


@dataclass
class MinimizationTrace:
	"""Eliminations in order, padding notes and the last refinement report."""

	steps: List[MinimizationStep] = field(default_factory=list)
	notes: List[str] = field(default_factory=list)
	report: Optional[RefinementReport] = None

	@property
	def fully_refined(self) -> bool:
		return self.report is None or self.report.fully_refined

	def render(self) -> str:
		return "\n".join(step.render() for step in self.steps)


@dataclass
class Witness:
	side: str
	k: int
	extended: bool
	t: List[List[Any]]
	u: List[List[Any]]

	def render(self) -> str:
		variant = " (extended)" if self.extended else ""
		return f"{self.side} k:{self.k}{variant} is solvable"


@dataclass
class Certificate:
	minimal: bool
	witness: Optional[Witness] = None
	caveat: Optional[str] = None


def _base(a: System) -> ALS:
	return a.base if isinstance(a, ExtendedALS) else a


def _left_system(a: ALS, k: int, block: List[int], other: List[int], admissible: bool, extended: bool) -> MinimizationSystem:
	coeff_rows = a.pencil.rows()
	v = a.v_list
	size, count = len(block), len(other)
	ncols = 2 * size * count
	rows: Dict[int, Dict[int, Any]] = {}
	r = 0
	for c in coeff_rows:
		for i in range(size):
			for j in range(count):
				row = {}
				for p in range(size):
					value = c[block[i]][block[p]]
					if value:
						row[p * count + j] = value
				for q in range(count):
					value = c[other[q]][other[j]]
					if value:
						row[size * count + i * count + q] = value
				rhs = c[block[i]][other[j]]
				if rhs:
					row[ncols] = -rhs
				rows[r] = row
				r += 1
	for i in range(size):
		row = {size * count + i * count + q: v[other[q]] for q in range(count) if v[other[q]]}
		if v[block[i]]:
			row[ncols] = -v[block[i]]
		rows[r] = row
		r += 1
	if admissible and block[0] == 0:
		for j in range(count):
			rows[r] = {j: ONE}
			r += 1
	return MinimizationSystem(LEFT, k, extended, block, other, rows, r, ncols)


def build_left_equations(a: System, k: int) -> MinimizationSystem:
	"""Left block minimization equations at block k.

	A_kk·U + A_k,>k + T·A_>k,>k = 0 and v_k + T·v_>k = 0, coefficient-wise for
	the constant part and every letter. On an ExtendedALS, k counts the blocks
	of the underlying system and the admissibility rows are not needed.

	Args:
		a: ALS or extended ALS
		k: Block index, 1 <= k <= m - 1

	Returns:
		MinimizationSystem
	"""
	base = _base(a)
	extended = isinstance(a, ExtendedALS)
	blocks = pivot_structure(base).blocks
	if extended:
		blocks = blocks[1:]
	m = len(blocks)
	if not 1 <= k <= m - 1:
		raise DimensionError(f"left block index {k} out of range 1..{m - 1}")
	other = [i for block in blocks[k:] for i in block]
	return _left_system(base, k, blocks[k - 1], other, not extended, extended)


def build_right_equations(a: ALS, k: int) -> MinimizationSystem:
	"""Right block minimization equations A_<k,<k·U + A_<k,k + T·A_kk = 0 at block k (2 <= k <= m)."""
	blocks = pivot_structure(a).blocks
	m = len(blocks)
	if not 2 <= k <= m:
		raise DimensionError(f"right block index {k} out of range 2..{m}")
	block = blocks[k - 1]
	other = [i for b in blocks[: k - 1] for i in b]
	size, count = len(block), len(other)
	ncols = 2 * size * count
	rows: Dict[int, Dict[int, Any]] = {}
	r = 0
	for c in a.pencil.rows():
		for i in range(count):
			for j in range(size):
				row = {}
				for p in range(count):
					value = c[other[i]][other[p]]
					if value:
						row[p * size + j] = value
				for q in range(size):
					value = c[block[q]][block[j]]
					if value:
						row[count * size + i * size + q] = value
				rhs = c[other[i]][block[j]]
				if rhs:
					row[ncols] = -rhs
				rows[r] = row
				r += 1
	for j in range(size):
		rows[r] = {j: ONE}
		r += 1
	return MinimizationSystem(RIGHT, k, False, block, other, rows, r, ncols)


def apply_block_elimination(a: System, system: MinimizationSystem, solution: Tuple[List[List[Any]], List[List[Any]]]) -> System:
	"""Apply (P(T), Q(U)), verify the zeroed block row or column and remove it.

	Args:
		a: System the equations were built from
		system: Left or right minimization equations
		solution: (T, U) solving them

	Returns:
		Smaller system of the same kind (an ExtendedALS keeps its row/column 0)

	Raises:
		VerificationError: when the transformed pencil does not have the zero block
	"""
	base = _base(a)
	n = base.dim
	t, u = solution
	block, other = system.block, system.other
	p_rows = [linalg.unit_vector(n, i) for i in range(n)]
	q_rows = [linalg.unit_vector(n, i) for i in range(n)]
	if system.side == LEFT:
		for i, row_index in enumerate(block):
			for q, other_index in enumerate(other):
				p_rows[row_index][other_index] = t[i][q]
		for p, col_index in enumerate(block):
			for j, other_index in enumerate(other):
				q_rows[col_index][other_index] = u[p][j]
	else:
		for i, row_index in enumerate(other):
			for q, block_index in enumerate(block):
				p_rows[row_index][block_index] = t[i][q]
		for p, other_index in enumerate(other):
			for j, block_index in enumerate(block):
				q_rows[other_index][block_index] = u[p][j]
	transformed = transform(base, linalg.matrix(p_rows, (n, n)), linalg.matrix(q_rows, (n, n)))

	if system.side == LEFT:
		ok = transformed.pencil.block_is_zero(block, other) and all(transformed.v_list[i] == 0 for i in block)
	else:
		ok = transformed.pencil.block_is_zero(other, block) and all(transformed.u_list[i] == 0 for i in block)
	if not ok:
		raise VerificationError(f"{system.side} elimination at block {system.k} left a nonzero block")

	reduced = remove_indices(transformed, block)
	return ExtendedALS(reduced) if isinstance(a, ExtendedALS) else reduced


def _front_pad(a: ALS) -> ALS:
	return extend(a).base


def _back_pad(a: ALS) -> ALS:
	n = a.dim
	v = a.v_list
	coeffs = []
	for index, rows in enumerate(a.pencil.rows()):
		if index == 0:
			body = [row + [-v[i]] for i, row in enumerate(rows)] + [[ZERO] * n + [ONE]]
		else:
			body = [row + [ZERO] for row in rows] + [[ZERO] * (n + 1)]
		coeffs.append(linalg.matrix(body, (n + 1, n + 1)))
	return ALS(
		linalg.row_matrix(a.u_list + [ZERO]),
		Pencil(a.alphabet, tuple(coeffs)),
		linalg.column_matrix(linalg.unit_vector(n + 1, n)),
	)


class _Minimizer:
	"""Mutable state of one minimization run: the current system, its labels and the trace."""

	def __init__(self, a: ALS, labels: List[Hashable], max_alternations: int, permutation_seed_limit: int):
		self.a = a
		self.labels = labels
		self.max_alternations = max_alternations
		self.permutation_seed_limit = permutation_seed_limit
		self.trace = MinimizationTrace()

	@property
	def m(self) -> int:
		return pivot_structure(self.a).m

	def record(self, side: str, k: int, removed: List[int], dim_before: int, dim_after: int, extended: bool = False) -> None:
		labels = [self.labels[i] for i in removed]
		step = MinimizationStep(side, k, dim_before, dim_after, removed, labels, extended)
		self.trace.steps.append(step)
		logger("minimizer").debug(step.render())

	def clear(self) -> None:
		self.a = ALS.empty(self.a.alphabet)
		self.labels = []

	def refresh(self) -> None:
		"""Re-refine and drop trailing blocks whose part of v is zero."""
		self.a, self.trace.report = refine(self.a, self.max_alternations, self.permutation_seed_limit)
		while not self.a.is_empty:
			structure = pivot_structure(self.a)
			last = structure.blocks[-1]
			if any(self.a.v_list[i] != 0 for i in last):
				break
			if structure.m == 1:
				self.record(LEFT, 1, last, self.a.dim, 0)
				self.clear()
				break
			self.record(LEFT, structure.m, last, self.a.dim, self.a.dim - len(last))
			self.labels = [label for i, label in enumerate(self.labels) if i not in last]
			self.a = remove_indices(self.a, last)

	def pad(self) -> None:
		blocks = pivot_structure(self.a).blocks
		if len(blocks[-1]) >= 2:
			self.a = _back_pad(self.a)
			self.labels = self.labels + [PAD]
			self.trace.notes.append("pad back")
		if len(blocks[0]) >= 2:
			self.a = _front_pad(self.a)
			self.labels = [PAD] + self.labels
			self.trace.notes.append("pad front")

	def eliminate(self, system: MinimizationSystem, solution) -> None:
		before = self.a.dim
		self.a = apply_block_elimination(self.a, system, solution)
		self.record(system.side, system.k, system.block, before, before - len(system.block))
		self.labels = [label for i, label in enumerate(self.labels) if i not in system.block]

	def try_left(self, k: int) -> Optional[bool]:
		"""Left step at block k; None when unsolvable, True when the element turned out to be zero."""
		system = build_left_equations(self.a, k)
		solution = system.solve()
		if solution is None:
			return None
		if k == 1:
			self.record(LEFT, 1, list(range(self.a.dim)), self.a.dim, 0)
			self.clear()
			return True
		self.eliminate(system, solution)
		return False

	def try_extended(self) -> Optional[bool]:
		"""Left step at block 1 of the extended system, then removal of row/column 0."""
		extended = extend(self.a)
		system = build_left_equations(extended, 1)
		solution = system.solve()
		if solution is None:
			return None
		reduced = apply_block_elimination(extended, system, solution).base
		removed = [i - 1 for i in system.block]
		self.record(LEFT, 1, removed, self.a.dim, self.a.dim - len(removed), extended=True)
		self.labels = [label for i, label in enumerate(self.labels) if i not in removed]

		if linalg.is_zero_vector(linalg.row_of(reduced.A0, 0)[1:]):
			self.clear()
			return True
		self.a = restrict(ExtendedALS(reduced))
		return False

	def try_right(self, k: int) -> bool:
		system = build_right_equations(self.a, k)
		solution = system.solve()
		if solution is None:
			return False
		self.eliminate(system, solution)
		return True

	def run(self) -> None:
		self.refresh()
		if self.a.is_empty:
			return
		self.pad()

		k = 2
		while k <= self.m:
			m = self.m
			k_prime = m + 1 - k
			outcome = self.try_left(k_prime)
			if outcome is None and k_prime == 1:
				outcome = self.try_extended()
			eliminated = outcome is not None or self.try_right(k)
			if outcome is True or self.a.is_empty:
				return
			if not eliminated:
				k += 1
				continue
			if k > max(2, (m + 1) / 2):
				k -= 1
			self.refresh()
			if self.a.is_empty:
				return

		last = pivot_structure(self.a).blocks[-1]
		self.a = normalize_rhs(self.a, prefer=last)


def minimize(
	a: ALS,
	labels: Optional[Sequence[Hashable]] = None,
	max_alternations: int = DEFAULT_MAX_ALTERNATIONS,
	permutation_seed_limit: int = DEFAULT_PERMUTATION_SEED_LIMIT,
) -> Tuple[ALS, MinimizationTrace]:
	"""Minimize an ALS by refinement and linear block eliminations.

	Args:
		a: Input system; a nonzero u is first brought to e1
		labels: Provenance label per index, carried into the trace (default: 1-based index)
		max_alternations: Refiner alternations per seed
		permutation_seed_limit: Refiner permutation seed limit

	Returns:
		(empty ALS when the element is 0, else a refined ALS with v = λ·e_n; trace)
	"""
	labels = list(labels) if labels is not None else list(range(1, a.dim + 1))
	if len(labels) != a.dim:
		raise DimensionError(f"{len(labels)} labels for dimension {a.dim}")

	before = a.dim
	a = normalize_lhs(a)
	if a.is_empty or linalg.is_zero_vector(a.v_list):
		trace = MinimizationTrace()
		if before:
			trace.steps.append(MinimizationStep(LEFT, 1, before, 0, list(range(before)), labels))
		return ALS.empty(a.alphabet), trace

	state = _Minimizer(a, labels, max_alternations, permutation_seed_limit)
	state.run()
	if not state.trace.fully_refined:
		logger("minimizer").info("Refinement incomplete; minimality is not certified")
	logger("minimizer").info(f"Minimized ALS from dim {before} to dim {state.a.dim} in {len(state.trace.steps)} steps")
	return state.a, state.trace


def minimality_certificate(a: ALS) -> Certificate:
	"""Check that no left (k = 1..m-1, plain and extended at 1) or right (k = 2..m) equations are solvable.

	Meaningful for refined systems only.

	Args:
		a: Refined ALS

	Returns:
		Certificate; m = 1 is reported minimal with a caveat
	"""
	if a.is_empty:
		return Certificate(True)
	m = pivot_structure(a).m
	if m == 1:
		return Certificate(True, caveat="single pivot block: only one family is known to be independent")

	checks = [(build_left_equations, a, k, False) for k in range(1, m)]
	checks.insert(1, (build_left_equations, extend(a), 1, True))
	checks += [(build_right_equations, a, k, False) for k in range(2, m + 1)]
	for build, system_input, k, is_extended in checks:
		system = build(system_input, k)
		solution = system.solve()
		if solution is not None:
			t, u = solution
			return Certificate(False, Witness(system.side, k, is_extended, t, u))
	return Certificate(True)


def rank(a: ALS) -> int:
	"""Dimension of a minimal ALS of the element."""
	return minimize(a)[0].dim
