# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

"""
Pivot Block Refinement

Searches admissible pivot block transformations (T̄, Ū) creating a lower
left zero block inside a diagonal block. The underlying polynomial system is
attacked by alternating linear solves from permutation seeds; 2x2 blocks are
decided exactly by case analysis over the rationals.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Any, List, Optional, Sequence, Tuple

from sympy import QQ, Poly, Symbol

from free_field.algebra import linalg
from free_field.algebra.als import ALS, pivot_structure, transform
from free_field.algebra.linalg import ONE, ZERO
from free_field.errors import VerificationError
from free_field.logger import logger

CERTIFIED = "refined-certified"
HEURISTIC = "refined-heuristic"
SPLIT = "split"

DEFAULT_MAX_ALTERNATIONS = 8
DEFAULT_PERMUTATION_SEED_LIMIT = 4
SMALL_INTEGERS = (0, 1, -1, 2, -2)
# larger blocks get a bounded search: identity and reversal seeds, split sizes 1 and n-1
EXHAUSTIVE_BLOCK_LIMIT = 8
BOUNDED_ALTERNATIONS = 2

BlockRows = Tuple[Tuple[Tuple[Any, ...], ...], ...]


@dataclass(frozen=True, eq=False)
class BlockSplit:
	"""Verified split: T̄·B·Ū has a zero block on rows n_k-i.. and columns ..n_k-i."""

	t: linalg.Mat
	u: linalg.Mat
	size: int


@dataclass
class BlockStatus:
	start: int
	size: int
	status: str
	split_size: Optional[int] = None
	bounded: bool = False

	def render(self) -> str:
		span = f"{self.start + 1}..{self.start + self.size}"
		if self.status == SPLIT:
			return f"block {span} (size {self.size}): split off {self.split_size}"
		note = " (bounded search)" if self.bounded else ""
		return f"block {span} (size {self.size}): {self.status}{note}"


@dataclass
class RefinementReport:
	"""Splits performed, then the status of every final pivot block."""

	splits: List[BlockStatus] = field(default_factory=list)
	blocks: List[BlockStatus] = field(default_factory=list)

	@property
	def fully_refined(self) -> bool:
		return all(block.status == CERTIFIED for block in self.blocks)

	def render(self) -> str:
		lines = [entry.render() for entry in self.splits + self.blocks]
		lines.append(f"fully-refined: {'yes' if self.fully_refined else 'no'}")
		return "\n".join(lines)


def _block_key(pencil_rows: Sequence[List[List[Any]]], indices: Sequence[int]) -> BlockRows:
	return tuple(tuple(tuple(rows[i][j] for j in indices) for i in indices) for rows in pencil_rows)


def _y_space(block: BlockRows, xs: List[List[Any]]) -> List[List[Any]]:
	"""Rows y with y·B_ℓ·X = 0 for every coefficient."""
	n = len(block[0])
	products = [linalg.matmul(linalg.matrix(c, (n, n)), _columns(xs, n)) for c in block]
	return linalg.left_null_basis(linalg.hstack(*products))


def _x_space(block: BlockRows, ys: List[List[Any]]) -> List[List[Any]]:
	"""Columns x with Y·B_ℓ·x = 0 for every coefficient."""
	n = len(block[0])
	products = [linalg.matmul(linalg.matrix(ys, (len(ys), n)), linalg.matrix(c, (n, n))) for c in block]
	return linalg.null_basis(linalg.vstack(*products))


def _columns(vectors: Sequence[Sequence[Any]], n: int) -> linalg.Mat:
	return linalg.matrix([[vec[i] for vec in vectors] for i in range(n)], (n, len(vectors)))


def _same_span(a: List[List[Any]], b: List[List[Any]], n: int) -> bool:
	rank = linalg.vector_rank(a, n)
	return rank == linalg.vector_rank(b, n) == linalg.vector_rank(a + b, n)


def _first_row_normalized(xs: List[List[Any]], count: int) -> Optional[List[List[Any]]]:
	"""Pick count columns from span(xs) with first row e1, or None."""
	pivot_index = next((c for c, x in enumerate(xs) if x[0] != 0), None)
	if pivot_index is None:
		return None
	pivot = [entry / xs[pivot_index][0] for entry in xs[pivot_index]]
	others = [[e - x[0] * p for e, p in zip(x, pivot)] for c, x in enumerate(xs) if c != pivot_index]
	return [pivot, *others][:count]


def _finish(block: BlockRows, xs: List[List[Any]], ys: List[List[Any]], i: int, first: bool) -> Optional[BlockSplit]:
	n = len(block[0])
	s = n - i
	if len(xs) < s or len(ys) < i:
		return None
	if first:
		xs = _first_row_normalized(xs, s)
		if xs is None:
			return None
		candidates = [linalg.unit_vector(n, j) for j in range(1, n)]
	else:
		xs = xs[:s]
		candidates = None
	ys = ys[:i]
	columns = xs + linalg.complete_basis(xs, n, candidates)
	rows = linalg.complete_basis(ys, n) + ys
	if len(columns) != n or len(rows) != n:
		return None

	t = linalg.matrix(rows, (n, n))
	u = _columns(columns, n)
	if linalg.invert_scalar(t) is None or linalg.invert_scalar(u) is None:
		return None
	for c in block:
		product = linalg.to_rows(linalg.matmul(linalg.matmul(t, linalg.matrix(c, (n, n))), u))
		if any(product[r][col] != 0 for r in range(s, n) for col in range(s)):
			return None
	return BlockSplit(t, u, i)


def _seeds(n: int, permutation_seed_limit: int) -> List[Tuple[int, ...]]:
	if n <= permutation_seed_limit:
		return list(permutations(range(n)))
	identity = tuple(range(n))
	seeds = [identity, identity[::-1]]
	seeds += [identity[r:] + identity[:r] for r in range(1, n)]
	return seeds


def _alternate(
	block: BlockRows, i: int, first: bool, max_alternations: int, seeds: Sequence[Tuple[int, ...]]
) -> Optional[BlockSplit]:
	n = len(block[0])
	s = n - i
	for perm in seeds:
		# X-start: fix the leading columns of Ū, solve for the trailing rows of T̄
		xs = [linalg.unit_vector(n, perm[c]) for c in range(s)]
		for _ in range(max_alternations):
			ys = _y_space(block, xs)
			if len(ys) >= i:
				split = _finish(block, xs, ys, i, first)
				if split:
					return split
				break
			if not ys:
				break
			candidates = _x_space(block, ys)
			if len(candidates) < s or _same_span(candidates[:s], xs, n):
				break
			xs = candidates[:s]

		# Y-start: fix the trailing rows of T̄, solve for the leading columns of Ū
		ys = [linalg.unit_vector(n, perm[s + r]) for r in range(i)]
		for _ in range(max_alternations):
			xs = _x_space(block, ys)
			if len(xs) >= s:
				split = _finish(block, xs, ys, i, first)
				if split:
					return split
				break
			if not xs:
				break
			candidates = _y_space(block, xs)
			if len(candidates) < i or _same_span(candidates[:i], ys, n):
				break
			ys = candidates[:i]
	return None


def _rational_roots(coeffs: Sequence[Any]) -> List[Any]:
	"""Rational roots of a polynomial given by coefficients, highest degree first."""
	coeffs = list(coeffs)
	while coeffs and coeffs[0] == 0:
		coeffs.pop(0)
	if len(coeffs) < 2:
		return []
	roots = Poly(coeffs, Symbol("w"), domain=QQ).ground_roots()
	return [QQ.from_sympy(root) for root in roots]


def _poly_mul(a: Sequence[Any], b: Sequence[Any]) -> List[Any]:
	"""Product of coefficient lists, lowest degree first."""
	result = [ZERO] * (len(a) + len(b) - 1)
	for i, x in enumerate(a):
		for j, y in enumerate(b):
			result[i + j] += x * y
	return result


def _poly_sub(a: Sequence[Any], b: Sequence[Any]) -> List[Any]:
	length = max(len(a), len(b))
	a = list(a) + [ZERO] * (length - len(a))
	b = list(b) + [ZERO] * (length - len(b))
	return [x - y for x, y in zip(a, b)]


def _exact_2x2(block: BlockRows, first: bool) -> Optional[BlockSplit]:
	"""Decide the 2x2 split problem y·B_ℓ·x = 0 over the rationals by exhausting the normalizations of y and x."""
	candidates: List[Tuple[List[Any], List[Any]]] = []

	# y = (0, 1): the second rows must share a null vector
	xs = linalg.null_basis(linalg.matrix([list(c[1]) for c in block], (len(block), 2)))
	if xs:
		candidates.append((xs, [[ZERO, ONE]]))

	# y = (1, w), x = (0, 1): B01 + w·B11 = 0
	if not first:
		ws = set()
		for c in block:
			if c[1][1] != 0:
				ws.add(-c[0][1] / c[1][1])
				break
		else:
			ws.add(ZERO)
		for w in ws:
			if all(c[0][1] + w * c[1][1] == 0 for c in block):
				candidates.append(([[ZERO, ONE]], [[ONE, w]]))

	# y = (1, w), x = (1, t): t·P_ℓ(w) = R_ℓ(w) with P_ℓ = B01 + w·B11, R_ℓ = -(B00 + w·B10)
	p_polys = [[c[0][1], c[1][1]] for c in block]
	r_polys = [[-c[0][0], -c[1][0]] for c in block]
	ws = set(QQ(k) for k in SMALL_INTEGERS)
	for poly in p_polys + r_polys:
		ws.update(_rational_roots(poly[::-1]))
	for a in range(len(block)):
		for b in range(a + 1, len(block)):
			cross = _poly_sub(_poly_mul(r_polys[a], p_polys[b]), _poly_mul(r_polys[b], p_polys[a]))
			ws.update(_rational_roots(cross[::-1]))
	for w in sorted(ws):
		p_values = [p[0] + w * p[1] for p in p_polys]
		r_values = [r[0] + w * r[1] for r in r_polys]
		j = next((index for index, value in enumerate(p_values) if value != 0), None)
		t = ZERO if j is None else r_values[j] / p_values[j]
		if all(t * p == r for p, r in zip(p_values, r_values)):
			candidates.append(([[ONE, t]], [[ONE, w]]))

	for xs, ys in candidates:
		split = _finish(block, xs, ys, 1, first)
		if split:
			return split
	return None


def splits_over_extension(block: Sequence[Sequence[Sequence[Any]]]) -> bool:
	"""Whether a 2x2 block without rational split admits one with irrational y = (1, w), x = (1, t).

	Such a w is a common root of all cross terms R_a·P_b - R_b·P_a that is not rational.
	"""
	p_polys = [[linalg.rat(c[0][1]), linalg.rat(c[1][1])] for c in block]
	r_polys = [[-linalg.rat(c[0][0]), -linalg.rat(c[1][0])] for c in block]
	w = Symbol("w")
	common = None
	for a in range(len(block)):
		for b in range(a + 1, len(block)):
			cross = _poly_sub(_poly_mul(r_polys[a], p_polys[b]), _poly_mul(r_polys[b], p_polys[a]))
			if linalg.is_zero_vector(cross):
				continue
			poly = Poly(cross[::-1], w, domain=QQ)
			common = poly if common is None else common.gcd(poly)
	if common is None or common.degree() < 2:
		return False
	rational = sum(common.ground_roots().values())
	return common.degree() > rational


def is_bounded(size: int) -> bool:
	"""Whether blocks of this size only get the bounded split search."""
	return size > EXHAUSTIVE_BLOCK_LIMIT


@lru_cache(maxsize=4096)
def _cached_search(block: BlockRows, first: bool, max_alternations: int, permutation_seed_limit: int) -> Optional[BlockSplit]:
	n = len(block[0])
	seeds = _seeds(n, permutation_seed_limit)
	sizes: Sequence[int] = range(1, n)
	if is_bounded(n):
		seeds = seeds[:2]
		sizes = sorted({1, n - 1})
		max_alternations = min(max_alternations, BOUNDED_ALTERNATIONS)
	for i in sizes:
		split = _alternate(block, i, first, max_alternations, seeds)
		if split is None and n == 2:
			split = _exact_2x2(block, first)
		if split:
			return split
	return None


def search_block_split(
	block: Sequence[Sequence[Sequence[Any]]],
	first_block: bool = False,
	max_alternations: int = DEFAULT_MAX_ALTERNATIONS,
	permutation_seed_limit: int = DEFAULT_PERMUTATION_SEED_LIMIT,
) -> Optional[BlockSplit]:
	"""Bounded search for a split of one pivot block.

	Blocks larger than EXHAUSTIVE_BLOCK_LIMIT are only tried with the identity and
	reversal seeds, split sizes 1 and n - 1, and at most BOUNDED_ALTERNATIONS passes.

	Args:
		block: Row lists of the d+1 coefficient blocks (size n_k >= 2)
		first_block: Block 1 of an admissible system; Ū must keep first row e1
		max_alternations: Alternating linear passes per seed
		permutation_seed_limit: Blocks up to this size are seeded with all permutations

	Returns:
		Smallest-size verified split, or None when the search finds nothing
	"""
	n = len(block[0])
	if n < 2:
		raise ValueError("a split needs a block of size at least 2")
	key = tuple(tuple(tuple(linalg.rat(x) for x in row) for row in c) for c in block)
	return _cached_search(key, first_block, max_alternations, permutation_seed_limit)


def apply_block_split(a: ALS, start: int, split: BlockSplit) -> ALS:
	"""Apply a block split at rows/columns start.. and verify the created zero block."""
	n = a.dim
	size = split.t.shape[0]
	p_rows = [linalg.unit_vector(n, i) for i in range(n)]
	q_rows = [linalg.unit_vector(n, i) for i in range(n)]
	t_rows, u_rows = linalg.to_rows(split.t), linalg.to_rows(split.u)
	for r in range(size):
		for c in range(size):
			p_rows[start + r][start + c] = t_rows[r][c]
			q_rows[start + r][start + c] = u_rows[r][c]
	result = transform(a, linalg.matrix(p_rows, (n, n)), linalg.matrix(q_rows, (n, n)))

	s = size - split.size
	zero_rows = range(start + s, start + size)
	zero_cols = range(start, start + s)
	if not result.pencil.block_is_zero(zero_rows, zero_cols):
		raise VerificationError(f"block split at {start + 1} did not produce a zero block")
	return result


def refine(
	a: ALS,
	max_alternations: int = DEFAULT_MAX_ALTERNATIONS,
	permutation_seed_limit: int = DEFAULT_PERMUTATION_SEED_LIMIT,
) -> Tuple[ALS, RefinementReport]:
	"""Split pivot blocks until the search finds nothing.

	Args:
		a: Admissible system
		max_alternations: Alternating linear passes per seed
		permutation_seed_limit: Blocks up to this size are seeded with all permutations

	Returns:
		(refined system, report)
	"""
	report = RefinementReport()
	if a.is_empty:
		return a, report

	searched = set()
	while True:
		structure = pivot_structure(a)
		rows = a.pencil.rows()
		changed = False
		for k, block in enumerate(structure.blocks, start=1):
			if len(block) < 2:
				continue
			key = (_block_key(rows, block), k == 1)
			if key in searched:
				continue
			split = search_block_split(
				[[[rows_c[i][j] for j in block] for i in block] for rows_c in rows],
				first_block=k == 1,
				max_alternations=max_alternations,
				permutation_seed_limit=permutation_seed_limit,
			)
			if split is None:
				searched.add(key)
				continue
			a = apply_block_split(a, block[0], split)
			report.splits.append(BlockStatus(block[0], len(block), SPLIT, split.size))
			logger("refiner").debug(f"Split block at {block[0] + 1} of size {len(block)} off {split.size}")
			changed = True
			break
		if not changed:
			break

	rows = a.pencil.rows()
	for block in pivot_structure(a).blocks:
		if len(block) == 1:
			status = CERTIFIED
		elif len(block) == 2:
			sub = [[[c[i][j] for j in block] for i in block] for c in rows]
			status = HEURISTIC if splits_over_extension(sub) else CERTIFIED
		else:
			status = HEURISTIC
		report.blocks.append(BlockStatus(block[0], len(block), status, bounded=is_bounded(len(block))))
	return a, report
