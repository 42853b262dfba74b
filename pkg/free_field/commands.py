# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

"""
Command line interface (`ff`)
"""

import json
import os
import random
import sys
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import click

from free_field.algebra.als import ALS, Alphabet, als_to_dict, parse_als, serialize, validate
from free_field.algebra.linalg import format_rat, to_rows
from free_field.algebra.minimizer import minimize
from free_field.algebra.oracle import eval_matrices, random_assignment, series_coeffs
from free_field.applications import check_identity, eq, identity_exit_code, lgcd, rgcd
from free_field.config import FreeFieldSettings, get_settings
from free_field.errors import EXIT_DOMAIN_ERROR, AdmissibilityError, ConstantInputError, handle_cli_errors
from free_field.expr import Compiler, parse_expr, to_ncpoly
from free_field.logger import logger, setup_logging


@dataclass
class CliContext:
	settings: FreeFieldSettings

	@property
	def alphabet(self) -> Alphabet:
		return Alphabet.of(self.settings.letter_list)

	@property
	def json_output(self) -> bool:
		return self.settings.output_format == "json"

	@property
	def compiler(self) -> Compiler:
		return Compiler(
			self.alphabet,
			lazy=bool(self.settings.lazy),
			max_alternations=self.settings.max_alternations,
			permutation_seed_limit=self.settings.permutation_seed_limit,
		)

	def compile(self, text: str) -> ALS:
		return self.compiler.compile(parse_expr(text, self.alphabet))

	def minimize(self, a: ALS, labels=None):
		return minimize(
			a,
			labels,
			max_alternations=self.settings.max_alternations,
			permutation_seed_limit=self.settings.permutation_seed_limit,
		)

	def prob_options(self) -> Dict[str, Any]:
		return {
			"trials": self.settings.trials,
			"sizes": self.settings.size_list,
			"seed": self.settings.seed,
			"bound": self.settings.entry_bound,
		}

	def emit(self, text: str, data: Dict[str, Any]) -> None:
		if self.json_output:
			click.echo(json.dumps(data, indent=2))
		else:
			click.echo(text)


@click.group()
@click.option("--letters", default=None, help="Comma separated alphabet (default x,y,z)")
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default=None, help="Output format")
@click.option("--paranoid", is_flag=True, default=False, help="Cross-check decisions with the randomized oracle")
@click.option("--lazy", is_flag=True, default=False, help="Minimize only at the root of an expression")
@click.option("--seed", type=int, default=None, help="Seed of the randomized oracle")
@click.option("--settings", "settings_path", type=click.Path(dir_okay=False), default=None, help="Settings JSON file")
@click.option("--verbose", is_flag=True, help="Log details to stderr")
@click.pass_context
@handle_cli_errors
def cli(ctx, letters, output_format, paranoid, lazy, seed, settings_path, verbose):
	"""Exact arithmetic in the free field via minimal linear systems."""
	setup_logging(verbose)
	settings = get_settings(
		settings_path,
		letters=letters,
		output_format=output_format,
		paranoid=int(paranoid) if paranoid else None,
		lazy=int(lazy) if lazy else None,
		seed=seed,
	)
	ctx.obj = CliContext(settings)


@cli.command("parse")
@click.argument("expression")
@click.pass_obj
@handle_cli_errors
def parse_command(obj: CliContext, expression: str):
	"""Print the ALS of an expression."""
	a = obj.compile(expression)
	obj.emit(serialize(a).rstrip("\n"), als_to_dict(a))


def _load_source(obj: CliContext, source: str) -> ALS:
	if os.path.isfile(source):
		with open(source, encoding="utf-8") as f:
			a = parse_als(f.read())
		if a.alphabet != obj.alphabet:
			logger("commands").info(f"Using the letters of {source}: {','.join(a.alphabet.letters)}")
		diagnostics = validate(a)
		if diagnostics.problems:
			raise AdmissibilityError("; ".join(diagnostics.problems))
		return a
	return obj.compiler.construct(parse_expr(source, obj.alphabet))


@cli.command("min")
@click.argument("source")
@click.option("--trace", is_flag=True, help="Print the elimination steps")
@click.option("--refine-report", is_flag=True, help="Print the pivot block refinement report")
@click.pass_obj
@handle_cli_errors
def min_command(obj: CliContext, source: str, trace: bool, refine_report: bool):
	"""Minimize the ALS of an expression or an ALS file."""
	a = _load_source(obj, source)
	minimal, steps = obj.minimize(a)
	lines = [serialize(minimal).rstrip("\n")]
	data: Dict[str, Any] = {"als": als_to_dict(minimal)}
	if trace:
		lines += [step.render() for step in steps.steps]
		data["trace"] = [step.render() for step in steps.steps]
	if refine_report and steps.report is not None:
		lines.append(steps.report.render())
		data["refinement"] = steps.report.render().splitlines()
	obj.emit("\n".join(lines), data)


@cli.command("rank")
@click.argument("expression")
@click.pass_obj
@handle_cli_errors
def rank_command(obj: CliContext, expression: str):
	"""Print the rank (minimal dimension) of an element."""
	value = obj.compile(expression).dim
	obj.emit(str(value), {"rank": value})


@cli.command("eq")
@click.argument("left")
@click.argument("right")
@click.pass_context
@handle_cli_errors
def eq_command(ctx, left: str, right: str):
	"""Decide whether two expressions denote the same element (exit 1 when distinct)."""
	obj: CliContext = ctx.obj
	result = eq(obj.compile(left), obj.compile(right), paranoid=bool(obj.settings.paranoid), **obj.prob_options())
	if result.equal:
		text = f"equal (rank {result.rank_left})"
	else:
		text = f"distinct (ranks {result.rank_left}, {result.rank_right})"
	data = {"equal": result.equal, "rank_left": result.rank_left, "rank_right": result.rank_right}
	if result.cross_check:
		data["cross_check"] = result.cross_check
	obj.emit(text, data)
	if not result.equal:
		ctx.exit(EXIT_DOMAIN_ERROR)


def _polynomials(obj: CliContext, texts: Sequence[str]) -> List:
	polys = []
	for text in texts:
		poly = to_ncpoly(parse_expr(text, obj.alphabet), obj.alphabet)
		if poly is None:
			raise ConstantInputError(f"not a polynomial: {text}")
		polys.append(poly)
	return polys


def _emit_gcd(obj: CliContext, result) -> None:
	data = {
		"gcd": result.gcd.render(),
		"factors": [factor.render() for factor in result.factors],
		"verified": result.verified,
		"example_grade": result.example_grade,
		"quotient_dim": result.quotient_dim,
	}
	if result.example_grade:
		logger("commands").warning("gcd captured outside balanced elimination groups; verified by division only")
	obj.emit(result.gcd.render(), data)


@cli.command("lgcd")
@click.argument("p")
@click.argument("q")
@click.pass_obj
@handle_cli_errors
def lgcd_command(obj: CliContext, p: str, q: str):
	"""Greatest common left divisor of two polynomials."""
	_emit_gcd(obj, lgcd(*_polynomials(obj, (p, q))))


@cli.command("rgcd")
@click.argument("p")
@click.argument("q")
@click.pass_obj
@handle_cli_errors
def rgcd_command(obj: CliContext, p: str, q: str):
	"""Greatest common right divisor of two polynomials."""
	_emit_gcd(obj, rgcd(*_polynomials(obj, (p, q))))


@cli.command("series")
@click.argument("expression")
@click.option("--max-len", type=click.IntRange(min=0), default=None, help="Longest word length")
@click.pass_obj
@handle_cli_errors
def series_command(obj: CliContext, expression: str, max_len: Optional[int]):
	"""Print the nonzero power series coefficients of a regular element."""
	length = obj.settings.series_max_len if max_len is None else max_len
	table = series_coeffs(obj.compile(expression), length)
	obj.emit(table.render(), {"max_len": length, "coefficients": table.as_dict()})


@cli.command("eval")
@click.argument("expression")
@click.option("--size", type=click.IntRange(min=1), default=2, help="Matrix size")
@click.option("--trials", type=click.IntRange(min=1), default=1, help="Number of random points")
@click.option("--seed", type=int, default=None, help="Seed (default: the global seed)")
@click.pass_obj
@handle_cli_errors
def eval_command(obj: CliContext, expression: str, size: int, trials: int, seed: Optional[int]):
	"""Evaluate an expression at seeded random rational matrices."""
	a = obj.compile(expression)
	rng = random.Random(obj.settings.seed if seed is None else seed)
	lines, data = [], []
	for trial in range(1, trials + 1):
		assignment = random_assignment(a.alphabet, size, rng, obj.settings.entry_bound)
		value = eval_matrices(a, assignment)
		rows = None if value is None else [[format_rat(x) for x in row] for row in to_rows(value)]
		data.append({"trial": trial, "assignment": assignment.render(), "value": rows})
		lines.append(f"trial {trial}: {assignment.render()}")
		lines.append("  undefined" if rows is None else "  " + "; ".join(" ".join(row) for row in rows))
	obj.emit("\n".join(lines), {"trials": data})


@cli.command("check")
@click.argument("identities", type=click.File("r"))
@click.pass_context
@handle_cli_errors
def check_command(ctx, identities):
	"""Check an `lhs == rhs` identity per line (exit 1 unless all hold)."""
	obj: CliContext = ctx.obj
	results = check_identity(
		identities.read(),
		obj.alphabet,
		paranoid=bool(obj.settings.paranoid),
		lazy=bool(obj.settings.lazy),
		prob_options=obj.prob_options(),
	)
	data = [
		{"line": r.line, "verdict": r.verdict, "rank_left": r.rank_left, "rank_right": r.rank_right, "message": r.message}
		for r in results
	]
	obj.emit("\n".join(r.render() for r in results), {"results": data})
	code = identity_exit_code(results)
	if code:
		ctx.exit(code)


def run(argv: Optional[Sequence[str]] = None) -> int:
	"""Run the CLI and return the exit code instead of exiting."""
	try:
		code = cli.main(args=list(argv) if argv is not None else None, prog_name="ff", standalone_mode=False)
	except click.exceptions.Exit as e:
		return e.exit_code
	except click.ClickException as e:
		e.show()
		return e.exit_code
	except click.Abort:
		click.echo("Aborted!", err=True)
		return 1
	return code if isinstance(code, int) else 0


def main() -> None:
	sys.exit(run())
