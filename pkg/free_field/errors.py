# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

"""
Exception hierarchy and CLI error mapping
"""

from functools import wraps
from typing import Optional

import click

from free_field.logger import log_error


class FreeFieldError(Exception):
	"""Base exception for free field computations."""
	pass


class ParseError(FreeFieldError):
	"""Malformed ALS file or expression text."""

	def __init__(self, message: str, line: int = 1, column: int = 1):
		self.message = message
		self.line = line
		self.column = column
		super().__init__(f"line {line}, column {column}: {message}")


class SettingsError(FreeFieldError):
	"""Invalid configuration value."""
	pass


class DimensionError(FreeFieldError):
	"""Shape mismatch or out-of-range block index."""
	pass


class AdmissibilityError(FreeFieldError):
	"""Operation would violate admissibility of a linear system."""
	pass


class NormalFormError(AdmissibilityError):
	"""A typed normal form cannot be established."""
	pass


class UndefinedElementError(FreeFieldError):
	"""Inversion of the zero element."""

	def __init__(self, message: str = "division by zero element", subexpression: Optional[str] = None):
		self.subexpression = subexpression
		if subexpression:
			message = f"{message}: {subexpression}"
		super().__init__(message)


class NotRegularError(FreeFieldError):
	"""Series expansion requested for a system with singular constant part."""
	pass


class VerificationError(FreeFieldError):
	"""Exact post-verification of a computed transformation failed."""
	pass


class ConstantInputError(FreeFieldError):
	"""Operation requires nonconstant polynomials."""
	pass


EXIT_DOMAIN_ERROR = 1
EXIT_USAGE_ERROR = 2
EXIT_UNDEFINED = 3


def handle_cli_errors(func):
	"""Decorator mapping free field errors to CLI exit codes."""
	@wraps(func)
	def wrapper(*args, **kwargs):
		try:
			return func(*args, **kwargs)
		except (ParseError, SettingsError, ConstantInputError) as e:
			click.echo(f"error: {e}", err=True)
			raise click.exceptions.Exit(EXIT_USAGE_ERROR)
		except UndefinedElementError as e:
			click.echo(f"error: {e}", err=True)
			raise click.exceptions.Exit(EXIT_UNDEFINED)
		except FreeFieldError as e:
			click.echo(f"error: {e}", err=True)
			raise click.exceptions.Exit(EXIT_DOMAIN_ERROR)
		except (click.exceptions.Exit, click.ClickException, click.Abort):
			raise
		except Exception as e:
			log_error(f"Unexpected error: {str(e)}", "Free Field CLI")
			click.echo(f"Unexpected error: {str(e)}", err=True)
			raise click.exceptions.Exit(EXIT_DOMAIN_ERROR)
	return wrapper
