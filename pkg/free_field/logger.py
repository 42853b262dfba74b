# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

"""
Logging helpers
"""

import logging
import sys
from typing import Optional

ROOT_LOGGER = "free_field"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def logger(module: Optional[str] = None) -> logging.Logger:
	"""Get a logger namespaced under the package logger.

	Args:
		module: Short module name, e.g. "minimizer"

	Returns:
		Logger instance
	"""
	if not module:
		return logging.getLogger(ROOT_LOGGER)
	return logging.getLogger(f"{ROOT_LOGGER}.{module}")


def log_error(message: str, title: str = "Free Field") -> None:
	"""Record an unexpected failure.

	Args:
		message: Error details
		title: Short title of the failing component
	"""
	logger("errors").error(f"[{title}] {message}")


def setup_logging(verbose: bool = False) -> None:
	"""Attach a stderr handler to the package logger, replacing one from an earlier call."""
	level = logging.DEBUG if verbose else logging.WARNING
	root = logging.getLogger(ROOT_LOGGER)
	root.setLevel(level)
	for handler in [h for h in root.handlers if getattr(h, "_free_field", False)]:
		root.removeHandler(handler)
	handler = logging.StreamHandler(sys.stderr)
	handler.setFormatter(logging.Formatter(LOG_FORMAT))
	handler.setLevel(level)
	handler._free_field = True
	root.addHandler(handler)
