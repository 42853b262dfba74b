# Copyright (c) 2026, Dexciss Technology and contributors
# For license information, please see license.txt

"""
Free Field Settings: field defaults, user file overlay and validation
"""

import json
import os
from functools import lru_cache
from typing import Any, Dict, List, Optional

from free_field.errors import SettingsError
from free_field.logger import logger

SETTINGS_ENV = "FREE_FIELD_SETTINGS"
DEFAULT_SETTINGS_FILE = "ff_settings.json"
SCHEMA_FILE = os.path.join(os.path.dirname(__file__), "free_field_settings.json")

# Layout-only field types carry no value
LAYOUT_FIELDTYPES = ("Section Break", "Column Break")


@lru_cache(maxsize=1)
def get_field_definitions() -> List[Dict[str, Any]]:
	"""Load the value-carrying field definitions of the settings schema."""
	with open(SCHEMA_FILE, encoding="utf-8") as f:
		schema = json.load(f)
	return [field for field in schema["fields"] if field["fieldtype"] not in LAYOUT_FIELDTYPES]


def _coerce(field: Dict[str, Any], value: Any) -> Any:
	fieldtype = field["fieldtype"]
	try:
		if fieldtype in ("Int", "Check"):
			return int(value)
		if fieldtype in ("Data", "Select"):
			if isinstance(value, (list, tuple)):
				return ",".join(str(v) for v in value)
			return str(value)
	except (TypeError, ValueError):
		raise SettingsError(f"{field['label']}: expected {fieldtype}, got {value!r}")
	return value


class FreeFieldSettings:
	"""Settings for free field computations."""

	def __init__(self, **values: Any):
		known = {field["fieldname"]: field for field in get_field_definitions()}
		unknown = set(values) - set(known)
		if unknown:
			raise SettingsError(f"Unknown settings: {', '.join(sorted(unknown))}")
		for fieldname, field in known.items():
			value = values.get(fieldname)
			if value is None:
				value = field.get("default")
			setattr(self, fieldname, _coerce(field, value))

	def validate(self) -> None:
		"""Validate the settings."""
		for field in get_field_definitions():
			value = getattr(self, field["fieldname"])
			if field["fieldtype"] == "Select":
				options = field["options"].split("\n")
				if value not in options:
					raise SettingsError(f"{field['label']} must be one of {', '.join(options)}")
			if field["fieldtype"] == "Int" and field.get("non_negative") and value < 0:
				raise SettingsError(f"{field['label']} must not be negative")
		self.validate_letters()
		self.validate_sizes()

	def validate_letters(self) -> None:
		"""Validate that letters are distinct identifiers."""
		letters = self.letter_list
		if not letters:
			raise SettingsError("At least one letter is required")
		if len(set(letters)) != len(letters):
			raise SettingsError(f"Duplicate letters in {self.letters!r}")
		for letter in letters:
			if not letter.isidentifier() or letter == "inv":
				raise SettingsError(f"Invalid letter name {letter!r}")

	def validate_sizes(self) -> None:
		"""Validate that matrix sizes are positive integers."""
		try:
			sizes = self.size_list
		except ValueError:
			raise SettingsError(f"Matrix sizes must be integers, got {self.sizes!r}")
		if not sizes or any(size < 1 for size in sizes):
			raise SettingsError("Matrix sizes must be positive")

	@property
	def letter_list(self) -> List[str]:
		return [letter.strip() for letter in self.letters.split(",") if letter.strip()]

	@property
	def size_list(self) -> List[int]:
		return [int(size) for size in self.sizes.split(",") if size.strip()]

	def as_dict(self) -> Dict[str, Any]:
		return {field["fieldname"]: getattr(self, field["fieldname"]) for field in get_field_definitions()}

	@staticmethod
	def get_active_settings(path: Optional[str] = None) -> "FreeFieldSettings":
		"""Build settings from defaults and the user settings file.

		Args:
			path: Explicit settings file; falls back to $FREE_FIELD_SETTINGS, then ./ff_settings.json

		Returns:
			FreeFieldSettings instance (not yet validated)
		"""
		path = path or os.environ.get(SETTINGS_ENV)
		if not path and os.path.exists(DEFAULT_SETTINGS_FILE):
			path = DEFAULT_SETTINGS_FILE
		if not path:
			return FreeFieldSettings()

		try:
			with open(path, encoding="utf-8") as f:
				values = json.load(f)
		except OSError as e:
			raise SettingsError(f"Cannot read settings file {path}: {e}")
		except json.JSONDecodeError as e:
			raise SettingsError(f"Settings file {path} is not valid JSON: {e}")
		if not isinstance(values, dict):
			raise SettingsError(f"Settings file {path} must contain a JSON object")

		logger("settings").debug(f"Loaded settings from {path}")
		return FreeFieldSettings(**values)


def get_settings(path: Optional[str] = None, **overrides: Any) -> FreeFieldSettings:
	"""Helper function to get validated settings.

	Args:
		path: Optional settings file
		overrides: Field values taking precedence over the file (None values are ignored)

	Returns:
		Validated FreeFieldSettings
	"""
	settings = FreeFieldSettings.get_active_settings(path)
	for fieldname, value in overrides.items():
		if value is None:
			continue
		if not hasattr(settings, fieldname):
			raise SettingsError(f"Unknown setting {fieldname!r}")
		field = next(f for f in get_field_definitions() if f["fieldname"] == fieldname)
		setattr(settings, fieldname, _coerce(field, value))
	settings.validate()
	return settings
