from free_field.config.settings import FreeFieldSettings, get_settings
