"""
Configuration management using Pydantic Settings
"""
from contextlib import contextmanager
from contextvars import ContextVar
from functools import lru_cache
from typing import Iterator, Optional

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Toolkit settings"""

    # Logging
    log_level: str = "INFO"

    # Symbolic scale refinement
    refinement_cap: int = 64
    initial_precision_bits: int = 32
    max_precision_bits: int = 8192

    # Coefficient propagation
    solver_max_terms: int = 20000

    # Kernel searches: extra equations required beyond the unknown count
    guess_safety_margin: int = 8
    certify_safety_margin: int = 8

    # CLI defaults
    default_cutoff: int = 64
    default_window: int = 1
    default_deg_max: int = 4
    default_d_max: int = 2
    json_indent: int = 2

    class Config:
        env_file = ".env"
        env_prefix = "HAHN_"
        case_sensitive = False


_scoped: ContextVar[Optional[Settings]] = ContextVar("scoped_settings", default=None)


@lru_cache()
def _load_settings() -> Settings:
    return Settings()


def get_settings() -> Settings:
    """Get the active settings: a scoped override if one is open, else the cached instance"""
    return _scoped.get() or _load_settings()


@contextmanager
def settings_override(**updates) -> Iterator[Settings]:
    """
    Run a block with a copy of the active settings

    Args:
        updates: field values replaced in the copy

    Yields:
        The copy, which get_settings() returns until the block exits
    """
    token = _scoped.set(get_settings().model_copy(update=updates))
    try:
        yield _scoped.get()
    finally:
        _scoped.reset(token)
