"""Argument validation, configuration loading and the parallel sweep helper.

Validators return (is_valid, message) tuples and never raise.
"""

from __future__ import annotations

import json
import logging
import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import TypeVar

from constants import (
    CONFIG_FILE,
    MAX_PRECISION_ENV,
    MAX_WORKER_THREADS,
    MIN_PRECISION_BITS,
)
from logpart.partition_oracle import ensure_table

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

_CONFIG_KEYS = ("max_precision_bits", "workers", "precision")


# ===================================================================
#  Argument validation
# ===================================================================


def validate_range(n_from: int, n_to: int, minimum: int = 1) -> tuple[bool, str]:
    if n_from < minimum:
        return False, f"--from must be >= {minimum}, got {n_from}"
    if n_to < n_from:
        return False, f"--to ({n_to}) is below --from ({n_from})"
    return True, "ok"


def validate_order(r: int) -> tuple[bool, str]:
    if r < 1:
        return False, f"--r must be >= 1, got {r}"
    return True, "ok"


def validate_precision(bits: int) -> tuple[bool, str]:
    if bits < MIN_PRECISION_BITS:
        return False, f"--precision must be >= {MIN_PRECISION_BITS} bits, got {bits}"
    return True, "ok"


def validate_output_path(path: str | None) -> tuple[bool, str]:
    """An --out target must sit in an existing directory and not be one itself."""
    if path is None:
        return True, "stdout"
    target = Path(path)
    if target.is_dir():
        return False, f"--out points at a directory: {path}"
    parent = target.parent if str(target.parent) else Path(".")
    if not parent.is_dir():
        return False, f"--out directory does not exist: {parent}"
    return True, "ok"


# ===================================================================
#  Configuration
# ===================================================================


def load_config(path: Path = CONFIG_FILE) -> dict:
    """Known keys from the JSON config file, or {} when it is missing or unusable."""
    try:
        if not path.exists():
            return {}
        with open(path) as f:
            loaded = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.warning(f"Ignoring unreadable config {path}: {e}")
        return {}
    if not isinstance(loaded, dict):
        logger.warning(f"Ignoring config {path}: top level is not an object")
        return {}

    config = {}
    for key in _CONFIG_KEYS:
        value = loaded.get(key)
        if value is None:
            continue
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            logger.warning(f"Ignoring config {key}={value!r}: not a positive integer")
            continue
        config[key] = value
    return config


def apply_config(config: dict) -> None:
    """Feed the config's ladder cap through the environment; an existing variable wins."""
    cap = config.get("max_precision_bits")
    if cap is not None and not os.environ.get(MAX_PRECISION_ENV):
        os.environ[MAX_PRECISION_ENV] = str(cap)


# ===================================================================
#  Parallel sweep
# ===================================================================


def parallel_sweep(
    fn: Callable[[T], R],
    items: Iterable[T],
    workers: int = MAX_WORKER_THREADS,
    table_limit: int | None = None,
) -> list[R]:
    """fn over items on a thread pool, results in input order.

    The partition table is built up to table_limit first, so workers only read it.
    """
    items = list(items)
    if table_limit is not None:
        ensure_table(table_limit)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="logpart_worker") as pool:
        return list(pool.map(fn, items))
