from __future__ import (
    annotations,
)  # allows using A | B syntax for unions in Python < 3.10
import importlib
import importlib.util
from pathlib import Path

import pytest


def parse_target(text: str) -> tuple[int, int]:
    """``"K,N"`` → ``(K, N)``, with ``1 <= K < N``."""
    try:
        k, n = (int(part) for part in text.split(","))
    except ValueError as err:
        raise pytest.UsageError(f"census target must look like K,N, got {text!r}") from err
    if not 1 <= k < n:
        raise pytest.UsageError(f"census target needs 1 <= K < N, got {text!r}")
    return k, n


def resolve_test_class(ref: type | str) -> tuple[str, type]:
    """Module name and class object for a class or a ``"module:Class"`` reference."""
    if isinstance(ref, type):
        return ref.__module__, ref
    module_name, sep, class_name = ref.partition(":")
    if not sep or not class_name:
        raise pytest.UsageError(f"test class must look like module:Class, got {ref!r}")
    try:
        return module_name, getattr(importlib.import_module(module_name), class_name)
    except (ImportError, AttributeError) as err:
        raise pytest.UsageError(f"cannot load test class {ref!r}: {err}") from err


def census_class_collector(ref: type | str, parent: pytest.Collector) -> pytest.Class:
    """Collector for the census test class, below a module collector of its own file."""
    module_name, cls = resolve_test_class(ref)
    module_file = Path(importlib.util.find_spec(module_name).origin)
    module_collector = parent.ihook.pytest_pycollect_makemodule(
        module_path=module_file, parent=parent
    )
    return pytest.Class.from_parent(module_collector, name=cls.__name__, obj=cls)
