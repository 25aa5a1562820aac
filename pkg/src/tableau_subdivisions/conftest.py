import pytest


MARKERS = {
    "unit": "Quick tests that do not build web models, must run in < 2 s",
    "component": "Tests that build web models or enumerate subdivisions",
}


def pytest_configure(config: pytest.Config):
    for spec, descr in MARKERS.items():
        config.addinivalue_line("markers", f"{spec}: {descr}")
