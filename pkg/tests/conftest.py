"""Shared fixtures: the spectral test corpus and acceptance reporting.

The corpus is a deterministic family of 300 conjugate-normal matrices with
prescribed mixed spectra (complex pairs and negative-real eigenvalues,
dimensions up to 40).  Every sixth spectrum is degenerate -- either a
multiplicity-2 complex pair or a multiplicity-4 negative-real eigenvalue --
so clustered eigenspaces are exercised throughout.  Eigenvalues are kept at
least 1e-2 apart (conjugates included) and at least 0.05 away from the real
axis so that clustering decisions are unambiguous at default tolerances.
"""

import re

import numpy as np
import pytest

from wignerpf import SpectrumEntry, SpectrumSpec, random_conjugate_normal

CORPUS_SIZE = 300

_MIN_SEPARATION = 1e-2


def _separated(omega, used):
    return all(abs(omega - u) >= _MIN_SEPARATION for u in used)


def corpus_spec(index: int) -> SpectrumSpec:
    """Deterministic spectrum prescription number ``index``."""
    rng = np.random.default_rng(987_000 + index)
    degenerate = index % 6 == 0
    half = int(rng.integers(1, 21))  # dimension 2 .. 40
    if degenerate:
        half = max(half, 2)
    target = 2 * half
    entries = []
    used = [0j]  # keep the spectrum away from zero as well
    filled = 0

    def draw_complex() -> complex:
        while True:
            omega = complex(rng.uniform(-3.0, 3.0), rng.uniform(0.05, 3.0))
            if _separated(omega, used) and _separated(np.conj(omega), used):
                used.extend([omega, np.conj(omega)])
                return omega

    def draw_negative() -> complex:
        while True:
            omega = complex(-rng.uniform(0.1, 9.0))
            if _separated(omega, used):
                used.append(omega)
                return omega

    if degenerate:
        if index % 12:
            entries.append(SpectrumEntry("complex", draw_complex(), 2))
        else:
            entries.append(SpectrumEntry("negative-real", draw_negative(), 4))
        filled += 4
    while filled < target:
        if rng.random() < 0.65:
            entries.append(SpectrumEntry("complex", draw_complex(), 1))
        else:
            entries.append(SpectrumEntry("negative-real", draw_negative(), 2))
        filled += 2
    return SpectrumSpec(entries=tuple(entries), seed=31_000 + index)


@pytest.fixture(scope="session")
def corpus():
    """List of (spec, matrix) pairs, built once per session."""
    specs = [corpus_spec(i) for i in range(CORPUS_SIZE)]
    return [(spec, random_conjugate_normal(spec)) for spec in specs]


_CRITERION = re.compile(r"test_criterion_(\d+)")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """Print one PASS/FAIL line per acceptance criterion."""
    outcome = yield
    report = outcome.get_result()
    if "test_acceptance" not in item.nodeid:
        return
    match = _CRITERION.search(item.name)
    if match is None:
        return
    if report.when == "call":
        status = "PASS" if report.passed else "FAIL"
    elif report.failed:  # collection/setup error counts as a failure
        status = "FAIL"
    else:
        return
    line = f"ACCEPTANCE {int(match.group(1))}: {status}"
    reporter = item.config.pluginmanager.get_plugin("terminalreporter")
    if reporter is not None:
        reporter.ensure_newline()
        reporter.write_line(line)
    else:  # pragma: no cover - no terminal plugin registered
        print(line)
