import math

import pytest

from dbclock.dirac import DiracAlgebra, PacketSpec, make_lattice, run

# desk-scale reference geometry
N_REF, L_REF = 2048, 409.6


@pytest.fixture(scope="session")
def algebra():
    return DiracAlgebra(1.0)


@pytest.fixture(scope="session")
def lattice():
    return make_lattice(N_REF, L_REF)


@pytest.fixture(scope="session")
def wide_lattice():
    """Room for sigma_x = 20 and k0 up to ~7.8."""
    return make_lattice(8192, 819.2)


@pytest.fixture(scope="session")
def positive_run(lattice, algebra):
    spec = PacketSpec(k0=0.75, sigma_x=10.0, content="positive")
    return run(lattice, spec, algebra, 40.0, 257, 1.0)


@pytest.fixture(scope="session")
def zitter_runs(lattice, algebra):
    """(k0, content) -> series on the zitter preset time grid."""
    out = {}
    for k0 in (0.0, 0.75):
        for content in ("mixed", "positive"):
            spec = PacketSpec(k0=k0, sigma_x=10.0, content=content)
            out[k0, content] = run(lattice, spec, algebra, 40.0, 512, 1.0)
    return out


def k0_for_gamma(gamma, mc2=1.0):
    return mc2 * math.sqrt(gamma * gamma - 1.0)


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for an acceptance criterion."""

    def record(label, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
        request.config.acceptance_lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
