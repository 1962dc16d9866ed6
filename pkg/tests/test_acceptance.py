"""End-to-end acceptance checks; each prints one PASS/FAIL line."""

import math
from importlib import resources

import numpy as np
import pytest

import oracles
from eadsim.cli import main
from eadsim.errors import DomainError
from eadsim.linalg import DensityMatrix, partial_trace
from eadsim.measures import (
    BellSpectrum,
    bell_diagonal_decomposition,
    classical_correlation,
    negativity,
    quantum_mutual_information,
    ree,
    ree_closed_form,
    schedule_metric,
    tangle,
)
from eadsim.parity import NOISELESS, ChannelModel, CodeParams, decode, encode, transfer
from eadsim.protocols import (
    UserPair,
    entanglement_trace,
    invert_schedule_metric,
    plan_time_differentiation,
    run_protocol2,
)
from eadsim.ree import ree_numeric
from eadsim.states import evolve_abc, evolved_ab, initial_rho_ab, prepare_abc

QUARTER = math.pi / 4
SIGMA_ABC = np.array([
    [1, 0, -1j, 0, -1j, 0, 1, 0],
    [0, 1, 0, -1j, 0, -1j, 0, 1],
    [1j, 0, 1, 0, 1, 0, 1j, 0],
    [0, 1j, 0, 1, 0, 1, 0, 1j],
    [1j, 0, 1, 0, 1, 0, 1j, 0],
    [0, 1j, 0, 1, 0, 1, 0, 1j],
    [1, 0, -1j, 0, -1j, 0, 1, 0],
    [0, 1, 0, -1j, 0, -1j, 0, 1],
]) / 8
SIGMA_AB = np.array([
    [1, -1j, -1j, 1],
    [1j, 1, 1, 1j],
    [1j, 1, 1, 1j],
    [1, -1j, -1j, 1],
]) / 4


@pytest.fixture
def report(capsys):
    def emit(label, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {label}" + (f" ({detail})" if detail else ""))
        assert ok, f"{label}: {detail}"
    return emit


def test_01_evolution_exact(report):
    sigma = evolve_abc(prepare_abc(), QUARTER)
    err3 = np.max(np.abs(sigma.matrix - SIGMA_ABC))
    err2 = np.max(np.abs(partial_trace(sigma, {"A", "B"}).matrix - SIGMA_AB))
    report("01 three-qubit state at pi/4 and its AB reduction", err3 < 1e-12 and err2 < 1e-12,
           f"max errors {err3:.1e}, {err2:.1e}")


def test_02_maximal_entanglement(report):
    ab = evolved_ab(QUARTER)
    closed, numeric, neg = ree(ab), ree_numeric(ab).value, negativity(ab)
    ok = abs(closed - 1) < 1e-12 and abs(numeric - 1) < 1e-3 and abs(neg - 0.5) < 1e-12
    report("02 REE = 1 and negativity = 1/2 at pi/4", ok,
           f"closed {closed:.15f}, numeric {numeric:.6f}, negativity {neg:.15f}")


def test_03_separable_start(report):
    rho = initial_rho_ab()
    spec = bell_diagonal_decomposition(rho)
    checks = {
        "ree": ree(rho),
        "negativity": negativity(rho),
        "eigenvalues": np.max(np.abs(rho.eigenvalues - [0, 0, 0.5, 0.5])),
        "qmi": quantum_mutual_information(rho) - 1,
        "classical": classical_correlation(spec) - 1,
    }
    bad = {k: v for k, v in checks.items() if abs(v) > 1e-10}
    report("03 initial AB state is separable with one bit of classical correlation", not bad, str(bad or ""))


def test_04_schedule_metric_law(report):
    worst_t, worst_n = 0.0, 0.0
    for x in np.linspace(-QUARTER, QUARTER, 65):
        ab = DensityMatrix(oracles.ab_state(QUARTER + x), ("A", "B"))
        worst_t = max(worst_t, abs(tangle(ab) - schedule_metric(x)))
        worst_n = max(worst_n, abs(negativity(ab) - abs(math.sin(2 * (QUARTER + x))) / 2))
    report("04 tangle and negativity follow the schedule law on 65 offsets", worst_t < 1e-9 and worst_n < 1e-9,
           f"max errors {worst_t:.1e}, {worst_n:.1e}")


def test_05_memory_free(report):
    sigma = evolve_abc(prepare_abc(), QUARTER)
    ab = partial_trace(sigma, {"A", "B"})
    err = np.max(np.abs(sigma.matrix - np.kron(ab.matrix, np.eye(2) / 2)))
    report("05 ancilla decouples at pi/4", err < 1e-12, f"max error {err:.1e}")


def test_06_time_domain_protocol(report):
    pairs = [UserPair(f"P{p}", f"U{p}", f"B{p}", p) for p in (3, 1, 5, 2, 4)]
    results = sorted(run_protocol2(pairs, 1.0), key=lambda r: r.wall_clock_completion)
    times = [r.wall_clock_completion for r in results]
    ok = (all(r.tangle >= 1 - 1e-9 and r.schedule_metric >= 1 - 1e-9 for r in results)
          and np.allclose(times, [0.25, 0.5, 0.75, 1.0, 1.25], rtol=0, atol=1e-15)
          and [r.pair_id for r in results] == ["P1", "P2", "P3", "P4", "P5"])
    report("06 time-domain completions follow priority", ok, f"times {times}")


def test_07_planning_inverse(report):
    rng = np.random.default_rng(7)
    worst, in_range = 0.0, True
    for target in rng.uniform(0, 1, 1000):
        x = invert_schedule_metric(target)
        in_range &= -QUARTER <= x <= 0
        worst = max(worst, abs(schedule_metric(x) - target))
    report("07 planned offsets reproduce 1000 targets", worst < 1e-12 and in_range, f"max error {worst:.1e}")


def _random_bell_spectrum(rng):
    while True:
        c = rng.uniform(-1, 1, 3)
        try:
            return BellSpectrum.from_correlations(c)
        except DomainError:
            continue


def test_08_ree_optimizer(report, rng):
    worst = 0.0
    for _ in range(50):
        spec = _random_bell_spectrum(rng)
        lam = [spec.lambdas[k] for k in oracles.BELL_INDICES]
        rho = DensityMatrix(oracles.bell_mixture(lam), ("A", "B"))
        worst = max(worst, abs(ree_numeric(rho, restarts=4).value - ree_closed_form(bell_diagonal_decomposition(rho))))
    sep = max(ree_numeric(DensityMatrix(oracles.random_separable(rng), ("A", "B")), restarts=4).value
              for _ in range(20))
    report("08 numeric REE matches closed form and vanishes on separable mixtures", worst < 1e-3 and sep <= 1e-3,
           f"max deviation {worst:.1e}, max separable {sep:.1e}")


def test_09_parity_code(report, rng):
    worst = 0.0
    for m in (1, 2, 3):
        for n in (1, 2, 3):
            params = CodeParams(m, n)
            for _ in range(100):
                v = rng.normal(size=2) + 1j * rng.normal(size=2)
                v /= np.linalg.norm(v)
                a, b = v * (abs(v[0]) / v[0])
                got = decode(transfer(encode(a, b, params), NOISELESS, 3), params)
                worst = max(worst, abs(got[0] - a), abs(got[1] - b))
    state = encode(1, 0, CodeParams(2, 3))
    channel = ChannelModel("block-erasure", 0.5, 1234)
    patterns = [transfer(state, channel, 4).erased for _ in range(10)]
    ok = worst < 1e-12 and len(set(patterns)) == 1
    report("09 parity code round trip over all (m, n) and seeded erasures", ok, f"max error {worst:.1e}")


def test_10_periodicity(report):
    pair = UserPair("P", "U", "B", 3)
    d = plan_time_differentiation([pair], 1.0)[0]
    period = d.oscillation_period
    grid = np.linspace(0, period, 100)
    a = entanglement_trace(pair, d, grid).samples
    b = entanglement_trace(pair, d, grid + period).samples
    worst = max(max(abs(s.tangle - t.tangle), abs(s.negativity - t.negativity), abs(s.ree - t.ree))
                for s, t in zip(a, b))
    fine = entanglement_trace(pair, d, np.linspace(0, period, 401)).samples
    peak = max(fine, key=lambda s: s.tangle).wall_clock
    ok = worst < 1e-12 and abs(peak - period / 4) < 1e-12
    report("10 traces repeat every period and peak at a quarter period", ok,
           f"max error {worst:.1e}, peak at {peak}")


def test_11_cli_determinism(report, tmp_path, capsys):
    cfg = str(resources.files("eadsim") / "scenarios" / "time_domain.yaml")
    same = True
    for fmt, name in (("csv", "traces.csv"), ("json-lines", "traces.jsonl")):
        outputs = []
        for run in ("a", "b"):
            out = tmp_path / f"{fmt}-{run}"
            assert main(["run", cfg, "--seed", "3", "--format", fmt, "--out", str(out)]) == 0
            outputs.append([(out / f).read_bytes() for f in (name, "sessions.csv", "timeline.jsonl")])
        same &= outputs[0] == outputs[1]
    capsys.readouterr()
    report("11 repeated CLI runs give byte-identical exports", same)
