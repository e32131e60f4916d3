from numpy import (
    diff,
    log,
)
from pytest import (
    approx,
    mark,
    raises,
)

from iondesign.cli import (
    cavity_report,
    gate_report,
)
from iondesign.exceptions import UsageError
from iondesign.registry import load_preset
from iondesign.sweep import (
    SweepSpec,
    run_sweep,
    sweep_values,
)


def lightshift_report(config):
    return gate_report(config, "lightshift")


def test_sweep_values():
    log_values = sweep_values(SweepSpec("cavity.finesse", "log", 1e4, 1e6, 3))
    assert list(log_values) == approx([1e4, 1e5, 1e6])
    values = sweep_values(SweepSpec("trap.n_ions", "linear", 10, 20, 3))
    assert list(values) == approx([10, 15, 20])


@mark.parametrize(
    "scale, start, stop, points",
    [
        ("cubic", 1, 2, 3),
        ("linear", 1, 2, 1),
        ("linear", 1, 1, 3),
        ("log", 0, 2, 3),
        ("log", -1, 2, 3),
    ],
)
def test_sweep_spec_rejects(scale, start, stop, points):
    with raises(UsageError):
        SweepSpec("cavity.finesse", scale, start, stop, points)


def test_finesse_sweep():
    """kappa falls as 1/F; g does not depend on F."""
    spec = SweepSpec("cavity.finesse", "log", 1e4, 1e7, 7)
    frame = run_sweep(cavity_report, load_preset("cs-fp-cavity"), spec)
    assert len(frame) == 7
    assert frame.columns[0] == "cavity.finesse"
    assert list(frame["finesse"]) == list(frame["cavity.finesse"])
    kappa = frame["kappa_hz"].to_numpy()
    finesse = frame["finesse"].to_numpy(dtype=float)
    assert diff(log(kappa)) / diff(log(finesse)) == approx(-1.0)
    assert list(frame["g_hz"]) == approx([frame["g_hz"][0]] * 7)
    assert not frame["invalid"].any()


def test_two_point_sweep():
    spec = SweepSpec("cavity.length", "linear", 30.0, 60.0, 2)
    frame = run_sweep(cavity_report, load_preset("cs-fp-cavity"), spec)
    assert list(frame["cavity.length"]) == [30.0, 60.0]
    assert list(frame["length_m"]) == approx([30e-6, 60e-6])


def test_integer_parameter_is_rounded():
    spec = SweepSpec("trap.n_ions", "log", 10, 140, 4)
    frame = run_sweep(lightshift_report, load_preset("ca-140"), spec)
    assert frame["trap.n_ions"].dtype.kind == "i"
    assert list(frame["n_ions"]) == list(frame["trap.n_ions"])
    assert frame["trap.n_ions"].iloc[-1] == 140


def test_invalid_points_are_kept():
    spec = SweepSpec("cavity.mirror_curvature", "linear", 0.001, 10.0, 2)
    frame = run_sweep(cavity_report, load_preset("cs-fp-cavity"), spec)
    assert list(frame["invalid"]) == [True, False]
    assert isinstance(frame["error"][0], str)
    assert frame["kappa_hz"][1] > 0


def test_unknown_parameter():
    spec = SweepSpec("cavity.mirror_count", "linear", 1, 2, 2)
    with raises(UsageError):
        run_sweep(cavity_report, load_preset("cs-fp-cavity"), spec)


def test_parallel_sweep_matches_serial():
    config = load_preset("cs-fp-cavity")
    spec = SweepSpec("cavity.finesse", "log", 1e4, 1e6, 5)
    serial = run_sweep(cavity_report, config, spec)
    parallel = run_sweep(cavity_report, config, spec, processes_number=2)
    assert list(parallel["cavity.finesse"]) == list(serial["cavity.finesse"])
    assert list(parallel["kappa_hz"]) == approx(list(serial["kappa_hz"]))


def test_rabi_flop_failure_falls_as_inverse_root_finesse():
    spec = SweepSpec("cavity.finesse", "log", 1e4, 1e7, 7)
    frame = run_sweep(
        lambda config: gate_report(config, "rabi_flop"),
        load_preset("cs-fp-cavity"),
        spec,
    )
    p = frame["p"].to_numpy()
    finesse = frame["cavity.finesse"].to_numpy(dtype=float)
    assert diff(log(p)) / diff(log(finesse)) == approx(-0.5, rel=1e-6)
    assert list(frame["invalid"]) == [True, True, True, False, False,
                                      False, False]
