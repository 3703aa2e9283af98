"""Acceptance criteria 1-11, each at its stated tolerance.

Every criterion prints one PASS/FAIL line (visible even under output capture).
Thresholds are restated here as literals and compared against the raw
residuals in the report, so they do not depend on suite defaults.
"""

import json
import operator
import time

import numpy as np
import pytest

from photonwm.cli import main
from photonwm.io import read_csv

OPS = {"<": operator.lt, ">": operator.gt, ">=": operator.ge}

CRITERIA = {
    2: [
        ("kernels", "kernel_G_relative_error", "<", 1e-3),
        ("kernels", "kernel_J_relative_error", "<", 1e-3),
        ("kernels", "kernel_G_error_minus_estimate", "<", 0.0),
        ("kernels", "kernel_J_error_minus_estimate", "<", 0.0),
        ("kernels", "kernel_J_boost_invariance", "<", 1e-12),
    ],
    3: [("maxwell", "scalar_product_chain", "<", 1e-8)],
    4: [
        ("maxwell", "maxwell_residual", "<", 1e-10),
        ("maxwell", "rs_eigenmode_residual", "<", 1e-12),
        ("maxwell", "maxwell_flipped_helicity", ">", 1e-1),
    ],
    5: [
        ("maxwell", "energy_locality", "<", 1e-8),
        ("biortho", "energy_locality_longitudinal", "<", 1e-8),
        ("maxwell", "bb_norm_energy", "<", 1e-10),
        ("biortho", "h01_closed_form", "<", 1e-8),
        ("biortho", "h01_quadrature", "<", 1e-8),
    ],
    6: [
        ("biortho", "eigenvalues", "<", 1e-8),
        ("biortho", "eigenmodes_diagonal_overlap", "<", 1e-9),
    ],
    7: [
        ("twophoton", "exchange_symmetry", "<", 1e-12),
        ("twophoton", "equal_time_residual", "<", 1e-10),
        ("twophoton", "two_time_residual", "<", 1e-10),
        ("twophoton", "product_purity", "<", 1e-10),
        ("twophoton", "entangled_purity", "<", 1e-8),
        ("twophoton", "trace_coordinate_oracle", "<", 1e-4),
        ("twophoton", "naive_trace_broadband", ">", 1e-2),
        ("twophoton", "naive_trace_narrowband", "<", 1e-3),
    ],
    8: [
        ("wolf", "wolf_first_order", "<", 1e-8),
        ("wolf", "wolf_second_order", "<", 1e-8),
        ("wolf", "rs_matches_wavefunction_slot1", "<", 1e-10),
        ("wolf", "rs_matches_wavefunction_slot2", "<", 1e-10),
        ("wolf", "sign_convention_control", ">", 1e-1),
    ],
    9: [
        ("converter", "filter_fidelity", ">=", 1 - 1e-6),
        ("converter", "shaper_route_deviation", "<", 1e-9),
        ("converter", "homodyne_vs_nonlocal", "<", 1e-8),
    ],
    10: [
        ("boost", "boost_norm", "<", 1e-6),
        ("boost", "boost_doppler", "<", 1e-6),
    ],
}


def announce(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def lookup(report, suite, name):
    for c in report["suites"][suite]["checks"]:
        if c["name"] == name:
            return float(c["value"])
    raise KeyError(f"{suite}.{name} missing from report")


@pytest.fixture(scope="module")
def full_runs(tmp_path_factory):
    runs = []
    for i in range(2):
        out = tmp_path_factory.mktemp(f"all{i}")
        t0 = time.perf_counter()
        code = main(["suite", "all", "--out", str(out)])
        runs.append((code, time.perf_counter() - t0, (out / "report.json").read_bytes()))
    return runs


@pytest.fixture(scope="module")
def report(full_runs):
    return json.loads(full_runs[0][2])


def test_criterion_01_figure_two(tmp_path, capsys):
    t0 = time.perf_counter()
    assert main(["figure", "--m", "1", "--m", "2", "--kind", "product", "--out", str(tmp_path)]) == 0
    main(["suite", "biortho", "--out", str(tmp_path)])
    elapsed = time.perf_counter() - t0

    def integral(name):
        t, v = read_csv(tmp_path / name)
        return np.sum(v) * (t[1] - t[0])

    i22 = integral("product_d2_m2.csv")
    i21 = integral("product_d2_m1.csv")
    rep = json.loads((tmp_path / "report.json").read_text())
    dev = lookup(rep, "biortho", "biorthogonality_max_deviation")
    ok = abs(i22 - 1) < 1e-6 and abs(i21) < 1e-6 and dev < 1e-6 and elapsed < 10
    announce(capsys, 1, ok, f"d2.m2={i22.real:.12f} d2.m1={abs(i21):.2e} matrix={dev:.2e} time={elapsed:.2f}s")
    assert ok


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criteria_from_full_suite(number, report, capsys):
    parts, ok = [], True
    for suite, name, rel, thr in CRITERIA[number]:
        v = lookup(report, suite, name)
        good = bool(np.isfinite(v) and OPS[rel](v, thr))
        ok &= good
        parts.append(f"{name}={v:.3g}{'' if good else '!'}")
    announce(capsys, number, ok, " ".join(parts))
    assert ok


def test_criterion_11_determinism(full_runs, capsys):
    (c0, t0, b0), (c1, t1, b1) = full_runs
    ok = c0 == 0 and c1 == 0 and b0 == b1 and max(t0, t1) < 300
    announce(capsys, 11, ok, f"identical={b0 == b1} exit={c0},{c1} time={t0:.1f}s,{t1:.1f}s")
    assert ok
