"""Spectral tests: closed forms vs LU-determinant and QR oracles, regions."""

import numpy as np
import pytest

from swmoments.models import ModelKind, build_system_matrix
from swmoments.spectral import (
    analytic_eigenvalues,
    block_char_poly,
    char_poly_eval,
    double_factorial,
    legendre_deriv_roots,
    numeric_spectrum,
    outer_radicand,
    scan_hyperbolicity_region,
    spectral_report,
)
from swmoments.state import PrimitiveState

CLOSED_FORM_MODELS = (
    ModelKind.HSWME, ModelKind.SWLME, ModelKind.MHSWME, ModelKind.PHSWME, ModelKind.PMHSWME
)


def random_state(rng, N, scale=2.0):
    return PrimitiveState(rng.uniform(0.2, 4.0), rng.uniform(-scale, scale),
                          rng.uniform(-scale, scale, N))


def test_double_factorial():
    prod = 1
    for n in range(0, 13):
        prod = 1
        for k in range(1, 2 * n + 2, 2):
            prod *= k
        assert double_factorial(2 * n + 1) == prod
    assert double_factorial(-1) == 1
    with pytest.raises(ValueError):
        double_factorial(4)


def test_deriv_roots_hand_values():
    np.testing.assert_allclose(legendre_deriv_roots(2), [0.0], atol=1e-15)
    np.testing.assert_allclose(
        legendre_deriv_roots(3), [-1 / np.sqrt(5), 1 / np.sqrt(5)], atol=1e-14
    )


def test_deriv_roots_symmetry_and_oracle():
    for n in range(2, 14):
        r = legendre_deriv_roots(n)
        assert r.size == n - 1
        np.testing.assert_allclose(r, -r[::-1], atol=1e-15)
        assert np.all(np.diff(r) > 0)
        c = np.zeros(n + 1)
        c[n] = 1.0
        oracle = np.sort(np.polynomial.legendre.legroots(np.polynomial.legendre.legder(c)))
        np.testing.assert_allclose(r, oracle, atol=1e-12)
    with pytest.raises(ValueError):
        legendre_deriv_roots(14)


def test_block_char_poly_vs_band_determinant(rng):
    from swmoments.models import _alpha1_band

    for N in range(1, 9):
        for _ in range(20):
            a1 = rng.uniform(-3, 3)
            mu = rng.uniform(-4, 4)
            band = _alpha1_band(a1, 0.0, N)
            want = np.linalg.det(band - mu * np.eye(N))
            got = block_char_poly(N, mu, a1)
            assert got == pytest.approx(want, rel=1e-10, abs=1e-12)


def test_block_char_poly_alpha1_zero():
    for N in (1, 2, 5):
        assert block_char_poly(N, 0.7, 0.0) == pytest.approx((-0.7) ** N, rel=1e-14)


def test_char_poly_matches_lu_determinant(rng, tensors_cache):
    for model in CLOSED_FORM_MODELS:
        for N in range(1, 7):
            tensors = tensors_cache(N)
            for _ in range(20):
                st = random_state(rng, N)
                g = rng.uniform(0.5, 9.81)
                lam = rng.uniform(-6, 6)
                A = build_system_matrix(model, "convective", st, tensors, g).entries
                det = np.linalg.det(A - lam * np.eye(N + 2))
                val = char_poly_eval(model, lam, st, g)
                scale = max(abs(det), abs(val), 1e-30)
                assert abs(val - det) / scale <= 1e-8 or abs(val - det) <= 1e-10


def test_char_poly_outer_roots_phswme(rng, tensors_cache):
    for _ in range(10):
        st = random_state(rng, 3)
        g = 1.0
        for sign in (-1.0, 1.0):
            lam = st.u_m + sign * np.sqrt(g * st.h + st.alpha[0] ** 2)
            assert abs(char_poly_eval(ModelKind.PHSWME, lam, st, g)) <= 1e-10


def test_char_poly_first_order_reduction(rng):
    # N = 1: every closed form collapses to -(lam-u)((lam-u)^2 - gh - a1^2)/3-ish
    for _ in range(10):
        st = random_state(rng, 1)
        g, lam = 2.0, rng.uniform(-5, 5)
        mu = lam - st.u_m
        want = -mu * (mu**2 - g * st.h - st.alpha[0] ** 2)
        for model in (ModelKind.HSWME, ModelKind.PHSWME, ModelKind.SWLME,
                      ModelKind.MHSWME, ModelKind.PMHSWME):
            assert char_poly_eval(model, lam, st, g) == pytest.approx(want, rel=1e-12)


def test_char_poly_unavailable_for_swme():
    with pytest.raises(ValueError):
        char_poly_eval(ModelKind.SWME, 0.0, PrimitiveState(1.0, 0.0, [0.1]), 1.0)
    assert analytic_eigenvalues(ModelKind.SWME, PrimitiveState(1.0, 0.0, [0.1])) is None


def test_phswme_eigenvalues_hand_case():
    st = PrimitiveState(1.0, 0.0, [1.0, 7.0])
    ev = analytic_eigenvalues(ModelKind.PHSWME, st, 1.0)
    want = np.sort([-np.sqrt(2), -1 / np.sqrt(5), 1 / np.sqrt(5), np.sqrt(2)])
    np.testing.assert_allclose(ev, want, atol=1e-14)


def test_phswme_spectrum_independent_of_higher_moments(rng, tensors_cache):
    base = PrimitiveState(1.3, 0.4, [0.9, 0.0, 0.0])
    ref = np.sort(np.linalg.eigvals(
        build_system_matrix(ModelKind.PHSWME, "convective", base, tensors_cache(3), 1.0).entries
    ).real)
    for _ in range(20):
        st = PrimitiveState(1.3, 0.4, np.r_[0.9, rng.uniform(-5, 5, 2)])
        ev = np.sort(np.linalg.eigvals(
            build_system_matrix(ModelKind.PHSWME, "convective", st, tensors_cache(3), 1.0).entries
        ).real)
        assert np.max(np.abs(ev - ref)) <= 1e-10


def test_mhswme_complex_regime():
    st = PrimitiveState(1.0, 0.0, [0.5, 4.0])
    assert outer_radicand(ModelKind.MHSWME, st, 1.0) < 0
    ev = analytic_eigenvalues(ModelKind.MHSWME, st, 1.0)
    assert np.iscomplexobj(ev) and np.max(np.abs(ev.imag)) > 0.1


def test_swe_limit_all_models(tensors_cache):
    st = PrimitiveState(2.0, 0.7, np.zeros(3))
    want = np.sort([0.7, 0.7, 0.7, 0.7 - np.sqrt(9.81 * 2), 0.7 + np.sqrt(9.81 * 2)])
    for model in CLOSED_FORM_MODELS:
        ev = analytic_eigenvalues(model, st, 9.81)
        np.testing.assert_allclose(np.sort(ev.real if np.iscomplexobj(ev) else ev), want, atol=1e-12)
    rep = spectral_report(ModelKind.SWME, st, tensors_cache(3), 9.81)
    np.testing.assert_allclose(np.sort(rep.eigenvalues.real), want, atol=1e-9)
    assert rep.hyperbolic


def test_analytic_vs_numeric_mismatch(rng, tensors_cache):
    for model in CLOSED_FORM_MODELS:
        for N in range(1, 7):
            for _ in range(6):
                st = random_state(rng, N)
                if model == ModelKind.MHSWME and outer_radicand(model, st, 1.0) < 0.05:
                    continue  # stay inside (and off the boundary of) the region
                rep = spectral_report(model, st, tensors_cache(N), 1.0)
                scale = 1.0 + np.max(np.abs(rep.eigenvalues))
                assert rep.analytic_mismatch <= 1e-9 * scale


def test_galilean_shift(rng, tensors_cache):
    for model in CLOSED_FORM_MODELS:
        st = random_state(rng, 3, scale=1.0)
        shifted = PrimitiveState(st.h, st.u_m + 2.5, st.alpha)
        ev0 = analytic_eigenvalues(model, st, 1.0)
        ev1 = analytic_eigenvalues(model, shifted, 1.0)
        np.testing.assert_allclose(ev1, ev0 + 2.5, atol=1e-13)
        r0 = spectral_report(model, st, tensors_cache(3), 1.0).eigenvalues
        r1 = spectral_report(model, shifted, tensors_cache(3), 1.0).eigenvalues
        np.testing.assert_allclose(r1, r0 + 2.5, atol=1e-10)


def test_interior_eigenvalues_scale_with_alpha1():
    st1 = PrimitiveState(1.0, 0.0, [0.5, 0.0, 0.0])
    st2 = PrimitiveState(1.0, 0.0, [1.5, 0.0, 0.0])
    r = legendre_deriv_roots(4)
    ev1 = analytic_eigenvalues(ModelKind.HSWME, st1, 1.0)
    ev2 = analytic_eigenvalues(ModelKind.HSWME, st2, 1.0)
    np.testing.assert_allclose(np.sort(ev1)[1:-1], 0.5 * r, atol=1e-14)
    np.testing.assert_allclose(np.sort(ev2)[1:-1], 1.5 * r, atol=1e-14)


def _faddeev_leverrier_coeffs(A):
    # monic coefficients of det(lam I - A), descending powers
    n = A.shape[0]
    coeffs = [1.0]
    Mk = np.zeros_like(A)
    for k in range(1, n + 1):
        Mk = A @ Mk + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(A @ Mk) / k)
    return np.array(coeffs)


def test_swme_spectrum_against_char_poly_roots(tensors_cache):
    st = PrimitiveState(1.0, 0.25, [-0.25, 0.1, 0.05])
    rep = spectral_report(ModelKind.SWME, st, tensors_cache(3), 1.0)
    assert rep.hyperbolic and rep.max_imag == 0.0
    A = build_system_matrix(ModelKind.SWME, "convective", st, tensors_cache(3), 1.0).entries
    roots = np.roots(_faddeev_leverrier_coeffs(A))
    assert np.max(np.abs(roots.imag)) <= 1e-8
    np.testing.assert_allclose(np.sort(roots.real), rep.eigenvalues.real, atol=1e-8)


def test_phswme_diagonalizable_at_zero_alpha1(tensors_cache):
    for alpha in ([0.0, 0.8], [0.0, -1.5]):
        st = PrimitiveState(1.0, 0.3, alpha)
        rep = spectral_report(ModelKind.PHSWME, st, tensors_cache(2), 1.0)
        assert rep.hyperbolic
        assert rep.eigvec_cond <= 1e8


def test_scan_mhswme_boundary_points(tensors_cache):
    scan = scan_hyperbolicity_region(
        ModelKind.MHSWME, 2, [(-0.5, 0.5), (1.5, 3.5)], [3, 41], tensors_cache(2)
    )
    a2 = scan.axes[1]
    mid = 1  # a1 = 0 column
    verdict_at = lambda val: scan.verdicts[mid, int(np.argmin(np.abs(a2 - val)))]
    assert verdict_at(2.0) == 1      # 4/5 < 1: hyperbolic
    assert verdict_at(3.0) == 0      # 9/5 > 1: complex pair
    # boundary at a2 = sqrt(5(1+a1^2)) for every scanned a1
    for i, a1 in enumerate(scan.axes[0]):
        bound = np.sqrt(5 * (1 + a1**2))
        flips = a2[np.r_[False, np.diff(scan.verdicts[i] == 1) != 0]]
        assert flips.size >= 1
        assert np.min(np.abs(flips - bound)) <= (a2[1] - a2[0]) * 1.5


def test_scan_primitive_regularizations_fully_hyperbolic(tensors_cache):
    for model in (ModelKind.PHSWME, ModelKind.PMHSWME):
        scan = scan_hyperbolicity_region(
            model, 2, [(-6, 6), (-6, 6)], 31, tensors_cache(2)
        )
        assert scan.fraction_hyperbolic() == 1.0


def test_swme_hyperbolicity_loss_starts_at_third_order(tensors_cache):
    # N = 2 keeps a large hyperbolic neighborhood of equilibrium; from N = 3
    # on, complex spectra appear arbitrarily close to it.
    scan2 = scan_hyperbolicity_region(ModelKind.SWME, 2, [(-0.1, 0.1)] * 2, 21, tensors_cache(2))
    assert scan2.fraction_hyperbolic() == 1.0
    scan3 = scan_hyperbolicity_region(ModelKind.SWME, 3, [(-0.1, 0.1)] * 3, 13, tensors_cache(3))
    assert np.any(scan3.verdicts == 0)


def test_scan_csv_roundtrip(tmp_path, tensors_cache):
    scan = scan_hyperbolicity_region(ModelKind.MHSWME, 2, [(-1, 1), (-4, 4)], 5, tensors_cache(2))
    path = tmp_path / "region.csv"
    scan.write_csv(path)
    rows = path.read_text().strip().splitlines()
    assert rows[0] == "a_1,a_2,hyperbolic"
    assert len(rows) == 1 + 25
    data = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
    assert set(np.unique(data[:, 2])) <= {0.0, 1.0, 2.0}


def test_numeric_spectrum_rejects_nonfinite():
    with pytest.raises(ValueError):
        numeric_spectrum(np.array([[np.nan, 0.0], [0.0, 1.0]]))
