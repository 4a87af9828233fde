import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toeplitz_dynamics.exceptions import InvalidParams
from toeplitz_dynamics.hamiltonian import (ToeplitzParams, build_hamiltonian, closed_form_spectrum,
                                           is_toeplitz_tridiagonal, numerical_spectrum, shift_matrix,
                                           spectrum_discrepancy)


@pytest.mark.parametrize("a,b,n,diag,off", [(2, 2, 1, 2.0, 2.0), (1, 0.5, 2, 1.0, 0.25), (3, 0, 1, 3.0, 0.0)])
def test_build_substitution(a, b, n, diag, off):
    H = build_hamiltonian(ToeplitzParams(a, b, n))
    expected = diag * np.eye(4) + off * shift_matrix(4)
    np.testing.assert_array_equal(H, expected)
    np.testing.assert_array_equal(H, H.T)


def test_dimension_validation():
    with pytest.raises(InvalidParams):
        ToeplitzParams(1, 1, 1, m=1)


def test_negative_bases_allowed_for_matrix():
    H = build_hamiltonian(ToeplitzParams(-2, -1, 3))
    assert H[0, 0] == -8 and H[0, 1] == -1


def test_fractional_power_of_negative_base_rejected():
    with pytest.raises(InvalidParams):
        build_hamiltonian(ToeplitzParams(-2, 1, 0.5))


def test_standard_closed_form_unit_case():
    spec = closed_form_spectrum(ToeplitzParams(1, 1, 1))
    j = np.arange(1, 5)
    np.testing.assert_allclose(spec.eigenvalues, 1 + 2 * np.cos(j * np.pi / 5))
    np.testing.assert_allclose(spec.eigenvalues, [2.618034, 1.618034, 0.381966, -0.618034], atol=1e-6)
    num = numerical_spectrum(ToeplitzParams(1, 1, 1))
    np.testing.assert_allclose(np.sort(spec.eigenvalues), num.eigenvalues, atol=1e-10)


def test_closed_form_eigenvectors():
    p = ToeplitzParams(1.3, 0.7, 2)
    spec = closed_form_spectrum(p)
    H = build_hamiltonian(p)
    V = spec.eigenvectors
    np.testing.assert_allclose(H @ V, V * spec.eigenvalues, atol=1e-12)
    np.testing.assert_allclose(V.conj().T @ V, np.eye(4), atol=1e-12)


def test_decoupled_limit():
    spec = closed_form_spectrum(ToeplitzParams(2.0, 1e-8, 1))
    np.testing.assert_allclose(spec.eigenvalues, 2.0, atol=1e-7)


def test_swapped_form_equals_standard_at_equal_bases():
    for a in (0.5, 2.0, 3.7):
        p = ToeplitzParams(a, a, 1.4)
        np.testing.assert_allclose(closed_form_spectrum(p, "swapped").eigenvalues,
                                   closed_form_spectrum(p).eigenvalues, atol=1e-12)


def test_closed_form_rejects_nonpositive():
    with pytest.raises(InvalidParams):
        closed_form_spectrum(ToeplitzParams(0, 1, 1))
    with pytest.raises(InvalidParams):
        spectrum_discrepancy(ToeplitzParams(1, -1, 1))


def test_discrepancy_examples():
    assert spectrum_discrepancy(ToeplitzParams(2, 2, 1)) < 1e-10
    assert spectrum_discrepancy(ToeplitzParams(1, 2, 1)) > 0.1
    for n in (0.3, 1.0, 4.5):
        assert spectrum_discrepancy(ToeplitzParams(1.7, 1.7, n)) < 1e-10


@settings(max_examples=60, deadline=None)
@given(a=st.floats(0.1, 5), b=st.floats(0.1, 5), n=st.floats(0.5, 4), m=st.integers(2, 10))
def test_closed_form_matches_numeric(a, b, n, m):
    p = ToeplitzParams(a, b, n, m)
    scale = max(1.0, p.diagonal + 2 * p.off_diagonal)
    np.testing.assert_allclose(np.sort(closed_form_spectrum(p).eigenvalues), numerical_spectrum(p).eigenvalues,
                               atol=1e-10 * scale)


@settings(max_examples=40, deadline=None)
@given(a=st.floats(-5, 5), b=st.floats(-5, 5), n=st.integers(0, 6))
def test_shift_decomposition(a, b, n):
    p = ToeplitzParams(a, b, n)
    H = build_hamiltonian(p)
    assert np.max(np.abs(H - a**n * np.eye(4) - b**n * shift_matrix(4))) < 1e-12 * max(1, abs(a)**n, abs(b)**n)


def test_is_toeplitz_detector():
    assert is_toeplitz_tridiagonal(build_hamiltonian(ToeplitzParams(2, 3, 1)))
    assert not is_toeplitz_tridiagonal(np.diag([1.0, 2.0, 3.0]))
