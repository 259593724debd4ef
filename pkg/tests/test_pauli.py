import math

import numpy as np
import pytest

from vqaopt.pauli import (
    HermiticityError,
    PauliFormatError,
    PauliSum,
    PauliTerm,
    apply_pauli_sum,
    apply_pauli_term,
    exact_bounds,
    expectation,
    parse_pauli_sum,
)
from vqaopt.simulator import Statevector

from conftest import pauli_string_matrix, pauli_sum_matrix, random_state


def basis_state(bits: str) -> Statevector:
    n = len(bits)
    amps = np.zeros(1 << n, dtype=complex)
    amps[int(bits, 2)] = 1.0
    return Statevector(amps, n)


class TestParse:
    def test_single_term(self):
        obs = parse_pauli_sum("1.0 ZZ", 2)
        assert obs.n_qubits == 2
        assert [(t.coefficient, t.ops) for t in obs.terms] == [(1.0, "ZZ")]

    def test_two_terms_with_comments_and_blanks(self):
        text = "# cut cost for one edge\n0.5 II\n\n-0.5 ZZ  # coupling\n"
        obs = parse_pauli_sum(text, 2)
        assert {t.ops: t.coefficient for t in obs.terms} == {"II": 0.5, "ZZ": -0.5}

    def test_duplicates_merge_to_summed_coefficient(self):
        obs = parse_pauli_sum("1.0 ZZ\n2.0 ZZ", 2)
        assert len(obs.terms) == 1
        assert obs.terms[0].coefficient == 3.0

    @pytest.mark.parametrize(
        "text, fragment",
        [
            ("abc ZZ", "line 1"),
            ("1.0 ZZZ", "line 1"),
            ("1.0 ZQ", "line 1"),
            ("1.0 ZZ\n0.5 ZA", "line 2"),
            ("1.0", "line 1"),
            ("inf ZZ", "line 1"),
        ],
    )
    def test_errors_name_the_line(self, text, fragment):
        with pytest.raises(PauliFormatError, match=fragment):
            parse_pauli_sum(text, 2)

    def test_term_validation(self):
        with pytest.raises(ValueError):
            PauliTerm(float("nan"), "ZZ")
        with pytest.raises(ValueError):
            PauliTerm(1.0, "ZA")
        with pytest.raises(ValueError):
            PauliSum((PauliTerm(1.0, "Z"),), 2)


class TestApply:
    def test_z_on_zero_is_identity(self):
        out = apply_pauli_term(basis_state("0"), PauliTerm(1.0, "Z"))
        np.testing.assert_allclose(out.amplitudes, [1.0, 0.0])

    def test_x_flips(self):
        out = apply_pauli_term(basis_state("0"), PauliTerm(1.0, "X"))
        np.testing.assert_allclose(out.amplitudes, [0.0, 1.0])

    def test_y_flips_with_phase(self):
        out = apply_pauli_term(basis_state("0"), PauliTerm(1.0, "Y"))
        np.testing.assert_allclose(out.amplitudes, [0.0, 1j])

    def test_input_state_unmodified_and_coefficient_scales(self):
        state = basis_state("01")
        before = state.amplitudes.copy()
        out = apply_pauli_term(state, PauliTerm(-2.5, "XI"))
        np.testing.assert_array_equal(state.amplitudes, before)
        np.testing.assert_allclose(out.amplitudes[int("11", 2)], -2.5)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            apply_pauli_term(basis_state("00"), PauliTerm(1.0, "X"))

    def test_matches_dense_oracle_on_random_terms(self, rng):
        for _ in range(25):
            n = int(rng.integers(1, 5))
            ops = "".join(rng.choice(list("IXYZ"), size=n))
            coeff = float(rng.normal())
            psi = random_state(rng, n)
            term = PauliTerm(coeff, ops)
            got = apply_pauli_term(Statevector(psi, n), term).amplitudes
            want = coeff * pauli_string_matrix(ops) @ psi
            np.testing.assert_allclose(got, want, atol=1e-13)

    def test_self_inverse_involution(self, rng):
        for _ in range(10):
            n = int(rng.integers(1, 5))
            ops = "".join(rng.choice(list("IXYZ"), size=n))
            psi = random_state(rng, n)
            term = PauliTerm(1.0, ops)
            twice = apply_pauli_term(apply_pauli_term(Statevector(psi, n), term), term)
            np.testing.assert_allclose(twice.amplitudes, psi, atol=1e-13)


class TestExpectation:
    def test_computational_eigenstates(self):
        zz = PauliSum((PauliTerm(1.0, "ZZ"),), 2)
        assert expectation(basis_state("00"), zz) == pytest.approx(1.0)
        assert expectation(basis_state("01"), zz) == pytest.approx(-1.0)

    def test_bell_state_xx(self):
        # direct 4-amplitude computation: XX swaps |00> and |11>, leaving the
        # Bell state invariant, so the expectation is exactly 1.
        amps = np.zeros(4, dtype=complex)
        amps[0] = amps[3] = 1 / math.sqrt(2)
        xx = PauliSum((PauliTerm(1.0, "XX"),), 2)
        assert expectation(Statevector(amps, 2), xx) == pytest.approx(1.0, abs=1e-12)

    def test_linearity_in_observable(self, rng):
        for _ in range(10):
            n = int(rng.integers(1, 4))
            psi = Statevector(random_state(rng, n), n)

            def rand_sum():
                terms = tuple(
                    PauliTerm(float(rng.normal()), "".join(rng.choice(list("IXYZ"), size=n)))
                    for _ in range(3)
                )
                return PauliSum(terms, n)

            o1, o2 = rand_sum(), rand_sum()
            a, b = float(rng.normal()), float(rng.normal())
            combined = PauliSum(
                tuple(PauliTerm(a * t.coefficient, t.ops) for t in o1.terms)
                + tuple(PauliTerm(b * t.coefficient, t.ops) for t in o2.terms),
                n,
            )
            lhs = expectation(psi, combined)
            rhs = a * expectation(psi, o1) + b * expectation(psi, o2)
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_invariant_under_ordering_and_duplication(self, rng):
        n = 3
        psi = Statevector(random_state(rng, n), n)
        terms = [PauliTerm(0.3, "ZIZ"), PauliTerm(-1.2, "XYI"), PauliTerm(0.7, "IIZ")]
        forward = PauliSum(tuple(terms), n)
        shuffled = PauliSum(tuple(terms[::-1]), n)
        split = PauliSum(
            tuple(terms) + tuple(PauliTerm(0.0, t.ops) for t in terms), n
        )
        e = expectation(psi, forward)
        assert expectation(psi, shuffled) == pytest.approx(e, abs=1e-14)
        assert expectation(psi, split) == pytest.approx(e, abs=1e-14)

    def test_matches_dense_oracle(self, rng):
        for _ in range(10):
            n = int(rng.integers(1, 5))
            terms = tuple(
                PauliTerm(float(rng.normal()), "".join(rng.choice(list("IXYZ"), size=n)))
                for _ in range(4)
            )
            obs = PauliSum(terms, n)
            psi = random_state(rng, n)
            want = np.vdot(psi, pauli_sum_matrix(obs) @ psi).real
            assert expectation(Statevector(psi, n), obs) == pytest.approx(want, abs=1e-12)

    def test_hermiticity_guard(self):
        obs = PauliSum((PauliTerm(1.0, "Z"),), 1)
        # pre-seed the fused-group cache with a corrupted (anti-Hermitian) weight
        obs.__dict__["_flip_groups"] = [(0, 1j * np.ones(2))]
        with pytest.raises(HermiticityError):
            expectation(basis_state("0"), obs)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            expectation(basis_state("0"), PauliSum((PauliTerm(1.0, "ZZ"),), 2))


class TestExactBounds:
    def test_zz_spectrum(self):
        assert exact_bounds(PauliSum((PauliTerm(1.0, "ZZ"),), 2)) == (-1.0, 1.0)

    def test_single_edge_cut_cost(self):
        # -1/2 (1 - ZZ): enumeration over the four basis states gives {0, -1}
        obs = PauliSum((PauliTerm(-0.5, "II"), PauliTerm(0.5, "ZZ")), 2)
        energies = [
            sum(t.coefficient * pauli_string_matrix(t.ops)[b, b].real for t in obs.terms)
            for b in range(4)
        ]
        assert exact_bounds(obs) == (min(energies), max(energies)) == (-1.0, 0.0)

    def test_pauli_x_dense_path(self):
        assert exact_bounds(PauliSum((PauliTerm(1.0, "X"),), 1)) == pytest.approx((-1.0, 1.0))

    def test_matches_dense_oracle_nondiagonal(self, rng):
        for _ in range(5):
            n = int(rng.integers(1, 4))
            terms = tuple(
                PauliTerm(float(rng.normal()), "".join(rng.choice(list("IXYZ"), size=n)))
                for _ in range(4)
            )
            obs = PauliSum(terms, n)
            eig = np.linalg.eigvalsh(pauli_sum_matrix(obs))
            lo, hi = exact_bounds(obs)
            assert lo == pytest.approx(eig[0], abs=1e-10)
            assert hi == pytest.approx(eig[-1], abs=1e-10)

    def test_budget(self):
        obs = PauliSum((PauliTerm(1.0, "Z" * 15),), 15)
        with pytest.raises(ValueError, match="14"):
            exact_bounds(obs)

    def test_diagonal_expectations_stay_in_bounds(self, rng):
        for _ in range(10):
            n = int(rng.integers(1, 5))
            terms = tuple(
                PauliTerm(float(rng.normal()), "".join(rng.choice(list("IZ"), size=n)))
                for _ in range(3)
            )
            obs = PauliSum(terms, n)
            lo, hi = exact_bounds(obs)
            value = expectation(Statevector(random_state(rng, n), n), obs)
            assert lo - 1e-10 <= value <= hi + 1e-10
