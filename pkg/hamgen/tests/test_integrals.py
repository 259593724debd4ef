"""Integral engine checks against closed forms and textbook reference values."""

import math

import numpy as np
import pytest

from hamgen.basis import Molecule, _1S_COEFS, _1S_EXPS, _2P_COEFS, _2S_COEFS, _2SP_EXPS, _contract, atom_basis
from hamgen.integrals import (
    boys_array,
    eri_tensor,
    kinetic_matrix,
    nuclear_matrix,
    overlap_matrix,
    primitive_eri,
    primitive_overlap,
)

ORIGIN = (0.0, 0.0, 0.0)


class TestBoys:
    def test_zero_limit(self):
        np.testing.assert_allclose(boys_array(3, 0.0), [1.0, 1 / 3, 1 / 5, 1 / 7])

    def test_f0_closed_form(self):
        for x in (0.1, 1.0, 7.5):
            want = 0.5 * math.sqrt(math.pi / x) * math.erf(math.sqrt(x))
            assert boys_array(0, x)[0] == pytest.approx(want, rel=1e-12)

    def test_downward_recursion(self):
        # F_{n+1} = ((2n+1) F_n - exp(-x)) / (2x)
        x = 2.3
        f = boys_array(4, x)
        for n in range(4):
            want = ((2 * n + 1) * f[n] - math.exp(-x)) / (2 * x)
            assert f[n + 1] == pytest.approx(want, rel=1e-10)


class TestPrimitives:
    def test_gaussian_self_repulsion_closed_form(self):
        # normalized s Gaussian: (ss|ss) = sqrt(4 alpha / pi); cross-checked by
        # radial quadrature of the double integral (inner-outer split counts
        # each pair once, so the full integral is twice the cumulative sum).
        alpha = 0.8
        norm = (2 * alpha / math.pi) ** 0.75
        value = norm**4 * primitive_eri(
            alpha, ORIGIN, (0, 0, 0), alpha, ORIGIN, (0, 0, 0),
            alpha, ORIGIN, (0, 0, 0), alpha, ORIGIN, (0, 0, 0),
        )
        assert value == pytest.approx(math.sqrt(4 * alpha / math.pi), rel=1e-12)
        r = np.linspace(1e-6, 30, 400_000)
        density = (2 * alpha / math.pi) ** 1.5 * np.exp(-2 * alpha * r**2)
        shell = density * 4 * math.pi * r**2
        cumulative = np.cumsum(shell) * (r[1] - r[0])
        energy = 2.0 * np.sum(shell * cumulative / r) * (r[1] - r[0])
        assert value == pytest.approx(energy, rel=1e-4)

    def test_overlap_translation_invariance(self):
        a, b = 1.3, 0.4
        for shift in ((0.0, 0.0, 0.0), (1.0, -2.0, 0.5)):
            s1 = primitive_overlap(a, shift, (0, 0, 0), b, (shift[0] + 1.1, shift[1], shift[2]), (0, 0, 0))
            s2 = primitive_overlap(a, ORIGIN, (0, 0, 0), b, (1.1, 0.0, 0.0), (0, 0, 0))
            assert s1 == pytest.approx(s2, rel=1e-12)


@pytest.fixture(scope="module")
def h2():
    exps = np.array([2.227660584, 0.405771156, 0.109818026]) * 1.24**2
    coefs = np.array([0.154328967, 0.535328142, 0.444634542])
    centers = (ORIGIN, (0.0, 0.0, 1.4))
    basis = [_contract(c, (0, 0, 0), exps, coefs) for c in centers]
    molecule = Molecule(("H", "H"), centers)
    return basis, molecule


class TestTextbookAnchors:
    """Szabo & Ostlund H2/STO-3G values at R = 1.4 bohr."""

    def test_overlap(self, h2):
        basis, _ = h2
        assert overlap_matrix(basis)[0, 1] == pytest.approx(0.6593, abs=2e-4)

    def test_kinetic(self, h2):
        basis, _ = h2
        t = kinetic_matrix(basis)
        assert t[0, 0] == pytest.approx(0.7600, abs=2e-4)
        assert t[0, 1] == pytest.approx(0.2365, abs=2e-4)

    def test_nuclear(self, h2):
        basis, molecule = h2
        v = nuclear_matrix(basis, molecule)
        assert v[0, 0] == pytest.approx(-1.8804, abs=2e-4)

    def test_eri(self, h2):
        basis, _ = h2
        eri = eri_tensor(basis)
        assert eri[0, 0, 0, 0] == pytest.approx(0.7746, abs=2e-4)
        assert eri[0, 0, 1, 1] == pytest.approx(0.5697, abs=2e-4)
        assert eri[1, 0, 0, 0] == pytest.approx(0.4441, abs=2e-4)
        assert eri[1, 0, 1, 0] == pytest.approx(0.2970, abs=2e-4)


class TestBasisData:
    def test_fit_overlap_with_slater_orbitals(self):
        # radial quadrature of <STO(zeta=1)|fit>; the 6-Gaussian fits are tight
        r = np.linspace(1e-8, 40, 600_000)
        dr = r[1] - r[0]

        def radial(exps, coefs, lmn_power):
            # lmn_power: 0 for s, 1 for p (one Cartesian factor)
            from hamgen.basis import primitive_norm

            lmn = (lmn_power, 0, 0)
            vals = sum(
                c * primitive_norm(a, lmn) * np.exp(-a * r**2) for c, a in zip(coefs, exps)
            )
            return vals * r**lmn_power

        sto_1s = 2.0 * np.exp(-r)  # normalized radial part, zeta = 1
        fit_1s = radial(_1S_EXPS, _1S_COEFS, 0)
        overlap_1s = np.sum(sto_1s * fit_1s * r**2) * dr * math.sqrt(4 * math.pi) / math.sqrt(4 * math.pi)
        # angular parts are identical; normalize the quadrature instead
        norm_fit = np.sum(fit_1s**2 * r**2) * dr
        norm_sto = np.sum((sto_1s) ** 2 * r**2) * dr
        assert overlap_1s / math.sqrt(norm_fit * norm_sto) > 0.9999

        # Slater 2s/2p at zeta = 1: radial part proportional to r * exp(-r)
        sto_2s = r * np.exp(-r)
        fit_2s = radial(_2SP_EXPS, _2S_COEFS, 0)
        ov = np.sum(sto_2s * fit_2s * r**2) * dr
        ov /= math.sqrt(np.sum(sto_2s**2 * r**2) * dr * np.sum(fit_2s**2 * r**2) * dr)
        assert ov > 0.995

        sto_2p = np.exp(-r)  # one Cartesian factor already stripped below
        fit_2p = radial(_2SP_EXPS, _2P_COEFS, 1) / r
        ov = np.sum(sto_2p * fit_2p * r**4) * dr
        ov /= math.sqrt(np.sum(sto_2p**2 * r**4) * dr * np.sum((fit_2p) ** 2 * r**4) * dr)
        assert ov > 0.999

    def test_hydrogenic_energy_of_unit_zeta_fit(self):
        f = _contract(ORIGIN, (0, 0, 0), _1S_EXPS, _1S_COEFS)
        molecule = Molecule(("H",), (ORIGIN,))
        energy = kinetic_matrix([f])[0, 0] + nuclear_matrix([f], molecule)[0, 0]
        assert energy == pytest.approx(-0.5, abs=3e-4)

    def test_atom_basis_orthonormal_where_expected(self):
        basis = atom_basis("O", ORIGIN)
        s = overlap_matrix(basis)
        np.testing.assert_allclose(np.diag(s), np.ones(5), atol=1e-12)
        # p functions are orthogonal to everything on-site except themselves
        for i in range(2, 5):
            for j in range(5):
                if i != j:
                    assert abs(s[i, j]) < 1e-12
