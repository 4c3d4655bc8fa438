"""Automorphic layer: pseudo-Eisenstein, Radon, Eisenstein, truncation."""

import math

import numpy as np
import pytest

from seltrace.halfplane import (
    AutomorphicFunction,
    DegenerateParameterError,
    EisensteinSeries,
    HalfPlanePoint,
    TailMissingError,
    boundary_from_model,
    constant_term,
    eisenstein,
    fd_integrate,
    lattice_eisenstein,
    maass_selberg,
    pseudo_eisenstein,
    pseudo_eisenstein_function,
    radon_mellin,
    radon_transform,
    schwartz_boundary,
    truncate,
)
from seltrace.special import PoleError, intertwining_c
from seltrace.torus import AsymptoticallyFiniteFunction, ExponentTerm, log_gaussian_core
from seltrace.util import reduce_to_fundamental_domain

F_STD = schwartz_boundary(0.0, 0.5)
PSI_STD = pseudo_eisenstein_function(F_STD)


class TestHalfPlanePoint:
    def test_validation(self):
        with pytest.raises(ValueError):
            HalfPlanePoint(0.0, -1.0)
        assert HalfPlanePoint(0.25, 2.0).z == 0.25 + 2.0j


class TestPseudoEisenstein:
    def test_gamma_invariance(self):
        z0 = 0.13 + 0.9j
        v = PSI_STD(z0)
        assert abs(v - PSI_STD(z0 + 1.0)) < 1e-8
        assert abs(v - PSI_STD(-1.0 / z0)) < 1e-8

    def test_slow_funnel_profile_warns_or_converges(self):
        # y^2 e^-y decays only quadratically toward the funnel; with an
        # explicit small coset bound the tail estimate must warn
        def fy_model(x):
            x = np.asarray(x, dtype=float)
            y = x**2
            return np.where(y > 0, y**2 * np.exp(-y), 0.0) / np.where(x > 0, x, 1.0)

        f = boundary_from_model(AsymptoticallyFiniteFunction(core=fy_model, tail_decay_hint=2.0))
        from seltrace.halfplane import TruncationWarning

        phi = pseudo_eisenstein_function(f, coset_bound=6)
        with pytest.warns(TruncationWarning):
            phi(0.1 + 1.1j)

    def test_zero_function(self):
        zf = boundary_from_model(AsymptoticallyFiniteFunction())
        assert pseudo_eisenstein(zf, 0.3 + 1.2j) == 0.0

    def test_cusp_asymptote_preserved(self):
        # germ at the cusp passes through the sum unchanged
        m = AsymptoticallyFiniteFunction(
            core=log_gaussian_core(0.0, 0.5, 0.4),
            terms=(ExponentTerm(-0.5, (1.0,), side="infinity", carrier="smooth"),),
        )
        f = boundary_from_model(m)
        phi = pseudo_eisenstein_function(f)
        y = math.exp(6.0)
        coeff = complex(constant_term(phi, y)) / y ** 0.25
        assert abs(coeff - 1.0) < 1e-6
        assert phi.asymptote is not None and abs(phi.asymptote[0] + 0.5) < 1e-12


class TestConstantTerm:
    def test_constant_function(self):
        one = AutomorphicFunction(evaluator=lambda z: np.ones_like(z, dtype=complex))
        assert abs(constant_term(one, 2.3) - 1.0) < 1e-14

    def test_psi_constant_term_is_f_plus_Rf(self):
        y = 1.7
        quad = constant_term(AutomorphicFunction(evaluator=PSI_STD.on_grid), y, n_x=128)
        series = complex(F_STD(y)) + complex(radon_transform(F_STD, y))
        assert abs(quad - series) < 1e-8


class TestRadon:
    def test_rapid_decay_at_cusp(self):
        ys = np.exp(np.array([6.0, 8.0, 10.0, 12.0]))
        vals = np.abs(radon_transform(F_STD, ys)) * ys**5
        assert np.all(np.diff(vals) <= 1e-12) and vals[-1] < 1e-4

    def test_spectral_identity_on_line(self):
        F = F_STD.transform()
        for t in (1.0, 3.0):
            lhs = radon_mellin(F_STD, 1j * t)
            rhs = intertwining_c(-1j * t) * complex(F(-1j * t))
            assert abs(lhs - rhs) < 1e-4

    def test_spectral_identity_convergent_region(self):
        F = F_STD.transform()
        s = -2.0 + 0.3j
        assert abs(radon_mellin(F_STD, s) - intertwining_c(-s) * complex(F(-s))) < 1e-8

    def test_funnel_constant_is_scattering_residue(self):
        # Rf(y -> 0) tends to (6/pi) Fhat(1): the Eisenstein-pole leak
        F = F_STD.transform()
        expect = 6.0 / np.pi * complex(F(1.0))
        got = complex(radon_transform(F_STD, 1e-5))
        assert abs(got - expect) < 1e-8

    def test_zero(self):
        zf = boundary_from_model(AsymptoticallyFiniteFunction())
        assert abs(radon_transform(zf, 2.0)) == 0.0


class TestEisenstein:
    def test_fourier_vs_lattice(self):
        z = 0.2 + 1.3j
        for s in (3.0 + 0j, 2.0 + 0.7j, 4.0 - 1.3j):
            assert abs(eisenstein(s, z) - lattice_eisenstein(s, z)) < 1e-8

    def test_constant_term_formula(self):
        s = 0.4 + 2.0j
        E = EisensteinSeries(s)
        w = 0.5 * (1 + s)
        for y in (1.4, 2.2):
            ct = complex(constant_term(E, y))
            expect = y**w + intertwining_c(s) * y ** (1 - w)
            assert abs(ct - expect) < 1e-6

    def test_functional_equation(self):
        s = 0.3j
        z = 0.17 + 1.05j
        lhs = eisenstein(s, z)
        rhs = intertwining_c(s) * eisenstein(-s, z)
        assert abs(lhs - rhs) < 1e-6

    def test_pole_raises(self):
        with pytest.raises(PoleError):
            eisenstein(1.0, 1j)

    def test_vanishes_at_zero_parameter(self):
        assert eisenstein(0.0, 0.3 + 1.4j) == 0.0


class TestTruncate:
    def test_below_height_identity(self):
        E = EisensteinSeries(2j)
        z = 0.2 + 1.1j
        assert abs(truncate(E, 1.0, z) - complex(E(z))) < 1e-12

    def test_above_height_subtracts_ct(self):
        s = 2j
        E = EisensteinSeries(s)
        T = 0.5
        z = 0.1 + 1j * (math.exp(2 * T) + 1.0)
        w = 0.5 * (1 + s)
        y = z.imag
        expect = complex(E(z)) - (y**w + intertwining_c(s) * y ** (1 - w))
        assert abs(truncate(E, T, z) - expect) < 1e-10

    def test_ms_growth_linear_in_T(self):
        # the truncated norm grows linearly in T per the closed-form relation
        l1, r1, _ = maass_selberg(2j, -2j + 1e-3, 1.0, nx=80, ny=80)
        l2, r2, _ = maass_selberg(2j, -2j + 1e-3, 1.5, nx=80, ny=80)
        assert abs(l1 - r1) < 1e-4 and abs(l2 - r2) < 1e-4
        assert l2.real > l1.real > 0


class TestFdIntegrate:
    def test_volume(self):
        v = fd_integrate(lambda z: np.ones_like(z, dtype=complex), Ymax=50.0, tail=lambda Y: 1.0 / Y)
        assert abs(v - math.pi / 3.0) < 1e-10

    def test_zero(self):
        v = fd_integrate(lambda z: np.zeros_like(z), Ymax=10.0, tail=0.0)
        assert v == 0.0

    def test_tail_missing(self):
        with pytest.raises(TailMissingError):
            fd_integrate(lambda z: np.ones_like(z), Ymax=10.0)


class TestMaassSelberg:
    def test_pure_imaginary_pair(self):
        lhs, rhs, dev = maass_selberg(2j, 3j, 1.5, nx=120, ny=120)
        assert dev < 1e-6

    def test_conjugate_pair_positive(self):
        lhs, rhs, dev = maass_selberg(0.5 + 2j, 0.5 - 2j, 1.0, nx=120, ny=120)
        assert dev < 1e-6
        assert lhs.real >= 0.0 and abs(lhs.imag) < 1e-10

    def test_degenerate_raises(self):
        with pytest.raises(DegenerateParameterError):
            maass_selberg(0.7j, -0.7j, 1.0)


class TestModularReduction:
    def test_reduction(self):
        z = reduce_to_fundamental_domain(0.7 + 0.2j)
        assert abs(z.real) <= 0.5 + 1e-12 and abs(z) >= 1.0 - 1e-12

    def test_invariance_of_psi_under_reduction(self):
        z0 = 3.7 + 0.11j
        zr = reduce_to_fundamental_domain(z0)
        assert abs(PSI_STD(z0) - PSI_STD(zr)) < 1e-8
