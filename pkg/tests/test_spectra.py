import numpy as np
import pytest

from lmcflab import spectra
from lmcflab.spectra import (PlaneLink, TorusLink, harvey_lawson_t2_link,
                             link_spectrum, degree_of, drift_mode,
                             radial_drift_eigenvalue, static_basis,
                             stability_check, three_annulus_elliptic,
                             annulus_norm_sq, line_union, two_plane_cone)
from lmcflab.errors import ParameterError
from lmcflab import driftheat


def test_circle_link_spectrum():
    spec = link_spectrum(PlaneLink(2), mu_max=20.0)
    expect = {0.0: 1, 1.0: 2, 4.0: 2, 9.0: 2, 16.0: 2}
    got = dict(zip(spec.mu.tolist(), spec.multiplicity.tolist()))
    assert got == expect


def test_sphere_link_spectrum():
    spec = link_spectrum(PlaneLink(3), mu_max=30.0)
    for mu, mult in zip(spec.mu, spec.multiplicity):
        k = degree_of(mu, 3)
        assert abs(k - round(k)) < 1e-12
        assert mult == 2 * round(k) + 1


def test_two_components_give_double_kernel():
    spec = link_spectrum([PlaneLink(3), PlaneLink(3)])
    assert spec.mu[0] == 0.0 and spec.multiplicity[0] == 2


def test_unsupported_descriptor_lists_supported():
    with pytest.raises(ParameterError) as err:
        link_spectrum("octahedron")
    assert "PlaneLink" in str(err.value)


def test_degree_of_examples_and_roundtrip():
    assert degree_of(0.0, 3) == 0.0
    assert abs(degree_of(2.0, 3) - 1.0) < 1e-14
    assert abs(degree_of(6.0, 3) - 2.0) < 1e-14
    for k in range(1, 7):
        assert abs(degree_of(k * k, 2) - k) < 1e-12
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = rng.integers(2, 6)
        d = rng.uniform(0.0, 8.0)
        mu = d * (d + n - 2)
        assert abs(degree_of(mu, n) - d) < 1e-12


def test_drift_mode_growth_factors():
    assert drift_mode(2.0).growth_exponent == 0.0       # static
    assert drift_mode(1.0).growth_exponent == 0.5       # translation mode
    assert drift_mode(4.0).eigenvalue == -2.0
    assert drift_mode(3.0).eigenvalue + 1.5 == 0.0      # lambda = -d/2


@pytest.mark.parametrize("d", [0.0, 1.0, 2.0, 3.0, 4.0])
def test_radial_ode_cross_check(d):
    mu = d * (d + 1.0)           # link eigenvalue on S^2
    lam = radial_drift_eigenvalue(mu, n=3, rmax=12.0)
    assert abs(lam - (-d / 2.0)) < 1e-6


def test_static_basis_dimension_and_static_evolution():
    cone = line_union([0.0])
    cone3 = two_plane_cone(np.array([np.pi / 3] * 3))
    basis1 = static_basis(spectra.PlaneUnionCone(
        [spectra.PlaneComponent(np.zeros(3))]))
    assert len(basis1) == 3 * 4 // 2 - 1 + 1   # n(n+1)/2 - 1 harmonics + r^2
    basis2 = static_basis(cone3)
    assert len(basis2) == 2 * len(basis1)      # per-component union
    # every element is a degree-2 drift mode: exactly static under evolve
    for el in basis2:
        exp_ = driftheat.ModeExpansion(3, [driftheat.ModeEntry(el.degree(),
                                                               1.0)])
        ev = driftheat.evolve(exp_, 7.3)
        assert abs(ev.entries[0].coeff - 1.0) < 1e-12


def test_plane_is_stable():
    rep = stability_check(PlaneLink(3))
    assert rep.is_stable, rep.offending_degrees


def test_harvey_lawson_torus_is_stable():
    link = harvey_lawson_t2_link()
    spec = link_spectrum(link, mu_max=10.0)
    # lattice oracle: mu = k^T [[2,-1],[-1,2]] k gives 0, 2, 6, 8 with
    # multiplicities 1, 6, 6, 6
    got = {float(m): int(c) for m, c in zip(spec.mu, spec.multiplicity)}
    assert got[0.0] == 1 and got[2.0] == 6 and got[6.0] == 6
    rep = stability_check(link)
    assert rep.is_stable, rep.offending_degrees
    assert rep.expected == {0.0: 1, 1.0: 6, 2.0: 6}


def test_stretched_torus_is_unstable():
    stretched = TorusLink(np.array([[2.0, 1.0], [1.0, 2.0]]) / 3.0
                          * np.array([[9.0, 3.0], [3.0, 1.0]]),
                          coordinate_span=6, su_stabilizer_dim=2)
    rep = stability_check(stretched)
    assert not rep.is_stable
    assert rep.offending_degrees


def test_single_mode_annulus_ratio_matches_homogeneity():
    rng = np.random.default_rng(4)
    for _ in range(20):
        n = rng.integers(2, 5)
        e = rng.uniform(-2.0, 3.0)
        rho0 = rng.uniform(0.2, 0.8)
        norms = [np.sqrt(annulus_norm_sq([(e, 1.0)], n, rho0 ** k,
                                         rho0 ** (k + 1)))
                 for k in range(3)]
        for k in range(2):
            assert abs(norms[k + 1] / norms[k] - rho0 ** (e + n / 2.0)) \
                < 1e-12


def test_elliptic_clauses_single_mode():
    # degree above d: the norm shrinks inward faster than the rho^{d+n/2}
    # threshold, landing in the decay clause; degree below d lands in the
    # growth clause
    rep = three_annulus_elliptic([(1.5, 1.0)], rho0=0.5, d=1.0, lam1=0.1,
                                 lam2=0.2, n=3)
    assert rep.decay_hypothesis and rep.decay_conclusion
    assert not rep.growth_hypothesis
    rep = three_annulus_elliptic([(0.25, 1.0)], rho0=0.5, d=1.0, lam1=0.1,
                                 lam2=0.2, n=3)
    assert rep.growth_hypothesis and rep.growth_conclusion
    assert not rep.violations()


def test_elliptic_dichotomy_randomized():
    rng = np.random.default_rng(9)
    n = 3
    checked = 0
    for _ in range(500):
        d = rng.uniform(-1.0, 2.0)
        e_lo = d - rng.uniform(0.3, 1.5)
        e_hi = d + rng.uniform(0.3, 1.5)
        gap = min(d - e_lo, e_hi - d)
        lam2 = 0.45 * gap
        lam1 = 0.5 * lam2
        # per-step admissibility improves as rho0 shrinks (the lemma picks
        # rho0 after the lambdas); 0.1 is comfortable for these gaps
        rho0 = 0.1
        coeffs = rng.uniform(0.01, 1.0, 2)
        rep = three_annulus_elliptic([(e_lo, coeffs[0]), (e_hi, coeffs[1])],
                                     rho0, d, lam1, lam2, n)
        assert not rep.violations(), (d, e_lo, e_hi, rho0)
        if rep.dichotomy_asserted:
            checked += 1
            assert rep.dichotomy_holds
    assert checked > 400


def test_mode_at_degree_d_not_asserted():
    rep = three_annulus_elliptic([(1.0, 1.0)], rho0=0.3, d=1.0, lam1=0.05,
                                 lam2=0.1, n=3)
    assert rep.has_degree_d and not rep.dichotomy_asserted


def test_empty_mode_list_rejected():
    with pytest.raises(ParameterError):
        three_annulus_elliptic([], 0.5, 1.0, 0.1, 0.2, 3)
