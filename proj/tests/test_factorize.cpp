#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "lpnehari/analytic.hpp"
#include "lpnehari/factorize.hpp"
#include "lpnehari/norms.hpp"
#include "lpnehari/symbol.hpp"

using namespace lpnehari;

namespace {

TrigSymbol half_shift_outer() {  // 1 + z/2
    TrigSymbol h = TrigSymbol::monomial(0);
    h.set_coeff(1, 0.5 * CMat::Identity(1, 1));
    return h;
}

TrigSymbol scalar_from(std::initializer_list<std::pair<int, Complex>> terms) {
    TrigSymbol s(1, 1);
    for (const auto& [k, c] : terms) {
        CMat m(1, 1);
        m(0, 0) = c;
        s.set_coeff(k, m);
    }
    return s;
}

}  // namespace

TEST_CASE("badly approximable scalar generator: modulus and distance identities") {
    const CircleGrid grid(256);
    const ExponentTriple e(4.0);
    const TrigSymbol h = half_shift_outer();
    const BadScalar bad = badly_approximable_scalar(e, TrigSymbol::monomial(0), h, grid);

    // closed-form distance: (|h|_{L2}^2)^{1/p} with |h|_{L2}^2 = 1 + 1/4
    const double dist = std::pow(1.25, 0.25);
    CHECK(bad.distance == Catch::Approx(dist).epsilon(1e-12));

    // |phi| = |h|^{2/p} pointwise
    const GridSamples ps = bad.phi.samples(grid), hs = h.samples(grid);
    double worst = 0.0;
    for (int j = 0; j < grid.size(); ++j) {
        const double want = std::pow(std::abs(hs[(std::size_t)j](0, 0)), 2.0 / e.p());
        worst = std::max(worst, std::abs(std::abs(ps[(std::size_t)j](0, 0)) - want));
    }
    CHECK(worst < 1e-10);

    // the L^p norm of phi equals the predicted distance
    CHECK(lebesgue_norm(bad.phi, NormSpec::op(), grid, e.p()) == Catch::Approx(dist).epsilon(1e-10));

    // p = 2 branch: phi = conj(z theta h), distance = |h|_{L2}
    const BadScalar bad2 = badly_approximable_scalar(ExponentTriple(2.0), TrigSymbol::monomial(0), h, grid);
    CHECK(bad2.distance == Catch::Approx(std::sqrt(1.25)).epsilon(1e-12));
    CHECK(bad2.phi.coeff_abs(-1) == Catch::Approx(1.0));
    CHECK(bad2.phi.coeff_abs(-2) == Catch::Approx(0.5));

    // modulus-driven variant with an inner zero
    std::vector<double> omega(grid.size());
    for (int j = 0; j < grid.size(); ++j) omega[(std::size_t)j] = 1.0 + 0.3 * std::cos(grid.angle(j));
    const BadScalar badm =
        badly_approximable_scalar_from_modulus(e, omega, {Complex(0.4, 0.0)}, grid);
    const GridSamples ms = badm.phi.samples(grid);
    double worst_m = 0.0;
    for (int j = 0; j < grid.size(); ++j)
        worst_m = std::max(worst_m, std::abs(std::abs(ms[(std::size_t)j](0, 0)) - omega[(std::size_t)j]));
    CHECK(worst_m < 1e-8);
}

TEST_CASE("spectral factorization recovers the scalar factor 1 + z/2") {
    const CircleGrid grid(128);
    // B = (1 + z/2)^*(1 + z/2) = 5/4 + z/2 + conj(z)/2
    const TrigSymbol B = scalar_from({{0, 1.25}, {1, 0.5}, {-1, 0.5}});
    SpectralFactorOptions tight;
    tight.change_tol = 1e-13;
    const SpectralFactorResult sf = spectral_factor(B, grid, tight);
    CHECK(sf.residual < 1e-11);
    CHECK(std::abs(sf.psi.coeff(0)(0, 0) - Complex(1.0, 0.0)) < 1e-9);
    CHECK(std::abs(sf.psi.coeff(1)(0, 0) - Complex(0.5, 0.0)) < 1e-9);
    CHECK(sf.psi.coeff(0)(0, 0).real() > 0.0);
    CHECK(sf.szego_gap < 1e-9);
    CHECK(sf.min_eig_margin == Catch::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("spectral factorization of a random positive definite matrix symbol") {
    const CircleGrid grid(128);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto rnd = [&](int r, int c) {
        CMat m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
        return m;
    };
    TrigSymbol A(2, 2);
    A.set_coeff(0, CMat::Identity(2, 2));
    A.set_coeff(1, 0.3 * rnd(2, 2));
    A.set_coeff(2, 0.15 * rnd(2, 2));
    const TrigSymbol B = (A.adjoint() * A).trimmed(0.0);

    const SpectralFactorResult sf = spectral_factor(B, grid);
    CHECK(sf.residual < 1e-9);
    CHECK(sf.psi.is_analytic(1e-14));
    CHECK(sf.min_eig_margin > 0.0);
    // log|det psi| is harmonic but its grid quadrature carries a small bias
    CHECK(sf.szego_gap < 1e-5);

    // normalization: psi(0) lower triangular with positive diagonal
    const CMat p0 = sf.psi.coeff(0);
    CHECK(std::abs(p0(0, 1)) < 1e-10);
    CHECK(p0(0, 0).imag() == Catch::Approx(0.0).margin(1e-10));
    CHECK(p0(0, 0).real() > 0.0);
    CHECK(p0(1, 1).imag() == Catch::Approx(0.0).margin(1e-10));
    CHECK(p0(1, 1).real() > 0.0);
}

TEST_CASE("spectral factorization input validation") {
    const CircleGrid grid(64);
    // not Hermitian as a function
    CHECK_THROWS_AS(spectral_factor(scalar_from({{1, 1.0}}), grid), std::invalid_argument);
    // Hermitian but not positive: cos(theta) vanishes and changes sign
    CHECK_THROWS_AS(spectral_factor(scalar_from({{1, 0.5}, {-1, 0.5}}), grid), std::domain_error);
}

TEST_CASE("sarason pair splits a full-rank analytic symbol with the norm-product identity") {
    const CircleGrid grid(256);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    TrigSymbol Psi(2, 2);
    Psi.set_coeff(1, CMat::Identity(2, 2));
    {
        CMat m(2, 2), m2(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                m(i, j) = Complex(gauss(rng), gauss(rng));
                m2(i, j) = Complex(gauss(rng), gauss(rng));
            }
        Psi.set_coeff(2, 0.25 * m);
        Psi.set_coeff(3, 0.1 * m2);
    }

    const SarasonPair pair = sarason_factor(Psi, grid);
    CHECK(pair.defect_R < 1e-8);
    CHECK(pair.defect_Q < 1e-8);
    CHECK(pair.product_residual < 1e-8);
    CHECK(pair.Q.is_analytic(1e-12));
    CHECK(pair.R.is_analytic(1e-12));

    // pointwise: |Psi|_{S1} = |Q|_{S2} |R|_{S2} (trace of the square root twice)
    const GridSamples ps = Psi.samples(grid), qs = pair.Q.samples(grid), rs = pair.R.samples(grid);
    double worst = 0.0;
    for (std::size_t j = 0; j < ps.size(); ++j) {
        const double lhs = pointwise_norm(ps[j], NormSpec::schatten(1.0));
        worst = std::max(worst, std::abs(lhs - qs[j].norm() * rs[j].norm()));
    }
    CHECK(worst < 1e-7);

    // balanced split at p' = 4/3 (p = 4)
    const ExponentTriple e(4.0);
    const FgPair fg = fg_factor(Psi, e, grid);
    CHECK(fg.product_residual < 1e-7);
    CHECK(fg.F.is_analytic(1e-10));
    CHECK(fg.G.is_analytic(1e-10));
    CHECK(fg.norm_identity_gap < 1e-7);
    const GridSamples fs = fg.F.samples(grid), gs = fg.G.samples(grid);
    double worst_fg = 0.0;
    for (std::size_t j = 0; j < ps.size(); ++j) {
        const double lhs = pointwise_norm(ps[j], NormSpec::schatten(1.0));
        worst_fg = std::max(worst_fg, std::abs(lhs - fs[j].norm() * gs[j].norm()));
    }
    CHECK(worst_fg < 1e-7);

    // rank-deficient input is rejected toward the rank-one route
    TrigSymbol rank1(2, 2);
    {
        CMat m = CMat::Zero(2, 2);
        m(0, 0) = 1.0;
        rank1.set_coeff(1, m);
    }
    CHECK_THROWS_AS(sarason_factor(rank1, grid), std::domain_error);
}

TEST_CASE("rank-one factorization extracts balanced analytic columns") {
    const CircleGrid grid(256);
    const ExponentTriple e(4.0);

    // Psi = z * u0 v0^t with analytic u0, v0
    TrigSymbol u0(2, 1), v0(2, 1);
    {
        CMat a(2, 1), b(2, 1), c(2, 1);
        a << Complex(1, 0), Complex(0.2, 0);
        b << Complex(0.4, 0), Complex(0, 0);
        u0.set_coeff(0, a);
        u0.set_coeff(1, b);
        c << Complex(1, 0), Complex(0, 0);
        v0.set_coeff(0, c);
        CMat d2(2, 1);
        d2 << Complex(0, 0), Complex(0.5, 0);
        v0.set_coeff(1, d2);
    }
    const TrigSymbol Psi = (TrigSymbol::monomial(1) * u0 * v0.transpose()).trimmed(0.0);

    const RankOnePair ro = rank_one_factor(Psi, e, grid);
    CHECK(ro.product_residual < 1e-8);
    CHECK(ro.u.is_analytic(1e-10));
    CHECK(ro.v.is_analytic(1e-10));

    // equal pointwise norms: |u| = |v| = |Psi|^{1/2}
    const GridSamples ps = Psi.samples(grid), us = ro.u.samples(grid), vs = ro.v.samples(grid);
    double worst = 0.0;
    for (std::size_t j = 0; j < ps.size(); ++j) {
        const double root = std::sqrt(detail::operator_norm(ps[j]));
        worst = std::max(worst, std::abs(us[j].norm() - root));
        worst = std::max(worst, std::abs(vs[j].norm() - root));
    }
    CHECK(worst < 1e-7);

    // the balanced pair multiplies back and matches the norm identity
    CHECK(ro.norm_identity_gap < 1e-7);
    const GridSamples fs = ro.F.samples(grid), gs = ro.G.samples(grid);
    double worst_prod = 0.0;
    for (std::size_t j = 0; j < ps.size(); ++j)
        worst_prod = std::max(worst_prod, (fs[j] * gs[j] - ps[j]).cwiseAbs().maxCoeff());
    CHECK(worst_prod < 1e-7);

    // full-rank input is rejected
    CHECK_THROWS_AS(rank_one_factor(TrigSymbol::monomial(1) * TrigSymbol::identity(2), e, grid),
                    std::domain_error);
}

TEST_CASE("thematic completion of an analytic unit column") {
    const CircleGrid grid(128);
    TrigSymbol v(2, 1);
    {
        CMat a(2, 1), b(2, 1);
        a << Complex(1.0 / std::sqrt(2.0), 0), Complex(0, 0);
        b << Complex(0, 0), Complex(1.0 / std::sqrt(2.0), 0);
        v.set_coeff(0, a);
        v.set_coeff(1, b);  // v = (1, z)^t / sqrt(2), pointwise unit
    }
    const ThematicResult th = thematic_complete_2(v, grid);
    CHECK(th.unitarity_residual < 1e-12);
    CHECK(th.unit_norm_residual < 1e-12);
    // first column is v itself
    CHECK((th.V.entry(0, 0) - v.entry(0, 0)).max_abs_coeff() < 1e-14);
    CHECK((th.V.entry(1, 0) - v.entry(1, 0)).max_abs_coeff() < 1e-14);
    // determinant is identically one
    const GridSamples Vs = th.V.samples(grid);
    double worst = 0.0;
    for (const CMat& m : Vs) worst = std::max(worst, std::abs(m.determinant() - Complex(1, 0)));
    CHECK(worst < 1e-12);

    CHECK_THROWS_AS(thematic_complete_2(2.0 * v, grid), std::invalid_argument);
}

TEST_CASE("finite scalar sup-norm approximation: singular value oracles") {
    const CircleGrid grid(256);

    // psi = 2 conj(z) + conj(z)^2: top singular value of [[2,1],[1,0]] is 1 + sqrt(2)
    const TrigSymbol psi = scalar_from({{-1, 2.0}, {-2, 1.0}});
    const NehariScalarSolution sol = reduced_nehari_scalar(psi, grid);
    CHECK(sol.error == Catch::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-12));
    CHECK(sol.best.is_analytic(1e-12));
    CHECK(sol.flatness_residual < 1e-9);       // |psi - best| is constant
    CHECK(sol.analytic_residual < 1e-9);

    // pure monomial: best approximant 0, error |c|
    const NehariScalarSolution mono = reduced_nehari_scalar(scalar_from({{-1, Complex(0, 0.7)}}), grid);
    CHECK(mono.error == Catch::Approx(0.7).epsilon(1e-13));
    CHECK(mono.best.max_abs_coeff() < 1e-12);

    // analytic input: nothing to do
    const NehariScalarSolution triv = reduced_nehari_scalar(scalar_from({{0, 1.0}, {1, 3.0}}), grid);
    CHECK(triv.error == 0.0);
    CHECK(triv.best.coeff_abs(1) == Catch::Approx(3.0));

    // a mixed symbol: optimality certified by flatness + analyticity
    const TrigSymbol mixed = scalar_from({{-3, 0.2}, {-1, Complex(0.5, 0.4)}, {0, 1.0}, {2, 0.3}});
    const NehariScalarSolution msol = reduced_nehari_scalar(mixed, grid);
    CHECK(msol.error > 0.0);
    CHECK(msol.best.is_analytic(1e-12));
    CHECK(msol.flatness_residual < 1e-8);
}

TEST_CASE("bundle extraction on a diagonal badly approximable symbol") {
    const CircleGrid grid(256);
    const ExponentTriple e(4.0);
    const TrigSymbol h = half_shift_outer();
    const BadScalar bad = badly_approximable_scalar(e, TrigSymbol::monomial(0), h, grid);

    // Phi = diag(phi, 0); the single-column maximizing vector is (h^{2/q}, 0)^t
    const TrigSymbol Phi = TrigSymbol::block_diag(bad.phi, TrigSymbol(1, 1)).trimmed(0.0);
    const TrigSymbol f = outer_power(h, 2.0 / e.q(), grid).trimmed(1e-14);
    TrigSymbol fcol(2, 1);
    for (int t = f.min_freq(); t <= f.max_freq(); ++t) {
        CMat m = CMat::Zero(2, 1);
        m(0, 0) = f.coeff(t)(0, 0);
        fcol.set_coeff(t, m);
    }

    const FactorizationBundle bundle = extract_bundle_2x2(Phi, TrigSymbol(2, 2), fcol, e, grid);
    CHECK(bundle.offdiag_residual < 1e-9);
    CHECK(bundle.unimodular_residual < 1e-8);
    CHECK(bundle.bound_residual < 1e-9);

    // with outer h the inner directions are the constant basis vectors
    CHECK(bundle.v.coeff_abs(0) == Catch::Approx(1.0).epsilon(1e-8));
    CHECK(bundle.w.coeff_abs(0) == Catch::Approx(1.0).epsilon(1e-8));
    CHECK((bundle.Delta - bad.phi).max_abs_coeff() < 1e-8);
    CHECK(bundle.PhiSharp.max_abs_coeff() < 1e-9);

    // |kappa| = distance profile and |h|^{2/p} = distance profile
    const GridSamples ks = bundle.kappa.samples(grid);
    double worst = 0.0;
    for (int j = 0; j < grid.size(); ++j)
        worst = std::max(worst, std::abs(std::abs(ks[(std::size_t)j](0, 0)) -
                                         bundle.distance_profile[(std::size_t)j]));
    CHECK(worst < 1e-9);

    SECTION("admissible residual blocks parametrize further best approximants") {
        // min |Delta| = min |h|^{1/2} = sqrt(1/2) > 0.5, so RSharp = 0.5 is admissible
        const TrigSymbol half = scalar_from({{0, 0.5}});
        const ParametrizeResult ok = parametrize_best_approximants(Phi, bundle, half, grid);
        REQUIRE(ok.admissible);
        CHECK(ok.R.is_analytic(1e-10));
        // the modified error still has the same L^p norm: pointwise max(|phi|, 0.5) = |phi|
        const double d0 = lebesgue_norm(Phi, NormSpec::op(), grid, e.p());
        const double d1 = lebesgue_norm(Phi - ok.R, NormSpec::op(), grid, e.p());
        CHECK(d1 == Catch::Approx(d0).epsilon(1e-10));

        // too large a block violates the pointwise bound and is rejected
        const ParametrizeResult nope =
            parametrize_best_approximants(Phi, bundle, scalar_from({{0, 1.0}}), grid);
        CHECK_FALSE(nope.admissible);
        CHECK(nope.worst_violation > 0.2);
        CHECK(nope.worst_node >= 0);
    }

    SECTION("generator rebuilds the symbol and rejects oversized residual blocks") {
        const TrigSymbol rebuilt =
            build_badly_approximable_matrix(bundle.Delta, bundle.PhiSharp, bundle.V, bundle.W, grid);
        CHECK((rebuilt - Phi).max_abs_coeff() < 1e-8);
        CHECK_THROWS_AS(build_badly_approximable_matrix(bundle.Delta, scalar_from({{0, 2.0}}), bundle.V,
                                                        bundle.W, grid),
                        std::invalid_argument);
    }
}

TEST_CASE("bundle extraction through nonconstant thematic conjugations") {
    const CircleGrid grid(512);
    const ExponentTriple e(4.0);
    const TrigSymbol h = half_shift_outer();
    const BadScalar bad = badly_approximable_scalar(e, TrigSymbol::monomial(0), h, grid);

    // v = (1, z)^t/sqrt(2), w = (1, z)^t/sqrt(2); Phi = W^* diag(phi, 0) V^*
    TrigSymbol v(2, 1);
    {
        CMat a(2, 1), b(2, 1);
        a << Complex(1.0 / std::sqrt(2.0), 0), Complex(0, 0);
        b << Complex(0, 0), Complex(1.0 / std::sqrt(2.0), 0);
        v.set_coeff(0, a);
        v.set_coeff(1, b);
    }
    const ThematicResult tv = thematic_complete_2(v, grid);
    const TrigSymbol V = tv.V;
    const TrigSymbol W = tv.V.transpose();  // W^t = (v  conj-column)

    const TrigSymbol Phi =
        build_badly_approximable_matrix(bad.phi, TrigSymbol(1, 1), V, W, grid);

    // the transported maximizing vector is v * h^{2/q}
    const TrigSymbol fcol = (v * outer_power(h, 2.0 / e.q(), grid)).trimmed(1e-14);
    const FactorizationBundle bundle = extract_bundle_2x2(Phi, TrigSymbol(2, 2), fcol, e, grid);

    CHECK(bundle.offdiag_residual < 1e-7);
    CHECK(bundle.unimodular_residual < 1e-7);
    CHECK((bundle.Delta - bad.phi).max_abs_coeff() < 1e-7);
    CHECK(bundle.PhiSharp.max_abs_coeff() < 1e-7);

    // recovered inner directions match the generators up to a unimodular constant
    const GridSamples vs = bundle.v.samples(grid), vref = v.samples(grid);
    double worst = 0.0;
    for (std::size_t j = 0; j < vs.size(); ++j) {
        const Complex phase = vref[j](0, 0) / vs[j](0, 0);
        worst = std::max(worst, (vs[j] * phase - vref[j]).cwiseAbs().maxCoeff());
        worst = std::max(worst, std::abs(std::abs(phase) - 1.0));
    }
    CHECK(worst < 1e-7);
}
