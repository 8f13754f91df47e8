// Acceptance gate: ten end-to-end checks of the library's headline claims,
// each printed as a single pass/fail line with its key measurements.  Every
// tolerance is pinned here as a named constant; a red line means the claim
// is not met at that tolerance, never that the check was relaxed.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lpnehari/analytic.hpp"
#include "lpnehari/approx.hpp"
#include "lpnehari/factorize.hpp"
#include "lpnehari/hankel.hpp"
#include "lpnehari/norms.hpp"
#include "lpnehari/superopt.hpp"
#include "lpnehari/weird.hpp"

using namespace lpnehari;

namespace {

// --- pinned tolerances -------------------------------------------------
constexpr double kScalarIdentityRel = 1e-3;     // crit 1: primal/dual vs closed form
constexpr double kScalarPlateauRel = 1e-2;      // crit 1: single-column value vs closed form
constexpr double kRoundTripRel = 1e-3;          // crit 2: certified distance vs recipe
constexpr double kRoundTripModulus = 1e-6;      // crit 2: |phi| vs |h|^{2/p}
constexpr double kControlDistanceAbs = 1e-4;    // crit 3: certified distance vs 1
constexpr double kProfileAgreement = 1e-6;      // crit 3: distance profiles across approximants
constexpr double kUnitaryResidual = 1e-8;       // crit 4: U*U - I
constexpr double kDualVanishing = 1e-8;         // crit 4: A U^{-1} analytic, vanishing at 0
constexpr double kWeirdDistanceAbs = 1e-3;      // crit 4: certified distance vs 1
constexpr double kTwoColumnFloor = 0.99;        // crit 4: two-column search must reach this
constexpr double kOneColumnCeiling = 0.999;     // crit 4: one-column plateau must stay below
constexpr double kReassembly = 1e-7;            // crit 5: factor products vs the symbol
constexpr double kNormProductRel = 1e-6;        // crit 5: S1 = S2 * S2 pointwise
constexpr double kEqualityNodeTol = 1e-8;       // crit 5: S1 ~ S2 detection
constexpr double kRankOracleSigma2 = 1e-6;      // crit 5: sigma_2 at equality nodes
constexpr double kBauerOracle = 1e-7;           // crit 6: recovered coefficients
constexpr double kBauerResidual = 1e-8;         // crit 6: Psi*Psi - B on random input
constexpr double kMatrixGenRel = 1e-3;          // crit 7: certified distance vs L^p norm
constexpr double kAakOracleAbs = 1e-10;         // crit 8: 2/z + 1/z^2 error vs 1 + sqrt 2
constexpr double kRatioStddevRel = 1e-2;        // crit 9: first ratio profile flatness
constexpr double kTauMatchAbs = 1e-2;           // crit 9: tau levels vs reduced error
constexpr double kParsevalRel = 1e-12;          // crit 10
constexpr double kHolderSlack = 1e-12;          // crit 10
constexpr double kWeakDualitySlack = 1e-9;      // crit 10
constexpr double kInvarianceRel = 2e-3;         // crit 10: homogeneity/translation

struct Check {
    bool ok = true;
    std::string why;
    std::string info;

    void expect(bool cond, const std::string& what) {
        if (cond) return;
        if (!ok) why += "; ";
        ok = false;
        why += what;
    }
    void expect_close(double got, double want, double tol, const std::string& what) {
        std::ostringstream s;
        s << what << ": got " << got << ", want " << want << " +- " << tol;
        expect(std::abs(got - want) <= tol, s.str());
    }
    void expect_le(double got, double bound, const std::string& what) {
        std::ostringstream s;
        s << what << ": got " << got << " > " << bound;
        expect(got <= bound, s.str());
    }
};

std::vector<ApproximationCertificate> g_certs;  // weak-duality registry (crit 10)

void note(const ApproximationCertificate& c) { g_certs.push_back(c); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

TrigSymbol scalar_coeffs(std::initializer_list<std::pair<int, Complex>> cs) {
    TrigSymbol s(1, 1);
    for (const auto& [k, c] : cs) s.set_coeff(k, (CMat(1, 1) << c).finished());
    return s;
}

CMat random_matrix(std::mt19937_64& rng, int r, int c, double scale) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    CMat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = scale * Complex(d(rng), d(rng));
    return m;
}

CertifyOptions ladder(std::vector<int> degrees) {
    CertifyOptions c;
    c.degrees = std::move(degrees);
    return c;
}

// --- criterion 1: scalar distance identity ------------------------------

void criterion_scalar_identity(Check& c) {
    const CircleGrid grid(512);
    const ExponentTriple e(4.0);
    const TrigSymbol h = scalar_coeffs({{0, 1.0}, {1, 0.5}});
    const BadScalar bad = badly_approximable_scalar(e, TrigSymbol::monomial(0), h, grid);
    const double oracle = std::pow(1.25, 0.25);
    c.expect_close(bad.distance, oracle, 1e-12, "closed-form distance");

    const ApproximationCertificate cert = certify(bad.phi, e, grid, ladder({8, 16, 32}));
    note(cert);
    c.expect_le(std::abs(cert.primal_value - oracle) / oracle, kScalarIdentityRel, "primal vs closed form");
    c.expect_le(std::abs(cert.dual_value - oracle) / oracle, kScalarIdentityRel, "dual vs closed form");

    NormSearchOptions s;
    s.restarts = 8;
    s.upper_bound = oracle;
    const NormSearchReport rep = hankel_norm_lower_bound(build_hankel(bad.phi, 1, 32, -1, e, grid), s);
    c.expect_le(std::abs(rep.best_value - oracle) / oracle, kScalarPlateauRel, "single-column value vs closed form");
    c.info = "primal " + fmt(cert.primal_value) + ", dual " + fmt(cert.dual_value) + ", search " +
             fmt(rep.best_value);
}

// --- criterion 2: generator round trip ----------------------------------

void criterion_round_trip(Check& c) {
    const CircleGrid grid(512);
    std::mt19937_64 rng(20260814ULL);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double ps[5] = {2.5, 3.0, 4.0, 5.0, 6.0};
    const int nzeros[5] = {0, 1, 2, 1, 2};
    double worst_rel = 0.0, worst_mod = 0.0;

    for (int i = 0; i < 5; ++i) {
        const ExponentTriple e(ps[i]);
        // outer polynomial of degree <= 3: roots kept outside the disk
        TrigSymbol h = TrigSymbol::monomial(0, Complex(0.6 + uni(rng), 0.0));
        const int dh = 1 + i % 3;
        for (int r = 0; r < dh; ++r) {
            const Complex root = std::polar(1.4 + 1.2 * uni(rng), 2.0 * M_PI * uni(rng));
            h = h * scalar_coeffs({{0, 1.0}, {1, -1.0 / root}});
        }
        std::vector<Complex> zeros;
        for (int z = 0; z < nzeros[i]; ++z) zeros.push_back(std::polar(0.1 + 0.5 * uni(rng), 2.0 * M_PI * uni(rng)));
        const TrigSymbol theta = zeros.empty() ? TrigSymbol::monomial(0) : blaschke(zeros, grid, 120).symbol;

        const BadScalar bad = badly_approximable_scalar(e, theta, h, grid);
        const double oracle = std::pow(h.l2_norm(), 2.0 / e.p());
        c.expect_close(bad.distance, oracle, 1e-10 * oracle, "recipe distance vs Parseval");

        const ApproximationCertificate cert = certify(bad.phi, e, grid, ladder({8, 16, 32}));
        note(cert);
        const double rel =
            std::max(std::abs(cert.primal_value - oracle), std::abs(cert.dual_value - oracle)) / oracle;
        worst_rel = std::max(worst_rel, rel);
        std::ostringstream label;
        label << "recipe " << i << " (p = " << ps[i] << ") certified distance";
        c.expect_le(rel, kRoundTripRel, label.str());

        const GridSamples fs = bad.phi.samples(grid), hs = h.samples(grid);
        double mod = 0.0;
        for (std::size_t j = 0; j < fs.size(); ++j)
            mod = std::max(mod,
                           std::abs(std::abs(fs[j](0, 0)) - std::pow(std::abs(hs[j](0, 0)), 2.0 / e.p())));
        worst_mod = std::max(worst_mod, mod);
        c.expect_le(mod, kRoundTripModulus, label.str() + " modulus reproduction");
    }
    c.info = "worst rel " + fmt(worst_rel) + ", worst modulus dev " + fmt(worst_mod);
}

// --- criterion 3: respectable control case ------------------------------

void criterion_respectable_control(Check& c) {
    const CircleGrid grid(512);
    const ExponentTriple e(4.0);
    TrigSymbol Phi(2, 2);
    {
        CMat m = CMat::Zero(2, 2);
        m(0, 0) = 1.0;
        Phi.set_coeff(-1, m);  // diag(conj z, 0)
    }

    ClassificationOptions copt;
    copt.search.restarts = 12;
    copt.cert = ladder({8, 16, 32});
    const RespectabilityReport rr = respectability_test(Phi, e, grid, copt);
    note(rr.cert);
    c.expect(rr.verdict == Respectability::Respectable, "verdict is not respectable");
    c.expect_close(rr.cert.primal_value, 1.0, kControlDistanceAbs, "certified primal");
    c.expect_close(rr.cert.dual_value, 1.0, kControlDistanceAbs, "certified dual");

    // the distance profile does not depend on which best approximant is used
    TrigSymbol Q2(2, 2);
    {
        CMat m = CMat::Zero(2, 2);
        m(1, 1) = 0.5;
        Q2.set_coeff(1, m);  // diag(0, z/2)
    }
    const std::vector<double> d0 = distance_function(Phi, TrigSymbol(2, 2), grid);
    const std::vector<double> d1 = distance_function(Phi, Q2, grid);
    double dev = 0.0;
    for (std::size_t j = 0; j < d0.size(); ++j) dev = std::max(dev, std::abs(d0[j] - d1[j]));
    c.expect_le(dev, kProfileAgreement, "distance profiles across approximants");

    const OrderReport orr = order_estimate(Phi, e, grid, copt);
    note(orr.cert);
    c.expect(orr.order == 1, "order is " + std::to_string(orr.order) + ", want 1");
    c.info = "distance " + fmt(rr.cert.primal_value) + ", profile dev " + fmt(dev) + ", order " +
             std::to_string(orr.order);
}

// --- criterion 4: the weird demonstration -------------------------------

void criterion_weird_demo(Check& c) {
    const CircleGrid grid(512);
    const ExponentTriple e(4.0);
    const WeirdRecipe recipe = default_weird_recipe(grid);
    const WeirdConstruction wc = construct_weird_U(recipe.B, grid, 96);
    c.expect_le(wc.unitary_residual, kUnitaryResidual, "U*U - I");

    const TrigSymbol AUinv = (wc.A * wc.U.adjoint()).trimmed(1e-16);
    c.expect_le(AUinv.analytic_vanishing_residual() + wc.unitary_residual, kDualVanishing,
                "A U^{-1} analyticity and vanishing at 0");

    const WeirdDistanceEvidence ev = badly_approximable_evidence(wc, e, grid, ladder({8, 16, 32, 64}));
    note(ev.cert);
    c.expect_close(ev.cert.primal_value, 1.0, kWeirdDistanceAbs, "certified primal");
    c.expect_close(ev.cert.dual_value, 1.0, kWeirdDistanceAbs, "certified dual");

    WeirdnessOptions wo;
    wo.degrees = {16, 32, 64};
    wo.search.restarts = 20;
    wo.distance = 1.0;
    const WeirdnessEvidence we = weirdness_evidence(wc, e, grid, wo);
    c.expect_le(-we.best_k2, -kTwoColumnFloor, "two-column search value");
    for (std::size_t d = 0; d < we.k1_values.size(); ++d)
        c.expect_le(we.k1_values[d], kOneColumnCeiling,
                    "one-column plateau at degree " + std::to_string(wo.degrees[d]));

    ClassificationOptions oopt;
    oopt.window_degrees = {32};
    oopt.search.restarts = 16;
    oopt.tol_match = 2e-3;  // sharper than the measured one-column shortfall
    oopt.cert = ladder({8, 16, 32, 64});
    const OrderReport orr = order_estimate(wc.U, e, grid, oopt);
    note(orr.cert);
    c.expect(orr.order == 2, "order is " + std::to_string(orr.order) + ", want 2");
    c.info = "margin " + fmt(we.k1_gap) + ", k2 " + fmt(we.best_k2) + ", order " + std::to_string(orr.order);
}

// --- criterion 5: trace-norm factorizations ------------------------------

void rank_oracle(Check& c, const TrigSymbol& Psi, const CircleGrid& grid, const std::string& label) {
    const GridSamples ps = Psi.samples(grid);
    for (std::size_t j = 0; j < ps.size(); ++j) {
        const Eigen::VectorXd s = detail::singular_values(ps[j]);
        const double S1 = s.sum(), S2 = s.norm();
        if (std::abs(S1 - S2) <= kEqualityNodeTol * std::max(1.0, S1))
            c.expect_le(s.size() > 1 ? s(1) : 0.0, kRankOracleSigma2 * std::max(1.0, s(0)),
                        label + ": equality node " + std::to_string(j) + " is not rank one");
    }
}

void criterion_factorizations(Check& c) {
    const CircleGrid grid(256);
    const ExponentTriple e(4.0);
    std::mt19937_64 rng(7);

    for (int i = 0; i < 5; ++i) {  // full-rank suite
        TrigSymbol Psi(2, 2);
        Psi.set_coeff(1, CMat::Identity(2, 2));
        Psi.set_coeff(2, random_matrix(rng, 2, 2, 0.25));
        Psi.set_coeff(3, random_matrix(rng, 2, 2, 0.1));
        const SarasonPair sp = sarason_factor(Psi, grid);
        const GridSamples as = Psi.samples(grid), qs = sp.Q.samples(grid), rs = sp.R.samples(grid);
        double reassembly = 0.0, product = 0.0;
        for (std::size_t j = 0; j < as.size(); ++j) {
            reassembly = std::max(reassembly, (qs[j] * rs[j] - as[j]).cwiseAbs().maxCoeff());
            const double S1 = detail::singular_values(as[j]).sum();
            product = std::max(product, std::abs(S1 - qs[j].norm() * rs[j].norm()) / S1);
        }
        c.expect_le(reassembly, kReassembly, "full-rank " + std::to_string(i) + " reassembly");
        c.expect_le(product, kNormProductRel, "full-rank " + std::to_string(i) + " norm product");
        rank_oracle(c, Psi, grid, "full-rank " + std::to_string(i));
    }

    for (int i = 0; i < 3; ++i) {  // rank-one suite
        TrigSymbol u(2, 1), v(2, 1);
        u.set_coeff(0, random_matrix(rng, 2, 1, 1.0));
        u.set_coeff(1, random_matrix(rng, 2, 1, 0.4));
        v.set_coeff(0, random_matrix(rng, 2, 1, 1.0));
        v.set_coeff(2, random_matrix(rng, 2, 1, 0.3));
        const TrigSymbol Psi = (TrigSymbol::monomial(1) * (u * v.transpose())).trimmed(0.0);
        const RankOnePair rp = rank_one_factor(Psi, e, grid);
        const GridSamples as = Psi.samples(grid), us = rp.u.samples(grid), vs = rp.v.samples(grid);
        double reassembly = 0.0, scale = Psi.max_abs_coeff();
        for (std::size_t j = 0; j < as.size(); ++j)
            reassembly = std::max(reassembly, (us[j] * vs[j].transpose() - as[j]).cwiseAbs().maxCoeff());
        c.expect_le(reassembly / scale, kReassembly, "rank-one " + std::to_string(i) + " reassembly");
        c.expect_le(rp.norm_identity_gap, kNormProductRel, "rank-one " + std::to_string(i) + " norm identity");
        rank_oracle(c, Psi, grid, "rank-one " + std::to_string(i));
    }
    c.info = "5 full-rank + 3 rank-one symbols";
}

// --- criterion 6: spectral factorization ---------------------------------

void criterion_spectral(Check& c) {
    const CircleGrid grid(256);
    SpectralFactorOptions tight;
    tight.change_tol = 1e-13;

    TrigSymbol B(2, 2);  // diag(5/4 + cos, 1)
    {
        CMat c0 = CMat::Zero(2, 2), c1 = CMat::Zero(2, 2);
        c0(0, 0) = 1.25;
        c0(1, 1) = 1.0;
        c1(0, 0) = 0.5;
        B.set_coeff(0, c0);
        B.set_coeff(1, c1);
        B.set_coeff(-1, c1.adjoint());
    }
    const SpectralFactorResult sf = spectral_factor(B, grid, tight);
    TrigSymbol want(2, 2);
    {
        CMat c0 = CMat::Identity(2, 2), c1 = CMat::Zero(2, 2);
        c1(0, 0) = 0.5;
        want.set_coeff(0, c0);
        want.set_coeff(1, c1);
    }
    c.expect_le((sf.psi - want).max_abs_coeff(), kBauerOracle, "diag recovery");

    std::mt19937_64 rng(11);
    TrigSymbol P0(2, 2);
    P0.set_coeff(0, CMat::Identity(2, 2) + random_matrix(rng, 2, 2, 0.2));
    P0.set_coeff(1, random_matrix(rng, 2, 2, 0.35));
    P0.set_coeff(2, random_matrix(rng, 2, 2, 0.2));
    // strictly positive density: lambda_min >= 0.1 by construction
    TrigSymbol Brand = (P0.adjoint() * P0).trimmed(0.0);
    Brand.set_coeff(0, Brand.coeff(0) + 0.1 * CMat::Identity(2, 2));
    const SpectralFactorResult sr = spectral_factor(Brand, grid, tight);
    const GridSamples bs = Brand.samples(grid), fs = sr.psi.samples(grid);
    double residual = 0.0;
    for (std::size_t j = 0; j < bs.size(); ++j)
        residual = std::max(residual, (fs[j].adjoint() * fs[j] - bs[j]).cwiseAbs().maxCoeff());
    c.expect_le(residual, kBauerResidual, "random positive density residual");
    c.info = "oracle dev " + fmt((sf.psi - want).max_abs_coeff()) + ", random residual " + fmt(residual);
}

// --- criterion 7: matrix generator and parametrization -------------------

void criterion_matrix_generator(Check& c) {
    const CircleGrid grid(512);
    const ExponentTriple e(4.0);
    const TrigSymbol h = scalar_coeffs({{0, 1.0}, {1, 0.5}});
    const BadScalar bad = badly_approximable_scalar(e, TrigSymbol::monomial(0), h, grid);
    const TrigSymbol PhiSharp = scalar_coeffs({{-1, 0.3}});  // stays below min |Delta| = 2^{-1/2}

    TrigSymbol v(2, 1);
    {
        CMat a = CMat::Zero(2, 1), b = CMat::Zero(2, 1);
        a(0, 0) = 1.0 / std::sqrt(2.0);
        b(1, 0) = 1.0 / std::sqrt(2.0);
        v.set_coeff(0, a);
        v.set_coeff(1, b);
    }
    const ThematicResult tv = thematic_complete_2(v, grid);
    const TrigSymbol Phi = build_badly_approximable_matrix(bad.phi, PhiSharp, tv.V, tv.V.transpose(), grid);

    const double own_norm = lebesgue_norm(Phi, NormSpec::op(), grid, e.p());
    c.expect_close(own_norm, bad.distance, 1e-9, "built symbol norm vs recipe distance");
    const ApproximationCertificate cert = certify(Phi, e, grid, ladder({8, 16, 32}));
    note(cert);
    c.expect_le(std::abs(cert.primal_value - own_norm) / own_norm, kMatrixGenRel, "certified primal vs L^p norm");
    c.expect_le(std::abs(cert.dual_value - own_norm) / own_norm, kMatrixGenRel, "certified dual vs L^p norm");

    const TrigSymbol fcol = (v * outer_power(h, 2.0 / e.q(), grid)).trimmed(1e-14);
    const FactorizationBundle bundle = extract_bundle_2x2(Phi, TrigSymbol(2, 2), fcol, e, grid);

    const ParametrizeResult good =
        parametrize_best_approximants(Phi, bundle, scalar_coeffs({{1, 0.25}}), grid);
    c.expect(good.admissible, "admissible residual block was rejected");
    const double moved = lebesgue_norm(Phi - good.R, NormSpec::op(), grid, e.p());
    c.expect_le(std::abs(moved - own_norm) / own_norm, kMatrixGenRel, "alternate approximant error");

    const ParametrizeResult nope =
        parametrize_best_approximants(Phi, bundle, scalar_coeffs({{0, 1.5}}), grid);
    c.expect(!nope.admissible, "oversized residual block was not rejected");
    c.info = "distance " + fmt(cert.primal_value) + ", alternate error " + fmt(moved);
}

// --- criterion 8: finite scalar sup-norm subroutine ----------------------

void criterion_scalar_aak(Check& c) {
    const CircleGrid grid(512);
    const NehariScalarSolution a = reduced_nehari_scalar(scalar_coeffs({{-1, 2.0}, {-2, 1.0}}), grid);
    c.expect_close(a.error, 1.0 + std::sqrt(2.0), kAakOracleAbs, "2/z + 1/z^2 error");

    const NehariScalarSolution b = reduced_nehari_scalar(scalar_coeffs({{-1, 0.75}}), grid);
    c.expect(b.error == 0.75, "c/z error is not exactly |c|");
    c.info = "errors " + fmt(a.error) + ", " + fmt(b.error);
}

// --- criterion 9: superoptimal pipeline ----------------------------------

void criterion_superopt(Check& c) {
    const CircleGrid grid(512);
    const ExponentTriple e(4.0);
    const TrigSymbol h = scalar_coeffs({{0, 1.0}, {1, 0.5}});
    const BadScalar bad = badly_approximable_scalar(e, TrigSymbol::monomial(0), h, grid);
    const double scale = 0.35 / (1.0 + std::sqrt(2.0));
    const TrigSymbol kappa = outer_power(h, 0.5, grid);
    const TrigSymbol PhiSharp = (kappa * scalar_coeffs({{-1, 2.0 * scale}, {-2, scale}})).trimmed(1e-14);
    TrigSymbol v(2, 1);
    {
        CMat a = CMat::Zero(2, 1), b = CMat::Zero(2, 1);
        a(0, 0) = 1.0 / std::sqrt(2.0);
        b(1, 0) = 1.0 / std::sqrt(2.0);
        v.set_coeff(0, a);
        v.set_coeff(1, b);
    }
    const ThematicResult tv = thematic_complete_2(v, grid);
    const TrigSymbol Phi = build_badly_approximable_matrix(bad.phi, PhiSharp, tv.V, tv.V.transpose(), grid);

    SuperoptOptions opts;
    opts.cert = ladder({16, 32});
    opts.search.restarts = 14;
    opts.search.max_iters = 900;
    opts.tol_flat = 2e-2;
    const SuperoptimalResult sup = superoptimal_2x2(Phi, e, grid, opts);
    note(sup.cert);

    double mean = 0.0;
    for (double x : sup.profile.s1_over_d) mean += x;
    mean /= static_cast<double>(sup.profile.s1_over_d.size());
    double var = 0.0;
    for (double x : sup.profile.s1_over_d) var += (x - mean) * (x - mean);
    const double stddev_rel = std::sqrt(var / static_cast<double>(sup.profile.s1_over_d.size())) / mean;
    c.expect_le(stddev_rel, kRatioStddevRel, "first ratio profile relative stddev");
    c.expect_close(sup.tau1, 1.0, kTauMatchAbs, "top ratio level");
    c.expect_close(sup.tau2, sup.reduced.error, kTauMatchAbs, "second ratio vs reduced error");

    const UniquenessProbe probe = uniqueness_probe(sup, grid);
    c.expect(probe.all_increased, "a perturbation failed to increase the second ratio");
    c.expect(probe.min_increase > 0.0, "perturbation increase is not strict");
    c.info = "tau2 " + fmt(sup.tau2) + ", stddev " + fmt(stddev_rel) + ", probe +" + fmt(probe.min_increase);
}

// --- criterion 10: core property suite -----------------------------------

void criterion_core_properties(Check& c) {
    const CircleGrid grid(256);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    for (int i = 0; i < 10; ++i) {  // projections split exactly in coefficients
        TrigSymbol s(2, 2);
        for (int k = -6; k <= 6; ++k) s.set_coeff(k, random_matrix(rng, 2, 2, 1.0));
        const TrigSymbol plus = s.riesz(RieszPart::Plus), minus = s.riesz(RieszPart::Minus);
        c.expect((plus + minus - s).max_abs_coeff() == 0.0, "projection split is not exact");
        c.expect((plus.riesz(RieszPart::Plus) - plus).max_abs_coeff() == 0.0, "projection is not idempotent");
        c.expect((plus * 1.0).riesz(RieszPart::Minus).max_abs_coeff() == 0.0, "projections do not annihilate");

        const double parseval =
            std::abs(s.l2_norm() - lebesgue_norm(s, NormSpec::schatten(2.0), grid, 2.0)) / s.l2_norm();
        c.expect_le(parseval, kParsevalRel, "Parseval");
    }

    int holder_checked = 0;
    for (int i = 0; i < 100; ++i) {  // pointwise-then-integral Hoelder chain
        const ExponentTriple e(2.05 + 6.0 * uni(rng));
        const bool matrix = (i % 2) == 1;
        const int n = matrix ? 2 : 1;
        TrigSymbol F(n, n), G(n, n);
        for (int k = -4; k <= 4; ++k) {
            F.set_coeff(k, random_matrix(rng, n, n, 1.0));
            G.set_coeff(k, random_matrix(rng, n, n, 1.0));
        }
        const double lhs = lebesgue_norm(F * G, NormSpec::schatten(2.0), grid, 2.0);
        const double rhs =
            lebesgue_norm(F, NormSpec::op(), grid, e.p()) * lebesgue_norm(G, NormSpec::schatten(2.0), grid, e.q());
        c.expect_le(lhs, rhs * (1.0 + kHolderSlack), "Hoelder chain violated (trial " + std::to_string(i) + ")");
        ++holder_checked;
    }

    c.expect(!g_certs.empty(), "no certificates were registered");
    for (std::size_t i = 0; i < g_certs.size(); ++i)
        c.expect_le(g_certs[i].dual_value,
                    g_certs[i].primal_value * (1.0 + kWeakDualitySlack) + 1e-12,
                    "weak duality violated by certificate " + std::to_string(i));

    // homogeneity and translation invariance of the distance
    const ExponentTriple e(4.0);
    const TrigSymbol h = scalar_coeffs({{0, 1.0}, {1, 0.5}});
    const TrigSymbol phi = badly_approximable_scalar(e, TrigSymbol::monomial(0), h, CircleGrid(256)).phi;
    const CircleGrid g256(256);
    const ApproximationCertificate base = certify(phi, e, g256, ladder({8, 16, 32}));
    const ApproximationCertificate scaled = certify(phi * 2.3, e, g256, ladder({8, 16, 32}));
    const ApproximationCertificate shifted =
        certify(phi + scalar_coeffs({{0, 1.1}, {1, 0.3}}), e, g256, ladder({8, 16, 32}));
    note(base);
    note(scaled);
    note(shifted);
    c.expect_le(std::abs(scaled.primal_value - 2.3 * base.primal_value) / (2.3 * base.primal_value),
                kInvarianceRel, "homogeneity");
    c.expect_le(std::abs(shifted.primal_value - base.primal_value) / base.primal_value, kInvarianceRel,
                "translation invariance");
    c.info = std::to_string(holder_checked) + " Hoelder triples, " + std::to_string(g_certs.size()) +
             " certificates under weak duality";
}

}  // namespace

int main() {
    struct Entry {
        const char* title;
        void (*fn)(Check&);
    };
    const Entry entries[] = {
        {"scalar distance identity (closed form, duality, search)", criterion_scalar_identity},
        {"badly approximable generator round trip (5 recipes)", criterion_round_trip},
        {"respectable control symbol (distance, profile, order)", criterion_respectable_control},
        {"two-column demonstration (unitary symbol, plateau gap)", criterion_weird_demo},
        {"trace-norm factorizations and the rank-one oracle", criterion_factorizations},
        {"spectral factorization (oracle and random density)", criterion_spectral},
        {"matrix generator and approximant parametrization", criterion_matrix_generator},
        {"finite scalar sup-norm subroutine oracles", criterion_scalar_aak},
        {"superoptimal pipeline (flat ratios, uniqueness probe)", criterion_superopt},
        {"core properties (projections, Parseval, Hoelder, duality)", criterion_core_properties},
    };

    int failures = 0;
    int id = 0;
    for (const Entry& entry : entries) {
        ++id;
        Check c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            entry.fn(c);
        } catch (const std::exception& ex) {
            c.expect(false, std::string("exception: ") + ex.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %2d/10 %-60s (%5.1f s)%s%s\n", c.ok ? "PASS" : "FAIL", id, entry.title, secs,
                    c.info.empty() ? "" : ("  " + c.info).c_str(), "");
        if (!c.ok) {
            std::printf("        %s\n", c.why.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
