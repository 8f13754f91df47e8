#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpnehari/approx.hpp"
#include "lpnehari/factorize.hpp"
#include "lpnehari/hankel.hpp"
#include "lpnehari/symbol.hpp"

namespace lpnehari {

// ---------------------------------------------------------------------------
// a 2x2 unitary-valued symbol whose distance is attained only by two-column
// Hankel inputs: the single-column operator norm stays strictly below the
// distance.  Built from a trigonometric density B through
//     B = Psi^* Psi,  A = Psi Psi^*,  A^2 = Q Q^*,  U = conj(z) Q^{-1} A,
// which makes z Q = A U^* an exact dual witness with pointwise trace norm 1.
// ---------------------------------------------------------------------------

struct WeirdRecipe {
    TrigSymbol B;                   ///< Hermitian, positive definite density, trace 1
    double positivity_margin = 0.0;  ///< min over nodes of det B(zeta)
    double independence = 0.0;       ///< smallest singular value of the ingredient Gram matrix
};

/// Default density: alpha = 1/2 + cos(2 theta)/8, beta = exp(i theta)/8,
///     B = [[alpha, beta], [conj(beta), 1 - alpha]].
/// det B = 1/4 - cos(2 theta)^2/64 - 1/64 >= 14/64 > 0, trace B = 1.
inline WeirdRecipe default_weird_recipe(const CircleGrid& grid) {
    WeirdRecipe out;
    TrigSymbol B(2, 2);
    {
        CMat c0 = CMat::Zero(2, 2), c1 = CMat::Zero(2, 2), c2 = CMat::Zero(2, 2);
        c0(0, 0) = 0.5;
        c0(1, 1) = 0.5;
        c1(0, 1) = 0.125;  // beta lives at frequency +1 in the (0,1) slot
        c2(0, 0) = 1.0 / 16.0;
        c2(1, 1) = -1.0 / 16.0;
        B.set_coeff(0, c0);
        B.set_coeff(1, c1);
        B.set_coeff(2, c2);
        B.set_coeff(-1, c1.adjoint());
        B.set_coeff(-2, c2.adjoint());
    }
    out.B = B;

    const GridSamples bs = B.samples(grid);
    double margin = std::numeric_limits<double>::infinity();
    for (const CMat& m : bs) margin = std::min(margin, m.determinant().real());
    out.positivity_margin = margin;
    if (!(margin >= 14.0 / 64.0 - 1e-12))
        throw std::logic_error("default_weird_recipe: positivity margin fell below 14/64");

    // the three ingredient functions 1, cos(2 theta), exp(i theta) must stay
    // independent; their L^2 Gram matrix is diagonal with entries 1, 1/2, 1
    Eigen::Matrix3cd gram = Eigen::Matrix3cd::Zero();
    for (int j = 0; j < grid.size(); ++j) {
        Eigen::Vector3cd f;
        f << Complex(1, 0), Complex(std::cos(2.0 * grid.angle(j)), 0), std::polar(1.0, grid.angle(j));
        gram += grid.weight() * f * f.adjoint();
    }
    Eigen::JacobiSVD<Eigen::Matrix3cd> svd(gram);
    out.independence = svd.singularValues().minCoeff();
    return out;
}

struct WeirdConstruction {
    TrigSymbol B;     ///< the density used
    TrigSymbol Psi;   ///< analytic factor, Psi^* Psi = B
    TrigSymbol A;     ///< Psi Psi^*, pointwise trace 1
    TrigSymbol Q;     ///< analytic factor, Q Q^* = A^2
    TrigSymbol U;     ///< the unitary-valued symbol (truncated representation)
    TrigSymbol dual;  ///< z Q: dual witness with pointwise trace norm 1
    int degree = 0;   ///< truncation degree of U
    double unitary_residual = 0.0;        ///< max_j |U^* U - I|
    double dual_identity_residual = 0.0;  ///< max_j |A U^* - z Q|
    double trace_residual = 0.0;          ///< max_j |trace A - 1|
    double dual_trace_norm_residual = 0.0;  ///< max_j | |z Q|_{S1} - 1 |
    double tail_mass = 0.0;               ///< coefficient mass of U dropped by truncation
};

inline WeirdConstruction construct_weird_U(const TrigSymbol& B, const CircleGrid& grid, int degree = 96) {
    WeirdConstruction out;
    out.B = B;
    out.degree = degree;
    if (grid.size() < 4 * degree) throw std::invalid_argument("construct_weird_U: grid too small for the degree");

    SpectralFactorResult sfB = spectral_factor(B, grid);
    out.Psi = sfB.psi;
    out.A = (out.Psi * out.Psi.adjoint()).trimmed(1e-15);

    const TrigSymbol A2 = (out.A * out.A).trimmed(1e-15);
    // Q Q^* = A^2 via the transposed factorization (R^* R = X  =>  R^t works
    // from the other side on X^t)
    SpectralFactorResult sfA = spectral_factor(A2.transpose(), grid);
    out.Q = sfA.psi.transpose();

    const GridSamples as = out.A.samples(grid), qs = out.Q.samples(grid);
    GridSamples us(as.size());
    for (std::size_t j = 0; j < as.size(); ++j) {
        us[j] = std::conj(grid.node(static_cast<int>(j))) * qs[j].partialPivLu().solve(as[j]);
        out.trace_residual = std::max(out.trace_residual, std::abs(as[j].trace() - Complex(1, 0)));
    }
    TrigSymbol Ufull = TrigSymbol::analyze(us);
    TrigSymbol U(2, 2);
    double tail = 0.0;
    for (int k = Ufull.min_freq(); k <= Ufull.max_freq(); ++k) {
        if (k >= -degree && k <= degree)
            U.set_coeff(k, Ufull.coeff(k));
        else
            tail += Ufull.coeff_abs(k);
    }
    out.U = U.trimmed(1e-15);
    out.tail_mass = tail;
    out.dual = (TrigSymbol::monomial(1) * out.Q).trimmed(1e-15);

    for (std::size_t j = 0; j < as.size(); ++j) {
        out.unitary_residual =
            std::max(out.unitary_residual, (us[j].adjoint() * us[j] - CMat::Identity(2, 2)).cwiseAbs().maxCoeff());
        const CMat zq = grid.node(static_cast<int>(j)) * qs[j];
        out.dual_identity_residual =
            std::max(out.dual_identity_residual, (as[j] * us[j].adjoint() - zq).cwiseAbs().maxCoeff());
        out.dual_trace_norm_residual = std::max(
            out.dual_trace_norm_residual, std::abs(pointwise_norm(zq, NormSpec::schatten(1.0)) - 1.0));
    }

    if (out.unitary_residual > 1e-8)
        throw std::runtime_error("construct_weird_U: unitarity failed (residual " +
                                 std::to_string(out.unitary_residual) + ")");
    if (out.dual.analytic_vanishing_residual() > 1e-8)
        throw std::runtime_error("construct_weird_U: dual witness does not vanish at the origin");
    return out;
}

// ---------------------------------------------------------------------------
// evidence builders
// ---------------------------------------------------------------------------

struct WeirdDistanceEvidence {
    ApproximationCertificate cert;
    double pairing_value = 0.0;   ///< grid mean of trace(U zQ); equals the distance bound
    double dual_norm_max = 0.0;   ///< max_j |zQ|_{S1} (feasibility in every dual ball)
};

/// Certifies the distance of U using the exact dual witness z Q as a warm
/// start; for the default recipe the distance is exactly 1 in every L^p.
inline WeirdDistanceEvidence badly_approximable_evidence(const WeirdConstruction& wc, const ExponentTriple& e,
                                                         const CircleGrid& grid, CertifyOptions opts = {}) {
    WeirdDistanceEvidence out;
    const GridSamples us = wc.U.samples(grid), ds = wc.dual.samples(grid);
    Complex acc(0, 0);
    for (std::size_t j = 0; j < us.size(); ++j) {
        acc += (us[j] * ds[j]).trace();
        out.dual_norm_max = std::max(out.dual_norm_max, pointwise_norm(ds[j], NormSpec::schatten(1.0)));
    }
    out.pairing_value = std::abs(acc) / static_cast<double>(us.size());
    opts.dual.warm_starts.push_back(wc.dual);
    out.cert = certify(wc.U, e, grid, opts);
    return out;
}

struct WeirdnessEvidence {
    std::vector<int> degrees;
    std::vector<double> k1_values;   ///< single-column Hankel lower bounds per window
    double best_k1 = 0.0;
    double best_k2 = 0.0;            ///< two-column value (should reach the distance)
    double k1_gap = 0.0;             ///< distance - best_k1: the weirdness margin
    bool rank_one_dual_obstructed = false;  ///< the dual witness refuses a rank-one split
    std::vector<NormSearchReport> k1_reports;
    NormSearchReport k2_report;
};

struct WeirdnessOptions {
    std::vector<int> degrees = {16, 32, 64};
    NormSearchOptions search;   ///< restarts/seed/iteration budget
    double distance = 1.0;      ///< certified distance to gap against
};

/// Measures the single-column shortfall of the Hankel norm against the
/// two-column value: a persistent gap is the defining evidence of weirdness.
inline WeirdnessEvidence weirdness_evidence(const WeirdConstruction& wc, const ExponentTriple& e,
                                            const CircleGrid& grid, const WeirdnessOptions& opts = {}) {
    WeirdnessEvidence out;
    out.degrees = opts.degrees;

    NormSearchOptions s1 = opts.search;
    s1.upper_bound = opts.distance;
    for (int D : opts.degrees) {
        HankelOperatorSpec spec = build_hankel(wc.U, 1, D, -1, e, grid);
        NormSearchReport rep = hankel_norm_lower_bound(spec, s1);
        out.k1_values.push_back(rep.best_value);
        out.best_k1 = std::max(out.best_k1, rep.best_value);
        out.k1_reports.push_back(std::move(rep));
    }
    out.k1_gap = opts.distance - out.best_k1;

    NormSearchOptions s2 = opts.search;
    s2.upper_bound = opts.distance;
    try {
        FgPair fg = fg_factor(wc.dual, e, grid);
        if (fg.F.cols() == wc.U.cols()) s2.warm_starts.push_back(fg.F);
    } catch (const std::exception&) {
        // no balanced warm start; the random restarts still apply
    }
    const int D2 = opts.degrees.empty() ? 32 : opts.degrees.back();
    HankelOperatorSpec spec2 = build_hankel(wc.U, 2, D2, -1, e, grid);
    out.k2_report = hankel_norm_lower_bound(spec2, s2);
    out.best_k2 = out.k2_report.best_value;

    try {
        (void)rank_one_factor(wc.dual, e, grid);
        out.rank_one_dual_obstructed = false;
    } catch (const std::exception&) {
        out.rank_one_dual_obstructed = true;
    }
    return out;
}

}  // namespace lpnehari
