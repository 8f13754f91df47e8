#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpnehari/approx.hpp"
#include "lpnehari/factorize.hpp"
#include "lpnehari/hankel.hpp"
#include "lpnehari/symbol.hpp"

namespace lpnehari {

// ---------------------------------------------------------------------------
// superoptimal approximation for 2x2 symbols, one diagonalization level:
// among all best approximants (which all satisfy s_1(Phi - R) = d pointwise),
// minimize the essential supremum of s_2(Phi - R)/d.
// ---------------------------------------------------------------------------

struct TauProfile {
    double tau1 = 0.0;  ///< max over nodes of s_1(Phi - R)/d
    double tau2 = 0.0;  ///< max over nodes of s_2(Phi - R)/d
    std::vector<double> s1_over_d, s2_over_d;
};

/// Singular-value-over-distance profiles of Phi - R on the grid.
inline TauProfile tau_profile(const TrigSymbol& Phi, const TrigSymbol& R,
                              const std::vector<double>& distance_profile, const CircleGrid& grid) {
    TauProfile out;
    const GridSamples es = (Phi - R).samples(grid);
    out.s1_over_d.resize(es.size());
    out.s2_over_d.resize(es.size());
    for (std::size_t j = 0; j < es.size(); ++j) {
        const Eigen::VectorXd s = detail::singular_values(es[j]);
        const double d = std::max(distance_profile[j], 1e-300);
        out.s1_over_d[j] = s(0) / d;
        out.s2_over_d[j] = (s.size() > 1 ? s(1) : 0.0) / d;
        out.tau1 = std::max(out.tau1, out.s1_over_d[j]);
        out.tau2 = std::max(out.tau2, out.s2_over_d[j]);
    }
    return out;
}

struct SuperoptOptions {
    CertifyOptions cert;
    int hankel_degree = 32;      ///< input window for the maximizing vector
    NormSearchOptions search;
    double tol_match = 1e-2;     ///< required Hankel/distance agreement (respectability)
    double tol_flat = 1e-2;      ///< accepted deviation of the singular value ratios
    std::optional<TrigSymbol> reference_Q;  ///< skip certification, use this best approximant
};

struct SuperoptimalResult {
    TrigSymbol R;        ///< the superoptimal approximant
    double tau1 = 0.0;   ///< measured; equals 1 up to tolerance
    double tau2 = 0.0;   ///< minimized second ratio (the reduced sup-norm error)
    FactorizationBundle bundle;
    NehariScalarSolution reduced;
    TauProfile profile;
    double flat1_residual = 0.0;  ///< max |s_1/d - 1|
    double flat2_residual = 0.0;  ///< max |s_2/d - tau2|
    double hankel_value = 0.0;
    double distance = 0.0;
    ApproximationCertificate cert;  ///< populated unless reference_Q was given
};

/// Full pipeline: certify the distance, find a single-column maximizing
/// vector, split off the unimodular block, solve the reduced scalar sup-norm
/// problem in the lower-right corner, and reassemble.  The result keeps
/// s_1(Phi - R) = d pointwise while flattening s_2/d at its minimal level.
inline SuperoptimalResult superoptimal_2x2(const TrigSymbol& Phi, const ExponentTriple& e,
                                           const CircleGrid& grid, const SuperoptOptions& opts = {}) {
    if (Phi.rows() != 2 || Phi.cols() != 2)
        throw std::invalid_argument("superoptimal_2x2: 2x2 symbols only");
    SuperoptimalResult out;

    TrigSymbol Q(2, 2);
    if (opts.reference_Q) {
        Q = *opts.reference_Q;
        out.distance = lebesgue_norm(Phi - Q, NormSpec::op(), grid, e.p());
    } else {
        out.cert = certify(Phi, e, grid, opts.cert);
        if (!out.cert.conclusive)
            throw std::runtime_error("superoptimal_2x2: the distance certificate did not close (gap " +
                                     std::to_string(out.cert.gap_rel) + ")");
        Q = out.cert.Q;
        out.distance = out.cert.primal_value;
    }
    if (out.distance < 1e-12) {
        out.R = Phi.riesz(RieszPart::Plus);  // analytic symbol: exact, both ratios vanish
        return out;
    }

    // single-column maximizing vector; it must attain the distance
    NormSearchOptions search = opts.search;
    search.upper_bound = out.distance;
    if (!opts.reference_Q && out.cert.Psi.max_abs_coeff() > 0.0) {
        try {
            search.warm_starts.push_back(rank_one_factor(out.cert.Psi, e, grid).F);
        } catch (const std::exception&) {
        }
    }
    HankelOperatorSpec spec = build_hankel(Phi, 1, opts.hankel_degree, -1, e, grid);
    NormSearchReport rep = hankel_norm_lower_bound(spec, search);
    out.hankel_value = rep.best_value;
    if (rep.best_value < (1.0 - opts.tol_match) * out.distance)
        throw std::runtime_error(
            "superoptimal_2x2: no single-column maximizing vector reaches the distance (best " +
            std::to_string(rep.best_value) + " vs " + std::to_string(out.distance) +
            "); the symbol resists the order-1 reduction");

    out.bundle = extract_bundle_2x2(Phi, Q, rep.witness, e, grid);

    // reduced scalar problem: divide the residual block by the outer function
    // of the distance profile, then solve the finite sup-norm problem
    const GridSamples ss = out.bundle.PhiSharp.samples(grid), ks = out.bundle.kappa.samples(grid);
    GridSamples red(ss.size());
    for (std::size_t j = 0; j < ss.size(); ++j) red[j] = ss[j].cwiseQuotient(ks[j]);
    const TrigSymbol psi_red = TrigSymbol::analyze(red).trimmed(1e-12);
    out.reduced = reduced_nehari_scalar(psi_red, grid);
    out.tau2 = out.reduced.error;

    const TrigSymbol RSharp = (out.bundle.kappa * out.reduced.best).trimmed(1e-13);
    ParametrizeResult par = parametrize_best_approximants(Phi, out.bundle, RSharp, grid);
    if (!par.admissible)
        throw std::runtime_error("superoptimal_2x2: reduced solution violated the pointwise bound by " +
                                 std::to_string(par.worst_violation));
    out.R = par.R;

    out.profile = tau_profile(Phi, out.R, out.bundle.distance_profile, grid);
    out.tau1 = out.profile.tau1;
    for (std::size_t j = 0; j < out.profile.s1_over_d.size(); ++j) {
        out.flat1_residual = std::max(out.flat1_residual, std::abs(out.profile.s1_over_d[j] - 1.0));
        out.flat2_residual = std::max(out.flat2_residual, std::abs(out.profile.s2_over_d[j] - out.tau2));
    }
    if (out.flat1_residual > opts.tol_flat || out.flat2_residual > opts.tol_flat)
        throw std::runtime_error("superoptimal_2x2: singular value ratios failed to flatten (s1 dev " +
                                 std::to_string(out.flat1_residual) + ", s2 dev " +
                                 std::to_string(out.flat2_residual) + ")");
    return out;
}

// ---------------------------------------------------------------------------
// uniqueness probe: analytic perturbations of the residual block must
// strictly raise the second ratio
// ---------------------------------------------------------------------------

struct UniquenessProbe {
    std::vector<std::string> labels;
    std::vector<double> perturbed_tau2;
    double tau2 = 0.0;
    double min_increase = 0.0;
    bool all_increased = false;
};

inline UniquenessProbe uniqueness_probe(const SuperoptimalResult& sup, const CircleGrid& grid,
                                        double eps = 0.05) {
    UniquenessProbe out;
    out.tau2 = sup.tau2;
    const GridSamples ss = sup.bundle.PhiSharp.samples(grid), ks = sup.bundle.kappa.samples(grid);
    const GridSamples rs = (sup.bundle.kappa * sup.reduced.best).samples(grid);

    const std::vector<std::pair<std::string, TrigSymbol>> dirs = {
        {"1", TrigSymbol::monomial(0)},
        {"z", TrigSymbol::monomial(1)},
        {"z^2", TrigSymbol::monomial(2)},
        {"i", TrigSymbol::monomial(0, Complex(0, 1))},
        {"i z", TrigSymbol::monomial(1, Complex(0, 1))},
    };
    out.min_increase = std::numeric_limits<double>::infinity();
    for (const auto& [label, eta] : dirs) {
        const GridSamples es = eta.samples(grid);
        double tau = 0.0;
        for (std::size_t j = 0; j < ss.size(); ++j) {
            // perturbed residual block kappa*(q + eps*eta); ratios against |kappa|
            const Complex num = ss[j](0, 0) - rs[j](0, 0) - eps * ks[j](0, 0) * es[j](0, 0);
            tau = std::max(tau, std::abs(num) / std::abs(ks[j](0, 0)));
        }
        out.labels.push_back(label);
        out.perturbed_tau2.push_back(tau);
        out.min_increase = std::min(out.min_increase, tau - sup.tau2);
    }
    out.all_increased = out.min_increase > 0.0;
    return out;
}

}  // namespace lpnehari
