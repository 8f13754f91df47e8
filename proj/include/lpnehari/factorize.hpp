#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpnehari/analytic.hpp"
#include "lpnehari/exponents.hpp"
#include "lpnehari/grid.hpp"
#include "lpnehari/norms.hpp"
#include "lpnehari/symbol.hpp"

namespace lpnehari {

// ---------------------------------------------------------------------------
// badly approximable scalars
// ---------------------------------------------------------------------------

struct BadScalar {
    TrigSymbol phi;       ///< conj(z) conj(theta) conj(h) / h^{2/q}
    TrigSymbol inner;     ///< the inner factor theta used
    TrigSymbol outer;     ///< the outer factor h used
    double distance;      ///< exact L^p distance from the analytic class: (|h|_{L^2}^2)^{1/p}
};

/// Scalar whose L^p-closest analytic function is 0, built from an inner
/// factor theta and an outer factor h:  phi = conj(z theta h) * h^{-2/q}.
/// Its modulus is |h|^{2/p} and its distance equals its own L^p norm.
inline BadScalar badly_approximable_scalar(const ExponentTriple& e, const TrigSymbol& theta,
                                           const TrigSymbol& h, const CircleGrid& grid) {
    if (!theta.is_scalar() || !h.is_scalar())
        throw std::invalid_argument("badly_approximable_scalar: scalar factors required");
    if (!theta.is_analytic(1e-10) || !h.is_analytic(1e-10))
        throw std::invalid_argument("badly_approximable_scalar: factors must be analytic");
    if (e.q_is_infinite()) {
        // p = 2: phi = conj(z theta h), already co-analytic after the shift
        BadScalar out{(TrigSymbol::monomial(-1) * theta.conjugate() * h.conjugate()).trimmed(1e-15), theta, h,
                      std::pow(h.l2_norm() * h.l2_norm(), 1.0 / e.p())};
        return out;
    }
    const TrigSymbol hpow = outer_power(h, -2.0 / e.q(), grid);
    TrigSymbol phi = (TrigSymbol::monomial(-1) * theta.conjugate() * h.conjugate() * hpow).trimmed(1e-13);
    return BadScalar{phi, theta, h, std::pow(h.l2_norm() * h.l2_norm(), 1.0 / e.p())};
}

/// Same construction driven by a target modulus profile omega = |phi|:
/// h is the outer function with |h| = omega^{p/2}.
inline BadScalar badly_approximable_scalar_from_modulus(const ExponentTriple& e,
                                                        const std::vector<double>& omega,
                                                        const std::vector<Complex>& inner_zeros,
                                                        const CircleGrid& grid) {
    std::vector<double> w(omega.size());
    for (std::size_t j = 0; j < omega.size(); ++j) {
        if (!(omega[j] > 0.0))
            throw std::domain_error("badly_approximable_scalar_from_modulus: modulus must be positive");
        w[j] = std::pow(omega[j], e.p() / 2.0);
    }
    OuterResult h = outer_from_modulus(w, grid);
    // expansion degree chosen so the dropped tail is ~1e-12
    int deg = 16;
    for (const Complex& a : inner_zeros) {
        const double r = std::abs(a);
        if (r > 1e-12)
            deg = std::max(deg, static_cast<int>(std::ceil(std::log(1e-12) / std::log(r))) + 4);
    }
    deg = std::min(deg, grid.size() / 4);
    BlaschkeResult theta = blaschke(inner_zeros, grid, inner_zeros.empty() ? 1 : deg);
    return badly_approximable_scalar(e, theta.symbol, h.h, grid);
}

// ---------------------------------------------------------------------------
// matrix spectral factorization (Bauer-type)
// ---------------------------------------------------------------------------

struct SpectralFactorOptions {
    int max_blocks = 4096;        ///< cap on the Toeplitz section length
    double change_tol = 1e-10;    ///< successive block-row change for convergence
    double trim_tol = 1e-13;      ///< coefficient trim on the input band
    int min_rows = 8;             ///< warm-up rows before testing convergence
};

struct SpectralFactorResult {
    TrigSymbol psi;               ///< analytic polynomial factor, psi(0) lower-triangular, positive diagonal
    double residual = 0.0;        ///< max coefficient error of psi^* psi - B
    int rows_used = 0;            ///< Toeplitz rows consumed before stabilizing
    double last_change = 0.0;
    double szego_gap = 0.0;       ///< | mean log|det psi| - log|det psi(0)| | (outer diagnostic)
    double min_eig_margin = 0.0;  ///< min over nodes of the smallest eigenvalue of B
};

/// Factors a Hermitian, pointwise positive definite trigonometric polynomial
/// B as B = psi^* psi with psi analytic (polynomial of the same band).  Works
/// by Cholesky factorization of growing finite sections of the block-Toeplitz
/// matrix [B_{j-i}]; the bottom block row, reversed and conjugated, converges
/// to the factor coefficients.
inline SpectralFactorResult spectral_factor(const TrigSymbol& Bin, const CircleGrid& grid,
                                            const SpectralFactorOptions& opts = {}) {
    if (Bin.rows() != Bin.cols()) throw std::invalid_argument("spectral_factor: square symbols only");
    const TrigSymbol B = Bin.trimmed(opts.trim_tol * std::max(1.0, Bin.max_abs_coeff()));
    const int n = B.rows();
    const int d = std::max(B.max_freq(), -B.min_freq());

    // Hermitian-as-a-function check: B_{-k} = B_k^*
    for (int k = 0; k <= d; ++k)
        if ((B.coeff(-k) - B.coeff(k).adjoint()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, B.max_abs_coeff()))
            throw std::invalid_argument("spectral_factor: symbol is not Hermitian as a function");

    SpectralFactorResult out;
    {
        double margin = std::numeric_limits<double>::infinity();
        const GridSamples bs = B.samples(grid);
        for (const CMat& m : bs) {
            Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (m + m.adjoint()));
            margin = std::min(margin, es.eigenvalues().minCoeff());
        }
        out.min_eig_margin = margin;
        if (!(margin > 0.0))
            throw std::domain_error("spectral_factor: symbol is not positive definite on the grid (min eig " +
                                    std::to_string(margin) + ")");
    }

    // banded block Cholesky with a ring buffer of the last d+1 rows
    const int band = d + 1;
    std::vector<std::vector<CMat>> rows(static_cast<std::size_t>(band));  // rows[i % band][j - (i - d)]
    std::vector<CMat> prev_candidate, candidate(static_cast<std::size_t>(band));
    auto row_block = [&](int i, int j) -> const CMat& {
        return rows[static_cast<std::size_t>(i % band)][static_cast<std::size_t>(j - std::max(0, i - d))];
    };

    bool converged = false;
    int i = 0;
    for (; i < opts.max_blocks; ++i) {
        const int j0 = std::max(0, i - d);
        std::vector<CMat>& row = rows[static_cast<std::size_t>(i % band)];
        row.assign(static_cast<std::size_t>(i - j0 + 1), CMat::Zero(n, n));
        for (int j = j0; j <= i; ++j) {
            CMat C = B.coeff(j - i);
            for (int k = std::max(j0, std::max(0, j - d)); k < j; ++k)
                C -= row_block(i, k) * row_block(j, k).adjoint();
            if (j < i) {
                // solve X * L_jj^* = C
                const CMat& Ljj = row_block(j, j);
                row[static_cast<std::size_t>(j - j0)] =
                    Ljj.triangularView<Eigen::Lower>().solve(C.adjoint()).adjoint();
            } else {
                Eigen::LLT<CMat> llt(0.5 * (C + C.adjoint()));
                if (llt.info() != Eigen::Success)
                    throw std::runtime_error("spectral_factor: finite section lost positive definiteness at row " +
                                             std::to_string(i));
                row[static_cast<std::size_t>(j - j0)] = llt.matrixL();
            }
        }
        // candidate coefficients from this row: psi_t = (L_{i, i-t})^*
        if (i >= d) {
            for (int t = 0; t <= d; ++t) candidate[static_cast<std::size_t>(t)] = row_block(i, i - t).adjoint();
            if (i >= std::max(opts.min_rows, d + 1) && !prev_candidate.empty()) {
                double change = 0.0;
                for (int t = 0; t <= d; ++t)
                    change = std::max(change, (candidate[static_cast<std::size_t>(t)] -
                                               prev_candidate[static_cast<std::size_t>(t)])
                                                  .cwiseAbs()
                                                  .maxCoeff());
                out.last_change = change;
                if (change <= opts.change_tol) {
                    converged = true;
                    ++i;
                    break;
                }
            }
            prev_candidate = candidate;
        }
    }
    out.rows_used = i;
    if (!converged)
        throw std::runtime_error("spectral_factor: block rows did not stabilize after " + std::to_string(i) +
                                 " rows (last change " + std::to_string(out.last_change) +
                                 ", min eig margin " + std::to_string(out.min_eig_margin) + ")");

    TrigSymbol psi(n, n);
    for (int t = 0; t <= d; ++t) psi.set_coeff(t, candidate[static_cast<std::size_t>(t)]);

    // left constant unitary: make psi(0) lower-triangular with positive diagonal
    {
        const CMat A = psi.coeff(0);
        CMat J = CMat::Zero(n, n);
        for (int r = 0; r < n; ++r) J(r, n - 1 - r) = 1.0;
        Eigen::HouseholderQR<CMat> qr(J * A * J);
        CMat Qf = qr.householderQ();
        CMat Rf = qr.matrixQR().triangularView<Eigen::Upper>();
        CMat Lo = J * Rf * J;  // lower triangular
        CMat Z = (J * Qf * J).adjoint();
        CMat D = CMat::Identity(n, n);
        for (int r = 0; r < n; ++r) {
            const Complex piv = Lo(r, r);
            D(r, r) = (std::abs(piv) > 0.0) ? std::conj(piv) / std::abs(piv) : Complex(1.0, 0.0);
        }
        Z = D * Z;
        TrigSymbol fixed(n, n);
        for (int t = 0; t <= d; ++t) fixed.set_coeff(t, Z * psi.coeff(t));
        psi = fixed;
    }

    // residual and outer diagnostic
    out.residual = (psi.adjoint() * psi - B).max_abs_coeff();
    {
        const GridSamples ps = psi.samples(grid);
        double mean_logdet = 0.0;
        for (const CMat& m : ps) mean_logdet += std::log(std::abs(m.determinant()));
        mean_logdet /= static_cast<double>(ps.size());
        out.szego_gap = std::abs(mean_logdet - std::log(std::abs(psi.coeff(0).determinant())));
    }
    out.psi = psi.trimmed(1e-300);
    return out;
}

// ---------------------------------------------------------------------------
// Sarason / FG / rank-one factorizations of a dual extremal candidate
// ---------------------------------------------------------------------------

struct SarasonPair {
    TrigSymbol Q;   ///< analytic, Q^*Q = R R^*
    TrigSymbol R;   ///< analytic (outer), R^*R = (Psi^*Psi)^{1/2}
    double defect_R = 0.0;        ///< max_j |R^*R - (Psi^*Psi)^{1/2}|
    double defect_Q = 0.0;        ///< max_j |Q^*Q - R R^*|
    double product_residual = 0.0;  ///< max_j |Q R - Psi|
    double analytic_residual = 0.0; ///< co-analytic leakage of Q and R before cleanup
};

/// Factors a pointwise full-rank Psi as Psi = Q R with R^*R = (Psi^*Psi)^{1/2}
/// and Q^*Q = R R^*; R comes from a spectral factorization of the pointwise
/// square root, Q from explicit division.
inline SarasonPair sarason_factor(const TrigSymbol& Psi, const CircleGrid& grid,
                                  double analytic_tol = 1e-8) {
    const int n = Psi.cols();
    const GridSamples ps = Psi.samples(grid);
    GridSamples S(ps.size());
    double min_sigma = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ps.size(); ++j) {
        Eigen::SelfAdjointEigenSolver<CMat> es(ps[j].adjoint() * ps[j]);
        if (es.info() != Eigen::Success) throw std::runtime_error("sarason_factor: eigensolver failed");
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
        min_sigma = std::min(min_sigma, std::sqrt(ev.minCoeff()));
        S[j] = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    }
    if (!(min_sigma > 1e-8))
        throw std::domain_error("sarason_factor: Psi is numerically rank deficient on the grid (min sigma " +
                                std::to_string(min_sigma) + "); use the rank-one route");

    TrigSymbol Ssym = TrigSymbol::analyze(S).trimmed(1e-13);
    Ssym = 0.5 * (Ssym + Ssym.adjoint());  // enforce Hermitian symmetry of the analyzed samples
    SpectralFactorResult R = spectral_factor(Ssym, grid);

    const GridSamples rs = R.psi.samples(grid);
    GridSamples qs(ps.size());
    for (std::size_t j = 0; j < ps.size(); ++j)
        qs[j] = rs[j].adjoint().partialPivLu().solve(ps[j].adjoint()).adjoint();  // Psi R^{-1}
    TrigSymbol Qsym = TrigSymbol::analyze(qs);

    SarasonPair out;
    out.analytic_residual = Qsym.analytic_residual();
    if (out.analytic_residual > analytic_tol)
        throw std::runtime_error("sarason_factor: quotient factor is not analytic (residual " +
                                 std::to_string(out.analytic_residual) + ")");
    out.Q = Qsym.riesz(RieszPart::Plus).trimmed(1e-13);
    out.R = R.psi;

    const GridSamples qs2 = out.Q.samples(grid);
    for (std::size_t j = 0; j < ps.size(); ++j) {
        out.defect_R = std::max(out.defect_R, (rs[j].adjoint() * rs[j] - S[j]).cwiseAbs().maxCoeff());
        out.defect_Q = std::max(out.defect_Q,
                                (qs2[j].adjoint() * qs2[j] - rs[j] * rs[j].adjoint()).cwiseAbs().maxCoeff());
        out.product_residual = std::max(out.product_residual, (qs2[j] * rs[j] - ps[j]).cwiseAbs().maxCoeff());
    }
    (void)n;
    return out;
}

struct FgPair {
    TrigSymbol F;   ///< analytic, in the Hankel domain space (L^q)
    TrigSymbol G;   ///< analytic, L^2 factor
    TrigSymbol h;   ///< scalar outer with |h| = |Psi(.)|_{S1}^{1/2 - p'/2}
    double product_residual = 0.0;    ///< max_j |F G - Psi|
    double norm_identity_gap = 0.0;   ///< | |F|_q |G|_2 - |Psi|_{p'} |
};

/// Balanced two-factor splitting Psi = F G with
/// |F|_{L^q(S2)} |G|_{L^2(S2)} = |Psi|_{L^{p'}(S1)}: the Sarason pair,
/// rebalanced by the scalar outer function of the pointwise trace norm.
inline FgPair fg_factor(const TrigSymbol& Psi, const ExponentTriple& e, const CircleGrid& grid) {
    SarasonPair qr = sarason_factor(Psi, grid);
    const GridSamples ps = Psi.samples(grid);
    std::vector<double> rho(ps.size());
    for (std::size_t j = 0; j < ps.size(); ++j) rho[j] = pointwise_norm(ps[j], NormSpec::schatten(1.0));
    const double expo = 0.5 - e.p_prime() / 2.0;
    std::vector<Complex> hs = outer_samples_from_modulus(rho, expo);

    const GridSamples qs = qr.Q.samples(grid), rs = qr.R.samples(grid);
    GridSamples Fs(ps.size()), Gs(ps.size());
    for (std::size_t j = 0; j < ps.size(); ++j) {
        Fs[j] = hs[j] * qs[j];
        Gs[j] = rs[j] / hs[j];
    }
    FgPair out;
    out.F = TrigSymbol::analyze(Fs).riesz(RieszPart::Plus).trimmed(1e-12);
    out.G = TrigSymbol::analyze(Gs).riesz(RieszPart::Plus).trimmed(1e-12);
    {
        GridSamples hh(ps.size());
        for (std::size_t j = 0; j < ps.size(); ++j) {
            CMat m(1, 1);
            m(0, 0) = hs[j];
            hh[j] = m;
        }
        out.h = TrigSymbol::analyze(hh).riesz(RieszPart::Plus).trimmed(1e-12);
    }
    const GridSamples fs2 = out.F.samples(grid), gs2 = out.G.samples(grid);
    for (std::size_t j = 0; j < ps.size(); ++j)
        out.product_residual = std::max(out.product_residual, (fs2[j] * gs2[j] - ps[j]).cwiseAbs().maxCoeff());
    const double nf = lebesgue_norm(out.F, NormSpec::schatten(2.0), grid, e.q());
    const double ng = lebesgue_norm(out.G, NormSpec::schatten(2.0), grid, 2.0);
    const double np = lebesgue_norm(Psi, NormSpec::schatten(1.0), grid, e.p_prime());
    out.norm_identity_gap = std::abs(nf * ng - np);
    return out;
}

struct RankOnePair {
    TrigSymbol u;   ///< analytic column, |u(.)| = |Psi(.)|^{1/2}
    TrigSymbol v;   ///< analytic column, |v(.)| = |Psi(.)|^{1/2}, Psi = u v^t
    TrigSymbol F;   ///< u scaled into L^q
    TrigSymbol G;   ///< v^t scaled into L^2
    TrigSymbol h;   ///< the balancing scalar outer factor
    double product_residual = 0.0;   ///< max_j |u v^t - Psi|
    double analytic_residual = 0.0;  ///< worst co-analytic leakage before cleanup
    double norm_identity_gap = 0.0;
};

/// Independent route for pointwise rank-one Psi: extracts analytic columns
/// u, v with Psi = u v^t and equal pointwise norms, via scalar outer
/// division of a generic analytic column combination.
inline RankOnePair rank_one_factor(const TrigSymbol& Psi, const ExponentTriple& e, const CircleGrid& grid,
                                   double analytic_tol = 1e-7) {
    const int nr = Psi.rows(), nc = Psi.cols();
    const GridSamples ps = Psi.samples(grid);
    std::vector<double> s1(ps.size());
    for (std::size_t j = 0; j < ps.size(); ++j) {
        const Eigen::VectorXd sv = detail::singular_values(ps[j]);
        s1[j] = sv(0);
        if (sv.size() > 1 && sv(1) > 1e-6 * std::max(sv(0), 1e-300))
            throw std::domain_error("rank_one_factor: Psi is not pointwise rank one (sigma2/sigma1 = " +
                                    std::to_string(sv(1) / sv(0)) + ")");
        if (!(s1[j] > 1e-12))
            throw std::domain_error("rank_one_factor: Psi vanishes at a grid node");
    }

    // candidate combination vectors; the best one minimizes inner-factor leakage
    std::vector<Eigen::VectorXcd> cands;
    {
        Eigen::JacobiSVD<CMat> svd(ps[0], Eigen::ComputeThinV);
        cands.push_back(svd.matrixV().col(0).conjugate());
        for (int c = 0; c < nc; ++c) cands.push_back(Eigen::VectorXcd::Unit(nc, c));
        Eigen::VectorXcd mix(nc);
        for (int c = 0; c < nc; ++c) mix(c) = Complex(std::cos(1.7 * (c + 1)), std::sin(0.9 * (c + 2)));
        cands.push_back(mix.normalized());
    }

    RankOnePair best;
    double best_leak = std::numeric_limits<double>::infinity();
    for (const Eigen::VectorXcd& a : cands) {
        // w = Psi a is an analytic column proportional to the left direction
        GridSamples ws(ps.size());
        std::vector<double> wn(ps.size());
        bool degenerate = false;
        for (std::size_t j = 0; j < ps.size(); ++j) {
            ws[j] = ps[j] * a;
            wn[j] = ws[j].norm();
            if (wn[j] < 1e-10 * s1[j]) degenerate = true;
        }
        if (degenerate) continue;

        // xi = outer factor of |w| / |Psi|^{1/2}; u = w / xi has |u| = |Psi|^{1/2}
        std::vector<double> mod(ps.size());
        for (std::size_t j = 0; j < ps.size(); ++j) mod[j] = wn[j] / std::sqrt(s1[j]);
        std::vector<Complex> xi = outer_samples_from_modulus(mod, 1.0);
        GridSamples us(ps.size()), vs(ps.size());
        for (std::size_t j = 0; j < ps.size(); ++j) {
            us[j] = ws[j] / xi[j];
            vs[j] = ps[j].transpose() * us[j].conjugate() / s1[j];
        }
        TrigSymbol u = TrigSymbol::analyze(us);
        TrigSymbol v = TrigSymbol::analyze(vs);

        // a monomial inner factor can land on the wrong side; migrate it
        auto neg_depth = [](const TrigSymbol& x) {
            for (int k = x.min_freq(); k <= x.max_freq(); ++k)
                if (x.coeff_abs(k) > 1e-9) return std::min(k, 0);
            return 0;
        };
        const int shift_v = -neg_depth(v), shift_u = -neg_depth(u);
        if (shift_v > 0 && shift_u == 0) {
            v = v.shifted(shift_v);
            u = u.shifted(-shift_v);
        } else if (shift_u > 0 && shift_v == 0) {
            u = u.shifted(shift_u);
            v = v.shifted(-shift_u);
        }
        const double leak = std::max(u.analytic_residual(), v.analytic_residual());
        if (leak < best_leak) {
            best_leak = leak;
            best.u = u.riesz(RieszPart::Plus).trimmed(1e-12);
            best.v = v.riesz(RieszPart::Plus).trimmed(1e-12);
        }
    }
    if (!(best_leak < analytic_tol))
        throw std::runtime_error("rank_one_factor: could not produce analytic rank-one columns (leakage " +
                                 std::to_string(best_leak) + ")");
    best.analytic_residual = best_leak;

    // balance into F = h u (L^q) and G = v^t / h (L^2)
    const double expo = 0.5 - e.p_prime() / 2.0;
    std::vector<Complex> hs = outer_samples_from_modulus(s1, expo);
    const GridSamples us2 = best.u.samples(grid), vs2 = best.v.samples(grid);
    GridSamples Fs(ps.size()), Gs(ps.size()), hh(ps.size());
    for (std::size_t j = 0; j < ps.size(); ++j) {
        Fs[j] = hs[j] * us2[j];
        Gs[j] = (vs2[j] / hs[j]).transpose();
        CMat m(1, 1);
        m(0, 0) = hs[j];
        hh[j] = m;
        best.product_residual =
            std::max(best.product_residual, (us2[j] * vs2[j].transpose() - ps[j]).cwiseAbs().maxCoeff());
    }
    best.F = TrigSymbol::analyze(Fs).riesz(RieszPart::Plus).trimmed(1e-12);
    best.G = TrigSymbol::analyze(Gs).riesz(RieszPart::Plus).trimmed(1e-12);
    best.h = TrigSymbol::analyze(hh).riesz(RieszPart::Plus).trimmed(1e-12);
    const double nf = lebesgue_norm(best.F, NormSpec::schatten(2.0), grid, e.q());
    const double ng = lebesgue_norm(best.G, NormSpec::schatten(2.0), grid, 2.0);
    const double np = lebesgue_norm(Psi, NormSpec::schatten(1.0), grid, e.p_prime());
    best.norm_identity_gap = std::abs(nf * ng - np);
    return best;
}

// ---------------------------------------------------------------------------
// thematic completion (2x2) and factorization bundles
// ---------------------------------------------------------------------------

struct ThematicResult {
    TrigSymbol V;                 ///< unitary-valued completion (first column = v)
    double unitarity_residual = 0.0;
    double unit_norm_residual = 0.0;
};

/// Completes an analytic, pointwise-unit 2x1 column v to the unitary-valued
///     V = [ v , conj-column ],  conj-column = (-conj(v2), conj(v1))^t,
/// whose determinant is identically 1.
inline ThematicResult thematic_complete_2(const TrigSymbol& v, const CircleGrid& grid, double tol = 1e-8) {
    if (v.rows() != 2 || v.cols() != 1) throw std::invalid_argument("thematic_complete_2: 2x1 column required");
    if (!v.is_analytic(tol))
        throw std::invalid_argument("thematic_complete_2: column must be analytic (residual " +
                                    std::to_string(v.analytic_residual()) + ")");
    ThematicResult out;
    const GridSamples vs = v.samples(grid);
    for (const CMat& m : vs) out.unit_norm_residual = std::max(out.unit_norm_residual, std::abs(m.norm() - 1.0));
    if (out.unit_norm_residual > tol)
        throw std::invalid_argument("thematic_complete_2: column is not pointwise unit (deviation " +
                                    std::to_string(out.unit_norm_residual) + ")");
    TrigSymbol v1 = v.entry(0, 0), v2 = v.entry(1, 0);
    TrigSymbol second(2, 1);
    {
        TrigSymbol top = v2.conjugate() * Complex(-1.0, 0.0);
        TrigSymbol bot = v1.conjugate();
        for (int k = std::min(top.min_freq(), bot.min_freq()); k <= std::max(top.max_freq(), bot.max_freq()); ++k) {
            CMat m(2, 1);
            m(0, 0) = top.coeff(k)(0, 0);
            m(1, 0) = bot.coeff(k)(0, 0);
            second.set_coeff(k, m);
        }
    }
    out.V = TrigSymbol::hcat(v, second.trimmed(0.0));
    const GridSamples Vs = out.V.samples(grid);
    for (const CMat& m : Vs)
        out.unitarity_residual = std::max(out.unitarity_residual,
                                          (m.adjoint() * m - CMat::Identity(2, 2)).cwiseAbs().maxCoeff());
    return out;
}

/// Everything the order-k block diagonalization of Phi - Q produces.
struct FactorizationBundle {
    int k = 1;
    TrigSymbol V, W;          ///< unitary-valued symbols; W (Phi - Q) V is block diagonal
    TrigSymbol v, w;          ///< inner columns generating V and W^t
    TrigSymbol Delta;         ///< k x k upper block, badly approximable
    TrigSymbol PhiSharp;      ///< (n-k) x (n-k) residual block
    TrigSymbol Q;             ///< the reference best approximant
    TrigSymbol h;             ///< scalar outer, |h|^{2/p} = distance profile
    TrigSymbol kappa;         ///< scalar outer, |kappa| = distance profile
    std::vector<double> distance_profile;
    double offdiag_residual = 0.0;
    double unimodular_residual = 0.0;  ///< max | |Delta| - d | on the grid
    double bound_residual = 0.0;       ///< max ( |PhiSharp| - |Delta| )_+ on the grid
};

/// Pointwise operator-norm profile of Phi - Q on the grid.
inline std::vector<double> distance_function(const TrigSymbol& Phi, const TrigSymbol& Q, const CircleGrid& grid) {
    const GridSamples es = (Phi - Q).samples(grid);
    std::vector<double> out(es.size());
    for (std::size_t j = 0; j < es.size(); ++j) out[j] = detail::operator_norm(es[j]);
    return out;
}

/// Builds the k = 1 factorization bundle of a 2x2 symbol from a maximizing
/// vector f of its (column-count 1) Hankel operator: the pair of inner
/// columns comes from f and from the conjugate-shifted image P_-(Phi f).
inline FactorizationBundle extract_bundle_2x2(const TrigSymbol& Phi, const TrigSymbol& Q, const TrigSymbol& f,
                                              const ExponentTriple& e, const CircleGrid& grid,
                                              double tol = 1e-6) {
    if (Phi.rows() != 2 || Phi.cols() != 2) throw std::invalid_argument("extract_bundle_2x2: 2x2 symbols only");
    if (f.rows() != 2 || f.cols() != 1) throw std::invalid_argument("extract_bundle_2x2: f must be 2x1");

    FactorizationBundle out;
    out.k = 1;
    out.Q = Q;
    out.distance_profile = distance_function(Phi, Q, grid);

    // v = f / outer(|f|): the inner direction of the maximizing vector
    const GridSamples fs = f.samples(grid);
    std::vector<double> rho(fs.size());
    for (std::size_t j = 0; j < fs.size(); ++j) {
        rho[j] = fs[j].norm();
        if (!(rho[j] > 1e-10)) throw std::domain_error("extract_bundle_2x2: maximizing vector vanishes at a node");
    }
    std::vector<Complex> Fo = outer_samples_from_modulus(rho, 1.0);
    GridSamples vsamp(fs.size());
    for (std::size_t j = 0; j < fs.size(); ++j) vsamp[j] = fs[j] / Fo[j];
    TrigSymbol v = TrigSymbol::analyze(vsamp);
    if (v.analytic_residual() > tol)
        throw std::runtime_error("extract_bundle_2x2: inner direction of f is not analytic (residual " +
                                 std::to_string(v.analytic_residual()) + "); a scalar inner factor blocks the split");
    out.v = v.riesz(RieszPart::Plus).trimmed(1e-12);

    // w-direction from the image: g = conj(z) * conj(P_-((Phi - Q) f))
    const TrigSymbol b = ((Phi - Q) * f).riesz(RieszPart::Minus);
    const TrigSymbol gsym = b.conjugate().shifted(-1);
    const GridSamples gs = gsym.samples(grid);
    std::vector<double> grho(gs.size());
    for (std::size_t j = 0; j < gs.size(); ++j) {
        grho[j] = gs[j].norm();
        if (!(grho[j] > 1e-10)) throw std::domain_error("extract_bundle_2x2: Hankel image vanishes at a node");
    }
    std::vector<Complex> Go = outer_samples_from_modulus(grho, 1.0);
    GridSamples wsamp(gs.size());
    for (std::size_t j = 0; j < gs.size(); ++j) wsamp[j] = gs[j] / Go[j];
    TrigSymbol w = TrigSymbol::analyze(wsamp);
    if (w.analytic_residual() > tol)
        throw std::runtime_error("extract_bundle_2x2: inner direction of the image is not analytic (residual " +
                                 std::to_string(w.analytic_residual()) + ")");
    out.w = w.riesz(RieszPart::Plus).trimmed(1e-12);

    ThematicResult tv = thematic_complete_2(out.v, grid);
    ThematicResult tw = thematic_complete_2(out.w, grid);
    out.V = tv.V;
    out.W = tw.V.transpose();

    // the middle must come out block diagonal: W (Phi - Q) V = diag(Delta, PhiSharp)
    const TrigSymbol mid = (out.W * (Phi - Q) * out.V).trimmed(1e-13);
    out.Delta = mid.entry(0, 0);
    out.PhiSharp = mid.entry(1, 1);
    {
        const GridSamples ms = mid.samples(grid);
        for (std::size_t j = 0; j < ms.size(); ++j) {
            out.offdiag_residual = std::max(out.offdiag_residual,
                                            std::max(std::abs(ms[j](0, 1)), std::abs(ms[j](1, 0))));
            out.unimodular_residual =
                std::max(out.unimodular_residual, std::abs(std::abs(ms[j](0, 0)) - out.distance_profile[j]));
            out.bound_residual =
                std::max(out.bound_residual, std::abs(ms[j](1, 1)) - out.distance_profile[j]);
        }
    }

    std::vector<double> dp = out.distance_profile, dh(dp.size());
    for (std::size_t j = 0; j < dp.size(); ++j) {
        if (!(dp[j] > 1e-12))
            throw std::domain_error("extract_bundle_2x2: distance profile vanishes at a node (log is not integrable)");
        dh[j] = std::pow(dp[j], e.p() / 2.0);
    }
    {
        std::vector<Complex> ks = outer_samples_from_modulus(dp, 1.0), hsb = outer_samples_from_modulus(dh, 1.0);
        GridSamples km(dp.size()), hm(dp.size());
        for (std::size_t j = 0; j < dp.size(); ++j) {
            CMat a(1, 1), bm(1, 1);
            a(0, 0) = ks[j];
            bm(0, 0) = hsb[j];
            km[j] = a;
            hm[j] = bm;
        }
        out.kappa = TrigSymbol::analyze(km).riesz(RieszPart::Plus).trimmed(1e-12);
        out.h = TrigSymbol::analyze(hm).riesz(RieszPart::Plus).trimmed(1e-12);
    }
    return out;
}

/// Assembles Phi = W^* diag(Delta, PhiSharp) V^* (the generator inverse to
/// extract_bundle_2x2 with Q = 0).  Checks the pointwise domination
/// |PhiSharp| <= |Delta| that badly approximable block symbols require.
inline TrigSymbol build_badly_approximable_matrix(const TrigSymbol& Delta, const TrigSymbol& PhiSharp,
                                                  const TrigSymbol& V, const TrigSymbol& W,
                                                  const CircleGrid& grid, double tol = 1e-9) {
    const GridSamples ds = Delta.samples(grid), ss = PhiSharp.samples(grid);
    for (std::size_t j = 0; j < ds.size(); ++j) {
        if (detail::operator_norm(ss[j]) > detail::operator_norm(ds[j]) + tol)
            throw std::invalid_argument(
                "build_badly_approximable_matrix: residual block exceeds the unimodular block at node " +
                std::to_string(j));
    }
    return (W.adjoint() * TrigSymbol::block_diag(Delta, PhiSharp) * V.adjoint()).trimmed(1e-13);
}

struct ParametrizeResult {
    TrigSymbol R;                  ///< the candidate best approximant
    double analytic_residual = 0.0;
    bool admissible = true;
    double worst_violation = 0.0;  ///< max ( |PhiSharp - RSharp| - |Delta| ) over nodes
    int worst_node = -1;
};

/// Best-approximant parametrization: R = Q + W^* diag(0, RSharp) V^* is a
/// best approximant exactly when |(PhiSharp - RSharp)(.)| <= |Delta(.)|.
/// Inadmissible RSharp is rejected with the worst node reported.
inline ParametrizeResult parametrize_best_approximants(const TrigSymbol& Phi, const FactorizationBundle& bundle,
                                                       const TrigSymbol& RSharp, const CircleGrid& grid,
                                                       double tol = 1e-8) {
    (void)Phi;
    if (!RSharp.is_analytic(1e-10))
        throw std::invalid_argument("parametrize_best_approximants: RSharp must be analytic");
    ParametrizeResult out;
    const GridSamples es = (bundle.PhiSharp - RSharp).samples(grid);
    const GridSamples dl = bundle.Delta.samples(grid);
    for (std::size_t j = 0; j < es.size(); ++j) {
        const double excess = detail::operator_norm(es[j]) - detail::operator_norm(dl[j]);
        if (excess > out.worst_violation) {
            out.worst_violation = excess;
            out.worst_node = static_cast<int>(j);
        }
    }
    if (out.worst_violation > tol) {
        out.admissible = false;
        return out;
    }
    TrigSymbol zero_k(bundle.k, bundle.k);
    TrigSymbol lift = bundle.W.adjoint() * TrigSymbol::block_diag(zero_k, RSharp) * bundle.V.adjoint();
    TrigSymbol R = (bundle.Q + lift).trimmed(1e-13);
    out.analytic_residual = R.analytic_residual();
    out.R = R.riesz(RieszPart::Plus).trimmed(1e-13);
    return out;
}

// ---------------------------------------------------------------------------
// finite scalar Nehari (sup-norm) solver
// ---------------------------------------------------------------------------

struct NehariScalarSolution {
    TrigSymbol best;               ///< analytic best sup-norm approximant
    double error = 0.0;            ///< top singular value of the finite Hankel matrix
    TrigSymbol maximizer;          ///< analytic polynomial achieving the norm
    double flatness_residual = 0.0;  ///< max | |psi - best| - error | over the grid
    double analytic_residual = 0.0;  ///< co-analytic leakage zeroed in `best`
};

/// Best analytic sup-norm approximation of a scalar with finitely many
/// co-analytic coefficients, through the singular value decomposition of its
/// finite Hankel matrix.  The error function has constant modulus equal to
/// the top singular value.
inline NehariScalarSolution reduced_nehari_scalar(const TrigSymbol& psi, const CircleGrid& grid,
                                                  double neg_tol = 1e-11) {
    if (!psi.is_scalar()) throw std::invalid_argument("reduced_nehari_scalar: scalar symbols only");
    int s = 0;
    for (int k = psi.min_freq(); k <= -1; ++k)
        if (psi.coeff_abs(k) > neg_tol) s = std::max(s, -k);
    NehariScalarSolution out;
    if (s == 0) {
        out.best = psi.riesz(RieszPart::Plus);
        out.maximizer = TrigSymbol::monomial(0);
        return out;
    }
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; i + j + 1 <= s; ++j) H(i, j) = psi.coeff(-(i + j + 1))(0, 0);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double sigma = svd.singularValues()(0);
    out.error = sigma;

    TrigSymbol f(1, 1);
    for (int i = 0; i < s; ++i) {
        CMat m(1, 1);
        m(0, 0) = svd.matrixV()(i, 0);
        f.set_coeff(i, m);
    }
    out.maximizer = f.trimmed(1e-300);

    // image b = P_-(psi f) has coefficients sigma * u_j at frequency -(j+1)
    TrigSymbol b(1, 1);
    for (int j = 0; j < s; ++j) {
        CMat m(1, 1);
        m(0, 0) = sigma * svd.matrixU()(j, 0);
        b.set_coeff(-(j + 1), m);
    }

    // error function e = b / f has |e| = sigma; the quotient is computed on a
    // grid where f stays away from zero
    CircleGrid work = grid;
    for (int attempt = 0; attempt < 3; ++attempt) {
        const GridSamples fsamp = f.samples(work);
        double fmin = std::numeric_limits<double>::infinity(), fmax = 0.0;
        for (const CMat& m : fsamp) {
            fmin = std::min(fmin, std::abs(m(0, 0)));
            fmax = std::max(fmax, std::abs(m(0, 0)));
        }
        if (fmin > 1e-9 * fmax || work.size() >= 1 << 14) break;
        work = CircleGrid(work.size() * 2);
    }
    const GridSamples fsamp = f.samples(work), bsamp = b.samples(work), psamp = psi.samples(work);
    GridSamples qsamp(fsamp.size());
    for (std::size_t j = 0; j < fsamp.size(); ++j)
        qsamp[j] = psamp[j] - bsamp[j].cwiseQuotient(fsamp[j]);
    TrigSymbol q = TrigSymbol::analyze(qsamp);
    out.analytic_residual = q.analytic_residual();
    out.best = q.riesz(RieszPart::Plus).trimmed(1e-13);

    const GridSamples esamp = (psi - out.best).samples(work);
    for (const CMat& m : esamp)
        out.flatness_residual = std::max(out.flatness_residual, std::abs(std::abs(m(0, 0)) - sigma));
    return out;
}

}  // namespace lpnehari
