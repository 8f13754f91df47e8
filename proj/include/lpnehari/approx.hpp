#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpnehari/exponents.hpp"
#include "lpnehari/factorize.hpp"
#include "lpnehari/fft.hpp"
#include "lpnehari/grid.hpp"
#include "lpnehari/hankel.hpp"
#include "lpnehari/norms.hpp"
#include "lpnehari/symbol.hpp"

namespace lpnehari {

namespace detail {

/// M^e for a small Hermitian PSD matrix by repeated squaring.
inline CMat hermitian_power(CMat M, int e) {
    CMat acc = CMat::Identity(M.rows(), M.cols());
    while (e > 0) {
        if (e & 1) acc = acc * M;
        M = M * M;
        e >>= 1;
    }
    return acc;
}

/// Value and gradient of the Schatten-r norm (r even) without an SVD:
/// |E|_{S_r} = trace((E^*E)^{r/2})^{1/r};  d|E| = Re<grad, dE>.
struct SmoothNormEval {
    double value = 0.0;
    CMat grad;
};

inline SmoothNormEval schatten_even_eval(const CMat& E, int r) {
    SmoothNormEval out;
    const double fro = E.norm();
    if (fro < 1e-300) {
        out.grad = CMat::Zero(E.rows(), E.cols());
        return out;
    }
    const CMat Es = E / fro;
    const CMat M = Es.adjoint() * Es;
    const CMat P = hermitian_power(M, r / 2 - 1);
    const double tr = std::max((P * M).trace().real(), 1e-300);
    out.value = fro * std::pow(tr, 1.0 / r);
    out.grad = (Es * P) / std::pow(tr, static_cast<double>(r - 1) / r);
    return out;
}

/// Top singular triple (sigma, u, v) with M v = sigma u.
inline double top_triple(const CMat& M, Eigen::VectorXcd& u, Eigen::VectorXcd& v) {
    return top_singular_pair(M, u, v);
}

/// Shared coefficient-space helpers for analytic polynomial iterates.
struct CoeffSpace {
    int m, n, D, N;

    std::vector<CMat> zero() const {
        return std::vector<CMat>(static_cast<std::size_t>(D + 1), CMat::Zero(m, n));
    }
    static double dot_re(const std::vector<CMat>& a, const std::vector<CMat>& b) {
        double s = 0.0;
        for (std::size_t t = 0; t < a.size(); ++t) s += (a[t].conjugate().cwiseProduct(b[t])).sum().real();
        return s;
    }
    static double nrm2(const std::vector<CMat>& a) { return std::sqrt(std::max(dot_re(a, a), 0.0)); }
    static void axpy(std::vector<CMat>& dst, double s, const std::vector<CMat>& src) {
        for (std::size_t t = 0; t < dst.size(); ++t) dst[t] += s * src[t];
    }

    /// Node samples of the polynomial sum_t c_t z^t, one FFT per entry.
    void synthesize(const std::vector<CMat>& c, GridSamples& out) const {
        out.assign(static_cast<std::size_t>(N), CMat::Zero(m, n));
        std::vector<Complex> buf(static_cast<std::size_t>(N));
        for (int r = 0; r < m; ++r)
            for (int cc = 0; cc < n; ++cc) {
                std::fill(buf.begin(), buf.end(), Complex(0, 0));
                for (int t = 0; t <= D; ++t) buf[static_cast<std::size_t>(t)] = c[static_cast<std::size_t>(t)](r, cc);
                fft_inplace(buf, +1);
                for (int j = 0; j < N; ++j) out[static_cast<std::size_t>(j)](r, cc) = buf[static_cast<std::size_t>(j)];
            }
    }

    /// Adjoint of synthesize: coefficient t of sum_j field_j zeta_j^{-t},
    /// restricted to the analytic window 0..D.
    void pullback(const GridSamples& field, std::vector<CMat>& out) const {
        out.assign(static_cast<std::size_t>(D + 1), CMat::Zero(m, n));
        std::vector<Complex> buf(static_cast<std::size_t>(N));
        for (int r = 0; r < m; ++r)
            for (int cc = 0; cc < n; ++cc) {
                for (int j = 0; j < N; ++j) buf[static_cast<std::size_t>(j)] = field[static_cast<std::size_t>(j)](r, cc);
                fft_inplace(buf, -1);
                for (int t = 0; t <= D; ++t) out[static_cast<std::size_t>(t)](r, cc) = buf[static_cast<std::size_t>(t)];
            }
    }

    TrigSymbol to_symbol(const std::vector<CMat>& c) const {
        TrigSymbol s(m, n);
        for (int t = 0; t <= D; ++t) s.set_coeff(t, c[static_cast<std::size_t>(t)]);
        return s.trimmed(1e-300);
    }
    std::vector<CMat> from_symbol(const TrigSymbol& s) const {
        std::vector<CMat> c = zero();
        for (int t = 0; t <= std::min(D, s.max_freq()); ++t)
            if (t >= s.min_freq()) c[static_cast<std::size_t>(t)] = s.coeff(t);
        return c;
    }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// primal distance solver: minimize the grid L^p norm of Phi - Q over
// analytic polynomials Q of a fixed degree
// ---------------------------------------------------------------------------

struct PrimalOptions {
    int degree = 32;
    std::vector<int> stages = {8, 32, 128};  ///< Schatten smoothing exponents (even)
    int stage_iters = 500;
    int polish_iters = 400;
    double tol = 1e-12;
    double dual_bound = 0.0;  ///< known lower bound, drives Polyak polish steps
    std::optional<TrigSymbol> init;
};

struct PrimalResult {
    double value = std::numeric_limits<double>::infinity();  ///< grid L^p of Phi - Q (operator norm pointwise)
    TrigSymbol Q;
    std::vector<double> stage_values;  ///< exact objective after each smoothing stage
    int iterations = 0;
};

inline PrimalResult distance_primal(const TrigSymbol& Phi, const ExponentTriple& e, const CircleGrid& grid,
                                    const PrimalOptions& opts = {}) {
    const int m = Phi.rows(), n = Phi.cols(), D = opts.degree, N = grid.size();
    if (D < 0) throw std::invalid_argument("distance_primal: degree must be >= 0");
    if (N < 2 * (std::max(D, Phi.degree()) + 1))
        throw std::invalid_argument("distance_primal: grid too small for the requested degree");
    const double p = e.p();
    const detail::CoeffSpace sp{m, n, D, N};
    const GridSamples phis = Phi.samples(grid);

    std::vector<CMat> Q = opts.init ? sp.from_symbol(*opts.init) : sp.from_symbol(Phi.riesz(RieszPart::Plus));

    GridSamples qs, field(static_cast<std::size_t>(N), CMat::Zero(m, n));

    // exact objective: pointwise operator norm, grid L^p
    auto exact_value = [&](const std::vector<CMat>& c) {
        sp.synthesize(c, qs);
        double acc = 0.0;
        for (int j = 0; j < N; ++j)
            acc += std::pow(detail::operator_norm(phis[static_cast<std::size_t>(j)] - qs[static_cast<std::size_t>(j)]), p);
        return std::pow(acc / N, 1.0 / p);
    };

    PrimalResult out;
    out.value = exact_value(Q);
    std::vector<CMat> bestQ = Q;
    double bestJ = out.value;
    int iters = 0;

    // smoothed stages: U(Q) = mean_j |E_j|_{S_r}^p, descent with momentum
    for (int r : opts.stages) {
        if (r < 2 || r % 2 != 0) throw std::invalid_argument("distance_primal: stages must be even and >= 2");
        auto stage_value = [&](const std::vector<CMat>& c) {
            sp.synthesize(c, qs);
            double acc = 0.0;
            for (int j = 0; j < N; ++j) {
                const double f =
                    detail::schatten_even_eval(phis[static_cast<std::size_t>(j)] - qs[static_cast<std::size_t>(j)], r).value;
                acc += std::pow(f, p);
            }
            return acc / N;
        };
        // gradient of U with respect to the coefficients (analytic window)
        auto stage_grad = [&](const std::vector<CMat>& c, std::vector<CMat>& g) {
            sp.synthesize(c, qs);
            double acc = 0.0;
            for (int j = 0; j < N; ++j) {
                const detail::SmoothNormEval ev =
                    detail::schatten_even_eval(phis[static_cast<std::size_t>(j)] - qs[static_cast<std::size_t>(j)], r);
                acc += std::pow(ev.value, p);
                field[static_cast<std::size_t>(j)] =
                    (ev.value > 0.0) ? CMat((p / N) * std::pow(ev.value, p - 1.0) * ev.grad) : CMat::Zero(m, n);
            }
            sp.pullback(field, g);
            for (CMat& blk : g) blk = -blk;  // dE = -dQ
            return acc / N;
        };

        std::vector<CMat> prev = Q, grad;
        double U = stage_value(Q);
        double alpha = 1.0;
        int stall = 0;
        for (int it = 0; it < opts.stage_iters; ++it, ++iters) {
            const double beta = static_cast<double>(it) / static_cast<double>(it + 3);
            std::vector<CMat> y = Q;
            for (std::size_t t = 0; t < y.size(); ++t) y[t] += beta * (Q[t] - prev[t]);
            const double Uy = stage_grad(y, grad);
            const double g2 = detail::CoeffSpace::dot_re(grad, grad);
            if (g2 < 1e-30) break;
            bool accepted = false;
            std::vector<CMat> Qn;
            double Un = U;
            while (alpha > 1e-18) {
                Qn = y;
                detail::CoeffSpace::axpy(Qn, -alpha, grad);
                Un = stage_value(Qn);
                if (Un <= Uy - 0.25 * alpha * g2) {
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) break;
            if (Un > U) {  // momentum overshoot: restart from the plain step
                Qn = Q;
                detail::CoeffSpace::axpy(Qn, -alpha, grad);
                Un = stage_value(Qn);
                prev = Q;
            } else {
                prev = Q;
            }
            if (Un <= U) {
                Q = Qn;
                if (U - Un < opts.tol * (1.0 + std::abs(U)))
                    ++stall;
                else
                    stall = 0;
                U = Un;
            } else {
                ++stall;
            }
            alpha = std::min(alpha * 1.4, 1e6);
            if (stall >= 8) break;
        }
        const double J = exact_value(Q);
        out.stage_values.push_back(J);
        if (J < bestJ) {
            bestJ = J;
            bestQ = Q;
        }
    }

    // polish on the exact objective with top-singular-pair subgradients
    Q = bestQ;
    {
        double J = bestJ;
        Eigen::VectorXcd u, v;
        std::vector<CMat> g;
        for (int it = 0; it < opts.polish_iters; ++it, ++iters) {
            sp.synthesize(Q, qs);
            double acc = 0.0;
            for (int j = 0; j < N; ++j) {
                const CMat E = phis[static_cast<std::size_t>(j)] - qs[static_cast<std::size_t>(j)];
                const double s = detail::top_triple(E, u, v);
                acc += std::pow(s, p);
                field[static_cast<std::size_t>(j)] =
                    (s > 0.0) ? CMat(std::pow(s, p - 1.0) / N * (u * v.adjoint())) : CMat::Zero(m, n);
            }
            J = std::pow(acc / N, 1.0 / p);
            if (J < bestJ) {
                bestJ = J;
                bestQ = Q;
            }
            const double scale = std::pow(std::max(acc / N, 1e-300), 1.0 / p - 1.0);
            sp.pullback(field, g);
            for (CMat& blk : g) blk = -scale * blk;  // subgradient of J wrt Q
            const double g2 = detail::CoeffSpace::dot_re(g, g);
            if (g2 < 1e-30) break;
            double target = opts.dual_bound;
            if (!(target > 0.0) || target >= J) target = J * (1.0 - 0.5 / (it + 2.0));
            if (J - target < opts.tol * (1.0 + J)) break;
            const double gamma = (J - target) / g2;
            detail::CoeffSpace::axpy(Q, -gamma, g);
        }
        const double Jend = exact_value(Q);
        if (Jend < bestJ) {
            bestJ = Jend;
            bestQ = Q;
        }
    }

    out.value = bestJ;
    out.Q = sp.to_symbol(bestQ);
    out.iterations = iters;
    return out;
}

// ---------------------------------------------------------------------------
// dual distance solver: maximize Re integral trace(Phi Psi) over Psi in the
// unit ball of L^{p'}(S1) with vanishing analytic projection
// ---------------------------------------------------------------------------

struct DualOptions {
    int degree = 32;
    int max_iters = 500;
    double tol = 1e-12;
    std::vector<TrigSymbol> warm_starts;             ///< candidate Psi's; projected onto the window
    const GridSamples* align_with = nullptr;         ///< error samples of Phi - Q for an aligned start
};

struct DualResult {
    double value = 0.0;       ///< certified lower bound for the distance
    TrigSymbol Psi;           ///< feasible witness: strictly co-momentum (freqs >= 1), trace-norm ball
    double feasibility_gap = 0.0;
    int iterations = 0;
};

namespace detail {

/// Subgradient of the trace norm: sum of u_i v_i^* over significant singular
/// directions.
inline CMat trace_norm_subgradient(const CMat& M) {
    if (M.rows() == 1 && M.cols() == 1) {
        const double a = std::abs(M(0, 0));
        CMat g(1, 1);
        g(0, 0) = a > 1e-300 ? M(0, 0) / a : Complex(0, 0);
        return g;
    }
    Eigen::JacobiSVD<CMat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd s = svd.singularValues();
    CMat g = CMat::Zero(M.rows(), M.cols());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-12 * std::max(s(0), 1e-300)) g += svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
    return g;
}

}  // namespace detail

inline DualResult distance_dual(const TrigSymbol& Phi, const ExponentTriple& e, const CircleGrid& grid,
                                const DualOptions& opts = {}) {
    const int m = Phi.rows(), n = Phi.cols(), D = std::max(opts.degree, 1), N = grid.size();
    if (N < 2 * (std::max(D, Phi.degree()) + 1))
        throw std::invalid_argument("distance_dual: grid too small for the requested degree");
    const double pp = e.p_prime();

    // coefficient space for Psi: n x m blocks at frequencies 1..D
    detail::CoeffSpace sp{n, m, D - 1, N};  // store Psi_t at slot t-1
    auto psi_synthesize = [&](const std::vector<CMat>& c, GridSamples& out) {
        sp.synthesize(c, out);  // gives sum_t c_{t-1} z^{t-1}; multiply by z per node
        for (int j = 0; j < N; ++j) out[static_cast<std::size_t>(j)] *= grid.node(j);
    };
    auto psi_pullback = [&](GridSamples& f, std::vector<CMat>& out) {
        for (int j = 0; j < N; ++j) f[static_cast<std::size_t>(j)] *= std::conj(grid.node(j));
        sp.pullback(f, out);
    };

    // constant pairing representer: value = Re sum_t <T_t, Psi_t>
    std::vector<CMat> T = sp.zero();
    bool any = false;
    for (int t = 1; t <= D; ++t) {
        const CMat c = Phi.coeff(-t).adjoint();
        if (c.cwiseAbs().maxCoeff() > 0.0) any = true;
        T[static_cast<std::size_t>(t - 1)] = c;
    }
    DualResult out;
    out.Psi = TrigSymbol(n, m);
    if (!any) return out;  // analytic symbol: distance 0, witness 0

    GridSamples ps;
    auto ball_norm = [&](const std::vector<CMat>& c) {
        psi_synthesize(c, ps);
        double acc = 0.0;
        for (int j = 0; j < N; ++j) acc += std::pow(pointwise_norm(ps[static_cast<std::size_t>(j)], NormSpec::schatten(1.0)), pp);
        return std::pow(acc / N, 1.0 / pp);
    };
    auto pairing = [&](const std::vector<CMat>& c) {
        Complex z(0, 0);
        for (std::size_t t = 0; t < c.size(); ++t)
            z += (T[t].conjugate().cwiseProduct(c[t])).sum();  // <T_t, Psi_t> = tr(Phi_{-t} Psi_t)
        return z;
    };

    // start candidates
    std::vector<std::vector<CMat>> starts;
    starts.push_back(T);
    if (opts.align_with != nullptr && static_cast<int>(opts.align_with->size()) == N) {
        GridSamples f(static_cast<std::size_t>(N));
        Eigen::VectorXcd u, v;
        for (int j = 0; j < N; ++j) {
            const CMat& E = (*opts.align_with)[static_cast<std::size_t>(j)];
            const double s = detail::top_triple(E, u, v);
            f[static_cast<std::size_t>(j)] = std::pow(s, e.p() - 1.0) * (v * u.adjoint());
        }
        std::vector<CMat> c;
        psi_pullback(f, c);
        starts.push_back(std::move(c));
    }
    for (const TrigSymbol& w : opts.warm_starts) {
        if (w.rows() != n || w.cols() != m)
            throw std::invalid_argument("distance_dual: warm start shape mismatch");
        std::vector<CMat> c = sp.zero();
        for (int t = 1; t <= D; ++t)
            if (t >= w.min_freq() && t <= w.max_freq()) c[static_cast<std::size_t>(t - 1)] = w.coeff(t);
        starts.push_back(std::move(c));
    }

    std::vector<CMat> bestC;
    double bestV = 0.0;
    int iters = 0;
    for (std::vector<CMat>& C : starts) {
        double nu = ball_norm(C);
        if (!(nu > 1e-300)) continue;
        for (CMat& blk : C) blk /= nu;

        auto phase_fix = [&](std::vector<CMat>& c) {
            const Complex z = pairing(c);
            const double a = std::abs(z);
            if (a > 1e-300) {
                const Complex ph = std::conj(z) / a;
                for (CMat& blk : c) blk *= ph;
            }
            return a;
        };
        double V = phase_fix(C);
        double localBest = V;

        double alpha = 1.0;
        int stall = 0;
        for (int it = 0; it < opts.max_iters; ++it, ++iters) {
            // gradient of the ball norm at C (node fields through the S1 subgradient)
            psi_synthesize(C, ps);
            double acc = 0.0;
            std::vector<double> rho(static_cast<std::size_t>(N));
            for (int j = 0; j < N; ++j) {
                rho[static_cast<std::size_t>(j)] = pointwise_norm(ps[static_cast<std::size_t>(j)], NormSpec::schatten(1.0));
                acc += std::pow(rho[static_cast<std::size_t>(j)], pp);
            }
            const double nrm = std::pow(acc / N, 1.0 / pp);
            GridSamples f(static_cast<std::size_t>(N));
            const double scale = std::pow(nrm, 1.0 - pp) / N;
            for (int j = 0; j < N; ++j)
                f[static_cast<std::size_t>(j)] = (scale * std::pow(std::max(rho[static_cast<std::size_t>(j)], 1e-300), pp - 1.0)) *
                                                 detail::trace_norm_subgradient(ps[static_cast<std::size_t>(j)]);
            std::vector<CMat> NG;
            psi_pullback(f, NG);

            // project the representer onto the sphere tangent and line search
            const double ng2 = detail::CoeffSpace::dot_re(NG, NG);
            if (ng2 < 1e-30) break;
            std::vector<CMat> dir = T;
            detail::CoeffSpace::axpy(dir, -detail::CoeffSpace::dot_re(T, NG) / ng2, NG);
            const double d2 = detail::CoeffSpace::nrm2(dir);
            if (d2 < 1e-14 * (1.0 + detail::CoeffSpace::nrm2(T))) break;

            bool improved = false;
            while (alpha > 1e-16) {
                std::vector<CMat> Cn = C;
                detail::CoeffSpace::axpy(Cn, alpha / std::max(d2, 1e-300), dir);
                const double nun = ball_norm(Cn);
                if (nun > 1e-300) {
                    for (CMat& blk : Cn) blk /= nun;
                    const double Vn = std::abs(pairing(Cn));
                    if (Vn > V * (1.0 + 1e-15)) {
                        C = std::move(Cn);
                        V = phase_fix(C);
                        improved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if (!improved) break;
            alpha = std::min(alpha * 1.5, 1e3);
            if (V - localBest < opts.tol * (1.0 + V))
                ++stall;
            else
                stall = 0;
            localBest = std::max(localBest, V);
            if (stall > 10) break;
        }
        if (bestC.empty() || V > bestV) {
            bestV = V;
            bestC = C;
        }
    }
    if (bestC.empty()) return out;

    // final feasibility: rescale onto the ball, report the exact pairing
    double nu = ball_norm(bestC);
    out.feasibility_gap = std::max(0.0, nu - 1.0);
    if (nu > 1.0)
        for (CMat& blk : bestC) blk /= nu;
    out.value = std::abs(pairing(bestC));
    {
        TrigSymbol psi(n, m);
        for (int t = 1; t <= D; ++t) psi.set_coeff(t, bestC[static_cast<std::size_t>(t - 1)]);
        out.Psi = psi.trimmed(1e-300);
    }
    out.iterations = iters;
    return out;
}

// ---------------------------------------------------------------------------
// two-sided certification
// ---------------------------------------------------------------------------

struct CertifyOptions {
    std::vector<int> degrees = {8, 16, 32, 64};
    double tol_gap = 5e-3;  ///< relative duality gap accepted as conclusive
    PrimalOptions primal;   ///< degree/dual_bound/init fields are managed per rung
    DualOptions dual;       ///< degree/warm_starts/align_with fields are managed per rung
    bool p2_fast_path = true;
};

struct ApproximationCertificate {
    double p = 2.0;
    int grid_size = 0;
    double primal_value = std::numeric_limits<double>::infinity();
    double dual_value = 0.0;
    double gap_rel = std::numeric_limits<double>::infinity();
    bool conclusive = false;
    TrigSymbol Q;    ///< best analytic approximant found
    TrigSymbol Psi;  ///< feasible dual witness certifying dual_value
    double dual_feasibility = 0.0;
    std::vector<int> ladder_degrees;
    std::vector<double> ladder_primal, ladder_dual;
    std::vector<double> distance_profile;  ///< pointwise |Phi - Q| on the grid
};

/// Sandwiches the L^p distance from Phi to the analytic class between an
/// explicit approximant (upper bound) and an explicit dual witness (lower
/// bound), walking a degree ladder until the relative gap closes.
inline ApproximationCertificate certify(const TrigSymbol& Phi, const ExponentTriple& e, const CircleGrid& grid,
                                        const CertifyOptions& opts = {}) {
    ApproximationCertificate cert;
    cert.p = e.p();
    cert.grid_size = grid.size();

    const TrigSymbol Qfast = Phi.riesz(RieszPart::Plus).trimmed(1e-300);
    if (e.p() == 2.0 && opts.p2_fast_path) {
        // at p = 2 the analytic projection is optimal for the scalar problem
        // and is the pinned reference approximant in general
        cert.Q = Qfast;
        cert.primal_value = lebesgue_norm(Phi - Qfast, NormSpec::op(), grid, 2.0);
    }

    TrigSymbol prevQ, prevPsi;
    bool haveQ = cert.primal_value < std::numeric_limits<double>::infinity(), havePsi = false;
    if (haveQ) prevQ = cert.Q;

    for (int D : opts.degrees) {
        if (grid.size() < 2 * (std::max(D, Phi.degree()) + 1)) break;  // ladder outgrew the grid
        if (!(e.p() == 2.0 && opts.p2_fast_path)) {
            PrimalOptions po = opts.primal;
            po.degree = D;
            po.dual_bound = cert.dual_value;
            if (haveQ) po.init = prevQ;
            PrimalResult pr = distance_primal(Phi, e, grid, po);
            if (pr.value < cert.primal_value) {
                cert.primal_value = pr.value;
                cert.Q = pr.Q;
            }
            prevQ = cert.Q;
            haveQ = true;
        }
        DualOptions dopts = opts.dual;
        dopts.degree = D;
        if (havePsi) dopts.warm_starts.insert(dopts.warm_starts.begin(), prevPsi);
        GridSamples es;
        if (haveQ) {
            es = (Phi - cert.Q).samples(grid);
            dopts.align_with = &es;
        }
        DualResult dr = distance_dual(Phi, e, grid, dopts);
        if (dr.value > cert.dual_value) {
            cert.dual_value = dr.value;
            cert.Psi = dr.Psi;
            cert.dual_feasibility = dr.feasibility_gap;
        }
        if (dr.value > 0.0) {
            prevPsi = dr.Psi;
            havePsi = true;
        }
        cert.ladder_degrees.push_back(D);
        cert.ladder_primal.push_back(cert.primal_value);
        cert.ladder_dual.push_back(cert.dual_value);
        cert.gap_rel = (cert.primal_value - cert.dual_value) / std::max(cert.primal_value, 1e-300);
        if (cert.primal_value < 1e-12 || cert.gap_rel <= opts.tol_gap) break;
    }
    if (cert.primal_value == std::numeric_limits<double>::infinity()) {
        cert.Q = Qfast;
        cert.primal_value = lebesgue_norm(Phi - Qfast, NormSpec::op(), grid, e.p());
    }
    cert.gap_rel = (cert.primal_value - cert.dual_value) / std::max(cert.primal_value, 1e-300);
    cert.conclusive = cert.primal_value < 1e-12 || cert.gap_rel <= opts.tol_gap;
    cert.distance_profile = distance_function(Phi, cert.Q, grid);
    return cert;
}

// ---------------------------------------------------------------------------
// respectable / weird classification, order, gender
// ---------------------------------------------------------------------------

enum class Respectability { Respectable, WeirdEvidence, Inconclusive };

struct ClassificationOptions {
    std::vector<int> window_degrees = {16, 32, 64};
    NormSearchOptions search;
    CertifyOptions cert;
    double tol_match = 1e-2;  ///< relative agreement between Hankel value and distance
};

struct RespectabilityReport {
    Respectability verdict = Respectability::Inconclusive;
    double distance = 0.0;  ///< certified upper value (primal)
    double best_k1 = 0.0;   ///< best single-column Hankel lower bound
    std::vector<double> per_degree;
    ApproximationCertificate cert;
    bool used_rank_one_warm_start = false;
};

/// A symbol is "respectable" when its single-column Hankel operator already
/// attains the distance; the alternative ("weird") leaves a persistent gap.
inline RespectabilityReport respectability_test(const TrigSymbol& Phi, const ExponentTriple& e,
                                                const CircleGrid& grid, const ClassificationOptions& opts = {}) {
    RespectabilityReport rep;
    rep.cert = certify(Phi, e, grid, opts.cert);
    rep.distance = rep.cert.primal_value;
    if (rep.distance < 1e-12) {
        rep.verdict = Respectability::Respectable;  // analytic: the zero operator attains 0
        return rep;
    }

    NormSearchOptions search = opts.search;
    search.upper_bound = rep.distance;
    if (rep.cert.Psi.max_abs_coeff() > 0.0) {
        try {
            RankOnePair ro = rank_one_factor(rep.cert.Psi, e, grid);
            search.warm_starts.push_back(ro.F);
            rep.used_rank_one_warm_start = true;
        } catch (const std::exception&) {
            // dual witness not pointwise rank one; random restarts must do
        }
    }

    for (int D : opts.window_degrees) {
        HankelOperatorSpec spec = build_hankel(Phi, 1, D, -1, e, grid);
        NormSearchReport sr = hankel_norm_lower_bound(spec, search);
        rep.per_degree.push_back(sr.best_value);
        rep.best_k1 = std::max(rep.best_k1, sr.best_value);
        if (rep.best_k1 >= (1.0 - opts.tol_match) * rep.distance) break;  // already matched
    }

    const bool matched = rep.best_k1 >= (1.0 - opts.tol_match) * rep.distance;
    bool stabilized = false;
    if (rep.per_degree.size() >= 2) {
        const double a = rep.per_degree[rep.per_degree.size() - 2], b = rep.per_degree.back();
        stabilized = std::abs(b - a) <= 1e-3 * std::max(rep.distance, 1e-300);
    }
    if (rep.cert.conclusive && matched)
        rep.verdict = Respectability::Respectable;
    else if (rep.cert.conclusive && stabilized && rep.best_k1 < (1.0 - 3.0 * opts.tol_match) * rep.distance)
        rep.verdict = Respectability::WeirdEvidence;
    else
        rep.verdict = Respectability::Inconclusive;
    return rep;
}

struct OrderReport {
    int order = 0;  ///< least column count whose Hankel value matches the distance (0 = analytic)
    std::vector<double> values_by_k;
    double distance = 0.0;
    int dual_modal_rank = 0;
    bool consistent = true;  ///< dual witness rank does not exceed the order
    ApproximationCertificate cert;
};

/// Least k with |H restricted to k columns| = distance.  Warm starts come
/// from factoring the dual witness.
inline OrderReport order_estimate(const TrigSymbol& Phi, const ExponentTriple& e, const CircleGrid& grid,
                                  const ClassificationOptions& opts = {}) {
    OrderReport rep;
    rep.cert = certify(Phi, e, grid, opts.cert);
    rep.distance = rep.cert.primal_value;
    if (rep.distance < 1e-12) return rep;

    if (rep.cert.Psi.max_abs_coeff() > 0.0)
        rep.dual_modal_rank = detail::modal_value(detail::rank_profile_of(rep.cert.Psi.samples(grid)));

    const int n = Phi.cols();
    const int D = opts.window_degrees.empty() ? 32 : opts.window_degrees.back();
    rep.order = n;
    bool found = false;
    for (int k = 1; k <= n; ++k) {
        NormSearchOptions search = opts.search;
        search.upper_bound = rep.distance;
        if (rep.cert.Psi.max_abs_coeff() > 0.0) {
            if (k == 1) {
                try {
                    search.warm_starts.push_back(rank_one_factor(rep.cert.Psi, e, grid).F);
                } catch (const std::exception&) {
                }
            } else {
                try {
                    FgPair fg = fg_factor(rep.cert.Psi, e, grid);
                    if (fg.F.cols() >= k) {
                        TrigSymbol block(fg.F.rows(), k);
                        for (int t = fg.F.min_freq(); t <= fg.F.max_freq(); ++t)
                            block.set_coeff(t, fg.F.coeff(t).leftCols(k));
                        search.warm_starts.push_back(block.trimmed(1e-300));
                    }
                } catch (const std::exception&) {
                }
            }
        }
        HankelOperatorSpec spec = build_hankel(Phi, k, D, -1, e, grid);
        NormSearchReport sr = hankel_norm_lower_bound(spec, search);
        rep.values_by_k.push_back(sr.best_value);
        if (!found && sr.best_value >= (1.0 - opts.tol_match) * rep.distance) {
            rep.order = k;
            found = true;
            break;
        }
    }
    rep.consistent = !found || rep.dual_modal_rank <= rep.order;
    return rep;
}

struct GenderReport {
    int gender = 0;  ///< maximal modal witness rank among near-optimal maximizers
    double distance = 0.0;
    double best_value = 0.0;
    std::vector<int> witness_ranks;
    ApproximationCertificate cert;
};

/// Maximal pointwise rank among (near-)maximizing vectors of the full-width
/// Hankel operator.
inline GenderReport gender_estimate(const TrigSymbol& Phi, const ExponentTriple& e, const CircleGrid& grid,
                                    const ClassificationOptions& opts = {}) {
    GenderReport rep;
    rep.cert = certify(Phi, e, grid, opts.cert);
    rep.distance = rep.cert.primal_value;
    if (rep.distance < 1e-12) return rep;

    const int n = Phi.cols();
    const int D = opts.window_degrees.empty() ? 32 : opts.window_degrees.back();
    NormSearchOptions search = opts.search;
    search.keep_all_witnesses = true;
    search.upper_bound = rep.distance;
    if (rep.cert.Psi.max_abs_coeff() > 0.0) {
        try {
            FgPair fg = fg_factor(rep.cert.Psi, e, grid);
            if (fg.F.cols() == n) search.warm_starts.push_back(fg.F);
        } catch (const std::exception&) {
        }
        try {
            RankOnePair ro = rank_one_factor(rep.cert.Psi, e, grid);
            TrigSymbol wide(Phi.cols(), n);
            for (int t = ro.F.min_freq(); t <= ro.F.max_freq(); ++t) {
                CMat blk = CMat::Zero(Phi.cols(), n);
                blk.col(0) = ro.F.coeff(t).col(0);
                wide.set_coeff(t, blk);
            }
            search.warm_starts.push_back(wide.trimmed(1e-300));
        } catch (const std::exception&) {
        }
    }
    HankelOperatorSpec spec = build_hankel(Phi, n, D, -1, e, grid);
    NormSearchReport sr = hankel_norm_lower_bound(spec, search);
    rep.best_value = sr.best_value;

    const double floor = (1.0 - opts.tol_match) * std::max(rep.distance, sr.best_value);
    for (std::size_t i = 0; i < sr.all_witnesses.size(); ++i) {
        if (sr.restart_values[i] < floor) continue;
        const int r = detail::modal_value(detail::rank_profile_of(sr.all_witnesses[i].samples(grid)));
        rep.witness_ranks.push_back(r);
        rep.gender = std::max(rep.gender, r);
    }
    if (rep.gender == 0 && sr.best_value > 0.0) {
        rep.gender = sr.modal_rank;  // fall back to the best witness alone
        rep.witness_ranks.push_back(sr.modal_rank);
    }
    return rep;
}

}  // namespace lpnehari
