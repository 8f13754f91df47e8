#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "lpnehari/exponents.hpp"
#include "lpnehari/grid.hpp"
#include "lpnehari/norms.hpp"
#include "lpnehari/parallel.hpp"
#include "lpnehari/symbol.hpp"

namespace lpnehari {

/// Finite-window model of the Hankel operator with symbol Phi acting on
/// analytic matrix polynomials with k columns:
///
///     F (n x k, frequencies 0..input_degree)
///        |-->  P_minus(Phi F), kept on frequencies -1..-output_degree.
///
/// Since the symbol is a trigonometric polynomial, the co-analytic output is
/// exactly band-limited, so the window loses nothing once output_degree
/// reaches the symbol's co-analytic degree.  The flattened matrix acts on one
/// input column at a time; the k columns couple only through the L^q norm of
/// the input.
class HankelOperatorSpec {
  public:
    HankelOperatorSpec(TrigSymbol symbol, int column_count, int input_degree, int output_degree,
                       ExponentTriple exponents, CircleGrid grid)
        : symbol_(std::move(symbol)),
          k_(column_count),
          m_in_(input_degree),
          m_out_(output_degree),
          exponents_(exponents),
          grid_(grid) {
        if (k_ < 1) throw std::invalid_argument("HankelOperatorSpec: column count must be >= 1");
        if (m_in_ < 0) throw std::invalid_argument("HankelOperatorSpec: input degree must be >= 0");
        const int neg_deg = std::max(0, -symbol_.min_freq());
        if (m_out_ < neg_deg) {
            double lost = 0.0;
            for (int d = m_out_ + 1; d <= neg_deg; ++d) lost += symbol_.coeff(-d).squaredNorm();
            throw std::invalid_argument(
                "HankelOperatorSpec: output window drops co-analytic symbol mass (L2 bound " +
                std::to_string(std::sqrt(lost)) + "); need output degree >= " + std::to_string(neg_deg));
        }
        if (grid_.size() < 2 * (m_in_ + symbol_.degree()) + 2)
            throw std::invalid_argument("HankelOperatorSpec: grid too small to resolve Phi*F products");
        eff_out_ = neg_deg;  // rows beyond the symbol's co-analytic degree vanish
        build_matrix();
    }

    const TrigSymbol& symbol() const { return symbol_; }
    int column_count() const { return k_; }
    int input_degree() const { return m_in_; }
    int output_degree() const { return m_out_; }
    const ExponentTriple& exponents() const { return exponents_; }
    const CircleGrid& grid() const { return grid_; }

    /// Flattened action on a single input column (stacked coefficients).
    const Eigen::MatrixXcd& matrix() const { return matrix_; }

    /// Exact application by coefficient convolution; F must be analytic n x k
    /// with degree <= input_degree.
    TrigSymbol apply(const TrigSymbol& F) const {
        if (F.rows() != symbol_.cols() || F.cols() != k_)
            throw std::invalid_argument("HankelOperatorSpec::apply: operand shape mismatch");
        if (!F.is_analytic(1e-12) || F.max_freq() > m_in_)
            throw std::invalid_argument("HankelOperatorSpec::apply: operand must be analytic with degree <= input window");
        TrigSymbol full = (symbol_ * F).riesz(RieszPart::Minus);
        TrigSymbol out(full.rows(), full.cols());
        for (int d = 1; d <= m_out_; ++d) out.set_coeff(-d, full.coeff(-d));
        return out.trimmed(0.0);
    }

  private:
    void build_matrix() {
        const int m = symbol_.rows(), n = symbol_.cols();
        matrix_ = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(m) * eff_out_,
                                         static_cast<Eigen::Index>(n) * (m_in_ + 1));
        for (int d = 1; d <= eff_out_; ++d) {
            for (int t = 0; t <= m_in_; ++t) {
                const CMat block = symbol_.coeff(-d - t);
                if (block.cwiseAbs().maxCoeff() == 0.0) continue;
                matrix_.block((d - 1) * m, t * n, m, n) = block;
            }
        }
    }

    TrigSymbol symbol_;
    int k_, m_in_, m_out_, eff_out_;
    ExponentTriple exponents_;
    CircleGrid grid_;
    Eigen::MatrixXcd matrix_;
};

inline HankelOperatorSpec build_hankel(const TrigSymbol& symbol, int column_count, int input_degree,
                                       int output_degree, const ExponentTriple& exponents,
                                       const CircleGrid& grid) {
    if (output_degree < 0) output_degree = input_degree + symbol.degree();
    return HankelOperatorSpec(symbol, column_count, input_degree, output_degree, exponents, grid);
}

struct NormSearchOptions {
    int restarts = 20;
    std::uint64_t seed = 1;
    int max_iters = 600;
    double tol = 1e-12;
    std::vector<TrigSymbol> warm_starts;  ///< analytic n x k candidates, tried before random starts
    double upper_bound = std::numeric_limits<double>::quiet_NaN();  ///< optional known bound to audit
    bool keep_all_witnesses = false;      ///< retain every restart's converged witness
};

struct NormSearchReport {
    double best_value = 0.0;
    TrigSymbol witness;                  ///< normalized to unit L^q norm on the grid
    std::vector<double> restart_values;  ///< one converged value per start, in start order
    double plateau_spread = 0.0;         ///< max - min over the top quartile of restart values
    double recompute_gap = 0.0;          ///< |optimizer value - convolution-path value|
    std::vector<int> rank_profile;       ///< pointwise numerical rank of the witness
    int modal_rank = 0;
    bool upper_bound_respected = true;
    std::vector<TrigSymbol> all_witnesses;  ///< per-restart witnesses (when requested)
};

namespace detail {

/// Pointwise numerical rank profile of a (sampled) matrix function.
inline std::vector<int> rank_profile_of(const GridSamples& samples, double rel_tol = 1e-6) {
    std::vector<int> out(samples.size(), 0);
    for (std::size_t j = 0; j < samples.size(); ++j) {
        const Eigen::VectorXd s = singular_values(samples[j]);
        int r = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(i) > rel_tol * std::max(s(0), 1e-300)) ++r;
        out[j] = r;
    }
    return out;
}

inline int modal_value(const std::vector<int>& v) {
    if (v.empty()) return 0;
    std::vector<int> counts(16, 0);
    for (int x : v)
        if (x >= 0 && x < 16) ++counts[static_cast<std::size_t>(x)];
    int best = 0;
    for (int r = 1; r < 16; ++r)
        if (counts[static_cast<std::size_t>(r)] > counts[static_cast<std::size_t>(best)]) best = r;
    return best;
}

/// State for the ratio ascent over one Hankel window.  The variable is the
/// stacked coefficient matrix C (rows: frequency-major entries of one input
/// column, cols: the k input columns).
class HankelAscent {
  public:
    explicit HankelAscent(const HankelOperatorSpec& spec)
        : spec_(spec),
          n_(spec.symbol().cols()),
          k_(spec.column_count()),
          tcount_(spec.input_degree() + 1),
          N_(spec.grid().size()),
          q_(spec.exponents().q()),
          q_inf_(spec.exponents().q_is_infinite()) {}

    struct Eval {
        double num = 0.0, den = 0.0;
        double value() const { return den > 0.0 ? num / den : 0.0; }
        double logratio() const {
            return (num > 0.0 && den > 0.0) ? std::log(num) - std::log(den)
                                            : -std::numeric_limits<double>::infinity();
        }
    };

    /// F(zeta_j) for all nodes, one FFT per (row, column) entry.
    void synthesize(const Eigen::MatrixXcd& C, std::vector<Eigen::MatrixXcd>& F) const {
        F.assign(static_cast<std::size_t>(N_), Eigen::MatrixXcd::Zero(n_, k_));
        std::vector<Complex> buf(static_cast<std::size_t>(N_));
        for (int r = 0; r < n_; ++r) {
            for (int c = 0; c < k_; ++c) {
                std::fill(buf.begin(), buf.end(), Complex(0, 0));
                for (int t = 0; t < tcount_; ++t) buf[static_cast<std::size_t>(t)] = C(t * n_ + r, c);
                fft_inplace(buf, +1);
                for (int j = 0; j < N_; ++j) F[static_cast<std::size_t>(j)](r, c) = buf[static_cast<std::size_t>(j)];
            }
        }
    }

    Eval evaluate(const Eigen::MatrixXcd& C, std::vector<Eigen::MatrixXcd>& F,
                  std::vector<double>& rho) const {
        Eval e;
        e.num = (spec_.matrix() * C).norm();
        synthesize(C, F);
        rho.resize(static_cast<std::size_t>(N_));
        if (q_inf_) {
            double m = 0.0;
            for (int j = 0; j < N_; ++j) {
                rho[static_cast<std::size_t>(j)] = F[static_cast<std::size_t>(j)].norm();
                m = std::max(m, rho[static_cast<std::size_t>(j)]);
            }
            e.den = m;
        } else {
            double acc = 0.0;
            for (int j = 0; j < N_; ++j) {
                rho[static_cast<std::size_t>(j)] = F[static_cast<std::size_t>(j)].norm();
                acc += std::pow(rho[static_cast<std::size_t>(j)], q_);
            }
            e.den = std::pow(acc / N_, 1.0 / q_);
        }
        return e;
    }

    double evaluate_value(const Eigen::MatrixXcd& C) const {
        std::vector<Eigen::MatrixXcd> F;
        std::vector<double> rho;
        return evaluate(C, F, rho).logratio();
    }

    /// Ascent gradient of log(num) - log(den) in the real inner product
    /// Re<G, dC>; the den part pulls node fields back through one FFT per
    /// entry (adjoint of synthesis).
    Eigen::MatrixXcd gradient(const Eigen::MatrixXcd& C, const Eval& e,
                              const std::vector<Eigen::MatrixXcd>& F,
                              const std::vector<double>& rho) const {
        Eigen::MatrixXcd G = spec_.matrix().adjoint() * (spec_.matrix() * C);
        G /= std::max(e.num * e.num, 1e-300);

        // node fields for the denominator term
        std::vector<Eigen::MatrixXcd> P(static_cast<std::size_t>(N_), Eigen::MatrixXcd::Zero(n_, k_));
        if (q_inf_) {
            int jstar = 0;
            for (int j = 1; j < N_; ++j)
                if (rho[static_cast<std::size_t>(j)] > rho[static_cast<std::size_t>(jstar)]) jstar = j;
            const double r2 = std::max(rho[static_cast<std::size_t>(jstar)] * rho[static_cast<std::size_t>(jstar)], 1e-300);
            P[static_cast<std::size_t>(jstar)] = F[static_cast<std::size_t>(jstar)] / r2;
        } else {
            const double scale = std::pow(e.den, -q_) / N_;
            for (int j = 0; j < N_; ++j) {
                const double r = rho[static_cast<std::size_t>(j)];
                if (r > 0.0) P[static_cast<std::size_t>(j)] = (scale * std::pow(r, q_ - 2.0)) * F[static_cast<std::size_t>(j)];
            }
        }
        // pull back: Gden[(t,r),c] = sum_j P_j(r,c) * zeta_j^{-t}
        std::vector<Complex> buf(static_cast<std::size_t>(N_));
        for (int r = 0; r < n_; ++r) {
            for (int c = 0; c < k_; ++c) {
                for (int j = 0; j < N_; ++j) buf[static_cast<std::size_t>(j)] = P[static_cast<std::size_t>(j)](r, c);
                fft_inplace(buf, -1);
                for (int t = 0; t < tcount_; ++t) G(t * n_ + r, c) -= buf[static_cast<std::size_t>(t)];
            }
        }
        return G;
    }

    /// One complete ascent from the given start; returns the converged value
    /// and leaves the normalized coefficients in C.
    double run(Eigen::MatrixXcd& C, int max_iters, double tol) const {
        std::vector<Eigen::MatrixXcd> F;
        std::vector<double> rho;
        Eval e = evaluate(C, F, rho);
        if (!(e.den > 0.0)) return 0.0;
        C /= e.den;
        e = evaluate(C, F, rho);
        if (!(e.num > 0.0)) return 0.0;

        double alpha = 0.25;
        double L = e.logratio();
        int stall = 0;
        for (int iter = 0; iter < max_iters; ++iter) {
            const Eigen::MatrixXcd G = gradient(C, e, F, rho);
            const double g2 = G.squaredNorm();
            if (g2 < 1e-30) break;
            double Lnew = L;
            Eigen::MatrixXcd Cnew;
            bool accepted = false;
            while (alpha > 1e-16) {
                Cnew = C + alpha * G;
                const double Lt = evaluate_value(Cnew);
                if (Lt > L + 1e-4 * alpha * g2) {
                    Lnew = Lt;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) break;
            C = Cnew;
            e = evaluate(C, F, rho);
            C /= std::max(e.den, 1e-300);
            e = evaluate(C, F, rho);
            alpha = std::min(alpha * 1.5, 1e3);
            if (Lnew - L < tol * (1.0 + std::abs(L)))
                ++stall;
            else
                stall = 0;
            L = Lnew;
            if (stall >= 20) break;
        }
        return e.value();
    }

    const HankelOperatorSpec& spec_;
    int n_, k_, tcount_, N_;
    double q_;
    bool q_inf_;
};

}  // namespace detail

/// Lower bound for the windowed Hankel norm by restarted projected gradient
/// ascent on the scale-invariant ratio |P_-(Phi F)|_{L2} / |F|_{Lq}.  Every
/// reported value is the ratio of an explicit feasible witness, hence a
/// certified lower bound for the true operator norm.
inline NormSearchReport hankel_norm_lower_bound(const HankelOperatorSpec& spec,
                                                const NormSearchOptions& opts = {}) {
    NormSearchReport rep;
    const int n = spec.symbol().cols(), k = spec.column_count(), tc = spec.input_degree() + 1;
    if (spec.matrix().size() == 0 || spec.matrix().cwiseAbs().maxCoeff() == 0.0) {
        rep.witness = TrigSymbol::constant(CMat::Identity(n, k));
        rep.rank_profile.assign(static_cast<std::size_t>(spec.grid().size()), std::min(n, k));
        rep.modal_rank = std::min(n, k);
        return rep;  // zero operator: the bound 0 is exact
    }

    detail::HankelAscent ascent(spec);

    // start list: warm starts, deterministic constants, then random draws
    std::vector<Eigen::MatrixXcd> starts;
    for (const TrigSymbol& w : opts.warm_starts) {
        if (w.rows() != n || w.cols() != k) throw std::invalid_argument("hankel_norm_lower_bound: warm start shape mismatch");
        Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n) * tc, k);
        for (int t = 0; t < tc; ++t) C.block(t * n, 0, n, k) = w.coeff(t);
        starts.push_back(C);
    }
    {
        Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n) * tc, k);
        for (int c = 0; c < k; ++c) C(c % n + 0, c) = 1.0;  // constant with unit columns
        starts.push_back(C);
    }
    const int randoms = std::max(0, opts.restarts - static_cast<int>(starts.size()));
    for (int r = 0; r < randoms; ++r) {
        std::mt19937_64 rng(opts.seed * 1000003ULL + static_cast<std::uint64_t>(r) * 7919ULL + 13ULL);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double decay = (r % 2 == 0) ? 1.0 : 0.9;  // alternate flat and decaying profiles
        Eigen::MatrixXcd C(static_cast<Eigen::Index>(n) * tc, k);
        for (int t = 0; t < tc; ++t) {
            const double w = std::pow(decay, t);
            for (int i = 0; i < n; ++i)
                for (int c = 0; c < k; ++c) C(t * n + i, c) = w * Complex(gauss(rng), gauss(rng));
        }
        starts.push_back(C);
    }

    std::vector<double> values(starts.size(), 0.0);
    std::vector<Eigen::MatrixXcd> finals(starts.size());
    parallel_for(static_cast<int>(starts.size()), [&](int i) {
        Eigen::MatrixXcd C = starts[static_cast<std::size_t>(i)];
        values[static_cast<std::size_t>(i)] = ascent.run(C, opts.max_iters, opts.tol);
        finals[static_cast<std::size_t>(i)] = C;
    });

    int best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[static_cast<std::size_t>(best)] + 1e-12)
            best = static_cast<int>(i);
        else if (std::abs(values[i] - values[static_cast<std::size_t>(best)]) <= 1e-12 &&
                 finals[i].norm() < finals[static_cast<std::size_t>(best)].norm())
            best = static_cast<int>(i);
    }
    rep.restart_values = values;
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    const std::size_t quart = std::max<std::size_t>(1, sorted.size() / 4);
    rep.plateau_spread = sorted.front() - sorted[quart - 1];

    if (opts.keep_all_witnesses) {
        rep.all_witnesses.reserve(finals.size());
        for (const Eigen::MatrixXcd& Cw : finals) {
            TrigSymbol W(n, k);
            for (int t = 0; t < tc; ++t) W.set_coeff(t, Cw.block(t * n, 0, n, k));
            rep.all_witnesses.push_back(W.trimmed(1e-300));
        }
    }

    // rebuild the witness symbol and recompute the ratio via the exact
    // convolution path (independent of the flattened matrix)
    const Eigen::MatrixXcd& C = finals[static_cast<std::size_t>(best)];
    TrigSymbol F(n, k);
    for (int t = 0; t < tc; ++t) F.set_coeff(t, C.block(t * n, 0, n, k));
    F = F.trimmed(1e-300);
    const double den = lebesgue_norm(F, NormSpec::schatten(2.0), spec.grid(), spec.exponents().q());
    double value_conv = 0.0;
    if (den > 0.0) {
        const TrigSymbol HF = spec.apply(F);
        value_conv = HF.l2_norm() / den;
    }
    rep.best_value = value_conv;
    rep.recompute_gap = std::abs(value_conv - values[static_cast<std::size_t>(best)]);
    rep.witness = den > 0.0 ? F * Complex(1.0 / den, 0.0) : F;
    rep.rank_profile = detail::rank_profile_of(rep.witness.samples(spec.grid()));
    rep.modal_rank = detail::modal_value(rep.rank_profile);
    if (!std::isnan(opts.upper_bound))
        rep.upper_bound_respected = rep.best_value <= opts.upper_bound + 1e-9 * std::max(1.0, opts.upper_bound);
    return rep;
}

/// Modal pointwise rank of a norm-search witness (the "gender" datum of the
/// search: rank 1 witnesses certify a respectable symbol).
inline int maximizing_rank_profile(const NormSearchReport& report) { return report.modal_rank; }

}  // namespace lpnehari
