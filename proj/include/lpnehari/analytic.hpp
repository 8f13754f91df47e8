#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "lpnehari/fft.hpp"
#include "lpnehari/grid.hpp"
#include "lpnehari/symbol.hpp"

namespace lpnehari {

namespace detail {

/// Samples of the analytic completion L of log w: the H^2 function with
/// Re L = log w and Im L(0) = 0, computed by one FFT round trip
/// (L = u_0 + 2 sum_{k>=1} u_k z^k where u_k are the coefficients of log w).
inline std::vector<Complex> analytic_log_samples(const std::vector<double>& w) {
    const std::size_t n = w.size();
    std::vector<Complex> buf(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!(w[j] > 0.0)) throw std::domain_error("analytic_log_samples: modulus must be strictly positive");
        buf[j] = Complex(std::log(w[j]), 0.0);
    }
    fft_inplace(buf, -1);
    const double scale = 1.0 / static_cast<double>(n);
    std::vector<Complex> spec(n, Complex(0.0, 0.0));
    spec[0] = Complex(buf[0].real() * scale, 0.0);
    for (std::size_t b = 1; b < n / 2; ++b) spec[b] = 2.0 * buf[b] * scale;
    // Nyquist bin dropped: it is below resolution for admissible inputs.
    fft_inplace(spec, +1);
    return spec;
}

}  // namespace detail

/// Unit-circle samples of the outer function h with |h| = w^power and
/// h(0) > 0 (single consistent branch through the analytic logarithm).
inline std::vector<Complex> outer_samples_from_modulus(const std::vector<double>& w, double power = 1.0) {
    std::vector<Complex> L = detail::analytic_log_samples(w);
    for (Complex& v : L) v = std::exp(power * v);
    return L;
}

struct OuterOptions {
    double floor_eps = 1e-10;   ///< small-modulus floor before taking logs
    double trim_tol = 1e-14;    ///< coefficient trim threshold
};

struct OuterResult {
    TrigSymbol h;               ///< outer factor, h(0) > 0
    double modulus_residual = 0.0;  ///< max_j | |h(zeta_j)| - w_j |
    bool floored = false;       ///< true if the input modulus was floored
};

/// Outer function from a sampled modulus.  Requires w > 0 after flooring
/// (a sampled zero makes the log non-integrable at this resolution).
inline OuterResult outer_from_modulus(std::vector<double> w, const CircleGrid& grid,
                                      const OuterOptions& opts = {}) {
    if (static_cast<int>(w.size()) != grid.size())
        throw std::invalid_argument("outer_from_modulus: sample count must match grid size");
    OuterResult out;
    for (double& x : w) {
        if (!(x >= 0.0) || std::isnan(x))
            throw std::domain_error("outer_from_modulus: modulus must be nonnegative");
        if (x < opts.floor_eps) {
            x = opts.floor_eps;
            out.floored = true;
        }
    }
    std::vector<Complex> hs = outer_samples_from_modulus(w, 1.0);
    GridSamples samples(hs.size());
    for (std::size_t j = 0; j < hs.size(); ++j) {
        CMat m(1, 1);
        m(0, 0) = hs[j];
        samples[j] = m;
    }
    TrigSymbol h = TrigSymbol::analyze(samples).riesz(RieszPart::Plus).trimmed(opts.trim_tol);
    out.h = h;
    const GridSamples back = h.samples(grid);
    double res = 0.0;
    for (int j = 0; j < grid.size(); ++j)
        res = std::max(res, std::abs(std::abs(back[static_cast<std::size_t>(j)](0, 0)) - w[static_cast<std::size_t>(j)]));
    out.modulus_residual = res;
    return out;
}

/// Fractional (or negative) power of an outer function through its modulus:
/// returns the outer g with |g| = |h|^s and g(0) > 0.  For h with h(0) > 0
/// this is the consistent-branch power h^s.
inline TrigSymbol outer_power(const TrigSymbol& h, double s, const CircleGrid& grid,
                              const OuterOptions& opts = {}) {
    if (!h.is_scalar()) throw std::invalid_argument("outer_power: scalar symbols only");
    const GridSamples hs = h.samples(grid);
    std::vector<double> w(hs.size());
    for (std::size_t j = 0; j < hs.size(); ++j) {
        w[j] = std::abs(hs[j](0, 0));
        if (w[j] < opts.floor_eps)
            throw std::domain_error("outer_power: modulus vanishes at a grid node");
    }
    std::vector<Complex> gs = outer_samples_from_modulus(w, s);
    GridSamples samples(gs.size());
    for (std::size_t j = 0; j < gs.size(); ++j) {
        CMat m(1, 1);
        m(0, 0) = gs[j];
        samples[j] = m;
    }
    return TrigSymbol::analyze(samples).riesz(RieszPart::Plus).trimmed(opts.trim_tol);
}

struct BlaschkeResult {
    TrigSymbol symbol;                ///< truncated Taylor expansion, analytic
    double truncation_residual = 0.0; ///< coefficient mass dropped by truncation
};

/// Finite Blaschke product with the convention b_a(z) = (z - a)/(1 - conj(a) z),
/// so zeros = {0} gives exactly z.  The expansion is truncated at `degree`
/// (default grows with 1/(1 - max |a|)).
inline BlaschkeResult blaschke(const std::vector<Complex>& zeros, const CircleGrid& grid, int degree = -1) {
    double amax = 0.0;
    for (const Complex& a : zeros) {
        if (std::abs(a) >= 1.0 - 1e-12)
            throw std::invalid_argument("blaschke: zeros must lie strictly inside the unit disk");
        amax = std::max(amax, std::abs(a));
    }
    if (degree < 0) {
        degree = static_cast<int>(std::ceil(4.0 * static_cast<double>(std::max<std::size_t>(zeros.size(), 1)) /
                                            (1.0 - amax)));
        degree = std::min(degree, grid.size() / 2 - 1);
    }
    GridSamples samples(static_cast<std::size_t>(grid.size()));
    for (int j = 0; j < grid.size(); ++j) {
        const Complex z = grid.node(j);
        Complex v(1.0, 0.0);
        for (const Complex& a : zeros) v *= (z - a) / (Complex(1.0, 0.0) - std::conj(a) * z);
        CMat m(1, 1);
        m(0, 0) = v;
        samples[static_cast<std::size_t>(j)] = m;
    }
    TrigSymbol full = TrigSymbol::analyze(samples);
    BlaschkeResult out;
    TrigSymbol kept(1, 1);
    double dropped = 0.0;
    for (int k = full.min_freq(); k <= full.max_freq(); ++k) {
        if (k >= 0 && k <= degree)
            kept.set_coeff(k, full.coeff(k));
        else
            dropped += full.coeff(k).squaredNorm();
    }
    out.symbol = kept.trimmed(0.0);
    out.truncation_residual = std::sqrt(dropped);
    return out;
}

}  // namespace lpnehari
