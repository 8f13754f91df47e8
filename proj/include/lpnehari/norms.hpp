#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lpnehari/grid.hpp"
#include "lpnehari/symbol.hpp"

namespace lpnehari {

/// Pointwise matrix norm used inside Lebesgue norms: either the operator
/// (spectral) norm or a Schatten-r norm on singular values.
struct NormSpec {
    enum class Kind { Operator, Schatten };
    Kind kind = Kind::Operator;
    double r = 0.0;

    static NormSpec op() { return NormSpec{Kind::Operator, 0.0}; }
    static NormSpec schatten(double r) {
        if (!(r >= 1.0)) throw std::invalid_argument("NormSpec: Schatten exponent must be >= 1");
        return NormSpec{Kind::Schatten, r};
    }
};

namespace detail {

/// Eigen-pair of a 2x2 Hermitian PSD matrix: returns (lambda_max, lambda_min)
/// and optionally the unit eigenvector of lambda_max.
inline void hermitian2_eigs(const CMat& m, double& lo, double& hi, Eigen::Vector2cd* top_vec = nullptr) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const Complex b = m(0, 1);
    const double tr2 = 0.5 * (a + d);
    const double disc = std::sqrt(std::max(0.0, 0.25 * (a - d) * (a - d) + std::norm(b)));
    hi = tr2 + disc;
    lo = std::max(0.0, tr2 - disc);
    if (top_vec) {
        Eigen::Vector2cd v1, v2;
        v1 << b, Complex(hi - a, 0.0);
        v2 << Complex(hi - d, 0.0), std::conj(b);
        *top_vec = (v1.norm() >= v2.norm()) ? v1 : v2;
        const double n = top_vec->norm();
        if (n > 0.0)
            *top_vec /= n;
        else
            *top_vec << Complex(1.0, 0.0), Complex(0.0, 0.0);  // multiple of identity
    }
}

/// Singular values, descending.  Closed forms for 1x1 / 2x2, SVD otherwise.
inline Eigen::VectorXd singular_values(const CMat& m) {
    const int r = static_cast<int>(m.rows()), c = static_cast<int>(m.cols());
    if (r == 1 && c == 1) {
        Eigen::VectorXd s(1);
        s(0) = std::abs(m(0, 0));
        return s;
    }
    if (r == 2 && c == 2) {
        double lo, hi;
        hermitian2_eigs(m.adjoint() * m, lo, hi);
        Eigen::VectorXd s(2);
        s(0) = std::sqrt(hi);
        s(1) = std::sqrt(lo);
        return s;
    }
    Eigen::JacobiSVD<CMat> svd(m);
    return svd.singularValues();
}

inline double operator_norm(const CMat& m) { return singular_values(m)(0); }

/// Top singular triple (sigma, u, v) with m v = sigma u.
inline double top_singular_pair(const CMat& m, Eigen::VectorXcd& u, Eigen::VectorXcd& v) {
    if (m.rows() == 1 && m.cols() == 1) {
        u.resize(1);
        v.resize(1);
        const double s = std::abs(m(0, 0));
        v(0) = Complex(1.0, 0.0);
        u(0) = (s > 0.0) ? m(0, 0) / s : Complex(1.0, 0.0);
        return s;
    }
    if (m.rows() == 2 && m.cols() == 2) {
        double lo, hi;
        Eigen::Vector2cd vv;
        hermitian2_eigs(m.adjoint() * m, lo, hi, &vv);
        const double s = std::sqrt(hi);
        v = vv;
        if (s > 1e-300) {
            u = m * vv / s;
        } else {
            u.resize(2);
            u << Complex(1.0, 0.0), Complex(0.0, 0.0);
        }
        return s;
    }
    Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU().col(0);
    v = svd.matrixV().col(0);
    return svd.singularValues()(0);
}

}  // namespace detail

inline double pointwise_norm(const CMat& m, const NormSpec& spec) {
    const Eigen::VectorXd s = detail::singular_values(m);
    if (spec.kind == NormSpec::Kind::Operator) return s.size() ? s(0) : 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s(i), spec.r);
    return std::pow(acc, 1.0 / spec.r);
}

/// L^s norm over the grid of the pointwise matrix norm; s = +inf gives the
/// essential-sup surrogate (max over nodes).
inline double lebesgue_norm(const GridSamples& samples, const NormSpec& spec, double s) {
    if (samples.empty()) throw std::invalid_argument("lebesgue_norm: no samples");
    if (std::isinf(s)) {
        double m = 0.0;
        for (const CMat& x : samples) m = std::max(m, pointwise_norm(x, spec));
        return m;
    }
    if (!(s >= 1.0)) throw std::invalid_argument("lebesgue_norm: exponent must be >= 1 or infinity");
    double acc = 0.0;
    for (const CMat& x : samples) acc += std::pow(pointwise_norm(x, spec), s);
    return std::pow(acc / static_cast<double>(samples.size()), 1.0 / s);
}

inline double lebesgue_norm(const TrigSymbol& sym, const NormSpec& spec, const CircleGrid& grid, double s) {
    return lebesgue_norm(sym.samples(grid), spec, s);
}

}  // namespace lpnehari
