#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpnehari/fft.hpp"
#include "lpnehari/grid.hpp"

namespace lpnehari {

using CMat = Eigen::MatrixXcd;
using GridSamples = std::vector<CMat>;

enum class RieszPart { Plus, Minus };

/// Matrix-valued trigonometric polynomial on the unit circle:
///     X(zeta) = sum_k X_k zeta^k,   X_k in C^{rows x cols},
/// stored as a contiguous run of matrix coefficients.  Values are immutable
/// in spirit: mutating setters exist for builders, all algebra returns new
/// objects.  Frequencies may be negative (co-analytic part).
class TrigSymbol {
  public:
    TrigSymbol() : rows_(1), cols_(1), kmin_(0) {}

    TrigSymbol(int rows, int cols) : rows_(rows), cols_(cols), kmin_(0) {
        if (rows < 1 || cols < 1) throw std::invalid_argument("TrigSymbol: dimensions must be positive");
    }

    static TrigSymbol zero(int rows, int cols) { return TrigSymbol(rows, cols); }

    static TrigSymbol constant(const CMat& value) {
        TrigSymbol s(static_cast<int>(value.rows()), static_cast<int>(value.cols()));
        s.set_coeff(0, value);
        return s;
    }

    static TrigSymbol identity(int n) { return constant(CMat::Identity(n, n)); }

    /// Scalar monomial c * z^k.
    static TrigSymbol monomial(int k, Complex c = Complex(1.0, 0.0)) {
        TrigSymbol s(1, 1);
        CMat m(1, 1);
        m(0, 0) = c;
        s.set_coeff(k, m);
        return s;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_scalar() const { return rows_ == 1 && cols_ == 1; }

    bool is_zero() const { return coeffs_.empty(); }
    int min_freq() const { return coeffs_.empty() ? 0 : kmin_; }
    int max_freq() const { return coeffs_.empty() ? 0 : kmin_ + static_cast<int>(coeffs_.size()) - 1; }
    int degree() const { return std::max(std::abs(min_freq()), std::abs(max_freq())); }

    CMat coeff(int k) const {
        if (coeffs_.empty() || k < kmin_ || k > max_freq()) return CMat::Zero(rows_, cols_);
        return coeffs_[static_cast<std::size_t>(k - kmin_)];
    }

    void set_coeff(int k, const CMat& value) {
        check_shape(value);
        ensure_range(k);
        coeffs_[static_cast<std::size_t>(k - kmin_)] = value;
    }

    void add_coeff(int k, const CMat& value) {
        check_shape(value);
        ensure_range(k);
        coeffs_[static_cast<std::size_t>(k - kmin_)] += value;
    }

    /// Drops negligible leading/trailing coefficient blocks.
    TrigSymbol trimmed(double tol = 1e-14) const {
        int lo = min_freq(), hi = max_freq();
        while (lo <= hi && coeff_abs(lo) <= tol) ++lo;
        while (hi >= lo && coeff_abs(hi) <= tol) --hi;
        TrigSymbol out(rows_, cols_);
        for (int k = lo; k <= hi; ++k) out.set_coeff(k, coeff(k));
        return out;
    }

    // ----- algebra ---------------------------------------------------------

    friend TrigSymbol operator+(const TrigSymbol& a, const TrigSymbol& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("TrigSymbol: shape mismatch in addition");
        TrigSymbol out(a.rows_, a.cols_);
        for (int k = std::min(a.min_freq(), b.min_freq()); k <= std::max(a.max_freq(), b.max_freq()); ++k)
            out.set_coeff(k, a.coeff(k) + b.coeff(k));
        return out.trimmed(0.0);
    }

    friend TrigSymbol operator-(const TrigSymbol& a, const TrigSymbol& b) { return a + (b * Complex(-1.0, 0.0)); }

    friend TrigSymbol operator*(const TrigSymbol& a, Complex c) {
        TrigSymbol out(a.rows_, a.cols_);
        for (int k = a.min_freq(); k <= a.max_freq(); ++k) out.set_coeff(k, a.coeff(k) * c);
        return out;
    }
    friend TrigSymbol operator*(Complex c, const TrigSymbol& a) { return a * c; }
    friend TrigSymbol operator*(const TrigSymbol& a, double c) { return a * Complex(c, 0.0); }
    friend TrigSymbol operator*(double c, const TrigSymbol& a) { return a * Complex(c, 0.0); }

    /// Coefficient convolution; 1x1 operands broadcast as scalars.
    friend TrigSymbol operator*(const TrigSymbol& a, const TrigSymbol& b) {
        if (a.cols_ != b.rows_ && !a.is_scalar() && !b.is_scalar())
            throw std::invalid_argument("TrigSymbol: shape mismatch in product");
        int out_rows, out_cols;
        if (a.is_scalar() && !b.is_scalar()) {
            out_rows = b.rows_;
            out_cols = b.cols_;
        } else if (b.is_scalar() && !a.is_scalar()) {
            out_rows = a.rows_;
            out_cols = a.cols_;
        } else {
            out_rows = a.rows_;
            out_cols = b.cols_;
        }
        TrigSymbol out(out_rows, out_cols);
        if (a.is_zero() || b.is_zero()) return out;
        for (int ka = a.min_freq(); ka <= a.max_freq(); ++ka) {
            const CMat ca = a.coeff(ka);
            if (ca.cwiseAbs().maxCoeff() == 0.0) continue;
            for (int kb = b.min_freq(); kb <= b.max_freq(); ++kb) {
                const CMat cb = b.coeff(kb);
                if (a.is_scalar() && !b.is_scalar())
                    out.add_coeff(ka + kb, ca(0, 0) * cb);
                else if (b.is_scalar() && !a.is_scalar())
                    out.add_coeff(ka + kb, ca * cb(0, 0));
                else
                    out.add_coeff(ka + kb, ca * cb);
            }
        }
        return out.trimmed(0.0);
    }

    /// Conjugate transpose as a function: (X*)(zeta) = X(zeta)^*.
    TrigSymbol adjoint() const {
        TrigSymbol out(cols_, rows_);
        for (int k = min_freq(); k <= max_freq(); ++k) out.set_coeff(-k, coeff(k).adjoint());
        return out;
    }

    /// Pointwise transpose (frequencies unchanged).
    TrigSymbol transpose() const {
        TrigSymbol out(cols_, rows_);
        for (int k = min_freq(); k <= max_freq(); ++k) out.set_coeff(k, coeff(k).transpose());
        return out;
    }

    /// Pointwise complex conjugate: coefficients conjugate and flip frequency.
    TrigSymbol conjugate() const {
        TrigSymbol out(rows_, cols_);
        for (int k = min_freq(); k <= max_freq(); ++k) out.set_coeff(-k, coeff(k).conjugate());
        return out;
    }

    /// Multiplication by z^s.
    TrigSymbol shifted(int s) const {
        TrigSymbol out(rows_, cols_);
        for (int k = min_freq(); k <= max_freq(); ++k) out.set_coeff(k + s, coeff(k));
        return out;
    }

    TrigSymbol entry(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw std::out_of_range("TrigSymbol::entry");
        TrigSymbol out(1, 1);
        for (int k = min_freq(); k <= max_freq(); ++k) {
            CMat m(1, 1);
            m(0, 0) = coeff(k)(i, j);
            out.set_coeff(k, m);
        }
        return out.trimmed(0.0);
    }

    static TrigSymbol hcat(const TrigSymbol& a, const TrigSymbol& b) {
        if (a.rows_ != b.rows_) throw std::invalid_argument("TrigSymbol::hcat: row mismatch");
        TrigSymbol out(a.rows_, a.cols_ + b.cols_);
        for (int k = std::min(a.min_freq(), b.min_freq()); k <= std::max(a.max_freq(), b.max_freq()); ++k) {
            CMat m(out.rows_, out.cols_);
            m.leftCols(a.cols_) = a.coeff(k);
            m.rightCols(b.cols_) = b.coeff(k);
            out.set_coeff(k, m);
        }
        return out.trimmed(0.0);
    }

    static TrigSymbol block_diag(const TrigSymbol& a, const TrigSymbol& b) {
        TrigSymbol out(a.rows_ + b.rows_, a.cols_ + b.cols_);
        for (int k = std::min(a.min_freq(), b.min_freq()); k <= std::max(a.max_freq(), b.max_freq()); ++k) {
            CMat m = CMat::Zero(out.rows_, out.cols_);
            m.topLeftCorner(a.rows_, a.cols_) = a.coeff(k);
            m.bottomRightCorner(b.rows_, b.cols_) = b.coeff(k);
            out.set_coeff(k, m);
        }
        return out.trimmed(0.0);
    }

    /// Analytic / co-analytic projection in coefficient space (exact).
    TrigSymbol riesz(RieszPart part) const {
        TrigSymbol out(rows_, cols_);
        for (int k = min_freq(); k <= max_freq(); ++k) {
            if ((part == RieszPart::Plus && k >= 0) || (part == RieszPart::Minus && k <= -1))
                out.set_coeff(k, coeff(k));
        }
        return out.trimmed(0.0);
    }

    // ----- diagnostics ------------------------------------------------------

    double coeff_abs(int k) const {
        const CMat c = coeff(k);
        return c.size() == 0 ? 0.0 : c.cwiseAbs().maxCoeff();
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (int k = min_freq(); k <= max_freq(); ++k) m = std::max(m, coeff_abs(k));
        return m;
    }

    /// Largest coefficient magnitude at strictly negative frequencies.
    double analytic_residual() const {
        double m = 0.0;
        for (int k = min_freq(); k <= -1; ++k) m = std::max(m, coeff_abs(k));
        return m;
    }

    /// Largest coefficient magnitude at frequencies <= 0 (membership in H_0).
    double analytic_vanishing_residual() const {
        double m = 0.0;
        for (int k = min_freq(); k <= 0; ++k) m = std::max(m, coeff_abs(k));
        return m;
    }

    bool is_analytic(double tol = 1e-10) const { return analytic_residual() <= tol; }

    /// Coefficient mass (L^2, Frobenius) outside the band |k| <= deg.
    double tail_mass(int deg) const {
        double s = 0.0;
        for (int k = min_freq(); k <= max_freq(); ++k)
            if (std::abs(k) > deg) s += coeff(k).squaredNorm();
        return std::sqrt(s);
    }

    /// L^2 norm against normalized measure (Parseval over coefficients,
    /// Frobenius pointwise).
    double l2_norm() const {
        double s = 0.0;
        for (int k = min_freq(); k <= max_freq(); ++k) s += coeff(k).squaredNorm();
        return std::sqrt(s);
    }

    // ----- sampling ---------------------------------------------------------

    /// Values at the grid nodes via one FFT per matrix entry.  Requires
    /// N >= 2*degree + 2 so distinct frequencies land in distinct bins.
    GridSamples samples(const CircleGrid& grid) const {
        const int n = grid.size();
        if (n < 2 * degree() + 2)
            throw std::invalid_argument("TrigSymbol::samples: grid of size " + std::to_string(n) +
                                        " aliases a symbol of degree " + std::to_string(degree()) +
                                        " (need N >= " + std::to_string(2 * degree() + 2) + ")");
        GridSamples out(static_cast<std::size_t>(n), CMat::Zero(rows_, cols_));
        std::vector<Complex> buf(static_cast<std::size_t>(n));
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) {
                std::fill(buf.begin(), buf.end(), Complex(0.0, 0.0));
                for (int k = min_freq(); k <= max_freq(); ++k) {
                    const int bin = ((k % n) + n) % n;
                    buf[static_cast<std::size_t>(bin)] += coeff(k)(i, j);
                }
                detail::fft_inplace(buf, +1);
                for (int t = 0; t < n; ++t) out[static_cast<std::size_t>(t)](i, j) = buf[static_cast<std::size_t>(t)];
            }
        }
        return out;
    }

    /// Inverse of samples(): recovers coefficients on frequencies
    /// [-N/2, N/2 - 1].  Exact for band-limited data; otherwise aliased.
    static TrigSymbol analyze(const GridSamples& samples) {
        if (samples.empty()) throw std::invalid_argument("TrigSymbol::analyze: empty sample set");
        const int n = static_cast<int>(samples.size());
        if (!detail::is_power_of_two(samples.size()))
            throw std::invalid_argument("TrigSymbol::analyze: sample count must be a power of two");
        const int rows = static_cast<int>(samples[0].rows());
        const int cols = static_cast<int>(samples[0].cols());
        TrigSymbol out(rows, cols);
        std::vector<Complex> buf(samples.size());
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                for (int t = 0; t < n; ++t) buf[static_cast<std::size_t>(t)] = samples[static_cast<std::size_t>(t)](i, j);
                detail::fft_inplace(buf, -1);
                for (int b = 0; b < n; ++b) {
                    const int k = (b < n / 2) ? b : b - n;
                    const Complex c = buf[static_cast<std::size_t>(b)] / static_cast<double>(n);
                    if (c != Complex(0.0, 0.0)) {
                        CMat m = out.coeff(k);
                        m(i, j) = c;
                        out.set_coeff(k, m);
                    }
                }
            }
        }
        return out.trimmed(1e-300);
    }

  private:
    void check_shape(const CMat& value) const {
        if (value.rows() != rows_ || value.cols() != cols_)
            throw std::invalid_argument("TrigSymbol: coefficient shape mismatch");
    }

    void ensure_range(int k) {
        if (coeffs_.empty()) {
            kmin_ = k;
            coeffs_.assign(1, CMat::Zero(rows_, cols_));
            return;
        }
        while (k < kmin_) {
            coeffs_.insert(coeffs_.begin(), CMat::Zero(rows_, cols_));
            --kmin_;
        }
        while (k > max_freq()) coeffs_.push_back(CMat::Zero(rows_, cols_));
    }

    int rows_, cols_;
    int kmin_;
    std::vector<CMat> coeffs_;
};

// ----- pointwise helpers on grid samples ------------------------------------

inline GridSamples grid_product(const GridSamples& a, const GridSamples& b) {
    if (a.size() != b.size()) throw std::invalid_argument("grid_product: size mismatch");
    GridSamples out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
    return out;
}

inline GridSamples grid_adjoint(const GridSamples& a) {
    GridSamples out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j].adjoint();
    return out;
}

inline GridSamples grid_inverse(const GridSamples& a) {
    GridSamples out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j].rows() != a[j].cols()) throw std::invalid_argument("grid_inverse: matrices must be square");
        out[j] = a[j].partialPivLu().solve(CMat::Identity(a[j].rows(), a[j].cols()));
    }
    return out;
}

/// Real inner product Re <A, B> = Re sum_k tr(A_k^* B_k) = Re of the L^2
/// pairing integral of tr(A^* B) against normalized measure.
inline double l2_inner_re(const TrigSymbol& a, const TrigSymbol& b) {
    double s = 0.0;
    for (int k = std::min(a.min_freq(), b.min_freq()); k <= std::max(a.max_freq(), b.max_freq()); ++k)
        s += (a.coeff(k).adjoint() * b.coeff(k)).trace().real();
    return s;
}

}  // namespace lpnehari
