#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "lpnehari/fft.hpp"

namespace lpnehari {

/// Uniform sampling grid on the unit circle: nodes zeta_j = exp(2*pi*i*j/N)
/// with equal quadrature weights 1/N (the normalized arclength measure).
/// N is restricted to powers of two so the FFT applies directly.
class CircleGrid {
  public:
    explicit CircleGrid(int n) : n_(n) {
        if (n < 2 || !detail::is_power_of_two(static_cast<std::size_t>(n)))
            throw std::invalid_argument("CircleGrid: size must be a power of two, >= 2");
    }

    int size() const { return n_; }
    double weight() const { return 1.0 / static_cast<double>(n_); }

    double angle(int j) const { return 2.0 * pi() * static_cast<double>(j) / static_cast<double>(n_); }

    std::complex<double> node(int j) const { return std::polar(1.0, angle(j)); }

    static constexpr double pi() { return 3.14159265358979323846; }

  private:
    int n_;
};

}  // namespace lpnehari
