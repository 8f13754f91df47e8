#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lpnehari {

/// Exponent bookkeeping for the approximation problem in L^p, 2 <= p < inf.
///
/// Three exponents travel together:
///   p        -- the norm in which the approximation error is measured,
///   q        -- the domain exponent of the associated Hankel operator,
///               coupled to p through 1/p + 1/q = 1/2 (q = inf when p = 2),
///   p'       -- the classical conjugate p/(p-1), used by the dual problem.
class ExponentTriple {
  public:
    explicit ExponentTriple(double p) : p_(p) {
        if (!(p >= 2.0) || !std::isfinite(p))
            throw std::invalid_argument("ExponentTriple: p must satisfy 2 <= p < infinity");
        q_infinite_ = (p == 2.0);
        q_ = q_infinite_ ? std::numeric_limits<double>::infinity() : 2.0 * p / (p - 2.0);
        p_prime_ = p / (p - 1.0);
    }

    double p() const { return p_; }
    bool q_is_infinite() const { return q_infinite_; }

    /// Hankel domain exponent; +inf when p = 2.
    double q() const { return q_; }

    /// Classical conjugate exponent p/(p-1), in (1, 2].
    double p_prime() const { return p_prime_; }

  private:
    double p_;
    double q_;
    double p_prime_;
    bool q_infinite_;
};

}  // namespace lpnehari
