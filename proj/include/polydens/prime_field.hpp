#ifndef POLYDENS_PRIME_FIELD_HPP
#define POLYDENS_PRIME_FIELD_HPP

#include <stdexcept>

#include "polydens/common.hpp"

namespace polydens {

// Deterministic primality check, valid for all 64-bit inputs (trial division
// is fine at the sizes this library works with; no probabilistic shortcut).
bool is_prime_i64(i64 n);

// A validated prime characteristic.  Construction fails on composites, so
// everything downstream may assume p is prime without re-checking.
class PrimeField {
  public:
    explicit PrimeField(i64 p) : p_(p) {
        if (p < 2 || !is_prime_i64(p))
            throw std::invalid_argument("PrimeField: " + std::to_string(p) + " is not prime");
    }
    i64 p() const { return p_; }
    friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

  private:
    i64 p_;
};

}  // namespace polydens

#endif
