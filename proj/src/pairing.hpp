#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cardinal.hpp"

namespace uc {

// Cantor diagonal pairing, a bijection N x N -> N
std::uint64_t cantor_pair(std::uint64_t a, std::uint64_t b);
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z);

// Bijection between tuples from a mixed finite/countable product and an
// initial segment of N (all of N when any factor is infinite): finite
// factors go into a mixed radix, infinite ones through iterated pairing.
class TupleCodec {
public:
  explicit TupleCodec(std::vector<Cardinal> sizes);

  Cardinal total() const;
  std::uint64_t encode(const std::vector<std::uint64_t>& tuple) const;
  std::vector<std::uint64_t> decode(std::uint64_t code) const;

private:
  std::vector<Cardinal> sizes_;
  std::uint64_t finite_product_;
  std::size_t infinite_count_;
};

}  // namespace uc
