#include "pairing.hpp"

#include <limits>

#include "error.hpp"

namespace uc {

std::uint64_t cantor_pair(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 s = static_cast<unsigned __int128>(a) + b;
  unsigned __int128 z = s * (s + 1) / 2 + b;
  if (z > std::numeric_limits<std::uint64_t>::max())
    fail_input("pairing overflow");
  return static_cast<std::uint64_t>(z);
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z) {
  // s = floor((sqrt(8z+1)-1)/2), the diagonal index
  unsigned __int128 v = static_cast<unsigned __int128>(z) * 8 + 1;
  std::uint64_t r = 0;
  for (std::uint64_t bit = std::uint64_t(1) << 32; bit; bit >>= 1) {
    std::uint64_t cand = r | bit;
    if (static_cast<unsigned __int128>(cand) * cand <= v) r = cand;
  }
  std::uint64_t s = (r - 1) / 2;
  std::uint64_t b = z - s * (s + 1) / 2;
  return {s - b, b};
}

TupleCodec::TupleCodec(std::vector<Cardinal> sizes)
    : sizes_(std::move(sizes)), finite_product_(1), infinite_count_(0) {
  for (const auto& s : sizes_) {
    if (s == Cardinal::finite(0)) fail_input("empty factor in tuple codec");
    if (s.is_finite()) {
      std::uint64_t v = s.finite_value();
      if (finite_product_ > std::numeric_limits<std::uint64_t>::max() / v)
        fail_input("tuple codec radix overflow");
      finite_product_ *= v;
    } else {
      ++infinite_count_;
    }
  }
}

Cardinal TupleCodec::total() const {
  if (infinite_count_ == 0) return Cardinal::finite(finite_product_);
  Cardinal t = Cardinal::finite(finite_product_);
  for (const auto& s : sizes_)
    if (s.is_infinite()) t = product(t, s);
  return t;
}

std::uint64_t TupleCodec::encode(const std::vector<std::uint64_t>& tuple) const {
  if (tuple.size() != sizes_.size()) fail_input("tuple arity mismatch");
  std::uint64_t radix_part = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (!sizes_[i].is_finite()) continue;
    std::uint64_t v = sizes_[i].finite_value();
    if (tuple[i] >= v) fail_input("tuple coordinate exceeds its factor");
    radix_part = radix_part * v + tuple[i];
  }
  if (infinite_count_ == 0) return radix_part;
  bool have = false;
  std::uint64_t diag = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i].is_finite()) continue;
    diag = have ? cantor_pair(diag, tuple[i]) : tuple[i];
    have = true;
  }
  unsigned __int128 code =
      static_cast<unsigned __int128>(diag) * finite_product_ + radix_part;
  if (code > std::numeric_limits<std::uint64_t>::max())
    fail_input("tuple codec overflow");
  return static_cast<std::uint64_t>(code);
}

std::vector<std::uint64_t> TupleCodec::decode(std::uint64_t code) const {
  std::uint64_t radix_part = code % finite_product_;
  std::uint64_t diag = code / finite_product_;
  if (infinite_count_ == 0 && diag != 0)
    fail_input("code exceeds the finite tuple range");
  std::vector<std::uint64_t> tuple(sizes_.size(), 0);
  for (std::size_t i = sizes_.size(); i-- > 0;) {
    if (!sizes_[i].is_finite()) continue;
    std::uint64_t v = sizes_[i].finite_value();
    tuple[i] = radix_part % v;
    radix_part /= v;
  }
  std::vector<std::size_t> inf;
  for (std::size_t i = 0; i < sizes_.size(); ++i)
    if (sizes_[i].is_infinite()) inf.push_back(i);
  for (std::size_t j = inf.size(); j-- > 0;) {
    if (j == 0) {
      tuple[inf[j]] = diag;
    } else {
      auto [rest, last] = cantor_unpair(diag);
      tuple[inf[j]] = last;
      diag = rest;
    }
  }
  return tuple;
}

}  // namespace uc
