#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mbhd {

/// Bit pattern over d inputs: bit i-1 is set iff input i is present (for a
/// subset) or equals 1 (for a binary configuration).
using Mask = std::uint32_t;

inline constexpr int kMaxDimension = 30;
inline constexpr int kDefaultExactDimensionLimit = 14;

/// A subset A of {1,...,d}.
struct SubsetId {
  Mask mask = 0;

  constexpr int size() const noexcept { return std::popcount(mask); }
  constexpr bool empty() const noexcept { return mask == 0; }
  /// 1-based membership test.
  constexpr bool contains(int i) const noexcept { return (mask >> (i - 1)) & 1u; }
  constexpr bool subset_of(SubsetId other) const noexcept {
    return (mask & ~other.mask) == 0;
  }

  friend constexpr bool operator==(SubsetId, SubsetId) = default;
  /// Graded-lexicographic: cardinality first, then mask value.
  friend constexpr std::strong_ordering operator<=>(SubsetId a, SubsetId b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    return a.mask <=> b.mask;
  }
};

/// "[1,3]"; the empty set is "[]".
std::string format_subset(SubsetId a);
SubsetId parse_subset(const std::string& text);

/// Graded-lexicographic sequence of subsets, optionally capped by cardinality.
class SubsetOrder {
 public:
  SubsetOrder() = default;
  /// Arbitrary explicit list; used for identifiable column sets.
  SubsetOrder(int d, std::vector<SubsetId> sequence, std::optional<int> cap = std::nullopt);

  int dimension() const noexcept { return d_; }
  std::optional<int> cap() const noexcept { return cap_; }
  std::size_t size() const noexcept { return seq_.size(); }
  SubsetId operator[](std::size_t k) const { return seq_[k]; }
  std::span<const SubsetId> subsets() const noexcept { return seq_; }
  auto begin() const noexcept { return seq_.begin(); }
  auto end() const noexcept { return seq_.end(); }

  std::optional<std::size_t> index_of(SubsetId a) const;
  bool is_full() const noexcept { return d_ < 31 && seq_.size() == (std::size_t{1} << d_); }

 private:
  int d_ = 0;
  std::optional<int> cap_;
  std::vector<SubsetId> seq_;
  // Dense lookup when d is small, sorted (mask, position) pairs otherwise.
  std::vector<std::int64_t> dense_index_;
  std::vector<std::pair<Mask, std::size_t>> sparse_index_;
};

/// Exact-mode dimension limit: MBHD_MAX_EXACT_D if set, else 14.
int exact_dimension_limit();

/// Throws DimensionTooLarge when cap is absent and d exceeds the exact-mode limit.
SubsetOrder enumerate_subsets(int d, std::optional<int> cap = std::nullopt,
                              std::optional<int> exact_limit = std::nullopt);

/// m_c = sum_{k<=c} C(d,k).
std::size_t truncated_size(int d, int cap);

/// (-1)^{sum_{j in A} x_j}
constexpr int parity_sign(Mask x, SubsetId a) noexcept {
  return (std::popcount(x & a.mask) & 1) ? -1 : 1;
}

/// Packs the bits of x selected by `mask` into the low bits (a software pext).
constexpr std::uint32_t compress_bits(Mask x, Mask mask) noexcept {
  std::uint32_t out = 0;
  int k = 0;
  while (mask) {
    const Mask low = mask & (~mask + 1);
    if (x & low) out |= (1u << k);
    ++k;
    mask &= mask - 1;
  }
  return out;
}

/// Inverse of compress_bits: spreads the low bits of `packed` over `mask`.
constexpr Mask expand_bits(std::uint32_t packed, Mask mask) noexcept {
  Mask out = 0;
  int k = 0;
  while (mask) {
    const Mask low = mask & (~mask + 1);
    if ((packed >> k) & 1u) out |= low;
    ++k;
    mask &= mask - 1;
  }
  return out;
}

/// Binary vector (0/1 entries, x_1 first) to configuration mask.
Mask config_from_bits(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> bits_from_config(Mask x, int d);

}  // namespace mbhd
