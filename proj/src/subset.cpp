#include "mbhd/subset.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "mbhd/error.hpp"

namespace mbhd {

std::string format_subset(SubsetId a) {
  std::string out = "[";
  bool first = true;
  for (int i = 1; i <= kMaxDimension + 1; ++i) {
    if (!a.contains(i)) continue;
    if (!first) out += ',';
    out += std::to_string(i);
    first = false;
  }
  out += ']';
  return out;
}

SubsetId parse_subset(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s += c;
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw Error(ErrorCode::ParseError, "subset must look like [1,3]: " + text);
  SubsetId a;
  std::stringstream ss(s.substr(1, s.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    int i = 0;
    try {
      i = std::stoi(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad subset element: " + item);
    }
    if (i < 1 || i > kMaxDimension)
      throw Error(ErrorCode::ParseError, "subset element out of range: " + item);
    a.mask |= Mask{1} << (i - 1);
  }
  return a;
}

SubsetOrder::SubsetOrder(int d, std::vector<SubsetId> sequence, std::optional<int> cap)
    : d_(d), cap_(cap), seq_(std::move(sequence)) {
  if (d_ <= 16) {
    dense_index_.assign(std::size_t{1} << d_, -1);
    for (std::size_t k = 0; k < seq_.size(); ++k) {
      if (seq_[k].mask >= dense_index_.size())
        throw Error(ErrorCode::InvalidArgument, "subset outside dimension");
      dense_index_[seq_[k].mask] = static_cast<std::int64_t>(k);
    }
  } else {
    sparse_index_.reserve(seq_.size());
    for (std::size_t k = 0; k < seq_.size(); ++k) sparse_index_.emplace_back(seq_[k].mask, k);
    std::sort(sparse_index_.begin(), sparse_index_.end());
  }
}

std::optional<std::size_t> SubsetOrder::index_of(SubsetId a) const {
  if (!dense_index_.empty()) {
    if (a.mask >= dense_index_.size() || dense_index_[a.mask] < 0) return std::nullopt;
    return static_cast<std::size_t>(dense_index_[a.mask]);
  }
  auto it = std::lower_bound(sparse_index_.begin(), sparse_index_.end(),
                             std::pair<Mask, std::size_t>{a.mask, 0});
  if (it == sparse_index_.end() || it->first != a.mask) return std::nullopt;
  return it->second;
}

int exact_dimension_limit() {
  if (const char* env = std::getenv("MBHD_MAX_EXACT_D")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v <= kMaxDimension) return static_cast<int>(v);
  }
  return kDefaultExactDimensionLimit;
}

std::size_t truncated_size(int d, int cap) {
  std::size_t total = 0;
  std::size_t binom = 1;
  for (int k = 0; k <= cap && k <= d; ++k) {
    total += binom;
    binom = binom * static_cast<std::size_t>(d - k) / static_cast<std::size_t>(k + 1);
  }
  return total;
}

SubsetOrder enumerate_subsets(int d, std::optional<int> cap, std::optional<int> exact_limit) {
  if (d < 1 || d > kMaxDimension)
    throw Error(ErrorCode::DimensionTooLarge, "dimension must be in [1, 30], got " + std::to_string(d));
  if (cap && (*cap < 0 || *cap > d))
    throw Error(ErrorCode::InvalidArgument, "cardinality cap must be in [0, d]");
  const int limit = exact_limit.value_or(exact_dimension_limit());
  if (!cap && d > limit)
    throw Error(ErrorCode::DimensionTooLarge,
                "full enumeration with d=" + std::to_string(d) + " exceeds exact-mode limit " +
                    std::to_string(limit) + "; use a cardinality cap");

  const int top = cap.value_or(d);
  std::vector<SubsetId> seq;
  seq.reserve(truncated_size(d, top));
  const std::uint64_t limit_mask = std::uint64_t{1} << d;
  for (int k = 0; k <= top; ++k) {
    if (k == 0) {
      seq.push_back(SubsetId{0});
      continue;
    }
    // Gosper's hack walks same-popcount masks in ascending order.
    std::uint64_t v = (std::uint64_t{1} << k) - 1;
    while (v < limit_mask) {
      seq.push_back(SubsetId{static_cast<Mask>(v)});
      const std::uint64_t t = v | (v - 1);
      v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
    }
  }
  return SubsetOrder(d, std::move(seq), cap);
}

Mask config_from_bits(std::span<const std::uint8_t> bits) {
  if (bits.size() > static_cast<std::size_t>(kMaxDimension))
    throw Error(ErrorCode::DimensionTooLarge, "binary vector longer than 30");
  Mask x = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw Error(ErrorCode::InvalidArgument, "binary vector entries must be 0 or 1");
    if (bits[i]) x |= Mask{1} << i;
  }
  return x;
}

std::vector<std::uint8_t> bits_from_config(Mask x, int d) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) bits[static_cast<std::size_t>(i)] = (x >> i) & 1u;
  return bits;
}

}  // namespace mbhd
