#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ibg {

/// Malformed or inconsistent input (bad file, unknown agent, alphabet mismatch).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using StateId = std::uint32_t;
using LetterIndex = std::uint64_t;

inline constexpr std::uint32_t kNone = static_cast<std::uint32_t>(-1);

/// One symbol index per channel.
struct Letter {
  std::vector<std::uint32_t> picks;

  std::uint32_t operator[](std::size_t channel) const { return picks[channel]; }
  std::size_t size() const { return picks.size(); }
  auto operator<=>(const Letter&) const = default;
};

/// A subset of agents, kept sorted ascending.
class ChannelMask {
 public:
  ChannelMask() = default;
  explicit ChannelMask(std::vector<std::uint32_t> agents);

  static ChannelMask full(std::size_t num_channels);

  std::span<const std::uint32_t> agents() const { return agents_; }
  std::size_t size() const { return agents_.size(); }
  bool contains(std::uint32_t agent) const;
  ChannelMask with(std::uint32_t agent) const;
  ChannelMask without(std::uint32_t agent) const;

  auto operator<=>(const ChannelMask&) const = default;

 private:
  std::vector<std::uint32_t> agents_;
};

/// The decision set: Cartesian product of per-agent symbol lists. The product
/// itself is never materialized; letters are addressed by a mixed-radix index
/// with channel 0 most significant, so index order is lexicographic order.
class ProductAlphabet {
 public:
  explicit ProductAlphabet(std::vector<std::vector<std::string>> channels);

  std::size_t num_channels() const { return channels_.size(); }
  std::size_t channel_size(std::size_t channel) const { return channels_.at(channel).size(); }
  const std::vector<std::string>& channel(std::size_t i) const { return channels_.at(i); }
  const std::string& symbol(std::size_t channel, std::uint32_t index) const;
  std::optional<std::uint32_t> find(std::size_t channel, std::string_view name) const;

  /// |Σ|; throws InputError when it does not fit in 64 bits.
  LetterIndex size() const { return size_; }

  Letter letter(LetterIndex index) const;
  LetterIndex index(const Letter& letter) const;
  bool valid(const Letter& letter) const;
  std::string format(const Letter& letter) const;

  bool operator==(const ProductAlphabet& other) const { return channels_ == other.channels_; }

 private:
  std::vector<std::vector<std::string>> channels_;
  std::vector<LetterIndex> strides_;
  LetterIndex size_ = 1;
};

using AlphabetPtr = std::shared_ptr<const ProductAlphabet>;

bool same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b);

/// A letter with only the channels of a mask kept, in ascending agent order.
struct RestrictedLetter {
  ChannelMask mask;
  std::vector<std::uint32_t> picks;
  auto operator<=>(const RestrictedLetter&) const = default;
};

RestrictedLetter project(const ProductAlphabet& alphabet, const Letter& letter, const ChannelMask& mask);
RestrictedLetter project(const RestrictedLetter& letter, const ChannelMask& mask);

/// Σ_I for a mask I, indexed in the same mixed-radix order as the full alphabet.
class RestrictedAlphabet {
 public:
  RestrictedAlphabet(const ProductAlphabet& alphabet, ChannelMask mask);

  const ChannelMask& mask() const { return mask_; }
  LetterIndex size() const { return size_; }

  LetterIndex index_of(const Letter& full) const;
  LetterIndex index_of_picks(std::span<const std::uint32_t> picks) const;
  std::vector<std::uint32_t> picks(LetterIndex index) const;
  /// Symbol of `channel` (which must be in the mask) inside restricted letter `index`.
  std::uint32_t pick(LetterIndex index, std::uint32_t channel) const;

  /// Table mapping every full letter index to its restricted index.
  std::vector<LetterIndex> projection_table(const ProductAlphabet& alphabet) const;

 private:
  ChannelMask mask_;
  std::vector<LetterIndex> radix_;
  std::vector<LetterIndex> strides_;
  LetterIndex size_ = 1;
};

}  // namespace ibg
