#include "ibg/alphabet.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace ibg {

ChannelMask::ChannelMask(std::vector<std::uint32_t> agents) : agents_(std::move(agents)) {
  std::sort(agents_.begin(), agents_.end());
  agents_.erase(std::unique(agents_.begin(), agents_.end()), agents_.end());
}

ChannelMask ChannelMask::full(std::size_t num_channels) {
  std::vector<std::uint32_t> all(num_channels);
  for (std::size_t i = 0; i < num_channels; ++i) all[i] = static_cast<std::uint32_t>(i);
  return ChannelMask(std::move(all));
}

bool ChannelMask::contains(std::uint32_t agent) const {
  return std::binary_search(agents_.begin(), agents_.end(), agent);
}

ChannelMask ChannelMask::with(std::uint32_t agent) const {
  auto agents = agents_;
  agents.push_back(agent);
  return ChannelMask(std::move(agents));
}

ChannelMask ChannelMask::without(std::uint32_t agent) const {
  auto agents = agents_;
  std::erase(agents, agent);
  return ChannelMask(std::move(agents));
}

ProductAlphabet::ProductAlphabet(std::vector<std::vector<std::string>> channels)
    : channels_(std::move(channels)) {
  if (channels_.empty()) throw InputError("alphabet: at least one channel is required");
  strides_.assign(channels_.size(), 1);
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    const auto& symbols = channels_[i];
    if (symbols.empty()) throw InputError("alphabet: channel " + std::to_string(i) + " is empty");
    std::set<std::string> seen(symbols.begin(), symbols.end());
    if (seen.size() != symbols.size())
      throw InputError("alphabet: duplicate symbol in channel " + std::to_string(i));
  }
  for (std::size_t i = channels_.size(); i-- > 0;) {
    strides_[i] = size_;
    const auto n = static_cast<LetterIndex>(channels_[i].size());
    if (size_ > std::numeric_limits<LetterIndex>::max() / n)
      throw InputError("alphabet: product alphabet does not fit in 64 bits");
    size_ *= n;
  }
}

const std::string& ProductAlphabet::symbol(std::size_t channel, std::uint32_t index) const {
  return channels_.at(channel).at(index);
}

std::optional<std::uint32_t> ProductAlphabet::find(std::size_t channel, std::string_view name) const {
  if (channel >= channels_.size()) return std::nullopt;
  const auto& symbols = channels_[channel];
  auto it = std::find(symbols.begin(), symbols.end(), name);
  if (it == symbols.end()) return std::nullopt;
  return static_cast<std::uint32_t>(it - symbols.begin());
}

Letter ProductAlphabet::letter(LetterIndex index) const {
  Letter out;
  out.picks.resize(channels_.size());
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    out.picks[i] = static_cast<std::uint32_t>(index / strides_[i]);
    index %= strides_[i];
  }
  return out;
}

LetterIndex ProductAlphabet::index(const Letter& letter) const {
  LetterIndex out = 0;
  for (std::size_t i = 0; i < channels_.size(); ++i) out += letter.picks[i] * strides_[i];
  return out;
}

bool ProductAlphabet::valid(const Letter& letter) const {
  if (letter.picks.size() != channels_.size()) return false;
  for (std::size_t i = 0; i < channels_.size(); ++i)
    if (letter.picks[i] >= channels_[i].size()) return false;
  return true;
}

std::string ProductAlphabet::format(const Letter& letter) const {
  std::string out = "(";
  for (std::size_t i = 0; i < letter.picks.size(); ++i) {
    if (i) out += ',';
    out += symbol(i, letter.picks[i]);
  }
  return out + ")";
}

bool same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b) {
  return a == b || (a && b && *a == *b);
}

RestrictedLetter project(const ProductAlphabet& alphabet, const Letter& letter, const ChannelMask& mask) {
  if (!alphabet.valid(letter)) throw InputError("project: letter is not valid for the alphabet");
  RestrictedLetter out{mask, {}};
  for (auto agent : mask.agents()) {
    if (agent >= alphabet.num_channels())
      throw InputError("project: mask references nonexistent channel " + std::to_string(agent));
    out.picks.push_back(letter.picks[agent]);
  }
  return out;
}

RestrictedLetter project(const RestrictedLetter& letter, const ChannelMask& mask) {
  RestrictedLetter out{mask, {}};
  const auto from = letter.mask.agents();
  for (auto agent : mask.agents()) {
    auto it = std::lower_bound(from.begin(), from.end(), agent);
    if (it == from.end() || *it != agent)
      throw InputError("project: channel " + std::to_string(agent) + " is not present in the letter");
    out.picks.push_back(letter.picks[static_cast<std::size_t>(it - from.begin())]);
  }
  return out;
}

RestrictedAlphabet::RestrictedAlphabet(const ProductAlphabet& alphabet, ChannelMask mask)
    : mask_(std::move(mask)) {
  for (auto agent : mask_.agents()) {
    if (agent >= alphabet.num_channels())
      throw InputError("mask references nonexistent channel " + std::to_string(agent));
    radix_.push_back(alphabet.channel_size(agent));
  }
  strides_.assign(radix_.size(), 1);
  for (std::size_t i = radix_.size(); i-- > 0;) {
    strides_[i] = size_;
    size_ *= radix_[i];
  }
}

LetterIndex RestrictedAlphabet::index_of(const Letter& full) const {
  LetterIndex out = 0;
  const auto agents = mask_.agents();
  for (std::size_t i = 0; i < agents.size(); ++i) out += full.picks[agents[i]] * strides_[i];
  return out;
}

LetterIndex RestrictedAlphabet::index_of_picks(std::span<const std::uint32_t> picks) const {
  LetterIndex out = 0;
  for (std::size_t i = 0; i < picks.size(); ++i) out += picks[i] * strides_[i];
  return out;
}

std::vector<std::uint32_t> RestrictedAlphabet::picks(LetterIndex index) const {
  std::vector<std::uint32_t> out(radix_.size());
  for (std::size_t i = 0; i < radix_.size(); ++i) {
    out[i] = static_cast<std::uint32_t>(index / strides_[i]);
    index %= strides_[i];
  }
  return out;
}

std::uint32_t RestrictedAlphabet::pick(LetterIndex index, std::uint32_t channel) const {
  const auto agents = mask_.agents();
  auto it = std::lower_bound(agents.begin(), agents.end(), channel);
  const auto pos = static_cast<std::size_t>(it - agents.begin());
  return static_cast<std::uint32_t>((index / strides_[pos]) % radix_[pos]);
}

std::vector<LetterIndex> RestrictedAlphabet::projection_table(const ProductAlphabet& alphabet) const {
  std::vector<LetterIndex> table(alphabet.size());
  for (LetterIndex a = 0; a < alphabet.size(); ++a) table[a] = index_of(alphabet.letter(a));
  return table;
}

}  // namespace ibg
