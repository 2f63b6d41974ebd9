#include "qotsim/codeword.hpp"

#include <algorithm>
#include <stdexcept>

namespace qotsim {

CodewordSet::CodewordSet(int bits, std::vector<std::uint32_t> words)
    : bits_(bits), words_(std::move(words)) {
  if (bits_ < 1 || bits_ > 20) throw std::invalid_argument("CodewordSet: bits out of range");
  if (words_.empty()) throw std::invalid_argument("CodewordSet: empty");
  const std::uint32_t limit = std::uint32_t{1} << bits_;
  for (std::uint32_t w : words_) {
    if (w >= limit) throw std::invalid_argument("CodewordSet: word wider than bit count");
  }
  std::vector<std::uint32_t> sorted = words_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("CodewordSet: duplicate word");
  }
}

bool CodewordSet::contains(std::uint32_t word) const {
  return std::find(words_.begin(), words_.end(), word) != words_.end();
}

std::uint32_t CodewordSet::sample(Rng& rng) const {
  return words_[rng.uniform_int(static_cast<int>(words_.size()))];
}

long CodewordSet::count_completions(std::span<const std::pair<int, int>> pins) const {
  for (const auto& [index, value] : pins) {
    if (index < 0 || index >= bits_) {
      throw std::invalid_argument("CodewordSet::count_completions: pin index out of range");
    }
    if (value != 0 && value != 1) {
      throw std::invalid_argument("CodewordSet::count_completions: pin value must be a bit");
    }
  }
  long count = 0;
  for (std::uint32_t w : words_) {
    bool ok = true;
    for (const auto& [index, value] : pins) {
      if (bit_of(w, index) != value) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;
  }
  return count;
}

int CodewordSet::bit_of(std::uint32_t word, int index) const {
  if (index < 0 || index >= bits_) {
    throw std::invalid_argument("CodewordSet::bit_of: index out of range");
  }
  return static_cast<int>((word >> (bits_ - 1 - index)) & 1u);
}

std::string CodewordSet::to_string(std::uint32_t word) const {
  std::string s(static_cast<std::size_t>(bits_), '0');
  for (int i = 0; i < bits_; ++i) s[i] = bit_of(word, i) ? '1' : '0';
  return s;
}

const CodewordSet& CodewordSet::triples() {
  static const CodewordSet set(3, {0b000, 0b001, 0b010, 0b100});
  return set;
}

CodewordSet CodewordSet::all_strings(int bits) {
  if (bits < 1 || bits > 16) {
    throw std::invalid_argument("CodewordSet::all_strings: bits out of range");
  }
  std::vector<std::uint32_t> words(std::size_t{1} << bits);
  for (std::size_t i = 0; i < words.size(); ++i) words[i] = static_cast<std::uint32_t>(i);
  return CodewordSet(bits, std::move(words));
}

}  // namespace qotsim
