#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qotsim/rng.hpp"

namespace qotsim {

// A finite set of n-bit strings that honest value strings are drawn from.
// Bits are indexed left to right: bit 0 is the most significant, so the word
// 0b100 with n = 3 has bit_of(word, 0) == 1.
class CodewordSet {
 public:
  CodewordSet(int bits, std::vector<std::uint32_t> words);

  int bits() const { return bits_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::uint32_t>& words() const { return words_; }

  bool contains(std::uint32_t word) const;
  std::uint32_t sample(Rng& rng) const;

  // Number of members consistent with the given (position, value) pins.
  long count_completions(std::span<const std::pair<int, int>> pins) const;

  int bit_of(std::uint32_t word, int index) const;
  std::string to_string(std::uint32_t word) const;

  // The set {000, 001, 010, 100} used by the triple-based transfer.
  static const CodewordSet& triples();
  // Every n-bit string (n <= 16); turns the value strings into free bits.
  static CodewordSet all_strings(int bits);

 private:
  int bits_;
  std::vector<std::uint32_t> words_;
};

}  // namespace qotsim
