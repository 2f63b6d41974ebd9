#include "qotsim/layout.hpp"

#include <stdexcept>
#include <string>

namespace qotsim {

namespace {
constexpr long kMaxTotalDim = 100000;  // dense simulation budget
}

SubsystemLayout::SubsystemLayout(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("SubsystemLayout: needs at least one subsystem");
  for (int d : dims_) {
    if (d < 2) throw std::invalid_argument("SubsystemLayout: local dimensions must be >= 2");
  }
  strides_.assign(dims_.size(), 1);
  total_ = 1;
  for (int i = count() - 1; i >= 0; --i) {
    strides_[i] = total_;
    total_ *= dims_[i];
    if (total_ > kMaxTotalDim) {
      throw std::invalid_argument("SubsystemLayout: total dimension exceeds dense budget of " +
                                  std::to_string(kMaxTotalDim));
    }
  }
}

int SubsystemLayout::dim(int subsystem) const {
  if (subsystem < 0 || subsystem >= count()) {
    throw std::out_of_range("SubsystemLayout::dim: subsystem index out of range");
  }
  return dims_[subsystem];
}

long SubsystemLayout::stride(int subsystem) const {
  if (subsystem < 0 || subsystem >= count()) {
    throw std::out_of_range("SubsystemLayout::stride: subsystem index out of range");
  }
  return strides_[subsystem];
}

long SubsystemLayout::index_of(std::span<const int> digits) const {
  if (static_cast<int>(digits.size()) != count()) {
    throw std::invalid_argument("SubsystemLayout::index_of: digit count mismatch");
  }
  long index = 0;
  for (int i = 0; i < count(); ++i) {
    if (digits[i] < 0 || digits[i] >= dims_[i]) {
      throw std::out_of_range("SubsystemLayout::index_of: digit out of range");
    }
    index += digits[i] * strides_[i];
  }
  return index;
}

std::vector<int> SubsystemLayout::digits_of(long index) const {
  if (index < 0 || index >= total_) {
    throw std::out_of_range("SubsystemLayout::digits_of: index out of range");
  }
  std::vector<int> digits(dims_.size());
  for (int i = 0; i < count(); ++i) {
    digits[i] = static_cast<int>(index / strides_[i]);
    index %= strides_[i];
  }
  return digits;
}

SubsystemLayout SubsystemLayout::concat(const SubsystemLayout& a, const SubsystemLayout& b) {
  std::vector<int> dims = a.dims_;
  dims.insert(dims.end(), b.dims_.begin(), b.dims_.end());
  return SubsystemLayout(std::move(dims));
}

}  // namespace qotsim
