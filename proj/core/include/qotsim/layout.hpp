#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qotsim {

// Ordered list of local dimensions for a composite system, with the
// big-endian mixed-radix index convention: for dims (d0, d1, ..., dm-1) the
// flat index of digits (a0, a1, ..., am-1) is a0*d1*...*dm-1 + ... + am-1.
// Subsystem 0 is therefore the most significant digit, matching the usual
// ket notation |a0 a1 ... am-1>.
class SubsystemLayout {
 public:
  SubsystemLayout() = default;
  explicit SubsystemLayout(std::vector<int> dims);

  int count() const { return static_cast<int>(dims_.size()); }
  int dim(int subsystem) const;
  long total_dim() const { return total_; }
  long stride(int subsystem) const;
  const std::vector<int>& dims() const { return dims_; }

  long index_of(std::span<const int> digits) const;
  std::vector<int> digits_of(long index) const;

  static SubsystemLayout concat(const SubsystemLayout& a, const SubsystemLayout& b);

  bool operator==(const SubsystemLayout& other) const { return dims_ == other.dims_; }
  bool operator!=(const SubsystemLayout& other) const { return !(*this == other); }

 private:
  std::vector<int> dims_;
  std::vector<long> strides_;
  long total_ = 1;
};

}  // namespace qotsim
