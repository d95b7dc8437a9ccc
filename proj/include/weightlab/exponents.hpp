#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace weightlab {

// p' = p / (p - 1).
double conjugate(double p);

// (p_1, ..., p_m) with 1/p = sum 1/p_i.
class ExponentVector {
 public:
  explicit ExponentVector(std::vector<double> p_list);

  std::size_t m() const noexcept { return p_list_.size(); }
  double p() const noexcept { return p_; }
  double p_i(std::size_t i) const { return p_list_.at(i); }
  double conj(std::size_t i) const { return conj_list_.at(i); }
  std::span<const double> p_list() const noexcept { return p_list_; }
  std::span<const double> conj_list() const noexcept { return conj_list_; }

  // |1/p + sum 1/p_i' - m|.
  double identity_residual() const;

 private:
  std::vector<double> p_list_;
  std::vector<double> conj_list_;
  double p_;
};

}  // namespace weightlab
