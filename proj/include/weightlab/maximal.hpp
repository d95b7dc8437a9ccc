#pragma once

#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "weightlab/grid.hpp"

namespace weightlab {

enum class MaximalAlgorithm { Naive, Fast };

std::string_view algorithm_name(MaximalAlgorithm algo);
MaximalAlgorithm parse_algorithm(std::string_view name);

struct MaximalResult {
  CellField values;
  CubeFamily family;
  MaximalAlgorithm algorithm;
};

// prod_i (sum of f_i over the box [lo, hi)) / cells. Every candidate value of
// the maximal operator goes through this function, so all algorithms see the
// same bits. Falls back to log space when some average is below 1e-300.
double product_of_box_averages(std::span<const CellField> f, CellIndex lo, CellIndex hi, double cells) noexcept;

// M(f)(x) = max over family cubes Q containing x of prod_i avg_Q f_i.
MaximalResult mult_maximal(std::span<const CellField> f, const CubeFamily& family,
                           MaximalAlgorithm algorithm = MaximalAlgorithm::Fast);

// For every cube Q of the index (by ordinal):
//   sum over cells x in Q of M(f chi_Q)(x)^power * u_x,
// with M taken over the same family. Cells are summed in canonical order.
std::vector<double> localized_maximal_sums(std::span<const CellField> f, const CellField& u, double power,
                                           const CubeIndex& index,
                                           MaximalAlgorithm algorithm = MaximalAlgorithm::Fast);

// (sum_cells f^p u * cell volume)^(1/p).
double lp_norm(const CellField& f, const CellField& u, double p);

// Running sum with Neumaier compensation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      c_ += (sum_ - t) + x;
    } else {
      c_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

}  // namespace weightlab
