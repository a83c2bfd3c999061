#include "nbp/stirling.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nbp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

StirlingTable::StirlingTable(std::size_t max_m) : max_m_(max_m) {
  log_s_.assign((max_m + 1) * (max_m + 2) / 2, kNegInf);
  log_s_[0] = 0.0;  // |s(0,0)| = 1
  std::size_t prev = 0;
  for (std::size_t m = 1; m <= max_m; ++m) {
    const std::size_t row = m * (m + 1) / 2;
    const double log_m_minus_1 = m > 1 ? std::log(static_cast<double>(m - 1)) : kNegInf;
    // l = 0 stays -inf for m >= 1
    for (std::size_t l = 1; l < m; ++l) {
      log_s_[row + l] =
          log_add_exp(log_m_minus_1 + log_s_[prev + l], log_s_[prev + l - 1]);
    }
    log_s_[row + m] = 0.0;  // |s(m,m)| = 1
    prev = row;
  }
}

double StirlingTable::log_s(std::size_t m, std::size_t l) const {
  if (m > max_m_)
    throw std::out_of_range("StirlingTable: m = " + std::to_string(m) +
                            " exceeds max_m = " + std::to_string(max_m_));
  if (l > m)
    throw std::out_of_range("StirlingTable: l = " + std::to_string(l) +
                            " exceeds m = " + std::to_string(m));
  return log_s_[m * (m + 1) / 2 + l];
}

}  // namespace nbp
