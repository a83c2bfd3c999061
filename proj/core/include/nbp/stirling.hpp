#pragma once

#include <cstddef>
#include <vector>

namespace nbp {

// Unsigned Stirling numbers of the first kind |s(m,l)| in log space; the
// linear-space values overflow doubles past m ~ 170. Rows are filled once
// with the recurrence |s(m+1,l)| = m |s(m,l)| + |s(m,l-1)| (log-sum-exp) and
// the table is immutable afterwards, so it can be shared across threads.
class StirlingTable {
public:
  explicit StirlingTable(std::size_t max_m = kDefaultMaxM);

  std::size_t max_m() const { return max_m_; }

  /// log |s(m,l)|; -infinity where |s(m,l)| = 0.
  /// Throws std::out_of_range when m > max_m or l > m.
  double log_s(std::size_t m, std::size_t l) const;

  static constexpr std::size_t kDefaultMaxM = 1000;

private:
  std::size_t max_m_;
  std::vector<double> log_s_;  // triangular, row m starts at m(m+1)/2
};

}  // namespace nbp
