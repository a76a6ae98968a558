#pragma once

#include "qtrace/scalar.hpp"

#include <chrono>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace qtrace {

// One verified identity.
struct CheckReport {
  std::string name;
  std::map<std::string, double> params;
  cdouble lhs{0, 0};
  cdouble rhs{0, 0};
  double abs_err = 0;
  double rel_err = 0;
  double tolerance = 0;
  bool passed = false;
  double runtime_ms = 0;
  std::string notes;
  // relative change of the quadrature value when the node count doubles; NaN if none
  double node_doubling_delta = std::numeric_limits<double>::quiet_NaN();
  unsigned digits = 0;  // working decimal digits, 0 for binary64

  void decide() { passed = abs_err <= tolerance || rel_err <= tolerance; }
  void add_note(const std::string& s) { notes += notes.empty() ? s : "; " + s; }
};

// Tracks the worst sample of a multi-point comparison. rel_err uses `scale`
// (|rhs| when not given) as denominator.
class ErrorTracker {
 public:
  void add(cdouble lhs, cdouble rhs, double scale = -1);
  void fill(CheckReport& r) const;
  double max_abs() const { return max_abs_; }
  double max_rel() const { return max_rel_; }
  int count() const { return count_; }

 private:
  double max_abs_ = 0, max_rel_ = 0;
  cdouble lhs_{0, 0}, rhs_{0, 0};
  int count_ = 0;
};

CheckReport make_report(const std::string& name, std::map<std::string, double> params, cdouble lhs,
                        cdouble rhs, double tolerance, double scale = -1);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string reports_to_json(const std::vector<CheckReport>& reports, int indent = 2);
std::string reports_to_csv(const std::vector<CheckReport>& reports);

}  // namespace qtrace
