#include "qtrace/report.hpp"

#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>

namespace qtrace {

void ErrorTracker::add(cdouble lhs, cdouble rhs, double scale) {
  const double a = std::abs(lhs - rhs);
  const double s = scale > 0 ? scale : std::abs(rhs);
  const double r = s > 0 ? a / s : (a == 0 ? 0 : std::numeric_limits<double>::infinity());
  if (count_ == 0 || r > max_rel_ || (std::isinf(r) && a > max_abs_)) {
    lhs_ = lhs;
    rhs_ = rhs;
  }
  max_abs_ = std::max(max_abs_, a);
  max_rel_ = std::max(max_rel_, r);
  ++count_;
}

void ErrorTracker::fill(CheckReport& r) const {
  r.lhs = lhs_;
  r.rhs = rhs_;
  r.abs_err = max_abs_;
  r.rel_err = max_rel_;
  r.decide();
}

CheckReport make_report(const std::string& name, std::map<std::string, double> params, cdouble lhs,
                        cdouble rhs, double tolerance, double scale) {
  CheckReport r;
  r.name = name;
  r.params = std::move(params);
  r.tolerance = tolerance;
  ErrorTracker t;
  t.add(lhs, rhs, scale);
  t.fill(r);
  return r;
}

namespace {

// JSON has no inf/nan; keep them readable as strings.
nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string reports_to_json(const std::vector<CheckReport>& reports, int indent) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : r.params) params[k] = number(v);
    arr.push_back({{"name", r.name},
                   {"params", params},
                   {"lhs_re", number(r.lhs.real())},
                   {"lhs_im", number(r.lhs.imag())},
                   {"rhs_re", number(r.rhs.real())},
                   {"rhs_im", number(r.rhs.imag())},
                   {"abs_err", number(r.abs_err)},
                   {"rel_err", number(r.rel_err)},
                   {"tolerance", number(r.tolerance)},
                   {"passed", r.passed},
                   {"runtime_ms", number(r.runtime_ms)},
                   {"notes", r.notes},
                   {"node_doubling_delta", number(r.node_doubling_delta)},
                   {"digits", r.digits}});
  }
  nlohmann::json doc = {{"reports", arr}};
  std::size_t passed = 0;
  for (const auto& r : reports) passed += r.passed;
  doc["summary"] = {{"total", reports.size()}, {"passed", passed}};
  return doc.dump(indent);
}

std::string reports_to_csv(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "name,params,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,tolerance,passed,runtime_ms,notes,"
        "node_doubling_delta,digits\n";
  for (const auto& r : reports) {
    std::string params;
    for (const auto& [k, v] : r.params) {
      std::ostringstream p;
      p << std::setprecision(17) << k << '=' << v;
      params += (params.empty() ? "" : ";") + p.str();
    }
    os << csv_field(r.name) << ',' << csv_field(params) << ',' << r.lhs.real() << ','
       << r.lhs.imag() << ',' << r.rhs.real() << ',' << r.rhs.imag() << ',' << r.abs_err << ','
       << r.rel_err << ',' << r.tolerance << ',' << (r.passed ? "true" : "false") << ','
       << r.runtime_ms << ',' << csv_field(r.notes) << ',' << r.node_doubling_delta << ','
       << r.digits << '\n';
  }
  return os.str();
}

}  // namespace qtrace
