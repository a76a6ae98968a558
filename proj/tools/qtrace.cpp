// qtrace: verify trace-function identities, dump contour samples.
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 usage or config error.

#include "qtrace/suites.hpp"
#include "qtrace/tracefn.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace qtrace;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Scan {
  std::string key;
  double start = 0, stop = 0;
  int count = 1;

  double at(int i) const { return count == 1 ? start : start + (stop - start) * i / (count - 1); }
};

Scan parse_scan(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos) throw UsageError("scan must look like key=start:stop:count");
  Scan sc;
  sc.key = s.substr(0, eq);
  if (sc.key != "q" && sc.key != "mu" && sc.key != "nu" && sc.key != "xi" && sc.key != "eta")
    throw UsageError("scan key must be one of q, mu, nu, xi, eta");
  std::istringstream is(s.substr(eq + 1));
  char c1 = 0, c2 = 0;
  if (!(is >> sc.start >> c1 >> sc.stop >> c2 >> sc.count) || c1 != ':' || c2 != ':' || !is.eof())
    throw UsageError("scan must look like key=start:stop:count");
  if (sc.count < 1) throw UsageError("scan count must be >= 1");
  return sc;
}

struct Options {
  bool all = false;
  std::vector<std::string> suites;
  double q = 0.5;
  std::vector<int> m_list{1};
  std::optional<double> mu, nu, xi, eta;
  std::vector<std::string> scans;
  std::string out, format = "json";
  std::map<std::string, double> tolerances;
  QuadratureOptions quad;
  TransformOptions transform;
  int theta_B = 60, verma_K = 200;
  bool allow_small_xi = false;
};

// Config keys first; flags given on the command line override them afterwards.
void load_config(const std::string& path, Options& o) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw UsageError(std::string("config parse error: ") + e.what());
  }
  try {
    if (j.contains("q")) o.q = j["q"].get<double>();
    if (j.contains("m")) {
      if (j["m"].is_array()) o.m_list = j["m"].get<std::vector<int>>();
      else o.m_list = {j["m"].get<int>()};
    }
    if (j.contains("m_list")) o.m_list = j["m_list"].get<std::vector<int>>();
    if (j.contains("suite")) {
      if (j["suite"].is_array()) o.suites = j["suite"].get<std::vector<std::string>>();
      else o.suites = {j["suite"].get<std::string>()};
    }
    if (j.contains("all")) o.all = j["all"].get<bool>();
    for (const char* k : {"mu", "nu", "xi", "eta"}) {
      if (!j.contains(k)) continue;
      const auto& v = j[k];
      std::optional<double>& dst = std::string(k) == "mu" ? o.mu : std::string(k) == "nu" ? o.nu
                                                              : std::string(k) == "xi" ? o.xi : o.eta;
      if (v.is_object()) {
        std::ostringstream s;
        s << k << '=' << v.at("start").get<double>() << ':' << v.at("stop").get<double>() << ':'
          << v.at("count").get<int>();
        o.scans.push_back(s.str());
      } else {
        dst = v.get<double>();
      }
    }
    if (j.contains("quadrature")) {
      const auto& qd = j["quadrature"];
      if (qd.contains("torus_n")) o.quad.torus_n = qd["torus_n"].get<int>();
      if (qd.contains("line_n")) o.quad.line_n = qd["line_n"].get<int>();
      if (qd.contains("real_n")) o.transform.real_n = qd["real_n"].get<int>();
      if (qd.contains("x_max")) o.transform.x_max = qd["x_max"].get<double>();
      if (qd.contains("y_max")) o.transform.y_max = qd["y_max"].get<double>();
    }
    if (j.contains("truncation")) {
      const auto& t = j["truncation"];
      if (t.contains("theta_B")) o.theta_B = t["theta_B"].get<int>();
      if (t.contains("verma_K")) o.verma_K = t["verma_K"].get<int>();
    }
    if (j.contains("output")) {
      const auto& out = j["output"];
      if (out.contains("path")) o.out = out["path"].get<std::string>();
      if (out.contains("format")) o.format = out["format"].get<std::string>();
    }
    if (j.contains("tolerances")) o.tolerances = j["tolerances"].get<std::map<std::string, double>>();
    if (j.contains("allow_small_xi")) o.allow_small_xi = j["allow_small_xi"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config error: ") + e.what());
  }
}

void validate(const Options& o) {
  if (!(o.q > 0 && o.q < 1)) throw UsageError("q must lie in (0, 1)");
  if (o.format != "json" && o.format != "csv") throw UsageError("format must be json or csv");
  for (int m : o.m_list)
    if (m < 0 || m > 8) throw UsageError("m must lie in 0..8");
  if (o.quad.torus_n < 16) throw UsageError("torus_n must be >= 16");
  if (o.quad.line_n < 16) throw UsageError("line_n must be >= 16");
}

void emit(const std::vector<CheckReport>& reports, const Options& o) {
  const std::string doc = o.format == "csv" ? reports_to_csv(reports) : reports_to_json(reports) + "\n";
  if (o.out.empty()) {
    std::cout << doc;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw std::runtime_error("cannot write " + o.out);
  f << doc;
}

// Contours must keep 0.5 from the poles {1..m} in the real direction.
std::string contour_guard(double xi, int m, bool allow) {
  for (int j = 1; j <= m; ++j)
    if (std::abs(std::abs(xi) - j) < 0.5) throw UsageError("contour xi is within 0.5 of a pole");
  if (xi < m + 5) {
    if (!allow) throw UsageError("xi must be >= m + 5 (use --allow-small-xi to override)");
    return "warning: xi below m + 5 by override";
  }
  return {};
}

int run_verify(Options o) {
  validate(o);
  std::vector<const Suite*> chosen;
  if (o.all || o.suites.empty()) {
    for (const auto& s : suite_registry()) chosen.push_back(&s);
  } else {
    for (const auto& name : o.suites) {
      const Suite* s = find_suite(name);
      if (!s) throw UsageError("unknown suite " + name);
      chosen.push_back(s);
    }
  }
  std::vector<Scan> scans;
  for (const auto& s : o.scans) scans.push_back(parse_scan(s));

  std::vector<CheckReport> reports;
  std::vector<int> idx(scans.size(), 0);
  for (;;) {
    for (int m : o.m_list) {
      SuiteParams p;
      p.q = o.q;
      p.m = m;
      p.mu = o.mu;
      p.nu = o.nu;
      p.xi = o.xi;
      p.eta = o.eta;
      for (std::size_t i = 0; i < scans.size(); ++i) {
        const double v = scans[i].at(idx[i]);
        if (scans[i].key == "q") p.q = v;
        if (scans[i].key == "mu") p.mu = v;
        if (scans[i].key == "nu") p.nu = v;
        if (scans[i].key == "xi") p.xi = v;
        if (scans[i].key == "eta") p.eta = v;
      }
      if (!(p.q > 0 && p.q < 1)) throw UsageError("q must lie in (0, 1)");
      p.quad = o.quad;
      p.transform = o.transform;
      p.theta_B = o.theta_B;
      p.verma_K = o.verma_K;
      p.tolerances = o.tolerances;
      const std::string warning = contour_guard(p.xi_value(), m, o.allow_small_xi);
      for (const Suite* s : chosen) {
        std::vector<CheckReport> rs;
        try {
          rs = run_suite(*s, p);
        } catch (const std::invalid_argument& e) {
          throw UsageError(s->name + ": " + e.what());
        }
        for (auto& r : rs) {
          if (!warning.empty()) r.add_note(warning);
          std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << " m=" << m << " q=" << p.q
                    << " abs=" << r.abs_err << " rel=" << r.rel_err << " tol=" << r.tolerance << '\n';
          reports.push_back(std::move(r));
        }
      }
    }
    // odometer over the scan grid
    std::size_t k = 0;
    while (k < scans.size() && ++idx[k] == scans[k].count) idx[k++] = 0;
    if (k == scans.size()) break;
  }
  emit(reports, o);
  for (const auto& r : reports)
    if (!r.passed) return 1;
  return 0;
}

int run_dump(const Options& o, const std::string& which, int n) {
  validate(o);
  const int m = o.m_list.front();
  const double xi = o.xi.value_or(m + 7.0);
  const auto p = make_params<double>(o.q, m);
  const double mu = o.mu.value_or(which == "integrand_heat" ? 0.7 : 0.0);
  const double nu = o.nu.value_or(-0.2);
  std::vector<std::array<double, 3>> rows;
  if (which == "F_on_torus") {
    const double T = p.ctx.torus_period;
    for (int k = 0; k < n; ++k) {
      const double y = T * k / n;
      const cdouble v = F_closed(p, cdouble(xi, y), cdouble(mu));
      rows.push_back({y, v.real(), v.imag()});
    }
  } else if (which == "F_on_line" || which == "integrand_heat") {
    const double y_max = o.transform.y_max;
    for (int k = 0; k <= n; ++k) {
      const double y = -y_max + 2 * y_max * k / n;
      const cdouble l(xi, y);
      cdouble v = which == "F_on_line" ? F_closed(p, l, cdouble(mu))
                                       : F_closed(p, cdouble(mu), -l) * F_closed(p, l, cdouble(nu));
      v *= gaussian_weight(p.ctx, l);
      rows.push_back({y, v.real(), v.imag()});
    }
  } else {
    throw UsageError("dump target must be F_on_torus, F_on_line or integrand_heat");
  }
  std::ostringstream os;
  os.precision(17);
  os << "y,re,im\n";
  for (const auto& r : rows) os << r[0] << ',' << r[1] << ',' << r[2] << '\n';
  if (o.out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot write " + o.out);
    f << os.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification suite for trace functions of U_q(sl2)"};
  app.require_subcommand(1);
  Options o;
  std::string config;
  std::vector<std::string> tol_flags;
  double mu = 0, nu = 0, xi = 0, eta = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON config; flags override its keys");
    sub->add_option("--q", o.q, "deformation parameter in (0, 1)");
    sub->add_option("--m", o.m_list, "V = L_{2m}; several values allowed");
    sub->add_option("--mu", mu, "weight mu");
    sub->add_option("--nu", nu, "weight nu");
    sub->add_option("--xi", xi, "contour C_xi");
    sub->add_option("--eta", eta, "real cycle D_eta");
    sub->add_option("--out", o.out, "output path (stdout if absent)");
  };

  CLI::App* verify = app.add_subcommand("verify", "run identity checks");
  add_common(verify);
  verify->add_flag("--all", o.all, "run every suite");
  verify->add_option("--suite", o.suites, "suite names");
  verify->add_option("--scan", o.scans, "key=start:stop:count over q, mu, nu, xi or eta");
  verify->add_option("--format", o.format, "json or csv");
  verify->add_option("--tol", tol_flags, "suite=tolerance override");
  verify->add_option("--torus-n", o.quad.torus_n, "torus nodes");
  verify->add_option("--line-n", o.quad.line_n, "line panels");
  verify->add_option("--theta-b", o.theta_B, "theta truncation");
  verify->add_flag("--allow-small-xi", o.allow_small_xi, "permit xi < m + 5 with a warning");
  verify->add_flag("--binary64", [&](std::int64_t) { o.quad.mode = PrecisionMode::binary64; },
                   "never switch to MPFR");

  CLI::App* dump = app.add_subcommand("dump", "write contour samples as CSV");
  add_common(dump);
  std::string which = "F_on_torus";
  int n = 128;
  dump->add_option("--which", which, "F_on_torus, F_on_line or integrand_heat");
  dump->add_option("--n", n, "number of samples");

  CLI::App* selftest = app.add_subcommand("selftest", "normalization and oracle gate");
  add_common(selftest);

  CLI::App* list = app.add_subcommand("list", "list suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (sub == list) {
      for (const auto& s : suite_registry()) std::cout << s.name << "  " << s.description << '\n';
      return 0;
    }
    if (!config.empty()) {
      // re-apply command-line values over the config
      Options from_cli = o;
      load_config(config, o);
      if (sub->count("--q")) o.q = from_cli.q;
      if (sub->count("--m")) o.m_list = from_cli.m_list;
      if (sub->count("--out")) o.out = from_cli.out;
      if (sub == verify) {
        if (verify->count("--all")) o.all = true;
        if (verify->count("--suite")) o.suites = from_cli.suites;
        if (verify->count("--scan")) o.scans = from_cli.scans;
        if (verify->count("--format")) o.format = from_cli.format;
        if (verify->count("--torus-n")) o.quad.torus_n = from_cli.quad.torus_n;
        if (verify->count("--line-n")) o.quad.line_n = from_cli.quad.line_n;
        if (verify->count("--theta-b")) o.theta_B = from_cli.theta_B;
        if (verify->count("--allow-small-xi")) o.allow_small_xi = true;
        if (verify->count("--binary64")) o.quad.mode = PrecisionMode::binary64;
      }
    }
    if (sub->count("--mu")) o.mu = mu;
    if (sub->count("--nu")) o.nu = nu;
    if (sub->count("--xi")) o.xi = xi;
    if (sub->count("--eta")) o.eta = eta;
    for (const auto& t : tol_flags) {
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw UsageError("--tol expects suite=value");
      try {
        o.tolerances[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
      } catch (const std::exception&) {
        throw UsageError("--tol expects suite=value");
      }
    }

    if (sub == dump) return run_dump(o, which, n);
    if (sub == selftest) {
      validate(o);
      const auto reports = run_selftest(o.q, o.m_list.front());
      emit(reports, o);
      for (const auto& r : reports)
        if (!r.passed) return 1;
      return 0;
    }
    return run_verify(o);
  } catch (const UsageError& e) {
    std::cerr << "qtrace: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qtrace: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qtrace: " << e.what() << '\n';
    return 1;
  }
}
