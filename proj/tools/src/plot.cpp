#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "hyerslab_tools/experiment.hpp"

namespace hyerslab::tools {

namespace {

using Row = std::array<double, 3>;

const Json* find_path(const Json& j, std::initializer_list<const char*> path) {
  const Json* cur = &j;
  for (const char* key : path) {
    if (!cur->is_object() || !cur->contains(key)) return nullptr;
    cur = &(*cur)[key];
  }
  return cur;
}

// Scalar abscissa of a probe: the coordinate in one dimension, else the norm.
double abscissa(const Json& x) {
  if (x.is_number()) return x.get<double>();
  if (x.size() == 1) return x[0].get<double>();
  double s = 0.0;
  for (const auto& v : x) s += v.get<double>() * v.get<double>();
  return std::sqrt(s);
}

double number_or_nan(const Json& v) { return v.is_number() ? v.get<double>() : std::nan(""); }

const Json& require_series(const Json* series, const std::string& what) {
  if (!series || !series->is_array()) throw ConfigError("plot", "the report has no data for '" + what + "'");
  return *series;
}

const Json* bound_probes(const Json& report) {
  return find_path(report, {"suites", "verify-nonuniform", "bound", "probes"});
}

const Json* membership_curve(const Json& report) {
  if (auto* c = find_path(report, {"suites", "verify-uniform", "uniform_limit", "membership_curve"})) return c;
  return find_path(report, {"suites", "corollary53", "uniform_limit", "membership_curve"});
}

std::string cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void emit_plot_data(const Json& report, const std::string& what, std::ostream& out) {
  std::string comment;
  std::string header;
  std::vector<Row> rows;
  if (what == "residual-vs-x") {
    comment = "# x: probe (coordinate, or norm when d > 1); residual: ||f(x) - A(x) - f(0)||; bound: phi(x,0,0)/(3-alpha)";
    header = "x,residual,bound";
    for (const auto& p : require_series(bound_probes(report), what)) {
      rows.push_back({abscissa(p["x"]), number_or_nan(p["residual"]), number_or_nan(p["bound"])});
    }
  } else if (what == "membership-vs-t") {
    comment = "# t: schedule point; membership: N(f(x) - A(x) - f(0), t phi~(0,0,x)) at the worst probe; threshold: 1 - eps";
    header = "t,membership,threshold";
    for (const auto& r : require_series(membership_curve(report), what)) {
      rows.push_back({number_or_nan(r["t"]), number_or_nan(r["membership"]), number_or_nan(r["threshold"])});
    }
  } else if (what == "bound-tightness") {
    comment = "# x: probe (coordinate, or norm when d > 1); tightness: residual / bound (0 when both vanish); min_margin: worst fuzzy margin over t";
    header = "x,tightness,min_margin";
    for (const auto& p : require_series(bound_probes(report), what)) {
      const double r = number_or_nan(p["residual"]);
      const double b = number_or_nan(p["bound"]);
      const double tight = b > 0.0 ? r / b : (r == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
      rows.push_back({abscissa(p["x"]), tight, number_or_nan(p["min_margin"])});
    }
  } else {
    throw ConfigError("plot", "unknown series '" + what + "' (expected residual-vs-x, membership-vs-t or bound-tightness)");
  }

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a[0] < b[0]; });
  out << comment << '\n' << header << '\n';
  for (const auto& r : rows) out << cell(r[0]) << ',' << cell(r[1]) << ',' << cell(r[2]) << '\n';
}

}  // namespace hyerslab::tools
