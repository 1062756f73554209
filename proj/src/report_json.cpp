#include "crange/report.hpp"

#include <charconv>
#include <cmath>

namespace crange {

namespace {

using nlohmann::json;

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

// JSON has no infinities; they are written as strings so that nothing is lost.
json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

json verdict_json(const Verdict& v) {
  return {{"state", to_string(v.state)},
          {"estimate", number(v.estimate)},
          {"threshold", v.threshold},
          {"note", v.note}};
}

json density_json(const DensityEstimate& d) {
  return {{"bins", d.bins},
          {"density", d.density},
          {"counts", d.counts},
          {"ess_inf", d.ess_inf},
          {"ess_inf_std_error", d.ess_inf_std_error},
          {"max_density", d.max_density},
          {"mass_on_circle", d.mass_on_circle},
          {"samples", d.samples}};
}

}  // namespace

json criteria_config_json(const CriteriaConfig& c) {
  return {{"seed", c.seed},
          {"measure_samples", c.measure_samples},
          {"kernel_depth", c.kernel_depth},
          {"kernel_rays", c.kernel_rays},
          {"eps_i", c.eps_i},
          {"density_bins", c.density_bins},
          {"circle_tol", c.circle_tol},
          {"eps_ii", c.eps_ii},
          {"c_grid", c.c_grid},
          {"eta_values", c.eta_values},
          {"gc_depth", c.gc_depth},
          {"gc_angles", c.gc_angles},
          {"gc_samples", c.gc_samples},
          {"delta", c.delta},
          {"window_depth", c.window_depth},
          {"window_angles", c.window_angles},
          {"eps_window", c.eps_window},
          {"probes", c.probes},
          {"luecking_c", c.luecking_c},
          {"luecking_depth", c.luecking_depth},
          {"luecking_angles", c.luecking_angles},
          {"luecking_radial", c.luecking_radial},
          {"luecking_angular", c.luecking_angular},
          {"ratio_kernel_depth", c.ratio_kernel_depth},
          {"ratio_kernel_rays", c.ratio_kernel_rays},
          {"ratio_outer_arcs", c.ratio_outer_arcs},
          {"ratio_circle_nodes", c.ratio_circle_nodes}};
}

json report_json(const ClosedRangeReport& r, const json& config_echo) {
  json kernel = json::array();
  for (const KernelPoint& k : r.kernel_curve) {
    kernel.push_back({{"depth", k.depth},
                      {"ray", k.ray},
                      {"lambda", complex_json(k.lambda)},
                      {"integral", number(k.integral)}});
  }
  json gc = json::array();
  for (const GcCurve& g : r.gc_curves) {
    gc.push_back({{"c", g.c},
                  {"eta", g.eta},
                  {"min_fraction", g.min_fraction},
                  {"min_fraction_by_depth", g.min_fraction_by_depth}});
  }
  json window = json::array();
  for (const WindowPoint& w : r.window_curve) {
    window.push_back({{"depth", w.depth},
                      {"angle", w.angle},
                      {"h", w.h},
                      {"mass", w.mass},
                      {"std_error", w.std_error},
                      {"ratio", w.ratio}});
  }
  json luecking = nullptr;
  if (r.luecking) {
    json points = json::array();
    for (const LueckingPoint& pt : r.luecking->points) {
      points.push_back({{"a", complex_json(pt.a)},
                        {"i_full", pt.i_full},
                        {"i_gc", pt.i_gc},
                        {"i_tau", pt.i_tau}});
    }
    luecking = {{"c", r.luecking->c},
                {"points", points},
                {"min_gc_ratio", number(r.luecking->min_gc_ratio)},
                {"min_tau_ratio", number(r.luecking->min_tau_ratio)}};
  }
  json norm_ratio = nullptr;
  if (r.norm_ratio) {
    json family = json::array();
    for (const NormRatioPoint& f : r.norm_ratio->family) {
      family.push_back({{"function", f.tag}, {"ratio", number(f.ratio)}});
    }
    norm_ratio = {{"family", family},
                  {"min_ratio", number(r.norm_ratio->min_ratio)},
                  {"argmin", r.norm_ratio->argmin}};
  }

  return {{"schema_version", kReportSchemaVersion},
          {"symbol", {{"label", r.symbol}, {"record", r.symbol_record}}},
          {"p", r.p},
          {"verdicts",
           {{"kernel", verdict_json(r.verdict_i)},
            {"density", verdict_json(r.verdict_ii)},
            {"gc", verdict_json(r.verdict_iii)},
            {"window", verdict_json(r.verdict_window)}}},
          {"consistent", r.consistent},
          {"overall", to_string(r.overall)},
          {"curves",
           {{"kernel", kernel}, {"density", density_json(r.density)}, {"gc", gc}, {"window", window}}},
          {"probes", {{"luecking", luecking}, {"norm_ratio", norm_ratio}}},
          {"constants",
           {{"hardy_stein", "p^2/2"},
            {"change_of_variable", 1},
            {"change_of_variable_displayed", 2},
            {"note",
             "the change of variable is exact with factor 1 under normalized area; the factor 2 "
             "sometimes displayed is reported by the verify command for comparison"}}},
          {"errors", r.errors},
          {"config", config_echo}};
}

std::string dump_document(const json& doc) { return doc.dump(2) + "\n"; }

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string summary_csv_header() {
  return "symbol,p,kernel_state,kernel_estimate,density_state,density_estimate,gc_state,"
         "gc_estimate,window_state,window_estimate,consistent,overall";
}

std::string summary_csv_row(const ClosedRangeReport& r) {
  std::string row = csv_escape(r.symbol) + "," + csv_number(r.p);
  for (const Verdict* v : {&r.verdict_i, &r.verdict_ii, &r.verdict_iii, &r.verdict_window}) {
    row += "," + to_string(v->state) + "," + csv_number(v->estimate);
  }
  row += std::string(",") + (r.consistent ? "true" : "false") + "," + to_string(r.overall);
  return row;
}

}  // namespace crange
