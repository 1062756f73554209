#include "crange/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "crange/geometry.hpp"
#include "crange/nevanlinna.hpp"
#include "crange/report.hpp"
#include "parse_util.hpp"

namespace crange {

namespace fs = std::filesystem;

namespace {

using nlohmann::json;

std::vector<double> parse_real_list(const std::string& text, const std::string& context) {
  std::vector<double> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    item = detail::trim(item);
    if (item.empty()) continue;
    out.push_back(detail::parse_real(item, context));
  }
  if (out.empty()) throw ParseError("empty list for " + context);
  return out;
}

int parse_int(const std::string& text, const std::string& key) {
  const double v = detail::parse_real(text, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ParseError(key + " must be an integer");
  return static_cast<int>(v);
}

std::size_t parse_count(const std::string& text, const std::string& key) {
  const double v = detail::parse_real(text, key);
  if (v != std::floor(v) || v < 1 || v > 1e10) throw ParseError(key + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& text, const std::string& key) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ParseError(key + " must be true or false");
}

std::string sanitize(const std::string& label) {
  std::string out;
  for (char ch : label) {
    const bool keep = std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_';
    out += keep ? ch : '_';
    if (out.size() >= 48) break;
  }
  return out.empty() ? "symbol" : out;
}

std::string index_prefix(std::size_t i) {
  std::ostringstream s;
  s << std::setw(3) << std::setfill('0') << i;
  return s.str();
}

bool wants_json(const RunConfig& c) { return c.format == "json" || c.format == "both"; }
bool wants_csv(const RunConfig& c) { return c.format == "csv" || c.format == "both"; }

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

std::vector<Symbol> load_symbols(const RunConfig& config) {
  return parse_symbol_list(config.symbols_text.value_or(default_corpus()));
}

void validate_format(const RunConfig& c) {
  if (c.format != "json" && c.format != "csv" && c.format != "both") {
    throw ParseError("format must be json, csv or both");
  }
  if (c.ps.empty()) throw ParseError("no exponents given");
  for (double p : c.ps) HardyExponent{p};
}

std::string format_number(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyRow {
  std::string check;
  std::string subject;
  double lhs = 0.0;
  double rhs = 0.0;
  double error = 0.0;
  double tolerance = 0.0;
  std::string status;  // pass, fail, skip
  std::string note;
};

void norm_rows(const VerifyConfig& v, std::vector<VerifyRow>& rows) {
  const CircleQuadrature cq(v.circle_nodes);
  const DiskQuadrature dq(v.disk_radial, v.disk_angular);
  for (const TestFunction& f : norm_agreement_family()) {
    for (double p : v.ps) {
      const double b = norm_boundary(f, p, cq);
      const double hs = norm_hardy_stein(f, p, dq, v.hardy_stein_constant);
      const double lc = norm_layer_cake(f, p, cq);
      const double e_hs = std::abs(hs - b) / b;
      const double e_lc = std::abs(lc - b) / b;
      VerifyRow r;
      r.check = "norm-agreement";
      r.subject = f.tag + " p=" + format_number(p);
      r.lhs = b;
      r.rhs = e_hs >= e_lc ? hs : lc;
      r.error = std::max(e_hs, e_lc);
      r.tolerance = v.norm_tol;
      r.status = r.error <= v.norm_tol ? "pass" : "fail";
      r.note = e_hs >= e_lc ? "boundary vs hardy-stein" : "boundary vs layer-cake";
      rows.push_back(r);
    }
  }
}

void symbol_rows(const Symbol& phi, const RunConfig& config, std::vector<VerifyRow>& rows) {
  const VerifyConfig& v = config.verify;
  const DiskQuadrature dq(v.disk_radial, v.disk_angular);
  const auto cov_obs = change_of_variable_observables();
  const auto cov = verify_change_of_variable(phi, cov_obs, dq);
  for (std::size_t i = 0; i < cov.size(); ++i) {
    VerifyRow r;
    r.check = "change-of-variable";
    r.subject = phi.label() + " g=" + cov_obs[i].description;
    r.lhs = cov[i].lhs;
    r.rhs = cov[i].rhs;
    r.error = cov[i].relative_gap;
    r.tolerance = v.cov_tol;
    r.status = r.error <= v.cov_tol ? "pass" : "fail";
    r.note = "rhs with factor 2: " + format_number(cov[i].rhs_displayed_constant);
    rows.push_back(r);
  }

  SeededSampler sampler(mix_seed(config.seed, 11));
  const EmpiricalBoundaryMeasure mu = pullback_measure(phi, v.pb2_samples, sampler, phi.label());
  const std::vector<double> n_nodes = counting_at_nodes(phi, dq);
  for (const TestObservable& g : pb2_observables()) {
    const Pb2Report p = verify_pb2(phi, g, mu, dq, n_nodes);
    VerifyRow r;
    r.check = "pb2";
    r.subject = phi.label() + " g=" + g.description;
    r.lhs = p.lhs;
    r.rhs = p.rhs;
    r.error = p.relative_gap;
    r.tolerance = v.pb2_tol;
    r.status = r.error <= v.pb2_tol ? "pass" : "fail";
    r.note = "samples " + std::to_string(p.samples);
    rows.push_back(r);
  }

  for (int k = v.pb1_min_k; k <= v.pb1_max_k; ++k) {
    const double h = std::ldexp(1.0, -k);
    VerifyRow r;
    r.check = "pb1";
    r.subject = phi.label() + " h=2^-" + std::to_string(k);
    r.tolerance = 0.0;
    try {
      double worst = std::numeric_limits<double>::infinity();
      for (int j = 0; j < v.pb1_angles; ++j) {
        const CarlesonWindow w(std::polar(1.0, kTwoPi * j / v.pb1_angles), h);
        const Pb1Report p = verify_pb1(phi, w, v.pb1_c, mu);
        if (p.margin < worst) {
          worst = p.margin;
          r.lhs = p.lhs;
          r.rhs = p.rhs;
        }
      }
      r.error = -worst;  // a failure is a negative margin
      r.status = worst >= 0.0 ? "pass" : "fail";
      r.note = "min margin " + format_number(worst);
    } catch (const PreconditionError& e) {
      r.status = "skip";
      r.note = e.what();
    }
    rows.push_back(r);
  }
}

std::string verify_csv(const std::vector<VerifyRow>& rows) {
  std::string out = "check,subject,lhs,rhs,error,tolerance,status,note\n";
  for (const VerifyRow& r : rows) {
    out += csv_escape(r.check) + "," + csv_escape(r.subject) + "," + csv_number(r.lhs) + "," +
           csv_number(r.rhs) + "," + csv_number(r.error) + "," + csv_number(r.tolerance) + "," +
           r.status + "," + csv_escape(r.note) + "\n";
  }
  return out;
}

}  // namespace

CriteriaConfig RunConfig::resolved_criteria() const {
  CriteriaConfig c = criteria;
  c.seed = seed;
  if (depth > 0) {
    c.kernel_depth = depth;
    c.gc_depth = depth;
    c.window_depth = depth;
  }
  return c;
}

json RunConfig::echo() const {
  const CriteriaConfig c = resolved_criteria();
  json verify_json = {{"ps", verify.ps},
                      {"hardy_stein_constant", verify.hardy_stein_constant
                                                   ? json(*verify.hardy_stein_constant)
                                                   : json("p^2/2")},
                      {"norm_tol", verify.norm_tol},
                      {"cov_tol", verify.cov_tol},
                      {"pb2_tol", verify.pb2_tol},
                      {"pb2_samples", verify.pb2_samples},
                      {"disk_radial", verify.disk_radial},
                      {"disk_angular", verify.disk_angular},
                      {"circle_nodes", verify.circle_nodes},
                      {"pb1_c", verify.pb1_c},
                      {"pb1_angles", verify.pb1_angles},
                      {"pb1_min_k", verify.pb1_min_k},
                      {"pb1_max_k", verify.pb1_max_k}};
  return {{"schema_version", kReportSchemaVersion},
          {"symbols_source", symbols_text ? symbols_source : "default corpus"},
          {"ps", ps},
          {"seed", seed},
          {"depth", depth},
          {"out_dir", out_dir},
          {"format", format},
          {"criteria", criteria_config_json(c)},
          {"verify", verify_json},
          {"sweep", {{"param", sweep_param}, {"values", sweep_values}}},
          {"overrides", overrides}};
}

std::vector<std::string> override_keys() {
  return {"samples",       "kernel_depth", "kernel_rays",  "eps_i",        "bins",
          "circle_tol",    "eps_ii",       "c_grid",       "eta",          "gc_depth",
          "gc_angles",     "gc_samples",   "delta",        "window_depth", "window_angles",
          "eps_window",    "probes",       "luecking_c",   "hardy_stein_constant",
          "verify_ps",     "norm_tol",     "cov_tol",      "pb2_tol",      "pb2_samples",
          "disk_radial",   "disk_angular", "circle_nodes", "pb1_c"};
}

void apply_override(RunConfig& config, const std::string& key_value) {
  const auto eq = key_value.find('=');
  if (eq == std::string::npos) throw ParseError("override must look like key=value: " + key_value);
  const std::string key = detail::trim(key_value.substr(0, eq));
  const std::string value = detail::trim(key_value.substr(eq + 1));
  CriteriaConfig& c = config.criteria;
  VerifyConfig& v = config.verify;
  if (key == "samples") {
    c.measure_samples = parse_count(value, key);
  } else if (key == "kernel_depth") {
    c.kernel_depth = parse_int(value, key);
  } else if (key == "kernel_rays") {
    c.kernel_rays = static_cast<int>(parse_count(value, key));
  } else if (key == "eps_i") {
    c.eps_i = detail::parse_real(value, key);
  } else if (key == "bins") {
    c.density_bins = static_cast<int>(parse_count(value, key));
  } else if (key == "circle_tol") {
    c.circle_tol = detail::parse_real(value, key);
  } else if (key == "eps_ii") {
    c.eps_ii = detail::parse_real(value, key);
  } else if (key == "c_grid") {
    c.c_grid = parse_real_list(value, key);
  } else if (key == "eta") {
    c.eta_values = parse_real_list(value, key);
  } else if (key == "gc_depth") {
    c.gc_depth = parse_int(value, key);
  } else if (key == "gc_angles") {
    c.gc_angles = static_cast<int>(parse_count(value, key));
  } else if (key == "gc_samples") {
    c.gc_samples = parse_count(value, key);
  } else if (key == "delta") {
    c.delta = detail::parse_real(value, key);
  } else if (key == "window_depth") {
    c.window_depth = static_cast<int>(parse_count(value, key));
  } else if (key == "window_angles") {
    c.window_angles = static_cast<int>(parse_count(value, key));
  } else if (key == "eps_window") {
    c.eps_window = detail::parse_real(value, key);
  } else if (key == "probes") {
    c.probes = parse_bool(value, key);
  } else if (key == "luecking_c") {
    c.luecking_c = detail::parse_real(value, key);
  } else if (key == "hardy_stein_constant") {
    v.hardy_stein_constant = detail::parse_real(value, key);
  } else if (key == "verify_ps") {
    v.ps = parse_real_list(value, key);
  } else if (key == "norm_tol") {
    v.norm_tol = detail::parse_real(value, key);
  } else if (key == "cov_tol") {
    v.cov_tol = detail::parse_real(value, key);
  } else if (key == "pb2_tol") {
    v.pb2_tol = detail::parse_real(value, key);
  } else if (key == "pb2_samples") {
    v.pb2_samples = parse_count(value, key);
  } else if (key == "disk_radial") {
    v.disk_radial = static_cast<int>(parse_count(value, key));
  } else if (key == "disk_angular") {
    v.disk_angular = static_cast<int>(parse_count(value, key));
  } else if (key == "circle_nodes") {
    v.circle_nodes = static_cast<int>(parse_count(value, key));
  } else if (key == "pb1_c") {
    v.pb1_c = detail::parse_real(value, key);
  } else {
    throw ParseError("unknown override key '" + key + "'");
  }
  config.overrides.push_back(key + "=" + value);
}

std::string resolve_symbols_source(const std::string& source) {
  std::error_code ec;
  if (!source.empty() && fs::is_regular_file(source, ec)) {
    std::ifstream f(source, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
  }
  return source;
}

std::string default_corpus() {
  return "identity\n"
         "z^2: poly 0 0 1\n"
         "z^3: poly 0 0 0 1\n"
         "psi_0.5: moebius 0.5\n"
         "psi_0.5(z^2): moebius 0.5 | poly 0 0 1\n"
         "blaschke3: blaschke 1 0 0.5 0,-0.4\n"
         "0.5z: affine 0.5\n"
         "0.8z: affine 0.8\n"
         "(1+z)/2: affine 0.5 0.5\n"
         "((1+z)/2)^2: poly 0.25 0.5 0.25\n";
}

std::vector<TestFunction> norm_agreement_family() {
  namespace tf = test_functions;
  return {tf::polynomial({2.0, 1.0}),
          tf::polynomial({1.0, -0.5}),
          tf::polynomial({3.0, 0.0, 1.0}),
          tf::polynomial({6.0, 1.0, -1.0}),
          tf::polynomial({1.5, 0.5, 0.0, 0.25}),
          tf::polynomial({Complex(4.0, 1.0), -1.0}),
          tf::kernel_power(0.6, 1.0),
          tf::kernel_power(Complex(0.0, 0.5), 2.0),
          tf::kernel_power(-0.8, 1.5),
          tf::exponential(1.0),
          tf::exponential(Complex(0.0, 0.5), 0.2),
          tf::constant(Complex(0.3, 0.4))};
}

std::vector<TestObservable> change_of_variable_observables() {
  return {observables::constant(1.0), observables::modulus_power(1), observables::exp_real()};
}

std::vector<TestObservable> pb2_observables() {
  return {observables::modulus_power(1), observables::real_part(), observables::modulus_power(2)};
}

int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<Symbol> symbols;
  try {
    validate_format(config);
    symbols = load_symbols(config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (symbols.empty()) {
    err << "error: the symbol list is empty\n";
    return kExitUsage;
  }

  const CriteriaConfig criteria = config.resolved_criteria();
  const json echo = config.echo();
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) {
    err << "error: cannot create " << config.out_dir << ": " << ec.message() << '\n';
    return kExitFailure;
  }

  std::string summary = summary_csv_header() + "\n";
  bool all_consistent = true;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const auto reports = analyze_exponents(symbols[i], config.ps, criteria);
    for (const ClosedRangeReport& r : reports) {
      all_consistent = all_consistent && r.consistent;
      summary += summary_csv_row(r) + "\n";
      if (wants_json(config)) {
        const std::string name =
            index_prefix(i) + "_" + sanitize(r.symbol) + "_p" + csv_number(r.p) + ".json";
        json resolved = echo;
        resolved["criteria"]["kernel_depth"] = criteria.kernel_depth_for(r.p);
        write_file(fs::path(config.out_dir) / name, dump_document(report_json(r, resolved)));
      }
      out << std::left << std::setw(24) << r.symbol << " p=" << std::setw(4) << r.p
          << " kernel=" << std::setw(12) << to_string(r.verdict_i.state)
          << " density=" << std::setw(12) << to_string(r.verdict_ii.state)
          << " gc=" << std::setw(12) << to_string(r.verdict_iii.state)
          << " window=" << std::setw(12) << to_string(r.verdict_window.state)
          << (r.consistent ? " consistent" : " INCONSISTENT") << '\n';
      for (const std::string& e : r.errors) err << "warning: " << r.symbol << ": " << e << '\n';
    }
  }
  if (wants_csv(config)) write_file(fs::path(config.out_dir) / "summary.csv", summary);
  return all_consistent ? kExitOk : kExitFailure;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<Symbol> symbols;
  try {
    validate_format(config);
    symbols = load_symbols(config);
    for (double p : config.verify.ps) HardyExponent{p};
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (symbols.empty()) {
    err << "error: the symbol list is empty\n";
    return kExitUsage;
  }

  std::vector<VerifyRow> rows;
  try {
    norm_rows(config.verify, rows);
    for (const Symbol& phi : symbols) symbol_rows(phi, config, rows);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }

  std::size_t failed = 0;
  std::size_t skipped = 0;
  const VerifyRow* worst = nullptr;
  for (const VerifyRow& r : rows) {
    out << std::left << std::setw(20) << r.check << std::setw(6) << r.status << r.subject
        << "  err=" << format_number(r.error) << " tol=" << format_number(r.tolerance) << '\n';
    if (r.status == "skip") ++skipped;
    if (r.status != "fail") continue;
    ++failed;
    const double excess = r.tolerance > 0.0 ? r.error / r.tolerance : r.error;
    const double worst_excess =
        worst == nullptr ? -1.0 : (worst->tolerance > 0.0 ? worst->error / worst->tolerance : worst->error);
    if (excess > worst_excess) worst = &r;
  }
  out << rows.size() << " checks, " << failed << " failed, " << skipped << " skipped\n";

  if (wants_csv(config)) {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (!ec) write_file(fs::path(config.out_dir) / "verify.csv", verify_csv(rows));
  }
  if (worst != nullptr) {
    err << std::setprecision(12) << "worst offender: " << worst->check << " " << worst->subject
        << ": lhs = " << worst->lhs << ", rhs = " << worst->rhs << ", error = " << worst->error
        << " (tolerance " << worst->tolerance << ", " << worst->note << ")\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::string text = config.symbols_text.value_or(default_corpus());
  struct Job {
    double value;
    Symbol symbol;
    std::vector<double> ps;
  };
  std::vector<Job> jobs;
  try {
    validate_format(config);
    if (config.sweep_param == "p") {
      const std::vector<double> ps = config.sweep_values.empty() ? config.ps : config.sweep_values;
      for (double p : ps) HardyExponent{p};
      for (const Symbol& s : parse_symbol_list(text)) {
        for (double p : ps) jobs.push_back({p, s, {p}});
      }
    } else if (config.sweep_param == "x") {
      if (config.sweep_values.empty()) throw ParseError("sweep needs --values");
      if (text.find("{x}") == std::string::npos) {
        throw ParseError("sweep over x needs a symbol record containing {x}");
      }
      for (double x : config.sweep_values) {
        std::string record = text;
        const std::string value = csv_number(x);
        for (auto pos = record.find("{x}"); pos != std::string::npos; pos = record.find("{x}")) {
          record.replace(pos, 3, value);
        }
        for (const Symbol& s : parse_symbol_list(record)) jobs.push_back({x, s, config.ps});
      }
    } else {
      throw ParseError("sweep parameter must be x or p");
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (jobs.empty()) {
    err << "error: nothing to sweep\n";
    return kExitUsage;
  }

  const CriteriaConfig criteria = config.resolved_criteria();
  std::string csv = "value," + summary_csv_header() + "\n";
  bool all_consistent = true;
  for (const Job& job : jobs) {
    for (const ClosedRangeReport& r : analyze_exponents(job.symbol, job.ps, criteria)) {
      all_consistent = all_consistent && r.consistent;
      csv += csv_number(job.value) + "," + summary_csv_row(r) + "\n";
    }
  }
  out << csv;
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) {
    err << "error: cannot create " << config.out_dir << ": " << ec.message() << '\n';
    return kExitFailure;
  }
  write_file(fs::path(config.out_dir) / "sweep.csv", csv);
  return all_consistent ? kExitOk : kExitFailure;
}

}  // namespace crange
