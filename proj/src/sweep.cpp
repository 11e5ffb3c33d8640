#include "cavqfi/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "cavqfi/state.hpp"

namespace cavqfi {

namespace {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Error text without the leading "<code>: " the Error constructor adds.
std::string bare_message(const Error& e) {
  const std::string what = e.what();
  const std::string prefix = std::string(to_string(e.code())) + ": ";
  return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::SpecValidation, what);
}

struct GridPoint {
  double u, theta, r, s;
  long k;
};

std::string describe(const GridPoint& p) {
  std::ostringstream out;
  out << "row (u=" << format_double(p.u) << ", theta=" << format_double(p.theta) << ", r=" << format_double(p.r)
      << ", s=" << format_double(p.s) << ", k=" << p.k << ")";
  return out.str();
}

// One provider per boundary phase for the quadrature model; the synthetic
// provider ignores s.
class ProviderSet {
 public:
  explicit ProviderSet(const SweepSpec& spec) {
    for (double s : spec.s) {
      if (providers_.count(s)) continue;
      providers_[s] = spec.provider == ProviderKind::Synthetic
                          ? provider_synthetic(spec.seed)
                          : provider_quadrature(config_from_h(std::min(spec.h, 0.5), 0.0, s));
    }
  }
  const CoefficientProvider& at(double s) const { return *providers_.at(s); }

 private:
  std::map<double, ProviderPtr> providers_;
};

SweepRow evaluate(const SweepSpec& spec, const ProviderSet& providers, const GridPoint& p) {
  const CavityConfig config = config_from_h(spec.h, p.u, p.s);
  const BogoliubovData bog = mode_sums(providers.at(p.s), config, p.k, spec.n_trunc);
  const int nu = p.k >= 0 ? 1 : -1;
  SweepRow row{};
  row.u = p.u;
  row.s = p.s;
  row.k = p.k;
  row.theta = p.theta;
  row.h = spec.h;
  row.f_plus = bog.f_plus;
  row.f_minus = bog.f_minus;
  row.provider = spec.provider;
  row.n_trunc = spec.n_trunc;
  if (spec.family == Family::Pure) {
    const PureStateParams params{p.theta, 1, 1, nu};
    const QfiBreakdown total = pure_qfi_total(params, bog, spec.h);
    row.r = 1.0;
    row.qfi_total = total.total;
    row.qfi_alice = pure_qfi_alice();
    row.qfi_rob = pure_qfi_rob(params, bog, spec.h);
    row.classical_part = total.classical_part;
    row.mixture_part = total.mixture_part;
  } else {
    WernerParams params;
    params.r = p.r;
    params.theta = p.theta;
    params.nu = nu;
    const QfiBreakdown total = werner_qfi_total(params, bog, spec.h);
    row.r = p.r;
    row.qfi_total = total.total;
    row.qfi_alice = werner_qfi_alice(params);
    row.qfi_rob = werner_qfi_rob(params, bog, spec.h);
    row.classical_part = total.classical_part;
    row.mixture_part = total.mixture_part;
  }
  return row;
}

std::vector<GridPoint> grid(const SweepSpec& spec) {
  const std::vector<double> rs = spec.family == Family::Pure ? std::vector<double>{1.0} : spec.r;
  std::vector<GridPoint> points;
  for (double u : spec.u)
    for (double theta : spec.theta)
      for (double r : rs)
        for (double s : spec.s)
          for (long k : spec.k) points.push_back({u, theta, r, s, k});
  return points;
}

}  // namespace

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> columns = {
      "u",       "s",         "k",       "theta",          "r",            "h",        "f_plus",  "f_minus",
      "qfi_total", "qfi_alice", "qfi_rob", "classical_part", "mixture_part", "provider", "N_trunc"};
  return columns;
}

std::vector<double> linear_grid(double min, double max, double step) {
  require(step > 0.0 && std::isfinite(step), "grid step must be positive");
  require(max >= min, "grid max below min");
  const long n = long(std::floor((max - min) / step + 1e-9));
  std::vector<double> out;
  for (long i = 0; i <= n; ++i) out.push_back(min + double(i) * step);
  return out;
}

void validate(const SweepSpec& spec) {
  require(!spec.u.empty(), "empty u grid");
  require(!spec.theta.empty(), "empty theta grid");
  require(!spec.s.empty(), "empty s grid");
  require(!spec.k.empty(), "empty k grid");
  require(spec.family == Family::Pure || !spec.r.empty(), "empty r grid");
  require(spec.h > 0.0 && spec.h <= 0.1, "need 0 < h <= 0.1");
  require(spec.threads >= 0, "threads must be non-negative");
  for (double u : spec.u) require(u >= 0.0 && std::isfinite(u), "u must be finite and non-negative");
  for (double s : spec.s) require(s >= 0.0 && s < 1.0, "s must lie in [0, 1)");
  for (double r : spec.r) require(r >= 0.0 && r <= 1.0, "r must lie in [0, 1]");
  for (double theta : spec.theta) {
    require(theta > 0.0 && theta < kPi / 2, "theta must lie in (0, pi/2)");
    const double sn = std::sin(theta), cs = std::cos(theta);
    require(spec.h * spec.h <= 0.1 * std::min(sn * sn, cs * cs),
            "theta " + format_double(theta) + " outside the perturbative validity guard for h");
  }
  for (long k : spec.k) {
    require(spec.n_trunc >= 8 * (std::abs(k) + 1), "N_trunc below 8(|k| + 1) for k = " + std::to_string(k));
  }
  require(spec.n_trunc <= 512, "N_trunc above 512");
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  validate(spec);
  const ProviderSet providers(spec);
  const std::vector<GridPoint> points = grid(spec);
  std::vector<SweepRow> rows(points.size());
  std::vector<std::exception_ptr> errors(points.size());

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        rows[i] = evaluate(spec, providers, points[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_threads = std::min<std::size_t>(spec.threads > 0 ? spec.threads : hw, points.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw Error(e.code(), describe(points[i]) + ": " + bare_message(e));
    }
  }
  return rows;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out;
  const auto& cols = sweep_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += '\n';
  for (const SweepRow& r : rows) {
    out += format_double(r.u) + ',' + format_double(r.s) + ',' + std::to_string(r.k) + ',' + format_double(r.theta) +
           ',' + format_double(r.r) + ',' + format_double(r.h) + ',' + format_double(r.f_plus) + ',' +
           format_double(r.f_minus) + ',' + format_double(r.qfi_total) + ',' + format_double(r.qfi_alice) + ',' +
           format_double(r.qfi_rob) + ',' + format_double(r.classical_part) + ',' + format_double(r.mixture_part) +
           ',' + std::string(to_string(r.provider)) + ',' + std::to_string(r.n_trunc) + '\n';
  }
  return out;
}

nlohmann::ordered_json to_json(const std::vector<SweepRow>& rows) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const SweepRow& r : rows) {
    nlohmann::ordered_json o;
    o["u"] = r.u;
    o["s"] = r.s;
    o["k"] = r.k;
    o["theta"] = r.theta;
    o["r"] = r.r;
    o["h"] = r.h;
    o["f_plus"] = r.f_plus;
    o["f_minus"] = r.f_minus;
    o["qfi_total"] = r.qfi_total;
    o["qfi_alice"] = r.qfi_alice;
    o["qfi_rob"] = r.qfi_rob;
    o["classical_part"] = r.classical_part;
    o["mixture_part"] = r.mixture_part;
    o["provider"] = std::string(to_string(r.provider));
    o["N_trunc"] = r.n_trunc;
    doc.push_back(std::move(o));
  }
  return doc;
}

std::vector<SweepRow> rows_from_json(const nlohmann::ordered_json& doc) {
  std::vector<SweepRow> rows;
  try {
    for (const auto& o : doc) {
      SweepRow r{};
      r.u = o.at("u").get<double>();
      r.s = o.at("s").get<double>();
      r.k = o.at("k").get<long>();
      r.theta = o.at("theta").get<double>();
      r.r = o.at("r").get<double>();
      r.h = o.at("h").get<double>();
      r.f_plus = o.at("f_plus").get<double>();
      r.f_minus = o.at("f_minus").get<double>();
      r.qfi_total = o.at("qfi_total").get<double>();
      r.qfi_alice = o.at("qfi_alice").get<double>();
      r.qfi_rob = o.at("qfi_rob").get<double>();
      r.classical_part = o.at("classical_part").get<double>();
      r.mixture_part = o.at("mixture_part").get<double>();
      r.provider = parse_provider(o.at("provider").get<std::string>());
      r.n_trunc = o.at("N_trunc").get<int>();
      rows.push_back(r);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SpecValidation, std::string("malformed row document: ") + e.what());
  }
  return rows;
}

std::vector<SweepRow> rows_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::SpecValidation, "missing CSV header");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != sweep_columns().size()) throw Error(ErrorCode::SpecValidation, "bad CSV row: " + line);
    SweepRow r{};
    r.u = std::stod(f[0]);
    r.s = std::stod(f[1]);
    r.k = std::stol(f[2]);
    r.theta = std::stod(f[3]);
    r.r = std::stod(f[4]);
    r.h = std::stod(f[5]);
    r.f_plus = std::stod(f[6]);
    r.f_minus = std::stod(f[7]);
    r.qfi_total = std::stod(f[8]);
    r.qfi_alice = std::stod(f[9]);
    r.qfi_rob = std::stod(f[10]);
    r.classical_part = std::stod(f[11]);
    r.mixture_part = std::stod(f[12]);
    r.provider = parse_provider(f[13]);
    r.n_trunc = std::stoi(f[14]);
    rows.push_back(r);
  }
  return rows;
}

void write_rows(const std::vector<SweepRow>& rows, const std::string& path, OutputFormat format) {
  const std::string text = format == OutputFormat::Csv ? to_csv(rows) : to_json(rows).dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw Error(ErrorCode::IoFailure, "cannot write to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path + " for writing");
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::IoFailure, "write to " + path + " failed");
}

Family parse_family(const std::string& name) {
  if (name == "pure") return Family::Pure;
  if (name == "werner") return Family::Werner;
  throw Error(ErrorCode::SpecValidation, "unknown family '" + name + "'");
}

ProviderKind parse_provider(const std::string& name) {
  if (name == "synthetic") return ProviderKind::Synthetic;
  if (name == "quadrature") return ProviderKind::Quadrature;
  throw Error(ErrorCode::SpecValidation, "unknown provider '" + name + "'");
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw Error(ErrorCode::SpecValidation, "unknown format '" + name + "'");
}

SweepSpec apply_config(SweepSpec spec, const nlohmann::json& config) {
  try {
    require(config.is_object(), "config must be a JSON object");
    static const std::set<std::string> known = {"family", "u",    "theta", "r",   "s",      "k",      "h",
                                                "provider", "n_trunc", "seed", "out", "format", "threads"};
    for (const auto& [key, value] : config.items()) require(known.count(key) > 0, "unknown config key '" + key + "'");
    if (config.contains("family")) spec.family = parse_family(config["family"].get<std::string>());
    if (config.contains("u")) {
      const auto& u = config["u"];
      if (u.is_object()) {
        spec.u = linear_grid(u.at("min").get<double>(), u.at("max").get<double>(), u.at("step").get<double>());
      } else {
        spec.u = u.get<std::vector<double>>();
      }
    }
    if (config.contains("theta")) spec.theta = config["theta"].get<std::vector<double>>();
    if (config.contains("r")) spec.r = config["r"].get<std::vector<double>>();
    if (config.contains("s")) spec.s = config["s"].get<std::vector<double>>();
    if (config.contains("k")) spec.k = config["k"].get<std::vector<long>>();
    if (config.contains("h")) spec.h = config["h"].get<double>();
    if (config.contains("provider")) spec.provider = parse_provider(config["provider"].get<std::string>());
    if (config.contains("n_trunc")) spec.n_trunc = config["n_trunc"].get<int>();
    if (config.contains("seed")) spec.seed = config["seed"].get<std::uint64_t>();
    if (config.contains("out")) spec.out = config["out"].get<std::string>();
    if (config.contains("format")) spec.format = parse_format(config["format"].get<std::string>());
    if (config.contains("threads")) spec.threads = config["threads"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SpecValidation, std::string("config: ") + e.what());
  }
  return spec;
}

SweepSpec load_config(SweepSpec spec, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open config " + path);
  nlohmann::json config;
  try {
    in >> config;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SpecValidation, "config " + path + ": " + e.what());
  }
  return apply_config(std::move(spec), config);
}

SweepSpec fig1_spec(ProviderKind provider, double h) {
  SweepSpec spec;
  spec.family = Family::Pure;
  spec.u = linear_grid(0.0, 1.0, 0.01);
  spec.theta = {kPi / 4};
  spec.s = {0.0, 0.25, 0.5, 0.75};
  spec.k = {1, -1};
  spec.h = h;
  spec.provider = provider;
  return spec;
}

SweepSpec fig2_spec(ProviderKind provider, double h, double r) {
  SweepSpec spec = fig1_spec(provider, h);
  spec.family = Family::Werner;
  spec.r = {r};
  return spec;
}

SweepSpec fig3_spec(ProviderKind provider, double h) {
  SweepSpec spec = fig1_spec(provider, h);
  spec.family = Family::Werner;
  spec.r = {0.1, 0.33, 0.5, 0.66, 0.85, 0.99};
  spec.s = {0.0};
  spec.k = {1};
  return spec;
}

FigureData run_figure(const SweepSpec& spec, bool merge_s0) {
  FigureData out;
  out.rows = run_sweep(spec);
  auto curve_key = [](const SweepRow& r) { return std::make_tuple(r.s, r.k, r.r, r.theta); };

  if (merge_s0) {
    // Pair the s = 0 rows for k = +1 and k = -1 at equal (u, theta, r).
    std::map<std::tuple<double, double, double>, const SweepRow*> plus;
    for (const SweepRow& r : out.rows)
      if (r.s == 0.0 && r.k == 1) plus[{r.u, r.theta, r.r}] = &r;
    bool agree = !plus.empty();
    bool any_minus = false;
    for (const SweepRow& r : out.rows) {
      if (r.s != 0.0 || r.k != -1) continue;
      any_minus = true;
      const auto it = plus.find({r.u, r.theta, r.r});
      if (it == plus.end() || std::abs(it->second->qfi_total - r.qfi_total) > 1e-6 ||
          std::abs(it->second->qfi_rob - r.qfi_rob) > 1e-6 || std::abs(it->second->qfi_alice - r.qfi_alice) > 1e-6) {
        agree = false;
      }
    }
    if (agree && any_minus) {
      std::erase_if(out.rows, [](const SweepRow& r) { return r.s == 0.0 && r.k == -1; });
      out.merged_s0 = true;
    }
  }
  std::set<std::tuple<double, long, double, double>> curves;
  for (const SweepRow& r : out.rows) curves.insert(curve_key(r));
  out.curves = int(curves.size());
  return out;
}

}  // namespace cavqfi
