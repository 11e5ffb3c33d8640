#ifndef CAVQFI_SWEEP_HPP
#define CAVQFI_SWEEP_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cavqfi/cavity.hpp"

namespace cavqfi {

enum class Family { Pure, Werner };
enum class OutputFormat { Csv, Json };

/// Parameter grid of a sweep. Rows are emitted lexicographically over
/// u, theta, r, s, k (first axis slowest). The pure family ignores r.
struct SweepSpec {
  Family family = Family::Pure;
  std::vector<double> u;
  std::vector<double> theta;
  std::vector<double> r;
  std::vector<double> s;
  std::vector<long> k;
  double h = 0.01;
  ProviderKind provider = ProviderKind::Synthetic;
  int n_trunc = kDefaultTruncation;
  std::uint64_t seed = 3;
  std::string out;
  OutputFormat format = OutputFormat::Csv;
  int threads = 0;  // 0 picks the hardware concurrency
};

struct SweepRow {
  double u, s;
  long k;
  double theta, r, h;
  double f_plus, f_minus;
  double qfi_total, qfi_alice, qfi_rob;
  double classical_part, mixture_part;
  ProviderKind provider;
  int n_trunc;
};

/// Column names in emission order.
const std::vector<std::string>& sweep_columns();

/// Inclusive grid min, min + step, ..., max; each point is min + i step.
std::vector<double> linear_grid(double min, double max, double step);

/// Throws SpecValidation for empty axes or values outside the module guards.
void validate(const SweepSpec& spec);

/// Evaluates every row in a worker pool. The result order is the grid order;
/// a failure reports the parameter tuple of the first failing row.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

std::string to_csv(const std::vector<SweepRow>& rows);
/// Array of row objects with keys in column order.
nlohmann::ordered_json to_json(const std::vector<SweepRow>& rows);
std::vector<SweepRow> rows_from_json(const nlohmann::ordered_json& doc);
std::vector<SweepRow> rows_from_csv(std::istream& in);

/// Writes CSV or JSON to `path` (stdout for "-"); throws IoFailure.
void write_rows(const std::vector<SweepRow>& rows, const std::string& path, OutputFormat format);

/// Applies the keys of a JSON config to `spec`: family, u (list or
/// {min, max, step}), theta, r, s, k, h, provider, n_trunc, seed, out, format.
SweepSpec apply_config(SweepSpec spec, const nlohmann::json& config);
SweepSpec load_config(SweepSpec spec, const std::string& path);

Family parse_family(const std::string& name);
ProviderKind parse_provider(const std::string& name);
OutputFormat parse_format(const std::string& name);

/// Rob's pure QFI at theta = pi/4 over s in {0, 1/4, 1/2, 3/4}, k = +-1.
SweepSpec fig1_spec(ProviderKind provider, double h = 0.01);
/// Werner total QFI at theta = pi/4, r = 1/3, same (s, k) curves.
SweepSpec fig2_spec(ProviderKind provider, double h = 0.01, double r = 1.0 / 3.0);
/// Werner total QFI at theta = pi/4, s = 0, k = 1 for six values of r.
SweepSpec fig3_spec(ProviderKind provider, double h = 0.01);

/// Figure rows for fig1/fig2. The s = 0 curves for k = +1 and k = -1 are
/// merged into the k = +1 curve when they agree within 1e-6 at every u.
struct FigureData {
  std::vector<SweepRow> rows;
  bool merged_s0 = false;
  int curves = 0;
};
FigureData run_figure(const SweepSpec& spec, bool merge_s0);

}  // namespace cavqfi

#endif  // CAVQFI_SWEEP_HPP
