#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

#include "cavqfi/sweep.hpp"
#include "cavqfi/verify.hpp"

using namespace cavqfi;

namespace {

// Raw flag values. Only flags given on the command line touch the SweepSpec, so a
// --config file supplies defaults that flags override.
struct Flags {
  std::string family, provider, format, out, config, level = "fast";
  double h = 0.01, u_min = 0.0, u_max = 1.0, u_step = 0.01;
  std::vector<double> theta, r, s;
  std::vector<long> k;
  std::uint64_t seed = 3;
  int n_trunc = kDefaultTruncation, threads = 0;
};

struct Options {
  CLI::Option *family = nullptr, *provider = nullptr, *format = nullptr, *out = nullptr, *config = nullptr;
  CLI::Option *h = nullptr, *u_min = nullptr, *u_max = nullptr, *u_step = nullptr;
  CLI::Option *theta = nullptr, *r = nullptr, *s = nullptr, *k = nullptr;
  CLI::Option *seed = nullptr, *n_trunc = nullptr, *threads = nullptr;
};

bool given(const CLI::Option* o) { return o != nullptr && o->count() > 0; }

void add_common(CLI::App* app, Flags& f, Options& o) {
  o.provider = app->add_option("--provider", f.provider, "synthetic | quadrature");
  o.h = app->add_option("--h", f.h, "perturbation parameter h in (0, 0.1]");
  o.n_trunc = app->add_option("--n-trunc", f.n_trunc, "mode-sum truncation");
  o.seed = app->add_option("--seed", f.seed, "synthetic provider seed");
  o.format = app->add_option("--format", f.format, "csv | json");
  o.out = app->add_option("--out", f.out, "output path, - for stdout");
  o.threads = app->add_option("--threads", f.threads, "worker threads, 0 for all cores");
  o.config = app->add_option("--config", f.config, "JSON config; flags override its keys");
}

void add_grid(CLI::App* app, Flags& f, Options& o, bool with_family) {
  if (with_family) o.family = app->add_option("--family", f.family, "pure | werner");
  o.u_min = app->add_option("--u-min", f.u_min);
  o.u_max = app->add_option("--u-max", f.u_max);
  o.u_step = app->add_option("--u-step", f.u_step);
  o.theta = app->add_option("--theta", f.theta, "repeatable");
  o.r = app->add_option("--r", f.r, "repeatable");
  o.s = app->add_option("--s", f.s, "repeatable");
  o.k = app->add_option("--k", f.k, "repeatable")->allow_extra_args(false);
}

SweepSpec resolve(SweepSpec spec, const Flags& f, const Options& o) {
  if (given(o.config)) spec = load_config(std::move(spec), f.config);
  if (given(o.family)) spec.family = parse_family(f.family);
  if (given(o.provider)) spec.provider = parse_provider(f.provider);
  if (given(o.h)) spec.h = f.h;
  if (given(o.n_trunc)) spec.n_trunc = f.n_trunc;
  if (given(o.seed)) spec.seed = f.seed;
  if (given(o.format)) spec.format = parse_format(f.format);
  if (given(o.out)) spec.out = f.out;
  if (given(o.threads)) spec.threads = f.threads;
  if (given(o.u_min) || given(o.u_max) || given(o.u_step)) {
    const double lo = given(o.u_min) ? f.u_min : (spec.u.empty() ? 0.0 : spec.u.front());
    const double hi = given(o.u_max) ? f.u_max : (spec.u.empty() ? 1.0 : spec.u.back());
    spec.u = linear_grid(lo, hi, f.u_step);
  }
  if (given(o.theta)) spec.theta = f.theta;
  if (given(o.r)) spec.r = f.r;
  if (given(o.s)) spec.s = f.s;
  if (given(o.k)) spec.k = f.k;
  return spec;
}

int emit(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  write_rows(rows, spec.out.empty() ? "-" : spec.out, spec.format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Fisher information of cavity-mode states after a non-uniform trip"};
  app.require_subcommand(1);
  Flags flags;
  std::map<const CLI::App*, Options> opts;

  auto* fig1 = app.add_subcommand("fig1", "Rob's pure-state QFI over u for four boundary phases");
  auto* fig2 = app.add_subcommand("fig2", "Werner total QFI over u for four boundary phases");
  auto* fig3 = app.add_subcommand("fig3", "Werner total QFI over u for six mixing weights");
  auto* sweep = app.add_subcommand("sweep", "General parameter sweep");
  auto* verify = app.add_subcommand("verify", "Run the verification suite and print a JSON report");

  // Subcommands are exclusive, so one Flags value serves all of them. The
  // short -h is taken by --h, which leaves --help as the only help flag.
  for (auto* cmd : {fig1, fig2, fig3, sweep}) {
    cmd->set_help_flag("--help", "Print this help message and exit");
    add_common(cmd, flags, opts[cmd]);
    add_grid(cmd, flags, opts[cmd], cmd == sweep);
  }
  verify->add_option("--level", flags.level, "fast | full");
  verify->add_option("--out", flags.out, "report path, - for stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      const VerifyLevel level = parse_level(flags.level);
      const std::vector<CheckResult> results = run_verification(level);
      const nlohmann::ordered_json report = verification_report(level, results);
      const std::string text = report.dump(2) + "\n";
      if (flags.out.empty() || flags.out == "-") {
        std::cout << text;
      } else {
        std::ofstream file(flags.out, std::ios::binary);
        if (!(file << text)) throw Error(ErrorCode::IoFailure, "cannot write " + flags.out);
      }
      return report["passed"].get<bool>() ? 0 : 1;
    }
    if (sweep->parsed()) {
      const SweepSpec spec = resolve(SweepSpec{}, flags, opts[sweep]);
      return emit(spec, run_sweep(spec));
    }
    // Figures default to the quadrature provider; flags then override the grid.
    const CLI::App* fig = fig1->parsed() ? fig1 : fig2->parsed() ? fig2 : fig3;
    SweepSpec base = fig == fig1 ? fig1_spec(ProviderKind::Quadrature)
                     : fig == fig2 ? fig2_spec(ProviderKind::Quadrature)
                                   : fig3_spec(ProviderKind::Quadrature);
    const SweepSpec spec = resolve(base, flags, opts[fig]);
    return emit(spec, run_figure(spec, !fig3->parsed()).rows);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
