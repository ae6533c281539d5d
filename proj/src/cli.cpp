#include "oplip/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "oplip/doi.hpp"
#include "oplip/parallel.hpp"
#include "oplip/random.hpp"
#include "oplip/serialize.hpp"
#include "oplip/verify.hpp"

namespace oplip {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"verify", "estimate", "decompose", "growth", "duhamel", "report"};
  return names;
}

const char* command_help(const std::string& name) {
  if (name == "verify") return "cross-check every identity and bound on small seeded cases";
  if (name == "estimate") return "search for large Lipschitz or multiplier ratios";
  if (name == "decompose") return "build the Fourier weight g and check ratio reconstruction";
  if (name == "growth") return "strict-upper truncation norm estimates across dims";
  if (name == "duhamel") return "Duhamel quadrature against direct exponentials";
  return "merge record files into records.csv and a summary";
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

template <typename T>
std::string join_numbers(const std::vector<T>& values) {
  std::vector<std::string> parts;
  for (const T& v : values) parts.push_back(std::to_string(v));
  return join(parts, ",");
}

std::vector<ExperimentRecord> sorted(std::vector<ExperimentRecord> records) {
  std::stable_sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    return a.dim < b.dim;
  });
  return records;
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream out;
  out << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

class OutputDir {
 public:
  OutputDir(fs::path root, bool timestamp) : root_(std::move(root)), timestamp_(timestamp) {}

  const fs::path& root() const { return root_; }

  void write(const fs::path& relative, const std::string& content, bool csv = false) const {
    const fs::path path = root_ / relative;
    fs::create_directories(path.parent_path());
    std::ofstream file(path, std::ios::binary);
    if (timestamp_ && csv) file << "# generated " << iso_timestamp() << '\n';
    file << content;
    if (!file) throw Error("cannot write " + path.string());
  }

 private:
  fs::path root_;
  bool timestamp_;
};

// Creates the directory and proves it writable.
bool prepare_output(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return false;
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream file(probe);
    if (!file || !(file << "ok")) return false;
  }
  fs::remove(probe, ec);
  return true;
}

std::string alpha_slug(SchattenIndex alpha) {
  std::string s = alpha.to_string();
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

void finalize(ExperimentRecord& r, const RunConfig& config) {
  if (!config.timestamp) r.runtime_ms = 0;
}

void write_records(const OutputDir& dir, const std::vector<ExperimentRecord>& records, std::ostream& out,
                   bool norm_table) {
  for (const auto& r : records) {
    const std::string name = r.kind + "_a" + alpha_slug(r.alpha) + "_d" + std::to_string(r.dim) + ".json";
    dir.write(fs::path("records") / name, record_to_json(r).dump(2) + "\n");
  }
  const ReportOutput rep = report(records);
  dir.write("records.csv", rep.csv, true);
  if (norm_table) dir.write("norm_table.csv", norm_table_csv(records), true);
  dir.write("summary.txt", rep.summary);
  out << rep.summary;
}

int cmd_verify(const RunConfig& config, const OutputDir& dir, std::ostream& out, std::ostream& err) {
  VerifyOptions options;
  options.dims = config.dims;
  options.seed = config.seed;
  options.grid = config.grid;
  options.bridge_sharpness = config.sharpness;
  options.tolerances = config.tolerances;
  const VerifyReport rep = run_verification(options);
  dir.write("verify_report.json", rep.to_json().dump(2) + "\n");
  for (const auto& suite : rep.suites) {
    out << suite.name << ": " << suite.assertions << " assertions, " << suite.failures.size() << " failures\n";
    for (const auto& f : suite.failures) err << "  FAIL " << suite.name << ": " << f << '\n';
  }
  out << "total: " << rep.assertions() << " assertions, " << rep.failures() << " failures\n";
  return rep.passed() ? kExitOk : kExitVerifyFailed;
}

ProfileSource profile_source(const std::string& name) {
  if (name == "random") return ProfileSource::random(ProfileIncrements::zero_or_two);
  if (name == "strict") return ProfileSource::random(ProfileIncrements::one_or_two);
  if (name == "identity") return ProfileSource::identity();
  throw ConfigError("unknown profile '" + name + "' (expected random, strict or identity)");
}

int cmd_estimate(const RunConfig& config, const std::vector<SchattenIndex>& alphas, const OutputDir& dir,
                 std::ostream& out) {
  const SearchOptions search{config.trials, config.steps, config.seed};
  std::vector<ExperimentRecord> records;
  if (config.kind == "lipschitz") {
    const ScalarFunction f = catalog_function(config.function, config.seed);
    for (SchattenIndex alpha : alphas)
      for (Index dim : config.dims) records.push_back(estimate_lipschitz_constant(f, alpha, dim, search));
  } else if (config.kind == "multiplier") {
    const ProfileSource source = profile_source(config.profile);
    for (SchattenIndex alpha : alphas)
      for (Index dim : config.dims) records.push_back(multiplier_bound_study(source, alpha, dim, search));
  } else {
    throw ConfigError("unknown estimate kind '" + config.kind + "' (expected lipschitz or multiplier)");
  }
  for (auto& r : records) finalize(r, config);
  write_records(dir, records, out, config.kind == "multiplier");
  return kExitOk;
}

int cmd_growth(const RunConfig& config, const std::vector<SchattenIndex>& alphas, const OutputDir& dir,
               std::ostream& out) {
  const SearchOptions search{config.trials, config.steps, config.seed};
  std::vector<ExperimentRecord> records;
  for (SchattenIndex alpha : alphas) {
    auto study = truncation_growth_study(alpha, config.dims, search);
    records.insert(records.end(), study.begin(), study.end());
  }
  for (auto& r : records) finalize(r, config);
  write_records(dir, records, out, true);
  return kExitOk;
}

int cmd_decompose(const RunConfig& config, const OutputDir& dir, std::ostream& out) {
  const ScalarFunction cutoff = build_cutoff(config.sharpness);
  const FourierWeight g = fourier_weight(cutoff, config.grid);
  dir.write("g.csv", g.to_csv(), true);

  constexpr int kGrid = 50;
  std::ostringstream recon;
  recon.imbue(std::locale::classic());
  recon << "ratio,mu,relative_error\n";
  double worst = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    const double ratio = std::exp(std::log(0.05) + i * (std::log(2.0) - std::log(0.05)) / (kGrid - 1));
    for (int j = 0; j < kGrid; ++j) {
      const double mu = std::exp(std::log(1e-3) + j * (std::log(1e3) - std::log(1e-3)) / (kGrid - 1));
      const double e = reconstruct_ratio(g, ratio * mu, mu).relative_error;
      worst = std::max(worst, e);
      recon << format_number(ratio) << ',' << format_number(mu) << ',' << format_number(e) << '\n';
    }
  }
  dir.write("reconstruction.csv", recon.str(), true);

  std::ostringstream moments;
  moments << "n,moment\n";
  for (int n = 0; n <= 6; ++n) moments << n << ',' << format_number(moment(g, n)) << '\n';
  dir.write("moments.csv", moments.str(), true);

  std::ostringstream summary;
  summary << "grid: spacing " << format_number(config.grid.spacing) << ", half width "
          << format_number(config.grid.half_width) << ", " << g.size() << " nodes\n"
          << "integral of g minus 1: " << format_number(std::abs(g.total() - 1.0)) << '\n'
          << "max relative reconstruction error (" << kGrid << "x" << kGrid
          << " grid, ratios in [0.05, 2]): " << format_number(worst) << '\n';
  for (int n = 0; n <= 3; ++n) summary << "moment " << n << ": " << format_number(moment(g, n)) << '\n';
  dir.write("summary.txt", summary.str());
  out << summary.str();
  return kExitOk;
}

int cmd_duhamel(const RunConfig& config, const OutputDir& dir, std::ostream& out) {
  std::ostringstream csv;
  csv << "dim,r,steps,error,norm_difference,norm_bound\n";
  std::ostringstream summary;
  for (Index dim : config.dims) {
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(dim)));
    const HermitianOperator a = HermitianOperator::random(dim, rng);
    const HermitianOperator b = HermitianOperator::random(dim, rng);
    const Matrix direct = exponential_difference(a, b, config.radius);
    const double lhs = schatten_norm(direct, SchattenIndex::infinity());
    const double rhs =
        std::abs(config.radius) * schatten_norm(a.matrix() - b.matrix(), SchattenIndex::infinity());
    std::vector<int> steps{2, 4, 8, 16, 32, 64};
    if (std::find(steps.begin(), steps.end(), config.steps) == steps.end()) steps.push_back(config.steps);
    std::sort(steps.begin(), steps.end());
    double last = 0.0;
    for (int n : steps) {
      last = (duhamel_difference(a, b, config.radius, n) - direct).norm();
      csv << dim << ',' << format_number(config.radius) << ',' << n << ',' << format_number(last) << ','
          << format_number(lhs) << ',' << format_number(rhs) << '\n';
    }
    summary << "dim " << dim << ": error at " << steps.back() << " nodes " << format_number(last)
            << ", ||e^{irA} - e^{irB}|| = " << format_number(lhs) << " <= |r| ||A - B|| = " << format_number(rhs)
            << '\n';
  }
  dir.write("duhamel.csv", csv.str(), true);
  dir.write("summary.txt", summary.str());
  out << summary.str();
  return kExitOk;
}

std::vector<ExperimentRecord> load_records(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      for (const auto& entry : fs::recursive_directory_iterator(p))
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    } else if (fs::is_regular_file(p)) {
      files.push_back(p);
    } else {
      throw ConfigError("report: no such file or directory: " + in);
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<ExperimentRecord> records;
  for (const auto& f : files) {
    std::ifstream in(f);
    try {
      records.push_back(record_from_json(nlohmann::json::parse(in)));
    } catch (const nlohmann::json::exception& e) {
      throw DomainError("report: " + f.string() + " is not an experiment record (" + e.what() + ")");
    }
  }
  return records;
}

int cmd_report(const RunConfig& config, const OutputDir& dir, std::ostream& out) {
  const ReportOutput rep = report(load_records(config.inputs));
  dir.write("records.csv", rep.csv, true);
  dir.write("summary.txt", rep.summary);
  out << rep.summary;
  return kExitOk;
}

}  // namespace

std::string RunConfig::to_ini() const {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  std::vector<std::string> tol;
  for (const auto& [k, v] : tolerances) tol.push_back("\"" + k + "=" + format_number(v) + "\"");
  out << "alpha=" << join(alpha_text, ",") << '\n'
      << "dims=" << join_numbers(dims) << '\n'
      << "trials=" << trials << '\n'
      << "steps=" << steps << '\n'
      << "seed=" << seed << '\n'
      << "smax=" << format_number(grid.half_width) << '\n'
      << "ds=" << format_number(grid.spacing) << '\n'
      << "sharpness=" << format_number(sharpness) << '\n'
      << "f=" << function << '\n'
      << "kind=" << kind << '\n'
      << "profile=" << profile << '\n'
      << "r=" << format_number(radius) << '\n';
  if (!tol.empty()) out << "tol=" << join(tol, " ") << '\n';
  return out.str();
}

ReportOutput report(std::vector<ExperimentRecord> records) {
  if (records.empty()) throw DomainError("report: empty input");
  for (const auto& r : records)
    if (r.kind != records.front().kind)
      throw DomainError("report: mixed kinds '" + records.front().kind + "' and '" + r.kind + "'");
  records = sorted(std::move(records));

  std::ostringstream csv;
  csv << "kind,alpha,dim,best_ratio,seed,runtime_ms\n";
  for (const auto& r : records)
    csv << r.kind << ',' << r.alpha.to_string() << ',' << r.dim << ',' << format_number(r.best_ratio) << ','
        << r.seed << ',' << r.runtime_ms << '\n';

  std::ostringstream summary;
  summary << "kind: " << records.front().kind << ", " << records.size() << " records\n";
  for (std::size_t i = 0; i < records.size();) {
    std::size_t j = i;
    while (j < records.size() && records[j].alpha == records[i].alpha) ++j;
    const ExperimentRecord& lo = records[i];
    const ExperimentRecord& hi = records[j - 1];
    summary << "alpha " << lo.alpha.to_string() << (lo.contrast() ? " (contrast)" : "") << ":";
    for (std::size_t k = i; k < j; ++k)
      summary << " dim " << records[k].dim << " -> " << format_number(records[k].best_ratio) << ";";
    if (hi.dim != lo.dim) {
      summary << " growth dim " << hi.dim << " / dim " << lo.dim << " = ";
      if (lo.best_ratio > 0.0)
        summary << format_number(hi.best_ratio / lo.best_ratio);
      else
        summary << "undefined";
    }
    summary << '\n';
    i = j;
  }
  return ReportOutput{csv.str(), summary.str()};
}

std::string norm_table_csv(std::vector<ExperimentRecord> records) {
  records = sorted(std::move(records));
  std::ostringstream csv;
  csv << "dim,alpha,estimate,seed\n";
  for (const auto& r : records)
    csv << r.dim << ',' << r.alpha.to_string() << ',' << format_number(r.best_ratio) << ',' << r.seed << '\n';
  return csv.str();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (std::find(commands().begin(), commands().end(), config.command) == commands().end()) {
    err << "unknown subcommand '" << config.command << "' (expected one of " << join(commands(), ", ") << ")\n";
    return kExitUnknownCommand;
  }
  std::vector<SchattenIndex> alphas;
  try {
    for (const auto& text : config.alpha_text) alphas.push_back(SchattenIndex::parse(text));
  } catch (const DomainError& e) {
    err << "invalid alpha: " << e.what() << '\n';
    return kExitInvalidAlpha;
  }
  if (alphas.empty()) {
    err << "invalid alpha: empty list\n";
    return kExitInvalidAlpha;
  }
  if (config.trials < 1 || config.steps < 0 || config.dims.empty() ||
      std::any_of(config.dims.begin(), config.dims.end(), [](Index d) { return d < 1; })) {
    err << "invalid configuration: need trials >= 1, steps >= 0 and dims >= 1\n";
    return kExitUsage;
  }
  if (config.command == "report" && config.inputs.empty()) {
    err << "report: empty input (pass record files or directories)\n";
    return kExitUsage;
  }
  for (const auto& [key, value] : config.tolerances) {
    const auto& keys = verify_tolerance_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end() || !(value > 0.0)) {
      err << "invalid tolerance '" << key << "' (keys: " << join(keys, ", ") << ")\n";
      return kExitUsage;
    }
  }
  const fs::path root = config.out_dir / config.command;
  if (!prepare_output(root)) {
    err << "output directory not writable: " << root.string() << '\n';
    return kExitUnwritableOutput;
  }
  const OutputDir dir(root, config.timestamp);
  set_worker_count(config.threads);
  try {
    dir.write("config.ini", config.to_ini());
    if (config.command == "verify") return cmd_verify(config, dir, out, err);
    if (config.command == "estimate") return cmd_estimate(config, alphas, dir, out);
    if (config.command == "growth") return cmd_growth(config, alphas, dir, out);
    if (config.command == "decompose") return cmd_decompose(config, dir, out);
    if (config.command == "duhamel") return cmd_duhamel(config, dir, out);
    return cmd_report(config, dir, out);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  if (argc >= 2 && argv[1][0] != '-' &&
      std::find(commands().begin(), commands().end(), std::string(argv[1])) == commands().end()) {
    err << "unknown subcommand '" << argv[1] << "' (expected one of " << join(commands(), ", ") << ")\n";
    return kExitUnknownCommand;
  }

  RunConfig config;
  const char* env_out = std::getenv("OUT_DIR");
  config.out_dir = env_out && *env_out ? fs::path(env_out) : fs::path("oplip_out");
  std::string out_dir = config.out_dir.string();
  std::vector<std::string> tolerances;
  bool no_timestamp = false;

  CLI::App app{"Operator-Lipschitz numerical laboratory"};
  app.name("oplip");
  app.set_config("--config", "", "key=value configuration file; flags override it")->check(CLI::ExistingFile);
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.add_option("--alpha", config.alpha_text, "Schatten indices, e.g. 4/3,2,inf")->delimiter(',');
  app.add_option("--dims", config.dims, "matrix dimensions")->delimiter(',');
  app.add_option("--trials", config.trials, "random starts per record");
  app.add_option("--steps", config.steps, "ascent steps per start (duhamel: extra node count)");
  app.add_option("--seed", config.seed, "master seed");
  app.add_option("--threads", config.threads, "worker threads (0 = hardware)");
  app.add_option("--out", out_dir, "output root (default $OUT_DIR or ./oplip_out)");
  app.add_flag("--no-timestamp", no_timestamp, "omit the CSV timestamp line and zero runtime_ms");
  app.add_option("--f", config.function, "test function: " + join(catalog_names(), ", "));
  app.add_option("--kind", config.kind, "estimate kind: lipschitz or multiplier");
  app.add_option("--profile", config.profile, "multiplier profile: random, strict or identity");
  app.add_option("--smax", config.grid.half_width, "Fourier grid half width");
  app.add_option("--ds", config.grid.spacing, "Fourier grid spacing");
  app.add_option("--sharpness", config.sharpness, "cutoff bridge sharpness");
  app.add_option("--r", config.radius, "Duhamel exponent r");
  app.add_option("--tol", tolerances, "tolerance override key=value (verify)");

  std::vector<CLI::App*> subs;
  for (const auto& name : commands()) {
    CLI::App* sub = app.add_subcommand(name, command_help(name));
    sub->fallthrough();
    subs.push_back(sub);
  }
  subs.back()->add_option("inputs", config.inputs, "record JSON files or directories");
  app.require_subcommand(1);

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << "run 'oplip --help' for usage\n";
    return kExitUsage;
  }

  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) config.command = commands()[i];
  config.out_dir = out_dir;
  config.timestamp = !no_timestamp;
  for (const auto& item : tolerances) {
    const auto eq = item.find('=');
    double value = 0.0;
    try {
      if (eq == std::string::npos) throw std::invalid_argument(item);
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      err << "invalid --tol '" << item << "' (expected key=value)\n";
      return kExitUsage;
    }
    config.tolerances[item.substr(0, eq)] = value;
  }
  return run(config, out, err);
}

}  // namespace oplip
