// schatten-lab: fuzz campaigns, single checks, channel optimizers and reports.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "schatten_lab/io.hpp"
#include "schatten_lab/schatten_lab.hpp"

namespace {

using namespace schatten_lab;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    out.push_back(item);
  }
  return out;
}

SchattenExponent parse_exponent(const std::string& s, const std::string& flag) {
  if (s == "inf" || s == "infinity") return SchattenExponent::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(flag + ": '" + s + "' is not a number or \"inf\"");
  }
  if (used != s.size()) throw ConfigError(flag + ": '" + s + "' is not a number or \"inf\"");
  try {
    return SchattenExponent(v);
  } catch (const LabError& e) {
    throw ConfigError(flag + ": " + e.what());
  }
}

std::vector<SchattenExponent> parse_p_grid(const std::string& s) {
  if (s == "default") return default_p_grid();
  std::vector<SchattenExponent> grid;
  for (const auto& tok : split(s, ',')) {
    if (tok.empty()) throw ConfigError("--p-grid: empty entry in '" + s + "'");
    grid.push_back(parse_exponent(tok, "--p-grid"));
  }
  if (grid.empty()) throw ConfigError("--p-grid: no exponents given");
  return grid;
}

std::vector<std::size_t> parse_dims(const std::string& s) {
  std::vector<std::size_t> dims;
  for (const auto& tok : split(s, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size() || v < 1) throw ConfigError("--dims: '" + tok + "' is not a positive integer");
    dims.push_back(static_cast<std::size_t>(v));
  }
  if (dims.empty()) throw ConfigError("--dims: no dimensions given");
  return dims;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline JSON, or @path to read it from a file.
json parse_json_arg(const std::string& text, const std::string& flag) {
  const std::string body = !text.empty() && text.front() == '@' ? read_file(text.substr(1)) : text;
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw ConfigError(flag + ": " + e.what());
  }
}

KrausChannel parse_channel(const std::string& text, const std::string& flag) {
  try {
    return io::channel_from_json(parse_json_arg(text, flag));
  } catch (const LabError& e) {
    throw ConfigError(flag + ": " + e.what());
  }
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SCHATTEN_LAB_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("SCHATTEN_LAB_SEED: '") + env + "' is not an unsigned integer");
  }
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "seed: " << seed << " (drawn at random; pass --seed " << seed << " to reproduce)\n";
  return seed;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Writes to path.tmp then renames, so readers never see a partial file.
void write_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + tmp + "'");
    out << content;
    if (!out.flush()) throw ConfigError("write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw ConfigError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

void emit(const std::optional<std::string>& out, const std::string& content) {
  if (out) {
    write_atomically(*out, content);
  } else {
    std::cout << content;
  }
}

json grid_json(const std::vector<SchattenExponent>& grid) {
  json g = json::array();
  for (const auto& p : grid) g.push_back(io::exponent_to_json(p));
  return g;
}

std::string jsonl(const json& header, const std::vector<CheckRecord>& records) {
  std::string s = json{{"header", header}}.dump() + "\n";
  for (const auto& r : records) s += io::record_to_json(r).dump() + "\n";
  return s;
}

std::string csv_number(double x) {
  if (!std::isfinite(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string summary_csv(const FuzzSummary& s) {
  std::string grid;
  for (const auto& p : s.p_grid) grid += (grid.empty() ? "" : ";") + p.to_string();
  std::ostringstream os;
  os << "inequality_id,trials,records,failures,errors,min_margin,min_relative_margin,seed,p_grid\n"
     << s.inequality_id << ',' << s.trials << ',' << s.records << ',' << s.failures << ',' << s.errors << ','
     << csv_number(s.min_margin) << ',' << csv_number(s.min_relative_margin) << ',' << s.seed << ',' << grid << '\n';
  return os.str();
}

int exit_code_for(const std::vector<CheckRecord>& records) {
  bool violation = false;
  bool numerical = false;
  for (const auto& r : records) {
    if (r.pass) continue;
    if (r.error) {
      const std::string& e = *r.error;
      if (e == "NEAR_SINGULAR" || e == "UNSTABLE" || e == "NO_CONVERGENCE") {
        numerical = true;
        continue;
      }
    }
    violation = true;
  }
  if (violation) return kExitViolation;
  return numerical ? kExitNumerical : kExitOk;
}

SamplerMode parse_sampler(const std::string& s) {
  try {
    return parse_sampler_mode(s);
  } catch (const LabError& e) {
    throw ConfigError(std::string("--sampler: ") + e.what());
  }
}

FuzzTarget parse_target(const std::string& s) {
  try {
    return parse_fuzz_target(s);
  } catch (const LabError& e) {
    throw ConfigError(std::string("--inequality: ") + e.what());
  }
}

const std::vector<std::string> kTargets = {"thm1", "thm2", "gross", "hanner", "holder",
                                           "lemma2", "lemma3", "lemma4", "lemma5"};

// ---- fuzz ----

struct FuzzOptions {
  std::string inequality = "thm1";
  std::size_t trials = 100;
  std::string dims = "2";
  std::string p_grid = "default";
  std::optional<std::uint64_t> seed;
  double tol_rel = 1e-8;
  std::optional<std::string> out;
  std::string format = "jsonl";
  unsigned jobs = 1;
  std::string sampler = "standard";
};

int run_fuzz(const FuzzOptions& o) {
  FuzzSpec spec;
  spec.inequality = parse_target(o.inequality);
  spec.trials = o.trials;
  spec.dims = parse_dims(o.dims);
  spec.p_grid = parse_p_grid(o.p_grid);
  spec.sampler_mode = parse_sampler(o.sampler);
  spec.tol_rel = o.tol_rel;
  spec.jobs = o.jobs;
  if (spec.trials == 0) throw ConfigError("--trials must be >= 1");
  if (effective_grid(spec.inequality, spec.p_grid).empty()) {
    throw ConfigError("--p-grid: no exponent is valid for " + o.inequality);
  }
  spec.seed = resolve_seed(o.seed);

  const auto records = fuzz_suite(spec);
  const FuzzSummary summary = summarize(spec, records);
  const json header = {{"command", "fuzz"},
                       {"inequality", o.inequality},
                       {"trials", spec.trials},
                       {"dims", spec.dims},
                       {"p_grid", grid_json(effective_grid(spec.inequality, spec.p_grid))},
                       {"sampler", std::string(sampler_mode_name(spec.sampler_mode))},
                       {"tol_rel", spec.tol_rel},
                       {"seed", spec.seed},
                       {"timestamp", utc_timestamp()}};
  emit(o.out, jsonl(header, records));

  const std::string summary_text =
      o.format == "csv" ? summary_csv(summary) : io::summary_to_json(summary).dump(2) + "\n";
  if (o.out) {
    write_atomically(*o.out + (o.format == "csv" ? ".summary.csv" : ".summary.json"), summary_text);
    std::cerr << summary_text;
  } else {
    std::cerr << summary_text;
  }
  return exit_code_for(records);
}

// ---- check ----

struct CheckOptions {
  std::string inequality = "thm1";
  std::optional<std::uint64_t> seed;
  std::size_t n = 2;
  std::string p = "default";
  std::string sampler = "standard";
  std::optional<std::string> block;
  double tol_rel = 1e-8;
  std::optional<std::string> out;
};

int run_check(const CheckOptions& o) {
  const FuzzTarget target = parse_target(o.inequality);
  const auto grid = effective_grid(target, parse_p_grid(o.p));
  if (grid.empty()) throw ConfigError("--p: no exponent is valid for " + o.inequality);
  if (o.n == 0) throw ConfigError("--n must be >= 1");
  std::vector<CheckRecord> records;
  json header = {{"command", "check"}, {"inequality", o.inequality}, {"p_grid", grid_json(grid)},
                 {"tol_rel", o.tol_rel}};

  if (o.block) {
    if (target != FuzzTarget::Theorem1 && target != FuzzTarget::Theorem2 && target != FuzzTarget::Hanner &&
        target != FuzzTarget::Holder) {
      throw ConfigError("--block applies to thm1, thm2, hanner and holder only");
    }
    io::BlockInput input = [&] {
      try {
        return io::block_from_json(parse_json_arg(*o.block, "--block"));
      } catch (const LabError& e) {
        throw ConfigError(std::string("--block: ") + e.what());
      }
    }();
    FuzzInstance inst = std::visit(
        [&](auto&& b) -> FuzzInstance {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, PositiveBlock>) {
            if (target == FuzzTarget::Theorem2) return GeneralBlock::from_positive(b);
            return b;
          } else {
            if (target != FuzzTarget::Theorem2) throw ConfigError("--block with a W field needs --inequality thm2");
            return b;
          }
        },
        input);
    const std::size_t n = std::visit([](auto&& b) { return b.n(); }, input);
    for (const auto& p : grid) records.push_back(evaluate_instance(target, inst, p, n, o.tol_rel, 0));
    header["block"] = *o.block;
  } else {
    const std::uint64_t seed = resolve_seed(o.seed);
    const SamplerMode mode = parse_sampler(o.sampler);
    for (const auto& p : grid) records.push_back(evaluate_trial(target, seed, o.n, p, mode, o.tol_rel));
    header["seed"] = seed;
    header["n"] = o.n;
    header["sampler"] = std::string(sampler_mode_name(mode));
  }
  header["timestamp"] = utc_timestamp();
  emit(o.out, jsonl(header, records));
  return exit_code_for(records);
}

// ---- channel optimizers ----

struct OptOptions {
  std::string channel;
  std::optional<std::string> channel2;
  std::string p = "2";
  std::optional<std::uint64_t> seed;
  std::size_t restarts = 32;
  std::size_t max_iters = 200000;
  double tol = 1e-6;
  unsigned jobs = 1;
  std::optional<std::string> out;
  double p_from = 4.5;
  double p_to = 5.0;
  double step = 0.01;
};

OptConfig opt_config(const OptOptions& o, std::uint64_t seed) {
  if (o.restarts == 0) throw ConfigError("--restarts must be >= 1");
  if (!(o.tol > 0.0)) throw ConfigError("--tol must be positive");
  OptConfig cfg;
  cfg.restarts = o.restarts;
  cfg.max_iters = o.max_iters;
  cfg.tol = o.tol;
  cfg.seed = seed;
  cfg.jobs = o.jobs;
  return cfg;
}

int run_nu_p(const OptOptions& o, bool entropy) {
  const KrausChannel ch = parse_channel(o.channel, "--channel");
  const std::uint64_t seed = resolve_seed(o.seed);
  const OptConfig cfg = opt_config(o, seed);
  json doc = {{"command", entropy ? "smin" : "nu-p"}, {"channel", parse_json_arg(o.channel, "--channel")},
              {"seed", seed}, {"restarts", cfg.restarts}};
  OptResult r;
  if (entropy) {
    r = s_min(ch, cfg);
  } else {
    const SchattenExponent p = parse_exponent(o.p, "--p");
    doc["p"] = io::exponent_to_json(p);
    r = nu_p(ch, p, cfg);
  }
  doc["result"] = io::opt_result_to_json(r);
  emit(o.out, doc.dump(2) + "\n");
  if (!r.converged) std::cerr << "warning: restarts disagree beyond --tol (not converged)\n";
  return r.converged ? kExitOk : kExitNumerical;
}

int run_gap(const OptOptions& o) {
  const KrausChannel a = parse_channel(o.channel, "--channel");
  const KrausChannel b = o.channel2 ? parse_channel(*o.channel2, "--channel2") : a;
  const SchattenExponent p = parse_exponent(o.p, "--p");
  const std::uint64_t seed = resolve_seed(o.seed);
  const GapResult g = multiplicativity_gap(a, b, p, opt_config(o, seed));
  json doc = {{"command", "gap"},
              {"p", io::exponent_to_json(p)},
              {"seed", seed},
              {"nu_first", g.nu_first},
              {"nu_second", g.nu_second},
              {"nu_product", g.nu_product},
              {"nu_joint_lower", g.nu_joint_lower},
              {"gap", g.gap},
              {"converged", g.converged}};
  if (a.dim_in() == b.dim_in()) {
    const double w = entangled_lower_bound(a, b, p);
    doc["entangled_lower_bound"] = w;
    doc["entangled_gap"] = w - g.nu_product;
  }
  emit(o.out, doc.dump(2) + "\n");
  return g.converged ? kExitOk : kExitNumerical;
}

int run_scan(const OptOptions& o) {
  const KrausChannel ch = parse_channel(o.channel, "--channel");
  if (!(o.step > 0.0) || !(o.p_to >= o.p_from) || !(o.p_from >= 1.0)) {
    throw ConfigError("need 1 <= --p-from <= --p-to and --step > 0");
  }
  const std::uint64_t seed = resolve_seed(o.seed);
  const OptConfig cfg = opt_config(o, seed);
  const auto count = static_cast<std::size_t>(std::floor((o.p_to - o.p_from) / o.step + 1e-9)) + 1;

  json points = json::array();
  std::optional<double> first_positive;
  std::size_t sign_changes = 0;
  std::optional<bool> previous_positive;
  bool converged = true;
  for (std::size_t i = 0; i < count; ++i) {
    const double pv = o.p_from + static_cast<double>(i) * o.step;
    const SchattenExponent p(pv);
    const OptResult r = nu_p(ch, p, cfg);
    converged = converged && r.converged;
    const double product = r.value * r.value;
    const double witness = entangled_lower_bound(ch, ch, p);
    const double gap = witness - product;
    const bool positive = gap > 0.0;
    if (previous_positive && *previous_positive != positive) ++sign_changes;
    previous_positive = positive;
    if (positive && !first_positive) first_positive = pv;
    points.push_back({{"p", pv}, {"nu", r.value}, {"nu_product", product}, {"entangled_lower_bound", witness},
                      {"gap", gap}, {"converged", r.converged}});
  }
  json doc = {{"command", "scan-threshold"},
              {"channel", parse_json_arg(o.channel, "--channel")},
              {"seed", seed},
              {"p_from", o.p_from},
              {"p_to", o.p_to},
              {"step", o.step},
              {"sign_changes", sign_changes},
              {"first_positive_p", first_positive ? json(*first_positive) : json(nullptr)},
              {"converged", converged},
              {"points", std::move(points)}};
  emit(o.out, doc.dump(2) + "\n");
  if (first_positive) {
    std::cerr << "first p with positive gap: " << *first_positive << "\n";
  } else {
    std::cerr << "no positive gap on the scanned range\n";
  }
  return converged ? kExitOk : kExitNumerical;
}

// ---- report ----

struct ReportOptions {
  std::vector<std::string> inputs;
  std::optional<std::string> out;
};

struct Cell {
  std::size_t records = 0;
  std::size_t failures = 0;
  std::size_t errors = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  double min_relative_margin = std::numeric_limits<double>::infinity();
};

std::string format_number(double x) {
  if (!std::isfinite(x)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

int run_report(const ReportOptions& o) {
  // keyed by (inequality id, p) with p ordered numerically
  std::map<std::pair<std::string, double>, Cell> cells;
  std::vector<std::string> sources;
  std::size_t total_failures = 0;
  for (const auto& path : o.inputs) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const std::string where = path + ":" + std::to_string(lineno);
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error& e) {
        throw ConfigError(where + ": " + e.what());
      }
      if (j.contains("header")) {
        std::string src = path;
        if (j["header"].contains("seed")) src += " (seed " + j["header"]["seed"].dump() + ")";
        sources.push_back(src);
        continue;
      }
      CheckRecord r;
      try {
        r = io::record_from_json(j);
      } catch (const std::exception& e) {
        throw ConfigError(where + ": " + e.what());
      }
      Cell& c = cells[{std::string(inequality_name(r.inequality_id)), r.p.as_double()}];
      ++c.records;
      if (!r.pass) {
        ++c.failures;
        ++total_failures;
      }
      if (r.error) {
        ++c.errors;
        continue;
      }
      c.min_margin = std::min(c.min_margin, r.margin);
      c.min_relative_margin = std::min(c.min_relative_margin, r.relative_margin());
    }
  }

  std::ostringstream md;
  md << "# Inequality report\n\n";
  md << "Sources:\n\n";
  for (const auto& s : sources) md << "- " << s << "\n";
  md << "\n| inequality | p | records | failures | errors | min margin | min relative margin |\n";
  md << "|---|---|---|---|---|---|---|\n";
  for (const auto& [key, c] : cells) {
    const std::string p = std::isinf(key.second) ? "inf" : SchattenExponent(key.second).to_string();
    md << "| " << key.first << " | " << p << " | " << c.records << " | " << c.failures << " | " << c.errors << " | "
       << format_number(c.min_margin) << " | " << format_number(c.min_relative_margin) << " |\n";
  }
  md << "\nTotal failures: " << total_failures << "\n";
  emit(o.out, md.str());
  return total_failures == 0 ? kExitOk : kExitViolation;
}

void add_seed(CLI::App* cmd, std::optional<std::uint64_t>& seed) {
  cmd->add_option("--seed", seed, "Base seed (falls back to SCHATTEN_LAB_SEED, then a printed random seed)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for Schatten-norm block inequalities and channel p-norms"};
  app.require_subcommand(1);

  FuzzOptions fo;
  auto* fuzz = app.add_subcommand("fuzz", "Run a randomized campaign for one inequality");
  fuzz->add_option("--inequality", fo.inequality, "Target inequality")->check(CLI::IsMember(kTargets));
  fuzz->add_option("--trials", fo.trials, "Number of sampled instances");
  fuzz->add_option("--dims", fo.dims, "Comma list of block sizes, cycled over trials");
  fuzz->add_option("--p-grid", fo.p_grid, "'default' or a comma list of exponents; 'inf' allowed");
  add_seed(fuzz, fo.seed);
  fuzz->add_option("--tol-rel", fo.tol_rel, "Relative pass tolerance");
  fuzz->add_option("--out", fo.out, "JSONL output path (default: stdout)");
  fuzz->add_option("--format", fo.format, "Summary format")->check(CLI::IsMember({"jsonl", "csv"}));
  fuzz->add_option("--jobs", fo.jobs, "Worker threads");
  fuzz->add_option("--sampler", fo.sampler, "Block sampler mode")
      ->check(CLI::IsMember({"standard", "boundary", "zero", "identity", "rank-deficient"}));

  CheckOptions co;
  auto* check = app.add_subcommand("check", "Evaluate one instance, from a seed or a block file");
  check->add_option("--inequality", co.inequality, "Target inequality")->check(CLI::IsMember(kTargets));
  add_seed(check, co.seed);
  check->add_option("--n", co.n, "Block size");
  check->add_option("--p", co.p, "Exponent, comma list, or 'default'");
  check->add_option("--sampler", co.sampler, "Block sampler mode");
  check->add_option("--block", co.block, "Block JSON, inline or @file");
  check->add_option("--tol-rel", co.tol_rel, "Relative pass tolerance");
  check->add_option("--out", co.out, "JSONL output path (default: stdout)");

  OptOptions oo;
  auto add_opt_flags = [&](CLI::App* cmd) {
    add_seed(cmd, oo.seed);
    cmd->add_option("--restarts", oo.restarts, "Random restarts");
    cmd->add_option("--max-iters", oo.max_iters, "Objective evaluations per restart");
    cmd->add_option("--tol", oo.tol, "Agreement required among the best restarts");
    cmd->add_option("--jobs", oo.jobs, "Worker threads");
    cmd->add_option("--out", oo.out, "Output path (default: stdout)");
  };
  auto* nup = app.add_subcommand("nu-p", "Maximal output p-norm of a channel");
  nup->add_option("--channel", oo.channel, "Channel JSON, inline or @file")->required();
  nup->add_option("--p", oo.p, "Exponent or 'inf'");
  add_opt_flags(nup);
  auto* smin = app.add_subcommand("smin", "Minimal output entropy of a channel");
  smin->add_option("--channel", oo.channel, "Channel JSON, inline or @file")->required();
  add_opt_flags(smin);
  auto* gap = app.add_subcommand("gap", "Multiplicativity gap of a product channel");
  gap->add_option("--channel", oo.channel, "First factor")->required();
  gap->add_option("--channel2", oo.channel2, "Second factor (default: same as the first)");
  gap->add_option("--p", oo.p, "Exponent or 'inf'");
  add_opt_flags(gap);
  auto* scan = app.add_subcommand("scan-threshold", "Scan p for the entangled witness beating nu_p squared");
  scan->add_option("--channel", oo.channel, "Channel JSON, inline or @file")->required();
  scan->add_option("--p-from", oo.p_from, "First exponent");
  scan->add_option("--p-to", oo.p_to, "Last exponent");
  scan->add_option("--step", oo.step, "Exponent step");
  add_opt_flags(scan);

  ReportOptions ro;
  auto* report = app.add_subcommand("report", "Aggregate JSONL reports into a markdown table");
  report->add_option("inputs", ro.inputs, "JSONL files")->required()->check(CLI::ExistingFile);
  report->add_option("--out", ro.out, "Markdown output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*fuzz) return run_fuzz(fo);
    if (*check) return run_check(co);
    if (*nup) return run_nu_p(oo, false);
    if (*smin) return run_nu_p(oo, true);
    if (*gap) return run_gap(oo);
    if (*scan) return run_scan(oo);
    if (*report) return run_report(ro);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const LabError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_numerical_error(e.code()) ? kExitNumerical : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
