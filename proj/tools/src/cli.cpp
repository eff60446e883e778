#include "mvn_cli/cli.hpp"

#include "mvn/alternatives.hpp"
#include "mvn/cv_cache.hpp"
#include "mvn/dataset.hpp"
#include "mvn/errors.hpp"
#include "mvn/montecarlo.hpp"
#include "mvn/parallel.hpp"
#include "mvn/test_spec.hpp"
#include "mvn/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

namespace mvn::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr Index kHjmDefaultLimit = 200;
constexpr std::int64_t kHjmPowerBudget = 1000;

struct Options {
  std::string command;
  std::string data;
  bool header = false;
  std::string tests = "default";
  std::string alt;
  Index d = 2;
  Index n = 20;
  double alpha = 0.05;
  std::int64_t reps = 0;
  std::int64_t null_reps = 10000;
  std::int64_t hjm_reps = 0;
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string cache;
  int threads = 0;
  std::string format = "table";
  bool fail_on_reject = false;
  bool strict = false;
  std::string out;
  std::string manifest;
};

struct CacheNote {
  std::string test;
  bool hit = false;
  std::string file;
  double wall_seconds = 0.0;
};

struct Outcome {
  std::string report;
  Json config;
  std::vector<CacheNote> cache;
  std::int64_t nonconverged = 0;
  bool any_reject = false;
};

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::vector<TestSpec> resolve_tests(const std::string& text, Index n) {
  std::vector<TestSpec> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    item = item.substr(first, item.find_last_not_of(" \t") - first + 1);
    if (item == "default") {
      for (auto& t : default_battery()) {
        if (t.statistic == Statistic::hjm && n > kHjmDefaultLimit) continue;
        out.push_back(std::move(t));
      }
    } else {
      out.push_back(parse_test(item));
    }
  }
  if (out.empty()) throw ConfigError("empty test list");
  return out;
}

namespace {

std::unique_ptr<CriticalValueCache> open_cache(const Options& o) {
  if (o.cache.empty()) return nullptr;
  return std::make_unique<CriticalValueCache>(o.cache);
}

SimulationConfig sim_config(const Options& o, const TestSpec& t, Index d, Index n, std::int64_t reps) {
  SimulationConfig c;
  c.test = t;
  c.d = d;
  c.n = n;
  c.alpha = o.alpha;
  c.replications = reps;
  c.seed = o.seed;
  c.threads = o.threads;
  return c;
}

NullDistribution null_for(const SimulationConfig& c, const CriticalValueCache* cache, Outcome& outcome) {
  bool hit = false;
  NullDistribution null = load_or_simulate(c, cache, &hit);
  outcome.cache.push_back({c.test.id(), hit, cache ? cache->path_for(c).string() : "", null.wall_seconds});
  outcome.nonconverged += null.nonconverged;
  return null;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string render_records(const std::vector<Json>& records) {
  std::string s;
  for (const Json& r : records) s += r.dump() + "\n";
  return s;
}

std::string render_table(const std::string& title, const std::vector<std::string>& head,
                         const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size() + 2;
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size() + 2);
  }
  std::string s = "# " + title + "\n";
  auto line = [&](const std::vector<std::string>& cells) {
    std::string l;
    for (std::size_t c = 0; c < cells.size(); ++c) l += c + 1 == cells.size() ? cells[c] : pad(cells[c], width[c]);
    s += l + "\n";
  };
  line(head);
  for (const auto& r : rows) line(r);
  return s;
}

Outcome cmd_test(const Options& o) {
  if (o.data.empty()) throw ConfigError("test: --data is required");
  DatasetOptions dopt;
  dopt.skip_header = o.header;
  const Sample sample = read_dataset(o.data, dopt);
  const ScaledResiduals y = standardize(sample);
  const Index n = sample.n();
  const Index d = sample.d();
  const auto tests = resolve_tests(o.tests, n);
  const auto cache = open_cache(o);

  Outcome outcome;
  outcome.config = {{"data", o.data}, {"header", o.header}, {"n", n}, {"d", d}, {"tests", o.tests},
                    {"alpha", o.alpha}, {"reps", o.reps}, {"seed", o.seed}, {"cache", o.cache}};
  std::vector<Json> records;
  std::vector<std::vector<std::string>> rows;
  for (const TestSpec& t : tests) {
    const SimulationConfig c = sim_config(o, t, d, n, o.reps);
    const NullDistribution null = null_for(c, cache.get(), outcome);
    const CriticalValueRecord crit = critical_value(null);
    const StatisticValue v = evaluate(t, y);
    const double scaled = apply_scale(v.raw, t, d);
    const double p = mc_pvalue(null, scaled);
    const bool reject = crit.rejects(scaled);
    outcome.any_reject = outcome.any_reject || reject;
    records.push_back(Json{{"command", "test"},       {"test", t.id()},          {"label", t.label()},
                           {"n", n},                  {"d", d},                  {"alpha", o.alpha},
                           {"reps", o.reps},          {"seed", o.seed},          {"raw", v.raw},
                           {"scaled", scaled},        {"scale", crit.scale},     {"critical_upper", crit.upper},
                           {"critical_lower", optional_number(crit.lower)},      {"p_value", p},
                           {"reject", reject},        {"converged", v.converged}});
    const std::string critical =
        crit.lower ? "[" + general(*crit.lower) + ", " + general(crit.upper) + "]" : general(crit.upper);
    rows.push_back({t.label(), general(scaled), critical, fixed(p, 4), reject ? "yes" : "no"});
  }
  if (o.format == "records") {
    outcome.report = render_records(records);
  } else {
    const std::string title = "mvntest test  n=" + std::to_string(n) + " d=" + std::to_string(d) +
                              " alpha=" + format_number(o.alpha) + " reps=" + std::to_string(o.reps) +
                              " seed=" + std::to_string(o.seed);
    outcome.report = render_table(title, {"test", "statistic", "critical", "p-value", "reject"}, rows);
  }
  return outcome;
}

Outcome cmd_critval(const Options& o) {
  const auto tests = resolve_tests(o.tests, o.n);
  const auto cache = open_cache(o);
  Outcome outcome;
  outcome.config = {{"tests", o.tests}, {"d", o.d},       {"n", o.n},        {"alpha", o.alpha},
                    {"reps", o.reps},   {"seed", o.seed}, {"cache", o.cache}};
  std::vector<Json> records;
  std::vector<std::vector<std::string>> rows;
  for (const TestSpec& t : tests) {
    const NullDistribution null = null_for(sim_config(o, t, o.d, o.n, o.reps), cache.get(), outcome);
    const CriticalValueRecord crit = critical_value(null);
    records.push_back(Json{{"command", "critval"},
                           {"test", t.id()},
                           {"label", t.label()},
                           {"d", o.d},
                           {"n", o.n},
                           {"alpha", o.alpha},
                           {"reps", o.reps},
                           {"seed", o.seed},
                           {"quantile", crit.table_quantile},
                           {"critical_upper", crit.upper},
                           {"critical_lower", optional_number(crit.lower)},
                           {"scale", crit.scale},
                           {"quantile_rule", crit.quantile_rule},
                           {"engine_version", crit.engine_version},
                           {"nonconverged", crit.nonconverged}});
    rows.push_back({t.label(), general(crit.table_quantile), general(crit.upper),
                    crit.lower ? general(*crit.lower) : "-", crit.scale});
  }
  if (o.format == "records") {
    outcome.report = render_records(records);
  } else {
    const std::string title = "mvntest critval  d=" + std::to_string(o.d) + " n=" + std::to_string(o.n) +
                              " alpha=" + format_number(o.alpha) + " reps=" + std::to_string(o.reps) +
                              " seed=" + std::to_string(o.seed);
    outcome.report = render_table(title, {"test", "quantile", "upper", "lower", "scale"}, rows);
  }
  return outcome;
}

Outcome cmd_power(const Options& o) {
  if (o.alt.empty()) throw ConfigError("power: --alt is required");
  const AlternativeSpec alt = parse_alternative(o.alt);
  try {
    alt.validate(o.d);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  const auto tests = resolve_tests(o.tests, o.n);
  const auto cache = open_cache(o);
  Outcome outcome;
  outcome.config = {{"tests", o.tests},         {"alt", alt.encode()}, {"d", o.d},       {"n", o.n},
                    {"alpha", o.alpha},         {"reps", o.reps},      {"null_reps", o.null_reps},
                    {"hjm_reps", o.hjm_reps},   {"seed", o.seed},      {"cache", o.cache}};
  std::vector<Json> records;
  std::vector<std::vector<std::string>> rows;
  for (const TestSpec& t : tests) {
    const NullDistribution null = null_for(sim_config(o, t, o.d, o.n, o.null_reps), cache.get(), outcome);
    const CriticalValueRecord crit = critical_value(null);
    std::int64_t reps = o.reps;
    if (t.statistic == Statistic::hjm) reps = o.hjm_reps > 0 ? o.hjm_reps : std::min(o.reps, kHjmPowerBudget);
    const PowerResult r = empirical_power(t, alt, o.n, crit, reps, o.seed, o.threads);
    outcome.nonconverged += r.nonconverged;
    records.push_back(Json{{"command", "power"},
                           {"test", t.id()},
                           {"label", t.label()},
                           {"alt", alt.encode()},
                           {"d", o.d},
                           {"n", o.n},
                           {"alpha", o.alpha},
                           {"reps", reps},
                           {"null_reps", o.null_reps},
                           {"seed", o.seed},
                           {"critical_upper", crit.upper},
                           {"critical_lower", optional_number(crit.lower)},
                           {"rejections", r.rejections},
                           {"rate", r.rate},
                           {"percent", fixed(100.0 * r.rate, 1)}});
    rows.push_back({t.label(), fixed(100.0 * r.rate, 1), std::to_string(r.rejections) + "/" + std::to_string(reps)});
  }
  if (o.format == "records") {
    outcome.report = render_records(records);
  } else {
    const std::string title = "mvntest power  alt=" + alt.encode() + " d=" + std::to_string(o.d) +
                              " n=" + std::to_string(o.n) + " alpha=" + format_number(o.alpha) +
                              " reps=" + std::to_string(o.reps) + " null-reps=" + std::to_string(o.null_reps) +
                              " seed=" + std::to_string(o.seed);
    outcome.report = render_table(title, {"test", "power(%)", "rejections"}, rows);
  }
  return outcome;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path);
}

void write_manifest(const Options& o, const std::vector<std::string>& args, const Outcome& outcome,
                    const std::string& started, double wall) {
  Json cache = Json::array();
  for (const CacheNote& c : outcome.cache) {
    cache.push_back({{"test", c.test}, {"hit", c.hit}, {"file", c.file}, {"simulation_seconds", c.wall_seconds}});
  }
  Json m = {{"tool", "mvntest"},
            {"version", kLibraryVersion},
            {"engine_version", kEngineVersion},
            {"command", o.command},
            {"arguments", args},
            {"config", outcome.config},
            {"seed", o.seed},
            {"seed_source", o.seed_given ? "flag" : "default"},
            {"threads", resolve_threads(o.threads)},
            {"format", o.format},
            {"started_utc", started},
            {"finished_utc", utc_now()},
            {"wall_seconds", wall},
            {"output_digest", "fnv1a64:" + fnv1a_hex(outcome.report)},
            {"cache", cache},
            {"nonconverged_searches", outcome.nonconverged}};
  write_file(o.manifest, m.dump(2) + "\n");
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--tests", o.tests, "Comma-separated test ids, or 'default'")->capture_default_str();
  sub->add_option("--alpha", o.alpha, "Test level")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  sub->add_option("--seed", o.seed, "Master seed for every simulation");
  sub->add_option("--cache", o.cache, "Critical-value cache directory");
  sub->add_option("--threads", o.threads, "Worker cap, 0 = all cores")->capture_default_str()->check(CLI::NonNegativeNumber);
  sub->add_option("--format", o.format, "Report format")->capture_default_str()->check(CLI::IsMember({"table", "records"}));
  sub->add_option("--out", o.out, "Write the report to this file instead of stdout");
  sub->add_option("--manifest", o.manifest, "Write a run manifest (JSON) to this file");
  sub->add_flag("--strict", o.strict, "Require an explicit --seed");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Affine invariant tests of multivariate normality", "mvntest"};
  app.set_version_flag("--version", std::string("mvntest ") + kLibraryVersion + " (" + kEngineVersion + ")");
  app.require_subcommand(1);

  CLI::App* test = app.add_subcommand("test", "Test a dataset for multivariate normality");
  test->add_option("--data", o.data, "Dataset: one observation per line, comma or whitespace separated")->required();
  test->add_flag("--header", o.header, "Skip the first non-comment line of the dataset");
  test->add_option("--reps", o.reps, "Null replications for critical values and p-values")->default_val(1000);
  test->add_flag("--fail-on-reject", o.fail_on_reject, "Exit with status 1 if any test rejects");
  add_common(test, o);

  CLI::App* critval = app.add_subcommand("critval", "Simulate null critical values");
  critval->add_option("--d", o.d, "Dimension")->required();
  critval->add_option("--n", o.n, "Sample size")->required();
  critval->add_option("--reps", o.reps, "Null replications")->default_val(10000);
  add_common(critval, o);

  CLI::App* power = app.add_subcommand("power", "Estimate rejection rates under an alternative");
  power->add_option("--alt", o.alt, "Alternative, e.g. t:nu=3 or nmix:p=0.5,mu=3,sigma=I")->required();
  power->add_option("--d", o.d, "Dimension")->required();
  power->add_option("--n", o.n, "Sample size")->required();
  power->add_option("--reps", o.reps, "Replications under the alternative")->default_val(1000);
  power->add_option("--null-reps", o.null_reps, "Null replications for the critical values")->capture_default_str();
  power->add_option("--hjm-reps", o.hjm_reps, "Replications for HJM (default: min(reps, 1000))");
  add_common(power, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  for (CLI::App* sub : {test, critval, power}) {
    if (sub->parsed()) {
      o.command = sub->get_name();
      o.seed_given = sub->get_option("--seed")->count() > 0;
    }
  }

  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (o.strict && !o.seed_given) throw ConfigError("--strict requires an explicit --seed");
    Outcome outcome;
    if (o.command == "test") outcome = cmd_test(o);
    if (o.command == "critval") outcome = cmd_critval(o);
    if (o.command == "power") outcome = cmd_power(o);
    if (o.out.empty()) {
      out << outcome.report;
    } else {
      write_file(o.out, outcome.report);
    }
    if (!o.manifest.empty()) {
      write_manifest(o, args, outcome, started,
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return o.fail_on_reject && outcome.any_reject ? kRejected : kSuccess;
  } catch (const SingularCovariance& e) {
    err << "mvntest: input error: " << e.what()
        << "\n  hint: remove constant or collinear columns, or supply more observations than dimensions\n";
    return kInputError;
  } catch (const InputError& e) {
    err << "mvntest: input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ConfigError& e) {
    err << "mvntest: configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ParameterError& e) {
    err << "mvntest: configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "mvntest: error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace mvn::cli
