// viewsize: command-line front end for view-size estimation experiments.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "viewsize/viewsize.hpp"

namespace fs = std::filesystem;
using namespace viewsize;

namespace {

struct TableFlags {
  std::string path;
  std::string delimiter = "comma";
  bool header = false;
  bool skip_bad_rows = false;

  void add_to(CLI::App* app) {
    app->add_option("--table", path, "Delimited fact table")->required()->check(CLI::ExistingFile);
    app->add_option("--delimiter", delimiter, "comma, pipe or tab")->capture_default_str();
    app->add_flag("--header", header, "First line is a header");
    app->add_flag("--skip-bad-rows", skip_bad_rows, "Skip rows with the wrong field count");
  }

  FactTable open() const {
    TableOptions opt;
    opt.delimiter = parse_delimiter(delimiter);
    opt.has_header = header;
    opt.skip_bad_rows = skip_bad_rows;
    FactTable t = FactTable::open(path, opt);
    if (t.skipped_rows()) std::cerr << "skipped " << t.skipped_rows() << " malformed rows\n";
    return t;
  }

  std::string echo() const {
    return "table=" + path + " delimiter=" + delimiter + " header=" + (header ? "true" : "false") +
           " skip_bad_rows=" + (skip_bad_rows ? "true" : "false");
  }
};

std::string join(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

fs::path default_out_dir() {
  if (const char* env = std::getenv("VIEWSIZE_OUT_DIR"); env && *env) return env;
  return fs::current_path();
}

int cmd_generate(std::size_t rows, const std::vector<std::size_t>& cards, const std::string& dist,
                 std::uint64_t seed, const std::string& delimiter, bool header, const std::string& out) {
  SyntheticSpec spec{rows, cards, Distribution::parse(dist), seed};
  FactTable table = generate_synthetic(spec);
  std::cerr << "# viewsize generate rows=" << rows << " cardinalities=" << join(cards)
            << " distribution=" << spec.distribution.str() << " seed=" << seed << " delimiter=" << delimiter
            << " header=" << (header ? "true" : "false") << " out=" << (out.empty() ? "-" : out) << '\n';
  if (out.empty()) {
    table.write(std::cout, parse_delimiter(delimiter), header);
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + out + "'");
    table.write(f, parse_delimiter(delimiter), header);
  }
  return 0;
}

int cmd_exact(const TableFlags& tf, const std::string& query_text) {
  FactTable table = tf.open();
  GroupByQuery q = GroupByQuery::parse(query_text);
  std::cout << "# viewsize exact " << tf.echo() << " query=" << query_text << '\n';
  std::cout << "rows " << table.row_count() << " exact " << exact_count(table, q) << '\n';
  return 0;
}

struct EstimateFlags {
  std::string method;
  std::optional<std::size_t> budget;
  std::optional<double> ratio;
  std::string query;
  std::uint64_t seed = 0;
  std::string hashing = "xor-tables";
  std::string variant = "corrected";
  bool exact = false;
  bool raw = false;
};

int cmd_estimate(const TableFlags& tf, const EstimateFlags& ef) {
  const Method method = parse_method(ef.method);
  if (is_sketch(method)) {
    if (!ef.budget) throw CLI::ValidationError("--m", "method " + ef.method + " requires --m");
    if (ef.ratio) throw CLI::ValidationError("--ratio", "--ratio applies to multifractal only");
  } else {
    if (!ef.ratio) throw CLI::ValidationError("--ratio", "multifractal requires --ratio");
    if (ef.budget) throw CLI::ValidationError("--m", "--m applies to sketch methods only");
  }
  const HashingMode mode = parse_hashing_mode(ef.hashing);
  const FormulaVariant variant = parse_formula_variant(ef.variant);
  FactTable table = tf.open();
  GroupByQuery q = GroupByQuery::parse(ef.query);
  const double parameter = is_sketch(method) ? static_cast<double>(*ef.budget) : *ef.ratio;

  std::cout << "# viewsize estimate " << tf.echo() << " method=" << to_string(method) << " query=" << ef.query
            << (is_sketch(method) ? " m=" : " ratio=") << format_parameter(parameter) << " seed=" << ef.seed
            << " hashing=" << to_string(mode) << " variant=" << to_string(variant)
            << " exact=" << (ef.exact ? "true" : "false") << " raw=" << (ef.raw ? "true" : "false") << '\n';
  EstimateResult r = estimate_once(table, q, method, parameter, ef.seed, mode, variant);
  std::cout << to_string(method) << ' ' << format_number(r.estimate, ef.raw) << ' '
            << format_number(r.wall_millis, ef.raw);
  if (ef.exact) {
    const auto exact = exact_count(table, q);
    std::cout << ' ' << exact << ' ' << format_number(relative_error(r.estimate, exact), ef.raw);
  }
  std::cout << '\n';
  return 0;
}

int cmd_bench(const std::string& plan_path, const std::string& out_arg, unsigned jobs, bool raw) {
  std::ifstream plan_in(plan_path);
  if (!plan_in) throw std::runtime_error("cannot read plan '" + plan_path + "'");
  ExperimentPlan plan = parse_plan(plan_in);
  const fs::path out_dir = out_arg.empty() ? default_out_dir() : fs::path(out_arg);
  fs::create_directories(out_dir);
  const fs::path log_path = out_dir / "records.csv";

  // Resume: cells already in the log are not rerun.
  std::vector<EstimationRecord> previous;
  if (fs::exists(log_path)) {
    std::ifstream in(log_path);
    previous = read_records(in);
  }
  std::set<std::string> planned;
  {
    ExperimentPlan p = plan;
    for (const Cell& c : plan_cells(p)) {
      EstimationRecord r;
      r.method = c.method;
      r.query = plan.queries[c.query_index].id();
      r.budget_or_ratio = c.parameter;
      r.seed = c.seed;
      planned.insert(r.cell_key());
    }
  }
  ProtocolOptions options;
  options.jobs = jobs;
  std::vector<EstimationRecord> kept;
  for (auto& r : previous)
    if (planned.count(r.cell_key()) && options.completed.insert(r.cell_key()).second) kept.push_back(r);

  const bool fresh = !fs::exists(log_path) || fs::file_size(log_path) == 0;
  std::ofstream log(log_path, std::ios::app);
  if (!log) throw std::runtime_error("cannot append to '" + log_path.string() + "'");
  if (fresh) log << kRecordHeader << '\n' << std::flush;
  options.on_record = [&](const EstimationRecord& r) {
    write_record(log, r, raw);
    log.flush();
  };
  options.on_failure = [](const CellFailure& f) {
    std::cerr << "cell " << f.cell_key << " failed: " << f.message << '\n';
  };

  std::cout << "# viewsize bench plan=" << plan_path << " out=" << out_dir.string() << " jobs=" << jobs
            << " raw=" << (raw ? "true" : "false") << " hashing=" << to_string(plan.hashing)
            << " variant=" << to_string(plan.variant) << " budgets=" << join(plan.budgets) << " seeds="
            << plan.seeds.size() << " queries=" << plan.queries.size() << '\n';

  FactTable table = plan.load_table();
  ProtocolResult result = run_protocol(plan, table, options);
  kept.insert(kept.end(), result.records.begin(), result.records.end());

  const std::vector<ErrorSummary> summaries = summarize_errors(kept);
  {
    std::ofstream f(out_dir / "summaries.csv");
    write_summaries(f, summaries, raw);
  }
  std::set<Method> methods(plan.methods.begin(), plan.methods.end());
  for (Method m : methods) {
    std::ofstream f(out_dir / ("plot_" + std::string(to_string(m)) + ".csv"));
    emit_plot_data(f, summaries, m, raw);
  }
  std::cout << "records " << kept.size() << " new " << result.records.size() << " skipped "
            << options.completed.size() << " failed " << result.failures.size() << " groups "
            << summaries.size() << '\n';
  return 0;
}

int cmd_bounds(double k, const std::vector<double>& budgets, double delta, bool raw) {
  std::cout << "# viewsize bounds k=" << format_parameter(k) << " delta=" << format_parameter(delta)
            << " raw=" << (raw ? "true" : "false") << '\n';
  std::cout << "M,epsilon_first_form,epsilon_alpha_minimized\n";
  for (double m : budgets) {
    std::string first = "refused", second = "refused";
    if (m >= 8 * k) {
      auto f = gt_epsilon_first_form(k, m, delta);
      first = f ? format_number(*f, raw) : "unbounded";
      try {
        second = format_number(gt_epsilon(k, m, delta).epsilon, raw);
      } catch (const BoundDomainError&) {
        second = "unbounded";
      }
    } else {
      std::cerr << "M=" << format_parameter(m) << ": bound requires M >= 8k\n";
    }
    std::cout << format_parameter(m) << ',' << first << ',' << second << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"View-size estimation: sketches, multifractal sampling, bounds and benchmarks"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic fact table");
  std::size_t gen_rows = 100000;
  std::vector<std::size_t> gen_cards{10, 100, 1000};
  std::string gen_dist = "uniform", gen_delim = "comma", gen_out;
  std::uint64_t gen_seed = 0;
  bool gen_header = false;
  gen->add_option("--rows", gen_rows, "Number of facts")->capture_default_str();
  gen->add_option("--cardinalities", gen_cards, "Per-dimension cardinalities")->delimiter(',')->capture_default_str();
  gen->add_option("--distribution", gen_dist, "uniform or zipf:<s>")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("--delimiter", gen_delim, "comma, pipe or tab")->capture_default_str();
  gen->add_flag("--header", gen_header, "Write a header line");
  gen->add_option("--out", gen_out, "Output file (stdout when omitted)");

  // exact
  auto* ex = app.add_subcommand("exact", "Exact view size");
  TableFlags ex_table;
  std::string ex_query;
  ex_table.add_to(ex);
  ex->add_option("--query", ex_query, "Dimension indices, e.g. 0,2")->required();

  // estimate
  auto* est = app.add_subcommand("estimate", "Single view-size estimate");
  TableFlags est_table;
  EstimateFlags ef;
  est_table.add_to(est);
  est->add_option("--method", ef.method, "pc, loglog, gt or multifractal")->required();
  est->add_option("--m", ef.budget, "Memory budget M (sketch methods)");
  est->add_option("--ratio", ef.ratio, "Sampling ratio (multifractal)");
  est->add_option("--query", ef.query, "Dimension indices, e.g. 0,2")->required();
  est->add_option("--seed", ef.seed, "Seed for hashing and sampling")->capture_default_str();
  est->add_option("--hashing", ef.hashing, "xor-tables or ideal")->capture_default_str();
  est->add_option("--variant", ef.variant, "corrected or paper-literal")->capture_default_str();
  est->add_flag("--exact", ef.exact, "Also print exact size and relative error");
  est->add_flag("--raw", ef.raw, "Full precision output");

  // bench
  auto* bench = app.add_subcommand("bench", "Run an experiment plan");
  std::string plan_path, bench_out;
  unsigned jobs = 1;
  bool bench_raw = false;
  bench->add_option("--plan", plan_path, "Plan file (key=value lines)")->required()->check(CLI::ExistingFile);
  bench->add_option("--out", bench_out, "Output directory (default $VIEWSIZE_OUT_DIR or .)");
  bench->add_option("--jobs", jobs, "Concurrent cells")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_flag("--raw", bench_raw, "Full precision output");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "Error bound epsilon as a function of M");
  double bound_k = 2, bound_delta = 0.05;
  std::vector<double> bound_m{128, 256, 512, 1024, 2048};
  bool bound_raw = false;
  bnd->add_option("--k", bound_k, "Hash independence order")->capture_default_str();
  bnd->add_option("--m", bound_m, "Budgets")->delimiter(',')->capture_default_str();
  bnd->add_option("--delta", bound_delta, "Failure probability")->capture_default_str();
  bnd->add_flag("--raw", bound_raw, "Full precision output");

  try {
    app.parse(argc, argv);
    if (*gen) return cmd_generate(gen_rows, gen_cards, gen_dist, gen_seed, gen_delim, gen_header, gen_out);
    if (*ex) return cmd_exact(ex_table, ex_query);
    if (*est) return cmd_estimate(est_table, ef);
    if (*bench) return cmd_bench(plan_path, bench_out, jobs, bench_raw);
    if (*bnd) return cmd_bounds(bound_k, bound_m, bound_delta, bound_raw);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
