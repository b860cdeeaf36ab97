// Command-line front end over the l2boost C API: model fitting, Monte-Carlo
// tables and step curves, theory constants, eigen scans, and greedy-path
// diagnostics. Every run that writes artifacts also writes a manifest with
// the resolved configuration and FNV-1a digests of inputs and outputs.

#include "l2boost/l2boost.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

int exit_code_for(int status) {
  switch (status) {
    case L2B_OK: return 0;
    case L2B_E_INVALID_ARGUMENT:
    case L2B_E_PARSE:
    case L2B_E_MISSING_COLUMN:
    case L2B_E_INVALID_THRESHOLD:
    case L2B_E_DOMAIN:
    case L2B_E_ORACLE_UNAVAILABLE:
    case L2B_E_IO: return 2;
    default: return 3;
  }
}

[[noreturn]] void fail_status(int status) {
  std::fprintf(stderr, "error: %s\n", l2b_last_error());
  std::exit(exit_code_for(status));
}

void check(int status) {
  if (status != L2B_OK) fail_status(status);
}

[[noreturn]] void usage_error(const std::string& message) {
  std::fprintf(stderr, "error: %s\n", message.c_str());
  std::exit(2);
}

std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) usage_error("cannot open '" + path + "' for digest");
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[65536];
  while (f.read(buf, sizeof buf), f.gcount() > 0) {
    const std::streamsize got = f.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  return h;
}

json file_entry(const std::string& path) {
  char hex[20];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64_file(path)));
  return json{{"path", path}, {"fnv1a64", hex}};
}

std::string join_path(const std::string& dir, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec); // best effort; the write reports failures
  return (std::filesystem::path(dir) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) usage_error("cannot write '" + path + "'");
  f << text;
  if (!f) usage_error("cannot write '" + path + "'");
}

// The manifest lists every input and emitted artifact with digests, so a run
// can be reproduced and its outputs checked for integrity.
void write_manifest(const std::string& dir, const std::string& prefix, const std::string& sub,
                    std::uint64_t seed, json config, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  json m;
  m["subcommand"] = sub;
  m["tool_version"] = l2b_version();
  m["master_seed"] = seed;
  m["config"] = std::move(config);
  m["inputs"] = json::array();
  for (const auto& in : inputs) m["inputs"].push_back(file_entry(in));
  m["outputs"] = json::array();
  for (const auto& out : outputs) m["outputs"].push_back(file_entry(out));
  write_text(join_path(dir, prefix + "_manifest.json"), m.dump(2) + "\n");
}

std::string owned_string(char* s) {
  std::string out = s ? s : "";
  l2b_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) usage_error("cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return text;
}

// Mean-zero 1/n-orthonormal design: scaled Helmert columns, n = p + 1 rows.
std::vector<double> helmert_design(long p) {
  const long n = p + 1;
  std::vector<double> x(static_cast<size_t>(n) * static_cast<size_t>(p), 0.0);
  const double root_n = std::sqrt(static_cast<double>(n));
  for (long k = 1; k <= p; ++k) {
    const double denom = std::sqrt(static_cast<double>(k) * static_cast<double>(k + 1));
    for (long i = 0; i < k; ++i)
      x[static_cast<size_t>(i) * p + (k - 1)] = root_n / denom;
    x[static_cast<size_t>(k) * p + (k - 1)] = -root_n * static_cast<double>(k) / denom;
  }
  return x;
}

struct fit_options {
  std::string data, response;
  std::string method = "ba";
  std::string stop = "ratio";
  std::string penalty = "plugin";
  double lambda = -1.0;
  double nu = 1.0;
  long max_steps = 1000;
  long m_fixed = 100;
  long k = 2;
  long s = 0;
  double cu = 4.5;
  double eta = 0.0;
  double lambda_n = 0.0;
  double c = 0.0;
  double alpha = 0.05;
  long folds = 10;
  long grid = 100;
  double test_frac = 0.0;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string prefix = "fit";
};

int cmd_fit(const fit_options& o) {
  const bool is_boost = o.method == "ba" || o.method == "post-ba" || o.method == "oba";
  const bool is_lasso = o.method == "lasso" || o.method == "post-lasso";
  if (!is_boost && !is_lasso) usage_error("unknown method '" + o.method + "'");

  l2b_dataset* train = nullptr;
  l2b_dataset* test = nullptr;
  if (o.test_frac > 0.0)
    check(l2b_dataset_split_csv(o.data.c_str(), o.response.c_str(), 1, o.test_frac, o.seed,
                                &train, &test));
  else
    check(l2b_dataset_from_csv(o.data.c_str(), o.response.c_str(), 1, &train));
  const l2b_dataset* eval = test ? test : train;
  const size_t p = l2b_dataset_cols(train);

  std::vector<double> beta(p, 0.0);
  l2b_path* path = nullptr;
  double lambda_used = std::nan("");

  if (is_boost) {
    l2b_stop_spec stop;
    l2b_stop_default(&stop);
    if (o.stop == "none")
      stop.kind = L2B_STOP_NONE;
    else if (o.stop == "fixed")
      stop.kind = L2B_STOP_FIXED;
    else if (o.stop == "ks")
      stop.kind = L2B_STOP_KS;
    else if (o.stop == "ratio")
      stop.kind = L2B_STOP_RATIO;
    else if (o.stop == "oracle")
      stop.kind = L2B_STOP_ORACLE;
    else if (o.stop == "vbound")
      stop.kind = L2B_STOP_VBOUND;
    else
      usage_error("unknown stop rule '" + o.stop + "'");
    stop.m_fixed = o.m_fixed;
    stop.k = o.k;
    stop.s = o.s;
    stop.cu = o.cu;
    stop.eta = o.eta;
    stop.lambda_n = o.lambda_n;
    stop.c = o.c;

    const int variant = o.method == "oba" ? L2B_ORTHOGONAL : L2B_PLAIN;
    check(l2b_fit(train, variant, o.nu, o.max_steps, &stop, &path));
    const long t = l2b_path_stop_step(path);
    if (o.method == "post-ba") {
      const long count = l2b_path_support(path, t, nullptr, 0);
      if (count < 0) fail_status(L2B_E_INVALID_ARGUMENT);
      std::vector<long> js(static_cast<size_t>(count));
      l2b_path_support(path, t, js.data(), js.size());
      check(l2b_post_refit(train, js.data(), js.size(), beta.data()));
    } else {
      check(l2b_path_beta(path, t, beta.data(), p));
    }
  } else {
    l2b_lasso_spec spec;
    l2b_lasso_default(&spec);
    spec.alpha = o.alpha;
    spec.folds = o.folds;
    spec.grid_size = o.grid;
    if (o.lambda >= 0.0) {
      lambda_used = o.lambda;
    } else if (o.penalty == "plugin") {
      check(l2b_lasso_plugin(train, &spec, &lambda_used, nullptr));
    } else if (o.penalty == "cv") {
      check(l2b_lasso_cv(train, &spec, o.seed, &lambda_used));
    } else {
      usage_error("unknown penalty '" + o.penalty + "'");
    }
    std::vector<double> raw_fit(p, 0.0);
    check(l2b_lasso_fit(train, lambda_used, &spec, raw_fit.data(), nullptr));
    if (o.method == "post-lasso") {
      std::vector<long> support;
      for (size_t j = 0; j < p; ++j)
        if (raw_fit[j] != 0.0) support.push_back(static_cast<long>(j));
      check(l2b_post_refit(train, support.data(), support.size(), beta.data()));
    } else {
      beta = raw_fit;
    }
  }

  std::vector<std::string> outputs;

  // Coefficients in the fitted (standardized) basis and on the raw scale.
  {
    const std::string path_out = join_path(o.out_dir, o.prefix + "_coefficients.csv");
    std::string text = "name,standardized,raw\n";
    double intercept = l2b_dataset_y_center(train);
    std::vector<double> raw(p, 0.0);
    for (size_t j = 0; j < p; ++j) {
      raw[j] = beta[j] / l2b_dataset_scale(train, j);
      intercept -= raw[j] * l2b_dataset_mean(train, j);
    }
    text += "(intercept)," + g12(l2b_dataset_y_center(train)) + "," + g12(intercept) + "\n";
    for (size_t j = 0; j < p; ++j) {
      const char* name = l2b_dataset_name(train, j);
      text += std::string(name ? name : "") + "," + g12(beta[j]) + "," + g12(raw[j]) + "\n";
    }
    write_text(path_out, text);
    outputs.push_back(path_out);
  }

  if (path != nullptr) {
    const std::string path_out = join_path(o.out_dir, o.prefix + "_path.csv");
    check(l2b_path_write_csv(path, path_out.c_str()));
    outputs.push_back(path_out);
  }

  {
    const std::string path_out = join_path(o.out_dir, o.prefix + "_predictions.csv");
    const size_t n = l2b_dataset_rows(eval);
    std::vector<double> predicted(n), actual(n);
    check(l2b_dataset_predict(eval, beta.data(), p, predicted.data()));
    check(l2b_dataset_actual(eval, actual.data()));
    std::string text = "row,actual,predicted\n";
    for (size_t i = 0; i < n; ++i)
      text += std::to_string(i) + "," + g12(actual[i]) + "," + g12(predicted[i]) + "\n";
    write_text(path_out, text);
    outputs.push_back(path_out);
  }

  double mse = 0.0;
  check(l2b_dataset_mse(eval, beta.data(), p, &mse));
  std::printf("%s %s\n", test ? "holdout_mse" : "in_sample_mse", g12(mse).c_str());
  if (path != nullptr) {
    long support = l2b_path_support(path, l2b_path_stop_step(path), nullptr, 0);
    std::printf("stop_step %ld\nstop_reason %s\nsupport_size %ld\n", l2b_path_stop_step(path),
                l2b_path_stop_reason(path), support);
  }
  if (!std::isnan(lambda_used)) std::printf("lambda %s\n", g12(lambda_used).c_str());

  json config{{"data", o.data},         {"response", o.response}, {"method", o.method},
              {"stop", o.stop},         {"penalty", o.penalty},   {"nu", o.nu},
              {"max_steps", o.max_steps}, {"m", o.m_fixed},       {"k", o.k},
              {"s", o.s},               {"cu", o.cu},             {"eta", o.eta},
              {"lambda_n", o.lambda_n}, {"c", o.c},               {"alpha", o.alpha},
              {"folds", o.folds},       {"grid_size", o.grid},    {"test_frac", o.test_frac}};
  if (!std::isnan(lambda_used)) config["lambda"] = lambda_used;
  write_manifest(o.out_dir, o.prefix, "fit", o.seed, config, {o.data}, outputs);
  return 0;
}

struct simulate_options {
  std::string spec_file;
  std::string preset;
  long reps = -1;
  long long seed = -1;
  int workers = 1;
  std::string out_dir = ".";
  std::string prefix = "simulate";
};

int cmd_simulate(const simulate_options& o) {
  if (o.spec_file.empty() == o.preset.empty())
    usage_error("pass exactly one of --spec or --preset");
  std::string text;
  std::vector<std::string> inputs;
  if (!o.preset.empty()) {
    char* preset = nullptr;
    check(l2b_preset_json(o.preset.c_str(), &preset));
    text = owned_string(preset);
  } else {
    text = read_file(o.spec_file);
    inputs.push_back(o.spec_file);
  }

  json spec;
  try {
    spec = json::parse(text);
  } catch (const json::exception& e) {
    usage_error(std::string("spec JSON: ") + e.what());
  }
  if (o.reps >= 0) spec["repetitions"] = o.reps;
  if (o.seed >= 0) spec["master_seed"] = static_cast<std::uint64_t>(o.seed);
  text = spec.dump(2);

  char* resolved_raw = nullptr;
  check(l2b_experiments_resolved_json(text.c_str(), &resolved_raw));
  const std::string resolved = owned_string(resolved_raw);

  l2b_table* table = nullptr;
  check(l2b_run_experiments_json(text.c_str(), o.workers, &table));

  const std::string table_path = join_path(o.out_dir, o.prefix + "_table.csv");
  check(l2b_table_write_csv(table, table_path.c_str()));
  std::printf("rows %ld\ntable %s\n", l2b_table_rows(table), table_path.c_str());

  const std::uint64_t seed = spec.value("master_seed", std::uint64_t{1});
  write_manifest(o.out_dir, o.prefix, "simulate", seed, json::parse(resolved), inputs,
                 {table_path});
  l2b_table_free(table);
  return 0;
}

struct curve_options {
  std::string spec_file;
  std::string preset;
  long reps = -1;
  long long seed = -1;
  long max_steps = -1;
  int workers = 1;
  std::string out_dir = ".";
  std::string prefix = "curve";
};

int cmd_curve(const curve_options& o) {
  if (o.spec_file.empty() == o.preset.empty())
    usage_error("pass exactly one of --spec or --preset");
  std::string text;
  std::vector<std::string> inputs;
  if (!o.preset.empty()) {
    char* preset = nullptr;
    check(l2b_preset_json(o.preset.c_str(), &preset));
    text = owned_string(preset);
  } else {
    text = read_file(o.spec_file);
    inputs.push_back(o.spec_file);
  }

  json spec;
  try {
    spec = json::parse(text);
  } catch (const json::exception& e) {
    usage_error(std::string("spec JSON: ") + e.what());
  }
  if (o.reps >= 0) spec["repetitions"] = o.reps;
  if (o.seed >= 0) spec["master_seed"] = static_cast<std::uint64_t>(o.seed);
  if (o.max_steps >= 0) spec["max_steps"] = o.max_steps;
  text = spec.dump(2);

  char* resolved_raw = nullptr;
  check(l2b_curve_resolved_json(text.c_str(), &resolved_raw));
  const std::string resolved = owned_string(resolved_raw);

  l2b_curve* curve = nullptr;
  check(l2b_step_curve_json(text.c_str(), o.workers, &curve));

  const std::string curve_path = join_path(o.out_dir, o.prefix + ".csv");
  check(l2b_curve_write_csv(curve, curve_path.c_str()));

  double ols = 0.0, lasso = 0.0, ratio_mse = 0.0, ratio_step = 0.0;
  check(l2b_curve_refs(curve, &ols, &lasso, &ratio_mse, &ratio_step));
  long best_m = 0;
  double best = std::numeric_limits<double>::infinity();
  for (long m = 0; m < l2b_curve_len(curve); ++m) {
    double out = 0.0;
    check(l2b_curve_point(curve, m, nullptr, &out));
    if (out < best) {
      best = out;
      best_m = m;
    }
  }
  std::printf("curve %s\n", curve_path.c_str());
  std::printf("min_mse_out %s at m=%ld\n", g12(best).c_str(), best_m);
  if (!std::isnan(ratio_mse))
    std::printf("ratio_stop_step %s\nratio_stop_mse %s\n", g12(ratio_step).c_str(),
                g12(ratio_mse).c_str());
  if (!std::isnan(ols)) std::printf("ols_ref %s\n", g12(ols).c_str());
  if (!std::isnan(lasso)) std::printf("lasso_ref %s\n", g12(lasso).c_str());

  const std::uint64_t seed = spec.value("master_seed", std::uint64_t{1});
  write_manifest(o.out_dir, o.prefix, "curve", seed, json::parse(resolved), inputs, {curve_path});
  l2b_curve_free(curve);
  return 0;
}

struct theory_options {
  double c_min = 0.0;
  double c_max = 0.7;
  double c_step = 0.05;
  std::string out;
  std::string out_dir = ".";
  std::string prefix = "theory";
};

int cmd_theory(const theory_options& o) {
  if (!(o.c_step > 0.0)) usage_error("--c-step must be positive");
  std::string text = "c,mu_a,mu_e,zeta_star,lambda_star,rate\n";
  for (double c = o.c_min; c <= o.c_max + 1e-12; c += o.c_step) {
    double mu_a = 0.0, mu_e = 0.0, zeta = 0.0, lambda = 0.0, rate = 0.0;
    const int status = l2b_theory_constants(c, &mu_a, &mu_e, &zeta, &lambda, &rate);
    if (status == L2B_OK)
      text += g12(c) + "," + g12(mu_a) + "," + g12(mu_e) + "," + g12(zeta) + "," + g12(lambda) +
              "," + g12(rate) + "\n";
    else
      text += g12(c) + ",,,,,\n"; // out of the tabulated domain: reported, not failed
  }
  std::fputs(text.c_str(), stdout);
  if (!o.out.empty()) {
    write_text(o.out, text);
    write_manifest(o.out_dir, o.prefix, "theory", 0,
                   json{{"c_min", o.c_min}, {"c_max", o.c_max}, {"c_step", o.c_step}}, {},
                   {o.out});
  }
  return 0;
}

struct eigen_options {
  std::string data;
  std::string response;
  long s_max = 0;
  long budget = 20000;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string prefix = "eigen";
};

int cmd_eigen(const eigen_options& o) {
  l2b_dataset* ds = nullptr;
  check(l2b_dataset_from_csv(o.data.c_str(), o.response.c_str(), 1, &ds));
  const long p = static_cast<long>(l2b_dataset_cols(ds));
  const long s_max = o.s_max > 0 ? o.s_max : std::min<long>(10, p);

  l2b_eigen* report = nullptr;
  check(l2b_eigen_scan(ds, s_max, o.budget, o.seed, &report));

  const std::string out = join_path(o.out_dir, o.prefix + ".csv");
  check(l2b_eigen_write_csv(report, out.c_str()));
  std::printf("p %ld\ns_max %ld\nc %s\ndegenerate %d\nexhaustive_sizes %ld\nreport %s\n", p,
              s_max, g12(l2b_eigen_c(report)).c_str(), l2b_eigen_degenerate(report),
              l2b_eigen_sizes(report), out.c_str());

  write_manifest(o.out_dir, o.prefix, "eigen", o.seed,
                 json{{"data", o.data},
                      {"response", o.response},
                      {"s_max", s_max},
                      {"budget", o.budget}},
                 {o.data}, {out});
  return 0;
}

struct pga_options {
  std::string preset;
  long size = 16;
  long n = 0, p = 0, s = 4;
  bool toeplitz = false;
  long max_steps = 30;
  long s_max = 0;
  long budget = 20000;
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  double delta = 0.05;
  std::string out_dir = ".";
  std::string prefix = "pga";
};

int cmd_pga(const pga_options& o) {
  l2b_dataset* ds = nullptr;
  json config{{"max_steps", o.max_steps}, {"budget", o.budget},
              {"tolerance", o.tolerance}, {"delta", o.delta}};

  if (o.preset == "orthonormal") {
    if (o.size < 2 || o.s < 1 || o.s > o.size) usage_error("need 2 <= s <= size");
    const std::vector<double> design = helmert_design(o.size);
    std::vector<double> beta(static_cast<size_t>(o.size), 0.0);
    for (long j = 0; j < o.s; ++j) beta[static_cast<size_t>(j)] = static_cast<double>(o.s - j);
    check(l2b_pga_dataset(design.data(), static_cast<size_t>(o.size + 1),
                          static_cast<size_t>(o.size), beta.data(), &ds));
    config["preset"] = "orthonormal";
    config["size"] = o.size;
    config["s"] = o.s;
  } else if (o.preset == "random") {
    if (o.n < 2 || o.p < 1) usage_error("--random needs --n and --p");
    check(l2b_pga_random(o.n, o.p, o.s, o.toeplitz ? 1 : 0, o.seed, &ds));
    config["preset"] = "random";
    config["n"] = o.n;
    config["p"] = o.p;
    config["s"] = o.s;
    config["toeplitz"] = o.toeplitz;
  } else {
    usage_error("pass --preset orthonormal or --preset random");
  }

  l2b_path* path = nullptr;
  check(l2b_fit(ds, L2B_PLAIN, 1.0, o.max_steps, nullptr, &path));

  const long p = static_cast<long>(l2b_dataset_cols(ds));
  const long s_max = o.s_max > 0 ? o.s_max : std::min<long>(10, p);
  l2b_eigen* report = nullptr;
  check(l2b_eigen_scan(ds, s_max, o.budget, o.seed, &report));

  l2b_bounds* bounds = nullptr;
  check(l2b_check_bounds(ds, path, report, o.tolerance, o.delta, 0.0, &bounds));

  const std::string path_csv = join_path(o.out_dir, o.prefix + "_path.csv");
  const std::string eigen_csv = join_path(o.out_dir, o.prefix + "_eigen.csv");
  const std::string bounds_csv = join_path(o.out_dir, o.prefix + "_bounds.csv");
  check(l2b_path_write_csv(path, path_csv.c_str()));
  check(l2b_eigen_write_csv(report, eigen_csv.c_str()));
  check(l2b_bounds_write_csv(bounds, bounds_csv.c_str()));

  std::printf("models %ld\nc %s\n", l2b_path_models(path), g12(l2b_eigen_c(report)).c_str());
  for (long i = 0; i < l2b_bounds_count(bounds); ++i) {
    int violated = 0, advisory = 0;
    long skipped = 0;
    double slack = 0.0;
    check(l2b_bounds_flags(bounds, i, &violated, &advisory, &skipped, &slack));
    std::printf("bound %s %s%s worst_slack %s skipped %ld\n", l2b_bounds_name(bounds, i),
                violated ? "VIOLATED" : "holds", advisory ? " (advisory)" : "",
                g12(slack).c_str(), skipped);
  }

  config["s_max"] = s_max;
  write_manifest(o.out_dir, o.prefix, "pga-analyze", o.seed, config, {},
                 {path_csv, eigen_csv, bounds_csv});
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"componentwise boosting toolkit"};
  app.set_version_flag("--version", l2b_version());
  app.require_subcommand(1);

  fit_options fo;
  auto* fit = app.add_subcommand("fit", "fit one model to a CSV dataset");
  fit->add_option("--data", fo.data, "input CSV")->required();
  fit->add_option("--response", fo.response, "response column name")->required();
  fit->add_option("--method", fo.method, "ba | post-ba | oba | lasso | post-lasso");
  fit->add_option("--stop", fo.stop, "none | fixed | ks | ratio | oracle | vbound");
  fit->add_option("--penalty", fo.penalty, "plugin | cv");
  fit->add_option("--lambda", fo.lambda, "explicit lasso penalty (overrides --penalty)");
  fit->add_option("--nu", fo.nu, "step shrinkage in (0, 1]");
  fit->add_option("--max-steps", fo.max_steps, "step cap");
  fit->add_option("--m", fo.m_fixed, "steps for --stop fixed");
  fit->add_option("--k", fo.k, "multiple for --stop ks");
  fit->add_option("--s", fo.s, "sparsity for --stop ks/vbound");
  fit->add_option("--cu", fo.cu, "ratio-rule constant");
  fit->add_option("--eta", fo.eta, "vbound multiplier");
  fit->add_option("--lambda-n", fo.lambda_n, "vbound noise level");
  fit->add_option("--c", fo.c, "eigenvalue constant for vbound");
  fit->add_option("--alpha", fo.alpha, "plugin penalty level");
  fit->add_option("--folds", fo.folds, "cv folds");
  fit->add_option("--grid", fo.grid, "cv grid size");
  fit->add_option("--test-frac", fo.test_frac, "holdout fraction in [0, 1)");
  fit->add_option("--seed", fo.seed, "split seed");
  fit->add_option("--out-dir", fo.out_dir, "output directory");
  fit->add_option("--prefix", fo.prefix, "output file prefix");

  simulate_options so;
  auto* simulate = app.add_subcommand("simulate", "run a Monte-Carlo experiment table");
  simulate->add_option("--spec", so.spec_file, "experiment spec JSON file");
  simulate->add_option("--preset", so.preset, "canned spec (table3)");
  simulate->add_option("--reps", so.reps, "override repetitions");
  simulate->add_option("--seed", so.seed, "override master seed");
  simulate->add_option("--workers", so.workers, "worker threads");
  simulate->add_option("--out-dir", so.out_dir, "output directory");
  simulate->add_option("--prefix", so.prefix, "output file prefix");

  curve_options co;
  auto* curve = app.add_subcommand("curve", "mean MSE by boosting step");
  curve->add_option("--spec", co.spec_file, "curve spec JSON file");
  curve->add_option("--preset", co.preset, "canned spec (illustrative)");
  curve->add_option("--reps", co.reps, "override repetitions");
  curve->add_option("--seed", co.seed, "override master seed");
  curve->add_option("--max-steps", co.max_steps, "override step range");
  curve->add_option("--workers", co.workers, "worker threads");
  curve->add_option("--out-dir", co.out_dir, "output directory");
  curve->add_option("--prefix", co.prefix, "output file prefix");

  theory_options to;
  auto* theory = app.add_subcommand("theory", "constants table over a c grid");
  theory->add_option("--c-min", to.c_min, "grid start");
  theory->add_option("--c-max", to.c_max, "grid end");
  theory->add_option("--c-step", to.c_step, "grid step");
  theory->add_option("--out", to.out, "also write the table to this CSV file");
  theory->add_option("--out-dir", to.out_dir, "manifest directory");
  theory->add_option("--prefix", to.prefix, "manifest prefix");

  eigen_options eo;
  auto* eigen = app.add_subcommand("eigen", "restricted eigenvalue scan of a CSV design");
  eigen->add_option("--data", eo.data, "input CSV")->required();
  eigen->add_option("--response", eo.response, "response column to exclude (optional)");
  eigen->add_option("--s-max", eo.s_max, "largest submatrix size (default min(10, p))");
  eigen->add_option("--budget", eo.budget, "subsets per size before sampling");
  eigen->add_option("--seed", eo.seed, "sampling seed");
  eigen->add_option("--out-dir", eo.out_dir, "output directory");
  eigen->add_option("--prefix", eo.prefix, "output file prefix");

  pga_options po;
  auto* pga = app.add_subcommand("pga-analyze", "noiseless greedy path against its bounds");
  pga->add_option("--preset", po.preset, "orthonormal | random")->required();
  pga->add_option("--size", po.size, "orthonormal: number of columns");
  pga->add_option("--n", po.n, "random: rows");
  pga->add_option("--p", po.p, "random: columns");
  pga->add_option("--s", po.s, "true support size");
  pga->add_flag("--toeplitz", po.toeplitz, "random: correlated design");
  pga->add_option("--max-steps", po.max_steps, "greedy steps");
  pga->add_option("--s-max", po.s_max, "eigen scan size cap");
  pga->add_option("--budget", po.budget, "eigen scan budget");
  pga->add_option("--seed", po.seed, "design seed");
  pga->add_option("--tolerance", po.tolerance, "bound tolerance");
  pga->add_option("--delta", po.delta, "slack for asymptotic statements");
  pga->add_option("--out-dir", po.out_dir, "output directory");
  pga->add_option("--prefix", po.prefix, "output file prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (fit->parsed()) return cmd_fit(fo);
  if (simulate->parsed()) return cmd_simulate(so);
  if (curve->parsed()) return cmd_curve(co);
  if (theory->parsed()) return cmd_theory(to);
  if (eigen->parsed()) return cmd_eigen(eo);
  if (pga->parsed()) return cmd_pga(po);
  return 2;
}
