/*
 * Copyright 2026 The ecod-cpp Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// ecod: fit, score, explain, eval and bench from the command line.
//
// Exit status: 0 success, 1 invalid arguments or data, 2 I/O failure.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ecod/bench.h"
#include "ecod/dataset.h"
#include "ecod/ecdf.h"
#include "ecod/error.h"
#include "ecod/eval.h"
#include "ecod/scoring.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitIo = 2;

constexpr char kFormatsHelp[] = R"(File formats:
  CSV input   comma-separated decimal numbers, '.' decimal point, one row per
              sample. A header row is expected unless --no-header is given.
              With --label, that column (name or 0-based index) holds 0/1 or
              no/yes and is excluded from the features.
  ARFF input  files ending in .arff: numeric/real/integer attributes plus one
              nominal label attribute (--label, default "outlier"); values
              yes/outlier/anomaly map to 1.
  Model       .json writes a JSON document, any other extension the binary
              format (magic ECODMDL, version 1).
  Scores      CSV "id,final,left_only,right_only,auto" (or JSON via --format).
  Explain     JSON {sample, band_percentile, final, dimensions:[{dim, name,
              score, band, flagged}]}.
  Eval        long CSV "dataset,variant,trial,roc,ap" (trial "mean" rows
              hold averages) or a Markdown summary (.md).
  Bench       CSV "n,d,workers,fit_s,score_s,total_s,checksum,status" or the
              long format "n,d,workers,phase,seconds" (--format long).
Exit status: 0 success, 1 invalid arguments or data, 2 I/O error.)";

struct InputFlags {
  std::string input;
  std::string label;
  bool no_header = false;
};

void AddInputFlags(CLI::App* cmd, InputFlags& f) {
  cmd->add_option("--input,-i", f.input, "Input data (.csv or .arff)")
      ->required();
  cmd->add_option("--label", f.label,
                  "Label column to drop from the features (CSV) or label "
                  "attribute (ARFF)");
  cmd->add_flag("--no-header", f.no_header, "CSV input has no header row");
}

bool IsArff(const std::string& path) {
  std::string ext = fs::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".arff";
}

std::string Extension(const std::string& path) {
  std::string ext = fs::path(path).extension().string();
  if (!ext.empty()) ext.erase(0, 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// Explicit --format wins over the output file extension.
std::string ResolveFormat(const std::string& format, const std::string& path,
                          const std::string& fallback) {
  if (!format.empty()) return format;
  const std::string ext = Extension(path);
  return ext.empty() ? fallback : ext;
}

ecod::ColumnRef ParseColumnRef(const std::string& s) {
  if (!s.empty() &&
      std::all_of(s.begin(), s.end(),
                  [](unsigned char c) { return std::isdigit(c); })) {
    return static_cast<std::size_t>(std::stoull(s));
  }
  return s;
}

ecod::LabeledDataset LoadLabeled(const InputFlags& f,
                                 const std::string& default_label) {
  const std::string label = f.label.empty() ? default_label : f.label;
  if (IsArff(f.input)) {
    ecod::ArffOptions options;
    options.label_attribute = f.label.empty() ? "outlier" : f.label;
    return ecod::LoadArff(f.input, options);
  }
  return ecod::LoadLabeledCsv(f.input, {.has_header = !f.no_header},
                              ParseColumnRef(label));
}

ecod::Dataset LoadFeatures(const InputFlags& f) {
  if (IsArff(f.input) || !f.label.empty()) return LoadLabeled(f, "").data;
  return ecod::LoadCsv(f.input, {.has_header = !f.no_header});
}

ecod::Variant ParseVariantOrThrow(const std::string& name) {
  const auto v = ecod::ParseVariant(name);
  if (!v) {
    throw ecod::DataError("unknown variant '" + name +
                          "' (expected left, right, both, auto or ecod)");
  }
  return *v;
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ecod::IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ecod::IoError("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------

struct FitArgs {
  InputFlags in;
  std::string model;
  std::size_t workers = 1;
};

int CmdFit(const FitArgs& a) {
  const ecod::Dataset data = LoadFeatures(a.in);
  const ecod::EcdfModel model = ecod::Fit(data, a.workers);
  ecod::SaveModel(model, a.model);
  std::size_t left = 0;
  for (const auto& dm : model.dims()) left += dm.use_left_tail() ? 1 : 0;
  std::cout << "n=" << data.n() << " d=" << data.d() << '\n';
  std::cout << "tail selection: " << left << " left, " << (data.d() - left)
            << " right\n";
  for (std::size_t j = 0; j < data.d(); ++j) {
    const auto& dm = model.dim(j);
    std::cout << "  " << data.column_name(j) << " skewness=" << dm.skewness()
              << " tail=" << (dm.use_left_tail() ? "left" : "right") << '\n';
  }
  std::cout << "model written to " << a.model << '\n';
  return kExitOk;
}

struct ScoreArgs {
  InputFlags in;
  std::string model;
  std::string variant = "ecod";
  std::size_t workers = 1;
  std::string output;
  std::string format;
};

int CmdScore(const ScoreArgs& a) {
  const ecod::Variant variant = ParseVariantOrThrow(a.variant);
  const std::string format = ResolveFormat(a.format, a.output, "csv");
  if (format != "csv" && format != "json") {
    throw ecod::DataError("unsupported score format '" + format + "'");
  }
  const ecod::EcdfModel model = ecod::LoadModel(a.model);
  const ecod::Dataset data = LoadFeatures(a.in);
  const ecod::ScoreReport report =
      ecod::Score(model, data, variant, {a.workers});
  if (format == "csv") {
    ecod::WriteScoreCsv(report, a.output);
  } else {
    nlohmann::json doc;
    doc["variant"] = std::string(ecod::VariantName(variant));
    doc["final"] = report.final;
    doc["left_only"] = report.left_only;
    doc["right_only"] = report.right_only;
    doc["auto"] = report.auto_score;
    WriteText(a.output, doc.dump() + "\n");
  }
  return kExitOk;
}

struct ExplainArgs {
  InputFlags in;
  std::string model;
  std::string variant = "ecod";
  std::size_t sample = 0;
  double band = 0.99;
  std::string output;
};

int CmdExplain(const ExplainArgs& a) {
  const ecod::Variant variant = ParseVariantOrThrow(a.variant);
  if (!(a.band > 0.0 && a.band < 1.0)) {
    throw ecod::DataError("--band must lie in (0, 1)");
  }
  const ecod::EcdfModel model = ecod::LoadModel(a.model);
  const ecod::Dataset data = LoadFeatures(a.in);
  const ecod::ScoreReport report = ecod::Score(model, data, variant);
  const ecod::Explanation e = ecod::Explain(report, a.sample, a.band);
  std::vector<std::string> names;
  for (std::size_t j = 0; j < data.d(); ++j) {
    names.push_back(data.column_name(j));
  }
  const std::string json = ecod::ExplanationJson(e, names) + "\n";
  if (a.output.empty()) {
    std::cout << json;
  } else {
    WriteText(a.output, json);
  }
  return kExitOk;
}

struct EvalArgs {
  std::vector<std::string> inputs;
  std::string label;
  bool no_header = false;
  std::size_t trials = 10;
  double train_frac = 0.6;
  std::string variants = "left,right,both,ecod";
  std::uint64_t seed = 42;
  std::size_t workers = 1;
  std::string output;
  std::string summary;
  std::string format;
};

int CmdEval(const EvalArgs& a) {
  ecod::SplitSpec spec{a.train_frac, a.seed, a.trials};
  spec.Validate();
  std::vector<ecod::Variant> variants;
  for (const std::string& tok : CLI::detail::split(a.variants, ',')) {
    const std::string t = CLI::detail::trim_copy(tok);
    if (!t.empty()) variants.push_back(ParseVariantOrThrow(t));
  }
  if (variants.empty()) throw ecod::DataError("--variants is empty");
  const std::string format = ResolveFormat(a.format, a.output, "csv");
  if (format != "csv" && format != "md") {
    throw ecod::DataError("unsupported eval format '" + format + "'");
  }

  std::vector<ecod::EvalResult> all;
  for (const std::string& path : a.inputs) {
    InputFlags f{path, a.label, a.no_header};
    const ecod::LabeledDataset ds = LoadLabeled(f, "label");
    ecod::TrialOptions options;
    options.dataset_name = fs::path(path).stem().string();
    options.workers = a.workers;
    auto results = ecod::RunTrials(ds, spec, variants, options);
    for (const auto& r : results) {
      std::cout << r.dataset_name << ' ' << ecod::VariantName(r.variant)
                << " roc=" << r.mean_roc << " ap=" << r.mean_ap << '\n';
    }
    all.insert(all.end(), results.begin(), results.end());
  }
  const ecod::EvalReportHeader header{a.seed, a.trials, a.train_frac};
  if (format == "csv") {
    ecod::WriteEvalCsv(all, header, a.output);
  } else {
    WriteText(a.output, ecod::EvalMarkdown(all, header));
  }
  if (!a.summary.empty()) {
    WriteText(a.summary, ecod::EvalMarkdown(all, header));
  }
  return kExitOk;
}

struct BenchArgs {
  std::string grid;
  std::size_t workers = 1;
  std::uint64_t seed = 42;
  std::string output;
  std::string format;
  std::uint64_t memory_limit_mb = 0;
  bool no_warmup = false;
};

// "1000x10,10000x100" -> cells; empty -> the default grid.
std::vector<std::pair<std::size_t, std::size_t>> ParseGrid(
    const std::string& grid) {
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  if (grid.empty()) {
    for (std::size_t n : ecod::kDefaultGridN) {
      for (std::size_t d : ecod::kDefaultGridD) cells.emplace_back(n, d);
    }
    return cells;
  }
  for (const std::string& tok : CLI::detail::split(grid, ',')) {
    const std::string t = CLI::detail::trim_copy(tok);
    const std::size_t x = t.find_first_of("xX");
    std::size_t n = 0;
    std::size_t d = 0;
    try {
      if (x == std::string::npos) throw std::invalid_argument(t);
      std::size_t used_n = 0;
      std::size_t used_d = 0;
      const std::string ns = t.substr(0, x);
      const std::string ds = t.substr(x + 1);
      n = std::stoull(ns, &used_n);
      d = std::stoull(ds, &used_d);
      if (used_n != ns.size() || used_d != ds.size()) {
        throw std::invalid_argument(t);
      }
    } catch (const std::logic_error&) {
      throw ecod::DataError("bad grid cell '" + t + "' (expected NxD)");
    }
    if (n == 0 || d == 0) {
      throw ecod::DataError("grid cell '" + t + "' must be positive");
    }
    cells.emplace_back(n, d);
  }
  return cells;
}

int CmdBench(const BenchArgs& a) {
  if (a.workers == 0) throw ecod::DataError("--workers must be >= 1");
  const std::string format = ResolveFormat(a.format, a.output, "csv");
  if (format != "csv" && format != "long") {
    throw ecod::DataError("unsupported bench format '" + format + "'");
  }
  ecod::BenchOptions options;
  options.workers = a.workers;
  options.seed = a.seed;
  options.warmup = !a.no_warmup;
  options.memory_limit_bytes = a.memory_limit_mb << 20;
  std::vector<ecod::BenchRecord> records;
  for (const auto& [n, d] : ParseGrid(a.grid)) {
    const std::size_t ns[] = {n};
    const std::size_t ds[] = {d};
    for (auto& r : ecod::RunGrid(ns, ds, options)) {
      if (r.skipped) {
        std::cerr << "warning: skipped n=" << r.n << " d=" << r.d << ": "
                  << r.note << '\n';
      } else {
        std::cout << "n=" << r.n << " d=" << r.d << " workers=" << r.workers
                  << " total=" << r.total_seconds << "s\n";
      }
      records.push_back(std::move(r));
    }
  }
  if (format == "csv") {
    ecod::WriteBenchCsv(records, a.seed, a.output);
  } else {
    ecod::WriteBenchLong(records, a.seed, a.output);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ECOD: outlier detection with empirical cumulative "
               "distribution functions"};
  app.require_subcommand(1);
  app.footer(kFormatsHelp);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model and save it");
  AddInputFlags(fit_cmd, fit.in);
  fit_cmd->add_option("--model,-m", fit.model, "Model output path")
      ->required();
  fit_cmd->add_option("--workers", fit.workers, "Worker threads")
      ->check(CLI::PositiveNumber);

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Score data with a model");
  AddInputFlags(score_cmd, score.in);
  score_cmd->add_option("--model,-m", score.model, "Model file")->required();
  score_cmd
      ->add_option("--variant", score.variant,
                   "left, right, both, auto or ecod")
      ->capture_default_str();
  score_cmd->add_option("--workers", score.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  score_cmd->add_option("--output,-o", score.output, "Score file")
      ->required();
  score_cmd->add_option("--format", score.format, "csv or json");

  ExplainArgs explain;
  auto* explain_cmd =
      app.add_subcommand("explain", "Per-dimension scores for one sample");
  AddInputFlags(explain_cmd, explain.in);
  explain_cmd->add_option("--model,-m", explain.model, "Model file")
      ->required();
  explain_cmd->add_option("--sample", explain.sample, "0-based row index")
      ->required();
  explain_cmd->add_option("--band", explain.band, "Band percentile in (0,1)")
      ->capture_default_str();
  explain_cmd
      ->add_option("--variant", explain.variant,
                   "Variant whose per-dimension terms are shown")
      ->capture_default_str();
  explain_cmd->add_option("--output,-o", explain.output,
                          "JSON output (default: stdout)");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand(
      "eval", "Repeated train/test evaluation with ROC and AP");
  eval_cmd->add_option("--input,-i", eval.inputs, "Labeled datasets")
      ->required();
  eval_cmd->add_option(
      "--label", eval.label,
      "Label column (CSV, default \"label\") or attribute (ARFF, default "
      "\"outlier\")");
  eval_cmd->add_flag("--no-header", eval.no_header,
                     "CSV input has no header row");
  eval_cmd->add_option("--trials", eval.trials, "Independent trials")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--train-frac", eval.train_frac, "Training fraction")
      ->capture_default_str();
  eval_cmd->add_option("--variants", eval.variants, "Comma-separated variants")
      ->capture_default_str();
  eval_cmd->add_option("--seed", eval.seed, "Split seed")
      ->capture_default_str();
  eval_cmd->add_option("--workers", eval.workers, "Trials run in parallel")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--output,-o", eval.output, "Results (.csv or .md)")
      ->required();
  eval_cmd->add_option("--summary", eval.summary, "Markdown summary path");
  eval_cmd->add_option("--format", eval.format, "csv or md");

  BenchArgs bench;
  auto* bench_cmd =
      app.add_subcommand("bench", "Runtime over an (n, d) grid");
  bench_cmd->add_option("--grid", bench.grid,
                        "Cells like 1000x10,10000x100 (default: n in "
                        "{1e3..1e6} x d in {10..1e4})");
  bench_cmd->add_option("--workers", bench.workers, "Worker threads")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Data seed")
      ->capture_default_str();
  bench_cmd->add_option("--output,-o", bench.output, "Results file")
      ->required();
  bench_cmd->add_option("--format", bench.format, "csv or long");
  bench_cmd->add_option("--memory-limit-mb", bench.memory_limit_mb,
                        "Skip cells above this estimate (default: 75% of RAM)");
  bench_cmd->add_flag("--no-warmup", bench.no_warmup, "Skip the warm-up run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitData;
  }

  try {
    if (*fit_cmd) return CmdFit(fit);
    if (*score_cmd) return CmdScore(score);
    if (*explain_cmd) return CmdExplain(explain);
    if (*eval_cmd) return CmdEval(eval);
    if (*bench_cmd) return CmdBench(bench);
  } catch (const ecod::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ecod::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const ecod::ResourceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitData;
}
