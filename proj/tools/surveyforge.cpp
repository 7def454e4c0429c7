// surveyforge command line tool.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "surveyforge/agreement.hpp"
#include "surveyforge/corpus_io.hpp"
#include "surveyforge/errors.hpp"
#include "surveyforge/pipeline.hpp"
#include "surveyforge/text.hpp"

namespace sf = surveyforge;
namespace pl = surveyforge::pipeline;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2 };

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  bool quiet = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

pl::PipelineConfig load_settings(const Globals& g) {
  pl::PipelineConfig config;
  if (!g.config.empty()) {
    auto result = pl::load_config(g.config);
    if (!result.ok()) {
      std::string msg = "invalid config " + g.config;
      for (const auto& d : result.diagnostics) msg += "\n  " + d.to_string();
      throw UsageError(msg);
    }
    config = std::move(result.config);
  }
  if (g.seed) config.seed = *g.seed;
  if (g.jobs) config.jobs = *g.jobs;
  return config;
}

void check(const pl::PipelineConfig& config) {
  const auto problems = pl::check_ranges(config);
  if (problems.empty()) return;
  std::string msg = "invalid settings";
  for (const auto& d : problems) msg += "\n  " + d.to_string();
  throw UsageError(msg);
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  pl::write_file_atomic(path, content);
}

std::vector<sf::corpus::SurveyExample> read_input(const std::string& path) {
  if (path.empty() || path == "-") return sf::corpus::read_corpus(std::cin);
  return sf::corpus::read_corpus(fs::path(path));
}

template <typename E, typename Parse>
E parse_choice(const std::string& flag, const std::string& value, Parse parse) {
  if (auto v = parse(value)) return *v;
  throw UsageError("invalid value for " + flag + ": " + value);
}

std::vector<std::vector<std::string>> read_ratings(std::istream& in) {
  std::vector<std::vector<std::string>> items;
  std::string line;
  while (std::getline(in, line)) {
    for (char& c : line) {
      if (c == ',' || c == '\t') c = ' ';
    }
    std::istringstream ss(line);
    std::vector<std::string> labels;
    for (std::string label; ss >> label;) labels.push_back(label);
    if (!labels.empty()) items.push_back(std::move(labels));
  }
  return items;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured extractive summarization of reference-paper abstracts"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "Pipeline config file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Seed for the dataset split");
  app.add_option("--jobs", g.jobs, "Worker threads per stage")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", g.quiet, "Suppress progress output");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Build a corpus file from raw per-topic folders");
  std::string raw_dir, ingest_out, subset = "mds";
  bool abs_include_abstract = false;
  std::int64_t ingest_body_limit = sf::corpus::kShortBodyWords;
  ingest->add_option("--raw", raw_dir, "Directory of topic folders")->required()->check(CLI::ExistingDirectory);
  ingest->add_option("--out", ingest_out, "Output corpus file");
  ingest->add_option("--subset", subset, "mds or abs")->check(CLI::IsMember({"mds", "abs"}));
  ingest->add_option("--body-limit", ingest_body_limit, "Body words kept for the abs subset");
  ingest->add_flag("--abs-include-abstract", abs_include_abstract,
                   "Prepend the survey abstract to abs-subset inputs");

  // preprocess
  auto* preprocess = app.add_subcommand("preprocess", "Truncate, filter and split a corpus");
  std::string pre_in, pre_out;
  std::optional<std::size_t> max_docs, max_doc_words, min_input, min_target;
  preprocess->add_option("--in", pre_in, "Input corpus")->required();
  preprocess->add_option("--out", pre_out, "Output corpus");
  preprocess->add_option("--max-docs", max_docs, "Documents kept per example");
  preprocess->add_option("--max-doc-words", max_doc_words, "Words kept per document");
  preprocess->add_option("--min-input-words", min_input, "Drop examples with fewer input words");
  preprocess->add_option("--min-target-words", min_target, "Drop examples with fewer target words");

  // train-classifier
  auto* train = app.add_subcommand("train-classifier", "Train a sentence category classifier");
  std::string train_mode, train_file, train_out;
  std::optional<double> smoothing;
  train->add_option("--mode", train_mode, "ssc or scc")->check(CLI::IsMember({"ssc", "scc"}));
  train->add_option("--train", train_file, "Labeled-sentence file")->required()->check(CLI::ExistingFile);
  train->add_option("--smoothing", smoothing, "Additive smoothing");
  train->add_option("--out", train_out, "Model file")->required();

  // classify
  auto* cls = app.add_subcommand("classify", "Label input sentences and build structured targets");
  std::string cls_model, cls_intro_model, cls_in, cls_out;
  cls->add_option("--model", cls_model, "Abstract (ssc) model")->check(CLI::ExistingFile);
  cls->add_option("--intro-model", cls_intro_model, "Introduction (scc) model")->check(CLI::ExistingFile);
  cls->add_option("--in", cls_in, "Input corpus")->required();
  cls->add_option("--out", cls_out, "Labeled corpus");

  // align
  auto* aln = app.add_subcommand("align", "Pair input sentences with target sections");
  std::string aln_mode, aln_in, aln_out;
  bool keep_empty = false;
  aln->add_option("--mode", aln_mode, "ca or one2many")->check(CLI::IsMember({"ca", "one2many"}));
  aln->add_option("--in", aln_in, "Labeled corpus")->required();
  aln->add_option("--out", aln_out, "Pairs file");
  aln->add_flag("--keep-empty-targets", keep_empty, "Keep pairs whose target section is empty");

  // summarize
  auto* sum = app.add_subcommand("summarize", "Extractive structured summaries");
  std::string sum_method, sum_alignment, sum_blocking, sum_in, sum_out;
  std::optional<std::size_t> budget_words;
  sum->add_option("--method", sum_method, "lexrank or textrank")->check(CLI::IsMember({"lexrank", "textrank"}));
  sum->add_option("--alignment", sum_alignment, "ca or one2many")->check(CLI::IsMember({"ca", "one2many"}));
  sum->add_option("--budget-words", budget_words, "Word budget per section")->check(CLI::PositiveNumber);
  sum->add_option("--blocking", sum_blocking, "Trigram blocking on|off")->check(CLI::IsMember({"on", "off"}));
  sum->add_option("--in", sum_in, "Labeled corpus")->required();
  sum->add_option("--out", sum_out, "Summaries file");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "ROUGE of summaries against corpus targets");
  std::string ev_pred, ev_ref, ev_out;
  ev->add_option("--pred", ev_pred, "Summaries file")->required()->check(CLI::ExistingFile);
  ev->add_option("--ref", ev_ref, "Reference corpus")->required()->check(CLI::ExistingFile);
  ev->add_option("--out", ev_out, "Report file");

  // stats
  auto* st = app.add_subcommand("stats", "Corpus statistics and KDE curves");
  std::string st_in, st_out, st_kde, st_target;
  st->add_option("--in", st_in, "Corpus")->required();
  st->add_option("--out", st_out, "Report file");
  st->add_option("--kde-out", st_kde, "KDE CSV file");
  st->add_option("--target", st_target, "auto, mds or abs")->check(CLI::IsMember({"auto", "mds", "abs"}));

  // kappa
  auto* kap = app.add_subcommand("kappa", "Fleiss' kappa of a ratings file");
  std::string kap_in;
  kap->add_option("--in", kap_in, "One item per line, labels separated by spaces or commas")->required();

  auto* defaults = app.add_subcommand("defaults", "Print the default config");

  auto* run = app.add_subcommand("run", "Run the configured pipeline stages");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  std::ostream* log = g.quiet ? nullptr : &std::cerr;
  try {
    auto config = load_settings(g);

    if (*defaults) {
      std::cout << pl::render_config(pl::PipelineConfig{});
      return kOk;
    }

    if (*ingest) {
      sf::corpus::IngestOptions opts;
      opts.subset = subset == "abs" ? sf::corpus::Subset::Abs : sf::corpus::Subset::Mds;
      opts.body_limit = ingest_body_limit;
      opts.abs_include_abstract = abs_include_abstract;
      const auto examples = sf::corpus::ingest_raw_directory(raw_dir, opts);
      write_output(ingest_out, sf::corpus::serialize_corpus(examples));
      if (log) *log << "ingest: " << examples.size() << " examples\n";
      return kOk;
    }

    if (*preprocess) {
      if (max_docs) config.preprocess.caps.max_docs = *max_docs;
      if (max_doc_words) config.preprocess.caps.max_doc_words = *max_doc_words;
      if (min_input) config.preprocess.filter.min_input_words = *min_input;
      if (min_target) config.preprocess.filter.min_target_words = *min_target;
      check(config);
      pl::PreprocessLog plog;
      const auto examples = pl::preprocess_corpus(read_input(pre_in), config.preprocess, config.seed, &plog);
      write_output(pre_out, sf::corpus::serialize_corpus(examples));
      if (log) {
        *log << "preprocess: read " << plog.read << ", kept " << plog.kept << '\n';
        for (const auto& [id, why] : plog.dropped) *log << "  dropped " << id << ": " << why << '\n';
      }
      return kOk;
    }

    if (*train) {
      if (!train_mode.empty()) config.classifier.mode = *sf::classify::parse_mode(train_mode);
      if (smoothing) config.classifier.smoothing = *smoothing;
      check(config);
      const auto model = pl::train_model(sf::corpus::read_training_sentences(fs::path(train_file)),
                                         config.classifier.mode, config.classifier.smoothing);
      pl::write_file_atomic(train_out, model.to_json().dump(1) + "\n");
      return kOk;
    }

    if (*cls) {
      std::optional<sf::classify::ClassifierModel> ssc, scc;
      if (!cls_model.empty()) ssc = sf::classify::ClassifierModel::load(cls_model);
      if (!cls_intro_model.empty()) scc = sf::classify::ClassifierModel::load(cls_intro_model);
      const auto examples = pl::classify_corpus(read_input(cls_in), ssc ? &*ssc : nullptr,
                                                scc ? &*scc : nullptr, config.jobs);
      write_output(cls_out, sf::corpus::serialize_corpus(examples));
      return kOk;
    }

    if (*aln) {
      if (!aln_mode.empty()) config.summarizer.alignment = *sf::align::parse_mode(aln_mode);
      if (keep_empty) config.keep_empty_targets = true;
      write_output(aln_out, pl::align_corpus(read_input(aln_in), config.summarizer.alignment,
                                             config.summarizer.fallback, config.keep_empty_targets,
                                             config.jobs));
      return kOk;
    }

    if (*sum) {
      auto& s = config.summarizer;
      if (!sum_method.empty()) s.method = *sf::summarize::parse_method(sum_method);
      if (!sum_alignment.empty()) s.alignment = *sf::align::parse_mode(sum_alignment);
      if (budget_words) s.budget.max_words = *budget_words;
      if (!sum_blocking.empty()) s.trigram_blocking = sum_blocking == "on";
      check(config);
      write_output(sum_out, pl::serialize_summaries(pl::summarize_corpus(read_input(sum_in), s, config.jobs)));
      return kOk;
    }

    if (*ev) {
      std::ifstream pred(ev_pred);
      if (!pred) throw sf::FormatError("cannot open " + ev_pred);
      const auto report = pl::evaluate_summaries(pl::parse_summaries(pred), sf::corpus::read_corpus(fs::path(ev_ref)));
      write_output(ev_out, report.dump(2) + "\n");
      return kOk;
    }

    if (*st) {
      if (!st_target.empty()) {
        config.stats.target = st_target == "mds"   ? sf::eval::TargetChoice::Mds
                              : st_target == "abs" ? sf::eval::TargetChoice::Abs
                                                   : sf::eval::TargetChoice::Auto;
      }
      const auto examples = read_input(st_in);
      if (examples.empty()) throw sf::InvalidArgument("no examples");
      const auto report = sf::eval::corpus_stats(examples, {config.stats.target, config.jobs});
      write_output(st_out, pl::stats_to_json(report).dump(2) + "\n");
      if (!st_kde.empty()) pl::write_file_atomic(st_kde, pl::kde_csv(report, config.stats.grid_size));
      return kOk;
    }

    if (*kap) {
      std::vector<std::vector<std::string>> items;
      if (kap_in == "-") {
        items = read_ratings(std::cin);
      } else {
        std::ifstream in(kap_in);
        if (!in) throw sf::FormatError("cannot open " + kap_in);
        items = read_ratings(in);
      }
      const auto table = sf::eval::AgreementTable::from_ratings(items);
      nlohmann::ordered_json j;
      j["items"] = table.items();
      j["raters"] = table.raters_per_item();
      j["categories"] = table.labels();
      j["kappa"] = sf::eval::fleiss_kappa(table);
      std::cout << j.dump(2) << '\n';
      return kOk;
    }

    if (*run) {
      const auto result = pl::run_pipeline(config, log);
      return result.exit_code == 0 ? kOk : kFailure;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
