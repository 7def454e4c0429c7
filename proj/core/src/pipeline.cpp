#include "surveyforge/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "surveyforge/align.hpp"
#include "surveyforge/errors.hpp"
#include "surveyforge/kde.hpp"
#include "surveyforge/parallel.hpp"
#include "surveyforge/summarize.hpp"
#include "surveyforge/text.hpp"

namespace surveyforge::pipeline {
namespace fs = std::filesystem;

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xf]);
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string file_digest(const fs::path& path) { return sha256_hex(read_file(path)); }

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw FormatError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

// ---------------------------------------------------------------- preprocess

std::vector<corpus::SurveyExample> preprocess_corpus(std::vector<corpus::SurveyExample> examples,
                                                     const PreprocessSettings& settings,
                                                     std::uint64_t seed, PreprocessLog* log) {
  if (examples.empty()) throw StageError("preprocess", "", "no examples");
  std::vector<corpus::SurveyExample> kept;
  PreprocessLog local;
  local.read = examples.size();
  for (auto& ex : examples) {
    auto truncated = corpus::truncate_inputs(std::move(ex), settings.caps);
    const auto decision = corpus::filter_example(truncated, settings.filter);
    if (!decision.keep) {
      local.dropped.emplace_back(truncated.example_id, decision.reason());
      continue;
    }
    kept.push_back(std::move(truncated));
  }
  local.kept = kept.size();
  if (log) *log = local;
  if (kept.empty()) throw StageError("preprocess", "", "no examples left after filtering");
  try {
    kept = corpus::split_dataset(std::move(kept), seed);
  } catch (const InvalidArgument& e) {
    throw StageError("preprocess", "", e.what());
  }
  return kept;
}

// --------------------------------------------------------------------- train

classify::ClassifierModel train_model(const std::vector<corpus::TrainingSentence>& rows,
                                      classify::FeatureMode mode, double smoothing) {
  const auto groups = corpus::group_by_abstract(rows);
  std::vector<std::vector<std::pair<SentenceRecord, Category>>> abstracts;
  abstracts.reserve(groups.size());
  for (const auto& g : groups) {
    auto& a = abstracts.emplace_back();
    for (const auto& row : g) a.emplace_back(row.sentence, row.label);
  }
  return classify::train_on_abstracts(abstracts, mode, smoothing);
}

std::pair<classify::ClassifierModel, classify::ClassifierModel> train_models(
    const std::vector<corpus::TrainingSentence>& rows, double smoothing) {
  return {train_model(rows, classify::FeatureMode::Ssc, smoothing),
          train_model(rows, classify::FeatureMode::Scc, smoothing)};
}

// ------------------------------------------------------------------ classify

std::vector<corpus::SurveyExample> classify_corpus(std::vector<corpus::SurveyExample> examples,
                                                   const classify::ClassifierModel* abstract_model,
                                                   const classify::ClassifierModel* intro_model,
                                                   std::size_t jobs) {
  parallel_for(examples.size(), jobs, [&](std::size_t i) {
    auto& ex = examples[i];
    try {
      for (auto& doc : ex.input_docs) {
        if (doc.labels) continue;
        if (!abstract_model) throw InvalidArgument("document " + doc.doc_id + " has no labels and no abstract model was given");
        std::vector<Category> labels;
        for (const auto& s : classify::classify_abstract(*abstract_model, doc)) labels.push_back(s.category);
        doc.labels = std::move(labels);
      }
      if (ex.intro) {
        std::vector<LabeledSentence> labeled;
        if (ex.intro_labels) {
          labeled = classify::attach_labels(*ex.intro, *ex.intro_labels);
        } else {
          if (!intro_model) throw InvalidArgument("intro has no labels and no intro model was given");
          labeled = classify::classify_intro(*intro_model, *ex.intro);
          std::vector<Category> labels;
          for (const auto& s : labeled) labels.push_back(s.category);
          ex.intro_labels = std::move(labels);
        }
        ex.target_mds = corpus::build_target_sections(labeled);
      }
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError("classify", ex.example_id, e.what());
    }
  });
  return examples;
}

// --------------------------------------------------------------------- align

std::string align_corpus(const std::vector<corpus::SurveyExample>& examples, align::Mode mode,
                         align::EmptyCategoryFallback fallback, bool keep_empty_targets,
                         std::size_t jobs) {
  std::vector<std::string> lines(examples.size());
  parallel_for(examples.size(), jobs, [&](std::size_t i) {
    const auto& ex = examples[i];
    align::AlignedPairs pairs;
    try {
      pairs = align::align_example(ex, mode, fallback);
    } catch (const std::exception& e) {
      throw StageError("align", ex.example_id, e.what());
    }
    std::string out;
    for (const auto& p : pairs) {
      if (!keep_empty_targets && p.target_text.empty()) continue;
      Json j;
      j["example_id"] = ex.example_id;
      j["category"] = std::string(to_string(p.category));
      j["source_text"] = p.source_text;
      j["target_text"] = p.target_text;
      j["fallback_used"] = p.fallback_used;
      out += j.dump(-1, ' ', false, Json::error_handler_t::replace);
      out += '\n';
    }
    lines[i] = std::move(out);
  });
  std::string all;
  for (auto& l : lines) all += l;
  return all;
}

// ----------------------------------------------------------------- summarize

std::vector<SummaryRecord> summarize_corpus(const std::vector<corpus::SurveyExample>& examples,
                                            const summarize::SummarizerOptions& options,
                                            std::size_t jobs) {
  std::vector<SummaryRecord> out(examples.size());
  parallel_for(examples.size(), jobs, [&](std::size_t i) {
    const auto& ex = examples[i];
    SummaryRecord rec;
    rec.example_id = ex.example_id;
    try {
      if (ex.target_mds) {
        auto s = summarize::summarize_structured(ex, options);
        rec.sections = std::move(s.sections);
        rec.combined = std::move(s.combined);
      } else {
        std::vector<SentenceRecord> all;
        for (const auto& d : ex.input_docs) all.insert(all.end(), d.sentences.begin(), d.sentences.end());
        rec.combined = summarize::summarize_section(all, options);
      }
    } catch (const std::exception& e) {
      throw StageError("summarize", ex.example_id, e.what());
    }
    out[i] = std::move(rec);
  });
  return out;
}

std::string serialize_summaries(const std::vector<SummaryRecord>& summaries) {
  std::string out;
  for (const auto& s : summaries) {
    Json j;
    j["example_id"] = s.example_id;
    j["background"] = s.sections.background;
    j["method"] = s.sections.method;
    j["other"] = s.sections.other;
    j["combined"] = s.combined;
    out += j.dump(-1, ' ', false, Json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

std::vector<SummaryRecord> parse_summaries(std::istream& in) {
  std::vector<SummaryRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (normalize_whitespace(line).empty()) continue;
    try {
      const auto j = Json::parse(line);
      SummaryRecord r;
      r.example_id = j.at("example_id").get<std::string>();
      r.sections.background = j.value("background", "");
      r.sections.method = j.value("method", "");
      r.sections.other = j.value("other", "");
      r.combined = j.value("combined", r.sections.combined());
      out.push_back(std::move(r));
    } catch (const Json::exception& e) {
      throw FormatError("summaries line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

// ------------------------------------------------------------------ evaluate

namespace {

Json score_json(const eval::RougeScore& s) {
  return Json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

Json triple_json(const eval::RougeTriple& t) {
  return Json{{"rouge1", score_json(t.r1)}, {"rouge2", score_json(t.r2)}, {"rougeL", score_json(t.rl)}};
}

}  // namespace

Json evaluate_summaries(const std::vector<SummaryRecord>& predictions,
                        const std::vector<corpus::SurveyExample>& references) {
  std::map<std::string, const corpus::SurveyExample*> by_id;
  for (const auto& r : references) by_id.emplace(r.example_id, &r);

  std::vector<eval::StructuredRouge> structured;
  std::vector<eval::RougeTriple> combined;
  Json per_example = Json::array();
  for (const auto& p : predictions) {
    auto it = by_id.find(p.example_id);
    if (it == by_id.end()) throw StageError("evaluate", p.example_id, "no reference example");
    const auto& ref = *it->second;
    Json row;
    row["example_id"] = p.example_id;
    if (ref.target_mds) {
      const auto s = eval::evaluate_structured(p.sections, *ref.target_mds);
      structured.push_back(s);
      combined.push_back(s.combined);
      for (auto c : kAllCoarse) row[std::string(to_string(c))] = triple_json(s.section(c));
      row["combined"] = triple_json(s.combined);
    } else if (ref.target_abs) {
      const auto t = eval::rouge_all(tokenize(p.combined), tokenize(*ref.target_abs));
      combined.push_back(t);
      row["combined"] = triple_json(t);
    } else {
      throw StageError("evaluate", p.example_id, "reference has no target");
    }
    per_example.push_back(std::move(row));
  }

  Json report;
  report["examples"] = predictions.size();
  report["structured_examples"] = structured.size();
  if (!structured.empty()) {
    const auto m = eval::mean(std::span<const eval::StructuredRouge>(structured));
    for (auto c : kAllCoarse) report[std::string(to_string(c))] = triple_json(m.section(c));
  }
  report["combined"] = triple_json(eval::mean(std::span<const eval::RougeTriple>(combined)));
  report["per_example"] = std::move(per_example);
  return report;
}

// --------------------------------------------------------------------- stats

namespace {

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json stats_to_json(const eval::CorpusReport& r) {
  Json j;
  j["pairs"] = r.pairs;
  j["words_doc"] = r.mean_input_words;
  j["sents_doc"] = r.mean_input_sentences;
  j["words_sum"] = r.mean_target_words;
  j["sents_sum"] = r.mean_target_sentences;
  j["input_doc_num"] = r.mean_input_docs;
  j["coverage"] = r.mean_coverage;
  j["density"] = r.mean_density;
  j["compression"] = r.mean_compression;
  Json novel;
  for (std::size_t n = 0; n < eval::kMaxNovelN; ++n) novel[std::to_string(n + 1)] = r.mean_novel_ngram_pct[n];
  j["novel_ngram_pct"] = std::move(novel);
  j["fragment_examples"] = r.fragment_examples;
  Json rows = Json::array();
  for (const auto& e : r.examples) {
    Json row;
    row["example_id"] = e.example_id;
    row["coverage"] = optional_json(e.coverage);
    row["density"] = optional_json(e.density);
    row["compression"] = optional_json(e.compression);
    rows.push_back(std::move(row));
  }
  j["per_example"] = std::move(rows);
  return j;
}

std::string kde_csv(const eval::CorpusReport& report, std::size_t grid_size) {
  std::vector<std::pair<std::string, std::vector<double>>> metrics;
  auto collect = [&](std::string name, auto project) {
    std::vector<double> values;
    for (const auto& e : report.examples) {
      if (auto v = project(e)) values.push_back(*v);
    }
    metrics.emplace_back(std::move(name), std::move(values));
  };
  collect("coverage", [](const eval::ExampleStats& e) { return e.coverage; });
  collect("density", [](const eval::ExampleStats& e) { return e.density; });
  collect("compression", [](const eval::ExampleStats& e) { return e.compression; });
  for (auto c : kAllCoarse) {
    const auto k = index_of(c);
    collect("coverage." + std::string(to_string(c)),
            [k](const eval::ExampleStats& e) { return e.section_coverage[k]; });
    collect("density." + std::string(to_string(c)),
            [k](const eval::ExampleStats& e) { return e.section_density[k]; });
  }

  std::ostringstream out;
  out.precision(17);
  out << "metric,grid,density\n";
  for (const auto& [name, values] : metrics) {
    if (values.size() < 2) continue;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) continue;
    for (const auto& p : eval::kde_export(values, std::nullopt, grid_size)) {
      out << name << ',' << p.x << ',' << p.density << '\n';
    }
  }
  return out.str();
}

// ------------------------------------------------------------------ pipeline

namespace {

struct StageIo {
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
};

Json digests(const std::vector<fs::path>& paths) {
  Json j = Json::object();
  for (const auto& p : paths) j[p.string()] = fs::exists(p) ? file_digest(p) : std::string("missing");
  return j;
}

bool has_stage(const PipelineConfig& c, Stage s) {
  return std::find(c.stages.begin(), c.stages.end(), s) != c.stages.end();
}

}  // namespace

RunResult run_pipeline(const PipelineConfig& config, std::ostream* log) {
  RunResult result;
  auto fail = [&](const std::string& msg) {
    result.exit_code = 1;
    result.diagnostic = msg;
    if (log) *log << "error: " << msg << '\n';
    return result;
  };
  if (auto problems = check_ranges(config); !problems.empty()) return fail(problems.front().message);
  if (config.paths.corpus.empty()) return fail("paths.corpus is not set");
  if (config.paths.output.empty()) return fail("paths.output is not set");
  if (!fs::exists(config.paths.corpus)) return fail("corpus not found: " + config.paths.corpus.string());

  const fs::path out = config.paths.output;
  const fs::path preprocessed = out / "preprocessed.jsonl";
  const fs::path ssc_model = out / "ssc_model.json";
  const fs::path scc_model = out / "scc_model.json";
  const fs::path labeled = out / "labeled.jsonl";
  const fs::path pairs = out / "pairs.jsonl";
  const fs::path summaries = out / "summaries.jsonl";
  const fs::path evaluation = out / "evaluation.json";
  const fs::path stats = out / "stats.json";
  const fs::path kde = out / "kde.csv";
  const fs::path manifest_path = out / "manifest.json";

  const bool train = has_stage(config, Stage::Train) && !config.paths.train.empty();
  fs::path current = config.paths.corpus;
  if (has_stage(config, Stage::Preprocess)) current = preprocessed;
  const fs::path after_preprocess = current;
  if (has_stage(config, Stage::Classify)) current = labeled;
  const fs::path downstream = current;

  const std::string config_text = render_config(config);
  const std::string config_hash = sha256_hex(config_text);

  Json previous;
  if (fs::exists(manifest_path)) {
    try {
      previous = Json::parse(read_file(manifest_path));
    } catch (const std::exception&) {
      previous = Json();
    }
  }
  Json manifest;
  manifest["config_hash"] = config_hash;
  manifest["config"] = config_to_json(config);
  manifest["stages"] = Json::array();

  auto previous_entry = [&](Stage s) -> const Json* {
    if (!previous.is_object() || !previous.contains("stages")) return nullptr;
    for (const auto& e : previous["stages"]) {
      if (e.value("name", "") == to_string(s)) return &e;
    }
    return nullptr;
  };

  auto run_stage = [&](Stage stage, const StageIo& io, const std::function<void()>& body) {
    const Json inputs = digests(io.inputs);
    bool skip = false;
    if (const Json* prev = previous_entry(stage)) {
      skip = prev->value("config_hash", "") == config_hash && prev->value("inputs", Json()) == inputs &&
             prev->value("outputs", Json()) == digests(io.outputs);
      for (const auto& o : io.outputs) skip = skip && fs::exists(o);
    }
    if (!skip) body();
    StageOutcome outcome{stage, skip, io.outputs};
    result.stages.push_back(outcome);
    Json entry;
    entry["name"] = std::string(to_string(stage));
    entry["status"] = skip ? "skipped" : "ran";
    entry["config_hash"] = config_hash;
    entry["inputs"] = inputs;
    entry["outputs"] = digests(io.outputs);
    manifest["stages"].push_back(std::move(entry));
    write_file_atomic(manifest_path, manifest.dump(2) + "\n");
    if (log) *log << to_string(stage) << ": " << (skip ? "skipped (unchanged)" : "done") << '\n';
  };

  try {
    if (has_stage(config, Stage::Preprocess)) {
      run_stage(Stage::Preprocess, {{config.paths.corpus}, {preprocessed}}, [&] {
        PreprocessLog plog;
        auto examples = preprocess_corpus(corpus::read_corpus(config.paths.corpus), config.preprocess,
                                          config.seed, &plog);
        write_file_atomic(preprocessed, corpus::serialize_corpus(examples));
        if (log) {
          *log << "preprocess: read " << plog.read << ", kept " << plog.kept << '\n';
          for (const auto& [id, why] : plog.dropped) *log << "  dropped " << id << ": " << why << '\n';
        }
      });
    }
    if (train) {
      run_stage(Stage::Train, {{config.paths.train}, {ssc_model, scc_model}}, [&] {
        std::pair<classify::ClassifierModel, classify::ClassifierModel> models;
        try {
          models = train_models(corpus::read_training_sentences(config.paths.train),
                                config.classifier.smoothing);
        } catch (const std::exception& e) {
          throw StageError("train", "", e.what());
        }
        write_file_atomic(ssc_model, models.first.to_json().dump(1) + "\n");
        write_file_atomic(scc_model, models.second.to_json().dump(1) + "\n");
      });
    }
    if (has_stage(config, Stage::Classify)) {
      std::vector<fs::path> inputs{after_preprocess};
      if (train) {
        inputs.push_back(ssc_model);
        inputs.push_back(scc_model);
      }
      run_stage(Stage::Classify, {inputs, {labeled}}, [&] {
        auto examples = corpus::read_corpus(after_preprocess);
        if (examples.empty()) throw StageError("classify", "", "no examples");
        std::optional<classify::ClassifierModel> ssc;
        std::optional<classify::ClassifierModel> scc;
        if (train) {
          ssc = classify::ClassifierModel::load(ssc_model);
          scc = classify::ClassifierModel::load(scc_model);
        }
        examples = classify_corpus(std::move(examples), ssc ? &*ssc : nullptr, scc ? &*scc : nullptr,
                                   config.jobs);
        write_file_atomic(labeled, corpus::serialize_corpus(examples));
      });
    }
    if (has_stage(config, Stage::Align)) {
      run_stage(Stage::Align, {{downstream}, {pairs}}, [&] {
        const auto examples = corpus::read_corpus(downstream);
        write_file_atomic(pairs, align_corpus(examples, config.summarizer.alignment,
                                              config.summarizer.fallback, config.keep_empty_targets,
                                              config.jobs));
      });
    }
    if (has_stage(config, Stage::Summarize)) {
      run_stage(Stage::Summarize, {{downstream}, {summaries}}, [&] {
        const auto examples = corpus::read_corpus(downstream);
        write_file_atomic(summaries,
                          serialize_summaries(summarize_corpus(examples, config.summarizer, config.jobs)));
      });
    }
    if (has_stage(config, Stage::Evaluate)) {
      run_stage(Stage::Evaluate, {{summaries, downstream}, {evaluation}}, [&] {
        std::ifstream in(summaries);
        if (!in) throw StageError("evaluate", "", "summaries not found; run the summarize stage");
        const auto report = evaluate_summaries(parse_summaries(in), corpus::read_corpus(downstream));
        write_file_atomic(evaluation, report.dump(2) + "\n");
      });
    }
    if (has_stage(config, Stage::Stats)) {
      run_stage(Stage::Stats, {{downstream}, {stats, kde}}, [&] {
        const auto examples = corpus::read_corpus(downstream);
        if (examples.empty()) throw StageError("stats", "", "no examples");
        const auto report = eval::corpus_stats(examples, {config.stats.target, config.jobs});
        write_file_atomic(stats, stats_to_json(report).dump(2) + "\n");
        write_file_atomic(kde, kde_csv(report, config.stats.grid_size));
      });
    }
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  return result;
}

}  // namespace surveyforge::pipeline
