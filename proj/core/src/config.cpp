#include "surveyforge/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "surveyforge/text.hpp"

namespace surveyforge::pipeline {
namespace {

using Setter = std::function<std::optional<std::string>(PipelineConfig&, std::string_view)>;
using Getter = std::function<std::string(const PipelineConfig&)>;

struct Key {
  std::string section;
  std::string name;
  Setter set;
  Getter get;
  std::string doc;

  std::string path() const { return section + "." + name; }
};

std::optional<double> parse_double(std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) return std::nullopt;
  return out;
}

std::optional<std::int64_t> parse_int(std::string_view v) {
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) return std::nullopt;
  return out;
}

std::optional<bool> parse_bool(std::string_view v) {
  if (v == "on" || v == "true" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "no") return false;
  return std::nullopt;
}

// Shortest decimal form that reads back to the same double.
std::string fmt_double(double v) {
  for (int p = 1; p <= 17; ++p) {
    std::ostringstream s;
    s.precision(p);
    s << v;
    if (parse_double(s.str()) == v) return s.str();
  }
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

template <typename Ref>
Key path_key(std::string section, std::string name, Ref ref, std::string doc) {
  return {std::move(section), std::move(name),
          [ref](PipelineConfig& c, std::string_view v) -> std::optional<std::string> {
            ref(c) = std::string(v);
            return std::nullopt;
          },
          [ref](const PipelineConfig& c) { return ref(const_cast<PipelineConfig&>(c)).string(); },
          std::move(doc)};
}

template <typename Ref>
Key size_key(std::string section, std::string name, Ref ref, std::string doc) {
  return {std::move(section), std::move(name),
          [ref](PipelineConfig& c, std::string_view v) -> std::optional<std::string> {
            auto n = parse_int(v);
            if (!n) return "expected an integer, got '" + std::string(v) + "'";
            if (*n < 0) return std::string("must not be negative");
            ref(c) = static_cast<std::remove_reference_t<decltype(ref(c))>>(*n);
            return std::nullopt;
          },
          [ref](const PipelineConfig& c) {
            return std::to_string(ref(const_cast<PipelineConfig&>(c)));
          },
          std::move(doc)};
}

template <typename Ref>
Key optional_size_key(std::string section, std::string name, Ref ref, std::string doc) {
  return {std::move(section), std::move(name),
          [ref](PipelineConfig& c, std::string_view v) -> std::optional<std::string> {
            auto& dst = ref(c);
            if (v == "none") {
              dst.reset();
              return std::nullopt;
            }
            auto n = parse_int(v);
            if (!n) return "expected an integer or 'none', got '" + std::string(v) + "'";
            if (*n < 0) return std::string("must not be negative");
            dst = static_cast<std::size_t>(*n);
            return std::nullopt;
          },
          [ref](const PipelineConfig& c) -> std::string {
            const auto& v = ref(const_cast<PipelineConfig&>(c));
            return v ? std::to_string(*v) : "none";
          },
          std::move(doc)};
}

template <typename Ref>
Key double_key(std::string section, std::string name, Ref ref, std::string doc) {
  return {std::move(section), std::move(name),
          [ref](PipelineConfig& c, std::string_view v) -> std::optional<std::string> {
            auto d = parse_double(v);
            if (!d) return "expected a number, got '" + std::string(v) + "'";
            ref(c) = *d;
            return std::nullopt;
          },
          [ref](const PipelineConfig& c) { return fmt_double(ref(const_cast<PipelineConfig&>(c))); },
          std::move(doc)};
}

template <typename Ref>
Key bool_key(std::string section, std::string name, Ref ref, std::string doc) {
  return {std::move(section), std::move(name),
          [ref](PipelineConfig& c, std::string_view v) -> std::optional<std::string> {
            auto b = parse_bool(v);
            if (!b) return "expected on/off, got '" + std::string(v) + "'";
            ref(c) = *b;
            return std::nullopt;
          },
          [ref](const PipelineConfig& c) -> std::string {
            return ref(const_cast<PipelineConfig&>(c)) ? "on" : "off";
          },
          std::move(doc)};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    k.push_back(path_key("paths", "corpus", [](PipelineConfig& c) -> auto& { return c.paths.corpus; },
                         "input corpus, one JSON example per line"));
    k.push_back(path_key("paths", "train", [](PipelineConfig& c) -> auto& { return c.paths.train; },
                         "labeled training sentences; empty uses labels already in the corpus"));
    k.push_back(path_key("paths", "output", [](PipelineConfig& c) -> auto& { return c.paths.output; },
                         "output directory"));

    k.push_back(size_key("preprocess", "max_docs",
                         [](PipelineConfig& c) -> auto& { return c.preprocess.caps.max_docs; },
                         "input documents kept per example"));
    k.push_back(size_key("preprocess", "max_doc_words",
                         [](PipelineConfig& c) -> auto& { return c.preprocess.caps.max_doc_words; },
                         "words kept per input document"));
    k.push_back(size_key("preprocess", "body_limit",
                         [](PipelineConfig& c) -> auto& { return c.preprocess.body_limit; },
                         "survey body words for the abstract subset (1024 or 3072)"));
    k.push_back(size_key("preprocess", "min_input_words",
                         [](PipelineConfig& c) -> auto& { return c.preprocess.filter.min_input_words; },
                         "drop examples with fewer input words"));
    k.push_back(size_key("preprocess", "min_target_words",
                         [](PipelineConfig& c) -> auto& { return c.preprocess.filter.min_target_words; },
                         "drop examples with fewer target words"));

    k.push_back({"classifier", "mode",
                 [](PipelineConfig& c, std::string_view v) -> std::optional<std::string> {
                   auto m = classify::parse_mode(v);
                   if (!m) return "expected ssc or scc, got '" + std::string(v) + "'";
                   c.classifier.mode = *m;
                   return std::nullopt;
                 },
                 [](const PipelineConfig& c) { return std::string(classify::to_string(c.classifier.mode)); },
                 "feature mode for train-classifier"});
    k.push_back(double_key("classifier", "smoothing",
                           [](PipelineConfig& c) -> auto& { return c.classifier.smoothing; },
                           "additive smoothing constant"));

    k.push_back({"summarizer", "method",
                 [](PipelineConfig& c, std::string_view v) -> std::optional<std::string> {
                   auto m = summarize::parse_method(v);
                   if (!m) return "expected lexrank or textrank, got '" + std::string(v) + "'";
                   c.summarizer.method = *m;
                   return std::nullopt;
                 },
                 [](const PipelineConfig& c) { return std::string(summarize::to_string(c.summarizer.method)); },
                 "lexrank or textrank"});
    k.push_back({"summarizer", "alignment",
                 [](PipelineConfig& c, std::string_view v) -> std::optional<std::string> {
                   auto m = align::parse_mode(v);
                   if (!m) return "expected ca or one2many, got '" + std::string(v) + "'";
                   c.summarizer.alignment = *m;
                   return std::nullopt;
                 },
                 [](const PipelineConfig& c) { return std::string(align::to_string(c.summarizer.alignment)); },
                 "ca or one2many"});
    k.push_back({"summarizer", "fallback",
                 [](PipelineConfig& c, std::string_view v) -> std::optional<std::string> {
                   if (v == "flag") {
                     c.summarizer.fallback = align::EmptyCategoryFallback::FlagEmpty;
                   } else if (v == "full") {
                     c.summarizer.fallback = align::EmptyCategoryFallback::FullInput;
                   } else {
                     return "expected flag or full, got '" + std::string(v) + "'";
                   }
                   return std::nullopt;
                 },
                 [](const PipelineConfig& c) -> std::string {
                   return c.summarizer.fallback == align::EmptyCategoryFallback::FlagEmpty ? "flag" : "full";
                 },
                 "empty-category handling under ca: flag or full"});
    k.push_back(optional_size_key("summarizer", "budget_words",
                                  [](PipelineConfig& c) -> auto& { return c.summarizer.budget.max_words; },
                                  "words per section, or none"));
    k.push_back(optional_size_key("summarizer", "budget_sentences",
                                  [](PipelineConfig& c) -> auto& { return c.summarizer.budget.max_sentences; },
                                  "sentences per section, or none"));
    k.push_back(bool_key("summarizer", "blocking",
                         [](PipelineConfig& c) -> auto& { return c.summarizer.trigram_blocking; },
                         "trigram blocking"));
    k.push_back(double_key("summarizer", "damping",
                           [](PipelineConfig& c) -> auto& { return c.summarizer.lexrank.power.damping; },
                           "random-walk damping, in (0,1)"));
    k.push_back(double_key("summarizer", "threshold",
                           [](PipelineConfig& c) -> auto& { return c.summarizer.lexrank.threshold; },
                           "lexrank edge threshold; 0 = continuous"));
    k.push_back(double_key("summarizer", "tolerance",
                           [](PipelineConfig& c) -> auto& { return c.summarizer.lexrank.power.tolerance; },
                           "power iteration tolerance"));
    k.push_back(size_key("summarizer", "max_iters",
                         [](PipelineConfig& c) -> auto& { return c.summarizer.lexrank.power.max_iters; },
                         "power iteration cap"));
    k.push_back(bool_key("summarizer", "keep_empty_targets",
                         [](PipelineConfig& c) -> auto& { return c.keep_empty_targets; },
                         "export aligned pairs whose target section is empty"));

    k.push_back({"stats", "target",
                 [](PipelineConfig& c, std::string_view v) -> std::optional<std::string> {
                   if (v == "auto") {
                     c.stats.target = eval::TargetChoice::Auto;
                   } else if (v == "mds") {
                     c.stats.target = eval::TargetChoice::Mds;
                   } else if (v == "abs") {
                     c.stats.target = eval::TargetChoice::Abs;
                   } else {
                     return "expected auto, mds or abs, got '" + std::string(v) + "'";
                   }
                   return std::nullopt;
                 },
                 [](const PipelineConfig& c) -> std::string {
                   switch (c.stats.target) {
                     case eval::TargetChoice::Mds: return "mds";
                     case eval::TargetChoice::Abs: return "abs";
                     default: return "auto";
                   }
                 },
                 "target used for corpus statistics"});
    k.push_back(size_key("stats", "grid_size", [](PipelineConfig& c) -> auto& { return c.stats.grid_size; },
                         "KDE grid points"));

    k.push_back(size_key("pipeline", "seed", [](PipelineConfig& c) -> auto& { return c.seed; },
                         "seed for the dataset split"));
    k.push_back(size_key("pipeline", "jobs", [](PipelineConfig& c) -> auto& { return c.jobs; },
                         "worker threads per stage"));
    k.push_back({"pipeline", "stages",
                 [](PipelineConfig& c, std::string_view v) -> std::optional<std::string> {
                   std::vector<Stage> stages;
                   std::string item;
                   std::istringstream in{std::string(v)};
                   while (std::getline(in, item, ',')) {
                     const auto name = normalize_whitespace(item);
                     if (name.empty()) continue;
                     auto s = parse_stage(name);
                     if (!s) return "unknown stage '" + name + "'";
                     stages.push_back(*s);
                   }
                   c.stages = std::move(stages);
                   return std::nullopt;
                 },
                 [](const PipelineConfig& c) {
                   std::string out;
                   for (auto s : c.stages) {
                     if (!out.empty()) out += ",";
                     out += to_string(s);
                   }
                   return out;
                 },
                 "stages run by `surveyforge run`"});
    return k;
  }();
  return table;
}

const Key* find_key(std::string_view section, std::string_view name) {
  for (const auto& k : keys()) {
    if (k.section == section && k.name == name) return &k;
  }
  return nullptr;
}

bool known_section(std::string_view section) {
  for (const auto& k : keys()) {
    if (k.section == section) return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(Stage s) noexcept {
  switch (s) {
    case Stage::Preprocess: return "preprocess";
    case Stage::Train: return "train";
    case Stage::Classify: return "classify";
    case Stage::Align: return "align";
    case Stage::Summarize: return "summarize";
    case Stage::Evaluate: return "evaluate";
    case Stage::Stats: return "stats";
  }
  return "preprocess";
}

std::optional<Stage> parse_stage(std::string_view name) {
  for (auto s : kAllStages) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::string Diagnostic::to_string() const {
  if (line == 0) return message;
  return "line " + std::to_string(line) + ": " + message;
}

std::vector<Diagnostic> check_ranges(const PipelineConfig& c) {
  std::vector<Diagnostic> d;
  auto fail = [&](std::string key, std::string message) {
    d.push_back({key, 0, key + " " + message});
  };
  const auto& power = c.summarizer.lexrank.power;
  if (!(power.damping > 0.0 && power.damping < 1.0)) fail("summarizer.damping", "out of (0,1)");
  if (!(power.tolerance > 0.0)) fail("summarizer.tolerance", "must be > 0");
  if (power.max_iters == 0) fail("summarizer.max_iters", "must be > 0");
  if (!(c.summarizer.lexrank.threshold >= 0.0 && c.summarizer.lexrank.threshold <= 1.0)) {
    fail("summarizer.threshold", "out of [0,1]");
  }
  const auto& b = c.summarizer.budget;
  if (b.max_words && *b.max_words == 0) fail("summarizer.budget_words", "must be > 0 or none");
  if (b.max_sentences && *b.max_sentences == 0) {
    fail("summarizer.budget_sentences", "must be > 0 or none");
  }
  if (!b.max_words && !b.max_sentences) {
    fail("summarizer.budget_words", "and summarizer.budget_sentences cannot both be none");
  }
  if (!(c.classifier.smoothing > 0.0)) fail("classifier.smoothing", "must be > 0");
  if (c.preprocess.caps.max_docs == 0) fail("preprocess.max_docs", "must be > 0");
  if (c.preprocess.caps.max_doc_words == 0) fail("preprocess.max_doc_words", "must be > 0");
  if (c.preprocess.body_limit <= 0) fail("preprocess.body_limit", "must be > 0");
  if (c.stats.grid_size < 2) fail("stats.grid_size", "must be >= 2");
  if (c.jobs == 0) fail("pipeline.jobs", "must be >= 1");
  return d;
}

ConfigResult validate_config(std::string_view text) {
  ConfigResult result;
  std::map<std::string, std::size_t> seen;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  auto report = [&](std::string key, std::string message) {
    result.diagnostics.push_back({std::move(key), line_no, std::move(message)});
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find_first_of("#;");
    const auto line = normalize_whitespace(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        report("", "malformed section header '" + line + "'");
        continue;
      }
      section = normalize_whitespace(std::string_view(line).substr(1, line.size() - 2));
      if (!known_section(section)) report(section, "unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      report("", "expected 'key = value', got '" + line + "'");
      continue;
    }
    const auto name = normalize_whitespace(std::string_view(line).substr(0, eq));
    const auto value = normalize_whitespace(std::string_view(line).substr(eq + 1));
    const std::string path = section.empty() ? name : section + "." + name;
    const Key* key = find_key(section, name);
    if (!key) {
      if (section.empty() || known_section(section)) {
        report(path, "unknown key '" + path + "'");
      }
      continue;
    }
    if (auto [it, inserted] = seen.emplace(path, line_no); !inserted) {
      report(path, "duplicate key '" + path + "' (first set on line " +
                       std::to_string(it->second) + ")");
      continue;
    }
    if (auto err = key->set(result.config, value)) report(path, path + ": " + *err);
  }
  for (auto d : check_ranges(result.config)) {
    if (auto it = seen.find(d.key); it != seen.end()) d.line = it->second;
    result.diagnostics.push_back(std::move(d));
  }
  return result;
}

ConfigResult load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    ConfigResult r;
    r.diagnostics.push_back({"", 0, "cannot open config " + path.string()});
    return r;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  auto result = validate_config(ss.str());
  const auto base = path.parent_path();
  for (auto* p : {&result.config.paths.corpus, &result.config.paths.train, &result.config.paths.output}) {
    if (!p->empty() && p->is_relative()) *p = (base / *p).lexically_normal();
  }
  return result;
}

std::string render_config(const PipelineConfig& config) {
  std::string out;
  std::string section;
  for (const auto& k : keys()) {
    if (k.section != section) {
      if (!section.empty()) out += "\n";
      section = k.section;
      out += "[" + section + "]\n";
    }
    out += "# " + k.doc + "\n";
    out += k.name + " = " + k.get(config) + "\n";
  }
  return out;
}

nlohmann::ordered_json config_to_json(const PipelineConfig& config) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& k : keys()) j[k.section][k.name] = k.get(config);
  return j;
}

}  // namespace surveyforge::pipeline
