#include "surveyforge/corpus_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "surveyforge/errors.hpp"
#include "surveyforge/text.hpp"

namespace surveyforge::corpus {
namespace fs = std::filesystem;

namespace {

Json labels_to_json(const std::vector<Category>& labels) {
  Json arr = Json::array();
  for (auto c : labels) arr.push_back(std::string(to_string(c)));
  return arr;
}

std::vector<Category> labels_from_json(const Json& arr, std::size_t expected, std::string_view where) {
  if (!arr.is_array()) throw FormatError(std::string(where) + ": labels must be an array");
  std::vector<Category> labels;
  for (const auto& v : arr) {
    const auto c = parse_category(v.get<std::string>());
    if (!c) throw FormatError(std::string(where) + ": unknown label '" + v.get<std::string>() + "'");
    labels.push_back(*c);
  }
  if (labels.size() != expected) {
    throw FormatError(std::string(where) + ": " + std::to_string(labels.size()) +
                      " labels for " + std::to_string(expected) + " sentences");
  }
  return labels;
}

const Json& require(const Json& obj, const char* key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(std::string(where) + ": missing field '" + key + "'");
  return *it;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Json to_json(const SurveyExample& example) {
  Json j;
  j["example_id"] = example.example_id;
  Json docs = Json::array();
  for (const auto& d : example.input_docs) {
    Json doc;
    doc["doc_id"] = d.doc_id;
    doc["abstract"] = join_text(d.sentences);
    if (d.labels) doc["labels"] = labels_to_json(*d.labels);
    docs.push_back(std::move(doc));
  }
  j["input_docs"] = std::move(docs);
  if (example.intro) j["intro"] = join_text(*example.intro);
  if (example.intro_labels) j["intro_labels"] = labels_to_json(*example.intro_labels);
  if (example.target_mds) {
    j["target_mds"] = Json{{"background", example.target_mds->background},
                           {"method", example.target_mds->method},
                           {"other", example.target_mds->other}};
  }
  if (example.target_abs) j["target_abs"] = *example.target_abs;
  if (example.split) j["split"] = std::string(to_string(*example.split));
  return j;
}

SurveyExample example_from_json(const Json& record) {
  if (!record.is_object()) throw FormatError("corpus record must be an object");
  SurveyExample ex;
  ex.example_id = require(record, "example_id", "record").get<std::string>();
  const std::string where = "example " + ex.example_id;

  const auto& docs = require(record, "input_docs", where);
  if (!docs.is_array()) throw FormatError(where + ": input_docs must be an array");
  for (const auto& d : docs) {
    ReferenceDoc doc;
    doc.doc_id = require(d, "doc_id", where).get<std::string>();
    doc.sentences = to_sentence_records(require(d, "abstract", where).get<std::string>());
    if (auto it = d.find("labels"); it != d.end()) {
      doc.labels = labels_from_json(*it, doc.sentences.size(), where + " doc " + doc.doc_id);
    }
    ex.input_docs.push_back(std::move(doc));
  }

  if (auto it = record.find("intro"); it != record.end()) {
    ex.intro = to_sentence_records(it->get<std::string>());
  }
  if (auto it = record.find("intro_labels"); it != record.end()) {
    if (!ex.intro) throw FormatError(where + ": intro_labels without intro");
    ex.intro_labels = labels_from_json(*it, ex.intro->size(), where + " intro");
  }
  if (auto it = record.find("target_mds"); it != record.end()) {
    TargetSections t;
    for (auto c : kAllCoarse) {
      const char* key = c == CoarseCategory::Background ? "background"
                        : c == CoarseCategory::Method   ? "method"
                                                        : "other";
      if (auto s = it->find(key); s != it->end()) {
        t.section(c) = to_lower_ascii(normalize_whitespace(s->get<std::string>()));
      }
    }
    ex.target_mds = std::move(t);
  }
  if (auto it = record.find("target_abs"); it != record.end()) {
    ex.target_abs = to_lower_ascii(normalize_whitespace(it->get<std::string>()));
  }
  if (auto it = record.find("split"); it != record.end()) {
    const auto name = it->get<std::string>();
    ex.split = parse_split(name);
    if (!ex.split) throw FormatError(where + ": unknown split '" + name + "'");
  }
  if (!ex.target_mds && !ex.target_abs && !ex.intro) {
    throw FormatError(where + ": needs target_mds, target_abs or intro");
  }
  return ex;
}

std::string serialize_example(const SurveyExample& example) {
  return to_json(example).dump(-1, ' ', false, Json::error_handler_t::replace);
}

SurveyExample parse_example(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw FormatError(e.what());
  }
  try {
    return example_from_json(j);
  } catch (const Json::exception& e) {
    throw FormatError(e.what());
  }
}

void for_each_example(std::istream& in, const std::function<void(SurveyExample&&)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (normalize_whitespace(line).empty()) continue;
    SurveyExample ex;
    try {
      ex = parse_example(line);
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
    fn(std::move(ex));
  }
}

std::vector<SurveyExample> read_corpus(std::istream& in) {
  std::vector<SurveyExample> out;
  for_each_example(in, [&](SurveyExample&& ex) { out.push_back(std::move(ex)); });
  return out;
}

std::vector<SurveyExample> read_corpus(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open corpus " + path.string());
  return read_corpus(in);
}

std::string serialize_corpus(const std::vector<SurveyExample>& examples) {
  std::string out;
  for (const auto& ex : examples) {
    out += serialize_example(ex);
    out.push_back('\n');
  }
  return out;
}

std::vector<TrainingSentence> read_training_sentences(std::istream& in) {
  std::vector<TrainingSentence> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (normalize_whitespace(line).empty()) continue;
    const std::string where = "training line " + std::to_string(line_no);
    try {
      const auto j = Json::parse(line);
      TrainingSentence row;
      const auto& id = require(j, "abstract_id", where);
      row.abstract_id = id.is_string() ? id.get<std::string>() : id.dump();
      row.sentence_index = require(j, "sentence_index", where).get<std::int64_t>();
      row.sentence = SentenceRecord::from_text(require(j, "text", where).get<std::string>());
      const auto label = require(j, "label", where).get<std::string>();
      const auto c = parse_category(label);
      if (!c) throw FormatError(where + ": unknown label '" + label + "'");
      row.label = *c;
      rows.push_back(std::move(row));
    } catch (const Json::exception& e) {
      throw FormatError(where + ": " + e.what());
    }
  }
  return rows;
}

std::vector<TrainingSentence> read_training_sentences(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open training file " + path.string());
  return read_training_sentences(in);
}

std::vector<std::vector<TrainingSentence>> group_by_abstract(std::vector<TrainingSentence> rows) {
  std::vector<std::vector<TrainingSentence>> groups;
  std::map<std::string, std::size_t> index;
  for (auto& row : rows) {
    auto [it, inserted] = index.try_emplace(row.abstract_id, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(std::move(row));
  }
  for (auto& g : groups) {
    std::stable_sort(g.begin(), g.end(), [](const auto& a, const auto& b) {
      return a.sentence_index < b.sentence_index;
    });
  }
  return groups;
}

std::vector<SurveyExample> ingest_raw_directory(const fs::path& dir, const IngestOptions& options) {
  if (!fs::is_directory(dir)) throw FormatError("not a directory: " + dir.string());
  std::vector<fs::path> topics;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) topics.push_back(entry.path());
  }
  std::sort(topics.begin(), topics.end());

  std::vector<SurveyExample> out;
  for (const auto& topic : topics) {
    SurveyExample ex;
    ex.example_id = topic.filename().string();
    const auto abstract_path = topic / "abstract.txt";
    const auto intro_path = topic / "intro.txt";
    const auto body_path = topic / "body.txt";
    std::optional<std::string> survey_abstract;
    if (fs::exists(abstract_path)) survey_abstract = read_file(abstract_path);

    if (options.subset == Subset::Mds) {
      std::vector<fs::path> refs;
      if (fs::is_directory(topic / "refs")) {
        for (const auto& entry : fs::directory_iterator(topic / "refs")) {
          if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            refs.push_back(entry.path());
          }
        }
      }
      std::sort(refs.begin(), refs.end());
      for (const auto& ref : refs) {
        ReferenceDoc doc;
        doc.doc_id = ref.stem().string();
        doc.sentences = to_sentence_records(read_file(ref));
        ex.input_docs.push_back(std::move(doc));
      }
      if (fs::exists(intro_path)) {
        ex.intro = to_sentence_records(read_file(intro_path));
      } else if (fs::exists(body_path)) {
        ex.intro = to_sentence_records(
            truncate_body(read_file(body_path), options.intro_fallback_words));
      }
      if (survey_abstract) ex.target_abs = to_lower_ascii(normalize_whitespace(*survey_abstract));
    } else {
      if (!survey_abstract) continue;
      std::string body;
      if (fs::exists(body_path)) {
        body = read_file(body_path);
      } else if (fs::exists(intro_path)) {
        body = read_file(intro_path);
      } else {
        continue;
      }
      if (options.abs_include_abstract) body = *survey_abstract + "\n" + body;
      ReferenceDoc doc;
      doc.doc_id = "body";
      doc.sentences = to_sentence_records(truncate_body(body, options.body_limit));
      ex.input_docs.push_back(std::move(doc));
      ex.target_abs = to_lower_ascii(normalize_whitespace(*survey_abstract));
    }
    if (!ex.intro && !ex.target_abs) continue;
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace surveyforge::corpus
