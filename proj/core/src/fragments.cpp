#include "surveyforge/fragments.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

#include "surveyforge/errors.hpp"

namespace surveyforge::eval {
namespace {

// Suffix automaton over interned token ids. first_end[s] is the smallest end
// position (inclusive) of the strings represented by state s, so a match of
// length L read into s first occurs at first_end[s] - L + 1.
class SuffixAutomaton {
 public:
  explicit SuffixAutomaton(std::span<const std::int32_t> text) {
    states_.reserve(2 * text.size() + 1);
    states_.push_back(State{});
    for (std::size_t i = 0; i < text.size(); ++i) extend(text[i], static_cast<std::int64_t>(i));
  }

  std::int32_t step(std::int32_t state, std::int32_t symbol) const {
    const auto& next = states_[static_cast<std::size_t>(state)].next;
    auto it = next.find(symbol);
    return it == next.end() ? -1 : it->second;
  }

  std::int64_t first_end(std::int32_t state) const {
    return states_[static_cast<std::size_t>(state)].first_end;
  }

 private:
  struct State {
    std::int64_t len = 0;
    std::int32_t link = -1;
    std::int64_t first_end = -1;
    std::unordered_map<std::int32_t, std::int32_t> next;
  };

  void extend(std::int32_t c, std::int64_t pos) {
    const auto cur = static_cast<std::int32_t>(states_.size());
    states_.push_back(State{states_[static_cast<std::size_t>(last_)].len + 1, -1, pos, {}});
    std::int32_t p = last_;
    while (p != -1 && !states_[static_cast<std::size_t>(p)].next.contains(c)) {
      states_[static_cast<std::size_t>(p)].next.emplace(c, cur);
      p = states_[static_cast<std::size_t>(p)].link;
    }
    if (p == -1) {
      states_[static_cast<std::size_t>(cur)].link = 0;
    } else {
      const std::int32_t q = states_[static_cast<std::size_t>(p)].next.at(c);
      if (states_[static_cast<std::size_t>(p)].len + 1 == states_[static_cast<std::size_t>(q)].len) {
        states_[static_cast<std::size_t>(cur)].link = q;
      } else {
        const auto clone = static_cast<std::int32_t>(states_.size());
        State copy = states_[static_cast<std::size_t>(q)];
        copy.len = states_[static_cast<std::size_t>(p)].len + 1;
        states_.push_back(std::move(copy));
        while (p != -1) {
          auto& pn = states_[static_cast<std::size_t>(p)].next;
          auto it = pn.find(c);
          if (it == pn.end() || it->second != q) break;
          it->second = clone;
          p = states_[static_cast<std::size_t>(p)].link;
        }
        states_[static_cast<std::size_t>(q)].link = clone;
        states_[static_cast<std::size_t>(cur)].link = clone;
      }
    }
    last_ = cur;
  }

  std::vector<State> states_;
  std::int32_t last_ = 0;
};

std::unordered_set<std::string> ngram_set(std::span<const std::string> tokens, std::size_t n) {
  std::unordered_set<std::string> out;
  if (tokens.size() < n) return out;
  std::string key;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    key.clear();
    for (std::size_t k = 0; k < n; ++k) {
      if (k) key.push_back('\x1f');
      key += tokens[i + k];
    }
    out.insert(key);
  }
  return out;
}

}  // namespace

std::vector<Fragment> extractive_fragments(std::span<const std::string> doc,
                                           std::span<const std::string> summary) {
  std::vector<Fragment> out;
  if (doc.empty() || summary.empty()) return out;

  std::unordered_map<std::string_view, std::int32_t> ids;
  std::vector<std::int32_t> doc_ids;
  doc_ids.reserve(doc.size());
  for (const auto& t : doc) {
    auto [it, _] = ids.try_emplace(t, static_cast<std::int32_t>(ids.size()));
    doc_ids.push_back(it->second);
  }
  const SuffixAutomaton automaton(doc_ids);

  std::size_t i = 0;
  while (i < summary.size()) {
    std::int32_t state = 0;
    std::size_t len = 0;
    while (i + len < summary.size()) {
      auto it = ids.find(summary[i + len]);
      if (it == ids.end()) break;
      const auto next = automaton.step(state, it->second);
      if (next < 0) break;
      state = next;
      ++len;
    }
    if (len == 0) {
      ++i;
      continue;
    }
    const auto end = automaton.first_end(state);
    out.push_back(Fragment{i, static_cast<std::size_t>(end) + 1 - len, len});
    i += len;
  }
  return out;
}

double coverage(std::span<const Fragment> fragments, std::size_t summary_length) {
  if (summary_length == 0) throw UndefinedInput("coverage: empty summary");
  double total = 0.0;
  for (const auto& f : fragments) total += static_cast<double>(f.length);
  return total / static_cast<double>(summary_length);
}

double density(std::span<const Fragment> fragments, std::size_t summary_length) {
  if (summary_length == 0) throw UndefinedInput("density: empty summary");
  double total = 0.0;
  for (const auto& f : fragments) {
    const auto l = static_cast<double>(f.length);
    total += l * l;
  }
  return total / static_cast<double>(summary_length);
}

double compression(std::size_t doc_word_count, std::size_t summary_word_count) {
  if (summary_word_count == 0) throw UndefinedInput("compression: empty summary");
  if (doc_word_count == 0) throw UndefinedInput("compression: empty document");
  return static_cast<double>(doc_word_count) / static_cast<double>(summary_word_count);
}

double novel_ngrams(std::span<const std::string> summary, std::span<const std::string> doc,
                    std::size_t n) {
  if (n == 0) throw InvalidArgument("novel_ngrams: n must be >= 1");
  if (summary.size() < n) throw UndefinedInput("novel_ngrams: summary shorter than n");
  const auto grams = ngram_set(summary, n);
  const auto source = ngram_set(doc, n);
  std::size_t novel = 0;
  for (const auto& g : grams) {
    if (!source.contains(g)) ++novel;
  }
  return 100.0 * static_cast<double>(novel) / static_cast<double>(grams.size());
}

}  // namespace surveyforge::eval
