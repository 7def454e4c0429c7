#include "surveyforge/text.hpp"

#include <algorithm>
#include <array>

namespace surveyforge {
namespace {

constexpr std::array<std::string_view, 33> kAbbreviations = {
    "al",   "approx", "ca",   "cf",  "ch",   "dept", "dr",  "e.g",  "ed",
    "eds",  "eq",     "eqs",  "et",  "fig",  "figs", "i.e", "inc",  "jr",
    "ltd",  "mr",     "mrs",  "ms",  "pp",   "prof", "ref", "refs", "resp",
    "sec",  "secs",   "tab",  "univ", "viz", "vs"};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

// ASCII punctuation only; bytes >= 0x80 (UTF-8) count as word characters.
bool is_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 33 && u <= 47) || (u >= 58 && u <= 64) || (u >= 91 && u <= 96) ||
         (u >= 123 && u <= 126);
}

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool kept_internal(char c) {
  switch (c) {
    case '-': case '\'': case '.': case '/': case '_':
    case '&': case '+':  case ':': case '@':
      return true;
    default:
      return false;
  }
}

// "e.g", "u.s.a", "ph.d": letters in short dot-separated segments.
bool is_dotted_form(std::string_view w) {
  if (w.find('.') == std::string_view::npos) return false;
  std::size_t segment = 0;
  for (char c : w) {
    if (c == '.') {
      if (segment == 0) return false;
      segment = 0;
    } else if (is_alpha(c)) {
      if (++segment > 3) return false;
    } else {
      return false;
    }
  }
  return segment > 0;
}

bool keeps_trailing_period(std::string_view word) {
  if (word.empty()) return false;
  return is_abbreviation(word) || is_dotted_form(word);
}

class ChunkTokenizer {
 public:
  explicit ChunkTokenizer(std::vector<TokenSpan>& out) : out_(out) {}

  void run(std::string_view text, std::size_t base) {
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && is_punct(text[b])) {
      emit(text.substr(b, 1), base + b);
      ++b;
    }
    std::vector<std::size_t> trailing;
    while (e > b && is_punct(text[e - 1])) {
      if (text[e - 1] == '.' && keeps_trailing_period(lowered(last_piece(text.substr(b, e - 1 - b))))) break;
      --e;
      trailing.push_back(e);
    }
    split_core(text.substr(b, e - b), base + b);
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) {
      emit(text.substr(*it, 1), base + *it);
    }
  }

 private:
  void split_core(std::string_view core, std::size_t base) {
    if (core.empty()) return;
    std::size_t piece = 0;
    bool split_any = false;
    for (std::size_t i = 0; i < core.size(); ++i) {
      if (!splits_at(core, i)) continue;
      split_any = true;
      if (i > piece) run(core.substr(piece, i - piece), base + piece);
      emit(core.substr(i, 1), base + i);
      piece = i + 1;
    }
    if (!split_any) {
      emit(core, base);
    } else if (piece < core.size()) {
      run(core.substr(piece), base + piece);
    }
  }

  static bool splits_at(std::string_view core, std::size_t i) {
    const char c = core[i];
    if (!is_punct(c) || kept_internal(c)) return false;
    return !(c == ',' && i > 0 && i + 1 < core.size() && is_digit(core[i - 1]) && is_digit(core[i + 1]));
  }

  // Text after the last splitting character; the word a trailing period
  // would attach to once the core is split.
  static std::string_view last_piece(std::string_view core) {
    std::size_t from = 0;
    for (std::size_t i = core.size(); i-- > 0;) {
      if (splits_at(core, i)) {
        from = i + 1;
        break;
      }
    }
    while (from < core.size() && is_punct(core[from])) ++from;
    return core.substr(from);
  }

  static std::string lowered(std::string_view s) { return to_lower_ascii(s); }

  void emit(std::string_view raw, std::size_t begin) {
    out_.push_back(TokenSpan{to_lower_ascii(raw), begin, begin + raw.size()});
  }

  std::vector<TokenSpan>& out_;
};

bool is_closing(char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}';
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

// Word immediately before position `dot`, stripped of opening punctuation.
std::string_view word_before(std::string_view text, std::size_t dot) {
  std::size_t start = dot;
  while (start > 0 && !is_space(text[start - 1])) --start;
  while (start < dot && is_punct(text[start]) && text[start] != '.') ++start;
  return text.substr(start, dot - start);
}

}  // namespace

bool is_abbreviation(std::string_view word_without_period) {
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word_without_period) !=
         kAbbreviations.end();
}

std::string to_lower_ascii(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = lower(c);
  return out;
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

std::vector<TokenSpan> tokenize_with_spans(std::string_view text) {
  std::vector<TokenSpan> spans;
  ChunkTokenizer chunker(spans);
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) chunker.run(text.substr(start, i - start), start);
  }
  return spans;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  for (auto& span : tokenize_with_spans(text)) tokens.push_back(std::move(span.text));
  return tokens;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::size_t sentence_start = 0;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto flush = [&](std::size_t end) {
    auto s = normalize_whitespace(text.substr(sentence_start, end - sentence_start));
    if (!s.empty()) sentences.push_back(std::move(s));
    sentence_start = end;
  };
  while (i < n) {
    if (!is_terminal(text[i])) {
      ++i;
      continue;
    }
    const std::size_t run_start = i;
    std::size_t j = i;
    while (j < n && is_terminal(text[j])) ++j;
    const bool single_period = (j - run_start == 1 && text[run_start] == '.');
    while (j < n && is_closing(text[j])) ++j;
    if (j < n && !is_space(text[j])) {
      i = j;
      continue;
    }
    if (single_period) {
      const auto word = to_lower_ascii(word_before(text, run_start));
      if (keeps_trailing_period(word)) {
        i = j;
        continue;
      }
    }
    flush(j);
    i = j;
  }
  flush(n);
  return sentences;
}

}  // namespace surveyforge
