#include "unlearn/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "unlearn/errors.hpp"

namespace unlearn {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Numeric lines: no quoting, split on commas. Returns (line number, fields).
std::vector<std::pair<std::size_t, std::vector<double>>> parse_numeric_rows(std::string_view text,
                                                                             bool has_header) {
  std::vector<std::pair<std::size_t, std::vector<double>>> rows;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<double> fields;
    std::size_t col = 0;
    std::size_t fpos = 0;
    while (true) {
      std::size_t comma = line.find(',', fpos);
      std::string_view field = trim(line.substr(fpos, comma == std::string_view::npos
                                                          ? std::string_view::npos
                                                          : comma - fpos));
      ++col;
      double v = 0.0;
      const char* first = field.data();
      const char* last = field.data() + field.size();
      if (!field.empty() && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (field.empty() || ec != std::errc() || ptr != last) {
        throw DataError("line " + std::to_string(line_no) + ", column " + std::to_string(col) +
                        ": cannot parse '" + std::string(field) + "' as a number");
      }
      if (!std::isfinite(v)) {
        throw DataError("line " + std::to_string(line_no) + ", column " + std::to_string(col) +
                        ": non-finite value '" + std::string(field) + "'");
      }
      fields.push_back(v);
      if (comma == std::string_view::npos) break;
      fpos = comma + 1;
    }
    if (!rows.empty() && fields.size() != rows.front().second.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(rows.front().second.size()) + " columns, found " +
                      std::to_string(fields.size()));
    }
    rows.emplace_back(line_no, std::move(fields));
  }
  return rows;
}

void append_number(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

bool is_token_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::optional<int> parse_int(std::string_view s) {
  s = trim(s);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

Dataset parse_numeric_csv(std::string_view text, bool has_header) {
  auto rows = parse_numeric_rows(text, has_header);
  if (rows.empty()) throw DataError("numeric CSV has no data rows");
  const std::size_t width = rows.front().second.size();
  if (width < 2) throw DataError("numeric CSV needs at least one feature column and a label");
  Matrix x(rows.size(), width - 1);
  Vector y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& f = rows[i].second;
    std::copy(f.begin(), f.end() - 1, x.row(i).begin());
    y[i] = f.back();
  }
  return Dataset(std::move(x), std::move(y));
}

Dataset load_numeric_csv(const std::filesystem::path& path, bool has_header) {
  return parse_numeric_csv(read_file(path), has_header);
}

std::string format_numeric_csv(const Dataset& data, bool with_header) {
  std::string out;
  if (with_header) {
    for (std::size_t j = 0; j < data.cols(); ++j) {
      out += data.feature_names().empty() ? "x" + std::to_string(j) : data.feature_names()[j];
      out += ',';
    }
    out += "y\n";
  }
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (double v : data.x().row(i)) {
      append_number(out, v);
      out += ',';
    }
    append_number(out, data.y()[i]);
    out += '\n';
  }
  return out;
}

void write_numeric_csv(const Dataset& data, const std::filesystem::path& path, bool with_header) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << format_numeric_csv(data, with_header);
  if (!out) throw DataError("write failed for " + path.string());
}

Matrix load_feature_table(const std::filesystem::path& path, bool has_header) {
  auto rows = parse_numeric_rows(read_file(path), has_header);
  if (rows.empty()) throw DataError("feature table " + path.string() + " has no rows");
  const std::size_t width = rows.front().second.size();
  Matrix m(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy(rows[i].second.begin(), rows[i].second.end(), m.row(i).begin());
  return m;
}

std::vector<std::vector<std::string>> parse_csv_records(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = record.size() == 1 && record.front().empty();
    if (!blank) records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !field.empty())
          throw DataError("line " + std::to_string(line) + ": stray quote inside unquoted field");
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) throw DataError("unterminated quoted field at end of input");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

Corpus parse_corpus_csv(std::string_view text, bool has_header) {
  auto records = parse_csv_records(text);
  Corpus corpus;
  for (std::size_t r = has_header ? 1 : 0; r < records.size(); ++r) {
    auto& rec = records[r];
    if (rec.size() != 2) {
      throw DataError("corpus record " + std::to_string(r + 1) + ": expected 2 fields (label,text), "
                      "found " + std::to_string(rec.size()));
    }
    corpus.documents.push_back({std::string(trim(rec[0])), std::move(rec[1])});
  }
  if (corpus.documents.empty()) throw DataError("corpus is empty");
  return corpus;
}

Corpus load_corpus_csv(const std::filesystem::path& path, bool has_header) {
  return parse_corpus_csv(read_file(path), has_header);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_token_byte(c)) {
      cur += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], i).second)
      throw std::invalid_argument("vocabulary term '" + terms_[i] + "' repeated");
  }
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Matrix count_vectors(const Corpus& corpus, const Vocabulary& vocab) {
  Matrix x(corpus.documents.size(), vocab.size());
  for (std::size_t i = 0; i < corpus.documents.size(); ++i)
    for (const auto& tok : tokenize(corpus.documents[i].text))
      if (auto j = vocab.index_of(tok)) x(i, *j) += 1.0;
  return x;
}

Vector binarize_labels(std::span<const int> scores, int score_min, int score_max) {
  Vector y(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] < score_min || scores[i] > score_max) {
      throw DataError("score " + std::to_string(scores[i]) + " outside [" +
                      std::to_string(score_min) + ", " + std::to_string(score_max) + "]");
    }
    y[i] = scores[i] >= 4 ? 1.0 : -1.0;
  }
  return y;
}

BagOfWords build_bow(const Corpus& corpus, const BowOptions& options) {
  if (corpus.documents.empty()) throw DataError("cannot build bag of words from an empty corpus");
  if (options.vocab_cap == 0) throw std::invalid_argument("vocab_cap must be >= 1");

  std::map<std::string, std::size_t> freq;
  for (const auto& doc : corpus.documents)
    for (auto& tok : tokenize(doc.text)) ++freq[std::move(tok)];
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > options.vocab_cap) ranked.resize(options.vocab_cap);
  std::vector<std::string> terms;
  terms.reserve(ranked.size());
  for (auto& [term, count] : ranked) terms.push_back(term);
  Vocabulary vocab(std::move(terms));
  if (vocab.size() == 0) throw DataError("corpus contains no tokens");

  Vector y;
  if (options.positive_label) {
    y.reserve(corpus.documents.size());
    for (const auto& doc : corpus.documents) y.push_back(doc.label == *options.positive_label ? 1.0 : -1.0);
  } else {
    std::vector<int> scores;
    scores.reserve(corpus.documents.size());
    for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
      auto v = parse_int(corpus.documents[i].label);
      if (!v) {
        throw DataError("document " + std::to_string(i + 1) + ": label '" +
                        corpus.documents[i].label +
                        "' is not an integer score; name a positive category instead");
      }
      scores.push_back(*v);
    }
    y = binarize_labels(scores, options.score_min, options.score_max);
  }

  Matrix x = count_vectors(corpus, vocab);
  std::vector<std::string> names = vocab.terms();
  return {std::move(vocab), Dataset(std::move(x), std::move(y), std::move(names))};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k > n) throw std::invalid_argument("cannot sample more indices than rows");
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::size_t> out;
  out.reserve(k);
  std::mt19937_64 rng(seed);
  std::sample(all.begin(), all.end(), std::back_inserter(out), k, rng);
  return out;
}

Dataset gen_synthetic_sparse(std::size_t n, std::size_t d, double p, std::uint64_t seed,
                             const SyntheticOptions& options) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("sparsity p must lie in (0, 1]");
  if (n == 0 || d == 0) throw std::invalid_argument("n and d must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution nonzero(p);

  Matrix x(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (p >= 1.0 || nonzero(rng)) x(i, j) = normal(rng);
  Vector theta(d);
  for (double& t : theta) t = normal(rng);
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = dot(x.row(i), theta) + options.noise * normal(rng);
    y[i] = options.classification ? (v > 0.0 ? 1.0 : -1.0) : v;
  }
  return Dataset(std::move(x), std::move(y));
}

Corpus augment_dropout(const Corpus& corpus, double drop_prob, std::uint64_t seed, bool shuffle) {
  if (!(drop_prob >= 0.0 && drop_prob < 1.0)) throw std::invalid_argument("drop_prob must lie in [0, 1)");
  if (drop_prob == 0.0 && !shuffle) return corpus;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution drop(drop_prob);
  Corpus out;
  out.documents.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    std::vector<std::string> kept;
    std::istringstream words(doc.text);
    std::string w;
    while (words >> w)
      if (drop_prob == 0.0 || !drop(rng)) kept.push_back(std::move(w));
    if (shuffle) std::shuffle(kept.begin(), kept.end(), rng);
    std::string text;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (i) text += ' ';
      text += kept[i];
    }
    out.documents.push_back({doc.label, std::move(text)});
  }
  return out;
}

}  // namespace unlearn
