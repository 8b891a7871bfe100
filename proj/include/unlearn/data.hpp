#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "unlearn/model.hpp"

namespace unlearn {

// ---- numeric CSV: comma separated, '.' decimals, optional single header
// row, last column is the label.

Dataset parse_numeric_csv(std::string_view text, bool has_header = false);
Dataset load_numeric_csv(const std::filesystem::path& path, bool has_header = false);
std::string format_numeric_csv(const Dataset& data, bool with_header = false);
void write_numeric_csv(const Dataset& data, const std::filesystem::path& path,
                       bool with_header = false);
/// Feature rows only (no label column), as used by precomputed feature tables.
Matrix load_feature_table(const std::filesystem::path& path, bool has_header = false);

/// RFC-4180 records: quoted fields may hold commas, newlines and "" escapes.
std::vector<std::vector<std::string>> parse_csv_records(std::string_view text);

// ---- text corpora

struct Document {
  std::string label;
  std::string text;
};

struct Corpus {
  std::vector<Document> documents;
};

/// Two-column `label,text` CSV.
Corpus parse_corpus_csv(std::string_view text, bool has_header = false);
Corpus load_corpus_csv(const std::filesystem::path& path, bool has_header = false);

/// Lower-cased maximal runs of ASCII letters/digits (bytes >= 0x80 are kept
/// inside tokens so UTF-8 words stay whole).
std::vector<std::string> tokenize(std::string_view text);

class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> terms);

  const std::vector<std::string>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  std::optional<std::size_t> index_of(std::string_view term) const;

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
};

constexpr std::size_t kDefaultVocabCap = 1600;

struct BowOptions {
  std::size_t vocab_cap = kDefaultVocabCap;
  /// Category that maps to +1 (others -1). When unset, labels must be
  /// integer review scores and go through binarize_labels.
  std::optional<std::string> positive_label;
  int score_min = 1;
  int score_max = 5;
};

struct BagOfWords {
  Vocabulary vocabulary;
  Dataset data;
};

/// Vocabulary = the vocab_cap most frequent tokens (ties broken
/// lexicographically); each document becomes its vector of term counts.
BagOfWords build_bow(const Corpus& corpus, const BowOptions& options = {});
/// Count vectors for new documents against an existing vocabulary.
Matrix count_vectors(const Corpus& corpus, const Vocabulary& vocab);

/// Review scores >= 4 are favorable (+1); the rest -1.
Vector binarize_labels(std::span<const int> scores, int score_min = 1, int score_max = 5);

// ---- synthetic data

struct SyntheticOptions {
  double noise = 0.1;
  /// Replace y by +1 / -1 according to the sign of X theta* + noise.
  bool classification = false;
};

/// Each entry is nonzero with probability p (standard normal value);
/// y = X theta* + noise * eps with theta*, eps standard normal.
Dataset gen_synthetic_sparse(std::size_t n, std::size_t d, double p, std::uint64_t seed,
                             const SyntheticOptions& options = {});

/// Independent stream seed derived from a base seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

/// k distinct indices in [0, n), ascending, drawn uniformly.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed);

/// Drops each whitespace-separated token with probability drop_prob and
/// optionally shuffles the survivors. Labels are untouched.
Corpus augment_dropout(const Corpus& corpus, double drop_prob, std::uint64_t seed,
                       bool shuffle = false);

}  // namespace unlearn
