#pragma once

// Exhaustive bounded searches for solutions of x^n +- y^m = Z style
// equations, chunked so a run can be split, parallelised and resumed.

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "fcp/arith.hpp"
#include "fcp/families.hpp"
#include "fcp/products.hpp"
#include "fcp/u128.hpp"

namespace fcp {

// ---------------------------------------------------------------------------
// Power table

struct TablePower {
  uint64_t base = 0;
  unsigned exponent = 0;
};

inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{2} << 30;

struct ResourceError : std::runtime_error {
  ResourceError(const std::string& what, std::size_t required)
      : std::runtime_error(what), required_bytes(required) {}
  std::size_t required_bytes;
};

/// Every x^e <= bound with x >= 2 and e in [min_exp, max_exp], one entry per
/// value carrying all of its representations (exponent ascending).
class PowerTable {
 public:
  struct Entry {
    u128 value = 0;
    std::vector<TablePower> reps;
  };

  PowerTable() = default;
  PowerTable(u128 bound, unsigned min_exp, unsigned max_exp, std::vector<Entry> entries)
      : bound_(bound), min_exp_(min_exp), max_exp_(max_exp), entries_(std::move(entries)) {}

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const Entry* find(u128 value) const;
  u128 bound() const { return bound_; }
  unsigned min_exp() const { return min_exp_; }
  unsigned max_exp() const { return max_exp_; }

 private:
  u128 bound_ = 0;
  unsigned min_exp_ = 0;
  unsigned max_exp_ = 0;
  std::vector<Entry> entries_;
};

/// Upper estimate of the entry count, used for the memory check.
std::size_t power_table_size_estimate(u128 bound, unsigned min_exp, unsigned max_exp);

/// Throws std::invalid_argument for bound < 4 or a bad exponent range and
/// ResourceError when the estimate exceeds `memory_budget` bytes.
PowerTable build_power_table(u128 bound, unsigned min_exp, unsigned max_exp,
                             std::size_t memory_budget = kDefaultMemoryBudget);

// ---------------------------------------------------------------------------
// Configuration

enum class Mode { fermat_catalan, gbtz, nonmaxgcd3, fp, maxgcd_spread1, pillai, survey };
enum class SignMode { plus, minus, both };
enum class SurveyBase { nonmaxgcd, gbtz };

const char* to_string(Mode m);
const char* to_string(SignMode s);
const char* to_string(SurveyBase b);
std::optional<Mode> parse_mode(std::string_view text);
std::optional<SignMode> parse_sign_mode(std::string_view text);
std::optional<SurveyBase> parse_survey_base(std::string_view text);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr unsigned kMaxSearchBits = 120;

/// All thresholds explicit. For fermat-catalan `max_exp` caps min(n, m, k)
/// and `min_exp` is the smallest exponent considered; for the product modes
/// they bound the exponents n and m of the two powers.
struct SearchConfig {
  Mode mode = Mode::fermat_catalan;
  u128 max_value = u128{1} << 34;
  unsigned min_exp = 2;
  unsigned max_exp = 113;
  SignMode sign = SignMode::plus;
  bool require_coprime = true;
  Rational f_bound = 1;
  bool f_strict = true;
  std::optional<Rational> q_bound;
  std::optional<Rational> m_bound;
  unsigned degree_min = 1;
  unsigned degree_max = 1;
  uint64_t min_spread = 0;
  std::optional<uint64_t> max_spread;
  uint64_t coeff_a = 1, coeff_b = 1, coeff_c = 1;
  uint64_t pillai_difference = 1;
  SurveyBase survey_base = SurveyBase::nonmaxgcd;
};

/// Desk-scale defaults for a mode.
SearchConfig default_config(Mode mode);

/// Throws ConfigError on inconsistent settings.
void validate(const SearchConfig& cfg);

nlohmann::json config_to_json(const SearchConfig& cfg);
/// Fields absent from `j` keep their values from `base`.
SearchConfig config_from_json(const nlohmann::json& j, SearchConfig base);
/// FNV-1a 64 over the canonical JSON text, as 16 hex digits.
std::string config_digest(const SearchConfig& cfg);

/// Bounds the source material reports as verified, recorded for reference.
struct PublishedBound {
  unsigned min_degree;
  unsigned max_degree;
  unsigned bits;
};
const std::vector<PublishedBound>& published_fc_bounds();
const std::vector<PublishedBound>& published_product_bounds();

// ---------------------------------------------------------------------------
// Records

struct TermWitness {
  enum class Kind { one, power, product, constant };
  Kind kind = Kind::power;
  Natural value;
  std::vector<PowerRep> powers;          // every representation in range
  std::optional<PowerRep> chosen;        // the one used in the weight
  std::optional<ProductDecomposition> product;
};

struct SurveyCell {
  unsigned n = 0, m = 0, d = 0;
  uint64_t spread = 0;

  friend bool operator==(const SurveyCell&, const SurveyCell&) = default;
};

/// terms[0] (+|-) terms[1] == terms[2]; for fermat-catalan with coefficients
/// A x + B y = C z.
struct SolutionRecord {
  Mode mode = Mode::fermat_catalan;
  Sign sign = Sign::plus;
  std::array<TermWitness, 3> terms;
  Rational weight;
  Natural gcd;
  Rational gcd_ratio;
  bool coprime = false;
  bool maxgcd = false;
  std::optional<bool> standard;
  std::optional<StandardWitness> standard_witness;
  std::vector<SurveyCell> cells;
};

bool canonical_less(const SolutionRecord& a, const SolutionRecord& b);
bool same_triple(const SolutionRecord& a, const SolutionRecord& b);
/// Sorts canonically and folds records with identical value triples.
void normalize_records(std::vector<SolutionRecord>& records);

nlohmann::ordered_json record_to_json(const SolutionRecord& r);
SolutionRecord record_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Searches

/// Immutable state shared by every chunk of one search.
class SearchPlan {
 public:
  virtual ~SearchPlan() = default;
  virtual std::vector<SolutionRecord> run_chunk(std::size_t index, std::size_t count) const = 0;
  /// Pairs examined so far; informational.
  virtual std::size_t work_units() const = 0;
};

std::unique_ptr<SearchPlan> make_plan(const SearchConfig& cfg);

/// Runs every chunk of a single-chunk plan in the calling thread.
std::vector<SolutionRecord> run_all(const SearchConfig& cfg);

std::vector<SolutionRecord> search_fermat_catalan(const SearchConfig& cfg);
std::vector<SolutionRecord> search_product_target(const SearchConfig& cfg);

struct PillaiPair {
  ProductDecomposition lower;
  ProductDecomposition upper;
};
std::vector<PillaiPair> search_pillai_products(uint64_t difference, SearchConfig cfg);

using SurveyKey = std::tuple<unsigned, unsigned, unsigned>;  // (n, m, d)
std::map<SurveyKey, std::size_t> survey_combinations(const SearchConfig& cfg);
/// Folds survey records into per-cell counts over the configured ranges.
std::map<SurveyKey, std::size_t> survey_counts(const SearchConfig& cfg,
                                               const std::vector<SolutionRecord>& records);

// ---------------------------------------------------------------------------
// Chunked execution

struct CheckpointMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ChunkOptions {
  std::size_t chunk_count = 1;
  unsigned threads = 1;
  std::optional<std::filesystem::path> checkpoint;
  bool resume = false;
  /// Stop once this many chunks are committed, as if interrupted.
  std::optional<std::size_t> stop_after;
};

struct RunOutcome {
  std::vector<SolutionRecord> records;
  std::size_t chunk_count = 0;
  std::size_t chunks_completed = 0;
  bool interrupted = false;
  std::size_t resumed_from = 0;
  /// Pairs examined by this process (chunks restored from a checkpoint excluded).
  std::size_t work_units = 0;
};

RunOutcome run_chunked(const SearchConfig& cfg, const ChunkOptions& options);

inline constexpr int kCheckpointVersion = 1;

}  // namespace fcp
