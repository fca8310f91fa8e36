#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "carclass/classifier.hpp"
#include "carclass/corpus.hpp"
#include "carclass/mining.hpp"

namespace carclass {

struct ClassMetrics {
  double recall = 0.0;
  double precision = 0.0;
  double f_measure = 0.0;
  friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

/// Metrics of one class on one test fold. Recall is undefined when the class
/// has no document in the fold; precision is undefined (and counted as 0)
/// when the class was never predicted.
struct FoldClassMetrics {
  std::size_t actual = 0;
  std::size_t predicted = 0;
  std::size_t correct = 0;
  bool defined = false;  // actual > 0
  bool precision_defined = false;
  ClassMetrics metrics;
};

struct FoldReport {
  std::map<std::string, FoldClassMetrics> per_class;
  std::size_t rule_count = 0;
  double mean_variety = 0.0;
  double mean_dispersion = 0.0;
  double avg_transaction_size = 0.0;
  std::size_t abstentions = 0;
  std::vector<std::string> train_doc_ids;
  std::vector<std::string> test_doc_ids;
};

struct EvalReport {
  std::map<std::string, ClassMetrics> per_class;  // fold averages
  ClassMetrics macro;
  double rho = 0.0;    // mean rule count
  double beta = 0.0;   // mean variety
  double delta = 0.0;  // mean dispersion
  double avg_transaction_size = 0.0;
  double min_support = 0.0;
  double min_confidence = 0.0;
  std::uint64_t seed = 42;
  std::string strategy;
  std::size_t hyper_n = 0;
  std::vector<std::string> undefined_precision;  // classes with a fold where they were never predicted
  bool out_of_window = false;                    // FindOptimal missed the rule-count window
  std::size_t probes = 0;
  std::vector<FoldReport> folds;
};

struct SearchConfig {
  double sigma0 = 0.01;
  double kappa0 = 0.6;
  double rho0 = 1000;
  double tolerance = 2;
  std::uint64_t seed = 42;
  std::size_t max_probes = 60;
  std::size_t folds = 10;
};

struct EvalOptions {
  TrainOptions train;
  std::size_t max_itemset_size = 5;
  std::size_t folds = 10;
  std::uint64_t seed = 42;
};

/// Seeded Fisher–Yates shuffle (mt19937_64) of document indices, cut into k
/// contiguous parts whose sizes differ by at most one.
std::vector<std::vector<std::size_t>> partition(const Corpus& corpus, std::size_t k, std::uint64_t seed);

/// Cross-validation state that does not depend on (σ, κ): folds plus the
/// encoded training transactions and test documents of each fold.
class CrossValidator {
 public:
  CrossValidator(const Corpus& corpus, const EvalOptions& options);
  ~CrossValidator();
  CrossValidator(CrossValidator&&) noexcept;
  CrossValidator& operator=(CrossValidator&&) noexcept;

  EvalReport evaluate(double min_support, double min_confidence) const;
  /// Mean rule count only (no classification).
  double mean_rule_count(double min_support, double min_confidence) const;
  /// Rules mined on the training part of fold `i`.
  std::vector<CAR> fold_rules(std::size_t i, double min_support, double min_confidence) const;
  const std::vector<std::vector<std::size_t>>& folds() const noexcept;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

EvalReport single_evaluate(const Corpus& corpus, double min_support, double min_confidence, const EvalOptions& options);

struct Probe {
  double min_support = 0.0;
  double min_confidence = 0.0;
  double rho = 0.0;
  double macro_f = 0.0;
};

struct SearchResult {
  double min_support = 0.0;
  double min_confidence = 0.0;
  double rho = 0.0;
  double macro_f = 0.0;
  bool in_window = false;
  std::vector<Probe> probes;
};

/// Coordinate search: a geometric σ ladder (×/÷1.5) brackets the window
/// [ρ0 − tol, ρ0 + tol], bisection closes it, then κ moves in 0.02 steps
/// around κ0, re-solving σ each time. Returns the in-window probe with the
/// best macro F, else the probe closest to ρ0 with `in_window = false`.
SearchResult find_optimal(const CrossValidator& cv, const SearchConfig& config);
SearchResult find_optimal(const Corpus& corpus, const SearchConfig& config, const EvalOptions& options);

EvalReport evaluate(const Corpus& corpus, const SearchConfig& config, const EvalOptions& options);

enum class SweepAxis { tfidf_n, hyper_order };

struct CurveRow {
  std::size_t x = 0;
  double recall = 0.0;
  double precision = 0.0;
  double f_measure = 0.0;
  double variety = 0.0;
  double dispersion = 0.0;
  friend bool operator==(const CurveRow&, const CurveRow&) = default;
};

/// Reruns evaluate for each axis value; `base` supplies the dependency
/// strategy and lexicon for hyper_order sweeps.
std::vector<CurveRow> sweep(const Corpus& corpus, const SearchConfig& config, const EvalOptions& base, SweepAxis axis,
                            const std::vector<std::size_t>& values);

std::string report_to_json(const EvalReport& report);
/// Recall/Precision/F-measure rows × classes + AVG, in percent, with a
/// MinSupp/MinConf/Var./Disp./AvgTransSize footer.
std::string report_to_tsv(const EvalReport& report);
std::string curve_to_tsv(const std::vector<CurveRow>& rows, SweepAxis axis);

}  // namespace carclass
