#include "carclass/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "carclass/error.hpp"
#include "json.hpp"
#include "number_format.hpp"

namespace carclass {

namespace {

// Uniform integer in [0, n) by rejection; std::uniform_int_distribution is
// implementation-defined and would break cross-platform reproducibility.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % n;
  while (true) {
    const std::uint64_t x = rng();
    if (x < limit) return x % n;
  }
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

std::vector<std::vector<std::size_t>> partition(const Corpus& corpus, std::size_t k, std::uint64_t seed) {
  const std::size_t n = corpus.documents().size();
  if (k == 0) throw ConfigError("number of folds must be positive");
  if (n < k) throw DomainError("cannot split " + std::to_string(n) + " documents into " + std::to_string(k) + " folds");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[bounded(rng, i + 1)]);

  std::vector<std::vector<std::size_t>> parts(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    parts[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos), order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return parts;
}

struct CrossValidator::State {
  struct TestDoc {
    std::string id;
    std::string class_label;
    std::vector<EncodedSentence> sentences;
  };
  struct Fold {
    std::vector<Transaction> transactions;
    std::vector<TestDoc> test;
    double avg_transaction_size = 0.0;
    std::vector<std::string> train_ids;
    std::vector<std::string> test_ids;
  };

  EvalOptions options;
  std::set<std::string> classes;
  std::vector<std::vector<std::size_t>> parts;
  std::vector<Fold> folds;

  MiningParams params(double s, double c) const { return {s, c, options.max_itemset_size}; }
};

CrossValidator::CrossValidator(const Corpus& corpus, const EvalOptions& options) : state_(std::make_unique<State>()) {
  State& st = *state_;
  st.options = options;
  st.classes = corpus.classes();
  st.parts = partition(corpus, options.folds, options.seed);
  const auto& docs = corpus.documents();

  for (std::size_t f = 0; f < st.parts.size(); ++f) {
    std::vector<bool> held_out(docs.size(), false);
    for (std::size_t i : st.parts[f]) held_out[i] = true;
    std::vector<const Document*> training;
    State::Fold fold;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (held_out[i]) continue;
      training.push_back(&docs[i]);
      fold.train_ids.push_back(docs[i].id);
    }
    const auto sentences = forgetful(training);
    const SentenceEncoder encoder(options.train, sentences);
    fold.transactions = encoder.encode_all(sentences).transactions;
    if (!fold.transactions.empty()) {
      std::vector<Itemset> itemsets;
      for (const Transaction& t : fold.transactions) itemsets.push_back(t.itemset);
      fold.avg_transaction_size = average_transaction_size(itemsets);
    }
    for (std::size_t i : st.parts[f]) {
      State::TestDoc td{docs[i].id, docs[i].class_label, {}};
      for (const Sentence& s : docs[i].sentences) td.sentences.push_back({s.id, encoder.encode(s).itemset()});
      fold.test_ids.push_back(docs[i].id);
      fold.test.push_back(std::move(td));
    }
    // Provenance: no held-out document may contribute to this fold's rules.
    for (const std::string& id : fold.test_ids)
      if (std::find(fold.train_ids.begin(), fold.train_ids.end(), id) != fold.train_ids.end())
        throw std::logic_error("fold leakage: document " + id + " is both training and test");
    st.folds.push_back(std::move(fold));
  }
}

CrossValidator::~CrossValidator() = default;
CrossValidator::CrossValidator(CrossValidator&&) noexcept = default;
CrossValidator& CrossValidator::operator=(CrossValidator&&) noexcept = default;

const std::vector<std::vector<std::size_t>>& CrossValidator::folds() const noexcept { return state_->parts; }

std::vector<CAR> CrossValidator::fold_rules(std::size_t i, double min_support, double min_confidence) const {
  const auto& fold = state_->folds.at(i);
  if (fold.transactions.empty()) return {};
  return apriori(fold.transactions, state_->params(min_support, min_confidence));
}

double CrossValidator::mean_rule_count(double min_support, double min_confidence) const {
  std::vector<double> counts;
  for (std::size_t i = 0; i < state_->folds.size(); ++i)
    counts.push_back(static_cast<double>(fold_rules(i, min_support, min_confidence).size()));
  return mean(counts);
}

EvalReport CrossValidator::evaluate(double min_support, double min_confidence) const {
  const State& st = *state_;
  EvalReport report;
  report.min_support = min_support;
  report.min_confidence = min_confidence;
  report.seed = st.options.seed;
  report.strategy = to_string(st.options.train.strategy);
  report.hyper_n = st.options.train.hyper_n;

  std::set<std::string> undefined_precision;
  std::map<std::string, std::vector<ClassMetrics>> per_class_folds;
  std::vector<double> rule_counts, varieties, dispersions, sizes;

  for (std::size_t f = 0; f < st.folds.size(); ++f) {
    const auto& fold = st.folds[f];
    const std::vector<CAR> rules = fold_rules(f, min_support, min_confidence);
    FoldReport fr;
    fr.rule_count = rules.size();
    fr.avg_transaction_size = fold.avg_transaction_size;
    fr.train_doc_ids = fold.train_ids;
    fr.test_doc_ids = fold.test_ids;
    for (const std::string& c : st.classes) fr.per_class[c];

    std::vector<double> beta, delta;
    for (const auto& doc : fold.test) {
      const ClassificationResult res = classify_itemsets(rules, doc.sentences, st.classes);
      beta.push_back(static_cast<double>(res.variety));
      delta.push_back(res.dispersion);
      ++fr.per_class[doc.class_label].actual;
      if (!res.predicted_class) {
        ++fr.abstentions;
        continue;
      }
      auto& pred = fr.per_class[*res.predicted_class];
      ++pred.predicted;
      if (*res.predicted_class == doc.class_label) ++pred.correct;
    }
    fr.mean_variety = mean(beta);
    fr.mean_dispersion = mean(delta);

    for (auto& [c, m] : fr.per_class) {
      m.defined = m.actual > 0;
      m.precision_defined = m.predicted > 0;
      if (!m.defined) continue;
      m.metrics.recall = static_cast<double>(m.correct) / static_cast<double>(m.actual);
      m.metrics.precision = m.precision_defined ? static_cast<double>(m.correct) / static_cast<double>(m.predicted) : 0.0;
      const double rp = m.metrics.recall + m.metrics.precision;
      m.metrics.f_measure = rp > 0.0 ? 2.0 * m.metrics.recall * m.metrics.precision / rp : 0.0;
      if (!m.precision_defined) undefined_precision.insert(c);
      per_class_folds[c].push_back(m.metrics);
    }
    rule_counts.push_back(static_cast<double>(fr.rule_count));
    varieties.push_back(fr.mean_variety);
    dispersions.push_back(fr.mean_dispersion);
    sizes.push_back(fr.avg_transaction_size);
    report.folds.push_back(std::move(fr));
  }

  std::vector<double> mr, mp, mf;
  for (const std::string& c : st.classes) {
    std::vector<double> r, p, fm;
    for (const ClassMetrics& m : per_class_folds[c]) {
      r.push_back(m.recall);
      p.push_back(m.precision);
      fm.push_back(m.f_measure);
    }
    ClassMetrics avg{mean(r), mean(p), mean(fm)};
    report.per_class[c] = avg;
    mr.push_back(avg.recall);
    mp.push_back(avg.precision);
    mf.push_back(avg.f_measure);
  }
  report.macro = {mean(mr), mean(mp), mean(mf)};
  report.rho = mean(rule_counts);
  report.beta = mean(varieties);
  report.delta = mean(dispersions);
  report.avg_transaction_size = mean(sizes);
  report.undefined_precision.assign(undefined_precision.begin(), undefined_precision.end());
  return report;
}

EvalReport single_evaluate(const Corpus& corpus, double min_support, double min_confidence, const EvalOptions& options) {
  return CrossValidator(corpus, options).evaluate(min_support, min_confidence);
}

SearchResult find_optimal(const CrossValidator& cv, const SearchConfig& config) {
  if (config.rho0 < 1) throw ConfigError("target rule count must be at least 1");
  if (config.tolerance < 0) throw ConfigError("rule-count tolerance must be non-negative");
  const double lo_target = config.rho0 - config.tolerance;
  const double hi_target = config.rho0 + config.tolerance;
  SearchResult result;
  std::map<std::pair<double, double>, Probe> cache;

  auto probe = [&](double sigma, double kappa) -> std::optional<Probe> {
    if (auto it = cache.find({sigma, kappa}); it != cache.end()) return it->second;
    if (result.probes.size() >= config.max_probes) return std::nullopt;
    const EvalReport r = cv.evaluate(sigma, kappa);
    Probe p{sigma, kappa, r.rho, r.macro.f_measure};
    result.probes.push_back(p);
    cache.emplace(std::make_pair(sigma, kappa), p);
    return p;
  };
  auto in_window = [&](const Probe& p) { return p.rho >= lo_target && p.rho <= hi_target; };

  // Rule count is non-increasing in σ: bracket with a geometric ladder, then bisect.
  auto solve_sigma = [&](double kappa, double sigma) -> std::optional<double> {
    double too_many = -1.0;  // largest σ seen with ρ above the window
    double too_few = -1.0;   // smallest σ seen with ρ below the window
    while (true) {
      auto p = probe(sigma, kappa);
      if (!p) return std::nullopt;
      if (in_window(*p)) return sigma;
      if (p->rho > hi_target) {
        too_many = std::max(too_many, sigma);
        if (sigma >= 1.0) return std::nullopt;
      } else {
        too_few = too_few < 0 ? sigma : std::min(too_few, sigma);
        if (sigma <= 0.0) return std::nullopt;
      }
      if (too_many >= 0 && too_few >= 0) {
        if (too_few - too_many < 1e-9) return std::nullopt;
        sigma = 0.5 * (too_many + too_few);
      } else if (too_many >= 0) {
        sigma = sigma <= 0.0 ? 1e-4 : std::min(1.0, sigma * 1.5);
      } else {
        sigma /= 1.5;
        if (sigma < 1e-6) sigma = 0.0;
      }
    }
  };

  const double kappa0 = std::clamp(config.kappa0, 0.0, 1.0);
  auto anchor = solve_sigma(kappa0, std::clamp(config.sigma0, 0.0, 1.0));
  if (!anchor && kappa0 > 0.0 && result.probes.size() < config.max_probes) {
    // Lowering κ is the only way to gain rules once σ reaches 0.
    if (!result.probes.empty() && result.probes.back().rho < lo_target && result.probes.back().min_support == 0.0)
      anchor = solve_sigma(0.0, 0.0);
  }
  if (anchor) {
    double sigma = *anchor;
    for (int step = 1; result.probes.size() < config.max_probes && step <= 25; ++step) {
      bool any = false;
      for (double kappa : {kappa0 + 0.02 * step, kappa0 - 0.02 * step}) {
        if (kappa < -1e-12 || kappa > 1.0 + 1e-12) continue;
        kappa = std::clamp(std::round(kappa * 1e9) / 1e9, 0.0, 1.0);
        any = true;
        if (auto s = solve_sigma(kappa, sigma)) sigma = *s;
      }
      if (!any) break;
    }
  }

  if (result.probes.empty()) throw Error("FindOptimal: no probe could be evaluated (max_probes = 0)");
  const Probe* best = nullptr;
  for (const Probe& p : result.probes) {
    if (!in_window(p)) continue;
    if (best == nullptr || p.macro_f > best->macro_f) best = &p;
  }
  result.in_window = best != nullptr;
  if (!best) {
    for (const Probe& p : result.probes) {
      const double d = std::abs(p.rho - config.rho0);
      if (best == nullptr || d < std::abs(best->rho - config.rho0) ||
          (d == std::abs(best->rho - config.rho0) && p.macro_f > best->macro_f))
        best = &p;
    }
  }
  result.min_support = best->min_support;
  result.min_confidence = best->min_confidence;
  result.rho = best->rho;
  result.macro_f = best->macro_f;
  return result;
}

SearchResult find_optimal(const Corpus& corpus, const SearchConfig& config, const EvalOptions& options) {
  return find_optimal(CrossValidator(corpus, options), config);
}

EvalReport evaluate(const Corpus& corpus, const SearchConfig& config, const EvalOptions& options) {
  const CrossValidator cv(corpus, options);
  const SearchResult search = find_optimal(cv, config);
  EvalReport report = cv.evaluate(search.min_support, search.min_confidence);
  report.out_of_window = !search.in_window;
  report.probes = search.probes.size();
  return report;
}

std::vector<CurveRow> sweep(const Corpus& corpus, const SearchConfig& config, const EvalOptions& base, SweepAxis axis,
                            const std::vector<std::size_t>& values) {
  std::vector<CurveRow> rows;
  for (std::size_t x : values) {
    EvalOptions opts = base;
    if (axis == SweepAxis::tfidf_n) {
      if (x == 0) throw ConfigError("tfidf sweep values must be positive");
      opts.train.strategy = TfidfStrategy{x};
    } else {
      opts.train.hyper_n = x;
    }
    const EvalReport r = evaluate(corpus, config, opts);
    rows.push_back({x, r.macro.recall, r.macro.precision, r.macro.f_measure, r.beta, r.delta});
  }
  return rows;
}

std::string report_to_json(const EvalReport& r) {
  using nlohmann::json;
  json j;
  json classes = json::object();
  for (const auto& [c, m] : r.per_class)
    classes[c] = {{"recall", m.recall}, {"precision", m.precision}, {"f_measure", m.f_measure}};
  j["per_class"] = classes;
  j["macro"] = {{"recall", r.macro.recall}, {"precision", r.macro.precision}, {"f_measure", r.macro.f_measure}};
  j["rho"] = r.rho;
  j["variety"] = r.beta;
  j["dispersion"] = r.delta;
  j["avg_transaction_size"] = r.avg_transaction_size;
  j["min_support"] = r.min_support;
  j["min_confidence"] = r.min_confidence;
  j["seed"] = r.seed;
  j["strategy"] = r.strategy;
  j["hyper_n"] = r.hyper_n;
  j["undefined_precision"] = r.undefined_precision;
  j["out_of_window"] = r.out_of_window;
  j["probes"] = r.probes;
  json folds = json::array();
  for (const FoldReport& f : r.folds) {
    folds.push_back({{"rule_count", f.rule_count},
                     {"mean_variety", f.mean_variety},
                     {"mean_dispersion", f.mean_dispersion},
                     {"avg_transaction_size", f.avg_transaction_size},
                     {"abstentions", f.abstentions},
                     {"test_documents", f.test_doc_ids.size()}});
  }
  j["folds"] = folds;
  return j.dump(2) + "\n";
}

std::string report_to_tsv(const EvalReport& r) {
  auto pct = [](double v) { return detail::fixed(100.0 * v, 2); };
  std::ostringstream out;
  for (const auto& [c, m] : r.per_class) out << '\t' << c;
  out << "\tAVG\n";
  auto row = [&](const char* name, double ClassMetrics::*field) {
    out << name;
    for (const auto& [c, m] : r.per_class) out << '\t' << pct(m.*field);
    out << '\t' << pct(r.macro.*field) << '\n';
  };
  row("Recall", &ClassMetrics::recall);
  row("Precision", &ClassMetrics::precision);
  row("F-measure", &ClassMetrics::f_measure);
  out << "MinSupp=" << detail::fixed(r.min_support, 3) << ", MinConf=" << detail::fixed(100.0 * r.min_confidence, 1)
      << ", Var.=" << detail::fixed(r.beta, 2) << ", Disp.=" << detail::fixed(r.delta, 2)
      << ", AvgTransSize=" << detail::fixed(r.avg_transaction_size, 2) << '\n';
  return out.str();
}

std::string curve_to_tsv(const std::vector<CurveRow>& rows, SweepAxis axis) {
  std::ostringstream out;
  out << (axis == SweepAxis::tfidf_n ? "N" : "order") << "\tRecall\tPrecision\tF-measure\tVariety\tDispersion\n";
  for (const CurveRow& row : rows)
    out << row.x << '\t' << detail::shortest(row.recall) << '\t' << detail::shortest(row.precision) << '\t'
        << detail::shortest(row.f_measure) << '\t' << detail::shortest(row.variety) << '\t'
        << detail::shortest(row.dispersion) << '\n';
  return out.str();
}

}  // namespace carclass
