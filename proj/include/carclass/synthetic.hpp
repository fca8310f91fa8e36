#pragma once

#include <cstddef>
#include <cstdint>

#include "carclass/corpus.hpp"

namespace carclass {

/// Knobs for the generated news-like corpus. Every sentence is
/// "[det] subject verb det object ." with the verb as root, the subject
/// attached by nsubj and the object by dobj.
struct SyntheticOptions {
  std::size_t documents = 200;
  std::size_t classes = 4;  // at most 4
  std::size_t min_sentences = 3;
  std::size_t max_sentences = 5;
  std::uint64_t seed = 7;
  bool head_discriminative = true;     // root verbs drawn from the class vocabulary
  bool subject_discriminative = true;  // subjects drawn from the class vocabulary
  double subject_noise = 0.1;          // share of subjects taken from the shared pool
  double nsubj_rate = 0.85;            // share of sentences with an explicit subject
};

Corpus make_synthetic_corpus(const SyntheticOptions& options = {});

/// One-token documents: item j (1-based) occurs in `base + j` documents and
/// always under class j mod `classes`. Under HEAD_ONLY every item with enough
/// support yields exactly one rule, so the rule count falls one item at a time
/// as σ rises.
Corpus make_staircase_corpus(std::size_t items = 70, std::size_t base = 10, std::size_t classes = 4);

}  // namespace carclass
