#pragma once

#include <filesystem>
#include <string>

#include "carclass/corpus.hpp"

namespace testing {

inline std::filesystem::path data(const std::string& name) { return std::filesystem::path(CARCLASS_TEST_DATA) / name; }

inline const carclass::Sentence& only_sentence(const carclass::Corpus& c) { return c.documents().at(0).sentences.at(0); }

}  // namespace testing
