// Writes the bundled synthetic corpora.
//   make_synthetic <out.conllu> [trend]

#include <fstream>
#include <iostream>
#include <string>

#include "carclass/corpus.hpp"
#include "carclass/synthetic.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_synthetic <out.conllu> [trend]\n";
    return 2;
  }
  carclass::SyntheticOptions opts;
  if (argc > 2 && std::string(argv[2]) == "trend") opts.head_discriminative = false;
  std::ofstream out(argv[1], std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << argv[1] << '\n';
    return 3;
  }
  carclass::serialize_corpus(carclass::make_synthetic_corpus(opts), out);
  return 0;
}
