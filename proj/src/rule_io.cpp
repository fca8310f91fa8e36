#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "carclass/error.hpp"
#include "carclass/mining.hpp"
#include "json.hpp"
#include "number_format.hpp"
#include "text_util.hpp"

namespace carclass {

namespace {

std::string escape_item(const std::string& item) {
  std::string out;
  for (char c : item) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case ',': out += "\\,"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<std::string> unescape_items(std::string_view field, std::size_t line) {
  std::vector<std::string> items;
  std::string cur;
  for (std::size_t i = 0; i < field.size(); ++i) {
    char c = field[i];
    if (c == '\\') {
      if (++i == field.size()) throw ParseError(line, "dangling escape in ITEMS");
      switch (field[i]) {
        case '\\': cur += '\\'; break;
        case ',': cur += ','; break;
        case 't': cur += '\t'; break;
        case 'n': cur += '\n'; break;
        default: throw ParseError(line, "unknown escape in ITEMS");
      }
    } else if (c == ',') {
      items.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  items.push_back(std::move(cur));
  return items;
}

template <class T>
T parse_unsigned(std::string_view v, std::size_t line, const char* what) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(v) + "'");
  return out;
}

double parse_real(std::string_view v, std::size_t line, const char* what) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(v) + "'");
  return out;
}

std::string join(const std::vector<std::string>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

}  // namespace

void write_rules_tsv(const RuleSet& rs, std::ostream& out) {
  const RuleSetHeader& h = rs.header;
  out << "# strategy = " << h.strategy << '\n'
      << "# hyper_n = " << h.hyper_n << '\n'
      << "# min_support = " << detail::shortest(h.min_support) << '\n'
      << "# min_confidence = " << detail::shortest(h.min_confidence) << '\n'
      << "# max_itemset_size = " << h.max_itemset_size << '\n'
      << "# corpus_hash = " << h.corpus_hash << '\n'
      << "# transactions = " << h.transactions << '\n'
      << "# classes = " << join(h.classes, ',') << '\n'
      << "ITEMS\tCLASS\tSUPPORT\tCONFIDENCE\n";
  for (const CAR& r : rs.rules) {
    std::vector<std::string> items;
    for (const std::string& i : r.itemset) items.push_back(escape_item(i));
    out << join(items, ',') << '\t' << r.class_label << '\t' << detail::shortest(r.support()) << '\t'
        << detail::shortest(r.confidence()) << '\n';
  }
}

RuleSet read_rules_tsv(std::istream& in) {
  RuleSet rs;
  std::string raw;
  std::size_t lineno = 0;
  bool seen_columns = false;
  bool seen_transactions = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto eq = line.find('=');
      if (eq == std::string_view::npos) continue;
      const auto key = detail::trim(line.substr(1, eq - 1));
      const auto value = detail::trim(line.substr(eq + 1));
      RuleSetHeader& h = rs.header;
      if (key == "strategy") h.strategy = std::string(value);
      else if (key == "hyper_n") h.hyper_n = parse_unsigned<std::size_t>(value, lineno, "hyper_n");
      else if (key == "min_support") h.min_support = parse_real(value, lineno, "min_support");
      else if (key == "min_confidence") h.min_confidence = parse_real(value, lineno, "min_confidence");
      else if (key == "max_itemset_size") h.max_itemset_size = parse_unsigned<std::size_t>(value, lineno, "max_itemset_size");
      else if (key == "corpus_hash") h.corpus_hash = std::string(value);
      else if (key == "transactions") {
        h.transactions = parse_unsigned<std::uint64_t>(value, lineno, "transactions");
        seen_transactions = true;
      } else if (key == "classes") {
        h.classes.clear();
        if (!value.empty())
          for (auto c : detail::split(value, ',')) h.classes.emplace_back(c);
      }
      continue;
    }
    if (!seen_columns) {
      if (line != "ITEMS\tCLASS\tSUPPORT\tCONFIDENCE") throw ParseError(lineno, "expected column header");
      seen_columns = true;
      continue;
    }
    if (!seen_transactions || rs.header.transactions == 0)
      throw ParseError(lineno, "rule rows require a '# transactions = N' header");
    auto f = detail::split(line, '\t');
    if (f.size() != 4) throw ParseError(lineno, "expected 4 columns");
    CAR r;
    r.itemset = Itemset(unescape_items(f[0], lineno));
    r.class_label = std::string(f[1]);
    const double supp = parse_real(f[2], lineno, "support");
    const double conf = parse_real(f[3], lineno, "confidence");
    r.db_size = rs.header.transactions;
    r.itemset_count = static_cast<std::uint64_t>(std::llround(supp * static_cast<double>(r.db_size)));
    r.rule_count = static_cast<std::uint64_t>(std::llround(conf * static_cast<double>(r.itemset_count)));
    if (r.itemset_count == 0 || r.rule_count > r.itemset_count || r.itemset_count > r.db_size ||
        detail::shortest(r.support()) != detail::shortest(supp) || detail::shortest(r.confidence()) != detail::shortest(conf))
      throw ParseError(lineno, "support/confidence inconsistent with the transaction count");
    rs.rules.push_back(std::move(r));
  }
  if (!seen_columns) throw ParseError(lineno, "missing column header");
  return rs;
}

std::string rules_to_json(const RuleSet& rs) {
  nlohmann::json j;
  const RuleSetHeader& h = rs.header;
  j["header"] = {{"strategy", h.strategy},
                 {"hyper_n", h.hyper_n},
                 {"min_support", h.min_support},
                 {"min_confidence", h.min_confidence},
                 {"max_itemset_size", h.max_itemset_size},
                 {"corpus_hash", h.corpus_hash},
                 {"transactions", h.transactions},
                 {"classes", h.classes}};
  j["rules"] = nlohmann::json::array();
  for (const CAR& r : rs.rules) {
    j["rules"].push_back({{"items", r.itemset.items()},
                          {"class", r.class_label},
                          {"rule_count", r.rule_count},
                          {"itemset_count", r.itemset_count},
                          {"db_size", r.db_size},
                          {"support", r.support()},
                          {"confidence", r.confidence()}});
  }
  return j.dump(2) + "\n";
}

RuleSet rules_from_json(const std::string& text) {
  RuleSet rs;
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& h = j.at("header");
    rs.header.strategy = h.at("strategy").get<std::string>();
    rs.header.hyper_n = h.at("hyper_n").get<std::size_t>();
    rs.header.min_support = h.at("min_support").get<double>();
    rs.header.min_confidence = h.at("min_confidence").get<double>();
    rs.header.max_itemset_size = h.at("max_itemset_size").get<std::size_t>();
    rs.header.corpus_hash = h.at("corpus_hash").get<std::string>();
    rs.header.transactions = h.at("transactions").get<std::uint64_t>();
    rs.header.classes = h.at("classes").get<std::vector<std::string>>();
    for (const auto& r : j.at("rules")) {
      CAR car;
      car.itemset = Itemset(r.at("items").get<std::vector<std::string>>());
      car.class_label = r.at("class").get<std::string>();
      car.rule_count = r.at("rule_count").get<std::uint64_t>();
      car.itemset_count = r.at("itemset_count").get<std::uint64_t>();
      car.db_size = r.at("db_size").get<std::uint64_t>();
      if (car.itemset_count == 0 || car.rule_count > car.itemset_count || car.itemset_count > car.db_size)
        throw SchemaError("inconsistent rule counts");
      rs.rules.push_back(std::move(car));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed rule JSON: ") + e.what());
  }
  return rs;
}

}  // namespace carclass
