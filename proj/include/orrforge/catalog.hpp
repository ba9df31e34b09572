#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "orrforge/group.hpp"
#include "orrforge/presentation.hpp"

namespace orrforge {

struct NamedGroup {
  std::string name;
  std::shared_ptr<const FiniteGroup> group;
};

// The eleven groups admitting no oriented regular representation beyond the
// generalised dihedral family.  Built once; orders 8, 8, 16, 32, 64, 9, 24,
// 16, 16, 32, 32.
inline const std::vector<NamedGroup>& exception_catalog() {
  static const std::vector<NamedGroup> catalog = [] {
    std::vector<NamedGroup> out;
    auto add = [&](std::string name, FiniteGroup g) {
      out.push_back({std::move(name), std::make_shared<const FiniteGroup>(std::move(g))});
    };
    add("Q8", quaternion8());
    FiniteGroup c4c2 = direct_product(cyclic(4), cyclic(2));
    add("C4xC2", c4c2);
    add("C4xC2^2", direct_product(cyclic(4), elementary_abelian(2)));
    add("C4xC2^3", direct_product(cyclic(4), elementary_abelian(3)));
    add("C4xC2^4", direct_product(cyclic(4), elementary_abelian(4)));
    add("C3xC3", direct_product(cyclic(3), cyclic(3)));
    add("C3xC2^3", direct_product(cyclic(3), elementary_abelian(3)));
    add("G16a", coset_enumerate(parse_presentation("gens: a b\nrels: a^4=b^4=(ab)^2=(ab^-1)^2=1"),
                                65536, "G16a"));
    add("G16b",
        coset_enumerate(
            parse_presentation("gens: a b c\nrels: "
                               "a^4=b^4=c^4=(ba)^2=(ba^-1)^2=(bc)^2=(bc^-1)^2=1 a^2=c^2 c^-1aca "
                               "a^2=b^2"),
            65536, "G16b"));
    add("G32",
        coset_enumerate(
            parse_presentation("gens: a b c\nrels: a^4=b^4=c^4=(ab)^2=(ab^-1)^2=1 "
                               "(ac)^2=(ac^-1)^2=(bc)^2=(bc^-1)^2=a^2b^2c^2=1"),
            65536, "G32"));
    add("D4oD4", central_product_D4D4());
    return out;
  }();
  return catalog;
}

// Manifest of the shipped catalog of all groups of order at most 16; the
// presentations compile at test time and the isomorphism-class count (42) is
// validated by pairwise comparison.
struct CatalogEntry {
  const char* file;
  int order;
};

inline const std::vector<CatalogEntry>& small_catalog_manifest() {
  static const std::vector<CatalogEntry> entries = {
      {"c1", 1},       {"c2", 2},      {"c3", 3},     {"c4", 4},      {"c2c2", 4},
      {"c5", 5},       {"c6", 6},      {"s3", 6},     {"c7", 7},      {"c8", 8},
      {"c4c2", 8},     {"c2c2c2", 8},  {"d4", 8},     {"q8", 8},      {"c9", 9},
      {"c3c3", 9},     {"c10", 10},    {"d5", 10},    {"c11", 11},    {"c12", 12},
      {"c6c2", 12},    {"d6", 12},     {"a4", 12},    {"dic3", 12},   {"c13", 13},
      {"c14", 14},     {"d7", 14},     {"c15", 15},   {"c16", 16},    {"c4c4", 16},
      {"c8c2", 16},    {"c4c2c2", 16}, {"c2^4", 16},  {"d8", 16},     {"sd16", 16},
      {"q16", 16},     {"m4_2", 16},   {"d4c2", 16},  {"q8c2", 16},   {"pauli", 16},
      {"c4sdc4", 16},  {"c2c2sdc4", 16}};
  return entries;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw argument_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Loads and compiles the whole order-<=16 catalog from `data_dir`/catalog.
inline std::vector<NamedGroup> load_small_catalog(const std::string& data_dir) {
  std::vector<NamedGroup> out;
  for (const auto& e : small_catalog_manifest()) {
    std::string path = data_dir + "/catalog/" + e.file + ".pres";
    FiniteGroup g = coset_enumerate(parse_presentation(read_text_file(path)), 65536, e.file);
    if (g.order() != e.order)
      throw validation_error(std::string("catalog group ") + e.file + " compiled to order " +
                             std::to_string(g.order()) + ", expected " + std::to_string(e.order));
    out.push_back({e.file, std::make_shared<const FiniteGroup>(std::move(g))});
  }
  return out;
}

}  // namespace orrforge
