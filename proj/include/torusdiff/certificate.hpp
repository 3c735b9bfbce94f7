#pragma once

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

#include "torusdiff/simple_function.hpp"
#include "torusdiff/torus.hpp"

namespace torusdiff {

using ordered_json = nlohmann::ordered_json;

// JSON encodings: rationals are "num/den" strings; points are sparse
// index -> value maps; product sets are index -> arc-list maps with arcs as
// [start, length] pairs; regions are lists of product sets.
ordered_json to_json(const Rational& r);
ordered_json to_json(const Point& p);
ordered_json to_json(const ProductSet& s);
ordered_json to_json(const Region& r);
ordered_json to_json(const SimpleFunction& f);

Rational rational_from_json(const ordered_json& j);
Point point_from_json(const ordered_json& j);
ProductSet product_set_from_json(const ordered_json& j);
Region region_from_json(const ordered_json& j);
SimpleFunction simple_function_from_json(const ordered_json& j);

/// Witness record: a point, the basis set used at that point, and the exact
/// average achieved there.
struct Witness {
  Point g;
  Region region;
  Rational value;
};

/// Self-contained record of one verified claim: the exact computed
/// quantities, the rational bound they were compared against, and the
/// verdict. Re-checkable from the record alone (see reverify()).
class Certificate {
public:
  std::string claim;
  ordered_json params = ordered_json::object();
  std::vector<std::pair<std::string, Rational>> computed;
  Rational bound;
  bool verdict = false;
  std::vector<Witness> witnesses;

  void add_param(const std::string& name, long v) { params[name] = v; }
  void add_param(const std::string& name, const Rational& v) { params[name] = v.str(); }
  void add_param(const std::string& name, const std::string& v) { params[name] = v; }

  void add_computed(const std::string& name, const Rational& v) {
    computed.emplace_back(name, v);
  }
  const Rational& get_computed(const std::string& name) const;
  bool has_computed(const std::string& name) const;
  long get_int_param(const std::string& name) const;

  ordered_json to_json() const;
  static Certificate from_json(const ordered_json& j);
  std::string to_table() const;
};

}  // namespace torusdiff
