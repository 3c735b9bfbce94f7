#include "torusdiff/certificate.hpp"

#include <sstream>
#include <stdexcept>

namespace torusdiff {

ordered_json to_json(const Rational& r) { return r.str(); }

ordered_json to_json(const Point& p) {
  ordered_json j = ordered_json::object();
  for (const auto& [i, v] : p.coords()) j[std::to_string(i)] = v.str();
  return j;
}

ordered_json to_json(const ProductSet& s) {
  if (s.is_empty()) return nullptr;
  ordered_json j = ordered_json::object();
  for (const auto& [i, c] : s.factors()) {
    ordered_json arcs = ordered_json::array();
    for (const auto& a : c.arcs()) arcs.push_back({a.start.str(), a.length.str()});
    j[std::to_string(i)] = std::move(arcs);
  }
  return j;
}

ordered_json to_json(const Region& r) {
  ordered_json j = ordered_json::array();
  for (const auto& p : r.pieces()) j.push_back(to_json(p));
  return j;
}

ordered_json to_json(const SimpleFunction& f) {
  ordered_json terms = ordered_json::array();
  for (const auto& t : f.terms())
    terms.push_back({{"coeff", t.coeff.str()}, {"support", to_json(t.support)}});
  return ordered_json{{"terms", std::move(terms)}};
}

Rational rational_from_json(const ordered_json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  return Rational::parse(j.get<std::string>());
}

Point point_from_json(const ordered_json& j) {
  std::vector<std::pair<int, Rational>> coords;
  for (const auto& [key, val] : j.items())
    coords.emplace_back(std::stoi(key), rational_from_json(val));
  return Point::from_coords(std::move(coords));
}

ProductSet product_set_from_json(const ordered_json& j) {
  if (j.is_null()) return ProductSet::empty_set();
  ProductSet s;
  for (const auto& [key, val] : j.items()) {
    std::vector<Arc> arcs;
    for (const auto& a : val)
      arcs.emplace_back(rational_from_json(a.at(0)), rational_from_json(a.at(1)));
    s = s.with_factor(std::stoi(key), CoordSet::from_arcs(std::move(arcs)));
  }
  return s;
}

Region region_from_json(const ordered_json& j) {
  std::vector<ProductSet> pieces;
  for (const auto& p : j) pieces.push_back(product_set_from_json(p));
  return Region::from_pieces(std::move(pieces));
}

SimpleFunction simple_function_from_json(const ordered_json& j) {
  std::vector<SimpleFunction::Term> terms;
  for (const auto& t : j.at("terms"))
    terms.push_back({rational_from_json(t.at("coeff")), product_set_from_json(t.at("support"))});
  return SimpleFunction::from_terms(std::move(terms));
}

const Rational& Certificate::get_computed(const std::string& name) const {
  for (const auto& [k, v] : computed)
    if (k == name) return v;
  throw std::out_of_range("certificate '" + claim + "': no computed value '" + name + "'");
}

bool Certificate::has_computed(const std::string& name) const {
  for (const auto& [k, v] : computed)
    if (k == name) return true;
  return false;
}

long Certificate::get_int_param(const std::string& name) const {
  return params.at(name).get<long>();
}

ordered_json Certificate::to_json() const {
  ordered_json j;
  j["claim"] = claim;
  j["params"] = params;
  ordered_json comp = ordered_json::object();
  for (const auto& [k, v] : computed) comp[k] = v.str();
  j["computed"] = std::move(comp);
  j["bound"] = bound.str();
  j["verdict"] = verdict;
  ordered_json wits = ordered_json::array();
  for (const auto& w : witnesses)
    wits.push_back({{"g", torusdiff::to_json(w.g)},
                    {"region", torusdiff::to_json(w.region)},
                    {"value", w.value.str()}});
  j["witnesses"] = std::move(wits);
  return j;
}

Certificate Certificate::from_json(const ordered_json& j) {
  Certificate c;
  c.claim = j.at("claim").get<std::string>();
  c.params = j.at("params");
  for (const auto& [k, v] : j.at("computed").items())
    c.computed.emplace_back(k, rational_from_json(v));
  c.bound = rational_from_json(j.at("bound"));
  c.verdict = j.at("verdict").get<bool>();
  for (const auto& w : j.at("witnesses"))
    c.witnesses.push_back({point_from_json(w.at("g")), region_from_json(w.at("region")),
                           rational_from_json(w.at("value"))});
  return c;
}

std::string Certificate::to_table() const {
  std::ostringstream os;
  os << "claim: " << claim << "\n";
  for (const auto& [k, v] : params.items())
    os << "  param " << k << " = " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  for (const auto& [k, v] : computed) os << "  " << k << " = " << v.str() << "\n";
  os << "  bound = " << bound.str() << "\n";
  if (!witnesses.empty()) os << "  witnesses: " << witnesses.size() << "\n";
  os << "  verdict: " << (verdict ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace torusdiff
