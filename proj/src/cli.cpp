#include "torusdiff/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <future>
#include <ostream>
#include <sstream>

#include "torusdiff/certificate.hpp"
#include "torusdiff/counterexamples.hpp"
#include "torusdiff/exp_bounds.hpp"
#include "torusdiff/maximal.hpp"
#include "torusdiff/rdf_basis.hpp"

namespace torusdiff {

namespace {

ordered_json load_payload(const std::string& text) {
  if (!text.empty() && text[0] == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw std::invalid_argument("cannot open payload file: " + text.substr(1));
    return ordered_json::parse(in);
  }
  return ordered_json::parse(text);
}

std::vector<Rational> parse_rational_list(const std::string& csv) {
  std::vector<Rational> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(Rational::parse(item));
  }
  return out;
}

std::string render_arc(const Arc& a) {
  return "[" + a.start.str() + ", +" + a.length.str() + ")";
}

std::string render_product_set(const ProductSet& s) {
  if (s.is_empty()) return "(empty)";
  if (s.is_full_torus()) return "T^w";
  std::string out;
  for (const auto& [i, c] : s.factors()) {
    out += "coordinate " + std::to_string(i) + ":";
    for (const auto& a : c.arcs()) out += " " + render_arc(a);
    out += "\n";
  }
  return out;
}

struct CommandResult {
  ordered_json json;
  std::string table;
  int status = 0;
};

using CertificateBuilder = std::function<Certificate()>;

CommandResult certificate_result(const Certificate& cert) {
  return {cert.to_json(), cert.to_table(), cert.verdict ? 0 : 2};
}

MaximalQuery build_query(const RunConfig& cfg) {
  if (cfg.family.empty()) throw std::invalid_argument("missing --family");
  if (!cfg.f_payload) throw std::invalid_argument("missing --f");
  MaximalQuery q{build_family(cfg.family, cfg.max_generation),
                 simple_function_from_json(load_payload(*cfg.f_payload)), std::nullopt};
  if (cfg.diameter_cap) q.diameter_cap = Rational::parse(*cfg.diameter_cap);
  return q;
}

std::vector<std::pair<std::string, CertificateBuilder>> suite_items(long max_n) {
  std::vector<std::pair<std::string, CertificateBuilder>> items;
  for (long n = 1; n <= std::min(max_n, 10l); ++n)
    items.emplace_back("prop31/n=" + std::to_string(n),
                       [n] { return prop31_certificate(static_cast<int>(n)); });
  for (long n = 2; n <= std::min(max_n, 5l); ++n)
    items.emplace_back("prop32/n=" + std::to_string(n),
                       [n] { return prop32_certificate(static_cast<int>(n)); });
  long stages = std::min(max_n, 3l);
  items.emplace_back("prop32-assemble/stages=" + std::to_string(stages),
                     [stages] { return prop32_assemble(static_cast<int>(stages)); });
  for (long n = 2; n <= std::max(max_n, 6l); ++n)
    items.emplace_back("lemma31/n=" + std::to_string(n),
                       [n] { return lemma31_ratio(static_cast<int>(n)); });
  for (int n : {2, 3}) {
    items.emplace_back("lemma32/n=" + std::to_string(n), [n] {
      std::vector<Rational> alphas, x;
      for (int i = 0; i < n * n; ++i) {
        alphas.emplace_back(1, i + 2);
        // every third coordinate in the upper band, the rest in the core
        x.push_back(i % 3 == 2 ? alphas.back() * Rational(2 * n + 1, 2 * n)
                               : alphas.back() / Rational(2));
      }
      return lemma32_shift(n, alphas, x);
    });
  }
  for (int L : {1, 2}) {
    items.emplace_back("lemma33/K=1,L=" + std::to_string(L), [L] {
      ProductSet q = default_theorem31_shape(1, L, Rational(1));
      return lemma33_build(1, L, q).second;
    });
  }
  items.emplace_back("theorem31/eps=1/2,stages=2",
                     [] { return theorem31_assemble(Rational(1, 2), 2); });
  for (long n = 1; n <= std::min(max_n, 10l); ++n)
    items.emplace_back("prop41/n=" + std::to_string(n),
                       [n] { return prop41_certificate(static_cast<int>(n)); });
  for (long k = 1; k <= std::min(max_n, 6l); ++k)
    items.emplace_back("prop42/k=" + std::to_string(k),
                       [k] { return prop42_certificate(static_cast<int>(k)); });
  return items;
}

CommandResult run_suite(const RunConfig& cfg) {
  auto items = suite_items(cfg.max_n);
  std::vector<Certificate> certs(items.size());
  if (cfg.parallel) {
    std::vector<std::future<Certificate>> futures;
    futures.reserve(items.size());
    for (auto& [name, fn] : items)
      futures.push_back(std::async(std::launch::async, fn));
    for (size_t i = 0; i < futures.size(); ++i) certs[i] = futures[i].get();
  } else {
    for (size_t i = 0; i < items.size(); ++i) certs[i] = items[i].second();
  }
  bool all = true;
  ordered_json ja = ordered_json::array();
  std::string table;
  for (size_t i = 0; i < certs.size(); ++i) {
    all = all && certs[i].verdict;
    ordered_json entry;
    entry["name"] = items[i].first;
    entry["certificate"] = certs[i].to_json();
    ja.push_back(std::move(entry));
    table += items[i].first + ": " + (certs[i].verdict ? "pass" : "FAIL") + "\n";
  }
  table += all ? "suite: all pass\n" : "suite: FAILURES\n";
  ordered_json j;
  j["suite"] = std::move(ja);
  j["all_pass"] = all;
  return {std::move(j), std::move(table), all ? 0 : 2};
}

CommandResult dispatch(const RunConfig& cfg) {
  const std::string& cmd = cfg.subcommand;

  if (cmd == "rdf-levels") {
    LevelVector lv = rdf_levels(static_cast<int>(cfg.n));
    std::string text = "(";
    for (size_t i = 0; i < lv.levels.size(); ++i)
      text += (i ? "," : "") + std::to_string(lv.levels[i]);
    text += ")";
    ordered_json j{{"n", lv.n}, {"levels", lv.levels}};
    return {std::move(j), text + "\n", 0};
  }
  if (cmd == "rdf-cell") {
    ProductSet cell = rdf_cell(static_cast<int>(cfg.n));
    return {to_json(cell), render_product_set(cell), 0};
  }
  if (cmd == "rdf-group") {
    ordered_json pts = ordered_json::array();
    std::string table;
    std::uint64_t count = for_each_group_point(static_cast<int>(cfg.n), [&](const Point& p) {
      pts.push_back(to_json(p));
      table += to_json(p).dump() + "\n";
    });
    ordered_json j{{"n", cfg.n}, {"count", count}, {"points", std::move(pts)}};
    return {std::move(j), table, 0};
  }
  if (cmd == "family") {
    BasisFamily fam = build_family(cfg.family, cfg.max_generation);
    ordered_json regions = ordered_json::array();
    for (const auto& c : fam.candidates) regions.push_back(to_json(c));
    ordered_json j{{"name", cfg.family},
                   {"max_generation", fam.max_generation},
                   {"count", fam.candidates.size()},
                   {"candidates", std::move(regions)}};
    std::string table = cfg.family + " (max generation " +
                        std::to_string(fam.max_generation) + "): " +
                        std::to_string(fam.candidates.size()) + " candidates\n";
    return {std::move(j), std::move(table), 0};
  }
  if (cmd == "profile") {
    BasisFamily fam = build_family(cfg.family, cfg.max_generation);
    auto profile = family_profile(fam);
    ordered_json ja = ordered_json::array();
    std::string table = "measure diameter\n";
    for (const auto& [m, d] : profile) {
      ja.push_back({{"measure", m.str()}, {"diameter", d.str()}});
      table += m.str() + " " + d.str() + "\n";
    }
    return {std::move(ja), std::move(table), 0};
  }
  if (cmd == "maximal") {
    MaximalQuery q = build_query(cfg);
    if (!cfg.g_payload) throw std::invalid_argument("missing --g");
    Rational v = maximal_value(q, point_from_json(load_payload(*cfg.g_payload)));
    return {ordered_json{{"value", v.str()}}, v.str() + "\n", 0};
  }
  if (cmd == "superlevel") {
    MaximalQuery q = build_query(cfg);
    if (!cfg.lambda) throw std::invalid_argument("missing --lambda");
    auto [region, m] = superlevel_set(q, Rational::parse(*cfg.lambda));
    ordered_json j{{"measure", m.str()}, {"region", to_json(region)}};
    return {std::move(j), m.str() + "\n", 0};
  }
  if (cmd == "weak-type") {
    MaximalQuery q = build_query(cfg);
    if (!cfg.lambda) throw std::invalid_argument("missing --lambda");
    Rational ratio = weak_type_ratio(q, Rational::parse(*cfg.lambda));
    return {ordered_json{{"ratio", ratio.str()}}, ratio.str() + "\n", 0};
  }
  if (cmd == "witness") {
    if (!cfg.f_payload || !cfg.shape_payload || !cfg.h_payload || !cfg.g_payload)
      throw std::invalid_argument("witness needs --f, --shape, --h and --g");
    auto [avg, contains] = witness_average(
        simple_function_from_json(load_payload(*cfg.f_payload)),
        product_set_from_json(load_payload(*cfg.shape_payload)),
        point_from_json(load_payload(*cfg.h_payload)),
        point_from_json(load_payload(*cfg.g_payload)));
    ordered_json j{{"average", avg.str()}, {"contains_g", contains}};
    return {std::move(j), avg.str() + (contains ? " (contains g)\n" : " (misses g)\n"), 0};
  }
  if (cmd == "delta-check") {
    if (cfg.family.empty() || !cfg.f_payload || !cfg.lambda || !cfg.region_payload)
      throw std::invalid_argument("delta-check needs --family, --f, --lambda and --E");
    BasisFamily fam = build_family(cfg.family, cfg.max_generation);
    DeltaWitness w{simple_function_from_json(load_payload(*cfg.f_payload)),
                   Rational::parse(*cfg.lambda),
                   region_from_json(load_payload(*cfg.region_payload)),
                   static_cast<int>(cfg.k), std::nullopt};
    if (cfg.diameter_cap) w.diameter_cap = Rational::parse(*cfg.diameter_cap);
    return certificate_result(delta_witness_check(w, fam));
  }
  if (cmd == "prop31" || cmd == "prop32") {
    std::optional<Rational> eps;
    if (cfg.epsilon) eps = Rational::parse(*cfg.epsilon);
    Certificate cert = cmd == "prop31" ? prop31_certificate(static_cast<int>(cfg.n), eps)
                                       : prop32_certificate(static_cast<int>(cfg.n), eps);
    return certificate_result(cert);
  }
  if (cmd == "prop32-assemble")
    return certificate_result(prop32_assemble(static_cast<int>(cfg.stages)));
  if (cmd == "lemma31") return certificate_result(lemma31_ratio(static_cast<int>(cfg.n)));
  if (cmd == "lemma32") {
    if (!cfg.alphas || !cfg.xs) throw std::invalid_argument("lemma32 needs --alphas and --x");
    return certificate_result(lemma32_shift(static_cast<int>(cfg.n),
                                            parse_rational_list(*cfg.alphas),
                                            parse_rational_list(*cfg.xs)));
  }
  if (cmd == "lemma33") {
    int K = static_cast<int>(cfg.grid_k), L = static_cast<int>(cfg.grid_l);
    ProductSet shape = cfg.shape_payload
                           ? product_set_from_json(load_payload(*cfg.shape_payload))
                           : default_theorem31_shape(K, L, Rational(1));
    std::vector<Point> samples;
    for (const auto& s : cfg.sample_points) samples.push_back(point_from_json(load_payload(s)));
    return certificate_result(lemma33_build(K, L, shape, samples).second);
  }
  if (cmd == "theorem31") {
    Rational eps = cfg.epsilon ? Rational::parse(*cfg.epsilon) : Rational(1, 2);
    return certificate_result(theorem31_assemble(eps, static_cast<int>(cfg.stages)));
  }
  if (cmd == "prop41") return certificate_result(prop41_certificate(static_cast<int>(cfg.n)));
  if (cmd == "prop42") return certificate_result(prop42_certificate(static_cast<int>(cfg.k)));
  if (cmd == "suite") return run_suite(cfg);

  throw std::invalid_argument("unknown subcommand: " + cmd);
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    CommandResult result = dispatch(cfg);
    std::string rendered =
        cfg.format == "table" ? result.table : result.json.dump(2) + "\n";
    if (cfg.output_path) {
      std::ofstream file(*cfg.output_path);
      if (!file) throw std::invalid_argument("cannot open output file: " + *cfg.output_path);
      file << rendered;
    } else {
      out << rendered;
    }
    return result.status;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact-arithmetic verifier for differentiation bases on the infinite torus"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, const std::string& default_format) {
    cfg.format = "";
    sub->add_option("--format", cfg.format, "output format: json or table")
        ->check(CLI::IsMember({"json", "table"}))
        ->default_val(default_format);
    sub->add_option("--out", cfg.output_path, "write output to a file instead of stdout");
  };

  auto info = [&](const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    add_common(sub, "table");
    return sub;
  };
  auto cert = [&](const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    add_common(sub, "json");
    return sub;
  };

  CLI::App* sub;
  sub = info("rdf-levels", "level vector of scheme generation n");
  sub->add_option("--n", cfg.n)->required()->check(CLI::PositiveNumber);
  sub = info("rdf-cell", "cell V_n of the scheme");
  sub->add_option("--n", cfg.n)->required()->check(CLI::PositiveNumber);
  sub = info("rdf-group", "finite subgroup H_n of the scheme");
  sub->add_option("--n", cfg.n)->required()->check(CLI::PositiveNumber);

  sub = cert("family", "enumerate a basis family");
  sub->add_option("--name", cfg.family)->required();
  sub->add_option("--max-gen", cfg.max_generation)->required()->check(CLI::PositiveNumber);
  sub = cert("profile", "per-candidate (measure, diameter) profile of a family");
  sub->add_option("--name", cfg.family)->required();
  sub->add_option("--max-gen", cfg.max_generation)->required()->check(CLI::PositiveNumber);

  sub = cert("maximal", "maximal function value at a point");
  sub->add_option("--family", cfg.family)->required();
  sub->add_option("--max-gen", cfg.max_generation)->required()->check(CLI::PositiveNumber);
  sub->add_option("--f", cfg.f_payload, "simple function (JSON or @file)")->required();
  sub->add_option("--g", cfg.g_payload, "point (JSON or @file)")->required();
  sub->add_option("--r0", cfg.diameter_cap, "diameter truncation");

  sub = cert("superlevel", "superlevel set of the maximal function");
  sub->add_option("--family", cfg.family)->required();
  sub->add_option("--max-gen", cfg.max_generation)->required()->check(CLI::PositiveNumber);
  sub->add_option("--f", cfg.f_payload)->required();
  sub->add_option("--lambda", cfg.lambda)->required();
  sub->add_option("--r0", cfg.diameter_cap);

  sub = cert("weak-type", "weak type (1,1) ratio at a level");
  sub->add_option("--family", cfg.family)->required();
  sub->add_option("--max-gen", cfg.max_generation)->required()->check(CLI::PositiveNumber);
  sub->add_option("--f", cfg.f_payload)->required();
  sub->add_option("--lambda", cfg.lambda)->required();
  sub->add_option("--r0", cfg.diameter_cap);

  sub = cert("witness", "average over a translated shape and containment");
  sub->add_option("--f", cfg.f_payload)->required();
  sub->add_option("--shape", cfg.shape_payload)->required();
  sub->add_option("--h", cfg.h_payload)->required();
  sub->add_option("--g", cfg.g_payload)->required();

  sub = cert("delta-check", "check a delta_k lower-bound witness");
  sub->add_option("--family", cfg.family)->required();
  sub->add_option("--max-gen", cfg.max_generation)->required()->check(CLI::PositiveNumber);
  sub->add_option("--f", cfg.f_payload)->required();
  sub->add_option("--lambda", cfg.lambda)->required();
  sub->add_option("--E", cfg.region_payload)->required();
  sub->add_option("--k", cfg.k)->required()->check(CLI::NonNegativeNumber);
  sub->add_option("--r0", cfg.diameter_cap);

  sub = cert("prop31", "single-bump weak-type failure certificate");
  sub->add_option("--n", cfg.n)->required()->check(CLI::PositiveNumber);
  sub->add_option("--epsilon", cfg.epsilon);
  sub = cert("prop32", "grid-of-bumps certificate");
  sub->add_option("--n", cfg.n)->required()->check(CLI::PositiveNumber);
  sub->add_option("--epsilon", cfg.epsilon);
  sub = cert("prop32-assemble", "finite multi-stage assembly of the grid construction");
  sub->add_option("--stages", cfg.stages)->required()->check(CLI::PositiveNumber);
  sub = cert("lemma31", "exact binomial band-tail ratio");
  sub->add_option("--n", cfg.n)->required()->check(CLI::PositiveNumber);
  sub = cert("lemma32", "band shift certificate");
  sub->add_option("--n", cfg.n)->required()->check(CLI::PositiveNumber);
  sub->add_option("--alphas", cfg.alphas, "comma-separated side lengths")->required();
  sub->add_option("--x", cfg.xs, "comma-separated point coordinates")->required();
  sub = cert("lemma33", "grid construction over an admissible box");
  sub->add_option("--K", cfg.grid_k)->required()->check(CLI::PositiveNumber);
  sub->add_option("--L", cfg.grid_l)->required()->check(CLI::PositiveNumber);
  sub->add_option("--shape", cfg.shape_payload, "box (JSON or @file); default: smallest dyadic box");
  sub->add_option("--sample", cfg.sample_points, "sample point in E (JSON or @file), repeatable");
  sub = cert("theorem31", "staged assembly certificate");
  sub->add_option("--epsilon", cfg.epsilon)->required();
  sub->add_option("--stages", cfg.stages)->required()->check(CLI::PositiveNumber);
  sub = cert("prop41", "adjacent-boxes basis weak-type failure");
  sub->add_option("--n", cfg.n)->required()->check(CLI::PositiveNumber);
  sub = cert("prop42", "paired-tiles basis delta_k certificate");
  sub->add_option("--k", cfg.k)->required()->check(CLI::PositiveNumber);

  sub = cert("suite", "run the whole verification battery");
  sub->add_option("--max-n", cfg.max_n)->check(CLI::PositiveNumber);
  sub->add_flag("--parallel", cfg.parallel, "build independent certificates concurrently");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  return run(cfg, out, err);
}

}  // namespace torusdiff
