#include "torusdiff/counterexamples.hpp"

#include <algorithm>
#include <stdexcept>

#include "torusdiff/exp_bounds.hpp"

namespace torusdiff {

namespace {

constexpr int kExpDigits = 12;

Rational exp_upper(long x) { return certified_exp_bounds(Rational(x), kExpDigits).second; }
Rational exp_lower(long x) { return certified_exp_bounds(Rational(x), kExpDigits).first; }

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

// ---------------------------------------------------------------------------
// Lemma 3.1: exact binomial band tail

Rational binomial_tail(long trials, const Rational& p, long threshold) {
  if (trials < 0) throw std::invalid_argument("binomial_tail: negative trial count");
  if (p.sign() < 0 || p > Rational(1))
    throw std::invalid_argument("binomial_tail: p outside [0,1]");
  if (threshold > trials) return Rational(0);
  if (threshold < 0) threshold = 0;
  Rational q = Rational(1) - p;
  Rational total(0);
  for (long j = threshold; j <= trials; ++j) {
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(trials),
                 static_cast<unsigned long>(j));
    total += Rational(binom, mpz_class(1)) * pow(p, j) * pow(q, trials - j);
  }
  return total;
}

Certificate lemma31_ratio(int n) {
  require(n >= 1, "lemma31: n must be >= 1");
  Certificate cert;
  cert.claim = "lemma31";
  cert.add_param("n", static_cast<long>(n));
  cert.add_param("alpha_dependence", std::string("none"));
  Rational tail = binomial_tail(static_cast<long>(n) * n, Rational(1, n + 1), 4l * n);
  cert.add_computed("tail", tail);
  cert.bound = Rational(1, 2);
  cert.verdict = tail < cert.bound;
  return cert;
}

// ---------------------------------------------------------------------------
// Lemma 3.2: the band shift

LemmaBoxes make_lemma_boxes(int n, std::vector<Rational> alphas) {
  require(n >= 1, "lemma boxes: n must be >= 1");
  require(alphas.size() == static_cast<size_t>(n) * n,
          "lemma boxes: need n^2 side lengths");
  for (const auto& a : alphas)
    require(a.sign() > 0, "lemma boxes: side lengths must be positive");
  return LemmaBoxes{n, std::move(alphas)};
}

ShiftResult lemma32_construct(const LemmaBoxes& boxes, const std::vector<Rational>& x) {
  const int n = boxes.n;
  require(x.size() == boxes.alphas.size(), "lemma32: x has wrong dimension");
  Rational dilation = Rational(n + 1, n);
  ShiftResult out;
  out.y.reserve(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const Rational& a = boxes.alphas[i];
    if (x[i].sign() <= 0 || x[i] >= dilation * a)
      throw std::invalid_argument("lemma32: coordinate " + std::to_string(i + 1) +
                                  " outside the dilated box");
    if (x[i] < a) {
      out.y.emplace_back(0);
    } else {
      out.y.push_back(a / Rational(n));
      ++out.band_count;
    }
  }
  if (out.band_count >= 4l * n)
    throw std::invalid_argument("lemma32: band count " + std::to_string(out.band_count) +
                                " >= 4n, point lies in the exceptional set");
  out.overlap_ratio = pow(Rational(n - 1, n), out.band_count);
  return out;
}

Certificate lemma32_shift(int n, const std::vector<Rational>& alphas,
                          const std::vector<Rational>& x) {
  require(n >= 2, "lemma32: n must be >= 2");
  LemmaBoxes boxes = make_lemma_boxes(n, alphas);
  ShiftResult shift = lemma32_construct(boxes, x);
  bool contained = true;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(shift.y[i] < x[i] && x[i] < shift.y[i] + boxes.alphas[i])) contained = false;
  }
  Certificate cert;
  cert.claim = "lemma32";
  cert.add_param("n", static_cast<long>(n));
  cert.add_param("band_count", shift.band_count);
  cert.add_computed("contained", Rational(contained ? 1 : 0));
  cert.add_computed("ratio", shift.overlap_ratio);
  cert.bound = exp_upper(-8);
  cert.verdict = contained && shift.overlap_ratio > cert.bound;
  return cert;
}

// ---------------------------------------------------------------------------
// Proposition 3.1

namespace {

// Window start so that (a, a + 2^-n) contains both x and the bump arc
// (center - eps, center + eps); a is clamped to the feasible band.
Rational window_start(const Rational& x, const Rational& center, const Rational& eps, int n) {
  Rational lo = center + eps - pow2(-n);
  Rational hi = center - eps;
  Rational a = x - pow2(-n - 1);
  return min(max(a, lo), hi);
}

}  // namespace

Certificate prop31_certificate(int n, std::optional<Rational> epsilon) {
  require(n >= 1, "prop31: n must be >= 1");
  Rational eps = epsilon.value_or(pow2(-2 * n - 1));
  if (eps.sign() <= 0 || eps >= pow2(-(n + 1)))
    throw std::invalid_argument("prop31: epsilon out of range (0, 2^-(n+1))");

  const Rational half(1, 2);
  std::vector<std::pair<int, Arc>> bump_arcs, cover_arcs;
  for (int i = 1; i <= n; ++i) {
    bump_arcs.emplace_back(i, Arc(half - eps, Rational(2) * eps));
    cover_arcs.emplace_back(i, Arc(half - pow2(-n) + eps, Rational(2) * (pow2(-n) - eps)));
  }
  ProductSet a_set = ProductSet::box(bump_arcs);
  ProductSet e_set = ProductSet::box(cover_arcs);
  ProductSet u_box = rdf_box(n);
  Rational m_a = a_set.measure();
  SimpleFunction f = SimpleFunction::scaled_indicator(Rational(1) / m_a, a_set);

  Rational m_e = e_set.measure();
  Rational eq1_measure = pow2(static_cast<long>(n) * n - 1) * m_e;
  Rational eq1_closed = pow2(n - 1) * pow(Rational(1) - pow2(n) * eps, n);
  Rational l1 = f.l1_norm();
  Rational threshold = pow2(static_cast<long>(n) * n);

  Certificate cert;
  cert.claim = "prop31";
  cert.add_param("n", static_cast<long>(n));
  cert.add_param("epsilon", eps);
  cert.add_computed("m_A", m_a);
  cert.add_computed("m_E", m_e);
  cert.add_computed("l1_norm", l1);
  cert.add_computed("eq1_closed", eq1_closed);
  cert.add_computed("eq1_measure", eq1_measure);
  cert.add_computed("witness_threshold", threshold);

  // Sampled points of E with their covering translates.
  Rational spanhalf = (pow2(-n) - eps) / Rational(2);
  std::vector<Rational> sample_values = {half, half - spanhalf, half + spanhalf};
  bool contained_all = true;
  Rational min_avg;
  bool first = true;
  for (const auto& gv : sample_values) {
    std::vector<std::pair<int, Rational>> gc, hc;
    for (int i = 1; i <= n; ++i) {
      gc.emplace_back(i, gv);
      hc.emplace_back(i, window_start(gv, half, eps, n));
    }
    Point g = Point::from_coords(gc);
    Point h = Point::from_coords(hc);
    auto [avg, contained] = witness_average(f, u_box, h, g);
    contained_all = contained_all && contained;
    if (first || avg < min_avg) min_avg = avg;
    first = false;
    cert.witnesses.push_back({g, Region(u_box.translated(h)), avg});
  }
  cert.add_computed("witnesses_contained", Rational(contained_all ? 1 : 0));
  cert.add_computed("witness_min_avg", min_avg);

  cert.bound = pow2(n - 2);
  cert.verdict = eq1_closed == eq1_measure && eq1_closed >= cert.bound && l1 == Rational(1) &&
                 contained_all && min_avg >= threshold;
  return cert;
}

// ---------------------------------------------------------------------------
// Proposition 3.2

namespace {

constexpr int kProp32EnumerationCap = 3;

std::vector<Rational> odd_grid(int n) {
  std::vector<Rational> grid;
  for (long odd = 1; odd < (1l << n); odd += 2) grid.emplace_back(Rational(odd) / pow2(n));
  return grid;
}

struct Prop32Stage {
  int n;
  Rational eps;
  ProductSet a_set;  // per-coordinate unions of bump windows
  ProductSet e_set;  // per-coordinate unions of cover windows
};

Prop32Stage prop32_stage(int n, const Rational& eps) {
  auto grid = odd_grid(n);
  std::vector<Arc> bump, cover;
  for (const auto& p : grid) {
    bump.emplace_back(p - eps, Rational(2) * eps);
    cover.emplace_back(p - pow2(-n) + eps, Rational(2) * (pow2(-n) - eps));
  }
  CoordSet bump_union = CoordSet::from_arcs(bump);
  CoordSet cover_union = CoordSet::from_arcs(cover);
  ProductSet a_set, e_set;
  for (int i = 1; i <= n; ++i) {
    a_set = a_set.with_factor(i, bump_union);
    e_set = e_set.with_factor(i, cover_union);
  }
  return Prop32Stage{n, eps, std::move(a_set), std::move(e_set)};
}

Rational prop32_default_eps(int n) { return pow2(-static_cast<long>(n) * n - 2 * n); }

}  // namespace

Certificate prop32_certificate(int n, std::optional<Rational> epsilon) {
  require(n >= 1, "prop32: n must be >= 1");
  Rational eps = epsilon.value_or(prop32_default_eps(n));
  if (eps.sign() <= 0 || eps >= pow2(-(n + 1)))
    throw std::invalid_argument("prop32: epsilon out of range (0, 2^-(n+1))");

  const long nn = static_cast<long>(n) * n;
  Rational grid_count_closed = pow2(nn - n);
  Rational m_a_closed = grid_count_closed * pow(Rational(2) * eps, n);
  Rational m_e_closed = pow(Rational(1) - pow2(n) * eps, n);
  Rational l1_closed = pow2(-n);

  Certificate cert;
  cert.claim = "prop32";
  cert.add_param("n", static_cast<long>(n));
  cert.add_param("epsilon", eps);
  cert.add_computed("grid_count", grid_count_closed);
  cert.add_computed("m_A", m_a_closed);
  cert.add_computed("eq2_bound", pow2(-n));
  cert.add_computed("m_E", m_e_closed);
  cert.add_computed("eq3_bound", Rational(1) - pow2(-n));
  cert.add_computed("l1_norm", l1_closed);

  bool routes_ok = true;
  bool witnesses_ok = true;
  if (n <= kProp32EnumerationCap) {
    Prop32Stage stage = prop32_stage(n, eps);
    auto grid = odd_grid(n);

    // Enumerate the grid cells; build the piecewise decomposition and the
    // test function along the way.
    std::vector<ProductSet> a_pieces;
    std::vector<SimpleFunction::Term> terms;
    Rational coeff = pow2(-nn) / pow(Rational(2) * eps, n);
    std::vector<size_t> idx(n, 0);
    std::vector<Point> cell_centers;
    while (true) {
      std::vector<std::pair<int, Arc>> arcs;
      std::vector<std::pair<int, Rational>> center;
      for (int i = 0; i < n; ++i) {
        arcs.emplace_back(i + 1, Arc(grid[idx[i]] - eps, Rational(2) * eps));
        center.emplace_back(i + 1, grid[idx[i]]);
      }
      a_pieces.push_back(ProductSet::box(arcs));
      terms.push_back({coeff, a_pieces.back()});
      cell_centers.push_back(Point::from_coords(center));
      int pos = n - 1;
      while (pos >= 0 && ++idx[pos] == grid.size()) idx[pos--] = 0;
      if (pos < 0) break;
    }
    SimpleFunction f = SimpleFunction::from_terms(terms);

    Rational enumerated_count(static_cast<long>(a_pieces.size()));
    cert.add_computed("grid_count_enumerated", enumerated_count);
    routes_ok = routes_ok && enumerated_count == grid_count_closed;

    Rational m_a_pieces = Region::from_pieces(a_pieces).measure();
    Rational m_a_union = Region(stage.a_set).measure();
    Rational m_e_union = Region(stage.e_set).measure();
    cert.add_computed("m_A_pieces", m_a_pieces);
    cert.add_computed("m_A_union", m_a_union);
    cert.add_computed("m_E_union", m_e_union);
    routes_ok = routes_ok && m_a_pieces == m_a_closed && m_a_union == m_a_closed &&
                m_e_union == m_e_closed;

    Rational l1 = f.l1_norm();
    cert.add_computed("l1_enumerated", l1);
    routes_ok = routes_ok && l1 == l1_closed;

    // Witness averages (f_n)_{h + U_n} >= 1 at sampled grid cells.
    ProductSet u_box = rdf_box(n);
    std::vector<size_t> sample_ids = {0, cell_centers.size() / 2, cell_centers.size() - 1};
    Rational min_avg;
    bool first = true;
    for (size_t id : sample_ids) {
      const Point& g = cell_centers[id];
      std::vector<std::pair<int, Rational>> hc;
      for (int i = 1; i <= n; ++i)
        hc.emplace_back(i, window_start(g.coord(i), g.coord(i), eps, n));
      Point h = Point::from_coords(hc);
      auto [avg, contained] = witness_average(f, u_box, h, g);
      witnesses_ok = witnesses_ok && contained && avg >= Rational(1);
      if (first || avg < min_avg) min_avg = avg;
      first = false;
      cert.witnesses.push_back({g, Region(u_box.translated(h)), avg});
    }
    cert.add_computed("witness_min_avg", min_avg);
  }
  cert.add_computed("routes_equal", Rational(routes_ok ? 1 : 0));
  cert.add_computed("witnesses_ok", Rational(witnesses_ok ? 1 : 0));

  cert.bound = pow2(-n);  // headline: Eq. (2)
  bool eq2 = m_a_closed <= cert.bound;
  bool eq3 = m_e_closed > Rational(1) - pow2(-n);
  cert.verdict = eq2 && eq3 && routes_ok && witnesses_ok;
  return cert;
}

Certificate prop32_assemble(int stages) {
  require(stages >= 1, "prop32 assemble: stages must be >= 1");
  if (stages > 4) throw std::invalid_argument("prop32 assemble: stage bound exceeded (max 4)");

  std::vector<Prop32Stage> built;
  for (int n = 1; n <= stages; ++n) built.push_back(prop32_stage(n, prop32_default_eps(n)));

  Certificate cert;
  cert.claim = "prop32-assemble";
  cert.add_param("stages", static_cast<long>(stages));

  std::vector<ProductSet> a_pieces;
  Rational union_bound(0);
  for (const auto& s : built) {
    a_pieces.push_back(s.a_set);
    union_bound += pow2(-s.n);
  }
  Rational m_union = Region::from_pieces(a_pieces).measure();
  cert.add_computed("m_A_union", m_union);
  cert.add_computed("union_bound", union_bound);

  bool tails_ok = true;
  for (int n = 1; n <= stages; ++n) {
    ProductSet tail_set = built[n - 1].e_set;
    Rational tail_bound(1);
    for (int k = n; k <= stages; ++k) {
      if (k > n) tail_set = tail_set.intersect(built[k - 1].e_set);
      tail_bound -= pow2(-k);
    }
    Rational m_tail = tail_set.measure();
    cert.add_computed("m_E_tail_" + std::to_string(n), m_tail);
    cert.add_computed("E_tail_bound_" + std::to_string(n), tail_bound);
    tails_ok = tails_ok && m_tail >= tail_bound;
  }

  cert.bound = Rational(1, 2);
  cert.verdict = m_union <= union_bound && m_union <= cert.bound && tails_ok;
  return cert;
}

// ---------------------------------------------------------------------------
// Lemma 3.3: the grid construction

Rational GridConstruction::measure_A() const {
  Rational m(1);
  for (size_t i = 0; i < counts.size(); ++i) m *= Rational(counts[i]) * r[K + i];
  return m;
}

Rational GridConstruction::measure_E() const {
  Rational m = Rational(1) - tail;
  for (size_t i = 0; i < counts.size(); ++i) m *= Rational(counts[i]) * beta[i];
  return m;
}

bool GridConstruction::in_E(const Point& g) const {
  long band = 0;
  for (int i = 0; i < block_size(); ++i) {
    Rational x = g.coord(block_lo() + i);
    mpz_class cell = floor_int(x / beta[i]);
    if (cell >= counts[i]) return false;
    Rational offset = x - Rational(cell) * beta[i];
    if (offset.is_zero()) return false;  // grid line: outside the open cells
    if (offset >= r[K + i]) ++band;
  }
  return band < 4l * n;
}

namespace {

// |union_j (j*beta, j*beta + width) ∩ [lo, hi)| for the grid truncated to
// cells 0..count-1.
Rational grid_segment_overlap(const Rational& beta, const Rational& width, long long count,
                              const Rational& lo, const Rational& hi) {
  if (lo >= hi) return Rational(0);
  mpz_class j_lo = floor_int((lo - width) / beta) + 1;
  if (j_lo < 0) j_lo = 0;
  mpz_class j_hi = floor_int(hi / beta);
  Rational ratio = hi / beta;
  if (Rational(j_hi) == ratio) j_hi -= 1;  // arcs starting exactly at hi are disjoint
  mpz_class last(count - 1);
  if (j_hi > last) j_hi = last;
  Rational total(0);
  for (mpz_class j = j_lo; j <= j_hi; ++j) {
    Rational arc_lo = Rational(j) * beta;
    Rational seg = min(hi, arc_lo + width) - max(lo, arc_lo);
    if (seg.sign() > 0) total += seg;
  }
  return total;
}

Rational grid_window_overlap(const Rational& beta, const Rational& width, long long count,
                             const Rational& win_lo, const Rational& win_len) {
  Rational lo = mod1(win_lo);
  Rational hi = lo + win_len;
  if (hi <= Rational(1))
    return grid_segment_overlap(beta, width, count, lo, hi);
  return grid_segment_overlap(beta, width, count, lo, Rational(1)) +
         grid_segment_overlap(beta, width, count, Rational(0), hi - Rational(1));
}

}  // namespace

Rational GridConstruction::window_overlap(const Point& h) const {
  Rational total(1);
  for (size_t c = 1; c <= r.size(); ++c) {
    const Rational& len = r[c - 1];
    if (static_cast<int>(c) >= block_lo() && static_cast<int>(c) <= block_hi()) {
      int i = static_cast<int>(c) - block_lo();
      total *= grid_window_overlap(beta[i], r[K + i], counts[i], h.coord(c), len);
    } else {
      total *= len;
    }
  }
  return total;
}

GridConstruction::WitnessData GridConstruction::witness_for(const Point& g) const {
  if (!in_E(g)) throw std::invalid_argument("lemma33 witness: point not in E");
  std::vector<std::pair<int, Rational>> hc;
  for (size_t c = 1; c <= r.size(); ++c) {
    int coord = static_cast<int>(c);
    const Rational& len = r[c - 1];
    if (coord >= block_lo() && coord <= block_hi()) {
      int i = coord - block_lo();
      Rational x = g.coord(coord);
      Rational cell_origin = Rational(floor_int(x / beta[i])) * beta[i];
      Rational offset = x - cell_origin;
      Rational y = offset < len ? Rational(0) : len / Rational(n);
      hc.emplace_back(coord, mod1(cell_origin + y));
    } else {
      Rational x = g.coord(coord);
      if (!x.is_zero()) hc.emplace_back(coord, mod1(x - len / Rational(2)));
    }
  }
  Point h = Point::from_coords(std::move(hc));
  WitnessData wd;
  wd.h = h;
  wd.avg = window_overlap(h) / Q.measure();
  wd.diam = Region(Q.translated(h)).diameter();
  return wd;
}

std::optional<ProductSet> GridConstruction::materialize(std::size_t max_total_arcs) const {
  unsigned long long total = 0;
  for (long long c : counts) {
    total += static_cast<unsigned long long>(c);
    if (total > max_total_arcs) return std::nullopt;
  }
  ProductSet a_set;
  for (int i = 0; i < block_size(); ++i) {
    std::vector<Arc> arcs;
    arcs.reserve(static_cast<size_t>(counts[i]));
    for (long long j = 0; j < counts[i]; ++j)
      arcs.emplace_back(Rational(j) * beta[i], r[K + i]);
    a_set = a_set.with_factor(block_lo() + i, CoordSet::from_arcs(std::move(arcs)));
  }
  return a_set;
}

std::vector<Point> GridConstruction::default_samples(int count) const {
  // Band coordinates are capped below the exceptional-count threshold.
  int max_band = std::min<long>(block_size(), 4l * n - 1);
  std::vector<Point> out;
  for (int s = 0; s < count; ++s) {
    std::vector<std::pair<int, Rational>> coords;
    int banded = 0;
    for (int i = 0; i < block_size(); ++i) {
      long long cell = (static_cast<long long>(s) * (i + 3) + i) % counts[i];
      bool band = (s % 3 == 2) && banded < max_band;
      if (band) ++banded;
      const Rational& width = r[K + i];
      Rational offset = band ? (width + beta[i]) / Rational(2) : width / Rational(2);
      coords.emplace_back(block_lo() + i, Rational(cell) * beta[i] + offset);
    }
    if (s % 2 == 1)
      for (int c = 1; c <= K; ++c) coords.emplace_back(c, Rational(1, 3));
    out.push_back(Point::from_coords(std::move(coords)));
  }
  return out;
}

namespace {

Rational lemma33_diam_bound(int K, int L) {
  int block = (L + 1) * (L + 1);
  return pow2(-(K + block)) * Rational(1, block + 1) * Rational(L + 1, L + 2);
}

}  // namespace

std::pair<GridConstruction, Certificate> lemma33_build(int K, int L, const ProductSet& Q,
                                                       const std::vector<Point>& samples) {
  require(K >= 1 && L >= 1, "lemma33: K and L must be >= 1");
  require(!Q.is_empty() && !Q.is_full_torus(), "lemma33: Q must be a nontrivial box");

  GridConstruction gc;
  gc.K = K;
  gc.L = L;
  gc.n = L + 1;
  gc.Q = Q;
  int expected = 1;
  for (const auto& [coord, factor] : Q.factors()) {
    require(coord == expected, "lemma33: Q factors must occupy coordinates 1..k");
    require(factor.arcs().size() == 1 && factor.arcs()[0].start.is_zero(),
            "lemma33: each factor of Q must be a single arc (0, r_i)");
    gc.r.push_back(factor.arcs()[0].length);
    ++expected;
  }
  int k = static_cast<int>(gc.r.size());
  int block = gc.block_size();
  require(k >= K + block, "lemma33: Q must constrain at least K + (L+1)^2 coordinates");

  Rational diam_q = Region(Q).diameter();
  Rational diam_bound = lemma33_diam_bound(K, L);
  if (diam_q > diam_bound)
    throw std::invalid_argument("lemma33: Q violates the diameter precondition");

  Rational cond_bound = Rational(1, block + 1);
  Rational cond_max(0);
  for (int i = 1; i <= K + block; ++i)
    cond_max = max(cond_max, Rational(gc.n + 1, gc.n) * gc.r[i - 1]);
  if (cond_max > cond_bound)
    throw std::invalid_argument("lemma33: Q violates the factor-size condition");

  bool grid_ok = true;
  for (int i = 0; i < block; ++i) {
    Rational beta = Rational(gc.n + 1, gc.n) * gc.r[K + i];
    mpz_class l = floor_int(Rational(1) / beta);
    if (!l.fits_slong_p())
      throw std::invalid_argument("lemma33: grid count does not fit a machine integer");
    long long count = l.get_si();
    grid_ok = grid_ok && Rational(count) * beta <= Rational(1) &&
              Rational(1) < Rational(count + 1) * beta;
    gc.beta.push_back(beta);
    gc.counts.push_back(count);
  }
  gc.tail = binomial_tail(block, Rational(1, gc.n + 1), 4l * gc.n);

  Rational m_a = gc.measure_A();
  Rational m_e = gc.measure_E();
  Rational pow_bound = pow(Rational(gc.n, gc.n + 1), block);
  Rational e_l_lb = exp_lower(-L);
  Rational half_e_ub = exp_upper(-1) / Rational(2);
  Rational e8_ub = exp_upper(-8);
  Rational diam_cap = pow2(-L);

  Certificate cert;
  cert.claim = "lemma33";
  cert.add_param("K", static_cast<long>(K));
  cert.add_param("L", static_cast<long>(L));
  cert.add_param("k", static_cast<long>(k));
  cert.add_param("n", static_cast<long>(gc.n));
  cert.add_computed("diam_Q", diam_q);
  cert.add_computed("diam_bound", diam_bound);
  cert.add_computed("cond_max", cond_max);
  cert.add_computed("cond_bound", cond_bound);
  cert.add_computed("grid_ok", Rational(grid_ok ? 1 : 0));
  cert.add_computed("band_tail", gc.tail);
  cert.add_computed("m_A", m_a);
  cert.add_computed("m_A_pow_bound", pow_bound);
  cert.add_computed("m_E", m_e);
  cert.add_computed("half_e_inv_ub", half_e_ub);
  cert.add_computed("e8_ub", e8_ub);
  cert.add_computed("diam_cap", diam_cap);

  // Sampled witnesses.
  std::vector<Point> pts = samples.empty() ? gc.default_samples(10) : samples;
  for (size_t s = 0; s < pts.size(); ++s)
    if (!gc.in_E(pts[s]))
      throw std::invalid_argument("lemma33: sample point " + std::to_string(s + 1) +
                                  " is not in E");
  bool contained_all = true;
  Rational min_avg, max_diam;
  bool first = true;
  for (const auto& g : pts) {
    auto wd = gc.witness_for(g);
    ProductSet window = Q.translated(wd.h);
    contained_all = contained_all && window.closure_contains(g);
    if (first || wd.avg < min_avg) min_avg = wd.avg;
    if (first || wd.diam > max_diam) max_diam = wd.diam;
    first = false;
    cert.witnesses.push_back({g, Region(window), wd.avg});
  }
  cert.add_computed("witness_min_avg", min_avg);
  cert.add_computed("witness_max_diam", max_diam);
  cert.add_computed("witnesses_contained", Rational(contained_all ? 1 : 0));

  // Cross-route checks on the explicit region, when it is small enough to
  // materialize.
  bool routes_ok = true;
  if (auto mat = gc.materialize()) {
    Rational m_a_region = Region(*mat).measure();
    cert.add_computed("m_A_region", m_a_region);
    routes_ok = routes_ok && m_a_region == m_a;
    SimpleFunction chi = SimpleFunction::indicator(*mat);
    for (size_t s = 0; s < pts.size(); ++s) {
      Rational region_avg = average(chi, cert.witnesses[s].region);
      routes_ok = routes_ok && region_avg == cert.witnesses[s].value;
    }
  }
  cert.add_computed("routes_equal", Rational(routes_ok ? 1 : 0));

  cert.bound = e_l_lb;  // headline: m(A) < e^-L via the certified lower bound
  cert.verdict = grid_ok && cond_max <= cond_bound && m_a <= pow_bound && m_a <= e_l_lb &&
                 m_e >= half_e_ub && min_avg >= e8_ub && max_diam < diam_cap &&
                 contained_all && routes_ok;
  return {std::move(gc), std::move(cert)};
}

// ---------------------------------------------------------------------------
// Theorem 3.1

ProductSet default_theorem31_shape(int K, int L, const Rational& diam_bound) {
  int block = (L + 1) * (L + 1);
  for (int m = std::max(K + block, 1); m <= 200; ++m) {
    // diam((0, 2^-m)^m x T) = 2^-m (1 - 2^-m) + 2^-(m+1)
    Rational diam = pow2(-m) * (Rational(1) - pow2(-m)) + pow2(-m - 1);
    if (diam <= diam_bound) return rdf_box(m);
  }
  throw std::invalid_argument("theorem31 shape: no admissible box below m = 200");
}

Certificate theorem31_assemble(const Rational& epsilon, int stages, ShapeProvider provider) {
  require(epsilon.sign() > 0, "theorem31: epsilon must be positive");
  require(stages >= 1, "theorem31: stages must be >= 1");
  if (stages > 3)
    throw std::invalid_argument("theorem31: schedule infeasible at desk scale (max 3 stages)");
  if (!provider) provider = default_theorem31_shape;

  Certificate cert;
  cert.claim = "theorem31";
  cert.add_param("epsilon", epsilon);
  cert.add_param("stages", static_cast<long>(stages));

  std::vector<GridConstruction> grids;
  bool stage_ok = true;
  int K = 1;
  for (int s = 1; s <= stages; ++s) {
    int L = 0;
    for (int cand = 1; cand <= 60; ++cand) {
      if (exp_upper(-cand) <= epsilon * pow2(-s)) {
        L = cand;
        break;
      }
    }
    if (L == 0) throw std::invalid_argument("theorem31: schedule infeasible (L too large)");
    ProductSet q = provider(K, L, lemma33_diam_bound(K, L));
    auto [gc, sub] = lemma33_build(K, L, q);
    stage_ok = stage_ok && sub.verdict;
    cert.add_param("K" + std::to_string(s), static_cast<long>(K));
    cert.add_param("L" + std::to_string(s), static_cast<long>(L));
    cert.add_computed("m_A_" + std::to_string(s), gc.measure_A());
    cert.add_computed("m_E_" + std::to_string(s), gc.measure_E());
    cert.add_computed("stage_" + std::to_string(s) + "_ok", Rational(sub.verdict ? 1 : 0));
    grids.push_back(std::move(gc));
    K = K + (L + 1) * (L + 1) + 1;
  }

  // Exact union measure two ways: the independent-complement product and
  // inclusion-exclusion over the disjoint-block products.
  Rational prod_complement(1);
  for (const auto& g : grids) prod_complement *= Rational(1) - g.measure_A();
  Rational m_union = Rational(1) - prod_complement;
  Rational m_union_ie(0);
  int count = static_cast<int>(grids.size());
  for (int mask = 1; mask < (1 << count); ++mask) {
    Rational term(1);
    int bits = 0;
    for (int i = 0; i < count; ++i)
      if (mask & (1 << i)) {
        term *= grids[i].measure_A();
        ++bits;
      }
    m_union_ie += (bits % 2 == 1) ? term : -term;
  }
  cert.add_computed("m_A_union", m_union);
  cert.add_computed("m_A_union_ie", m_union_ie);

  // Pairwise independence identities over the disjoint coordinate blocks.
  bool independent_ok = true;
  Rational half_e_ub = exp_upper(-1) / Rational(2);
  bool coverage_ok = true;
  for (int i = 0; i < count; ++i)
    coverage_ok = coverage_ok && grids[i].measure_E() >= half_e_ub;
  for (int i = 0; i < count; ++i)
    for (int j = i + 1; j < count; ++j) {
      bool disjoint_blocks = grids[i].block_hi() < grids[j].block_lo();
      independent_ok = independent_ok && disjoint_blocks;
      // structural route: one product over the union of the two blocks
      Rational structural = (Rational(1) - grids[i].tail) * (Rational(1) - grids[j].tail);
      for (size_t t = 0; t < grids[i].counts.size(); ++t)
        structural *= Rational(grids[i].counts[t]) * grids[i].beta[t];
      for (size_t t = 0; t < grids[j].counts.size(); ++t)
        structural *= Rational(grids[j].counts[t]) * grids[j].beta[t];
      Rational product = grids[i].measure_E() * grids[j].measure_E();
      std::string tag = std::to_string(i + 1) + std::to_string(j + 1);
      cert.add_computed("m_E_inter_" + tag, structural);
      cert.add_computed("m_E_product_" + tag, product);
      independent_ok = independent_ok && structural == product;
    }

  // Stagewise witnesses at sampled points of the intersection of all E_n.
  Rational e8_ub = exp_upper(-8);
  bool witness_ok = true;
  Rational min_avg, min_union_avg, max_rel_diam(0);
  bool first = true;
  std::vector<Point> combined;
  for (int s = 0; s < 3; ++s) {
    std::vector<std::pair<int, Rational>> coords;
    for (const auto& g : grids) {
      Point sample = g.default_samples(s + 1).back();
      for (const auto& [c, v] : sample.coords())
        if (c >= g.block_lo() && c <= g.block_hi()) coords.emplace_back(c, v);
    }
    combined.push_back(Point::from_coords(std::move(coords)));
  }
  for (const auto& g : combined) {
    for (int i = 0; i < count; ++i) {
      witness_ok = witness_ok && grids[i].in_E(g);
      auto wd = grids[i].witness_for(g);
      ProductSet window = grids[i].Q.translated(wd.h);
      witness_ok = witness_ok && window.closure_contains(g) && wd.avg >= e8_ub &&
                   wd.diam < pow2(-grids[i].L);
      // average of the union indicator over the same window
      Rational m_window = grids[i].Q.measure();
      Rational union_overlap(0);
      for (int mask = 1; mask < (1 << count); ++mask) {
        Rational term(1);
        int bits = 0;
        for (int j = 0; j < count; ++j) {
          if (!(mask & (1 << j))) continue;
          ++bits;
          // contribution of A_j inside/outside the window, per coordinate
          Rational contrib(1);
          for (int t = 0; t < grids[j].block_size(); ++t) {
            int coord = grids[j].block_lo() + t;
            if (coord <= static_cast<int>(grids[i].r.size())) {
              contrib *= grid_window_overlap(grids[j].beta[t], grids[j].r[grids[j].K + t],
                                             grids[j].counts[t], wd.h.coord(coord),
                                             grids[i].r[coord - 1]);
            } else {
              contrib *= Rational(grids[j].counts[t]) * grids[j].r[grids[j].K + t];
            }
          }
          term *= contrib;
        }
        // window coordinates not constrained by any selected block
        Rational rest(1);
        for (size_t c = 1; c <= grids[i].r.size(); ++c) {
          bool covered = false;
          for (int j = 0; j < count; ++j)
            if (mask & (1 << j))
              if (static_cast<int>(c) >= grids[j].block_lo() &&
                  static_cast<int>(c) <= grids[j].block_hi())
                covered = true;
          if (!covered) rest *= grids[i].r[c - 1];
        }
        union_overlap += (bits % 2 == 1) ? term * rest : -(term * rest);
      }
      Rational union_avg = union_overlap / m_window;
      witness_ok = witness_ok && union_avg >= e8_ub && union_avg >= wd.avg;
      if (first || wd.avg < min_avg) min_avg = wd.avg;
      if (first || union_avg < min_union_avg) min_union_avg = union_avg;
      Rational rel = wd.diam / pow2(-grids[i].L);
      if (first || rel > max_rel_diam) max_rel_diam = rel;
      first = false;
      cert.witnesses.push_back({g, Region(window), wd.avg});
    }
  }
  cert.add_computed("witness_min_avg", min_avg);
  cert.add_computed("union_witness_min_avg", min_union_avg);
  cert.add_computed("e8_ub", e8_ub);
  cert.add_computed("half_e_inv_ub", half_e_ub);
  cert.add_computed("coverage_ok", Rational(coverage_ok ? 1 : 0));
  cert.add_computed("independence_ok", Rational(independent_ok ? 1 : 0));
  cert.add_computed("stages_ok", Rational(stage_ok ? 1 : 0));
  cert.add_computed("witnesses_ok", Rational(witness_ok ? 1 : 0));

  cert.bound = epsilon;
  cert.verdict = stage_ok && m_union < epsilon && m_union == m_union_ie && independent_ok &&
                 coverage_ok && witness_ok;
  return cert;
}

// ---------------------------------------------------------------------------
// Section 4

Certificate prop41_certificate(int n) {
  require(n >= 1, "prop41: n must be >= 1");
  BasisFamily family = build_family(FamilyKind::DBasis, n);
  ProductSet u_box = rdf_box(n);
  SimpleFunction f = SimpleFunction::indicator(u_box);
  Rational lambda(1, 3);

  MaximalQuery q{family, f, std::nullopt};
  auto [superlevel, m_super] = superlevel_set(q, lambda);
  Rational norm = f.l1_norm();
  Rational ratio = lambda * m_super / norm;

  Certificate cert;
  cert.claim = "prop41";
  cert.add_param("n", static_cast<long>(n));
  cert.add_param("lambda", lambda);
  cert.add_computed("l1_norm", norm);
  cert.add_computed("m_superlevel", m_super);
  cert.add_computed("ratio", ratio);
  cert.bound = Rational(n + 1, 3);

  // The adjacent-box pairs themselves, with their averages of exactly 1/2.
  bool pairs_ok = true;
  for (int i = 1; i <= n; ++i) {
    Point shift = rdf_shift(n, i);
    Region pair = Region::from_pieces({u_box, u_box.translated(shift)});
    Rational avg = average(f, pair);
    pairs_ok = pairs_ok && avg == Rational(1, 2);
    std::vector<std::pair<int, Rational>> gc;
    for (int c = 1; c <= n; ++c) gc.emplace_back(c, pow2(-n - 1) + shift.coord(c));
    cert.witnesses.push_back({Point::from_coords(std::move(gc)), pair, avg});
  }
  cert.add_computed("pair_averages_ok", Rational(pairs_ok ? 1 : 0));

  cert.verdict = ratio >= cert.bound && pairs_ok;
  return cert;
}

Certificate prop42_certificate(int k) {
  require(k >= 1, "prop42: k must be >= 1");
  BasisFamily family = build_family(FamilyKind::GBasis, k + 2);
  ProductSet cell = rdf_cell(k + 2);
  SimpleFunction f = SimpleFunction::indicator(cell);
  Rational lambda(1, 3);

  // The group translates tile the torus up to a null set.
  std::vector<ProductSet> tiles;
  bool tiling_ok = true;
  for_each_group_point(k + 2, [&](const Point& h) {
    tiles.push_back(cell.translated(h));
    if (!h.is_zero())
      tiling_ok = tiling_ok &&
                  average(f, Region::from_pieces({cell, tiles.back()})) == Rational(1, 2);
  });
  Region e_region = Region::from_pieces(tiles);
  Rational m_e = e_region.measure();

  MaximalQuery q{family, f, std::nullopt};
  auto [superlevel, m_super] = superlevel_set(q, lambda);

  DeltaWitness witness{f, lambda, e_region, k, std::nullopt};
  Certificate sub = delta_witness_check(witness, family);

  Certificate cert;
  cert.claim = "prop42";
  cert.add_param("k", static_cast<long>(k));
  cert.add_param("lambda", lambda);
  Rational norm = f.l1_norm();
  cert.add_computed("l1_norm", norm);
  cert.add_computed("lambda_m_E", lambda * m_e);
  cert.add_computed("m_E", m_e);
  cert.add_computed("m_superlevel", m_super);
  cert.add_computed("tiling_ok", Rational(tiling_ok ? 1 : 0));
  cert.add_computed("delta_ok", Rational(sub.verdict ? 1 : 0));
  cert.bound = pow2(k) * norm;

  Point tile_center = Point::from_coords({{1, pow2(-k - 3)}});
  cert.witnesses.push_back(
      {tile_center, Region::from_pieces({cell, cell.translated(rdf_group(k + 2)[1])}),
       Rational(1, 2)});

  cert.verdict = m_e == Rational(1) && m_super == Rational(1) && lambda * m_e > cert.bound &&
                 tiling_ok && sub.verdict;
  return cert;
}

// ---------------------------------------------------------------------------
// Re-verification

namespace {

bool flag_set(const Certificate& c, const std::string& key) {
  return c.get_computed(key) == Rational(1);
}

bool reverify_lemma33(const Certificate& c) {
  return flag_set(c, "grid_ok") && c.get_computed("cond_max") <= c.get_computed("cond_bound") &&
         c.get_computed("m_A") <= c.get_computed("m_A_pow_bound") &&
         c.get_computed("m_A") <= c.bound &&
         c.get_computed("m_E") >= c.get_computed("half_e_inv_ub") &&
         c.get_computed("witness_min_avg") >= c.get_computed("e8_ub") &&
         c.get_computed("witness_max_diam") < c.get_computed("diam_cap") &&
         flag_set(c, "witnesses_contained") && flag_set(c, "routes_equal") &&
         c.get_computed("diam_Q") <= c.get_computed("diam_bound");
}

bool reverify_theorem31(const Certificate& c) {
  Rational eps = c.bound;
  bool ok = flag_set(c, "stages_ok") && flag_set(c, "independence_ok") &&
            flag_set(c, "coverage_ok") && flag_set(c, "witnesses_ok") &&
            c.get_computed("m_A_union") < eps &&
            c.get_computed("m_A_union") == c.get_computed("m_A_union_ie") &&
            c.get_computed("witness_min_avg") >= c.get_computed("e8_ub") &&
            c.get_computed("union_witness_min_avg") >= c.get_computed("e8_ub");
  for (const auto& [key, value] : c.computed) {
    if (key.rfind("m_E_inter_", 0) == 0) {
      std::string tag = key.substr(10);
      ok = ok && value == c.get_computed("m_E_product_" + tag);
    }
    if (key.rfind("m_E_", 0) == 0 && key.size() == 5)  // per-stage m_E_s
      ok = ok && value >= c.get_computed("half_e_inv_ub");
  }
  return ok;
}

bool reverify_prop32(const Certificate& c) {
  bool ok = c.get_computed("m_A") <= c.get_computed("eq2_bound") &&
            c.get_computed("m_E") > c.get_computed("eq3_bound") &&
            flag_set(c, "routes_equal") && flag_set(c, "witnesses_ok");
  if (c.has_computed("m_A_pieces")) ok = ok && c.get_computed("m_A_pieces") == c.get_computed("m_A");
  if (c.has_computed("m_A_union")) ok = ok && c.get_computed("m_A_union") == c.get_computed("m_A");
  if (c.has_computed("m_E_union")) ok = ok && c.get_computed("m_E_union") == c.get_computed("m_E");
  if (c.has_computed("l1_enumerated"))
    ok = ok && c.get_computed("l1_enumerated") == c.get_computed("l1_norm");
  if (c.has_computed("witness_min_avg")) ok = ok && c.get_computed("witness_min_avg") >= Rational(1);
  return ok;
}

bool reverify_prop32_assemble(const Certificate& c) {
  bool ok = c.get_computed("m_A_union") <= c.get_computed("union_bound") &&
            c.get_computed("m_A_union") <= c.bound;
  for (const auto& [key, value] : c.computed)
    if (key.rfind("m_E_tail_", 0) == 0)
      ok = ok && value >= c.get_computed("E_tail_bound_" + key.substr(9));
  return ok;
}

}  // namespace

bool reverify(const Certificate& c) {
  if (c.claim == "lemma31") return c.get_computed("tail") < c.bound;
  if (c.claim == "lemma32")
    return flag_set(c, "contained") && c.get_computed("ratio") > c.bound;
  if (c.claim == "prop31")
    return c.get_computed("eq1_closed") == c.get_computed("eq1_measure") &&
           c.get_computed("eq1_closed") >= c.bound &&
           c.get_computed("l1_norm") == Rational(1) && flag_set(c, "witnesses_contained") &&
           c.get_computed("witness_min_avg") >= c.get_computed("witness_threshold");
  if (c.claim == "prop32") return reverify_prop32(c);
  if (c.claim == "prop32-assemble") return reverify_prop32_assemble(c);
  if (c.claim == "lemma33") return reverify_lemma33(c);
  if (c.claim == "theorem31") return reverify_theorem31(c);
  if (c.claim == "prop41")
    return c.get_computed("ratio") >= c.bound && flag_set(c, "pair_averages_ok");
  if (c.claim == "prop42")
    return c.get_computed("m_E") == Rational(1) &&
           c.get_computed("m_superlevel") == Rational(1) &&
           c.get_computed("lambda_m_E") > c.bound && flag_set(c, "tiling_ok") &&
           flag_set(c, "delta_ok");
  if (c.claim == "delta-witness")
    return c.get_computed("m_E_minus_superlevel").is_zero() &&
           c.get_computed("lambda_m_E") > c.bound;
  throw std::invalid_argument("reverify: unknown claim '" + c.claim + "'");
}

}  // namespace torusdiff
