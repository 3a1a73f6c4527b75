// Acceptance gate: one PASS/FAIL line per criterion, each with a pinned time
// limit. Usage: acceptance [criterion numbers...]; runs all when none given.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fincov/cert.hpp"
#include "fincov/errors.hpp"
#include "fincov/gamederive.hpp"
#include "fincov/prodcomb.hpp"
#include "golden_check.hpp"
#include "oracles.hpp"

using namespace fincov;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

// Collects the first few failure messages and counts the rest.
class Failures {
public:
  void add(const std::string& msg) {
    if (count_++ < 5) first_ << (count_ > 1 ? "; " : "") << msg;
  }
  std::size_t count() const { return count_; }
  Outcome outcome(const std::string& summary) const {
    if (count_ == 0) return {true, summary};
    return {false, summary + "; " + std::to_string(count_) + " failures: " + first_.str()};
  }

private:
  std::size_t count_ = 0;
  std::ostringstream first_;
};

std::vector<FiniteSpace> spaces_up_to(int n) {
  std::vector<FiniteSpace> out;
  for (int k = 1; k <= n; ++k) {
    for (const auto& s : all_topologies(k)) out.push_back(s);
  }
  return out;
}

std::vector<Cover> open_reduced_covers(const FiniteSpace& s) {
  const auto opens = s.opens();
  std::vector<Cover> out;
  for (const Cover& c : oracle::all_reduced_covers(s.size())) {
    if (oracle::open_cover_of(opens, c)) out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// 1. Perversities

// Increment the first entry equal to its successor, reading past the end as zeros.
std::vector<int> next_perversity(std::vector<int> p) {
  std::size_t i = 0;
  auto at = [&](std::size_t k) { return k < p.size() ? p[k] : 0; };
  while (at(i) != at(i + 1)) ++i;
  if (i >= p.size()) p.resize(i + 1, 0);
  ++p[i];
  return p;
}

Outcome perversity_fidelity() {
  Failures f;
  const std::vector<std::vector<int>> printed = {{}, {1}, {1, 1}, {2, 1}, {2, 1, 1}, {2, 2, 1}};
  const auto six = standard_perversities(6);
  for (std::size_t k = 0; k < printed.size(); ++k) {
    if (six.size() != printed.size() || six[k].entries() != printed[k]) {
      f.add("term " + std::to_string(k) + " differs from the printed sequence");
    }
  }
  const auto ps = standard_perversities(100);
  std::vector<int> expect;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const auto& e = ps[k].entries();
    if (e != expect) f.add("term " + std::to_string(k) + " is " + ps[k].str());
    expect = next_perversity(expect);
    if (!std::is_sorted(e.rbegin(), e.rend())) f.add("term " + std::to_string(k) + " increases");
    if (!e.empty() && e.back() <= 0) f.add("term " + std::to_string(k) + " has a trailing zero");
    for (std::size_t j = 0; j < k; ++j) {
      if (perversity_order(ps[j], ps[k]) != std::partial_ordering::less) {
        f.add("terms " + std::to_string(j) + " and " + std::to_string(k) + " out of order");
      }
    }
  }
  if (ps.size() != 100) f.add("asked for 100 terms, got " + std::to_string(ps.size()));
  return f.outcome("6 printed terms, 100 terms chained and linearly ordered");
}

// ---------------------------------------------------------------------------
// 2. Lambda against the family fixed point

// Orbit representatives of bases (sets of 1..3 reduced covers of n points)
// under point permutations, as sorted index lists into `universe`.
std::vector<std::vector<int>> basis_orbit_representatives(int n, const std::vector<Cover>& universe) {
  std::map<Cover, int> index;
  for (std::size_t k = 0; k < universe.size(); ++k) index[universe[k]] = static_cast<int>(k);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> image;  // image[p][c]
  do {
    std::vector<int> row;
    for (const Cover& c : universe) {
      std::vector<PointSet> els;
      for (PointSet e : c.elements()) {
        PointSet m;
        e.for_each([&](int x) { m |= PointSet::singleton(perm[static_cast<std::size_t>(x)]); });
        els.push_back(m);
      }
      row.push_back(index.at(reduced(Cover::of(n, els))));
    }
    image.push_back(row);
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<std::vector<int>> out;
  const int u = static_cast<int>(universe.size());
  auto consider = [&](const std::vector<int>& b) {
    for (const auto& row : image) {
      std::vector<int> moved;
      for (int c : b) moved.push_back(row[static_cast<std::size_t>(c)]);
      std::sort(moved.begin(), moved.end());
      if (moved < b) return;
    }
    out.push_back(b);
  };
  for (int a = 0; a < u; ++a) {
    consider({a});
    for (int b = a + 1; b < u; ++b) {
      consider({a, b});
      for (int c = b + 1; c < u; ++c) consider({a, b, c});
    }
  }
  return out;
}

PreUniformity basis_of(const FiniteSpace& s, const std::vector<Cover>& universe,
                       const std::vector<int>& idx, Mode mode) {
  std::vector<Cover> b;
  for (int k : idx) b.push_back(universe[static_cast<std::size_t>(k)]);
  return PreUniformity(s, b, mode);
}

oracle::Family lambda_family(const PreUniformity& mu, const std::vector<Cover>& universe) {
  return oracle::family_of(lambda_coreflection(mu).lambda, universe);
}

Outcome lambda_engine() {
  Failures f;
  std::size_t instances = 0, orbit_bases = 0, full_bases = 0;
  for (int n = 1; n <= 4; ++n) {
    const oracle::Lattice lattice(n);
    const auto& universe = lattice.universe();
    const FiniteSpace s = discrete_space(n);
    const auto reps = basis_orbit_representatives(n, universe);
    orbit_bases += reps.size();
    const std::size_t u = universe.size();
    full_bases += u + u * (u - 1) / 2 + u * (u - 1) * (u - 2) / 6;
    for (Mode mode : {Mode::prefilter, Mode::filter}) {
      for (const auto& idx : reps) {
        ++instances;
        const PreUniformity mu = basis_of(s, universe, idx, mode);
        const auto m0 = oracle::family_of(mu, universe);
        const auto got = lambda_family(mu, universe);
        if (got != lattice.lambda(m0, mode == Mode::filter)) {
          f.add("n=" + std::to_string(n) + " " + to_string(mode) + " basis " +
                mu.basis().front().str() + "...: fixed points differ");
        }
        if (mode == Mode::filter && got != m0) f.add("filter-mode lambda grew on n=" + std::to_string(n));
      }
    }
  }

  // The orbit reduction relies on equivariance, and the discrete carrier on
  // lambda ignoring the topology. Both are spot-checked here.
  std::mt19937 rng(20261018);
  std::size_t spot = 0;
  const auto universe = oracle::all_reduced_covers(4);
  const auto tops = all_topologies(4);
  std::uniform_int_distribution<std::size_t> pick(0, universe.size() - 1);
  for (int trial = 0; trial < 400; ++trial) {
    const Mode mode = trial % 2 ? Mode::filter : Mode::prefilter;
    std::vector<int> idx;
    for (int k = 1 + trial % 3; k > 0; --k) idx.push_back(static_cast<int>(pick(rng)));
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    const auto base = lambda_family(basis_of(discrete_space(4), universe, idx, mode), universe);
    const FiniteSpace& top = tops[rng() % tops.size()];
    if (lambda_family(basis_of(top, universe, idx, mode), universe) != base) {
      f.add("lambda depends on the topology");
    }
    std::vector<int> perm = {0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    auto move = [&](const Cover& c) {
      std::vector<PointSet> els;
      for (PointSet e : c.elements()) {
        PointSet m;
        e.for_each([&](int x) { m |= PointSet::singleton(perm[static_cast<std::size_t>(x)]); });
        els.push_back(m);
      }
      return reduced(Cover::of(4, els));
    };
    std::vector<Cover> moved;
    for (int k : idx) moved.push_back(move(universe[static_cast<std::size_t>(k)]));
    const auto l = lambda_coreflection(PreUniformity(discrete_space(4), moved, mode)).lambda;
    for (std::size_t c = 0; c < universe.size(); ++c) {
      if (oracle::member(l, move(universe[c])) != base[c]) f.add("lambda is not equivariant");
    }
    ++spot;
  }
  return f.outcome(std::to_string(instances) + " instances over " + std::to_string(orbit_bases) +
                   " orbit representatives of " + std::to_string(full_bases) +
                   " bases per mode, " + std::to_string(spot) +
                   " topology and permutation spot checks");
}

// ---------------------------------------------------------------------------
// 3. Certificates

// Every single-bit label flip and every single witness-index change.
std::vector<Certificate> mutations(const Certificate& c, int n, std::size_t basis_size) {
  std::vector<Certificate> out;
  for (std::size_t k = 0; k < c.tree.size(); ++k) {
    for (int b = 0; b < n; ++b) {
      Certificate m = c;
      auto& label = m.tree.mutable_nodes()[k].label;
      label = label ^ PointSet::singleton(b);
      out.push_back(m);
    }
    for (std::size_t w = 0; w < c.tree.node(k).witness.size(); ++w) {
      for (std::size_t v = 0; v <= basis_size; ++v) {
        if (v == c.tree.node(k).witness[w]) continue;
        Certificate m = c;
        m.tree.mutable_nodes()[k].witness[w] = v;
        out.push_back(m);
      }
    }
  }
  return out;
}

Outcome certificates() {
  Failures f;
  std::mt19937 rng(3);
  const auto spaces = spaces_up_to(4);
  std::size_t positives = 0, negatives = 0, instances = 0;
  std::vector<std::pair<PreUniformity, Certificate>> valid;
  std::map<int, oracle::Lattice> lattices;
  for (int n = 1; n <= 4; ++n) lattices.emplace(n, oracle::Lattice(n));
  for (int t = 0; t < 2000; ++t) {
    const FiniteSpace& s = spaces[rng() % spaces.size()];
    const Mode mode = t % 3 == 0 ? Mode::filter : Mode::prefilter;
    const PreUniformity mu = oracle::random_preuniformity(rng, s, mode);
    const auto& lattice = lattices.at(s.size());
    const auto expected = lattice.lambda(oracle::family_of(mu, lattice.universe()), mode == Mode::filter);
    const LambdaResult l = lambda_coreflection(mu);
    ++instances;
    for (std::size_t c = 0; c < lattice.universe().size(); ++c) {
      const Cover& v = lattice.universe()[c];
      if (!expected[c]) {
        ++negatives;
        try {
          certify_membership(l.trace, v);
          f.add("certificate issued outside lambda for " + v.str());
        } catch (const NotInLambda&) {
        }
        continue;
      }
      ++positives;
      for (bool direct : {false, true}) {
        const Certificate cert = direct ? certify_membership(mu, v) : certify_membership(l.trace, v);
        const Verdict verdict = verify_certificate(mu, cert);
        if (!verdict.ok) f.add("verifier rejects a certificate for " + v.str() + ": " + verdict.reason);
        if (!oracle::sound_certificate(mu, cert)) f.add("unsound certificate for " + v.str());
        if (cert.target != v) f.add("certificate for the wrong target");
        if (verdict.ok) valid.emplace_back(mu, cert);
      }
    }
  }

  std::shuffle(valid.begin(), valid.end(), rng);
  // Prefer certificates with internal nodes; a bare leaf has no witness to mutate.
  std::stable_partition(valid.begin(), valid.end(),
                        [](const auto& p) { return p.second.tree.size() > 1; });
  const std::size_t sampled = std::min<std::size_t>(200, valid.size());
  std::size_t mutants = 0;
  for (std::size_t k = 0; k < sampled; ++k) {
    const auto& [mu, cert] = valid[k];
    for (const Certificate& m : mutations(cert, mu.space().size(), mu.basis().size())) {
      ++mutants;
      if (verify_certificate(mu, m).ok) f.add("mutant accepted: " + m.target.str());
    }
  }
  if (sampled < 200) f.add("only " + std::to_string(sampled) + " valid certificates to sample");
  return f.outcome(std::to_string(instances) + " pre-uniformities, " + std::to_string(positives) +
                   " lambda members certified twice, " + std::to_string(negatives) +
                   " non-members refused, " + std::to_string(mutants) + " mutants of " +
                   std::to_string(sampled) + " certificates rejected");
}

// ---------------------------------------------------------------------------
// 4. Product lemmas

BasicSet box_set(const ProductSpace& p, const std::vector<PointSet>& sides) {
  std::map<int, PointSet> c;
  for (std::size_t i = 0; i < sides.size(); ++i) c[static_cast<int>(i)] = sides[i];
  return BasicSet(p, c);
}

// Factors constrained by a box: those whose side is not the whole factor.
std::vector<int> box_support(const ProductSpace& p, const std::vector<PointSet>& sides) {
  std::vector<int> out;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    if (sides[i] != p.factors()[i].carrier()) out.push_back(static_cast<int>(i));
  }
  return out;
}

// Minimal neighbourhood of a product point: the box of the factor neighbourhoods.
std::vector<PointSet> neighbourhood_sides(const ProductSpace& p, int x) {
  std::vector<PointSet> sides;
  const auto c = p.coordinates(x);
  for (std::size_t i = 0; i < c.size(); ++i) sides.push_back(p.factors()[i].neighbourhood(c[i]));
  return sides;
}

PointSet closure_by_neighbourhoods(const ProductSpace& p, PointSet s) {
  PointSet out;
  for (int x = 0; x < p.space().size(); ++x) {
    if (oracle::realize(p, neighbourhood_sides(p, x)).meets(s)) out |= PointSet::singleton(x);
  }
  return out;
}

bool disjoint_outside(const std::vector<int>& a, const std::vector<int>& b, const std::set<int>& e) {
  for (int i : a) {
    if (!e.count(i) && std::find(b.begin(), b.end(), i) != b.end()) return false;
  }
  return true;
}

std::vector<int> family_support(const ProductSpace& p, const std::vector<std::vector<PointSet>>& fam) {
  std::set<int> all;
  for (const auto& b : fam) {
    for (int i : box_support(p, b)) all.insert(i);
  }
  return {all.begin(), all.end()};
}

// Factor-size tuples with up to four factors of up to three points whose
// product fits a PointSet.
std::vector<std::vector<int>> size_tuples(std::size_t& skipped) {
  std::vector<std::vector<int>> out, frontier = {{}};
  for (int len = 1; len <= 4; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& t : frontier) {
      for (int k = 1; k <= 3; ++k) {
        auto u = t;
        u.push_back(k);
        next.push_back(u);
        int points = 1;
        for (int v : u) points *= v;
        if (points <= 64) {
          out.push_back(u);
        } else {
          ++skipped;
        }
      }
    }
    frontier = next;
  }
  return out;
}

ProductSpace random_product(std::mt19937& rng, int max_points) {
  for (;;) {
    std::vector<FiniteSpace> fs;
    int points = 1;
    for (int k = 2 + static_cast<int>(rng() % 3); k > 0; --k) {
      const auto tops = all_topologies(1 + static_cast<int>(rng() % 3));
      fs.push_back(tops[rng() % tops.size()]);
      points *= fs.back().size();
    }
    if (points <= max_points) return product(fs);
  }
}

// A random box with open sides constrained only on `factors`.
std::vector<PointSet> random_open_box(std::mt19937& rng, const ProductSpace& p,
                                      const std::vector<int>& factors) {
  std::vector<PointSet> sides;
  for (const auto& f : p.factors()) sides.push_back(f.carrier());
  for (int i : factors) {
    const auto opens = p.factors()[static_cast<std::size_t>(i)].opens();
    sides[static_cast<std::size_t>(i)] = opens[1 + rng() % (opens.size() - 1)];
  }
  return sides;
}

Outcome product_lemmas() {
  Failures f;
  // Shared-support criterion, exhaustively. Discrete factors: the criterion
  // is about sets, and every box is then a basic open set.
  std::size_t skipped = 0, pairs = 0, tuples = 0;
  for (const auto& sizes : size_tuples(skipped)) {
    ++tuples;
    std::vector<FiniteSpace> fs;
    for (int k : sizes) fs.push_back(discrete_space(k));
    const ProductSpace p = product(fs);
    const auto boxes = oracle::all_boxes(p);
    std::vector<BasicSet> sets;
    std::vector<PointSet> real;
    for (const auto& b : boxes) {
      sets.push_back(box_set(p, b));
      real.push_back(oracle::realize(p, b));
      if (sets.back().realize() != real.back()) f.add("realization of " + sets.back().str());
    }
    for (std::size_t a = 0; a < boxes.size(); ++a) {
      for (std::size_t b = a; b < boxes.size(); ++b) {
        ++pairs;
        const auto v = disjoint_support_intersection(sets[a], sets[b]);
        if (v.nonempty != real[a].meets(real[b]) || !v.agrees()) {
          f.add("criterion wrong on " + sets[a].str() + " & " + sets[b].str());
        }
      }
    }
  }

  std::mt19937 rng(71);
  // Dense union: families with pairwise disjoint supports.
  std::size_t dense_runs = 0, dense_bite = 0;
  for (int t = 0; t < 3000; ++t) {
    const ProductSpace p = random_product(rng, 64);
    const int m = p.factor_count();
    const int groups = 1 + static_cast<int>(rng() % static_cast<unsigned>(m));
    std::vector<std::vector<int>> owned(static_cast<std::size_t>(groups));
    for (int i = 0; i < m; ++i) {
      const int g = static_cast<int>(rng() % static_cast<unsigned>(groups + 1));
      if (g < groups) owned[static_cast<std::size_t>(g)].push_back(i);
    }
    std::vector<std::vector<BasicSet>> families;
    std::vector<std::vector<int>> supports;
    PointSet all;
    for (const auto& own : owned) {
      if (own.empty()) continue;
      std::vector<BasicSet> fam;
      std::vector<std::vector<PointSet>> boxes;
      for (int k = 1 + static_cast<int>(rng() % 2); k > 0; --k) {
        std::vector<int> on;
        for (int i : own) {
          if (rng() % 2) on.push_back(i);
        }
        boxes.push_back(random_open_box(rng, p, on));
        fam.push_back(box_set(p, boxes.back()));
        all |= oracle::realize(p, boxes.back());
      }
      supports.push_back(family_support(p, boxes));
      families.push_back(fam);
    }
    if (families.empty()) continue;
    ++dense_runs;
    const DenseVerdict v = dense_union_check(families);
    const bool dense = closure_by_neighbourhoods(p, all) == p.space().carrier();
    bool escape = true;
    for (int x = 0; x < p.space().size(); ++x) {
      const auto ux = box_support(p, neighbourhood_sides(p, x));
      escape = escape && std::any_of(supports.begin(), supports.end(), [&](const auto& s) {
                 return disjoint_outside(s, ux, {});
               });
    }
    if (v.dense != dense) f.add("dense flag disagrees with the closure oracle");
    if (v.escape != escape) f.add("escape flag disagrees with the oracle");
    if (escape && !dense) f.add("dense-union conclusion fails on a valid instance");
    dense_bite += escape ? 1 : 0;
  }

  // Inclusion: G open, R regular open, families of basic open subsets of R
  // projecting onto pi_E[G], supports disjoint outside E.
  std::size_t inclusion_valid = 0, inclusion_tried = 0, inclusion_bite = 0;
  for (int t = 0; t < 6000; ++t) {
    const ProductSpace p = random_product(rng, 12);
    const FiniteSpace& x = p.space();
    const auto opens = x.opens();
    const PointSet r = oracle::interior(opens, oracle::closure(opens, x.carrier(), opens[rng() % opens.size()]));
    if (r.empty()) continue;
    const auto inside = maximal_basic_subsets(p, r, true);
    if (inside.empty()) continue;
    std::vector<int> e;
    for (int i = 0; i < p.factor_count(); ++i) {
      if (rng() % 3) e.push_back(i);
    }
    std::vector<std::vector<BasicSet>> families;
    for (int k = 1 + static_cast<int>(rng() % 3); k > 0; --k) {
      std::vector<BasicSet> fam;
      for (const auto& b : inside) {
        if (rng() % 2) fam.push_back(b);
      }
      if (fam.empty()) fam.push_back(inside[rng() % inside.size()]);
      families.push_back(fam);
    }
    PointSet reach = x.carrier();
    for (const auto& fam : families) {
      PointSet u;
      for (const auto& b : fam) u |= b.realize();
      reach &= p.cylinder(p.project_to(u, e), e);
    }
    std::vector<PointSet> gs;
    for (PointSet o : opens) {
      if (!o.empty() && o.subset_of(reach)) gs.push_back(o);
    }
    if (gs.empty()) continue;
    const PointSet g = gs[rng() % gs.size()];
    ++inclusion_tried;
    InclusionVerdict v;
    try {
      v = inclusion_lemma_check(p, g, r, e, families);
    } catch (const HypothesisViolated&) {
      continue;
    }
    ++inclusion_valid;
    const std::set<int> es(e.begin(), e.end());
    bool escape = true;
    g.for_each([&](int pt) {
      const auto ux = box_support(p, neighbourhood_sides(p, pt));
      escape = escape && std::any_of(families.begin(), families.end(), [&](const auto& fam) {
                 return disjoint_outside(support_of(fam), ux, es);
               });
    });
    if (v.included != g.subset_of(r)) f.add("inclusion flag wrong");
    if (v.escape != escape) f.add("inclusion escape flag disagrees with the oracle");
    if (escape && !g.subset_of(r)) f.add("inclusion conclusion fails on a valid instance");
    inclusion_bite += escape ? 1 : 0;
  }
  if (inclusion_valid == 0) f.add("no valid inclusion instances generated");

  // Blockers: hit every support of a box inside R, no member removable, least size.
  std::size_t blockers = 0;
  for (int t = 0; t < 400; ++t) {
    const ProductSpace p = random_product(rng, 12);
    const FiniteSpace& x = p.space();
    const auto opens = x.opens();
    std::set<PointSet> regular;
    for (PointSet o : opens) {
      const PointSet r = oracle::interior(opens, oracle::closure(opens, x.carrier(), o));
      if (!r.empty() && r != x.carrier()) regular.insert(r);
    }
    const auto boxes = oracle::all_boxes(p);
    for (PointSet r : regular) {
      ++blockers;
      const Blocker b = finite_blocker(p, r);
      std::vector<std::vector<int>> supports;
      for (const auto& box : boxes) {
        if (oracle::realize(p, box).subset_of(r)) supports.push_back(box_support(p, box));
      }
      auto hits_all = [&](const std::vector<int>& fset) {
        return std::all_of(supports.begin(), supports.end(), [&](const auto& s) {
          return std::any_of(s.begin(), s.end(), [&](int i) {
            return std::find(fset.begin(), fset.end(), i) != fset.end();
          });
        });
      };
      if (!hits_all(b.indices)) f.add("blocker misses a support for " + r.str());
      for (std::size_t k = 0; k < b.indices.size(); ++k) {
        auto smaller = b.indices;
        smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(k));
        if (hits_all(smaller)) f.add("blocker not minimal for " + r.str());
      }
      std::size_t least = 64;
      for (unsigned mask = 0; mask < (1U << p.factor_count()); ++mask) {
        std::vector<int> fset;
        for (int i = 0; i < p.factor_count(); ++i) {
          if (mask >> i & 1U) fset.push_back(i);
        }
        if (hits_all(fset)) least = std::min(least, fset.size());
      }
      if (least != b.indices.size()) f.add("blocker is not least for " + r.str());
    }
  }

  return f.outcome(std::to_string(pairs) + " basic-set pairs over " + std::to_string(tuples) +
                   " products (" + std::to_string(skipped) + " over 64 points skipped); " +
                   std::to_string(dense_runs) + " dense-union instances (" +
                   std::to_string(dense_bite) + " with the escape hypothesis); " +
                   std::to_string(inclusion_valid) + " of " + std::to_string(inclusion_tried) +
                   " inclusion instances valid (" + std::to_string(inclusion_bite) +
                   " with escape); " + std::to_string(blockers) + " blockers");
}

// ---------------------------------------------------------------------------
// 5. Regular-open extension

// All unions of non-empty subfamilies.
std::vector<PointSet> unions(const std::vector<PointSet>& els) {
  std::vector<PointSet> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << els.size()); ++mask) {
    PointSet u;
    for (std::size_t i = 0; i < els.size(); ++i) {
      if (mask >> i & 1U) u |= els[i];
    }
    out.push_back(u);
  }
  return out;
}

bool sets_refine(const std::vector<PointSet>& a, const std::vector<PointSet>& b) {
  return std::all_of(a.begin(), a.end(), [&](PointSet x) {
    return std::any_of(b.begin(), b.end(), [&](PointSet y) { return x.subset_of(y); });
  });
}

Outcome extension_refinement() {
  Failures f;
  std::vector<FiniteSpace> spaces;
  for (const auto& a : all_topologies(2)) {
    for (const auto& b : all_topologies(2)) spaces.push_back(product({a, b}).space());
  }
  for (int n : {3, 4}) {
    for (const auto& s : all_topologies(n)) spaces.push_back(s);
  }
  std::map<int, std::vector<Cover>> lattice;
  for (int n : {3, 4}) lattice[n] = oracle::all_reduced_covers(n);

  std::mt19937 rng(5);
  std::size_t both = 0, rejected = 0;
  const int kInstances = 1000;
  for (int t = 0; t < kInstances; ++t) {
    const FiniteSpace& x = spaces[rng() % spaces.size()];
    const auto opens = x.opens();
    const Cover v1 = oracle::random_open_cover(rng, x);
    const Cover v = reduced(star_cover(star_cover(v1)));
    const Cover r = reduced(meet(v1, oracle::random_open_cover(rng, x)));

    // Hypotheses, checked independently: R open, R < V1, and V1 <* W <* V for some W.
    const bool double_star = std::any_of(
        lattice[x.size()].begin(), lattice[x.size()].end(), [&](const Cover& w) {
          return oracle::star_refines_plain(v1, w) && oracle::star_refines_plain(w, v);
        });
    if (!oracle::open_cover_of(opens, r) || !oracle::open_cover_of(opens, v1) ||
        !oracle::refines_plain(r, v1) || !double_star) {
      ++rejected;
      f.add("generated instance fails its hypotheses");
      continue;
    }
    auto ext = [&](const std::vector<PointSet>& els) {
      std::vector<PointSet> out;
      for (PointSet e : els) out.push_back(oracle::interior(opens, oracle::closure(opens, x.carrier(), e)));
      return out;
    };
    const bool plain = sets_refine(ext(r.elements()), v.elements());
    const bool dir = sets_refine(ext(unions(r.elements())), unions(v.elements()));
    const ExtensionVerdict e = extension_refinement_check(x, r, v1, v);
    if (e.extension_refines != plain || e.directed_refines != dir) f.add("verdict disagrees with the oracle");
    if (!plain) f.add("R* does not refine V for R = " + r.str() + ", V = " + v.str());
    if (!dir) f.add("directed R* does not refine directed V");
    both += plain && dir ? 1 : 0;
  }
  return f.outcome(std::to_string(kInstances) + " instances over " + std::to_string(spaces.size()) +
                   " spaces, " + std::to_string(both) + " with both refinements, " +
                   std::to_string(rejected) + " rejected by the hypothesis oracle");
}

// ---------------------------------------------------------------------------
// 6. Products of supercomplete pre-uniformities

// Every reduced open cover is a member, by the subset-of-basis oracle.
bool supercomplete_oracle(const PreUniformity& mu) {
  for (const Cover& c : open_reduced_covers(mu.space())) {
    if (!oracle::member(mu, c)) return false;
  }
  return true;
}

Cover product_neighbourhood_cover(const ProductSpace& p) {
  std::vector<PointSet> els;
  for (int x = 0; x < p.space().size(); ++x) els.push_back(oracle::realize(p, neighbourhood_sides(p, x)));
  return reduced(Cover(p.space().carrier(), els));
}

Outcome supercomplete_products() {
  Failures f;
  const auto spaces = spaces_up_to(3);
  std::mt19937 rng(61);
  // Two supercomplete pre-uniformities per space and mode: the minimal
  // neighbourhood cover alone, and with a random open cover added.
  std::vector<std::vector<PreUniformity>> choices(spaces.size());
  for (std::size_t k = 0; k < spaces.size(); ++k) {
    const FiniteSpace& s = spaces[k];
    for (Mode mode : {Mode::filter, Mode::prefilter}) {
      choices[k].push_back(PreUniformity(s, {minimal_neighbourhood_cover(s)}, mode));
      choices[k].push_back(
          PreUniformity(s, {oracle::random_open_cover(rng, s), minimal_neighbourhood_cover(s)}, mode));
    }
    for (const auto& mu : choices[k]) {
      if (!supercomplete_oracle(mu)) f.add("factor pre-uniformity not supercomplete");
    }
  }

  std::size_t products = 0, enumerated = 0, too_big = 0, oracle_full = 0;
  auto check = [&](const std::vector<PreUniformity>& factors) {
    ++products;
    const ProductPreUniformity pp = product_preuniformity(factors);
    if (!is_supercomplete(pp.mu).supercomplete) f.add("product of supercomplete factors is not supercomplete");
    // Every open cover is refined by the minimal neighbourhood cover, so its
    // membership settles the question for the oracle too.
    if (!oracle::member(pp.mu, product_neighbourhood_cover(pp.product))) {
      f.add("oracle: product misses its neighbourhood cover");
    }
    if (pp.product.space().size() <= 4) {
      ++oracle_full;
      if (!supercomplete_oracle(pp.mu)) f.add("oracle: product misses an open cover");
    }
    if (pp.product.space().size() <= 6) {
      try {
        if (!supercomplete_by_enumeration(pp.mu).supercomplete) f.add("enumeration finds a missing open cover");
        ++enumerated;
      } catch (const BudgetExceeded&) {
        ++too_big;
      }
    } else {
      ++too_big;
    }
  };
  // Multisets of one to three factors; each factor takes every one of its
  // pre-uniformities, all factors sharing one mode.
  const std::size_t n = spaces.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b <= n; ++b) {
      for (std::size_t c = (b == n ? n : b); c <= n; ++c) {
        std::vector<std::size_t> idx = {a};
        if (b < n) idx.push_back(b);
        if (c < n) idx.push_back(c);
        for (std::size_t mode = 0; mode < 2; ++mode) {
          for (unsigned pick = 0; pick < (1U << idx.size()); ++pick) {
            std::vector<PreUniformity> factors;
            for (std::size_t i = 0; i < idx.size(); ++i) {
              factors.push_back(choices[idx[i]][2 * mode + (pick >> i & 1U)]);
            }
            check(factors);
          }
        }
      }
    }
  }
  return f.outcome(std::to_string(products) + " products of " + std::to_string(n) +
                   " factor spaces; every open cover enumerated on " + std::to_string(enumerated) +
                   " (oracle on " + std::to_string(oracle_full) + "), " + std::to_string(too_big) +
                   " settled by the neighbourhood cover alone");
}

// ---------------------------------------------------------------------------
// 7. Normal covers of products of discrete factors

// A cover of {0..n-1} with one to four random elements; uncovered points
// join a random element so the cover stays small.
Cover small_random_cover(std::mt19937& rng, int n) {
  std::vector<PointSet> els;
  for (int k = 1 + static_cast<int>(rng() % 4); k > 0; --k) {
    els.push_back(PointSet(rng() & PointSet::full(n).bits()));
  }
  for (int x = 0; x < n; ++x) {
    bool covered = false;
    for (PointSet e : els) covered = covered || e.contains(x);
    if (!covered) els[rng() % els.size()] |= PointSet::singleton(x);
  }
  std::erase_if(els, [](PointSet e) { return e.empty(); });
  return reduced(Cover::of(n, els));
}

Cover singletons(int n) {
  std::vector<PointSet> els;
  for (int p = 0; p < n; ++p) els.push_back(PointSet::singleton(p));
  return Cover::of(n, els);
}

Outcome normal_products() {
  Failures f;
  std::mt19937 rng(75);
  const std::vector<std::vector<int>> shapes = {{2, 2}, {2, 3}, {3, 3}, {2, 2, 2},
                                                {2, 2, 3}, {2, 3, 3}, {3, 3, 3}};
  std::size_t runs = 0, not_normal = 0, nodes = 0;
  for (const auto& shape : shapes) {
    std::vector<PreUniformity> factors;
    for (int k : shape) {
      const FiniteSpace d = discrete_space(k);
      factors.push_back(PreUniformity(d, {singletons(k)}, Mode::filter));
    }
    const ProductPreUniformity pp = product_preuniformity(factors);
    const FiniteSpace& x = pp.product.space();
    const int n = x.size();

    std::vector<Cover> covers;
    std::vector<Cover> candidates = {singletons(n)};  // open covers the normality oracle may use
    if (n <= 4) {
      covers = open_reduced_covers(x);
      candidates.insert(candidates.end(), covers.begin(), covers.end());
    } else {
      covers = {singletons(n), Cover::of(n, {x.carrier()})};
      for (int k = 0; k < 40; ++k) covers.push_back(small_random_cover(rng, n));
    }
    for (const Cover& v : covers) {
      if (!oracle::normal(candidates, v)) {
        ++not_normal;
        continue;
      }
      ++runs;
      std::optional<NormalCoverRun> attempt;
      try {
        attempt = normal_cover_certificate(factors, v);
      } catch (const BudgetExceeded& e) {
        f.add("budget exceeded on " + std::to_string(n) + " points, " + std::to_string(v.size()) +
              " elements: " + e.what());
        continue;
      }
      const NormalCoverRun& run = *attempt;
      const PreUniformity& mu = run.product.mu;
      for (const Certificate* c : {&run.certificate, &run.directed_certificate}) {
        const Verdict verdict = verify_certificate(mu, *c);
        if (!verdict.ok) f.add("verifier rejects a certificate for " + v.str() + ": " + verdict.reason);
        if (!oracle::sound_certificate(mu, *c)) f.add("unsound certificate for " + v.str());
        nodes += c->tree.size();
      }
      if (run.certificate.target != v) f.add("certificate for the wrong cover");
      // The target must be equivalent to the finite unions of V: inside their
      // union, with some element holding it.
      PointSet all;
      for (PointSet e : v.elements()) all |= e;
      const auto& t = run.directed_certificate.target.elements();
      if (!std::all_of(t.begin(), t.end(), [&](PointSet e) { return e.subset_of(all); }) ||
          !std::any_of(t.begin(), t.end(), [&](PointSet e) { return all.subset_of(e); })) {
        f.add("directed certificate for the wrong cover");
      }
    }
  }
  if (not_normal > 0) f.add(std::to_string(not_normal) + " covers of discrete products judged not normal");
  return f.outcome(std::to_string(runs) + " normal covers over " + std::to_string(shapes.size()) +
                   " products certified, " + std::to_string(nodes) + " certificate nodes verified");
}

// ---------------------------------------------------------------------------
// 8. Partition-completeness, refining subtrees, the game

bool relatively_open_in(const std::vector<PointSet>& opens, PointSet u, PointSet s) {
  return std::any_of(opens.begin(), opens.end(), [&](PointSet o) { return (o & s) == (u & s); });
}

// For the constant sequence of C: any elements with a common point have
// closures with a common point.
bool constant_sequence_complete(const std::vector<PointSet>& opens, PointSet carrier,
                                const std::vector<PointSet>& c) {
  for (std::size_t mask = 1; mask < (std::size_t{1} << c.size()); ++mask) {
    PointSet meet = carrier, closures = carrier;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!(mask >> i & 1U)) continue;
      meet &= c[i];
      closures &= oracle::closure(opens, carrier, c[i]);
    }
    if (!meet.empty() && closures.empty()) return false;
  }
  return true;
}

Outcome game_machinery() {
  Failures f;
  const auto spaces = spaces_up_to(4);
  std::size_t triples = 0, non_exhaustive = 0, deficit_triples = 0, transcripts = 0, regular = 0;
  for (const FiniteSpace& x : spaces) {
    const auto opens = x.opens();
    const PointSet all = x.carrier();
    const bool is_reg = is_regular(x);
    regular += is_reg ? 1 : 0;

    const PartitionCompleteness pc = is_partition_complete(x);
    if (!pc.partition_complete) f.add("space not partition-complete");
    const auto& ex = pc.exhaustive_cover;
    if (!oracle::open_cover_of(opens, ex)) f.add("exhaustive witness is not an open cover");
    for_each_subset(all, [&](PointSet sub) {
      if (sub.empty()) return;
      const bool ok = std::any_of(ex.elements().begin(), ex.elements().end(), [&](PointSet u) {
        return u.meets(sub) && relatively_open_in(opens, u, sub);
      });
      if (!ok) f.add("exhaustive witness fails at " + sub.str());
    });
    PointSet prefix, seen;
    for (PointSet block : pc.left_open_partition) {
      if (block.empty() || block.meets(seen)) f.add("left-open witness is not a partition");
      seen |= block;
      prefix |= block;
      if (std::find(opens.begin(), opens.end(), prefix) == opens.end()) f.add("prefix union not open");
    }
    if (seen != all) f.add("left-open witness misses points");
    if (!constant_sequence_complete(opens, all, ex.elements()) ||
        !constant_sequence_complete(opens, all, pc.left_open_partition)) {
      f.add("witness sequence not complete by the oracle");
    }
    if (!is_complete_sequence(x, {ex}) || !is_complete_sequence(x, {Cover(all, pc.left_open_partition)})) {
      f.add("is_complete_sequence rejects a witness");
    }

    // Refining subtrees for every strategy and reduced open cover.
    for (const Cover& g : open_reduced_covers(x)) {
      std::vector<Strategy> strategies = {least_point_strategy(x), smallest_neighbourhood_strategy(x)};
      try {
        strategies.push_back(strategy_from_cover(x, g));
      } catch (const InvalidStrategy&) {
        ++non_exhaustive;
      }
      const auto directed_g = unions(g.elements());
      for (const Strategy& phi : strategies) {
        ++triples;
        const RefiningSubtree r = cover_refining_subtree(phi, g);
        std::vector<PointSet> leaves;
        PointSet covered;
        for (std::size_t k = 0; k < r.tree.size(); ++k) {
          if (r.tree.is_leaf(k)) {
            leaves.push_back(r.tree.node(k).label);
            covered |= r.tree.node(k).label;
          }
        }
        if (r.tree.root_label() != all) f.add("subtree not rooted at X");
        if (!sets_refine(leaves, directed_g)) f.add("ends do not refine the directed cover");
        if (!r.deficits.empty()) {
          ++deficit_triples;
          if (is_reg) f.add("deficit on a regular space");
          continue;
        }
        if (covered != all) f.add("ends do not cover X");
        if (!sets_refine(leaves, g.elements())) f.add("ends do not refine G");
      }
    }

    // Every legal three-round transcript against both canonical strategies.
    for (const Strategy& phi : {least_point_strategy(x), smallest_neighbourhood_strategy(x)}) {
      std::vector<PointSet> moves;
      auto play = [&](auto&& self, PointSet room) -> void {
        if (moves.size() == 3) {
          ++transcripts;
          const GameResult g = play_game(
              phi, [&](std::size_t round, std::optional<PointSet>) { return moves[round - 1]; }, 3);
          PointSet cluster = all;
          for (const Round& rd : g.rounds) cluster &= oracle::closure(opens, all, rd.t);
          if (!g.ii_wins || cluster.empty() || g.cluster != cluster) f.add("player II loses a legal game");
          return;
        }
        for_each_subset(room, [&](PointSet s) {
          if (s.empty()) return;
          moves.push_back(s);
          self(self, phi(s));
          moves.pop_back();
        });
      };
      play(play, all);
    }
  }
  return f.outcome(std::to_string(spaces.size()) + " spaces partition-complete with checked witnesses; " +
                   std::to_string(triples) + " subtree triples (" + std::to_string(non_exhaustive) +
                   " covers not exhaustive, " + std::to_string(deficit_triples) +
                   " triples with deficits, all on the " + std::to_string(spaces.size() - regular) +
                   " non-regular spaces); " + std::to_string(transcripts) + " legal games won by II");
}

// ---------------------------------------------------------------------------
// 9. CLI goldens

Outcome cli_contract() {
  const auto s = golden::run_goldens(FINCOV_CLI_PATH, FINCOV_GOLDEN_DIR, FINCOV_GOLDEN_WORK, false);
  Failures f;
  for (const auto& msg : s.failures) f.add(msg);
  if (s.cases == 0) f.add("no golden cases found");
  return f.outcome(std::to_string(s.cases) + " cases run twice, " + std::to_string(s.artifacts) +
                   " artifacts round-tripped");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "perversity fidelity", 1, perversity_fidelity},
      {2, "lambda engine vs oracle", 300, lambda_engine},
      {3, "certificate soundness and completeness", 120, certificates},
      {4, "product lemma suite", 600, product_lemmas},
      {5, "regular-open extension", 120, extension_refinement},
      {6, "supercomplete products", 300, supercomplete_products},
      {7, "normal covers of products", 600, normal_products},
      {8, "game and partition machinery", 300, game_machinery},
      {9, "CLI contract", 120, cli_contract},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_s) {
      o.pass = false;
      o.detail += "; over the time limit";
    }
    std::printf("%s %d %s [%.2f s / limit %.0f s] %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                secs, c.limit_s, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
