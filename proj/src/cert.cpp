#include "fincov/cert.hpp"

#include <algorithm>
#include <map>

#include "fincov/errors.hpp"

namespace fincov {

namespace {

// Nested form used while building trees; flattened in preorder at the end.
struct Draft {
  PointSet label;
  std::vector<std::size_t> witness;
  std::vector<Draft> kids;
};

std::vector<std::vector<std::size_t>> child_lists(const CoverTree& t) {
  std::vector<std::vector<std::size_t>> kids(t.size());
  for (std::size_t k = 1; k < t.size(); ++k) {
    kids[static_cast<std::size_t>(t.node(k).parent)].push_back(k);
  }
  return kids;
}

Draft to_draft(const CoverTree& t) {
  const auto kids = child_lists(t);
  auto rec = [&](auto&& self, std::size_t k) -> Draft {
    Draft d{t.node(k).label, t.node(k).witness, {}};
    for (std::size_t c : kids[k]) d.kids.push_back(self(self, c));
    return d;
  };
  return rec(rec, 0);
}

CoverTree from_draft(const Draft& d) {
  std::vector<TreeNode> nodes;
  auto rec = [&](auto&& self, const Draft& x, int parent) -> void {
    const int me = static_cast<int>(nodes.size());
    if (nodes.size() >= budget().max_tree_nodes) throw BudgetExceeded("tree exceeds node cap");
    nodes.push_back({x.label, parent, x.kids.empty() ? std::vector<std::size_t>{} : x.witness});
    for (const auto& k : x.kids) self(self, k, me);
  };
  rec(rec, d, -1);
  return CoverTree(std::move(nodes));
}

Draft split_draft(const PreUniformity& mu, PointSet label, const std::vector<std::size_t>& witness) {
  Draft d{label, witness, {}};
  if (witness.empty()) return d;
  for (PointSet t : traces(label, mu.meet_of(witness))) d.kids.push_back({t, {}, {}});
  return d;
}

Draft replay_draft(const PreUniformity& mu, const Draft& src, PointSet label) {
  Draft d{label, src.witness, {}};
  if (src.kids.empty()) {
    d.witness.clear();
    return d;
  }
  std::vector<PointSet> seen;
  for (const auto& k : src.kids) {
    const PointSet t = label & k.label;
    if (t.empty() || std::find(seen.begin(), seen.end(), t) != seen.end()) continue;
    seen.push_back(t);
    d.kids.push_back(replay_draft(mu, k, t));
  }
  return d;
}

template <class F>
void for_each_leaf(Draft& d, F&& f) {
  if (d.kids.empty()) {
    f(d);
    return;
  }
  for (auto& k : d.kids) for_each_leaf(k, f);
}

std::size_t max_witness_length(const PreUniformity& mu) {
  return mu.mode() == Mode::prefilter ? 1 : mu.basis().size();
}

std::vector<std::size_t> minimal_witness(const PreUniformity& mu, PointSet label,
                                         const std::vector<PointSet>& children) {
  auto w = first_index_list(mu.basis().size(), max_witness_length(mu),
                            [&](const std::vector<std::size_t>& l) {
                              return traces(label, mu.meet_of(l)) == children;
                            });
  if (!w) throw PreconditionFailed("no witness list produces the children of " + label.str());
  return *w;
}

Draft canonical_draft(const PreUniformity& mu, const Draft& d) {
  if (d.kids.empty()) return {d.label, {}, {}};
  if (d.kids.size() == 1 && d.kids[0].label == d.label) return canonical_draft(mu, d.kids[0]);
  Draft out{d.label, {}, {}};
  for (const auto& k : d.kids) out.kids.push_back(canonical_draft(mu, k));
  std::sort(out.kids.begin(), out.kids.end(),
            [](const Draft& a, const Draft& b) { return a.label < b.label; });
  std::vector<PointSet> labels;
  for (const auto& k : out.kids) labels.push_back(k.label);
  out.witness = minimal_witness(mu, d.label, labels);
  return out;
}

// Tree rooted at the carrier for the meet of the listed stage-k basis covers.
Draft stage_tree(const PreUniformity& mu, const DerivationTrace& trace, std::size_t k,
                 const std::vector<std::size_t>& list);

Draft stage_tree_single(const PreUniformity& mu, const DerivationTrace& trace, std::size_t k,
                        std::size_t j) {
  if (k == 0) return split_draft(mu, mu.carrier(), {j});
  const Provenance& p = trace.provenance[k - 1][j];
  Draft d = stage_tree(mu, trace, k - 1, p.parents);
  const Cover u = trace.stages[k - 1].meet_of(p.parents);
  for_each_leaf(d, [&](Draft& leaf) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (leaf.label.subset_of(u.element(i))) {
        leaf = split_draft(mu, leaf.label, {p.choice[i]});
        return;
      }
    }
    throw PreconditionFailed("trace tree end " + leaf.label.str() + " misses its parent cover");
  });
  return d;
}

Draft stage_tree(const PreUniformity& mu, const DerivationTrace& trace, std::size_t k,
                 const std::vector<std::size_t>& list) {
  if (k == 0) return split_draft(mu, mu.carrier(), list);
  Draft d = stage_tree_single(mu, trace, k, list.at(0));
  for (std::size_t m = 1; m < list.size(); ++m) {
    const Draft next = stage_tree_single(mu, trace, k, list[m]);
    for_each_leaf(d, [&](Draft& leaf) { leaf = replay_draft(mu, next, leaf.label); });
  }
  return d;
}

// Tree rooted at the carrier whose ends, restricted to v.over(), refine v.
Draft member_draft(const DerivationTrace& trace, const Cover& v) {
  if (trace.fast) throw PreconditionFailed("certificates need the slowed iteration");
  const PreUniformity& mu = trace.stages.front();
  for (std::size_t k = 0; k < trace.stages.size(); ++k) {
    const Membership m = restricted_membership(trace.stages[k], v);
    if (m.member) return stage_tree(mu, trace, k, m.witness);
  }
  throw NotInLambda(v.str() + " is not in the lambda coreflection");
}

Certificate finish(const PreUniformity& mu, const Draft& d, const Cover& target) {
  return {canonical(mu, from_draft(d)), target};
}

}  // namespace

CoverTree::CoverTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

CoverTree CoverTree::leaf(PointSet label) { return CoverTree({TreeNode{label, -1, {}}}); }

std::vector<std::size_t> CoverTree::children(std::size_t k) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 1; j < nodes_.size(); ++j) {
    if (nodes_[j].parent == static_cast<int>(k)) out.push_back(j);
  }
  return out;
}

bool CoverTree::is_leaf(std::size_t k) const {
  for (std::size_t j = k + 1; j < nodes_.size(); ++j) {
    if (nodes_[j].parent == static_cast<int>(k)) return false;
  }
  return true;
}

std::size_t CoverTree::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  for (std::size_t k = 1; k < nodes_.size(); ++k) {
    d[k] = d[static_cast<std::size_t>(nodes_[k].parent)] + 1;
    best = std::max(best, d[k]);
  }
  return best;
}

Cover ends(const CoverTree& tree) {
  const auto kids = child_lists(tree);
  std::vector<PointSet> out;
  for (std::size_t k = 0; k < tree.size(); ++k) {
    if (kids[k].empty()) out.push_back(tree.node(k).label);
  }
  return Cover(tree.root_label(), std::move(out));
}

std::vector<PointSet> traces(PointSet label, const Cover& w) {
  std::vector<PointSet> out;
  for (PointSet e : w.elements()) {
    if ((e & label).empty()) continue;
    out.push_back(e & label);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CoverTree split(const PreUniformity& mu, PointSet label, const std::vector<std::size_t>& witness) {
  if (!label.subset_of(mu.carrier())) throw PreconditionFailed(label.str() + " leaves the carrier");
  return from_draft(split_draft(mu, label, witness));
}

CoverTree replay(const PreUniformity& mu, const CoverTree& tree, PointSet label) {
  if (!label.subset_of(tree.root_label())) {
    throw PreconditionFailed(label.str() + " is not inside the root label " + tree.root_label().str());
  }
  return from_draft(replay_draft(mu, to_draft(tree), label));
}

CoverTree graft(const CoverTree& tree,
                const std::function<std::optional<CoverTree>(PointSet leaf)>& below) {
  Draft d = to_draft(tree);
  for_each_leaf(d, [&](Draft& leaf) {
    auto sub = below(leaf.label);
    if (!sub) return;
    if (sub->root_label() != leaf.label) {
      throw PreconditionFailed("grafted root " + sub->root_label().str() + " differs from leaf " +
                               leaf.label.str());
    }
    leaf = to_draft(*sub);
  });
  return from_draft(d);
}

CoverTree canonical(const PreUniformity& mu, const CoverTree& tree) {
  return from_draft(canonical_draft(mu, to_draft(tree)));
}

Verdict verify_certificate(const PreUniformity& mu, const Certificate& cert) {
  const CoverTree& t = cert.tree;
  auto fail = [](int node, std::string why) { return Verdict{false, node, std::move(why)}; };
  if (t.size() == 0) return fail(-1, "empty tree");
  if (t.node(0).parent != -1) return fail(0, "root has a parent");
  for (std::size_t k = 1; k < t.size(); ++k) {
    const int p = t.node(k).parent;
    if (p < 0 || static_cast<std::size_t>(p) >= k) {
      return fail(static_cast<int>(k), "parent must precede the node");
    }
  }
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!t.node(k).label.subset_of(mu.carrier())) {
      return fail(static_cast<int>(k), "label leaves the carrier");
    }
  }
  if (t.root_label() != cert.target.over()) return fail(0, "root label differs from the target carrier");

  const auto kids = child_lists(t);
  const std::size_t b = mu.basis().size();
  for (std::size_t k = 0; k < t.size(); ++k) {
    const TreeNode& n = t.node(k);
    const int id = static_cast<int>(k);
    if (kids[k].empty()) {
      if (!n.witness.empty()) return fail(id, "leaf carries a witness");
      continue;
    }
    if (n.witness.empty()) return fail(id, "internal node without witness");
    if (n.witness.size() > max_witness_length(mu)) return fail(id, "prefilter witness is not a single cover");
    for (std::size_t i = 0; i < n.witness.size(); ++i) {
      if (n.witness[i] >= b) return fail(id, "witness index out of range");
      if (i && n.witness[i] <= n.witness[i - 1]) return fail(id, "witness indices not increasing");
    }
    std::vector<PointSet> labels;
    for (std::size_t c : kids[k]) labels.push_back(t.node(c).label);
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
      return fail(id, "repeated child label");
    }
    if (labels != traces(n.label, mu.meet_of(n.witness))) {
      return fail(id, "children are not the traces of the witness");
    }
    auto first = first_index_list(b, n.witness.size(), [&](const std::vector<std::size_t>& l) {
      return traces(n.label, mu.meet_of(l)) == labels;
    });
    if (!first || *first != n.witness) return fail(id, "witness is not minimal");
  }
  if (!refines(ends(t), cert.target)) return fail(-1, "ends do not refine target");
  return {};
}

Certificate certify_membership(const PreUniformity& mu, const Cover& v) {
  return certify_membership(lambda_coreflection(mu).trace, v);
}

Certificate certify_membership(const DerivationTrace& trace, const Cover& v) {
  const PreUniformity& mu = trace.stages.front();
  if (v.over() != mu.carrier()) {
    throw MismatchedCarrier("cover over " + v.over().str() + ", carrier is " + mu.carrier().str());
  }
  return finish(mu, member_draft(trace, v), v);
}

Certificate certify_relative(const DerivationTrace& trace, const Cover& v) {
  const PreUniformity& mu = trace.stages.front();
  const Draft d = member_draft(trace, v);
  return finish(mu, replay_draft(mu, d, v.over()), v);
}

std::vector<Certificate> lambda_certificates(const LambdaResult& result) {
  const PreUniformity& mu = result.trace.stages.front();
  std::vector<Certificate> out;
  for (const auto& c : result.lambda.basis()) {
    if (!membership(mu, c).member) out.push_back(certify_membership(result.trace, c));
  }
  return out;
}

Cover neighbourhood_target(PointSet carrier, PointSet a, PointSet n) {
  return Cover(carrier, {n, carrier - a});
}

Induction neighbourhood_induction(const PreUniformity& mu, PointSet a, const Cover& relative_cover,
                                  const std::vector<NeighbourhoodEntry>& entries,
                                  const std::optional<Cover>& g) {
  const PointSet x = mu.carrier();
  const LambdaResult lam = lambda_coreflection(mu);
  if (relative_cover.over() != a) {
    throw PreconditionFailed("relative cover: it covers " + relative_cover.over().str() +
                             ", not " + a.str());
  }
  if (!restricted_membership(lam.lambda, relative_cover).member) {
    throw PreconditionFailed("relative cover: not in lambda restricted to " + a.str());
  }
  std::map<PointSet, const NeighbourhoodEntry*> by_element;
  for (const auto& e : entries) {
    if (!relative_cover.contains(e.element) || !by_element.emplace(e.element, &e).second) {
      throw PreconditionFailed("relative cover: entry " + e.element.str() +
                               " is not a distinct element");
    }
  }
  if (by_element.size() != relative_cover.size()) {
    throw PreconditionFailed("relative cover: some element has no neighbourhood");
  }
  for (const auto& e : entries) {
    if (!e.element.subset_of(e.neighbourhood) || !e.neighbourhood.subset_of(x)) {
      throw PreconditionFailed("neighbourhood: " + e.neighbourhood.str() + " does not contain " +
                               e.element.str());
    }
    const Verdict v = verify_certificate(mu, e.certificate);
    if (!v.ok) throw PreconditionFailed("neighbourhood: certificate rejected, " + v.reason);
    if (e.certificate.target.over() != x ||
        !refines(e.certificate.target, neighbourhood_target(x, e.element, e.neighbourhood))) {
      throw PreconditionFailed("neighbourhood: certificate target misses " + e.neighbourhood.str());
    }
    if (g) {
      if (!e.uniform) throw PreconditionFailed("uniform: no certificate for " + e.neighbourhood.str());
      const Verdict u = verify_certificate(mu, *e.uniform);
      if (!u.ok) throw PreconditionFailed("uniform: certificate rejected, " + u.reason);
      if (e.uniform->target.over() != e.neighbourhood ||
          !refines(e.uniform->target, restrict_to(*g, e.neighbourhood))) {
        throw PreconditionFailed("uniform: target does not refine G on " + e.neighbourhood.str());
      }
    }
  }

  Induction out;
  for (const auto& e : entries) out.total |= e.neighbourhood;

  // Ends of the lambda tree meet A inside single elements of the relative cover.
  Draft d = member_draft(lam.trace, relative_cover);
  for_each_leaf(d, [&](Draft& leaf) {
    const PointSet trace = leaf.label & a;
    if (trace.empty()) return;
    for (PointSet v : relative_cover.elements()) {
      if (trace.subset_of(v)) {
        leaf = replay_draft(mu, to_draft(by_element.at(v)->certificate.tree), leaf.label);
        return;
      }
    }
  });
  out.total_certificate = finish(mu, d, neighbourhood_target(x, a, out.total));

  if (g) {
    // Stars shrink as covers get finer, so the finest member gives the least N.
    std::vector<Cover> candidates = lam.lambda.basis();
    if (lam.lambda.mode() == Mode::filter) candidates.insert(candidates.begin(), lam.lambda.meet_of_all());
    for (const auto& c : candidates) {
      const PointSet n = star(a, c) | a;
      if (restricted_membership(lam.lambda, restrict_to(*g, n)).member) {
        out.n = n;
        out.n_certificate = certify_membership(lam.trace, neighbourhood_target(x, a, n));
        out.g_certificate = certify_relative(lam.trace, restrict_to(*g, n));
        break;
      }
    }
    if (!out.n) {
      throw PreconditionFailed("second clause: no lambda neighbourhood of " + a.str() +
                               " carries G");
    }
  }
  return out;
}

NoetherianVerdict is_noetherian_within(
    const std::function<std::vector<PointSet>(PointSet)>& successors, PointSet root,
    std::size_t depth_budget) {
  NoetherianVerdict out;
  std::vector<PointSet> path;
  std::size_t visited = 0;
  auto rec = [&](auto&& self, PointSet s) -> bool {
    if (++visited > budget().max_tree_nodes) throw BudgetExceeded("tree exploration exceeds node cap");
    path.push_back(s);
    if (path.size() >= depth_budget) return true;
    for (PointSet next : successors(s)) {
      if (self(self, next)) return true;
    }
    path.pop_back();
    return false;
  };
  if (rec(rec, root)) {
    out.noetherian = false;
    out.chain = path;
  }
  return out;
}

}  // namespace fincov
