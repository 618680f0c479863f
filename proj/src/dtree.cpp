#include "dtrank/dtree.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace dtrank {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <class Node, class V, class Fn>
V memo_fold(const std::shared_ptr<const Node>& node,
            std::unordered_map<const Node*, V>& memo, Fn&& fn) {
  const auto it = memo.find(node.get());
  if (it != memo.end()) return it->second;
  V v = fn(*node);
  memo.emplace(node.get(), v);
  return v;
}

}  // namespace

DTree DTree::leaf(bool value) {
  auto n = std::make_shared<DNode>();
  n->var = -1;
  n->leaf_value = value;
  return DTree(std::move(n));
}

DTree DTree::query(int var, DTree lo, DTree hi) {
  if (var < 0 || var >= kMaxArity) throw std::invalid_argument("query: bad variable index");
  auto n = std::make_shared<DNode>();
  n->var = var;
  n->lo = lo.root();
  n->hi = hi.root();
  return DTree(std::move(n));
}

DTree DTree::from_root(DNodePtr root) {
  if (!root) throw std::invalid_argument("from_root: null node");
  return DTree(std::move(root));
}

int DTree::rank() const {
  std::unordered_map<const DNode*, int> memo;
  auto go = [&](auto&& self, const DNodePtr& p) -> int {
    return memo_fold(p, memo, [&](const DNode& n) -> int {
      if (n.is_leaf()) return 0;
      const int a = self(self, n.lo), b = self(self, n.hi);
      return a == b ? a + 1 : std::max(a, b);
    });
  };
  return go(go, root_);
}

int DTree::depth() const {
  std::unordered_map<const DNode*, int> memo;
  auto go = [&](auto&& self, const DNodePtr& p) -> int {
    return memo_fold(p, memo, [&](const DNode& n) -> int {
      if (n.is_leaf()) return 0;
      return 1 + std::max(self(self, n.lo), self(self, n.hi));
    });
  };
  return go(go, root_);
}

long long DTree::size() const {
  std::unordered_map<const DNode*, long long> memo;
  auto go = [&](auto&& self, const DNodePtr& p) -> long long {
    return memo_fold(p, memo, [&](const DNode& n) -> long long {
      if (n.is_leaf()) return 1;
      return self(self, n.lo) + self(self, n.hi);
    });
  };
  return go(go, root_);
}

long long DTree::weighted_depth(std::span<const int> weights) const {
  std::unordered_map<const DNode*, long long> memo;
  auto go = [&](auto&& self, const DNodePtr& p) -> long long {
    return memo_fold(p, memo, [&](const DNode& n) -> long long {
      if (n.is_leaf()) return 0;
      if (n.var >= static_cast<int>(weights.size()))
        throw std::invalid_argument("weighted_depth: missing weight for a queried variable");
      if (weights[n.var] < 0)
        throw std::invalid_argument("weighted_depth: weights must be nonnegative");
      return weights[n.var] + std::max(self(self, n.lo), self(self, n.hi));
    });
  };
  return go(go, root_);
}

bool DTree::eval(std::uint32_t x) const {
  const DNode* n = root_.get();
  while (!n->is_leaf()) n = ((x >> n->var) & 1u) ? n->hi.get() : n->lo.get();
  return n->leaf_value;
}

bool DTree::computes(const BoolFun& f) const {
  if (min_arity() > f.arity())
    throw std::invalid_argument("computes: tree queries variables beyond the arity");
  for (std::uint32_t x = 0; x < f.table_size(); ++x)
    if (eval(x) != f.get(x)) return false;
  return true;
}

int DTree::min_arity() const {
  std::unordered_map<const DNode*, int> memo;
  auto go = [&](auto&& self, const DNodePtr& p) -> int {
    return memo_fold(p, memo, [&](const DNode& n) -> int {
      if (n.is_leaf()) return 0;
      return std::max(n.var + 1, std::max(self(self, n.lo), self(self, n.hi)));
    });
  };
  return go(go, root_);
}

bool DTree::is_reduced() const {
  // used[node] = variables appearing anywhere below (and at) the node;
  // a query is legal when its variable is absent from both children.
  std::unordered_map<const DNode*, std::uint32_t> used;
  bool ok = true;
  auto go = [&](auto&& self, const DNodePtr& p) -> std::uint32_t {
    return memo_fold(p, used, [&](const DNode& n) -> std::uint32_t {
      if (n.is_leaf()) return 0u;
      const std::uint32_t below = self(self, n.lo) | self(self, n.hi);
      if ((below >> n.var) & 1u) ok = false;
      return below | (1u << n.var);
    });
  };
  go(go, root_);
  return ok;
}

bool DTree::has_trivial_query() const {
  std::unordered_map<const DNode*, bool> memo;
  auto go = [&](auto&& self, const DNodePtr& p) -> bool {
    return memo_fold(p, memo, [&](const DNode& n) -> bool {
      if (n.is_leaf()) return false;
      if (n.lo->is_leaf() && n.hi->is_leaf() && n.lo->leaf_value == n.hi->leaf_value)
        return true;
      return self(self, n.lo) || self(self, n.hi);
    });
  };
  return go(go, root_);
}

DTree DTree::graft(const DTree& t0, const DTree& t1) const {
  std::unordered_map<const DNode*, DNodePtr> memo;
  auto go = [&](auto&& self, const DNodePtr& p) -> DNodePtr {
    return memo_fold(p, memo, [&](const DNode& n) -> DNodePtr {
      if (n.is_leaf()) return n.leaf_value ? t1.root() : t0.root();
      auto m = std::make_shared<DNode>();
      m->var = n.var;
      m->lo = self(self, n.lo);
      m->hi = self(self, n.hi);
      return m;
    });
  };
  return DTree(go(go, root_));
}

ordered_json DTree::to_json() const {
  auto go = [](auto&& self, const DNodePtr& p) -> ordered_json {
    if (p->is_leaf()) return ordered_json{{"leaf", p->leaf_value ? 1 : 0}};
    ordered_json j;
    j["var"] = p->var + 1;
    j["lo"] = self(self, p->lo);
    j["hi"] = self(self, p->hi);
    return j;
  };
  return go(go, root_);
}

DTree DTree::from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("tree JSON: expected an object");
  if (j.contains("leaf")) {
    const int v = j.at("leaf").get<int>();
    if (v != 0 && v != 1) throw std::invalid_argument("tree JSON: leaf must be 0 or 1");
    return leaf(v == 1);
  }
  const int var = j.at("var").get<int>();
  if (var < 1 || var > kMaxArity) throw std::invalid_argument("tree JSON: var out of range");
  return query(var - 1, from_json(j.at("lo")), from_json(j.at("hi")));
}

namespace {

void dot_node_ids(std::ostream& out, const DNodePtr& p,
                  std::unordered_map<const DNode*, int>& ids) {
  if (ids.count(p.get())) return;
  const int id = static_cast<int>(ids.size());
  ids.emplace(p.get(), id);
  if (p->is_leaf()) {
    out << "  n" << id << " [label=\"" << (p->leaf_value ? 1 : 0)
        << "\", shape=" << (p->leaf_value ? "doublecircle" : "box") << "];\n";
    return;
  }
  out << "  n" << id << " [label=\"x" << (p->var + 1) << "\", shape=circle];\n";
  dot_node_ids(out, p->lo, ids);
  dot_node_ids(out, p->hi, ids);
}

void dot_edges(std::ostream& out, const DNodePtr& p,
               const std::unordered_map<const DNode*, int>& ids,
               std::unordered_map<const DNode*, bool>& done) {
  if (p->is_leaf() || done.count(p.get())) return;
  done.emplace(p.get(), true);
  const int id = ids.at(p.get());
  out << "  n" << id << " -> n" << ids.at(p->lo.get()) << " [label=\"0\", style=dashed];\n";
  out << "  n" << id << " -> n" << ids.at(p->hi.get()) << " [label=\"1\"];\n";
  dot_edges(out, p->lo, ids, done);
  dot_edges(out, p->hi, ids, done);
}

std::string mask_vars(std::uint32_t mask, const char* prefix) {
  std::string s;
  for (int i = 0; i < kMaxArity; ++i)
    if ((mask >> i) & 1u) s += std::string(s.empty() ? "" : "&") + prefix + "x" +
                               std::to_string(i + 1);
  return s;
}

}  // namespace

std::string DTree::to_dot(const std::string& graph_name) const {
  std::ostringstream out;
  out << "digraph " << graph_name << " {\n";
  std::unordered_map<const DNode*, int> ids;
  dot_node_ids(out, root_, ids);
  std::unordered_map<const DNode*, bool> done;
  dot_edges(out, root_, ids, done);
  out << "}\n";
  return out.str();
}

ConjTree ConjTree::leaf(bool value) {
  auto n = std::make_shared<CNode>();
  n->leaf = true;
  n->leaf_value = value;
  return ConjTree(std::move(n));
}

ConjTree ConjTree::query(std::uint32_t pos, std::uint32_t neg, ConjTree lo, ConjTree hi) {
  if ((pos & neg) != 0) throw std::invalid_argument("conj query: overlapping literal sets");
  if ((pos | neg) == 0) throw std::invalid_argument("conj query: empty literal set");
  auto n = std::make_shared<CNode>();
  n->leaf = false;
  n->pos = pos;
  n->neg = neg;
  n->lo = lo.root();
  n->hi = hi.root();
  return ConjTree(std::move(n));
}

int ConjTree::depth() const {
  std::unordered_map<const CNode*, int> memo;
  auto go = [&](auto&& self, const CNodePtr& p) -> int {
    return memo_fold(p, memo, [&](const CNode& n) -> int {
      if (n.leaf) return 0;
      return 1 + std::max(self(self, n.lo), self(self, n.hi));
    });
  };
  return go(go, root_);
}

long long ConjTree::size() const {
  std::unordered_map<const CNode*, long long> memo;
  auto go = [&](auto&& self, const CNodePtr& p) -> long long {
    return memo_fold(p, memo, [&](const CNode& n) -> long long {
      if (n.leaf) return 1;
      return self(self, n.lo) + self(self, n.hi);
    });
  };
  return go(go, root_);
}

bool ConjTree::eval(std::uint32_t x) const {
  const CNode* n = root_.get();
  while (!n->leaf) {
    const bool holds = (x & n->pos) == n->pos && (x & n->neg) == 0;
    n = holds ? n->hi.get() : n->lo.get();
  }
  return n->leaf_value;
}

bool ConjTree::computes(const BoolFun& f) const {
  if (min_arity() > f.arity())
    throw std::invalid_argument("computes: tree queries variables beyond the arity");
  for (std::uint32_t x = 0; x < f.table_size(); ++x)
    if (eval(x) != f.get(x)) return false;
  return true;
}

int ConjTree::min_arity() const {
  std::unordered_map<const CNode*, int> memo;
  auto go = [&](auto&& self, const CNodePtr& p) -> int {
    return memo_fold(p, memo, [&](const CNode& n) -> int {
      if (n.leaf) return 0;
      const std::uint32_t m = n.pos | n.neg;
      int top = 0;
      for (int i = 0; i < kMaxArity; ++i)
        if ((m >> i) & 1u) top = i + 1;
      return std::max(top, std::max(self(self, n.lo), self(self, n.hi)));
    });
  };
  return go(go, root_);
}

namespace {

json mask_list(std::uint32_t mask) {
  json a = json::array();
  for (int i = 0; i < kMaxArity; ++i)
    if ((mask >> i) & 1u) a.push_back(i + 1);
  return a;
}

std::uint32_t list_mask(const json& a) {
  if (!a.is_array()) throw std::invalid_argument("conj JSON: pos/neg must be arrays");
  std::uint32_t m = 0;
  for (const auto& v : a) {
    const int i = v.get<int>();
    if (i < 1 || i > kMaxArity) throw std::invalid_argument("conj JSON: var out of range");
    m |= 1u << (i - 1);
  }
  return m;
}

}  // namespace

ordered_json ConjTree::to_json() const {
  auto go = [](auto&& self, const CNodePtr& p) -> ordered_json {
    if (p->leaf) return ordered_json{{"leaf", p->leaf_value ? 1 : 0}};
    ordered_json j;
    j["pos"] = mask_list(p->pos);
    j["neg"] = mask_list(p->neg);
    j["lo"] = self(self, p->lo);
    j["hi"] = self(self, p->hi);
    return j;
  };
  return go(go, root_);
}

ConjTree ConjTree::from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("conj JSON: expected an object");
  if (j.contains("leaf")) {
    const int v = j.at("leaf").get<int>();
    if (v != 0 && v != 1) throw std::invalid_argument("conj JSON: leaf must be 0 or 1");
    return leaf(v == 1);
  }
  return query(list_mask(j.at("pos")), list_mask(j.at("neg")), from_json(j.at("lo")),
               from_json(j.at("hi")));
}

std::string ConjTree::to_dot(const std::string& graph_name) const {
  std::ostringstream out;
  out << "digraph " << graph_name << " {\n";
  std::unordered_map<const CNode*, int> ids;
  auto emit_nodes = [&](auto&& self, const CNodePtr& p) -> void {
    if (ids.count(p.get())) return;
    const int id = static_cast<int>(ids.size());
    ids.emplace(p.get(), id);
    if (p->leaf) {
      out << "  n" << id << " [label=\"" << (p->leaf_value ? 1 : 0)
          << "\", shape=" << (p->leaf_value ? "doublecircle" : "box") << "];\n";
      return;
    }
    std::string label = mask_vars(p->pos, "");
    const std::string negs = mask_vars(p->neg, "!");
    if (!negs.empty()) label += (label.empty() ? "" : "&") + negs;
    out << "  n" << id << " [label=\"" << label << "\", shape=ellipse];\n";
    self(self, p->lo);
    self(self, p->hi);
  };
  emit_nodes(emit_nodes, root_);
  std::unordered_map<const CNode*, bool> done;
  auto emit_edges = [&](auto&& self, const CNodePtr& p) -> void {
    if (p->leaf || done.count(p.get())) return;
    done.emplace(p.get(), true);
    const int id = ids.at(p.get());
    out << "  n" << id << " -> n" << ids.at(p->lo.get()) << " [label=\"0\", style=dashed];\n";
    out << "  n" << id << " -> n" << ids.at(p->hi.get()) << " [label=\"1\"];\n";
    self(self, p->lo);
    self(self, p->hi);
  };
  emit_edges(emit_edges, root_);
  out << "}\n";
  return out.str();
}

}  // namespace dtrank
