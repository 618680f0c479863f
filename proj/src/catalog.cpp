#include "dtrank/catalog.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

namespace dtrank::catalog {

namespace {
void check_n(int n) {
  if (n < 1 || n > kMaxArity)
    throw std::invalid_argument("arity must be between 1 and " + std::to_string(kMaxArity));
}
}  // namespace

BoolFun and_fn(int n) {
  check_n(n);
  return BoolFun::from_lambda(n, [&](std::uint32_t x) { return x == (1u << n) - 1u; });
}

BoolFun or_fn(int n) {
  check_n(n);
  return BoolFun::from_lambda(n, [](std::uint32_t x) { return x != 0; });
}

BoolFun parity(int n) {
  check_n(n);
  return BoolFun::from_lambda(n, [](std::uint32_t x) { return std::popcount(x) & 1; });
}

BoolFun threshold(int k, int n) {
  check_n(n);
  if (k < 1 || k > n) throw std::invalid_argument("threshold needs 1 <= k <= n");
  return BoolFun::from_lambda(n, [&](std::uint32_t x) { return std::popcount(x) >= k; });
}

BoolFun majority(int n) {
  check_n(n);
  return threshold(n / 2 + 1, n);
}

BoolFun tribes(int rows, int cols) {
  return BoolFun::compose(or_fn(rows), std::vector<BoolFun>(rows, and_fn(cols)));
}

BoolFun tribes_dual(int rows, int cols) {
  return BoolFun::compose(and_fn(rows), std::vector<BoolFun>(rows, or_fn(cols)));
}

BoolFun maj_or_parity(int n) {
  const BoolFun m = majority(n);
  const BoolFun p = parity(n);
  return BoolFun::from_lambda(n, [&](std::uint32_t x) { return m.get(x) || p.get(x); });
}

}  // namespace dtrank::catalog

namespace dtrank {

struct FnExpr::Node {
  enum class Kind { Named, RawTable, Not, Dual, Iter, Compose };
  Kind kind = Kind::Named;
  std::string name;  // Named only
  int a = 0, b = 0;  // Named: params; Iter: repetition count in a
  BoolFun raw;       // RawTable only
  std::vector<std::shared_ptr<const Node>> children;
};

namespace {

using Node = FnExpr::Node;
using NodePtr = std::shared_ptr<const Node>;

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = expression();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    auto id_char = [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    };
    while (pos_ < text_.size() && id_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail("expected a function name");
    return text_.substr(start, pos_ - start);
  }

  int integer() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == start) fail("expected an integer");
    return std::stoi(text_.substr(start, pos_ - start));
  }

  std::string hex_digits() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isxdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == start) fail("expected hex digits");
    return text_.substr(start, pos_ - start);
  }

  NodePtr expression() {
    const std::string name = identifier();
    if (name == "NOT" || name == "DUAL") {
      auto n = std::make_shared<Node>();
      n->kind = name == "NOT" ? Node::Kind::Not : Node::Kind::Dual;
      expect('(');
      n->children.push_back(expression());
      expect(')');
      return n;
    }
    if (name == "ITER") {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Iter;
      expect('(');
      n->children.push_back(expression());
      expect(',');
      n->a = integer();
      if (n->a < 1) fail("ITER repetition count must be at least 1");
      expect(')');
      return n;
    }
    if (name == "COMPOSE") {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Compose;
      expect('(');
      n->children.push_back(expression());
      expect(';');
      n->children.push_back(expression());
      while (eat(',')) n->children.push_back(expression());
      expect(')');
      return n;
    }
    if (name == "TT") {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::RawTable;
      expect(':');
      const std::size_t hex_pos = pos_;
      const std::string hex = hex_digits();
      expect(':');
      const int arity = integer();
      if (arity < 0 || arity > kMaxArity) fail("TT arity out of range");
      try {
        n->raw = BoolFun::from_hex(arity, hex);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), hex_pos);
      }
      return n;
    }

    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Named;
    n->name = name;
    if (name == "AND" || name == "OR" || name == "PARITY" || name == "MAJ" ||
        name == "MAJ-OR-PARITY") {
      expect(':');
      n->a = integer();
    } else if (name == "THR") {
      expect(':');
      n->a = integer();  // k
      expect(':');
      n->b = integer();  // n
    } else if (name == "TRIBES" || name == "TRIBES_D") {
      expect(':');
      n->a = integer();  // rows
      skip_ws();
      if (pos_ >= text_.size() || (text_[pos_] != 'x' && text_[pos_] != 'X'))
        fail("expected 'x' between the tribes dimensions");
      ++pos_;
      n->b = integer();  // cols
    } else {
      fail("unknown function name '" + name + "'");
    }
    return n;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

BoolFun build_node(const Node& n, int cap);

BoolFun build_named(const Node& n, int cap) {
  auto capped = [&](int arity) {
    if (arity > cap)
      throw CapExceeded(n.name + ": arity " + std::to_string(arity) + " exceeds the cap");
  };
  if (n.name == "AND") return capped(n.a), catalog::and_fn(n.a);
  if (n.name == "OR") return capped(n.a), catalog::or_fn(n.a);
  if (n.name == "PARITY") return capped(n.a), catalog::parity(n.a);
  if (n.name == "MAJ") return capped(n.a), catalog::majority(n.a);
  if (n.name == "MAJ-OR-PARITY") return capped(n.a), catalog::maj_or_parity(n.a);
  if (n.name == "THR") return capped(n.b), catalog::threshold(n.a, n.b);
  if (n.name == "TRIBES") return capped(n.a * n.b), catalog::tribes(n.a, n.b);
  if (n.name == "TRIBES_D") return capped(n.a * n.b), catalog::tribes_dual(n.a, n.b);
  throw std::logic_error("unreachable: unknown catalog name survived parsing");
}

BoolFun build_node(const Node& n, int cap) {
  switch (n.kind) {
    case Node::Kind::Named:
      return build_named(n, cap);
    case Node::Kind::RawTable:
      return n.raw;
    case Node::Kind::Not:
      return build_node(*n.children[0], cap).negated();
    case Node::Kind::Dual:
      return build_node(*n.children[0], cap).dual();
    case Node::Kind::Iter:
      return BoolFun::iterate(build_node(*n.children[0], cap), n.a, cap);
    case Node::Kind::Compose: {
      std::vector<BoolFun> inners;
      for (std::size_t i = 1; i < n.children.size(); ++i)
        inners.push_back(build_node(*n.children[i], cap));
      return BoolFun::compose(build_node(*n.children[0], cap), inners, cap);
    }
  }
  throw std::logic_error("unreachable");
}

int node_arity(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Named:
      if (n.name == "THR") return n.b;
      if (n.name == "TRIBES" || n.name == "TRIBES_D") return n.a * n.b;
      return n.a;
    case Node::Kind::RawTable:
      return n.raw.arity();
    case Node::Kind::Not:
    case Node::Kind::Dual:
      return node_arity(*n.children[0]);
    case Node::Kind::Iter: {
      int a = 1;
      const int base = node_arity(*n.children[0]);
      for (int i = 0; i < n.a; ++i) a *= base;
      return a;
    }
    case Node::Kind::Compose: {
      int total = 0;
      for (std::size_t i = 1; i < n.children.size(); ++i)
        total += node_arity(*n.children[i]);
      return total;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

BoolFun FnExpr::build(int arity_cap) const { return build_node(*root_, arity_cap); }

int FnExpr::arity() const { return node_arity(*root_); }

std::optional<Composition> FnExpr::composition() const {
  const Node& n = *root_;
  switch (n.kind) {
    case Node::Kind::Named:
      if (n.name == "TRIBES")
        return Composition{catalog::or_fn(n.a),
                           std::vector<BoolFun>(n.a, catalog::and_fn(n.b))};
      if (n.name == "TRIBES_D")
        return Composition{catalog::and_fn(n.a),
                           std::vector<BoolFun>(n.a, catalog::or_fn(n.b))};
      return std::nullopt;
    case Node::Kind::Iter: {
      if (n.a < 2) return std::nullopt;
      const BoolFun base = build_node(*n.children[0], kMaxArity);
      const BoolFun inner = BoolFun::iterate(base, n.a - 1, kMaxArity);
      return Composition{base, std::vector<BoolFun>(base.arity(), inner)};
    }
    case Node::Kind::Compose: {
      std::vector<BoolFun> inners;
      for (std::size_t i = 1; i < n.children.size(); ++i)
        inners.push_back(build_node(*n.children[i], kMaxArity));
      return Composition{build_node(*n.children[0], kMaxArity), std::move(inners)};
    }
    default:
      return std::nullopt;
  }
}

std::optional<BlockShape> FnExpr::block_shape() const {
  const auto comp = composition();
  if (!comp || comp->inners.empty()) return std::nullopt;
  const int cols = comp->inners.front().arity();
  for (const BoolFun& g : comp->inners)
    if (g.arity() != cols) return std::nullopt;
  return BlockShape{static_cast<int>(comp->inners.size()), cols};
}

FnExpr parse_expression(const std::string& text) {
  FnExpr e;
  e.root_ = Parser(text).parse();
  e.text_ = text;
  return e;
}

BoolFun parse_function(const std::string& text, int arity_cap) {
  return parse_expression(text).build(arity_cap);
}

std::vector<ClosedFormRow> closed_form_rows(int n) {
  if (n < 1 || n > kMaxArity) throw std::invalid_argument("closed_form_rows: bad arity");
  std::vector<ClosedFormRow> rows;
  rows.push_back({"CONST_0", "", 0, 0, 0, 0, n, 0});
  rows.push_back({"CONST_1", "", 0, 0, 0, 0, n, 0});
  const std::string sn = std::to_string(n);
  rows.push_back({"AND_" + sn, "AND:" + sn, n, 1, n, n, n - 1, 1});
  rows.push_back({"OR_" + sn, "OR:" + sn, n, n, 1, n, n - 1, 1});
  rows.push_back({"PARITY_" + sn, "PARITY:" + sn, n, n, n, n, 0, n});
  if (n % 2 == 0) {
    const int k = n / 2;
    rows.push_back({"MAJ_" + sn, "MAJ:" + sn, n, k, k + 1, k + 1, k, k});
  } else {
    const int k = n / 2;
    rows.push_back({"MAJ_" + sn, "MAJ:" + sn, n, k + 1, k + 1, k + 1, k, k + 1});
  }
  for (int k = 1; k <= n; ++k) {
    const int gap = std::max(k - 1, n - k);
    rows.push_back({"THR^" + std::to_string(k) + "_" + sn,
                    "THR:" + std::to_string(k) + ":" + sn, n, n - k + 1, k,
                    std::max(n - k + 1, k), gap, n - gap});
  }
  return rows;
}

std::string to_tt_file(const BoolFun& f) {
  return "n=" + std::to_string(f.arity()) + "\n" + f.to_hex() + "\n";
}

BoolFun from_tt_file(const std::string& contents) {
  std::istringstream in(contents);
  std::string header, hex;
  if (!std::getline(in, header)) throw std::invalid_argument("empty truth-table file");
  while (!header.empty() && std::isspace(static_cast<unsigned char>(header.back())))
    header.pop_back();
  if (header.rfind("n=", 0) != 0)
    throw std::invalid_argument("truth-table file must start with 'n=<arity>'");
  const int n = std::stoi(header.substr(2));
  if (!(in >> hex)) throw std::invalid_argument("truth-table file is missing the table");
  std::string rest;
  if (in >> rest) throw std::invalid_argument("unexpected trailing content in truth-table file");
  return BoolFun::from_hex(n, hex);
}

}  // namespace dtrank
