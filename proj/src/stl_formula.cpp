#include "sttl/stl_formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "sttl/error.hpp"

namespace sttl {

Predicate::Predicate(std::string label_, std::vector<double> center_, std::vector<double> half_width_)
    : label(std::move(label_)), center(std::move(center_)), half_width(std::move(half_width_)) {
  if (center.empty()) fail_invalid("predicate '" + label + "': empty center");
  if (half_width.size() == 1 && center.size() > 1) half_width.assign(center.size(), half_width[0]);
  if (half_width.size() != center.size())
    fail_invalid("predicate '" + label + "': center/half_width dimension mismatch");
  for (double h : half_width)
    if (!(h > 0.0)) fail_invalid("predicate '" + label + "': half_width must be strictly positive");
}

Predicate::Predicate(std::string label_, std::vector<double> center_, double half_width_)
    : Predicate(std::move(label_), std::move(center_), std::vector<double>{half_width_}) {}

double Predicate::eval(std::span<const double> x) const {
  if (custom) return custom(x);
  if (x.size() != center.size())
    fail_invalid("predicate '" + label + "': state dimension mismatch");
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < center.size(); ++i)
    h = std::min(h, half_width[i] - std::abs(x[i] - center[i]));
  return h;
}

namespace {

void check_interval(const Interval& iv) {
  if (!(std::isfinite(iv.a) && std::isfinite(iv.b)))
    fail_invalid("temporal interval endpoints must be finite");
  if (iv.a < 0.0 || iv.a > iv.b)
    fail_invalid("temporal interval must satisfy 0 <= a <= b");
}

FormulaPtr make(StlFormula f) { return std::make_shared<const StlFormula>(std::move(f)); }

}  // namespace

FormulaPtr StlFormula::truth() { return make({StlKind::truth, nullptr, {}, {}}); }

FormulaPtr StlFormula::predicate(Predicate p) {
  return make({StlKind::predicate, std::make_shared<const Predicate>(std::move(p)), {}, {}});
}

FormulaPtr StlFormula::negation(FormulaPtr f) {
  if (!f) fail_invalid("negation: null operand");
  return make({StlKind::negation, nullptr, {std::move(f)}, {}});
}

FormulaPtr StlFormula::conjunction(FormulaPtr lhs, FormulaPtr rhs) {
  if (!lhs || !rhs) fail_invalid("conjunction: null operand");
  return make({StlKind::conjunction, nullptr, {std::move(lhs), std::move(rhs)}, {}});
}

FormulaPtr StlFormula::disjunction(FormulaPtr lhs, FormulaPtr rhs) {
  if (!lhs || !rhs) fail_invalid("disjunction: null operand");
  return make({StlKind::disjunction, nullptr, {std::move(lhs), std::move(rhs)}, {}});
}

FormulaPtr StlFormula::eventually(Interval iv, FormulaPtr f) {
  check_interval(iv);
  if (!f) fail_invalid("eventually: null operand");
  return make({StlKind::eventually, nullptr, {std::move(f)}, iv});
}

FormulaPtr StlFormula::always(Interval iv, FormulaPtr f) {
  check_interval(iv);
  if (!f) fail_invalid("always: null operand");
  return make({StlKind::always, nullptr, {std::move(f)}, iv});
}

FormulaPtr StlFormula::until(Interval iv, FormulaPtr lhs, FormulaPtr rhs) {
  check_interval(iv);
  if (!lhs || !rhs) fail_invalid("until: null operand");
  return make({StlKind::until, nullptr, {std::move(lhs), std::move(rhs)}, iv});
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class Parser {
 public:
  Parser(std::string_view text, const RegionTable& regions) : text_(text), regions_(regions) {}

  FormulaPtr parse() {
    FormulaPtr f = implication();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  std::string_view text_;
  const RegionTable& regions_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    fail_invalid("formula syntax error at position " + std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool eat_arrow() {
    skip_ws();
    if (pos_ + 1 < text_.size() && text_[pos_] == '-' && text_[pos_ + 1] == '>') {
      pos_ += 2;
      return true;
    }
    return false;
  }

  double number() {
    skip_ws();
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  Interval interval() {
    if (!eat('[')) fail("expected '[' to open a temporal interval");
    double a = number();
    if (!eat(',')) fail("expected ',' in temporal interval");
    double b = number();
    if (!eat(']')) fail("expected ']' to close a temporal interval");
    if (a < 0.0 || a > b)
      fail_invalid("formula syntax error at position " + std::to_string(pos_) +
                   ": malformed interval (need 0 <= a <= b)");
    return {a, b};
  }

  // G/F/U act as operators only when immediately followed (modulo spaces) by
  // '['; this keeps single-letter region names like G usable.
  bool next_is_interval() const {
    std::size_t p = pos_;
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    return p < text_.size() && text_[p] == '[';
  }

  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (pos_ == start) fail("expected a predicate name");
    return std::string(text_.substr(start, pos_ - start));
  }

  FormulaPtr implication() {
    FormulaPtr lhs = disjunction();
    if (eat_arrow()) {
      FormulaPtr rhs = implication();
      // surface syntax only: p -> q becomes !p | q
      return StlFormula::disjunction(StlFormula::negation(std::move(lhs)), std::move(rhs));
    }
    return lhs;
  }

  FormulaPtr disjunction() {
    FormulaPtr lhs = conjunction();
    while (eat('|')) lhs = StlFormula::disjunction(std::move(lhs), conjunction());
    return lhs;
  }

  FormulaPtr conjunction() {
    FormulaPtr lhs = until_level();
    while (eat('&')) lhs = StlFormula::conjunction(std::move(lhs), until_level());
    return lhs;
  }

  FormulaPtr until_level() {
    FormulaPtr lhs = unary();
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == 'U') {
      std::size_t save = pos_;
      ++pos_;
      if (next_is_interval()) {
        Interval iv = interval();
        return StlFormula::until(iv, std::move(lhs), until_level());
      }
      pos_ = save;
    }
    return lhs;
  }

  FormulaPtr unary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of formula");
    if (eat('!')) return StlFormula::negation(unary());
    char c = text_[pos_];
    if (c == 'G' || c == 'F') {
      std::size_t save = pos_;
      ++pos_;
      if (next_is_interval()) {
        Interval iv = interval();
        return c == 'G' ? StlFormula::always(iv, unary()) : StlFormula::eventually(iv, unary());
      }
      pos_ = save;
    }
    return atom();
  }

  FormulaPtr atom() {
    skip_ws();
    if (eat('(')) {
      FormulaPtr f = implication();
      if (!eat(')')) fail("expected ')'");
      return f;
    }
    std::size_t at = pos_;
    std::string name = identifier();
    if (name == "true") return StlFormula::truth();
    if (name == "false") return StlFormula::negation(StlFormula::truth());
    auto it = regions_.find(name);
    if (it == regions_.end()) {
      pos_ = at;
      fail("unbound predicate name '" + name + "'");
    }
    return StlFormula::predicate(it->second);
  }
};

int precedence(StlKind k) {
  switch (k) {
    case StlKind::disjunction: return 1;
    case StlKind::conjunction: return 2;
    case StlKind::until: return 3;
    default: return 4;  // prefix operators and atoms
  }
}

void format_number(std::ostream& os, double v) {
  std::ostringstream tmp;
  tmp.precision(17);
  tmp << v;
  os << tmp.str();
}

void print(std::ostream& os, const StlFormula& f, int parent_prec) {
  int prec = precedence(f.kind);
  bool parens = prec < parent_prec;
  if (parens) os << '(';
  switch (f.kind) {
    case StlKind::truth: os << "true"; break;
    case StlKind::predicate: os << f.pred->label; break;
    case StlKind::negation:
      os << '!';
      print(os, *f.children[0], 4);
      break;
    case StlKind::conjunction:
      print(os, *f.children[0], prec);
      os << " & ";
      print(os, *f.children[1], prec + 1);
      break;
    case StlKind::disjunction:
      print(os, *f.children[0], prec);
      os << " | ";
      print(os, *f.children[1], prec + 1);
      break;
    case StlKind::eventually:
    case StlKind::always:
      os << (f.kind == StlKind::eventually ? 'F' : 'G') << '[';
      format_number(os, f.interval.a);
      os << ',';
      format_number(os, f.interval.b);
      os << "] ";
      print(os, *f.children[0], 4);
      break;
    case StlKind::until:
      print(os, *f.children[0], prec + 1);
      os << " U[";
      format_number(os, f.interval.a);
      os << ',';
      format_number(os, f.interval.b);
      os << "] ";
      print(os, *f.children[1], prec);
      break;
  }
  if (parens) os << ')';
}

}  // namespace

FormulaPtr parse_formula(std::string_view text, const RegionTable& regions) {
  return Parser(text, regions).parse();
}

std::string to_string(const StlFormula& f) {
  std::ostringstream os;
  print(os, f, 0);
  return os.str();
}

bool structurally_equal(const StlFormula& lhs, const StlFormula& rhs) {
  if (lhs.kind != rhs.kind) return false;
  if (lhs.kind == StlKind::predicate) {
    return lhs.pred->label == rhs.pred->label && lhs.pred->center == rhs.pred->center &&
           lhs.pred->half_width == rhs.pred->half_width;
  }
  if (lhs.interval.a != rhs.interval.a || lhs.interval.b != rhs.interval.b) return false;
  if (lhs.children.size() != rhs.children.size()) return false;
  for (std::size_t i = 0; i < lhs.children.size(); ++i)
    if (!structurally_equal(*lhs.children[i], *rhs.children[i])) return false;
  return true;
}

double formula_horizon(const StlFormula& f) {
  double h = 0.0;
  for (const auto& c : f.children) h = std::max(h, formula_horizon(*c));
  switch (f.kind) {
    case StlKind::eventually:
    case StlKind::always:
    case StlKind::until: return f.interval.b + h;
    default: return h;
  }
}

double robustness_lipschitz_bound(const StlFormula& f) {
  if (f.kind == StlKind::predicate && !f.pred->is_box())
    fail_invalid("robustness_lipschitz_bound: unsupported predicate class '" + f.pred->label + "'");
  for (const auto& c : f.children) robustness_lipschitz_bound(*c);
  // h(x) = min_i (d_i - |x_i - c_i|) moves by at most |dx_k| when coordinate k
  // moves, and every connective is a pointwise min/max/sign flip.
  return 1.0;
}

std::size_t formula_dimension(const StlFormula& f) {
  std::size_t dim = 0;
  std::vector<const Predicate*> preds;
  collect_predicates(f, preds);
  for (const Predicate* p : preds) {
    if (!p->is_box()) continue;
    if (dim == 0)
      dim = p->dim();
    else if (dim != p->dim())
      fail_invalid("formula mixes predicates of different state dimension");
  }
  return dim;
}

void collect_predicates(const StlFormula& f, std::vector<const Predicate*>& out) {
  if (f.kind == StlKind::predicate) out.push_back(f.pred.get());
  for (const auto& c : f.children) collect_predicates(*c, out);
}

}  // namespace sttl
