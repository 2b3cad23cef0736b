#include <cctype>
#include <cstdlib>
#include <optional>
#include <string>

#include "json.hpp"

#include "varmult/errors.hpp"
#include "varmult/symexpr.hpp"

namespace varmult {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr acc = term();
    for (;;) {
      if (accept('+')) {
        acc = acc + term();
      } else if (accept('-')) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  Expr term() {
    Expr acc = factor();
    for (;;) {
      if (accept('*')) {
        acc = acc * factor();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Expr d = factor();
        if (d.is_zero()) throw ParseError("division by zero", at);
        acc = acc / d;
      } else {
        return acc;
      }
    }
  }

  Expr factor() {
    if (accept('-')) return -factor();
    Expr base = atom();
    if (accept('^')) return pow(base, exponent());
    return base;
  }

  // Integer literal, optionally signed or parenthesized.
  int exponent() {
    skip_space();
    std::size_t start = pos_;
    bool paren = accept('(');
    bool negative = accept('-');
    skip_space();
    std::size_t digits_at = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits_at) {
      pos_ = start;
      fail("exponent must be an integer literal");
    }
    if (pos_ < text_.size() && text_[pos_] == '.') fail("exponent must be an integer literal");
    long value = std::strtol(std::string(text_.substr(digits_at, pos_ - digits_at)).c_str(), nullptr, 10);
    if (value > 1000) {
      pos_ = digits_at;
      fail("exponent too large");
    }
    if (paren) expect(')');
    return static_cast<int>(negative ? -value : value);
  }

  Expr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Expr number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    try {
      return Expr(Rational::parse(text_.substr(start, pos_ - start)));
    } catch (const std::exception& e) {
      throw ParseError(std::string("invalid number: ") + e.what(), start);
    }
  }

  std::string_view word() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  // Returns a variable if the word names one; leaves pos_ past the word.
  std::optional<Var> variable(std::string_view w, std::size_t at) const {
    if (w == "x") return Var::x();
    if (w.size() >= 2 && w[0] == 'p') {
      for (char d : w.substr(1)) {
        if (!std::isdigit(static_cast<unsigned char>(d))) return std::nullopt;
      }
      if (w.size() > 4) throw ParseError("jet index out of range", at);
      int k = std::atoi(std::string(w.substr(1)).c_str());
      if (k > kMaxJetIndex) throw ParseError("jet index out of range", at);
      return Var::jet(k);
    }
    return std::nullopt;
  }

  Expr identifier() {
    std::size_t start = pos_;
    std::string_view w = word();
    if (auto v = variable(w, start)) return Expr::var(*v);
    if (w == "exp" || w == "log" || w == "sin" || w == "cos") {
      expect('(');
      Expr arg = expr();
      expect(')');
      if (w == "exp") return exp(arg);
      if (w == "log") return log(arg);
      if (w == "sin") return sin(arg);
      return cos(arg);
    }
    if (w == "Int") {
      expect('(');
      Expr integrand = expr();
      expect(',');
      skip_space();
      std::size_t at = pos_;
      auto v = variable(word(), at);
      if (!v) throw ParseError("expected integration variable", at);
      expect(')');
      return antideriv(integrand, *v, 1);
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(w) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// --- plain rendering ---

bool negative_term(const Expr& e) {
  if (e.kind() == Kind::Const) return e.value().is_negative();
  if (e.kind() == Kind::Prod && e.arg(0).kind() == Kind::Const) return e.arg(0).value().is_negative();
  return false;
}

std::string plain(const Expr& e);

std::string wrapped(const Expr& e) {
  Kind k = e.kind();
  bool atomic = k == Kind::X || k == Kind::Jet || k == Kind::Exp || k == Kind::Log || k == Kind::Sin ||
                k == Kind::Cos || k == Kind::Int ||
                (k == Kind::Const && e.value().is_integer() && !e.value().is_negative());
  return atomic ? plain(e) : "(" + plain(e) + ")";
}

std::string product_body(const Expr& e, bool drop_sign) {
  std::string out;
  bool first = true;
  for (const auto& f : e.args()) {
    std::string piece;
    if (f.kind() == Kind::Const) {
      Rational c = drop_sign ? -f.value() : f.value();
      if (c.is_one()) continue;
      if (c == Rational(-1)) {
        out += "-";
        continue;
      }
      piece = c.to_string();
    } else if (f.kind() == Kind::Sum || f.kind() == Kind::Prod) {
      piece = "(" + plain(f) + ")";
    } else {
      piece = plain(f);
    }
    if (!first && !out.empty() && out.back() != '-') out += "*";
    out += piece;
    first = false;
  }
  return out;
}

std::string plain(const Expr& e) {
  switch (e.kind()) {
    case Kind::Const:
      return e.value().to_string();
    case Kind::X:
      return "x";
    case Kind::Jet:
      return "p" + std::to_string(e.jet_index());
    case Kind::Pow:
      return wrapped(e.arg()) + "^" + std::to_string(e.exponent());
    case Kind::Prod:
      return product_body(e, false);
    case Kind::Sum: {
      std::string out;
      bool first = true;
      for (const auto& t : e.args()) {
        if (first) {
          out += plain(t);
        } else if (negative_term(t)) {
          out += " - ";
          out += t.kind() == Kind::Const ? (-t.value()).to_string() : product_body(t, true);
        } else {
          out += " + ";
          out += t.kind() == Kind::Sum ? "(" + plain(t) + ")" : plain(t);
        }
        first = false;
      }
      return out;
    }
    case Kind::Exp:
      return "exp(" + plain(e.arg()) + ")";
    case Kind::Log:
      return "log(" + plain(e.arg()) + ")";
    case Kind::Sin:
      return "sin(" + plain(e.arg()) + ")";
    case Kind::Cos:
      return "cos(" + plain(e.arg()) + ")";
    case Kind::Int:
      return "Int(" + plain(e.arg()) + ", " + e.int_var().name() + ")";
  }
  return {};
}

nlohmann::json var_json(Var v) {
  if (v.is_x()) return {{"var", "x"}};
  return {{"jet", v.jet_index()}};
}

nlohmann::json to_json(const Expr& e) {
  auto node = [](const char* op, nlohmann::json args) {
    return nlohmann::json{{"op", op}, {"args", std::move(args)}};
  };
  auto children = [&](const Expr& x) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& c : x.args()) a.push_back(to_json(c));
    return a;
  };
  switch (e.kind()) {
    case Kind::Const:
      return {{"const", e.value().to_string()}};
    case Kind::X:
      return {{"var", "x"}};
    case Kind::Jet:
      return {{"jet", e.jet_index()}};
    case Kind::Pow:
      return node("pow", {to_json(e.arg()), {{"const", std::to_string(e.exponent())}}});
    case Kind::Prod:
      return node("prod", children(e));
    case Kind::Sum:
      return node("sum", children(e));
    case Kind::Exp:
      return node("exp", children(e));
    case Kind::Log:
      return node("log", children(e));
    case Kind::Sin:
      return node("sin", children(e));
    case Kind::Cos:
      return node("cos", children(e));
    case Kind::Int:
      return node("int", {to_json(e.arg()), var_json(e.int_var())});
  }
  return {};
}

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

std::string render(const Expr& e, RenderFormat format) {
  if (format == RenderFormat::Json) return to_json(e).dump();
  return plain(e);
}

}  // namespace varmult
