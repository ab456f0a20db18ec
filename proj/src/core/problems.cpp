#include "core/problems.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace steffkit {

namespace {

// grammar, one expression per line:
//   expr    = term   { ("+" | "-") term } ;
//   term    = factor { ("*" | "/") factor } ;
//   factor  = base [ "^" factor ] ;              (right associative)
//   base    = number | var | func "(" expr ")" | "(" expr ")" | "-" base' ;
//   func    = "sin" | "cos" | "exp" | "ln" ;
//   var     = "x" digits ;                       (1-based index)
//   number  = digits [ "." digits ] [ ("e"|"E") ["+"|"-"] digits ] ;
// implemented as a Pratt parser with binding powers 10 (+,-), 20 (*,/),
// 25 (unary minus), 30 (^).

struct Token {
  enum Type { Number, Ident, Op, End } type = End;
  std::string text;
  int line = 0;
  int col = 0;
};

class Lexer {
 public:
  Lexer(std::string_view line, int line_no) : s_(line), line_no_(line_no) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    tok_ = Token{};
    tok_.line = line_no_;
    tok_.col = static_cast<int>(pos_) + 1;
    if (pos_ >= s_.size() || s_[pos_] == '#') {
      tok_.type = Token::End;
      return;
    }
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '.') {
        ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
        std::size_t mark = pos_;
        ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        } else {
          pos_ = mark;  // bare 'e' belongs to the next token
        }
      }
      tok_.type = Token::Number;
      tok_.text = std::string(s_.substr(start, pos_ - start));
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      tok_.type = Token::Ident;
      tok_.text = std::string(s_.substr(start, pos_ - start));
      return;
    }
    if (std::string("+-*/^(),").find(c) != std::string::npos) {
      tok_.type = Token::Op;
      tok_.text = std::string(1, c);
      ++pos_;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_no_,
                     static_cast<int>(pos_) + 1);
  }

  std::string_view s_;
  int line_no_;
  std::size_t pos_ = 0;
  Token tok_;
};

ExprPtr make_node(NodeKind k) {
  auto n = std::make_unique<ExprNode>();
  n->kind = k;
  return n;
}

class LineParser {
 public:
  LineParser(std::string_view line, int line_no, std::size_t n)
      : lex_(line, line_no), n_(n) {}

  ExprPtr parse() {
    ExprPtr e = parse_expr(0);
    const Token& t = lex_.peek();
    if (t.type != Token::End)
      throw ParseError("unexpected token '" + t.text + "'", t.line, t.col);
    return e;
  }

 private:
  static int left_bp(const std::string& op) {
    if (op == "+" || op == "-") return 10;
    if (op == "*" || op == "/") return 20;
    if (op == "^") return 30;
    return -1;
  }

  ExprPtr parse_expr(int min_bp) {
    ExprPtr lhs = parse_prefix();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.type != Token::Op) break;
      int bp = left_bp(t.text);
      if (bp < min_bp || bp < 0) break;
      Token op = lex_.take();
      // '^' is right associative, the others left
      int next_min = (op.text == "^") ? bp : bp + 1;
      ExprPtr rhs = parse_expr(next_min);
      NodeKind k = op.text == "+"   ? NodeKind::Add
                   : op.text == "-" ? NodeKind::Sub
                   : op.text == "*" ? NodeKind::Mul
                   : op.text == "/" ? NodeKind::Div
                                    : NodeKind::Pow;
      ExprPtr node = make_node(k);
      node->a = std::move(lhs);
      node->b = std::move(rhs);
      lhs = std::move(node);
    }
    return lhs;
  }

  ExprPtr parse_prefix() {
    Token t = lex_.take();
    switch (t.type) {
      case Token::Number: {
        ExprPtr n = make_node(NodeKind::Constant);
        n->literal = t.text;
        return n;
      }
      case Token::Ident:
        return ident(std::move(t));
      case Token::Op:
        if (t.text == "-") {
          ExprPtr n = make_node(NodeKind::Neg);
          n->a = parse_expr(25);
          return n;
        }
        if (t.text == "(") {
          ExprPtr inner = parse_expr(0);
          expect(")");
          return inner;
        }
        throw ParseError("expected an expression, found '" + t.text + "'", t.line, t.col);
      case Token::End:
        throw ParseError("expected an expression", t.line, t.col);
    }
    throw ParseError("expected an expression", t.line, t.col);
  }

  ExprPtr ident(Token t) {
    static const struct {
      const char* name;
      NodeKind kind;
    } funcs[] = {{"sin", NodeKind::Sin},
                 {"cos", NodeKind::Cos},
                 {"exp", NodeKind::Exp},
                 {"ln", NodeKind::Ln}};
    for (const auto& f : funcs) {
      if (t.text == f.name) {
        expect("(");
        ExprPtr arg = parse_expr(0);
        expect(")");
        ExprPtr n = make_node(f.kind);
        n->a = std::move(arg);
        return n;
      }
    }
    if (t.text.size() >= 2 && t.text[0] == 'x') {
      bool digits = true;
      for (std::size_t i = 1; i < t.text.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t.text[i]))) digits = false;
      if (digits) {
        long idx = std::strtol(t.text.c_str() + 1, nullptr, 10);
        if (idx < 1 || static_cast<std::size_t>(idx) > n_)
          throw UnknownVariable(t.text, t.line, t.col);
        ExprPtr n = make_node(NodeKind::Var);
        n->var_index = static_cast<std::size_t>(idx - 1);
        return n;
      }
    }
    throw ParseError("unknown function or variable '" + t.text + "'", t.line, t.col);
  }

  void expect(const std::string& text) {
    Token t = lex_.take();
    if (t.type != Token::Op || t.text != text)
      throw ParseError("expected '" + text + "', found '" +
                           (t.type == Token::End ? "end of line" : t.text) + "'",
                       t.line, t.col);
  }

  Lexer lex_;
  std::size_t n_;
};

int node_prec(const ExprNode& n) {
  switch (n.kind) {
    case NodeKind::Add:
    case NodeKind::Sub:
      return 10;
    case NodeKind::Mul:
    case NodeKind::Div:
      return 20;
    case NodeKind::Neg:
      return 25;
    case NodeKind::Pow:
      return 30;
    default:
      return 100;
  }
}

void print_node(const ExprNode& n, std::string& out) {
  auto child = [&](const ExprNode& c, bool parens) {
    if (parens) out += '(';
    print_node(c, out);
    if (parens) out += ')';
  };
  int p = node_prec(n);
  switch (n.kind) {
    case NodeKind::Constant:
      out += n.literal;
      return;
    case NodeKind::Var:
      out += 'x';
      out += std::to_string(n.var_index + 1);
      return;
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Div: {
      child(*n.a, node_prec(*n.a) < p);
      out += n.kind == NodeKind::Add   ? '+'
             : n.kind == NodeKind::Sub ? '-'
             : n.kind == NodeKind::Mul ? '*'
                                       : '/';
      child(*n.b, node_prec(*n.b) <= p);
      return;
    }
    case NodeKind::Pow:
      child(*n.a, node_prec(*n.a) <= p);
      out += '^';
      child(*n.b, node_prec(*n.b) < p);
      return;
    case NodeKind::Neg:
      out += '-';
      child(*n.a, node_prec(*n.a) <= 25);
      return;
    case NodeKind::Sin:
    case NodeKind::Cos:
    case NodeKind::Exp:
    case NodeKind::Ln:
      out += n.kind == NodeKind::Sin   ? "sin"
             : n.kind == NodeKind::Cos ? "cos"
             : n.kind == NodeKind::Exp ? "exp"
                                       : "ln";
      out += '(';
      print_node(*n.a, out);
      out += ')';
      return;
  }
}

}  // namespace

std::vector<ExprPtr> parse_expressions(std::string_view source, std::size_t n) {
  if (n == 0) throw InvalidArgument("system dimension must be positive");
  std::vector<ExprPtr> exprs;
  std::size_t start = 0;
  int line_no = 0;
  while (start <= source.size()) {
    std::size_t nl = source.find('\n', start);
    std::string_view line = source.substr(
        start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    ++line_no;
    bool blank = true;
    for (char c : line) {
      if (c == '#') break;
      if (c != ' ' && c != '\t' && c != '\r') {
        blank = false;
        break;
      }
    }
    if (!blank) {
      std::string_view trimmed = line;
      if (!trimmed.empty() && trimmed.back() == '\r') trimmed.remove_suffix(1);
      LineParser p(trimmed, line_no, n);
      exprs.push_back(p.parse());
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  if (exprs.size() != n) throw ArityError(exprs.size(), n);
  return exprs;
}

std::string pretty_print(const ExprNode& node) {
  std::string out;
  print_node(node, out);
  return out;
}

bool ast_equal(const ExprNode& x, const ExprNode& y) {
  if (x.kind != y.kind) return false;
  if (x.kind == NodeKind::Constant) return x.literal == y.literal;
  if (x.kind == NodeKind::Var) return x.var_index == y.var_index;
  if ((x.a == nullptr) != (y.a == nullptr)) return false;
  if ((x.b == nullptr) != (y.b == nullptr)) return false;
  if (x.a && !ast_equal(*x.a, *y.a)) return false;
  if (x.b && !ast_equal(*x.b, *y.b)) return false;
  return true;
}

namespace detail {
bool integral_literal(const std::string& text, long* out) {
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') return false;
  if (!std::isfinite(v) || v != std::nearbyint(v)) return false;
  if (v < -1e9 || v > 1e9) return false;
  *out = static_cast<long>(v);
  return true;
}
}  // namespace detail

}  // namespace steffkit
