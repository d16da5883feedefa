#include "dicrit/parser.hpp"

#include <cctype>

namespace dicrit {

namespace {

enum class Tok { Num, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Lexer {
  const std::string& text;
  size_t pos = 0;
  Tok tok = Tok::End;
  Integer num;
  std::string ident;
  size_t tok_pos = 0;

  explicit Lexer(const std::string& t) : text(t) { next(); }

  void next() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    tok_pos = pos;
    if (pos >= text.size()) {
      tok = Tok::End;
      return;
    }
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      num = Integer(text.substr(start, pos - start));
      tok = Tok::Num;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        ++pos;
      ident = text.substr(start, pos - start);
      tok = Tok::Ident;
      return;
    }
    ++pos;
    switch (c) {
      case '+': tok = Tok::Plus; return;
      case '-': tok = Tok::Minus; return;
      case '*': tok = Tok::Star; return;
      case '/': tok = Tok::Slash; return;
      case '^': tok = Tok::Caret; return;
      case '(': tok = Tok::LParen; return;
      case ')': tok = Tok::RParen; return;
      default: throw ParseError(std::string("unexpected character '") + c + "'", tok_pos);
    }
  }
};

struct Value {
  DiffForm num;        // degree 0..3
  TruncSeries den;     // denominator series (unit or monomial*unit)

  bool is_series() const { return num.degree() == 0; }
};

struct Parser {
  Lexer lex;
  const VarSet& vars;
  int order;

  Parser(const std::string& text, const VarSet& v, int n) : lex(text), vars(v), order(n) {}

  TruncSeries one() const { return TruncSeries::constant(vars, Scalar(1), kInfOrder); }

  Value series_value(TruncSeries s) {
    return Value{DiffForm::from_series(std::move(s)), one()};
  }

  Value parse_expr() {
    Value v = parse_term();
    while (lex.tok == Tok::Plus || lex.tok == Tok::Minus) {
      bool minus = lex.tok == Tok::Minus;
      lex.next();
      Value w = parse_term();
      v = add(v, minus ? negate(w) : w);
    }
    return v;
  }

  Value parse_term() {
    Value v = parse_factor();
    while (lex.tok == Tok::Star || lex.tok == Tok::Slash) {
      bool div = lex.tok == Tok::Slash;
      lex.next();
      Value w = parse_factor();
      v = div ? divide(v, w) : multiply(v, w);
    }
    return v;
  }

  Value parse_factor() {
    if (lex.tok == Tok::Minus) {
      lex.next();
      return negate(parse_factor());
    }
    Value v = parse_atom();
    if (lex.tok == Tok::Caret) {
      size_t p = lex.tok_pos;
      lex.next();
      long e = parse_int_exponent();
      return power(v, e, p);
    }
    return v;
  }

  long parse_int_exponent() {
    bool neg = false;
    if (lex.tok == Tok::Minus) {
      neg = true;
      lex.next();
    }
    if (lex.tok != Tok::Num) throw ParseError("expected integer exponent", lex.tok_pos);
    long e = lex.num.convert_to<long>();
    lex.next();
    return neg ? -e : e;
  }

  Value parse_atom() {
    size_t p = lex.tok_pos;
    switch (lex.tok) {
      case Tok::Num: {
        Scalar c((Rational(lex.num)));
        lex.next();
        return series_value(TruncSeries::constant(vars, c, kInfOrder));
      }
      case Tok::LParen: {
        lex.next();
        Value v = parse_expr();
        if (lex.tok != Tok::RParen) throw ParseError("expected ')'", lex.tok_pos);
        lex.next();
        return v;
      }
      case Tok::Ident: {
        std::string id = lex.ident;
        lex.next();
        if (id == "d" && lex.tok == Tok::LParen) {
          lex.next();
          Value v = parse_expr();
          if (lex.tok != Tok::RParen) throw ParseError("expected ')'", lex.tok_pos);
          lex.next();
          if (!v.den.is_constant())
            throw ParseError("d(...) of a quotient is not supported", p);
          Scalar c = v.den.constant_term();
          return Value{exterior_derivative(v.num).scaled(Scalar(1) / c), one()};
        }
        int vi = vars.index(id);
        if (vi >= 0)
          return series_value(TruncSeries::variable(vars, vi, kInfOrder));
        if (id == "i")
          return series_value(TruncSeries::constant(vars, Scalar::imaginary(), kInfOrder));
        if (id.size() >= 2 && id[0] == 'd') {
          int dv = vars.index(id.substr(1));
          if (dv >= 0) return Value{DiffForm::differential(vars, dv, kInfOrder), one()};
        }
        throw ParseError("unknown variable '" + id + "'", p);
      }
      default:
        throw ParseError("unexpected token", p);
    }
  }

  Value negate(Value v) {
    v.num = -v.num;
    return v;
  }

  Value add(const Value& a, const Value& b) {
    if (a.num.degree() != b.num.degree()) {
      if (a.num.is_zero()) return b;
      if (b.num.is_zero()) return a;
      throw ParseError("cannot add forms of different degree", lex.tok_pos);
    }
    if (a.den == b.den) return Value{a.num + b.num, a.den};
    return Value{a.num.multiplied(b.den) + b.num.multiplied(a.den), a.den * b.den};
  }

  Value multiply(const Value& a, const Value& b) {
    DiffForm n = (a.num.degree() == 0)   ? b.num.multiplied(a.num.coeff(0))
                 : (b.num.degree() == 0) ? a.num.multiplied(b.num.coeff(0))
                                         : wedge(a.num, b.num);
    return Value{std::move(n), a.den * b.den};
  }

  Value divide(const Value& a, const Value& b) {
    if (!b.is_series()) throw ParseError("division by a differential form", lex.tok_pos);
    if (b.num.coeff(0).is_zero()) throw ParseError("division by zero", lex.tok_pos);
    return Value{a.num.multiplied(b.den), a.den * b.num.coeff(0)};
  }

  Value power(const Value& v, long e, size_t pos) {
    if (!v.is_series()) {
      if (e == 1) return v;
      throw ParseError("power of a differential form", pos);
    }
    if (e >= 0)
      return Value{DiffForm::from_series(v.num.coeff(0).pow(static_cast<int>(e))),
                   v.den.pow(static_cast<int>(e))};
    return Value{DiffForm::from_series(v.den.pow(static_cast<int>(-e))),
                 v.num.coeff(0).pow(static_cast<int>(-e))};
  }
};

}  // namespace

ParsedValue parse_value(const std::string& text, const VarSet& vars, int order) {
  Parser p(text, vars, order);
  Value v = p.parse_expr();
  if (p.lex.tok != Tok::End) throw ParseError("trailing input", p.lex.tok_pos);
  // Fold a unit denominator into the numerator.
  if (v.den.is_constant()) {
    Scalar c = v.den.constant_term();
    return ParsedValue{v.num.scaled(Scalar(1) / c).truncated(order),
                       TruncSeries::constant(vars, Scalar(1), kInfOrder)};
  }
  if (v.den.is_unit()) {
    TruncSeries inv = v.den.inverse(order);
    return ParsedValue{v.num.multiplied(inv).truncated(order),
                       TruncSeries::constant(vars, Scalar(1), kInfOrder)};
  }
  return ParsedValue{v.num.truncated(order), v.den.truncated(order)};
}

TruncSeries parse_series(const std::string& text, const VarSet& vars, int order) {
  ParsedValue v = parse_value(text, vars, order);
  if (v.num.degree() != 0) throw Error("expected a series, found a differential form");
  if (!v.den.is_constant() || !v.den.constant_term().is_one())
    throw Error("expression has a non-unit denominator");
  return v.num.coeff(0);
}

DiffForm parse_form(const std::string& text, const VarSet& vars, int order) {
  ParsedValue v = parse_value(text, vars, order);
  if (!v.den.is_constant() || !v.den.constant_term().is_one())
    throw Error("expression has a non-unit denominator");
  return v.num;
}

}  // namespace dicrit
