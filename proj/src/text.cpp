#include "causal/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace causal {

const Context* ModelDocument::context(const std::string& name_) const {
  for (const auto& [n, c] : contexts)
    if (n == name_) return &c;
  return nullptr;
}

namespace {

// ---------------------------------------------------------------------------
// Lexer shared by every text format
// ---------------------------------------------------------------------------

enum class Tok {
  Ident,
  Int,
  String,
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Colon,
  Semi,
  Comma,
  Assign,      // =
  EqEq,        // ==
  NotEq,       // !=
  Lt,          // <
  Le,          // <=
  ArrowLeft,   // <-
  ArrowRight,  // ->
  Bang,        // !
  Amp,         // &
  AmpAmp,      // &&
  Pipe,        // |
  PipePipe,    // ||
  Plus,
  Minus,
  Star,
  Slash,
  Question,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long long number = 0;
  int line = 1;
  int col = 1;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok kind, std::string text, int l, int c) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.line = l;
    t.col = c;
    out.push_back(std::move(t));
  };
  while (i < src.size()) {
    char ch = src[i];
    if (ch == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++col;
      ++i;
      continue;
    }
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    int l = line, c = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      push(Tok::Ident, src.substr(i, j - i), l, c);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      Token t;
      t.kind = Tok::Int;
      t.text = src.substr(i, j - i);
      t.line = l;
      t.col = c;
      try {
        t.number = std::stoll(t.text);
      } catch (const std::out_of_range&) {
        throw ParseError("integer literal out of range", l, c);
      }
      out.push_back(std::move(t));
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (ch == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
      if (j >= src.size() || src[j] != '"') throw ParseError("unterminated string", l, c);
      push(Tok::String, src.substr(i + 1, j - i - 1), l, c);
      col += static_cast<int>(j - i + 1);
      i = j + 1;
      continue;
    }
    auto two = [&](char second) { return i + 1 < src.size() && src[i + 1] == second; };
    switch (ch) {
      case '{':
        push(Tok::LBrace, "{", l, c);
        break;
      case '}':
        push(Tok::RBrace, "}", l, c);
        break;
      case '(':
        push(Tok::LParen, "(", l, c);
        break;
      case ')':
        push(Tok::RParen, ")", l, c);
        break;
      case '[':
        push(Tok::LBracket, "[", l, c);
        break;
      case ']':
        push(Tok::RBracket, "]", l, c);
        break;
      case ':':
        push(Tok::Colon, ":", l, c);
        break;
      case ';':
        push(Tok::Semi, ";", l, c);
        break;
      case ',':
        push(Tok::Comma, ",", l, c);
        break;
      case '?':
        push(Tok::Question, "?", l, c);
        break;
      case '+':
        push(Tok::Plus, "+", l, c);
        break;
      case '*':
        push(Tok::Star, "*", l, c);
        break;
      case '/':
        push(Tok::Slash, "/", l, c);
        break;
      case '=':
        if (two('=')) {
          push(Tok::EqEq, "==", l, c);
          ++i;
          ++col;
        } else {
          push(Tok::Assign, "=", l, c);
        }
        break;
      case '!':
        if (two('=')) {
          push(Tok::NotEq, "!=", l, c);
          ++i;
          ++col;
        } else {
          push(Tok::Bang, "!", l, c);
        }
        break;
      case '<':
        if (two('-')) {
          push(Tok::ArrowLeft, "<-", l, c);
          ++i;
          ++col;
        } else if (two('=')) {
          push(Tok::Le, "<=", l, c);
          ++i;
          ++col;
        } else {
          push(Tok::Lt, "<", l, c);
        }
        break;
      case '-':
        if (two('>')) {
          push(Tok::ArrowRight, "->", l, c);
          ++i;
          ++col;
        } else {
          push(Tok::Minus, "-", l, c);
        }
        break;
      case '&':
        if (two('&')) {
          push(Tok::AmpAmp, "&&", l, c);
          ++i;
          ++col;
        } else {
          push(Tok::Amp, "&", l, c);
        }
        break;
      case '|':
        if (two('|')) {
          push(Tok::PipePipe, "||", l, c);
          ++i;
          ++col;
        } else {
          push(Tok::Pipe, "|", l, c);
        }
        break;
      default:
        throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
    }
    ++i;
    ++col;
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

// Token cursor with the usual helpers.
struct Cursor {
  std::vector<Token> tokens;
  std::size_t pos = 0;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos + ahead;
    return i < tokens.size() ? tokens[i] : tokens.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (t.kind != Tok::End) ++pos;
    return t;
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_word(const char* word) const {
    return peek().kind == Tok::Ident && peek().text == word;
  }
  bool eat(Tok kind) {
    if (!at(kind)) return false;
    next();
    return true;
  }
  bool eat_word(const char* word) {
    if (!at_word(word)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, peek().line, peek().col);
  }
  Token expect(Tok kind, const char* what) {
    if (!at(kind)) fail(std::string("expected ") + what);
    return next();
  }
  std::string expect_ident(const char* what) { return expect(Tok::Ident, what).text; }
};

long long parse_signed_int(Cursor& cur) {
  bool neg = cur.eat(Tok::Minus);
  Token t = cur.expect(Tok::Int, "integer");
  return neg ? -t.number : t.number;
}

Rational parse_rational(Cursor& cur) {
  bool neg = cur.eat(Tok::Minus);
  Token n = cur.expect(Tok::Int, "number");
  BigInt num(n.text);
  BigInt den(1);
  if (cur.eat(Tok::Slash)) {
    Token d = cur.expect(Tok::Int, "denominator");
    den = BigInt(d.text);
    if (den == 0) throw ParseError("denominator must be nonzero", d.line, d.col);
  }
  if (neg) num = -num;
  return Rational(std::move(num), std::move(den));
}

// A value position: an integer, or a symbolic name from `var`'s range.
Value parse_value_for(Cursor& cur, const Signature& sig, const std::string& var) {
  if (cur.at(Tok::Int) || cur.at(Tok::Minus)) {
    long long v = parse_signed_int(cur);
    return static_cast<Value>(v);
  }
  if (cur.at(Tok::Ident)) {
    Token t = cur.next();
    if (auto v = sig.named_value(var, t.text)) return *v;
    throw ParseError("'" + t.text + "' is not a value name in the range of '" + var + "'", t.line,
                     t.col);
  }
  cur.fail("expected a value");
}

// ---------------------------------------------------------------------------
// Equation expressions
// ---------------------------------------------------------------------------

ExprPtr parse_expr(Cursor& cur);

ExprPtr parse_expr_primary(Cursor& cur) {
  if (cur.eat(Tok::LParen)) {
    ExprPtr e = parse_expr(cur);
    cur.expect(Tok::RParen, "')'");
    return e;
  }
  if (cur.at(Tok::Int)) return Expr::lit(static_cast<Value>(cur.next().number));
  if (cur.at_word("table")) {
    cur.next();
    cur.expect(Tok::LParen, "'(' after table");
    std::vector<std::string> vars;
    vars.push_back(cur.expect_ident("variable name"));
    while (cur.eat(Tok::Comma)) vars.push_back(cur.expect_ident("variable name"));
    cur.expect(Tok::RParen, "')'");
    cur.expect(Tok::LBrace, "'{'");
    std::vector<TableRow> rows;
    std::optional<Value> dflt;
    while (!cur.eat(Tok::RBrace)) {
      if (cur.eat_word("default")) {
        cur.expect(Tok::ArrowRight, "'->'");
        dflt = static_cast<Value>(parse_signed_int(cur));
        cur.expect(Tok::Semi, "';'");
        continue;
      }
      cur.expect(Tok::LParen, "'(' or 'default' or '}'");
      TableRow row;
      row.inputs.push_back(static_cast<Value>(parse_signed_int(cur)));
      while (cur.eat(Tok::Comma)) row.inputs.push_back(static_cast<Value>(parse_signed_int(cur)));
      cur.expect(Tok::RParen, "')'");
      if (row.inputs.size() != vars.size())
        cur.fail("table row arity does not match the variable list");
      cur.expect(Tok::ArrowRight, "'->'");
      row.output = static_cast<Value>(parse_signed_int(cur));
      cur.expect(Tok::Semi, "';'");
      rows.push_back(std::move(row));
    }
    return Expr::table(std::move(vars), std::move(rows), dflt);
  }
  if (cur.at(Tok::Ident)) return Expr::var(cur.next().text);
  cur.fail("expected an expression");
}

ExprPtr parse_expr_unary(Cursor& cur) {
  if (cur.eat(Tok::Bang)) return Expr::unary(ExprOp::Not, parse_expr_unary(cur));
  if (cur.eat(Tok::Minus)) return Expr::unary(ExprOp::Neg, parse_expr_unary(cur));
  return parse_expr_primary(cur);
}

ExprPtr parse_expr_mul(Cursor& cur) {
  ExprPtr e = parse_expr_unary(cur);
  while (cur.eat(Tok::Star)) e = Expr::binary(ExprOp::Mul, e, parse_expr_unary(cur));
  return e;
}

ExprPtr parse_expr_add(Cursor& cur) {
  ExprPtr e = parse_expr_mul(cur);
  for (;;) {
    if (cur.eat(Tok::Plus))
      e = Expr::binary(ExprOp::Add, e, parse_expr_mul(cur));
    else if (cur.eat(Tok::Minus))
      e = Expr::binary(ExprOp::Sub, e, parse_expr_mul(cur));
    else
      return e;
  }
}

ExprPtr parse_expr_cmp(Cursor& cur) {
  ExprPtr e = parse_expr_add(cur);
  for (;;) {
    if (cur.eat(Tok::EqEq))
      e = Expr::binary(ExprOp::Eq, e, parse_expr_add(cur));
    else if (cur.eat(Tok::NotEq))
      e = Expr::binary(ExprOp::Ne, e, parse_expr_add(cur));
    else if (cur.eat(Tok::Le))
      e = Expr::binary(ExprOp::Le, e, parse_expr_add(cur));
    else if (cur.eat(Tok::Lt))
      e = Expr::binary(ExprOp::Lt, e, parse_expr_add(cur));
    else
      return e;
  }
}

ExprPtr parse_expr_and(Cursor& cur) {
  ExprPtr e = parse_expr_cmp(cur);
  while (cur.eat(Tok::AmpAmp)) e = Expr::binary(ExprOp::And, e, parse_expr_cmp(cur));
  return e;
}

ExprPtr parse_expr_or(Cursor& cur) {
  ExprPtr e = parse_expr_and(cur);
  while (cur.eat(Tok::PipePipe)) e = Expr::binary(ExprOp::Or, e, parse_expr_and(cur));
  return e;
}

ExprPtr parse_expr(Cursor& cur) {
  ExprPtr cond = parse_expr_or(cur);
  if (!cur.eat(Tok::Question)) return cond;
  ExprPtr then_e = parse_expr(cur);
  cur.expect(Tok::Colon, "':'");
  ExprPtr else_e = parse_expr(cur);
  return Expr::ite(cond, then_e, else_e);
}

// ---------------------------------------------------------------------------
// Model files
// ---------------------------------------------------------------------------

struct ModelBuilder {
  std::string name;
  bool named = false;
  Signature sig;
  std::vector<Equation> equations;
  std::vector<std::pair<std::string, Context>> contexts;
  AllowabilityPolicy policy;
  WeightTable weights;

  void declare(Cursor& cur, const std::string& var, const Token& at) {
    if (sig.is_declared(var))
      throw ParseError("variable '" + var + "' is already declared", at.line, at.col);
    (void)cur;
  }

  // { v, v, ... } -- all integers, or all symbolic names mapped to 0..n-1.
  void parse_range(Cursor& cur, const std::string& var) {
    cur.expect(Tok::LBrace, "'{'");
    std::vector<Value> values;
    std::vector<std::string> names;
    bool symbolic = false, numeric = false;
    for (;;) {
      if (cur.at(Tok::Int) || cur.at(Tok::Minus)) {
        numeric = true;
        values.push_back(static_cast<Value>(parse_signed_int(cur)));
      } else if (cur.at(Tok::Ident)) {
        symbolic = true;
        names.push_back(cur.next().text);
      } else {
        cur.fail("expected a range value");
      }
      if (cur.eat(Tok::Comma)) continue;
      cur.expect(Tok::RBrace, "'}'");
      break;
    }
    if (symbolic && numeric) cur.fail("a range must be all numbers or all names");
    if (symbolic) {
      std::set<std::string> seen;
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (!seen.insert(names[i]).second) cur.fail("range name '" + names[i] + "' repeats");
        values.push_back(static_cast<Value>(i));
      }
      sig.value_names[var] = names;
    }
    sig.ranges[var] = values;
  }
};

// Parses statements until `stop` (RBrace for inline models, End for files).
ModelBuilder parse_model_statements(Cursor& cur, Tok stop, const std::string& default_name) {
  ModelBuilder b;
  b.name = default_name;
  while (!cur.at(stop)) {
    Token head = cur.peek();
    if (cur.eat_word("model")) {
      if (b.named) throw ParseError("duplicate model statement", head.line, head.col);
      b.name = cur.expect_ident("model name");
      b.named = true;
      cur.expect(Tok::Semi, "';'");
      continue;
    }
    if (cur.eat_word("exogenous")) {
      Token at = cur.peek();
      std::string var = cur.expect_ident("variable name");
      b.declare(cur, var, at);
      b.sig.exogenous.push_back(var);
      cur.expect(Tok::Colon, "':'");
      b.parse_range(cur, var);
      cur.expect(Tok::Semi, "';'");
      continue;
    }
    if (cur.eat_word("endogenous")) {
      Token at = cur.peek();
      std::string var = cur.expect_ident("variable name");
      b.declare(cur, var, at);
      b.sig.endogenous.push_back(var);
      cur.expect(Tok::Colon, "':'");
      b.parse_range(cur, var);
      cur.expect(Tok::Assign, "'='");
      b.equations.push_back({var, parse_expr(cur)});
      cur.expect(Tok::Semi, "';'");
      continue;
    }
    if (cur.eat_word("context")) {
      Token at = cur.peek();
      std::string cname = cur.expect_ident("context name");
      for (const auto& [existing, _] : b.contexts)
        if (existing == cname)
          throw ParseError("duplicate context '" + cname + "'", at.line, at.col);
      cur.expect(Tok::LBrace, "'{'");
      Context ctx;
      while (!cur.eat(Tok::RBrace)) {
        Token vat = cur.peek();
        std::string var = cur.expect_ident("variable name");
        if (!b.sig.is_exogenous(var))
          throw ParseError("context assigns '" + var + "', which is not a declared exogenous variable",
                           vat.line, vat.col);
        cur.expect(Tok::Assign, "'='");
        Value v = parse_value_for(cur, b.sig, var);
        if (!b.sig.in_range(var, v))
          throw ParseError("value is outside the range of '" + var + "'", vat.line, vat.col);
        if (ctx.values.count(var))
          throw ParseError("context assigns '" + var + "' twice", vat.line, vat.col);
        ctx.values[var] = v;
        cur.expect(Tok::Semi, "';'");
      }
      b.contexts.emplace_back(cname, std::move(ctx));
      continue;
    }
    if (cur.eat_word("forbid")) {
      cur.expect(Tok::LBrace, "'{'");
      std::vector<std::pair<std::string, Value>> pattern;
      std::set<std::string> seen;
      for (;;) {
        Token vat = cur.peek();
        std::string var = cur.expect_ident("variable name");
        if (!b.sig.is_endogenous(var))
          throw ParseError("forbidden pattern mentions '" + var +
                               "', which is not a declared endogenous variable",
                           vat.line, vat.col);
        if (!seen.insert(var).second)
          throw ParseError("forbidden pattern mentions '" + var + "' twice", vat.line, vat.col);
        cur.expect(Tok::Assign, "'='");
        Value v = parse_value_for(cur, b.sig, var);
        if (!b.sig.in_range(var, v))
          throw ParseError("value is outside the range of '" + var + "'", vat.line, vat.col);
        pattern.emplace_back(var, v);
        if (cur.eat(Tok::Comma)) continue;
        cur.expect(Tok::RBrace, "'}'");
        break;
      }
      b.policy.forbid.push_back(std::move(pattern));
      continue;
    }
    if (cur.eat_word("weights")) {
      cur.expect(Tok::LBrace, "'{'");
      while (!cur.eat(Tok::RBrace)) {
        Token vat = cur.peek();
        std::string var = cur.expect_ident("variable name");
        if (!b.sig.is_endogenous(var))
          throw ParseError("weight for '" + var + "', which is not a declared endogenous variable",
                           vat.line, vat.col);
        if (b.weights.weights.count(var))
          throw ParseError("duplicate weight for '" + var + "'", vat.line, vat.col);
        cur.expect(Tok::Assign, "'='");
        b.weights.weights[var] = parse_rational(cur);
        cur.expect(Tok::Semi, "';'");
      }
      continue;
    }
    cur.fail("expected a model statement (model, exogenous, endogenous, context, forbid, weights)");
  }
  return b;
}

ModelDocument finish_model(ModelBuilder&& b) {
  ModelDocument doc;
  doc.name = b.name;
  doc.model = CausalModel(std::move(b.sig), std::move(b.equations));
  doc.contexts = std::move(b.contexts);
  doc.policy = std::move(b.policy);
  doc.weights = std::move(b.weights);
  return doc;
}

// ---------------------------------------------------------------------------
// Event and causal formulas
// ---------------------------------------------------------------------------

Value parse_formula_value(Cursor& cur, const Signature* sig, const std::string& var) {
  if (cur.at(Tok::Int) || cur.at(Tok::Minus)) return static_cast<Value>(parse_signed_int(cur));
  if (cur.at(Tok::Ident)) {
    Token t = cur.next();
    if (sig) {
      if (auto v = sig->named_value(var, t.text)) return *v;
      throw ParseError("'" + t.text + "' is not a value name in the range of '" + var + "'",
                       t.line, t.col);
    }
    throw ParseError("symbolic value '" + t.text + "' needs a model to resolve against", t.line,
                     t.col);
  }
  cur.fail("expected a value");
}

EventPtr parse_event_atom_tok(Cursor& cur, const Signature* sig) {
  std::string var = cur.expect_ident("variable name");
  cur.expect(Tok::Assign, "'='");
  Value v = parse_formula_value(cur, sig, var);
  return EventFormula::atom(var, v);
}

EventPtr parse_event_or(Cursor& cur, const Signature* sig);

EventPtr parse_event_not(Cursor& cur, const Signature* sig) {
  if (cur.eat(Tok::Bang)) return EventFormula::negate(parse_event_not(cur, sig));
  if (cur.eat(Tok::LParen)) {
    EventPtr e = parse_event_or(cur, sig);
    cur.expect(Tok::RParen, "')'");
    return e;
  }
  return parse_event_atom_tok(cur, sig);
}

EventPtr parse_event_and(Cursor& cur, const Signature* sig) {
  EventPtr e = parse_event_not(cur, sig);
  while (cur.eat(Tok::Amp)) e = EventFormula::conj(e, parse_event_not(cur, sig));
  return e;
}

EventPtr parse_event_or(Cursor& cur, const Signature* sig) {
  EventPtr e = parse_event_and(cur, sig);
  while (cur.eat(Tok::Pipe)) e = EventFormula::disj(e, parse_event_and(cur, sig));
  return e;
}

Intervention parse_intervention_brackets(Cursor& cur, const Signature* sig) {
  Intervention iv;
  cur.expect(Tok::LBracket, "'['");
  if (!cur.eat(Tok::RBracket)) {
    for (;;) {
      Token at = cur.peek();
      std::string var = cur.expect_ident("variable name");
      cur.expect(Tok::ArrowLeft, "'<-'");
      Value v = parse_formula_value(cur, sig, var);
      for (const auto& [existing, _] : iv.sets)
        if (existing == var)
          throw ParseError("intervention sets '" + var + "' twice", at.line, at.col);
      iv.sets.emplace_back(var, v);
      if (cur.eat(Tok::Comma)) continue;
      cur.expect(Tok::RBracket, "']'");
      break;
    }
  }
  return iv;
}

CausalPtr parse_causal_or(Cursor& cur, const Signature* sig);

CausalPtr parse_causal_not(Cursor& cur, const Signature* sig) {
  if (cur.eat(Tok::Bang)) return CausalFormula::negate(parse_causal_not(cur, sig));
  if (cur.at(Tok::LBracket)) {
    Intervention iv = parse_intervention_brackets(cur, sig);
    EventPtr body;
    if (cur.eat(Tok::LParen)) {
      body = parse_event_or(cur, sig);
      cur.expect(Tok::RParen, "')'");
    } else {
      body = parse_event_atom_tok(cur, sig);
    }
    return CausalFormula::basic(std::move(iv), std::move(body));
  }
  if (cur.eat(Tok::LParen)) {
    CausalPtr f = parse_causal_or(cur, sig);
    cur.expect(Tok::RParen, "')'");
    return f;
  }
  return CausalFormula::basic({}, parse_event_atom_tok(cur, sig));
}

CausalPtr parse_causal_and(Cursor& cur, const Signature* sig) {
  CausalPtr f = parse_causal_not(cur, sig);
  while (cur.eat(Tok::Amp)) f = CausalFormula::conj(f, parse_causal_not(cur, sig));
  return f;
}

CausalPtr parse_causal_or(Cursor& cur, const Signature* sig) {
  CausalPtr f = parse_causal_and(cur, sig);
  while (cur.eat(Tok::Pipe)) f = CausalFormula::disj(f, parse_causal_and(cur, sig));
  return f;
}

// ---------------------------------------------------------------------------
// Scenario files
// ---------------------------------------------------------------------------

ScenarioDocument parse_scenario_tokens(Cursor& cur, const std::filesystem::path& base_dir,
                                       const std::string& default_name) {
  ScenarioDocument doc;
  doc.name = default_name;
  bool named = false, has_action = false, has_phi = false;

  while (!cur.at(Tok::End)) {
    Token head = cur.peek();
    if (cur.eat_word("scenario")) {
      if (named) throw ParseError("duplicate scenario statement", head.line, head.col);
      doc.name = cur.expect_ident("scenario name");
      named = true;
      cur.expect(Tok::Semi, "';'");
      continue;
    }
    if (cur.eat_word("action")) {
      if (has_action) throw ParseError("duplicate action statement", head.line, head.col);
      doc.action.var = cur.expect_ident("variable name");
      cur.expect(Tok::ArrowLeft, "'<-'");
      doc.action.value = static_cast<Value>(parse_signed_int(cur));
      has_action = true;
      cur.expect(Tok::Semi, "';'");
      continue;
    }
    if (cur.eat_word("phi")) {
      if (has_phi) throw ParseError("duplicate phi statement", head.line, head.col);
      doc.phi = parse_event_or(cur, nullptr);
      has_phi = true;
      cur.expect(Tok::Semi, "';'");
      continue;
    }
    if (cur.eat_word("situation")) {
      cur.expect(Tok::LBrace, "'{'");
      SituationSyntax syn;
      bool has_prob = false;
      while (!cur.eat(Tok::RBrace)) {
        Token fat = cur.peek();
        if (cur.eat_word("model")) {
          if (syn.model_file || syn.inline_model)
            throw ParseError("situation already has a model", fat.line, fat.col);
          if (cur.at(Tok::String)) {
            syn.model_file = cur.next().text;
            cur.expect(Tok::Semi, "';'");
          } else {
            cur.expect(Tok::LBrace, "a file string or '{'");
            ModelBuilder mb = parse_model_statements(cur, Tok::RBrace, "inline");
            cur.expect(Tok::RBrace, "'}'");
            cur.eat(Tok::Semi);
            syn.inline_model = finish_model(std::move(mb));
          }
          continue;
        }
        if (cur.eat_word("context")) {
          if (syn.context_name || syn.inline_context)
            throw ParseError("situation already has a context", fat.line, fat.col);
          if (cur.at(Tok::Ident)) {
            syn.context_name = cur.next().text;
            cur.expect(Tok::Semi, "';'");
          } else {
            cur.expect(Tok::LBrace, "a context name or '{'");
            Context ctx;
            while (!cur.eat(Tok::RBrace)) {
              Token vat = cur.peek();
              std::string var = cur.expect_ident("variable name");
              cur.expect(Tok::Assign, "'='");
              long long v = parse_signed_int(cur);
              if (ctx.values.count(var))
                throw ParseError("context assigns '" + var + "' twice", vat.line, vat.col);
              ctx.values[var] = static_cast<Value>(v);
              cur.expect(Tok::Semi, "';'");
            }
            syn.inline_context = std::move(ctx);
            cur.eat(Tok::Semi);
          }
          continue;
        }
        if (cur.eat_word("prob")) {
          if (has_prob) throw ParseError("situation already has a probability", fat.line, fat.col);
          syn.prob = parse_rational(cur);
          has_prob = true;
          cur.expect(Tok::Semi, "';'");
          continue;
        }
        cur.fail("expected a situation field (model, context, prob)");
      }
      if (!syn.model_file && !syn.inline_model)
        throw ParseError("situation has no model", head.line, head.col);
      if (!syn.context_name && !syn.inline_context)
        throw ParseError("situation has no context", head.line, head.col);
      if (!has_prob) throw ParseError("situation has no probability", head.line, head.col);
      doc.syntax.push_back(std::move(syn));
      continue;
    }
    if (cur.eat_word("forbid")) {
      cur.expect(Tok::LBrace, "'{'");
      std::vector<std::pair<std::string, Value>> pattern;
      std::set<std::string> seen;
      for (;;) {
        Token vat = cur.peek();
        std::string var = cur.expect_ident("variable name");
        if (!seen.insert(var).second)
          throw ParseError("forbidden pattern mentions '" + var + "' twice", vat.line, vat.col);
        cur.expect(Tok::Assign, "'='");
        long long v = parse_signed_int(cur);
        pattern.emplace_back(var, static_cast<Value>(v));
        if (cur.eat(Tok::Comma)) continue;
        cur.expect(Tok::RBrace, "'}'");
        break;
      }
      doc.policy.forbid.push_back(std::move(pattern));
      continue;
    }
    if (cur.eat_word("max_changes")) {
      Token t = cur.expect(Tok::Int, "integer");
      doc.max_changes = static_cast<int>(t.number);
      cur.expect(Tok::Semi, "';'");
      continue;
    }
    cur.fail(
        "expected a scenario statement (scenario, action, phi, situation, forbid, max_changes)");
  }
  if (!has_action) throw ParseError("scenario has no action statement", 0, 0);
  if (!has_phi) throw ParseError("scenario has no phi statement", 0, 0);

  // Resolve situations into an epistemic state.
  int index = 0;
  for (const auto& syn : doc.syntax) {
    ++index;
    ModelDocument mdoc;
    if (syn.model_file) {
      std::filesystem::path p = *syn.model_file;
      if (p.is_relative()) p = base_dir / p;
      mdoc = load_model_file(p);
    } else {
      mdoc = *syn.inline_model;
    }
    Situation sit;
    sit.model = mdoc.model;
    sit.policy = mdoc.policy;
    sit.prob = syn.prob;
    if (syn.context_name) {
      const Context* ctx = mdoc.context(*syn.context_name);
      if (!ctx)
        throw ParseError("model '" + mdoc.name + "' has no context named '" + *syn.context_name +
                             "'",
                         0, 0);
      sit.context = *ctx;
      sit.label = *syn.context_name;
    } else {
      sit.context = *syn.inline_context;
      sit.label = "s" + std::to_string(index);
    }
    doc.state.situations.push_back(std::move(sit));
  }
  return doc;
}

// ---------------------------------------------------------------------------
// QBF files
// ---------------------------------------------------------------------------

// `exists a b; forall y; matrix (a | y) & (b | !y);` — three semicolon-ended
// statements; commas between quantified variables are optional.
Qbf2 parse_qbf_tokens(Cursor& cur) {
  Qbf2 q;
  if (!cur.eat_word("exists")) cur.fail("expected 'exists'");
  while (cur.at(Tok::Ident)) {
    q.exists_vars.push_back(cur.next().text);
    cur.eat(Tok::Comma);
  }
  cur.expect(Tok::Semi, "';'");
  if (!cur.eat_word("forall")) cur.fail("expected 'forall'");
  while (cur.at(Tok::Ident)) {
    q.forall_vars.push_back(cur.next().text);
    cur.eat(Tok::Comma);
  }
  cur.expect(Tok::Semi, "';'");
  if (!cur.eat_word("matrix")) cur.fail("expected 'matrix'");

  // Propositional matrix: | over & over ! over atoms/parens.
  std::set<std::string> quantified(q.exists_vars.begin(), q.exists_vars.end());
  quantified.insert(q.forall_vars.begin(), q.forall_vars.end());

  std::function<PropPtr(void)> prop_or, prop_and, prop_not;
  prop_not = [&]() -> PropPtr {
    if (cur.eat(Tok::Bang)) return Prop::negate(prop_not());
    if (cur.eat(Tok::LParen)) {
      PropPtr p = prop_or();
      cur.expect(Tok::RParen, "')'");
      return p;
    }
    Token t = cur.peek();
    std::string name = cur.expect_ident("variable name");
    if (!quantified.count(name))
      throw ParseError("matrix variable '" + name + "' is not quantified", t.line, t.col);
    return Prop::var(name);
  };
  prop_and = [&]() -> PropPtr {
    PropPtr p = prop_not();
    while (cur.eat(Tok::Amp)) p = Prop::conj(p, prop_not());
    return p;
  };
  prop_or = [&]() -> PropPtr {
    PropPtr p = prop_and();
    while (cur.eat(Tok::Pipe)) p = Prop::disj(p, prop_and());
    return p;
  };
  q.matrix = prop_or();
  cur.expect(Tok::Semi, "';'");
  if (!cur.at(Tok::End)) cur.fail("unexpected trailing input after the matrix");
  return q;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file '" + path.string() + "'", 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Printers
// ---------------------------------------------------------------------------

int expr_prec(const Expr& e) {
  switch (e.op) {
    case ExprOp::Ite:
      return 0;
    case ExprOp::Or:
      return 1;
    case ExprOp::And:
      return 2;
    case ExprOp::Eq:
    case ExprOp::Ne:
    case ExprOp::Lt:
    case ExprOp::Le:
      return 3;
    case ExprOp::Add:
    case ExprOp::Sub:
      return 4;
    case ExprOp::Mul:
      return 5;
    case ExprOp::Not:
    case ExprOp::Neg:
      return 6;
    default:
      return 7;
  }
}

void print_expr_at(std::ostream& os, const Expr& e, int parent_prec) {
  int prec = expr_prec(e);
  bool parens = prec < parent_prec;
  if (parens) os << "(";
  switch (e.op) {
    case ExprOp::Literal:
      os << e.literal;
      break;
    case ExprOp::Var:
      os << e.name;
      break;
    case ExprOp::Not:
      os << "!";
      print_expr_at(os, *e.kids[0], prec + 1);
      break;
    case ExprOp::Neg:
      os << "-";
      print_expr_at(os, *e.kids[0], prec + 1);
      break;
    case ExprOp::Add:
    case ExprOp::Sub: {
      const char* sym = e.op == ExprOp::Add ? " + " : " - ";
      print_expr_at(os, *e.kids[0], prec);
      os << sym;
      print_expr_at(os, *e.kids[1], prec + 1);
      break;
    }
    case ExprOp::Mul:
      print_expr_at(os, *e.kids[0], prec);
      os << " * ";
      print_expr_at(os, *e.kids[1], prec + 1);
      break;
    case ExprOp::Eq:
    case ExprOp::Ne:
    case ExprOp::Lt:
    case ExprOp::Le: {
      const char* sym = e.op == ExprOp::Eq   ? " == "
                        : e.op == ExprOp::Ne ? " != "
                        : e.op == ExprOp::Lt ? " < "
                                              : " <= ";
      print_expr_at(os, *e.kids[0], prec + 1);
      os << sym;
      print_expr_at(os, *e.kids[1], prec + 1);
      break;
    }
    case ExprOp::And:
      print_expr_at(os, *e.kids[0], prec);
      os << " && ";
      print_expr_at(os, *e.kids[1], prec + 1);
      break;
    case ExprOp::Or:
      print_expr_at(os, *e.kids[0], prec);
      os << " || ";
      print_expr_at(os, *e.kids[1], prec + 1);
      break;
    case ExprOp::Ite:
      print_expr_at(os, *e.kids[0], prec + 1);
      os << " ? ";
      print_expr_at(os, *e.kids[1], 0);
      os << " : ";
      print_expr_at(os, *e.kids[2], 0);
      break;
    case ExprOp::Table: {
      os << "table(";
      for (std::size_t i = 0; i < e.table_vars.size(); ++i) {
        if (i) os << ", ";
        os << e.table_vars[i];
      }
      os << ") { ";
      for (const auto& row : e.table_rows) {
        os << "(";
        for (std::size_t i = 0; i < row.inputs.size(); ++i) {
          if (i) os << ", ";
          os << row.inputs[i];
        }
        os << ") -> " << row.output << "; ";
      }
      if (e.table_default) os << "default -> " << *e.table_default << "; ";
      os << "}";
      break;
    }
  }
  if (parens) os << ")";
}

void print_range(std::ostream& os, const Signature& sig, const std::string& var) {
  os << "{";
  const auto* range = sig.range(var);
  if (!range) {
    os << "}";
    return;
  }
  auto names = sig.value_names.find(var);
  for (std::size_t i = 0; i < range->size(); ++i) {
    if (i) os << ", ";
    if (names != sig.value_names.end() && i < names->second.size())
      os << names->second[i];
    else
      os << (*range)[i];
  }
  os << "}";
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

ModelDocument parse_model_text(const std::string& text, const std::string& default_name) {
  Cursor cur{lex(text)};
  ModelBuilder b = parse_model_statements(cur, Tok::End, default_name);
  return finish_model(std::move(b));
}

ModelDocument load_model_file(const std::filesystem::path& path) {
  return parse_model_text(read_file(path), path.stem().string());
}

ScenarioDocument parse_scenario_text(const std::string& text,
                                     const std::filesystem::path& base_dir,
                                     const std::string& default_name) {
  Cursor cur{lex(text)};
  return parse_scenario_tokens(cur, base_dir, default_name);
}

ScenarioDocument load_scenario_file(const std::filesystem::path& path) {
  return parse_scenario_text(read_file(path), path.parent_path(), path.stem().string());
}

Qbf2 parse_qbf_text(const std::string& text) {
  Cursor cur{lex(text)};
  return parse_qbf_tokens(cur);
}

Qbf2 load_qbf_file(const std::filesystem::path& path) { return parse_qbf_text(read_file(path)); }

EventPtr parse_event_text(const std::string& text, const Signature* sig) {
  Cursor cur{lex(text)};
  EventPtr e = parse_event_or(cur, sig);
  if (!cur.at(Tok::End)) cur.fail("unexpected trailing input after the formula");
  return e;
}

CausalPtr parse_causal_text(const std::string& text, const Signature* sig) {
  Cursor cur{lex(text)};
  CausalPtr f = parse_causal_or(cur, sig);
  if (!cur.at(Tok::End)) cur.fail("unexpected trailing input after the formula");
  return f;
}

Event parse_event_atom(const std::string& text, const Signature* sig) {
  Cursor cur{lex(text)};
  std::string var = cur.expect_ident("variable name");
  cur.expect(Tok::Assign, "'='");
  Value v = parse_formula_value(cur, sig, var);
  if (!cur.at(Tok::End)) cur.fail("unexpected trailing input after the atom");
  return Event{var, v};
}

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  print_expr_at(os, e, 0);
  return os.str();
}

std::string print_model(const ModelDocument& doc) {
  std::ostringstream os;
  os << "model " << doc.name << ";\n";
  const Signature& sig = doc.model.signature();
  if (!sig.exogenous.empty()) os << "\n";
  for (const auto& var : sig.exogenous) {
    os << "exogenous " << var << " : ";
    print_range(os, sig, var);
    os << ";\n";
  }
  if (!sig.endogenous.empty()) os << "\n";
  for (const auto& var : sig.endogenous) {
    os << "endogenous " << var << " : ";
    print_range(os, sig, var);
    os << " = ";
    const Equation* eq = doc.model.equation_for(var);
    if (eq && eq->body)
      print_expr_at(os, *eq->body, 0);
    else
      os << "0";
    os << ";\n";
  }
  for (const auto& [cname, ctx] : doc.contexts) {
    os << "\ncontext " << cname << " {\n";
    for (const auto& var : sig.exogenous) {
      auto it = ctx.values.find(var);
      if (it == ctx.values.end()) continue;
      os << "  " << var << " = " << sig.value_text(var, it->second) << ";\n";
    }
    os << "}\n";
  }
  for (const auto& pattern : doc.policy.forbid) {
    os << "\nforbid { ";
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      if (i) os << ", ";
      os << pattern[i].first << " = " << sig.value_text(pattern[i].first, pattern[i].second);
    }
    os << " }\n";
  }
  if (!doc.weights.weights.empty()) {
    os << "\nweights {\n";
    for (const auto& var : sig.endogenous) {
      auto it = doc.weights.weights.find(var);
      if (it == doc.weights.weights.end()) continue;
      os << "  " << var << " = " << it->second.str() << ";\n";
    }
    os << "}\n";
  }
  return os.str();
}

std::string print_scenario(const ScenarioDocument& doc) {
  std::ostringstream os;
  os << "scenario " << doc.name << ";\n";
  os << "action " << doc.action.var << " <- " << doc.action.value << ";\n";
  os << "phi " << print_event(*doc.phi) << ";\n";
  for (const auto& syn : doc.syntax) {
    os << "\nsituation {\n";
    if (syn.model_file) {
      os << "  model \"" << *syn.model_file << "\";\n";
    } else if (syn.inline_model) {
      std::istringstream body(print_model(*syn.inline_model));
      os << "  model {\n";
      std::string ln;
      while (std::getline(body, ln)) {
        if (ln.empty())
          os << "\n";
        else
          os << "    " << ln << "\n";
      }
      os << "  }\n";
    }
    if (syn.context_name) {
      os << "  context " << *syn.context_name << ";\n";
    } else if (syn.inline_context) {
      os << "  context {\n";
      for (const auto& [var, v] : syn.inline_context->values)
        os << "    " << var << " = " << v << ";\n";
      os << "  }\n";
    }
    os << "  prob " << syn.prob.str() << ";\n";
    os << "}\n";
  }
  for (const auto& pattern : doc.policy.forbid) {
    os << "\nforbid { ";
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      if (i) os << ", ";
      os << pattern[i].first << " = " << pattern[i].second;
    }
    os << " }\n";
  }
  if (doc.max_changes) os << "\nmax_changes " << *doc.max_changes << ";\n";
  return os.str();
}

namespace {

int prop_prec(const Prop& p) {
  switch (p.op) {
    case PropOp::Or:
      return 1;
    case PropOp::And:
      return 2;
    case PropOp::Not:
      return 3;
    default:
      return 4;
  }
}

void print_prop_at(std::ostream& os, const Prop& p, int parent_prec) {
  int prec = prop_prec(p);
  bool parens = prec < parent_prec;
  if (parens) os << "(";
  switch (p.op) {
    case PropOp::Var:
      os << p.name;
      break;
    case PropOp::Not:
      os << "!";
      print_prop_at(os, *p.kids[0], prec + 1);
      break;
    case PropOp::And:
      print_prop_at(os, *p.kids[0], prec);
      os << " & ";
      print_prop_at(os, *p.kids[1], prec + 1);
      break;
    case PropOp::Or:
      print_prop_at(os, *p.kids[0], prec);
      os << " | ";
      print_prop_at(os, *p.kids[1], prec + 1);
      break;
  }
  if (parens) os << ")";
}

void print_event_at(std::ostream& os, const EventFormula& e, int parent_prec,
                    const Signature* sig) {
  // Precedence: | lowest (1), & (2), ! (3), atom (4).
  int prec = e.op == EventOp::Or ? 1 : e.op == EventOp::And ? 2 : e.op == EventOp::Not ? 3 : 4;
  bool parens = prec < parent_prec;
  if (parens) os << "(";
  switch (e.op) {
    case EventOp::Atom:
      os << e.var << "=";
      if (sig)
        os << sig->value_text(e.var, e.value);
      else
        os << e.value;
      break;
    case EventOp::Not:
      // A negated child always prints parenthesized: !(BS=1).
      os << "!(";
      print_event_at(os, *e.kids[0], 0, sig);
      os << ")";
      break;
    case EventOp::And:
      print_event_at(os, *e.kids[0], prec, sig);
      os << " & ";
      print_event_at(os, *e.kids[1], prec + 1, sig);
      break;
    case EventOp::Or:
      print_event_at(os, *e.kids[0], prec, sig);
      os << " | ";
      print_event_at(os, *e.kids[1], prec + 1, sig);
      break;
  }
  if (parens) os << ")";
}

}  // namespace

std::string print_qbf(const Qbf2& qbf) {
  std::ostringstream os;
  os << "exists";
  for (const auto& v : qbf.exists_vars) os << " " << v;
  os << ";\nforall";
  for (const auto& v : qbf.forall_vars) os << " " << v;
  os << ";\nmatrix ";
  if (qbf.matrix) print_prop_at(os, *qbf.matrix, 0);
  os << ";\n";
  return os.str();
}

std::string print_prop(const Prop& p) {
  std::ostringstream os;
  print_prop_at(os, p, 0);
  return os.str();
}

std::string print_event(const EventFormula& f, const Signature* sig) {
  std::ostringstream os;
  print_event_at(os, f, 0, sig);
  return os.str();
}

std::string print_causal(const CausalFormula& f, const Signature* sig) {
  std::ostringstream os;
  std::function<void(const CausalFormula&, int)> go = [&](const CausalFormula& node,
                                                          int parent_prec) {
    int prec = node.op == CausalOp::Or    ? 1
               : node.op == CausalOp::And ? 2
               : node.op == CausalOp::Not ? 3
                                          : 4;
    bool parens = prec < parent_prec;
    if (parens) os << "(";
    switch (node.op) {
      case CausalOp::Basic:
        if (!node.prefix.sets.empty()) {
          os << "[";
          for (std::size_t i = 0; i < node.prefix.sets.size(); ++i) {
            if (i) os << ", ";
            os << node.prefix.sets[i].first << " <- ";
            if (sig)
              os << sig->value_text(node.prefix.sets[i].first, node.prefix.sets[i].second);
            else
              os << node.prefix.sets[i].second;
          }
          os << "](";
          print_event_at(os, *node.body, 0, sig);
          os << ")";
        } else {
          // A bare atom stands alone; anything structured gets parentheses so
          // the causal and event connectives cannot be misread.
          if (node.body->op == EventOp::Atom) {
            print_event_at(os, *node.body, 0, sig);
          } else {
            os << "(";
            print_event_at(os, *node.body, 0, sig);
            os << ")";
          }
        }
        break;
      case CausalOp::Not:
        os << "!(";
        go(*node.kids[0], 0);
        os << ")";
        break;
      case CausalOp::And:
        go(*node.kids[0], prec);
        os << " & ";
        go(*node.kids[1], prec + 1);
        break;
      case CausalOp::Or:
        go(*node.kids[0], prec);
        os << " | ";
        go(*node.kids[1], prec + 1);
        break;
    }
    if (parens) os << ")";
  };
  go(f, 0);
  return os.str();
}

}  // namespace causal