#include "hcspb/parser.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>

#include "hcspb/eval.hpp"
#include "hcspb/syntax.hpp"

namespace hcspb {

namespace {

enum class Tok {
  ident,
  number,
  kw_skip,
  kw_wait,
  kw_true,
  kw_false,
  kw_exists,
  kw_forall,
  kw_len,
  kw_ceil,
  kw_ceil_le,
  kw_const,
  kw_channel,
  kw_var,
  kw_proc,
  kw_spec,
  kw_def,
  kw_in,
  kw_eps,
  lparen,
  rparen,
  lbrace,
  rbrace,
  lbracket,
  rbracket,
  comma,
  semi,
  dot,
  at,
  hash,
  bang,
  question,
  amp,
  pipe,
  caret,
  star,
  plus,
  minus,
  slash,
  lt,
  gt,
  eq,
  assign,   // :=
  le,       // <=
  ge,       // >=
  implies,  // =>
  arrow,    // ->
  interrupt_arrow,  // |>
  parallel,         // ||
  end
};

struct Token {
  Tok kind;
  std::string text;
  double number = 0;
  SourcePos pos;
};

const std::map<std::string, Tok>& keywords() {
  static const std::map<std::string, Tok> kw = {
      {"skip", Tok::kw_skip},     {"wait", Tok::kw_wait},   {"true", Tok::kw_true},
      {"false", Tok::kw_false},   {"exists", Tok::kw_exists}, {"forall", Tok::kw_forall},
      {"len", Tok::kw_len},       {"ceil", Tok::kw_ceil},   {"ceil_le", Tok::kw_ceil_le},
      {"const", Tok::kw_const},   {"channel", Tok::kw_channel}, {"var", Tok::kw_var},
      {"proc", Tok::kw_proc},     {"spec", Tok::kw_spec},   {"def", Tok::kw_def},
      {"in", Tok::kw_in},         {"eps", Tok::kw_eps},
  };
  return kw;
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1, col = 1;
  auto pos = [&]() { return SourcePos{line, col}; };
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    SourcePos p = pos();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      std::string word = text.substr(i, j - i);
      advance(j - i);
      auto it = keywords().find(word);
      if (it != keywords().end()) out.push_back({it->second, word, 0, p});
      else out.push_back({Tok::ident, word, 0, p});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && text[j] == '.') {
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          ++k;
          while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
          j = k;
        }
      }
      std::string word = text.substr(i, j - i);
      advance(j - i);
      out.push_back({Tok::number, word, std::strtod(word.c_str(), nullptr), p});
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < text.size() && text[i + 1] == b;
    };
    if (two(':', '=')) { out.push_back({Tok::assign, ":=", 0, p}); advance(2); continue; }
    if (two('<', '=')) { out.push_back({Tok::le, "<=", 0, p}); advance(2); continue; }
    if (two('>', '=')) { out.push_back({Tok::ge, ">=", 0, p}); advance(2); continue; }
    if (two('=', '>')) { out.push_back({Tok::implies, "=>", 0, p}); advance(2); continue; }
    if (two('-', '>')) { out.push_back({Tok::arrow, "->", 0, p}); advance(2); continue; }
    if (two('|', '>')) { out.push_back({Tok::interrupt_arrow, "|>", 0, p}); advance(2); continue; }
    if (two('|', '|')) { out.push_back({Tok::parallel, "||", 0, p}); advance(2); continue; }
    Tok t;
    switch (c) {
      case '(': t = Tok::lparen; break;
      case ')': t = Tok::rparen; break;
      case '{': t = Tok::lbrace; break;
      case '}': t = Tok::rbrace; break;
      case '[': t = Tok::lbracket; break;
      case ']': t = Tok::rbracket; break;
      case ',': t = Tok::comma; break;
      case ';': t = Tok::semi; break;
      case '.': t = Tok::dot; break;
      case '@': t = Tok::at; break;
      case '#': t = Tok::hash; break;
      case '!': t = Tok::bang; break;
      case '?': t = Tok::question; break;
      case '&': t = Tok::amp; break;
      case '|': t = Tok::pipe; break;
      case '^': t = Tok::caret; break;
      case '*': t = Tok::star; break;
      case '+': t = Tok::plus; break;
      case '-': t = Tok::minus; break;
      case '/': t = Tok::slash; break;
      case '<': t = Tok::lt; break;
      case '>': t = Tok::gt; break;
      case '=': t = Tok::eq; break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", p);
    }
    out.push_back({t, std::string(1, c), 0, p});
    advance(1);
  }
  out.push_back({Tok::end, "", 0, pos()});
  return out;
}

struct ParseFail {
  std::string msg;
  SourcePos pos;
};

class Parser {
 public:
  Parser(std::string text) : toks_(lex(text)) {}

  // ---- shared context -------------------------------------------------
  SourceModel model;
  bool allow_any_var = false;  // standalone assertions have no declarations
  int fresh_clock = 0;
  bool in_fol_only_context = false;  // inside ceil(...): history operators rejected

  const Token& peek(int off = 0) const {
    size_t k = idx_ + static_cast<size_t>(off);
    return k < toks_.size() ? toks_[k] : toks_.back();
  }
  const Token& cur() const { return peek(0); }
  Token eat() { return toks_[idx_ < toks_.size() - 1 ? idx_++ : idx_]; }
  bool at(Tok t) const { return cur().kind == t; }
  bool accept(Tok t) {
    if (at(t)) {
      eat();
      return true;
    }
    return false;
  }
  Token expect(Tok t, const std::string& what) {
    if (!at(t)) throw SyntaxError("expected " + what, cur().pos);
    return eat();
  }
  size_t save() const { return idx_; }
  void restore(size_t s) { idx_ = s; }
  bool at_end() const { return at(Tok::end); }

  [[noreturn]] void err(const std::string& msg) const { throw SyntaxError(msg, cur().pos); }

  // ---- model ------------------------------------------------------------
  void parse_model_items() {
    while (!at_end()) {
      if (at(Tok::kw_const)) parse_const();
      else if (at(Tok::kw_channel)) parse_channels();
      else if (at(Tok::kw_var)) parse_vars();
      else if (at(Tok::kw_def)) parse_def();
      else if (at(Tok::kw_proc)) parse_proc();
      else if (at(Tok::kw_spec)) parse_spec();
      else err("expected a declaration (const, channel, var, def, proc or spec)");
    }
    finalize_model();
  }

  void parse_const() {
    expect(Tok::kw_const, "'const'");
    std::string name = expect(Tok::ident, "constant name").text;
    expect(Tok::eq, "'='");
    double v = parse_signed_number();
    expect(Tok::semi, "';'");
    if (lookup_const(name)) err("duplicate constant '" + name + "'");
    model.constants.emplace_back(name, v);
  }

  double parse_signed_number() {
    bool negative = accept(Tok::minus);
    double v = expect(Tok::number, "number").number;
    return negative ? -v : v;
  }

  void parse_channels() {
    expect(Tok::kw_channel, "'channel'");
    do {
      std::string name = expect(Tok::ident, "channel name").text;
      if (std::find(model.channels.begin(), model.channels.end(), name) != model.channels.end())
        err("duplicate channel '" + name + "'");
      model.channels.push_back(name);
    } while (accept(Tok::comma));
    expect(Tok::semi, "';'");
  }

  void parse_vars() {
    expect(Tok::kw_var, "'var'");
    do {
      VarDecl d;
      d.name = expect(Tok::ident, "variable name").text;
      if (d.name == "now") err("'now' is reserved");
      if (accept(Tok::kw_in)) {
        expect(Tok::lbracket, "'['");
        d.lo = parse_const_expr();
        expect(Tok::comma, "','");
        d.hi = parse_const_expr();
        expect(Tok::rbracket, "']'");
        if (!(d.lo <= d.hi)) err("empty bound interval for '" + d.name + "'");
      }
      if (accept(Tok::eq)) d.init = parse_const_expr();
      if (is_data_var(d.name) || lookup_const(d.name)) err("duplicate name '" + d.name + "'");
      model.vars.push_back(d);
    } while (accept(Tok::comma));
    expect(Tok::semi, "';'");
  }

  // Constant arithmetic (constants and numbers only).
  double parse_const_expr() {
    Expr e = parse_expr();
    Expr folded = resolve_expr(e);
    if (const auto* c = std::get_if<Const>(&folded.node)) return c->value;
    err("expected a constant expression");
  }

  const FormulaDef* lookup_def(const std::string& name) const {
    for (const auto& d : model.defs)
      if (d.name == name) return &d;
    return nullptr;
  }

  void parse_def() {
    expect(Tok::kw_def, "'def'");
    FormulaDef macro;
    macro.name = expect(Tok::ident, "definition name").text;
    if (accept(Tok::lparen)) {
      do {
        macro.params.push_back(expect(Tok::ident, "parameter name").text);
      } while (accept(Tok::comma));
      expect(Tok::rparen, "')'");
    }
    expect(Tok::eq, "'='");
    macro_params_ = macro.params;
    macro.body = parse_formula();
    macro_params_.clear();
    expect(Tok::semi, "';'");
    if (lookup_def(macro.name)) err("duplicate definition '" + macro.name + "'");
    model.defs.push_back(std::move(macro));
  }

  void parse_proc() {
    expect(Tok::kw_proc, "'proc'");
    std::string name = expect(Tok::ident, "process name").text;
    if (model.has_proc(name)) err("duplicate process '" + name + "'");
    expect(Tok::lbrace, "'{'");
    Process body = parse_process();
    expect(Tok::rbrace, "'}'");
    int next_site = 0;
    body = number_sites(body, next_site);
    validate_definition(name, body);
    model.procs.emplace_back(name, std::move(body));
  }

  void parse_spec() {
    expect(Tok::kw_spec, "'spec'");
    SpecDecl s;
    s.name = expect(Tok::ident, "specification name").text;
    expect(Tok::lbrace, "'{'");
    s.pre = parse_formula();
    expect(Tok::rbrace, "'}'");
    s.process = expect(Tok::ident, "process name").text;
    if (!model.has_proc(s.process)) err("unknown process '" + s.process + "' in specification");
    expect(Tok::lbrace, "'{'");
    s.post = parse_formula();
    if (accept(Tok::comma)) s.hist = parse_history();
    else s.hist = h_true();
    expect(Tok::rbrace, "'}'");
    model.specs.push_back(std::move(s));
  }

  // ---- expressions -------------------------------------------------------
  Expr parse_expr() { return parse_additive(); }

  Expr parse_additive() {
    Expr lhs = parse_multiplicative();
    while (at(Tok::plus) || at(Tok::minus)) {
      Fn fn = at(Tok::plus) ? Fn::add : Fn::sub;
      eat();
      lhs = apply(fn, {std::move(lhs), parse_multiplicative()});
    }
    return lhs;
  }

  Expr parse_multiplicative() {
    Expr lhs = parse_unary();
    while (at(Tok::star) || at(Tok::slash)) {
      Fn fn = at(Tok::star) ? Fn::mul : Fn::div;
      eat();
      lhs = apply(fn, {std::move(lhs), parse_unary()});
    }
    return lhs;
  }

  Expr parse_unary() {
    if (accept(Tok::minus)) {
      Expr inner = parse_unary();
      if (const auto* c = std::get_if<Const>(&inner.node)) return num(-c->value);
      return neg(std::move(inner));
    }
    return parse_primary_expr();
  }

  Expr parse_primary_expr() {
    if (at(Tok::number)) return num(eat().number);
    if (at(Tok::ident)) {
      std::string name = eat().text;
      if (std::find(macro_params_.begin(), macro_params_.end(), name) != macro_params_.end())
        return Expr{Var{name}};  // substituted at application
      if (auto c = lookup_const(name)) return num(*c);
      check_var_known(name);
      return var(name);
    }
    if (accept(Tok::lparen)) {
      Expr e = parse_expr();
      expect(Tok::rparen, "')'");
      return e;
    }
    err("expected an expression");
  }

  // ---- formulas ------------------------------------------------------------
  Formula parse_formula() { return parse_implies(); }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (accept(Tok::implies)) return f_implies(std::move(lhs), parse_implies());
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    if (!at(Tok::pipe)) return lhs;
    std::vector<Formula> parts{std::move(lhs)};
    while (accept(Tok::pipe)) parts.push_back(parse_and());
    return f_or(std::move(parts));
  }

  Formula parse_and() {
    Formula lhs = parse_formula_unary();
    if (!at(Tok::amp)) return lhs;
    std::vector<Formula> parts{std::move(lhs)};
    while (accept(Tok::amp)) parts.push_back(parse_formula_unary());
    return f_and(std::move(parts));
  }

  Formula parse_formula_unary() {
    if (accept(Tok::bang)) return f_not(parse_formula_unary());
    if (at(Tok::kw_exists) || at(Tok::kw_forall)) {
      bool ex = at(Tok::kw_exists);
      eat();
      std::vector<std::string> vars;
      do {
        vars.push_back(expect(Tok::ident, "quantified variable").text);
      } while (accept(Tok::comma));
      expect(Tok::dot, "'.'");
      auto saved = bound_vars_;
      bound_vars_.insert(vars.begin(), vars.end());
      Formula body = parse_implies();
      bound_vars_ = std::move(saved);
      return ex ? f_exists(std::move(vars), std::move(body))
                : f_forall(std::move(vars), std::move(body));
    }
    return parse_formula_atom();
  }

  Formula parse_formula_atom() {
    if (in_fol_only_context && (at(Tok::kw_len) || at(Tok::kw_ceil) || at(Tok::kw_ceil_le)))
      fail(Errc::mixed_level, "history operator inside a state formula");
    if (accept(Tok::kw_true)) return f_true();
    if (accept(Tok::kw_false)) return f_false();
    // macro application: IDENT or IDENT(args)
    if (at(Tok::ident) && lookup_def(cur().text) && !bound_vars_.count(cur().text)) {
      std::string name = eat().text;
      const FormulaDef& macro = *lookup_def(name);
      std::vector<Expr> args;
      if (!macro.params.empty()) {
        expect(Tok::lparen, "'('");
        do {
          args.push_back(parse_expr());
        } while (accept(Tok::comma));
        expect(Tok::rparen, "')'");
      }
      if (args.size() != macro.params.size()) err("wrong argument count for '" + name + "'");
      return apply_macro(macro, args);
    }
    // comparison chain, possibly starting with a parenthesized expression
    size_t s = save();
    try {
      Expr first = parse_expr();
      if (!at_relop()) throw ParseFail{"expected comparison", cur().pos};
      std::vector<Formula> chain;
      Expr prev = first;
      while (at_relop()) {
        CmpOp op = eat_relop();
        Expr next = parse_expr();
        chain.push_back(cmp(prev, op, next));
        prev = next;
      }
      return f_and(std::move(chain));
    } catch (const ParseFail&) {
      restore(s);
    } catch (const Error&) {
      restore(s);
    }
    if (accept(Tok::lparen)) {
      Formula f = parse_formula();
      expect(Tok::rparen, "')'");
      return f;
    }
    err("expected a formula");
  }

  bool at_relop() const {
    return at(Tok::lt) || at(Tok::le) || at(Tok::eq) || at(Tok::ge) || at(Tok::gt);
  }

  CmpOp eat_relop() {
    switch (eat().kind) {
      case Tok::lt: return CmpOp::lt;
      case Tok::le: return CmpOp::le;
      case Tok::eq: return CmpOp::eq;
      case Tok::ge: return CmpOp::ge;
      default: return CmpOp::gt;
    }
  }

  // ---- history formulas -----------------------------------------------------
  HistoryFormula parse_history() { return parse_hf_or(); }

  HistoryFormula parse_hf_or() {
    HistoryFormula lhs = parse_hf_and();
    if (!at(Tok::pipe)) return lhs;
    std::vector<HistoryFormula> parts{std::move(lhs)};
    while (accept(Tok::pipe)) parts.push_back(parse_hf_and());
    return h_or(std::move(parts));
  }

  HistoryFormula parse_hf_and() {
    HistoryFormula lhs = parse_hf_chop();
    if (!at(Tok::amp)) return lhs;
    std::vector<HistoryFormula> parts{std::move(lhs)};
    while (accept(Tok::amp)) parts.push_back(parse_hf_chop());
    return h_and(std::move(parts));
  }

  HistoryFormula parse_hf_chop() {
    HistoryFormula lhs = parse_hf_unary();
    while (accept(Tok::caret)) lhs = chop(std::move(lhs), parse_hf_unary());
    return lhs;
  }

  HistoryFormula parse_hf_unary() {
    if (accept(Tok::bang)) return h_not(parse_hf_unary());
    return parse_hf_atom();
  }

  HistoryFormula parse_hf_atom() {
    if (accept(Tok::kw_len)) {
      if (accept(Tok::lt)) return len_lt(parse_const_number());
      if (accept(Tok::eq)) return len_eq(parse_const_number());
      err("expected '<' or '=' after 'len'");
    }
    if (at(Tok::kw_ceil) || at(Tok::kw_ceil_le)) {
      bool le = at(Tok::kw_ceil_le);
      eat();
      expect(Tok::lparen, "'('");
      bool saved = in_fol_only_context;
      in_fol_only_context = true;
      Formula f = parse_formula();
      in_fol_only_context = saved;
      expect(Tok::rparen, "')'");
      return le ? ceil_le(std::move(f)) : ceil_of(std::move(f));
    }
    if (accept(Tok::kw_true)) return h_true();
    if (accept(Tok::lparen)) {
      HistoryFormula f = parse_hf_or();
      expect(Tok::rparen, "')'");
      return f;
    }
    if (at(Tok::ident) || at(Tok::number) || at(Tok::minus) || at(Tok::kw_false))
      fail(Errc::mixed_level,
           "state formula at history level; wrap it in ceil(...) or ceil_le(...)");
    err("expected a history formula");
  }

  double parse_const_number() {
    bool negative = accept(Tok::minus);
    double v;
    if (at(Tok::number)) {
      v = eat().number;
    } else if (at(Tok::ident)) {
      auto c = lookup_const(cur().text);
      if (!c) err("expected a number or constant");
      eat();
      v = *c;
    } else {
      err("expected a number");
    }
    return negative ? -v : v;
  }

  // ---- processes -------------------------------------------------------------
  Process parse_process() { return parse_par(); }

  Process parse_par() {
    Process lhs = parse_seq();
    while (accept(Tok::parallel)) lhs = p_parallel(std::move(lhs), parse_seq());
    return lhs;
  }

  Process parse_seq() {
    Process first = parse_step();
    if (!accept(Tok::semi)) return first;
    return p_seq(std::move(first), parse_seq());
  }

  Process parse_step() {
    std::optional<int> pending;
    if (at(Tok::at) && peek(1).kind == Tok::number) {
      eat();
      pending = parse_label_int();
    }
    // guard: formula [label]? '->' step
    size_t s = save();
    try {
      Formula cond = parse_formula();
      std::optional<int> body_label;
      if (at(Tok::at) && peek(1).kind == Tok::number) {
        eat();
        body_label = parse_label_int();
      }
      if (!at(Tok::arrow)) throw ParseFail{"expected '->'", cur().pos};
      eat();
      Process body = parse_step();
      if (body_label) {
        if (body.label_before) err("conflicting labels on guard body");
        body.label_before = body_label;
      }
      Process g = p_guard(std::move(cond), std::move(body));
      g.label_before = pending;
      return g;
    } catch (const ParseFail&) {
      restore(s);
    } catch (const SyntaxError&) {
      restore(s);
    }
    Process unit = parse_unit();
    if (pending) {
      if (unit.label_before) err("conflicting labels");
      unit.label_before = pending;
    }
    return unit;
  }

  int parse_label_int() {
    Token t = expect(Tok::number, "label");
    double v = t.number;
    int label = static_cast<int>(v);
    if (label != v || label < 0) throw SyntaxError("labels are non-negative integers", t.pos);
    return label;
  }

  Process parse_unit() {
    std::optional<int> pending;
    if (at(Tok::at) && peek(1).kind == Tok::number) {
      eat();
      pending = parse_label_int();
    }
    Process core = parse_core();
    // postfix repetition
    while (at(Tok::star)) {
      eat();
      std::optional<StarInv> inv;
      if (at(Tok::at) && peek(1).kind == Tok::ident && peek(1).text == "invariant") {
        eat();
        eat();
        expect(Tok::lparen, "'('");
        Formula f = parse_formula();
        expect(Tok::comma, "','");
        HistoryFormula hf = parse_history();
        expect(Tok::rparen, "')'");
        inv = StarInv{std::move(f), std::move(hf)};
      }
      core = p_star(std::move(core), std::move(inv));
    }
    if (pending) {
      if (core.label_before) err("conflicting labels");
      core.label_before = pending;
    }
    if (at(Tok::at) && peek(1).kind == Tok::number) {
      eat();
      int label = parse_label_int();
      if (core.label_after) err("conflicting labels");
      core.label_after = label;
    }
    return core;
  }

  Process parse_core() {
    if (accept(Tok::kw_skip)) return p_skip();
    if (accept(Tok::kw_eps)) return p_epsilon();
    if (at(Tok::at) && peek(1).kind == Tok::ident && peek(1).text == "cut") {
      eat();
      eat();
      expect(Tok::lparen, "'('");
      Formula f = parse_formula();
      expect(Tok::rparen, "')'");
      return p_cut(std::move(f));
    }
    if (accept(Tok::kw_wait)) {
      // wait T  ~>  t := 0; <t_dot = 1 & t < T> with a fresh clock
      Expr bound = parse_expr();
      std::string clock = fresh_clock_name();
      return p_seq(p_assign(clock, num(0)),
                   p_continuous({OdeSpec{clock, num(1)}},
                                cmp(var(clock), CmpOp::lt, resolve_expr(bound))));
    }
    if (at(Tok::lt)) return parse_continuous_or_interrupt();
    if (at(Tok::amp) || is_io_start()) {
      Binder b = parse_binder();
      return p_bind(std::move(b));
    }
    if (at(Tok::ident)) {
      std::string name = cur().text;
      if (peek(1).kind == Tok::assign) {
        eat();
        eat();
        check_assignable(name);
        if (accept(Tok::star)) {
          expect(Tok::lbracket, "'['");
          Expr lo = parse_expr();
          expect(Tok::comma, "','");
          Expr hi = parse_expr();
          expect(Tok::rbracket, "']'");
          return p_nondet(name, resolve_expr(lo), resolve_expr(hi));
        }
        Expr value = parse_expr();
        return p_assign(name, resolve_expr(value));
      }
      // process reference
      if (model.has_proc(name)) {
        eat();
        return model.proc(name);
      }
      err("unknown process '" + name + "'");
    }
    if (accept(Tok::lparen)) {
      Process p = parse_process();
      expect(Tok::rparen, "')'");
      return p;
    }
    err("expected a process");
  }

  bool is_io_start() const {
    return at(Tok::ident) && (peek(1).kind == Tok::bang || peek(1).kind == Tok::question);
  }

  Process parse_continuous_or_interrupt() {
    Continuous cont = parse_continuous();
    if (accept(Tok::interrupt_arrow)) {
      Binder b = parse_binder();
      // bare input/output binders are wrapped so that rec applies uniformly
      if (!std::holds_alternative<BCompound>(b.node)) {
        Binder wrapped = b_compound(q_exists(), {Binder{b.node, {}, {}}});
        wrapped.label_before = b.label_before;
        wrapped.label_after = b.label_after;
        b = std::move(wrapped);
      }
      expect(Tok::arrow, "'->'");
      Process handler = parse_step();
      return p_interrupt(std::move(cont), std::move(b), std::move(handler));
    }
    return Process{std::move(cont), {}, {}};
  }

  Continuous parse_continuous() {
    expect(Tok::lt, "'<'");
    Continuous c;
    do {
      Token name = expect(Tok::ident, "ODE variable (name_dot)");
      const std::string suffix = "_dot";
      if (name.text.size() <= suffix.size() ||
          name.text.compare(name.text.size() - suffix.size(), suffix.size(), suffix) != 0)
        throw SyntaxError("ODE left-hand sides are written as <var>_dot", name.pos);
      std::string v = name.text.substr(0, name.text.size() - suffix.size());
      check_data_var(v);
      expect(Tok::eq, "'='");
      Expr rhs = parse_expr();
      c.odes.push_back(OdeSpec{v, resolve_expr(rhs)});
    } while (accept(Tok::comma));
    expect(Tok::amp, "'&'");
    c.domain = parse_formula();
    expect(Tok::gt, "'>'");
    for (const auto& v : free_vars(c.domain))
      if (!is_data_var(v))
        fail(Errc::scope, "continuous domain mentions non-data variable '" + v + "'");
    if (at(Tok::at) && peek(1).kind == Tok::ident && peek(1).text == "invariant") {
      eat();
      eat();
      expect(Tok::lparen, "'('");
      c.invariant = parse_formula();
      expect(Tok::rparen, "')'");
    }
    return c;
  }

  Binder parse_binder() {
    std::optional<int> before;
    if (at(Tok::at) && peek(1).kind == Tok::number) {
      eat();
      before = parse_label_int();
    }
    Binder b = parse_binder_core();
    b.label_before = before;
    if (at(Tok::at) && peek(1).kind == Tok::number) {
      eat();
      b.label_after = parse_label_int();
    }
    return b;
  }

  Binder parse_binder_core() {
    if (accept(Tok::amp)) {
      QualityPredicate pred = q_exists();
      bool general = false;
      if (at(Tok::ident) && cur().text == "or") {
        eat();
      } else if (at(Tok::ident) && cur().text == "and") {
        eat();
        pred = q_forall();
      } else if (accept(Tok::lbracket)) {
        pred = parse_qp_or();
        expect(Tok::rbracket, "']'");
        general = true;
      } else {
        err("expected 'or', 'and' or '[...]' after '&'");
      }
      expect(Tok::lparen, "'('");
      std::vector<Binder> subs;
      do {
        subs.push_back(parse_binder());
      } while (accept(Tok::comma));
      expect(Tok::rparen, "')'");
      if (general) check_qp_range(pred, static_cast<int>(subs.size()));
      Binder b = b_compound(std::move(pred), std::move(subs));
      validate_binder_acks(b);
      return b;
    }
    // input / output
    Token chan = expect(Tok::ident, "channel name");
    check_channel(chan.text);
    if (accept(Tok::bang)) {
      Expr value = parse_expr();
      expect(Tok::lbrace, "'{'");
      std::string ack = expect(Tok::ident, "acknowledgement variable").text;
      expect(Tok::rbrace, "'}'");
      register_ack(ack);
      return b_out(chan.text, resolve_expr(value), ack);
    }
    expect(Tok::question, "'!' or '?'");
    std::string v = expect(Tok::ident, "target variable").text;
    check_data_var(v);
    expect(Tok::lbrace, "'{'");
    std::string ack = expect(Tok::ident, "acknowledgement variable").text;
    expect(Tok::rbrace, "'}'");
    register_ack(ack);
    return b_in(chan.text, v, ack);
  }

  QualityPredicate parse_qp_or() {
    QualityPredicate lhs = parse_qp_and();
    if (!at(Tok::pipe)) return lhs;
    std::vector<QualityPredicate> parts{std::move(lhs)};
    while (accept(Tok::pipe)) parts.push_back(parse_qp_and());
    return q_or(std::move(parts));
  }

  QualityPredicate parse_qp_and() {
    QualityPredicate lhs = parse_qp_atom();
    if (!at(Tok::amp)) return lhs;
    std::vector<QualityPredicate> parts{std::move(lhs)};
    while (accept(Tok::amp)) parts.push_back(parse_qp_atom());
    return q_and(std::move(parts));
  }

  QualityPredicate parse_qp_atom() {
    if (accept(Tok::hash)) {
      Token t = expect(Tok::number, "atom index");
      int idx = static_cast<int>(t.number);
      if (idx != t.number || idx < 1) throw SyntaxError("atom indices are #1, #2, ...", t.pos);
      return q_atom(idx - 1);
    }
    if (accept(Tok::lparen)) {
      QualityPredicate q = parse_qp_or();
      expect(Tok::rparen, "')'");
      return q;
    }
    err("expected '#n' or '(' in quality predicate");
  }

  void check_qp_range(const QualityPredicate& q, int n) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, QAtom>) {
            if (x.index >= n) err("quality predicate atom out of range");
          } else if constexpr (std::is_same_v<T, QAnd> || std::is_same_v<T, QOr>) {
            for (const auto& p : x.parts) check_qp_range(p, n);
          }
        },
        q.node);
  }

  // ---- names ---------------------------------------------------------------
  std::optional<double> lookup_const(const std::string& name) const {
    for (const auto& [n, v] : model.constants)
      if (n == name) return v;
    return std::nullopt;
  }

  bool is_data_var(const std::string& name) const {
    for (const auto& v : model.vars)
      if (v.name == name) return true;
    return false;
  }

  bool is_ack_var(const std::string& name) const {
    return std::find(model.acks.begin(), model.acks.end(), name) != model.acks.end();
  }

  void check_var_known(const std::string& name) {
    if (bound_vars_.count(name)) return;
    if (is_data_var(name) || is_ack_var(name)) return;
    fail(Errc::scope, "undeclared variable '" + name + "'");
  }

  void check_data_var(const std::string& name) {
    if (!is_data_var(name)) {
      if (is_ack_var(name))
        fail(Errc::scope, "acknowledgement variable '" + name + "' cannot be assigned");
      fail(Errc::scope, "undeclared data variable '" + name + "'");
    }
  }

  void check_assignable(const std::string& name) { check_data_var(name); }

  void check_channel(const std::string& name) {
    if (std::find(model.channels.begin(), model.channels.end(), name) == model.channels.end())
      fail(Errc::scope, "undeclared channel '" + name + "'");
  }

  void register_ack(const std::string& name) {
    if (is_data_var(name) || lookup_const(name))
      fail(Errc::scope, "acknowledgement variable '" + name + "' clashes with a data name");
    if (!is_ack_var(name)) model.acks.push_back(name);
  }

  void validate_binder_acks(const Binder& b) {
    std::vector<std::string> acks;
    collect_binder_acks(b, acks);
    std::set<std::string> seen;
    for (const auto& a : acks)
      if (!seen.insert(a).second)
        fail(Errc::scope, "acknowledgement variable '" + a + "' used twice in one binder");
  }

  void collect_binder_acks(const Binder& b, std::vector<std::string>& out) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, BInput> || std::is_same_v<T, BOutput>) {
            out.push_back(x.ack);
          } else if constexpr (std::is_same_v<T, BCompound>) {
            for (const auto& sub : x.subs) collect_binder_acks(sub, out);
          }
        },
        b.node);
  }

  std::string fresh_clock_name() {
    std::string name;
    do {
      name = "wclk" + std::to_string(fresh_clock++);
    } while (is_data_var(name) || is_ack_var(name));
    VarDecl d;
    d.name = name;
    d.lo = 0;
    d.hi = 1e6;
    model.vars.push_back(d);
    return name;
  }

  // Substitutes constants into expressions and folds closed subtrees.
  Expr resolve_expr(const Expr& e) {
    return std::visit(
        [&](const auto& x) -> Expr {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Const>) {
            return e;
          } else if constexpr (std::is_same_v<T, Var>) {
            if (auto c = lookup_const(x.name)) return num(*c);
            return e;
          } else {
            std::vector<Expr> args;
            bool all_const = true;
            for (const auto& a : x.args) {
              args.push_back(resolve_expr(a));
              all_const = all_const && std::holds_alternative<Const>(args.back().node);
            }
            if (all_const) {
              State empty;
              return num(eval_expr(empty, Expr{Apply{x.fn, args}}));
            }
            return Expr{Apply{x.fn, std::move(args)}};
          }
        },
        e.node);
  }

  Formula apply_macro(const FormulaMacro& macro, const std::vector<Expr>& args) {
    std::map<std::string, Expr> subst;
    for (size_t i = 0; i < macro.params.size(); ++i)
      subst[macro.params[i]] = resolve_expr(args[i]);
    return subst_formula(macro.body, subst);
  }

  Expr subst_expr(const Expr& e, const std::map<std::string, Expr>& s) {
    return std::visit(
        [&](const auto& x) -> Expr {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Var>) {
            auto it = s.find(x.name);
            return it != s.end() ? it->second : e;
          } else if constexpr (std::is_same_v<T, Apply>) {
            std::vector<Expr> args;
            for (const auto& a : x.args) args.push_back(subst_expr(a, s));
            return Expr{Apply{x.fn, std::move(args)}};
          } else {
            return e;
          }
        },
        e.node);
  }

  Formula subst_formula(const Formula& f, const std::map<std::string, Expr>& s) {
    return std::visit(
        [&](const auto& x) -> Formula {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Cmp>) {
            return cmp(subst_expr(x.lhs, s), x.op, subst_expr(x.rhs, s));
          } else if constexpr (std::is_same_v<T, Not>) {
            return f_not(subst_formula(*x.body, s));
          } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
            std::vector<Formula> parts;
            for (const auto& p : x.parts) parts.push_back(subst_formula(p, s));
            if constexpr (std::is_same_v<T, And>) return f_and(std::move(parts));
            else return f_or(std::move(parts));
          } else if constexpr (std::is_same_v<T, Implies>) {
            return f_implies(subst_formula(*x.lhs, s), subst_formula(*x.rhs, s));
          } else if constexpr (std::is_same_v<T, Exists> || std::is_same_v<T, Forall>) {
            auto inner = s;
            for (const auto& v : x.vars) inner.erase(v);
            if constexpr (std::is_same_v<T, Exists>)
              return f_exists(x.vars, subst_formula(*x.body, inner));
            else return f_forall(x.vars, subst_formula(*x.body, inner));
          } else {
            return f;
          }
        },
        f.node);
  }

  void validate_definition(const std::string& name, const Process& body) {
    auto labels = collect_labels(body);
    std::set<int> seen;
    for (int l : labels)
      if (!seen.insert(l).second)
        fail(Errc::duplicate_label,
             "label " + std::to_string(l) + " appears twice in process '" + name + "'");
    // guard conditions may mention data and ack variables; all free variables
    // must be declared
    for (const auto& v : free_vars(body))
      if (!is_data_var(v) && !is_ack_var(v))
        fail(Errc::scope, "undeclared variable '" + v + "' in process '" + name + "'");
  }

  void finalize_model() {
    for (const auto& v : model.vars)
      if (is_ack_var(v.name))
        fail(Errc::scope, "name '" + v.name + "' is both a data and acknowledgement variable");
  }

  std::set<std::string> bound_vars_;
  std::vector<std::string> macro_params_;

 private:
  std::vector<Token> toks_;
  size_t idx_ = 0;
};

}  // namespace

SourceModel parse_model(const std::string& text) {
  Parser p(text);
  p.parse_model_items();
  return std::move(p.model);
}

std::variant<Formula, HistoryFormula> parse_assertion(const std::string& text) {
  // try a pure state formula first
  {
    Parser p(text);
    try {
      p.bound_vars_.clear();
      // assertions are parsed without declarations: any identifier is a variable
      p.collect_decls = false;
      p.model.vars.push_back(VarDecl{"__any__", -1e9, 1e9, 0});
      Formula f = parse_assertion_formula(p);
      if (p.at_end()) return f;
    } catch (const Error&) {
    }
  }
  Parser p(text);
  p.collect_decls = false;
  HistoryFormula hf = parse_assertion_history(p);
  if (!p.at_end()) p.err("unexpected trailing input");
  return hf;
}

Formula parse_formula(const std::string& text, const SourceModel* context) {
  Parser p(text);
  if (context) p.model = *context;
  else p.model.vars.push_back(VarDecl{"__any__", -1e9, 1e9, 0});
  Formula f = parse_assertion_formula(p);
  if (!p.at_end()) p.err("unexpected trailing input");
  return f;
}

Process parse_process_in(const SourceModel& context, const std::string& text) {
  Parser p(text);
  p.model = context;
  Process proc = p.parse_process();
  if (!p.at_end()) p.err("unexpected trailing input");
  int next_site = 0;
  proc = number_sites(proc, next_site);
  p.validate_definition("<inline>", proc);
  return proc;
}

}  // namespace hcspb
