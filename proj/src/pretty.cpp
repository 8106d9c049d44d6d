#include "hcspb/pretty.hpp"

#include <charconv>
#include <sstream>

namespace hcspb {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

// Expression precedence: 1 additive, 2 multiplicative, 3 unary, 4 primary.
int expr_level(const Expr& e) {
  if (const auto* a = std::get_if<Apply>(&e.node)) {
    switch (a->fn) {
      case Fn::add:
      case Fn::sub: return 1;
      case Fn::mul:
      case Fn::div: return 2;
      case Fn::neg: return 3;
    }
  }
  return 4;
}

void print_expr(std::ostringstream& os, const Expr& e, int min_level) {
  int level = expr_level(e);
  bool parens = level < min_level;
  if (parens) os << "(";
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Const>) {
          os << format_double(x.value);
        } else if constexpr (std::is_same_v<T, Var>) {
          os << x.name;
        } else {
          if (x.fn == Fn::neg) {
            os << "-";
            print_expr(os, x.args[0], 3);
          } else {
            print_expr(os, x.args[0], level);
            os << " " << fn_name(x.fn) << " ";
            print_expr(os, x.args[1], level + 1);
          }
        }
      },
      e.node);
  if (parens) os << ")";
}

// Formula precedence: 1 implies/quantifier, 2 or, 3 and, 4 unary, 5 atom.
int formula_level(const Formula& f) {
  return std::visit(
      [](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Implies> || std::is_same_v<T, Exists> ||
                      std::is_same_v<T, Forall>)
          return 1;
        else if constexpr (std::is_same_v<T, Or>) return 2;
        else if constexpr (std::is_same_v<T, And>) return 3;
        else if constexpr (std::is_same_v<T, Not>) return 4;
        else return 5;
      },
      f.node);
}

void print_formula(std::ostringstream& os, const Formula& f, int min_level) {
  int level = formula_level(f);
  bool parens = level < min_level;
  if (parens) os << "(";
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TrueF>) {
          os << "true";
        } else if constexpr (std::is_same_v<T, FalseF>) {
          os << "false";
        } else if constexpr (std::is_same_v<T, Cmp>) {
          print_expr(os, x.lhs, 1);
          os << " " << cmp_name(x.op) << " ";
          print_expr(os, x.rhs, 1);
        } else if constexpr (std::is_same_v<T, Not>) {
          os << "!";
          print_formula(os, *x.body, 4);
        } else if constexpr (std::is_same_v<T, And>) {
          if (x.parts.empty()) {
            os << "true";
            return;
          }
          for (size_t i = 0; i < x.parts.size(); ++i) {
            if (i) os << " & ";
            print_formula(os, x.parts[i], 4);
          }
        } else if constexpr (std::is_same_v<T, Or>) {
          if (x.parts.empty()) {
            os << "false";
            return;
          }
          for (size_t i = 0; i < x.parts.size(); ++i) {
            if (i) os << " | ";
            print_formula(os, x.parts[i], 3);
          }
        } else if constexpr (std::is_same_v<T, Implies>) {
          print_formula(os, *x.lhs, 2);
          os << " => ";
          print_formula(os, *x.rhs, 1);
        } else {
          os << (std::is_same_v<T, Exists> ? "exists " : "forall ");
          for (size_t i = 0; i < x.vars.size(); ++i) {
            if (i) os << ", ";
            os << x.vars[i];
          }
          os << ". ";
          print_formula(os, *x.body, 1);
        }
      },
      f.node);
  if (parens) os << ")";
}

// History-formula precedence: 1 or, 2 and, 3 chop, 4 unary, 5 atom.
int hf_level(const HistoryFormula& f) {
  return std::visit(
      [](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, OrH>) return 1;
        else if constexpr (std::is_same_v<T, AndH>) return 2;
        else if constexpr (std::is_same_v<T, Chop>) return 3;
        else if constexpr (std::is_same_v<T, NotH>) return 4;
        else return 5;
      },
      f.node);
}

const Formula* ceil_le_sugar(const HistoryFormula& f) {
  const auto* o = std::get_if<OrH>(&f.node);
  if (!o || o->parts.size() != 2) return nullptr;
  const auto* c = std::get_if<Ceil>(&o->parts[0].node);
  const auto* l = std::get_if<LenCmp>(&o->parts[1].node);
  if (c && l && l->op == LenOp::eq && l->bound == 0) return &c->state;
  return nullptr;
}

void print_hf(std::ostringstream& os, const HistoryFormula& f, int min_level) {
  if (const Formula* sugar = ceil_le_sugar(f)) {
    os << "ceil_le(";
    print_formula(os, *sugar, 1);
    os << ")";
    return;
  }
  int level = hf_level(f);
  bool parens = level < min_level;
  if (parens) os << "(";
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, LenCmp>) {
          os << "len " << (x.op == LenOp::lt ? "<" : "=") << " " << format_double(x.bound);
        } else if constexpr (std::is_same_v<T, Ceil>) {
          os << "ceil(";
          print_formula(os, x.state, 1);
          os << ")";
        } else if constexpr (std::is_same_v<T, Chop>) {
          print_hf(os, *x.lhs, 3);
          os << " ^ ";
          print_hf(os, *x.rhs, 4);
        } else if constexpr (std::is_same_v<T, NotH>) {
          os << "!";
          print_hf(os, *x.body, 4);
        } else if constexpr (std::is_same_v<T, OrH>) {
          if (x.parts.empty()) {
            os << "!true";
            return;
          }
          for (size_t i = 0; i < x.parts.size(); ++i) {
            if (i) os << " | ";
            print_hf(os, x.parts[i], 2);
          }
        } else if constexpr (std::is_same_v<T, AndH>) {
          if (x.parts.empty()) {
            os << "true";
            return;
          }
          for (size_t i = 0; i < x.parts.size(); ++i) {
            if (i) os << " & ";
            print_hf(os, x.parts[i], 3);
          }
        } else {
          os << "true";
        }
      },
      f.node);
  if (parens) os << ")";
}

void print_qp(std::ostringstream& os, const QualityPredicate& q, int min_level) {
  // 1 or, 2 and, 3 atom
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, QAtom>) {
          os << "#" << (x.index + 1);
        } else if constexpr (std::is_same_v<T, QAnd>) {
          bool parens = 2 < min_level;
          if (parens) os << "(";
          for (size_t i = 0; i < x.parts.size(); ++i) {
            if (i) os << " & ";
            print_qp(os, x.parts[i], 3);
          }
          if (parens) os << ")";
        } else if constexpr (std::is_same_v<T, QOr>) {
          bool parens = 1 < min_level;
          if (parens) os << "(";
          for (size_t i = 0; i < x.parts.size(); ++i) {
            if (i) os << " | ";
            print_qp(os, x.parts[i], 2);
          }
          if (parens) os << ")";
        } else {
          // abbreviations are printed via the &or / &and binder heads
          os << (std::is_same_v<T, QExists> ? "#exists" : "#forall");
        }
      },
      q.node);
}

void print_binder(std::ostringstream& os, const Binder& b, bool bare_singleton) {
  if (b.label_before) os << "@" << *b.label_before << " ";
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BInput>) {
          os << x.chan << "?" << x.var << "{" << x.ack << "}";
        } else if constexpr (std::is_same_v<T, BOutput>) {
          os << x.chan << "!";
          print_expr(os, x.value, 2);
          os << "{" << x.ack << "}";
        } else if constexpr (std::is_same_v<T, BCompound>) {
          if (bare_singleton && x.subs.size() == 1 &&
              std::holds_alternative<QExists>(x.pred.node) && !x.subs[0].label_before &&
              !x.subs[0].label_after &&
              !std::holds_alternative<BCompound>(x.subs[0].node)) {
            // singleton wrapper introduced for interrupts prints as the bare io
            print_binder(os, x.subs[0], false);
            return;
          }
          if (std::holds_alternative<QExists>(x.pred.node)) os << "&or(";
          else if (std::holds_alternative<QForall>(x.pred.node)) os << "&and(";
          else {
            os << "&[";
            print_qp(os, x.pred, 1);
            os << "](";
          }
          for (size_t i = 0; i < x.subs.size(); ++i) {
            if (i) os << ", ";
            print_binder(os, x.subs[i], false);
          }
          os << ")";
        } else {
          os << "eps";
        }
      },
      b.node);
  if (b.label_after) os << " @" << *b.label_after;
}

// Process printing levels: par > seq > step (guard) > unit.
void print_process_par(std::ostringstream& os, const Process& p);
void print_process_seq(std::ostringstream& os, const Process& p);
void print_process_step(std::ostringstream& os, const Process& p);
void print_process_unit(std::ostringstream& os, const Process& p);

void print_continuous(std::ostringstream& os, const Continuous& c) {
  os << "<";
  for (size_t i = 0; i < c.odes.size(); ++i) {
    if (i) os << ", ";
    os << c.odes[i].var << "_dot = ";
    print_expr(os, c.odes[i].rhs, 1);
  }
  os << " & ";
  print_formula(os, c.domain, 1);
  os << ">";
  if (c.invariant) {
    os << " @invariant(";
    print_formula(os, *c.invariant, 1);
    os << ")";
  }
}

void print_process_unit(std::ostringstream& os, const Process& p) {
  if (p.label_before) os << "@" << *p.label_before << " ";
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Skip>) {
          os << "skip";
        } else if constexpr (std::is_same_v<T, Epsilon>) {
          os << "eps";
        } else if constexpr (std::is_same_v<T, Assign>) {
          os << x.var << " := ";
          print_expr(os, x.value, 1);
        } else if constexpr (std::is_same_v<T, NondetAssign>) {
          os << x.var << " := *[";
          print_expr(os, x.lo, 1);
          os << ", ";
          print_expr(os, x.hi, 1);
          os << "]";
        } else if constexpr (std::is_same_v<T, Bind>) {
          print_binder(os, x.binder, false);
        } else if constexpr (std::is_same_v<T, Continuous>) {
          print_continuous(os, x);
        } else if constexpr (std::is_same_v<T, Interrupt>) {
          print_continuous(os, x.cont);
          os << " |> ";
          print_binder(os, x.binder, true);
          os << " -> ";
          print_process_step(os, *x.handler);
        } else if constexpr (std::is_same_v<T, Cut>) {
          os << "@cut(";
          print_formula(os, x.target, 1);
          os << ")";
        } else if constexpr (std::is_same_v<T, Star>) {
          os << "(";
          print_process_par(os, *x.body);
          os << ")*";
          if (x.invariant) {
            os << " @invariant(";
            print_formula(os, x.invariant->inv, 1);
            os << ", ";
            print_hf(os, x.invariant->hist, 1);
            os << ")";
          }
        } else {
          // Seq, Parallel, Guard need grouping at unit level
          os << "(";
          print_process_par(os, p);
          os << ")";
        }
      },
      p.node);
  if (p.label_after) os << " @" << *p.label_after;
}

void print_process_step(std::ostringstream& os, const Process& p) {
  if (const auto* g = std::get_if<Guard>(&p.node)) {
    if (p.label_before) os << "@" << *p.label_before << " ";
    print_formula(os, g->cond, 2);  // implies needs parens before ->
    os << " -> ";
    print_process_step(os, *g->body);
    if (p.label_after) os << " @" << *p.label_after;
    return;
  }
  print_process_unit(os, p);
}

void print_process_seq(std::ostringstream& os, const Process& p) {
  if (const auto* s = std::get_if<Seq>(&p.node)) {
    if (!p.label_before && !p.label_after) {
      print_process_step(os, *s->first);
      os << "; ";
      print_process_seq(os, *s->second);
      return;
    }
  }
  print_process_step(os, p);
}

void print_process_par(std::ostringstream& os, const Process& p) {
  if (const auto* par = std::get_if<Parallel>(&p.node)) {
    if (!p.label_before && !p.label_after) {
      print_process_par(os, *par->left);
      os << " || ";
      print_process_seq(os, *par->right);
      return;
    }
  }
  print_process_seq(os, p);
}

}  // namespace

std::string pretty_print(const Expr& e) {
  std::ostringstream os;
  print_expr(os, e, 1);
  return os.str();
}

std::string pretty_print(const Formula& f) {
  std::ostringstream os;
  print_formula(os, f, 1);
  return os.str();
}

std::string pretty_print(const HistoryFormula& f) {
  std::ostringstream os;
  print_hf(os, f, 1);
  return os.str();
}

std::string pretty_print(const Binder& b) {
  std::ostringstream os;
  print_binder(os, b, false);
  return os.str();
}

std::string pretty_print(const Process& p) {
  std::ostringstream os;
  print_process_par(os, p);
  return os.str();
}

std::string pretty_print(const SourceModel& m) {
  std::ostringstream os;
  for (const auto& [name, value] : m.constants)
    os << "const " << name << " = " << format_double(value) << ";\n";
  if (!m.channels.empty()) {
    os << "channel ";
    for (size_t i = 0; i < m.channels.size(); ++i) {
      if (i) os << ", ";
      os << m.channels[i];
    }
    os << ";\n";
  }
  for (const auto& v : m.vars) {
    os << "var " << v.name << " in [" << format_double(v.lo) << ", " << format_double(v.hi) << "]";
    if (v.init != 0.0) os << " = " << format_double(v.init);
    os << ";\n";
  }
  for (const auto& [name, body] : m.procs) {
    os << "proc " << name << " {\n  ";
    std::ostringstream ps;
    print_process_par(ps, body);
    os << ps.str() << "\n}\n";
  }
  for (const auto& s : m.specs) {
    os << "spec " << s.name << " { ";
    print_formula(os, s.pre, 1);
    os << " } " << s.process << " { ";
    print_formula(os, s.post, 1);
    os << ", ";
    print_hf(os, s.hist, 1);
    os << " }\n";
  }
  return os.str();
}

}  // namespace hcspb
