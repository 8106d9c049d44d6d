#include "hcspb/ast.hpp"

#include <algorithm>

namespace hcspb {

int fn_arity(Fn fn) { return fn == Fn::neg ? 1 : 2; }

const char* fn_name(Fn fn) {
  switch (fn) {
    case Fn::add: return "+";
    case Fn::sub: return "-";
    case Fn::mul: return "*";
    case Fn::div: return "/";
    case Fn::neg: return "-";
  }
  return "?";
}

const char* cmp_name(CmpOp op) {
  switch (op) {
    case CmpOp::lt: return "<";
    case CmpOp::le: return "<=";
    case CmpOp::eq: return "=";
    case CmpOp::ge: return ">=";
    case CmpOp::gt: return ">";
  }
  return "?";
}

// --- expressions -----------------------------------------------------------

bool operator==(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* c = std::get_if<Const>(&a.node)) return c->value == std::get<Const>(b.node).value;
  if (const auto* v = std::get_if<Var>(&a.node)) return v->name == std::get<Var>(b.node).name;
  const auto& x = std::get<Apply>(a.node);
  const auto& y = std::get<Apply>(b.node);
  return x.fn == y.fn && x.args == y.args;
}

Expr num(double value) { return Expr{Const{value}}; }

Expr var(const std::string& name) {
  if (name.empty()) fail(Errc::scope, "empty variable name");
  if (name == "now") fail(Errc::scope, "'now' is reserved and may not appear in expressions");
  return Expr{Var{name}};
}

Expr apply(Fn fn, std::vector<Expr> args) {
  if (static_cast<int>(args.size()) != fn_arity(fn))
    fail(Errc::unsupported_construct, "arity mismatch for arithmetic operator");
  return Expr{Apply{fn, std::move(args)}};
}

Expr add(Expr a, Expr b) { return apply(Fn::add, {std::move(a), std::move(b)}); }
Expr sub(Expr a, Expr b) { return apply(Fn::sub, {std::move(a), std::move(b)}); }
Expr mul(Expr a, Expr b) { return apply(Fn::mul, {std::move(a), std::move(b)}); }
Expr divide(Expr a, Expr b) { return apply(Fn::div, {std::move(a), std::move(b)}); }
Expr neg(Expr a) { return apply(Fn::neg, {std::move(a)}); }

// --- formulas ---------------------------------------------------------------

bool operator==(const Formula& a, const Formula& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, TrueF> || std::is_same_v<T, FalseF>) {
          return true;
        } else if constexpr (std::is_same_v<T, Cmp>) {
          return x.op == y.op && x.lhs == y.lhs && x.rhs == y.rhs;
        } else if constexpr (std::is_same_v<T, Not>) {
          return x.body == y.body;
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          return x.parts == y.parts;
        } else if constexpr (std::is_same_v<T, Implies>) {
          return x.lhs == y.lhs && x.rhs == y.rhs;
        } else {
          return x.vars == y.vars && x.body == y.body;
        }
      },
      a.node);
}

Formula f_true() { return Formula{TrueF{}}; }
Formula f_false() { return Formula{FalseF{}}; }
Formula cmp(Expr lhs, CmpOp op, Expr rhs) { return Formula{Cmp{std::move(lhs), op, std::move(rhs)}}; }
Formula f_eq(Expr lhs, Expr rhs) { return cmp(std::move(lhs), CmpOp::eq, std::move(rhs)); }
Formula f_not(Formula f) { return Formula{Not{boxed<Formula>(std::move(f))}}; }

Formula f_and(std::vector<Formula> fs) {
  if (fs.size() == 1) return fs.front();
  return Formula{And{std::move(fs)}};
}

Formula f_or(std::vector<Formula> fs) {
  if (fs.size() == 1) return fs.front();
  return Formula{Or{std::move(fs)}};
}

Formula f_implies(Formula lhs, Formula rhs) {
  return Formula{Implies{boxed<Formula>(std::move(lhs)), boxed<Formula>(std::move(rhs))}};
}

Formula f_exists(std::vector<std::string> vars, Formula body) {
  if (vars.empty()) return body;
  return Formula{Exists{std::move(vars), boxed<Formula>(std::move(body))}};
}

Formula f_forall(std::vector<std::string> vars, Formula body) {
  if (vars.empty()) return body;
  return Formula{Forall{std::move(vars), boxed<Formula>(std::move(body))}};
}

// --- history formulas -------------------------------------------------------

bool operator==(const HistoryFormula& a, const HistoryFormula& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, LenCmp>) {
          return x.op == y.op && x.bound == y.bound;
        } else if constexpr (std::is_same_v<T, Ceil>) {
          return x.state == y.state;
        } else if constexpr (std::is_same_v<T, Chop>) {
          return x.lhs == y.lhs && x.rhs == y.rhs;
        } else if constexpr (std::is_same_v<T, NotH>) {
          return x.body == y.body;
        } else if constexpr (std::is_same_v<T, OrH> || std::is_same_v<T, AndH>) {
          return x.parts == y.parts;
        } else {
          return true;
        }
      },
      a.node);
}

HistoryFormula len_lt(double bound) {
  if (bound < 0) fail(Errc::unsupported_formula, "negative length bound");
  return HistoryFormula{LenCmp{LenOp::lt, bound}};
}

HistoryFormula len_eq(double bound) {
  if (bound < 0) fail(Errc::unsupported_formula, "negative length bound");
  return HistoryFormula{LenCmp{LenOp::eq, bound}};
}

HistoryFormula ceil_of(Formula state) { return HistoryFormula{Ceil{std::move(state)}}; }

HistoryFormula ceil_le(Formula state) { return h_or({ceil_of(std::move(state)), len_eq(0)}); }

HistoryFormula chop(HistoryFormula lhs, HistoryFormula rhs) {
  return HistoryFormula{
      Chop{boxed<HistoryFormula>(std::move(lhs)), boxed<HistoryFormula>(std::move(rhs))}};
}

HistoryFormula h_not(HistoryFormula f) {
  return HistoryFormula{NotH{boxed<HistoryFormula>(std::move(f))}};
}

HistoryFormula h_or(std::vector<HistoryFormula> fs) {
  if (fs.size() == 1) return fs.front();
  return HistoryFormula{OrH{std::move(fs)}};
}

HistoryFormula h_and(std::vector<HistoryFormula> fs) {
  if (fs.size() == 1) return fs.front();
  return HistoryFormula{AndH{std::move(fs)}};
}

HistoryFormula h_true() { return HistoryFormula{TrueH{}}; }

// --- binders ----------------------------------------------------------------

bool operator==(const QualityPredicate& a, const QualityPredicate& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, QAtom>) {
          return x.index == y.index;
        } else if constexpr (std::is_same_v<T, QAnd> || std::is_same_v<T, QOr>) {
          return x.parts == y.parts;
        } else {
          return true;
        }
      },
      a.node);
}

QualityPredicate q_atom(int index) { return QualityPredicate{QAtom{index}}; }
QualityPredicate q_and(std::vector<QualityPredicate> parts) {
  return QualityPredicate{QAnd{std::move(parts)}};
}
QualityPredicate q_or(std::vector<QualityPredicate> parts) {
  return QualityPredicate{QOr{std::move(parts)}};
}
QualityPredicate q_exists() { return QualityPredicate{QExists{}}; }
QualityPredicate q_forall() { return QualityPredicate{QForall{}}; }

bool operator==(const Binder& a, const Binder& b) {
  if (a.label_before != b.label_before || a.label_after != b.label_after) return false;
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, BInput>) {
          return x.chan == y.chan && x.var == y.var && x.ack == y.ack;
        } else if constexpr (std::is_same_v<T, BOutput>) {
          return x.chan == y.chan && x.value == y.value && x.ack == y.ack;
        } else if constexpr (std::is_same_v<T, BCompound>) {
          return x.pred == y.pred && x.subs == y.subs;
        } else {
          return true;
        }
      },
      a.node);
}

Binder b_in(std::string chan, std::string var, std::string ack) {
  return Binder{BInput{std::move(chan), std::move(var), std::move(ack)}, {}, {}};
}
Binder b_out(std::string chan, Expr value, std::string ack) {
  return Binder{BOutput{std::move(chan), std::move(value), std::move(ack)}, {}, {}};
}
Binder b_compound(QualityPredicate pred, std::vector<Binder> subs) {
  return Binder{BCompound{std::move(pred), std::move(subs)}, {}, {}};
}
Binder b_done() { return Binder{BDone{}, {}, {}}; }

// --- processes ---------------------------------------------------------------

bool operator==(const OdeSpec& a, const OdeSpec& b) { return a.var == b.var && a.rhs == b.rhs; }

bool operator==(const Continuous& a, const Continuous& b) {
  // Site ids are bookkeeping, not structure.
  return a.odes == b.odes && a.domain == b.domain && a.invariant == b.invariant;
}

bool operator==(const StarInv& a, const StarInv& b) { return a.inv == b.inv && a.hist == b.hist; }

bool operator==(const Process& a, const Process& b) {
  if (a.label_before != b.label_before || a.label_after != b.label_after) return false;
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Skip> || std::is_same_v<T, Epsilon>) {
          return true;
        } else if constexpr (std::is_same_v<T, Assign>) {
          return x.var == y.var && x.value == y.value;
        } else if constexpr (std::is_same_v<T, NondetAssign>) {
          return x.var == y.var && x.lo == y.lo && x.hi == y.hi;
        } else if constexpr (std::is_same_v<T, Bind>) {
          return x.binder == y.binder;
        } else if constexpr (std::is_same_v<T, Continuous>) {
          return x == y;
        } else if constexpr (std::is_same_v<T, Interrupt>) {
          return x.cont == y.cont && x.binder == y.binder && x.handler == y.handler;
        } else if constexpr (std::is_same_v<T, Parallel>) {
          return x.left == y.left && x.right == y.right;
        } else if constexpr (std::is_same_v<T, Seq>) {
          return x.first == y.first && x.second == y.second;
        } else if constexpr (std::is_same_v<T, Guard>) {
          return x.cond == y.cond && x.body == y.body;
        } else if constexpr (std::is_same_v<T, Star>) {
          return x.body == y.body && x.invariant == y.invariant;
        } else {
          return x.target == y.target;
        }
      },
      a.node);
}

Process p_skip() { return Process{Skip{}, {}, {}}; }
Process p_assign(std::string var, Expr value) {
  return Process{Assign{std::move(var), std::move(value)}, {}, {}};
}
Process p_nondet(std::string var, Expr lo, Expr hi) {
  return Process{NondetAssign{std::move(var), std::move(lo), std::move(hi)}, {}, {}};
}
Process p_bind(Binder binder) { return Process{Bind{std::move(binder)}, {}, {}}; }
Process p_continuous(std::vector<OdeSpec> odes, Formula domain, std::optional<Formula> invariant) {
  return Process{Continuous{std::move(odes), std::move(domain), std::move(invariant), -1}, {}, {}};
}
Process p_interrupt(Continuous cont, Binder binder, Process handler) {
  return Process{Interrupt{std::move(cont), std::move(binder), boxed<Process>(std::move(handler))},
                 {},
                 {}};
}
Process p_seq(Process first, Process second) {
  return Process{Seq{boxed<Process>(std::move(first)), boxed<Process>(std::move(second))}, {}, {}};
}
Process p_guard(Formula cond, Process body) {
  return Process{Guard{std::move(cond), boxed<Process>(std::move(body))}, {}, {}};
}
Process p_star(Process body, std::optional<StarInv> invariant) {
  return Process{Star{boxed<Process>(std::move(body)), std::move(invariant), -1}, {}, {}};
}
Process p_cut(Formula target) { return Process{Cut{std::move(target)}, {}, {}}; }
Process p_epsilon() { return Process{Epsilon{}, {}, {}}; }

Process with_label_before(Process p, int label) {
  p.label_before = label;
  return p;
}
Process with_label_after(Process p, int label) {
  p.label_after = label;
  return p;
}

Process number_sites(const Process& p, int& next) {
  Process out = p;
  std::visit(
      [&](auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Continuous>) {
          x.site = next++;
        } else if constexpr (std::is_same_v<T, Interrupt>) {
          x.cont.site = next++;
          x.handler = boxed<Process>(number_sites(*x.handler, next));
        } else if constexpr (std::is_same_v<T, Parallel>) {
          x.left = boxed<Process>(number_sites(*x.left, next));
          x.right = boxed<Process>(number_sites(*x.right, next));
        } else if constexpr (std::is_same_v<T, Seq>) {
          x.first = boxed<Process>(number_sites(*x.first, next));
          x.second = boxed<Process>(number_sites(*x.second, next));
        } else if constexpr (std::is_same_v<T, Guard>) {
          x.body = boxed<Process>(number_sites(*x.body, next));
        } else if constexpr (std::is_same_v<T, Star>) {
          x.site = next++;
          x.body = boxed<Process>(number_sites(*x.body, next));
        }
      },
      out.node);
  return out;
}

}  // namespace hcspb
