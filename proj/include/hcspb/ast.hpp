#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hcspb/errors.hpp"

namespace hcspb {

// Copyable heap box with value semantics; comparisons are deep.
// All AST values are immutable after construction, so sharing is safe.
template <typename T>
class boxed {
 public:
  boxed(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}
  const T& get() const { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  friend bool operator==(const boxed& a, const boxed& b) {
    return a.ptr_ == b.ptr_ || *a.ptr_ == *b.ptr_;
  }
  friend bool operator!=(const boxed& a, const boxed& b) { return !(a == b); }

 private:
  std::shared_ptr<const T> ptr_;
};

// ---------------------------------------------------------------------------
// Expressions: constants, variables and the fixed arithmetic signature.

enum class Fn { add, sub, mul, div, neg };

int fn_arity(Fn fn);
const char* fn_name(Fn fn);

struct Expr;

struct Const {
  double value;
};
struct Var {
  std::string name;
};
struct Apply {
  Fn fn;
  std::vector<Expr> args;
};

struct Expr {
  std::variant<Const, Var, Apply> node;
};

bool operator==(const Expr& a, const Expr& b);
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

Expr num(double value);
Expr var(const std::string& name);
Expr apply(Fn fn, std::vector<Expr> args);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr divide(Expr a, Expr b);
Expr neg(Expr a);

// ---------------------------------------------------------------------------
// First-order state formulas.

enum class CmpOp { lt, le, eq, ge, gt };

const char* cmp_name(CmpOp op);

struct Formula;

struct TrueF {};
struct FalseF {};
struct Cmp {
  Expr lhs;
  CmpOp op;
  Expr rhs;
};
struct Not {
  boxed<Formula> body;
};
struct And {
  std::vector<Formula> parts;
};
struct Or {
  std::vector<Formula> parts;
};
struct Implies {
  boxed<Formula> lhs;
  boxed<Formula> rhs;
};
struct Exists {
  std::vector<std::string> vars;
  boxed<Formula> body;
};
struct Forall {
  std::vector<std::string> vars;
  boxed<Formula> body;
};

struct Formula {
  std::variant<TrueF, FalseF, Cmp, Not, And, Or, Implies, Exists, Forall> node;
};

bool operator==(const Formula& a, const Formula& b);
inline bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

Formula f_true();
Formula f_false();
Formula cmp(Expr lhs, CmpOp op, Expr rhs);
Formula f_eq(Expr lhs, Expr rhs);
Formula f_not(Formula f);
Formula f_and(std::vector<Formula> fs);
Formula f_or(std::vector<Formula> fs);
Formula f_implies(Formula lhs, Formula rhs);
Formula f_exists(std::vector<std::string> vars, Formula body);
Formula f_forall(std::vector<std::string> vars, Formula body);

// ---------------------------------------------------------------------------
// History formulas (duration-calculus subset).

enum class LenOp { lt, eq };

struct HistoryFormula;

struct LenCmp {
  LenOp op;
  double bound;  // non-negative
};
struct Ceil {
  Formula state;
};
struct Chop {
  boxed<HistoryFormula> lhs;
  boxed<HistoryFormula> rhs;
};
struct NotH {
  boxed<HistoryFormula> body;
};
struct OrH {
  std::vector<HistoryFormula> parts;
};
struct AndH {
  std::vector<HistoryFormula> parts;
};
struct TrueH {};

struct HistoryFormula {
  std::variant<LenCmp, Ceil, Chop, NotH, OrH, AndH, TrueH> node;
};

bool operator==(const HistoryFormula& a, const HistoryFormula& b);
inline bool operator!=(const HistoryFormula& a, const HistoryFormula& b) { return !(a == b); }

HistoryFormula len_lt(double bound);
HistoryFormula len_eq(double bound);
HistoryFormula ceil_of(Formula state);
HistoryFormula ceil_le(Formula state);  // ceil(S) | len = 0
HistoryFormula chop(HistoryFormula lhs, HistoryFormula rhs);
HistoryFormula h_not(HistoryFormula f);
HistoryFormula h_or(std::vector<HistoryFormula> fs);
HistoryFormula h_and(std::vector<HistoryFormula> fs);
HistoryFormula h_true();

// ---------------------------------------------------------------------------
// Binders and quality predicates.

struct QualityPredicate;

struct QAtom {
  int index;  // position of the sub-binder, 0-based
};
struct QAnd {
  std::vector<QualityPredicate> parts;
};
struct QOr {
  std::vector<QualityPredicate> parts;
};
struct QExists {};
struct QForall {};

struct QualityPredicate {
  std::variant<QAtom, QAnd, QOr, QExists, QForall> node;
};

bool operator==(const QualityPredicate& a, const QualityPredicate& b);
inline bool operator!=(const QualityPredicate& a, const QualityPredicate& b) { return !(a == b); }

QualityPredicate q_atom(int index);
QualityPredicate q_and(std::vector<QualityPredicate> parts);
QualityPredicate q_or(std::vector<QualityPredicate> parts);
QualityPredicate q_exists();
QualityPredicate q_forall();

struct Binder;

struct BInput {
  std::string chan;
  std::string var;
  std::string ack;
};
struct BOutput {
  std::string chan;
  Expr value;
  std::string ack;
};
struct BCompound {
  QualityPredicate pred;
  std::vector<Binder> subs;
};
struct BDone {};  // the terminal form arising during execution

struct Binder {
  std::variant<BInput, BOutput, BCompound, BDone> node;
  std::optional<int> label_before;
  std::optional<int> label_after;
};

bool operator==(const Binder& a, const Binder& b);
inline bool operator!=(const Binder& a, const Binder& b) { return !(a == b); }

Binder b_in(std::string chan, std::string var, std::string ack);
Binder b_out(std::string chan, Expr value, std::string ack);
Binder b_compound(QualityPredicate pred, std::vector<Binder> subs);
Binder b_done();

// ---------------------------------------------------------------------------
// Processes.

struct Process;

struct Skip {};
struct Assign {
  std::string var;
  Expr value;
};
// x := *[lo, hi]; the scheduler draws the value.
struct NondetAssign {
  std::string var;
  Expr lo;
  Expr hi;
};
struct Bind {
  Binder binder;
};
struct OdeSpec {
  std::string var;
  Expr rhs;
};
struct Continuous {
  std::vector<OdeSpec> odes;
  Formula domain;
  std::optional<Formula> invariant;  // inline annotation
  int site = -1;
};
struct Interrupt {
  Continuous cont;
  Binder binder;
  boxed<Process> handler;
};
struct Parallel {
  boxed<Process> left;
  boxed<Process> right;
};
struct Seq {
  boxed<Process> first;
  boxed<Process> second;
};
struct Guard {
  Formula cond;
  boxed<Process> body;
};
struct StarInv {
  Formula inv;
  HistoryFormula hist;
};
struct Star {
  boxed<Process> body;
  std::optional<StarInv> invariant;  // inline annotation
  int site = -1;
};
// Consequence cut point: the generator emits pre => target and continues from target.
struct Cut {
  Formula target;
};
struct Epsilon {};  // terminal form, execution only

struct Process {
  std::variant<Skip, Assign, NondetAssign, Bind, Continuous, Interrupt, Parallel, Seq, Guard,
               Star, Cut, Epsilon>
      node;
  std::optional<int> label_before;
  std::optional<int> label_after;
};

bool operator==(const Process& a, const Process& b);
inline bool operator!=(const Process& a, const Process& b) { return !(a == b); }
bool operator==(const Continuous& a, const Continuous& b);
bool operator==(const OdeSpec& a, const OdeSpec& b);
bool operator==(const StarInv& a, const StarInv& b);

Process p_skip();
Process p_assign(std::string var, Expr value);
Process p_nondet(std::string var, Expr lo, Expr hi);
Process p_bind(Binder binder);
Process p_continuous(std::vector<OdeSpec> odes, Formula domain,
                     std::optional<Formula> invariant = std::nullopt);
Process p_interrupt(Continuous cont, Binder binder, Process handler);
Process p_parallel(Process left, Process right);  // validates the no-sharing restriction
Process p_seq(Process first, Process second);
Process p_guard(Formula cond, Process body);
Process p_star(Process body, std::optional<StarInv> invariant = std::nullopt);
Process p_cut(Formula target);
Process p_epsilon();
Process with_label_before(Process p, int label);
Process with_label_after(Process p, int label);

inline bool is_epsilon(const Process& p) { return std::holds_alternative<Epsilon>(p.node); }
inline bool is_done(const Binder& b) { return std::holds_alternative<BDone>(b.node); }

// Assigns fresh pre-order site ids to Continuous and Star nodes.
Process number_sites(const Process& p, int& next);

}  // namespace hcspb
