#pragma once

#include "hcspb/ast.hpp"
#include "hcspb/state.hpp"
#include "hcspb/syntax.hpp"

namespace hcspb {

// Arithmetic evaluation of an expression under a state.
double eval_expr(const State& sigma, const Expr& e);

// rec: sets the acknowledgement variable of every incomplete input/output in
// the (recursively flattened) list to 0. Completed entries are skipped.
State rec_binders(const std::vector<Binder>& subs, const State& sigma);
State rec_binder(const Binder& b, const State& sigma);

// First-order evaluation over a state. Comparisons on data variables use the
// slack eps (eps = 0 gives exact floating-point comparison). Quantified
// formulas are not ground and are rejected.
bool fol_eval(const State& sigma, const Formula& f, double eps = 1e-9);

bool cmp_holds(double lhs, CmpOp op, double rhs, double eps);

}  // namespace hcspb
