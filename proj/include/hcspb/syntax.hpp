#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hcspb/ast.hpp"

namespace hcspb {

// Variables that may be modified by a binder: bound input variables plus the
// acknowledgement variable of every input/output, in traversal order.
std::vector<std::string> mv(const Binder& b);
std::set<std::string> mv_set(const Binder& b);

// The acknowledgement typing judgement b > phi. Defined on source binders
// only; throws DoneInType if b contains a terminal form.
Formula ack_type(const Binder& b);

// Truth of a quality predicate over an intermediate tuple of sub-binders:
// an atom is true when its sub-binder has completed.
bool quality_eval(const QualityPredicate& q, const std::vector<Binder>& subs);

// A binder counts as complete when it is the terminal form, or a compound
// whose own predicate is satisfied.
bool binder_complete(const Binder& b);

bool binder_contains_done(const Binder& b);

// Expands the exists/forall abbreviations into explicit disjunction/conjunction
// over all atoms; other predicates are returned unchanged (recursively).
QualityPredicate normalize_quality(const QualityPredicate& q, int arity);
Binder normalize_binder(const Binder& b);

// All data and acknowledgement variables occurring in an expression, formula,
// binder or process.
void collect_vars(const Expr& e, std::set<std::string>& out);
void collect_vars(const Formula& f, std::set<std::string>& out);  // free vars only
std::set<std::string> vars_of(const Expr& e);
std::set<std::string> free_vars(const Formula& f);
std::set<std::string> free_vars(const Process& p);
std::set<std::string> free_vars(const Binder& b);

// Acknowledgement variables syntactically present in a binder or process.
std::set<std::string> ack_vars(const Binder& b);
std::set<std::string> ack_vars(const Process& p);

// Channels with direction. dir=false: input, dir=true: output.
using ChanDir = std::pair<std::string, bool>;
std::set<ChanDir> channel_dirs(const Binder& b);
std::set<ChanDir> channel_dirs(const Process& p);
std::set<std::string> channels_of(const Process& p);

// Throws SharedVarInParallel when branches share a variable or a channel
// direction.
void validate_parallel(const Process& left, const Process& right);
Process p_parallel(Process left, Process right);

// Label queries.
bool contains_label(const Process& p, int label);
std::vector<int> collect_labels(const Process& p);

}  // namespace hcspb
