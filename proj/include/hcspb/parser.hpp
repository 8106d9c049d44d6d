#pragma once

#include <string>
#include <variant>

#include "hcspb/model.hpp"

namespace hcspb {

// Parses a model file: declarations, macro definitions, process definitions
// and specifications. Names are resolved, macros and `wait` are desugared,
// labels are checked for uniqueness per definition.
SourceModel parse_model(const std::string& text);

// Parses a standalone assertion: a first-order state formula or a history
// formula. Throws MixedLevelError if state and history levels are mixed.
std::variant<Formula, HistoryFormula> parse_assertion(const std::string& text);

// Parses a formula using a model's constants (and ack variables) as context.
Formula parse_formula(const std::string& text, const SourceModel* context = nullptr);

// Parses a process expression in the context of an existing model's
// declarations (used by tests and tools).
Process parse_process_in(const SourceModel& context, const std::string& text);

}  // namespace hcspb
