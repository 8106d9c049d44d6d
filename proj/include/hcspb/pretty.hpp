#pragma once

#include <string>

#include "hcspb/ast.hpp"
#include "hcspb/model.hpp"

namespace hcspb {

// Deterministic rendering; parsing the result reproduces the AST.
std::string pretty_print(const Expr& e);
std::string pretty_print(const Formula& f);
std::string pretty_print(const HistoryFormula& f);
std::string pretty_print(const Binder& b);
std::string pretty_print(const Process& p);
std::string pretty_print(const SourceModel& m);

std::string format_double(double v);  // shortest round-trip form

}  // namespace hcspb
