#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hcspb/ast.hpp"
#include "hcspb/state.hpp"

namespace hcspb {

struct VarDecl {
  std::string name;
  double lo = -1e3;
  double hi = 1e3;
  double init = 0.0;
};

struct SpecDecl {
  std::string name;
  Formula pre;
  std::string process;
  Formula post;
  HistoryFormula hist;
};

// Named formula macro, expanded at use sites.
struct FormulaDef {
  std::string name;
  std::vector<std::string> params;
  Formula body;
};

// A parsed model: declarations, expanded process definitions and
// specifications. Formula/process macros are expanded during parsing.
struct SourceModel {
  std::vector<std::pair<std::string, double>> constants;  // declaration order
  std::vector<std::string> channels;
  std::vector<VarDecl> vars;       // data variables
  std::vector<std::string> acks;   // collected acknowledgement variables
  std::vector<std::pair<std::string, Process>> procs;  // definition order
  std::vector<SpecDecl> specs;
  std::vector<FormulaDef> defs;

  const Process& proc(const std::string& name) const;
  bool has_proc(const std::string& name) const;
  const SpecDecl& spec(const std::string& name) const;

  std::set<std::string> ack_set() const { return {acks.begin(), acks.end()}; }
  std::optional<VarDecl> var_decl(const std::string& name) const;

  // Total initial state over the model's variables: declared inits for data
  // variables, 0 for acknowledgement variables, now = 0.
  State initial_state() const;
};

}  // namespace hcspb
