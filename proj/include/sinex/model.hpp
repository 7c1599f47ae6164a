#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sinex/expression.hpp"

namespace sinex {

enum class ParamKind { variable, constant };
enum class Dynamics { any, constant };

// kind and dynamics are both stored because SX carries both attributes;
// validation enforces kind==variable <=> dynamics==any.
struct ParamDecl {
  std::string name;
  ParamKind kind = ParamKind::variable;
  bool controlled = true;
  bool local = false;
  Dynamics dynamics = Dynamics::any;

  friend bool operator==(const ParamDecl&, const ParamDecl&) = default;
};

ParamDecl variable_param(std::string name, bool controlled, bool local);
ParamDecl constant_param(std::string name, bool controlled, bool local);

struct FlowEntry {
  std::string var;
  ExprPtr rhs;
};

bool operator==(const FlowEntry& a, const FlowEntry& b);

// Never instantiated here; the list exists so the SX subset can grow
// without a schema change. Validators reject non-empty transition lists.
struct Transition {
  friend bool operator==(const Transition&, const Transition&) = default;
};

struct Location {
  int id = 1;
  std::string name;
  std::vector<FlowEntry> flow;
  ExprPtr invariant;  // always null in generated models
};

bool operator==(const Location& a, const Location& b);

struct BaseComponent {
  std::string id;
  std::vector<ParamDecl> params;
  std::vector<Location> locations;
  std::vector<Transition> transitions;

  const ParamDecl* find_param(const std::string& name) const;
};

bool operator==(const BaseComponent& a, const BaseComponent& b);

// actual is restricted to an atom: identifier, literal, or negated literal.
struct BindMapEntry {
  std::string key;
  ExprPtr actual;
};

bool operator==(const BindMapEntry& a, const BindMapEntry& b);

bool actual_is_numeric(const ExprPtr& actual);
bool actual_is_identifier(const ExprPtr& actual);

struct Bind {
  std::string component;
  std::string alias;
  std::vector<BindMapEntry> map;
};

bool operator==(const Bind& a, const Bind& b);

struct NetworkComponent {
  std::string id;
  std::vector<ParamDecl> params;
  std::vector<Bind> binds;
};

bool operator==(const NetworkComponent& a, const NetworkComponent& b);

struct Model {
  std::vector<BaseComponent> components;
  std::optional<NetworkComponent> network;

  const BaseComponent* find_component(const std::string& id) const;
};

bool operator==(const Model& a, const Model& b);

enum class Severity { error, warning };

struct Issue {
  Severity severity = Severity::error;
  std::string path;
  std::string message;

  friend bool operator==(const Issue&, const Issue&) = default;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Issue> issues;

  void add_error(std::string path, std::string message);
  void add_warning(std::string path, std::string message);
  void merge(const ValidationReport& other);
  std::size_t error_count() const;

  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

ValidationReport validate_component(const BaseComponent& c);
ValidationReport validate_model(const Model& m);

}  // namespace sinex
